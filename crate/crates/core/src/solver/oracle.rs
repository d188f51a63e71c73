//! Exhaustive reference solver. Works from the graph directly, not from the
//! emitted model, and checks each constraint family in its own terms.

use std::collections::BTreeSet;

use super::{SolveStatus, SubgraphSolution};
use crate::ablation::AblationFlags;
use crate::error::{Error, Result};
use crate::graph::{CandidateGraph, NodeRole};

pub const ORACLE_VERTEX_LIMIT: usize = 20;

/// Objective, selected vertices, selected edges.
type Best = (f64, Vec<usize>, Vec<(usize, usize)>);

/// Enumerates every vertex subset and returns the best feasible one. Among
/// equal objectives (within 1e-12) the lexicographically smallest sorted
/// vertex list wins.
pub fn brute_force_oracle(graph: &CandidateGraph, abstract_limit: usize, ablation: &AblationFlags) -> Result<SubgraphSolution> {
    let n = graph.vertex_count();
    if n > ORACLE_VERTEX_LIMIT {
        return Err(Error::OracleTooLarge {
            limit: ORACLE_VERTEX_LIMIT,
            actual: n,
        });
    }
    let chaining = !ablation.no_chaining;
    let grounding_rule = !ablation.no_grounding_neighbor;
    let adj = graph.neighbors();
    let theta = graph.theta;

    let mut best: Option<Best> = None;
    for mask in 0u32..(1u32 << n) {
        let on = |v: usize| mask & (1 << v) != 0;
        if chaining && !on(0) {
            continue;
        }
        let feasible = (0..n).filter(|&v| on(v)).all(|v| {
            if chaining && !adj[v].iter().any(|&u| on(u)) {
                return false;
            }
            if grounding_rule && graph.nodes[v].role == NodeRole::Grounding {
                let support = adj[v]
                    .iter()
                    .filter(|&&u| on(u) && graph.nodes[u].role != NodeRole::Grounding)
                    .count();
                if support < 2 {
                    return false;
                }
            }
            true
        });
        if !feasible {
            continue;
        }
        let abstract_count = (0..n)
            .filter(|&v| on(v) && graph.nodes[v].role == NodeRole::Abstract)
            .count();
        if abstract_count > abstract_limit {
            continue;
        }

        let vertices: Vec<usize> = (0..n).filter(|&v| on(v)).collect();
        let edges: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .filter(|e| {
                if chaining {
                    on(e.u) && on(e.v)
                } else {
                    theta.ew * e.weight > 0.0
                }
            })
            .map(|e| (e.u, e.v))
            .collect();
        let node_sum: f64 = vertices.iter().map(|&v| graph.nodes[v].weight).sum();
        let edge_sum: f64 = graph
            .edges
            .iter()
            .filter(|e| edges.binary_search(&(e.u, e.v)).is_ok())
            .map(|e| e.weight)
            .sum();
        let value = theta.vw * node_sum + theta.ew * edge_sum;

        let better = match &best {
            None => true,
            Some((b, bv, _)) => value > b + 1e-12 || ((value - b).abs() <= 1e-12 && vertices < *bv),
        };
        if better {
            best = Some((value, vertices, edges));
        }
    }

    Ok(match best {
        None => SubgraphSolution::infeasible(),
        Some((value, vertices, edges)) => SubgraphSolution {
            status: SolveStatus::Optimal,
            selected_vertices: vertices.into_iter().collect::<BTreeSet<_>>(),
            selected_edges: edges,
            objective_value: Some(value),
        },
    })
}
