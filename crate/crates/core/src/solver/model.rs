//! The 0-1 program for one candidate graph.
//!
//! Variables: `y_v` per vertex, `z_e` per edge. Objective:
//! `vw · Σ ω_v y_v + ew · Σ ω_e z_e`. Constraint families, in emission order:
//!
//! 1. root: `y_0 = 1`
//! 2. chaining, per vertex: `y_v - Σ_{u ∈ N(v)} y_u ≤ 0`
//! 3. edge coupling, per edge: `z_e - y_u ≤ 0`, `z_e - y_v ≤ 0`,
//!    `z_e - y_u - y_v ≥ -1`
//! 4. abstract limit: `Σ_{v abstract} y_v ≤ K`
//! 5. grounding neighbor, per grounding vertex `g`:
//!    `Σ_{u ∈ N(g), u abstract or root} y_u - 2 y_g ≥ 0`
//!
//! Family 5 is `Σ y_u - 2 ≥ -2(1 - y_g)` with the constant moved across.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::ablation::AblationFlags;
use crate::graph::{CandidateGraph, NodeRole};

pub const DEFAULT_ABSTRACT_LIMIT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    Y(usize),
    Z(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintFamily {
    Root,
    Chaining,
    EdgeCoupling,
    AbstractLimit,
    GroundingNeighbor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub family: ConstraintFamily,
    pub terms: Vec<(Var, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn activity(&self, y: &[bool], z: &[bool]) -> f64 {
        self.terms
            .iter()
            .map(|(var, c)| {
                let on = match *var {
                    Var::Y(i) => y[i],
                    Var::Z(i) => z[i],
                };
                if on {
                    *c
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn is_satisfied(&self, y: &[bool], z: &[bool]) -> bool {
        let a = self.activity(y, z);
        match self.sense {
            Sense::Le => a <= self.rhs,
            Sense::Ge => a >= self.rhs,
            Sense::Eq => a == self.rhs,
        }
    }
}

/// Which constraint families are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveFamilies {
    pub root: bool,
    pub chaining: bool,
    pub edge_coupling: bool,
    pub abstract_limit: bool,
    pub grounding_neighbor: bool,
}

impl ActiveFamilies {
    pub fn from_ablation(flags: &AblationFlags) -> Self {
        ActiveFamilies {
            root: !flags.no_chaining,
            chaining: !flags.no_chaining,
            edge_coupling: !flags.no_chaining,
            abstract_limit: true,
            grounding_neighbor: !flags.no_grounding_neighbor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlpModel {
    pub roles: Vec<NodeRole>,
    /// Edge endpoints, indexed like `z` variables.
    pub edges: Vec<(usize, usize)>,
    /// Unscaled node and edge weights `ω_v`, `ω_e`.
    pub node_weights: Vec<f64>,
    pub edge_weights: Vec<f64>,
    pub vw: f64,
    pub ew: f64,
    pub abstract_limit: usize,
    pub families: ActiveFamilies,
    pub constraints: Vec<LinearConstraint>,
}

pub fn emit_constraints(graph: &CandidateGraph, abstract_limit: usize, ablation: &AblationFlags) -> IlpModel {
    let families = ActiveFamilies::from_ablation(ablation);
    let roles: Vec<NodeRole> = graph.nodes.iter().map(|n| n.role).collect();
    let edges: Vec<(usize, usize)> = graph.edges.iter().map(|e| (e.u, e.v)).collect();
    let adj = graph.neighbors();
    let mut constraints = Vec::new();

    if families.root {
        constraints.push(LinearConstraint {
            family: ConstraintFamily::Root,
            terms: vec![(Var::Y(0), 1.0)],
            sense: Sense::Eq,
            rhs: 1.0,
        });
    }
    if families.chaining {
        for (v, nbrs) in adj.iter().enumerate() {
            let mut terms = vec![(Var::Y(v), 1.0)];
            terms.extend(nbrs.iter().map(|&u| (Var::Y(u), -1.0)));
            constraints.push(LinearConstraint {
                family: ConstraintFamily::Chaining,
                terms,
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }
    if families.edge_coupling {
        for (e, &(u, v)) in edges.iter().enumerate() {
            for end in [u, v] {
                constraints.push(LinearConstraint {
                    family: ConstraintFamily::EdgeCoupling,
                    terms: vec![(Var::Z(e), 1.0), (Var::Y(end), -1.0)],
                    sense: Sense::Le,
                    rhs: 0.0,
                });
            }
            constraints.push(LinearConstraint {
                family: ConstraintFamily::EdgeCoupling,
                terms: vec![(Var::Z(e), 1.0), (Var::Y(u), -1.0), (Var::Y(v), -1.0)],
                sense: Sense::Ge,
                rhs: -1.0,
            });
        }
    }
    if families.abstract_limit {
        let terms = roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == NodeRole::Abstract)
            .map(|(v, _)| (Var::Y(v), 1.0))
            .collect();
        constraints.push(LinearConstraint {
            family: ConstraintFamily::AbstractLimit,
            terms,
            sense: Sense::Le,
            rhs: abstract_limit as f64,
        });
    }
    if families.grounding_neighbor {
        for (g, role) in roles.iter().enumerate() {
            if *role != NodeRole::Grounding {
                continue;
            }
            let mut terms: Vec<(Var, f64)> = adj[g]
                .iter()
                .filter(|&&u| matches!(roles[u], NodeRole::Abstract | NodeRole::Question))
                .map(|&u| (Var::Y(u), 1.0))
                .collect();
            terms.push((Var::Y(g), -2.0));
            constraints.push(LinearConstraint {
                family: ConstraintFamily::GroundingNeighbor,
                terms,
                sense: Sense::Ge,
                rhs: 0.0,
            });
        }
    }

    IlpModel {
        roles,
        edges,
        node_weights: graph.nodes.iter().map(|n| n.weight).collect(),
        edge_weights: graph.edges.iter().map(|e| e.weight).collect(),
        vw: graph.theta.vw,
        ew: graph.theta.ew,
        abstract_limit,
        families,
        constraints,
    }
}

impl IlpModel {
    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.roles.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// `vw · Σ ω_v y_v + ew · Σ ω_e z_e`, with each sum taken in index order.
    pub fn objective(&self, y: &[bool], z: &[bool]) -> f64 {
        let nodes: f64 = self
            .node_weights
            .iter()
            .zip(y)
            .filter(|(_, on)| **on)
            .map(|(w, _)| w)
            .sum();
        let edges: f64 = self
            .edge_weights
            .iter()
            .zip(z)
            .filter(|(_, on)| **on)
            .map(|(w, _)| w)
            .sum();
        self.vw * nodes + self.ew * edges
    }

    /// Indices of constraints violated by `(y, z)`.
    pub fn violations(&self, y: &[bool], z: &[bool]) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_satisfied(y, z))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count_family(&self, family: ConstraintFamily) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    /// Human-readable LP-format dump.
    pub fn to_lp_string(&self) -> String {
        self.to_string()
    }
}

fn var_name(var: Var, edges: &[(usize, usize)]) -> String {
    match var {
        Var::Y(v) => format!("y{v}"),
        Var::Z(e) => format!("z{}_{}", edges[e].0, edges[e].1),
    }
}

fn write_expr(out: &mut String, terms: &[(Var, f64)], edges: &[(usize, usize)]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (i, (var, c)) in terms.iter().enumerate() {
        out.push(' ');
        if *c < 0.0 {
            out.push_str("- ");
        } else if i > 0 {
            out.push_str("+ ");
        }
        let mag = c.abs();
        if mag != 1.0 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(&var_name(*var, edges));
    }
}

impl fmt::Display for IlpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        out.push_str("Maximize\n obj:");
        let mut obj: Vec<(Var, f64)> = Vec::new();
        for (v, w) in self.node_weights.iter().enumerate() {
            if *w != 0.0 && self.vw != 0.0 {
                obj.push((Var::Y(v), self.vw * w));
            }
        }
        for (e, w) in self.edge_weights.iter().enumerate() {
            if *w != 0.0 && self.ew != 0.0 {
                obj.push((Var::Z(e), self.ew * w));
            }
        }
        write_expr(&mut out, &obj, &self.edges);
        out.push_str("\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{i}_{:?}:", c.family);
            write_expr(&mut out, &c.terms, &self.edges);
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(out, " {op} {}", c.rhs);
        }
        out.push_str("Binary\n");
        for v in 0..self.roles.len() {
            let _ = writeln!(out, " {}", var_name(Var::Y(v), &self.edges));
        }
        for e in 0..self.edges.len() {
            let _ = writeln!(out, " {}", var_name(Var::Z(e), &self.edges));
        }
        out.push_str("End\n");
        f.write_str(&out)
    }
}
