//! Depth-first implicit enumeration over the vertex variables.
//!
//! Edge variables are never branched on. With edge coupling active each `z_e`
//! equals `y_u ∧ y_v`; without it, `z_e` appears in no constraint and is set
//! to 1 exactly when its objective coefficient is positive.
//!
//! Pruning uses local propagation (a selected vertex must keep a possibly
//! selected neighbor, a selected grounding vertex must keep two possibly
//! selected abstract/root neighbors, the abstract count stays within `K`) and
//! an optimistic bound: every open vertex contributes its positive marginal
//! gain against already selected vertices, and every edge between two open
//! vertices contributes its positive coefficient.

use std::collections::BTreeSet;

use super::model::IlpModel;
use super::{SolveStatus, SubgraphSolution};
use crate::graph::NodeRole;

const OPEN: i8 = -1;
const PRUNE_EPS: f64 = 1e-12;

struct Search<'m> {
    model: &'m IlpModel,
    coupled: bool,
    /// `(neighbor, ew·ω_e)` per vertex.
    adj: Vec<Vec<(usize, f64)>>,
    order: Vec<usize>,
    val: Vec<i8>,
    /// Neighbors not fixed to 0.
    live_nbrs: Vec<usize>,
    /// Abstract/root neighbors not fixed to 0 (grounding vertices only).
    live_support: Vec<usize>,
    /// Node coefficient plus coupled edge coefficients to selected vertices.
    gain: Vec<f64>,
    abstract_ones: usize,
    fixed_value: f64,
    open_edge_bound: f64,
    best_value: f64,
    best: Option<Vec<bool>>,
}

fn is_support(role: NodeRole) -> bool {
    matches!(role, NodeRole::Abstract | NodeRole::Question)
}

impl<'m> Search<'m> {
    fn new(model: &'m IlpModel) -> Self {
        let n = model.vertex_count();
        let coupled = model.families.edge_coupling;
        let mut adj = vec![Vec::new(); n];
        let mut open_edge_bound = 0.0;
        let mut fixed_value = 0.0;
        for (e, &(u, v)) in model.edges.iter().enumerate() {
            let b = model.ew * model.edge_weights[e];
            adj[u].push((v, b));
            adj[v].push((u, b));
            if coupled {
                open_edge_bound += b.max(0.0);
            } else {
                fixed_value += b.max(0.0);
            }
        }
        let node_coef: Vec<f64> = model.node_weights.iter().map(|w| model.vw * w).collect();
        let live_support = (0..n)
            .map(|v| adj[v].iter().filter(|(u, _)| is_support(model.roles[*u])).count())
            .collect();

        let by_gain = |role: NodeRole| {
            let mut vs: Vec<usize> = (0..n).filter(|&v| model.roles[v] == role).collect();
            vs.sort_by(|&a, &b| node_coef[b].total_cmp(&node_coef[a]).then(a.cmp(&b)));
            vs
        };
        let mut order = by_gain(NodeRole::Question);
        order.extend(by_gain(NodeRole::Abstract));
        order.extend(by_gain(NodeRole::Grounding));

        Search {
            model,
            coupled,
            live_nbrs: adj.iter().map(Vec::len).collect(),
            gain: node_coef.clone(),
            adj,
            order,
            val: vec![OPEN; n],
            live_support,
            abstract_ones: 0,
            fixed_value,
            open_edge_bound,
            best_value: f64::NEG_INFINITY,
            best: None,
        }
    }

    fn chaining(&self) -> bool {
        self.model.families.chaining
    }

    fn grounding_rule(&self) -> bool {
        self.model.families.grounding_neighbor
    }

    fn cap(&self) -> Option<usize> {
        self.model
            .families
            .abstract_limit
            .then_some(self.model.abstract_limit)
    }

    /// Whether `v` may still be set to 1 given the current partial assignment.
    fn may_select(&self, v: usize) -> bool {
        if self.chaining() && self.live_nbrs[v] == 0 {
            return false;
        }
        match self.model.roles[v] {
            NodeRole::Abstract => self.cap().is_none_or(|k| self.abstract_ones < k),
            NodeRole::Grounding => !self.grounding_rule() || self.live_support[v] >= 2,
            NodeRole::Question => true,
        }
    }

    /// Whether a selected vertex `v` still satisfies its local constraints.
    fn selected_ok(&self, v: usize) -> bool {
        if self.chaining() && self.live_nbrs[v] == 0 {
            return false;
        }
        if self.grounding_rule() && self.model.roles[v] == NodeRole::Grounding && self.live_support[v] < 2 {
            return false;
        }
        true
    }

    fn bound(&self) -> f64 {
        let mut b = self.fixed_value + self.open_edge_bound;
        for &v in &self.order {
            if self.val[v] == OPEN && self.may_select(v) {
                b += self.gain[v].max(0.0);
            }
        }
        b
    }

    fn release_open_edges(&mut self, v: usize) {
        if !self.coupled {
            return;
        }
        for &(u, b) in &self.adj[v] {
            if self.val[u] == OPEN {
                self.open_edge_bound -= b.max(0.0);
            }
        }
    }

    fn restore_open_edges(&mut self, v: usize) {
        if !self.coupled {
            return;
        }
        for &(u, b) in &self.adj[v] {
            if self.val[u] == OPEN {
                self.open_edge_bound += b.max(0.0);
            }
        }
    }

    /// Sets `v` to 1. Returns false if that breaks a local constraint; the
    /// assignment is applied either way and must be undone.
    fn select(&mut self, v: usize) -> bool {
        self.release_open_edges(v);
        self.val[v] = 1;
        self.fixed_value += self.gain[v];
        if self.coupled {
            for i in 0..self.adj[v].len() {
                let (u, b) = self.adj[v][i];
                self.gain[u] += b;
            }
        }
        if self.model.roles[v] == NodeRole::Abstract {
            self.abstract_ones += 1;
        }
        self.cap().is_none_or(|k| self.abstract_ones <= k) && self.selected_ok(v)
    }

    fn unselect(&mut self, v: usize) {
        if self.model.roles[v] == NodeRole::Abstract {
            self.abstract_ones -= 1;
        }
        if self.coupled {
            for i in 0..self.adj[v].len() {
                let (u, b) = self.adj[v][i];
                self.gain[u] -= b;
            }
        }
        self.fixed_value -= self.gain[v];
        self.val[v] = OPEN;
        self.restore_open_edges(v);
    }

    fn exclude(&mut self, v: usize) -> bool {
        self.release_open_edges(v);
        self.val[v] = 0;
        let support = is_support(self.model.roles[v]);
        let mut ok = true;
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i].0;
            self.live_nbrs[u] -= 1;
            if support {
                self.live_support[u] -= 1;
            }
            if self.val[u] == 1 && !self.selected_ok(u) {
                ok = false;
            }
        }
        ok
    }

    fn unexclude(&mut self, v: usize) {
        let support = is_support(self.model.roles[v]);
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i].0;
            self.live_nbrs[u] += 1;
            if support {
                self.live_support[u] += 1;
            }
        }
        self.val[v] = OPEN;
        self.restore_open_edges(v);
    }

    fn run(&mut self, depth: usize) {
        if self.bound() <= self.best_value + PRUNE_EPS && self.best.is_some() {
            return;
        }
        if depth == self.order.len() {
            if self.fixed_value > self.best_value || self.best.is_none() {
                self.best_value = self.fixed_value;
                self.best = Some(self.val.iter().map(|&x| x == 1).collect());
            }
            return;
        }
        let v = self.order[depth];
        let forced_root = v == 0 && self.model.families.root;
        let one_first = forced_root || self.gain[v] > 0.0;
        for take in [one_first, !one_first] {
            if take {
                if !self.may_select(v) {
                    continue;
                }
                if self.select(v) {
                    self.run(depth + 1);
                }
                self.unselect(v);
            } else {
                if forced_root {
                    continue;
                }
                if self.exclude(v) {
                    self.run(depth + 1);
                }
                self.unexclude(v);
            }
        }
    }
}

/// Solves the model exactly. Returns an optimal assignment or `Infeasible`.
pub fn solve(model: &IlpModel) -> SubgraphSolution {
    let mut search = Search::new(model);
    search.run(0);
    let Some(y) = search.best else {
        return SubgraphSolution::infeasible();
    };
    let z: Vec<bool> = model
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            if model.families.edge_coupling {
                y[u] && y[v]
            } else {
                model.ew * model.edge_weights[e] > 0.0
            }
        })
        .collect();
    debug_assert!(model.violations(&y, &z).is_empty(), "solver produced an infeasible assignment");
    SubgraphSolution {
        status: SolveStatus::Optimal,
        selected_vertices: y.iter().enumerate().filter(|(_, on)| **on).map(|(v, _)| v).collect::<BTreeSet<_>>(),
        selected_edges: model
            .edges
            .iter()
            .zip(&z)
            .filter(|(_, on)| **on)
            .map(|(e, _)| *e)
            .collect(),
        objective_value: Some(model.objective(&y, &z)),
    }
}
