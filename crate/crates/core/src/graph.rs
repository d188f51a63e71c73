//! Candidate graphs and their weight functions.
//!
//! One graph is built per (question, choice). Node 0 is the hypothesis
//! (`stem ‖ choice`), followed by the retrieved grounding facts and then the
//! retrieved abstract facts, each in retrieval order. Two nodes are joined
//! when their term sets overlap at all.
//!
//! Node weights: `gr·R` for grounding facts, `ar·R` for abstract facts, 0 for
//! the hypothesis. Edge weights depend on the endpoint roles:
//!
//! | endpoints             | weight      |
//! |-----------------------|-------------|
//! | grounding–grounding   | `gg·O`      |
//! | abstract–abstract     | `aa·O`      |
//! | grounding–abstract    | `ga·⌈O⌉`    |
//! | hypothesis–grounding  | `qg·⌈O⌉`    |
//! | hypothesis–abstract   | `qa·O`      |
//!
//! Overlaps on existing edges lie in `(0, 1]`, so the ceiling is always 1: a
//! single shared term is enough to link a grounding fact.

use serde::{Deserialize, Serialize};

use crate::ablation::AblationFlags;
use crate::error::{Error, Result};
use crate::kb::{FactKind, Question};
use crate::retrieval::RetrievedFact;
use crate::terms::{compute_overlap, extract_unique_terms, TermConfig, TermSet};

/// The nine tunable weights. `gg` lives in `[-1, 0]`, the rest in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub vw: f64,
    pub ew: f64,
    pub gr: f64,
    pub ar: f64,
    pub aa: f64,
    pub ga: f64,
    pub qg: f64,
    pub qa: f64,
    pub gg: f64,
}

impl ThetaParams {
    pub const NAMES: [&'static str; 9] = ["vw", "ew", "gr", "ar", "aa", "ga", "qg", "qa", "gg"];

    /// Positive-domain parameters at 1 and `gg` at -1.
    pub const SIGN_PATTERN: ThetaParams = ThetaParams {
        vw: 1.0,
        ew: 1.0,
        gr: 1.0,
        ar: 1.0,
        aa: 1.0,
        ga: 1.0,
        qg: 1.0,
        qa: 1.0,
        gg: -1.0,
    };

    pub const ZERO: ThetaParams = ThetaParams {
        vw: 0.0,
        ew: 0.0,
        gr: 0.0,
        ar: 0.0,
        aa: 0.0,
        ga: 0.0,
        qg: 0.0,
        qa: 0.0,
        gg: 0.0,
    };

    /// Box bounds `(lo, hi)` of each parameter, in [`Self::NAMES`] order.
    pub fn bounds() -> [(f64, f64); 9] {
        let mut b = [(0.0, 1.0); 9];
        b[8] = (-1.0, 0.0);
        b
    }

    pub fn to_array(&self) -> [f64; 9] {
        [self.vw, self.ew, self.gr, self.ar, self.aa, self.ga, self.qg, self.qa, self.gg]
    }

    pub fn from_array(v: [f64; 9]) -> Self {
        ThetaParams {
            vw: v[0],
            ew: v[1],
            gr: v[2],
            ar: v[3],
            aa: v[4],
            ga: v[5],
            qg: v[6],
            qa: v[7],
            gg: v[8],
        }
    }

    /// Maps to the unit cube; `gg` shifts from `[-1, 0]` to `[0, 1]`.
    pub fn to_unit(&self) -> [f64; 9] {
        let mut v = self.to_array();
        v[8] += 1.0;
        v
    }

    /// Inverse of [`Self::to_unit`], clamping into the box.
    pub fn from_unit(u: &[f64]) -> Self {
        let mut v = [0.0; 9];
        for (i, (lo, hi)) in Self::bounds().into_iter().enumerate() {
            v[i] = (lo + u[i].clamp(0.0, 1.0)).clamp(lo, hi);
        }
        Self::from_array(v)
    }

    pub fn in_domain(&self) -> bool {
        self.to_array()
            .iter()
            .zip(Self::bounds())
            .all(|(x, (lo, hi))| (lo..=hi).contains(x))
    }

    pub fn validate(&self) -> Result<()> {
        if self.in_domain() {
            Ok(())
        } else {
            Err(Error::Config(format!("theta outside its domain: {self:?}")))
        }
    }

    /// Multiplies the node and edge scale factors by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        ThetaParams {
            vw: self.vw * c,
            ew: self.ew * c,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Question,
    Grounding,
    Abstract,
}

impl NodeRole {
    pub fn of_fact(kind: FactKind, ablation: &AblationFlags) -> Self {
        match kind {
            _ if ablation.no_grouping => NodeRole::Abstract,
            FactKind::Grounding => NodeRole::Grounding,
            FactKind::Abstract => NodeRole::Abstract,
        }
    }
}

pub fn node_weight(role: NodeRole, relevance: f64, theta: &ThetaParams) -> f64 {
    match role {
        NodeRole::Grounding => theta.gr * relevance,
        NodeRole::Abstract => theta.ar * relevance,
        NodeRole::Question => 0.0,
    }
}

/// Weight of an existing edge with overlap `overlap > 0`. Symmetric in the
/// endpoint roles.
pub fn edge_weight(a: NodeRole, b: NodeRole, overlap: f64, theta: &ThetaParams) -> f64 {
    use NodeRole::*;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (Grounding, Grounding) => theta.gg * overlap,
        (Abstract, Abstract) => theta.aa * overlap,
        (Grounding, Abstract) => theta.ga * overlap.ceil(),
        (Question, Grounding) => theta.qg * overlap.ceil(),
        (Question, Abstract) => theta.qa * overlap,
        // A candidate graph has a single hypothesis node.
        (Question, Question) => 0.0,
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    /// Role used for weights and constraints (after ablation).
    pub role: NodeRole,
    /// Fact id and the fact's own kind; `None` for the hypothesis node.
    pub fact_id: Option<String>,
    pub fact_kind: Option<FactKind>,
    /// Relevance from retrieval, before any ablation substitution.
    pub relevance: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    /// Raw overlap, before any ablation substitution.
    pub overlap: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub theta: ThetaParams,
    pub ablation: AblationFlags,
}

/// A fact node before weighting.
#[derive(Debug, Clone)]
pub struct FactNodeSpec {
    pub fact_id: Option<String>,
    pub kind: FactKind,
    pub relevance: f64,
}

impl CandidateGraph {
    /// Builds a graph from explicit fact nodes and overlapping pairs
    /// `(u, v, overlap)` with node 0 as the hypothesis. Pairs with zero
    /// overlap are dropped; self-loops and duplicates are rejected.
    pub fn from_parts(
        facts: &[FactNodeSpec],
        pairs: &[(usize, usize, f64)],
        theta: ThetaParams,
        ablation: AblationFlags,
    ) -> Result<Self> {
        let mut nodes = vec![GraphNode {
            id: 0,
            role: NodeRole::Question,
            fact_id: None,
            fact_kind: None,
            relevance: 0.0,
            weight: 0.0,
        }];
        for (i, f) in facts.iter().enumerate() {
            nodes.push(GraphNode {
                id: i + 1,
                role: NodeRole::of_fact(f.kind, &ablation),
                fact_id: f.fact_id.clone(),
                fact_kind: Some(f.kind),
                relevance: f.relevance,
                weight: 0.0,
            });
        }
        let n = nodes.len();
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::new();
        for &(u, v, overlap) in pairs {
            if u == v || u >= n || v >= n {
                return Err(Error::Config(format!("invalid edge ({u}, {v})")));
            }
            if !(0.0..=1.0).contains(&overlap) {
                return Err(Error::Config(format!("overlap {overlap} outside [0, 1]")));
            }
            let (u, v) = (u.min(v), u.max(v));
            if !seen.insert((u, v)) {
                return Err(Error::Config(format!("duplicate edge ({u}, {v})")));
            }
            if overlap > 0.0 {
                edges.push(GraphEdge {
                    u,
                    v,
                    overlap,
                    weight: 0.0,
                });
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        let mut graph = CandidateGraph {
            nodes,
            edges,
            theta,
            ablation,
        };
        graph.reweight(theta);
        Ok(graph)
    }

    /// Builds the graph from term sets: `root` for the hypothesis, then one
    /// entry per fact node.
    pub fn from_terms(
        root: &TermSet,
        facts: &[(FactNodeSpec, &TermSet)],
        theta: ThetaParams,
        ablation: AblationFlags,
    ) -> Self {
        let mut term_sets: Vec<&TermSet> = vec![root];
        term_sets.extend(facts.iter().map(|(_, t)| *t));
        let mut pairs = Vec::new();
        for u in 0..term_sets.len() {
            for v in (u + 1)..term_sets.len() {
                let o = compute_overlap(term_sets[u], term_sets[v]);
                if o > 0.0 {
                    pairs.push((u, v, o));
                }
            }
        }
        let specs: Vec<FactNodeSpec> = facts.iter().map(|(s, _)| s.clone()).collect();
        Self::from_parts(&specs, &pairs, theta, ablation).expect("pairs are valid by construction")
    }

    /// Recomputes every weight under `theta`, keeping structure and raw
    /// scores.
    pub fn reweight(&mut self, theta: ThetaParams) {
        self.theta = theta;
        let relevance_one = self.ablation.no_relevance;
        let overlap_one = self.ablation.no_overlap;
        for node in &mut self.nodes {
            let r = if relevance_one { 1.0 } else { node.relevance };
            node.weight = node_weight(node.role, r, &theta);
        }
        for i in 0..self.edges.len() {
            let (u, v) = (self.edges[i].u, self.edges[i].v);
            let o = if overlap_one { 1.0 } else { self.edges[i].overlap };
            self.edges[i].weight = edge_weight(self.nodes[u].role, self.nodes[v].role, o, &theta);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    pub fn count_role(&self, role: NodeRole) -> usize {
        self.nodes.iter().filter(|n| n.role == role).count()
    }
}

pub fn build_candidate_graph(
    question: &Question,
    choice: usize,
    grounding: &[RetrievedFact<'_>],
    abstract_facts: &[RetrievedFact<'_>],
    theta: ThetaParams,
    cfg: &TermConfig,
    ablation: AblationFlags,
) -> CandidateGraph {
    let root = extract_unique_terms(&question.hypothesis(choice), cfg);
    let facts: Vec<(FactNodeSpec, &TermSet)> = grounding
        .iter()
        .chain(abstract_facts)
        .map(|r| {
            (
                FactNodeSpec {
                    fact_id: Some(r.fact.id.clone()),
                    kind: r.fact.kind,
                    relevance: r.relevance,
                },
                &r.fact.terms,
            )
        })
        .collect();
    CandidateGraph::from_terms(&root, &facts, theta, ablation)
}
