//! Immutable mixed graphs over named nodes.
//!
//! A [`MixedGraph`] stores nodes in insertion order — the *canonical order*
//! used everywhere deterministic enumeration matters — and at most one edge
//! per unordered node pair. Each edge carries a mark at both endpoints:
//! [`Mark::Tail`] or [`Mark::Arrow`]. A directed edge A → B is
//! `(Tail, Arrow)`, a bidirected edge A ↔ B is `(Arrow, Arrow)`.
//!
//! Two kinds are supported. A `Dag` contains only directed edges and no
//! directed cycle. A `Mag` is an ancestral mixed graph: no directed cycles
//! and no almost directed cycles (a spouse that is also an ancestor).
//! Maximality is *not* enforced at construction; it is checkable with
//! [`MixedGraph::is_maximal`], and [`MixedGraph::latent_project`] is the one
//! operation guaranteed to emit maximal graphs.

mod adjust;
mod blanket;
mod io;
mod msep;
mod project;

use std::collections::HashMap;
use thiserror::Error;

pub use adjust::AdjustmentCheck;

/// An endpoint mark of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Tail,
    Arrow,
}

/// Which structural constraints a graph satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Only directed edges, acyclic.
    Dag,
    /// Ancestral mixed graph (directed + bidirected edges, no directed or
    /// almost directed cycles). Maximality is not implied.
    Mag,
}

/// An ordered treatment/outcome pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePair {
    pub treatment: String,
    pub outcome: String,
}

impl NodePair {
    pub fn new(treatment: impl Into<String>, outcome: impl Into<String>) -> Result<Self, GraphError> {
        let treatment = treatment.into();
        let outcome = outcome.into();
        if treatment == outcome {
            return Err(GraphError::DegeneratePair(treatment));
        }
        Ok(Self { treatment, outcome })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("more than one edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),
    #[error("a DAG may only contain directed edges; offending edge {0} .. {1}")]
    NondirectedInDag(String, String),
    #[error("directed cycle through `{0}`")]
    DirectedCycle(String),
    #[error("almost directed cycle: `{0}` is a spouse and an ancestor of `{1}`")]
    AlmostDirectedCycle(String, String),
    #[error("node `{0}` may not appear in the conditioning set")]
    EndpointInConditioningSet(String),
    #[error("no directed edge `{0}` -> `{1}`")]
    NotADirectedEdge(String, String),
    #[error("treatment and outcome must differ, got `{0}` twice")]
    DegeneratePair(String),
    #[error("subset enumeration over {n} nodes exceeds the cap of {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },
    #[error("{op} requires a {want:?}, got a {got:?}")]
    WrongKind {
        op: &'static str,
        want: GraphKind,
        got: GraphKind,
    },
    #[error("node `{0}` is not among the observed nodes")]
    NotObserved(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// One edge, stored by node index with a mark at each endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub mark_a: Mark,
    pub b: usize,
    pub mark_b: Mark,
}

/// Half-edge view from one endpoint: `mark_here` is the mark at the owning
/// node, `mark_there` the mark at `to`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HalfEdge {
    pub to: usize,
    pub mark_here: Mark,
    pub mark_there: Mark,
}

#[derive(Debug, Clone)]
pub struct MixedGraph {
    kind: GraphKind,
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<HalfEdge>>,
    edges: Vec<Edge>,
}

/// Incremental constructor; validation happens in [`GraphBuilder::build`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    kind: GraphKind,
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new(kind: GraphKind) -> Self {
        Self {
            kind,
            names: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    /// Declares a node. Insertion order defines the canonical node order.
    pub fn node(&mut self, name: impl Into<String>) -> Result<&mut Self, GraphError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateNode(name));
        }
        self.index.insert(name.clone(), self.names.len());
        self.names.push(name);
        Ok(self)
    }

    fn resolve(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            i
        } else {
            // Unseen endpoints are declared implicitly, in first-use order.
            self.index.insert(name.to_string(), self.names.len());
            self.names.push(name.to_string());
            self.names.len() - 1
        }
    }

    pub fn edge(
        &mut self,
        a: &str,
        mark_a: Mark,
        mark_b: Mark,
        b: &str,
    ) -> Result<&mut Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        let ia = self.resolve(a);
        let ib = self.resolve(b);
        if self
            .edges
            .iter()
            .any(|e| (e.a == ia && e.b == ib) || (e.a == ib && e.b == ia))
        {
            return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
        }
        self.edges.push(Edge {
            a: ia,
            mark_a,
            b: ib,
            mark_b,
        });
        Ok(self)
    }

    /// `a -> b`.
    pub fn directed(&mut self, a: &str, b: &str) -> Result<&mut Self, GraphError> {
        self.edge(a, Mark::Tail, Mark::Arrow, b)
    }

    /// `a <-> b`.
    pub fn bidirected(&mut self, a: &str, b: &str) -> Result<&mut Self, GraphError> {
        self.edge(a, Mark::Arrow, Mark::Arrow, b)
    }

    pub fn build(self) -> Result<MixedGraph, GraphError> {
        let n = self.names.len();
        let mut adj: Vec<Vec<HalfEdge>> = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(HalfEdge {
                to: e.b,
                mark_here: e.mark_a,
                mark_there: e.mark_b,
            });
            adj[e.b].push(HalfEdge {
                to: e.a,
                mark_here: e.mark_b,
                mark_there: e.mark_a,
            });
        }
        let g = MixedGraph {
            kind: self.kind,
            names: self.names,
            index: self.index,
            adj,
            edges: self.edges,
        };
        g.validate()?;
        Ok(g)
    }
}

impl MixedGraph {
    /// Convenience constructor for DAGs given directed edges only.
    pub fn dag<S: AsRef<str>>(nodes: &[S], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(GraphKind::Dag);
        for v in nodes {
            b.node(v.as_ref())?;
        }
        for (a, c) in edges {
            b.directed(a, c)?;
        }
        b.build()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Node names in canonical (insertion) order.
    pub fn nodes(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub(crate) fn node_idx(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    pub(crate) fn half_edges(&self, v: usize) -> &[HalfEdge] {
        &self.adj[v]
    }

    pub(crate) fn name_of(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// The marks `(at_a, at_b)` of the edge between `a` and `b`, if present.
    pub fn edge_between(&self, a: &str, b: &str) -> Option<(Mark, Mark)> {
        let ia = *self.index.get(a)?;
        let ib = *self.index.get(b)?;
        self.adj[ia]
            .iter()
            .find(|h| h.to == ib)
            .map(|h| (h.mark_here, h.mark_there))
    }

    pub fn has_directed_edge(&self, from: &str, to: &str) -> bool {
        matches!(self.edge_between(from, to), Some((Mark::Tail, Mark::Arrow)))
    }

    /// Structural equality: same node set (any order), same edges and marks.
    pub fn same_structure(&self, other: &MixedGraph) -> bool {
        use std::collections::BTreeSet;
        let mine: BTreeSet<&String> = self.names.iter().collect();
        let theirs: BTreeSet<&String> = other.names.iter().collect();
        if mine != theirs || self.edges.len() != other.edges.len() {
            return false;
        }
        self.edges.iter().all(|e| {
            other.edge_between(&self.names[e.a], &self.names[e.b]) == Some((e.mark_a, e.mark_b))
        })
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.kind == GraphKind::Dag {
            for e in &self.edges {
                if (e.mark_a, e.mark_b) != (Mark::Tail, Mark::Arrow) {
                    return Err(GraphError::NondirectedInDag(
                        self.names[e.a].clone(),
                        self.names[e.b].clone(),
                    ));
                }
            }
        }
        // Directed part must be acyclic for both kinds.
        if let Some(v) = self.find_directed_cycle() {
            return Err(GraphError::DirectedCycle(self.names[v].clone()));
        }
        if self.kind == GraphKind::Mag {
            // Almost directed cycle: a <-> b with a an ancestor of b.
            for e in &self.edges {
                if (e.mark_a, e.mark_b) == (Mark::Arrow, Mark::Arrow) {
                    if self.ancestors_mask(e.b)[e.a] {
                        return Err(GraphError::AlmostDirectedCycle(
                            self.names[e.a].clone(),
                            self.names[e.b].clone(),
                        ));
                    }
                    if self.ancestors_mask(e.a)[e.b] {
                        return Err(GraphError::AlmostDirectedCycle(
                            self.names[e.b].clone(),
                            self.names[e.a].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn find_directed_cycle(&self) -> Option<usize> {
        // Kahn's algorithm on the directed sub-relation.
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.parents_idx(v).count()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = stack.pop() {
            seen += 1;
            for h in &self.adj[v] {
                if (h.mark_here, h.mark_there) == (Mark::Tail, Mark::Arrow) {
                    indeg[h.to] -= 1;
                    if indeg[h.to] == 0 {
                        stack.push(h.to);
                    }
                }
            }
        }
        if seen == n {
            None
        } else {
            (0..n).find(|&v| indeg[v] > 0)
        }
    }

    /// A topological order of the directed sub-relation, deterministic:
    /// among ready nodes the canonically smallest index goes first.
    pub fn topological_order(&self) -> Vec<String> {
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.parents_idx(v).count()).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(self.names[v].clone());
            for h in &self.adj[v] {
                if (h.mark_here, h.mark_there) == (Mark::Tail, Mark::Arrow) {
                    indeg[h.to] -= 1;
                    if indeg[h.to] == 0 {
                        ready.insert(h.to);
                    }
                }
            }
        }
        order
    }

    // ---- index-level relatives ------------------------------------------

    pub(crate) fn parents_idx(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().filter_map(|h| {
            ((h.mark_here, h.mark_there) == (Mark::Arrow, Mark::Tail)).then_some(h.to)
        })
    }

    pub(crate) fn children_idx(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().filter_map(|h| {
            ((h.mark_here, h.mark_there) == (Mark::Tail, Mark::Arrow)).then_some(h.to)
        })
    }

    pub(crate) fn spouses_idx(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().filter_map(|h| {
            ((h.mark_here, h.mark_there) == (Mark::Arrow, Mark::Arrow)).then_some(h.to)
        })
    }

    /// `mask[u]` iff u is v or has a directed path to v.
    pub(crate) fn ancestors_mask(&self, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        mask[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for p in self.parents_idx(u) {
                if !mask[p] {
                    mask[p] = true;
                    stack.push(p);
                }
            }
        }
        mask
    }

    /// `mask[u]` iff u is v or reachable from v along directed edges.
    pub(crate) fn descendants_mask(&self, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        mask[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in self.children_idx(u) {
                if !mask[c] {
                    mask[c] = true;
                    stack.push(c);
                }
            }
        }
        mask
    }

    pub(crate) fn mask_to_names(&self, mask: &[bool]) -> Vec<String> {
        mask.iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then(|| self.names[i].clone()))
            .collect()
    }

    // ---- name-level operations -------------------------------------------

    /// All nodes with a causal path to `v`, plus `v` itself (reflexive).
    pub fn ancestors(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        Ok(self.mask_to_names(&self.ancestors_mask(i)))
    }

    /// All nodes reachable from `v` along causal paths, plus `v` itself.
    pub fn descendants(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        Ok(self.mask_to_names(&self.descendants_mask(i)))
    }

    pub fn parents(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        let mut out: Vec<usize> = self.parents_idx(i).collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|j| self.names[j].clone()).collect())
    }

    pub fn children(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        let mut out: Vec<usize> = self.children_idx(i).collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|j| self.names[j].clone()).collect())
    }

    pub fn adjacent(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        let mut out: Vec<usize> = self.adj[i].iter().map(|h| h.to).collect();
        out.sort_unstable();
        Ok(out.into_iter().map(|j| self.names[j].clone()).collect())
    }

    /// The district of `v`: every node reachable from `v` using only
    /// bidirected edges, `v` included.
    pub fn district(&self, v: &str) -> Result<Vec<String>, GraphError> {
        let i = self.node_idx(v)?;
        let mut mask = vec![false; self.len()];
        mask[i] = true;
        let mut stack = vec![i];
        while let Some(u) = stack.pop() {
            for s in self.spouses_idx(u) {
                if !mask[s] {
                    mask[s] = true;
                    stack.push(s);
                }
            }
        }
        Ok(self.mask_to_names(&mask))
    }

    pub(crate) fn names_to_mask<S: AsRef<str>>(&self, vs: &[S]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.len()];
        for v in vs {
            mask[self.node_idx(v.as_ref())?] = true;
        }
        Ok(mask)
    }
}
