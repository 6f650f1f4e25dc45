//! Edge visibility, amenability, forbidden sets and the generalized
//! adjustment criterion.
//!
//! A set Z is a valid adjustment set for (X, Y) when the graph is amenable
//! for the pair (every causal path from X to Y starts with a visible edge
//! out of X), Z avoids the forbidden set, and Z blocks every non-causal path
//! from X to Y. The blocking condition is decided by m-separation in the
//! proper back-door graph: the graph with the first edge of every causal
//! path from X to Y removed. Only DAGs and MAGs are represented here, so the
//! definite-status qualification on paths collapses to ordinary paths.

use super::{GraphBuilder, GraphError, GraphKind, Mark, MixedGraph, NodePair};
use crate::subsets::index_subsets;

/// Precomputed context for repeated validity queries against one pair.
pub struct AdjustmentCheck<'g> {
    graph: &'g MixedGraph,
    x: usize,
    y: usize,
    amenable: bool,
    forbidden: Vec<bool>,
    backdoor: MixedGraph,
}

impl MixedGraph {
    /// Whether the directed edge `x -> y` is visible: some node S not
    /// adjacent to `y` reaches `x` either by an edge into `x` or by a
    /// collider path into `x` whose intermediate nodes are all parents of
    /// `y`. Visibility certifies the edge is free of latent confounding. In
    /// a DAG every directed edge is visible.
    pub fn is_visible(&self, x: &str, y: &str) -> Result<bool, GraphError> {
        let xi = self.node_idx(x)?;
        let yi = self.node_idx(y)?;
        if self.edge_between(x, y) != Some((Mark::Tail, Mark::Arrow)) {
            return Err(GraphError::NotADirectedEdge(x.to_string(), y.to_string()));
        }
        if self.kind() == GraphKind::Dag {
            return Ok(true);
        }
        Ok(self.visible_idx(xi, yi))
    }

    fn visible_idx(&self, x: usize, y: usize) -> bool {
        let adj_y: Vec<bool> = {
            let mut m = vec![false; self.len()];
            for h in self.half_edges(y) {
                m[h.to] = true;
            }
            m[y] = true;
            m
        };
        let pa_y: Vec<bool> = {
            let mut m = vec![false; self.len()];
            for p in self.parents_idx(y) {
                m[p] = true;
            }
            m
        };
        // Grow the set of possible collider-path tails: x itself, then
        // parents of y joined to the tail by bidirected edges. Every node in
        // `tails` can end a collider path into x whose intermediates are
        // parents of y (for x the path is empty).
        let mut tails = vec![false; self.len()];
        tails[x] = true;
        let mut stack = vec![x];
        while let Some(t) = stack.pop() {
            for s in self.spouses_idx(t) {
                if !tails[s] && pa_y[s] {
                    tails[s] = true;
                    stack.push(s);
                }
            }
        }
        // A witness S attaches to any tail with an arrowhead at the tail and
        // must itself not be adjacent to y.
        for t in 0..self.len() {
            if !tails[t] {
                continue;
            }
            for h in self.half_edges(t) {
                if h.mark_here == Mark::Arrow && !adj_y[h.to] {
                    return true;
                }
            }
        }
        false
    }

    /// Amenability of the pair: every causal path from X to Y starts with a
    /// visible directed edge out of X. Vacuously true without causal paths.
    pub fn is_amenable(&self, pair: &NodePair) -> Result<bool, GraphError> {
        let x = self.node_idx(&pair.treatment)?;
        let y = self.node_idx(&pair.outcome)?;
        let an_y = self.ancestors_mask(y);
        for c in self.children_idx(x) {
            if an_y[c] && self.kind() == GraphKind::Mag && !self.visible_idx(x, c) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The forbidden set: descendants of nodes lying on a causal path from X
    /// to Y, excluding X itself. Empty when no causal path exists; equal to
    /// {Y} under the pretreatment assumption.
    pub fn forbidden_set(&self, pair: &NodePair) -> Result<Vec<String>, GraphError> {
        Ok(self.mask_to_names(&self.forbidden_mask(pair)?))
    }

    fn forbidden_mask(&self, pair: &NodePair) -> Result<Vec<bool>, GraphError> {
        let x = self.node_idx(&pair.treatment)?;
        let y = self.node_idx(&pair.outcome)?;
        let de_x = self.descendants_mask(x);
        let an_y = self.ancestors_mask(y);
        let mut forb = vec![false; self.len()];
        if !an_y[x] {
            return Ok(forb);
        }
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| de_x[v] && an_y[v]).collect();
        for &v in &stack {
            forb[v] = true;
        }
        while let Some(u) = stack.pop() {
            for c in self.children_idx(u) {
                if !forb[c] {
                    forb[c] = true;
                    stack.push(c);
                }
            }
        }
        forb[x] = false;
        Ok(forb)
    }

    /// The proper back-door graph: this graph without the first edge of any
    /// causal path from X to Y (edges X -> c with c an ancestor of Y).
    fn proper_backdoor_graph(&self, x: usize, y: usize) -> MixedGraph {
        let an_y = self.ancestors_mask(y);
        let mut b = GraphBuilder::new(self.kind());
        for v in self.nodes() {
            b.node(v).expect("nodes are unique");
        }
        for e in self.edges() {
            let drop = ((e.mark_a, e.mark_b) == (Mark::Tail, Mark::Arrow) && e.a == x && an_y[e.b])
                || ((e.mark_a, e.mark_b) == (Mark::Arrow, Mark::Tail) && e.b == x && an_y[e.a]);
            if !drop {
                b.edge(self.name_of(e.a), e.mark_a, e.mark_b, self.name_of(e.b))
                    .expect("edge set is valid");
            }
        }
        b.build().expect("edge-deleted subgraph stays valid")
    }

    /// Generalized adjustment criterion for `z` relative to the pair.
    pub fn is_valid_adjustment<S: AsRef<str>>(
        &self,
        pair: &NodePair,
        z: &[S],
    ) -> Result<bool, GraphError> {
        Ok(AdjustmentCheck::new(self, pair)?.is_valid(z)?)
    }

    /// Every subset of `universe` satisfying the adjustment criterion, in
    /// increasing-size-then-lexicographic order. `cap` guards the 2^n
    /// enumeration (default 20).
    pub fn enumerate_adjustment_sets<S: AsRef<str>>(
        &self,
        pair: &NodePair,
        universe: &[S],
        cap: Option<usize>,
    ) -> Result<Vec<Vec<String>>, GraphError> {
        let cap = cap.unwrap_or(20);
        if universe.len() > cap {
            return Err(GraphError::EnumerationCapExceeded {
                n: universe.len(),
                cap,
            });
        }
        let check = AdjustmentCheck::new(self, pair)?;
        let names: Vec<&str> = universe.iter().map(|s| s.as_ref()).collect();
        let mut out = Vec::new();
        for subset in index_subsets(names.len(), names.len()) {
            let z: Vec<&str> = subset.iter().map(|&i| names[i]).collect();
            if check.is_valid(&z)? {
                out.push(z.into_iter().map(str::to_string).collect());
            }
        }
        Ok(out)
    }
}

impl<'g> AdjustmentCheck<'g> {
    pub fn new(graph: &'g MixedGraph, pair: &NodePair) -> Result<Self, GraphError> {
        let x = graph.node_idx(&pair.treatment)?;
        let y = graph.node_idx(&pair.outcome)?;
        if x == y {
            return Err(GraphError::DegeneratePair(pair.treatment.clone()));
        }
        Ok(Self {
            graph,
            x,
            y,
            amenable: graph.is_amenable(pair)?,
            forbidden: graph.forbidden_mask(pair)?,
            backdoor: graph.proper_backdoor_graph(x, y),
        })
    }

    pub fn is_valid<S: AsRef<str>>(&self, z: &[S]) -> Result<bool, GraphError> {
        if !self.amenable {
            return Ok(false);
        }
        let mut zmask = vec![false; self.graph.len()];
        for v in z {
            let i = self.graph.node_idx(v.as_ref())?;
            if i == self.x || i == self.y {
                return Err(GraphError::EndpointInConditioningSet(v.as_ref().to_string()));
            }
            if self.forbidden[i] {
                return Ok(false);
            }
            zmask[i] = true;
        }
        Ok(!self.backdoor.m_connected_idx(self.x, self.y, &zmask))
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;
    use crate::graph::{GraphBuilder, GraphKind, MixedGraph, NodePair};

    fn pair() -> NodePair {
        NodePair::new("X", "Y").unwrap()
    }

    #[test]
    fn visible_via_direct_witness() {
        // S *-> X -> Y with S, Y nonadjacent.
        let g = MixedGraph::dag(&["S", "X", "Y"], &[("S", "X"), ("X", "Y")]).unwrap();
        let m = g.latent_project(&["S", "X", "Y"]).unwrap();
        assert!(m.is_visible("X", "Y").unwrap());

        let mut b = GraphBuilder::new(GraphKind::Mag);
        b.bidirected("S", "X").unwrap();
        b.directed("X", "Y").unwrap();
        let m = b.build().unwrap();
        assert!(m.is_visible("X", "Y").unwrap());
    }

    #[test]
    fn visible_via_collider_path_of_parents() {
        let g = fixtures::fig4_mag();
        // Witness V7 -> V6 <-> V5 <-> X with V6, V5 parents of Y.
        assert!(g.is_visible("X", "Y").unwrap());
    }

    #[test]
    fn two_node_edge_is_invisible() {
        let mut b = GraphBuilder::new(GraphKind::Mag);
        b.directed("X", "Y").unwrap();
        let g = b.build().unwrap();
        assert!(!g.is_visible("X", "Y").unwrap());
        assert!(!g.is_amenable(&pair()).unwrap());
    }

    #[test]
    fn visibility_requires_the_edge() {
        let g = fixtures::fig3_mag();
        assert!(g.is_visible("X", "Y").unwrap());
        assert!(g.is_visible("V5", "Y").is_err()); // no such edge
        assert!(g.is_visible("Y", "X").is_err()); // wrong direction
    }

    #[test]
    fn amenability_examples() {
        assert!(fixtures::fig3_mag().is_amenable(&pair()).unwrap());
        // No causal path at all: vacuous.
        let mut b = GraphBuilder::new(GraphKind::Mag);
        b.bidirected("X", "Y").unwrap();
        let g = b.build().unwrap();
        assert!(g.is_amenable(&pair()).unwrap());
    }

    #[test]
    fn forbidden_set_examples() {
        let g = fixtures::fig3_mag();
        assert_eq!(g.forbidden_set(&pair()).unwrap(), vec!["Y"]);

        let g = MixedGraph::dag(&["X", "W", "Y"], &[("X", "W"), ("W", "Y")]).unwrap();
        assert_eq!(g.forbidden_set(&pair()).unwrap(), vec!["W", "Y"]);

        let g = MixedGraph::dag(&["X", "Y", "Q"], &[("Y", "Q")]).unwrap();
        assert!(g.forbidden_set(&pair()).unwrap().is_empty());
    }

    #[test]
    fn valid_adjustment_small_fixture() {
        let g = fixtures::fig3_mag();
        assert!(g.is_valid_adjustment(&pair(), &["V1", "V2"]).unwrap());
        assert!(!g.is_valid_adjustment(&pair(), &["V1", "V2", "V3"]).unwrap());
        assert!(!g.is_valid_adjustment(&pair(), &["V1"]).unwrap());
    }

    #[test]
    fn valid_adjustment_marked_nodes_one_b() {
        let g = fixtures::fig1b_mag();
        assert!(g.is_valid_adjustment(&pair(), &["V2", "V3", "V4"]).unwrap());
    }

    #[test]
    fn collider_stratification_dag_and_mag() {
        // DAG form: adjusting for the middle collider is the only mistake.
        let g = fixtures::m_structure_dag();
        assert!(g.is_valid_adjustment(&pair(), &[] as &[&str]).unwrap());
        assert!(!g.is_valid_adjustment(&pair(), &["M"]).unwrap());

        // MAG form: the treatment edge is invisible, so amenability fails
        // and no set is valid at all.
        let g = fixtures::m_structure_mag();
        assert!(!g.is_valid_adjustment(&pair(), &[] as &[&str]).unwrap());
        assert!(!g.is_valid_adjustment(&pair(), &["M"]).unwrap());
    }

    #[test]
    fn enumerate_small_fixture_families() {
        let g = fixtures::fig3_mag();
        let mut universe = g.markov_blanket("Y").unwrap();
        universe.retain(|v| v != "X");
        let got = g.enumerate_adjustment_sets(&pair(), &universe, None).unwrap();
        // Exactly the subsets containing {V1, V2} and excluding V3.
        for z in &got {
            assert!(z.contains(&"V1".to_string()) && z.contains(&"V2".to_string()));
            assert!(!z.contains(&"V3".to_string()));
        }
        assert_eq!(got.len(), 4);
        assert_eq!(got[0], vec!["V1", "V2"]);
    }

    #[test]
    fn enumerate_marked_nodes_one_c() {
        let g = fixtures::fig1c_mag();
        let got = g
            .enumerate_adjustment_sets(&pair(), &["V1", "V2", "V3"], None)
            .unwrap();
        assert!(got.contains(&vec!["V2".to_string(), "V3".to_string()]));
    }

    #[test]
    fn enumerate_two_node_dag() {
        let g = MixedGraph::dag(&["X", "Y"], &[("X", "Y")]).unwrap();
        let got = g
            .enumerate_adjustment_sets(&pair(), &[] as &[&str], None)
            .unwrap();
        assert_eq!(got, vec![Vec::<String>::new()]);
    }

    #[test]
    fn enumerate_cap_guard() {
        let names: Vec<String> = (0..23).map(|i| format!("N{i}")).collect();
        let mut g = GraphBuilder::new(GraphKind::Dag);
        g.node("X").unwrap();
        g.node("Y").unwrap();
        for n in &names {
            g.node(n).unwrap();
        }
        let g = g.build().unwrap();
        assert!(g
            .enumerate_adjustment_sets(&pair(), &names, None)
            .is_err());
    }
}
