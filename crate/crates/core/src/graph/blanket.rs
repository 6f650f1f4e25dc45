//! Markov blankets in a MAG.
//!
//! The blanket of `y` is the set of nodes adjacent to `y` plus every
//! non-adjacent node that reaches `y` through a collider path (a path whose
//! intermediate nodes are all colliders). Equivalently: parents, children and
//! children's parents of `y`, the districts of `y` and of its children, and
//! the parents of all district members. This module implements the
//! collider-path characterization by reachability; the test suite
//! cross-checks it against the district construction.

use super::{GraphError, Mark, MixedGraph};

impl MixedGraph {
    /// The Markov blanket of `y`, in canonical node order.
    ///
    /// Defined for MAGs; a DAG is accepted as the special case with only
    /// directed edges (the result is then parents ∪ children ∪ co-parents).
    pub fn markov_blanket(&self, y: &str) -> Result<Vec<String>, GraphError> {
        let yi = self.node_idx(y)?;
        let n = self.len();
        let mut in_mb = vec![false; n];
        // State: (node, arrived with an arrowhead at node). A walk may be
        // extended through `cur` only when `cur` is a collider on it, i.e.
        // it was entered and is left through arrowheads at `cur`.
        let mut visited = vec![[false; 2]; n];
        let mut queue: Vec<(usize, bool)> = Vec::new();
        for h in self.half_edges(yi) {
            in_mb[h.to] = true;
            let into = h.mark_there == Mark::Arrow;
            if !visited[h.to][into as usize] {
                visited[h.to][into as usize] = true;
                queue.push((h.to, into));
            }
        }
        while let Some((cur, into)) = queue.pop() {
            if !into {
                continue;
            }
            for h in self.half_edges(cur) {
                if h.mark_here != Mark::Arrow || h.to == yi {
                    continue;
                }
                let next_into = h.mark_there == Mark::Arrow;
                in_mb[h.to] = true;
                if !visited[h.to][next_into as usize] {
                    visited[h.to][next_into as usize] = true;
                    queue.push((h.to, next_into));
                }
            }
        }
        in_mb[yi] = false;
        Ok(self.mask_to_names(&in_mb))
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;
    use crate::graph::MixedGraph;
    use std::collections::BTreeSet;

    fn set(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn mb(g: &MixedGraph, y: &str) -> BTreeSet<String> {
        g.markov_blanket(y).unwrap().into_iter().collect()
    }

    /// District-based construction of the blanket, used as an independent
    /// route for the fixtures: parents/children/children's parents, the
    /// districts of y and of its children, and the parents of all district
    /// members.
    fn mb_by_districts(g: &MixedGraph, y: &str) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = BTreeSet::new();
        let pa = g.parents(y).unwrap();
        let ch = g.children(y).unwrap();
        out.extend(pa.iter().cloned());
        out.extend(ch.iter().cloned());
        for c in &ch {
            out.extend(g.parents(c).unwrap());
        }
        let mut members: Vec<String> = g.district(y).unwrap();
        for c in &ch {
            members.extend(g.district(c).unwrap());
        }
        for m in &members {
            out.insert(m.clone());
            out.extend(g.parents(m).unwrap());
        }
        out.remove(y);
        out
    }

    #[test]
    fn blanket_example_graph() {
        let g = fixtures::mb_illustration_mag();
        let want = set(&["V2", "V3", "V4", "V6", "V8", "V9", "V10", "V11"]);
        assert_eq!(mb(&g, "Y"), want);
        assert_eq!(mb_by_districts(&g, "Y"), want);
    }

    #[test]
    fn blanket_small_latent_fixture() {
        let g = fixtures::fig3_mag();
        let want = set(&["X", "V1", "V2", "V3", "V4", "V6"]);
        assert_eq!(mb(&g, "Y"), want);
        assert_eq!(mb_by_districts(&g, "Y"), want);
    }

    #[test]
    fn blanket_larger_latent_fixture() {
        let g = fixtures::fig4_mag();
        let want_x = set(&["V1", "V2", "V5", "V6", "V7", "V8", "V9", "Y"]);
        assert_eq!(mb(&g, "X"), want_x);
        assert_eq!(mb_by_districts(&g, "X"), want_x);

        // V7 joins MB(Y) through the all-collider path
        // V7 -> V6 <-> V5 <-> X <-> V1 <-> Y.
        let want_y = set(&["V1", "V2", "V5", "V6", "V7", "V8", "V9", "X"]);
        assert_eq!(mb(&g, "Y"), want_y);
        assert_eq!(mb_by_districts(&g, "Y"), want_y);
    }

    #[test]
    fn blanket_in_a_dag_is_parents_children_coparents() {
        let g = MixedGraph::dag(
            &["A", "B", "C", "D", "E"],
            &[("A", "C"), ("B", "C"), ("C", "D"), ("E", "D")],
        )
        .unwrap();
        assert_eq!(mb(&g, "C"), set(&["A", "B", "D", "E"]));
    }

    #[test]
    fn blanket_separates_everything_else() {
        let g = fixtures::fig4_mag();
        let blanket = g.markov_blanket("Y").unwrap();
        for v in g.nodes() {
            if v == "Y" || blanket.contains(v) {
                continue;
            }
            assert!(
                g.m_separated("Y", v, &blanket).unwrap(),
                "{v} not separated from Y by its blanket"
            );
        }
    }
}
