//! Latent projection of a DAG onto a subset of observed nodes, and the
//! maximality check.
//!
//! Two observed nodes are adjacent in the projected MAG iff the DAG contains
//! an inducing path between them relative to the latent set: a path whose
//! non-endpoint nodes are each latent or a collider, with every collider an
//! ancestor of one of the endpoints. Orientation follows ancestry in the
//! DAG: `a -> b` when a is an ancestor of b, `a <-> b` when neither is an
//! ancestor of the other. The result preserves every m-separation statement
//! over the observed nodes and is maximal by construction.

use super::{GraphBuilder, GraphError, GraphKind, Mark, MixedGraph};

impl MixedGraph {
    /// Projects a DAG onto `observed`, hiding every other node.
    pub fn latent_project<S: AsRef<str>>(&self, observed: &[S]) -> Result<MixedGraph, GraphError> {
        if self.kind() != GraphKind::Dag {
            return Err(GraphError::WrongKind {
                op: "latent_project",
                want: GraphKind::Dag,
                got: self.kind(),
            });
        }
        let obs_mask = self.names_to_mask(observed)?;
        let obs: Vec<usize> = (0..self.len()).filter(|&v| obs_mask[v]).collect();
        let latent: Vec<bool> = obs_mask.iter().map(|&m| !m).collect();

        let mut b = GraphBuilder::new(GraphKind::Mag);
        for &v in &obs {
            b.node(self.name_of(v))?;
        }
        for (i, &a) in obs.iter().enumerate() {
            let an_a = self.ancestors_mask(a);
            for &bn in &obs[i + 1..] {
                if !self.inducing_path_idx(a, bn, &latent) {
                    continue;
                }
                let a_anc_b = self.ancestors_mask(bn)[a];
                let b_anc_a = an_a[bn];
                let (ma, mb) = match (a_anc_b, b_anc_a) {
                    (true, _) => (Mark::Tail, Mark::Arrow),
                    (false, true) => (Mark::Arrow, Mark::Tail),
                    (false, false) => (Mark::Arrow, Mark::Arrow),
                };
                b.edge(self.name_of(a), ma, mb, self.name_of(bn))?;
            }
        }
        b.build()
    }

    /// Inducing-path reachability between `x` and `y` where `allowed_nonco[v]`
    /// marks nodes permitted as non-colliders on the path. Colliders must be
    /// ancestors of `x` or `y` regardless.
    fn inducing_path_idx(&self, x: usize, y: usize, allowed_nonco: &[bool]) -> bool {
        let an_x = self.ancestors_mask(x);
        let an_y = self.ancestors_mask(y);
        let n = self.len();
        let mut visited = vec![[false; 2]; n];
        let mut queue: Vec<(usize, bool)> = Vec::new();
        for h in self.half_edges(x) {
            if h.to == y {
                return true;
            }
            let into = h.mark_there == Mark::Arrow;
            if !visited[h.to][into as usize] {
                visited[h.to][into as usize] = true;
                queue.push((h.to, into));
            }
        }
        while let Some((cur, into)) = queue.pop() {
            for h in self.half_edges(cur) {
                let collider = into && h.mark_here == Mark::Arrow;
                let ok = if collider {
                    an_x[cur] || an_y[cur]
                } else {
                    allowed_nonco[cur]
                };
                if !ok {
                    continue;
                }
                if h.to == y {
                    return true;
                }
                if h.to == x {
                    continue;
                }
                let next_into = h.mark_there == Mark::Arrow;
                if !visited[h.to][next_into as usize] {
                    visited[h.to][next_into as usize] = true;
                    queue.push((h.to, next_into));
                }
            }
        }
        false
    }

    /// True iff some nonadjacent pair cannot be m-separated by any subset
    /// of the remaining nodes, i.e. is joined by a primitive inducing path.
    /// Reachability-based; the fast route where [`MixedGraph::is_maximal`]
    /// enumerates.
    pub fn has_inseparable_nonadjacent_pair(&self) -> bool {
        let none = vec![false; self.len()];
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.half_edges(a).iter().any(|h| h.to == b) {
                    continue;
                }
                if self.inducing_path_idx(a, b, &none) {
                    return true;
                }
            }
        }
        false
    }

    /// Brute-force maximality check: every nonadjacent pair must be
    /// m-separated by some subset of the remaining nodes.
    ///
    /// The subset search is exponential, so graphs with more than `cap + 2`
    /// nodes are refused (default cap 20). [`has_inseparable_nonadjacent_pair`]
    /// gives the same answer by reachability and is what
    /// [`MixedGraph::latent_project`] relies on.
    pub fn is_maximal(&self, cap: Option<usize>) -> Result<bool, GraphError> {
        let cap = cap.unwrap_or(20);
        let n = self.len();
        if n > cap + 2 {
            return Err(GraphError::EnumerationCapExceeded { n, cap });
        }
        for a in 0..n {
            'pair: for b in a + 1..n {
                if self.half_edges(a).iter().any(|h| h.to == b) {
                    continue;
                }
                let rest: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
                for bits in 0..(1u64 << rest.len()) {
                    let mut zmask = vec![false; n];
                    for (k, &v) in rest.iter().enumerate() {
                        if bits >> k & 1 == 1 {
                            zmask[v] = true;
                        }
                    }
                    if !self.m_connected_idx(a, b, &zmask) {
                        continue 'pair;
                    }
                }
                return Ok(false);
            }
        }
        Ok(true)
    }
}
