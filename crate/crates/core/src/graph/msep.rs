//! m-separation by reachability over edge marks.
//!
//! A path is m-connecting given Z when every non-collider on it is outside Z
//! and every collider on it has a descendant in Z. Instead of enumerating
//! paths we walk states `(node, arrived_with_arrowhead)`: a walk can be
//! extended through a node exactly when the node passes the collider /
//! non-collider test, and a connecting walk exists iff a connecting path
//! does. That keeps the check at O(V·E) with two states per node.

use super::{GraphError, Mark, MixedGraph};

impl MixedGraph {
    /// True iff `x` and `y` are m-separated by `z`. On a DAG this coincides
    /// with d-separation.
    pub fn m_separated<S: AsRef<str>>(
        &self,
        x: &str,
        y: &str,
        z: &[S],
    ) -> Result<bool, GraphError> {
        let xi = self.node_idx(x)?;
        let yi = self.node_idx(y)?;
        if xi == yi {
            return Err(GraphError::DegeneratePair(x.to_string()));
        }
        let zmask = self.names_to_mask(z)?;
        if zmask[xi] {
            return Err(GraphError::EndpointInConditioningSet(x.to_string()));
        }
        if zmask[yi] {
            return Err(GraphError::EndpointInConditioningSet(y.to_string()));
        }
        Ok(!self.m_connected_idx(xi, yi, &zmask))
    }

    /// Reachability core, callable with a precomputed conditioning mask.
    pub(crate) fn m_connected_idx(&self, x: usize, y: usize, zmask: &[bool]) -> bool {
        let n = self.len();
        // anc_z[v]: v is in Z or has a descendant in Z. Colliders open
        // exactly on these nodes.
        let mut anc_z = zmask.to_vec();
        let mut stack: Vec<usize> = (0..n).filter(|&v| zmask[v]).collect();
        while let Some(u) = stack.pop() {
            for p in self.parents_idx(u) {
                if !anc_z[p] {
                    anc_z[p] = true;
                    stack.push(p);
                }
            }
        }

        // visited[(v, arrived_into)]
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
                let open = if collider { anc_z[cur] } else { !zmask[cur] };
                if !open {
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
}
