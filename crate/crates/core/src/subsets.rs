//! Deterministic subset enumeration: increasing cardinality, lexicographic
//! by position within a cardinality. Shared by the graphical oracle and the
//! rule searches so every caller agrees on the order.

/// Yields index subsets of `0..n` with at most `max_size` elements.
pub fn index_subsets(n: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    let cap = max_size.min(n);
    (0..=cap).flat_map(move |k| Combinations::new(n, k))
}

/// Yields subsets of `items` (as cloned vectors) in the same order.
pub fn subsets_up_to<T: Clone>(items: &[T], max_size: usize) -> Vec<Vec<T>> {
    index_subsets(items.len(), max_size)
        .map(|ix| ix.into_iter().map(|i| items[i].clone()).collect())
        .collect()
}

struct Combinations {
    n: usize,
    k: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            cur: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        if self.k == 0 {
            self.done = true;
            return Some(out);
        }
        // Advance to the next combination in lexicographic order.
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] != i + self.n - self.k {
                self.cur[i] += 1;
                for j in i + 1..self.k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_size_then_lex() {
        let got: Vec<Vec<usize>> = index_subsets(3, 3).collect();
        assert_eq!(
            got,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2],
            ]
        );
    }

    #[test]
    fn cap_truncates() {
        let got: Vec<Vec<usize>> = index_subsets(4, 1).collect();
        assert_eq!(got.len(), 5);
        assert!(got.iter().all(|s| s.len() <= 1));
    }

    #[test]
    fn counts_match_binomials() {
        let got = index_subsets(6, 6).count();
        assert_eq!(got, 64);
        let got = index_subsets(7, 3).count();
        assert_eq!(got, 1 + 7 + 21 + 35);
    }
}
