//! Reflexive-transitive reachability over a small digraph, as a bitset
//! matrix. Shared by the point-algebra and set-constraint oracles.

/// `reach[u]` holds a bitset of the vertices reachable from `u`, including
/// `u` itself.
pub(crate) struct Reachability {
    words: usize,
    rows: Vec<u64>,
}

impl Reachability {
    pub(crate) fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        for u in 0..n {
            rows[u * words + u / 64] |= 1 << (u % 64);
        }
        for (u, v) in edges {
            rows[u * words + v / 64] |= 1 << (v % 64);
        }
        // Warshall over bitset rows
        for k in 0..n {
            for u in 0..n {
                if rows[u * words + k / 64] >> (k % 64) & 1 == 1 {
                    for w in 0..words {
                        let kw = rows[k * words + w];
                        rows[u * words + w] |= kw;
                    }
                }
            }
        }
        Reachability { words, rows }
    }

    pub(crate) fn reaches(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }
}
