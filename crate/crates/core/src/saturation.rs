//! The saturation graph of a scheme: vertices are the colors of a fixed
//! valency `k`, and two vertices are adjacent when their dual product has
//! exactly `k` elements, equivalently when every intersection number
//! `c[x,s]^y` with `s ∈ x*y` equals one. Both characterizations are computed
//! and must agree; a mismatch is a mathematical impossibility and aborts.

use crate::bitset::{self, words_for};
use crate::scheme::{Color, Scheme};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(
        "no saturation vertices for valency {0}: the graph needs a valency \
         above one that some basis relation attains"
    )]
    EmptyVertexSet(u32),
}

/// Symmetric graph (loops allowed) on the colors of valency `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationGraph {
    k: u32,
    vertices: Vec<Color>,
    vertex_of: Vec<Option<u16>>,
    adj: Vec<u64>,
    words: usize,
}

impl SaturationGraph {
    pub fn build(x: &Scheme, k: u32) -> Result<SaturationGraph, AnalysisError> {
        let vertices: Vec<Color> = x.colors().filter(|&s| x.valency(s) == k).collect();
        if k <= 1 || vertices.is_empty() {
            return Err(AnalysisError::EmptyVertexSet(k));
        }
        let t = x.tensor();
        let m = vertices.len();
        let words = words_for(m);
        let mut adj = vec![0u64; m * words];

        for (i, &vx) in vertices.iter().enumerate() {
            for (j, &vy) in vertices.iter().enumerate() {
                let prod = t.product(x.dual(vx), vy);
                let by_size = prod.len() == k as usize;
                let by_counts = prod.iter().all(|&s| t.c(vx, s as usize, vy) == 1);
                // The two sides are equivalent for vertices of equal valency;
                // disagreement means the tensor arithmetic is broken.
                assert_eq!(
                    by_size, by_counts,
                    "adjacency criteria disagree at colors ({vx}, {vy})"
                );
                if by_size {
                    adj[i * words + j / 64] |= 1u64 << (j % 64);
                }
            }
        }

        let mut vertex_of = vec![None; x.rank()];
        for (i, &v) in vertices.iter().enumerate() {
            vertex_of[v] = Some(i as u16);
        }

        let g = SaturationGraph {
            k,
            vertices,
            vertex_of,
            adj,
            words,
        };
        for i in 0..m {
            for j in 0..m {
                debug_assert_eq!(g.adjacent_idx(i, j), g.adjacent_idx(j, i));
            }
        }
        Ok(g)
    }

    /// Test fixture: builds a graph layer directly from an adjacency matrix,
    /// bypassing any scheme. The matrix must be symmetric.
    pub fn from_adjacency(
        k: u32,
        vertices: Vec<Color>,
        adjacency: &[Vec<bool>],
    ) -> SaturationGraph {
        let m = vertices.len();
        assert_eq!(adjacency.len(), m);
        let words = words_for(m);
        let mut adj = vec![0u64; m * words];
        for (i, row) in adjacency.iter().enumerate() {
            assert_eq!(row.len(), m);
            for (j, &edge) in row.iter().enumerate() {
                assert_eq!(edge, adjacency[j][i], "adjacency must be symmetric");
                if edge {
                    adj[i * words + j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        let max_color = vertices.iter().copied().max().unwrap_or(0);
        let mut vertex_of = vec![None; max_color + 1];
        for (i, &v) in vertices.iter().enumerate() {
            vertex_of[v] = Some(i as u16);
        }
        SaturationGraph {
            k,
            vertices,
            vertex_of,
            adj,
            words,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The vertex set `S_k`, ascending.
    pub fn vertices(&self) -> &[Color] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, color: Color) -> Option<usize> {
        self.vertex_of
            .get(color)
            .copied()
            .flatten()
            .map(|i| i as usize)
    }

    #[inline]
    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn adjacent(&self, x: Color, y: Color) -> bool {
        match (self.vertex_index(x), self.vertex_index(y)) {
            (Some(i), Some(j)) => self.adjacent_idx(i, j),
            _ => false,
        }
    }

    #[inline]
    pub fn neighbor_words(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    /// `N(T)`: the vertices adjacent to every element of `T`; all of `S_k`
    /// when `T` is empty. Input colors must be vertices.
    pub fn common_neighbors(&self, t: &[Color]) -> Vec<Color> {
        let mut acc = vec![!0u64; self.words];
        mask_tail(&mut acc, self.vertices.len());
        for &c in t {
            let i = self.vertex_index(c).expect("T must consist of vertices");
            bitset::and_assign(&mut acc, self.neighbor_words(i));
        }
        bitset::iter_ones(&acc).map(|i| self.vertices[i]).collect()
    }

    /// Checks `N(T) ≠ ∅` for every subset `T` of at most four vertices,
    /// returning the lexicographically first failing subset otherwise.
    ///
    /// Since `N` is antitone, each size is checked in full before moving on,
    /// which yields a minimal witness.
    pub fn saturation(&self) -> SaturationOutcome {
        let m = self.vertices.len();
        let mut acc1 = vec![0u64; self.words];
        let mut acc2 = vec![0u64; self.words];
        let mut acc3 = vec![0u64; self.words];

        for i in 0..m {
            if bitset::is_zero(self.neighbor_words(i)) {
                return self.fail(&[i]);
            }
        }
        for i in 0..m {
            acc1.copy_from_slice(self.neighbor_words(i));
            for j in i + 1..m {
                acc2.copy_from_slice(&acc1);
                bitset::and_assign(&mut acc2, self.neighbor_words(j));
                if bitset::is_zero(&acc2) {
                    return self.fail(&[i, j]);
                }
            }
        }
        for i in 0..m {
            acc1.copy_from_slice(self.neighbor_words(i));
            for j in i + 1..m {
                acc2.copy_from_slice(&acc1);
                bitset::and_assign(&mut acc2, self.neighbor_words(j));
                for l in j + 1..m {
                    acc3.copy_from_slice(&acc2);
                    bitset::and_assign(&mut acc3, self.neighbor_words(l));
                    if bitset::is_zero(&acc3) {
                        return self.fail(&[i, j, l]);
                    }
                }
            }
        }
        let mut acc4 = vec![0u64; self.words];
        for i in 0..m {
            acc1.copy_from_slice(self.neighbor_words(i));
            for j in i + 1..m {
                acc2.copy_from_slice(&acc1);
                bitset::and_assign(&mut acc2, self.neighbor_words(j));
                if bitset::is_zero(&acc2) {
                    continue;
                }
                for l in j + 1..m {
                    acc3.copy_from_slice(&acc2);
                    bitset::and_assign(&mut acc3, self.neighbor_words(l));
                    if bitset::is_zero(&acc3) {
                        continue;
                    }
                    for h in l + 1..m {
                        acc4.copy_from_slice(&acc3);
                        bitset::and_assign(&mut acc4, self.neighbor_words(h));
                        if bitset::is_zero(&acc4) {
                            return self.fail(&[i, j, l, h]);
                        }
                    }
                }
            }
        }
        SaturationOutcome {
            saturated: true,
            witness: None,
        }
    }

    fn fail(&self, idxs: &[usize]) -> SaturationOutcome {
        SaturationOutcome {
            saturated: false,
            witness: Some(idxs.iter().map(|&i| self.vertices[i]).collect()),
        }
    }
}

fn mask_tail(words: &mut [u64], len: usize) {
    let tail = len % 64;
    if tail != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << tail) - 1;
        }
    }
    for w in words.iter_mut().skip(words_for(len)) {
        *w = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationOutcome {
    pub saturated: bool,
    /// A set `T` of at most four vertices with `N(T) = ∅`, when unsaturated.
    pub witness: Option<Vec<Color>>,
}

/// Convenience wrapper: builds the graph for `k` and runs the subset check.
pub fn is_saturated(x: &Scheme, k: u32) -> Result<SaturationOutcome, AnalysisError> {
    Ok(SaturationGraph::build(x, k)?.saturation())
}

/// The sufficient condition `|S_k| > 4·c·(k − 1)` with `c` the maximum
/// indistinguishing number over irreflexive colors. Vacuously false when no
/// color has valency `k`.
pub fn saturation_bound_holds(x: &Scheme, k: u32) -> bool {
    let t = x.tensor();
    let size = x.colors().filter(|&s| x.valency(s) == k).count() as u64;
    if size == 0 || k <= 1 {
        return false;
    }
    let c = (1..x.rank())
        .map(|s| t.indistinguishing_number(s) as u64)
        .max()
        .unwrap_or(0);
    size > 4 * c * (k as u64 - 1)
}
