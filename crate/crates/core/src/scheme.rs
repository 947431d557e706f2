//! Validated association schemes: a partition of `Ω×Ω` into basis relations
//! ("colors") containing the diagonal, closed under transposition, and with
//! constant intersection numbers.
//!
//! Colors are dense integers `0..rank` with the diagonal normalized to color
//! `0`; the transposition involution (`s ↦ s*`) is stored explicitly.

use crate::bitset::words_for;
use crate::tensor::IntersectionTensor;
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

pub type Point = usize;
pub type Color = usize;

/// Hard cap on the point count; the crate targets desk-scale instances
/// (a few hundred points) and the dense structures assume as much.
pub const MAX_POINTS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("input does not describe a partition of a square grid: {0}")]
    NotPartition(String),
    #[error("diagonal is not a single color: {0}")]
    DiagonalNotSingleColor(String),
    #[error(
        "color {color} is not closed under transposition: \
         pairs {pair:?} and {witness:?} transpose inconsistently"
    )]
    NotClosedUnderTranspose {
        color: Color,
        /// Pair whose transpose fixed the expected dual color.
        pair: (Point, Point),
        /// Pair of the same color whose transpose has a different color.
        witness: (Point, Point),
    },
    #[error(
        "intersection number c[{r},{s}]^{t} is not constant: \
         pair {pair_a:?} sees {count_a}, pair {pair_b:?} sees {count_b}"
    )]
    NotRegular {
        r: Color,
        s: Color,
        t: Color,
        pair_a: (Point, Point),
        count_a: u32,
        pair_b: (Point, Point),
        count_b: u32,
    },
    #[error("point count {0} exceeds the supported maximum {MAX_POINTS}")]
    TooLarge(usize),
}

/// An association scheme on points `0..n` with colors `0..rank`.
///
/// Immutable after construction; all operations are pure reads, so shared
/// references may be used freely across threads.
pub struct Scheme {
    n: usize,
    rank: usize,
    color: Vec<u16>,
    dual: Vec<u16>,
    valency: Vec<u32>,
    // CSR fibers: for each point α the points of Ω grouped by color of (α, ·),
    // each group sorted ascending.
    fiber_points: Vec<u16>,
    fiber_start: Vec<u32>,
    // Same fibers as bitsets over points, for fast intersections.
    fiber_bits: Vec<u64>,
    point_words: usize,
    tensor: OnceLock<IntersectionTensor>,
}

impl std::fmt::Debug for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scheme")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .finish()
    }
}

impl PartialEq for Scheme {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.rank == other.rank
            && self.color == other.color
            && self.dual == other.dual
    }
}

impl Eq for Scheme {}

impl Clone for Scheme {
    fn clone(&self) -> Self {
        Scheme {
            n: self.n,
            rank: self.rank,
            color: self.color.clone(),
            dual: self.dual.clone(),
            valency: self.valency.clone(),
            fiber_points: self.fiber_points.clone(),
            fiber_start: self.fiber_start.clone(),
            fiber_bits: self.fiber_bits.clone(),
            point_words: self.point_words,
            tensor: OnceLock::new(),
        }
    }
}

impl Scheme {
    /// Validates an `n×n` grid of arbitrary non-negative color labels and
    /// returns the normalized scheme: the diagonal becomes color `0` and the
    /// remaining colors are densely renumbered by first appearance in
    /// row-major order, which makes the numbering independent of the input
    /// labels.
    pub fn from_color_matrix(n: usize, labels: &[u32]) -> Result<Scheme, ValidationError> {
        if n == 0 {
            return Err(ValidationError::NotPartition("empty input".into()));
        }
        if n > MAX_POINTS {
            return Err(ValidationError::TooLarge(n));
        }
        if labels.len() != n * n {
            return Err(ValidationError::NotPartition(format!(
                "expected {} entries for {n} points, found {}",
                n * n,
                labels.len()
            )));
        }

        // Diagonal must carry a single label that never occurs off it.
        let diag = labels[0];
        for a in 1..n {
            if labels[a * n + a] != diag {
                return Err(ValidationError::DiagonalNotSingleColor(format!(
                    "points 0 and {a} have diagonal labels {diag} and {}",
                    labels[a * n + a]
                )));
            }
        }

        // Dense renumbering by first appearance, diagonal first.
        let mut dense: HashMap<u32, usize> = HashMap::new();
        dense.insert(diag, 0);
        let mut color = vec![0u32; n * n];
        let mut next = 1usize;
        for a in 0..n {
            for b in 0..n {
                let raw = labels[a * n + b];
                if a != b && raw == diag {
                    return Err(ValidationError::DiagonalNotSingleColor(format!(
                        "diagonal label {diag} also occurs at off-diagonal pair ({a}, {b})"
                    )));
                }
                let c = *dense.entry(raw).or_insert_with(|| {
                    let c = next;
                    next += 1;
                    c
                });
                color[a * n + b] = c as u32;
            }
        }
        let rank = next;

        let dual = check_transpose_closure(n, rank, &color)?;
        check_regularity(n, rank, &color)?;

        Ok(Self::assemble(
            n,
            rank,
            color.iter().map(|&c| c as u16).collect(),
            dual.iter().map(|&d| d as u16).collect(),
        ))
    }

    /// Rebuilds the scheme with colors renamed by `perm` (`perm[old] = new`).
    ///
    /// The permutation must fix color `0`. The partition is untouched, so the
    /// result is valid by construction; unlike [`Scheme::from_color_matrix`]
    /// the labels are *not* re-canonicalized, which makes this the right tool
    /// for exercising label-invariance of the analyses.
    pub fn relabel_colors(&self, perm: &[Color]) -> Scheme {
        assert_eq!(perm.len(), self.rank, "permutation rank mismatch");
        assert_eq!(perm[0], 0, "color 0 must stay fixed");
        let mut seen = vec![false; self.rank];
        for &p in perm {
            assert!(p < self.rank && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let color: Vec<u16> = self
            .color
            .iter()
            .map(|&c| perm[c as usize] as u16)
            .collect();
        let mut dual = vec![0u16; self.rank];
        for s in 0..self.rank {
            dual[perm[s]] = perm[self.dual[s] as usize] as u16;
        }
        Self::assemble(self.n, self.rank, color, dual)
    }

    fn assemble(n: usize, rank: usize, color: Vec<u16>, dual: Vec<u16>) -> Scheme {
        let mut valency = vec![0u32; rank];
        for b in 0..n {
            valency[color[b] as usize] += 1;
        }

        let point_words = words_for(n);
        let mut fiber_points = vec![0u16; n * n];
        let mut fiber_start = vec![0u32; n * (rank + 1) + 1];
        let mut fiber_bits = vec![0u64; n * rank * point_words];
        let mut pos = 0u32;
        for a in 0..n {
            let row = &color[a * n..(a + 1) * n];
            for s in 0..rank {
                fiber_start[a * (rank + 1) + s] = pos;
                for (b, &c) in row.iter().enumerate() {
                    if c as usize == s {
                        fiber_points[pos as usize] = b as u16;
                        pos += 1;
                        fiber_bits[(a * rank + s) * point_words + b / 64] |= 1u64 << (b % 64);
                    }
                }
            }
            fiber_start[a * (rank + 1) + rank] = pos;
        }

        Scheme {
            n,
            rank,
            color,
            dual,
            valency,
            fiber_points,
            fiber_start,
            fiber_bits,
            point_words,
            tensor: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn id_color(&self) -> Color {
        0
    }

    #[inline]
    pub fn color(&self, a: Point, b: Point) -> Color {
        self.color[a * self.n + b] as usize
    }

    pub fn color_matrix(&self) -> &[u16] {
        &self.color
    }

    #[inline]
    pub fn dual(&self, s: Color) -> Color {
        self.dual[s] as usize
    }

    pub fn dual_map(&self) -> &[u16] {
        &self.dual
    }

    /// Valency `n_s`: the size of any fiber `αs`.
    #[inline]
    pub fn valency(&self, s: Color) -> u32 {
        self.valency[s]
    }

    pub fn valencies(&self) -> &[u32] {
        &self.valency
    }

    pub fn is_thin(&self, s: Color) -> bool {
        self.valency[s] == 1
    }

    /// The fiber `αs = {β : (α, β) ∈ s}`, ascending.
    #[inline]
    pub fn fiber(&self, a: Point, s: Color) -> &[u16] {
        let lo = self.fiber_start[a * (self.rank + 1) + s] as usize;
        let hi = self.fiber_start[a * (self.rank + 1) + s + 1] as usize;
        &self.fiber_points[lo..hi]
    }

    /// The fiber `αs` as a bitset word slice over points.
    #[inline]
    pub fn fiber_words(&self, a: Point, s: Color) -> &[u64] {
        let base = (a * self.rank + s) * self.point_words;
        &self.fiber_bits[base..base + self.point_words]
    }

    pub fn point_words(&self) -> usize {
        self.point_words
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        0..self.rank
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        0..self.n
    }

    /// First pair of the given color in row-major order.
    pub fn representative_pair(&self, s: Color) -> (Point, Point) {
        for a in 0..self.n {
            if let Some(&b) = self.fiber(a, s).first() {
                return (a, b as usize);
            }
        }
        unreachable!("every color occurs at least once")
    }

    /// The intersection tensor, computed on first use and cached.
    pub fn tensor(&self) -> &IntersectionTensor {
        self.tensor
            .get_or_init(|| IntersectionTensor::compute(self))
    }

    /// The localized relation `r ∩ (αx × αy)` as explicit point pairs.
    pub fn localized_relation(
        &self,
        alpha: Point,
        r: Color,
        x: Color,
        y: Color,
    ) -> Vec<(Point, Point)> {
        let mut pairs = Vec::new();
        for &a in self.fiber(alpha, x) {
            for &b in self.fiber(alpha, y) {
                if self.color(a as usize, b as usize) == r {
                    pairs.push((a as usize, b as usize));
                }
            }
        }
        pairs
    }

    /// The points that see both ends of the pair `(α, β)` through the same
    /// color: `{γ : r(γ, α) = r(γ, β)}`.
    pub fn indistinguishing_set(&self, alpha: Point, beta: Point) -> Vec<Point> {
        (0..self.n)
            .filter(|&c| self.color(c, alpha) == self.color(c, beta))
            .collect()
    }

    /// Indistinguishing number `c(s) = Σ_t c[t, t*]^s` via the tensor, with a
    /// debug cross-check against the direct count on a representative pair.
    pub fn indistinguishing_number(&self, s: Color) -> u32 {
        let value = self.tensor().indistinguishing_number(s);
        debug_assert_eq!(
            {
                let (a, b) = self.representative_pair(s);
                self.indistinguishing_set(a, b).len() as u32
            },
            value
        );
        value
    }
}

fn check_transpose_closure(
    n: usize,
    rank: usize,
    color: &[u32],
) -> Result<Vec<u32>, ValidationError> {
    let mut dual = vec![u32::MAX; rank];
    let mut fixed_by = vec![(0usize, 0usize); rank];
    for a in 0..n {
        for b in 0..n {
            let s = color[a * n + b] as usize;
            let t = color[b * n + a];
            if dual[s] == u32::MAX {
                dual[s] = t;
                fixed_by[s] = (a, b);
            } else if dual[s] != t {
                return Err(ValidationError::NotClosedUnderTranspose {
                    color: s,
                    pair: fixed_by[s],
                    witness: (a, b),
                });
            }
        }
    }
    // dual ∘ dual = id follows once every pair agrees, but assert it anyway.
    for s in 0..rank {
        debug_assert_eq!(dual[dual[s] as usize] as usize, s);
    }
    Ok(dual)
}

/// Computes the tensor from one representative pair per color, then verifies
/// every pair of the grid against it, reporting a concrete witness on
/// failure.
fn check_regularity(n: usize, rank: usize, color: &[u32]) -> Result<(), ValidationError> {
    let mut reps: Vec<Option<(usize, usize)>> = vec![None; rank];
    for a in 0..n {
        for b in 0..n {
            let t = color[a * n + b] as usize;
            if reps[t].is_none() {
                reps[t] = Some((a, b));
            }
        }
    }

    // Reference counts per target color, as a (r, s) → count map.
    let count_pair = |a: usize, b: usize| -> HashMap<(u32, u32), u32> {
        let mut counts = HashMap::new();
        for g in 0..n {
            *counts
                .entry((color[a * n + g], color[g * n + b]))
                .or_insert(0) += 1;
        }
        counts
    };

    let reference: Vec<HashMap<(u32, u32), u32>> = reps
        .iter()
        .map(|rep| {
            let (a, b) = rep.expect("every color has a representative");
            count_pair(a, b)
        })
        .collect();

    for a in 0..n {
        for b in 0..n {
            let t = color[a * n + b] as usize;
            let rep = reps[t].unwrap();
            if (a, b) == rep {
                continue;
            }
            let counts = count_pair(a, b);
            // Both multiset totals are n, so agreement on the buckets of this
            // pair implies agreement everywhere.
            for (&(r, s), &c) in &counts {
                let expected = reference[t].get(&(r, s)).copied().unwrap_or(0);
                if expected != c {
                    return Err(ValidationError::NotRegular {
                        r: r as usize,
                        s: s as usize,
                        t,
                        pair_a: rep,
                        count_a: expected,
                        pair_b: (a, b),
                        count_b: c,
                    });
                }
            }
        }
    }
    Ok(())
}
