//! Faithful partial point maps and the backtracking machinery built on them:
//! extension to full isomorphisms, automorphism groups via stabilizer
//! chains, and the schurity test.
//!
//! A partial bijection between point sets is faithful (relative to a color
//! map φ) when every pair of its domain transforms by φ. The searches keep,
//! for every unassigned source point, the bitset of still-possible images;
//! assigning a point intersects each remaining candidate set with one fiber
//! of the target scheme.

use crate::bitset::{self};
use crate::iso::AlgebraicIso;
use crate::scheme::{Point, Scheme};
use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaithfulError {
    #[error("domain and image lists have different lengths")]
    LengthMismatch,
    #[error("domain or image repeats a point")]
    NotInjective,
    #[error("point {0} is out of range")]
    PointOutOfRange(Point),
    #[error("map is not faithful at domain pair ({0}, {1})")]
    SeedNotFaithful(Point, Point),
}

/// A partial point bijection given as parallel domain/image lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialFaithfulMap {
    pub dom: Vec<Point>,
    pub img: Vec<Point>,
}

impl PartialFaithfulMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(Point, Point)]) -> Self {
        PartialFaithfulMap {
            dom: pairs.iter().map(|p| p.0).collect(),
            img: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.dom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dom.is_empty()
    }

    /// Verifies the faithfulness condition on every pair of the domain.
    pub fn check(
        &self,
        src: &Scheme,
        dst: &Scheme,
        iso: &AlgebraicIso,
    ) -> Result<(), FaithfulError> {
        if self.dom.len() != self.img.len() {
            return Err(FaithfulError::LengthMismatch);
        }
        for &p in &self.dom {
            if p >= src.n() {
                return Err(FaithfulError::PointOutOfRange(p));
            }
        }
        for &p in &self.img {
            if p >= dst.n() {
                return Err(FaithfulError::PointOutOfRange(p));
            }
        }
        let mut sd = self.dom.clone();
        let mut si = self.img.clone();
        sd.sort_unstable();
        si.sort_unstable();
        if sd.windows(2).any(|w| w[0] == w[1]) || si.windows(2).any(|w| w[0] == w[1]) {
            return Err(FaithfulError::NotInjective);
        }
        for (i, (&a, &ai)) in self.dom.iter().zip(&self.img).enumerate() {
            for (&b, &bi) in self.dom.iter().zip(&self.img).skip(i) {
                if iso.apply(src.color(a, b)) != dst.color(ai, bi) {
                    return Err(FaithfulError::SeedNotFaithful(a, b));
                }
            }
        }
        Ok(())
    }
}

/// The set of target points to which `f` can be extended at `γ`:
/// the intersection of the fibers `α^f · φ(r(α, γ))` over the domain.
/// Returned as a bitset word vector over target points.
pub fn extension_candidates(
    src: &Scheme,
    dst: &Scheme,
    iso: &AlgebraicIso,
    f: &PartialFaithfulMap,
    gamma: Point,
) -> Vec<u64> {
    let words = dst.point_words();
    let mut acc = full_row(dst.n(), words);
    for (&a, &ai) in f.dom.iter().zip(&f.img) {
        bitset::and_assign(
            &mut acc,
            dst.fiber_words(ai, iso.apply(src.color(a, gamma))),
        );
    }
    acc
}

fn full_row(n: usize, words: usize) -> Vec<u64> {
    let mut row = vec![!0u64; words];
    let tail = n % 64;
    if tail != 0 {
        row[words - 1] = (1u64 << tail) - 1;
    }
    row
}

struct Searcher<'a> {
    src: &'a Scheme,
    dst: &'a Scheme,
    phi: &'a AlgebraicIso,
    n: usize,
    words: usize,
    cand: Vec<u64>,
    assigned: Vec<Option<u16>>,
    n_assigned: usize,
    snapshots: Vec<Vec<u64>>,
    solutions: Vec<Vec<u16>>,
    limit: usize,
}

impl<'a> Searcher<'a> {
    fn new(src: &'a Scheme, dst: &'a Scheme, phi: &'a AlgebraicIso, limit: usize) -> Self {
        let n = src.n();
        let words = dst.point_words();
        let row = full_row(dst.n(), words);
        let mut cand = Vec::with_capacity(n * words);
        for _ in 0..n {
            cand.extend_from_slice(&row);
        }
        Searcher {
            src,
            dst,
            phi,
            n,
            words,
            cand,
            assigned: vec![None; n],
            n_assigned: 0,
            snapshots: Vec::new(),
            solutions: Vec::new(),
            limit,
        }
    }

    fn row(&self, p: Point) -> &[u64] {
        &self.cand[p * self.words..(p + 1) * self.words]
    }

    /// Assigns `γ ↦ δ` if δ is still a candidate, narrowing the candidate
    /// rows of every unassigned point. Returns false without side effects
    /// when δ is not available.
    fn assign(&mut self, gamma: Point, delta: Point) -> bool {
        if self.row(gamma)[delta / 64] >> (delta % 64) & 1 == 0 {
            return false;
        }
        self.snapshots.push(self.cand.clone());
        self.assigned[gamma] = Some(delta as u16);
        self.n_assigned += 1;
        for u in 0..self.n {
            if self.assigned[u].is_none() {
                let fiber = self
                    .dst
                    .fiber_words(delta, self.phi.apply(self.src.color(gamma, u)));
                let base = u * self.words;
                for (i, w) in fiber.iter().enumerate() {
                    self.cand[base + i] &= w;
                }
            }
        }
        true
    }

    fn undo(&mut self, gamma: Point) {
        self.cand = self.snapshots.pop().expect("assign/undo must pair up");
        self.assigned[gamma] = None;
        self.n_assigned -= 1;
    }

    /// Most-constrained unassigned point; ties break to the smallest index.
    fn pick(&self) -> Option<(Point, usize)> {
        let mut best: Option<(Point, usize)> = None;
        for p in 0..self.n {
            if self.assigned[p].is_some() {
                continue;
            }
            let count = bitset::count_ones(self.row(p));
            if best.is_none_or(|(_, c)| count < c) {
                best = Some((p, count));
                if count == 0 {
                    break;
                }
            }
        }
        best
    }

    /// Depth-first search; returns true when the solution limit is reached.
    fn dfs(&mut self) -> bool {
        let Some((gamma, count)) = self.pick() else {
            // Complete assignment: verify faithfulness on all pairs before
            // accepting, independently of how the map was built.
            let map: Vec<u16> = self.assigned.iter().map(|a| a.unwrap()).collect();
            for a in 0..self.n {
                for b in 0..self.n {
                    assert_eq!(
                        self.phi.apply(self.src.color(a, b)),
                        self.dst.color(map[a] as usize, map[b] as usize),
                        "search produced an unfaithful map"
                    );
                }
            }
            self.solutions.push(map);
            return self.solutions.len() >= self.limit;
        };
        if count == 0 {
            return false;
        }
        let candidates: Vec<Point> = bitset::iter_ones(self.row(gamma)).collect();
        for delta in candidates {
            if self.assign(gamma, delta) {
                let done = self.dfs();
                self.undo(gamma);
                if done {
                    return true;
                }
            }
        }
        false
    }

    fn apply_seed(&mut self, seed: &PartialFaithfulMap) -> bool {
        for (&a, &ai) in seed.dom.iter().zip(&seed.img) {
            if !self.assign(a, ai) {
                return false;
            }
        }
        true
    }
}

/// Extends a faithful seed to a full isomorphism inducing `iso`, points
/// chosen most-constrained-first and images in ascending order; `None` after
/// exhaustive search.
pub fn extend_backtracking(
    src: &Scheme,
    dst: &Scheme,
    iso: &AlgebraicIso,
    seed: &PartialFaithfulMap,
) -> Result<Option<Vec<u16>>, FaithfulError> {
    Ok(enumerate_isomorphisms(src, dst, iso, seed, 1)?
        .into_iter()
        .next())
}

/// All (up to `limit`) full isomorphisms inducing `iso` that extend the
/// seed, in search order.
pub fn enumerate_isomorphisms(
    src: &Scheme,
    dst: &Scheme,
    iso: &AlgebraicIso,
    seed: &PartialFaithfulMap,
    limit: usize,
) -> Result<Vec<Vec<u16>>, FaithfulError> {
    seed.check(src, dst, iso)?;
    if src.n() != dst.n() {
        return Ok(Vec::new());
    }
    let mut searcher = Searcher::new(src, dst, iso, limit);
    if !searcher.apply_seed(seed) {
        return Ok(Vec::new());
    }
    searcher.dfs();
    Ok(searcher.solutions)
}

/// Automorphisms fixing `0..prefix` pointwise beyond sending `prefix ↦ γ`
/// are probed with a shared searcher; used by the stabilizer chain.
fn chain_level(x: &Scheme, id: &AlgebraicIso, prefix: usize) -> (usize, Vec<Vec<u16>>) {
    let mut searcher = Searcher::new(x, x, id, 1);
    for p in 0..prefix {
        let ok = searcher.assign(p, p);
        debug_assert!(ok, "the identity always survives the prefix");
    }
    let mut orbit = 1; // prefix ↦ prefix via the identity
    let mut transversal = Vec::new();
    let candidates: Vec<Point> = bitset::iter_ones(searcher.row(prefix))
        .filter(|&g| g > prefix)
        .collect();
    for gamma in candidates {
        if searcher.assign(prefix, gamma) {
            searcher.solutions.clear();
            if searcher.dfs() {
                orbit += 1;
                transversal.push(searcher.solutions[0].clone());
            }
            searcher.undo(prefix);
        }
    }
    (orbit, transversal)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub order: BigUint,
    /// Stabilizer-chain transversal representatives; they generate the group.
    pub generators: Vec<Vec<u16>>,
    /// Full element list, materialized for small schemes and group orders.
    pub elements: Option<Vec<Vec<u16>>>,
}

/// Element lists are only materialized below this order (and 64 points).
pub const ELEMENT_CAP: usize = 100_000;

pub fn automorphism_group(x: &Scheme) -> AutomorphismGroup {
    automorphism_group_with_cap(x, ELEMENT_CAP)
}

pub fn automorphism_group_with_cap(x: &Scheme, element_cap: usize) -> AutomorphismGroup {
    let id = AlgebraicIso::identity(x);
    let mut order = BigUint::one();
    let mut generators = Vec::new();
    for prefix in 0..x.n() {
        let (orbit, transversal) = chain_level(x, &id, prefix);
        order *= BigUint::from(orbit);
        generators.extend(transversal);
    }

    let elements = if x.n() <= 64 && order <= BigUint::from(element_cap) {
        let count: usize = order.to_u64_digits().first().map_or(1, |&d| d as usize);
        let all = enumerate_isomorphisms(x, x, &id, &PartialFaithfulMap::empty(), count + 1)
            .expect("empty seed is faithful");
        assert_eq!(
            all.len(),
            count,
            "chain order and full enumeration disagree"
        );
        Some(all)
    } else {
        None
    };

    AutomorphismGroup {
        order,
        generators,
        elements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurityReport {
    pub aut_order: BigUint,
    pub aut_transitive: bool,
    /// Number of orbits of the automorphism group on ordered pairs.
    pub pair_orbit_count: usize,
    pub schurian: bool,
}

/// A scheme is schurian exactly when the pair orbits of its automorphism
/// group reproduce the colors.
pub fn schurity(x: &Scheme) -> SchurityReport {
    let group = automorphism_group_with_cap(x, 0);
    let n = x.n();

    let mut point_orbit = vec![false; n];
    point_orbit[0] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        for g in &group.generators {
            let q = g[p] as usize;
            if !point_orbit[q] {
                point_orbit[q] = true;
                stack.push(q);
            }
        }
    }
    let aut_transitive = point_orbit.iter().all(|&b| b);

    // Pair orbits under the generators.
    let mut orbit = vec![usize::MAX; n * n];
    let mut orbit_count = 0;
    for start in 0..n * n {
        if orbit[start] != usize::MAX {
            continue;
        }
        orbit[start] = orbit_count;
        let mut stack = vec![start];
        while let Some(cell) = stack.pop() {
            let (a, b) = (cell / n, cell % n);
            for g in &group.generators {
                let img = g[a] as usize * n + g[b] as usize;
                if orbit[img] == usize::MAX {
                    orbit[img] = orbit_count;
                    stack.push(img);
                }
            }
        }
        orbit_count += 1;
    }

    // Every orbit stays inside one color; schurian means the partitions agree.
    let mut color_of_orbit = vec![usize::MAX; orbit_count];
    for (cell, &o) in orbit.iter().enumerate() {
        let c = x.color(cell / n, cell % n);
        if color_of_orbit[o] == usize::MAX {
            color_of_orbit[o] = c;
        } else {
            assert_eq!(color_of_orbit[o], c, "automorphisms must preserve colors");
        }
    }

    SchurityReport {
        aut_order: group.order,
        aut_transitive,
        pair_orbit_count: orbit_count,
        schurian: aut_transitive && orbit_count == x.rank(),
    }
}

pub fn is_schurian(x: &Scheme) -> bool {
    schurity(x).schurian
}
