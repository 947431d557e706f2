//! Desarguesian analysis of a two-valenced scheme.
//!
//! The scheme induces a point-line geometry on its colors: lines are the
//! complex products `x*y`. An initial configuration is a triple of
//! saturation-graph vertices `x ∼ z ∼ y` together with `r ∈ x*z` and
//! `s ∈ z*y`; it is *linked* when a perspective triangle pair
//! `(u, v, w)` over some common neighbor `q` pins the three intersections
//! `x*z ∩ uw*`, `z*y ∩ wv*`, `x*y ∩ uv*` down to `{r}`, `{s}`, `{t}` with
//! `t ∈ rs`. A scheme is Desarguesian when every initial configuration is
//! linked.

use crate::bitset::{self, words_for};
use crate::saturation::SaturationGraph;
use crate::scheme::{Color, Point, Scheme};
use crate::tensor::IntersectionTensor;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesarguesError {
    #[error("the scheme is not two-valenced: valency spectrum {0:?}")]
    NotTwoValenced(Vec<u32>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitialConfiguration {
    pub x: Color,
    pub y: Color,
    pub z: Color,
    pub r: Color,
    pub s: Color,
}

/// Ten colors witnessing that `(r, s)` is linked with respect to `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesarguesCertificate {
    pub x: Color,
    pub y: Color,
    pub z: Color,
    pub q: Color,
    pub u: Color,
    pub v: Color,
    pub w: Color,
    pub r: Color,
    pub s: Color,
    pub t: Color,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesarguesStats {
    /// Ordered triples (x, y, z) with x ∼ z ∼ y.
    pub triples: u64,
    /// Triples discharged by the loop condition (L1).
    pub l1_triples: u64,
    /// Triples discharged by a disjoint common neighbor (L2).
    pub l2_triples: u64,
    /// Configurations that went through the explicit linkage search.
    pub searched_configs: u64,
    /// All initial configurations, including fast-path ones.
    pub total_configs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesarguesOutcome {
    pub desarguesian: bool,
    /// Lexicographically first configuration that is not linked.
    pub failing: Option<InitialConfiguration>,
    pub stats: DesarguesStats,
}

/// Precomputed state for the linkage searches on one two-valenced scheme.
pub struct DesarguesContext<'a> {
    x: &'a Scheme,
    t: &'a IntersectionTensor,
    graph: SaturationGraph,
    k: u32,
    words: usize,
    /// Complex products as bitsets over colors, indexed by `r * rank + s`.
    prod_bits: Vec<u64>,
}

impl<'a> DesarguesContext<'a> {
    pub fn new(x: &'a Scheme) -> Result<DesarguesContext<'a>, DesarguesError> {
        let mut distinct: Vec<u32> = x.valencies().to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let k = match distinct.as_slice() {
            [1, k] => *k,
            _ => return Err(DesarguesError::NotTwoValenced(distinct)),
        };
        let graph = SaturationGraph::build(x, k).expect("two-valenced schemes have vertices");

        let t = x.tensor();
        let rank = x.rank();
        let words = words_for(rank);
        let mut prod_bits = vec![0u64; rank * rank * words];
        for r in 0..rank {
            for s in 0..rank {
                let base = (r * rank + s) * words;
                for &u in t.product(r, s) {
                    prod_bits[base + u as usize / 64] |= 1u64 << (u as usize % 64);
                }
            }
        }

        Ok(DesarguesContext {
            x,
            t,
            graph,
            k,
            words,
            prod_bits,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        self.x
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn graph(&self) -> &SaturationGraph {
        &self.graph
    }

    #[inline]
    fn product_words(&self, r: Color, s: Color) -> &[u64] {
        let base = (r * self.x.rank() + s) * self.words;
        &self.prod_bits[base..base + self.words]
    }

    /// Intersects `a ∩ b` into `out`; returns the unique element if the
    /// intersection is a singleton.
    fn singleton_intersection(&self, a: &[u64], b: &[u64], out: &mut [u64]) -> Option<Color> {
        out.copy_from_slice(a);
        bitset::and_assign(out, b);
        (bitset::count_ones(out) == 1).then(|| bitset::first_one(out).unwrap())
    }

    /// Union of all products `ab` with `a ∈ left`, `b ∈ right`, into `out`.
    fn set_product_into(&self, left: &[u16], right: &[u16], out: &mut [u64]) {
        out.fill(0);
        for &a in left {
            for &b in right {
                for (o, w) in out
                    .iter_mut()
                    .zip(self.product_words(a as usize, b as usize))
                {
                    *o |= w;
                }
            }
        }
    }

    /// Streams the initial configurations in lexicographic `(x, y, z, r, s)`
    /// order.
    pub fn initial_configurations(&self) -> InitialConfigurations<'_, 'a> {
        InitialConfigurations {
            ctx: self,
            xi: 0,
            yi: 0,
            zi: usize::MAX,
            r_list: &[],
            s_list: &[],
            ri: 0,
            si: 0,
        }
    }

    /// Searches `q ∈ N(x, y, z)`, then `u ∈ x*q`, `w ∈ z*q`, `v ∈ y*q` in
    /// ascending color order for the three singleton conditions and
    /// `t ∈ rs`; the first certificate wins.
    pub fn is_linked(&self, cfg: &InitialConfiguration) -> Option<DesarguesCertificate> {
        self.search_certificates(cfg, true).into_iter().next()
    }

    /// Exhaustive variant of [`Self::is_linked`]: every certificate for the
    /// configuration, in search order.
    pub fn certificates(&self, cfg: &InitialConfiguration) -> Vec<DesarguesCertificate> {
        self.search_certificates(cfg, false)
    }

    fn search_certificates(
        &self,
        cfg: &InitialConfiguration,
        first_only: bool,
    ) -> Vec<DesarguesCertificate> {
        let &InitialConfiguration { x, y, z, r, s } = cfg;
        let xd = self.x.dual(x);
        let yd = self.x.dual(y);
        let zd = self.x.dual(z);
        let xz = self.product_words(xd, z);
        let zy = self.product_words(zd, y);
        let xy = self.product_words(xd, y);

        let mut scratch = vec![0u64; self.words];
        let mut found = Vec::new();
        for q in self.graph.common_neighbors(&[x, y, z]) {
            for &u in self.t.product(xd, q) {
                let u = u as usize;
                for &w in self.t.product(zd, q) {
                    let w = w as usize;
                    let uw = self.product_words(u, self.x.dual(w));
                    if self.singleton_intersection(xz, uw, &mut scratch) != Some(r) {
                        continue;
                    }
                    for &v in self.t.product(yd, q) {
                        let v = v as usize;
                        let wv = self.product_words(w, self.x.dual(v));
                        if self.singleton_intersection(zy, wv, &mut scratch) != Some(s) {
                            continue;
                        }
                        let uv = self.product_words(u, self.x.dual(v));
                        let Some(t) = self.singleton_intersection(xy, uv, &mut scratch) else {
                            continue;
                        };
                        if self.t.c(r, s, t) == 0 {
                            continue;
                        }
                        found.push(DesarguesCertificate {
                            x,
                            y,
                            z,
                            q,
                            u,
                            v,
                            w,
                            r,
                            s,
                            t,
                        });
                        if first_only {
                            return found;
                        }
                    }
                }
            }
        }
        found
    }

    /// Loop condition: `z ∼ z` and `(xx* · yy*) ∩ zz* = {1}`.
    pub fn check_l1(&self, x: Color, y: Color, z: Color) -> bool {
        if !self.graph.adjacent(z, z) {
            return false;
        }
        let mut u = vec![0u64; self.words];
        let mut out = vec![0u64; self.words];
        self.set_product_into(
            self.t.product(x, self.x.dual(x)),
            self.t.product(y, self.x.dual(y)),
            &mut u,
        );
        self.singleton_intersection(&u, self.product_words(z, self.x.dual(z)), &mut out) == Some(0)
    }

    /// Disjointness condition: the first `q ∈ S_k` with
    /// `qq* ∩ (xx*yy* ∪ xx*zz* ∪ zz*yy*) = {1}`.
    pub fn check_l2(&self, x: Color, y: Color, z: Color) -> Option<Color> {
        let union = self.l2_union(x, y, z);
        self.l2_scan(&union)
    }

    fn l2_union(&self, x: Color, y: Color, z: Color) -> Vec<u64> {
        let xx = self.t.product(x, self.x.dual(x));
        let yy = self.t.product(y, self.x.dual(y));
        let zz = self.t.product(z, self.x.dual(z));
        let mut union = vec![0u64; self.words];
        let mut part = vec![0u64; self.words];
        for (a, b) in [(&xx, &yy), (&xx, &zz), (&zz, &yy)] {
            self.set_product_into(a, b, &mut part);
            for (u, w) in union.iter_mut().zip(&part) {
                *u |= w;
            }
        }
        union
    }

    fn l2_scan(&self, union: &[u64]) -> Option<Color> {
        let mut out = vec![0u64; self.words];
        self.graph.vertices().iter().copied().find(|&q| {
            self.singleton_intersection(self.product_words(q, self.x.dual(q)), union, &mut out)
                == Some(0)
        })
    }

    /// Whether every initial configuration is linked. Triples passing L1 or
    /// L2 are accepted wholesale; the rest go through the explicit search.
    /// The scan is exhaustive so that the statistics and the failing
    /// configuration (lexicographically first) are deterministic.
    pub fn is_desarguesian(&self) -> DesarguesOutcome {
        let verts = self.graph.vertices();
        let per_x: Vec<(DesarguesStats, Option<InitialConfiguration>)> = verts
            .par_iter()
            .map(|&x| self.scan_leading_vertex(x))
            .collect();

        let mut stats = DesarguesStats::default();
        let mut failing = None;
        for (s, fail) in per_x {
            stats.triples += s.triples;
            stats.l1_triples += s.l1_triples;
            stats.l2_triples += s.l2_triples;
            stats.searched_configs += s.searched_configs;
            stats.total_configs += s.total_configs;
            if failing.is_none() {
                failing = fail;
            }
        }
        DesarguesOutcome {
            desarguesian: failing.is_none(),
            failing,
            stats,
        }
    }

    fn scan_leading_vertex(&self, x: Color) -> (DesarguesStats, Option<InitialConfiguration>) {
        let verts = self.graph.vertices();
        let mut stats = DesarguesStats::default();
        let mut failing: Option<InitialConfiguration> = None;
        for &y in verts {
            for &z in verts {
                if !(self.graph.adjacent(x, z) && self.graph.adjacent(z, y)) {
                    continue;
                }
                stats.triples += 1;
                let r_list = self.t.product(self.x.dual(x), z);
                let s_list = self.t.product(self.x.dual(z), y);
                stats.total_configs += (r_list.len() * s_list.len()) as u64;
                if self.check_l1(x, y, z) {
                    stats.l1_triples += 1;
                    continue;
                }
                if self.check_l2(x, y, z).is_some() {
                    stats.l2_triples += 1;
                    continue;
                }
                for &r in r_list {
                    for &s in s_list {
                        stats.searched_configs += 1;
                        let cfg = InitialConfiguration {
                            x,
                            y,
                            z,
                            r: r as usize,
                            s: s as usize,
                        };
                        if failing.is_none() && self.is_linked(&cfg).is_none() {
                            failing = Some(cfg);
                        }
                    }
                }
            }
        }
        (stats, failing)
    }

    /// Re-derives every certificate invariant from the tensor, independently
    /// of how the certificate was found.
    pub fn verify_certificate(&self, c: &DesarguesCertificate) -> Result<(), String> {
        let d = |s| self.x.dual(s);
        for (name, col) in [("x", c.x), ("y", c.y), ("z", c.z), ("q", c.q)] {
            if self.x.valency(col) != self.k {
                return Err(format!("{name} = {col} is not a valency-{} color", self.k));
            }
        }
        for (a, b) in [(c.x, c.z), (c.z, c.y)] {
            if !self.graph.adjacent(a, b) {
                return Err(format!("colors {a} and {b} are not adjacent"));
            }
        }
        for (name, other) in [("x", c.x), ("y", c.y), ("z", c.z)] {
            if !self.graph.adjacent(c.q, other) {
                return Err(format!("q is not a common neighbor of {name}"));
            }
        }
        for (name, col, from) in [("u", c.u, c.x), ("v", c.v, c.y), ("w", c.w, c.z)] {
            if self.t.c(d(from), c.q, col) == 0 {
                return Err(format!("{name} does not lie on the line to q"));
            }
        }
        let inter = |line: &[u64], a: Color, b: Color| -> Vec<Color> {
            let mut out = vec![0u64; self.words];
            out.copy_from_slice(line);
            bitset::and_assign(&mut out, self.product_words(a, b));
            bitset::iter_ones(&out).collect()
        };
        if inter(self.product_words(d(c.x), c.z), c.u, d(c.w)) != vec![c.r] {
            return Err("x*z ∩ uw* is not {r}".into());
        }
        if inter(self.product_words(d(c.z), c.y), c.w, d(c.v)) != vec![c.s] {
            return Err("z*y ∩ wv* is not {s}".into());
        }
        if inter(self.product_words(d(c.x), c.y), c.u, d(c.v)) != vec![c.t] {
            return Err("x*y ∩ uv* is not {t}".into());
        }
        if self.t.c(c.r, c.s, c.t) == 0 {
            return Err("t does not lie on the line rs".into());
        }
        Ok(())
    }

    /// Checks the localized composition law for a certificate at a base
    /// point: `r_{x,z} · s_{z,y} ⊆ t_{x,y}`, with equality when `x ∼ y`.
    pub fn verify_localized_composition(&self, c: &DesarguesCertificate, alpha: Point) -> bool {
        let r_xz = self.x.localized_relation(alpha, c.r, c.x, c.z);
        let s_zy = self.x.localized_relation(alpha, c.s, c.z, c.y);
        let t_xy = self.x.localized_relation(alpha, c.t, c.x, c.y);

        let mut composed: Vec<(Point, Point)> = Vec::new();
        for &(a, b) in &r_xz {
            for &(b2, cc) in &s_zy {
                if b == b2 && !composed.contains(&(a, cc)) {
                    composed.push((a, cc));
                }
            }
        }
        let subset = composed.iter().all(|p| t_xy.contains(p));
        if !subset {
            return false;
        }
        if self.graph.adjacent(c.x, c.y) {
            return t_xy.iter().all(|p| composed.contains(p));
        }
        true
    }
}

/// Iterator over initial configurations in lexicographic order.
pub struct InitialConfigurations<'b, 'a> {
    ctx: &'b DesarguesContext<'a>,
    xi: usize,
    yi: usize,
    zi: usize,
    r_list: &'a [u16],
    s_list: &'a [u16],
    ri: usize,
    si: usize,
}

impl InitialConfigurations<'_, '_> {
    /// Moves (xi, yi, zi) to the next valid triple, loading its r/s lists.
    /// Returns false when exhausted.
    fn advance_triple(&mut self) -> bool {
        let verts = self.ctx.graph.vertices();
        let m = verts.len();
        loop {
            self.zi = self.zi.wrapping_add(1);
            if self.zi >= m {
                self.zi = 0;
                self.yi += 1;
                if self.yi >= m {
                    self.yi = 0;
                    self.xi += 1;
                    if self.xi >= m {
                        return false;
                    }
                }
            }
            let (x, y, z) = (verts[self.xi], verts[self.yi], verts[self.zi]);
            if self.ctx.graph.adjacent(x, z) && self.ctx.graph.adjacent(z, y) {
                self.r_list = self.ctx.t.product(self.ctx.x.dual(x), z);
                self.s_list = self.ctx.t.product(self.ctx.x.dual(z), y);
                self.ri = 0;
                self.si = 0;
                debug_assert!(!self.r_list.is_empty() && !self.s_list.is_empty());
                return true;
            }
        }
    }
}

impl Iterator for InitialConfigurations<'_, '_> {
    type Item = InitialConfiguration;

    fn next(&mut self) -> Option<InitialConfiguration> {
        if self.ri >= self.r_list.len() && !self.advance_triple() {
            return None;
        }
        let verts = self.ctx.graph.vertices();
        let cfg = InitialConfiguration {
            x: verts[self.xi],
            y: verts[self.yi],
            z: verts[self.zi],
            r: self.r_list[self.ri] as usize,
            s: self.s_list[self.si] as usize,
        };
        self.si += 1;
        if self.si >= self.s_list.len() {
            self.si = 0;
            self.ri += 1;
        }
        Some(cfg)
    }
}
