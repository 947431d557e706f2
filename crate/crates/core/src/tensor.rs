//! Intersection numbers `c[r,s]^t = |αr ∩ βs*|` for `(α, β) ∈ t`, stored as a
//! dense `rank³` array together with the valency vector and the complex
//! product table derived from the nonzero pattern.

use crate::scheme::{Color, Scheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    rank: usize,
    c: Vec<u32>,
    valency: Vec<u32>,
    /// `products[r * rank + s]` lists the colors `t` with `c[r,s]^t > 0`,
    /// ascending.
    products: Vec<Vec<u16>>,
}

impl IntersectionTensor {
    /// Computes the tensor from one representative pair per color and
    /// cross-checks a second representative when the color has one.
    ///
    /// Validation already guaranteed regularity, so the cross-check guards
    /// against internal bookkeeping errors only.
    pub fn compute(x: &Scheme) -> IntersectionTensor {
        let n = x.n();
        let rank = x.rank();
        let mut c = vec![0u32; rank * rank * rank];

        let mut first = vec![None; rank];
        let mut second = vec![None; rank];
        for a in 0..n {
            for b in 0..n {
                let t = x.color(a, b);
                if first[t].is_none() {
                    first[t] = Some((a, b));
                } else if second[t].is_none() {
                    second[t] = Some((a, b));
                }
            }
        }

        for t in 0..rank {
            let (a, b) = first[t].expect("every color occurs");
            for g in 0..n {
                let r = x.color(a, g);
                let s = x.color(g, b);
                c[(r * rank + s) * rank + t] += 1;
            }
            if let Some((a2, b2)) = second[t] {
                let mut check = vec![0u32; rank * rank];
                for g in 0..n {
                    check[x.color(a2, g) * rank + x.color(g, b2)] += 1;
                }
                for r in 0..rank {
                    for s in 0..rank {
                        assert_eq!(
                            check[r * rank + s],
                            c[(r * rank + s) * rank + t],
                            "representative pairs of color {t} disagree on c[{r},{s}]"
                        );
                    }
                }
            }
        }

        let valency: Vec<u32> = (0..rank)
            .map(|s| c[(s * rank + x.dual(s)) * rank])
            .collect();
        debug_assert_eq!(valency, x.valencies());

        let mut products = Vec::with_capacity(rank * rank);
        for r in 0..rank {
            for s in 0..rank {
                let ts: Vec<u16> = (0..rank)
                    .filter(|&t| c[(r * rank + s) * rank + t] > 0)
                    .map(|t| t as u16)
                    .collect();
                products.push(ts);
            }
        }

        IntersectionTensor {
            rank,
            c,
            valency,
            products,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn c(&self, r: Color, s: Color, t: Color) -> u32 {
        self.c[(r * self.rank + s) * self.rank + t]
    }

    #[inline]
    pub fn valency(&self, s: Color) -> u32 {
        self.valency[s]
    }

    pub fn valencies(&self) -> &[u32] {
        &self.valency
    }

    /// The complex product `rs` of two colors: the colors `t` with
    /// `c[r,s]^t > 0`, ascending.
    #[inline]
    pub fn product(&self, r: Color, s: Color) -> &[u16] {
        &self.products[r * self.rank + s]
    }

    /// The complex product of two color sets, ascending and deduplicated.
    pub fn complex_product(&self, rs: &[Color], ts: &[Color]) -> Vec<Color> {
        let mut hit = vec![false; self.rank];
        for &r in rs {
            for &s in ts {
                for &t in self.product(r, s) {
                    hit[t as usize] = true;
                }
            }
        }
        (0..self.rank).filter(|&t| hit[t]).collect()
    }

    /// Indistinguishing number `c(s) = Σ_t c[t,t*]^s`.
    pub fn indistinguishing_number(&self, s: Color) -> u32 {
        // t* is recoverable from the tensor: it is the unique color with
        // c[t,t*]^0 > 0, but callers always have the scheme at hand, so the
        // dual is located through the valency identity instead of a scan.
        (0..self.rank)
            .map(|t| {
                let t_dual = self.dual_of(t);
                self.c(t, t_dual, s)
            })
            .sum()
    }

    /// The dual of a color read off the tensor: the unique `u` with
    /// `c[t,u]^0 > 0`.
    pub fn dual_of(&self, t: Color) -> Color {
        (0..self.rank)
            .find(|&u| self.c(t, u, 0) > 0)
            .expect("every color has a dual")
    }

    /// Checks the classical constraints tying intersection numbers and
    /// valencies together, returning the first violation rendered as text.
    ///
    /// Verified exactly: `c[r*,s*]^{t*} = c[s,r]^t`, the three valency
    /// symmetries `n_t·c[r,s]^{t*} = n_r·c[s,t]^{r*} = n_s·c[t,r]^{s*}`, the
    /// path count `Σ_t c[r,s]^t·n_t = n_r·n_s`, `n_0 = 1`, and `Σ_s n_s = n`.
    pub fn verify_identities(&self, x: &Scheme) -> Result<(), String> {
        let rank = self.rank;
        if self.valency(0) != 1 {
            return Err(format!(
                "valency of the identity color is {}",
                self.valency(0)
            ));
        }
        let total: u64 = self.valency.iter().map(|&v| v as u64).sum();
        if total != x.n() as u64 {
            return Err(format!("valencies sum to {total}, expected {}", x.n()));
        }
        for r in 0..rank {
            for s in 0..rank {
                let mut paths = 0u64;
                for t in 0..rank {
                    let c = self.c(r, s, t);
                    if c == 0 {
                        continue;
                    }
                    paths += c as u64 * self.valency(t) as u64;
                    let (rd, sd, td) = (x.dual(r), x.dual(s), x.dual(t));
                    if self.c(rd, sd, td) != self.c(s, r, t) {
                        return Err(format!(
                            "transpose identity fails at (r,s,t) = ({r},{s},{t})"
                        ));
                    }
                    let a = self.valency(t) as u64 * self.c(r, s, td) as u64;
                    let b = self.valency(r) as u64 * self.c(s, t, rd) as u64;
                    let c2 = self.valency(s) as u64 * self.c(t, r, sd) as u64;
                    if a != b || b != c2 {
                        return Err(format!(
                            "valency symmetry fails at (r,s,t) = ({r},{s},{t}): {a} {b} {c2}"
                        ));
                    }
                }
                if paths != self.valency(r) as u64 * self.valency(s) as u64 {
                    return Err(format!(
                        "path count fails at (r,s) = ({r},{s}): {paths} != n_r·n_s"
                    ));
                }
            }
        }
        Ok(())
    }
}
