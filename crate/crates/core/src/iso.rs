//! Algebraic isomorphisms: color bijections preserving every intersection
//! number.

use crate::scheme::{Color, Scheme};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("the color map is not a bijection")]
    NotBijection,
    #[error("tensor mismatch at (r, s, t) = ({r}, {s}, {t}): {lhs} vs {rhs}")]
    TensorMismatch {
        r: Color,
        s: Color,
        t: Color,
        lhs: u32,
        rhs: u32,
    },
}

/// A validated color bijection preserving the intersection tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicIso {
    map: Vec<u16>,
}

impl AlgebraicIso {
    /// The identity map on the colors of a scheme.
    pub fn identity(x: &Scheme) -> AlgebraicIso {
        AlgebraicIso {
            map: (0..x.rank() as u16).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, c: Color) -> Color {
        self.map[c] as usize
    }

    pub fn map(&self) -> &[u16] {
        &self.map
    }

    pub fn as_usize_vec(&self) -> Vec<usize> {
        self.map.iter().map(|&c| c as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &c)| i == c as usize)
    }

    pub fn inverse(&self) -> AlgebraicIso {
        let mut inv = vec![0u16; self.map.len()];
        for (i, &c) in self.map.iter().enumerate() {
            inv[c as usize] = i as u16;
        }
        AlgebraicIso { map: inv }
    }
}

/// Checks that `map` carries every intersection number of `src` onto the
/// corresponding number of `dst`; the rejection names the first violating
/// triple.
pub fn validate_algebraic_iso(
    src: &Scheme,
    dst: &Scheme,
    map: &[Color],
) -> Result<AlgebraicIso, IsoError> {
    let rank = src.rank();
    if dst.rank() != rank {
        return Err(IsoError::RankMismatch(rank, dst.rank()));
    }
    if map.len() != rank {
        return Err(IsoError::NotBijection);
    }
    let mut seen = vec![false; rank];
    for &c in map {
        if c >= rank || seen[c] {
            return Err(IsoError::NotBijection);
        }
        seen[c] = true;
    }
    let (ts, td) = (src.tensor(), dst.tensor());
    for r in 0..rank {
        for s in 0..rank {
            for t in 0..rank {
                let lhs = ts.c(r, s, t);
                let rhs = td.c(map[r], map[s], map[t]);
                if lhs != rhs {
                    return Err(IsoError::TensorMismatch { r, s, t, lhs, rhs });
                }
            }
        }
    }
    Ok(AlgebraicIso {
        map: map.iter().map(|&c| c as u16).collect(),
    })
}

/// Enumerates every algebraic automorphism of a scheme by backtracking over
/// color images, pruned by valency, dual compatibility, and incremental
/// tensor checks. Results come in lexicographic order of the map vector, so
/// the identity is always first.
pub fn enumerate_algebraic_autos(x: &Scheme) -> Vec<AlgebraicIso> {
    let rank = x.rank();
    let t = x.tensor();
    let mut map: Vec<Option<u16>> = vec![None; rank];
    let mut used = vec![false; rank];
    map[0] = Some(0);
    used[0] = true;
    let mut assigned: Vec<usize> = vec![0];
    let mut out = Vec::new();

    fn consistent(
        t: &crate::tensor::IntersectionTensor,
        map: &[Option<u16>],
        assigned: &[usize],
        s: Color,
    ) -> bool {
        let img = |c: usize| map[c].unwrap() as usize;
        for &a in assigned {
            for &b in assigned {
                if t.c(s, a, b) != t.c(img(s), img(a), img(b))
                    || t.c(a, s, b) != t.c(img(a), img(s), img(b))
                    || t.c(a, b, s) != t.c(img(a), img(b), img(s))
                {
                    return false;
                }
            }
        }
        true
    }

    fn recurse(
        x: &Scheme,
        t: &crate::tensor::IntersectionTensor,
        map: &mut Vec<Option<u16>>,
        used: &mut Vec<bool>,
        assigned: &mut Vec<usize>,
        next: Color,
        out: &mut Vec<AlgebraicIso>,
    ) {
        let rank = x.rank();
        if next == rank {
            // The incremental checks covered every triple of assigned colors,
            // which at this point is all of them.
            out.push(AlgebraicIso {
                map: map.iter().map(|c| c.unwrap()).collect(),
            });
            return;
        }
        // Dual compatibility pins the image once the dual is assigned.
        let dual = x.dual(next);
        let forced = (dual < next).then(|| x.dual(map[dual].unwrap() as usize));
        for cand in 0..rank {
            if used[cand] || x.valency(cand) != x.valency(next) {
                continue;
            }
            if let Some(f) = forced {
                if cand != f {
                    continue;
                }
            }
            map[next] = Some(cand as u16);
            assigned.push(next);
            if consistent(t, map, assigned, next) {
                used[cand] = true;
                recurse(x, t, map, used, assigned, next + 1, out);
                used[cand] = false;
            }
            assigned.pop();
            map[next] = None;
        }
    }

    recurse(x, t, &mut map, &mut used, &mut assigned, 1, &mut out);
    out
}
