//! Constructive extension of a faithful two-point seed to a full
//! isomorphism on a saturated Desarguesian two-valenced scheme.
//!
//! Fix a seed `{α ↦ α′, β ↦ β′}` with `r(α, β)` of valency `k`. The point
//! set splits by the color toward `α` into the thin part `Δ0`, the part
//! `Δ1` whose color is adjacent to `r(α, β)` in the saturation graph, and
//! the remainder `Δ2`. Each image is pinned by a singleton fiber
//! intersection: through `α′` alone for `Δ0`, through `α′` and `β′` for
//! `Δ1`, and through `α′` and the image of an auxiliary `Δ1`-point for
//! `Δ2`. The finished map is then re-verified on every pair; that global
//! check subsumes the case analysis that justifies the construction.

use crate::bitset;
use crate::desargues::{DesarguesContext, DesarguesError, InitialConfiguration};
use crate::iso::AlgebraicIso;
use crate::saturation::SaturationGraph;
use crate::scheme::{Color, Point, Scheme};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FhatError {
    #[error("the scheme is not two-valenced")]
    NotTwoValenced,
    #[error("the scheme is not saturated: N({witness:?}) is empty")]
    NotSaturated { witness: Vec<Color> },
    #[error("the scheme is not Desarguesian: configuration {failing:?} is not linked")]
    NotDesarguesian { failing: InitialConfiguration },
    #[error("the seed is not faithful (or not a two-point map)")]
    SeedNotFaithful,
    #[error(
        "image fiber intersection for point {delta} has {size} elements; \
         a singleton is forced on saturated Desarguesian schemes"
    )]
    IntersectionNotSingleton { delta: Point, size: usize },
    #[error("constructed map is not faithful at pair ({delta}, {epsilon})")]
    FaithfulnessViolation { delta: Point, epsilon: Point },
    #[error("no target image for the re-based seed point {beta_new}")]
    RebaseFailed { beta_new: Point },
}

/// The constructed isomorphism plus the seed actually used when the original
/// seed pair was thin and had to be re-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fhat {
    pub map: Vec<u16>,
    /// `Some((β̃, β̃′))` when the construction replaced the seed's second
    /// point by the minimal point with a valency-k color toward α.
    pub rebase: Option<(Point, Point)>,
}

/// Per-scheme state for the construction: the preconditions (two-valenced,
/// saturated, Desarguesian) are verified once here and reused across seeds
/// and color maps.
pub struct FhatEngine<'a> {
    src: &'a Scheme,
    graph: SaturationGraph,
    k: u32,
}

impl<'a> FhatEngine<'a> {
    pub fn new(src: &'a Scheme) -> Result<FhatEngine<'a>, FhatError> {
        let ctx = DesarguesContext::new(src).map_err(|e| match e {
            DesarguesError::NotTwoValenced(_) => FhatError::NotTwoValenced,
        })?;
        let sat = ctx.graph().saturation();
        if !sat.saturated {
            return Err(FhatError::NotSaturated {
                witness: sat.witness.unwrap_or_default(),
            });
        }
        let outcome = ctx.is_desarguesian();
        if !outcome.desarguesian {
            return Err(FhatError::NotDesarguesian {
                failing: outcome.failing.expect("failures carry a witness"),
            });
        }
        let k = ctx.k();
        Ok(FhatEngine {
            src,
            graph: SaturationGraph::build(src, k).unwrap(),
            k,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn graph(&self) -> &SaturationGraph {
        &self.graph
    }

    /// Builds the full isomorphism extending `{α ↦ α′, β ↦ β′}` under `iso`.
    ///
    /// An algebraic isomorphism transports saturation and the Desarguesian
    /// property, so the target scheme is not re-analyzed.
    pub fn build(
        &self,
        dst: &Scheme,
        iso: &AlgebraicIso,
        alpha: Point,
        beta: Point,
        alpha_img: Point,
        beta_img: Point,
    ) -> Result<Fhat, FhatError> {
        let src = self.src;
        if alpha == beta
            || alpha >= src.n()
            || beta >= src.n()
            || alpha_img >= dst.n()
            || beta_img >= dst.n()
            || src.n() != dst.n()
            || iso.apply(src.color(alpha, beta)) != dst.color(alpha_img, beta_img)
        {
            return Err(FhatError::SeedNotFaithful);
        }

        // Re-base thin seeds: pick the minimal β̃ with r(α, β̃) of valency k
        // and extend the original two-point map to it (two-point faithful
        // maps always extend); the finished map recovers the original β.
        let mut rebase = None;
        let (b, b_img) = if src.is_thin(src.color(alpha, beta)) {
            let beta_new = (0..src.n())
                .find(|&p| src.valency(src.color(alpha, p)) == self.k)
                .expect("two-valenced schemes have valency-k fibers");
            let mut cand = dst
                .fiber_words(alpha_img, iso.apply(src.color(alpha, beta_new)))
                .to_vec();
            bitset::and_assign(
                &mut cand,
                dst.fiber_words(beta_img, iso.apply(src.color(beta, beta_new))),
            );
            let beta_new_img =
                bitset::first_one(&cand).ok_or(FhatError::RebaseFailed { beta_new })?;
            rebase = Some((beta_new, beta_new_img));
            (beta_new, beta_new_img)
        } else {
            (beta, beta_img)
        };

        let base_color = src.color(alpha, b);
        debug_assert_eq!(src.valency(base_color), self.k);

        // Classify every point by its color toward α.
        const D0: u8 = 0;
        const D1: u8 = 1;
        const D2: u8 = 2;
        let class: Vec<u8> = (0..src.n())
            .map(|p| {
                let c = src.color(alpha, p);
                if src.is_thin(c) {
                    D0
                } else if self.graph.adjacent(base_color, c) {
                    D1
                } else {
                    D2
                }
            })
            .collect();

        let mut map: Vec<Option<u16>> = vec![None; src.n()];
        let words = dst.point_words();
        let mut scratch = vec![0u64; words];

        let pin = |map: &mut Vec<Option<u16>>,
                   scratch: &mut Vec<u64>,
                   delta: Point,
                   through: &[(Point, Point)]|
         -> Result<(), FhatError> {
            scratch.copy_from_slice(
                dst.fiber_words(through[0].1, iso.apply(src.color(through[0].0, delta))),
            );
            for &(from, from_img) in &through[1..] {
                bitset::and_assign(
                    scratch,
                    dst.fiber_words(from_img, iso.apply(src.color(from, delta))),
                );
            }
            let size = bitset::count_ones(scratch);
            if size != 1 {
                return Err(FhatError::IntersectionNotSingleton { delta, size });
            }
            map[delta] = Some(bitset::first_one(scratch).unwrap() as u16);
            Ok(())
        };

        for (delta, &cl) in class.iter().enumerate() {
            if cl == D0 {
                pin(&mut map, &mut scratch, delta, &[(alpha, alpha_img)])?;
            }
        }
        for (delta, &cl) in class.iter().enumerate() {
            if cl == D1 {
                pin(
                    &mut map,
                    &mut scratch,
                    delta,
                    &[(alpha, alpha_img), (b, b_img)],
                )?;
            }
        }
        for delta in 0..src.n() {
            if class[delta] != D2 {
                continue;
            }
            let delta_color = src.color(alpha, delta);
            // Minimal Δ1-point whose color toward α is also adjacent to the
            // color of δ; saturation guarantees one exists.
            let gamma = (0..src.n())
                .find(|&g| class[g] == D1 && self.graph.adjacent(src.color(alpha, g), delta_color))
                .expect("saturation provides an auxiliary point");
            let gamma_img = map[gamma].expect("Δ1 images are already pinned") as usize;
            pin(
                &mut map,
                &mut scratch,
                delta,
                &[(alpha, alpha_img), (gamma, gamma_img)],
            )?;
        }

        let map: Vec<u16> = map
            .into_iter()
            .map(|m| m.expect("all classes covered"))
            .collect();

        // The construction pins α and the (possibly re-based) seed; the
        // original β must come back out in the thin case as well.
        debug_assert_eq!(map[alpha] as usize, alpha_img);
        if map[beta] as usize != beta_img || map[b] as usize != b_img {
            return Err(FhatError::FaithfulnessViolation {
                delta: alpha,
                epsilon: beta,
            });
        }

        // Global faithfulness check over every pair, independent of the
        // construction path.
        for d in 0..src.n() {
            for e in 0..src.n() {
                if iso.apply(src.color(d, e)) != dst.color(map[d] as usize, map[e] as usize) {
                    return Err(FhatError::FaithfulnessViolation {
                        delta: d,
                        epsilon: e,
                    });
                }
            }
        }

        Ok(Fhat { map, rebase })
    }
}

/// One-shot convenience wrapper around [`FhatEngine`].
pub fn construct_fhat(
    src: &Scheme,
    dst: &Scheme,
    iso: &AlgebraicIso,
    alpha: Point,
    beta: Point,
    alpha_img: Point,
    beta_img: Point,
) -> Result<Fhat, FhatError> {
    FhatEngine::new(src)?.build(dst, iso, alpha, beta, alpha_img, beta_img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::affine_scheme;

    #[test]
    fn non_desarguesian_scheme_is_rejected() {
        // The plane of order four is saturated but not Desarguesian.
        let x = affine_scheme(2, 4).unwrap();
        assert!(matches!(
            FhatEngine::new(&x),
            Err(FhatError::NotDesarguesian { .. })
        ));
    }

    #[test]
    fn unsaturated_scheme_is_rejected() {
        // Trivial scheme on five points: S_k is a single loopless vertex.
        let mut m = vec![1u32; 25];
        for a in 0..5 {
            m[a * 5 + a] = 0;
        }
        let x = crate::scheme::Scheme::from_color_matrix(5, &m).unwrap();
        assert!(matches!(
            FhatEngine::new(&x),
            Err(FhatError::NotSaturated { .. })
        ));
    }

    #[test]
    fn identity_seeds_rebuild_automorphisms() {
        let x = affine_scheme(3, 3).unwrap();
        let engine = FhatEngine::new(&x).unwrap();
        let id = AlgebraicIso::identity(&x);
        for beta in 1..x.n() {
            let fhat = engine.build(&x, &id, 0, beta, 0, beta).unwrap();
            // The identity seed with identity color map forces the identity.
            assert!(fhat.map.iter().enumerate().all(|(i, &m)| i == m as usize));
            assert!(fhat.rebase.is_none(), "no thin non-identity colors here");
        }
    }

    #[test]
    fn bad_seed_is_rejected() {
        let x = affine_scheme(3, 3).unwrap();
        let engine = FhatEngine::new(&x).unwrap();
        let id = AlgebraicIso::identity(&x);
        let beta_bad = (1..x.n())
            .find(|&p| x.color(0, p) != x.color(0, 1))
            .unwrap();
        assert_eq!(
            engine.build(&x, &id, 0, 1, 0, beta_bad).unwrap_err(),
            FhatError::SeedNotFaithful
        );
        assert_eq!(
            engine.build(&x, &id, 0, 0, 0, 0).unwrap_err(),
            FhatError::SeedNotFaithful
        );
    }
}
