//! Separability surrogate checks: every algebraic automorphism of the
//! scheme is tested for realization by a combinatorial isomorphism, and on
//! saturated Desarguesian two-valenced schemes the constructive extension is
//! additionally swept over faithful two-point seeds.

use crate::faithful::{extend_backtracking, PartialFaithfulMap};
use crate::fhat::FhatEngine;
use crate::iso::{enumerate_algebraic_autos, AlgebraicIso};
use crate::scheme::{Point, Scheme};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityOptions {
    /// How many color maps (in enumeration order, identity first) receive
    /// the constructive-extension seed sweep; `None` sweeps all of them.
    /// The realization check by backtracking always covers every map.
    pub fhat_phi_cap: Option<usize>,
    /// Per-map budget for the seed sweep; `None` runs every faithful
    /// two-point seed. The sweep takes the lexicographic prefix in
    /// `(α, β, α′, β′)` order, and the result records both the swept and
    /// the total seed counts. The full sweep is Θ(n³·k) constructions, so
    /// a budget keeps large instances responsive.
    pub fhat_seed_cap: Option<u64>,
}

impl Default for SeparabilityOptions {
    fn default() -> Self {
        SeparabilityOptions {
            fhat_phi_cap: Some(6),
            fhat_seed_cap: Some(50_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FhatSweep {
    /// Seeds actually constructed (the lexicographic prefix under a budget).
    pub seeds: u64,
    /// All faithful two-point seeds for this color map.
    pub seeds_total: u64,
    pub failures: u64,
    /// First failing seed `(α, β, α′, β′)` in lexicographic order.
    pub first_failure: Option<(Point, Point, Point, Point)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiOutcome {
    pub color_map: Vec<u16>,
    pub realized_by_backtracking: bool,
    /// Present when the scheme admits the constructive extension and this
    /// map was within the sweep cap.
    pub fhat: Option<FhatSweep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityReport {
    pub automorphism_count: usize,
    pub outcomes: Vec<PhiOutcome>,
    /// Every algebraic automorphism is induced by some point bijection.
    pub auto_separable: bool,
    /// The scheme is two-valenced, saturated, and Desarguesian.
    pub fhat_applicable: bool,
    pub fhat_phis_checked: usize,
}

pub fn separability_report(x: &Scheme, opts: &SeparabilityOptions) -> SeparabilityReport {
    let autos = enumerate_algebraic_autos(x);
    let engine = FhatEngine::new(x).ok();
    let cap = opts.fhat_phi_cap.unwrap_or(usize::MAX);

    let outcomes: Vec<PhiOutcome> = autos
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            let realized = extend_backtracking(x, x, phi, &PartialFaithfulMap::empty())
                .expect("empty seed is faithful")
                .is_some();
            let fhat = engine
                .as_ref()
                .filter(|_| i < cap)
                .map(|engine| sweep_fhat_seeds(engine, x, phi, opts.fhat_seed_cap));
            PhiOutcome {
                color_map: phi.map().to_vec(),
                realized_by_backtracking: realized,
                fhat,
            }
        })
        .collect();

    SeparabilityReport {
        automorphism_count: autos.len(),
        auto_separable: outcomes.iter().all(|o| o.realized_by_backtracking),
        fhat_phis_checked: outcomes.iter().filter(|o| o.fhat.is_some()).count(),
        outcomes,
        fhat_applicable: engine.is_some(),
    }
}

/// Runs the constructive extension from faithful two-point seeds
/// `{α ↦ α′, β ↦ β′}` for the given color map: all of them, or the
/// lexicographic prefix of `cap` seeds under a budget.
pub fn sweep_fhat_seeds(
    engine: &FhatEngine,
    x: &Scheme,
    phi: &AlgebraicIso,
    cap: Option<u64>,
) -> FhatSweep {
    let n = x.n();
    // Seeds per leading point: for each β ≠ α there are n·valency(φ(color))
    // image pairs.
    let count_for: Vec<u64> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a)
                .map(|b| n as u64 * x.valency(phi.apply(x.color(a, b))) as u64)
                .sum()
        })
        .collect();
    let seeds_total: u64 = count_for.iter().sum();

    let mut left = cap.unwrap_or(u64::MAX);
    let budgets: Vec<u64> = count_for
        .iter()
        .map(|&c| {
            let take = c.min(left);
            left -= take;
            take
        })
        .collect();

    let per_alpha: Vec<FhatSweep> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut sweep = FhatSweep {
                seeds: 0,
                seeds_total: count_for[a],
                failures: 0,
                first_failure: None,
            };
            'alpha: for b in 0..n {
                if a == b {
                    continue;
                }
                let color_img = phi.apply(x.color(a, b));
                for ai in 0..n {
                    for &bi in x.fiber(ai, color_img) {
                        if sweep.seeds == budgets[a] {
                            break 'alpha;
                        }
                        sweep.seeds += 1;
                        if engine.build(x, phi, a, b, ai, bi as usize).is_err() {
                            sweep.failures += 1;
                            if sweep.first_failure.is_none() {
                                sweep.first_failure = Some((a, b, ai, bi as usize));
                            }
                        }
                    }
                }
            }
            sweep
        })
        .collect();

    let mut total = FhatSweep {
        seeds: 0,
        seeds_total,
        failures: 0,
        first_failure: None,
    };
    for s in per_alpha {
        total.seeds += s.seeds;
        total.failures += s.failures;
        if total.first_failure.is_none() {
            total.first_failure = s.first_failure;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cyclic_group_table, cyclotomic_scheme, group_scheme};

    #[test]
    fn thin_cyclic_scheme_is_auto_separable() {
        let x = group_scheme(&cyclic_group_table(5)).unwrap();
        let report = separability_report(&x, &SeparabilityOptions::default());
        assert_eq!(report.automorphism_count, 4);
        assert!(report.auto_separable);
        assert!(!report.fhat_applicable);
    }

    #[test]
    fn paley_five_is_auto_separable() {
        let x = cyclotomic_scheme(5, 2).unwrap();
        let report = separability_report(&x, &SeparabilityOptions::default());
        assert!(report.auto_separable);
        assert!(report.outcomes[0].realized_by_backtracking);
    }
}
