//! Scheme classifiers: valency spectrum, two-valencedness, quasi-thinness,
//! pseudocyclicity, and the thin-residue profile.

use crate::scheme::Scheme;
use crate::thin::{thin_structure, ThinStructure};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierProfile {
    /// Valency multiset as value → multiplicity.
    pub valency_spectrum: BTreeMap<u32, usize>,
    /// `Some(k)` when the spectrum is exactly `{1, k}` with `k > 1`.
    pub two_valenced: Option<u32>,
    /// All valencies lie in `{1, 2}`.
    pub quasi_thin: bool,
    /// `n_{s*s} ≠ 2` for every color `s`, where `n_{s*s}` sums the valencies
    /// over the complex product `s*s`.
    pub quasi_thin_condition: bool,
    /// `Some(k)` when every irreflexive color has valency `k` and
    /// indistinguishing number `k − 1`.
    pub pseudocyclic: Option<u32>,
    /// `Some(p)` when the scheme is two-valenced with prime `k = p`.
    pub one_p_scheme: Option<u32>,
    pub thin: ThinStructure,
}

pub fn classify(x: &Scheme) -> ClassifierProfile {
    let t = x.tensor();

    let mut valency_spectrum: BTreeMap<u32, usize> = BTreeMap::new();
    for s in x.colors() {
        *valency_spectrum.entry(x.valency(s)).or_insert(0) += 1;
    }

    let distinct: Vec<u32> = valency_spectrum.keys().copied().collect();
    let two_valenced = match distinct.as_slice() {
        [1, k] => Some(*k),
        _ => None,
    };

    let quasi_thin = distinct.iter().all(|&v| v <= 2);

    let quasi_thin_condition = x.colors().all(|s| {
        let total: u32 = t
            .product(x.dual(s), s)
            .iter()
            .map(|&u| x.valency(u as usize))
            .sum();
        total != 2
    });

    let pseudocyclic = if x.rank() == 1 {
        None
    } else {
        let k = x.valency(1);
        (1..x.rank())
            .all(|s| x.valency(s) == k && t.indistinguishing_number(s) == k - 1)
            .then_some(k)
    };

    let one_p_scheme = two_valenced.filter(|&k| crate::thin::is_prime(k as usize));

    ClassifierProfile {
        valency_spectrum,
        two_valenced,
        quasi_thin,
        quasi_thin_condition,
        pseudocyclic,
        one_p_scheme,
        thin: thin_structure(x),
    }
}
