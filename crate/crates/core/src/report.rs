//! The aggregated analysis report: everything the library can say about one
//! scheme, rendered deterministically so that JSON output is byte-stable for
//! a fixed input and schema version.

use crate::classify::{classify, ClassifierProfile};
use crate::desargues::{DesarguesContext, DesarguesOutcome, InitialConfiguration};
use crate::faithful::schurity;
use crate::scheme::Scheme;
use crate::separability::{separability_report, SeparabilityOptions, SeparabilityReport};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSummary {
    /// SHA-256 of the normalized color matrix (`n` then row-major u16 LE).
    pub sha256: String,
    pub n: usize,
    pub rank: usize,
    pub valencies: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSection {
    pub valency_spectrum: BTreeMap<u32, usize>,
    pub two_valenced: Option<u32>,
    pub quasi_thin: bool,
    pub quasi_thin_condition: bool,
    pub pseudocyclic: Option<u32>,
    pub one_p_scheme: Option<u32>,
    pub thin_radical_size: usize,
    pub thin_residue_size: usize,
    pub thin_residue_is_thin: bool,
    pub thin_residue_order: Option<usize>,
    pub thin_residue_exponent: Option<usize>,
    pub thin_residue_abelian: Option<bool>,
    pub thin_residue_elementary_rank: Option<u32>,
}

impl ProfileSection {
    fn from_profile(p: &ClassifierProfile) -> ProfileSection {
        let profile = p.thin.profile().ok();
        ProfileSection {
            valency_spectrum: p.valency_spectrum.clone(),
            two_valenced: p.two_valenced,
            quasi_thin: p.quasi_thin,
            quasi_thin_condition: p.quasi_thin_condition,
            pseudocyclic: p.pseudocyclic,
            one_p_scheme: p.one_p_scheme,
            thin_radical_size: p.thin.thin_radical.len(),
            thin_residue_size: p.thin.thin_residue.len(),
            thin_residue_is_thin: p.thin.residue_is_thin(),
            thin_residue_order: profile.map(|g| g.order),
            thin_residue_exponent: profile.map(|g| g.exponent),
            thin_residue_abelian: profile.map(|g| g.abelian),
            thin_residue_elementary_rank: profile.and_then(|g| g.elementary_abelian_rank),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationSection {
    pub k: u32,
    pub vertex_count: usize,
    pub saturated: bool,
    pub witness: Option<Vec<usize>>,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationSummary {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub r: usize,
    pub s: usize,
}

impl From<InitialConfiguration> for ConfigurationSummary {
    fn from(c: InitialConfiguration) -> Self {
        ConfigurationSummary {
            x: c.x,
            y: c.y,
            z: c.z,
            r: c.r,
            s: c.s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesarguesSection {
    pub desarguesian: bool,
    pub failing: Option<ConfigurationSummary>,
    pub triples: u64,
    pub l1_triples: u64,
    pub l2_triples: u64,
    pub searched_configs: u64,
    pub total_configs: u64,
}

impl DesarguesSection {
    fn from_outcome(o: &DesarguesOutcome) -> DesarguesSection {
        DesarguesSection {
            desarguesian: o.desarguesian,
            failing: o.failing.map(Into::into),
            triples: o.stats.triples,
            l1_triples: o.stats.l1_triples,
            l2_triples: o.stats.l2_triples,
            searched_configs: o.stats.searched_configs,
            total_configs: o.stats.total_configs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchuritySection {
    /// Decimal rendering: automorphism groups overflow fixed-width integers.
    pub aut_order: String,
    pub aut_transitive: bool,
    pub pair_orbit_count: usize,
    pub schurian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilitySection {
    pub automorphism_count: usize,
    pub auto_separable: bool,
    pub realized_count: usize,
    pub fhat_applicable: bool,
    pub fhat_phis_checked: usize,
    pub fhat_seeds_swept: u64,
    pub fhat_seeds_total: u64,
    pub fhat_seed_failures: u64,
}

impl SeparabilitySection {
    fn from_report(r: &SeparabilityReport) -> SeparabilitySection {
        SeparabilitySection {
            automorphism_count: r.automorphism_count,
            auto_separable: r.auto_separable,
            realized_count: r
                .outcomes
                .iter()
                .filter(|o| o.realized_by_backtracking)
                .count(),
            fhat_applicable: r.fhat_applicable,
            fhat_phis_checked: r.fhat_phis_checked,
            fhat_seeds_swept: r
                .outcomes
                .iter()
                .filter_map(|o| o.fhat.as_ref())
                .map(|s| s.seeds)
                .sum(),
            fhat_seeds_total: r
                .outcomes
                .iter()
                .filter_map(|o| o.fhat.as_ref())
                .map(|s| s.seeds_total)
                .sum(),
            fhat_seed_failures: r
                .outcomes
                .iter()
                .filter_map(|o| o.fhat.as_ref())
                .map(|s| s.failures)
                .sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub scheme: SchemeSummary,
    pub profile: ProfileSection,
    /// Absent when the scheme is not two-valenced.
    pub saturation: Option<SaturationSection>,
    /// Absent when the scheme is not two-valenced.
    pub desargues: Option<DesarguesSection>,
    pub schurity: SchuritySection,
    pub separability: SeparabilitySection,
    /// Filled only on request; omitted from serialized output so reports
    /// stay byte-stable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}

pub fn scheme_sha256(x: &Scheme) -> String {
    let mut hasher = Sha256::new();
    hasher.update((x.n() as u64).to_le_bytes());
    for &c in x.color_matrix() {
        hasher.update(c.to_le_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn scheme_summary(x: &Scheme) -> SchemeSummary {
    SchemeSummary {
        sha256: scheme_sha256(x),
        n: x.n(),
        rank: x.rank(),
        valencies: x.valencies().to_vec(),
    }
}

/// Runs every analysis stage on the scheme. The two-valenced stages are
/// skipped (reported as absent) on other valency spectra.
pub fn analyze(x: &Scheme, sep_opts: &SeparabilityOptions, with_timings: bool) -> AnalysisReport {
    let mut timings: BTreeMap<String, u64> = BTreeMap::new();
    let mut timed = |name: &str, ms: u128| {
        timings.insert(name.to_string(), ms as u64);
    };

    let t0 = std::time::Instant::now();
    let profile = classify(x);
    timed("classify", t0.elapsed().as_millis());

    let (saturation, desargues) = match DesarguesContext::new(x) {
        Err(_) => (None, None),
        Ok(ctx) => {
            let t0 = std::time::Instant::now();
            let sat = ctx.graph().saturation();
            let section = SaturationSection {
                k: ctx.k(),
                vertex_count: ctx.graph().vertex_count(),
                saturated: sat.saturated,
                witness: sat.witness,
                bound_holds: crate::saturation::saturation_bound_holds(x, ctx.k()),
            };
            timed("saturation", t0.elapsed().as_millis());
            let t0 = std::time::Instant::now();
            let outcome = ctx.is_desarguesian();
            timed("desargues", t0.elapsed().as_millis());
            (
                Some(section),
                Some(DesarguesSection::from_outcome(&outcome)),
            )
        }
    };

    let t0 = std::time::Instant::now();
    let schurity_report = schurity(x);
    timed("schurity", t0.elapsed().as_millis());

    let t0 = std::time::Instant::now();
    let sep = separability_report(x, sep_opts);
    timed("separability", t0.elapsed().as_millis());

    AnalysisReport {
        schema_version: SCHEMA_VERSION.to_string(),
        scheme: scheme_summary(x),
        profile: ProfileSection::from_profile(&profile),
        saturation,
        desargues,
        schurity: SchuritySection {
            aut_order: schurity_report.aut_order.to_string(),
            aut_transitive: schurity_report.aut_transitive,
            pair_orbit_count: schurity_report.pair_orbit_count,
            schurian: schurity_report.schurian,
        },
        separability: SeparabilitySection::from_report(&sep),
        timing_ms: with_timings.then_some(timings),
    }
}
