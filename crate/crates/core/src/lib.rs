//! Computing with finite association schemes.
//!
//! The crate validates color matrices into schemes, computes intersection
//! tensors and thin structure, constructs standard families (orbital,
//! affine, cyclotomic, group schemes), analyzes two-valenced schemes through
//! their saturation graphs and Desarguesian configurations, and decides
//! schurity and separability questions by backtracking search and by the
//! constructive faithful-map extension.

#![forbid(unsafe_code)]

pub mod bitset;
pub mod classify;
pub mod construct;
pub mod desargues;
pub mod faithful;
pub mod fhat;
pub mod fields;
pub mod format;
pub mod iso;
pub mod report;
pub mod saturation;
pub mod scheme;
pub mod separability;
pub mod tensor;
pub mod thin;

pub use classify::{classify, ClassifierProfile};
pub use construct::{
    affine_scheme, cyclotomic_scheme, group_scheme, orbital_scheme, ConstructError,
    PermutationGroupSpec,
};
pub use desargues::{
    DesarguesCertificate, DesarguesContext, DesarguesError, DesarguesOutcome, InitialConfiguration,
};
pub use faithful::{
    automorphism_group, extend_backtracking, extension_candidates, is_schurian, schurity,
    AutomorphismGroup, FaithfulError, PartialFaithfulMap, SchurityReport,
};
pub use fhat::{construct_fhat, Fhat, FhatEngine, FhatError};
pub use iso::{enumerate_algebraic_autos, validate_algebraic_iso, AlgebraicIso, IsoError};
pub use report::{analyze, AnalysisReport};
pub use saturation::{
    is_saturated, saturation_bound_holds, AnalysisError, SaturationGraph, SaturationOutcome,
};
pub use scheme::{Color, Point, Scheme, ValidationError};
pub use separability::{separability_report, SeparabilityOptions, SeparabilityReport};
pub use tensor::IntersectionTensor;
pub use thin::{thin_structure, GroupProfile, ResidueNotThin, ThinStructure};
