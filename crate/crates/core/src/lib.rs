//! Preference-driven base scores for acyclic bipolar argumentation.
//!
//! A [`BipolarFramework`] holds arguments, attacks, supports and the decision
//! arguments whose strengths determine an outcome. A user's
//! [`PreferenceOrdering`] over the non-decision arguments is turned into base
//! scores by one of two extraction functions ([`bsef`]), giving a quantitative
//! framework that the gradual semantics in [`semantics`] evaluate. The
//! [`experiments`] module reproduces the reference evaluation and runs the
//! seeded semantics-agreement study.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod bsef;
pub mod experiments;
pub mod fixtures;
pub mod model;
pub mod preferences;
pub mod semantics;

pub use bsef::{
    assign_distances, extract, extract_qbaf, nu1, nu2, BaseScoreFunction, DistanceAssignment, ExtractionConfig, ExtractionError,
    GapWeights, RangeParams, SqueezeParams,
};
pub use model::{ArgumentId, BipolarFramework, FrameworkBuilder, ModelError, ScoreAssignment, ValidationReport};
pub use preferences::{GapKind, PreferenceError, PreferenceOrdering, Relation};
pub use semantics::{decide, evaluate, DecisionOutcome, SemanticsError, SemanticsKind, StrengthAssignment};

/// Tolerance used for score and strength equality throughout the crate.
pub const EQ_TOLERANCE: f64 = 1e-9;
