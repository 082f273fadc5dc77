//! Base score extraction: preference ordering in, base scores out.
//!
//! Extraction runs in two steps. [`assign_distances`] walks the tiers from
//! the most preferred one, starting at distance 1 and adding `delta` for each
//! `>` gap and `much_delta` for each `>>` gap; the distance of the last tier
//! is the span `D`. The scores are then a decreasing linear map of the
//! distance, either onto an explicit range ([`nu1`]) or squeezed by
//! `(alpha, beta)` ([`nu2`]).

mod checks;

pub use checks::{check_axiom1, check_axiom2, check_axiom3, check_properties, CheckOutcome, CheckReport, CheckViolation, PropertyReport};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{ArgumentId, BipolarFramework, ModelError, ScoreAssignment, Violation};
use crate::preferences::{GapKind, PreferenceError, PreferenceOrdering};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractionError {
    #[error("invalid parameter: {0}")]
    Param(&'static str),
    #[error("ordering mentions decision argument {0}")]
    DecisionInOrdering(ArgumentId),
    #[error("ordering does not mention argument {0}")]
    MissingFromOrdering(ArgumentId),
    #[error("ordering mentions {0}, which is not in the framework")]
    UnknownInOrdering(ArgumentId),
    #[error("orderings range over different argument sets")]
    ArgumentSetMismatch,
    #[error("framework cannot drive a decision: {0}")]
    InvalidFramework(Violation),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Distance increments for `>` and `>>` gaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapWeights {
    delta: f64,
    much_delta: f64,
}

impl GapWeights {
    pub fn new(delta: f64, much_delta: f64) -> Result<Self, ExtractionError> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(ExtractionError::Param("delta must be a positive finite number"));
        }
        if !(much_delta.is_finite() && much_delta > 0.0) {
            return Err(ExtractionError::Param("Delta must be a positive finite number"));
        }
        Ok(Self { delta, much_delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn much_delta(&self) -> f64 {
        self.much_delta
    }

    /// `Delta > delta`; without it `>>` is not told apart from `>`.
    pub fn separates_gap_kinds(&self) -> bool {
        self.much_delta > self.delta
    }

    pub fn increment(&self, gap: GapKind) -> f64 {
        match gap {
            GapKind::Greater => self.delta,
            GapKind::MuchGreater => self.much_delta,
        }
    }
}

/// Per-tier distances from the most preferred tier.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceAssignment {
    tier_distances: Vec<f64>,
    by_argument: BTreeMap<ArgumentId, f64>,
}

impl DistanceAssignment {
    /// The span `D`, i.e. the distance of the least preferred tier.
    pub fn span(&self) -> f64 {
        *self.tier_distances.last().expect("at least two tiers")
    }

    pub fn tier_distances(&self) -> &[f64] {
        &self.tier_distances
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.by_argument.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, f64)> {
        self.by_argument.iter().map(|(k, v)| (k, *v))
    }
}

/// Distances for every argument of `ordering`.
///
/// The span is accumulated along the tiers, so it is `1 + n·delta + m·Delta`
/// for `n` strict and `m` much-greater gaps, and it matches the last tier's
/// distance bit for bit.
pub fn assign_distances(ordering: &PreferenceOrdering, weights: &GapWeights) -> DistanceAssignment {
    let mut tier_distances = Vec::with_capacity(ordering.tiers().len());
    let mut d = 1.0;
    tier_distances.push(d);
    for gap in ordering.gaps() {
        d += weights.increment(*gap);
        tier_distances.push(d);
    }
    debug_assert!(d > 1.0, "two tiers and positive weights give D > 1");
    let by_argument =
        ordering.tiers().iter().zip(&tier_distances).flat_map(|(tier, &d)| tier.iter().map(move |a| (a.clone(), d))).collect();
    DistanceAssignment { tier_distances, by_argument }
}

/// Explicit score limits for the most (`top`) and least (`bot`) preferred
/// tiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeParams {
    top: f64,
    bot: f64,
}

impl RangeParams {
    pub fn new(top: f64, bot: f64) -> Result<Self, ExtractionError> {
        if !(0.0 <= bot && bot <= top && top <= 1.0) {
            return Err(ExtractionError::Param("range limits must satisfy 0 <= bot <= top <= 1"));
        }
        Ok(Self { top, bot })
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn bot(&self) -> f64 {
        self.bot
    }
}

/// Compression (`beta`) and edge offset (`alpha`) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    alpha: f64,
    beta: f64,
}

impl SqueezeParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ExtractionError> {
        if !(alpha.is_finite() && beta.is_finite() && 0.0 <= alpha && alpha <= beta) {
            return Err(ExtractionError::Param("squeeze parameters must satisfy 0 <= alpha <= beta"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Which distance-to-score map to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseScoreFunction {
    /// Adaptable range: linear from `top` down to `bot`.
    Range(RangeParams),
    /// Adaptable squeezing and distancing.
    Squeeze(SqueezeParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    pub weights: GapWeights,
    pub function: BaseScoreFunction,
}

impl ExtractionConfig {
    pub fn new(weights: GapWeights, function: BaseScoreFunction) -> Self {
        Self { weights, function }
    }

    /// Range function with `delta`, `much_delta`, `top`, `bot`.
    pub fn range(delta: f64, much_delta: f64, top: f64, bot: f64) -> Result<Self, ExtractionError> {
        Ok(Self::new(GapWeights::new(delta, much_delta)?, BaseScoreFunction::Range(RangeParams::new(top, bot)?)))
    }

    /// Squeeze function with `delta`, `much_delta`, `alpha`, `beta`.
    pub fn squeeze(delta: f64, much_delta: f64, alpha: f64, beta: f64) -> Result<Self, ExtractionError> {
        Ok(Self::new(GapWeights::new(delta, much_delta)?, BaseScoreFunction::Squeeze(SqueezeParams::new(alpha, beta)?)))
    }

    /// Scores the extremes receive for a given span `D`: `(top, bot)`.
    pub fn achieved_limits(&self, span: f64) -> (f64, f64) {
        match self.function {
            BaseScoreFunction::Range(p) => (range_score(&p, span, 1.0), range_score(&p, span, span)),
            BaseScoreFunction::Squeeze(p) => (squeeze_score(&p, span, 1.0), squeeze_score(&p, span, span)),
        }
    }
}

/// Rounds to 15 significant digits, so that decimal parameters yield the
/// decimal scores they describe (`0.2 + 0.6·0.25` is 0.35, not
/// 0.35000000000000003). Rounding is monotone and moves values by at most
/// half a unit in the 15th digit.
fn tidy(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

fn range_score(p: &RangeParams, span: f64, d: f64) -> f64 {
    tidy(p.bot + (p.top - p.bot) * (span - d) / (span - 1.0))
}

fn squeeze_score(p: &SqueezeParams, span: f64, d: f64) -> f64 {
    tidy((span - d + p.alpha) / (span - 1.0 + p.beta))
}

fn map_scores(distances: &DistanceAssignment, f: impl Fn(f64) -> f64) -> ScoreAssignment {
    let mut out = ScoreAssignment::default();
    for (id, d) in distances.iter() {
        out.insert(id.clone(), f(d).clamp(0.0, 1.0));
    }
    out
}

/// Adaptable range: `bot + (top − bot)·(D − d)/(D − 1)`. The most preferred
/// tier receives exactly `top` and the least preferred exactly `bot`.
pub fn nu1(distances: &DistanceAssignment, params: &RangeParams) -> ScoreAssignment {
    let span = distances.span();
    map_scores(distances, |d| range_score(params, span, d))
}

/// Adaptable squeezing: `(D − d + alpha)/(D − 1 + beta)`.
pub fn nu2(distances: &DistanceAssignment, params: &SqueezeParams) -> ScoreAssignment {
    let span = distances.span();
    map_scores(distances, |d| squeeze_score(params, span, d))
}

/// Scores for the arguments of `ordering` under `config`.
pub fn extract(ordering: &PreferenceOrdering, config: &ExtractionConfig) -> ScoreAssignment {
    let distances = assign_distances(ordering, &config.weights);
    match &config.function {
        BaseScoreFunction::Range(p) => nu1(&distances, p),
        BaseScoreFunction::Squeeze(p) => nu2(&distances, p),
    }
}

/// Base scores for a whole framework: the ordering covers exactly the
/// non-decision arguments, and decisions are fixed at 0.5.
pub fn extract_qbaf(
    framework: &BipolarFramework,
    ordering: &PreferenceOrdering,
    config: &ExtractionConfig,
) -> Result<ScoreAssignment, ExtractionError> {
    check_coverage(framework, ordering)?;
    if let Some(v) = framework.validate_for_decisions().violations.into_iter().next() {
        return Err(ExtractionError::InvalidFramework(v));
    }
    let mut scores = extract(ordering, config);
    for d in framework.decisions() {
        scores.insert(d.clone(), 0.5);
    }
    Ok(scores)
}

/// The ordering ranges over exactly the framework's non-decision arguments.
pub fn check_coverage(framework: &BipolarFramework, ordering: &PreferenceOrdering) -> Result<(), ExtractionError> {
    for a in ordering.arguments() {
        if framework.is_decision(a.as_str()) {
            return Err(ExtractionError::DecisionInOrdering(a.clone()));
        }
        if !framework.contains(a.as_str()) {
            return Err(ExtractionError::UnknownInOrdering(a.clone()));
        }
    }
    if let Some(missing) = framework.non_decision_arguments().find(|a| !ordering.contains(a.as_str())) {
        return Err(ExtractionError::MissingFromOrdering(missing.clone()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::feeding_pace;

    fn ord(s: &str) -> PreferenceOrdering {
        PreferenceOrdering::parse(s).unwrap()
    }

    fn scores_of(s: &ScoreAssignment, ids: &[&str]) -> Vec<f64> {
        ids.iter().map(|i| s.get(i).unwrap()).collect()
    }

    #[test]
    fn weights_reject_non_positive() {
        assert!(GapWeights::new(0.0, 1.0).is_err());
        assert!(GapWeights::new(1.0, -1.0).is_err());
        assert!(GapWeights::new(f64::NAN, 1.0).is_err());
        assert!(!GapWeights::new(1.0, 1.0).unwrap().separates_gap_kinds());
        assert!(GapWeights::new(1.0, 3.0).unwrap().separates_gap_kinds());
    }

    #[test]
    fn param_invariants() {
        assert!(RangeParams::new(0.2, 0.8).is_err());
        assert!(RangeParams::new(1.1, 0.0).is_err());
        assert!(RangeParams::new(0.5, -0.1).is_err());
        assert!(RangeParams::new(0.5, 0.5).is_ok());
        assert!(SqueezeParams::new(2.0, 1.0).is_err());
        assert!(SqueezeParams::new(-1.0, 1.0).is_err());
        assert!(SqueezeParams::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn distances_mixed_gaps() {
        let d = assign_distances(&ord("c = f >> b = e > a = d"), &GapWeights::new(1.0, 3.0).unwrap());
        assert_eq!(d.span(), 5.0);
        assert_eq!(d.get("c"), Some(1.0));
        assert_eq!(d.get("f"), Some(1.0));
        assert_eq!(d.get("b"), Some(4.0));
        assert_eq!(d.get("e"), Some(4.0));
        assert_eq!(d.get("a"), Some(5.0));
        assert_eq!(d.get("d"), Some(5.0));
    }

    #[test]
    fn distances_small() {
        let w = GapWeights::new(1.0, 3.0).unwrap();
        let d = assign_distances(&ord("a > b"), &w);
        assert_eq!((d.span(), d.get("a"), d.get("b")), (2.0, Some(1.0), Some(2.0)));
        let d = assign_distances(&ord("a >> b > c"), &w);
        assert_eq!(d.tier_distances(), &[1.0, 4.0, 5.0]);
    }

    #[test]
    fn nu1_mixed_gaps() {
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.8, 0.2).unwrap();
        let s = extract(&ord("c = f >> b = e > a = d"), &cfg);
        assert_eq!(scores_of(&s, &["c", "f", "b", "e", "a", "d"]), [0.8, 0.8, 0.35, 0.35, 0.2, 0.2]);
    }

    #[test]
    fn nu1_endpoints() {
        let cfg = ExtractionConfig::range(1.0, 3.0, 1.0, 0.0).unwrap();
        let s = extract(&ord("a > b"), &cfg);
        assert_eq!(scores_of(&s, &["a", "b"]), [1.0, 0.0]);
    }

    #[test]
    fn nu1_two_decimal_ratio_is_within_rounding() {
        let cfg = ExtractionConfig::range(1.0, 1.33, 0.75, 0.25).unwrap();
        let s = scores_of(&extract(&ord("a > b >> c > d"), &cfg), &["a", "b", "c", "d"]);
        for (got, want) in s.iter().zip([0.75, 0.6, 0.4, 0.25]) {
            assert!((got - want).abs() <= 0.01, "{got} vs {want}");
        }
        let cfg = ExtractionConfig::range(1.0, 4.0 / 3.0, 0.75, 0.25).unwrap();
        let s = scores_of(&extract(&ord("a > b >> c > d"), &cfg), &["a", "b", "c", "d"]);
        assert_eq!(s, [0.75, 0.6, 0.4, 0.25]);
        let cfg = ExtractionConfig::range(1.0, 96.0, 0.99, 0.01).unwrap();
        let s = scores_of(&extract(&ord("a > b >> c > d"), &cfg), &["a", "b", "c", "d"]);
        assert_eq!(s, [0.99, 0.98, 0.02, 0.01]);
    }

    #[test]
    fn nu2_normalised_endpoints() {
        let cfg = ExtractionConfig::squeeze(1.0, 3.0, 0.0, 0.0).unwrap();
        let s = extract(&ord("a = x >> b > c = y"), &cfg);
        assert_eq!(scores_of(&s, &["a", "x", "c", "y"]), [1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn nu2_substitution() {
        // d = (1, 4, 5), D = 5: (5 - d + 1) / (4 + 2)
        let cfg = ExtractionConfig::squeeze(1.0, 3.0, 1.0, 2.0).unwrap();
        let s = scores_of(&extract(&ord("a >> b > c"), &cfg), &["a", "b", "c"]);
        for (got, want) in s.iter().zip([5.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn nu2_centralised_limits() {
        let cfg = ExtractionConfig::squeeze(1.0, 3.0, 2.0, 4.0).unwrap();
        let (top, bot) = cfg.achieved_limits(5.0);
        assert_eq!((top, bot), (0.75, 0.25));
        assert!((top - (1.0 - bot)).abs() < 1e-12);
    }

    #[test]
    fn extract_qbaf_fixture() {
        let fw = feeding_pace();
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.8, 0.2).unwrap();
        let s = extract_qbaf(&fw, &ord("c = f >> b = e > a = d"), &cfg).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(scores_of(&s, &["c", "b", "a", "D1", "D2"]), [0.8, 0.35, 0.2, 0.5, 0.5]);
        assert!(s.check_covers(&fw).is_ok());
    }

    #[test]
    fn extract_qbaf_two_tiers_squeeze() {
        let fw = feeding_pace();
        let cfg = ExtractionConfig::squeeze(1.0, 3.0, 0.0, 0.0).unwrap();
        let s = extract_qbaf(&fw, &ord("a = b = c > d = e = f"), &cfg).unwrap();
        assert_eq!(scores_of(&s, &["a", "b", "c", "d", "e", "f", "D1", "D2"]), [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn extract_qbaf_coverage_errors() {
        let fw = feeding_pace();
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.8, 0.2).unwrap();
        assert!(matches!(extract_qbaf(&fw, &ord("c = f = D1 >> b = e > a = d"), &cfg), Err(ExtractionError::DecisionInOrdering(_))));
        assert!(matches!(extract_qbaf(&fw, &ord("c >> b = e > a = d"), &cfg), Err(ExtractionError::MissingFromOrdering(_))));
        assert!(matches!(extract_qbaf(&fw, &ord("c = f = z >> b = e > a = d"), &cfg), Err(ExtractionError::UnknownInOrdering(_))));
    }

    #[test]
    fn tidy_rounding() {
        assert_eq!(tidy(0.35000000000000003), 0.35);
        assert_eq!(tidy(0.0), 0.0);
        assert_eq!(tidy(1.0), 1.0);
        assert_eq!(tidy(1.0 / 3.0), 0.333333333333333);
    }
}
