//! Executable checks for the extraction axioms and optional properties.

use alloc::format;
use alloc::vec::Vec;

use super::{extract, ExtractionConfig, ExtractionError};
use crate::model::{ArgumentId, ScoreAssignment};
use crate::preferences::{AdjacentPair, PreferenceOrdering, Relation};
use crate::EQ_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    /// The premise of the axiom does not apply to the inputs.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckViolation {
    /// A pair whose scores disagree with its preference relation.
    Coherence {
        higher: ArgumentId,
        lower: ArgumentId,
        relation: Relation,
        higher_score: f64,
        lower_score: f64,
    },
    /// `wider` should have a strictly larger score difference than `narrower`.
    GapOrder {
        wider: AdjacentPair,
        wider_diff: f64,
        narrower: AdjacentPair,
        narrower_diff: f64,
    },
    /// A strict link whose score difference is not positive.
    FlatGap {
        pair: AdjacentPair,
        diff: f64,
    },
    /// Non-isomorphic orderings extracted to the same scores.
    IdenticalScores,
    MissingScore(ArgumentId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub outcome: CheckOutcome,
    pub violations: Vec<CheckViolation>,
}

impl CheckReport {
    fn from_violations(violations: Vec<CheckViolation>) -> Self {
        let outcome = if violations.is_empty() { CheckOutcome::Pass } else { CheckOutcome::Fail };
        Self { outcome, violations }
    }

    fn not_applicable() -> Self {
        Self { outcome: CheckOutcome::NotApplicable, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.outcome == CheckOutcome::Pass
    }
}

fn score_of(scores: &ScoreAssignment, id: &ArgumentId, missing: &mut Vec<CheckViolation>) -> Option<f64> {
    let s = scores.get(id.as_str());
    if s.is_none() && !missing.iter().any(|v| matches!(v, CheckViolation::MissingScore(m) if m == id)) {
        missing.push(CheckViolation::MissingScore(id.clone()));
    }
    s
}

/// Preference coherence: strictly preferred arguments score strictly higher
/// and indifferent arguments score the same.
pub fn check_axiom1(ordering: &PreferenceOrdering, scores: &ScoreAssignment) -> CheckReport {
    let mut violations = Vec::new();
    let args: Vec<(&ArgumentId, usize)> =
        ordering.tiers().iter().enumerate().flat_map(|(t, tier)| tier.iter().map(move |a| (a, t))).collect();
    for (i, &(a, ta)) in args.iter().enumerate() {
        for &(b, tb) in &args[i + 1..] {
            let (Some(sa), Some(sb)) = (score_of(scores, a, &mut violations), score_of(scores, b, &mut violations)) else {
                continue;
            };
            let relation = ordering.relation_between_tiers(ta, tb);
            let ok = if relation == Relation::Equal { (sa - sb).abs() <= EQ_TOLERANCE } else { sa - sb > EQ_TOLERANCE };
            if !ok {
                violations.push(CheckViolation::Coherence {
                    higher: a.clone(),
                    lower: b.clone(),
                    relation,
                    higher_score: sa,
                    lower_score: sb,
                });
            }
        }
    }
    CheckReport::from_violations(violations)
}

#[derive(Default)]
struct Extent {
    min: Option<(f64, AdjacentPair)>,
    max: Option<(f64, AdjacentPair)>,
}

impl Extent {
    fn add(&mut self, diff: f64, pair: &AdjacentPair) {
        if self.min.as_ref().is_none_or(|(m, _)| diff < *m) {
            self.min = Some((diff, pair.clone()));
        }
        if self.max.as_ref().is_none_or(|(m, _)| diff > *m) {
            self.max = Some((diff, pair.clone()));
        }
    }
}

/// Preference relation coherence, read over every adjacent pair: each `>>`
/// difference must exceed each `>` difference, and both must exceed every
/// indifference difference (and zero).
pub fn check_axiom2(ordering: &PreferenceOrdering, scores: &ScoreAssignment) -> CheckReport {
    let mut violations = Vec::new();
    let (mut much, mut strict, mut equal) = (Extent::default(), Extent::default(), Extent::default());
    for pair in ordering.adjacent_pairs() {
        let (Some(hi), Some(lo)) = (score_of(scores, &pair.higher, &mut violations), score_of(scores, &pair.lower, &mut violations)) else {
            continue;
        };
        match pair.link {
            Relation::MuchGreater => much.add(hi - lo, &pair),
            Relation::Greater => strict.add(hi - lo, &pair),
            _ => equal.add((hi - lo).abs(), &pair),
        }
    }

    let mut require_above = |wider: &Extent, narrower: &Extent| {
        if let (Some((w, wp)), Some((n, np))) = (&wider.min, &narrower.max) {
            if w - n <= EQ_TOLERANCE {
                violations.push(CheckViolation::GapOrder { wider: wp.clone(), wider_diff: *w, narrower: np.clone(), narrower_diff: *n });
            }
        }
    };
    require_above(&much, &strict);
    require_above(&strict, &equal);
    require_above(&much, &equal);

    for extent in [&much, &strict] {
        if let Some((w, wp)) = &extent.min {
            if *w <= EQ_TOLERANCE {
                violations.push(CheckViolation::FlatGap { pair: wp.clone(), diff: *w });
            }
        }
    }
    CheckReport::from_violations(violations)
}

/// Preference structure coherence: non-isomorphic orderings over the same
/// arguments must extract to different scores.
pub fn check_axiom3(
    config: &ExtractionConfig,
    first: &PreferenceOrdering,
    second: &PreferenceOrdering,
) -> Result<CheckReport, ExtractionError> {
    if first.argument_set() != second.argument_set() {
        return Err(ExtractionError::ArgumentSetMismatch);
    }
    if first.is_isomorphic_to(second) {
        return Ok(CheckReport::not_applicable());
    }
    let a = extract(first, config);
    let b = extract(second, config);
    let differs = a.iter().any(|(id, s)| b.get(id.as_str()).is_none_or(|t| (s - t).abs() > EQ_TOLERANCE));
    let violations = if differs { Vec::new() } else { alloc::vec![CheckViolation::IdenticalScores] };
    Ok(CheckReport::from_violations(violations))
}

/// Which optional properties a score assignment exhibits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport {
    /// Limits are exactly `(1, 0)`.
    pub normalisation: bool,
    /// `top == 1 - bot`.
    pub centralisation: bool,
    /// Adjacent pairs with the same link have equal score differences.
    pub regularity: bool,
    /// Adding indifferent arguments leaves existing scores untouched.
    pub stability: bool,
    pub achieved_top: f64,
    pub achieved_bot: f64,
}

fn fresh_id(ordering: &PreferenceOrdering, taken: &[ArgumentId], n: usize) -> ArgumentId {
    let mut name = format!("fresh_{n}");
    while ordering.contains(&name) || taken.iter().any(|t| t.as_str() == name) {
        name.push('_');
    }
    ArgumentId::new(name).expect("letters, digits and underscores")
}

pub fn check_properties(ordering: &PreferenceOrdering, scores: &ScoreAssignment, config: &ExtractionConfig) -> PropertyReport {
    let tier_score = |tier: usize| ordering.tiers()[tier].iter().next().and_then(|a| scores.get(a.as_str())).unwrap_or(f64::NAN);
    let top = tier_score(0);
    let bot = tier_score(ordering.tiers().len() - 1);

    let mut groups: Vec<(Relation, f64)> = Vec::new();
    let mut regularity = true;
    for pair in ordering.adjacent_pairs() {
        let diff = match (scores.get(pair.higher.as_str()), scores.get(pair.lower.as_str())) {
            (Some(h), Some(l)) => h - l,
            _ => f64::NAN,
        };
        match groups.iter().find(|(r, _)| *r == pair.link) {
            Some((_, first)) => regularity &= (diff - first).abs() <= EQ_TOLERANCE,
            None => {
                regularity &= !diff.is_nan();
                groups.push((pair.link, diff));
            }
        }
    }

    let mut extended = ordering.clone();
    let mut added: Vec<ArgumentId> = Vec::new();
    for (i, tier) in ordering.tiers().iter().enumerate() {
        let anchor = tier.iter().next().expect("tiers are non-empty").as_str();
        let id = fresh_id(ordering, &added, i);
        extended = extended.extend_with_equal(id.clone(), anchor).expect("fresh id, known anchor");
        added.push(id);
    }
    let re_extracted = extract(&extended, config);
    let stability = ordering.arguments().all(|a| match (scores.get(a.as_str()), re_extracted.get(a.as_str())) {
        (Some(s), Some(t)) => (s - t).abs() <= EQ_TOLERANCE,
        _ => false,
    });

    PropertyReport {
        normalisation: top == 1.0 && bot == 0.0,
        centralisation: (top - (1.0 - bot)).abs() <= EQ_TOLERANCE,
        regularity,
        stability,
        achieved_top: top,
        achieved_bot: bot,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> PreferenceOrdering {
        PreferenceOrdering::parse(s).unwrap()
    }

    fn tiered(o: &PreferenceOrdering, per_tier: &[f64]) -> ScoreAssignment {
        ScoreAssignment::new(o.tiers().iter().zip(per_tier).flat_map(|(t, s)| t.iter().map(move |a| (a.clone(), *s)))).unwrap()
    }

    #[test]
    fn axiom1_examples() {
        let o = ord("c = f >> b = e > a = d");
        assert!(check_axiom1(&o, &tiered(&o, &[0.8, 0.35, 0.2])).passed());

        let flat = check_axiom1(&o, &tiered(&o, &[0.5, 0.5, 0.5]));
        assert_eq!(flat.outcome, CheckOutcome::Fail);
        match &flat.violations[0] {
            CheckViolation::Coherence { higher, lower, .. } => {
                assert_eq!((higher.as_str(), lower.as_str()), ("c", "b"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let ab = ord("a > b");
        let r = check_axiom1(&ab, &tiered(&ab, &[0.3, 0.7]));
        assert!(matches!(&r.violations[..], [CheckViolation::Coherence { higher, lower, .. }]
            if higher.as_str() == "a" && lower.as_str() == "b"));
    }

    #[test]
    fn axiom1_unequal_tier_members_fail() {
        let o = ord("a = b > c");
        let s = ScoreAssignment::new([("a".parse().unwrap(), 0.9), ("b".parse().unwrap(), 0.8), ("c".parse().unwrap(), 0.1)]).unwrap();
        assert!(!check_axiom1(&o, &s).passed());
    }

    #[test]
    fn axiom2_examples() {
        let o = ord("c = f >> b = e > a = d");
        assert!(check_axiom2(&o, &tiered(&o, &[0.9, 0.3, 0.1])).passed());
        let r = check_axiom2(&o, &tiered(&o, &[0.9, 0.5, 0.1]));
        assert_eq!(r.outcome, CheckOutcome::Fail);
        assert!(r.violations.iter().any(|v| matches!(v,
            CheckViolation::GapOrder { wider_diff, narrower_diff, .. }
                if (wider_diff - 0.4).abs() < 1e-12 && (narrower_diff - 0.4).abs() < 1e-12)));
    }

    #[test]
    fn axiom2_single_kind_regular_spacing_passes() {
        let o = ord("a > b > c = d");
        assert!(check_axiom2(&o, &tiered(&o, &[0.9, 0.5, 0.1])).passed());
    }

    #[test]
    fn missing_scores_are_reported() {
        let o = ord("a > b");
        let s = ScoreAssignment::new([("a".parse().unwrap(), 0.9)]).unwrap();
        assert!(matches!(&check_axiom1(&o, &s).violations[..], [CheckViolation::MissingScore(_)]));
        assert!(!check_axiom2(&o, &s).passed());
    }

    #[test]
    fn axiom3_examples() {
        let cfg = ExtractionConfig::range(1.0, 3.0, 1.0, 0.0).unwrap();
        let r = check_axiom3(&cfg, &ord("a > b = c"), &ord("a = b > c")).unwrap();
        assert_eq!(r.outcome, CheckOutcome::Pass);
        let r = check_axiom3(&cfg, &ord("a > b"), &ord("b > a")).unwrap();
        assert_eq!(r.outcome, CheckOutcome::NotApplicable);
        let r = check_axiom3(&cfg, &ord("a > b"), &ord("a > b")).unwrap();
        assert_eq!(r.outcome, CheckOutcome::NotApplicable);
        assert_eq!(check_axiom3(&cfg, &ord("a > b"), &ord("a > c")), Err(ExtractionError::ArgumentSetMismatch));
    }

    #[test]
    fn axiom3_flat_range_fails() {
        // top == bot flattens every score, so structure is lost.
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.5, 0.5).unwrap();
        let r = check_axiom3(&cfg, &ord("a > b = c"), &ord("a = b > c")).unwrap();
        assert_eq!(r.violations, [CheckViolation::IdenticalScores]);
    }

    #[test]
    fn properties_normalised_range() {
        let o = ord("c = f >> b = e > a = d");
        let cfg = ExtractionConfig::range(1.0, 3.0, 1.0, 0.0).unwrap();
        let p = check_properties(&o, &extract(&o, &cfg), &cfg);
        assert!(p.normalisation && p.centralisation && p.regularity && p.stability);
    }

    #[test]
    fn properties_centralised_squeeze() {
        let o = ord("a >> b > c");
        let cfg = ExtractionConfig::squeeze(1.0, 3.0, 2.0, 4.0).unwrap();
        let p = check_properties(&o, &extract(&o, &cfg), &cfg);
        assert!(p.centralisation && !p.normalisation);
        assert_eq!((p.achieved_top, p.achieved_bot), (0.75, 0.25));
    }

    #[test]
    fn properties_regular_single_gaps() {
        let o = ord("c = f > b = e > a = d");
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.9, 0.1).unwrap();
        let s = extract(&o, &cfg);
        assert_eq!(s.get("b"), Some(0.5));
        let p = check_properties(&o, &s, &cfg);
        assert!(p.regularity && p.centralisation && !p.normalisation);
        for pair in o.adjacent_pairs().into_iter().filter(|p| p.link == Relation::Greater) {
            let diff = s.get(pair.higher.as_str()).unwrap() - s.get(pair.lower.as_str()).unwrap();
            assert!((diff - 0.4).abs() < 1e-9);
        }
    }

    #[test]
    fn irregular_scores_break_regularity_and_stability() {
        let o = ord("a > b > c");
        let cfg = ExtractionConfig::range(1.0, 3.0, 0.9, 0.1).unwrap();
        let s = tiered(&o, &[0.9, 0.7, 0.1]);
        let p = check_properties(&o, &s, &cfg);
        assert!(!p.regularity);
        assert!(!p.stability);
    }

    #[test]
    fn fresh_ids_avoid_collisions() {
        let o = ord("fresh_0 > b");
        let id = fresh_id(&o, &[], 0);
        assert_eq!(id.as_str(), "fresh_0_");
    }
}
