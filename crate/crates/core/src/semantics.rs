//! Gradual semantics for acyclic frameworks.
//!
//! Each semantics is a local combine function: a node's strength depends on
//! its base score and the final strengths of its attackers and supporters.
//! On a DAG one pass in topological order gives the exact fixed point.
//!
//! * Quadratic energy: sum aggregation `E = Σ supp − Σ att`, influence
//!   `h(x) = max(0,x)² / (1 + max(0,x)²)`, strength `τ − τ·h(−E) + (1−τ)·h(E)`.
//! * Euler-based: `1 − (1 − τ²) / (1 + τ·e^E)`.
//! * DF-QuAD: product aggregation `F(v) = 1 − Π(1 − vᵢ)` over attackers and
//!   supporters separately, then a linear move towards 0 or 1.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::model::{ArgumentId, BipolarFramework, ModelError, ScoreAssignment};
use crate::EQ_TOLERANCE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error("value {0} is outside [0, 1]")]
    Domain(f64),
    #[error("grid needs at least two points, got {0}")]
    GridSize(usize),
    #[error("no decision arguments to choose from")]
    EmptyDecisions,
    #[error("no strength for decision argument {0}")]
    UnknownDecision(ArgumentId),
    #[error("evaluation order is not a topological order of the framework")]
    InvalidOrder,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticsKind {
    QuadraticEnergy,
    EulerBased,
    DfQuad,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 3] = [SemanticsKind::QuadraticEnergy, SemanticsKind::EulerBased, SemanticsKind::DfQuad];

    /// Short upper-case tag used in reports (`QE`, `EB`, `DF`).
    pub fn tag(self) -> &'static str {
        match self {
            SemanticsKind::QuadraticEnergy => "QE",
            SemanticsKind::EulerBased => "EB",
            SemanticsKind::DfQuad => "DF",
        }
    }

    /// Lower-case name accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SemanticsKind::QuadraticEnergy => "qe",
            SemanticsKind::EulerBased => "eb",
            SemanticsKind::DfQuad => "dfquad",
        }
    }

    pub fn combine(self, tau: f64, attackers: &[f64], supporters: &[f64]) -> Result<f64, SemanticsError> {
        match self {
            SemanticsKind::QuadraticEnergy => combine_qe(tau, attackers, supporters),
            SemanticsKind::EulerBased => combine_eb(tau, attackers, supporters),
            SemanticsKind::DfQuad => combine_dfquad(tau, attackers, supporters),
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qe" | "QE" => Ok(SemanticsKind::QuadraticEnergy),
            "eb" | "EB" => Ok(SemanticsKind::EulerBased),
            "dfquad" | "df" | "DF" => Ok(SemanticsKind::DfQuad),
            _ => Err(()),
        }
    }
}

fn check_unit(v: f64) -> Result<f64, SemanticsError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(SemanticsError::Domain(v))
    }
}

fn check_inputs(tau: f64, attackers: &[f64], supporters: &[f64]) -> Result<(), SemanticsError> {
    check_unit(tau)?;
    for &v in attackers.iter().chain(supporters) {
        check_unit(v)?;
    }
    Ok(())
}

fn energy(attackers: &[f64], supporters: &[f64]) -> f64 {
    supporters.iter().sum::<f64>() - attackers.iter().sum::<f64>()
}

fn two_max(x: f64) -> f64 {
    let x = x.max(0.0);
    x * x / (1.0 + x * x)
}

pub fn combine_qe(tau: f64, attackers: &[f64], supporters: &[f64]) -> Result<f64, SemanticsError> {
    check_inputs(tau, attackers, supporters)?;
    let e = energy(attackers, supporters);
    Ok(tau - tau * two_max(-e) + (1.0 - tau) * two_max(e))
}

pub fn combine_eb(tau: f64, attackers: &[f64], supporters: &[f64]) -> Result<f64, SemanticsError> {
    check_inputs(tau, attackers, supporters)?;
    let e = energy(attackers, supporters);
    Ok(1.0 - (1.0 - tau * tau) / (1.0 + tau * libm::exp(e)))
}

fn probabilistic_sum(values: &[f64]) -> f64 {
    1.0 - values.iter().map(|v| 1.0 - v).product::<f64>()
}

pub fn combine_dfquad(tau: f64, attackers: &[f64], supporters: &[f64]) -> Result<f64, SemanticsError> {
    check_inputs(tau, attackers, supporters)?;
    let fa = probabilistic_sum(attackers);
    let fs = probabilistic_sum(supporters);
    Ok(if fa >= fs { tau - tau * (fa - fs) } else { tau + (1.0 - tau) * (fs - fa) })
}

/// Final strengths `σ` keyed by argument.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StrengthAssignment {
    strengths: BTreeMap<ArgumentId, f64>,
}

impl StrengthAssignment {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.strengths.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, f64)> {
        self.strengths.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.strengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strengths.is_empty()
    }
}

impl FromIterator<(ArgumentId, f64)> for StrengthAssignment {
    fn from_iter<I: IntoIterator<Item = (ArgumentId, f64)>>(iter: I) -> Self {
        Self { strengths: iter.into_iter().collect() }
    }
}

/// Strengths of every argument under `kind`.
pub fn evaluate(framework: &BipolarFramework, scores: &ScoreAssignment, kind: SemanticsKind) -> Result<StrengthAssignment, SemanticsError> {
    let order = framework.topological_order()?;
    evaluate_in_order(framework, scores, kind, &order)
}

/// As [`evaluate`], following a caller-supplied topological order.
pub fn evaluate_in_order(
    framework: &BipolarFramework,
    scores: &ScoreAssignment,
    kind: SemanticsKind,
    order: &[ArgumentId],
) -> Result<StrengthAssignment, SemanticsError> {
    scores.check_covers(framework)?;
    if order.len() != framework.arguments().len() {
        return Err(SemanticsError::InvalidOrder);
    }
    let position: BTreeMap<&ArgumentId, usize> = order.iter().enumerate().map(|(i, a)| (a, i)).collect();
    if position.len() != order.len() || order.iter().any(|a| !framework.arguments().contains(a)) {
        return Err(SemanticsError::InvalidOrder);
    }
    if framework.edges().any(|(s, t)| position[s] >= position[t]) {
        return Err(SemanticsError::InvalidOrder);
    }

    let mut attackers: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = BTreeMap::new();
    let mut supporters: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = BTreeMap::new();
    for (s, t) in framework.attacks() {
        attackers.entry(t).or_default().push(s);
    }
    for (s, t) in framework.supports() {
        supporters.entry(t).or_default().push(s);
    }

    let mut strengths: BTreeMap<ArgumentId, f64> = BTreeMap::new();
    let mut att = Vec::new();
    let mut sup = Vec::new();
    for node in order {
        att.clear();
        sup.clear();
        let lookup = |ids: Option<&Vec<&ArgumentId>>, out: &mut Vec<f64>, done: &BTreeMap<ArgumentId, f64>| {
            for id in ids.map(Vec::as_slice).unwrap_or(&[]) {
                out.push(done[*id]);
            }
        };
        lookup(attackers.get(node), &mut att, &strengths);
        lookup(supporters.get(node), &mut sup, &strengths);
        let tau = scores.get(node.as_str()).expect("coverage checked");
        strengths.insert(node.clone(), kind.combine(tau, &att, &sup)?);
    }
    Ok(StrengthAssignment { strengths })
}

/// Winner(s) among the decision arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionOutcome {
    /// Decisions within tolerance of the maximum strength, in input order.
    pub winners: Vec<ArgumentId>,
    /// Strength of every decision, in input order.
    pub strengths: Vec<(ArgumentId, f64)>,
}

impl DecisionOutcome {
    pub fn is_tie(&self) -> bool {
        self.winners.len() > 1
    }

    /// The single winner, or `None` on a tie.
    pub fn winner(&self) -> Option<&ArgumentId> {
        match self.winners.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }
}

/// Picks the decision argument(s) with the highest strength; strengths
/// within `1e-9` of the maximum tie.
pub fn decide(strengths: &StrengthAssignment, decisions: &[ArgumentId]) -> Result<DecisionOutcome, SemanticsError> {
    if decisions.is_empty() {
        return Err(SemanticsError::EmptyDecisions);
    }
    let values = decisions
        .iter()
        .map(|d| strengths.get(d.as_str()).map(|s| (d.clone(), s)).ok_or_else(|| SemanticsError::UnknownDecision(d.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let best = values.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let winners = values.iter().filter(|(_, s)| best - s <= EQ_TOLERANCE).map(|(d, _)| d.clone()).collect();
    Ok(DecisionOutcome { winners, strengths: values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Attack,
    Support,
}

impl Polarity {
    pub fn name(self) -> &'static str {
        match self {
            Polarity::Attack => "attack",
            Polarity::Support => "support",
        }
    }
}

/// Strength of an argument with one influencer of strength
/// `influencer_strength`, sampled at `τ = i / (grid_size − 1)`.
pub fn influence_curve(
    kind: SemanticsKind,
    polarity: Polarity,
    influencer_strength: f64,
    grid_size: usize,
) -> Result<Vec<(f64, f64)>, SemanticsError> {
    check_unit(influencer_strength)?;
    if grid_size < 2 {
        return Err(SemanticsError::GridSize(grid_size));
    }
    let one = [influencer_strength];
    let (att, sup): (&[f64], &[f64]) = match polarity {
        Polarity::Attack => (&one, &[]),
        Polarity::Support => (&[], &one),
    };
    (0..grid_size)
        .map(|i| {
            let tau = i as f64 / (grid_size - 1) as f64;
            kind.combine(tau, att, sup).map(|s| (tau, s))
        })
        .collect()
}
