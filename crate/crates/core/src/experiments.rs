//! Reference-table reproduction and the seeded semantics-agreement study.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bsef::{extract_qbaf, ExtractionConfig, ExtractionError};
use crate::fixtures::{feeding_pace, FAST, SLOW};
use crate::model::{ArgumentId, BipolarFramework, ScoreAssignment};
use crate::preferences::{GapKind, PreferenceOrdering};
use crate::semantics::{decide, evaluate, DecisionOutcome, SemanticsError, SemanticsKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid study configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Kappa(#[from] KappaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("label sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("label sequences are empty")]
    Empty,
}

/// Cohen's kappa between two raters. When both raters use one and the same
/// label throughout, chance agreement is 1 and the result is defined as 1
/// if the raters agree everywhere and 0 otherwise.
pub fn cohen_kappa<T: Ord>(first: &[T], second: &[T]) -> Result<f64, KappaError> {
    if first.len() != second.len() {
        return Err(KappaError::LengthMismatch(first.len(), second.len()));
    }
    if first.is_empty() {
        return Err(KappaError::Empty);
    }
    let n = first.len() as f64;
    let agree = first.iter().zip(second).filter(|(a, b)| a == b).count();
    let p_o = agree as f64 / n;

    let mut m1: BTreeMap<&T, usize> = BTreeMap::new();
    let mut m2: BTreeMap<&T, usize> = BTreeMap::new();
    for (a, b) in first.iter().zip(second) {
        *m1.entry(a).or_default() += 1;
        *m2.entry(b).or_default() += 1;
    }
    let constant_same = m1.len() == 1 && m2.len() == 1 && m1.keys().next() == m2.keys().next();
    if constant_same {
        return Ok(if agree == first.len() { 1.0 } else { 0.0 });
    }
    let p_e: f64 = m1.iter().map(|(label, c1)| *c1 as f64 * m2.get(label).copied().unwrap_or(0) as f64).sum::<f64>() / (n * n);
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub sample_count: usize,
    pub seed: u64,
    pub centralisation: bool,
    pub top_range: (f64, f64),
    pub bot_range: (f64, f64),
    pub ratio_choices: Vec<f64>,
    pub delta: f64,
    pub framework: BipolarFramework,
}

impl StudyConfig {
    /// Defaults on the feeding-pace framework: `⊤ ∈ [0.55, 1]`,
    /// `⊥ ∈ [0, 0.45]`, ratios `{2, 3, 4, 5, 6}`, `δ = 1`.
    pub fn new(sample_count: usize, seed: u64, centralisation: bool) -> Self {
        Self {
            sample_count,
            seed,
            centralisation,
            top_range: (0.55, 1.0),
            bot_range: (0.0, 0.45),
            ratio_choices: vec![2.0, 3.0, 4.0, 5.0, 6.0],
            delta: 1.0,
            framework: feeding_pace(),
        }
    }

    /// Limits pinned to `⊤ = 1`, `⊥ = 0`.
    pub fn normalised(sample_count: usize, seed: u64) -> Self {
        Self { top_range: (1.0, 1.0), bot_range: (0.0, 0.0), ..Self::new(sample_count, seed, false) }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let unit = |(lo, hi): (f64, f64)| (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi;
        if self.sample_count == 0 {
            return Err(ExperimentError::Config("sample count must be positive"));
        }
        if !unit(self.top_range) || !unit(self.bot_range) {
            return Err(ExperimentError::Config("score ranges must be intervals within [0, 1]"));
        }
        if self.centralisation {
            if self.top_range.0 < 0.5 {
                return Err(ExperimentError::Config("top range must lie above 0.5 in centralisation mode"));
            }
        } else if self.bot_range.1 > self.top_range.0 {
            return Err(ExperimentError::Config("bottom range must lie below the top range"));
        }
        if self.ratio_choices.is_empty() || self.ratio_choices.iter().any(|r| !(r.is_finite() && *r > 1.0)) {
            return Err(ExperimentError::Config("ratio choices must be non-empty and greater than 1"));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(ExperimentError::Config("delta must be positive"));
        }
        if self.framework.non_decision_arguments().count() < 2 {
            return Err(ExperimentError::Config("framework needs at least two non-decision arguments"));
        }
        if !self.framework.validate_for_decisions().is_ok() {
            return Err(ExperimentError::Config("framework does not satisfy the decision conditions"));
        }
        Ok(())
    }
}

/// `T(n, k)`: ordered partitions of `n` elements into `k` blocks.
fn ordered_partition_counts(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; n + 1]; n + 1];
    t[0][0] = 1.0;
    for i in 1..=n {
        for k in 1..=i {
            t[i][k] = k as f64 * (t[i - 1][k - 1] + t[i - 1][k]);
        }
    }
    t
}

fn uniform_in<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Uniform ordered partition of `0..n` into exactly `k` blocks.
fn sample_blocks<R: Rng>(rng: &mut R, counts: &[Vec<f64>], n: usize, k: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let fresh = k as f64 * counts[n - 1][k - 1] / counts[n][k];
    if rng.random::<f64>() < fresh {
        let mut blocks = sample_blocks(rng, counts, n - 1, k - 1);
        blocks.insert(rng.random_range(0..k), vec![n - 1]);
        blocks
    } else {
        let mut blocks = sample_blocks(rng, counts, n - 1, k);
        let b = rng.random_range(0..k);
        blocks[b].push(n - 1);
        blocks
    }
}

/// Draws one ordering over the framework's non-decision arguments and one
/// range extraction config.
pub fn sample_scenario<R: Rng>(rng: &mut R, config: &StudyConfig) -> Result<(PreferenceOrdering, ExtractionConfig), ExperimentError> {
    config.validate()?;
    let args: Vec<&ArgumentId> = config.framework.non_decision_arguments().collect();
    let n = args.len();
    let counts = ordered_partition_counts(n);

    let total: f64 = counts[n][2..].iter().sum();
    let mut pick = rng.random::<f64>() * total;
    let mut k = n;
    for (size, weight) in counts[n].iter().enumerate().skip(2) {
        if pick < *weight {
            k = size;
            break;
        }
        pick -= weight;
    }

    let tiers: Vec<BTreeSet<ArgumentId>> =
        sample_blocks(rng, &counts, n, k).into_iter().map(|block| block.into_iter().map(|i| args[i].clone()).collect()).collect();
    let gaps = (1..k).map(|_| if rng.random::<bool>() { GapKind::MuchGreater } else { GapKind::Greater }).collect();
    let ordering = PreferenceOrdering::new(tiers, gaps).expect("sampled partition is a valid ordering");

    let top = uniform_in(rng, config.top_range);
    let bot = if config.centralisation { 1.0 - top } else { uniform_in(rng, config.bot_range).min(top) };
    let ratio = config.ratio_choices[rng.random_range(0..config.ratio_choices.len())];
    let extraction = ExtractionConfig::range(config.delta, ratio * config.delta, top, bot)?;
    Ok((ordering, extraction))
}

/// Deterministic generator for sample `index` of a study seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A decision outcome reduced to a label: the index of the single winning
/// decision, or a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecisionLabel {
    Decision(usize),
    Tie,
}

impl DecisionLabel {
    pub fn from_outcome(outcome: &DecisionOutcome, decisions: &[ArgumentId]) -> Self {
        match outcome.winner() {
            Some(w) => DecisionLabel::Decision(decisions.iter().position(|d| d == w).expect("winner is a decision")),
            None => DecisionLabel::Tie,
        }
    }
}

/// Labels of sample `index` under QE, EB and DF-QuAD, in that order.
pub fn run_sample(config: &StudyConfig, index: u64) -> Result<[DecisionLabel; 3], ExperimentError> {
    let mut rng = sample_rng(config.seed, index);
    let (ordering, extraction) = sample_scenario(&mut rng, config)?;
    let fw = &config.framework;
    let scores = extract_qbaf(fw, &ordering, &extraction)?;
    let mut labels = [DecisionLabel::Tie; 3];
    for (slot, kind) in labels.iter_mut().zip(SemanticsKind::ALL) {
        let strengths = evaluate(fw, &scores, kind)?;
        *slot = DecisionLabel::from_outcome(&decide(&strengths, fw.decisions())?, fw.decisions());
    }
    Ok(labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairStatistic {
    pub first: SemanticsKind,
    pub second: SemanticsKind,
    pub agreement: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionCounts {
    pub kind: SemanticsKind,
    /// Wins per decision, aligned with [`StudyReport::decisions`].
    pub wins: Vec<usize>,
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub samples: usize,
    pub seed: u64,
    pub centralisation: bool,
    pub decisions: Vec<ArgumentId>,
    /// QE-EB, QE-DF, EB-DF.
    pub pairs: Vec<PairStatistic>,
    pub counts: Vec<DecisionCounts>,
}

impl StudyReport {
    /// Assembles a report from per-sample labels indexed by sample number.
    pub fn from_outcomes(config: &StudyConfig, outcomes: &[[DecisionLabel; 3]]) -> Result<Self, ExperimentError> {
        let column = |i: usize| outcomes.iter().map(|o| o[i]).collect::<Vec<_>>();
        let columns = [column(0), column(1), column(2)];
        let kinds = SemanticsKind::ALL;
        let mut pairs = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let agree = columns[i].iter().zip(&columns[j]).filter(|(a, b)| a == b).count();
            pairs.push(PairStatistic {
                first: kinds[i],
                second: kinds[j],
                agreement: agree as f64 / outcomes.len() as f64,
                kappa: cohen_kappa(&columns[i], &columns[j])?,
            });
        }
        let decisions = config.framework.decisions().to_vec();
        let counts = kinds
            .iter()
            .zip(&columns)
            .map(|(kind, labels)| {
                let mut wins = vec![0; decisions.len()];
                let mut ties = 0;
                for label in labels {
                    match label {
                        DecisionLabel::Decision(d) => wins[*d] += 1,
                        DecisionLabel::Tie => ties += 1,
                    }
                }
                DecisionCounts { kind: *kind, wins, ties }
            })
            .collect();
        Ok(Self { samples: outcomes.len(), seed: config.seed, centralisation: config.centralisation, decisions, pairs, counts })
    }

    pub fn pair(&self, first: SemanticsKind, second: SemanticsKind) -> Option<&PairStatistic> {
        self.pairs.iter().find(|p| (p.first, p.second) == (first, second) || (p.first, p.second) == (second, first))
    }
}

/// Serial agreement study. Sample `i` draws from its own stream, so any
/// partitioning of the index range yields the same report.
pub fn run_agreement_study(config: &StudyConfig) -> Result<StudyReport, ExperimentError> {
    config.validate()?;
    let outcomes = (0..config.sample_count as u64).map(|i| run_sample(config, i)).collect::<Result<Vec<_>, _>>()?;
    StudyReport::from_outcomes(config, &outcomes)
}

/// Repeats the study once per fixed gap ratio.
pub fn ratio_sweep(config: &StudyConfig, ratios: &[f64]) -> Result<Vec<(f64, StudyReport)>, ExperimentError> {
    ratios
        .iter()
        .map(|&r| {
            let cfg = StudyConfig { ratio_choices: vec![r], ..config.clone() };
            run_agreement_study(&cfg).map(|report| (r, report))
        })
        .collect()
}

/// One row of the reference table on the feeding-pace framework.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    /// `None` for the flat row where every base score is 0.5.
    pub ordering: Option<&'static str>,
    pub top: f64,
    pub bot: f64,
    pub ratio: f64,
    /// Published `(slow, fast)` strengths for QE, EB and DF-QuAD.
    pub reference: [(f64, f64); 3],
    /// Published choice: `false` for slow, `true` for fast.
    pub fast_chosen: bool,
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    let row = |ordering, top, bot, ratio, reference, fast_chosen| ReferenceRow { ordering, top, bot, ratio, reference, fast_chosen };
    vec![
        row(None, 0.5, 0.5, 1.0, [(0.5, 0.51), (0.5, 0.52), (0.44, 0.63)], true),
        row(Some("c = f >> b = e > a = d"), 0.9, 0.1, 3.0, [(0.58, 0.33), (0.56, 0.39), (0.78, 0.23)], false),
        row(Some("c = f >> b = e > a = d"), 0.9, 0.1, 5.0, [(0.57, 0.32), (0.55, 0.39), (0.79, 0.2)], false),
        row(Some("c = f >> b = e > a = d"), 0.75, 0.25, 5.0, [(0.52, 0.4), (0.53, 0.43), (0.63, 0.38)], false),
        row(Some("b = e > a = d >> c = f"), 0.8, 0.2, 3.0, [(0.5, 0.63), (0.52, 0.6), (0.28, 0.87)], true),
        row(Some("b = e > a = d >> c = f"), 0.6, 0.4, 3.0, [(0.5, 0.53), (0.5, 0.54), (0.4, 0.71)], true),
        row(Some("a = d >> c = f > b = e"), 0.8, 0.2, 4.0, [(0.36, 0.6), (0.4, 0.59), (0.15, 0.76)], true),
        row(Some("a = d >> c = f > b = e"), 1.0, 0.0, 4.0, [(0.25, 0.7), (0.37, 0.65), (0.0, 0.9)], true),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionCell {
    /// 1-based row number.
    pub row: usize,
    pub kind: SemanticsKind,
    /// `SLOW` or `FAST`.
    pub option: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub delta: f64,
    pub decision_match: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionReport {
    /// Row-major, then semantics, then slow before fast.
    pub cells: Vec<ReproductionCell>,
    /// Tolerance used to flag mismatching cells.
    pub tolerance: f64,
}

impl ReproductionReport {
    /// Cells whose strength differs from the reference by more than the
    /// tolerance.
    pub fn mismatches(&self) -> impl Iterator<Item = &ReproductionCell> {
        self.cells.iter().filter(|c| c.delta.abs() > self.tolerance)
    }

    /// `(matching, total)` decisions over rows × semantics.
    pub fn decision_matches(&self) -> (usize, usize) {
        let per_pair: Vec<&ReproductionCell> = self.cells.iter().filter(|c| c.option == SLOW).collect();
        (per_pair.iter().filter(|c| c.decision_match).count(), per_pair.len())
    }
}

/// Recomputes every reference row under all three semantics.
pub fn reproduce_reference_table() -> ReproductionReport {
    let fw = feeding_pace();
    let mut cells = Vec::new();
    for (i, row) in reference_rows().into_iter().enumerate() {
        let scores = match row.ordering {
            None => ScoreAssignment::uniform(&fw, 0.5).expect("0.5 is in range"),
            Some(text) => {
                let ordering = PreferenceOrdering::parse(text).expect("reference ordering parses");
                let cfg = ExtractionConfig::range(1.0, row.ratio, row.top, row.bot).expect("reference config");
                extract_qbaf(&fw, &ordering, &cfg).expect("reference ordering covers the fixture")
            }
        };
        for (kind, (ref_slow, ref_fast)) in SemanticsKind::ALL.into_iter().zip(row.reference) {
            let strengths = evaluate(&fw, &scores, kind).expect("fixture is acyclic");
            let outcome = decide(&strengths, fw.decisions()).expect("fixture has decisions");
            let expected = if row.fast_chosen { FAST } else { SLOW };
            let decision_match = outcome.winner().map(ArgumentId::as_str) == Some(expected);
            for (option, reference) in [(SLOW, ref_slow), (FAST, ref_fast)] {
                let computed = strengths.get(option).expect("decision evaluated");
                cells.push(ReproductionCell { row: i + 1, kind, option, computed, reference, delta: computed - reference, decision_match });
            }
        }
    }
    ReproductionReport { cells, tolerance: 0.02 }
}
