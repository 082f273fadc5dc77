//! Thread-parallel agreement study and its JSON / CSV renderings.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use qbaf_core::experiments::{run_sample, ExperimentError, ReproductionReport, StudyConfig, StudyReport};
use qbaf_core::semantics::{influence_curve, Polarity, SemanticsError};
use qbaf_core::SemanticsKind;

use crate::document::round12;

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("cannot start worker threads: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs the study on `threads` workers (0 picks rayon's default). Samples
/// are collected by index, so the report does not depend on `threads`.
pub fn run_parallel(config: &StudyConfig, threads: usize) -> Result<StudyReport, StudyError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let outcomes =
        pool.install(|| (0..config.sample_count as u64).into_par_iter().map(|i| run_sample(config, i)).collect::<Result<Vec<_>, _>>())?;
    Ok(StudyReport::from_outcomes(config, &outcomes)?)
}

fn pair_key(first: SemanticsKind, second: SemanticsKind) -> String {
    format!("{}-{}", first.tag(), second.tag())
}

#[derive(Debug, Serialize)]
struct CountsJson {
    wins: BTreeMap<String, usize>,
    ties: usize,
}

#[derive(Debug, Serialize)]
struct ReportJson {
    samples: usize,
    seed: u64,
    centralisation: bool,
    decisions: Vec<String>,
    agreement: BTreeMap<String, f64>,
    kappa: BTreeMap<String, f64>,
    counts: BTreeMap<String, CountsJson>,
}

/// Stable JSON rendering of a study report.
pub fn report_json(report: &StudyReport) -> String {
    let json = ReportJson {
        samples: report.samples,
        seed: report.seed,
        centralisation: report.centralisation,
        decisions: report.decisions.iter().map(ToString::to_string).collect(),
        agreement: report.pairs.iter().map(|p| (pair_key(p.first, p.second), p.agreement)).collect(),
        kappa: report.pairs.iter().map(|p| (pair_key(p.first, p.second), p.kappa)).collect(),
        counts: report
            .counts
            .iter()
            .map(|c| {
                let wins = report.decisions.iter().map(ToString::to_string).zip(c.wins.iter().copied()).collect();
                (c.kind.tag().to_owned(), CountsJson { wins, ties: c.ties })
            })
            .collect(),
    };
    crate::document::to_stable_json(&json)
}

fn num(x: f64) -> String {
    format!("{}", round12(x))
}

/// CSV with header `row,semantics,option,computed,paper,delta,decision_match`.
pub fn reproduction_csv(report: &ReproductionReport) -> String {
    let mut out = String::from("row,semantics,option,computed,paper,delta,decision_match\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.row,
            c.kind.tag(),
            c.option,
            num(c.computed),
            num(c.reference),
            num(c.delta),
            c.decision_match
        ));
    }
    out
}

/// CSV with header `semantics,polarity,influencer,tau,sigma`.
pub fn curves_csv(influencers: &[f64], grid_size: usize) -> Result<String, SemanticsError> {
    let mut out = String::from("semantics,polarity,influencer,tau,sigma\n");
    for kind in SemanticsKind::ALL {
        for polarity in [Polarity::Attack, Polarity::Support] {
            for &s in influencers {
                for (tau, sigma) in influence_curve(kind, polarity, s, grid_size)? {
                    out.push_str(&format!("{},{},{},{},{}\n", kind.tag(), polarity.name(), num(s), num(tau), num(sigma)));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qbaf_core::experiments::{reproduce_reference_table, run_agreement_study};

    #[test]
    fn parallel_matches_serial() {
        let cfg = StudyConfig::new(400, 3, true);
        let serial = run_agreement_study(&cfg).unwrap();
        for threads in [1, 2, 4] {
            assert_eq!(run_parallel(&cfg, threads).unwrap(), serial);
        }
    }

    #[test]
    fn zero_samples_is_a_config_error() {
        assert!(matches!(run_parallel(&StudyConfig::new(0, 3, true), 1), Err(StudyError::Experiment(ExperimentError::Config(_)))));
    }

    #[test]
    fn report_json_shape() {
        let report = run_parallel(&StudyConfig::new(50, 1, true), 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_json(&report)).unwrap();
        assert_eq!(v["agreement"].as_object().unwrap().len(), 3);
        assert_eq!(v["kappa"].as_object().unwrap().len(), 3);
        assert!(v["agreement"]["QE-EB"].is_number());
    }

    #[test]
    fn csv_headers() {
        let table = reproduction_csv(&reproduce_reference_table());
        assert_eq!(table.lines().count(), 49);
        assert!(table.starts_with("row,semantics,option,computed,paper,delta,decision_match\n1,QE,D1,0.5,0.5,0,true\n"));
        let curves = curves_csv(&[1.0], 3).unwrap();
        assert_eq!(curves.lines().count(), 1 + 3 * 2 * 3);
        assert!(curves.contains("QE,support,1,0.5,0.75\n"));
    }
}
