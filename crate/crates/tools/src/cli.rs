//! The `qbaf` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 IO or internal
//! failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qbaf_core::bsef::{check_axiom1, check_axiom2, check_axiom3, check_properties, CheckOutcome, CheckReport};
use qbaf_core::experiments::{reproduce_reference_table, StudyConfig};
use qbaf_core::{decide, evaluate, extract, PreferenceOrdering, SemanticsKind};

use crate::document::{load_framework, round12, save_qbaf, DocumentError};
use crate::study::{curves_csv, report_json, reproduction_csv, run_parallel, StudyError};

#[derive(Debug, Parser)]
#[command(name = "qbaf", version, about = "Preference-driven base scores and gradual semantics for decision frameworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Qe,
    Eb,
    Dfquad,
}

impl From<SemanticsArg> for SemanticsKind {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Qe => SemanticsKind::QuadraticEnergy,
            SemanticsArg::Eb => SemanticsKind::EulerBased,
            SemanticsArg::Dfquad => SemanticsKind::DfQuad,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn a framework with preferences into a document with base scores
    Extract {
        input: PathBuf,
        /// Output file, or `-` for standard output
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Evaluate a framework and report the winning decision
    Decide {
        input: PathBuf,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
    },
    /// Check the extraction axioms and properties for a document
    Check {
        input: PathBuf,
        /// Second ordering over the same arguments, for the structure axiom
        #[arg(long)]
        against: Option<String>,
    },
    /// Run the seeded semantics-agreement study
    Experiment {
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Sample limits with bot = 1 - top
        #[arg(long)]
        centralisation: bool,
        /// Worker threads; 0 uses all cores
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Influence curves of one attacker or supporter as CSV
    Curves {
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Influencer strength; repeat for several curves
        #[arg(long = "influencer", default_values_t = [1.0])]
        influencers: Vec<f64>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Recompute the reference table as CSV
    Reproduce {
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Io { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<StudyError> for Failure {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::Experiment(_) => Failure::Invalid(e.to_string()),
            StudyError::ThreadPool(_) => Failure::Internal(e.to_string()),
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

fn emit(out: &str, text: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    let result = if out == "-" { stdout.write_all(text) } else { fs::write(out, text) };
    result.map_err(|e| Failure::Internal(format!("{out}: {e}")))
}

fn outcome_name(report: &CheckReport) -> &'static str {
    match report.outcome {
        CheckOutcome::Pass => "pass",
        CheckOutcome::Fail => "fail",
        CheckOutcome::NotApplicable => "not applicable",
    }
}

fn write_check(text: &mut String, name: &str, report: &CheckReport) {
    text.push_str(&format!("{name}: {}\n", outcome_name(report)));
    for v in &report.violations {
        text.push_str(&format!("  {v:?}\n"));
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Extract { input, out } => {
            let doc = load_framework(&input)?;
            if doc.ordering.is_none() || doc.extraction.is_none() {
                return Err(invalid("extract needs both preferences and extraction in the document"));
            }
            let scores = doc.scores()?;
            let mut buf = Vec::new();
            save_qbaf(&mut buf, &doc.framework, &doc.labels, &scores)?;
            emit(&out, &buf, stdout)
        }
        Command::Decide { input, semantics } => {
            let doc = load_framework(&input)?;
            let kind = SemanticsKind::from(semantics);
            let strengths = evaluate(&doc.framework, &doc.scores()?, kind).map_err(invalid)?;
            let outcome = decide(&strengths, doc.framework.decisions()).map_err(invalid)?;
            let mut text = format!("semantics: {kind}\n");
            for (d, s) in &outcome.strengths {
                text.push_str(&format!("{d} {}\n", round12(*s)));
            }
            match outcome.winner() {
                Some(w) => text.push_str(&format!("winner: {w}\n")),
                None => {
                    let names: Vec<String> = outcome.winners.iter().map(ToString::to_string).collect();
                    text.push_str(&format!("winner: tie ({})\n", names.join(", ")));
                }
            }
            emit("-", text.as_bytes(), stdout)
        }
        Command::Check { input, against } => {
            let doc = load_framework(&input)?;
            let ordering = doc.ordering.as_ref().ok_or_else(|| invalid("check needs preferences in the document"))?;
            let config = doc.extraction;
            let scores = match (&doc.base_scores, &config) {
                (Some(s), _) => s.clone(),
                (None, Some(c)) => extract(ordering, c),
                (None, None) => return Err(invalid("check needs base_scores or extraction in the document")),
            };
            let mut text = String::new();
            write_check(&mut text, "axiom1", &check_axiom1(ordering, &scores));
            write_check(&mut text, "axiom2", &check_axiom2(ordering, &scores));
            match (against, &config) {
                (Some(other), Some(c)) => {
                    let other = PreferenceOrdering::parse(&other).map_err(invalid)?;
                    write_check(&mut text, "axiom3", &check_axiom3(c, ordering, &other).map_err(invalid)?);
                }
                (Some(_), None) => return Err(invalid("--against needs extraction settings in the document")),
                (None, _) => text.push_str("axiom3: skipped\n"),
            }
            if let Some(c) = &config {
                let p = check_properties(ordering, &scores, c);
                text.push_str(&format!(
                    "normalisation: {}\ncentralisation: {}\nregularity: {}\nstability: {}\nlimits: {} {}\n",
                    p.normalisation,
                    p.centralisation,
                    p.regularity,
                    p.stability,
                    round12(p.achieved_top),
                    round12(p.achieved_bot)
                ));
            }
            emit("-", text.as_bytes(), stdout)
        }
        Command::Experiment { samples, seed, centralisation, threads, out } => {
            let config = StudyConfig::new(samples, seed, centralisation);
            let report = run_parallel(&config, threads)?;
            emit(&out, report_json(&report).as_bytes(), stdout)
        }
        Command::Curves { grid, influencers, out } => {
            let csv = curves_csv(&influencers, grid).map_err(invalid)?;
            emit(&out, csv.as_bytes(), stdout)
        }
        Command::Reproduce { out } => emit(&out, reproduction_csv(&reproduce_reference_table()).as_bytes(), stdout),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}
