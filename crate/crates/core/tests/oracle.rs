//! Strengths on the feeding-pace framework, frozen from an independent
//! floating-point reimplementation of extraction and the three semantics.

use qbaf_core::experiments::{reference_rows, reproduce_reference_table};
use qbaf_core::fixtures::{feeding_pace, FAST, SLOW};
use qbaf_core::{evaluate, extract, extract_qbaf, ArgumentId, ExtractionConfig, PreferenceOrdering, ScoreAssignment, SemanticsKind};

const TOL: f64 = 1e-12;

// (slow, fast) for QE, EB, DF per reference row.
const ORACLE: [[(f64, f64); 3]; 8] = [
    [(0.5, 0.504950495049505), (0.5, 0.5150289541095971), (0.5, 0.625)],
    [(0.5646311793373054, 0.32752024638035127), (0.5543200676142799, 0.39073155833168527), (0.81, 0.235)],
    [(0.5599875026036243, 0.3189167020032543), (0.5432251638017179, 0.3899623872916651), (0.8222222222222222, 0.205)],
    [(0.5160229186303894, 0.4235044997353097), (0.5272716840478935, 0.4319942664238111), (0.6805555555555556, 0.375)],
    [(0.4980998095500728, 0.6279989953096007), (0.5169064083236117, 0.6008107184609398), (0.335, 0.865)],
    [(0.5003621635205251, 0.533766629225492), (0.5034830502799283, 0.5435341311264318), (0.465, 0.71)],
    [(0.3713327523402806, 0.5960718103057616), (0.4136097740944006, 0.5885102000738125), (0.248, 0.76)],
    [(0.2598001537279016, 0.6951219512195123), (0.3665218026227227, 0.6450158629666498), (0.1, 0.9)],
];

fn slow_fast(scores: &ScoreAssignment, kind: SemanticsKind) -> (f64, f64) {
    let s = evaluate(&feeding_pace(), scores, kind).unwrap();
    (s.get(SLOW).unwrap(), s.get(FAST).unwrap())
}

#[test]
fn reference_rows_match_oracle() {
    let report = reproduce_reference_table();
    for cell in &report.cells {
        let k = SemanticsKind::ALL.iter().position(|k| *k == cell.kind).unwrap();
        let (slow, fast) = ORACLE[cell.row - 1][k];
        let want = if cell.option == SLOW { slow } else { fast };
        assert!((cell.computed - want).abs() < TOL, "row {} {:?} {}: {} vs {}", cell.row, cell.kind, cell.option, cell.computed, want);
    }
}

#[test]
fn row_scores_are_consistent_with_direct_evaluation() {
    let fw = feeding_pace();
    for (row, oracle) in reference_rows().iter().zip(ORACLE).skip(1) {
        let ordering = PreferenceOrdering::parse(row.ordering.unwrap()).unwrap();
        let cfg = ExtractionConfig::range(1.0, row.ratio, row.top, row.bot).unwrap();
        let scores = extract_qbaf(&fw, &ordering, &cfg).unwrap();
        for (kind, (slow, fast)) in SemanticsKind::ALL.into_iter().zip(oracle) {
            let (s, f) = slow_fast(&scores, kind);
            assert!((s - slow).abs() < TOL && (f - fast).abs() < TOL);
        }
    }
}

#[test]
fn hand_scored_fixture() {
    let scores = ScoreAssignment::new(
        [("c", 0.75), ("f", 0.75), ("b", 0.5), ("e", 0.5), ("a", 0.25), ("d", 0.25), ("D1", 0.5), ("D2", 0.5)]
            .into_iter()
            .map(|(k, v)| (ArgumentId::new(k).unwrap(), v)),
    )
    .unwrap();
    let (slow, fast) = slow_fast(&scores, SemanticsKind::QuadraticEnergy);
    assert!((slow - 0.5362086258776328).abs() < TOL);
    assert!((fast - 0.44543429844098).abs() < TOL);
}

#[test]
fn extracted_fixture() {
    let ordering = PreferenceOrdering::parse("c = f >> b = e > a = d").unwrap();
    let cfg = ExtractionConfig::range(1.0, 3.0, 0.8, 0.2).unwrap();
    let scores = extract_qbaf(&feeding_pace(), &ordering, &cfg).unwrap();
    let (slow, fast) = slow_fast(&scores, SemanticsKind::QuadraticEnergy);
    assert!((slow - 0.5315365873689397).abs() < TOL);
    assert!((fast - 0.3959279483838207).abs() < TOL);
}

#[test]
fn worked_extractions_are_exact() {
    let cases: [(&str, f64, f64, f64, &[f64]); 5] = [
        ("c = f >> b = e > a = d", 3.0, 0.8, 0.2, &[0.8, 0.35, 0.2]),
        ("c = f > b = e > a = d", 3.0, 0.9, 0.1, &[0.9, 0.5, 0.1]),
        ("c = f >> b = e > a = d", 3.0, 0.9, 0.1, &[0.9, 0.3, 0.1]),
        ("a > b >> c > d", 4.0 / 3.0, 0.75, 0.25, &[0.75, 0.6, 0.4, 0.25]),
        ("a > b >> c > d", 96.0, 0.99, 0.01, &[0.99, 0.98, 0.02, 0.01]),
    ];
    for (text, ratio, top, bot, want) in cases {
        let ordering = PreferenceOrdering::parse(text).unwrap();
        let scores = extract(&ordering, &ExtractionConfig::range(1.0, ratio, top, bot).unwrap());
        for (tier, expected) in ordering.tiers().iter().zip(want) {
            for id in tier {
                assert_eq!(scores.get(id.as_str()), Some(*expected), "{text}: {id}");
            }
        }
    }
}
