//! JSON carrier for frameworks, preferences, extraction settings and base
//! scores.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use qbaf_core::bsef::{BaseScoreFunction, ExtractionConfig, ExtractionError};
use qbaf_core::model::Violation;
use qbaf_core::{ArgumentId, BipolarFramework, ModelError, PreferenceError, PreferenceOrdering, ScoreAssignment};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Parse(serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid framework: {0}")]
    Model(#[from] ModelError),
    #[error("framework fails the decision conditions: {0}")]
    Validation(Violation),
    #[error("invalid preferences: {0}")]
    Preference(#[from] PreferenceError),
    #[error("invalid extraction settings: {0}")]
    Extraction(#[from] ExtractionError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => DocumentError::Schema(e.to_string()),
            _ => DocumentError::Parse(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArgumentEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionName {
    Nu1,
    Nu2,
}

/// Extraction settings. `top`/`bot` belong to `nu1`, `alpha`/`beta` to
/// `nu2`; the unused pair is written as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractionDocument {
    pub delta: f64,
    #[serde(rename = "Delta")]
    pub much_delta: f64,
    pub function: FunctionName,
    #[serde(default)]
    pub top: Option<f64>,
    #[serde(default)]
    pub bot: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

impl ExtractionDocument {
    pub fn to_config(&self) -> Result<ExtractionConfig, DocumentError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| DocumentError::Schema(format!("extraction.{name} is required for {:?}", self.function)))
        };
        let forbid = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(DocumentError::Schema(format!("extraction.{name} does not apply to {:?}", self.function))),
            None => Ok(()),
        };
        Ok(match self.function {
            FunctionName::Nu1 => {
                forbid(self.alpha, "alpha")?;
                forbid(self.beta, "beta")?;
                ExtractionConfig::range(self.delta, self.much_delta, need(self.top, "top")?, need(self.bot, "bot")?)?
            }
            FunctionName::Nu2 => {
                forbid(self.top, "top")?;
                forbid(self.bot, "bot")?;
                ExtractionConfig::squeeze(self.delta, self.much_delta, need(self.alpha, "alpha")?, need(self.beta, "beta")?)?
            }
        })
    }

    pub fn from_config(config: &ExtractionConfig) -> Self {
        let (delta, much_delta) = (config.weights.delta(), config.weights.much_delta());
        match config.function {
            BaseScoreFunction::Range(p) => {
                Self { delta, much_delta, function: FunctionName::Nu1, top: Some(p.top()), bot: Some(p.bot()), alpha: None, beta: None }
            }
            BaseScoreFunction::Squeeze(p) => {
                Self { delta, much_delta, function: FunctionName::Nu2, top: None, bot: None, alpha: Some(p.alpha()), beta: Some(p.beta()) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkDocument {
    pub arguments: Vec<ArgumentEntry>,
    #[serde(default)]
    pub attacks: Vec<(String, String)>,
    #[serde(default)]
    pub supports: Vec<(String, String)>,
    pub decisions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extraction: Option<ExtractionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_scores: Option<BTreeMap<String, f64>>,
}

/// A fully validated document.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub framework: BipolarFramework,
    pub labels: BTreeMap<ArgumentId, String>,
    pub ordering: Option<PreferenceOrdering>,
    pub extraction: Option<ExtractionConfig>,
    pub base_scores: Option<ScoreAssignment>,
}

impl Loaded {
    /// Base scores from the document, or extracted from its preferences.
    pub fn scores(&self) -> Result<ScoreAssignment, DocumentError> {
        if let Some(s) = &self.base_scores {
            return Ok(s.clone());
        }
        match (&self.ordering, &self.extraction) {
            (Some(o), Some(c)) => Ok(qbaf_core::extract_qbaf(&self.framework, o, c)?),
            _ => Err(DocumentError::Schema("document needs base_scores, or preferences together with extraction".into())),
        }
    }
}

fn parse_id(s: &str) -> Result<ArgumentId, DocumentError> {
    Ok(ArgumentId::new(s)?)
}

impl FrameworkDocument {
    pub fn validate(&self) -> Result<Loaded, DocumentError> {
        let ids = self.arguments.iter().map(|a| parse_id(&a.id)).collect::<Result<Vec<_>, _>>()?;
        let edges = |list: &[(String, String)]| {
            list.iter().map(|(s, t)| Ok((parse_id(s)?, parse_id(t)?))).collect::<Result<Vec<_>, DocumentError>>()
        };
        let decisions = self.decisions.iter().map(|d| parse_id(d)).collect::<Result<Vec<_>, _>>()?;
        let framework = BipolarFramework::new(ids.clone(), edges(&self.attacks)?, edges(&self.supports)?, decisions)?;
        if let Some(v) = framework.validate_for_decisions().violations.into_iter().next() {
            return Err(DocumentError::Validation(v));
        }
        let labels = ids.into_iter().zip(&self.arguments).filter_map(|(id, a)| a.label.clone().map(|l| (id, l))).collect();
        let ordering = self.preferences.as_deref().map(PreferenceOrdering::parse).transpose()?;
        if let Some(o) = &ordering {
            qbaf_core::bsef::check_coverage(&framework, o)?;
        }
        let extraction = self.extraction.map(|e| e.to_config()).transpose()?;
        let base_scores = match &self.base_scores {
            Some(map) => {
                let scores =
                    ScoreAssignment::new(map.iter().map(|(k, v)| Ok((parse_id(k)?, *v))).collect::<Result<Vec<_>, DocumentError>>()?)?;
                scores.check_covers(&framework)?;
                Some(scores)
            }
            None => None,
        };
        Ok(Loaded { framework, labels, ordering, extraction, base_scores })
    }

    /// Document for `framework` with optional extras.
    pub fn from_parts(
        framework: &BipolarFramework,
        labels: &BTreeMap<ArgumentId, String>,
        ordering: Option<&PreferenceOrdering>,
        extraction: Option<&ExtractionConfig>,
        scores: Option<&ScoreAssignment>,
    ) -> Self {
        let pair = |(s, t): &(ArgumentId, ArgumentId)| (s.to_string(), t.to_string());
        Self {
            arguments: framework.arguments().iter().map(|a| ArgumentEntry { id: a.to_string(), label: labels.get(a).cloned() }).collect(),
            attacks: framework.attacks().iter().map(pair).collect(),
            supports: framework.supports().iter().map(pair).collect(),
            decisions: framework.decisions().iter().map(ToString::to_string).collect(),
            preferences: ordering.map(ToString::to_string),
            extraction: extraction.map(ExtractionDocument::from_config),
            base_scores: scores.map(|s| s.iter().map(|(k, v)| (k.to_string(), v)).collect()),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Loaded, DocumentError> {
    let doc: FrameworkDocument = serde_json::from_str(text)?;
    doc.validate()
}

pub fn load_framework(path: &Path) -> Result<Loaded, DocumentError> {
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
    parse_document(&text)
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation parses")
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                if let Some(r) = serde_json::Number::from_f64(round12(f)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Pretty JSON with lexicographic keys, floats at 12 significant digits and
/// a trailing newline.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("documents serialize");
    round_numbers(&mut v);
    let mut out = serde_json::to_string_pretty(&v).expect("values serialize");
    out.push('\n');
    out
}

/// Writes `framework` with `scores` as its `base_scores`.
pub fn save_qbaf(
    out: &mut impl Write,
    framework: &BipolarFramework,
    labels: &BTreeMap<ArgumentId, String>,
    scores: &ScoreAssignment,
) -> Result<(), DocumentError> {
    scores.check_covers(framework)?;
    let doc = FrameworkDocument::from_parts(framework, labels, None, None, Some(scores));
    out.write_all(to_stable_json(&doc).as_bytes()).map_err(|source| DocumentError::Io { path: "<output>".into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qbaf_core::fixtures::feeding_pace;

    const FIXTURE: &str = r#"{
        "arguments": [{"id": "a", "label": "first"}, {"id": "b"}, {"id": "c"}, {"id": "d"},
                      {"id": "e"}, {"id": "f"}, {"id": "D1"}, {"id": "D2"}],
        "attacks": [["a", "D1"], ["e", "b"], ["f", "D2"]],
        "supports": [["c", "b"], ["b", "D1"], ["e", "d"], ["d", "D2"]],
        "decisions": ["D1", "D2"],
        "preferences": "c=f>>b=e>a=d",
        "extraction": {"delta": 1, "Delta": 3, "function": "nu1", "top": 0.8, "bot": 0.2}
    }"#;

    #[test]
    fn fixture_loads() {
        let loaded = parse_document(FIXTURE).unwrap();
        assert_eq!(loaded.framework, feeding_pace());
        assert_eq!(loaded.ordering, Some(PreferenceOrdering::parse("c = f >> b = e > a = d").unwrap()));
        assert_eq!(loaded.labels.len(), 1);
        let scores = loaded.scores().unwrap();
        assert_eq!(scores.get("c"), Some(0.8));
    }

    #[test]
    fn rejections() {
        let self_edge = FIXTURE.replace(r#"["a", "D1"], "#, r#"["a", "a"], "#);
        assert!(matches!(parse_document(&self_edge), Err(DocumentError::Model(ModelError::SelfEdge(_)))));
        let unknown = FIXTURE.replace(r#""decisions""#, r#""weights": 1, "decisions""#);
        let err = parse_document(&unknown).unwrap_err();
        assert!(matches!(err, DocumentError::Schema(_)));
        assert!(err.to_string().contains("line"), "{err}");
        assert!(matches!(parse_document("{"), Err(DocumentError::Parse(_))));
        let missing_f = FIXTURE.replace("c=f>>", "c>>");
        assert!(matches!(parse_document(&missing_f), Err(DocumentError::Extraction(ExtractionError::MissingFromOrdering(_)))));
        let wrong_field = FIXTURE.replace(r#""top": 0.8, "bot": 0.2"#, r#""alpha": 0.8, "beta": 0.2"#);
        assert!(matches!(parse_document(&wrong_field), Err(DocumentError::Schema(_))));
    }

    #[test]
    fn save_round_trip() {
        let loaded = parse_document(FIXTURE).unwrap();
        let scores = loaded.scores().unwrap();
        let mut buf = Vec::new();
        save_qbaf(&mut buf, &loaded.framework, &loaded.labels, &scores).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"c\": 0.8"));
        let back = parse_document(&text).unwrap();
        assert_eq!(back.framework, loaded.framework);
        assert_eq!(back.labels, loaded.labels);
        for (id, v) in scores.iter() {
            assert!((back.base_scores.as_ref().unwrap().get(id.as_str()).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn save_requires_coverage() {
        let fw = feeding_pace();
        let partial = ScoreAssignment::new([(ArgumentId::new("a").unwrap(), 0.5)]).unwrap();
        assert!(matches!(
            save_qbaf(&mut Vec::new(), &fw, &BTreeMap::new(), &partial),
            Err(DocumentError::Model(ModelError::MissingScore(_)))
        ));
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(0.35000000000000003), 0.35);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(0.0), 0.0);
    }
}
