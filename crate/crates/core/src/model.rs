//! Bipolar frameworks, base score assignments, and the structural conditions
//! a framework must meet before its decision arguments can be evaluated.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Errors raised while building frameworks or score assignments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid argument id {0:?}: expected a non-empty token of letters, digits or '_'")]
    InvalidId(String),
    #[error("argument {0} is declared more than once")]
    DuplicateArgument(ArgumentId),
    #[error("{context} refers to unknown argument {id}")]
    UnknownArgument { id: ArgumentId, context: &'static str },
    #[error("self-edge on argument {0}")]
    SelfEdge(ArgumentId),
    #[error("({0}, {1}) is both an attack and a support")]
    ConflictingEdge(ArgumentId, ArgumentId),
    #[error("a framework needs at least one decision argument")]
    EmptyDecisions,
    #[error("decision argument {0} is listed more than once")]
    DuplicateDecision(ArgumentId),
    #[error("argument {0} lies on a cycle")]
    Cycle(ArgumentId),
    #[error("no base score for argument {0}")]
    MissingScore(ArgumentId),
    #[error("base score given for {0}, which is not in the framework")]
    UnexpectedScore(ArgumentId),
    #[error("base score {value} of {id} is outside [0, 1]")]
    ScoreOutOfRange { id: ArgumentId, value: f64 },
    #[error("decision argument {id} has base score {value}; decisions are fixed at 0.5")]
    DecisionScore { id: ArgumentId, value: f64 },
}

/// Opaque, case-sensitive argument identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(Self(id))
        } else {
            Err(ModelError::InvalidId(id))
        }
    }

    /// True when `s` is a legal id token.
    pub fn is_valid(s: &str) -> bool {
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for ArgumentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl FromStr for ArgumentId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl TryFrom<&str> for ArgumentId {
    type Error = ModelError;

    fn try_from(s: &str) -> Result<Self, Self::Error> {
        Self::new(s)
    }
}

/// A directed edge `(source, target)`.
pub type Edge = (ArgumentId, ArgumentId);

/// Arguments with attack and support relations plus the decision arguments.
///
/// Construction enforces that every edge endpoint is a known argument, that
/// no pair is both an attack and a support, that there are no self-edges,
/// and that the decision list is non-empty and duplicate-free. The decision
/// conditions (no outgoing decision edges, reachability, acyclicity) are
/// checked separately by [`BipolarFramework::validate_for_decisions`] so
/// that they can be reported as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipolarFramework {
    arguments: BTreeSet<ArgumentId>,
    attacks: BTreeSet<Edge>,
    supports: BTreeSet<Edge>,
    decisions: Vec<ArgumentId>,
}

impl BipolarFramework {
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = Edge>,
        supports: impl IntoIterator<Item = Edge>,
        decisions: impl IntoIterator<Item = ArgumentId>,
    ) -> Result<Self, ModelError> {
        let mut args = BTreeSet::new();
        for a in arguments {
            if args.contains(&a) {
                return Err(ModelError::DuplicateArgument(a));
            }
            args.insert(a);
        }
        let check_edges = |edges: &BTreeSet<Edge>, context: &'static str| {
            for (s, t) in edges {
                for id in [s, t] {
                    if !args.contains(id) {
                        return Err(ModelError::UnknownArgument { id: id.clone(), context });
                    }
                }
                if s == t {
                    return Err(ModelError::SelfEdge(s.clone()));
                }
            }
            Ok(())
        };
        let attacks: BTreeSet<Edge> = attacks.into_iter().collect();
        let supports: BTreeSet<Edge> = supports.into_iter().collect();
        check_edges(&attacks, "attack")?;
        check_edges(&supports, "support")?;
        if let Some((s, t)) = attacks.intersection(&supports).next() {
            return Err(ModelError::ConflictingEdge(s.clone(), t.clone()));
        }
        let mut decisions_out = Vec::new();
        for d in decisions {
            if !args.contains(&d) {
                return Err(ModelError::UnknownArgument { id: d, context: "decision list" });
            }
            if decisions_out.contains(&d) {
                return Err(ModelError::DuplicateDecision(d));
            }
            decisions_out.push(d);
        }
        if decisions_out.is_empty() {
            return Err(ModelError::EmptyDecisions);
        }
        Ok(Self { arguments: args, attacks, supports, decisions: decisions_out })
    }

    pub fn builder() -> FrameworkBuilder {
        FrameworkBuilder::default()
    }

    pub fn arguments(&self) -> &BTreeSet<ArgumentId> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<Edge> {
        &self.attacks
    }

    pub fn supports(&self) -> &BTreeSet<Edge> {
        &self.supports
    }

    pub fn decisions(&self) -> &[ArgumentId] {
        &self.decisions
    }

    pub fn contains(&self, id: &str) -> bool {
        self.arguments.contains(id)
    }

    pub fn is_decision(&self, id: &str) -> bool {
        self.decisions.iter().any(|d| d.as_str() == id)
    }

    /// Arguments that are not decisions, in lexicographic order.
    pub fn non_decision_arguments(&self) -> impl Iterator<Item = &ArgumentId> {
        self.arguments.iter().filter(move |a| !self.is_decision(a.as_str()))
    }

    /// All edges regardless of polarity.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.attacks.iter().chain(self.supports.iter())
    }

    pub fn attackers_of<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a ArgumentId> {
        self.attacks.iter().filter(move |(_, t)| t.as_str() == target).map(|(s, _)| s)
    }

    pub fn supporters_of<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a ArgumentId> {
        self.supports.iter().filter(move |(_, t)| t.as_str() == target).map(|(s, _)| s)
    }

    fn successors(&self) -> BTreeMap<&ArgumentId, Vec<&ArgumentId>> {
        let mut succ: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = self.arguments.iter().map(|a| (a, Vec::new())).collect();
        for (s, t) in self.edges() {
            succ.get_mut(s).expect("edge endpoints are arguments").push(t);
        }
        succ
    }

    /// Checks the three conditions under which the framework can drive a
    /// decision: no edge leaves a decision argument, every other argument has
    /// a path to some decision, and there are no cycles.
    pub fn validate_for_decisions(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for (s, t) in self.edges() {
            if self.is_decision(s.as_str()) {
                violations.push(Violation::DecisionHasOutgoingEdge { source: s.clone(), target: t.clone() });
            }
        }

        // Reverse search from the decisions.
        let mut preds: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = BTreeMap::new();
        for (s, t) in self.edges() {
            preds.entry(t).or_default().push(s);
        }
        let mut reaches: BTreeSet<&ArgumentId> = self.decisions.iter().collect();
        let mut queue: VecDeque<&ArgumentId> = self.decisions.iter().collect();
        while let Some(n) = queue.pop_front() {
            for &p in preds.get(n).map(Vec::as_slice).unwrap_or(&[]) {
                if reaches.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        for a in self.non_decision_arguments() {
            if !reaches.contains(a) {
                violations.push(Violation::NoPathToDecision { argument: a.clone() });
            }
        }

        for component in self.cyclic_components() {
            violations.push(Violation::Cycle { arguments: component });
        }

        ValidationReport { violations }
    }

    /// Groups of mutually reachable arguments (each group lies on at least
    /// one cycle), in lexicographic order of their smallest member.
    fn cyclic_components(&self) -> Vec<Vec<ArgumentId>> {
        let succ = self.successors();
        let reach_from = |start: &ArgumentId| -> BTreeSet<&ArgumentId> {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&ArgumentId> = succ[start].clone();
            while let Some(n) = stack.pop() {
                if seen.insert(n) {
                    stack.extend(succ[n].iter().copied());
                }
            }
            seen
        };
        let reach: BTreeMap<&ArgumentId, BTreeSet<&ArgumentId>> = self.arguments.iter().map(|a| (a, reach_from(a))).collect();

        let mut assigned = BTreeSet::new();
        let mut components = Vec::new();
        for a in &self.arguments {
            if assigned.contains(a) || !reach[a].contains(a) {
                continue;
            }
            let component: Vec<ArgumentId> = reach[a].iter().filter(|b| reach[*b].contains(a)).map(|b| (*b).clone()).collect();
            assigned.extend(component.iter().cloned());
            components.push(component);
        }
        components
    }

    /// Evaluation order in which every edge's source precedes its target.
    ///
    /// Arguments are emitted in layers: each layer holds every argument whose
    /// predecessors have all been emitted, sorted lexicographically.
    pub fn topological_order(&self) -> Result<Vec<ArgumentId>, ModelError> {
        let mut indegree: BTreeMap<&ArgumentId, usize> = self.arguments.iter().map(|a| (a, 0)).collect();
        for (_, t) in self.edges() {
            *indegree.get_mut(t).expect("edge endpoints are arguments") += 1;
        }
        let succ = self.successors();
        let mut layer: Vec<&ArgumentId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(a, _)| *a).collect();
        let mut order = Vec::with_capacity(self.arguments.len());
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for &n in &layer {
                for &t in &succ[n] {
                    let d = indegree.get_mut(t).expect("edge endpoints are arguments");
                    *d -= 1;
                    if *d == 0 {
                        next.insert(t);
                    }
                }
            }
            order.extend(layer.into_iter().cloned());
            layer = next.into_iter().collect();
        }
        if order.len() < self.arguments.len() {
            let culprit =
                self.cyclic_components().into_iter().next().and_then(|c| c.into_iter().next()).expect("unordered arguments imply a cycle");
            return Err(ModelError::Cycle(culprit));
        }
        Ok(order)
    }
}

/// Convenience builder working on string ids.
#[derive(Debug, Default, Clone)]
pub struct FrameworkBuilder {
    arguments: Vec<String>,
    attacks: Vec<(String, String)>,
    supports: Vec<(String, String)>,
    decisions: Vec<String>,
}

impl FrameworkBuilder {
    pub fn argument(mut self, id: &str) -> Self {
        self.arguments.push(id.into());
        self
    }

    pub fn arguments<'a>(mut self, ids: impl IntoIterator<Item = &'a str>) -> Self {
        self.arguments.extend(ids.into_iter().map(String::from));
        self
    }

    pub fn attack(mut self, source: &str, target: &str) -> Self {
        self.attacks.push((source.into(), target.into()));
        self
    }

    pub fn support(mut self, source: &str, target: &str) -> Self {
        self.supports.push((source.into(), target.into()));
        self
    }

    pub fn decision(mut self, id: &str) -> Self {
        self.decisions.push(id.into());
        self
    }

    pub fn build(self) -> Result<BipolarFramework, ModelError> {
        let ids = |v: Vec<String>| v.into_iter().map(ArgumentId::new).collect::<Result<Vec<_>, _>>();
        let edges = |v: Vec<(String, String)>| {
            v.into_iter().map(|(s, t)| Ok((ArgumentId::new(s)?, ArgumentId::new(t)?))).collect::<Result<Vec<_>, ModelError>>()
        };
        BipolarFramework::new(ids(self.arguments)?, edges(self.attacks)?, edges(self.supports)?, ids(self.decisions)?)
    }
}

/// One broken decision condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition (i): an edge leaves a decision argument.
    DecisionHasOutgoingEdge { source: ArgumentId, target: ArgumentId },
    /// Condition (ii): no path from this argument to any decision.
    NoPathToDecision { argument: ArgumentId },
    /// Condition (iii): these arguments are mutually reachable.
    Cycle { arguments: Vec<ArgumentId> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DecisionHasOutgoingEdge { source, target } => {
                write!(f, "condition (i): edge ({source}, {target}) leaves decision {source}")
            }
            Violation::NoPathToDecision { argument } => {
                write!(f, "condition (ii): {argument} has no path to a decision argument")
            }
            Violation::Cycle { arguments } => {
                f.write_str("condition (iii): cycle through ")?;
                for (i, a) in arguments.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Base scores `τ` keyed by argument, each within `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreAssignment {
    scores: BTreeMap<ArgumentId, f64>,
}

impl ScoreAssignment {
    pub fn new(scores: impl IntoIterator<Item = (ArgumentId, f64)>) -> Result<Self, ModelError> {
        let scores: BTreeMap<_, _> = scores.into_iter().collect();
        for (id, &value) in &scores {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::ScoreOutOfRange { id: id.clone(), value });
            }
        }
        Ok(Self { scores })
    }

    /// Every argument of `framework` at the same score.
    pub fn uniform(framework: &BipolarFramework, value: f64) -> Result<Self, ModelError> {
        Self::new(framework.arguments().iter().map(|a| (a.clone(), value)))
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, f64)> {
        self.scores.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub(crate) fn insert(&mut self, id: ArgumentId, value: f64) {
        debug_assert!((0.0..=1.0).contains(&value));
        self.scores.insert(id, value);
    }

    /// Checks that the domain is exactly the framework's argument set and
    /// that every decision argument sits at 0.5.
    pub fn check_covers(&self, framework: &BipolarFramework) -> Result<(), ModelError> {
        if let Some(missing) = framework.arguments().iter().find(|a| !self.scores.contains_key(*a)) {
            return Err(ModelError::MissingScore(missing.clone()));
        }
        if let Some(extra) = self.scores.keys().find(|a| !framework.arguments().contains(*a)) {
            return Err(ModelError::UnexpectedScore(extra.clone()));
        }
        for d in framework.decisions() {
            let value = self.scores[d];
            if value != 0.5 {
                return Err(ModelError::DecisionScore { id: d.clone(), value });
            }
        }
        Ok(())
    }
}
