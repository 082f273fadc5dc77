//! Total preference orderings with indifference, strict and much-greater
//! links, and the small text syntax used to write them.
//!
//! An ordering is a sequence of tiers (most preferred first). Members of a
//! tier are indifferent to each other; consecutive tiers are separated by a
//! [`GapKind`]. In text form: `c = f >> b = e > a = d`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::model::ArgumentId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreferenceError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: &'static str },
    #[error("an ordering needs at least two tiers separated by '>' or '>>'")]
    SingleTier,
    #[error("argument {0} appears more than once")]
    DuplicateArgument(ArgumentId),
    #[error("argument {0} is not part of the ordering")]
    UnknownArgument(String),
    #[error("tier {0} is empty")]
    EmptyTier(usize),
    #[error("{tiers} tiers need {expected} gaps, got {got}")]
    GapCount { tiers: usize, expected: usize, got: usize },
}

/// Link between two consecutive tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GapKind {
    /// `≻`, written `>`.
    Greater,
    /// `≻≻`, written `>>`.
    MuchGreater,
}

impl GapKind {
    pub fn symbol(self) -> &'static str {
        match self {
            GapKind::Greater => ">",
            GapKind::MuchGreater => ">>",
        }
    }
}

/// How the first argument of a pair relates to the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Equal,
    Greater,
    MuchGreater,
    ReversedGreater,
    ReversedMuchGreater,
}

impl Relation {
    pub fn reversed(self) -> Self {
        match self {
            Relation::Equal => Relation::Equal,
            Relation::Greater => Relation::ReversedGreater,
            Relation::MuchGreater => Relation::ReversedMuchGreater,
            Relation::ReversedGreater => Relation::Greater,
            Relation::ReversedMuchGreater => Relation::MuchGreater,
        }
    }

    /// First argument strictly preferred (either strength).
    pub fn is_strictly_above(self) -> bool {
        matches!(self, Relation::Greater | Relation::MuchGreater)
    }

    pub fn is_strictly_below(self) -> bool {
        matches!(self, Relation::ReversedGreater | Relation::ReversedMuchGreater)
    }
}

impl From<GapKind> for Relation {
    fn from(gap: GapKind) -> Self {
        match gap {
            GapKind::Greater => Relation::Greater,
            GapKind::MuchGreater => Relation::MuchGreater,
        }
    }
}

/// A pair of adjacent arguments, `higher` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacentPair {
    pub higher: ArgumentId,
    pub lower: ArgumentId,
    /// `Equal`, `Greater` or `MuchGreater`.
    pub link: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceOrdering {
    tiers: Vec<BTreeSet<ArgumentId>>,
    gaps: Vec<GapKind>,
}

impl PreferenceOrdering {
    pub fn new(tiers: Vec<BTreeSet<ArgumentId>>, gaps: Vec<GapKind>) -> Result<Self, PreferenceError> {
        if let Some(i) = tiers.iter().position(BTreeSet::is_empty) {
            return Err(PreferenceError::EmptyTier(i));
        }
        if tiers.len() < 2 {
            return Err(PreferenceError::SingleTier);
        }
        if gaps.len() != tiers.len() - 1 {
            return Err(PreferenceError::GapCount { tiers: tiers.len(), expected: tiers.len() - 1, got: gaps.len() });
        }
        let mut seen = BTreeSet::new();
        for id in tiers.iter().flatten() {
            if !seen.insert(id) {
                return Err(PreferenceError::DuplicateArgument(id.clone()));
            }
        }
        Ok(Self { tiers, gaps })
    }

    /// Parses the `tier (('>' | '>>') tier)*` syntax, where a tier is
    /// `id ('=' id)*`. Whitespace between tokens is ignored.
    pub fn parse(text: &str) -> Result<Self, PreferenceError> {
        Parser { src: text.as_bytes(), pos: 0 }.ordering()
    }

    pub fn tiers(&self) -> &[BTreeSet<ArgumentId>] {
        &self.tiers
    }

    pub fn gaps(&self) -> &[GapKind] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.tiers.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Arguments in preference order; lexicographic within a tier.
    pub fn arguments(&self) -> impl Iterator<Item = &ArgumentId> {
        self.tiers.iter().flatten()
    }

    pub fn argument_set(&self) -> BTreeSet<ArgumentId> {
        self.arguments().cloned().collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.tier_of(id).is_some()
    }

    /// Index of the tier holding `id` (0 is most preferred).
    pub fn tier_of(&self, id: &str) -> Option<usize> {
        self.tiers.iter().position(|t| t.contains(id))
    }

    /// Relation of `a` to `b`. Across several tiers the relation is
    /// much-greater when any gap in between is much-greater.
    pub fn relation(&self, a: &str, b: &str) -> Result<Relation, PreferenceError> {
        let ta = self.require_tier(a)?;
        let tb = self.require_tier(b)?;
        Ok(self.relation_between_tiers(ta, tb))
    }

    pub(crate) fn relation_between_tiers(&self, ta: usize, tb: usize) -> Relation {
        use core::cmp::Ordering::*;
        let span = |lo: usize, hi: usize| {
            if self.gaps[lo..hi].contains(&GapKind::MuchGreater) {
                Relation::MuchGreater
            } else {
                Relation::Greater
            }
        };
        match ta.cmp(&tb) {
            Equal => Relation::Equal,
            Less => span(ta, tb),
            Greater => span(tb, ta).reversed(),
        }
    }

    fn require_tier(&self, id: &str) -> Result<usize, PreferenceError> {
        self.tier_of(id).ok_or_else(|| PreferenceError::UnknownArgument(id.to_string()))
    }

    /// All adjacent pairs: every pair inside a tier (as `Equal`) and every
    /// cross pair between consecutive tiers, labelled with their gap.
    pub fn adjacent_pairs(&self) -> Vec<AdjacentPair> {
        let mut out = Vec::new();
        for tier in &self.tiers {
            let members: Vec<&ArgumentId> = tier.iter().collect();
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    out.push(AdjacentPair { higher: (*a).clone(), lower: (*b).clone(), link: Relation::Equal });
                }
            }
        }
        for (k, gap) in self.gaps.iter().enumerate() {
            for a in &self.tiers[k] {
                for b in &self.tiers[k + 1] {
                    out.push(AdjacentPair { higher: a.clone(), lower: b.clone(), link: (*gap).into() });
                }
            }
        }
        out
    }

    /// `(most preferred tier, least preferred tier)`.
    pub fn extremes(&self) -> (&BTreeSet<ArgumentId>, &BTreeSet<ArgumentId>) {
        (&self.tiers[0], &self.tiers[self.tiers.len() - 1])
    }

    /// Tier sizes, most preferred first.
    pub fn tier_sizes(&self) -> Vec<usize> {
        self.tiers.iter().map(BTreeSet::len).collect()
    }

    /// Structure-preserving relabelling exists. Only `⪰` is compared, so gap
    /// kinds do not matter: two total orderings are isomorphic exactly when
    /// their tier-size sequences coincide.
    pub fn is_isomorphic_to(&self, other: &Self) -> bool {
        self.tiers.len() == other.tiers.len() && self.tiers.iter().zip(&other.tiers).all(|(a, b)| a.len() == b.len())
    }

    /// Adds `new_arg` to the tier of `anchor`.
    pub fn extend_with_equal(&self, new_arg: ArgumentId, anchor: &str) -> Result<Self, PreferenceError> {
        let tier = self.require_tier(anchor)?;
        if self.contains(new_arg.as_str()) {
            return Err(PreferenceError::DuplicateArgument(new_arg));
        }
        let mut next = self.clone();
        next.tiers[tier].insert(new_arg);
        Ok(next)
    }
}

/// Free-function form of [`PreferenceOrdering::is_isomorphic_to`].
pub fn are_isomorphic(a: &PreferenceOrdering, b: &PreferenceOrdering) -> bool {
    a.is_isomorphic_to(b)
}

impl fmt::Display for PreferenceOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, tier) in self.tiers.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", self.gaps[k - 1].symbol())?;
            }
            for (i, id) in tier.iter().enumerate() {
                if i > 0 {
                    f.write_str(" = ")?;
                }
                write!(f, "{id}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PreferenceOrdering {
    type Err = PreferenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<ArgumentId, PreferenceError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PreferenceError::Syntax { position: start, expected: "an argument id" });
        }
        // Only ASCII bytes were consumed, so this slice is valid UTF-8.
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(ArgumentId::new(text.to_string()).expect("validated by the scanner"))
    }

    fn tier(&mut self) -> Result<BTreeSet<ArgumentId>, PreferenceError> {
        let mut tier = BTreeSet::new();
        loop {
            let id = self.ident()?;
            if !tier.insert(id.clone()) {
                return Err(PreferenceError::DuplicateArgument(id));
            }
            if self.peek() == Some(b'=') {
                self.pos += 1;
            } else {
                return Ok(tier);
            }
        }
    }

    fn ordering(mut self) -> Result<PreferenceOrdering, PreferenceError> {
        let mut tiers = Vec::new();
        let mut gaps = Vec::new();
        let mut seen: BTreeSet<ArgumentId> = BTreeSet::new();
        loop {
            let tier = self.tier()?;
            for id in &tier {
                if !seen.insert(id.clone()) {
                    return Err(PreferenceError::DuplicateArgument(id.clone()));
                }
            }
            tiers.push(tier);
            match self.peek() {
                None => break,
                Some(b'>') => {
                    self.pos += 1;
                    if self.src.get(self.pos) == Some(&b'>') {
                        self.pos += 1;
                        gaps.push(GapKind::MuchGreater);
                    } else {
                        gaps.push(GapKind::Greater);
                    }
                }
                Some(_) => return Err(PreferenceError::Syntax { position: self.pos, expected: "'=', '>', '>>' or end of input" }),
            }
        }
        PreferenceOrdering::new(tiers, gaps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(ids: &[&str]) -> BTreeSet<ArgumentId> {
        ids.iter().map(|s| ArgumentId::new(*s).unwrap()).collect()
    }

    fn mixed_gaps() -> PreferenceOrdering {
        PreferenceOrdering::parse("c = f >> b = e > a = d").unwrap()
    }

    #[test]
    fn parses_mixed_gaps() {
        let o = mixed_gaps();
        assert_eq!(o.tiers(), &[set(&["c", "f"]), set(&["b", "e"]), set(&["a", "d"])]);
        assert_eq!(o.gaps(), &[GapKind::MuchGreater, GapKind::Greater]);
        assert_eq!(PreferenceOrdering::parse("c=f>>b=e>a=d").unwrap(), o);
        assert_eq!(PreferenceOrdering::parse("  c\t=f >>\nb =e>a= d ").unwrap(), o);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(PreferenceOrdering::parse("a = b"), Err(PreferenceError::SingleTier));
        assert_eq!(PreferenceOrdering::parse("a"), Err(PreferenceError::SingleTier));
        assert!(matches!(PreferenceOrdering::parse("a > a"), Err(PreferenceError::DuplicateArgument(_))));
        assert!(matches!(PreferenceOrdering::parse("a = a > b"), Err(PreferenceError::DuplicateArgument(_))));
        assert_eq!(PreferenceOrdering::parse("a >"), Err(PreferenceError::Syntax { position: 3, expected: "an argument id" }));
        assert!(matches!(PreferenceOrdering::parse("a >>> b"), Err(PreferenceError::Syntax { .. })));
        assert!(matches!(PreferenceOrdering::parse("a < b"), Err(PreferenceError::Syntax { .. })));
        assert!(matches!(PreferenceOrdering::parse("a > > b"), Err(PreferenceError::Syntax { .. })));
        assert!(matches!(PreferenceOrdering::parse(""), Err(PreferenceError::Syntax { .. })));
    }

    #[test]
    fn relations() {
        let o = mixed_gaps();
        assert_eq!(o.relation("c", "b").unwrap(), Relation::MuchGreater);
        assert_eq!(o.relation("c", "f").unwrap(), Relation::Equal);
        assert_eq!(o.relation("c", "d").unwrap(), Relation::MuchGreater);
        assert_eq!(o.relation("b", "a").unwrap(), Relation::Greater);
        assert_eq!(o.relation("a", "e").unwrap(), Relation::ReversedGreater);
        assert_eq!(o.relation("d", "f").unwrap(), Relation::ReversedMuchGreater);
        assert!(matches!(o.relation("c", "zz"), Err(PreferenceError::UnknownArgument(_))));
    }

    #[test]
    fn adjacent_pairs_singletons() {
        let o = PreferenceOrdering::parse("a > b >> c").unwrap();
        let pairs: Vec<_> =
            o.adjacent_pairs().into_iter().map(|p| (p.higher.as_str().to_string(), p.lower.as_str().to_string(), p.link)).collect();
        assert_eq!(
            pairs,
            vec![("a".to_string(), "b".to_string(), Relation::Greater), ("b".to_string(), "c".to_string(), Relation::MuchGreater),]
        );
    }

    #[test]
    fn adjacent_pairs_two_tiers() {
        let o = PreferenceOrdering::parse("c = f >> b = e").unwrap();
        let pairs: Vec<_> = o.adjacent_pairs().into_iter().map(|p| alloc::format!("{}{}{:?}", p.higher, p.lower, p.link)).collect();
        assert_eq!(pairs, vec!["cfEqual", "beEqual", "cbMuchGreater", "ceMuchGreater", "fbMuchGreater", "feMuchGreater"]);
    }

    #[test]
    fn adjacent_pairs_mixed_gap_counts() {
        let pairs = mixed_gaps().adjacent_pairs();
        let count = |r| pairs.iter().filter(|p| p.link == r).count();
        assert_eq!(count(Relation::Equal), 3);
        assert_eq!(count(Relation::MuchGreater), 4);
        assert_eq!(count(Relation::Greater), 4);
    }

    #[test]
    fn extremes() {
        let o = mixed_gaps();
        assert_eq!(o.extremes(), (&set(&["c", "f"]), &set(&["a", "d"])));
        let o = PreferenceOrdering::parse("a > b").unwrap();
        assert_eq!(o.extremes(), (&set(&["a"]), &set(&["b"])));
        let o = PreferenceOrdering::parse("a = b = c > d").unwrap();
        assert_eq!(o.extremes(), (&set(&["a", "b", "c"]), &set(&["d"])));
    }

    #[test]
    fn isomorphism_examples() {
        let p = |s| PreferenceOrdering::parse(s).unwrap();
        assert!(p("a > b").is_isomorphic_to(&p("x > y")));
        assert!(!p("a > b = c").is_isomorphic_to(&p("a = b > c")));
        assert!(p("a > b").is_isomorphic_to(&p("a >> b")));
    }

    #[test]
    fn extend_with_equal() {
        let o = mixed_gaps();
        let g = ArgumentId::new("g").unwrap();
        let ext = o.extend_with_equal(g.clone(), "b").unwrap();
        assert_eq!(ext.tiers()[1], set(&["b", "e", "g"]));
        assert_eq!(ext.gaps(), o.gaps());
        let ext = o.extend_with_equal(g, "c").unwrap();
        assert_eq!(ext.tiers()[0], set(&["c", "f", "g"]));
        assert!(matches!(o.extend_with_equal(ArgumentId::new("c").unwrap(), "b"), Err(PreferenceError::DuplicateArgument(_))));
        assert!(matches!(o.extend_with_equal(ArgumentId::new("h").unwrap(), "zz"), Err(PreferenceError::UnknownArgument(_))));
    }

    #[test]
    fn render_round_trip() {
        let o = mixed_gaps();
        assert_eq!(alloc::format!("{o}"), "c = f >> b = e > a = d");
        assert_eq!(PreferenceOrdering::parse(&alloc::format!("{o}")).unwrap(), o);
    }
}
