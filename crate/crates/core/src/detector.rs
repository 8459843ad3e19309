//! Temporal-intent detection and the signal and ordinal dictionaries.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    AnnotatedQuestion, OrdinalKind, OrdinalSpan, Pos, SignalSpan, TemporalRelation,
};
use crate::text::POSSESSIVE_PRONOUNS;
use crate::timex::{surface_key, EventDictionary, TimexType};

pub const DEFAULT_SIGNALS: &str = include_str!("../data/signals.tsv");
pub const DEFAULT_ORDINALS: &str = include_str!("../data/ordinals.tsv");

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Phrase table keyed by lower-cased, space-joined tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhraseTable<V> {
    entries: BTreeMap<String, V>,
    longest: usize,
}

impl<V: Clone> PhraseTable<V> {
    fn parse_with(
        text: &str,
        parse_value: impl Fn(&str) -> Option<V>,
    ) -> Result<Self, DictionaryError> {
        let mut table = PhraseTable {
            entries: BTreeMap::new(),
            longest: 0,
        };
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |message: String| DictionaryError::Malformed {
                line: line_no,
                message,
            };
            let (phrase, value) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected phrase<TAB>value".into()))?;
            let key = surface_key(phrase);
            if key.is_empty() {
                return Err(malformed("empty phrase".into()));
            }
            let value = parse_value(value.trim())
                .ok_or_else(|| malformed(format!("unknown value {:?}", value.trim())))?;
            if table.entries.contains_key(&key) {
                return Err(malformed(format!("duplicate phrase {key:?}")));
            }
            table.longest = table.longest.max(key.split(' ').count());
            table.entries.insert(key, value);
        }
        Ok(table)
    }

    pub fn lookup(&self, phrase: &str) -> Option<V> {
        self.entries.get(&surface_key(phrase)).cloned()
    }

    /// Longest phrase starting at word `i`, as (length, value).
    pub fn match_at(&self, words: &[String], i: usize) -> Option<(usize, V)> {
        let max = self.longest.min(words.len().saturating_sub(i));
        (1..=max).rev().find_map(|n| {
            self.entries
                .get(&words[i..i + n].join(" "))
                .map(|v| (n, v.clone()))
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &V)> {
        self.entries.iter()
    }
}

pub type SignalDictionary = PhraseTable<TemporalRelation>;
pub type OrdinalDictionary = PhraseTable<OrdinalKind>;

fn read(path: &Path) -> Result<String, DictionaryError> {
    std::fs::read_to_string(path).map_err(|source| DictionaryError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl PhraseTable<TemporalRelation> {
    pub fn parse(text: &str) -> Result<Self, DictionaryError> {
        Self::parse_with(text, |v| v.parse().ok())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DictionaryError> {
        Self::parse(&read(path.as_ref())?)
    }
}

fn parse_ordinal(value: &str) -> Option<OrdinalKind> {
    match value {
        "FIRST" => Some(OrdinalKind::First),
        "LAST" => Some(OrdinalKind::Last),
        _ => value
            .strip_prefix("NTH:")?
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .map(OrdinalKind::Nth),
    }
}

impl PhraseTable<OrdinalKind> {
    pub fn parse(text: &str) -> Result<Self, DictionaryError> {
        Self::parse_with(text, parse_ordinal)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DictionaryError> {
        Self::parse(&read(path.as_ref())?)
    }
}

/// The bundled signal dictionary.
pub fn load_signal_dictionary() -> SignalDictionary {
    SignalDictionary::parse(DEFAULT_SIGNALS).expect("bundled signal dictionary is valid")
}

pub fn load_ordinal_dictionary() -> OrdinalDictionary {
    OrdinalDictionary::parse(DEFAULT_ORDINALS).expect("bundled ordinal dictionary is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Cue {
    Timex,
    Event,
    Signal,
    Ordinal,
    TemporalAnswerType,
}

impl fmt::Display for Cue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cue::Timex => "TIMEX",
            Cue::Event => "EVENT",
            Cue::Signal => "SIGNAL",
            Cue::Ordinal => "ORDINAL",
            Cue::TemporalAnswerType => "TEMPORAL_ANSWER_TYPE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub is_temporal: bool,
    /// Fired cues in the order TIMEX, EVENT, SIGNAL, ORDINAL,
    /// TEMPORAL_ANSWER_TYPE.
    pub cues: Vec<Cue>,
    pub signal: Option<String>,
    pub ordinal: Option<OrdinalKind>,
}

/// Question openings that ask for a time.
pub const TEMPORAL_ANSWER_PATTERNS: &[&str] = &[
    "when",
    "since when",
    "until when",
    "what date",
    "which date",
    "on what date",
    "on which date",
    "what year",
    "which year",
    "in what year",
    "in which year",
    "what month",
    "in what month",
    "what day",
    "what time",
    "at what time",
    "what century",
    "which century",
    "in what century",
    "in which century",
    "what decade",
    "which decade",
    "how long ago",
];

/// Patterns whose answers are reported at year granularity.
pub const YEAR_ANSWER_PATTERNS: &[&str] =
    &["what year", "which year", "in what year", "in which year"];

fn starts_with_pattern(words: &[String], patterns: &[&str]) -> bool {
    patterns.iter().any(|p| {
        let parts: Vec<&str> = p.split(' ').collect();
        words.len() >= parts.len() && words.iter().zip(&parts).all(|(w, p)| w == p)
    })
}

pub fn matches_temporal_answer_type(words: &[String]) -> bool {
    starts_with_pattern(words, TEMPORAL_ANSWER_PATTERNS)
}

pub fn asks_for_year(words: &[String]) -> bool {
    starts_with_pattern(words, YEAR_ANSWER_PATTERNS)
}

fn lower(q: &AnnotatedQuestion, i: usize) -> Option<String> {
    q.tokens.get(i).map(|t| t.lower())
}

/// Index of the first token after `i`, skipping a determiner `the`.
fn skip_the(q: &AnnotatedQuestion, i: usize) -> usize {
    if lower(q, i).as_deref() == Some("the") {
        i + 1
    } else {
        i
    }
}

fn starts_timex(q: &AnnotatedQuestion, i: usize, types: &[TimexType]) -> bool {
    q.timex_spans
        .iter()
        .any(|s| s.start == i && types.contains(&s.timex_type))
}

const ALL_TIMEX: &[TimexType] = &[
    TimexType::Date,
    TimexType::Time,
    TimexType::Duration,
    TimexType::Set,
    TimexType::Event,
];

/// Whether a signal-dictionary hit is used temporally.
///
/// Rejected: hits opening the question, hits followed by a wh-pronoun
/// ("after whom"), hits heading a possessive phrase without a verb ("after
/// her mother"), and `in` unless it introduces a temporal expression or an
/// event.
pub fn signal_in_temporal_use(q: &AnnotatedQuestion, span: &SignalSpan) -> bool {
    if span.start == 0 {
        return false;
    }
    let next = lower(q, span.end);
    if matches!(next.as_deref(), Some("who" | "whom" | "whose")) {
        return false;
    }
    if next
        .as_deref()
        .is_some_and(|w| POSSESSIVE_PRONOUNS.contains(&w))
        && !q.tokens[span.end..].iter().any(|t| t.pos == Pos::Verb)
    {
        return false;
    }
    if surface_key(&span.phrase) == "in" {
        return starts_timex(q, skip_the(q, span.end), ALL_TIMEX);
    }
    true
}

/// Signal spans in temporal use, left to right.
pub fn temporal_signals(q: &AnnotatedQuestion) -> Vec<&SignalSpan> {
    q.signal_spans
        .iter()
        .filter(|s| signal_in_temporal_use(q, s))
        .collect()
}

fn in_entity(q: &AnnotatedQuestion, i: usize) -> bool {
    q.entity_at(i).is_some()
}

fn is_entity_bearing(q: &AnnotatedQuestion, i: usize) -> bool {
    in_entity(q, i) || q.tokens.get(i).is_some_and(|t| t.coref.is_some())
}

/// Ordinal plus noun pairs that name a thing rather than rank events.
const LEXICALIZED_ORDINALS: &[(&str, &str)] = &[
    ("first", "name"),
    ("last", "name"),
    ("first", "lady"),
    ("first", "language"),
    ("first", "minister"),
    ("last", "words"),
];

/// The ordinal span when it modifies a noun phrase that carries an entity.
///
/// Accepted shapes: `<entity>'s first club`, `the last <entity> captain`,
/// `the first spouse of <entity>`, and `the first team <entity> played for`.
pub fn ordinal_in_use(q: &AnnotatedQuestion) -> Option<&OrdinalSpan> {
    let span = q.ordinal_span.as_ref()?;
    if let (Some(ordinal), Some(noun)) = (lower(q, span.start), lower(q, span.end)) {
        if LEXICALIZED_ORDINALS.contains(&(ordinal.as_str(), noun.as_str())) {
            return None;
        }
    }
    if span.start >= 2
        && lower(q, span.start - 1).as_deref() == Some("'s")
        && is_entity_bearing(q, span.start - 2)
    {
        return Some(span);
    }
    let mut i = span.end;
    let mut nouns = 0;
    while let Some(t) = q.tokens.get(i) {
        if in_entity(q, i) {
            return Some(span);
        }
        if !matches!(t.pos, Pos::Noun | Pos::Adj) {
            break;
        }
        nouns += 1;
        i += 1;
    }
    if nouns == 0 {
        return None;
    }
    let token = q.tokens.get(i)?;
    if token.pos == Pos::Adp {
        return is_entity_bearing(q, skip_the(q, i + 1)).then_some(span);
    }
    is_entity_bearing(q, i).then_some(span)
}

/// Decides whether a question is temporal and records the cues that fired.
pub fn detect(q: &AnnotatedQuestion, events: &EventDictionary) -> DetectionResult {
    let mut cues = Vec::new();
    if q.timex_spans
        .iter()
        .any(|s| s.timex_type != TimexType::Event)
    {
        cues.push(Cue::Timex);
    }
    let words: Vec<String> = q.tokens.iter().map(|t| t.lower()).collect();
    let has_event = q
        .timex_spans
        .iter()
        .any(|s| s.timex_type == TimexType::Event)
        || (0..words.len()).any(|i| events.match_at(&words, i).is_some());
    if has_event {
        cues.push(Cue::Event);
    }
    let signal = temporal_signals(q).first().map(|s| s.phrase.to_lowercase());
    if signal.is_some() {
        cues.push(Cue::Signal);
    }
    let ordinal = ordinal_in_use(q).map(|s| s.kind);
    if ordinal.is_some() {
        cues.push(Cue::Ordinal);
    }
    if q.answer_type_temporal || matches_temporal_answer_type(&words) {
        cues.push(Cue::TemporalAnswerType);
    }
    DetectionResult {
        is_temporal: !cues.is_empty(),
        cues,
        signal,
        ordinal,
    }
}
