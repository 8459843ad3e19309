//! Splits a temporal question at its signal into a non-temporal and a
//! temporal sub-question and rewrites both.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::{ordinal_in_use, temporal_signals, SignalDictionary};
use crate::model::{AnnotatedQuestion, OrdinalKind, OverlapRow, Pos, SignalSpan, TemporalRelation};
use crate::reasoner::ConstraintSpec;
use crate::text::{is_preposition, is_wh};
use crate::timex::TimexType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("no tokens follow the signal {0:?}")]
    EmptyConstraint(String),
    #[error("signal {0:?} is not in the signal dictionary")]
    UnmappedSignal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
    NoSplit,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1 => "CASE1",
            Case::Case2 => "CASE2",
            Case::Case3 => "CASE3",
            Case::Case4 => "CASE4",
            Case::NoSplit => "NO_SPLIT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub nontemporal_subquestions: Vec<String>,
    pub temporal_subquestion: Option<String>,
    pub relation: Option<TemporalRelation>,
    pub ordinal: Option<OrdinalKind>,
    pub case_used: Case,
    /// Constraints read directly from dates and times in the head clause.
    #[serde(default)]
    pub explicit_constraints: Vec<ConstraintSpec>,
}

/// Relation used for a date with no governing signal ("neymar's club 2014").
pub const DEFAULT_EXPLICIT_RELATION: TemporalRelation =
    TemporalRelation::Overlap(OverlapRow::SinceUntilIn);

const ANCHOR_TYPES: &[TimexType] = &[
    TimexType::Date,
    TimexType::Time,
    TimexType::Duration,
    TimexType::Set,
];

fn is_the(q: &AnnotatedQuestion, i: usize) -> bool {
    q.tokens.get(i).is_some_and(|t| t.lower() == "the")
}

/// End of the question proper, before trailing punctuation.
fn content_end(q: &AnnotatedQuestion) -> usize {
    let mut end = q.tokens.len();
    while end > 0 && q.tokens[end - 1].pos == Pos::Punct {
        end -= 1;
    }
    end
}

/// The leftmost signal in temporal use whose right context is clausal, that
/// is, does not start with a date, time, duration or set expression.
pub fn find_pivot(q: &AnnotatedQuestion) -> Option<&SignalSpan> {
    temporal_signals(q).into_iter().find(|s| {
        let next = if is_the(q, s.end) { s.end + 1 } else { s.end };
        !q.timex_spans
            .iter()
            .any(|t| t.start == next && ANCHOR_TYPES.contains(&t.timex_type))
    })
}

/// Chooses the rewrite case for the constraint fragment `[start, end)`.
pub fn select_case(
    q: &AnnotatedQuestion,
    start: usize,
    end: usize,
) -> Result<Case, DecomposeError> {
    if start >= end {
        return Err(DecomposeError::EmptyConstraint(q.text.clone()));
    }
    let head = if is_the(q, start) { start + 1 } else { start };
    if q.timex_spans
        .iter()
        .any(|t| t.timex_type == TimexType::Event && t.start == head)
    {
        return Ok(Case::Case4);
    }
    let has_entity = (start..end).any(|i| q.entity_at(i).is_some() || q.tokens[i].coref.is_some());
    let has_verb = (start..end).any(|i| q.tokens[i].pos == Pos::Verb && q.entity_at(i).is_none());
    Ok(match (has_entity, has_verb) {
        (true, true) => Case::Case1,
        (false, true) => Case::Case2,
        (_, false) => Case::Case3,
    })
}

/// Joins lower-cased tokens, attaching possessive markers and punctuation
/// to the preceding word.
fn render(words: &[String]) -> String {
    let mut out = String::new();
    for w in words {
        let attach = w == "'s" || (w.chars().all(|c| !c.is_alphanumeric()) && !out.is_empty());
        if !out.is_empty() && !attach {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

fn question(words: &[String]) -> String {
    format!("{}?", render(words))
}

#[derive(Debug, Clone)]
pub struct Decomposer {
    signals: SignalDictionary,
}

impl Decomposer {
    pub fn new(signals: SignalDictionary) -> Self {
        Self { signals }
    }

    fn relation_of(&self, phrase: &str) -> Result<TemporalRelation, DecomposeError> {
        self.signals
            .lookup(phrase)
            .ok_or_else(|| DecomposeError::UnmappedSignal(phrase.to_string()))
    }

    /// Word of token `i`, with a resolved pronoun replaced by its entity.
    fn word(q: &AnnotatedQuestion, i: usize) -> Vec<String> {
        let token = &q.tokens[i];
        match token.coref.and_then(|e| q.entity_spans.get(e)) {
            Some(span) => vec![q.span_text(span.start, span.end)],
            None => vec![token.lower()],
        }
    }

    fn words(q: &AnnotatedQuestion, range: impl Iterator<Item = usize>) -> Vec<String> {
        range.flat_map(|i| Self::word(q, i)).collect()
    }

    /// Dates and times in `[0, end)` become explicit constraints; their
    /// tokens and governing signal or preposition are marked for removal.
    fn explicit_constraints(
        &self,
        q: &AnnotatedQuestion,
        end: usize,
        removed: &mut [bool],
    ) -> Result<Vec<ConstraintSpec>, DecomposeError> {
        let mut out = Vec::new();
        for span in &q.timex_spans {
            if span.end > end || !matches!(span.timex_type, TimexType::Date | TimexType::Time) {
                continue;
            }
            let Some(interval) = span.normalized else {
                continue;
            };
            let mut first = span.start;
            if first > 0 && is_the(q, first - 1) {
                first -= 1;
            }
            let governor = q.signal_spans.iter().find(|s| s.end == first);
            let relation = match governor {
                Some(signal) => {
                    first = signal.start;
                    self.relation_of(&signal.phrase)?
                }
                None => {
                    if first > 0 && is_preposition(&q.tokens[first - 1].lower()) {
                        first -= 1;
                    }
                    DEFAULT_EXPLICIT_RELATION
                }
            };
            removed[first..span.end].iter_mut().for_each(|r| *r = true);
            out.push(ConstraintSpec::new(relation, interval));
        }
        Ok(out)
    }

    /// Decomposes a temporal question.
    pub fn decompose(&self, q: &AnnotatedQuestion) -> Result<DecompositionResult, DecomposeError> {
        let end = content_end(q);
        let pivot = find_pivot(q);
        let head_end = pivot.map_or(end, |p| p.start.min(end));
        let mut removed = vec![false; q.tokens.len()];

        let explicit_constraints = self.explicit_constraints(q, head_end, &mut removed)?;
        let ordinal_span = ordinal_in_use(q);
        if let Some(o) = ordinal_span.filter(|o| o.end <= head_end) {
            removed[o.start..o.end].iter_mut().for_each(|r| *r = true);
        }
        let mut ordinal = ordinal_span.map(|o| o.kind);

        let head: Vec<usize> = (0..head_end).filter(|&i| !removed[i]).collect();
        let sub1 = question(&Self::words(q, head.iter().copied()));

        let Some(pivot) = pivot else {
            return Ok(DecompositionResult {
                nontemporal_subquestions: vec![sub1],
                temporal_subquestion: None,
                relation: None,
                ordinal,
                case_used: Case::NoSplit,
                explicit_constraints,
            });
        };

        let relation = self.relation_of(&pivot.phrase)?;
        let (cons_start, cons_end) = (pivot.end, end.max(pivot.end));
        let case = select_case(q, cons_start, cons_end)?;
        let constraint = Self::words(q, cons_start..cons_end);
        let when = vec!["when".to_string()];
        let sub2_words: Vec<String> = match case {
            Case::Case1 => [when, constraint].concat(),
            Case::Case2 => {
                let borrowed = q
                    .entity_spans
                    .iter()
                    .find(|s| s.end <= pivot.start)
                    .map(|s| q.span_text(s.start, s.end));
                [when, borrowed.into_iter().collect(), constraint].concat()
            }
            Case::Case3 => {
                let after_wh = head
                    .iter()
                    .copied()
                    .skip_while(|&i| is_wh(&q.tokens[i].lower()));
                [when, constraint, Self::words(q, after_wh)].concat()
            }
            Case::Case4 => [
                when,
                vec!["did".to_string()],
                constraint,
                vec!["happen".to_string()],
            ]
            .concat(),
            Case::NoSplit => unreachable!("a pivot was found"),
        };

        if ordinal.is_none() {
            ordinal = singular_head_ordinal(q, relation);
        }

        Ok(DecompositionResult {
            nontemporal_subquestions: vec![sub1],
            temporal_subquestion: Some(question(&sub2_words)),
            relation: Some(relation),
            ordinal,
            case_used: case,
            explicit_constraints,
        })
    }
}

/// `which team ... before X` asks for the nearest survivor: the last
/// candidate before X, or the first one after it.
fn singular_head_ordinal(q: &AnnotatedQuestion, relation: TemporalRelation) -> Option<OrdinalKind> {
    let wh = q.tokens.first()?.lower();
    let noun = q.tokens.get(1)?;
    if !matches!(wh.as_str(), "which" | "what")
        || noun.pos != Pos::Noun
        || noun.lower().ends_with('s')
    {
        return None;
    }
    match relation {
        TemporalRelation::Before => Some(OrdinalKind::Last),
        TemporalRelation::After => Some(OrdinalKind::First),
        TemporalRelation::Overlap(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_questions() {
        let w = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
        assert_eq!(
            question(&w("where did neymar play")),
            "where did neymar play?"
        );
        assert_eq!(
            question(&w("who is neymar 's sister")),
            "who is neymar's sister?"
        );
        assert_eq!(question(&w("paris , france")), "paris, france?");
    }
}
