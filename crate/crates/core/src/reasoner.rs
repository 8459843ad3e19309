//! Interval constraints, ordinal selection, answer-set intersection and
//! Allen relation classification.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    AllenRelation, Answer, AnswerSet, AnswerValue, Endpoint, Interval, OrdinalKind, OverlapRow,
    ScopeStatus, TemporalRelation, TimePoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("temporal sub-question produced no dates")]
    EmptyTemporalResult,
    #[error("candidate {0} has no time scope")]
    UnscopedCandidate(String),
    #[error("interval {0} is a point or open")]
    DegenerateInterval(String),
}

/// A relation to test answer scopes against, with the constraint interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub relation: TemporalRelation,
    pub interval: Interval,
}

impl ConstraintSpec {
    pub fn new(relation: TemporalRelation, interval: Interval) -> Self {
        Self { relation, interval }
    }
}

/// A single result of a temporal sub-question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalResult {
    Point(TimePoint),
    Interval(Interval),
}

impl TemporalResult {
    fn as_interval(&self) -> Interval {
        match self {
            TemporalResult::Point(p) => Interval::from_point(*p),
            TemporalResult::Interval(i) => *i,
        }
    }
}

fn point_of(endpoint: Endpoint) -> Option<TimePoint> {
    match endpoint {
        Endpoint::At(d) => Some(TimePoint::from_date(d)),
        Endpoint::NegInf | Endpoint::PosInf => None,
    }
}

/// Casts temporal results to one interval spanning all of them.
///
/// A lone interval passes through unchanged and a lone point becomes its
/// widened point interval. Several results span from the earliest widened
/// begin to the latest widened end.
pub fn cast_results_to_interval(results: &[TemporalResult]) -> Result<Interval, ReasonerError> {
    match results {
        [] => Err(ReasonerError::EmptyTemporalResult),
        [single] => Ok(single.as_interval()),
        many => {
            let intervals: Vec<Interval> = many.iter().map(TemporalResult::as_interval).collect();
            let lower = intervals
                .iter()
                .map(Interval::lower)
                .min()
                .expect("non-empty");
            let upper = intervals
                .iter()
                .map(Interval::upper)
                .max()
                .expect("non-empty");
            Ok(Interval {
                begin: point_of(lower),
                end: point_of(upper),
            })
        }
    }
}

/// Tests an answer scope against a constraint interval. All comparisons
/// are non-strict and open sides count as infinite.
pub fn satisfies(relation: TemporalRelation, ans: &Interval, cons: &Interval) -> bool {
    let (ba, ea) = (ans.lower(), ans.upper());
    let (bc, ec) = (cons.lower(), cons.upper());
    match relation {
        TemporalRelation::Before => ea <= bc,
        TemporalRelation::After => ba >= ec,
        TemporalRelation::Overlap(OverlapRow::DuringWhileWhen) => ba <= ec && ec <= ea,
        TemporalRelation::Overlap(OverlapRow::SinceUntilIn) => ba <= bc && bc <= ea,
        TemporalRelation::Overlap(OverlapRow::SameTimeAs) => bc <= ba && ba <= ea && ea <= ec,
    }
}

/// Keeps candidates with at least one scope satisfying the constraint, in
/// input order. Unscoped candidates are dropped; see
/// [`unscoped_candidates`].
pub fn filter_candidates(candidates: &AnswerSet, spec: &ConstraintSpec) -> AnswerSet {
    AnswerSet::new(
        candidates
            .answers
            .iter()
            .filter(|a| {
                a.time_scopes
                    .iter()
                    .any(|s| satisfies(spec.relation, s, &spec.interval))
            })
            .cloned()
            .collect(),
    )
}

pub fn unscoped_candidates(candidates: &AnswerSet) -> Vec<AnswerValue> {
    candidates
        .answers
        .iter()
        .filter(|a| a.time_scopes.is_empty())
        .map(|a| a.value.clone())
        .collect()
}

fn earliest_scope(answer: &Answer) -> Option<(Endpoint, Endpoint)> {
    answer
        .time_scopes
        .iter()
        .map(|s| (s.lower(), s.upper()))
        .min()
}

fn chronological(a: &Answer, b: &Answer) -> Ordering {
    earliest_scope(a)
        .cmp(&earliest_scope(b))
        .then_with(|| a.value.cmp(&b.value))
}

/// Candidates in chronological order of their earliest scope, ties broken
/// by begin, end and then value.
pub fn sort_by_scope(candidates: &AnswerSet) -> Result<Vec<Answer>, ReasonerError> {
    if let Some(a) = candidates.answers.iter().find(|a| a.time_scopes.is_empty()) {
        return Err(ReasonerError::UnscopedCandidate(a.value.to_string()));
    }
    let mut sorted = candidates.answers.clone();
    sorted.sort_by(chronological);
    Ok(sorted)
}

/// Selects the first, last or n-th candidate (1-based) in chronological
/// order. An out-of-range position selects nothing.
pub fn apply_ordinal(
    candidates: &AnswerSet,
    kind: OrdinalKind,
) -> Result<AnswerSet, ReasonerError> {
    let sorted = sort_by_scope(candidates)?;
    let picked = match kind {
        OrdinalKind::First => sorted.first(),
        OrdinalKind::Last => sorted.last(),
        OrdinalKind::Nth(n) => (n as usize).checked_sub(1).and_then(|i| sorted.get(i)),
    };
    Ok(AnswerSet::new(picked.cloned().into_iter().collect()))
}

/// Answers present in every set, in the order of the first set, with their
/// scopes merged.
pub fn intersect(sets: &[AnswerSet]) -> AnswerSet {
    let Some((first, rest)) = sets.split_first() else {
        return AnswerSet::default();
    };
    let mut out: Vec<Answer> = Vec::new();
    for answer in &first.answers {
        if out.iter().any(|a| a.value == answer.value) {
            continue;
        }
        let matches: Vec<&Answer> = rest
            .iter()
            .filter_map(|set| set.answers.iter().find(|a| a.value == answer.value))
            .collect();
        if matches.len() != rest.len() {
            continue;
        }
        let mut merged = answer.clone();
        let others = first
            .answers
            .iter()
            .filter(|a| a.value == answer.value)
            .chain(matches);
        for other in others {
            for scope in &other.time_scopes {
                if !merged.time_scopes.contains(scope) {
                    merged.time_scopes.push(*scope);
                }
            }
            if other.status == ScopeStatus::Scoped {
                merged.status = ScopeStatus::Scoped;
            }
        }
        out.push(merged);
    }
    AnswerSet::new(out)
}

/// Classifies two closed, non-degenerate intervals.
pub fn allen_relation(i1: &Interval, i2: &Interval) -> Result<AllenRelation, ReasonerError> {
    for i in [i1, i2] {
        if !i.is_closed() || i.lower() >= i.upper() {
            return Err(ReasonerError::DegenerateInterval(i.to_string()));
        }
    }
    let (b1, e1, b2, e2) = (i1.lower(), i1.upper(), i2.lower(), i2.upper());
    use AllenRelation as A;
    use Ordering::{Equal as Eq, Greater as Gt, Less as Lt};
    let relation = match (b1.cmp(&b2), e1.cmp(&e2)) {
        (Eq, Eq) => A::Equal,
        (Eq, Lt) => A::Starts,
        (Eq, Gt) => A::StartedBy,
        (Gt, Eq) => A::Finishes,
        (Lt, Eq) => A::FinishedBy,
        (Gt, Lt) => A::During,
        (Lt, Gt) => A::Contains,
        (Lt, Lt) => match e1.cmp(&b2) {
            Lt => A::Before,
            Eq => A::Meets,
            Gt => A::Overlaps,
        },
        (Gt, Gt) => match b1.cmp(&e2) {
            Gt => A::After,
            Eq => A::MetBy,
            Lt => A::OverlappedBy,
        },
    };
    Ok(relation)
}
