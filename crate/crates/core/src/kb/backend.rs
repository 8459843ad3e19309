//! Backend interface and the naive pattern-matching backend.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::similarity::{content_similarity, pair_key, Embeddings, Similarity};
use super::{KbStore, Role};
use crate::model::{Answer, AnswerSet, AnswerValue, Fact, FactObject};
use crate::text::{is_question_stopword, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AnswerKind {
    Entity,
    Date,
}

impl fmt::Display for AnswerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnswerKind::Entity => "ENTITY",
            AnswerKind::Date => "DATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendQuery {
    pub question: String,
    pub kind: AnswerKind,
}

impl BackendQuery {
    pub fn new(question: impl Into<String>, kind: AnswerKind) -> Self {
        Self {
            question: question.into(),
            kind,
        }
    }
}

/// One answer with the predicates it was derived through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendAnswer {
    pub value: AnswerValue,
    #[serde(default)]
    pub predicates: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendResult {
    pub answers: Vec<BackendAnswer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl BackendResult {
    pub fn answer_set(&self) -> AnswerSet {
        AnswerSet::new(
            self.answers
                .iter()
                .map(|a| Answer::pending(a.value.clone()))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("no entity resolved in {0:?}")]
    NoEntityResolved(String),
    #[error("no predicate matched {0:?}")]
    NoPredicateMatched(String),
    #[error("backend protocol error: {0}")]
    Protocol(String),
    #[error("backend i/o error: {0}")]
    Io(String),
}

/// A question-answering engine over the KB.
///
/// Implementations must tolerate concurrent calls unless
/// [`Backend::single_flight`] returns true, in which case callers issue one
/// query at a time.
pub trait Backend: Send + Sync {
    fn answer(&self, query: &BackendQuery) -> Result<BackendResult, BackendError>;

    fn single_flight(&self) -> bool {
        false
    }
}

/// Built-in backend that matches question words against predicate names.
#[derive(Debug, Clone)]
pub struct NaiveBackend {
    store: Arc<KbStore>,
    embeddings: Option<Arc<Embeddings>>,
}

impl NaiveBackend {
    pub fn new(store: Arc<KbStore>, embeddings: Option<Arc<Embeddings>>) -> Self {
        Self { store, embeddings }
    }

    pub fn store(&self) -> &KbStore {
        &self.store
    }
}

impl Backend for NaiveBackend {
    fn answer(&self, query: &BackendQuery) -> Result<BackendResult, BackendError> {
        answer_subquestion(
            &self.store,
            &query.question,
            query.kind,
            self.embeddings.as_deref(),
        )
    }
}

/// Linked entity ids (in question order, deduplicated) and the remaining
/// content words of a question.
pub fn question_content_words(store: &KbStore, question: &str) -> (Vec<String>, Vec<String>) {
    let words: Vec<String> = tokenize(question)
        .into_iter()
        .map(|t| t.surface.to_lowercase())
        .collect();
    let spans = store.link_entities(&words);
    let mut entities: Vec<String> = Vec::new();
    for id in spans.iter().filter_map(|s| s.entity.clone()) {
        if !entities.contains(&id) {
            entities.push(id);
        }
    }
    let content = words
        .iter()
        .enumerate()
        .filter(|(i, _)| !spans.iter().any(|s| s.start <= *i && *i < s.end))
        .map(|(_, w)| w)
        .filter(|w| !is_question_stopword(w))
        .cloned()
        .collect();
    (entities, content)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Direction {
    Forward,
    Inverse,
}

fn best_by<'a, K: Ord + Clone>(
    candidates: impl IntoIterator<Item = (K, &'a str)>,
    words: &[String],
    embeddings: Option<&Embeddings>,
) -> Option<(K, Similarity)> {
    candidates
        .into_iter()
        .map(|(key, name)| (key, content_similarity(words, name, embeddings)))
        .max_by(|(ka, sa), (kb, sb)| sa.rank_cmp(sb).then_with(|| kb.cmp(ka)))
}

/// Answers a rewritten sub-question against the store.
///
/// Entity questions score every non-temporal predicate touching a question
/// entity, in either direction, and return the far ends of the best one.
/// Date questions score the temporal predicates of the entity (or of the
/// compounds linking all question entities) and return their dates; when
/// the best predicate's begin/end partner scores the same, both dates are
/// returned so the caller can cast them to one interval.
pub fn answer_subquestion(
    store: &KbStore,
    question: &str,
    kind: AnswerKind,
    embeddings: Option<&Embeddings>,
) -> Result<BackendResult, BackendError> {
    let (entities, words) = question_content_words(store, question);
    if entities.is_empty() {
        return Err(BackendError::NoEntityResolved(question.to_string()));
    }
    let no_match = || BackendError::NoPredicateMatched(question.to_string());
    match kind {
        AnswerKind::Entity => {
            if words.is_empty() {
                return Err(no_match());
            }
            let mut candidates: BTreeSet<(String, Direction)> = BTreeSet::new();
            for e in &entities {
                for f in store.facts_by_subject(e) {
                    if matches!(f.object, FactObject::Entity(_)) && !store.is_temporal(&f.predicate)
                    {
                        candidates.insert((f.predicate.clone(), Direction::Forward));
                    }
                }
                for f in store.facts_by_object(e) {
                    if !store.is_temporal(&f.predicate) {
                        candidates.insert((f.predicate.clone(), Direction::Inverse));
                    }
                }
            }
            let ((predicate, direction), sim) = best_by(
                candidates
                    .iter()
                    .map(|(p, d)| ((p.clone(), *d), p.as_str())),
                &words,
                embeddings,
            )
            .ok_or_else(no_match)?;
            if sim.score <= 0.0 {
                return Err(no_match());
            }
            let mut seen = BTreeSet::new();
            let answers = store
                .facts_by_predicate(&predicate)
                .filter_map(|f| {
                    let FactObject::Entity(object) = &f.object else {
                        return None;
                    };
                    match direction {
                        Direction::Forward if entities.contains(&f.subject) => Some(object.clone()),
                        Direction::Inverse if entities.contains(object) => Some(f.subject.clone()),
                        _ => None,
                    }
                })
                .filter(|target| !entities.contains(target))
                .filter(|target| seen.insert(target.clone()))
                .map(|target| BackendAnswer {
                    value: AnswerValue::Entity(target),
                    predicates: vec![predicate.clone()],
                })
                .collect();
            Ok(BackendResult {
                answers,
                diagnostic: None,
            })
        }
        AnswerKind::Date => {
            let facts = temporal_candidates(store, &entities);
            let names: BTreeSet<&str> = facts.iter().map(|f| f.predicate.as_str()).collect();
            let (best, sim) =
                best_by(names.iter().map(|n| (*n, *n)), &words, embeddings).ok_or_else(no_match)?;
            if !words.is_empty() && sim.score <= 0.0 {
                return Err(no_match());
            }
            let mut chosen = vec![best];
            if let Some(partner) = partner(store, best, &names) {
                let partner_sim = content_similarity(&words, partner, embeddings);
                if partner_sim.rank_cmp(&sim).is_eq() {
                    chosen.push(partner);
                }
            }
            let mut seen = BTreeSet::new();
            let answers = facts
                .iter()
                .filter(|f| chosen.contains(&f.predicate.as_str()))
                .filter_map(|f| match f.object {
                    FactObject::Date(p) => Some((p, f.predicate.clone())),
                    _ => None,
                })
                .filter(|(p, _)| seen.insert(*p))
                .map(|(p, predicate)| BackendAnswer {
                    value: AnswerValue::Date(p),
                    predicates: vec![predicate],
                })
                .collect();
            Ok(BackendResult {
                answers,
                diagnostic: None,
            })
        }
    }
}

/// Temporal facts about the question entities: with one entity, its own
/// temporal facts plus those of compounds mentioning it; with several, only
/// those of compounds mentioning all of them. KB order is kept.
fn temporal_candidates<'a>(store: &'a KbStore, entities: &[String]) -> Vec<&'a Fact> {
    let compounds: Vec<&str> = store
        .compound_ids()
        .map(String::as_str)
        .filter(|c| entities.iter().all(|e| store.compound_mentions(c, e)))
        .collect();
    store
        .facts()
        .iter()
        .filter(|f| store.is_temporal(&f.predicate))
        .filter(|f| match f.compound.as_deref() {
            Some(c) => compounds.contains(&c),
            None => entities.len() == 1 && f.subject == entities[0],
        })
        .collect()
}

/// The begin/end counterpart of a temporal predicate among `names`.
fn partner<'a>(store: &KbStore, predicate: &str, names: &BTreeSet<&'a str>) -> Option<&'a str> {
    let want = match store.role(predicate)? {
        Role::Begin => Role::End,
        Role::End => Role::Begin,
        Role::Point => return None,
    };
    let key = pair_key(predicate);
    names
        .iter()
        .copied()
        .find(|n| store.role(n) == Some(want) && pair_key(n) == key)
}
