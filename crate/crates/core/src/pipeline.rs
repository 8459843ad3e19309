//! End-to-end question answering: annotate, detect, decompose, answer the
//! sub-questions, attach time scopes and apply the constraints.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::Annotator;
use crate::decomposer::{Decomposer, DecompositionResult};
use crate::detector::{
    asks_for_year, detect, load_ordinal_dictionary, load_signal_dictionary, DetectionResult,
    DictionaryError, OrdinalDictionary, SignalDictionary,
};
use crate::external::CommandBackend;
use crate::kb::{
    question_content_words, retrieve_time_scope, AnswerKind, Backend, BackendError, BackendQuery,
    Embeddings, EmbeddingsError, KbError, KbStore, NaiveBackend, TOY_KB,
};
use crate::model::{AnnotatedQuestion, Answer, AnswerSet, AnswerValue, Granularity, TimePoint};
use crate::reasoner::{
    apply_ordinal, cast_results_to_interval, filter_candidates, intersect, unscoped_candidates,
    ConstraintSpec, TemporalResult,
};
use crate::timex::{build_event_dictionary, extend_event_dictionary, EventDictionary, Tagger};

/// Reference date for relative expressions when none is configured.
pub const DEFAULT_REFERENCE_DATE: &str = "2018-01-15";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BackendSelector {
    #[default]
    Builtin,
    /// Program and arguments of an external engine.
    Command(String),
}

impl FromStr for BackendSelector {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "builtin" => Ok(BackendSelector::Builtin),
            _ => match s.strip_prefix("cmd:") {
                Some(command) if !command.trim().is_empty() => {
                    Ok(BackendSelector::Command(command.to_string()))
                }
                _ => Err(PipelineError::Config(format!(
                    "backend must be builtin or cmd:<path>, got {s:?}"
                ))),
            },
        }
    }
}

impl fmt::Display for BackendSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSelector::Builtin => f.write_str("builtin"),
            BackendSelector::Command(c) => write!(f, "cmd:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// KB file; the bundled toy KB when absent.
    pub kb: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub reference_date: TimePoint,
    pub signals: Option<PathBuf>,
    pub ordinals: Option<PathBuf>,
    /// Extra event entities, in the KB file format.
    pub events: Option<PathBuf>,
    pub backend: BackendSelector,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            kb: None,
            embeddings: None,
            reference_date: DEFAULT_REFERENCE_DATE.parse().expect("valid default date"),
            signals: None,
            ordinals: None,
            events: None,
            backend: BackendSelector::Builtin,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("knowledge base: {0}")]
    Kb(#[from] KbError),
    #[error("embeddings: {0}")]
    Embeddings(#[from] EmbeddingsError),
    #[error("dictionary: {0}")]
    Dictionary(#[from] DictionaryError),
    #[error("backend: {0}")]
    Backend(#[from] BackendError),
}

impl PipelineError {
    /// Whether the failure lies in input data rather than configuration.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            PipelineError::Kb(KbError::Invalid(_))
                | PipelineError::Embeddings(EmbeddingsError::Parse { .. })
                | PipelineError::Dictionary(DictionaryError::Malformed { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Detect,
    Decompose,
    Answer,
    Scope,
    Reason,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Detect => "detect",
            Stage::Decompose => "decompose",
            Stage::Answer => "answer",
            Stage::Scope => "scope",
            Stage::Reason => "reason",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub stage: Stage,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub question: String,
    pub answers: AnswerSet,
    pub detection: DetectionResult,
    pub decomposition: Option<DecompositionResult>,
    pub constraints: Vec<ConstraintSpec>,
    pub diagnostics: Vec<Diagnostic>,
}

pub struct Pipeline {
    store: Arc<KbStore>,
    embeddings: Option<Arc<Embeddings>>,
    events: EventDictionary,
    annotator: Annotator,
    decomposer: Decomposer,
    backend: Arc<dyn Backend>,
}

impl fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pipeline")
            .field("facts", &self.store.facts().len())
            .field("events", &self.events.len())
            .finish_non_exhaustive()
    }
}

fn existing(path: &Option<PathBuf>, what: &str) -> Result<(), PipelineError> {
    match path {
        Some(p) if !p.exists() => Err(PipelineError::Config(format!(
            "{what} file {} does not exist",
            p.display()
        ))),
        _ => Ok(()),
    }
}

impl Pipeline {
    pub fn from_config(config: &PipelineConfig) -> Result<Self, PipelineError> {
        existing(&config.kb, "KB")?;
        existing(&config.embeddings, "embeddings")?;
        existing(&config.signals, "signal dictionary")?;
        existing(&config.ordinals, "ordinal dictionary")?;
        existing(&config.events, "event")?;
        let store = Arc::new(match &config.kb {
            Some(path) => KbStore::load(path)?,
            None => KbStore::parse(TOY_KB)?,
        });
        let embeddings = config
            .embeddings
            .as_ref()
            .map(Embeddings::load)
            .transpose()?
            .map(Arc::new);
        let signals = match &config.signals {
            Some(p) => SignalDictionary::load(p)?,
            None => load_signal_dictionary(),
        };
        let ordinals = match &config.ordinals {
            Some(p) => OrdinalDictionary::load(p)?,
            None => load_ordinal_dictionary(),
        };
        let mut events = build_event_dictionary(&store);
        if let Some(path) = &config.events {
            extend_event_dictionary(&mut events, &KbStore::load(path)?);
        }
        let backend: Arc<dyn Backend> = match &config.backend {
            BackendSelector::Builtin => {
                Arc::new(NaiveBackend::new(store.clone(), embeddings.clone()))
            }
            BackendSelector::Command(command) => Arc::new(CommandBackend::spawn(command)?),
        };
        Ok(Self::assemble(
            store,
            embeddings,
            events,
            signals,
            ordinals,
            config.reference_date,
            backend,
        ))
    }

    /// Pipeline over an already loaded store with bundled dictionaries and
    /// the built-in backend.
    pub fn with_store(
        store: KbStore,
        embeddings: Option<Embeddings>,
        reference_date: TimePoint,
    ) -> Self {
        let store = Arc::new(store);
        let embeddings = embeddings.map(Arc::new);
        let events = build_event_dictionary(&store);
        let backend = Arc::new(NaiveBackend::new(store.clone(), embeddings.clone()));
        Self::assemble(
            store,
            embeddings,
            events,
            load_signal_dictionary(),
            load_ordinal_dictionary(),
            reference_date,
            backend,
        )
    }

    fn assemble(
        store: Arc<KbStore>,
        embeddings: Option<Arc<Embeddings>>,
        events: EventDictionary,
        signals: SignalDictionary,
        ordinals: OrdinalDictionary,
        reference_date: TimePoint,
        backend: Arc<dyn Backend>,
    ) -> Self {
        let annotator = Annotator::new(
            store.clone(),
            Tagger::new(events.clone()),
            signals.clone(),
            ordinals,
            reference_date,
        );
        Self {
            store,
            embeddings,
            events,
            annotator,
            decomposer: Decomposer::new(signals),
            backend,
        }
    }

    /// Replaces the backend used for sub-questions.
    pub fn with_backend(mut self, backend: Arc<dyn Backend>) -> Self {
        self.backend = backend;
        self
    }

    pub fn store(&self) -> &KbStore {
        &self.store
    }

    pub fn events(&self) -> &EventDictionary {
        &self.events
    }

    pub fn backend(&self) -> &dyn Backend {
        self.backend.as_ref()
    }

    pub fn annotate(&self, question: &str) -> AnnotatedQuestion {
        self.annotator.annotate(question)
    }

    pub fn detect(&self, question: &str) -> DetectionResult {
        detect(&self.annotate(question), &self.events)
    }

    pub fn decompose(
        &self,
        question: &str,
    ) -> Result<DecompositionResult, crate::decomposer::DecomposeError> {
        self.decomposer.decompose(&self.annotate(question))
    }

    /// Answers a question. Stage failures produce an empty answer set and
    /// diagnostics rather than an error.
    pub fn answer_question(&self, question: &str) -> Outcome {
        let annotated = self.annotate(question);
        let detection = detect(&annotated, &self.events);
        let mut run = Run {
            pipeline: self,
            diagnostics: Vec::new(),
        };
        let kind = if annotated.answer_type_temporal {
            AnswerKind::Date
        } else {
            AnswerKind::Entity
        };
        let mut outcome = Outcome {
            question: question.to_string(),
            answers: AnswerSet::default(),
            detection: detection.clone(),
            decomposition: None,
            constraints: Vec::new(),
            diagnostics: Vec::new(),
        };

        if !detection.is_temporal {
            outcome.answers = run.ask(question, kind).unwrap_or_default();
            outcome.diagnostics = run.diagnostics;
            return outcome;
        }

        let decomposition = match self.decomposer.decompose(&annotated) {
            Ok(d) => d,
            Err(e) => {
                run.note(Stage::Decompose, e.to_string());
                outcome.diagnostics = run.diagnostics;
                return outcome;
            }
        };
        let (answers, constraints) = run.resolve(&decomposition, kind);
        let words: Vec<String> = annotated.tokens.iter().map(|t| t.lower()).collect();
        outcome.answers = if asks_for_year(&words) {
            to_years(answers)
        } else {
            answers
        };
        outcome.decomposition = Some(decomposition);
        outcome.constraints = constraints;
        outcome.diagnostics = run.diagnostics;
        outcome
    }
}

fn to_years(set: AnswerSet) -> AnswerSet {
    let mut out: Vec<Answer> = Vec::new();
    for mut answer in set.answers {
        if let AnswerValue::Date(p) = answer.value {
            answer.value = AnswerValue::Date(p.truncate(Granularity::Year));
        }
        if !out.iter().any(|a| a.value == answer.value) {
            out.push(answer);
        }
    }
    AnswerSet::new(out)
}

/// Per-question state: the diagnostics collected so far.
struct Run<'a> {
    pipeline: &'a Pipeline,
    diagnostics: Vec<Diagnostic>,
}

impl Run<'_> {
    fn note(&mut self, stage: Stage, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            stage,
            message: message.into(),
        });
    }

    fn ask_raw(&mut self, question: &str, kind: AnswerKind) -> Option<crate::kb::BackendResult> {
        match self
            .pipeline
            .backend
            .answer(&BackendQuery::new(question, kind))
        {
            Ok(result) => {
                if let Some(d) = &result.diagnostic {
                    self.note(Stage::Answer, d.clone());
                }
                Some(result)
            }
            Err(e) => {
                self.note(Stage::Answer, format!("{question:?}: {e}"));
                None
            }
        }
    }

    fn ask(&mut self, question: &str, kind: AnswerKind) -> Option<AnswerSet> {
        self.ask_raw(question, kind).map(|r| r.answer_set())
    }

    /// Candidates of one non-temporal sub-question with their time scopes.
    fn scoped_candidates(&mut self, question: &str, kind: AnswerKind) -> Option<AnswerSet> {
        let result = self.ask_raw(question, kind)?;
        let store = &self.pipeline.store;
        let (entities, _) = question_content_words(store, question);
        let embeddings = self.pipeline.embeddings.as_deref();
        let mut answers = Vec::new();
        for a in &result.answers {
            let mut scopes = Vec::new();
            let mut failure = None;
            let predicates: Vec<&str> = if a.predicates.is_empty() {
                vec![""]
            } else {
                a.predicates.iter().map(String::as_str).collect()
            };
            for predicate in predicates {
                match retrieve_time_scope(store, &a.value, predicate, &entities, embeddings) {
                    Ok(found) => {
                        for scope in found {
                            if !scopes.contains(&scope) {
                                scopes.push(scope);
                            }
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            }
            if scopes.is_empty() {
                if let Some(e) = failure {
                    self.note(Stage::Scope, e.to_string());
                }
            }
            answers.push(Answer::scoped(a.value.clone(), scopes));
        }
        Some(AnswerSet::new(answers))
    }

    fn temporal_constraint(
        &mut self,
        question: &str,
        relation: crate::model::TemporalRelation,
    ) -> Option<ConstraintSpec> {
        let result = self.ask_raw(question, AnswerKind::Date)?;
        let dates: Vec<TemporalResult> = result
            .answers
            .iter()
            .filter_map(|a| match a.value {
                AnswerValue::Date(p) => Some(TemporalResult::Point(p)),
                AnswerValue::Entity(_) => None,
            })
            .collect();
        match cast_results_to_interval(&dates) {
            Ok(interval) => Some(ConstraintSpec::new(relation, interval)),
            Err(e) => {
                self.note(Stage::Reason, format!("{question:?}: {e}"));
                None
            }
        }
    }

    fn resolve(
        &mut self,
        d: &DecompositionResult,
        kind: AnswerKind,
    ) -> (AnswerSet, Vec<ConstraintSpec>) {
        let mut constraints = d.explicit_constraints.clone();
        if let (Some(sub2), Some(relation)) = (&d.temporal_subquestion, d.relation) {
            match self.temporal_constraint(sub2, relation) {
                Some(spec) => constraints.push(spec),
                None => return (AnswerSet::default(), constraints),
            }
        }
        let needs_scopes = !constraints.is_empty() || d.ordinal.is_some();

        let mut sets = Vec::new();
        for sub in &d.nontemporal_subquestions {
            let set = if needs_scopes {
                self.scoped_candidates(sub, kind)
            } else {
                self.ask(sub, kind)
            };
            match set {
                Some(s) => sets.push(s),
                None => return (AnswerSet::default(), constraints),
            }
        }
        let mut candidates = intersect(&sets);
        if !needs_scopes {
            return (candidates, constraints);
        }

        let unscoped = unscoped_candidates(&candidates);
        if !unscoped.is_empty() {
            let names: Vec<String> = unscoped.iter().map(ToString::to_string).collect();
            self.note(
                Stage::Reason,
                format!("excluded unscoped candidates: {}", names.join(", ")),
            );
            candidates.answers.retain(|a| !a.time_scopes.is_empty());
        }
        for spec in &constraints {
            candidates = filter_candidates(&candidates, spec);
        }
        if let Some(kind) = d.ordinal {
            candidates = match apply_ordinal(&candidates, kind) {
                Ok(c) => c,
                Err(e) => {
                    self.note(Stage::Reason, e.to_string());
                    AnswerSet::default()
                }
            };
        }
        (candidates, constraints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Pipeline {
        Pipeline::from_config(&PipelineConfig::default()).unwrap()
    }

    fn ids(outcome: &Outcome) -> Vec<String> {
        outcome
            .answers
            .values()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn backend_selectors() {
        assert_eq!(
            "builtin".parse::<BackendSelector>().unwrap(),
            BackendSelector::Builtin
        );
        assert_eq!(
            "cmd:/bin/x --y".parse::<BackendSelector>().unwrap(),
            BackendSelector::Command("/bin/x --y".into())
        );
        assert!("cmd:".parse::<BackendSelector>().is_err());
        assert!("http://x".parse::<BackendSelector>().is_err());
    }

    #[test]
    fn plural_and_singular_before() {
        let p = toy();
        let plural = p.answer_question("which teams did neymar play for before joining psg?");
        assert_eq!(
            ids(&plural),
            ["santos_fc", "fc_barcelona"],
            "{:?}",
            plural.diagnostics
        );
        let singular = p.answer_question("which team did neymar play for before joining psg?");
        assert_eq!(ids(&singular), ["fc_barcelona"]);
    }

    #[test]
    fn first_spouse() {
        let out = toy().answer_question("who was the first spouse of julia roberts?");
        assert_eq!(ids(&out), ["lyle_lovett"]);
    }

    #[test]
    fn non_temporal_goes_straight_to_backend() {
        let out = toy().answer_question("Which teams did Neymar play for?");
        assert!(!out.detection.is_temporal);
        assert!(out.decomposition.is_none());
        assert_eq!(ids(&out), ["santos_fc", "fc_barcelona", "paris_sg"]);
    }

    #[test]
    fn failures_become_diagnostics() {
        let out = toy().answer_question("when did nobody arrive?");
        assert!(out.answers.is_empty());
        assert_eq!(out.diagnostics[0].stage, Stage::Answer);
    }

    #[test]
    fn missing_paths_are_config_errors() {
        let config = PipelineConfig {
            kb: Some("/nonexistent/toy.kb".into()),
            ..PipelineConfig::default()
        };
        let err = Pipeline::from_config(&config).unwrap_err();
        assert!(matches!(err, PipelineError::Config(_)));
        assert!(!err.is_data_error());
    }
}
