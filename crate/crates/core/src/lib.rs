//! Temporal question answering over a small in-memory knowledge base.
//!
//! The pipeline annotates a question, detects temporal intent, splits it
//! into non-temporal and temporal sub-questions, answers those through a
//! pluggable backend and filters the candidates with interval constraints.

pub mod annotate;
pub mod decomposer;
pub mod detector;
pub mod eval;
pub mod external;
pub mod kb;
pub mod model;
pub mod pipeline;
pub mod reasoner;
pub mod text;
pub mod timex;

pub use annotate::Annotator;
pub use decomposer::{Case, Decomposer, DecompositionResult};
pub use detector::{detect, Cue, DetectionResult};
pub use kb::KbStore;
pub use model::{AnswerSet, AnswerValue, Interval, TemporalRelation, TimePoint};
pub use pipeline::{Outcome, Pipeline, PipelineConfig};
