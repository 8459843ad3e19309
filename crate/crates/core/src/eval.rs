//! Benchmark files, per-question precision/recall/F1 and category-averaged
//! reports.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::AnswerValue;
use crate::pipeline::{Diagnostic, Pipeline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    Explicit,
    Implicit,
    TemporalAnswer,
    Ordinal,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Explicit,
        Category::Implicit,
        Category::TemporalAnswer,
        Category::Ordinal,
    ];
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Explicit => "EXPLICIT",
            Category::Implicit => "IMPLICIT",
            Category::TemporalAnswer => "TEMPORAL_ANSWER",
            Category::Ordinal => "ORDINAL",
        })
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.to_string() == s.trim())
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    /// 1-based position in the benchmark file.
    pub id: usize,
    pub question: String,
    pub gold: Vec<AnswerValue>,
    pub category: Category,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("benchmark line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("prediction ids {predicted:?} do not match benchmark ids {gold:?}")]
    MismatchedIds {
        predicted: Vec<usize>,
        gold: Vec<usize>,
    },
}

/// Parses `question<TAB>gold1[|gold2...]<TAB>CATEGORY` lines. Blank lines
/// and `#` comments are skipped; ids count the items that remain.
pub fn parse_benchmark(text: &str) -> Result<Vec<BenchmarkItem>, EvalError> {
    let mut items = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let parse_error = |message: String| EvalError::Parse {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_error(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let gold: Vec<AnswerValue> = fields[1]
            .split('|')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(AnswerValue::parse)
            .collect();
        if gold.is_empty() {
            return Err(parse_error("no gold answers".into()));
        }
        let category = fields[2].parse().map_err(parse_error)?;
        items.push(BenchmarkItem {
            id: items.len() + 1,
            question: fields[0].trim().to_string(),
            gold,
            category,
        });
    }
    Ok(items)
}

pub fn load_benchmark(path: impl AsRef<Path>) -> Result<Vec<BenchmarkItem>, EvalError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_benchmark(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Set-based precision, recall and F1 of one prediction. An empty
/// prediction scores zero everywhere.
pub fn score(predicted: &[AnswerValue], gold: &[AnswerValue]) -> Scores {
    let predicted: BTreeSet<&AnswerValue> = predicted.iter().collect();
    let gold: BTreeSet<&AnswerValue> = gold.iter().collect();
    let hits = predicted.intersection(&gold).count() as f64;
    let precision = if predicted.is_empty() {
        0.0
    } else {
        hits / predicted.len() as f64
    };
    let recall = if gold.is_empty() {
        0.0
    } else {
        hits / gold.len() as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Scores {
        precision,
        recall,
        f1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: usize,
    pub answers: Vec<AnswerValue>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionReport {
    pub id: usize,
    pub question: String,
    pub category: Category,
    pub predicted: Vec<AnswerValue>,
    pub gold: Vec<AnswerValue>,
    #[serde(flatten)]
    pub scores: Scores,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryReport {
    pub category: Category,
    pub questions: usize,
    #[serde(flatten)]
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub questions: Vec<QuestionReport>,
    /// Categories present in the benchmark, in fixed category order.
    pub categories: Vec<CategoryReport>,
    /// Mean of the category means.
    pub aggregate: Scores,
}

fn mean(scores: impl Iterator<Item = Scores>) -> Scores {
    let (mut sum, mut n) = (Scores::default(), 0usize);
    for s in scores {
        sum.precision += s.precision;
        sum.recall += s.recall;
        sum.f1 += s.f1;
        n += 1;
    }
    if n == 0 {
        return Scores::default();
    }
    let n = n as f64;
    Scores {
        precision: sum.precision / n,
        recall: sum.recall / n,
        f1: sum.f1 / n,
    }
}

/// Scores predictions against the benchmark. Predictions must cover
/// exactly the benchmark ids.
pub fn evaluate(
    predictions: &[Prediction],
    gold: &[BenchmarkItem],
) -> Result<EvalReport, EvalError> {
    let mut predicted_ids: Vec<usize> = predictions.iter().map(|p| p.id).collect();
    let mut gold_ids: Vec<usize> = gold.iter().map(|g| g.id).collect();
    predicted_ids.sort_unstable();
    gold_ids.sort_unstable();
    if predicted_ids != gold_ids {
        return Err(EvalError::MismatchedIds {
            predicted: predicted_ids,
            gold: gold_ids,
        });
    }
    let questions: Vec<QuestionReport> = gold
        .iter()
        .map(|item| {
            let p = predictions
                .iter()
                .find(|p| p.id == item.id)
                .expect("ids checked");
            QuestionReport {
                id: item.id,
                question: item.question.clone(),
                category: item.category,
                predicted: p.answers.clone(),
                gold: item.gold.clone(),
                scores: score(&p.answers, &item.gold),
                diagnostics: p.diagnostics.clone(),
            }
        })
        .collect();
    let categories: Vec<CategoryReport> = Category::ALL
        .into_iter()
        .filter_map(|category| {
            let members: Vec<&QuestionReport> = questions
                .iter()
                .filter(|q| q.category == category)
                .collect();
            (!members.is_empty()).then(|| CategoryReport {
                category,
                questions: members.len(),
                scores: mean(members.iter().map(|q| q.scores)),
            })
        })
        .collect();
    let aggregate = mean(categories.iter().map(|c| c.scores));
    Ok(EvalReport {
        questions,
        categories,
        aggregate,
    })
}

/// Answers every benchmark question. Questions run in parallel unless the
/// backend is single-flight; results keep benchmark order either way.
pub fn predict(pipeline: &Pipeline, items: &[BenchmarkItem]) -> Vec<Prediction> {
    let run = |item: &BenchmarkItem| {
        let outcome = pipeline.answer_question(&item.question);
        Prediction {
            id: item.id,
            answers: outcome.answers.values(),
            diagnostics: outcome.diagnostics,
        }
    };
    if pipeline.backend().single_flight() {
        items.iter().map(run).collect()
    } else {
        items.par_iter().map(run).collect()
    }
}

pub fn run_benchmark(
    pipeline: &Pipeline,
    items: &[BenchmarkItem],
) -> Result<EvalReport, EvalError> {
    evaluate(&predict(pipeline, items), items)
}

impl EvalReport {
    /// Plain-text report: one row per question, then category means and the
    /// aggregate.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3}  {:<15}  {:>5}  {:>5}  {:>5}  question",
            "id", "category", "P", "R", "F1"
        );
        for q in &self.questions {
            let _ = writeln!(
                out,
                "{:>3}  {:<15}  {:>5.3}  {:>5.3}  {:>5.3}  {}",
                q.id,
                q.category.to_string(),
                q.scores.precision,
                q.scores.recall,
                q.scores.f1,
                q.question
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<15}  {:>3}  {:>5}  {:>5}  {:>5}",
            "category", "n", "P", "R", "F1"
        );
        for c in &self.categories {
            let _ = writeln!(
                out,
                "{:<15}  {:>3}  {:>5.3}  {:>5.3}  {:>5.3}",
                c.category.to_string(),
                c.questions,
                c.scores.precision,
                c.scores.recall,
                c.scores.f1
            );
        }
        let _ = writeln!(
            out,
            "{:<15}  {:>3}  {:>5.3}  {:>5.3}  {:>5.3}",
            "AGGREGATE",
            self.questions.len(),
            self.aggregate.precision,
            self.aggregate.recall,
            self.aggregate.f1
        );
        out
    }
}
