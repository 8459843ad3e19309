//! Predicate-name tokenization and similarity, with optional word vectors.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use thiserror::Error;

use crate::text::stem;

/// Tokens dropped from predicate names.
pub const PREDICATE_STOP_TOKENS: &[&str] =
    &["on", "of", "the", "date", "in", "at", "by", "a", "an"];

/// Tokens that only mark whether a temporal predicate opens or closes a
/// period. Removing them pairs `joinedOnDate` with `leftOnDate`.
pub const ROLE_TOKENS: &[&str] = &[
    "joined", "left", "start", "started", "end", "ended", "from", "to", "begin", "began", "since",
    "until",
];

/// Splits a dotted, camel-cased predicate name into lower-cased content
/// tokens: `footballPlayer.team.joinedOnDate` gives
/// `[football, player, team, joined]`. Order is kept, repeats dropped.
pub fn tokenize_predicate(name: &str) -> Vec<String> {
    let mut tokens: Vec<String> = Vec::new();
    for segment in name.split(['.', '_', '/']) {
        let mut current = String::new();
        let mut prev_lower = false;
        for c in segment.chars() {
            if c.is_uppercase() && prev_lower && !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            prev_lower = c.is_lowercase() || c.is_ascii_digit();
            current.extend(c.to_lowercase());
        }
        if !current.is_empty() {
            tokens.push(current);
        }
    }
    let mut seen = BTreeSet::new();
    tokens
        .into_iter()
        .filter(|t| !PREDICATE_STOP_TOKENS.contains(&t.as_str()))
        .filter(|t| seen.insert(t.clone()))
        .collect()
}

/// Key shared by the begin and end predicates of one period.
pub fn pair_key(name: &str) -> String {
    tokenize_predicate(name)
        .into_iter()
        .filter(|t| !ROLE_TOKENS.contains(&t.as_str()))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[derive(Debug, Error)]
pub enum EmbeddingsError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Word vectors read from `token v1 v2 ... vd` lines.
#[derive(Debug, Clone, Default)]
pub struct Embeddings {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl Embeddings {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, EmbeddingsError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| EmbeddingsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, EmbeddingsError> {
        let mut embeddings = Embeddings::default();
        for (idx, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let Some(token) = parts.next() else { continue };
            if token.starts_with('#') {
                continue;
            }
            let vector: Vec<f64> =
                parts
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|e| EmbeddingsError::Parse {
                        line: idx + 1,
                        message: format!("bad component: {e}"),
                    })?;
            if vector.is_empty() {
                return Err(EmbeddingsError::Parse {
                    line: idx + 1,
                    message: "vector has no components".into(),
                });
            }
            if embeddings.dim == 0 {
                embeddings.dim = vector.len();
            } else if vector.len() != embeddings.dim {
                return Err(EmbeddingsError::Parse {
                    line: idx + 1,
                    message: format!(
                        "expected {} components, found {}",
                        embeddings.dim,
                        vector.len()
                    ),
                });
            }
            embeddings.vectors.insert(token.to_lowercase(), vector);
        }
        Ok(embeddings)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Mean vector of the known tokens, `None` when none are known.
    pub fn mean<'a>(&self, tokens: impl IntoIterator<Item = &'a str>) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dim];
        let mut n = 0usize;
        for token in tokens {
            if let Some(v) = self.vectors.get(token) {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
                n += 1;
            }
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }

    fn cosine_of(&self, a: &[String], b: &[String]) -> Option<f64> {
        let va = self.mean(a.iter().map(String::as_str))?;
        let vb = self.mean(b.iter().map(String::as_str))?;
        cosine(&va, &vb)
    }
}

/// Similarity of two predicates in `[-1, 1]`: cosine of mean token vectors
/// when embeddings cover both, otherwise Jaccard overlap of token sets.
pub fn predicate_similarity(p1: &str, p2: &str, embeddings: Option<&Embeddings>) -> f64 {
    let t1 = tokenize_predicate(p1);
    let t2 = tokenize_predicate(p2);
    if let Some(score) = embeddings.and_then(|e| e.cosine_of(&t1, &t2)) {
        return score;
    }
    let a: BTreeSet<&String> = t1.iter().collect();
    let b: BTreeSet<&String> = t2.iter().collect();
    jaccard(&a, &b)
}

/// Score used to rank predicates. Ordered by score, then by overlap count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub score: f64,
    pub overlap: usize,
}

impl Similarity {
    pub fn rank_cmp(&self, other: &Similarity) -> std::cmp::Ordering {
        self.score
            .total_cmp(&other.score)
            .then(self.overlap.cmp(&other.overlap))
    }
}

/// Similarity between question content words and a predicate name.
///
/// Words are compared through their stems so that `played` meets
/// `footballPlayer`. With embeddings the score is the cosine of mean
/// vectors; otherwise the Jaccard overlap of stem sets.
pub fn content_similarity(
    words: &[String],
    predicate: &str,
    embeddings: Option<&Embeddings>,
) -> Similarity {
    let predicate_tokens = tokenize_predicate(predicate);
    let q: BTreeSet<String> = words.iter().map(|w| stem(w)).collect();
    let p: BTreeSet<String> = predicate_tokens.iter().map(|w| stem(w)).collect();
    let overlap = q.intersection(&p).count();
    let score = embeddings
        .and_then(|e| e.cosine_of(words, &predicate_tokens))
        .unwrap_or_else(|| jaccard(&q, &p));
    Similarity { score, overlap }
}
