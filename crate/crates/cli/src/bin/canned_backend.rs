//! Stand-in external engine: answers sub-questions from a JSONL file of
//! canned replies, speaking the line-delimited JSON backend protocol.
//!
//! Each file line is `{"question": "...", "kind": "ENTITY", "answers": [...]}`.
//! Unknown questions get an `"error"` reply.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Deserialize;
use tempqa::external::{WireRequest, WireResponse};
use tempqa::kb::{AnswerKind, BackendAnswer};

#[derive(Debug, Deserialize)]
struct Canned {
    question: String,
    kind: AnswerKind,
    answers: Vec<BackendAnswer>,
}

fn load(path: &str) -> Result<HashMap<(String, AnswerKind), Vec<BackendAnswer>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let mut table = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let c: Canned = serde_json::from_str(line).with_context(|| format!("{path}:{}", n + 1))?;
        table.insert((c.question.to_lowercase(), c.kind), c.answers);
    }
    Ok(table)
}

fn serve(path: &str) -> Result<()> {
    let table = load(path)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in io::stdin().lock().lines() {
        let line = line?;
        let request: WireRequest = serde_json::from_str(&line).context("malformed request")?;
        let key = (request.question.to_lowercase(), request.kind);
        let response = match table.get(&key) {
            Some(answers) => WireResponse {
                id: request.id,
                answers: answers.clone(),
                error: None,
            },
            None => WireResponse {
                id: request.id,
                answers: Vec::new(),
                error: Some(format!("no canned answer for {:?}", request.question)),
            },
        };
        serde_json::to_writer(&mut out, &response)?;
        writeln!(out)?;
        out.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match args.as_slice() {
        [path] => serve(path),
        _ => Err(anyhow::anyhow!("usage: canned-backend <answers.jsonl>")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("canned-backend: {e:#}");
            ExitCode::from(1)
        }
    }
}
