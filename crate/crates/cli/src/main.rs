use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tempqa::eval::{load_benchmark, run_benchmark, EvalError};
use tempqa::model::{AnswerValue, TimePoint};
use tempqa::pipeline::{BackendSelector, PipelineConfig, PipelineError, DEFAULT_REFERENCE_DATE};
use tempqa::{DecompositionResult, DetectionResult, Pipeline};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tempqa",
    version,
    about = "Answer temporal questions over a knowledge base"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// KB file; the bundled toy KB when omitted.
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    /// Word vectors used to compare predicates with question words.
    #[arg(long, global = true)]
    embeddings: Option<PathBuf>,
    /// Date that relative expressions such as "last year" resolve against.
    #[arg(long, global = true, default_value = DEFAULT_REFERENCE_DATE)]
    reference_date: TimePoint,
    /// `builtin` or `cmd:<program> [args]`.
    #[arg(long, global = true, default_value = "builtin")]
    backend: BackendSelector,
    #[arg(long, global = true)]
    signals: Option<PathBuf>,
    #[arg(long, global = true)]
    ordinals: Option<PathBuf>,
    /// Extra event entities in the KB file format.
    #[arg(long, global = true)]
    events: Option<PathBuf>,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify questions as temporal or not.
    Detect(Questions),
    /// Split temporal questions into rewritten sub-questions.
    Decompose(Questions),
    /// Answer questions end to end.
    Answer(Questions),
    /// Score the pipeline on a benchmark file.
    Eval {
        #[arg(long)]
        benchmark: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Questions {
    /// Questions to process; read one per line from stdin when none are given.
    questions: Vec<String>,
}

impl Questions {
    fn resolve(self) -> io::Result<Vec<String>> {
        if !self.questions.is_empty() {
            return Ok(self.questions);
        }
        let mut out = Vec::new();
        for line in io::stdin().lock().lines() {
            let line = line?;
            if !line.trim().is_empty() {
                out.push(line.trim().to_string());
            }
        }
        Ok(out)
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::other)?;
    writeln!(out)
}

fn join_values(values: &[AnswerValue]) -> String {
    if values.is_empty() {
        return "-".to_string();
    }
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("|")
}

fn detection_line(question: &str, d: &DetectionResult) -> String {
    let cues = if d.cues.is_empty() {
        "-".to_string()
    } else {
        d.cues
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{question}\ttemporal={}\tcues={cues}", d.is_temporal)
}

fn decomposition_block(question: &str, d: &DecompositionResult) -> String {
    let or_dash = |s: Option<String>| s.unwrap_or_else(|| "-".to_string());
    let mut lines = vec![
        format!("question: {question}"),
        format!("case: {}", d.case_used),
        format!("relation: {}", or_dash(d.relation.map(|r| r.to_string()))),
        format!("ordinal: {}", or_dash(d.ordinal.map(|o| o.to_string()))),
    ];
    lines.extend(
        d.nontemporal_subquestions
            .iter()
            .map(|s| format!("sub1: {s}")),
    );
    lines.push(format!("sub2: {}", or_dash(d.temporal_subquestion.clone())));
    for c in &d.explicit_constraints {
        lines.push(format!("constraint: {} {}", c.relation, c.interval));
    }
    lines.join("\n")
}

#[derive(Serialize)]
struct DecomposeRecord<'a> {
    question: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<&'a DecompositionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let config = PipelineConfig {
        kb: g.kb,
        embeddings: g.embeddings,
        reference_date: g.reference_date,
        signals: g.signals,
        ordinals: g.ordinals,
        events: g.events,
        backend: g.backend,
    };
    let pipeline = Pipeline::from_config(&config)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Detect(questions) => {
            for q in questions.resolve()? {
                let d = pipeline.detect(&q);
                if g.json {
                    json_line(
                        &mut out,
                        &serde_json::json!({ "question": q, "detection": d }),
                    )?;
                } else {
                    writeln!(out, "{}", detection_line(&q, &d))?;
                }
            }
        }
        Command::Decompose(questions) => {
            let mut failed = 0;
            for (n, q) in questions.resolve()?.iter().enumerate() {
                let result = pipeline.decompose(q);
                if let Err(e) = &result {
                    log::warn!("{q}: {e}");
                    failed += 1;
                }
                if g.json {
                    let record = DecomposeRecord {
                        question: q,
                        decomposition: result.as_ref().ok(),
                        error: result.as_ref().err().map(ToString::to_string),
                    };
                    json_line(&mut out, &record)?;
                } else {
                    if n > 0 {
                        writeln!(out)?;
                    }
                    match &result {
                        Ok(d) => writeln!(out, "{}", decomposition_block(q, d))?,
                        Err(e) => writeln!(out, "question: {q}\nerror: {e}")?,
                    }
                }
            }
            if failed > 0 {
                return Err(Failure::Data(format!(
                    "{failed} question(s) could not be decomposed"
                )));
            }
        }
        Command::Answer(questions) => {
            for q in questions.resolve()? {
                let outcome = pipeline.answer_question(&q);
                if g.json {
                    json_line(&mut out, &outcome)?;
                } else {
                    writeln!(out, "{q}\t{}", join_values(&outcome.answers.values()))?;
                    for d in &outcome.diagnostics {
                        eprintln!("{q}: {d}");
                    }
                }
            }
        }
        Command::Eval { benchmark } => {
            let items = load_benchmark(&benchmark)?;
            let report = run_benchmark(&pipeline, &items)?;
            if g.json {
                serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::other)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", report.to_table())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
