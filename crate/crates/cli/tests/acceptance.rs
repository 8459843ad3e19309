//! Acceptance suite: one check per criterion, each printing a PASS/FAIL line
//! with its runtime. Run with `cargo test -p tempqa-cli --test acceptance -- --nocapture`
//! to see the report.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use tempqa::eval::{
    evaluate, parse_benchmark, run_benchmark, BenchmarkItem, Category, Prediction, Scores,
};
use tempqa::external::CommandBackend;
use tempqa::kb::{KbStore, TOY_KB};
use tempqa::model::{AllenRelation, Interval, OverlapRow, TimePoint};
use tempqa::reasoner::{allen_relation, satisfies};
use tempqa::timex::{EventDictionary, Tagger};
use tempqa::{AnswerValue, Case, Pipeline, TemporalRelation};

const TOY_BENCH: &str = include_str!("../../core/data/toy.bench");
const DETECTION_SET: &str = include_str!("../../core/data/detection.tsv");
const DATE_TABLE: &str = include_str!("../../../docs/date-formats.md");
const METRIC_TOLERANCE: f64 = 1e-9;

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn pipeline() -> Pipeline {
    Pipeline::with_store(
        KbStore::parse(TOY_KB).unwrap(),
        None,
        "2018-01-15".parse().unwrap(),
    )
}

type Check = Result<(), String>;

struct Criterion {
    name: &'static str,
    check: fn() -> Check,
    limit: Duration,
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

// 1
fn rewrite_examples() -> Check {
    let cases = [
        (
            "where did neymar play before he joined barcelona?",
            "where did neymar play?",
            "when neymar joined barcelona?",
            Case::Case1,
        ),
        (
            "where did neymar live before playing for clubs?",
            "where did neymar live?",
            "when neymar playing for clubs?",
            Case::Case2,
        ),
        (
            "who was the brazil team captain before neymar?",
            "who was the brazil team captain?",
            "when neymar was the brazil team captain?",
            Case::Case3,
        ),
        (
            "where did neymar play during south africa world cup?",
            "where did neymar play?",
            "when did south africa world cup happen?",
            Case::Case4,
        ),
    ];
    let p = pipeline();
    let mut passed = 0;
    for (question, sub1, sub2, case) in cases {
        let d = p
            .decompose(question)
            .map_err(|e| format!("{question}: {e}"))?;
        let got1 = d.nontemporal_subquestions.join(" ").to_lowercase();
        let got2 = d
            .temporal_subquestion
            .clone()
            .unwrap_or_default()
            .to_lowercase();
        ensure(got1 == sub1 && got2 == sub2 && d.case_used == case, || {
            format!("{question}: got ({got1:?}, {got2:?}, {})", d.case_used)
        })?;
        passed += 1;
    }
    ensure(passed == 4, || format!("{passed}/4"))
}

/// Day `k` of the test grid.
fn day(k: i64) -> TimePoint {
    TimePoint::day(2000, 1, 1 + k as u32).unwrap()
}

/// Integer interval with `None` for an open side.
type Bounds = (Option<i64>, Option<i64>);

fn grid_intervals() -> Vec<Bounds> {
    let mut out = Vec::new();
    for a in 0..=6 {
        for b in a..=6 {
            out.push((Some(a), Some(b)));
        }
        out.push((Some(a), None));
        out.push((None, Some(a)));
    }
    out
}

fn to_interval((a, b): Bounds) -> Interval {
    Interval::new(a.map(day), b.map(day)).unwrap()
}

fn table_rows_oracle(relation: TemporalRelation, ans: Bounds, cons: Bounds) -> bool {
    let lo = |x: Option<i64>| x.unwrap_or(i64::MIN);
    let hi = |x: Option<i64>| x.unwrap_or(i64::MAX);
    let (ba, ea, bc, ec) = (lo(ans.0), hi(ans.1), lo(cons.0), hi(cons.1));
    match relation {
        TemporalRelation::Before => ea <= bc,
        TemporalRelation::After => ba >= ec,
        TemporalRelation::Overlap(OverlapRow::DuringWhileWhen) => ba <= ec && ec <= ea,
        TemporalRelation::Overlap(OverlapRow::SinceUntilIn) => ba <= bc && bc <= ea,
        TemporalRelation::Overlap(OverlapRow::SameTimeAs) => bc <= ba && ba <= ea && ea <= ec,
    }
}

// 2
fn constraint_rows() -> Check {
    let grid = grid_intervals();
    let mut checked = 0usize;
    for relation in TemporalRelation::ALL {
        for &a in &grid {
            for &c in &grid {
                let got = satisfies(relation, &to_interval(a), &to_interval(c));
                let want = table_rows_oracle(relation, a, c);
                ensure(got == want, || {
                    format!("{relation} {a:?} {c:?}: got {got}, oracle {want}")
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked == 5 * grid.len() * grid.len(), || {
        format!("checked {checked}")
    })
}

fn allen_oracle((a1, a2): (i64, i64), (b1, b2): (i64, i64)) -> Vec<AllenRelation> {
    use AllenRelation::*;
    let table = [
        (Before, a2 < b1),
        (After, b2 < a1),
        (Meets, a2 == b1),
        (MetBy, b2 == a1),
        (Overlaps, a1 < b1 && b1 < a2 && a2 < b2),
        (OverlappedBy, b1 < a1 && a1 < b2 && b2 < a2),
        (Starts, a1 == b1 && a2 < b2),
        (StartedBy, a1 == b1 && b2 < a2),
        (During, b1 < a1 && a2 < b2),
        (Contains, a1 < b1 && b2 < a2),
        (Finishes, a2 == b2 && b1 < a1),
        (FinishedBy, a2 == b2 && a1 < b1),
        (Equal, a1 == b1 && a2 == b2),
    ];
    table
        .into_iter()
        .filter(|(_, holds)| *holds)
        .map(|(r, _)| r)
        .collect()
}

// 3
fn allen_exhaustive() -> Check {
    let closed: Vec<(i64, i64)> = (0..=6)
        .flat_map(|a| (a + 1..=6).map(move |b| (a, b)))
        .collect();
    for &x in &closed {
        for &y in &closed {
            let holding = allen_oracle(x, y);
            ensure(holding.len() == 1, || {
                format!("{x:?} {y:?}: oracle found {holding:?}")
            })?;
            let ix = Interval::closed(day(x.0), day(x.1)).unwrap();
            let iy = Interval::closed(day(y.0), day(y.1)).unwrap();
            let got = allen_relation(&ix, &iy).map_err(|e| e.to_string())?;
            ensure(got == holding[0], || {
                format!("{x:?} {y:?}: got {got:?}, oracle {:?}", holding[0])
            })?;
        }
    }
    Ok(())
}

// 4
fn toy_benchmark() -> Check {
    let oracle = Command::new("python3")
        .arg(workspace_root().join("scripts/oracle_gold.py"))
        .arg("--check")
        .output()
        .map_err(|e| format!("cannot run oracle script: {e}"))?;
    ensure(oracle.status.success(), || {
        format!(
            "benchmark gold differs from oracle: {}",
            String::from_utf8_lossy(&oracle.stderr)
        )
    })?;
    let items = parse_benchmark(TOY_BENCH).map_err(|e| e.to_string())?;
    ensure(items.len() == 16, || format!("{} questions", items.len()))?;
    for category in Category::ALL {
        let n = items.iter().filter(|i| i.category == category).count();
        ensure(n == 4, || format!("{category}: {n} questions"))?;
    }
    let report = run_benchmark(&pipeline(), &items).map_err(|e| e.to_string())?;
    ensure(report.aggregate.f1 == 1.0, || {
        let misses: Vec<String> = report
            .questions
            .iter()
            .filter(|q| q.scores.f1 < 1.0)
            .map(|q| format!("{} -> {:?}", q.question, q.predicted))
            .collect();
        format!(
            "aggregate F1 {}; {}",
            report.aggregate.f1,
            misses.join("; ")
        )
    })
}

// 5
fn normalization() -> Check {
    let tagger = Tagger::new(EventDictionary::new());
    let spans = tagger.tag("May 2nd, 2016");
    let interval = spans
        .first()
        .and_then(|s| s.normalized)
        .ok_or("no normalized span")?;
    let expected = TimePoint::day(2016, 5, 2).unwrap();
    ensure(
        spans.len() == 1 && interval.begin == Some(expected) && interval.end == Some(expected),
        || format!("got {spans:?}"),
    )?;
    let reference: TimePoint = "2018-01-15".parse().unwrap();
    let mut rows = 0;
    for line in DATE_TABLE
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| input"))
    {
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        let (input, kind, normalized) = (cells[0], cells[1], cells[2]);
        let spans = tagger.tag_with_reference(input, reference);
        ensure(spans.len() == 1 && spans[0].surface == input, || {
            format!("{input}: {spans:?}")
        })?;
        let got_kind = serde_json::to_value(spans[0].timex_type).unwrap();
        let got = spans[0].normalized.map_or("-".to_string(), |i| {
            format!("[{}, {}]", i.lower(), i.upper())
        });
        ensure(got_kind == kind && got == normalized, || {
            format!("{input}: got {got_kind} {got}, documented {kind} {normalized}")
        })?;
        rows += 1;
    }
    ensure(rows >= 30, || format!("only {rows} documented rows"))
}

// 6
fn detection_set() -> Check {
    let p = pipeline();
    let mut total = 0;
    let mut temporal = 0;
    for line in DETECTION_SET
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let (question, label) = line.split_once('\t').ok_or("malformed line")?;
        let expected = label == "TEMPORAL";
        let got = p.detect(question);
        ensure(got.is_temporal == expected, || {
            format!("{question}: expected {label}, cues {:?}", got.cues)
        })?;
        total += 1;
        temporal += expected as usize;
    }
    for required in [
        "Which teams did Neymar play for?",
        "After whom did Neymar's sister choose her last name?",
        "Which teams did Neymar play for before joining PSG?",
        "Which team did Neymar play for before joining PSG?",
    ] {
        ensure(DETECTION_SET.contains(required), || {
            format!("missing {required:?}")
        })?;
    }
    ensure(total == 30 && temporal == 20, || {
        format!("{total} questions, {temporal} temporal")
    })
}

// 7
fn metric_fixture() -> Check {
    let e = |id: &str| AnswerValue::Entity(id.to_string());
    let d = |s: &str| AnswerValue::parse(s);
    let fixture: Vec<(Category, Vec<AnswerValue>, Vec<AnswerValue>)> = vec![
        (Category::Explicit, vec![e("a"), e("b")], vec![e("a")]),
        (Category::Explicit, vec![e("a")], vec![e("a")]),
        (Category::Implicit, vec![], vec![e("a")]),
        (
            Category::Implicit,
            vec![e("a"), e("b"), e("c")],
            vec![e("a"), e("b")],
        ),
        (
            Category::Ordinal,
            vec![e("a")],
            vec![e("a"), e("b"), e("c"), e("d")],
        ),
        (
            Category::TemporalAnswer,
            vec![d("2017-08-03"), d("2017")],
            vec![d("2017-08-03")],
        ),
    ];
    let gold: Vec<BenchmarkItem> = fixture
        .iter()
        .enumerate()
        .map(|(i, (category, _, gold))| BenchmarkItem {
            id: i + 1,
            question: format!("q{}", i + 1),
            gold: gold.clone(),
            category: *category,
        })
        .collect();
    let predictions: Vec<Prediction> = fixture
        .iter()
        .enumerate()
        .map(|(i, (_, predicted, _))| Prediction {
            id: i + 1,
            answers: predicted.clone(),
            diagnostics: Vec::new(),
        })
        .collect();
    let report = evaluate(&predictions, &gold).map_err(|e| e.to_string())?;

    // worked by hand from |pred ∩ gold| / |pred| and / |gold|
    let per_question = [
        (0.5, 1.0, 2.0 / 3.0),
        (1.0, 1.0, 1.0),
        (0.0, 0.0, 0.0),
        (2.0 / 3.0, 1.0, 0.8),
        (1.0, 0.25, 0.4),
        (0.5, 1.0, 2.0 / 3.0),
    ];
    let per_category = [
        (Category::Explicit, (0.75, 1.0, 5.0 / 6.0)),
        (Category::Implicit, (1.0 / 3.0, 0.5, 0.4)),
        (Category::TemporalAnswer, (0.5, 1.0, 2.0 / 3.0)),
        (Category::Ordinal, (1.0, 0.25, 0.4)),
    ];
    let aggregate = (31.0 / 48.0, 0.6875, 0.575);

    let close = |s: Scores, (p, r, f): (f64, f64, f64)| {
        (s.precision - p).abs() < METRIC_TOLERANCE
            && (s.recall - r).abs() < METRIC_TOLERANCE
            && (s.f1 - f).abs() < METRIC_TOLERANCE
    };
    for (q, want) in report.questions.iter().zip(per_question) {
        ensure(close(q.scores, want), || {
            format!("question {}: {:?} vs {want:?}", q.id, q.scores)
        })?;
    }
    for (category, want) in per_category {
        let got = report
            .categories
            .iter()
            .find(|c| c.category == category)
            .ok_or_else(|| format!("no {category} row"))?;
        ensure(close(got.scores, want), || {
            format!("{category}: {:?} vs {want:?}", got.scores)
        })?;
    }
    ensure(close(report.aggregate, aggregate), || {
        format!("aggregate {:?} vs {aggregate:?}", report.aggregate)
    })
}

fn eval_json() -> Result<Vec<u8>, String> {
    let bench = workspace_root().join("crates/core/data/toy.bench");
    let out = Command::new(env!("CARGO_BIN_EXE_tempqa"))
        .args(["--json", "eval", "--benchmark"])
        .arg(bench)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    Ok(out.stdout)
}

// 8
fn determinism() -> Check {
    let first = eval_json()?;
    let second = eval_json()?;
    ensure(!first.is_empty() && first == second, || {
        "eval --json output differs between runs".into()
    })
}

// 9
fn backend_pluggability() -> Check {
    let questions = [
        "which teams did neymar play for before joining psg?",
        "who was the brazil team captain before neymar?",
        "when did neymar join psg?",
    ];
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/stub_answers.jsonl");
    let command = format!(
        "{} {}",
        env!("CARGO_BIN_EXE_canned-backend"),
        fixture.display()
    );
    let stub = CommandBackend::spawn(&command).map_err(|e| e.to_string())?;
    let builtin = pipeline();
    let external = pipeline().with_backend(Arc::new(stub));
    for q in questions {
        let a = builtin.answer_question(q).answers.values();
        let b = external.answer_question(q).answers.values();
        ensure(!a.is_empty() && a == b, || {
            format!("{q}: builtin {a:?}, stub {b:?}")
        })?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        Criterion {
            name: "1 rewrite examples reproduce",
            check: rewrite_examples,
            limit: Duration::from_secs(1),
        },
        Criterion {
            name: "2 constraint rows match oracle",
            check: constraint_rows,
            limit: Duration::from_secs(1),
        },
        Criterion {
            name: "3 allen relations exhaustive",
            check: allen_exhaustive,
            limit: Duration::from_secs(1),
        },
        Criterion {
            name: "4 toy benchmark aggregate F1 = 1.0",
            check: toy_benchmark,
            limit: Duration::from_secs(5),
        },
        Criterion {
            name: "5 date normalization",
            check: normalization,
            limit: Duration::MAX,
        },
        Criterion {
            name: "6 detection mini-set",
            check: detection_set,
            limit: Duration::MAX,
        },
        Criterion {
            name: "7 metric fixture",
            check: metric_fixture,
            limit: Duration::MAX,
        },
        Criterion {
            name: "8 eval --json determinism",
            check: determinism,
            limit: Duration::MAX,
        },
        Criterion {
            name: "9 backend pluggability",
            check: backend_pluggability,
            limit: Duration::MAX,
        },
    ];
    let mut failures = Vec::new();
    for Criterion { name, check, limit } in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > limit {
            result = Err(format!("took {elapsed:?}, limit {limit:?}"));
        }
        match &result {
            Ok(()) => println!("PASS  {name}  ({:.1} ms)", elapsed.as_secs_f64() * 1e3),
            Err(e) => {
                println!("FAIL  {name}  ({:.1} ms): {e}", elapsed.as_secs_f64() * 1e3);
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
