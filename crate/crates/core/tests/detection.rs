use tempqa::kb::{KbStore, TOY_KB};
use tempqa::Pipeline;

const LABELED: &str = include_str!("../data/detection.tsv");

fn labeled() -> Vec<(&'static str, bool)> {
    LABELED
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (q, label) = l.split_once('\t').unwrap();
            let temporal = match label {
                "TEMPORAL" => true,
                "NON_TEMPORAL" => false,
                other => panic!("bad label {other}"),
            };
            (q, temporal)
        })
        .collect()
}

#[test]
fn labeled_set_is_classified_exactly() {
    let p = Pipeline::with_store(
        KbStore::parse(TOY_KB).unwrap(),
        None,
        "2018-01-15".parse().unwrap(),
    );
    let set = labeled();
    assert_eq!(set.len(), 30);
    assert_eq!(set.iter().filter(|(_, t)| *t).count(), 20);
    let wrong: Vec<String> = set
        .iter()
        .filter_map(|&(q, expected)| {
            let d = p.detect(q);
            (d.is_temporal != expected)
                .then(|| format!("{q}: expected {expected}, cues {:?}", d.cues))
        })
        .collect();
    assert!(wrong.is_empty(), "{}", wrong.join("\n"));
}
