//! In-memory temporal knowledge base, its line-oriented file format, the
//! naive question-answering backend and time-scope retrieval.
//!
//! File format, one record per line, fields separated by a single tab:
//!
//! ```text
//! E  entity_id  surface[|surface...]  type[,type...]     (type may be -)
//! P  predicate  temporal:{yes|no}     role:{begin|end|point|-}
//! F  subject    predicate  object     compound_id_or_-
//! ```
//!
//! Objects of temporal predicates are ISO dates (`YYYY`, `YYYY-MM`,
//! `YYYY-MM-DD`), quoted objects are literals, anything else is an entity
//! id. Blank lines and lines starting with `#` are ignored.

mod backend;
mod scope;
mod similarity;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EntitySpan, Fact, FactObject, TimePoint};

pub use backend::{
    answer_subquestion, question_content_words, AnswerKind, Backend, BackendAnswer, BackendError,
    BackendQuery, BackendResult, NaiveBackend,
};
pub use scope::{entity_own_scope, retrieve_time_scope, ScopeError};
pub use similarity::{
    content_similarity, jaccard, pair_key, predicate_similarity, tokenize_predicate, Embeddings,
    EmbeddingsError, Similarity, PREDICATE_STOP_TOKENS, ROLE_TOKENS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid knowledge base ({} error(s)): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<LineError>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    Begin,
    End,
    Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityInfo {
    pub id: String,
    pub surface_forms: Vec<String>,
    pub types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateInfo {
    pub name: String,
    pub temporal: bool,
    /// Role as declared in the file.
    pub declared_role: Option<Role>,
}

const BEGIN_SUFFIXES: &[&str] = &[
    "joined", "start", "started", "from", "begin", "began", "since",
];
const END_SUFFIXES: &[&str] = &["left", "end", "ended", "to", "until"];

impl PredicateInfo {
    /// Declared role, or for temporal predicates one inferred from the last
    /// name token: `joined`/`start`/`from` begin, `left`/`end`/`to` end,
    /// anything else is a point.
    pub fn role(&self) -> Option<Role> {
        if !self.temporal {
            return None;
        }
        if self.declared_role.is_some() {
            return self.declared_role;
        }
        let last_segment = self.name.rsplit('.').next().unwrap_or(&self.name);
        let tokens = tokenize_predicate(last_segment);
        if tokens.iter().any(|t| BEGIN_SUFFIXES.contains(&t.as_str())) {
            Some(Role::Begin)
        } else if tokens.iter().any(|t| END_SUFFIXES.contains(&t.as_str())) {
            Some(Role::End)
        } else {
            Some(Role::Point)
        }
    }
}

/// Indexed, immutable-after-load fact store.
#[derive(Debug, Clone, Default)]
pub struct KbStore {
    entities: Vec<EntityInfo>,
    entity_index: HashMap<String, usize>,
    predicates: Vec<PredicateInfo>,
    predicate_index: HashMap<String, usize>,
    facts: Vec<Fact>,
    by_subject: HashMap<String, Vec<usize>>,
    by_predicate: HashMap<String, Vec<usize>>,
    by_object: HashMap<String, Vec<usize>>,
    by_compound: BTreeMap<String, Vec<usize>>,
    surfaces: HashMap<String, Vec<usize>>,
    longest_surface: usize,
}

fn field_count_error(line: usize, kind: &str, want: usize, got: usize) -> LineError {
    LineError {
        line,
        message: format!("{kind} record needs {want} fields, found {got}"),
    }
}

impl KbStore {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, KbError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses and validates a KB file, collecting every error with its line.
    pub fn parse(text: &str) -> Result<Self, KbError> {
        let mut errors = Vec::new();
        let mut entities = Vec::new();
        let mut predicates = Vec::new();
        let mut raw_facts: Vec<(usize, Vec<&str>)> = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').collect();
            match fields[0] {
                "E" => {
                    if fields.len() != 4 {
                        errors.push(field_count_error(line, "E", 4, fields.len()));
                        continue;
                    }
                    let surface_forms: Vec<String> = fields[2]
                        .split('|')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect();
                    let types: Vec<String> = if fields[3] == "-" {
                        Vec::new()
                    } else {
                        fields[3].split(',').map(|t| t.trim().to_string()).collect()
                    };
                    if fields[1].is_empty() {
                        errors.push(LineError {
                            line,
                            message: "empty entity id".into(),
                        });
                        continue;
                    }
                    entities.push((
                        line,
                        EntityInfo {
                            id: fields[1].to_string(),
                            surface_forms,
                            types,
                        },
                    ));
                }
                "P" => {
                    if fields.len() != 4 {
                        errors.push(field_count_error(line, "P", 4, fields.len()));
                        continue;
                    }
                    let temporal = match fields[2] {
                        "temporal:yes" => true,
                        "temporal:no" => false,
                        other => {
                            errors.push(LineError {
                                line,
                                message: format!(
                                    "expected temporal:yes or temporal:no, found {other:?}"
                                ),
                            });
                            continue;
                        }
                    };
                    let declared_role = match fields[3] {
                        "role:begin" => Some(Role::Begin),
                        "role:end" => Some(Role::End),
                        "role:point" => Some(Role::Point),
                        "role:-" => None,
                        other => {
                            errors.push(LineError {
                                line,
                                message: format!(
                                    "expected role:begin|end|point|-, found {other:?}"
                                ),
                            });
                            continue;
                        }
                    };
                    if declared_role.is_some() && !temporal {
                        errors.push(LineError {
                            line,
                            message: format!(
                                "non-temporal predicate {} cannot have a role",
                                fields[1]
                            ),
                        });
                        continue;
                    }
                    predicates.push((
                        line,
                        PredicateInfo {
                            name: fields[1].to_string(),
                            temporal,
                            declared_role,
                        },
                    ));
                }
                "F" => {
                    if fields.len() != 5 {
                        errors.push(field_count_error(line, "F", 5, fields.len()));
                        continue;
                    }
                    raw_facts.push((line, fields));
                }
                other => errors.push(LineError {
                    line,
                    message: format!("unknown record kind {other:?}"),
                }),
            }
        }

        let mut store = KbStore::default();
        for (line, entity) in entities {
            if store.entity_index.contains_key(&entity.id) {
                errors.push(LineError {
                    line,
                    message: format!("duplicate entity {}", entity.id),
                });
                continue;
            }
            store.add_entity(entity);
        }
        for (line, predicate) in predicates {
            if store.predicate_index.contains_key(&predicate.name) {
                errors.push(LineError {
                    line,
                    message: format!("duplicate predicate {}", predicate.name),
                });
                continue;
            }
            store
                .predicate_index
                .insert(predicate.name.clone(), store.predicates.len());
            store.predicates.push(predicate);
        }

        let mut fact_lines = Vec::new();
        for (line, fields) in raw_facts {
            match store.check_fact(&fields) {
                Ok(fact) => {
                    fact_lines.push(line);
                    store.add_fact(fact);
                }
                Err(message) => errors.push(LineError { line, message }),
            }
        }
        for (compound, members) in &store.by_compound {
            if members.len() < 2 {
                errors.push(LineError {
                    line: fact_lines[members[0]],
                    message: format!("compound {compound} has fewer than 2 facts"),
                });
            }
        }

        if errors.is_empty() {
            Ok(store)
        } else {
            errors.sort_by_key(|e| e.line);
            Err(KbError::Invalid(errors))
        }
    }

    fn check_fact(&self, fields: &[&str]) -> Result<Fact, String> {
        let (subject, predicate, object, compound) = (fields[1], fields[2], fields[3], fields[4]);
        if !self.entity_index.contains_key(subject) {
            return Err(format!("unknown subject entity {subject}"));
        }
        let info = self
            .predicate(predicate)
            .ok_or_else(|| format!("undeclared predicate {predicate}"))?;
        let object = if info.temporal {
            let point: TimePoint = object.parse().map_err(|_| {
                format!("temporal predicate {predicate} needs an ISO date, found {object:?}")
            })?;
            FactObject::Date(point)
        } else if object.len() >= 2 && object.starts_with('"') && object.ends_with('"') {
            FactObject::Literal(object[1..object.len() - 1].to_string())
        } else if self.entity_index.contains_key(object) {
            FactObject::Entity(object.to_string())
        } else if object.parse::<TimePoint>().is_ok() {
            return Err(format!("date object on non-temporal predicate {predicate}"));
        } else {
            return Err(format!("unknown object entity {object}"));
        };
        let compound = match compound {
            "-" => None,
            "" => return Err("empty compound id".into()),
            id => Some(id.to_string()),
        };
        Ok(Fact {
            subject: subject.to_string(),
            predicate: predicate.to_string(),
            object,
            compound,
        })
    }

    fn add_entity(&mut self, entity: EntityInfo) {
        let idx = self.entities.len();
        for surface in &entity.surface_forms {
            let key = crate::timex::surface_key(surface);
            self.longest_surface = self.longest_surface.max(key.split(' ').count());
            let ids = self.surfaces.entry(key).or_default();
            if !ids.contains(&idx) {
                ids.push(idx);
            }
        }
        self.entity_index.insert(entity.id.clone(), idx);
        self.entities.push(entity);
    }

    fn add_fact(&mut self, fact: Fact) {
        let idx = self.facts.len();
        self.by_subject
            .entry(fact.subject.clone())
            .or_default()
            .push(idx);
        self.by_predicate
            .entry(fact.predicate.clone())
            .or_default()
            .push(idx);
        if let FactObject::Entity(object) = &fact.object {
            self.by_object.entry(object.clone()).or_default().push(idx);
        }
        if let Some(compound) = &fact.compound {
            self.by_compound
                .entry(compound.clone())
                .or_default()
                .push(idx);
        }
        self.facts.push(fact);
    }

    pub fn entities(&self) -> &[EntityInfo] {
        &self.entities
    }

    pub fn entity(&self, id: &str) -> Option<&EntityInfo> {
        self.entity_index.get(id).map(|&i| &self.entities[i])
    }

    pub fn predicates(&self) -> &[PredicateInfo] {
        &self.predicates
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateInfo> {
        self.predicate_index.get(name).map(|&i| &self.predicates[i])
    }

    pub fn is_temporal(&self, predicate: &str) -> bool {
        self.predicate(predicate).is_some_and(|p| p.temporal)
    }

    pub fn role(&self, predicate: &str) -> Option<Role> {
        self.predicate(predicate).and_then(PredicateInfo::role)
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    fn select<'a>(
        &'a self,
        index: &'a HashMap<String, Vec<usize>>,
        key: &str,
    ) -> impl Iterator<Item = &'a Fact> + 'a {
        index
            .get(key)
            .into_iter()
            .flatten()
            .map(move |&i| &self.facts[i])
    }

    pub fn facts_by_subject(&self, subject: &str) -> impl Iterator<Item = &Fact> {
        self.select(&self.by_subject, subject)
    }

    pub fn facts_by_predicate(&self, predicate: &str) -> impl Iterator<Item = &Fact> {
        self.select(&self.by_predicate, predicate)
    }

    /// Facts whose object is the given entity.
    pub fn facts_by_object(&self, object: &str) -> impl Iterator<Item = &Fact> {
        self.select(&self.by_object, object)
    }

    pub fn compound(&self, id: &str) -> impl Iterator<Item = &Fact> {
        self.by_compound
            .get(id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.facts[i])
    }

    pub fn compound_ids(&self) -> impl Iterator<Item = &String> {
        self.by_compound.keys()
    }

    /// Compounds in which `entity` occurs as subject or entity object of a
    /// member fact, in id order.
    pub fn compounds_mentioning(&self, entity: &str) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .facts_by_subject(entity)
            .chain(self.facts_by_object(entity))
            .filter_map(|f| f.compound.as_deref())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn compound_mentions(&self, compound: &str, entity: &str) -> bool {
        self.compound(compound).any(|f| {
            f.subject == entity || matches!(&f.object, FactObject::Entity(o) if o == entity)
        })
    }

    /// Longest-match entity linking over lower-cased words. Ambiguous
    /// surface forms resolve to the entity loaded first.
    pub fn link_entities(&self, words: &[String]) -> Vec<EntitySpan> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let max = self.longest_surface.min(words.len() - i);
            let hit = (1..=max).rev().find_map(|n| {
                self.surfaces
                    .get(&words[i..i + n].join(" "))
                    .map(|ids| (n, ids[0]))
            });
            match hit {
                Some((n, idx)) => {
                    spans.push(EntitySpan {
                        start: i,
                        end: i + n,
                        entity: Some(self.entities[idx].id.clone()),
                    });
                    i += n;
                }
                None => i += 1,
            }
        }
        spans
    }

    /// Writes the store back in the KB file format.
    pub fn to_kb_string(&self) -> String {
        let mut out = String::new();
        for e in &self.entities {
            let types = if e.types.is_empty() {
                "-".to_string()
            } else {
                e.types.join(",")
            };
            let _ = writeln!(out, "E\t{}\t{}\t{}", e.id, e.surface_forms.join("|"), types);
        }
        for p in &self.predicates {
            let role = match p.declared_role {
                Some(Role::Begin) => "begin",
                Some(Role::End) => "end",
                Some(Role::Point) => "point",
                None => "-",
            };
            let temporal = if p.temporal { "yes" } else { "no" };
            let _ = writeln!(out, "P\t{}\ttemporal:{temporal}\trole:{role}", p.name);
        }
        for f in &self.facts {
            let _ = writeln!(
                out,
                "F\t{}\t{}\t{}\t{}",
                f.subject,
                f.predicate,
                f.object,
                f.compound.as_deref().unwrap_or("-")
            );
        }
        out
    }
}

/// The toy knowledge base shipped with the crate.
pub const TOY_KB: &str = include_str!("../../data/toy.kb");

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: &str = "\
# people and clubs
E\tneymar\tNeymar|Neymar Jr\tperson
E\tbarca\tBarcelona|FC Barcelona\tfootballClub
P\tfootballPlayer.team\ttemporal:no\trole:-
P\tfootballPlayer.team.joinedOnDate\ttemporal:yes\trole:begin
P\tfootballPlayer.team.leftOnDate\ttemporal:yes\trole:-
P\tperson.nickname\ttemporal:no\trole:-
F\tneymar\tfootballPlayer.team\tbarca\tc1
F\tneymar\tfootballPlayer.team.joinedOnDate\t2013-06-03\tc1
F\tneymar\tfootballPlayer.team.leftOnDate\t2017-08-03\tc1
F\tneymar\tperson.nickname\t\"Ney\"\t-
";

    #[test]
    fn empty_file_is_empty_store() {
        let store = KbStore::parse("").unwrap();
        assert!(store.facts().is_empty());
        assert!(store.entities().is_empty());
    }

    #[test]
    fn parses_and_indexes() {
        let store = KbStore::parse(SMALL).unwrap();
        assert_eq!(store.entities().len(), 2);
        assert_eq!(store.facts().len(), 4);
        assert_eq!(store.facts_by_subject("neymar").count(), 4);
        assert_eq!(store.facts_by_object("barca").count(), 1);
        assert_eq!(store.compound("c1").count(), 3);
        assert_eq!(store.compounds_mentioning("barca"), vec!["c1"]);
        assert_eq!(
            store.facts()[3].object,
            FactObject::Literal("Ney".to_string())
        );
        assert_eq!(
            store.role("footballPlayer.team.joinedOnDate"),
            Some(Role::Begin)
        );
        // inferred from the name
        assert_eq!(
            store.role("footballPlayer.team.leftOnDate"),
            Some(Role::End)
        );
        assert_eq!(store.role("footballPlayer.team"), None);
    }

    #[test]
    fn unknown_object_entity_reports_line() {
        let text = format!("{SMALL}F\tneymar\tfootballPlayer.team\tpsg\t-\n");
        match KbStore::parse(&text) {
            Err(KbError::Invalid(errors)) => {
                assert_eq!(errors.len(), 1);
                assert_eq!(errors[0].line, 12);
                assert!(errors[0].message.contains("psg"), "{}", errors[0]);
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn collects_all_errors() {
        let text = "E\tx\tX\n\
                    P\tp\ttemporal:maybe\trole:-\n\
                    P\tq\ttemporal:no\trole:-\n\
                    E\ta\tA\t-\n\
                    F\ta\tq\ta\tsolo\n\
                    F\ta\tmissing\ta\t-\n\
                    Z\tnonsense\n";
        let Err(KbError::Invalid(errors)) = KbStore::parse(text) else {
            panic!("expected errors");
        };
        let lines: Vec<usize> = errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![1, 2, 5, 6, 7]);
        assert!(errors[2].message.contains("fewer than 2"));
    }

    #[test]
    fn date_on_non_temporal_predicate_is_rejected() {
        let text = format!("{SMALL}F\tneymar\tperson.nickname\t2016\t-\n");
        assert!(KbStore::parse(&text).is_err());
    }

    #[test]
    fn links_longest_surface() {
        let store = KbStore::parse(SMALL).unwrap();
        let words: Vec<String> = "did neymar jr join fc barcelona ?"
            .split(' ')
            .map(String::from)
            .collect();
        let spans = store.link_entities(&words);
        assert_eq!(spans.len(), 2);
        assert_eq!((spans[0].start, spans[0].end), (1, 3));
        assert_eq!((spans[1].start, spans[1].end), (4, 6));
        assert_eq!(spans[1].entity.as_deref(), Some("barca"));
    }

    #[test]
    fn toy_kb_loads() {
        let store = KbStore::parse(TOY_KB).unwrap();
        assert!(store.facts().len() >= 30);
        assert!(store.entity("neymar").is_some());
    }

    fn arb_store() -> impl Strategy<Value = String> {
        let entity_ids = prop::collection::btree_set("[a-z][a-z0-9_]{0,6}", 1..6);
        (
            entity_ids,
            prop::collection::vec(
                (
                    0usize..8,
                    0usize..8,
                    0usize..4,
                    1i32..3000,
                    0u32..13,
                    0usize..3,
                ),
                0..12,
            ),
        )
            .prop_map(|(ids, raw_facts)| {
                let ids: Vec<String> = ids.into_iter().collect();
                let mut text = String::new();
                for (i, id) in ids.iter().enumerate() {
                    let types = if i % 2 == 0 {
                        "-".to_string()
                    } else {
                        "person,agent".to_string()
                    };
                    text.push_str(&format!("E\t{id}\t{id} name|alias {i}\t{types}\n"));
                }
                text.push_str("P\trel.link\ttemporal:no\trole:-\n");
                text.push_str("P\trel.link.from\ttemporal:yes\trole:begin\n");
                text.push_str("P\trel.when\ttemporal:yes\trole:-\n");
                text.push_str("P\trel.label\ttemporal:no\trole:-\n");
                let mut compounds: BTreeMap<String, usize> = BTreeMap::new();
                let mut facts = Vec::new();
                for (s, o, kind, year, month, comp) in raw_facts {
                    let subject = &ids[s % ids.len()];
                    let compound = if comp == 0 {
                        "-".to_string()
                    } else {
                        format!("c{comp}")
                    };
                    let (predicate, object) = match kind {
                        0 => ("rel.link", ids[o % ids.len()].clone()),
                        1 => ("rel.link.from", format!("{year:04}")),
                        2 => {
                            let m = month.max(1);
                            ("rel.when", format!("{year:04}-{m:02}"))
                        }
                        _ => ("rel.label", format!("\"label {o}\"")),
                    };
                    *compounds.entry(compound.clone()).or_default() += 1;
                    facts.push(format!("F\t{subject}\t{predicate}\t{object}\t{compound}\n"));
                }
                for f in facts {
                    text.push_str(&f);
                }
                // pad singleton compounds so the file validates
                for (compound, n) in compounds {
                    if compound != "-" && n < 2 {
                        text.push_str(&format!("F\t{}\trel.label\t\"pad\"\t{compound}\n", ids[0]));
                    }
                }
                text
            })
    }

    proptest! {
        #[test]
        fn kb_text_round_trip(text in arb_store()) {
            let store = KbStore::parse(&text).unwrap();
            let again = KbStore::parse(&store.to_kb_string()).unwrap();
            prop_assert_eq!(store.entities(), again.entities());
            prop_assert_eq!(store.predicates(), again.predicates());
            prop_assert_eq!(store.facts(), again.facts());
            prop_assert_eq!(store.to_kb_string(), again.to_kb_string());
        }
    }
}
