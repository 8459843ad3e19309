//! Time-scope retrieval for candidate answers.

use std::collections::BTreeMap;

use thiserror::Error;

use super::similarity::{
    pair_key, predicate_similarity, tokenize_predicate, Embeddings, Similarity,
};
use super::{KbStore, Role};
use crate::model::{AnswerValue, Fact, FactObject, Interval, TimePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScopeError {
    #[error("no time scope found for {answer} via {predicate}")]
    NoScopeFound { answer: String, predicate: String },
}

/// Temporal predicates that together describe one period: a point, a
/// begin/end pair, or a lone begin or end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Unit {
    Pair { begin: String, end: String },
    Point(String),
    Begin(String),
    End(String),
}

impl Unit {
    fn names(&self) -> Vec<&str> {
        match self {
            Unit::Pair { begin, end } => vec![begin, end],
            Unit::Point(p) | Unit::Begin(p) | Unit::End(p) => vec![p],
        }
    }

    fn first_name(&self) -> &str {
        self.names()[0]
    }
}

/// Groups temporal predicate names into units, pairing begin and end
/// predicates that share a [`pair_key`].
fn units(store: &KbStore, predicates: &[&str]) -> Vec<Unit> {
    let mut begins: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    let mut ends: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    let mut out = Vec::new();
    for &p in predicates {
        match store.role(p) {
            Some(Role::Begin) => begins.entry(pair_key(p)).or_default().push(p),
            Some(Role::End) => ends.entry(pair_key(p)).or_default().push(p),
            Some(Role::Point) => out.push(Unit::Point(p.to_string())),
            None => {}
        }
    }
    for (key, bs) in &begins {
        let es = ends.get(key).cloned().unwrap_or_default();
        for (i, b) in bs.iter().enumerate() {
            match es.get(i) {
                Some(e) => out.push(Unit::Pair {
                    begin: b.to_string(),
                    end: e.to_string(),
                }),
                None => out.push(Unit::Begin(b.to_string())),
            }
        }
    }
    for (key, es) in &ends {
        let paired = begins.get(key).map_or(0, Vec::len);
        out.extend(es.iter().skip(paired).map(|e| Unit::End(e.to_string())));
    }
    out.sort();
    out.dedup();
    out
}

fn unit_similarity(unit: &Unit, provenance: &str, embeddings: Option<&Embeddings>) -> Similarity {
    let provenance_tokens = tokenize_predicate(provenance);
    unit.names()
        .into_iter()
        .map(|name| {
            let tokens = tokenize_predicate(name);
            Similarity {
                score: predicate_similarity(provenance, name, embeddings),
                overlap: tokens
                    .iter()
                    .filter(|t| provenance_tokens.contains(t))
                    .count(),
            }
        })
        .max_by(|a, b| a.rank_cmp(b))
        .expect("unit has a name")
}

/// Best unit by similarity to `provenance`; ties go to more shared tokens,
/// then to the lexicographically smaller predicate name.
fn best_unit(units: Vec<Unit>, provenance: &str, embeddings: Option<&Embeddings>) -> Option<Unit> {
    units
        .into_iter()
        .map(|u| (unit_similarity(&u, provenance, embeddings), u))
        .max_by(|(sa, ua), (sb, ub)| {
            sa.rank_cmp(sb)
                .then_with(|| ub.first_name().cmp(ua.first_name()))
        })
        .map(|(_, u)| u)
}

fn dates<'a>(facts: impl Iterator<Item = &'a Fact>, predicate: &str) -> Vec<TimePoint> {
    facts
        .filter(|f| f.predicate == predicate)
        .filter_map(|f| match f.object {
            FactObject::Date(p) => Some(p),
            _ => None,
        })
        .collect()
}

/// Intervals a unit yields over a group of facts.
fn unit_intervals(unit: &Unit, facts: &[&Fact]) -> Vec<Interval> {
    let over = |p: &str| dates(facts.iter().copied(), p);
    let mut out = Vec::new();
    match unit {
        Unit::Point(p) => out.extend(over(p).into_iter().map(Interval::from_point)),
        Unit::Begin(p) => out.extend(
            over(p)
                .into_iter()
                .filter_map(|b| Interval::new(Some(b), None).ok()),
        ),
        Unit::End(p) => out.extend(
            over(p)
                .into_iter()
                .filter_map(|e| Interval::new(None, Some(e)).ok()),
        ),
        Unit::Pair { begin, end } => {
            let bs = over(begin);
            let es = over(end);
            match (bs.first(), es.first()) {
                (Some(&b), Some(&e)) => match Interval::closed(b, e) {
                    Ok(i) => out.push(i),
                    Err(err) => log::warn!("skipping inverted scope: {err}"),
                },
                (Some(&b), None) => out.extend(Interval::new(Some(b), None).ok()),
                (None, Some(&e)) => out.extend(Interval::new(None, Some(e)).ok()),
                (None, None) => {}
            }
        }
    }
    out
}

fn temporal_predicates<'a>(store: &KbStore, facts: impl Iterator<Item = &'a Fact>) -> Vec<&'a str> {
    let mut names: Vec<&str> = facts
        .filter(|f| store.is_temporal(&f.predicate))
        .map(|f| f.predicate.as_str())
        .collect();
    names.sort_unstable();
    names.dedup();
    names
}

fn links(fact: &Fact, a: &str, b: &str) -> bool {
    let object = match &fact.object {
        FactObject::Entity(o) => o.as_str(),
        _ => return false,
    };
    (fact.subject == a && object == b) || (fact.subject == b && object == a)
}

/// Retrieves time scopes for a candidate answer.
///
/// When the fact that produced the answer belongs to a compound, the
/// compound's own temporal qualifiers give the scope. Otherwise every
/// compound that mentions both a question entity and the answer is
/// searched, and the temporal predicate (or begin/end pair) most similar to
/// the provenance predicate is used. Returned endpoints are always dates
/// stored in the KB.
pub fn retrieve_time_scope(
    store: &KbStore,
    answer: &AnswerValue,
    provenance: &str,
    question_entities: &[String],
    embeddings: Option<&Embeddings>,
) -> Result<Vec<Interval>, ScopeError> {
    let not_found = || ScopeError::NoScopeFound {
        answer: answer.to_string(),
        predicate: provenance.to_string(),
    };
    let answer_id = match answer {
        AnswerValue::Date(p) => return Ok(vec![Interval::from_point(*p)]),
        AnswerValue::Entity(id) => id.as_str(),
    };

    // (a) qualifiers of the compounds holding the provenance facts
    let provenance_facts: Vec<&Fact> = store
        .facts_by_predicate(provenance)
        .filter(|f| {
            if question_entities.is_empty() {
                f.subject == answer_id
                    || matches!(&f.object, FactObject::Entity(o) if o == answer_id)
            } else {
                question_entities.iter().any(|q| links(f, q, answer_id))
            }
        })
        .collect();
    let mut compound_ids: Vec<&str> = provenance_facts
        .iter()
        .filter_map(|f| f.compound.as_deref())
        .collect();
    compound_ids.sort_unstable();
    compound_ids.dedup();
    if !compound_ids.is_empty() {
        let mut scopes = Vec::new();
        for compound in compound_ids {
            let members: Vec<&Fact> = store.compound(compound).collect();
            let names = temporal_predicates(store, members.iter().copied());
            if let Some(unit) = best_unit(units(store, &names), provenance, embeddings) {
                scopes.extend(unit_intervals(&unit, &members));
            }
        }
        if !scopes.is_empty() {
            return Ok(scopes);
        }
    }

    // (b) temporal predicates of compounds linking question entity and answer
    let mut linking: Vec<&str> = question_entities
        .iter()
        .flat_map(|q| store.compounds_mentioning(q))
        .filter(|c| store.compound_mentions(c, answer_id))
        .collect();
    linking.sort_unstable();
    linking.dedup();
    let groups: Vec<Vec<&Fact>> = linking
        .iter()
        .map(|c| store.compound(c).collect())
        .collect();
    let names = temporal_predicates(store, groups.iter().flatten().copied());
    let unit = best_unit(units(store, &names), provenance, embeddings).ok_or_else(not_found)?;
    let scopes: Vec<Interval> = groups
        .iter()
        .flat_map(|g| unit_intervals(&unit, g))
        .collect();
    if scopes.is_empty() {
        Err(not_found())
    } else {
        Ok(scopes)
    }
}

/// Scope of an entity from its own temporal facts outside compounds, such
/// as an event's start and end dates. Pairs are preferred over points, and
/// points over lone begins or ends.
pub fn entity_own_scope(store: &KbStore, entity: &str) -> Option<Interval> {
    let facts: Vec<&Fact> = store
        .facts_by_subject(entity)
        .filter(|f| f.compound.is_none())
        .collect();
    let names = temporal_predicates(store, facts.iter().copied());
    let mut candidates = units(store, &names);
    candidates.sort_by(|a, b| rank_kind(a).cmp(&rank_kind(b)).then_with(|| a.cmp(b)));
    candidates
        .iter()
        .find_map(|u| unit_intervals(u, &facts).into_iter().next())
}

fn rank_kind(unit: &Unit) -> u8 {
    match unit {
        Unit::Pair { .. } => 0,
        Unit::Point(_) => 1,
        Unit::Begin(_) | Unit::End(_) => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> TimePoint {
        s.parse().unwrap()
    }

    fn entity(id: &str) -> AnswerValue {
        AnswerValue::Entity(id.to_string())
    }

    const MARRIAGE: &str = "\
E\tjr\tJulia Roberts\tperson
E\tll\tLyle Lovett\tperson
P\tmarriage.spouse\ttemporal:no\trole:-
P\tmarriage.date\ttemporal:yes\trole:point
F\tjr\tmarriage.spouse\tll\tm1
F\tjr\tmarriage.date\t1993-06-27\tm1
";

    #[test]
    fn compound_point_qualifier() {
        let store = KbStore::parse(MARRIAGE).unwrap();
        let scopes = retrieve_time_scope(
            &store,
            &entity("ll"),
            "marriage.spouse",
            &["jr".into()],
            None,
        )
        .unwrap();
        assert_eq!(scopes, vec![Interval::from_point(d("1993-06-27"))]);
    }

    // Membership recorded by a plain predicate, periods in separate
    // compounds keyed by joined/left dates.
    const CLUBS: &str = "\
E\tneymar\tNeymar\tperson
E\tbarca\tBarcelona\tclub
E\tpsg\tPSG\tclub
P\tteam.players\ttemporal:no\trole:-
P\tfootballPlayer.team\ttemporal:no\trole:-
P\tfootballPlayer.team.joinedOnDate\ttemporal:yes\trole:begin
P\tfootballPlayer.team.leftOnDate\ttemporal:yes\trole:end
P\tfootballPlayer.award.date\ttemporal:yes\trole:point
F\tbarca\tteam.players\tneymar\t-
F\tpsg\tteam.players\tneymar\t-
F\tneymar\tfootballPlayer.team\tbarca\tt1
F\tneymar\tfootballPlayer.team.joinedOnDate\t2013-06-03\tt1
F\tneymar\tfootballPlayer.team.leftOnDate\t2017-08-03\tt1
F\tneymar\tfootballPlayer.award.date\t2015\tt1
F\tneymar\tfootballPlayer.team\tpsg\tt2
F\tneymar\tfootballPlayer.team.joinedOnDate\t2017-08-03\tt2
";

    #[test]
    fn similarity_selects_begin_end_pair() {
        let store = KbStore::parse(CLUBS).unwrap();
        let scopes = retrieve_time_scope(
            &store,
            &entity("barca"),
            "team.players",
            &["neymar".into()],
            None,
        )
        .unwrap();
        assert_eq!(
            scopes,
            vec![Interval::closed(d("2013-06-03"), d("2017-08-03")).unwrap()]
        );
    }

    #[test]
    fn lone_begin_is_open_ended() {
        let store = KbStore::parse(CLUBS).unwrap();
        let scopes = retrieve_time_scope(
            &store,
            &entity("psg"),
            "team.players",
            &["neymar".into()],
            None,
        )
        .unwrap();
        assert_eq!(
            scopes,
            vec![Interval::new(Some(d("2017-08-03")), None).unwrap()]
        );
    }

    #[test]
    fn compound_provenance_uses_its_own_qualifiers() {
        let store = KbStore::parse(CLUBS).unwrap();
        let scopes = retrieve_time_scope(
            &store,
            &entity("barca"),
            "footballPlayer.team",
            &["neymar".into()],
            None,
        )
        .unwrap();
        assert_eq!(
            scopes,
            vec![Interval::closed(d("2013-06-03"), d("2017-08-03")).unwrap()]
        );
    }

    #[test]
    fn missing_scope_is_reported() {
        let text = "E\ta\tA\t-\nE\tb\tB\t-\nP\tknows\ttemporal:no\trole:-\nF\ta\tknows\tb\t-\n";
        let store = KbStore::parse(text).unwrap();
        assert!(matches!(
            retrieve_time_scope(&store, &entity("b"), "knows", &["a".into()], None),
            Err(ScopeError::NoScopeFound { .. })
        ));
    }

    #[test]
    fn dates_are_their_own_scope() {
        let store = KbStore::default();
        let p = d("2016-05");
        assert_eq!(
            retrieve_time_scope(&store, &AnswerValue::Date(p), "x", &[], None).unwrap(),
            vec![Interval::from_point(p)]
        );
    }

    #[test]
    fn returned_endpoints_exist_in_store() {
        let store = KbStore::parse(super::super::TOY_KB).unwrap();
        let stored: Vec<TimePoint> = store
            .facts()
            .iter()
            .filter_map(|f| match f.object {
                FactObject::Date(p) => Some(p),
                _ => None,
            })
            .collect();
        for fact in store.facts() {
            let FactObject::Entity(object) = &fact.object else {
                continue;
            };
            if store.is_temporal(&fact.predicate) {
                continue;
            }
            for (answer, question) in [(object, &fact.subject), (&fact.subject, object)] {
                if let Ok(scopes) = retrieve_time_scope(
                    &store,
                    &entity(answer),
                    &fact.predicate,
                    std::slice::from_ref(question),
                    None,
                ) {
                    for s in scopes {
                        for p in [s.begin, s.end].into_iter().flatten() {
                            assert!(stored.contains(&p), "{p} invented for {answer}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn event_scope_from_own_facts() {
        let text = "E\twc\tWorld Cup\ttime.event\n\
                    P\tevent.startDate\ttemporal:yes\trole:begin\n\
                    P\tevent.endDate\ttemporal:yes\trole:end\n\
                    F\twc\tevent.startDate\t2010-06-11\t-\n\
                    F\twc\tevent.endDate\t2010-07-11\t-\n";
        let store = KbStore::parse(text).unwrap();
        assert_eq!(
            entity_own_scope(&store, "wc"),
            Some(Interval::closed(d("2010-06-11"), d("2010-07-11")).unwrap())
        );
    }
}
