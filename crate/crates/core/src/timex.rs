//! Rule-based temporal expression tagging and normalization, and the
//! dictionary of named events.
//!
//! Rules run over lower-cased tokens. At each position every rule is tried
//! and the longest match wins; ties go to the earlier rule in
//! [`RULES`]. Matching then resumes after the chosen span, so spans never
//! overlap. The supported written forms are listed in
//! `docs/date-formats.md`.

use std::collections::BTreeMap;

use chrono::{Datelike, Days, Months, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kb::{self, KbStore};
use crate::model::{Granularity, Interval, Side, TimePoint};
use crate::text::{self, RawToken};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimexError {
    #[error("cannot normalize {timex_type:?} expression {surface:?} without an anchor")]
    UnnormalizableExpression {
        surface: String,
        timex_type: TimexType,
    },
    #[error("normalized date out of range for {0:?}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TimexType {
    Date,
    Time,
    Duration,
    Set,
    Event,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationUnit {
    Minute,
    Hour,
    Day,
    Week,
    Month,
    Year,
    Decade,
    Century,
}

/// What a tagged expression denotes before it is resolved against a
/// reference date.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimexValue {
    Fixed { interval: Interval },
    RelativeYears { offset: i32 },
    RelativeMonths { offset: i32 },
    RelativeDays { offset: i64 },
    MonthDay { month: u32, day: u32 },
    TimeOfDay,
    Event { event: String, scope: Interval },
    Duration { amount: u32, unit: DurationUnit },
    Set,
}

impl TimexValue {
    pub fn is_relative(&self) -> bool {
        matches!(
            self,
            TimexValue::RelativeYears { .. }
                | TimexValue::RelativeMonths { .. }
                | TimexValue::RelativeDays { .. }
                | TimexValue::MonthDay { .. }
                | TimexValue::TimeOfDay
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalExpressionSpan {
    /// Half-open token range.
    pub start: usize,
    pub end: usize,
    pub timex_type: TimexType,
    pub normalized: Option<Interval>,
    pub surface: String,
    pub relative: bool,
    pub value: TimexValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEntry {
    pub event: String,
    pub scope: Interval,
}

/// Lower-cased event surface forms mapped to their event and time scope.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDictionary {
    entries: BTreeMap<String, EventEntry>,
    longest: usize,
}

/// Dictionary key for a surface form: lower-cased tokens joined by spaces.
pub fn surface_key(surface: &str) -> String {
    text::tokenize(surface)
        .iter()
        .map(|t| t.surface.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

impl EventDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a surface form. Returns `false` and keeps the existing entry
    /// when the form is already present.
    pub fn insert(&mut self, surface: &str, event: &str, scope: Interval) -> bool {
        let key = surface_key(surface);
        if key.is_empty() {
            return false;
        }
        if let Some(existing) = self.entries.get(&key) {
            log::warn!(
                "duplicate event surface form {key:?}: keeping {}, ignoring {event}",
                existing.event
            );
            return false;
        }
        self.longest = self.longest.max(key.split(' ').count());
        self.entries.insert(
            key,
            EventEntry {
                event: event.to_string(),
                scope,
            },
        );
        true
    }

    pub fn get(&self, surface: &str) -> Option<&EventEntry> {
        self.entries.get(&surface_key(surface))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &EventEntry)> {
        self.entries.iter()
    }

    /// Longest dictionary match starting at token `i`, as (length, entry).
    pub fn match_at(&self, words: &[String], i: usize) -> Option<(usize, &EventEntry)> {
        let max = self.longest.min(words.len().saturating_sub(i));
        (1..=max).rev().find_map(|n| {
            let key = words[i..i + n].join(" ");
            self.entries.get(&key).map(|e| (n, e))
        })
    }
}

/// Entity types that mark an entity as a named event.
pub const EVENT_TYPES: &[&str] = &["time.event", "event"];

/// Collects every surface form of event-typed entities that have a time
/// scope in the store. On duplicate surface forms the entity loaded first
/// wins.
pub fn build_event_dictionary(store: &KbStore) -> EventDictionary {
    let mut dict = EventDictionary::new();
    extend_event_dictionary(&mut dict, store);
    dict
}

pub fn extend_event_dictionary(dict: &mut EventDictionary, store: &KbStore) {
    for entity in store.entities() {
        if !entity
            .types
            .iter()
            .any(|t| EVENT_TYPES.contains(&t.as_str()))
        {
            continue;
        }
        let Some(scope) = kb::entity_own_scope(store, &entity.id) else {
            log::warn!(
                "event {} has no time scope; not added to dictionary",
                entity.id
            );
            continue;
        };
        for surface in &entity.surface_forms {
            dict.insert(surface, &entity.id, scope);
        }
    }
}

// --- lexical helpers -------------------------------------------------------

const MONTHS: &[(&str, u32)] = &[
    ("january", 1),
    ("jan", 1),
    ("february", 2),
    ("feb", 2),
    ("march", 3),
    ("mar", 3),
    ("april", 4),
    ("apr", 4),
    ("may", 5),
    ("june", 6),
    ("jun", 6),
    ("july", 7),
    ("jul", 7),
    ("august", 8),
    ("aug", 8),
    ("september", 9),
    ("sep", 9),
    ("sept", 9),
    ("october", 10),
    ("oct", 10),
    ("november", 11),
    ("nov", 11),
    ("december", 12),
    ("dec", 12),
];

const WEEKDAYS: &[&str] = &[
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
    "weekday",
    "weekend",
    "morning",
    "evening",
    "night",
];

const NUMBER_WORDS: &[(&str, u32)] = &[
    ("a", 1),
    ("an", 1),
    ("one", 1),
    ("two", 2),
    ("three", 3),
    ("four", 4),
    ("five", 5),
    ("six", 6),
    ("seven", 7),
    ("eight", 8),
    ("nine", 9),
    ("ten", 10),
    ("eleven", 11),
    ("twelve", 12),
    ("fifteen", 15),
    ("twenty", 20),
    ("thirty", 30),
    ("fifty", 50),
    ("hundred", 100),
];

const ORDINAL_WORDS: &[(&str, u32)] = &[
    ("first", 1),
    ("second", 2),
    ("third", 3),
    ("fourth", 4),
    ("fifth", 5),
    ("sixth", 6),
    ("seventh", 7),
    ("eighth", 8),
    ("ninth", 9),
    ("tenth", 10),
    ("eleventh", 11),
    ("twelfth", 12),
    ("thirteenth", 13),
    ("fourteenth", 14),
    ("fifteenth", 15),
    ("sixteenth", 16),
    ("seventeenth", 17),
    ("eighteenth", 18),
    ("nineteenth", 19),
    ("twentieth", 20),
    ("twenty-first", 21),
];

fn month_of(word: &str) -> Option<u32> {
    MONTHS.iter().find(|(m, _)| *m == word).map(|(_, n)| *n)
}

fn digits(word: &str) -> Option<u32> {
    if word.is_empty() || word.len() > 4 || !word.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    word.parse().ok()
}

/// `2`, `02`, `2nd`, `21st`.
fn day_of(word: &str) -> Option<u32> {
    let num = ["st", "nd", "rd", "th"]
        .iter()
        .find_map(|s| word.strip_suffix(s))
        .unwrap_or(word);
    if num.len() > 2 {
        return None;
    }
    digits(num).filter(|d| (1..=31).contains(d))
}

fn year_of(word: &str) -> Option<i32> {
    if word.len() != 4 {
        return None;
    }
    digits(word).map(|y| y as i32).filter(|y| *y >= 1)
}

/// Bare years are only recognised in a plausible range, to avoid tagging
/// other four-digit numbers.
fn bare_year_of(word: &str) -> Option<i32> {
    year_of(word).filter(|y| (1000..=2999).contains(y))
}

fn count_of(word: &str) -> Option<u32> {
    digits(word).or_else(|| {
        NUMBER_WORDS
            .iter()
            .find(|(w, _)| *w == word)
            .map(|(_, n)| *n)
    })
}

fn ordinal_number(word: &str) -> Option<u32> {
    if let Some(n) = ORDINAL_WORDS.iter().find(|(w, _)| *w == word) {
        return Some(n.1);
    }
    let num = ["st", "nd", "rd", "th"]
        .iter()
        .find_map(|s| word.strip_suffix(s))?;
    digits(num)
}

fn unit_of(word: &str) -> Option<DurationUnit> {
    let unit = match word {
        "minute" | "minutes" => DurationUnit::Minute,
        "hour" | "hours" => DurationUnit::Hour,
        "day" | "days" => DurationUnit::Day,
        "week" | "weeks" => DurationUnit::Week,
        "month" | "months" => DurationUnit::Month,
        "year" | "years" => DurationUnit::Year,
        "decade" | "decades" => DurationUnit::Decade,
        "century" | "centuries" => DurationUnit::Century,
        _ => return None,
    };
    Some(unit)
}

fn closed(begin: TimePoint, end: TimePoint) -> Option<Interval> {
    Interval::closed(begin.widen(Side::Begin), end.widen(Side::End)).ok()
}

// --- rules -----------------------------------------------------------------

struct Hit {
    len: usize,
    timex_type: TimexType,
    value: TimexValue,
}

impl Hit {
    fn fixed(len: usize, interval: Interval) -> Hit {
        Hit {
            len,
            timex_type: TimexType::Date,
            value: TimexValue::Fixed { interval },
        }
    }
}

type Rule = fn(&[String], usize) -> Option<Hit>;

fn word(words: &[String], i: usize) -> Option<&str> {
    words.get(i).map(String::as_str)
}

/// Skips an abbreviation period after a month name.
fn after_month(words: &[String], i: usize) -> usize {
    if word(words, i) == Some(".") {
        i + 1
    } else {
        i
    }
}

fn optional(words: &[String], i: usize, w: &str) -> usize {
    if word(words, i) == Some(w) {
        i + 1
    } else {
        i
    }
}

/// `2016-05-02`, `2016-05`.
fn rule_iso(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    if !w.contains('-') || !w.as_bytes()[0].is_ascii_digit() {
        return None;
    }
    let point: TimePoint = w.parse().ok()?;
    Some(Hit::fixed(1, Interval::from_point(point)))
}

/// `05/02/2016`, read month first.
fn rule_slash(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    let parts: Vec<&str> = w.split('/').collect();
    if parts.len() != 3 || parts[0].len() > 2 || parts[1].len() > 2 {
        return None;
    }
    let month = digits(parts[0])?;
    let day = digits(parts[1])?;
    let year = year_of(parts[2])?;
    let point = TimePoint::day(year, month, day).ok()?;
    Some(Hit::fixed(1, Interval::from_point(point)))
}

/// `May 2nd, 2016`, `May 2 2016`, `Sept. 2, 2016`.
fn rule_month_day_year(words: &[String], i: usize) -> Option<Hit> {
    let month = month_of(word(words, i)?)?;
    let j = after_month(words, i + 1);
    let day = day_of(word(words, j)?)?;
    let k = optional(words, j + 1, ",");
    let year = year_of(word(words, k)?)?;
    let point = TimePoint::day(year, month, day).ok()?;
    Some(Hit::fixed(k + 1 - i, Interval::from_point(point)))
}

/// `2 May 2016`, `2nd of May, 2016`, `the 2nd of May 2016`.
fn rule_day_month_year(words: &[String], i: usize) -> Option<Hit> {
    let j = optional(words, i, "the");
    let day = day_of(word(words, j)?)?;
    let k = optional(words, j + 1, "of");
    let month = month_of(word(words, k)?)?;
    let k = optional(words, after_month(words, k + 1), ",");
    let year = year_of(word(words, k)?)?;
    let point = TimePoint::day(year, month, day).ok()?;
    Some(Hit::fixed(k + 1 - i, Interval::from_point(point)))
}

/// `May 2016`, `Aug. 2018`.
fn rule_month_year(words: &[String], i: usize) -> Option<Hit> {
    let month = month_of(word(words, i)?)?;
    let j = optional(words, after_month(words, i + 1), ",");
    let year = year_of(word(words, j)?)?;
    let point = TimePoint::month(year, month).ok()?;
    Some(Hit::fixed(j + 1 - i, Interval::from_point(point)))
}

/// `May 2nd` with the year taken from the reference date.
fn rule_month_day(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    let month = month_of(w)?;
    let j = after_month(words, i + 1);
    let day_word = word(words, j)?;
    // "may 2" is too often a modal followed by a number.
    if w == "may" && digits(day_word).is_some() {
        return None;
    }
    let day = day_of(day_word)?;
    if day > crate::model::days_in_month(2000, month) {
        return None;
    }
    Some(Hit {
        len: j + 1 - i,
        timex_type: TimexType::Date,
        value: TimexValue::MonthDay { month, day },
    })
}

fn rule_year(words: &[String], i: usize) -> Option<Hit> {
    let year = bare_year_of(word(words, i)?)?;
    let point = TimePoint::year(year).ok()?;
    Some(Hit::fixed(1, Interval::from_point(point)))
}

/// `the 1990s`, `1990s`.
fn rule_decade(words: &[String], i: usize) -> Option<Hit> {
    let j = optional(words, i, "the");
    let w = word(words, j)?;
    let year = bare_year_of(w.strip_suffix('s')?)?;
    if year % 10 != 0 {
        return None;
    }
    let interval = closed(TimePoint::year(year).ok()?, TimePoint::year(year + 9).ok()?)?;
    Some(Hit::fixed(j + 1 - i, interval))
}

/// `the 18th century`, `the eighteenth century`: years 1700 to 1799.
fn rule_century(words: &[String], i: usize) -> Option<Hit> {
    let j = optional(words, i, "the");
    let n = ordinal_number(word(words, j)?)?;
    if word(words, j + 1) != Some("century") || !(1..=99).contains(&n) {
        return None;
    }
    let first = ((n as i32 - 1) * 100).max(1);
    let last = (n as i32 - 1) * 100 + 99;
    let interval = closed(TimePoint::year(first).ok()?, TimePoint::year(last).ok()?)?;
    Some(Hit::fixed(j + 2 - i, interval))
}

/// `last year`, `next month`, `this year`, `yesterday`, `three years ago`.
fn rule_relative(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    let relative = |len, value| {
        Some(Hit {
            len,
            timex_type: TimexType::Date,
            value,
        })
    };
    match w {
        "yesterday" => return relative(1, TimexValue::RelativeDays { offset: -1 }),
        "today" => return relative(1, TimexValue::RelativeDays { offset: 0 }),
        "tomorrow" => return relative(1, TimexValue::RelativeDays { offset: 1 }),
        _ => {}
    }
    let offset = match w {
        "last" | "previous" | "past" => Some(-1),
        "this" | "current" => Some(0),
        "next" | "coming" => Some(1),
        _ => None,
    };
    if let Some(offset) = offset {
        return match word(words, i + 1)? {
            "year" => relative(2, TimexValue::RelativeYears { offset }),
            "month" => relative(2, TimexValue::RelativeMonths { offset }),
            _ => None,
        };
    }
    let amount = count_of(w)? as i32;
    let unit = unit_of(word(words, i + 1)?)?;
    if word(words, i + 2) != Some("ago") {
        return None;
    }
    let value = match unit {
        DurationUnit::Year => TimexValue::RelativeYears { offset: -amount },
        DurationUnit::Decade => TimexValue::RelativeYears {
            offset: -10 * amount,
        },
        DurationUnit::Month => TimexValue::RelativeMonths { offset: -amount },
        DurationUnit::Week => TimexValue::RelativeDays {
            offset: -7 * amount as i64,
        },
        DurationUnit::Day => TimexValue::RelativeDays {
            offset: -(amount as i64),
        },
        _ => return None,
    };
    relative(3, value)
}

/// `9 pm`, `9:30 a.m.`, `21:00`, `noon`.
fn rule_time(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    let hit = |len| {
        Some(Hit {
            len,
            timex_type: TimexType::Time,
            value: TimexValue::TimeOfDay,
        })
    };
    if matches!(w, "noon" | "midnight") {
        return hit(1);
    }
    let (hour, minute) = match w.split_once(':') {
        Some((h, m)) => (digits(h)?, Some(digits(m)?)),
        None => (digits(w)?, None),
    };
    if hour > 24 || minute.is_some_and(|m| m > 59) {
        return None;
    }
    match word(words, i + 1) {
        Some("am" | "pm" | "a.m" | "p.m") if hour <= 12 => {
            let len = if word(words, i + 2) == Some(".") && words[i + 1].contains('.') {
                3
            } else {
                2
            };
            hit(len)
        }
        _ if minute.is_some() => hit(1),
        _ => None,
    }
}

/// `two years`, `3 months`, `a decade`.
fn rule_duration(words: &[String], i: usize) -> Option<Hit> {
    let amount = count_of(word(words, i)?)?;
    let unit = unit_of(word(words, i + 1)?)?;
    Some(Hit {
        len: 2,
        timex_type: TimexType::Duration,
        value: TimexValue::Duration { amount, unit },
    })
}

/// `every monday`, `each year`, `annually`.
fn rule_set(words: &[String], i: usize) -> Option<Hit> {
    let w = word(words, i)?;
    let set = |len| {
        Some(Hit {
            len,
            timex_type: TimexType::Set,
            value: TimexValue::Set,
        })
    };
    if matches!(w, "daily" | "weekly" | "monthly" | "annually" | "yearly") {
        return set(1);
    }
    if !matches!(w, "every" | "each") {
        return None;
    }
    let next = word(words, i + 1)?;
    if WEEKDAYS.contains(&next) || unit_of(next).is_some() || month_of(next).is_some() {
        return set(2);
    }
    if count_of(next).is_some() && word(words, i + 2).and_then(unit_of).is_some() {
        return set(3);
    }
    None
}

const RULES: &[Rule] = &[
    rule_iso,
    rule_slash,
    rule_month_day_year,
    rule_day_month_year,
    rule_month_year,
    rule_century,
    rule_decade,
    rule_relative,
    rule_month_day,
    rule_year,
    rule_time,
    rule_set,
    rule_duration,
];

/// Tags temporal expressions and named events in text.
#[derive(Debug, Clone, Default)]
pub struct Tagger {
    events: EventDictionary,
}

impl Tagger {
    pub fn new(events: EventDictionary) -> Self {
        Self { events }
    }

    pub fn events(&self) -> &EventDictionary {
        &self.events
    }

    /// Tags `text`. Absolute dates and events come back normalized;
    /// relative expressions are left for [`normalize`].
    pub fn tag(&self, text: &str) -> Vec<TemporalExpressionSpan> {
        let tokens = text::tokenize(text);
        self.tag_tokens(text, &tokens)
    }

    /// Tags `text` and resolves relative expressions against `reference`.
    pub fn tag_with_reference(
        &self,
        text: &str,
        reference: TimePoint,
    ) -> Vec<TemporalExpressionSpan> {
        let mut spans = self.tag(text);
        resolve_relative(&mut spans, reference);
        spans
    }

    pub fn tag_tokens(&self, text: &str, tokens: &[RawToken]) -> Vec<TemporalExpressionSpan> {
        let words: Vec<String> = tokens.iter().map(|t| t.surface.to_lowercase()).collect();
        let mut spans = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let mut best: Option<Hit> = None;
            for rule in RULES {
                if let Some(hit) = rule(&words, i) {
                    if best.as_ref().is_none_or(|b| hit.len > b.len) {
                        best = Some(hit);
                    }
                }
            }
            if let Some((len, entry)) = self.events.match_at(&words, i) {
                if best.as_ref().is_none_or(|b| len >= b.len) {
                    best = Some(Hit {
                        len,
                        timex_type: TimexType::Event,
                        value: TimexValue::Event {
                            event: entry.event.clone(),
                            scope: entry.scope,
                        },
                    });
                }
            }
            match best {
                Some(hit) => {
                    let end = i + hit.len;
                    let normalized = match &hit.value {
                        TimexValue::Fixed { interval } => Some(*interval),
                        TimexValue::Event { scope, .. } => Some(*scope),
                        _ => None,
                    };
                    spans.push(TemporalExpressionSpan {
                        start: i,
                        end,
                        timex_type: hit.timex_type,
                        normalized,
                        surface: text[tokens[i].start..tokens[end - 1].end].to_string(),
                        relative: hit.value.is_relative(),
                        value: hit.value,
                    });
                    i = end;
                }
                None => i += 1,
            }
        }
        spans
    }
}

/// Fills `normalized` for relative spans. Durations and sets stay empty.
pub fn resolve_relative(spans: &mut [TemporalExpressionSpan], reference: TimePoint) {
    for span in spans.iter_mut().filter(|s| s.normalized.is_none()) {
        span.normalized = normalize(span, reference).ok();
    }
}

/// Resolves a tagged expression to an interval at its own granularity.
pub fn normalize(
    span: &TemporalExpressionSpan,
    reference: TimePoint,
) -> Result<Interval, TimexError> {
    let reference_day = reference.bound(Side::Begin);
    let out_of_range = || TimexError::OutOfRange(span.surface.clone());
    let point = match &span.value {
        TimexValue::Fixed { interval } => return Ok(*interval),
        TimexValue::Event { scope, .. } => return Ok(*scope),
        TimexValue::Duration { .. } | TimexValue::Set => {
            return Err(TimexError::UnnormalizableExpression {
                surface: span.surface.clone(),
                timex_type: span.timex_type,
            })
        }
        TimexValue::RelativeYears { offset } => {
            TimePoint::year(reference_day.year() + offset).map_err(|_| out_of_range())?
        }
        TimexValue::RelativeMonths { offset } => {
            let first = reference_day.with_day(1).expect("day 1 exists");
            let shifted = if *offset >= 0 {
                first.checked_add_months(Months::new(*offset as u32))
            } else {
                first.checked_sub_months(Months::new(offset.unsigned_abs()))
            }
            .ok_or_else(out_of_range)?;
            TimePoint::month(shifted.year(), shifted.month()).map_err(|_| out_of_range())?
        }
        TimexValue::RelativeDays { offset } => {
            let shifted = if *offset >= 0 {
                reference_day.checked_add_days(Days::new(*offset as u64))
            } else {
                reference_day.checked_sub_days(Days::new(offset.unsigned_abs()))
            }
            .ok_or_else(out_of_range)?;
            day_point(shifted).ok_or_else(out_of_range)?
        }
        TimexValue::MonthDay { month, day } => {
            TimePoint::day(reference_day.year(), *month, *day).map_err(|_| out_of_range())?
        }
        TimexValue::TimeOfDay => day_point(reference_day).ok_or_else(out_of_range)?,
    };
    Ok(Interval::from_point(point))
}

fn day_point(date: NaiveDate) -> Option<TimePoint> {
    TimePoint::day(date.year(), date.month(), date.day()).ok()
}

/// Granularity a normalized span was written at, when it is a single point.
pub fn span_granularity(span: &TemporalExpressionSpan) -> Option<Granularity> {
    match &span.value {
        TimexValue::RelativeYears { .. } => Some(Granularity::Year),
        TimexValue::RelativeMonths { .. } => Some(Granularity::Month),
        TimexValue::RelativeDays { .. } | TimexValue::MonthDay { .. } | TimexValue::TimeOfDay => {
            Some(Granularity::Day)
        }
        _ => None,
    }
}
