//! Shared domain types: calendar points, intervals, relations, annotated
//! questions, knowledge-base facts and answer sets.
//!
//! Dates of mixed granularity are compared by widening them to day
//! precision. A year or month widens to its first day when it is used as
//! the start of something and to its last day when it is used as the end.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timex::TemporalExpressionSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid date {0}")]
    InvalidDate(String),
    #[error("interval begin {begin} is after end {end}")]
    InvertedInterval { begin: String, end: String },
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Granularity {
    Year,
    Month,
    Day,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Begin,
    End,
}

/// A proleptic Gregorian calendar point at year, month or day granularity.
///
/// Construction validates the date, so the granularity invariants hold for
/// every value of this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimePoint {
    year: i32,
    month: Option<u32>,
    day: Option<u32>,
}

pub const MIN_YEAR: i32 = 1;
pub const MAX_YEAR: i32 = 9999;

impl TimePoint {
    pub fn year(year: i32) -> Result<Self, ModelError> {
        if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
            return Err(ModelError::InvalidDate(format!("{year}")));
        }
        Ok(Self {
            year,
            month: None,
            day: None,
        })
    }

    pub fn month(year: i32, month: u32) -> Result<Self, ModelError> {
        Self::year(year)?;
        if !(1..=12).contains(&month) {
            return Err(ModelError::InvalidDate(format!("{year:04}-{month:02}")));
        }
        Ok(Self {
            year,
            month: Some(month),
            day: None,
        })
    }

    pub fn day(year: i32, month: u32, day: u32) -> Result<Self, ModelError> {
        Self::month(year, month)?;
        if NaiveDate::from_ymd_opt(year, month, day).is_none() {
            return Err(ModelError::InvalidDate(format!(
                "{year:04}-{month:02}-{day:02}"
            )));
        }
        Ok(Self {
            year,
            month: Some(month),
            day: Some(day),
        })
    }

    pub fn from_date(date: NaiveDate) -> Self {
        Self {
            year: date.year(),
            month: Some(date.month()),
            day: Some(date.day()),
        }
    }

    pub fn year_value(&self) -> i32 {
        self.year
    }

    pub fn month_value(&self) -> Option<u32> {
        self.month
    }

    pub fn day_value(&self) -> Option<u32> {
        self.day
    }

    pub fn granularity(&self) -> Granularity {
        match (self.month, self.day) {
            (None, _) => Granularity::Year,
            (Some(_), None) => Granularity::Month,
            (Some(_), Some(_)) => Granularity::Day,
        }
    }

    /// The day this point widens to on the given side.
    pub fn bound(&self, side: Side) -> NaiveDate {
        let month = self.month.unwrap_or(match side {
            Side::Begin => 1,
            Side::End => 12,
        });
        let day = match (self.day, side) {
            (Some(d), _) => d,
            (None, Side::Begin) => 1,
            (None, Side::End) => days_in_month(self.year, month),
        };
        NaiveDate::from_ymd_opt(self.year, month, day).expect("validated on construction")
    }

    /// Widens to day granularity: earliest day for `Begin`, latest for `End`.
    pub fn widen(&self, side: Side) -> TimePoint {
        TimePoint::from_date(self.bound(side))
    }

    /// Coarsens to the given granularity, dropping finer fields.
    pub fn truncate(&self, granularity: Granularity) -> TimePoint {
        match granularity {
            Granularity::Year => TimePoint {
                year: self.year,
                month: None,
                day: None,
            },
            Granularity::Month if self.month.is_some() => TimePoint {
                year: self.year,
                month: self.month,
                day: None,
            },
            _ => *self,
        }
    }
}

pub fn days_in_month(year: i32, month: u32) -> u32 {
    let (next_year, next_month) = if month == 12 {
        (year + 1, 1)
    } else {
        (year, month + 1)
    };
    let first_of_next = NaiveDate::from_ymd_opt(next_year, next_month, 1)
        .unwrap_or(NaiveDate::from_ymd_opt(year, 12, 31).unwrap() + chrono::Days::new(1));
    let first = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    (first_of_next - first).num_days() as u32
}

impl Ord for TimePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.bound(Side::Begin), self.bound(Side::End))
            .cmp(&(other.bound(Side::Begin), other.bound(Side::End)))
    }
}

impl PartialOrd for TimePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

impl FromStr for TimePoint {
    type Err = ModelError;

    /// Parses `YYYY`, `YYYY-MM` or `YYYY-MM-DD`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidDate(s.to_string());
        let parts: Vec<&str> = s.split('-').collect();
        let widths = [4, 2, 2];
        if parts.is_empty() || parts.len() > 3 {
            return Err(bad());
        }
        for (part, width) in parts.iter().zip(widths) {
            if part.len() != width || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
        }
        let year: i32 = parts[0].parse().map_err(|_| bad())?;
        match parts.len() {
            1 => TimePoint::year(year),
            2 => TimePoint::month(year, parts[1].parse().map_err(|_| bad())?),
            _ => TimePoint::day(
                year,
                parts[1].parse().map_err(|_| bad())?,
                parts[2].parse().map_err(|_| bad())?,
            ),
        }
    }
}

impl Serialize for TimePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimePoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One side of an interval after widening. Missing sides become infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    NegInf,
    At(NaiveDate),
    PosInf,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::At(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Endpoint::PosInf => f.write_str("+inf"),
        }
    }
}

/// A possibly open interval of calendar points. `None` marks an open side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub begin: Option<TimePoint>,
    pub end: Option<TimePoint>,
}

impl Interval {
    pub fn new(begin: Option<TimePoint>, end: Option<TimePoint>) -> Result<Self, ModelError> {
        let interval = Self { begin, end };
        if let (Some(b), Some(e)) = (begin, end) {
            if interval.lower() > interval.upper() {
                return Err(ModelError::InvertedInterval {
                    begin: b.to_string(),
                    end: e.to_string(),
                });
            }
        }
        Ok(interval)
    }

    pub fn closed(begin: TimePoint, end: TimePoint) -> Result<Self, ModelError> {
        Self::new(Some(begin), Some(end))
    }

    /// Casts a point to the interval it covers at day precision.
    pub fn from_point(point: TimePoint) -> Self {
        Self {
            begin: Some(point.widen(Side::Begin)),
            end: Some(point.widen(Side::End)),
        }
    }

    pub fn unbounded() -> Self {
        Self {
            begin: None,
            end: None,
        }
    }

    pub fn lower(&self) -> Endpoint {
        self.begin
            .map_or(Endpoint::NegInf, |p| Endpoint::At(p.bound(Side::Begin)))
    }

    pub fn upper(&self) -> Endpoint {
        self.end
            .map_or(Endpoint::PosInf, |p| Endpoint::At(p.bound(Side::End)))
    }

    pub fn is_closed(&self) -> bool {
        self.begin.is_some() && self.end.is_some()
    }

    /// Begin and end widen to the same day.
    pub fn is_point(&self) -> bool {
        self.is_closed() && self.lower() == self.upper()
    }
}

/// Shorthand for [`Interval::from_point`].
pub fn interval_from_point(point: TimePoint) -> Interval {
    Interval::from_point(point)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.begin {
            Some(b) => write!(f, "[{b}, ")?,
            None => write!(f, "(open, ")?,
        }
        match self.end {
            Some(e) => write!(f, "{e}]"),
            None => write!(f, "open)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OverlapRow {
    DuringWhileWhen,
    SinceUntilIn,
    SameTimeAs,
}

/// Relation between an answer's time scope and a constraint interval.
///
/// Only `Overlap` carries a row, so the row is present exactly when the
/// relation is an overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemporalRelation {
    Before,
    After,
    Overlap(OverlapRow),
}

impl TemporalRelation {
    pub const ALL: [TemporalRelation; 5] = [
        TemporalRelation::Before,
        TemporalRelation::After,
        TemporalRelation::Overlap(OverlapRow::DuringWhileWhen),
        TemporalRelation::Overlap(OverlapRow::SinceUntilIn),
        TemporalRelation::Overlap(OverlapRow::SameTimeAs),
    ];
}

impl fmt::Display for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalRelation::Before => f.write_str("BEFORE"),
            TemporalRelation::After => f.write_str("AFTER"),
            TemporalRelation::Overlap(row) => {
                let row = match row {
                    OverlapRow::DuringWhileWhen => "DURING_WHILE_WHEN",
                    OverlapRow::SinceUntilIn => "SINCE_UNTIL_IN",
                    OverlapRow::SameTimeAs => "SAME_TIME_AS",
                };
                write!(f, "OVERLAP:{row}")
            }
        }
    }
}

impl FromStr for TemporalRelation {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, row) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        let relation = match (kind, row) {
            ("BEFORE", None) => TemporalRelation::Before,
            ("AFTER", None) => TemporalRelation::After,
            ("OVERLAP", Some("DURING_WHILE_WHEN")) => {
                TemporalRelation::Overlap(OverlapRow::DuringWhileWhen)
            }
            ("OVERLAP", Some("SINCE_UNTIL_IN")) => {
                TemporalRelation::Overlap(OverlapRow::SinceUntilIn)
            }
            ("OVERLAP", Some("SAME_TIME_AS")) => TemporalRelation::Overlap(OverlapRow::SameTimeAs),
            _ => return Err(ModelError::UnknownRelation(s.to_string())),
        };
        Ok(relation)
    }
}

impl Serialize for TemporalRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TemporalRelation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The thirteen Allen relations, read as "first interval REL second interval".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AllenRelation {
    Equal,
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    During,
    Contains,
    Starts,
    StartedBy,
    Finishes,
    FinishedBy,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Equal,
        AllenRelation::Before,
        AllenRelation::After,
        AllenRelation::Meets,
        AllenRelation::MetBy,
        AllenRelation::Overlaps,
        AllenRelation::OverlappedBy,
        AllenRelation::During,
        AllenRelation::Contains,
        AllenRelation::Starts,
        AllenRelation::StartedBy,
        AllenRelation::Finishes,
        AllenRelation::FinishedBy,
    ];

    pub fn inverse(self) -> AllenRelation {
        use AllenRelation::*;
        match self {
            Equal => Equal,
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            During => Contains,
            Contains => During,
            Starts => StartedBy,
            StartedBy => Starts,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pos {
    Noun,
    Propn,
    Verb,
    Aux,
    Adj,
    Adv,
    Adp,
    Det,
    Pron,
    Wh,
    Num,
    Conj,
    Part,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub surface: String,
    pub pos: Pos,
    /// Byte offsets into the question text.
    pub start: usize,
    pub end: usize,
    /// Entity span this pronoun refers to, when resolved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coref: Option<usize>,
}

impl Token {
    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

/// Half-open token range `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    /// `None` for proper-noun spans that did not link to the KB.
    pub entity: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalSpan {
    pub start: usize,
    pub end: usize,
    pub phrase: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrdinalKind {
    First,
    Last,
    Nth(u32),
}

impl fmt::Display for OrdinalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalKind::First => f.write_str("FIRST"),
            OrdinalKind::Last => f.write_str("LAST"),
            OrdinalKind::Nth(n) => write!(f, "NTH:{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalSpan {
    pub start: usize,
    pub end: usize,
    pub kind: OrdinalKind,
}

/// A question with token, POS, entity, temporal-expression, signal and
/// ordinal layers. Spans within one layer never overlap.
///
/// All signal-dictionary hits are kept; deciding which are used temporally
/// is left to the detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedQuestion {
    pub text: String,
    pub tokens: Vec<Token>,
    pub entity_spans: Vec<EntitySpan>,
    pub timex_spans: Vec<TemporalExpressionSpan>,
    pub signal_spans: Vec<SignalSpan>,
    pub ordinal_span: Option<OrdinalSpan>,
    pub answer_type_temporal: bool,
}

impl AnnotatedQuestion {
    pub fn entity_at(&self, token: usize) -> Option<usize> {
        self.entity_spans
            .iter()
            .position(|s| s.start <= token && token < s.end)
    }

    pub fn timex_at(&self, token: usize) -> Option<usize> {
        self.timex_spans
            .iter()
            .position(|s| s.start <= token && token < s.end)
    }

    /// Lower-cased surface of a token range.
    pub fn span_text(&self, start: usize, end: usize) -> String {
        self.tokens[start..end]
            .iter()
            .map(Token::lower)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FactObject {
    Entity(String),
    Literal(String),
    Date(TimePoint),
}

impl fmt::Display for FactObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactObject::Entity(id) => f.write_str(id),
            FactObject::Literal(s) => write!(f, "\"{s}\""),
            FactObject::Date(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub subject: String,
    pub predicate: String,
    pub object: FactObject,
    pub compound: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnswerValue {
    Entity(String),
    Date(TimePoint),
}

impl AnswerValue {
    /// Reads an ISO date when the text is one, otherwise an entity id.
    pub fn parse(s: &str) -> AnswerValue {
        match s.parse::<TimePoint>() {
            Ok(p) => AnswerValue::Date(p),
            Err(_) => AnswerValue::Entity(s.to_string()),
        }
    }
}

impl fmt::Display for AnswerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnswerValue::Entity(id) => f.write_str(id),
            AnswerValue::Date(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for AnswerValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AnswerValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(AnswerValue::parse(&String::deserialize(deserializer)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeStatus {
    Pending,
    Scoped,
    Unscoped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub value: AnswerValue,
    pub time_scopes: Vec<Interval>,
    pub status: ScopeStatus,
}

impl Answer {
    pub fn pending(value: AnswerValue) -> Self {
        Self {
            value,
            time_scopes: Vec::new(),
            status: ScopeStatus::Pending,
        }
    }

    pub fn scoped(value: AnswerValue, scopes: Vec<Interval>) -> Self {
        let status = if scopes.is_empty() {
            ScopeStatus::Unscoped
        } else {
            ScopeStatus::Scoped
        };
        Self {
            value,
            time_scopes: scopes,
            status,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSet {
    pub answers: Vec<Answer>,
}

impl AnswerSet {
    pub fn new(answers: Vec<Answer>) -> Self {
        Self { answers }
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn values(&self) -> Vec<AnswerValue> {
        self.answers.iter().map(|a| a.value.clone()).collect()
    }

    pub fn contains(&self, value: &AnswerValue) -> bool {
        self.answers.iter().any(|a| &a.value == value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> TimePoint {
        s.parse().unwrap()
    }

    #[test]
    fn widen_examples() {
        assert_eq!(d("2016").widen(Side::Begin), d("2016-01-01"));
        assert_eq!(d("2016-05").widen(Side::End), d("2016-05-31"));
        assert_eq!(d("2016-05-02").widen(Side::Begin), d("2016-05-02"));
        assert_eq!(d("2016-02").widen(Side::End), d("2016-02-29"));
        assert_eq!(d("1900-02").widen(Side::End), d("1900-02-28"));
        assert_eq!(d("9999").widen(Side::End), d("9999-12-31"));
    }

    #[test]
    fn interval_from_point_examples() {
        let i = interval_from_point(d("2016-05-02"));
        assert_eq!(
            (i.begin, i.end),
            (Some(d("2016-05-02")), Some(d("2016-05-02")))
        );
        let i = interval_from_point(d("2016"));
        assert_eq!(
            (i.begin, i.end),
            (Some(d("2016-01-01")), Some(d("2016-12-31")))
        );
        let i = interval_from_point(d("2016-05"));
        assert_eq!(
            (i.begin, i.end),
            (Some(d("2016-05-01")), Some(d("2016-05-31")))
        );
    }

    #[test]
    fn rejects_invalid_dates() {
        assert!(TimePoint::day(2015, 2, 29).is_err());
        assert!(TimePoint::month(2015, 13).is_err());
        assert!(TimePoint::year(0).is_err());
        assert!("2016-5-02".parse::<TimePoint>().is_err());
        assert!("20160502".parse::<TimePoint>().is_err());
        assert!("".parse::<TimePoint>().is_err());
    }

    #[test]
    fn interval_rejects_inverted_bounds() {
        assert!(Interval::closed(d("2017"), d("2016-12-31")).is_err());
        // 2016 widens to [2016-01-01, 2016-12-31], so a same-year end is fine.
        assert!(Interval::closed(d("2016"), d("2016")).is_ok());
        assert!(Interval::closed(d("2016-06"), d("2016")).is_ok());
    }

    #[test]
    fn open_sides_are_infinite() {
        let i = Interval::new(None, Some(d("2010"))).unwrap();
        assert_eq!(i.lower(), Endpoint::NegInf);
        let j = Interval::new(Some(d("2010")), None).unwrap();
        assert_eq!(j.upper(), Endpoint::PosInf);
        assert_eq!(j.to_string(), "[2010, open)");
    }

    #[test]
    fn relation_text_round_trip() {
        for r in TemporalRelation::ALL {
            assert_eq!(r.to_string().parse::<TemporalRelation>().unwrap(), r);
        }
        assert!("OVERLAP".parse::<TemporalRelation>().is_err());
        assert!("BEFORE:SAME_TIME_AS".parse::<TemporalRelation>().is_err());
    }

    fn arb_point() -> impl Strategy<Value = TimePoint> {
        (1i32..=9999, 0u32..=12, 0u32..=31).prop_map(|(y, m, day)| {
            if m == 0 {
                TimePoint::year(y).unwrap()
            } else if day == 0 {
                TimePoint::month(y, m).unwrap()
            } else {
                let day = day.min(days_in_month(y, m));
                TimePoint::day(y, m, day).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn order_is_total(a in arb_point(), b in arb_point()) {
            let n = [a < b, a == b, a > b].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }

        #[test]
        fn point_interval_is_ordered(p in arb_point()) {
            let i = interval_from_point(p);
            prop_assert!(i.lower() <= i.upper());
            prop_assert!(Interval::new(i.begin, i.end).is_ok());
        }

        #[test]
        fn iso_text_round_trip(p in arb_point()) {
            prop_assert_eq!(p.to_string().parse::<TimePoint>().unwrap(), p);
        }
    }
}
