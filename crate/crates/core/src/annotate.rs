//! Built-in question annotator: tokens, coarse POS tags, entity links,
//! temporal expressions, signal and ordinal hits, answer type and a simple
//! pronoun resolution.

use std::sync::Arc;

use crate::detector::{matches_temporal_answer_type, OrdinalDictionary, SignalDictionary};
use crate::kb::KbStore;
use crate::model::{AnnotatedQuestion, EntitySpan, OrdinalSpan, Pos, SignalSpan, TimePoint, Token};
use crate::text::{coarse_pos, tokenize, SUBJECT_PRONOUNS};
use crate::timex::{resolve_relative, Tagger, TimexType};

#[derive(Debug, Clone)]
pub struct Annotator {
    store: Arc<KbStore>,
    tagger: Tagger,
    signals: SignalDictionary,
    ordinals: OrdinalDictionary,
    reference: TimePoint,
}

impl Annotator {
    pub fn new(
        store: Arc<KbStore>,
        tagger: Tagger,
        signals: SignalDictionary,
        ordinals: OrdinalDictionary,
        reference: TimePoint,
    ) -> Self {
        Self {
            store,
            tagger,
            signals,
            ordinals,
            reference,
        }
    }

    pub fn tagger(&self) -> &Tagger {
        &self.tagger
    }

    pub fn signals(&self) -> &SignalDictionary {
        &self.signals
    }

    pub fn reference(&self) -> TimePoint {
        self.reference
    }

    pub fn annotate(&self, text: &str) -> AnnotatedQuestion {
        let raw = tokenize(text);
        let words: Vec<String> = raw.iter().map(|t| t.surface.to_lowercase()).collect();

        let mut timex_spans = self.tagger.tag_tokens(text, &raw);
        resolve_relative(&mut timex_spans, self.reference);
        let in_timex = |i: usize| {
            timex_spans
                .iter()
                .any(|s| s.timex_type != TimexType::Event && s.start <= i && i < s.end)
        };

        let mut tokens: Vec<Token> = raw
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let capitalized = t.surface.chars().next().is_some_and(char::is_uppercase);
                let pos = coarse_pos(
                    &words[i],
                    capitalized,
                    i == 0,
                    words.get(i + 1).map(String::as_str),
                );
                Token {
                    index: i,
                    surface: t.surface.clone(),
                    pos,
                    start: t.start,
                    end: t.end,
                    coref: None,
                }
            })
            .collect();

        let mut entity_spans: Vec<EntitySpan> = self
            .store
            .link_entities(&words)
            .into_iter()
            .filter(|s| !(s.start..s.end).any(in_timex))
            .collect();
        // unlinked runs of capitalized words
        let mut i = 0;
        while i < tokens.len() {
            let covered =
                |j: usize| entity_spans.iter().any(|s| s.start <= j && j < s.end) || in_timex(j);
            if tokens[i].pos == Pos::Propn && !covered(i) {
                let start = i;
                while i < tokens.len() && tokens[i].pos == Pos::Propn && !covered(i) {
                    i += 1;
                }
                entity_spans.push(EntitySpan {
                    start,
                    end: i,
                    entity: None,
                });
            } else {
                i += 1;
            }
        }
        entity_spans.sort_by_key(|s| s.start);

        for (i, token) in tokens.iter_mut().enumerate() {
            if in_timex(i) {
                token.pos = if words[i].chars().all(|c| c.is_ascii_digit()) {
                    Pos::Num
                } else {
                    Pos::Noun
                };
            } else if entity_spans.iter().any(|s| s.start <= i && i < s.end)
                && token.pos != Pos::Part
            {
                token.pos = Pos::Propn;
            }
        }

        let blocked =
            |i: usize| in_timex(i) || entity_spans.iter().any(|s| s.start <= i && i < s.end);
        let mut signal_spans = Vec::new();
        let mut ordinal_span = None;
        let mut i = 0;
        while i < words.len() {
            if blocked(i) {
                i += 1;
                continue;
            }
            if let Some((n, _)) = self.signals.match_at(&words, i) {
                if !(i..i + n).any(blocked) {
                    signal_spans.push(SignalSpan {
                        start: i,
                        end: i + n,
                        phrase: words[i..i + n].join(" "),
                    });
                    i += n;
                    continue;
                }
            }
            if ordinal_span.is_none() {
                if let Some((n, kind)) = self.ordinals.match_at(&words, i) {
                    if !(i..i + n).any(blocked) {
                        ordinal_span = Some(OrdinalSpan {
                            start: i,
                            end: i + n,
                            kind,
                        });
                        i += n;
                        continue;
                    }
                }
            }
            i += 1;
        }

        // third-person subject pronouns refer to the first entity before them
        for i in 0..tokens.len() {
            if SUBJECT_PRONOUNS.contains(&words[i].as_str()) {
                tokens[i].coref = entity_spans
                    .iter()
                    .position(|s| s.end <= i && s.entity.is_some());
            }
        }

        AnnotatedQuestion {
            text: text.to_string(),
            answer_type_temporal: matches_temporal_answer_type(&words),
            tokens,
            entity_spans,
            timex_spans,
            signal_spans,
            ordinal_span,
        }
    }
}
