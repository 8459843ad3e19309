//! Tokenization, a light suffix stemmer and the closed-class lexicon used
//! by the built-in question annotator.

use crate::model::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

/// Splits text into word and punctuation tokens.
///
/// Words keep internal `-`, `/`, `:` and `.` when they sit between
/// alphanumerics (`2016-05-02`, `05/02/2016`, `9:30`, `saint-germain`).
/// A possessive `'s` becomes its own token.
pub fn tokenize(text: &str) -> Vec<RawToken> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(text.len(), |(b, _)| *b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_alphanumeric() {
                    j += 1;
                } else if matches!(cj, '-' | '/' | ':' | '.')
                    && j + 1 < chars.len()
                    && chars[j + 1].1.is_alphanumeric()
                    && chars[j - 1].1.is_alphanumeric()
                {
                    j += 2;
                } else {
                    break;
                }
            }
            tokens.push(RawToken {
                surface: text[start..end_of(j)].to_string(),
                start,
                end: end_of(j),
            });
            i = j;
            continue;
        }
        if (c == '\'' || c == '\u{2019}')
            && i + 1 < chars.len()
            && matches!(chars[i + 1].1, 's' | 'S')
            && chars.get(i + 2).is_none_or(|(_, n)| !n.is_alphanumeric())
        {
            tokens.push(RawToken {
                surface: text[start..end_of(i + 2)].to_string(),
                start,
                end: end_of(i + 2),
            });
            i += 2;
            continue;
        }
        tokens.push(RawToken {
            surface: c.to_string(),
            start,
            end: end_of(i + 1),
        });
        i += 1;
    }
    tokens
}

pub fn is_punct(token: &str) -> bool {
    !token.chars().any(char::is_alphanumeric)
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3
        && b[n - 1] == b[n - 2]
        && !is_vowel(b[n - 1])
        && !matches!(b[n - 1], b'l' | b's' | b'z')
    {
        stem[..n - 1].to_string()
    } else {
        stem.to_string()
    }
}

/// Conflates inflected and agentive forms: `played`, `playing`, `players`
/// and `player` all stem to `play`; `married` to `marry`.
pub fn stem(word: &str) -> String {
    let w = word.to_lowercase();
    if !w.is_ascii() || w.len() <= 3 {
        return w;
    }
    if let Some(s) = w.strip_suffix("ies").or_else(|| w.strip_suffix("ied")) {
        if s.len() >= 2 {
            return format!("{s}y");
        }
    }
    let w = match w.strip_suffix("es") {
        Some(s)
            if s.len() >= 3
                && (s.ends_with('s')
                    || s.ends_with('x')
                    || s.ends_with("ch")
                    || s.ends_with("sh")) =>
        {
            s.to_string()
        }
        _ => match w.strip_suffix('s') {
            Some(s)
                if s.len() >= 3 && !s.ends_with('s') && !s.ends_with('u') && !s.ends_with('i') =>
            {
                s.to_string()
            }
            _ => w,
        },
    };
    if let Some(s) = w.strip_suffix("ing") {
        if s.len() >= 3 && s.bytes().any(is_vowel) {
            return undouble(s);
        }
    }
    if let Some(s) = w.strip_suffix("ed") {
        if s.len() >= 3 && s.bytes().any(is_vowel) {
            return undouble(s);
        }
    }
    if let Some(s) = w.strip_suffix("er") {
        if s.len() >= 3 && s.bytes().any(is_vowel) {
            return undouble(s);
        }
    }
    w
}

pub const WH_WORDS: &[&str] = &[
    "who", "whom", "whose", "what", "which", "where", "when", "why", "how",
];

const AUXILIARIES: &[&str] = &[
    "is", "are", "was", "were", "be", "been", "being", "am", "do", "does", "did", "has", "have",
    "had", "will", "would", "can", "could", "shall", "should", "may", "might", "must",
];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "each", "every", "some", "any", "all",
];

pub const PREPOSITIONS: &[&str] = &[
    "of",
    "in",
    "on",
    "at",
    "for",
    "with",
    "by",
    "from",
    "to",
    "into",
    "about",
    "under",
    "over",
    "before",
    "after",
    "during",
    "since",
    "until",
    "till",
    "while",
    "than",
    "as",
    "between",
    "against",
    "through",
    "throughout",
    "without",
    "within",
    "following",
    "prior",
    "amid",
];

pub const PRONOUNS: &[&str] = &[
    "he", "she", "it", "they", "him", "her", "them", "his", "hers", "its", "their", "theirs", "i",
    "me", "my", "we", "us", "our", "you", "your",
];

pub const SUBJECT_PRONOUNS: &[&str] = &["he", "she", "they"];

pub const POSSESSIVE_PRONOUNS: &[&str] = &["his", "her", "its", "their", "my", "our", "your"];

const CONJUNCTIONS: &[&str] = &["and", "or", "but", "nor"];

const ADVERBS: &[&str] = &[
    "not", "also", "then", "ever", "never", "still", "already", "ago", "later", "earlier", "first",
    "last",
];

/// Base forms of verbs the annotator should recognise without the suffix
/// heuristic. Inflections are matched through [`stem`].
const VERBS: &[&str] = &[
    "play", "join", "leave", "left", "live", "marry", "win", "won", "coach", "sign", "move",
    "transfer", "become", "became", "serve", "lead", "led", "manage", "work", "start", "end",
    "begin", "began", "die", "born", "found", "happen", "take", "took", "choose", "chose", "name",
    "score", "release", "land", "come", "came", "go", "went", "get", "got", "make", "made", "hold",
    "held", "attend", "study", "teach", "taught", "divorce", "captain", "graduate", "retire",
    "return", "elect", "appoint", "debut", "compete", "host",
];

/// Nouns that would otherwise trip the `-ing`/`-ed` verb heuristic, plus
/// verb-lexicon homographs that are nouns in questions.
const NOUN_EXCEPTIONS: &[&str] = &[
    "wedding", "building", "morning", "evening", "thing", "king", "ring", "spring", "ceiling",
    "meeting", "beijing", "sibling", "darling", "hundred", "captain", "name", "end", "start",
    "host", "land", "lead", "team", "bed", "red", "seed", "feed", "world", "cup", "club",
];

pub fn is_wh(word: &str) -> bool {
    WH_WORDS.contains(&word)
}

pub fn is_aux(word: &str) -> bool {
    AUXILIARIES.contains(&word)
}

pub fn is_preposition(word: &str) -> bool {
    PREPOSITIONS.contains(&word)
}

/// Assigns a coarse part of speech to a lower-cased word in context.
///
/// `first` marks the first word of the question; `capitalized` reflects the
/// original surface.
pub fn coarse_pos(word: &str, capitalized: bool, first: bool, next: Option<&str>) -> Pos {
    if is_punct(word) {
        return Pos::Punct;
    }
    if word == "'s" || word == "\u{2019}s" {
        return Pos::Part;
    }
    if word.chars().all(|c| c.is_ascii_digit()) {
        return Pos::Num;
    }
    if is_wh(word) {
        return Pos::Wh;
    }
    if is_aux(word) {
        return Pos::Aux;
    }
    if DETERMINERS.contains(&word) {
        return Pos::Det;
    }
    if PRONOUNS.contains(&word) {
        return Pos::Pron;
    }
    if CONJUNCTIONS.contains(&word) {
        return Pos::Conj;
    }
    if is_preposition(word) {
        return Pos::Adp;
    }
    if capitalized && !first {
        return Pos::Propn;
    }
    if ADVERBS.contains(&word) {
        // "first" / "last" before a noun act as adjectives.
        if matches!(word, "first" | "last")
            && next.is_some_and(|n| !is_punct(n) && !is_preposition(n))
        {
            return Pos::Adj;
        }
        return Pos::Adv;
    }
    if NOUN_EXCEPTIONS.contains(&word) {
        return Pos::Noun;
    }
    if VERBS.contains(&word) || VERBS.contains(&stem(word).as_str()) {
        return Pos::Verb;
    }
    if word.len() > 5 && (word.ends_with("ing") || word.ends_with("ed")) {
        return Pos::Verb;
    }
    Pos::Noun
}

/// Function words ignored when matching a question against predicate names.
pub const QUESTION_STOPWORDS: &[&str] = &[
    "the", "a", "an", "of", "for", "in", "on", "at", "to", "by", "with", "from", "and", "or",
    "happen", "happened", "take", "place", "there", "that", "this", "year", "date", "time", "day",
    "century", "decade", "'s",
];

pub fn is_question_stopword(word: &str) -> bool {
    QUESTION_STOPWORDS.contains(&word)
        || is_wh(word)
        || is_aux(word)
        || PRONOUNS.contains(&word)
        || is_punct(word)
}
