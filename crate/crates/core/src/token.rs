//! Atomic user input.
//!
//! A [`Token`] is a normalized label: trimmed, case-folded, with runs of
//! internal whitespace collapsed to a single space. Hyperlink labels such as
//! `Ice Cream Maker` therefore stay a single token (`ice cream maker`); the
//! script notation and the text tokenizer quote them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("token is empty after normalization")]
    Empty,
    #[error("utterance must contain at least one token")]
    EmptyUtterance,
    #[error("unterminated quote starting at byte {0}")]
    UnterminatedQuote(usize),
    #[error("dangling escape at byte {0}")]
    DanglingEscape(usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(text: &str) -> Result<Self, TokenError> {
        let normalized = normalize(text);
        if normalized.is_empty() {
            return Err(TokenError::Empty);
        }
        Ok(Token(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the token can be written in script notation without quotes.
    pub fn is_bare(&self) -> bool {
        !self.0.is_empty()
            && self.0 != "THETA"
            && !self
                .0
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | '"' | '\\'))
    }

    /// Script-notation form: bare when possible, otherwise double-quoted with
    /// `"` and `\` escaped.
    pub fn quoted(&self) -> String {
        if self.is_bare() {
            return self.0.clone();
        }
        let mut out = String::with_capacity(self.0.len() + 2);
        out.push('"');
        for c in self.0.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    }
}

/// Case-fold, trim and collapse internal whitespace.
pub fn normalize(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromStr for Token {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Token::new(s)
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Token::new(&raw).map_err(serde::de::Error::custom)
    }
}

/// A non-empty sequence of tokens supplied in a single turn.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Utterance(Vec<Token>);

impl Utterance {
    pub fn new(tokens: Vec<Token>) -> Result<Self, TokenError> {
        if tokens.is_empty() {
            return Err(TokenError::EmptyUtterance);
        }
        Ok(Utterance(tokens))
    }

    pub fn single(token: Token) -> Self {
        Utterance(vec![token])
    }

    /// Build from raw label strings, normalizing each.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self, TokenError> {
        let tokens = labels
            .iter()
            .map(|l| Token::new(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Utterance::new(tokens)
    }

    /// Tokenize free text: whitespace separates tokens, double quotes group a
    /// multi-word label, and backslash escapes `"` or `\` inside quotes.
    ///
    /// `d s` is two tokens, `"ice cream maker"` is one.
    pub fn parse_text(text: &str) -> Result<Self, TokenError> {
        Utterance::new(tokenize_text(text)?)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.0
    }
}

impl<'de> Deserialize<'de> for Utterance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let tokens = Vec::<Token>::deserialize(deserializer)?;
        Utterance::new(tokens).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Token::quoted).collect();
        write!(f, "<{}>", parts.join(" "))
    }
}

fn tokenize_text(text: &str) -> Result<Vec<Token>, TokenError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut buf = String::new();
        if c == '"' {
            chars.next();
            let mut closed = false;
            while let Some((i, c)) = chars.next() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match chars.next() {
                        Some((_, e)) => buf.push(e),
                        None => return Err(TokenError::DanglingEscape(i)),
                    },
                    _ => buf.push(c),
                }
            }
            if !closed {
                return Err(TokenError::UnterminatedQuote(start));
            }
        } else {
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == '"' {
                    break;
                }
                buf.push(c);
                chars.next();
            }
        }
        tokens.push(Token::new(&buf)?);
    }
    Ok(tokens)
}
