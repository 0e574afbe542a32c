//! Concrete syntax for dialog scripts.
//!
//! ```text
//! node := TOKEN | ('I' | 'PE' | 'C' | 'A') '[' node+ ']' | 'THETA'
//! ```
//!
//! Children are whitespace separated. A token containing whitespace or any of
//! `[ ] " \` is written in double quotes with `\"` and `\\` escapes. Parsing
//! never simplifies, so unsimplified forms such as `A[THETA]` survive.

use thiserror::Error;

use super::node::{DialogNode, Stager};
use crate::token::{Token, TokenError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

pub fn parse_script(text: &str) -> Result<DialogNode, ParseError> {
    let mut parser = Parser { src: text, pos: 0 };
    let node = parser.node()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(ParseError::new(parser.pos, "trailing input after script"));
    }
    Ok(node)
}

pub fn render_script(node: &DialogNode) -> String {
    node.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn node(&mut self) -> Result<DialogNode, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::new(start, "expected a node, found end of input")),
            Some('[') => Err(ParseError::new(start, "`[` must follow a stager")),
            Some(']') => Err(ParseError::new(start, "unexpected `]`")),
            Some('"') => {
                let text = self.quoted()?;
                self.skip_ws();
                if self.peek() == Some('[') {
                    return Err(ParseError::new(start, "a quoted token cannot open a composite"));
                }
                token(&text, start).map(DialogNode::Prompt)
            }
            Some(_) => {
                let word = self.word();
                let after = self.pos;
                self.skip_ws();
                if self.peek() == Some('[') {
                    let stager: Stager =
                        word.parse().map_err(|m: String| ParseError::new(start, m))?;
                    self.pos += 1;
                    let children = self.children(start)?;
                    return Ok(DialogNode::composite(stager, children));
                }
                self.pos = after;
                if word == "THETA" {
                    Ok(DialogNode::Theta)
                } else {
                    token(word, start).map(DialogNode::Prompt)
                }
            }
        }
    }

    fn children(&mut self, open: usize) -> Result<Vec<DialogNode>, ParseError> {
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(ParseError::new(open, "unclosed `[`")),
                Some(_) => children.push(self.node()?),
            }
        }
        if children.is_empty() {
            return Err(ParseError::new(open, "composite must have at least one child"));
        }
        Ok(children)
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '[' | ']' | '"') {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn quoted(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut buf = String::new();
        loop {
            match self.peek() {
                None => return Err(ParseError::new(start, "unterminated quoted token")),
                Some('"') => {
                    self.pos += 1;
                    return Ok(buf);
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c @ ('"' | '\\')) => {
                            buf.push(c);
                            self.pos += 1;
                        }
                        _ => return Err(ParseError::new(self.pos, "invalid escape")),
                    }
                }
                Some(c) => {
                    buf.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
    }
}

fn token(text: &str, at: usize) -> Result<Token, ParseError> {
    Token::new(text).map_err(|e: TokenError| ParseError::new(at, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DialogNode {
        DialogNode::Prompt(Token::new(s).unwrap())
    }

    #[test]
    fn flat_partial_evaluator() {
        assert_eq!(
            parse_script("PE[a b c]").unwrap(),
            DialogNode::composite(Stager::PE, vec![p("a"), p("b"), p("c")])
        );
    }

    #[test]
    fn breakfast_dialog_round_trips() {
        let text = "PE[C[e1 e2] C[c1 c2] C[b1 b2]]";
        let node = parse_script(text).unwrap();
        let c = |a: &str, b: &str| DialogNode::composite(Stager::C, vec![p(a), p(b)]);
        assert_eq!(
            node,
            DialogNode::composite(Stager::PE, vec![c("e1", "e2"), c("c1", "c2"), c("b1", "b2")])
        );
        assert_eq!(render_script(&node), text);
    }

    #[test]
    fn empty_composite_rejected() {
        let err = parse_script("PE[]").unwrap_err();
        assert_eq!(err.position, 0);
        assert!(err.message.contains("at least one child"));
    }

    #[test]
    fn rendering_of_small_forms() {
        assert_eq!(render_script(&DialogNode::composite(Stager::C, vec![p("c2")])), "C[c2]");
        assert_eq!(render_script(&DialogNode::Theta), "THETA");
        assert_eq!(parse_script("THETA").unwrap(), DialogNode::Theta);
        assert_eq!(parse_script("A[THETA]").unwrap().to_string(), "A[THETA]");
    }

    #[test]
    fn quoted_multi_word_tokens() {
        let node = parse_script(r#"PE["Ice Cream  Maker" "a\"b" home]"#).unwrap();
        assert_eq!(node.to_string(), r#"PE["ice cream maker" "a\"b" home]"#);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_script("PE[a b").unwrap_err().message, "unclosed `[`");
        assert_eq!(parse_script("X[a]").unwrap_err().message, "unknown stager `X`");
        assert_eq!(parse_script("a b").unwrap_err().position, 2);
        assert!(parse_script("").is_err());
        assert!(parse_script("PE[a ]]").is_err());
        assert!(parse_script(r#""a"[b]"#).is_err());
        assert!(parse_script(r#"PE["\x"]"#).is_err());
    }

    #[test]
    fn stager_words_are_plain_tokens_without_brackets() {
        let node = parse_script("C[PE a]").unwrap();
        assert_eq!(node.to_string(), "C[pe a]");
    }
}
