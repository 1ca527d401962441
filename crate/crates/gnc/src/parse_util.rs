//! Shared helpers for the line-based file formats.

use thiserror::Error;

/// A parse failure pinned to a 1-based line number.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Lines with content: (1-based line number, whitespace tokens). Blank lines
/// and `#` comments are skipped.
pub fn tokenized_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<&str> = stripped.split_whitespace().collect();
            if tokens.is_empty() {
                None
            } else {
                Some((i + 1, tokens))
            }
        })
        .collect()
}

pub fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected {what}, got '{token}'")))
}

pub fn parse_f64(token: &str, line: usize, what: &str) -> Result<f64, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected {what}, got '{token}'")))
}
