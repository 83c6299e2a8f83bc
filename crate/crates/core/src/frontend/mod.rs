//! Source syntax: lexing, parsing and re-rendering of annotated grammars.

mod lexer;
mod parser;
mod render;

pub use lexer::{tokenize, LexError, Position, Token, TokenKind};
pub use parser::{parse_module, ParseError};
pub use render::{render_shifts, render_source};

use thiserror::Error;

use crate::grammar::SourceGrammar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("lexical error at {0}")]
    Lex(#[from] LexError),
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
}

impl FrontendError {
    pub fn position(&self) -> Position {
        match self {
            FrontendError::Lex(e) => e.position,
            FrontendError::Parse(e) => e.position,
        }
    }
}

/// Tokenizes and parses in one step.
pub fn parse_source(text: &str) -> Result<SourceGrammar, FrontendError> {
    let tokens = tokenize(text)?;
    Ok(parse_module(&tokens)?)
}
