use std::fmt;

use thiserror::Error;

use super::lexer::{Position, Token, TokenKind};
use crate::grammar::{
    BindingSpec, Category, Constructor, CountExpr, InductiveGroup, Param, ParamKind, Shift,
    SourceGrammar,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: Position,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.position)?;
        if let Some(m) = &self.message {
            return write!(f, "{m}");
        }
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// Position reported when input runs out.
    eof: Position,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn peek_kind_at(&self, ahead: usize) -> Option<TokenKind> {
        self.tokens.get(self.pos + ahead).map(|t| t.kind)
    }

    fn here(&self) -> Position {
        self.peek().map(|t| t.position).unwrap_or(self.eof)
    }

    fn error(&self, expected: &[TokenKind]) -> ParseError {
        ParseError {
            position: self.here(),
            expected: expected.iter().map(|k| k.describe().to_string()).collect(),
            found: self
                .peek()
                .map(|t| format!("`{}`", t.lexeme))
                .unwrap_or_else(|| "end of input".into()),
            message: None,
        }
    }

    fn error_msg(&self, position: Position, message: String) -> ParseError {
        ParseError {
            position,
            expected: Vec::new(),
            found: String::new(),
            message: Some(message),
        }
    }

    fn eat(&mut self, kind: TokenKind) -> Option<&'t Token> {
        let tok = self.peek().filter(|t| t.kind == kind)?;
        self.pos += 1;
        Some(tok)
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<&'t Token> {
        self.eat(kind).ok_or_else(|| self.error(&[kind]))
    }

    fn ident(&mut self) -> PResult<String> {
        Ok(self.expect(TokenKind::Ident)?.lexeme.clone())
    }

    fn module(&mut self) -> PResult<SourceGrammar> {
        self.expect(TokenKind::Module)?;
        let name_tok = self.expect(TokenKind::Ident)?;
        self.expect(TokenKind::Dot)?;
        let mut groups = vec![self.inductive()?];
        while self.peek_kind() == Some(TokenKind::Inductive) {
            groups.push(self.inductive()?);
        }
        if self.peek_kind() != Some(TokenKind::End) {
            return Err(self.error(&[TokenKind::Inductive, TokenKind::End]));
        }
        self.pos += 1;
        let closing = self.expect(TokenKind::Ident)?;
        if closing.lexeme != name_tok.lexeme {
            return Err(self.error_msg(
                closing.position,
                format!(
                    "module `{}` is closed by `End {}`",
                    name_tok.lexeme, closing.lexeme
                ),
            ));
        }
        self.expect(TokenKind::Dot)?;
        if self.peek().is_some() {
            return Err(self.error(&[]));
        }
        Ok(SourceGrammar {
            module_name: name_tok.lexeme.clone(),
            groups,
        })
    }

    fn inductive(&mut self) -> PResult<InductiveGroup> {
        self.expect(TokenKind::Inductive)?;
        let mut categories = vec![self.category()?];
        while self.eat(TokenKind::With).is_some() {
            categories.push(self.category()?);
        }
        self.expect(TokenKind::Dot)?;
        Ok(InductiveGroup { categories })
    }

    fn category(&mut self) -> PResult<Category> {
        let name_tok = self.expect(TokenKind::Ident)?;
        if name_tok.lexeme == "nat" {
            return Err(self.error_msg(name_tok.position, "`nat` cannot be redefined".into()));
        }
        self.expect(TokenKind::Colon)?;
        self.expect(TokenKind::Type)?;
        self.expect(TokenKind::ColonEq)?;
        let mut constructors = Vec::new();
        while self.eat(TokenKind::Pipe).is_some() {
            constructors.push(self.constructor()?);
        }
        match self.peek_kind() {
            Some(TokenKind::Dot | TokenKind::With) => {}
            _ => return Err(self.error(&[TokenKind::Pipe, TokenKind::With, TokenKind::Dot])),
        }
        Ok(Category {
            name: name_tok.lexeme.clone(),
            constructors,
        })
    }

    fn constructor(&mut self) -> PResult<Constructor> {
        let name = self.ident()?;
        let mut params = Vec::new();
        while self.peek_kind() == Some(TokenKind::LParen) {
            params.push(self.param()?);
        }
        match self.peek_kind() {
            Some(TokenKind::Pipe | TokenKind::Dot | TokenKind::With) => {}
            _ => {
                return Err(self.error(&[
                    TokenKind::LParen,
                    TokenKind::Pipe,
                    TokenKind::With,
                    TokenKind::Dot,
                ]))
            }
        }
        Ok(Constructor { name, params })
    }

    fn param(&mut self) -> PResult<Param> {
        self.expect(TokenKind::LParen)?;
        enum Annot {
            None,
            Index,
            Bind(BindingSpec),
        }
        let annot = if self.eat(TokenKind::CommentOpen).is_some() {
            let a = match self.peek_kind() {
                Some(TokenKind::Index) => {
                    self.pos += 1;
                    Annot::Index
                }
                Some(TokenKind::Bind) => {
                    self.pos += 1;
                    let spec = self.shifts()?;
                    self.expect(TokenKind::In)?;
                    Annot::Bind(spec)
                }
                _ => return Err(self.error(&[TokenKind::Index, TokenKind::Bind])),
            };
            self.expect(TokenKind::CommentClose)?;
            a
        } else {
            Annot::None
        };
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let ty_tok = self.expect(TokenKind::Ident)?;
        self.expect(TokenKind::RParen)?;
        let is_nat = ty_tok.lexeme == "nat";
        let kind = match annot {
            Annot::Index if is_nat => ParamKind::Index,
            Annot::Index => {
                return Err(self.error_msg(
                    ty_tok.position,
                    format!("index parameter `{name}` must have type `nat`"),
                ))
            }
            Annot::Bind(_) if is_nat => {
                return Err(self.error_msg(
                    ty_tok.position,
                    format!("binding parameter `{name}` must have a category type, not `nat`"),
                ))
            }
            Annot::Bind(spec) => ParamKind::Subterm {
                category: ty_tok.lexeme.clone(),
                binding: Some(spec),
            },
            Annot::None if is_nat => ParamKind::Nat,
            Annot::None => ParamKind::Subterm {
                category: ty_tok.lexeme.clone(),
                binding: None,
            },
        };
        Ok(Param { name, kind })
    }

    fn shifts(&mut self) -> PResult<BindingSpec> {
        let mut shifts = vec![self.shift()?];
        while self.eat(TokenKind::Comma).is_some() {
            shifts.push(self.shift()?);
        }
        Ok(BindingSpec { shifts })
    }

    fn shift(&mut self) -> PResult<Shift> {
        if self.eat(TokenKind::LBracket).is_some() {
            let count = self.expr()?;
            let sort = self.ident()?;
            self.expect(TokenKind::RBracket)?;
            Ok(Shift { count, sort })
        } else if self.peek_kind() == Some(TokenKind::Ident) {
            Ok(Shift {
                count: CountExpr::Lit(1),
                sort: self.ident()?,
            })
        } else {
            Err(self.error(&[TokenKind::Ident, TokenKind::LBracket]))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> PResult<CountExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Plus) => {
                    self.pos += 1;
                    lhs = CountExpr::add(lhs, self.term()?);
                }
                Some(TokenKind::Minus) => {
                    self.pos += 1;
                    lhs = CountExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := atom ('*' atom)*
    fn term(&mut self) -> PResult<CountExpr> {
        let mut lhs = self.atom()?;
        while self.eat(TokenKind::Star).is_some() {
            lhs = CountExpr::mul(lhs, self.atom()?);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> PResult<CountExpr> {
        match self.peek_kind() {
            Some(TokenKind::Nat) => {
                let tok = self.expect(TokenKind::Nat)?;
                tok.lexeme
                    .parse()
                    .map(CountExpr::Lit)
                    .map_err(|_| self.error_msg(tok.position, "number literal too large".into()))
            }
            // An identifier directly followed by `]` is the bound sort, which
            // means the count expression is missing.
            Some(TokenKind::Ident) if self.peek_kind_at(1) != Some(TokenKind::RBracket) => {
                Ok(CountExpr::Var(self.ident()?))
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            _ => Err(self.error(&[TokenKind::Nat, TokenKind::Ident, TokenKind::LParen])),
        }
    }
}

/// Parses a full module from the token stream produced by
/// [`tokenize`](super::tokenize).
pub fn parse_module(tokens: &[Token]) -> Result<SourceGrammar, ParseError> {
    let eof = tokens
        .last()
        .map(|t| Position {
            line: t.position.line,
            column: t.position.column + t.lexeme.chars().count(),
        })
        .unwrap_or(Position { line: 1, column: 1 });
    let mut p = Parser {
        tokens,
        pos: 0,
        eof,
    };
    p.module()
}
