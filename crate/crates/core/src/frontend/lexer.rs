use std::fmt;

use thiserror::Error;

/// 1-based line and column (columns count characters, not bytes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    // keywords
    Module,
    End,
    Inductive,
    Type,
    With,
    In,
    Bind,
    Index,
    Ident,
    Nat,
    // punctuation
    LParen,
    RParen,
    Colon,
    ColonEq,
    Pipe,
    Dot,
    Comma,
    LBracket,
    RBracket,
    // operators
    Plus,
    Minus,
    Star,
    CommentOpen,
    CommentClose,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::Module => "`Module`",
            TokenKind::End => "`End`",
            TokenKind::Inductive => "`Inductive`",
            TokenKind::Type => "`Type`",
            TokenKind::With => "`with`",
            TokenKind::In => "`in`",
            TokenKind::Bind => "`bind`",
            TokenKind::Index => "`index`",
            TokenKind::Ident => "identifier",
            TokenKind::Nat => "natural number",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Colon => "`:`",
            TokenKind::ColonEq => "`:=`",
            TokenKind::Pipe => "`|`",
            TokenKind::Dot => "`.`",
            TokenKind::Comma => "`,`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::CommentOpen => "`(*`",
            TokenKind::CommentClose => "`*)`",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: Position,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?} {}", self.position, self.kind, self.lexeme)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{position}: {message}")]
pub struct LexError {
    pub position: Position,
    pub message: String,
}

struct Cursor {
    chars: Vec<char>,
    offset: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.offset).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.offset + ahead).copied()
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn keyword(word: &str, in_annotation: bool) -> Option<TokenKind> {
    match word {
        "Module" => Some(TokenKind::Module),
        "End" => Some(TokenKind::End),
        "Inductive" => Some(TokenKind::Inductive),
        "Type" => Some(TokenKind::Type),
        "with" => Some(TokenKind::With),
        "in" if in_annotation => Some(TokenKind::In),
        "bind" if in_annotation => Some(TokenKind::Bind),
        "index" if in_annotation => Some(TokenKind::Index),
        _ => None,
    }
}

#[derive(PartialEq)]
enum CommentShape {
    Index,
    Bind,
    Plain,
}

/// Classifies the comment whose body is `body` (text between `(*` and the
/// first `*)`).
fn classify(body: &str) -> CommentShape {
    let trimmed = body.trim();
    if trimmed == "index" {
        return CommentShape::Index;
    }
    let Some(rest) = trimmed.strip_prefix("bind") else {
        return CommentShape::Plain;
    };
    let Some(inner) = rest.strip_suffix("in") else {
        return CommentShape::Plain;
    };
    let boundary_after_bind = inner.chars().next().is_some_and(|c| !is_ident_continue(c));
    let boundary_before_in = inner.chars().last().is_some_and(|c| !is_ident_continue(c));
    if boundary_after_bind && boundary_before_in {
        CommentShape::Bind
    } else {
        CommentShape::Plain
    }
}

/// Splits source text into tokens. `(* index *)` and `(* bind ... in *)`
/// annotations become token runs bracketed by comment-open/close tokens; every
/// other comment is skipped like whitespace (comments nest).
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        chars: source.chars().collect(),
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
        } else if c == '(' && cur.peek_at(1) == Some('*') {
            lex_comment(&mut cur, &mut tokens)?;
        } else {
            lex_token(&mut cur, &mut tokens, false)?;
        }
    }
    Ok(tokens)
}

fn lex_comment(cur: &mut Cursor, tokens: &mut Vec<Token>) -> Result<(), LexError> {
    let open = cur.position();
    let start = cur.offset + 2;
    let close = (start..cur.chars.len().saturating_sub(1))
        .find(|&i| cur.chars[i] == '*' && cur.chars[i + 1] == ')');
    let shape = match close {
        Some(end) => classify(&cur.chars[start..end].iter().collect::<String>()),
        None => CommentShape::Plain,
    };
    if shape == CommentShape::Plain {
        return skip_plain_comment(cur, open);
    }
    let end = close.expect("annotation has a closing delimiter");
    cur.bump();
    cur.bump();
    tokens.push(Token {
        kind: TokenKind::CommentOpen,
        lexeme: "(*".into(),
        position: open,
    });
    while cur.offset < end {
        let c = cur.peek().expect("inside annotation");
        if c.is_whitespace() {
            cur.bump();
        } else {
            lex_token(cur, tokens, true)?;
            if cur.offset > end {
                // a token ran into the closing `*)`, e.g. `[n*)`
                return Err(LexError {
                    position: tokens.last().map(|t| t.position).unwrap_or(open),
                    message: "malformed binding annotation".into(),
                });
            }
        }
    }
    let position = cur.position();
    cur.bump();
    cur.bump();
    tokens.push(Token {
        kind: TokenKind::CommentClose,
        lexeme: "*)".into(),
        position,
    });
    Ok(())
}

fn skip_plain_comment(cur: &mut Cursor, open: Position) -> Result<(), LexError> {
    let mut depth = 0usize;
    loop {
        match (cur.peek(), cur.peek_at(1)) {
            (Some('('), Some('*')) => {
                cur.bump();
                cur.bump();
                depth += 1;
            }
            (Some('*'), Some(')')) => {
                cur.bump();
                cur.bump();
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            }
            (Some(_), _) => {
                cur.bump();
            }
            (None, _) => {
                return Err(LexError {
                    position: open,
                    message: "unterminated comment".into(),
                })
            }
        }
    }
}

fn lex_token(cur: &mut Cursor, tokens: &mut Vec<Token>, in_annotation: bool) -> Result<(), LexError> {
    let position = cur.position();
    let c = cur.bump().expect("caller checked for input");
    let single = |kind: TokenKind| Token {
        kind,
        lexeme: c.to_string(),
        position,
    };
    let token = match c {
        '(' => single(TokenKind::LParen),
        ')' => single(TokenKind::RParen),
        '|' => single(TokenKind::Pipe),
        '.' => single(TokenKind::Dot),
        ',' => single(TokenKind::Comma),
        '[' => single(TokenKind::LBracket),
        ']' => single(TokenKind::RBracket),
        '+' => single(TokenKind::Plus),
        '-' => single(TokenKind::Minus),
        '*' => single(TokenKind::Star),
        ':' => {
            if cur.peek() == Some('=') {
                cur.bump();
                Token {
                    kind: TokenKind::ColonEq,
                    lexeme: ":=".into(),
                    position,
                }
            } else {
                single(TokenKind::Colon)
            }
        }
        d if d.is_ascii_digit() => {
            let mut lexeme = d.to_string();
            while let Some(n) = cur.peek().filter(char::is_ascii_digit) {
                lexeme.push(n);
                cur.bump();
            }
            Token {
                kind: TokenKind::Nat,
                lexeme,
                position,
            }
        }
        a if is_ident_start(a) => {
            let mut lexeme = a.to_string();
            while let Some(n) = cur.peek().filter(|&n| is_ident_continue(n)) {
                lexeme.push(n);
                cur.bump();
            }
            let kind = keyword(&lexeme, in_annotation).unwrap_or(TokenKind::Ident);
            Token {
                kind,
                lexeme,
                position,
            }
        }
        other => {
            return Err(LexError {
                position,
                message: format!("illegal character {other:?}"),
            })
        }
    };
    tokens.push(token);
    Ok(())
}
