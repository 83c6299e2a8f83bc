//! Shared helpers for the integration tests: corpus loading, a reader for
//! the term notation printed by `Term::display`, and a small interpreter for
//! the lifting and substitution fixpoints found in emitted files.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use dbgen::term::{Arg, Term};
use dbgen::{parse_source, validate_grammar, ValidGrammar};

pub fn corpus_dir(kind: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(kind)
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Sorted `(file name, contents)` of one corpus directory.
pub fn corpus(kind: &str) -> Vec<(String, String)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir(kind))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "v"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn load(name: &str) -> ValidGrammar {
    let text = std::fs::read_to_string(corpus_dir("valid").join(name)).unwrap();
    validate_grammar(parse_source(&text).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// term notation

fn lex(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Reads `app (var 0) (lam (var 1))` style notation.
pub fn term(g: &ValidGrammar, text: &str) -> Term {
    let toks = lex(text);
    let mut pos = 0;
    let t = read_app(g, &toks, &mut pos);
    assert_eq!(pos, toks.len(), "trailing input in {text:?}");
    t
}

fn read_app(g: &ValidGrammar, toks: &[String], pos: &mut usize) -> Term {
    let head = &toks[*pos];
    *pos += 1;
    let (cat, ctor) = g.constructor(head).unwrap_or_else(|| panic!("unknown constructor {head}"));
    if ctor.is_index_constructor() {
        let index = toks[*pos].parse().unwrap();
        *pos += 1;
        return Term::var(&cat.name, index);
    }
    let mut args = Vec::new();
    for p in &ctor.params {
        if p.subterm_category().is_some() {
            args.push(Arg::Sub(read_atom(g, toks, pos)));
        } else {
            args.push(Arg::Nat(toks[*pos].parse().unwrap()));
            *pos += 1;
        }
    }
    Term::node(&cat.name, head, args)
}

fn read_atom(g: &ValidGrammar, toks: &[String], pos: &mut usize) -> Term {
    if toks[*pos] == "(" {
        *pos += 1;
        let t = read_app(g, toks, pos);
        assert_eq!(toks[*pos], ")");
        *pos += 1;
        t
    } else {
        read_app(g, toks, pos)
    }
}

// ---------------------------------------------------------------------------
// emitted fixpoints

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Nat(u64),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Num(u64),
    Ident(String),
    App(String, Vec<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `if le_gt_dec a b then x else y`
    IfLe(Box<Expr>, Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Debug)]
struct Clause {
    constructor: String,
    vars: Vec<String>,
    body: Expr,
}

#[derive(Debug)]
struct Function {
    params: Vec<String>,
    clauses: Vec<Clause>,
}

/// Evaluates the `*_lift_in_*` and `*_subst_in_*` fixpoints of an emitted
/// file, reading nothing but the file text and the grammar's constructor
/// signatures.
pub struct Interp<'g> {
    g: &'g ValidGrammar,
    functions: HashMap<String, Function>,
}

impl<'g> Interp<'g> {
    pub fn new(g: &'g ValidGrammar, emitted: &str) -> Self {
        let mut functions = HashMap::new();
        let lines: Vec<&str> = emitted.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i];
            let header = line.strip_prefix("Fixpoint ").or_else(|| line.strip_prefix("with "));
            let Some(header) = header else {
                i += 1;
                continue;
            };
            let name = header.split(' ').next().unwrap().to_string();
            if !(name.contains("_lift_in_") || name.contains("_subst_in_")) {
                i += 1;
                continue;
            }
            let params = header_params(header);
            assert!(lines[i + 1].trim_start().starts_with("match "), "{name}");
            let mut clauses = Vec::new();
            i += 2;
            while lines[i].trim() != "end" && lines[i].trim() != "end." {
                let clause = lines[i].trim().strip_prefix("| ").expect("clause");
                let (pat, body) = clause.split_once(" => ").expect("=>");
                let mut pat = pat.split(' ').map(str::to_string);
                let constructor = pat.next().unwrap();
                clauses.push(Clause {
                    constructor,
                    vars: pat.collect(),
                    body: parse_expr(body),
                });
                i += 1;
            }
            functions.insert(name, Function { params, clauses });
        }
        Interp { g, functions }
    }

    pub fn function_names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.functions.keys().map(String::as_str).collect();
        v.sort();
        v
    }

    pub fn call(&self, name: &str, args: Vec<Value>) -> Value {
        let f = self.functions.get(name).unwrap_or_else(|| panic!("no function {name}"));
        assert_eq!(args.len(), f.params.len());
        let mut env: HashMap<String, Value> = f.params.iter().cloned().zip(args).collect();
        let scrutinee = match env.get(f.params.last().unwrap()) {
            Some(Value::Term(t)) => t.clone(),
            other => panic!("{name}: matched argument is {other:?}"),
        };
        let (ctor, fields) = self.destruct(&scrutinee);
        let clause = f
            .clauses
            .iter()
            .find(|c| c.constructor == ctor)
            .unwrap_or_else(|| panic!("{name}: no clause for {ctor}"));
        for (v, x) in clause.vars.iter().zip(fields) {
            env.insert(v.clone(), x);
        }
        self.eval(&clause.body, &env)
    }

    fn destruct(&self, t: &Term) -> (String, Vec<Value>) {
        match t {
            Term::Var { sort, index } => (
                self.g.index_constructor_of(sort).unwrap().to_string(),
                vec![Value::Nat(*index)],
            ),
            Term::Node { constructor, args, .. } => (
                constructor.to_string(),
                args.iter()
                    .map(|a| match a {
                        Arg::Nat(n) => Value::Nat(*n),
                        Arg::Sub(s) => Value::Term(s.clone()),
                    })
                    .collect(),
            ),
        }
    }

    fn nat(&self, e: &Expr, env: &HashMap<String, Value>) -> u64 {
        match self.eval(e, env) {
            Value::Nat(n) => n,
            v => panic!("expected a number, got {v:?}"),
        }
    }

    fn eval(&self, e: &Expr, env: &HashMap<String, Value>) -> Value {
        match e {
            Expr::Num(n) => Value::Nat(*n),
            Expr::Ident(x) => match env.get(x) {
                Some(v) => v.clone(),
                None => self.construct(x, Vec::new()),
            },
            Expr::Add(a, b) => Value::Nat(self.nat(a, env) + self.nat(b, env)),
            Expr::Sub(a, b) => Value::Nat(self.nat(a, env).saturating_sub(self.nat(b, env))),
            Expr::Mul(a, b) => Value::Nat(self.nat(a, env) * self.nat(b, env)),
            Expr::IfLe(a, b, x, y) => {
                if self.nat(a, env) <= self.nat(b, env) {
                    self.eval(x, env)
                } else {
                    self.eval(y, env)
                }
            }
            Expr::App(head, args) => {
                let args: Vec<Value> = args.iter().map(|a| self.eval(a, env)).collect();
                if self.functions.contains_key(head) {
                    self.call(head, args)
                } else {
                    self.construct(head, args)
                }
            }
        }
    }

    fn construct(&self, ctor: &str, args: Vec<Value>) -> Value {
        let (cat, c) = self.g.constructor(ctor).unwrap_or_else(|| panic!("unknown name {ctor}"));
        if c.is_index_constructor() {
            let [Value::Nat(i)] = args[..] else {
                panic!("{ctor} takes one index");
            };
            return Value::Term(Term::var(&cat.name, i));
        }
        assert_eq!(args.len(), c.params.len(), "{ctor}");
        let args = args
            .into_iter()
            .map(|v| match v {
                Value::Nat(n) => Arg::Nat(n),
                Value::Term(t) => Arg::Sub(t),
            })
            .collect();
        Value::Term(Term::node(&cat.name, ctor, args))
    }
}

/// Names of `(x : T)` groups in a fixpoint header.
fn header_params(header: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = header;
    while let Some(open) = rest.find('(') {
        let close = rest[open..].find(')').unwrap() + open;
        let inner = &rest[open + 1..close];
        let (name, _) = inner.split_once(" : ").unwrap();
        out.push(name.to_string());
        rest = &rest[close + 1..];
    }
    out
}

fn parse_expr(text: &str) -> Expr {
    let toks = lex(text);
    let mut p = ExprParser { toks: &toks, pos: 0 };
    let e = p.expr();
    assert_eq!(p.pos, toks.len(), "trailing input in {text:?}");
    e
}

struct ExprParser<'a> {
    toks: &'a [String],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> String {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: &str) {
        assert_eq!(self.next(), t);
    }

    fn expr(&mut self) -> Expr {
        if self.peek() == Some("if") {
            self.next();
            self.expect("le_gt_dec");
            let a = self.atom();
            let b = self.atom();
            self.expect("then");
            let x = self.expr();
            self.expect("else");
            let y = self.expr();
            return Expr::IfLe(Box::new(a), Box::new(b), Box::new(x), Box::new(y));
        }
        let mut e = self.product();
        while let Some(op @ ("+" | "-")) = self.peek() {
            let op = op.to_string();
            self.next();
            let r = self.product();
            e = if op == "+" {
                Expr::Add(Box::new(e), Box::new(r))
            } else {
                Expr::Sub(Box::new(e), Box::new(r))
            };
        }
        e
    }

    fn product(&mut self) -> Expr {
        let mut e = self.app();
        while self.peek() == Some("*") {
            self.next();
            let r = self.app();
            e = Expr::Mul(Box::new(e), Box::new(r));
        }
        e
    }

    fn app(&mut self) -> Expr {
        let head = self.atom();
        let mut args = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, ")" | "+" | "-" | "*" | "then" | "else") {
                break;
            }
            args.push(self.atom());
        }
        match (head, args.is_empty()) {
            (e, true) => e,
            (Expr::Ident(h), false) => Expr::App(h, args),
            (e, false) => panic!("cannot apply {e:?}"),
        }
    }

    fn atom(&mut self) -> Expr {
        let t = self.next();
        if t == "(" {
            let e = self.expr();
            self.expect(")");
            return e;
        }
        match t.parse() {
            Ok(n) => Expr::Num(n),
            Err(_) => Expr::Ident(t),
        }
    }
}
