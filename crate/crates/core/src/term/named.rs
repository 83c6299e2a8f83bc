use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Arg, Engine, Name, Term};
use crate::grammar::ParamKind;
use crate::validate::ValidGrammar;

/// Terms with explicit variable names. A subterm argument carries the names
/// bound around it, grouped sort by sort in binding order; later names are
/// innermost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedTerm {
    Var {
        sort: Name,
        name: Name,
    },
    Node {
        sort: Name,
        constructor: Name,
        args: Vec<NamedArg>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedArg {
    Nat(u64),
    Sub {
        binders: Vec<(Name, Name)>,
        term: NamedTerm,
    },
}

impl NamedTerm {
    pub fn var(sort: &str, name: &str) -> Self {
        NamedTerm::Var {
            sort: sort.into(),
            name: name.into(),
        }
    }

    pub fn node(sort: &str, constructor: &str, args: Vec<NamedArg>) -> Self {
        NamedTerm::Node {
            sort: sort.into(),
            constructor: constructor.into(),
            args,
        }
    }

    pub fn sort(&self) -> &str {
        match self {
            NamedTerm::Var { sort, .. } | NamedTerm::Node { sort, .. } => sort,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            NamedTerm::Var { .. } => 1,
            NamedTerm::Node { args, .. } => {
                1 + args
                    .iter()
                    .map(|a| match a {
                        NamedArg::Nat(_) => 0,
                        NamedArg::Sub { term, .. } => term.size(),
                    })
                    .sum::<usize>()
            }
        }
    }

    /// Free `(sort, name)` pairs.
    pub fn free_vars(&self) -> BTreeSet<(Name, Name)> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<(Name, Name)>, out: &mut BTreeSet<(Name, Name)>) {
        match self {
            NamedTerm::Var { sort, name } => {
                let key = (sort.clone(), name.clone());
                if !bound.contains(&key) {
                    out.insert(key);
                }
            }
            NamedTerm::Node { args, .. } => {
                for a in args {
                    if let NamedArg::Sub { binders, term } = a {
                        let depth = bound.len();
                        bound.extend(binders.iter().cloned());
                        term.collect_free(bound, out);
                        bound.truncate(depth);
                    }
                }
            }
        }
    }

    fn occurs_free(&self, x: &(Name, Name)) -> bool {
        match self {
            NamedTerm::Var { sort, name } => *sort == x.0 && *name == x.1,
            NamedTerm::Node { args, .. } => args.iter().any(|a| match a {
                NamedArg::Nat(_) => false,
                NamedArg::Sub { binders, term } => !binders.contains(x) && term.occurs_free(x),
            }),
        }
    }
}

impl NamedArg {
    pub fn sub(binders: &[(&str, &str)], term: NamedTerm) -> Self {
        NamedArg::Sub {
            binders: binders.iter().map(|(s, n)| (Name::from(*s), Name::from(*n))).collect(),
            term,
        }
    }
}

impl fmt::Display for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedTerm::Var { sort, name } => write!(f, "{name}:{sort}"),
            NamedTerm::Node {
                constructor, args, ..
            } => {
                if args.is_empty() {
                    return write!(f, "_{constructor}");
                }
                write!(f, "(_{constructor}")?;
                for a in args {
                    match a {
                        NamedArg::Nat(n) => write!(f, " {n}")?,
                        NamedArg::Sub { binders, term } if binders.is_empty() => write!(f, " {term}")?,
                        NamedArg::Sub { binders, term } => {
                            let names: Vec<String> = binders.iter().map(|(s, n)| format!("{n}:{s}")).collect();
                            write!(f, " [{}]{term}", names.join(" "))?
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

/// Translation context: binders in scope, innermost last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Telescope(Vec<(Name, Name)>);

impl Telescope {
    pub fn new() -> Self {
        Telescope(Vec::new())
    }

    pub fn from_entries(entries: &[(&str, &str)]) -> Self {
        Telescope(entries.iter().map(|(s, n)| (Name::from(*s), Name::from(*n))).collect())
    }

    pub fn push(&mut self, sort: Name, name: Name) {
        self.0.push((sort, name));
    }

    pub fn entries(&self) -> &[(Name, Name)] {
        &self.0
    }

    /// Innermost binding of `name` at `sort`, as the number of same-sort
    /// entries after it.
    pub fn lookup(&self, sort: &str, name: &str) -> Option<u64> {
        let mut distance = 0;
        for (s, n) in self.0.iter().rev() {
            if &**s == sort {
                if &**n == name {
                    return Some(distance);
                }
                distance += 1;
            }
        }
        None
    }

    /// Inserts `entry` so that exactly `distance` entries of its sort follow it.
    pub fn insert_at_distance(&self, entry: (Name, Name), distance: u64) -> Option<Telescope> {
        let mut seen = 0;
        let mut at = self.0.len();
        while seen < distance {
            at = at.checked_sub(1)?;
            if self.0[at].0 == entry.0 {
                seen += 1;
            }
        }
        let mut out = self.0.clone();
        out.insert(at, entry);
        Some(Telescope(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unbound {sort} variable `{name}`")]
    UnboundName { sort: String, name: String },
    /// Expected and given binder sorts, run-length encoded.
    #[error("`{constructor}` binds {expected:?} but {got:?} names were given")]
    BinderArityMismatch {
        constructor: String,
        expected: Vec<(String, u64)>,
        got: Vec<(String, u64)>,
    },
    #[error("ill-formed named term: {0}")]
    IllFormed(String),
}

fn run_lengths(binders: &[(Name, Name)]) -> Vec<(String, u64)> {
    let mut out: Vec<(String, u64)> = Vec::new();
    for (s, _) in binders {
        match out.last_mut() {
            Some((last, n)) if **last == **s => *n += 1,
            _ => out.push((s.to_string(), 1)),
        }
    }
    out
}

/// Named to nameless translation.
pub fn translate_named(g: &ValidGrammar, ctx: &Telescope, nt: &NamedTerm) -> Result<Term, TranslateError> {
    let engine = Engine::new(g);
    let mut ctx = ctx.clone();
    translate_in(&engine, &mut ctx, nt)
}

pub(crate) fn translate_in(engine: &Engine<'_>, ctx: &mut Telescope, nt: &NamedTerm) -> Result<Term, TranslateError> {
    let g = engine.grammar();
    match nt {
        NamedTerm::Var { sort, name } => {
            if !g.is_indexed(sort) {
                return Err(TranslateError::IllFormed(format!("`{sort}` has no variables")));
            }
            let index = ctx.lookup(sort, name).ok_or_else(|| TranslateError::UnboundName {
                sort: sort.to_string(),
                name: name.to_string(),
            })?;
            Ok(Term::Var {
                sort: sort.clone(),
                index,
            })
        }
        NamedTerm::Node {
            sort,
            constructor,
            args,
        } => {
            let ctor = match g.constructor(constructor) {
                Some((cat, ctor)) if cat.name == **sort && !ctor.is_index_constructor() => ctor,
                _ => {
                    return Err(TranslateError::IllFormed(format!(
                        "`{constructor}` is not a constructor of `{sort}`"
                    )))
                }
            };
            if ctor.params.len() != args.len() {
                return Err(TranslateError::IllFormed(format!(
                    "`{constructor}` expects {} arguments",
                    ctor.params.len()
                )));
            }
            // natural arguments first: binder counts depend on them
            let nats: Vec<Arg> = args
                .iter()
                .map(|a| match a {
                    NamedArg::Nat(n) => Arg::Nat(*n),
                    NamedArg::Sub { .. } => Arg::Nat(0),
                })
                .collect();
            let mut out = Vec::with_capacity(args.len());
            for (i, (p, a)) in ctor.params.iter().zip(args).enumerate() {
                match (&p.kind, a) {
                    (ParamKind::Nat, NamedArg::Nat(n)) => out.push(Arg::Nat(*n)),
                    (ParamKind::Subterm { category, .. }, NamedArg::Sub { binders, term }) => {
                        if term.sort() != category {
                            return Err(TranslateError::IllFormed(format!(
                                "argument `{}` of `{constructor}` must be a `{category}`",
                                p.name
                            )));
                        }
                        let counts = engine.binder_counts_at(constructor, i, &nats);
                        let expected: Vec<(String, u64)> = counts
                            .iter()
                            .filter(|(_, n)| *n > 0)
                            .map(|(s, n)| (s.to_string(), n))
                            .collect();
                        let got = run_lengths(binders);
                        if expected != got {
                            return Err(TranslateError::BinderArityMismatch {
                                constructor: constructor.to_string(),
                                expected,
                                got,
                            });
                        }
                        let depth = ctx.0.len();
                        ctx.0.extend(binders.iter().cloned());
                        let sub = translate_in(engine, ctx, term);
                        ctx.0.truncate(depth);
                        out.push(Arg::Sub(sub?));
                    }
                    _ => {
                        return Err(TranslateError::IllFormed(format!(
                            "argument `{}` of `{constructor}` has the wrong kind",
                            p.name
                        )))
                    }
                }
            }
            Ok(Term::Node {
                sort: sort.clone(),
                constructor: constructor.clone(),
                args: out,
            })
        }
    }
}

/// Capture-avoiding substitution of `u` for the free variable `x` in `t`.
/// Binders that would capture a free variable of `u` are renamed by
/// appending apostrophes until fresh.
pub fn named_subst(x: (&str, &str), u: &NamedTerm, t: &NamedTerm) -> NamedTerm {
    let x = (Name::from(x.0), Name::from(x.1));
    let fv_u = u.free_vars();
    subst_rec(&x, u, &fv_u, t)
}

fn subst_rec(x: &(Name, Name), u: &NamedTerm, fv_u: &BTreeSet<(Name, Name)>, t: &NamedTerm) -> NamedTerm {
    match t {
        NamedTerm::Var { sort, name } => {
            if *sort == x.0 && *name == x.1 {
                u.clone()
            } else {
                t.clone()
            }
        }
        NamedTerm::Node {
            sort,
            constructor,
            args,
        } => NamedTerm::Node {
            sort: sort.clone(),
            constructor: constructor.clone(),
            args: args
                .iter()
                .map(|a| match a {
                    NamedArg::Nat(_) => a.clone(),
                    NamedArg::Sub { binders, term } => {
                        if binders.contains(x) || !term.occurs_free(x) {
                            return a.clone();
                        }
                        let (binders, term) = freshen(binders, term, x, fv_u);
                        NamedArg::Sub {
                            term: subst_rec(x, u, fv_u, &term),
                            binders,
                        }
                    }
                })
                .collect(),
        },
    }
}

/// Renames every binder that occurs free in the substituted term.
fn freshen(
    binders: &[(Name, Name)],
    body: &NamedTerm,
    x: &(Name, Name),
    fv_u: &BTreeSet<(Name, Name)>,
) -> (Vec<(Name, Name)>, NamedTerm) {
    let mut binders = binders.to_vec();
    let mut body = body.clone();
    for i in 0..binders.len() {
        let b = binders[i].clone();
        if !fv_u.contains(&b) {
            continue;
        }
        let fv_body = body.free_vars();
        let mut candidate = format!("{}'", b.1);
        loop {
            let key = (b.0.clone(), Name::from(candidate.as_str()));
            let clash = fv_u.contains(&key) || fv_body.contains(&key) || *x == key || binders.contains(&key);
            if !clash {
                break;
            }
            candidate.push('\'');
        }
        let fresh: Name = candidate.into();
        // a later binder with the same name shadows this one in the body
        let shadowed = binders[i + 1..].contains(&b);
        if !shadowed {
            let replacement = NamedTerm::Var {
                sort: b.0.clone(),
                name: fresh.clone(),
            };
            let fv_r = replacement.free_vars();
            body = subst_rec(&b, &replacement, &fv_r, &body);
        }
        binders[i] = (b.0, fresh);
    }
    (binders, body)
}
