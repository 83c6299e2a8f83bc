//! Runtime terms of any validated grammar and the reference semantics of the
//! generated lifting and substitution functions.
//!
//! A nameless [`Term`] keeps each index constructor as a [`Term::Var`] and
//! every other constructor as a [`Term::Node`] whose arguments line up with the
//! constructor's parameters. Each indexed sort has its own index space.
//!
//! Lifting `lift(s, n, k, t)` adds `n` to every index of sort `s` that is at
//! least the cutoff `k`; under a binder that binds `b` variables of `s` the
//! cutoff becomes `k + b`. Substitution `subst(s, u, j, t)` replaces index `j`
//! of sort `s` by `u` and decrements larger indices. When it crosses a binder,
//! `j` grows by the number of `s`-variables bound there and `u` is lifted once
//! per bound sort, so `u` stays well scoped.

mod enumerate;
mod laws;
mod named;
mod random;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::analysis::{plan_functions, FunctionPlan};
use crate::grammar::{Constructor, ParamKind};
use crate::validate::{binder_counts, BinderCounts, ValidGrammar};

pub use enumerate::{enumerate_terms, Enumerator};
pub use laws::{check_law, check_law_with, Bounds, Counterexample, Law, LawReport};
pub use named::{named_subst, translate_named, NamedArg, NamedTerm, Telescope, TranslateError};
pub use random::NamedTermGen;

/// Shared, cheaply cloned identifier.
pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var {
        sort: Name,
        index: u64,
    },
    Node {
        sort: Name,
        constructor: Name,
        args: Vec<Arg>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arg {
    Nat(u64),
    Sub(Term),
}

impl Term {
    pub fn var(sort: &str, index: u64) -> Term {
        Term::Var {
            sort: sort.into(),
            index,
        }
    }

    pub fn node(sort: &str, constructor: &str, args: Vec<Arg>) -> Term {
        Term::Node {
            sort: sort.into(),
            constructor: constructor.into(),
            args,
        }
    }

    pub fn sort(&self) -> &str {
        match self {
            Term::Var { sort, .. } | Term::Node { sort, .. } => sort,
        }
    }

    /// Number of `Var`/`Node` occurrences; natural arguments do not count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::Node { args, .. } => {
                1 + args
                    .iter()
                    .map(|a| match a {
                        Arg::Nat(_) => 0,
                        Arg::Sub(t) => t.size(),
                    })
                    .sum::<usize>()
            }
        }
    }

    /// Renders in constructor-application syntax, e.g. `app (var 0) (lam (var 1))`.
    pub fn display<'a>(&'a self, g: &'a ValidGrammar) -> impl fmt::Display + 'a {
        TermDisplay { term: self, g }
    }
}

impl Arg {
    pub fn sub(t: Term) -> Arg {
        Arg::Sub(t)
    }
}

struct TermDisplay<'a> {
    term: &'a Term,
    g: &'a ValidGrammar,
}

impl TermDisplay<'_> {
    fn write(&self, t: &Term, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match t {
            Term::Var { sort, index } => {
                let ctor = self.g.index_constructor_of(sort).unwrap_or("?var");
                if nested {
                    write!(f, "({ctor} {index})")
                } else {
                    write!(f, "{ctor} {index}")
                }
            }
            Term::Node {
                constructor, args, ..
            } => {
                if args.is_empty() {
                    return f.write_str(constructor);
                }
                if nested {
                    f.write_str("(")?;
                }
                f.write_str(constructor)?;
                for a in args {
                    f.write_str(" ")?;
                    match a {
                        Arg::Nat(n) => write!(f, "{n}")?,
                        Arg::Sub(s) => self.write(s, f, true)?,
                    }
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.term, f, false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfErrorKind {
    UnknownConstructor,
    ArityMismatch,
    SortMismatch,
    VarOfNonIndexedSort,
}

/// `path` lists argument positions from the root to the offending subterm.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind:?} at {path:?}: {message}")]
pub struct WfError {
    pub kind: WfErrorKind,
    pub path: Vec<usize>,
    pub message: String,
}

/// Evaluation context: a validated grammar plus its reachability table.
pub struct Engine<'g> {
    grammar: &'g ValidGrammar,
    plan: FunctionPlan,
}

impl<'g> Engine<'g> {
    pub fn new(grammar: &'g ValidGrammar) -> Self {
        Engine {
            grammar,
            plan: plan_functions(grammar),
        }
    }

    pub fn grammar(&self) -> &'g ValidGrammar {
        self.grammar
    }

    pub fn plan(&self) -> &FunctionPlan {
        &self.plan
    }

    fn ctor(&self, name: &str) -> &'g Constructor {
        self.grammar
            .constructor(name)
            .expect("well-formed term uses known constructors")
            .1
    }

    /// Variables bound around argument `position` of a node, computed from
    /// the node's own natural arguments. Empty for non-binding positions.
    pub fn binder_counts_at(&self, constructor: &str, position: usize, args: &[Arg]) -> BinderCounts {
        let ctor = self.ctor(constructor);
        let Some(spec) = ctor.params[position].binding() else {
            return BinderCounts::default();
        };
        let env: Vec<(&str, u64)> = ctor.params[..position]
            .iter()
            .zip(args)
            .filter_map(|(p, a)| match (&p.kind, a) {
                (ParamKind::Nat, Arg::Nat(v)) => Some((p.name.as_str(), *v)),
                _ => None,
            })
            .collect();
        binder_counts(spec, &env).expect("count variables are preceding nat parameters")
    }

    /// Adds `amount` to every free index of `sort` at or above `cutoff`.
    pub fn lift(&self, sort: &str, amount: u64, cutoff: u64, t: &Term) -> Term {
        match t {
            Term::Var { sort: s, index } if &**s == sort && *index >= cutoff => Term::Var {
                sort: s.clone(),
                index: index + amount,
            },
            Term::Var { .. } => t.clone(),
            Term::Node {
                sort: s,
                constructor,
                args,
            } => {
                let ctor = self.ctor(constructor);
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| match a {
                        Arg::Nat(_) => a.clone(),
                        Arg::Sub(sub) if ctor.params[i].binding().is_none() => {
                            Arg::Sub(self.lift(sort, amount, cutoff, sub))
                        }
                        Arg::Sub(sub) => {
                            let bound = self.binder_counts_at(constructor, i, args).get(sort);
                            Arg::Sub(self.lift(sort, amount, cutoff + bound, sub))
                        }
                    })
                    .collect();
                Term::Node {
                    sort: s.clone(),
                    constructor: constructor.clone(),
                    args,
                }
            }
        }
    }

    /// Replaces index `target` of `sort` by `u`, decrementing larger indices.
    pub fn subst(&self, sort: &str, u: &Term, target: u64, t: &Term) -> Term {
        match t {
            Term::Var { sort: s, index } if &**s == sort => {
                if *index == target {
                    u.clone()
                } else if *index > target {
                    Term::Var {
                        sort: s.clone(),
                        index: index - 1,
                    }
                } else {
                    t.clone()
                }
            }
            Term::Var { .. } => t.clone(),
            Term::Node {
                sort: s,
                constructor,
                args,
            } => {
                let ctor = self.ctor(constructor);
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| match a {
                        Arg::Nat(_) => a.clone(),
                        Arg::Sub(sub) if ctor.params[i].binding().is_none() => {
                            Arg::Sub(self.subst(sort, u, target, sub))
                        }
                        Arg::Sub(sub) => {
                            let counts = self.binder_counts_at(constructor, i, args);
                            let lifted = self.lift_under(&counts, u);
                            Arg::Sub(self.subst(sort, &lifted, target + counts.get(sort), sub))
                        }
                    })
                    .collect();
                Term::Node {
                    sort: s.clone(),
                    constructor: constructor.clone(),
                    args,
                }
            }
        }
    }

    /// Lifts `u` past a binder: for each indexed sort (source order) bound
    /// there and occurring in `u`'s category, by the number bound, cutoff 0.
    pub fn lift_under(&self, counts: &BinderCounts, u: &Term) -> Term {
        let mut out = u.clone();
        for s in self.plan.sorts_in(u.sort()) {
            let b = counts.get(s);
            if b > 0 {
                out = self.lift(s, b, 0, &out);
            }
        }
        out
    }

    pub fn check_wf(&self, t: &Term) -> Result<(), WfError> {
        let mut path = Vec::new();
        self.wf(t, None, &mut path)
    }

    /// Like [`check_wf`](Self::check_wf) but also requires `t` to have sort `sort`.
    pub fn check_wf_sort(&self, sort: &str, t: &Term) -> Result<(), WfError> {
        let mut path = Vec::new();
        self.wf(t, Some(sort), &mut path)
    }

    fn wf(&self, t: &Term, expected: Option<&str>, path: &mut Vec<usize>) -> Result<(), WfError> {
        let err = |kind, message: String, path: &Vec<usize>| WfError {
            kind,
            path: path.clone(),
            message,
        };
        if let Some(e) = expected {
            if t.sort() != e {
                return Err(err(
                    WfErrorKind::SortMismatch,
                    format!("expected a `{e}`, found a `{}`", t.sort()),
                    path,
                ));
            }
        }
        match t {
            Term::Var { sort, .. } => {
                if self.grammar.is_indexed(sort) {
                    Ok(())
                } else {
                    Err(err(
                        WfErrorKind::VarOfNonIndexedSort,
                        format!("`{sort}` has no index constructor"),
                        path,
                    ))
                }
            }
            Term::Node {
                sort,
                constructor,
                args,
            } => {
                let Some((cat, ctor)) = self.grammar.constructor(constructor) else {
                    return Err(err(
                        WfErrorKind::UnknownConstructor,
                        format!("no constructor `{constructor}`"),
                        path,
                    ));
                };
                if cat.name != **sort {
                    return Err(err(
                        WfErrorKind::SortMismatch,
                        format!("`{constructor}` builds a `{}`, not a `{sort}`", cat.name),
                        path,
                    ));
                }
                if ctor.is_index_constructor() {
                    return Err(err(
                        WfErrorKind::ArityMismatch,
                        format!("index constructor `{constructor}` takes no node arguments; use a variable"),
                        path,
                    ));
                }
                if args.len() != ctor.params.len() {
                    return Err(err(
                        WfErrorKind::ArityMismatch,
                        format!("`{constructor}` expects {} arguments, got {}", ctor.params.len(), args.len()),
                        path,
                    ));
                }
                for (i, (p, a)) in ctor.params.iter().zip(args).enumerate() {
                    path.push(i);
                    match (&p.kind, a) {
                        (ParamKind::Nat, Arg::Nat(_)) => {}
                        (ParamKind::Subterm { category, .. }, Arg::Sub(sub)) => {
                            self.wf(sub, Some(category), path)?
                        }
                        _ => {
                            return Err(err(
                                WfErrorKind::SortMismatch,
                                format!("argument `{}` of `{constructor}` has the wrong kind", p.name),
                                path,
                            ))
                        }
                    }
                    path.pop();
                }
                Ok(())
            }
        }
    }
}

pub fn check_wf(g: &ValidGrammar, t: &Term) -> Result<(), WfError> {
    Engine::new(g).check_wf(t)
}

pub fn eval_lift(g: &ValidGrammar, sort: &str, amount: u64, cutoff: u64, t: &Term) -> Term {
    Engine::new(g).lift(sort, amount, cutoff, t)
}

pub fn eval_subst(g: &ValidGrammar, sort: &str, u: &Term, target: u64, t: &Term) -> Term {
    Engine::new(g).subst(sort, u, target, t)
}

/// The operations a law is stated over; lets tests plug in deliberately
/// broken variants.
pub trait BindingOps {
    fn lift(&self, sort: &str, amount: u64, cutoff: u64, t: &Term) -> Term;
    fn subst(&self, sort: &str, u: &Term, target: u64, t: &Term) -> Term;
}

impl BindingOps for Engine<'_> {
    fn lift(&self, sort: &str, amount: u64, cutoff: u64, t: &Term) -> Term {
        Engine::lift(self, sort, amount, cutoff, t)
    }

    fn subst(&self, sort: &str, u: &Term, target: u64, t: &Term) -> Term {
        Engine::subst(self, sort, u, target, t)
    }
}
