use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::named::{named_subst, translate_in, Telescope};
use super::{Arg, BindingOps, Engine, Enumerator, Name, NamedTermGen, Term};
use crate::validate::ValidGrammar;

/// The binding laws checked against the engine. `s`, `s'` range over indexed
/// sorts and `t` over terms of every category in which `s` occurs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    /// `lift s 0 k t = t`
    LiftZero,
    /// `lift s n k (lift s m k t) = lift s (n + m) k t`
    LiftLiftAdd,
    /// `k <= k'  ->  lift s n k (lift s m k' t) = lift s m (k' + n) (lift s n k t)`
    LiftLiftCommute,
    /// `s <> s'  ->  lift s n k (lift s' m k' t) = lift s' m k' (lift s n k t)`
    CrossSortLiftCommute,
    /// `subst s u j (lift s 1 j t) = t`
    SubstLiftCancel,
    /// `k <= j  ->  lift s n k (subst s u j t) = subst s (lift s n k u) (j + n) (lift s n k t)`
    LiftSubstDistrib,
    /// Lifting and substitution keep every constructor and natural argument.
    StructurePreservation,
    /// Capture-avoiding named substitution agrees with nameless substitution
    /// after translation.
    NamedDifferential,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::LiftZero,
        Law::LiftLiftAdd,
        Law::LiftLiftCommute,
        Law::CrossSortLiftCommute,
        Law::SubstLiftCancel,
        Law::LiftSubstDistrib,
        Law::StructurePreservation,
        Law::NamedDifferential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::LiftZero => "lift_zero",
            Law::LiftLiftAdd => "lift_lift_add",
            Law::LiftLiftCommute => "lift_lift_commute",
            Law::CrossSortLiftCommute => "cross_sort_lift_commute",
            Law::SubstLiftCancel => "subst_lift_cancel",
            Law::LiftSubstDistrib => "lift_subst_distrib",
            Law::StructurePreservation => "structure_preservation",
            Law::NamedDifferential => "named_differential",
        }
    }

    pub fn from_name(name: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest enumerated term, in nodes.
    pub max_size: usize,
    /// Free indices range below this (plus the binders above them).
    pub max_index: u64,
    /// Amounts, cutoffs and targets range over `0..=max_param`.
    pub max_param: u64,
    pub named_samples: usize,
    pub named_max_size: usize,
    pub seed: u64,
}

impl Bounds {
    pub fn new(max_size: usize, max_index: u64) -> Self {
        Bounds {
            max_size,
            max_index,
            max_param: 3,
            named_samples: 1000,
            named_max_size: 6,
            seed: 0x5eed_db6e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub law: Law,
    pub sort: String,
    pub category: String,
    /// Instantiation of every quantified variable, rendered.
    pub bindings: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails for sort {} in {}:", self.law, self.sort, self.category)?;
        for (k, v) in &self.bindings {
            write!(f, " {k} = {v};")?;
        }
        write!(f, " lhs = {}, rhs = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    /// Number of instances evaluated.
    pub instances: u64,
}

pub fn check_law(g: &ValidGrammar, law: Law, bounds: &Bounds) -> Result<LawReport, Counterexample> {
    let engine = Engine::new(g);
    check_law_with(&engine, &engine, law, bounds)
}

/// Checks `law` for the operations `ops`, enumerating terms with `engine`.
pub fn check_law_with(
    engine: &Engine<'_>,
    ops: &dyn BindingOps,
    law: Law,
    bounds: &Bounds,
) -> Result<LawReport, Counterexample> {
    let mut checker = Checker {
        engine,
        ops,
        law,
        bounds,
        enumerator: Enumerator::new(engine, bounds.max_index),
        cache: HashMap::new(),
        instances: 0,
    };
    match law {
        Law::NamedDifferential => checker.named_differential()?,
        _ => checker.exhaustive()?,
    }
    Ok(LawReport {
        law,
        instances: checker.instances,
    })
}

struct Checker<'a, 'g> {
    engine: &'a Engine<'g>,
    ops: &'a dyn BindingOps,
    law: Law,
    bounds: &'a Bounds,
    enumerator: Enumerator<'a, 'g>,
    cache: HashMap<String, std::rc::Rc<Vec<Term>>>,
    instances: u64,
}

impl Checker<'_, '_> {
    fn terms(&mut self, category: &str) -> std::rc::Rc<Vec<Term>> {
        if let Some(t) = self.cache.get(category) {
            return t.clone();
        }
        let terms = std::rc::Rc::new(self.enumerator.up_to(category, self.bounds.max_size));
        self.cache.insert(category.to_string(), terms.clone());
        terms
    }

    fn show(&self, t: &Term) -> String {
        t.display(self.engine.grammar()).to_string()
    }

    fn check(
        &mut self,
        sort: &str,
        category: &str,
        bindings: &[(&str, Binding<'_>)],
        lhs: &Term,
        rhs: &Term,
    ) -> Result<(), Counterexample> {
        self.instances += 1;
        if lhs == rhs {
            return Ok(());
        }
        Err(Counterexample {
            law: self.law,
            sort: sort.to_string(),
            category: category.to_string(),
            bindings: bindings
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Binding::Nat(n) => n.to_string(),
                        Binding::Term(t) => self.show(t),
                        Binding::Text(s) => s.clone(),
                    };
                    (k.to_string(), v)
                })
                .collect(),
            lhs: self.show(lhs),
            rhs: self.show(rhs),
        })
    }

    fn exhaustive(&mut self) -> Result<(), Counterexample> {
        let plan = self.engine.plan().clone();
        let params: Vec<u64> = (0..=self.bounds.max_param).collect();
        for s in &plan.indexed_sorts {
            let categories: Vec<String> = plan
                .lift_names
                .iter()
                .filter(|f| &f.sort == s)
                .map(|f| f.category.clone())
                .collect();
            for p in &categories {
                let terms = self.terms(p);
                match self.law {
                    Law::LiftZero => {
                        for t in terms.iter() {
                            for &k in &params {
                                let lhs = self.ops.lift(s, 0, k, t);
                                self.check(s, p, &[("t", Binding::Term(t)), ("k", Binding::Nat(k))], &lhs, t)?;
                            }
                        }
                    }
                    Law::LiftLiftAdd => {
                        for t in terms.iter() {
                            for &n in &params {
                                for &m in &params {
                                    for &k in &params {
                                        let lhs = self.ops.lift(s, n, k, &self.ops.lift(s, m, k, t));
                                        let rhs = self.ops.lift(s, n + m, k, t);
                                        let b = [("t", Binding::Term(t)), ("n", Binding::Nat(n)), ("m", Binding::Nat(m)), ("k", Binding::Nat(k))];
                                        self.check(s, p, &b, &lhs, &rhs)?;
                                    }
                                }
                            }
                        }
                    }
                    Law::LiftLiftCommute => {
                        for t in terms.iter() {
                            for &n in &params {
                                for &m in &params {
                                    for &k in &params {
                                        for &k2 in params.iter().filter(|&&k2| k <= k2) {
                                            let lhs = self.ops.lift(s, n, k, &self.ops.lift(s, m, k2, t));
                                            let rhs = self.ops.lift(s, m, k2 + n, &self.ops.lift(s, n, k, t));
                                            let b = [
                                                ("t", Binding::Term(t)),
                                                ("n", Binding::Nat(n)),
                                                ("m", Binding::Nat(m)),
                                                ("k", Binding::Nat(k)),
                                                ("k'", Binding::Nat(k2)),
                                            ];
                                            self.check(s, p, &b, &lhs, &rhs)?;
                                        }
                                    }
                                }
                            }
                        }
                    }
                    Law::CrossSortLiftCommute => {
                        let others: Vec<String> = plan
                            .sorts_in(p)
                            .into_iter()
                            .filter(|o| o != s)
                            .map(str::to_string)
                            .collect();
                        for s2 in &others {
                            for t in terms.iter() {
                                for &n in &params {
                                    for &m in &params {
                                        for &k in &params {
                                            for &k2 in &params {
                                                let lhs = self.ops.lift(s, n, k, &self.ops.lift(s2, m, k2, t));
                                                let rhs = self.ops.lift(s2, m, k2, &self.ops.lift(s, n, k, t));
                                                let b = [
                                                    ("s'", Binding::Text(s2.clone())),
                                                    ("t", Binding::Term(t)),
                                                    ("n", Binding::Nat(n)),
                                                    ("m", Binding::Nat(m)),
                                                    ("k", Binding::Nat(k)),
                                                    ("k'", Binding::Nat(k2)),
                                                ];
                                                self.check(s, p, &b, &lhs, &rhs)?;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                    Law::SubstLiftCancel => {
                        let us = self.terms(s);
                        for t in terms.iter() {
                            for u in us.iter() {
                                for &j in &params {
                                    let lhs = self.ops.subst(s, u, j, &self.ops.lift(s, 1, j, t));
                                    let b = [("t", Binding::Term(t)), ("u", Binding::Term(u)), ("j", Binding::Nat(j))];
                                    self.check(s, p, &b, &lhs, t)?;
                                }
                            }
                        }
                    }
                    Law::LiftSubstDistrib => {
                        let us = self.terms(s);
                        // every lift of every u, indexed by (n, k)
                        let lifted_us: Vec<Vec<Term>> = params
                            .iter()
                            .flat_map(|&n| params.iter().map(move |&k| (n, k)))
                            .map(|(n, k)| us.iter().map(|u| self.ops.lift(s, n, k, u)).collect())
                            .collect();
                        let at = |n: u64, k: u64| (n * params.len() as u64 + k) as usize;
                        for t in terms.iter() {
                            let lifted_t: Vec<Term> = params
                                .iter()
                                .flat_map(|&n| params.iter().map(move |&k| (n, k)))
                                .map(|(n, k)| self.ops.lift(s, n, k, t))
                                .collect();
                            for (ui, u) in us.iter().enumerate() {
                                for &j in &params {
                                    let substituted = self.ops.subst(s, u, j, t);
                                    for &n in &params {
                                        for &k in params.iter().filter(|&&k| k <= j) {
                                            let lhs = self.ops.lift(s, n, k, &substituted);
                                            let rhs = self.ops.subst(s, &lifted_us[at(n, k)][ui], j + n, &lifted_t[at(n, k)]);
                                            if lhs == rhs {
                                                self.instances += 1;
                                                continue;
                                            }
                                            let b = [
                                                ("t", Binding::Term(t)),
                                                ("u", Binding::Term(u)),
                                                ("n", Binding::Nat(n)),
                                                ("k", Binding::Nat(k)),
                                                ("j", Binding::Nat(j)),
                                            ];
                                            self.check(s, p, &b, &lhs, &rhs)?;
                                        }
                                    }
                                }
                            }
                        }
                    }
                    Law::StructurePreservation => {
                        let us = self.terms(s);
                        // a handful of replacement terms is enough here
                        let us: Vec<Term> = us.iter().take(4).cloned().collect();
                        for t in terms.iter() {
                            for &n in &params {
                                for &k in &params {
                                    let out = self.ops.lift(s, n, k, t);
                                    self.check_skeleton(s, p, t, &out, false)?;
                                }
                            }
                            for u in &us {
                                for &j in &params {
                                    let out = self.ops.subst(s, u, j, t);
                                    self.check_skeleton(s, p, t, &out, true)?;
                                }
                            }
                        }
                    }
                    Law::NamedDifferential => unreachable!("randomized"),
                }
            }
        }
        Ok(())
    }

    fn check_skeleton(&mut self, s: &str, p: &str, before: &Term, after: &Term, substituted: bool) -> Result<(), Counterexample> {
        self.instances += 1;
        if same_skeleton(s, before, after, substituted) {
            return Ok(());
        }
        Err(Counterexample {
            law: self.law,
            sort: s.to_string(),
            category: p.to_string(),
            bindings: vec![("t".into(), self.show(before))],
            lhs: self.show(after),
            rhs: "a term with the same constructors and natural arguments".into(),
        })
    }

    fn named_differential(&mut self) -> Result<(), Counterexample> {
        let plan = self.engine.plan().clone();
        if plan.indexed_sorts.is_empty() {
            return Ok(());
        }
        const CONTEXT_NAMES: [&str; 4] = ["x", "y", "z", "w"];
        const BINDER_POOL: [&str; 7] = ["x", "y", "z", "w", "a", "b", "c"];
        let mut gen = NamedTermGen::new(self.engine, self.bounds.seed, &BINDER_POOL);
        let mut done = 0;
        let mut attempts = 0usize;
        while done < self.bounds.named_samples {
            attempts += 1;
            assert!(
                attempts < self.bounds.named_samples * 1000 + 1000,
                "could not generate named instances for this grammar"
            );
            let rng = gen.rng();
            let s = plan.indexed_sorts.choose(rng).unwrap().clone();
            let categories: Vec<&str> = plan
                .lift_names
                .iter()
                .filter(|f| f.sort == s)
                .map(|f| f.category.as_str())
                .collect();
            let p = categories.choose(rng).unwrap().to_string();

            // context: distinct names per sort, then the substituted variable
            // inserted at distance d
            let mut ctx = Telescope::new();
            for sort in &plan.indexed_sorts {
                let k = rng.gen_range(0..=3);
                let mut names = CONTEXT_NAMES.to_vec();
                names.shuffle(rng);
                for n in names.into_iter().take(k) {
                    ctx.push(Name::from(sort.as_str()), Name::from(n));
                }
            }
            ctx = shuffle_telescope(ctx, rng);
            let taken: Vec<&str> = ctx
                .entries()
                .iter()
                .filter(|(so, _)| **so == *s)
                .map(|(_, n)| &**n)
                .collect();
            let candidates: Vec<&str> = BINDER_POOL.iter().copied().filter(|n| !taken.contains(n)).collect();
            let x = candidates.choose(rng).unwrap().to_string();
            let same_sort = taken.len() as u64;
            let d = rng.gen_range(0..=same_sort);
            let inner = ctx
                .insert_at_distance((Name::from(s.as_str()), Name::from(x.as_str())), d)
                .expect("distance within the context");

            let max = self.bounds.named_max_size;
            let t_size = rng.gen_range(1..=max);
            let u_size = rng.gen_range(1..=max.min(3));
            let Some(t) = gen.generate(&p, t_size, inner.entries()) else {
                continue;
            };
            let Some(u) = gen.generate(&s, u_size, ctx.entries()) else {
                continue;
            };

            let named = named_subst((&s, &x), &u, &t);
            let translate = |ctx: &Telescope, nt| translate_in(self.engine, &mut ctx.clone(), nt);
            let describe = |e: super::TranslateError| Term::node("<untranslatable>", &e.to_string(), vec![]);
            let lhs = translate(&ctx, &named).unwrap_or_else(describe);
            let rhs = match (translate(&ctx, &u), translate(&inner, &t)) {
                (Ok(u_db), Ok(t_db)) => self.ops.subst(&s, &u_db, d, &t_db),
                (Err(e), _) | (_, Err(e)) => describe(e),
            };
            self.instances += 1;
            done += 1;
            if lhs != rhs {
                let ctx_text: Vec<String> = inner.entries().iter().map(|(so, n)| format!("{n}:{so}")).collect();
                return Err(Counterexample {
                    law: self.law,
                    sort: s,
                    category: p,
                    bindings: vec![
                        ("x".into(), x),
                        ("d".into(), d.to_string()),
                        ("context".into(), ctx_text.join(" ")),
                        ("t".into(), t.to_string()),
                        ("u".into(), u.to_string()),
                        ("named result".into(), named.to_string()),
                    ],
                    lhs: self.show(&lhs),
                    rhs: self.show(&rhs),
                });
            }
        }
        Ok(())
    }
}

enum Binding<'t> {
    Nat(u64),
    Term(&'t Term),
    Text(String),
}

fn shuffle_telescope(ctx: Telescope, rng: &mut impl Rng) -> Telescope {
    let mut entries = ctx.entries().to_vec();
    entries.shuffle(rng);
    let mut out = Telescope::new();
    for (s, n) in entries {
        out.push(s, n);
    }
    out
}

/// `after` keeps every node of `before` with the same constructor and natural
/// arguments. Variables of `sort` may turn into arbitrary terms when
/// `substituted`; otherwise they stay variables of that sort.
fn same_skeleton(sort: &str, before: &Term, after: &Term, substituted: bool) -> bool {
    match (before, after) {
        (Term::Var { sort: s, .. }, _) if &**s == sort && substituted => after.sort() == sort,
        (Term::Var { sort: s, .. }, Term::Var { sort: s2, .. }) => s == s2,
        (
            Term::Node {
                constructor: c1,
                args: a1,
                ..
            },
            Term::Node {
                constructor: c2,
                args: a2,
                ..
            },
        ) => {
            c1 == c2
                && a1.len() == a2.len()
                && a1.iter().zip(a2).all(|(x, y)| match (x, y) {
                    (Arg::Nat(m), Arg::Nat(n)) => m == n,
                    (Arg::Sub(x), Arg::Sub(y)) => same_skeleton(sort, x, y, substituted),
                    _ => false,
                })
        }
        _ => false,
    }
}
