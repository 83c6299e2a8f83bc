//! Checks a parsed grammar against the binding restrictions and evaluates
//! binder-count expressions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{BindingSpec, Category, Constructor, CountExpr, ParamKind, SourceGrammar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValidationCode {
    ExtraArgsOnIndexConstructor,
    MultipleIndexConstructors,
    UnknownCategoryInBind,
    UnknownCategoryInParam,
    UnboundExprIdentifier,
    DuplicateName,
}

impl ValidationCode {
    pub const ALL: [ValidationCode; 6] = [
        ValidationCode::ExtraArgsOnIndexConstructor,
        ValidationCode::MultipleIndexConstructors,
        ValidationCode::UnknownCategoryInBind,
        ValidationCode::UnknownCategoryInParam,
        ValidationCode::UnboundExprIdentifier,
        ValidationCode::DuplicateName,
    ];
}

impl fmt::Display for ValidationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Where a problem sits: category, then optionally constructor and parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub category: String,
    pub constructor: Option<String>,
    pub param: Option<String>,
    /// (category, constructor, param) ordinals in source order.
    order: (usize, usize, usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.category)?;
        if let Some(c) = &self.constructor {
            write!(f, ".{c}")?;
        }
        if let Some(p) = &self.param {
            write!(f, ".{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{location}: {code}: {message}")]
pub struct ValidationError {
    pub code: ValidationCode,
    pub location: Location,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound identifier `{0}` in binder count")]
    Unbound(String),
}

/// Name lookup for count-expression evaluation.
pub trait NatEnv {
    fn lookup(&self, name: &str) -> Option<u64>;
}

impl NatEnv for HashMap<String, u64> {
    fn lookup(&self, name: &str) -> Option<u64> {
        self.get(name).copied()
    }
}

impl NatEnv for BTreeMap<String, u64> {
    fn lookup(&self, name: &str) -> Option<u64> {
        self.get(name).copied()
    }
}

impl NatEnv for [(&str, u64)] {
    fn lookup(&self, name: &str) -> Option<u64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> NatEnv for [(&str, u64); N] {
    fn lookup(&self, name: &str) -> Option<u64> {
        self.as_slice().lookup(name)
    }
}

impl NatEnv for Vec<(&str, u64)> {
    fn lookup(&self, name: &str) -> Option<u64> {
        self.as_slice().lookup(name)
    }
}

/// Natural-number evaluation; subtraction truncates at zero.
pub fn eval_expr<E: NatEnv + ?Sized>(e: &CountExpr, env: &E) -> Result<u64, EvalError> {
    Ok(match e {
        CountExpr::Lit(n) => *n,
        CountExpr::Var(v) => env.lookup(v).ok_or_else(|| EvalError::Unbound(v.clone()))?,
        CountExpr::Add(a, b) => eval_expr(a, env)?.saturating_add(eval_expr(b, env)?),
        CountExpr::Sub(a, b) => eval_expr(a, env)?.saturating_sub(eval_expr(b, env)?),
        CountExpr::Mul(a, b) => eval_expr(a, env)?.saturating_mul(eval_expr(b, env)?),
    })
}

/// Per-sort totals of one binder, in first-appearance order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinderCounts(Vec<(String, u64)>);

impl BinderCounts {
    pub fn get(&self, sort: &str) -> u64 {
        self.0.iter().find(|(s, _)| s == sort).map_or(0, |(_, n)| *n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(s, n)| (s.as_str(), *n))
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|(_, n)| n).sum()
    }
}

/// Number of variables of each sort bound by `b`. A sort named in several
/// shifts gets the sum of their counts.
pub fn binder_counts<E: NatEnv + ?Sized>(b: &BindingSpec, env: &E) -> Result<BinderCounts, EvalError> {
    let mut out: Vec<(String, u64)> = Vec::new();
    for shift in &b.shifts {
        let n = eval_expr(&shift.count, env)?;
        match out.iter_mut().find(|(s, _)| *s == shift.sort) {
            Some((_, total)) => *total = total.saturating_add(n),
            None => out.push((shift.sort.clone(), n)),
        }
    }
    Ok(BinderCounts(out))
}

#[derive(Clone, Copy, Debug)]
struct ConstructorRef {
    group: usize,
    category: usize,
    constructor: usize,
}

/// A grammar that satisfies every binding restriction, with lookup tables.
#[derive(Clone, Debug)]
pub struct ValidGrammar {
    grammar: SourceGrammar,
    index_constructor_of: BTreeMap<String, String>,
    /// For each constructor, the `nat` parameters declared before each
    /// parameter position.
    nat_param_env_of: HashMap<String, Vec<Vec<String>>>,
    constructors: HashMap<String, ConstructorRef>,
}

impl ValidGrammar {
    pub fn grammar(&self) -> &SourceGrammar {
        &self.grammar
    }

    pub fn module_name(&self) -> &str {
        &self.grammar.module_name
    }

    pub fn index_constructor_of(&self, category: &str) -> Option<&str> {
        self.index_constructor_of.get(category).map(String::as_str)
    }

    pub fn is_indexed(&self, category: &str) -> bool {
        self.index_constructor_of.contains_key(category)
    }

    /// `nat` parameter names preceding parameter `position` of `constructor`.
    pub fn nat_params_before(&self, constructor: &str, position: usize) -> &[String] {
        &self.nat_param_env_of[constructor][position]
    }

    pub fn constructor(&self, name: &str) -> Option<(&Category, &Constructor)> {
        let r = self.constructors.get(name)?;
        let cat = &self.grammar.groups[r.group].categories[r.category];
        Some((cat, &cat.constructors[r.constructor]))
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.grammar.category(name)
    }

    /// Categories in source order.
    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.grammar.categories().map(|c| c.name.as_str())
    }
}

struct Collector {
    errors: Vec<ValidationError>,
}

impl Collector {
    fn push(&mut self, code: ValidationCode, location: Location, message: String) {
        self.errors.push(ValidationError {
            code,
            location,
            message,
        });
    }
}

fn location(
    cat: &Category,
    ctor: Option<&Constructor>,
    param: Option<&str>,
    order: (usize, usize, usize),
) -> Location {
    Location {
        category: cat.name.clone(),
        constructor: ctor.map(|c| c.name.clone()),
        param: param.map(str::to_string),
        order,
    }
}

/// Checks every restriction and reports all violations, sorted by source
/// position.
pub fn validate_grammar(g: SourceGrammar) -> Result<ValidGrammar, Vec<ValidationError>> {
    let mut errs = Collector { errors: Vec::new() };

    // Category ordinal -> group, to reject references to groups not yet
    // declared.
    let mut category_group: HashMap<&str, usize> = HashMap::new();
    let mut indexed: HashSet<&str> = HashSet::new();
    let mut top_names: HashSet<&str> = HashSet::new();
    let mut cat_ord = 0usize;
    for (gi, group) in g.groups.iter().enumerate() {
        for cat in &group.categories {
            if !top_names.insert(&cat.name) {
                errs.push(
                    ValidationCode::DuplicateName,
                    location(cat, None, None, (cat_ord, 0, 0)),
                    format!("category `{}` is declared more than once", cat.name),
                );
            } else {
                category_group.insert(&cat.name, gi);
            }
            if cat.constructors.iter().any(Constructor::is_index_constructor) {
                indexed.insert(&cat.name);
            }
            cat_ord += 1;
        }
    }

    let mut index_constructor_of = BTreeMap::new();
    let mut nat_param_env_of = HashMap::new();
    let mut constructors = HashMap::new();
    let mut cat_ord = 0usize;
    for (gi, group) in g.groups.iter().enumerate() {
        for (ci, cat) in group.categories.iter().enumerate() {
            let mut index_ctors = 0usize;
            for (ki, ctor) in cat.constructors.iter().enumerate() {
                let at = |p: Option<&str>, pi: usize| location(cat, Some(ctor), p, (cat_ord, ki + 1, pi));
                if !top_names.insert(&ctor.name) {
                    errs.push(
                        ValidationCode::DuplicateName,
                        at(None, 0),
                        format!("constructor name `{}` is already used", ctor.name),
                    );
                } else {
                    constructors.insert(
                        ctor.name.clone(),
                        ConstructorRef {
                            group: gi,
                            category: ci,
                            constructor: ki,
                        },
                    );
                }

                if ctor.is_index_constructor() {
                    index_ctors += 1;
                    if index_ctors == 1 {
                        index_constructor_of.insert(cat.name.clone(), ctor.name.clone());
                    } else {
                        errs.push(
                            ValidationCode::MultipleIndexConstructors,
                            at(None, 0),
                            format!("category `{}` already has an index constructor", cat.name),
                        );
                    }
                    if ctor.params.len() != 1 {
                        errs.push(
                            ValidationCode::ExtraArgsOnIndexConstructor,
                            at(None, 0),
                            format!(
                                "index constructor `{}` must have exactly one parameter, found {}",
                                ctor.name,
                                ctor.params.len()
                            ),
                        );
                    }
                }

                let mut seen: HashSet<&str> = HashSet::new();
                let mut nats: Vec<String> = Vec::new();
                let mut envs = Vec::with_capacity(ctor.params.len());
                for (pi, param) in ctor.params.iter().enumerate() {
                    envs.push(nats.clone());
                    let here = || at(Some(&param.name), pi + 1);
                    if !seen.insert(&param.name) {
                        errs.push(
                            ValidationCode::DuplicateName,
                            here(),
                            format!("parameter `{}` is declared twice", param.name),
                        );
                    }
                    match &param.kind {
                        ParamKind::Nat => nats.push(param.name.clone()),
                        ParamKind::Index => {}
                        ParamKind::Subterm { category, binding } => {
                            match category_group.get(category.as_str()) {
                                None => errs.push(
                                    ValidationCode::UnknownCategoryInParam,
                                    here(),
                                    format!("unknown category `{category}`"),
                                ),
                                Some(&target) if target > gi => errs.push(
                                    ValidationCode::UnknownCategoryInParam,
                                    here(),
                                    format!("category `{category}` is used before its declaration"),
                                ),
                                Some(_) => {}
                            }
                            for shift in binding.iter().flat_map(|b| &b.shifts) {
                                if !category_group.contains_key(shift.sort.as_str()) {
                                    errs.push(
                                        ValidationCode::UnknownCategoryInBind,
                                        here(),
                                        format!("bound category `{}` does not exist", shift.sort),
                                    );
                                } else if !indexed.contains(shift.sort.as_str()) {
                                    errs.push(
                                        ValidationCode::UnknownCategoryInBind,
                                        here(),
                                        format!("bound category `{}` has no index constructor", shift.sort),
                                    );
                                }
                                for v in shift.count.variables() {
                                    if !nats.iter().any(|n| n == v) {
                                        errs.push(
                                            ValidationCode::UnboundExprIdentifier,
                                            here(),
                                            format!("`{v}` is not a preceding `nat` parameter of `{}`", ctor.name),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
                nat_param_env_of.insert(ctor.name.clone(), envs);
            }
            cat_ord += 1;
        }
    }

    if errs.errors.is_empty() {
        Ok(ValidGrammar {
            grammar: g,
            index_constructor_of,
            nat_param_env_of,
            constructors,
        })
    } else {
        // stable sort keeps discovery order for errors at the same spot
        errs.errors.sort_by_key(|e| e.location.order);
        Err(errs.errors)
    }
}
