//! Abstract syntax of annotated grammar definitions.
//!
//! A [`SourceGrammar`] is a module holding one or more `Inductive` blocks. Each
//! block is an [`InductiveGroup`] of mutually recursive categories. Binding
//! information lives on [`Param`]s: an index parameter marks the variable
//! constructor of a category, and a [`BindingSpec`] on a subterm parameter
//! says which variables are bound inside it and how many.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceGrammar {
    pub module_name: String,
    pub groups: Vec<InductiveGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveGroup {
    pub categories: Vec<Category>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub constructors: Vec<Constructor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub params: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// `((* index *) x : nat)`
    Index,
    /// `(n : nat)`
    Nat,
    /// `(p : Cat)`, optionally preceded by a `(* bind ... in *)` annotation.
    Subterm {
        category: String,
        binding: Option<BindingSpec>,
    },
}

/// The `shifts` of a bind annotation, in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindingSpec {
    pub shifts: Vec<Shift>,
}

/// `count` variables of `sort` bound at once. The shorthand `Cat` is stored
/// as a literal count of 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub count: CountExpr,
    pub sort: String,
}

/// Binder-count expression over naturals and preceding `nat` parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CountExpr {
    Lit(u64),
    Var(String),
    Add(Box<CountExpr>, Box<CountExpr>),
    Sub(Box<CountExpr>, Box<CountExpr>),
    Mul(Box<CountExpr>, Box<CountExpr>),
}

impl SourceGrammar {
    pub fn categories(&self) -> impl Iterator<Item = &Category> {
        self.groups.iter().flat_map(|g| g.categories.iter())
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories().find(|c| c.name == name)
    }

    /// Position of a category in source order.
    pub fn category_position(&self, name: &str) -> Option<usize> {
        self.categories().position(|c| c.name == name)
    }

    /// Index of the `with`-group that declares `name`.
    pub fn group_of(&self, name: &str) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.categories.iter().any(|c| c.name == name))
    }

    pub fn constructors(&self) -> impl Iterator<Item = (&Category, &Constructor)> {
        self.categories()
            .flat_map(|c| c.constructors.iter().map(move |k| (c, k)))
    }
}

impl Constructor {
    pub fn is_index_constructor(&self) -> bool {
        self.params.iter().any(|p| p.kind == ParamKind::Index)
    }
}

impl Param {
    pub fn binding(&self) -> Option<&BindingSpec> {
        match &self.kind {
            ParamKind::Subterm { binding, .. } => binding.as_ref(),
            _ => None,
        }
    }

    pub fn subterm_category(&self) -> Option<&str> {
        match &self.kind {
            ParamKind::Subterm { category, .. } => Some(category),
            _ => None,
        }
    }
}

impl BindingSpec {
    pub fn single(sort: impl Into<String>) -> Self {
        BindingSpec {
            shifts: vec![Shift {
                count: CountExpr::Lit(1),
                sort: sort.into(),
            }],
        }
    }

    /// Distinct bound sorts in order of first appearance. Binder names for a
    /// subterm are always grouped sort by sort in this order.
    pub fn sorts(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for s in &self.shifts {
            if !out.contains(&s.sort.as_str()) {
                out.push(&s.sort);
            }
        }
        out
    }

    /// Count expressions contributing to `sort`, in shift order.
    pub fn counts_for<'a>(&'a self, sort: &'a str) -> impl Iterator<Item = &'a CountExpr> + 'a {
        self.shifts
            .iter()
            .filter(move |s| s.sort == sort)
            .map(|s| &s.count)
    }
}

impl CountExpr {
    pub fn add(a: CountExpr, b: CountExpr) -> Self {
        CountExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: CountExpr, b: CountExpr) -> Self {
        CountExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: CountExpr, b: CountExpr) -> Self {
        CountExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn var(name: impl Into<String>) -> Self {
        CountExpr::Var(name.into())
    }

    /// Identifiers mentioned by the expression, left to right.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            CountExpr::Lit(_) => {}
            CountExpr::Var(v) => out.push(v),
            CountExpr::Add(a, b) | CountExpr::Sub(a, b) | CountExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            CountExpr::Add(..) | CountExpr::Sub(..) => 1,
            CountExpr::Mul(..) => 2,
            CountExpr::Lit(_) | CountExpr::Var(_) => 3,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.precedence() == 3
    }

    /// Renders with `rename` applied to every identifier.
    pub fn render_with(&self, rename: &dyn Fn(&str) -> String) -> String {
        let mut out = String::new();
        self.write_with(&mut out, rename);
        out
    }

    fn write_with(&self, out: &mut String, rename: &dyn Fn(&str) -> String) {
        let (op, a, b) = match self {
            CountExpr::Lit(n) => {
                out.push_str(&n.to_string());
                return;
            }
            CountExpr::Var(v) => {
                out.push_str(&rename(v));
                return;
            }
            CountExpr::Add(a, b) => (" + ", a, b),
            CountExpr::Sub(a, b) => (" - ", a, b),
            CountExpr::Mul(a, b) => (" * ", a, b),
        };
        let prec = self.precedence();
        // Left-associative: the left child needs parens only when it binds
        // looser, the right child also when it binds equally.
        let left_parens = a.precedence() < prec;
        let right_parens = b.precedence() <= prec;
        write_child(out, a, left_parens, rename);
        out.push_str(op);
        write_child(out, b, right_parens, rename);
    }
}

fn write_child(out: &mut String, e: &CountExpr, parens: bool, rename: &dyn Fn(&str) -> String) {
    if parens {
        out.push('(');
    }
    e.write_with(out, rename);
    if parens {
        out.push(')');
    }
}

impl fmt::Display for CountExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|v| v.to_string()))
    }
}
