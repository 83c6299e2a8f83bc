use std::collections::BTreeSet;

use crate::analysis::NAMED_PREFIX;
use crate::grammar::{Constructor, ParamKind};
use crate::validate::ValidGrammar;

/// The nameless inductives, exactly as written minus annotations.
pub fn emit_db_inductives(g: &ValidGrammar) -> String {
    let blocks: Vec<String> = g
        .grammar()
        .groups
        .iter()
        .map(|grp| {
            let cats: Vec<String> = grp
                .categories
                .iter()
                .map(|cat| {
                    let mut out = format!("{} : Type :=", cat.name);
                    for c in &cat.constructors {
                        let params: Vec<String> = c
                            .params
                            .iter()
                            .map(|p| {
                                let ty = match &p.kind {
                                    ParamKind::Index | ParamKind::Nat => "nat",
                                    ParamKind::Subterm { category, .. } => category,
                                };
                                format!("({} : {ty})", p.name)
                            })
                            .collect();
                        out.push_str(&format!("\n| {}", super::names::apply(&c.name, &params)));
                    }
                    out
                })
                .collect();
            format!("Inductive {}.", cats.join("\nwith "))
        })
        .collect();
    blocks.join("\n\n")
}

/// One parameter of a named constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum NamedParam {
    /// Mirrors source parameter `i`.
    Plain(usize),
    /// Names of the `sort` variables bound at source parameter `i`.
    Binders(usize, String),
}

impl NamedParam {
    /// Base spelling, without the named prefix.
    pub fn base(&self, ctor: &Constructor) -> String {
        match self {
            NamedParam::Plain(i) => ctor.params[*i].name.clone(),
            NamedParam::Binders(i, s) => format!("{}_{s}", ctor.params[*i].name),
        }
    }
}

/// Named parameters of `ctor`: every binding parameter is preceded by one
/// list of names per bound sort.
pub(crate) fn named_params(ctor: &Constructor) -> Vec<NamedParam> {
    let mut out = Vec::new();
    for (i, p) in ctor.params.iter().enumerate() {
        if let Some(spec) = p.binding() {
            for s in spec.sorts() {
                out.push(NamedParam::Binders(i, s.to_string()));
            }
        }
        out.push(NamedParam::Plain(i));
    }
    out
}

/// The named syntax: every identifier carries the `_` prefix, variables
/// hold strings and binders list the names they introduce.
pub fn emit_named_inductives(g: &ValidGrammar) -> String {
    let named = |s: &str| format!("{NAMED_PREFIX}{s}");
    let blocks: Vec<String> = g
        .grammar()
        .groups
        .iter()
        .map(|grp| {
            let cats: Vec<String> = grp
                .categories
                .iter()
                .map(|cat| {
                    let mut out = format!("{} : Type :=", named(&cat.name));
                    for c in &cat.constructors {
                        let mut used = BTreeSet::new();
                        let params: Vec<String> = named_params(c)
                            .iter()
                            .map(|np| {
                                let mut v = named(&np.base(c));
                                while !used.insert(v.clone()) {
                                    v.push('\'');
                                }
                                let ty = match np {
                                    NamedParam::Binders(..) => "list string".to_string(),
                                    NamedParam::Plain(i) => match &c.params[*i].kind {
                                        ParamKind::Index => "string".to_string(),
                                        ParamKind::Nat => "nat".to_string(),
                                        ParamKind::Subterm { category, .. } => named(category),
                                    },
                                };
                                format!("({v} : {ty})")
                            })
                            .collect();
                        out.push_str(&format!("\n| {}", super::names::apply(&named(&c.name), &params)));
                    }
                    out
                })
                .collect();
            format!("Inductive {}.", cats.join("\nwith "))
        })
        .collect();
    blocks.join("\n\n")
}
