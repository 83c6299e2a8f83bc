use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::FunctionPlan;
use crate::grammar::{BindingSpec, Constructor, CountExpr, ParamKind};
use crate::validate::ValidGrammar;

/// Words a local variable must never be spelled as.
const RESERVED: &[&str] = &[
    "O", "S", "Set", "Prop", "Type", "Some", "None", "andb", "as", "bool", "cons", "else", "end",
    "false", "fix", "forall", "fun", "if", "in", "le_gt_dec", "let", "list", "match", "nat", "nil",
    "option", "option_map", "return", "string", "string_dec", "then", "true", "with", "List",
    "Nat", "dbgen_lookup",
];

/// Local variable naming for one grammar. Globals are every category,
/// constructor and generated function name; locals get primes until they
/// avoid globals and each other.
pub(crate) struct Names {
    globals: BTreeSet<String>,
    /// Fixed argument and quantifier names, keyed by preferred spelling.
    args: BTreeMap<&'static str, String>,
    ctx: BTreeMap<String, String>,
    /// Names pattern variables must avoid besides the globals.
    locals: BTreeSet<String>,
}

impl Names {
    pub fn new(g: &ValidGrammar, plan: &FunctionPlan) -> Self {
        let mut globals: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        for cat in g.grammar().categories() {
            globals.insert(cat.name.clone());
            globals.insert(plan.named(&cat.name));
            for c in &cat.constructors {
                globals.insert(c.name.clone());
                globals.insert(plan.named(&c.name));
            }
        }
        for f in plan.lift_names.iter().chain(&plan.subst_names) {
            globals.insert(f.name.clone());
        }
        for (_, f) in &plan.translate_names {
            globals.insert(f.clone());
        }
        let mut names = Names {
            globals,
            args: BTreeMap::new(),
            ctx: BTreeMap::new(),
            locals: BTreeSet::new(),
        };
        let mut taken = BTreeSet::new();
        for base in ["n", "k", "j", "t", "u"] {
            let v = names.fresh(base, &mut taken);
            names.args.insert(base, v);
        }
        for s in &plan.indexed_sorts {
            let v = names.fresh(&format!("ctx_{s}"), &mut taken);
            names.ctx.insert(s.clone(), v);
        }
        names.locals = taken.clone();
        // only quantified in lemma statements, next to the ones above
        for base in ["m", "k'", "x"] {
            let v = names.fresh(base, &mut taken);
            names.args.insert(base, v);
        }
        names
    }

    /// Spelling of a fixed argument such as `n` or `t`.
    pub fn arg(&self, base: &str) -> &str {
        &self.args[base]
    }

    /// Context argument of the translation for `sort`.
    pub fn ctx(&self, sort: &str) -> &str {
        &self.ctx[sort]
    }

    pub fn fresh(&self, base: &str, used: &mut BTreeSet<String>) -> String {
        let mut v = base.to_string();
        while self.globals.contains(&v) || used.contains(&v) || self.locals.contains(&v) {
            v.push('\'');
        }
        used.insert(v.clone());
        v
    }

    /// Pattern variables for the parameters of `ctor`.
    pub fn pattern(&self, ctor: &Constructor) -> Vec<String> {
        let mut used = BTreeSet::new();
        ctor.params.iter().map(|p| self.fresh(&p.name, &mut used)).collect()
    }
}

/// Sum of the counts bound for `sort`, with parameter names replaced by
/// their pattern variables. `None` when nothing of `sort` is bound.
pub(crate) fn bound_count(
    ctor: &Constructor,
    vars: &[String],
    spec: &BindingSpec,
    sort: &str,
) -> Option<String> {
    let sum = spec
        .counts_for(sort)
        .cloned()
        .reduce(CountExpr::add)?;
    let rename = |v: &str| {
        ctor.params
            .iter()
            .position(|p| p.name == v && p.kind == ParamKind::Nat)
            .map_or_else(|| v.to_string(), |i| vars[i].clone())
    };
    let text = sum.render_with(&rename);
    Some(if sum.is_atomic() { text } else { format!("({text})") })
}

/// `base` moved past the variables of `sort` bound at a parameter.
pub(crate) fn shifted(
    ctor: &Constructor,
    vars: &[String],
    spec: Option<&BindingSpec>,
    sort: &str,
    base: &str,
) -> String {
    match spec.and_then(|b| bound_count(ctor, vars, b, sort)) {
        Some(c) => format!("{c} + {base}"),
        None => base.to_string(),
    }
}

/// `head a1 ... an`, or just `head` without arguments.
pub(crate) fn apply(head: &str, args: &[String]) -> String {
    if args.is_empty() {
        head.to_string()
    } else {
        format!("{head} {}", args.join(" "))
    }
}
