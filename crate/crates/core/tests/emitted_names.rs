//! Every name an emitted file defines comes from the plan or from the fixed
//! naming scheme, and none is defined twice.

mod common;

use std::collections::BTreeSet;

use dbgen::emit::emit_module;
use dbgen::{plan_functions, FunctionPlan, ValidGrammar};

/// Names defined at top level: inductives, constructors, fixpoints, lemmas
/// and tactics.
fn defined_names(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        for prefix in ["Inductive ", "with ", "Fixpoint ", "Lemma ", "Ltac ", "| "] {
            if let Some(rest) = line.strip_prefix(prefix) {
                out.push(rest.split([' ', '.']).next().unwrap().to_string());
            }
        }
    }
    out
}

const LEMMA_SUFFIXES: [&str; 9] = [
    "_var_ge", "_var_lt", "_var_eq", "_var_gt", "_var_other", "_zero", "_add", "_commute", "_subst_distrib",
];

fn allowed(g: &ValidGrammar, plan: &FunctionPlan) -> BTreeSet<String> {
    let mut ok = BTreeSet::new();
    for cat in g.grammar().categories() {
        ok.insert(cat.name.clone());
        ok.insert(plan.named(&cat.name));
        for c in &cat.constructors {
            ok.insert(c.name.clone());
            ok.insert(plan.named(&c.name));
        }
    }
    for f in plan.lift_names.iter().chain(&plan.subst_names) {
        ok.insert(f.name.clone());
        for suffix in LEMMA_SUFFIXES {
            ok.insert(format!("{}{suffix}", f.name));
        }
    }
    for f in &plan.subst_names {
        ok.insert(format!("{}_lift_cancel", f.name));
    }
    for f in &plan.lift_names {
        for s2 in &plan.indexed_sorts {
            ok.insert(format!("{}_{s2}_lift_in_{}_commute", f.sort, f.category));
        }
    }
    for (_, n) in &plan.translate_names {
        ok.insert(n.clone());
    }
    let t = &plan.tactic_names;
    ok.extend([t.crush.clone(), t.ecrush.clone(), t.index.clone(), t.main.clone()]);
    ok.insert("dbgen_lookup".into());
    ok
}

#[test]
fn names_are_planned_and_unique() {
    for (file, _) in common::corpus("valid") {
        let g = common::load(&file);
        let plan = plan_functions(&g);
        let text = emit_module(&g, &plan).rendered;
        let allowed = allowed(&g, &plan);
        let mut seen = BTreeSet::new();
        for name in defined_names(&text) {
            assert!(allowed.contains(&name), "{file}: unexpected name {name}");
            assert!(seen.insert(name.clone()), "{file}: {name} defined twice");
        }
        for f in plan.lift_names.iter().chain(&plan.subst_names) {
            assert!(seen.contains(&f.name), "{file}: {} missing", f.name);
        }
    }
}

#[test]
fn named_section_uses_the_prefix() {
    let g = common::load("system_f.v");
    let plan = plan_functions(&g);
    let f = emit_module(&g, &plan);
    let (_, body) = &f.sections[3];
    let inductives: String = body.split("\n\n").filter(|b| b.starts_with("Inductive")).collect::<Vec<_>>().join("\n");
    for name in defined_names(&inductives) {
        assert!(name.starts_with('_'), "{name}");
    }
    for word in inductives.split(|c: char| !(c.is_alphanumeric() || c == '_')) {
        if ["", "Inductive", "Type", "with", "nat", "string", "list"].contains(&word) {
            continue;
        }
        assert!(word.starts_with('_'), "{word}");
    }
}
