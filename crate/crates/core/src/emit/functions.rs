use super::names::{apply, shifted, Names};
use crate::analysis::FunctionPlan;
use crate::grammar::{Category, Constructor, ParamKind};
use crate::validate::ValidGrammar;

/// Lifting then substitution functions: one fixpoint per sort and
/// `with`-group, restricted to the categories in which the sort occurs.
pub fn emit_lift_subst(g: &ValidGrammar, plan: &FunctionPlan) -> String {
    if plan.indexed_sorts.is_empty() {
        return format!(
            "(* {} has no index constructor: there is nothing to lift or substitute. *)",
            g.module_name()
        );
    }
    let names = Names::new(g, plan);
    let mut blocks = Vec::new();
    for subst in [false, true] {
        for s in &plan.indexed_sorts {
            for grp in &g.grammar().groups {
                let cats: Vec<&Category> = grp
                    .categories
                    .iter()
                    .filter(|c| plan.reaches(&c.name, s))
                    .collect();
                if cats.is_empty() {
                    continue;
                }
                let fns: Vec<String> = cats
                    .iter()
                    .map(|cat| {
                        if subst {
                            subst_fn(plan, &names, s, cat)
                        } else {
                            lift_fn(plan, &names, s, cat)
                        }
                    })
                    .collect();
                blocks.push(format!("Fixpoint {}.", fns.join("\nwith ")));
            }
        }
    }
    blocks.join("\n\n")
}

fn fixpoint(names: &Names, name: &str, args: &[(&str, &str)], cat: &Category, clauses: Vec<String>) -> String {
    let t = names.arg("t");
    let mut out = String::from(name);
    for (v, ty) in args {
        out.push_str(&format!(" ({v} : {ty})"));
    }
    out.push_str(&format!(" ({t} : {}) {{struct {t}}} : {} :=\n", cat.name, cat.name));
    out.push_str(&format!("  match {t} with\n"));
    for c in clauses {
        out.push_str(&format!("  | {c}\n"));
    }
    out.push_str("  end");
    out
}

fn lhs(ctor: &Constructor, vars: &[String]) -> String {
    apply(&ctor.name, vars)
}

fn lift_fn(plan: &FunctionPlan, names: &Names, s: &str, cat: &Category) -> String {
    let (n, k) = (names.arg("n"), names.arg("k"));
    let clauses = cat
        .constructors
        .iter()
        .map(|ctor| {
            let vars = names.pattern(ctor);
            let rhs = if ctor.is_index_constructor() {
                let (c, x) = (&ctor.name, &vars[0]);
                if cat.name == s {
                    format!("if le_gt_dec {k} {x} then {c} ({n} + {x}) else {c} {x}")
                } else {
                    format!("{c} {x}")
                }
            } else {
                let args: Vec<String> = ctor
                    .params
                    .iter()
                    .zip(&vars)
                    .map(|(p, v)| match (&p.kind, p.subterm_category().and_then(|c| plan.lift(s, c))) {
                        (ParamKind::Subterm { binding, .. }, Some(f)) => {
                            let cutoff = shifted(ctor, &vars, binding.as_ref(), s, k);
                            format!("({f} {n} {} {v})", paren(&cutoff))
                        }
                        _ => v.clone(),
                    })
                    .collect();
                apply(&ctor.name, &args)
            };
            format!("{} => {}", lhs(ctor, &vars), rhs)
        })
        .collect();
    let name = plan.lift(s, &cat.name).expect("planned");
    fixpoint(names, name, &[(n, "nat"), (k, "nat")], cat, clauses)
}

fn subst_fn(plan: &FunctionPlan, names: &Names, s: &str, cat: &Category) -> String {
    let (u, j) = (names.arg("u"), names.arg("j"));
    let clauses = cat
        .constructors
        .iter()
        .map(|ctor| {
            let vars = names.pattern(ctor);
            let rhs = if ctor.is_index_constructor() {
                let (c, x) = (&ctor.name, &vars[0]);
                if cat.name == s {
                    format!(
                        "if le_gt_dec {j} {x} then (if le_gt_dec {x} {j} then {u} else {c} ({x} - 1)) else {c} {x}"
                    )
                } else {
                    format!("{c} {x}")
                }
            } else {
                let args: Vec<String> = ctor
                    .params
                    .iter()
                    .zip(&vars)
                    .map(|(p, v)| match (&p.kind, p.subterm_category().and_then(|c| plan.subst(s, c))) {
                        (ParamKind::Subterm { binding, .. }, Some(f)) => {
                            let binding = binding.as_ref();
                            // u crosses the binder: lift it once per sort bound there
                            let mut lifted = u.to_string();
                            for s2 in plan.sorts_in(s) {
                                if let Some(b) = binding.and_then(|b| super::names::bound_count(ctor, &vars, b, s2)) {
                                    let lift = plan.lift(s2, s).expect("planned");
                                    lifted = format!("({lift} {b} 0 {lifted})");
                                }
                            }
                            let target = shifted(ctor, &vars, binding, s, j);
                            format!("({f} {lifted} {} {v})", paren(&target))
                        }
                        _ => v.clone(),
                    })
                    .collect();
                apply(&ctor.name, &args)
            };
            format!("{} => {}", lhs(ctor, &vars), rhs)
        })
        .collect();
    let name = plan.subst(s, &cat.name).expect("planned");
    fixpoint(names, name, &[(u, s), (j, "nat")], cat, clauses)
}

fn paren(e: &str) -> String {
    if e.contains(' ') {
        format!("({e})")
    } else {
        e.to_string()
    }
}
