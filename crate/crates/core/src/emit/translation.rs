use std::collections::BTreeSet;

use super::names::{apply, bound_count, Names};
use super::syntax::{named_params, NamedParam};
use crate::analysis::FunctionPlan;
use crate::grammar::{Category, Constructor, ParamKind};
use crate::validate::ValidGrammar;

const LOOKUP: &str = "\
Fixpoint dbgen_lookup (x : string) (ctx : list string) {struct ctx} : option nat :=
  match ctx with
  | nil => None
  | y :: rest => if string_dec x y then Some 0 else option_map S (dbgen_lookup x rest)
  end.";

/// Name lookup plus one `dbify_p` per category. Each takes one context per
/// indexed sort occurring in `p`, innermost name first, and fails on unbound
/// names and on binder lists of the wrong length.
pub fn emit_translation(g: &ValidGrammar, plan: &FunctionPlan) -> String {
    let names = Names::new(g, plan);
    let mut blocks = vec![LOOKUP.to_string()];
    for grp in &g.grammar().groups {
        let fns: Vec<String> = grp
            .categories
            .iter()
            .map(|cat| dbify_fn(g, plan, &names, cat))
            .collect();
        blocks.push(format!("Fixpoint {}.", fns.join("\nwith ")));
    }
    blocks.join("\n\n")
}

fn ctx_params(plan: &FunctionPlan, names: &Names, cat: &str) -> Vec<String> {
    plan.sorts_in(cat)
        .into_iter()
        .map(|s| format!("({} : list string)", names.ctx(s)))
        .collect()
}

fn dbify_fn(g: &ValidGrammar, plan: &FunctionPlan, names: &Names, cat: &Category) -> String {
    let t = names.arg("t");
    let name = plan.translate(&cat.name).expect("planned");
    let mut params = ctx_params(plan, names, &cat.name);
    params.push(format!("({t} : {})", plan.named(&cat.name)));
    let mut out = format!(
        "{} {{struct {t}}} : option {} :=\n  match {t} with\n",
        apply(name, &params),
        cat.name
    );
    for ctor in &cat.constructors {
        out.push_str(&clause(g, plan, names, ctor));
    }
    out.push_str("  end");
    out
}

fn clause(g: &ValidGrammar, plan: &FunctionPlan, names: &Names, ctor: &Constructor) -> String {
    let nps = named_params(ctor);
    let mut used = BTreeSet::new();
    let vars: Vec<String> = nps.iter().map(|np| names.fresh(&np.base(ctor), &mut used)).collect();
    let pattern = apply(&plan.named(&ctor.name), &vars);
    // pattern variable of each source parameter, for count expressions
    let plain: Vec<String> = (0..ctor.params.len())
        .map(|i| {
            let at = nps.iter().position(|np| *np == NamedParam::Plain(i)).unwrap();
            vars[at].clone()
        })
        .collect();
    let binders = |i: usize, s: &str| {
        let at = nps
            .iter()
            .position(|np| *np == NamedParam::Binders(i, s.to_string()))
            .unwrap();
        vars[at].clone()
    };

    if ctor.is_index_constructor() {
        let sort = g
            .grammar()
            .categories()
            .find(|c| c.constructors.iter().any(|c2| c2.name == ctor.name))
            .map(|c| c.name.clone())
            .unwrap();
        return format!(
            "  | {pattern} => option_map {} (dbgen_lookup {} {})\n",
            ctor.name,
            plain[0],
            names.ctx(&sort)
        );
    }

    // every subterm becomes an option-valued expression
    let mut results = Vec::new();
    for (i, p) in ctor.params.iter().enumerate() {
        let ParamKind::Subterm { category, binding } = &p.kind else {
            continue;
        };
        let ctxs: Vec<String> = plan
            .sorts_in(category)
            .into_iter()
            .map(|s| match binding.as_ref().filter(|b| b.sorts().contains(&s)) {
                Some(_) => format!("(List.rev {} ++ {})", binders(i, s), names.ctx(s)),
                None => names.ctx(s).to_string(),
            })
            .collect();
        let mut args = ctxs;
        args.push(plain[i].clone());
        let call = apply(plan.translate(category).expect("planned"), &args);
        let expr = match binding {
            Some(spec) => {
                let checks: Vec<String> = spec
                    .sorts()
                    .into_iter()
                    .map(|s| {
                        let count = bound_count(ctor, &plain, spec, s).expect("bound sort");
                        format!("Nat.eqb (List.length {}) {count}", binders(i, s))
                    })
                    .collect();
                let cond = checks
                    .into_iter()
                    .reduce(|a, b| format!("andb ({a}) ({b})"))
                    .expect("a binder binds something");
                format!("(if {cond} then {call} else None)")
            }
            None => call,
        };
        results.push((i, expr));
    }

    let rebuilt: Vec<String> = (0..ctor.params.len()).map(|i| plain[i].clone()).collect();
    let value = apply(&ctor.name, &rebuilt);
    if results.is_empty() {
        let value = if rebuilt.is_empty() { value } else { format!("({value})") };
        return format!("  | {pattern} => Some {value}\n");
    }
    let scrutinees: Vec<String> = results.iter().map(|(_, e)| e.clone()).collect();
    let somes: Vec<String> = results.iter().map(|(i, _)| format!("Some {}", plain[*i])).collect();
    let wild = vec!["_"; results.len()].join(", ");
    format!(
        "  | {pattern} =>\n    match {} with\n    | {} => Some ({value})\n    | {wild} => None\n    end\n",
        scrutinees.join(", "),
        somes.join(", ")
    )
}
