use super::names::Names;
use crate::analysis::FunctionPlan;
use crate::validate::ValidGrammar;

/// Library imports, the hint database and the two crush tactics.
pub(crate) fn database_and_tactics(plan: &FunctionPlan) -> String {
    let db = &plan.hintdb_name;
    let t = &plan.tactic_names;
    format!(
        "Require Import Arith Lia String List.\n\
         \n\
         Create HintDb {db}.\n\
         \n\
         Ltac {} :=\n  intros; simpl in *; try lia; auto with {db} arith.\n\
         \n\
         Ltac {} :=\n  intros; simpl in *; try lia; eauto with {db} arith.",
        t.crush, t.ecrush
    )
}

struct Lemma {
    name: String,
    statement: String,
    proof: String,
    /// Usable as a rewrite rule; `Some(true)` when side conditions need `lia`.
    rewrite: Option<bool>,
}

fn render(lemmas: &[Lemma], db: &str) -> String {
    lemmas
        .iter()
        .map(|l| {
            let mut out = format!(
                "Lemma {} : {}.\nProof. {} Qed.\n#[global] Hint Resolve {} : {db}.",
                l.name, l.statement, l.proof, l.name
            );
            match l.rewrite {
                Some(true) => out.push_str(&format!("\n#[global] Hint Rewrite {} using lia : {db}.", l.name)),
                Some(false) => out.push_str(&format!("\n#[global] Hint Rewrite {} : {db}.", l.name)),
                None => {}
            }
            out
        })
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Equations for the variable cases of every function whose category has an
/// index constructor.
pub(crate) fn basic_properties(g: &ValidGrammar, plan: &FunctionPlan) -> String {
    let names = Names::new(g, plan);
    let (n, k, j, u, x) = (names.arg("n"), names.arg("k"), names.arg("j"), names.arg("u"), names.arg("x"));
    let mut lemmas = Vec::new();
    for (lift, subst) in plan.lift_names.iter().zip(&plan.subst_names) {
        let (s, p) = (&lift.sort, &lift.category);
        let Some(var) = g.index_constructor_of(p) else {
            continue;
        };
        let (lf, sf) = (&lift.name, &subst.name);
        if s == p {
            lemmas.push(Lemma {
                name: format!("{lf}_var_ge"),
                statement: format!("forall ({n} {k} {x} : nat),\n  {k} <= {x} -> {lf} {n} {k} ({var} {x}) = {var} ({n} + {x})"),
                proof: format!("intros; simpl; destruct (le_gt_dec {k} {x}); [reflexivity | lia]."),
                rewrite: Some(true),
            });
            lemmas.push(Lemma {
                name: format!("{lf}_var_lt"),
                statement: format!("forall ({n} {k} {x} : nat),\n  {x} < {k} -> {lf} {n} {k} ({var} {x}) = {var} {x}"),
                proof: format!("intros; simpl; destruct (le_gt_dec {k} {x}); [lia | reflexivity]."),
                rewrite: Some(true),
            });
            lemmas.push(Lemma {
                name: format!("{sf}_var_eq"),
                statement: format!("forall ({u} : {s}) ({j} : nat),\n  {sf} {u} {j} ({var} {j}) = {u}"),
                proof: format!(
                    "intros; simpl; destruct (le_gt_dec {j} {j}); [destruct (le_gt_dec {j} {j}); [reflexivity | lia] | lia]."
                ),
                rewrite: Some(false),
            });
            lemmas.push(Lemma {
                name: format!("{sf}_var_gt"),
                statement: format!(
                    "forall ({u} : {s}) ({j} {x} : nat),\n  {j} < {x} -> {sf} {u} {j} ({var} {x}) = {var} ({x} - 1)"
                ),
                proof: format!(
                    "intros; simpl; destruct (le_gt_dec {j} {x}); [destruct (le_gt_dec {x} {j}); [lia | reflexivity] | lia]."
                ),
                rewrite: Some(true),
            });
            lemmas.push(Lemma {
                name: format!("{sf}_var_lt"),
                statement: format!("forall ({u} : {s}) ({j} {x} : nat),\n  {x} < {j} -> {sf} {u} {j} ({var} {x}) = {var} {x}"),
                proof: format!("intros; simpl; destruct (le_gt_dec {j} {x}); [lia | reflexivity]."),
                rewrite: Some(true),
            });
        } else {
            lemmas.push(Lemma {
                name: format!("{lf}_var_other"),
                statement: format!("forall ({n} {k} {x} : nat),\n  {lf} {n} {k} ({var} {x}) = {var} {x}"),
                proof: "reflexivity.".into(),
                rewrite: Some(false),
            });
            lemmas.push(Lemma {
                name: format!("{sf}_var_other"),
                statement: format!("forall ({u} : {s}) ({j} {x} : nat),\n  {sf} {u} {j} ({var} {x}) = {var} {x}"),
                proof: "reflexivity.".into(),
                rewrite: Some(false),
            });
        }
    }
    if lemmas.is_empty() {
        return "(* No category has an index constructor: there is no index case. *)".into();
    }
    render(&lemmas, &plan.hintdb_name)
}

/// Case analysis on every index comparison in sight, then arithmetic.
pub(crate) fn index_tactic(plan: &FunctionPlan) -> String {
    format!(
        "Ltac {} :=\n  \
         repeat match goal with\n         \
         | |- context [le_gt_dec ?a ?b] => destruct (le_gt_dec a b)\n         \
         | H : context [le_gt_dec ?a ?b] |- _ => destruct (le_gt_dec a b)\n         \
         end;\n  \
         try lia; auto with {}.",
        plan.tactic_names.index, plan.hintdb_name
    )
}

/// The binding laws, stated once per sort and category. Proofs are
/// templates: induction on the term, then the generated tactics.
pub(crate) fn advanced_properties(g: &ValidGrammar, plan: &FunctionPlan) -> String {
    if plan.lift_names.is_empty() {
        return "(* Nothing is lifted or substituted: there is no law to state. *)".into();
    }
    let names = Names::new(g, plan);
    let (n, m, k, k2, j, t, u) = (
        names.arg("n"),
        names.arg("m"),
        names.arg("k"),
        names.arg("k'"),
        names.arg("j"),
        names.arg("t"),
        names.arg("u"),
    );
    let proof = format!(
        "induction {t}; intros; simpl; try f_equal; {}; {}.",
        plan.tactic_names.index, plan.tactic_names.ecrush
    );
    let mut lemmas = Vec::new();
    for (lift, subst) in plan.lift_names.iter().zip(&plan.subst_names) {
        let (s, p) = (&lift.sort, &lift.category);
        let (lf, sf) = (&lift.name, &subst.name);
        let lift_s = plan.lift(s, s).expect("a sort occurs in itself");
        let mut push = |name: String, statement: String, rewrite| {
            lemmas.push(Lemma {
                name,
                statement,
                proof: proof.clone(),
                rewrite,
            })
        };
        push(
            format!("{lf}_zero"),
            format!("forall ({t} : {p}) ({k} : nat),\n  {lf} 0 {k} {t} = {t}"),
            Some(false),
        );
        push(
            format!("{lf}_add"),
            format!("forall ({t} : {p}) ({n} {m} {k} : nat),\n  {lf} {n} {k} ({lf} {m} {k} {t}) = {lf} ({n} + {m}) {k} {t}"),
            Some(false),
        );
        push(
            format!("{lf}_commute"),
            format!(
                "forall ({t} : {p}) ({n} {m} {k} {k2} : nat),\n  {k} <= {k2} -> {lf} {n} {k} ({lf} {m} {k2} {t}) = {lf} {m} ({k2} + {n}) ({lf} {n} {k} {t})"
            ),
            Some(true),
        );
        let later = plan.indexed_sorts.iter().skip_while(|x| *x != s).skip(1);
        for s2 in later {
            let Some(lf2) = plan.lift(s2, p) else {
                continue;
            };
            push(
                format!("{s}_{s2}_lift_in_{p}_commute"),
                format!(
                    "forall ({t} : {p}) ({n} {m} {k} {k2} : nat),\n  {lf} {n} {k} ({lf2} {m} {k2} {t}) = {lf2} {m} {k2} ({lf} {n} {k} {t})"
                ),
                None,
            );
        }
        push(
            format!("{sf}_lift_cancel"),
            format!("forall ({t} : {p}) ({u} : {s}) ({j} : nat),\n  {sf} {u} {j} ({lf} 1 {j} {t}) = {t}"),
            Some(false),
        );
        push(
            format!("{lf}_subst_distrib"),
            format!(
                "forall ({t} : {p}) ({u} : {s}) ({n} {k} {j} : nat),\n  {k} <= {j} -> {lf} {n} {k} ({sf} {u} {j} {t}) = {sf} ({lift_s} {n} {k} {u}) ({j} + {n}) ({lf} {n} {k} {t})"
            ),
            Some(true),
        );
    }
    render(&lemmas, &plan.hintdb_name)
}

/// Rewriting with the database, index case analysis and `eauto`.
pub(crate) fn main_tactic(plan: &FunctionPlan) -> String {
    let t = &plan.tactic_names;
    format!(
        "Ltac {} :=\n  intros; simpl in *; try autorewrite with {} in *; {}; {}.",
        t.main, plan.hintdb_name, t.index, t.ecrush
    )
}

/// Everything the module defines besides syntax and functions, in layout
/// order: database and crush tactics, index-case lemmas, the index tactic,
/// the binding laws and the main tactic.
pub fn emit_properties_and_tactics(g: &ValidGrammar, plan: &FunctionPlan) -> String {
    [
        database_and_tactics(plan),
        basic_properties(g, plan),
        index_tactic(plan),
        advanced_properties(g, plan),
        main_tactic(plan),
    ]
    .join("\n\n")
}
