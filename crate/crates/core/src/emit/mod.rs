//! Vernacular output.
//!
//! [`emit_module`] renders a validated grammar and its [`FunctionPlan`] as a
//! single module. The text depends on nothing but its inputs.

mod functions;
mod names;
mod properties;
mod syntax;
mod translation;

use crate::analysis::FunctionPlan;
use crate::validate::ValidGrammar;

pub use functions::emit_lift_subst;
pub use properties::emit_properties_and_tactics;
pub use syntax::{emit_db_inductives, emit_named_inductives};
pub use translation::emit_translation;

/// Section titles, in output order.
pub const SECTION_TITLES: [&str; 8] = [
    "Database and tactics",
    "De Bruijn structure",
    "Lifting and substitution",
    "Named syntax and translation",
    "Basic properties of index cases",
    "Index tactic",
    "Advanced properties",
    "Main tactic",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedFile {
    /// `(title, body)` in output order.
    pub sections: Vec<(String, String)>,
    pub rendered: String,
}

pub fn emit_module(g: &ValidGrammar, plan: &FunctionPlan) -> EmittedFile {
    emit_module_with_version(g, plan, crate::VERSION)
}

/// Like [`emit_module`], with `version` written in the header instead of
/// the crate version.
pub fn emit_module_with_version(g: &ValidGrammar, plan: &FunctionPlan, version: &str) -> EmittedFile {
    let bodies = [
        properties::database_and_tactics(plan),
        emit_db_inductives(g),
        emit_lift_subst(g, plan),
        format!("{}\n\n{}", emit_named_inductives(g), emit_translation(g, plan)),
        properties::basic_properties(g, plan),
        properties::index_tactic(plan),
        properties::advanced_properties(g, plan),
        properties::main_tactic(plan),
    ];
    let sections: Vec<(String, String)> = SECTION_TITLES
        .iter()
        .zip(bodies)
        .map(|(t, b)| (t.to_string(), b))
        .collect();
    let module = &plan.module_name;
    let mut rendered = format!("(* Generated by dbgen {version}. Do not edit. *)\n\nModule {module}.\n");
    for (title, body) in &sections {
        rendered.push_str(&format!("\n(** * {title} *)\n\n{body}\n"));
    }
    rendered.push_str(&format!("\nEnd {module}.\n"));
    EmittedFile { sections, rendered }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::plan_functions;
    use crate::term::testing::load;

    fn emit(name: &str) -> EmittedFile {
        let g = load(name);
        let plan = plan_functions(&g);
        emit_module_with_version(&g, &plan, "VERSION")
    }

    fn has_line(text: &str, line: &str) -> bool {
        text.lines().any(|l| l == line)
    }

    #[test]
    fn module_frame_and_database() {
        let out = emit("lambda.v").rendered;
        assert!(has_line(&out, "Module LambdaTerms."));
        assert!(has_line(&out, "Create HintDb LambdaTerms_database."));
        assert!(out.ends_with("\nEnd LambdaTerms.\n"));
        for tac in ["crush_tac", "ecrush_tac", "index_tac", "dbgen_tac"] {
            assert!(has_line(&out, &format!("Ltac {tac} :=")), "{tac}");
        }
        assert!(!out.contains('\r'));
    }

    #[test]
    fn sections_follow_the_layout() {
        let f = emit("system_f.v");
        let titles: Vec<&str> = f.sections.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(titles, SECTION_TITLES);
        let mut at = 0;
        for t in SECTION_TITLES {
            let found = f.rendered[at..].find(&format!("(** * {t} *)")).expect(t);
            at += found;
        }
    }

    #[test]
    fn system_f_functions_are_defined() {
        let out = emit("system_f.v").rendered;
        for f in [
            "type_lift_in_type",
            "type_lift_in_term",
            "term_lift_in_term",
            "type_subst_in_type",
            "type_subst_in_term",
            "term_subst_in_term",
        ] {
            let defined = out
                .lines()
                .any(|l| (l.starts_with("Fixpoint ") || l.starts_with("with ")) && l.split(' ').nth(1) == Some(f));
            assert!(defined, "{f}");
        }
    }

    #[test]
    fn lambda_clauses() {
        let out = emit("lambda.v").rendered;
        assert!(has_line(&out, "  | var x => if le_gt_dec k x then var (n + x) else var x"));
        assert!(has_line(&out, "  | lam t' => lam (term_lift_in_term n (1 + k) t')"));
        assert!(has_line(
            &out,
            "  | lam t' => lam (term_subst_in_term (term_lift_in_term 1 0 u) (1 + j) t')"
        ));
    }

    #[test]
    fn substitution_under_a_type_binder_lifts_u_by_types() {
        let out = emit("system_f.v").rendered;
        assert!(has_line(
            &out,
            "  | gen t' => gen (term_subst_in_term (type_lift_in_term 1 0 u) j t')"
        ));
        assert!(has_line(
            &out,
            "  | gen t' => gen (type_subst_in_term (type_lift_in_type 1 0 u) (1 + j) t')"
        ));
    }

    #[test]
    fn count_expressions_are_transcribed() {
        let out = emit("counted.v").rendered;
        assert!(has_line(
            &out,
            "  | mlam n' body => mlam n' (term_lift_in_term n ((2 * n' - 1) + k) body)"
        ));
        assert!(has_line(
            &out,
            "  | pair_let m t' body => pair_let m (term_lift_in_term n k t') (term_lift_in_term n ((m + 1) + k) body)"
        ));
    }

    #[test]
    fn annotations_are_stripped() {
        let f = emit("lambda.v");
        let db = &f.sections[1].1;
        assert_eq!(
            db,
            "Inductive term : Type :=\n| var (x : nat)\n| app (t1 : term) (t2 : term)\n| lam (t : term)."
        );
        assert!(!f.rendered.contains("(* index *)"));
        assert!(!f.rendered.contains("bind"));
    }

    #[test]
    fn mutual_groups_keep_with() {
        let g = load("mutual.v");
        let db = emit_db_inductives(&g);
        assert!(db.contains(".\nwith decl : Type :=") || db.contains("\nwith decl : Type :="));
        let named = emit_named_inductives(&g);
        assert!(named.contains("\nwith _decl : Type :="));
    }

    #[test]
    fn named_syntax_is_prefixed() {
        let g = load("lambda.v");
        let named = emit_named_inductives(&g);
        assert_eq!(
            named,
            "Inductive _term : Type :=\n| _var (_x : string)\n| _app (_t1 : _term) (_t2 : _term)\n| _lam (_t_term : list string) (_t : _term)."
        );
        let g = load("two_sorts_one_binder.v");
        let named = emit_named_inductives(&g);
        assert!(named.contains(
            "| _unpack (_t : _tm) (_body_ty : list string) (_body_tm : list string) (_body : _tm)"
        ));
        assert!(named.contains("| _kstar\n"));
    }

    #[test]
    fn one_translation_per_category() {
        let g = load("lambda.v");
        let plan = plan_functions(&g);
        let tr = emit_translation(&g, &plan);
        assert_eq!(tr.matches("dbify_").count(), 4);
        assert!(tr.contains("Fixpoint dbify_term (ctx_term : list string) (t : _term) {struct t} : option term :="));
        assert!(tr.contains("  | _var x => option_map var (dbgen_lookup x ctx_term)"));
        assert!(tr.contains("Nat.eqb (List.length t_term) 1"));
        assert!(tr.contains("else None"));
    }

    #[test]
    fn lemma_counts() {
        let out = emit("system_f.v").rendered;
        let zero = out.lines().filter(|l| l.starts_with("Lemma ") && l.contains("_zero :")).count();
        assert_eq!(zero, 3);
        let lemmas: Vec<&str> = out
            .lines()
            .filter_map(|l| l.strip_prefix("Lemma "))
            .map(|l| l.split(' ').next().unwrap())
            .collect();
        for l in &lemmas {
            assert!(has_line(&out, &format!("#[global] Hint Resolve {l} : SYS_F_terms_database.")), "{l}");
        }
    }

    #[test]
    fn index_free_grammar_keeps_every_section() {
        let f = emit("no_index.v");
        assert_eq!(f.sections.len(), 8);
        assert!(f.sections[2].1.starts_with("(*"));
        assert!(f.sections[4].1.starts_with("(*"));
        assert!(f.sections[6].1.starts_with("(*"));
        assert!(f.sections[3].1.contains("Fixpoint dbify_expr (t : _expr)"));
    }

    #[test]
    fn emission_is_deterministic() {
        for name in ["lambda.v", "system_f.v", "mutual.v", "counted.v", "two_sorts_one_binder.v", "no_index.v"] {
            assert_eq!(emit(name), emit(name));
        }
    }

    #[test]
    fn properties_wrapper_concatenates_the_sections() {
        let g = load("lambda.v");
        let plan = plan_functions(&g);
        let all = emit_properties_and_tactics(&g, &plan);
        let f = emit("lambda.v");
        for i in [0, 4, 5, 6, 7] {
            assert!(all.contains(&f.sections[i].1));
        }
    }
}
