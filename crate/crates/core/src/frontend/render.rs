use std::fmt::Write;

use crate::grammar::{BindingSpec, CountExpr, Param, ParamKind, SourceGrammar};

/// Renders a grammar back to annotated source. Reparsing the output yields a
/// structurally equal grammar; layout and plain comments are not preserved.
pub fn render_source(g: &SourceGrammar) -> String {
    let mut out = String::new();
    writeln!(out, "Module {}.", g.module_name).unwrap();
    for group in &g.groups {
        out.push('\n');
        for (i, cat) in group.categories.iter().enumerate() {
            let lead = if i == 0 { "Inductive" } else { "with" };
            write!(out, "{lead} {} : Type :=", cat.name).unwrap();
            for c in &cat.constructors {
                write!(out, "\n| {}", c.name).unwrap();
                for p in &c.params {
                    out.push(' ');
                    out.push_str(&render_param(p));
                }
            }
            out.push('\n');
        }
        out.pop();
        out.push_str(".\n");
    }
    write!(out, "\nEnd {}.\n", g.module_name).unwrap();
    out
}

fn render_param(p: &Param) -> String {
    match &p.kind {
        ParamKind::Index => format!("((* index *) {} : nat)", p.name),
        ParamKind::Nat => format!("({} : nat)", p.name),
        ParamKind::Subterm {
            category,
            binding: None,
        } => format!("({} : {category})", p.name),
        ParamKind::Subterm {
            category,
            binding: Some(b),
        } => format!("((* bind {} in *) {} : {category})", render_shifts(b), p.name),
    }
}

/// `term`, `[2 * n term]`, ... joined by `, `. A count of literally 1 uses the
/// shorthand form.
pub fn render_shifts(b: &BindingSpec) -> String {
    b.shifts
        .iter()
        .map(|s| match &s.count {
            CountExpr::Lit(1) => s.sort.clone(),
            count => format!("[{count} {}]", s.sort),
        })
        .collect::<Vec<_>>()
        .join(", ")
}
