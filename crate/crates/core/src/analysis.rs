//! Grammar graph, reachability and the table of generated names.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::validate::ValidGrammar;

/// Categories as nodes; an edge `p -> q` when some constructor of `p` has a
/// subterm parameter of category `q`. Nodes are stored in source order and
/// edges refer to them by ordinal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarGraph {
    nodes: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl GrammarGraph {
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    /// Edges as name pairs, ordered by source position of both ends.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        match (self.node_index(from), self.node_index(to)) {
            (Some(a), Some(b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }
}

pub fn build_graph(g: &ValidGrammar) -> GrammarGraph {
    let nodes: Vec<String> = g.category_names().map(str::to_string).collect();
    let pos = |n: &str| nodes.iter().position(|x| x == n).expect("validated category");
    let mut edges = BTreeSet::new();
    for cat in g.grammar().categories() {
        let from = pos(&cat.name);
        for ctor in &cat.constructors {
            for p in &ctor.params {
                if let Some(to) = p.subterm_category() {
                    edges.insert((from, pos(to)));
                }
            }
        }
    }
    GrammarGraph { nodes, edges }
}

/// Categories owning an index constructor, in source order.
pub fn indexed_sorts(g: &ValidGrammar) -> Vec<String> {
    g.category_names()
        .filter(|c| g.is_indexed(c))
        .map(str::to_string)
        .collect()
}

/// Every category from which `sort` can be reached, `sort` included, in
/// source order.
pub fn reachable_from(graph: &GrammarGraph, sort: &str) -> Vec<String> {
    let Some(target) = graph.node_index(sort) else {
        return Vec::new();
    };
    let mut reaches = vec![false; graph.nodes.len()];
    reaches[target] = true;
    // backwards search over reversed edges
    let mut stack = vec![target];
    while let Some(q) = stack.pop() {
        for &(p, to) in &graph.edges {
            if to == q && !reaches[p] {
                reaches[p] = true;
                stack.push(p);
            }
        }
    }
    graph
        .nodes
        .iter()
        .zip(reaches)
        .filter(|(_, r)| *r)
        .map(|(n, _)| n.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedFn {
    /// The indexed sort being lifted or substituted.
    pub sort: String,
    /// The category the function traverses.
    pub category: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TacticNames {
    pub crush: String,
    pub ecrush: String,
    pub index: String,
    pub main: String,
}

/// Every generated name, in emission order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionPlan {
    pub module_name: String,
    pub indexed_sorts: Vec<String>,
    pub lift_names: Vec<PlannedFn>,
    pub subst_names: Vec<PlannedFn>,
    /// `(category, dbify_category)` in source order.
    pub translate_names: Vec<(String, String)>,
    pub named_prefix: String,
    pub hintdb_name: String,
    pub tactic_names: TacticNames,
    /// The source `with`-groups.
    pub mutual_groups: Vec<Vec<String>>,
}

pub const NAMED_PREFIX: &str = "_";
pub const TRANSLATE_PREFIX: &str = "dbify_";

pub fn lift_name(sort: &str, category: &str) -> String {
    format!("{sort}_lift_in_{category}")
}

pub fn subst_name(sort: &str, category: &str) -> String {
    format!("{sort}_subst_in_{category}")
}

impl FunctionPlan {
    pub fn lift(&self, sort: &str, category: &str) -> Option<&str> {
        find(&self.lift_names, sort, category)
    }

    pub fn subst(&self, sort: &str, category: &str) -> Option<&str> {
        find(&self.subst_names, sort, category)
    }

    pub fn translate(&self, category: &str) -> Option<&str> {
        self.translate_names
            .iter()
            .find(|(c, _)| c == category)
            .map(|(_, n)| n.as_str())
    }

    /// Whether terms of `category` can contain variables of `sort`.
    pub fn reaches(&self, category: &str, sort: &str) -> bool {
        self.lift(sort, category).is_some()
    }

    /// Indexed sorts whose variables may occur in `category`, in source order.
    pub fn sorts_in(&self, category: &str) -> Vec<&str> {
        self.indexed_sorts
            .iter()
            .filter(|s| self.reaches(category, s))
            .map(String::as_str)
            .collect()
    }

    pub fn named(&self, ident: &str) -> String {
        format!("{}{ident}", self.named_prefix)
    }
}

fn find<'a>(fns: &'a [PlannedFn], sort: &str, category: &str) -> Option<&'a str> {
    fns.iter()
        .find(|f| f.sort == sort && f.category == category)
        .map(|f| f.name.as_str())
}

pub fn plan_functions(g: &ValidGrammar) -> FunctionPlan {
    let graph = build_graph(g);
    let sorts = indexed_sorts(g);
    let mut lift_names = Vec::new();
    let mut subst_names = Vec::new();
    for s in &sorts {
        for p in reachable_from(&graph, s) {
            lift_names.push(PlannedFn {
                sort: s.clone(),
                category: p.clone(),
                name: lift_name(s, &p),
            });
            subst_names.push(PlannedFn {
                sort: s.clone(),
                name: subst_name(s, &p),
                category: p,
            });
        }
    }
    let module = g.module_name();
    FunctionPlan {
        module_name: module.to_string(),
        indexed_sorts: sorts,
        lift_names,
        subst_names,
        translate_names: g
            .category_names()
            .map(|c| (c.to_string(), format!("{TRANSLATE_PREFIX}{c}")))
            .collect(),
        named_prefix: NAMED_PREFIX.to_string(),
        hintdb_name: format!("{module}_database"),
        tactic_names: TacticNames {
            crush: "crush_tac".into(),
            ecrush: "ecrush_tac".into(),
            index: "index_tac".into(),
            main: "dbgen_tac".into(),
        },
        mutual_groups: g
            .grammar()
            .groups
            .iter()
            .map(|grp| grp.categories.iter().map(|c| c.name.clone()).collect())
            .collect(),
    }
}

/// Stable text dump used by the `-debug` flag.
pub fn debug_report(g: &ValidGrammar) -> String {
    let graph = build_graph(g);
    let plan = plan_functions(g);
    let mut out = String::new();
    out.push_str("== grammar graph ==\n");
    writeln!(out, "nodes: {}", graph.nodes().join(" ")).unwrap();
    for (a, b) in graph.edges() {
        writeln!(out, "edge: {a} -> {b}").unwrap();
    }
    out.push_str("== indexed sorts ==\n");
    for s in &plan.indexed_sorts {
        writeln!(
            out,
            "{s} (index constructor {}): reached from {}",
            g.index_constructor_of(s).unwrap_or("?"),
            reachable_from(&graph, s).join(" ")
        )
        .unwrap();
    }
    out.push_str("== function plan ==\n");
    for f in &plan.lift_names {
        writeln!(out, "lift {} in {}: {}", f.sort, f.category, f.name).unwrap();
    }
    for f in &plan.subst_names {
        writeln!(out, "subst {} in {}: {}", f.sort, f.category, f.name).unwrap();
    }
    for (c, n) in &plan.translate_names {
        writeln!(out, "translate {c}: {n}").unwrap();
    }
    writeln!(out, "hint database: {}", plan.hintdb_name).unwrap();
    let t = &plan.tactic_names;
    writeln!(out, "tactics: {} {} {} {}", t.crush, t.ecrush, t.index, t.main).unwrap();
    for (i, grp) in plan.mutual_groups.iter().enumerate() {
        writeln!(out, "group {i}: {}", grp.join(" ")).unwrap();
    }
    out
}

impl fmt::Display for GrammarGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().map(|(a, b)| format!("{a}->{b}")).collect();
        write!(f, "{{{}}} [{}]", self.nodes.join(", "), edges.join(", "))
    }
}
