use std::collections::HashMap;
use std::rc::Rc;

use super::{Arg, Engine, Name, Term};
use crate::grammar::ParamKind;
use crate::validate::ValidGrammar;

/// Natural arguments are drawn from this range.
pub const NAT_ARG_VALUES: [u64; 3] = [0, 1, 2];

/// Exhaustive, memoized enumeration of well-formed terms.
///
/// Terms are produced by increasing size, then constructor order, natural
/// arguments and size splits in lexicographic order.
pub struct Enumerator<'e, 'g> {
    engine: &'e Engine<'g>,
    max_index: u64,
    /// Indexed sorts in source order; depth vectors follow this order.
    sorts: Vec<String>,
    memo: HashMap<(String, usize, Vec<u64>), Rc<Vec<Term>>>,
}

impl<'e, 'g> Enumerator<'e, 'g> {
    pub fn new(engine: &'e Engine<'g>, max_index: u64) -> Self {
        Enumerator {
            engine,
            max_index,
            sorts: engine.plan().indexed_sorts.clone(),
            memo: HashMap::new(),
        }
    }

    /// Every term of `sort` with at most `max_size` nodes and no binders
    /// above it.
    pub fn up_to(&mut self, sort: &str, max_size: usize) -> Vec<Term> {
        let depth = vec![0; self.sorts.len()];
        let mut out = Vec::new();
        for size in 1..=max_size {
            out.extend(self.exact(sort, size, &depth).iter().cloned());
        }
        out
    }

    fn exact(&mut self, sort: &str, size: usize, depth: &[u64]) -> Rc<Vec<Term>> {
        let key = (sort.to_string(), size, depth.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let terms = Rc::new(self.build(sort, size, depth));
        self.memo.insert(key, terms.clone());
        terms
    }

    fn build(&mut self, sort: &str, size: usize, depth: &[u64]) -> Vec<Term> {
        let g: &ValidGrammar = self.engine.grammar();
        let Some(cat) = g.category(sort) else {
            return Vec::new();
        };
        let sort_name: Name = sort.into();
        let mut out = Vec::new();
        for ctor in &cat.constructors {
            if ctor.is_index_constructor() {
                if size == 1 {
                    let d = self.depth_of(depth, sort);
                    out.extend((0..self.max_index + d).map(|index| Term::Var {
                        sort: sort_name.clone(),
                        index,
                    }));
                }
                continue;
            }
            let nat_positions: Vec<usize> = ctor
                .params
                .iter()
                .enumerate()
                .filter(|(_, p)| p.kind == ParamKind::Nat)
                .map(|(i, _)| i)
                .collect();
            let sub_positions: Vec<(usize, String)> = ctor
                .params
                .iter()
                .enumerate()
                .filter_map(|(i, p)| p.subterm_category().map(|c| (i, c.to_string())))
                .collect();
            if sub_positions.is_empty() && size != 1 {
                continue;
            }
            if size < 1 + sub_positions.len() {
                continue;
            }
            let ctor_name: Name = ctor.name.as_str().into();
            for nat_values in product(nat_positions.len(), &NAT_ARG_VALUES) {
                let mut args: Vec<Arg> = vec![Arg::Nat(0); ctor.params.len()];
                for (&pos, &v) in nat_positions.iter().zip(&nat_values) {
                    args[pos] = Arg::Nat(v);
                }
                // depth seen by each subterm position
                let depths: Vec<Vec<u64>> = sub_positions
                    .iter()
                    .map(|(pos, _)| {
                        let counts = self.engine.binder_counts_at(&ctor.name, *pos, &args);
                        self.sorts
                            .iter()
                            .zip(depth)
                            .map(|(s, d)| d + counts.get(s))
                            .collect()
                    })
                    .collect();
                for split in compositions(size - 1, sub_positions.len()) {
                    let choices: Vec<Rc<Vec<Term>>> = sub_positions
                        .iter()
                        .zip(&split)
                        .zip(&depths)
                        .map(|(((_, cat), &sz), d)| self.exact(cat, sz, d))
                        .collect();
                    if choices.iter().any(|c| c.is_empty()) {
                        continue;
                    }
                    for pick in product_indices(&choices.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                        let mut node_args = args.clone();
                        for ((pos, _), (choice, &i)) in sub_positions.iter().zip(choices.iter().zip(&pick)) {
                            node_args[*pos] = Arg::Sub(choice[i].clone());
                        }
                        out.push(Term::Node {
                            sort: sort_name.clone(),
                            constructor: ctor_name.clone(),
                            args: node_args,
                        });
                    }
                }
            }
        }
        out
    }

    fn depth_of(&self, depth: &[u64], sort: &str) -> u64 {
        self.sorts
            .iter()
            .position(|s| s == sort)
            .map_or(0, |i| depth[i])
    }
}

/// All terms of `sort` with at most `max_size` nodes; indices of each sort
/// range below `max_index` plus the number of binders of that sort above.
pub fn enumerate_terms(g: &ValidGrammar, sort: &str, max_size: usize, max_index: u64) -> Vec<Term> {
    let engine = Engine::new(g);
    Enumerator::new(&engine, max_index).up_to(sort, max_size)
}

/// Ordered ways to write `total` as `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product(len: usize, values: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn product_indices(lens: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in lens {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn small_lambda_listing() {
        let g = load("lambda.v");
        let terms = enumerate_terms(&g, "term", 2, 1);
        assert_eq!(terms, vec![var(0), lam(var(0)), lam(var(1))]);
    }

    #[test]
    fn golden_counts() {
        // Hand count: T(1,d) = m + d, T(n,d) = T(n-1,d+1) + sum T(a,d) T(b,d).
        // With m = 2: 2 + 3 + 8 = 13. With m = 3, sizes 1..5: 3 + 4 + 14 + 46 + 172.
        let g = load("lambda.v");
        assert_eq!(enumerate_terms(&g, "term", 3, 2).len(), 13);
        assert_eq!(enumerate_terms(&g, "term", 5, 3).len(), 239);
    }

    #[test]
    fn enumeration_is_deterministic_and_well_formed() {
        let g = load("system_f.v");
        let engine = Engine::new(&g);
        let a = enumerate_terms(&g, "term", 4, 2);
        assert_eq!(a, enumerate_terms(&g, "term", 4, 2));
        for t in &a {
            engine.check_wf_sort("term", t).unwrap();
            assert!(t.size() <= 4);
        }
        // types of size 1: three variables and three constants
        assert_eq!(enumerate_terms(&g, "type", 1, 3).len(), 6);
    }

    #[test]
    fn sort_without_finite_terms_is_empty() {
        let g = crate::validate::validate_grammar(
            crate::frontend::parse_source("Module M. Inductive s : Type := | more (x : s). End M.").unwrap(),
        )
        .unwrap();
        assert!(enumerate_terms(&g, "s", 4, 2).is_empty());
    }

    #[test]
    fn binder_counts_from_nat_args_extend_the_index_range() {
        let g = load("counted.v");
        let terms = enumerate_terms(&g, "term", 2, 1);
        // mlam 2 binds three variables, so indices 0..=3 appear under it,
        // next to the three literals `lit 0..=2`
        let under_mlam2: Vec<&Term> = terms
            .iter()
            .filter(|t| matches!(t, Term::Node { constructor, args, .. } if &**constructor == "mlam" && args[0] == Arg::Nat(2)))
            .collect();
        assert_eq!(under_mlam2.len(), 7);
        let vars = under_mlam2
            .iter()
            .filter(|t| matches!(t, Term::Node { args, .. } if matches!(args[1], Arg::Sub(Term::Var { .. }))))
            .count();
        assert_eq!(vars, 4);
    }

    #[test]
    fn compositions_enumerate_ordered_splits() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(2, 0), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
    }
}
