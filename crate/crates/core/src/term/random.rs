use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::enumerate::NAT_ARG_VALUES;
use super::named::{NamedArg, NamedTerm};
use super::{Arg, Engine, Name};
use crate::grammar::ParamKind;

/// Seeded generator of random named terms. Every binder in one generated
/// term gets a distinct name, so shadowing between binders of a single term
/// never happens; binders may still reuse names that are free in the context.
pub struct NamedTermGen<'e, 'g> {
    engine: &'e Engine<'g>,
    rng: StdRng,
    pool: Vec<String>,
}

impl<'e, 'g> NamedTermGen<'e, 'g> {
    pub fn new(engine: &'e Engine<'g>, seed: u64, pool: &[&str]) -> Self {
        NamedTermGen {
            engine,
            rng: StdRng::seed_from_u64(seed),
            pool: pool.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    /// A term of `sort` with at most `max_size` nodes whose free variables
    /// all come from `scope`. `None` when the attempt painted itself into a
    /// corner (e.g. a variable was needed but none of its sort was in scope).
    pub fn generate(&mut self, sort: &str, max_size: usize, scope: &[(Name, Name)]) -> Option<NamedTerm> {
        let mut scope = scope.to_vec();
        let mut used = BTreeSet::new();
        self.gen(sort, max_size, &mut scope, &mut used)
    }

    fn gen(
        &mut self,
        sort: &str,
        budget: usize,
        scope: &mut Vec<(Name, Name)>,
        used: &mut BTreeSet<(Name, Name)>,
    ) -> Option<NamedTerm> {
        let g = self.engine.grammar();
        let cat = g.category(sort)?;
        let in_scope: Vec<Name> = scope
            .iter()
            .filter(|(s, _)| &**s == sort)
            .map(|(_, n)| n.clone())
            .collect();
        let feasible: Vec<_> = cat
            .constructors
            .iter()
            .filter(|c| {
                if c.is_index_constructor() {
                    !in_scope.is_empty()
                } else {
                    let subs = c.params.iter().filter(|p| p.subterm_category().is_some()).count();
                    budget > subs
                }
            })
            .collect();
        let ctor = *feasible.choose(&mut self.rng)?;
        if ctor.is_index_constructor() {
            return Some(NamedTerm::Var {
                sort: sort.into(),
                name: in_scope.choose(&mut self.rng)?.clone(),
            });
        }

        let nat_args: Vec<Arg> = ctor
            .params
            .iter()
            .map(|p| match p.kind {
                ParamKind::Nat => Arg::Nat(*NAT_ARG_VALUES.choose(&mut self.rng).unwrap()),
                _ => Arg::Nat(0),
            })
            .collect();
        let subs = ctor.params.iter().filter(|p| p.subterm_category().is_some()).count();
        let mut shares = vec![1usize; subs];
        for _ in 0..budget.saturating_sub(1 + subs) {
            if subs > 0 {
                let i = self.rng.gen_range(0..subs);
                shares[i] += 1;
            }
        }

        let mut args = Vec::with_capacity(ctor.params.len());
        let mut share = shares.into_iter();
        for (i, p) in ctor.params.iter().enumerate() {
            match &p.kind {
                ParamKind::Nat => args.push(NamedArg::Nat(match nat_args[i] {
                    Arg::Nat(v) => v,
                    Arg::Sub(_) => unreachable!(),
                })),
                ParamKind::Subterm { category, .. } => {
                    let counts = self.engine.binder_counts_at(&ctor.name, i, &nat_args);
                    let mut binders = Vec::new();
                    for (s, n) in counts.iter() {
                        for _ in 0..n {
                            let name = self.fresh_binder(s, used);
                            used.insert((s.into(), name.clone()));
                            binders.push((Name::from(s), name));
                        }
                    }
                    let depth = scope.len();
                    scope.extend(binders.iter().cloned());
                    let term = self.gen(category, share.next().unwrap(), scope, used);
                    scope.truncate(depth);
                    args.push(NamedArg::Sub { binders, term: term? });
                }
                ParamKind::Index => unreachable!("index constructors are generated as variables"),
            }
        }
        Some(NamedTerm::Node {
            sort: sort.into(),
            constructor: ctor.name.as_str().into(),
            args,
        })
    }

    fn fresh_binder(&mut self, sort: &str, used: &BTreeSet<(Name, Name)>) -> Name {
        let free: Vec<&String> = self
            .pool
            .iter()
            .filter(|n| !used.contains(&(Name::from(sort), Name::from(n.as_str()))))
            .collect();
        if let Some(n) = free.choose(&mut self.rng) {
            return Name::from(n.as_str());
        }
        (0..)
            .map(|i| format!("v{i}"))
            .find(|n| !used.contains(&(Name::from(sort), Name::from(n.as_str()))))
            .unwrap()
            .into()
    }
}
