#![allow(dead_code)]

use gforge::theory::{RelName, RelationSymbol, SortName};
use gforge::{Formula, Sequent, Theory};
use rand::seq::SliceRandom;
use rand::Rng;

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    t: &'a Theory,
    fresh: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn vars_of<'s>(scope: &'s [(String, SortName)], sort: &SortName) -> Vec<&'s String> {
        scope
            .iter()
            .filter(|(_, s)| s == sort)
            .map(|(v, _)| v)
            .collect()
    }

    fn atom(&mut self, scope: &[(String, SortName)]) -> Option<Formula> {
        let usable: Vec<&RelationSymbol> = self
            .t
            .relations
            .iter()
            .filter(|r| {
                r.signature
                    .iter()
                    .all(|s| !Self::vars_of(scope, s).is_empty())
            })
            .collect();
        let r = usable.choose(self.rng)?;
        let args = r
            .signature
            .iter()
            .map(|s| {
                Self::vars_of(scope, s)
                    .choose(self.rng)
                    .unwrap()
                    .to_string()
            })
            .collect();
        Some(Formula::Atom {
            rel: r.name.clone(),
            args,
        })
    }

    fn formula(&mut self, scope: &mut Vec<(String, SortName)>, depth: usize) -> Formula {
        let choice = if depth == 0 {
            self.rng.gen_range(0..4)
        } else {
            self.rng.gen_range(0..7)
        };
        match choice {
            0 => Formula::Top,
            1 => Formula::bottom(),
            2 | 3 => {
                if self.rng.gen_bool(0.3) {
                    if let Some((x, s)) = scope.choose(self.rng).cloned() {
                        let y = Self::vars_of(scope, &s)
                            .choose(self.rng)
                            .unwrap()
                            .to_string();
                        return Formula::Eq {
                            sort: s,
                            lhs: x,
                            rhs: y,
                        };
                    }
                }
                self.atom(scope).unwrap_or(Formula::Top)
            }
            4 => {
                let n = self.rng.gen_range(2..4);
                Formula::And((0..n).map(|_| self.formula(scope, depth - 1)).collect())
            }
            5 => {
                let n = self.rng.gen_range(2..4);
                Formula::Or((0..n).map(|_| self.formula(scope, depth - 1)).collect())
            }
            _ => match self.t.sorts.choose(self.rng).cloned() {
                None => Formula::Top,
                Some(sort) => {
                    self.fresh += 1;
                    let var = format!("e{}", self.fresh);
                    scope.push((var.clone(), sort.clone()));
                    let body = self.formula(scope, depth - 1);
                    scope.pop();
                    Formula::Exists {
                        var,
                        sort,
                        body: Box::new(body),
                    }
                }
            },
        }
    }
}

/// A random well-formed theory with at most three sorts, four relations and
/// four axioms, in the shape the parser produces.
pub fn random_theory<R: Rng>(rng: &mut R) -> Theory {
    let mut t = Theory {
        name: if rng.gen_bool(0.5) {
            format!("t{}", rng.gen_range(0..100))
        } else {
            String::new()
        },
        ..Theory::default()
    };
    t.sorts = (0..rng.gen_range(0..4))
        .map(|i| SortName::plain(format!("S{i}")))
        .collect();
    t.relations = (0..rng.gen_range(0..5))
        .map(|i| {
            let arity = if t.sorts.is_empty() {
                0
            } else {
                rng.gen_range(0..4)
            };
            let sig = (0..arity)
                .map(|_| t.sorts.choose(rng).unwrap().clone())
                .collect();
            RelationSymbol::new(RelName::plain(format!("r{i}")), sig)
        })
        .collect();
    let n_axioms = rng.gen_range(0..5);
    let mut axioms = Vec::new();
    for i in 0..n_axioms {
        let context: Vec<(String, SortName)> = if t.sorts.is_empty() {
            Vec::new()
        } else {
            (0..rng.gen_range(0..4))
                .map(|j| (format!("x{j}"), t.sorts.choose(rng).unwrap().clone()))
                .collect()
        };
        let mut g = Gen {
            rng,
            t: &t,
            fresh: 0,
        };
        let mut scope = context.clone();
        let premise = g.formula(&mut scope, 2);
        let conclusion = g.formula(&mut scope, 3);
        axioms.push(Sequent {
            label: format!("ax{i}"),
            context,
            premise,
            conclusion,
        });
    }
    t.axioms = axioms;
    t
}
