//! From a first-order geometric theory to propositional frame presentations.
//!
//! Sorts become partial equivalence relations on the index set, relation
//! symbols become indexed propositions, and every axiom is instantiated at
//! every tuple of indices with `exists` turned into a join over the index set.
//! [`iso_expansion`] and [`double_iso_expansion`] build the theories of one
//! isomorphism and of a composable pair of isomorphisms between models.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::open::{BasicOpen, Generator, Index, Open};
use crate::presentation::{FramePresentation, IndexSet, Inequality, Provenance};
use crate::theory::{
    validate_theory, CopyTag, Formula, IsoTag, RelName, RelationSymbol, Sequent, SortName, Theory,
};

pub fn per_generator(sort: &SortName, lhs: Index, rhs: Index) -> Generator {
    Generator::Per {
        sort: sort.base.as_str().into(),
        copy: sort.copy,
        lhs,
        rhs,
    }
}

pub fn relation_generator(rel: &RelName, args: &[Index]) -> Generator {
    match rel {
        RelName::Symbol { base, copy } => Generator::rel(base, *copy, args),
        RelName::Iso { tag, sort } => {
            debug_assert_eq!(args.len(), 2);
            Generator::iso(*tag, sort, args[0], args[1])
        }
    }
}

fn stamp_sort(sort: &SortName, stamp: Option<CopyTag>) -> SortName {
    match (stamp, sort.copy) {
        (Some(c), None) => sort.tagged(c),
        _ => sort.clone(),
    }
}

fn stamp_rel(rel: &RelName, stamp: Option<CopyTag>) -> RelName {
    match (stamp, rel) {
        (Some(c), RelName::Symbol { base, copy: None }) => RelName::Symbol {
            base: base.clone(),
            copy: Some(c),
        },
        _ => rel.clone(),
    }
}

/// Instantiates formulas of one theory as opens.
struct Instantiator {
    idx: IndexSet,
    stamp: Option<CopyTag>,
    /// Sort at each argument position of every (stamped) generator symbol.
    positions: HashMap<RelName, Vec<SortName>>,
}

impl Instantiator {
    fn new(theory: &Theory, idx: IndexSet, stamp: Option<CopyTag>) -> Self {
        let positions = theory
            .relations
            .iter()
            .map(|r| {
                (
                    stamp_rel(&r.name, stamp),
                    r.signature.iter().map(|s| stamp_sort(s, stamp)).collect(),
                )
            })
            .collect();
        Instantiator {
            idx,
            stamp,
            positions,
        }
    }

    /// Does `g` mention index `n` at a position of sort `sort`? Such a
    /// generator already entails `[n ~ n]` in the presentation.
    fn witnesses(&self, g: &Generator, n: Index, sort: &SortName) -> bool {
        match g {
            Generator::Per {
                sort: s,
                copy,
                lhs,
                rhs,
            } => **s == *sort.base && *copy == sort.copy && (*lhs == n || *rhs == n),
            Generator::Rel { rel, copy, args } => {
                let name = RelName::Symbol {
                    base: rel.to_string(),
                    copy: *copy,
                };
                self.positions
                    .get(&name)
                    .is_some_and(|sig| args.iter().zip(sig).any(|(a, s)| *a == n && s == sort))
            }
            Generator::Iso {
                tag,
                sort: s,
                from,
                to,
            } => {
                let name = RelName::Iso {
                    tag: *tag,
                    sort: s.to_string(),
                };
                self.positions.get(&name).is_some_and(|sig| {
                    (*from == n && sig[0] == *sort) || (*to == n && sig[1] == *sort)
                })
            }
        }
    }

    fn lookup(&self, env: &[(String, Index)], v: &str) -> Result<Index> {
        env.iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, i)| *i)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn formula(&self, f: &Formula, env: &mut Vec<(String, Index)>) -> Result<Open> {
        Ok(match f {
            Formula::Top => Open::top(),
            Formula::Or(fs) => {
                let parts = fs
                    .iter()
                    .map(|g| self.formula(g, env))
                    .collect::<Result<Vec<_>>>()?;
                Open::join_all(&parts)
            }
            Formula::And(fs) => {
                let mut acc = Open::top();
                for g in fs {
                    acc = acc.meet(&self.formula(g, env)?);
                }
                acc
            }
            Formula::Atom { rel, args } => {
                let args = args
                    .iter()
                    .map(|a| self.lookup(env, a))
                    .collect::<Result<Vec<_>>>()?;
                Open::generator(relation_generator(&stamp_rel(rel, self.stamp), &args))
            }
            Formula::Eq { sort, lhs, rhs } => {
                let (l, r) = (self.lookup(env, lhs)?, self.lookup(env, rhs)?);
                Open::generator(per_generator(&stamp_sort(sort, self.stamp), l, r))
            }
            Formula::Exists { var, sort, body } => {
                let sort = stamp_sort(sort, self.stamp);
                let mut raw = Vec::new();
                for n in self.idx.iter() {
                    env.push((var.clone(), n));
                    let inst = self.formula(body, env);
                    env.pop();
                    let guard = BasicOpen::singleton(per_generator(&sort, n, n));
                    for b in inst?.basics() {
                        if b.generators().iter().any(|g| self.witnesses(g, n, &sort)) {
                            raw.push(b.clone());
                        } else {
                            raw.push(b.meet(&guard));
                        }
                    }
                }
                Open::normalize(raw)
            }
        })
    }
}

/// Instantiate `f` under `subst`, joining `exists` over the index set.
///
/// The bound index of an `exists` is guarded by `[n ~ n]` unless the
/// instantiated body already mentions it at a position of that sort, in
/// which case the guard is implied by the presentation. With `copy` set,
/// every untagged relation and sort is stamped with that copy tag.
pub fn instantiate_formula(
    theory: &Theory,
    f: &Formula,
    subst: &[(String, Index)],
    idx: IndexSet,
    copy: Option<CopyTag>,
) -> Result<Open> {
    let mut env = subst.to_vec();
    Instantiator::new(theory, idx, copy).formula(f, &mut env)
}

fn infer_provenance(t: &Theory) -> Provenance {
    let tags = t
        .sorts
        .iter()
        .map(|s| s.copy)
        .chain(t.relations.iter().map(|r| match &r.name {
            RelName::Symbol { copy, .. } => *copy,
            RelName::Iso {
                tag: IsoTag::Alpha, ..
            } => Some(CopyTag::Two),
            RelName::Iso { .. } => Some(CopyTag::Three),
        }));
    match tags.flatten().max() {
        None => Provenance::Objects,
        Some(CopyTag::Three) => Provenance::CompositionDomain,
        Some(_) => Provenance::Arrows,
    }
}

/// The presentation of the classifying locale of the propositionalized
/// theory at index bound `idx`.
///
/// Generators: `[n ~ m]` for every sort and `[n in R]` for every relation.
/// Inequalities, in emission order: symmetry and transitivity of each
/// partial equivalence relation; compatibility of each relation with the
/// relations on its argument sorts and its strictness; and every axiom at
/// every tuple of indices for its context, lexicographically. Duplicates and
/// inequalities that hold syntactically are omitted.
pub fn propositionalize(t: &Theory, idx: IndexSet) -> Result<FramePresentation> {
    let report = validate_theory(t);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }

    let mut generators = Vec::new();
    for s in &t.sorts {
        for (n, m) in idx.tuples(2).map(|v| (v[0], v[1])) {
            generators.push(per_generator(s, n, m));
        }
    }
    for r in &t.relations {
        for args in idx.tuples(r.arity()) {
            generators.push(relation_generator(&r.name, &args));
        }
    }
    generators.sort();
    generators.dedup();

    let mut emitter = Emitter::default();
    for s in &t.sorts {
        let per = |n, m| Open::generator(per_generator(s, n, m));
        for v in idx.tuples(2) {
            emitter.push(per(v[0], v[1]), per(v[1], v[0]));
        }
        for v in idx.tuples(3) {
            emitter.push(per(v[0], v[1]).meet(&per(v[1], v[2])), per(v[0], v[2]));
        }
    }
    for r in &t.relations {
        let arity = r.arity();
        for from in idx.tuples(arity) {
            let held = Open::generator(relation_generator(&r.name, &from));
            for to in idx.tuples(arity) {
                let mut lhs = BasicOpen::singleton(relation_generator(&r.name, &from));
                for (i, s) in r.signature.iter().enumerate() {
                    lhs = lhs.meet(&BasicOpen::singleton(per_generator(s, from[i], to[i])));
                }
                emitter.push(
                    lhs.into(),
                    Open::generator(relation_generator(&r.name, &to)),
                );
            }
            let strict = BasicOpen::new(
                r.signature
                    .iter()
                    .zip(&from)
                    .map(|(s, n)| per_generator(s, *n, *n)),
            );
            emitter.push(held, strict.into());
        }
    }
    let inst = Instantiator::new(t, idx, None);
    for ax in &t.axioms {
        for tuple in idx.tuples(ax.context.len()) {
            let mut env: Vec<(String, Index)> = ax
                .context
                .iter()
                .map(|(v, _)| v.clone())
                .zip(tuple.iter().copied())
                .collect();
            let guard = BasicOpen::new(
                ax.context
                    .iter()
                    .zip(&tuple)
                    .map(|((_, s), n)| per_generator(s, *n, *n)),
            );
            let lhs = Open::basic(guard).meet(&inst.formula(&ax.premise, &mut env)?);
            let rhs = inst.formula(&ax.conclusion, &mut env)?;
            emitter.push(lhs, rhs);
        }
    }

    Ok(FramePresentation::from_parts(
        infer_provenance(t),
        t.name.clone(),
        idx.k(),
        generators,
        emitter.out,
    ))
}

#[derive(Default)]
struct Emitter {
    seen: HashSet<Inequality>,
    out: Vec<Inequality>,
}

impl Emitter {
    fn push(&mut self, lhs: Open, rhs: Open) {
        let ineq = Inequality { lhs, rhs };
        if !ineq.is_tautology() && self.seen.insert(ineq.clone()) {
            self.out.push(ineq);
        }
    }
}

fn tag_formula(f: &Formula, c: CopyTag) -> Formula {
    match f {
        Formula::Top => Formula::Top,
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| tag_formula(g, c)).collect()),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| tag_formula(g, c)).collect()),
        Formula::Atom { rel, args } => Formula::Atom {
            rel: stamp_rel(rel, Some(c)),
            args: args.clone(),
        },
        Formula::Eq { sort, lhs, rhs } => Formula::Eq {
            sort: stamp_sort(sort, Some(c)),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        },
        Formula::Exists { var, sort, body } => Formula::Exists {
            var: var.clone(),
            sort: stamp_sort(sort, Some(c)),
            body: Box::new(tag_formula(body, c)),
        },
    }
}

fn iso_atom(tag: IsoTag, sort: &SortName, x: &str, y: &str) -> Formula {
    Formula::Atom {
        rel: RelName::Iso {
            tag,
            sort: sort.base.clone(),
        },
        args: vec![x.to_string(), y.to_string()],
    }
}

fn expand(t: &Theory, copies: &[CopyTag], isos: &[IsoTag], suffix: &str) -> Result<Theory> {
    let report = validate_theory(t);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let mut out = Theory {
        name: format!("{}{suffix}", t.name),
        ..Theory::default()
    };
    for &c in copies {
        out.sorts.extend(t.sorts.iter().map(|s| s.tagged(c)));
    }
    for &c in copies {
        out.relations
            .extend(t.relations.iter().map(|r| RelationSymbol {
                name: stamp_rel(&r.name, Some(c)),
                signature: r.signature.iter().map(|s| s.tagged(c)).collect(),
            }));
    }
    for &tag in isos {
        let (a, b) = tag.endpoints();
        out.relations.extend(t.sorts.iter().map(|s| RelationSymbol {
            name: RelName::Iso {
                tag,
                sort: s.base.clone(),
            },
            signature: vec![s.tagged(a), s.tagged(b)],
        }));
    }
    for &c in copies {
        out.axioms.extend(t.axioms.iter().map(|ax| {
            Sequent {
                label: format!("{}[{}]", ax.label, c.number()),
                context: ax
                    .context
                    .iter()
                    .map(|(v, s)| (v.clone(), s.tagged(c)))
                    .collect(),
                premise: tag_formula(&ax.premise, c),
                conclusion: tag_formula(&ax.conclusion, c),
            }
        }));
    }
    for &tag in isos {
        let (a, b) = tag.endpoints();
        for s in &t.sorts {
            let (sa, sb) = (s.tagged(a), s.tagged(b));
            let pair = [iso_atom(tag, s, "x", "y"), iso_atom(tag, s, "x'", "y'")];
            let with = |eq: Formula| {
                let mut v = pair.to_vec();
                v.push(eq);
                Formula::And(v)
            };
            let domain_eq = with(Formula::eq(sa.clone(), "x", "x'"));
            let codomain_eq = with(Formula::eq(sb.clone(), "y", "y'"));
            let context = vec![
                ("x".to_string(), sa.clone()),
                ("y".to_string(), sb.clone()),
                ("x'".to_string(), sa.clone()),
                ("y'".to_string(), sb.clone()),
            ];
            let label = |what: &str| format!("{}[{}]{what}", tag.name(), s.base);
            out.axioms.push(Sequent {
                label: label("functional"),
                context: context.clone(),
                premise: domain_eq.clone(),
                conclusion: codomain_eq.clone(),
            });
            out.axioms.push(Sequent {
                label: label("injective"),
                context,
                premise: codomain_eq,
                conclusion: domain_eq,
            });
            out.axioms.push(Sequent {
                label: label("total"),
                context: vec![("x".into(), sa.clone())],
                premise: Formula::Top,
                conclusion: Formula::exists("y", sb.clone(), iso_atom(tag, s, "x", "y")),
            });
            out.axioms.push(Sequent {
                label: label("surjective"),
                context: vec![("y".into(), sb.clone())],
                premise: Formula::Top,
                conclusion: Formula::exists("x", sa.clone(), iso_atom(tag, s, "x", "y")),
            });
        }
        for r in &t.relations {
            let xs: Vec<String> = (1..=r.arity()).map(|i| format!("x{i}")).collect();
            let ys: Vec<String> = (1..=r.arity()).map(|i| format!("y{i}")).collect();
            let graph: Vec<Formula> = r
                .signature
                .iter()
                .zip(xs.iter().zip(&ys))
                .map(|(s, (x, y))| iso_atom(tag, s, x, y))
                .collect();
            let side = |copy: CopyTag, vars: &[String]| {
                let mut parts = graph.clone();
                parts.push(Formula::Atom {
                    rel: stamp_rel(&r.name, Some(copy)),
                    args: vars.to_vec(),
                });
                Formula::conj(parts)
            };
            let context: Vec<(String, SortName)> = r
                .signature
                .iter()
                .zip(&xs)
                .map(|(s, x)| (x.clone(), s.tagged(a)))
                .chain(
                    r.signature
                        .iter()
                        .zip(&ys)
                        .map(|(s, y)| (y.clone(), s.tagged(b))),
                )
                .collect();
            let (lhs, rhs) = (side(a, &xs), side(b, &ys));
            let label = |dir: &str| format!("{}[{}]{dir}", tag.name(), r.name);
            out.axioms.push(Sequent {
                label: label("forward"),
                context: context.clone(),
                premise: lhs.clone(),
                conclusion: rhs.clone(),
            });
            out.axioms.push(Sequent {
                label: label("backward"),
                context,
                premise: rhs,
                conclusion: lhs,
            });
        }
    }
    Ok(out)
}

/// The theory of two models of `t` (copies 1 and 2) together with an
/// isomorphism `alpha` between them. Biconditionals are emitted as two
/// sequents.
pub fn iso_expansion(t: &Theory) -> Result<Theory> {
    expand(t, &[CopyTag::One, CopyTag::Two], &[IsoTag::Alpha], "_iso")
}

/// The theory of three models of `t` with isomorphisms `beta` (1 to 2) and
/// `gamma` (2 to 3): a composable pair.
pub fn double_iso_expansion(t: &Theory) -> Result<Theory> {
    expand(
        t,
        &[CopyTag::One, CopyTag::Two, CopyTag::Three],
        &[IsoTag::Beta, IsoTag::Gamma],
        "_iso_pair",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn idx(k: usize) -> IndexSet {
        IndexSet::new(k).unwrap()
    }

    fn leq(a: Index, b: Index) -> Generator {
        Generator::rel("leq", None, &[a, b])
    }

    fn per(a: Index, b: Index) -> Generator {
        Generator::per("X", None, a, b)
    }

    #[test]
    fn total_order_generator_count_and_totality_instance() {
        let t = corpus::linear_order();
        let p = propositionalize(&t, idx(2)).unwrap();
        assert_eq!(p.provenance(), Provenance::Objects);
        assert_eq!(p.generators().len(), 8);
        let totality = Inequality {
            lhs: Open::basic(BasicOpen::new([per(0, 0), per(1, 1)])),
            rhs: Open::normalize([
                BasicOpen::singleton(leq(0, 1)),
                BasicOpen::singleton(leq(1, 0)),
            ]),
        };
        assert!(p.inequalities().contains(&totality));
    }

    #[test]
    fn generator_count_formula() {
        for t in [
            corpus::linear_order(),
            corpus::propositional_demo(),
            corpus::dedekind_grid(),
        ] {
            for k in 1..=3 {
                let p = propositionalize(&t, idx(k)).unwrap();
                let expected: usize = t.sorts.len() * k * k
                    + t.relations
                        .iter()
                        .map(|r| k.pow(r.arity() as u32))
                        .sum::<usize>();
                assert_eq!(p.generators().len(), expected);
            }
        }
    }

    #[test]
    fn empty_theory_has_empty_presentation() {
        let p = propositionalize(&Theory::default(), idx(3)).unwrap();
        assert!(p.generators().is_empty());
        assert!(p.inequalities().is_empty());
    }

    #[test]
    fn propositional_theory_is_its_own_propositionalization() {
        let t = corpus::propositional_demo();
        let p1 = propositionalize(&t, idx(1)).unwrap();
        let p3 = propositionalize(&t, idx(3)).unwrap();
        assert_eq!(p1.generators(), p3.generators());
        assert_eq!(p1.inequalities(), p3.inequalities());
        assert!(p1
            .generators()
            .iter()
            .all(|g| matches!(g, Generator::Rel { .. })));
        // One inequality per axiom, read off literally.
        assert_eq!(p1.inequalities().len(), t.axioms.len());
        let none: &[(String, Index)] = &[];
        for (ax, ineq) in t.axioms.iter().zip(p1.inequalities()) {
            assert_eq!(
                ineq.lhs,
                instantiate_formula(&t, &ax.premise, none, idx(1), None).unwrap()
            );
            assert_eq!(
                ineq.rhs,
                instantiate_formula(&t, &ax.conclusion, none, idx(1), None).unwrap()
            );
        }
    }

    #[test]
    fn instantiate_equality_and_exists() {
        let t = corpus::linear_order();
        let subst = [("x".to_string(), 0), ("y".to_string(), 1)];
        let f = Formula::eq("X", "x", "y");
        assert_eq!(
            instantiate_formula(&t, &f, &subst, idx(2), None).unwrap(),
            Open::generator(per(0, 1))
        );

        let g = Formula::exists("x", "X", Formula::atom("leq", &["x", "y"]));
        let o = instantiate_formula(&t, &g, &[("y".to_string(), 1)], idx(2), None).unwrap();
        assert_eq!(
            o,
            Open::normalize([
                BasicOpen::singleton(leq(0, 1)),
                BasicOpen::singleton(leq(1, 1))
            ])
        );

        let bottom = instantiate_formula(&t, &Formula::bottom(), &subst, idx(2), None).unwrap();
        assert!(bottom.is_bottom());
    }

    #[test]
    fn bare_exists_is_guarded() {
        let t = corpus::linear_order();
        let f = Formula::exists("x", "X", Formula::Top);
        let o = instantiate_formula(&t, &f, &[], idx(2), None).unwrap();
        assert_eq!(
            o,
            Open::normalize([
                BasicOpen::singleton(per(0, 0)),
                BasicOpen::singleton(per(1, 1))
            ])
        );
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let t = corpus::linear_order();
        let f = Formula::atom("leq", &["x", "z"]);
        let err = instantiate_formula(&t, &f, &[("x".to_string(), 0)], idx(2), None).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable(v) if v == "z"));
    }

    #[test]
    fn copy_tag_is_stamped() {
        let t = corpus::linear_order();
        let f = Formula::And(vec![
            Formula::atom("leq", &["x", "x"]),
            Formula::eq("X", "x", "x"),
        ]);
        let o = instantiate_formula(&t, &f, &[("x".to_string(), 1)], idx(2), Some(CopyTag::Two))
            .unwrap();
        assert!(o.generators().all(|g| g.copy() == Some(CopyTag::Two)));
    }

    #[test]
    fn iso_expansion_of_total_orders() {
        let t = iso_expansion(&corpus::linear_order()).unwrap();
        assert_eq!(t.sorts.len(), 2);
        assert_eq!(t.relations.len(), 3);
        let copied = t
            .axioms
            .iter()
            .filter(|a| a.label.ends_with("[1]") || a.label.ends_with("[2]"));
        assert_eq!(copied.count(), 10);
        let labels: Vec<&str> = t.axioms[10..].iter().map(|a| a.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "alpha[X]functional",
                "alpha[X]injective",
                "alpha[X]total",
                "alpha[X]surjective",
                "alpha[leq]forward",
                "alpha[leq]backward"
            ]
        );
        assert!(validate_theory(&t).is_ok());
    }

    #[test]
    fn iso_expansion_without_sorts_identifies_propositions() {
        let t = iso_expansion(&corpus::propositional_demo()).unwrap();
        assert!(t.sorts.is_empty());
        assert!(!t
            .relations
            .iter()
            .any(|r| matches!(r.name, RelName::Iso { .. })));
        let fwd = t
            .axioms
            .iter()
            .find(|a| a.label == "alpha[p]forward")
            .unwrap();
        assert_eq!(
            fwd.premise,
            Formula::Atom {
                rel: RelName::Symbol {
                    base: "p".into(),
                    copy: Some(CopyTag::One)
                },
                args: vec![]
            }
        );
        assert_eq!(
            fwd.conclusion,
            Formula::Atom {
                rel: RelName::Symbol {
                    base: "p".into(),
                    copy: Some(CopyTag::Two)
                },
                args: vec![]
            }
        );
    }

    #[test]
    fn expansions_of_empty_theory_are_empty() {
        let e = Theory::default();
        let i = iso_expansion(&e).unwrap();
        let d = double_iso_expansion(&e).unwrap();
        for t in [i, d] {
            assert!(t.sorts.is_empty() && t.relations.is_empty() && t.axioms.is_empty());
        }
    }

    #[test]
    fn double_expansion_shapes() {
        let t = double_iso_expansion(&corpus::linear_order()).unwrap();
        assert_eq!(t.sorts.len(), 3);
        assert_eq!(t.relations.len(), 5);
        assert!(validate_theory(&t).is_ok());

        let bare = Theory {
            name: "bare".into(),
            sorts: vec!["X".into()],
            ..Theory::default()
        };
        let d = double_iso_expansion(&bare).unwrap();
        assert_eq!(d.sorts.len(), 3);
        assert_eq!(d.relations.len(), 2);
        assert_eq!(d.axioms.len(), 8);
    }

    #[test]
    fn arrow_presentation_is_two_copies_plus_alpha() {
        let t = corpus::linear_order();
        let objects = propositionalize(&t, idx(2)).unwrap();
        let arrows = propositionalize(&iso_expansion(&t).unwrap(), idx(2)).unwrap();
        assert_eq!(arrows.provenance(), Provenance::Arrows);
        assert_eq!(arrows.generators().len(), 20);
        let mut expected: Vec<Generator> = objects
            .generators()
            .iter()
            .flat_map(|g| [g.retag(Some(CopyTag::One)), g.retag(Some(CopyTag::Two))])
            .chain(
                idx(2)
                    .tuples(2)
                    .map(|v| Generator::iso(IsoTag::Alpha, "X", v[0], v[1])),
            )
            .collect();
        expected.sort();
        assert_eq!(arrows.generators(), expected.as_slice());
        let comp = propositionalize(&double_iso_expansion(&t).unwrap(), idx(2)).unwrap();
        assert_eq!(comp.provenance(), Provenance::CompositionDomain);
    }

    /// Drop every basic open that mentions an index `>= k`.
    fn restrict(o: &Open, k: usize) -> Open {
        Open::normalize(
            o.basics()
                .iter()
                .filter(|b| {
                    b.generators()
                        .iter()
                        .all(|g| g.indices().iter().all(|i| *i < k))
                })
                .cloned(),
        )
    }

    #[test]
    fn truncation_is_monotone() {
        for t in [
            corpus::linear_order(),
            iso_expansion(&corpus::linear_order()).unwrap(),
        ] {
            let small = propositionalize(&t, idx(2)).unwrap();
            let large = propositionalize(&t, idx(3)).unwrap();
            assert!(small.generators().iter().all(|g| large.contains(g)));
            let restricted: HashSet<Inequality> = large
                .inequalities()
                .iter()
                .map(|i| Inequality {
                    lhs: restrict(&i.lhs, 2),
                    rhs: restrict(&i.rhs, 2),
                })
                .collect();
            for ineq in small.inequalities() {
                assert!(
                    restricted.contains(ineq),
                    "{ineq} has no extension at k = 3"
                );
            }
        }
    }
}
