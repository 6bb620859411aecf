//! The syntactic localic groupoid at a finite index bound: presentations of
//! the object, arrow and composable-pair locales, the frame maps of the
//! structure maps, the left adjoint `s_!` of the source map and the closure
//! operator `s_! t*`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::open::{BasicOpen, Generator, Index, Open};
use crate::presentation::{FramePresentation, IndexSet};
use crate::propositionalize::{double_iso_expansion, iso_expansion, propositionalize};
use crate::theory::{CopyTag, IsoTag, RelName, Theory};

/// A frame homomorphism given on generators.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    domain: Arc<FramePresentation>,
    codomain: Arc<FramePresentation>,
    images: BTreeMap<Generator, Open>,
}

impl GeneratorMap {
    /// Build a map from its action on generators; every image must live in
    /// the codomain.
    pub fn new(
        domain: Arc<FramePresentation>,
        codomain: Arc<FramePresentation>,
        f: impl Fn(&Generator) -> Open,
    ) -> Result<Self> {
        let mut images = BTreeMap::new();
        for g in domain.generators() {
            let img = f(g);
            codomain.check_open(&img)?;
            images.insert(g.clone(), img);
        }
        Ok(GeneratorMap {
            domain,
            codomain,
            images,
        })
    }

    pub fn domain(&self) -> &FramePresentation {
        &self.domain
    }

    pub fn codomain(&self) -> &FramePresentation {
        &self.codomain
    }

    pub fn image(&self, g: &Generator) -> Result<&Open> {
        self.images
            .get(g)
            .ok_or_else(|| Error::MissingImage(g.clone()))
    }

    pub fn images(&self) -> impl Iterator<Item = (&Generator, &Open)> {
        self.images.iter()
    }

    pub fn apply_basic(&self, b: &BasicOpen) -> Result<Open> {
        let mut acc = Open::top();
        for g in b.generators() {
            self.domain.check_generator(g)?;
            acc = acc.meet(self.image(g)?);
        }
        Ok(acc)
    }

    /// Substitute images for generators, distributing meets over joins.
    pub fn apply(&self, o: &Open) -> Result<Open> {
        o.flat_map_basics(|b| self.apply_basic(b))
    }
}

pub fn apply_map(m: &GeneratorMap, o: &Open) -> Result<Open> {
    m.apply(o)
}

/// How the composition map sends `[alpha(n) = p]` into the composable-pair
/// presentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MStarVariant {
    /// The relational composite `join_m [beta(n) = m] & [gamma(m) = p]`.
    #[default]
    Composite,
    /// `join_m [beta(n) = p] & [gamma(m) = p]`, in which `m` only
    /// constrains `gamma`. Kept to demonstrate that it breaks composition.
    AsPrinted,
}

/// Assigns a sorted argument list to each index mentioned by a generator.
#[derive(Clone, Debug, Default)]
struct Positions {
    /// Base sort of each argument of each base relation.
    relations: HashMap<Arc<str>, Vec<Arc<str>>>,
}

impl Positions {
    fn new(t: &Theory) -> Self {
        let relations = t
            .relations
            .iter()
            .filter_map(|r| match &r.name {
                RelName::Symbol { base, .. } => Some((
                    Arc::from(base.as_str()),
                    r.signature
                        .iter()
                        .map(|s| Arc::from(s.base.as_str()))
                        .collect(),
                )),
                RelName::Iso { .. } => None,
            })
            .collect();
        Positions { relations }
    }

    /// `(index, base sort)` for every argument of a relation or relation
    /// generator.
    fn occurrences(&self, g: &Generator) -> Vec<(Index, Arc<str>)> {
        match g {
            Generator::Rel { rel, args, .. } => {
                let sig = &self.relations[rel];
                args.iter().copied().zip(sig.iter().cloned()).collect()
            }
            Generator::Per { sort, lhs, rhs, .. } => {
                vec![(*lhs, sort.clone()), (*rhs, sort.clone())]
            }
            Generator::Iso { sort, from, to, .. } => {
                vec![(*from, sort.clone()), (*to, sort.clone())]
            }
        }
    }
}

/// A basic arrow open split into the parts the left adjoint treats
/// differently, with its fresh variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerPlan {
    /// Domain-copy generators, untagged.
    pub domain: BasicOpen,
    /// Codomain-copy generators, untagged, still carrying their own indices.
    pub codomain: Vec<Generator>,
    /// `(sort, c, d)` for each `[alpha^sort(c) = d]`.
    pub isos: Vec<(Arc<str>, Index, Index)>,
    /// The distinct `(index, sort)` pairs among codomain arguments and iso
    /// values, in order of first occurrence.
    pub vars: Vec<(Index, Arc<str>)>,
}

impl LowerPlan {
    fn var(&self, n: Index, sort: &Arc<str>) -> usize {
        self.vars
            .iter()
            .position(|(m, s)| *m == n && s == sort)
            .expect("variable collected")
    }

    /// The codomain and iso parts with each variable replaced by its entry in
    /// `y`, excluding the domain part.
    pub fn instantiate(
        &self,
        positions_of: impl Fn(&Generator) -> Vec<Arc<str>>,
        y: &[Index],
    ) -> BasicOpen {
        let mut gens = Vec::new();
        for g in &self.codomain {
            let sorts = positions_of(g);
            gens.push(match g {
                Generator::Rel { rel, copy, args } => Generator::Rel {
                    rel: rel.clone(),
                    copy: *copy,
                    args: args
                        .iter()
                        .zip(&sorts)
                        .map(|(a, s)| y[self.var(*a, s)])
                        .collect(),
                },
                Generator::Per {
                    sort,
                    copy,
                    lhs,
                    rhs,
                } => Generator::Per {
                    sort: sort.clone(),
                    copy: *copy,
                    lhs: y[self.var(*lhs, sort)],
                    rhs: y[self.var(*rhs, sort)],
                },
                Generator::Iso { .. } => unreachable!("isos are kept apart"),
            });
        }
        for (sort, c, d) in &self.isos {
            gens.push(Generator::Per {
                sort: sort.clone(),
                copy: None,
                lhs: *c,
                rhs: y[self.var(*d, sort)],
            });
        }
        BasicOpen::new(gens)
    }
}

#[derive(Clone, Debug)]
pub struct GroupoidPresentation {
    theory: Theory,
    idx: IndexSet,
    positions: Positions,
    pub objects: Arc<FramePresentation>,
    pub arrows: Arc<FramePresentation>,
    pub comp: Arc<FramePresentation>,
    pub s_star: GeneratorMap,
    pub t_star: GeneratorMap,
    pub e_star: GeneratorMap,
    pub i_star: GeneratorMap,
    pub m_star: GeneratorMap,
    pub pi1_star: GeneratorMap,
    pub pi2_star: GeneratorMap,
}

fn retag_copies(g: &Generator, f: impl Fn(CopyTag) -> CopyTag) -> Generator {
    g.retag(g.copy().map(f))
}

pub fn build_groupoid(t: &Theory, idx: IndexSet) -> Result<GroupoidPresentation> {
    build_groupoid_with(t, idx, MStarVariant::Composite)
}

pub fn build_groupoid_with(
    t: &Theory,
    idx: IndexSet,
    variant: MStarVariant,
) -> Result<GroupoidPresentation> {
    let objects = Arc::new(propositionalize(t, idx)?);
    let arrows = Arc::new(propositionalize(&iso_expansion(t)?, idx)?);
    let comp = Arc::new(propositionalize(&double_iso_expansion(t)?, idx)?);
    let one = |g: &Generator| Open::generator(g.clone());

    let s_star = GeneratorMap::new(objects.clone(), arrows.clone(), |g| {
        one(&g.retag(Some(CopyTag::One)))
    })?;
    let t_star = GeneratorMap::new(objects.clone(), arrows.clone(), |g| {
        one(&g.retag(Some(CopyTag::Two)))
    })?;
    let e_star = GeneratorMap::new(arrows.clone(), objects.clone(), |g| match g {
        Generator::Iso { sort, from, to, .. } => one(&Generator::Per {
            sort: sort.clone(),
            copy: None,
            lhs: *from,
            rhs: *to,
        }),
        _ => one(&g.retag(None)),
    })?;
    let i_star = GeneratorMap::new(arrows.clone(), arrows.clone(), |g| match g {
        Generator::Iso {
            tag,
            sort,
            from,
            to,
        } => one(&Generator::Iso {
            tag: *tag,
            sort: sort.clone(),
            from: *to,
            to: *from,
        }),
        _ => one(&retag_copies(g, |c| match c {
            CopyTag::One => CopyTag::Two,
            _ => CopyTag::One,
        })),
    })?;
    let m_star = GeneratorMap::new(arrows.clone(), comp.clone(), |g| match g {
        Generator::Iso { sort, from, to, .. } => Open::normalize(idx.iter().map(|m| {
            let (beta_to, gamma_from) = match variant {
                MStarVariant::Composite => (m, m),
                MStarVariant::AsPrinted => (*to, m),
            };
            BasicOpen::new([
                Generator::iso(IsoTag::Beta, sort, *from, beta_to),
                Generator::iso(IsoTag::Gamma, sort, gamma_from, *to),
            ])
        })),
        _ => one(&retag_copies(g, |c| match c {
            CopyTag::One => CopyTag::One,
            _ => CopyTag::Three,
        })),
    })?;
    let projection = |tag: IsoTag, shift: fn(CopyTag) -> CopyTag| {
        GeneratorMap::new(arrows.clone(), comp.clone(), move |g| match g {
            Generator::Iso { sort, from, to, .. } => one(&Generator::iso(tag, sort, *from, *to)),
            _ => one(&retag_copies(g, shift)),
        })
    };
    let pi1_star = projection(IsoTag::Beta, |c| c)?;
    let pi2_star = projection(IsoTag::Gamma, |c| match c {
        CopyTag::One => CopyTag::Two,
        _ => CopyTag::Three,
    })?;

    Ok(GroupoidPresentation {
        theory: t.clone(),
        idx,
        positions: Positions::new(t),
        objects,
        arrows,
        comp,
        s_star,
        t_star,
        e_star,
        i_star,
        m_star,
        pi1_star,
        pi2_star,
    })
}

impl GroupoidPresentation {
    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn index_set(&self) -> IndexSet {
        self.idx
    }

    /// Split a basic arrow open into domain, codomain and iso parts.
    pub fn lower_plan(&self, b: &BasicOpen) -> Result<LowerPlan> {
        let mut domain = Vec::new();
        let mut codomain = Vec::new();
        let mut isos = Vec::new();
        let mut vars: Vec<(Index, Arc<str>)> = Vec::new();
        let mut note = |v: (Index, Arc<str>)| {
            if !vars.contains(&v) {
                vars.push(v);
            }
        };
        for g in b.generators() {
            self.arrows.check_generator(g)?;
            match (g, g.copy()) {
                (Generator::Iso { .. }, _) => {}
                (_, Some(CopyTag::One)) => domain.push(g.retag(None)),
                (_, Some(CopyTag::Two)) => {
                    for v in self.positions.occurrences(g) {
                        note(v);
                    }
                    codomain.push(g.retag(None));
                }
                _ => return Err(Error::NotArrowGenerator(g.clone())),
            }
        }
        for g in b.generators() {
            if let Generator::Iso { sort, from, to, .. } = g {
                note((*to, sort.clone()));
                isos.push((sort.clone(), *from, *to));
            }
        }
        Ok(LowerPlan {
            domain: BasicOpen::new(domain),
            codomain,
            isos,
            vars,
        })
    }

    fn sorts_of(&self, g: &Generator) -> Vec<Arc<str>> {
        self.positions
            .occurrences(g)
            .into_iter()
            .map(|(_, s)| s)
            .collect()
    }

    /// Substitute `y` into the codomain and iso parts of a plan.
    pub fn instantiate_plan(&self, plan: &LowerPlan, y: &[Index]) -> BasicOpen {
        plan.instantiate(|g| self.sorts_of(g), y)
    }

    /// The left adjoint `s_!` on a basic arrow open.
    ///
    /// Domain-copy generators are kept, untagged. Every distinct
    /// `(index, sort)` among codomain arguments and iso values becomes a
    /// fresh variable joined over the index set, and `[alpha(c) = d]`
    /// becomes `[c ~ y_d]`.
    pub fn source_lower(&self, b: &BasicOpen) -> Result<Open> {
        let plan = self.lower_plan(b)?;
        Ok(Open::normalize(self.idx.tuples(plan.vars.len()).map(|y| {
            plan.domain.meet(&self.instantiate_plan(&plan, &y))
        })))
    }

    /// `s_!` extended to all arrow opens by preserving joins.
    pub fn source_lower_open(&self, o: &Open) -> Result<Open> {
        o.flat_map_basics(|b| self.source_lower(b))
    }

    /// `t_! = s_! i*`.
    pub fn target_lower(&self, b: &BasicOpen) -> Result<Open> {
        self.source_lower_open(&self.i_star.apply_basic(b)?)
    }

    pub fn target_lower_open(&self, o: &Open) -> Result<Open> {
        o.flat_map_basics(|b| self.target_lower(b))
    }

    /// The closure operator `s_! t*` on object opens.
    pub fn closure(&self, u: &Open) -> Result<Open> {
        self.objects.check_open(u)?;
        self.source_lower_open(&self.t_star.apply(u)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::theory::IsoTag::Alpha;

    fn groupoid(k: usize) -> GroupoidPresentation {
        build_groupoid(&corpus::linear_order(), IndexSet::new(k).unwrap()).unwrap()
    }

    fn leq(copy: Option<CopyTag>, a: Index, b: Index) -> Generator {
        Generator::rel("leq", copy, &[a, b])
    }

    fn per(a: Index, b: Index) -> Generator {
        Generator::per("X", None, a, b)
    }

    fn alpha(a: Index, b: Index) -> Generator {
        Generator::iso(Alpha, "X", a, b)
    }

    fn join_over(k: usize, vars: usize, f: impl Fn(&[Index]) -> Vec<Generator>) -> Open {
        Open::normalize(
            IndexSet::new(k)
                .unwrap()
                .tuples(vars)
                .map(|y| BasicOpen::new(f(&y))),
        )
    }

    #[test]
    fn worked_examples_of_the_left_adjoint() {
        let k = 5;
        let g = groupoid(k);
        let two = Some(CopyTag::Two);
        let lower = |gens: Vec<Generator>| g.source_lower(&BasicOpen::new(gens)).unwrap();

        assert_eq!(
            lower(vec![leq(Some(CopyTag::One), 1, 2)]),
            Open::generator(leq(None, 1, 2))
        );
        assert_eq!(
            lower(vec![leq(two, 1, 2)]),
            join_over(k, 2, |y| vec![leq(None, y[0], y[1])])
        );
        assert_eq!(
            lower(vec![alpha(1, 2)]),
            join_over(k, 1, |y| vec![per(1, y[0])])
        );
        assert_eq!(
            lower(vec![leq(two, 1, 2), alpha(1, 4)]),
            join_over(k, 3, |y| vec![leq(None, y[0], y[1]), per(1, y[2])])
        );
        assert_eq!(
            lower(vec![leq(two, 1, 2), alpha(1, 1)]),
            join_over(k, 2, |y| vec![leq(None, y[0], y[1]), per(1, y[0])])
        );
    }

    #[test]
    fn target_lower_examples() {
        let g = groupoid(3);
        let b = |x: Generator| BasicOpen::singleton(x);
        assert_eq!(
            g.target_lower(&b(leq(Some(CopyTag::Two), 1, 2))).unwrap(),
            Open::generator(leq(None, 1, 2))
        );
        assert_eq!(
            g.target_lower(&b(leq(Some(CopyTag::One), 1, 2))).unwrap(),
            join_over(3, 2, |y| vec![leq(None, y[0], y[1])])
        );
        assert_eq!(
            g.target_lower(&b(alpha(1, 2))).unwrap(),
            join_over(3, 1, |y| vec![per(2, y[0])])
        );
    }

    #[test]
    fn closure_examples() {
        let g = groupoid(3);
        assert_eq!(
            g.closure(&Open::generator(leq(None, 0, 1))).unwrap(),
            join_over(3, 2, |y| vec![leq(None, y[0], y[1])])
        );
        assert!(g.closure(&Open::top()).unwrap().is_top());
        assert!(g.closure(&Open::bottom()).unwrap().is_bottom());
        assert_eq!(
            g.closure(&Open::generator(per(0, 0))).unwrap(),
            join_over(3, 1, |y| vec![per(y[0], y[0])])
        );
    }

    #[test]
    fn structure_maps_on_generators() {
        let g = groupoid(2);
        assert_eq!(g.arrows.generators().len(), 20);
        let s = g.s_star.apply(&Open::generator(leq(None, 0, 1))).unwrap();
        assert_eq!(s, Open::generator(leq(Some(CopyTag::One), 0, 1)));
        assert_eq!(
            g.e_star.apply(&Open::generator(alpha(0, 1))).unwrap(),
            Open::generator(per(0, 1))
        );
        let m = g.m_star.apply(&Open::generator(alpha(0, 1))).unwrap();
        let beta = |a, b| Generator::iso(IsoTag::Beta, "X", a, b);
        let gamma = |a, b| Generator::iso(IsoTag::Gamma, "X", a, b);
        assert_eq!(
            m,
            Open::normalize([
                BasicOpen::new([beta(0, 0), gamma(0, 1)]),
                BasicOpen::new([beta(0, 1), gamma(1, 1)]),
            ])
        );
    }

    #[test]
    fn section_and_involution_laws_hold_on_generators() {
        let g = groupoid(2);
        for x in g.objects.generators() {
            let u = Open::generator(x.clone());
            assert_eq!(g.e_star.apply(&g.s_star.apply(&u).unwrap()).unwrap(), u);
            assert_eq!(g.e_star.apply(&g.t_star.apply(&u).unwrap()).unwrap(), u);
            assert_eq!(
                g.source_lower_open(&g.s_star.apply(&u).unwrap()).unwrap(),
                u
            );
        }
        for x in g.arrows.generators() {
            let v = Open::generator(x.clone());
            assert_eq!(g.i_star.apply(&g.i_star.apply(&v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn empty_theory_has_empty_maps() {
        let g = build_groupoid(&Theory::default(), IndexSet::new(2).unwrap()).unwrap();
        for m in [&g.s_star, &g.t_star, &g.e_star, &g.i_star, &g.m_star] {
            assert_eq!(m.images().count(), 0);
        }
    }

    #[test]
    fn foreign_input_is_rejected() {
        let g = groupoid(2);
        let stray = BasicOpen::singleton(Generator::rel("leq", None, &[0, 1]));
        assert!(g.source_lower(&stray).is_err());
        assert!(g
            .closure(&Open::generator(leq(Some(CopyTag::One), 0, 0)))
            .is_err());
    }
}
