//! The groupoid of enumerated models and isomorphisms, with satisfaction of
//! arrow opens and composable-pair opens.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::open::{Generator, Open};
use crate::presentation::IndexSet;
use crate::theory::{CopyTag, IsoTag, Theory};

use super::iso::{compose_isos, enumerate_isos, identity_iso, invert_iso, ModelIso};
use super::model::{IndexedModel, ModelSpace, SizeGuard};

#[derive(Clone, Debug)]
pub struct PointGroupoid {
    pub space: ModelSpace,
    pub models: Vec<IndexedModel>,
    pub isos: Vec<ModelIso>,
    index: HashMap<ModelIso, usize>,
    /// Identity iso of each model.
    pub identity: Vec<Option<usize>>,
    /// Inverse of each iso.
    pub inverse: Vec<Option<usize>>,
    /// Isos leaving each model.
    pub outgoing: Vec<Vec<usize>>,
}

impl PointGroupoid {
    pub fn build(t: &Theory, idx: IndexSet, guard: SizeGuard) -> Result<Self> {
        let space = ModelSpace::new(t, idx)?;
        let models = space.enumerate(guard)?;
        Ok(Self::from_models(space, models))
    }

    pub fn from_models(space: ModelSpace, models: Vec<IndexedModel>) -> Self {
        let mut isos = Vec::new();
        for a in 0..models.len() {
            for b in 0..models.len() {
                isos.extend(enumerate_isos(&space, &models, a, b));
            }
        }
        isos.sort();
        let index: HashMap<ModelIso, usize> = isos
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let identity = (0..models.len())
            .map(|m| index.get(&identity_iso(&models, m)).copied())
            .collect();
        let inverse = isos
            .iter()
            .map(|f| index.get(&invert_iso(f)).copied())
            .collect();
        let mut outgoing = vec![Vec::new(); models.len()];
        for (i, f) in isos.iter().enumerate() {
            outgoing[f.source].push(i);
        }
        PointGroupoid {
            space,
            models,
            isos,
            index,
            identity,
            inverse,
            outgoing,
        }
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn position(&self, f: &ModelIso) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// The composite of isos `f` then `g`, if composable and enumerated.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        compose_isos(&self.isos[f], &self.isos[g])
            .ok()
            .and_then(|h| self.position(&h))
    }

    /// All `(f, g)` with the target of `f` the source of `g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.isos.len()).flat_map(move |f| {
            self.outgoing[self.isos[f].target]
                .iter()
                .map(move |&g| (f, g))
        })
    }

    pub fn object_holds(&self, m: usize, g: &Generator) -> bool {
        self.space.holds(&self.models[m], g)
    }

    pub fn object_satisfies(&self, m: usize, o: &Open) -> bool {
        self.space.satisfies(&self.models[m], o)
    }

    fn iso_holds(&self, f: &ModelIso, g: &Generator) -> bool {
        let Generator::Iso { sort, from, to, .. } = g else {
            unreachable!()
        };
        self.space
            .sort_position(sort)
            .is_some_and(|s| f.relates(s, *from, *to))
    }

    /// Copy 1 is read in the source, copy 2 in the target and `alpha` in
    /// the iso itself.
    pub fn arrow_holds(&self, f: usize, g: &Generator) -> bool {
        let iso = &self.isos[f];
        match (g, g.copy()) {
            (
                Generator::Iso {
                    tag: IsoTag::Alpha, ..
                },
                _,
            ) => self.iso_holds(iso, g),
            (Generator::Iso { .. }, _) => false,
            (_, Some(CopyTag::One)) => self.space.holds_untagged(&self.models[iso.source], g),
            (_, Some(CopyTag::Two)) => self.space.holds_untagged(&self.models[iso.target], g),
            _ => false,
        }
    }

    pub fn arrow_satisfies(&self, f: usize, o: &Open) -> bool {
        o.basics()
            .iter()
            .any(|b| b.generators().iter().all(|g| self.arrow_holds(f, g)))
    }

    /// Copies 1, 2, 3 are read in the three models of `f` then `g`; `beta`
    /// in `f` and `gamma` in `g`.
    pub fn pair_holds(&self, f: usize, g: usize, gen: &Generator) -> bool {
        let (a, b) = (&self.isos[f], &self.isos[g]);
        match (gen, gen.copy()) {
            (
                Generator::Iso {
                    tag: IsoTag::Beta, ..
                },
                _,
            ) => self.iso_holds(a, gen),
            (
                Generator::Iso {
                    tag: IsoTag::Gamma, ..
                },
                _,
            ) => self.iso_holds(b, gen),
            (Generator::Iso { .. }, _) => false,
            (_, Some(CopyTag::One)) => self.space.holds_untagged(&self.models[a.source], gen),
            (_, Some(CopyTag::Two)) => self.space.holds_untagged(&self.models[a.target], gen),
            (_, Some(CopyTag::Three)) => self.space.holds_untagged(&self.models[b.target], gen),
            _ => false,
        }
    }

    pub fn pair_satisfies(&self, f: usize, g: usize, o: &Open) -> bool {
        o.basics()
            .iter()
            .any(|b| b.generators().iter().all(|x| self.pair_holds(f, g, x)))
    }

    pub fn object_points(&self, o: &Open) -> BTreeSet<usize> {
        (0..self.models.len())
            .filter(|m| self.object_satisfies(*m, o))
            .collect()
    }

    pub fn arrow_points(&self, o: &Open) -> BTreeSet<usize> {
        (0..self.isos.len())
            .filter(|f| self.arrow_satisfies(*f, o))
            .collect()
    }

    /// Sources of the isos satisfying `o`.
    pub fn image_under_source(&self, o: &Open) -> BTreeSet<usize> {
        self.arrow_points(o)
            .into_iter()
            .map(|f| self.isos[f].source)
            .collect()
    }

    /// Everything reachable by an iso from a member.
    pub fn orbit_saturate(&self, models: &BTreeSet<usize>) -> BTreeSet<usize> {
        models
            .iter()
            .flat_map(|m| self.outgoing[*m].iter().map(|f| self.isos[*f].target))
            .chain(models.iter().copied())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn orbit_of_a_two_element_chain() {
        let pg = PointGroupoid::build(
            &corpus::linear_order(),
            IndexSet::new(2).unwrap(),
            SizeGuard::unlimited(),
        )
        .unwrap();
        assert_eq!(pg.models.len(), 5);
        let chain = pg
            .models
            .iter()
            .position(|m| m.pers[0].classes().len() == 2 && m.rels[0][1])
            .unwrap();
        let orbit = pg.orbit_saturate(&BTreeSet::from([chain]));
        assert_eq!(orbit.len(), 2);
        assert!(orbit
            .iter()
            .all(|m| pg.models[*m].pers[0].classes().len() == 2));
        assert_eq!(pg.orbit_saturate(&orbit), orbit);
        assert!(pg.orbit_saturate(&BTreeSet::new()).is_empty());
    }

    #[test]
    fn image_of_top_and_bottom() {
        let pg = PointGroupoid::build(
            &corpus::linear_order(),
            IndexSet::new(2).unwrap(),
            SizeGuard::unlimited(),
        )
        .unwrap();
        assert_eq!(pg.image_under_source(&Open::top()).len(), pg.models.len());
        assert!(pg.image_under_source(&Open::bottom()).is_empty());
        let a00 = Open::generator(Generator::iso(IsoTag::Alpha, "X", 0, 0));
        let image = pg.image_under_source(&a00);
        let expected: BTreeSet<usize> = (0..pg.models.len())
            .filter(|m| pg.models[*m].pers[0].in_domain(0))
            .collect();
        assert_eq!(image, expected);
        assert_eq!(image.len(), 4);
    }
}
