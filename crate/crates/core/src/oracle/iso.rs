//! Isomorphisms between indexed models, as per-sort relations between
//! index sets that induce bijections of classes.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::open::Index;

use super::model::{flat, IndexedModel, ModelSpace};

/// An isomorphism between the models at positions `source` and `target` of
/// a model list. `alpha[s]` is a row-major `k x k` relation for sort `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelIso {
    pub source: usize,
    pub target: usize,
    pub alpha: Vec<Vec<bool>>,
}

impl ModelIso {
    pub fn relates(&self, sort: usize, n: Index, m: Index) -> bool {
        let k = (self.alpha[sort].len() as f64).sqrt() as usize;
        n < k && m < k && self.alpha[sort][n * k + m]
    }
}

/// All isomorphisms from `models[a]` to `models[b]`. The theory must be
/// untagged.
pub fn enumerate_isos(
    space: &ModelSpace,
    models: &[IndexedModel],
    a: usize,
    b: usize,
) -> Vec<ModelIso> {
    let (ma, mb) = (&models[a], &models[b]);
    let k = space.k();
    let classes_a: Vec<Vec<Vec<Index>>> = ma.pers.iter().map(|p| p.classes()).collect();
    let classes_b: Vec<Vec<Vec<Index>>> = mb.pers.iter().map(|p| p.classes()).collect();
    if classes_a
        .iter()
        .zip(&classes_b)
        .any(|(x, y)| x.len() != y.len())
    {
        return Vec::new();
    }
    let perms: Vec<Vec<Vec<usize>>> = classes_a
        .iter()
        .map(|c| (0..c.len()).permutations(c.len()).collect())
        .collect();
    let choices: Vec<Vec<&Vec<usize>>> = if perms.is_empty() {
        vec![Vec::new()]
    } else {
        perms
            .iter()
            .map(|p| p.iter())
            .multi_cartesian_product()
            .collect()
    };
    let mut out = Vec::new();
    for sigma in choices {
        let preserves = space.signatures().iter().enumerate().all(|(r, sig)| {
            let class_tuples: Vec<Vec<usize>> = if sig.is_empty() {
                vec![Vec::new()]
            } else {
                sig.iter()
                    .map(|s| 0..classes_a[*s].len())
                    .multi_cartesian_product()
                    .collect()
            };
            class_tuples.iter().all(|ct| {
                let rep_a: Vec<Index> = ct
                    .iter()
                    .zip(sig)
                    .map(|(c, s)| classes_a[*s][*c][0])
                    .collect();
                let rep_b: Vec<Index> = ct
                    .iter()
                    .zip(sig)
                    .map(|(c, s)| classes_b[*s][sigma[*s][*c]][0])
                    .collect();
                ma.rels[r][flat(k, &rep_a)] == mb.rels[r][flat(k, &rep_b)]
            })
        });
        if !preserves {
            continue;
        }
        let alpha = (0..ma.pers.len())
            .map(|s| {
                let mut rel = vec![false; k * k];
                for (c, members) in classes_a[s].iter().enumerate() {
                    for &n in members {
                        for &m in &classes_b[s][sigma[s][c]] {
                            rel[n * k + m] = true;
                        }
                    }
                }
                rel
            })
            .collect();
        out.push(ModelIso {
            source: a,
            target: b,
            alpha,
        });
    }
    out.sort();
    out
}

/// The identity on `models[m]`: each sort's relation is the model's own.
pub fn identity_iso(models: &[IndexedModel], m: usize) -> ModelIso {
    ModelIso {
        source: m,
        target: m,
        alpha: models[m].pers.iter().map(|p| p.matrix().to_vec()).collect(),
    }
}

/// The transpose.
pub fn invert_iso(f: &ModelIso) -> ModelIso {
    let alpha = f
        .alpha
        .iter()
        .map(|rel| {
            let k = (rel.len() as f64).sqrt() as usize;
            (0..k * k).map(|i| rel[(i % k) * k + i / k]).collect()
        })
        .collect();
    ModelIso {
        source: f.target,
        target: f.source,
        alpha,
    }
}

/// The relational composite, first `f` then `g`.
pub fn compose_isos(f: &ModelIso, g: &ModelIso) -> Result<ModelIso> {
    if f.target != g.source {
        return Err(Error::NotComposable(f.target, g.source));
    }
    let alpha = f
        .alpha
        .iter()
        .zip(&g.alpha)
        .map(|(a, b)| {
            let k = (a.len() as f64).sqrt() as usize;
            (0..k * k)
                .map(|i| {
                    let (n, p) = (i / k, i % k);
                    (0..k).any(|m| a[n * k + m] && b[m * k + p])
                })
                .collect()
        })
        .collect();
    Ok(ModelIso {
        source: f.source,
        target: g.target,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::oracle::model::SizeGuard;
    use crate::presentation::IndexSet;

    fn setup(k: usize) -> (ModelSpace, Vec<IndexedModel>) {
        let space = ModelSpace::new(&corpus::linear_order(), IndexSet::new(k).unwrap()).unwrap();
        let models = space.enumerate(SizeGuard::unlimited()).unwrap();
        (space, models)
    }

    fn find(models: &[IndexedModel], f: impl Fn(&IndexedModel) -> bool) -> usize {
        models.iter().position(f).unwrap()
    }

    #[test]
    fn iso_examples() {
        let (space, models) = setup(2);
        let chain = find(&models, |m| m.pers[0].classes().len() == 2 && m.rels[0][1]);
        let single = find(&models, |m| m.pers[0].classes() == vec![vec![0, 1]]);
        let point = find(&models, |m| m.pers[0].classes().len() == 1);
        assert_eq!(enumerate_isos(&space, &models, chain, chain).len(), 1);
        assert_eq!(enumerate_isos(&space, &models, chain, point).len(), 0);
        let only = enumerate_isos(&space, &models, single, single);
        assert_eq!(only.len(), 1);
        assert!(only[0].alpha[0].iter().all(|b| *b));
    }

    #[test]
    fn algebra_of_isos() {
        let (space, models) = setup(3);
        let mut total = 0;
        for a in 0..models.len() {
            let id = identity_iso(&models, a);
            for b in 0..models.len() {
                for f in enumerate_isos(&space, &models, a, b) {
                    total += 1;
                    assert_eq!(compose_isos(&id, &f).unwrap(), f);
                    assert_eq!(invert_iso(&invert_iso(&f)), f);
                    assert_eq!(compose_isos(&f, &invert_iso(&f)).unwrap(), id);
                }
            }
        }
        // Orbits by number of classes have 7, 12 and 6 members, and isos
        // between members of one orbit are unique: 49 + 144 + 36.
        assert_eq!(total, 229);
        let f = identity_iso(&models, 0);
        let g = identity_iso(&models, 1);
        assert!(matches!(
            compose_isos(&f, &g),
            Err(Error::NotComposable(0, 1))
        ));
    }
}
