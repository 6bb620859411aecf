//! Frame presentations: a finite generator set plus inequalities between opens.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::open::{BasicOpen, Generator, Index, Open};

/// The truncated index set `{0, .., k-1}` standing in for the natural numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    k: usize,
}

impl IndexSet {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyIndexSet);
        }
        Ok(IndexSet { k })
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn iter(self) -> std::ops::Range<Index> {
        0..self.k
    }

    /// All tuples in `idx^len`, lexicographically.
    pub fn tuples(self, len: usize) -> Tuples {
        Tuples {
            k: self.k,
            current: if len == 0 || self.k > 0 {
                Some(vec![0; len])
            } else {
                None
            },
        }
    }
}

/// Lexicographic odometer over `{0..k-1}^len`.
pub struct Tuples {
    k: usize,
    current: Option<Vec<Index>>,
}

impl Iterator for Tuples {
    type Item = Vec<Index>;

    fn next(&mut self) -> Option<Vec<Index>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.k {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Objects,
    Arrows,
    CompositionDomain,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Objects => "objects",
            Provenance::Arrows => "arrows",
            Provenance::CompositionDomain => "composition-domain",
        })
    }
}

/// `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub lhs: Open,
    pub rhs: Open,
}

impl Inequality {
    /// Holds for purely syntactic reasons: every meet on the left contains
    /// one on the right.
    pub fn is_tautology(&self) -> bool {
        self.lhs
            .basics()
            .iter()
            .all(|l| self.rhs.basics().iter().any(|r| r.is_subset(l)))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramePresentation {
    provenance: Provenance,
    theory: String,
    k: usize,
    generators: Vec<Generator>,
    inequalities: Vec<Inequality>,
}

impl FramePresentation {
    /// `generators` must be sorted and duplicate-free.
    pub(crate) fn from_parts(
        provenance: Provenance,
        theory: String,
        k: usize,
        generators: Vec<Generator>,
        inequalities: Vec<Inequality>,
    ) -> Self {
        debug_assert!(generators.windows(2).all(|w| w[0] < w[1]));
        FramePresentation {
            provenance,
            theory,
            k,
            generators,
            inequalities,
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn theory_name(&self) -> &str {
        &self.theory
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index_set(&self) -> IndexSet {
        IndexSet { k: self.k }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn position(&self, g: &Generator) -> Option<usize> {
        self.generators.binary_search(g).ok()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.position(g).is_some()
    }

    pub fn check_generator(&self, g: &Generator) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ForeignGenerator {
                generator: g.clone(),
                presentation: self.provenance.to_string(),
            })
        }
    }

    pub fn check_open(&self, o: &Open) -> Result<()> {
        o.generators().try_for_each(|g| self.check_generator(g))
    }

    /// Normalize a raw join of meets whose generators must all belong here.
    pub fn normalize(&self, raw: Vec<Vec<Generator>>) -> Result<Open> {
        for g in raw.iter().flatten() {
            self.check_generator(g)?;
        }
        Ok(Open::normalize(raw.into_iter().map(BasicOpen::new)))
    }

    pub fn meet(&self, a: &Open, b: &Open) -> Result<Open> {
        self.check_open(a)?;
        self.check_open(b)?;
        Ok(a.meet(b))
    }

    pub fn join(&self, a: &Open, b: &Open) -> Result<Open> {
        self.check_open(a)?;
        self.check_open(b)?;
        Ok(a.join(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_are_lexicographic() {
        let idx = IndexSet::new(2).unwrap();
        let all: Vec<_> = idx.tuples(2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(idx.tuples(0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(IndexSet::new(3).unwrap().tuples(3).count(), 27);
    }

    #[test]
    fn zero_index_set_is_rejected() {
        assert!(matches!(IndexSet::new(0), Err(Error::EmptyIndexSet)));
    }

    #[test]
    fn foreign_generators_are_rejected() {
        let p = FramePresentation::from_parts(
            Provenance::Objects,
            "t".into(),
            1,
            vec![Generator::rel("p", None, &[])],
            vec![],
        );
        let foreign = Generator::rel("q", None, &[]);
        assert!(p
            .normalize(vec![vec![Generator::rel("p", None, &[])]])
            .is_ok());
        assert!(matches!(
            p.normalize(vec![vec![foreign.clone()]]),
            Err(Error::ForeignGenerator { .. })
        ));
        assert!(p.meet(&Open::top(), &Open::generator(foreign)).is_err());
    }
}
