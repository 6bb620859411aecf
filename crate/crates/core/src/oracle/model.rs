//! Indexed models: a partial equivalence relation on the index set for every
//! sort and a saturated interpretation for every relation, checked against
//! the axioms by ordinary Tarskian satisfaction.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::open::{Generator, Index, Open};
use crate::presentation::IndexSet;
use crate::theory::{validate_theory, CopyTag, Formula, IsoTag, RelName, Theory};

/// Default bound on the number of candidate structures.
pub const DEFAULT_MAX_STRUCTURES: u64 = 10_000_000;

/// Refuses enumerations whose candidate count exceeds `limit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGuard {
    pub limit: Option<u64>,
}

impl SizeGuard {
    /// The default bound, overridden by `GFORGE_MAX_STRUCTURES` when set.
    pub fn from_env() -> Self {
        let limit = std::env::var("GFORGE_MAX_STRUCTURES")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_STRUCTURES);
        SizeGuard { limit: Some(limit) }
    }

    pub fn unlimited() -> Self {
        SizeGuard { limit: None }
    }

    pub fn check(self, estimate: f64) -> Result<()> {
        match self.limit {
            Some(limit) if estimate > limit as f64 => Err(Error::SizeGuard { estimate, limit }),
            _ => Ok(()),
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard::from_env()
    }
}

/// A partial equivalence relation on `{0..k-1}` as a row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Per {
    k: usize,
    matrix: Vec<bool>,
}

impl Per {
    /// From a class label per index (`None` outside the domain).
    pub fn from_labels(labels: &[Option<usize>]) -> Self {
        let k = labels.len();
        let mut matrix = vec![false; k * k];
        for (n, a) in labels.iter().enumerate() {
            for (m, b) in labels.iter().enumerate() {
                matrix[n * k + m] = a.is_some() && a == b;
            }
        }
        Per { k, matrix }
    }

    pub fn related(&self, n: Index, m: Index) -> bool {
        n < self.k && m < self.k && self.matrix[n * self.k + m]
    }

    pub fn in_domain(&self, n: Index) -> bool {
        self.related(n, n)
    }

    /// Equivalence classes, each sorted, ordered by least element.
    pub fn classes(&self) -> Vec<Vec<Index>> {
        let mut out: Vec<Vec<Index>> = Vec::new();
        for n in 0..self.k {
            if !self.in_domain(n) {
                continue;
            }
            match out.iter_mut().find(|c| self.related(c[0], n)) {
                Some(c) => c.push(n),
                None => out.push(vec![n]),
            }
        }
        out
    }

    /// Position of the class of `n` in [`Per::classes`].
    pub fn class_of(&self, n: Index) -> Option<usize> {
        self.classes().iter().position(|c| c.contains(&n))
    }

    pub fn matrix(&self) -> &[bool] {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Every partial equivalence relation on `{0..k-1}`, as canonical labelings
/// (each index is outside the domain, in an earlier class, or opens a new
/// one).
pub fn all_pers(k: usize) -> Vec<Per> {
    fn go(k: usize, labels: &mut Vec<Option<usize>>, next: usize, out: &mut Vec<Per>) {
        if labels.len() == k {
            out.push(Per::from_labels(labels));
            return;
        }
        for choice in std::iter::once(None).chain((0..=next).map(Some)) {
            labels.push(choice);
            go(
                k,
                labels,
                if choice == Some(next) { next + 1 } else { next },
                out,
            );
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), 0, &mut out);
    out.sort();
    out
}

/// A structure for a theory at index bound `k`. Relations are bit vectors
/// over `idx^arity` in lexicographic tuple order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedModel {
    pub pers: Vec<Per>,
    pub rels: Vec<Vec<bool>>,
}

pub(crate) fn flat(k: usize, args: &[Index]) -> usize {
    args.iter().fold(0, |acc, a| acc * k + a)
}

/// Formula with variables resolved to slots and symbols to positions.
#[derive(Clone, Debug)]
enum Compiled {
    Top,
    Or(Vec<Compiled>),
    And(Vec<Compiled>),
    Atom {
        rel: usize,
        args: Vec<usize>,
    },
    Eq {
        sort: usize,
        lhs: usize,
        rhs: usize,
    },
    Exists {
        slot: usize,
        sort: usize,
        body: Box<Compiled>,
    },
}

#[derive(Clone, Debug)]
struct CompiledAxiom {
    context: Vec<usize>,
    slots: usize,
    premise: Compiled,
    conclusion: Compiled,
    /// Largest relation position mentioned, if any.
    last_relation: Option<usize>,
}

/// Lookup key for the symbol behind a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SymbolKey {
    Sort(Arc<str>, Option<CopyTag>),
    Rel(Arc<str>, Option<CopyTag>),
    Iso(IsoTag, Arc<str>),
}

/// The structures of one theory at one index bound.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    theory: Theory,
    k: usize,
    symbols: HashMap<SymbolKey, usize>,
    /// Sort position of every argument of every relation.
    signatures: Vec<Vec<usize>>,
    axioms: Vec<CompiledAxiom>,
}

impl ModelSpace {
    pub fn new(theory: &Theory, idx: IndexSet) -> Result<Self> {
        let report = validate_theory(theory);
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let mut symbols = HashMap::new();
        for (i, s) in theory.sorts.iter().enumerate() {
            symbols.insert(SymbolKey::Sort(s.base.as_str().into(), s.copy), i);
        }
        for (i, r) in theory.relations.iter().enumerate() {
            let key = match &r.name {
                RelName::Symbol { base, copy } => SymbolKey::Rel(base.as_str().into(), *copy),
                RelName::Iso { tag, sort } => SymbolKey::Iso(*tag, sort.as_str().into()),
            };
            symbols.insert(key, i);
        }
        let sort_pos =
            |s: &crate::theory::SortName| theory.sorts.iter().position(|t| t == s).unwrap();
        let signatures = theory
            .relations
            .iter()
            .map(|r| r.signature.iter().map(sort_pos).collect())
            .collect();
        let mut space = ModelSpace {
            theory: theory.clone(),
            k: idx.k(),
            symbols,
            signatures,
            axioms: Vec::new(),
        };
        space.axioms = theory
            .axioms
            .iter()
            .map(|ax| {
                let mut scope: Vec<String> = Vec::new();
                let mut context = Vec::new();
                for (v, s) in &ax.context {
                    scope.push(v.clone());
                    context.push(sort_pos(s));
                }
                let mut slots = scope.len();
                let mut last = None;
                let premise = space.compile(&ax.premise, &mut scope, &mut slots, &mut last);
                let conclusion = space.compile(&ax.conclusion, &mut scope, &mut slots, &mut last);
                CompiledAxiom {
                    context,
                    slots,
                    premise,
                    conclusion,
                    last_relation: last,
                }
            })
            .collect();
        Ok(space)
    }

    fn compile(
        &self,
        f: &Formula,
        scope: &mut Vec<String>,
        slots: &mut usize,
        last: &mut Option<usize>,
    ) -> Compiled {
        // Slots are assigned per binder occurrence; `scope[i]` names slot `i`
        // while it is visible.
        let slot_of = |scope: &[String], v: &str| scope.iter().rposition(|w| w == v).unwrap();
        match f {
            Formula::Top => Compiled::Top,
            Formula::Or(fs) => Compiled::Or(
                fs.iter()
                    .map(|g| self.compile(g, scope, slots, last))
                    .collect(),
            ),
            Formula::And(fs) => Compiled::And(
                fs.iter()
                    .map(|g| self.compile(g, scope, slots, last))
                    .collect(),
            ),
            Formula::Atom { rel, args } => {
                let rel = self
                    .theory
                    .relations
                    .iter()
                    .position(|r| &r.name == rel)
                    .unwrap();
                *last = Some(last.map_or(rel, |l: usize| l.max(rel)));
                Compiled::Atom {
                    rel,
                    args: args.iter().map(|a| slot_of(scope, a)).collect(),
                }
            }
            Formula::Eq { sort, lhs, rhs } => Compiled::Eq {
                sort: self.theory.sorts.iter().position(|s| s == sort).unwrap(),
                lhs: slot_of(scope, lhs),
                rhs: slot_of(scope, rhs),
            },
            Formula::Exists { var, sort, body } => {
                // Pad the scope so the new variable's position equals its slot.
                while scope.len() < *slots {
                    scope.push(String::new());
                }
                let slot = *slots;
                *slots += 1;
                scope.push(var.clone());
                let body = self.compile(body, scope, slots, last);
                scope[slot] = String::new();
                Compiled::Exists {
                    slot,
                    sort: self.theory.sorts.iter().position(|s| s == sort).unwrap(),
                    body: Box::new(body),
                }
            }
        }
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn eval(&self, m: &IndexedModel, f: &Compiled, env: &mut [Index]) -> bool {
        match f {
            Compiled::Top => true,
            Compiled::Or(fs) => fs.iter().any(|g| self.eval(m, g, env)),
            Compiled::And(fs) => fs.iter().all(|g| self.eval(m, g, env)),
            Compiled::Atom { rel, args } => {
                let tuple: Vec<Index> = args.iter().map(|s| env[*s]).collect();
                m.rels[*rel][flat(self.k, &tuple)]
            }
            Compiled::Eq { sort, lhs, rhs } => m.pers[*sort].related(env[*lhs], env[*rhs]),
            Compiled::Exists { slot, sort, body } => (0..self.k).any(|n| {
                if !m.pers[*sort].in_domain(n) {
                    return false;
                }
                env[*slot] = n;
                self.eval(m, body, env)
            }),
        }
    }

    fn axiom_holds(&self, m: &IndexedModel, ax: &CompiledAxiom) -> bool {
        let mut env = vec![0; ax.slots];
        let domains: Vec<Vec<Index>> = ax
            .context
            .iter()
            .map(|s| (0..self.k).filter(|n| m.pers[*s].in_domain(*n)).collect())
            .collect();
        if domains.is_empty() {
            return !self.eval(m, &ax.premise, &mut env) || self.eval(m, &ax.conclusion, &mut env);
        }
        domains.iter().multi_cartesian_product().all(|tuple| {
            for (i, n) in tuple.iter().enumerate() {
                env[i] = **n;
            }
            !self.eval(m, &ax.premise, &mut env) || self.eval(m, &ax.conclusion, &mut env)
        })
    }

    /// Do all axioms hold? Structural invariants are assumed.
    pub fn is_model(&self, m: &IndexedModel) -> bool {
        self.axioms.iter().all(|ax| self.axiom_holds(m, ax))
    }

    /// Are the structural invariants met: symmetric transitive relations,
    /// strict and saturated interpretations?
    pub fn is_structure(&self, m: &IndexedModel) -> bool {
        let k = self.k;
        if m.pers.len() != self.theory.sorts.len() || m.rels.len() != self.signatures.len() {
            return false;
        }
        for p in &m.pers {
            for (a, b, c) in (0..k)
                .cartesian_product(0..k)
                .cartesian_product(0..k)
                .map(|((a, b), c)| (a, b, c))
            {
                if p.related(a, b) != p.related(b, a)
                    || (p.related(a, b) && p.related(b, c) && !p.related(a, c))
                {
                    return false;
                }
            }
        }
        for (r, sig) in self.signatures.iter().enumerate() {
            let tuples: Vec<Vec<Index>> = IndexSet::new(k).unwrap().tuples(sig.len()).collect();
            for from in &tuples {
                if !m.rels[r][flat(k, from)] {
                    continue;
                }
                if from.iter().zip(sig).any(|(n, s)| !m.pers[*s].in_domain(*n)) {
                    return false;
                }
                for to in &tuples {
                    let related = from
                        .iter()
                        .zip(to)
                        .zip(sig)
                        .all(|((a, b), s)| m.pers[*s].related(*a, *b));
                    if related && !m.rels[r][flat(k, to)] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn key(g: &Generator) -> SymbolKey {
        match g {
            Generator::Rel { rel, copy, .. } => SymbolKey::Rel(rel.clone(), *copy),
            Generator::Per { sort, copy, .. } => SymbolKey::Sort(sort.clone(), *copy),
            Generator::Iso { tag, sort, .. } => SymbolKey::Iso(*tag, sort.clone()),
        }
    }

    /// Does `m` make generator `g` true? Generators naming symbols outside
    /// the theory are false.
    pub fn holds(&self, m: &IndexedModel, g: &Generator) -> bool {
        let Some(&pos) = self.symbols.get(&Self::key(g)) else {
            return false;
        };
        match g {
            Generator::Per { lhs, rhs, .. } => m.pers[pos].related(*lhs, *rhs),
            Generator::Rel { args, .. } => {
                args.iter().all(|a| *a < self.k) && m.rels[pos][flat(self.k, args)]
            }
            Generator::Iso { from, to, .. } => {
                *from < self.k && *to < self.k && m.rels[pos][flat(self.k, &[*from, *to])]
            }
        }
    }

    /// As [`ModelSpace::holds`] with the copy tag of `g` ignored, so that a
    /// tagged generator is read in a model of the untagged theory.
    pub fn holds_untagged(&self, m: &IndexedModel, g: &Generator) -> bool {
        let key = match g {
            Generator::Rel { rel, .. } => SymbolKey::Rel(rel.clone(), None),
            Generator::Per { sort, .. } => SymbolKey::Sort(sort.clone(), None),
            Generator::Iso { .. } => return false,
        };
        let Some(&pos) = self.symbols.get(&key) else {
            return false;
        };
        match g {
            Generator::Per { lhs, rhs, .. } => m.pers[pos].related(*lhs, *rhs),
            Generator::Rel { args, .. } => {
                args.iter().all(|a| *a < self.k) && m.rels[pos][flat(self.k, args)]
            }
            Generator::Iso { .. } => unreachable!(),
        }
    }

    /// Position of an untagged sort.
    /// The classes of each sort and the true relation tuples, one
    /// representative per class tuple.
    pub fn describe(&self, m: &IndexedModel) -> String {
        let t = &self.theory;
        let k = self.k;
        let classes: Vec<Vec<Vec<Index>>> = m.pers.iter().map(|p| p.classes()).collect();
        let mut parts = Vec::new();
        for (s, cs) in t.sorts.iter().zip(&classes) {
            parts.push(format!(
                "{s}: {}",
                cs.iter()
                    .map(|c| format!("{{{}}}", c.iter().join(",")))
                    .join("")
            ));
        }
        for ((r, bits), sig) in t.relations.iter().zip(&m.rels).zip(&self.signatures) {
            if sig.is_empty() {
                parts.push(format!("{}: {}", r.name, bits[0]));
                continue;
            }
            let held = sig
                .iter()
                .map(|s| classes[*s].iter().map(|c| c[0]))
                .multi_cartesian_product()
                .filter(|tuple| bits[flat(k, tuple)])
                .map(|tuple| format!("({})", tuple.iter().join(",")))
                .join("");
            parts.push(format!("{}: {held}", r.name));
        }
        format!("[{}]", parts.join("; "))
    }

    pub fn sort_position(&self, base: &str) -> Option<usize> {
        self.symbols
            .get(&SymbolKey::Sort(base.into(), None))
            .copied()
    }

    /// Sort positions of the arguments of every relation.
    pub fn signatures(&self) -> &[Vec<usize>] {
        &self.signatures
    }

    pub fn satisfies(&self, m: &IndexedModel, o: &Open) -> bool {
        o.basics()
            .iter()
            .any(|b| b.generators().iter().all(|g| self.holds(m, g)))
    }

    /// Reject opens mentioning indices beyond the bound.
    pub fn check_open(&self, o: &Open) -> Result<()> {
        match o.generators().flat_map(|g| g.indices()).max() {
            Some(n) if n >= self.k => Err(Error::IndexMismatch {
                expected: self.k,
                found: n + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Class tuples of relation `r` under the given relations, each as the
    /// flat positions of the index tuples it saturates to.
    fn class_tuples(&self, pers: &[Per], r: usize) -> Vec<Vec<usize>> {
        let classes: Vec<Vec<Vec<Index>>> = self.signatures[r]
            .iter()
            .map(|s| pers[*s].classes())
            .collect();
        if classes.is_empty() {
            return vec![vec![0]];
        }
        classes
            .iter()
            .map(|cs| cs.iter())
            .multi_cartesian_product()
            .map(|ct| {
                ct.iter()
                    .map(|c| c.iter().copied())
                    .multi_cartesian_product()
                    .map(|t| flat(self.k, &t))
                    .collect()
            })
            .collect()
    }

    /// Number of candidate structures (all partial equivalence relations
    /// and all saturated interpretations) before axioms are checked.
    pub fn estimate(&self) -> f64 {
        let pers = all_pers(self.k);
        let mut total = 0.0;
        for choice in self.per_combinations(&pers) {
            let mut prod = 1.0f64;
            for r in 0..self.signatures.len() {
                prod *= 2f64.powi(self.class_tuples(&choice, r).len() as i32);
            }
            total += prod;
        }
        total
    }

    fn per_combinations(&self, pers: &[Per]) -> Vec<Vec<Per>> {
        let n = self.theory.sorts.len();
        if n == 0 {
            return vec![Vec::new()];
        }
        (0..n)
            .map(|_| pers.iter().cloned())
            .multi_cartesian_product()
            .collect()
    }

    /// All models, sorted by relation matrices then interpretations.
    pub fn enumerate(&self, guard: SizeGuard) -> Result<Vec<IndexedModel>> {
        guard.check(self.estimate())?;
        let pers = all_pers(self.k);
        let mut out = Vec::new();
        for choice in self.per_combinations(&pers) {
            let mut m = IndexedModel {
                pers: choice,
                rels: self
                    .signatures
                    .iter()
                    .map(|s| vec![false; self.k.pow(s.len() as u32)])
                    .collect(),
            };
            if !self.axioms_upto(&m, None) {
                continue;
            }
            let tuples: Vec<Vec<Vec<usize>>> = (0..self.signatures.len())
                .map(|r| self.class_tuples(&m.pers, r))
                .collect();
            self.extend(&mut m, 0, &tuples, &mut out);
        }
        out.sort();
        Ok(out)
    }

    /// Check the axioms whose last relation is exactly `last`.
    fn axioms_upto(&self, m: &IndexedModel, last: Option<usize>) -> bool {
        self.axioms
            .iter()
            .filter(|ax| ax.last_relation == last)
            .all(|ax| self.axiom_holds(m, ax))
    }

    fn extend(
        &self,
        m: &mut IndexedModel,
        r: usize,
        tuples: &[Vec<Vec<usize>>],
        out: &mut Vec<IndexedModel>,
    ) {
        if r == self.signatures.len() {
            out.push(m.clone());
            return;
        }
        let ts = &tuples[r];
        for mask in 0u64..(1u64 << ts.len()) {
            let bits = &mut m.rels[r];
            bits.iter_mut().for_each(|b| *b = false);
            for (i, t) in ts.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &p in t {
                        bits[p] = true;
                    }
                }
            }
            if self.axioms_upto(m, Some(r)) {
                self.extend(m, r + 1, tuples, out);
            }
        }
        m.rels[r].iter_mut().for_each(|b| *b = false);
    }
}

/// Models of `t` at index bound `idx` under the default size guard.
pub fn enumerate_models(t: &Theory, idx: IndexSet) -> Result<Vec<IndexedModel>> {
    ModelSpace::new(t, idx)?.enumerate(SizeGuard::from_env())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::theory::{Sequent, SortName};

    fn idx(k: usize) -> IndexSet {
        IndexSet::new(k).unwrap()
    }

    #[test]
    fn per_counts() {
        // Partial partitions: sum over domains of Bell numbers.
        assert_eq!(all_pers(1).len(), 2);
        assert_eq!(all_pers(2).len(), 5);
        assert_eq!(all_pers(3).len(), 15);
        assert_eq!(all_pers(4).len(), 52);
    }

    #[test]
    fn trivial_theory_at_one() {
        let t = Theory {
            name: "bare".into(),
            sorts: vec![SortName::plain("X")],
            relations: vec![],
            axioms: vec![Sequent {
                label: "nothing".into(),
                context: vec![],
                premise: Formula::bottom(),
                conclusion: Formula::bottom(),
            }],
        };
        assert_eq!(enumerate_models(&t, idx(1)).unwrap().len(), 2);
    }

    #[test]
    fn enumerated_structures_are_structures() {
        let t = corpus::linear_order();
        let space = ModelSpace::new(&t, idx(3)).unwrap();
        let models = space.enumerate(SizeGuard::unlimited()).unwrap();
        assert_eq!(models.len(), 25);
        assert!(models
            .iter()
            .all(|m| space.is_structure(m) && space.is_model(m)));
        assert!(models.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let t = corpus::linear_order();
        let space = ModelSpace::new(&t, idx(3)).unwrap();
        let err = space.enumerate(SizeGuard { limit: Some(10) }).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { .. }));
    }

    #[test]
    fn propositional_models() {
        let count = |t: &Theory| enumerate_models(t, idx(1)).unwrap().len();
        assert_eq!(count(&corpus::partial_surjection()), 12);
        assert_eq!(count(&corpus::dedekind_grid()), 0);
        // p => q, q & r => false, p | r: {p,q}, {r}.
        assert_eq!(count(&corpus::propositional_demo()), 2);
    }

    #[test]
    fn satisfaction_examples() {
        let t = corpus::linear_order();
        let space = ModelSpace::new(&t, idx(2)).unwrap();
        let models = space.enumerate(SizeGuard::unlimited()).unwrap();
        let two_classes = models
            .iter()
            .find(|m| m.pers[0].classes().len() == 2 && m.rels[0][flat(2, &[0, 1])])
            .unwrap();
        assert!(space.satisfies(
            two_classes,
            &Open::generator(Generator::rel("leq", None, &[0, 1]))
        ));
        assert!(models.iter().all(|m| space.satisfies(m, &Open::top())));
        let one = models
            .iter()
            .find(|m| m.pers[0].classes() == vec![vec![0]])
            .unwrap();
        assert!(!space.satisfies(one, &Open::generator(Generator::per("X", None, 1, 1))));
        assert!(space
            .check_open(&Open::generator(Generator::per("X", None, 2, 2)))
            .is_err());
    }
}
