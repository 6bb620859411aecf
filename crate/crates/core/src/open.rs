//! Generators and opens of presented frames in join-of-meets normal form.
//!
//! A [`BasicOpen`] is a finite meet of generators, an [`Open`] a finite join of
//! basic opens. Opens are kept as antichains: a basic open that contains
//! another one (and so lies below it) is dropped from a join.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::theory::{CopyTag, IsoTag};

pub type Index = usize;

/// A generator of one of the presented frames.
///
/// The derived ordering (kind, then name, copy tag, indices) is the
/// canonical order used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `[(n1, ..., nk) in R]`, possibly in a tagged copy of the theory.
    Rel {
        rel: Arc<str>,
        copy: Option<CopyTag>,
        args: Vec<Index>,
    },
    /// `[n ~ m]` for the partial equivalence relation standing in for a sort.
    Per {
        sort: Arc<str>,
        copy: Option<CopyTag>,
        lhs: Index,
        rhs: Index,
    },
    /// `[iso(from) = to]` for one of the isomorphism families.
    Iso {
        tag: IsoTag,
        sort: Arc<str>,
        from: Index,
        to: Index,
    },
}

impl Generator {
    pub fn rel(rel: &str, copy: Option<CopyTag>, args: &[Index]) -> Self {
        Generator::Rel {
            rel: rel.into(),
            copy,
            args: args.to_vec(),
        }
    }

    pub fn per(sort: &str, copy: Option<CopyTag>, lhs: Index, rhs: Index) -> Self {
        Generator::Per {
            sort: sort.into(),
            copy,
            lhs,
            rhs,
        }
    }

    pub fn iso(tag: IsoTag, sort: &str, from: Index, to: Index) -> Self {
        Generator::Iso {
            tag,
            sort: sort.into(),
            from,
            to,
        }
    }

    pub fn copy(&self) -> Option<CopyTag> {
        match self {
            Generator::Rel { copy, .. } | Generator::Per { copy, .. } => *copy,
            Generator::Iso { .. } => None,
        }
    }

    /// The same generator in another copy; isomorphism generators are
    /// returned unchanged.
    pub fn retag(&self, copy: Option<CopyTag>) -> Generator {
        match self {
            Generator::Rel { rel, args, .. } => Generator::Rel {
                rel: rel.clone(),
                copy,
                args: args.clone(),
            },
            Generator::Per { sort, lhs, rhs, .. } => Generator::Per {
                sort: sort.clone(),
                copy,
                lhs: *lhs,
                rhs: *rhs,
            },
            g @ Generator::Iso { .. } => g.clone(),
        }
    }

    pub fn indices(&self) -> Vec<Index> {
        match self {
            Generator::Rel { args, .. } => args.clone(),
            Generator::Per { lhs, rhs, .. } => vec![*lhs, *rhs],
            Generator::Iso { from, to, .. } => vec![*from, *to],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |c: &Option<CopyTag>| c.map(|c| c.number().to_string()).unwrap_or_default();
        match self {
            Generator::Rel { rel, copy, args } => {
                write!(f, "{rel}{}", tag(copy))?;
                if !args.is_empty() {
                    let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    write!(f, "({})", args.join(","))?;
                }
                Ok(())
            }
            Generator::Per {
                sort,
                copy,
                lhs,
                rhs,
            } => {
                write!(f, "per{}.{sort}({lhs},{rhs})", tag(copy))
            }
            Generator::Iso {
                tag,
                sort,
                from,
                to,
            } => {
                write!(f, "{}.{sort}({from})={to}", tag.name())
            }
        }
    }
}

/// A finite meet of generators; the empty meet is top.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicOpen(Vec<Generator>);

impl BasicOpen {
    pub fn top() -> Self {
        BasicOpen(Vec::new())
    }

    pub fn singleton(g: Generator) -> Self {
        BasicOpen(vec![g])
    }

    pub fn new(gens: impl IntoIterator<Item = Generator>) -> Self {
        let mut v: Vec<Generator> = gens.into_iter().collect();
        v.sort();
        v.dedup();
        BasicOpen(v)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.0.binary_search(g).is_ok()
    }

    pub fn meet(&self, other: &BasicOpen) -> BasicOpen {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        BasicOpen(out)
    }

    /// Generator-set inclusion, i.e. `other <= self` as opens.
    pub fn is_subset(&self, other: &BasicOpen) -> bool {
        let (a, b) = (&self.0, &other.0);
        if a.len() > b.len() {
            return false;
        }
        let mut j = 0;
        for g in a {
            loop {
                if j == b.len() {
                    return false;
                }
                match b[j].cmp(g) {
                    Ordering::Less => j += 1,
                    Ordering::Equal => {
                        j += 1;
                        break;
                    }
                    Ordering::Greater => return false,
                }
            }
        }
        true
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A finite join of basic opens in normal form; the empty join is bottom.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Open(Vec<BasicOpen>);

impl Open {
    pub fn bottom() -> Self {
        Open(Vec::new())
    }

    pub fn top() -> Self {
        Open(vec![BasicOpen::top()])
    }

    pub fn generator(g: Generator) -> Self {
        Open(vec![BasicOpen::singleton(g)])
    }

    pub fn basic(b: BasicOpen) -> Self {
        Open(vec![b])
    }

    /// Canonical form of a raw join of meets: sorted, deduplicated and
    /// subsumption-pruned.
    pub fn normalize(raw: impl IntoIterator<Item = BasicOpen>) -> Self {
        let mut basics: Vec<BasicOpen> = raw.into_iter().collect();
        basics.sort();
        basics.dedup();
        if basics.len() > 1 {
            basics.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let mut kept: Vec<BasicOpen> = Vec::with_capacity(basics.len());
            for b in basics {
                if !kept.iter().any(|k| k.is_subset(&b)) {
                    kept.push(b);
                }
            }
            kept.sort();
            basics = kept;
        }
        Open(basics)
    }

    pub fn basics(&self) -> &[BasicOpen] {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.0.iter().flat_map(|b| b.generators().iter())
    }

    pub fn join(&self, other: &Open) -> Open {
        Open::normalize(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn meet(&self, other: &Open) -> Open {
        Open::normalize(
            self.0
                .iter()
                .flat_map(|a| other.0.iter().map(move |b| a.meet(b))),
        )
    }

    pub fn join_all<'a>(opens: impl IntoIterator<Item = &'a Open>) -> Open {
        Open::normalize(opens.into_iter().flat_map(|o| o.0.iter().cloned()))
    }

    pub fn meet_all<'a>(opens: impl IntoIterator<Item = &'a Open>) -> Open {
        opens.into_iter().fold(Open::top(), |acc, o| acc.meet(o))
    }

    /// Extend a map on basic opens to all opens by preserving joins.
    pub fn flat_map_basics<E>(
        &self,
        mut f: impl FnMut(&BasicOpen) -> Result<Open, E>,
    ) -> Result<Open, E> {
        let mut raw = Vec::new();
        for b in &self.0 {
            raw.extend(f(b)?.0);
        }
        Ok(Open::normalize(raw))
    }
}

impl From<BasicOpen> for Open {
    fn from(b: BasicOpen) -> Self {
        Open::basic(b)
    }
}

impl fmt::Display for Open {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("false");
        }
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(i: usize) -> Generator {
        Generator::rel("r", None, &[i])
    }

    fn open(raw: &[&[usize]]) -> Open {
        Open::normalize(raw.iter().map(|b| BasicOpen::new(b.iter().map(|i| g(*i)))))
    }

    #[test]
    fn subsumption_drops_larger_meets() {
        assert_eq!(open(&[&[1], &[1, 2]]), open(&[&[1]]));
    }

    #[test]
    fn empty_join_is_bottom_and_empty_meet_is_top() {
        assert!(open(&[]).is_bottom());
        assert!(open(&[&[]]).is_top());
        assert_eq!(open(&[&[], &[3]]), Open::top());
    }

    #[test]
    fn meet_distributes_over_join() {
        let a = open(&[&[1]]);
        let b = open(&[&[2], &[3]]);
        assert_eq!(a.meet(&b), open(&[&[1, 2], &[1, 3]]));
    }

    #[test]
    fn units() {
        let x = open(&[&[1, 2], &[4]]);
        assert_eq!(x.join(&Open::bottom()), x);
        assert_eq!(x.meet(&Open::top()), x);
        assert_eq!(x.meet(&Open::bottom()), Open::bottom());
    }

    #[test]
    fn display_uses_expression_syntax() {
        let o = Open::normalize([
            BasicOpen::new([Generator::per("X", Some(CopyTag::Two), 0, 1)]),
            BasicOpen::new([
                Generator::iso(IsoTag::Alpha, "X", 1, 2),
                Generator::rel("leq", Some(CopyTag::One), &[1, 2]),
            ]),
        ]);
        assert_eq!(o.to_string(), "leq1(1,2) & alpha.X(1)=2 | per2.X(0,1)");
        assert_eq!(Open::bottom().to_string(), "false");
        assert_eq!(Open::top().to_string(), "true");
    }

    fn arb_open() -> impl Strategy<Value = Open> {
        prop::collection::vec(prop::collection::vec(0usize..6, 0..4), 0..5).prop_map(|raw| {
            Open::normalize(
                raw.into_iter()
                    .map(|b| BasicOpen::new(b.into_iter().map(g))),
            )
        })
    }

    fn holds(o: &Open, val: &[bool]) -> bool {
        o.basics().iter().any(|b| {
            b.generators().iter().all(|gen| match gen {
                Generator::Rel { args, .. } => val[args[0]],
                _ => unreachable!(),
            })
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(o in arb_open()) {
            prop_assert_eq!(Open::normalize(o.basics().iter().cloned()), o);
        }

        #[test]
        fn normal_form_is_an_antichain(o in arb_open()) {
            for (i, a) in o.basics().iter().enumerate() {
                for (j, b) in o.basics().iter().enumerate() {
                    prop_assert!(i == j || !a.is_subset(b));
                }
            }
        }

        #[test]
        fn lattice_operations_agree_with_boolean_evaluation(
            a in arb_open(), b in arb_open(), bits in 0u32..64,
        ) {
            let val: Vec<bool> = (0..6).map(|i| bits >> i & 1 == 1).collect();
            prop_assert_eq!(holds(&a.meet(&b), &val), holds(&a, &val) && holds(&b, &val));
            prop_assert_eq!(holds(&a.join(&b), &val), holds(&a, &val) || holds(&b, &val));
        }
    }
}
