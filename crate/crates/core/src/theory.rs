//! Multi-sorted geometric theories: sorts, relation symbols, formulas built
//! from `true`, finite `&`/`|`, equality and `exists`, and sequents in context.
//!
//! Sorts and relations carry optional copy tags so that the same types can
//! describe a source theory and the tagged theories of isomorphisms derived
//! from it (see [`crate::propositionalize::iso_expansion`]).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

/// Which copy of the base theory a sort or relation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CopyTag {
    One,
    Two,
    Three,
}

impl CopyTag {
    pub const ALL: [CopyTag; 3] = [CopyTag::One, CopyTag::Two, CopyTag::Three];

    pub fn number(self) -> u8 {
        match self {
            CopyTag::One => 1,
            CopyTag::Two => 2,
            CopyTag::Three => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<CopyTag> {
        match n {
            1 => Some(CopyTag::One),
            2 => Some(CopyTag::Two),
            3 => Some(CopyTag::Three),
            _ => None,
        }
    }
}

/// The isomorphism families: `alpha` between copies 1 and 2 in the arrow
/// theory, `beta` (1 to 2) and `gamma` (2 to 3) in the composable-pair theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IsoTag {
    Alpha,
    Beta,
    Gamma,
}

impl IsoTag {
    pub fn name(self) -> &'static str {
        match self {
            IsoTag::Alpha => "alpha",
            IsoTag::Beta => "beta",
            IsoTag::Gamma => "gamma",
        }
    }

    pub fn from_name(s: &str) -> Option<IsoTag> {
        match s {
            "alpha" => Some(IsoTag::Alpha),
            "beta" => Some(IsoTag::Beta),
            "gamma" => Some(IsoTag::Gamma),
            _ => None,
        }
    }

    /// Copies related by this family, as (domain copy, codomain copy).
    pub fn endpoints(self) -> (CopyTag, CopyTag) {
        match self {
            IsoTag::Alpha | IsoTag::Beta => (CopyTag::One, CopyTag::Two),
            IsoTag::Gamma => (CopyTag::Two, CopyTag::Three),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortName {
    pub base: String,
    pub copy: Option<CopyTag>,
}

impl SortName {
    pub fn plain(base: impl Into<String>) -> Self {
        SortName {
            base: base.into(),
            copy: None,
        }
    }

    pub fn tagged(&self, copy: CopyTag) -> Self {
        SortName {
            base: self.base.clone(),
            copy: Some(copy),
        }
    }
}

impl From<&str> for SortName {
    fn from(s: &str) -> Self {
        SortName::plain(s)
    }
}

impl fmt::Display for SortName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.copy {
            None => write!(f, "{}", self.base),
            Some(c) => write!(f, "{}{}", self.base, c.number()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelName {
    Symbol {
        base: String,
        copy: Option<CopyTag>,
    },
    /// Graph of an isomorphism on the base sort `sort`.
    Iso {
        tag: IsoTag,
        sort: String,
    },
}

impl RelName {
    pub fn plain(base: impl Into<String>) -> Self {
        RelName::Symbol {
            base: base.into(),
            copy: None,
        }
    }
}

impl From<&str> for RelName {
    fn from(s: &str) -> Self {
        RelName::plain(s)
    }
}

impl fmt::Display for RelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelName::Symbol { base, copy: None } => write!(f, "{base}"),
            RelName::Symbol {
                base,
                copy: Some(c),
            } => write!(f, "{base}{}", c.number()),
            RelName::Iso { tag, sort } => write!(f, "{}.{sort}", tag.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSymbol {
    pub name: RelName,
    pub signature: Vec<SortName>,
}

impl RelationSymbol {
    pub fn new(name: impl Into<RelName>, signature: Vec<SortName>) -> Self {
        RelationSymbol {
            name: name.into(),
            signature,
        }
    }

    pub fn arity(&self) -> usize {
        self.signature.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    /// Finite disjunction; the empty disjunction is falsity.
    Or(Vec<Formula>),
    And(Vec<Formula>),
    Atom {
        rel: RelName,
        args: Vec<String>,
    },
    Eq {
        sort: SortName,
        lhs: String,
        rhs: String,
    },
    Exists {
        var: String,
        sort: SortName,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn bottom() -> Self {
        Formula::Or(Vec::new())
    }

    /// Conjunction that collapses the empty and singleton cases.
    pub fn conj(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::Top,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction that collapses the singleton case.
    pub fn disj(mut parts: Vec<Formula>) -> Self {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    }

    pub fn atom(rel: impl Into<RelName>, args: &[&str]) -> Self {
        Formula::Atom {
            rel: rel.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn eq(sort: impl Into<SortName>, lhs: &str, rhs: &str) -> Self {
        Formula::Eq {
            sort: sort.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    pub fn exists(var: &str, sort: impl Into<SortName>, body: Formula) -> Self {
        Formula::Exists {
            var: var.into(),
            sort: sort.into(),
            body: Box::new(body),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub label: String,
    pub context: Vec<(String, SortName)>,
    pub premise: Formula,
    pub conclusion: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Theory {
    pub name: String,
    pub sorts: Vec<SortName>,
    pub relations: Vec<RelationSymbol>,
    pub axioms: Vec<Sequent>,
}

impl Theory {
    pub fn relation(&self, name: &RelName) -> Option<&RelationSymbol> {
        self.relations.iter().find(|r| &r.name == name)
    }

    pub fn has_sort(&self, sort: &SortName) -> bool {
        self.sorts.contains(sort)
    }

    /// True when the theory has no sorts, i.e. it is a propositional theory
    /// whose relations are all basic propositions.
    pub fn is_propositional(&self) -> bool {
        self.sorts.is_empty()
    }

    /// Free variables of `f` with their sorts, in first-occurrence order.
    ///
    /// Sorts of relation arguments are read off the relation signatures, so
    /// `f` must be well-sorted over this theory.
    pub fn free_variables(&self, f: &Formula) -> Vec<(String, SortName)> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(f, &mut bound, &mut out);
        out
    }

    fn collect_free(
        &self,
        f: &Formula,
        bound: &mut Vec<String>,
        out: &mut Vec<(String, SortName)>,
    ) {
        fn push(v: &str, s: &SortName, bound: &[String], out: &mut Vec<(String, SortName)>) {
            if !bound.iter().any(|b| b == v) && !out.iter().any(|(o, _)| o == v) {
                out.push((v.to_string(), s.clone()));
            }
        }
        match f {
            Formula::Top => {}
            Formula::Or(fs) | Formula::And(fs) => {
                for g in fs {
                    self.collect_free(g, bound, out);
                }
            }
            Formula::Atom { rel, args } => {
                if let Some(sym) = self.relation(rel) {
                    for (a, s) in args.iter().zip(&sym.signature) {
                        push(a, s, bound, out);
                    }
                }
            }
            Formula::Eq { sort, lhs, rhs } => {
                push(lhs, sort, bound, out);
                push(rhs, sort, bound, out);
            }
            Formula::Exists { var, body, .. } => {
                bound.push(var.clone());
                self.collect_free(body, bound, out);
                bound.pop();
            }
        }
    }
}

/// What went wrong, independent of where.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    EmptyName,
    DuplicateSort,
    DuplicateRelation,
    UnknownSort,
    DuplicateLabel,
    DuplicateVariable,
    UnboundVariable,
    UnknownRelation,
    ArityMismatch,
    SortMismatch,
    Shadowing,
    MalformedIso,
    FunctionSymbol,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticKind::EmptyName => "empty name",
            DiagnosticKind::DuplicateSort => "duplicate sort",
            DiagnosticKind::DuplicateRelation => "duplicate relation",
            DiagnosticKind::UnknownSort => "unknown sort",
            DiagnosticKind::DuplicateLabel => "duplicate axiom label",
            DiagnosticKind::DuplicateVariable => "duplicate context variable",
            DiagnosticKind::UnboundVariable => "unbound variable",
            DiagnosticKind::UnknownRelation => "unknown relation",
            DiagnosticKind::ArityMismatch => "arity mismatch",
            DiagnosticKind::SortMismatch => "sort mismatch",
            DiagnosticKind::Shadowing => "shadowed variable",
            DiagnosticKind::MalformedIso => "malformed isomorphism relation",
            DiagnosticKind::FunctionSymbol => "function symbols are not supported",
        };
        f.write_str(s)
    }
}

/// A validation finding. `axiom` is `None` for declaration-level problems;
/// `path` lists child positions from the sequent root (0 = premise,
/// 1 = conclusion) down to the offending subformula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub axiom: Option<String>,
    pub path: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(label) = &self.axiom {
            write!(f, " at axiom {label}")?;
            if !self.path.is_empty() {
                let path: Vec<String> = self.path.iter().map(|p| p.to_string()).collect();
                write!(f, " (subformula {})", path.join("."))?;
            }
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn validate_theory(t: &Theory) -> ValidationReport {
    let mut v = Validator {
        theory: t,
        diags: Vec::new(),
    };
    v.run();
    ValidationReport {
        diagnostics: v.diags,
    }
}

struct Validator<'t> {
    theory: &'t Theory,
    diags: Vec<Diagnostic>,
}

struct Scope<'a> {
    label: &'a str,
    vars: Vec<(String, SortName)>,
    path: Vec<usize>,
}

impl Scope<'_> {
    fn lookup(&self, v: &str) -> Option<&SortName> {
        self.vars.iter().rev().find(|(n, _)| n == v).map(|(_, s)| s)
    }
}

impl<'t> Validator<'t> {
    fn decl(&mut self, kind: DiagnosticKind, detail: String) {
        self.diags.push(Diagnostic {
            kind,
            axiom: None,
            path: Vec::new(),
            detail,
        });
    }

    fn at(&mut self, scope: &Scope<'_>, kind: DiagnosticKind, detail: String) {
        self.diags.push(Diagnostic {
            kind,
            axiom: Some(scope.label.to_string()),
            path: scope.path.clone(),
            detail,
        });
    }

    fn run(&mut self) {
        let t = self.theory;
        let mut seen = HashSet::new();
        for s in &t.sorts {
            if s.base.is_empty() {
                self.decl(DiagnosticKind::EmptyName, "sort with empty name".into());
            }
            if !seen.insert(s) {
                self.decl(
                    DiagnosticKind::DuplicateSort,
                    format!("sort {s} declared twice"),
                );
            }
        }
        let mut seen = HashSet::new();
        for r in &t.relations {
            match &r.name {
                RelName::Symbol { base, .. } if base.is_empty() => {
                    self.decl(DiagnosticKind::EmptyName, "relation with empty name".into())
                }
                RelName::Iso { tag, sort } => {
                    let (a, b) = tag.endpoints();
                    let expected = vec![
                        SortName {
                            base: sort.clone(),
                            copy: Some(a),
                        },
                        SortName {
                            base: sort.clone(),
                            copy: Some(b),
                        },
                    ];
                    if r.signature != expected {
                        self.decl(
                            DiagnosticKind::MalformedIso,
                            format!("{} must relate {} and {}", r.name, expected[0], expected[1]),
                        );
                    }
                }
                _ => {}
            }
            if !seen.insert(&r.name) {
                self.decl(
                    DiagnosticKind::DuplicateRelation,
                    format!("relation {} declared twice", r.name),
                );
            }
            for s in &r.signature {
                if !t.has_sort(s) {
                    self.decl(
                        DiagnosticKind::UnknownSort,
                        format!("relation {} uses undeclared sort {s}", r.name),
                    );
                }
            }
        }
        let mut labels = HashSet::new();
        for ax in &t.axioms {
            if !labels.insert(&ax.label) {
                self.decl(
                    DiagnosticKind::DuplicateLabel,
                    format!("label {} reused", ax.label),
                );
            }
            let mut scope = Scope {
                label: &ax.label,
                vars: Vec::new(),
                path: Vec::new(),
            };
            let mut names = BTreeSet::new();
            for (v, s) in &ax.context {
                if !names.insert(v.as_str()) {
                    self.at(
                        &scope,
                        DiagnosticKind::DuplicateVariable,
                        format!("variable {v}"),
                    );
                }
                if !t.has_sort(s) {
                    self.at(
                        &scope,
                        DiagnosticKind::UnknownSort,
                        format!("{v} has sort {s}"),
                    );
                }
                scope.vars.push((v.clone(), s.clone()));
            }
            scope.path.push(0);
            self.formula(&ax.premise, &mut scope);
            scope.path.pop();
            scope.path.push(1);
            self.formula(&ax.conclusion, &mut scope);
        }
    }

    fn var(&mut self, scope: &Scope<'_>, v: &str, expected: &SortName) {
        match scope.lookup(v) {
            None => self.at(
                scope,
                DiagnosticKind::UnboundVariable,
                format!("variable {v}"),
            ),
            Some(s) if s != expected => self.at(
                scope,
                DiagnosticKind::SortMismatch,
                format!("{v} has sort {s}, expected {expected}"),
            ),
            Some(_) => {}
        }
    }

    fn formula(&mut self, f: &Formula, scope: &mut Scope<'_>) {
        match f {
            Formula::Top => {}
            Formula::Or(fs) | Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    scope.path.push(i);
                    self.formula(g, scope);
                    scope.path.pop();
                }
            }
            Formula::Atom { rel, args } => {
                let Some(sym) = self.theory.relation(rel) else {
                    self.at(scope, DiagnosticKind::UnknownRelation, format!("{rel}"));
                    return;
                };
                if sym.arity() != args.len() {
                    self.at(
                        scope,
                        DiagnosticKind::ArityMismatch,
                        format!(
                            "{rel} expects {} arguments, found {}",
                            sym.arity(),
                            args.len()
                        ),
                    );
                    return;
                }
                for (a, s) in args.iter().zip(&sym.signature) {
                    self.var(scope, a, s);
                }
            }
            Formula::Eq { sort, lhs, rhs } => {
                if !self.theory.has_sort(sort) {
                    self.at(scope, DiagnosticKind::UnknownSort, format!("{sort}"));
                    return;
                }
                self.var(scope, lhs, sort);
                self.var(scope, rhs, sort);
            }
            Formula::Exists { var, sort, body } => {
                if !self.theory.has_sort(sort) {
                    self.at(scope, DiagnosticKind::UnknownSort, format!("{sort}"));
                }
                if scope.lookup(var).is_some() {
                    self.at(
                        scope,
                        DiagnosticKind::Shadowing,
                        format!("{var} is already bound"),
                    );
                }
                scope.vars.push((var.clone(), sort.clone()));
                scope.path.push(0);
                self.formula(body, scope);
                scope.path.pop();
                scope.vars.pop();
            }
        }
    }
}

/// Position lookups for the symbols of a theory.
#[derive(Clone, Debug)]
pub struct Signature {
    sorts: HashMap<SortName, usize>,
    relations: HashMap<RelName, usize>,
}

impl Signature {
    pub fn new(t: &Theory) -> Self {
        Signature {
            sorts: t
                .sorts
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect(),
            relations: t
                .relations
                .iter()
                .enumerate()
                .map(|(i, r)| (r.name.clone(), i))
                .collect(),
        }
    }

    pub fn sort(&self, s: &SortName) -> Option<usize> {
        self.sorts.get(s).copied()
    }

    pub fn relation(&self, r: &RelName) -> Option<usize> {
        self.relations.get(r).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn total_order() -> Theory {
        let x = SortName::plain("X");
        let ctx = |vs: &[&str]| {
            vs.iter()
                .map(|v| (v.to_string(), x.clone()))
                .collect::<Vec<_>>()
        };
        Theory {
            name: "linear_order".into(),
            sorts: vec![x.clone()],
            relations: vec![RelationSymbol::new("leq", vec![x.clone(), x.clone()])],
            axioms: vec![
                Sequent {
                    label: "refl".into(),
                    context: ctx(&["x"]),
                    premise: Formula::Top,
                    conclusion: Formula::atom("leq", &["x", "x"]),
                },
                Sequent {
                    label: "inhabited".into(),
                    context: vec![],
                    premise: Formula::Top,
                    conclusion: Formula::exists("x", "X", Formula::Top),
                },
            ],
        }
    }

    #[test]
    fn total_order_validates() {
        assert!(validate_theory(&total_order()).is_ok());
    }

    #[test]
    fn empty_theory_validates() {
        assert!(validate_theory(&Theory::default()).is_ok());
    }

    #[test]
    fn arity_mismatch_is_reported_with_label() {
        let mut t = total_order();
        t.axioms[0].conclusion = Formula::atom("leq", &["x"]);
        let report = validate_theory(&t);
        assert_eq!(report.diagnostics.len(), 1);
        let d = &report.diagnostics[0];
        assert_eq!(d.kind, DiagnosticKind::ArityMismatch);
        assert_eq!(d.path, vec![1]);
        assert!(d.to_string().starts_with("arity mismatch at axiom refl"));
    }

    #[test]
    fn shadowing_and_unbound_are_rejected() {
        let mut t = total_order();
        t.axioms[0].premise = Formula::exists("x", "X", Formula::Top);
        t.axioms[1].conclusion = Formula::atom("leq", &["x", "y"]);
        let kinds: Vec<_> = validate_theory(&t)
            .diagnostics
            .iter()
            .map(|d| d.kind)
            .collect();
        assert!(kinds.contains(&DiagnosticKind::Shadowing));
        assert_eq!(
            kinds
                .iter()
                .filter(|k| **k == DiagnosticKind::UnboundVariable)
                .count(),
            2
        );
    }

    #[test]
    fn validation_is_deterministic() {
        let mut t = total_order();
        t.sorts.push(SortName::plain("X"));
        t.axioms[0].context.push(("x".into(), SortName::plain("Y")));
        assert_eq!(validate_theory(&t), validate_theory(&t));
    }

    #[test]
    fn free_variables_in_first_occurrence_order() {
        let t = total_order();
        let x = SortName::plain("X");
        let f = Formula::atom("leq", &["x", "y"]);
        assert_eq!(
            t.free_variables(&f),
            vec![("x".into(), x.clone()), ("y".into(), x.clone())]
        );
        let g = Formula::exists("x", "X", Formula::atom("leq", &["x", "y"]));
        assert_eq!(t.free_variables(&g), vec![("y".into(), x.clone())]);
        assert!(t.free_variables(&Formula::Top).is_empty());
    }

    #[test]
    fn free_variables_of_conjunction_is_ordered_union() {
        let t = total_order();
        let f = Formula::atom("leq", &["y", "x"]);
        let g = Formula::atom("leq", &["z", "y"]);
        let both = Formula::And(vec![f.clone(), g.clone()]);
        let mut expected = t.free_variables(&f);
        for v in t.free_variables(&g) {
            if !expected.contains(&v) {
                expected.push(v);
            }
        }
        assert_eq!(t.free_variables(&both), expected);
    }
}
