//! Text format for theories.
//!
//! ```text
//! theory linear_order
//! sorts: X
//! relations: leq(X, X)
//! axioms:
//!   refl: [x:X] true => leq(x, x)
//!   inhabited: [] true => exists x:X. true
//! ```
//!
//! Formulas use `true`, `false`, `R(x, ..)` (or a bare `p` for a nullary
//! relation), `x = y`, `&`, `|`, `exists v:S. f` and parentheses. `exists`
//! binds weakest, then `|`, then `&`. Line breaks are insignificant and `#`
//! starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt;

use crate::theory::{
    validate_theory, DiagnosticKind, Formula, RelName, RelationSymbol, Sequent, SortName, Theory,
};

/// Byte range plus the 1-based line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax {
        expected: Vec<String>,
        found: String,
    },
    Semantic {
        kind: DiagnosticKind,
        axiom: Option<String>,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.span.line, self.span.column)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::Semantic {
                kind,
                axiom,
                message,
            } => {
                write!(f, "{kind}")?;
                if let Some(label) = axiom {
                    write!(f, " at axiom {label}")?;
                }
                write!(f, ": {message}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Equals,
    Amp,
    Bar,
    Dot,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 7] = [
    "theory",
    "sorts",
    "relations",
    "axioms",
    "true",
    "false",
    "exists",
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let mut chars = text.char_indices().peekable();
    let span = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        start,
        end,
        line,
        column: text[line_start..start].chars().count() + 1,
    };
    while let Some(&(i, c)) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = i + 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
            continue;
        }
        if is_ident_start(c) {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !is_ident_continue(d) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((
                Tok::Ident(text[i..end].to_string()),
                span(i, end, line, line_start),
            ));
            continue;
        }
        chars.next();
        let (tok, len) = match c {
            '=' if chars.peek().is_some_and(|&(_, d)| d == '>') => {
                chars.next();
                (Tok::Arrow, 2)
            }
            '=' => (Tok::Equals, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '.' => (Tok::Dot, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ':' => (Tok::Colon, 1),
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax {
                        expected: vec!["a token".into()],
                        found: format!("character `{other}`"),
                    },
                    span: span(i, i + other.len_utf8(), line, line_start),
                })
            }
        };
        out.push((tok, span(i, i + len, line, line_start)));
    }
    out.push((Tok::Eof, span(text.len(), text.len(), line, line_start)));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    sorts: Vec<SortName>,
    relations: Vec<RelationSymbol>,
    label: Option<String>,
    scope: Vec<(String, SortName)>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.toks[(self.pos + offset).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, expected: &[&str]) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().to_string(),
            },
            span: self.span(),
        }
    }

    fn semantic(&self, kind: DiagnosticKind, message: String, span: SourceSpan) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Semantic {
                kind,
                axiom: self.label.clone(),
                message,
            },
            span,
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.syntax(&[&tok.to_string()]))
        }
    }

    /// A non-keyword identifier.
    fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                Ok((s, self.bump().1))
            }
            _ => Err(self.syntax(&[what])),
        }
    }

    fn sort_ref(&mut self) -> PResult<SortName> {
        let (name, span) = self.ident("a sort name")?;
        let sort = SortName::plain(name);
        if !self.sorts.contains(&sort) {
            return Err(self.semantic(DiagnosticKind::UnknownSort, format!("sort {sort}"), span));
        }
        Ok(sort)
    }

    fn theory(&mut self) -> PResult<Theory> {
        let mut name = String::new();
        if self.is_keyword("theory") {
            self.bump();
            name = self.ident("a theory name")?.0;
        }
        if self.is_keyword("sorts") {
            self.bump();
            self.expect(Tok::Colon)?;
            self.sort_decls()?;
        }
        if self.is_keyword("relations") {
            self.bump();
            self.expect(Tok::Colon)?;
            self.relation_decls()?;
        }
        let mut axioms = Vec::new();
        let mut spans = HashMap::new();
        if self.is_keyword("axioms") {
            self.bump();
            self.expect(Tok::Colon)?;
            while *self.peek() != Tok::Eof {
                let (ax, span) = self.axiom()?;
                if spans.contains_key(&ax.label) {
                    return Err(self.semantic(
                        DiagnosticKind::DuplicateLabel,
                        format!("label {} reused", ax.label),
                        span,
                    ));
                }
                spans.insert(ax.label.clone(), span);
                axioms.push(ax);
            }
            self.label = None;
        }
        if *self.peek() != Tok::Eof {
            return Err(self.syntax(&["`sorts`", "`relations`", "`axioms`", "end of input"]));
        }
        let theory = Theory {
            name,
            sorts: std::mem::take(&mut self.sorts),
            relations: std::mem::take(&mut self.relations),
            axioms,
        };
        // Everything is checked above with spans; this is a safety net.
        let report = validate_theory(&theory);
        if let Some(d) = report.diagnostics.first() {
            let span = d
                .axiom
                .as_ref()
                .and_then(|l| spans.get(l))
                .copied()
                .unwrap_or(self.span());
            return Err(ParseError {
                kind: ParseErrorKind::Semantic {
                    kind: d.kind,
                    axiom: d.axiom.clone(),
                    message: d.detail.clone(),
                },
                span,
            });
        }
        Ok(theory)
    }

    fn at_section_end(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
            || ["relations", "axioms"].iter().any(|k| self.is_keyword(k))
    }

    fn sort_decls(&mut self) -> PResult<()> {
        if self.at_section_end() {
            return Ok(());
        }
        loop {
            let (name, span) = self.ident("a sort name")?;
            let sort = SortName::plain(name);
            if self.sorts.contains(&sort) {
                return Err(self.semantic(
                    DiagnosticKind::DuplicateSort,
                    format!("sort {sort} declared twice"),
                    span,
                ));
            }
            self.sorts.push(sort);
            if *self.peek() != Tok::Comma {
                return Ok(());
            }
            self.bump();
        }
    }

    fn relation_decls(&mut self) -> PResult<()> {
        if self.at_section_end() {
            return Ok(());
        }
        loop {
            let (name, span) = self.ident("a relation name")?;
            let mut signature = Vec::new();
            if *self.peek() == Tok::LParen {
                self.bump();
                if *self.peek() != Tok::RParen {
                    signature.push(self.sort_ref()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        signature.push(self.sort_ref()?);
                    }
                }
                self.expect(Tok::RParen)?;
            }
            let rel = RelationSymbol::new(name.as_str(), signature);
            if self.relations.iter().any(|r| r.name == rel.name) {
                return Err(self.semantic(
                    DiagnosticKind::DuplicateRelation,
                    format!("relation {name} declared twice"),
                    span,
                ));
            }
            self.relations.push(rel);
            if *self.peek() != Tok::Comma {
                return Ok(());
            }
            self.bump();
        }
    }

    fn axiom(&mut self) -> PResult<(Sequent, SourceSpan)> {
        let (label, label_span) = self.ident("an axiom label")?;
        self.label = Some(label.clone());
        self.expect(Tok::Colon)?;
        self.expect(Tok::LBrack)?;
        self.scope.clear();
        if *self.peek() != Tok::RBrack {
            loop {
                let (v, span) = self.ident("a variable")?;
                self.expect(Tok::Colon)?;
                let s = self.sort_ref()?;
                if self.scope.iter().any(|(w, _)| *w == v) {
                    return Err(self.semantic(
                        DiagnosticKind::DuplicateVariable,
                        format!("variable {v}"),
                        span,
                    ));
                }
                self.scope.push((v, s));
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBrack)?;
        let context = self.scope.clone();
        let premise = self.formula()?;
        self.expect(Tok::Arrow)?;
        let conclusion = self.formula()?;
        Ok((
            Sequent {
                label,
                context,
                premise,
                conclusion,
            },
            label_span,
        ))
    }

    fn formula(&mut self) -> PResult<Formula> {
        let first = self.conjunction()?;
        if *self.peek() != Tok::Bar {
            return Ok(first);
        }
        let mut parts = vec![first];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(Formula::Or(parts))
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let first = self.unary()?;
        if *self.peek() != Tok::Amp {
            return Ok(first);
        }
        let mut parts = vec![first];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(Formula::And(parts))
    }

    fn lookup(&self, v: &str, span: SourceSpan) -> PResult<SortName> {
        self.scope
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| {
                self.semantic(
                    DiagnosticKind::UnboundVariable,
                    format!("variable {v}"),
                    span,
                )
            })
    }

    fn unary(&mut self) -> PResult<Formula> {
        let start = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(Formula::bottom())
            }
            Tok::Ident(kw) if kw == "exists" => {
                self.bump();
                let (var, span) = self.ident("a variable")?;
                self.expect(Tok::Colon)?;
                let sort = self.sort_ref()?;
                self.expect(Tok::Dot)?;
                if self.scope.iter().any(|(w, _)| *w == var) {
                    return Err(self.semantic(
                        DiagnosticKind::Shadowing,
                        format!("{var} is already bound"),
                        span,
                    ));
                }
                self.scope.push((var.clone(), sort.clone()));
                let body = self.formula();
                self.scope.pop();
                Ok(Formula::Exists {
                    var,
                    sort,
                    body: Box::new(body?),
                })
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Equals => {
                let (lhs, lspan) = self.ident("a variable")?;
                self.bump();
                let (rhs, rspan) = self.ident("a variable")?;
                let ls = self.lookup(&lhs, lspan)?;
                let rs = self.lookup(&rhs, rspan)?;
                if ls != rs {
                    return Err(self.semantic(
                        DiagnosticKind::SortMismatch,
                        format!("{lhs} has sort {ls} but {rhs} has sort {rs}"),
                        join(lspan, rspan),
                    ));
                }
                Ok(Formula::Eq { sort: ls, lhs, rhs })
            }
            Tok::Ident(_) => self.atom(start),
            _ => Err(self.syntax(&["a formula"])),
        }
    }

    fn atom(&mut self, start: SourceSpan) -> PResult<Formula> {
        let (name, _) = self.ident("a relation name")?;
        let mut args = Vec::new();
        let mut end = start;
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                loop {
                    let (v, span) = self.ident("a variable")?;
                    if *self.peek() == Tok::LParen {
                        return Err(self.semantic(
                            DiagnosticKind::FunctionSymbol,
                            format!(
                                "`{v}(..)` applies a function symbol; encode it as a relation \
                                 with functionality and totality axioms"
                            ),
                            span,
                        ));
                    }
                    args.push((v, span));
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            end = self.expect(Tok::RParen)?;
        }
        let span = join(start, end);
        let rel = RelName::plain(name.as_str());
        let Some(sym) = self.relations.iter().find(|r| r.name == rel).cloned() else {
            return Err(self.semantic(DiagnosticKind::UnknownRelation, name, span));
        };
        if sym.arity() != args.len() {
            return Err(self.semantic(
                DiagnosticKind::ArityMismatch,
                format!(
                    "{name} expects {} arguments, found {}",
                    sym.arity(),
                    args.len()
                ),
                span,
            ));
        }
        for ((v, vspan), expected) in args.iter().zip(&sym.signature) {
            let s = self.lookup(v, *vspan)?;
            if s != *expected {
                return Err(self.semantic(
                    DiagnosticKind::SortMismatch,
                    format!("{v} has sort {s}, expected {expected}"),
                    *vspan,
                ));
            }
        }
        Ok(Formula::Atom {
            rel,
            args: args.into_iter().map(|(v, _)| v).collect(),
        })
    }
}

fn join(a: SourceSpan, b: SourceSpan) -> SourceSpan {
    SourceSpan {
        start: a.start,
        end: b.end.max(a.end),
        line: a.line,
        column: a.column,
    }
}

/// Parse and validate a theory.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sorts: Vec::new(),
        relations: Vec::new(),
        label: None,
        scope: Vec::new(),
    };
    p.theory()
}

/// Render a theory in the text format.
///
/// Conjunctions and disjunctions are expected to have at least two members
/// (the empty disjunction prints as `false`); this is the shape the parser
/// produces, and on such theories `parse_theory` inverts `render_theory`.
pub fn render_theory(t: &Theory) -> String {
    let mut out = String::new();
    if !t.name.is_empty() {
        out.push_str(&format!("theory {}\n", t.name));
    }
    let sorts: Vec<String> = t.sorts.iter().map(|s| s.to_string()).collect();
    push_section(&mut out, "sorts:", &sorts.join(", "));
    let rels: Vec<String> = t
        .relations
        .iter()
        .map(|r| {
            if r.signature.is_empty() {
                r.name.to_string()
            } else {
                let sig: Vec<String> = r.signature.iter().map(|s| s.to_string()).collect();
                format!("{}({})", r.name, sig.join(", "))
            }
        })
        .collect();
    push_section(&mut out, "relations:", &rels.join(", "));
    out.push_str("axioms:\n");
    for ax in &t.axioms {
        let ctx: Vec<String> = ax.context.iter().map(|(v, s)| format!("{v}:{s}")).collect();
        out.push_str(&format!(
            "  {}: [{}] {} => {}\n",
            ax.label,
            ctx.join(", "),
            render_formula(&ax.premise),
            render_formula(&ax.conclusion)
        ));
    }
    out
}

fn push_section(out: &mut String, head: &str, body: &str) {
    out.push_str(head);
    if !body.is_empty() {
        out.push(' ');
        out.push_str(body);
    }
    out.push('\n');
}

pub fn render_formula(f: &Formula) -> String {
    match f {
        Formula::Top => "true".into(),
        Formula::Or(fs) if fs.is_empty() => "false".into(),
        Formula::Or(fs) => fs
            .iter()
            .map(|g| match g {
                Formula::Or(inner) if !inner.is_empty() => format!("({})", render_formula(g)),
                Formula::Exists { .. } => format!("({})", render_formula(g)),
                _ => render_formula(g),
            })
            .collect::<Vec<_>>()
            .join(" | "),
        Formula::And(fs) => fs
            .iter()
            .map(|g| match g {
                Formula::Or(inner) if !inner.is_empty() => format!("({})", render_formula(g)),
                Formula::And(_) | Formula::Exists { .. } => format!("({})", render_formula(g)),
                _ => render_formula(g),
            })
            .collect::<Vec<_>>()
            .join(" & "),
        Formula::Atom { rel, args } if args.is_empty() => rel.to_string(),
        Formula::Atom { rel, args } => format!("{rel}({})", args.join(", ")),
        Formula::Eq { lhs, rhs, .. } => format!("{lhs} = {rhs}"),
        Formula::Exists { var, sort, body } => {
            format!("exists {var}:{sort}. {}", render_formula(body))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "sorts: X\nrelations: leq(X, X)\n";

    #[test]
    fn empty_sections() {
        let t = parse_theory("sorts:\nrelations:\naxioms:\n").unwrap();
        assert_eq!(t, Theory::default());
        assert_eq!(render_theory(&t), "sorts:\nrelations:\naxioms:\n");
    }

    #[test]
    fn arity_mismatch_points_at_the_atom() {
        let text = format!("{HEADER}axioms:\n bad: [x:X] true => leq(x)");
        let err = parse_theory(&text).unwrap_err();
        assert!(
            err.to_string().contains("arity mismatch at axiom bad"),
            "{err}"
        );
        assert_eq!(&text[err.span.start..err.span.end], "leq(x)");
        assert_eq!(err.span.line, 4);
    }

    #[test]
    fn precedence_and_grouping() {
        let text = format!("{HEADER}axioms:\n a: [x:X, y:X] leq(x,y) & leq(y,x) | x = y => exists z:X. leq(x,z) | leq(z,y)");
        let t = parse_theory(&text).unwrap();
        let ax = &t.axioms[0];
        assert!(
            matches!(&ax.premise, Formula::Or(parts) if parts.len() == 2 && matches!(parts[0], Formula::And(_)))
        );
        match &ax.conclusion {
            Formula::Exists { body, .. } => assert!(matches!(**body, Formula::Or(_))),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_theory(&render_theory(&t)).unwrap(), t);
    }

    #[test]
    fn parenthesized_nesting_is_kept() {
        let text = "relations: p, q, r\naxioms:\n a: [] (p & q) & r => (p | q) | r\n";
        let t = parse_theory(text).unwrap();
        assert!(matches!(&t.axioms[0].premise, Formula::And(v) if v.len() == 2));
        assert_eq!(parse_theory(&render_theory(&t)).unwrap(), t);
    }

    #[test]
    fn nullary_relations_both_spellings() {
        let t = parse_theory("relations: p(), q\naxioms:\n a: [] p() => q\n").unwrap();
        assert_eq!(t.relations[0].arity(), 0);
        assert_eq!(t.axioms[0].premise, Formula::atom("p", &[]));
    }

    #[test]
    fn semantic_errors_carry_spans() {
        let cases = [
            ("sorts: X\nrelations: r(Y)\n", "unknown sort"),
            (
                &format!("{HEADER}axioms:\n a: [x:X] leq(x, y) => true\n"),
                "unbound variable",
            ),
            (
                &format!("{HEADER}axioms:\n a: [x:X] exists x:X. true => true\n"),
                "shadow",
            ),
            (
                &format!("{HEADER}axioms:\n a: [x:X] leq(f(x), x) => true\n"),
                "function symbol",
            ),
            (
                &format!("{HEADER}axioms:\n a: [] true => true\n a: [] true => true\n"),
                "label",
            ),
            (
                "sorts: X, Y\nrelations:\naxioms:\n a: [x:X, y:Y] x = y => true\n",
                "sort mismatch",
            ),
        ];
        for (text, needle) in cases {
            let err = parse_theory(text).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "{err} should mention {needle}"
            );
            assert!(err.span.start <= err.span.end && err.span.end <= text.len());
        }
    }

    #[test]
    fn syntax_errors_report_expectations() {
        let err = parse_theory("sorts: X\naxioms:\n a: [x:X] true").unwrap_err();
        match err.kind {
            ParseErrorKind::Syntax { expected, found } => {
                assert_eq!(expected, vec!["`=>`".to_string()]);
                assert_eq!(found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_theory("sorts: X $").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_theory("# leading\nsorts: X # trailing\nrelations:\naxioms:\n").unwrap();
        assert_eq!(t.sorts.len(), 1);
    }
}
