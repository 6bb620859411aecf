//! A small expression language for opens, resolved against a presentation.
//!
//! ```text
//! open    := meet ("|" meet)*
//! meet    := atom ("&" atom)*
//! atom    := "true" | "false" | "(" open ")" | literal
//! literal := NAME ["(" INT ("," INT)* ")"]      relation, e.g. leq1(1,2) or p
//!          | "per" [DIGIT] "." SORT "(" INT "," INT ")"
//!          | ISO "." SORT "(" INT ")" "=" INT     ISO is alpha, beta or gamma
//! ```
//!
//! A trailing digit on a relation name selects a copy when the name without
//! it is a relation of the presentation.

use crate::error::{Error, Result};
use crate::open::{Generator, Index, Open};
use crate::presentation::FramePresentation;
use crate::theory::{CopyTag, IsoTag};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(usize),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if "|&().,=".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().map_err(|_| Error::Expression {
                offset: start,
                message: "integer too large".into(),
            })?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            out.push((start, Tok::Name(src[start..i].to_string())));
        } else {
            return Err(Error::Expression {
                offset: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    target: &'a FramePresentation,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expression {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<Index> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                if n >= self.target.k() {
                    return Err(Error::IndexOutOfRange {
                        index: n,
                        k: self.target.k(),
                    });
                }
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("expected an index"),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Name(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected a name"),
        }
    }

    fn open(&mut self) -> Result<Open> {
        let mut acc = self.meet()?;
        while self.eat('|') {
            acc = acc.join(&self.meet()?);
        }
        Ok(acc)
    }

    fn meet(&mut self) -> Result<Open> {
        let mut acc = self.atom()?;
        while self.eat('&') {
            acc = acc.meet(&self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Open> {
        if self.eat('(') {
            let o = self.open()?;
            self.expect(')')?;
            return Ok(o);
        }
        let name = self.name()?;
        match name.as_str() {
            "true" => return Ok(Open::top()),
            "false" => return Ok(Open::bottom()),
            _ => {}
        }
        if self.eat('.') {
            let sort = self.name()?;
            self.expect('(')?;
            let first = self.int()?;
            if let Some(tag) = IsoTag::from_name(&name) {
                self.expect(')')?;
                self.expect('=')?;
                let to = self.int()?;
                return self.resolve(vec![Generator::iso(tag, &sort, first, to)], &name);
            }
            self.expect(',')?;
            let second = self.int()?;
            self.expect(')')?;
            let copy = match name.strip_prefix("per") {
                Some("") => None,
                Some(d) => match d.parse().ok().and_then(CopyTag::from_number) {
                    Some(c) => Some(c),
                    None => return Err(Error::UnknownGenerator(name)),
                },
                None => return Err(Error::UnknownGenerator(name)),
            };
            return self.resolve(vec![Generator::per(&sort, copy, first, second)], &name);
        }
        let mut args = Vec::new();
        if self.eat('(') {
            args.push(self.int()?);
            while self.eat(',') {
                args.push(self.int()?);
            }
            self.expect(')')?;
        }
        let mut candidates = vec![Generator::rel(&name, None, &args)];
        let mut chars = name.chars();
        if let Some(copy) = chars
            .next_back()
            .and_then(|d| d.to_digit(10))
            .and_then(|d| CopyTag::from_number(d as u8))
        {
            candidates.push(Generator::rel(chars.as_str(), Some(copy), &args));
        }
        self.resolve(candidates, &name)
    }

    fn resolve(&self, candidates: Vec<Generator>, name: &str) -> Result<Open> {
        candidates
            .iter()
            .find(|g| self.target.contains(g))
            .map(|g| Open::generator(g.clone()))
            .ok_or_else(|| {
                Error::UnknownGenerator(
                    candidates
                        .first()
                        .map_or(name.to_string(), |g| g.to_string()),
                )
            })
    }
}

/// Parse `src` as an open of `target`.
pub fn parse_open(src: &str, target: &FramePresentation) -> Result<Open> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
        target,
    };
    let o = p.open()?;
    if p.pos < p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::groupoid::build_groupoid;
    use crate::presentation::IndexSet;

    fn arrows(k: usize) -> FramePresentation {
        build_groupoid(&corpus::linear_order(), IndexSet::new(k).unwrap())
            .unwrap()
            .arrows
            .as_ref()
            .clone()
    }

    #[test]
    fn literals_resolve() {
        let a = arrows(3);
        assert_eq!(
            parse_open("leq1(1,2)", &a).unwrap().to_string(),
            "leq1(1,2)"
        );
        assert_eq!(
            parse_open("alpha.X(1)=2", &a).unwrap().to_string(),
            "alpha.X(1)=2"
        );
        assert_eq!(
            parse_open("per2.X(0,0)", &a).unwrap().to_string(),
            "per2.X(0,0)"
        );
        let o = parse_open("(leq1(0,1) | leq2(1,0)) & per1.X(0,0)", &a).unwrap();
        assert_eq!(o.basics().len(), 2);
        assert!(parse_open("true", &a).unwrap().is_top());
        assert!(parse_open("false | false", &a).unwrap().is_bottom());
    }

    #[test]
    fn errors() {
        let a = arrows(2);
        assert!(matches!(
            parse_open("leq(0,1)", &a),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            parse_open("leq1(0,2)", &a),
            Err(Error::IndexOutOfRange { index: 2, k: 2 })
        ));
        assert!(matches!(
            parse_open("leq1(0,1", &a),
            Err(Error::Expression { offset: 8, .. })
        ));
        assert!(matches!(
            parse_open("leq1(0,1) $", &a),
            Err(Error::Expression { offset: 10, .. })
        ));
        assert!(matches!(
            parse_open("beta.X(0)=0", &a),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn nullary_and_digit_names() {
        let t = crate::parse_theory("relations: p, q2").unwrap();
        let g = build_groupoid(&t, IndexSet::new(1).unwrap()).unwrap();
        assert_eq!(parse_open("p", &g.objects).unwrap().to_string(), "p");
        assert_eq!(parse_open("q2", &g.objects).unwrap().to_string(), "q2");
        assert_eq!(parse_open("q22", &g.arrows).unwrap().to_string(), "q22");
        assert_eq!(
            parse_open("p1 & p2", &g.arrows).unwrap().basics()[0].len(),
            2
        );
    }
}
