//! Text presentations of graded monomial ideal rings.
//!
//! ```text
//! file        := ring_block ideal_block ;
//! ring_block  := "ring" "{" ["even" ":" varlist [";"]] ["odd" ":" varlist [";"]] "}" ;
//! varlist     := var ("," var)* ;   var := NAME ":" INT ;
//! ideal_block := "ideal" "{" [monomial (";" monomial)* [";"]] "}" ;
//! monomial    := factor ("*" factor)* ;   factor := NAME ["^" INT] ;
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::monomial::{Monomial, MonomialRing, VarRef, Variable, VariableTable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("integer `{0}` out of range")]
    IntegerRange(String),
    #[error("even variable `{name}` has odd degree {degree}")]
    EvenParity { name: String, degree: u32 },
    #[error("odd variable `{name}` has even degree {degree}")]
    OddParity { name: String, degree: u32 },
    #[error("variable `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("duplicate variable `{0}`")]
    Duplicate(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("odd variable `{name}` raised to exponent {exponent}; odd variables square to zero")]
    OddExponent { name: String, exponent: u32 },
    #[error("the unit monomial cannot be an ideal generator")]
    UnitGenerator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            {
                s.push(bump(&mut chars));
            }
            out.push(Spanned {
                tok: Tok::Name(s),
                line: l,
                column: col,
            });
        } else if c.is_ascii_digit() || c == '-' {
            let mut s = String::new();
            s.push(bump(&mut chars));
            while chars.peek().is_some_and(char::is_ascii_digit) {
                s.push(bump(&mut chars));
            }
            out.push(Spanned {
                tok: Tok::Int(s),
                line: l,
                column: col,
            });
        } else if "{}:;,*^".contains(c) {
            bump(&mut chars);
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: l,
                column: col,
            });
        } else {
            return Err(ParseError {
                line: l,
                column: col,
                kind: ParseErrorKind::BadChar(c),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

struct VarDecl {
    var: Variable,
    line: usize,
    column: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(t: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn unexpected(t: &Spanned, expected: &str) -> ParseError {
        Self::err_at(
            t,
            ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found: t.tok.to_string(),
            },
        )
    }

    fn expect_sym(&mut self, c: char) -> Result<Spanned, ParseError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(Self::unexpected(&t, &format!("`{c}`")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Name(s) if s == kw => Ok(()),
            _ => Err(Self::unexpected(&t, &format!("`{kw}`"))),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    /// `kw :` ahead?
    fn at_section(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Name(s) if s == kw)
            && self.toks.get(self.pos + 1).is_some_and(|t| t.tok == Tok::Sym(':'))
    }

    fn name(&mut self) -> Result<Spanned, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Name(_) => Ok(t),
            _ => Err(Self::unexpected(&t, "a name")),
        }
    }

    fn int(&mut self) -> Result<(i64, Spanned), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => s
                .parse::<i64>()
                .map(|v| (v, t.clone()))
                .map_err(|_| Self::err_at(&t, ParseErrorKind::IntegerRange(s.clone()))),
            _ => Err(Self::unexpected(&t, "an integer")),
        }
    }

    fn varlist(&mut self, even: bool) -> Result<Vec<VarDecl>, ParseError> {
        let mut out = Vec::new();
        loop {
            let name_tok = self.name()?;
            let Tok::Name(name) = name_tok.tok.clone() else { unreachable!() };
            self.expect_sym(':')?;
            let (deg, deg_tok) = self.int()?;
            if deg <= 0 {
                return Err(Self::err_at(&deg_tok, ParseErrorKind::NonPositiveDegree(name)));
            }
            let degree = u32::try_from(deg)
                .map_err(|_| Self::err_at(&deg_tok, ParseErrorKind::IntegerRange(deg.to_string())))?;
            if even && degree % 2 != 0 {
                return Err(Self::err_at(&deg_tok, ParseErrorKind::EvenParity { name, degree }));
            }
            if !even && degree % 2 == 0 {
                return Err(Self::err_at(&deg_tok, ParseErrorKind::OddParity { name, degree }));
            }
            out.push(VarDecl {
                var: Variable::new(name, degree),
                line: name_tok.line,
                column: name_tok.column,
            });
            if self.at_sym(',') {
                self.next();
            } else {
                return Ok(out);
            }
        }
    }

    fn ring_block(&mut self) -> Result<VariableTable, ParseError> {
        self.expect_keyword("ring")?;
        self.expect_sym('{')?;
        let mut even = Vec::new();
        let mut odd = Vec::new();
        if self.at_section("even") {
            self.next();
            self.next();
            even = self.varlist(true)?;
            // The separator may be dropped when no odd section follows.
            if self.at_sym(';') {
                self.next();
            } else if !self.at_sym('}') {
                let t = self.peek().clone();
                return Err(Self::unexpected(&t, "`;`"));
            }
        }
        if self.at_section("odd") {
            self.next();
            self.next();
            odd = self.varlist(false)?;
            if self.at_sym(';') {
                self.next();
            }
        }
        if !self.at_sym('}') {
            let t = self.peek().clone();
            let expected = if even.is_empty() && odd.is_empty() {
                "`even:`, `odd:` or `}`"
            } else {
                "`}`"
            };
            return Err(Self::unexpected(&t, expected));
        }
        self.next();

        let mut seen: HashMap<&str, ()> = HashMap::new();
        for d in even.iter().chain(odd.iter()) {
            if seen.insert(d.var.name.as_str(), ()).is_some() {
                return Err(ParseError {
                    line: d.line,
                    column: d.column,
                    kind: ParseErrorKind::Duplicate(d.var.name.clone()),
                });
            }
        }
        let table = VariableTable::new(
            even.into_iter().map(|d| d.var).collect(),
            odd.into_iter().map(|d| d.var).collect(),
        )
        .expect("declarations validated above");
        Ok(table)
    }

    fn monomial(&mut self, table: &VariableTable) -> Result<Monomial, ParseError> {
        let start = self.peek().clone();
        let mut even = vec![0u32; table.even_count()];
        let mut odd = vec![0u32; table.odd_count()];
        loop {
            let name_tok = self.name()?;
            let Tok::Name(name) = name_tok.tok.clone() else { unreachable!() };
            let var = table
                .lookup(&name)
                .ok_or_else(|| Self::err_at(&name_tok, ParseErrorKind::UnknownVariable(name.clone())))?;
            let mut exponent = 1u32;
            if self.at_sym('^') {
                self.next();
                let (e, e_tok) = self.int()?;
                exponent = u32::try_from(e)
                    .map_err(|_| Self::err_at(&e_tok, ParseErrorKind::IntegerRange(e.to_string())))?;
            }
            match var {
                VarRef::Even(i) => even[i] += exponent,
                VarRef::Odd(k) => {
                    odd[k] += exponent;
                    if odd[k] > 1 {
                        return Err(Self::err_at(
                            &name_tok,
                            ParseErrorKind::OddExponent {
                                name,
                                exponent: odd[k],
                            },
                        ));
                    }
                }
            }
            if self.at_sym('*') {
                self.next();
            } else {
                break;
            }
        }
        let support: Vec<usize> = (0..odd.len()).filter(|&k| odd[k] == 1).collect();
        let m = Monomial::new(even, table.odd_count(), &support);
        if m.is_one() {
            return Err(Self::err_at(&start, ParseErrorKind::UnitGenerator));
        }
        Ok(m)
    }

    fn ideal_block(&mut self, table: &VariableTable) -> Result<Vec<Monomial>, ParseError> {
        self.expect_keyword("ideal")?;
        self.expect_sym('{')?;
        let mut gens = Vec::new();
        while !self.at_sym('}') {
            gens.push(self.monomial(table)?);
            if self.at_sym(';') {
                self.next();
            } else if !self.at_sym('}') {
                let t = self.peek().clone();
                return Err(Self::unexpected(&t, "`;`, `*` or `}`"));
            }
        }
        self.next();
        Ok(gens)
    }
}

pub fn parse_presentation(text: &str) -> Result<MonomialRing, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let table = p.ring_block()?;
    let gens = p.ideal_block(&table)?;
    let end = p.next();
    if end.tok != Tok::Eof {
        return Err(Parser::unexpected(&end, "end of input"));
    }
    Ok(MonomialRing::new(table, gens).expect("generators validated while parsing"))
}

/// Renders a ring in the input grammar.
pub fn pretty_print(ring: &MonomialRing) -> String {
    let t = ring.table();
    let list = |vars: &[Variable]| {
        vars.iter()
            .map(|v| format!("{}:{}", v.name, v.degree))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut sections = Vec::new();
    if t.even_count() > 0 {
        let sep = if t.odd_count() > 0 { ";" } else { "" };
        sections.push(format!("even: {}{sep}", list(t.even())));
    }
    if t.odd_count() > 0 {
        sections.push(format!("odd: {}", list(t.odd())));
    }
    let ring_block = if sections.is_empty() {
        "ring { }".to_string()
    } else {
        format!("ring {{ {} }}", sections.join(" "))
    };
    let gens = ring.display_ideal();
    let ideal_block = if gens.is_empty() {
        "ideal { }".to_string()
    } else {
        format!("ideal {{ {} }}", gens.join("; "))
    };
    format!("{ring_block} {ideal_block}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x2y_ring() {
        let ring = parse_presentation("ring { even: x:4; odd: y:1 } ideal { x^2*y }").unwrap();
        assert_eq!(ring.table().even(), &[Variable::new("x", 4)]);
        assert_eq!(ring.table().odd(), &[Variable::new("y", 1)]);
        assert_eq!(ring.display_ideal(), vec!["x^2*y"]);
    }

    #[test]
    fn polynomial_ring() {
        let ring = parse_presentation("ring { even: x:2 } ideal { }").unwrap();
        assert!(ring.ideal().is_zero());
    }

    #[test]
    fn odd_square_rejected() {
        let err = parse_presentation("ring { odd: y:1 }\nideal { y^2 }").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 9);
        assert!(matches!(err.kind, ParseErrorKind::OddExponent { exponent: 2, .. }));
        let err = parse_presentation("ring { odd: y:1 } ideal { y*y }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::OddExponent { .. }));
    }

    #[test]
    fn error_kinds() {
        let cases = [
            ("ring { even: x:3 } ideal { }", "even variable `x` has odd degree 3"),
            ("ring { odd: y:2 } ideal { }", "odd variable `y` has even degree 2"),
            ("ring { even: x:0 } ideal { }", "must have positive degree"),
            ("ring { even: x:-2 } ideal { }", "must have positive degree"),
            ("ring { even: x:2, x:4 } ideal { }", "duplicate variable `x`"),
            ("ring { even: x:2; odd: x:1 } ideal { }", "duplicate variable `x`"),
            ("ring { even: x:2 } ideal { z }", "unknown variable `z`"),
            ("ring { even: x:2 } ideal { x^0 }", "unit monomial"),
            ("ring { even: x:2 } ideal { x", "expected `;`, `*` or `}`"),
            ("ideal { y^2 }", "expected `ring`"),
            ("ring { even: x:2 } ideal { x } extra", "expected end of input"),
            ("ring { even: x:2 } ideal { x $ }", "unexpected character `$`"),
        ];
        for (text, msg) in cases {
            let err = parse_presentation(text).unwrap_err();
            assert!(err.to_string().contains(msg), "{text}: {err}");
        }
    }

    #[test]
    fn positions() {
        let err = parse_presentation("ring {\n  even: x:2,\n        u:5;\n} ideal { }").unwrap_err();
        assert_eq!((err.line, err.column), (3, 11));
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# header\nring{even:x:4,z:2;odd:y:1,t:3;}   # trailing\nideal{x^2*y;z*t;x*z^3;}";
        let ring = parse_presentation(text).unwrap();
        assert_eq!(ring.ideal().generators().len(), 3);
    }

    #[test]
    fn repeated_factors_accumulate() {
        let a = parse_presentation("ring { even: x:2 } ideal { x*x^2 }").unwrap();
        let b = parse_presentation("ring { even: x:2 } ideal { x^3 }").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pretty_print_round_trip() {
        for text in [
            "ring { even: x:4; odd: y:1 } ideal { x^2*y }",
            "ring { even: x:2 } ideal { }",
            "ring { odd: y:3, u:1 } ideal { y*u }",
            "ring { } ideal { }",
        ] {
            let ring = parse_presentation(text).unwrap();
            assert_eq!(pretty_print(&ring), text);
            assert_eq!(parse_presentation(&pretty_print(&ring)).unwrap(), ring);
        }
    }
}
