//! Expression grammar for densities and generators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | 'i' | (prefix '.')* base
//! prefix := 'dt' | 'ds' | 'dz' | 'dzb'
//! base   := 'x'k | 'p'k | 'f' 'p'* | 'g' 'p'* | 'e(' int ')' | '(' expr ')'
//! ```
//!
//! Prefixes are total derivatives, `dz = ½(dt − i ds)` and `dzb = ½(dt + i ds)`.
//! `pk` is the jet slot `dt.xk`, used for momenta in bracket tables.

use num_bigint::BigInt;

use super::poly::{CoeffSymbol, DiffPoly, Dir, JetVar};
use super::variational::Generator;
use crate::error::{Error, Result};
use crate::exactlin::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer;

impl Lexer {
    fn run(text: &str) -> Result<Vec<(usize, Tok)>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            if c.is_whitespace() {
                k += 1;
            } else if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push((start, Tok::Num(s.parse().expect("digits"))));
            } else if c.is_ascii_alphabetic() {
                let start = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push((start, Tok::Ident(chars[start..k].iter().collect())));
            } else if "+-*/^().".contains(c) {
                out.push((k, Tok::Sym(c)));
                k += 1;
            } else {
                return Err(Error::parse(
                    format!("column {}", k + 1),
                    format!("unexpected `{c}`"),
                ));
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    n: Option<usize>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        let col = self
            .toks
            .get(self.pos)
            .map_or(self.text.chars().count(), |(c, _)| *c);
        Error::parse(format!("column {}", col + 1), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
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
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .ok_or_else(|| self.err("divisor must be a constant"))?;
                let inv = c.inv().map_err(|_| self.err("division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<DiffPoly> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let e: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn field_index(&self, digits: &str) -> Result<usize> {
        let k: usize = digits
            .parse()
            .map_err(|_| self.err(format!("bad field index `{digits}`")))?;
        if k == 0 {
            return Err(self.err("field indices start at 1"));
        }
        if let Some(n) = self.n {
            if k > n {
                return Err(self.err(format!("field {k} out of range 1..{n}")));
            }
        }
        Ok(k - 1)
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(DiffPoly::constant(Scalar::from_rational(
                    Rational::from_integer(k),
                )))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Sym('.')) {
                    let op: fn(&DiffPoly) -> DiffPoly = match id.as_str() {
                        "dt" => |p| p.total_derivative(Dir::Tau),
                        "ds" => |p| p.total_derivative(Dir::Sigma),
                        "dz" => |p| {
                            let h = Scalar::from_ratio(1, 2);
                            (p.total_derivative(Dir::Tau)
                                - p.total_derivative(Dir::Sigma).scale(&Scalar::i()))
                            .scale(&h)
                        },
                        "dzb" => |p| {
                            let h = Scalar::from_ratio(1, 2);
                            (p.total_derivative(Dir::Tau)
                                + p.total_derivative(Dir::Sigma).scale(&Scalar::i()))
                            .scale(&h)
                        },
                        _ => return Err(self.err(format!("unknown derivative prefix `{id}`"))),
                    };
                    self.pos += 1;
                    let inner = self.atom()?;
                    return Ok(op(&inner));
                }
                self.ident(&id)
            }
            Some(t) => Err(self.err(format!("unexpected {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident(&mut self, id: &str) -> Result<DiffPoly> {
        if id == "i" {
            return Ok(DiffPoly::constant(Scalar::i()));
        }
        if id == "e" {
            self.expect('(')?;
            let neg = self.eat('-');
            let m = match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    i64::try_from(k).map_err(|_| self.err("mode too large"))?
                }
                _ => return Err(self.err("expected an integer mode")),
            };
            self.expect(')')?;
            return Ok(DiffPoly::trig(if neg { -m } else { m }));
        }
        let (head, rest) = id.split_at(1);
        match head {
            "x" if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => {
                Ok(DiffPoly::var(JetVar::x(self.field_index(rest)?)))
            }
            "p" if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => {
                Ok(DiffPoly::var(JetVar::new(self.field_index(rest)?, 1, 0)))
            }
            "f" | "g" if rest.chars().all(|c| c == 'p') => {
                let k = rest.len() as u32;
                let s = if head == "f" {
                    CoeffSymbol::Hol(k)
                } else {
                    CoeffSymbol::AntiHol(k)
                };
                Ok(DiffPoly::symbol(s))
            }
            _ => {
                self.pos -= 1;
                Err(self.err(format!("unknown identifier `{id}`")))
            }
        }
    }
}

/// Parses a differential polynomial; `n` bounds the field indices if given.
pub fn parse_poly(text: &str, n: Option<usize>) -> Result<DiffPoly> {
    let toks = Lexer::run(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        n,
        text,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Named generators `dt`, `ds`, `dx<k>`, `fdz`, `gdzb`, or `;`-separated
/// components `F_1; ...; F_n`.
pub fn parse_generator(text: &str, n: usize) -> Result<Generator> {
    let t = text.trim();
    match t {
        "dt" => return Ok(Generator::translation(n, Dir::Tau)),
        "ds" => return Ok(Generator::translation(n, Dir::Sigma)),
        "fdz" => return Ok(Generator::holomorphic(n)),
        "gdzb" => return Ok(Generator::antiholomorphic(n)),
        _ => {}
    }
    if let Some(k) = t.strip_prefix("dx") {
        if let Ok(k) = k.parse::<usize>() {
            if k == 0 || k > n {
                return Err(Error::parse(
                    "generator",
                    format!("field {k} out of range 1..{n}"),
                ));
            }
            return Ok(Generator::shift(n, k - 1));
        }
    }
    let parts: Vec<&str> = t.split(';').collect();
    if parts.len() != n {
        return Err(Error::parse(
            "generator",
            format!(
                "expected {n} `;`-separated components, found {}",
                parts.len()
            ),
        ));
    }
    parts
        .iter()
        .enumerate()
        .map(|(k, s)| {
            parse_poly(s, Some(n)).map_err(|e| match e {
                Error::Parse { location, message } => {
                    Error::parse(format!("component {}, {location}", k + 1), message)
                }
                e => e,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Generator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::print::poly_to_string;

    #[test]
    fn parses_jets_and_symbols() {
        let p = parse_poly("i/2*(dt.x1^2 + ds.x1^2)", Some(1)).unwrap();
        assert_eq!(poly_to_string(&p), "1/2*i*ds.x1^2 + 1/2*i*dt.x1^2");
        assert_eq!(parse_poly("dz.x1", None).unwrap(), DiffPoly::dz(0));
        assert_eq!(parse_poly("dzb.x2", None).unwrap(), DiffPoly::dzb(1));
        assert_eq!(
            parse_poly("ds.f", None).unwrap(),
            DiffPoly::symbol(CoeffSymbol::Hol(1)).scale(&Scalar::i())
        );
        assert_eq!(parse_poly("e(-3)*e(3)", None).unwrap(), DiffPoly::one());
        assert_eq!(
            parse_poly("p2", None).unwrap(),
            DiffPoly::var(JetVar::new(1, 1, 0))
        );
    }

    #[test]
    fn printed_text_reparses() {
        for s in [
            "(1/2 - 3*i)*fpp*e(4)*dt.ds.x1^2 - gp*x2",
            "-i*ds.ds.x1 + 7/3",
            "0",
        ] {
            let p = parse_poly(s, None).unwrap();
            assert_eq!(parse_poly(&poly_to_string(&p), None).unwrap(), p);
        }
    }

    #[test]
    fn errors_have_locations() {
        let e = parse_poly("x1 + y", None).unwrap_err();
        assert_eq!(e, Error::parse("column 6", "unknown identifier `y`"));
        assert!(parse_poly("x3", Some(2)).unwrap_err().is_parse());
        assert!(parse_poly("x1/x1", None).unwrap_err().is_parse());
        assert!(parse_poly("(x1", None).unwrap_err().is_parse());
    }

    #[test]
    fn generators() {
        assert_eq!(
            parse_generator("dt", 2).unwrap(),
            Generator::translation(2, Dir::Tau)
        );
        assert_eq!(parse_generator("dx2", 2).unwrap(), Generator::shift(2, 1));
        let g = parse_generator("dt.x1; 0", 2).unwrap();
        assert_eq!(g.0[1], DiffPoly::zero());
        assert!(parse_generator("dt.x1", 2).is_err());
    }
}
