//! Text rendering in the grammar accepted by [`super::parse`].

use num_traits::{One, Signed, Zero};

use super::form::{Horiz, VariationalForm};
use super::poly::{CoeffSymbol, DiffPoly, JetVar, Monomial};
use crate::exactlin::{Rational, Scalar};

fn rat_text(r: &Rational) -> String {
    Scalar::from_rational(r.clone()).to_string()
}

/// Splits a coefficient into a sign and an unsigned text (`None` for 1).
fn signed_coeff(c: &Scalar) -> (bool, Option<String>) {
    if c.im.is_zero() {
        let a = c.re.abs();
        (c.re.is_negative(), (!a.is_one()).then(|| rat_text(&a)))
    } else if c.re.is_zero() {
        let a = c.im.abs();
        let t = if a.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rat_text(&a))
        };
        (c.im.is_negative(), Some(t))
    } else {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        let a = c.im.abs();
        let im = if a.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rat_text(&a))
        };
        (
            false,
            Some(format!("({} {} {})", rat_text(&c.re), sign, im)),
        )
    }
}

pub fn var_to_string(v: &JetVar) -> String {
    let mut s = String::new();
    for _ in 0..v.tau {
        s.push_str("dt.");
    }
    for _ in 0..v.sigma {
        s.push_str("ds.");
    }
    s.push_str(&format!("x{}", v.field + 1));
    s
}

fn symbol_to_string(s: &CoeffSymbol) -> String {
    match s {
        CoeffSymbol::Hol(k) => format!("f{}", "p".repeat(*k as usize)),
        CoeffSymbol::AntiHol(k) => format!("g{}", "p".repeat(*k as usize)),
        CoeffSymbol::Trig(m) => format!("e({m})"),
    }
}

fn with_power(base: String, p: u32) -> String {
    if p == 1 {
        base
    } else {
        format!("{base}^{p}")
    }
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (s, p) in m.symbols() {
        out.push(with_power(symbol_to_string(s), *p));
    }
    if m.mode() != 0 {
        out.push(symbol_to_string(&CoeffSymbol::Trig(m.mode())));
    }
    for (v, p) in m.vars() {
        out.push(with_power(var_to_string(v), *p));
    }
    out
}

pub fn poly_to_string(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let (neg, coeff) = signed_coeff(c);
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut parts: Vec<String> = coeff.into_iter().collect();
        parts.extend(monomial_factors(m));
        if parts.is_empty() {
            parts.push("1".into());
        }
        s.push_str(&parts.join("*"));
    }
    s
}

fn horiz_text(h: Horiz) -> Option<&'static str> {
    match h {
        Horiz::One => None,
        Horiz::Dt => Some("dt"),
        Horiz::Ds => Some("ds"),
        Horiz::DtDs => Some("dt^ds"),
    }
}

/// `(P) del(x1) ds + ...`, one summand per nonzero component.
pub fn form_to_string(f: &VariationalForm) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.components()
        .map(|((u, h), p)| {
            let mut parts = vec![format!("({})", poly_to_string(p))];
            parts.extend(u.iter().map(|v| format!("del({})", var_to_string(v))));
            parts.extend(horiz_text(*h).map(String::from));
            parts.join(" ")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
