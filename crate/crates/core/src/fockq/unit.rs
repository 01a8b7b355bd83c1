//! Laurent polynomials in a formal unit `u`, used for radii that are not
//! rational multiples of `1/2π`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// `Σ_p c_p u^p` with finitely many nonzero `c_p`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitScalar {
    terms: BTreeMap<i32, Scalar>,
}

impl UnitScalar {
    pub fn zero() -> Self {
        UnitScalar::default()
    }

    pub fn monomial(c: Scalar, power: i32) -> Self {
        let mut t = UnitScalar::zero();
        t.add_term(power, c);
        t
    }

    pub fn from_scalar(c: Scalar) -> Self {
        UnitScalar::monomial(c, 0)
    }

    fn add_term(&mut self, p: i32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: i32) -> Scalar {
        self.terms.get(&p).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The value, when no power of `u` occurs.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.as_scalar().is_some_and(|s| s.as_integer().is_some())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = UnitScalar::zero();
        for (p, c) in &self.terms {
            out.add_term(*p, c * s);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &Scalar)> {
        self.terms.iter()
    }
}

impl From<Scalar> for UnitScalar {
    fn from(s: Scalar) -> Self {
        UnitScalar::from_scalar(s)
    }
}

impl Add<&UnitScalar> for &UnitScalar {
    type Output = UnitScalar;
    fn add(self, rhs: &UnitScalar) -> UnitScalar {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(*p, c.clone());
        }
        out
    }
}

impl Sub<&UnitScalar> for &UnitScalar {
    type Output = UnitScalar;
    fn sub(self, rhs: &UnitScalar) -> UnitScalar {
        self + &(-rhs)
    }
}

impl Neg for &UnitScalar {
    type Output = UnitScalar;
    fn neg(self) -> UnitScalar {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul<&UnitScalar> for &UnitScalar {
    type Output = UnitScalar;
    fn mul(self, rhs: &UnitScalar) -> UnitScalar {
        let mut out = UnitScalar::zero();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.add_term(p + q, a * b);
            }
        }
        out
    }
}

impl fmt::Display for UnitScalar {
    /// Terms from the highest power down, e.g. `1/2*u^2 + -3 + 5*u^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(p, c)| {
                if *p == 0 {
                    c.to_string()
                } else {
                    format!("{c}*u^{p}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for UnitScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = UnitScalar::zero();
        for part in s.split(" + ") {
            let (c, p) = match part.split_once("*u^") {
                Some((c, p)) => (
                    c,
                    p.trim()
                        .parse::<i32>()
                        .map_err(|_| Error::parse(format!("`{s}`"), "bad power of u"))?,
                ),
                None => (part, 0),
            };
            out.add_term(p, c.parse()?);
        }
        Ok(out)
    }
}

impl Serialize for UnitScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for UnitScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
