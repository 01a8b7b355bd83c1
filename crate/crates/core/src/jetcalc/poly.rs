//! Differential polynomials in jet variables with holomorphic, antiholomorphic
//! and trigonometric coefficient symbols.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::exactlin::Scalar;

/// Direction of a total derivative on the cylinder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Tau,
    Sigma,
}

/// `∂_τ^tau ∂_σ^sigma x^field`, with `field` 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JetVar {
    pub field: usize,
    pub tau: u32,
    pub sigma: u32,
}

impl JetVar {
    pub fn new(field: usize, tau: u32, sigma: u32) -> Self {
        JetVar { field, tau, sigma }
    }

    pub fn x(field: usize) -> Self {
        JetVar::new(field, 0, 0)
    }

    pub fn order(&self) -> u32 {
        self.tau + self.sigma
    }

    pub fn bump(&self, dir: Dir) -> Self {
        match dir {
            Dir::Tau => JetVar::new(self.field, self.tau + 1, self.sigma),
            Dir::Sigma => JetVar::new(self.field, self.tau, self.sigma + 1),
        }
    }

    pub fn lower(&self, dir: Dir) -> Option<Self> {
        match dir {
            Dir::Tau if self.tau > 0 => Some(JetVar::new(self.field, self.tau - 1, self.sigma)),
            Dir::Sigma if self.sigma > 0 => Some(JetVar::new(self.field, self.tau, self.sigma - 1)),
            _ => None,
        }
    }
}

/// Coefficient functions of `z = τ + iσ`.
///
/// `Hol(k)` is `f^(k)(z)`, `AntiHol(k)` is `g^(k)(z̄)`, `Trig(m)` is `e^{imσ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "k")]
pub enum CoeffSymbol {
    Hol(u32),
    AntiHol(u32),
    Trig(i64),
}

/// A product of symbols and jet variables, without coefficient. Trigonometric
/// symbols are merged into a single mode.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    syms: BTreeMap<CoeffSymbol, u32>,
    mode: i64,
    vars: BTreeMap<JetVar, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        Monomial::one().with_var(v, 1)
    }

    pub fn symbol(s: CoeffSymbol) -> Self {
        let mut m = Monomial::one();
        m.push_symbol(s, 1);
        m
    }

    pub fn with_var(mut self, v: JetVar, power: u32) -> Self {
        self.add_var(v, power as i64);
        self
    }

    pub fn with_mode(mut self, mode: i64) -> Self {
        self.mode += mode;
        self
    }

    pub fn mode(&self) -> i64 {
        self.mode
    }

    pub fn vars(&self) -> &BTreeMap<JetVar, u32> {
        &self.vars
    }

    pub fn symbols(&self) -> &BTreeMap<CoeffSymbol, u32> {
        &self.syms
    }

    pub fn power(&self, v: &JetVar) -> u32 {
        self.vars.get(v).copied().unwrap_or(0)
    }

    /// Total number of jet-variable factors.
    pub fn degree(&self) -> u32 {
        self.vars.values().sum()
    }

    /// Sum of derivative orders over jet factors and symbol factors.
    pub fn weight(&self) -> u32 {
        let v: u32 = self.vars.iter().map(|(v, p)| v.order() * p).sum();
        let s: u32 = self
            .syms
            .iter()
            .map(|(s, p)| match s {
                CoeffSymbol::Hol(k) | CoeffSymbol::AntiHol(k) => k * p,
                CoeffSymbol::Trig(_) => 0,
            })
            .sum();
        v + s
    }

    pub fn max_order(&self) -> u32 {
        self.vars.keys().map(JetVar::order).max().unwrap_or(0)
    }

    pub fn has_bare_field(&self) -> bool {
        self.vars.keys().any(|v| v.order() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.syms.is_empty() && self.mode == 0 && self.vars.is_empty()
    }

    pub(crate) fn add_var(&mut self, v: JetVar, delta: i64) {
        let e = self.vars.entry(v).or_insert(0);
        let p = *e as i64 + delta;
        assert!(p >= 0, "negative power");
        if p == 0 {
            self.vars.remove(&v);
        } else {
            *e = p as u32;
        }
    }

    pub(crate) fn push_symbol(&mut self, s: CoeffSymbol, delta: i64) {
        if let CoeffSymbol::Trig(m) = s {
            self.mode += m * delta;
            return;
        }
        let e = self.syms.entry(s).or_insert(0);
        let p = *e as i64 + delta;
        assert!(p >= 0, "negative power");
        if p == 0 {
            self.syms.remove(&s);
        } else {
            *e = p as u32;
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (s, p) in &other.syms {
            m.push_symbol(*s, *p as i64);
        }
        m.mode += other.mode;
        for (v, p) in &other.vars {
            m.add_var(*v, *p as i64);
        }
        m
    }

    /// The monomial with its jet part removed.
    pub fn coefficient_part(&self) -> Monomial {
        Monomial {
            syms: self.syms.clone(),
            mode: self.mode,
            vars: BTreeMap::new(),
        }
    }

    /// Total derivative as a polynomial.
    pub fn derivative(&self, dir: Dir) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (s, p) in &self.syms {
            let (next, factor) = match (s, dir) {
                (CoeffSymbol::Hol(k), Dir::Tau) => (CoeffSymbol::Hol(k + 1), Scalar::one()),
                (CoeffSymbol::Hol(k), Dir::Sigma) => (CoeffSymbol::Hol(k + 1), Scalar::i()),
                (CoeffSymbol::AntiHol(k), Dir::Tau) => (CoeffSymbol::AntiHol(k + 1), Scalar::one()),
                (CoeffSymbol::AntiHol(k), Dir::Sigma) => {
                    (CoeffSymbol::AntiHol(k + 1), -Scalar::i())
                }
                (CoeffSymbol::Trig(_), _) => unreachable!("trig symbols are stored as a mode"),
            };
            let mut m = self.clone();
            m.push_symbol(*s, -1);
            m.push_symbol(next, 1);
            out.add_term(m, factor * Scalar::from_int(*p as i64));
        }
        if dir == Dir::Sigma && self.mode != 0 {
            out.add_term(self.clone(), Scalar::i() * Scalar::from_int(self.mode));
        }
        for (v, p) in &self.vars {
            let mut m = self.clone();
            m.add_var(*v, -1);
            m.add_var(v.bump(dir), 1);
            out.add_term(m, Scalar::from_int(*p as i64));
        }
        out
    }
}

/// Finite sum of monomials with Gaussian-rational coefficients, kept in
/// canonical form (merged, sorted, no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        DiffPoly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: JetVar) -> Self {
        DiffPoly::term(Monomial::var(v), Scalar::one())
    }

    pub fn symbol(s: CoeffSymbol) -> Self {
        DiffPoly::term(Monomial::symbol(s), Scalar::one())
    }

    pub fn trig(m: i64) -> Self {
        DiffPoly::term(Monomial::one().with_mode(m), Scalar::one())
    }

    /// `∂_z x^field = ½(∂_τ x − i∂_σ x)`.
    pub fn dz(field: usize) -> Self {
        let half = Scalar::from_ratio(1, 2);
        DiffPoly::var(JetVar::new(field, 1, 0)).scale(&half)
            - DiffPoly::var(JetVar::new(field, 0, 1)).scale(&(&half * &Scalar::i()))
    }

    /// `∂_z̄ x^field = ½(∂_τ x + i∂_σ x)`.
    pub fn dzb(field: usize) -> Self {
        let half = Scalar::from_ratio(1, 2);
        DiffPoly::var(JetVar::new(field, 1, 0)).scale(&half)
            + DiffPoly::var(JetVar::new(field, 0, 1)).scale(&(&half * &Scalar::i()))
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Self {
        let mut out = DiffPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.mul(m), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_derivative(&self, dir: Dir) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (k, v) in m.derivative(dir).terms {
                out.add_term(k, v * c);
            }
        }
        out
    }

    /// `D_dir^k`.
    pub fn total_derivative_n(&self, dir: Dir, k: u32) -> Self {
        (0..k).fold(self.clone(), |p, _| p.total_derivative(dir))
    }

    /// Partial derivative with respect to a jet variable.
    pub fn partial(&self, v: &JetVar) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let p = m.power(v);
            if p > 0 {
                let mut k = m.clone();
                k.add_var(*v, -1);
                out.add_term(k, c * &Scalar::from_int(p as i64));
            }
        }
        out
    }

    /// All jet variables that occur.
    pub fn variables(&self) -> Vec<JetVar> {
        let mut vs: Vec<JetVar> = self
            .terms
            .keys()
            .flat_map(|m| m.vars.keys().copied())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn max_order(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::max_order)
            .max()
            .unwrap_or(0)
    }

    /// Replaces each jet variable by a polynomial.
    pub fn substitute(&self, f: &dyn Fn(&JetVar) -> Option<DiffPoly>) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::term(m.coefficient_part(), c.clone());
            for (v, p) in &m.vars {
                let factor = f(v).unwrap_or_else(|| DiffPoly::var(*v));
                acc = &acc * &factor.pow(*p);
            }
            out = out + acc;
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Complex conjugation of coefficients together with `i ↦ −i` on the
    /// symbol algebra (holomorphic and antiholomorphic swapped, modes negated).
    pub fn conjugate(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut k = Monomial {
                syms: BTreeMap::new(),
                mode: -m.mode,
                vars: m.vars.clone(),
            };
            for (s, p) in &m.syms {
                let t = match s {
                    CoeffSymbol::Hol(j) => CoeffSymbol::AntiHol(*j),
                    CoeffSymbol::AntiHol(j) => CoeffSymbol::Hol(*j),
                    CoeffSymbol::Trig(j) => CoeffSymbol::Trig(-j),
                };
                k.push_symbol(t, *p as i64);
            }
            out.add_term(k, c.conj());
        }
        out
    }
}

impl From<Scalar> for DiffPoly {
    fn from(c: Scalar) -> Self {
        DiffPoly::constant(c)
    }
}

impl From<JetVar> for DiffPoly {
    fn from(v: JetVar) -> Self {
        DiffPoly::var(v)
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        self + (-rhs)
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymPow {
    family: SymFamily,
    order: u32,
    power: u32,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum SymFamily {
    Hol,
    Antihol,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarPow {
    field: usize,
    tau: u32,
    sigma: u32,
    power: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    coeff: Scalar,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    symbols: Vec<SymPow>,
    #[serde(default, skip_serializing_if = "is_zero_mode")]
    mode: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vars: Vec<VarPow>,
}

fn is_zero_mode(m: &i64) -> bool {
    *m == 0
}

impl Serialize for DiffPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.clone(),
                symbols: m
                    .syms
                    .iter()
                    .map(|(sym, p)| {
                        let (family, order) = match sym {
                            CoeffSymbol::Hol(k) => (SymFamily::Hol, *k),
                            CoeffSymbol::AntiHol(k) => (SymFamily::Antihol, *k),
                            CoeffSymbol::Trig(_) => unreachable!(),
                        };
                        SymPow {
                            family,
                            order,
                            power: *p,
                        }
                    })
                    .collect(),
                mode: m.mode,
                vars: m
                    .vars
                    .iter()
                    .map(|(v, p)| VarPow {
                        field: v.field,
                        tau: v.tau,
                        sigma: v.sigma,
                        power: *p,
                    })
                    .collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut out = DiffPoly::zero();
        for t in terms {
            let mut m = Monomial::one().with_mode(t.mode);
            for sp in t.symbols {
                let sym = match sp.family {
                    SymFamily::Hol => CoeffSymbol::Hol(sp.order),
                    SymFamily::Antihol => CoeffSymbol::AntiHol(sp.order),
                };
                m.push_symbol(sym, sp.power as i64);
            }
            for vp in t.vars {
                m.add_var(JetVar::new(vp.field, vp.tau, vp.sigma), vp.power as i64);
            }
            out.add_term(m, t.coeff);
        }
        Ok(out)
    }
}

/// `D_dir p`.
pub fn total_derivative(dir: Dir, p: &DiffPoly) -> DiffPoly {
    p.total_derivative(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xt() -> DiffPoly {
        DiffPoly::var(JetVar::new(0, 1, 0))
    }

    #[test]
    fn order_bump() {
        let x = DiffPoly::var(JetVar::x(0));
        assert_eq!(
            x.total_derivative(Dir::Sigma),
            DiffPoly::var(JetVar::new(0, 0, 1))
        );
    }

    #[test]
    fn leibniz_square() {
        let p = xt().pow(2);
        let want = (&xt() * &DiffPoly::var(JetVar::new(0, 2, 0))).scale(&Scalar::from_int(2));
        assert_eq!(p.total_derivative(Dir::Tau), want);
    }

    #[test]
    fn symbol_rules() {
        let f = DiffPoly::symbol(CoeffSymbol::Hol(0));
        let fp = DiffPoly::symbol(CoeffSymbol::Hol(1));
        assert_eq!(f.total_derivative(Dir::Tau), fp);
        assert_eq!(f.total_derivative(Dir::Sigma), fp.scale(&Scalar::i()));
        let g = DiffPoly::symbol(CoeffSymbol::AntiHol(0));
        assert_eq!(
            g.total_derivative(Dir::Sigma),
            DiffPoly::symbol(CoeffSymbol::AntiHol(1)).scale(&-Scalar::i())
        );
        let e = DiffPoly::trig(3);
        assert!(e.total_derivative(Dir::Tau).is_zero());
        assert_eq!(
            e.total_derivative(Dir::Sigma),
            e.scale(&Scalar::from_int(3)).scale(&Scalar::i())
        );
        assert_eq!(&DiffPoly::trig(2) * &DiffPoly::trig(-2), DiffPoly::one());
    }

    #[test]
    fn sigma_derivative_of_f_dz() {
        let f = DiffPoly::symbol(CoeffSymbol::Hol(0));
        let fp = DiffPoly::symbol(CoeffSymbol::Hol(1));
        let p = &f * &DiffPoly::dz(0);
        let want = (&fp * &DiffPoly::dz(0)).scale(&Scalar::i())
            + &f * &DiffPoly::dz(0).total_derivative(Dir::Sigma);
        assert_eq!(p.total_derivative(Dir::Sigma), want);
    }

    #[test]
    fn partial_and_substitute() {
        let p = xt().pow(3);
        assert_eq!(
            p.partial(&JetVar::new(0, 1, 0)),
            xt().pow(2).scale(&Scalar::from_int(3))
        );
        let q = p.substitute(&|v| (v.tau == 1).then(|| DiffPoly::constant(Scalar::from_int(2))));
        assert_eq!(q, DiffPoly::constant(Scalar::from_int(8)));
    }

    #[test]
    fn json_roundtrip() {
        let p = (&DiffPoly::symbol(CoeffSymbol::Hol(1)) * &DiffPoly::dz(0)).pow(2)
            + DiffPoly::trig(-3).scale(&Scalar::i());
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<DiffPoly>(&s).unwrap(), p);
    }

    #[test]
    fn conjugate_swaps_dz() {
        assert_eq!(DiffPoly::dz(0).conjugate(), DiffPoly::dzb(0));
    }
}
