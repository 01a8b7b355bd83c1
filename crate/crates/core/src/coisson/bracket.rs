//! Delta-function brackets of densities on the circle.
//!
//! Densities are polynomials in the jets `∂_σ^k x^i` (slot `tau = 0`) and
//! `∂_σ^k P_i` (slot `tau = 1`), where `P_i` is either a canonical momentum or
//! `∂_τ x^i`, depending on the table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{RationalMatrix, Scalar};
use crate::jetcalc::{poly_to_string, DiffPoly, Dir, JetVar};

/// A density `a(σ) dσ` in the variables `x^i`, `P_i` and their σ-jets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiffPoly", into = "DiffPoly")]
pub struct LocalDensity(DiffPoly);

impl LocalDensity {
    pub fn new(p: DiffPoly) -> Result<Self> {
        if let Some(v) = p.variables().into_iter().find(|v| v.tau > 1) {
            return Err(Error::DimensionMismatch(format!(
                "density depends on the τ-jet {}",
                crate::jetcalc::var_to_string(&v)
            )));
        }
        Ok(LocalDensity(p))
    }

    pub fn poly(&self) -> &DiffPoly {
        &self.0
    }

    pub fn into_poly(self) -> DiffPoly {
        self.0
    }

    pub fn zero() -> Self {
        LocalDensity(DiffPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `∂_σ` of the density.
    pub fn derivative(&self) -> Self {
        LocalDensity(self.0.total_derivative(Dir::Sigma))
    }

    pub fn max_field(&self) -> Option<usize> {
        self.0.variables().iter().map(|v| v.field).max()
    }
}

impl TryFrom<DiffPoly> for LocalDensity {
    type Error = Error;
    fn try_from(p: DiffPoly) -> Result<Self> {
        LocalDensity::new(p)
    }
}

impl From<LocalDensity> for DiffPoly {
    fn from(d: LocalDensity) -> DiffPoly {
        d.0
    }
}

impl std::fmt::Display for LocalDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", poly_to_string(&self.0))
    }
}

/// Generator brackets
/// `{P_i(σ), x^j(σ')} = pair_ij δ(σ−σ')` and
/// `{P_i(σ), P_j(σ')} = Σ_k h_ijk(x) ∂_σ x^k(σ') δ(σ−σ')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTable {
    n: usize,
    pair: RationalMatrix,
    /// Coefficients `h_ijk` for `i < j < k`, polynomials in the bare fields.
    #[serde(
        default,
        skip_serializing_if = "BTreeMap::is_empty",
        with = "twist_list"
    )]
    twist: BTreeMap<[usize; 3], DiffPoly>,
}

impl BracketTable {
    pub fn new(pair: RationalMatrix) -> Result<Self> {
        if !pair.is_square() {
            return Err(Error::DimensionMismatch(
                "pair matrix must be square".into(),
            ));
        }
        Ok(BracketTable {
            n: pair.rows(),
            pair,
            twist: BTreeMap::new(),
        })
    }

    /// `{p_i, x^j} = s δ_ij δ`.
    pub fn canonical(n: usize, sign: Scalar) -> Self {
        BracketTable::new(RationalMatrix::identity(n).scale(&sign)).expect("square")
    }

    /// The table on `(x, ∂_τ x)` induced by `{p_i, x^j} = s δ_ij δ` through
    /// `p = i g(∂_τ x) + B(∂_σ x)`; the B-field does not enter.
    pub fn sigma_model(g: &RationalMatrix, sign: Scalar) -> Result<Self> {
        let ginv = g.inverse()?;
        BracketTable::new(ginv.scale(&(-Scalar::i() * sign)))
    }

    /// Adds the twist coefficient `h_ijk = h` (extended antisymmetrically).
    pub fn with_twist(mut self, idx: [usize; 3], h: DiffPoly) -> Result<Self> {
        let [i, j, k] = idx;
        if i >= self.n || j >= self.n || k >= self.n {
            return Err(Error::DimensionMismatch("twist index out of range".into()));
        }
        if h.variables()
            .iter()
            .any(|v| v.order() > 0 || v.field >= self.n)
        {
            return Err(Error::DimensionMismatch(
                "twist coefficients must be polynomials in the fields".into(),
            ));
        }
        let mut s = [i, j, k];
        let mut sign = 1;
        for a in 0..3 {
            for b in 0..2 - a {
                if s[b] > s[b + 1] {
                    s.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if s[0] == s[1] || s[1] == s[2] {
            return Err(Error::NotAntisymmetric);
        }
        let h = if sign < 0 { -h } else { h };
        let e = self.twist.entry(s).or_default();
        *e = &*e + &h;
        self.twist.retain(|_, p| !p.is_zero());
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair(&self) -> &RationalMatrix {
        &self.pair
    }

    pub fn is_twisted(&self) -> bool {
        !self.twist.is_empty()
    }

    /// `h_ijk` with antisymmetric signs.
    pub fn twist(&self, i: usize, j: usize, k: usize) -> DiffPoly {
        let mut s = [i, j, k];
        let mut sign = 1;
        for a in 0..3 {
            for b in 0..2 - a {
                if s[b] > s[b + 1] {
                    s.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        match self.twist.get(&s) {
            Some(p) if sign > 0 => p.clone(),
            Some(p) => -p,
            None => DiffPoly::zero(),
        }
    }

    /// Bracket of two undifferentiated generators, as the coefficient of `δ`.
    fn generator_bracket(&self, u: &JetVar, v: &JetVar) -> DiffPoly {
        match (u.tau, v.tau) {
            (1, 0) => DiffPoly::constant(self.pair[(u.field, v.field)].clone()),
            (0, 1) => DiffPoly::constant(-self.pair[(v.field, u.field)].clone()),
            (1, 1) if self.is_twisted() => {
                let mut out = DiffPoly::zero();
                for k in 0..self.n {
                    let h = self.twist(u.field, v.field, k);
                    if !h.is_zero() {
                        out = out + &h * &DiffPoly::var(JetVar::new(k, 0, 1));
                    }
                }
                out
            }
            _ => DiffPoly::zero(),
        }
    }
}

mod twist_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Entry {
        idx: [usize; 3],
        coeff: DiffPoly,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<[usize; 3], DiffPoly>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        m.iter()
            .map(|(idx, p)| Entry {
                idx: *idx,
                coeff: p.clone(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<[usize; 3], DiffPoly>, D::Error> {
        let list = Vec::<Entry>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for e in list {
            let mut s = e.idx;
            s.sort();
            if s != e.idx || s[0] == s[1] || s[1] == s[2] {
                return Err(serde::de::Error::custom(
                    "twist indices must be strictly increasing",
                ));
            }
            out.insert(s, e.coeff);
        }
        Ok(out)
    }
}

/// `Σ_r c_r(σ') ∂_σ^r δ(σ−σ')`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaExpansion {
    coeffs: BTreeMap<u32, DiffPoly>,
}

impl DeltaExpansion {
    pub fn zero() -> Self {
        DeltaExpansion::default()
    }

    pub fn delta(c: DiffPoly) -> Self {
        let mut e = DeltaExpansion::zero();
        e.add(0, c);
        e
    }

    pub fn add(&mut self, r: u32, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(r).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    pub fn add_expansion(&mut self, other: DeltaExpansion) {
        for (r, c) in other.coeffs {
            self.add(r, c);
        }
    }

    pub fn coeff(&self, r: u32) -> DiffPoly {
        self.coeffs.get(&r).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&u32, &DiffPoly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `∂_σ` applied to the distribution.
    fn d_sigma(&self, k: u32) -> Self {
        DeltaExpansion {
            coeffs: self
                .coeffs
                .iter()
                .map(|(r, c)| (r + k, c.clone()))
                .collect(),
        }
    }

    /// `∂_σ'(c ∂^r δ) = c' ∂^r δ − c ∂^{r+1} δ`.
    fn d_sigma_prime(&self) -> Self {
        let mut out = DeltaExpansion::zero();
        for (r, c) in &self.coeffs {
            out.add(*r, c.total_derivative(Dir::Sigma));
            out.add(r + 1, -c);
        }
        out
    }

    fn mul_right(&self, b: &DiffPoly) -> Self {
        let mut out = DeltaExpansion::zero();
        for (r, c) in &self.coeffs {
            out.add(*r, c * b);
        }
        out
    }

    /// Multiplication by `a(σ)`, transported to `σ'`:
    /// `a(σ) ∂^r δ = Σ_j binom(r,j) (−1)^j a^(j)(σ') ∂^{r−j} δ`.
    fn mul_left(&self, a: &DiffPoly) -> Self {
        let mut out = DeltaExpansion::zero();
        let top = self.coeffs.keys().max().copied().unwrap_or(0);
        let mut derivs = vec![a.clone()];
        for j in 1..=top {
            let next = derivs[j as usize - 1].total_derivative(Dir::Sigma);
            derivs.push(next);
        }
        for (r, c) in &self.coeffs {
            let mut binom = Scalar::one();
            for j in 0..=*r {
                let sign = if j % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                out.add(r - j, (&derivs[j as usize] * c).scale(&(&binom * &sign)));
                binom = binom * Scalar::from_ratio((r - j) as i64, (j + 1) as i64);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(r, c)| {
                let d = match r {
                    0 => "delta".to_string(),
                    1 => "ds.delta".to_string(),
                    _ => format!("ds^{r}.delta"),
                };
                format!("({}) {d}", poly_to_string(c))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `{a(σ)dσ, b(σ')dσ'}` by the Leibniz rule in both slots.
pub fn density_bracket(a: &LocalDensity, b: &LocalDensity, t: &BracketTable) -> DeltaExpansion {
    let mut out = DeltaExpansion::zero();
    let avars = a.0.variables();
    let bvars = b.0.variables();
    for u in &avars {
        let da = a.0.partial(u);
        let base_u = JetVar::new(u.field, u.tau, 0);
        for v in &bvars {
            let base_v = JetVar::new(v.field, v.tau, 0);
            let g = t.generator_bracket(&base_u, &base_v);
            if g.is_zero() {
                continue;
            }
            let db = b.0.partial(v);
            let mut e = DeltaExpansion::delta(g);
            for _ in 0..v.sigma {
                e = e.d_sigma_prime();
            }
            e = e.d_sigma(u.sigma);
            e = e.mul_right(&db).mul_left(&da);
            out.add_expansion(e);
        }
    }
    out
}

/// `{∫H, a}` as a density: the `δ`-coefficient of `{H(σ), a(σ')}`.
pub fn hamiltonian_flow(h: &LocalDensity, a: &LocalDensity, t: &BracketTable) -> LocalDensity {
    LocalDensity(density_bracket(h, a, t).coeff(0))
}
