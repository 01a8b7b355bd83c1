//! Torus sigma models `R^n / L` with metric `g` and B-field, their sectors
//! and the structure of the vertex algebra spectrum.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::unit::UnitScalar;
use crate::error::{Error, Result};
use crate::exactlin::{RationalMatrix, Scalar};

/// How the circle radius is given for one-dimensional models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSpec {
    /// `2πR = r`.
    Rational(Scalar),
    /// `2πR = r·u` with `u` a formal unit, standing in for a generic radius.
    Formal(Scalar),
}

/// The data `(n, g, B, L)`. Lattice vectors carry the factor `u^unit_power`
/// and dual lattice vectors `u^-unit_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeModel {
    n: usize,
    g: RationalMatrix,
    b: RationalMatrix,
    lbasis: RationalMatrix,
    lstar: RationalMatrix,
    ginv: RationalMatrix,
    unit_power: i32,
}

fn is_real_matrix(m: &RationalMatrix) -> bool {
    m.entries().all(|s| s.is_real())
}

/// Validate and build a model. `lbasis` holds a basis of `L` in its columns.
pub fn build_model(
    n: usize,
    g: RationalMatrix,
    b: RationalMatrix,
    lbasis: RationalMatrix,
) -> Result<LatticeModel> {
    build_model_with_unit(n, g, b, lbasis, 0)
}

pub fn build_model_with_unit(
    n: usize,
    g: RationalMatrix,
    b: RationalMatrix,
    lbasis: RationalMatrix,
    unit_power: i32,
) -> Result<LatticeModel> {
    for (name, m) in [("g", &g), ("B", &b), ("L", &lbasis)] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if !g.is_symmetric() || !is_real_matrix(&g) {
        return Err(Error::NotPositiveDefinite);
    }
    if g.leading_minors()?.iter().any(|m| !m.re.is_positive()) {
        return Err(Error::NotPositiveDefinite);
    }
    if !b.is_antisymmetric() || !is_real_matrix(&b) {
        return Err(Error::NotAntisymmetric);
    }
    if !is_real_matrix(&lbasis) {
        return Err(Error::SingularLattice);
    }
    let linv = lbasis.inverse().map_err(|_| Error::SingularLattice)?;
    let lstar = linv.transpose();
    let ginv = g.inverse()?;
    Ok(LatticeModel {
        n,
        g,
        b,
        lbasis,
        lstar,
        ginv,
        unit_power,
    })
}

/// The circle of radius `R` with `g = 1`, `B = 0`, `L = 2πR·Z`.
pub fn one_dim_model(radius: &RadiusSpec) -> Result<LatticeModel> {
    let (r, p) = match radius {
        RadiusSpec::Rational(r) => (r, 0),
        RadiusSpec::Formal(r) => (r, 1),
    };
    let one = RationalMatrix::identity(1);
    build_model_with_unit(
        1,
        one,
        RationalMatrix::zeros(1, 1),
        RationalMatrix::diag(std::slice::from_ref(r)),
        p,
    )
}

impl LatticeModel {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn g(&self) -> &RationalMatrix {
        &self.g
    }
    pub fn g_inverse(&self) -> &RationalMatrix {
        &self.ginv
    }
    pub fn b(&self) -> &RationalMatrix {
        &self.b
    }
    pub fn lattice_basis(&self) -> &RationalMatrix {
        &self.lbasis
    }
    pub fn dual_basis(&self) -> &RationalMatrix {
        &self.lstar
    }
    pub fn unit_power(&self) -> i32 {
        self.unit_power
    }

    /// `lstar^T lbasis`, which is the identity for a valid model.
    pub fn duality_certificate(&self) -> RationalMatrix {
        self.lstar
            .transpose()
            .try_mul(&self.lbasis)
            .expect("square")
    }

    /// The radius, for one-dimensional models built from a radius.
    pub fn radius(&self) -> Option<RadiusSpec> {
        if self.n != 1 || !self.g.is_symmetric() || self.g[(0, 0)] != Scalar::one() {
            return None;
        }
        let r = self.lbasis[(0, 0)].clone();
        match self.unit_power {
            0 => Some(RadiusSpec::Rational(r)),
            1 => Some(RadiusSpec::Formal(r)),
            _ => None,
        }
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    fn embed(&self, basis: &RationalMatrix, coords: &[i64], power: i32) -> Vec<UnitScalar> {
        (0..self.n)
            .map(|r| {
                let c: Scalar = (0..self.n)
                    .map(|k| &basis[(r, k)] * &Scalar::from_int(coords[k]))
                    .sum();
                UnitScalar::monomial(c, power)
            })
            .collect()
    }

    pub fn lattice_vector(&self, coords: &[i64]) -> Vec<UnitScalar> {
        self.embed(&self.lbasis, coords, self.unit_power)
    }

    pub fn dual_vector(&self, coords: &[i64]) -> Vec<UnitScalar> {
        self.embed(&self.lstar, coords, -self.unit_power)
    }

    /// Integer coordinates of `v` in the given basis, if `v` lies in its span over `Z`.
    fn coordinates(
        &self,
        v: &[UnitScalar],
        basis: &RationalMatrix,
        power: i32,
    ) -> Result<Vec<i64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {}",
                v.len()
            )));
        }
        let mut plain = Vec::with_capacity(self.n);
        for x in v {
            let c = x.coeff(power);
            if &UnitScalar::monomial(c.clone(), power) != x {
                return Err(Error::NotInLattice);
            }
            plain.push(c);
        }
        let coords = basis.inverse()?.apply(&plain)?;
        coords
            .iter()
            .map(|c| {
                c.as_integer()
                    .and_then(|i| i64::try_from(i).ok())
                    .ok_or(Error::NotInLattice)
            })
            .collect()
    }

    pub fn lattice_coordinates(&self, v: &[UnitScalar]) -> Result<Vec<i64>> {
        self.coordinates(v, &self.lbasis, self.unit_power)
    }

    pub fn dual_coordinates(&self, v: &[UnitScalar]) -> Result<Vec<i64>> {
        self.coordinates(v, &self.lstar, -self.unit_power)
    }

    /// `B(l)_j = b_ij l^i`.
    pub(crate) fn b_of(&self, l: &[UnitScalar]) -> Vec<UnitScalar> {
        mat_apply(&self.b.transpose(), l)
    }

    pub(crate) fn g_of(&self, l: &[UnitScalar]) -> Vec<UnitScalar> {
        mat_apply(&self.g, l)
    }

    pub(crate) fn ginv_of(&self, a: &[UnitScalar]) -> Vec<UnitScalar> {
        mat_apply(&self.ginv, a)
    }

    /// `g^-1(a, b)` for covectors.
    pub fn inverse_pairing(&self, a: &[UnitScalar], b: &[UnitScalar]) -> UnitScalar {
        dot(&self.ginv_of(a), b)
    }
}

pub(crate) fn mat_apply(m: &RationalMatrix, v: &[UnitScalar]) -> Vec<UnitScalar> {
    (0..m.rows())
        .map(|r| (0..m.cols()).fold(UnitScalar::zero(), |acc, c| &acc + &v[c].scale(&m[(r, c)])))
        .collect()
}

pub(crate) fn dot(a: &[UnitScalar], b: &[UnitScalar]) -> UnitScalar {
    a.iter()
        .zip(b)
        .fold(UnitScalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

fn combine(a: &[UnitScalar], b: &[UnitScalar], sign: i64) -> Vec<UnitScalar> {
    let s = Scalar::from_int(sign);
    a.iter().zip(b).map(|(x, y)| x + &y.scale(&s)).collect()
}

fn halve(v: &[UnitScalar]) -> Vec<UnitScalar> {
    v.iter()
        .map(|x| x.scale(&Scalar::from_ratio(1, 2)))
        .collect()
}

/// The joint eigenvalue of the two Hamiltonian-flow generators on the
/// eigenfunction labelled by `(l, l*)`: `½(g⁻¹(l* − B(l)) − l, g⁻¹(l* − B(l)) + l)`,
/// as vectors.
pub fn spectrum_point(
    model: &LatticeModel,
    l: &[UnitScalar],
    lstar: &[UnitScalar],
) -> Result<(Vec<UnitScalar>, Vec<UnitScalar>)> {
    model.lattice_coordinates(l)?;
    model.dual_coordinates(lstar)?;
    let v = model.ginv_of(&combine(lstar, &model.b_of(l), -1));
    Ok((halve(&combine(&v, l, -1)), halve(&combine(&v, l, 1))))
}

/// A sector `V_{a+} ⊗ V_{a-}` labelled by lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub l: Vec<i64>,
    pub lstar: Vec<i64>,
    pub a_plus: Vec<UnitScalar>,
    pub a_minus: Vec<UnitScalar>,
    pub h: UnitScalar,
    pub hbar: UnitScalar,
    #[serde(skip)]
    model: u64,
}

impl Sector {
    pub fn new(model: &LatticeModel, l: &[i64], lstar: &[i64]) -> Result<Sector> {
        if l.len() != model.n || lstar.len() != model.n {
            return Err(Error::DimensionMismatch("sector coordinates".into()));
        }
        let lv = model.lattice_vector(l);
        let ls = model.dual_vector(lstar);
        let c = combine(&model.b_of(&lv), &ls, -1);
        let gl = model.g_of(&lv);
        let a_plus = combine(&c, &gl, 1);
        let a_minus = combine(&c, &gl, -1);
        let quarter = Scalar::from_ratio(-1, 4);
        let h = model.inverse_pairing(&a_plus, &a_plus).scale(&quarter);
        let hbar = model.inverse_pairing(&a_minus, &a_minus).scale(&quarter);
        Ok(Sector {
            l: l.to_vec(),
            lstar: lstar.to_vec(),
            a_plus,
            a_minus,
            h,
            hbar,
            model: model.fingerprint(),
        })
    }

    /// `(½a+, ½a-)`, the labels used for circle targets.
    pub fn labels(&self) -> (Vec<UnitScalar>, Vec<UnitScalar>) {
        (halve(&self.a_plus), halve(&self.a_minus))
    }

    pub fn norm(&self) -> u64 {
        self.l
            .iter()
            .chain(&self.lstar)
            .map(|c| c.unsigned_abs())
            .sum()
    }

    pub fn spin(&self) -> UnitScalar {
        &self.h - &self.hbar
    }

    fn check(&self, model: &LatticeModel) -> Result<()> {
        if self.model != model.fingerprint() {
            return Err(Error::ModelMismatch);
        }
        Ok(())
    }
}

fn integer_points(dim: usize, budget: u64, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if cur.len() == dim {
        out.push(cur.clone());
        return;
    }
    let used: u64 = cur.iter().map(|c| c.unsigned_abs()).sum();
    let left = (budget - used) as i64;
    for c in -left..=left {
        cur.push(c);
        integer_points(dim, budget, out, cur);
        cur.pop();
    }
}

/// All sectors whose coordinates `(l, l*)` have L1 norm at most `cutoff`,
/// ordered by norm and then coordinates.
pub fn enumerate_sectors(model: &LatticeModel, cutoff: u64) -> Vec<Sector> {
    let mut pts = Vec::new();
    integer_points(2 * model.n, cutoff, &mut pts, &mut Vec::new());
    let mut sectors: Vec<Sector> = pts
        .iter()
        .map(|p| Sector::new(model, &p[..model.n], &p[model.n..]).expect("dimensions match"))
        .collect();
    sectors.sort_by(|a, b| (a.norm(), &a.l, &a.lstar).cmp(&(b.norm(), &b.l, &b.lstar)));
    sectors
}

/// Exponents of `(z−w)` and `(z̄−w̄)` in the product of the two vertex operators.
pub fn vertex_exponents(
    model: &LatticeModel,
    s1: &Sector,
    s2: &Sector,
) -> Result<(UnitScalar, UnitScalar)> {
    s1.check(model)?;
    s2.check(model)?;
    let half = Scalar::from_ratio(-1, 2);
    Ok((
        model.inverse_pairing(&s1.a_plus, &s2.a_plus).scale(&half),
        model.inverse_pairing(&s1.a_minus, &s2.a_minus).scale(&half),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityEntry {
    pub l1: Vec<i64>,
    pub lstar1: Vec<i64>,
    pub l2: Vec<i64>,
    pub lstar2: Vec<i64>,
    pub hol: UnitScalar,
    pub antihol: UnitScalar,
    pub difference: UnitScalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub cutoff: u64,
    pub pairs: usize,
    pub all_integral: bool,
    /// Pairs whose exponent difference is not an integer.
    pub failures: Vec<LocalityEntry>,
}

/// Checks that the holomorphic and antiholomorphic exponents differ by an
/// integer for every pair of sectors within the cutoff.
pub fn ko_locality(model: &LatticeModel, cutoff: u64) -> LocalityReport {
    let sectors = enumerate_sectors(model, cutoff);
    let raised: Vec<_> = sectors
        .iter()
        .map(|s| (model.ginv_of(&s.a_plus), model.ginv_of(&s.a_minus)))
        .collect();
    let half = Scalar::from_ratio(-1, 2);
    let fast = IntegerPairing::new(&sectors, &raised);
    let mut failures = Vec::new();
    for (i, s1) in sectors.iter().enumerate() {
        for (j, s2) in sectors.iter().enumerate() {
            if fast.as_ref().and_then(|f| f.integral(i, j)) == Some(true) {
                continue;
            }
            let hol = dot(&raised[i].0, &s2.a_plus).scale(&half);
            let antihol = dot(&raised[i].1, &s2.a_minus).scale(&half);
            let difference = &hol - &antihol;
            if !difference.is_integer() {
                failures.push(LocalityEntry {
                    l1: s1.l.clone(),
                    lstar1: s1.lstar.clone(),
                    l2: s2.l.clone(),
                    lstar2: s2.lstar.clone(),
                    hol,
                    antihol,
                    difference,
                });
            }
        }
    }
    LocalityReport {
        cutoff,
        pairs: sectors.len() * sectors.len(),
        all_integral: failures.is_empty(),
        failures,
    }
}

/// Exponent numerators over a common denominator, for rational models.
/// `hol - antihol = -(P_i·A_j - Q_i·B_j) / (2 d)` with integer vectors.
struct IntegerPairing {
    raised: Vec<(Vec<i128>, Vec<i128>)>,
    weights: Vec<(Vec<i128>, Vec<i128>)>,
    modulus: i128,
}

impl IntegerPairing {
    fn new(sectors: &[Sector], raised: &[(Vec<UnitScalar>, Vec<UnitScalar>)]) -> Option<Self> {
        fn denominators(vs: &[&[UnitScalar]]) -> Option<i128> {
            let mut d = 1i128;
            for v in vs {
                for x in v.iter() {
                    let x = x.as_scalar()?;
                    if !x.is_real() {
                        return None;
                    }
                    d = d.lcm(&x.re.denom().to_i128()?);
                }
            }
            Some(d)
        }
        fn scaled(v: &[UnitScalar], d: i128) -> Option<Vec<i128>> {
            v.iter()
                .map(|x| {
                    let x = x.as_scalar()?;
                    (x.re.numer().to_i128()?).checked_mul(d / x.re.denom().to_i128()?)
                })
                .collect()
        }
        let r: Vec<&[UnitScalar]> = raised.iter().flat_map(|(p, m)| [&p[..], &m[..]]).collect();
        let w: Vec<&[UnitScalar]> = sectors
            .iter()
            .flat_map(|s| [&s.a_plus[..], &s.a_minus[..]])
            .collect();
        let (d1, d2) = (denominators(&r)?, denominators(&w)?);
        let raised = raised
            .iter()
            .map(|(p, m)| Some((scaled(p, d1)?, scaled(m, d1)?)))
            .collect::<Option<_>>()?;
        let weights = sectors
            .iter()
            .map(|s| Some((scaled(&s.a_plus, d2)?, scaled(&s.a_minus, d2)?)))
            .collect::<Option<_>>()?;
        let modulus = d1.checked_mul(d2)?.checked_mul(2)?;
        Some(IntegerPairing {
            raised,
            weights,
            modulus,
        })
    }

    /// `None` on overflow.
    fn integral(&self, i: usize, j: usize) -> Option<bool> {
        let dot = |a: &[i128], b: &[i128]| {
            a.iter()
                .zip(b)
                .try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
        };
        let hol = dot(&self.raised[i].0, &self.weights[j].0)?;
        let anti = dot(&self.raised[i].1, &self.weights[j].1)?;
        Some(hol.checked_sub(anti)? % self.modulus == 0)
    }
}

/// The T-dual model `(g, 0, g⁻¹(L*))`. A sector `(l, l*)` corresponds to the
/// dual sector with the coordinates swapped.
pub fn t_dual(model: &LatticeModel) -> Result<LatticeModel> {
    if !model.b.is_zero() {
        return Err(Error::BFieldUnsupported);
    }
    let lbasis = model.ginv.try_mul(&model.lstar)?;
    build_model_with_unit(
        model.n,
        model.g.clone(),
        model.b.clone(),
        lbasis,
        -model.unit_power,
    )
}

pub fn dual_sector(dual: &LatticeModel, s: &Sector) -> Sector {
    Sector::new(dual, &s.lstar, &s.l).expect("dimensions match")
}

/// Sectors within the cutoff with `a- = 0`, i.e. the purely holomorphic part.
pub fn chiral_sectors(model: &LatticeModel, cutoff: u64) -> Vec<Sector> {
    enumerate_sectors(model, cutoff)
        .into_iter()
        .filter(|s| s.a_minus.iter().all(UnitScalar::is_zero))
        .collect()
}

/// Serialized model: either the full data or a circle radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ModelFile {
    Radius {
        radius_unit: Scalar,
    },
    FormalRadius {
        radius_formal: Scalar,
    },
    Full {
        n: usize,
        g: RationalMatrix,
        #[serde(rename = "B")]
        b: RationalMatrix,
        #[serde(rename = "L")]
        l: RationalMatrix,
        #[serde(default, skip_serializing_if = "is_zero_power")]
        unit_power: i32,
    },
}

fn is_zero_power(p: &i32) -> bool {
    *p == 0
}

impl ModelFile {
    pub fn build(&self) -> Result<LatticeModel> {
        match self {
            ModelFile::Radius { radius_unit } => {
                one_dim_model(&RadiusSpec::Rational(radius_unit.clone()))
            }
            ModelFile::FormalRadius { radius_formal } => {
                one_dim_model(&RadiusSpec::Formal(radius_formal.clone()))
            }
            ModelFile::Full {
                n,
                g,
                b,
                l,
                unit_power,
            } => build_model_with_unit(*n, g.clone(), b.clone(), l.clone(), *unit_power),
        }
    }

    /// The most compact description of `model`.
    pub fn describe(model: &LatticeModel) -> ModelFile {
        match model.radius() {
            Some(RadiusSpec::Rational(r)) => ModelFile::Radius { radius_unit: r },
            Some(RadiusSpec::Formal(r)) => ModelFile::FormalRadius { radius_formal: r },
            None => ModelFile::Full {
                n: model.n,
                g: model.g.clone(),
                b: model.b.clone(),
                l: model.lbasis.clone(),
                unit_power: model.unit_power,
            },
        }
    }
}
