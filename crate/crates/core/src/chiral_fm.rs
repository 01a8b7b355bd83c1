//! Isomorphism-class data of chiral and twisted differential operators on an
//! abelian variety with Lie algebra `g` and dual `ĝ`, and the transform
//! `F_μ` attached to a nondegenerate class `μ: g → ĝ`.
//!
//! A cdo class is a pair `(λ, ν)` with `λ ∈ (Λ³g)*` and `ν ∈ Hom(Λ²g, ĝ)`;
//! automorphisms of any object form the additive group `(Λ²g)*`. A tdo class is
//! a pair `(c, ω)` with `c ∈ Hom(g, ĝ)` and `ω ∈ (Λ²g)*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{alt_pullback, AltTensor, RationalMatrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdoIsoClass {
    pub n: usize,
    pub lambda: AltTensor,
    pub nu: AltTensor,
}

impl CdoIsoClass {
    pub fn new(lambda: AltTensor, nu: AltTensor) -> Result<Self> {
        let n = lambda.dim();
        if lambda.degree() != 3 || lambda.value_dim() != 1 {
            return Err(Error::DimensionMismatch(
                "lambda must be a scalar 3-form".into(),
            ));
        }
        if nu.degree() != 2 || nu.dim() != n || nu.value_dim() != n {
            return Err(Error::DimensionMismatch(
                "nu must be a 2-form on g with values in a space of the same dimension".into(),
            ));
        }
        Ok(CdoIsoClass { n, lambda, nu })
    }

    pub fn zero(n: usize) -> Self {
        CdoIsoClass {
            n,
            lambda: AltTensor::zero(3, n),
            nu: AltTensor::zero_valued(2, n, n),
        }
    }

    /// Re-validates shapes after deserialization.
    pub fn validated(self) -> Result<Self> {
        let c = CdoIsoClass::new(self.lambda, self.nu)?;
        if c.n != self.n {
            return Err(Error::DimensionMismatch(
                "n disagrees with tensor dims".into(),
            ));
        }
        Ok(c)
    }
}

/// Automorphism of a cdo class: an element `h` of `(Λ²g)*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdoMorphism {
    pub h: AltTensor,
}

impl CdoMorphism {
    pub fn new(h: AltTensor) -> Result<Self> {
        if h.degree() != 2 || h.value_dim() != 1 {
            return Err(Error::DimensionMismatch(
                "morphism must be a scalar 2-form".into(),
            ));
        }
        Ok(CdoMorphism { h })
    }

    pub fn identity(n: usize) -> Self {
        CdoMorphism {
            h: AltTensor::zero(2, n),
        }
    }

    /// Composition is addition in `(Λ²g)*`.
    pub fn compose(&self, other: &CdoMorphism) -> Result<CdoMorphism> {
        Ok(CdoMorphism {
            h: self.h.try_add(&other.h)?,
        })
    }

    pub fn inverse(&self) -> CdoMorphism {
        CdoMorphism {
            h: self.h.scale(&Scalar::from_int(-1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdoIsoClass {
    pub c: RationalMatrix,
    pub omega: AltTensor,
}

impl TdoIsoClass {
    pub fn new(c: RationalMatrix, omega: AltTensor) -> Result<Self> {
        if !c.is_square()
            || omega.degree() != 2
            || omega.dim() != c.cols()
            || omega.value_dim() != 1
        {
            return Err(Error::DimensionMismatch("tdo class shapes disagree".into()));
        }
        Ok(TdoIsoClass { c, omega })
    }

    pub fn zero(n: usize) -> Self {
        TdoIsoClass {
            c: RationalMatrix::zeros(n, n),
            omega: AltTensor::zero(2, n),
        }
    }
}

/// Invertible `μ ∈ Hom(g, ĝ)`, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegClass {
    mu: RationalMatrix,
    inv: RationalMatrix,
}

impl NondegClass {
    pub fn new(mu: RationalMatrix) -> Result<Self> {
        if !mu.is_square() {
            return Err(Error::DimensionMismatch("mu must be square".into()));
        }
        let inv = mu.inverse()?;
        Ok(NondegClass { mu, inv })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.mu
    }

    pub fn inverse_matrix(&self) -> &RationalMatrix {
        &self.inv
    }

    pub fn dim(&self) -> usize {
        self.mu.rows()
    }

    /// `μ⁻¹` regarded as a class `ĝ → g`.
    pub fn inverse(&self) -> NondegClass {
        NondegClass {
            mu: self.inv.clone(),
            inv: self.mu.clone(),
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "class on dim {n} transformed by mu of dim {}",
                self.dim()
            )));
        }
        Ok(())
    }
}

impl Serialize for NondegClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.mu.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NondegClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = RationalMatrix::deserialize(d)?;
        NondegClass::new(m).map_err(serde::de::Error::custom)
    }
}

/// The covector `z ↦ λ(x, y, z)`.
pub fn vertex_algebroid_pairing(lambda: &AltTensor, x: usize, y: usize) -> Result<Vec<Scalar>> {
    if lambda.degree() != 3 {
        return Err(Error::DimensionMismatch("pairing needs a 3-form".into()));
    }
    (0..lambda.dim())
        .map(|z| lambda.eval_scalar(&[x, y, z]))
        .collect()
}

/// `A ↦ −A⁻¹`.
pub fn fm_linear(a: &RationalMatrix) -> Result<RationalMatrix> {
    Ok(-a.inverse()?)
}

/// `(A, B) ↦ (−A⁻¹, A⁻¹BA⁻¹)`, the differential of [`fm_linear`].
pub fn fm_linear_differential(
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<(RationalMatrix, RationalMatrix)> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch("A and B differ in shape".into()));
    }
    let inv = a.inverse()?;
    let tangent = inv.try_mul(b)?.try_mul(&inv)?;
    Ok((-inv, tangent))
}

/// Transform of a cdo class: `λ` is pulled back along `μ⁻¹`, and
/// `ν ↦ μ⁻¹ ∘ ν ∘ Λ²μ⁻¹`.
pub fn fm_cdo(mu: &NondegClass, x: &CdoIsoClass) -> Result<CdoIsoClass> {
    mu.check_dim(x.n)?;
    let lambda = alt_pullback(3, &mu.mu, &x.lambda)?;
    let nu = x.nu.pullback(&mu.inv)?.map_values(&mu.inv)?;
    CdoIsoClass::new(lambda, nu)
}

pub fn fm_cdo_morphism(mu: &NondegClass, m: &CdoMorphism) -> Result<CdoMorphism> {
    mu.check_dim(m.h.dim())?;
    CdoMorphism::new(alt_pullback(2, &mu.mu, &m.h)?)
}

/// Transform of a tdo class: `c ↦ μ⁻¹ c μ⁻¹`, `ω` pulled back along `μ⁻¹`.
pub fn fm_tdo(mu: &NondegClass, x: &TdoIsoClass) -> Result<TdoIsoClass> {
    mu.check_dim(x.c.rows())?;
    let c = mu.inv.try_mul(&x.c)?.try_mul(&mu.inv)?;
    let omega = alt_pullback(2, &mu.mu, &x.omega)?;
    TdoIsoClass::new(c, omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e123() -> AltTensor {
        AltTensor::zero(3, 3)
            .with(&[0, 1, 2], vec![Scalar::one()])
            .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let zero = AltTensor::zero(3, 3);
        for x in 0..3 {
            for y in 0..3 {
                assert!(vertex_algebroid_pairing(&zero, x, y)
                    .unwrap()
                    .iter()
                    .all(Scalar::is_zero));
            }
        }
        let l = e123();
        assert_eq!(
            vertex_algebroid_pairing(&l, 0, 1).unwrap(),
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()]
        );
        assert!(vertex_algebroid_pairing(&l, 0, 0)
            .unwrap()
            .iter()
            .all(Scalar::is_zero));
        // skew symmetry in (x, y)
        for x in 0..3 {
            for y in 0..3 {
                let a = vertex_algebroid_pairing(&l, x, y).unwrap();
                let b = vertex_algebroid_pairing(&l, y, x).unwrap();
                assert!(a.iter().zip(&b).all(|(p, q)| (p + q).is_zero()));
            }
        }
        assert!(matches!(
            vertex_algebroid_pairing(&l, 0, 5),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn linear_examples() {
        let i2 = RationalMatrix::identity(2);
        assert_eq!(fm_linear(&i2).unwrap(), -&i2);
        let two = RationalMatrix::from_ints(&[&[2]]);
        assert_eq!(
            fm_linear(&two).unwrap(),
            RationalMatrix::diag(&[Scalar::from_ratio(-1, 2)])
        );
        let (a, b) = fm_linear_differential(&i2, &i2).unwrap();
        assert_eq!((a, b), (-&i2, i2.clone()));
        let (a, b) = fm_linear_differential(&two, &RationalMatrix::from_ints(&[&[3]])).unwrap();
        assert_eq!(a, RationalMatrix::diag(&[Scalar::from_ratio(-1, 2)]));
        assert_eq!(b, RationalMatrix::diag(&[Scalar::from_ratio(3, 4)]));
        assert_eq!(
            fm_linear(&RationalMatrix::zeros(2, 2)),
            Err(Error::SingularMatrix)
        );
        assert!(matches!(
            fm_linear_differential(&i2, &RationalMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn cdo_zero_and_hand_example() {
        let mu =
            NondegClass::new(RationalMatrix::diag(&[Scalar::one(), Scalar::from_int(2)])).unwrap();
        assert_eq!(
            fm_cdo(&mu, &CdoIsoClass::zero(2)).unwrap(),
            CdoIsoClass::zero(2)
        );
        // nu(e1 ∧ e2) = f1
        let nu = AltTensor::zero_valued(2, 2, 2)
            .with(&[0, 1], vec![Scalar::one(), Scalar::zero()])
            .unwrap();
        let x = CdoIsoClass::new(AltTensor::zero(3, 2), nu).unwrap();
        let y = fm_cdo(&mu, &x).unwrap();
        assert_eq!(
            y.nu.eval(&[0, 1]).unwrap(),
            vec![Scalar::from_ratio(1, 2), Scalar::zero()]
        );
        assert!(y.lambda.is_zero());
    }

    #[test]
    fn morphisms_scale_and_compose() {
        let h = AltTensor::zero(2, 3)
            .with(&[0, 2], vec![Scalar::from_int(5)])
            .unwrap();
        let m = CdoMorphism::new(h).unwrap();
        let s = Scalar::from_int(3);
        let mu = NondegClass::new(RationalMatrix::identity(3).scale(&s)).unwrap();
        let r = fm_cdo_morphism(&mu, &m).unwrap();
        assert_eq!(r.h.eval_scalar(&[0, 2]).unwrap(), Scalar::from_ratio(5, 9));
        assert_eq!(
            fm_cdo_morphism(&mu, &CdoMorphism::identity(3)).unwrap(),
            CdoMorphism::identity(3)
        );
        assert_eq!(m.compose(&m.inverse()).unwrap(), CdoMorphism::identity(3));
    }

    #[test]
    fn tdo_examples() {
        let mu =
            NondegClass::new(RationalMatrix::diag(&[Scalar::one(), Scalar::from_int(2)])).unwrap();
        assert_eq!(
            fm_tdo(&mu, &TdoIsoClass::zero(2)).unwrap(),
            TdoIsoClass::zero(2)
        );
        let x = TdoIsoClass::new(RationalMatrix::identity(2), AltTensor::zero(2, 2)).unwrap();
        assert_eq!(
            fm_tdo(&mu, &x).unwrap().c,
            RationalMatrix::diag(&[Scalar::one(), Scalar::from_ratio(1, 4)])
        );
        let x = TdoIsoClass::new(mu.matrix().clone(), AltTensor::zero(2, 2)).unwrap();
        assert_eq!(&fm_tdo(&mu, &x).unwrap().c, mu.inverse_matrix());
    }

    #[test]
    fn degenerate_mu_rejected() {
        assert_eq!(
            NondegClass::new(RationalMatrix::zeros(2, 2)),
            Err(Error::SingularMatrix)
        );
        let mu = NondegClass::new(RationalMatrix::identity(2)).unwrap();
        assert!(matches!(
            fm_cdo(&mu, &CdoIsoClass::zero(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn class_json_roundtrip() {
        let x = CdoIsoClass::new(e123(), AltTensor::zero_valued(2, 3, 3)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let back: CdoIsoClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back.validated().unwrap(), x);
        let mu = NondegClass::new(RationalMatrix::identity(2)).unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        assert_eq!(serde_json::from_str::<NondegClass>(&s).unwrap(), mu);
        assert!(serde_json::from_str::<NondegClass>(r#"[["0","0"],["0","0"]]"#).is_err());
    }
}
