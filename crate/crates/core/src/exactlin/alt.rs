//! Alternating multilinear forms, optionally vector-valued.
//!
//! Storage holds only strictly increasing index tuples; evaluation on any
//! other tuple goes through the sign of the sorting permutation.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::RationalMatrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AltTensor {
    degree: usize,
    dim: usize,
    value_dim: usize,
    entries: BTreeMap<Vec<usize>, Vec<Scalar>>,
}

/// Sorts `idx` in place; returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in 0..idx.len() - 1 - a {
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// All strictly increasing `k`-tuples drawn from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl AltTensor {
    /// Scalar-valued zero form of the given degree on an `dim`-dimensional space.
    pub fn zero(degree: usize, dim: usize) -> Self {
        Self::zero_valued(degree, dim, 1)
    }

    /// Zero form with values in a `value_dim`-dimensional space.
    pub fn zero_valued(degree: usize, dim: usize, value_dim: usize) -> Self {
        AltTensor {
            degree,
            dim,
            value_dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored (strictly increasing) keys with their values.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<Scalar>)> {
        self.entries.iter()
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "index of length {} for degree {}",
                idx.len(),
                self.degree
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "index {bad} >= dim {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Sets the value on `idx` (any order); antisymmetry fixes the other orderings.
    pub fn set(&mut self, idx: &[usize], value: Vec<Scalar>) -> Result<()> {
        self.check_index(idx)?;
        if value.len() != self.value_dim {
            return Err(Error::DimensionMismatch(format!(
                "value of length {} for value dim {}",
                value.len(),
                self.value_dim
            )));
        }
        let mut key = idx.to_vec();
        let Some(sign) = sort_with_sign(&mut key) else {
            if value.iter().all(Scalar::is_zero) {
                return Ok(());
            }
            return Err(Error::DimensionMismatch(
                "repeated index in alternating form".into(),
            ));
        };
        let value: Vec<Scalar> = if sign < 0 {
            value.iter().map(|v| -v).collect()
        } else {
            value
        };
        if value.iter().all(Scalar::is_zero) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    pub fn set_scalar(&mut self, idx: &[usize], value: Scalar) -> Result<()> {
        self.set(idx, vec![value])
    }

    pub fn with(mut self, idx: &[usize], value: Vec<Scalar>) -> Result<Self> {
        self.set(idx, value)?;
        Ok(self)
    }

    /// Value on an arbitrary index tuple (zero on a repeated index).
    pub fn eval(&self, idx: &[usize]) -> Result<Vec<Scalar>> {
        self.check_index(idx)?;
        let mut key = idx.to_vec();
        let zero = vec![Scalar::zero(); self.value_dim];
        let Some(sign) = sort_with_sign(&mut key) else {
            return Ok(zero);
        };
        Ok(match self.entries.get(&key) {
            Some(v) if sign < 0 => v.iter().map(|x| -x).collect(),
            Some(v) => v.clone(),
            None => zero,
        })
    }

    /// Scalar value of a scalar-valued form.
    pub fn eval_scalar(&self, idx: &[usize]) -> Result<Scalar> {
        Ok(self.eval(idx)?.swap_remove(0))
    }

    /// `t ↦ t(map·w₁, …, map·w_k)`; `map` sends the new space into the old one.
    ///
    /// Each coefficient is a sum of `k × k` minors of `map` weighted by the
    /// stored coefficients.
    pub fn pullback(&self, map: &RationalMatrix) -> Result<Self> {
        if map.rows() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "map with {} rows pulled back along form on dim {}",
                map.rows(),
                self.dim
            )));
        }
        let mut out = AltTensor::zero_valued(self.degree, map.cols(), self.value_dim);
        for target in increasing_tuples(map.cols(), self.degree) {
            let mut acc = vec![Scalar::zero(); self.value_dim];
            for (key, val) in &self.entries {
                let minor = map.submatrix(key, &target).determinant()?;
                if minor.is_zero() {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(val) {
                    *a += &(v * &minor);
                }
            }
            out.set(&target, acc)?;
        }
        Ok(out)
    }

    /// Applies a linear map to every value column.
    pub fn map_values(&self, map: &RationalMatrix) -> Result<Self> {
        if map.cols() != self.value_dim {
            return Err(Error::DimensionMismatch(format!(
                "value map with {} columns for value dim {}",
                map.cols(),
                self.value_dim
            )));
        }
        let mut out = AltTensor::zero_valued(self.degree, self.dim, map.rows());
        for (key, val) in &self.entries {
            out.set(key, map.apply(val)?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = AltTensor::zero_valued(self.degree, self.dim, self.value_dim);
        for (key, val) in &self.entries {
            out.set(key, val.iter().map(|v| v * s).collect())
                .expect("same shape");
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.degree, self.dim, self.value_dim) != (other.degree, other.dim, other.value_dim) {
            return Err(Error::DimensionMismatch(
                "adding forms of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for (key, val) in &other.entries {
            let cur = out.eval(key)?;
            out.set(key, cur.iter().zip(val).map(|(a, b)| a + b).collect())?;
        }
        Ok(out)
    }
}

/// Pulls a degree-`k` form back along `mu⁻¹`: `result(w) = t(mu⁻¹w₁, …, mu⁻¹w_k)`.
pub fn alt_pullback(k: usize, mu: &RationalMatrix, t: &AltTensor) -> Result<AltTensor> {
    if t.degree() != k {
        return Err(Error::DimensionMismatch(format!(
            "degree {k} requested for a form of degree {}",
            t.degree()
        )));
    }
    if !mu.is_square() || mu.cols() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} map for a form on dim {}",
            mu.rows(),
            mu.cols(),
            t.dim()
        )));
    }
    t.pullback(&mu.inverse()?)
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    val: ValJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValJson {
    Scalar(Scalar),
    Vector(Vec<Scalar>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AltJson {
    degree: usize,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value_dim: Option<usize>,
    entries: Vec<EntryJson>,
}

impl Serialize for AltTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vector = self.value_dim != 1;
        AltJson {
            degree: self.degree,
            dim: self.dim,
            value_dim: vector.then_some(self.value_dim),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson {
                    idx: k.clone(),
                    val: if vector {
                        ValJson::Vector(v.clone())
                    } else {
                        ValJson::Scalar(v[0].clone())
                    },
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AltTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = AltJson::deserialize(d)?;
        let mut t = AltTensor::zero_valued(raw.degree, raw.dim, raw.value_dim.unwrap_or(1));
        for e in raw.entries {
            let v = match e.val {
                ValJson::Scalar(s) => vec![s],
                ValJson::Vector(v) => v,
            };
            t.set(&e.idx, v).map_err(D::Error::custom)?;
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_index_is_zero() {
        let mut t = AltTensor::zero(3, 3);
        t.set_scalar(&[0, 1, 2], Scalar::one()).unwrap();
        assert!(t.eval_scalar(&[0, 0, 2]).unwrap().is_zero());
        assert_eq!(t.eval_scalar(&[1, 0, 2]).unwrap(), Scalar::from_int(-1));
        assert_eq!(t.eval_scalar(&[2, 0, 1]).unwrap(), Scalar::one());
    }

    #[test]
    fn identity_pullback_is_noop() {
        let mut t = AltTensor::zero(2, 3);
        t.set_scalar(&[0, 2], Scalar::from_ratio(3, 7)).unwrap();
        t.set_scalar(&[2, 1], Scalar::i()).unwrap();
        assert_eq!(
            alt_pullback(2, &RationalMatrix::identity(3), &t).unwrap(),
            t
        );
    }

    #[test]
    fn volume_form_under_doubling() {
        let mut t = AltTensor::zero(3, 3);
        t.set_scalar(&[0, 1, 2], Scalar::one()).unwrap();
        let mu = RationalMatrix::identity(3).scale(&Scalar::from_int(2));
        let r = alt_pullback(3, &mu, &t).unwrap();
        assert_eq!(r.eval_scalar(&[0, 1, 2]).unwrap(), Scalar::from_ratio(1, 8));
    }

    #[test]
    fn degree_and_shape_checks() {
        let t = AltTensor::zero(2, 3);
        assert!(matches!(
            alt_pullback(3, &RationalMatrix::identity(3), &t),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            alt_pullback(2, &RationalMatrix::identity(2), &t),
            Err(Error::DimensionMismatch(_))
        ));
        let sing = RationalMatrix::from_ints(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(alt_pullback(2, &sing, &t), Err(Error::SingularMatrix));
    }

    #[test]
    fn json_roundtrip_vector_valued() {
        let mut t = AltTensor::zero_valued(2, 2, 2);
        t.set(&[1, 0], vec![Scalar::one(), Scalar::from_ratio(1, 2)])
            .unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: AltTensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let mut u = AltTensor::zero(3, 3);
        u.set_scalar(&[0, 1, 2], Scalar::one()).unwrap();
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            r#"{"degree":3,"dim":3,"entries":[{"idx":[0,1,2],"val":"1"}]}"#
        );
    }
}
