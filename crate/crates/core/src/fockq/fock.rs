//! Truncated Fock modules for the Heisenberg modes
//! `[α^i_m, α^j_k] = -½ g^ij m δ_{m+k,0}`.

use std::collections::{BTreeMap, HashMap};

use super::model::{LatticeModel, Sector};
use crate::error::{Error, Result};
use crate::exactlin::{RationalMatrix, Scalar};

/// A basis monomial: creation operators `α^c_{-k}` as sorted `(c, k)` pairs.
pub type FockState = Vec<(usize, u32)>;

pub type SparseVector = BTreeMap<usize, Scalar>;

/// Which mode family an operator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chirality {
    Hol,
    AntiHol,
}

/// Sparse matrix stored by columns; column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOp {
    cols: Vec<SparseVector>,
}

fn axpy(acc: &mut SparseVector, s: &Scalar, v: &SparseVector) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(Scalar::zero);
        *e += &(s * x);
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

impl SparseOp {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVector {
        &self.cols[j]
    }

    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (j, x) in v {
            axpy(&mut out, x, &self.cols[*j]);
        }
        out
    }

    pub fn compose(&self, rhs: &SparseOp) -> SparseOp {
        SparseOp {
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn lin_comb(&self, a: &Scalar, rhs: &SparseOp, b: &Scalar) -> SparseOp {
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(x, y)| {
                let mut out = SparseVector::new();
                axpy(&mut out, a, x);
                axpy(&mut out, b, y);
                out
            })
            .collect();
        SparseOp { cols }
    }

    pub fn commutator(&self, rhs: &SparseOp) -> SparseOp {
        let one = Scalar::one();
        self.compose(rhs).lin_comb(&one, &rhs.compose(self), &-&one)
    }

    pub fn identity(dim: usize) -> SparseOp {
        SparseOp {
            cols: (0..dim)
                .map(|j| SparseVector::from([(j, Scalar::one())]))
                .collect(),
        }
    }
}

/// Fock module `V_{a+}` (and optionally `⊗ V_{a-}`) cut at total level `N`.
#[derive(Clone, Debug)]
pub struct FockTruncation {
    n: usize,
    level: usize,
    ginv: RationalMatrix,
    g: RationalMatrix,
    /// zero-mode eigenvalues `-½ (g⁻¹a)^i`, one block per chirality present
    zero_modes: Vec<Vec<Scalar>>,
    basis: Vec<FockState>,
    levels: Vec<usize>,
    index: HashMap<FockState, usize>,
}

fn partitions(
    colors: usize,
    budget: u32,
    min: (usize, u32),
    cur: &mut FockState,
    out: &mut Vec<FockState>,
) {
    out.push(cur.clone());
    for c in min.0..colors {
        let start = if c == min.0 { min.1 } else { 1 };
        for k in start..=budget {
            cur.push((c, k));
            partitions(colors, budget - k, (c, k), cur, out);
            cur.pop();
        }
    }
}

fn state_level(s: &FockState) -> usize {
    s.iter().map(|(_, k)| *k as usize).sum()
}

impl FockTruncation {
    fn new(model: &LatticeModel, weights: Vec<Vec<Scalar>>, level: usize) -> Result<Self> {
        let n = model.n();
        if weights.iter().any(|w| w.len() != n) {
            return Err(Error::DimensionMismatch("weight length".into()));
        }
        let ginv = model.g_inverse().clone();
        let half = Scalar::from_ratio(-1, 2);
        let zero_modes = weights
            .iter()
            .map(|a| ginv.apply(a).map(|v| v.iter().map(|x| x * &half).collect()))
            .collect::<Result<Vec<_>>>()?;
        let mut basis = Vec::new();
        partitions(
            n * weights.len(),
            level as u32,
            (0, 1),
            &mut Vec::new(),
            &mut basis,
        );
        basis.sort_by_key(|s| (state_level(s), s.clone()));
        let levels = basis.iter().map(state_level).collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(FockTruncation {
            n,
            level,
            ginv,
            g: model.g().clone(),
            zero_modes,
            basis,
            levels,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn basis(&self) -> &[FockState] {
        &self.basis
    }

    pub fn state_level(&self, j: usize) -> usize {
        self.levels[j]
    }

    /// Number of basis states at exactly level `k`.
    pub fn level_dimension(&self, k: usize) -> usize {
        self.levels.iter().filter(|l| **l == k).count()
    }

    pub fn vacuum(&self) -> SparseVector {
        SparseVector::from([(0, Scalar::one())])
    }

    fn block(&self, chi: Chirality) -> Result<usize> {
        let b = match chi {
            Chirality::Hol => 0,
            Chirality::AntiHol => 1,
        };
        if b >= self.zero_modes.len() {
            return Err(Error::DimensionMismatch(
                "module has no antiholomorphic factor".into(),
            ));
        }
        Ok(b)
    }

    fn check_mode(&self, m: i64) -> Result<()> {
        if m.unsigned_abs() as usize > self.level {
            return Err(Error::CutoffExceeded {
                index: m,
                level: self.level,
            });
        }
        Ok(())
    }

    fn alpha_on_state(&self, block: usize, i: usize, m: i64, j: usize) -> SparseVector {
        let s = &self.basis[j];
        let color = block * self.n + i;
        let mut out = SparseVector::new();
        if m < 0 {
            let k = m.unsigned_abs() as u32;
            if self.levels[j] + k as usize <= self.level {
                let mut t = s.clone();
                let pos = t.partition_point(|x| *x < (color, k));
                t.insert(pos, (color, k));
                out.insert(self.index[&t], Scalar::one());
            }
        } else if m == 0 {
            let z = &self.zero_modes[block][i];
            if !z.is_zero() {
                out.insert(j, z.clone());
            }
        } else {
            let k = m as u32;
            let mut seen = None;
            for (pos, &(c, kk)) in s.iter().enumerate() {
                if kk != k || c / self.n != block || seen == Some(c) {
                    continue;
                }
                seen = Some(c);
                let mult = s.iter().filter(|x| **x == (c, kk)).count() as i64;
                let coeff = &self.ginv[(i, c % self.n)] * &Scalar::from_ratio(-mult * m, 2);
                if coeff.is_zero() {
                    continue;
                }
                let mut t = s.clone();
                t.remove(pos);
                axpy(
                    &mut out,
                    &coeff,
                    &SparseVector::from([(self.index[&t], Scalar::one())]),
                );
            }
        }
        out
    }

    fn alpha_apply(&self, block: usize, i: usize, m: i64, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (j, x) in v {
            axpy(&mut out, x, &self.alpha_on_state(block, i, m, *j));
        }
        out
    }

    /// The mode `α^i_m` of the given chirality.
    pub fn alpha(&self, chi: Chirality, i: usize, m: i64) -> Result<SparseOp> {
        self.check_mode(m)?;
        let b = self.block(chi)?;
        if i >= self.n {
            return Err(Error::DimensionMismatch(format!("component {i}")));
        }
        Ok(SparseOp {
            cols: (0..self.dim())
                .map(|j| self.alpha_on_state(b, i, m, j))
                .collect(),
        })
    }

    /// `L_k = -Σ g_ij :α^i_{k-m} α^j_m:`, exact on the truncation.
    pub fn virasoro(&self, chi: Chirality, k: i64) -> Result<SparseOp> {
        self.check_mode(k)?;
        let b = self.block(chi)?;
        let lvl = self.level as i64;
        let mut cols = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let e = SparseVector::from([(j, Scalar::one())]);
            let mut out = SparseVector::new();
            for m in -lvl..=lvl {
                let p = k - m;
                if p.abs() > lvl {
                    continue;
                }
                // annihilators act first
                let (first, second) = if m >= p { (m, p) } else { (p, m) };
                for r in 0..self.n {
                    let v = self.alpha_apply(b, r, first, &e);
                    if v.is_empty() {
                        continue;
                    }
                    for c in 0..self.n {
                        let gc = &self.g[(c, r)];
                        if gc.is_zero() {
                            continue;
                        }
                        let w = self.alpha_apply(b, c, second, &v);
                        axpy(&mut out, &-gc, &w);
                    }
                }
            }
            cols.push(out);
        }
        Ok(SparseOp { cols })
    }

    /// Whether `lhs` and `rhs` agree on basis vectors of level at most `guard`.
    pub fn agree_below(&self, lhs: &SparseOp, rhs: &SparseOp, guard: i64) -> bool {
        (0..self.dim())
            .filter(|j| (self.levels[*j] as i64) <= guard)
            .all(|j| lhs.column(j) == rhs.column(j))
    }
}

/// Holomorphic `L_k` on the truncation.
pub fn virasoro_mode(f: &FockTruncation, k: i64) -> Result<SparseOp> {
    f.virasoro(Chirality::Hol, k)
}

/// The holomorphic module `V_a` for a covector weight `a`, cut at level `N`.
pub fn build_fock(model: &LatticeModel, a: &[Scalar], level: usize) -> Result<FockTruncation> {
    FockTruncation::new(model, vec![a.to_vec()], level)
}

/// `V_{a+} ⊗ V_{a-}` for a sector with rational weights.
pub fn build_sector_fock(
    model: &LatticeModel,
    sector: &Sector,
    level: usize,
) -> Result<FockTruncation> {
    let to_plain = |v: &[super::UnitScalar]| {
        v.iter()
            .map(|x| {
                x.as_scalar().ok_or(Error::DimensionMismatch(
                    "weight involves the formal unit".into(),
                ))
            })
            .collect::<Result<Vec<_>>>()
    };
    FockTruncation::new(
        model,
        vec![to_plain(&sector.a_plus)?, to_plain(&sector.a_minus)?],
        level,
    )
}

/// Central charge read off from `[L_2, L_-2] - 4 L_0` on the vacuum.
pub fn measured_central_charge(f: &FockTruncation, chi: Chirality) -> Result<Scalar> {
    let l2 = f.virasoro(chi, 2)?;
    let lm2 = f.virasoro(chi, -2)?;
    let l0 = f.virasoro(chi, 0)?;
    let c = l2
        .commutator(&lm2)
        .lin_comb(&Scalar::one(), &l0, &Scalar::from_int(-4));
    // [L2, L-2] = 4 L0 + c/2
    let v = c.apply(&f.vacuum());
    Ok(v.get(&0).cloned().unwrap_or_else(Scalar::zero) * Scalar::from_int(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockq::{one_dim_model, RadiusSpec};

    fn circle() -> LatticeModel {
        one_dim_model(&RadiusSpec::Rational(Scalar::one())).unwrap()
    }

    #[test]
    fn level_dimensions_are_partition_counts() {
        let f = build_fock(&circle(), &[Scalar::zero()], 6).unwrap();
        let dims: Vec<usize> = (0..=6).map(|k| f.level_dimension(k)).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn heisenberg_relation() {
        let f = build_fock(&circle(), &[Scalar::from_int(3)], 5).unwrap();
        let a2 = f.alpha(Chirality::Hol, 0, 2).unwrap();
        let am2 = f.alpha(Chirality::Hol, 0, -2).unwrap();
        let expect =
            SparseOp::identity(f.dim()).lin_comb(&Scalar::from_int(-1), &a2, &Scalar::zero());
        assert!(f.agree_below(&a2.commutator(&am2), &expect, 3));
    }

    #[test]
    fn modes_beyond_cutoff_fail() {
        let f = build_fock(&circle(), &[Scalar::zero()], 3).unwrap();
        assert_eq!(
            f.virasoro(Chirality::Hol, 4).unwrap_err(),
            Error::CutoffExceeded { index: 4, level: 3 }
        );
        assert!(f.alpha(Chirality::AntiHol, 0, 1).is_err());
    }

    #[test]
    fn vacuum_weight_and_central_charge() {
        let f = build_fock(&circle(), &[Scalar::from_int(2)], 4).unwrap();
        let l0 = f.virasoro(Chirality::Hol, 0).unwrap();
        assert_eq!(
            l0.apply(&f.vacuum()),
            SparseVector::from([(0, Scalar::from_int(-1))])
        );
        assert_eq!(
            measured_central_charge(&f, Chirality::Hol).unwrap(),
            Scalar::one()
        );
    }
}
