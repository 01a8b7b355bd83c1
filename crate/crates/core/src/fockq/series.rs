//! Truncated q-series for characters and partition functions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::model::{enumerate_sectors, LatticeModel, Sector};
use super::unit::UnitScalar;
use crate::exactlin::Scalar;

/// Where a coefficient sits: base exponents `(h, h̄)` plus integer levels
/// `(k, k̄)` above them. Levels are what the truncation order bounds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Grade {
    pub h: UnitScalar,
    pub hbar: UnitScalar,
    pub level: u32,
    pub level_bar: u32,
}

/// `Σ c q^{h+k} q̄^{h̄+k̄}` with `k, k̄ ≤ order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    order: u32,
    terms: BTreeMap<Grade, Scalar>,
}

impl QSeries {
    pub fn zero(order: u32) -> Self {
        QSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// `q^h q̄^h̄`.
    pub fn monomial(h: UnitScalar, hbar: UnitScalar, order: u32) -> Self {
        let mut s = QSeries::zero(order);
        s.add_term(
            Grade {
                h,
                hbar,
                level: 0,
                level_bar: 0,
            },
            Scalar::one(),
        );
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn add_term(&mut self, g: Grade, c: Scalar) {
        if g.level > self.order || g.level_bar > self.order || c.is_zero() {
            return;
        }
        let e = self.terms.entry(g.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, rhs: &QSeries) -> QSeries {
        let mut out = QSeries::zero(self.order.min(rhs.order));
        for (g, c) in self.terms.iter().chain(&rhs.terms) {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &QSeries) -> QSeries {
        let mut out = QSeries::zero(self.order.min(rhs.order));
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let g = Grade {
                    h: &a.h + &b.h,
                    hbar: &a.hbar + &b.hbar,
                    level: a.level + b.level,
                    level_bar: a.level_bar + b.level_bar,
                };
                out.add_term(g, x * y);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Grade, Scalar> {
        &self.terms
    }

    /// Coefficients keyed by the total exponents `(h + k, h̄ + k̄)`.
    pub fn coefficients(&self) -> BTreeMap<(UnitScalar, UnitScalar), Scalar> {
        let mut out: BTreeMap<(UnitScalar, UnitScalar), Scalar> = BTreeMap::new();
        for (g, c) in &self.terms {
            let key = (
                &g.h + &UnitScalar::from_scalar(Scalar::from_int(g.level as i64)),
                &g.hbar + &UnitScalar::from_scalar(Scalar::from_int(g.level_bar as i64)),
            );
            let e = out.entry(key.clone()).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&key);
            }
        }
        out
    }

    /// Smallest `h` among the terms.
    pub fn leading_exponent(&self) -> Option<UnitScalar> {
        self.terms.keys().map(|g| g.h.clone()).min()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((e, eb), c) in self.coefficients() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if !e.is_zero() {
                write!(f, "*q^({e})")?;
            }
            if !eb.is_zero() {
                write!(f, "*qb^({eb})")?;
            }
        }
        Ok(())
    }
}

/// Coefficients of `Π_{k≥1} (1 − q^k)^{-n}` up to `q^order`.
pub fn colored_partitions(n: usize, order: u32) -> Vec<u64> {
    let mut p = vec![0u64; order as usize + 1];
    p[0] = 1;
    for _ in 0..n {
        for k in 1..=order as usize {
            for j in k..=order as usize {
                p[j] += p[j - k];
            }
        }
    }
    p
}

fn level_factor(n: usize, order: u32, bar: bool) -> QSeries {
    let mut s = QSeries::zero(order);
    for (k, c) in colored_partitions(n, order).into_iter().enumerate() {
        let (level, level_bar) = if bar { (0, k as u32) } else { (k as u32, 0) };
        s.add_term(
            Grade {
                h: UnitScalar::zero(),
                hbar: UnitScalar::zero(),
                level,
                level_bar,
            },
            Scalar::from_int(c as i64),
        );
    }
    s
}

/// `q^h Π_{k=1..order} (1 − q^k)^{-n}`, truncated.
pub fn character(model: &LatticeModel, sector: &Sector, order: u32) -> QSeries {
    QSeries::monomial(sector.h.clone(), UnitScalar::zero(), order).mul(&level_factor(
        model.n(),
        order,
        false,
    ))
}

/// The antiholomorphic counterpart, in `q̄`.
pub fn character_bar(model: &LatticeModel, sector: &Sector, order: u32) -> QSeries {
    QSeries::monomial(UnitScalar::zero(), sector.hbar.clone(), order).mul(&level_factor(
        model.n(),
        order,
        true,
    ))
}

/// `Σ q^h q̄^h̄ (level factors)` over sectors within the cutoff.
pub fn partition_function(model: &LatticeModel, cutoff: u64, order: u32) -> QSeries {
    let both = level_factor(model.n(), order, false).mul(&level_factor(model.n(), order, true));
    let mut z = QSeries::zero(order);
    for s in enumerate_sectors(model, cutoff) {
        z = z.add(&QSeries::monomial(s.h.clone(), s.hbar.clone(), order).mul(&both));
    }
    z
}
