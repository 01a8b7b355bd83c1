//! Forms on the jet space of maps from the cylinder: vertical factors `δu`
//! (one per jet variable) followed by a horizontal part in `{1, dτ, dσ, dτ∧dσ}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::poly::{DiffPoly, Dir, JetVar};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horiz {
    One,
    Dt,
    Ds,
    DtDs,
}

impl Horiz {
    pub fn degree(self) -> usize {
        match self {
            Horiz::One => 0,
            Horiz::Dt | Horiz::Ds => 1,
            Horiz::DtDs => 2,
        }
    }

    pub fn of_dir(dir: Dir) -> Horiz {
        match dir {
            Dir::Tau => Horiz::Dt,
            Dir::Sigma => Horiz::Ds,
        }
    }

    /// `d(dir) ∧ self` as a signed basis element.
    pub fn wedge_left(self, dir: Dir) -> Option<(i64, Horiz)> {
        match (dir, self) {
            (_, Horiz::One) => Some((1, Horiz::of_dir(dir))),
            (Dir::Tau, Horiz::Ds) => Some((1, Horiz::DtDs)),
            (Dir::Sigma, Horiz::Dt) => Some((-1, Horiz::DtDs)),
            _ => None,
        }
    }

    pub fn contains_dt(self) -> bool {
        matches!(self, Horiz::Dt | Horiz::DtDs)
    }
}

/// Sorts a list of anticommuting factors; `None` if a factor repeats.
fn canonical_vertical(mut u: Vec<JetVar>) -> Option<(i64, Vec<JetVar>)> {
    let mut sign = 1;
    for i in 0..u.len() {
        for j in 0..u.len() - 1 - i {
            if u[j] > u[j + 1] {
                u.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if u.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, u))
    }
}

/// Homogeneous form of vertical degree `v` and horizontal degree `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariationalForm {
    v: usize,
    h: usize,
    #[serde(with = "component_list")]
    comps: BTreeMap<(Vec<JetVar>, Horiz), DiffPoly>,
}

impl VariationalForm {
    pub fn zero(v: usize, h: usize) -> Self {
        VariationalForm {
            v,
            h,
            comps: BTreeMap::new(),
        }
    }

    /// A horizontal form `Σ p_h · h` of vertical degree zero.
    pub fn horizontal(parts: &[(Horiz, DiffPoly)]) -> Result<Self> {
        let h = parts.first().map_or(0, |(b, _)| b.degree());
        let mut f = VariationalForm::zero(0, h);
        for (b, p) in parts {
            f.add_component(vec![], *b, p.clone())?;
        }
        Ok(f)
    }

    /// `p dτ + q dσ`.
    pub fn one_form(dt: DiffPoly, ds: DiffPoly) -> Self {
        VariationalForm::horizontal(&[(Horiz::Dt, dt), (Horiz::Ds, ds)]).expect("degree 1")
    }

    /// `p dτ∧dσ`.
    pub fn top_form(p: DiffPoly) -> Self {
        VariationalForm::horizontal(&[(Horiz::DtDs, p)]).expect("degree 2")
    }

    pub fn vertical_degree(&self) -> usize {
        self.v
    }

    pub fn horizontal_degree(&self) -> usize {
        self.h
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&(Vec<JetVar>, Horiz), &DiffPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, vertical: &[JetVar], h: Horiz) -> DiffPoly {
        self.comps
            .get(&(vertical.to_vec(), h))
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficient of `h` in a vertical-degree-0 form.
    pub fn coefficient(&self, h: Horiz) -> DiffPoly {
        self.component(&[], h)
    }

    pub fn add_component(&mut self, vertical: Vec<JetVar>, h: Horiz, p: DiffPoly) -> Result<()> {
        if vertical.len() != self.v || h.degree() != self.h {
            return Err(Error::DimensionMismatch(format!(
                "component of bidegree ({}, {}) in a form of bidegree ({}, {})",
                vertical.len(),
                h.degree(),
                self.v,
                self.h
            )));
        }
        let Some((sign, key)) = canonical_vertical(vertical) else {
            return Ok(());
        };
        let p = if sign < 0 { -p } else { p };
        let entry = self.comps.entry((key, h)).or_default();
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.comps.retain(|_, q| !q.is_zero());
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for ((u, h), p) in &other.comps {
            out.add_component(u.clone(), *h, p.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = VariationalForm::zero(self.v, self.h);
        for ((u, h), p) in &self.comps {
            out.comps.insert((u.clone(), *h), p.scale(s));
        }
        out.comps.retain(|_, q| !q.is_zero());
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Applies `f` to every coefficient polynomial.
    pub fn map_coefficients(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        let mut out = VariationalForm::zero(self.v, self.h);
        for ((u, h), p) in &self.comps {
            let q = f(p);
            if !q.is_zero() {
                out.comps.insert((u.clone(), *h), q);
            }
        }
        out
    }

    /// Drops the components whose horizontal part fails `keep`.
    pub fn filter_horizontal(&self, keep: impl Fn(Horiz) -> bool) -> Self {
        let mut out = self.clone();
        out.comps.retain(|(_, h), _| keep(*h));
        out
    }

    /// Horizontal differential: `d(F δU h) = (−1)^v Σ_dir D_dir(F δU) dir∧h`.
    pub fn d(&self) -> Self {
        let mut out = VariationalForm::zero(self.v, self.h + 1);
        let vsign = if self.v.is_multiple_of(2) { 1 } else { -1 };
        for ((u, h), p) in &self.comps {
            for dir in [Dir::Tau, Dir::Sigma] {
                let Some((hs, nh)) = h.wedge_left(dir) else {
                    continue;
                };
                let s = Scalar::from_int(vsign * hs);
                out.add_component(u.clone(), nh, p.total_derivative(dir).scale(&s))
                    .expect("degrees agree");
                for k in 0..u.len() {
                    let mut w = u.clone();
                    w[k] = w[k].bump(dir);
                    out.add_component(w, nh, p.scale(&s))
                        .expect("degrees agree");
                }
            }
        }
        out
    }

    /// Vertical differential: `δ(F δU h) = Σ_w ∂F/∂w δw∧δU h`.
    pub fn delta(&self) -> Self {
        let mut out = VariationalForm::zero(self.v + 1, self.h);
        for ((u, h), p) in &self.comps {
            for w in p.variables() {
                let mut key = vec![w];
                key.extend(u.iter().copied());
                out.add_component(key, *h, p.partial(&w))
                    .expect("degrees agree");
            }
        }
        out
    }

    /// Contraction with the evolutionary field whose value on a jet variable is
    /// `value(u)`; removes the first vertical factor with the usual signs.
    pub fn contract(&self, value: &dyn Fn(&JetVar) -> DiffPoly) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::DimensionMismatch(
                "contraction of a vertical 0-form".into(),
            ));
        }
        let mut out = VariationalForm::zero(self.v - 1, self.h);
        for ((u, h), p) in &self.comps {
            for k in 0..u.len() {
                let sign = if k % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                let mut rest = u.clone();
                let w = rest.remove(k);
                out.add_component(rest, *h, (p * &value(&w)).scale(&sign))?;
            }
        }
        Ok(out)
    }
}

mod component_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Component {
        vertical: Vec<JetVar>,
        horizontal: Horiz,
        coeff: DiffPoly,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(Vec<JetVar>, Horiz), DiffPoly>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<Component> = m
            .iter()
            .map(|((u, h), p)| Component {
                vertical: u.clone(),
                horizontal: *h,
                coeff: p.clone(),
            })
            .collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<(Vec<JetVar>, Horiz), DiffPoly>, D::Error> {
        let list = Vec::<Component>::deserialize(d)?;
        Ok(list
            .into_iter()
            .filter(|c| !c.coeff.is_zero())
            .map(|c| ((c.vertical, c.horizontal), c.coeff))
            .collect())
    }
}
