//! Fourier components: densities modulo total σ-derivatives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bracket::{density_bracket, BracketTable, LocalDensity};
use crate::exactlin::{EchelonSystem, Scalar};
use crate::jetcalc::{poly_to_string, CoeffSymbol, DiffPoly, Dir, JetVar, Monomial};

/// Factor kinds preserved by `∂_σ`: a jet slot `(field, tau)` or a symbol family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Jet(usize, u32),
    Hol,
    AntiHol,
}

/// Invariant of a monomial under `∂_σ`: its mode and factor kinds.
type Signature = (i64, Vec<Kind>);

fn factors(m: &Monomial) -> Vec<(Kind, u32)> {
    let mut out = Vec::new();
    for (s, p) in m.symbols() {
        let f = match s {
            CoeffSymbol::Hol(k) => (Kind::Hol, *k),
            CoeffSymbol::AntiHol(k) => (Kind::AntiHol, *k),
            CoeffSymbol::Trig(_) => unreachable!("trig symbols are stored as a mode"),
        };
        out.extend(std::iter::repeat_n(f, *p as usize));
    }
    for (v, p) in m.vars() {
        out.extend(std::iter::repeat_n(
            (Kind::Jet(v.field, v.tau), v.sigma),
            *p as usize,
        ));
    }
    out
}

fn signature(m: &Monomial) -> Signature {
    let mut kinds: Vec<Kind> = factors(m).into_iter().map(|(k, _)| k).collect();
    kinds.sort();
    (m.mode(), kinds)
}

fn build(mode: i64, fs: &[(Kind, u32)]) -> Monomial {
    let mut m = Monomial::one().with_mode(mode);
    for (k, o) in fs {
        match k {
            Kind::Jet(f, t) => m.add_var(JetVar::new(*f, *t, *o), 1),
            Kind::Hol => m.push_symbol(CoeffSymbol::Hol(*o), 1),
            Kind::AntiHol => m.push_symbol(CoeffSymbol::AntiHol(*o), 1),
        }
    }
    m
}

/// All monomials of a signature with total order `≤ wmax`.
fn monomials_up_to(sig: &Signature, wmax: u32) -> Vec<Monomial> {
    // group equal kinds; orders within a group are non-increasing
    let mut groups: Vec<(Kind, usize)> = Vec::new();
    for k in &sig.1 {
        match groups.last_mut() {
            Some((g, c)) if g == k => *c += 1,
            _ => groups.push((*k, 1)),
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<(Kind, u32)> = Vec::new();
    fn rec(
        groups: &[(Kind, usize)],
        gi: usize,
        left: usize,
        cap: u32,
        budget: u32,
        mode: i64,
        cur: &mut Vec<(Kind, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if gi == groups.len() {
            out.push(build(mode, cur));
            return;
        }
        if left == 0 {
            let next = groups.get(gi + 1).map_or(0, |g| g.1);
            rec(groups, gi + 1, next, u32::MAX, budget, mode, cur, out);
            return;
        }
        for o in 0..=cap.min(budget) {
            cur.push((groups[gi].0, o));
            rec(groups, gi, left - 1, o, budget - o, mode, cur, out);
            cur.pop();
        }
    }
    let first = groups.first().map_or(0, |g| g.1);
    rec(
        &groups,
        0,
        first,
        u32::MAX,
        wmax,
        sig.0,
        &mut current,
        &mut out,
    );
    out
}

/// Canonical representative of `p` modulo the image of `∂_σ`.
///
/// Monomials are grouped by their `∂_σ`-invariant signature. Within a group the
/// image of `∂_σ` on all monomials of lower total order is row-reduced with the
/// highest-order monomials as pivots, and `p` is reduced against it.
pub fn normal_form(p: &DiffPoly) -> DiffPoly {
    let mut groups: BTreeMap<Signature, DiffPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = groups.entry(signature(m)).or_default();
        e.add_term(m.clone(), c.clone());
    }
    let mut out = DiffPoly::zero();
    for (sig, part) in groups {
        out = out + reduce_group(&sig, &part);
    }
    out
}

fn reduce_group(sig: &Signature, part: &DiffPoly) -> DiffPoly {
    if sig.1.is_empty() {
        // constants: e^{imσ} is exact unless m = 0
        return if sig.0 == 0 {
            part.clone()
        } else {
            DiffPoly::zero()
        };
    }
    let wmax = part.terms().map(|(m, _)| m.weight()).max().unwrap_or(0);
    if wmax == 0 && sig.0 == 0 {
        return part.clone();
    }
    let mut basis = monomials_up_to(sig, wmax);
    basis.sort_by(|a, b| b.weight().cmp(&a.weight()).then_with(|| a.cmp(b)));
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut ech: EchelonSystem<usize> = EchelonSystem::empty(basis.len());
    let sources: Vec<&Monomial> = if sig.0 != 0 {
        basis.iter().collect()
    } else {
        basis.iter().filter(|m| m.weight() < wmax).collect()
    };
    for m in sources {
        let img = m.derivative(Dir::Sigma);
        let row: BTreeMap<usize, Scalar> = img
            .terms()
            .filter_map(|(k, c)| index.get(k).map(|i| (*i, c.clone())))
            .collect();
        if img.terms().all(|(k, _)| index.contains_key(k)) {
            ech.add_row(row);
        }
    }
    let v: BTreeMap<usize, Scalar> = part.terms().map(|(m, c)| (index[m], c.clone())).collect();
    let mut out = DiffPoly::zero();
    for (i, c) in ech.reduce(&v) {
        out.add_term(basis[i].clone(), c);
    }
    out
}

/// Class `∫ a dσ` of a density modulo total derivatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiffPoly", into = "DiffPoly")]
pub struct FourierClass(LocalDensity);

impl FourierClass {
    pub fn new(a: &LocalDensity) -> Self {
        FourierClass(LocalDensity::new(normal_form(a.poly())).expect("σ-jets are preserved"))
    }

    pub fn zero() -> Self {
        FourierClass(LocalDensity::zero())
    }

    pub fn representative(&self) -> &LocalDensity {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        FourierClass::new(&LocalDensity::new(self.0.poly().scale(s)).expect("same variables"))
    }

    pub fn add(&self, other: &FourierClass) -> Self {
        FourierClass::new(
            &LocalDensity::new(self.0.poly() + other.0.poly()).expect("same variables"),
        )
    }
}

impl TryFrom<DiffPoly> for FourierClass {
    type Error = crate::error::Error;
    fn try_from(p: DiffPoly) -> crate::error::Result<Self> {
        Ok(FourierClass::new(&LocalDensity::new(p)?))
    }
}

impl From<FourierClass> for DiffPoly {
    fn from(c: FourierClass) -> DiffPoly {
        c.0.into_poly()
    }
}

impl std::fmt::Display for FourierClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "int ({}) ds", poly_to_string(self.0.poly()))
    }
}

/// Lie bracket `{∫a, ∫b}` of Fourier components.
pub fn fourier_bracket(a: &FourierClass, b: &FourierClass, t: &BracketTable) -> FourierClass {
    let e = density_bracket(&a.0, &b.0, t);
    FourierClass::new(&LocalDensity::new(e.coeff(0)).expect("σ-jets are preserved"))
}

/// Cyclic sum `{a,{b,c}} + {b,{c,a}} + {c,{a,b}}` of Fourier brackets.
pub fn jacobi_residual(
    t: &BracketTable,
    a: &LocalDensity,
    b: &LocalDensity,
    c: &LocalDensity,
) -> FourierClass {
    let (a, b, c) = (
        FourierClass::new(a),
        FourierClass::new(b),
        FourierClass::new(c),
    );
    let br = |x: &FourierClass, y: &FourierClass| fourier_bracket(x, y, t);
    br(&a, &br(&b, &c))
        .add(&br(&b, &br(&c, &a)))
        .add(&br(&c, &br(&a, &b)))
}
