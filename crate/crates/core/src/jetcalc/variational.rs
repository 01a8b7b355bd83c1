//! Lagrangians, Euler-Lagrange equations, the variational 1-form, evolutionary
//! prolongation and Noether integrals.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::form::{Horiz, VariationalForm};
use super::poly::{CoeffSymbol, DiffPoly, Dir, JetVar, Monomial};
use crate::error::{Error, Result};
use crate::exactlin::{solve_columns, RationalMatrix, Scalar};

/// First-order density `ℓ` of the form `ℓ dτ∧dσ` on `n` fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lagrangian {
    n: usize,
    density: DiffPoly,
}

impl Lagrangian {
    pub fn new(n: usize, density: DiffPoly) -> Result<Self> {
        for v in density.variables() {
            if v.order() > 1 {
                return Err(Error::NotFirstOrder(format!(
                    "jet variable of order {} in field {}",
                    v.order(),
                    v.field + 1
                )));
            }
            if v.field >= n {
                return Err(Error::DimensionMismatch(format!(
                    "field x{} in a model with {n} fields",
                    v.field + 1
                )));
            }
        }
        Ok(Lagrangian { n, density })
    }

    /// `(i/2)(g(x_τ,x_τ) + g(x_σ,x_σ)) + B(x_τ,x_σ)` with `B(u,v) = b_ij u^i v^j`.
    pub fn sigma_model(g: &RationalMatrix, b: &RationalMatrix) -> Result<Self> {
        let n = g.rows();
        if !g.is_square() || b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch("g and B must be n×n".into()));
        }
        let half_i = Scalar::complex((0, 1), (1, 2));
        let mut l = DiffPoly::zero();
        for i in 0..n {
            for j in 0..n {
                let t = |f, tau, sigma| DiffPoly::var(JetVar::new(f, tau, sigma));
                let kin = &t(i, 1, 0) * &t(j, 1, 0) + &t(i, 0, 1) * &t(j, 0, 1);
                l = l + kin.scale(&(&half_i * &g[(i, j)]));
                l = l + (&t(i, 1, 0) * &t(j, 0, 1)).scale(&b[(i, j)]);
            }
        }
        Lagrangian::new(n, l)
    }

    /// The boson on a circle, `(i/2)((∂_τx)² + (∂_σx)²)`.
    pub fn free_boson() -> Self {
        Lagrangian::sigma_model(&RationalMatrix::identity(1), &RationalMatrix::zeros(1, 1))
            .expect("1×1 data")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn density(&self) -> &DiffPoly {
        &self.density
    }

    pub fn form(&self) -> VariationalForm {
        VariationalForm::top_form(self.density.clone())
    }
}

/// `E_i = ∂ℓ/∂x^i − D_τ ∂ℓ/∂x^i_τ − D_σ ∂ℓ/∂x^i_σ`.
pub fn euler_lagrange(l: &Lagrangian) -> Vec<DiffPoly> {
    (0..l.n)
        .map(|i| {
            let p = &l.density;
            p.partial(&JetVar::x(i))
                - p.partial(&JetVar::new(i, 1, 0)).total_derivative(Dir::Tau)
                - p.partial(&JetVar::new(i, 0, 1))
                    .total_derivative(Dir::Sigma)
        })
        .collect()
}

/// `γ = Σ_i ∂ℓ/∂x^i_τ δx^i∧dσ − ∂ℓ/∂x^i_σ δx^i∧dτ`.
pub fn variational_one_form(l: &Lagrangian) -> VariationalForm {
    let mut g = VariationalForm::zero(1, 1);
    for i in 0..l.n {
        let dx = vec![JetVar::x(i)];
        g.add_component(
            dx.clone(),
            Horiz::Ds,
            l.density.partial(&JetVar::new(i, 1, 0)),
        )
        .expect("bidegree (1,1)");
        g.add_component(dx, Horiz::Dt, -l.density.partial(&JetVar::new(i, 0, 1)))
            .expect("bidegree (1,1)");
    }
    g
}

/// Evolutionary vector field `x̂` determined by `x̂(x^i) = F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator(pub Vec<DiffPoly>);

impl Generator {
    /// `x̂(∂_τ^a ∂_σ^b x^i) = D_τ^a D_σ^b F_i`.
    pub fn value(&self, u: &JetVar) -> DiffPoly {
        match self.0.get(u.field) {
            Some(f) => f
                .total_derivative_n(Dir::Tau, u.tau)
                .total_derivative_n(Dir::Sigma, u.sigma),
            None => DiffPoly::zero(),
        }
    }

    /// `F_i = ∂_dir x^i`.
    pub fn translation(n: usize, dir: Dir) -> Self {
        Generator(
            (0..n)
                .map(|i| DiffPoly::var(JetVar::x(i).bump(dir)))
                .collect(),
        )
    }

    /// `F_j = δ_ij`.
    pub fn shift(n: usize, i: usize) -> Self {
        Generator(
            (0..n)
                .map(|j| {
                    if i == j {
                        DiffPoly::one()
                    } else {
                        DiffPoly::zero()
                    }
                })
                .collect(),
        )
    }

    /// `F_i = f(z) ∂_z x^i`.
    pub fn holomorphic(n: usize) -> Self {
        let f = DiffPoly::symbol(CoeffSymbol::Hol(0));
        Generator((0..n).map(|i| &f * &DiffPoly::dz(i)).collect())
    }

    /// `F_i = g(z̄) ∂_z̄ x^i`.
    pub fn antiholomorphic(n: usize) -> Self {
        let g = DiffPoly::symbol(CoeffSymbol::AntiHol(0));
        Generator((0..n).map(|i| &g * &DiffPoly::dzb(i)).collect())
    }
}

/// Applies the prolonged field to a polynomial.
pub fn prolong(gen: &Generator, p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for u in p.variables() {
        out = out + &p.partial(&u) * &gen.value(&u);
    }
    out
}

/// Lie derivative of a form along the prolonged field.
pub fn prolong_form(gen: &Generator, f: &VariationalForm) -> VariationalForm {
    let mut out = VariationalForm::zero(f.vertical_degree(), f.horizontal_degree());
    for ((u, h), p) in f.components() {
        out.add_component(u.clone(), *h, prolong(gen, p))
            .expect("same bidegree");
        for k in 0..u.len() {
            let image = gen.value(&u[k]);
            for w in image.variables() {
                let mut key = u.clone();
                key[k] = w;
                out.add_component(key, *h, p * &image.partial(&w))
                    .expect("same bidegree");
            }
        }
    }
    out
}

/// Result of [`noether`]: the integral `I = α − ι_x̂γ` and the potential `α`
/// with `x̂ℒ = dα`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherIntegral {
    pub integral: VariationalForm,
    pub alpha: VariationalForm,
}

fn lower_candidates(m: &Monomial, out: &mut BTreeSet<Monomial>) {
    for v in m.vars().keys() {
        for dir in [Dir::Tau, Dir::Sigma] {
            if let Some(w) = v.lower(dir) {
                let mut k = m.clone();
                k.add_var(*v, -1);
                k.add_var(w, 1);
                out.insert(k);
            }
        }
    }
    for s in m.symbols().keys() {
        let lower = match s {
            CoeffSymbol::Hol(k) if *k > 0 => Some(CoeffSymbol::Hol(k - 1)),
            CoeffSymbol::AntiHol(k) if *k > 0 => Some(CoeffSymbol::AntiHol(k - 1)),
            _ => None,
        };
        if let Some(t) = lower {
            let mut k = m.clone();
            k.push_symbol(*s, -1);
            k.push_symbol(t, 1);
            out.insert(k);
        }
    }
    if m.mode() != 0 {
        out.insert(m.clone());
    }
}

/// Finds `(α_τ, α_σ)` with `D_τ α_σ − D_σ α_τ = target`, or `None`.
///
/// The ansatz is spanned by monomials obtained from those of `target` by
/// lowering one factor; monomials containing an undifferentiated field are
/// placed last so that they are only used when needed.
pub fn solve_divergence(target: &DiffPoly) -> Option<(DiffPoly, DiffPoly)> {
    if target.is_zero() {
        return Some((DiffPoly::zero(), DiffPoly::zero()));
    }
    let mut cands = BTreeSet::new();
    for (m, _) in target.terms() {
        lower_candidates(m, &mut cands);
    }
    let mut cands: Vec<Monomial> = cands.into_iter().collect();
    cands.sort_by_key(|m| m.has_bare_field());
    // columns: α_σ part then α_τ part for each candidate
    let mut cols: Vec<BTreeMap<Monomial, Scalar>> = Vec::new();
    for m in &cands {
        let ds = m.derivative(Dir::Tau);
        cols.push(ds.terms().map(|(k, c)| (k.clone(), c.clone())).collect());
        let dt = -m.derivative(Dir::Sigma);
        cols.push(dt.terms().map(|(k, c)| (k.clone(), c.clone())).collect());
    }
    let rhs: BTreeMap<Monomial, Scalar> = target
        .terms()
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect();
    let x = solve_columns(&cols, &rhs)?;
    let mut a_t = DiffPoly::zero();
    let mut a_s = DiffPoly::zero();
    for (k, m) in cands.iter().enumerate() {
        a_s.add_term(m.clone(), x[2 * k].clone());
        a_t.add_term(m.clone(), x[2 * k + 1].clone());
    }
    Some((a_t, a_s))
}

/// Noether integral of motion attached to a symmetry generator.
pub fn noether(l: &Lagrangian, gen: &Generator) -> Result<NoetherIntegral> {
    if gen.0.len() != l.n {
        return Err(Error::DimensionMismatch(format!(
            "generator has {} components for {} fields",
            gen.0.len(),
            l.n
        )));
    }
    let target = prolong(gen, &l.density);
    let (a_t, a_s) = solve_divergence(&target)
        .ok_or_else(|| Error::NotASymmetry(super::print::poly_to_string(&target)))?;
    let alpha = VariationalForm::one_form(a_t, a_s);
    let gamma = variational_one_form(l);
    let contracted = gamma.contract(&|u| gen.value(u))?;
    let integral = alpha.try_sub(&contracted)?;
    match certificate(l, &integral) {
        Ok(r) if !r.is_zero() => {
            return Err(Error::NotASymmetry(super::print::poly_to_string(&r)));
        }
        Ok(_) | Err(Error::NonLinearEl) => {}
        Err(e) => return Err(e),
    }
    Ok(NoetherIntegral { integral, alpha })
}

/// Checks that the EL system is `M(∂_τ²x + ∂_σ²x) = 0` with `M` invertible.
pub fn check_wave_type(l: &Lagrangian) -> Result<()> {
    let el = euler_lagrange(l);
    let n = l.n;
    let mut mtt = RationalMatrix::zeros(n, n);
    let mut mss = RationalMatrix::zeros(n, n);
    for (i, e) in el.iter().enumerate() {
        for (m, c) in e.terms() {
            if !m.symbols().is_empty() || m.mode() != 0 || m.degree() != 1 {
                return Err(Error::NonLinearEl);
            }
            let v = *m.vars().keys().next().expect("degree 1");
            match (v.tau, v.sigma) {
                (2, 0) => mtt[(i, v.field)] = c.clone(),
                (0, 2) => mss[(i, v.field)] = c.clone(),
                _ => return Err(Error::NonLinearEl),
            }
        }
    }
    if mtt != mss || mtt.determinant()?.is_zero() {
        return Err(Error::NonLinearEl);
    }
    Ok(())
}

fn sol_var(v: &JetVar) -> (bool, JetVar) {
    let k = v.tau / 2;
    (k % 2 == 1, JetVar::new(v.field, v.tau % 2, v.sigma + 2 * k))
}

/// Rewrites `∂_τ^a ∂_σ^b x` with `a ≥ 2` via `∂_τ²x → −∂_σ²x`.
pub fn rewrite_on_shell(p: &DiffPoly) -> DiffPoly {
    p.substitute(&|v| {
        (v.tau >= 2).then(|| {
            let (neg, w) = sol_var(v);
            let q = DiffPoly::var(w);
            if neg {
                -q
            } else {
                q
            }
        })
    })
}

/// `dI` of a horizontal 1-form reduced on shell; zero for integrals of motion.
pub fn certificate(l: &Lagrangian, integral: &VariationalForm) -> Result<DiffPoly> {
    check_wave_type(l)?;
    if integral.vertical_degree() != 0 || integral.horizontal_degree() != 1 {
        return Err(Error::DimensionMismatch(
            "certificate needs a horizontal 1-form".into(),
        ));
    }
    Ok(rewrite_on_shell(&integral.d().coefficient(Horiz::DtDs)))
}

/// Restriction to the slice `τ = 0` of the solution space: `dτ` components are
/// dropped and second `τ`-derivatives are eliminated.
pub fn restrict_to_sol0(l: &Lagrangian, f: &VariationalForm) -> Result<VariationalForm> {
    check_wave_type(l)?;
    let mut out = VariationalForm::zero(f.vertical_degree(), f.horizontal_degree());
    for ((u, h), p) in f.components() {
        if h.contains_dt() {
            continue;
        }
        let mut sign = Scalar::one();
        let mut key = Vec::with_capacity(u.len());
        for v in u {
            let (neg, w) = sol_var(v);
            if neg {
                sign = -sign;
            }
            key.push(w);
        }
        out.add_component(key, *h, rewrite_on_shell(p).scale(&sign))?;
    }
    Ok(out)
}

/// Polynomial version of [`restrict_to_sol0`].
pub fn restrict_poly_to_sol0(l: &Lagrangian, p: &DiffPoly) -> Result<DiffPoly> {
    check_wave_type(l)?;
    Ok(rewrite_on_shell(p))
}
