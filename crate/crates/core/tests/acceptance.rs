//! The ten acceptance criteria, one test each. Every test prints a single
//! `criterion N ... PASS|FAIL` line, followed by the failing sub-checks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_core::chiral_fm::*;
use torus_core::coisson::*;
use torus_core::exactlin::*;
use torus_core::fockq::*;
use torus_core::jetcalc::*;

struct Report {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new(id: u32, title: &'static str) -> Self {
        Report {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    fn finish(self) {
        let ok = self.checks.iter().all(|c| c.1);
        println!(
            "criterion {:>2} [{}] exact, {} checks: {}",
            self.id,
            self.title,
            self.checks.len(),
            if ok { "PASS" } else { "FAIL" }
        );
        for (name, _) in self.checks.iter().filter(|c| !c.1) {
            println!("    failed: {name}");
        }
        assert!(ok, "criterion {} failed", self.id);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_scalar(r: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::from_ratio(r.gen_range(-5..=5), r.gen_range(1..=4));
    let im = Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=3));
    &re + &(&im * &Scalar::i())
}

fn rand_invertible(r: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| rand_scalar(r)).collect())
            .collect();
        let m = RationalMatrix::from_rows(rows).unwrap();
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

fn rand_alt(r: &mut ChaCha8Rng, k: usize, n: usize, m: usize) -> AltTensor {
    let mut t = if m == 1 {
        AltTensor::zero(k, n)
    } else {
        AltTensor::zero_valued(k, n, m)
    };
    for key in increasing_tuples(n, k) {
        t.set(&key, (0..m).map(|_| rand_scalar(r)).collect())
            .unwrap();
    }
    t
}

fn p(s: &str) -> DiffPoly {
    parse_poly(s, None).unwrap()
}

fn d(s: &str) -> LocalDensity {
    LocalDensity::new(p(s)).unwrap()
}

#[test]
fn criterion_01_fm_involution() {
    let mut rep = Report::new(1, "FM involution");
    let mut r = rng(1);
    let mut ok_cdo = true;
    let mut ok_lin = true;
    for k in 0..200 {
        let n = 2 + k % 3;
        let mu = NondegClass::new(rand_invertible(&mut r, n)).unwrap();
        let x = CdoIsoClass::new(rand_alt(&mut r, 3, n, 1), rand_alt(&mut r, 2, n, n)).unwrap();
        ok_cdo &= fm_cdo(&mu.inverse(), &fm_cdo(&mu, &x).unwrap()).unwrap() == x;
        let a = rand_invertible(&mut r, n);
        ok_lin &= fm_linear(&fm_linear(&a).unwrap()).unwrap() == a;
    }
    rep.check("fm_cdo(mu^-1, fm_cdo(mu, x)) = x on 200 instances", ok_cdo);
    rep.check("fm_linear twice is the identity on 200 instances", ok_lin);
    rep.finish();
}

#[test]
fn criterion_02_fm_calibration() {
    let mut rep = Report::new(2, "FM avatar calibration");
    let mut r = rng(2);
    let mut ok = true;
    for k in 0..50 {
        let n = 2 + k % 3;
        let m = rand_invertible(&mut r, n);
        let mu = NondegClass::new(m.clone()).unwrap();
        let out = fm_tdo(&mu, &TdoIsoClass::new(m, AltTensor::zero(2, n)).unwrap()).unwrap();
        // c = mu^-1, so the negated transform gives -c^-1
        ok &= &out.c == mu.inverse_matrix() && -out.c.clone() == -invert(mu.matrix()).unwrap();
    }
    rep.check("fm_tdo(mu, (mu, 0)) has c = mu^-1 on 50 instances", ok);
    rep.finish();
}

fn integral(l: &Lagrangian, gen: &str) -> VariationalForm {
    noether(l, &parse_generator(gen, l.n()).unwrap())
        .unwrap()
        .integral
}

fn one_form(dt: &str, ds: &str) -> VariationalForm {
    VariationalForm::one_form(p(dt), p(ds))
}

fn along_z(c: &str, bar: bool) -> VariationalForm {
    let c = p(c);
    let s = if bar { -Scalar::i() } else { Scalar::i() };
    VariationalForm::one_form(c.clone(), c.scale(&s))
}

/// `Σ m_ij u^i v^j` as text, with `u`, `v` given as prefixes like `dt.x`.
fn bilinear(m: &RationalMatrix, u: &str, v: &str) -> String {
    let mut terms = vec!["0".to_string()];
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let c = &m[(i, j)];
            if !c.is_zero() {
                terms.push(format!("({c})*{u}{}*{v}{}", i + 1, j + 1));
            }
        }
    }
    terms.join(" + ")
}

/// `γ = (i g(xτ, δx) + B(xσ, δx)) dσ − (i g(xσ, δx) + B(xτ, δx)) dτ`, read with `B(u, v) = b_ij u^i v^j`.
fn displayed_gamma(g: &RationalMatrix, b: &RationalMatrix) -> VariationalForm {
    let mut out = VariationalForm::zero(1, 1);
    for j in 0..g.rows() {
        let (mut s, mut t) = (String::from("0"), String::from("0"));
        for i in 0..g.rows() {
            s += &format!(
                " + i*({})*dt.x{k} + ({})*ds.x{k}",
                g[(i, j)],
                b[(i, j)],
                k = i + 1
            );
            t += &format!(
                " - i*({})*ds.x{k} - ({})*dt.x{k}",
                g[(i, j)],
                b[(i, j)],
                k = i + 1
            );
        }
        out.add_component(vec![JetVar::x(j)], Horiz::Ds, p(&s))
            .unwrap();
        out.add_component(vec![JetVar::x(j)], Horiz::Dt, p(&t))
            .unwrap();
    }
    out
}

#[test]
fn criterion_03_noether_golden_suite() {
    let mut rep = Report::new(3, "Noether golden suite");
    let l = Lagrangian::free_boson();

    let mut gamma = VariationalForm::zero(1, 1);
    gamma
        .add_component(vec![JetVar::x(0)], Horiz::Ds, p("i*dt.x1"))
        .unwrap();
    gamma
        .add_component(vec![JetVar::x(0)], Horiz::Dt, p("-i*ds.x1"))
        .unwrap();
    rep.check(
        "circle variational 1-form",
        variational_one_form(&l) == gamma,
    );
    rep.check(
        "circle Hamiltonian",
        integral(&l, "dt") == one_form("i*dt.x1*ds.x1", "-i/2*(dt.x1^2 - ds.x1^2)"),
    );
    rep.check(
        "circle d/dsigma integral",
        integral(&l, "ds") == one_form("-i/2*(dt.x1^2 - ds.x1^2)", "-i*dt.x1*ds.x1"),
    );
    rep.check(
        "circle momentum",
        integral(&l, "dx1") == one_form("i*ds.x1", "-i*dt.x1"),
    );
    rep.check(
        "holomorphic conformal integral",
        integral(&l, "fdz") == along_z("-f*(dz.x1)^2", false),
    );
    rep.check(
        "antiholomorphic conformal integral",
        integral(&l, "gdzb") == along_z("g*(dzb.x1)^2", true),
    );
    let h = restrict_to_sol0(&l, &integral(&l, "dt")).unwrap();
    let split = integral(&l, "dz.x1")
        .try_add(&integral(&l, "dzb.x1"))
        .unwrap();
    rep.check(
        "H_dtau = H_dz + H_dzbar after restriction",
        h == restrict_to_sol0(&l, &split).unwrap(),
    );

    let g = RationalMatrix::from_ints(&[&[2, 1], &[1, 3]]);
    let zero = RationalMatrix::zeros(2, 2);
    let b = RationalMatrix::from_ints(&[&[0, 3], &[-3, 0]]);
    let flat = Lagrangian::sigma_model(&g, &zero).unwrap();
    rep.check(
        "torus gamma, B = 0",
        variational_one_form(&flat) == displayed_gamma(&g, &zero),
    );
    let twisted = Lagrangian::sigma_model(&g, &b).unwrap();
    rep.check(
        "torus gamma, B != 0, literal B sign",
        variational_one_form(&twisted) == displayed_gamma(&g, &b),
    );

    for (name, lag, bm) in [("B = 0", &flat, &zero), ("B != 0", &twisted, &b)] {
        let ok = (0..2).all(|j| {
            let mom = integral(lag, &format!("dx{}", j + 1)).coefficient(Horiz::Ds);
            let mut pb = String::from("0");
            for i in 0..2 {
                pb += &format!(
                    " + i*({})*dt.x{k} + ({})*ds.x{k}",
                    g[(i, j)],
                    bm[(i, j)],
                    k = i + 1
                );
            }
            mom == p(&format!("-({pb})"))
        });
        rep.check(format!("torus momentum = -p^B, {name}"), ok);
        let h = restrict_to_sol0(lag, &integral(lag, "dt"))
            .unwrap()
            .coefficient(Horiz::Ds);
        let want = format!(
            "-i/2*({} - ({}))",
            bilinear(&g, "dt.x", "dt.x"),
            bilinear(&g, "ds.x", "ds.x")
        );
        rep.check(format!("torus Hamiltonian, {name}"), h == p(&want));
        let vir = restrict_to_sol0(lag, &integral(lag, "fdz"))
            .unwrap()
            .coefficient(Horiz::Ds);
        rep.check(
            format!("torus Virasoro, {name}"),
            vir == p(&format!("-i*f*({})", bilinear(&g, "dz.x", "dz.x"))),
        );
        let avir = restrict_to_sol0(lag, &integral(lag, "gdzb"))
            .unwrap()
            .coefficient(Horiz::Ds);
        rep.check(
            format!("torus anti-Virasoro, {name}"),
            avir == p(&format!("-i*g*({})", bilinear(&g, "dzb.x", "dzb.x"))),
        );
    }
    rep.finish();
}

fn boson() -> BracketTable {
    BracketTable::sigma_model(&RationalMatrix::identity(1), -Scalar::one()).unwrap()
}

fn expansion(terms: &[(u32, &str)]) -> DeltaExpansion {
    let mut e = DeltaExpansion::zero();
    for (r, c) in terms {
        e.add(*r, p(c));
    }
    e
}

fn mode_class(body: &str, m: i64) -> FourierClass {
    FourierClass::new(&d(&format!("e({m})*({body})")))
}

#[test]
fn criterion_04_coisson_structure_constants() {
    let mut rep = Report::new(4, "Coisson structure constants");
    let t = boson();
    let modes = -6i64..=6;

    rep.check(
        "chiral Heisenberg, holomorphic",
        density_bracket(&d("i*dz.x1"), &d("i*dz.x1"), &t) == expansion(&[(1, "1/2")]),
    );
    rep.check(
        "chiral Heisenberg, antiholomorphic",
        density_bracket(&d("i*dzb.x1"), &d("i*dzb.x1"), &t) == expansion(&[(1, "-1/2")]),
    );
    rep.check(
        "chiral Virasoro, holomorphic",
        density_bracket(&d("-i*dz.x1^2"), &d("-i*dz.x1^2"), &t)
            == expansion(&[(1, "2*dz.x1^2"), (0, "-ds.(dz.x1^2)")]),
    );
    rep.check(
        "chiral Virasoro, antiholomorphic, literal i in the delta term",
        density_bracket(&d("-i*dzb.x1^2"), &d("-i*dzb.x1^2"), &t)
            == expansion(&[(1, "-2*dzb.x1^2"), (0, "ds.(i*dzb.x1^2)")]),
    );

    let table = |name: &str, f: &dyn Fn(i64, i64, &FourierClass) -> bool| {
        let tab =
            mode_structure_constants(&[name], &modes.clone().collect::<Vec<_>>(), &t).unwrap();
        tab.iter().all(|e| f(e.left.1, e.right.1, &e.value))
    };
    let constant =
        |c: Scalar| FourierClass::new(&LocalDensity::new(DiffPoly::constant(c)).unwrap());
    rep.check(
        "Heisenberg modes, holomorphic",
        table("heis+", &|m, n, v| {
            *v == if m + n == 0 {
                constant(Scalar::complex((0, 1), (-m, 2)))
            } else {
                FourierClass::zero()
            }
        }),
    );
    rep.check(
        "Heisenberg modes, antiholomorphic",
        table("heis-", &|m, n, v| {
            *v == if m + n == 0 {
                constant(Scalar::complex((0, 1), (m, 2)))
            } else {
                FourierClass::zero()
            }
        }),
    );
    rep.check(
        "Virasoro modes, holomorphic",
        table("vir+", &|m, n, v| {
            *v == Family::VirPlus.class(m + n).scale(&Scalar::from_int(m - n))
        }),
    );
    rep.check(
        "Virasoro modes, antiholomorphic",
        table("vir-", &|m, n, v| {
            *v == Family::VirMinus
                .class(m + n)
                .scale(&Scalar::from_int(n - m))
        }),
    );

    let l0 = |body: &str| FourierClass::new(&d(&format!("-({body})^2")));
    let half = |n: i64| Scalar::from_ratio(n, 2);
    rep.check(
        "Virasoro zero mode on holomorphic Heisenberg, literal -n/2",
        modes.clone().all(|n| {
            let a = mode_class("-i*dz.x1", n);
            fourier_bracket(&l0("dz.x1"), &a, &t) == a.scale(&-half(n))
        }),
    );
    rep.check(
        "Virasoro zero mode on antiholomorphic Heisenberg, literal n/2",
        modes.clone().all(|n| {
            let a = mode_class("-i*dzb.x1", n);
            fourier_bracket(&l0("dzb.x1"), &a, &t) == a.scale(&half(n))
        }),
    );
    let ham = Family::Hamiltonian.class(0);
    rep.check(
        "Hamiltonian eigenvalue on holomorphic Heisenberg, literal -m/2",
        modes.clone().all(|m| {
            let a = Family::HeisPlus.class(m);
            fourier_bracket(&ham, &a, &t) == a.scale(&-half(m))
        }),
    );
    rep.check(
        "Hamiltonian eigenvalue on antiholomorphic Heisenberg, literal m/2",
        modes.clone().all(|m| {
            let a = Family::HeisMinus.class(m);
            fourier_bracket(&ham, &a, &t) == a.scale(&half(m))
        }),
    );

    let canon = BracketTable::canonical(2, -Scalar::one());
    let ok = (0..2).all(|i| {
        (0..2).all(|j| {
            modes.clone().all(|m| {
                modes.clone().all(|n| {
                    let a = mode_class(&format!("p{}", i + 1), -m);
                    let b = mode_class(&format!("ds.x{}", j + 1), -n);
                    let want = if i == j && m + n == 0 {
                        constant(Scalar::complex((0, 1), (m, 1)))
                    } else {
                        FourierClass::zero()
                    };
                    fourier_bracket(&a, &b, &canon) == want
                })
            })
        })
    });
    rep.check(
        "cotangent Heisenberg relation i m delta_ij delta_{m,-n}",
        ok,
    );

    let h = Family::Hamiltonian.density(0);
    rep.check(
        "Hamiltonian flow of x",
        hamiltonian_flow(&h, &d("x1"), &t) == d("dt.x1"),
    );
    rep.check(
        "Hamiltonian flow of dt.x",
        hamiltonian_flow(&h, &d("dt.x1"), &t) == d("-ds.ds.x1"),
    );
    rep.finish();
}

fn rand_density(r: &mut ChaCha8Rng, n: usize) -> LocalDensity {
    const NAMES: [&str; 5] = ["x", "ds.x", "ds.ds.x", "p", "ds.p"];
    let terms: Vec<String> = (0..r.gen_range(1..=2))
        .map(|_| {
            let mut t = format!("{}*e({})", r.gen_range(-3..=3), r.gen_range(-2..=2));
            for _ in 0..r.gen_range(1..=2) {
                t += &format!("*{}{}", NAMES[r.gen_range(0..5)], r.gen_range(1..=n));
            }
            t
        })
        .collect();
    d(&terms.join(" + "))
}

#[test]
fn criterion_05_jacobi_and_twists() {
    let mut rep = Report::new(5, "Jacobi and twists");
    let mut r = rng(5);
    let flat = BracketTable::canonical(3, -Scalar::one());
    let twisted = flat.clone().with_twist([0, 1, 2], p("7/2")).unwrap();
    let (mut ok_flat, mut ok_twist) = (true, true);
    for _ in 0..100 {
        let (a, b, c) = (
            rand_density(&mut r, 3),
            rand_density(&mut r, 3),
            rand_density(&mut r, 3),
        );
        ok_flat &= jacobi_residual(&flat, &a, &b, &c).is_zero();
        ok_twist &= jacobi_residual(&twisted, &a, &b, &c).is_zero();
    }
    rep.check("untwisted table, 100 random triples", ok_flat);
    rep.check("constant twist, 100 random triples", ok_twist);
    let bad = BracketTable::canonical(4, -Scalar::one())
        .with_twist([0, 1, 2], p("x4"))
        .unwrap();
    rep.check(
        "twist h_123 = x^4 leaves a residual",
        !jacobi_residual(&bad, &d("e(1)*p1"), &d("p2"), &d("p3")).is_zero(),
    );
    rep.finish();
}

fn times(op: &SparseOp, c: Scalar) -> SparseOp {
    op.lin_comb(&c, op, &Scalar::zero())
}

fn scalar_op(f: &FockTruncation, c: Scalar) -> SparseOp {
    times(&SparseOp::identity(f.dim()), c)
}

#[test]
fn criterion_06_quantum_heisenberg_virasoro() {
    let mut rep = Report::new(6, "Quantum Heisenberg/Virasoro");
    let cases: [(RationalMatrix, Vec<Scalar>, usize); 3] = [
        (
            RationalMatrix::from_ints(&[&[3]]),
            vec![Scalar::from_ratio(2, 3)],
            8,
        ),
        (
            RationalMatrix::from_ints(&[&[2, 1], &[1, 3]]),
            vec![Scalar::one(), Scalar::from_ratio(-1, 2)],
            8,
        ),
        (
            RationalMatrix::from_ints(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]),
            vec![Scalar::one(), Scalar::zero(), Scalar::from_int(2)],
            6,
        ),
    ];
    for (g, a, level) in cases {
        let n = g.rows();
        let model = build_model(
            n,
            g,
            RationalMatrix::zeros(n, n),
            RationalMatrix::identity(n),
        )
        .unwrap();
        let f = build_fock(&model, &a, level).unwrap();
        let lvl = level as i64;
        let alpha: BTreeMap<(usize, i64), SparseOp> = (0..n)
            .flat_map(|i| (-lvl..=lvl).map(move |m| (i, m)))
            .map(|(i, m)| ((i, m), f.alpha(Chirality::Hol, i, m).unwrap()))
            .collect();
        let mut ok = true;
        for (&(i, m), x) in &alpha {
            for (&(j, k), y) in &alpha {
                let guard = lvl - m.abs() - k.abs();
                if guard < 0 {
                    continue;
                }
                let c = if m + k == 0 {
                    &model.g_inverse()[(i, j)] * &Scalar::from_ratio(-m, 2)
                } else {
                    Scalar::zero()
                };
                ok &= f.agree_below(&x.commutator(y), &scalar_op(&f, c), guard);
            }
        }
        rep.check(format!("n = {n}, N = {level}: Heisenberg commutators"), ok);

        let vir: BTreeMap<i64, SparseOp> = (-lvl..=lvl)
            .map(|k| (k, virasoro_mode(&f, k).unwrap()))
            .collect();
        let mut ok = true;
        for (&k, lk) in &vir {
            for (&(j, m), am) in &alpha {
                if (k + m).abs() > lvl {
                    continue;
                }
                let guard = lvl - k.abs() - m.abs() - (k + m).abs();
                if guard < 0 {
                    continue;
                }
                let rhs = times(&alpha[&(j, k + m)], Scalar::from_int(-m));
                ok &= f.agree_below(&lk.commutator(am), &rhs, guard);
            }
        }
        rep.check(
            format!("n = {n}, N = {level}: [L_k, alpha_m] = -m alpha_(k+m)"),
            ok,
        );

        let c = measured_central_charge(&f, Chirality::Hol).unwrap();
        rep.check(
            format!("n = {n}, N = {level}: measured c = n"),
            c == Scalar::from_int(n as i64),
        );
        let mut ok = true;
        for (&j, lj) in &vir {
            for (&k, lk) in &vir {
                let guard = lvl - 2 * j.abs().max(k.abs());
                if (j + k).abs() > lvl || guard < 0 {
                    continue;
                }
                let lhs = lj.commutator(lk).lin_comb(
                    &Scalar::one(),
                    &vir[&(j + k)],
                    &Scalar::from_int(k - j),
                );
                let central = if j + k == 0 {
                    &c * &Scalar::from_ratio(j * j * j - j, 12)
                } else {
                    Scalar::zero()
                };
                ok &= f.agree_below(&lhs, &scalar_op(&f, central), guard);
            }
        }
        rep.check(
            format!("n = {n}, N = {level}: Virasoro relations with central term"),
            ok,
        );
    }
    rep.finish();
}

fn us(n: i64, d: i64) -> UnitScalar {
    UnitScalar::from_scalar(Scalar::from_ratio(n, d))
}

#[test]
fn criterion_07_spectrum() {
    let mut rep = Report::new(7, "Spectrum");
    // circle: the vector formula measures (i dz, i dzbar); the circle display
    // measures (i dz, -i dzbar), so the displayed set is reached at (-l, -l*)
    // with the second component negated
    for r in [
        Scalar::one(),
        Scalar::from_ratio(2, 3),
        Scalar::from_ratio(5, 2),
    ] {
        let m = one_dim_model(&RadiusSpec::Rational(r.clone())).unwrap();
        let mut ok = true;
        for a in -3..=3 {
            for b in -3..=3 {
                let (l, ls) = (
                    m.lattice_vector(&[a])[0].clone(),
                    m.dual_vector(&[b])[0].clone(),
                );
                let (x, y) =
                    spectrum_point(&m, &m.lattice_vector(&[-a]), &m.dual_vector(&[-b])).unwrap();
                let half = Scalar::from_ratio(1, 2);
                ok &= x[0] == (&l - &ls).scale(&half) && -&y[0] == (&l + &ls).scale(&half);
            }
        }
        rep.check(format!("circle display at 2 pi R = {r}"), ok);
    }
    let b = RationalMatrix::from_ints(&[&[0, 1], &[-1, 0]]);
    let m = build_model(
        2,
        RationalMatrix::identity(2),
        b,
        RationalMatrix::identity(2),
    )
    .unwrap();
    let pt = spectrum_point(&m, &m.lattice_vector(&[1, 0]), &m.dual_vector(&[0, 0])).unwrap();
    rep.check(
        "g = 1, B = e1^e2, (l, l*) = (e1, 0)",
        pt == (vec![us(-1, 2), us(-1, 2)], vec![us(1, 2), us(-1, 2)]),
    );
    let g = RationalMatrix::from_ints(&[&[2, 0], &[0, 4]]);
    let m = build_model(
        2,
        g,
        RationalMatrix::zeros(2, 2),
        RationalMatrix::from_ints(&[&[1, 0], &[0, 2]]),
    )
    .unwrap();
    // l = (1, 0), l* = (0, 1/2): g^-1 l* = (0, 1/8)
    let pt = spectrum_point(&m, &m.lattice_vector(&[1, 0]), &m.dual_vector(&[0, 1])).unwrap();
    rep.check(
        "g = diag(2, 4), L = diag(1, 2), (l, l*) = (e1, e2*/2)",
        pt == (vec![us(-1, 2), us(1, 16)], vec![us(1, 2), us(1, 16)]),
    );
    rep.check("(0, 0) maps to (0, 0)", {
        let z = spectrum_point(&m, &m.lattice_vector(&[0, 0]), &m.dual_vector(&[0, 0])).unwrap();
        z.0.iter().chain(&z.1).all(UnitScalar::is_zero)
    });

    let g = RationalMatrix::from_ints(&[&[2, 1], &[1, 3]]);
    let b = RationalMatrix::from_ints(&[&[0, 2], &[-2, 0]]);
    let m = build_model(
        2,
        g.clone(),
        b.clone(),
        RationalMatrix::from_ints(&[&[1, 1], &[0, 2]]),
    )
    .unwrap();
    let ok = enumerate_sectors(&m, 3).iter().all(|s| {
        let l = m.lattice_vector(&s.l);
        let ls = m.dual_vector(&s.lstar);
        (0..2).all(|j| {
            let gl = (0..2).fold(UnitScalar::zero(), |acc, i| &acc + &l[i].scale(&g[(j, i)]));
            let bl = (0..2).fold(UnitScalar::zero(), |acc, i| &acc + &l[i].scale(&b[(i, j)]));
            let c = &bl - &ls[j];
            s.a_plus[j] == &c + &gl && s.a_minus[j] == &c - &gl
        })
    });
    rep.check("sector weights a+- = -l* + B(l) +- g(l)", ok);
    rep.finish();
}

fn rand_model(r: &mut ChaCha8Rng, n: usize, with_b: bool) -> LatticeModel {
    loop {
        let a = RationalMatrix::from_rows(
            (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Scalar::from_int(r.gen_range(-2..=2)))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let g = a
            .transpose()
            .try_mul(&a)
            .unwrap()
            .try_add(&RationalMatrix::identity(n))
            .unwrap();
        let mut b = RationalMatrix::zeros(n, n);
        if with_b {
            for i in 0..n {
                for j in i + 1..n {
                    b[(i, j)] = Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=3));
                    b[(j, i)] = -&b[(i, j)];
                }
            }
        }
        let l = RationalMatrix::from_rows(
            (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Scalar::from_ratio(r.gen_range(-4..=4), r.gen_range(1..=3)))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        if let Ok(m) = build_model(n, g, b, l) {
            return m;
        }
    }
}

#[test]
fn criterion_08_ko_locality() {
    let mut rep = Report::new(8, "KO locality");
    let mut r = rng(8);
    for k in 0..20 {
        let n = 1 + k % 3;
        let with_b = k % 2 == 1 && n > 1;
        let m = rand_model(&mut r, n, with_b);
        let report = ko_locality(&m, 3);
        rep.check(
            format!(
                "model {k}: n = {n}, B {}",
                if with_b { "!= 0" } else { "= 0" }
            ),
            report.all_integral,
        );
    }
    rep.finish();
}

fn weights(m: &LatticeModel, cutoff: u64) -> Vec<(UnitScalar, UnitScalar)> {
    let mut w: Vec<_> = enumerate_sectors(m, cutoff)
        .into_iter()
        .map(|s| (s.h, s.hbar))
        .collect();
    w.sort();
    w
}

#[test]
fn criterion_09_t_duality() {
    let mut rep = Report::new(9, "T-duality");
    let mut r = rng(9);
    let mut models = vec![
        one_dim_model(&RadiusSpec::Rational(Scalar::from_ratio(3, 7))).unwrap(),
        one_dim_model(&RadiusSpec::Formal(Scalar::from_ratio(5, 2))).unwrap(),
    ];
    models.push(rand_model(&mut r, 2, false));
    models.push(rand_model(&mut r, 2, false));
    for (k, m) in models.iter().enumerate() {
        let dual = t_dual(m).unwrap();
        rep.check(
            format!("model {k}: involution"),
            &t_dual(&dual).unwrap() == m,
        );
        rep.check(
            format!("model {k}: (h, hbar) multiset, cutoff 4"),
            weights(m, 4) == weights(&dual, 4),
        );
    }
    for m in &models[..2] {
        let dual = t_dual(m).unwrap();
        rep.check(
            format!("partition function, order 6: {:?}", m.radius().unwrap()),
            partition_function(m, 3, 6) == partition_function(&dual, 3, 6),
        );
    }
    let fixed = one_dim_model(&RadiusSpec::Rational(Scalar::one())).unwrap();
    rep.check("fixed point 2 pi R = 1", t_dual(&fixed).unwrap() == fixed);
    let other = one_dim_model(&RadiusSpec::Rational(Scalar::from_int(2))).unwrap();
    rep.check(
        "2 pi R = 2 maps to 2 pi R = 1/2",
        t_dual(&other).unwrap().radius() == Some(RadiusSpec::Rational(Scalar::from_ratio(1, 2))),
    );
    rep.finish();
}

#[test]
fn criterion_10_chiral_algebra() {
    let mut rep = Report::new(10, "Chiral algebra");
    let generic = one_dim_model(&RadiusSpec::Formal(Scalar::from_ratio(3, 5))).unwrap();
    let c = chiral_sectors(&generic, 6);
    rep.check(
        "generic circle: vacuum only",
        c.len() == 1 && c[0].l == vec![0] && c[0].lstar == vec![0],
    );

    let circle = one_dim_model(&RadiusSpec::Rational(Scalar::one())).unwrap();
    let c = chiral_sectors(&circle, 6);
    let labels: Vec<UnitScalar> = c.iter().map(|s| s.a_plus[0].clone()).collect();
    let mut want: Vec<UnitScalar> = (-3..=3).map(|l| us(2 * l, 1)).collect();
    want.sort();
    let mut got = labels.clone();
    got.sort();
    rep.check(
        "self-dual circle: sectors (l, -l) with labels 2l",
        got == want && c.iter().all(|s| s.lstar[0] == -s.l[0]),
    );

    let g = RationalMatrix::from_ints(&[&[2, 1], &[1, 1]]);
    let m = build_model(
        2,
        g.clone(),
        RationalMatrix::zeros(2, 2),
        RationalMatrix::identity(2),
    )
    .unwrap();
    let c = chiral_sectors(&m, 4);
    let ok = !c.is_empty()
        && c.iter().all(|s| {
            let two_l: Vec<Scalar> = s.l.iter().map(|x| Scalar::from_int(2 * x)).collect();
            let want: Vec<UnitScalar> = g
                .apply(&two_l)
                .unwrap()
                .into_iter()
                .map(UnitScalar::from)
                .collect();
            s.a_plus == want
        });
    // every l whose partner l* = -g(l) fits in the cutoff appears
    let mut expected = 0;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let ls = [-(2 * a + b), -(a + b)];
            if a.abs() + b.abs() + ls[0].abs() + ls[1].abs() <= 4 {
                expected += 1;
            }
        }
    }
    rep.check("self-dual torus: labels 2 g(l)", ok && c.len() == expected);

    let (cutoff, order) = (3i64, 5u32);
    let z = partition_function(&circle, cutoff as u64, order);
    let vac = Sector::new(&circle, &[0], &[0]).unwrap();
    let chi = |k: i64, bar: bool| {
        let (base, mono) = if bar {
            (
                character_bar(&circle, &vac, order),
                QSeries::monomial(UnitScalar::zero(), us(-k * k, 4), order),
            )
        } else {
            (
                character(&circle, &vac, order),
                QSeries::monomial(us(-k * k, 4), UnitScalar::zero(), order),
            )
        };
        mono.mul(&base)
    };
    let sum = |parity: i64, bar: bool| {
        (-cutoff..=cutoff)
            .filter(|k| k.rem_euclid(2) == parity)
            .fold(QSeries::zero(order), |acc, k| acc.add(&chi(k, bar)))
    };
    let split = sum(0, false)
        .mul(&sum(0, true))
        .add(&sum(1, false).mul(&sum(1, true)));
    rep.check(
        "self-dual circle: even x even + odd x odd",
        z.coefficients() == split.coefficients(),
    );
    rep.finish();
}
