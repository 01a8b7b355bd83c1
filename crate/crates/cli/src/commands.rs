//! Subcommand implementations. Each returns a report in the requested format.

use serde::Deserialize;
use serde_json::{json, Value};
use torus_core::chiral_fm::{
    fm_cdo, fm_cdo_morphism, fm_linear, fm_tdo, CdoIsoClass, CdoMorphism, NondegClass, TdoIsoClass,
};
use torus_core::coisson::{density_bracket, fourier_bracket, jacobi_residual};
use torus_core::coisson::{BracketTable, FourierClass, LocalDensity};
use torus_core::fockq::{
    character, character_bar, chiral_sectors, colored_partitions, enumerate_sectors, ko_locality,
    partition_function, spectrum_point, t_dual, LatticeModel, ModelFile, QSeries, Sector,
};
use torus_core::jetcalc::{
    form_to_string, noether, parse_generator, parse_poly, restrict_to_sol0, DiffPoly, Lagrangian,
};
use torus_core::{RationalMatrix, Scalar};

use crate::output::{expression, read_json, vector, Failure, Outcome, Report, Table};
use crate::{Cli, Command, FmKind, Format, Sign};

pub fn run(cli: &Cli) -> Outcome<Report> {
    match &cli.command {
        Command::Fm { kind, mu, input } => fm(cli, *kind, mu.as_deref(), input),
        Command::Noether {
            lagrangian,
            generator,
            fields,
            restrict,
        } => noether_cmd(cli, lagrangian.as_deref(), generator, *fields, *restrict),
        Command::Bracket {
            a,
            b,
            fields,
            canonical,
            local,
        } => bracket(cli, a, b, *fields, *canonical, *local),
        Command::Jacobi { table, a, b, c } => jacobi(cli, table, [a, b, c]),
        Command::Spectrum => spectrum(cli),
        Command::States => states(cli, false),
        Command::Chiral => states(cli, true),
        Command::Locality => locality(cli),
        Command::Tdual { radius_unit } => tdual(cli, radius_unit.as_deref()),
        Command::Character { sector } => characters(cli, sector.as_deref()),
    }
}

fn no_csv(cli: &Cli, name: &str) -> Outcome<()> {
    if cli.format == Format::Csv {
        return Err(Failure::Input(format!(
            "csv output is not available for `{name}`"
        )));
    }
    Ok(())
}

fn sign(cli: &Cli) -> Scalar {
    match cli.sign_convention {
        Sign::Plus => Scalar::one(),
        Sign::Minus => -Scalar::one(),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn load_model(cli: &Cli) -> Outcome<LatticeModel> {
    let path = cli
        .model
        .as_deref()
        .ok_or_else(|| Failure::Input("--model is required".into()))?;
    let file: ModelFile = read_json(path)?;
    Ok(file.build()?)
}

fn fm(cli: &Cli, kind: FmKind, mu: Option<&std::path::Path>, input: &str) -> Outcome<Report> {
    no_csv(cli, "fm")?;
    let input = std::path::Path::new(input);
    let value = if kind == FmKind::Linear {
        let a: RationalMatrix = read_json(input)?;
        to_value(&fm_linear(&a)?)
    } else {
        let mu = mu.ok_or_else(|| Failure::Input("--mu is required".into()))?;
        let m: RationalMatrix = read_json(mu)?;
        let mu = NondegClass::new(m)?;
        match kind {
            FmKind::Cdo => {
                let x: CdoIsoClass = read_json(input)?;
                to_value(&fm_cdo(&mu, &x.validated()?)?)
            }
            FmKind::Tdo => {
                let x: TdoIsoClass = read_json(input)?;
                to_value(&fm_tdo(&mu, &TdoIsoClass::new(x.c, x.omega)?)?)
            }
            FmKind::Morphism => {
                let x: CdoMorphism = read_json(input)?;
                to_value(&fm_cdo_morphism(&mu, &CdoMorphism::new(x.h)?)?)
            }
            FmKind::Linear => unreachable!(),
        }
    };
    Ok(Report::Json(value))
}

fn max_field(p: &DiffPoly) -> Option<usize> {
    p.terms()
        .flat_map(|(m, _)| m.vars().keys().map(|v| v.field))
        .max()
}

fn noether_cmd(
    cli: &Cli,
    lagrangian: Option<&str>,
    generator: &str,
    fields: Option<usize>,
    restrict: bool,
) -> Outcome<Report> {
    no_csv(cli, "noether")?;
    let l = match (lagrangian, &cli.model) {
        (Some(text), _) => {
            let p = parse_poly(&expression(text)?, fields)?;
            let n = fields.unwrap_or_else(|| max_field(&p).map_or(1, |f| f + 1));
            Lagrangian::new(n, p)?
        }
        (None, Some(_)) => {
            let m = load_model(cli)?;
            Lagrangian::sigma_model(m.g(), m.b())?
        }
        (None, None) => Lagrangian::free_boson(),
    };
    let g = parse_generator(&expression(generator)?, l.n())?;
    let mut res = noether(&l, &g)?;
    if restrict {
        res.integral = restrict_to_sol0(&l, &res.integral)?;
    }
    let (i, a) = (form_to_string(&res.integral), form_to_string(&res.alpha));
    Ok(match cli.format {
        Format::Json => Report::Json(json!({
            "lagrangian": form_to_string(&l.form()),
            "integral": i,
            "alpha": a,
            "forms": to_value(&res),
        })),
        _ => Report::Text(format!("I = {i}\nalpha = {a}\n")),
    })
}

fn density(text: &str, n: Option<usize>) -> Outcome<LocalDensity> {
    Ok(LocalDensity::new(parse_poly(&expression(text)?, n)?)?)
}

fn bracket(
    cli: &Cli,
    a: &str,
    b: &str,
    fields: Option<usize>,
    canonical: bool,
    local: bool,
) -> Outcome<Report> {
    no_csv(cli, "bracket")?;
    let model = cli.model.as_ref().map(|_| load_model(cli)).transpose()?;
    let n = fields.or(model.as_ref().map(LatticeModel::n));
    let (da, db) = (density(a, n)?, density(b, n)?);
    let n = n.unwrap_or_else(|| {
        [da.max_field(), db.max_field()]
            .into_iter()
            .flatten()
            .max()
            .map_or(1, |f| f + 1)
    });
    let table = match (&model, canonical) {
        (_, true) => BracketTable::canonical(n, sign(cli)),
        (Some(m), false) => BracketTable::sigma_model(m.g(), sign(cli))?,
        (None, false) => BracketTable::sigma_model(&RationalMatrix::identity(n), sign(cli))?,
    };
    if local {
        let e = density_bracket(&da, &db, &table);
        return Ok(match cli.format {
            Format::Json => Report::Json(json!({ "text": e.to_text(), "expansion": to_value(&e) })),
            _ => Report::Text(e.to_text()),
        });
    }
    let c = fourier_bracket(&FourierClass::new(&da), &FourierClass::new(&db), &table);
    Ok(match cli.format {
        Format::Json => Report::Json(json!({ "text": c.to_string(), "class": to_value(&c) })),
        _ => Report::Text(c.to_string()),
    })
}

/// Twist table file. Indices are 1-based field labels.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistFile {
    n: usize,
    #[serde(default)]
    metric: Option<RationalMatrix>,
    #[serde(default)]
    canonical: bool,
    #[serde(default)]
    twist: Vec<TwistEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistEntry {
    idx: [usize; 3],
    h: String,
}

fn jacobi(cli: &Cli, path: &std::path::Path, exprs: [&String; 3]) -> Outcome<Report> {
    no_csv(cli, "jacobi")?;
    let file: TwistFile = read_json(path)?;
    let mut table = if file.canonical {
        BracketTable::canonical(file.n, sign(cli))
    } else {
        let g = file
            .metric
            .unwrap_or_else(|| RationalMatrix::identity(file.n));
        BracketTable::sigma_model(&g, sign(cli))?
    };
    for (k, t) in file.twist.iter().enumerate() {
        if t.idx.contains(&0) {
            return Err(Failure::Input(format!(
                "{}: twist[{k}].idx: field labels start at 1",
                path.display()
            )));
        }
        let h = parse_poly(&t.h, Some(file.n))?;
        table = table.with_twist(t.idx.map(|i| i - 1), h)?;
    }
    let d: Vec<LocalDensity> = exprs
        .iter()
        .map(|e| density(e, Some(file.n)))
        .collect::<Outcome<_>>()?;
    let r = jacobi_residual(&table, &d[0], &d[1], &d[2]);
    Ok(match cli.format {
        Format::Json => Report::Json(json!({
            "zero": r.is_zero(),
            "text": r.to_string(),
            "residual": to_value(&r),
        })),
        _ => Report::Text(r.to_string()),
    })
}

fn table_report(cli: &Cli, t: Table, json: Value) -> Report {
    match cli.format {
        Format::Json => Report::Json(json),
        Format::Csv => Report::Csv(t.csv()),
        Format::Text => Report::Text(t.text()),
    }
}

fn coords(v: &[i64]) -> String {
    vector(v)
}

fn spectrum(cli: &Cli) -> Outcome<Report> {
    let m = load_model(cli)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for s in enumerate_sectors(&m, cli.cutoff) {
        let (hol, anti) = spectrum_point(&m, &m.lattice_vector(&s.l), &m.dual_vector(&s.lstar))?;
        rows.push(vec![
            coords(&s.l),
            coords(&s.lstar),
            vector(&hol),
            vector(&anti),
        ]);
        items.push(json!({ "l": s.l, "lstar": s.lstar, "hol": to_value(&hol), "antihol": to_value(&anti) }));
    }
    let t = Table {
        header: vec!["l", "lstar", "hol", "antihol"],
        rows,
    };
    Ok(table_report(
        cli,
        t,
        json!({ "cutoff": cli.cutoff, "points": items }),
    ))
}

fn states(cli: &Cli, chiral: bool) -> Outcome<Report> {
    let m = load_model(cli)?;
    let sectors = if chiral {
        chiral_sectors(&m, cli.cutoff)
    } else {
        enumerate_sectors(&m, cli.cutoff)
    };
    let per_side: u64 = colored_partitions(m.n(), cli.level).iter().sum();
    let count = if chiral {
        per_side
    } else {
        per_side * per_side
    };
    let rows = sectors
        .iter()
        .map(|s| {
            vec![
                coords(&s.l),
                coords(&s.lstar),
                s.h.to_string(),
                s.hbar.to_string(),
                s.spin().to_string(),
                count.to_string(),
            ]
        })
        .collect();
    let t = Table {
        header: vec!["l", "lstar", "h", "hbar", "spin", "states"],
        rows,
    };
    let json = json!({
        "cutoff": cli.cutoff,
        "level": cli.level,
        "states_per_sector": count,
        "sectors": to_value(&sectors),
    });
    Ok(table_report(cli, t, json))
}

fn locality(cli: &Cli) -> Outcome<Report> {
    let m = load_model(cli)?;
    let r = ko_locality(&m, cli.cutoff);
    Ok(match cli.format {
        Format::Json => Report::Json(to_value(&r)),
        Format::Csv => {
            let rows = r
                .failures
                .iter()
                .map(|f| {
                    vec![
                        coords(&f.l1),
                        coords(&f.lstar1),
                        coords(&f.l2),
                        coords(&f.lstar2),
                        f.hol.to_string(),
                        f.antihol.to_string(),
                        f.difference.to_string(),
                    ]
                })
                .collect();
            Report::Csv(
                Table {
                    header: vec![
                        "l1",
                        "lstar1",
                        "l2",
                        "lstar2",
                        "hol",
                        "antihol",
                        "difference",
                    ],
                    rows,
                }
                .csv(),
            )
        }
        Format::Text => {
            let mut s = format!(
                "cutoff {}\npairs {}\nall_integral {}\n",
                r.cutoff, r.pairs, r.all_integral
            );
            for f in &r.failures {
                s.push_str(&format!(
                    "non-integral {} {} x {} {}: {}\n",
                    coords(&f.l1),
                    coords(&f.lstar1),
                    coords(&f.l2),
                    coords(&f.lstar2),
                    f.difference
                ));
            }
            Report::Text(s)
        }
    })
}

fn tdual(cli: &Cli, radius: Option<&str>) -> Outcome<Report> {
    no_csv(cli, "tdual")?;
    let m = match radius {
        Some(r) => {
            let r: Scalar = r
                .parse()
                .map_err(|_| Failure::Input(format!("--radius-unit: not a rational `{r}`")))?;
            ModelFile::Radius { radius_unit: r }.build()?
        }
        None => load_model(cli)?,
    };
    Ok(Report::Json(to_value(&ModelFile::describe(&t_dual(&m)?))))
}

fn parse_sector(m: &LatticeModel, text: &str) -> Outcome<Sector> {
    let bad = || {
        Failure::Input(format!(
            "--sector: expected `l1,..,ln;m1,..,mn`, got `{text}`"
        ))
    };
    let (l, ls) = text.split_once(';').ok_or_else(bad)?;
    let ints = |s: &str| -> Outcome<Vec<i64>> {
        s.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
            .collect()
    };
    Ok(Sector::new(m, &ints(l)?, &ints(ls)?)?)
}

fn series_json(q: &QSeries) -> Value {
    let coeffs: Vec<Value> = q
        .coefficients()
        .into_iter()
        .map(|((e, eb), c)| json!({ "q": e.to_string(), "qb": eb.to_string(), "coeff": c.to_string() }))
        .collect();
    json!({ "text": q.to_string(), "coefficients": coeffs })
}

fn characters(cli: &Cli, sector: Option<&str>) -> Outcome<Report> {
    no_csv(cli, "character")?;
    let m = load_model(cli)?;
    let series: Vec<(&str, QSeries)> = match sector {
        Some(s) => {
            let s = parse_sector(&m, s)?;
            vec![
                ("chi", character(&m, &s, cli.order)),
                ("chibar", character_bar(&m, &s, cli.order)),
            ]
        }
        None => vec![("Z", partition_function(&m, cli.cutoff, cli.order))],
    };
    Ok(match cli.format {
        Format::Json => Report::Json(Value::Object(
            series
                .iter()
                .map(|(k, q)| (k.to_string(), series_json(q)))
                .collect(),
        )),
        _ => Report::Text(series.iter().map(|(k, q)| format!("{k} = {q}\n")).collect()),
    })
}
