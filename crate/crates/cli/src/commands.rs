use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::Context;
use isoext::dbt::{self, coincidence_check, dbt_apply, regularity, riccati_residual, Coincidence, ExtendedPotential, Series};
use isoext::laguerre::klh_check;
use isoext::rsfields::{regular_part, rs_v, rs_w, RsMethod, Symmetry};
use isoext::shape::{l3_partner_residual, shape_check};
use isoext::spectral::{default_grid, exact_waves, spectrum_check, Grid, Target};
use isoext::{suite, Error, Params, Rat, RatFunc};
use serde::Serialize;
use serde_json::json;

use crate::{CheckArgs, CheckKind, ExtendArgs, Format, ParamArgs, PlotArgs, SpectrumArgs, SuiteArgs};

pub enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

pub enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// The command ran into an error while computing: exit 1.
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.into())
    }
}

type Outcome = Result<Verdict, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn rat(flag: &str, s: &str) -> Result<Rat, Failure> {
    Rat::from_str(s).map_err(|_| usage(format!("--{flag} expects an integer or p/q, got {s:?}")))
}

fn params(args: &ParamArgs) -> Result<Params, Failure> {
    Params::new(rat("omega", &args.omega)?, rat("a", &args.a)?).map_err(|e| usage(e.to_string()))
}

fn series(s: &str) -> Result<Series, Failure> {
    Series::from_str(s).map_err(|e| usage(e.to_string()))
}

fn target(s: &str, n: usize) -> Result<Target, Failure> {
    if s.eq_ignore_ascii_case("base") {
        Ok(Target::Base)
    } else {
        Ok(Target::Extended(series(s)?, n))
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).context("cannot serialize report")?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn extend(args: ExtendArgs) -> Outcome {
    let p = params(&args.params)?;
    let s = series(&args.series)?;
    let ep = extend_or_usage(s, args.n, &p)?;
    let reg = regularity(&ep)?;
    if !reg.regular {
        eprintln!(
            "warning: {s} n={} at {p} is singular: {} pole(s) on the positive half line",
            args.n, reg.pole_count_positive_axis
        );
    }
    write_json(args.output.as_deref(), &ep)?;
    Ok(Verdict::Pass)
}

fn extend_or_usage(s: Series, n: usize, p: &Params) -> Result<ExtendedPotential, Failure> {
    dbt::extend(s, n, p).map_err(|e| match e {
        Error::InvalidParams(_) | Error::Degenerate(_) | Error::ZeroField => usage(e.to_string()),
        other => other.into(),
    })
}

#[derive(Serialize)]
struct ResidualEntry {
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<RatFunc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
    holds: bool,
}

impl ResidualEntry {
    fn of(label: String, energy: Option<Rat>, residual: RatFunc) -> Self {
        ResidualEntry {
            label,
            energy,
            holds: residual.is_zero(),
            residual: Some(residual),
            skipped: None,
        }
    }

    fn skipped(label: String, reason: String) -> Self {
        ResidualEntry {
            label,
            energy: None,
            residual: None,
            skipped: Some(reason),
            holds: true,
        }
    }
}

fn require<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("check {kind} requires --{flag}")))
}

pub fn check(args: CheckArgs) -> Outcome {
    let p = params(&args.params)?;
    let kind = format!("{:?}", args.kind).to_lowercase();
    let (entries, extra) = match args.kind {
        CheckKind::Riccati => {
            let s = series(&require(args.series.as_deref(), "series", &kind)?)?;
            let n = require(args.n, "n", &kind)?;
            (check_riccati(s, n, &p, args.levels)?, json!({ "series": s, "n": n }))
        }
        CheckKind::Shape => {
            let s = series(&require(args.series.as_deref(), "series", &kind)?)?;
            let n = require(args.n, "n", &kind)?;
            match s {
                Series::L1 | Series::L2 => {
                    let rep = shape_check(s, n, &p).map_err(|e| match e {
                        Error::Degenerate(_) => usage(e.to_string()),
                        other => other.into(),
                    })?;
                    let holds = rep.holds();
                    let entry = ResidualEntry {
                        label: "partner".into(),
                        energy: None,
                        residual: Some(rep.partner_residual.clone()),
                        skipped: None,
                        holds,
                    };
                    (vec![entry], json!({ "series": s, "n": n, "shape": rep }))
                }
                Series::L3 => {
                    let res = l3_partner_residual(n, &p)?;
                    (vec![ResidualEntry::of("partner".into(), None, res)], json!({ "series": s, "n": n }))
                }
                Series::L0 => return Err(usage("check shape covers L1, L2 and L3")),
            }
        }
        CheckKind::Regularity => {
            let s = series(&require(args.series.as_deref(), "series", &kind)?)?;
            let n = require(args.n, "n", &kind)?;
            let ep = extend_or_usage(s, n, &p)?;
            let rep = regularity(&ep)?;
            let entry = ResidualEntry {
                label: "no poles on x > 0".into(),
                energy: None,
                residual: None,
                skipped: None,
                holds: rep.regular,
            };
            (vec![entry], json!({ "series": s, "n": n, "regularity": rep }))
        }
        CheckKind::Klh => {
            let n = require(args.n, "n", &kind)?;
            let alpha = rat("alpha", &require(args.alpha.as_deref(), "alpha", &kind)?)?;
            let c = klh_check(n, &alpha).map_err(|e| usage(e.to_string()))?;
            let entry = ResidualEntry {
                label: "zero counts".into(),
                energy: None,
                residual: None,
                skipped: None,
                holds: c.holds,
            };
            (vec![entry], json!({ "n": n, "klh": c }))
        }
        CheckKind::Wick => {
            let n = require(args.n, "n", &kind)?;
            let w = rs_w(n, &p, RsMethod::Log)?;
            let v = rs_v(n, &p)?;
            let res = v.field.sub(&w.field.wick_image()).ratfunc().clone();
            (vec![ResidualEntry::of("v_n - wick(w_n)".into(), None, res)], json!({ "n": n }))
        }
        CheckKind::Coincidence => {
            let lowered = p.shift_a(-2);
            let mut entries = Vec::new();
            for (which, label, lhs, rhs) in [
                (Coincidence::P1Q1, "P1(a) - Q1(a-2)", Symmetry::AInversion, Symmetry::OmegaInversion),
                (Coincidence::T1R1, "T1(a) - R1(a-2)", Symmetry::Both, Symmetry::Identity),
            ] {
                let diff = regular_part(lhs, 1, &p)?.sub(&regular_part(rhs, 1, &lowered)?);
                let entry = ResidualEntry::of(label.into(), None, diff.ratfunc().clone());
                debug_assert_eq!(entry.holds, coincidence_check(which, &p)?);
                entries.push(entry);
            }
            (entries, json!({}))
        }
    };
    let holds = entries.iter().all(|e| e.holds);
    let mut report = json!({
        "check": kind,
        "holds": holds,
        "entries": entries,
    });
    if args.kind != CheckKind::Klh {
        report["params"] = json!(p);
    }
    if let (Some(obj), serde_json::Value::Object(more)) = (report.as_object_mut(), extra) {
        obj.extend(more);
    }
    write_json(args.output.as_deref(), &report)?;
    if args.output.is_some() {
        println!("check {kind}: {}", if holds { "pass" } else { "FAIL" });
    }
    Ok(holds.into())
}

fn check_riccati(s: Series, n: usize, p: &Params, levels: usize) -> Result<Vec<ResidualEntry>, Failure> {
    let ep = extend_or_usage(s, n, p)?;
    let seed = ep.seed()?;
    let mut out = Vec::with_capacity(levels + 1);
    for k in 0..levels {
        let label = format!("k={k}");
        let target = dbt::level(k, p)?;
        match dbt_apply(&seed, &target) {
            Ok(f) => {
                let res = riccati_residual(&f.field, &ep.field, &f.energy);
                out.push(ResidualEntry::of(label, Some(f.energy), res));
            }
            Err(e @ (Error::EqualEnergies(_) | Error::IdenticalFields)) => {
                out.push(ResidualEntry::skipped(label, e.to_string()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let extra = ep.extra_rs()?;
    let res = riccati_residual(&extra.field, &ep.field, &extra.energy);
    out.push(ResidualEntry::of("minus seed".into(), Some(extra.energy), res));
    Ok(out)
}

pub fn spectrum(args: SpectrumArgs) -> Outcome {
    let p = params(&args.params)?;
    let t = target(&args.series, args.n)?;
    if args.levels == 0 {
        return Err(usage("--levels must be positive"));
    }
    let d = default_grid(t, &p, args.levels);
    let g = Grid::new(
        args.grid.x_min.unwrap_or(d.x_min),
        args.grid.x_max.unwrap_or(d.x_max),
        args.grid.grid_points.unwrap_or(d.npoints),
    )
    .map_err(|e| usage(e.to_string()))?;
    let tol = args.tol.unwrap_or(1e-3 * p.omega.to_f64());
    let rep = spectrum_check(t, &p, args.levels, &g)?;
    match args.format {
        Format::Json => write_json(args.output.as_deref(), &rep)?,
        Format::Csv => {
            let mut w = sink(args.output.as_deref())?;
            rep.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    let ok = rep.max_abs_error <= tol;
    if !ok {
        eprintln!("max abs error {:.3e} exceeds tolerance {tol:.3e}", rep.max_abs_error);
    }
    Ok(ok.into())
}

pub fn plot_data(args: PlotArgs) -> Outcome {
    let p = params(&args.params)?;
    let t = target(&args.series, args.n)?;
    if let Some(&k) = args.k.iter().find(|&&k| k >= args.levels) {
        return Err(usage(format!("--k {k} is beyond the {} computed levels", args.levels)));
    }
    if args.extra_state && !matches!(t, Target::Extended(Series::L3, _)) {
        return Err(usage("--extra-state exists only for L3"));
    }
    if args.samples < 2 || !(args.x_min > 0.0 && args.x_max > args.x_min) {
        return Err(usage("need --samples >= 2 and 0 < --x-min < --x-max"));
    }
    let v = t.potential(&p)?;
    let k_max = args.k.iter().copied().max().unwrap_or(0);
    let waves = if args.k.is_empty() && !args.extra_state {
        Vec::new()
    } else {
        exact_waves(t, &p, k_max)?
    };
    let mut columns = Vec::new();
    if args.extra_state {
        columns.push(waves.iter().find(|w| w.0 == "psi_minus").expect("L3 has a minus state"));
    }
    for k in &args.k {
        let label = format!("psi_{k}");
        columns.push(waves.iter().find(|w| w.0 == label).expect("k <= k_max"));
    }

    let mut wr = csv::Writer::from_writer(sink(args.output.as_deref())?);
    let mut header = vec!["x".to_string(), "V".to_string()];
    header.extend(columns.iter().map(|c| c.0.clone()));
    wr.write_record(&header).context("cannot write CSV")?;
    let step = (args.x_max - args.x_min) / (args.samples - 1) as f64;
    for i in 0..args.samples {
        let x = args.x_min + step * i as f64;
        let mut row = vec![format!("{x:.6}"), format!("{:.12e}", v.eval_f64(x))];
        row.extend(columns.iter().map(|c| format!("{:.12e}", (c.2)(x))));
        wr.write_record(&row).context("cannot write CSV")?;
    }
    wr.flush()?;
    Ok(Verdict::Pass)
}

pub fn suite(args: SuiteArgs) -> Outcome {
    let outcomes = suite::run_all();
    let ok = outcomes.iter().all(|o| o.passed);
    match args.format {
        Format::Json => write_json(args.output.as_deref(), &outcomes)?,
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(sink(args.output.as_deref())?);
            wr.write_record(["id", "criterion", "result", "checks", "failed", "seconds"])
                .context("cannot write CSV")?;
            for o in &outcomes {
                wr.write_record([
                    o.id.to_string(),
                    o.title.clone(),
                    if o.passed { "pass" } else { "FAIL" }.to_string(),
                    o.checked.to_string(),
                    o.failures.len().to_string(),
                    format!("{:.2}", o.seconds),
                ])
                .context("cannot write CSV")?;
            }
            wr.flush()?;
        }
    }
    for o in outcomes.iter().filter(|o| !o.passed) {
        eprintln!("{o}");
        for f in o.failures.iter().take(5) {
            eprintln!("    {f}");
        }
    }
    Ok(ok.into())
}
