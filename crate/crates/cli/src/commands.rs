//! The `norm`, `kernel`, `bs-scan` and `enclosure` subcommands.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};
use specenc_core::branch::sqrt_branch;
use specenc_core::bs::{eigenvalue_search, lambda_scan, Rect, ScanOptions, SearchOptions};
use specenc_core::enclosure::{empirical_constant, enclosure_report, update_ledger, Ledger};
use specenc_core::linalg::PowerOptions;
use specenc_core::norms::{aux_norm, ks_norm, NormKind, NormRequest};
use specenc_core::potential::load_potential;
use specenc_core::special::{kernel_bound_report, LadderOptions, Regime};
use specenc_core::Error;

use crate::config::{
    Command, EnclosureArgs, KernelArgs, KindArg, NormArgs, RegimeArg, RunConfig, ScanArgs,
};
use crate::{emit_json, emit_text, with_schema, CliError, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

pub fn dispatch(cfg: &RunConfig) -> Result<i32, CliError> {
    match &cfg.command {
        Command::Norm(a) => norm(cfg, a),
        Command::Kernel(a) => kernel(cfg, a),
        Command::BsScan(a) => scan(cfg, a),
        Command::Enclosure(a) => enclosure(cfg, a),
        Command::Verify(a) => crate::verify::run_verify(cfg, a),
    }
}

fn usage(msg: String) -> CliError {
    CliError::new(EXIT_USAGE, msg)
}

fn stamp(cfg: &RunConfig, out: &mut Value, started: Instant) {
    if !cfg.deterministic {
        out["elapsedMs"] = json!(started.elapsed().as_millis() as u64);
    }
}

fn default_grid(d: usize) -> usize {
    match d {
        1 => 200,
        2 => 24,
        _ => 10,
    }
}

fn norm(cfg: &RunConfig, a: &NormArgs) -> Result<i32, CliError> {
    let started = Instant::now();
    let v = load_potential(&a.potential)?;
    let need = |x: Option<f64>, flag: &str| {
        x.ok_or_else(|| usage(format!("--kind {:?} requires --{flag}", a.kind)))
    };
    let kind = match a.kind {
        KindArg::Ks => NormKind::Ks {
            alpha: need(a.alpha, "alpha")?,
        },
        KindArg::Kato => NormKind::Kato,
        KindArg::Rollnik => NormKind::Rollnik,
        KindArg::Mc => NormKind::MorreyCampanato {
            alpha: need(a.alpha, "alpha")?,
            p: need(a.p, "p")?,
        },
        KindArg::Lp => NormKind::Lp { p: need(a.p, "p")? },
    };
    let mut req = NormRequest::new(kind, v.d);
    req.beta = a.beta;
    req.k_min = a.k_min.or(cfg.k_min).unwrap_or(req.k_min);
    req.k_max = a.k_max.or(cfg.k_max).unwrap_or(req.k_max);
    req.level = a.level.or(cfg.level).unwrap_or(req.level);
    req.exhaustive = a.exhaustive;
    if let Some(r) = a.radii_per_octave {
        req.radii_per_octave = r;
    }
    let result = match kind {
        NormKind::Ks { .. } => ks_norm(&v, &req),
        _ => aux_norm(&v, &req),
    };
    let mut out = match result {
        Ok(r) => {
            let mut o = with_schema(&r);
            o["zeroPotential"] = json!(false);
            o
        }
        Err(Error::ZeroPotential) => with_schema(&json!({
            "value": 0.0, "witness": null, "trace": [], "evaluated": 0, "pruned": 0, "zeroPotential": true
        })),
        Err(e) => return Err(e.into()),
    };
    out["request"] = serde_json::to_value(&req).expect("serialisable request");
    out["d"] = json!(v.d);
    stamp(cfg, &mut out, started);
    emit_json(&out, a.out.as_deref())?;
    Ok(EXIT_OK)
}

fn kernel(cfg: &RunConfig, a: &KernelArgs) -> Result<i32, CliError> {
    let started = Instant::now();
    let lambda = sqrt_branch(Complex64::new(a.lambda[0], a.lambda[1]))?;
    let regime = match a.regime {
        RegimeArg::Small => Regime::SmallR,
        RegimeArg::Large => Regime::LargeR,
    };
    let mut opts = LadderOptions::<f64>::default_for(regime);
    opts.r_lo = a.r_lo.unwrap_or(opts.r_lo);
    opts.r_hi = a.r_hi.unwrap_or(opts.r_hi);
    opts.points = a.points.unwrap_or(opts.points);
    let (report, samples) =
        kernel_bound_report(Complex64::new(a.zeta, 0.0), &lambda, a.d, regime, &opts)?;
    if let Some(path) = &a.samples {
        let mut csv = String::from("r,re,im,modulus,scaled_modulus\n");
        for s in &samples {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                s.r,
                s.value.re,
                s.value.im,
                s.value.norm(),
                s.scaled_modulus
            );
        }
        emit_text(&csv, Some(path))?;
    }
    let mut out = with_schema(&report);
    out["d"] = json!(a.d);
    out["zeta"] = json!(a.zeta);
    out["lambda"] = json!(a.lambda);
    out["regime"] = serde_json::to_value(regime).expect("serialisable regime");
    stamp(cfg, &mut out, started);
    emit_json(&out, a.out.as_deref())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn scan(cfg: &RunConfig, a: &ScanArgs) -> Result<i32, CliError> {
    let v = load_potential(&a.potential)?;
    let [re0, re1, im0, im1] = a.lambda_rect;
    let rect = Rect {
        re: [re0, re1],
        im: [im0, im1],
    };
    let opts = ScanOptions {
        res: a.res,
        grid_n: a.grid.or(cfg.grid).unwrap_or_else(|| default_grid(v.d)),
        power: PowerOptions {
            tol: cfg.tolerance,
            seed: cfg.seed,
            ..PowerOptions::default()
        },
        parallel: a.parallel,
        sigma_min: a.sigma_min,
    };
    let r = lambda_scan(&v, &rect, &opts)?;
    emit_text(&r.to_csv(), Some(&a.out))?;
    eprintln!("note: {}", r.banner);
    if let Some(path) = &a.report {
        let admitted = r.points.iter().filter(|p| p.op_norm.is_some()).count();
        let mut out = with_schema(&json!({
            "banner": r.banner,
            "rect": r.rect,
            "res": r.res,
            "gridN": r.grid_n,
            "points": r.points.len(),
            "skipped": r.points.len() - admitted,
            "excluded": r.points.iter().filter(|p| p.excluded).count(),
            "fullyExcluded": r.fully_excluded(),
            "parallel": a.parallel,
        }));
        if !cfg.deterministic {
            out["elapsedMs"] = json!(r.elapsed_ms as u64);
        }
        emit_json(&out, Some(path))?;
    }
    Ok(EXIT_OK)
}

fn enclosure(cfg: &RunConfig, a: &EnclosureArgs) -> Result<i32, CliError> {
    let started = Instant::now();
    let v = load_potential(&a.potential)?;
    let ledger_alpha = if v.d == 1 { 0.0 } else { a.alpha };
    let constant = if a.constant == "empirical" {
        let ledger = Ledger::load(&a.ledger)?;
        ledger
            .records
            .iter()
            .find(|r| r.d == v.d && r.alpha == ledger_alpha)
            .map(|r| r.value)
            .filter(|c| *c > 0.0)
            .ok_or_else(|| {
                CliError::new(
                    EXIT_FAIL,
                    format!(
                        "no positive ledger record for d = {}, alpha = {ledger_alpha} in {}",
                        v.d,
                        a.ledger.display()
                    ),
                )
            })?
    } else {
        a.constant.parse::<f64>().map_err(|_| {
            usage(format!(
                "--constant expects a number or \"empirical\", got `{}`",
                a.constant
            ))
        })?
    };
    let mut eigenvalues: Vec<Complex64> = a
        .eigenvalues
        .iter()
        .map(|z| Complex64::new(z[0], z[1]))
        .collect();
    let mut search = Value::Null;
    if let Some(z) = a.search {
        let mut opts = SearchOptions::for_dim(v.d);
        if let Some(n) = cfg.grid {
            opts.grid_n = n;
        }
        let found = eigenvalue_search(&v, Complex64::new(z[0], z[1]), &opts)?;
        eigenvalues.push(found.lambda);
        search = serde_json::to_value(found).expect("serialisable search");
    }
    let level = cfg.level;
    let report = enclosure_report(&v, a.alpha, constant, &eigenvalues, level)?;
    let mut out = with_schema(&report);
    out["search"] = search;
    if a.record {
        let c = empirical_constant(&[(v.clone(), eigenvalues.clone())], a.alpha, level)?;
        let rec = update_ledger(&a.ledger, &c)?;
        out["ledger"] = serde_json::to_value(rec).expect("serialisable record");
    }
    stamp(cfg, &mut out, started);
    emit_json(&out, a.out.as_deref())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}
