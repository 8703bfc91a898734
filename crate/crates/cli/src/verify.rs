//! Invariant suites behind `specenc verify`. Every case prints a single row;
//! details hold rounded numbers so that reports are reproducible byte for byte.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use specenc_core::branch::sqrt_branch;
use specenc_core::bs::{
    assemble_bs, bs_grid, eigenvalue_search, lambda_scan, sigma_min_plus_identity,
    square_well_oracle_1d, OracleOptions, Rect, ScanOptions, SearchOptions,
};
use specenc_core::corpus::random_nonnegative;
use specenc_core::enclosure::{
    beta_of, chain_check, empirical_constant, enclosure_report, exponent_of,
    inverse_square_criterion,
};
use specenc_core::linalg::{hermitian_top, PowerOptions};
use specenc_core::norms::{aux_norm, ks_norm, NormKind, NormRequest};
use specenc_core::potential::PotentialSpec;
use specenc_core::special::bessel::macdonald_k_general;
use specenc_core::special::{
    decay_shape, kernel_bound_report, small_argument_shape, LadderOptions, Regime,
};
use specenc_core::Result;

use crate::config::{RunConfig, Suite, VerifyArgs};
use crate::{emit_json, with_schema, CliError, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

const COULOMB_CUBE: f64 = 1.882_312_6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(x: f64) -> String {
    format!("{x:.6e}")
}

struct Runner {
    suite: &'static str,
    cases: Vec<Case>,
}

impl Runner {
    fn new(suite: &'static str) -> Self {
        Runner {
            suite,
            cases: Vec::new(),
        }
    }

    fn case(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let (pass, detail) = f().unwrap_or_else(|err| (false, format!("error: {err}")));
        self.cases.push(Case {
            suite: self.suite,
            name: name.into(),
            pass,
            detail,
        });
    }
}

fn branch_suite() -> Vec<Case> {
    let mut r = Runner::new("branch");
    let samples: Vec<Complex64> = (0..64)
        .map(|i| {
            let t = i as f64 / 64.0;
            Complex64::from_polar(
                10f64.powf(-3.0 + 6.0 * t),
                -PI + 2.0 * PI * (i as f64 + 0.5) / 64.0,
            )
        })
        .collect();
    r.case("root_positivity", || {
        let mut worst = 0.0f64;
        let mut min_re = f64::INFINITY;
        for &l in &samples {
            let p = sqrt_branch(l)?;
            min_re = min_re.min(p.s.re);
            worst = worst.max((p.s * p.s + l).norm() / l.norm());
        }
        Ok((
            min_re > 0.0 && worst < 1e-14,
            format!(
                "min Re s {}, max |s^2+lambda|/|lambda| {}",
                e(min_re),
                e(worst)
            ),
        ))
    });
    r.case("positive_axis_rejected", || {
        let rejected = [c(0.0, 0.0), c(2.5, 0.0), c(1e-300, 0.0)]
            .iter()
            .all(|&l| sqrt_branch(l).is_err());
        let admitted = sqrt_branch(c(2.5, 1e-300)).is_ok() && sqrt_branch(c(-1e-300, 0.0)).is_ok();
        Ok((
            rejected && admitted,
            format!("rejected {rejected}, admitted off-axis {admitted}"),
        ))
    });
    r.case("conjugation_symmetry", || {
        let mut worst = 0.0f64;
        for &l in samples.iter().filter(|l| l.im != 0.0) {
            let (a, b) = (sqrt_branch(l)?, sqrt_branch(l.conj())?);
            worst = worst.max((a.s.conj() - b.s).norm() + (a.w_dir.conj() - b.w_dir).norm());
        }
        Ok((worst < 1e-14, format!("max deviation {}", e(worst))))
    });
    r.case("negative_axis_continuity", || {
        let mut worst = 0.0f64;
        for x in [0.01, 1.0, 100.0] {
            let on = sqrt_branch(c(-x, 0.0))?;
            for eps in [1e-12, -1e-12] {
                let near = sqrt_branch(c(-x, eps * x))?;
                worst = worst.max((near.s - on.s).norm() / on.s.norm());
            }
        }
        Ok((worst < 1e-10, format!("max jump {}", e(worst))))
    });
    r.cases
}

fn norms_suite() -> Vec<Case> {
    let mut r = Runner::new("norms");
    let cube = || PotentialSpec::<f64>::unit_cube(3, 1.0);
    let gaussian = || PotentialSpec::gaussian(3, c(1.0, 0.0), 0.25, &[0.5; 3], 3.0);
    r.case("unit_cube_ks2", || {
        let v = ks_norm(&cube()?, &NormRequest::ks(3, 2.0, 1.0))?.value;
        Ok((
            (v - COULOMB_CUBE).abs() < 1e-4,
            format!("value {v:.7}, reference {COULOMB_CUBE}"),
        ))
    });
    for (label, make) in [("cube", 0usize), ("gaussian", 1)] {
        for alpha in [1.5, 2.0] {
            r.case(format!("dilation_{label}_alpha_{alpha}"), || {
                let v = if make == 0 { cube()? } else { gaussian()? };
                let base = ks_norm(&v, &NormRequest::ks(3, alpha, 1.0).with_depth(-2, 3))?.value;
                let mut worst = 0.0f64;
                for (t, shift) in [(2.0f64, 1), (4.0, 2)] {
                    let req = NormRequest::ks(3, alpha, 1.0).with_depth(-2 + shift, 3 + shift);
                    let got = ks_norm(&v.dilate(t)?, &req)?.value;
                    worst = worst.max((got / (t.powf(-alpha) * base) - 1.0).abs());
                }
                Ok((worst < 0.01, format!("max relative deviation {}", e(worst))))
            });
        }
    }
    r.case("homogeneity", || {
        let v = gaussian()?;
        let base = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.4))?.value;
        let k = c(0.0, -3.0);
        let scaled = ks_norm(&v.scale(k)?, &NormRequest::ks(3, 2.0, 1.4))?.value;
        let dev = (scaled / (k.norm().powf(1.4) * base) - 1.0).abs();
        Ok((dev < 1e-10, format!("relative deviation {}", e(dev))))
    });
    r.case("ks2_below_kato", || {
        let mut worst = 0.0f64;
        for v in random_nonnegative::<f64>(6, 3)? {
            let ks = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0))?.value;
            let kato = aux_norm(&v, &NormRequest::new(NormKind::Kato, 3).with_level(4))?.value;
            worst = worst.max(ks / kato);
        }
        Ok((worst <= 1.02, format!("max KS2/Kato {worst:.4}")))
    });
    r.case("kato_unit_ball", || {
        let v = PotentialSpec::ball(3, c(1.0, 0.0), 1.0, &[0.0; 3])?;
        let k = aux_norm(&v, &NormRequest::new(NormKind::Kato, 3))?.value;
        let dev = (k / (2.0 * PI) - 1.0).abs();
        Ok((dev < 0.01, format!("value {k:.5}, 2 pi {:.5}", 2.0 * PI)))
    });
    r.case("pruning_matches_exhaustive", || {
        let mut worst = 0.0f64;
        let mut same = true;
        for v in random_nonnegative::<f64>(2, 5)? {
            let req = NormRequest::ks(3, 1.5, 1.0).with_depth(-1, 2);
            let fast = ks_norm(&v, &req)?;
            let full = ks_norm(
                &v,
                &NormRequest {
                    exhaustive: true,
                    ..req
                },
            )?;
            worst = worst.max((fast.value - full.value).abs() / full.value);
            same &= fast.witness == full.witness;
        }
        Ok((
            worst <= 1e-12 && same,
            format!("max deviation {}, witnesses agree {same}", e(worst)),
        ))
    });
    r.cases
}

fn kernel_suite() -> Vec<Case> {
    let mut r = Runner::new("kernel");
    for (d, zeta) in [(3usize, 1.0), (3, 1.25), (2, 0.75)] {
        for (lname, lambda) in [("-1", c(-1.0, 0.0)), ("i", c(0.0, 1.0))] {
            for (rname, regime) in [("small", Regime::SmallR), ("large", Regime::LargeR)] {
                r.case(
                    format!("slope_d{d}_zeta{zeta}_lambda{lname}_{rname}"),
                    || {
                        let l = sqrt_branch(lambda)?;
                        let (rep, _) = kernel_bound_report(
                            c(zeta, 0.0),
                            &l,
                            d,
                            regime,
                            &LadderOptions::default_for(regime),
                        )?;
                        Ok((
                            rep.pass,
                            format!(
                                "fitted {:.4}, predicted {:.4}",
                                rep.fitted_exponent, rep.predicted_exponent
                            ),
                        ))
                    },
                );
            }
        }
    }
    for nu in [0.25, 0.5, 1.0] {
        r.case(format!("bessel_shapes_nu{nu}"), || {
            let mut worst_zero = f64::INFINITY;
            let mut worst_inf = f64::NEG_INFINITY;
            let mut pass = true;
            for arg in [0.0, FRAC_PI_4, -FRAC_PI_4] {
                let a = small_argument_shape(nu, arg, 0.05)?;
                let b = decay_shape(nu, arg, 0.05)?;
                pass &= a.pass && b.pass;
                worst_zero = worst_zero.min(a.slope);
                worst_inf = worst_inf.max(b.slope);
            }
            Ok((
                pass,
                format!("min slope near 0 {worst_zero:.4}, max slope at infinity {worst_inf:.4}"),
            ))
        });
    }
    r.case("half_order_closed_form", || {
        let mut worst = 0.0f64;
        for w in [
            c(1.0, 0.0),
            c(0.3, 0.7),
            c(5.0, -2.0),
            c(0.01, 0.02),
            c(20.0, 15.0),
        ] {
            let exact = (c(PI, 0.0) / (w * 2.0)).sqrt() * (-w).exp();
            let got = macdonald_k_general(0.5, w)?;
            worst = worst.max((got - exact).norm() / exact.norm());
        }
        Ok((worst <= 1e-12, format!("max relative error {}", e(worst))))
    });
    r.cases
}

fn sigma(v: &PotentialSpec<f64>, lambda: Complex64, n: usize) -> Result<f64> {
    let grid = Arc::new(bs_grid(v, n)?);
    let a = assemble_bs(v, &sqrt_branch(lambda)?, &grid)?;
    sigma_min_plus_identity(&a, &PowerOptions::default())
}

fn op_norm(v: &PotentialSpec<f64>, lambda: Complex64, n: usize) -> Result<f64> {
    let grid = Arc::new(bs_grid(v, n)?);
    let a = assemble_bs(v, &sqrt_branch(lambda)?, &grid)?;
    Ok(hermitian_top(
        a.len(),
        |x| a.apply_adjoint(&a.apply(x)),
        &PowerOptions::default(),
    )?
    .value
    .sqrt())
}

fn bs_suite() -> Vec<Case> {
    let mut r = Runner::new("bs");
    let well = || PotentialSpec::square_well(1, c(-2.0, 0.0), 0.5, &[0.0]);
    r.case("residual_at_oracle_eigenvalue", || {
        let lambda = square_well_oracle_1d(c(-2.0, 0.0), 0.5, &OracleOptions::default())[0];
        let v = well()?;
        let (a, b) = (sigma(&v, lambda, 400)?, sigma(&v, lambda, 800)?);
        Ok((
            a < 0.05 && a / b >= 2.0,
            format!("lambda {:.6}, n=400 {}, n=800 {}", lambda.re, e(a), e(b)),
        ))
    });
    r.case("search_recovers_root", || {
        let exact = square_well_oracle_1d(c(-2.0, 0.0), 0.5, &OracleOptions::default())[0];
        let found = eigenvalue_search(&well()?, c(-0.5, 0.0), &SearchOptions::for_dim(1))?;
        let dev = (found.lambda - exact).norm() / exact.norm();
        Ok((
            dev < 0.02,
            format!(
                "found {:.5}{:+.5}i, relative error {}",
                found.lambda.re,
                found.lambda.im,
                e(dev)
            ),
        ))
    });
    r.case("zero_potential_scan", || {
        let v = PotentialSpec::<f64>::unit_cube(1, 0.0)?;
        let rect = Rect {
            re: [-2.0, 2.0],
            im: [-1.0, 1.0],
        };
        let s = lambda_scan(
            &v,
            &rect,
            &ScanOptions {
                res: (5, 3),
                grid_n: 16,
                ..Default::default()
            },
        )?;
        let zeros = s.points.iter().filter_map(|p| p.op_norm).all(|n| n == 0.0);
        let skipped = s.points.iter().filter(|p| p.op_norm.is_none()).count();
        Ok((
            s.fully_excluded() && zeros && skipped == 3,
            format!("skipped {skipped}"),
        ))
    });
    let repulsive: [(usize, usize); 3] = [(1, 200), (2, 24), (3, 10)];
    for (d, n) in repulsive {
        r.case(format!("repulsive_d{d}"), || {
            let v = match d {
                1 => PotentialSpec::square_well(1, c(0.5, 0.0), 0.5, &[0.0])?,
                2 => PotentialSpec::gaussian(2, c(0.5, 0.0), 0.5, &[0.0, 0.0], 3.0)?,
                _ => PotentialSpec::ball(3, c(1.0, 0.0), 1.0, &[0.0; 3])?,
            };
            let rect = Rect {
                re: [-5.0, -0.1],
                im: [0.0, 0.0],
            };
            let o = ScanOptions {
                res: (12, 1),
                grid_n: n,
                sigma_min: true,
                ..Default::default()
            };
            let s = lambda_scan(&v, &rect, &o)?;
            let max_norm = s
                .points
                .iter()
                .filter_map(|p| p.op_norm)
                .fold(0.0, f64::max);
            let min_sigma = s
                .points
                .iter()
                .filter_map(|p| p.sigma_min_plus_i)
                .fold(f64::INFINITY, f64::min);
            Ok((
                s.fully_excluded() && min_sigma >= 0.99,
                format!("max norm {max_norm:.4}, min sigma {min_sigma:.4}"),
            ))
        });
    }
    r.case("conjugation_symmetry", || {
        let v = PotentialSpec::gaussian(2, c(-1.5, 0.0), 0.7, &[0.2, -0.1], 3.0)?;
        let l = c(-0.8, 0.6);
        let (a, b) = (op_norm(&v, l, 16)?, op_norm(&v, l.conj(), 16)?);
        let dev = (a / b - 1.0).abs();
        Ok((dev < 1e-6, format!("norms {a:.6} / {b:.6}")))
    });
    r.case("coupled_rescaling", || {
        let v = PotentialSpec::gaussian(2, c(-1.5, 0.3), 0.7, &[0.2, -0.1], 3.0)?;
        let l = c(-0.8, 0.6);
        let base = op_norm(&v, l, 16)?;
        let t = 2.0;
        let w = v.dilate(t)?.scale(c(t * t, 0.0))?;
        let scaled = op_norm(&w, l * (t * t), 16)?;
        let dev = (scaled / base - 1.0).abs();
        Ok((dev < 0.02, format!("norms {base:.5} / {scaled:.5}")))
    });
    r.cases
}

fn enclosure_suite() -> Vec<Case> {
    let mut r = Runner::new("enclosure");
    r.case("exponent_identities", || {
        let mut ok = true;
        for (d, alpha) in [(3usize, 2.0), (3, 2.5), (2, 1.5), (2, 1.75)] {
            let dd = d as f64;
            let (b, ex) = (beta_of(d, alpha), exponent_of(d, alpha));
            ok &= (b - (2.0 * alpha - dd + 1.0) / 2.0).abs() < 1e-15;
            ok &= (ex - (alpha - dd + 1.0) / (2.0 * alpha - dd + 1.0)).abs() < 1e-15;
        }
        ok &= exponent_of(3, 2.0f64) == 0.0 && exponent_of(2, 1.0f64) == 0.0;
        Ok((
            ok,
            "beta and exponent formulas, e = 0 at alpha = d - 1".into(),
        ))
    });
    r.case("one_dimensional_well", || {
        let v = PotentialSpec::square_well(1, c(-2.0, 0.0), 0.5, &[0.0])?;
        let ls = square_well_oracle_1d(c(-2.0, 0.0), 0.5, &OracleOptions::default());
        let rep = enclosure_report(&v, 0.0, 1.0, &ls, None)?;
        let ratio = rep.checks.iter().map(|k| k.lhs / k.rhs).fold(0.0, f64::max);
        Ok((
            rep.pass && !ls.is_empty(),
            format!("eigenvalues {}, max ratio {ratio:.4}", ls.len()),
        ))
    });
    r.case("delta_family", || {
        let mut ratios = Vec::new();
        for eps in [0.2, 0.1, 0.05] {
            let depth = c(-2.0 / eps, 0.0);
            let v = PotentialSpec::square_well(1, depth, eps / 2.0, &[eps / 2.0])?;
            let ls = square_well_oracle_1d(depth, eps / 2.0, &OracleOptions::default());
            let rep = enclosure_report(&v, 0.0, 1.0, &ls, None)?;
            if !rep.pass || ls.len() != 1 {
                return Ok((false, format!("eps {eps}: {} eigenvalues", ls.len())));
            }
            ratios.push(rep.checks[0].lhs / rep.checks[0].rhs);
        }
        let ok = ratios.windows(2).all(|w| w[1] > w[0]) && ratios[2] >= 0.9 && ratios[2] <= 1.0;
        Ok((
            ok,
            format!("ratios {:.4} {:.4} {:.4}", ratios[0], ratios[1], ratios[2]),
        ))
    });
    r.case("one_dimensional_corpus", || {
        let mut corpus = Vec::new();
        for (i, a) in [0.25, 0.5, 1.0, 2.0, 3.0].into_iter().enumerate() {
            for (j, (re, im)) in [
                (-1.0, 0.0),
                (-4.0, 0.0),
                (-2.0, 1.0),
                (-2.0, -3.0),
                (-0.5, 2.0),
                (-10.0, 4.0),
            ]
            .into_iter()
            .enumerate()
            {
                let depth = c(re, im) * (1.0 + 0.1 * (i + j) as f64);
                let ls = square_well_oracle_1d(depth, a, &OracleOptions::default());
                corpus.push((PotentialSpec::square_well(1, depth, a, &[0.0])?, ls));
            }
        }
        let k = empirical_constant(&corpus, 0.0, None)?;
        let members = k.ratios.iter().flatten().count();
        Ok((
            k.value <= 0.5 && members == 30,
            format!("members {members}, empirical constant {:.4}", k.value),
        ))
    });
    r.case("inverse_square_linearity", || {
        let base = inverse_square_criterion(1.0f64, 3, 2.0, 0.125, 2.0, None)?;
        let mut worst = 0.0f64;
        for a in [2.0, 0.37, 5.5] {
            worst = worst.max(
                (inverse_square_criterion(a, 3, 2.0, 0.125, 2.0, None)? / (a * base) - 1.0).abs(),
            );
        }
        let refined = inverse_square_criterion(1.0f64, 3, 2.0, 0.0625, 4.0, None)?;
        let drift = (refined / base - 1.0).abs();
        Ok((
            worst < 1e-12 && drift < 0.03,
            format!(
                "per unit strength {base:.5}, linearity {}, refinement drift {drift:.4}",
                e(worst)
            ),
        ))
    });
    r.case("chain_unit_ball", || {
        let v = PotentialSpec::ball(3, c(1.0, 0.0), 1.0, &[0.0; 3])?;
        let k = chain_check(&v, 0.25, 1.6, 0.05, None, None)?;
        Ok((
            k.pass,
            format!("lhs {:.4}, rhs {:.4}", k.lhs_norm, k.rhs_norm),
        ))
    });
    r.cases
}

pub fn run_suite(suite: Suite) -> Vec<Case> {
    match suite {
        Suite::Branch => branch_suite(),
        Suite::Norms => norms_suite(),
        Suite::Kernel => kernel_suite(),
        Suite::Bs => bs_suite(),
        Suite::Enclosure => enclosure_suite(),
        Suite::All => [
            Suite::Branch,
            Suite::Norms,
            Suite::Kernel,
            Suite::Bs,
            Suite::Enclosure,
        ]
        .into_iter()
        .flat_map(run_suite)
        .collect(),
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Branch => "branch",
        Suite::Norms => "norms",
        Suite::Kernel => "kernel",
        Suite::Bs => "bs",
        Suite::Enclosure => "enclosure",
        Suite::All => "all",
    }
}

fn junit_path(report: &Path) -> PathBuf {
    let stem = report
        .file_stem()
        .map_or("report".into(), |s| s.to_string_lossy().into_owned());
    report.with_file_name(format!("{stem}.junit.json"))
}

pub fn run_verify(_cfg: &RunConfig, a: &VerifyArgs) -> std::result::Result<i32, CliError> {
    match a.inject_fault.as_deref() {
        None => {}
        Some("quadrature") => specenc_core::quadrature::inject_table_fault(Some(1.1)),
        Some(other) => {
            return Err(CliError::new(
                EXIT_USAGE,
                format!("unknown fault `{other}`"),
            ))
        }
    }
    let cases = run_suite(a.suite);
    let failed = cases.iter().filter(|k| !k.pass).count();
    let width = cases
        .iter()
        .map(|k| k.suite.len() + k.name.len() + 1)
        .max()
        .unwrap_or(0);
    for k in &cases {
        let label = format!("{}/{}", k.suite, k.name);
        println!(
            "{label:<width$}  {}  {}",
            if k.pass { "PASS" } else { "FAIL" },
            k.detail
        );
    }
    println!("{} passed, {failed} failed", cases.len() - failed);

    if let Some(path) = &a.report {
        let report = with_schema(&json!({
            "suite": suite_name(a.suite),
            "passed": cases.len() - failed,
            "failed": failed,
            "cases": cases,
        }));
        emit_json(&report, Some(path))?;
    }
    if let Some(path) = a
        .junit
        .clone()
        .or_else(|| a.report.as_deref().map(junit_path))
    {
        let mut suites = Vec::new();
        for name in ["branch", "norms", "kernel", "bs", "enclosure"] {
            let members: Vec<&Case> = cases.iter().filter(|k| k.suite == name).collect();
            if members.is_empty() {
                continue;
            }
            suites.push(json!({
                "name": name,
                "tests": members.len(),
                "failures": members.iter().filter(|k| !k.pass).count(),
                "testcases": members.iter().map(|k| json!({
                    "classname": k.suite,
                    "name": k.name,
                    "failure": if k.pass { None } else { Some(&k.detail) },
                    "systemOut": k.detail,
                })).collect::<Vec<_>>(),
            }));
        }
        emit_json(&with_schema(&json!({ "testsuites": suites })), Some(&path))?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAIL })
}
