use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::branch::sqrt_branch;
use crate::error::{Error, Result};
use crate::linalg::PowerOptions;
use crate::potential::PotentialSpec;
use crate::scalar::{cx, Cx, Real};

use super::stats::sigma_min_plus_identity;
use super::{assemble_bs, bs_grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub grid_n: usize,
    /// An eigenvalue is declared only below this `sigma_min(A + I)`.
    pub threshold: f64,
    pub max_iter: usize,
    /// Simplex diameter (relative to `1 + |lambda|`) at which the search stops.
    pub xtol: f64,
    /// Initial simplex size relative to `max(|lambda_0|, 0.1)`.
    pub step: f64,
}

impl SearchOptions {
    pub fn for_dim(d: usize) -> Self {
        SearchOptions {
            grid_n: match d {
                1 => 200,
                2 => 24,
                _ => 10,
            },
            threshold: 0.05,
            max_iter: 300,
            xtol: 1e-9,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSearch<T: Real> {
    pub lambda: Cx<T>,
    pub residual: T,
    pub evaluations: usize,
}

/// Nelder-Mead minimisation in two variables. Returns the best vertex, its
/// value and the number of function evaluations.
pub fn nelder_mead<T: Real>(
    mut f: impl FnMut([T; 2]) -> T,
    x0: [T; 2],
    step: T,
    xtol: T,
    max_iter: usize,
) -> ([T; 2], T, usize) {
    let mut evals = 0;
    let mut call = |x: [T; 2], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    let mut s: Vec<([T; 2], T)> = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]]
        .into_iter()
        .map(|x| (x, call(x, &mut evals)))
        .collect();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    for _ in 0..max_iter {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let diam = (1..3)
            .map(|i| ((s[i].0[0] - s[0].0[0]).powi(2) + (s[i].0[1] - s[0].0[1]).powi(2)).sqrt())
            .fold(T::zero(), T::max);
        let scale = T::one() + (s[0].0[0] * s[0].0[0] + s[0].0[1] * s[0].0[1]).sqrt();
        if diam < xtol * scale {
            break;
        }
        let c = [
            half * (s[0].0[0] + s[1].0[0]),
            half * (s[0].0[1] + s[1].0[1]),
        ];
        let w = s[2];
        let along = |t: T| [c[0] + t * (w.0[0] - c[0]), c[1] + t * (w.0[1] - c[1])];
        let xr = along(-T::one());
        let fr = call(xr, &mut evals);
        if fr < s[0].1 {
            let xe = along(-two);
            let fe = call(xe, &mut evals);
            s[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < s[1].1 {
            s[2] = (xr, fr);
        } else {
            let (xc, fc) = if fr < w.1 {
                let x = along(-half);
                (x, call(x, &mut evals))
            } else {
                let x = along(half);
                (x, call(x, &mut evals))
            };
            if fc < w.1.min(fr) {
                s[2] = (xc, fc);
            } else {
                let best = s[0].0;
                for v in s.iter_mut().skip(1) {
                    let x = [half * (best[0] + v.0[0]), half * (best[1] + v.0[1])];
                    *v = (x, call(x, &mut evals));
                }
            }
        }
    }
    s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (s[0].0, s[0].1, evals)
}

/// Minimises `sigma_min(A(lambda) + I)` over the admissible plane from `lambda0`.
pub fn eigenvalue_search<T: Real>(
    v: &PotentialSpec<T>,
    lambda0: Cx<T>,
    opts: &SearchOptions,
) -> Result<EigenSearch<T>> {
    sqrt_branch(lambda0)?;
    let grid = Arc::new(bs_grid(v, opts.grid_n)?);
    let power = PowerOptions {
        tol: 1e-10,
        restarts: 2,
        ..PowerOptions::default()
    };
    let objective = |x: [T; 2]| -> T {
        let l = cx(x[0], x[1]);
        let Ok(sp) = sqrt_branch(l) else {
            return T::infinity();
        };
        assemble_bs(v, &sp, &grid)
            .and_then(|a| sigma_min_plus_identity(&a, &power))
            .unwrap_or(T::infinity())
    };
    let scale = lambda0.norm().max(T::lit(0.1));
    let (x, fx, evaluations) = nelder_mead(
        objective,
        [lambda0.re, lambda0.im],
        T::lit(opts.step) * scale,
        T::lit(opts.xtol),
        opts.max_iter,
    );
    let lambda = cx(x[0], x[1]);
    let tiny = T::lit(1e-6) * (T::one() + lambda.norm());
    if lambda.im.abs() < tiny && lambda.re > -tiny {
        return Err(Error::BoundaryConvergence {
            re: lambda.re.to_f64_lossy(),
            im: lambda.im.to_f64_lossy(),
        });
    }
    if !(fx < T::lit(opts.threshold)) {
        return Err(Error::NoEigenvalue {
            re: lambda.re.to_f64_lossy(),
            im: lambda.im.to_f64_lossy(),
            residual: fx.to_f64_lossy(),
        });
    }
    Ok(EigenSearch {
        lambda,
        residual: fx,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, fx, _) = nelder_mead(
            |p: [f64; 2]| (p[0] - 1.0).powi(2) + 3.0 * (p[1] + 2.0).powi(2),
            [0.0, 0.0],
            0.5,
            1e-10,
            500,
        );
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 2.0).abs() < 1e-8 && fx < 1e-15);
    }

    #[test]
    fn zero_potential_has_no_eigenvalue() {
        let v = PotentialSpec::<f64>::unit_cube(1, 0.0).unwrap();
        let mut o = SearchOptions::for_dim(1);
        o.grid_n = 20;
        o.max_iter = 20;
        let e = eigenvalue_search(&v, Complex64::new(-0.5, 0.0), &o).unwrap_err();
        assert!(matches!(e, Error::NoEigenvalue { .. }), "{e:?}");
        assert!(eigenvalue_search(&v, Complex64::new(0.5, 0.0), &o).is_err());
    }
}
