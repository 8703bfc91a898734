use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::sqrt_branch;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::{hermitian_top, hermitian_top_from, PowerOptions};
use crate::potential::PotentialSpec;
use crate::scalar::{cx, Cx, Real};

use super::stats::sigma_min_plus_identity;
use super::{assemble_bs, bs_grid, BsMatrix};

pub const SCAN_BANNER: &str =
    "exclusion certifies ||A(lambda)|| < 1 for the discretised operator only; it is not a rigorous statement about the continuum operator";

/// `[re0, re1] x [im0, im1]` in the lambda plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T: Real> {
    pub re: [T; 2],
    pub im: [T; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Points along the real and imaginary directions.
    pub res: (usize, usize),
    /// Cells per axis of the operator grid.
    pub grid_n: usize,
    pub power: PowerOptions,
    /// Independent points in parallel, without warm starts.
    pub parallel: bool,
    /// Also compute `sigma_min(A + I)` at every point.
    pub sigma_min: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            res: (21, 21),
            grid_n: 64,
            power: PowerOptions {
                tol: 1e-8,
                ..PowerOptions::default()
            },
            parallel: false,
            sigma_min: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanPoint<T: Real> {
    pub lambda: Cx<T>,
    /// `None` for points on `[0, inf)`, which are skipped.
    pub op_norm: Option<T>,
    pub excluded: bool,
    pub iterations: usize,
    pub sigma_min_plus_i: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanResult<T: Real> {
    pub rect: Rect<T>,
    pub res: (usize, usize),
    pub grid_n: usize,
    pub points: Vec<ScanPoint<T>>,
    pub banner: String,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl<T: Real> ScanResult<T> {
    /// Every admitted point has `||A|| < 1`.
    pub fn fully_excluded(&self) -> bool {
        self.points
            .iter()
            .filter(|p| p.op_norm.is_some())
            .all(|p| p.excluded)
    }

    pub fn to_csv(&self) -> String {
        let sigma = self.points.iter().any(|p| p.sigma_min_plus_i.is_some());
        let mut out = String::from("re_lambda,im_lambda,op_norm,excluded,iters");
        if sigma {
            out.push_str(",sigma_min_plus_i");
        }
        out.push('\n');
        for p in &self.points {
            let norm = p.op_norm.map_or("nan".to_string(), |v| v.to_string());
            let _ = write!(
                out,
                "{},{},{},{},{}",
                p.lambda.re,
                p.lambda.im,
                norm,
                u8::from(p.excluded),
                p.iterations
            );
            if sigma {
                let s = p
                    .sigma_min_plus_i
                    .map_or("nan".to_string(), |v| v.to_string());
                let _ = write!(out, ",{s}");
            }
            out.push('\n');
        }
        out
    }
}

fn axis<T: Real>(lo: T, hi: T, i: usize, n: usize) -> T {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)
    }
}

fn on_positive_axis<T: Real>(l: Cx<T>) -> bool {
    l.im == T::zero() && l.re >= T::zero()
}

struct Eval<T: Real> {
    norm: T,
    vector: Vec<Cx<T>>,
    iterations: usize,
    sigma: Option<T>,
}

fn evaluate<T: Real>(
    a: &BsMatrix<T>,
    warm: Option<Vec<Cx<T>>>,
    opts: &ScanOptions,
) -> Result<Eval<T>> {
    if a.is_zero() {
        return Ok(Eval {
            norm: T::zero(),
            vector: Vec::new(),
            iterations: 0,
            sigma: opts.sigma_min.then_some(T::one()),
        });
    }
    let normal = |v: &[Cx<T>]| a.apply_adjoint(&a.apply(v));
    let top = match warm {
        Some(v) if !v.is_empty() => hermitian_top_from(normal, v, &opts.power)?,
        _ => hermitian_top(a.len(), normal, &opts.power)?,
    };
    let sigma = if opts.sigma_min {
        Some(sigma_min_plus_identity(a, &opts.power)?)
    } else {
        None
    };
    Ok(Eval {
        norm: top.value.max(T::zero()).sqrt(),
        vector: top.vector,
        iterations: top.iterations,
        sigma,
    })
}

/// `||A(lambda)||` over a rectangle, row by row (imaginary part outer,
/// real part inner). Serial scans warm-start each point from the previous
/// top singular vector; parallel scans start every point from seeded vectors.
pub fn lambda_scan<T: Real>(
    v: &PotentialSpec<T>,
    rect: &Rect<T>,
    opts: &ScanOptions,
) -> Result<ScanResult<T>> {
    let started = std::time::Instant::now();
    let (nr, ni) = opts.res;
    if nr == 0 || ni == 0 {
        return Err(Error::InvalidParameter(
            "scan resolution must be positive".into(),
        ));
    }
    let lambdas: Vec<Cx<T>> = (0..ni)
        .flat_map(|j| (0..nr).map(move |i| (i, j)))
        .map(|(i, j)| {
            cx(
                axis(rect.re[0], rect.re[1], i, nr),
                axis(rect.im[0], rect.im[1], j, ni),
            )
        })
        .collect();
    if lambdas.iter().all(|l| on_positive_axis(*l)) {
        return Err(Error::InvalidParameter(
            "scan region lies entirely on [0, inf)".into(),
        ));
    }
    let grid: Arc<Grid<T>> = Arc::new(bs_grid(v, opts.grid_n)?);
    let one = |l: Cx<T>, warm: Option<Vec<Cx<T>>>| -> Result<Option<Eval<T>>> {
        if on_positive_axis(l) {
            return Ok(None);
        }
        let a = assemble_bs(v, &sqrt_branch(l)?, &grid)?;
        evaluate(&a, warm, opts).map(Some)
    };
    let evals: Vec<Option<Eval<T>>> = if opts.parallel {
        lambdas
            .par_iter()
            .map(|&l| one(l, None))
            .collect::<Result<Vec<_>>>()?
    } else {
        let mut out = Vec::with_capacity(lambdas.len());
        let mut warm: Option<Vec<Cx<T>>> = None;
        for &l in &lambdas {
            let e = one(l, warm.take())?;
            if let Some(e) = &e {
                warm = Some(e.vector.clone());
            }
            out.push(e);
        }
        out
    };
    let points = lambdas
        .iter()
        .zip(evals)
        .map(|(&lambda, e)| match e {
            Some(e) => ScanPoint {
                lambda,
                op_norm: Some(e.norm),
                excluded: e.norm < T::one(),
                iterations: e.iterations,
                sigma_min_plus_i: e.sigma,
            },
            None => ScanPoint {
                lambda,
                op_norm: None,
                excluded: false,
                iterations: 0,
                sigma_min_plus_i: None,
            },
        })
        .collect();
    Ok(ScanResult {
        rect: *rect,
        res: opts.res,
        grid_n: opts.grid_n,
        points,
        banner: SCAN_BANNER.to_string(),
        elapsed_ms: started.elapsed().as_millis(),
    })
}
