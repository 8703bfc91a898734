use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::{hermitian_top, PowerOptions};
use crate::potential::PotentialSpec;
use crate::scalar::{cx, Cx, Real};
use crate::toeplitz::SymmetricToeplitz;

use super::aux::cell_weights;
use super::ks::ks_norm;
use super::tables::riesz_table;
use super::{NormKind, NormRequest};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaRatio<T: Real> {
    /// `||w^{1/2} I_alpha w^{1/2}||` on `L^2`.
    pub operator_norm: T,
    pub ks_norm: T,
    pub ratio: T,
}

/// Operator norm of `f -> w^{1/2} I_alpha (w^{1/2} f)` divided by the KS norm of `w`.
///
/// The operator is discretised on `2^grid_level` cells per axis of the
/// support box; `ks` supplies the cube search depth and resolution.
pub fn ks_lemma_ratio<T: Real>(
    w: &PotentialSpec<T>,
    alpha: T,
    grid_level: u32,
    ks: &NormRequest<T>,
) -> Result<LemmaRatio<T>> {
    if !w.is_nonnegative() {
        return Err(Error::InvalidParameter("weight must be nonnegative".into()));
    }
    let req = NormRequest {
        kind: NormKind::Ks { alpha },
        beta: T::one(),
        ..ks.clone()
    };
    req.validate(w.d)?;
    let grid = Grid::uniform(w.support.clone(), 1usize << grid_level)?;
    let root: Vec<T> = cell_weights(w, &grid, T::one(), 2)
        .into_iter()
        .map(|v| v.sqrt())
        .collect();
    if root.iter().all(|&v| v == T::zero()) {
        return Err(Error::ZeroPotential);
    }
    let d = w.d;
    let table: Vec<Cx<T>> = riesz_table(
        &grid.spacing(),
        &grid.points_per_axis,
        T::from_usize_lossy(d) - alpha,
    )
    .into_iter()
    .map(|v| cx(v, T::zero()))
    .collect();
    let op = SymmetricToeplitz::new(&grid.points_per_axis, table);
    let apply = |f: &[Cx<T>]| {
        let g: Vec<Cx<T>> = f.iter().zip(&root).map(|(z, s)| *z * *s).collect();
        op.apply(&g)
            .into_iter()
            .zip(&root)
            .map(|(z, s)| z * *s)
            .collect::<Vec<_>>()
    };
    let opts = PowerOptions {
        tol: 1e-9,
        max_iter: 2000,
        ..PowerOptions::default()
    };
    let top = hermitian_top(grid.len(), apply, &opts)?;
    let ks_value = ks_norm(w, &req)?.value;
    Ok(LemmaRatio {
        operator_norm: top.value,
        ks_norm: ks_value,
        ratio: top.value / ks_value,
    })
}
