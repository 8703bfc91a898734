use crate::error::{Error, Result};
use crate::grid::{unflatten, Grid, Point};
use crate::potential::PotentialSpec;
use crate::scalar::{cx, Cx, Real};
use crate::toeplitz::SymmetricToeplitz;

use super::ks::ks_norm;
use super::tables::{kato_table, pair_table, riesz_table};
use super::{unit_ball_volume, NormKind, NormRequest, NormResult, TraceEntry, Witness};

/// `|V|^beta` averaged over `sub^d` points of each cell.
pub(crate) fn cell_weights<T: Real>(
    spec: &PotentialSpec<T>,
    grid: &Grid<T>,
    beta: T,
    sub: usize,
) -> Vec<T> {
    let d = grid.dim();
    let h = grid.spacing();
    let subs = vec![sub; d];
    let count = sub.pow(d as u32);
    let inv = T::one() / T::from_usize_lossy(count);
    let step = T::one() / T::from_usize_lossy(sub);
    let half = T::lit(0.5);
    grid.nodes
        .iter()
        .map(|c| {
            let mut acc = T::zero();
            for s in 0..count {
                let idx = unflatten(s, &subs);
                let mut p: Point<T> = *c;
                for a in 0..d {
                    p[a] += ((T::from_usize_lossy(idx[a]) + half) * step - half) * h[a];
                }
                acc += spec.eval(&p).norm().powf(beta);
            }
            acc * inv
        })
        .collect()
}

fn complexify<T: Real>(v: &[T]) -> Vec<Cx<T>> {
    v.iter().map(|&x| cx(x, T::zero())).collect()
}

fn convolve<T: Real>(dims: &[usize], table: &[T], w: &[T]) -> Vec<T> {
    SymmetricToeplitz::new(dims, complexify(table))
        .apply(&complexify(w))
        .into_iter()
        .map(|z| z.re)
        .collect()
}

/// `(I_alpha f)(x_i) = sum_j f_j int_{cell_j} |x_i - y|^{alpha-d} dy` on `grid`.
pub fn apply_riesz<T: Real>(f: &[Cx<T>], alpha: T, grid: &Grid<T>) -> Result<Vec<Cx<T>>> {
    let d = grid.dim();
    if !(alpha > T::zero() && alpha < T::from_usize_lossy(d)) {
        return Err(Error::InvalidParameter(format!(
            "Riesz potential needs 0 < alpha < d = {d}, got {alpha}"
        )));
    }
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: f.len(),
        });
    }
    let table = riesz_table(
        &grid.spacing(),
        &grid.points_per_axis,
        T::from_usize_lossy(d) - alpha,
    );
    Ok(SymmetricToeplitz::new(&grid.points_per_axis, complexify(&table)).apply(f))
}

fn point_witness<T: Real>(p: &Point<T>, d: usize) -> Vec<f64> {
    p[..d].iter().map(|v| v.to_f64_lossy()).collect()
}

fn argmax<T: Real>(v: &[T]) -> (usize, T) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate() {
        if x > best.1 {
            best = (i, x);
        }
    }
    best
}

fn single<T: Real>(value: T, witness: Option<Witness>, n: usize) -> NormResult<T> {
    NormResult {
        value,
        witness,
        trace: vec![TraceEntry {
            level: 0,
            value,
            evaluated: n,
        }],
        evaluated: n,
        pruned: 0,
    }
}

/// Any of the norms in [`NormKind`] applied to `|V|^beta`.
///
/// Kato, Rollnik, Morrey-Campanato and Lp are computed on a grid of
/// `2^level` cells per axis over the support box; KS delegates to
/// [`ks_norm`]. A vanishing potential gives 0 for every kind but KS.
pub fn aux_norm<T: Real>(
    spec: &PotentialSpec<T>,
    request: &NormRequest<T>,
) -> Result<NormResult<T>> {
    request.validate(spec.d)?;
    if let NormKind::Ks { .. } = request.kind {
        return ks_norm(spec, request);
    }
    let d = spec.d;
    let grid = Grid::uniform(spec.support.clone(), 1usize << request.level)?;
    let dims = grid.points_per_axis.clone();
    let h = grid.spacing();
    let vol = grid.cell_volume();
    let w = cell_weights(spec, &grid, request.beta, 2);
    let n = w.len();
    if w.iter().all(|&x| x == T::zero()) {
        return Ok(single(T::zero(), None, n));
    }
    match request.kind {
        NormKind::Lp { p } => {
            let s: T = w.iter().map(|&x| x.powf(p)).sum::<T>() * vol;
            Ok(single(s.powf(T::one() / p), None, n))
        }
        NormKind::Kato => {
            let u = convolve(&dims, &kato_table(&h, &dims), &w);
            let (i, v) = argmax(&u);
            Ok(single(
                v,
                Some(Witness::Point {
                    x: point_witness(&grid.nodes[i], d),
                }),
                n,
            ))
        }
        NormKind::Rollnik => {
            let u = convolve(&dims, &pair_table(&h, &dims, T::lit(2.0)), &w);
            let s: T = w.iter().zip(&u).map(|(a, b)| *a * *b).sum();
            Ok(single(s.max(T::zero()).sqrt(), None, n))
        }
        NormKind::MorreyCampanato { alpha, p } => {
            morrey_campanato(&grid, &w, alpha, p, request.radii_per_octave)
        }
        NormKind::Ks { .. } => unreachable!(),
    }
}

/// `sup_{x, r} r^alpha (r^{-d} int_{B(x,r)} W^p)^{1/p}` over grid nodes `x` and a
/// geometric radius ladder from one cell width to the box diameter, with
/// `r^{-d} int_B` evaluated as `|B_1|` times the mean over cells centred in `B`.
fn morrey_campanato<T: Real>(
    grid: &Grid<T>,
    w: &[T],
    alpha: T,
    p: T,
    per_octave: usize,
) -> Result<NormResult<T>> {
    let d = grid.dim();
    let dims = &grid.points_per_axis;
    let h = grid.spacing();
    let wp: Vec<T> = w.iter().map(|&x| x.powf(p)).collect();
    let r0 = h.iter().copied().fold(T::zero(), T::max);
    let diam = (0..d)
        .map(|a| {
            let s = grid.bbox.hi[a] - grid.bbox.lo[a];
            s * s
        })
        .sum::<T>()
        .sqrt();
    let omega = T::lit(unit_ball_volume(d));
    let mut best = T::zero();
    let mut witness = None;
    let mut trace = Vec::new();
    let mut j = 0usize;
    loop {
        let r = r0 * T::lit(2f64.powf(j as f64 / per_octave as f64));
        if r > diam * T::lit(1.0 + 1e-12) && j > 0 {
            break;
        }
        let r2 = r * r * T::lit(1.0 + 1e-12);
        let inside = |delta: &[i64]| {
            (0..d)
                .map(|a| {
                    let x = T::lit(delta[a] as f64) * h[a];
                    x * x
                })
                .sum::<T>()
                <= r2
        };
        let total: usize = dims.iter().product();
        let table: Vec<T> = (0..total)
            .map(|f| {
                let idx = unflatten(f, dims);
                let delta: Vec<i64> = idx[..d].iter().map(|&v| v as i64).collect();
                if inside(&delta) {
                    T::one()
                } else {
                    T::zero()
                }
            })
            .collect();
        // lattice points in the full ball, which may extend past the grid
        let reach: Vec<i64> = (0..d)
            .map(|a| (r / h[a]).floor().to_f64_lossy() as i64)
            .collect();
        let mut count = 0usize;
        let mut delta = vec![0i64; d];
        let span: Vec<usize> = reach.iter().map(|&q| (2 * q + 1) as usize).collect();
        for f in 0..span.iter().product::<usize>() {
            let idx = unflatten(f, &span);
            for a in 0..d {
                delta[a] = idx[a] as i64 - reach[a];
            }
            if inside(&delta) {
                count += 1;
            }
        }
        let s = convolve(dims, &table, &wp);
        let scale = r.powf(alpha);
        let inv_p = T::one() / p;
        let nc = T::from_usize_lossy(count);
        let vals: Vec<T> = s
            .iter()
            .map(|&v| scale * (omega * v.max(T::zero()) / nc).powf(inv_p))
            .collect();
        let (i, v) = argmax(&vals);
        if v > best {
            best = v;
            witness = Some(Witness::Ball {
                x: point_witness(&grid.nodes[i], d),
                r: r.to_f64_lossy(),
            });
        }
        trace.push(TraceEntry {
            level: j as i32,
            value: best,
            evaluated: vals.len(),
        });
        j += 1;
    }
    let evaluated = trace.iter().map(|t| t.evaluated).sum();
    Ok(NormResult {
        value: best,
        witness,
        trace,
        evaluated,
        pruned: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoxD;
    use num_complex::Complex64;

    #[test]
    fn kato_of_unit_ball() {
        let v = PotentialSpec::<f64>::ball(3, Complex64::new(1.0, 0.0), 1.0, &[0.0; 3]).unwrap();
        let r = aux_norm(&v, &NormRequest::new(NormKind::Kato, 3)).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((r.value - two_pi).abs() < 0.01 * two_pi, "{}", r.value);
        let Some(Witness::Point { x }) = r.witness else {
            panic!()
        };
        assert!(x.iter().all(|c| c.abs() < 0.07), "{x:?}");
    }

    #[test]
    fn zero_potential_gives_zero() {
        let v = PotentialSpec::<f64>::unit_cube(3, 0.0).unwrap();
        for kind in [
            NormKind::Kato,
            NormKind::Rollnik,
            NormKind::Lp { p: 2.0 },
            NormKind::MorreyCampanato { alpha: 1.0, p: 2.0 },
        ] {
            let mut req = NormRequest::new(kind, 3);
            req.level = 3;
            assert_eq!(aux_norm(&v, &req).unwrap().value, 0.0);
        }
    }

    #[test]
    fn lp_of_square_well() {
        let v = PotentialSpec::<f64>::unit_cube(2, -3.0).unwrap();
        let r = aux_norm(&v, &NormRequest::new(NormKind::Lp { p: 2.0 }, 2)).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rollnik_of_unit_cube() {
        // iint_{[0,1]^3 x [0,1]^3} |x - y|^{-2} = 2.9136...
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        let mut req = NormRequest::new(NormKind::Rollnik, 3);
        req.level = 2;
        let a = aux_norm(&v, &req).unwrap().value;
        req.level = 3;
        let b = aux_norm(&v, &req).unwrap().value;
        assert!((a - b).abs() < 1e-6 * b);
        assert!(aux_norm(
            &PotentialSpec::<f64>::unit_cube(2, 1.0).unwrap(),
            &NormRequest::new(NormKind::Rollnik, 2)
        )
        .is_err());
    }

    #[test]
    fn morrey_campanato_constant_cube() {
        // sup_r r^alpha (|B_1| avg)^{1/p}: alpha = d/p makes it r-free inside the cube
        let v = PotentialSpec::<f64>::unit_cube(1, 1.0).unwrap();
        let mut req = NormRequest::new(NormKind::MorreyCampanato { alpha: 1.0, p: 1.0 }, 1);
        req.level = 6;
        let r = aux_norm(&v, &req).unwrap();
        // r * (2 * |B(x,r) ∩ [0,1]| / (2r)) = |B(x, r) ∩ [0,1]| <= 1
        assert!((r.value - 1.0).abs() < 0.05, "{}", r.value);
        req.kind = NormKind::MorreyCampanato { alpha: 1.0, p: 2.0 };
        assert!(aux_norm(&v, &req).is_err());
    }

    #[test]
    fn point_mass_far_field() {
        let b = BoxD::cube(3, -8.0, 8.0).unwrap();
        let g = Grid::uniform(b, 16).unwrap();
        let mut f = vec![Complex64::new(0.0, 0.0); g.len()];
        let centre = g.locate(&[0.5, 0.5, 0.5]).unwrap();
        f[centre] = Complex64::new(1.0 / g.cell_volume(), 0.0);
        let u = apply_riesz(&f, 2.0, &g).unwrap();
        let c = g.nodes[centre];
        for (i, x) in g.nodes.iter().enumerate() {
            let r = crate::grid::dist(x, &c);
            if r >= 5.0 {
                assert!((u[i].re * r - 1.0).abs() < 0.01, "r = {r}: {}", u[i].re * r);
            }
        }
        assert!(apply_riesz(&f, 3.0, &g).is_err());
    }
}
