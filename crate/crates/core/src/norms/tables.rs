//! Kernel tables indexed by the absolute cell offset per axis.

use rayon::prelude::*;

use crate::grid::unflatten;
use crate::quadrature::{apply_table_fault, SingularIntegrator, TensorRule};
use crate::scalar::Real;

fn offsets(dims: &[usize]) -> Vec<[usize; 3]> {
    let total: usize = dims.iter().product();
    (0..total).map(|f| unflatten(f, dims)).collect()
}

/// `int_{cell} int_{cell + delta h} |x - y|^{-gamma} dy dx` for cells of widths `h`.
///
/// Equivalently `int_{[-h, h]} |u + delta h|^{-gamma} prod_a (h_a - |u_a|) du`.
pub fn pair_table<T: Real>(h: &[T], dims: &[usize], gamma: T) -> Vec<T> {
    let d = h.len();
    let sing = SingularIntegrator::<T>::default();
    let far = TensorRule::<T>::new(4);
    let table = offsets(dims)
        .into_par_iter()
        .map(|delta| {
            let centre: Vec<T> = (0..d)
                .map(|a| T::from_usize_lossy(delta[a]) * h[a])
                .collect();
            let tent = |y: &[T; 3]| {
                (0..d).fold(T::one(), |acc, a| acc * (h[a] - (y[a] - centre[a]).abs()))
            };
            let lo: Vec<T> = (0..d).map(|a| centre[a] - h[a]).collect();
            let hi: Vec<T> = (0..d).map(|a| centre[a] + h[a]).collect();
            let reach = delta[..d].iter().copied().max().unwrap_or(0);
            if reach <= 3 {
                let splits: Vec<Vec<T>> = centre.iter().map(|&c| vec![c]).collect();
                sing.integrate(&lo, &hi, &splits, gamma, &tent)
            } else {
                let f = |y: &[T; 3]| {
                    let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
                    tent(y) * r2.powf(-gamma * T::lit(0.5))
                };
                let mut acc = T::zero();
                for bits in 0..(1usize << d) {
                    let mut blo = lo.clone();
                    let mut bhi = hi.clone();
                    for a in 0..d {
                        if (bits >> a) & 1 == 0 {
                            bhi[a] = centre[a];
                        } else {
                            blo[a] = centre[a];
                        }
                    }
                    acc += far.integrate(&blo, &bhi, &f);
                }
                acc
            }
        })
        .collect();
    apply_table_fault(table)
}

/// `int_{cell at delta h} |y|^{-gamma} dy`: exact near the origin, point
/// values (times the cell volume) beyond two cells.
pub fn riesz_table<T: Real>(h: &[T], dims: &[usize], gamma: T) -> Vec<T> {
    let d = h.len();
    let vol = h.iter().fold(T::one(), |a, &b| a * b);
    let sing = SingularIntegrator::<T>::default();
    let half = T::lit(0.5);
    let table = offsets(dims)
        .into_par_iter()
        .map(|delta| {
            let reach = delta[..d].iter().copied().max().unwrap_or(0);
            let c: Vec<T> = (0..d)
                .map(|a| T::from_usize_lossy(delta[a]) * h[a])
                .collect();
            if reach <= 2 {
                let lo: Vec<T> = (0..d).map(|a| c[a] - half * h[a]).collect();
                let hi: Vec<T> = (0..d).map(|a| c[a] + half * h[a]).collect();
                sing.integrate(&lo, &hi, &[], gamma, &|_| T::one())
            } else {
                let r2 = c.iter().fold(T::zero(), |a, &v| a + v * v);
                vol * r2.powf(-gamma * half)
            }
        })
        .collect();
    apply_table_fault(table)
}

/// Cell integrals of the Kato kernel: `|y|^{2-d}` (d = 3), `log+(1/|y|)` (d = 2),
/// `1_{|y| <= 1}` (d = 1).
pub fn kato_table<T: Real>(h: &[T], dims: &[usize]) -> Vec<T> {
    let d = h.len();
    match d {
        3 => riesz_table(h, dims, T::one()),
        2 => {
            let eps = T::lit(1e-4);
            let plus = riesz_table(h, dims, eps);
            let minus = riesz_table(h, dims, -eps);
            let vol = h[0] * h[1];
            offsets(dims)
                .into_iter()
                .enumerate()
                .map(|(i, delta)| {
                    let reach = delta[0].max(delta[1]);
                    if reach <= 2 {
                        ((plus[i] - minus[i]) / (T::lit(2.0) * eps)).max(T::zero())
                    } else {
                        let x = T::from_usize_lossy(delta[0]) * h[0];
                        let y = T::from_usize_lossy(delta[1]) * h[1];
                        vol * (-(x * x + y * y).sqrt().ln()).max(T::zero())
                    }
                })
                .collect()
        }
        _ => {
            let half = T::lit(0.5) * h[0];
            (0..dims[0])
                .map(|i| {
                    let c = T::from_usize_lossy(i) * h[0];
                    let lo = (c - half).max(-T::one());
                    let hi = (c + half).min(T::one());
                    (hi - lo).max(T::zero())
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_table_sums_to_cube_coulomb_integral() {
        // int_{[0,1)^3 x [0,1)^3} |x - y|^{-1} = 1.8823126...
        for m in [1usize, 2, 4] {
            let h = vec![1.0 / m as f64; 3];
            let t = pair_table(&h, &[m, m, m], 1.0);
            let mut s = 0.0;
            for i in 0..m * m * m {
                for j in 0..m * m * m {
                    let a = unflatten(i, &[m, m, m]);
                    let b = unflatten(j, &[m, m, m]);
                    let k =
                        a[0].abs_diff(b[0]) + m * (a[1].abs_diff(b[1]) + m * a[2].abs_diff(b[2]));
                    s += t[k];
                }
            }
            assert!((s - 1.882_312_6).abs() < 2e-6, "m={m}: {s}");
        }
    }

    #[test]
    fn one_dimensional_pair_table_closed_form() {
        // int_0^1 int_0^1 |x - y|^{-1/2} = 8/3
        let m = 5;
        let t = pair_table(&[0.2], &[m], 0.5);
        let mut s = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                s += t[i.abs_diff(j)];
            }
        }
        assert!((s - 8.0 / 3.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn log_table_matches_closed_form_far_out() {
        let t = kato_table(&[0.01, 0.01], &[8, 8]);
        // int over the centred square of side h of log(1/|y|)
        // = h^2 (log(1/h) + 3/2 - pi/4 + log(2)/2)
        let h: f64 = 0.01;
        let exact = h * h * ((1.0 / h).ln() + 1.5 - std::f64::consts::FRAC_PI_4 + 0.5 * 2f64.ln());
        assert!((t[0] - exact).abs() < 1e-6 * exact, "{} {exact}", t[0]);
    }
}
