//! Gauss-Legendre rules and integration of kernels with a point singularity
//! at the origin.

use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::grid::Point;
use crate::scalar::Real;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0);
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (
        x.into_iter().map(T::lit).collect(),
        w.into_iter().map(T::lit).collect(),
    )
}

/// Values that can be accumulated by a quadrature rule.
pub trait Accum<T>: Copy + Zero + Add<Output = Self> + Mul<T, Output = Self> + Send + Sync {}
impl<T, O> Accum<T> for O where O: Copy + Zero + Add<Output = O> + Mul<T, Output = O> + Send + Sync {}

/// Tensor Gauss-Legendre rule on a box.
#[derive(Debug, Clone)]
pub struct TensorRule<T: Real> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> TensorRule<T> {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        TensorRule { nodes, weights }
    }

    pub fn integrate<O: Accum<T>>(&self, lo: &[T], hi: &[T], f: &impl Fn(&Point<T>) -> O) -> O {
        let d = lo.len();
        let half = T::lit(0.5);
        let mid: Vec<T> = (0..d).map(|a| half * (lo[a] + hi[a])).collect();
        let rad: Vec<T> = (0..d).map(|a| half * (hi[a] - lo[a])).collect();
        let jac = rad.iter().fold(T::one(), |acc, &r| acc * r);
        let n = self.nodes.len();
        let total = n.pow(d as u32);
        let mut acc = O::zero();
        for flat in 0..total {
            let mut p = [T::zero(); 3];
            let mut w = jac;
            let mut f2 = flat;
            for a in 0..d {
                let i = f2 % n;
                f2 /= n;
                p[a] = mid[a] + rad[a] * self.nodes[i];
                w *= self.weights[i];
            }
            acc = acc + f(&p) * w;
        }
        acc
    }
}

/// Integrates `|y|^{-gamma} g(y)` over a box, where only the first factor may
/// be singular (at the origin).
///
/// The box is cut along `splits` (per-axis coordinates where `g` has kinks)
/// and along the coordinate planes through the origin. Boxes near the origin
/// are bisected geometrically; the innermost box keeps `g(0)` frozen and
/// integrates the homogeneous factor exactly through its self-similarity.
pub struct SingularIntegrator<T: Real> {
    rule: TensorRule<T>,
    levels: usize,
}

impl<T: Real> SingularIntegrator<T> {
    pub fn new(order: usize, levels: usize) -> Self {
        SingularIntegrator {
            rule: TensorRule::new(order),
            levels,
        }
    }

    pub fn integrate<O: Accum<T>>(
        &self,
        lo: &[T],
        hi: &[T],
        splits: &[Vec<T>],
        gamma: T,
        g: &impl Fn(&Point<T>) -> O,
    ) -> O {
        let d = lo.len();
        // cut points per axis
        let mut cuts: Vec<Vec<T>> = Vec::with_capacity(d);
        for a in 0..d {
            let mut c = vec![lo[a], hi[a]];
            let mut extra = vec![T::zero()];
            if let Some(s) = splits.get(a) {
                extra.extend_from_slice(s);
            }
            for v in extra {
                if v > lo[a] && v < hi[a] {
                    c.push(v);
                }
            }
            c.sort_by(|x, y| x.partial_cmp(y).unwrap());
            c.dedup();
            cuts.push(c);
        }
        let counts: Vec<usize> = cuts.iter().map(|c| c.len() - 1).collect();
        let total: usize = counts.iter().product();
        let f = |p: &Point<T>| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            g(p) * r2.powf(-gamma / T::lit(2.0))
        };
        let mut acc = O::zero();
        for flat in 0..total {
            let mut f2 = flat;
            let mut blo = vec![T::zero(); d];
            let mut bhi = vec![T::zero(); d];
            for a in 0..d {
                let i = f2 % counts[a];
                f2 /= counts[a];
                blo[a] = cuts[a][i];
                bhi[a] = cuts[a][i + 1];
            }
            acc = acc + self.piece(&blo, &bhi, gamma, g, &f, 0);
        }
        acc
    }

    fn piece<O: Accum<T>>(
        &self,
        lo: &[T],
        hi: &[T],
        gamma: T,
        g: &impl Fn(&Point<T>) -> O,
        f: &impl Fn(&Point<T>) -> O,
        depth: usize,
    ) -> O {
        let d = lo.len();
        let mut near2 = T::zero();
        let mut diam2 = T::zero();
        let mut corner = true;
        for a in 0..d {
            let gap = lo[a].max(-hi[a]).max(T::zero());
            near2 += gap * gap;
            let w = hi[a] - lo[a];
            diam2 += w * w;
            if lo[a] != T::zero() && hi[a] != T::zero() {
                corner = false;
            }
        }
        let ratio = T::lit(0.5);
        if near2 >= ratio * ratio * diam2 {
            return self.rule.integrate(lo, hi, f);
        }
        if corner && depth >= self.levels {
            // innermost box: g frozen at the origin
            let o = [T::zero(); 3];
            return g(&o) * self.homogeneous_corner(lo, hi, gamma);
        }
        if depth >= self.levels + 8 {
            return self.rule.integrate(lo, hi, f);
        }
        let half = T::lit(0.5);
        let mut acc = O::zero();
        for bits in 0..(1usize << d) {
            let mut clo = vec![T::zero(); d];
            let mut chi = vec![T::zero(); d];
            for a in 0..d {
                let mid = half * (lo[a] + hi[a]);
                if (bits >> a) & 1 == 0 {
                    clo[a] = lo[a];
                    chi[a] = mid;
                } else {
                    clo[a] = mid;
                    chi[a] = hi[a];
                }
            }
            acc = acc + self.piece(&clo, &chi, gamma, g, f, depth + 1);
        }
        acc
    }

    /// `int_B |y|^{-gamma}` for a box with the origin at one corner, from
    /// `C(B) = C(B \ B/2) / (1 - 2^{-(d - gamma)})`.
    fn homogeneous_corner(&self, lo: &[T], hi: &[T], gamma: T) -> T {
        let d = lo.len();
        let half = T::lit(0.5);
        let f = |p: &Point<T>| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).powf(-gamma * half);
        let mut shell = T::zero();
        for bits in 1..(1usize << d) {
            let mut clo = vec![T::zero(); d];
            let mut chi = vec![T::zero(); d];
            for a in 0..d {
                let mid = half * (lo[a] + hi[a]);
                // the half touching the origin is the inner one
                let inner_is_low = lo[a] == T::zero();
                let take_outer = (bits >> a) & 1 == 1;
                let (l, h) = if inner_is_low {
                    (lo[a], mid)
                } else {
                    (mid, hi[a])
                };
                let (ol, oh) = if inner_is_low {
                    (mid, hi[a])
                } else {
                    (lo[a], mid)
                };
                if take_outer {
                    clo[a] = ol;
                    chi[a] = oh;
                } else {
                    clo[a] = l;
                    chi[a] = h;
                }
            }
            shell += self.rule.integrate(&clo, &chi, &f);
        }
        let dim = T::from_usize_lossy(d);
        shell / (T::one() - T::lit(2.0).powf(-(dim - gamma)))
    }
}

impl<T: Real> Default for SingularIntegrator<T> {
    fn default() -> Self {
        SingularIntegrator::new(8, 48)
    }
}

/// `int over [-h/2, h/2]^d` (per-axis widths `h`) of `|y|^{-gamma}`.
pub fn centered_cell_integral<T: Real>(h: &[T], gamma: T) -> T {
    let half = T::lit(0.5);
    let lo: Vec<T> = h.iter().map(|&v| -half * v).collect();
    let hi: Vec<T> = h.iter().map(|&v| half * v).collect();
    SingularIntegrator::default().integrate(&lo, &hi, &[], gamma, &|_| T::one())
}

static TABLE_FAULT: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Multiplies every subsequently built cell-integral table by `factor`;
/// `None` clears it. Used by harness tests to seed a quadrature bug.
#[doc(hidden)]
pub fn inject_table_fault(factor: Option<f64>) {
    TABLE_FAULT.store(
        factor.map_or(0, f64::to_bits),
        std::sync::atomic::Ordering::SeqCst,
    );
}

pub(crate) fn apply_table_fault<T: Real>(mut table: Vec<T>) -> Vec<T> {
    let bits = TABLE_FAULT.load(std::sync::atomic::Ordering::SeqCst);
    if bits != 0 {
        let f = T::lit(f64::from_bits(bits));
        table.iter_mut().for_each(|v| *v = *v * f);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..12 {
            let (x, w) = gauss_legendre::<f64>(n);
            for p in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 {
                    0.0
                } else {
                    2.0 / (p as f64 + 1.0)
                };
                assert!((got - exact).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn radial_singularity_one_dimension() {
        // int_{-1}^{1} |y|^{-1/2} dy = 4
        let s = SingularIntegrator::<f64>::default();
        let v = s.integrate(&[-1.0], &[1.0], &[], 0.5, &|_| 1.0);
        assert!((v - 4.0).abs() < 1e-12, "{v}");
        // int_0^2 |y|^{-0.9} (1 + y) dy = 2^{0.1}/0.1 + 2^{1.1}/1.1
        let v = s.integrate(&[0.0], &[2.0], &[], 0.9, &|p| 1.0 + p[0]);
        let exact = 2f64.powf(0.1) / 0.1 + 2f64.powf(1.1) / 1.1;
        assert!((v - exact).abs() < 1e-9 * exact, "{v} vs {exact}");
    }

    #[test]
    fn coulomb_cube_center() {
        // int_{[-1/2,1/2]^3} 1/|y| dy = 2.38007719...
        let v = centered_cell_integral(&[1.0, 1.0, 1.0], 1.0f64);
        assert!((v - 2.380_077_363_979_553_5).abs() < 1e-9, "{v}");
    }

    #[test]
    fn ball_volume_in_square() {
        // int_{[-1,1]^2} |y|^{-1} = 8 asinh(1)
        let v = SingularIntegrator::<f64>::default().integrate(
            &[-1.0, -1.0],
            &[1.0, 1.0],
            &[],
            1.0,
            &|_| 1.0,
        );
        assert!((v - 8.0 * 1f64.asinh()).abs() < 1e-10, "{v}");
    }
}
