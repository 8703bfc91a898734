use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, hermitian_top, lanczos_top, norm2, random_unit, Lu, PowerOptions};
use crate::scalar::{cx, Cx, Real};

use super::BsMatrix;

/// Largest size for which `sigma_min(A + I)` uses a dense LU factorisation;
/// above it the inner solves use conjugate gradients on the normal equations.
pub const DENSE_LIMIT: usize = 2048;

/// Matrix-free access to a square complex operator.
pub trait LinearOperator<T: Real>: Sync {
    fn len(&self) -> usize;
    fn apply(&self, f: &[Cx<T>]) -> Vec<Cx<T>>;
    fn apply_adjoint(&self, f: &[Cx<T>]) -> Vec<Cx<T>>;
    fn to_dense(&self) -> Vec<Cx<T>>;
}

impl<T: Real> LinearOperator<T> for BsMatrix<T> {
    fn len(&self) -> usize {
        BsMatrix::len(self)
    }
    fn apply(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        BsMatrix::apply(self, f)
    }
    fn apply_adjoint(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        BsMatrix::apply_adjoint(self, f)
    }
    fn to_dense(&self) -> Vec<Cx<T>> {
        BsMatrix::to_dense(self)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub struct Dense<T: Real> {
    pub n: usize,
    pub data: Vec<Cx<T>>,
}

impl<T: Real> LinearOperator<T> for Dense<T> {
    fn len(&self) -> usize {
        self.n
    }
    fn apply(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j] * f[j]).sum())
            .collect()
    }
    fn apply_adjoint(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.data[j * self.n + i].conj() * f[j])
                    .sum()
            })
            .collect()
    }
    fn to_dense(&self) -> Vec<Cx<T>> {
        self.data.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralStats<T: Real> {
    pub op_norm: T,
    /// Power-iteration estimate `|v^H M v|`; a lower estimate of the spectral radius.
    pub spec_radius: T,
    pub spec_radius_converged: bool,
    pub sigma_min_plus_i: T,
    pub iterations: usize,
}

/// `sigma_min(M + I)` by inverse iteration on `(M + I)^H (M + I)`.
pub fn sigma_min_plus_identity<T: Real>(
    m: &impl LinearOperator<T>,
    opts: &PowerOptions,
) -> Result<T> {
    let n = m.len();
    if n <= DENSE_LIMIT {
        let mut a = m.to_dense();
        for i in 0..n {
            a[i * n + i] += cx(T::one(), T::zero());
        }
        let lu = match Lu::new(a, n) {
            Ok(lu) => lu,
            Err(Error::Singular) => return Ok(T::zero()),
            Err(e) => return Err(e),
        };
        let top = lanczos_top(n, |v| lu.solve(&lu.solve_adjoint(v)), opts)?;
        return Ok(T::one() / top.sqrt());
    }
    let shifted = |v: &[Cx<T>]| -> Vec<Cx<T>> {
        m.apply(v).into_iter().zip(v).map(|(a, b)| a + *b).collect()
    };
    let shifted_adj = |v: &[Cx<T>]| -> Vec<Cx<T>> {
        m.apply_adjoint(v)
            .into_iter()
            .zip(v)
            .map(|(a, b)| a + *b)
            .collect()
    };
    let normal = |v: &[Cx<T>]| shifted_adj(&shifted(v));
    let solve = |b: &[Cx<T>]| conjugate_gradient(&normal, b, T::lit(1e-12), 4 * n);
    let top = lanczos_top(n, solve, opts)?;
    Ok(T::one() / top.sqrt())
}

/// Conjugate gradients for a Hermitian positive definite operator.
fn conjugate_gradient<T: Real>(
    a: &impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    b: &[Cx<T>],
    rtol: T,
    max_iter: usize,
) -> Vec<Cx<T>> {
    let n = b.len();
    let mut x = vec![cx(T::zero(), T::zero()); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    let stop = rtol * rtol * rr;
    for _ in 0..max_iter {
        if rr <= stop {
            break;
        }
        let ap = a(&p);
        let alpha = rr / dot(&p, &ap).re;
        for i in 0..n {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let next = dot(&r, &r).re;
        let beta = next / rr;
        rr = next;
        for i in 0..n {
            p[i] = r[i] + p[i] * beta;
        }
    }
    x
}

fn spectral_radius<T: Real>(m: &impl LinearOperator<T>, opts: &PowerOptions) -> (T, bool) {
    let n = m.len();
    let mut best = (T::zero(), false);
    for r in 0..opts.restarts.max(1) {
        let mut v = random_unit::<T>(n, opts.seed.wrapping_add(0x5EED + r as u64));
        let mut est = cx(T::zero(), T::zero());
        let mut converged = false;
        for _ in 0..opts.max_iter {
            let w = m.apply(&v);
            let next = dot(&v, &w);
            let s = norm2(&w);
            if s == T::zero() {
                est = next;
                converged = true;
                break;
            }
            let change = (next - est).norm();
            est = next;
            v = w.into_iter().map(|z| z / s).collect();
            if change <= T::lit(opts.tol) * est.norm() {
                converged = true;
                break;
            }
        }
        if est.norm() > best.0 || (est.norm() == best.0 && converged) {
            best = (est.norm(), converged);
        }
    }
    best
}

/// Operator norm, spectral radius estimate and `sigma_min(M + I)`.
pub fn spectral_stats<T: Real>(m: &impl LinearOperator<T>, tol: f64) -> Result<SpectralStats<T>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let opts = PowerOptions {
        tol,
        max_iter: 5000,
        ..PowerOptions::default()
    };
    let n = m.len();
    let top = hermitian_top(n, |v| m.apply_adjoint(&m.apply(v)), &opts)?;
    let (rho, rho_ok) = spectral_radius(m, &opts);
    let sigma = sigma_min_plus_identity(m, &opts)?;
    Ok(SpectralStats {
        op_norm: top.value.max(T::zero()).sqrt(),
        spec_radius: rho,
        spec_radius_converged: rho_ok,
        sigma_min_plus_i: sigma,
        iterations: top.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn dense(n: usize, data: Vec<Complex64>) -> Dense<f64> {
        Dense { n, data }
    }

    #[test]
    fn diagonal_matrix() {
        let z = Complex64::new(0.0, 0.0);
        let m = dense(
            2,
            vec![Complex64::new(3.0, 0.0), z, z, Complex64::new(1.0, 0.0)],
        );
        let s = spectral_stats(&m, 1e-12).unwrap();
        assert!((s.op_norm - 3.0).abs() < 1e-9);
        assert!((s.spec_radius - 3.0).abs() < 1e-6);
        assert!((s.sigma_min_plus_i - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rank_one() {
        let u = [
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-1.0, 0.0),
        ];
        let v = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
        ];
        let data = (0..9).map(|k| u[k / 3] * v[k % 3].conj()).collect();
        let s = spectral_stats(&dense(3, data), 1e-12).unwrap();
        let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((s.op_norm - nu * nv).abs() < 1e-9);
    }

    #[test]
    fn singular_shift_gives_zero() {
        let z = Complex64::new(0.0, 0.0);
        let m = dense(
            2,
            vec![Complex64::new(-1.0, 0.0), z, z, Complex64::new(4.0, 0.0)],
        );
        assert_eq!(
            sigma_min_plus_identity(&m, &PowerOptions::default()).unwrap(),
            0.0
        );
        assert!(spectral_stats(&m, 0.0).is_err());
    }

    #[test]
    fn iterative_path_matches_dense() {
        let n = 40;
        let mut data = random_unit::<f64>(n * n, 5);
        data.iter_mut().for_each(|z| *z *= 3.0);
        let m = dense(n, data);
        let dense_sigma = sigma_min_plus_identity(&m, &PowerOptions::default()).unwrap();
        let normal = |v: &[Complex64]| {
            let a: Vec<Complex64> = m.apply(v).into_iter().zip(v).map(|(a, b)| a + b).collect();
            m.apply_adjoint(&a)
                .into_iter()
                .zip(&a)
                .map(|(x, y)| x + y)
                .collect::<Vec<_>>()
        };
        let solve = |b: &[Complex64]| conjugate_gradient(&normal, b, 1e-13, 10 * n);
        let top = hermitian_top(n, solve, &PowerOptions::default()).unwrap();
        assert!((1.0 / top.value.sqrt() - dense_sigma).abs() < 1e-6 * dense_sigma);
    }
}
