//! Small dense and matrix-free linear algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            max_iter: 500,
            tol: 1e-10,
            restarts: 3,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenEstimate<T: Real> {
    pub value: T,
    pub vector: Vec<Cx<T>>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn norm2<T: Real>(v: &[Cx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub fn dot<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn random_unit<T: Real>(n: usize, seed: u64) -> Vec<Cx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Cx<T>> = (0..n)
        .map(|_| {
            cx(
                T::lit(rng.gen_range(-1.0..1.0)),
                T::lit(rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|z| *z = *z / s);
    v
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator by
/// power iteration; the best of `opts.restarts` seeded starts is returned.
pub fn hermitian_top<T: Real>(
    n: usize,
    apply: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    opts: &PowerOptions,
) -> Result<EigenEstimate<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let mut best: Option<EigenEstimate<T>> = None;
    for r in 0..opts.restarts.max(1) {
        let v = random_unit::<T>(n, opts.seed.wrapping_add(r as u64));
        let est = power_from(&apply, v, opts);
        if best.as_ref().map_or(true, |b| est.value > b.value) {
            best = Some(est);
        }
    }
    finish(best.expect("at least one restart"))
}

/// [`hermitian_top`] from a single given start vector (warm start).
pub fn hermitian_top_from<T: Real>(
    apply: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    start: Vec<Cx<T>>,
    opts: &PowerOptions,
) -> Result<EigenEstimate<T>> {
    let s = norm2(&start);
    if s == T::zero() {
        return Err(Error::InvalidParameter("zero start vector".into()));
    }
    let v = start.into_iter().map(|z| z / s).collect();
    finish(power_from(&apply, v, opts))
}

fn finish<T: Real>(best: EigenEstimate<T>) -> Result<EigenEstimate<T>> {
    if !best.converged {
        return Err(Error::NoConvergence {
            what: "power iteration".into(),
            iterations: best.iterations,
            estimate: best.value.to_f64_lossy(),
        });
    }
    Ok(best)
}

fn power_from<T: Real>(
    apply: &impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    mut v: Vec<Cx<T>>,
    opts: &PowerOptions,
) -> EigenEstimate<T> {
    let mut value = T::zero();
    let mut converged = false;
    let mut it = 0;
    while it < opts.max_iter {
        it += 1;
        let w = apply(&v);
        let next = dot(&v, &w).re;
        let s = norm2(&w);
        if s == T::zero() {
            value = T::zero();
            converged = true;
            break;
        }
        let resid = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (*a - *b * next).norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt();
        v = w.into_iter().map(|z| z / s).collect();
        let change = (next - value).abs();
        value = next;
        // a clustered top makes the quotient creep; a small residual bounds its error
        if change <= T::lit(opts.tol) * value.abs()
            || resid <= T::lit(opts.tol.sqrt()) * value.abs()
        {
            converged = true;
            break;
        }
    }
    EigenEstimate {
        value,
        vector: v,
        iterations: it,
        converged,
    }
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator by Lanczos
/// with full reorthogonalisation. Unlike power iteration it resolves a
/// clustered top in few steps. Stops when the top Ritz value changes by less
/// than `tol` (relative) over two consecutive steps, or the Krylov space is
/// invariant.
pub fn lanczos_top<T: Real>(
    n: usize,
    apply: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    opts: &PowerOptions,
) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let steps = n.min(opts.max_iter.max(2));
    let mut basis: Vec<Vec<Cx<T>>> = vec![random_unit(n, opts.seed)];
    let (mut alpha, mut beta) = (Vec::<T>::new(), Vec::<T>::new());
    let mut theta = T::zero();
    let mut quiet = 0;
    for j in 0..steps {
        let mut w = apply(&basis[j]);
        alpha.push(dot(&basis[j], &w).re);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= *qi * c;
                }
            }
        }
        let b = norm2(&w);
        let next = tridiagonal_top(&alpha, &beta);
        let change = (next - theta).abs();
        theta = next;
        quiet = if j > 0 && change <= T::lit(opts.tol) * theta.abs() {
            quiet + 1
        } else {
            0
        };
        if quiet >= 2
            || b <= T::epsilon() * T::lit(64.0) * theta.abs().max(T::min_positive_value())
            || j + 1 == n
        {
            return Ok(theta);
        }
        beta.push(b);
        basis.push(w.into_iter().map(|z| z / b).collect());
    }
    Err(Error::NoConvergence {
        what: "Lanczos iteration",
        iterations: steps,
        estimate: theta.to_f64_lossy(),
    })
}

/// Largest eigenvalue of the real symmetric tridiagonal matrix with diagonal
/// `a` and off-diagonal `b`, by Sturm bisection.
fn tridiagonal_top<T: Real>(a: &[T], b: &[T]) -> T {
    let k = a.len();
    let off = |i: usize| if i < b.len() { b[i].abs() } else { T::zero() };
    let mut lo = T::infinity();
    let mut hi = -T::infinity();
    for i in 0..k {
        let r = off(i) + if i > 0 { off(i - 1) } else { T::zero() };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    // number of eigenvalues below x
    let below = |x: T| {
        let mut count = 0;
        let mut d = T::one();
        for i in 0..k {
            let b2 = if i > 0 {
                off(i - 1) * off(i - 1)
            } else {
                T::zero()
            };
            d = a[i] - x - if i > 0 { b2 / d } else { T::zero() };
            if d == T::zero() {
                d = T::epsilon() * (x.abs() + T::one());
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `||A||_2` from power iteration on `A^H A`.
pub fn operator_norm<T: Real>(
    n: usize,
    apply: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    apply_adjoint: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>,
    opts: &PowerOptions,
) -> Result<T> {
    let e = hermitian_top(n, |v| apply_adjoint(&apply(v)), opts)?;
    Ok(e.value.max(T::zero()).sqrt())
}

/// Dense row-major complex LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    n: usize,
    lu: Vec<Cx<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factorises `a` (row-major, `n x n`); `Error::Singular` on a zero pivot.
    pub fn new(mut a: Vec<Cx<T>>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pivot == T::zero() {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = a[k * n + k].inv();
            let (top, rest) = a.split_at_mut((k + 1) * n);
            let row_k = &top[k * n..];
            for row in rest.chunks_mut(n) {
                let f = row[k] * inv;
                row[k] = f;
                if f.norm_sqr() == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    row[j] -= f * row_k[j];
                }
            }
        }
        Ok(Lu { n, lu: a, perm })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.n;
        let mut x: Vec<Cx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.n;
        // A = P^T L U, so A^H = U^H L^H P
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = s / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![Cx::new(T::zero(), T::zero()); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }
}

/// Singular values (descending) by one-sided Jacobi rotations on the columns.
pub fn jacobi_singular_values<T: Real>(a: &[Cx<T>], rows: usize, cols: usize) -> Vec<T> {
    let mut c: Vec<Vec<Cx<T>>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i * cols + j]).collect())
        .collect();
    let eps = T::epsilon() * T::lit(10.0);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: T = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = c[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&c[p], &c[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g == T::zero() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let xp = c[p][i];
                    let xq = c[q][i];
                    c[p][i] = xp * cs - xq * phase.conj() * sn;
                    c[q][i] = xp * phase * sn + xq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<T> = c.iter().map(|col| norm2(col)).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}
