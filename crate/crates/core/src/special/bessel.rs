//! Macdonald functions `K_nu(w)` for real order and complex argument with
//! `Re w > 0`.
//!
//! Small arguments use Temme's form of the ascending series, which stays
//! accurate at integer order where the textbook series needs its logarithmic
//! variant. Moderate arguments use Steed's continued fraction, large ones
//! the Hankel asymptotic expansion. Orders above 1/2 are reached by the
//! upward recurrence, which is stable for `K`.

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

use super::gamma::temme_gammas;

/// `|w|` at or below which the ascending series is used.
pub const SERIES_RADIUS: f64 = 2.0;
/// `|w|` above which the asymptotic expansion replaces the continued fraction.
pub const ASYMPTOTIC_RADIUS: f64 = 20.0;
/// Largest supported order.
pub const MAX_ORDER: f64 = 3.0;

const MAXIT: usize = 20_000;

fn check<T: Real>(nu: T, w: Cx<T>) -> Result<()> {
    if !(w.re > T::zero()) || !w.im.is_finite() || !w.re.is_finite() {
        return Err(Error::Domain(format!("K_nu needs Re w > 0, got w = {w}")));
    }
    if !(nu >= T::zero() && nu <= T::lit(MAX_ORDER)) {
        return Err(Error::Domain(format!(
            "order {nu} outside [0, {MAX_ORDER}]"
        )));
    }
    Ok(())
}

/// `K_nu(w)`.
pub fn macdonald_k<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    if nu == T::lit(0.5) {
        return Ok(half_order_scaled(w) * (-w).exp());
    }
    Ok(general(nu, w))
}

/// `e^w K_nu(w)`, free of overflow and underflow for large `|w|`.
pub fn macdonald_k_scaled<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    if nu == T::lit(0.5) {
        return Ok(half_order_scaled(w));
    }
    Ok(general_scaled(nu, w))
}

/// `K_nu(w)` without the closed form at `nu = 1/2`; used to cross-check it.
pub fn macdonald_k_general<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    Ok(general(nu, w))
}

fn half_order_scaled<T: Real>(w: Cx<T>) -> Cx<T> {
    (cx(T::PI(), T::zero()) / (w * T::lit(2.0))).sqrt()
}

fn general<T: Real>(nu: T, w: Cx<T>) -> Cx<T> {
    let r = w.norm();
    if r <= T::lit(SERIES_RADIUS) {
        series(nu, w)
    } else {
        general_scaled(nu, w) * (-w).exp()
    }
}

fn general_scaled<T: Real>(nu: T, w: Cx<T>) -> Cx<T> {
    let r = w.norm();
    if r <= T::lit(SERIES_RADIUS) {
        series(nu, w) * w.exp()
    } else if r <= T::lit(ASYMPTOTIC_RADIUS) {
        continued_fraction_scaled(nu, w)
    } else {
        asymptotic_scaled(nu, w)
    }
}

/// Splits `nu = mu + n` with `|mu| <= 1/2`.
fn split_order<T: Real>(nu: T) -> (T, usize) {
    let n = (nu + T::lit(0.5)).floor();
    (nu - n, n.to_usize().unwrap_or(0))
}

fn recur_up<T: Real>(mu: T, n: usize, w: Cx<T>, mut k_mu: Cx<T>, mut k_mu1: Cx<T>) -> Cx<T> {
    let two_over_w = cx(T::lit(2.0), T::zero()) / w;
    for i in 1..=n {
        let next = two_over_w * (mu + T::from_usize_lossy(i)) * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    k_mu
}

/// Temme's series for `K_mu`, `K_{mu+1}`, then recurrence to `K_nu`.
pub fn macdonald_k_series<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    Ok(series(nu, w))
}

fn series<T: Real>(nu: T, w: Cx<T>) -> Cx<T> {
    let (mu, n) = split_order(nu);
    let eps = T::epsilon();
    let one = T::one();
    let half = T::lit(0.5);
    let x2 = w * half;
    let pimu = T::PI() * mu;
    let fact = if pimu.abs() < eps {
        one
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = d * mu;
    let fact2 = if e.norm() < T::lit(1e-4) {
        let e2 = e * e;
        cx(one, T::zero()) + e2 / T::lit(6.0) + e2 * e2 / T::lit(120.0)
    } else {
        e.sinh() / e
    };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = (e.cosh() * gam1 + fact2 * d * gam2) * fact;
    let mut sum = ff;
    let ee = e.exp();
    let mut p = ee * (half / gampl);
    let mut q = (ee * gammi).inv() * half;
    let mut c = cx(one, T::zero());
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..MAXIT {
        let fi = T::from_usize_lossy(i);
        ff = (ff * fi + p + q) / (fi * fi - mu2);
        c = c * dd / fi;
        p = p / (fi - mu);
        q = q / (fi + mu);
        let del = c * ff;
        sum += del;
        let del1 = c * (p - ff * fi);
        sum1 += del1;
        if del.norm() < sum.norm() * eps {
            break;
        }
    }
    let k_mu = sum;
    let k_mu1 = sum1 / x2;
    recur_up(mu, n, w, k_mu, k_mu1)
}

/// Steed's continued fraction for `e^w K_nu(w)`.
pub fn macdonald_k_continued_fraction<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    Ok(continued_fraction_scaled(nu, w))
}

fn continued_fraction_scaled<T: Real>(nu: T, w: Cx<T>) -> Cx<T> {
    let (mu, n) = split_order(nu);
    let one = cx(T::one(), T::zero());
    let two = T::lit(2.0);
    let eps = T::epsilon();
    let mut b = (one + w) * two;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = Cx::new(T::zero(), T::zero());
    let mut q2 = one;
    let a1 = T::lit(0.25) - mu * mu;
    let mut q = cx(a1, T::zero());
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 1..MAXIT {
        let fi = T::from_usize_lossy(i);
        a -= two * fi;
        c = -a * c / (fi + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += qnew * c;
        b += two;
        d = (b + d * a).inv();
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < s.norm() * eps {
            break;
        }
    }
    let h = h * a1;
    let k_mu = (cx(T::PI(), T::zero()) / (w * two)).sqrt() / s;
    let k_mu1 = k_mu * (w + mu + T::lit(0.5) - h) / w;
    recur_up(mu, n, w, k_mu, k_mu1)
}

/// Hankel expansion of `e^w K_nu(w)`, at least ten terms unless it terminates.
pub fn macdonald_k_asymptotic<T: Real>(nu: T, w: Cx<T>) -> Result<Cx<T>> {
    check(nu, w)?;
    Ok(asymptotic_scaled(nu, w))
}

fn asymptotic_scaled<T: Real>(nu: T, w: Cx<T>) -> Cx<T> {
    let four_nu2 = T::lit(4.0) * nu * nu;
    let eps = T::epsilon();
    let mut term = cx(T::one(), T::zero());
    let mut sum = term;
    let mut prev = T::infinity();
    for k in 1..200usize {
        let fk = T::from_usize_lossy(k);
        let odd = T::lit((2 * k - 1) as f64);
        term = term * (four_nu2 - odd * odd) / (w * T::lit(8.0) * fk);
        let size = term.norm();
        if size == T::zero() {
            break;
        }
        if k >= 10 && size > prev {
            break;
        }
        sum += term;
        if k >= 10 && size < eps * sum.norm() {
            break;
        }
        prev = size;
    }
    half_order_scaled(w) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt` by composite Simpson.
    fn k_quadrature(nu: f64, x: f64) -> f64 {
        let tmax = 40.0f64.max((60.0 / x).ln().max(1.0) + 5.0);
        let n = 200_000;
        let h = tmax / n as f64;
        let f = |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh();
        let mut s = f(0.0) + f(tmax);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn half_order_closed_form() {
        let k = macdonald_k(0.5, Complex64::new(1.0, 0.0)).unwrap();
        let exact = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!((k.re - exact).abs() < 1e-15);
        assert!((exact - 0.461_07).abs() < 1e-5);
    }

    #[test]
    fn order_zero_against_quadrature() {
        let oracle = k_quadrature(0.0, 1.0);
        assert!((oracle - 0.421_02).abs() < 1e-5);
        let k = macdonald_k(0.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!((k.re - oracle).abs() < 1e-12, "{} vs {}", k.re, oracle);
        assert!(k.im.abs() < 1e-16);
    }

    #[test]
    fn real_axis_against_quadrature() {
        for &nu in &[0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.75] {
            for &x in &[0.05, 0.7, 1.99, 2.01, 5.0, 19.0, 25.0] {
                let k = macdonald_k_general(nu, Complex64::new(x, 0.0)).unwrap();
                let q = k_quadrature(nu, x);
                assert!(
                    (k.re - q).abs() < 1e-10 * q,
                    "nu={nu} x={x}: {} vs {q}",
                    k.re
                );
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for &nu in &[0.0, 0.25, 1.0] {
            for w in [
                Complex64::new(0.3, 1.1),
                Complex64::new(3.0, -2.0),
                Complex64::new(30.0, 12.0),
            ] {
                let a = macdonald_k(nu, w).unwrap();
                let b = macdonald_k(nu, w.conj()).unwrap();
                assert!(rel(b, a.conj()) < 1e-14);
            }
        }
    }

    #[test]
    fn recurrence_and_wronskian_identities() {
        // K_{nu+1} - K_{nu-1} = (2 nu / w) K_nu
        let w = Complex64::new(0.8, 1.3);
        for &nu in &[1.0, 1.25, 2.0] {
            let lhs = macdonald_k(nu + 1.0, w).unwrap() - macdonald_k(nu - 1.0, w).unwrap();
            let rhs = macdonald_k(nu, w).unwrap() * (2.0 * nu) / w;
            assert!(rel(lhs, rhs) < 1e-12);
        }
    }

    #[test]
    fn half_order_general_path() {
        for x in [0.01, 0.5, 1.0, 1.9, 2.1, 7.0, 15.0, 30.0, 80.0] {
            let w = Complex64::new(x, 0.0);
            let closed = macdonald_k_scaled(0.5, w).unwrap();
            let general = macdonald_k_general(0.5, w).unwrap() * w.exp();
            assert!(rel(general, closed) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn switch_radius_agreement() {
        for &nu in &[0.0, 0.5, 1.0] {
            for i in 0..100 {
                let arg = -1.45 + 2.9 * (i as f64) / 99.0;
                for r in [1.8, 2.0, 2.2] {
                    let w = Complex64::from_polar(r, arg);
                    let s = macdonald_k_series(nu, w).unwrap() * w.exp();
                    let c = macdonald_k_continued_fraction(nu, w).unwrap();
                    assert!(rel(s, c) < 1e-9, "nu={nu} w={w}: {}", rel(s, c));
                }
            }
        }
    }

    #[test]
    fn asymptotic_matches_continued_fraction() {
        for &nu in &[0.0, 0.25, 1.0, 2.5] {
            for arg in [-1.3, -0.5, 0.0, 0.7, 1.4] {
                let w = Complex64::from_polar(ASYMPTOTIC_RADIUS, arg);
                let a = macdonald_k_asymptotic(nu, w).unwrap();
                let c = macdonald_k_continued_fraction(nu, w).unwrap();
                assert!(rel(a, c) < 1e-12, "nu={nu} arg={arg}: {}", rel(a, c));
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(macdonald_k(0.0, Complex64::new(0.0, 1.0)).is_err());
        assert!(macdonald_k(0.0, Complex64::new(-1.0, 0.0)).is_err());
        assert!(macdonald_k(3.5, Complex64::new(1.0, 0.0)).is_err());
    }
}
