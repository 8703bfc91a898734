//! Spectral parameter with its branch-resolved square roots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// A spectral parameter `lambda` off the half-axis `[0, inf)`.
///
/// `s` is the principal root of `-lambda` (always `Re s > 0`) and is the
/// decay rate of the free resolvent kernel. `w_dir` is the principal root of
/// `lambda` itself, taken with `arg lambda` in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint<T: Real> {
    pub lambda: Cx<T>,
    pub s: Cx<T>,
    pub w_dir: Cx<T>,
}

impl<T: Real> SpectralPoint<T> {
    pub fn new(lambda: Cx<T>) -> Result<Self> {
        sqrt_branch(lambda)
    }

    /// Argument of `lambda` on the principal branch, in `(-pi, pi]`.
    pub fn arg(&self) -> T {
        principal_arg(self.lambda)
    }

    pub fn is_real(&self) -> bool {
        self.lambda.im == T::zero()
    }

    pub fn norm(&self) -> T {
        self.lambda.norm()
    }
}

/// `arg z` in `(-pi, pi]`; a negative real axis with signed zero maps to `+pi`.
pub fn principal_arg<T: Real>(z: Cx<T>) -> T {
    if z.im == T::zero() && z.re < T::zero() {
        T::PI()
    } else {
        z.im.atan2(z.re)
    }
}

fn principal_sqrt<T: Real>(z: Cx<T>) -> Cx<T> {
    let r = z.norm().sqrt();
    let half = principal_arg(z) / T::lit(2.0);
    cx(r * half.cos(), r * half.sin())
}

/// Resolves both square-root branches of `lambda`.
pub fn sqrt_branch<T: Real>(lambda: Cx<T>) -> Result<SpectralPoint<T>> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite spectral parameter".into(),
        ));
    }
    if lambda.im == T::zero() && lambda.re >= T::zero() {
        return Err(Error::OnPositiveAxis {
            re: lambda.re.to_f64_lossy(),
            im: 0.0,
        });
    }
    let s = principal_sqrt(-lambda);
    let w_dir = principal_sqrt(lambda);
    Ok(SpectralPoint { lambda, s, w_dir })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn negative_axis() {
        let p = sqrt_branch(Complex64::new(-1.0, 0.0)).unwrap();
        assert!((p.s - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.w_dir - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // signed zero must not flip the branch
        let q = sqrt_branch(Complex64::new(-1.0, -0.0)).unwrap();
        assert_eq!(p.w_dir, q.w_dir);
    }

    #[test]
    fn imaginary_unit() {
        let p = sqrt_branch(Complex64::new(0.0, 1.0)).unwrap();
        let expected = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        assert!((p.s - expected).norm() < 1e-15);
        assert!((p.s.re - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-15);
    }

    #[test]
    fn real_part_of_direct_root() {
        let p = sqrt_branch(Complex64::new(0.0, 4.0)).unwrap();
        assert!((p.w_dir.re - 2f64.sqrt()).abs() < 1e-14);
        let via_arg = p.norm().sqrt() * (0.5 * p.arg()).cos();
        assert!((p.w_dir.re - via_arg).abs() < 1e-14);
    }

    #[test]
    fn rejects_positive_axis() {
        assert!(sqrt_branch(Complex64::new(0.0, 0.0)).is_err());
        assert!(sqrt_branch(Complex64::new(2.5, 0.0)).is_err());
        assert!(sqrt_branch(Complex64::new(2.5, 1e-300)).is_ok());
    }

    #[test]
    fn single_precision() {
        let p = sqrt_branch(num_complex::Complex32::new(-4.0, 0.0)).unwrap();
        assert!((p.s.re - 2.0).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn squares_back(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            prop_assume!(im != 0.0 || re < 0.0);
            let lam = Complex64::new(re, im);
            let p = sqrt_branch(lam).unwrap();
            let scale = lam.norm().max(1.0);
            prop_assert!((p.s * p.s + lam).norm() <= 1e-13 * scale);
            prop_assert!((p.w_dir * p.w_dir - lam).norm() <= 1e-13 * scale);
            prop_assert!(p.s.re > 0.0);
            if im >= 0.0 {
                prop_assert!(p.w_dir.im >= 0.0);
            }
            if im != 0.0 {
                prop_assert!(p.w_dir.re > 0.0);
            }
        }

        #[test]
        fn conjugation(re in -1e3f64..1e3, im in prop_oneof![-1e3f64..-1e-6, 1e-6f64..1e3]) {
            let lam = Complex64::new(re, im);
            let a = sqrt_branch(lam).unwrap();
            let b = sqrt_branch(lam.conj()).unwrap();
            prop_assert!((b.s - a.s.conj()).norm() <= 1e-14 * a.s.norm());
        }
    }
}
