//! Gamma function of complex argument.

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole<T: Real>(z: Cx<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round()
}

/// `Gamma(z)` via the Lanczos approximation, with reflection for `Re z < 1/2`.
pub fn gamma_complex<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    if is_pole(z) {
        return Err(Error::GammaPole {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
        });
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked<T: Real>(z: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    let one = Cx::new(T::one(), T::zero());
    if z.re < half {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let pi = T::PI();
        let s = (z * pi).sin();
        return cx(pi, T::zero()) / (s * gamma_unchecked(one - z));
    }
    let z = z - one;
    let mut x = cx(T::lit(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += cx(T::lit(c), T::zero()) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let sqrt_2pi = (T::lit(2.0) * T::PI()).sqrt();
    x * sqrt_2pi * t.powc(z + half) * (-t).exp()
}

/// Real-argument convenience wrapper.
pub fn gamma_real<T: Real>(x: T) -> Result<T> {
    gamma_complex(cx(x, T::zero())).map(|g| g.re)
}

/// Taylor coefficients of `1/Gamma(1 + mu)` about `mu = 0`.
const RGAMMA1: [f64; 29] = [
    1.0,
    5.772_156_649_015_328_606e-1,
    -6.558_780_715_202_538_811e-1,
    -4.200_263_503_409_523_553e-2,
    1.665_386_113_822_914_895e-1,
    -4.219_773_455_554_433_675e-2,
    -9.621_971_527_876_973_562e-3,
    7.218_943_246_663_099_542e-3,
    -1.165_167_591_859_065_112e-3,
    -2.152_416_741_149_509_728e-4,
    1.280_502_823_881_161_862e-4,
    -2.013_485_478_078_823_866e-5,
    -1.250_493_482_142_670_657e-6,
    1.133_027_231_981_695_882e-6,
    -2.056_338_416_977_607_104e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_511e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
];

/// Temme's auxiliary gammas for `|mu| <= 1/2`:
/// `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))` with
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
pub(crate) fn temme_gammas<T: Real>(mu: T) -> (T, T, T, T) {
    // even coefficients build gam2, odd ones (one power lower) build -gam1
    let mut gam2 = T::zero();
    let mut gam1 = T::zero();
    let mu2 = mu * mu;
    let mut p = T::one();
    for j in 0..RGAMMA1.len().div_ceil(2) {
        if 2 * j < RGAMMA1.len() {
            gam2 += T::lit(RGAMMA1[2 * j]) * p;
        }
        if 2 * j + 1 < RGAMMA1.len() {
            gam1 -= T::lit(RGAMMA1[2 * j + 1]) * p;
        }
        p *= mu2;
    }
    let oddpart = -gam1 * mu;
    (gam1, gam2, gam2 + oddpart, gam2 - oddpart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn special_values() {
        let g = gamma_complex(Complex64::new(1.0, 0.0)).unwrap();
        assert!(rel(g, Complex64::new(1.0, 0.0)) < 1e-13);
        let g = gamma_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!(rel(g, Complex64::new(std::f64::consts::PI.sqrt(), 0.0)) < 1e-13);
        for n in 1..15 {
            let fact: f64 = (1..n).map(|k| k as f64).product();
            let g = gamma_complex(Complex64::new(n as f64, 0.0)).unwrap();
            assert!(rel(g, Complex64::new(fact, 0.0)) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn modulus_on_the_line_re_one() {
        // |Gamma(1 + i y)|^2 = pi y / sinh(pi y)
        for y in [0.25, 1.0, 3.0, 10.0] {
            let g = gamma_complex(Complex64::new(1.0, y)).unwrap();
            let pi = std::f64::consts::PI;
            let exact = (pi * y / (pi * y).sinh()).sqrt();
            assert!((g.norm() - exact).abs() < 1e-12 * exact, "y={y}");
        }
        let g = gamma_complex(Complex64::new(1.0, 1.0)).unwrap();
        assert!((g.norm() - 0.521_564_046_864_94).abs() < 1e-12);
    }

    #[test]
    fn reflection_region() {
        // Gamma(-1/2) = -2 sqrt(pi), Gamma(z+1) = z Gamma(z)
        let g = gamma_complex(Complex64::new(-0.5, 0.0)).unwrap();
        assert!(rel(g, Complex64::new(-2.0 * std::f64::consts::PI.sqrt(), 0.0)) < 1e-13);
        let z = Complex64::new(-1.3, 0.7);
        let lhs = gamma_complex(z + 1.0).unwrap();
        let rhs = z * gamma_complex(z).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn poles_rejected() {
        for p in [0.0, -1.0, -4.0] {
            assert!(gamma_complex(Complex64::new(p, 0.0)).is_err());
        }
        assert!(gamma_complex(Complex64::new(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn temme_gammas_match_direct_evaluation() {
        for mu in [-0.5f64, -0.3, -1e-3, 0.0, 1e-6, 0.25, 0.5] {
            let (g1, g2, gp, gm) = temme_gammas(mu);
            let ip = 1.0 / gamma_real(1.0 + mu).unwrap();
            let im = 1.0 / gamma_real(1.0 - mu).unwrap();
            assert!((gp - ip).abs() < 1e-15);
            assert!((gm - im).abs() < 1e-15);
            assert!((g2 - 0.5 * (im + ip)).abs() < 1e-15);
            if mu.abs() > 0.1 {
                assert!((g1 - (im - ip) / (2.0 * mu)).abs() < 1e-14);
            }
        }
        let (g1, _, _, _) = temme_gammas(0.0f64);
        assert!((g1 + 0.577_215_664_901_532_9).abs() < 1e-16);
    }
}
