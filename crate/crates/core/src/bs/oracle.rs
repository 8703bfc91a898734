use crate::scalar::{cx, Cx, Real};

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Starting values of `s = sqrt(-lambda)` per unit of `sqrt|depth|`.
    pub starts: usize,
    pub max_newton: usize,
    pub residual: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            starts: 24,
            max_newton: 100,
            residual: 1e-10,
        }
    }
}

fn sinc<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.norm() < T::lit(1e-4) {
        let z2 = z * z;
        cx(T::one(), T::zero()) - z2 / T::lit(6.0) + z2 * z2 / T::lit(120.0)
    } else {
        z.sin() / z
    }
}

/// Matching conditions at `x = a` in terms of `s`, with `k^2 = -s^2 - depth`.
/// Both are even in `k`, so the branch of `k` is irrelevant.
fn even<T: Real>(s: Cx<T>, c: Cx<T>, a: T) -> Cx<T> {
    let k2 = -s * s - c;
    // k sin(ka) - s cos(ka), with k sin(ka) = k^2 a sinc(ka)
    let k = k2.sqrt();
    k2 * a * sinc(k * a) - s * (k * a).cos()
}

fn odd<T: Real>(s: Cx<T>, c: Cx<T>, a: T) -> Cx<T> {
    let k = (-s * s - c).sqrt();
    // k cos(ka) + s sin(ka), divided by k
    (k * a).cos() + s * a * sinc(k * a)
}

fn newton<T: Real>(
    f: &impl Fn(Cx<T>) -> Cx<T>,
    mut s: Cx<T>,
    opts: &OracleOptions,
) -> Option<Cx<T>> {
    for _ in 0..opts.max_newton {
        let v = f(s);
        let h = T::lit(1e-7) * (T::one() + s.norm());
        let dv = (f(s + h) - f(s - h)) / (h * T::lit(2.0));
        if dv.norm() == T::zero() || !dv.norm().is_finite() {
            return None;
        }
        let step = v / dv;
        s -= step;
        if !s.norm().is_finite() {
            return None;
        }
        if step.norm() < T::lit(1e-14) * (T::one() + s.norm()) {
            break;
        }
    }
    (f(s).norm() < T::lit(opts.residual)).then_some(s)
}

/// Eigenvalues of `-u'' + V u = lambda u` for `V = depth` on `[-a, a]`, zero
/// outside, sorted by real part. Only roots with `Re sqrt(-lambda) > 0`
/// (decaying outside the well) are returned.
pub fn square_well_oracle_1d<T: Real>(
    depth: Cx<T>,
    half_width: T,
    opts: &OracleOptions,
) -> Vec<Cx<T>> {
    if depth.norm() == T::zero() || !(half_width > T::zero()) {
        return Vec::new();
    }
    let a = half_width;
    let scale = depth.norm().sqrt();
    let mut roots: Vec<Cx<T>> = Vec::new();
    let fe = |s: Cx<T>| even(s, depth, a);
    let fo = |s: Cx<T>| odd(s, depth, a);
    for i in 0..opts.starts {
        let r = scale * T::from_usize_lossy(i + 1) / T::from_usize_lossy(opts.starts);
        for phase in [T::zero(), T::lit(0.4), T::lit(-0.4)] {
            let start = Cx::from_polar(r, phase);
            for s in [newton(&fe, start, opts), newton(&fo, start, opts)]
                .into_iter()
                .flatten()
            {
                if s.re <= T::lit(1e-8) {
                    continue;
                }
                let lambda = -s * s;
                if roots
                    .iter()
                    .all(|q| (*q - lambda).norm() > T::lit(1e-8) * (T::one() + lambda.norm()))
                {
                    roots.push(lambda);
                }
            }
        }
    }
    roots.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    roots
}
