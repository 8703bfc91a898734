use rayon::prelude::*;

use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::grid::{check_dim, unflatten, Point};
use crate::potential::PotentialSpec;
use crate::quadrature::centered_cell_integral;
use crate::scalar::{cx, Cx, Real};
use crate::toeplitz::SymmetricToeplitz;

use super::tables::pair_table;
use super::{NormKind, NormRequest, NormResult, TraceEntry, Witness};

/// Cells per cube above which the pair sum goes through the FFT.
const DIRECT_LIMIT: usize = 1024;

/// Relative slack on the pruning bound.
const BOUND_SLACK: f64 = 1e-9;

/// Per-cube evaluator on midpoint cells of width `side / 2^level`, never
/// coarser than `2^{-k_ref} / 2^level` where `2^{-k_ref}` covers the support.
///
/// `|V|^beta` vanishes off the support, so only cells meeting `Q ∩ support`
/// are sampled; the unit cell-pair table spans `2^{level+1}` cells per axis.
struct CubeEvaluator<'a, T: Real> {
    spec: &'a PotentialSpec<T>,
    d: usize,
    m: usize,
    k_ref: i32,
    beta: T,
    gamma: T,
    span: usize,
    unit: Vec<T>,
}

struct Patch<T> {
    dims: [usize; 3],
    w: Vec<T>,
    h: T,
}

impl<'a, T: Real> CubeEvaluator<'a, T> {
    fn new(spec: &'a PotentialSpec<T>, alpha: T, beta: T, level: u32) -> Self {
        let d = spec.d;
        let m = 1usize << level;
        let span = 2 * m + 1;
        let gamma = T::from_usize_lossy(d) - alpha;
        let unit = pair_table(&vec![T::one(); d], &vec![span; d], gamma);
        let widest = (0..d)
            .map(|a| (spec.support.hi[a] - spec.support.lo[a]).to_f64_lossy())
            .fold(0.0, f64::max);
        let k_ref = (1.0 / widest).log2().floor() as i32;
        CubeEvaluator {
            spec,
            d,
            m,
            k_ref,
            beta,
            gamma,
            span,
            unit,
        }
    }

    fn patch(&self, cube: &DyadicCube) -> Option<Patch<T>> {
        let qlo = cube.lo::<T>();
        let qhi = cube.hi::<T>();
        let k = cube.k.max(self.k_ref);
        let h = T::lit(2f64.powi(-k)) / T::from_usize_lossy(self.m);
        let mut first = [0usize; 3];
        let mut dims = [1usize; 3];
        for a in 0..self.d {
            let lo = qlo[a].max(self.spec.support.lo[a]);
            let hi = qhi[a].min(self.spec.support.hi[a]);
            if !(lo < hi) {
                return None;
            }
            let i0 = ((lo - qlo[a]) / h).floor().to_f64_lossy() as usize;
            let i1 = ((hi - qlo[a]) / h).ceil().to_f64_lossy() as usize;
            first[a] = i0;
            dims[a] = (i1 - i0).clamp(1, self.span);
        }
        let half = T::lit(0.5);
        let total: usize = dims.iter().product();
        let w = (0..total)
            .map(|flat| {
                let idx = unflatten(flat, &dims);
                let mut p: Point<T> = [T::zero(); 3];
                for a in 0..self.d {
                    p[a] = qlo[a] + (T::from_usize_lossy(first[a] + idx[a]) + half) * h;
                }
                self.spec.eval(&p).norm().powf(self.beta)
            })
            .collect();
        Some(Patch { dims, w, h })
    }

    /// `sum_{i,j} w_i w_j K[|i - j|]` on unit cells.
    fn pair_sum(&self, dims: &[usize; 3], w: &[T]) -> T {
        let s = self.span;
        let index = |a: [usize; 3], b: [usize; 3]| {
            a[0].abs_diff(b[0]) + s * (a[1].abs_diff(b[1]) + s * a[2].abs_diff(b[2]))
        };
        if w.len() > DIRECT_LIMIT {
            let table: Vec<Cx<T>> = (0..w.len())
                .map(|f| cx(self.unit[index(unflatten(f, dims), [0; 3])], T::zero()))
                .collect();
            let op = SymmetricToeplitz::new(&dims[..self.d], table);
            let f: Vec<Cx<T>> = w.iter().map(|&v| cx(v, T::zero())).collect();
            let g = op.apply(&f);
            return w.iter().zip(&g).map(|(a, b)| *a * b.re).sum();
        }
        let idx: Vec<[usize; 3]> = (0..w.len()).map(|f| unflatten(f, dims)).collect();
        let mut acc = T::zero();
        for (i, wi) in w.iter().enumerate() {
            if *wi == T::zero() {
                continue;
            }
            let mut row = T::zero();
            for (j, wj) in w.iter().enumerate() {
                row += *wj * self.unit[index(idx[i], idx[j])];
            }
            acc += *wi * row;
        }
        acc
    }

    /// `(int_Q |V|^beta, iint_{QxQ} |V|^beta |V|^beta |x-y|^{-gamma})`.
    fn evaluate(&self, cube: &DyadicCube) -> (T, T) {
        let Some(p) = self.patch(cube) else {
            return (T::zero(), T::zero());
        };
        let dd = T::from_usize_lossy(self.d);
        let mass = p.w.iter().copied().sum::<T>() * p.h.powf(dd);
        if mass == T::zero() {
            return (T::zero(), T::zero());
        }
        let sum = self.pair_sum(&p.dims, &p.w);
        (mass, sum * p.h.powf(T::lit(2.0) * dd - self.gamma))
    }
}

/// `C_d(gamma) = int_{[-1/2,1/2]^d} |y|^{-gamma}`: the ratio of a cube of side
/// `L` is at most `max |V|^beta C_d(d - alpha) L^alpha`.
pub fn upper_bound_constant<T: Real>(d: usize, alpha: T) -> T {
    centered_cell_integral(&vec![T::one(); d], T::from_usize_lossy(d) - alpha)
}

fn check_alpha<T: Real>(d: usize, alpha: T) -> Result<()> {
    check_dim(d)?;
    if !(alpha > T::zero() && alpha < T::from_usize_lossy(d)) {
        return Err(Error::InvalidParameter(format!(
            "KS needs 0 < alpha < d = {d}, got {alpha}"
        )));
    }
    Ok(())
}

/// `iint_{QxQ} |V(x)|^beta |V(y)|^beta / |x-y|^{d-alpha}` with `2^level` cells
/// per axis of `Q`; exact for potentials constant on those cells.
pub fn cube_double_integral<T: Real>(
    spec: &PotentialSpec<T>,
    cube: &DyadicCube,
    alpha: T,
    beta: T,
    level: u32,
) -> Result<T> {
    check_alpha(spec.d, alpha)?;
    if cube.d != spec.d {
        return Err(Error::DimensionMismatch {
            expected: spec.d,
            found: cube.d,
        });
    }
    if !spec.support.intersects(&cube.lo::<T>(), &cube.hi::<T>()) {
        return Ok(T::zero());
    }
    Ok(CubeEvaluator::new(spec, alpha, beta, level)
        .evaluate(cube)
        .1)
}

/// `sup_Q (int_Q |V|^beta)^{-1} iint_{QxQ} |V|^beta |V|^beta |x-y|^{alpha-d}` over
/// dyadic cubes of generations `k_min..=k_max` meeting the support.
///
/// Cubes whose bound cannot beat the running maximum are discarded together
/// with their descendants unless `request.exhaustive` is set.
pub fn ks_norm<T: Real>(
    spec: &PotentialSpec<T>,
    request: &NormRequest<T>,
) -> Result<NormResult<T>> {
    let alpha = match request.kind {
        NormKind::Ks { alpha } => alpha,
        _ => return Err(Error::InvalidParameter("ks_norm needs a KS request".into())),
    };
    request.validate(spec.d)?;
    check_alpha(spec.d, alpha)?;
    let eval = CubeEvaluator::new(spec, alpha, request.beta, request.level);
    let bound_c = upper_bound_constant(spec.d, alpha) * T::lit(1.0 + BOUND_SLACK);
    let floor = T::lit(1e-12) * spec.support.volume();
    let bound = |c: &DyadicCube| {
        spec.max_abs_on(&c.lo::<T>(), &c.hi::<T>())
            .powf(request.beta)
            * bound_c
            * c.side::<T>().powf(alpha)
    };

    let mut best = T::zero();
    let mut witness: Option<DyadicCube> = None;
    let mut trace = Vec::new();
    let mut evaluated = 0;
    let mut pruned = 0;
    let mut live = DyadicCube::covering(&spec.support, request.k_min);
    for k in request.k_min..=request.k_max {
        let values: Vec<(T, T)> = live.par_iter().map(|c| eval.evaluate(c)).collect();
        evaluated += live.len();
        for (c, (mass, dbl)) in live.iter().zip(&values) {
            if *mass < floor || *mass == T::zero() {
                continue;
            }
            let ratio = *dbl / *mass;
            let tie = T::lit(1e-9) * best;
            let better = ratio > best + tie
                || ((ratio - best).abs() <= tie && witness.map_or(true, |w| c.k > w.k));
            if better {
                best = best.max(ratio);
                witness = Some(*c);
            }
        }
        trace.push(TraceEntry {
            level: k,
            value: best,
            evaluated: live.len(),
        });
        if k == request.k_max {
            break;
        }
        let threshold = best * T::lit(1.0 - BOUND_SLACK);
        let mut next = Vec::with_capacity(live.len() << spec.d);
        for c in &live {
            for ch in c.children() {
                if !spec.support.intersects(&ch.lo::<T>(), &ch.hi::<T>()) {
                    continue;
                }
                if !request.exhaustive && bound(&ch) < threshold {
                    pruned += 1;
                    continue;
                }
                next.push(ch);
            }
        }
        live = next;
    }
    let Some(w) = witness else {
        return Err(Error::ZeroPotential);
    };
    Ok(NormResult {
        value: best,
        witness: Some(Witness::Cube {
            k: w.k,
            m: w.m[..spec.d].to_vec(),
        }),
        trace,
        evaluated,
        pruned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const COULOMB_CUBE: f64 = 1.882_312_6;

    #[test]
    fn unit_cube_value_and_witness() {
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        let r = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0)).unwrap();
        assert!((r.value - COULOMB_CUBE).abs() < 1e-5, "{}", r.value);
        assert_eq!(
            r.witness,
            Some(Witness::Cube {
                k: 0,
                m: vec![0, 0, 0]
            })
        );
        let ex = ks_norm(
            &v,
            &NormRequest {
                exhaustive: true,
                ..NormRequest::ks(3, 2.0, 1.0)
            },
        )
        .unwrap();
        assert!((ex.value - r.value).abs() < 1e-12);
        assert_eq!(ex.witness, r.witness);
        assert!(r.evaluated < ex.evaluated);
    }

    #[test]
    fn shrunk_cube_scales() {
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        let full = cube_double_integral(&v, &DyadicCube::new(3, 0, [0; 3]), 2.0, 1.0, 3).unwrap();
        for k in 1..=3 {
            let q = DyadicCube::new(3, k, [0; 3]);
            let s = q.side::<f64>();
            let got = cube_double_integral(&v, &q, 2.0, 1.0, 3).unwrap();
            assert!((got / full - s.powi(5)).abs() < 1e-9 * s.powi(5));
        }
        let far = DyadicCube::new(3, 0, [5, 0, 0]);
        assert_eq!(cube_double_integral(&v, &far, 2.0, 1.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn zero_potential_is_flagged() {
        let v = PotentialSpec::<f64>::unit_cube(3, 0.0).unwrap();
        assert!(matches!(
            ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0)),
            Err(Error::ZeroPotential)
        ));
    }

    #[test]
    fn alpha_range_checked() {
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        assert!(ks_norm(&v, &NormRequest::ks(3, 3.0, 1.0)).is_err());
        assert!(ks_norm(&v, &NormRequest::ks(3, 0.0, 1.0)).is_err());
    }
}
