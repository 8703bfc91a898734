//! Seeded families of test potentials.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{BoxD, Grid};
use crate::potential::PotentialSpec;
use crate::scalar::{cx, Cx, Real};

/// `n` nonnegative potentials in `d = 3` supported in `[0,1)^3`: piecewise
/// constant fields on `4^3` cells, off-centre balls, wells and Gaussians.
pub fn random_nonnegative<T: Real>(n: usize, seed: u64) -> Result<Vec<PotentialSpec<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = BoxD::cube(3, T::zero(), T::one())?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let spec = match i % 4 {
            0 | 1 => {
                let grid = Grid::uniform(unit.clone(), 4)?;
                let values: Vec<Cx<T>> = (0..grid.len())
                    .map(|_| {
                        let v: f64 = rng.gen_range(0.0..1.0);
                        cx(T::lit(if v < 0.3 { 0.0 } else { v }), T::zero())
                    })
                    .collect();
                PotentialSpec::new(
                    3,
                    crate::potential::Variant::Sampled {
                        grid: Arc::new(grid),
                        values: Arc::new(values),
                    },
                    unit.clone(),
                )?
            }
            2 => {
                let r: f64 = rng.gen_range(0.15..0.5);
                let c: Vec<T> = (0..3).map(|_| T::lit(rng.gen_range(r..1.0 - r))).collect();
                let depth = T::lit(rng.gen_range(0.5..2.0));
                let mut s = PotentialSpec::ball(3, cx(depth, T::zero()), T::lit(r), &c)?;
                s.support = unit.clone();
                s
            }
            _ => {
                let w: f64 = rng.gen_range(0.1..0.3);
                let c: Vec<T> = (0..3).map(|_| T::lit(rng.gen_range(0.3..0.7))).collect();
                let a = T::lit(rng.gen_range(0.5..2.0));
                let mut s =
                    PotentialSpec::gaussian(3, cx(a, T::zero()), T::lit(w), &c, T::lit(3.0))?;
                s.support = unit.clone();
                s
            }
        };
        out.push(spec);
    }
    Ok(out)
}
