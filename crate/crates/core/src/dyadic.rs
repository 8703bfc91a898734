//! Dyadic cubes `2^{-k}([0,1)^d + m)`.

use serde::{Deserialize, Serialize};

use crate::grid::BoxD;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub d: usize,
    /// Generation; the side length is `2^{-k}`.
    pub k: i32,
    /// Corner index; unused trailing entries are zero.
    pub m: [i64; 3],
}

impl DyadicCube {
    pub fn new(d: usize, k: i32, m: [i64; 3]) -> Self {
        DyadicCube { d, k, m }
    }

    pub fn side<T: Real>(&self) -> T {
        T::lit(2f64.powi(-self.k))
    }

    pub fn lo<T: Real>(&self) -> Vec<T> {
        let s = 2f64.powi(-self.k);
        (0..self.d).map(|a| T::lit(self.m[a] as f64 * s)).collect()
    }

    pub fn hi<T: Real>(&self) -> Vec<T> {
        let s = 2f64.powi(-self.k);
        (0..self.d)
            .map(|a| T::lit((self.m[a] + 1) as f64 * s))
            .collect()
    }

    pub fn volume<T: Real>(&self) -> T {
        self.side::<T>().powi(self.d as i32)
    }

    pub fn parent(&self) -> DyadicCube {
        let mut m = [0i64; 3];
        for a in 0..self.d {
            m[a] = self.m[a].div_euclid(2);
        }
        DyadicCube::new(self.d, self.k - 1, m)
    }

    /// The `2^d` children in lexicographic order.
    pub fn children(&self) -> Vec<DyadicCube> {
        (0..1usize << self.d)
            .map(|bits| {
                let mut m = [0i64; 3];
                for a in 0..self.d {
                    m[a] = 2 * self.m[a] + ((bits >> a) & 1) as i64;
                }
                DyadicCube::new(self.d, self.k + 1, m)
            })
            .collect()
    }

    pub fn contains(&self, other: &DyadicCube) -> bool {
        if other.k < self.k {
            return false;
        }
        let shift = other.k - self.k;
        (0..self.d).all(|a| other.m[a] >> shift == self.m[a])
    }

    /// All generation-`k` cubes whose interior meets `b`, in lexicographic order.
    pub fn covering<T: Real>(b: &BoxD<T>, k: i32) -> Vec<DyadicCube> {
        let d = b.dim();
        let scale = 2f64.powi(k);
        let mut ranges = [(0i64, 1i64); 3];
        for a in 0..d {
            let lo = (b.lo[a].to_f64_lossy() * scale).floor() as i64;
            let hi = (b.hi[a].to_f64_lossy() * scale).ceil() as i64;
            ranges[a] = (lo, hi.max(lo + 1));
        }
        let mut out = Vec::new();
        for z in ranges[2].0..ranges[2].1 {
            for y in ranges[1].0..ranges[1].1 {
                for x in ranges[0].0..ranges[0].1 {
                    out.push(DyadicCube::new(d, k, [x, y, z]));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_cube_geometry() {
        let q = DyadicCube::new(3, 0, [0, 0, 0]);
        assert_eq!(q.side::<f64>(), 1.0);
        assert_eq!(q.children().len(), 8);
        assert_eq!(q.parent(), DyadicCube::new(3, -1, [0, 0, 0]));
        let q = DyadicCube::new(2, 1, [-1, 3, 0]);
        assert_eq!(q.lo::<f64>(), vec![-0.5, 1.5]);
        assert_eq!(q.hi::<f64>(), vec![0.0, 2.0]);
    }

    #[test]
    fn covering_tiles_box() {
        let b = BoxD::new(vec![-0.3, 0.1], vec![0.7, 0.9]).unwrap();
        let cubes = DyadicCube::covering(&b, 2);
        // [-0.5, 0.75) x [0, 1) in quarters
        assert_eq!(cubes.len(), 5 * 4);
        let total: f64 = cubes.iter().map(|c| c.volume::<f64>()).sum();
        assert!((total - 1.25).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn parent_contains_child(k in -5i32..8, x in -50i64..50, y in -50i64..50, z in -50i64..50) {
            let q = DyadicCube::new(3, k, [x, y, z]);
            prop_assert!(q.parent().contains(&q));
            for c in q.children() {
                prop_assert!(q.contains(&c));
                prop_assert_eq!(c.parent(), q);
            }
            // siblings are disjoint: distinct indices at one generation
            let kids = q.children();
            for i in 0..kids.len() {
                for j in i + 1..kids.len() {
                    prop_assert_ne!(kids[i].m, kids[j].m);
                }
            }
        }
    }
}
