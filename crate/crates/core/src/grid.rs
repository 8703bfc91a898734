//! Axis-aligned boxes and uniform midpoint grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point in up to three dimensions; unused trailing coordinates are zero.
pub type Point<T> = [T; 3];

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

#[inline]
pub fn dist<T: Real>(a: &Point<T>, b: &Point<T>) -> T {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Axis-aligned box `[lo, hi)` in `d` dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxD<T: Real> {
    pub lo: Vec<T>,
    pub hi: Vec<T>,
}

impl<T: Real> BoxD<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        let b = BoxD { lo, hi };
        b.validate()?;
        Ok(b)
    }

    /// The cube `[lo, hi)^d`.
    pub fn cube(d: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d])
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.lo.len())?;
        if self.lo.len() != self.hi.len() {
            return Err(Error::DimensionMismatch {
                expected: self.lo.len(),
                found: self.hi.len(),
            });
        }
        for (l, h) in self.lo.iter().zip(&self.hi) {
            if !(l.is_finite() && h.is_finite() && h > l) {
                return Err(Error::InvalidParameter(format!(
                    "degenerate box side [{l}, {h}]"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> T {
        self.lo
            .iter()
            .zip(&self.hi)
            .fold(T::one(), |acc, (l, h)| acc * (*h - *l))
    }

    pub fn contains_box(&self, other: &BoxD<T>) -> bool {
        self.lo.iter().zip(&other.lo).all(|(a, b)| a <= b)
            && self.hi.iter().zip(&other.hi).all(|(a, b)| a >= b)
    }

    pub fn intersects(&self, lo: &[T], hi: &[T]) -> bool {
        (0..self.dim()).all(|a| self.lo[a] < hi[a] && lo[a] < self.hi[a])
    }

    /// Image of the box under `x -> x / t`.
    pub fn shrink(&self, t: T) -> BoxD<T> {
        BoxD {
            lo: self.lo.iter().map(|&v| v / t).collect(),
            hi: self.hi.iter().map(|&v| v / t).collect(),
        }
    }
}

/// Cell-centred tensor grid with uniform cell volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T: Real> {
    pub bbox: BoxD<T>,
    pub points_per_axis: Vec<usize>,
    pub nodes: Vec<Point<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn new(bbox: BoxD<T>, points_per_axis: Vec<usize>) -> Result<Self> {
        bbox.validate()?;
        let d = bbox.dim();
        if points_per_axis.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: points_per_axis.len(),
            });
        }
        if points_per_axis.iter().any(|&n| n == 0) {
            return Err(Error::InvalidParameter("zero points on an axis".into()));
        }
        let h: Vec<T> = (0..d)
            .map(|a| (bbox.hi[a] - bbox.lo[a]) / T::from_usize_lossy(points_per_axis[a]))
            .collect();
        let cell = h.iter().fold(T::one(), |acc, &v| acc * v);
        let total: usize = points_per_axis.iter().product();
        let mut nodes = Vec::with_capacity(total);
        let half = T::lit(0.5);
        for flat in 0..total {
            let idx = unflatten(flat, &points_per_axis);
            let mut p = [T::zero(); 3];
            for a in 0..d {
                p[a] = bbox.lo[a] + (T::from_usize_lossy(idx[a]) + half) * h[a];
            }
            nodes.push(p);
        }
        Ok(Grid {
            bbox,
            points_per_axis,
            nodes,
            weights: vec![cell; total],
        })
    }

    /// Same number of cells on every axis.
    pub fn uniform(bbox: BoxD<T>, n: usize) -> Result<Self> {
        let d = bbox.dim();
        Self::new(bbox, vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.bbox.dim()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Cell widths per axis.
    pub fn spacing(&self) -> Vec<T> {
        (0..self.dim())
            .map(|a| {
                (self.bbox.hi[a] - self.bbox.lo[a]) / T::from_usize_lossy(self.points_per_axis[a])
            })
            .collect()
    }

    pub fn cell_volume(&self) -> T {
        self.weights.first().copied().unwrap_or_else(T::zero)
    }

    /// Flat index of the cell containing `x`, if any.
    pub fn locate(&self, x: &Point<T>) -> Option<usize> {
        let h = self.spacing();
        let mut flat = 0usize;
        for a in (0..self.dim()).rev() {
            let t = (x[a] - self.bbox.lo[a]) / h[a];
            if !(t >= T::zero()) {
                return None;
            }
            let i = t.floor().to_usize()?;
            if i >= self.points_per_axis[a] {
                return None;
            }
            flat = flat * self.points_per_axis[a] + i;
        }
        Some(flat)
    }

    /// Grid with the same layout on the box scaled by `1/t`.
    pub fn shrink(&self, t: T) -> Result<Self> {
        Grid::new(self.bbox.shrink(t), self.points_per_axis.clone())
    }
}

/// Row-major unflattening with axis 0 fastest.
pub(crate) fn unflatten(mut flat: usize, dims: &[usize]) -> [usize; 3] {
    let mut idx = [0usize; 3];
    for (a, &n) in dims.iter().enumerate() {
        idx[a] = flat % n;
        flat /= n;
    }
    idx
}
