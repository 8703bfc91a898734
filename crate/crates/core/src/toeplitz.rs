//! Convolution with kernels that depend only on `|i - j|` per axis.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::unflatten;
use crate::scalar::{Cx, Real};

/// Multilevel Toeplitz operator `(A f)_i = sum_j t[|i - j|] f_j` on a
/// `dims[0] x dims[1] x dims[2]` grid (axis 0 fastest).
///
/// `t` is indexed by the absolute offset per axis, flattened like the grid.
pub struct SymmetricToeplitz<T: Real> {
    dims: [usize; 3],
    table: Vec<Cx<T>>,
    padded: [usize; 3],
    spectrum: Vec<Cx<T>>,
    forward: [Arc<dyn Fft<T>>; 3],
    inverse: [Arc<dyn Fft<T>>; 3],
}

impl<T: Real> std::fmt::Debug for SymmetricToeplitz<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricToeplitz")
            .field("dims", &self.dims)
            .finish()
    }
}

fn pad3(dims: &[usize]) -> [usize; 3] {
    let mut out = [1; 3];
    out[..dims.len()].copy_from_slice(dims);
    out
}

impl<T: Real> SymmetricToeplitz<T> {
    pub fn new(dims: &[usize], table: Vec<Cx<T>>) -> Self {
        let dims = pad3(dims);
        assert_eq!(table.len(), dims.iter().product::<usize>());
        let padded = dims.map(|n| if n == 1 { 1 } else { 2 * n });
        let mut planner = FftPlanner::new();
        let forward = padded.map(|n| planner.plan_fft_forward(n));
        let inverse = padded.map(|n| planner.plan_fft_inverse(n));
        let mut op = SymmetricToeplitz {
            dims,
            table,
            padded,
            spectrum: Vec::new(),
            forward,
            inverse,
        };
        let total: usize = padded.iter().product();
        let mut circ = vec![Cx::new(T::zero(), T::zero()); total];
        for (flat, c) in circ.iter_mut().enumerate() {
            let idx = unflatten(flat, &padded);
            let mut src = 0;
            let mut stride = 1;
            let mut hole = false;
            for a in 0..3 {
                let p = padded[a];
                let i = idx[a];
                let off = if i <= p / 2 { i } else { p - i };
                if off >= dims[a] {
                    hole = true;
                }
                src += off * stride;
                stride *= dims[a];
            }
            if !hole {
                *c = op.table[src];
            }
        }
        op.fft3(&mut circ, false);
        op.spectrum = circ;
        op
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn table(&self) -> &[Cx<T>] {
        &self.table
    }

    fn offset_index(&self, i: usize, j: usize) -> usize {
        let a = unflatten(i, &self.dims);
        let b = unflatten(j, &self.dims);
        let mut idx = 0;
        let mut stride = 1;
        for ax in 0..3 {
            idx += a[ax].abs_diff(b[ax]) * stride;
            stride *= self.dims[ax];
        }
        idx
    }

    /// Matrix entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Cx<T> {
        self.table[self.offset_index(i, j)]
    }

    fn fft3(&self, data: &mut [Cx<T>], inverse: bool) {
        let p = self.padded;
        let plans = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let strides = [1, p[0], p[0] * p[1]];
        for a in 0..3 {
            if p[a] == 1 {
                continue;
            }
            let n = p[a];
            let lines: Vec<usize> = (0..data.len())
                .filter(|&f| (f / strides[a]) % n == 0)
                .collect();
            let plan = &plans[a];
            let results: Vec<Vec<Cx<T>>> = lines
                .par_iter()
                .map(|&start| {
                    let mut buf: Vec<Cx<T>> =
                        (0..n).map(|i| data[start + i * strides[a]]).collect();
                    plan.process(&mut buf);
                    buf
                })
                .collect();
            for (&start, buf) in lines.iter().zip(results) {
                for (i, v) in buf.into_iter().enumerate() {
                    data[start + i * strides[a]] = v;
                }
            }
        }
    }

    /// `A f` by zero-padded FFT.
    pub fn apply(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(f.len(), self.len());
        let p = self.padded;
        let total: usize = p.iter().product();
        let mut buf = vec![Cx::new(T::zero(), T::zero()); total];
        for (flat, v) in f.iter().enumerate() {
            let idx = unflatten(flat, &self.dims);
            buf[idx[0] + p[0] * (idx[1] + p[1] * idx[2])] = *v;
        }
        self.fft3(&mut buf, false);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= *s;
        }
        self.fft3(&mut buf, true);
        let norm = T::one() / T::from_usize_lossy(total);
        (0..self.len())
            .map(|flat| {
                let idx = unflatten(flat, &self.dims);
                buf[idx[0] + p[0] * (idx[1] + p[1] * idx[2])] * norm
            })
            .collect()
    }

    /// `A f` by direct summation, `O(n^2)`.
    pub fn apply_direct(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = Cx::new(T::zero(), T::zero());
                for (j, v) in f.iter().enumerate() {
                    acc += self.entry(i, j) * *v;
                }
                acc
            })
            .collect()
    }

    /// Row-major dense matrix.
    pub fn to_dense(&self) -> Vec<Cx<T>> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.entry(i, j));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn fft_matches_direct() {
        for dims in [vec![7usize], vec![4, 5], vec![3, 4, 2]] {
            let n: usize = dims.iter().product();
            let table: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(1.0 / (1.0 + i as f64), 0.1 * i as f64))
                .collect();
            let op = SymmetricToeplitz::new(&dims, table);
            let f: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos()))
                .collect();
            let a = op.apply(&f);
            let b = op.apply_direct(&f);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-12, "{dims:?}");
            }
            let dense = op.to_dense();
            assert_eq!(dense[1], op.table()[1]);
        }
    }
}
