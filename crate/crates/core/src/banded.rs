//! Non-symmetric banded matrices with LU factorisation (partial pivoting).
//!
//! Row `r` stores columns `r - kl ..= r + ku + kl`; the extra `kl`
//! super-diagonals hold fill-in created by row interchanges, as in LAPACK's
//! `gbtrf`. Multipliers of step `k` stay in column `k` of the rows below the
//! pivot and are not swapped by later interchanges.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = value;
    }

    /// Panics when `(i, j)` lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += value;
    }

    /// Zeroes row `i` and column `i` inside the band and puts 1 on the diagonal.
    pub fn eliminate(&mut self, i: usize) {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        for j in lo..=hi {
            let s = self.slot(i, j);
            self.data[s] = 0.0;
        }
        let lo = i.saturating_sub(self.ku);
        let hi = (i + self.kl).min(self.n - 1);
        for r in lo..=hi {
            let s = self.slot(r, i);
            self.data[s] = 0.0;
        }
        let s = self.slot(i, i);
        self.data[s] = 1.0;
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.slot(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// `y^T A x`.
    pub fn bilinear(&self, y: &[f64], x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// LU factorisation with partial pivoting, consuming the matrix.
    pub fn factorize(mut self) -> Result<BandedLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut piv = k;
            let mut best = abs(self.data[self.slot(k, k)]);
            for r in k + 1..=last_row {
                let v = abs(self.data[self.slot(r, k)]);
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            pivots[k] = piv;
            if best == 0.0 {
                return Err(Error::SingularPivot { row: k });
            }
            if piv != k {
                for j in k..=last_col {
                    let (a, b) = (self.slot(k, j), self.slot(piv, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            let row_k = self.slot(k, k);
            for r in k + 1..=last_row {
                let s = self.slot(r, k);
                let m = self.data[s] / pivot;
                self.data[s] = m;
                if m == 0.0 {
                    continue;
                }
                let base_r = self.slot(r, k);
                for off in 1..=(last_col - k) {
                    let u = self.data[row_k + off];
                    self.data[base_r + off] -= m * u;
                }
            }
        }
        Ok(BandedLu {
            factors: self,
            pivots,
        })
    }
}

/// Factorised banded matrix.
#[derive(Debug, Clone)]
pub struct BandedLu {
    factors: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let a = &self.factors;
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        for k in 0..n {
            let piv = self.pivots[k];
            if piv != k {
                x.swap(k, piv);
            }
            let xk = x[k];
            if xk != 0.0 {
                for r in k + 1..=(k + kl).min(n - 1) {
                    x[r] -= a.data[a.slot(r, k)] * xk;
                }
            }
        }
        for k in (0..n).rev() {
            let hi = (k + kl + ku).min(n - 1);
            let row = a.slot(k, k);
            let mut s = x[k];
            for off in 1..=(hi - k) {
                s -= a.data[row + off] * x[k + off];
            }
            x[k] = s / a.data[row];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tridiagonal_poisson() {
        let mut a = BandedMatrix::zeros(3, 1, 1);
        for i in 0..3 {
            a.set(i, i, 2.0);
            if i > 0 {
                a.set(i, i - 1, -1.0);
                a.set(i - 1, i, -1.0);
            }
        }
        let x = a.factorize().unwrap().solve(&[1.0, 1.0, 1.0]);
        for (v, e) in x.iter().zip(&[1.5, 2.0, 1.5]) {
            assert_abs_diff_eq!(v, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn identity_solves_to_rhs() {
        let mut a = BandedMatrix::zeros(5, 2, 1);
        for i in 0..5 {
            a.eliminate(i);
        }
        let rhs = [1.0, -2.0, 3.0, 0.5, 7.0];
        assert_eq!(a.factorize().unwrap().solve(&rhs), rhs.to_vec());
    }

    #[test]
    fn pivoting_needed() {
        // zero leading diagonal forces a row swap
        let mut a = BandedMatrix::zeros(3, 1, 1);
        a.set(0, 0, 0.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 2.0);
        a.set(1, 1, 1.0);
        a.set(1, 2, 1.0);
        a.set(2, 1, 1.0);
        a.set(2, 2, 3.0);
        let x_true = [1.0, 2.0, 3.0];
        let b = a.mul_vec(&x_true);
        let x = a.factorize().unwrap().solve(&b);
        for (v, e) in x.iter().zip(&x_true) {
            assert_abs_diff_eq!(v, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_detected() {
        let a = BandedMatrix::zeros(4, 1, 1);
        assert_eq!(a.factorize().unwrap_err(), Error::SingularPivot { row: 0 });
    }

    #[test]
    #[should_panic(expected = "outside band")]
    fn out_of_band_write_panics() {
        let mut a = BandedMatrix::zeros(6, 1, 2);
        a.add(0, 4, 1.0);
    }
}
