//! Small dense LU used for per-degree reference systems.

use alloc::vec::Vec;

use crate::math::abs;

/// Row-major square matrix factorised in place with partial pivoting.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    /// `None` if the matrix is numerically singular.
    pub(crate) fn factorize(n: usize, mut a: Vec<f64>) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(abs(*v)));
        for k in 0..n {
            let (mut piv, mut best) = (k, abs(a[k * n + k]));
            for r in k + 1..n {
                let v = abs(a[r * n + k]);
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= 1e-14 * scale {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let pivot = a[k * n + k];
            for r in k + 1..n {
                let m = a[r * n + k] / pivot;
                a[r * n + k] = m;
                for j in k + 1..n {
                    a[r * n + j] -= m * a[k * n + j];
                }
            }
        }
        Some(Self { n, lu: a, perm })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let lu = DenseLu::factorize(2, alloc::vec![0.0, 1.0, 2.0, 1.0]).unwrap();
        let x = lu.solve(&[1.0, 4.0]);
        assert!((x[0] - 1.5).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(DenseLu::factorize(2, alloc::vec![1.0, 2.0, 2.0, 4.0]).is_none());
    }
}
