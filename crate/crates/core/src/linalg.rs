//! Dense complex singular values by one-sided Jacobi rotations.

use num_traits::Zero;

use crate::scalar::{cst, Real, C};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<C<T>>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate().take(rows) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn column_norm(&self, j: usize) -> T {
        (0..self.rows).map(|i| self[(i, j)].norm_sqr()).sum::<T>().sqrt()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<T> {
        // Work on columns of the taller orientation.
        let (n, mut cols) = if self.rows >= self.cols {
            (self.cols, (0..self.cols).map(|j| self.column(j)).collect::<Vec<_>>())
        } else {
            let rows: Vec<Vec<C<T>>> = (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)].conj()).collect())
                .collect();
            (self.rows, rows)
        };
        let eps = T::epsilon();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: T = cols[p].iter().map(|x| x.norm_sqr()).sum();
                    let beta: T = cols[q].iter().map(|x| x.norm_sqr()).sum();
                    let gamma: C<T> = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                    let g = gamma.norm();
                    if g <= eps * (alpha * beta).sqrt() || g.is_zero() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (cst::<T>(2.0) * g);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    let (left, right) = cols.split_at_mut(q);
                    for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let bq = *b * phase.conj();
                        let na = *a * c - bq * s;
                        let nb = *a * s + bq * c;
                        *a = na;
                        *b = nb;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<T> = cols
            .iter()
            .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }

    pub fn sigma_max(&self) -> T {
        self.singular_values().first().copied().unwrap_or_else(T::zero)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let sv = Matrix::<f64>::identity(5).singular_values();
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-15));
        let mut m = Matrix::<f64>::zeros(3, 3);
        m[(0, 0)] = C::new(0.0, -2.0);
        m[(1, 1)] = C::new(3.0, 0.0);
        m[(2, 2)] = C::new(0.5, 0.5);
        let sv = m.singular_values();
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 2.0).abs() < 1e-14);
        assert!((sv[2] - 0.5f64.hypot(0.5)).abs() < 1e-14);
    }

    #[test]
    fn rank_one_complex() {
        // u v^H with ‖u‖ = √2, ‖v‖ = √7.
        let u = [C::new(1.0, 0.0), C::new(0.0, 1.0)];
        let v = [C::new(1.0, 1.0), C::new(0.0, 2.0), C::new(0.0, -1.0)];
        let mut m = Matrix::<f64>::zeros(2, 3);
        for i in 0..2 {
            for j in 0..3 {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        let sv = m.singular_values();
        assert!((sv[0] - (2.0f64 * 7.0).sqrt()).abs() < 1e-13);
        assert!(sv[1].abs() < 1e-13);
    }

    #[test]
    fn shift_matrix_has_unit_singular_values() {
        let n = 6;
        let mut m = Matrix::<f64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = C::new(1.0, 0.0);
        }
        let sv = m.singular_values();
        assert!(sv[..n - 1].iter().all(|s| (s - 1.0).abs() < 1e-14));
        assert!(sv[n - 1].abs() < 1e-14);
    }
}
