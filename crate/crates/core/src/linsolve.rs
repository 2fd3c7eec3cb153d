//! Dense solver for the discounted systems `(I - γP) x = b`.
//!
//! Every closed-form evaluation (mean with γ = β, variance with γ = β²)
//! reduces to one of these. State spaces are small, so a dense Gaussian
//! elimination with partial pivoting is used and nothing is cached.

use crate::error::{Error, Result};
use crate::model::STOCHASTIC_TOLERANCE;

/// Square dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Panics if the rows are not all of length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix rows must be square");
            data.extend(row);
        }
        Matrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest deviation of a row sum from one.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.n)
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// A system `(I - gamma * P) x = b` with `P` row-stochastic.
#[derive(Clone, Debug)]
pub struct DiscountedSystem<'a> {
    pub transition: &'a Matrix,
    pub gamma: f64,
    pub rhs: &'a [f64],
}

impl<'a> DiscountedSystem<'a> {
    pub fn new(transition: &'a Matrix, gamma: f64, rhs: &'a [f64]) -> Self {
        DiscountedSystem {
            transition,
            gamma,
            rhs,
        }
    }

    fn check(&self) -> Result<()> {
        if self.rhs.len() != self.transition.size() {
            return Err(Error::DimensionMismatch {
                context: "discounted system right-hand side",
                expected: self.transition.size(),
                found: self.rhs.len(),
            });
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "discount {} must lie in (0,1)",
                self.gamma
            )));
        }
        // Mixed chains accumulate a little more round-off than file rows.
        if self.transition.max_row_sum_error() > 1e3 * STOCHASTIC_TOLERANCE {
            return Err(Error::InvalidArgument(
                "transition matrix is not row-stochastic".into(),
            ));
        }
        Ok(())
    }

    /// `‖(I - γP)x - b‖∞`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let px = self.transition.mul_vec(x);
        x.iter()
            .zip(&px)
            .zip(self.rhs)
            .map(|((xi, pxi), bi)| (xi - self.gamma * pxi - bi).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves `(I - γP) x = b`.
pub fn solve_discounted(system: &DiscountedSystem<'_>) -> Result<Vec<f64>> {
    system.check()?;
    let n = system.transition.size();
    let mut a = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j) - system.gamma * system.transition.get(i, j);
            a.set(i, j, v);
        }
    }
    Ok(gaussian_solve(a, system.rhs.to_vec()))
}

/// Gaussian elimination with partial pivoting. `a` must be nonsingular;
/// `I - γP` is strictly diagonally dominant by rows, so it always is.
fn gaussian_solve(mut a: Matrix, mut b: Vec<f64>) -> Vec<f64> {
    let n = a.size();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
            .expect("nonempty pivot range");
        if pivot != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot, j));
                a.set(pivot, j, tmp);
            }
            b.swap(col, pivot);
        }
        let d = a.get(col, col);
        for row in col + 1..n {
            let factor = a.get(row, col) / d;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a.get(row, j) - factor * a.get(col, j);
                a.set(row, j, v);
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| a.get(i, j) * x[j]).sum();
        x[i] = (b[i] - tail) / a.get(i, i);
    }
    x
}

/// The full inverse `(I - γP)⁻¹`, column by column.
pub fn discounted_inverse(p: &Matrix, gamma: f64) -> Result<Matrix> {
    let n = p.size();
    let mut inv = Matrix::zeros(n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let col = solve_discounted(&DiscountedSystem::new(p, gamma, &e))?;
        for (i, v) in col.into_iter().enumerate() {
            inv.set(i, k, v);
        }
    }
    Ok(inv)
}

/// True iff every entry of `(I - γP)⁻¹` is strictly positive.
pub fn positive_inverse_check(p: &Matrix, gamma: f64) -> bool {
    match discounted_inverse(p, gamma) {
        Ok(inv) => inv.data.iter().all(|&v| v > 0.0),
        Err(_) => false,
    }
}
