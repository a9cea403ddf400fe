//! Dense exact linear algebra over any [`Field`].

use std::fmt;

use thiserror::Error;

use crate::arith::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    ctx: F::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of row reduction: the reduced matrix and its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Self { ctx: ctx.clone(), rows, cols, data: vec![F::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged { row: i, found: r.len(), expected: cols });
            }
            data.extend(r);
        }
        Ok(Self { ctx: ctx.clone(), rows: n, cols, data })
    }

    pub fn from_i64(ctx: &F::Ctx, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(ctx, rows.iter().map(|r| r.iter().map(|&v| F::from_i64(ctx, v)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(ctx: &F::Ctx, rows: usize, columns: &[Vec<F>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::Dimension(format!("column {j} has length {}, expected {rows}", c.len())));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!("vector length {} vs {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(&self.ctx), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Adds `factor · row src` to row `dst`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &F) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = self.get(dst, c).add(&factor.mul(s));
                self.set(dst, c, v);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form, pivoting on the first nonzero entry.
    pub fn rref(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c).neg();
                    m.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space: one vector per free column, with a 1
    /// there and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(&self.ctx); self.cols];
                v[f] = F::one(&self.ctx);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = reduced.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.ctx, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, F::one(&self.ctx));
        }
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(&self.ctx, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Some solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!("right-hand side length {} vs {} rows", b.len(), self.rows)));
        }
        let mut aug = Self::zeros(&self.ctx, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(&self.ctx); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }
}

/// Rank of the span of a list of vectors of common length.
pub fn span_rank<F: Field>(ctx: &F::Ctx, len: usize, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(ctx, len, vectors).map(|m| m.rank()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, PrimeField, Rational};

    fn nabla8() -> Matrix<Rational> {
        Matrix::from_i64(&(), &[&[16, 3, 0, 0, 0], &[0, 8, 6, 2, 0], &[0, 0, 0, 4, 1]]).unwrap()
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(Matrix::<Rational>::identity(&(), 3).rank(), 3);
        assert_eq!(Matrix::<Rational>::zeros(&(), 3, 4).rank(), 0);
        assert!(Matrix::<Rational>::identity(&(), 3).kernel_basis().is_empty());
    }

    #[test]
    fn one_by_two_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        let m = Matrix::<Fp>::from_i64(&f2, &[&[1, 1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![f2.elem(1), f2.elem(1)]]);
    }

    #[test]
    fn nabla_degree_eight() {
        let m = nabla8();
        assert_eq!(m.rank(), 3);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        let target: Vec<Rational> = [3, -16, 0, 64, -256].iter().map(|&v| Rational::from_integer(v.into())).collect();
        assert_eq!(span_rank(&(), 5, &k), span_rank(&(), 5, &[k[0].clone(), k[1].clone(), target]));
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = Matrix::<Rational>::from_i64(&(), &[&[1, 2], &[2, 4]]).unwrap();
        let q = |v: i64| Rational::from_integer(v.into());
        let x = m.solve(&[q(3), q(6)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(3), q(6)]);
        assert!(m.solve(&[q(3), q(7)]).unwrap().is_none());
        assert!(Matrix::<Rational>::from_i64(&(), &[&[1, 2], &[1]]).is_err());
        assert!(m.inverse().is_none());
        let a = Matrix::<Rational>::from_i64(&(), &[&[2, 1], &[5, 3]]).unwrap();
        assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), Matrix::identity(&(), 2));
    }
}
