use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::numerics::{Backend, Rational, Scalar};

/// Dense n x n matrix, row-major, all entries in one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn new(n: usize, data: Vec<S>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("matrix must be at least 1x1".into()));
        }
        if data.len() != n * n {
            return Err(Error::Input(format!("{} entries do not form a {n}x{n} matrix", data.len())));
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Input("matrix has no rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "row {} has {} entries, expected {n} for a square matrix",
                    i + 1,
                    row.len()
                )));
            }
        }
        Ok(SquareMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(n > 0);
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SquareMatrix { n, data }
    }

    pub fn identity_like(n: usize, like: &S) -> Self {
        let (zero, one) = (like.zero_like(), like.one_like());
        Self::from_fn(n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zeros_like(n: usize, like: &S) -> Self {
        let zero = like.zero_like();
        Self::from_fn(n, |_, _| zero.clone())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> Backend {
        self.data[0].backend()
    }

    /// Any entry, used as the template for constants in this backend.
    pub fn like(&self) -> &S {
        &self.data[0]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn trace(&self) -> S {
        let mut t = self.like().zero_like();
        for i in 0..self.n {
            t += &self[(i, i)];
        }
        t
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        SquareMatrix { n: self.n, data: self.data.iter().map(|x| x.clone() * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SquareMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SquareMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect() }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        let mut best = self.like().zero_like();
        for x in &self.data {
            let a = x.magnitude();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Largest `|m[i][j] - m[j][i]|`.
    pub fn asymmetry(&self) -> S {
        let mut worst = self.like().zero_like();
        for i in 0..self.n {
            for j in 0..i {
                let d = (self[(i, j)].clone() - &self[(j, i)]).magnitude();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// `(m + m^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = self.like().lift(&Rational::new(1.into(), 2.into()));
        Self::from_fn(self.n, |i, j| {
            if i == j {
                self[(i, i)].clone()
            } else {
                (self[(i, j)].clone() + &self[(j, i)]) * &half
            }
        })
    }

    pub fn to_rational(&self) -> SquareMatrix<Rational> {
        SquareMatrix { n: self.n, data: self.data.iter().map(Scalar::to_rational).collect() }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).iter().map(Scalar::to_f64).collect()).collect()
    }
}

impl SquareMatrix<Rational> {
    /// Converts exact entries into backend `backend`.
    pub fn convert<S: Scalar>(&self, backend: Backend) -> Result<SquareMatrix<S>> {
        let data = self.data.iter().map(|x| S::from_rational(x, backend)).collect::<Result<Vec<S>>>()?;
        SquareMatrix::new(self.n, data)
    }
}

impl<S> Index<(usize, usize)> for SquareMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> IndexMut<(usize, usize)> for SquareMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

impl<S: Scalar> Mul for &SquareMatrix<S> {
    type Output = SquareMatrix<S>;
    fn mul(self, rhs: &SquareMatrix<S>) -> SquareMatrix<S> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = SquareMatrix::zeros_like(n, self.like());
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a.clone() * &rhs[(k, j)];
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }
}
