//! Characteristic polynomials.
//!
//! Float matrices go through an orthogonal (Householder) reduction to upper
//! Hessenberg form followed by La Budde's coefficient recurrence. Exact
//! matrices use the Faddeev–Leverrier trace recurrence, since orthogonal
//! reflectors need square roots and would leave the rationals.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::numerics::{Rational, Scalar};
use crate::poly::Poly;

/// Upper Hessenberg matrix similar to some input matrix. Entries below the
/// first subdiagonal are exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergForm<S> {
    h: SquareMatrix<S>,
}

impl<S: Scalar> HessenbergForm<S> {
    /// Wraps `h`, zeroing everything below the first subdiagonal.
    pub fn from_matrix(mut h: SquareMatrix<S>) -> Self {
        let n = h.dim();
        let zero = h.like().zero_like();
        for i in 2..n {
            for j in 0..i - 1 {
                h[(i, j)] = zero.clone();
            }
        }
        HessenbergForm { h }
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.h
    }

    /// Diagonal entries.
    pub fn alphas(&self) -> Vec<S> {
        (0..self.h.dim()).map(|i| self.h[(i, i)].clone()).collect()
    }

    /// Subdiagonal entries `h[i][i-1]`, `i = 1..n`.
    pub fn betas(&self) -> Vec<S> {
        (1..self.h.dim()).map(|i| self.h[(i, i - 1)].clone()).collect()
    }
}

/// Householder reduction `H = Q^T A Q`. Float backend only.
///
/// Columns whose below-subdiagonal part is already zero are skipped, so a
/// matrix that is already Hessenberg comes back unchanged.
pub fn hessenberg_reduce<S: Scalar>(a: &SquareMatrix<S>) -> Result<HessenbergForm<S>> {
    if S::EXACT {
        return Err(Error::Unsupported(
            "orthogonal Hessenberg reduction needs square roots; use faddeev_leverrier for exact matrices".into(),
        ));
    }
    let n = a.dim();
    let mut h = a.clone();
    let two = h.like().lift_int(2);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<S> = (k + 1..n).map(|i| h[(i, k)].clone()).collect();
        if x[1..].iter().all(Scalar::is_zero) {
            continue;
        }
        let mut norm2 = x[0].zero_like();
        for xi in &x {
            norm2 += &(xi.clone() * xi);
        }
        let norm = norm2.sqrt()?;
        let alpha = if x[0].sign() >= 0 { -norm } else { norm };
        let mut v = x;
        v[0] -= &alpha;
        let mut vtv = v[0].zero_like();
        for vi in &v {
            vtv += &(vi.clone() * vi);
        }
        if vtv.is_zero() {
            continue;
        }
        // H <- P H with P = I - 2 v v^T / (v^T v) on rows k+1..n
        for j in 0..n {
            let mut s = vtv.zero_like();
            for (t, vi) in v.iter().enumerate() {
                s += &(vi.clone() * &h[(k + 1 + t, j)]);
            }
            let f = two.clone() * &s / &vtv;
            for (t, vi) in v.iter().enumerate() {
                let d = f.clone() * vi;
                h[(k + 1 + t, j)] -= &d;
            }
        }
        // H <- H P on columns k+1..n
        for i in 0..n {
            let mut s = vtv.zero_like();
            for (t, vj) in v.iter().enumerate() {
                s += &(h[(i, k + 1 + t)].clone() * vj);
            }
            let f = two.clone() * &s / &vtv;
            for (t, vj) in v.iter().enumerate() {
                let d = f.clone() * vj;
                h[(i, k + 1 + t)] -= &d;
            }
        }
        h[(k + 1, k)] = alpha;
    }
    Ok(HessenbergForm::from_matrix(h))
}

/// Similarity reduction to Hessenberg form by Gaussian elimination with row
/// and column swaps. Stays inside the coefficient field, so it works on
/// exact matrices.
pub fn elimination_hessenberg<S: Scalar>(a: &SquareMatrix<S>) -> HessenbergForm<S> {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let Some(pivot_row) = (k + 1..n)
            .filter(|&i| !h[(i, k)].is_zero())
            .max_by(|&i, &j| {
                let (a, b) = (h[(i, k)].magnitude(), h[(j, k)].magnitude());
                // exact mode prefers the first nonzero entry; float mode the largest
                if S::EXACT {
                    j.cmp(&i)
                } else {
                    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
                }
            })
        else {
            continue;
        };
        if pivot_row != k + 1 {
            for j in 0..n {
                let t = h[(pivot_row, j)].clone();
                h[(pivot_row, j)] = h[(k + 1, j)].clone();
                h[(k + 1, j)] = t;
            }
            for i in 0..n {
                let t = h[(i, pivot_row)].clone();
                h[(i, pivot_row)] = h[(i, k + 1)].clone();
                h[(i, k + 1)] = t;
            }
        }
        let pivot = h[(k + 1, k)].clone();
        for i in k + 2..n {
            if h[(i, k)].is_zero() {
                continue;
            }
            let f = h[(i, k)].clone() / &pivot;
            for j in k..n {
                let d = f.clone() * &h[(k + 1, j)];
                h[(i, j)] -= &d;
            }
            for r in 0..n {
                let d = f.clone() * &h[(r, i)];
                h[(r, k + 1)] += &d;
            }
        }
    }
    HessenbergForm::from_matrix(h)
}

/// La Budde's recurrence: the characteristic polynomial of an upper
/// Hessenberg matrix from its leading principal submatrices,
///
/// `p_i = (x - a_i) p_{i-1} - sum_{m=1}^{i-1} h_{i-m,i} b_i ... b_{i-m+1} p_{i-m-1}`.
pub fn labudde_charpoly<S: Scalar>(hf: &HessenbergForm<S>) -> Poly<S> {
    let h = hf.matrix();
    let n = h.dim();
    let like = h.like();
    let one = like.one_like();
    let zero = like.zero_like();
    // ps[i] holds the ascending coefficients of p_i (length i + 1)
    let mut ps: Vec<Vec<S>> = Vec::with_capacity(n + 1);
    ps.push(vec![one.clone()]);
    for i in 1..=n {
        let d = i - 1;
        let alpha = &h[(d, d)];
        let prev = &ps[i - 1];
        let mut next = vec![zero.clone(); i + 1];
        for (k, c) in prev.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= &(alpha.clone() * c);
        }
        let mut beta_prod = one.clone();
        for m in 1..i {
            beta_prod = beta_prod * &h[(d + 1 - m, d - m)];
            if beta_prod.is_zero() {
                break;
            }
            let factor = h[(d - m, d)].clone() * &beta_prod;
            if factor.is_zero() {
                continue;
            }
            for (k, c) in ps[i - m - 1].iter().enumerate() {
                next[k] -= &(factor.clone() * c);
            }
        }
        ps.push(next);
    }
    Poly::new(ps.pop().expect("n >= 1"))
}

/// Faddeev–Leverrier: `M_1 = I`, `c_{n-k} = -tr(A M_k) / k`,
/// `M_{k+1} = A M_k + c_{n-k} I`. Exact over the rationals.
pub fn faddeev_leverrier<S: Scalar>(a: &SquareMatrix<S>) -> Poly<S> {
    let n = a.dim();
    let like = a.like();
    let mut coeffs = vec![like.zero_like(); n + 1];
    coeffs[n] = like.one_like();
    let mut m = SquareMatrix::identity_like(n, like);
    for k in 1..=n {
        let am = a * &m;
        let c = -(am.trace() / &like.lift_int(k as i64));
        if k < n {
            m = am;
            for i in 0..n {
                m[(i, i)] += &c;
            }
        }
        coeffs[n - k] = c;
    }
    Poly::new(coeffs)
}

/// Faddeev–Leverrier over the integers. With `L` the common denominator,
/// `B = L A` is integral, every `M_k` and `c_k` of `B` is an integer and the
/// divisions by `k` are exact; `c_k(A) = c_k(B) / L^(n-k)`.
pub fn faddeev_leverrier_rational(a: &SquareMatrix<Rational>) -> Poly<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    let n = a.dim();
    let lcm = a.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| a.row(i).iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    for k in 1..=n {
        let mut am = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for (t, bit) in b[i].iter().enumerate() {
                if bit.is_zero() {
                    continue;
                }
                for j in 0..n {
                    am[i][j] += bit * &m[t][j];
                }
            }
        }
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (c, rem) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        if k < n {
            for (i, row) in am.iter_mut().enumerate() {
                row[i] += &c;
            }
            m = am;
        }
        coeffs[n - k] = c;
    }
    let mut scale = BigInt::one();
    let mut out = vec![Rational::zero(); n + 1];
    for k in (0..=n).rev() {
        out[k] = Rational::new(coeffs[k].clone(), scale.clone());
        scale *= &lcm;
    }
    Poly::new(out)
}

/// Monic characteristic polynomial `det(xI - A)`, dispatched on backend.
pub fn charpoly<S: Scalar>(a: &SquareMatrix<S>) -> Result<Poly<S>> {
    if S::EXACT {
        let p = faddeev_leverrier_rational(&a.to_rational());
        Ok(Poly::from_rationals(p.coeffs(), a.like()))
    } else {
        Ok(labudde_charpoly(&hessenberg_reduce(a)?))
    }
}

/// Characteristic polynomial of a symmetric matrix, used for signatures.
/// Exact matrices go through [`multimodular_charpoly`], which stays cheap
/// when the entries are large.
pub fn symmetric_charpoly<S: Scalar>(h: &SquareMatrix<S>) -> Result<Poly<S>> {
    if S::EXACT {
        let p = multimodular_charpoly(&h.to_rational());
        Ok(Poly::from_rationals(p.coeffs(), h.like()))
    } else {
        charpoly(h)
    }
}

/// `(D, det(xI - D A))` with `D` the least common denominator of the
/// entries, computed modulo many primes. The integer coefficients are
/// `D^(n-k) c_k(A)`, so they carry the same signs as those of `A`.
pub fn scaled_integer_charpoly(a: &SquareMatrix<Rational>) -> (num_bigint::BigInt, Vec<num_bigint::BigInt>) {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;
    use std::collections::HashMap;

    let n = a.dim();
    let lcm = a.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // keyed on the raw parts: hashing a Ratio itself is expensive
    let mut scaled: HashMap<(&BigInt, &BigInt), BigInt> = HashMap::new();
    let ints: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| {
                    scaled.entry((x.numer(), x.denom())).or_insert_with(|| x.numer() * (&lcm / x.denom())).clone()
                })
                .collect()
        })
        .collect();
    (lcm, crate::modular::integer_charpoly(&ints))
}

/// Exact characteristic polynomial by the multimodular route:
/// `c_k(A) = c_k(D A) / D^(n-k)`.
pub fn multimodular_charpoly(a: &SquareMatrix<Rational>) -> Poly<Rational> {
    use num_bigint::BigInt;
    use num_traits::One;

    let n = a.dim();
    let (lcm, coeffs) = scaled_integer_charpoly(a);
    let mut scale = BigInt::one();
    let mut out = vec![Rational::from_integer(BigInt::one()); n + 1];
    for k in (0..=n).rev() {
        out[k] = Rational::new(coeffs[k].clone(), scale.clone());
        scale *= &lcm;
    }
    Poly::new(out)
}

/// Characteristic polynomial through elimination to Hessenberg form and La
/// Budde's recurrence: `O(n^3)` field operations in either backend.
pub fn elimination_charpoly<S: Scalar>(a: &SquareMatrix<S>) -> Poly<S> {
    labudde_charpoly(&elimination_hessenberg(a))
}

/// `det(A)` by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(a: &SquareMatrix<Rational>) -> Rational {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    let n = a.dim();
    let lcm = a.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| a.row(i).iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = sign * &m[n - 1][n - 1];
    Rational::new(det, num_traits::pow(lcm, n))
}
