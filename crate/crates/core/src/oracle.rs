//! Slow, independent reference computations used to check the main path.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::numerics::{Rational, Scalar};
use crate::poly::{sturm_chain, Poly};

/// Isolating intervals `[a, b]`, one per distinct real root of square-free
/// `p`, each at most `eps` wide and holding its root in `(a, b)` or, for a
/// root hit exactly by a split, as `a = b`.
pub fn sturm_isolate_roots(p: &Poly<Rational>, eps: &Rational) -> Result<Vec<(Rational, Rational)>> {
    if *eps <= Rational::from_integer(0.into()) {
        return Err(Error::Input("epsilon must be positive".into()));
    }
    let chain = sturm_chain(p)?;
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    // Cauchy: every root has |z| < 1 + max |c_k / c_n|
    let lead = p.leading().clone();
    let bound = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| (c / &lead).magnitude())
        .fold(Rational::from_integer(0.into()), |a, b| if b > a { b } else { a })
        + Rational::from_integer(1.into());

    let two = Rational::from_integer(2.into());
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = chain.count(&a, &b)?;
        if count == 0 {
            continue;
        }
        if count == 1 && b.clone() - &a <= *eps {
            out.push((a, b));
            continue;
        }
        let mid = (a.clone() + &b) / &two;
        if p.eval(&mid).is_zero() {
            out.push((mid.clone(), mid.clone()));
            // shrink a window around the root until it holds no other root
            let mut r = (b.clone() - &a) / Rational::from_integer(4.into());
            loop {
                let (lo, hi) = (mid.clone() - &r, mid.clone() + &r);
                if !p.eval(&lo).is_zero() && !p.eval(&hi).is_zero() && chain.count(&lo, &hi)? == 1 {
                    stack.push((a, lo));
                    stack.push((hi, b));
                    break;
                }
                r /= &two;
            }
        } else {
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    out.sort();
    Ok(out)
}

/// `det(xI - A)` by cofactor expansion along the first row, entries being
/// polynomials in `x`. Exponential in `n`; refuses `n > 8`.
pub fn naive_charpoly(a: &SquareMatrix<Rational>) -> Result<Poly<Rational>> {
    let n = a.dim();
    if n > 8 {
        return Err(Error::Input(format!("naive_charpoly is limited to n <= 8, got {n}")));
    }
    let one = Rational::from_integer(1.into());
    let m: Vec<Vec<Poly<Rational>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a[(i, j)].clone();
                    if i == j {
                        Poly::new(vec![c, one.clone()])
                    } else {
                        Poly::new(vec![c])
                    }
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(cofactor(&m, 0, &cols))
}

fn cofactor(m: &[Vec<Poly<Rational>>], row: usize, cols: &[usize]) -> Poly<Rational> {
    let one = Rational::from_integer(1.into());
    if cols.is_empty() {
        return Poly::constant(one);
    }
    let mut total = Poly::constant(Rational::from_integer(0.into()));
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &cofactor(m, row + 1, &rest);
        total = if k % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

/// Approximate spectrum from a real Schur decomposition in `f64`. A
/// sanity check on certified output only, never a certificate.
pub fn reference_eigensolve<S: Scalar>(a: &SquareMatrix<S>) -> Result<Vec<Complex64>> {
    let n = a.dim();
    let rows = a.to_f64_rows();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Internal("reference QR iteration did not converge".into()))?;
    let mut vals: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    vals.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(vals)
}
