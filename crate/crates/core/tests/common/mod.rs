#![allow(dead_code)]

use certeig::matrix::SquareMatrix;
use certeig::numerics::{parse_decimal, Rational};
use certeig::poly::{sturm_chain, Poly};
use certeig::numerics::Scalar;
use rand::Rng;

pub fn r(s: &str) -> Rational {
    parse_decimal(s).unwrap()
}

pub fn matrix(rows: &[&[&str]]) -> SquareMatrix<Rational> {
    SquareMatrix::from_rows(rows.iter().map(|row| row.iter().map(|x| r(x)).collect()).collect()).unwrap()
}

/// The 5x5 worked example with three real eigenvalues.
pub fn example() -> SquareMatrix<Rational> {
    matrix(&[
        &["1.25", "1", "0.75", "0.5", "0.25"],
        &["1", "0", "0", "0", "0"],
        &["-1", "1", "0", "0", "0"],
        &["0", "0", "1", "3", "0"],
        &["0", "0", "0", "0.5", "5"],
    ])
}

pub fn example_charpoly() -> Poly<Rational> {
    Poly::new(["-8.875", "-0.625", "-17", "24.75", "-9.25", "1"].iter().map(|c| r(c)).collect())
}

/// Reference real eigenvalues of [`example`], ascending.
pub const EXAMPLE_ROOTS: [f64; 3] = [1.732_946_083_034_579, 2.934_726_733_862_349, 4.997_297_881_111_628];

/// Entries `k/d` in `[-5, 5]` with `d` uniform in `1..=16`.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> SquareMatrix<Rational> {
    SquareMatrix::from_fn(n, |_, _| {
        let d: i64 = rng.random_range(1..=16);
        Rational::new(rng.random_range(-5 * d..=5 * d).into(), d.into())
    })
}

pub fn poly_from_roots(roots: &[Rational]) -> Poly<Rational> {
    roots
        .iter()
        .fold(Poly::constant(r("1")), |acc, z| &acc * &Poly::linear_root(z))
}

// Sturm count on [a, b] including roots at the endpoints.
pub fn closed_count(p: &Poly<Rational>, a: &Rational, b: &Rational) -> usize {
    let chain = sturm_chain(p).unwrap();
    if a == b {
        return usize::from(p.eval(a).is_zero());
    }
    // move a root endpoint inward past a window holding only that root
    let mut ends = 0;
    let mut inward = |x: &Rational, toward: &Rational| -> Rational {
        if !p.eval(x).is_zero() {
            return x.clone();
        }
        ends += 1;
        let mut d = (toward.clone() - x) / Rational::from_integer(2.into());
        loop {
            let (lo, hi) = if d > Rational::from_integer(0.into()) { (x.clone() - &d, x.clone() + &d) } else { (x.clone() + &d, x.clone() - &d) };
            if !p.eval(&lo).is_zero() && !p.eval(&hi).is_zero() && chain.count(&lo, &hi).unwrap() == 1 {
                return x.clone() + &d;
            }
            d /= Rational::from_integer(2.into());
        }
    };
    let lo = inward(a, b);
    let hi = inward(b, a);
    ends + chain.count(&lo, &hi).unwrap()
}
