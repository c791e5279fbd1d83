//! Dense univariate polynomials with coefficients stored in ascending degree.
//!
//! Besides the usual ring operations this module carries the exact-only
//! tools: GCD, square-free deflation and Sturm chains. Sturm chains are kept
//! here as an independent root-counting route that shares nothing with the
//! Hermite signature path.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Rational, Scalar};

/// Univariate polynomial, `coeffs[k]` multiplies `x^k`.
///
/// The coefficient list never has a trailing zero, except that the zero
/// polynomial is stored as a single zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros. Panics on an empty list: there would be no backend to take
    /// the zero from.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// `x - root`.
    pub fn linear_root(root: &S) -> Self {
        Poly::new(vec![-root.clone(), root.one_like()])
    }

    /// Lifts exact coefficients into `like`'s backend.
    pub fn from_rationals(coeffs: &[Rational], like: &S) -> Self {
        Poly::new(coeffs.iter().map(|c| like.lift(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().expect("non-empty")
    }

    pub fn is_monic(&self) -> bool {
        let lc = self.leading();
        *lc == lc.one_like()
    }

    fn zero_coeff(&self) -> S {
        self.coeffs[0].zero_like()
    }

    pub fn zero_like(&self) -> Self {
        Poly::constant(self.zero_coeff())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return self.zero_like();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.lift_int(k as i64) * c)
                .collect(),
        )
    }

    pub fn scale(&self, factor: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * factor).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading().clone();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / &lc).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division over the coefficient field. Panics if `divisor`
    /// is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree();
        if self.degree() < dd || self.is_zero() {
            return (self.zero_like(), self.clone());
        }
        let lc = divisor.leading().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.zero_coeff(); self.degree() - dd + 1];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + dd].clone();
            if top.is_zero() {
                continue;
            }
            let factor = top / &lc;
            for (k, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &(factor.clone() * d);
            }
            // exact zero even when the float subtraction leaves residue
            rem[shift + dd] = self.zero_coeff();
            quot[shift] = factor;
        }
        rem.truncate(dd.max(1));
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn to_rational(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(Scalar::to_rational).collect())
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o += c;
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = vec![self.zero_coeff(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a.clone() * b);
            }
        }
        Poly::new(out)
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    /// Descending-degree rendering, e.g. `x^2 - 3*x + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.sign() < 0;
            let mag = c.magnitude();
            let unit = mag == mag.one_like();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Number of sign changes in `coeffs` after discarding zeros.
pub fn sign_variations<S: Scalar>(coeffs: &[S]) -> usize {
    let signs: Vec<i8> = coeffs.iter().map(Scalar::sign).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn require_exact<S: Scalar>(what: &str) -> Result<()> {
    if S::EXACT {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} is only certified in exact mode; rerun with --mode exact")))
    }
}

/// Integer coefficient vector with the same roots as `p`, positive leading
/// coefficient and unit content.
fn primitive_integer(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive_part(ints)
}

fn primitive_part(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    while ints.len() > 1 && ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    let sign = if ints.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    let content = content * sign;
    ints.iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder of `a` by `b` up to a nonzero constant factor, computed
/// without leaving the integers.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.last().expect("non-empty").clone();
        let shift = r.len() - 1 - db;
        if !top.is_zero() {
            for c in r.iter_mut() {
                *c *= lc;
            }
            for (k, bk) in b.iter().enumerate() {
                r[shift + k] -= &top * bk;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(BigInt::zero());
    }
    r
}

fn is_zero_int_poly(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn rational_gcd(p: &Poly<Rational>, q: &Poly<Rational>) -> Poly<Rational> {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let mut a = primitive_integer(p);
    let mut b = primitive_integer(q);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !is_zero_int_poly(&b) {
        let r = primitive_part(pseudo_remainder(&a, &b));
        a = b;
        b = r;
    }
    Poly::new(a.into_iter().map(Rational::from_integer).collect()).monic()
}

/// Monic greatest common divisor. Exact backend only.
pub fn gcd<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Result<Poly<S>> {
    require_exact::<S>("polynomial gcd")?;
    let g = rational_gcd(&p.to_rational(), &q.to_rational());
    Ok(Poly::from_rationals(g.coeffs(), &p.coeffs()[0]))
}

/// `p / gcd(p, p')`, made monic: same roots as `p`, each simple.
pub fn square_free_part<S: Scalar>(p: &Poly<S>) -> Result<Poly<S>> {
    if p.is_zero() {
        return Err(Error::Input("square-free part of the zero polynomial".into()));
    }
    let g = gcd(p, &p.derivative())?;
    let (q, r) = p.div_rem(&g);
    if !r.is_zero() {
        return Err(Error::Internal("gcd does not divide its argument".into()));
    }
    Ok(q.monic())
}

/// Signed remainder sequence `p, p', -rem(p, p'), ...` of a square-free
/// polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct SturmChain<S> {
    polys: Vec<Poly<S>>,
}

/// Builds the Sturm chain of a square-free polynomial. Entries after `p'`
/// are divided by the absolute value of their leading coefficient, which
/// leaves every sign (and hence every count) unchanged.
pub fn sturm_chain<S: Scalar>(p: &Poly<S>) -> Result<SturmChain<S>> {
    require_exact::<S>("a Sturm chain")?;
    if p.is_zero() {
        return Err(Error::Input("Sturm chain of the zero polynomial".into()));
    }
    let mut polys = vec![p.clone()];
    if p.degree() == 0 {
        return Ok(SturmChain { polys });
    }
    polys.push(p.derivative());
    loop {
        let n = polys.len();
        let r = polys[n - 2].rem(&polys[n - 1]);
        if r.is_zero() {
            break;
        }
        let lc = r.leading().magnitude();
        polys.push((-&r).scale(&(lc.one_like() / &lc)));
    }
    if polys.last().expect("non-empty").degree() > 0 {
        return Err(Error::RepeatedRoots);
    }
    Ok(SturmChain { polys })
}

impl<S: Scalar> SturmChain<S> {
    pub fn polys(&self) -> &[Poly<S>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn variations_at(&self, x: &S) -> usize {
        let values: Vec<S> = self.polys.iter().map(|p| p.eval(x)).collect();
        sign_variations(&values)
    }

    /// Sign variations at `+inf` (`positive`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        let signs: Vec<S> = self
            .polys
            .iter()
            .map(|p| {
                let lc = p.leading().clone();
                if !positive && p.degree() % 2 == 1 {
                    -lc
                } else {
                    lc
                }
            })
            .collect();
        sign_variations(&signs)
    }

    /// Number of distinct real roots.
    pub fn total_roots(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count(&self, a: &S, b: &S) -> Result<usize> {
        if a >= b {
            return Err(Error::Input(format!("empty interval ({a}, {b})")));
        }
        for end in [a, b] {
            if self.polys[0].eval(end).is_zero() {
                return Err(Error::EndpointIsRoot(end.to_string()));
            }
        }
        let (va, vb) = (self.variations_at(a), self.variations_at(b));
        va.checked_sub(vb)
            .ok_or_else(|| Error::Internal("Sturm variations increased across an interval".into()))
    }
}

/// Distinct real roots of the chain's polynomial in `(a, b)`.
pub fn sturm_count<S: Scalar>(chain: &SturmChain<S>, a: &S, b: &S) -> Result<usize> {
    chain.count(a, b)
}
