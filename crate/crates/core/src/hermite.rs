//! Hermite matrices of a univariate polynomial and their signatures.
//!
//! For monic square-free `p` of degree `n` with companion matrix `C`,
//! `H_1[i][j] = S[i+j]` where `S[k]` is the k-th power sum of the roots, and
//! `H_q = H_1 q(C)`. The signature of `H_q` is the number of real roots where
//! `q > 0` minus the number where `q < 0`; `sigma(H_1)` counts real roots.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::charpoly;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::numerics::{Backend, Rational, Scalar};
use crate::poly::{sign_variations, Poly};

/// Newton power sums `S[k] = sum_i z_i^k`, `k = 0..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSums<S> {
    values: Vec<S>,
}

impl<S: Scalar> PowerSums<S> {
    pub fn as_slice(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &S {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn require_monic<S: Scalar>(p: &Poly<S>, what: &str) -> Result<()> {
    if p.degree() == 0 || !p.is_monic() {
        return Err(Error::Input(format!("{what} needs a monic polynomial of degree >= 1, got {p}")));
    }
    Ok(())
}

/// Power sums `S[0..=m]` from the coefficients of monic `p` (Newton–Girard).
pub fn power_sums<S: Scalar>(p: &Poly<S>, m: usize) -> Result<PowerSums<S>> {
    require_monic(p, "power_sums")?;
    let n = p.degree();
    let c = p.coeffs();
    // b[j] is the coefficient of x^(n-j)
    let b: Vec<&S> = (0..=n).map(|j| &c[n - j]).collect();
    let mut s = Vec::with_capacity(m + 1);
    s.push(c[0].lift_int(n as i64));
    for k in 1..=m {
        let mut acc = c[0].zero_like();
        if k <= n {
            acc -= &(b[k].clone() * &c[0].lift_int(k as i64));
        }
        for j in 1..=k.saturating_sub(1).min(n) {
            acc -= &(b[j].clone() * &s[k - j]);
        }
        s.push(acc);
    }
    Ok(PowerSums { values: s })
}

/// Companion matrix: ones on the subdiagonal, `-c_i` down the last column.
#[derive(Clone, Debug, PartialEq)]
pub struct Companion<S> {
    m: SquareMatrix<S>,
    last: Vec<S>,
}

impl<S: Scalar> Companion<S> {
    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// `X C` in `O(n^2)`: columns shift left by one and the last column is
    /// `X` times the coefficient column.
    pub fn right_multiply(&self, x: &SquareMatrix<S>) -> SquareMatrix<S> {
        let n = self.dim();
        let mut out = SquareMatrix::zeros_like(n, x.like());
        for i in 0..n {
            for j in 0..n - 1 {
                out[(i, j)] = x[(i, j + 1)].clone();
            }
            let mut acc = x.like().zero_like();
            for (k, ck) in self.last.iter().enumerate() {
                if !ck.is_zero() {
                    acc += &(x[(i, k)].clone() * ck);
                }
            }
            out[(i, n - 1)] = acc;
        }
        out
    }

    /// `C X` in `O(n^2)`: rows shift down by one plus a rank-one term from
    /// the last row of `X`.
    pub fn left_multiply(&self, x: &SquareMatrix<S>) -> SquareMatrix<S> {
        let n = self.dim();
        let mut out = SquareMatrix::zeros_like(n, x.like());
        for i in 0..n {
            let ci = &self.last[i];
            for j in 0..n {
                let mut v = if i > 0 { x[(i - 1, j)].clone() } else { x.like().zero_like() };
                if !ci.is_zero() {
                    v += &(ci.clone() * &x[(n - 1, j)]);
                }
                out[(i, j)] = v;
            }
        }
        out
    }
}

pub fn companion<S: Scalar>(p: &Poly<S>) -> Result<Companion<S>> {
    require_monic(p, "companion")?;
    let n = p.degree();
    let c = p.coeffs();
    let last: Vec<S> = c[..n].iter().map(|x| -x.clone()).collect();
    let zero = c[0].zero_like();
    let one = c[0].one_like();
    let m = SquareMatrix::from_fn(n, |i, j| {
        if j == n - 1 {
            last[i].clone()
        } else if i == j + 1 {
            one.clone()
        } else {
            zero.clone()
        }
    });
    Ok(Companion { m, last })
}

/// `q(C)`. Degree at most 2 uses the shift structure of `C` (`O(n^2)`);
/// higher degrees fall back to dense Horner evaluation.
pub fn apply_q_to_companion<S: Scalar>(q: &Poly<S>, c: &Companion<S>) -> SquareMatrix<S> {
    let n = c.dim();
    let like = c.m.like();
    let qc = q.coeffs();
    let mut acc = SquareMatrix::identity_like(n, like).scale(&qc[qc.len() - 1]);
    for coeff in qc.iter().rev().skip(1) {
        acc = if q.degree() <= 2 { c.left_multiply(&acc) } else { &c.m * &acc };
        for i in 0..n {
            acc[(i, i)] += coeff;
        }
    }
    acc
}

/// A symmetric Hermite matrix together with the polynomial `q` that
/// produced it. The signature is computed on first use and cached.
#[derive(Clone, Debug)]
pub struct HermiteForm<S> {
    q: Poly<S>,
    h: SquareMatrix<S>,
    signature: OnceLock<i64>,
}

impl<S: Scalar> HermiteForm<S> {
    pub fn q(&self) -> &Poly<S> {
        &self.q
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Cached [`signature`].
    pub fn signature(&self) -> Result<i64> {
        if let Some(&s) = self.signature.get() {
            return Ok(s);
        }
        let s = signature_of(&self.h)?;
        Ok(*self.signature.get_or_init(|| s))
    }
}

/// Hankel matrix `H_1[i][j] = S[i+j]` for monic `p`.
pub fn build_h1<S: Scalar>(p: &Poly<S>) -> Result<HermiteForm<S>> {
    let n = p.degree();
    let sums = power_sums(p, 2 * n - 2)?;
    Ok(h1_from_sums(&sums, n))
}

pub fn h1_from_sums<S: Scalar>(sums: &PowerSums<S>, n: usize) -> HermiteForm<S> {
    let h = SquareMatrix::from_fn(n, |i, j| sums.get(i + j).clone());
    let one = sums.get(0).one_like();
    HermiteForm { q: Poly::constant(one), h, signature: OnceLock::new() }
}

/// `2^(-bits/2)` in float mode, zero in exact mode.
pub(crate) fn half_precision<S: Scalar>(like: &S) -> S {
    match like.backend() {
        Backend::Exact => like.zero_like(),
        Backend::Float { bits } => like.lift(&Rational::new(BigInt::one(), BigInt::one() << (bits / 2))),
    }
}

/// `2^(-7 bits/8)` in float mode, zero in exact mode: relative size below
/// which a computed quantity is treated as a rounding-level zero.
pub(crate) fn negligible_scale<S: Scalar>(like: &S) -> S {
    match like.backend() {
        Backend::Exact => like.zero_like(),
        Backend::Float { bits } => like.lift(&Rational::new(BigInt::one(), BigInt::one() << (7 * bits / 8))),
    }
}

/// `H_q = H_1 q(C)` by repeated `O(n^2)` right-multiplication with `C`.
///
/// In exact mode any asymmetry is an internal error. In float mode the
/// asymmetry must stay below `2^(-p/2) max|H_q|`; the result is then
/// symmetrized.
pub fn build_hq<S: Scalar>(h1: &HermiteForm<S>, q: &Poly<S>, c: &Companion<S>) -> Result<HermiteForm<S>> {
    if h1.dim() != c.dim() {
        return Err(Error::Input(format!("H_1 is {0}x{0} but the companion matrix is {1}x{1}", h1.dim(), c.dim())));
    }
    if q.degree() == 0 && q.coeffs()[0] == q.coeffs()[0].one_like() {
        return Ok(HermiteForm { q: q.clone(), h: h1.h.clone(), signature: h1.signature.clone() });
    }
    let n = h1.dim();
    let qc = q.coeffs();
    let mut power = h1.h.clone();
    let mut hq = h1.h.scale(&qc[0]);
    for coeff in &qc[1..] {
        power = c.right_multiply(&power);
        if !coeff.is_zero() {
            hq = hq.add(&power.scale(coeff));
        }
    }
    let asym = hq.asymmetry();
    if S::EXACT {
        if !asym.is_zero() {
            return Err(Error::Internal(format!("H_q for q = {q} is not symmetric")));
        }
        return Ok(HermiteForm { q: q.clone(), h: hq, signature: OnceLock::new() });
    }
    let tol = half_precision(hq.like()) * &hq.max_abs();
    if asym > tol {
        return Err(Error::PrecisionExhausted(format!(
            "H_q for q = {q} is asymmetric by {} (tolerance {tol}, n = {n})",
            asym.to_f64()
        )));
    }
    if !asym.is_zero() {
        log::debug!("symmetrizing H_q for q = {q}: asymmetry {:e}", asym.to_f64());
    }
    Ok(HermiteForm { q: q.clone(), h: hq.symmetrized(), signature: OnceLock::new() })
}

/// `H_q` from power sums alone. Since `H_1 = V^T V` and `C = V^-1 D V`,
/// `H_1 C^m` is the Hankel matrix of the sums shifted by `m`, so
/// `H_q[i][j] = sum_m q_m S[i+j+m]`. Needs `S[0..=2n-2+deg q]`; the result
/// is symmetric by construction and equals [`build_hq`] exactly.
pub fn hankel_hq<S: Scalar>(sums: &PowerSums<S>, n: usize, q: &Poly<S>) -> Result<HermiteForm<S>> {
    let need = 2 * n - 2 + q.degree();
    if sums.len() <= need {
        return Err(Error::Input(format!("hankel_hq needs power sums up to index {need}, have {}", sums.len() - 1)));
    }
    let qc = q.coeffs();
    let t: Vec<S> = (0..=2 * n - 2)
        .map(|k| {
            let mut acc = qc[0].zero_like();
            for (m, c) in qc.iter().enumerate() {
                if !c.is_zero() {
                    acc += &(c.clone() * sums.get(k + m));
                }
            }
            acc
        })
        .collect();
    let h = SquareMatrix::from_fn(n, |i, j| t[i + j].clone());
    Ok(HermiteForm { q: q.clone(), h, signature: OnceLock::new() })
}

/// Smallest-effort integer `L` with `L^(n-k) c_k` integral for every
/// coefficient of monic `p`, so the roots of `p` scaled by `L` are algebraic
/// integers and their power sums `L^k S[k]` are integers.
pub fn integral_root_scale(p: &Poly<Rational>) -> BigInt {
    let n = p.degree();
    let mut scale = BigInt::one();
    for k in (0..n).rev() {
        let e = (n - k) as u32;
        let d = (p.coeffs()[k].clone() * Rational::from_integer(scale.pow(e))).denom().clone();
        if d.is_one() {
            continue;
        }
        let r = d.nth_root(e);
        scale *= if r.pow(e) == d { r } else { d };
    }
    scale
}

/// Power sums of the scaled roots, `L^k S[k]`, as integers.
pub fn scaled_power_sums<S: Scalar>(sums: &PowerSums<S>, scale: &BigInt) -> Vec<BigInt> {
    let mut pow = BigInt::one();
    sums.as_slice()
        .iter()
        .map(Scalar::to_rational)
        .map(|s| {
            let v = s * Rational::from_integer(pow.clone());
            pow *= scale;
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect()
}

/// `sigma(H_q)` through the congruent matrix `L^2 Λ H_q Λ`, `Λ = diag(L^i)`.
///
/// Its entries are `L^(i+j+2) T[i+j]` with `T[k] = sum_m q_m S[k+m]`, whose
/// only denominators come from `q`, so the integer charpoly behind
/// [`descartes_signature`] works with roughly half the bits of `H_q` itself.
/// Congruence by a positive diagonal preserves the signature.
pub fn scaled_hankel_signature(scaled: &[BigInt], scale: &BigInt, n: usize, q: &Poly<Rational>) -> Result<i64> {
    if q.degree() > 2 || scaled.len() < 2 * n - 1 + q.degree() {
        return Err(Error::Input("scaled Hankel route needs deg q <= 2 and power sums up to 2n-2+deg q".into()));
    }
    let weights: Vec<Rational> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| c * Rational::from_integer(scale.pow(2 - m as u32)))
        .collect();
    let t: Vec<Rational> = (0..=2 * n - 2)
        .map(|k| {
            weights
                .iter()
                .enumerate()
                .filter(|(_, w)| !num_traits::Zero::is_zero(*w))
                .fold(Rational::from_integer(BigInt::from(0)), |acc, (m, w)| {
                    acc + w * Rational::from_integer(scaled[k + m].clone())
                })
        })
        .collect();
    descartes_signature(&SquareMatrix::from_fn(n, |i, j| t[i + j].clone()))
}

/// Power of two `s` close to `1 / max|root|`, read off the growth of the
/// power sums. Any positive `s` is sound; this one keeps the entries of the
/// balanced Hankel matrices near `n` instead of `max|root|^(2n)`.
pub fn balancing_scale<S: Scalar>(sums: &PowerSums<S>) -> S {
    let like = sums.get(0);
    let growth = (1..sums.len())
        .filter_map(|k| {
            let v = sums.get(k).to_f64().abs();
            (v.is_finite() && v > 0.0).then(|| v.log2() / k as f64)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let e = if growth.is_finite() { growth.round() as i64 } else { 0 };
    let pow = BigInt::one() << e.unsigned_abs();
    let s = if e >= 0 { Rational::new(BigInt::one(), pow) } else { Rational::from_integer(pow) };
    like.lift(&s)
}

/// `s^(i+j+2) H_q[i][j]`, i.e. `H_q` under the congruence by `s diag(s^i)`,
/// straight from the power sums (`deg q <= 2`). Signature is unchanged; in
/// float mode with `s` a power of two the scaling itself is exact.
pub fn balanced_hankel_hq<S: Scalar>(sums: &PowerSums<S>, n: usize, q: &Poly<S>, s: &S) -> Result<SquareMatrix<S>> {
    if q.degree() > 2 || sums.len() < 2 * n - 1 + q.degree() {
        return Err(Error::Input("balanced Hankel route needs deg q <= 2 and power sums up to 2n-2+deg q".into()));
    }
    let mut scaled = Vec::with_capacity(sums.len());
    let mut pow = s.one_like();
    for k in 0..sums.len() {
        scaled.push(sums.get(k).clone() * &pow);
        pow = pow * s;
    }
    let weights: Vec<S> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| (0..2 - m).fold(c.clone(), |acc, _| acc * s))
        .collect();
    let t: Vec<S> = (0..=2 * n - 2)
        .map(|k| {
            let mut acc = s.zero_like();
            for (m, w) in weights.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                acc += &(w.clone() * &scaled[k + m]);
            }
            acc
        })
        .collect();
    Ok(SquareMatrix::from_fn(n, |i, j| t[i + j].clone()))
}

/// Signature of a symmetric matrix from its characteristic polynomial.
///
/// All eigenvalues are real, so Descartes' rule is exact: after dividing out
/// `x^k` for the zero eigenvalues, `V(p(x))` counts the positive eigenvalues
/// and `V(p(-x))` the negative ones.
pub fn descartes_signature<S: Scalar>(h: &SquareMatrix<S>) -> Result<i64> {
    let coeffs = if S::EXACT {
        // D^(n-k) c_k has the sign of c_k; skip dividing the scale back out
        let (_, ints) = charpoly::scaled_integer_charpoly(&h.to_rational());
        let first = ints.iter().position(|c| !num_traits::Zero::is_zero(c)).expect("monic");
        ints[first..].iter().map(|c| h.like().lift(&Rational::from_integer(c.clone()))).collect()
    } else {
        strip_zero_eigenvalues(&charpoly::symmetric_charpoly(h)?, h)
    };
    let pos = sign_variations(&coeffs) as i64;
    let neg = sign_variations(Poly::new(coeffs).reflect().coeffs()) as i64;
    Ok(pos - neg)
}

/// Drops low-order coefficients that vanish: exactly in exact mode. In
/// float mode the first `z` coefficients are dropped for the largest `z`
/// with `|c_k| <= binom(z, k) (tau |H|)^(z-k) |c_z|` for every `k < z`,
/// `tau = n 2^(-7p/8)`. That is what `z` eigenvalues of size at most
/// `tau |H|` next to the rest of the spectrum look like; rounding in a
/// backward-stable charpoly moves a zero eigenvalue by about `n 2^-p |H|`,
/// far below `tau |H|`, while genuinely small eigenvalues stay far above it.
fn strip_zero_eigenvalues<S: Scalar>(cp: &Poly<S>, h: &SquareMatrix<S>) -> Vec<S> {
    let c = cp.coeffs();
    let n = cp.degree();
    if S::EXACT {
        let k = c.iter().position(|x| !x.is_zero()).expect("monic");
        return c[k..].to_vec();
    }
    let small = negligible_scale(&c[0]) * &h.max_abs() * &c[0].lift_int(n as i64);
    let negligible_below = |z: usize| {
        let mut bound = c[z].magnitude();
        (0..z).rev().all(|k| {
            bound = bound.clone() * &small;
            c[k].magnitude() <= bound.clone() * &c[0].lift(&binomial(z, k))
        })
    };
    let z = (1..=n).rev().find(|&z| !c[z].is_zero() && negligible_below(z)).unwrap_or(0);
    c[z..].to_vec()
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(r)
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia by symmetric elimination (Sylvester's law). Uses a 1x1 pivot on
/// the largest diagonal entry when one is nonzero, otherwise a 2x2 pivot on
/// an off-diagonal pair, whose block has negative determinant and so
/// contributes one eigenvalue of each sign.
pub fn ldl_inertia<S: Scalar>(h: &SquareMatrix<S>) -> Inertia {
    let like = h.like();
    let tol = negligible_scale(like) * &h.max_abs() * &like.lift_int(h.dim() as i64);
    let negligible = |x: &S| if S::EXACT { x.is_zero() } else { x.magnitude() <= tol };
    let mut a: Vec<Vec<S>> = (0..h.dim()).map(|i| h.row(i).to_vec()).collect();
    let mut inertia = Inertia { positive: 0, negative: 0, zero: 0 };
    while !a.is_empty() {
        let m = a.len();
        let diag = (0..m).filter(|&i| !negligible(&a[i][i])).max_by(|&i, &j| {
            if S::EXACT {
                j.cmp(&i)
            } else {
                a[i][i].magnitude().partial_cmp(&a[j][j].magnitude()).unwrap_or(std::cmp::Ordering::Equal)
            }
        });
        if let Some(p) = diag {
            let d = a[p][p].clone();
            if d.sign() > 0 {
                inertia.positive += 1;
            } else {
                inertia.negative += 1;
            }
            let col: Vec<S> = (0..m).map(|i| a[i][p].clone()).collect();
            a = (0..m)
                .filter(|&i| i != p)
                .map(|i| {
                    let f = col[i].clone() / &d;
                    (0..m).filter(|&j| j != p).map(|j| a[i][j].clone() - &(f.clone() * &col[j])).collect()
                })
                .collect();
            continue;
        }
        let off = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| !negligible(&a[i][j])).max_by(
            |&(i, j), &(k, l)| {
                if S::EXACT {
                    (k, l).cmp(&(i, j))
                } else {
                    a[i][j].magnitude().partial_cmp(&a[k][l].magnitude()).unwrap_or(std::cmp::Ordering::Equal)
                }
            },
        );
        let Some((p, r)) = off else {
            inertia.zero += m;
            break;
        };
        inertia.positive += 1;
        inertia.negative += 1;
        // E = [[a_pp, b], [b, a_rr]]; Schur complement R - B E^{-1} B^T
        let (e11, b, e22) = (a[p][p].clone(), a[p][r].clone(), a[r][r].clone());
        let det = e11.clone() * &e22 - &(b.clone() * &b);
        let (i11, i12, i22) = (e22 / &det, -(b / &det), e11 / &det);
        let rest: Vec<usize> = (0..m).filter(|&i| i != p && i != r).collect();
        a = rest
            .iter()
            .map(|&i| {
                let (u1, u2) = (a[i][p].clone(), a[i][r].clone());
                let w1 = u1.clone() * &i11 + &(u2.clone() * &i12);
                let w2 = u1 * &i12 + &(u2 * &i22);
                rest.iter().map(|&j| a[i][j].clone() - &(w1.clone() * &a[p][j]) - &(w2.clone() * &a[r][j])).collect()
            })
            .collect();
    }
    inertia
}

/// Signature of a symmetric matrix. Descartes on the characteristic
/// polynomial is exact in exact mode. In float mode it is cross-checked
/// against the elimination inertia and a disagreement means the working
/// precision is not enough.
pub fn signature_of<S: Scalar>(h: &SquareMatrix<S>) -> Result<i64> {
    let primary = descartes_signature(h)?;
    if S::EXACT {
        return Ok(primary);
    }
    let check = ldl_inertia(h).signature();
    if primary == check {
        return Ok(primary);
    }
    Err(Error::PrecisionExhausted(format!(
        "signature methods disagree ({primary} from the characteristic polynomial, {check} from elimination)"
    )))
}

/// Signature of `hq`; `p` is accepted for interface symmetry with callers
/// that hold both and is only used to check dimensions.
pub fn signature<S: Scalar>(hq: &HermiteForm<S>, p: &Poly<S>) -> Result<i64> {
    if p.degree() != hq.dim() {
        return Err(Error::Input(format!("polynomial of degree {} with a {1}x{1} Hermite matrix", p.degree(), hq.dim())));
    }
    hq.signature()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_decimal, BigFloat};

    fn rp(cs: &[&str]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|c| parse_decimal(c).unwrap()).collect())
    }

    fn r(s: &str) -> Rational {
        parse_decimal(s).unwrap()
    }

    fn paper_poly() -> Poly<Rational> {
        rp(&["-71/8", "-5/8", "-17", "99/4", "-37/4", "1"])
    }

    #[test]
    fn root_scale_clears_denominators() {
        let p = Poly::new(vec![r("-8.875"), r("-0.625"), r("-17"), r("24.75"), r("-9.25"), r("1")]);
        let scale = integral_root_scale(&p);
        assert_eq!(scale, BigInt::from(4));
        let ints = scaled_power_sums(&power_sums(&p, 10).unwrap(), &scale);
        assert_eq!(ints[0], BigInt::from(5));
        assert_eq!(ints[1], BigInt::from(37));
        assert_eq!(ints[2], BigInt::from(577));
        let x2 = Poly::new(vec![r("-0.01"), r("0"), r("1")]);
        assert_eq!(integral_root_scale(&x2), BigInt::from(10));
    }

    #[test]
    fn balancing_keeps_signatures_and_shrinks_entries() {
        let p = paper_poly();
        let sums = power_sums(&p, 10).unwrap();
        let s = balancing_scale(&sums);
        // largest root is about 5, the first power sum 9.25
        assert!(s == r("0.25") || s == r("0.125"), "{s}");
        for (lo, hi) in [("-2", "-1.25"), ("1.25", "2"), ("4.5", "5"), ("3", "3.75")] {
            let q = Poly::new(vec![r(lo) * r(hi), -(r(lo) + r(hi)), r("1")]);
            let direct = hankel_hq(&sums, 5, &q).unwrap();
            let balanced = balanced_hankel_hq(&sums, 5, &q, &s).unwrap();
            assert_eq!(signature_of(&balanced).unwrap(), direct.signature().unwrap(), "[{lo}, {hi}]");
            assert!(balanced.max_abs() < direct.matrix().max_abs());
        }

        let pf: Poly<BigFloat> = Poly::from_rationals(p.coeffs(), &BigFloat::zero(128));
        let sf = power_sums(&pf, 10).unwrap();
        let one = Poly::constant(BigFloat::from_i64(1, 128));
        let h = balanced_hankel_hq(&sf, 5, &one, &balancing_scale(&sf)).unwrap();
        assert_eq!(signature_of(&h).unwrap(), 3);
        // scaling by a power of two is exact: s^(1+1+2) S[2]
        let s4 = s.clone() * &s * &s * &s;
        assert_eq!(h[(1, 1)].to_rational(), r("577") / r("16") * s4);
    }

    #[test]
    fn newton_girard() {
        let s = power_sums(&paper_poly(), 8).unwrap();
        let want = [
            "5",
            "37/4",
            "577/16",
            "9961/64",
            "180961/256",
            "3430137/1024",
            "66520657/4096",
            "1306653161/16384",
            "25855455169/65536",
        ];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(s.get(k), &r(w), "S[{k}]");
        }
        assert_eq!(power_sums(&rp(&["-1", "0", "1"]), 4).unwrap().as_slice(), &[r("2"), r("0"), r("2"), r("0"), r("2")]);
        let s = power_sums(&rp(&["2", "-3", "1"]), 3).unwrap();
        assert_eq!(s.as_slice(), &[r("2"), r("3"), r("5"), r("9")]);
        assert!(power_sums(&rp(&["1", "2"]), 2).is_err());
    }

    #[test]
    fn companion_layout() {
        let c = companion(&paper_poly()).unwrap();
        let last: Vec<Rational> = (0..5).map(|i| c.matrix()[(i, 4)].clone()).collect();
        assert_eq!(last, vec![r("8.875"), r("0.625"), r("17"), r("-24.75"), r("9.25")]);
        assert_eq!(c.matrix()[(1, 0)], r("1"));
        assert_eq!(companion(&rp(&["-3", "1"])).unwrap().matrix()[(0, 0)], r("3"));
        let rot = companion(&rp(&["1", "0", "1"])).unwrap();
        assert_eq!(rot.matrix().entries(), &[r("0"), r("-1"), r("1"), r("0")]);
        assert!(companion(&rp(&["1", "2"])).is_err());
        assert_eq!(charpoly::faddeev_leverrier(c.matrix()), paper_poly());
    }

    #[test]
    fn q_of_companion_matches_dense_horner() {
        let c = companion(&paper_poly()).unwrap();
        let q = rp(&["-4.6875", "-2.5", "1"]); // (x - 1.25)^2 - 2.5^2
        let fast = apply_q_to_companion(&q, &c);
        let cm = c.matrix();
        let dense = (cm * cm).add(&cm.scale(&r("-2.5"))).add(&SquareMatrix::identity_like(5, &r("1")).scale(&r("-4.6875")));
        assert_eq!(fast, dense);
        let one = apply_q_to_companion(&rp(&["1"]), &c);
        assert_eq!(one, SquareMatrix::identity_like(5, &r("1")));
        let rot = companion(&rp(&["1", "0", "1"])).unwrap();
        assert_eq!(&apply_q_to_companion(&rp(&["0", "1"]), &rot), rot.matrix());
        let cubic = rp(&["1", "-1", "2", "3"]);
        let c3 = &(cm * cm) * cm;
        let want = c3.scale(&r("3")).add(&(cm * cm).scale(&r("2"))).sub(cm).add(&SquareMatrix::identity_like(5, &r("1")));
        assert_eq!(apply_q_to_companion(&cubic, &c), want);
    }

    #[test]
    fn h1_fixture() {
        let h1 = build_h1(&paper_poly()).unwrap();
        let h = h1.matrix();
        assert_eq!(h[(0, 0)], r("5"));
        assert_eq!(h[(0, 1)], r("9.25"));
        // agrees with the printed value to half a unit in its last place
        let printed = |x: &Rational, text: &str| {
            let decimals = text.split('.').nth(1).map_or(0, str::len) as u32;
            let half = Rational::new(5.into(), num_traits::pow(BigInt::from(10), decimals as usize + 1));
            num_traits::Signed::abs(&(x - r(text))) <= half
        };
        assert!(printed(&h[(0, 2)], "36.063"));
        assert!(printed(&h[(0, 3)], "155.64"));
        assert!(printed(&h[(0, 4)], "706.88"));
        assert!(printed(&h[(4, 4)], "394523"));
        for i in 1..5 {
            for j in 0..4 {
                assert_eq!(h[(i, j)], h[(i - 1, j + 1)]);
            }
        }
        assert_eq!(h1.signature().unwrap(), 3);
        let h = build_h1(&rp(&["-1", "0", "1"])).unwrap();
        assert_eq!(h.matrix().entries(), &[r("2"), r("0"), r("0"), r("2")]);
        let h = build_h1(&rp(&["1", "0", "1"])).unwrap();
        assert_eq!(h.matrix().entries(), &[r("2"), r("0"), r("0"), r("-2")]);
        assert_eq!(h.signature().unwrap(), 0);
    }

    #[test]
    fn hq_fixtures() {
        let p = paper_poly();
        let c = companion(&p).unwrap();
        let h1 = build_h1(&p).unwrap();
        let same = build_hq(&h1, &rp(&["1"]), &c).unwrap();
        assert_eq!(same.matrix(), h1.matrix());
        let d1 = build_hq(&h1, &rp(&["-4.6875", "-2.5", "1"]), &c).unwrap();
        assert!(d1.matrix().is_symmetric());
        assert_eq!(d1.matrix(), &(h1.matrix() * &apply_q_to_companion(d1.q(), &c)));
        assert_ne!(signature(&d1, &p).unwrap(), 3);
        let d2 = build_hq(&h1, &rp(&["-1", "0", "1"]), &c).unwrap();
        assert_eq!(signature(&d2, &p).unwrap(), 3);
        // [1.25, 2]: q = (x - 1.25)(x - 2)
        let iv = build_hq(&h1, &rp(&["2.5", "-3.25", "1"]), &c).unwrap();
        assert_eq!(signature(&iv, &p).unwrap(), 1);
        let sums = power_sums(&p, 10).unwrap();
        for q in [rp(&["2.5", "-3.25", "1"]), rp(&["-4.6875", "-2.5", "1"]), rp(&["3", "1"])] {
            assert_eq!(hankel_hq(&sums, 5, &q).unwrap().matrix(), build_hq(&h1, &q, &c).unwrap().matrix());
        }
        assert!(hankel_hq(&power_sums(&p, 9).unwrap(), 5, &rp(&["1", "0", "1"])).is_err());
    }

    #[test]
    fn float_path_matches_exact() {
        let p: Poly<BigFloat> = Poly::from_rationals(paper_poly().coeffs(), &BigFloat::zero(256));
        let c = companion(&p).unwrap();
        let h1 = build_h1(&p).unwrap();
        assert_eq!(h1.signature().unwrap(), 3);
        let q: Poly<BigFloat> = Poly::from_rationals(rp(&["2.5", "-3.25", "1"]).coeffs(), &BigFloat::zero(256));
        let iv = build_hq(&h1, &q, &c).unwrap();
        assert_eq!(iv.signature().unwrap(), 1);
    }

    #[test]
    fn inertia_handles_zero_diagonal_and_singularity() {
        let m = SquareMatrix::from_rows(vec![vec![r("0"), r("1")], vec![r("1"), r("0")]]).unwrap();
        assert_eq!(ldl_inertia(&m), Inertia { positive: 1, negative: 1, zero: 0 });
        assert_eq!(descartes_signature(&m).unwrap(), 0);
        let s = SquareMatrix::from_rows(vec![
            vec![r("1"), r("1"), r("0")],
            vec![r("1"), r("1"), r("0")],
            vec![r("0"), r("0"), r("-3")],
        ])
        .unwrap();
        assert_eq!(ldl_inertia(&s), Inertia { positive: 1, negative: 1, zero: 1 });
        assert_eq!(descartes_signature(&s).unwrap(), 0);
    }
}
