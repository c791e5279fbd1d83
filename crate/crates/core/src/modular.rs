//! Exact characteristic polynomials of integer matrices by reduction modulo
//! word-size primes and Chinese remaindering.
//!
//! Each prime costs one `O(n^3)` Hessenberg reduction in Montgomery
//! arithmetic. Enough primes are used to exceed twice a Hadamard-type bound
//! on every coefficient, so the symmetric lift is the true integer
//! coefficient.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

/// Arithmetic modulo an odd prime `p < 2^62` with values kept in
/// Montgomery form `x R mod p`, `R = 2^64`.
#[derive(Clone, Copy)]
struct Field {
    p: u64,
    /// `-p^-1 mod 2^64`
    p_neg_inv: u64,
    /// `R^2 mod p`
    r2: u64,
}

impl Field {
    fn new(p: u64) -> Self {
        // Newton iteration for p^-1 mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % p as u128;
        let r2 = (r * r % p as u128) as u64;
        Field { p, p_neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    fn mont(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    fn unmont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    fn one(&self) -> u64 {
        self.mont(1)
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// `x mod p` in Montgomery form, by Horner over the 64-bit limbs.
    fn reduce(&self, x: &BigInt) -> u64 {
        // Horner on plain residues: mul(r, R^2) = r 2^64 mod p since R = 2^64
        let mut r = 0u64;
        for d in x.magnitude().iter_u64_digits().rev() {
            let mut d = d;
            while d >= self.p {
                d -= self.p;
            }
            r = self.add(self.mul(r, self.r2), d);
        }
        let r = self.mont(r);
        if x.sign() == Sign::Minus {
            self.sub(0, r)
        } else {
            r
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, largest first.
fn primes() -> impl Iterator<Item = u64> {
    let mut candidate = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(candidate) {
            candidate -= 2;
        }
        let p = candidate;
        candidate -= 2;
        Some(p)
    })
}

/// Primes are handed out in blocks so the CRT trees can be shared.
const BLOCK: usize = 32;

type PrimeSet = Arc<(Vec<u64>, CrtTree)>;

/// The first `count` primes and their CRT tree, cached per count.
fn prime_set(count: usize) -> PrimeSet {
    static CACHE: OnceLock<Mutex<HashMap<usize, PrimeSet>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("prime cache poisoned").get(&count) {
        return hit.clone();
    }
    let ps: Vec<u64> = primes().take(count).collect();
    let tree = CrtTree::new(&ps);
    let entry = Arc::new((ps, tree));
    cache.lock().expect("prime cache poisoned").insert(count, entry.clone());
    entry
}

/// Characteristic polynomial modulo `f.p`; input and output in Montgomery
/// form, ascending coefficients.
fn charpoly_mod(mut h: Vec<u64>, n: usize, f: &Field) -> Vec<u64> {
    let at = |i: usize, j: usize| i * n + j;
    let mut mult = vec![0u64; n];
    // similarity reduction to upper Hessenberg form
    for k in 0..n.saturating_sub(2) {
        let Some(r) = (k + 1..n).find(|&i| h[at(i, k)] != 0) else {
            continue;
        };
        if r != k + 1 {
            for j in 0..n {
                h.swap(at(r, j), at(k + 1, j));
            }
            for i in 0..n {
                h.swap(at(i, r), at(i, k + 1));
            }
        }
        let inv = f.inv(h[at(k + 1, k)]);
        // all row operations share the untouched pivot row, so the matching
        // column operations can be applied afterwards in one sweep per row
        let (head, tail) = h.split_at_mut(at(k + 2, 0));
        let pivot_row = &head[at(k + 1, 0)..];
        for (off, row) in tail.chunks_exact_mut(n).enumerate() {
            let m = f.mul(row[k], inv);
            mult[k + 2 + off] = m;
            if m == 0 {
                continue;
            }
            for j in k..n {
                row[j] = f.sub(row[j], f.mul(m, pivot_row[j]));
            }
        }
        for row in h.chunks_exact_mut(n) {
            let mut acc = row[k + 1];
            for i in k + 2..n {
                if mult[i] != 0 {
                    acc = f.add(acc, f.mul(mult[i], row[i]));
                }
            }
            row[k + 1] = acc;
        }
    }
    let h: Vec<&[u64]> = h.chunks_exact(n).collect();
    // Hessenberg determinant recurrence over leading principal submatrices
    let mut ps: Vec<Vec<u64>> = vec![vec![f.one()]];
    for i in 1..=n {
        let d = i - 1;
        let mut next = vec![0u64; i + 1];
        for (k, &c) in ps[i - 1].iter().enumerate() {
            next[k + 1] = f.add(next[k + 1], c);
            next[k] = f.sub(next[k], f.mul(h[d][d], c));
        }
        let mut beta = f.one();
        for m in 1..i {
            beta = f.mul(beta, h[d + 1 - m][d - m]);
            if beta == 0 {
                break;
            }
            let g = f.mul(h[d - m][d], beta);
            if g == 0 {
                continue;
            }
            for (k, &c) in ps[i - m - 1].iter().enumerate() {
                next[k] = f.sub(next[k], f.mul(g, c));
            }
        }
        ps.push(next);
    }
    ps.pop().expect("n >= 1")
}

/// Bits of a bound on `2 max_k |c_k|`. Coefficient `c_{n-k}` is a signed
/// sum of the order-`k` principal minors; by Hadamard each is at most the
/// product of its rows' norms, so `|c_{n-k}| <= e_k(|r_1|, ..., |r_n|)
/// <= prod_i (1 + |r_i|)` with `|r_i|` the row 1-norms.
fn coefficient_bound_bits(a: &[Vec<BigInt>]) -> u64 {
    let mut prod = BigInt::one();
    for row in a {
        let norm: BigInt = row.iter().map(|x| x.abs()).sum();
        prod *= norm + 1u32;
    }
    prod.bits() + 1
}

/// `det(xI - A)` for an integer matrix, ascending coefficients.
pub fn integer_charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let needed = coefficient_bound_bits(a);
    // every prime exceeds 2^61
    let count = (needed as usize / 61 + 1).div_ceil(BLOCK) * BLOCK;
    let set = prime_set(count);
    let (ps, tree) = (&set.0, &set.1);

    // structured inputs (Hankel) repeat entries; reduce each value once
    let mut distinct: Vec<&BigInt> = Vec::new();
    let mut slot = HashMap::new();
    let index: Vec<Vec<usize>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    *slot.entry(x).or_insert_with(|| {
                        distinct.push(x);
                        distinct.len() - 1
                    })
                })
                .collect()
        })
        .collect();

    let residues: Vec<Vec<u64>> = ps
        .par_iter()
        .map(|&p| {
            let f = Field::new(p);
            let values: Vec<u64> = distinct.iter().map(|x| f.reduce(x)).collect();
            let m = index.iter().flatten().map(|&k| values[k]).collect();
            charpoly_mod(m, n, &f).into_iter().map(|c| f.unmont(c)).collect()
        })
        .collect();

    let modulus = tree.modulus();
    let half = modulus >> 1;
    let out: Vec<BigInt> = (0..=n)
        .map(|k| {
            let r: Vec<u64> = residues.iter().map(|cp| cp[k]).collect();
            let c = tree.combine(&r);
            if c > half {
                c - modulus
            } else {
                c
            }
        })
        .collect();
    log::trace!("integer charpoly of order {n}: {count} primes for {needed} bits");
    debug_assert!(out[n].is_one());
    out
}

/// Balanced Chinese-remainder tree: each internal node stores the product
/// of its leaves' moduli and the inverse of the left product modulo the
/// right one, so reconstruction costs a few balanced big multiplications.
enum CrtTree {
    Leaf(BigInt),
    Node {
        modulus: BigInt,
        left_mod: BigInt,
        right_mod: BigInt,
        left_inv: BigInt,
        split: usize,
        children: Box<(CrtTree, CrtTree)>,
    },
}

impl CrtTree {
    fn new(primes: &[u64]) -> Self {
        assert!(!primes.is_empty());
        if primes.len() == 1 {
            return CrtTree::Leaf(BigInt::from(primes[0]));
        }
        let (l, r) = primes.split_at(primes.len() / 2);
        let (left, right) = (CrtTree::new(l), CrtTree::new(r));
        let (lm, rm) = (left.modulus().clone(), right.modulus().clone());
        let left_inv = lm.extended_gcd(&rm).x.mod_floor(&rm);
        CrtTree::Node {
            modulus: &lm * &rm,
            left_mod: lm,
            right_mod: rm,
            left_inv,
            split: l.len(),
            children: Box::new((left, right)),
        }
    }

    fn modulus(&self) -> &BigInt {
        match self {
            CrtTree::Leaf(m) => m,
            CrtTree::Node { modulus, .. } => modulus,
        }
    }

    /// The residue in `[0, modulus)` matching `residues` leaf by leaf.
    fn combine(&self, residues: &[u64]) -> BigInt {
        match self {
            CrtTree::Leaf(_) => BigInt::from(residues[0]),
            CrtTree::Node { left_mod, right_mod, left_inv, split, children, .. } => {
                let a = children.0.combine(&residues[..*split]);
                let b = children.1.combine(&residues[*split..]);
                let t = ((b - &a) * left_inv).mod_floor(right_mod);
                a + left_mod * t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_primes_and_generator() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p < 1 << 62 && p > 1 << 61 && is_prime(p)));
    }

    #[test]
    fn montgomery_field() {
        let p = primes().next().unwrap();
        let f = Field::new(p);
        let (a, b) = (123456789012345u64, p - 17);
        assert_eq!(f.unmont(f.mul(f.mont(a), f.mont(b))), mul_mod(a, b, p));
        assert_eq!(f.unmont(f.mul(f.inv(f.mont(a)), f.mont(a))), 1);
        let x = BigInt::from(3).pow(90) - 7;
        assert_eq!(BigInt::from(f.unmont(f.reduce(&x))), x.mod_floor(&BigInt::from(p)));
        assert_eq!(BigInt::from(f.unmont(f.reduce(&-x.clone()))), (-x).mod_floor(&BigInt::from(p)));
    }

    #[test]
    fn crt_tree_reconstructs() {
        let ps: Vec<u64> = primes().take(5).collect();
        let x = BigInt::from(3).pow(150) + 12345u32;
        let r: Vec<u64> = ps.iter().map(|&p| x.mod_floor(&BigInt::from(p)).try_into().unwrap()).collect();
        assert_eq!(CrtTree::new(&ps).combine(&r), x);
    }

    #[test]
    fn integer_examples() {
        let z = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(integer_charpoly(&ints(&[&[0, -1], &[1, 0]])), z(&[1, 0, 1]));
        assert_eq!(integer_charpoly(&ints(&[&[7]])), z(&[-7, 1]));
        assert_eq!(integer_charpoly(&ints(&[&[0, 0], &[0, 0]])), z(&[0, 0, 1]));
        // 8 * example matrix: coefficients scale by 8^(n-k)
        let a = ints(&[&[10, 8, 6, 4, 2], &[8, 0, 0, 0, 0], &[-8, 8, 0, 0, 0], &[0, 0, 8, 24, 0], &[0, 0, 0, 4, 40]]);
        assert_eq!(integer_charpoly(&a), z(&[-290816, -2560, -8704, 1584, -74, 1]));
    }

    #[test]
    fn huge_entries_need_several_primes() {
        let big = BigInt::from(3).pow(2000);
        let a = vec![vec![big.clone(), BigInt::from(1)], vec![BigInt::from(-1), -big.clone()]];
        // x^2 - (big^2 - 1)
        let want = vec![-(&big * &big) + 1, BigInt::zero(), BigInt::one()];
        assert_eq!(integer_charpoly(&a), want);
    }
}
