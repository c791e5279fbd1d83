//! Gershgorin localization and Hermite certification of disks and intervals.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charpoly::charpoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;

use crate::hermite::{
    balanced_hankel_hq, balancing_scale, build_hq, companion, h1_from_sums, hankel_hq, integral_root_scale, power_sums, scaled_hankel_signature,
    scaled_power_sums, signature_of, Companion, HermiteForm, PowerSums,
};
use crate::matrix::SquareMatrix;
use crate::numerics::Scalar;
use crate::poly::{square_free_part, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiskVerdict {
    ContainsReal,
    EmptyOfReal,
    PointEigenvalue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiskKind {
    Row,
    Column,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disk<S> {
    pub index: usize,
    pub kind: DiskKind,
    pub center: S,
    pub radius: S,
    pub verdict: Option<DiskVerdict>,
    /// `sigma(H_q)` for `q = (x - c)^2 - r^2`; absent for point disks.
    pub sigma: Option<i64>,
}

impl<S: Scalar> Disk<S> {
    pub fn lo(&self) -> S {
        self.center.clone() - &self.radius
    }

    pub fn hi(&self) -> S {
        self.center.clone() + &self.radius
    }

    pub fn contains_real(&self) -> bool {
        self.verdict == Some(DiskVerdict::ContainsReal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalVerdict {
    ContainsReal,
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedInterval<S> {
    pub lo: S,
    pub hi: S,
    pub verdict: IntervalVerdict,
    /// `sigma(H_q)` for `q = (x - lo)(x - hi)`.
    pub sigma: i64,
    /// Real roots strictly inside the interval.
    pub min_root_count: usize,
    /// Endpoints that are themselves roots.
    pub endpoint_roots: Vec<S>,
    /// Disks whose real segment covers the interval.
    pub source: Vec<usize>,
}

impl<S: Scalar> CertifiedInterval<S> {
    pub fn width(&self) -> S {
        self.hi.clone() - &self.lo
    }

    pub fn contains_real(&self) -> bool {
        self.verdict == IntervalVerdict::ContainsReal
    }

    /// Degenerate interval `[x, x]` around a known root.
    pub fn point(x: S, sigma: i64, source: Vec<usize>) -> Self {
        CertifiedInterval {
            lo: x.clone(),
            hi: x.clone(),
            verdict: IntervalVerdict::ContainsReal,
            sigma,
            min_root_count: 1,
            endpoint_roots: vec![x],
            source,
        }
    }
}

pub(crate) fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).expect("scalars are totally ordered")
}

/// Shared read-only data for every certification of one matrix.
#[derive(Clone, Debug)]
pub struct Context<S> {
    charpoly: Poly<S>,
    poly: Poly<S>,
    companion: Companion<S>,
    sums: PowerSums<S>,
    h1: HermiteForm<S>,
    sigma1: i64,
    known_roots: Vec<S>,
    // exact mode: L and the integer power sums L^k S[k] of the scaled roots
    scaled: Option<(BigInt, Vec<BigInt>)>,
    // float mode: power of two balancing the Hankel matrices
    balance: S,
}

impl<S: Scalar> Context<S> {
    /// Characteristic polynomial, square-free deflation (exact mode only),
    /// companion matrix, `H_1` and `sigma(H_1)`.
    pub fn from_matrix(a: &SquareMatrix<S>) -> Result<Self> {
        Self::from_charpoly(charpoly(a)?)
    }

    pub fn from_charpoly(p: Poly<S>) -> Result<Self> {
        let poly = if S::EXACT { square_free_part(&p)? } else { p.clone() };
        let n = poly.degree();
        let companion = companion(&poly)?;
        let sums = power_sums(&poly, 2 * n)?;
        let h1 = h1_from_sums(&sums, n);
        let scaled = S::EXACT.then(|| {
            let exact = Poly::new(poly.coeffs().iter().map(Scalar::to_rational).collect());
            let scale = integral_root_scale(&exact);
            let ints = scaled_power_sums(&sums, &scale);
            (scale, ints)
        });
        let balance = balancing_scale(&sums);
        let mut ctx = Context { charpoly: p, poly, companion, sums, h1, sigma1: 0, known_roots: Vec::new(), scaled, balance };
        ctx.sigma1 = ctx.sigma_q(&Poly::constant(ctx.poly.coeffs()[n].one_like()))?;
        log::debug!("sigma(H_1) = {} for degree {n}", ctx.sigma1);
        Ok(ctx)
    }

    /// Roots known exactly by other means (zero-radius disks), treated as
    /// endpoint roots even when float evaluation of `p` is not exactly zero.
    pub fn with_known_roots(mut self, roots: Vec<S>) -> Self {
        self.known_roots = roots;
        self
    }

    pub fn charpoly(&self) -> &Poly<S> {
        &self.charpoly
    }

    /// The polynomial whose roots are certified (square-free in exact mode).
    pub fn poly(&self) -> &Poly<S> {
        &self.poly
    }

    pub fn companion(&self) -> &Companion<S> {
        &self.companion
    }

    pub fn h1(&self) -> &HermiteForm<S> {
        &self.h1
    }

    pub fn sigma1(&self) -> i64 {
        self.sigma1
    }

    pub fn is_root(&self, x: &S) -> bool {
        self.poly.eval(x).is_zero() || self.known_roots.iter().any(|r| r == x)
    }

    /// Power sums `S[0..=2n]` of [`Context::poly`].
    pub fn power_sums(&self) -> &PowerSums<S> {
        &self.sums
    }

    /// `H_q = H_1 q(C)` for `deg q <= 2`. Exact mode reads it off the shifted
    /// power sums; float mode forms the product and checks its symmetry.
    pub fn hq(&self, q: &Poly<S>) -> Result<HermiteForm<S>> {
        if S::EXACT && q.degree() <= 2 {
            hankel_hq(&self.sums, self.poly.degree(), q)
        } else {
            build_hq(&self.h1, q, &self.companion)
        }
    }

    /// `sigma(H_q)`. With `deg q <= 2` both modes work on a positive
    /// diagonal congruence of `H_q`, which has the same signature: exact mode
    /// scales to small integers, float mode to entries of size about `n`.
    pub fn sigma_q(&self, q: &Poly<S>) -> Result<i64> {
        if q.degree() > 2 {
            return self.hq(q)?.signature();
        }
        match &self.scaled {
            Some((scale, ints)) => {
                let exact = Poly::new(q.coeffs().iter().map(Scalar::to_rational).collect());
                scaled_hankel_signature(ints, scale, self.poly.degree(), &exact)
            }
            None => signature_of(&balanced_hankel_hq(&self.sums, self.poly.degree(), q, &self.balance)?),
        }
    }
}

/// Row disks (or column disks): center `a_ii`, radius the off-diagonal
/// absolute sum.
pub fn gershgorin_disks<S: Scalar>(a: &SquareMatrix<S>, kind: DiskKind) -> Vec<Disk<S>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            let mut radius = a.like().zero_like();
            for j in (0..n).filter(|&j| j != i) {
                let e = match kind {
                    DiskKind::Row => &a[(i, j)],
                    DiskKind::Column => &a[(j, i)],
                };
                radius += &e.magnitude();
            }
            Disk { index: i, kind, center: a[(i, i)].clone(), radius, verdict: None, sigma: None }
        })
        .collect()
}

/// A zero-radius disk is an eigenvalue; otherwise the disk holds a real
/// root iff `sigma(H_q) != sigma(H_1)` for `q = (x - c)^2 - r^2`.
pub fn certify_disk<S: Scalar>(ctx: &Context<S>, disk: &Disk<S>) -> Result<Disk<S>> {
    let mut out = disk.clone();
    if disk.radius.is_zero() {
        out.verdict = Some(DiskVerdict::PointEigenvalue);
        return Ok(out);
    }
    let c = &disk.center;
    let q = Poly::new(vec![
        c.clone() * c - &(disk.radius.clone() * &disk.radius),
        -(c.clone() + c),
        c.one_like(),
    ]);
    let sigma = ctx.sigma_q(&q)?;
    out.sigma = Some(sigma);
    out.verdict = Some(if sigma != ctx.sigma1 { DiskVerdict::ContainsReal } else { DiskVerdict::EmptyOfReal });
    Ok(out)
}

fn sort_dedup<S: Scalar>(v: &mut Vec<S>) {
    v.sort_by(cmp);
    v.dedup();
}

fn in_segments<S: Scalar>(x: &S, segments: &[(S, S)]) -> bool {
    segments.iter().any(|(lo, hi)| lo <= x && x <= hi)
}

/// Real segments of the contains-real disks.
pub fn certified_segments<S: Scalar>(disks: &[Disk<S>]) -> Vec<(S, S)> {
    disks.iter().filter(|d| d.contains_real()).map(|d| (d.lo(), d.hi())).collect()
}

/// Breakpoints: `c - r, c, c + r` of every contains-real disk, plus the
/// boundary points (or the center, for zero radius) of every other disk
/// that falls inside a contains-real segment.
pub fn candidate_points<S: Scalar>(disks: &[Disk<S>]) -> Vec<S> {
    let segments = certified_segments(disks);
    let mut points = Vec::new();
    for d in disks {
        if d.contains_real() {
            points.extend([d.lo(), d.center.clone(), d.hi()]);
        } else {
            points.extend([d.lo(), d.hi()].into_iter().filter(|x| in_segments(x, &segments)));
        }
    }
    sort_dedup(&mut points);
    points
}

/// Certifies `[lo, hi]` with `q = (x - lo)(x - hi)`.
///
/// `sigma(H_1) - sigma(H_q) = 2 N_inside + N_endpoint`, so endpoint roots
/// (found by evaluating `p`) are subtracted before halving. The verdict is
/// contains-real iff at least one root lies strictly inside.
pub fn certify_interval<S: Scalar>(ctx: &Context<S>, lo: &S, hi: &S) -> Result<CertifiedInterval<S>> {
    if lo >= hi {
        return Err(Error::Input(format!("certify_interval needs lo < hi, got [{lo}, {hi}]")));
    }
    let q = Poly::new(vec![lo.clone() * hi, -(lo.clone() + hi), lo.one_like()]);
    let sigma = ctx.sigma_q(&q)?;
    let endpoint_roots: Vec<S> = [lo, hi].into_iter().filter(|x| ctx.is_root(x)).cloned().collect();
    let diff = ctx.sigma1 - sigma - endpoint_roots.len() as i64;
    if diff < 0 || diff % 2 != 0 {
        let msg = format!(
            "interval [{lo}, {hi}]: sigma(H_1) = {}, sigma(H_q) = {sigma}, {} endpoint roots give an impossible count",
            ctx.sigma1,
            endpoint_roots.len()
        );
        return Err(if S::EXACT { Error::Internal(msg) } else { Error::PrecisionExhausted(msg) });
    }
    let min_root_count = (diff / 2) as usize;
    Ok(CertifiedInterval {
        lo: lo.clone(),
        hi: hi.clone(),
        verdict: if min_root_count > 0 { IntervalVerdict::ContainsReal } else { IntervalVerdict::Empty },
        sigma,
        min_root_count,
        endpoint_roots,
        source: Vec::new(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct LocateOptions {
    /// Also certify column disks and test only intervals inside both the
    /// row and the column certified unions.
    pub column_disks: bool,
}

/// Output of [`locate`].
#[derive(Clone, Debug)]
pub struct Localization<S> {
    pub context: Context<S>,
    pub disks: Vec<Disk<S>>,
    /// Every tested interval between consecutive breakpoints, in order.
    pub candidates: Vec<CertifiedInterval<S>>,
    /// Zero-radius disk centers and breakpoints that are roots, sorted.
    pub point_eigenvalues: Vec<S>,
}

impl<S: Scalar> Localization<S> {
    /// The contains-real candidates.
    pub fn intervals(&self) -> Vec<CertifiedInterval<S>> {
        self.candidates.iter().filter(|iv| iv.contains_real()).cloned().collect()
    }
}

/// Gershgorin disks, disk certification, breakpoints and interval
/// certification. Every real eigenvalue of `a` lies in a returned
/// contains-real interval or is a returned point eigenvalue.
pub fn locate<S: Scalar>(a: &SquareMatrix<S>, opts: &LocateOptions) -> Result<Localization<S>> {
    let mut disks = gershgorin_disks(a, DiskKind::Row);
    if opts.column_disks {
        disks.extend(gershgorin_disks(a, DiskKind::Column));
    }
    let mut points: Vec<S> = disks.iter().filter(|d| d.radius.is_zero()).map(|d| d.center.clone()).collect();
    sort_dedup(&mut points);
    let ctx = Context::from_matrix(a)?.with_known_roots(points.clone());

    let disks = disks.par_iter().map(|d| certify_disk(&ctx, d)).collect::<Result<Vec<_>>>()?;

    let (rows, cols): (Vec<_>, Vec<_>) = disks.iter().cloned().partition(|d| d.kind == DiskKind::Row);
    let mut breakpoints = candidate_points(&rows);
    let row_segments = certified_segments(&rows);
    let col_segments = certified_segments(&cols);
    if opts.column_disks {
        breakpoints.extend(candidate_points(&cols));
        sort_dedup(&mut breakpoints);
    }
    // zero-radius centers inside a certified segment become breakpoints, so
    // the point eigenvalue is an endpoint and is not counted twice
    breakpoints.extend(points.iter().filter(|x| in_segments(*x, &row_segments)).cloned());
    sort_dedup(&mut breakpoints);

    let pairs: Vec<(S, S)> = breakpoints
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .filter(|(lo, hi)| {
            if !opts.column_disks {
                return true;
            }
            let mid = (lo.clone() + hi) / &lo.lift_int(2);
            in_segments(&mid, &row_segments) && in_segments(&mid, &col_segments)
        })
        .collect();
    let mut candidates = pairs
        .par_iter()
        .map(|(lo, hi)| certify_interval(&ctx, lo, hi))
        .collect::<Result<Vec<_>>>()?;
    for iv in &mut candidates {
        iv.source = rows.iter().filter(|d| d.contains_real() && d.lo() <= iv.lo && iv.hi <= d.hi()).map(|d| d.index).collect();
        points.extend(iv.endpoint_roots.iter().cloned());
    }
    sort_dedup(&mut points);
    log::info!(
        "{} disks, {} breakpoints, {} intervals certified, {} point eigenvalues",
        disks.len(),
        breakpoints.len(),
        candidates.iter().filter(|iv| iv.contains_real()).count(),
        points.len()
    );
    Ok(Localization { context: ctx, disks, candidates, point_eigenvalues: points })
}
