//! Bisection of certified intervals down to a width tolerance.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::localize::{certify_interval, cmp, CertifiedInterval, Context};
use crate::numerics::{Rational, Scalar};
use crate::poly::Poly;

/// One certified interval awaiting bisection.
#[derive(Clone, Debug)]
pub struct RefinementTask<S> {
    pub interval: CertifiedInterval<S>,
    pub epsilon: S,
    pub depth: u32,
}

/// `ceil(log2(width / eps)) + 1`, or 0 when the interval is already narrow.
pub fn max_depth<S: Scalar>(width: &S, eps: &S) -> u32 {
    let ratio = width.to_rational() / eps.to_rational();
    if ratio <= Rational::from_integer(1.into()) {
        return 0;
    }
    let mut levels = 0u32;
    let mut reach = Rational::from_integer(1.into());
    while reach < ratio {
        reach *= Rational::from_integer(2.into());
        levels += 1;
    }
    levels + 1
}

fn failure<S: Scalar>(msg: String) -> Error {
    if S::EXACT {
        Error::Internal(msg)
    } else {
        Error::PrecisionExhausted(msg)
    }
}

/// Bisects `iv` until every piece holding a root is at most `eps` wide.
///
/// Halves certified empty are dropped. A midpoint that is itself a root
/// becomes the point interval `[m, m]`; the search then continues on
/// `[lo, m - d]` and `[m + d, hi]` with `d = eps / 4`, and the two gaps
/// `[m - d, m]`, `[m, m + d]` are certified too so that no root is lost.
pub fn refine_interval<S: Scalar>(ctx: &Context<S>, iv: &CertifiedInterval<S>, eps: &S) -> Result<Vec<CertifiedInterval<S>>> {
    if eps.sign() <= 0 {
        return Err(Error::Input(format!("epsilon must be positive, got {eps}")));
    }
    if !iv.contains_real() {
        return Err(Error::Input(format!("refine_interval needs a contains-real interval, got [{}, {}]", iv.lo, iv.hi)));
    }
    let two = eps.lift_int(2);
    let delta = eps.clone() / &eps.lift_int(4);
    let bound = max_depth(&iv.width(), eps);

    let mut out = Vec::new();
    let mut stack = vec![RefinementTask { interval: iv.clone(), epsilon: eps.clone(), depth: 0 }];
    while let Some(task) = stack.pop() {
        let RefinementTask { interval: cur, depth, .. } = task;
        if cur.width() <= *eps {
            out.push(cur);
            continue;
        }
        if depth >= bound {
            return Err(failure::<S>(format!(
                "interval [{}, {}] still wider than {eps} after {depth} bisections",
                cur.lo, cur.hi
            )));
        }
        let mid = (cur.lo.clone() + &cur.hi) / &two;
        if mid <= cur.lo || mid >= cur.hi {
            return Err(Error::PrecisionExhausted(format!(
                "midpoint of [{}, {}] is not representable at this precision; try --mode exact",
                cur.lo, cur.hi
            )));
        }

        let mut pieces = Vec::new();
        let mut found = 0usize;
        if ctx.is_root(&mid) {
            let q = Poly::new(vec![mid.clone() * &mid, -(mid.clone() * &two), mid.one_like()]);
            out.push(CertifiedInterval::point(mid.clone(), ctx.sigma_q(&q)?, cur.source.clone()));
            found += 1;
            let (left, right) = (mid.clone() - &delta, mid.clone() + &delta);
            pieces.push(certify_interval(ctx, &cur.lo, &left)?);
            pieces.push(certify_interval(ctx, &left, &mid)?);
            pieces.push(certify_interval(ctx, &mid, &right)?);
            pieces.push(certify_interval(ctx, &right, &cur.hi)?);
        } else {
            pieces.push(certify_interval(ctx, &cur.lo, &mid)?);
            pieces.push(certify_interval(ctx, &mid, &cur.hi)?);
        }
        // a root at an inner cut point is counted by neither neighbour
        found += pieces.iter().map(|p| p.min_root_count).sum::<usize>();
        for cut in pieces[1..].iter().map(|p| p.lo.clone()).filter(|x| *x != mid && ctx.is_root(x)) {
            let q = Poly::new(vec![cut.clone() * &cut, -(cut.clone() * &two), cut.one_like()]);
            out.push(CertifiedInterval::point(cut.clone(), ctx.sigma_q(&q)?, cur.source.clone()));
            found += 1;
        }
        if found != cur.min_root_count {
            return Err(failure::<S>(format!(
                "bisecting [{}, {}] at {mid}: {} roots became {found}",
                cur.lo, cur.hi, cur.min_root_count
            )));
        }
        for mut piece in pieces.into_iter().filter(|p| p.contains_real()) {
            piece.source = cur.source.clone();
            stack.push(RefinementTask { interval: piece, epsilon: eps.clone(), depth: depth + 1 });
        }
    }
    out.sort_by(|a, b| cmp(&a.lo, &b.lo).then_with(|| cmp(&a.hi, &b.hi)));
    coalesce(ctx, out, eps)
}

/// Merges neighbours that share an endpoint which is not a root, as long as
/// the union still fits within `eps`. The union is re-certified.
fn coalesce<S: Scalar>(ctx: &Context<S>, sorted: Vec<CertifiedInterval<S>>, eps: &S) -> Result<Vec<CertifiedInterval<S>>> {
    let mut out: Vec<CertifiedInterval<S>> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        if let Some(last) = out.last_mut() {
            let touching = last.hi == iv.lo && last.lo < last.hi && iv.lo < iv.hi && !ctx.is_root(&iv.lo);
            if touching && iv.hi.clone() - &last.lo <= *eps {
                let mut merged = certify_interval(ctx, &last.lo, &iv.hi)?;
                merged.source = last.source.clone();
                *last = merged;
                continue;
            }
        }
        out.push(iv);
    }
    Ok(out)
}

/// Refines every interval independently and returns all pieces sorted.
pub fn refine_all<S: Scalar>(ctx: &Context<S>, intervals: &[CertifiedInterval<S>], eps: &S) -> Result<Vec<CertifiedInterval<S>>> {
    let parts = intervals.par_iter().map(|iv| refine_interval(ctx, iv, eps)).collect::<Result<Vec<_>>>()?;
    let mut out: Vec<CertifiedInterval<S>> = parts.into_iter().flatten().collect();
    out.sort_by(|a, b| cmp(&a.lo, &b.lo).then_with(|| cmp(&a.hi, &b.hi)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localize::locate;
    use crate::localize::LocateOptions;
    use crate::matrix::SquareMatrix;
    use crate::numerics::parse_decimal;

    fn r(s: &str) -> Rational {
        parse_decimal(s).unwrap()
    }

    fn paper_matrix() -> SquareMatrix<Rational> {
        let rows = [
            ["1.25", "1", "0.75", "0.5", "0.25"],
            ["1", "0", "0", "0", "0"],
            ["-1", "1", "0", "0", "0"],
            ["0", "0", "1", "3", "0"],
            ["0", "0", "0", "0.5", "5"],
        ];
        SquareMatrix::from_rows(rows.iter().map(|row| row.iter().map(|x| r(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn depth_bound() {
        assert_eq!(max_depth(&r("0.75"), &r("1")), 0);
        assert_eq!(max_depth(&r("1"), &r("0.5")), 2);
        assert_eq!(max_depth(&r("1"), &r("0.3")), 3);
    }

    #[test]
    fn lambda_one_at_1e7() {
        let ctx = Context::from_matrix(&paper_matrix()).unwrap();
        let iv = certify_interval(&ctx, &r("1.25"), &r("2")).unwrap();
        let out = refine_interval(&ctx, &iv, &r("1e-7")).unwrap();
        assert_eq!(out.len(), 1);
        let (lo, hi) = (&out[0].lo, &out[0].hi);
        assert!(hi.clone() - lo <= r("1e-7"));
        let slack = r("0.00000000005");
        assert!(*lo >= r("1.7329460382") - &slack && *hi <= r("1.7329461277") + &slack, "[{lo}, {hi}]");
    }

    #[test]
    fn lambda_two_at_1e7() {
        let ctx = Context::from_matrix(&paper_matrix()).unwrap();
        let iv = certify_interval(&ctx, &r("2"), &r("3")).unwrap();
        let out = refine_interval(&ctx, &iv, &r("1e-7")).unwrap();
        assert_eq!(out.len(), 1);
        // printed to 10 decimals, so allow half a unit in the last place
        let slack = r("0.00000000005");
        assert!(out[0].lo >= r("2.9347267151") - &slack && out[0].hi <= r("2.9347267747") + &slack);
    }

    #[test]
    fn midpoint_root_becomes_a_point() {
        // x^2 - 4 on [0, 4]: the first midpoint is the root 2
        let ctx = Context::from_charpoly(Poly::new(vec![r("-4"), r("0"), r("1")])).unwrap();
        let iv = certify_interval(&ctx, &r("0"), &r("4")).unwrap();
        let out = refine_interval(&ctx, &iv, &r("0.001")).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!((out[0].lo.clone(), out[0].hi.clone()), (r("2"), r("2")));

        let iv = certify_interval(&ctx, &r("0"), &r("10")).unwrap();
        let out = refine_interval(&ctx, &iv, &r("0.001")).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].lo <= r("2") && r("2") <= out[0].hi && out[0].width() <= r("0.001"));
    }

    #[test]
    fn roots_next_to_a_midpoint_root_survive() {
        // roots 1, 1.00001 and 0.99999 around the midpoint of [0, 2]
        let p = ["1", "1.00001", "0.99999"].iter().fold(Poly::constant(r("1")), |acc, z| &acc * &Poly::linear_root(&r(z)));
        let ctx = Context::from_charpoly(p).unwrap();
        let iv = certify_interval(&ctx, &r("0"), &r("2")).unwrap();
        assert_eq!(iv.min_root_count, 3);
        let out = refine_interval(&ctx, &iv, &r("0.001")).unwrap();
        let total: usize = out.iter().map(|iv| if iv.lo == iv.hi { 1 } else { iv.min_root_count }).sum();
        assert_eq!(total, 3);
        assert!(out.iter().all(|iv| iv.width() <= r("0.001")));
    }

    #[test]
    fn full_pipeline_three_intervals() {
        let loc = locate(&paper_matrix(), &LocateOptions::default()).unwrap();
        let fin = refine_all(&loc.context, &loc.intervals(), &r("1e-7")).unwrap();
        assert_eq!(fin.len(), 3);
        let eps16 = refine_all(&loc.context, &loc.intervals(), &r("1e-16")).unwrap();
        assert_eq!(eps16.len(), 3);
        assert!(eps16.iter().all(|iv| iv.width() <= r("1e-16")));
        assert!(refine_all(&loc.context, &[], &r("1e-7")).unwrap().is_empty());
    }
}
