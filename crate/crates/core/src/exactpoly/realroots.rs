//! Real-root isolation for univariate rational polynomials.
//!
//! Sturm sequences over exact rationals isolate every real root; isolated
//! roots are then narrowed by rational bisection and reported as `f64`.
//! Used for root-location evidence (orthogonal-polynomial roots inside the
//! family interval) and as the generic fallback of the critical-point finder.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::rat::{rat_to_f64, Rat};
use super::unipoly::UniPoly;

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = Vec::new();
    let p0 = p.clone();
    let p1 = p.diff();
    chain.push(p0.primitive_pos());
    if !p1.is_zero() {
        chain.push(p1.primitive_pos());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // positive rescaling preserves the Sturm sign structure
            chain.push(r.scale(&-Rat::from_integer(1.into())).primitive_pos());
        }
    }
    chain
}

fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_changes_at(chain: &[UniPoly], t: &Rat) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in chain {
        let s = sign(&p.eval(t));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Upper bound B with all real roots in (-B, B).
fn cauchy_bound(p: &UniPoly) -> Rat {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut max = Rat::zero();
    for c in p.coeffs() {
        let m = c.abs() / lead.clone();
        if m > max {
            max = m;
        }
    }
    max + Rat::from_integer(1.into())
}

/// All real roots of `p`, ascending, multiplicities collapsed.
pub fn real_roots(p: &UniPoly) -> Vec<f64> {
    match p.degree() {
        None | Some(0) => return Vec::new(),
        _ => {}
    }
    // square-free part keeps Sturm counts honest at multiple roots
    let g = UniPoly::gcd(p, &p.diff());
    let sf = if g.degree() == Some(0) { p.clone() } else { p.div_rem(&g).0 };
    let chain = sturm_chain(&sf);
    let bound = cauchy_bound(&sf);
    let mut out = Vec::new();
    isolate(&chain, &sf, &(-bound.clone()), &bound, &mut out);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Real roots of `p` within the open interval `(lo, hi)` (float bounds).
pub fn real_roots_in(p: &UniPoly, lo: f64, hi: f64) -> Vec<f64> {
    real_roots(p).into_iter().filter(|r| *r > lo && *r < hi).collect()
}

fn isolate(chain: &[UniPoly], p: &UniPoly, lo: &Rat, hi: &Rat, out: &mut Vec<f64>) {
    // roots in the half-open interval (lo, hi]
    let count = sign_changes_at(chain, lo).saturating_sub(sign_changes_at(chain, hi));
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(refine(p, lo.clone(), hi.clone()));
        return;
    }
    let mid = (lo + hi) / Rat::from_integer(2.into());
    isolate(chain, p, lo, &mid, out);
    isolate(chain, p, &mid, hi, out);
}

/// Bisection on an interval (lo, hi] known to hold exactly one root of the
/// square-free `p`. A few exact steps guarantee a sign straddle that is
/// visible in f64; the rest of the narrowing runs in floats.
fn refine(p: &UniPoly, mut lo: Rat, mut hi: Rat) -> f64 {
    let s_hi = sign(&p.eval(&hi));
    if s_hi == 0 {
        return rat_to_f64(&hi);
    }
    for _ in 0..4 {
        let mid = (&lo + &hi) / Rat::from_integer(2.into());
        let s_mid = sign(&p.eval(&mid));
        if s_mid == 0 {
            return rat_to_f64(&mid);
        }
        if s_mid == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut flo = rat_to_f64(&lo);
    let mut fhi = rat_to_f64(&hi);
    let fs_hi = p.eval_f64(fhi);
    if p.eval_f64(flo) * fs_hi > 0.0 {
        // float rounding hid the straddle; the interval is already tiny
        return 0.5 * (flo + fhi);
    }
    for _ in 0..70 {
        let mid = 0.5 * (flo + fhi);
        if mid <= flo || mid >= fhi {
            break;
        }
        if p.eval_f64(mid) * fs_hi >= 0.0 {
            fhi = mid;
        } else {
            flo = mid;
        }
    }
    0.5 * (flo + fhi)
}
