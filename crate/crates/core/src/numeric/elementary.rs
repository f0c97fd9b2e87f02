//! Elementary functions on real enclosures.
//!
//! Every function evaluates a convergent series in interval arithmetic and
//! adds an explicit bound for the truncated tail, so results are sound
//! enclosures at any working precision. Monotone functions are evaluated at
//! the endpoints; the others use a midpoint value widened by a Lipschitz bound.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::dyadic::{Dyadic, Round};
use super::interval::RInterval;
use super::NumError;

const GUARD: u32 = 24;

static PI_CACHE: Mutex<Option<(u32, RInterval)>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<(u32, RInterval)>> = Mutex::new(None);

fn cached(cache: &Mutex<Option<(u32, RInterval)>>, prec: u32, f: impl FnOnce(u32) -> RInterval) -> RInterval {
    {
        let guard = cache.lock().unwrap();
        if let Some((p, v)) = guard.as_ref() {
            if *p >= prec {
                return v.clone();
            }
        }
    }
    let v = f(prec);
    let mut guard = cache.lock().unwrap();
    match guard.as_ref() {
        Some((p, _)) if *p >= prec => {}
        _ => *guard = Some((prec, v.clone())),
    }
    v
}

fn tiny(wp: u32) -> Dyadic {
    Dyadic::pow2(-(wp as i64))
}

/// `sum_{k>=0} (-1)^k y^(2k+1) / (2k+1)` for `|y| <= 1/2`.
fn atan_series(y: &RInterval, wp: u32) -> RInterval {
    let y2 = y.sqr(wp);
    let mut pow = y.clone();
    let mut sum = RInterval::zero();
    let eps = tiny(wp + 4);
    let mut k: i64 = 0;
    loop {
        let denom = RInterval::from_int(2 * k + 1);
        let term = pow.div(&denom, wp).expect("odd denominator");
        if term.mag() < eps {
            // alternating with decreasing magnitude: tail bounded by this term
            return sum.inflate(&term.mag());
        }
        sum = if k % 2 == 0 { sum.add(&term, wp) } else { sum.sub(&term, wp) };
        pow = pow.mul(&y2, wp);
        k += 1;
    }
}

/// `sum_{k>=0} y^(2k+1) / (2k+1)` for `0 <= y <= 1/2`.
fn atanh_series(y: &RInterval, wp: u32) -> RInterval {
    let y2 = y.sqr(wp);
    let mut pow = y.clone();
    let mut sum = RInterval::zero();
    let eps = tiny(wp + 4);
    let mut k: i64 = 0;
    loop {
        let denom = RInterval::from_int(2 * k + 1);
        let term = pow.div(&denom, wp).expect("odd denominator");
        if term.mag() < eps {
            // geometric tail with ratio y^2 <= 1/4
            let tail = term.mag().mul(&Dyadic::from_int(2));
            return sum.inflate(&tail);
        }
        sum = sum.add(&term, wp);
        pow = pow.mul(&y2, wp);
        k += 1;
    }
}

fn compute_pi(prec: u32) -> RInterval {
    let wp = prec + GUARD;
    let fifth = RInterval::from_int(1).div(&RInterval::from_int(5), wp).unwrap();
    let inv239 = RInterval::from_int(1).div(&RInterval::from_int(239), wp).unwrap();
    let a = atan_series(&fifth, wp).mul(&RInterval::from_int(16), wp);
    let b = atan_series(&inv239, wp).mul(&RInterval::from_int(4), wp);
    a.sub(&b, wp)
}

/// Enclosure of π.
pub fn pi(prec: u32) -> RInterval {
    cached(&PI_CACHE, prec, compute_pi)
}

fn compute_ln2(prec: u32) -> RInterval {
    let wp = prec + GUARD;
    let third = RInterval::from_int(1).div(&RInterval::from_int(3), wp).unwrap();
    atanh_series(&third, wp).scale_pow2(1)
}

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> RInterval {
    cached(&LN2_CACHE, prec, compute_ln2)
}

fn exp_point(x: &Dyadic, prec: u32) -> RInterval {
    if x.is_zero() {
        return RInterval::one();
    }
    let s = (x.msb() + 9).max(0) as u32;
    let wp = prec + s + GUARD;
    let r = RInterval::point(x.mul_pow2(-(s as i64)));
    let eps = tiny(wp + 4);
    let mut sum = RInterval::one();
    let mut term = RInterval::one();
    let mut k = 1i64;
    loop {
        term = term.mul(&r, wp).div(&RInterval::from_int(k), wp).unwrap();
        if term.mag() < eps {
            // |r| <= 2^-8, so the tail is at most twice the first omitted term
            sum = sum.inflate(&term.mag().mul(&Dyadic::from_int(2)));
            break;
        }
        sum = sum.add(&term, wp);
        k += 1;
    }
    for _ in 0..s {
        sum = sum.sqr(wp);
    }
    sum
}

/// Enclosure of `exp(x)`.
pub fn exp(x: &RInterval, prec: u32) -> RInterval {
    let lo = exp_point(x.lo(), prec);
    if x.is_point() {
        return round_out(&lo, prec);
    }
    let hi = exp_point(x.hi(), prec);
    round_out(&RInterval::new(lo.lo().clone(), hi.hi().clone()), prec)
}

fn ln_point(x: &Dyadic, prec: u32) -> Result<RInterval, NumError> {
    if !x.is_positive() {
        return Err(NumError::OutOfDomain("logarithm of a non-positive number".into()));
    }
    if *x == Dyadic::one() {
        return Ok(RInterval::zero());
    }
    let k = x.msb();
    let wp = prec + GUARD + (64 - (k.unsigned_abs() | 1).leading_zeros());
    let m = RInterval::point(x.mul_pow2(-k));
    let one = RInterval::one();
    let t = m.sub(&one, wp).div(&m.add(&one, wp), wp)?;
    let body = atanh_series(&t, wp).scale_pow2(1);
    let kln2 = ln2(wp).mul(&RInterval::from_int(k), wp);
    Ok(body.add(&kln2, wp))
}

/// Enclosure of the natural logarithm of a positive enclosure.
pub fn ln(x: &RInterval, prec: u32) -> Result<RInterval, NumError> {
    if !x.is_positive() {
        return Err(if x.is_negative() || x.hi().is_zero() {
            NumError::OutOfDomain("logarithm of a non-positive number".into())
        } else {
            NumError::DomainStraddle("logarithm of an enclosure containing 0".into())
        });
    }
    let lo = ln_point(x.lo(), prec)?;
    if x.is_point() {
        return Ok(round_out(&lo, prec));
    }
    let hi = ln_point(x.hi(), prec)?;
    Ok(round_out(&RInterval::new(lo.lo().clone(), hi.hi().clone()), prec))
}

fn atan_of(x: &RInterval, wp: u32) -> RInterval {
    // x is a narrow enclosure with 0 <= x <= 1 on all points
    let one = RInterval::one();
    let mut y = x.clone();
    for _ in 0..2 {
        let root = one.add(&y.sqr(wp), wp).sqrt(wp).unwrap();
        y = y.div(&one.add(&root, wp), wp).unwrap();
    }
    atan_series(&y, wp).scale_pow2(2)
}

fn atan_point(x: &Dyadic, prec: u32) -> RInterval {
    if x.is_zero() {
        return RInterval::zero();
    }
    if x.is_negative() {
        return atan_point(&x.neg(), prec).neg();
    }
    let wp = prec + GUARD;
    if *x > Dyadic::one() {
        let inv = RInterval::one().div(&RInterval::point(x.clone()), wp).unwrap();
        let inv = inv.clamp(&Dyadic::zero(), &Dyadic::one());
        let half_pi = pi(wp).scale_pow2(-1);
        half_pi.sub(&atan_of(&inv, wp), wp)
    } else {
        atan_of(&RInterval::point(x.clone()), wp)
    }
}

/// Enclosure of `atan(x)`.
pub fn atan(x: &RInterval, prec: u32) -> RInterval {
    let lo = atan_point(x.lo(), prec);
    if x.is_point() {
        return round_out(&lo, prec);
    }
    let hi = atan_point(x.hi(), prec);
    round_out(&RInterval::new(lo.lo().clone(), hi.hi().clone()), prec)
}

/// Taylor enclosures of `(sin r, cos r)` for `|r| <= 1`.
fn sin_cos_small(r: &RInterval, wp: u32) -> (RInterval, RInterval) {
    let eps = tiny(wp + 4);
    let r2 = r.sqr(wp);
    let mut s_term = r.clone();
    let mut c_term = RInterval::one();
    let mut s = RInterval::zero();
    let mut c = RInterval::zero();
    let mut k: i64 = 0;
    loop {
        let s_small = s_term.mag() < eps;
        let c_small = c_term.mag() < eps;
        if s_small && c_small {
            // alternating, decreasing for |r| <= 1
            s = s.inflate(&s_term.mag());
            c = c.inflate(&c_term.mag());
            break;
        }
        if k % 2 == 0 {
            s = s.add(&s_term, wp);
            c = c.add(&c_term, wp);
        } else {
            s = s.sub(&s_term, wp);
            c = c.sub(&c_term, wp);
        }
        let d_s = RInterval::from_int((2 * k + 2) * (2 * k + 3));
        let d_c = RInterval::from_int((2 * k + 1) * (2 * k + 2));
        s_term = s_term.mul(&r2, wp).div(&d_s, wp).unwrap();
        c_term = c_term.mul(&r2, wp).div(&d_c, wp).unwrap();
        k += 1;
    }
    let unit = (Dyadic::from_int(-1), Dyadic::one());
    (s.clamp(&unit.0, &unit.1), c.clamp(&unit.0, &unit.1))
}

fn quadrant(k: &BigInt, s: RInterval, c: RInterval) -> (RInterval, RInterval) {
    let q = num_integer::Integer::mod_floor(k, &BigInt::from(4)).to_u8().unwrap();
    match q {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

fn sin_cos_point(x: &Dyadic, prec: u32) -> (RInterval, RInterval) {
    if x.is_zero() {
        return (RInterval::zero(), RInterval::one());
    }
    let extra = x.msb().max(0) as u32;
    let wp = prec + GUARD + extra;
    let half_pi = pi(wp).scale_pow2(-1);
    let approx = RInterval::point(x.clone())
        .div(&half_pi, 64)
        .unwrap()
        .mid()
        .add(&Dyadic::pow2(-1))
        .floor();
    let shift = half_pi.mul(&RInterval::point(Dyadic::from_bigint(approx.clone())), wp);
    let r = RInterval::point(x.clone()).sub(&shift, wp);
    let (s, c) = sin_cos_small(&r, wp);
    quadrant(&approx, s, c)
}

fn round_out(x: &RInterval, prec: u32) -> RInterval {
    RInterval::new(x.lo().round(prec, Round::Down), x.hi().round(prec, Round::Up))
}

fn lipschitz(center: RInterval, rad: &Dyadic, bound: &Dyadic, prec: u32) -> RInterval {
    let w = rad.mul(bound);
    let one = Dyadic::one();
    round_out(&center.inflate(&w), prec).clamp(&one.neg(), &one)
}

/// Enclosures of `(sin x, cos x)`.
pub fn sin_cos(x: &RInterval, prec: u32) -> (RInterval, RInterval) {
    let (s, c) = sin_cos_point(&x.mid(), prec);
    let rad = x.rad();
    (
        lipschitz(s, &rad, &Dyadic::one(), prec),
        lipschitz(c, &rad, &Dyadic::one(), prec),
    )
}

fn sin_cos_pi_point(t: &Dyadic, prec: u32) -> (RInterval, RInterval) {
    // t = k/2 + r with |r| <= 1/4, reduction exact in dyadics
    let k = t.mul_pow2(1).add(&Dyadic::pow2(-1)).floor();
    let r = t.sub(&Dyadic::from_bigint(k.clone()).mul_pow2(-1));
    if r.is_zero() {
        return quadrant(&k, RInterval::zero(), RInterval::one());
    }
    let wp = prec + GUARD;
    let arg = pi(wp).mul(&RInterval::point(r), wp);
    let (s, c) = sin_cos_small(&arg, wp);
    quadrant(&k, s, c)
}

/// Enclosures of `(sin πt, cos πt)`; exact at multiples of 1/2.
pub fn sin_cos_pi(t: &RInterval, prec: u32) -> (RInterval, RInterval) {
    let (s, c) = sin_cos_pi_point(&t.mid(), prec);
    if t.is_point() {
        return (round_out(&s, prec), round_out(&c, prec));
    }
    let bound = Dyadic::from_int(4); // > π
    let rad = t.rad();
    (
        lipschitz(s, &rad, &bound, prec),
        lipschitz(c, &rad, &bound, prec),
    )
}

/// Enclosure of `sin(πt)`.
pub fn sin_pi(t: &RInterval, prec: u32) -> RInterval {
    sin_cos_pi(t, prec).0
}

fn asin_point(x: &Dyadic, prec: u32) -> RInterval {
    let one = Dyadic::one();
    let wp = prec + GUARD;
    if *x == one {
        return pi(wp).scale_pow2(-1);
    }
    if *x == one.neg() {
        return pi(wp).scale_pow2(-1).neg();
    }
    let xv = RInterval::point(x.clone());
    let den = RInterval::one().sub(&xv.sqr(wp), wp).sqrt(wp).expect("|x| < 1");
    if den.contains_zero() {
        // x extremely close to ±1: fall back to a cruder but sound bound
        let half_pi = pi(wp).scale_pow2(-1);
        return if x.is_positive() {
            RInterval::new(Dyadic::zero(), half_pi.hi().clone())
        } else {
            RInterval::new(half_pi.hi().neg(), Dyadic::zero())
        };
    }
    let q = xv.div(&den, wp).unwrap();
    let mut out = RInterval::zero();
    for (i, p) in [q.lo(), q.hi()].into_iter().enumerate() {
        let a = atan_point(p, wp);
        out = if i == 0 { a } else { RInterval::new(out.lo().clone(), a.hi().clone()) };
    }
    out
}

/// Enclosure of `arcsin(x)` for `x ⊆ [-1, 1]`.
pub fn asin(x: &RInterval, prec: u32) -> Result<RInterval, NumError> {
    let one = Dyadic::one();
    if x.lo() > &one || x.hi() < &one.neg() {
        return Err(NumError::OutOfDomain("arcsin argument outside [-1, 1]".into()));
    }
    if x.hi() > &one || x.lo() < &one.neg() {
        return Err(NumError::DomainStraddle("arcsin argument enclosure straddles ±1".into()));
    }
    let lo = asin_point(x.lo(), prec);
    let hi = if x.is_point() { lo.clone() } else { asin_point(x.hi(), prec) };
    Ok(round_out(&RInterval::new(lo.lo().clone(), hi.hi().clone()), prec))
}

/// Enclosure of `arcsin(x) / π`.
pub fn asin_over_pi(x: &RInterval, prec: u32) -> Result<RInterval, NumError> {
    let wp = prec + GUARD;
    let a = asin(x, wp)?;
    let half = Dyadic::pow2(-1);
    Ok(round_out(&a.div(&pi(wp), wp)?, prec).clamp(&half.neg(), &half))
}
