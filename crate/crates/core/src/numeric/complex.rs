use std::fmt;

use super::dyadic::Dyadic;
use super::elementary;
use super::interval::RInterval;
use super::{NumError, Rat};

/// Rectangular complex enclosure `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CInterval {
    pub re: RInterval,
    pub im: RInterval,
}

impl CInterval {
    pub fn new(re: RInterval, im: RInterval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: RInterval) -> Self {
        CInterval { re, im: RInterval::zero() }
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        CInterval::real(RInterval::from_rat(r, prec))
    }

    pub fn zero() -> Self {
        CInterval::real(RInterval::zero())
    }

    pub fn one() -> Self {
        CInterval::real(RInterval::one())
    }

    pub fn i() -> Self {
        CInterval::new(RInterval::zero(), RInterval::one())
    }

    /// True when the imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im == RInterval::zero()
    }

    /// Largest of the real and imaginary widths.
    pub fn width(&self) -> Dyadic {
        self.re.width().greater(&self.im.width()).clone()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, other: &CInterval) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        self.re.contains_rat(r) && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &CInterval) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn intersect(&self, other: &CInterval) -> Option<CInterval> {
        Some(CInterval::new(self.re.intersect(&other.re)?, self.im.intersect(&other.im)?))
    }

    pub fn hull(&self, other: &CInterval) -> CInterval {
        CInterval::new(self.re.hull(&other.re), self.im.hull(&other.im))
    }

    pub fn inflate(&self, r: &Dyadic) -> CInterval {
        CInterval::new(self.re.inflate(r), self.im.inflate(r))
    }

    pub fn mid(&self) -> CInterval {
        CInterval::new(RInterval::point(self.re.mid()), RInterval::point(self.im.mid()))
    }

    pub fn neg(&self) -> CInterval {
        CInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CInterval {
        CInterval::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &CInterval, prec: u32) -> CInterval {
        CInterval::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &CInterval, prec: u32) -> CInterval {
        CInterval::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn mul(&self, o: &CInterval, prec: u32) -> CInterval {
        if self.is_real() && o.is_real() {
            return CInterval::real(self.re.mul(&o.re, prec));
        }
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        CInterval::new(re, im)
    }

    pub fn scale(&self, k: &RInterval, prec: u32) -> CInterval {
        CInterval::new(self.re.mul(k, prec), self.im.mul(k, prec))
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self, prec: u32) -> RInterval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn div(&self, o: &CInterval, prec: u32) -> Result<CInterval, NumError> {
        if o.contains_zero() {
            return Err(NumError::DomainStraddle("divisor enclosure contains 0".into()));
        }
        if o.is_real() {
            return Ok(CInterval::new(self.re.div(&o.re, prec)?, self.im.div(&o.re, prec)?));
        }
        let n = o.norm_sqr(prec);
        let num = self.mul(&o.conj(), prec);
        Ok(CInterval::new(num.re.div(&n, prec)?, num.im.div(&n, prec)?))
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self, prec: u32) -> RInterval {
        if self.is_real() {
            let lo = self.re.mig();
            let hi = self.re.mag();
            return RInterval::new(lo, hi);
        }
        self.norm_sqr(prec).sqrt(prec).expect("norm is non-negative")
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self, prec: u32) -> Result<RInterval, NumError> {
        if self.contains_zero() {
            return Err(NumError::DomainStraddle("argument of an enclosure containing 0".into()));
        }
        let pi = elementary::pi(prec + 8);
        if self.re.is_positive() {
            return Ok(elementary::atan(&self.im.div(&self.re, prec)?, prec));
        }
        if self.im.is_positive() {
            let t = elementary::atan(&self.re.div(&self.im, prec)?, prec);
            return Ok(pi.scale_pow2(-1).sub(&t, prec));
        }
        if self.im.is_negative() {
            let t = elementary::atan(&self.re.div(&self.im, prec)?, prec);
            return Ok(pi.scale_pow2(-1).neg().sub(&t, prec));
        }
        // on the negative real axis
        if self.re.is_negative() && self.im.lo().is_zero() {
            let t = elementary::atan(&self.im.div(&self.re, prec)?, prec);
            let out = pi.add(&t, prec);
            return Ok(out.clamp(&Dyadic::zero(), pi.hi()));
        }
        Err(NumError::DomainStraddle("enclosure straddles the logarithm branch cut".into()))
    }

    /// Logarithm on branch `k`: `ln|z| + i(Arg z + 2πk)`.
    pub fn log(&self, branch: i64, prec: u32) -> Result<CInterval, NumError> {
        let wp = prec + 8;
        let (re, arg) = if self.is_real() && self.re.is_positive() {
            (elementary::ln(&self.re, wp)?, RInterval::zero())
        } else if self.is_real() && self.re.is_negative() {
            (elementary::ln(&self.re.neg(), wp)?, elementary::pi(wp))
        } else {
            let half_ln = elementary::ln(&self.norm_sqr(wp), wp)?.scale_pow2(-1);
            (half_ln, self.arg(wp)?)
        };
        let im = if branch == 0 {
            arg
        } else {
            let turns = elementary::pi(wp + 64).scale_pow2(1).mul(&RInterval::from_int(branch), wp);
            arg.add(&turns, wp)
        };
        Ok(CInterval::new(re, im))
    }

    pub fn exp(&self, prec: u32) -> CInterval {
        let wp = prec + 8;
        let m = elementary::exp(&self.re, wp);
        if self.im == RInterval::zero() {
            return CInterval::real(m);
        }
        let (s, c) = elementary::sin_cos(&self.im, wp);
        CInterval::new(m.mul(&c, prec), m.mul(&s, prec))
    }

    /// Principal square root.
    pub fn sqrt(&self, prec: u32) -> Result<CInterval, NumError> {
        if self.is_real() {
            if self.re.is_nonnegative() {
                return Ok(CInterval::real(self.re.sqrt(prec)?));
            }
            if self.re.is_negative() {
                return Ok(CInterval::new(RInterval::zero(), self.re.neg().sqrt(prec)?));
            }
            return Err(NumError::DomainStraddle("square root of an enclosure straddling 0".into()));
        }
        let l = self.log(0, prec + 8)?;
        Ok(CInterval::new(l.re.scale_pow2(-1), l.im.scale_pow2(-1)).exp(prec))
    }

    /// Principal power `exp(w · Log z)` (real when `z > 0` and `w` real).
    pub fn pow(&self, w: &CInterval, prec: u32) -> Result<CInterval, NumError> {
        let wp = prec + 16;
        let l = self.log(0, wp)?;
        Ok(w.mul(&l, wp).exp(prec))
    }

    pub fn powi(&self, n: u32, prec: u32) -> CInterval {
        if self.is_real() {
            return CInterval::real(self.re.powi(n, prec));
        }
        let mut acc = CInterval::one();
        for _ in 0..n {
            acc = acc.mul(self, prec);
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for CInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + i{}", self.re, self.im)
        }
    }
}
