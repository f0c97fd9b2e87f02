use std::fmt;

use super::dyadic::{Dyadic, Round};
use super::{NumError, Rat};

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl RInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        RInterval { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        RInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        RInterval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        RInterval::point(Dyadic::one())
    }

    pub fn from_int(v: i64) -> Self {
        RInterval::point(Dyadic::from_int(v))
    }

    /// Tightest enclosure of a rational at `prec` bits (exact when dyadic).
    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        match Dyadic::try_from_rat(r) {
            Some(d) => RInterval::point(d),
            None => RInterval {
                lo: Dyadic::from_rat(r, prec, Round::Down),
                hi: Dyadic::from_rat(r, prec, Round::Up),
            },
        }
    }

    /// `[-r, r]`.
    pub fn symmetric(r: Dyadic) -> Self {
        let r = r.abs();
        RInterval { lo: r.neg(), hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Half-width, rounded up.
    pub fn rad(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().greater(&self.hi.abs()).clone()
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().lesser(&self.hi.abs()).clone()
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        let lo = self.lo.to_rat();
        let hi = self.hi.to_rat();
        &lo <= r && r <= &hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &RInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RInterval) -> Option<RInterval> {
        let lo = self.lo.greater(&other.lo).clone();
        let hi = self.hi.lesser(&other.hi).clone();
        (lo <= hi).then(|| RInterval { lo, hi })
    }

    pub fn hull(&self, other: &RInterval) -> RInterval {
        RInterval {
            lo: self.lo.lesser(&other.lo).clone(),
            hi: self.hi.greater(&other.hi).clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    /// Widen by `r` on both sides.
    pub fn inflate(&self, r: &Dyadic) -> RInterval {
        let r = r.abs();
        RInterval {
            lo: self.lo.sub(&r),
            hi: self.hi.add(&r),
        }
    }

    pub fn neg(&self) -> RInterval {
        RInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &RInterval, prec: u32) -> RInterval {
        RInterval {
            lo: self.lo.add(&o.lo).round(prec, Round::Down),
            hi: self.hi.add(&o.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, o: &RInterval, prec: u32) -> RInterval {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RInterval, prec: u32) -> RInterval {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(prec, Round::Down);
        let hi = c.iter().max().unwrap().round(prec, Round::Up);
        RInterval { lo, hi }
    }

    pub fn scale_pow2(&self, k: i64) -> RInterval {
        RInterval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    pub fn sqr(&self, prec: u32) -> RInterval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let hi = a.greater(&b).round(prec, Round::Up);
        let lo = if self.contains_zero() {
            Dyadic::zero()
        } else {
            a.lesser(&b).round(prec, Round::Down)
        };
        RInterval { lo, hi }
    }

    pub fn recip(&self, prec: u32) -> Result<RInterval, NumError> {
        if self.contains_zero() {
            return Err(NumError::DomainStraddle("reciprocal of an enclosure containing 0".into()));
        }
        let one = Dyadic::one();
        Ok(RInterval {
            lo: one.div(&self.hi, prec, Round::Down),
            hi: one.div(&self.lo, prec, Round::Up),
        })
    }

    pub fn div(&self, o: &RInterval, prec: u32) -> Result<RInterval, NumError> {
        if o.contains_zero() {
            return Err(NumError::DomainStraddle("divisor enclosure contains 0".into()));
        }
        let c_lo = [
            self.lo.div(&o.lo, prec, Round::Down),
            self.lo.div(&o.hi, prec, Round::Down),
            self.hi.div(&o.lo, prec, Round::Down),
            self.hi.div(&o.hi, prec, Round::Down),
        ];
        let c_hi = [
            self.lo.div(&o.lo, prec, Round::Up),
            self.lo.div(&o.hi, prec, Round::Up),
            self.hi.div(&o.lo, prec, Round::Up),
            self.hi.div(&o.hi, prec, Round::Up),
        ];
        Ok(RInterval {
            lo: c_lo.iter().min().unwrap().clone(),
            hi: c_hi.iter().max().unwrap().clone(),
        })
    }

    pub fn sqrt(&self, prec: u32) -> Result<RInterval, NumError> {
        if self.lo.is_negative() {
            return Err(if self.hi.is_negative() {
                NumError::OutOfDomain("real square root of a negative number".into())
            } else {
                NumError::DomainStraddle("square root of an enclosure straddling 0".into())
            });
        }
        Ok(RInterval {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        })
    }

    /// Integer power by repeated squaring (sound for any sign pattern).
    pub fn powi(&self, n: u32, prec: u32) -> RInterval {
        if n == 0 {
            return RInterval::one();
        }
        if n % 2 == 0 {
            let h = self.powi(n / 2, prec);
            return h.sqr(prec);
        }
        self.mul(&self.powi(n - 1, prec), prec)
    }

    /// Clamp to `[lo, hi]`, keeping soundness when the true value is known to lie inside.
    pub fn clamp(&self, lo: &Dyadic, hi: &Dyadic) -> RInterval {
        let l = self.lo.greater(lo).lesser(hi).clone();
        let h = self.hi.lesser(hi).greater(lo).clone();
        RInterval { lo: l, hi: h }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}
