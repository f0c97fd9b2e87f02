use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Direction of a rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant * 2^exp`, kept with an odd mantissa (or the
/// canonical zero `0 * 2^0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shr(m: &BigInt, k: u64) -> BigInt {
    // BigInt >> rounds toward negative infinity for negative values.
    m >> k
}

fn ceil_shr(m: &BigInt, k: u64) -> BigInt {
    -floor_shr(&-m, k)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(msb) <= |x| < 2^(msb+1)`. Zero maps to `i64::MIN`.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64 - 1
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = match dir {
            Round::Down => floor_shr(&self.mant, shift),
            Round::Up => ceil_shr(&self.mant, shift),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Round to a multiple of `2^e` (absolute precision).
    pub fn round_abs(&self, e: i64, dir: Round) -> Self {
        if self.exp >= e {
            return self.clone();
        }
        let shift = (e - self.exp) as u64;
        let m = match dir {
            Round::Down => floor_shr(&self.mant, shift),
            Round::Up => ceil_shr(&self.mant, shift),
        };
        Dyadic::new(m, e)
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Quotient rounded to `prec` significant bits in direction `dir`.
    /// Panics on a zero divisor; callers check enclosures first.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << shift as u64;
        let den = &other.mant;
        let q = match dir {
            Round::Down => num.div_floor(den),
            Round::Up => -((-num).div_floor(den)),
        };
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    /// Square root of a non-negative value, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(!self.is_negative(), "square root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m: BigInt = &self.mant << shift as u64;
        let mut s = m.sqrt();
        if dir == Round::Up && &s * &s < m {
            s += 1;
        }
        Dyadic::new(s, (self.exp - shift) / 2).round(prec, dir)
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << self.exp as u64)
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest representable value to `r` with `prec` significant bits, rounded in `dir`.
    pub fn from_rat(r: &Rat, prec: u32, dir: Round) -> Self {
        let n = r.numer();
        let d = r.denom();
        if n.is_zero() {
            return Dyadic::zero();
        }
        if d.is_one() {
            return Dyadic::from_bigint(n.clone()).round(prec, dir);
        }
        if (d & (d - BigInt::one())).is_zero() {
            // power-of-two denominator: exact
            let k = d.bits() - 1;
            return Dyadic::new(n.clone(), -(k as i64)).round(prec, dir);
        }
        Dyadic::from_bigint(n.clone()).div(&Dyadic::from_bigint(d.clone()), prec, dir)
    }

    /// Exact rational iff the value is dyadic.
    pub fn try_from_rat(r: &Rat) -> Option<Self> {
        let d = r.denom();
        if (d & (d - BigInt::one())).is_zero() {
            let k = d.bits() - 1;
            Some(Dyadic::new(r.numer().clone(), -(k as i64)))
        } else {
            None
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            floor_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, Round::Down);
        let mut v: f64 = num_traits::ToPrimitive::to_f64(&r.mant).unwrap_or(f64::NAN);
        let mut e = r.exp;
        while e != 0 {
            let step = e.clamp(-512, 512);
            v *= 2f64.powi(step as i32);
            e -= step;
            if v == 0.0 || v.is_infinite() {
                break;
            }
        }
        v
    }

    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn lesser<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn greater<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rat();
        if r.denom().is_one() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn shift_rounds_toward_negative_infinity() {
        assert_eq!(floor_shr(&BigInt::from(-3), 1), BigInt::from(-2));
        assert_eq!(ceil_shr(&BigInt::from(-3), 1), BigInt::from(-1));
        assert_eq!(ceil_shr(&BigInt::from(3), 1), BigInt::from(2));
    }

    #[test]
    fn directed_division_brackets_one_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 40, Round::Down);
        let hi = one.div(&three, 40, Round::Up);
        let third = Rat::new(1.into(), 3.into());
        assert!(lo.to_rat() < third && third < hi.to_rat());
        assert!(hi.sub(&lo) <= Dyadic::pow2(-40));
    }

    #[test]
    fn directed_sqrt_brackets_root_two() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Round::Down);
        let hi = two.sqrt(64, Round::Up);
        assert!(lo.mul(&lo) < two && two < hi.mul(&hi));
        assert_eq!(Dyadic::from_int(16).sqrt(10, Round::Down), Dyadic::from_int(4));
    }

    #[test]
    fn rounding_respects_direction_for_negatives() {
        let x = d(-0b10111, 0);
        assert_eq!(x.round(2, Round::Down), d(-24, 0));
        assert_eq!(x.round(2, Round::Up), d(-16, 0));
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.1, -2.5, 1e-300, 3.0e10] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
    }
}
