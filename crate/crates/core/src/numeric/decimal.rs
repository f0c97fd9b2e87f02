//! Decimal rendering that prints only certified digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::complex::CInterval;
use super::dyadic::Dyadic;
use super::interval::RInterval;
use super::Rat;

fn scaled_trunc(r: &Rat, digits: usize) -> BigInt {
    // truncation toward zero of r * 10^digits
    let scaled = r * Rat::from_integer(BigInt::from(10).pow(digits as u32));
    scaled.numer().div_floor(scaled.denom()) + if scaled.is_negative() && !scaled.is_integer() { 1 } else { 0 }
}

fn render(v: &BigInt, digits: usize, negative: bool) -> String {
    let s = v.abs().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Decimal expansion of an exact rational truncated to `max_digits`
/// fractional digits; `…` marks truncation.
pub fn rational_digits(r: &Rat, max_digits: usize) -> String {
    let t = scaled_trunc(r, max_digits);
    let exact = Rat::from_integer(t.clone()) / Rat::from_integer(BigInt::from(10).pow(max_digits as u32)) == *r;
    let text = render(&t, max_digits, r.is_negative());
    if exact {
        trim_zeros(text)
    } else {
        format!("{text}…")
    }
}

/// The longest prefix (up to `max_digits` fractional digits) of the decimal
/// expansion shared by every point of `iv`. A trailing `…` marks truncation;
/// an exact value prints without it. Returns `None` when not even the sign
/// and integer part are certified.
pub fn certified_digits(iv: &RInterval, max_digits: usize) -> Option<String> {
    let lo = iv.lo().to_rat();
    let hi = iv.hi().to_rat();
    if iv.is_point() {
        return Some(rational_digits(&lo, max_digits));
    }
    // both ends must agree on sign (zero may sit on either side only when the
    // other end rounds to zero as well)
    if lo.is_negative() && hi.is_positive() {
        let l = scaled_trunc(&lo, 0);
        let h = scaled_trunc(&hi, 0);
        if !(l.is_zero() && h.is_zero()) {
            return None;
        }
        // sign uncertain: print only leading zeros that are certified
        let mut best = 0;
        for d in 1..=max_digits {
            if scaled_trunc(&lo, d).is_zero() && scaled_trunc(&hi, d).is_zero() {
                best = d;
            } else {
                break;
            }
        }
        return Some(format!("±{}…", render(&BigInt::zero(), best, false)));
    }
    let mut best: Option<(usize, BigInt)> = None;
    for d in 0..=max_digits {
        let l = scaled_trunc(&lo, d);
        let h = scaled_trunc(&hi, d);
        if l == h {
            best = Some((d, l));
        } else {
            break;
        }
    }
    let (d, v) = best?;
    let negative = hi.is_negative() || (lo.is_negative() && !hi.is_positive());
    Some(format!("{}…", render(&v, d, negative)))
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Certified rendering of a complex enclosure as `a + bi`.
pub fn certified_complex(z: &CInterval, max_digits: usize) -> String {
    let re = certified_digits(&z.re, max_digits).unwrap_or_else(|| "?".into());
    if z.im == RInterval::zero() {
        return re;
    }
    let im = certified_digits(&z.im, max_digits).unwrap_or_else(|| "?".into());
    match im.strip_prefix('-') {
        Some(rest) => format!("{re} - {rest}i"),
        None => format!("{re} + {im}i"),
    }
}

/// Exact rational text for a dyadic endpoint.
pub fn exact_text(d: &Dyadic) -> String {
    d.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> RInterval {
        RInterval::new(Dyadic::from_f64(lo).unwrap(), Dyadic::from_f64(hi).unwrap())
    }

    #[test]
    fn prints_only_shared_digits() {
        assert_eq!(certified_digits(&iv(0.12345, 0.12349), 10).unwrap(), "0.1234…");
        assert_eq!(certified_digits(&iv(-1.52, -1.51), 10).unwrap(), "-1.5…");
        assert_eq!(certified_digits(&iv(0.1999, 0.2001), 10).unwrap(), "0…");
    }

    #[test]
    fn exact_points_have_no_ellipsis() {
        assert_eq!(certified_digits(&RInterval::from_int(4), 5).unwrap(), "4");
        assert_eq!(certified_digits(&iv(0.5, 0.5), 5).unwrap(), "0.5");
    }

    #[test]
    fn sign_uncertain_zero() {
        assert_eq!(certified_digits(&iv(-1e-6, 1e-6), 4).unwrap(), "±0.0000…");
    }
}
