//! Exact rationals, dyadic intervals and certified complex enclosures.

pub mod complex;
pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod interval;
pub mod refine;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use complex::CInterval;
pub use dyadic::{Dyadic, Round};
pub use interval::RInterval;
pub use refine::{refine, Refiner};

/// Exact rational number in canonical form (positive denominator, reduced).
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("enclosure straddles a singular point: {0}")]
    DomainStraddle(String),
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("precision ceiling of {ceiling} bits reached (last width 2^{last_width_log2}); the value may be exactly zero or ill-conditioned")]
    MaxPrecision { ceiling: u32, last_width_log2: i64 },
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact rational arithmetic.
pub fn rat_arith(op: RatOp, a: &Rat, b: &Rat) -> Result<Rat, NumError> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => {
            if b.is_zero() {
                return Err(NumError::DivisionByZero);
            }
            a / b
        }
    })
}

/// Operations accepted by [`iv_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    /// `exp(z)` (base e).
    Exp,
    /// Logarithm on the given branch; `0` is principal.
    Log(i64),
    SinPi,
    ArcsinOverPi,
    /// Principal `z^w`.
    Pow,
}

fn arity(op: IvOp) -> usize {
    match op {
        IvOp::Add | IvOp::Sub | IvOp::Mul | IvOp::Div | IvOp::Pow => 2,
        _ => 1,
    }
}

/// Evaluate one enclosure operation at `prec` bits of working precision.
pub fn iv_eval(op: IvOp, args: &[CInterval], prec: u32) -> Result<CInterval, NumError> {
    assert_eq!(args.len(), arity(op), "wrong number of arguments for {op:?}");
    let a = &args[0];
    Ok(match op {
        IvOp::Add => a.add(&args[1], prec),
        IvOp::Sub => a.sub(&args[1], prec),
        IvOp::Mul => a.mul(&args[1], prec),
        IvOp::Div => a.div(&args[1], prec)?,
        IvOp::Sqrt => a.sqrt(prec)?,
        IvOp::Exp => a.exp(prec),
        IvOp::Log(k) => a.log(k, prec)?,
        IvOp::Pow => a.pow(&args[1], prec)?,
        IvOp::SinPi => {
            if !a.is_real() {
                return Err(NumError::OutOfDomain("sin_pi of a non-real argument".into()));
            }
            CInterval::real(elementary::sin_pi(&a.re, prec))
        }
        IvOp::ArcsinOverPi => {
            if !a.is_real() {
                return Err(NumError::OutOfDomain("arcsin_over_pi of a non-real argument".into()));
            }
            CInterval::real(elementary::asin_over_pi(&a.re, prec)?)
        }
    })
}

/// Enclosure arithmetic refined until the result is no wider than `target`.
///
/// The inputs are treated as exact point-like data; working precision grows
/// until the width target is met or the ceiling is reached.
pub fn iv_arith(op: IvOp, args: &[CInterval], target: &Dyadic) -> Result<CInterval, NumError> {
    Refiner::from_env().run(|prec| iv_eval(op, args, prec), target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_examples() {
        assert_eq!(rat_arith(RatOp::Add, &rat(1, 2), &rat(1, 3)).unwrap(), rat(5, 6));
        assert_eq!(rat_arith(RatOp::Mul, &rat(2, 5), &rat(5, 2)).unwrap(), rat(1, 1));
        assert_eq!(rat_arith(RatOp::Div, &rat(1, 2), &rat(0, 1)), Err(NumError::DivisionByZero));
    }

    #[test]
    fn div_by_straddling_enclosure() {
        let den = CInterval::real(RInterval::new(Dyadic::from_int(-1), Dyadic::from_int(1)));
        let r = iv_eval(IvOp::Div, &[CInterval::one(), den], 64);
        assert!(matches!(r, Err(NumError::DomainStraddle(_))));
    }

    #[test]
    fn exp_of_i_pi() {
        let ipi = CInterval::new(RInterval::zero(), elementary::pi(200));
        let e = iv_arith(IvOp::Exp, &[ipi], &Dyadic::pow2(-40)).unwrap();
        assert!(e.contains_rat(&rat_int(-1)));
    }
}
