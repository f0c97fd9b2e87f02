use crate::numeric::{elementary, CInterval, Dyadic, NumError, RInterval, Refiner};

use super::{root, ConstKind, Expr, FieldOp, Node};

impl Expr {
    /// Enclosure of the value at `prec` bits of working precision.
    pub fn enclose(&self, prec: u32) -> Result<CInterval, NumError> {
        if let Some((p, v)) = self.0.cache.lock().unwrap().as_ref() {
            if *p >= prec {
                return Ok(v.clone());
            }
        }
        let mut v = self.compute(prec)?;
        if self.0.real {
            v = CInterval::real(v.re);
        }
        *self.0.cache.lock().unwrap() = Some((prec, v.clone()));
        Ok(v)
    }

    /// Enclosure of width at most `target`, refining as needed.
    pub fn eval(&self, target: &Dyadic, refiner: &Refiner) -> Result<CInterval, NumError> {
        refiner.run(|p| self.enclose(p), target)
    }

    /// Sign of a real value, decided by refinement; `None` when not decided
    /// below the ceiling (possibly an exact zero).
    pub fn sign(&self, refiner: &Refiner) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if let Some(r) = self.as_rat() {
            return Some(r.cmp(&crate::numeric::rat_int(0)));
        }
        for prec in refiner.schedule() {
            if let Ok(v) = self.enclose(prec) {
                if v.re.is_positive() {
                    return Some(Greater);
                }
                if v.re.is_negative() {
                    return Some(Less);
                }
            }
        }
        None
    }

    /// True when some enclosure excludes 0.
    pub fn provably_nonzero(&self, refiner: &Refiner) -> bool {
        if let Some(r) = self.as_rat() {
            return r != &crate::numeric::rat_int(0);
        }
        refiner.schedule().any(|p| self.enclose(p).is_ok_and(|v| !v.contains_zero()))
    }

    fn compute(&self, prec: u32) -> Result<CInterval, NumError> {
        let wp = prec + 8;
        Ok(match self.node() {
            Node::Rat(r) => CInterval::from_rat(r, wp),
            Node::Field(op, a, b) => {
                let (x, y) = (a.enclose(prec)?, b.enclose(prec)?);
                match op {
                    FieldOp::Add => x.add(&y, wp),
                    FieldOp::Sub => x.sub(&y, wp),
                    FieldOp::Mul => x.mul(&y, wp),
                    FieldOp::Div => x.div(&y, wp)?,
                }
            }
            Node::Sqrt(a) => {
                let x = a.enclose(prec)?;
                if a.is_real() {
                    // principal branch on the real axis: i·sqrt(-x) for negative x
                    let x = CInterval::real(x.re);
                    x.sqrt(wp)?
                } else {
                    x.sqrt(wp)?
                }
            }
            Node::PolyRoot { coeffs, .. } => {
                let isolated = self.0.aux.as_ref().expect("PolyRoot nodes carry an isolating box");
                root::refine(coeffs, isolated, self.0.real, prec)?
            }
            Node::Exp { base, exponent } => {
                let z = exponent.enclose(prec)?;
                exp_base(base, &z, prec)?
            }
            Node::Log { base, arg, branch } => {
                let w = arg.enclose(prec)?;
                let num = w.log(*branch, wp)?;
                match log_of_base(base, wp)? {
                    LogBase::One => num,
                    LogBase::IPi(pi) => {
                        // (u + iv) / (iπ) = v/π - i·u/π
                        CInterval::new(num.im.div(&pi, wp)?, num.re.div(&pi, wp)?.neg())
                    }
                    LogBase::General(l) => num.div(&l, wp)?,
                }
            }
            Node::SinPi(x) => {
                let v = x.enclose(prec)?;
                CInterval::real(elementary::sin_pi(&v.re, wp))
            }
            Node::ArcsinPi(x) => {
                let v = x.enclose(prec)?;
                CInterval::real(elementary::asin_over_pi(&v.re, wp)?)
            }
            Node::Const(ConstKind::Pi) => CInterval::real(elementary::pi(wp)),
            Node::Const(ConstKind::E) => CInterval::real(elementary::exp(&RInterval::one(), wp)),
        })
    }
}

enum LogBase {
    One,
    IPi(RInterval),
    General(CInterval),
}

fn is_minus_one(e: &Expr) -> bool {
    e.as_rat().is_some_and(|r| r == &crate::numeric::rat_int(-1))
}

fn log_of_base(base: &Expr, prec: u32) -> Result<LogBase, NumError> {
    if matches!(base.node(), Node::Const(ConstKind::E)) {
        return Ok(LogBase::One);
    }
    if is_minus_one(base) {
        return Ok(LogBase::IPi(elementary::pi(prec)));
    }
    Ok(LogBase::General(base.enclose(prec)?.log(0, prec)?))
}

/// Principal `base^z`.
fn exp_base(base: &Expr, z: &CInterval, prec: u32) -> Result<CInterval, NumError> {
    let wp = prec + 16;
    if matches!(base.node(), Node::Const(ConstKind::E)) {
        return Ok(z.exp(wp));
    }
    if is_minus_one(base) {
        // exp(iπz) = e^{-π Im z} (cos π Re z + i sin π Re z)
        let (s, c) = elementary::sin_cos_pi(&z.re, wp);
        if z.im == RInterval::zero() {
            return Ok(CInterval::new(c, s));
        }
        let m = elementary::exp(&elementary::pi(wp).mul(&z.im, wp).neg(), wp);
        return Ok(CInterval::new(m.mul(&c, wp), m.mul(&s, wp)));
    }
    let b = base.enclose(prec)?;
    if z.is_real() && b.is_real() && b.re.is_positive() {
        let l = elementary::ln(&b.re, wp)?;
        return Ok(CInterval::real(elementary::exp(&l.mul(&z.re, wp), wp)));
    }
    b.pow(z, wp)
}

