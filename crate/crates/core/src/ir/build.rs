//! Node construction with validation and light simplification.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{rat, rat_int, CInterval, Dyadic, Rat};
use crate::poly::factor;

use super::{root, ConstKind, Expr, FieldOp, IrError, Node, Session};

/// Largest integer exponent folded exactly for rational powers.
const MAX_FOLDED_POWER: u32 = 64;

fn is_zero(e: &Expr) -> bool {
    e.as_rat().is_some_and(|r| r.is_zero())
}

fn is_one(e: &Expr) -> bool {
    e.as_rat().is_some_and(|r| r.is_one())
}

/// Split `n > 0` as `s^2 · t` with `t` squarefree (when factoring is cheap).
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    if n.bits() > 160 {
        let r = n.sqrt();
        return if &r * &r == *n { (r, BigInt::one()) } else { (BigInt::one(), n.clone()) };
    }
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    for (p, k) in factor(n) {
        s *= p.pow(k / 2);
        if k % 2 == 1 {
            t *= p;
        }
    }
    (s, t)
}

impl Session {
    /// Build a node, validating it and applying local simplifications.
    pub fn mk(&self, node: Node) -> Result<Expr, IrError> {
        match node {
            Node::Rat(r) => Ok(self.rat(r)),
            Node::Field(op, a, b) => self.field(op, &a, &b),
            Node::Sqrt(a) => self.sqrt(&a),
            Node::PolyRoot { coeffs, selector } => self.poly_root(coeffs, selector),
            Node::Exp { base, exponent } => self.pow(&base, &exponent),
            Node::Log { base, arg, branch } => self.log(&base, &arg, branch),
            Node::SinPi(x) => self.sin_pi(&x),
            Node::ArcsinPi(x) => self.arcsin_over_pi(&x),
            Node::Const(k) => Ok(self.constant(k)),
        }
    }

    pub fn rat(&self, r: Rat) -> Expr {
        self.intern(Node::Rat(r), None, true)
    }

    pub fn int(&self, n: i64) -> Expr {
        self.rat(rat_int(n))
    }

    pub fn frac(&self, n: i64, d: i64) -> Expr {
        self.rat(rat(n, d))
    }

    pub fn constant(&self, k: ConstKind) -> Expr {
        self.intern(Node::Const(k), None, true)
    }

    pub fn pi(&self) -> Expr {
        self.constant(ConstKind::Pi)
    }

    pub fn e(&self) -> Expr {
        self.constant(ConstKind::E)
    }

    /// The imaginary unit, as the principal square root of -1.
    pub fn i(&self) -> Expr {
        self.sqrt(&self.int(-1)).expect("sqrt(-1) is defined")
    }

    pub fn add(&self, a: &Expr, b: &Expr) -> Result<Expr, IrError> {
        self.field(FieldOp::Add, a, b)
    }

    pub fn sub(&self, a: &Expr, b: &Expr) -> Result<Expr, IrError> {
        self.field(FieldOp::Sub, a, b)
    }

    pub fn mul(&self, a: &Expr, b: &Expr) -> Result<Expr, IrError> {
        self.field(FieldOp::Mul, a, b)
    }

    pub fn div(&self, a: &Expr, b: &Expr) -> Result<Expr, IrError> {
        self.field(FieldOp::Div, a, b)
    }

    pub fn neg(&self, a: &Expr) -> Expr {
        self.mul(&self.int(-1), a).expect("negation cannot fail")
    }

    /// `r · a` for a rational `r`.
    pub fn scale(&self, r: Rat, a: &Expr) -> Expr {
        self.mul(&self.rat(r), a).expect("scaling cannot fail")
    }

    fn field(&self, op: FieldOp, a: &Expr, b: &Expr) -> Result<Expr, IrError> {
        if let (Some(x), Some(y)) = (a.as_rat(), b.as_rat()) {
            return Ok(self.rat(match op {
                FieldOp::Add => x + y,
                FieldOp::Sub => x - y,
                FieldOp::Mul => x * y,
                FieldOp::Div => {
                    if y.is_zero() {
                        return Err(IrError::DivisionByZero);
                    }
                    x / y
                }
            }));
        }
        match op {
            FieldOp::Add => {
                if is_zero(a) {
                    return Ok(b.clone());
                }
                if is_zero(b) {
                    return Ok(a.clone());
                }
            }
            FieldOp::Sub => {
                if is_zero(b) {
                    return Ok(a.clone());
                }
                if a == b {
                    return Ok(self.int(0));
                }
                if is_zero(a) {
                    return Ok(self.neg(b));
                }
            }
            FieldOp::Mul => {
                if is_zero(a) || is_zero(b) {
                    return Ok(self.int(0));
                }
                if is_one(a) {
                    return Ok(b.clone());
                }
                if is_one(b) {
                    return Ok(a.clone());
                }
                if b.is_rat() {
                    return self.mul(b, a);
                }
                if let (Node::Sqrt(x), true) = (a.node(), a == b) {
                    return Ok(x.clone());
                }
                if let (Some(r), Node::Field(FieldOp::Mul, c, x)) = (a.as_rat(), b.node()) {
                    if let Some(s) = c.as_rat() {
                        return self.mul(&self.rat(r * s), x);
                    }
                }
            }
            FieldOp::Div => {
                if let Some(y) = b.as_rat() {
                    if y.is_zero() {
                        return Err(IrError::DivisionByZero);
                    }
                    return self.mul(&self.rat(y.recip()), a);
                }
                if is_zero(a) {
                    return Ok(self.int(0));
                }
                if a == b && a.provably_nonzero(self.refiner()) {
                    return Ok(self.int(1));
                }
                if let (Some(c), Node::Sqrt(n)) = (a.as_rat(), b.node()) {
                    if let Some(n) = n.as_rat() {
                        // c / √n = (c/n)·√n
                        return self.mul(&self.rat(c / n), b);
                    }
                }
            }
        }
        let real = a.is_real() && b.is_real();
        Ok(self.intern(Node::Field(op, a.clone(), b.clone()), None, real))
    }

    /// Principal square root.
    pub fn sqrt(&self, a: &Expr) -> Result<Expr, IrError> {
        if let Some(r) = a.as_rat() {
            if r.is_zero() {
                return Ok(self.int(0));
            }
            // √(p/q) = √(p·q)/q = (s/q)·√t
            let m = (r.numer() * r.denom()).abs();
            let (s, t) = square_split(&m);
            let coeff = Rat::new(s, r.denom().clone());
            let t = if r.is_negative() { -t } else { t };
            if t.is_one() {
                return Ok(self.rat(coeff));
            }
            let root = self.intern(Node::Sqrt(self.rat(Rat::from_integer(t.clone()))), None, t.is_positive());
            return self.mul(&self.rat(coeff), &root);
        }
        let real = a.is_real() && a.sign(self.refiner()).is_some_and(|s| s != Ordering::Less);
        Ok(self.intern(Node::Sqrt(a.clone()), None, real))
    }

    /// The unique root of `Σ coeffs[i] x^i` inside `selector`.
    pub fn poly_root(&self, coeffs: Vec<Expr>, selector: CInterval) -> Result<Expr, IrError> {
        let node = Node::PolyRoot { coeffs, selector };
        if let Some(e) = self.lookup(&node) {
            return Ok(e);
        }
        let Node::PolyRoot { coeffs, selector } = &node else { unreachable!() };
        let (isolated, real) = root::isolate(coeffs, selector)?;
        Ok(self.intern(node, Some(isolated), real))
    }

    fn check_base(&self, base: &Expr) -> Result<(), IrError> {
        if is_zero(base) || is_one(base) {
            return Err(IrError::InvalidBase);
        }
        Ok(())
    }

    /// Principal power `base^z`.
    pub fn pow(&self, base: &Expr, z: &Expr) -> Result<Expr, IrError> {
        self.check_base(base)?;
        if is_zero(z) {
            return Ok(self.int(1));
        }
        if is_one(z) {
            return Ok(base.clone());
        }
        if let Node::Log { base: b2, arg, .. } = z.node() {
            if b2 == base {
                return Ok(arg.clone());
            }
        }
        if let (Some(b), Some(n)) = (base.as_rat(), z.as_rat()) {
            if n.is_integer() {
                if let Some(k) = n.to_integer().abs().to_u32().filter(|k| *k <= MAX_FOLDED_POWER) {
                    let p = num_traits::pow(b.clone(), k as usize);
                    return Ok(self.rat(if n.is_negative() { p.recip() } else { p }));
                }
            }
            if b == &rat_int(-1) && n.denom() == &BigInt::from(2) {
                // (-1)^{k/2} = ±i
                let k = n.numer().mod_floor(&BigInt::from(4));
                let i = self.i();
                return Ok(if k == BigInt::from(1) { i } else { self.neg(&i) });
            }
        }
        let real = z.is_real()
            && (matches!(base.node(), Node::Const(ConstKind::E))
                || (base.is_real() && base.sign(self.refiner()) == Some(Ordering::Greater)));
        Ok(self.intern(Node::Exp { base: base.clone(), exponent: z.clone() }, None, real))
    }

    /// `exp(z)` with base e.
    pub fn exp(&self, z: &Expr) -> Result<Expr, IrError> {
        self.pow(&self.e(), z)
    }

    /// `log_base(w)` on branch `k`.
    pub fn log(&self, base: &Expr, w: &Expr, branch: i64) -> Result<Expr, IrError> {
        self.check_base(base)?;
        if is_zero(w) {
            return Err(IrError::LogOfZero);
        }
        if branch == 0 && is_one(w) {
            return Ok(self.int(0));
        }
        if branch == 0 && base == w {
            return Ok(self.int(1));
        }
        if base == w && base.as_rat().is_some_and(|r| r == &rat_int(-1)) {
            return Ok(self.int(1 + 2 * branch));
        }
        let positive = |e: &Expr| {
            matches!(e.node(), Node::Const(ConstKind::E))
                || (e.is_real() && e.sign(self.refiner()) == Some(Ordering::Greater))
        };
        let real = branch == 0 && positive(base) && positive(w);
        Ok(self.intern(Node::Log { base: base.clone(), arg: w.clone(), branch }, None, real))
    }

    /// Natural logarithm on branch `k`.
    pub fn ln(&self, w: &Expr, branch: i64) -> Result<Expr, IrError> {
        self.log(&self.e(), w, branch)
    }

    fn require_real(&self, x: &Expr) -> Result<(), IrError> {
        if x.is_real() {
            return Ok(());
        }
        // fall back to the enclosure: an exactly-zero imaginary part
        match x.enclose(64) {
            Ok(v) if v.is_real() => Ok(()),
            _ => Err(IrError::NonRealArgument),
        }
    }

    /// `sin(πx)` for real `x`, folded to radicals at multiples of π/12 and π/4.
    pub fn sin_pi(&self, x: &Expr) -> Result<Expr, IrError> {
        self.require_real(x)?;
        if let Node::ArcsinPi(y) = x.node() {
            return Ok(y.clone());
        }
        let Some(r) = x.as_rat() else {
            return Ok(self.intern(Node::SinPi(x.clone()), None, true));
        };
        // reduce to sign · sin(π r) with r ∈ [0, 1/2]
        let two = rat_int(2);
        let mut r = r - (r / &two).floor() * &two;
        let mut sign = 1;
        if r >= rat_int(1) {
            r -= rat_int(1);
            sign = -1;
        }
        if r > rat(1, 2) {
            r = rat_int(1) - r;
        }
        let v = if r.is_zero() {
            Some(self.int(0))
        } else if r == rat(1, 2) {
            Some(self.int(1))
        } else if r == rat(1, 6) {
            Some(self.frac(1, 2))
        } else if r == rat(1, 4) {
            Some(self.scale(rat(1, 2), &self.sqrt(&self.int(2))?))
        } else if r == rat(1, 3) {
            Some(self.scale(rat(1, 2), &self.sqrt(&self.int(3))?))
        } else {
            None
        };
        let v = match v {
            Some(v) => v,
            None => self.intern(Node::SinPi(self.rat(r)), None, true),
        };
        Ok(if sign < 0 { self.neg(&v) } else { v })
    }

    /// `cos(πx) = sin(π(x + 1/2))`.
    pub fn cos_pi(&self, x: &Expr) -> Result<Expr, IrError> {
        self.sin_pi(&self.add(x, &self.frac(1, 2))?)
    }

    /// `arcsin(x)/π` for real `x ∈ [-1, 1]`.
    pub fn arcsin_over_pi(&self, x: &Expr) -> Result<Expr, IrError> {
        self.require_real(x)?;
        if let Some(r) = x.as_rat() {
            if r.abs() > rat_int(1) {
                return Err(IrError::OutOfDomain(format!("arcsin argument {r} outside [-1, 1]")));
            }
            let a = r.abs();
            let v = if a.is_zero() {
                Some(rat_int(0))
            } else if a == rat(1, 2) {
                Some(rat(1, 6))
            } else if a.is_one() {
                Some(rat(1, 2))
            } else {
                None
            };
            if let Some(v) = v {
                return Ok(self.rat(if r.is_negative() { -v } else { v }));
            }
        }
        if let Node::Field(FieldOp::Mul, c, y) = x.node() {
            if let Some(c) = c.as_rat() {
                if c == &rat_int(-1) {
                    return Ok(self.neg(&self.arcsin_over_pi(y)?));
                }
                // ±√2/2 and ±√3/2
                if c.abs() == rat(1, 2) {
                    if let Some(t) = sqrt_of_rat(y) {
                        let v = if t == rat_int(2) {
                            Some(rat(1, 4))
                        } else if t == rat_int(3) {
                            Some(rat(1, 3))
                        } else {
                            None
                        };
                        if let Some(v) = v {
                            return Ok(self.rat(if c.is_negative() { -v } else { v }));
                        }
                    }
                }
            }
        }
        if let Node::SinPi(t) = x.node() {
            if let Some(v) = t.enclose(64).ok().filter(|v| {
                let half = Dyadic::pow2(-1);
                v.re.lo() > &half.neg() && v.re.hi() < &half
            }) {
                let _ = v;
                return Ok(t.clone());
            }
        }
        if !x.is_rat() {
            self.check_unit_range(x)?;
        }
        Ok(self.intern(Node::ArcsinPi(x.clone()), None, true))
    }

    fn check_unit_range(&self, x: &Expr) -> Result<(), IrError> {
        let one = Dyadic::one();
        let mut last = None;
        for prec in self.refiner().schedule() {
            match x.enclose(prec) {
                Ok(v) => {
                    if v.re.lo() > &one || v.re.hi() < &one.neg() {
                        return Err(IrError::OutOfDomain("arcsin argument outside [-1, 1]".into()));
                    }
                    if v.re.lo() >= &one.neg() && v.re.hi() <= &one {
                        return Ok(());
                    }
                    last = None;
                }
                Err(e) => last = Some(e),
            }
        }
        Err(match last {
            Some(e) => IrError::Numeric(e),
            None => IrError::OutOfDomain("arcsin argument enclosure straddles ±1 at the precision ceiling".into()),
        })
    }
}

fn sqrt_of_rat(e: &Expr) -> Option<Rat> {
    match e.node() {
        Node::Sqrt(t) => t.as_rat().cloned(),
        _ => None,
    }
}
