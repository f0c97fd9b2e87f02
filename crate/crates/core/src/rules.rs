//! Annihilating polynomials for `sin(πr)`, the rational-sine classifier and
//! the transcendence rule base.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::ir::{ConstKind, Expr, FieldOp, Node, Session};
use crate::numeric::{elementary, CInterval, RInterval, Rat};
use crate::poly::{eliminate, factor, rational_root_scan, IntPoly};

/// Degree cap for witnesses produced by closure operations.
pub const WITNESS_DEGREE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Rational,
    Algebraic,
    Transcendental,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Rational => "rational",
            Status::Algebraic => "algebraic",
            Status::Transcendental => "transcendental",
            Status::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Polynomial(IntPoly),
    /// Index of a ladder section in the enclosing certificate.
    Ladder(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: String,
    /// True iff the verdict assumes the Schanuel conjecture.
    pub conditional: bool,
    pub witness: Option<Witness>,
    /// Exact value when `status` is rational.
    #[serde(with = "opt_rat")]
    pub value: Option<Rat>,
}

mod opt_rat {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::numeric::Rat;

    pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&crate::ir::rat_text(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|t| t.parse::<Rat>().map_err(serde::de::Error::custom)).transpose()
    }
}

impl Verdict {
    pub fn unknown(rule: &str) -> Self {
        Verdict { status: Status::Unknown, rule: rule.into(), conditional: false, witness: None, value: None }
    }

    pub fn transcendental(rule: &str) -> Self {
        Verdict { status: Status::Transcendental, rule: rule.into(), conditional: false, witness: None, value: None }
    }

    pub fn algebraic(rule: &str, witness: IntPoly) -> Self {
        Verdict {
            status: Status::Algebraic,
            rule: rule.into(),
            conditional: false,
            witness: Some(Witness::Polynomial(witness)),
            value: None,
        }
    }

    pub fn rational(rule: &str, value: Rat) -> Self {
        let w = linear_witness(&value);
        Verdict {
            status: Status::Rational,
            rule: rule.into(),
            conditional: false,
            witness: Some(Witness::Polynomial(w)),
            value: Some(value),
        }
    }

    pub fn polynomial(&self) -> Option<&IntPoly> {
        match &self.witness {
            Some(Witness::Polynomial(p)) => Some(p),
            _ => None,
        }
    }

    /// Rational or algebraic, with a polynomial witness.
    pub fn is_algebraic(&self) -> bool {
        matches!(self.status, Status::Rational | Status::Algebraic) && self.polynomial().is_some()
    }
}

/// `q·x - p` for `r = p/q`.
pub fn linear_witness(r: &Rat) -> IntPoly {
    IntPoly::new(vec![-r.numer().clone(), r.denom().clone()])
}

// ---------------------------------------------------------------------------
// sin(πr)

/// `P + y·Q` with `y = cos θ`, reduced modulo `y² = 1 - x²`.
#[derive(Clone)]
struct TrigPair {
    p: IntPoly,
    q: IntPoly,
}

impl TrigPair {
    fn times_y(&self) -> TrigPair {
        TrigPair { p: self.q.mul(&IntPoly::from_i64(&[1, 0, -1])), q: self.p.clone() }
    }

    fn times_x(&self) -> TrigPair {
        TrigPair { p: self.p.mul(&IntPoly::x()), q: self.q.mul(&IntPoly::x()) }
    }

    fn add(&self, o: &TrigPair) -> TrigPair {
        TrigPair { p: self.p.add(&o.p), q: self.q.add(&o.q) }
    }

    fn sub(&self, o: &TrigPair) -> TrigPair {
        TrigPair { p: self.p.sub(&o.p), q: self.q.sub(&o.q) }
    }
}

/// `sin(nθ) = A(x) + y·B(x)` with `x = sin θ`, `y = cos θ`.
pub fn multiple_angle_sine(n: u32) -> (IntPoly, IntPoly) {
    let mut s = TrigPair { p: IntPoly::zero(), q: IntPoly::zero() };
    let mut c = TrigPair { p: IntPoly::constant(BigInt::one()), q: IntPoly::zero() };
    for _ in 0..n {
        let s_next = s.times_y().add(&c.times_x());
        let c_next = c.times_y().sub(&s.times_x());
        s = s_next;
        c = c_next;
    }
    (s.p, s.q)
}

/// Integer polynomial vanishing at `sin(πr)`, squarefree and primitive.
pub fn annihilator_sin_pi(r: &Rat) -> IntPoly {
    let q = r.denom().to_u32().expect("denominator fits in u32");
    let (a, b) = multiple_angle_sine(q);
    let raw = if b.is_zero() { a } else { a.mul(&a).sub(&IntPoly::from_i64(&[1, 0, -1]).mul(&b).mul(&b)) };
    let p = raw.squarefree();
    debug_assert!(annihilator_encloses_zero(&p, r, 40));
    p
}

/// `P(sin(πr))` evaluated in interval arithmetic contains 0, with `sin(πr)`
/// enclosed to width below `2^-bits`.
pub fn annihilator_encloses_zero(p: &IntPoly, r: &Rat, bits: u32) -> bool {
    let prec = bits + 64 + 8 * p.degree().unwrap_or(0) as u32;
    let s = elementary::sin_pi(&RInterval::from_rat(r, prec), prec);
    p.eval_interval(&CInterval::real(s), prec).contains_zero()
}

/// Decide whether the value enclosed by `enclose` equals a rational root of the
/// squarefree polynomial `w`, which must vanish at that value.
///
/// For a rational root `ρ`, the value equals `ρ` when the cofactor `w / (x - ρ)`
/// excludes 0 on an enclosure, and differs from it when the enclosure excludes `ρ`.
pub fn identify_rational(
    w: &IntPoly,
    mut enclose: impl FnMut(u32) -> Option<CInterval>,
    schedule: &[u32],
) -> Option<Rat> {
    let roots = rational_root_scan(w).ok()?;
    for rho in roots {
        let cof = cofactor(w, &rho);
        for &prec in schedule {
            let Some(v) = enclose(prec) else { continue };
            if !v.contains_rat(&rho) {
                break;
            }
            if !cof.eval_interval(&v, prec + 16).contains_zero() {
                return Some(rho);
            }
        }
    }
    None
}

/// `w / (q·x - p)` for a root `p/q` of `w`.
fn cofactor(w: &IntPoly, rho: &Rat) -> IntPoly {
    let q = crate::poly::QPoly::from_int(w).div_exact(&crate::poly::QPoly::from_int(&linear_witness(rho)));
    q.to_primitive_int()
}

/// Rational exactly when `sin(πr)` is; otherwise algebraic with the annihilator.
pub fn olmsted_classify(r: &Rat) -> Verdict {
    let p = annihilator_sin_pi(r);
    let enclose = |prec: u32| Some(CInterval::real(elementary::sin_pi(&RInterval::from_rat(r, prec), prec)));
    let schedule: Vec<u32> = (0..7).map(|k| 64u32 << k).collect();
    match identify_rational(&p, enclose, &schedule) {
        Some(v) => {
            let mut verdict = Verdict::rational("niven-olmsted", v);
            verdict.witness = Some(Witness::Polynomial(p));
            verdict
        }
        None => Verdict::algebraic("niven-olmsted", p),
    }
}

// ---------------------------------------------------------------------------
// closure witnesses

fn too_big(d: usize) -> bool {
    d > WITNESS_DEGREE_CAP
}

/// Vanishes at `α + β` given witnesses for `α` and `β`.
pub fn witness_sum(p: &IntPoly, q: &IntPoly) -> Option<IntPoly> {
    let d = p.degree()? * q.degree()?;
    if too_big(d) {
        return None;
    }
    let out = eliminate(p, |x0| q.compose(&IntPoly::new(vec![x0.clone(), BigInt::from(-1)])), d);
    (!out.is_zero()).then(|| out.squarefree())
}

/// Vanishes at `α·β` given witnesses for `α` and `β ≠ 0`.
pub fn witness_product(p: &IntPoly, q: &IntPoly) -> Option<IntPoly> {
    let q = q.strip_zero_roots();
    let n = q.degree()?;
    let d = p.degree()? * n;
    if too_big(d) {
        return None;
    }
    // y^n Q(x/y) = Σ q_i x^i y^{n-i}
    let f = |x0: &BigInt| {
        let mut c = vec![BigInt::zero(); n + 1];
        for (i, qi) in q.coeffs().iter().enumerate() {
            c[n - i] = qi * x0.pow(i as u32);
        }
        IntPoly::new(c)
    };
    let out = eliminate(p, f, d);
    (!out.is_zero()).then(|| out.squarefree())
}

/// Vanishes at `α^(num/den)` (any branch) given a witness for `α ≠ 0`.
pub fn witness_power(p: &IntPoly, e: &Rat) -> Option<IntPoly> {
    let base = if e.is_negative() { p.strip_zero_roots().reciprocal() } else { p.clone() };
    let num = e.numer().abs().to_usize()?;
    let den = e.denom().to_usize()?;
    let d = base.degree()? * den;
    if too_big(d) || num > WITNESS_DEGREE_CAP {
        return None;
    }
    // x^den - t^num as a polynomial in t
    let f = |x0: &BigInt| {
        let mut c = vec![BigInt::zero(); num + 1];
        c[0] = x0.pow(den as u32);
        c[num] -= BigInt::one();
        IntPoly::new(c)
    };
    let out = eliminate(&base, f, d);
    (!out.is_zero()).then(|| out.squarefree())
}

// ---------------------------------------------------------------------------
// rule base

/// Memoizing classifier over one session.
pub struct Classifier<'s> {
    session: &'s Session,
    memo: HashMap<Expr, Verdict>,
}

impl<'s> Classifier<'s> {
    pub fn new(session: &'s Session) -> Self {
        Classifier { session, memo: HashMap::new() }
    }

    pub fn classify(&mut self, e: &Expr) -> Verdict {
        if let Some(v) = self.memo.get(e) {
            return v.clone();
        }
        for c in e.postorder() {
            if !self.memo.contains_key(&c) {
                let v = self.classify_node(&c);
                self.memo.insert(c, v);
            }
        }
        self.memo[e].clone()
    }

    fn child(&self, e: &Expr) -> &Verdict {
        &self.memo[e]
    }

    fn schedule(&self) -> Vec<u32> {
        self.session.refiner().schedule().collect()
    }

    /// The value is provably different from `r`.
    fn excludes(&self, e: &Expr, r: &Rat) -> bool {
        if let Some(v) = e.as_rat() {
            return v != r;
        }
        self.schedule().into_iter().any(|p| e.enclose(p).is_ok_and(|v| !v.contains_rat(r)))
    }

    /// Algebraic value proven irrational: every rational root of the witness is excluded.
    fn provably_irrational(&self, e: &Expr) -> bool {
        let v = self.child(e);
        if v.status != Status::Algebraic {
            return false;
        }
        let Some(w) = v.polynomial() else { return false };
        match rational_root_scan(w) {
            Ok(roots) => roots.iter().all(|r| self.excludes(e, r)),
            Err(_) => false,
        }
    }

    fn provably_nonzero(&self, e: &Expr) -> bool {
        self.excludes(e, &Rat::zero())
    }

    fn classify_node(&self, e: &Expr) -> Verdict {
        match e.node() {
            Node::Rat(r) => return Verdict::rational("rational", r.clone()),
            Node::Const(ConstKind::Pi) => return Verdict::transcendental("lindemann"),
            Node::Const(ConstKind::E) => return Verdict::transcendental("hermite"),
            _ => {}
        }
        if let Some((rule, w)) = self.structural_witness(e) {
            return self.finish_algebraic(e, rule, w);
        }
        self.transcendence(e).unwrap_or_else(|| Verdict::unknown("no-rule"))
    }

    fn finish_algebraic(&self, e: &Expr, rule: &str, w: IntPoly) -> Verdict {
        let consistent = self
            .schedule()
            .into_iter()
            .take(2)
            .any(|p| e.enclose(p).is_ok_and(|v| w.eval_interval(&v, p + 16).contains_zero()));
        if !consistent {
            return Verdict::unknown("witness-check-failed");
        }
        match identify_rational(&w, |p| e.enclose(p).ok(), &self.schedule()) {
            Some(v) => {
                let mut verdict = Verdict::rational(rule, v);
                verdict.witness = Some(Witness::Polynomial(w));
                verdict
            }
            None => Verdict::algebraic(rule, w),
        }
    }

    fn poly_of(&self, e: &Expr) -> Option<IntPoly> {
        let v = self.child(e);
        if !v.is_algebraic() {
            return None;
        }
        match &v.value {
            Some(r) => Some(linear_witness(r)),
            None => v.polynomial().cloned(),
        }
    }

    fn rat_of(&self, e: &Expr) -> Option<Rat> {
        e.as_rat().cloned().or_else(|| self.child(e).value.clone())
    }

    fn structural_witness(&self, e: &Expr) -> Option<(&'static str, IntPoly)> {
        match e.node() {
            Node::Field(op, a, b) => {
                let (pa, pb) = (self.poly_of(a)?, self.poly_of(b)?);
                let (ra, rb) = (self.rat_of(a), self.rat_of(b));
                let w = match op {
                    FieldOp::Add => match (&ra, &rb) {
                        (Some(r), _) => pb.affine_image(r, &Rat::one()),
                        (_, Some(r)) => pa.affine_image(r, &Rat::one()),
                        _ => witness_sum(&pa, &pb)?,
                    },
                    FieldOp::Sub => match (&ra, &rb) {
                        (Some(r), _) => pb.affine_image(r, &-Rat::one()),
                        (_, Some(r)) => pa.affine_image(&-r, &Rat::one()),
                        _ => witness_sum(&pa, &pb.negate_var())?,
                    },
                    FieldOp::Mul => match (&ra, &rb) {
                        (Some(r), _) if !r.is_zero() => pb.affine_image(&Rat::zero(), r),
                        (_, Some(r)) if !r.is_zero() => pa.affine_image(&Rat::zero(), r),
                        _ => witness_product(&pa, &pb)?,
                    },
                    FieldOp::Div => {
                        let inv = pb.strip_zero_roots().reciprocal();
                        match (&ra, &rb) {
                            (_, Some(r)) => pa.affine_image(&Rat::zero(), &(Rat::one() / r)),
                            (Some(r), _) => inv.affine_image(&Rat::zero(), r),
                            _ => witness_product(&pa, &inv)?,
                        }
                    }
                };
                Some(("field-closure", w.squarefree()))
            }
            Node::Sqrt(a) => {
                let p = self.poly_of(a)?;
                if too_big(2 * p.degree()?) {
                    return None;
                }
                Some(("radical", p.compose_square().squarefree()))
            }
            Node::PolyRoot { coeffs, .. } => {
                let rats: Option<Vec<Rat>> = coeffs.iter().map(|c| self.rat_of(c)).collect();
                let q = crate::poly::QPoly::new(rats?);
                if too_big(q.degree()?) {
                    return None;
                }
                Some(("polynomial-root", q.to_primitive_int().squarefree()))
            }
            Node::SinPi(x) => {
                let r = self.rat_of(x)?;
                // the annihilator's degree grows with the denominator
                if r.denom().to_usize().is_none_or(too_big) {
                    return None;
                }
                Some(("niven-olmsted", annihilator_sin_pi(&r)))
            }
            Node::Exp { base, exponent } => {
                let z = self.rat_of(exponent)?;
                if matches!(base.node(), Node::Const(_)) {
                    return None;
                }
                let pb = self.poly_of(base)?;
                Some(("rational-power", witness_power(&pb, &z)?))
            }
            _ => None,
        }
    }

    fn transcendence(&self, e: &Expr) -> Option<Verdict> {
        let algebraic = |x: &Expr| self.child(x).is_algebraic();
        let transcendental = |x: &Expr| self.child(x).status == Status::Transcendental;
        match e.node() {
            Node::Exp { base, exponent } => {
                if matches!(base.node(), Node::Const(ConstKind::E)) {
                    if algebraic(exponent) && self.provably_nonzero(exponent) {
                        return Some(Verdict::transcendental("lindemann-weierstrass"));
                    }
                    return None;
                }
                let base_ok = algebraic(base) && self.excludes(base, &Rat::zero()) && self.excludes(base, &Rat::one());
                if base_ok && self.provably_irrational(exponent) {
                    return Some(Verdict::transcendental("gelfond-schneider"));
                }
                None
            }
            Node::Log { base, arg, branch } => {
                if matches!(base.node(), Node::Const(ConstKind::E)) {
                    return algebraic(arg).then(|| Verdict::transcendental("lindemann-weierstrass"));
                }
                if *branch != 0 || !algebraic(base) || !algebraic(arg) {
                    return None;
                }
                self.log_rule(e, base, arg)
            }
            Node::SinPi(x) => {
                (self.provably_irrational(x) && x.is_real()).then(|| Verdict::transcendental("euler-bridge"))
            }
            Node::ArcsinPi(y) => {
                // rational arguments outside {0, ±1/2, ±1} fold no further
                y.as_rat().is_some().then(|| Verdict::transcendental("arcsin-rational"))
            }
            Node::Field(op, a, b) => {
                let (ta, tb) = (transcendental(a), transcendental(b));
                let (aa, ab) = (algebraic(a), algebraic(b));
                let fires = match op {
                    FieldOp::Add | FieldOp::Sub => (ta && ab) || (aa && tb),
                    FieldOp::Mul | FieldOp::Div => {
                        (ta && ab && self.provably_nonzero(b)) || (aa && tb && self.provably_nonzero(a))
                    }
                };
                fires.then(|| Verdict::transcendental("transcendental-closure"))
            }
            Node::Sqrt(a) => transcendental(a).then(|| Verdict::transcendental("transcendental-closure")),
            _ => None,
        }
    }

    /// `log_b a` for algebraic `a, b` on the principal branch is rational or
    /// transcendental.
    fn log_rule(&self, e: &Expr, base: &Expr, arg: &Expr) -> Option<Verdict> {
        let non_real = self
            .schedule()
            .into_iter()
            .any(|p| e.enclose(p).is_ok_and(|v| !v.im.contains_zero()));
        if non_real {
            return Some(Verdict::transcendental("gelfond-schneider-log"));
        }
        let (b, a) = (self.rat_of(base)?, self.rat_of(arg)?);
        if !b.is_positive() || !a.is_positive() {
            return None;
        }
        Some(match log_ratio(&a, &b) {
            Some(r) => Verdict::rational("prime-exponents", r),
            None => Verdict::transcendental("gelfond-schneider-log"),
        })
    }
}

/// Exact `log_b a` for positive rationals when it is rational.
pub fn log_ratio(a: &Rat, b: &Rat) -> Option<Rat> {
    let va = prime_exponents(a);
    let vb = prime_exponents(b);
    if vb.is_empty() {
        return None;
    }
    if va.is_empty() {
        return Some(Rat::zero());
    }
    let primes: std::collections::BTreeSet<&BigInt> = va.keys().chain(vb.keys()).collect();
    let mut ratio: Option<Rat> = None;
    for p in primes {
        let ea = va.get(p).cloned().unwrap_or_default();
        let eb = vb.get(p).cloned().unwrap_or_default();
        match (eb.is_zero(), ea.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return None,
            _ => {}
        }
        let r = Rat::new(ea, eb);
        match &ratio {
            Some(q) if q != &r => return None,
            _ => ratio = Some(r),
        }
    }
    ratio
}

fn prime_exponents(r: &Rat) -> std::collections::BTreeMap<BigInt, BigInt> {
    let mut out = std::collections::BTreeMap::new();
    for (p, k) in factor(r.numer()) {
        *out.entry(p).or_insert_with(BigInt::zero) += BigInt::from(k);
    }
    for (p, k) in factor(r.denom()) {
        *out.entry(p).or_insert_with(BigInt::zero) -= BigInt::from(k);
    }
    out.retain(|_, v: &mut BigInt| !v.is_zero());
    out
}

/// First matching rule for `e`.
pub fn transcendence_rules(session: &Session, e: &Expr) -> Verdict {
    Classifier::new(session).classify(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn annihilator_of_two_fifths_is_the_quintic() {
        let p = annihilator_sin_pi(&rat(2, 5));
        assert_eq!(p, IntPoly::from_i64(&[0, 5, 0, -20, 0, 16]));
        assert_eq!(annihilator_sin_pi(&rat(0, 1)), IntPoly::x());
        let sixth = annihilator_sin_pi(&rat(1, 6));
        assert!(rational_root_scan(&sixth).unwrap().contains(&rat(1, 2)));
    }

    #[test]
    fn multiple_angle_recurrence_small_cases() {
        let (a, b) = multiple_angle_sine(2);
        assert!(a.is_zero());
        assert_eq!(b, IntPoly::from_i64(&[0, 2]));
        let (a, b) = multiple_angle_sine(3);
        assert_eq!(a, IntPoly::from_i64(&[0, 3, 0, -4]));
        assert!(b.is_zero());
    }

    #[test]
    fn olmsted_examples() {
        let v = olmsted_classify(&rat(1, 6));
        assert_eq!(v.status, Status::Rational);
        assert_eq!(v.value, Some(rat(1, 2)));
        assert_eq!(olmsted_classify(&rat(1, 2)).value, Some(rat(1, 1)));
        assert_eq!(olmsted_classify(&rat(7, 6)).value, Some(rat(-1, 2)));
        let fifth = olmsted_classify(&rat(1, 5));
        assert_eq!(fifth.status, Status::Algebraic);
        assert!(rational_root_scan(fifth.polynomial().unwrap()).unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn log_ratio_examples() {
        assert_eq!(log_ratio(&rat(8, 1), &rat(2, 1)), Some(rat(3, 1)));
        assert_eq!(log_ratio(&rat(1, 9), &rat(27, 1)), Some(rat(-2, 3)));
        assert_eq!(log_ratio(&rat(3, 1), &rat(2, 1)), None);
        assert_eq!(log_ratio(&rat(12, 1), &rat(6, 1)), None);
    }

    #[test]
    fn golden_list() {
        let s = Session::new();
        let mut c = Classifier::new(&s);
        for text in ["(const pi)", "(const e)", "pow(-1, sqrt(2))", "sin_pi(sqrt(2))", "pow(2, sqrt(2))"] {
            let e = s.parse(text).unwrap();
            let v = c.classify(&e);
            assert_eq!(v.status, Status::Transcendental, "{text}: {v:?}");
            assert!(!v.conditional);
        }
        for (text, w) in [
            ("sqrt(2)", IntPoly::from_i64(&[-2, 0, 1])),
            ("(1 + sqrt(5))/2", IntPoly::from_i64(&[-1, -1, 1])),
            ("sin_pi(2/5)", IntPoly::from_i64(&[0, 5, 0, -20, 0, 16])),
        ] {
            let e = s.parse(text).unwrap();
            let v = c.classify(&e);
            assert_eq!(v.status, Status::Algebraic, "{text}");
            assert_eq!(v.polynomial(), Some(&w), "{text}");
        }
        let g = c.classify(&s.parse("pow(-1, sqrt(2))").unwrap());
        assert_eq!(g.rule, "gelfond-schneider");
        assert_eq!(c.classify(&s.parse("sin_pi(sqrt(2))").unwrap()).rule, "euler-bridge");
    }

    #[test]
    fn closure_witnesses() {
        let s = Session::new();
        let mut c = Classifier::new(&s);
        let v = c.classify(&s.parse("sqrt(2) + sqrt(3)").unwrap());
        assert_eq!(v.polynomial(), Some(&IntPoly::from_i64(&[1, 0, -10, 0, 1])));
        let v = c.classify(&s.parse("pow(2, 1/3)").unwrap());
        assert_eq!(v.polynomial(), Some(&IntPoly::from_i64(&[-2, 0, 0, 1])));
        let v = c.classify(&s.parse("sqrt(2) * sqrt(8)").unwrap());
        assert_eq!(v.status, Status::Rational);
        assert_eq!(v.value, Some(rat(4, 1)));
        let v = c.classify(&s.parse("sqrt(2) * sqrt(3) - sqrt(6)").unwrap());
        assert_eq!(v.value, Some(rat(0, 1)));
    }

    #[test]
    fn logs_and_arcsines() {
        let s = Session::new();
        let mut c = Classifier::new(&s);
        assert_eq!(c.classify(&s.parse("log(3; -1)").unwrap()).status, Status::Transcendental);
        assert_eq!(c.classify(&s.parse("log(3; 2)").unwrap()).status, Status::Transcendental);
        let v = c.classify(&s.parse("log(8; 2)").unwrap());
        assert_eq!(v.value, Some(rat(3, 1)));
        assert_eq!(c.classify(&s.parse("arcsin_over_pi(1/3)").unwrap()).status, Status::Transcendental);
        assert_eq!(c.classify(&s.parse("ln(2)").unwrap()).status, Status::Transcendental);
        assert_eq!(c.classify(&s.parse("pi + e").unwrap()).status, Status::Unknown);
        assert_eq!(c.classify(&s.parse("pi + sqrt(2)").unwrap()).status, Status::Transcendental);
        assert_eq!(c.classify(&s.parse("log(3; -1; 1)").unwrap()).status, Status::Unknown);
    }

    #[test]
    fn verdict_serializes_stably() {
        let v = Verdict::rational("rational", rat(-3, 4));
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(
            j,
            r#"{"status":"rational","rule":"rational","conditional":false,"witness":{"polynomial":{"coeffs":["3","4"]}},"value":"-3/4"}"#
        );
        let back: Verdict = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }
}
