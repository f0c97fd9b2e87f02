//! Re-execution of a construction trace in plain interval geometry and
//! comparison against the compiled expressions.

use std::collections::HashMap;

use serde::Serialize;

use crate::geometry::order_midpoints;
use crate::ir::Session;
use crate::numeric::{decimal, elementary, CInterval, Dyadic, NumError, RInterval};

use super::compile::Compiled;
use super::syntax::{literal_index, ArgValue, Tool};

type Pt = (RInterval, RInterval);

#[derive(Clone, Debug)]
enum IVal {
    Number(RInterval),
    Point(Pt),
    Line(Pt, Pt),
    Circle(Pt, RInterval),
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub compiled: String,
    pub replayed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub precision_bits: u32,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub name: String,
    pub reason: String,
}

/// Names whose compiled and replayed enclosures diverge.
#[derive(Clone, Debug, Serialize, thiserror::Error)]
#[error("round trip failed for {}", .mismatches.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(", "))]
pub struct MismatchReport {
    pub mismatches: Vec<Mismatch>,
}

struct Replay {
    prec: u32,
}

fn err(msg: impl Into<String>) -> String {
    msg.into()
}

impl Replay {
    fn sub(&self, a: &Pt, b: &Pt) -> Pt {
        (a.0.sub(&b.0, self.prec), a.1.sub(&b.1, self.prec))
    }
    fn dot(&self, a: &Pt, b: &Pt) -> RInterval {
        a.0.mul(&b.0, self.prec).add(&a.1.mul(&b.1, self.prec), self.prec)
    }
    fn cross(&self, a: &Pt, b: &Pt) -> RInterval {
        a.0.mul(&b.1, self.prec).sub(&a.1.mul(&b.0, self.prec), self.prec)
    }
    fn along(&self, p: &Pt, t: &RInterval, d: &Pt) -> Pt {
        (p.0.add(&t.mul(&d.0, self.prec), self.prec), p.1.add(&t.mul(&d.1, self.prec), self.prec))
    }
    fn div(&self, a: &RInterval, b: &RInterval) -> Result<RInterval, String> {
        a.div(b, self.prec).map_err(|e: NumError| e.to_string())
    }
    /// Square root of a quantity known to be nonnegative up to rounding.
    fn sqrt0(&self, a: &RInterval) -> Result<RInterval, String> {
        if a.hi().is_negative() {
            return Err(err("square root of a negative quantity"));
        }
        let clamped = if a.lo().is_negative() { RInterval::new(Dyadic::zero(), a.hi().clone()) } else { a.clone() };
        clamped.sqrt(self.prec).map_err(|e| e.to_string())
    }

    fn quarter_point(&self, t: &RInterval) -> Pt {
        let (s, c) = elementary::sin_cos_pi(&t.scale_pow2(-1), self.prec);
        (c, s)
    }

    fn positive(&self, r: &RInterval) -> Result<(), String> {
        if r.is_positive() {
            Ok(())
        } else {
            Err(err("length is not provably positive"))
        }
    }

    fn intersect(&self, a: &IVal, b: &IVal) -> Result<Vec<Pt>, String> {
        let pts = match (a, b) {
            (IVal::Line(p1, q1), IVal::Line(p2, q2)) => {
                let d1 = self.sub(q1, p1);
                let d2 = self.sub(q2, p2);
                let den = self.cross(&d1, &d2);
                if den.contains_zero() {
                    return Err(err("lines are not provably crossing"));
                }
                let w = self.sub(p2, p1);
                let t = self.div(&self.cross(&w, &d2), &den)?;
                vec![self.along(p1, &t, &d1)]
            }
            (IVal::Line(p, q), IVal::Circle(c, r2)) | (IVal::Circle(c, r2), IVal::Line(p, q)) => {
                let d = self.sub(q, p);
                let pc = self.sub(p, c);
                let a = self.dot(&d, &d);
                let b = self.dot(&d, &pc).scale_pow2(1);
                let cc = self.dot(&pc, &pc).sub(r2, self.prec);
                let disc = b.sqr(self.prec).sub(&a.mul(&cc, self.prec).scale_pow2(2), self.prec);
                let two_a = a.scale_pow2(1);
                if disc.contains_zero() {
                    vec![self.along(p, &self.div(&b.neg(), &two_a)?, &d)]
                } else {
                    let root = self.sqrt0(&disc)?;
                    let t1 = self.div(&b.neg().sub(&root, self.prec), &two_a)?;
                    let t2 = self.div(&b.neg().add(&root, self.prec), &two_a)?;
                    vec![self.along(p, &t1, &d), self.along(p, &t2, &d)]
                }
            }
            (IVal::Circle(c1, r1), IVal::Circle(c2, r2)) => {
                let d = self.sub(c2, c1);
                let d2 = self.dot(&d, &d);
                let t = self.div(&r1.sub(r2, self.prec).add(&d2, self.prec), &d2.scale_pow2(1))?;
                let h = self.div(r1, &d2)?.sub(&t.sqr(self.prec), self.prec);
                let foot = self.along(c1, &t, &d);
                let perp = (d.1.neg(), d.0.clone());
                if h.contains_zero() {
                    vec![foot]
                } else {
                    let root = self.sqrt0(&h)?;
                    vec![self.along(&foot, &root.neg(), &perp), self.along(&foot, &root, &perp)]
                }
            }
            _ => return Err(err("intersect needs lines or circles")),
        };
        let mut keyed: Vec<((Dyadic, Dyadic), Pt)> = pts.into_iter().map(|p| ((p.0.mid(), p.1.mid()), p)).collect();
        keyed.sort_by(|a, b| order_midpoints(&a.0, &b.0));
        Ok(keyed.into_iter().map(|(_, p)| p).collect())
    }

    fn arcsin_fraction(&self, p: &Pt) -> Result<RInterval, String> {
        let y = p.1.clamp(&Dyadic::from_int(-1), &Dyadic::one());
        Ok(elementary::asin_over_pi(&y, self.prec).map_err(|e| e.to_string())?.scale_pow2(1))
    }

    fn step(&self, tool: Tool, args: &[IVal], index: Option<usize>) -> Result<IVal, String> {
        use IVal::*;
        Ok(match (tool, args) {
            (Tool::Seg, [Number(r)]) => {
                self.positive(r)?;
                Number(r.clone())
            }
            (Tool::Seg, [Point(p), Point(q)]) => {
                let d = self.sub(q, p);
                Number(self.sqrt0(&self.dot(&d, &d))?)
            }
            (Tool::Point, [Number(x), Number(y)]) => Point((x.clone(), y.clone())),
            (Tool::Line, [Point(p), Point(q)]) => Line(p.clone(), q.clone()),
            (Tool::Circle, [Point(c), Point(p)]) => {
                let d = self.sub(p, c);
                Circle(c.clone(), self.dot(&d, &d))
            }
            (Tool::Circle, [Point(c), Number(r)]) => {
                self.positive(r)?;
                Circle(c.clone(), r.sqr(self.prec))
            }
            (Tool::Intersect, [a, b, ..]) => {
                let pts = self.intersect(a, b)?;
                let k = index.unwrap_or(1);
                if index.is_none() && pts.len() != 1 {
                    return Err(format!("expected one intersection point, found {}", pts.len()));
                }
                Point(pts.get(k.wrapping_sub(1)).cloned().ok_or_else(|| format!("no intersection point {k}"))?)
            }
            (Tool::Meanprop, [Number(a), Number(b)]) => {
                self.positive(a)?;
                self.positive(b)?;
                Number(self.sqrt0(&a.mul(b, self.prec))?)
            }
            (Tool::Fourthprop, [Number(a), Number(b), Number(c)]) => {
                self.positive(a)?;
                self.positive(b)?;
                self.positive(c)?;
                Number(self.div(&a.mul(c, self.prec), b)?)
            }
            (Tool::Ra, [Number(u), Number(v)]) => {
                self.positive(u)?;
                self.positive(v)?;
                Point(self.quarter_point(&self.div(u, &u.add(v, self.prec))?))
            }
            (Tool::Rra, [Point(p)]) => Number(self.arcsin_fraction(p)?),
            (Tool::Bisect, [Point(p)]) => {
                let one = RInterval::one();
                let c = self.sqrt0(&one.add(&p.0, self.prec).scale_pow2(-1))?;
                let s = self.sqrt0(&one.sub(&p.0, self.prec).scale_pow2(-1))?;
                Point((if p.1.is_negative() { c.neg() } else { c }, s))
            }
            (Tool::Bisect, [Number(l)]) => {
                self.positive(l)?;
                Number(l.scale_pow2(-1))
            }
            (Tool::Anglesect, [Point(p), Number(u), Number(v)]) => {
                self.positive(u)?;
                self.positive(v)?;
                let f = self.arcsin_fraction(p)?;
                let t = f.mul(&self.div(u, &u.add(v, self.prec))?, self.prec);
                Point(self.quarter_point(&t))
            }
            _ => return Err(format!("`{}` applied to arguments of the wrong kind", tool.name())),
        })
    }
}

/// Replay the trace of `compiled` with interval coordinates and check every
/// emitted value against its expression enclosed to width `2^-bits`.
pub fn verify_roundtrip(s: &Session, compiled: &Compiled, bits: u32) -> Result<RoundtripReport, MismatchReport> {
    let replay = Replay { prec: bits + 96 };
    let mut env: HashMap<String, IVal> = HashMap::new();
    let mut failures: HashMap<String, String> = HashMap::new();
    for step in &compiled.trace {
        let mut index = None;
        let mut args = vec![];
        let mut missing = None;
        for (i, a) in step.args.iter().enumerate() {
            match a {
                ArgValue::Rational(r) if step.tool == Tool::Intersect && i == 2 => index = literal_index(r),
                ArgValue::Rational(r) => args.push(IVal::Number(RInterval::from_rat(r, replay.prec))),
                ArgValue::Name(n) => match env.get(n) {
                    Some(v) => args.push(v.clone()),
                    None => missing = Some(n.clone()),
                },
            }
        }
        let result = match missing {
            Some(n) => Err(format!("depends on `{n}`, which did not replay")),
            None => replay.step(step.tool, &args, index),
        };
        match result {
            Ok(v) => {
                env.insert(step.name.clone(), v);
            }
            Err(e) => {
                failures.insert(step.name.clone(), e);
            }
        }
    }
    let target = Dyadic::pow2(-(bits as i64));
    let mut checks = vec![];
    let mut mismatches = vec![];
    for out in &compiled.outputs {
        let (base, coord) = match out.name.split_once('.') {
            Some((b, c)) => (b, Some(c)),
            None => (out.name.as_str(), None),
        };
        let replayed = match (env.get(base), coord) {
            (Some(IVal::Number(r)), None) => Ok(r.clone()),
            (Some(IVal::Point(p)), Some("x")) => Ok(p.0.clone()),
            (Some(IVal::Point(p)), Some("y")) => Ok(p.1.clone()),
            (Some(_), _) => Err("replayed value has a different kind".to_string()),
            (None, _) => Err(failures.get(base).cloned().unwrap_or_else(|| "not replayed".into())),
        };
        let compiled_iv = out.expr.eval(&target, s.refiner());
        match (compiled_iv, replayed) {
            (Ok(c), Ok(r)) => {
                if c.overlaps(&CInterval::real(r.clone())) {
                    checks.push(Check {
                        name: out.name.clone(),
                        compiled: decimal::certified_complex(&c, 24),
                        replayed: decimal::certified_digits(&r, 24).unwrap_or_else(|| "?".into()),
                    });
                } else {
                    mismatches.push(Mismatch {
                        name: out.name.clone(),
                        reason: format!(
                            "compiled {} but replay gives {}",
                            decimal::certified_complex(&c, 24),
                            decimal::certified_digits(&r, 24).unwrap_or_else(|| format!("≈{}", r.to_f64()))
                        ),
                    });
                }
            }
            (Err(e), _) => mismatches.push(Mismatch { name: out.name.clone(), reason: format!("cannot enclose the expression: {e}") }),
            (_, Err(e)) => mismatches.push(Mismatch { name: out.name.clone(), reason: e }),
        }
    }
    if mismatches.is_empty() {
        Ok(RoundtripReport { precision_bits: bits, checks })
    } else {
        Err(MismatchReport { mismatches })
    }
}
