//! Exact synthetic geometry over [`Expr`] coordinates: intersections, the
//! proportional constructions, anglesectors and the curve probes.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::ir::{Expr, IrError, Session};
use crate::numeric::{rat, rat_int, Dyadic, NumError, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("objects coincide")]
    Coincident,
    #[error("objects do not intersect")]
    NoIntersection,
    #[error("length must be positive")]
    NonPositiveLength,
    #[error("point is not on the unit circle")]
    NotOnUnitCircle,
    #[error("point is outside the first quadrant")]
    NotFirstQuadrant,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("slope must be positive")]
    NonPositiveSlope,
    #[error("secant is degenerate (h = 0)")]
    DegenerateSecant,
    #[error("a line needs two distinct points")]
    DegenerateLine,
    #[error("a circle needs a nonzero radius")]
    DegenerateCircle,
    #[error("cannot decide {0} below the precision ceiling")]
    Undecided(&'static str),
    #[error(transparent)]
    Ir(#[from] IrError),
}

impl From<NumError> for GeomError {
    fn from(e: NumError) -> Self {
        GeomError::Ir(IrError::Numeric(e))
    }
}

pub type GResult<T> = Result<T, GeomError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoint {
    pub x: Expr,
    pub y: Expr,
}

impl GPoint {
    pub fn new(x: Expr, y: Expr) -> Self {
        GPoint { x, y }
    }

    pub fn rat(s: &Session, x: Rat, y: Rat) -> Self {
        GPoint { x: s.rat(x), y: s.rat(y) }
    }

    pub fn origin(s: &Session) -> Self {
        GPoint { x: s.int(0), y: s.int(0) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let f = |e: &Expr| e.enclose(64).map(|v| v.re.to_f64()).unwrap_or(f64::NAN);
        (f(&self.x), f(&self.y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLine {
    pub p: GPoint,
    pub q: GPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCircle {
    pub center: GPoint,
    pub through: GPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GObject {
    Line(GLine),
    Circle(GCircle),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Quadratrix,
    Spiral,
}

/// A drawable element of a construction trace.
#[derive(Clone, Debug)]
pub enum Shape {
    Point(GPoint),
    Segment(GPoint, GPoint),
    Line(GPoint, GPoint),
    Circle { center: GPoint, through: GPoint },
    /// Counter-clockwise arc around `center` from `from` to `to`.
    Arc { center: GPoint, from: GPoint, to: GPoint },
    /// Segment from `foot` standing at a right angle on the drawing's base.
    Perpendicular { foot: GPoint, top: GPoint },
    CurveSample { curve: Curve, point: GPoint },
}

impl Shape {
    pub fn class(&self) -> &'static str {
        match self {
            Shape::Point(_) => "point",
            Shape::Segment(..) => "segment",
            Shape::Line(..) => "line",
            Shape::Circle { .. } => "circle",
            Shape::Arc { .. } => "arc",
            Shape::Perpendicular { .. } => "perpendicular",
            Shape::CurveSample { .. } => "curve-sample",
        }
    }
}

/// A value together with the drawing that realizes it.
#[derive(Clone, Debug)]
pub struct Built<T> {
    pub value: T,
    pub shapes: Vec<Shape>,
}

fn built<T>(value: T, shapes: Vec<Shape>) -> Built<T> {
    Built { value, shapes }
}

/// Sign of a real expression; exact for rationals, otherwise by refinement.
fn sign(s: &Session, e: &Expr, what: &'static str) -> GResult<Ordering> {
    e.sign(s.refiner()).ok_or(GeomError::Undecided(what))
}

/// Approximate `a > b`, for choosing what to draw only; equal or
/// indistinguishable lengths may go either way.
fn drawing_longer(a: &Expr, b: &Expr) -> bool {
    let mid = |e: &Expr| e.enclose(64).map(|v| v.re.mid().to_f64()).unwrap_or(0.0);
    mid(a) > mid(b)
}

/// True when `e` is zero: exactly for rationals, `false` once an enclosure
/// excludes zero, and an error when neither can be shown.
fn is_zero(s: &Session, e: &Expr, what: &'static str) -> GResult<bool> {
    if let Some(r) = e.as_rat() {
        return Ok(r == &rat_int(0));
    }
    if e.provably_nonzero(s.refiner()) {
        Ok(false)
    } else {
        Err(GeomError::Undecided(what))
    }
}

fn require_positive(s: &Session, e: &Expr) -> GResult<()> {
    match sign(s, e, "the sign of a length")? {
        Ordering::Greater => Ok(()),
        _ => Err(GeomError::NonPositiveLength),
    }
}

struct V<'s> {
    s: &'s Session,
}

impl V<'_> {
    fn sub(&self, a: &GPoint, b: &GPoint) -> GResult<(Expr, Expr)> {
        Ok((self.s.sub(&a.x, &b.x)?, self.s.sub(&a.y, &b.y)?))
    }
    fn dot(&self, a: &(Expr, Expr), b: &(Expr, Expr)) -> GResult<Expr> {
        Ok(self.s.add(&self.s.mul(&a.0, &b.0)?, &self.s.mul(&a.1, &b.1)?)?)
    }
    fn cross(&self, a: &(Expr, Expr), b: &(Expr, Expr)) -> GResult<Expr> {
        Ok(self.s.sub(&self.s.mul(&a.0, &b.1)?, &self.s.mul(&a.1, &b.0)?)?)
    }
    /// `p + t·d`.
    fn along(&self, p: &GPoint, t: &Expr, d: &(Expr, Expr)) -> GResult<GPoint> {
        Ok(GPoint::new(self.s.add(&p.x, &self.s.mul(t, &d.0)?)?, self.s.add(&p.y, &self.s.mul(t, &d.1)?)?))
    }
}

fn line_dir(s: &Session, l: &GLine) -> GResult<(Expr, Expr)> {
    let d = V { s }.sub(&l.q, &l.p)?;
    let n = V { s }.dot(&d, &d)?;
    if is_zero(s, &n, "whether a line is degenerate")? {
        return Err(GeomError::DegenerateLine);
    }
    Ok(d)
}

fn radius_sq(s: &Session, c: &GCircle) -> GResult<Expr> {
    let d = V { s }.sub(&c.through, &c.center)?;
    let r2 = V { s }.dot(&d, &d)?;
    if is_zero(s, &r2, "whether a circle is degenerate")? {
        return Err(GeomError::DegenerateCircle);
    }
    Ok(r2)
}

/// Line through two points, rejected when they coincide.
pub fn make_line(s: &Session, p: &GPoint, q: &GPoint) -> GResult<GLine> {
    let l = GLine { p: p.clone(), q: q.clone() };
    line_dir(s, &l)?;
    Ok(l)
}

/// Circle around `center` through `through`, rejected when the radius is zero.
pub fn make_circle(s: &Session, center: &GPoint, through: &GPoint) -> GResult<GCircle> {
    let c = GCircle { center: center.clone(), through: through.clone() };
    radius_sq(s, &c)?;
    Ok(c)
}

/// Midpoints closer than this are treated as equal when ordering points.
pub const ORDER_TOLERANCE_BITS: i64 = 64;

/// Lexicographic order on `(x, y)` midpoints, with near-equal abscissas
/// compared by ordinate.
pub fn order_midpoints(a: &(Dyadic, Dyadic), b: &(Dyadic, Dyadic)) -> Ordering {
    if a.0.sub(&b.0).abs() <= Dyadic::pow2(-ORDER_TOLERANCE_BITS) {
        a.1.cmp(&b.1)
    } else {
        a.0.cmp(&b.0)
    }
}

fn sort_points(mut pts: Vec<GPoint>) -> GResult<Vec<GPoint>> {
    let key = |p: &GPoint| -> GResult<(Dyadic, Dyadic)> {
        Ok((p.x.enclose(128)?.re.mid(), p.y.enclose(128)?.re.mid()))
    };
    let mut keyed = pts.drain(..).map(|p| Ok((key(&p)?, p))).collect::<GResult<Vec<_>>>()?;
    keyed.sort_by(|a, b| order_midpoints(&a.0, &b.0));
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

fn intersect_line_line(s: &Session, a: &GLine, b: &GLine) -> GResult<Vec<GPoint>> {
    let v = V { s };
    let d1 = line_dir(s, a)?;
    let d2 = line_dir(s, b)?;
    let den = v.cross(&d1, &d2)?;
    let w = v.sub(&b.p, &a.p)?;
    if is_zero(s, &den, "whether two lines are parallel")? {
        let off = v.cross(&w, &d1)?;
        return if is_zero(s, &off, "whether parallel lines coincide")? {
            Err(GeomError::Coincident)
        } else {
            Err(GeomError::NoIntersection)
        };
    }
    let t = s.div(&v.cross(&w, &d2)?, &den)?;
    Ok(vec![v.along(&a.p, &t, &d1)?])
}

/// Roots of `A t² + B t + C` along the line, sharing one square root.
fn line_circle_params(s: &Session, l: &GLine, c: &GCircle) -> GResult<(Vec<Expr>, (Expr, Expr))> {
    let v = V { s };
    let d = line_dir(s, l)?;
    let r2 = radius_sq(s, c)?;
    let pc = v.sub(&l.p, &c.center)?;
    let a = v.dot(&d, &d)?;
    let b = s.scale(rat_int(2), &v.dot(&d, &pc)?);
    let cc = s.sub(&v.dot(&pc, &pc)?, &r2)?;
    let disc = s.sub(&s.mul(&b, &b)?, &s.scale(rat_int(4), &s.mul(&a, &cc)?))?;
    let two_a = s.scale(rat_int(2), &a);
    let minus_b = s.neg(&b);
    if disc.as_rat().is_some_and(|r| r == &rat_int(0)) {
        return Ok((vec![s.div(&minus_b, &two_a)?], d));
    }
    match sign(s, &disc, "whether a line meets a circle")? {
        Ordering::Less => Err(GeomError::NoIntersection),
        Ordering::Equal => unreachable!("sign() never reports an exact zero for non-rationals"),
        Ordering::Greater => {
            let root = s.sqrt(&disc)?;
            let t1 = s.div(&s.sub(&minus_b, &root)?, &two_a)?;
            let t2 = s.div(&s.add(&minus_b, &root)?, &two_a)?;
            Ok((vec![t1, t2], d))
        }
    }
}

fn intersect_line_circle(s: &Session, l: &GLine, c: &GCircle) -> GResult<Vec<GPoint>> {
    let (ts, d) = line_circle_params(s, l, c)?;
    ts.iter().map(|t| V { s }.along(&l.p, t, &d)).collect()
}

fn intersect_circle_circle(s: &Session, c1: &GCircle, c2: &GCircle) -> GResult<Vec<GPoint>> {
    let v = V { s };
    let r1 = radius_sq(s, c1)?;
    let r2 = radius_sq(s, c2)?;
    let d = v.sub(&c2.center, &c1.center)?;
    let d2 = v.dot(&d, &d)?;
    if is_zero(s, &d2, "whether two circles are concentric")? {
        let dr = s.sub(&r1, &r2)?;
        return if is_zero(s, &dr, "whether concentric circles coincide")? {
            Err(GeomError::Coincident)
        } else {
            Err(GeomError::NoIntersection)
        };
    }
    // X = C1 + t·D ± √(h)·D⊥ with t = (r1² − r2² + |D|²) / (2|D|²), h = r1²/|D|² − t²
    let t = s.div(&s.add(&s.sub(&r1, &r2)?, &d2)?, &s.scale(rat_int(2), &d2))?;
    let h = s.sub(&s.div(&r1, &d2)?, &s.mul(&t, &t)?)?;
    let foot = v.along(&c1.center, &t, &d)?;
    let perp = (s.neg(&d.1), d.0.clone());
    if h.as_rat().is_some_and(|r| r == &rat_int(0)) {
        return Ok(vec![foot]);
    }
    match sign(s, &h, "whether two circles meet")? {
        Ordering::Less => Err(GeomError::NoIntersection),
        _ => {
            let root = s.sqrt(&h)?;
            Ok(vec![v.along(&foot, &s.neg(&root), &perp)?, v.along(&foot, &root, &perp)?])
        }
    }
}

/// Intersection points of two lines/circles, ordered by enclosure midpoint.
pub fn intersect(s: &Session, a: &GObject, b: &GObject) -> GResult<Vec<GPoint>> {
    let pts = match (a, b) {
        (GObject::Line(l1), GObject::Line(l2)) => intersect_line_line(s, l1, l2)?,
        (GObject::Line(l), GObject::Circle(c)) | (GObject::Circle(c), GObject::Line(l)) => {
            intersect_line_circle(s, l, c)?
        }
        (GObject::Circle(c1), GObject::Circle(c2)) => intersect_circle_circle(s, c1, c2)?,
    };
    sort_points(pts)
}

/// `x` with `a : x = x : b`, drawn as a semicircle over `a + b` with the
/// perpendicular at the junction.
pub fn mean_proportional(s: &Session, a: &Expr, b: &Expr) -> GResult<Built<Expr>> {
    require_positive(s, a)?;
    require_positive(s, b)?;
    let x = s.sqrt(&s.mul(a, b)?)?;
    let zero = s.int(0);
    let left = GPoint::new(s.neg(a), zero.clone());
    let right = GPoint::new(b.clone(), zero.clone());
    let junction = GPoint::origin(s);
    let center = GPoint::new(s.scale(rat(1, 2), &s.sub(b, a)?), zero);
    let top = GPoint::new(s.int(0), x.clone());
    Ok(built(
        x,
        vec![
            Shape::Segment(left.clone(), junction.clone()),
            Shape::Segment(junction.clone(), right.clone()),
            Shape::Arc { center, from: right, to: left },
            Shape::Perpendicular { foot: junction, top },
        ],
    ))
}

/// `x` with `x : a = c : b`, drawn with two rays and a pair of parallels.
pub fn fourth_proportional(s: &Session, a: &Expr, b: &Expr, c: &Expr) -> GResult<Built<Expr>> {
    require_positive(s, a)?;
    require_positive(s, b)?;
    require_positive(s, c)?;
    let x = s.div(&s.mul(a, c)?, b)?;
    let o = GPoint::origin(s);
    let on_ray = |len: &Expr| -> GResult<GPoint> {
        Ok(GPoint::new(s.scale(rat(3, 5), len), s.scale(rat(4, 5), len)))
    };
    let pa = GPoint::new(a.clone(), s.int(0));
    let pb = GPoint::new(b.clone(), s.int(0));
    let pc = on_ray(c)?;
    let px = on_ray(&x)?;
    let far = if drawing_longer(a, b) { pa.clone() } else { pb.clone() };
    let far_c = if drawing_longer(&x, c) { px.clone() } else { pc.clone() };
    Ok(built(
        x,
        vec![
            Shape::Segment(o.clone(), far),
            Shape::Segment(o, far_c),
            Shape::Segment(pb, pc),
            Shape::Segment(pa, px),
        ],
    ))
}

/// Unit-circle point at angle `t·π/2`.
fn quarter_point(s: &Session, t: &Expr) -> GResult<GPoint> {
    let half = s.scale(rat(1, 2), t);
    let e = s.euler_split(&half)?;
    Ok(GPoint::new(e.cos_part, e.sin_part))
}

fn quarter_arc(s: &Session) -> Shape {
    Shape::Arc { center: GPoint::origin(s), from: GPoint::rat(s, rat_int(1), rat_int(0)), to: GPoint::rat(s, rat_int(0), rat_int(1)) }
}

/// Divide the right angle in the ratio `u : v`.
pub fn right_anglesect(s: &Session, u: &Expr, v: &Expr) -> GResult<Built<GPoint>> {
    require_positive(s, u)?;
    require_positive(s, v)?;
    let t = s.div(u, &s.add(u, v)?)?;
    let p = quarter_point(s, &t)?;
    let o = GPoint::origin(s);
    let f = GPoint::new(s.sub(&s.int(1), &t)?, t.clone());
    Ok(built(
        p.clone(),
        vec![
            quarter_arc(s),
            Shape::Segment(GPoint::rat(s, rat_int(1), rat_int(0)), GPoint::rat(s, rat_int(0), rat_int(1))),
            Shape::Point(f),
            Shape::Segment(o, p),
        ],
    ))
}

pub fn check_unit(s: &Session, p: &GPoint) -> GResult<()> {
    let n = s.add(&s.mul(&p.x, &p.x)?, &s.mul(&p.y, &p.y)?)?;
    if let Some(r) = n.as_rat() {
        return if r == &rat_int(1) { Ok(()) } else { Err(GeomError::NotOnUnitCircle) };
    }
    let v = n.eval(&Dyadic::pow2(-40), s.refiner())?;
    if v.contains_rat(&rat_int(1)) {
        Ok(())
    } else {
        Err(GeomError::NotOnUnitCircle)
    }
}

/// Fraction of the right angle below a unit-circle point: `(2/π)·arcsin(y)`.
pub fn reverse_anglesect(s: &Session, p: &GPoint) -> GResult<Built<Expr>> {
    check_unit(s, p)?;
    if sign(s, &p.y, "the sign of a coordinate")? == Ordering::Less {
        return Err(GeomError::OutOfRange("y must lie in [0, 1]".into()));
    }
    let f = s.scale(rat_int(2), &s.arcsin_over_pi(&p.y)?);
    let o = GPoint::origin(s);
    let foot = GPoint::new(s.int(0), f.clone());
    Ok(built(
        f,
        vec![quarter_arc(s), Shape::Segment(o.clone(), p.clone()), Shape::Segment(o, foot)],
    ))
}

/// Compass bisection of the angle from `(1, 0)` to a unit-circle point,
/// measured counter-clockwise in `[0, 2π)`.
pub fn bisect_angle(s: &Session, p: &GPoint) -> GResult<Built<GPoint>> {
    check_unit(s, p)?;
    let one = s.int(1);
    let c = s.sqrt(&s.scale(rat(1, 2), &s.add(&one, &p.x)?))?;
    let sn = s.sqrt(&s.scale(rat(1, 2), &s.sub(&one, &p.x)?))?;
    let lower = match p.y.as_rat() {
        Some(r) => r < &rat_int(0),
        None => sign(s, &p.y, "the sign of a coordinate")? == Ordering::Less,
    };
    let h = GPoint::new(if lower { s.neg(&c) } else { c }, sn);
    let o = GPoint::origin(s);
    let a = GPoint::rat(s, rat_int(1), rat_int(0));
    Ok(built(
        h.clone(),
        vec![
            Shape::Circle { center: o.clone(), through: a.clone() },
            Shape::Segment(o.clone(), p.clone()),
            Shape::Segment(a, p.clone()),
            Shape::Segment(o, h),
        ],
    ))
}

/// Split the acute angle of `theta` so the result makes `u/(u+v)` of it.
pub fn general_anglesect(s: &Session, theta: &GPoint, u: &Expr, v: &Expr) -> GResult<Built<GPoint>> {
    require_positive(s, u)?;
    require_positive(s, v)?;
    if sign(s, &theta.x, "the sign of a coordinate")? == Ordering::Less {
        return Err(GeomError::NotFirstQuadrant);
    }
    let f = reverse_anglesect(s, theta)?;
    let ratio = s.div(u, &s.add(u, v)?)?;
    let t = s.mul(&f.value, &ratio)?;
    let p = quarter_point(s, &t)?;
    let mut shapes = f.shapes;
    shapes.push(Shape::Segment(GPoint::origin(s), p.clone()));
    Ok(built(p, shapes))
}

/// Angle of a first-quadrant unit-circle point as a fraction of π/2.
pub fn quarter_fraction(s: &Session, p: &GPoint) -> GResult<Expr> {
    Ok(reverse_anglesect(s, p)?.value)
}

/// Quadratrix abscissa `x = y·cot(πy/(2R))` for `0 < y < R`.
pub fn quadratrix_x_of_y(s: &Session, y: &Expr, r: &Expr) -> GResult<Built<Expr>> {
    require_positive(s, r)?;
    if sign(s, y, "the sign of y")? != Ordering::Greater {
        return Err(GeomError::OutOfRange("the quadratrix has no point at y = 0 (only a limit)".into()));
    }
    if sign(s, &s.sub(r, y)?, "whether y < R")? != Ordering::Greater {
        return Err(GeomError::OutOfRange("y must be below R".into()));
    }
    let arg = s.div(y, &s.scale(rat_int(2), r))?;
    let e = s.euler_split(&arg)?;
    let x = s.mul(y, &s.div(&e.cos_part, &e.sin_part)?)?;
    let point = GPoint::new(x.clone(), y.clone());
    Ok(built(x, vec![Shape::CurveSample { curve: Curve::Quadratrix, point }]))
}

/// Height where the radial line `y = m·x` meets the unit quadratrix:
/// `(2/π)·arctan m`.
pub fn quadratrix_y_of_slope(s: &Session, m: &Expr) -> GResult<Expr> {
    if sign(s, m, "the sign of the slope")? != Ordering::Greater {
        return Err(GeomError::NonPositiveSlope);
    }
    let hyp = s.sqrt(&s.add(&s.int(1), &s.mul(m, m)?)?)?;
    Ok(s.scale(rat_int(2), &s.arcsin_over_pi(&s.div(m, &hyp)?)?))
}

/// Quadratrix point at height `2^-n` reached by `n` bisections.
pub fn clavius_point(s: &Session, n: u32) -> GResult<GPoint> {
    let y = s.rat(Rat::new(1.into(), num_bigint::BigInt::from(1) << n));
    let x = quadratrix_x_of_y(s, &y, &s.int(1))?.value;
    Ok(GPoint::new(x, y))
}

/// Secant intercept for the spiral `r = aθ` with `a = 2R/π`.
///
/// Angles are given in units of π: the secant runs through the spiral points
/// at `π·t0` and `π·(t0 − h)`. The returned length is cut by the secant on the
/// line through the origin perpendicular to the radius at `π·t0`; as `h → 0`
/// it tends to the polar subtangent `2πR·t0²`.
pub fn spiral_secant_cut(s: &Session, t0: &Expr, h: &Expr, r: &Expr) -> GResult<Expr> {
    require_positive(s, r)?;
    if h.as_rat().is_some_and(|v| v == &rat_int(0)) || !h.provably_nonzero(s.refiner()) {
        return Err(GeomError::DegenerateSecant);
    }
    if sign(s, h, "the sign of h")? != Ordering::Greater || sign(s, &s.sub(t0, h)?, "whether h < t0")? != Ordering::Greater {
        return Err(GeomError::OutOfRange("need 0 < h < t0".into()));
    }
    let two_r = s.scale(rat_int(2), r);
    let r0 = s.mul(&two_r, t0)?;
    let r1 = s.mul(&two_r, &s.sub(t0, h)?)?;
    let e = s.euler_split(h)?;
    // in the frame of the radius at t0: length = r0·r1·sin πh / (r0 − r1·cos πh)
    let num = s.mul(&s.mul(&r0, &r1)?, &e.sin_part)?;
    let den = s.sub(&r0, &s.mul(&r1, &e.cos_part)?)?;
    Ok(s.div(&num, &den)?)
}

/// Spiral point at angle `π·t` for `r = (2R/π)·θ`.
pub fn spiral_point(s: &Session, t: &Expr, r: &Expr) -> GResult<GPoint> {
    let rad = s.mul(&s.scale(rat_int(2), r), t)?;
    let e = s.euler_split(t)?;
    Ok(GPoint::new(s.mul(&rad, &e.cos_part)?, s.mul(&rad, &e.sin_part)?))
}

#[cfg(test)]
mod tests;
