//! Execution of checked programs against the exact geometry engine.

use std::collections::HashMap;

use crate::geometry::{self, GCircle, GLine, GObject, GPoint, GeomError, Shape};
use crate::ir::{Expr, Session};
use crate::numeric::rat;

use super::syntax::{literal_index, ArgValue, DiagKind, Diagnostic, Program, Span, Statement, Tool};

/// Runtime value of a bound name.
#[derive(Clone, Debug)]
pub enum Value {
    Number(Expr),
    Point(GPoint),
    Line(GLine),
    Circle(GCircle),
}

/// One executed `let` statement.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub name: String,
    pub tool: Tool,
    pub args: Vec<ArgValue>,
    pub span: Span,
    pub value: Value,
    pub shapes: Vec<Shape>,
}

/// A named real output: a number, or one coordinate of a point (`p.x`, `p.y`).
#[derive(Clone, Debug)]
pub struct Output {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub outputs: Vec<Output>,
    pub trace: Vec<TraceStep>,
}

impl Compiled {
    pub fn output(&self, name: &str) -> Option<&Expr> {
        self.outputs.iter().find(|o| o.name == name).map(|o| &o.expr)
    }
}

fn geom_diag(span: Span, e: GeomError) -> Diagnostic {
    Diagnostic::error(DiagKind::Geometry, span, e.to_string())
}

struct Env<'s> {
    s: &'s Session,
    values: HashMap<String, Value>,
}

impl Env<'_> {
    fn get(&self, a: &ArgValue) -> Value {
        match a {
            ArgValue::Rational(r) => Value::Number(self.s.rat(r.clone())),
            ArgValue::Name(n) => self.values.get(n).cloned().expect("checked program"),
        }
    }
}

fn num(v: &Value) -> &Expr {
    match v {
        Value::Number(e) => e,
        _ => unreachable!("checked program"),
    }
}

fn point(v: &Value) -> &GPoint {
    match v {
        Value::Point(p) => p,
        _ => unreachable!("checked program"),
    }
}

fn object(v: &Value) -> GObject {
    match v {
        Value::Line(l) => GObject::Line(l.clone()),
        Value::Circle(c) => GObject::Circle(c.clone()),
        _ => unreachable!("checked program"),
    }
}

fn require_positive(s: &Session, e: &Expr) -> Result<(), GeomError> {
    match e.sign(s.refiner()) {
        Some(std::cmp::Ordering::Greater) => Ok(()),
        Some(_) => Err(GeomError::NonPositiveLength),
        None => Err(GeomError::Undecided("the sign of a length")),
    }
}

/// Apply one tool to already evaluated arguments.
pub fn apply(s: &Session, tool: Tool, args: &[Value], index: Option<usize>) -> Result<(Value, Vec<Shape>), GeomError> {
    let o = || GPoint::origin(s);
    Ok(match (tool, args) {
        (Tool::Seg, [Value::Number(r)]) => {
            require_positive(s, r)?;
            (Value::Number(r.clone()), vec![Shape::Segment(o(), GPoint::new(r.clone(), s.int(0)))])
        }
        (Tool::Seg, [Value::Point(p), Value::Point(q)]) => {
            let dx = s.sub(&q.x, &p.x)?;
            let dy = s.sub(&q.y, &p.y)?;
            let d = s.sqrt(&s.add(&s.mul(&dx, &dx)?, &s.mul(&dy, &dy)?)?)?;
            (Value::Number(d), vec![Shape::Segment(p.clone(), q.clone())])
        }
        (Tool::Point, [x, y]) => {
            let p = GPoint::new(num(x).clone(), num(y).clone());
            (Value::Point(p.clone()), vec![Shape::Point(p)])
        }
        (Tool::Line, [p, q]) => {
            let l = geometry::make_line(s, point(p), point(q))?;
            (Value::Line(l.clone()), vec![Shape::Line(l.p, l.q)])
        }
        (Tool::Circle, [c, Value::Point(p)]) => {
            let c = geometry::make_circle(s, point(c), p)?;
            (Value::Circle(c.clone()), vec![Shape::Circle { center: c.center, through: c.through }])
        }
        (Tool::Circle, [c, Value::Number(r)]) => {
            require_positive(s, r)?;
            let center = point(c);
            let c = geometry::make_circle(s, center, &GPoint::new(s.add(&center.x, r)?, center.y.clone()))?;
            (Value::Circle(c.clone()), vec![Shape::Circle { center: c.center, through: c.through }])
        }
        (Tool::Intersect, [a, b, ..]) => {
            let pts = geometry::intersect(s, &object(a), &object(b))?;
            let k = match index {
                Some(k) => k,
                None if pts.len() == 1 => 1,
                None => {
                    return Err(GeomError::OutOfRange(format!(
                        "the objects meet in {} points; pass an index 1..={}",
                        pts.len(),
                        pts.len()
                    )))
                }
            };
            let p = pts.get(k.wrapping_sub(1)).cloned().ok_or_else(|| {
                GeomError::OutOfRange(format!("intersection index {k} but the objects meet in {} point(s)", pts.len()))
            })?;
            (Value::Point(p.clone()), vec![Shape::Point(p)])
        }
        (Tool::Meanprop, [a, b]) => {
            let r = geometry::mean_proportional(s, num(a), num(b))?;
            (Value::Number(r.value), r.shapes)
        }
        (Tool::Fourthprop, [a, b, c]) => {
            let r = geometry::fourth_proportional(s, num(a), num(b), num(c))?;
            (Value::Number(r.value), r.shapes)
        }
        (Tool::Ra, [u, v]) => {
            let r = geometry::right_anglesect(s, num(u), num(v))?;
            (Value::Point(r.value), r.shapes)
        }
        (Tool::Rra, [p]) => {
            let r = geometry::reverse_anglesect(s, point(p))?;
            (Value::Number(r.value), r.shapes)
        }
        (Tool::Bisect, [Value::Point(p)]) => {
            let r = geometry::bisect_angle(s, p)?;
            (Value::Point(r.value), r.shapes)
        }
        (Tool::Bisect, [Value::Number(l)]) => {
            require_positive(s, l)?;
            let h = s.scale(rat(1, 2), l);
            let shapes = vec![Shape::Segment(o(), GPoint::new(l.clone(), s.int(0))), Shape::Point(GPoint::new(h.clone(), s.int(0)))];
            (Value::Number(h), shapes)
        }
        (Tool::Anglesect, [p, u, v]) => {
            let r = geometry::general_anglesect(s, point(p), num(u), num(v))?;
            (Value::Point(r.value), r.shapes)
        }
        _ => unreachable!("checked program"),
    })
}

/// Execute a checked program, producing the emitted outputs and the trace.
pub fn compile(s: &Session, prog: &Program) -> Result<Compiled, Diagnostic> {
    let mut env = Env { s, values: HashMap::new() };
    let mut trace = vec![];
    let mut outputs = vec![];
    for st in &prog.statements {
        match st {
            Statement::Let { name, call, span, .. } => {
                let mut args: Vec<Value> = call.args.iter().map(|a| env.get(&a.value)).collect();
                let mut index = None;
                if call.tool == Tool::Intersect && call.args.len() == 3 {
                    if let ArgValue::Rational(r) = &call.args[2].value {
                        index = literal_index(r);
                    }
                    args.truncate(2);
                }
                let (value, shapes) = apply(s, call.tool, &args, index).map_err(|e| geom_diag(*span, e))?;
                env.values.insert(name.clone(), value.clone());
                trace.push(TraceStep {
                    name: name.clone(),
                    tool: call.tool,
                    args: call.args.iter().map(|a| a.value.clone()).collect(),
                    span: *span,
                    value,
                    shapes,
                });
            }
            Statement::Emit { names, .. } => {
                for (n, _) in names {
                    match &env.values[n] {
                        Value::Number(e) => outputs.push(Output { name: n.clone(), expr: e.clone() }),
                        Value::Point(p) => {
                            outputs.push(Output { name: format!("{n}.x"), expr: p.x.clone() });
                            outputs.push(Output { name: format!("{n}.y"), expr: p.y.clone() });
                        }
                        _ => unreachable!("checked program"),
                    }
                }
            }
        }
    }
    Ok(Compiled { outputs, trace })
}

/// Parse, check and compile in one step.
pub fn compile_source(s: &Session, source: &str) -> Result<(Program, Compiled), Vec<Diagnostic>> {
    let prog = super::syntax::parse(source)?;
    let c = compile(s, &prog).map_err(|d| vec![d])?;
    Ok((prog, c))
}
