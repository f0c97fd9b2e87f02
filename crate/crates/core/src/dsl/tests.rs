use super::*;
use crate::ir::{Node, Session};
use crate::numeric::{rat, Dyadic};
use crate::rules::{Classifier, Status};

// (2/π)·arcsin(1/3) (mpmath).
const RRA_THIRD: f64 = 0.216_346_895_938_785_46;

fn compiled(src: &str) -> (Session, Compiled) {
    let s = Session::new();
    let (_, c) = compile_source(&s, src).unwrap_or_else(|d| panic!("{d:?}"));
    (s, c)
}

fn errors(src: &str) -> Vec<Diagnostic> {
    parse(src).expect_err("expected diagnostics")
}

#[test]
fn parses_the_basic_examples() {
    let p = parse("let a = seg(2); let b = seg(8); let m = meanprop(a,b); emit m;").unwrap();
    assert_eq!(p.statements.len(), 4);
    assert_eq!(p.emits(), vec!["m"]);
    let p = parse("let p = ra(1,2); emit p;").unwrap();
    assert_eq!(p.tools(), vec![Tool::Ra]);
}

#[test]
fn missing_semicolon_is_reported_at_the_next_token() {
    let d = errors("let a = seg(2) emit a;");
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].kind, DiagKind::Syntax);
    assert_eq!((d[0].span.line, d[0].span.column), (1, 16));
    assert!(d[0].message.contains("expected `;`"), "{}", d[0].message);
}

#[test]
fn spans_track_lines_and_comments() {
    let src = "# header\nlet a = seg(2);\n  let b = sek(3);\n";
    let d = errors(src);
    assert_eq!((d[0].span.line, d[0].span.column), (3, 11));
    assert_eq!(d[0].suggestion.as_deref(), Some("seg"));
    let rendered = d[0].render("x.qdx", src);
    assert!(rendered.starts_with("x.qdx:3:11: error: unknown tool `sek`"), "{rendered}");
    assert!(rendered.ends_with("^^^"), "{rendered}");
}

#[test]
fn name_errors() {
    let d = errors("let a = seg(2); let a = seg(3); emit a;");
    assert_eq!(d[0].kind, DiagKind::DuplicateName);
    assert_eq!(d[0].span.column, 21);

    let d = errors("let alpha = seg(2); let m = meanprop(alpah, 2); emit m;");
    assert_eq!(d[0].kind, DiagKind::UnboundName);
    assert_eq!(d[0].suggestion.as_deref(), Some("alpha"));

    let d = errors("let m = meanprop(b, 2); let b = seg(1); emit m;");
    assert!(d[0].message.contains("before its definition"), "{}", d[0].message);
}

#[test]
fn signature_errors() {
    let d = errors("let a = meanprop(1); emit a;");
    assert_eq!(d[0].kind, DiagKind::Arity);
    let d = errors("let p = point(0, 0); let q = meanprop(p, 1); emit q;");
    assert_eq!(d[0].kind, DiagKind::ArgumentKind);
    let d = errors("let o = point(0,0); let c = circle(o, 1); let l = line(o, o); let p = intersect(c, l, 1/2); emit p;");
    assert!(d.iter().any(|d| d.message.contains("positive integer")));
    let d = errors("let o = point(0,0); let c = circle(o, 1); emit c;");
    assert_eq!(d[0].kind, DiagKind::ArgumentKind);
}

#[test]
fn lexical_errors() {
    assert!(errors("let a = seg(1/0); emit a;")[0].message.contains("denominator"));
    assert!(errors("let a = seg(2) @").iter().any(|d| d.message.contains("unexpected character")));
    assert!(errors("# only a comment\n")[0].message.contains("at least one statement"));
}

#[test]
fn print_parse_round_trip() {
    let src = "let a=seg(-3/4);let o = point(0,0) ; let c = circle(o, 1); let p = ra(1, 2);emit a,p;";
    let p1 = parse(src).unwrap();
    let printed = p1.to_string();
    let p2 = parse(&printed).unwrap();
    assert!(p1.same_structure(&p2));
    assert_eq!(p2.to_string(), printed);
    assert!(printed.contains("let a = seg(-3/4);"));
}

#[test]
fn meanprop_compiles_to_four() {
    let (s, c) = compiled("let a = seg(2); let b = seg(8); let m = meanprop(a,b); emit m;");
    let m = c.output("m").unwrap();
    assert_eq!(m.as_rat(), Some(&rat(4, 1)));
    assert_eq!(Classifier::new(&s).classify(m).status, Status::Rational);
    verify_roundtrip(&s, &c, 40).unwrap();
}

#[test]
fn trisected_right_angle_height_is_one_half() {
    let (s, c) = compiled("let p = ra(1,2); emit p;");
    let y = c.output("p.y").unwrap();
    assert_eq!(y.as_rat(), Some(&rat(1, 2)));
    let v = Classifier::new(&s).classify(y);
    assert!(v.is_algebraic());
    let x = c.output("p.x").unwrap();
    let vx = Classifier::new(&s).classify(x);
    assert_eq!(vx.status, Status::Algebraic);
    assert!(vx.polynomial().is_some());
}

#[test]
fn reverse_anglesector_of_one_third_is_transcendental() {
    let (s, c) = compiled("let x = meanprop(8/9, 1); let p = point(x, 1/3); let f = rra(p); emit f;");
    let f = c.output("f").unwrap();
    assert!(f.any_node(|n| matches!(n, Node::ArcsinPi(_))));
    let iv = f.enclose(80).unwrap();
    assert!((iv.re.to_f64() - RRA_THIRD).abs() < 1e-15);
    assert_eq!(Classifier::new(&s).classify(f).status, Status::Transcendental);
    verify_roundtrip(&s, &c, 40).unwrap();
}

#[test]
fn nested_intersections_round_trip() {
    let src = "
        let o = point(0, 0);
        let a = point(1, 0);
        let u = circle(o, a);
        let v = circle(a, o);
        let top = intersect(u, v, 2);
        let bottom = intersect(u, v, 1);
        let axis = line(top, bottom);
        let base = line(o, a);
        let mid = intersect(axis, base);
        let h = seg(top, bottom);
        emit top, mid, h;
    ";
    let (s, c) = compiled(src);
    assert_eq!(c.trace.len(), 10);
    assert_eq!(c.output("mid.x").unwrap().as_rat(), Some(&rat(1, 2)));
    let y = c.output("top.y").unwrap().enclose(64).unwrap().re.to_f64();
    assert!((y - 3f64.sqrt() / 2.0).abs() < 1e-15);
    let report = verify_roundtrip(&s, &c, 30).unwrap();
    assert_eq!(report.checks.len(), 5);
    for o in &c.outputs {
        assert!(!o.expr.any_node(|n| matches!(n, Node::Exp { .. } | Node::Log { .. } | Node::SinPi(_) | Node::ArcsinPi(_))));
    }
}

#[test]
fn corrupted_trace_is_reported() {
    let (s, mut c) = compiled("let a = seg(2); let b = seg(8); let m = meanprop(a,b); emit m;");
    c.trace[0].args[0] = ArgValue::Rational(rat(3, 1));
    let err = verify_roundtrip(&s, &c, 40).unwrap_err();
    assert_eq!(err.mismatches.len(), 1);
    assert_eq!(err.mismatches[0].name, "m");
}

#[test]
fn bisection_and_anglesection_agree() {
    let (s, c) = compiled(
        "let t = ra(2, 1); let h = bisect(t); let g = anglesect(t, 1, 1); let l = bisect(3); emit h, g, l;",
    );
    let w = Dyadic::pow2(-60);
    for k in ["x", "y"] {
        let a = c.output(&format!("h.{k}")).unwrap().eval(&w, s.refiner()).unwrap();
        let b = c.output(&format!("g.{k}")).unwrap().eval(&w, s.refiner()).unwrap();
        assert!(a.overlaps(&b), "{k}");
    }
    assert_eq!(c.output("h.y").unwrap().as_rat(), Some(&rat(1, 2)));
    assert_eq!(c.output("l").unwrap().as_rat(), Some(&rat(3, 2)));
    verify_roundtrip(&s, &c, 30).unwrap();
}

#[test]
fn geometry_errors_carry_statement_spans() {
    let s = Session::new();
    let d = compile_source(&s, "let a = seg(1);\nlet o = point(0, 0);\nlet u = circle(o, 1);\nlet l = line(o, o);\nemit a;")
        .unwrap_err();
    assert_eq!(d[0].kind, DiagKind::Geometry);
    assert_eq!(d[0].span.line, 4);
    let d = compile_source(&s, "let o = point(0,0); let u = circle(o, 1); let v = circle(o, 2); let p = intersect(u, v, 1); emit p;")
        .unwrap_err();
    assert!(d[0].message.contains("do not intersect"));
    let d = compile_source(&s, "let u = seg(-1); emit u;").unwrap_err();
    assert!(d[0].message.contains("positive"));
}

#[test]
fn ambiguous_intersection_requires_an_index() {
    let s = Session::new();
    let d = compile_source(&s, "let o = point(0,0); let u = circle(o, 1); let a = point(1, 0); let l = line(o, a); let p = intersect(u, l); emit p;")
        .unwrap_err();
    assert!(d[0].message.contains("pass an index"), "{}", d[0].message);
}
