use super::*;
use crate::numeric::RInterval;

// 50-digit reference values computed independently with mpmath.
const QUARTER_COT_PI_8: &str = "0.60355339059327376220042218105242451964241796884424";
const TWO_OVER_PI_ATAN2: &str = "0.70483276469913345164919784755051894809773095222616";
const TWO_OVER_PI_ASIN_THIRD: &str = "0.2163468959387854596582888815551381773667427011212";
const SQRT_PI: &str = "1.7724538509055160272981674833411451827975494561224";
const TWO_OVER_PI: &str = "0.63661977236758134307553505349005744813783858296183";

fn decimal(text: &str) -> Rat {
    let (int, frac) = text.split_once('.').unwrap();
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().unwrap();
    Rat::new(digits, num_bigint::BigInt::from(10).pow(frac.len() as u32))
}

fn enc(s: &Session, e: &Expr, bits: i64) -> RInterval {
    e.eval(&Dyadic::pow2(-bits), s.refiner()).unwrap().re
}

fn close(v: &RInterval, reference: &Rat, tol: f64) -> bool {
    let m = v.mid().to_rat() - reference;
    num_traits::Signed::abs(&m) < Rat::from_float(tol).unwrap()
}

fn is_rat(e: &Expr, r: Rat) -> bool {
    e.as_rat() == Some(&r)
}

fn line(s: &Session, a: (i64, i64), b: (i64, i64)) -> GObject {
    GObject::Line(GLine {
        p: GPoint::rat(s, rat_int(a.0), rat_int(a.1)),
        q: GPoint::rat(s, rat_int(b.0), rat_int(b.1)),
    })
}

fn unit_circle(s: &Session) -> GObject {
    GObject::Circle(GCircle { center: GPoint::origin(s), through: GPoint::rat(s, rat_int(1), rat_int(0)) })
}

#[test]
fn intersection_examples() {
    let s = Session::new();
    let p = intersect(&s, &line(&s, (0, 0), (1, 1)), &line(&s, (0, 2), (2, 0))).unwrap();
    assert_eq!(p.len(), 1);
    assert!(is_rat(&p[0].x, rat_int(1)) && is_rat(&p[0].y, rat_int(1)));

    let p = intersect(&s, &unit_circle(&s), &line(&s, (0, 0), (1, 0))).unwrap();
    assert_eq!(p.len(), 2);
    assert!(is_rat(&p[0].x, rat_int(-1)) && is_rat(&p[1].x, rat_int(1)));

    let err = intersect(&s, &unit_circle(&s), &line(&s, (2, 0), (2, 1))).unwrap_err();
    assert_eq!(err, GeomError::NoIntersection);
    let err = intersect(&s, &line(&s, (0, 0), (1, 1)), &line(&s, (2, 2), (3, 3))).unwrap_err();
    assert_eq!(err, GeomError::Coincident);
}

#[test]
fn circle_circle_points_satisfy_both_equations() {
    let s = Session::new();
    let c2 = GObject::Circle(GCircle {
        center: GPoint::rat(&s, rat_int(1), rat_int(0)),
        through: GPoint::origin(&s),
    });
    let pts = intersect(&s, &unit_circle(&s), &c2).unwrap();
    assert_eq!(pts.len(), 2);
    for p in &pts {
        assert!(is_rat(&p.x, rat(1, 2)));
        let lhs = s.add(&s.mul(&p.x, &p.x).unwrap(), &s.mul(&p.y, &p.y).unwrap()).unwrap();
        assert!(lhs.eval(&Dyadic::pow2(-40), s.refiner()).unwrap().contains_rat(&rat_int(1)));
        let sqrt_nodes = p.y.postorder().iter().filter(|e| matches!(e.node(), crate::ir::Node::Sqrt(_))).count();
        assert!(sqrt_nodes <= 1);
    }
    assert!(enc(&s, &pts[0].y, 40).is_negative());
}

#[test]
fn proportional_examples() {
    let s = Session::new();
    assert!(is_rat(&mean_proportional(&s, &s.int(2), &s.int(8)).unwrap().value, rat_int(4)));
    assert_eq!(mean_proportional(&s, &s.int(1), &s.int(2)).unwrap().value, s.sqrt(&s.int(2)).unwrap());
    let root_pi = mean_proportional(&s, &s.int(1), &s.pi()).unwrap().value;
    assert!(close(&enc(&s, &root_pi, 60), &decimal(SQRT_PI), 1e-15));
    assert_eq!(mean_proportional(&s, &s.int(0), &s.int(2)).unwrap_err(), GeomError::NonPositiveLength);

    assert!(is_rat(&fourth_proportional(&s, &s.int(3), &s.int(2), &s.int(4)).unwrap().value, rat_int(6)));
    let a = s.sqrt(&s.int(3)).unwrap();
    let b = s.int(5);
    assert_eq!(fourth_proportional(&s, &a, &b, &b).unwrap().value, a);
    let two_pi = s.scale(rat_int(2), &s.pi());
    let four_pi = fourth_proportional(&s, &s.int(2), &s.int(1), &two_pi).unwrap().value;
    let expect = s.scale(rat_int(4), &s.pi());
    assert!(enc(&s, &four_pi, 60).overlaps(&enc(&s, &expect, 60)));
}

#[test]
fn mean_proportional_trace_has_expected_shapes() {
    let s = Session::new();
    let b = mean_proportional(&s, &s.int(2), &s.int(8)).unwrap();
    let classes: Vec<&str> = b.shapes.iter().map(|x| x.class()).collect();
    assert_eq!(classes, vec!["segment", "segment", "arc", "perpendicular"]);
}

#[test]
fn anglesector_examples() {
    let s = Session::new();
    let p = right_anglesect(&s, &s.int(1), &s.int(1)).unwrap().value;
    let h = s.scale(rat(1, 2), &s.sqrt(&s.int(2)).unwrap());
    assert_eq!((p.x.clone(), p.y.clone()), (h.clone(), h));
    let p = right_anglesect(&s, &s.int(1), &s.int(2)).unwrap().value;
    assert!(is_rat(&p.y, rat(1, 2)));
    assert_eq!(p.x, s.scale(rat(1, 2), &s.sqrt(&s.int(3)).unwrap()));
    let p = right_anglesect(&s, &s.sqrt(&s.int(2)).unwrap(), &s.int(1)).unwrap().value;
    assert!(check_unit(&s, &p).is_ok());

    let top = GPoint::rat(&s, rat_int(0), rat_int(1));
    assert!(is_rat(&reverse_anglesect(&s, &top).unwrap().value, rat_int(1)));
    let thirty = GPoint::new(s.scale(rat(1, 2), &s.sqrt(&s.int(3)).unwrap()), s.frac(1, 2));
    assert!(is_rat(&reverse_anglesect(&s, &thirty).unwrap().value, rat(1, 3)));
    let third = GPoint::new(s.sqrt(&s.frac(8, 9)).unwrap(), s.frac(1, 3));
    let f = reverse_anglesect(&s, &third).unwrap().value;
    assert!(close(&enc(&s, &f, 60), &decimal(TWO_OVER_PI_ASIN_THIRD), 1e-15));
    let off = GPoint::rat(&s, rat_int(1), rat_int(1));
    assert_eq!(reverse_anglesect(&s, &off).unwrap_err(), GeomError::NotOnUnitCircle);
}

#[test]
fn general_anglesect_examples() {
    let s = Session::new();
    let top = GPoint::rat(&s, rat_int(0), rat_int(1));
    let p = general_anglesect(&s, &top, &s.int(1), &s.int(2)).unwrap().value;
    assert!(is_rat(&p.y, rat(1, 2)));
    let sixty = GPoint::new(s.frac(1, 2), s.scale(rat(1, 2), &s.sqrt(&s.int(3)).unwrap()));
    let p = general_anglesect(&s, &sixty, &s.int(1), &s.int(1)).unwrap().value;
    assert!(is_rat(&p.y, rat(1, 2)));
    let h = s.scale(rat(1, 2), &s.sqrt(&s.int(2)).unwrap());
    let p = general_anglesect(&s, &GPoint::new(h.clone(), h), &s.int(1), &s.int(2)).unwrap().value;
    // angle π/12 as a fraction of the right angle is 1/6
    assert!(is_rat(&quarter_fraction(&s, &p).unwrap(), rat(1, 6)));
}

#[test]
fn quadratrix_examples() {
    let s = Session::new();
    let one = s.int(1);
    assert!(is_rat(&quadratrix_x_of_y(&s, &s.frac(1, 2), &one).unwrap().value, rat(1, 2)));
    let x = quadratrix_x_of_y(&s, &s.frac(1, 4), &one).unwrap().value;
    assert!(close(&enc(&s, &x, 60), &decimal(QUARTER_COT_PI_8), 1e-15));
    assert!(matches!(quadratrix_x_of_y(&s, &s.int(0), &one), Err(GeomError::OutOfRange(_))));

    assert!(is_rat(&quadratrix_y_of_slope(&s, &s.int(1)).unwrap(), rat(1, 2)));
    assert!(is_rat(&quadratrix_y_of_slope(&s, &s.sqrt(&s.int(3)).unwrap()).unwrap(), rat(2, 3)));
    let y = quadratrix_y_of_slope(&s, &s.int(2)).unwrap();
    assert!(close(&enc(&s, &y, 60), &decimal(TWO_OVER_PI_ATAN2), 1e-15));
    assert_eq!(quadratrix_y_of_slope(&s, &s.int(-1)).unwrap_err(), GeomError::NonPositiveSlope);
}

#[test]
fn clavius_examples() {
    let s = Session::new();
    let p1 = clavius_point(&s, 1).unwrap();
    assert!(is_rat(&p1.x, rat(1, 2)) && is_rat(&p1.y, rat(1, 2)));
    let p2 = clavius_point(&s, 2).unwrap();
    assert!(close(&enc(&s, &p2.x, 60), &decimal(QUARTER_COT_PI_8), 1e-15));
    let p10 = clavius_point(&s, 10).unwrap();
    let err = enc(&s, &p10.x, 80).mid().to_rat() - decimal(TWO_OVER_PI);
    assert!(num_traits::Signed::abs(&err) < Rat::from_float(1e-5).unwrap());
}

#[test]
fn spiral_examples() {
    let s = Session::new();
    let half = s.frac(1, 2);
    let c = spiral_secant_cut(&s, &half, &s.frac(1, 8), &s.int(1)).unwrap();
    let v = enc(&s, &c, 60).to_f64();
    // closed form r0·r1·sin h / (r0 − r1 cos h) evaluated in f64
    let (a, t0, h) = (2.0 / std::f64::consts::PI, std::f64::consts::FRAC_PI_2, std::f64::consts::PI / 8.0);
    let (r0, r1) = (a * t0, a * (t0 - h));
    let oracle = r0 * r1 * h.sin() / (r0 - r1 * h.cos());
    assert!((v - oracle).abs() < 1e-12);
    assert_eq!(spiral_secant_cut(&s, &half, &s.int(0), &s.int(1)).unwrap_err(), GeomError::DegenerateSecant);
    let p = spiral_point(&s, &half, &s.int(1)).unwrap();
    assert!(is_rat(&p.x, rat_int(0)) && is_rat(&p.y, rat_int(1)));
}
