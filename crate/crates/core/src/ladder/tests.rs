use super::*;
use crate::numeric::rat;

fn cfg() -> LadderConfig {
    LadderConfig::default()
}

#[test]
fn descend_examples() {
    let s = Session::new();
    let l = descend(&s, &s.parse("pow(-1, sqrt(2))").unwrap()).unwrap();
    assert_eq!(l.rungs.len(), 1);
    assert_eq!(l.rungs[0].value.to_sexpr(), "(sqrt 2)");
    assert_eq!(l.rungs[0].kind, RungKind::ElementAlgebraic);

    let l = descend(&s, &s.parse("log(3; -1)").unwrap()).unwrap();
    assert_eq!(l.rungs.len(), 1);
    assert_eq!(l.rungs[0].kind, RungKind::ExponentialAlgebraic);
    assert_eq!(l.rungs[0].witness.branch, Some(0));

    assert!(descend(&s, &s.frac(5, 7)).unwrap().rungs.is_empty());
    assert!(matches!(descend(&s, &s.pi()), Err(LadderError::UnsupportedNode(_))));
}

#[test]
fn descend_orders_rungs_topologically() {
    let s = Session::new();
    let x = s.parse("pow(-1, sqrt(2) + log(3; -1))").unwrap();
    let l = descend(&s, &x).unwrap();
    assert_eq!(l.rungs.len(), 2);
    assert_eq!(l.rungs[0].kind, RungKind::ExponentialAlgebraic);
    assert_eq!(l.rungs[1].witness.depends_on, vec![l.rungs[0].value.clone()]);
    assert!(l.is_valid());
    let again = descend(&s, &x).unwrap();
    assert_eq!(l.to_json(), again.to_json());
}

#[test]
fn descend_through_trig_and_base_change() {
    let s = Session::new();
    let l = descend(&s, &s.parse("sin_pi(sqrt(2))").unwrap()).unwrap();
    assert_eq!(l.rungs.len(), 2);
    let r = reduce(&s, &l, &cfg()).unwrap();
    assert_eq!(r.rungs.len(), 1);
    let l = descend(&s, &s.parse("pow(3, sqrt(2))").unwrap()).unwrap();
    let kinds: Vec<RungKind> = l.rungs.iter().map(|r| r.kind).collect();
    assert_eq!(kinds, vec![RungKind::ExponentialAlgebraic, RungKind::ElementAlgebraic]);
}

#[test]
fn reduce_examples() {
    let s = Session::new();
    let r2 = s.sqrt(&s.int(2)).unwrap();
    let l3 = s.log(&s.int(-1), &s.int(3), 0).unwrap();
    let third = s.add(&s.frac(1, 2), &s.scale(rat(2, 1), &l3)).unwrap();
    let mut l = Ladder::empty(s.base().clone());
    for (v, kind) in [
        (r2.clone(), RungKind::ElementAlgebraic),
        (l3.clone(), RungKind::ExponentialAlgebraic),
        (third, RungKind::ElementAlgebraic),
    ] {
        let source = match kind {
            RungKind::ElementAlgebraic => s.pow(s.base(), &v).unwrap(),
            RungKind::ExponentialAlgebraic => v.clone(),
        };
        l.rungs.push(Rung { value: v, kind, witness: RungWitness { source, depends_on: vec![], branch: None } });
    }
    let red = reduce(&s, &l, &cfg()).unwrap();
    let values: Vec<Expr> = red.rungs.iter().map(|r| r.value.clone()).collect();
    assert_eq!(values, vec![r2, l3]);
    assert_eq!(red.removed.len(), 1);
    assert_eq!(red.removed[0].constant, rat(1, 2));
    assert_eq!(red.removed[0].terms, vec![(1, rat(2, 1))]);
    assert!(red.removed[0].relation.is_exact());
}

#[test]
fn reduce_log_products() {
    let s = Session::new();
    let x = s.parse("log(2; -1) * log(3; -1) + log(6; -1)").unwrap();
    let l = descend(&s, &x).unwrap();
    assert_eq!(l.rungs.len(), 3);
    let red = reduce(&s, &l, &cfg()).unwrap();
    assert_eq!(red.rungs.len(), 2);
    let sub = red.subject.as_ref().unwrap();
    let t = Dyadic::pow2(-40);
    assert!(sub.eval(&t, s.refiner()).unwrap().overlaps(&x.eval(&t, s.refiner()).unwrap()));
    assert!(!sub.to_sexpr().contains("(log -1 6 0)"));
}

#[test]
fn ascend_examples() {
    let s = Session::new();
    let l = reduce(&s, &descend(&s, &s.parse("pow(-1, sqrt(2))").unwrap()).unwrap(), &cfg()).unwrap();
    let rep = ascend(&s, &l, &cfg()).unwrap();
    assert_eq!(rep.degree, 1);
    assert_eq!(rep.choices[0].choice, Choice::Power);
    assert!(rep.conditional);
    assert_eq!(rep.choices[0].unconditional.as_ref().unwrap().rule, "gelfond-schneider");

    let l = descend(&s, &s.parse("log(3; -1)").unwrap()).unwrap();
    let rep = ascend(&s, &l, &cfg()).unwrap();
    assert_eq!(rep.choices[0].choice, Choice::Rung);

    let rep = ascend(&s, &Ladder::empty(s.base().clone()), &cfg()).unwrap();
    assert_eq!(rep.degree, 0);
    assert!(rep.base_note.contains("Lindemann"));
}

#[test]
fn ascend_rejects_unreduced_ladders() {
    let s = Session::new();
    let l = descend(&s, &s.parse("sin_pi(sqrt(2))").unwrap()).unwrap();
    assert!(matches!(ascend(&s, &l, &cfg()), Err(LadderError::NotReduced(_))));
}
