//! Root isolation for `PolyRoot` nodes: approximate roots by Durand–Kerner,
//! then certify each one with a Krawczyk test.

use num_complex::Complex64;

use crate::numeric::{CInterval, Dyadic, NumError, RInterval};

use super::{Expr, IrError};

const ISOLATION_PREC: u32 = 160;

pub(super) fn horner(coeffs: &[CInterval], x: &CInterval, prec: u32) -> CInterval {
    coeffs
        .iter()
        .rev()
        .fold(CInterval::zero(), |acc, c| acc.mul(x, prec).add(c, prec))
}

fn derivative(coeffs: &[CInterval], prec: u32) -> Vec<CInterval> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&RInterval::from_int(i as i64), prec))
        .collect()
}

fn strictly_inside(inner: &RInterval, outer: &RInterval) -> bool {
    outer.lo() < inner.lo() && inner.hi() < outer.hi()
}

fn point(z: Complex64) -> CInterval {
    let re = Dyadic::from_f64(z.re).unwrap_or_else(Dyadic::zero);
    let im = Dyadic::from_f64(z.im).unwrap_or_else(Dyadic::zero);
    CInterval::new(RInterval::point(re), RInterval::point(im))
}

/// One complex Krawczyk step. Returns the image of `b`; every root in `b` lies in it.
fn krawczyk_complex(p: &[CInterval], dp: &[CInterval], b: &CInterval, prec: u32) -> Option<CInterval> {
    let m = b.mid();
    let fm = horner(p, &m, prec);
    let dfm = horner(dp, &m, prec);
    let y = CInterval::one().div(&dfm.mid(), prec).ok()?.mid();
    let dfb = horner(dp, b, prec);
    let slope = CInterval::one().sub(&y.mul(&dfb, prec), prec);
    Some(m.sub(&y.mul(&fm, prec), prec).add(&slope.mul(&b.sub(&m, prec), prec), prec))
}

/// Real Krawczyk step on the real line.
fn krawczyk_real(p: &[RInterval], dp: &[RInterval], b: &RInterval, prec: u32) -> Option<RInterval> {
    let h = |c: &[RInterval], x: &RInterval| {
        c.iter().rev().fold(RInterval::zero(), |acc, k| acc.mul(x, prec).add(k, prec))
    };
    let m = RInterval::point(b.mid());
    let fm = h(p, &m);
    let dfm = h(dp, &m);
    let y = RInterval::point(RInterval::one().div(&RInterval::point(dfm.mid()), prec).ok()?.mid());
    let dfb = h(dp, b);
    let slope = RInterval::one().sub(&y.mul(&dfb, prec), prec);
    Some(m.sub(&y.mul(&fm, prec), prec).add(&slope.mul(&b.sub(&m, prec), prec), prec))
}

fn verify_complex(p: &[CInterval], dp: &[CInterval], b: &CInterval, prec: u32) -> bool {
    match krawczyk_complex(p, dp, b, prec) {
        Some(k) => strictly_inside(&k.re, &b.re) && strictly_inside(&k.im, &b.im),
        None => false,
    }
}

fn verify_real(p: &[RInterval], dp: &[RInterval], b: &RInterval, prec: u32) -> bool {
    match krawczyk_real(p, dp, b, prec) {
        Some(k) => strictly_inside(&k, b),
        None => false,
    }
}

fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(4.0)).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |a, k| a * x + k);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// A certified root box: a real segment or a complex rectangle, each
/// containing exactly one root.
#[derive(Clone, Debug)]
enum RootBox {
    Real(RInterval),
    Complex(CInterval),
}

impl RootBox {
    fn as_complex(&self) -> CInterval {
        match self {
            RootBox::Real(r) => CInterval::real(r.clone()),
            RootBox::Complex(c) => c.clone(),
        }
    }
}

fn coefficient_enclosures(coeffs: &[Expr], prec: u32) -> Result<Vec<CInterval>, NumError> {
    coeffs.iter().map(|c| c.enclose(prec)).collect()
}

/// Certify the root of `coeffs` inside `selector`. Returns the verified box and
/// whether the root is real.
pub(super) fn isolate(coeffs: &[Expr], selector: &CInterval) -> Result<(CInterval, bool), IrError> {
    if coeffs.len() < 2 {
        return Err(IrError::RootSelection("polynomial must have degree at least 1".into()));
    }
    let real_coeffs = coeffs.iter().all(|c| c.is_real());
    let mut prec = ISOLATION_PREC;
    for _attempt in 0..4 {
        let p = coefficient_enclosures(coeffs, prec)?;
        if p.last().unwrap().contains_zero() {
            return Err(IrError::RootSelection("leading coefficient is not provably nonzero".into()));
        }
        let approx: Vec<Complex64> = p
            .iter()
            .map(|c| {
                let (re, im) = c.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect();
        let roots = durand_kerner(&approx);
        let dp = derivative(&p, prec);
        let pr: Vec<RInterval> = p.iter().map(|c| c.re.clone()).collect();
        let dpr: Vec<RInterval> = dp.iter().map(|c| c.re.clone()).collect();
        let mut boxes: Vec<RootBox> = vec![];
        let mut ok = true;
        for z in &roots {
            let scale = 1.0 + z.norm();
            let mut found = None;
            for e in [-44, -36, -28, -20, -12] {
                let r = Dyadic::from_f64(scale * 2f64.powi(e)).unwrap();
                if real_coeffs && z.im.abs() <= scale * 1e-6 {
                    let b = RInterval::point(Dyadic::from_f64(z.re).unwrap()).inflate(&r);
                    if verify_real(&pr, &dpr, &b, prec) {
                        found = Some(RootBox::Real(b));
                        break;
                    }
                }
                let b = point(*z).inflate(&r);
                if verify_complex(&p, &dp, &b, prec) {
                    found = Some(RootBox::Complex(b));
                    break;
                }
            }
            match found {
                Some(b) => boxes.push(b),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let disjoint = (0..boxes.len()).all(|i| {
                (i + 1..boxes.len()).all(|j| !boxes[i].as_complex().overlaps(&boxes[j].as_complex()))
            });
            if disjoint {
                return select(&p, &dp, boxes, selector, prec);
            }
        }
        prec *= 2;
    }
    Err(IrError::RootSelection("could not certify the roots (repeated or ill-conditioned roots?)".into()))
}

fn shrink(p: &[CInterval], dp: &[CInterval], b: &RootBox, prec: u32) -> RootBox {
    match b {
        RootBox::Real(r) => {
            let pr: Vec<RInterval> = p.iter().map(|c| c.re.clone()).collect();
            let dpr: Vec<RInterval> = dp.iter().map(|c| c.re.clone()).collect();
            match krawczyk_real(&pr, &dpr, r, prec).and_then(|k| k.intersect(r)) {
                Some(k) => RootBox::Real(k),
                None => b.clone(),
            }
        }
        RootBox::Complex(c) => match krawczyk_complex(p, dp, c, prec).and_then(|k| k.intersect(c)) {
            Some(k) => RootBox::Complex(k),
            None => b.clone(),
        },
    }
}

fn select(
    p: &[CInterval],
    dp: &[CInterval],
    mut boxes: Vec<RootBox>,
    selector: &CInterval,
    prec: u32,
) -> Result<(CInterval, bool), IrError> {
    for _round in 0..64 {
        let mut inside = vec![];
        let mut undecided = false;
        for (i, b) in boxes.iter().enumerate() {
            let c = b.as_complex();
            if selector.contains(&c) {
                inside.push(i);
            } else if c.overlaps(selector) {
                undecided = true;
            }
        }
        if !undecided {
            return match inside.as_slice() {
                [i] => {
                    let b = &boxes[*i];
                    Ok((b.as_complex(), matches!(b, RootBox::Real(_))))
                }
                [] => Err(IrError::RootSelection("selector contains no root".into())),
                many => Err(IrError::RootSelection(format!("selector contains {} roots", many.len()))),
            };
        }
        boxes = boxes.iter().map(|b| shrink(p, dp, b, prec)).collect();
    }
    Err(IrError::RootSelection("a root lies on the selector boundary".into()))
}

/// Narrow the isolating box at working precision `prec`.
pub(super) fn refine(coeffs: &[Expr], isolated: &CInterval, real: bool, prec: u32) -> Result<CInterval, NumError> {
    let wp = prec + 16;
    let p = coefficient_enclosures(coeffs, wp)?;
    let dp = derivative(&p, wp);
    let mut b = if real { RootBox::Real(isolated.re.clone()) } else { RootBox::Complex(isolated.clone()) };
    let target = Dyadic::pow2(-(prec as i64));
    for _ in 0..200 {
        let before = b.as_complex().width();
        b = shrink(&p, &dp, &b, wp);
        let after = b.as_complex().width();
        if after <= target || after.mul_pow2(1) > before {
            break;
        }
    }
    Ok(b.as_complex())
}
