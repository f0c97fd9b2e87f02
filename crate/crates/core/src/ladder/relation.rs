//! Integer relations among `(1, x_1, …, x_n)`: an exact path over symbolic
//! linear forms and a lattice path over enclosures.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::ir::{Expr, FieldOp, Node};
use crate::numeric::{CInterval, Dyadic, RInterval, Rat, Refiner};

use super::lll::{canonical_sign, lll, max_norm, primitive};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    /// Verified in exact arithmetic.
    Exact,
    /// Holds within `2^-precision_bits`, confirmed at twice the precision.
    Heuristic { precision_bits: u32 },
}

/// `n_0 + Σ n_j x_j = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    #[serde(with = "bigint_vec")]
    pub coefficients: Vec<BigInt>,
    pub confidence: Confidence,
}

mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|t| t.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl Relation {
    pub fn is_exact(&self) -> bool {
        self.confidence == Confidence::Exact
    }
}

/// `constant + Σ coeff·atom`, atoms keyed by node id.
#[derive(Clone, Debug, Default)]
pub struct LinearForm {
    pub constant: Rat,
    pub terms: BTreeMap<u64, (Expr, Rat)>,
}

impl LinearForm {
    fn scale(mut self, k: &Rat) -> Self {
        self.constant *= k;
        for (_, c) in self.terms.values_mut() {
            *c *= k;
        }
        self.terms.retain(|_, (_, c)| !c.is_zero());
        self
    }

    fn add(mut self, o: &LinearForm, sign: &Rat) -> Self {
        self.constant += &o.constant * sign;
        for (id, (e, c)) in &o.terms {
            let entry = self.terms.entry(*id).or_insert_with(|| (e.clone(), Rat::zero()));
            entry.1 += c * sign;
        }
        self.terms.retain(|_, (_, c)| !c.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }
}

/// Decompose `e` as a rational affine combination of non-linear atoms.
pub fn linear_form(e: &Expr) -> LinearForm {
    let one = Rat::one();
    match e.node() {
        Node::Rat(r) => LinearForm { constant: r.clone(), terms: BTreeMap::new() },
        Node::Field(FieldOp::Add, a, b) => linear_form(a).add(&linear_form(b), &one),
        Node::Field(FieldOp::Sub, a, b) => linear_form(a).add(&linear_form(b), &-one),
        Node::Field(FieldOp::Mul, a, b) if a.is_rat() => linear_form(b).scale(a.as_rat().unwrap()),
        Node::Field(FieldOp::Mul, a, b) if b.is_rat() => linear_form(a).scale(b.as_rat().unwrap()),
        Node::Field(FieldOp::Div, a, b) if b.is_rat() && !b.as_rat().unwrap().is_zero() => {
            linear_form(a).scale(&(one / b.as_rat().unwrap()))
        }
        _ => {
            let mut terms = BTreeMap::new();
            terms.insert(e.id(), (e.clone(), one));
            LinearForm { constant: Rat::zero(), terms }
        }
    }
}

fn combine(values: &[Expr], coeffs: &[BigInt]) -> LinearForm {
    let mut acc = LinearForm { constant: Rat::from_integer(coeffs[0].clone()), terms: BTreeMap::new() };
    for (v, n) in values.iter().zip(&coeffs[1..]) {
        acc = acc.add(&linear_form(v), &Rat::from_integer(n.clone()));
    }
    acc
}

/// Options for [`detect_relation_with`].
#[derive(Clone, Debug)]
pub struct RelationSearch {
    pub max_coeff: BigInt,
    pub precision_bits: u32,
    /// Only accept relations whose last coefficient is nonzero.
    pub require_last: bool,
}

impl Default for RelationSearch {
    fn default() -> Self {
        RelationSearch { max_coeff: BigInt::from(1000), precision_bits: 256, require_last: false }
    }
}

/// Integer relation among `(1, values…)` with entries bounded by `max_coeff`,
/// holding to within `2^-precision_bits`. `None` is not a proof of independence.
pub fn detect_relation(values: &[Expr], max_coeff: &BigInt, precision_bits: u32) -> Option<Relation> {
    let opts = RelationSearch { max_coeff: max_coeff.clone(), precision_bits, require_last: false };
    detect_relation_with(values, &opts, &Refiner::from_env())
}

pub fn detect_relation_with(values: &[Expr], opts: &RelationSearch, refiner: &Refiner) -> Option<Relation> {
    if values.is_empty() {
        return None;
    }
    let accept = |v: &[BigInt]| {
        v.iter().any(|x| !x.is_zero())
            && max_norm(v) <= opts.max_coeff
            && (!opts.require_last || !v.last().unwrap().is_zero())
    };
    let kernel = exact_kernel(values);
    if !kernel.is_empty() {
        if let Some(best) = best_candidate(small_combinations(kernel), accept) {
            return Some(Relation { coefficients: best, confidence: Confidence::Exact });
        }
    }
    let rows = lattice_candidates(values, opts.precision_bits, refiner)?;
    let verified: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|v| accept(v))
        .filter(|v| verify_numeric(values, v, opts.precision_bits, refiner))
        .collect();
    let best = best_candidate(verified, accept)?;
    let confidence = if verify_symbolic(values, &best) {
        Confidence::Exact
    } else {
        Confidence::Heuristic { precision_bits: opts.precision_bits }
    };
    Some(Relation { coefficients: best, confidence })
}

/// Minimal sup norm, ties broken by the lexicographically smallest vector.
fn best_candidate(cands: Vec<Vec<BigInt>>, accept: impl Fn(&[BigInt]) -> bool) -> Option<Vec<BigInt>> {
    cands
        .into_iter()
        .map(|v| canonical_sign(primitive(v)))
        .filter(|v| accept(v))
        .min_by(|a, b| max_norm(a).cmp(&max_norm(b)).then_with(|| a.cmp(b)))
}

/// Integer basis of the rational kernel of the linear-form matrix.
fn exact_kernel(values: &[Expr]) -> Vec<Vec<BigInt>> {
    let forms: Vec<LinearForm> = values.iter().map(linear_form).collect();
    let mut atoms: BTreeMap<u64, usize> = BTreeMap::new();
    for f in &forms {
        for id in f.terms.keys() {
            let next = atoms.len();
            atoms.entry(*id).or_insert(next);
        }
    }
    let cols = values.len() + 1;
    let nrows = atoms.len() + 1;
    let mut m = vec![vec![Rat::zero(); cols]; nrows];
    m[0][0] = Rat::one();
    for (j, f) in forms.iter().enumerate() {
        m[0][j + 1] = f.constant.clone();
        for (id, (_, c)) in &f.terms {
            m[atoms[id] + 1][j + 1] = c.clone();
        }
    }
    nullspace(m, cols)
        .into_iter()
        .map(|v| {
            let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            primitive(v.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect())
        })
        .collect()
}

fn nullspace(mut m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// LLL-reduced kernel basis together with its small combinations.
fn small_combinations(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    lll(&mut basis);
    let d = basis.len();
    if d == 1 || d > 6 {
        return basis;
    }
    let n = basis[0].len();
    let mut out = vec![];
    let total = 3usize.pow(d as u32);
    for code in 1..total {
        let mut v = vec![BigInt::zero(); n];
        let mut c = code;
        for row in &basis {
            let k = (c % 3) as i64 - 1;
            c /= 3;
            if k != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x += y * k;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

fn enclosures(values: &[Expr], bits: u32, refiner: &Refiner) -> Option<Vec<CInterval>> {
    let target = Dyadic::pow2(-(bits as i64));
    values.iter().map(|v| v.eval(&target, refiner).ok()).collect()
}

fn scaled(d: &Dyadic, bits: u32) -> BigInt {
    d.mul_pow2(bits as i64).floor()
}

fn lattice_candidates(values: &[Expr], bits: u32, refiner: &Refiner) -> Option<Vec<Vec<BigInt>>> {
    let enc = enclosures(values, bits + 16, refiner)?;
    let complex = values.iter().any(|v| !v.is_real());
    let n = values.len() + 1;
    let mut basis = vec![];
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = BigInt::one();
        let (re, im) = if i == 0 {
            (Dyadic::one(), Dyadic::zero())
        } else {
            (enc[i - 1].re.mid(), enc[i - 1].im.mid())
        };
        row.push(scaled(&re, bits));
        if complex {
            row.push(scaled(&im, bits));
        }
        basis.push(row);
    }
    lll(&mut basis);
    Some(basis.into_iter().map(|r| r[..n].to_vec()).collect())
}

fn sum_enclosure(values: &[Expr], coeffs: &[BigInt], bits: u32, refiner: &Refiner) -> Option<CInterval> {
    let weight: u64 = coeffs.iter().map(|c| c.abs().bits()).max().unwrap_or(0) + 8;
    let enc = enclosures(values, bits + weight as u32, refiner)?;
    let prec = bits + weight as u32 + 32;
    let mut acc = CInterval::from_rat(&Rat::from_integer(coeffs[0].clone()), prec);
    for (x, n) in enc.iter().zip(&coeffs[1..]) {
        let k = CInterval::real(RInterval::from_rat(&Rat::from_integer(n.clone()), prec));
        acc = acc.add(&k.mul(x, prec), prec);
    }
    Some(acc)
}

fn within(z: &CInterval, bits: u32) -> bool {
    let bound = Dyadic::pow2(-(bits as i64));
    z.re.mag() < bound && z.im.mag() < bound
}

/// `|n_0 + Σ n_j x_j| < 2^-bits`, and `< 2^-2bits` when re-evaluated at twice the precision.
pub fn verify_numeric(values: &[Expr], coeffs: &[BigInt], bits: u32, refiner: &Refiner) -> bool {
    let first = sum_enclosure(values, coeffs, bits, refiner).is_some_and(|z| within(&z, bits));
    first && sum_enclosure(values, coeffs, 2 * bits, refiner).is_some_and(|z| within(&z, 2 * bits))
}

/// Exact check of a relation: the combined linear form vanishes, or all
/// surviving atoms are principal logarithms of positive rationals to a common
/// base whose arguments multiply out exactly.
pub fn verify_symbolic(values: &[Expr], coeffs: &[BigInt]) -> bool {
    let total = combine(values, coeffs);
    if total.is_zero() {
        return true;
    }
    let mut base: Option<&Expr> = None;
    let mut logs: Vec<(Rat, Rat)> = vec![];
    for (atom, c) in total.terms.values() {
        let Node::Log { base: b, arg, branch: 0 } = atom.node() else { return false };
        let Some(w) = arg.as_rat().filter(|w| w.is_positive()) else { return false };
        match base {
            Some(prev) if prev != b => return false,
            _ => base = Some(b),
        }
        logs.push((w.clone(), c.clone()));
    }
    let base = base.expect("nonzero form has atoms");
    // Σ c_a Log w_a + c = 0 with all Log w_a real
    let denom = logs.iter().fold(total.constant.denom().clone(), |l, (_, c)| l.lcm(c.denom()));
    let as_int = |c: &Rat| (c * Rat::from_integer(denom.clone())).to_integer();
    let mut product = Rat::one();
    for (w, c) in &logs {
        let Some(k) = as_int(c).to_i32() else { return false };
        product *= pow_rat(w, k);
    }
    if total.constant.is_zero() {
        return product.is_one();
    }
    // c ≠ 0 needs a positive rational base: Π w^k · b^{k_c} = 1
    let Some(b) = base.as_rat().filter(|b| b.is_positive()) else { return false };
    let Some(kc) = as_int(&total.constant).to_i32() else { return false };
    (product * pow_rat(b, kc)).is_one()
}

fn pow_rat(r: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        Rat::one() / num_traits::pow(r.clone(), (-k) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Session;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exact_examples() {
        let s = Session::new();
        let r2 = s.sqrt(&s.int(2)).unwrap();
        let x = s.add(&s.int(1), &s.scale(Rat::from_integer(2.into()), &r2)).unwrap();
        let rel = detect_relation(&[r2.clone(), x], &BigInt::from(100), 100).unwrap();
        assert!(rel.is_exact());
        assert_eq!(rel.coefficients, ints(&[-1, -2, 1]));
        let rel = detect_relation(&[s.frac(1, 3)], &BigInt::from(100), 100).unwrap();
        assert_eq!(rel.coefficients, ints(&[-1, 3]));
    }

    #[test]
    fn no_relation_for_sqrt2() {
        let s = Session::new();
        let r2 = s.sqrt(&s.int(2)).unwrap();
        assert!(detect_relation(&[r2], &BigInt::from(1_000_000), 200).is_none());
    }

    #[test]
    fn log_relation_is_upgraded_to_exact() {
        let s = Session::new();
        let l = |w| s.log(&s.int(-1), &s.int(w), 0).unwrap();
        let rel = detect_relation(&[l(2), l(3), l(6)], &BigInt::from(1000), 200).unwrap();
        assert_eq!(rel.coefficients, ints(&[0, -1, -1, 1]));
        assert!(rel.is_exact());
    }

    #[test]
    fn heuristic_relation_between_sqrt_products() {
        let s = Session::new();
        let a = s.parse("sqrt(2) * sqrt(3)").unwrap();
        let b = s.parse("sqrt(6)").unwrap();
        let rel = detect_relation(&[a, b], &BigInt::from(1000), 120).unwrap();
        assert_eq!(rel.coefficients, ints(&[0, -1, 1]));
        assert_eq!(rel.confidence, Confidence::Heuristic { precision_bits: 120 });
    }
}
