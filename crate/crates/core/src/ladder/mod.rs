//! Ladders over the session base: descent, reduction and conditional ascent.

mod lll;
mod relation;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ir::{Expr, IrError, Node, Session};
use crate::numeric::{Dyadic, Rat};
use crate::rules::{Classifier, Status, Verdict};

pub use lll::{canonical_sign, lll, max_norm};
pub use relation::{
    detect_relation, detect_relation_with, linear_form, verify_numeric, verify_symbolic, Confidence, LinearForm,
    Relation, RelationSearch,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RungKind {
    /// `a_k` is algebraic over `F_{k-1}`.
    ElementAlgebraic,
    /// `b^{a_k}` is algebraic over `F_{k-1}`.
    ExponentialAlgebraic,
}

/// Structural reason a rung satisfies its alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungWitness {
    /// The `exp` or `log` node that introduced the rung.
    pub source: Expr,
    /// Earlier rungs occurring in the defining expression (`a_k` itself for an
    /// element rung, `b^{a_k}` for an exponential rung).
    pub depends_on: Vec<Expr>,
    /// Branch index of a logarithm rung.
    pub branch: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rung {
    pub value: Expr,
    pub kind: RungKind,
    pub witness: RungWitness,
}

impl Rung {
    /// The defining expression that must lie in `F̄_{k-1}`.
    pub fn defining_expr(&self, s: &Session) -> Result<Expr, IrError> {
        match self.kind {
            RungKind::ElementAlgebraic => Ok(self.value.clone()),
            RungKind::ExponentialAlgebraic => s.pow(s.base(), &self.value),
        }
    }
}

/// A rung removed by reduction: `a_k = constant + Σ terms`.
#[derive(Clone, Debug)]
pub struct Removal {
    pub rung: Rung,
    /// Position in the ladder before reduction.
    pub original_index: usize,
    /// Over `(1, kept rungs in order, a_k)`.
    pub relation: Relation,
    pub constant: Rat,
    /// `(index into the reduced rungs, coefficient)`.
    pub terms: Vec<(usize, Rat)>,
}

#[derive(Clone, Debug)]
pub struct Ladder {
    pub base: Expr,
    pub rungs: Vec<Rung>,
    pub removed: Vec<Removal>,
    pub reduced: bool,
    /// The described number after base normalization.
    pub subject: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("node kind outside the algebraically based tower: {0}")]
    UnsupportedNode(String),
    #[error("ladder is not reduced: relation {0:?} holds among its rungs")]
    NotReduced(Vec<String>),
    #[error("removal identity failed for rung {0}")]
    RemovalIdentity(usize),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// Bounds used by [`reduce`] and [`ascend`].
#[derive(Clone, Debug)]
pub struct LadderConfig {
    pub max_coeff: BigInt,
    pub precision_bits: u32,
    /// Width for the removal identity check.
    pub identity_bits: u32,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { max_coeff: BigInt::from(1000), precision_bits: 256, identity_bits: 40 }
    }
}

impl Ladder {
    pub fn empty(base: Expr) -> Self {
        Ladder { base, rungs: vec![], removed: vec![], reduced: false, subject: None }
    }

    /// Every rung's defining expression uses only earlier rungs.
    pub fn is_valid(&self) -> bool {
        let mut seen: Vec<&Expr> = vec![];
        for r in &self.rungs {
            if !r.witness.depends_on.iter().all(|d| seen.contains(&d) || self.was_removed(d)) {
                return false;
            }
            let source_ok = match (r.kind, r.witness.source.node()) {
                (RungKind::ElementAlgebraic, Node::Exp { exponent, .. }) => exponent == &r.value,
                (RungKind::ExponentialAlgebraic, Node::Log { .. }) => r.witness.source == r.value,
                (RungKind::ElementAlgebraic, _) => r.witness.source == r.value,
                _ => false,
            };
            if !source_ok {
                return false;
            }
            seen.push(&r.value);
        }
        true
    }

    fn was_removed(&self, e: &Expr) -> bool {
        self.removed.iter().any(|r| &r.rung.value == e)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_sexpr(),
            "rungs": self.rungs.iter().map(rung_json).collect::<Vec<_>>(),
            "reduced": self.reduced,
            "removed": self.removed.iter().map(|r| json!({
                "original_index": r.original_index,
                "rung": rung_json(&r.rung),
                "relation": serde_json::to_value(&r.relation).expect("relation serializes"),
                "constant": crate::ir::rat_text(&r.constant),
                "terms": r.terms.iter().map(|(i, q)| json!([i, crate::ir::rat_text(q)])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "subject": self.subject.as_ref().map(|e| e.to_sexpr()),
        })
    }
}

fn rung_json(r: &Rung) -> Value {
    json!({
        "value": r.value.to_sexpr(),
        "kind": r.kind,
        "source": r.witness.source.to_sexpr(),
        "depends_on": r.witness.depends_on.iter().map(|e| e.to_sexpr()).collect::<Vec<_>>(),
        "branch": r.witness.branch,
    })
}

fn rungs_in(e: &Expr, rungs: &[Rung]) -> Vec<Expr> {
    let nodes = e.postorder();
    rungs
        .iter()
        .filter(|r| nodes.contains(&r.witness.source))
        .map(|r| r.value.clone())
        .collect()
}

/// Build a ladder whose top field contains `xi`.
pub fn descend(s: &Session, xi: &Expr) -> Result<Ladder, LadderError> {
    let norm = s.rewrite_elprop(&s.expand_trig(xi)?)?;
    let mut ladder = Ladder::empty(s.base().clone());
    for n in norm.postorder() {
        match n.node() {
            Node::Const(_) | Node::SinPi(_) | Node::ArcsinPi(_) => {
                return Err(LadderError::UnsupportedNode(n.to_sexpr()));
            }
            Node::Exp { base, exponent } => {
                if base != s.base() {
                    return Err(LadderError::UnsupportedNode(n.to_sexpr()));
                }
                if exponent.is_rat() || ladder.rungs.iter().any(|r| &r.value == exponent) {
                    continue;
                }
                let depends_on = rungs_in(exponent, &ladder.rungs);
                ladder.rungs.push(Rung {
                    value: exponent.clone(),
                    kind: RungKind::ElementAlgebraic,
                    witness: RungWitness { source: n.clone(), depends_on, branch: None },
                });
            }
            Node::Log { base, arg, branch } => {
                if base != s.base() {
                    return Err(LadderError::UnsupportedNode(n.to_sexpr()));
                }
                if ladder.rungs.iter().any(|r| r.value == n) {
                    continue;
                }
                let depends_on = rungs_in(arg, &ladder.rungs);
                ladder.rungs.push(Rung {
                    value: n.clone(),
                    kind: RungKind::ExponentialAlgebraic,
                    witness: RungWitness { source: n.clone(), depends_on, branch: Some(*branch) },
                });
            }
            _ => {}
        }
    }
    ladder.subject = Some(norm);
    Ok(ladder)
}

/// `b^q · Π b^{q_j a_j}`.
fn removal_product(s: &Session, constant: &Rat, terms: &[(Expr, Rat)]) -> Result<Expr, IrError> {
    let b = s.base();
    let mut acc = s.pow(b, &s.rat(constant.clone()))?;
    for (a, q) in terms {
        let f = s.pow(b, &s.scale(q.clone(), a))?;
        acc = s.mul(&acc, &f)?;
    }
    Ok(acc)
}

fn linear_expr(s: &Session, constant: &Rat, terms: &[(Expr, Rat)]) -> Result<Expr, IrError> {
    let mut acc = s.rat(constant.clone());
    for (a, q) in terms {
        acc = s.add(&acc, &s.scale(q.clone(), a))?;
    }
    Ok(acc)
}

/// Remove rungs that are ℚ-linear combinations of earlier kept rungs, scanning
/// from the lowest index. Each removal identity is checked by enclosure overlap.
pub fn reduce(s: &Session, l: &Ladder, cfg: &LadderConfig) -> Result<Ladder, LadderError> {
    let mut kept: Vec<Rung> = vec![];
    let mut removed: Vec<Removal> = l.removed.clone();
    let opts = RelationSearch {
        max_coeff: cfg.max_coeff.clone(),
        precision_bits: cfg.precision_bits,
        require_last: true,
    };
    for (k, rung) in l.rungs.iter().enumerate() {
        let mut values: Vec<Expr> = kept.iter().map(|r| r.value.clone()).collect();
        values.push(rung.value.clone());
        let Some(rel) = detect_relation_with(&values, &opts, s.refiner()) else {
            kept.push(rung.clone());
            continue;
        };
        let n = rel.coefficients.len();
        let nk = Rat::from_integer(rel.coefficients[n - 1].clone());
        let constant = -Rat::from_integer(rel.coefficients[0].clone()) / &nk;
        let terms: Vec<(usize, Rat)> = (1..n - 1)
            .filter(|&j| !rel.coefficients[j].is_zero())
            .map(|j| (j - 1, -Rat::from_integer(rel.coefficients[j].clone()) / &nk))
            .collect();
        let removal = Removal { rung: rung.clone(), original_index: k, relation: rel, constant, terms };
        if !removal_identity_holds(s, &removal, &kept, cfg.identity_bits)? {
            return Err(LadderError::RemovalIdentity(k));
        }
        removed.push(removal);
    }
    let subject = match &l.subject {
        Some(x) => Some(rewrite_subject(s, x, &removed, &kept)?),
        None => None,
    };
    Ok(Ladder { base: l.base.clone(), rungs: kept, removed, reduced: true, subject })
}

fn removal_terms(r: &Removal, kept: &[Rung]) -> Vec<(Expr, Rat)> {
    r.terms.iter().map(|(i, q)| (kept[*i].value.clone(), q.clone())).collect()
}

/// `b^{a_k}` and `b^q·Π b^{q_j a_j}` have overlapping enclosures at width `2^-bits`.
pub fn removal_identity_holds(s: &Session, r: &Removal, kept: &[Rung], bits: u32) -> Result<bool, IrError> {
    let lhs = s.pow(s.base(), &r.rung.value)?;
    let rhs = removal_product(s, &r.constant, &removal_terms(r, kept))?;
    let target = Dyadic::pow2(-(bits as i64));
    let (a, b) = (lhs.eval(&target, s.refiner())?, rhs.eval(&target, s.refiner())?);
    Ok(a.overlaps(&b))
}

/// Express the subject over the kept rungs: removed element rungs become
/// products of powers, removed logarithm rungs become linear combinations.
fn rewrite_subject(s: &Session, x: &Expr, removed: &[Removal], kept: &[Rung]) -> Result<Expr, IrError> {
    let mut subst: HashMap<Expr, Expr> = HashMap::new();
    for r in removed {
        let terms = removal_terms(r, kept);
        let repl = match r.rung.kind {
            RungKind::ElementAlgebraic => removal_product(s, &r.constant, &terms)?,
            RungKind::ExponentialAlgebraic => linear_expr(s, &r.constant, &terms)?,
        };
        subst.insert(r.rung.witness.source.clone(), repl);
    }
    let mut memo: HashMap<Expr, Expr> = HashMap::new();
    for n in x.postorder() {
        if let Some(v) = subst.get(&n) {
            memo.insert(n, v.clone());
            continue;
        }
        let m = |c: &Expr| memo[c].clone();
        let node = match n.node() {
            Node::Rat(_) | Node::Const(_) => n.node().clone(),
            Node::Field(op, a, b) => Node::Field(*op, m(a), m(b)),
            Node::Sqrt(a) => Node::Sqrt(m(a)),
            Node::PolyRoot { coeffs, selector } => {
                Node::PolyRoot { coeffs: coeffs.iter().map(m).collect(), selector: selector.clone() }
            }
            Node::Exp { base, exponent } => Node::Exp { base: m(base), exponent: m(exponent) },
            Node::Log { base, arg, branch } => Node::Log { base: m(base), arg: m(arg), branch: *branch },
            Node::SinPi(a) => Node::SinPi(m(a)),
            Node::ArcsinPi(a) => Node::ArcsinPi(m(a)),
        };
        let out = if &node == n.node() { n.clone() } else { s.mk(node)? };
        memo.insert(n, out);
    }
    Ok(memo[x].clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    /// `b_k = a_k`.
    Rung,
    /// `b_k = b^{a_k}`.
    Power,
}

#[derive(Clone, Debug)]
pub struct AscentChoice {
    pub rung: usize,
    pub choice: Choice,
    pub value: Expr,
    /// Unconditional verdict on `value` from the rule base, when one applies.
    pub unconditional: Option<Verdict>,
}

#[derive(Clone, Debug)]
pub struct AscentReport {
    pub base: Expr,
    pub choices: Vec<AscentChoice>,
    pub degree: usize,
    /// Always true: the report assumes the Schanuel conjecture.
    pub conditional: bool,
    pub statement: String,
    pub base_note: String,
}

impl AscentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_sexpr(),
            "choices": self.choices.iter().map(|c| json!({
                "rung": c.rung,
                "choice": c.choice,
                "value": c.value.to_sexpr(),
                "new_transcendental": true,
                "unconditional": c.unconditional.as_ref().map(|v| serde_json::to_value(v).expect("verdict serializes")),
            })).collect::<Vec<_>>(),
            "degree": self.degree,
            "conditional": self.conditional,
            "statement": self.statement,
            "base_note": self.base_note,
        })
    }
}

/// Per-rung selection of the new transcendental, conditional on Schanuel.
pub fn ascend(s: &Session, l: &Ladder, cfg: &LadderConfig) -> Result<AscentReport, LadderError> {
    if !l.reduced && !l.rungs.is_empty() {
        let values: Vec<Expr> = l.rungs.iter().map(|r| r.value.clone()).collect();
        let opts = RelationSearch {
            max_coeff: cfg.max_coeff.clone(),
            precision_bits: cfg.precision_bits,
            require_last: false,
        };
        if let Some(rel) = detect_relation_with(&values, &opts, s.refiner()) {
            return Err(LadderError::NotReduced(rel.coefficients.iter().map(|c| c.to_string()).collect()));
        }
    }
    let mut classifier = Classifier::new(s);
    let mut choices = vec![];
    for (k, r) in l.rungs.iter().enumerate() {
        let (choice, value) = match r.kind {
            RungKind::ExponentialAlgebraic => (Choice::Rung, r.value.clone()),
            RungKind::ElementAlgebraic => (Choice::Power, s.pow(&l.base, &r.value)?),
        };
        let v = classifier.classify(&value);
        let unconditional = (v.status == Status::Transcendental && !v.conditional).then_some(v);
        choices.push(AscentChoice { rung: k, choice, value, unconditional });
    }
    let m = choices.len();
    let statement = if m == 0 {
        "no rungs: the subject lies in the algebraic closure of Q".to_string()
    } else if m == 1 {
        "b_1 is algebraically independent of ln b, conditional on the Schanuel conjecture; \
         conditional transcendence degree 1"
            .to_string()
    } else {
        format!(
            "b_1..b_{m} are algebraically independent of each other and of ln b, \
             conditional on the Schanuel conjecture; conditional transcendence degree {m}"
        )
    };
    let base_note = if m == 0 {
        if l.base.as_rat().is_some_and(|r| r == &-Rat::one()) {
            "ln b = i*pi is not algebraic (Lindemann)".to_string()
        } else {
            "ln b is not algebraic for algebraic b other than 0 and 1 (Lindemann)".to_string()
        }
    } else {
        format!("ln b is not in the algebraic closure of F_{m}")
    };
    Ok(AscentReport { base: l.base.clone(), choices, degree: m, conditional: true, statement, base_note })
}

/// `q + Σ q_j a_j` as an expression, for callers checking removals.
pub fn removal_linear_expr(s: &Session, r: &Removal, kept: &[Rung]) -> Result<Expr, IrError> {
    linear_expr(s, &r.constant, &removal_terms(r, kept))
}

#[cfg(test)]
mod tests;
