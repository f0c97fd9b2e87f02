//! Change-of-base normalization and the Euler bridge.

use std::collections::HashMap;

use crate::numeric::{CInterval, NumError, Rat};

use super::{Expr, IrError, Node, Session};

/// `(-1)^x` split into real and imaginary parts.
#[derive(Clone, Debug)]
pub struct EulerForm {
    pub cos_part: Expr,
    pub sin_part: Expr,
}

impl EulerForm {
    /// Enclosure of `cos_part² + sin_part²` at `prec` bits (should contain 1).
    pub fn norm_enclosure(&self, prec: u32) -> Result<CInterval, NumError> {
        let c = self.cos_part.enclose(prec)?;
        let s = self.sin_part.enclose(prec)?;
        Ok(c.mul(&c, prec).add(&s.mul(&s, prec), prec))
    }
}

impl Session {
    /// Rebuild `e` bottom-up, mapping each node through `f` after its
    /// children have been rebuilt.
    pub fn rebuild(
        &self,
        e: &Expr,
        f: &mut dyn FnMut(&Session, &Node) -> Result<Option<Expr>, IrError>,
    ) -> Result<Expr, IrError> {
        let mut memo: HashMap<Expr, Expr> = HashMap::new();
        for n in e.postorder() {
            let m = |c: &Expr| memo[c].clone();
            let node = match n.node() {
                Node::Rat(_) | Node::Const(_) => n.node().clone(),
                Node::Field(op, a, b) => Node::Field(*op, m(a), m(b)),
                Node::Sqrt(a) => Node::Sqrt(m(a)),
                Node::PolyRoot { coeffs, selector } => Node::PolyRoot {
                    coeffs: coeffs.iter().map(m).collect(),
                    selector: selector.clone(),
                },
                Node::Exp { base, exponent } => Node::Exp { base: m(base), exponent: m(exponent) },
                Node::Log { base, arg, branch } => Node::Log { base: m(base), arg: m(arg), branch: *branch },
                Node::SinPi(a) => Node::SinPi(m(a)),
                Node::ArcsinPi(a) => Node::ArcsinPi(m(a)),
            };
            let out = match f(self, &node)? {
                Some(x) => x,
                None => {
                    if &node == n.node() {
                        n.clone()
                    } else {
                        self.mk(node)?
                    }
                }
            };
            memo.insert(n.clone(), out);
        }
        Ok(memo[e].clone())
    }

    /// Normalize every power and logarithm to the session base:
    /// `x^y → b^{y·log_b x}` and `log_x y → log_b y / log_b x`.
    pub fn rewrite_elprop(&self, e: &Expr) -> Result<Expr, IrError> {
        let b = self.base().clone();
        self.rebuild(e, &mut |s, node| {
            Ok(match node {
                Node::Exp { base, exponent } if base != &b => {
                    let l = s.log(&b, base, 0)?;
                    Some(s.pow(&b, &s.mul(exponent, &l)?)?)
                }
                Node::Log { base, arg, branch } if base != &b => {
                    let num = s.log(&b, arg, *branch)?;
                    let den = s.log(&b, base, 0)?;
                    Some(s.div(&num, &den)?)
                }
                _ => None,
            })
        })
    }

    /// Replace `sin_pi` and `arcsin_pi` nodes by their exponential forms:
    /// `sin πx = ((-1)^x - (-1)^{-x}) / (2i)` and
    /// `arcsin(x)/π = log_{-1}(ix + √(1 - x²))`.
    pub fn expand_trig(&self, e: &Expr) -> Result<Expr, IrError> {
        self.rebuild(e, &mut |s, node| {
            Ok(match node {
                Node::SinPi(x) => Some(s.sin_pi_exponential(x)?),
                Node::ArcsinPi(x) => Some(s.arcsin_pi_logarithmic(x)?),
                _ => None,
            })
        })
    }

    fn sin_pi_exponential(&self, x: &Expr) -> Result<Expr, IrError> {
        let m1 = self.int(-1);
        let a = self.pow(&m1, x)?;
        let b = self.pow(&m1, &self.neg(x))?;
        let two_i = self.scale(Rat::from_integer(2.into()), &self.i());
        self.div(&self.sub(&a, &b)?, &two_i)
    }

    fn arcsin_pi_logarithmic(&self, x: &Expr) -> Result<Expr, IrError> {
        let one = self.int(1);
        let c = self.sqrt(&self.sub(&one, &self.mul(x, x)?)?)?;
        let w = self.add(&self.mul(&self.i(), x)?, &c)?;
        self.log(&self.int(-1), &w, 0)
    }

    /// `(-1)^x = cos πx + i sin πx` as separate real parts.
    pub fn euler_split(&self, x: &Expr) -> Result<EulerForm, IrError> {
        Ok(EulerForm { cos_part: self.cos_pi(x)?, sin_part: self.sin_pi(x)? })
    }
}
