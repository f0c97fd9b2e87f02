use std::fmt;

use serde::{Serialize, Serializer};

use super::{ConstKind, Node, Session};

/// A tower level: `Some(n)` for level `n`, `None` for ⊤ (not reachable by this syntax).
pub type Level = Option<u32>;

/// Syntactic upper bounds on membership in the S, A, SA and EL towers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TowerTag {
    pub s: Level,
    pub a: Level,
    pub sa: Level,
    pub el: Level,
}

fn max(a: Level, b: Level) -> Level {
    Some(a?.max(b?))
}

fn succ(a: Level) -> Level {
    a.map(|v| v + 1)
}

fn at_least_one(a: Level) -> Level {
    a.map(|v| v.max(1))
}

pub fn level_text(l: Level) -> String {
    match l {
        Some(v) => v.to_string(),
        None => "top".to_string(),
    }
}

impl TowerTag {
    pub fn rational() -> Self {
        TowerTag { s: Some(0), a: Some(0), sa: Some(0), el: Some(0) }
    }

    pub fn top() -> Self {
        TowerTag { s: None, a: None, sa: None, el: None }
    }

    pub fn join(&self, o: &TowerTag) -> TowerTag {
        TowerTag { s: max(self.s, o.s), a: max(self.a, o.a), sa: max(self.sa, o.sa), el: max(self.el, o.el) }
    }

    /// Componentwise `self ≥ o` with ⊤ above every level.
    pub fn dominates(&self, o: &TowerTag) -> bool {
        fn ge(a: Level, b: Level) -> bool {
            match (a, b) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(x), Some(y)) => x >= y,
            }
        }
        ge(self.s, o.s) && ge(self.a, o.a) && ge(self.sa, o.sa) && ge(self.el, o.el)
    }
}

impl fmt::Display for TowerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} a={} sa={} el={}",
            level_text(self.s),
            level_text(self.a),
            level_text(self.sa),
            level_text(self.el)
        )
    }
}

impl Serialize for TowerTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TowerTag", 4)?;
        st.serialize_field("s_level", &level_text(self.s))?;
        st.serialize_field("a_level", &level_text(self.a))?;
        st.serialize_field("sa_level", &level_text(self.sa))?;
        st.serialize_field("el_level", &level_text(self.el))?;
        st.end()
    }
}

/// Tag of a new node from its children's tags. `real` is the node's own
/// realness flag, which for `Sqrt` also certifies a non-negative radicand.
pub(super) fn compute(session: &Session, node: &Node, real: bool) -> TowerTag {
    let join_children = || {
        node.children().iter().fold(TowerTag::rational(), |t, c| t.join(c.tag()))
    };
    match node {
        Node::Rat(_) => TowerTag::rational(),
        Node::Const(ConstKind::Pi) | Node::Const(ConstKind::E) => TowerTag::top(),
        Node::Field(..) => join_children(),
        Node::Sqrt(x) => {
            let t = x.tag();
            if real {
                TowerTag { s: succ(t.s), a: succ(t.a), sa: succ(t.sa), el: at_least_one(t.el) }
            } else {
                TowerTag { s: None, a: None, sa: None, el: at_least_one(t.el) }
            }
        }
        Node::PolyRoot { coeffs, .. } => {
            let t = join_children();
            let degree = coeffs.len() - 1;
            let real_coeffs = coeffs.iter().all(|c| c.is_real());
            let el = if degree <= 1 { t.el } else { at_least_one(t.el) };
            if real && real_coeffs && degree <= 2 {
                let bump = |l: Level| if degree == 2 { succ(l) } else { l };
                TowerTag { s: bump(t.s), a: bump(t.a), sa: bump(t.sa), el }
            } else {
                TowerTag { s: None, a: None, sa: None, el }
            }
        }
        Node::Exp { base, exponent } => {
            let z = exponent.tag();
            let minus_one = base.as_rat().is_some_and(|r| r == &crate::numeric::rat_int(-1));
            let el = if base == session.base() {
                succ(z.el)
            } else {
                succ(max(z.el, succ(base.tag().el)))
            };
            if minus_one && exponent.is_real() {
                // cos πz + i sin πz with both parts one S-step above z
                TowerTag { s: succ(z.s), a: None, sa: succ(z.sa), el }
            } else {
                TowerTag { s: None, a: None, sa: None, el }
            }
        }
        Node::Log { base, arg, .. } => {
            let el = if base == session.base() {
                succ(arg.tag().el)
            } else {
                succ(max(arg.tag().el, base.tag().el))
            };
            TowerTag { s: None, a: None, sa: None, el }
        }
        Node::SinPi(x) => {
            let t = x.tag();
            TowerTag { s: succ(t.s), a: None, sa: succ(t.sa), el: succ(t.el) }
        }
        Node::ArcsinPi(x) => {
            let t = x.tag();
            TowerTag { s: None, a: succ(t.a), sa: succ(t.sa), el: succ(at_least_one(t.el)) }
        }
    }
}
