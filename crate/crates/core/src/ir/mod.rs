//! Exact expression DAG with hash-consing, tower tags and certified evaluation.

mod build;
mod eval;
mod rewrite;
mod root;
mod sexpr;
mod tags;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::numeric::{CInterval, NumError, Rat, Refiner};

pub use rewrite::EulerForm;
pub use sexpr::{rat_text, ParseError};
pub use tags::{Level, TowerTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldOp {
    pub fn name(self) -> &'static str {
        match self {
            FieldOp::Add => "add",
            FieldOp::Sub => "sub",
            FieldOp::Mul => "mul",
            FieldOp::Div => "div",
        }
    }
}

/// Distinguished transcendental constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstKind {
    Pi,
    E,
}

/// One node of the DAG. Children compare by identity, so structurally equal
/// nodes over shared children hash to the same table entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Rat(Rat),
    Field(FieldOp, Expr, Expr),
    Sqrt(Expr),
    /// The root of `Σ coeffs[i]·x^i` lying in `selector`.
    PolyRoot { coeffs: Vec<Expr>, selector: CInterval },
    /// Principal `base^exponent = exp(exponent · Log base)`.
    Exp { base: Expr, exponent: Expr },
    /// `(Log arg + 2πi·branch) / Log base`.
    Log { base: Expr, arg: Expr, branch: i64 },
    /// `sin(π·x)` for real `x`.
    SinPi(Expr),
    /// `arcsin(x)/π` for real `x ∈ [-1, 1]`.
    ArcsinPi(Expr),
    Const(ConstKind),
}

impl Node {
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Node::Rat(_) | Node::Const(_) => vec![],
            Node::Field(_, a, b) => vec![a, b],
            Node::Sqrt(a) | Node::SinPi(a) | Node::ArcsinPi(a) => vec![a],
            Node::PolyRoot { coeffs, .. } => coeffs.iter().collect(),
            Node::Exp { base, exponent } => vec![base, exponent],
            Node::Log { base, arg, .. } => vec![base, arg],
        }
    }

    /// Short kind name, as used in the S-expression form.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Node::Rat(_) => "rat",
            Node::Field(op, ..) => op.name(),
            Node::Sqrt(_) => "sqrt",
            Node::PolyRoot { .. } => "root",
            Node::Exp { .. } => "exp",
            Node::Log { .. } => "log",
            Node::SinPi(_) => "sin_pi",
            Node::ArcsinPi(_) => "arcsin_pi",
            Node::Const(_) => "const",
        }
    }
}

pub(crate) struct ExprData {
    node: Node,
    tag: TowerTag,
    real: bool,
    id: u64,
    /// Verified isolating box for `PolyRoot` nodes.
    aux: Option<CInterval>,
    cache: Mutex<Option<(u32, CInterval)>>,
}

/// Shared handle to an interned node.
#[derive(Clone)]
pub struct Expr(Arc<ExprData>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state);
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn tag(&self) -> &TowerTag {
        &self.0.tag
    }

    /// True when the value is known to be real from the construction.
    pub fn is_real(&self) -> bool {
        self.0.real
    }

    /// Creation index within the session; stable for a fixed build order.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match &self.0.node {
            Node::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_rat(&self) -> bool {
        self.as_rat().is_some()
    }

    pub fn children(&self) -> Vec<&Expr> {
        self.0.node.children()
    }

    /// All distinct nodes reachable from `self`, children before parents.
    pub fn postorder(&self) -> Vec<Expr> {
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![];
        let mut stack: Vec<(Expr, bool)> = vec![(self.clone(), false)];
        while let Some((e, expanded)) = stack.pop() {
            if expanded {
                out.push(e);
                continue;
            }
            if !seen.insert(e.clone()) {
                continue;
            }
            stack.push((e.clone(), true));
            for c in e.children().into_iter().rev() {
                if !seen.contains(c) {
                    stack.push((c.clone(), false));
                }
            }
        }
        out
    }

    /// True if any node satisfies `pred`.
    pub fn any_node(&self, pred: impl Fn(&Node) -> bool) -> bool {
        self.postorder().iter().any(|e| pred(e.node()))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", sexpr::to_sexpr(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", sexpr::to_sexpr(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("invalid base: exponential and logarithm bases must not be 0 or 1")]
    InvalidBase,
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("argument is not real")]
    NonRealArgument,
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("root selection failed: {0}")]
    RootSelection(String),
    #[error("session base must be built from rationals, field operations and radicals")]
    NonAlgebraicBase,
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Construction context: the session base `b`, the hash-consing table and the
/// refinement schedule.
pub struct Session {
    base: Expr,
    refiner: Refiner,
    table: Mutex<HashMap<Node, Expr>>,
    next_id: AtomicU64,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl fmt::Debug for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session").field("base", &self.base).field("refiner", &self.refiner).finish()
    }
}

impl Session {
    /// Session with base `-1` and the environment's precision ceiling.
    pub fn new() -> Self {
        Session::with_refiner(Refiner::from_env())
    }

    pub fn with_refiner(refiner: Refiner) -> Self {
        let minus_one = Node::Rat(crate::numeric::rat_int(-1));
        let data = ExprData {
            node: minus_one.clone(),
            tag: TowerTag::rational(),
            real: true,
            id: 0,
            aux: None,
            cache: Mutex::new(None),
        };
        let base = Expr(Arc::new(data));
        let mut table = HashMap::new();
        table.insert(minus_one, base.clone());
        Session {
            base,
            refiner,
            table: Mutex::new(table),
            next_id: AtomicU64::new(1),
        }
    }

    pub fn base(&self) -> &Expr {
        &self.base
    }

    pub fn refiner(&self) -> &Refiner {
        &self.refiner
    }

    /// Replace the session base. The base must be algebraic by construction
    /// and different from 0 and 1.
    pub fn set_base(&mut self, base: Expr) -> Result<(), IrError> {
        if let Some(r) = base.as_rat() {
            if r == &crate::numeric::rat_int(0) || r == &crate::numeric::rat_int(1) {
                return Err(IrError::InvalidBase);
            }
        }
        let algebraic = base
            .postorder()
            .iter()
            .all(|e| matches!(e.node(), Node::Rat(_) | Node::Field(..) | Node::Sqrt(_) | Node::PolyRoot { .. }));
        if !algebraic {
            return Err(IrError::NonAlgebraicBase);
        }
        self.base = base;
        Ok(())
    }

    /// Number of distinct interned nodes.
    pub fn node_count(&self) -> usize {
        self.table.lock().unwrap().len()
    }

    fn intern(&self, node: Node, aux: Option<CInterval>, real: bool) -> Expr {
        let mut table = self.table.lock().unwrap();
        if let Some(e) = table.get(&node) {
            return e.clone();
        }
        let tag = tags::compute(self, &node, real);
        let data = ExprData {
            node: node.clone(),
            tag,
            real,
            id: self.next_id.fetch_add(1, AtomicOrdering::Relaxed),
            aux,
            cache: Mutex::new(None),
        };
        let e = Expr(Arc::new(data));
        table.insert(node, e.clone());
        e
    }

    /// Look up an existing node without creating it.
    fn lookup(&self, node: &Node) -> Option<Expr> {
        self.table.lock().unwrap().get(node).cloned()
    }
}
