//! Exact construction engine: certified enclosures, an expression DAG over
//! field operations, radicals, exponentials and logarithms, transcendence
//! rules, ladders, synthetic geometry and a construction-language compiler.

pub mod cert;
pub mod dsl;
pub mod geometry;
pub mod ir;
pub mod ladder;
pub mod numeric;
pub mod poly;
pub mod render;
pub mod rules;

pub use geometry::{GCircle, GLine, GObject, GPoint};
pub use ir::{Expr, IrError, Node, Session, TowerTag};
pub use numeric::{CInterval, Dyadic, NumError, RInterval, Rat};
pub use poly::IntPoly;
