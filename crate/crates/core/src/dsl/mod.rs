//! The construction language: parsing, static checks, compilation to
//! expressions and interval re-verification.

mod compile;
mod syntax;
mod verify;

pub use compile::{apply, compile, compile_source, Compiled, Output, TraceStep, Value};
pub use syntax::{parse, suggest, Arg, ArgValue, Call, DiagKind, Diagnostic, Kind, Program, Severity, Span, Statement, Tool};
pub use verify::{verify_roundtrip, Check, Mismatch, MismatchReport, RoundtripReport};

#[cfg(test)]
mod tests;
