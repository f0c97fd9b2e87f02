//! Lexer, recursive-descent parser, static checks and printer for the
//! construction language.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ir::rat_text;
use crate::numeric::Rat;

/// Byte range plus 1-based line and column (in characters) of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagKind {
    Syntax,
    DuplicateName,
    UnboundName,
    Arity,
    ArgumentKind,
    Geometry,
}

impl DiagKind {
    pub fn is_syntax(self) -> bool {
        self == DiagKind::Syntax
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagKind,
    pub span: Span,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<String>,
}

impl Diagnostic {
    pub fn error(kind: DiagKind, span: Span, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, kind, span, message: message.into(), suggestion: None }
    }

    pub fn with_suggestion(mut self, s: Option<String>) -> Self {
        self.suggestion = s;
        self
    }

    /// `path:line:col: error: message`, the source line and a caret marker.
    pub fn render(&self, path: &str, source: &str) -> String {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let mut out = format!("{path}:{}:{}: {sev}: {}", self.span.line, self.span.column, self.message);
        if let Some(s) = &self.suggestion {
            out.push_str(&format!(" (did you mean `{s}`?)"));
        }
        if let Some(text) = source.lines().nth(self.span.line as usize - 1) {
            let width = source[self.span.start..self.span.end.min(source.len())].chars().count().max(1);
            out.push_str(&format!("\n  | {text}\n  | {}{}", " ".repeat(self.span.column as usize - 1), "^".repeat(width)));
        }
        out
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)?;
        if let Some(s) = &self.suggestion {
            write!(f, " (did you mean `{s}`?)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tool {
    Seg,
    Point,
    Line,
    Circle,
    Intersect,
    Meanprop,
    Fourthprop,
    Ra,
    Rra,
    Bisect,
    Anglesect,
}

impl Tool {
    pub const ALL: [Tool; 11] = [
        Tool::Seg,
        Tool::Point,
        Tool::Line,
        Tool::Circle,
        Tool::Intersect,
        Tool::Meanprop,
        Tool::Fourthprop,
        Tool::Ra,
        Tool::Rra,
        Tool::Bisect,
        Tool::Anglesect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tool::Seg => "seg",
            Tool::Point => "point",
            Tool::Line => "line",
            Tool::Circle => "circle",
            Tool::Intersect => "intersect",
            Tool::Meanprop => "meanprop",
            Tool::Fourthprop => "fourthprop",
            Tool::Ra => "ra",
            Tool::Rra => "rra",
            Tool::Bisect => "bisect",
            Tool::Anglesect => "anglesect",
        }
    }

    pub fn from_name(s: &str) -> Option<Tool> {
        Tool::ALL.into_iter().find(|t| t.name() == s)
    }

    /// True for tools that go beyond straightedge and compass.
    pub fn is_transcendental(self) -> bool {
        matches!(self, Tool::Ra | Tool::Rra | Tool::Anglesect)
    }

    fn usage(self) -> &'static str {
        match self {
            Tool::Seg => "seg(length) | seg(point, point)",
            Tool::Point => "point(x, y)",
            Tool::Line => "line(point, point)",
            Tool::Circle => "circle(center, point) | circle(center, radius)",
            Tool::Intersect => "intersect(curve, curve) | intersect(curve, curve, index)",
            Tool::Meanprop => "meanprop(a, b)",
            Tool::Fourthprop => "fourthprop(a, b, c)",
            Tool::Ra => "ra(u, v)",
            Tool::Rra => "rra(point)",
            Tool::Bisect => "bisect(point) | bisect(length)",
            Tool::Anglesect => "anglesect(point, u, v)",
        }
    }
}

/// Static kind of a bound name or literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Number,
    Point,
    Line,
    Circle,
}

impl Kind {
    fn article(self) -> &'static str {
        match self {
            Kind::Number => "a number",
            Kind::Point => "a point",
            Kind::Line => "a line",
            Kind::Circle => "a circle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArgValue {
    Name(String),
    Rational(Rat),
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgValue::Name(n) => f.write_str(n),
            ArgValue::Rational(r) => f.write_str(&rat_text(r)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Arg {
    pub value: ArgValue,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Call {
    pub tool: Tool,
    pub tool_span: Span,
    pub args: Vec<Arg>,
}

#[derive(Clone, Debug)]
pub enum Statement {
    Let { name: String, name_span: Span, call: Call, span: Span },
    Emit { names: Vec<(String, Span)>, span: Span },
}

impl Statement {
    pub fn span(&self) -> Span {
        match self {
            Statement::Let { span, .. } | Statement::Emit { span, .. } => *span,
        }
    }
}

/// A parsed and checked construction program.
#[derive(Clone, Debug)]
pub struct Program {
    pub statements: Vec<Statement>,
    /// Kind of every bound name.
    pub kinds: HashMap<String, Kind>,
}

impl Program {
    /// Emitted names in order.
    pub fn emits(&self) -> Vec<&str> {
        self.statements
            .iter()
            .flat_map(|s| match s {
                Statement::Emit { names, .. } => names.iter().map(|(n, _)| n.as_str()).collect(),
                Statement::Let { .. } => vec![],
            })
            .collect()
    }

    pub fn tools(&self) -> Vec<Tool> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Let { call, .. } => Some(call.tool),
                Statement::Emit { .. } => None,
            })
            .collect()
    }

    /// Equality of statements, ignoring source positions.
    pub fn same_structure(&self, other: &Program) -> bool {
        self.statements.len() == other.statements.len()
            && self.statements.iter().zip(&other.statements).all(|(a, b)| match (a, b) {
                (Statement::Let { name: n1, call: c1, .. }, Statement::Let { name: n2, call: c2, .. }) => {
                    n1 == n2
                        && c1.tool == c2.tool
                        && c1.args.len() == c2.args.len()
                        && c1.args.iter().zip(&c2.args).all(|(x, y)| x.value == y.value)
                }
                (Statement::Emit { names: a, .. }, Statement::Emit { names: b, .. }) => {
                    a.iter().map(|x| &x.0).eq(b.iter().map(|x| &x.0))
                }
                _ => false,
            })
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for st in &self.statements {
            match st {
                Statement::Let { name, call, .. } => {
                    let args: Vec<String> = call.args.iter().map(|a| a.value.to_string()).collect();
                    writeln!(f, "let {name} = {}({});", call.tool.name(), args.join(", "))?;
                }
                Statement::Emit { names, .. } => {
                    let ns: Vec<&str> = names.iter().map(|(n, _)| n.as_str()).collect();
                    writeln!(f, "emit {};", ns.join(", "))?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(Rat),
    Let,
    Emit,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(r) => format!("`{}`", rat_text(r)),
            Tok::Let => "`let`".into(),
            Tok::Emit => "`emit`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn digits(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek_char().filter(|c| c.is_ascii_digit()) {
            out.push(c);
            self.bump();
        }
        out
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, Diagnostic> {
        let mut out = vec![];
        loop {
            while let Some(c) = self.peek_char() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while self.peek_char().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (start, line, column) = (self.pos, self.line, self.col);
            let span = |l: &Lexer| Span { start, end: l.pos, line, column };
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, span(&self)));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut id = c.to_string();
                    while let Some(c) = self.peek_char().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                        id.push(c);
                        self.bump();
                    }
                    match id.as_str() {
                        "let" => Tok::Let,
                        "emit" => Tok::Emit,
                        _ => Tok::Ident(id),
                    }
                }
                c if c.is_ascii_digit() || c == '-' => {
                    let neg = c == '-';
                    let mut num = if neg { String::new() } else { c.to_string() };
                    num.push_str(&self.digits());
                    if num.is_empty() {
                        return Err(Diagnostic::error(DiagKind::Syntax, span(&self), "expected digits after `-`"));
                    }
                    let mut n: BigInt = num.parse().expect("digits");
                    if neg {
                        n = -n;
                    }
                    let mut d = BigInt::one();
                    if self.peek_char() == Some('/') {
                        self.bump();
                        let den = self.digits();
                        if den.is_empty() {
                            return Err(Diagnostic::error(DiagKind::Syntax, span(&self), "expected a denominator after `/`"));
                        }
                        d = den.parse().expect("digits");
                        if d.is_zero() {
                            return Err(Diagnostic::error(DiagKind::Syntax, span(&self), "denominator must be positive"));
                        }
                    }
                    Tok::Number(Rat::new(n, d))
                }
                other => {
                    return Err(Diagnostic::error(DiagKind::Syntax, span(&self), format!("unexpected character `{other}`")));
                }
            };
            out.push((tok, span(&self)));
        }
    }
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

fn join(a: Span, b: Span) -> Span {
    Span { start: a.start, end: b.end, line: a.line, column: a.column }
}

/// Closest candidate within a small edit distance.
pub fn suggest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    let limit = (word.chars().count() / 2).clamp(1, 3);
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(word, c), c))
        .filter(|(d, _)| *d <= limit)
        .min()
        .map(|(_, c)| c.to_string())
}

impl Parser {
    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, context: &str) -> PResult<Span> {
        let (tok, span) = self.peek().clone();
        if tok == want {
            self.next();
            Ok(span)
        } else {
            Err(Diagnostic::error(
                DiagKind::Syntax,
                span,
                format!("expected {} {context}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    fn ident(&mut self, context: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            (Tok::Ident(s), span) => {
                self.next();
                Ok((s, span))
            }
            (tok, span) => Err(Diagnostic::error(
                DiagKind::Syntax,
                span,
                format!("expected a name {context}, found {}", tok.describe()),
            )),
        }
    }

    fn program(&mut self) -> Vec<Statement> {
        let mut out = vec![];
        while self.peek().0 != Tok::Eof {
            match self.statement() {
                Ok(s) => out.push(s),
                Err(d) => {
                    self.diags.push(d);
                    self.recover();
                }
            }
        }
        if out.is_empty() && self.diags.is_empty() {
            let span = self.peek().1;
            self.diags.push(Diagnostic::error(DiagKind::Syntax, span, "a program needs at least one statement"));
        }
        out
    }

    /// Skip to just past the next `;` or to the next statement keyword.
    fn recover(&mut self) {
        loop {
            match self.peek().0 {
                Tok::Eof | Tok::Let | Tok::Emit => return,
                Tok::Semi => {
                    self.next();
                    return;
                }
                _ => {
                    self.next();
                }
            }
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let (tok, start) = self.peek().clone();
        match tok {
            Tok::Let => {
                self.next();
                let (name, name_span) = self.ident("after `let`")?;
                self.expect(Tok::Eq, "after the bound name")?;
                let call = self.call()?;
                let end = self.expect(Tok::Semi, "after statement")?;
                Ok(Statement::Let { name, name_span, call, span: join(start, end) })
            }
            Tok::Emit => {
                self.next();
                let mut names = vec![self.ident("after `emit`")?];
                while self.peek().0 == Tok::Comma {
                    self.next();
                    names.push(self.ident("after `,`")?);
                }
                let end = self.expect(Tok::Semi, "after statement")?;
                Ok(Statement::Emit { names, span: join(start, end) })
            }
            other => {
                let suggestion = match &other {
                    Tok::Ident(s) => suggest(s, ["let", "emit"]),
                    _ => None,
                };
                Err(Diagnostic::error(
                    DiagKind::Syntax,
                    start,
                    format!("expected `let` or `emit`, found {}", other.describe()),
                )
                .with_suggestion(suggestion))
            }
        }
    }

    fn call(&mut self) -> PResult<Call> {
        let (name, tool_span) = self.ident("naming a tool")?;
        let tool = Tool::from_name(&name).ok_or_else(|| {
            Diagnostic::error(DiagKind::Syntax, tool_span, format!("unknown tool `{name}`"))
                .with_suggestion(suggest(&name, Tool::ALL.iter().map(|t| t.name())))
        })?;
        self.expect(Tok::LParen, "after the tool name")?;
        let mut args = vec![self.arg()?];
        while self.peek().0 == Tok::Comma {
            self.next();
            args.push(self.arg()?);
        }
        self.expect(Tok::RParen, "to close the argument list")?;
        Ok(Call { tool, tool_span, args })
    }

    fn arg(&mut self) -> PResult<Arg> {
        match self.next() {
            (Tok::Ident(s), span) => Ok(Arg { value: ArgValue::Name(s), span }),
            (Tok::Number(r), span) => Ok(Arg { value: ArgValue::Rational(r), span }),
            (tok, span) => Err(Diagnostic::error(
                DiagKind::Syntax,
                span,
                format!("expected a name or a rational number, found {}", tok.describe()),
            )),
        }
    }
}

// ---------------------------------------------------------------- checks

fn result_kind(tool: Tool, kinds: &[Kind]) -> Option<Kind> {
    use Kind::*;
    let curve = |k: Kind| matches!(k, Line | Circle);
    match (tool, kinds) {
        (Tool::Seg, [Number]) | (Tool::Seg, [Point, Point]) => Some(Number),
        (Tool::Point, [Number, Number]) => Some(Point),
        (Tool::Line, [Point, Point]) => Some(Line),
        (Tool::Circle, [Point, Point]) | (Tool::Circle, [Point, Number]) => Some(Circle),
        (Tool::Intersect, [a, b]) if curve(*a) && curve(*b) => Some(Point),
        (Tool::Intersect, [a, b, Number]) if curve(*a) && curve(*b) => Some(Point),
        (Tool::Meanprop, [Number, Number]) => Some(Number),
        (Tool::Fourthprop, [Number, Number, Number]) => Some(Number),
        (Tool::Ra, [Number, Number]) => Some(Point),
        (Tool::Rra, [Point]) => Some(Number),
        (Tool::Bisect, [Point]) => Some(Point),
        (Tool::Bisect, [Number]) => Some(Number),
        (Tool::Anglesect, [Point, Number, Number]) => Some(Point),
        _ => None,
    }
}

fn arities(tool: Tool) -> &'static [usize] {
    match tool {
        Tool::Seg => &[1, 2],
        Tool::Point | Tool::Line | Tool::Circle | Tool::Meanprop | Tool::Ra => &[2],
        Tool::Intersect => &[2, 3],
        Tool::Fourthprop | Tool::Anglesect => &[3],
        Tool::Rra | Tool::Bisect => &[1],
    }
}

fn check(statements: &[Statement]) -> (HashMap<String, Kind>, Vec<Diagnostic>) {
    let mut kinds: HashMap<String, Kind> = HashMap::new();
    let mut defined_at: HashMap<String, Span> = HashMap::new();
    let mut order: Vec<String> = vec![];
    let mut diags = vec![];
    let later: HashMap<&str, Span> = statements
        .iter()
        .filter_map(|s| match s {
            Statement::Let { name, name_span, .. } => Some((name.as_str(), *name_span)),
            _ => None,
        })
        .collect();
    let unbound = |name: &str, span: Span, order: &[String]| {
        let msg = match later.get(name) {
            Some(def) => format!("`{name}` is used before its definition on line {}", def.line),
            None => format!("unbound name `{name}`"),
        };
        Diagnostic::error(DiagKind::UnboundName, span, msg).with_suggestion(suggest(name, order.iter().map(|s| s.as_str())))
    };
    let mut emitted: HashMap<String, Span> = HashMap::new();
    for st in statements {
        match st {
            Statement::Let { name, name_span, call, .. } => {
                let mut arg_kinds = vec![];
                let mut ok = true;
                for a in &call.args {
                    match &a.value {
                        ArgValue::Rational(_) => arg_kinds.push(Kind::Number),
                        ArgValue::Name(n) => match kinds.get(n) {
                            Some(k) => arg_kinds.push(*k),
                            None => {
                                diags.push(unbound(n, a.span, &order));
                                ok = false;
                            }
                        },
                    }
                }
                let mut out = None;
                if ok {
                    let tool = call.tool;
                    if !arities(tool).contains(&call.args.len()) {
                        diags.push(
                            Diagnostic::error(
                                DiagKind::Arity,
                                call.tool_span,
                                format!("`{}` takes {} argument(s), found {}", tool.name(), arity_text(tool), call.args.len()),
                            )
                            .with_suggestion(Some(tool.usage().to_string())),
                        );
                    } else if let Some(k) = result_kind(tool, &arg_kinds) {
                        if tool == Tool::Intersect && call.args.len() == 3 {
                            match &call.args[2].value {
                                ArgValue::Rational(r) if r.is_integer() && r.numer().is_positive() => out = Some(k),
                                _ => diags.push(Diagnostic::error(
                                    DiagKind::ArgumentKind,
                                    call.args[2].span,
                                    "the intersection index must be a positive integer literal",
                                )),
                            }
                        } else {
                            out = Some(k);
                        }
                    } else {
                        let found: Vec<&str> = arg_kinds.iter().map(|k| k.article()).collect();
                        diags.push(
                            Diagnostic::error(
                                DiagKind::ArgumentKind,
                                call.tool_span,
                                format!("`{}` cannot be applied to ({})", tool.name(), found.join(", ")),
                            )
                            .with_suggestion(Some(tool.usage().to_string())),
                        );
                    }
                }
                if let Some(prev) = defined_at.get(name) {
                    diags.push(Diagnostic::error(
                        DiagKind::DuplicateName,
                        *name_span,
                        format!("`{name}` is already bound on line {}", prev.line),
                    ));
                    continue;
                }
                defined_at.insert(name.clone(), *name_span);
                order.push(name.clone());
                // Bind even on error so later uses do not cascade.
                kinds.insert(name.clone(), out.unwrap_or(Kind::Number));
            }
            Statement::Emit { names, .. } => {
                for (n, span) in names {
                    match kinds.get(n) {
                        None => diags.push(unbound(n, *span, &order)),
                        Some(Kind::Line | Kind::Circle) => diags.push(Diagnostic::error(
                            DiagKind::ArgumentKind,
                            *span,
                            format!("cannot emit `{n}`: only numbers and points are values"),
                        )),
                        Some(_) => {
                            if let Some(prev) = emitted.insert(n.clone(), *span) {
                                diags.push(Diagnostic::error(
                                    DiagKind::DuplicateName,
                                    *span,
                                    format!("`{n}` is already emitted on line {}", prev.line),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    (kinds, diags)
}

fn arity_text(tool: Tool) -> String {
    let a: Vec<String> = arities(tool).iter().map(|n| n.to_string()).collect();
    a.join(" or ")
}

/// Parse and check a program. Errors come back sorted by position.
pub fn parse(source: &str) -> Result<Program, Vec<Diagnostic>> {
    let toks = Lexer { src: source, pos: 0, line: 1, col: 1 }.tokens().map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0, diags: vec![] };
    let statements = p.program();
    if !p.diags.is_empty() {
        return Err(p.diags);
    }
    let (kinds, mut diags) = check(&statements);
    if !diags.is_empty() {
        diags.sort_by_key(|d| d.span.start);
        return Err(diags);
    }
    Ok(Program { statements, kinds })
}

/// Integer value of a rational literal used as an index.
pub(crate) fn literal_index(r: &Rat) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_string().parse().ok()
    } else {
        None
    }
}
