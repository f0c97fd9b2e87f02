//! `qx`: compile construction programs, evaluate and classify expressions,
//! build ladders, render traces and verify certificates.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qx_core::cert::{self, CertError, CertOptions, LadderSections};
use qx_core::dsl::{self, Diagnostic};
use qx_core::geometry::Curve;
use qx_core::ladder::{LadderConfig, LadderError};
use qx_core::numeric::{decimal, NumError};
use qx_core::render::{render_svg, RenderSpec};
use qx_core::{IrError, Session};

const EXIT_FAILED: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_SYNTAX: u8 = 3;
const EXIT_SEMANTIC: u8 = 4;
const EXIT_PRECISION: u8 = 5;

#[derive(Parser)]
#[command(name = "qx", version, about = "Exact constructions, certified enclosures and transcendence bookkeeping")]
struct Cli {
    /// Print diagnostics as JSON on standard error.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile .qdx programs and print one certificate per emitted value.
    Compile {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Certified decimal digits in each enclosure.
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Print a certified decimal enclosure of an expression.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Enclosure width is at most 10^-PRECISION.
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Classify an expression as rational, algebraic, transcendental or unknown.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Build the ladder of an expression.
    Ladder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Remove rungs that are rational combinations of earlier ones.
        #[arg(long)]
        reduce: bool,
        /// Add the per-rung ascent report (conditional on Schanuel).
        #[arg(long)]
        ascend: bool,
        /// Algebraic base of the tower (default -1).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Shorthand for `ladder --reduce`.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Full certificate: enclosure, verdict, reduced ladder and ascent.
    Report {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 30)]
        precision: u32,
    },
    /// Render a program's construction trace as SVG.
    Render {
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        with_curve: Option<CurveArg>,
    },
    /// Re-check every witness in certificate files.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Quadratrix,
    Spiral,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
    diagnostics: Vec<(String, Diagnostic)>,
    source: Option<String>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), diagnostics: vec![], source: None }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
    }

    fn from_diagnostics(path: &Path, source: &str, diags: Vec<Diagnostic>) -> Self {
        let code = if diags.iter().any(|d| d.kind.is_syntax()) { EXIT_SYNTAX } else { EXIT_SEMANTIC };
        let file = path.display().to_string();
        Failure {
            code,
            message: format!("{}: {} error(s)", file, diags.len()),
            diagnostics: diags.into_iter().map(|d| (file.clone(), d)).collect(),
            source: Some(source.to_string()),
        }
    }
}

fn num_code(e: &NumError) -> u8 {
    match e {
        NumError::MaxPrecision { .. } | NumError::DomainStraddle(_) | NumError::OutOfDomain(_) | NumError::DivisionByZero => {
            EXIT_PRECISION
        }
    }
}

impl From<IrError> for Failure {
    fn from(e: IrError) -> Self {
        let code = match &e {
            IrError::Parse(_) => EXIT_SYNTAX,
            IrError::Numeric(n) => num_code(n),
            IrError::DivisionByZero | IrError::LogOfZero | IrError::NonRealArgument | IrError::OutOfDomain(_) => {
                EXIT_PRECISION
            }
            _ => EXIT_SEMANTIC,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<NumError> for Failure {
    fn from(e: NumError) -> Self {
        Failure::new(num_code(&e), e.to_string())
    }
}

impl From<CertError> for Failure {
    fn from(e: CertError) -> Self {
        match e {
            CertError::Ir(i) => i.into(),
            CertError::Ladder(LadderError::Ir(i)) => i.into(),
            CertError::Ladder(l) => Failure::new(EXIT_SEMANTIC, l.to_string()),
            CertError::Malformed(m) => Failure::new(EXIT_SEMANTIC, m),
            CertError::Program(d) => Failure {
                code: EXIT_SEMANTIC,
                message: "program does not compile".into(),
                diagnostics: d.into_iter().map(|d| ("<program>".into(), d)).collect(),
                source: None,
            },
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Writes one line to stdout; a closed pipe ends the process quietly.
fn say(line: impl std::fmt::Display) {
    use std::io::Write;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("qx: cannot write output: {e}");
        std::process::exit(EXIT_IO as i32);
    }
}

fn print_json(v: &Value) {
    say(serde_json::to_string_pretty(v).expect("json serializes"));
}

fn session_with_base(base: Option<&str>) -> Result<Session, Failure> {
    let mut s = Session::new();
    if let Some(b) = base {
        let e = s.parse(b)?;
        s.set_base(e)?;
    }
    Ok(s)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn compile_files(paths: &[PathBuf], digits: u32) -> CmdResult {
    let opts = CertOptions { digits, ..CertOptions::default() };
    // each file gets its own session; files are processed concurrently
    let results: Vec<Result<Vec<Value>, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| {
                let opts = &opts;
                scope.spawn(move || -> Result<Vec<Value>, Failure> {
                    let src = read(p)?;
                    let s = Session::new();
                    // compile once up front so diagnostics carry the file name and source
                    dsl::compile_source(&s, &src).map_err(|d| Failure::from_diagnostics(p, &src, d))?;
                    Ok(cert::program_certificates(&s, &src, opts)?)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker thread")).collect()
    });
    let mut certs = vec![];
    let mut first_err = None;
    for r in results {
        match r {
            Ok(c) => certs.extend(c),
            Err(f) if first_err.is_none() => first_err = Some(f),
            Err(_) => {}
        }
    }
    match first_err {
        Some(f) => Err(f),
        None => {
            print_json(&Value::Array(certs));
            Ok(())
        }
    }
}

fn eval(expr: &str, digits: u32, json_out: bool) -> CmdResult {
    let s = Session::new();
    let e = s.parse(expr)?;
    let z = cert::enclose_digits(&s, &e, digits)?;
    if json_out {
        print_json(&json!({
            "subject": e.to_sexpr(),
            "digits": digits,
            "re": [decimal::exact_text(z.re.lo()), decimal::exact_text(z.re.hi())],
            "im": [decimal::exact_text(z.im.lo()), decimal::exact_text(z.im.hi())],
            "decimal": cert::decimal_text(&e, &z, digits),
        }));
    } else {
        say(cert::decimal_text(&e, &z, digits));
    }
    Ok(())
}

fn certify(expr: &str, base: Option<&str>, digits: u32, ladder: LadderSections) -> CmdResult {
    let s = session_with_base(base)?;
    let e = s.parse(expr)?;
    let opts = CertOptions { digits, ladder, config: LadderConfig::default() };
    print_json(&cert::certificate(&s, &e, &opts)?);
    Ok(())
}

fn render(path: &Path, out: &Path, curve: Option<CurveArg>) -> CmdResult {
    let src = read(path)?;
    let s = Session::new();
    let (_, compiled) = dsl::compile_source(&s, &src).map_err(|d| Failure::from_diagnostics(path, &src, d))?;
    let curve = curve.map(|c| match c {
        CurveArg::Quadratrix => Curve::Quadratrix,
        CurveArg::Spiral => Curve::Spiral,
    });
    let svg = render_svg(&compiled.trace, curve, &RenderSpec::default());
    fs::write(out, svg).map_err(|e| Failure::io(out, e))
}

fn verify(paths: &[PathBuf]) -> CmdResult {
    let mut failed = 0usize;
    for p in paths {
        let text = read(p)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_SYNTAX, format!("{}: {e}", p.display())))?;
        let certs = match v {
            Value::Array(a) => a,
            other => vec![other],
        };
        for (i, c) in certs.iter().enumerate() {
            let rep = cert::verify_certificate(c)?;
            let subject = c.get("subject").and_then(|s| s.as_str()).unwrap_or("?");
            for line in &rep.passed {
                say(format_args!("PASS {}[{i}] {subject}: {line}", p.display()));
            }
            for line in &rep.failed {
                say(format_args!("FAIL {}[{i}] {subject}: {line}", p.display()));
            }
            if !rep.ok() {
                failed += 1;
            }
        }
    }
    if failed > 0 {
        Err(Failure::new(EXIT_FAILED, format!("{failed} certificate(s) failed verification")))
    } else {
        Ok(())
    }
}

fn report_failure(f: &Failure, json_out: bool) {
    if json_out {
        let diags: Vec<Value> = f
            .diagnostics
            .iter()
            .map(|(file, d)| {
                let mut v = serde_json::to_value(d).expect("diagnostic serializes");
                v["file"] = json!(file);
                v
            })
            .collect();
        let doc = json!({ "exit_code": f.code, "message": f.message, "diagnostics": diags });
        eprintln!("{}", serde_json::to_string(&doc).expect("json serializes"));
    } else if f.diagnostics.is_empty() {
        eprintln!("qx: {}", f.message);
    } else {
        for (file, d) in &f.diagnostics {
            eprintln!("{}", d.render(file, f.source.as_deref().unwrap_or("")));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compile { paths, precision } => compile_files(paths, *precision),
        Command::Eval { expr, precision } => eval(expr, *precision, cli.json),
        Command::Classify { expr, precision } => certify(expr, None, *precision, LadderSections::default()),
        Command::Ladder { expr, reduce, ascend, base, precision } => certify(
            expr,
            base.as_deref(),
            *precision,
            LadderSections { ladder: true, reduce: *reduce, ascend: *ascend },
        ),
        Command::Reduce { expr, base, precision } => {
            certify(expr, base.as_deref(), *precision, LadderSections { ladder: true, reduce: true, ascend: false })
        }
        Command::Report { expr, base, precision } => {
            certify(expr, base.as_deref(), *precision, LadderSections { ladder: true, reduce: true, ascend: true })
        }
        Command::Render { path, out, with_curve } => render(path, out, *with_curve),
        Command::Verify { paths } => verify(paths),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report_failure(&f, cli.json);
            ExitCode::from(f.code)
        }
    }
}
