//! Self-contained JSON certificates and their re-verification.
//!
//! Keys are emitted in sorted order and every number that could lose
//! precision is a string, so identical inputs give byte-identical output.

use serde_json::{json, Value};
use thiserror::Error;

use crate::dsl::{self, Diagnostic};
use crate::ir::{Expr, IrError, Session};
use crate::ladder::{self, verify_numeric, verify_symbolic, Ladder, LadderConfig, LadderError, Relation};
use crate::numeric::{decimal, CInterval, Dyadic, NumError, RInterval, Rat};
use crate::rules::{Classifier, Status, Verdict, Witness};

pub const FORMAT: &str = "qx-certificate/1";
pub const TOOL: &str = "qx";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default round-trip width for program certificates.
pub const ROUNDTRIP_BITS: u32 = 30;

#[derive(Debug, Error)]
pub enum CertError {
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("program does not compile: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Program(Vec<Diagnostic>),
}

impl From<NumError> for CertError {
    fn from(e: NumError) -> Self {
        CertError::Ir(IrError::Numeric(e))
    }
}

/// Which ladder sections to include.
#[derive(Clone, Debug, Default)]
pub struct LadderSections {
    pub ladder: bool,
    pub reduce: bool,
    pub ascend: bool,
}

#[derive(Clone, Debug)]
pub struct CertOptions {
    /// Certified decimal digits: the enclosure has width at most `10^-digits`.
    pub digits: u32,
    pub ladder: LadderSections,
    pub config: LadderConfig,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions { digits: 30, ladder: LadderSections::default(), config: LadderConfig::default() }
    }
}

/// Bits needed for a width of `10^-digits`.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4
}

/// Enclosure of `e` with width at most `10^-digits`.
pub fn enclose_digits(s: &Session, e: &Expr, digits: u32) -> Result<CInterval, NumError> {
    e.eval(&Dyadic::pow2(-(bits_for_digits(digits) as i64)), s.refiner())
}

/// Certified decimal text for `subject`. Rational subjects print from the
/// exact value, so a terminating expansion such as 2.1 is not cut short by a
/// binary enclosure straddling a decimal boundary.
pub fn decimal_text(subject: &Expr, z: &CInterval, digits: u32) -> String {
    match subject.as_rat() {
        Some(r) => decimal::rational_digits(r, digits as usize),
        None => decimal::certified_complex(z, digits as usize),
    }
}

fn interval_json(iv: &RInterval) -> Value {
    json!([decimal::exact_text(iv.lo()), decimal::exact_text(iv.hi())])
}

fn enclosure_json(subject: &Expr, z: &CInterval, digits: u32) -> Value {
    json!({
        "digits": digits,
        "re": interval_json(&z.re),
        "im": interval_json(&z.im),
        "decimal": decimal_text(subject, z, digits),
    })
}

fn relation_json(values: &[Expr], r: &Relation) -> Value {
    let mut v = serde_json::to_value(r).expect("relation serializes");
    v["values"] = json!(values.iter().map(|e| e.to_sexpr()).collect::<Vec<_>>());
    v
}

/// Relations used by `reduced`, each with the values it relates
/// (`1` is implicit as the first entry).
fn removal_relations(full: &Ladder, reduced: &Ladder) -> Vec<Value> {
    let removed_at: Vec<usize> = reduced.removed.iter().map(|r| r.original_index).collect();
    reduced
        .removed
        .iter()
        .map(|r| {
            let mut values: Vec<Expr> = full
                .rungs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i < r.original_index && !removed_at.contains(i))
                .map(|(_, g)| g.value.clone())
                .collect();
            values.push(r.rung.value.clone());
            relation_json(&values, &r.relation)
        })
        .collect()
}

fn ladder_section(s: &Session, subject: &Expr, opts: &CertOptions) -> Result<(Value, Vec<Value>), CertError> {
    let full = ladder::descend(s, subject)?;
    let mut section = json!({ "descent": full.to_json() });
    let mut relations = vec![];
    let mut top = full.clone();
    if opts.ladder.reduce || opts.ladder.ascend {
        let reduced = ladder::reduce(s, &full, &opts.config)?;
        relations = removal_relations(&full, &reduced);
        if opts.ladder.reduce {
            section["reduced"] = reduced.to_json();
        }
        top = reduced;
    }
    if opts.ladder.ascend {
        section["ascent"] = ladder::ascend(s, &top, &opts.config)?.to_json();
    }
    section["config"] = json!({
        "max_coeff": opts.config.max_coeff.to_string(),
        "precision_bits": opts.config.precision_bits,
        "identity_bits": opts.config.identity_bits,
        "reduce": opts.ladder.reduce,
        "ascend": opts.ladder.ascend,
    });
    Ok((section, relations))
}

/// Certificate for a single expression.
pub fn certificate(s: &Session, subject: &Expr, opts: &CertOptions) -> Result<Value, CertError> {
    let z = enclose_digits(s, subject, opts.digits)?;
    let verdict = Classifier::new(s).classify(subject);
    let mut cert = json!({
        "format": FORMAT,
        "tool": { "name": TOOL, "version": VERSION },
        "subject": subject.to_sexpr(),
        "base": s.base().to_sexpr(),
        "tags": subject.tag(),
        "enclosure": enclosure_json(subject, &z, opts.digits),
        "verdicts": [serde_json::to_value(&verdict).expect("verdict serializes")],
        "relations": [],
    });
    if opts.ladder.ladder || opts.ladder.reduce || opts.ladder.ascend {
        let (section, relations) = ladder_section(s, subject, opts)?;
        cert["ladder"] = section;
        cert["relations"] = json!(relations);
    }
    Ok(cert)
}

/// One certificate per emitted output of a program; each embeds the source
/// so the round trip can be replayed.
pub fn program_certificates(s: &Session, source: &str, opts: &CertOptions) -> Result<Vec<Value>, CertError> {
    let (_, compiled) = dsl::compile_source(s, source).map_err(CertError::Program)?;
    let report = dsl::verify_roundtrip(s, &compiled, ROUNDTRIP_BITS)
        .map_err(|m| CertError::Malformed(m.to_string()))?;
    let mut out = vec![];
    for o in &compiled.outputs {
        let mut c = certificate(s, &o.expr, opts)?;
        let check = report.checks.iter().find(|c| c.name == o.name);
        c["program"] = json!({
            "source": source,
            "output": o.name,
            "roundtrip_bits": ROUNDTRIP_BITS,
            "replayed": check.map(|c| c.replayed.clone()),
        });
        out.push(c);
    }
    Ok(out)
}

/// Result of re-checking a certificate: one line per passed check.
#[derive(Debug, Default)]
pub struct VerifyReport {
    pub passed: Vec<String>,
    pub failed: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    fn record(&mut self, ok: bool, what: String) {
        if ok {
            self.passed.push(what);
        } else {
            self.failed.push(what);
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CertError> {
    v.get(key).ok_or_else(|| CertError::Malformed(format!("missing `{key}`")))
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str, CertError> {
    field(v, key)?.as_str().ok_or_else(|| CertError::Malformed(format!("`{key}` is not a string")))
}

fn parse_rat(t: &str) -> Result<Rat, CertError> {
    t.parse::<Rat>().map_err(|_| CertError::Malformed(format!("bad rational `{t}`")))
}

fn parse_interval(v: &Value) -> Result<RInterval, CertError> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| CertError::Malformed("interval".into()))?;
    let end = |i: usize| -> Result<Dyadic, CertError> {
        let r = parse_rat(pair[i].as_str().unwrap_or_default())?;
        Dyadic::try_from_rat(&r).ok_or_else(|| CertError::Malformed("endpoint is not dyadic".into()))
    };
    Ok(RInterval::new(end(0)?, end(1)?))
}

/// Re-check every witness embedded in a certificate, in a fresh session.
pub fn verify_certificate(cert: &Value) -> Result<VerifyReport, CertError> {
    let mut rep = VerifyReport::default();
    if text(cert, "format")? != FORMAT {
        return Err(CertError::Malformed("unknown format".into()));
    }
    let mut s = Session::new();
    let base = s.parse(text(cert, "base")?)?;
    if base != *s.base() {
        s.set_base(base)?;
    }
    let subject = s.parse(text(cert, "subject")?)?;
    rep.record(subject.to_sexpr() == text(cert, "subject")?, "subject reprints identically".into());

    // enclosure
    let enc = field(cert, "enclosure")?;
    let digits = field(enc, "digits")?.as_u64().ok_or_else(|| CertError::Malformed("digits".into()))? as u32;
    let stored = CInterval::new(parse_interval(field(enc, "re")?)?, parse_interval(field(enc, "im")?)?);
    let fresh = enclose_digits(&s, &subject, digits)?;
    let width_ok = [&stored.re, &stored.im].iter().all(|iv| {
        iv.width().to_rat() * Rat::from_integer(num_bigint::BigInt::from(10).pow(digits)) <= Rat::from_integer(1.into())
    });
    rep.record(stored.overlaps(&fresh) && width_ok, format!("enclosure of width <= 1e-{digits} contains the subject"));
    rep.record(
        decimal_text(&subject, &stored, digits) == text(enc, "decimal")?,
        "decimal digits are certified by the enclosure".into(),
    );

    // verdicts
    let mut classifier = Classifier::new(&s);
    for v in field(cert, "verdicts")?.as_array().into_iter().flatten() {
        let verdict: Verdict = serde_json::from_value(v.clone()).map_err(|e| CertError::Malformed(e.to_string()))?;
        let again = classifier.classify(&subject);
        rep.record(
            again.status == verdict.status && again.rule == verdict.rule,
            format!("verdict {} ({}) is reproduced", verdict.status, verdict.rule),
        );
        match (&verdict.status, &verdict.witness, &verdict.value) {
            (Status::Rational, _, Some(r)) => {
                let z = subject.eval(&Dyadic::pow2(-200), s.refiner())?;
                rep.record(z.contains_rat(r) && again.value.as_ref() == Some(r), format!("value equals {}", crate::ir::rat_text(r)));
            }
            (_, Some(Witness::Polynomial(p)), _) => {
                let deg = p.degree().unwrap_or(0) as u32;
                let prec = 256 + 8 * deg;
                let z = subject.enclose(prec)?;
                let ok = !p.is_zero() && p.eval_interval(&z, prec + 64).contains_zero();
                rep.record(ok, format!("witness polynomial of degree {deg} vanishes on the subject's enclosure"));
            }
            _ => {}
        }
    }

    // relations
    for r in field(cert, "relations")?.as_array().into_iter().flatten() {
        let rel: Relation = serde_json::from_value(r.clone()).map_err(|e| CertError::Malformed(e.to_string()))?;
        let values = field(r, "values")?
            .as_array()
            .ok_or_else(|| CertError::Malformed("relation values".into()))?
            .iter()
            .map(|v| Ok(s.parse(v.as_str().unwrap_or_default())?))
            .collect::<Result<Vec<Expr>, CertError>>()?;
        let numeric = verify_numeric(&values, &rel.coefficients, 128, s.refiner());
        let exact = !rel.is_exact() || verify_symbolic(&values, &rel.coefficients);
        let coeffs: Vec<String> = rel.coefficients.iter().map(|c| c.to_string()).collect();
        rep.record(numeric && exact, format!("relation ({}) holds", coeffs.join(", ")));
    }

    // ladder
    if let Some(section) = cert.get("ladder") {
        let cfgv = field(section, "config")?;
        let flag = |k: &str| cfgv.get(k).and_then(|v| v.as_bool()).unwrap_or(false);
        let num = |k: &str| cfgv.get(k).and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        let config = LadderConfig {
            max_coeff: text(cfgv, "max_coeff")?.parse().map_err(|_| CertError::Malformed("max_coeff".into()))?,
            precision_bits: num("precision_bits"),
            identity_bits: num("identity_bits"),
        };
        let opts = CertOptions {
            digits,
            ladder: LadderSections { ladder: true, reduce: flag("reduce"), ascend: flag("ascend") },
            config: config.clone(),
        };
        let (again, _) = ladder_section(&s, &subject, &opts)?;
        rep.record(&again == section, "ladder sections are reproduced".into());
        if opts.ladder.reduce || opts.ladder.ascend {
            let full = ladder::descend(&s, &subject)?;
            let reduced = ladder::reduce(&s, &full, &config)?;
            rep.record(full.is_valid() && reduced.is_valid(), "ladders are valid".into());
            for r in &reduced.removed {
                let kept_prefix = &reduced.rungs[..];
                let ok = ladder::removal_identity_holds(&s, r, kept_prefix, config.identity_bits)?;
                rep.record(ok, format!("removal identity for rung {} holds at 2^-{}", r.original_index, config.identity_bits));
            }
        }
    }

    // program round trip
    if let Some(p) = cert.get("program") {
        let source = text(p, "source")?;
        let output = text(p, "output")?;
        let bits = field(p, "roundtrip_bits")?.as_u64().unwrap_or(ROUNDTRIP_BITS as u64) as u32;
        let (_, compiled) = dsl::compile_source(&s, source).map_err(CertError::Program)?;
        let same = compiled.output(output).is_some_and(|e| e == &subject);
        rep.record(same, format!("program output `{output}` is the subject"));
        let rt = dsl::verify_roundtrip(&s, &compiled, bits);
        rep.record(rt.is_ok(), format!("program round trip at 2^-{bits}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str, opts: &CertOptions) -> Value {
        let s = Session::new();
        let e = s.parse(src).unwrap();
        let c = certificate(&s, &e, opts).unwrap();
        let text = serde_json::to_string_pretty(&c).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        let rep = verify_certificate(&back).unwrap();
        assert!(rep.ok(), "{src}: {:?}", rep.failed);
        c
    }

    #[test]
    fn expression_certificates_verify() {
        let c = roundtrip("(sin_pi 2/5)", &CertOptions::default());
        assert_eq!(c["verdicts"][0]["status"], "algebraic");
        assert!(c["enclosure"]["decimal"].as_str().unwrap().starts_with("0.951056516295153572116439333379"));
        roundtrip("(sqrt 2)", &CertOptions::default());
        roundtrip("(exp -1 (sqrt 2))", &CertOptions::default());
    }

    #[test]
    fn ladder_certificates_verify_and_are_deterministic() {
        let opts = CertOptions {
            digits: 20,
            ladder: LadderSections { ladder: true, reduce: true, ascend: true },
            ..CertOptions::default()
        };
        let a = roundtrip("(add (log -1 2 0) (add (log -1 3 0) (log -1 6 0)))", &opts);
        let b = roundtrip("(add (log -1 2 0) (add (log -1 3 0) (log -1 6 0)))", &opts);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a["relations"].as_array().unwrap().len(), 1);
        assert_eq!(a["ladder"]["ascent"]["degree"], 2);
    }

    #[test]
    fn tampering_is_detected() {
        let s = Session::new();
        let e = s.parse("(sqrt 2)").unwrap();
        let mut c = certificate(&s, &e, &CertOptions::default()).unwrap();
        c["verdicts"][0]["witness"]["polynomial"]["coeffs"] = json!(["-3", "0", "1"]);
        let rep = verify_certificate(&c).unwrap();
        assert!(!rep.ok());
        let mut c = certificate(&s, &e, &CertOptions::default()).unwrap();
        c["enclosure"]["decimal"] = json!("1.5");
        assert!(!verify_certificate(&c).unwrap().ok());
    }

    #[test]
    fn program_certificates_replay() {
        let s = Session::new();
        let certs = program_certificates(&s, "let p = ra(1, 2); let f = rra(p); emit p, f;", &CertOptions::default()).unwrap();
        assert_eq!(certs.len(), 3);
        for c in &certs {
            let rep = verify_certificate(c).unwrap();
            assert!(rep.ok(), "{:?}", rep.failed);
        }
        assert_eq!(certs[2]["verdicts"][0]["status"], "rational");
    }
}
