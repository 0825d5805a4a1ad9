//! Command-line interface for pronilpotent-quotient analysis of primitive
//! substitutions and free-group endomorphisms.
//!
//! Input files hold one rule per line (`0 -> 0 1`); endomorphism files may
//! mark inverse letters with a trailing apostrophe. Reports go to standard
//! output; `--json` writes a machine-readable document as well.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pronil::analysis::{
    DescriptorSource, FlowInvariants, FreenessReport, PronilDescriptor, TestOutcome,
};
use pronil::finquot::{
    certificate_check, quotient_search, FiniteGroup, QuotientCertificate, SearchBudget,
    SearchOutcome,
};
use pronil::report::{analyze_endo, analyze_substitution};
use pronil::returns::{find_connections, return_substitution, Connection, RAY_LIMIT_VAR};
use pronil::words::{Alphabet, FreeGroupEndo, SignedLetter, Substitution, Word};
use pronil::Error;
use serde_json::json;

fn after_help_text() -> String {
    format!(
        "Input format:\n  One rule per line: `0 -> 0 1`. Right-hand symbols are separated by\n  whitespace; multi-character symbols go between backticks; `#` starts a\n  comment. Endomorphism input (--endo, or a file ending in .end) may mark\n  inverse letters with a trailing apostrophe: `0 -> 0 1 0' 1'`.\n\nEnvironment:\n  {RAY_LIMIT_VAR}  caps how many letters the lazy fixed-point ray may\n  expand while collecting return words (default 2^31).\n\nExit status:\n  0 success; 1 precondition violated (for example non-primitive input);\n  2 usage error."
    )
}

/// Pronilpotent quotients of primitive substitutions.
#[derive(Parser)]
#[command(name = "pronil", version, after_help = after_help_text())]
struct Cli {
    /// Also write a machine-readable JSON document to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: periodicity, connections, return substitution,
    /// descriptor, freeness battery, classification.
    Analyze {
        /// Substitution or endomorphism file.
        file: PathBuf,
        /// Parse the file as a free-group endomorphism.
        #[arg(long, conflicts_with = "connection")]
        endo: bool,
        /// Connection to analyze, as `u,v` (default: first in sorted order).
        #[arg(long, value_name = "U,V")]
        connection: Option<String>,
    },
    /// Return words and the derived return substitution; the output
    /// re-parses as a substitution file.
    Returns {
        /// Substitution file.
        file: PathBuf,
        /// Connection to use, as `u,v`.
        #[arg(long, value_name = "U,V")]
        connection: Option<String>,
        /// Search connections with words up to this length and take the
        /// first in sorted order (default 1).
        #[arg(long, value_name = "L", conflicts_with = "connection")]
        max_len: Option<usize>,
    },
    /// Descriptor and classification of the maximal pronilpotent quotient.
    Nilquotient {
        /// Substitution or endomorphism file.
        file: PathBuf,
        /// Parse the file as a free-group endomorphism.
        #[arg(long, conflicts_with = "connection")]
        endo: bool,
        /// Connection to analyze, as `u,v` (default: first in sorted order).
        #[arg(long, value_name = "U,V")]
        connection: Option<String>,
    },
    /// Freeness battery: perfectness, absolute and relative freeness tests.
    Freeness {
        /// Substitution file.
        file: PathBuf,
        /// Connection to analyze, as `u,v` (default: first in sorted order).
        #[arg(long, value_name = "U,V")]
        connection: Option<String>,
    },
    /// Degree data invariant under flow equivalence of the subshift.
    Invariants {
        /// Substitution file.
        file: PathBuf,
        /// Connection to analyze, as `u,v` (default: first in sorted order).
        #[arg(long, value_name = "U,V")]
        connection: Option<String>,
    },
    /// Search a finite group for a quotient certificate of the presented
    /// group.
    Quotient {
        /// Endomorphism (or substitution) file.
        file: PathBuf,
        /// Finite group: `sl2:<n>` for SL2 over GF(2^n), or
        /// `perm:<generators in cycle notation>`.
        #[arg(long, value_name = "SPEC")]
        group: String,
        /// Action-step budget for the seeded search.
        #[arg(long, value_name = "N", conflicts_with = "exhaustive")]
        budget: Option<u64>,
        /// Demand an exhaustive sweep; fails when the state space is too
        /// large for one.
        #[arg(long)]
        exhaustive: bool,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => emit(&out),
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Writes the report to stdout; a vanished reader (broken pipe) is not an
/// error for a report printer.
fn emit(text: &str) -> ExitCode {
    use std::io::Write;
    let mut stdout = io::stdout();
    let status = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write to stdout: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    let json = cli.json;
    match cli.command {
        Command::Analyze {
            file,
            endo,
            connection,
        } => {
            let text = read_input(&file)?;
            if use_endo(&file, endo) {
                reject_connection_for_endo(connection.as_deref())?;
                let e = FreeGroupEndo::parse(&text)?;
                let report = analyze_endo(&e)?;
                let _ = writeln!(out, "{}", report.render());
                if let Some(path) = &json {
                    report.validate()?;
                    write_json(
                        path,
                        &serde_json::to_value(report.to_doc()).map_err(json_internal)?,
                    )?;
                }
            } else {
                let s = Substitution::parse(&text)?;
                let chosen = optional_connection_words(s.alphabet(), connection.as_deref())?;
                let report = analyze_substitution(&s, chosen)?;
                let _ = writeln!(out, "{}", report.render());
                if let Some(path) = &json {
                    report.validate()?;
                    write_json(
                        path,
                        &serde_json::to_value(report.to_doc()).map_err(json_internal)?,
                    )?;
                }
            }
        }
        Command::Returns {
            file,
            connection,
            max_len,
        } => {
            let s = Substitution::parse(&read_input(&file)?)?;
            let conn = match connection {
                Some(arg) => {
                    let (u, v) = connection_words(s.alphabet(), &arg)?;
                    Connection::identify(&s, u, v)?
                }
                None => {
                    let max = max_len.unwrap_or(1);
                    find_connections(&s, max)?.into_iter().next().ok_or_else(|| {
                        Error::Precondition(format!(
                            "no connection with words of length <= {max}; raise --max-len or pass --connection"
                        ))
                    })?
                }
            };
            let data = return_substitution(&s, &conn)?;
            let ab = s.alphabet();
            let _ = writeln!(
                out,
                "# return substitution at connection ({}, {}) of order {}",
                conn.u().display(ab),
                conn.v().display(ab),
                conn.order()
            );
            let words: Vec<String> = data.returns().iter().map(|w| w.display(ab)).collect();
            let _ = writeln!(
                out,
                "# return words ({}, in order of first occurrence): {}",
                words.len(),
                words.join(" ")
            );
            let _ = write!(out, "{}", data.derived().rules_text());
            if let Some(path) = &json {
                write_json(
                    path,
                    &json!({
                        "command": "returns",
                        "connection": {
                            "u": conn.u().display(ab),
                            "v": conn.v().display(ab),
                            "order": conn.order(),
                        },
                        "return_words": words,
                        "rules": data.derived().rules_text(),
                    }),
                )?;
            }
        }
        Command::Nilquotient {
            file,
            endo,
            connection,
        } => {
            let text = read_input(&file)?;
            if use_endo(&file, endo) {
                reject_connection_for_endo(connection.as_deref())?;
                let e = FreeGroupEndo::parse(&text)?;
                let report = analyze_endo(&e)?;
                let _ = writeln!(out, "{}", descriptor_text(&report.descriptor, e.alphabet()));
                let _ = writeln!(
                    out,
                    "quotient criterion: {}",
                    report.descriptor.quotient_criterion()
                );
                let _ = writeln!(out, "classification: {}", report.classification);
                if let Some(path) = &json {
                    write_json(
                        path,
                        &json!({
                            "command": "nilquotient",
                            "descriptor": descriptor_doc(&report.descriptor),
                            "classification": report.classification,
                        }),
                    )?;
                }
            } else {
                let s = Substitution::parse(&text)?;
                let chosen = optional_connection_words(s.alphabet(), connection.as_deref())?;
                let report = analyze_substitution(&s, chosen)?;
                if let Some(d) = &report.descriptor {
                    let _ = writeln!(out, "{}", descriptor_text(d, s.alphabet()));
                    let _ = writeln!(out, "quotient criterion: {}", d.quotient_criterion());
                }
                let _ = writeln!(out, "classification: {}", report.classification);
                if let Some(path) = &json {
                    write_json(
                        path,
                        &json!({
                            "command": "nilquotient",
                            "descriptor": report.descriptor.as_ref().map(descriptor_doc),
                            "classification": report.classification,
                        }),
                    )?;
                }
            }
        }
        Command::Freeness { file, connection } => {
            let s = Substitution::parse(&read_input(&file)?)?;
            let chosen = optional_connection_words(s.alphabet(), connection.as_deref())?;
            let report = analyze_substitution(&s, chosen)?;
            let Some(f) = &report.freeness else {
                return Err(Error::PeriodicInput.into());
            };
            let _ = write!(out, "{}", freeness_text(f));
            if let Some(path) = &json {
                write_json(
                    path,
                    &json!({
                        "command": "freeness",
                        "perfect": f.perfect,
                        "not_absolutely_free": match &f.not_absolutely_free {
                            TestOutcome::Established(p) => Some(p.to_string()),
                            TestOutcome::Inconclusive => None,
                        },
                        "not_relatively_free": match &f.not_relatively_free {
                            TestOutcome::Established(p) => Some(*p),
                            TestOutcome::Inconclusive => None,
                        },
                        "weak_test": match &f.weak_test {
                            TestOutcome::Established((p1, p2)) => Some([*p1, *p2]),
                            TestOutcome::Inconclusive => None,
                        },
                        "constant_length": f.constant_length,
                    }),
                )?;
            }
        }
        Command::Invariants { file, connection } => {
            let s = Substitution::parse(&read_input(&file)?)?;
            let chosen = optional_connection_words(s.alphabet(), connection.as_deref())?;
            let report = analyze_substitution(&s, chosen)?;
            let Some(fl) = &report.flow else {
                return Err(Error::PeriodicInput.into());
            };
            let _ = writeln!(out, "{}", flow_text(fl));
            if let Some(path) = &json {
                write_json(
                    path,
                    &json!({
                        "command": "invariants",
                        "generic_degree": fl.generic_degree,
                        "degrees": fl.degrees,
                        "pdet_primes": fl.pdet_primes,
                    }),
                )?;
            }
        }
        Command::Quotient {
            file,
            group,
            budget,
            exhaustive,
        } => {
            let e = FreeGroupEndo::parse(&read_input(&file)?)?;
            let h = FiniteGroup::parse_spec(&group)?;
            let mut b = SearchBudget::default();
            b.force_exhaustive = exhaustive;
            if let Some(n) = budget {
                b.step_limit = n;
            }
            let _ = writeln!(out, "group: {}", h.describe());
            let outcome = quotient_search(&e, &h, b)?;
            match &outcome {
                SearchOutcome::Found(cert) => {
                    if !certificate_check(&e, cert, &h) {
                        return Err(Error::Internal(
                            "search returned a certificate that fails re-verification".into(),
                        )
                        .into());
                    }
                    let _ = writeln!(out, "verdict: quotient (certificate re-verified)");
                    let _ = writeln!(out, "period: {}", cert.period);
                    let _ = writeln!(out, "tuple:");
                    for (a, &x) in cert.tuple.entries().iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  {} -> {}",
                            e.alphabet().name(a),
                            h.display_element(x)
                        );
                    }
                    let _ = writeln!(out, "witnesses:");
                    for w in &cert.witnesses {
                        let _ = writeln!(
                            out,
                            "  {} = {}",
                            expression_text(&e, &w.expression),
                            h.display_element(w.target)
                        );
                    }
                }
                SearchOutcome::NotFound { steps } => {
                    let _ = writeln!(
                        out,
                        "verdict: inconclusive after {steps} action steps (budget exhausted)"
                    );
                }
                SearchOutcome::Exhausted => {
                    let _ = writeln!(
                        out,
                        "verdict: not a quotient (exhausted all {}^{} tuples)",
                        h.order(),
                        e.size()
                    );
                }
            }
            if let Some(path) = &json {
                let (verdict, steps, cert) = match &outcome {
                    SearchOutcome::Found(c) => ("quotient", None, Some(certificate_doc(&h, &e, c))),
                    SearchOutcome::NotFound { steps } => ("inconclusive", Some(*steps), None),
                    SearchOutcome::Exhausted => ("not_a_quotient", None, None),
                };
                write_json(
                    path,
                    &json!({
                        "command": "quotient",
                        "group": group_doc(&h, &group),
                        "verdict": verdict,
                        "steps": steps,
                        "certificate": cert,
                    }),
                )?;
            }
        }
    }
    Ok(out)
}

/// Endomorphism parsing is chosen by flag or by the `.end` extension.
fn use_endo(file: &Path, flag: bool) -> bool {
    flag || file.extension().and_then(|e| e.to_str()) == Some("end")
}

fn reject_connection_for_endo(connection: Option<&str>) -> Result<(), Failure> {
    match connection {
        Some(_) => Err(Failure::Usage(
            "--connection does not apply to endomorphism input".into(),
        )),
        None => Ok(()),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure::Run(Error::Precondition(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn json_internal(e: serde_json::Error) -> Failure {
    Failure::Run(Error::Internal(format!("json: {e}")))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(json_internal)?;
    fs::write(path, text + "\n").map_err(|e| {
        Failure::Run(Error::Precondition(format!(
            "cannot write {}: {e}",
            path.display()
        )))
    })
}

fn optional_connection_words(
    ab: &Alphabet,
    arg: Option<&str>,
) -> Result<Option<(Word, Word)>, Failure> {
    arg.map(|text| connection_words(ab, text)).transpose()
}

/// Splits `u,v`; each side is a word over the alphabet, written as
/// concatenated characters when all names are single characters.
fn connection_words(ab: &Alphabet, text: &str) -> Result<(Word, Word), Failure> {
    let Some((u, v)) = text.split_once(',') else {
        return Err(Failure::Usage(format!(
            "--connection takes `u,v`, got {text:?}"
        )));
    };
    Ok((word_arg(ab, u)?, word_arg(ab, v)?))
}

fn word_arg(ab: &Alphabet, text: &str) -> Result<Word, Failure> {
    let text = text.trim();
    let names: Vec<String> = if !ab.all_single_char() || text.contains(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else {
        text.chars().map(String::from).collect()
    };
    if names.is_empty() {
        return Err(Failure::Usage("connection words must be non-empty".into()));
    }
    let mut letters = Vec::with_capacity(names.len());
    for name in &names {
        match ab.index_of(name) {
            Some(a) => letters.push(a),
            None => {
                return Err(Failure::Usage(format!(
                    "unknown letter {name:?} in connection word"
                )))
            }
        }
    }
    Ok(Word::new(letters))
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn descriptor_text(d: &PronilDescriptor, ab: &Alphabet) -> String {
    let mut line = format!("descriptor: generic rank {}", d.generic_rank());
    for (p, r) in d.overrides() {
        line.push_str(&format!("; p={p} -> rank {r}"));
    }
    match d.source() {
        DescriptorSource::Direct => line.push_str(" (direct route)"),
        DescriptorSource::Returns(c) => line.push_str(&format!(
            " (via return substitution at ({}, {}) of order {})",
            c.u().display(ab),
            c.v().display(ab),
            c.order()
        )),
    }
    line
}

fn descriptor_doc(d: &PronilDescriptor) -> serde_json::Value {
    let overrides: serde_json::Map<String, serde_json::Value> = d
        .overrides()
        .iter()
        .map(|(p, r)| (p.to_string(), json!(r)))
        .collect();
    json!({
        "generic_rank": d.generic_rank(),
        "overrides": overrides,
        "route": match d.source() {
            DescriptorSource::Direct => "direct",
            DescriptorSource::Returns(_) => "return substitution",
        },
        "quotient_criterion": d.quotient_criterion(),
    })
}

fn freeness_text(f: &FreenessReport) -> String {
    let mut out = format!("perfect: {}\n", yesno(f.perfect));
    out.push_str(&match &f.not_absolutely_free {
        TestOutcome::Established(pdet) => {
            format!("not absolutely free: established (pseudodeterminant {pdet})\n")
        }
        TestOutcome::Inconclusive => "not absolutely free: inconclusive\n".into(),
    });
    if let Some(k) = f.constant_length {
        out.push_str(&format!(
            "constant length {k} independently rules out absolute freeness\n"
        ));
    }
    out.push_str(&match &f.weak_test {
        TestOutcome::Established((p1, p2)) => {
            format!("weak test: established with primes ({p1}, {p2})\n")
        }
        TestOutcome::Inconclusive => "weak test: inconclusive\n".into(),
    });
    out.push_str(&match &f.not_relatively_free {
        TestOutcome::Established(p) => format!("relative test: established (witness p={p})\n"),
        TestOutcome::Inconclusive => "relative test: inconclusive\n".into(),
    });
    out
}

fn flow_text(f: &FlowInvariants) -> String {
    let degrees: Vec<String> = f
        .degrees
        .iter()
        .map(|(p, d)| format!("p={p} -> {d}"))
        .collect();
    let primes: Vec<String> = f.pdet_primes.iter().map(u64::to_string).collect();
    format!(
        "flow invariants: generic degree {}{}; pdet primes {{{}}}",
        f.generic_degree,
        if degrees.is_empty() {
            String::new()
        } else {
            format!(", {}", degrees.join(", "))
        },
        primes.join(", ")
    )
}

fn expression_text(e: &FreeGroupEndo, expr: &[SignedLetter]) -> String {
    if expr.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = expr
        .iter()
        .map(|f| {
            let mut s = e.alphabet().name(f.letter).to_string();
            if f.inverse {
                s.push('\'');
            }
            s
        })
        .collect();
    parts.join(" ")
}

/// Group element as raw data: a row-major `[a, b, c, d]` of field-element
/// indices for SL2, the 0-based image list for a permutation.
fn element_doc(h: &FiniteGroup, x: u64) -> serde_json::Value {
    match h {
        FiniteGroup::Sl2(g) => {
            let (a, b, c, d) = g.unpack(x);
            json!([a, b, c, d])
        }
        FiniteGroup::Perm(g) => {
            let images: Vec<u64> = (0..g.points()).map(|i| (x >> (4 * i)) & 0xF).collect();
            json!(images)
        }
    }
}

fn group_doc(h: &FiniteGroup, spec: &str) -> serde_json::Value {
    match h {
        FiniteGroup::Sl2(g) => json!({
            "spec": spec,
            "kind": "sl2",
            "field_degree": g.field().degree(),
            "field_poly_bits": g.field().poly_bits(),
            "order": h.order().to_string(),
        }),
        FiniteGroup::Perm(g) => json!({
            "spec": spec,
            "kind": "perm",
            "points": g.points(),
            "order": h.order().to_string(),
        }),
    }
}

fn certificate_doc(
    h: &FiniteGroup,
    e: &FreeGroupEndo,
    c: &QuotientCertificate,
) -> serde_json::Value {
    let tuple: Vec<serde_json::Value> = c
        .tuple
        .entries()
        .iter()
        .map(|&x| element_doc(h, x))
        .collect();
    let display: Vec<String> = c
        .tuple
        .entries()
        .iter()
        .map(|&x| h.display_element(x))
        .collect();
    let witnesses: Vec<serde_json::Value> = c
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "target": element_doc(h, w.target),
                "expression": expression_text(e, &w.expression),
            })
        })
        .collect();
    json!({
        "period": c.period,
        "tuple": tuple,
        "tuple_display": display,
        "witnesses": witnesses,
    })
}
