//! End-to-end analysis reports: orchestration, human rendering, JSON
//! documents, and re-derivation checks.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::analysis::{
    connection_xi, descriptor_of_matrix, flow_invariants_from_data, freeness_report,
    m_phi_from_data, perfectness_test, pronil_descriptor_endo, pronil_descriptor_returns,
    DescriptorSource, FlowInvariants, FreenessReport, PronilDescriptor, TestOutcome,
};
use crate::error::{Error, Result};
use crate::lang::{classify_periodicity, structural_flags, Periodicity, StructuralFlags};
use crate::matrix::IntMatrix;
use crate::poly::{IntPoly, ModPoly};
use crate::returns::{find_connections, return_substitution, Connection};
use crate::words::{Alphabet, FreeGroupEndo, Substitution, Word};

/// Analysis attached to one chosen connection.
#[derive(Clone, Debug)]
pub struct ConnectionReport {
    pub connection: Connection,
    pub returns: Vec<Word>,
    pub derived: Substitution,
    pub chi_ret: IntPoly,
    pub chi_ret_rev: IntPoly,
    pub ret_pdet: BigInt,
    /// Reciprocal of the return substitution reduced at each override
    /// prime of the descriptor.
    pub reductions: Vec<(u64, ModPoly)>,
    pub xi: (IntPoly, IntPoly),
    pub m: i64,
}

/// Everything the analysis pipeline derives from one substitution.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub input: Substitution,
    pub flags: StructuralFlags,
    pub periodicity: Periodicity,
    pub chi: IntPoly,
    pub chi_rev: IntPoly,
    pub pdet: BigInt,
    /// All connections with single-letter words, sorted.
    pub connections: Vec<Connection>,
    /// Absent for periodic input.
    pub chosen: Option<ConnectionReport>,
    pub descriptor: Option<PronilDescriptor>,
    pub freeness: Option<FreenessReport>,
    pub flow: Option<FlowInvariants>,
    pub classification: String,
    pub elapsed_ms: u64,
}

/// Runs the whole pipeline. The connection defaults to the first one in
/// sorted order; periodic input short-circuits to the rank-one verdict.
pub fn analyze_substitution(
    s: &Substitution,
    chosen: Option<(Word, Word)>,
) -> Result<AnalysisReport> {
    let start = Instant::now();
    let m = IntMatrix::incidence(s);
    let chi = m.char_poly()?;
    let chi_rev = chi.reciprocal()?;
    let pdet = m.pseudodeterminant()?;
    let flags = structural_flags(s);
    let periodicity = classify_periodicity(s, None)?;

    if let Periodicity::Periodic(_) = &periodicity {
        return Ok(AnalysisReport {
            input: s.clone(),
            flags,
            periodicity,
            chi,
            chi_rev,
            pdet,
            connections: Vec::new(),
            chosen: None,
            descriptor: None,
            freeness: None,
            flow: None,
            classification: "free profinite of rank 1".into(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }

    let connections = find_connections(s, 1)?;
    let connection = match chosen {
        Some((u, v)) => Connection::identify(s, u, v)?,
        None => connections
            .first()
            .cloned()
            .ok_or_else(|| Error::Internal("no single-letter connection found".into()))?,
    };
    let data = return_substitution(s, &connection)?;

    let ret_m = IntMatrix::incidence(data.derived());
    let chi_ret = ret_m.char_poly()?;
    let chi_ret_rev = chi_ret.reciprocal()?;
    let ret_pdet = ret_m.pseudodeterminant()?;
    let descriptor = pronil_descriptor_returns(&data)?;
    let mut reductions = Vec::new();
    for &p in descriptor.overrides().keys() {
        reductions.push((p, chi_ret_rev.reduce_mod(p)?));
    }
    let xi = connection_xi(s, &data)?;
    let m_shift = m_phi_from_data(s, &data)?;

    if flags.proper {
        let direct = descriptor_of_matrix(&m, DescriptorSource::Direct)?;
        if direct.generic_rank() != descriptor.generic_rank()
            || direct.overrides() != descriptor.overrides()
        {
            return Err(Error::Internal(
                "direct and return-substitution descriptors disagree on proper input".into(),
            ));
        }
    }

    let freeness = freeness_report(s, Some(&connection))?;
    let flow = flow_invariants_from_data(&data)?;
    let classification = descriptor.classify().to_string();

    Ok(AnalysisReport {
        input: s.clone(),
        flags,
        periodicity,
        chi,
        chi_rev,
        pdet,
        connections,
        chosen: Some(ConnectionReport {
            connection,
            returns: data.returns().to_vec(),
            derived: data.derived().clone(),
            chi_ret,
            chi_ret_rev,
            ret_pdet,
            reductions,
            xi,
            m: m_shift,
        }),
        descriptor: Some(descriptor),
        freeness: Some(freeness),
        flow: Some(flow),
        classification,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Indented rule lines with images in the compact display (concatenated
/// for single-character alphabets).
fn compact_rules(s: &Substitution) -> String {
    let ab = s.alphabet();
    s.images()
        .iter()
        .enumerate()
        .map(|(a, img)| format!("  {} -> {}\n", ab.quoted_name(a), img.display(ab)))
        .collect()
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl AnalysisReport {
    fn alphabet(&self) -> &Alphabet {
        self.input.alphabet()
    }

    fn connection_text(&self, c: &Connection) -> String {
        format!(
            "({}, {}) of order {}",
            c.u().display(self.alphabet()),
            c.v().display(self.alphabet()),
            c.order()
        )
    }

    /// Human-readable report; the last line is the classification.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let ab = self.alphabet();
        out.push_str(&format!("substitution on {} letters:\n", ab.size()));
        out.push_str(&compact_rules(&self.input));
        out.push_str(&format!(
            "structural flags: proper: {}; constant length: {}\n",
            yesno(self.flags.proper),
            self.flags.constant_length.map_or("none".into(), |k| k.to_string()),
        ));
        match &self.periodicity {
            Periodicity::Periodic(w) => out.push_str(&format!(
                "periodicity: periodic with minimal period word {}\n",
                w.display(ab)
            )),
            Periodicity::Aperiodic => out.push_str("periodicity: aperiodic\n"),
            Periodicity::Unknown { bound } => {
                out.push_str(&format!("periodicity: unknown at bound {}\n", bound))
            }
        }
        out.push_str(&format!("chi = {}\n", self.chi));
        out.push_str(&format!("chi^rev = {}\n", self.chi_rev));
        out.push_str(&format!(
            "pseudodeterminant: {} (convention: leading coefficient of chi^rev times (-1)^deg)\n",
            self.pdet
        ));
        if !self.connections.is_empty() {
            let list: Vec<String> =
                self.connections.iter().map(|c| self.connection_text(c)).collect();
            out.push_str(&format!("single-letter connections: {}\n", list.join("; ")));
        }
        if let Some(c) = &self.chosen {
            out.push_str(&format!("chosen connection: {}\n", self.connection_text(&c.connection)));
            let words: Vec<String> = c.returns.iter().map(|r| r.display(ab)).collect();
            out.push_str(&format!(
                "return words ({}, in order of first occurrence): {}\n",
                words.len(),
                words.join(" ")
            ));
            out.push_str("return substitution:\n");
            out.push_str(&compact_rules(&c.derived));
            out.push_str(&format!("chi_ret = {}\n", c.chi_ret));
            out.push_str(&format!("chi_ret^rev = {}\n", c.chi_ret_rev));
            for (p, poly) in &c.reductions {
                out.push_str(&format!("chi_ret^rev mod {} = {}\n", p, poly));
            }
            out.push_str(&format!("xi1 = {}\n", c.xi.0));
            out.push_str(&format!("xi2 = {}\n", c.xi.1));
            out.push_str(&format!("m = {}\n", c.m));
        }
        if let Some(d) = &self.descriptor {
            let mut line = format!("descriptor: generic rank {}", d.generic_rank());
            for (p, r) in d.overrides() {
                line.push_str(&format!("; p={} -> rank {}", p, r));
            }
            match d.source() {
                DescriptorSource::Direct => line.push_str(" (direct route)"),
                DescriptorSource::Returns(c) => {
                    line.push_str(&format!(" (via return substitution at {})", self.connection_text(c)))
                }
            }
            out.push_str(&line);
            out.push('\n');
            out.push_str(&format!("quotient criterion: {}\n", d.quotient_criterion()));
        }
        if let Some(f) = &self.flow {
            let degrees: Vec<String> =
                f.degrees.iter().map(|(p, d)| format!("p={} -> {}", p, d)).collect();
            let primes: Vec<String> = f.pdet_primes.iter().map(u64::to_string).collect();
            out.push_str(&format!(
                "flow invariants: generic degree {}{}; pdet primes {{{}}}\n",
                f.generic_degree,
                if degrees.is_empty() {
                    String::new()
                } else {
                    format!(", {}", degrees.join(", "))
                },
                primes.join(", ")
            ));
        }
        if let Some(f) = &self.freeness {
            out.push_str(&format!("perfect: {}\n", yesno(f.perfect)));
            out.push_str(&match &f.not_absolutely_free {
                TestOutcome::Established(pdet) => {
                    format!("not absolutely free: established (pseudodeterminant {})\n", pdet)
                }
                TestOutcome::Inconclusive => "not absolutely free: inconclusive\n".into(),
            });
            if let Some(k) = f.constant_length {
                out.push_str(&format!(
                    "constant length {} independently rules out absolute freeness\n",
                    k
                ));
            }
            out.push_str(&match &f.weak_test {
                TestOutcome::Established((p1, p2)) => {
                    format!("weak test: established with primes ({}, {})\n", p1, p2)
                }
                TestOutcome::Inconclusive => "weak test: inconclusive\n".into(),
            });
            out.push_str(&match &f.not_relatively_free {
                TestOutcome::Established(p) => {
                    format!("relative test: established (witness p={})\n", p)
                }
                TestOutcome::Inconclusive => "relative test: inconclusive\n".into(),
            });
        }
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out.push_str(&format!("classification: {}", self.classification));
        out
    }

    /// Serializable document with stable field names.
    pub fn to_doc(&self) -> ReportDoc {
        let freeness = self.freeness.as_ref().map(|f| FreenessDoc {
            perfect: f.perfect,
            not_absolutely_free: match &f.not_absolutely_free {
                TestOutcome::Established(p) => Some(p.to_string()),
                TestOutcome::Inconclusive => None,
            },
            not_relatively_free: match &f.not_relatively_free {
                TestOutcome::Established(p) => Some(*p),
                TestOutcome::Inconclusive => None,
            },
            weak_test: match &f.weak_test {
                TestOutcome::Established((p1, p2)) => Some([*p1, *p2]),
                TestOutcome::Inconclusive => None,
            },
            constant_length: f.constant_length,
        });
        ReportDoc {
            rules: self.input.rules_text(),
            alphabet: self.alphabet().names().to_vec(),
            proper: self.flags.proper,
            constant_length: self.flags.constant_length,
            periodicity: match &self.periodicity {
                Periodicity::Periodic(w) => PeriodicityDoc {
                    kind: "periodic".into(),
                    period_word: Some(w.display(self.alphabet())),
                    bound: None,
                },
                Periodicity::Aperiodic => {
                    PeriodicityDoc { kind: "aperiodic".into(), period_word: None, bound: None }
                }
                Periodicity::Unknown { bound } => PeriodicityDoc {
                    kind: "unknown".into(),
                    period_word: None,
                    bound: Some(*bound),
                },
            },
            chi: PolyDoc::of(&self.chi),
            chi_rev: PolyDoc::of(&self.chi_rev),
            pseudodeterminant: self.pdet.to_string(),
            connections: self
                .connections
                .iter()
                .map(|c| ConnectionDoc {
                    u: c.u().display(self.alphabet()),
                    v: c.v().display(self.alphabet()),
                    order: c.order(),
                })
                .collect(),
            connection_analysis: self.chosen.as_ref().map(|c| ConnectionAnalysisDoc {
                u: c.connection.u().display(self.alphabet()),
                v: c.connection.v().display(self.alphabet()),
                order: c.connection.order(),
                returns: c.returns.iter().map(|r| r.display(self.alphabet())).collect(),
                derived_rules: c.derived.rules_text(),
                chi_ret: PolyDoc::of(&c.chi_ret),
                chi_ret_rev: PolyDoc::of(&c.chi_ret_rev),
                ret_pseudodeterminant: c.ret_pdet.to_string(),
                reductions: c
                    .reductions
                    .iter()
                    .map(|(p, poly)| ReductionDoc { prime: *p, text: poly.to_string() })
                    .collect(),
                xi1: PolyDoc::of(&c.xi.0),
                xi2: PolyDoc::of(&c.xi.1),
                m: c.m,
            }),
            descriptor: self.descriptor.as_ref().map(|d| DescriptorDoc {
                generic_rank: d.generic_rank(),
                overrides: d.overrides().iter().map(|(p, r)| (p.to_string(), *r)).collect(),
                route: match d.source() {
                    DescriptorSource::Direct => "direct".into(),
                    DescriptorSource::Returns(_) => "return substitution".into(),
                },
                quotient_criterion: d.quotient_criterion(),
            }),
            freeness,
            flow_invariants: self.flow.as_ref().map(|f| FlowDoc {
                generic_degree: f.generic_degree,
                degrees: f.degrees.clone(),
                pdet_primes: f.pdet_primes.clone(),
            }),
            classification: self.classification.clone(),
            elapsed_ms: self.elapsed_ms,
        }
    }

    /// Re-runs the pipeline from the echoed rules and checks that every
    /// derived field comes out the same.
    pub fn validate(&self) -> Result<()> {
        let s = Substitution::parse(&self.input.rules_text())?;
        let chosen = self
            .chosen
            .as_ref()
            .map(|c| (c.connection.u().clone(), c.connection.v().clone()));
        let fresh = analyze_substitution(&s, chosen)?;
        let mut a = self.to_doc();
        let mut b = fresh.to_doc();
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        if a != b {
            return Err(Error::Internal("report does not re-derive from its input".into()));
        }
        Ok(())
    }
}

/// Analysis of a free-group endomorphism, which presents its own group.
#[derive(Clone, Debug)]
pub struct EndoReport {
    pub input: FreeGroupEndo,
    pub chi: IntPoly,
    pub chi_rev: IntPoly,
    pub pdet: BigInt,
    pub perfect: bool,
    pub descriptor: PronilDescriptor,
    pub classification: String,
    pub elapsed_ms: u64,
}

/// Descriptor pipeline for endomorphism input.
pub fn analyze_endo(e: &FreeGroupEndo) -> Result<EndoReport> {
    let start = Instant::now();
    let m = IntMatrix::incidence_endo(e);
    let chi = m.char_poly()?;
    let chi_rev = chi.reciprocal()?;
    let pdet = m.pseudodeterminant()?;
    let perfect = perfectness_test(&m)?;
    let descriptor = pronil_descriptor_endo(e)?;
    let classification = descriptor.classify().to_string();
    Ok(EndoReport {
        input: e.clone(),
        chi,
        chi_rev,
        pdet,
        perfect,
        descriptor,
        classification,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

impl EndoReport {
    /// Human-readable report; the last line is the classification.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "free-group endomorphism on {} letters:\n",
            self.input.size()
        ));
        for line in self.input.rules_text().lines() {
            out.push_str(&format!("  {}\n", line));
        }
        out.push_str(&format!("chi = {}\n", self.chi));
        out.push_str(&format!("chi^rev = {}\n", self.chi_rev));
        out.push_str(&format!(
            "pseudodeterminant: {} (convention: leading coefficient of chi^rev times (-1)^deg)\n",
            self.pdet
        ));
        out.push_str(&format!("perfect: {}\n", yesno(self.perfect)));
        if self.perfect {
            out.push_str("the maximal pronilpotent quotient is trivial\n");
        }
        let mut line = format!("descriptor: generic rank {}", self.descriptor.generic_rank());
        for (p, r) in self.descriptor.overrides() {
            line.push_str(&format!("; p={} -> rank {}", p, r));
        }
        out.push_str(&line);
        out.push('\n');
        out.push_str(&format!("quotient criterion: {}\n", self.descriptor.quotient_criterion()));
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out.push_str(&format!("classification: {}", self.classification));
        out
    }

    /// Serializable document with stable field names.
    pub fn to_doc(&self) -> EndoDoc {
        EndoDoc {
            rules: self.input.rules_text(),
            alphabet: self.input.alphabet().names().to_vec(),
            chi: PolyDoc::of(&self.chi),
            chi_rev: PolyDoc::of(&self.chi_rev),
            pseudodeterminant: self.pdet.to_string(),
            perfect: self.perfect,
            descriptor: DescriptorDoc {
                generic_rank: self.descriptor.generic_rank(),
                overrides: self
                    .descriptor
                    .overrides()
                    .iter()
                    .map(|(p, r)| (p.to_string(), *r))
                    .collect(),
                route: "direct".into(),
                quotient_criterion: self.descriptor.quotient_criterion(),
            },
            classification: self.classification.clone(),
            elapsed_ms: self.elapsed_ms,
        }
    }

    /// Re-runs the pipeline from the echoed rules and compares.
    pub fn validate(&self) -> Result<()> {
        let e = FreeGroupEndo::parse(&self.input.rules_text())?;
        let fresh = analyze_endo(&e)?;
        let mut a = self.to_doc();
        let mut b = fresh.to_doc();
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        if a != b {
            return Err(Error::Internal("report does not re-derive from its input".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoDoc {
    pub rules: String,
    pub alphabet: Vec<String>,
    pub chi: PolyDoc,
    pub chi_rev: PolyDoc,
    pub pseudodeterminant: String,
    pub perfect: bool,
    pub descriptor: DescriptorDoc,
    pub classification: String,
    pub elapsed_ms: u64,
}

/// JSON shape of a polynomial: display text plus ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyDoc {
    pub text: String,
    pub coeffs: Vec<String>,
}

impl PolyDoc {
    fn of(p: &IntPoly) -> PolyDoc {
        PolyDoc {
            text: p.to_string(),
            coeffs: p.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityDoc {
    pub kind: String,
    pub period_word: Option<String>,
    pub bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionDoc {
    pub u: String,
    pub v: String,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionDoc {
    pub prime: u64,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionAnalysisDoc {
    pub u: String,
    pub v: String,
    pub order: usize,
    pub returns: Vec<String>,
    pub derived_rules: String,
    pub chi_ret: PolyDoc,
    pub chi_ret_rev: PolyDoc,
    pub ret_pseudodeterminant: String,
    pub reductions: Vec<ReductionDoc>,
    pub xi1: PolyDoc,
    pub xi2: PolyDoc,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptorDoc {
    pub generic_rank: usize,
    pub overrides: BTreeMap<String, usize>,
    pub route: String,
    pub quotient_criterion: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessDoc {
    pub perfect: bool,
    pub not_absolutely_free: Option<String>,
    pub not_relatively_free: Option<u64>,
    pub weak_test: Option<[u64; 2]>,
    pub constant_length: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowDoc {
    pub generic_degree: usize,
    pub degrees: Vec<(u64, usize)>,
    pub pdet_primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDoc {
    pub rules: String,
    pub alphabet: Vec<String>,
    pub proper: bool,
    pub constant_length: Option<usize>,
    pub periodicity: PeriodicityDoc,
    pub chi: PolyDoc,
    pub chi_rev: PolyDoc,
    pub pseudodeterminant: String,
    pub connections: Vec<ConnectionDoc>,
    pub connection_analysis: Option<ConnectionAnalysisDoc>,
    pub descriptor: Option<DescriptorDoc>,
    pub freeness: Option<FreenessDoc>,
    pub flow_invariants: Option<FlowDoc>,
    pub classification: String,
    pub elapsed_ms: u64,
}
