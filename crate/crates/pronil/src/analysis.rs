//! Pronilpotent-quotient analysis: per-prime dimensions, the finite
//! descriptor of the maximal pronilpotent quotient, perfectness, freeness
//! tests, the connection invariant m, and flow invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lang::{classify_periodicity, structural_flags, Periodicity};
use crate::matrix::IntMatrix;
use crate::poly::{xi_pair, IntPoly};
use crate::primes::factor_bigint;
use crate::returns::{find_connections, return_substitution, Connection, ReturnData};
use crate::words::{FreeGroupEndo, Substitution};

/// Degree of the reciprocal characteristic polynomial mod p: the rank of
/// the p-Sylow factor of the maximal pronilpotent quotient.
///
/// Equals deg(chi mod p) minus the multiplicity of zero as a root, and is
/// cross-checked here against the rank over Z/pZ of M^d, the dimension of
/// the complement of the generalized null space.
pub fn dimension_p(m: &IntMatrix, p: u64) -> Result<usize> {
    let chi = m.char_poly()?;
    let cp = chi.reduce_mod(p)?;
    let d = m.rows();
    let low = cp.coeffs().iter().position(|&c| c != 0).expect("monic polynomial mod p");
    let deg = d - low;
    let rank = m.reduce_mod(p)?.pow(d).rank();
    if rank != deg {
        return Err(Error::Internal(format!(
            "dimension formula mismatch at p={}: degree {} but stabilized rank {}",
            p, deg, rank
        )));
    }
    Ok(deg)
}

/// Primes dividing the pseudodeterminant, in increasing order.
pub fn pdet_primes(m: &IntMatrix) -> Result<Vec<u64>> {
    let pdet = m.pseudodeterminant()?;
    Ok(factor_bigint(&pdet)?.into_iter().map(|(p, _)| p).collect())
}

/// Which endomorphism a descriptor was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorSource {
    /// The substitution or endomorphism itself.
    Direct,
    /// The return substitution of this connection.
    Returns(Connection),
}

/// Finite description of the maximal pronilpotent quotient: one rank for
/// all but finitely many primes, with overrides where the rank drops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PronilDescriptor {
    generic_rank: usize,
    overrides: BTreeMap<u64, usize>,
    source: DescriptorSource,
}

impl PronilDescriptor {
    pub fn generic_rank(&self) -> usize {
        self.generic_rank
    }

    pub fn overrides(&self) -> &BTreeMap<u64, usize> {
        &self.overrides
    }

    pub fn source(&self) -> &DescriptorSource {
        &self.source
    }

    /// Rank of the p-Sylow factor.
    pub fn rank_at(&self, p: u64) -> usize {
        *self.overrides.get(&p).unwrap_or(&self.generic_rank)
    }

    /// The trichotomy read off the overrides.
    pub fn classify(&self) -> Classification {
        if self.overrides.is_empty() {
            Classification::FreePronilpotent { rank: self.generic_rank }
        } else if self.overrides.values().all(|&r| r == 0) {
            Classification::RelativelyFree {
                rank: self.generic_rank,
                excluded_primes: self.overrides.keys().copied().collect(),
            }
        } else {
            let witness = *self
                .overrides
                .iter()
                .find(|(_, &r)| r > 0)
                .expect("some override is positive")
                .0;
            Classification::NotRelativelyFree { witness }
        }
    }

    /// Which pronilpotent groups arise as continuous quotients.
    pub fn quotient_criterion(&self) -> String {
        let clause = |r: usize| match r {
            0 => "trivial".to_string(),
            _ => format!("{}-generated", r),
        };
        let mut parts: Vec<String> = self
            .overrides
            .iter()
            .map(|(p, &r)| format!("its {}-Sylow subgroup is {}", p, clause(r)))
            .collect();
        if parts.is_empty() {
            parts.push(format!("each of its Sylow subgroups is {}", clause(self.generic_rank)));
        } else {
            parts.push(format!(
                "every other Sylow subgroup is {}",
                clause(self.generic_rank)
            ));
        }
        format!(
            "a pronilpotent group is a continuous quotient iff {}",
            parts.join(" and ")
        )
    }
}

/// Classification of the maximal pronilpotent quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Free pronilpotent: full rank at every prime.
    FreePronilpotent { rank: usize },
    /// Free relative to the nilpotent groups with trivial Sylow subgroups
    /// at the excluded primes.
    RelativelyFree { rank: usize, excluded_primes: Vec<u64> },
    /// Some prime has intermediate rank.
    NotRelativelyFree { witness: u64 },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::FreePronilpotent { rank } => {
                write!(f, "free pronilpotent of rank {}", rank)
            }
            Classification::RelativelyFree { rank, excluded_primes } => {
                let list =
                    excluded_primes.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
                write!(f, "free pro-G_{{nil,\u{3c0}}} of rank {}, \u{3c0} = primes \u{2260} {}", rank, list)
            }
            Classification::NotRelativelyFree { witness } => {
                write!(f, "not relatively free (witness p={})", witness)
            }
        }
    }
}

/// Descriptor of an incidence matrix: generic rank plus overrides at the
/// primes dividing the pseudodeterminant, the only primes where the
/// reciprocal degree can drop.
pub fn descriptor_of_matrix(m: &IntMatrix, source: DescriptorSource) -> Result<PronilDescriptor> {
    let generic = m.char_poly()?.reciprocal()?.degree().expect("reciprocal is non-zero");
    let mut overrides = BTreeMap::new();
    for p in pdet_primes(m)? {
        let d = dimension_p(m, p)?;
        if d > generic {
            return Err(Error::Internal(format!(
                "dimension at p={} exceeds the generic rank",
                p
            )));
        }
        if d != generic {
            overrides.insert(p, d);
        }
    }
    Ok(PronilDescriptor { generic_rank: generic, overrides, source })
}

fn ensure_aperiodic(s: &Substitution) -> Result<()> {
    match classify_periodicity(s, None)? {
        Periodicity::Periodic(_) => Err(Error::PeriodicInput),
        _ => Ok(()),
    }
}

/// Descriptor computed directly from a proper primitive aperiodic
/// substitution, which presents its own group.
pub fn pronil_descriptor(s: &Substitution) -> Result<PronilDescriptor> {
    ensure_aperiodic(s)?;
    if !structural_flags(s).proper {
        return Err(Error::Precondition(
            "substitution is not proper; analyze one of its return substitutions".into(),
        ));
    }
    descriptor_of_matrix(&IntMatrix::incidence(s), DescriptorSource::Direct)
}

/// Descriptor of the group presented by a free-group endomorphism.
pub fn pronil_descriptor_endo(e: &FreeGroupEndo) -> Result<PronilDescriptor> {
    descriptor_of_matrix(&IntMatrix::incidence_endo(e), DescriptorSource::Direct)
}

/// Descriptor computed from a return substitution.
pub fn pronil_descriptor_returns(data: &ReturnData) -> Result<PronilDescriptor> {
    descriptor_of_matrix(
        &IntMatrix::incidence(data.derived()),
        DescriptorSource::Returns(data.connection().clone()),
    )
}

/// True iff the presented group is perfect: the incidence matrix is
/// nilpotent.
pub fn perfectness_test(m: &IntMatrix) -> Result<bool> {
    m.is_nilpotent()
}

/// Outcome of a one-sided test: established with a witness, or nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestOutcome<W> {
    Established(W),
    Inconclusive,
}

impl<W> TestOutcome<W> {
    pub fn is_established(&self) -> bool {
        matches!(self, TestOutcome::Established(_))
    }
}

/// Everything the one-sided freeness tests can say about a substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    /// Nilpotent incidence matrix; never holds for primitive input.
    pub perfect: bool,
    /// Established when |pdet| is not 1; the witness is the
    /// pseudodeterminant itself.
    pub not_absolutely_free: TestOutcome<BigInt>,
    /// Established when some prime has intermediate rank on the presenting
    /// endomorphism; the witness is the least such prime.
    pub not_relatively_free: TestOutcome<u64>,
    /// Established when two primes drop the degree by different amounts on
    /// the substitution itself, witnessing non-relative-freeness without
    /// return words.
    pub weak_test: TestOutcome<(u64, u64)>,
    /// Common image length when there is one, which already rules out
    /// absolute freeness.
    pub constant_length: Option<usize>,
}

/// Runs the four freeness tests. The relative test runs on the supplied
/// connection's return substitution, on the substitution itself when it is
/// proper, or on the first found connection otherwise.
pub fn freeness_report(s: &Substitution, c: Option<&Connection>) -> Result<FreenessReport> {
    ensure_aperiodic(s)?;
    let m = IntMatrix::incidence(s);
    let perfect = m.is_nilpotent()?;
    let pdet = m.pseudodeterminant()?;
    let not_absolutely_free = if pdet.magnitude().is_one() {
        TestOutcome::Inconclusive
    } else {
        TestOutcome::Established(pdet)
    };

    let generic = m.char_poly()?.reciprocal()?.degree().expect("reciprocal is non-zero");
    let own_primes = pdet_primes(&m)?;
    let mut own_dims = Vec::new();
    for &p in &own_primes {
        own_dims.push((p, dimension_p(&m, p)?));
    }
    let mut weak_test = TestOutcome::Inconclusive;
    'outer: for (i, &(p1, d1)) in own_dims.iter().enumerate() {
        for &(p2, d2) in &own_dims[i + 1..] {
            if d1 < d2 && d2 < generic {
                weak_test = TestOutcome::Established((p1, p2));
                break 'outer;
            }
        }
    }

    let presenting = match c {
        Some(c) => descriptor_of_matrix(
            &IntMatrix::incidence(return_substitution(s, c)?.derived()),
            DescriptorSource::Returns(c.clone()),
        )?,
        None if structural_flags(s).proper => {
            descriptor_of_matrix(&m, DescriptorSource::Direct)?
        }
        None => {
            let conns = find_connections(s, 1)?;
            let first = conns.into_iter().next().ok_or_else(|| {
                Error::Internal("primitive substitution with no single-letter connection".into())
            })?;
            let data = return_substitution(s, &first)?;
            pronil_descriptor_returns(&data)?
        }
    };
    let not_relatively_free = presenting
        .overrides()
        .iter()
        .find(|(_, &r)| r > 0 && r < presenting.generic_rank())
        .map(|(&p, _)| TestOutcome::Established(p))
        .unwrap_or(TestOutcome::Inconclusive);

    Ok(FreenessReport {
        perfect,
        not_absolutely_free,
        not_relatively_free,
        weak_test,
        constant_length: structural_flags(s).constant_length,
    })
}

/// The cofactor pair linking the reciprocal characteristic polynomials of
/// phi^n and of the return substitution: xi1 * chi_{phi^n}^rev = +-xi2 *
/// chi_ret^rev with both factors coprime products of cyclotomics.
pub fn connection_xi(s: &Substitution, data: &ReturnData) -> Result<(IntPoly, IntPoly)> {
    let n = data.connection().order();
    let a = IntMatrix::incidence(s).pow(n).char_poly()?.reciprocal()?;
    let b = IntMatrix::incidence(data.derived()).char_poly()?.reciprocal()?;
    xi_pair(&a, &b)
}

/// The degree shift between the return substitution and the substitution:
/// deg chi_ret^rev - deg chi^rev, verified prime by prime and against the
/// cofactor pair.
pub fn m_phi_from_data(s: &Substitution, data: &ReturnData) -> Result<i64> {
    let ms = IntMatrix::incidence(s);
    let mr = IntMatrix::incidence(data.derived());
    let gs = ms.char_poly()?.reciprocal()?.degree().expect("non-zero") as i64;
    let gr = mr.char_poly()?.reciprocal()?.degree().expect("non-zero") as i64;
    let m = gr - gs;

    let mut primes: BTreeSet<u64> = pdet_primes(&ms)?.into_iter().collect();
    primes.extend(pdet_primes(&mr)?);
    for p in primes {
        let ds = dimension_p(&ms, p)? as i64;
        let dr = dimension_p(&mr, p)? as i64;
        if dr - ds != m {
            return Err(Error::Internal(format!(
                "degree shift at p={} is {} instead of {}",
                p,
                dr - ds,
                m
            )));
        }
    }

    let n = data.connection().order();
    let ga = IntMatrix::incidence(s)
        .pow(n)
        .char_poly()?
        .reciprocal()?
        .degree()
        .expect("non-zero") as i64;
    let (xi1, xi2) = connection_xi(s, data)?;
    let d1 = xi1.degree().expect("non-zero") as i64;
    let d2 = xi2.degree().expect("non-zero") as i64;
    if d1 - d2 - (ga - gs) != m {
        return Err(Error::Internal("cofactor degrees disagree with the degree shift".into()));
    }
    Ok(m)
}

/// Degree shift of a valid connection of a primitive aperiodic
/// substitution.
pub fn m_phi(s: &Substitution, c: &Connection) -> Result<i64> {
    ensure_aperiodic(s)?;
    let data = return_substitution(s, c)?;
    m_phi_from_data(s, &data)
}

/// The two flow-equivalence invariants: the per-prime reciprocal degrees
/// of the return substitution and the primes dividing its
/// pseudodeterminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowInvariants {
    pub generic_degree: usize,
    /// Degree at each prime dividing the pseudodeterminant (the degree may
    /// or may not drop there).
    pub degrees: Vec<(u64, usize)>,
    pub pdet_primes: Vec<u64>,
}

/// Flow invariants read off a return substitution.
pub fn flow_invariants_from_data(data: &ReturnData) -> Result<FlowInvariants> {
    let m = IntMatrix::incidence(data.derived());
    let generic = m.char_poly()?.reciprocal()?.degree().expect("non-zero");
    let primes = pdet_primes(&m)?;
    let mut degrees = Vec::new();
    for &p in &primes {
        degrees.push((p, dimension_p(&m, p)?));
    }
    Ok(FlowInvariants { generic_degree: generic, degrees, pdet_primes: primes })
}

/// Flow invariants of a valid connection of a primitive aperiodic
/// substitution.
pub fn flow_invariants(s: &Substitution, c: &Connection) -> Result<FlowInvariants> {
    ensure_aperiodic(s)?;
    let data = return_substitution(s, c)?;
    flow_invariants_from_data(&data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn sub(text: &str) -> Substitution {
        Substitution::parse(text).unwrap()
    }

    fn word(s: &Substitution, text: &str) -> Word {
        let letters = text
            .chars()
            .map(|c| s.alphabet().index_of(&c.to_string()).unwrap())
            .collect::<Vec<_>>();
        Word::new(letters)
    }

    fn return_data(s: &Substitution, u: &str, v: &str) -> ReturnData {
        let c = Connection::identify(s, word(s, u), word(s, v)).unwrap();
        return_substitution(s, &c).unwrap()
    }

    #[test]
    fn dimensions_of_the_morse_return_substitution() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let data = return_data(&tau, "0", "1");
        let m = IntMatrix::incidence(data.derived());
        assert_eq!(dimension_p(&m, 2).unwrap(), 1);
        assert_eq!(dimension_p(&m, 3).unwrap(), 2);
        assert_eq!(dimension_p(&m, 5).unwrap(), 2);
    }

    #[test]
    fn morse_descriptor_and_classification() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let data = return_data(&tau, "0", "1");
        let desc = pronil_descriptor_returns(&data).unwrap();
        assert_eq!(desc.generic_rank(), 2);
        assert_eq!(desc.overrides(), &BTreeMap::from([(2, 1)]));
        assert_eq!(desc.rank_at(2), 1);
        assert_eq!(desc.rank_at(7), 2);
        assert_eq!(
            desc.classify(),
            Classification::NotRelativelyFree { witness: 2 }
        );
        assert_eq!(desc.classify().to_string(), "not relatively free (witness p=2)");
        assert_eq!(
            desc.quotient_criterion(),
            "a pronilpotent group is a continuous quotient iff its 2-Sylow subgroup is \
             1-generated and every other Sylow subgroup is 2-generated"
        );
    }

    #[test]
    fn ternary_example_descriptor_and_classification() {
        let neg = sub("0 -> 120\n1 -> 121\n2 -> 200\n");
        let data = return_data(&neg, "0", "1");
        let m = IntMatrix::incidence(data.derived());
        assert_eq!(dimension_p(&m, 3).unwrap(), 0);
        let desc = pronil_descriptor_returns(&data).unwrap();
        assert_eq!(desc.generic_rank(), 1);
        assert_eq!(desc.overrides(), &BTreeMap::from([(3, 0)]));
        assert_eq!(
            desc.classify().to_string(),
            "free pro-G_{nil,\u{3c0}} of rank 1, \u{3c0} = primes \u{2260} 3"
        );
    }

    #[test]
    fn weak_test_example_descriptor() {
        let s = sub("0 -> 1001\n1 -> 000\n");
        let data = return_data(&s, "0", "0");
        let desc = pronil_descriptor_returns(&data).unwrap();
        assert_eq!(desc.generic_rank(), 3);
        assert_eq!(desc.overrides(), &BTreeMap::from([(2, 1), (3, 2)]));
        assert_eq!(
            desc.classify(),
            Classification::NotRelativelyFree { witness: 2 }
        );
    }

    #[test]
    fn unimodular_example_is_free_pronilpotent() {
        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        for (u, v) in [("1", "0"), ("0", "1")] {
            let data = return_data(&cyclo, u, v);
            let desc = pronil_descriptor_returns(&data).unwrap();
            assert_eq!(desc.generic_rank(), 3);
            assert!(desc.overrides().is_empty());
            assert_eq!(desc.classify().to_string(), "free pronilpotent of rank 3");
        }
    }

    #[test]
    fn xi_pairs_of_the_examples() {
        let p = IntPoly::from_i64;
        let tau = sub("0 -> 01\n1 -> 10\n");
        let data = return_data(&tau, "0", "1");
        assert_eq!(connection_xi(&tau, &data).unwrap(), (p(&[-1, 1]), p(&[1])));

        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        let d10 = return_data(&cyclo, "1", "0");
        assert_eq!(connection_xi(&cyclo, &d10).unwrap(), (p(&[1, 1]), p(&[-1, 1])));
        let d01 = return_data(&cyclo, "0", "1");
        assert_eq!(connection_xi(&cyclo, &d01).unwrap(), (p(&[1]), p(&[1])));
    }

    #[test]
    fn degree_shifts_of_the_examples() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        assert_eq!(m_phi(&tau, &c).unwrap(), 1);

        let neg = sub("0 -> 120\n1 -> 121\n2 -> 200\n");
        let c = Connection::identify(&neg, word(&neg, "0"), word(&neg, "1")).unwrap();
        assert_eq!(m_phi(&neg, &c).unwrap(), -1);

        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        for (u, v) in [("1", "0"), ("0", "1")] {
            let c = Connection::identify(&cyclo, word(&cyclo, u), word(&cyclo, v)).unwrap();
            assert_eq!(m_phi(&cyclo, &c).unwrap(), 0);
        }
    }

    #[test]
    fn tedious_example_analysis() {
        let s = sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n");
        let data = return_data(&s, "2", "3");
        let desc = pronil_descriptor_returns(&data).unwrap();
        assert_eq!(desc.generic_rank(), 10);
        assert_eq!(desc.overrides(), &BTreeMap::from([(2, 6)]));
        assert_eq!(m_phi_from_data(&s, &data).unwrap(), 6);
        let (xi1, xi2) = connection_xi(&s, &data).unwrap();
        // (x - 1)^6
        assert_eq!(xi1, IntPoly::from_i64(&[1, -6, 15, -20, 15, -6, 1]));
        assert_eq!(xi2, IntPoly::one());
        let flow = flow_invariants_from_data(&data).unwrap();
        assert_eq!(flow.generic_degree, 10);
        assert_eq!(flow.degrees, vec![(2, 6)]);
        assert_eq!(flow.pdet_primes, vec![2]);
    }

    #[test]
    fn perfectness_of_incidence_matrices() {
        let psi = FreeGroupEndo::parse("0 -> 0 1 0' 1'\n1 -> 0\n").unwrap();
        assert!(perfectness_test(&IntMatrix::incidence_endo(&psi)).unwrap());

        let tau = sub("0 -> 01\n1 -> 10\n");
        assert!(!perfectness_test(&IntMatrix::incidence(&tau)).unwrap());

        let ident = FreeGroupEndo::parse("0 -> 0\n").unwrap();
        assert!(!perfectness_test(&IntMatrix::incidence_endo(&ident)).unwrap());
    }

    #[test]
    fn perfect_endomorphism_descriptor_is_trivial() {
        let psi = FreeGroupEndo::parse("0 -> 0 1 0' 1'\n1 -> 0\n").unwrap();
        let desc = pronil_descriptor_endo(&psi).unwrap();
        assert_eq!(desc.generic_rank(), 0);
        assert!(desc.overrides().is_empty());
    }

    #[test]
    fn freeness_report_for_morse() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let report = freeness_report(&tau, None).unwrap();
        assert!(!report.perfect);
        assert_eq!(
            report.not_absolutely_free,
            TestOutcome::Established(BigInt::from(2))
        );
        assert_eq!(report.not_relatively_free, TestOutcome::Established(2));
        assert_eq!(report.weak_test, TestOutcome::Inconclusive);
        assert_eq!(report.constant_length, Some(2));
    }

    #[test]
    fn freeness_report_weak_test_example() {
        let s = sub("0 -> 1001\n1 -> 000\n");
        let report = freeness_report(&s, None).unwrap();
        assert_eq!(report.weak_test, TestOutcome::Established((2, 3)));
        assert_eq!(report.not_relatively_free, TestOutcome::Established(2));
        assert_eq!(report.constant_length, None);
    }

    #[test]
    fn freeness_report_unimodular_example() {
        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        let report = freeness_report(&cyclo, None).unwrap();
        assert!(!report.perfect);
        assert_eq!(report.not_absolutely_free, TestOutcome::Inconclusive);
        assert_eq!(report.not_relatively_free, TestOutcome::Inconclusive);
        assert_eq!(report.weak_test, TestOutcome::Inconclusive);
        assert_eq!(report.constant_length, None);
    }

    #[test]
    fn proper_substitution_admits_both_routes() {
        let s = sub("0 -> 01\n1 -> 0001\n");
        let direct = pronil_descriptor(&s).unwrap();
        assert_eq!(direct.generic_rank(), 2);
        assert_eq!(direct.overrides(), &BTreeMap::from([(2, 0)]));
        assert_eq!(
            direct.classify().to_string(),
            "free pro-G_{nil,\u{3c0}} of rank 2, \u{3c0} = primes \u{2260} 2"
        );

        let conns = find_connections(&s, 1).unwrap();
        let data = return_substitution(&s, &conns[0]).unwrap();
        let via_returns = pronil_descriptor_returns(&data).unwrap();
        assert_eq!(direct.generic_rank(), via_returns.generic_rank());
        assert_eq!(direct.overrides(), via_returns.overrides());
    }

    #[test]
    fn preconditions_are_enforced() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        assert!(matches!(pronil_descriptor(&tau), Err(Error::Precondition(_))));

        let periodic = sub("0 -> 01\n1 -> 01\n");
        assert!(matches!(pronil_descriptor(&periodic), Err(Error::PeriodicInput)));
        assert!(matches!(freeness_report(&periodic, None), Err(Error::PeriodicInput)));

        let nonprim = sub("0 -> 01\n1 -> 1\n");
        assert!(matches!(freeness_report(&nonprim, None), Err(Error::NotPrimitive)));
    }
}
