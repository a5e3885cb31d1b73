//! Primitive-prime-divisor analysis and Zsigmondy-bound certificates.
//!
//! A term delta_n has a primitive prime divisor (PPD) if some prime divides
//! it but no earlier term. `ppd_report` computes the exact per-index record
//! from factored sequence values. `zsigmondy` assembles the full evidence
//! trail for a unit: the analytic threshold, the candidate set, the
//! divisibility-criterion eliminations, and factor checks for whatever
//! survives; the certificate is replayable bit for bit.
//!
//! The verification reports at the bottom re-run the complete classification
//! for every unit of each norm class inside the finite search window and
//! cross-check the published failing sets.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclo;
use crate::error::{Error, Result};
use crate::factorint::{self, FactorCache};
use crate::quadring::QuadInt;
use crate::real::DEFAULT_DIGITS;
use crate::search::{self, BoundConstants, NormSign};
use crate::seqkit::{self, DeltaSeq};

/// Classification of a single sequence term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermStatus {
    /// At least one prime divides this term and no earlier one.
    #[serde(rename = "HAS_PPD")]
    HasPpd,
    /// Every prime of this term already divides an earlier term.
    #[serde(rename = "NO_PPD")]
    NoPpd,
    /// |delta_n| = 1: no prime divisors at all; excluded from failing sets.
    #[serde(rename = "UNIT_TERM")]
    UnitTerm,
}

/// Exact per-index record of the sequence analysis.
#[derive(Clone, Debug)]
pub struct TermRecord {
    pub n: u64,
    pub delta: BigInt,
    pub primes: Vec<BigUint>,
    pub primitive: Vec<BigUint>,
    pub status: TermStatus,
    /// Index within delta' (None when n = 2 mod 4 is skipped for norm -1;
    /// for norm 1 the sequences coincide).
    pub delta_prime_index: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PpdReport {
    pub unit: QuadInt,
    pub norm_sign: NormSign,
    pub n_max: u64,
    pub terms: Vec<TermRecord>,
}

impl PpdReport {
    pub fn term(&self, n: u64) -> &TermRecord {
        &self.terms[(n - 1) as usize]
    }

    /// Indices with status NO_PPD that belong to the reported sequence
    /// (for norm -1 the skipped indices n = 2 mod 4 are not counted).
    pub fn failing_delta_indices(&self) -> Vec<u64> {
        self.terms
            .iter()
            .filter(|t| t.status == TermStatus::NoPpd && t.delta_prime_index.is_some())
            .map(|t| t.n)
            .collect()
    }

    /// The same failing terms by their delta' index.
    pub fn failing_delta_prime_indices(&self) -> Vec<u64> {
        self.terms
            .iter()
            .filter(|t| t.status == TermStatus::NoPpd)
            .filter_map(|t| t.delta_prime_index)
            .collect()
    }

    /// Every NO_PPD index including skipped ones.
    pub fn no_ppd_indices_all(&self) -> Vec<u64> {
        self.terms
            .iter()
            .filter(|t| t.status == TermStatus::NoPpd)
            .map(|t| t.n)
            .collect()
    }
}

/// Builds the exact PPD report for delta_1 .. delta_n_max.
///
/// Primitivity is judged against all earlier terms, including the skipped
/// n = 2 mod 4 terms for norm -1 (they contribute no new primes, being
/// negated squares of earlier terms, so this matches the delta'-level
/// notion while staying directly checkable).
pub fn ppd_report(u: &QuadInt, n_max: u64) -> Result<PpdReport> {
    ppd_report_with(u, n_max, factorint::DEFAULT_RHO_BUDGET, None)
}

pub fn ppd_report_with(
    u: &QuadInt,
    n_max: u64,
    budget: u64,
    mut cache: Option<&mut FactorCache>,
) -> Result<PpdReport> {
    let norm_sign = NormSign::of(u)?;
    let seq = DeltaSeq::new(u.clone())?;
    let mut seen: BTreeSet<BigUint> = BTreeSet::new();
    let mut terms = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let delta = seq.get(n)?;
        let factorization = factorint::factorize_cached(&delta, budget, cache.as_deref_mut())?;
        if !factorization.complete {
            return Err(Error::IncompleteFactorizationAt {
                index: n,
                value: delta.magnitude().to_string(),
            });
        }
        let primes: Vec<BigUint> = factorization
            .prime_set()?
            .into_iter()
            .collect();
        let primitive: Vec<BigUint> = primes
            .iter()
            .filter(|p| !seen.contains(*p))
            .cloned()
            .collect();
        let status = if delta.magnitude().is_one() {
            TermStatus::UnitTerm
        } else if primitive.is_empty() {
            TermStatus::NoPpd
        } else {
            TermStatus::HasPpd
        };
        seen.extend(primes.iter().cloned());
        let delta_prime_index = match norm_sign {
            NormSign::Plus => Some(n),
            NormSign::Minus => seqkit::delta_prime_index(n),
        };
        terms.push(TermRecord {
            n,
            delta,
            primes,
            primitive,
            status,
            delta_prime_index,
        });
    }
    Ok(PpdReport {
        unit: u.clone(),
        norm_sign,
        n_max,
        terms,
    })
}

// ---------------------------------------------------------------------------
// Zsigmondy certificates.
// ---------------------------------------------------------------------------

/// How a candidate index was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Disposition {
    /// |N(phi_n(u))| does not divide n^2, so the term has a PPD.
    EliminatedByEq1,
    /// The criterion is inconclusive; the term was factor-checked.
    NeedsFactoring,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateCheck {
    pub n: u64,
    /// N(phi_n(u)), exact.
    pub cyclotomic_norm: String,
    pub divides_n_squared: bool,
    pub disposition: Disposition,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSummary {
    pub n: u64,
    pub delta: String,
    pub primes: Vec<String>,
    pub primitive: Vec<String>,
    pub status: TermStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prime_index: Option<u64>,
}

/// The full evidence trail for a claimed Zsigmondy bound.
///
/// Field order is stable and all integers are decimal strings, so identical
/// configurations serialize to identical bytes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZsigmondyCertificate {
    pub unit: String,
    pub d: u64,
    pub half_x: String,
    pub half_y: String,
    pub norm: i8,
    /// The constant c with g(n) < c - log log u, as quoted.
    pub g_constant: String,
    /// c - log log u at 50 digits: the actual threshold solved.
    pub threshold_constant: String,
    /// Largest n with g(n) below the threshold constant.
    pub n_max: u64,
    /// Indices in (6, n_max] surviving the exponential inequality
    /// (n = 2 mod 4 removed for norm -1).
    pub candidates: Vec<u64>,
    pub candidate_checks: Vec<CandidateCheck>,
    /// Factor checks cover 1..=factor_checked_max.
    pub factor_checked_max: u64,
    pub terms: Vec<TermSummary>,
    pub failing_delta_indices: Vec<u64>,
    /// For norm -1, the same failures as delta' indices.
    pub failing_delta_prime_indices: Vec<u64>,
    /// The Zsigmondy bound: max failing index, or 1 by convention when no
    /// term fails. For norm -1 this is an index into delta'.
    pub z: Option<u64>,
    /// For norm -1: the delta index corresponding to z.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_delta_index: Option<u64>,
    /// True when the failing set is empty and z = 1 is reported by the
    /// convention that matches the published statements.
    pub z_by_convention: bool,
    /// True when some listed prime is beyond the deterministic primality
    /// range (Baillie-PSW probable primes).
    pub used_probable_primes: bool,
    pub incomplete: bool,
    pub notes: Vec<String>,
}

/// Runs the full pipeline for one unit: threshold solve, candidate set,
/// criterion eliminations, factor checks, and the resulting bound.
pub fn zsigmondy(u: &QuadInt) -> Result<ZsigmondyCertificate> {
    zsigmondy_with(u, factorint::DEFAULT_RHO_BUDGET, None)
}

pub fn zsigmondy_with(
    u: &QuadInt,
    budget: u64,
    mut cache: Option<&mut FactorCache>,
) -> Result<ZsigmondyCertificate> {
    let sign = NormSign::of(u)?;
    let candidate_set = search::candidate_set(u)?;

    let mut candidate_checks = Vec::new();
    let mut needs_factoring: Vec<u64> = Vec::new();
    for &n in &candidate_set.members {
        let value = cyclo::norm_cyclotomic(u, n)?;
        let divides = cyclo::divides_n_squared(u, n)?;
        let disposition = if divides {
            needs_factoring.push(n);
            Disposition::NeedsFactoring
        } else {
            Disposition::EliminatedByEq1
        };
        candidate_checks.push(CandidateCheck {
            n,
            cyclotomic_norm: value.to_string(),
            divides_n_squared: divides,
            disposition,
        });
    }

    let factor_checked_max = needs_factoring.iter().copied().max().unwrap_or(0).max(6);
    let mut notes = Vec::new();
    let mut incomplete = false;
    let report = match ppd_report_with(u, factor_checked_max, budget, cache.as_deref_mut()) {
        Ok(r) => Some(r),
        Err(Error::IncompleteFactorizationAt { index, value }) => {
            incomplete = true;
            notes.push(format!(
                "factorization budget exhausted at n = {} (|delta| = {}); no bound is claimed",
                index, value
            ));
            None
        }
        Err(e) => return Err(e),
    };

    let mut terms = Vec::new();
    let mut failing_delta_indices = Vec::new();
    let mut failing_delta_prime_indices = Vec::new();
    let mut z = None;
    let mut z_delta_index = None;
    let mut z_by_convention = false;
    let mut used_probable_primes = false;

    if let Some(report) = &report {
        for t in &report.terms {
            used_probable_primes |= t
                .primes
                .iter()
                .any(|p| !factorint::primality_is_deterministic(p));
            terms.push(TermSummary {
                n: t.n,
                delta: t.delta.to_string(),
                primes: t.primes.iter().map(|p| p.to_string()).collect(),
                primitive: t.primitive.iter().map(|p| p.to_string()).collect(),
                status: t.status,
                delta_prime_index: t.delta_prime_index,
            });
        }
        failing_delta_indices = report.failing_delta_indices();
        failing_delta_prime_indices = report.failing_delta_prime_indices();
        match sign {
            NormSign::Plus => {
                if let Some(&max) = failing_delta_indices.last() {
                    z = Some(max);
                    z_delta_index = None;
                } else {
                    z = Some(1);
                    z_by_convention = true;
                }
            }
            NormSign::Minus => {
                if let Some(&max) = failing_delta_prime_indices.last() {
                    z = Some(max);
                    let delta_index = report
                        .terms
                        .iter()
                        .find(|t| t.delta_prime_index == Some(max))
                        .map(|t| t.n);
                    z_delta_index = delta_index;
                } else {
                    z = Some(1);
                    z_by_convention = true;
                }
            }
        }
        notes.push(
            "indices in (6, n_max] outside the candidate set fail the exponential \
             inequality and therefore have a primitive prime divisor; indices above \
             n_max are excluded by the g bound"
                .to_string(),
        );
        if sign == NormSign::Minus {
            notes.push(
                "indices n = 2 mod 4 satisfy delta_n = -delta_{n/2}^2 and never carry \
                 a primitive prime divisor; they are skipped in delta'"
                    .to_string(),
            );
        }
        if z_by_convention {
            notes.push(
                "no term fails beyond index 1; the bound is reported as 1 by convention"
                    .to_string(),
            );
        }
    }

    Ok(ZsigmondyCertificate {
        unit: u.to_literal(),
        d: u.d(),
        half_x: u.x().to_string(),
        half_y: u.y().to_string(),
        norm: sign.as_i8(),
        g_constant: BoundConstants::g_constant(sign).to_string(),
        threshold_constant: candidate_set.threshold_constant.clone(),
        n_max: candidate_set.n_max,
        candidates: candidate_set.members.clone(),
        candidate_checks,
        factor_checked_max,
        terms,
        failing_delta_indices,
        failing_delta_prime_indices,
        z,
        z_delta_index,
        z_by_convention,
        used_probable_primes,
        incomplete,
        notes,
    })
}

impl ZsigmondyCertificate {
    /// Canonical serialized form (pretty JSON with stable field order).
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable certificate");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Theorem-level verification reports.
// ---------------------------------------------------------------------------

/// Outcome for one unit inside a classification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitFinding {
    pub unit: String,
    pub real_value: String,
    pub failing_delta_indices: Vec<u64>,
    pub failing_delta_prime_indices: Vec<u64>,
    pub z: u64,
    pub z_by_convention: bool,
}

/// A verified classification of all units of one norm class within the
/// finite search range, plus the crossover argument for everything beyond.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub name: String,
    pub norm: i8,
    /// Enumeration bound for the finite case list.
    pub unit_bound: i64,
    pub units: Vec<UnitFinding>,
    /// Smallest integer C with an empty candidate set for all u >= C.
    pub crossover: u64,
    /// Surviving candidate indices at C - 1, witnessing minimality.
    pub crossover_witness_below: Vec<u64>,
    pub checks_passed: usize,
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(
    theorem: &'static str,
    bullet: &str,
    what: &str,
    got: &T,
    want: &T,
    passed: &mut usize,
) -> Result<()> {
    if got != want {
        return Err(Error::TheoremMismatch {
            theorem,
            bullet: bullet.to_string(),
            detail: format!("{}: got {:?}, expected {:?}", what, got, want),
        });
    }
    *passed += 1;
    Ok(())
}

fn finding_for(u: &QuadInt) -> Result<(UnitFinding, ZsigmondyCertificate)> {
    let cert = zsigmondy(u)?;
    if cert.incomplete {
        return Err(Error::TheoremMismatch {
            theorem: "classification",
            bullet: u.to_literal(),
            detail: "certificate incomplete".to_string(),
        });
    }
    let finding = UnitFinding {
        unit: u.to_literal(),
        real_value: u.real_value(DEFAULT_DIGITS),
        failing_delta_indices: cert.failing_delta_indices.clone(),
        failing_delta_prime_indices: cert.failing_delta_prime_indices.clone(),
        z: cert.z.expect("complete certificate carries a bound"),
        z_by_convention: cert.z_by_convention,
    };
    Ok((finding, cert))
}

/// Verifies the classification of norm-1 units: exactly four units lie in
/// (1, 6]; their failing sets are {2}, {4, 6}, {6}, {6, 10, 12}; and for
/// u >= 6 the candidate set is empty, so no term beyond the sixth can fail.
pub fn verify_norm_one_classification() -> Result<ClassificationReport> {
    const NAME: &'static str = "norm-one classification";
    let mut passed = 0usize;
    let units = search::enumerate_units_to_int(NormSign::Plus, 6);
    expect_eq(NAME, "unit count", "units in (1, 6]", &units.len(), &4, &mut passed)?;

    let literals: Vec<String> = units.iter().map(|u| u.to_literal()).collect();
    expect_eq(
        NAME,
        "unit identities",
        "enumerated units",
        &literals,
        &vec![
            "(3+1*sqrt(5))/2".to_string(),
            "2+1*sqrt(3)".to_string(),
            "(5+1*sqrt(21))/2".to_string(),
            "3+2*sqrt(2)".to_string(),
        ],
        &mut passed,
    )?;

    let expected: &[(&str, &[u64], u64)] = &[
        ("(3+1*sqrt(5))/2", &[6, 10, 12], 12),
        ("2+1*sqrt(3)", &[4, 6], 6),
        ("(5+1*sqrt(21))/2", &[6], 6),
        ("3+2*sqrt(2)", &[2], 2),
    ];
    let mut findings = Vec::new();
    for u in &units {
        let (finding, _cert) = finding_for(u)?;
        let (_, want_failing, want_z) = expected
            .iter()
            .find(|(lit, _, _)| *lit == finding.unit)
            .expect("unit in expected table");
        expect_eq(
            NAME,
            &finding.unit,
            "failing indices",
            &finding.failing_delta_indices.as_slice(),
            want_failing,
            &mut passed,
        )?;
        expect_eq(NAME, &finding.unit, "Z", &finding.z, want_z, &mut passed)?;
        findings.push(finding);
    }

    let (crossover, below) = search::minimal_empty_crossover(NormSign::Plus);
    expect_eq(NAME, "crossover", "minimal empty-candidate bound", &crossover, &6, &mut passed)?;

    Ok(ClassificationReport {
        name: NAME.to_string(),
        norm: 1,
        unit_bound: 6,
        units: findings,
        crossover,
        crossover_witness_below: below,
        checks_passed: passed,
    })
}

/// Verifies the classification of norm -1 units: exactly twelve units lie
/// in (1, 13]; 1+sqrt(2) fails only at delta'_3, the golden ratio fails at
/// delta'_9, delta'_15, delta'_18, and the remaining ten have no failing
/// term beyond index 1. For u >= 13 the candidate set is empty.
pub fn verify_norm_minus_one_classification() -> Result<ClassificationReport> {
    const NAME: &'static str = "norm-minus-one classification";
    let mut passed = 0usize;
    let units = search::enumerate_units_to_int(NormSign::Minus, 13);
    expect_eq(NAME, "unit count", "units in (1, 13]", &units.len(), &12, &mut passed)?;

    let mut findings = Vec::new();
    for u in &units {
        let (finding, _cert) = finding_for(u)?;
        let (want_failing, want_z): (&[u64], u64) = match finding.unit.as_str() {
            "1+1*sqrt(2)" => (&[3], 3),
            "(1+1*sqrt(5))/2" => (&[9, 15, 18], 18),
            _ => (&[], 1),
        };
        expect_eq(
            NAME,
            &finding.unit,
            "failing delta' indices",
            &finding.failing_delta_prime_indices.as_slice(),
            &want_failing,
            &mut passed,
        )?;
        expect_eq(NAME, &finding.unit, "Z(delta')", &finding.z, &want_z, &mut passed)?;
        if want_failing.is_empty() {
            expect_eq(
                NAME,
                &finding.unit,
                "Z reported by convention",
                &finding.z_by_convention,
                &true,
                &mut passed,
            )?;
        }
        findings.push(finding);
    }

    let (crossover, below) = search::minimal_empty_crossover(NormSign::Minus);
    expect_eq(NAME, "crossover", "minimal empty-candidate bound", &crossover, &13, &mut passed)?;

    Ok(ClassificationReport {
        name: NAME.to_string(),
        norm: -1,
        unit_bound: 13,
        units: findings,
        crossover,
        crossover_witness_below: below,
        checks_passed: passed,
    })
}

/// The combined statement derived from both classifications.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinedReport {
    pub norm_one: ClassificationReport,
    pub norm_minus_one: ClassificationReport,
    /// Largest failing index over all norm-1 units.
    pub norm_one_max_failing: u64,
    /// Largest failing delta index over all norm -1 units (delta' failures
    /// mapped back to delta numbering).
    pub norm_minus_one_max_failing_delta: u64,
    /// Odd k range over which delta_{2k} = -delta_k^2 was re-verified for
    /// every norm -1 unit in the finite list.
    pub square_identity_checked_odd_k_max: u64,
    pub checks_passed: usize,
}

/// Verifies the combined statement: every norm-1 unit has a primitive prime
/// divisor beyond the twelfth term, and for norm -1 units beyond the
/// twenty-fourth term the failures are exactly the indices n = 2 mod 4.
pub fn verify_combined_classification() -> Result<CombinedReport> {
    const NAME: &'static str = "combined classification";
    let mut passed = 0usize;
    let norm_one = verify_norm_one_classification()?;
    let norm_minus_one = verify_norm_minus_one_classification()?;

    let norm_one_max = norm_one
        .units
        .iter()
        .flat_map(|f| f.failing_delta_indices.iter().copied())
        .max()
        .unwrap_or(1);
    expect_eq(
        NAME,
        "norm-one clause",
        "largest failing index",
        &norm_one_max,
        &12,
        &mut passed,
    )?;

    // map the delta' failures back to delta indices: k -> n with n' = k
    let mut minus_max_delta = 1u64;
    for f in &norm_minus_one.units {
        for &k in &f.failing_delta_prime_indices {
            let n = (1..=4 * k + 2)
                .find(|&n| seqkit::delta_prime_index(n) == Some(k))
                .expect("delta' index maps back");
            minus_max_delta = minus_max_delta.max(n);
        }
    }
    expect_eq(
        NAME,
        "norm-minus-one clause",
        "largest failing delta index",
        &minus_max_delta,
        &24,
        &mut passed,
    )?;

    // the forward direction of the iff: indices 2 mod 4 are negated squares
    let odd_k_max = 45;
    for u in search::enumerate_units_to_int(NormSign::Minus, 13) {
        for k in (1..=odd_k_max).step_by(2) {
            let (lhs, rhs) = seqkit::skipped_square_identity(&u, k)?;
            expect_eq(
                NAME,
                &format!("square identity for {}", u),
                &format!("delta_{} = -delta_{}^2", 2 * k, k),
                &lhs,
                &rhs,
                &mut passed,
            )?;
        }
    }

    let total = passed + norm_one.checks_passed + norm_minus_one.checks_passed;
    Ok(CombinedReport {
        norm_one,
        norm_minus_one,
        norm_one_max_failing: norm_one_max,
        norm_minus_one_max_failing_delta: minus_max_delta,
        square_identity_checked_odd_k_max: odd_k_max,
        checks_passed: total,
    })
}
