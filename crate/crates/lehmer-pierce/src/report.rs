//! Rendering and command glue over the library: sequence tables in the
//! classical "n | delta_n | prime factors" layout, unit listings, candidate
//! sets, certificates, and the verification reports. Output is deterministic
//! byte for byte for a given configuration.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorint::FactorCache;
use crate::ppd::{self, TermSummary};
use crate::quadring::QuadInt;
use crate::real::DEFAULT_DIGITS;
use crate::search::{self, NormSign};

/// Output format for the commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Structured,
}

/// Resolved run options shared by the commands.
pub struct RunConfig {
    pub format: OutputFormat,
    pub cache_path: Option<std::path::PathBuf>,
    pub digits: usize,
    pub budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: OutputFormat::Table,
            cache_path: None,
            digits: DEFAULT_DIGITS,
            budget: crate::factorint::DEFAULT_RHO_BUDGET,
        }
    }
}

impl RunConfig {
    fn open_cache(&self) -> Result<Option<FactorCache>> {
        match &self.cache_path {
            Some(path) => Ok(Some(FactorCache::open(path)?)),
            None => Ok(None),
        }
    }
}

/// Parses a positive rational bound: "13" or "27/2".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str, pos: usize| -> Result<BigInt> {
        t.trim().parse::<BigInt>().map_err(|_| Error::Parse {
            pos,
            msg: format!("expected an integer, found {:?}", t.trim()),
        })
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num, 0)?;
            let den = parse_int(den, s.find('/').unwrap() + 1)?;
            if den <= BigInt::from(0) {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "denominator must be positive".to_string(),
                });
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s, 0)?)),
    }
}

/// Structured document for a sequence table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaTableDoc {
    pub unit: String,
    pub norm: i8,
    pub n_max: u64,
    pub skip_2_mod_4: bool,
    pub terms: Vec<TermSummary>,
}

fn primes_cell(primes: &[String]) -> String {
    if primes.is_empty() {
        "None".to_string()
    } else {
        primes.join(",")
    }
}

/// The sequence table for one unit, in the classical three-column layout.
pub fn cmd_delta(
    unit: &QuadInt,
    n_max: u64,
    skip_2_mod_4: bool,
    config: &RunConfig,
) -> Result<String> {
    let mut cache = config.open_cache()?;
    let report = ppd::ppd_report_with(unit, n_max, config.budget, cache.as_mut())?;
    let terms: Vec<TermSummary> = report
        .terms
        .iter()
        .filter(|t| !(skip_2_mod_4 && t.n % 4 == 2))
        .map(|t| TermSummary {
            n: t.n,
            delta: t.delta.to_string(),
            primes: t.primes.iter().map(|p| p.to_string()).collect(),
            primitive: t.primitive.iter().map(|p| p.to_string()).collect(),
            status: t.status,
            delta_prime_index: t.delta_prime_index,
        })
        .collect();
    let doc = DeltaTableDoc {
        unit: unit.to_literal(),
        norm: report.norm_sign.as_i8(),
        n_max,
        skip_2_mod_4,
        terms,
    };
    match config.format {
        OutputFormat::Structured => Ok(to_json(&doc)),
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str(&format!("u = {}\n", doc.unit));
            out.push_str("n | delta_n | prime factors of delta_n\n");
            for t in &doc.terms {
                out.push_str(&format!("{} | {} | {}\n", t.n, t.delta, primes_cell(&t.primes)));
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitsDoc {
    pub norm: i8,
    pub bound: String,
    pub units: Vec<UnitRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitRow {
    pub unit: String,
    pub d: u64,
    pub trace: String,
    pub value: String,
}

/// Lists all units of one norm sign in (1, bound].
pub fn cmd_units(sign: NormSign, bound: &BigRational, config: &RunConfig) -> Result<String> {
    let units = search::enumerate_units(sign, bound);
    let rows: Vec<UnitRow> = units
        .iter()
        .map(|u| UnitRow {
            unit: u.to_literal(),
            d: u.d(),
            trace: u.trace().to_string(),
            value: u.real_value(config.digits.min(16)),
        })
        .collect();
    let doc = UnitsDoc {
        norm: sign.as_i8(),
        bound: bound.to_string(),
        units: rows,
    };
    match config.format {
        OutputFormat::Structured => Ok(to_json(&doc)),
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "units of norm {} in (1, {}]: {}\n",
                doc.norm,
                doc.bound,
                doc.units.len()
            ));
            out.push_str("unit | d | trace | value\n");
            for r in &doc.units {
                out.push_str(&format!("{} | {} | {} | {}\n", r.unit, r.d, r.trace, r.value));
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidatesDoc {
    pub unit: String,
    pub norm: i8,
    pub g_constant: String,
    pub threshold_constant: String,
    pub n_max: u64,
    pub members: Vec<u64>,
}

/// The candidate set of a unit: threshold metadata plus surviving indices.
pub fn cmd_candidates(unit: &QuadInt, config: &RunConfig) -> Result<String> {
    let cs = search::candidate_set(unit)?;
    let doc = CandidatesDoc {
        unit: unit.to_literal(),
        norm: cs.norm_sign.as_i8(),
        g_constant: search::BoundConstants::g_constant(cs.norm_sign).to_string(),
        threshold_constant: cs.threshold_constant.clone(),
        n_max: cs.n_max,
        members: cs.members.clone(),
    };
    match config.format {
        OutputFormat::Structured => Ok(to_json(&doc)),
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str(&format!("u = {}\n", doc.unit));
            out.push_str(&format!(
                "g(n) < {} - log log u = {}\n",
                doc.g_constant, doc.threshold_constant
            ));
            out.push_str(&format!("n_max = {}\n", doc.n_max));
            if doc.members.is_empty() {
                out.push_str("candidates: (empty)\n");
            } else {
                let list: Vec<String> = doc.members.iter().map(|n| n.to_string()).collect();
                out.push_str(&format!("candidates: {}\n", list.join(", ")));
            }
            Ok(out)
        }
    }
}

/// The full Zsigmondy certificate for a unit.
pub fn cmd_zsigmondy(unit: &QuadInt, config: &RunConfig) -> Result<String> {
    let mut cache = config.open_cache()?;
    let cert = ppd::zsigmondy_with(unit, config.budget, cache.as_mut())?;
    match config.format {
        OutputFormat::Structured => Ok(cert.to_canonical_string()),
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str(&format!("u = {} (norm {})\n", cert.unit, cert.norm));
            out.push_str(&format!(
                "threshold: g(n) < {} gives n_max = {}\n",
                cert.threshold_constant, cert.n_max
            ));
            let list: Vec<String> = cert.candidates.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!(
                "candidates after inequality: [{}]\n",
                list.join(", ")
            ));
            for c in &cert.candidate_checks {
                out.push_str(&format!(
                    "  n = {}: N(phi_n(u)) = {} {} n^2 -> {}\n",
                    c.n,
                    c.cyclotomic_norm,
                    if c.divides_n_squared {
                        "divides"
                    } else {
                        "does not divide"
                    },
                    match c.disposition {
                        ppd::Disposition::EliminatedByEq1 => "has a PPD",
                        ppd::Disposition::NeedsFactoring => "factor check",
                    }
                ));
            }
            out.push_str(&format!(
                "factor checks over n = 1..={}\n",
                cert.factor_checked_max
            ));
            for t in &cert.terms {
                out.push_str(&format!(
                    "  {} | {} | {} | {:?}\n",
                    t.n,
                    t.delta,
                    primes_cell(&t.primes),
                    t.status
                ));
            }
            if cert.incomplete {
                out.push_str("INCOMPLETE: no bound claimed\n");
            } else {
                match cert.norm {
                    1 => out.push_str(&format!(
                        "failing indices {:?}; Z(delta) = {}{}\n",
                        cert.failing_delta_indices,
                        cert.z.unwrap(),
                        if cert.z_by_convention {
                            " (by convention)"
                        } else {
                            ""
                        }
                    )),
                    _ => out.push_str(&format!(
                        "failing delta' indices {:?} (delta indices {:?}); Z(delta') = {}{}\n",
                        cert.failing_delta_prime_indices,
                        cert.failing_delta_indices,
                        cert.z.unwrap(),
                        if cert.z_by_convention {
                            " (by convention)"
                        } else {
                            ""
                        }
                    )),
                }
            }
            Ok(out)
        }
    }
}

/// Which verification to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    All,
    NormOne,
    NormMinusOne,
    Combined,
}

fn classification_text(r: &ppd::ClassificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "== {} (norm {}, units in (1, {}]) ==\n",
        r.name, r.norm, r.unit_bound
    ));
    for u in &r.units {
        let failing = if r.norm == 1 {
            format!("failing delta indices {:?}", u.failing_delta_indices)
        } else {
            format!("failing delta' indices {:?}", u.failing_delta_prime_indices)
        };
        out.push_str(&format!(
            "  {} -> {}; Z = {}{}\n",
            u.unit,
            failing,
            u.z,
            if u.z_by_convention { " (by convention)" } else { "" }
        ));
    }
    out.push_str(&format!(
        "  crossover: candidate set empty for all u >= {} (at {} the survivors are {:?})\n",
        r.crossover,
        r.crossover - 1,
        r.crossover_witness_below
    ));
    out.push_str(&format!("  checks passed: {}\n", r.checks_passed));
    out
}

/// Runs the verification reports; errors carry the failed bullet.
pub fn cmd_verify(target: VerifyTarget, config: &RunConfig) -> Result<String> {
    match target {
        VerifyTarget::NormOne => {
            let r = ppd::verify_norm_one_classification()?;
            Ok(match config.format {
                OutputFormat::Structured => to_json(&r),
                OutputFormat::Table => classification_text(&r) + "PASS\n",
            })
        }
        VerifyTarget::NormMinusOne => {
            let r = ppd::verify_norm_minus_one_classification()?;
            Ok(match config.format {
                OutputFormat::Structured => to_json(&r),
                OutputFormat::Table => classification_text(&r) + "PASS\n",
            })
        }
        VerifyTarget::Combined => {
            let r = ppd::verify_combined_classification()?;
            Ok(match config.format {
                OutputFormat::Structured => to_json(&r),
                OutputFormat::Table => combined_text(&r) + "PASS\n",
            })
        }
        VerifyTarget::All => {
            let one = ppd::verify_norm_one_classification()?;
            let minus = ppd::verify_norm_minus_one_classification()?;
            let combined = ppd::verify_combined_classification()?;
            match config.format {
                OutputFormat::Structured => Ok(to_json(&combined)),
                OutputFormat::Table => {
                    let mut out = String::new();
                    out.push_str(&classification_text(&one));
                    out.push_str(&classification_text(&minus));
                    out.push_str(&combined_text(&combined));
                    out.push_str("PASS: all verification reports hold\n");
                    Ok(out)
                }
            }
        }
    }
}

fn combined_text(r: &ppd::CombinedReport) -> String {
    let mut out = String::new();
    out.push_str("== combined classification ==\n");
    out.push_str(&format!(
        "  norm 1: every term beyond index {} has a primitive prime divisor\n",
        r.norm_one_max_failing
    ));
    out.push_str(&format!(
        "  norm -1: beyond index {}, failures occur exactly at n = 2 mod 4\n",
        r.norm_minus_one_max_failing_delta
    ));
    out.push_str(&format!(
        "  square identity re-verified for odd k <= {}\n",
        r.square_identity_checked_odd_k_max
    ));
    out.push_str(&format!("  checks passed: {}\n", r.checks_passed));
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantsDoc {
    pub checks: Vec<ConstantRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub stored: f64,
    pub derived: String,
    pub abs_diff: f64,
}

/// Re-derives the analytic constants and tabulates the agreement.
pub fn cmd_constants(config: &RunConfig) -> Result<String> {
    let report = search::derive_constants_report()?;
    let doc = ConstantsDoc {
        checks: report
            .checks
            .iter()
            .map(|c| ConstantRow {
                name: c.name.to_string(),
                stored: c.stored,
                derived: c.derived.clone(),
                abs_diff: c.abs_diff,
            })
            .collect(),
    };
    match config.format {
        OutputFormat::Structured => Ok(to_json(&doc)),
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str("constant | stored | derived | |diff|\n");
            for c in &doc.checks {
                out.push_str(&format!(
                    "{} | {} | {} | {:.2e}\n",
                    c.name, c.stored, c.derived, c.abs_diff
                ));
            }
            Ok(out)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

/// Exit code contract: 0 ok, 2 validation, 3 verification mismatch,
/// 4 incomplete factorization.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::TheoremMismatch { .. } => 3,
        Error::IncompleteFactorization { .. } | Error::IncompleteFactorizationAt { .. } => 4,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, x: i64, y: i64) -> QuadInt {
        QuadInt::new(d, x, y).unwrap()
    }

    #[test]
    fn delta_table_matches_classical_layout() {
        let cfg = RunConfig::default();
        let out = cmd_delta(&q(3, 4, 2), 6, false, &cfg).unwrap();
        let expect = "u = 2+1*sqrt(3)\n\
                      n | delta_n | prime factors of delta_n\n\
                      1 | -2 | 2\n\
                      2 | -12 | 2,3\n\
                      3 | -50 | 2,5\n\
                      4 | -192 | 2,3\n\
                      5 | -722 | 2,19\n\
                      6 | -2700 | 2,3,5\n";
        assert_eq!(out, expect);
    }

    #[test]
    fn delta_table_skips_2_mod_4() {
        let cfg = RunConfig::default();
        let out = cmd_delta(&q(2, 2, 2), 5, true, &cfg).unwrap();
        let expect = "u = 1+1*sqrt(2)\n\
                      n | delta_n | prime factors of delta_n\n\
                      1 | -2 | 2\n\
                      3 | -14 | 2,7\n\
                      4 | -32 | 2\n\
                      5 | -82 | 2,41\n";
        assert_eq!(out, expect);
    }

    #[test]
    fn unit_term_renders_none() {
        let cfg = RunConfig::default();
        let out = cmd_delta(&q(5, 3, 1), 2, false, &cfg).unwrap();
        assert!(out.contains("1 | -1 | None\n"));
    }

    #[test]
    fn units_round_trip_through_parser() {
        let cfg = RunConfig::default();
        let out = cmd_units(NormSign::Minus, &parse_rational("13").unwrap(), &cfg).unwrap();
        let mut count = 0;
        for line in out.lines().skip(2) {
            let literal = line.split(" | ").next().unwrap();
            let parsed: QuadInt = literal.parse().unwrap();
            assert_eq!(parsed.to_literal(), literal);
            count += 1;
        }
        assert_eq!(count, 12);
    }

    #[test]
    fn structured_output_is_stable() {
        let cfg = RunConfig {
            format: OutputFormat::Structured,
            ..RunConfig::default()
        };
        let a = cmd_zsigmondy(&q(21, 5, 1), &cfg).unwrap();
        let b = cmd_zsigmondy(&q(21, 5, 1), &cfg).unwrap();
        assert_eq!(a, b);
        let a = cmd_candidates(&q(3, 4, 2), &cfg).unwrap();
        let b = cmd_candidates(&q(3, 4, 2), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_bounds_parse() {
        assert_eq!(
            parse_rational("27/2").unwrap(),
            BigRational::new(BigInt::from(27), BigInt::from(2))
        );
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("3/-1").is_err());
    }
}
