//! Mobius function, Euler totient, cyclotomic polynomials, and the
//! divisibility criterion N(phi_n(u)) | n^2.
//!
//! `norm_cyclotomic` always runs two independent computation paths — direct
//! polynomial evaluation in the quadratic ring, and the Mobius product of
//! sequence terms prod_{d|n} delta_d^{mu(n/d)} — and aborts on any
//! disagreement, so downstream certificates are self-validating.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadring::QuadInt;
use crate::seqkit;

/// Default cap on the cyclotomic polynomial index.
pub const DEFAULT_CYCLO_CAP: u64 = 10_000;

/// Factorization of a small integer by trial division.
pub fn small_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Mobius function: 0 on non-squarefree n, else (-1)^(number of primes).
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1);
    let mut odd = false;
    for (_, e) in small_factor(n) {
        if e > 1 {
            return 0;
        }
        odd = !odd;
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Euler totient via the factorization of n.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut phi = n;
    for (p, _) in small_factor(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Sorted list of the divisors of n.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in small_factor(n) {
        let base = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Dense integer polynomial, lowest degree first; the zero polynomial is the
/// empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: u64) -> Self {
        let mut coeffs = vec![BigInt::zero(); n as usize + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n as usize] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        assert!(!self.coeffs.is_empty(), "zero polynomial has no degree");
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact division by a monic divisor; panics if the divisor is not monic.
    /// Returns None when the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(
            divisor.coeffs.last().map_or(false, |c| c.is_one()),
            "divisor must be monic"
        );
        if self.is_zero() {
            return Some(IntPoly { coeffs: vec![] });
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dn = divisor.coeffs.len();
        let qn = rem.len() - dn + 1;
        let mut quot = vec![BigInt::zero(); qn];
        for i in (0..qn).rev() {
            let lead = std::mem::take(&mut rem[i + dn - 1]);
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate().take(dn - 1) {
                rem[i + j] -= &lead * c;
            }
            quot[i] = lead;
        }
        if rem.iter().take(dn - 1).all(|c| c.is_zero()) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    /// Horner evaluation at a quadratic integer.
    pub fn eval_quad(&self, q: &QuadInt) -> Result<QuadInt> {
        let mut acc = QuadInt::one(q.d())?.scale(&BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q)?.add_int(c);
        }
        Ok(acc)
    }
}

fn cyclo_memo() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, computed as (x^n - 1) divided by the
/// product of all earlier phi_d with d | n, using exact polynomial division.
/// Results are memoized process-wide.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<IntPoly>> {
    cyclotomic_poly_with_cap(n, DEFAULT_CYCLO_CAP)
}

pub fn cyclotomic_poly_with_cap(n: u64, cap: u64) -> Result<Arc<IntPoly>> {
    assert!(n >= 1);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "cyclotomic index",
            requested: n,
            cap,
        });
    }
    if let Some(hit) = cyclo_memo().lock().expect("poisoned").get(&n) {
        return Ok(hit.clone());
    }
    let mut quotient = IntPoly::x_pow_minus_one(n);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly_with_cap(d, cap)?;
        quotient = quotient
            .div_exact_monic(&phi_d)
            .expect("phi_d divides x^n - 1 exactly");
    }
    let arc = Arc::new(quotient);
    cyclo_memo()
        .lock()
        .expect("poisoned")
        .insert(n, arc.clone());
    Ok(arc)
}

/// N(phi_n(u)) for a unit u, computed along both paths.
///
/// Path (a) evaluates phi_n at u in the ring and takes the norm. Path (b)
/// assembles prod_{d|n} delta_d^{mu(n/d)} as an exact integer quotient; the
/// denominator must cancel. Any disagreement aborts with `OracleMismatch`.
pub fn norm_cyclotomic(u: &QuadInt, n: u64) -> Result<BigInt> {
    assert!(n >= 1);
    let phi_n = cyclotomic_poly(n)?;
    let direct = phi_n.eval_quad(u)?.norm();

    let mut numerator = BigInt::one();
    let mut denominator = BigInt::one();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => numerator *= seqkit::delta(u, d)?,
            -1 => denominator *= seqkit::delta(u, d)?,
            _ => {}
        }
    }
    let (quot, rem) = numerator.div_rem(&denominator);
    if !rem.is_zero() {
        return Err(Error::OracleMismatch {
            context: "norm_cyclotomic",
            detail: format!(
                "Mobius product for n = {} is not integral: {}/{}",
                n, numerator, denominator
            ),
        });
    }
    if quot != direct {
        return Err(Error::OracleMismatch {
            context: "norm_cyclotomic",
            detail: format!(
                "paths disagree for n = {}: evaluation gives {}, Mobius product gives {}",
                n, direct, quot
            ),
        });
    }
    Ok(direct)
}

/// The divisibility criterion: |N(phi_n(u))| divides n^2.
///
/// Only meaningful for n > 6, and for norm -1 units only when n is not
/// 2 mod 4; violations of those preconditions are errors.
pub fn divides_n_squared(u: &QuadInt, n: u64) -> Result<bool> {
    if n <= 6 {
        return Err(Error::PreconditionViolated(format!(
            "criterion requires n > 6, got {}",
            n
        )));
    }
    if u.norm() == -BigInt::one() && n % 4 == 2 {
        return Err(Error::PreconditionViolated(format!(
            "criterion requires n != 2 mod 4 for norm -1 units, got {}",
            n
        )));
    }
    let value = norm_cyclotomic(u, n)?.abs();
    let n_squared = BigInt::from(n) * BigInt::from(n);
    Ok((n_squared % value).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, x: i64, y: i64) -> QuadInt {
        QuadInt::new(d, x, y).unwrap()
    }

    #[test]
    fn mobius_and_phi_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(euler_phi(30), 8);
        assert_eq!(euler_phi(90), 24);
    }

    #[test]
    fn multiplicative_identities() {
        for n in 1..=10_000u64 {
            let total: u64 = divisors(n).iter().map(|&d| euler_phi(d)).sum();
            assert_eq!(total, n);
            let mu_sum: i64 = divisors(n).iter().map(|&d| mobius(d) as i64).sum();
            assert_eq!(mu_sum, if n == 1 { 1 } else { 0 });
        }
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(2).unwrap(), IntPoly::from_i64(&[1, 1]));
        assert_eq!(*cyclotomic_poly(6).unwrap(), IntPoly::from_i64(&[1, -1, 1]));
        // hand oracle for n = 6: divide x^6 - 1 by phi1*phi2*phi3 directly
        let mut q6 = IntPoly::x_pow_minus_one(6);
        for f in [
            IntPoly::from_i64(&[-1, 1]),
            IntPoly::from_i64(&[1, 1]),
            IntPoly::from_i64(&[1, 1, 1]),
        ] {
            q6 = q6.div_exact_monic(&f).unwrap();
        }
        assert_eq!(*cyclotomic_poly(6).unwrap(), q6);
        // phi_105 is the first with a coefficient of magnitude 2
        let phi105 = cyclotomic_poly(105).unwrap();
        assert!(phi105.coeffs().iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn degrees_match_totient() {
        for n in 1..=500 {
            assert_eq!(
                cyclotomic_poly(n).unwrap().degree() as u64,
                euler_phi(n),
                "degree mismatch at n = {}",
                n
            );
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            cyclotomic_poly_with_cap(11, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn norm_cyclotomic_examples() {
        // phi_2(u) = u + 1 at u = (3+sqrt(5))/2 has norm 5
        assert_eq!(norm_cyclotomic(&q(5, 3, 1), 2).unwrap(), BigInt::from(5));
        // phi_1(u) = u - 1, so the value is delta_1
        for u in [q(3, 4, 2), q(5, 1, 1), q(2, 6, 4)] {
            assert_eq!(
                norm_cyclotomic(&u, 1).unwrap(),
                seqkit::delta(&u, 1).unwrap()
            );
        }
        // 2+sqrt(3) at n = 8: N(phi_8(u)) = 196, which does not divide 64
        assert_eq!(norm_cyclotomic(&q(3, 4, 2), 8).unwrap(), BigInt::from(196));
        assert!(!divides_n_squared(&q(3, 4, 2), 8).unwrap());
    }

    #[test]
    fn criterion_examples() {
        let u = q(5, 3, 1); // (3+sqrt(5))/2
        assert!(!divides_n_squared(&u, 14).unwrap());
        assert!(!divides_n_squared(&u, 18).unwrap());
        assert!(!divides_n_squared(&u, 24).unwrap());
        assert!(!divides_n_squared(&u, 30).unwrap());
        // n = 10 and n = 12 satisfy the criterion (terms with no new prime)
        assert_eq!(norm_cyclotomic(&u, 10).unwrap(), BigInt::from(25));
        assert!(divides_n_squared(&u, 10).unwrap());
        assert!(divides_n_squared(&u, 12).unwrap());
        // n = 8 fails it: N(phi_8(u)) = 49 does not divide 64, and indeed
        // delta_8 = -2205 carries the new prime 7
        assert!(!divides_n_squared(&u, 8).unwrap());

        let u = q(3, 4, 2); // 2+sqrt(3)
        assert!(!divides_n_squared(&u, 12).unwrap());

        assert!(matches!(
            divides_n_squared(&q(3, 4, 2), 6),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            divides_n_squared(&q(5, 1, 1), 10),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn product_over_divisors_is_delta() {
        for u in [q(3, 4, 2), q(5, 1, 1), q(2, 2, 2)] {
            for n in 1..=40 {
                let prod = divisors(n)
                    .into_iter()
                    .map(|d| norm_cyclotomic(&u, d).unwrap())
                    .product::<BigInt>();
                assert_eq!(prod, seqkit::delta(&u, n).unwrap(), "n = {}", n);
            }
        }
    }
}
