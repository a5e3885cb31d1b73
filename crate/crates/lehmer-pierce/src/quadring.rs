//! Exact arithmetic in the ring of integers of a real quadratic field Q(sqrt(d)).
//!
//! Elements are stored in half-coordinates: `QuadInt { d, x, y }` is the value
//! (x + y*sqrt(d))/2. This single representation covers both parity classes:
//! for d = 2, 3 mod 4 the ring is Z[sqrt(d)] and x, y are both even; for
//! d = 1 mod 4 the ring is Z[(1+sqrt(d))/2] and x = y mod 2. The parity
//! invariant is validated at construction and preserved by every operation,
//! so norms and traces are always rational integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element (x + y*sqrt(d))/2 of the ring of integers of Q(sqrt(d)).
///
/// Immutable after construction; all operations are pure and return new
/// values, so elements can be shared freely across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    d: u64,
    x: BigInt,
    y: BigInt,
}

/// The minimum polynomial X^2 - T*X + e of a quadratic element, stored as
/// the trace T and norm e. For units, e is +1 or -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    pub trace: BigInt,
    pub norm: BigInt,
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^2")?;
        if !self.trace.is_zero() {
            if self.trace.is_positive() {
                write!(f, " - {}X", self.trace)?;
            } else {
                write!(f, " + {}X", -&self.trace)?;
            }
        }
        if !self.norm.is_zero() {
            if self.norm.is_positive() {
                write!(f, " + {}", self.norm)?;
            } else {
                write!(f, " - {}", -&self.norm)?;
            }
        }
        Ok(())
    }
}

/// Returns true if n > 1 and no square > 1 divides n.
pub fn is_squarefree(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn parity_ok(d: u64, x: &BigInt, y: &BigInt) -> bool {
    if d % 4 == 1 {
        // x = y mod 2
        (x - y).is_even()
    } else {
        x.is_even() && y.is_even()
    }
}

impl QuadInt {
    /// Builds (x + y*sqrt(d))/2, validating that d is squarefree > 1 and
    /// that (x, y) lies in the ring of integers.
    pub fn new(d: u64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self> {
        let x = x.into();
        let y = y.into();
        if d < 2 {
            return Err(Error::InvalidD { d });
        }
        if !is_squarefree(d) {
            return Err(Error::NonSquarefreeD { d });
        }
        if !parity_ok(d, &x, &y) {
            return Err(Error::ParityViolation {
                d,
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(QuadInt { d, x, y })
    }

    /// Builds a + b*sqrt(d) from integer coordinates.
    pub fn from_integer_coords(d: u64, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        Self::new(d, a.into() * 2, b.into() * 2)
    }

    /// The multiplicative identity of the ring for the field Q(sqrt(d)).
    pub fn one(d: u64) -> Result<Self> {
        Self::new(d, 2, 0)
    }

    // Internal constructor for values already known to satisfy the invariants.
    fn raw(d: u64, x: BigInt, y: BigInt) -> Self {
        debug_assert!(parity_ok(d, &x, &y));
        QuadInt { d, x, y }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Numerator of the rational part in half-coordinates (equals the trace).
    pub fn x(&self) -> &BigInt {
        &self.x
    }

    /// Numerator of the sqrt(d) part in half-coordinates.
    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.y.is_zero() && self.x == BigInt::from(2)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::MixedFields {
                d1: self.d,
                d2: other.d,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self::raw(self.d, &self.x + &other.x, &self.y + &other.y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self::raw(self.d, &self.x - &other.x, &self.y - &other.y))
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.d, -&self.x, -&self.y)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        // (x1 + y1 s)(x2 + y2 s)/4 with s = sqrt(d); both halves are exact.
        let num_x = &self.x * &other.x + &self.y * &other.y * BigInt::from(self.d);
        let num_y = &self.x * &other.y + &self.y * &other.x;
        debug_assert!(num_x.is_even() && num_y.is_even());
        Ok(Self::raw(self.d, num_x / 2, num_y / 2))
    }

    /// Adds a rational integer n (viewed as the element (2n + 0*sqrt(d))/2).
    pub fn add_int(&self, n: &BigInt) -> Self {
        Self::raw(self.d, &self.x + n * 2, self.y.clone())
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        Self::raw(self.d, &self.x * n, &self.y * n)
    }

    /// Binary exponentiation; pow(q, 0) is the ring identity.
    pub fn pow(&self, n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::raw(self.d, BigInt::from(2), BigInt::zero());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// The Galois conjugate: sqrt(d) -> -sqrt(d).
    pub fn conj(&self) -> Self {
        Self::raw(self.d, self.x.clone(), -&self.y)
    }

    /// The field norm N(q) = (x^2 - y^2 d)/4, always a rational integer.
    pub fn norm(&self) -> BigInt {
        let num = &self.x * &self.x - &self.y * &self.y * BigInt::from(self.d);
        debug_assert!((&num % BigInt::from(4)).is_zero());
        num / 4
    }

    /// The field trace q + conj(q) = x.
    pub fn trace(&self) -> BigInt {
        self.x.clone()
    }

    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n == BigInt::one() || n == -BigInt::one()
    }

    /// The minimum polynomial X^2 - trace*X + norm; errors on rational elements.
    pub fn min_poly(&self) -> Result<MinPoly> {
        if self.y.is_zero() {
            return Err(Error::RationalElement);
        }
        Ok(MinPoly {
            trace: self.trace(),
            norm: self.norm(),
        })
    }

    /// Sign of the element as a real number under sqrt(d) > 0.
    pub fn signum(&self) -> Ordering {
        // sign of x + y*sqrt(d) (the /2 does not matter)
        sign_of_surd(&self.x, &self.y, self.d)
    }

    /// Exact comparison with the rational p/r (r > 0), by integer arithmetic
    /// alone: isolate the surd and square once, tracking signs.
    pub fn compare_to_rational(&self, p: &BigInt, r: &BigInt) -> Ordering {
        assert!(r.is_positive(), "denominator must be positive");
        // (x + y sqrt(d))/2 - p/r  ~  (r*x - 2p) + r*y*sqrt(d)  (times 1/(2r) > 0)
        let a = r * &self.x - BigInt::from(2) * p;
        let b = r * &self.y;
        sign_of_surd(&a, &b, self.d)
    }

    /// Convenience comparison with an integer.
    pub fn compare_to_int(&self, n: i64) -> Ordering {
        self.compare_to_rational(&BigInt::from(n), &BigInt::one())
    }

    pub fn is_greater_than_one(&self) -> bool {
        self.compare_to_int(1) == Ordering::Greater
    }

    /// Canonical literal: `a+b*sqrt(d)` when both half-coordinates are even,
    /// `(x+y*sqrt(d))/2` otherwise. Round-trips through the parser.
    pub fn to_literal(&self) -> String {
        fn signed_term(b: &BigInt, d: u64) -> String {
            if b.is_negative() {
                format!("-{}*sqrt({})", -b, d)
            } else {
                format!("+{}*sqrt({})", b, d)
            }
        }
        if self.x.is_even() && self.y.is_even() {
            let a: BigInt = &self.x / 2;
            let b: BigInt = &self.y / 2;
            format!("{}{}", a, signed_term(&b, self.d))
        } else {
            format!("({}{})/2", self.x, signed_term(&self.y, self.d))
        }
    }
}

/// Exact sign of a + b*sqrt(d) for squarefree d > 1.
fn sign_of_surd(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    match (a.sign(), b.sign()) {
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => Ordering::Equal,
        (_, num_bigint::Sign::NoSign) => a.cmp(&BigInt::zero()),
        (num_bigint::Sign::NoSign, _) | (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => {
            if b.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => Ordering::Less,
        // opposite signs: compare |b|^2 d against |a|^2; equality cannot occur
        // because d is squarefree > 1 and b != 0
        (num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
            let lhs = a * a;
            let rhs = b * b * BigInt::from(d);
            lhs.cmp(&rhs)
        }
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus) => {
            let lhs = b * b * BigInt::from(d);
            let rhs = a * a;
            lhs.cmp(&rhs)
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadInt({} = ({} + {}*sqrt({}))/2)", self, self.x, self.y, self.d)
    }
}

// ---------------------------------------------------------------------------
// Literal parser
//
// Grammar (whitespace allowed between tokens, signs optional):
//   literal  := surd | "(" surd ")" "/" "2"
//   surd     := sign? int "+" int "*" "sqrt" "(" int ")"
//             | sign? int "-" int "*" "sqrt" "(" int ")"
// Coefficients must be explicit ("2+1*sqrt(3)", not "2+sqrt(3)").
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            got => Err(Error::Parse {
                pos: self.pos,
                msg: format!(
                    "expected '{}', found {}",
                    c as char,
                    got.map_or("end of input".to_string(), |g| format!("'{}'", g as char))
                ),
            }),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos,
                msg: format!("expected '{}'", kw),
            })
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let mut sign = BigInt::one();
        if let Some(&c) = self.src.get(self.pos) {
            if c == b'+' || c == b'-' {
                if c == b'-' {
                    sign = -sign;
                }
                self.pos += 1;
                self.skip_ws();
            }
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(Error::Parse {
                pos: start,
                msg: "expected an integer".to_string(),
            });
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        Ok(sign * text.parse::<BigInt>().unwrap())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }
}

/// Parses `a + b*sqrt(d)` starting at the current position; returns (a, b, d).
fn parse_surd(lx: &mut Lexer) -> Result<(BigInt, BigInt, u64)> {
    let a = lx.integer()?;
    let op_pos = lx.pos;
    let op = lx.peek().ok_or_else(|| Error::Parse {
        pos: op_pos,
        msg: "expected '+' or '-' before the sqrt term".to_string(),
    })?;
    if op != b'+' && op != b'-' {
        return Err(Error::Parse {
            pos: lx.pos,
            msg: "expected '+' or '-' before the sqrt term".to_string(),
        });
    }
    lx.pos += 1;
    let mut b = lx.integer()?;
    if op == b'-' {
        b = -b;
    }
    lx.expect(b'*')?;
    lx.eat_keyword("sqrt")?;
    lx.expect(b'(')?;
    let d_pos = lx.pos;
    let d_big = lx.integer()?;
    lx.expect(b')')?;
    let d = u64::try_from(&d_big).map_err(|_| Error::Parse {
        pos: d_pos,
        msg: format!("d = {} is out of range", d_big),
    })?;
    Ok((a, b, d))
}

impl FromStr for QuadInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lx = Lexer::new(s);
        let value = if lx.peek() == Some(b'(') {
            lx.expect(b'(')?;
            let (x, y, d) = parse_surd(&mut lx)?;
            lx.expect(b')')?;
            lx.expect(b'/')?;
            let two_pos = lx.pos;
            let two = lx.integer()?;
            if two != BigInt::from(2) {
                return Err(Error::Parse {
                    pos: two_pos,
                    msg: "only division by 2 is supported".to_string(),
                });
            }
            QuadInt::new(d, x, y)?
        } else {
            let (a, b, d) = parse_surd(&mut lx)?;
            QuadInt::from_integer_coords(d, a, b)?
        };
        if !lx.at_end() {
            return Err(Error::Parse {
                pos: lx.pos,
                msg: "trailing input after unit literal".to_string(),
            });
        }
        Ok(value)
    }
}

/// Resolves a well-known unit by name (`golden` and `silver` ratios).
pub fn named_unit(name: &str) -> Option<QuadInt> {
    match name {
        "golden" => Some(QuadInt::new(5, 1, 1).unwrap()),
        "silver" => Some(QuadInt::new(2, 2, 2).unwrap()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, x: i64, y: i64) -> QuadInt {
        QuadInt::new(d, x, y).unwrap()
    }

    #[test]
    fn construction_validates_d_and_parity() {
        assert!(QuadInt::new(5, 1, 1).is_ok()); // (1+sqrt(5))/2
        assert!(QuadInt::new(3, 4, 2).is_ok()); // 2+sqrt(3)
        assert!(matches!(
            QuadInt::new(4, 2, 2),
            Err(Error::NonSquarefreeD { d: 4 })
        ));
        assert!(matches!(QuadInt::new(1, 2, 0), Err(Error::InvalidD { d: 1 })));
        assert!(matches!(QuadInt::new(12, 2, 0), Err(Error::NonSquarefreeD { .. })));
        // d = 3 mod 4: odd half-coordinates are not ring elements
        assert!(matches!(
            QuadInt::new(3, 1, 1),
            Err(Error::ParityViolation { .. })
        ));
        // d = 1 mod 4: mixed parity is not a ring element
        assert!(matches!(
            QuadInt::new(5, 1, 2),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let u = q(2, 2, 2); // 1+sqrt(2)
        assert_eq!(u.pow(0), q(2, 2, 0));
        assert_eq!(u.pow(2), q(2, 6, 4)); // 3+2*sqrt(2)

        let v = q(3, 4, 2); // 2+sqrt(3)
        let prod = v.mul(&v.conj()).unwrap();
        assert!(prod.is_one());

        assert!(matches!(
            q(2, 2, 2).add(&q(3, 2, 2)),
            Err(Error::MixedFields { d1: 2, d2: 3 })
        ));
    }

    #[test]
    fn norm_and_trace() {
        assert_eq!(q(3, 4, 2).norm(), BigInt::from(1));
        assert_eq!(q(2, 2, 2).norm(), BigInt::from(-1));
        assert_eq!(q(5, 1, 1).norm(), BigInt::from(-1));
        assert_eq!(q(3, 4, 2).trace(), BigInt::from(4));
        assert_eq!(q(5, 3, 1).trace(), BigInt::from(3));
    }

    #[test]
    fn min_poly_examples() {
        let mp = q(3, 4, 2).min_poly().unwrap();
        assert_eq!(mp.trace, BigInt::from(4));
        assert_eq!(mp.norm, BigInt::from(1));
        assert_eq!(mp.to_string(), "X^2 - 4X + 1");

        let mp = q(5, 1, 1).min_poly().unwrap();
        assert_eq!((mp.trace, mp.norm), (BigInt::from(1), BigInt::from(-1)));

        let mp = q(2, 6, 4).min_poly().unwrap();
        assert_eq!((mp.trace, mp.norm), (BigInt::from(6), BigInt::from(1)));

        assert!(matches!(q(2, 2, 0).min_poly(), Err(Error::RationalElement)));
    }

    #[test]
    fn exact_comparison() {
        let one = BigInt::one();
        assert_eq!(
            q(3, 4, 2).compare_to_rational(&BigInt::from(6), &one),
            Ordering::Less
        );
        assert_eq!(
            q(2, 2, 0).compare_to_rational(&BigInt::from(1), &one),
            Ordering::Equal
        );
        assert_eq!(
            q(21, 5, 1).compare_to_rational(&BigInt::from(6), &one),
            Ordering::Less
        );
        // (7+3*sqrt(5))/2 = 6.854... > 6
        assert_eq!(
            q(5, 7, 3).compare_to_rational(&BigInt::from(6), &one),
            Ordering::Greater
        );
        // golden ratio vs 13/8 (a close convergent): phi < 13/8
        assert_eq!(
            q(5, 1, 1).compare_to_rational(&BigInt::from(13), &BigInt::from(8)),
            Ordering::Less
        );
        // and phi > 8/5
        assert_eq!(
            q(5, 1, 1).compare_to_rational(&BigInt::from(8), &BigInt::from(5)),
            Ordering::Greater
        );
    }

    #[test]
    fn literal_round_trip() {
        for s in [
            "2+1*sqrt(3)",
            "(1+1*sqrt(5))/2",
            "(11+5*sqrt(5))/2",
            "3+2*sqrt(2)",
            "-2+1*sqrt(3)",
            "2-1*sqrt(3)",
            "( 9 + 1 * sqrt( 85 ) ) / 2",
        ] {
            let u: QuadInt = s.parse().unwrap();
            let round: QuadInt = u.to_literal().parse().unwrap();
            assert_eq!(u, round, "round trip failed for {}", s);
        }
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert!(matches!(
            "1+1*sqrt(4)".parse::<QuadInt>(),
            Err(Error::NonSquarefreeD { d: 4 })
        ));
        assert!(matches!(
            "(1+2*sqrt(5))/2".parse::<QuadInt>(),
            Err(Error::ParityViolation { .. })
        ));
        assert!(matches!(
            "(1+1*sqrt(3))/2".parse::<QuadInt>(),
            Err(Error::ParityViolation { .. })
        ));
        assert!(matches!("2+sqrt(3)".parse::<QuadInt>(), Err(Error::Parse { .. })));
        assert!(matches!("2+1*sqrt(3)x".parse::<QuadInt>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "(1+1*sqrt(5))/3".parse::<QuadInt>(),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn named_units_resolve() {
        assert_eq!(named_unit("golden").unwrap(), q(5, 1, 1));
        assert_eq!(named_unit("silver").unwrap(), q(2, 2, 2));
        assert!(named_unit("bronze").is_none());
    }

    #[test]
    fn conjugate_identities() {
        for (d, x, y) in [(2i64, 2i64, 2i64), (3, 4, 2), (5, 1, 1), (5, 11, 5), (21, 5, 1)] {
            let u = q(d as u64, x, y);
            let prod = u.mul(&u.conj()).unwrap();
            assert!(prod.y().is_zero());
            assert_eq!(prod.x() / 2, u.norm());
            let sum = u.add(&u.conj()).unwrap();
            assert!(sum.y().is_zero());
            assert_eq!(sum.x() / 2, u.trace());
        }
    }

    #[test]
    fn unit_times_signed_conjugate_is_one() {
        // u * (norm(u) * conj(u)) = 1, realizing the inverse of a unit
        for (d, x, y) in [(2u64, 2i64, 2i64), (2, 6, 4), (3, 4, 2), (5, 1, 1), (5, 11, 5), (21, 5, 1)] {
            let u = q(d, x, y);
            let eps = u.norm();
            let inv = u.conj().scale(&eps);
            assert!(u.mul(&inv).unwrap().is_one());
        }
    }

    use rand::Rng as _;

    fn random_element(rng: &mut impl rand::Rng, d: u64) -> QuadInt {
        loop {
            let x = rng.gen_range(-10_000i64..10_000);
            let y = rng.gen_range(-10_000i64..10_000);
            if let Ok(q) = QuadInt::new(d, x, y) {
                return q;
            }
        }
    }

    #[test]
    fn random_norm_trace_invariants() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in [2u64, 3, 5, 13, 21] {
            for _ in 0..1000 {
                let a = random_element(&mut rng, d);
                let prod = a.mul(&a.conj()).unwrap();
                assert!(prod.y().is_zero());
                assert_eq!(prod.x() / 2, a.norm());
                let sum = a.add(&a.conj()).unwrap();
                assert!(sum.y().is_zero());
                assert_eq!(sum.x() / 2, a.trace());
            }
        }
    }

    #[test]
    fn random_pow_additivity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in [2u64, 3, 5, 13, 21] {
            for _ in 0..40 {
                let a = random_element(&mut rng, d);
                let m = rng.gen_range(0u64..=50);
                let n = rng.gen_range(0u64..=50);
                assert_eq!(a.pow(m + n), a.pow(m).mul(&a.pow(n)).unwrap());
            }
        }
    }

    #[test]
    fn exact_compare_agrees_with_real_value() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let bits = crate::real::bits_for_digits(60);
        let margin = crate::real::parse_decimal("1e-40", bits);
        let mut checked = 0;
        while checked < 1000 {
            let d = [2u64, 3, 5, 13, 21][rng.gen_range(0..5)];
            let a = random_element(&mut rng, d);
            let p = BigInt::from(rng.gen_range(-40_000i64..40_000));
            let r = BigInt::from(rng.gen_range(1i64..64));
            let float_diff = crate::real::sub(
                &a.to_bigfloat(bits),
                &crate::real::div(
                    &crate::real::from_bigint(&p, bits),
                    &crate::real::from_bigint(&r, bits),
                    bits,
                ),
                bits,
            );
            // only judge cases the float gap can certify
            if crate::real::cmp_order(&float_diff.abs(), &margin) != Ordering::Greater {
                continue;
            }
            let exact = a.compare_to_rational(&p, &r);
            let zero = crate::real::from_u64(0, 64);
            let float_sign = crate::real::cmp_order(&float_diff, &zero);
            assert_eq!(exact, float_sign, "disagreement for {} vs {}/{}", a, p, r);
            checked += 1;
        }
    }
}
