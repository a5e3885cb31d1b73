//! High-precision real evaluation on top of astro-float.
//!
//! Exact integer arithmetic is always primary in this crate; floating point
//! enters only where a quantity is genuinely transcendental (logarithms, the
//! analytic bound function g, decimal rendering of surds). Every comparison
//! made here is guarded: if the computed margin is too small to trust at the
//! working precision, the evaluation is repeated at doubled precision until
//! the sign is unambiguous.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::quadring::QuadInt;

pub const DEFAULT_DIGITS: usize = 50;
const RM: RoundingMode = RoundingMode::ToEven;
const MAX_DIGITS: usize = 6400;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Working precision in bits for a decimal digit count, with guard bits.
pub fn bits_for_digits(digits: usize) -> usize {
    digits * 3322 / 1000 + 64
}

pub fn parse_decimal(s: &str, bits: usize) -> BigFloat {
    CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, &mut cc.borrow_mut()))
}

pub fn from_bigint(n: &BigInt, bits: usize) -> BigFloat {
    parse_decimal(&n.to_string(), bits)
}

pub fn from_u64(n: u64, bits: usize) -> BigFloat {
    BigFloat::from_u64(n, bits)
}

pub fn ln(x: &BigFloat, bits: usize) -> BigFloat {
    CONSTS.with(|cc| x.ln(bits, RM, &mut cc.borrow_mut()))
}

pub fn exp(x: &BigFloat, bits: usize) -> BigFloat {
    CONSTS.with(|cc| x.exp(bits, RM, &mut cc.borrow_mut()))
}

pub fn sqrt(x: &BigFloat, bits: usize) -> BigFloat {
    x.sqrt(bits, RM)
}

pub fn pi(bits: usize) -> BigFloat {
    CONSTS.with(|cc| cc.borrow_mut().pi(bits, RM))
}

pub fn add(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.add(b, bits, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.sub(b, bits, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.mul(b, bits, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.div(b, bits, RM)
}

fn pow10(exp: i64, bits: usize) -> BigFloat {
    parse_decimal(&format!("1e{}", exp), bits)
}

/// Total order on finite values; astro-float's raw cmp returns an
/// unnormalized signed word, so it is mapped onto `Ordering` here.
pub fn cmp_order(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(v) => v.cmp(&0),
        None => panic!("NaN in high-precision comparison"),
    }
}

/// Resolves the sign of a quantity computed by `eval` at escalating precision.
///
/// `eval(bits)` must recompute the same mathematical quantity at the given
/// working precision. Starting from `start_digits` decimal digits, the sign
/// is accepted once the magnitude clears 10^-(digits-30); below that margin
/// the precision doubles and the value is recomputed. At the default 50
/// digits the guard threshold is therefore 1e-20.
///
/// Panics if the sign is still unresolved at 6400 digits, which can only
/// happen when the quantity is exactly zero; callers use this for quantities
/// known to be irrational or otherwise nonzero.
pub fn resolve_sign<F>(mut eval: F, start_digits: usize) -> Ordering
where
    F: FnMut(usize) -> BigFloat,
{
    let mut digits = start_digits.max(40);
    loop {
        let bits = bits_for_digits(digits);
        let value = eval(bits);
        if value.is_zero() && digits >= MAX_DIGITS {
            panic!("sign resolution failed: quantity is zero at {} digits", digits);
        }
        let guard = pow10(-((digits as i64) - 30), bits);
        if cmp_order(&value.abs(), &guard) == Ordering::Greater {
            return match value.sign() {
                Some(Sign::Pos) => Ordering::Greater,
                Some(Sign::Neg) => Ordering::Less,
                None => panic!("sign resolution hit NaN"),
            };
        }
        if digits >= MAX_DIGITS {
            panic!(
                "comparison unresolved at {} digits (margin below guard); \
                 the compared quantities appear to be equal",
                digits
            );
        }
        digits *= 2;
    }
}

/// Splits astro-float's scientific representation into (is_negative, digits,
/// decimal exponent) where the value is 0.digits * 10^exp.
fn sci_parts(f: &BigFloat, bits: usize) -> (bool, Vec<u8>, i64) {
    let s = CONSTS.with(|cc| {
        f.format(Radix::Dec, RM, &mut cc.borrow_mut())
            .expect("decimal format")
    });
    let _ = bits;
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (body, 0),
    };
    let mut digits: Vec<u8> = Vec::new();
    let mut int_len = 0usize;
    let mut seen_point = false;
    for ch in mant.chars() {
        match ch {
            '.' => seen_point = true,
            '0'..='9' => {
                digits.push(ch as u8 - b'0');
                if !seen_point {
                    int_len += 1;
                }
            }
            _ => panic!("unexpected mantissa character {:?}", ch),
        }
    }
    // normalize to 0.digits * 10^exp
    let mut exp10 = exp + int_len as i64;
    while let Some(0) = digits.first() {
        digits.remove(0);
        exp10 -= 1;
    }
    while let Some(0) = digits.last() {
        digits.pop();
    }
    (neg, digits, exp10)
}

/// Rounds a digit vector (value 0.digits * 10^exp) to `keep` digits, half-up.
fn round_digits(mut digits: Vec<u8>, mut exp: i64, keep: usize) -> (Vec<u8>, i64) {
    if digits.len() > keep {
        let round_up = digits[keep] >= 5;
        digits.truncate(keep);
        if round_up {
            let mut i = keep;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    exp += 1;
                    digits.truncate(keep);
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while let Some(0) = digits.last() {
        digits.pop();
    }
    (digits, exp)
}

fn render_plain(neg: bool, digits: &[u8], exp: i64) -> String {
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if digits.is_empty() {
        return "0.0".to_string();
    }
    let dstr: String = digits.iter().map(|d| (d + b'0') as char).collect();
    if exp > 40 || exp < -40 {
        // fall back to scientific notation for extreme magnitudes
        out.push_str(&dstr[..1]);
        out.push('.');
        if dstr.len() > 1 {
            out.push_str(&dstr[1..]);
        } else {
            out.push('0');
        }
        out.push_str(&format!("e{}", exp - 1));
    } else if exp <= 0 {
        out.push_str("0.");
        for _ in 0..(-exp) {
            out.push('0');
        }
        out.push_str(&dstr);
    } else if (exp as usize) >= dstr.len() {
        out.push_str(&dstr);
        for _ in 0..(exp as usize - dstr.len()) {
            out.push('0');
        }
        out.push_str(".0");
    } else {
        out.push_str(&dstr[..exp as usize]);
        out.push('.');
        out.push_str(&dstr[exp as usize..]);
    }
    out
}

/// Formats a recomputable quantity to `digits` significant decimal digits,
/// correctly rounded: the value is evaluated with guard precision and the
/// rounding is accepted only once two successive precisions agree.
pub fn format_with<F>(mut eval: F, digits: usize) -> String
where
    F: FnMut(usize) -> BigFloat,
{
    let mut work = digits + 20;
    loop {
        let a = eval(bits_for_digits(work));
        let b = eval(bits_for_digits(work + 20));
        if a.is_zero() && b.is_zero() {
            return "0.0".to_string();
        }
        let (na, da, ea) = sci_parts(&a, bits_for_digits(work));
        let (nb, db, eb) = sci_parts(&b, bits_for_digits(work + 20));
        let (ra, ea) = round_digits(da, ea, digits);
        let (rb, eb) = round_digits(db, eb, digits);
        if na == nb && ra == rb && ea == eb {
            return render_plain(na, &ra, ea);
        }
        work *= 2;
        assert!(work <= MAX_DIGITS, "decimal rendering did not stabilize");
    }
}

pub fn format_bigfloat(f: &BigFloat, digits: usize) -> String {
    let (neg, d, e) = sci_parts(f, 0);
    let (rd, re) = round_digits(d, e, digits);
    render_plain(neg, &rd, re)
}

impl QuadInt {
    /// The real embedding (x + y*sqrt(d))/2 at the given precision in bits.
    pub fn to_bigfloat(&self, bits: usize) -> BigFloat {
        let x = from_bigint(self.x(), bits);
        let y = from_bigint(self.y(), bits);
        let s = sqrt(&from_u64(self.d(), bits), bits);
        let two = from_u64(2, bits);
        div(&add(&x, &mul(&y, &s, bits), bits), &two, bits)
    }

    /// Natural logarithm of the real embedding.
    pub fn ln_value(&self, bits: usize) -> BigFloat {
        ln(&self.to_bigfloat(bits), bits)
    }

    /// Decimal rendering, correctly rounded to `digits` significant digits.
    /// Rational elements (y = 0, hence x even) render exactly.
    pub fn real_value(&self, digits: usize) -> String {
        if self.y().is_zero() {
            debug_assert!(self.x().is_even());
            return format!("{}.0", self.x() / 2);
        }
        format_with(|bits| self.to_bigfloat(bits), digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadring::QuadInt;

    #[test]
    fn real_value_examples() {
        let u = QuadInt::new(5, 3, 1).unwrap(); // (3+sqrt(5))/2
        let v = u.real_value(11);
        assert_eq!(v, "2.6180339887");

        let one = QuadInt::one(5).unwrap();
        assert_eq!(one.real_value(50), "1.0");

        let s = QuadInt::new(2, 2, 2).unwrap(); // 1+sqrt(2)
        assert_eq!(s.real_value(11), "2.4142135624");
        assert_eq!(&s.real_value(50)[..12], "2.4142135623");

        let three = QuadInt::new(5, 6, 0).unwrap();
        assert_eq!(three.real_value(50), "3.0");
        let neg = QuadInt::new(5, -6, 0).unwrap();
        assert_eq!(neg.real_value(50), "-3.0");
    }

    #[test]
    fn fifty_digit_default() {
        let u = QuadInt::new(5, 3, 1).unwrap();
        let v = u.real_value(DEFAULT_DIGITS);
        // phi^2 = 2.61803398874989484820458683436563811772030917980576...
        assert_eq!(v, "2.6180339887498948482045868343656381177203091798058");
    }

    #[test]
    fn resolve_sign_escalates() {
        // sqrt(2) - 1.41421356237 is about 9.5e-13: forces one escalation at
        // start_digits = 40 only if the guard is not met; at 40 digits the
        // guard is 1e-10, so this resolves immediately; a tighter gap does not.
        let ord = resolve_sign(
            |bits| {
                let s = sqrt(&from_u64(2, bits), bits);
                let c = parse_decimal("1.41421356237", bits);
                sub(&s, &c, bits)
            },
            50,
        );
        assert_eq!(ord, Ordering::Greater);

        // 41 digits of sqrt(2); the difference is ~3e-42, below the 50-digit
        // guard of 1e-20 times... the initial margin fails and precision doubles.
        let ord = resolve_sign(
            |bits| {
                let s = sqrt(&from_u64(2, bits), bits);
                let c = parse_decimal("1.4142135623730950488016887242096980785696", bits);
                sub(&s, &c, bits)
            },
            50,
        );
        assert_eq!(ord, Ordering::Greater);
    }

    #[test]
    fn format_with_stabilizes() {
        let s = format_with(
            |bits| {
                let x = from_u64(1, bits);
                div(&x, &from_u64(3, bits), bits)
            },
            10,
        );
        assert_eq!(s, "0.3333333333");
        let s = format_with(|bits| from_u64(2, bits), 10);
        assert_eq!(s, "2.0");
        let s = format_with(
            |bits| {
                let x = from_u64(2, bits);
                sqrt(&x, bits)
            },
            5,
        );
        assert_eq!(s, "1.4142");
    }

    #[test]
    fn rounding_carries() {
        // 0.99999 rounded to 4 digits must carry to 1.000
        let s = format_with(|bits| parse_decimal("0.99999", bits), 4);
        assert_eq!(s, "1.0");
        let s = format_with(|bits| parse_decimal("19.996", bits), 4);
        assert_eq!(s, "20.0");
    }
}
