//! Lehmer-Pierce sequence generation.
//!
//! For a unit u > 1 with conjugate v and norm e, the sequence is
//! delta_n = N(u^n - 1) = (uv)^n - (u^n + v^n) + 1 = e^n - t_n + 1, where
//! t_n = u^n + v^n is the integer trace sequence t_0 = 2, t_1 = T,
//! t_n = T*t_{n-1} - e*t_{n-2}. The closed form and the direct norm
//! computation are independent paths and must agree exactly; tests and the
//! certificate machinery lean on that redundancy.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::quadring::QuadInt;

/// Default cap on memoized sequence indices.
pub const DEFAULT_SEQ_CAP: u64 = 10_000;

/// The integer sequence t_n = u^n + v^n for a quadratic unit with trace T
/// and norm e, generated on demand.
#[derive(Debug)]
pub struct TraceSeq {
    trace: BigInt,
    norm: BigInt,
    values: Vec<BigInt>,
}

impl TraceSeq {
    pub fn new(trace: BigInt, norm: BigInt) -> Self {
        let t1 = trace.clone();
        TraceSeq {
            trace,
            norm,
            values: vec![BigInt::from(2), t1],
        }
    }

    /// t_n, extending the recurrence as needed.
    pub fn get(&mut self, n: u64) -> BigInt {
        let n = n as usize;
        while self.values.len() <= n {
            let k = self.values.len();
            let next = &self.trace * &self.values[k - 1] - &self.norm * &self.values[k - 2];
            self.values.push(next);
        }
        self.values[n].clone()
    }
}

fn unit_checks(u: &QuadInt) -> Result<BigInt> {
    let norm = u.norm();
    if !(norm == BigInt::one() || norm == -BigInt::one()) {
        return Err(Error::NotAUnit {
            norm: norm.to_string(),
        });
    }
    if !u.is_greater_than_one() {
        return Err(Error::NotGreaterThanOne);
    }
    Ok(norm)
}

/// delta_n by the trace-sequence closed form e^n - t_n + 1.
pub fn delta(u: &QuadInt, n: u64) -> Result<BigInt> {
    let norm = unit_checks(u)?;
    assert!(n >= 1, "delta is defined for n >= 1");
    let mut ts = TraceSeq::new(u.trace(), norm.clone());
    Ok(delta_from_trace(&norm, &ts.get(n), n))
}

fn delta_from_trace(norm: &BigInt, t_n: &BigInt, n: u64) -> BigInt {
    let eps_pow = if norm.is_one() || n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    eps_pow - t_n + 1
}

/// delta_n computed directly as norm(u^n - 1) in the quadratic ring; an
/// independent oracle for `delta`.
pub fn delta_direct(u: &QuadInt, n: u64) -> Result<BigInt> {
    unit_checks(u)?;
    assert!(n >= 1, "delta is defined for n >= 1");
    let one = QuadInt::one(u.d())?;
    Ok(u.pow(n).sub(&one)?.norm())
}

/// Position of delta_n inside the filtered sequence delta', or None when the
/// index is skipped (n = 2 mod 4).
pub fn delta_prime_index(n: u64) -> Option<u64> {
    assert!(n >= 1);
    if n % 4 == 2 {
        None
    } else {
        Some(n - (n + 2) / 4)
    }
}

/// For a norm -1 unit and odd k, returns the pair (delta_{2k}, -delta_k^2);
/// the two values are equal, which is why indices 2 mod 4 can never carry a
/// primitive prime divisor.
pub fn skipped_square_identity(u: &QuadInt, k: u64) -> Result<(BigInt, BigInt)> {
    if u.norm() != -BigInt::one() {
        return Err(Error::NotNormMinusOne);
    }
    if k % 2 == 0 {
        return Err(Error::KNotOdd { k });
    }
    let d2k = delta(u, 2 * k)?;
    let dk = delta(u, k)?;
    Ok((d2k, -(&dk * &dk)))
}

/// Memoized view of the sequence for one unit.
///
/// Interior state is a trace-sequence table behind a mutex: readers take the
/// lock only long enough to extend/copy a value, so a `DeltaSeq` can be
/// shared by reference across worker threads (exclusive-writer insertion).
#[derive(Debug)]
pub struct DeltaSeq {
    unit: QuadInt,
    norm: BigInt,
    cap: u64,
    traces: Mutex<TraceSeq>,
}

impl DeltaSeq {
    pub fn new(u: QuadInt) -> Result<Self> {
        Self::with_cap(u, DEFAULT_SEQ_CAP)
    }

    pub fn with_cap(u: QuadInt, cap: u64) -> Result<Self> {
        let norm = unit_checks(&u)?;
        let traces = Mutex::new(TraceSeq::new(u.trace(), norm.clone()));
        Ok(DeltaSeq {
            unit: u,
            norm,
            cap,
            traces,
        })
    }

    pub fn unit(&self) -> &QuadInt {
        &self.unit
    }

    /// The unit's norm, +1 or -1.
    pub fn norm_sign(&self) -> i8 {
        if self.norm.is_one() {
            1
        } else {
            -1
        }
    }

    pub fn get(&self, n: u64) -> Result<BigInt> {
        assert!(n >= 1, "delta is defined for n >= 1");
        if n > self.cap {
            return Err(Error::CapExceeded {
                what: "sequence index",
                requested: n,
                cap: self.cap,
            });
        }
        let t_n = self.traces.lock().expect("poisoned").get(n);
        Ok(delta_from_trace(&self.norm, &t_n, n))
    }
}
