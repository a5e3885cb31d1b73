//! Primality testing and integer factorization for sequence terms.
//!
//! Trial division runs to 10^6, then Pollard rho with Brent cycle detection
//! takes over. The rho polynomial constant steps deterministically through
//! c = 1, 2, 3, ... so a factorization is bit-for-bit replayable given the
//! same input and budget. Primality is deterministic Miller-Rabin below
//! 3.4*10^14 and Baillie-PSW (strong base-2 plus strong Lucas) above; values
//! in the probabilistic range are flagged so certificates can record it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Below this, Miller-Rabin with the fixed base set is deterministic.
pub const DETERMINISTIC_PRIMALITY_BOUND: u64 = 341_550_071_728_321;

/// Default Pollard-rho iteration budget; sized so every sequence term the
/// verification reports need factors in well under a second.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 22;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::with_capacity(80_000);
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        primes
    })
}

/// Primes up to the trial-division bound, shared and built once.
pub fn prime_sieve() -> &'static [u32] {
    small_primes()
}

fn miller_rabin_witness(n: &BigUint, base: &BigUint, d: &BigUint, s: u64) -> bool {
    // returns true if `base` witnesses that n is composite
    let n_minus_1 = n - 1u32;
    let mut x = base.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return false;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return false;
        }
    }
    true
}

fn jacobi(mut a: BigInt, mut n: BigUint) -> i32 {
    debug_assert!(n.is_odd());
    let nn = BigInt::from(n.clone());
    a = a.mod_floor(&nn);
    let mut a = a.to_biguint().expect("non-negative after mod_floor");
    let mut result = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas_prp(n: &BigUint) -> bool {
    // find D = 5, -7, 9, -11, ... with jacobi(D, n) = -1
    let mut d_abs = 5i64;
    let mut sign = 1i64;
    let d = loop {
        let d = sign * d_abs;
        match jacobi(BigInt::from(d), n.clone()) {
            -1 => break d,
            0 => {
                // gcd(D, n) > 1; n > |D| here means composite
                if BigUint::from(d_abs as u64) != *n {
                    return false;
                }
                break d;
            }
            _ => {}
        }
        d_abs += 2;
        sign = -sign;
        if d_abs > 1_000 {
            // jacobi(D, n) != -1 for this long implies n is a perfect square
            if n.sqrt().pow(2) == *n {
                return false;
            }
        }
    };
    // P = 1, Q = (1 - D)/4
    let q_int = BigInt::from((1 - d) / 4);
    let d_int = BigInt::from(d);
    let nn = BigInt::from(n.clone());

    // n + 1 = k * 2^s with k odd
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // inverse of 2 mod n (n odd) is (n + 1)/2
    let half: BigUint = &n_plus_1 >> 1;
    let half = BigInt::from(half.mod_floor(n));

    // binary chain over the bits of k computing (U_k, V_k, Q^k) mod n
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = k.bits();
    for i in (0..bits).rev() {
        // double: (U, V, Q^j) -> (U*V, V^2 - 2Q^j, Q^2j)
        let new_u = (&u * &v).mod_floor(&nn);
        let vv: BigInt = &v * &v - &qk * 2;
        let new_v = vv.mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        u = new_u;
        v = new_v;
        if k.bit(i) {
            // increment: with P = 1
            let new_u = ((&u + &v) * &half).mod_floor(&nn);
            let new_v = ((&d_int * &u + &v) * &half).mod_floor(&nn);
            qk = (&qk * &q_int).mod_floor(&nn);
            u = new_u;
            v = new_v;
        }
    }

    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        let vv: BigInt = &v * &v - &qk * 2;
        v = vv.mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality test: deterministic Miller-Rabin below
/// [`DETERMINISTIC_PRIMALITY_BOUND`], Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &[2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    if n.to_u64().map_or(false, |v| v < DETERMINISTIC_PRIMALITY_BOUND) {
        for &base in &[2u32, 3, 5, 7, 11, 13, 17] {
            if miller_rabin_witness(n, &BigUint::from(base), &d, s) {
                return false;
            }
        }
        true
    } else {
        !miller_rabin_witness(n, &BigUint::from(2u32), &d, s) && strong_lucas_prp(n)
    }
}

/// Whether `is_prime` is a proof for this magnitude (vs a Baillie-PSW
/// probable-prime result).
pub fn primality_is_deterministic(n: &BigUint) -> bool {
    n.to_u64().map_or(false, |v| v < DETERMINISTIC_PRIMALITY_BOUND)
}

/// Pollard rho with Brent cycle detection; f(x) = x^2 + c mod n.
/// Deterministic for fixed (n, c). Returns a nontrivial factor or None if
/// the iteration cap is reached.
fn rho_brent(n: &BigUint, c: u64, max_iters: u64) -> (Option<BigUint>, u64) {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;

    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut used: u64 = 0;
    let m: u64 = 128;

    while g.is_one() && used < max_iters {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        used += r;
        let mut k: u64 = 0;
        while k < r && g.is_one() && used < max_iters {
            ys = y.clone();
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            used += steps;
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }
    if g == *n {
        // backtrack one step at a time
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g.is_one() || g == *n {
        (None, used)
    } else {
        (Some(g), used)
    }
}

/// A signed factorization sign * prod p_i^e_i * cofactor.
///
/// `complete` is false when the rho budget ran out; the leftover composite
/// is kept in `cofactor` so the product always reconstructs the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl Factorization {
    /// Reconstructs the original value.
    pub fn value(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc *= &self.cofactor;
        let v = BigInt::from(acc);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// The distinct primes, ignoring the sign; errors if incomplete.
    pub fn prime_set(&self) -> Result<BTreeSet<BigUint>> {
        if !self.complete {
            return Err(Error::IncompleteFactorization {
                value: self.value().to_string(),
            });
        }
        Ok(self.factors.iter().map(|(p, _)| p.clone()).collect())
    }

    /// True if any listed prime lies beyond the deterministic primality range.
    pub fn uses_probable_primes(&self) -> bool {
        self.factors
            .iter()
            .any(|(p, _)| !primality_is_deterministic(p))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() && self.cofactor.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", p)?;
            } else {
                write!(f, "{}^{}", p, e)?;
            }
        }
        if !self.cofactor.is_one() {
            if !first {
                write!(f, " * ")?;
            }
            write!(f, "[{}]", self.cofactor)?;
        }
        Ok(())
    }
}

/// Factors n with the default rho budget.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// Factors n = sign * prod p^e (* cofactor when the budget is exhausted).
pub fn factorize_with_budget(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: HashMap<BigUint, u32> = HashMap::new();

    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > m {
            break;
        }
        while (&m % &p_big).is_zero() {
            m /= &p_big;
            *factors.entry(p_big.clone()).or_insert(0) += 1;
        }
    }

    let mut budget_left = budget;
    let mut cofactor = BigUint::one();
    let mut complete = true;
    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    while let Some(composite) = stack.pop() {
        if is_prime(&composite) {
            *factors.entry(composite).or_insert(0) += 1;
            continue;
        }
        // perfect powers settle faster if caught here; rho also finds them,
        // but the sqrt check is free compared to its cost
        let root = composite.sqrt();
        if &root * &root == composite {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        let mut found = None;
        let mut c = 1u64;
        while budget_left > 0 {
            let (hit, used) = rho_brent(&composite, c, budget_left);
            budget_left = budget_left.saturating_sub(used.max(1));
            if let Some(g) = hit {
                found = Some(g);
                break;
            }
            c += 1;
        }
        match found {
            Some(g) => {
                stack.push(&composite / &g);
                stack.push(g);
            }
            None => {
                complete = false;
                cofactor *= composite;
            }
        }
    }

    let mut factors: Vec<(BigUint, u32)> = factors.into_iter().collect();
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization {
        sign,
        factors,
        cofactor,
        complete,
    })
}

/// Distinct primes of |n| with the default budget; errors if the
/// factorization cannot be completed.
pub fn prime_set(n: &BigInt) -> Result<BTreeSet<BigUint>> {
    factorize(n)?.prime_set()
}

// ---------------------------------------------------------------------------
// Persistent cache: one JSON record per line, keyed by |value| in decimal.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    value: String,
    factors: Vec<(String, u32)>,
    complete: bool,
}

impl CacheRecord {
    fn from_factorization(value: &BigUint, f: &Factorization) -> Self {
        CacheRecord {
            value: value.to_string(),
            factors: f
                .factors
                .iter()
                .map(|(p, e)| (p.to_string(), *e))
                .collect(),
            complete: f.complete,
        }
    }

    fn to_entry(&self) -> Option<(BigUint, Factorization)> {
        let value: BigUint = self.value.parse().ok()?;
        let mut factors = Vec::with_capacity(self.factors.len());
        let mut product = BigUint::one();
        for (p, e) in &self.factors {
            let p: BigUint = p.parse().ok()?;
            product *= p.pow(*e);
            factors.push((p.clone(), *e));
        }
        let (cofactor, complete) = if self.complete {
            if product != value {
                return None;
            }
            (BigUint::one(), true)
        } else {
            if product.is_zero() || !(&value % &product).is_zero() {
                return None;
            }
            (&value / &product, false)
        };
        Some((
            value,
            Factorization {
                sign: 1,
                factors,
                cofactor,
                complete,
            },
        ))
    }
}

/// Append-only factorization cache backed by a line-delimited JSON file.
///
/// Records are keyed by absolute value. Loading skips corrupt lines with a
/// warning on stderr. Writes append a single line each, so one writer can
/// share the file with concurrent readers.
pub struct FactorCache {
    path: PathBuf,
    entries: HashMap<BigUint, Factorization>,
}

impl FactorCache {
    /// Opens (or lazily creates) a cache file and loads its valid records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = serde_json::from_str::<CacheRecord>(&line)
                    .ok()
                    .and_then(|r| r.to_entry());
                match parsed {
                    Some((value, f)) => {
                        entries.insert(value, f);
                    }
                    None => {
                        eprintln!(
                            "warning: skipping corrupt cache line {} in {}",
                            lineno + 1,
                            path.display()
                        );
                    }
                }
            }
        }
        Ok(FactorCache { path, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, value: &BigUint) -> Option<&Factorization> {
        self.entries.get(value)
    }

    /// Records a factorization (keyed by |value|) and appends it to the file.
    pub fn insert(&mut self, f: &Factorization) -> Result<()> {
        let value = f.value().magnitude().clone();
        if self.entries.contains_key(&value) {
            return Ok(());
        }
        let mut unsigned = f.clone();
        unsigned.sign = 1;
        let record = CacheRecord::from_factorization(&value, &unsigned);
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut line = serde_json::to_string(&record).expect("serializable record");
        line.push('\n');
        file.write_all(line.as_bytes())?;
        self.entries.insert(value, unsigned);
        Ok(())
    }
}

/// Cache-aware factorization: consults the cache first and records fresh
/// complete results.
pub fn factorize_cached(
    n: &BigInt,
    budget: u64,
    cache: Option<&mut FactorCache>,
) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let magnitude = n.magnitude().clone();
    if let Some(cache) = &cache {
        if let Some(hit) = cache.get(&magnitude) {
            let mut f = hit.clone();
            f.sign = sign;
            return Ok(f);
        }
    }
    let f = factorize_with_budget(n, budget)?;
    if let Some(cache) = cache {
        if f.complete {
            cache.insert(&f)?;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&BigUint::from(9349u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::from(0u32)));
        assert!(!is_prime(&BigUint::from(103680u32)));
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(3571u32)));
        assert!(is_prime(&BigUint::from(521u32)));
        // strong pseudoprime to base 2 must be rejected
        assert!(!is_prime(&BigUint::from(2047u32)));
        assert!(!is_prime(&BigUint::from(341u32)));
    }

    #[test]
    fn primality_against_sieve() {
        let sieve: std::collections::HashSet<u32> =
            prime_sieve().iter().copied().take_while(|&p| p < 10_000).collect();
        for n in 0..10_000u32 {
            assert_eq!(
                is_prime(&BigUint::from(n)),
                sieve.contains(&n),
                "disagreement at {}",
                n
            );
        }
    }

    #[test]
    fn primality_large() {
        // 2^89 - 1 is a Mersenne prime (beyond the deterministic range)
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(!primality_is_deterministic(&m89));
        assert!(is_prime(&m89));
        // 2^83 - 1 = 167 * 57912614113275649087721
        let m83 = (BigUint::one() << 83) - 1u32;
        assert!(!is_prime(&m83));
        // a 20-digit semiprime
        let semi = BigUint::from(2760727302559u64) * BigUint::from(2760727302631u64);
        assert!(!is_prime(&semi));
    }

    #[test]
    fn factorize_table_values() {
        let f = factorize(&big(-39601)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(BigUint::from(199u32), 2)]);
        assert!(f.complete);

        let f = factorize(&big(-2700)).unwrap();
        assert_eq!(
            f.factors,
            vec![
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 3),
                (BigUint::from(5u32), 2)
            ]
        );
        assert_eq!(f.to_string(), "-2^2 * 3^3 * 5^2");

        let f = factorize(&big(-1)).unwrap();
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
        assert!(f.complete);
        assert_eq!(f.to_string(), "-1");
        assert_eq!(f.value(), big(-1));
    }

    #[test]
    fn prime_sets() {
        let set = prime_set(&big(-64079)).unwrap();
        let expect: BTreeSet<BigUint> =
            [139u32, 461].iter().map(|&p| BigUint::from(p)).collect();
        assert_eq!(set, expect);

        let set = prime_set(&big(-12096)).unwrap();
        let expect: BTreeSet<BigUint> = [2u32, 3, 7].iter().map(|&p| BigUint::from(p)).collect();
        assert_eq!(set, expect);

        let set = prime_set(&big(-320)).unwrap();
        let expect: BTreeSet<BigUint> = [2u32, 5].iter().map(|&p| BigUint::from(p)).collect();
        assert_eq!(set, expect);

        assert!(matches!(prime_set(&big(0)), Err(Error::ZeroInput)));
    }

    #[test]
    fn reconstruction_and_primality_invariants() {
        let samples: Vec<BigInt> = vec![
            big(2),
            big(-360),
            big(1_000_003),
            big(600_851_475_143),
            BigInt::from(1_000_000_007u64) * BigInt::from(1_000_000_009u64),
            BigInt::parse_bytes(b"-87178291199", 10).unwrap(), // prime
            BigInt::parse_bytes(b"614889782588491410", 10).unwrap(), // primorial
        ];
        for n in samples {
            let f = factorize(&n).unwrap();
            assert_eq!(f.value(), n, "reconstruction failed for {}", n);
            assert!(f.complete);
            for (p, _) in &f.factors {
                assert!(is_prime(p), "{} listed as prime", p);
            }
        }
    }

    #[test]
    fn budget_exhaustion_keeps_cofactor() {
        // tiny budget: the 20-digit semiprime cannot be split
        let n = BigInt::from(2760727302559u64) * BigInt::from(2760727302631u64);
        let f = factorize_with_budget(&n, 4).unwrap();
        assert!(!f.complete);
        assert_eq!(f.value(), n);
        assert!(!is_prime(&f.cofactor));
        assert!(matches!(
            f.prime_set(),
            Err(Error::IncompleteFactorization { .. })
        ));
    }

    #[test]
    fn deterministic_given_budget() {
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(1_000_000_009u64) * BigInt::from(999_999_937u64);
        let a = factorize_with_budget(&n, DEFAULT_RHO_BUDGET).unwrap();
        let b = factorize_with_budget(&n, DEFAULT_RHO_BUDGET).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value(), n);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.jsonl");
        {
            let mut cache = FactorCache::open(&path).unwrap();
            let f = factorize(&big(-103680)).unwrap();
            cache.insert(&f).unwrap();
            assert_eq!(cache.len(), 1);
        }
        let mut cache = FactorCache::open(&path).unwrap();
        assert_eq!(cache.len(), 1);
        let hit = factorize_cached(&big(-103680), DEFAULT_RHO_BUDGET, Some(&mut cache)).unwrap();
        assert_eq!(hit.sign, -1);
        assert_eq!(hit.value(), big(-103680));
    }

    #[test]
    fn cache_skips_corrupt_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"value\":\"12\",\"factors\":[[\"2\",2],[\"3\",1]],\"complete\":true}\n",
                "this is not json\n",
                "{\"value\":\"12\",\"factors\":[[\"5\",1]],\"complete\":true}\n",
                "{\"value\":\"35\",\"factors\":[[\"5\",1],[\"7\",1]],\"complete\":true}\n",
            ),
        )
        .unwrap();
        let cache = FactorCache::open(&path).unwrap();
        // the corrupt line and the inconsistent record are both dropped
        assert_eq!(cache.len(), 2);
        assert!(cache.get(&BigUint::from(12u32)).is_some());
        assert!(cache.get(&BigUint::from(35u32)).is_some());
    }
}
