//! Binomial coefficients under the convention `C(a, b) = 0` whenever `a < 0`,
//! `b < 0`, or `b > a`.
//!
//! Two evaluation modes are provided: exact big integers, and natural logs
//! for overflow-free ratios. The scorers reach both through [`Backend`].

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Largest `a` for which `C(a, b)` always fits in a `u64`.
const SMALL_TABLE_MAX: usize = 62;

fn small_table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(SMALL_TABLE_MAX + 1);
        for a in 0..=SMALL_TABLE_MAX {
            let mut row = vec![1u64; a + 1];
            for b in 1..a {
                row[b] = rows[a - 1][b - 1] + rows[a - 1][b];
            }
            rows.push(row);
        }
        rows
    })
}

#[inline]
fn vanishes(a: i64, b: i64) -> bool {
    a < 0 || b < 0 || b > a
}

/// Exact `C(a, b)`.
pub fn binom_exact(a: i64, b: i64) -> BigUint {
    if vanishes(a, b) {
        return BigUint::zero();
    }
    let (a, b) = (a as u64, b as u64);
    let b = b.min(a - b);
    if a as usize <= SMALL_TABLE_MAX {
        return BigUint::from(small_table()[a as usize][b as usize]);
    }
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    acc
}

/// `ln C(a, b)`, or `None` when the coefficient vanishes.
pub fn ln_binom(a: i64, b: i64) -> Option<f64> {
    if vanishes(a, b) {
        return None;
    }
    let b = b.min(a - b);
    let mut sum = KahanSum::default();
    for i in 1..=b {
        sum.add(((a - b + i) as f64 / i as f64).ln());
    }
    Some(sum.value())
}

/// Which representation [`binom`] should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomMode {
    LogReal,
    ExactRational,
}

/// A binomial coefficient as a sign and log-magnitude pair.
///
/// `sign` is 0 for a vanishing coefficient (then `ln_abs` is `-inf`) and 1
/// otherwise; binomials never go negative under this convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.ln_abs.exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BinomValue {
    Log(SignedLog),
    Exact(BigRational),
}

impl BinomValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BinomValue::Log(log) => log.value(),
            BinomValue::Exact(q) => q.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

pub fn binom(a: i64, b: i64, mode: BinomMode) -> BinomValue {
    match mode {
        BinomMode::LogReal => BinomValue::Log(match ln_binom(a, b) {
            Some(ln_abs) => SignedLog { sign: 1, ln_abs },
            None => SignedLog {
                sign: 0,
                ln_abs: f64::NEG_INFINITY,
            },
        }),
        BinomMode::ExactRational => {
            BinomValue::Exact(BigRational::from_integer(BigInt::from(binom_exact(a, b))))
        }
    }
}

#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Arithmetic used by the closed-form scorers.
///
/// Every quantity in those formulas is a sum of terms of the form
/// `(product of binomials) / (product of binomials) * p / q`, so the backend
/// only has to evaluate such ratios and embed small fractions.
pub trait Backend: Sync {
    type Value: Num + Clone + Send + Sync + std::fmt::Debug;

    /// `Π C(num) / Π C(den)`. A vanishing numerator yields zero without
    /// touching the denominator; a vanishing denominator (only reachable
    /// when the numerator already vanished in the formulas) also yields zero.
    fn ratio(&self, num: &[(i64, i64)], den: &[(i64, i64)]) -> Self::Value;

    fn frac(&self, p: i64, q: i64) -> Self::Value;

    fn lift_f64(&self, x: f64) -> Self::Value;

    fn lift_exact(&self, q: &BigRational) -> Self::Value;
}

/// Double-precision backend working in log space.
///
/// Holds a compensated-sum table of `ln k!`; ratios cost O(number of
/// binomials) regardless of their magnitude.
#[derive(Debug, Clone)]
pub struct LogBackend {
    ln_fact: Vec<f64>,
}

impl LogBackend {
    /// Table large enough for binomials with top argument up to `max_arg`.
    pub fn new(max_arg: usize) -> Self {
        let mut ln_fact = Vec::with_capacity(max_arg + 2);
        let mut acc = KahanSum::default();
        ln_fact.push(0.0);
        for k in 1..=max_arg + 1 {
            acc.add((k as f64).ln());
            ln_fact.push(acc.value());
        }
        LogBackend { ln_fact }
    }

    #[inline]
    fn ln_binom(&self, a: i64, b: i64) -> Option<f64> {
        if vanishes(a, b) {
            return None;
        }
        let (a, b) = (a as usize, b as usize);
        if a >= self.ln_fact.len() {
            return ln_binom(a as i64, b as i64);
        }
        Some(self.ln_fact[a] - self.ln_fact[b] - self.ln_fact[a - b])
    }

    /// `ln Π C(num) - ln Π C(den)`, `None` when the ratio vanishes.
    pub fn ln_ratio(&self, num: &[(i64, i64)], den: &[(i64, i64)]) -> Option<f64> {
        let mut total = 0.0;
        for &(a, b) in num {
            total += self.ln_binom(a, b)?;
        }
        for &(a, b) in den {
            total -= self.ln_binom(a, b)?;
        }
        Some(total)
    }
}

impl Backend for LogBackend {
    type Value = f64;

    #[inline]
    fn ratio(&self, num: &[(i64, i64)], den: &[(i64, i64)]) -> f64 {
        self.ln_ratio(num, den).map_or(0.0, f64::exp)
    }

    #[inline]
    fn frac(&self, p: i64, q: i64) -> f64 {
        p as f64 / q as f64
    }

    fn lift_f64(&self, x: f64) -> f64 {
        x
    }

    fn lift_exact(&self, q: &BigRational) -> f64 {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact arbitrary-precision rational backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactBackend;

impl Backend for ExactBackend {
    type Value = BigRational;

    fn ratio(&self, num: &[(i64, i64)], den: &[(i64, i64)]) -> BigRational {
        let mut top = BigUint::one();
        for &(a, b) in num {
            if vanishes(a, b) {
                return BigRational::zero();
            }
            top *= binom_exact(a, b);
        }
        let mut bottom = BigUint::one();
        for &(a, b) in den {
            if vanishes(a, b) {
                return BigRational::zero();
            }
            bottom *= binom_exact(a, b);
        }
        BigRational::new(BigInt::from(top), BigInt::from(bottom))
    }

    fn frac(&self, p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn lift_f64(&self, x: f64) -> BigRational {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn lift_exact(&self, q: &BigRational) -> BigRational {
        q.clone()
    }
}
