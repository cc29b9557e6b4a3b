//! Minus-sign continued fractions of real quadratic irrationals.
//!
//! Every `x` expands as `a0 - 1/(a1 - 1/(a2 - ...))` with `a_i = ⌈x_i⌉` and
//! `x_{i+1} = 1/(a_i - x_i)`. For quadratic irrationals the expansion is
//! eventually periodic, and all digits after the first are at least 2.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{is_square, isqrt};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix2;
use crate::Int;

/// Default bound on expansion steps before giving up.
pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// `(P + √D) / Q`, kept normalized so that `Q | D - P²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: Int,
    d: Int,
    q: Int,
}

impl QuadIrr {
    /// Builds `(p + √d)/q`, rescaling all three by `|q|` when `q ∤ d - p²`.
    pub fn new(p: Int, d: Int, q: Int) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidQuadIrr("zero denominator".into()));
        }
        if !d.is_positive() || is_square(&d) {
            return Err(Error::InvalidQuadIrr(format!(
                "radicand {d} is not a positive non-square"
            )));
        }
        if (&d - &p * &p).is_multiple_of(&q) {
            return Ok(QuadIrr { p, d, q });
        }
        let s = q.abs();
        Ok(QuadIrr {
            p: &p * &s,
            d: &d * &s * &s,
            q: &q * &s,
        })
    }

    pub fn p(&self) -> &Int {
        &self.p
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn q(&self) -> &Int {
        &self.q
    }

    /// The Galois conjugate's floor, `⌊(P - √D)/Q⌋`.
    pub fn conjugate_floor(&self) -> Int {
        floor_surd(&self.p, false, &self.d, &self.q)
    }

    pub fn floor(&self) -> Int {
        floor_surd(&self.p, true, &self.d, &self.q)
    }

    /// Exact ceiling; since the value is irrational this is `floor + 1`.
    pub fn ceil(&self) -> Int {
        self.floor() + 1
    }

    /// One expansion step: the digit `⌈x⌉` and the tail `1/(⌈x⌉ - x)`.
    pub fn step(&self) -> (Int, QuadIrr) {
        let digit = self.ceil();
        let p = &digit * &self.q - &self.p;
        let q = (&p * &p - &self.d) / &self.q;
        (
            digit,
            QuadIrr {
                p,
                d: self.d.clone(),
                q,
            },
        )
    }

    /// `x > 1` and `0 < x̄ < 1`, decided with integer arithmetic.
    pub fn is_purely_periodic(&self) -> bool {
        self.floor() >= BigInt::from(1) && self.conjugate_floor().is_zero()
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        (p + d.sqrt()) / q
    }

    pub fn expand(&self) -> Result<CfExpansion> {
        self.expand_with_limit(DEFAULT_STEP_LIMIT)
    }

    /// Expands until a state `(P, Q)` repeats. States determine the value, so
    /// the first repetition delimits preperiod and period.
    pub fn expand_with_limit(&self, limit: usize) -> Result<CfExpansion> {
        let mut seen: HashMap<(Int, Int), usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut x = self.clone();
        loop {
            let key = (x.p.clone(), x.q.clone());
            if let Some(&start) = seen.get(&key) {
                let period = digits.split_off(start);
                return Ok(CfExpansion {
                    preperiod: digits,
                    period: primitive_block(period),
                });
            }
            if digits.len() >= limit {
                return Err(Error::PeriodBoundExceeded(limit));
            }
            seen.insert(key, digits.len());
            let (digit, next) = x.step();
            digits.push(digit);
            x = next;
        }
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + √{})/{}", self.p, self.d, self.q)
    }
}

/// `⌊(p ± √d)/q⌋` for non-square `d > 0`.
fn floor_surd(p: &Int, plus: bool, d: &Int, q: &Int) -> Int {
    if q.is_negative() {
        return floor_surd(&-p, !plus, d, &-q);
    }
    let s = isqrt(d).expect("radicand is positive");
    // √d lies strictly between s and s + 1.
    let numerator = if plus { p + &s } else { p - &s - 1 };
    numerator.div_floor(q)
}

/// Shortest block whose repetition gives `block`.
fn primitive_block(block: Vec<Int>) -> Vec<Int> {
    let n = block.len();
    for len in (1..=n).filter(|len| n.is_multiple_of(*len)) {
        if (len..n).all(|i| block[i] == block[i - len]) {
            let mut block = block;
            block.truncate(len);
            return block;
        }
    }
    block
}

/// Eventually periodic digit sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub preperiod: Vec<Int>,
    pub period: Vec<Int>,
}

/// `ω = (a - d + √(t² - 4)) / (2b)` for `A = [[a, b], [c, d]]` of trace `t`.
pub fn fixed_point(a: &IntMatrix2) -> Result<QuadIrr> {
    let t = a.trace();
    if t < BigInt::from(3) {
        return Err(Error::NotHyperbolic(t));
    }
    if a.b.is_zero() {
        return Err(Error::InvalidQuadIrr("upper-right entry is zero".into()));
    }
    QuadIrr::new(&a.a - &a.d, &t * &t - 4, &a.b * 2)
}
