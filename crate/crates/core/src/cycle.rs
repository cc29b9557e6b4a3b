//! Resolution cycles of cusps: conversion to and from monodromy matrices,
//! dual cycles and the complete-intersection test.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cfrac::fixed_point;
use crate::error::{Error, Result};
use crate::matrix::{trace_power_polynomial, IntMatrix2};
use crate::Int;

/// Largest dual cycle that [`Cycle::dual`] will materialize.
pub const MAX_DUAL_LEN: u64 = 10_000_000;

/// Bound on the multiplicity `n` in `trace(C^n) = trace(A)`.
const MAX_MULTIPLICITY: u32 = 64;

/// A resolution cycle `(b_1, ..., b_k)`, all `b_i ≥ 2` and some `b_i ≥ 3`,
/// stored as its lexicographically smallest rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    entries: Vec<u64>,
}

impl Cycle {
    /// Validates and canonicalizes.
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidCycle("empty cycle".into()));
        }
        if let Some(bad) = entries.iter().find(|&&b| b < 2) {
            return Err(Error::InvalidCycle(format!("entry {bad} is less than 2")));
        }
        if entries.iter().all(|&b| b == 2) {
            return Err(Error::InvalidCycle("every entry is 2".into()));
        }
        let start = least_rotation(&entries);
        let mut entries = entries;
        entries.rotate_left(start);
        Ok(Cycle { entries })
    }

    pub fn from_ints(entries: &[Int]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|b| {
                b.to_u64()
                    .ok_or_else(|| Error::InvalidCycle(format!("entry {b} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Cycle::new(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `M(b_k)·…·M(b_1)` with `M(b) = [[b, 1], [-1, 0]]`.
    pub fn monodromy(&self) -> IntMatrix2 {
        self.entries.iter().fold(IntMatrix2::identity(), |acc, &b| {
            &IntMatrix2::elementary(&BigInt::from(b)) * &acc
        })
    }

    /// `Σ (b_i - 2)`, the length of the dual cycle.
    pub fn dual_length(&self) -> Int {
        self.entries.iter().map(|&b| BigInt::from(b - 2)).sum()
    }

    /// Block swap: rotate to start at an entry `≥ 3`, read the cycle as
    /// `(m_1+3, 2^{n_1}, ..., m_s+3, 2^{n_s})`, and emit
    /// `(n_s+3, 2^{m_s}, ..., n_1+3, 2^{m_1})`.
    pub fn dual(&self) -> Result<Cycle> {
        let len = self.dual_length();
        if len > BigInt::from(MAX_DUAL_LEN) {
            return Err(Error::DualTooLong(len));
        }
        let start = self
            .entries
            .iter()
            .position(|&b| b >= 3)
            .expect("cycle has an entry of at least 3");
        let n = self.entries.len();
        let mut blocks: Vec<(u64, u64)> = Vec::new();
        for i in 0..n {
            let b = self.entries[(start + i) % n];
            if b >= 3 {
                blocks.push((b - 3, 0));
            } else {
                blocks.last_mut().expect("starts at a block head").1 += 1;
            }
        }
        let mut out = Vec::with_capacity(len.to_usize().unwrap_or(0));
        for &(m, twos) in blocks.iter().rev() {
            out.push(twos + 3);
            out.extend(std::iter::repeat_n(2, m as usize));
        }
        Cycle::new(out)
    }

    /// The cycle concatenated with itself `n` times.
    pub fn repeat(&self, n: usize) -> Cycle {
        Cycle::new(self.entries.repeat(n)).expect("repetition of a valid cycle")
    }

    /// Karras' criterion applied to the cusp or its dual: true when either
    /// cycle has length at most 4.
    pub fn is_ci_link(&self) -> bool {
        let four = BigInt::from(4);
        BigInt::from(self.len()) <= four || self.dual_length() <= four
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Cycle {
    type Err = Error;

    /// Parses `8,2,4,3,12`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidCycle(format!("cannot parse entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Cycle::new(entries)
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan).
fn least_rotation(s: &[u64]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Canonical cycle of a list of entries.
pub fn canonicalize(entries: &[u64]) -> Result<Cycle> {
    Cycle::new(entries.to_vec())
}

/// The resolution cycle of a hyperbolic monodromy.
///
/// Expands `ω = (a - d + √(t²-4))/(2b)` as a minus continued fraction, takes
/// the primitive period `(c_1, ..., c_l)` with matrix `C`, finds `n` with
/// `trace(C^n) = trace(A)`, and returns the period repeated `n` times.
pub fn cycle_of(a: &IntMatrix2) -> Result<Cycle> {
    a.check_hyperbolic()?;
    let t = a.trace();
    let expansion = fixed_point(a)?.expand()?;
    let period = Cycle::from_ints(&expansion.period)?;
    let base_trace = period.monodromy().trace();

    let mut n = None;
    for k in 1..=MAX_MULTIPLICITY {
        let tk = trace_power_polynomial(&base_trace, k);
        if tk == t {
            n = Some(k);
            break;
        }
        if tk > t {
            break;
        }
    }
    let n = n.ok_or(Error::TraceEquationUnsolved {
        trace: t.clone(),
        cap: MAX_MULTIPLICITY,
    })?;

    let cycle = period.repeat(n as usize);
    let actual = cycle.monodromy().trace();
    if actual != t {
        return Err(Error::CyclePostcondition {
            expected: t,
            actual,
        });
    }
    Ok(cycle)
}
