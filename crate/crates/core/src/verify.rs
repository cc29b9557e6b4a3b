//! End-to-end decision: does a cusp admit a Galois cover by a complete
//! intersection? Also the searches for admissible traces and reduced
//! monodromies of a given trace.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::is_prime;
use crate::cycle::{cycle_of, Cycle};
use crate::error::Result;
use crate::lattice::{enumerate_covers, CoverRecord, EnumerateOptions};
use crate::matrix::IntMatrix2;
use crate::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    HasCiCover,
    NoCiCover,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::HasCiCover => "HAS_CI_COVER",
            Verdict::NoCiCover => "NO_CI_COVER",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub monodromy: IntMatrix2,
    pub trace: Int,
    pub cycle: Cycle,
    pub dual_cycle: Cycle,
    pub covers: Vec<CoverRecord>,
    pub verdict: Verdict,
    /// Position in `covers` of the first record with a cycle or dual cycle
    /// of length at most 4.
    pub witness: Option<usize>,
}

impl Certificate {
    pub fn witness_record(&self) -> Option<&CoverRecord> {
        self.witness.map(|i| &self.covers[i])
    }
}

/// Enumerates every Galois cover up to base degree 4 and looks for one whose
/// cycle or dual cycle has length at most 4.
///
/// Covers of base degree 5 or more repeat a cycle at least five times, so
/// they never qualify. Because the cover set is closed under duals, testing
/// `min(len, dual_len) ≤ 4` is equivalent to testing the dual length alone.
pub fn verify(a: &IntMatrix2, opts: &EnumerateOptions) -> Result<Certificate> {
    a.check_hyperbolic()?;
    let cycle = cycle_of(a)?;
    let dual_cycle = cycle.dual()?;
    let covers = enumerate_covers(a, opts)?;
    let witness = covers.iter().position(CoverRecord::is_ci);
    let verdict = if witness.is_some() {
        Verdict::HasCiCover
    } else {
        Verdict::NoCiCover
    };
    Ok(Certificate {
        monodromy: a.clone(),
        trace: a.trace(),
        cycle,
        dual_cycle,
        covers,
        verdict,
        witness,
    })
}

pub fn verify_cycle(c: &Cycle, opts: &EnumerateOptions) -> Result<Certificate> {
    verify(&c.monodromy(), opts)
}

/// Traces `x ≤ limit` with `x` and `x - 2` prime, `x + 2 = 3r` and
/// `x + 1 = 2s` for primes `r`, `s`.
pub fn admissible_traces(limit: u64) -> Vec<u64> {
    let prime = |n: u64| is_prime(&BigInt::from(n));
    (3..=limit)
        .filter(|&x| {
            prime(x)
                && prime(x - 2)
                && (x + 2) % 3 == 0
                && prime(x.div_ceil(3))
                && (x + 1) % 2 == 0
                && prime(x.div_ceil(2))
        })
        .collect()
}

/// Up to `limit` matrices `[[a, b], [c, d]]` of determinant 1 and the given
/// trace with `a > b > -d ≥ 0`, ordered by `a` descending then `b` ascending.
///
/// Writing `j = b + d ∈ [1, t)`, the divisibility `b | ad - 1` becomes
/// `b | j(t - j) - 1`, so `b` ranges over divisors `≥ j` of that number.
pub fn candidate_matrices(trace: u64, limit: usize) -> Vec<IntMatrix2> {
    let t = trace as i128;
    let mut found: Vec<(i128, i128)> = Vec::new();
    for j in 1..t {
        let n = j * (t - j) - 1;
        if n <= 0 {
            continue;
        }
        let mut k = 1i128;
        while k * k <= n {
            if n % k == 0 {
                for b in [k, n / k] {
                    if b >= j {
                        found.push((t + b - j, b));
                    }
                }
            }
            k += 1;
        }
    }
    found.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    found.dedup();
    found
        .into_iter()
        .take(limit)
        .map(|(a, b)| {
            let d = t - a;
            let c = (a * d - 1) / b;
            IntMatrix2::new(a.into(), b.into(), c.into(), d.into())
        })
        .collect()
}
