//! 2×2 integer matrices: products, powers, inverses, conjugation, the trace
//! recurrence for powers, and Hermite/Smith normal forms.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Int;

/// Row-major matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl IntMatrix2 {
    pub fn new(a: Int, b: Int, c: Int, d: Int) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// `[[x, 0], [0, x]]`.
    pub fn scalar(x: Int) -> Self {
        Self::new(x.clone(), Int::zero(), Int::zero(), x)
    }

    /// The elementary plumbing factor `[[b, 1], [-1, 0]]`.
    pub fn elementary(b: &Int) -> Self {
        Self::new(b.clone(), Int::one(), -Int::one(), Int::zero())
    }

    /// Matrix whose columns are `u` and `v`.
    pub fn from_columns(u: [Int; 2], v: [Int; 2]) -> Self {
        let [a, c] = u;
        let [b, d] = v;
        Self::new(a, b, c, d)
    }

    pub fn columns(&self) -> [[Int; 2]; 2] {
        [
            [self.a.clone(), self.c.clone()],
            [self.b.clone(), self.d.clone()],
        ]
    }

    pub fn entries(&self) -> [&Int; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Int {
        &self.a + &self.d
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    /// `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn apply(&self, v: &[Int; 2]) -> [Int; 2] {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    pub fn minus_identity(&self) -> Self {
        Self::new(&self.a - 1, self.b.clone(), self.c.clone(), &self.d - 1)
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    /// `self^n` by binary exponentiation; `self^0 = I`.
    pub fn power(&self, n: u32) -> Self {
        let mut result = Self::identity();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer inverse; requires `|det| = 1`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_one() {
            Ok(self.adjugate())
        } else if (-&det).is_one() {
            Ok(self.adjugate().scale(&-Int::one()))
        } else {
            Err(Error::NonUnitDeterminant(det))
        }
    }

    /// `P⁻¹·self·P` when it has integer entries, `None` otherwise.
    pub fn conjugate(&self, p: &IntMatrix2) -> Result<Option<IntMatrix2>> {
        let det = p.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let n = &(&p.adjugate() * self) * p;
        if n.entries().iter().all(|e| e.is_multiple_of(&det)) {
            Ok(Some(Self::new(
                &n.a / &det,
                &n.b / &det,
                &n.c / &det,
                &n.d / &det,
            )))
        } else {
            Ok(None)
        }
    }

    /// Checks `det = 1` and `trace ≥ 3`.
    pub fn check_hyperbolic(&self) -> Result<()> {
        let det = self.det();
        if !det.is_one() {
            return Err(Error::NotSpecialLinear(det));
        }
        let t = self.trace();
        if t < BigInt::from(3) {
            return Err(Error::NotHyperbolic(t));
        }
        Ok(())
    }
}

impl Mul for &IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, y: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            &self.a * &y.a + &self.b * &y.c,
            &self.a * &y.b + &self.b * &y.d,
            &self.c * &y.a + &self.d * &y.c,
            &self.c * &y.b + &self.d * &y.d,
        )
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;

    fn mul(self, y: IntMatrix2) -> IntMatrix2 {
        &self * &y
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `P_n(x)`: the trace of `A^n` for any determinant-one `A` of trace `x`.
///
/// `P_0 = 2`, `P_1 = x`, `P_{n+1} = x·P_n - P_{n-1}`.
pub fn trace_power_polynomial(x: &Int, n: u32) -> Int {
    let mut prev = BigInt::from(2);
    if n == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..n {
        let next = x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `[Z² : (A^n - I)Z²] = |2 - P_n(x)|` for a monodromy of trace `x ≥ 3`.
pub fn index_formula(x: &Int, n: u32) -> Result<Int> {
    if x < &BigInt::from(3) {
        return Err(Error::NotHyperbolic(x.clone()));
    }
    Ok((BigInt::from(2) - trace_power_polynomial(x, n)).abs())
}

/// Linear factors whose product is `index_formula(x, n)` for `n ∈ 1..=4`:
/// `x-2`; `(x-2)(x+2)`; `(x-2)(x+1)²`; `x²(x-2)(x+2)`.
pub fn index_linear_factors(x: &Int, n: u32) -> Option<Vec<Int>> {
    let f = |k: i64| x + k;
    match n {
        1 => Some(vec![f(-2)]),
        2 => Some(vec![f(-2), f(2)]),
        3 => Some(vec![f(-2), f(1), f(1)]),
        4 => Some(vec![f(0), f(0), f(-2), f(2)]),
        _ => None,
    }
}

/// Hermite normal form `[[x, y], [0, z]]` of the lattice spanned by the given
/// column vectors: `x > 0`, `z > 0`, `0 ≤ y < x`. The columns of the result
/// are `(x, 0)` and `(y, z)`.
pub fn hermite_normal_form(generators: &[[Int; 2]]) -> Result<IntMatrix2> {
    let mut pivot: Option<[Int; 2]> = None;
    let mut horizontal = Int::zero();
    for v in generators {
        if v[1].is_zero() {
            horizontal = horizontal.gcd(&v[0]);
            continue;
        }
        let Some(p) = pivot.take() else {
            pivot = Some(v.clone());
            continue;
        };
        let e = p[1].extended_gcd(&v[1]);
        let (mut g, mut u, mut w) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            u = -u;
            w = -w;
        }
        let kernel_x = (&v[1] / &g) * &p[0] - (&p[1] / &g) * &v[0];
        horizontal = horizontal.gcd(&kernel_x);
        pivot = Some([&u * &p[0] + &w * &v[0], g]);
    }
    let (Some(mut p), false) = (pivot, horizontal.is_zero()) else {
        return Err(Error::DependentColumns);
    };
    if p[1].is_negative() {
        p = [-&p[0], -&p[1]];
    }
    let x = horizontal;
    let y = p[0].mod_floor(&x);
    Ok(IntMatrix2::new(x, y, Int::zero(), p[1].clone()))
}

/// Smith normal form `U·M·V = diag(d1, d2)` with `d1 | d2`, `d1, d2 > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub d1: Int,
    pub d2: Int,
    pub u: IntMatrix2,
    pub v: IntMatrix2,
}

pub fn smith_normal_form(m: &IntMatrix2) -> Result<Smith> {
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    let mut s = [[m.a.clone(), m.b.clone()], [m.c.clone(), m.d.clone()]];
    let mut u = [[Int::one(), Int::zero()], [Int::zero(), Int::one()]];
    let mut v = [[Int::one(), Int::zero()], [Int::zero(), Int::one()]];

    loop {
        // Move the smallest nonzero entry to (0, 0).
        let (mut bi, mut bj) = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                let e = &s[i][j];
                if !e.is_zero() && (s[bi][bj].is_zero() || e.abs() < s[bi][bj].abs()) {
                    (bi, bj) = (i, j);
                }
            }
        }
        if bi == 1 {
            s.swap(0, 1);
            u.swap(0, 1);
        }
        if bj == 1 {
            for row in s.iter_mut().chain(v.iter_mut()) {
                row.swap(0, 1);
            }
        }

        // Clear column 0 below the pivot with a row operation.
        let q = s[1][0].div_floor(&s[0][0]);
        for k in 0..2 {
            let t = &q * &s[0][k];
            s[1][k] -= t;
            let t = &q * &u[0][k];
            u[1][k] -= t;
        }
        // Clear row 0 right of the pivot with a column operation.
        let q = s[0][1].div_floor(&s[0][0]);
        for row in s.iter_mut().chain(v.iter_mut()) {
            let t = &q * &row[0];
            row[1] -= t;
        }
        if !s[1][0].is_zero() || !s[0][1].is_zero() {
            continue;
        }
        if !s[1][1].is_multiple_of(&s[0][0]) {
            // Fold row 1 into row 0 so the next pass takes a gcd.
            for k in 0..2 {
                let t = s[1][k].clone();
                s[0][k] += t;
                let t = u[1][k].clone();
                u[0][k] += t;
            }
            continue;
        }
        break;
    }
    for i in 0..2 {
        if s[i][i].is_negative() {
            for k in 0..2 {
                s[i][k] = -&s[i][k];
                u[i][k] = -&u[i][k];
            }
        }
    }
    let [[u00, u01], [u10, u11]] = u;
    let [[v00, v01], [v10, v11]] = v;
    let [[d1, _], [_, d2]] = s;
    Ok(Smith {
        d1,
        d2,
        u: IntMatrix2::new(u00, u01, u10, u11),
        v: IntMatrix2::new(v00, v01, v10, v11),
    })
}
