//! Fiber lattices of normal Galois covers.
//!
//! A subgroup `L ⋊ nZ` of `Z² ⋊_A Z` is normal exactly when `AL = L` and
//! `(A^n - I)Z² ⊆ L`. This module enumerates those lattices for base degrees
//! 1 through 4 and turns each into a [`CoverRecord`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{factor, is_prime, merge_factorizations, solve_quadratic_congruence};
use crate::cycle::{cycle_of, Cycle};
use crate::error::{Error, Result};
use crate::matrix::{hermite_normal_form, index_formula, index_linear_factors, IntMatrix2};
use crate::Int;

/// Finite-index sublattice of `Z²`, stored by its Hermite basis
/// `[[x, y], [0, z]]` (columns `(x, 0)` and `(y, z)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice2 {
    basis: IntMatrix2,
}

impl Lattice2 {
    pub fn full() -> Self {
        Lattice2 {
            basis: IntMatrix2::identity(),
        }
    }

    /// `k·Z²`.
    pub fn scalar(k: &Int) -> Self {
        Lattice2 {
            basis: IntMatrix2::scalar(k.clone()),
        }
    }

    /// Lattice spanned by arbitrary generators (at least two independent).
    pub fn from_generators(generators: &[[Int; 2]]) -> Result<Self> {
        Ok(Lattice2 {
            basis: hermite_normal_form(generators)?,
        })
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_basis(m: &IntMatrix2) -> Result<Self> {
        Self::from_generators(&m.columns())
    }

    fn from_hnf(x: Int, y: Int, z: Int) -> Self {
        Lattice2 {
            basis: IntMatrix2::new(x, y, Int::zero(), z),
        }
    }

    pub fn basis(&self) -> &IntMatrix2 {
        &self.basis
    }

    pub fn x(&self) -> &Int {
        &self.basis.a
    }

    pub fn y(&self) -> &Int {
        &self.basis.b
    }

    pub fn z(&self) -> &Int {
        &self.basis.d
    }

    pub fn index(&self) -> Int {
        self.x() * self.z()
    }

    /// Sort key: index, then the Hermite entries.
    pub fn sort_key(&self) -> (Int, Int, Int, Int) {
        (
            self.index(),
            self.x().clone(),
            self.y().clone(),
            self.z().clone(),
        )
    }

    pub fn contains_vector(&self, v: &[Int; 2]) -> bool {
        if !v[1].is_multiple_of(self.z()) {
            return false;
        }
        let j = &v[1] / self.z();
        (&v[0] - self.y() * j).is_multiple_of(self.x())
    }

    /// Both columns of `m` lie in the lattice.
    pub fn contains(&self, m: &IntMatrix2) -> bool {
        m.columns().iter().all(|c| self.contains_vector(c))
    }

    pub fn contains_lattice(&self, other: &Lattice2) -> bool {
        self.contains(other.basis())
    }

    /// `A·L = L`, tested as integrality of `P⁻¹AP` for the basis `P`.
    pub fn is_invariant(&self, a: &IntMatrix2) -> bool {
        matches!(a.conjugate(&self.basis), Ok(Some(_)))
    }

    /// Matrix of `A` acting on `L`, in the Hermite basis.
    pub fn induced_action(&self, a: &IntMatrix2) -> Result<IntMatrix2> {
        a.conjugate(&self.basis)?.ok_or(Error::NotInvariant)
    }

    /// `M·L` for nonsingular `M`.
    pub fn image(&self, m: &IntMatrix2) -> Result<Lattice2> {
        Lattice2::from_basis(&(m * &self.basis))
    }

    /// `L ∩ L'` for lattices of coprime index, computed as `i'·L + i·L'`.
    pub fn intersect_coprime(&self, other: &Lattice2) -> Lattice2 {
        let (i, j) = (self.index(), other.index());
        debug_assert!(i.gcd(&j).is_one(), "indices must be coprime");
        let mut gens: Vec<[Int; 2]> = Vec::with_capacity(4);
        for c in self.basis.columns() {
            gens.push([&c[0] * &j, &c[1] * &j]);
        }
        for c in other.basis.columns() {
            gens.push([&c[0] * &i, &c[1] * &i]);
        }
        Lattice2::from_generators(&gens).expect("intersection has finite index")
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [0, {}]]", self.x(), self.y(), self.z())
    }
}

/// Every sublattice of index exactly `d`, in lexicographic `(x, y)` order.
/// There are `σ(d)` of them.
pub fn sublattices_of_index(d: u64) -> Vec<Lattice2> {
    let mut out = Vec::new();
    for x in (1..=d).filter(|x| d.is_multiple_of(*x)) {
        let z = d / x;
        for y in 0..x {
            out.push(Lattice2::from_hnf(x.into(), y.into(), z.into()));
        }
    }
    out
}

/// The `A`-invariant lattices of prime index `ℓ`.
///
/// `⟨(t,1),(ℓ,0)⟩` is invariant iff `c·t² + (d-a)·t - b ≡ 0 (mod ℓ)`, and
/// `⟨(1,0),(0,ℓ)⟩` iff `ℓ | c`. When `A` is scalar modulo `ℓ` all `ℓ + 1`
/// lattices qualify.
pub fn prime_index_invariant_lattices(a: &IntMatrix2, ell: &Int) -> Result<Vec<Lattice2>> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell.clone()));
    }
    let (a2, a1, a0) = (a.c.clone(), &a.d - &a.a, -&a.b);
    let degenerate = [&a2, &a1, &a0].iter().all(|v| v.is_multiple_of(ell));
    let roots: Vec<Int> = if degenerate {
        let count = ell
            .to_u64()
            .ok_or_else(|| Error::FactorizationTooHard(ell.clone()))?;
        (0..count).map(BigInt::from).collect()
    } else {
        solve_quadratic_congruence(&a2, &a1, &a0, ell)?
    };
    let mut out = Vec::with_capacity(roots.len() + 1);
    if a.c.is_multiple_of(ell) {
        out.push(Lattice2::from_hnf(Int::one(), Int::zero(), ell.clone()));
    }
    out.extend(
        roots
            .into_iter()
            .map(|t| Lattice2::from_hnf(ell.clone(), t, Int::one())),
    );
    Ok(out)
}

/// Prime factorization of `[Z² : (A^n - I)Z²]`, factoring the linear
/// factors of `P_n(x) - 2` separately.
fn index_factorization(trace: &Int, n: u32) -> Result<Vec<(Int, u32)>> {
    let linear = index_linear_factors(trace, n).ok_or(Error::DegreeOutOfRange(n))?;
    let parts = linear.iter().map(factor).collect::<Result<Vec<_>>>()?;
    Ok(merge_factorizations(&parts))
}

fn sort_lattices(lattices: &mut Vec<Lattice2>) {
    lattices.sort_by_key(Lattice2::sort_key);
    lattices.dedup();
}

/// Invariant lattices of `ℓ`-power index containing `floor` (a lattice of
/// index `ℓ^e`), built level by level.
///
/// An invariant lattice of index `ℓ^j` either has cyclic `ℓ`-torsion in
/// `Z²/L`, and then sits with index `ℓ` inside a unique invariant lattice of
/// index `ℓ^{j-1}`, or it is `ℓ·L''` for an invariant `L''` of index `ℓ^{j-2}`.
fn primary_invariant_lattices(
    a: &IntMatrix2,
    ell: &Int,
    exponent: u32,
    floor: &Lattice2,
) -> Result<Vec<Lattice2>> {
    let mut levels: Vec<Vec<Lattice2>> = vec![vec![Lattice2::full()]];
    for j in 1..=exponent as usize {
        let mut next = Vec::new();
        for parent in &levels[j - 1] {
            let action = parent.induced_action(a)?;
            for child in prime_index_invariant_lattices(&action, ell)? {
                let lattice = child.image(parent.basis())?;
                if lattice.contains_lattice(floor) {
                    next.push(lattice);
                }
            }
        }
        if j >= 2 {
            for inner in &levels[j - 2] {
                let lattice = inner.image(&IntMatrix2::scalar(ell.clone()))?;
                if lattice.contains_lattice(floor) {
                    next.push(lattice);
                }
            }
        }
        sort_lattices(&mut next);
        levels.push(next);
    }
    Ok(levels.into_iter().flatten().collect())
}

/// All `A`-invariant lattices `L` with `(A^n - I)Z² ⊆ L ⊆ Z²`, sorted by
/// index and then Hermite entries.
///
/// The quotient `Z²/(A^n - I)Z²` is split into primary parts; invariant
/// subgroups of each part are enumerated separately and recombined by
/// intersecting lattices of coprime index.
pub fn invariant_sublattices_between(a: &IntMatrix2, n: u32) -> Result<Vec<Lattice2>> {
    a.check_hyperbolic()?;
    if !(1..=4).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let kernel = a.power(n).minus_identity();
    let kernel_lattice = Lattice2::from_basis(&kernel)?;
    debug_assert_eq!(kernel_lattice.index(), index_formula(&a.trace(), n)?);

    let mut combined = vec![Lattice2::full()];
    for (ell, e) in index_factorization(&a.trace(), n)? {
        let pe = num_traits::pow(ell.clone(), e as usize);
        let mut gens = kernel.columns().to_vec();
        gens.push([pe.clone(), Int::zero()]);
        gens.push([Int::zero(), pe]);
        let floor = Lattice2::from_generators(&gens)?;
        let part = primary_invariant_lattices(a, &ell, e, &floor)?;
        combined = combined
            .iter()
            .flat_map(|l| part.iter().map(move |m| l.intersect_coprime(m)))
            .collect();
    }
    sort_lattices(&mut combined);
    Ok(combined)
}

/// `P⁻¹AP` for the Hermite basis `P` of an invariant lattice.
pub fn induced_action(lattice: &Lattice2, a: &IntMatrix2) -> Result<IntMatrix2> {
    lattice.induced_action(a)
}

/// One Galois cover: a base covering of degree `n` followed by the fiber
/// covering with lattice `fiber`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRecord {
    pub base_degree: u32,
    pub fiber: Lattice2,
    /// Action of the base generator on the fiber.
    pub induced: IntMatrix2,
    /// `induced^base_degree`, the monodromy of the covering link.
    pub cover_monodromy: IntMatrix2,
    pub cycle: Cycle,
    pub dual: Cycle,
}

impl CoverRecord {
    pub fn new(a: &IntMatrix2, base_degree: u32, fiber: Lattice2) -> Result<Self> {
        let induced = fiber.induced_action(a)?;
        let cover_monodromy = induced.power(base_degree);
        let cycle = cycle_of(&cover_monodromy)?;
        let dual = cycle.dual()?;
        Ok(CoverRecord {
            base_degree,
            fiber,
            induced,
            cover_monodromy,
            cycle,
            dual,
        })
    }

    pub fn fiber_index(&self) -> Int {
        self.fiber.index()
    }

    /// Shorter of the cycle and dual cycle lengths.
    pub fn min_length(&self) -> usize {
        self.cycle.len().min(self.dual.len())
    }

    pub fn is_ci(&self) -> bool {
        self.min_length() <= 4
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_degree: u32,
    /// Keep only fibers of index `i` with `i² ≤ [Z² : (A^n - I)Z²]`; the
    /// remaining covers are duals of these.
    pub half: bool,
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_degree: 4,
            half: false,
            parallel: false,
        }
    }
}

/// Every normal Galois cover of base degree `1..=max_degree`, ordered by
/// degree, fiber index and Hermite entries.
pub fn enumerate_covers(a: &IntMatrix2, opts: &EnumerateOptions) -> Result<Vec<CoverRecord>> {
    a.check_hyperbolic()?;
    if !(1..=4).contains(&opts.max_degree) {
        return Err(Error::DegreeOutOfRange(opts.max_degree));
    }
    let mut tasks: Vec<(u32, Lattice2)> = Vec::new();
    for n in 1..=opts.max_degree {
        let total = index_formula(&a.trace(), n)?;
        for lattice in invariant_sublattices_between(a, n)? {
            let idx = lattice.index();
            if opts.half && &idx * &idx > total {
                continue;
            }
            tasks.push((n, lattice));
        }
    }
    let build = |(n, lattice): &(u32, Lattice2)| CoverRecord::new(a, *n, lattice.clone());
    if opts.parallel {
        tasks.par_iter().map(build).collect()
    } else {
        tasks.iter().map(build).collect()
    }
}
