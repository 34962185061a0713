//! Rational halfspaces, polyhedra, and lattice-point utilities.
//!
//! All halfspaces are stored in `a·x ≤ b` orientation; `≥` constraints are
//! negated at the boundary. Row order inside a [`Polyhedron`] is significant
//! because certificate multipliers index rows by position.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp;
use crate::rational::{RVec, Rational};

/// Fixes the ambient dimension of the integer lattice ℤⁿ ⊆ ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingContext {
    pub dim: usize,
}

impl EmbeddingContext {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(EmbeddingContext { dim })
    }
}

/// A closed halfspace `normal·x ≤ rhs`.
///
/// A zero normal is permitted and flagged trivial: `0·x ≤ b` is all of ℝⁿ
/// when `b ≥ 0` and the empty set when `b < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(rename = "a")]
    pub normal: RVec,
    #[serde(rename = "b")]
    pub rhs: Rational,
}

impl Halfspace {
    pub fn new(normal: RVec, rhs: Rational) -> Self {
        Halfspace { normal, rhs }
    }

    /// `coeffs·x ≤ rhs` from integer data.
    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Halfspace::new(RVec::from_ints(coeffs), Rational::from_int(rhs))
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.normal.is_zero()
    }

    pub fn contains(&self, point: &RVec) -> bool {
        self.normal.dot(point) <= self.rhs
    }

    /// `rhs − normal·point`; nonnegative iff the point satisfies the row.
    pub fn slack(&self, point: &RVec) -> Rational {
        &self.rhs - &self.normal.dot(point)
    }

    /// Scales the row so the normal has coprime integer entries, preserving
    /// orientation (the sign of the first nonzero entry is kept as given).
    pub fn coprime_normalize(&self) -> Result<Halfspace> {
        if self.is_trivial() {
            return Err(Error::ZeroNormal);
        }
        // Clear denominators by their lcm, then divide by the gcd of the
        // resulting integers.
        let mut lcm = BigInt::one();
        for e in self.normal.iter() {
            lcm = lcm.lcm(e.denom());
        }
        let ints: Vec<BigInt> = self
            .normal
            .iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        let scale = Rational::new(lcm, gcd.clone()).expect("gcd of nonzero vector is nonzero");
        Ok(Halfspace::new(
            RVec::new(ints.iter().map(|v| Rational::from_int(v / &gcd)).collect()),
            &self.rhs * &scale,
        ))
    }
}

/// A finite intersection of closed halfspaces in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub rows: Vec<Halfspace>,
}

impl Polyhedron {
    pub fn new(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        for row in &rows {
            if row.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.dim(),
                });
            }
        }
        Ok(Polyhedron { dim, rows })
    }

    /// The whole space: no rows.
    pub fn whole(dim: usize) -> Self {
        Polyhedron { dim, rows: Vec::new() }
    }

    /// Canonically empty: the single row `0·x ≤ −1`.
    pub fn empty(dim: usize) -> Self {
        Polyhedron {
            dim,
            rows: vec![Halfspace::new(RVec::zero(dim), Rational::from_int(-1))],
        }
    }

    /// An axis-aligned box `lo ≤ xᵢ ≤ hi` with the row order
    /// `x₁ ≤ hi, −x₁ ≤ −lo, x₂ ≤ hi, …`.
    pub fn bounding_box(dim: usize, lo: Rational, hi: Rational) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            rows.push(Halfspace::new(RVec::unit(dim, i), hi.clone()));
            rows.push(Halfspace::new(RVec::unit(dim, i).neg(), -lo.clone()));
        }
        Polyhedron { dim, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, point: &RVec) -> bool {
        self.rows.iter().all(|row| row.contains(point))
    }

    /// A new polyhedron with `extra` rows appended after the existing ones.
    pub fn with_rows(&self, extra: &[Halfspace]) -> Polyhedron {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(extra);
        Polyhedron { dim: self.dim, rows }
    }

    pub fn intersect_halfspace(&self, h: &Halfspace) -> Polyhedron {
        self.with_rows(std::slice::from_ref(h))
    }
}

/// The integer-tightened complement of `H = {a·x ≤ b}`: the closed halfspace
/// `a·x ≥ ⌊b⌋+1` (returned in `≤` orientation) over the coprime-integer
/// normalization of `a`. Every lattice point violating `H` satisfies the
/// result, so `P ∩ result = ∅` certifies that no lattice point of `P`
/// violates `H`.
pub fn tighten_complement(h: &Halfspace, _ctx: &EmbeddingContext) -> Result<Halfspace> {
    let norm = h.coprime_normalize().map_err(|_| Error::TrivialHalfspace)?;
    let tightened_rhs = Rational::from_int(norm.rhs.floor_int() + 1);
    Ok(Halfspace::new(norm.normal.neg(), -tightened_rhs))
}

fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next k-combination of {0,…,m−1}.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact bounds `[min xᵢ, max xᵢ]` per coordinate. `Ok(None)` for an empty
/// polyhedron; `Err(Unbounded)` when any coordinate is unbounded.
pub fn coordinate_bounds(p: &Polyhedron) -> Result<Option<Vec<(Rational, Rational)>>> {
    let mut bounds = Vec::with_capacity(p.dim);
    for i in 0..p.dim {
        let obj = RVec::unit(p.dim, i);
        let max = lp::lp_solve(p, &obj, lp::Direction::Max)?;
        let min = lp::lp_solve(p, &obj, lp::Direction::Min)?;
        match (min.status, max.status) {
            (lp::Status::Infeasible, _) | (_, lp::Status::Infeasible) => return Ok(None),
            (lp::Status::Unbounded, _) | (_, lp::Status::Unbounded) => {
                return Err(Error::Unbounded)
            }
            _ => bounds.push((min.value.unwrap(), max.value.unwrap())),
        }
    }
    Ok(Some(bounds))
}

/// All vertices of a bounded polyhedron, sorted lexicographically, without
/// duplicates. Empty input yields an empty list; an unbounded polyhedron is
/// an error.
pub fn vertices(p: &Polyhedron) -> Result<Vec<RVec>> {
    if coordinate_bounds(p)?.is_none() {
        return Ok(Vec::new());
    }
    let n = p.dim;
    let mut found: Vec<RVec> = Vec::new();
    for_each_combination(p.num_rows(), n, |idx| {
        let a: Vec<RVec> = idx.iter().map(|&i| p.rows[i].normal.clone()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| p.rows[i].rhs.clone()).collect();
        if let Some(x) = linalg::solve_square(&a, &b) {
            if p.contains(&x) && !found.contains(&x) {
                found.push(x);
            }
        }
    });
    found.sort_by(|a, b| a.entries().cmp(b.entries()));
    Ok(found)
}

/// Exhaustive enumeration of `ℤⁿ ∩ P` for bounded `P`, by scanning the
/// integer bounding box and filtering by row satisfaction. Sorted
/// lexicographically.
pub fn lattice_points(p: &Polyhedron) -> Result<Vec<RVec>> {
    let Some(bounds) = coordinate_bounds(p)? else {
        return Ok(Vec::new());
    };
    let ranges: Vec<(BigInt, BigInt)> = bounds
        .iter()
        .map(|(lo, hi)| (lo.ceil_int(), hi.floor_int()))
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current = vec![BigInt::zero(); p.dim];
    scan(&ranges, 0, &mut current, &mut |coords| {
        let point = RVec::new(coords.iter().map(|c| Rational::from_int(c.clone())).collect());
        if p.contains(&point) {
            out.push(point);
        }
    });
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    Ok(out)
}

fn scan(
    ranges: &[(BigInt, BigInt)],
    depth: usize,
    current: &mut Vec<BigInt>,
    f: &mut impl FnMut(&[BigInt]),
) {
    if depth == ranges.len() {
        f(current);
        return;
    }
    let (lo, hi) = &ranges[depth];
    let mut v = lo.clone();
    while &v <= hi {
        current[depth] = v.clone();
        scan(ranges, depth + 1, current, f);
        v += 1;
    }
}
