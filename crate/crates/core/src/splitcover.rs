//! Split sets, exact cover decisions, and cover-based lower bounds.
//!
//! A g-split is the open slab `{β < α·x < β+1}` with integer `α`; it is a
//! split set when `β` is an integer. Whether a region `outer \ inner` is
//! covered by a union of open g-splits is decided exactly through closed
//! side-selections: a point avoids every slab iff for each slab it lies in
//! the closed lower side `{α·x ≤ β}` or the closed upper side
//! `{α·x ≥ β+1}`, so the uncovered set is the union over all side
//! selections of `outer ∩ sides`, and coverage holds iff each such
//! intersection is contained in `inner` (checked row-wise by exact LP).
//! A failed containment yields an exact rational witness: a point of the
//! region outside every slab.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coordinate_bounds, Halfspace, Polyhedron};
use crate::lp::{self, extract_dominance, DominanceOutcome};
use crate::rational::{RVec, Rational};

/// The open slab `{β < α·x < β+1}` for coprime integer `α ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSplit {
    pub alpha: RVec,
    pub beta: Rational,
}

impl GSplit {
    pub fn new(alpha: RVec, beta: Rational) -> Result<Self> {
        let mut gcd = BigInt::zero();
        for e in alpha.iter() {
            if !e.is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "g-split normal entry {e} is not an integer"
                )));
            }
            gcd = gcd.gcd(e.numer());
        }
        if gcd.is_zero() {
            return Err(Error::ZeroNormal);
        }
        if gcd != BigInt::from(1) {
            return Err(Error::InvalidArgument(format!(
                "g-split normal is not coprime (gcd {gcd})"
            )));
        }
        Ok(GSplit { alpha, beta })
    }

    pub fn axis(dim: usize, index: usize, beta: impl Into<Rational>) -> Self {
        GSplit { alpha: RVec::unit(dim, index), beta: beta.into() }
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    /// True when `β ∈ ℤ`, i.e. the slab is a split set proper.
    pub fn is_split_set(&self) -> bool {
        self.beta.is_integer()
    }

    /// Strict membership in the open slab.
    pub fn contains_open(&self, point: &RVec) -> bool {
        let v = self.alpha.dot(point);
        v > self.beta && v < &self.beta + &Rational::one()
    }

    /// Closed lower side `{α·x ≤ β}`.
    pub fn lower_side(&self) -> Halfspace {
        Halfspace::new(self.alpha.clone(), self.beta.clone())
    }

    /// Closed upper side `{α·x ≥ β+1}` in `≤` orientation.
    pub fn upper_side(&self) -> Halfspace {
        Halfspace::new(self.alpha.neg(), -(&self.beta + &Rational::one()))
    }
}

/// The set difference `outer \ inner`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub outer: Polyhedron,
    pub inner: Polyhedron,
}

impl Region {
    pub fn new(outer: Polyhedron, inner: Polyhedron) -> Result<Self> {
        if outer.dim != inner.dim {
            return Err(Error::DimensionMismatch { expected: outer.dim, got: inner.dim });
        }
        Ok(Region { outer, inner })
    }

    /// `outer` with nothing removed.
    pub fn whole(outer: Polyhedron) -> Self {
        let inner = Polyhedron::empty(outer.dim);
        Region { outer, inner }
    }

    pub fn dim(&self) -> usize {
        self.outer.dim
    }

    pub fn contains(&self, point: &RVec) -> bool {
        self.outer.contains(point) && !self.inner.contains(point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    Covered,
    /// A point of the region outside every slab.
    Witness(RVec),
}

fn validate_splits(dim: usize, splits: &[GSplit]) -> Result<()> {
    for s in splits {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: s.dim() });
        }
    }
    Ok(())
}

/// Decides whether `region ⊆ ∪ splits` (open slabs), exactly. `outer` must
/// be bounded.
///
/// The side selections are explored as a binary tree over the splits, left
/// (lower) side first; a prefix whose cell is already empty prunes its
/// whole subtree, which keeps the enumeration far below `2^k` in practice.
/// The two sides of each split are examined in parallel, but the lower
/// side's outcome takes precedence, so the returned witness is independent
/// of scheduling.
pub fn covers(region: &Region, splits: &[GSplit]) -> Result<CoverOutcome> {
    validate_splits(region.dim(), splits)?;
    if coordinate_bounds(&region.outer)?.is_none() {
        return Ok(CoverOutcome::Covered);
    }
    Ok(match uncovered_point(region, splits, &region.outer)? {
        Some(witness) => CoverOutcome::Witness(witness),
        None => CoverOutcome::Covered,
    })
}

/// A point of `cell \ inner` on closed sides of all remaining splits.
fn uncovered_point(
    region: &Region,
    splits: &[GSplit],
    cell: &Polyhedron,
) -> Result<Option<RVec>> {
    if lp::is_empty(cell)? {
        return Ok(None);
    }
    let Some((split, rest)) = splits.split_first() else {
        for row in &region.inner.rows {
            match extract_dominance(cell, &row.normal, &row.rhs)? {
                DominanceOutcome::Dominated(_) => continue,
                DominanceOutcome::Violated(x) => {
                    debug_assert!(region.contains(&x));
                    return Ok(Some(x));
                }
            }
        }
        return Ok(None);
    };
    let lower = cell.intersect_halfspace(&split.lower_side());
    let upper = cell.intersect_halfspace(&split.upper_side());
    let (a, b) = rayon::join(
        || uncovered_point(region, rest, &lower),
        || uncovered_point(region, rest, &upper),
    );
    match a? {
        Some(w) => Ok(Some(w)),
        None => b,
    }
}

/// Like [`covers`] but against the closures `{β ≤ α·x ≤ β+1}` of the slabs.
/// Avoiding a closed slab is the strict condition `α·x < β ∨ α·x > β+1`, so
/// each side selection asks for a point strictly inside a system of open
/// halfspaces; that is decided exactly by maximizing a slack variable.
/// Subtrees are pruned through the closed relaxation of the strict sides.
pub fn covers_closure(region: &Region, splits: &[GSplit]) -> Result<CoverOutcome> {
    validate_splits(region.dim(), splits)?;
    if coordinate_bounds(&region.outer)?.is_none() {
        return Ok(CoverOutcome::Covered);
    }
    Ok(match strictly_uncovered_point(region, splits, &[])? {
        Some(witness) => CoverOutcome::Witness(witness),
        None => CoverOutcome::Covered,
    })
}

fn strictly_uncovered_point(
    region: &Region,
    splits: &[GSplit],
    strict_sides: &[Halfspace],
) -> Result<Option<RVec>> {
    // Prune through the closed relaxation: if even the closure of the cell
    // is empty, no strict point exists below this prefix.
    if lp::is_empty(&region.outer.with_rows(strict_sides))? {
        return Ok(None);
    }
    let Some((split, rest)) = splits.split_first() else {
        return strict_cell_witness(region, strict_sides);
    };
    let mut lower = strict_sides.to_vec();
    lower.push(strict_lower_side(split));
    let mut upper = strict_sides.to_vec();
    upper.push(strict_upper_side(split));
    let (a, b) = rayon::join(
        || strictly_uncovered_point(region, rest, &lower),
        || strictly_uncovered_point(region, rest, &upper),
    );
    match a? {
        Some(w) => Ok(Some(w)),
        None => b,
    }
}

/// `{α·x < β}` represented by its boundary halfspace; strictness is
/// enforced by the slack lift in [`strict_cell_witness`].
fn strict_lower_side(split: &GSplit) -> Halfspace {
    Halfspace::new(split.alpha.clone(), split.beta.clone())
}

fn strict_upper_side(split: &GSplit) -> Halfspace {
    Halfspace::new(split.alpha.neg(), -(&split.beta + &Rational::one()))
}

/// Witness for: outer (closed) ∧ all `strict_sides` strict ∧ strictly
/// outside some inner row. Lifts to dimension n+1 with a slack variable
/// `t ≤ 1`, turning every strict row `a·x < b` into `a·x + t ≤ b`; a
/// positive optimum of `max t` yields a strictly feasible point.
fn strict_cell_witness(
    region: &Region,
    strict_sides: &[Halfspace],
) -> Result<Option<RVec>> {
    let n = region.dim();
    let lift_closed = |h: &Halfspace| {
        let mut e: Vec<Rational> = h.normal.entries().to_vec();
        e.push(Rational::zero());
        Halfspace::new(RVec::new(e), h.rhs.clone())
    };
    let lift_strict = |h: &Halfspace| {
        let mut e: Vec<Rational> = h.normal.entries().to_vec();
        e.push(Rational::one());
        Halfspace::new(RVec::new(e), h.rhs.clone())
    };

    let mut rows: Vec<Halfspace> = region.outer.rows.iter().map(lift_closed).collect();
    for h in strict_sides {
        rows.push(lift_strict(h));
    }
    // t ≤ 1 keeps the lifted program bounded.
    let mut t_cap = vec![Rational::zero(); n];
    t_cap.push(Rational::one());
    rows.push(Halfspace::new(RVec::new(t_cap), Rational::one()));
    let base_len = rows.len();

    for row in &region.inner.rows {
        let mut rows = rows.clone();
        rows.truncate(base_len);
        // strictly violate the inner row: −a·x + t ≤ −b
        rows.push(lift_strict(&Halfspace::new(row.normal.neg(), -row.rhs.clone())));
        let lifted = Polyhedron::new(n + 1, rows)?;
        let mut objective = vec![Rational::zero(); n];
        objective.push(Rational::one());
        let res = lp::lp_solve(&lifted, &RVec::new(objective), lp::Direction::Max)?;
        if res.status == lp::Status::Optimal && res.value.as_ref().unwrap().is_positive() {
            let point = res.primal.unwrap();
            let witness = RVec::new(point.entries()[..n].to_vec());
            debug_assert!(region.contains(&witness));
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Smallest subset of `family` covering the region, by subset enumeration
/// in increasing cardinality; `None` when even the full family fails.
/// Witness points from failed attempts prune later candidates.
pub fn min_split_cover(region: &Region, family: &[GSplit]) -> Result<Option<usize>> {
    validate_splits(region.dim(), family)?;
    match covers(region, &[])? {
        CoverOutcome::Covered => return Ok(Some(0)),
        CoverOutcome::Witness(w) => {
            let mut witnesses = vec![w];
            match covers(region, family)? {
                CoverOutcome::Witness(_) => return Ok(None),
                CoverOutcome::Covered => {}
            }
            for k in 1..=family.len() {
                if let Some(size) = try_subsets(region, family, k, &mut witnesses)? {
                    return Ok(Some(size));
                }
            }
            // The full family covers, so the loop must have returned.
            unreachable!("full family covers but no subset was found")
        }
    }
}

fn try_subsets(
    region: &Region,
    family: &[GSplit],
    k: usize,
    witnesses: &mut Vec<RVec>,
) -> Result<Option<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let subset: Vec<GSplit> = idx.iter().map(|&i| family[i].clone()).collect();
        let plausible = witnesses
            .iter()
            .all(|w| subset.iter().any(|s| s.contains_open(w)));
        if plausible {
            match covers(region, &subset)? {
                CoverOutcome::Covered => return Ok(Some(k)),
                CoverOutcome::Witness(w) => witnesses.push(w),
            }
        }
        // next k-combination
        let m = family.len();
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return Ok(None);
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The hull-complexity lower bound implied by a split cover number `ℓ`:
/// every split used costs at least two nodes and the root is extra.
pub fn hull_lb_from_cover(ell: u64) -> u64 {
    2 * ell + 1
}
