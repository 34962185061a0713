//! Leaf-level certificate checkers.
//!
//! A certificate here is a sparse list of nonnegative row multipliers. The
//! checkers verify the defining algebraic identities by direct substitution
//! and report the number of elementary rational operations performed, so the
//! polynomial-time checking contract is observable as an operation count.

use serde::{Deserialize, Serialize};

use crate::geometry::{Halfspace, Polyhedron};
use crate::rational::{RVec, Rational};

/// Sparse multipliers: (row index, value) pairs with distinct in-range
/// indices and strictly positive values (zeros are omitted).
pub type Multipliers = Vec<(usize, Rational)>;

/// Nonnegative multipliers `u` with `Σ uᵢ aᵢ = 0` and `Σ uᵢ bᵢ < 0`,
/// certifying that the rows `aᵢ·x ≤ bᵢ` have empty intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FarkasWire", into = "FarkasWire")]
pub struct FarkasCert {
    pub multipliers: Multipliers,
}

/// Multipliers proving the valid lower bound `objective·x ≥ bound` over the
/// rows of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BoundWire", into = "BoundWire")]
pub struct BoundCert {
    pub objective: RVec,
    pub bound: Rational,
    pub multipliers: Multipliers,
}

/// Multipliers proving that a target inequality `a·x ≤ b` is implied by the
/// rows of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DominanceWire", into = "DominanceWire")]
pub struct DominanceCert {
    pub target: Halfspace,
    pub multipliers: Multipliers,
}

#[derive(Serialize, Deserialize)]
struct FarkasWire {
    kind: String,
    multipliers: Multipliers,
}

#[derive(Serialize, Deserialize)]
struct BoundWire {
    kind: String,
    objective: RVec,
    bound: Rational,
    multipliers: Multipliers,
}

#[derive(Serialize, Deserialize)]
struct DominanceWire {
    kind: String,
    target: Halfspace,
    multipliers: Multipliers,
}

impl From<FarkasCert> for FarkasWire {
    fn from(c: FarkasCert) -> Self {
        FarkasWire { kind: "farkas".into(), multipliers: c.multipliers }
    }
}

impl TryFrom<FarkasWire> for FarkasCert {
    type Error = String;
    fn try_from(w: FarkasWire) -> Result<Self, String> {
        if w.kind != "farkas" {
            return Err(format!("expected kind \"farkas\", got {:?}", w.kind));
        }
        Ok(FarkasCert { multipliers: w.multipliers })
    }
}

impl From<BoundCert> for BoundWire {
    fn from(c: BoundCert) -> Self {
        BoundWire {
            kind: "bound".into(),
            objective: c.objective,
            bound: c.bound,
            multipliers: c.multipliers,
        }
    }
}

impl TryFrom<BoundWire> for BoundCert {
    type Error = String;
    fn try_from(w: BoundWire) -> Result<Self, String> {
        if w.kind != "bound" {
            return Err(format!("expected kind \"bound\", got {:?}", w.kind));
        }
        Ok(BoundCert { objective: w.objective, bound: w.bound, multipliers: w.multipliers })
    }
}

impl From<DominanceCert> for DominanceWire {
    fn from(c: DominanceCert) -> Self {
        DominanceWire { kind: "dominance".into(), target: c.target, multipliers: c.multipliers }
    }
}

impl TryFrom<DominanceWire> for DominanceCert {
    type Error = String;
    fn try_from(w: DominanceWire) -> Result<Self, String> {
        if w.kind != "dominance" {
            return Err(format!("expected kind \"dominance\", got {:?}", w.kind));
        }
        Ok(DominanceCert { target: w.target, multipliers: w.multipliers })
    }
}

/// Outcome of a checker run. A rejection always carries a reason; `work`
/// counts elementary rational operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub reason: String,
    pub work: u64,
}

impl Verdict {
    pub fn accept(work: u64) -> Self {
        Verdict { accepted: true, reason: String::new(), work }
    }

    pub fn reject(reason: impl Into<String>, work: u64) -> Self {
        let reason = reason.into();
        debug_assert!(!reason.is_empty());
        Verdict { accepted: false, reason, work }
    }
}

/// Validates index range/distinctness and strict positivity of multiplier
/// values. Returns the combined normal and rhs on success.
fn combine(
    p: &Polyhedron,
    multipliers: &Multipliers,
    work: &mut u64,
) -> Result<(RVec, Rational), String> {
    let mut seen = vec![false; p.num_rows()];
    let mut sum_a = RVec::zero(p.dim);
    let mut sum_b = Rational::zero();
    for (idx, value) in multipliers {
        let Some(flag) = seen.get_mut(*idx) else {
            return Err(format!("multiplier row index {idx} out of range"));
        };
        if *flag {
            return Err(format!("duplicate multiplier for row {idx}"));
        }
        *flag = true;
        if value.is_negative() {
            return Err(format!("negative multiplier at row {idx}"));
        }
        if value.is_zero() {
            return Err(format!("zero multiplier at row {idx} must be omitted"));
        }
        let row = &p.rows[*idx];
        sum_a = sum_a.add(&row.normal.scale(value));
        sum_b = sum_b + value * &row.rhs;
        // dim multiply-adds for the normal, one for the rhs
        *work += (p.dim as u64) + 1;
    }
    Ok((sum_a, sum_b))
}

/// Accepts iff `Σ uᵢ aᵢ = 0` and `Σ uᵢ bᵢ < 0` over the rows of `p`.
/// The strict inequality matters: an exact-zero combination only certifies
/// that `p` is not full-dimensional, not that it is empty.
pub fn check_farkas(p: &Polyhedron, cert: &FarkasCert) -> Verdict {
    let mut work = 0u64;
    let (sum_a, sum_b) = match combine(p, &cert.multipliers, &mut work) {
        Ok(v) => v,
        Err(reason) => return Verdict::reject(reason, work),
    };
    work += (p.dim as u64) + 1;
    debug_assert!(work <= (p.dim as u64 + 1) * (cert.multipliers.len() as u64 + 2));
    if !sum_a.is_zero() {
        return Verdict::reject("multiplier combination has nonzero normal", work);
    }
    if !sum_b.is_negative() {
        return Verdict::reject("combined right-hand side not negative", work);
    }
    Verdict::accept(work)
}

/// Accepts iff the multipliers combine the rows of `p` into
/// `objective·x ≥ bound`, i.e. `Σ uᵢ aᵢ = −objective` and `Σ uᵢ (−bᵢ) ≥ bound`.
pub fn check_lower_bound(p: &Polyhedron, cert: &BoundCert) -> Verdict {
    let mut work = 0u64;
    if cert.objective.dim() != p.dim {
        return Verdict::reject(
            format!("objective dimension {} does not match {}", cert.objective.dim(), p.dim),
            work,
        );
    }
    let (sum_a, sum_b) = match combine(p, &cert.multipliers, &mut work) {
        Ok(v) => v,
        Err(reason) => return Verdict::reject(reason, work),
    };
    work += (p.dim as u64) + 1;
    if sum_a != cert.objective.neg() {
        return Verdict::reject("multipliers do not combine to the objective", work);
    }
    if -sum_b < cert.bound {
        return Verdict::reject("combined bound falls short of the claimed bound", work);
    }
    Verdict::accept(work)
}

/// Accepts iff the multipliers combine the rows of `p` into an inequality at
/// least as strong as the target: `Σ uᵢ aᵢ = a` and `Σ uᵢ bᵢ ≤ b`.
pub fn check_dominance(p: &Polyhedron, cert: &DominanceCert) -> Verdict {
    let mut work = 0u64;
    if cert.target.dim() != p.dim {
        return Verdict::reject(
            format!("target dimension {} does not match {}", cert.target.dim(), p.dim),
            work,
        );
    }
    let (sum_a, sum_b) = match combine(p, &cert.multipliers, &mut work) {
        Ok(v) => v,
        Err(reason) => return Verdict::reject(reason, work),
    };
    work += (p.dim as u64) + 1;
    if sum_a != cert.target.normal {
        return Verdict::reject("multipliers do not combine to the target normal", work);
    }
    if sum_b > cert.target.rhs {
        return Verdict::reject("combined right-hand side exceeds the target", work);
    }
    Verdict::accept(work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn one_dim_contradiction() -> Polyhedron {
        // {x ≥ 1, x ≤ 0} in ≤ orientation
        Polyhedron::new(
            1,
            vec![Halfspace::from_ints(&[-1], -1), Halfspace::from_ints(&[1], 0)],
        )
        .unwrap()
    }

    fn unit_square() -> Polyhedron {
        Polyhedron::bounding_box(2, Rational::zero(), Rational::one())
    }

    #[test]
    fn farkas_accepts_contradiction() {
        let p = one_dim_contradiction();
        let cert = FarkasCert { multipliers: vec![(0, r(1, 1)), (1, r(1, 1))] };
        let v = check_farkas(&p, &cert);
        assert!(v.accepted, "{}", v.reason);
        assert!(v.work <= 2 * (1 + 1) + 2 * (1 + 1));
    }

    #[test]
    fn farkas_rejects_partial_support() {
        let p = one_dim_contradiction();
        let cert = FarkasCert { multipliers: vec![(0, r(1, 1))] };
        let v = check_farkas(&p, &cert);
        assert!(!v.accepted);
        assert!(v.reason.contains("nonzero normal"));
    }

    #[test]
    fn farkas_rejects_out_of_range_and_duplicates() {
        let p = one_dim_contradiction();
        let v = check_farkas(&p, &FarkasCert { multipliers: vec![(7, r(1, 1))] });
        assert!(!v.accepted && v.reason.contains("out of range"));
        let v = check_farkas(
            &p,
            &FarkasCert { multipliers: vec![(0, r(1, 1)), (0, r(1, 1))] },
        );
        assert!(!v.accepted && v.reason.contains("duplicate"));
        let v = check_farkas(&p, &FarkasCert { multipliers: vec![(0, r(-1, 1))] });
        assert!(!v.accepted && v.reason.contains("negative"));
    }

    #[test]
    fn lower_bound_examples() {
        // P = {x ≥ 1}: c = (1), γ̄ = 1, u = (1) accepted
        let p = Polyhedron::new(1, vec![Halfspace::from_ints(&[-1], -1)]).unwrap();
        let accepted = BoundCert {
            objective: RVec::from_ints(&[1]),
            bound: r(1, 1),
            multipliers: vec![(0, r(1, 1))],
        };
        assert!(check_lower_bound(&p, &accepted).accepted);

        // γ̄ = 2 is not certified by the same multipliers
        let too_strong = BoundCert { bound: r(2, 1), ..accepted.clone() };
        assert!(!check_lower_bound(&p, &too_strong).accepted);

        // P = {x₁ ≥ 0, x₂ ≥ 0}, c = (1,1), γ̄ = 0, u = (1,1)
        let q = Polyhedron::new(
            2,
            vec![Halfspace::from_ints(&[-1, 0], 0), Halfspace::from_ints(&[0, -1], 0)],
        )
        .unwrap();
        let c = BoundCert {
            objective: RVec::from_ints(&[1, 1]),
            bound: Rational::zero(),
            multipliers: vec![(0, r(1, 1)), (1, r(1, 1))],
        };
        assert!(check_lower_bound(&q, &c).accepted);
    }

    #[test]
    fn dominance_examples() {
        let p = unit_square();
        // rows: x₁ ≤ 1 (0), −x₁ ≤ 0 (1), x₂ ≤ 1 (2), −x₂ ≤ 0 (3)
        let ok = DominanceCert {
            target: Halfspace::from_ints(&[1, 1], 2),
            multipliers: vec![(0, r(1, 1)), (2, r(1, 1))],
        };
        assert!(check_dominance(&p, &ok).accepted);

        let too_tight = DominanceCert {
            target: Halfspace::new(RVec::from_ints(&[1, 1]), r(3, 2)),
            multipliers: vec![(0, r(1, 1)), (2, r(1, 1))],
        };
        let v = check_dominance(&p, &too_tight);
        assert!(!v.accepted && v.reason.contains("exceeds"));

        let seg = Polyhedron::bounding_box(1, Rational::zero(), r(3, 1));
        let ok = DominanceCert {
            target: Halfspace::from_ints(&[1], 3),
            multipliers: vec![(0, r(1, 1))],
        };
        assert!(check_dominance(&seg, &ok).accepted);
    }

    #[test]
    fn certificate_wire_format() {
        let cert = FarkasCert { multipliers: vec![(0, r(1, 1)), (1, r(1, 2))] };
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(json, r#"{"kind":"farkas","multipliers":[[0,"1"],[1,"1/2"]]}"#);
        let back: FarkasCert = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(serde_json::from_str::<FarkasCert>(r#"{"kind":"bound","multipliers":[]}"#).is_err());
    }
}
