//! Branch-and-cut trees and their checkers.
//!
//! A tree node carries two labels: a list of halfspaces added at that node
//! (the node's set is the root system intersected with every addition along
//! the path), and a second label saying how the node was produced: a
//! branching disjunction, a cutting-plane step, or a leaf with evidence.
//!
//! Four goals are supported. An infeasibility tree proves the root system
//! contains no lattice point: every ordinary leaf carries a Farkas
//! certificate. A hull tree proves every leaf set is contained in a target
//! polyhedron; a validity tree is the single-row special case. A membership
//! tree proves a point lies outside the convex hull of the leaf union via an
//! explicit separating halfspace dominated at every leaf.
//!
//! Checking never solves anything: it replays certificates and verifies the
//! tree shape, so its cost is linear in the certificate and reported through
//! [`Verdict::work`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::certificates::{check_dominance, check_farkas, DominanceCert, FarkasCert, Verdict};
use crate::cuts::{cg_cut, CutStep};
use crate::error::{Error, Result};
use crate::geometry::{tighten_complement, EmbeddingContext, Halfspace, Polyhedron};
use crate::rational::{RVec, Rational};

/// A valid disjunction: closed terms whose lattice restrictions cover ℤⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Disjunction {
    /// `{α·x ≤ β} ∪ {α·x ≥ β+1}` with coprime integer `α` and integer `β`.
    Split { alpha: RVec, beta: Rational },
    /// The split on one coordinate: `{xᵢ ≤ β} ∪ {xᵢ ≥ β+1}`.
    Variable { index: usize, beta: Rational },
    /// Explicit terms. Accepted only when split-shaped: verifying that an
    /// arbitrary union of convex terms covers ℤⁿ is as hard as the problems
    /// being certified, so no other cover proof is supported.
    General { terms: Vec<Vec<Halfspace>> },
}

fn split_terms(alpha: &RVec, beta: &Rational) -> Vec<Vec<Halfspace>> {
    let lower = Halfspace::new(alpha.clone(), beta.clone());
    let upper = Halfspace::new(alpha.neg(), -(beta + &Rational::one()));
    vec![vec![lower], vec![upper]]
}

/// Integer entries of an integral vector, or a reason it is not integral.
fn integral_entries(v: &RVec) -> std::result::Result<Vec<BigInt>, String> {
    v.iter()
        .map(|e| {
            if e.is_integer() {
                Ok(e.numer().clone())
            } else {
                Err(format!("non-integer entry {e} in split normal"))
            }
        })
        .collect()
}

impl Disjunction {
    pub fn split(alpha: RVec, beta: impl Into<BigInt>) -> Self {
        Disjunction::Split { alpha, beta: Rational::from_int(beta.into()) }
    }

    pub fn variable(index: usize, beta: i64) -> Self {
        Disjunction::Variable { index, beta: Rational::from_int(beta) }
    }

    /// The closed terms of the disjunction, after validating that it covers
    /// the lattice. The error is a human-readable rejection reason.
    pub fn validated_terms(&self, dim: usize) -> std::result::Result<Vec<Vec<Halfspace>>, String> {
        match self {
            Disjunction::Split { alpha, beta } => {
                if alpha.dim() != dim {
                    return Err(format!("split normal has dimension {}, expected {dim}", alpha.dim()));
                }
                if !beta.is_integer() {
                    return Err(format!(
                        "non-integer split offset {beta} is a g-split, not a valid disjunction"
                    ));
                }
                let ints = integral_entries(alpha)?;
                let mut gcd = BigInt::zero();
                for v in &ints {
                    gcd = gcd.gcd(v);
                }
                if gcd.is_zero() {
                    return Err("split normal is zero".into());
                }
                if gcd != BigInt::from(1) {
                    return Err(format!("split normal is not coprime (gcd {gcd})"));
                }
                Ok(split_terms(alpha, beta))
            }
            Disjunction::Variable { index, beta } => {
                if *index >= dim {
                    return Err(format!("variable index {index} out of range for dimension {dim}"));
                }
                if !beta.is_integer() {
                    return Err(format!(
                        "non-integer split offset {beta} is a g-split, not a valid disjunction"
                    ));
                }
                Ok(split_terms(&RVec::unit(dim, *index), beta))
            }
            Disjunction::General { terms } => {
                // Split-shaped check: two single-halfspace terms of the form
                // {a·x ≤ b} and {a·x ≥ b+1} with integral a and integer b.
                let shape_err = "general disjunction lacks a lattice-cover proof \
                                 (only split-shaped terms are supported)";
                if terms.len() != 2 || terms[0].len() != 1 || terms[1].len() != 1 {
                    return Err(shape_err.into());
                }
                let lower = &terms[0][0];
                let upper = &terms[1][0];
                if lower.dim() != dim || upper.dim() != dim {
                    return Err(format!("disjunction term dimension differs from {dim}"));
                }
                integral_entries(&lower.normal)?;
                if lower.normal.is_zero() {
                    return Err("split normal is zero".into());
                }
                if !lower.rhs.is_integer() {
                    return Err(format!(
                        "non-integer split offset {} is a g-split, not a valid disjunction",
                        lower.rhs
                    ));
                }
                let expect_upper = Halfspace::new(
                    lower.normal.neg(),
                    -(&lower.rhs + &Rational::one()),
                );
                if *upper != expect_upper {
                    return Err(shape_err.into());
                }
                Ok(terms.clone())
            }
        }
    }

    pub fn terms(&self, dim: usize) -> Result<Vec<Vec<Halfspace>>> {
        self.validated_terms(dim).map_err(Error::InvalidArgument)
    }
}

/// The second label of a tree node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    Branch { disjunction: Disjunction },
    Cut { step: CutStep },
    /// Placeholder leaf with no evidence; accepted by the structure checker
    /// but by none of the goal checkers.
    LeafEmpty,
    /// Leaf whose set is certified empty.
    LeafFarkas { certificate: FarkasCert },
    /// Leaf whose set is certified contained in the goal target, one
    /// dominance certificate per target row.
    LeafDominance { certificates: Vec<DominanceCert> },
}

/// A tree node: the halfspaces added at this node plus the second label.
/// For a `Cut` node the children are `[certifier leaf, right child]`; the
/// certifier leaf's addition is the tightened complement of the cut and the
/// right child's addition is the cut itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCNode {
    pub add: Vec<Halfspace>,
    #[serde(flatten)]
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<BCNode>,
}

impl BCNode {
    pub fn leaf(kind: NodeKind) -> Self {
        BCNode { add: Vec::new(), kind, children: Vec::new() }
    }
}

/// What a tree claims to certify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Goal {
    /// The root system contains no lattice point.
    Infeasibility,
    /// Every leaf set is contained in `target`.
    Hull { target: Polyhedron },
    /// Every leaf set is contained in the single target halfspace.
    Validity { target: Halfspace },
    /// `point` lies outside the convex hull of the leaf union, witnessed by
    /// `separator`, which `point` violates and every leaf satisfies.
    Membership { point: RVec, separator: Halfspace },
}

impl Goal {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Goal::Infeasibility => "infeasibility",
            Goal::Hull { .. } => "hull",
            Goal::Validity { .. } => "validity",
            Goal::Membership { .. } => "membership",
        }
    }
}

/// A branch-and-cut certificate document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCTree {
    pub context: EmbeddingContext,
    pub system: Polyhedron,
    pub goal: Goal,
    pub root: BCNode,
}

/// Node counts used by the size measure and the degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: u64,
    pub leaves: u64,
}

fn stats(node: &BCNode) -> TreeStats {
    if node.children.is_empty() {
        return TreeStats { nodes: 1, leaves: 1 };
    }
    let mut acc = TreeStats { nodes: 1, leaves: 0 };
    for child in &node.children {
        let s = stats(child);
        acc.nodes += s.nodes;
        acc.leaves += s.leaves;
    }
    acc
}

pub fn tree_stats(tree: &BCTree) -> TreeStats {
    stats(&tree.root)
}

/// The size of the tree: its total node count. Certifier leaves are nodes,
/// so each cut step contributes its pair of children; the closed-form sizes
/// of the generated families count exactly this quantity. The checker's
/// `work` field reports the complementary measure, the cost of replaying
/// every certificate in the tree.
pub fn tree_size(tree: &BCTree) -> u64 {
    tree_stats(tree).nodes
}

/// The polyhedron of the node reached by `path` (a list of child indices):
/// the root system plus every addition along the path.
pub fn node_polyhedron(tree: &BCTree, path: &[usize]) -> Result<Polyhedron> {
    let mut poly = tree.system.with_rows(&tree.root.add);
    let mut node = &tree.root;
    for &step in path {
        node = node
            .children
            .get(step)
            .ok_or_else(|| Error::InvalidArgument(format!("invalid path step {step}")))?;
        poly = poly.with_rows(&node.add);
    }
    Ok(poly)
}

struct Walker<F> {
    dim: usize,
    leaf_check: F,
}

impl<F> Walker<F>
where
    F: FnMut(&BCNode, &Polyhedron, &str, &mut u64) -> std::result::Result<(), String>,
{
    fn node(
        &mut self,
        node: &BCNode,
        poly: &Polyhedron,
        path: &str,
        work: &mut u64,
    ) -> std::result::Result<(), String> {
        *work += 1;
        for h in &node.add {
            if h.dim() != self.dim {
                return Err(format!("{path}: added halfspace of dimension {}", h.dim()));
            }
        }
        match &node.kind {
            NodeKind::Branch { disjunction } => {
                let terms = disjunction
                    .validated_terms(self.dim)
                    .map_err(|e| format!("{path}: {e}"))?;
                if node.children.len() != terms.len() {
                    return Err(format!(
                        "{path}: branch node has {} children for {} disjunction terms",
                        node.children.len(),
                        terms.len()
                    ));
                }
                for (j, (child, term)) in node.children.iter().zip(terms.iter()).enumerate() {
                    if &child.add != term {
                        return Err(format!(
                            "{path}/{j}: child first label does not extend by disjunction term {j}"
                        ));
                    }
                    let child_poly = poly.with_rows(&child.add);
                    self.node(child, &child_poly, &format!("{path}/{j}"), work)?;
                }
                Ok(())
            }
            NodeKind::Cut { step } => {
                if node.children.len() != 2 {
                    return Err(format!("{path}: cut node must have exactly two children"));
                }
                let expected_cut = cg_cut(&step.source)
                    .map_err(|e| format!("{path}: cut source is unusable: {e}"))?;
                if expected_cut != step.cut {
                    return Err(format!(
                        "{path}: cut is not the CG strengthening of its source"
                    ));
                }
                if step.source_evidence.target != step.source {
                    return Err(format!("{path}: source evidence targets a different halfspace"));
                }
                let v = check_dominance(poly, &step.source_evidence);
                *work += v.work;
                if !v.accepted {
                    return Err(format!("{path}: source halfspace not valid for node: {}", v.reason));
                }
                let ctx = EmbeddingContext { dim: self.dim };
                let tightened = tighten_complement(&step.cut, &ctx)
                    .map_err(|e| format!("{path}: {e}"))?;

                // Left child: the cutting plane certifier.
                let left = &node.children[0];
                let lpath = format!("{path}/0");
                *work += 1;
                if left.add.as_slice() != std::slice::from_ref(&tightened) {
                    return Err(format!(
                        "{lpath}: certifier leaf must add the tightened complement of the cut"
                    ));
                }
                if !left.children.is_empty() {
                    return Err(format!("{lpath}: certifier leaf has children"));
                }
                let NodeKind::LeafFarkas { certificate } = &left.kind else {
                    return Err(format!("{lpath}: certifier leaf must carry a Farkas certificate"));
                };
                if certificate != &step.certifier {
                    return Err(format!(
                        "{lpath}: certifier leaf certificate differs from the cut step's"
                    ));
                }
                let cert_poly = poly.with_rows(&left.add);
                let v = check_farkas(&cert_poly, certificate);
                *work += v.work;
                if !v.accepted {
                    return Err(format!("{lpath}: cutting plane certifier rejected: {}", v.reason));
                }

                // Right child extends by the cut.
                let right = &node.children[1];
                if right.add.as_slice() != std::slice::from_ref(&step.cut) {
                    return Err(format!("{path}/1: right child must extend by the cut"));
                }
                let right_poly = poly.with_rows(&right.add);
                self.node(right, &right_poly, &format!("{path}/1"), work)
            }
            NodeKind::LeafEmpty | NodeKind::LeafFarkas { .. } | NodeKind::LeafDominance { .. } => {
                if !node.children.is_empty() {
                    return Err(format!("{path}: leaf node has children"));
                }
                (self.leaf_check)(node, poly, path, work)
            }
        }
    }
}

fn verify<F>(tree: &BCTree, leaf_check: F) -> Verdict
where
    F: FnMut(&BCNode, &Polyhedron, &str, &mut u64) -> std::result::Result<(), String>,
{
    let mut work = 0u64;
    if tree.system.dim != tree.context.dim {
        return Verdict::reject(
            format!(
                "system dimension {} differs from context dimension {}",
                tree.system.dim, tree.context.dim
            ),
            work,
        );
    }
    if !tree.root.add.is_empty() {
        return Verdict::reject("root first label must be empty", work);
    }
    let mut walker = Walker { dim: tree.context.dim, leaf_check };
    let poly = tree.system.clone();
    match walker.node(&tree.root, &poly, "root", &mut work) {
        Ok(()) => {
            let s = tree_stats(tree);
            debug_assert!(s.nodes <= 2 * s.leaves, "internal degree at least 3 violated");
            Verdict::accept(work)
        }
        Err(reason) => Verdict::reject(reason, work),
    }
}

/// Verifies the tree shape and every piece of evidence that is independent
/// of the goal: disjunctions are lattice-covering, children match their
/// terms, and each cut step's source evidence and certifier are accepted.
pub fn check_structure(tree: &BCTree) -> Verdict {
    verify(tree, |_, _, _, _| Ok(()))
}

/// Accepts iff the structure is valid and every ordinary leaf carries an
/// accepted Farkas certificate for its polyhedron.
pub fn check_infeasibility(tree: &BCTree) -> Verdict {
    if tree.goal != Goal::Infeasibility {
        return Verdict::reject(
            format!("tree goal is {}, not infeasibility", tree.goal.kind_name()),
            0,
        );
    }
    verify(tree, |node, poly, path, work| match &node.kind {
        NodeKind::LeafFarkas { certificate } => {
            let v = check_farkas(poly, certificate);
            *work += v.work;
            if v.accepted {
                Ok(())
            } else {
                Err(format!("{path}: leaf Farkas certificate rejected: {}", v.reason))
            }
        }
        _ => Err(format!("{path}: leaf lacks an infeasibility certificate")),
    })
}

fn containment_leaf_check(
    target_rows: &[Halfspace],
) -> impl FnMut(&BCNode, &Polyhedron, &str, &mut u64) -> std::result::Result<(), String> + '_ {
    move |node, poly, path, work| match &node.kind {
        NodeKind::LeafFarkas { certificate } => {
            // An empty leaf set is vacuously contained in the target.
            let v = check_farkas(poly, certificate);
            *work += v.work;
            if v.accepted {
                Ok(())
            } else {
                Err(format!("{path}: leaf Farkas certificate rejected: {}", v.reason))
            }
        }
        NodeKind::LeafDominance { certificates } => {
            if certificates.len() != target_rows.len() {
                return Err(format!(
                    "{path}: leaf carries {} dominance certificates for {} target rows",
                    certificates.len(),
                    target_rows.len()
                ));
            }
            for (j, (cert, row)) in certificates.iter().zip(target_rows).enumerate() {
                if &cert.target != row {
                    return Err(format!(
                        "{path}: dominance certificate {j} does not target target row {j}"
                    ));
                }
                let v = check_dominance(poly, cert);
                *work += v.work;
                if !v.accepted {
                    return Err(format!(
                        "{path}: dominance certificate for target row {j} rejected: {}",
                        v.reason
                    ));
                }
            }
            Ok(())
        }
        _ => Err(format!("{path}: leaf carries no containment evidence")),
    }
}

/// Accepts iff the structure is valid and every ordinary leaf proves
/// containment of its set in the goal's target polyhedron, row by row
/// (or proves the leaf set empty).
pub fn check_hull(tree: &BCTree) -> Verdict {
    let Goal::Hull { target } = &tree.goal else {
        return Verdict::reject(format!("tree goal is {}, not hull", tree.goal.kind_name()), 0);
    };
    if target.dim != tree.context.dim {
        return Verdict::reject("hull target dimension differs from context", 0);
    }
    verify(tree, containment_leaf_check(&target.rows))
}

/// Containment in a single halfspace: hull checking with a one-row target.
pub fn check_validity(tree: &BCTree) -> Verdict {
    let Goal::Validity { target } = &tree.goal else {
        return Verdict::reject(format!("tree goal is {}, not validity", tree.goal.kind_name()), 0);
    };
    if target.dim() != tree.context.dim {
        return Verdict::reject("validity target dimension differs from context", 0);
    }
    let rows = vec![target.clone()];
    verify(tree, containment_leaf_check(&rows))
}

/// Accepts iff the separator strictly cuts off the point and every ordinary
/// leaf proves its set satisfies the separator; the point is then outside
/// the convex hull of the leaf union.
pub fn check_membership(tree: &BCTree) -> Verdict {
    let Goal::Membership { point, separator } = &tree.goal else {
        return Verdict::reject(
            format!("tree goal is {}, not membership", tree.goal.kind_name()),
            0,
        );
    };
    if separator.dim() != tree.context.dim || point.dim() != tree.context.dim {
        return Verdict::reject("membership goal dimension differs from context", 0);
    }
    if separator.contains(point) {
        return Verdict::reject("separator does not separate the point", 1);
    }
    let rows = vec![separator.clone()];
    verify(tree, containment_leaf_check(&rows))
}

/// Runs the checker matching the tree's goal.
pub fn check(tree: &BCTree) -> Verdict {
    match &tree.goal {
        Goal::Infeasibility => check_infeasibility(tree),
        Goal::Hull { .. } => check_hull(tree),
        Goal::Validity { .. } => check_validity(tree),
        Goal::Membership { .. } => check_membership(tree),
    }
}

/// The relaxed system whose infeasibility certificate is the reverse
/// certificate of the valid halfspace `h`: `system ∩ tighten_complement(h)`.
pub fn reverse_instance(
    system: &Polyhedron,
    h: &Halfspace,
    ctx: &EmbeddingContext,
) -> Result<Polyhedron> {
    if h.dim() != system.dim {
        return Err(Error::DimensionMismatch { expected: system.dim, got: h.dim() });
    }
    Ok(system.intersect_halfspace(&tighten_complement(h, ctx)?))
}

/// Constructors that synthesize leaf evidence and cut evidence with the
/// exact LP layer. Generators and the search oracle build trees through
/// these, so every emitted certificate is solver-derived and deterministic.
pub mod build {
    use super::*;
    use crate::cuts::build_cut_step;
    use crate::lp::{extract_dominance, extract_farkas, DominanceOutcome, FarkasOutcome};

    /// A leaf certifying `poly = ∅`. Fails when `poly` is feasible.
    pub fn farkas_leaf(poly: &Polyhedron) -> Result<BCNode> {
        match extract_farkas(poly)? {
            FarkasOutcome::Infeasible(certificate) => {
                Ok(BCNode::leaf(NodeKind::LeafFarkas { certificate }))
            }
            FarkasOutcome::Feasible(x) => Err(Error::InvalidArgument(format!(
                "leaf set is nonempty (contains {x})"
            ))),
        }
    }

    /// A leaf certifying `poly ⊆ target` row by row. Fails when some row is
    /// violated over `poly`.
    pub fn dominance_leaf(poly: &Polyhedron, target_rows: &[Halfspace]) -> Result<BCNode> {
        let certificates = target_rows
            .iter()
            .map(|t| match extract_dominance(poly, &t.normal, &t.rhs)? {
                DominanceOutcome::Dominated(cert) => Ok(cert),
                DominanceOutcome::Violated(x) => Err(Error::InvalidArgument(format!(
                    "target row is violated at {x}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BCNode::leaf(NodeKind::LeafDominance { certificates }))
    }

    /// A leaf that is either a Farkas leaf (empty set) or a dominance leaf.
    pub fn containment_leaf(poly: &Polyhedron, target_rows: &[Halfspace]) -> Result<BCNode> {
        match extract_farkas(poly)? {
            FarkasOutcome::Infeasible(certificate) => {
                Ok(BCNode::leaf(NodeKind::LeafFarkas { certificate }))
            }
            FarkasOutcome::Feasible(_) => dominance_leaf(poly, target_rows),
        }
    }

    /// A cut node applying the CG cut generated from `source` at `poly`.
    /// `right` receives the polyhedron after the cut and produces the right
    /// child; its `add` label is overwritten with the cut.
    pub fn cut_node(
        poly: &Polyhedron,
        source: &Halfspace,
        right: impl FnOnce(&Polyhedron) -> Result<BCNode>,
    ) -> Result<BCNode> {
        let step = build_cut_step(poly, source)?;
        let ctx = EmbeddingContext { dim: poly.dim };
        let tightened = tighten_complement(&step.cut, &ctx)?;
        let mut certifier =
            BCNode::leaf(NodeKind::LeafFarkas { certificate: step.certifier.clone() });
        certifier.add = vec![tightened];
        let right_poly = poly.intersect_halfspace(&step.cut);
        let mut right_node = right(&right_poly)?;
        right_node.add = vec![step.cut.clone()];
        Ok(BCNode {
            add: Vec::new(),
            kind: NodeKind::Cut { step },
            children: vec![certifier, right_node],
        })
    }

    /// A branch node for `disjunction` at `poly`. The builder is called once
    /// per term with the extended polyhedron; each child's `add` label is
    /// overwritten with its term.
    pub fn branch_node(
        poly: &Polyhedron,
        disjunction: Disjunction,
        mut child: impl FnMut(usize, &Polyhedron) -> Result<BCNode>,
    ) -> Result<BCNode> {
        let terms = disjunction.terms(poly.dim)?;
        let mut children = Vec::with_capacity(terms.len());
        for (j, term) in terms.iter().enumerate() {
            let child_poly = poly.with_rows(term);
            let mut node = child(j, &child_poly)?;
            node.add = term.clone();
            children.push(node);
        }
        Ok(BCNode {
            add: Vec::new(),
            kind: NodeKind::Branch { disjunction },
            children,
        })
    }

    /// A chain of CG cut nodes applying `sources` in order, ending in a
    /// final leaf produced by `last`.
    pub fn cut_chain(
        poly: &Polyhedron,
        sources: &[Halfspace],
        last: impl FnOnce(&Polyhedron) -> Result<BCNode>,
    ) -> Result<BCNode> {
        match sources.split_first() {
            None => last(poly),
            Some((first, rest)) => {
                cut_node(poly, first, |right_poly| cut_chain(right_poly, rest, last))
            }
        }
    }
}
