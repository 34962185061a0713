//! Chvátal–Gomory cuts and the evidence attached to cut nodes.
//!
//! A cut step records the source halfspace, the derived cut, a dominance
//! certificate showing the source is valid for the node's relaxation, and a
//! Farkas certificate for the node intersected with the integer-tightened
//! complement of the cut. The latter is what a checker replays to confirm
//! that no lattice point of the node violates the cut.

use serde::{Deserialize, Serialize};

use crate::certificates::{check_dominance, check_farkas, DominanceCert, FarkasCert};
use crate::error::{Error, Result};
use crate::geometry::{tighten_complement, EmbeddingContext, Halfspace, Polyhedron};
use crate::lp::{extract_dominance, extract_farkas, DominanceOutcome, FarkasOutcome};
use crate::rational::Rational;

/// One Chvátal–Gomory strengthening step with its validity evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutStep {
    /// The halfspace the cut is generated from; must be dominated by the
    /// node's polyhedron (see `source_evidence`).
    pub source: Halfspace,
    /// `{a·x ≤ ⌊b⌋}` for the coprime-integer normalization `(a, b)` of the
    /// source.
    pub cut: Halfspace,
    /// Farkas certificate for node ∩ tighten_complement(cut) = ∅.
    pub certifier: FarkasCert,
    /// Dominance certificate for the source over the node's polyhedron.
    pub source_evidence: DominanceCert,
}

/// The Chvátal–Gomory cut generated from `h`: normalize the normal to
/// coprime integers, then round the right-hand side down. Idempotent on
/// integer-normal, integer-rhs inputs.
pub fn cg_cut(h: &Halfspace) -> Result<Halfspace> {
    let norm = h.coprime_normalize()?;
    Ok(Halfspace::new(norm.normal, Rational::from_int(norm.rhs.floor_int())))
}

/// Builds the full evidence for applying the CG cut generated from `h` at a
/// node with polyhedron `node_poly`.
///
/// Fails when `h` is not valid for the node, or when the tightened system
/// `node_poly ∩ tighten_complement(cut)` is nonempty (the cut cannot be
/// certified by a single Farkas step).
pub fn build_cut_step(node_poly: &Polyhedron, h: &Halfspace) -> Result<CutStep> {
    let ctx = EmbeddingContext::new(node_poly.dim)?;
    let source_evidence = match extract_dominance(node_poly, &h.normal, &h.rhs)? {
        DominanceOutcome::Dominated(cert) => cert,
        DominanceOutcome::Violated(_) => return Err(Error::SourceNotValid),
    };
    let cut = cg_cut(h)?;
    let tightened = node_poly.intersect_halfspace(&tighten_complement(&cut, &ctx)?);
    let certifier = match extract_farkas(&tightened)? {
        FarkasOutcome::Infeasible(cert) => cert,
        FarkasOutcome::Feasible(_) => return Err(Error::CertifierUnavailable),
    };
    debug_assert!(check_farkas(&tightened, &certifier).accepted);
    debug_assert!(check_dominance(node_poly, &source_evidence).accepted);
    Ok(CutStep { source: h.clone(), cut, certifier, source_evidence })
}
