//! Brute-force oracle for minimal certificate sizes.
//!
//! [`min_tree`] runs an exhaustive capped search over trees whose branch
//! nodes come from a finite disjunction family and whose cut nodes apply CG
//! steps generated from a finite list of source halfspaces. Leaf evidence is
//! synthesized by the exact LP layer. The returned number is therefore the
//! exact minimum *relative to the family*; nothing is claimed about moves
//! outside it. Symmetric subtrees are deduplicated by a canonical form of
//! the node polyhedron, and every reported number is realized by a concrete
//! tree that is re-verified before being returned.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bctree::{
    build, check, reverse_instance, tree_size, BCNode, BCTree, Disjunction, Goal,
};
use crate::error::{Error, Result};
use crate::geometry::{coordinate_bounds, EmbeddingContext, Halfspace, Polyhedron};
use crate::instances::InstanceBundle;
use crate::lp::{self, extract_dominance, DominanceOutcome};
use crate::rational::RVec;

/// The finite move set a search is allowed to use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveFamily {
    /// Branching moves; split and variable kinds only.
    pub disjunctions: Vec<Disjunction>,
    /// Candidate source halfspaces for CG cut steps.
    pub cuts: Vec<Halfspace>,
    pub depth_cap: usize,
    pub size_cap: u64,
}

impl MoveFamily {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.size_cap == 0 || self.depth_cap == 0 {
            return Err(Error::InvalidArgument("caps must be at least 1".into()));
        }
        for d in &self.disjunctions {
            if matches!(d, Disjunction::General { .. }) {
                return Err(Error::InvalidArgument(
                    "search families admit split and variable disjunctions only".into(),
                ));
            }
            d.terms(dim)?;
        }
        for c in &self.cuts {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.dim() });
            }
        }
        Ok(())
    }

    /// Drops all branching moves, keeping the cutting plane paradigm.
    pub fn pure_cuts(&self) -> MoveFamily {
        MoveFamily { disjunctions: Vec::new(), ..self.clone() }
    }
}

/// A family large enough for the constructive certificates of the instance
/// corpus: every variable disjunction with an integer offset inside the
/// system's bounding box, one split disjunction per integral non-axis
/// target row, and CG sources from the system and target rows.
pub fn family_for(
    system: &Polyhedron,
    targets: &[Halfspace],
    size_cap: u64,
) -> Result<MoveFamily> {
    let Some(bounds) = coordinate_bounds(system)? else {
        return Ok(MoveFamily {
            disjunctions: Vec::new(),
            cuts: Vec::new(),
            depth_cap: size_cap as usize,
            size_cap,
        });
    };
    let mut disjunctions = Vec::new();
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        let lo = i64::try_from(lo.floor_int())
            .map_err(|_| Error::InvalidArgument("system bounds too large for a family".into()))?;
        let hi = i64::try_from(hi.ceil_int())
            .map_err(|_| Error::InvalidArgument("system bounds too large for a family".into()))?;
        for beta in (lo - 1)..=hi {
            disjunctions.push(Disjunction::variable(i, beta));
        }
    }
    let mut cuts: Vec<Halfspace> = Vec::new();
    for row in system.rows.iter().chain(targets) {
        if row.is_trivial() {
            continue;
        }
        if !cuts.contains(row) {
            cuts.push(row.clone());
        }
        let axis = row.normal.iter().filter(|e| !e.is_zero()).count() == 1;
        if !axis && row.normal.is_integral() && row.rhs.is_integer() {
            let norm = row.coprime_normalize()?;
            let d = Disjunction::Split { alpha: norm.normal, beta: norm.rhs };
            if !disjunctions.contains(&d) {
                disjunctions.push(d);
            }
        }
    }
    Ok(MoveFamily { disjunctions, cuts, depth_cap: size_cap as usize, size_cap })
}

/// Tree shape found by the search; certificates are synthesized afterwards.
#[derive(Debug, Clone)]
enum Skeleton {
    Leaf,
    Branch(usize, Vec<Skeleton>),
    Cut(usize, Box<Skeleton>),
}

#[derive(Debug, Clone)]
enum MoveExpansion {
    Branch(usize, Vec<Polyhedron>),
    Cut(usize, Polyhedron),
}

struct NodeInfo {
    leaf_ok: bool,
    moves: Vec<MoveExpansion>,
}

#[derive(Debug, Clone)]
enum Bound {
    Exact(u64, Skeleton),
    MoreThan(u64),
}

struct Searcher<'a> {
    family: &'a MoveFamily,
    /// Target rows a leaf must dominate; `None` means the leaf set must be
    /// empty (infeasibility goal).
    leaf_rows: Option<&'a [Halfspace]>,
    expansions: HashMap<String, std::rc::Rc<NodeInfo>>,
    bounds: HashMap<(String, usize), Bound>,
}

/// Canonical form of a polyhedron's geometry: coprime-normalized rows,
/// sorted and deduplicated, with trivially true rows dropped.
fn canon_key(poly: &Polyhedron) -> String {
    let mut rows: Vec<String> = Vec::with_capacity(poly.num_rows());
    for row in &poly.rows {
        if row.is_trivial() {
            if row.rhs.is_negative() {
                rows.push("never".into());
            }
            continue;
        }
        let n = row.coprime_normalize().expect("nonzero normal");
        let coeffs: Vec<String> = n.normal.iter().map(|e| e.to_string()).collect();
        rows.push(format!("{}|{}", coeffs.join(","), n.rhs));
    }
    rows.sort();
    rows.dedup();
    format!("{}:{}", poly.dim, rows.join(";"))
}

impl<'a> Searcher<'a> {
    fn leaf_admissible(&self, poly: &Polyhedron) -> Result<bool> {
        if lp::is_empty(poly)? {
            return Ok(true);
        }
        let Some(rows) = self.leaf_rows else {
            return Ok(false);
        };
        for row in rows {
            match extract_dominance(poly, &row.normal, &row.rhs)? {
                DominanceOutcome::Dominated(_) => continue,
                DominanceOutcome::Violated(_) => return Ok(false),
            }
        }
        Ok(true)
    }

    /// True when `poly ⊆ {h}`: applying `h` would leave the node unchanged,
    /// so a minimal tree never uses the move.
    fn move_redundant(poly: &Polyhedron, h: &Halfspace) -> Result<bool> {
        if lp::is_empty(poly)? {
            return Ok(true);
        }
        Ok(matches!(
            extract_dominance(poly, &h.normal, &h.rhs)?,
            DominanceOutcome::Dominated(_)
        ))
    }

    fn expand(&mut self, key: &str, poly: &Polyhedron) -> Result<std::rc::Rc<NodeInfo>> {
        if let Some(info) = self.expansions.get(key) {
            return Ok(info.clone());
        }
        let leaf_ok = self.leaf_admissible(poly)?;
        let mut moves = Vec::new();
        // A leaf of size 1 beats every move, so expansion is only needed
        // when the node cannot close.
        if !leaf_ok {
            for (di, d) in self.family.disjunctions.iter().enumerate() {
                let terms = d.terms(poly.dim)?;
                let mut child_polys = Vec::with_capacity(terms.len());
                let mut useless = false;
                for term in &terms {
                    // single-halfspace terms by family validation
                    if Self::move_redundant(poly, &term[0])? {
                        useless = true;
                        break;
                    }
                    child_polys.push(poly.with_rows(term));
                }
                if !useless {
                    moves.push(MoveExpansion::Branch(di, child_polys));
                }
            }
            for (ci, source) in self.family.cuts.iter().enumerate() {
                match crate::cuts::build_cut_step(poly, source) {
                    Ok(step) => {
                        if !Self::move_redundant(poly, &step.cut)? {
                            moves.push(MoveExpansion::Cut(ci, poly.intersect_halfspace(&step.cut)));
                        }
                    }
                    Err(Error::SourceNotValid) | Err(Error::CertifierUnavailable) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let info = std::rc::Rc::new(NodeInfo { leaf_ok, moves });
        self.expansions.insert(key.to_string(), info.clone());
        Ok(info)
    }

    /// Exact minimal skeleton size for `poly` within `cap`, or proof that
    /// every tree is larger.
    fn minsize(&mut self, poly: &Polyhedron, cap: u64, depth: usize) -> Result<Option<(u64, Skeleton)>> {
        if cap == 0 {
            return Ok(None);
        }
        let key = canon_key(poly);
        match self.bounds.get(&(key.clone(), depth)) {
            Some(Bound::Exact(s, sk)) => {
                return Ok(if *s <= cap { Some((*s, sk.clone())) } else { None });
            }
            Some(Bound::MoreThan(c)) if *c >= cap => return Ok(None),
            _ => {}
        }

        let info = self.expand(&key, poly)?;
        let mut best: Option<(u64, Skeleton)> = None;
        if info.leaf_ok {
            best = Some((1, Skeleton::Leaf));
        }
        if depth < self.family.depth_cap {
            let moves: &[MoveExpansion] = &info.moves;
            for m in moves.iter() {
                let budget = match &best {
                    Some((s, _)) => s - 1,
                    None => cap,
                };
                match m {
                    MoveExpansion::Branch(di, children) => {
                        // each child needs at least one node
                        let k = children.len() as u64;
                        if budget < 1 + k {
                            continue;
                        }
                        let mut remaining = budget - 1;
                        let mut sizes = Vec::with_capacity(children.len());
                        let mut skels = Vec::with_capacity(children.len());
                        let mut ok = true;
                        for (idx, child) in children.iter().enumerate() {
                            let left = (children.len() - idx - 1) as u64;
                            let child_cap = remaining - left;
                            match self.minsize(child, child_cap, depth + 1)? {
                                Some((s, sk)) => {
                                    remaining -= s;
                                    sizes.push(s);
                                    skels.push(sk);
                                }
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok {
                            let total = 1 + sizes.iter().sum::<u64>();
                            if best.as_ref().map_or(true, |(s, _)| total < *s) {
                                best = Some((total, Skeleton::Branch(*di, skels)));
                            }
                        }
                    }
                    MoveExpansion::Cut(ci, right) => {
                        if budget < 3 {
                            continue;
                        }
                        if let Some((s, sk)) = self.minsize(right, budget - 2, depth + 1)? {
                            let total = 2 + s;
                            if best.as_ref().map_or(true, |(b, _)| total < *b) {
                                best = Some((total, Skeleton::Cut(*ci, Box::new(sk))));
                            }
                        }
                    }
                }
            }
        }

        match &best {
            Some((s, sk)) => {
                self.bounds.insert((key, depth), Bound::Exact(*s, sk.clone()));
                Ok(Some((*s, sk.clone())))
            }
            None => {
                self.bounds.insert((key, depth), Bound::MoreThan(cap));
                Ok(None)
            }
        }
    }
}

fn goal_leaf_rows(goal: &Goal) -> Option<Vec<Halfspace>> {
    match goal {
        Goal::Infeasibility => None,
        Goal::Hull { target } => Some(target.rows.clone()),
        Goal::Validity { target } => Some(vec![target.clone()]),
        Goal::Membership { separator, .. } => Some(vec![separator.clone()]),
    }
}

fn materialize(
    family: &MoveFamily,
    poly: &Polyhedron,
    skeleton: &Skeleton,
    leaf_rows: Option<&[Halfspace]>,
) -> Result<BCNode> {
    match skeleton {
        Skeleton::Leaf => match leaf_rows {
            None => build::farkas_leaf(poly),
            Some(rows) => build::containment_leaf(poly, rows),
        },
        Skeleton::Branch(di, children) => {
            build::branch_node(poly, family.disjunctions[*di].clone(), |j, child_poly| {
                materialize(family, child_poly, &children[j], leaf_rows)
            })
        }
        Skeleton::Cut(ci, right) => build::cut_node(poly, &family.cuts[*ci], |right_poly| {
            materialize(family, right_poly, right, leaf_rows)
        }),
    }
}

/// Result of a capped search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// Minimal size within the family, realized by a verified tree.
    Found(u64, BCTree),
    CapExceeded,
}

/// Exhaustive minimal-tree search for `goal` over `system`, relative to
/// `family`. Iterative deepening on the size cap; ties are broken by
/// construction order (leaf, then disjunctions, then cuts, in family
/// order). `system` must be bounded.
pub fn min_tree(system: &Polyhedron, goal: &Goal, family: &MoveFamily) -> Result<SearchOutcome> {
    family.validate(system.dim)?;
    coordinate_bounds(system)?;
    if let Goal::Membership { point, separator } = goal {
        if separator.contains(point) {
            return Err(Error::InvalidArgument(
                "membership separator does not separate the point".into(),
            ));
        }
    }
    let leaf_rows = goal_leaf_rows(goal);
    let mut searcher = Searcher {
        family,
        leaf_rows: leaf_rows.as_deref(),
        expansions: HashMap::new(),
        bounds: HashMap::new(),
    };
    for cap in 1..=family.size_cap {
        if let Some((size, skeleton)) = searcher.minsize(system, cap, 0)? {
            let root = materialize(family, system, &skeleton, leaf_rows.as_deref())?;
            let tree = BCTree {
                context: EmbeddingContext::new(system.dim)?,
                system: system.clone(),
                goal: goal.clone(),
                root,
            };
            let v = check(&tree);
            if !v.accepted {
                return Err(Error::InvalidArgument(format!(
                    "search produced a rejected tree: {}",
                    v.reason
                )));
            }
            debug_assert_eq!(tree_size(&tree), size);
            return Ok(SearchOutcome::Found(size, tree));
        }
    }
    Ok(SearchOutcome::CapExceeded)
}

/// Family-relative complexity numbers for one instance, each realized by a
/// stored verified tree. `None`/missing entries mean the search hit its cap
/// (`cap_exceeded` is then set).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub instance: String,
    /// Validity complexity per hull-target facet, and the maximum.
    pub per_facet: Vec<(Halfspace, u64)>,
    pub facet: Option<u64>,
    pub hull: Option<u64>,
    /// Validity complexity per requested target halfspace.
    pub validity: Vec<(Halfspace, u64)>,
    /// Max over witness points of the min over separators drawn from the
    /// hull target's rows.
    pub membership: Option<u64>,
    /// Reverse complexity per requested target halfspace.
    pub reverse: Vec<(Halfspace, u64)>,
    pub cap_exceeded: bool,
    /// The witness trees realizing every reported number.
    pub trees: Vec<(String, BCTree)>,
}

/// Runs [`min_tree`] for every goal of the bundle: one validity search per
/// hull-target facet and per claimed validity target, the hull goal, the
/// reverse instance of every validity target, and a membership search per
/// supplied witness point with separators drawn from the hull target.
pub fn complexity_report(
    bundle: &InstanceBundle,
    family: &MoveFamily,
    witnesses: &[RVec],
) -> Result<ComplexityReport> {
    let system = &bundle.system;
    let ctx = EmbeddingContext::new(system.dim)?;
    let mut report = ComplexityReport {
        instance: bundle.name.clone(),
        per_facet: Vec::new(),
        facet: None,
        hull: None,
        validity: Vec::new(),
        membership: None,
        reverse: Vec::new(),
        cap_exceeded: false,
        trees: Vec::new(),
    };

    let facet_rows: Vec<Halfspace> = bundle
        .hull_target
        .rows
        .iter()
        .filter(|r| !r.is_trivial())
        .cloned()
        .collect();
    let mut validity_targets = facet_rows.clone();
    for claim in &bundle.claimed_sizes {
        if let Goal::Validity { target } = &claim.goal {
            if !validity_targets.contains(target) {
                validity_targets.push(target.clone());
            }
        }
    }

    // Validity per target (facets first).
    for (i, target) in validity_targets.iter().enumerate() {
        let goal = Goal::Validity { target: target.clone() };
        match min_tree(system, &goal, family)? {
            SearchOutcome::Found(size, tree) => {
                report.validity.push((target.clone(), size));
                if i < facet_rows.len() {
                    report.per_facet.push((target.clone(), size));
                }
                report.trees.push((format!("validity_{i}"), tree));
            }
            SearchOutcome::CapExceeded => report.cap_exceeded = true,
        }
    }
    if !report.per_facet.is_empty() && report.per_facet.len() == facet_rows.len() {
        report.facet = report.per_facet.iter().map(|(_, s)| *s).max();
    }

    // Hull.
    let hull_goal = Goal::Hull { target: bundle.hull_target.clone() };
    match min_tree(system, &hull_goal, family)? {
        SearchOutcome::Found(size, tree) => {
            report.hull = Some(size);
            report.trees.push(("hull".into(), tree));
        }
        SearchOutcome::CapExceeded => report.cap_exceeded = true,
    }

    // Reverse per validity target.
    for (i, target) in validity_targets.iter().enumerate() {
        let reversed = reverse_instance(system, target, &ctx)?;
        match min_tree(&reversed, &Goal::Infeasibility, family)? {
            SearchOutcome::Found(size, tree) => {
                report.reverse.push((target.clone(), size));
                report.trees.push((format!("reverse_{i}"), tree));
            }
            SearchOutcome::CapExceeded => report.cap_exceeded = true,
        }
    }

    // Membership: max over witnesses of the best separator.
    let mut worst: Option<u64> = None;
    for (wi, point) in witnesses.iter().enumerate() {
        let mut best: Option<(u64, BCTree)> = None;
        for sep in &facet_rows {
            if sep.contains(point) {
                continue;
            }
            let goal = Goal::Membership { point: point.clone(), separator: sep.clone() };
            match min_tree(system, &goal, family)? {
                SearchOutcome::Found(size, tree) => {
                    if best.as_ref().map_or(true, |(b, _)| size < *b) {
                        best = Some((size, tree));
                    }
                }
                SearchOutcome::CapExceeded => report.cap_exceeded = true,
            }
        }
        match best {
            Some((size, tree)) => {
                report.trees.push((format!("membership_{wi}"), tree));
                worst = Some(worst.map_or(size, |w| w.max(size)));
            }
            None => report.cap_exceeded = true,
        }
    }
    report.membership = worst;

    Ok(report)
}

/// Nontrivial facets of the hull target: rows the relaxation itself does
/// not already dominate.
pub fn nontrivial_facets(system: &Polyhedron, hull_target: &Polyhedron) -> Result<Vec<Halfspace>> {
    let mut out = Vec::new();
    for row in &hull_target.rows {
        if row.is_trivial() {
            continue;
        }
        match extract_dominance(system, &row.normal, &row.rhs)? {
            DominanceOutcome::Dominated(_) => {}
            DominanceOutcome::Violated(_) => out.push(row.clone()),
        }
    }
    Ok(out)
}
