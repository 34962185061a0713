//! Generators for the tight instance families, plus Helly-number bounds.
//!
//! Each generator returns an [`InstanceBundle`]: the relaxation system, the
//! integer-hull target, and certificates whose sizes match the family's
//! closed forms: `4n+1` for the box hull chain with facet certificates of
//! size 3, `2n+1` for the simplex validity chain, and constant size 3 for
//! the lifted families regardless of how many facets the hull target has.
//! Every emitted certificate is re-verified before the bundle is returned.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bctree::{build, check, tree_size, BCNode, BCTree, Disjunction, Goal};
use crate::error::{Error, Result};
use crate::geometry::{vertices, EmbeddingContext, Halfspace, Polyhedron};
use crate::rational::{RVec, Rational};

/// A goal together with the size the generator claims for its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub goal: Goal,
    pub size: u64,
}

/// An instance family member: system, hull target, and verified
/// certificates aligned with `claimed_sizes` by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceBundle {
    pub name: String,
    pub system: Polyhedron,
    pub hull_target: Polyhedron,
    pub certificates: Vec<BCTree>,
    pub claimed_sizes: Vec<Claim>,
}

impl InstanceBundle {
    /// Checks every certificate against its goal and claimed size.
    pub fn verify(&self) -> Result<()> {
        if self.certificates.len() != self.claimed_sizes.len() {
            return Err(Error::InvalidArgument(
                "certificate and claim counts differ".into(),
            ));
        }
        for (tree, claim) in self.certificates.iter().zip(&self.claimed_sizes) {
            if tree.goal != claim.goal {
                return Err(Error::InvalidArgument(format!(
                    "certificate goal {} does not match its claim",
                    tree.goal.kind_name()
                )));
            }
            let v = check(tree);
            if !v.accepted {
                return Err(Error::InvalidArgument(format!(
                    "generated certificate rejected: {}",
                    v.reason
                )));
            }
            let size = tree_size(tree);
            if size != claim.size {
                return Err(Error::InvalidArgument(format!(
                    "generated certificate has size {size}, claimed {}",
                    claim.size
                )));
            }
        }
        Ok(())
    }
}

fn int(v: i64) -> Rational {
    Rational::from_int(v)
}

/// A validity certificate of size 3 for one CG-derivable facet: a single
/// cut node whose right child dominates the facet with its own row.
fn facet_validity_tree(
    system: &Polyhedron,
    source: &Halfspace,
    facet: &Halfspace,
) -> Result<BCTree> {
    let root = build::cut_node(system, source, |poly| {
        build::dominance_leaf(poly, std::slice::from_ref(facet))
    })?;
    Ok(BCTree {
        context: EmbeddingContext::new(system.dim)?,
        system: system.clone(),
        goal: Goal::Validity { target: facet.clone() },
        root,
    })
}

/// The box family: system `[−1/2, 2n+3/2]ⁿ`, integer hull `[0, 2n+1]ⁿ`.
/// The hull certificate is a chain of `2n` CG cuts, one per facet, of total
/// size `4n+1`; each facet alone has a validity certificate of size 3.
pub fn gen_box(n: usize) -> Result<InstanceBundle> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let hi = Rational::new(2 * n as i64 * 2 + 3, 2)?; // 2n + 3/2
    let system = Polyhedron::bounding_box(n, Rational::new(-1, 2)?, hi);
    let hull_target = Polyhedron::bounding_box(n, int(0), int(2 * n as i64 + 1));

    let sources = system.rows.clone();
    let root = build::cut_chain(&system, &sources, |poly| {
        build::dominance_leaf(poly, &hull_target.rows)
    })?;
    let hull_tree = BCTree {
        context: EmbeddingContext::new(n)?,
        system: system.clone(),
        goal: Goal::Hull { target: hull_target.clone() },
        root,
    };

    let mut certificates = vec![hull_tree];
    let mut claimed_sizes = vec![Claim {
        goal: Goal::Hull { target: hull_target.clone() },
        size: 4 * n as u64 + 1,
    }];
    for (source, facet) in system.rows.iter().zip(&hull_target.rows) {
        certificates.push(facet_validity_tree(&system, source, facet)?);
        claimed_sizes.push(Claim { goal: Goal::Validity { target: facet.clone() }, size: 3 });
    }

    let bundle = InstanceBundle {
        name: format!("box_n{n}"),
        system,
        hull_target,
        certificates,
        claimed_sizes,
    };
    bundle.verify()?;
    Ok(bundle)
}

/// The simplex-bound family: system `[1/(2n), 2+n−1/(2n)]ⁿ`, integer hull
/// `[1, n+1]ⁿ`. The inequality `Σxᵢ ≥ n` has a validity certificate of size
/// `2n+1` built from the `n` variable disjunctions `{xᵢ ≤ 0} ∪ {xᵢ ≥ 1}`;
/// every facet has a size-3 certificate.
pub fn gen_simplex_validity(n: usize) -> Result<InstanceBundle> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let eps = Rational::new(1, 2 * n as i64)?;
    let system = Polyhedron::bounding_box(n, eps.clone(), &int(n as i64 + 2) - &eps);
    let hull_target = Polyhedron::bounding_box(n, int(1), int(n as i64 + 1));
    let sum_target = Halfspace::new(
        RVec::new(vec![-Rational::one(); n]),
        int(-(n as i64)),
    );

    fn chain(
        poly: &Polyhedron,
        i: usize,
        n: usize,
        target: &Halfspace,
    ) -> Result<BCNode> {
        if i == n {
            return build::dominance_leaf(poly, std::slice::from_ref(target));
        }
        build::branch_node(poly, Disjunction::variable(i, 0), |j, child_poly| {
            if j == 0 {
                build::farkas_leaf(child_poly)
            } else {
                chain(child_poly, i + 1, n, target)
            }
        })
    }

    let root = chain(&system, 0, n, &sum_target)?;
    let validity_tree = BCTree {
        context: EmbeddingContext::new(n)?,
        system: system.clone(),
        goal: Goal::Validity { target: sum_target.clone() },
        root,
    };

    let mut certificates = vec![validity_tree];
    let mut claimed_sizes = vec![Claim {
        goal: Goal::Validity { target: sum_target },
        size: 2 * n as u64 + 1,
    }];
    for (source, facet) in system.rows.iter().zip(&hull_target.rows) {
        certificates.push(facet_validity_tree(&system, source, facet)?);
        claimed_sizes.push(Claim { goal: Goal::Validity { target: facet.clone() }, size: 3 });
    }

    let bundle = InstanceBundle {
        name: format!("simplex_n{n}"),
        system,
        hull_target,
        certificates,
        claimed_sizes,
    };
    bundle.verify()?;
    Ok(bundle)
}

fn cross(o: &RVec, a: &RVec, b: &RVec) -> Rational {
    let (ax, ay) = (a.get(0) - o.get(0), a.get(1) - o.get(1));
    let (bx, by) = (b.get(0) - o.get(0), b.get(1) - o.get(1));
    &ax * &by - &ay * &bx
}

/// Convex hull of 2-D points, counterclockwise, by the monotone chain;
/// collinear boundary points are dropped.
fn hull2d(points: &[RVec]) -> Vec<RVec> {
    let mut pts: Vec<RVec> = points.to_vec();
    pts.sort_by(|a, b| a.entries().cmp(b.entries()));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<RVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Facet rows of a counterclockwise 2-D polygon, coprime-normalized, one
/// per edge in traversal order.
fn polygon_facets(ccw: &[RVec]) -> Result<Vec<Halfspace>> {
    let k = ccw.len();
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let v = &ccw[i];
        let w = &ccw[(i + 1) % k];
        // outward normal of a CCW edge: rotate the direction clockwise
        let normal = RVec::new(vec![w.get(1) - v.get(1), v.get(0) - w.get(0)]);
        let rhs = normal.dot(v);
        rows.push(Halfspace::new(normal, rhs).coprime_normalize()?);
    }
    Ok(rows)
}

/// Embeds a 2-D halfspace into `n` dimensions with zero coefficients on the
/// lifted coordinates.
fn lift_halfspace(h: &Halfspace, n: usize) -> Halfspace {
    let mut e: Vec<Rational> = h.normal.entries().to_vec();
    e.resize(n, Rational::zero());
    Halfspace::new(RVec::new(e), h.rhs.clone())
}

/// The lifted family: a 2-D integral polygon `B` (vertices in clockwise
/// convex position) is extruded to the prism `B × [0,1]^{n−2}`, and one
/// exterior point per facet (the facet midpoint pushed outward by half the
/// smallest slack ratio, lifted at height (1/2,…,1/2)) is added to the
/// hull. The integer hull of the result is the prism itself, and a single
/// variable branch on the third coordinate certifies it: size 3 no matter
/// how many facets the prism has.
pub fn gen_lifted(base: &[RVec], n: usize) -> Result<InstanceBundle> {
    if n < 3 {
        return Err(Error::InvalidArgument("n must be at least 3".into()));
    }
    if base.len() < 3 {
        return Err(Error::InvalidArgument("base polygon needs at least 3 vertices".into()));
    }
    let convex_err =
        || Error::InvalidArgument("base not in convex position (clockwise, integral)".into());
    for v in base {
        if v.dim() != 2 || !v.is_integral() {
            return Err(convex_err());
        }
    }
    let k = base.len();
    for i in 0..k {
        let c = cross(&base[i], &base[(i + 1) % k], &base[(i + 2) % k]);
        if !c.is_negative() {
            return Err(convex_err());
        }
    }

    // Base facets in clockwise edge order.
    let base_facets: Vec<Halfspace> = {
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let v = &base[i];
            let w = &base[(i + 1) % k];
            // outward normal of a clockwise edge: rotate counterclockwise
            let normal = RVec::new(vec![v.get(1) - w.get(1), w.get(0) - v.get(0)]);
            let rhs = normal.dot(v);
            rows.push(Halfspace::new(normal, rhs).coprime_normalize()?);
        }
        rows
    };

    // One exterior point per facet: midpoint pushed outward far enough to
    // violate its own facet but no other.
    let half = Rational::new(1, 2)?;
    let mut pushed: Vec<RVec> = Vec::with_capacity(k);
    for (j, facet) in base_facets.iter().enumerate() {
        let mid = base[j].add(&base[(j + 1) % k]).scale(&half);
        let mut t = Rational::one();
        for (i, other) in base_facets.iter().enumerate() {
            if i == j {
                continue;
            }
            let align = other.normal.dot(&facet.normal);
            if align.is_positive() {
                t = t.min(&other.slack(&mid) / &align);
            }
        }
        pushed.push(mid.add(&facet.normal.scale(&(&t * &half))));
    }

    // Rows of the lifted body: the expanded polygon's prism facets, the
    // cube bounds, and the tent facets joining each exterior point to the
    // cube sides.
    let mut expanded_points = base.to_vec();
    expanded_points.extend(pushed.iter().cloned());
    let expanded = hull2d(&expanded_points);
    let mut rows: Vec<Halfspace> = polygon_facets(&expanded)?
        .iter()
        .map(|h| lift_halfspace(h, n))
        .collect();
    for i in 2..n {
        rows.push(Halfspace::new(RVec::unit(n, i), Rational::one()));
        rows.push(Halfspace::new(RVec::unit(n, i).neg(), Rational::zero()));
    }
    for (j, facet) in base_facets.iter().enumerate() {
        let excess = &facet.normal.dot(&pushed[j]) - &facet.rhs;
        debug_assert!(excess.is_positive());
        let two_excess = &excess + &excess;
        for i in 2..n {
            // aⱼ·x − bⱼ ≤ 2sⱼ·xᵢ and aⱼ·x − bⱼ ≤ 2sⱼ·(1−xᵢ)
            let mut lo = lift_halfspace(facet, n);
            lo.normal.set(i, -two_excess.clone());
            let mut hi = lift_halfspace(facet, n);
            hi.normal.set(i, two_excess.clone());
            hi.rhs = &hi.rhs + &two_excess;
            rows.push(lo);
            rows.push(hi);
        }
    }
    let system = Polyhedron::new(n, rows)?;

    // Sanity: the system holds all intended vertices.
    if cfg!(debug_assertions) {
        let mut verts: Vec<RVec> = Vec::new();
        for v in base {
            for mask in 0..(1u32 << (n - 2)) {
                let mut e: Vec<Rational> = v.entries().to_vec();
                for i in 0..(n - 2) {
                    e.push(if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() });
                }
                verts.push(RVec::new(e));
            }
        }
        for p in &pushed {
            let mut e: Vec<Rational> = p.entries().to_vec();
            e.resize(n, half.clone());
            verts.push(RVec::new(e));
        }
        for v in &verts {
            debug_assert!(system.contains(v), "lifted vertex {v} escapes the system");
        }
    }

    let mut target_rows: Vec<Halfspace> =
        base_facets.iter().map(|h| lift_halfspace(h, n)).collect();
    for i in 2..n {
        target_rows.push(Halfspace::new(RVec::unit(n, i), Rational::one()));
        target_rows.push(Halfspace::new(RVec::unit(n, i).neg(), Rational::zero()));
    }
    let hull_target = Polyhedron::new(n, target_rows)?;

    let root = build::branch_node(&system, Disjunction::variable(2, 0), |_, poly| {
        build::dominance_leaf(poly, &hull_target.rows)
    })?;
    let hull_tree = BCTree {
        context: EmbeddingContext::new(n)?,
        system: system.clone(),
        goal: Goal::Hull { target: hull_target.clone() },
        root,
    };

    let bundle = InstanceBundle {
        name: format!("lifted_f{k}_n{n}"),
        system,
        hull_target: hull_target.clone(),
        certificates: vec![hull_tree],
        claimed_sizes: vec![Claim { goal: Goal::Hull { target: hull_target }, size: 3 }],
    };
    bundle.verify()?;
    Ok(bundle)
}

/// An 8-vertex integral polygon in clockwise convex position: the square
/// `[0,3]²` with its corners cut.
pub fn lattice_octagon() -> Vec<RVec> {
    [[1, 3], [2, 3], [3, 2], [3, 1], [2, 0], [1, 0], [0, 1], [0, 2]]
        .iter()
        .map(|c| RVec::from_ints(c))
        .collect()
}

/// The unit square, clockwise.
pub fn lattice_square() -> Vec<RVec> {
    [[0, 0], [0, 1], [1, 1], [1, 0]].iter().map(|c| RVec::from_ints(c)).collect()
}

/// A critical family for the lattice: for each vertex `v` of `{0,1}ⁿ`, the
/// polytope `conv({0,1}ⁿ \ {v})`: the cube with the corner `v` cut off by
/// `(2v−1)·x ≤ |v|₁ − 1`. The full intersection contains no lattice point,
/// while dropping any one member readmits its excluded vertex.
pub fn gen_critical_family(n: usize) -> Result<Vec<Polyhedron>> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidArgument("critical family is generated for 1 ≤ n ≤ 4".into()));
    }
    let mut members = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let cube = Polyhedron::bounding_box(n, int(0), int(1));
        let mut normal = Vec::with_capacity(n);
        let mut ones = 0i64;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                ones += 1;
                normal.push(Rational::one());
            } else {
                normal.push(-Rational::one());
            }
        }
        let cut = Halfspace::new(RVec::new(normal), int(ones - 1));
        members.push(cube.intersect_halfspace(&cut));
    }
    Ok(members)
}

/// The infeasibility instance induced by the critical family: all members'
/// rows concatenated. The full variable-branch tree over `{xᵢ ≤ 0, xᵢ ≥ 1}`
/// certifies it with `2^(n+1) − 1` nodes.
pub fn gen_critical_instance(n: usize) -> Result<InstanceBundle> {
    let members = gen_critical_family(n)?;
    let mut rows = Vec::new();
    for m in &members {
        rows.extend(m.rows.iter().cloned());
    }
    let system = Polyhedron::new(n, rows)?;

    fn descend(poly: &Polyhedron, i: usize, n: usize) -> Result<BCNode> {
        if i == n {
            return build::farkas_leaf(poly);
        }
        build::branch_node(poly, Disjunction::variable(i, 0), |_, child| {
            descend(child, i + 1, n)
        })
    }
    let root = descend(&system, 0, n)?;
    let tree = BCTree {
        context: EmbeddingContext::new(n)?,
        system: system.clone(),
        goal: Goal::Infeasibility,
        root,
    };
    let size = tree_size(&tree);
    let bundle = InstanceBundle {
        name: format!("critical_n{n}"),
        system,
        hull_target: Polyhedron::empty(n),
        certificates: vec![tree],
        claimed_sizes: vec![Claim { goal: Goal::Infeasibility, size }],
    };
    bundle.verify()?;
    Ok(bundle)
}

/// The Helly lower bound `t / (h′ − 1)` on the size of a branch-and-cut
/// infeasibility certificate for a critical family of `t` members over a
/// nontrivial relaxation in a system with Helly number `h′`.
pub fn helly_bound(t: u64, h_prime: u64) -> Result<Rational> {
    if h_prime < 2 {
        return Err(Error::InvalidArgument("Helly number must be at least 2".into()));
    }
    Rational::new(BigInt::from(t), BigInt::from(h_prime - 1))
}

/// The Helly number `2^{n₁}·(n₂+1)` of the mixed lattice `ℤ^{n₁} × ℝ^{n₂}`:
/// `2ⁿ` for the pure lattice, `n+1` for pure convex sets.
pub fn helly_number_mixed(n1: u32, n2: u64) -> Result<BigInt> {
    if n1 == 0 && n2 == 0 {
        return Err(Error::InvalidArgument("n1 + n2 must be at least 1".into()));
    }
    Ok((BigInt::from(1) << n1) * BigInt::from(n2 + 1))
}

/// One membership witness per hull-target facet: the centroid of the
/// facet's vertices pushed just outside the target along the facet normal,
/// staying strictly inside the system and violating no other target row.
pub fn membership_witnesses(system: &Polyhedron, hull_target: &Polyhedron) -> Result<Vec<RVec>> {
    let verts = vertices(hull_target)?;
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let half = Rational::new(1, 2)?;
    let mut out = Vec::with_capacity(hull_target.num_rows());
    for (j, facet) in hull_target.rows.iter().enumerate() {
        let on_facet: Vec<&RVec> =
            verts.iter().filter(|v| facet.slack(v).is_zero()).collect();
        if on_facet.is_empty() {
            continue;
        }
        let count = Rational::from_int(on_facet.len() as i64);
        let mut center = RVec::zero(hull_target.dim);
        for v in &on_facet {
            center = center.add(v);
        }
        let center = center.scale(&count.recip()?);
        let mut t = Rational::one();
        let others = system
            .rows
            .iter()
            .chain(hull_target.rows.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, r)| r));
        for row in others {
            let align = row.normal.dot(&facet.normal);
            if align.is_positive() {
                let slack = row.slack(&center);
                if !slack.is_positive() {
                    t = Rational::zero();
                    break;
                }
                t = t.min(&slack / &align);
            }
        }
        if t.is_positive() {
            out.push(center.add(&facet.normal.scale(&(&t * &half))));
        }
    }
    Ok(out)
}

/// Converts a validity tree for a halfspace into a membership certificate
/// for a point the halfspace cuts off: the leaf evidence is already exactly
/// the separator dominance the membership checker replays.
pub fn membership_from_validity(tree: &BCTree, point: RVec) -> Result<BCTree> {
    let Goal::Validity { target } = &tree.goal else {
        return Err(Error::InvalidArgument("expected a validity tree".into()));
    };
    Ok(BCTree {
        context: tree.context,
        system: tree.system.clone(),
        goal: Goal::Membership { point, separator: target.clone() },
        root: tree.root.clone(),
    })
}

const INSTANCE_FILE: &str = "instance.json";
const CLAIMS_FILE: &str = "claims.json";

#[derive(Serialize, Deserialize)]
struct InstanceHeader {
    name: String,
    system: Polyhedron,
    hull_target: Polyhedron,
}

fn cert_file_name(idx: usize, goal: &Goal) -> String {
    format!("cert_{idx:02}_{}.json", goal.kind_name())
}

/// Writes `instance.json`, `claims.json`, and one certificate document per
/// claim into `dir` (created if needed), with stable names and key order.
pub fn write_bundle(bundle: &InstanceBundle, dir: &Path) -> Result<()> {
    bundle.verify()?;
    std::fs::create_dir_all(dir)?;
    let header = InstanceHeader {
        name: bundle.name.clone(),
        system: bundle.system.clone(),
        hull_target: bundle.hull_target.clone(),
    };
    std::fs::write(
        dir.join(INSTANCE_FILE),
        serde_json::to_string_pretty(&header).map_err(|e| Error::Io(e.to_string()))? + "\n",
    )?;
    std::fs::write(
        dir.join(CLAIMS_FILE),
        serde_json::to_string_pretty(&bundle.claimed_sizes)
            .map_err(|e| Error::Io(e.to_string()))?
            + "\n",
    )?;
    for (idx, tree) in bundle.certificates.iter().enumerate() {
        std::fs::write(
            dir.join(cert_file_name(idx, &tree.goal)),
            serde_json::to_string_pretty(tree).map_err(|e| Error::Io(e.to_string()))? + "\n",
        )?;
    }
    Ok(())
}

/// Reads a bundle directory written by [`write_bundle`].
pub fn read_bundle(dir: &Path) -> Result<InstanceBundle> {
    let header: InstanceHeader = read_json(&dir.join(INSTANCE_FILE))?;
    let claims: Vec<Claim> = read_json(&dir.join(CLAIMS_FILE))?;
    let mut certificates = Vec::with_capacity(claims.len());
    for (idx, claim) in claims.iter().enumerate() {
        certificates.push(read_json(&dir.join(cert_file_name(idx, &claim.goal)))?);
    }
    Ok(InstanceBundle {
        name: header.name,
        system: header.system,
        hull_target: header.hull_target,
        certificates,
        claimed_sizes: claims,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
