//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime (visible with `--nocapture`). Every tolerance is
//! exact; every expected number is pinned in the assertions.

mod common;

use std::time::{Duration, Instant};

use common::{dd_vertices, r};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hellycert::bctree::{
    check, tree_size, tree_stats, BCNode, BCTree, Disjunction, Goal, NodeKind,
};
use hellycert::geometry::{Halfspace, Polyhedron};
use hellycert::instances::{
    gen_box, gen_critical_family, gen_critical_instance, gen_lifted, gen_simplex_validity,
    helly_bound, lattice_octagon, lattice_square, membership_witnesses, InstanceBundle,
};
use hellycert::lp::{extract_farkas, FarkasOutcome};
use hellycert::rational::{RVec, Rational};
use hellycert::search::{
    complexity_report, family_for, min_tree, nontrivial_facets, ComplexityReport, MoveFamily,
    SearchOutcome,
};
use hellycert::splitcover::{covers, hull_lb_from_cover, min_split_cover, CoverOutcome, GSplit, Region};

fn pass(criterion: u32, elapsed: Duration, budget: Duration, detail: &str) {
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!(
        "ACCEPTANCE {criterion}: PASS ({:.2?} of {:.0?} budget) :: {detail}",
        elapsed, budget
    );
}

#[test]
fn criterion_1_box_hull_closed_form() {
    let start = Instant::now();
    for n in 1..=4usize {
        let bundle = gen_box(n).unwrap();
        let hull = &bundle.certificates[0];
        assert_eq!(tree_size(hull), 4 * n as u64 + 1, "hull size at n={n}");
        let v = check(hull);
        assert!(v.accepted, "hull certificate rejected at n={n}: {}", v.reason);
        assert_eq!(bundle.certificates.len(), 2 * n + 1);
        for cert in &bundle.certificates[1..] {
            assert_eq!(tree_size(cert), 3, "facet validity size at n={n}");
            let v = check(cert);
            assert!(v.accepted, "facet certificate rejected at n={n}: {}", v.reason);
        }
    }
    pass(1, start.elapsed(), Duration::from_secs(5), "box hull 4n+1, facets 3, n=1..4");
}

#[test]
fn criterion_2_simplex_validity_closed_form() {
    let start = Instant::now();
    for n in 1..=4usize {
        let bundle = gen_simplex_validity(n).unwrap();
        let validity = &bundle.certificates[0];
        assert_eq!(tree_size(validity), 2 * n as u64 + 1, "validity size at n={n}");
        let v = check(validity);
        assert!(v.accepted, "validity certificate rejected at n={n}: {}", v.reason);
        let Goal::Validity { target } = &validity.goal else { panic!("wrong goal kind") };
        assert_eq!(target.normal, RVec::new(vec![-Rational::one(); n]));
        assert_eq!(target.rhs, Rational::from_int(-(n as i64)));
    }
    pass(2, start.elapsed(), Duration::from_secs(5), "simplex validity 2n+1, n=1..4");
}

#[test]
fn criterion_3_lifted_constant_hull() {
    let start = Instant::now();
    let base = lattice_octagon();
    assert_eq!(base.len(), 8);
    for n in 3..=5usize {
        let bundle = gen_lifted(&base, n).unwrap();
        let hull = &bundle.certificates[0];
        assert_eq!(tree_size(hull), 3, "lifted hull size at n={n}");
        let v = check(hull);
        assert!(v.accepted, "lifted hull rejected at n={n}: {}", v.reason);
        assert_eq!(bundle.hull_target.num_rows(), 8 + 2 * (n - 2));
    }
    pass(3, start.elapsed(), Duration::from_secs(10), "lifted hull size 3, 8-vertex base, n=3..5");
}

fn box_region(n: usize) -> Region {
    Region::new(
        Polyhedron::bounding_box(n, r(-1, 2), r(2 * n as i64 * 2 + 3, 2)),
        Polyhedron::bounding_box(n, r(0, 1), r(2 * n as i64 + 1, 1)),
    )
    .unwrap()
}

fn axis_family(n: usize, beta_min: i64, beta_max: i64) -> Vec<GSplit> {
    (0..n)
        .flat_map(|i| (beta_min..=beta_max).map(move |b| (i, b)))
        .map(|(i, b)| GSplit::axis(n, i, Rational::from_int(b)))
        .collect()
}

fn constructive_cover(n: usize) -> Vec<GSplit> {
    (0..n)
        .flat_map(|i| [(i, -1i64), (i, 2 * n as i64 + 1)])
        .map(|(i, b)| GSplit::axis(n, i, Rational::from_int(b)))
        .collect()
}

#[test]
fn criterion_4_split_cover_numbers() {
    let start = Instant::now();
    for n in 1..=2usize {
        let family = axis_family(n, -2, 2 * n as i64 + 1 + 2);
        let cover = min_split_cover(&box_region(n), &family).unwrap();
        assert_eq!(cover, Some(2 * n), "split cover number at n={n}");
    }
    for n in 1..=4usize {
        let outcome = covers(&box_region(n), &constructive_cover(n)).unwrap();
        assert_eq!(outcome, CoverOutcome::Covered, "constructive 2n-cover at n={n}");
    }
    pass(4, start.elapsed(), Duration::from_secs(60), "split cover 2n at n=1,2; 2n-cover verifies to n=4");
}

#[test]
fn criterion_5_lower_bound_matching() {
    let start = Instant::now();
    for n in 1..=2usize {
        let family = axis_family(n, -2, 2 * n as i64 + 3);
        let ell = min_split_cover(&box_region(n), &family).unwrap().unwrap();
        let bundle = gen_box(n).unwrap();
        let generated = tree_size(&bundle.certificates[0]);
        assert_eq!(hull_lb_from_cover(ell as u64), generated, "2ℓ+1 matches at n={n}");
        assert_eq!(generated, 4 * n as u64 + 1);
    }
    // Exhaustive confirmation at n = 1: no smaller hull certificate exists
    // within the family.
    let bundle = gen_box(1).unwrap();
    let family = family_for(&bundle.system, &bundle.hull_target.rows, 9).unwrap();
    let goal = Goal::Hull { target: bundle.hull_target.clone() };
    match min_tree(&bundle.system, &goal, &family).unwrap() {
        SearchOutcome::Found(size, tree) => {
            assert_eq!(size, 5, "minimal hull size at n=1");
            assert!(check(&tree).accepted);
        }
        outcome => panic!("search must find the size-5 chain: {outcome:?}"),
    }
    pass(5, start.elapsed(), Duration::from_secs(300), "2ℓ+1 = 4n+1 at n=1,2; minimality at n=1");
}

#[test]
fn criterion_6_helly_lower_bound() {
    let start = Instant::now();
    let members = gen_critical_family(2).unwrap();
    assert_eq!(members.len(), 4);
    let mut rows = Vec::new();
    for m in &members {
        rows.extend(m.rows.iter().cloned());
    }
    let system = Polyhedron::new(2, rows).unwrap();
    // nontrivial relaxation: the intersection of the relaxations is nonempty
    match extract_farkas(&system).unwrap() {
        FarkasOutcome::Feasible(x) => assert!(system.contains(&x)),
        FarkasOutcome::Infeasible(_) => panic!("the relaxation must be nontrivial"),
    }
    let bound = helly_bound(4, 3).unwrap();
    assert_eq!(bound.to_string(), "2");

    // Exhaustive search over the variable-disjunction family.
    let family = MoveFamily {
        disjunctions: (0..2).flat_map(|i| (-1..=1).map(move |b| Disjunction::variable(i, b))).collect(),
        cuts: Vec::new(),
        depth_cap: 8,
        size_cap: 8,
    };
    match min_tree(&system, &Goal::Infeasibility, &family).unwrap() {
        SearchOutcome::Found(size, tree) => {
            let stats = tree_stats(&tree);
            assert!(size > 1, "no single-leaf tree exists, so every tree has at least 2 leaves");
            assert_eq!(size, 3);
            assert_eq!(stats.leaves, 2);
            assert!(Rational::from_int(stats.leaves as i64) >= bound);
        }
        SearchOutcome::CapExceeded => panic!("a 3-node tree exists"),
    }

    // The 2ⁿ/n lower-bound values print exactly.
    let printed: Vec<String> = (2..=4u32)
        .map(|n| helly_bound(1 << n, n as u64 + 1).unwrap().to_string())
        .collect();
    assert_eq!(printed, ["2", "8/3", "4"]);
    pass(6, start.elapsed(), Duration::from_secs(60), "critical family needs ≥ 2 leaves; bounds print 2, 8/3, 4");
}

struct ChainChecks {
    name: String,
    dim: u64,
    facet_count: u64,
    nontrivial_count: u64,
    mixed: ComplexityReport,
    pure: ComplexityReport,
}

fn reverse_of(report: &ComplexityReport, target: &Halfspace) -> u64 {
    report
        .reverse
        .iter()
        .find(|(h, _)| h == target)
        .map(|(_, s)| *s)
        .expect("reverse entry for every validity target")
}

fn measure(bundle: &InstanceBundle, size_cap: u64) -> ChainChecks {
    let mut targets = bundle.hull_target.rows.clone();
    for claim in &bundle.claimed_sizes {
        if let Goal::Validity { target } = &claim.goal {
            if !targets.contains(target) {
                targets.push(target.clone());
            }
        }
    }
    let family = family_for(&bundle.system, &targets, size_cap).unwrap();
    let witnesses = membership_witnesses(&bundle.system, &bundle.hull_target).unwrap();
    let mixed = complexity_report(bundle, &family, &witnesses).unwrap();
    let pure = complexity_report(bundle, &family.pure_cuts(), &witnesses).unwrap();
    ChainChecks {
        name: bundle.name.clone(),
        dim: bundle.system.dim as u64,
        facet_count: bundle
            .hull_target
            .rows
            .iter()
            .filter(|h| !h.is_trivial())
            .count() as u64,
        nontrivial_count: nontrivial_facets(&bundle.system, &bundle.hull_target)
            .unwrap()
            .len() as u64,
        mixed,
        pure,
    }
}

#[test]
fn criterion_7_inequality_chains() {
    let start = Instant::now();
    let corpus: Vec<InstanceBundle> = vec![
        gen_box(1).unwrap(),
        gen_box(2).unwrap(),
        gen_simplex_validity(1).unwrap(),
        gen_simplex_validity(2).unwrap(),
    ];
    for bundle in &corpus {
        let c = measure(bundle, 9);
        let n = c.dim;
        for report in [&c.mixed, &c.pure] {
            assert!(!report.cap_exceeded, "{}: search cap exceeded", c.name);
            for (_, tree) in &report.trees {
                assert!(check(tree).accepted, "{}: stored witness tree rejected", c.name);
            }
        }

        // Branch-and-cut chains.
        let facet = c.mixed.facet.expect("facet complexity");
        let hull = c.mixed.hull.expect("hull complexity");
        let membership = c.mixed.membership.expect("membership complexity");
        let mut max_validity = 0;
        for (target, validity) in &c.mixed.validity {
            let reverse = reverse_of(&c.mixed, target);
            assert!(reverse <= *validity, "{}: reverse ≤ validity", c.name);
            assert!(*validity <= reverse + 2, "{}: validity ≤ reverse + 2", c.name);
            assert!(*validity <= n * (facet + 1), "{}: validity ≤ n(facet+1)", c.name);
            max_validity = max_validity.max(*validity);
        }
        assert!(facet <= max_validity, "{}: facet ≤ validity", c.name);
        assert!(facet <= hull, "{}: facet ≤ hull", c.name);
        assert!(hull <= c.facet_count * (facet + 1), "{}: hull ≤ f(facet+1)", c.name);
        assert!(membership <= facet, "{}: membership ≤ facet", c.name);
        assert!(facet <= membership + 2, "{}: facet ≤ membership + 2", c.name);

        // Pure cutting plane chains.
        let facet_p = c.pure.facet.expect("pure facet complexity");
        let hull_p = c.pure.hull.expect("pure hull complexity");
        let membership_p = c.pure.membership.expect("pure membership complexity");
        for (_, validity) in &c.pure.validity {
            assert!(
                *validity <= n * (facet_p - 1) + 1,
                "{}: pure validity ≤ n(facet−1)+1",
                c.name
            );
        }
        assert!(facet_p.max(c.nontrivial_count) <= hull_p, "{}: max(facet, f) ≤ pure hull", c.name);
        assert!(
            hull_p <= c.nontrivial_count * (facet_p - 1) + 1,
            "{}: pure hull ≤ f(facet−1)+1",
            c.name
        );
        assert!(membership_p <= facet_p, "{}: pure membership ≤ facet", c.name);
        assert!(facet_p <= membership_p + 2, "{}: pure facet ≤ membership + 2", c.name);

        // Exact oracle values where the closed forms pin them.
        let sum_target = Halfspace::new(
            RVec::new(vec![-Rational::one(); n as usize]),
            Rational::from_int(-(n as i64)),
        );
        let validity_of = |report: &ComplexityReport, t: &Halfspace| {
            report.validity.iter().find(|(h, _)| h == t).map(|(_, s)| *s)
        };
        match c.name.as_str() {
            "box_n1" => {
                assert_eq!((facet, hull, membership), (3, 5, 3));
                assert_eq!((facet_p, hull_p, membership_p), (3, 5, 3));
            }
            "box_n2" => {
                assert_eq!((facet, hull, membership), (3, 9, 3));
                assert_eq!((facet_p, hull_p), (3, 9));
            }
            "simplex_n1" => {
                assert_eq!(validity_of(&c.mixed, &sum_target), Some(3));
            }
            "simplex_n2" => {
                assert_eq!(facet, 3);
                assert_eq!(validity_of(&c.mixed, &sum_target), Some(5));
                assert_eq!(validity_of(&c.pure, &sum_target), Some(5));
            }
            other => panic!("unlabelled corpus member {other}"),
        }
    }

    // Critical family at n = 2: the hull of the empty set over the
    // concatenated relaxation; the facet-based chains are vacuous.
    let critical = gen_critical_instance(2).unwrap();
    let family = MoveFamily {
        disjunctions: (0..2).flat_map(|i| (-1..=1).map(move |b| Disjunction::variable(i, b))).collect(),
        cuts: critical.system.rows.clone(),
        depth_cap: 9,
        size_cap: 9,
    };
    let report = complexity_report(&critical, &family, &[]).unwrap();
    assert!(!report.cap_exceeded);
    assert_eq!(report.hull, Some(3), "critical n=2: empty-hull complexity");
    assert!(report.facet.is_none());

    pass(7, start.elapsed(), Duration::from_secs(600), "all sandwich chains hold on the corpus");
}

// ---------------------------------------------------------------------
// criterion 8: soundness fuzzing
// ---------------------------------------------------------------------

fn rational_delta(rng: &mut StdRng) -> Rational {
    loop {
        let v = Rational::new(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4)).unwrap();
        if !v.is_zero() {
            return v;
        }
    }
}

fn all_paths(node: &BCNode, prefix: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, child) in node.children.iter().enumerate() {
        let mut p = prefix.clone();
        p.push(i);
        all_paths(child, p, out);
    }
}

fn node_at_mut<'a>(root: &'a mut BCNode, path: &[usize]) -> &'a mut BCNode {
    let mut node = root;
    for &i in path {
        node = &mut node.children[i];
    }
    node
}

fn mutate_multipliers(m: &mut Vec<(usize, Rational)>, rng: &mut StdRng) -> bool {
    if m.is_empty() {
        return false;
    }
    let k = rng.gen_range(0..m.len());
    match rng.gen_range(0..5) {
        0 => m[k].1 = &m[k].1 + &rational_delta(rng),
        1 => m[k].1 = -m[k].1.clone(),
        2 => {
            m.remove(k);
        }
        3 => m[k].0 = m[k].0.wrapping_add(rng.gen_range(1..5)),
        _ => {
            let dup = m[k].clone();
            m.push(dup);
        }
    }
    true
}

/// One random mutation: multiplier edits, label edits, or structure edits.
fn mutate(tree: &BCTree, rng: &mut StdRng) -> BCTree {
    let mut t = tree.clone();
    for _ in 0..64 {
        let mut paths = Vec::new();
        all_paths(&t.root, Vec::new(), &mut paths);
        let path = paths[rng.gen_range(0..paths.len())].clone();
        let node = node_at_mut(&mut t.root, &path);
        let changed = match rng.gen_range(0..12) {
            // multiplier edits
            0 => match &mut node.kind {
                NodeKind::LeafFarkas { certificate } => {
                    mutate_multipliers(&mut certificate.multipliers, rng)
                }
                NodeKind::LeafDominance { certificates } if !certificates.is_empty() => {
                    let k = rng.gen_range(0..certificates.len());
                    mutate_multipliers(&mut certificates[k].multipliers, rng)
                }
                NodeKind::Cut { step } => mutate_multipliers(&mut step.certifier.multipliers, rng),
                _ => false,
            },
            // label edits
            1 => match &mut node.kind {
                NodeKind::Branch { disjunction } => {
                    match disjunction {
                        Disjunction::Split { beta, .. } | Disjunction::Variable { beta, .. } => {
                            *beta = if rng.gen_bool(0.5) {
                                &*beta + &Rational::one()
                            } else {
                                &*beta + &r(1, 2)
                            };
                        }
                        Disjunction::General { .. } => return t,
                    }
                    true
                }
                _ => false,
            },
            2 => match &mut node.kind {
                NodeKind::Cut { step } => {
                    step.cut.rhs = &step.cut.rhs + &Rational::one();
                    true
                }
                _ => false,
            },
            3 => match &mut node.kind {
                NodeKind::Cut { step } => {
                    step.source.rhs = &step.source.rhs - &Rational::one();
                    true
                }
                _ => false,
            },
            4 => {
                if let Some(h) = node.add.first_mut() {
                    h.rhs = &h.rhs + &rational_delta(rng);
                    true
                } else {
                    false
                }
            }
            // structure edits
            5 => {
                if node.children.len() >= 2 {
                    node.children.swap(0, 1);
                    true
                } else {
                    false
                }
            }
            6 => {
                if node.children.is_empty() {
                    false
                } else {
                    node.children.pop();
                    true
                }
            }
            7 => {
                if node.children.is_empty() {
                    false
                } else {
                    let dup = node.children.last().unwrap().clone();
                    node.children.push(dup);
                    true
                }
            }
            8 => {
                if matches!(node.kind, NodeKind::LeafEmpty) {
                    false
                } else if node.children.is_empty() {
                    node.kind = NodeKind::LeafEmpty;
                    true
                } else {
                    node.kind = NodeKind::LeafEmpty;
                    node.children.clear();
                    true
                }
            }
            9 => {
                if node.add.is_empty() {
                    false
                } else {
                    node.add.clear();
                    true
                }
            }
            // goal edits
            10 => {
                match &mut t.goal {
                    Goal::Hull { target } => {
                        let k = rng.gen_range(0..target.rows.len());
                        target.rows[k].rhs = &target.rows[k].rhs - &Rational::one();
                    }
                    Goal::Validity { target } => {
                        target.rhs = &target.rhs - &Rational::one();
                    }
                    Goal::Membership { point, separator } => {
                        if rng.gen_bool(0.5) {
                            let k = rng.gen_range(0..point.dim());
                            let v = point.get(k) + &rational_delta(rng);
                            point.set(k, v);
                        } else {
                            separator.rhs = &separator.rhs + &Rational::one();
                        }
                    }
                    Goal::Infeasibility => return t,
                }
                true
            }
            // root label edit
            _ => {
                t.root.add.push(Halfspace::from_ints(
                    &vec![0; t.system.dim][..],
                    rng.gen_range(-3..3),
                ));
                true
            }
        };
        if changed && t != *tree {
            return t;
        }
        t = tree.clone();
    }
    t
}

/// Ground-truth verification of an accepted document, independent of the
/// checker and solver: facts are established with the clipping oracle and
/// direct substitution.
fn semantically_sound(tree: &BCTree) -> bool {
    const RADIUS: i64 = 24;
    if !tree.root.add.is_empty() || tree.system.dim != tree.context.dim {
        return false;
    }
    let leaf_fact: Box<dyn Fn(&Polyhedron) -> bool> = match &tree.goal {
        Goal::Infeasibility => Box::new(|poly| dd_vertices(poly, RADIUS).is_empty()),
        Goal::Hull { target } => {
            let rows = target.rows.clone();
            Box::new(move |poly| {
                dd_vertices(poly, RADIUS)
                    .iter()
                    .all(|v| rows.iter().all(|h| h.contains(v)))
            })
        }
        Goal::Validity { target } => {
            let h = target.clone();
            Box::new(move |poly| dd_vertices(poly, RADIUS).iter().all(|v| h.contains(v)))
        }
        Goal::Membership { point, separator } => {
            if separator.contains(point) {
                return false;
            }
            let h = separator.clone();
            Box::new(move |poly| dd_vertices(poly, RADIUS).iter().all(|v| h.contains(v)))
        }
    };
    let stats = tree_stats(tree);
    if stats.nodes > 2 * stats.leaves {
        return false;
    }
    semantic_walk(&tree.root, &tree.system.with_rows(&tree.root.add), &leaf_fact)
}

fn local_tightened(h: &Halfspace) -> Option<Halfspace> {
    let n = h.coprime_normalize().ok()?;
    Some(Halfspace::new(
        n.normal.neg(),
        -Rational::from_int(n.rhs.floor_int() + 1),
    ))
}

fn semantic_walk(
    node: &BCNode,
    poly: &Polyhedron,
    leaf_fact: &dyn Fn(&Polyhedron) -> bool,
) -> bool {
    const RADIUS: i64 = 24;
    match &node.kind {
        NodeKind::Branch { disjunction } => {
            let Ok(terms) = disjunction.terms(poly.dim) else {
                return false;
            };
            if node.children.len() != terms.len() {
                return false;
            }
            node.children.iter().zip(&terms).all(|(child, term)| {
                child.add == *term
                    && semantic_walk(child, &poly.with_rows(&child.add), leaf_fact)
            })
        }
        NodeKind::Cut { step } => {
            if node.children.len() != 2 {
                return false;
            }
            // the cut must be the rounding of a source the node satisfies
            let Ok(norm) = step.source.coprime_normalize() else {
                return false;
            };
            if Halfspace::new(norm.normal, Rational::from_int(norm.rhs.floor_int())) != step.cut {
                return false;
            }
            if !dd_vertices(poly, RADIUS).iter().all(|v| step.source.contains(v)) {
                return false;
            }
            let Some(tightened) = local_tightened(&step.cut) else {
                return false;
            };
            let left = &node.children[0];
            if left.add.as_slice() != std::slice::from_ref(&tightened) || !left.children.is_empty()
            {
                return false;
            }
            // the certifier's claim: the tightened system is empty
            if !dd_vertices(&poly.with_rows(&left.add), RADIUS).is_empty() {
                return false;
            }
            let right = &node.children[1];
            if right.add.as_slice() != std::slice::from_ref(&step.cut) {
                return false;
            }
            semantic_walk(right, &poly.with_rows(&right.add), leaf_fact)
        }
        NodeKind::LeafEmpty | NodeKind::LeafFarkas { .. } | NodeKind::LeafDominance { .. } => {
            node.children.is_empty() && leaf_fact(poly)
        }
    }
}

#[test]
fn criterion_8_soundness_fuzzing() {
    let start = Instant::now();
    let mut corpus: Vec<BCTree> = Vec::new();
    for bundle in [
        gen_box(1).unwrap(),
        gen_box(2).unwrap(),
        gen_simplex_validity(2).unwrap(),
        gen_lifted(&lattice_square(), 3).unwrap(),
        gen_critical_instance(2).unwrap(),
    ] {
        corpus.extend(bundle.certificates.iter().cloned());
    }
    {
        let bundle = gen_box(1).unwrap();
        let ws = membership_witnesses(&bundle.system, &bundle.hull_target).unwrap();
        corpus.push(
            hellycert::instances::membership_from_validity(&bundle.certificates[1], ws[0].clone())
                .unwrap(),
        );
    }
    for tree in &corpus {
        assert!(check(tree).accepted, "corpus tree must start accepted");
    }

    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let mut accepted_mutants = 0u32;
    let mut rejected = 0u32;
    for trial in 0..10_000 {
        let base = &corpus[trial % corpus.len()];
        let mutant = mutate(base, &mut rng);
        if mutant == *base {
            // mutation landed on an immutable spot; treat as a no-op trial
            continue;
        }
        let verdict = check(&mutant);
        if verdict.accepted {
            accepted_mutants += 1;
            assert!(
                semantically_sound(&mutant),
                "UNSOUND ACCEPTANCE at trial {trial}: {}",
                serde_json::to_string(&mutant).unwrap()
            );
        } else {
            rejected += 1;
            assert!(!verdict.reason.is_empty());
        }
    }
    assert!(rejected > 5_000, "mutations must mostly break certificates ({rejected} rejected)");
    pass(
        8,
        start.elapsed(),
        Duration::from_secs(120),
        &format!("10000 mutations, {rejected} rejected, {accepted_mutants} accepted and re-verified, 0 unsound"),
    );
}

#[test]
fn criterion_9_tree_size_bound() {
    let start = Instant::now();
    let mut trees: Vec<BCTree> = Vec::new();
    for n in 1..=4 {
        trees.extend(gen_box(n).unwrap().certificates);
        trees.extend(gen_simplex_validity(n).unwrap().certificates);
    }
    for n in 3..=5 {
        trees.extend(gen_lifted(&lattice_octagon(), n).unwrap().certificates);
    }
    for n in 1..=3 {
        trees.extend(gen_critical_instance(n).unwrap().certificates);
    }
    // search-produced trees too
    let bundle = gen_box(1).unwrap();
    let family = family_for(&bundle.system, &bundle.hull_target.rows, 9).unwrap();
    if let SearchOutcome::Found(_, tree) =
        min_tree(&bundle.system, &Goal::Hull { target: bundle.hull_target.clone() }, &family)
            .unwrap()
    {
        trees.push(tree);
    }
    for tree in &trees {
        let v = check(tree);
        assert!(v.accepted, "{}", v.reason);
        let stats = tree_stats(tree);
        assert!(
            stats.nodes <= 2 * stats.leaves,
            "degree bound violated: {} nodes, {} leaves",
            stats.nodes,
            stats.leaves
        );
    }
    pass(9, start.elapsed(), Duration::from_secs(60), "node count ≤ 2 × leaf count across the corpus");
}
