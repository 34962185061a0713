//! Shared test oracles, independent of the library's solution paths.
#![allow(dead_code)]

use hellycert::geometry::{Halfspace, Polyhedron};
use hellycert::linalg;
use hellycert::rational::{RVec, Rational};

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

/// Brute-force double-description vertex enumeration by incremental
/// halfspace clipping, for polytopes known to fit in `[-radius, radius]ⁿ`.
///
/// Starts from the box corners and inserts one row at a time: surviving
/// vertices keep their place, and every edge from a surviving vertex to a
/// cut vertex contributes its crossing point. Edges are recognized exactly:
/// two vertices are adjacent iff their common active constraints have rank
/// `n−1`. Everything is rational arithmetic; no simplex, no basis
/// enumeration.
pub fn dd_vertices(p: &Polyhedron, radius: i64) -> Vec<RVec> {
    let n = p.dim;
    let mut constraints: Vec<Halfspace> = Vec::new();
    for i in 0..n {
        constraints.push(Halfspace::new(RVec::unit(n, i), Rational::from_int(radius)));
        constraints.push(Halfspace::new(RVec::unit(n, i).neg(), Rational::from_int(radius)));
    }
    let mut verts: Vec<RVec> = Vec::new();
    for mask in 0..(1u32 << n) {
        let coords: Vec<Rational> = (0..n)
            .map(|i| Rational::from_int(if mask >> i & 1 == 1 { radius } else { -radius }))
            .collect();
        verts.push(RVec::new(coords));
    }

    for row in &p.rows {
        let (kept, cut): (Vec<RVec>, Vec<RVec>) =
            verts.into_iter().partition(|v| row.contains(v));
        if cut.is_empty() {
            verts = kept;
            constraints.push(row.clone());
            continue;
        }
        if kept.is_empty() {
            return Vec::new();
        }
        let mut next = kept.clone();
        for u in &kept {
            for w in &cut {
                if !is_edge(&constraints, n, u, w) {
                    continue;
                }
                // crossing point of the segment [u, w] with the hyperplane
                let fu = row.slack(u);
                let fw = row.slack(w); // negative
                let t = &fu / &(&fu - &fw);
                let point = u.add(&w.sub(u).scale(&t));
                debug_assert!(row.slack(&point).is_zero());
                if !next.contains(&point) {
                    next.push(point);
                }
            }
        }
        verts = next;
        constraints.push(row.clone());
    }
    verts.sort_by(|a, b| a.entries().cmp(b.entries()));
    verts
}

fn is_edge(constraints: &[Halfspace], n: usize, u: &RVec, w: &RVec) -> bool {
    let common: Vec<RVec> = constraints
        .iter()
        .filter(|c| c.slack(u).is_zero() && c.slack(w).is_zero())
        .map(|c| c.normal.clone())
        .collect();
    linalg::rank(&common) == n - 1
}

/// A small corpus of bounded polyhedra in dimensions 1..=3, including empty
/// and degenerate members.
pub fn corpus() -> Vec<(Polyhedron, i64)> {
    let mut out: Vec<(Polyhedron, i64)> = Vec::new();
    // boxes
    out.push((Polyhedron::bounding_box(1, r(-1, 2), r(7, 2)), 8));
    out.push((Polyhedron::bounding_box(2, r(-1, 2), r(7, 2)), 8));
    out.push((Polyhedron::bounding_box(2, r(0, 1), r(1, 1)), 4));
    out.push((Polyhedron::bounding_box(3, r(0, 1), r(2, 1)), 4));
    // simplex with fractional bounds
    out.push((
        Polyhedron::new(
            2,
            vec![
                Halfspace::from_ints(&[1, 1], 1),
                Halfspace::from_ints(&[-1, 0], 0),
                Halfspace::from_ints(&[0, -1], 0),
            ],
        )
        .unwrap(),
        4,
    ));
    out.push((
        Polyhedron::new(
            3,
            vec![
                Halfspace::from_ints(&[1, 1, 1], 2),
                Halfspace::from_ints(&[-1, 0, 0], 0),
                Halfspace::from_ints(&[0, -1, 0], 0),
                Halfspace::from_ints(&[0, 0, -1], 0),
            ],
        )
        .unwrap(),
        4,
    ));
    // empty: contradictory bounds
    out.push((
        Polyhedron::new(
            1,
            vec![Halfspace::from_ints(&[-1], -1), Halfspace::from_ints(&[1], 0)],
        )
        .unwrap(),
        4,
    ));
    // lower-dimensional: a segment in the plane
    out.push((
        Polyhedron::new(
            2,
            vec![
                Halfspace::from_ints(&[1, 1], 1),
                Halfspace::from_ints(&[-1, -1], -1),
                Halfspace::from_ints(&[-1, 0], 0),
                Halfspace::from_ints(&[1, 0], 1),
            ],
        )
        .unwrap(),
        4,
    ));
    // octagon-ish polygon with a diagonal cut
    out.push((
        Polyhedron::new(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], 3),
                Halfspace::from_ints(&[-1, 0], 0),
                Halfspace::from_ints(&[0, 1], 3),
                Halfspace::from_ints(&[0, -1], 0),
                Halfspace::from_ints(&[1, 1], 5),
                Halfspace::from_ints(&[2, -1], 4),
            ],
        )
        .unwrap(),
        8,
    ));
    // redundant rows on a triangle
    out.push((
        Polyhedron::new(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], 2),
                Halfspace::from_ints(&[1, 0], 5),
                Halfspace::from_ints(&[-1, 1], 0),
                Halfspace::from_ints(&[0, -1], 0),
                Halfspace::new(RVec::from_ints(&[2, 0]), r(9, 2)),
            ],
        )
        .unwrap(),
        8,
    ));
    out
}
