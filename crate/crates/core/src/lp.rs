//! Exact rational linear programming over `a·x ≤ b` systems.
//!
//! A dense two-phase primal simplex with Bland's rule. Free variables are
//! split into positive and negative parts, so the tableau is always in
//! standard equality form with nonnegative variables. Bland's rule plus a
//! fixed column order and lowest-basis-index ratio tie-breaking make every
//! result deterministic, which matters because the extracted multipliers are
//! embedded verbatim in certificate files.
//!
//! Exactness over speed: no revised simplex, no presolve, no floats.

use crate::certificates::{check_dominance, check_farkas, DominanceCert, FarkasCert};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron};
use crate::rational::{RVec, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`lp_solve`].
///
/// Dual convention: for `Max`, the multipliers `u ≥ 0` satisfy
/// `Σ uᵢ aᵢ = objective` and `Σ uᵢ bᵢ = value`; for `Min` they satisfy
/// `Σ uᵢ aᵢ = −objective` and `Σ uᵢ bᵢ = −value`. Either way they combine
/// the rows into the exact optimal bound (strong duality, bit-exact).
#[derive(Debug, Clone)]
pub struct LPResult {
    pub status: Status,
    /// Optimal point, or the basic feasible point at which unboundedness
    /// was detected.
    pub primal: Option<RVec>,
    pub value: Option<Rational>,
    pub dual: Option<Vec<(usize, Rational)>>,
    /// Farkas ray for `Infeasible`: `u ≥ 0`, `Σ uᵢ aᵢ = 0`, `Σ uᵢ bᵢ < 0`.
    pub ray: Option<Vec<(usize, Rational)>>,
    /// Improving direction for `Unbounded`.
    pub unbounded_direction: Option<RVec>,
}

/// Dense simplex tableau in standard form.
///
/// Column layout: `[x⁺ (n) | x⁻ (n) | slack (m) | artificial (m) | rhs]`.
/// Rows with negative rhs are sign-flipped up front so the artificial basis
/// is feasible.
struct Tableau {
    n: usize,
    m: usize,
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, length `ncols + 1`; the last entry is −objective.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

// Rows with nonnegative rhs start from their slack; only sign-flipped rows
// need an artificial. Artificial columns never re-enter: the Farkas and
// duality identities are read off structural and slack reduced costs alone,
// so a restricted phase-one optimum with positive artificial sum already
// carries a valid infeasibility ray.

impl Tableau {
    fn new(p: &Polyhedron) -> Self {
        let n = p.dim;
        let m = p.num_rows();
        let ncols = 2 * n + 2 * m;
        let mut rows = Vec::with_capacity(m);
        for (i, row) in p.rows.iter().enumerate() {
            let sign = if row.rhs.is_negative() { -Rational::one() } else { Rational::one() };
            let mut t = vec![Rational::zero(); ncols + 1];
            for k in 0..n {
                let v = &sign * row.normal.get(k);
                t[n + k] = -&v;
                t[k] = v;
            }
            t[2 * n + i] = sign.clone();
            t[2 * n + m + i] = Rational::one();
            t[ncols] = &sign * &row.rhs;
            rows.push(t);
        }
        let basis = (0..m)
            .map(|i| if rows[i][2 * n + i].is_positive() { 2 * n + i } else { 2 * n + m + i })
            .collect();
        Tableau { n, m, ncols, rows, cost: vec![Rational::zero(); ncols + 1], basis }
    }

    fn slack_col(&self, i: usize) -> usize {
        2 * self.n + i
    }

    fn artificial_start(&self) -> usize {
        2 * self.n + self.m
    }

    /// Recomputes the reduced-cost row for the raw cost vector `c`
    /// (length `ncols`) under the current basis.
    fn set_cost(&mut self, c: &[Rational]) {
        let mut cost = vec![Rational::zero(); self.ncols + 1];
        cost[..self.ncols].clone_from_slice(c);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                cost[j] = &cost[j] - &(cb * &row[j]);
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, l: usize, e: usize) {
        let pv = self.rows[l][e].clone();
        let inv = pv.recip().expect("pivot element is nonzero");
        for j in 0..=self.ncols {
            self.rows[l][j] = &self.rows[l][j] * &inv;
        }
        for r in 0..self.m {
            if r != l && !self.rows[r][e].is_zero() {
                let factor = self.rows[r][e].clone();
                for j in 0..=self.ncols {
                    let delta = &factor * &self.rows[l][j];
                    self.rows[r][j] = &self.rows[r][j] - &delta;
                }
            }
        }
        if !self.cost[e].is_zero() {
            let factor = self.cost[e].clone();
            for j in 0..=self.ncols {
                let delta = &factor * &self.rows[l][j];
                self.cost[j] = &self.cost[j] - &delta;
            }
        }
        self.basis[l] = e;
    }

    /// Runs Bland's rule until optimal (`None`) or unbounded (`Some(col)`),
    /// considering only columns below `col_limit` for entering.
    fn run(&mut self, col_limit: usize) -> Option<usize> {
        loop {
            let entering = (0..col_limit).find(|&j| self.cost[j].is_positive());
            let Some(e) = entering else {
                return None;
            };
            let mut leaving: Option<(Rational, usize, usize)> = None;
            for i in 0..self.m {
                if self.rows[i][e].is_positive() {
                    let ratio = &self.rows[i][self.ncols] / &self.rows[i][e];
                    let candidate = (ratio, self.basis[i], i);
                    let better = match &leaving {
                        None => true,
                        Some((best, var, _)) => {
                            candidate.0 < *best || (candidate.0 == *best && candidate.1 < *var)
                        }
                    };
                    if better {
                        leaving = Some(candidate);
                    }
                }
            }
            match leaving {
                Some((_, _, l)) => self.pivot(l, e),
                None => return Some(e),
            }
        }
    }

    fn objective(&self) -> Rational {
        -self.cost[self.ncols].clone()
    }

    /// Value of a standard-form column in the current basic solution.
    fn column_value(&self, col: usize) -> Rational {
        for (i, &b) in self.basis.iter().enumerate() {
            if b == col {
                return self.rows[i][self.ncols].clone();
            }
        }
        Rational::zero()
    }

    fn primal_point(&self) -> RVec {
        RVec::new(
            (0..self.n)
                .map(|k| self.column_value(k) - self.column_value(self.n + k))
                .collect(),
        )
    }

    /// Row multipliers for the original `≤` system, read off the slack
    /// reduced costs: `uᵢ = −cost[slackᵢ]`. The ±1 slack entry of a
    /// sign-flipped row folds the flip back in automatically.
    fn row_multipliers(&self) -> Vec<(usize, Rational)> {
        (0..self.m)
            .filter_map(|i| {
                let u = -self.cost[self.slack_col(i)].clone();
                if u.is_zero() {
                    None
                } else {
                    Some((i, u))
                }
            })
            .collect()
    }
}

/// Exact optimum of `objective·x` over `p`, with dual multipliers, or a
/// Farkas ray for an infeasible system, or an unbounded direction.
pub fn lp_solve(p: &Polyhedron, objective: &RVec, direction: Direction) -> Result<LPResult> {
    if objective.dim() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: objective.dim() });
    }
    let internal_obj = match direction {
        Direction::Max => objective.clone(),
        Direction::Min => objective.neg(),
    };

    let mut t = Tableau::new(p);

    // Phase one: minimize the artificial sum (as a maximization of its
    // negation) starting from the all-artificial basis.
    let mut phase1 = vec![Rational::zero(); t.ncols];
    for j in t.artificial_start()..t.ncols {
        phase1[j] = -Rational::one();
    }
    t.set_cost(&phase1);
    let outcome = t.run(t.artificial_start());
    debug_assert!(outcome.is_none(), "phase one is bounded by zero");
    if t.objective().is_negative() {
        let ray = t.row_multipliers();
        debug_assert!(
            check_farkas(p, &FarkasCert { multipliers: ray.clone() }).accepted,
            "phase-one ray must satisfy the Farkas identities"
        );
        return Ok(LPResult {
            status: Status::Infeasible,
            primal: None,
            value: None,
            dual: None,
            ray: Some(ray),
            unbounded_direction: None,
        });
    }

    // Drive basic artificials out where possible; rows that cannot pivot
    // are identically zero outside the artificial block and stay inert.
    for i in 0..t.m {
        if t.basis[i] >= t.artificial_start() {
            let pivot_col = (0..t.artificial_start()).find(|&j| !t.rows[i][j].is_zero());
            if let Some(j) = pivot_col {
                t.pivot(i, j);
            }
        }
    }

    // Phase two: the real objective over structural columns.
    let mut phase2 = vec![Rational::zero(); t.ncols];
    for k in 0..t.n {
        phase2[k] = internal_obj.get(k).clone();
        phase2[t.n + k] = -internal_obj.get(k).clone();
    }
    t.set_cost(&phase2);
    if let Some(e) = t.run(t.artificial_start()) {
        // Entering column with no blocking row: assemble the improving ray.
        let mut d_std = vec![Rational::zero(); t.artificial_start()];
        d_std[e] = Rational::one();
        for (i, &b) in t.basis.iter().enumerate() {
            if b < t.artificial_start() {
                d_std[b] = -t.rows[i][e].clone();
            }
        }
        let dir = RVec::new(
            (0..t.n)
                .map(|k| d_std[k].clone() - d_std[t.n + k].clone())
                .collect(),
        );
        debug_assert!(p.rows.iter().all(|row| !row.normal.dot(&dir).is_positive()));
        debug_assert!(internal_obj.dot(&dir).is_positive());
        return Ok(LPResult {
            status: Status::Unbounded,
            primal: Some(t.primal_point()),
            value: None,
            dual: None,
            ray: None,
            unbounded_direction: Some(dir),
        });
    }

    let primal = t.primal_point();
    let internal_value = t.objective();
    let dual = t.row_multipliers();

    debug_assert!(p.contains(&primal));
    debug_assert_eq!(internal_obj.dot(&primal), internal_value);
    debug_assert!(dual.iter().all(|(_, u)| u.is_positive()));
    debug_assert_eq!(
        dual.iter()
            .fold(RVec::zero(p.dim), |acc, (i, u)| acc.add(&p.rows[*i].normal.scale(u))),
        internal_obj
    );
    debug_assert_eq!(
        dual.iter().map(|(i, u)| u * &p.rows[*i].rhs).sum::<Rational>(),
        internal_value
    );

    let value = match direction {
        Direction::Max => internal_value,
        Direction::Min => -internal_value,
    };
    Ok(LPResult {
        status: Status::Optimal,
        primal: Some(primal),
        value: Some(value),
        dual: Some(dual),
        ray: None,
        unbounded_direction: None,
    })
}

/// Either a Farkas certificate for `p = ∅` or a feasible witness point.
#[derive(Debug, Clone)]
pub enum FarkasOutcome {
    Infeasible(FarkasCert),
    Feasible(RVec),
}

pub fn extract_farkas(p: &Polyhedron) -> Result<FarkasOutcome> {
    let res = lp_solve(p, &RVec::zero(p.dim), Direction::Max)?;
    match res.status {
        Status::Infeasible => Ok(FarkasOutcome::Infeasible(FarkasCert {
            multipliers: res.ray.expect("infeasible result carries a ray"),
        })),
        _ => Ok(FarkasOutcome::Feasible(res.primal.expect("feasible result carries a point"))),
    }
}

/// True iff `p` has no point.
pub fn is_empty(p: &Polyhedron) -> Result<bool> {
    Ok(matches!(extract_farkas(p)?, FarkasOutcome::Infeasible(_)))
}

/// Either multipliers proving `a·x ≤ b` over `p`, or a point of `p`
/// violating it.
#[derive(Debug, Clone)]
pub enum DominanceOutcome {
    Dominated(DominanceCert),
    Violated(RVec),
}

pub fn extract_dominance(p: &Polyhedron, a: &RVec, b: &Rational) -> Result<DominanceOutcome> {
    if a.dim() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: a.dim() });
    }
    let res = lp_solve(p, a, Direction::Max)?;
    match res.status {
        Status::Infeasible => Err(Error::EmptyDominance),
        Status::Unbounded => {
            // Walk from the current point along the improving ray far enough
            // to violate the target.
            let x0 = res.primal.expect("unbounded result carries a point");
            let d = res.unbounded_direction.expect("unbounded result carries a direction");
            let gain = a.dot(&d);
            let deficit = b - &a.dot(&x0) + Rational::one();
            let t = if deficit.is_positive() {
                &deficit / &gain
            } else {
                Rational::one()
            };
            let witness = x0.add(&d.scale(&t));
            debug_assert!(p.contains(&witness) && a.dot(&witness) > *b);
            Ok(DominanceOutcome::Violated(witness))
        }
        Status::Optimal => {
            let value = res.value.expect("optimal value");
            if value <= *b {
                let cert = DominanceCert {
                    target: Halfspace::new(a.clone(), b.clone()),
                    multipliers: res.dual.expect("optimal duals"),
                };
                debug_assert!(check_dominance(p, &cert).accepted);
                Ok(DominanceOutcome::Dominated(cert))
            } else {
                Ok(DominanceOutcome::Violated(res.primal.expect("optimal point")))
            }
        }
    }
}
