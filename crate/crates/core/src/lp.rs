//! Centralized baseline: the relaxed problem solved exactly as one linear
//! program by a dense two-phase simplex, plus an exhaustive binary oracle
//! for desk-size instances.
//!
//! The simplex uses Bland's smallest-index rule throughout, which makes it
//! deterministic and cycle-free; identical inputs produce bit-identical
//! solutions. Instances are equilibrated internally (bandwidth columns by
//! `B_n`, rows by their largest coefficient, the objective by its largest
//! entry) and results are reported back in SI units.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{lu_solve, AbsExt, Mat};
use crate::problem::{evaluate_utility, Allocation, ProblemInstance, Sense};

/// Reduced-cost threshold for entering columns.
const TOL_REDUCED_COST: f64 = 1e-9;
/// Minimum pivot magnitude in the ratio test.
const TOL_PIVOT: f64 = 1e-9;
/// Phase-1 objective below this counts as feasible (equilibrated data).
const TOL_FEASIBLE: f64 = 1e-7;

/// A dense LP in the form `minimize c.x  s.t. rows, 0 <= x <= upper`.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    /// Per-variable upper bound; `f64::INFINITY` leaves it open.
    pub var_upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coefs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Solver outcome for [`solve_dense`].
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        objective: f64,
        /// Dual multipliers for the caller's rows (sign convention of the
        /// row as given).
        duals: Vec<f64>,
        pivots: usize,
    },
    Infeasible {
        /// Farkas-style multipliers per caller row from the phase-1 dual.
        farkas: Vec<f64>,
        /// Remaining phase-1 infeasibility.
        infeasibility: f64,
    },
    Unbounded {
        /// Column of the improving ray; `< objective.len()` means an
        /// original variable, otherwise a slack.
        ray_col: usize,
    },
}

struct Tableau {
    /// Constraint rows; each has `ncols + 1` entries, trailing rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize, cost_rows: &mut [&mut Vec<f64>]) {
        let inv = 1.0 / self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[j];
            if factor == 0.0 {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            row[j] = 0.0;
        }
        for cost in cost_rows.iter_mut() {
            let factor = cost[j];
            if factor != 0.0 {
                for (v, p) in cost.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                cost[j] = 0.0;
            }
        }
        self.basis[r] = j;
    }

    /// Bland's rule: enter the smallest eligible column, leave by minimum
    /// ratio with ties broken by the smallest basis index. `Err` carries
    /// the entering column of an unbounded ray.
    fn run(
        &mut self,
        cost: &mut Vec<f64>,
        other_cost: Option<&mut Vec<f64>>,
        banned_from: usize,
        pivots: &mut usize,
    ) -> Result<(), usize> {
        let mut other = other_cost;
        loop {
            let mut entering = None;
            for j in 0..self.ncols.min(banned_from) {
                if cost[j] < -TOL_REDUCED_COST {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best_ratio = f64::INFINITY;
            let mut leave: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let pivot = row[j];
                if pivot > TOL_PIVOT {
                    let ratio = row[self.ncols] / pivot;
                    let tol = 1e-9 * (1.0 + best_ratio.abs_());
                    if ratio < best_ratio - tol {
                        best_ratio = ratio;
                        leave = Some(i);
                    } else if ratio <= best_ratio + tol {
                        if let Some(cur) = leave {
                            if self.basis[i] < self.basis[cur] {
                                leave = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(r) = leave else {
                return Err(j);
            };
            let mut costs: Vec<&mut Vec<f64>> = vec![cost];
            if let Some(ref mut o) = other {
                costs.push(o);
            }
            self.pivot(r, j, &mut costs);
            *pivots += 1;
            // Bland's rule terminates finitely; the cap only guards
            // against floating-point pathologies.
            if *pivots > 200 * (self.rows.len() + self.ncols) + 10_000 {
                panic!("simplex exceeded its pivot budget; numerically broken input");
            }
        }
    }
}

/// Solves a dense LP by the two-phase simplex method.
pub fn solve_dense(lp: &DenseLp) -> LpOutcome {
    let nvars = lp.objective.len();
    debug_assert_eq!(lp.var_upper.len(), nvars);

    // Materialize finite upper bounds as extra rows after the caller's.
    let mut rows: Vec<(Vec<f64>, Sense, f64)> = lp
        .rows
        .iter()
        .map(|r| (r.coefs.clone(), r.sense, r.rhs))
        .collect();
    for (j, &ub) in lp.var_upper.iter().enumerate() {
        if ub.is_finite() {
            let mut coefs = vec![0.0; nvars];
            coefs[j] = 1.0;
            rows.push((coefs, Sense::Le, ub));
        }
    }
    let m = rows.len();

    // Row sign normalization: rhs >= 0.
    let mut flip = vec![1.0f64; m];
    for (i, (coefs, sense, rhs)) in rows.iter_mut().enumerate() {
        if *rhs < 0.0 {
            flip[i] = -1.0;
            *rhs = -*rhs;
            for c in coefs.iter_mut() {
                *c = -*c;
            }
            *sense = match *sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    // Standard-form columns: original vars, slacks/surpluses, artificials.
    let mut n_slack = 0;
    for (_, sense, _) in &rows {
        if !matches!(sense, Sense::Eq) {
            n_slack += 1;
        }
    }
    let mut n_art = 0;
    for (_, sense, _) in &rows {
        if !matches!(sense, Sense::Le) {
            n_art += 1;
        }
    }
    let ncols = nvars + n_slack + n_art;
    let art_from = nvars + n_slack;

    let mut tableau = Tableau {
        rows: vec![vec![0.0; ncols + 1]; m],
        basis: vec![0; m],
        ncols,
    };
    // Unpivoted copy of the standard-form matrix, for dual extraction.
    let mut std_cols = Mat::zeros(m, ncols);

    let mut slack_idx = nvars;
    let mut art_idx = art_from;
    for (i, (coefs, sense, rhs)) in rows.iter().enumerate() {
        for (j, &c) in coefs.iter().enumerate() {
            tableau.rows[i][j] = c;
            std_cols[(i, j)] = c;
        }
        tableau.rows[i][ncols] = *rhs;
        match sense {
            Sense::Le => {
                tableau.rows[i][slack_idx] = 1.0;
                std_cols[(i, slack_idx)] = 1.0;
                tableau.basis[i] = slack_idx;
                slack_idx += 1;
            }
            Sense::Ge => {
                tableau.rows[i][slack_idx] = -1.0;
                std_cols[(i, slack_idx)] = -1.0;
                slack_idx += 1;
                tableau.rows[i][art_idx] = 1.0;
                std_cols[(i, art_idx)] = 1.0;
                tableau.basis[i] = art_idx;
                art_idx += 1;
            }
            Sense::Eq => {
                tableau.rows[i][art_idx] = 1.0;
                std_cols[(i, art_idx)] = 1.0;
                tableau.basis[i] = art_idx;
                art_idx += 1;
            }
        }
    }

    // Phase-2 reduced costs start as the raw objective (the initial basis
    // has zero phase-2 cost) and are updated through every pivot of both
    // phases.
    let mut cost2 = vec![0.0; ncols + 1];
    cost2[..nvars].copy_from_slice(&lp.objective);

    let mut pivots = 0usize;

    if n_art > 0 {
        let mut cost1 = vec![0.0; ncols + 1];
        for j in art_from..ncols {
            cost1[j] = 1.0;
        }
        for i in 0..m {
            if tableau.basis[i] >= art_from {
                let row = tableau.rows[i].clone();
                for (v, r) in cost1.iter_mut().zip(&row) {
                    *v -= r;
                }
            }
        }
        if tableau
            .run(&mut cost1, Some(&mut cost2), ncols, &mut pivots)
            .is_err()
        {
            panic!("phase-1 objective is bounded below; unbounded signal is a bug");
        }
        let infeasibility = -cost1[ncols];
        if infeasibility > TOL_FEASIBLE {
            // Farkas multipliers from the phase-1 dual: solve B^T y = c_B.
            let mut basis_t = Mat::zeros(m, m);
            let mut cb = vec![0.0; m];
            for (i, &bj) in tableau.basis.iter().enumerate() {
                for r in 0..m {
                    basis_t[(i, r)] = std_cols[(r, bj)];
                }
                cb[i] = if bj >= art_from { 1.0 } else { 0.0 };
            }
            let mut y = cb;
            if lu_solve(&mut basis_t, &mut y).is_err() {
                y = vec![0.0; m];
            }
            let farkas = (0..lp.rows.len()).map(|i| flip[i] * y[i]).collect();
            return LpOutcome::Infeasible {
                farkas,
                infeasibility,
            };
        }
        // Drive leftover artificials out of the basis where possible;
        // remaining ones sit at zero and are banned from re-entering.
        for r in 0..m {
            if tableau.basis[r] >= art_from {
                let mut pivot_col = None;
                for j in 0..art_from {
                    if tableau.rows[r][j].abs_() > 1e-7 {
                        pivot_col = Some(j);
                        break;
                    }
                }
                if let Some(j) = pivot_col {
                    let mut costs: Vec<&mut Vec<f64>> = vec![&mut cost2];
                    tableau.pivot(r, j, &mut costs);
                    pivots += 1;
                }
            }
        }
    }

    if let Err(ray) = tableau.run(&mut cost2, None, art_from, &mut pivots) {
        return LpOutcome::Unbounded { ray_col: ray };
    }

    let mut x = vec![0.0; ncols];
    for (i, &bj) in tableau.basis.iter().enumerate() {
        x[bj] = tableau.rows[i][ncols];
    }
    let solution: Vec<f64> = x[..nvars].to_vec();
    let objective = lp
        .objective
        .iter()
        .zip(&solution)
        .map(|(c, v)| c * v)
        .sum();

    // Duals: B^T y = c_B against the unpivoted standard-form matrix.
    let mut basis_t = Mat::zeros(m, m);
    let mut cb = vec![0.0; m];
    for (i, &bj) in tableau.basis.iter().enumerate() {
        for r in 0..m {
            basis_t[(i, r)] = std_cols[(r, bj)];
        }
        cb[i] = if bj < nvars { lp.objective[bj] } else { 0.0 };
    }
    let mut y = cb;
    if lu_solve(&mut basis_t, &mut y).is_err() {
        y = vec![0.0; m];
    }
    let duals = (0..lp.rows.len()).map(|i| flip[i] * y[i]).collect();

    LpOutcome::Optimal {
        x: solution,
        objective,
        duals,
        pivots,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solution of the centralized relaxed problem.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub allocation: Allocation,
    /// Utility of the returned allocation; `-inf`/`+inf` when infeasible
    /// or unbounded.
    pub objective: f64,
    pub status: LpStatus,
    /// Simplex pivot count.
    pub iterations: usize,
    /// Present when the status is not optimal.
    pub certificate: Option<String>,
}

struct InstanceScaling {
    col_scale: Vec<f64>,
}

fn scaled_lp(instance: &ProblemInstance) -> (DenseLp, InstanceScaling) {
    let layout = instance.layout();
    let mut col_scale = vec![1.0; layout.count()];
    for u in 0..instance.users {
        for n in 0..instance.bss {
            col_scale[layout.b(u, n)] = instance.bandwidth_hz[n];
        }
    }
    let obj_flat = instance.objective_flat();
    let mut objective_scale: f64 = 0.0;
    for (j, c) in obj_flat.iter().enumerate() {
        objective_scale = objective_scale.max((c * col_scale[j]).abs_());
    }
    if objective_scale == 0.0 {
        objective_scale = 1.0;
    }
    // Minimize the negated, normalized utility.
    let objective: Vec<f64> = obj_flat
        .iter()
        .enumerate()
        .map(|(j, c)| -c * col_scale[j] / objective_scale)
        .collect();

    let rows = instance
        .rows
        .iter()
        .map(|row| {
            let mut coefs = vec![0.0; layout.count()];
            for &(j, c) in &row.terms {
                coefs[j] = c * col_scale[j];
            }
            let mut scale = row.rhs.abs_();
            for c in &coefs {
                scale = scale.max(c.abs_());
            }
            if scale == 0.0 {
                scale = 1.0;
            }
            for c in coefs.iter_mut() {
                *c /= scale;
            }
            LpRow {
                coefs,
                sense: row.sense,
                rhs: row.rhs / scale,
            }
        })
        .collect();

    let var_upper = instance
        .var_upper
        .iter()
        .enumerate()
        .map(|(j, &ub)| if ub.is_finite() { ub / col_scale[j] } else { ub })
        .collect();

    (
        DenseLp {
            objective,
            rows,
            var_upper,
        },
        InstanceScaling { col_scale },
    )
}

/// Solves the relaxed problem to optimality. Deterministic: the pivoting
/// rule has no randomized or time-dependent choices.
pub fn solve_centralized(instance: &ProblemInstance) -> LpSolution {
    let layout = instance.layout();
    let (lp, scaling) = scaled_lp(instance);
    match solve_dense(&lp) {
        LpOutcome::Optimal { x, pivots, .. } => {
            let flat: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(j, v)| v * scaling.col_scale[j])
                .collect();
            let allocation = Allocation::from_flat(&layout, &flat);
            let objective = evaluate_utility(instance, &allocation)
                .expect("allocation built from the instance layout");
            LpSolution {
                allocation,
                objective,
                status: LpStatus::Optimal,
                iterations: pivots,
                certificate: None,
            }
        }
        LpOutcome::Infeasible {
            farkas,
            infeasibility,
        } => {
            let mut worst = 0usize;
            for (i, f) in farkas.iter().enumerate() {
                if f.abs_() > farkas[worst].abs_() {
                    worst = i;
                }
            }
            let label = instance
                .rows
                .get(worst)
                .map(|r| format!("{}", r.id))
                .unwrap_or_else(|| String::from("?"));
            LpSolution {
                allocation: Allocation::zeros(instance.users, instance.bss),
                objective: f64::NEG_INFINITY,
                status: LpStatus::Infeasible,
                iterations: 0,
                certificate: Some(format!(
                    "no feasible point; residual infeasibility {infeasibility:.3e}, most implicated row {label}"
                )),
            }
        }
        LpOutcome::Unbounded { ray_col } => {
            let name = if ray_col < layout.count() {
                layout.name(ray_col)
            } else {
                format!("slack#{ray_col}")
            };
            LpSolution {
                allocation: Allocation::zeros(instance.users, instance.bss),
                objective: f64::INFINITY,
                status: LpStatus::Unbounded,
                iterations: 0,
                certificate: Some(format!(
                    "objective unbounded along {name}; the instance is malformed"
                )),
            }
        }
    }
}

/// Exact bandwidth split for a fixed binary association: every user gets
/// the minimum meeting its rate requirement and any leftover goes to the
/// assigned user with the best positive bandwidth coefficient. Returns
/// `None` when some requirement cannot be met.
pub fn optimal_bandwidth(instance: &ProblemInstance, assignment: &[usize]) -> Option<Mat> {
    let mut b = Mat::zeros(instance.users, instance.bss);
    for (u, &n) in assignment.iter().enumerate() {
        let need = instance.min_comm_rate_bps[u];
        if need > 0.0 {
            let r = instance.spectral_efficiency[(u, n)];
            if r <= 0.0 {
                return None;
            }
            b[(u, n)] = need / r;
        }
    }
    for n in 0..instance.bss {
        let mut used = 0.0;
        for (u, &an) in assignment.iter().enumerate() {
            if an == n {
                used += b[(u, n)];
            }
        }
        if used > instance.bandwidth_hz[n] {
            return None;
        }
        let mut best: Option<usize> = None;
        for (u, &an) in assignment.iter().enumerate() {
            if an == n && instance.coefficients.comm[(u, n)] > 0.0 {
                let better = match best {
                    None => true,
                    Some(cur) => {
                        instance.coefficients.comm[(u, n)] > instance.coefficients.comm[(cur, n)]
                    }
                };
                if better {
                    best = Some(u);
                }
            }
        }
        if let Some(u) = best {
            b[(u, n)] += instance.bandwidth_hz[n] - used;
        }
    }
    Some(b)
}

/// Exact optimum of the original binary problem, by enumeration.
#[derive(Debug, Clone)]
pub struct BinaryOracleResult {
    pub allocation: Allocation,
    pub utility: f64,
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The enumeration would exceed the given cap.
    TooLarge { states: u128, cap: u128 },
    /// No binary assignment satisfies the constraints.
    Infeasible,
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::TooLarge { states, cap } => {
                write!(f, "enumeration of {states} states exceeds cap {cap}")
            }
            OracleError::Infeasible => write!(f, "no feasible binary assignment"),
        }
    }
}

/// Enumerates all `N^U` associations; per association the bandwidth split
/// is solved exactly and per-BS caching is an exact subset search over the
/// positive-value items. Intended for tiny instances; the cap refuses
/// anything else with a size report.
pub fn brute_force_binary(
    instance: &ProblemInstance,
    cap: u128,
) -> Result<BinaryOracleResult, OracleError> {
    let users = instance.users;
    let bss = instance.bss;
    let assignments = (bss as u128)
        .checked_pow(users as u32)
        .unwrap_or(u128::MAX);
    let states = assignments.saturating_mul(1u128 << (2 * users).min(126));
    if states > cap {
        return Err(OracleError::TooLarge { states, cap });
    }

    let mut best: Option<BinaryOracleResult> = None;
    let mut assignment = vec![0usize; users];
    'outer: loop {
        if let Some(candidate) = evaluate_assignment(instance, &assignment) {
            let replace = match &best {
                None => true,
                Some(b) => candidate.utility > b.utility,
            };
            if replace {
                best = Some(candidate);
            }
        }
        // Odometer over assignments, first user fastest.
        for slot in assignment.iter_mut() {
            *slot += 1;
            if *slot < bss {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    best.ok_or(OracleError::Infeasible)
}

fn evaluate_assignment(
    instance: &ProblemInstance,
    assignment: &[usize],
) -> Option<BinaryOracleResult> {
    let users = instance.users;
    let bss = instance.bss;
    let mut counts = vec![0usize; bss];
    for &n in assignment {
        counts[n] += 1;
    }
    for n in 0..bss {
        if (counts[n] as f64) > instance.max_tasks[n] {
            return None;
        }
    }
    // Computation rate requirement under a binary association.
    for (u, &n) in assignment.iter().enumerate() {
        if instance.compute_rate_bps[(u, n)] < instance.min_compute_rate_bps[u] {
            return None;
        }
    }
    let b = optimal_bandwidth(instance, assignment)?;

    let mut x1 = Mat::zeros(users, bss);
    let mut x2 = Mat::zeros(users, bss);
    for n in 0..bss {
        // Exact 0/1 knapsack by subset enumeration over the items with
        // positive value (others never belong to an optimum).
        let mut items: Vec<(usize, bool, f64, f64)> = Vec::new();
        for (u, &an) in assignment.iter().enumerate() {
            if an != n {
                continue;
            }
            let c1 = instance.coefficients.cache1[(u, n)];
            if c1 > 0.0 {
                items.push((u, true, instance.input_size_bits[u], c1));
            }
            let c2 = instance.coefficients.cache2[(u, n)];
            if c2 > 0.0 {
                items.push((u, false, instance.output_size_bits[u], c2));
            }
        }
        let mut best_mask = 0usize;
        let mut best_value = 0.0;
        for mask in 0..(1usize << items.len()) {
            let mut size = 0.0;
            let mut value = 0.0;
            for (k, item) in items.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    size += item.2;
                    value += item.3;
                }
            }
            if size <= instance.cache_capacity_bits[n] && value > best_value {
                best_value = value;
                best_mask = mask;
            }
        }
        for (k, &(u, before, _, _)) in items.iter().enumerate() {
            if best_mask & (1 << k) != 0 {
                if before {
                    x1[(u, n)] = 1.0;
                } else {
                    x2[(u, n)] = 1.0;
                }
            }
        }
    }

    let mut a = Mat::zeros(users, bss);
    for (u, &n) in assignment.iter().enumerate() {
        a[(u, n)] = 1.0;
    }
    let allocation = Allocation {
        a,
        b_tilde: b,
        x1_tilde: x1,
        x2_tilde: x2,
    };
    let utility = evaluate_utility(instance, &allocation).expect("shapes match");
    Some(BinaryOracleResult {
        allocation,
        utility,
        assignment: assignment.to_vec(),
    })
}
