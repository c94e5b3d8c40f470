//! The relaxed allocation problem: utility coefficients, the linear
//! constraint system, and evaluation of utility/feasibility for arbitrary
//! allocations.
//!
//! Decision variables per (user `u`, base station `n`):
//!
//! * `a[u][n]` — association time share in `[0, 1]`,
//! * `b~[u][n]` — effective bandwidth in Hz (association times bandwidth),
//! * `x1~[u][n]`, `x2~[u][n]` — cache shares in `[0, 1]` for the content
//!   before/after computation.
//!
//! Utility is linear in these variables; the per-variable coefficients
//! collect the revenue and cost prices of the scenario. Besides the six
//! core constraint groups, link rows `b~ <= B_n a`, `x~ <= a` tie resource
//! use to association so that a binary solution of the original problem can
//! always be recovered from a relaxed one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{AbsExt, Mat};
use crate::scenario::Scenario;

/// Flat ordering of the decision variables: the `a` block, then `b~`,
/// `x1~`, `x2~`; each block is user-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub users: usize,
    pub bss: usize,
}

impl VarLayout {
    #[inline]
    pub fn a(&self, u: usize, n: usize) -> usize {
        u * self.bss + n
    }

    #[inline]
    pub fn b(&self, u: usize, n: usize) -> usize {
        self.users * self.bss + u * self.bss + n
    }

    #[inline]
    pub fn x1(&self, u: usize, n: usize) -> usize {
        2 * self.users * self.bss + u * self.bss + n
    }

    #[inline]
    pub fn x2(&self, u: usize, n: usize) -> usize {
        3 * self.users * self.bss + u * self.bss + n
    }

    pub fn count(&self) -> usize {
        4 * self.users * self.bss
    }

    /// Human-readable variable name for reports.
    pub fn name(&self, idx: usize) -> String {
        let block = idx / (self.users * self.bss);
        let rest = idx % (self.users * self.bss);
        let (u, n) = (rest / self.bss, rest % self.bss);
        let tag = ["a", "b", "x1", "x2"][block];
        format!("{tag}[{u}][{n}]")
    }
}

/// Per-variable utility coefficients (all matrices are users x bss).
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityCoefficients {
    /// Coefficient of `b~` (units/Hz): `alpha_u * r[u][n] - beta_n`.
    pub comm: Mat,
    /// Coefficient of `a` (units): `phi_u * R[u][n] - psi_n * E[u][n]`.
    pub compute: Mat,
    /// Coefficient of `x1~` (units): `gamma_n * g(z_u) - Psi_n * z_u`.
    pub cache1: Mat,
    /// Coefficient of `x2~` (units): `gamma_n * g(z'_u) - Psi'_n * z'_u`.
    pub cache2: Mat,
}

/// A point in the relaxed decision space. Not necessarily feasible;
/// solvers evaluate utility of intermediate iterates freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub a: Mat,
    pub b_tilde: Mat,
    pub x1_tilde: Mat,
    pub x2_tilde: Mat,
}

impl Allocation {
    pub fn zeros(users: usize, bss: usize) -> Self {
        Self {
            a: Mat::zeros(users, bss),
            b_tilde: Mat::zeros(users, bss),
            x1_tilde: Mat::zeros(users, bss),
            x2_tilde: Mat::zeros(users, bss),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }

    /// Flattens into the [`VarLayout`] ordering.
    pub fn to_flat(&self, layout: &VarLayout) -> Vec<f64> {
        let mut v = alloc::vec![0.0; layout.count()];
        for u in 0..layout.users {
            for n in 0..layout.bss {
                v[layout.a(u, n)] = self.a[(u, n)];
                v[layout.b(u, n)] = self.b_tilde[(u, n)];
                v[layout.x1(u, n)] = self.x1_tilde[(u, n)];
                v[layout.x2(u, n)] = self.x2_tilde[(u, n)];
            }
        }
        v
    }

    pub fn from_flat(layout: &VarLayout, flat: &[f64]) -> Self {
        let mut out = Self::zeros(layout.users, layout.bss);
        for u in 0..layout.users {
            for n in 0..layout.bss {
                out.a[(u, n)] = flat[layout.a(u, n)];
                out.b_tilde[(u, n)] = flat[layout.b(u, n)];
                out.x1_tilde[(u, n)] = flat[layout.x1(u, n)];
                out.x2_tilde[(u, n)] = flat[layout.x2(u, n)];
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// Identity of a constraint row, for feasibility reports and dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintId {
    /// Association shares of user `u` sum to one.
    AssocSum(usize),
    /// Bandwidth handed out by BS `n` is capped by `B_n`.
    BandwidthCap(usize),
    /// User `u` reaches its required communication rate.
    CommRate(usize),
    /// User `u` reaches its required computation rate.
    ComputeRate(usize),
    /// BS `n` hosts at most `D_n` tasks.
    TaskCap(usize),
    /// Cache use at BS `n` fits in `Z_n`.
    CacheCap(usize),
    /// `b~[u][n] <= B_n a[u][n]`.
    LinkBandwidth(usize, usize),
    /// `x1~[u][n] <= a[u][n]`.
    LinkCacheBefore(usize, usize),
    /// `x2~[u][n] <= a[u][n]`.
    LinkCacheAfter(usize, usize),
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::AssocSum(u) => write!(f, "assoc_sum[u={u}]"),
            ConstraintId::BandwidthCap(n) => write!(f, "bandwidth_cap[n={n}]"),
            ConstraintId::CommRate(u) => write!(f, "comm_rate[u={u}]"),
            ConstraintId::ComputeRate(u) => write!(f, "compute_rate[u={u}]"),
            ConstraintId::TaskCap(n) => write!(f, "task_cap[n={n}]"),
            ConstraintId::CacheCap(n) => write!(f, "cache_cap[n={n}]"),
            ConstraintId::LinkBandwidth(u, n) => write!(f, "link_bandwidth[u={u}][n={n}]"),
            ConstraintId::LinkCacheBefore(u, n) => write!(f, "link_cache_before[u={u}][n={n}]"),
            ConstraintId::LinkCacheAfter(u, n) => write!(f, "link_cache_after[u={u}][n={n}]"),
        }
    }
}

/// One sparse constraint row over the flat variable vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub id: ConstraintId,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Fully assembled relaxed problem: coefficients, constraint rows, and the
/// scenario-derived data the solvers need.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub users: usize,
    pub bss: usize,
    pub coefficients: UtilityCoefficients,
    pub rows: Vec<ConstraintRow>,
    /// Per flat variable: upper bound (`inf` for unbounded `b~`).
    pub var_upper: Vec<f64>,
    pub bandwidth_hz: Vec<f64>,
    pub max_tasks: Vec<f64>,
    pub cache_capacity_bits: Vec<f64>,
    /// Spectral efficiency `r[u][n]` (bps/Hz).
    pub spectral_efficiency: Mat,
    /// Computation rate `R[u][n] = F_n z_u / c_u` (bps).
    pub compute_rate_bps: Mat,
    /// Energy to run task `u` at BS `n`: `c_u e_n` (J).
    pub energy_j: Mat,
    pub min_comm_rate_bps: Vec<f64>,
    pub min_compute_rate_bps: Vec<f64>,
    pub input_size_bits: Vec<f64>,
    pub output_size_bits: Vec<f64>,
}

/// Allocation shape does not match the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeMismatch {
    pub expected: (usize, usize),
    pub got: (usize, usize),
}

impl fmt::Display for ShapeMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "allocation shape {:?} does not match instance shape {:?}",
            self.got, self.expected
        )
    }
}

/// Builds the relaxed problem from a validated scenario. Pure: the same
/// scenario always produces the identical instance.
pub fn build_instance(scenario: &Scenario) -> ProblemInstance {
    let users = scenario.user_count();
    let bss = scenario.bs_count();
    let layout = VarLayout { users, bss };
    let r = scenario.channel.spectral_efficiency.clone();

    let mut compute_rate = Mat::zeros(users, bss);
    let mut energy = Mat::zeros(users, bss);
    let mut comm = Mat::zeros(users, bss);
    let mut compute = Mat::zeros(users, bss);
    let mut cache1 = Mat::zeros(users, bss);
    let mut cache2 = Mat::zeros(users, bss);

    for (u, user) in scenario.users.iter().enumerate() {
        let task = &user.task;
        let p1 = scenario.popularity.probabilities[task.content_before];
        let p2 = scenario.popularity.probabilities[task.content_after];
        let gain1 = p1 * task.input_size_bits / task.download_time_before_s;
        let gain2 = p2 * task.output_size_bits / task.download_time_after_s;
        for (n, bs) in scenario.base_stations.iter().enumerate() {
            // Time-sharing reading of the relaxation: an associated user
            // sees the full per-BS capability, while `max_tasks` caps
            // concurrency.
            let rate = bs.compute_capability_cps * task.input_size_bits / task.cycles;
            let e = task.cycles * bs.energy_per_cycle_j;
            compute_rate[(u, n)] = rate;
            energy[(u, n)] = e;
            comm[(u, n)] = user.access_price * r[(u, n)] - bs.spectrum_price;
            compute[(u, n)] = user.compute_price * rate - bs.energy_price * e;
            cache1[(u, n)] =
                bs.backhaul_price * gain1 - bs.cache_price_before * task.input_size_bits;
            cache2[(u, n)] =
                bs.backhaul_price * gain2 - bs.cache_price_after * task.output_size_bits;
        }
    }

    let bandwidth_hz: Vec<f64> = scenario.base_stations.iter().map(|b| b.bandwidth_hz).collect();
    let max_tasks: Vec<f64> = scenario
        .base_stations
        .iter()
        .map(|b| f64::from(b.max_tasks))
        .collect();
    let cache_capacity_bits: Vec<f64> = scenario
        .base_stations
        .iter()
        .map(|b| b.cache_capacity_bits)
        .collect();
    let min_comm_rate_bps: Vec<f64> = scenario.users.iter().map(|u| u.min_comm_rate_bps).collect();
    let min_compute_rate_bps: Vec<f64> = scenario
        .users
        .iter()
        .map(|u| u.task.min_compute_rate_bps)
        .collect();
    let input_size_bits: Vec<f64> = scenario.users.iter().map(|u| u.task.input_size_bits).collect();
    let output_size_bits: Vec<f64> = scenario
        .users
        .iter()
        .map(|u| u.task.output_size_bits)
        .collect();

    let mut rows = Vec::new();
    for u in 0..users {
        rows.push(ConstraintRow {
            id: ConstraintId::AssocSum(u),
            terms: (0..bss).map(|n| (layout.a(u, n), 1.0)).collect(),
            sense: Sense::Eq,
            rhs: 1.0,
        });
    }
    for n in 0..bss {
        rows.push(ConstraintRow {
            id: ConstraintId::BandwidthCap(n),
            terms: (0..users).map(|u| (layout.b(u, n), 1.0)).collect(),
            sense: Sense::Le,
            rhs: bandwidth_hz[n],
        });
    }
    for u in 0..users {
        rows.push(ConstraintRow {
            id: ConstraintId::CommRate(u),
            terms: (0..bss).map(|n| (layout.b(u, n), r[(u, n)])).collect(),
            sense: Sense::Ge,
            rhs: min_comm_rate_bps[u],
        });
    }
    for u in 0..users {
        rows.push(ConstraintRow {
            id: ConstraintId::ComputeRate(u),
            terms: (0..bss)
                .map(|n| (layout.a(u, n), compute_rate[(u, n)]))
                .collect(),
            sense: Sense::Ge,
            rhs: min_compute_rate_bps[u],
        });
    }
    for n in 0..bss {
        rows.push(ConstraintRow {
            id: ConstraintId::TaskCap(n),
            terms: (0..users).map(|u| (layout.a(u, n), 1.0)).collect(),
            sense: Sense::Le,
            rhs: max_tasks[n],
        });
    }
    for n in 0..bss {
        let mut terms = Vec::with_capacity(2 * users);
        for u in 0..users {
            terms.push((layout.x1(u, n), input_size_bits[u]));
            terms.push((layout.x2(u, n), output_size_bits[u]));
        }
        rows.push(ConstraintRow {
            id: ConstraintId::CacheCap(n),
            terms,
            sense: Sense::Le,
            rhs: cache_capacity_bits[n],
        });
    }
    for u in 0..users {
        for n in 0..bss {
            rows.push(ConstraintRow {
                id: ConstraintId::LinkBandwidth(u, n),
                terms: alloc::vec![(layout.b(u, n), 1.0), (layout.a(u, n), -bandwidth_hz[n])],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }
    for u in 0..users {
        for n in 0..bss {
            rows.push(ConstraintRow {
                id: ConstraintId::LinkCacheBefore(u, n),
                terms: alloc::vec![(layout.x1(u, n), 1.0), (layout.a(u, n), -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }
    for u in 0..users {
        for n in 0..bss {
            rows.push(ConstraintRow {
                id: ConstraintId::LinkCacheAfter(u, n),
                terms: alloc::vec![(layout.x2(u, n), 1.0), (layout.a(u, n), -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }

    let mut var_upper = alloc::vec![f64::INFINITY; layout.count()];
    for u in 0..users {
        for n in 0..bss {
            var_upper[layout.a(u, n)] = 1.0;
            var_upper[layout.x1(u, n)] = 1.0;
            var_upper[layout.x2(u, n)] = 1.0;
        }
    }

    ProblemInstance {
        users,
        bss,
        coefficients: UtilityCoefficients {
            comm,
            compute,
            cache1,
            cache2,
        },
        rows,
        var_upper,
        bandwidth_hz,
        max_tasks,
        cache_capacity_bits,
        spectral_efficiency: r,
        compute_rate_bps: compute_rate,
        energy_j: energy,
        min_comm_rate_bps,
        min_compute_rate_bps,
        input_size_bits,
        output_size_bits,
    }
}

impl ProblemInstance {
    pub fn layout(&self) -> VarLayout {
        VarLayout {
            users: self.users,
            bss: self.bss,
        }
    }

    /// The same problem with the caching scheme disabled: cache shares are
    /// pinned to zero and their utility contributions dropped.
    pub fn without_caching(&self) -> ProblemInstance {
        let mut out = self.clone();
        out.coefficients.cache1.fill(0.0);
        out.coefficients.cache2.fill(0.0);
        let layout = self.layout();
        for u in 0..self.users {
            for n in 0..self.bss {
                out.var_upper[layout.x1(u, n)] = 0.0;
                out.var_upper[layout.x2(u, n)] = 0.0;
            }
        }
        out
    }

    /// Objective coefficient per flat variable.
    pub fn objective_flat(&self) -> Vec<f64> {
        let layout = self.layout();
        let mut obj = alloc::vec![0.0; layout.count()];
        for u in 0..self.users {
            for n in 0..self.bss {
                obj[layout.a(u, n)] = self.coefficients.compute[(u, n)];
                obj[layout.b(u, n)] = self.coefficients.comm[(u, n)];
                obj[layout.x1(u, n)] = self.coefficients.cache1[(u, n)];
                obj[layout.x2(u, n)] = self.coefficients.cache2[(u, n)];
            }
        }
        obj
    }

    /// Plain-text dump of the LP data (objective vector plus constraint
    /// triplets) for cross-checking against external tooling.
    pub fn dump_text(&self) -> String {
        use core::fmt::Write;
        let layout = self.layout();
        let obj = self.objective_flat();
        let mut s = String::new();
        let _ = writeln!(s, "vralloc instance v1");
        let _ = writeln!(s, "maximize");
        let _ = writeln!(s, "vars {}", layout.count());
        for (j, c) in obj.iter().enumerate() {
            let _ = writeln!(s, "obj {} {:.17e}  # {}", j, c, layout.name(j));
        }
        let _ = writeln!(s, "rows {}", self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let sense = match row.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "==",
            };
            let _ = writeln!(s, "row {} {} {:.17e}  # {}", i, sense, row.rhs, row.id);
            for (j, c) in &row.terms {
                let _ = writeln!(s, "  {} {} {:.17e}", i, j, c);
            }
        }
        let _ = writeln!(s, "bounds");
        for (j, ub) in self.var_upper.iter().enumerate() {
            if ub.is_finite() {
                let _ = writeln!(s, "  {} 0 {:.17e}", j, ub);
            } else {
                let _ = writeln!(s, "  {} 0 inf", j);
            }
        }
        s
    }
}

/// Total utility of an allocation: the linear form over all four blocks,
/// summed user-major then per BS. Defined for infeasible points too.
pub fn evaluate_utility(
    instance: &ProblemInstance,
    allocation: &Allocation,
) -> Result<f64, ShapeMismatch> {
    let expected = (instance.users, instance.bss);
    if allocation.shape() != expected {
        return Err(ShapeMismatch {
            expected,
            got: allocation.shape(),
        });
    }
    let c = &instance.coefficients;
    let mut total = 0.0;
    for u in 0..instance.users {
        for n in 0..instance.bss {
            total += c.comm[(u, n)] * allocation.b_tilde[(u, n)]
                + c.compute[(u, n)] * allocation.a[(u, n)]
                + c.cache1[(u, n)] * allocation.x1_tilde[(u, n)]
                + c.cache2[(u, n)] * allocation.x2_tilde[(u, n)];
        }
    }
    Ok(total)
}

/// One violated constraint, with the violation both raw and normalized by
/// `max(1, |rhs|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub label: String,
    pub violation: f64,
    pub raw: f64,
}

/// Result of [`check_feasibility`]; empty iff the point satisfies every
/// row and bound within the tolerance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst(&self) -> Option<&Violation> {
        self.violations
            .iter()
            .max_by(|a, b| a.violation.partial_cmp(&b.violation).unwrap())
    }
}

/// Checks every constraint row and variable bound. Violations are compared
/// against `tol` after normalizing each row by `max(1, |rhs|)`.
pub fn check_feasibility(
    instance: &ProblemInstance,
    allocation: &Allocation,
    tol: f64,
) -> FeasibilityReport {
    let layout = instance.layout();
    let flat = allocation.to_flat(&layout);
    let mut report = FeasibilityReport::default();
    for row in &instance.rows {
        let lhs: f64 = row.terms.iter().map(|&(j, c)| c * flat[j]).sum();
        let raw = match row.sense {
            Sense::Le => lhs - row.rhs,
            Sense::Ge => row.rhs - lhs,
            Sense::Eq => (lhs - row.rhs).abs_(),
        };
        let scale = row.rhs.abs_().max(1.0);
        let normalized = raw / scale;
        if normalized > tol {
            report.violations.push(Violation {
                label: format!("{}", row.id),
                violation: normalized,
                raw,
            });
        }
    }
    for (j, &v) in flat.iter().enumerate() {
        let ub = instance.var_upper[j];
        if v < -tol {
            report.violations.push(Violation {
                label: format!("lb({})", layout.name(j)),
                violation: -v,
                raw: -v,
            });
        }
        if ub.is_finite() && v > ub + tol {
            report.violations.push(Violation {
                label: format!("ub({})", layout.name(j)),
                violation: v - ub,
                raw: v - ub,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{
        assemble, generate_users, zipf_popularity, BaseStation, BsKind, UserDistribution,
    };
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bs(id: usize, f_cps: f64, z_bits: f64, pos: [f64; 2]) -> BaseStation {
        BaseStation {
            id,
            kind: if id == 0 { BsKind::Macro } else { BsKind::Small },
            bandwidth_hz: 10e6,
            compute_capability_cps: f_cps,
            max_tasks: 10,
            cache_capacity_bits: z_bits,
            energy_per_cycle_j: 1e-9,
            spectrum_price: 2e-3,
            backhaul_price: 1e-5,
            energy_price: 60e-6,
            cache_price_before: 1e-5,
            cache_price_after: 1e-5,
            position: pos,
        }
    }

    fn demo_scenario(users: usize, bss: usize, seed: u64) -> crate::scenario::Scenario {
        let popularity = zipf_popularity(10, 1.2).unwrap();
        let dist = UserDistribution::default();
        let generated = generate_users(&dist, &popularity, 2, users, seed);
        let stations = (0..bss)
            .map(|n| {
                bs(
                    n,
                    if n == 0 { 10e9 } else { 5e9 },
                    if n == 0 { 10e6 } else { 5e6 },
                    [150.0 * n as f64, 0.0],
                )
            })
            .collect();
        assemble(stations, generated, 2, popularity, 27.0, -174.0, 4.0, seed).unwrap()
    }

    #[test]
    fn compute_rate_and_energy_from_task_terms() {
        // 10 GHz capability, 1 Mb input, 1000 Megacycles: R = F z / c = 1e7 bps,
        // E = c e = 1 J with e = 1e-9 J/cycle.
        let mut scenario = demo_scenario(1, 1, 5);
        scenario.users[0].task.input_size_bits = 1e6;
        scenario.users[0].task.cycles = 1e9;
        scenario.users[0].compute_price = 100.0;
        scenario.base_stations[0].energy_price = 60e-6;
        let instance = build_instance(&scenario);
        assert_relative_eq!(instance.compute_rate_bps[(0, 0)], 1e7, max_relative = 1e-15);
        assert_relative_eq!(instance.energy_j[(0, 0)], 1.0, max_relative = 1e-15);
        // Compute coefficient: 100 * 1e7 - 60e-6 * 1, about 1e9 units.
        assert_relative_eq!(
            instance.coefficients.compute[(0, 0)],
            100.0 * 1e7 - 60e-6,
            max_relative = 1e-15
        );
    }

    #[test]
    fn build_is_deterministic() {
        let scenario = demo_scenario(4, 2, 9);
        assert_eq!(build_instance(&scenario), build_instance(&scenario));
    }

    #[test]
    fn utility_zero_allocation() {
        let instance = build_instance(&demo_scenario(3, 2, 1));
        let alloc = Allocation::zeros(3, 2);
        assert_eq!(evaluate_utility(&instance, &alloc).unwrap(), 0.0);
    }

    #[test]
    fn utility_one_hot_association() {
        let instance = build_instance(&demo_scenario(3, 2, 2));
        let mut alloc = Allocation::zeros(3, 2);
        alloc.a[(1, 1)] = 1.0;
        assert_eq!(
            evaluate_utility(&instance, &alloc).unwrap(),
            instance.coefficients.compute[(1, 1)]
        );
    }

    #[test]
    fn utility_matches_independent_dot_product() {
        // Oracle: flatten coefficients and the point, take one big dot
        // product in flat-index order.
        let instance = build_instance(&demo_scenario(3, 2, 3));
        let layout = instance.layout();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut alloc = Allocation::zeros(3, 2);
        for u in 0..3 {
            for n in 0..2 {
                alloc.a[(u, n)] = rng.gen::<f64>();
                alloc.b_tilde[(u, n)] = rng.gen::<f64>() * 1e6;
                alloc.x1_tilde[(u, n)] = rng.gen::<f64>();
                alloc.x2_tilde[(u, n)] = rng.gen::<f64>();
            }
        }
        let coef = instance.objective_flat();
        let flat = alloc.to_flat(&layout);
        let oracle: f64 = coef.iter().zip(&flat).map(|(c, v)| c * v).sum();
        let got = evaluate_utility(&instance, &alloc).unwrap();
        assert_relative_eq!(got, oracle, max_relative = 1e-12);
    }

    #[test]
    fn utility_shape_mismatch() {
        let instance = build_instance(&demo_scenario(3, 2, 3));
        let alloc = Allocation::zeros(2, 2);
        assert!(evaluate_utility(&instance, &alloc).is_err());
    }

    #[test]
    fn utility_is_linear() {
        let instance = build_instance(&demo_scenario(4, 2, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut x = Allocation::zeros(4, 2);
            let mut y = Allocation::zeros(4, 2);
            for m in [&mut x, &mut y] {
                for u in 0..4 {
                    for n in 0..2 {
                        m.a[(u, n)] = rng.gen::<f64>();
                        m.b_tilde[(u, n)] = rng.gen::<f64>() * 1e7;
                        m.x1_tilde[(u, n)] = rng.gen::<f64>();
                        m.x2_tilde[(u, n)] = rng.gen::<f64>();
                    }
                }
            }
            let lambda = rng.gen::<f64>();
            let mut mix = Allocation::zeros(4, 2);
            for u in 0..4 {
                for n in 0..2 {
                    mix.a[(u, n)] = lambda * x.a[(u, n)] + (1.0 - lambda) * y.a[(u, n)];
                    mix.b_tilde[(u, n)] =
                        lambda * x.b_tilde[(u, n)] + (1.0 - lambda) * y.b_tilde[(u, n)];
                    mix.x1_tilde[(u, n)] =
                        lambda * x.x1_tilde[(u, n)] + (1.0 - lambda) * y.x1_tilde[(u, n)];
                    mix.x2_tilde[(u, n)] =
                        lambda * x.x2_tilde[(u, n)] + (1.0 - lambda) * y.x2_tilde[(u, n)];
                }
            }
            let ux = evaluate_utility(&instance, &x).unwrap();
            let uy = evaluate_utility(&instance, &y).unwrap();
            let umix = evaluate_utility(&instance, &mix).unwrap();
            assert_relative_eq!(umix, lambda * ux + (1.0 - lambda) * uy, max_relative = 1e-9);
        }
    }

    #[test]
    fn substitution_matches_direct_utility_for_binary_association() {
        // With binary association the substituted variables b~ = a b,
        // x~ = a x evaluate to exactly the direct per-pair utility form.
        let scenario = demo_scenario(3, 2, 8);
        let instance = build_instance(&scenario);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let mut a = Mat::zeros(3, 2);
            let mut b = Mat::zeros(3, 2);
            let mut x1 = Mat::zeros(3, 2);
            let mut x2 = Mat::zeros(3, 2);
            for u in 0..3 {
                let pick = rng.gen_range(0..2usize);
                a[(u, pick)] = 1.0;
                for n in 0..2 {
                    b[(u, n)] = rng.gen::<f64>() * 1e6;
                    x1[(u, n)] = f64::from(u8::from(rng.gen::<bool>()));
                    x2[(u, n)] = f64::from(u8::from(rng.gen::<bool>()));
                }
            }
            // Direct evaluation of the per-pair utility form.
            let mut direct = 0.0;
            for u in 0..3 {
                for n in 0..2 {
                    let c = &instance.coefficients;
                    direct += a[(u, n)] * (c.comm[(u, n)] * b[(u, n)])
                        + a[(u, n)] * c.compute[(u, n)]
                        + a[(u, n)] * x1[(u, n)] * c.cache1[(u, n)]
                        + a[(u, n)] * x2[(u, n)] * c.cache2[(u, n)];
                }
            }
            let alloc = Allocation {
                a: a.clone(),
                b_tilde: Mat::from_fn(3, 2, |u, n| a[(u, n)] * b[(u, n)]),
                x1_tilde: Mat::from_fn(3, 2, |u, n| a[(u, n)] * x1[(u, n)]),
                x2_tilde: Mat::from_fn(3, 2, |u, n| a[(u, n)] * x2[(u, n)]),
            };
            let substituted = evaluate_utility(&instance, &alloc).unwrap();
            assert_eq!(direct, substituted);
        }
    }

    #[test]
    fn zero_allocation_violates_association_and_rates() {
        let instance = build_instance(&demo_scenario(2, 2, 6));
        let report = check_feasibility(&instance, &Allocation::zeros(2, 2), 1e-6);
        let labels: Vec<&str> = report.violations.iter().map(|v| v.label.as_str()).collect();
        assert!(labels.contains(&"assoc_sum[u=0]"));
        assert!(labels.contains(&"comm_rate[u=0]"));
        assert!(labels.contains(&"compute_rate[u=1]"));
    }

    #[test]
    fn cache_capacity_violation_magnitude() {
        let mut scenario = demo_scenario(1, 1, 6);
        scenario.users[0].task.input_size_bits = 11e6;
        scenario.base_stations[0].cache_capacity_bits = 10e6;
        let instance = build_instance(&scenario);
        let mut alloc = Allocation::zeros(1, 1);
        alloc.a[(0, 0)] = 1.0;
        alloc.x1_tilde[(0, 0)] = 1.0;
        let report = check_feasibility(&instance, &alloc, 1e-6);
        let cache = report
            .violations
            .iter()
            .find(|v| v.label == "cache_cap[n=0]")
            .expect("cache violation present");
        assert_relative_eq!(cache.raw, 1e6, max_relative = 1e-12);
    }

    #[test]
    fn without_caching_pins_cache_shares() {
        let instance = build_instance(&demo_scenario(2, 2, 7)).without_caching();
        let layout = instance.layout();
        assert_eq!(instance.var_upper[layout.x1(1, 1)], 0.0);
        assert_eq!(instance.coefficients.cache1.max_abs(), 0.0);
        let mut alloc = Allocation::zeros(2, 2);
        alloc.x1_tilde[(0, 0)] = 0.5;
        let report = check_feasibility(&instance, &alloc, 1e-9);
        assert!(report.violations.iter().any(|v| v.label == "ub(x1[0][0])"));
    }

    #[test]
    fn dump_text_lists_objective_and_rows() {
        let instance = build_instance(&demo_scenario(1, 1, 6));
        let dump = instance.dump_text();
        assert!(dump.starts_with("vralloc instance v1"));
        assert!(dump.contains("vars 4"));
        assert!(dump.contains("assoc_sum[u=0]"));
        assert!(dump.contains("link_bandwidth[u=0][n=0]"));
    }
}
