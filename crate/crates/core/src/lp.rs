//! Dense revised simplex for general-form linear programs.
//!
//! Two-phase bounded-variable simplex with Bland's anti-cycling pivot rule.
//! Every scan runs in fixed index order and ties break toward the lowest
//! variable index, so repeated solves of the same program are byte-identical.
//! Optimal solutions carry row duals; the solver verifies primal feasibility
//! (1e-9) and the relative duality gap (1e-6) before reporting `Optimal` and
//! returns a numerical-failure error instead of a silently wrong answer.

use thiserror::Error;

const FEAS_TOL: f64 = 1e-9;
const GAP_TOL: f64 = 1e-6;
const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const REFRESH_EVERY: u64 = 64;
const REFACTOR_EVERY: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// General-form program: optimize `objective . x` subject to row constraints
/// and per-variable bounds (infinite bounds allowed).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// Program with all variables free.
    pub fn new(sense: Sense, objective: Vec<f64>, constraints: Vec<Constraint>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints,
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn with_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed("bound vectors must match variable count".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("objective has non-finite coefficient".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(LpError::Malformed(format!("row {i} has non-finite data")));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() {
                return Err(LpError::Malformed(format!("variable {j} has NaN bound")));
            }
        }
        Ok(())
    }

    /// Stable textual dump for debugging: objective, rows, then bounds.
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        let fmt = |v: &[f64]| -> String {
            v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(s, "{sense} {}", fmt(&self.objective));
        for row in &self.constraints {
            let rel = match row.relation {
                Relation::Le => "<=",
                Relation::Eq => "==",
                Relation::Ge => ">=",
            };
            let _ = writeln!(s, "row {} {rel} {:.16e}", fmt(&row.coeffs), row.rhs);
        }
        let _ = writeln!(s, "lower {}", fmt(&self.lower));
        let _ = writeln!(s, "upper {}", fmt(&self.upper));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `primal`, `duals`, and the objective values are
/// meaningful only when `status == Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
}

impl LpSolution {
    fn non_optimal(status: LpStatus) -> Self {
        Self {
            status,
            primal: Vec::new(),
            duals: Vec::new(),
            objective: f64::NAN,
            dual_objective: f64::NAN,
        }
    }
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Entering-variable selection. `Bland` is the default; `DantzigThenBland`
/// picks the most violated reduced cost and drops back to Bland's rule
/// while pivots are degenerate, which keeps the anti-cycling guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    Bland,
    DantzigThenBland,
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_with(lp, PivotRule::Bland)
}

pub fn solve_with(lp: &LinearProgram, rule: PivotRule) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    for j in 0..n {
        if lp.lower[j] > lp.upper[j] {
            return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
        }
    }
    Simplex::new(lp, rule).run()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    FreeNonbasic,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    rule: PivotRule,
    m: usize,
    n_struct: usize,
    ncols: usize, // structural + slack + artificial
    cols: Vec<f64>, // column-major structural block, m * n_struct
    b: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>, // phase-2 internal (minimize) costs
    art_sign: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: Vec<f64>, // m * m row-major
    x: Vec<f64>,
    // scratch
    pi: Vec<f64>,
    w: Vec<f64>,
    degenerate_streak: u32,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, rule: PivotRule) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let ncols = n + 2 * m;
        let mut cols = vec![0.0; m * n];
        for (i, row) in lp.constraints.iter().enumerate() {
            for (j, &a) in row.coeffs.iter().enumerate() {
                cols[j * m + i] = a;
            }
        }
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; ncols];
        for j in 0..n {
            cost[j] = sign * lp.objective[j];
        }
        let mut lower = Vec::with_capacity(ncols);
        let mut upper = Vec::with_capacity(ncols);
        lower.extend_from_slice(&lp.lower);
        upper.extend_from_slice(&lp.upper);
        for row in &lp.constraints {
            match row.relation {
                Relation::Le => {
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                }
                Relation::Ge => {
                    lower.push(f64::NEG_INFINITY);
                    upper.push(0.0);
                }
                Relation::Eq => {
                    lower.push(0.0);
                    upper.push(0.0);
                }
            }
        }
        // artificial bounds start as [0, inf); pinned to [0, 0] for phase 2
        for _ in 0..m {
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }
        Self {
            lp,
            rule,
            m,
            n_struct: n,
            ncols,
            cols,
            b: lp.constraints.iter().map(|r| r.rhs).collect(),
            lower,
            upper,
            cost,
            art_sign: vec![1.0; m],
            state: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            x: Vec::new(),
            pi: vec![0.0; m],
            w: vec![0.0; m],
            degenerate_streak: 0,
        }
    }

    #[inline]
    fn col_entry(&self, j: usize, i: usize) -> f64 {
        if j < self.n_struct {
            self.cols[j * self.m + i]
        } else if j < self.n_struct + self.m {
            if j - self.n_struct == i {
                1.0
            } else {
                0.0
            }
        } else if j - self.n_struct - self.m == i {
            self.art_sign[i]
        } else {
            0.0
        }
    }

    /// w = Binv * A_j
    fn ftran(&mut self, j: usize) {
        let m = self.m;
        if j < self.n_struct {
            let col = &self.cols[j * m..(j + 1) * m];
            for i in 0..m {
                let row = &self.binv[i * m..(i + 1) * m];
                let mut acc = 0.0;
                for (bv, cv) in row.iter().zip(col) {
                    acc += bv * cv;
                }
                self.w[i] = acc;
            }
        } else if j < self.n_struct + m {
            let r = j - self.n_struct;
            for i in 0..m {
                self.w[i] = self.binv[i * m + r];
            }
        } else {
            let r = j - self.n_struct - m;
            let s = self.art_sign[r];
            for i in 0..m {
                self.w[i] = s * self.binv[i * m + r];
            }
        }
    }

    /// pi = c_B^T Binv for the given cost vector.
    fn compute_pi(&mut self, costs: &[f64]) {
        let m = self.m;
        for v in self.pi.iter_mut() {
            *v = 0.0;
        }
        for r in 0..m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for (p, bv) in self.pi.iter_mut().zip(row) {
                    *p += cb * bv;
                }
            }
        }
    }

    #[inline]
    fn reduced_cost(&self, j: usize, costs: &[f64]) -> f64 {
        let m = self.m;
        if j < self.n_struct {
            let col = &self.cols[j * m..(j + 1) * m];
            let mut acc = 0.0;
            for (p, a) in self.pi.iter().zip(col) {
                acc += p * a;
            }
            costs[j] - acc
        } else if j < self.n_struct + m {
            costs[j] - self.pi[j - self.n_struct]
        } else {
            let r = j - self.n_struct - m;
            costs[j] - self.art_sign[r] * self.pi[r]
        }
    }

    fn init_basis(&mut self) {
        let m = self.m;
        self.x = vec![0.0; self.ncols];
        self.state = vec![VarState::AtLower; self.ncols];
        for j in 0..self.n_struct + m {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_finite() {
                self.state[j] = VarState::AtLower;
                self.x[j] = l;
            } else if u.is_finite() {
                self.state[j] = VarState::AtUpper;
                self.x[j] = u;
            } else {
                self.state[j] = VarState::FreeNonbasic;
                self.x[j] = 0.0;
            }
        }
        // residual determines artificial signs; basis starts as artificials
        let mut resid = self.b.clone();
        for j in 0..self.n_struct {
            let v = self.x[j];
            if v != 0.0 {
                let col = &self.cols[j * m..(j + 1) * m];
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= a * v;
                }
            }
        }
        // slacks start at 0, no contribution
        self.basis = Vec::with_capacity(m);
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.art_sign[i] = if resid[i] >= 0.0 { 1.0 } else { -1.0 };
            let art = self.n_struct + m + i;
            self.basis.push(art);
            self.state[art] = VarState::Basic(i);
            self.x[art] = resid[i].abs();
            self.binv[i * m + i] = self.art_sign[i];
        }
    }

    fn refresh_basic_values(&mut self) {
        let m = self.m;
        let mut rhs = self.b.clone();
        for j in 0..self.ncols {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let v = self.x[j];
            if v != 0.0 {
                if j < self.n_struct {
                    let col = &self.cols[j * m..(j + 1) * m];
                    for (r, a) in rhs.iter_mut().zip(col) {
                        *r -= a * v;
                    }
                } else if j < self.n_struct + m {
                    rhs[j - self.n_struct] -= v;
                } else {
                    let r = j - self.n_struct - m;
                    rhs[r] -= self.art_sign[r] * v;
                }
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for (bv, rv) in row.iter().zip(&rhs) {
                acc += bv * rv;
            }
            self.x[self.basis[i]] = acc;
        }
    }

    /// Rebuild Binv from the basis columns by Gauss-Jordan elimination.
    fn refactorize(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut mat = vec![0.0; m * m]; // basis matrix, row-major
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                mat[i * m + k] = self.col_entry(j, i);
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            // partial pivoting, first maximal row wins
            let mut piv_row = k;
            let mut piv_val = mat[k * m + k].abs();
            for i in (k + 1)..m {
                let v = mat[i * m + k].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = i;
                }
            }
            if piv_val < 1e-13 {
                return Err(LpError::Numerical("singular basis during refactorization".into()));
            }
            if piv_row != k {
                // a row swap is just another row operation applied to both halves
                for c in 0..m {
                    mat.swap(k * m + c, piv_row * m + c);
                    inv.swap(k * m + c, piv_row * m + c);
                }
            }
            let p = mat[k * m + k];
            for c in 0..m {
                mat[k * m + c] /= p;
                inv[k * m + c] /= p;
            }
            for i in 0..m {
                if i != k {
                    let f = mat[i * m + k];
                    if f != 0.0 {
                        for c in 0..m {
                            mat[i * m + c] -= f * mat[k * m + c];
                            inv[i * m + c] -= f * inv[k * m + c];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        Ok(())
    }

    /// One simplex phase; returns None on optimality, or Unbounded.
    fn iterate(&mut self, costs: &[f64], phase_one: bool) -> Result<Option<LpStatus>, LpError> {
        let max_iters = 200 * (self.ncols as u64 + self.m as u64) + 20_000;
        let mut iters: u64 = 0;
        loop {
            iters += 1;
            if iters > max_iters {
                return Err(LpError::Numerical(format!(
                    "iteration limit exceeded ({max_iters})"
                )));
            }
            if iters % REFRESH_EVERY == 0 {
                self.refresh_basic_values();
            }
            if iters % REFACTOR_EVERY == 0 {
                self.refactorize()?;
                self.refresh_basic_values();
            }
            self.compute_pi(costs);
            let entering = self.price(costs);
            let Some((j, dir)) = entering else {
                return Ok(None); // optimal for this phase
            };
            self.ftran(j);
            // ratio test: largest step t >= 0 keeping everything in bounds
            let mut t_best = f64::INFINITY;
            let mut leave: Option<usize> = None; // row index
            for r in 0..self.m {
                let rate = -dir * self.w[r];
                if rate.abs() <= PIVOT_TOL {
                    continue;
                }
                let k = self.basis[r];
                let xk = self.x[k];
                let t = if rate > 0.0 {
                    let u = self.upper[k];
                    if u.is_finite() {
                        (u - xk) / rate
                    } else {
                        continue;
                    }
                } else {
                    let l = self.lower[k];
                    if l.is_finite() {
                        (l - xk) / rate
                    } else {
                        continue;
                    }
                };
                let t = t.max(0.0);
                if t < t_best - 0.0 {
                    t_best = t;
                    leave = Some(r);
                } else if t == t_best {
                    // Bland tie-break: lowest leaving variable index
                    if let Some(cur) = leave {
                        if self.basis[r] < self.basis[cur] {
                            leave = Some(r);
                        }
                    } else {
                        leave = Some(r);
                    }
                }
            }
            let span = self.upper[j] - self.lower[j]; // inf when a bound is infinite
            let flip = span.is_finite() && span < t_best;
            if flip {
                // bound flip: no basis change
                let t = span;
                for r in 0..self.m {
                    let k = self.basis[r];
                    self.x[k] -= t * dir * self.w[r];
                }
                self.x[j] += dir * t;
                self.state[j] = if dir > 0.0 {
                    self.x[j] = self.upper[j];
                    VarState::AtUpper
                } else {
                    self.x[j] = self.lower[j];
                    VarState::AtLower
                };
                self.degenerate_streak = 0;
                continue;
            }
            if t_best.is_infinite() {
                if phase_one {
                    return Err(LpError::Numerical(
                        "unbounded ray in phase 1".into(),
                    ));
                }
                return Ok(Some(LpStatus::Unbounded));
            }
            let r = leave.expect("finite step must have a blocking row");
            if t_best <= 1e-13 {
                self.degenerate_streak = self.degenerate_streak.saturating_add(1);
            } else {
                self.degenerate_streak = 0;
            }
            let pivot = self.w[r];
            if pivot.abs() <= PIVOT_TOL {
                self.refactorize()?;
                self.refresh_basic_values();
                continue;
            }
            // update values
            for i in 0..self.m {
                let k = self.basis[i];
                self.x[k] -= t_best * dir * self.w[i];
            }
            self.x[j] += dir * t_best;
            let leaving = self.basis[r];
            // snap the leaving variable exactly to the bound it hit
            let rate = -dir * pivot;
            self.x[leaving] = if rate > 0.0 {
                self.state[leaving] = VarState::AtUpper;
                self.upper[leaving]
            } else {
                self.state[leaving] = VarState::AtLower;
                self.lower[leaving]
            };
            self.basis[r] = j;
            self.state[j] = VarState::Basic(r);
            // Binv <- E * Binv with the eta column w
            let m = self.m;
            let inv_p = 1.0 / pivot;
            for c in 0..m {
                self.binv[r * m + c] *= inv_p;
            }
            for i in 0..m {
                if i != r {
                    let f = self.w[i];
                    if f != 0.0 {
                        let (head, tail) = self.binv.split_at_mut(r.max(i) * m);
                        let (row_i, row_r) = if i < r {
                            (&mut head[i * m..(i + 1) * m], &tail[..m])
                        } else {
                            (&mut tail[..m], &head[r * m..(r + 1) * m])
                        };
                        for (a, b) in row_i.iter_mut().zip(row_r.iter()) {
                            *a -= f * b;
                        }
                    }
                }
            }
        }
    }

    /// Entering variable and its direction (+1 up from lower/free, -1 down
    /// from upper/free), or None when optimal.
    fn price(&self, costs: &[f64]) -> Option<(usize, f64)> {
        let bland = match self.rule {
            PivotRule::Bland => true,
            PivotRule::DantzigThenBland => self.degenerate_streak >= 40,
        };
        let mut best: Option<(usize, f64, f64)> = None; // (j, dir, |d|)
        for j in 0..self.ncols {
            match self.state[j] {
                VarState::Basic(_) => continue,
                _ => {}
            }
            if self.lower[j] == self.upper[j] {
                continue; // fixed
            }
            let d = self.reduced_cost(j, costs);
            let cand = match self.state[j] {
                VarState::AtLower => {
                    if d < -COST_TOL {
                        Some((1.0, -d))
                    } else {
                        None
                    }
                }
                VarState::AtUpper => {
                    if d > COST_TOL {
                        Some((-1.0, d))
                    } else {
                        None
                    }
                }
                VarState::FreeNonbasic => {
                    if d < -COST_TOL {
                        Some((1.0, -d))
                    } else if d > COST_TOL {
                        Some((-1.0, d))
                    } else {
                        None
                    }
                }
                VarState::Basic(_) => unreachable!(),
            };
            if let Some((dir, mag)) = cand {
                if bland {
                    return Some((j, dir));
                }
                match best {
                    Some((_, _, bm)) if bm >= mag => {}
                    _ => best = Some((j, dir, mag)),
                }
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn run(mut self) -> Result<LpSolution, LpError> {
        self.init_basis();
        let m = self.m;
        let b_scale = 1.0 + self.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));

        // phase 1: minimize total artificial mass
        let mut phase1_cost = vec![0.0; self.ncols];
        for j in (self.n_struct + m)..self.ncols {
            phase1_cost[j] = 1.0;
        }
        let needs_phase1 = (0..m).any(|i| self.x[self.n_struct + m + i] > 0.0);
        if needs_phase1 {
            if let Some(status) = self.iterate(&phase1_cost, true)? {
                return Ok(LpSolution::non_optimal(status));
            }
            self.refresh_basic_values();
            let infeas: f64 = (0..m)
                .map(|i| self.x[self.n_struct + m + i].max(0.0))
                .sum();
            if infeas > FEAS_TOL * b_scale * 10.0 {
                return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
            }
        }
        // pin artificials at zero for phase 2
        for j in (self.n_struct + m)..self.ncols {
            self.upper[j] = 0.0;
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.state[j] = VarState::AtLower;
                self.x[j] = 0.0;
            }
        }

        let costs = self.cost.clone();
        if let Some(status) = self.iterate(&costs, false)? {
            return Ok(LpSolution::non_optimal(status));
        }
        self.refresh_basic_values();
        self.compute_pi(&costs);

        // final certificates: primal feasibility, dual sign conditions, gap
        let n = self.n_struct;
        let primal: Vec<f64> = self.x[..n].to_vec();
        let mut resid_max = 0.0f64;
        for (i, row) in self.lp.constraints.iter().enumerate() {
            let mut ax = 0.0;
            for (a, v) in row.coeffs.iter().zip(&primal) {
                ax += a * v;
            }
            ax += self.x[n + i]; // slack
            let r = (ax - self.b[i]).abs();
            resid_max = resid_max.max(r);
        }
        if resid_max > FEAS_TOL * b_scale * 10.0 {
            return Err(LpError::Numerical(format!(
                "primal residual {resid_max:.3e} exceeds tolerance"
            )));
        }
        for j in 0..n {
            let v = self.x[j];
            if v < self.lower[j] - FEAS_TOL * 10.0 * (1.0 + self.lower[j].abs())
                || v > self.upper[j] + FEAS_TOL * 10.0 * (1.0 + self.upper[j].abs())
            {
                return Err(LpError::Numerical(format!(
                    "variable {j} violates its bounds (value {v:.6e})"
                )));
            }
        }

        let mut objective = 0.0;
        for j in 0..n {
            objective += costs[j] * self.x[j];
        }
        // Lagrangian dual value with nonbasic variables priced at their bound
        let mut dual_obj = 0.0;
        for i in 0..m {
            dual_obj += self.pi[i] * self.b[i];
        }
        for j in 0..(n + m) {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let d = self.reduced_cost(j, &costs);
            if self.lower[j] == self.upper[j] {
                // fixed variable: priced at its pinned value whatever the sign
                dual_obj += d * self.lower[j];
                continue;
            }
            if d.abs() <= COST_TOL * 100.0 * (1.0 + objective.abs()) {
                continue;
            }
            let contrib = if d > 0.0 {
                if self.lower[j].is_finite() {
                    d * self.lower[j]
                } else {
                    return Err(LpError::Numerical(format!(
                        "dual infeasibility on free/unbounded variable {j}"
                    )));
                }
            } else if self.upper[j].is_finite() {
                d * self.upper[j]
            } else {
                return Err(LpError::Numerical(format!(
                    "dual infeasibility on free/unbounded variable {j}"
                )));
            };
            dual_obj += contrib;
        }
        let gap = (objective - dual_obj).abs();
        if gap > GAP_TOL * (1.0 + objective.abs()) {
            return Err(LpError::Numerical(format!(
                "duality gap {gap:.3e} exceeds tolerance (obj {objective:.6e})"
            )));
        }

        let sense_sign = match self.lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let duals: Vec<f64> = self.pi.iter().map(|p| sense_sign * p).collect();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            primal,
            duals,
            objective: sense_sign * objective,
            dual_objective: sense_sign * dual_obj,
        })
    }
}
