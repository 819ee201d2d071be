//! The L1 polynomial regression learner: fit a degree-d polynomial
//! minimizing the empirical L1 error, threshold it, and predict with
//! sign(p(x) - t).
//!
//! The fit runs an exact active-set descent (interpolate a basis-sized set
//! of samples, swap one sample per step chosen by a weighted-median line
//! search) and accepts the result only with a full optimality certificate:
//! a multiplier vector lam with Phi^T lam = 0, |lam_i| <= 1, and
//! lam . y equal to the achieved L1 error, which is exactly the optimality
//! condition of the regression's bounded dual program
//!     max y . lam   s.t.   Phi^T lam = 0,  -1 <= lam_i <= 1.
//! If certification fails the fit falls back to solving that dual program
//! with the generic simplex, whose row duals are an optimal coefficient
//! vector. Tests cross-check both paths against the independent
//! u_i >= +/-r_i formulation.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::CoreError;
use crate::geom::{sign_pm, LabeledSample, Point};
use crate::lp::{self, Constraint, LinearProgram, LpError, LpStatus, PivotRule, Relation, Sense};
use crate::poly::{binomial, enumerate_multi_indices, Polynomial};

/// Ceiling on the monomial basis size C(n+d, d) accepted by [`fit_l1`].
pub const BASIS_CAP: usize = 5000;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("training set must be nonempty")]
    EmptySample,
    #[error("basis size C(n+d,d) = {required} exceeds the cap {cap}")]
    BasisCapExceeded { required: usize, cap: usize },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Result of an L1 fit: the polynomial and its training L1 objective.
#[derive(Debug, Clone)]
pub struct L1Fit {
    pub polynomial: Polynomial,
    pub objective: f64,
}

/// Minimizes sum_i |p(x_i) - y_i| over polynomials of degree <= d.
pub fn fit_l1(samples: &[LabeledSample], degree: u32) -> Result<L1Fit, LearnError> {
    fit_l1_with_rule(samples, degree, PivotRule::DantzigThenBland)
}

pub fn fit_l1_with_rule(
    samples: &[LabeledSample],
    degree: u32,
    rule: PivotRule,
) -> Result<L1Fit, LearnError> {
    if samples.is_empty() {
        return Err(LearnError::EmptySample);
    }
    let n = samples[0].point.dim();
    if samples.iter().any(|s| s.point.dim() != n) {
        return Err(LearnError::Core(CoreError::DimensionMismatch {
            expected: n,
            got: samples
                .iter()
                .map(|s| s.point.dim())
                .find(|&d| d != n)
                .unwrap(),
        }));
    }
    let basis_size = binomial(n as u64 + degree as u64, degree as u64) as usize;
    if basis_size > BASIS_CAP {
        return Err(LearnError::BasisCapExceeded {
            required: basis_size,
            cap: BASIS_CAP,
        });
    }
    let indices = enumerate_multi_indices(degree, n);
    let count = samples.len();
    // design matrix, one row of monomial values per sample
    let mut design = vec![0.0f64; count * basis_size];
    for (i, s) in samples.iter().enumerate() {
        let row = &mut design[i * basis_size..(i + 1) * basis_size];
        for (c, idx) in indices.iter().enumerate() {
            row[c] = idx.eval(s.point.coords());
        }
    }
    let labels: Vec<f64> = samples.iter().map(|s| s.label as f64).collect();
    let coeffs = match active_set_l1(&design, &labels, count, basis_size) {
        Some(c) => c,
        None => dual_lp_l1(&design, &labels, count, basis_size, rule)?,
    };
    let polynomial = Polynomial::from_terms(
        n,
        indices
            .iter()
            .cloned()
            .zip(coeffs.iter().copied())
            .filter(|&(_, c)| c != 0.0),
    )?;
    let mut objective = 0.0;
    for (i, s) in samples.iter().enumerate() {
        let row = &design[i * basis_size..(i + 1) * basis_size];
        let mut val = 0.0;
        for (c, &a) in row.iter().zip(&coeffs) {
            val += a * c;
        }
        objective += (val - s.label as f64).abs();
    }
    Ok(L1Fit {
        polynomial,
        objective,
    })
}

/// Fallback path: solve the bounded dual program with the generic simplex
/// and read the coefficients off the row duals.
fn dual_lp_l1(
    design: &[f64],
    labels: &[f64],
    count: usize,
    basis_size: usize,
    rule: PivotRule,
) -> Result<Vec<f64>, LearnError> {
    let rows: Vec<Constraint> = (0..basis_size)
        .map(|c| {
            let coeffs: Vec<f64> = (0..count).map(|i| design[i * basis_size + c]).collect();
            Constraint::new(coeffs, Relation::Eq, 0.0)
        })
        .collect();
    let lp = LinearProgram::new(Sense::Maximize, labels.to_vec(), rows)
        .with_bounds(vec![-1.0; count], vec![1.0; count]);
    let sol = lp::solve_with(&lp, rule)?;
    if sol.status != LpStatus::Optimal {
        return Err(LearnError::Numerical(format!(
            "L1 dual program returned {:?}; it is always feasible and bounded",
            sol.status
        )));
    }
    // certify the recovery: the coefficients' L1 error equals the LP value
    let mut l1 = 0.0;
    for i in 0..count {
        let row = &design[i * basis_size..(i + 1) * basis_size];
        let mut val = 0.0;
        for (c, &a) in row.iter().zip(&sol.duals) {
            val += a * c;
        }
        l1 += (val - labels[i]).abs();
    }
    if (l1 - sol.objective).abs() > 1e-6 * (1.0 + sol.objective.abs()) + 1e-7 * count as f64 {
        return Err(LearnError::Numerical(format!(
            "dual recovery mismatch: polynomial L1 error {l1:.9e} vs program value {:.9e}",
            sol.objective
        )));
    }
    Ok(sol.duals)
}

/// Exact L1 active-set descent. Maintains an interpolation set of `rank`
/// samples, swaps one per iteration via a weighted-median line search, and
/// returns coefficients only when the final multiplier vector certifies
/// optimality (Phi^T lam = 0, |lam| <= 1, lam . y = achieved error).
/// Returns None when certification or the numerics fail; the caller then
/// falls back to the LP route.
fn active_set_l1(
    design: &[f64],
    labels: &[f64],
    count: usize,
    basis_size: usize,
) -> Option<Vec<f64>> {
    use nalgebra::{DMatrix, DVector};
    let rank = basis_size;
    if count <= rank {
        // interpolation-sized problems go straight to the LP route
        return None;
    }
    let debug = std::env::var_os("MM_DEBUG_L1").is_some();
    let at = |i: usize, j: usize| design[i * basis_size + j];

    // warm start: order samples by |least-squares residual| and greedily
    // take the first `rank` independent rows
    let gram = {
        let mut g: DMatrix<f64> = DMatrix::zeros(rank, rank);
        let mut rhs: DVector<f64> = DVector::zeros(rank);
        for i in 0..count {
            let row = &design[i * basis_size..(i + 1) * basis_size];
            for a in 0..rank {
                rhs[a] += row[a] * labels[i];
                for b in a..rank {
                    g[(a, b)] += row[a] * row[b];
                }
            }
        }
        for a in 0..rank {
            for b in 0..a {
                g[(a, b)] = g[(b, a)];
            }
            g[(a, a)] += 1e-10; // ridge so the warm start never hard-fails
        }
        g.cholesky().map(|ch| ch.solve(&rhs))
    };
    let mut order: Vec<usize> = (0..count).collect();
    if let Some(ls) = &gram {
        let mut score: Vec<f64> = Vec::with_capacity(count);
        for i in 0..count {
            let row = &design[i * basis_size..(i + 1) * basis_size];
            let mut v = 0.0;
            for (a, &x) in row.iter().enumerate() {
                v += ls[a] * x;
            }
            score.push((v - labels[i]).abs());
        }
        order.sort_by(|&a, &b| {
            score[a]
                .partial_cmp(&score[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
    }
    // greedy independent-row selection by incremental elimination
    let mut active: Vec<usize> = Vec::with_capacity(rank);
    {
        let mut tri: Vec<Vec<f64>> = Vec::with_capacity(rank); // eliminated rows
        let mut pivots: Vec<usize> = Vec::with_capacity(rank);
        for &i in &order {
            if active.len() == rank {
                break;
            }
            let mut row: Vec<f64> = design[i * basis_size..(i + 1) * basis_size].to_vec();
            let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            for (t, &pc) in tri.iter().zip(&pivots) {
                let f = row[pc];
                if f != 0.0 {
                    for (rv, tv) in row.iter_mut().zip(t) {
                        *rv -= f * tv;
                    }
                }
            }
            // largest remaining entry is the pivot
            let (mut pc, mut pv) = (0usize, 0.0f64);
            for (c, &v) in row.iter().enumerate() {
                if v.abs() > pv {
                    pv = v.abs();
                    pc = c;
                }
            }
            if pv <= 1e-9 * scale {
                continue; // dependent on the rows already chosen
            }
            let inv = 1.0 / row[pc];
            for v in row.iter_mut() {
                *v *= inv;
            }
            tri.push(row);
            pivots.push(pc);
            active.push(i);
        }
        if active.len() < rank {
            if debug {
                eprintln!("l1 active set: design is column-rank-deficient");
            }
            return None;
        }
    }
    active.sort_unstable();
    let mut is_active = vec![false; count];
    for &i in &active {
        is_active[i] = true;
    }
    let basis_matrix = |active: &[usize]| -> DMatrix<f64> {
        DMatrix::from_fn(rank, rank, |p, j| at(active[p], j))
    };
    let mut minv = basis_matrix(&active).try_inverse()?;
    let refresh = |active: &[usize], minv: &mut DMatrix<f64>| -> Option<(DVector<f64>, Vec<f64>)> {
        *minv = basis_matrix(active).try_inverse()?;
        let yz = DVector::from_fn(rank, |p, _| labels[active[p]]);
        let a = &*minv * yz;
        let mut resid = vec![0.0f64; count];
        for i in 0..count {
            let mut v = 0.0;
            for j in 0..rank {
                v += at(i, j) * a[j];
            }
            resid[i] = v - labels[i];
        }
        for &i in active {
            resid[i] = 0.0;
        }
        Some((a, resid))
    };
    let (mut coeff, mut resid) = refresh(&active, &mut minv)?;
    // residuals below this are treated as interpolated; denormal leftovers
    // otherwise feed tau ~ 0 crossings that stall the line search
    const ZERO_SNAP: f64 = 1e-11;
    for r in resid.iter_mut() {
        if r.abs() <= ZERO_SNAP {
            *r = 0.0;
        }
    }
    let sign_of = |r: f64| -> f64 {
        if r > 0.0 {
            1.0
        } else if r < 0.0 {
            -1.0
        } else {
            0.0
        }
    };
    // v = -sum over inactive samples of sign(r_i) * phi_i, kept incremental
    let full_v = |resid: &[f64], is_active: &[bool]| -> DVector<f64> {
        let mut v = DVector::zeros(rank);
        for i in 0..count {
            if !is_active[i] {
                let s = sign_of(resid[i]);
                if s != 0.0 {
                    for j in 0..rank {
                        v[j] -= s * at(i, j);
                    }
                }
            }
        }
        v
    };
    let mut v = full_v(&resid, &is_active);

    let max_iters = 20 * count + 60 * rank + 4000;
    let mut stalls = 0u32;
    let mut since_refresh = 0u32;
    let mut iters = 0usize;
    let mut g = vec![0.0f64; count];
    let mut last_obj = f64::INFINITY;
    let mut flat_refreshes = 0u32;
    loop {
        iters += 1;
        if iters > max_iters {
            if debug {
                eprintln!("l1 active set: hit max_iters = {max_iters}");
            }
            return None;
        }
        if since_refresh >= 256 {
            let (a, r) = refresh(&active, &mut minv)?;
            coeff = a;
            resid = r;
            for r in resid.iter_mut() {
                if r.abs() <= ZERO_SNAP {
                    *r = 0.0;
                }
            }
            v = full_v(&resid, &is_active);
            since_refresh = 0;
            let obj: f64 = resid.iter().map(|r| r.abs()).sum();
            if obj >= last_obj - 1e-10 * (1.0 + obj) {
                flat_refreshes += 1;
                if flat_refreshes >= 2 {
                    if debug {
                        eprintln!("l1 active set: {iters} iters, objective stuck at {obj:.9}");
                    }
                    return None;
                }
            } else {
                flat_refreshes = 0;
            }
            last_obj = obj;
        }
        if debug && iters % 2000 == 0 {
            let obj: f64 = resid.iter().map(|r| r.abs()).sum();
            eprintln!("l1 active set: iter {iters} obj {obj:.9}");
        }
        let lam_act = minv.transpose() * &v;
        // most violated multiplier, ties to the lowest position
        let mut worst = 0usize;
        let mut worst_mag = 0.0;
        for p in 0..rank {
            let mag = lam_act[p].abs();
            if mag > worst_mag + 1e-15 {
                worst_mag = mag;
                worst = p;
            }
        }
        if worst_mag <= 1.0 + 1e-9 {
            // optimal: certify and return
            let out = certify_l1(
                design, labels, count, basis_size, &active, &resid, &lam_act, &coeff,
            );
            if debug {
                eprintln!(
                    "l1 active set: {iters} iters, certified = {}",
                    out.is_some()
                );
            }
            return out;
        }
        let p = worst;
        let step_sign = if lam_act[p] > 0.0 { 1.0 } else { -1.0 };
        // direction u = column p of M^{-1}; residuals move as r_i + t g_i.
        // The per-sample accumulation makes slope = 1 - |lam_p| plus the
        // zero-residual terms at tau = 0+.
        let u: Vec<f64> = (0..rank).map(|j| minv[(j, p)]).collect();
        let mut slope = 1.0f64;
        let mut crossings: Vec<(f64, f64, usize)> = Vec::new(); // (tau, weight, sample)
        for i in 0..count {
            if is_active[i] {
                g[i] = 0.0;
                continue;
            }
            let mut gi = 0.0;
            for j in 0..rank {
                gi += at(i, j) * u[j];
            }
            g[i] = gi;
            let sg = step_sign * gi;
            if sg.abs() <= 1e-13 {
                continue;
            }
            if resid[i] == 0.0 || (resid[i] > 0.0) == (sg > 0.0) {
                slope += sg.abs();
            } else {
                slope -= sg.abs();
                crossings.push((-resid[i] / sg, sg.abs(), i));
            }
        }
        let incoming: usize;
        let mut tau = 0.0f64;
        if slope >= 0.0 {
            // degenerate: blocked at tau = 0 by a zero-residual sample
            let mut best: Option<(f64, usize)> = None;
            for i in 0..count {
                if is_active[i] || resid[i] != 0.0 {
                    continue;
                }
                if g[i].abs() > 1e-10 && best.map_or(true, |(bg, _)| g[i].abs() > bg) {
                    best = Some((g[i].abs(), i));
                }
            }
            let Some((_, i)) = best else {
                if debug {
                    eprintln!("l1 active set: {iters} iters, no descent and no blocker");
                }
                return None;
            };
            incoming = i;
            stalls += 1;
            if stalls > 2 * rank as u32 + 50 {
                if debug {
                    eprintln!("l1 active set: {iters} iters, stalled");
                }
                return None;
            }
        } else {
            crossings.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.2.cmp(&b.2)));
            let mut cum = slope;
            let mut hit: Option<(f64, usize)> = None;
            for &(t, w, i) in &crossings {
                cum += 2.0 * w;
                if cum >= 0.0 {
                    hit = Some((t, i));
                    break;
                }
            }
            let Some((t, i)) = hit else {
                if debug {
                    eprintln!("l1 active set: {iters} iters, ray stayed descending");
                }
                return None;
            };
            incoming = i;
            tau = t.max(0.0);
            if tau <= 1e-12 {
                stalls += 1;
                if stalls > 2 * rank as u32 + 50 {
                    if debug {
                        eprintln!("l1 active set: {iters} iters, stalled on tiny steps");
                    }
                    return None;
                }
            } else {
                stalls = 0;
            }
        }
        // take the step and swap `incoming` for active position p,
        // updating v for every inactive sample whose residual sign flips
        let outgoing = active[p];
        if tau > 0.0 {
            for (j, c) in coeff.iter_mut().enumerate() {
                *c += step_sign * tau * u[j];
            }
            for i in 0..count {
                if is_active[i] {
                    continue;
                }
                let old_s = sign_of(resid[i]);
                resid[i] += step_sign * tau * g[i];
                if resid[i].abs() <= ZERO_SNAP {
                    resid[i] = 0.0;
                }
                let new_s = sign_of(resid[i]);
                if new_s != old_s {
                    let d = new_s - old_s;
                    for j in 0..rank {
                        v[j] -= d * at(i, j);
                    }
                }
            }
        }
        {
            // incoming leaves the inactive sum, outgoing joins it
            let s_in = sign_of(resid[incoming]);
            if s_in != 0.0 {
                for j in 0..rank {
                    v[j] += s_in * at(incoming, j);
                }
            }
            resid[incoming] = 0.0;
            resid[outgoing] = if tau <= ZERO_SNAP { 0.0 } else { step_sign * tau };
            let s_out = sign_of(resid[outgoing]);
            if s_out != 0.0 {
                for j in 0..rank {
                    v[j] -= s_out * at(outgoing, j);
                }
            }
        }
        is_active[outgoing] = false;
        is_active[incoming] = true;
        active[p] = incoming;
        since_refresh += 1;
        // Sherman-Morrison update of M^{-1} for the replaced row
        let mut delta = vec![0.0f64; rank];
        for j in 0..rank {
            delta[j] = at(incoming, j) - at(outgoing, j);
        }
        let q: Vec<f64> = (0..rank).map(|j| minv[(j, p)]).collect();
        let mut denom = 1.0;
        for j in 0..rank {
            denom += delta[j] * q[j];
        }
        if denom.abs() < 1e-10 {
            let (a, r) = refresh(&active, &mut minv)?;
            coeff = a;
            resid = r;
            v = full_v(&resid, &is_active);
            since_refresh = 0;
            continue;
        }
        // z = delta^T M^{-1}
        let mut z = vec![0.0f64; rank];
        for c in 0..rank {
            let mut acc = 0.0;
            for j in 0..rank {
                acc += delta[j] * minv[(j, c)];
            }
            z[c] = acc;
        }
        for r_ in 0..rank {
            let f = q[r_] / denom;
            if f != 0.0 {
                for c in 0..rank {
                    minv[(r_, c)] -= f * z[c];
                }
            }
        }
    }
}

/// Builds the dual certificate for the active-set solution and returns the
/// full coefficient vector when it verifies.
#[allow(clippy::too_many_arguments)]
fn certify_l1(
    design: &[f64],
    labels: &[f64],
    count: usize,
    basis_size: usize,
    active: &[usize],
    resid: &[f64],
    lam_act: &nalgebra::DVector<f64>,
    coeff: &nalgebra::DVector<f64>,
) -> Option<Vec<f64>> {
    // lam = -(interior multipliers) so that lam . y = sum |r|
    let mut lam = vec![0.0f64; count];
    for i in 0..count {
        if resid[i] > 0.0 {
            lam[i] = -1.0;
        } else if resid[i] < 0.0 {
            lam[i] = 1.0;
        }
    }
    for (p, &i) in active.iter().enumerate() {
        lam[i] = -lam_act[p];
    }
    if lam.iter().any(|&l| l.abs() > 1.0 + 1e-8) {
        return None;
    }
    let mut objective = 0.0;
    for &r in resid.iter() {
        objective += r.abs();
    }
    let mut col_scale = 1.0f64;
    for c in 0..basis_size {
        let mut dot = 0.0;
        let mut scale = 0.0f64;
        for i in 0..count {
            let v = design[i * basis_size + c];
            dot += lam[i] * v;
            scale = scale.max(v.abs());
        }
        col_scale = col_scale.max(scale);
        if dot.abs() > 1e-7 * (1.0 + scale) * (count as f64).sqrt() {
            return None;
        }
    }
    let _ = col_scale;
    let mut dual_val = 0.0;
    for i in 0..count {
        dual_val += lam[i] * labels[i];
    }
    if (dual_val - objective).abs() > 1e-6 * (1.0 + objective.abs()) {
        return None;
    }
    Some(coeff.iter().copied().collect())
}

/// Picks the threshold minimizing empirical 0-1 error of sign(p(x) - t)
/// over the midpoints of consecutive distinct fitted values plus the two
/// outside cuts; ties go to the smallest t. Returns (t, error fraction).
pub fn select_threshold(
    polynomial: &Polynomial,
    samples: &[LabeledSample],
) -> Result<(f64, f64), LearnError> {
    if samples.is_empty() {
        return Err(LearnError::EmptySample);
    }
    let count = samples.len();
    let mut scored: Vec<(f64, i8)> = samples
        .iter()
        .map(|s| Ok((polynomial.eval(s.point.coords())?, s.label)))
        .collect::<Result<_, CoreError>>()?;
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // prefix_pos[i] = #positives among the first i scored samples
    let mut prefix_pos = vec![0usize; count + 1];
    for (i, &(_, y)) in scored.iter().enumerate() {
        prefix_pos[i + 1] = prefix_pos[i] + usize::from(y == 1);
    }
    let total_pos = prefix_pos[count];
    // candidate cuts; everything at or above the cut predicts +1
    let mut candidates = Vec::with_capacity(count + 1);
    candidates.push(scored[0].0 - 1.0);
    for w in scored.windows(2) {
        if w[1].0 > w[0].0 {
            candidates.push(0.5 * (w[0].0 + w[1].0));
        }
    }
    candidates.push(scored[count - 1].0 + 1.0);
    let mut best_t = candidates[0];
    let mut best_err = usize::MAX;
    for &t in &candidates {
        // first index with value >= t
        let split = scored.partition_point(|&(v, _)| v < t);
        // errors: positives below the cut + negatives at or above it
        let err = prefix_pos[split] + (count - split) - (total_pos - prefix_pos[split]);
        if err < best_err {
            best_err = err;
            best_t = t;
        }
    }
    Ok((best_t, best_err as f64 / count as f64))
}

/// Prediction rule sign(p(x) - t) with sign(0) = +1.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub polynomial: Polynomial,
    pub threshold: f64,
}

impl Hypothesis {
    pub fn predict(&self, x: &Point) -> Result<i8, CoreError> {
        Ok(sign_pm(self.polynomial.eval(x.coords())? - self.threshold))
    }

    /// Polynomial text block followed by a `threshold,<t>` line.
    pub fn to_text(&self) -> String {
        let mut s = self.polynomial.to_text();
        let _ = writeln!(s, "threshold,{:.16e}", self.threshold);
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let trimmed = text.trim_end();
        let split = trimmed
            .rfind("threshold,")
            .ok_or_else(|| CoreError::Parse("missing threshold line".into()))?;
        let polynomial = Polynomial::from_text(&trimmed[..split])?;
        let threshold: f64 = trimmed[split + "threshold,".len()..]
            .trim()
            .parse()
            .map_err(|e| CoreError::Parse(format!("bad threshold: {e}")))?;
        Ok(Self {
            polynomial,
            threshold,
        })
    }
}

/// fit_l1 then select_threshold.
pub fn agnostic_learn(train: &[LabeledSample], degree: u32) -> Result<Hypothesis, LearnError> {
    agnostic_learn_with_rule(train, degree, PivotRule::DantzigThenBland)
}

pub fn agnostic_learn_with_rule(
    train: &[LabeledSample],
    degree: u32,
    rule: PivotRule,
) -> Result<Hypothesis, LearnError> {
    let fit = fit_l1_with_rule(train, degree, rule)?;
    let (threshold, _) = select_threshold(&fit.polynomial, train)?;
    Ok(Hypothesis {
        polynomial: fit.polynomial,
        threshold,
    })
}

/// Fraction of test samples with sign(p(x) - t) != y.
pub fn evaluate(h: &Hypothesis, test: &[LabeledSample]) -> Result<f64, LearnError> {
    if test.is_empty() {
        return Err(LearnError::EmptySample);
    }
    let mut wrong = 0usize;
    for s in test {
        if h.predict(&s.point)? != s.label {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / test.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleFamily {
    LogConcave,
    SubExponential,
    SubGaussian,
    KWise,
}

/// Degree schedule k(m, eps, sigma) per distribution family, with the
/// unknowable absolute constants exposed as (c1, c2, c3) and a hard cap.
/// log m is evaluated as ln(max(m, 2)) and the inner logarithm's argument
/// is floored at e, which keeps the formula finite and monotone on the
/// whole parameter domain. The schedule is advisory at desk scale;
/// experiments sweep the degree directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeSchedule {
    pub family: ScheduleFamily,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub k_max: usize,
}

impl DegreeSchedule {
    pub fn new(family: ScheduleFamily) -> Self {
        Self {
            family,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            k_max: 10,
        }
    }

    pub fn with_constants(mut self, c1: f64, c2: f64, c3: f64) -> Result<Self, LearnError> {
        if !(c1 > 0.0 && c2 > 0.0 && c3 > 0.0) {
            return Err(LearnError::BadParameter(
                "schedule constants must be positive".into(),
            ));
        }
        self.c1 = c1;
        self.c2 = c2;
        self.c3 = c3;
        Ok(self)
    }

    pub fn with_cap(mut self, k_max: usize) -> Result<Self, LearnError> {
        if k_max == 0 {
            return Err(LearnError::BadParameter("k_max must be at least 1".into()));
        }
        self.k_max = k_max;
        Ok(self)
    }

    /// The formula value before rounding and capping.
    pub fn raw_value(&self, m: usize, eps: f64, sigma: f64) -> Result<f64, LearnError> {
        if m == 0 {
            return Err(LearnError::BadParameter("m must be at least 1".into()));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(LearnError::BadParameter(format!(
                "eps must lie in (0,1), got {eps}"
            )));
        }
        let uses_sigma = self.family != ScheduleFamily::LogConcave;
        if uses_sigma && !(sigma > 0.0 && sigma < 1.0) {
            return Err(LearnError::BadParameter(format!(
                "sigma must lie in (0,1), got {sigma}"
            )));
        }
        let l = (m.max(2) as f64).ln();
        let denom = if uses_sigma { sigma * eps } else { eps };
        let arg = (self.c2 * l / denom).max(std::f64::consts::E);
        let inner = arg.ln().powf(self.c3 * m as f64) / denom.powi(4);
        let raw = self.c1 * inner;
        Ok(match self.family {
            ScheduleFamily::SubGaussian | ScheduleFamily::KWise => raw,
            ScheduleFamily::LogConcave | ScheduleFamily::SubExponential => raw.exp(),
        })
    }

    /// raw value rounded up and clamped to k_max.
    pub fn degree(&self, m: usize, eps: f64, sigma: f64) -> Result<usize, LearnError> {
        let raw = self.raw_value(m, eps, sigma)?;
        let k = if raw.is_finite() {
            raw.ceil().min(self.k_max as f64) as usize
        } else {
            self.k_max
        };
        Ok(k.max(1))
    }
}
