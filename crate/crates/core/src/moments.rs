//! Moment vectors over I(k, n): empirical averages, closed forms for the
//! product families, directional moments, and the beta growth profile
//! beta_k = sum_{j<=k} mu_{2j}^{-1/(2j)}.
//!
//! All averages use compensated (Kahan) summation; high-degree monomials
//! have a large dynamic range and plain accumulation loses digits.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dist::DistributionSpec;
use crate::geom::Point;
use crate::poly::{enumerate_multi_indices, MultiIndex};

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample must be nonempty")]
    EmptySample,
    #[error("exact moments unsupported for this family: {0}")]
    UnsupportedFamily(String),
    #[error("directional moment order must be a positive even integer <= 12, got {0}")]
    BadOrder(usize),
    #[error("direction must be a unit vector")]
    BadDirection,
    #[error("degenerate direction set: {0}")]
    DegenerateDirections(String),
    #[error("exact route needs axis directions for non-Gaussian families")]
    ExactRouteNeedsAxisDirections,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Kahan accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// The values sigma_I = E[X(I)] for every I in I(k, n), in graded-lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    n: usize,
    k: u32,
    indices: Vec<MultiIndex>,
    values: Vec<f64>,
}

impl MomentVector {
    fn new(n: usize, k: u32, values: Vec<f64>) -> Self {
        let indices = enumerate_multi_indices(k, n);
        debug_assert_eq!(indices.len(), values.len());
        Self {
            n,
            k,
            indices,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// (index, value) pairs in graded-lex order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.indices.iter().zip(self.values.iter().copied())
    }

    pub fn get(&self, idx: &MultiIndex) -> Option<f64> {
        self.indices
            .binary_search_by(|probe| probe.cmp(idx))
            .ok()
            .map(|pos| self.values[pos])
    }

    /// One line per index: exponents then the value, space separated, in
    /// graded-lex order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (idx, v) in self.entries() {
            for e in idx.exponents() {
                let _ = write!(s, "{e} ");
            }
            let _ = writeln!(s, "{v:.16e}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, MomentError> {
        let mut rows: Vec<(MultiIndex, f64)> = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(MomentError::Parse(format!("short line: {line}")));
            }
            let exps: Result<Vec<u32>, _> =
                toks[..toks.len() - 1].iter().map(|t| t.parse()).collect();
            let exps = exps.map_err(|e| MomentError::Parse(format!("bad exponent: {e}")))?;
            let v: f64 = toks[toks.len() - 1]
                .parse()
                .map_err(|e| MomentError::Parse(format!("bad value: {e}")))?;
            rows.push((
                MultiIndex::new(exps).map_err(|e| MomentError::Parse(e.to_string()))?,
                v,
            ));
        }
        if rows.is_empty() {
            return Err(MomentError::Parse("empty moment file".into()));
        }
        let n = rows[0].0.dim();
        let k = rows.iter().map(|(i, _)| i.total_degree()).max().unwrap();
        let expected = enumerate_multi_indices(k, n);
        if rows.len() != expected.len() {
            return Err(MomentError::Parse(format!(
                "expected {} rows for k={k}, n={n}, found {}",
                expected.len(),
                rows.len()
            )));
        }
        let mut values = vec![0.0; rows.len()];
        for (pos, idx) in expected.iter().enumerate() {
            if rows[pos].0 != *idx {
                return Err(MomentError::Parse("rows not in graded-lex order".into()));
            }
            values[pos] = rows[pos].1;
        }
        Ok(Self::new(n, k, values))
    }
}

/// sigma_I = sample average of x(I) for every I in I(k, n).
pub fn empirical_moments(points: &[Point], k: u32) -> Result<MomentVector, MomentError> {
    if points.is_empty() {
        return Err(MomentError::EmptySample);
    }
    let n = points[0].dim();
    if points.iter().any(|p| p.dim() != n) {
        return Err(MomentError::DimensionMismatch {
            expected: n,
            got: points.iter().map(|p| p.dim()).find(|&d| d != n).unwrap(),
        });
    }
    let indices = enumerate_multi_indices(k, n);
    let mut sums = vec![Kahan::default(); indices.len()];
    let mut powers = vec![0.0f64; n * (k as usize + 1)];
    for p in points {
        // per-coordinate power table x_j^0..k
        for (j, &xj) in p.coords().iter().enumerate() {
            let row = &mut powers[j * (k as usize + 1)..(j + 1) * (k as usize + 1)];
            row[0] = 1.0;
            for e in 1..=k as usize {
                row[e] = row[e - 1] * xj;
            }
        }
        for (pos, idx) in indices.iter().enumerate() {
            let mut m = 1.0;
            for (j, &e) in idx.exponents().iter().enumerate() {
                if e > 0 {
                    m *= powers[j * (k as usize + 1) + e as usize];
                }
            }
            sums[pos].add(m);
        }
    }
    let count = points.len() as f64;
    Ok(MomentVector::new(
        n,
        k,
        sums.iter().map(|s| s.value() / count).collect(),
    ))
}

/// (e-1)!! for even e; the e-th moment of N(0,1).
fn gaussian_moment(e: u32) -> f64 {
    if e % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut f = e as i64 - 1;
    while f > 1 {
        acc *= f as f64;
        f -= 2;
    }
    acc
}

/// E[Z^e] for Z ~ N(0, var).
fn gaussian_moment_var(e: u32, var: f64) -> f64 {
    if e % 2 == 1 {
        0.0
    } else {
        gaussian_moment(e) * var.powi(e as i32 / 2)
    }
}

fn factorial(e: u32) -> f64 {
    (1..=e as u64).map(|v| v as f64).product()
}

fn binom_f(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Per-coordinate 1-d moment tables (n rows, orders 0..=k) for specs with
/// independent coordinates, or None when no product structure is available.
fn coord_moment_table(spec: &DistributionSpec, k: u32) -> Option<Vec<Vec<f64>>> {
    let n = spec.dim();
    let one_dim: Option<Vec<f64>> = match spec {
        DistributionSpec::RademacherCube { .. } => {
            Some((0..=k).map(|e| if e % 2 == 0 { 1.0 } else { 0.0 }).collect())
        }
        DistributionSpec::UniformCube { .. } => Some(
            (0..=k)
                .map(|e| if e % 2 == 0 { 1.0 / (e + 1) as f64 } else { 0.0 })
                .collect(),
        ),
        DistributionSpec::StandardGaussian { .. } => Some((0..=k).map(gaussian_moment).collect()),
        DistributionSpec::LaplaceProduct { scale, .. } => Some(
            (0..=k)
                .map(|e| {
                    if e % 2 == 0 {
                        factorial(e) * scale.powi(e as i32)
                    } else {
                        0.0
                    }
                })
                .collect(),
        ),
        _ => None,
    };
    if let Some(row) = one_dim {
        return Some(vec![row; n]);
    }
    if let DistributionSpec::Smoothed {
        inner, noise_cov, ..
    } = spec
    {
        if !is_diagonal(noise_cov) {
            return None;
        }
        let inner_table = coord_moment_table(inner, k)?;
        let mut out = Vec::with_capacity(n);
        for (j, row) in inner_table.iter().enumerate() {
            let v = noise_cov[(j, j)];
            out.push(convolve_with_gaussian(row, v, k));
        }
        return Some(out);
    }
    None
}

fn is_diagonal(m: &nalgebra::DMatrix<f64>) -> bool {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].abs() > 1e-12 {
                return false;
            }
        }
    }
    true
}

/// E[(X+Z)^e] = sum_j C(e,j) E[X^{e-j}] E[Z^j] for independent Z ~ N(0, var).
fn convolve_with_gaussian(moments: &[f64], var: f64, k: u32) -> Vec<f64> {
    (0..=k)
        .map(|e| {
            let mut acc = 0.0;
            for j in (0..=e).step_by(2) {
                acc += binom_f(e, j) * moments[(e - j) as usize] * gaussian_moment_var(j, var);
            }
            acc
        })
        .collect()
}

/// Peels Smoothed layers with diagonal noise over a finite-support core.
/// Returns (atoms, probs, per-coordinate total noise variance).
fn atom_route(spec: &DistributionSpec) -> Option<(Vec<Point>, Vec<f64>, Vec<f64>)> {
    match spec {
        DistributionSpec::FiniteSupport(d) | DistributionSpec::KWise { dist: d, .. } => Some((
            d.support().to_vec(),
            d.probs().to_vec(),
            vec![0.0; d.dim()],
        )),
        DistributionSpec::Smoothed {
            inner, noise_cov, ..
        } => {
            if !is_diagonal(noise_cov) {
                return None;
            }
            let (atoms, probs, mut vars) = atom_route(inner)?;
            for j in 0..vars.len() {
                vars[j] += noise_cov[(j, j)];
            }
            Some((atoms, probs, vars))
        }
        _ => None,
    }
}

/// Closed-form sigma_I for the supported families: product structure for
/// the coordinate-independent laws, direct summation for finite supports,
/// and binomial convolution for Gaussian smoothing with diagonal noise.
pub fn exact_moments(spec: &DistributionSpec, k: u32) -> Result<MomentVector, MomentError> {
    let n = spec.dim();
    let indices = enumerate_multi_indices(k, n);
    if let Some(table) = coord_moment_table(spec, k) {
        let values: Vec<f64> = indices
            .iter()
            .map(|idx| {
                idx.exponents()
                    .iter()
                    .enumerate()
                    .map(|(j, &e)| table[j][e as usize])
                    .product()
            })
            .collect();
        return Ok(MomentVector::new(n, k, values));
    }
    if let Some((atoms, probs, vars)) = atom_route(spec) {
        let smoothed = vars.iter().any(|&v| v > 0.0);
        let values: Vec<f64> = indices
            .iter()
            .map(|idx| {
                let mut acc = Kahan::default();
                for (a, &p) in atoms.iter().zip(&probs) {
                    let mut term = p;
                    for (j, &e) in idx.exponents().iter().enumerate() {
                        let c = a.coords()[j];
                        term *= if smoothed && vars[j] > 0.0 {
                            // E[(c + Z)^e], Z ~ N(0, vars[j])
                            let mut m = 0.0;
                            for t in (0..=e).step_by(2) {
                                m += binom_f(e, t)
                                    * c.powi((e - t) as i32)
                                    * gaussian_moment_var(t, vars[j]);
                            }
                            m
                        } else {
                            c.powi(e as i32)
                        };
                    }
                    acc.add(term);
                }
                acc.value()
            })
            .collect();
        return Ok(MomentVector::new(n, k, values));
    }
    Err(MomentError::UnsupportedFamily(format!("{spec:?}")))
}

/// Empirical E[|<w, x>|^r] for even r <= 12 and unit w.
pub fn directional_moment(points: &[Point], w: &[f64], r: usize) -> Result<f64, MomentError> {
    if points.is_empty() {
        return Err(MomentError::EmptySample);
    }
    if r == 0 || r % 2 != 0 || r > 12 {
        return Err(MomentError::BadOrder(r));
    }
    let n = points[0].dim();
    if w.len() != n {
        return Err(MomentError::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(MomentError::BadDirection);
    }
    let mut acc = Kahan::default();
    for p in points {
        let d: f64 = p.coords().iter().zip(w).map(|(a, b)| a * b).sum();
        acc.add(d.powi(r as i32));
    }
    Ok(acc.value() / points.len() as f64)
}

/// Per-order directional moment maxima and the beta_k partial sums.
#[derive(Debug, Clone)]
pub struct BetaProfile {
    /// (2j, mu_{2j}) with mu the max over the direction set.
    pub mu: Vec<(u32, f64)>,
    /// beta_j for j = 1..=k.
    pub betas: Vec<f64>,
}

impl BetaProfile {
    pub fn beta(&self, j: usize) -> f64 {
        self.betas[j - 1]
    }

    pub fn max_order(&self) -> usize {
        self.betas.len()
    }
}

pub enum MomentSource<'a> {
    /// Closed-form 1-d moments; directions must be coordinate axes except
    /// for the rotation-invariant standard Gaussian.
    Exact(&'a DistributionSpec),
    Empirical(&'a [Point]),
}

/// mu_{2j} = max over the direction set of E|<w, X>|^{2j}, j = 1..=k, and
/// the partial sums beta_j = sum_{i<=j} mu_{2i}^{-1/(2i)}.
pub fn beta_profile(
    source: MomentSource<'_>,
    directions: &[Vec<f64>],
    k: usize,
) -> Result<BetaProfile, MomentError> {
    if directions.is_empty() {
        return Err(MomentError::DegenerateDirections("no directions".into()));
    }
    if k == 0 {
        return Err(MomentError::BadOrder(0));
    }
    let mut mu = Vec::with_capacity(k);
    match source {
        MomentSource::Exact(spec) => {
            let gaussian = matches!(spec, DistributionSpec::StandardGaussian { .. });
            let table = coord_moment_table(spec, 2 * k as u32);
            for j in 1..=k {
                let e = 2 * j as u32;
                let mut best = f64::NEG_INFINITY;
                for w in directions {
                    let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if (norm - 1.0).abs() > 1e-8 {
                        return Err(MomentError::BadDirection);
                    }
                    let v = if gaussian {
                        gaussian_moment(e)
                    } else {
                        let axis = axis_of(w).ok_or(MomentError::ExactRouteNeedsAxisDirections)?;
                        let table = table.as_ref().ok_or_else(|| {
                            MomentError::UnsupportedFamily(format!("{spec:?}"))
                        })?;
                        table[axis][e as usize]
                    };
                    best = best.max(v);
                }
                mu.push((e, best));
            }
        }
        MomentSource::Empirical(points) => {
            if points.is_empty() {
                return Err(MomentError::EmptySample);
            }
            if k > 20 {
                return Err(MomentError::BadOrder(k));
            }
            let n = points[0].dim();
            for j in 1..=k {
                let e = 2 * j as i32;
                let mut best = f64::NEG_INFINITY;
                for w in directions {
                    if w.len() != n {
                        return Err(MomentError::DimensionMismatch {
                            expected: n,
                            got: w.len(),
                        });
                    }
                    let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if (norm - 1.0).abs() > 1e-8 {
                        return Err(MomentError::BadDirection);
                    }
                    let mut acc = Kahan::default();
                    for p in points {
                        let d: f64 = p.coords().iter().zip(w).map(|(a, b)| a * b).sum();
                        acc.add(d.abs().powi(e));
                    }
                    best = best.max(acc.value() / points.len() as f64);
                }
                mu.push((2 * j as u32, best));
            }
        }
    }
    let mut betas = Vec::with_capacity(k);
    let mut acc = 0.0;
    for (j, &(_, m)) in mu.iter().enumerate() {
        if !(m > 0.0) {
            return Err(MomentError::DegenerateDirections(format!(
                "mu_{} is {m}, cannot invert",
                2 * (j + 1)
            )));
        }
        acc += m.powf(-1.0 / (2.0 * (j + 1) as f64));
        betas.push(acc);
    }
    Ok(BetaProfile { mu, betas })
}

fn axis_of(w: &[f64]) -> Option<usize> {
    let mut axis = None;
    for (j, &v) in w.iter().enumerate() {
        if v.abs() > 1e-12 {
            if axis.is_some() || (v.abs() - 1.0).abs() > 1e-12 {
                return None;
            }
            axis = Some(j);
        }
    }
    axis
}
