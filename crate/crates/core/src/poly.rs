//! Multi-indices and real polynomials in the monomial basis.
//!
//! Monomials are keyed by multi-indices ordered graded-lexicographically:
//! lower total degree first, and within a degree block the index whose
//! exponent tuple is lexicographically larger comes first, so for n = 2,
//! k = 2 the order is (0,0), (1,0), (0,1), (2,0), (1,1), (0,2). This order
//! is fixed globally; coefficient vectors and serialized files are
//! comparable bit-for-bit across runs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::CoreError;

/// Exponent tuple (i_1, ..., i_n) of a monomial x_1^{i_1} ... x_n^{i_n}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self, CoreError> {
        if exponents.is_empty() {
            return Err(CoreError::EmptyDimension);
        }
        Ok(Self { exponents })
    }

    /// The all-zero index (the constant monomial) in dimension `n`.
    pub fn zero(n: usize) -> Self {
        Self {
            exponents: vec![0; n],
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// Total degree sum(i_j).
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// True if no exponent exceeds 1.
    pub fn is_multilinear(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    /// Value of the monomial at `x`, i.e. prod_j x_j^{i_j}.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.exponents.len());
        let mut v = 1.0;
        for (xj, &e) in x.iter().zip(&self.exponents) {
            if e > 0 {
                v *= xj.powi(e as i32);
            }
        }
        v
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            // within a degree block, lexicographically larger tuple first
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All multi-indices of total degree <= k in dimension n, in graded-lex
/// order. The result has length C(n+k, k).
pub fn enumerate_multi_indices(k: u32, n: usize) -> Vec<MultiIndex> {
    assert!(n >= 1, "dimension must be at least 1");
    let mut out = Vec::with_capacity(binomial(n as u64 + k as u64, k as u64) as usize);
    let mut current = vec![0u32; n];
    for deg in 0..=k {
        emit_degree_block(deg, 0, &mut current, &mut out);
    }
    out
}

fn emit_degree_block(remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(MultiIndex {
            exponents: current.clone(),
        });
        return;
    }
    // larger exponent on the earlier coordinate first
    for e in (0..=remaining).rev() {
        current[pos] = e;
        emit_degree_block(remaining - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Binomial coefficient as u64; saturates on overflow (desk scale only).
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Sparse real polynomial sum_I a_I x(I). Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    /// The zero polynomial in dimension n.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self, CoreError> {
        let mut p = Self::zero(n);
        for (idx, c) in terms {
            if idx.dim() != n {
                return Err(CoreError::DimensionMismatch {
                    expected: n,
                    got: idx.dim(),
                });
            }
            if !c.is_finite() {
                return Err(CoreError::NonFiniteValue);
            }
            let entry = p.coeffs.entry(idx).or_insert(0.0);
            *entry += c;
            if *entry == 0.0 {
                // re-borrow to drop the entry
            }
        }
        p.coeffs.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    /// Convenience constructor for a single monomial c * x(I).
    pub fn monomial(n: usize, exponents: &[u32], c: f64) -> Result<Self, CoreError> {
        Self::from_terms(n, [(MultiIndex::new(exponents.to_vec())?, c)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Max total degree among stored indices; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|i| i.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> f64 {
        self.coeffs.get(idx).copied().unwrap_or(0.0)
    }

    pub fn set_coefficient(&mut self, idx: MultiIndex, c: f64) -> Result<(), CoreError> {
        if idx.dim() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: idx.dim(),
            });
        }
        if !c.is_finite() {
            return Err(CoreError::NonFiniteValue);
        }
        if c == 0.0 {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(i, &c)| (i, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluate at a point, accumulating terms in the fixed index order.
    pub fn eval(&self, x: &[f64]) -> Result<f64, CoreError> {
        if x.len() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (idx, c) in &self.coeffs {
            acc += c * idx.eval(x);
        }
        Ok(acc)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| {
            *c *= s;
            *c != 0.0
        });
        out
    }

    pub fn add(&self, other: &Polynomial) -> Result<Self, CoreError> {
        if other.n != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Self::from_terms(
            self.n,
            self.terms()
                .map(|(i, c)| (i.clone(), c))
                .chain(other.terms().map(|(i, c)| (i.clone(), c))),
        )
    }

    /// Regularity delta of a multilinear polynomial of degree <= 2: the
    /// smallest delta with sum_i Inf_i^2 <= delta^2 ||P||_2^4 where
    /// Inf_i = sum_{I contains i} a_I^2 and the constant term is excluded
    /// from the norm. Values above 1 are possible and are not clamped.
    pub fn regularity(&self) -> Result<f64, CoreError> {
        let mut norm_sq = 0.0;
        let mut influence = vec![0.0f64; self.n];
        for (idx, c) in &self.coeffs {
            if !idx.is_multilinear() || idx.total_degree() > 2 {
                return Err(CoreError::NotMultilinearQuadratic);
            }
            if idx.total_degree() == 0 {
                continue; // constant term ignored
            }
            norm_sq += c * c;
            for (j, &e) in idx.exponents().iter().enumerate() {
                if e == 1 {
                    influence[j] += c * c;
                }
            }
        }
        if norm_sq == 0.0 {
            return Err(CoreError::ZeroPolynomial);
        }
        let inf_sq_sum: f64 = influence.iter().map(|v| v * v).sum();
        Ok(inf_sq_sum.sqrt() / norm_sq)
    }

    /// Text form: header `polynomial,<n>,<terms>`, then one term per line
    /// `<i_1>,...,<i_n>,<coeff>` in graded-lex order, coefficients with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "polynomial,{},{}", self.n, self.coeffs.len());
        for (idx, c) in &self.coeffs {
            for e in idx.exponents() {
                let _ = write!(s, "{},", e);
            }
            let _ = writeln!(s, "{:.16e}", c);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(CoreError::Parse("empty input".into()))?;
        let mut fields = header.split(',');
        if fields.next() != Some("polynomial") {
            return Err(CoreError::Parse("expected `polynomial` header".into()));
        }
        let n: usize = parse_field(fields.next(), "dimension")?;
        let nterms: usize = parse_field(fields.next(), "term count")?;
        let mut terms = Vec::with_capacity(nterms);
        for line in lines {
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != n + 1 {
                return Err(CoreError::Parse(format!(
                    "term line has {} fields, expected {}",
                    parts.len(),
                    n + 1
                )));
            }
            let mut exps = Vec::with_capacity(n);
            for p in &parts[..n] {
                exps.push(
                    p.trim()
                        .parse::<u32>()
                        .map_err(|e| CoreError::Parse(format!("bad exponent: {e}")))?,
                );
            }
            let c: f64 = parts[n]
                .trim()
                .parse()
                .map_err(|e| CoreError::Parse(format!("bad coefficient: {e}")))?;
            terms.push((MultiIndex::new(exps)?, c));
        }
        if terms.len() != nterms {
            return Err(CoreError::Parse(format!(
                "header promised {} terms, found {}",
                nterms,
                terms.len()
            )));
        }
        Self::from_terms(n, terms)
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T, CoreError>
where
    T::Err: std::fmt::Display,
{
    field
        .ok_or_else(|| CoreError::Parse(format!("missing {what}")))?
        .trim()
        .parse()
        .map_err(|e| CoreError::Parse(format!("bad {what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(exps: &[u32]) -> MultiIndex {
        MultiIndex::new(exps.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_matches_fixed_order() {
        let idx = enumerate_multi_indices(2, 2);
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        let got: Vec<Vec<u32>> = idx.iter().map(|i| i.exponents().to_vec()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn enumeration_counts_binomial() {
        // Pascal's triangle as the independent count oracle.
        let mut pascal = vec![vec![1u64; 13]; 13];
        for n in 1..13 {
            for k in 1..13 {
                pascal[n][k] = pascal[n - 1][k] + pascal[n][k - 1];
            }
        }
        for n in 1..=6usize {
            for k in 0..=6u32 {
                let len = enumerate_multi_indices(k, n).len() as u64;
                assert_eq!(len, pascal[n][k as usize], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_edge_cases() {
        assert_eq!(enumerate_multi_indices(0, 5).len(), 1);
        assert_eq!(enumerate_multi_indices(0, 5)[0], MultiIndex::zero(5));
        assert_eq!(enumerate_multi_indices(3, 1).len(), 4);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let idx = enumerate_multi_indices(4, 3);
        for w in idx.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn eval_direct_product() {
        // x_1^2 x_2 at (2,3) = 12
        let p = Polynomial::monomial(2, &[2, 1], 1.0).unwrap();
        assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), 12.0);
    }

    #[test]
    fn zero_polynomial_evaluates_to_zero() {
        let p = Polynomial::zero(3);
        assert_eq!(p.eval(&[1.0, -2.0, 5.5]).unwrap(), 0.0);
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn eval_matches_naive_oracle() {
        // independent naive evaluator: repeated multiplication, reversed term order
        fn naive(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
            let mut total = 0.0;
            for (exps, c) in terms.iter().rev() {
                let mut m = *c;
                for (j, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        m *= x[j];
                    }
                }
                total += m;
            }
            total
        }
        let terms = vec![
            (vec![0u32, 0, 0], 0.7),
            (vec![1, 2, 0], -1.3),
            (vec![3, 0, 1], 0.25),
            (vec![0, 1, 1], 2.0),
            (vec![2, 2, 2], -0.01),
        ];
        let p = Polynomial::from_terms(
            3,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.clone()).unwrap(), *c)),
        )
        .unwrap();
        for x in [[0.5, -1.5, 2.0], [1.0, 1.0, 1.0], [-2.0, 0.3, 0.7]] {
            let a = p.eval(&x).unwrap();
            let b = naive(&terms, &x);
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = Polynomial::monomial(2, &[1, 0], 1.0).unwrap();
        assert!(p.eval(&[1.0]).is_err());
    }

    #[test]
    fn regularity_examples() {
        // single variable carries all mass
        let p = Polynomial::monomial(1, &[1], 1.0).unwrap();
        assert!((p.regularity().unwrap() - 1.0).abs() < 1e-15);

        // (x1+x2+x3+x4)/2: Inf_i = 1/4 each
        let p = Polynomial::from_terms(
            4,
            (0..4).map(|j| {
                let mut e = vec![0u32; 4];
                e[j] = 1;
                (MultiIndex::new(e).unwrap(), 0.5)
            }),
        )
        .unwrap();
        assert!((p.regularity().unwrap() - 0.5).abs() < 1e-15);

        // x1 x2: both coordinates inherit the full squared weight
        let p = Polynomial::monomial(2, &[1, 1], 1.0).unwrap();
        assert!((p.regularity().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn regularity_ignores_constant_and_rejects_bad_inputs() {
        let mut p = Polynomial::monomial(2, &[1, 0], 1.0).unwrap();
        p.set_coefficient(MultiIndex::zero(2), 7.0).unwrap();
        assert!((p.regularity().unwrap() - 1.0).abs() < 1e-15);

        let z = Polynomial::zero(2);
        assert!(matches!(z.regularity(), Err(CoreError::ZeroPolynomial)));
        let c = Polynomial::monomial(2, &[0, 0], 3.0).unwrap();
        assert!(matches!(c.regularity(), Err(CoreError::ZeroPolynomial)));

        let cubic = Polynomial::monomial(3, &[1, 1, 1], 1.0).unwrap();
        assert!(matches!(
            cubic.regularity(),
            Err(CoreError::NotMultilinearQuadratic)
        ));
        let square = Polynomial::monomial(2, &[2, 0], 1.0).unwrap();
        assert!(matches!(
            square.regularity(),
            Err(CoreError::NotMultilinearQuadratic)
        ));
    }

    #[test]
    fn regularity_scale_and_permutation_invariance() {
        let p = Polynomial::from_terms(
            3,
            [
                (mi(&[1, 1, 0]), 0.8),
                (mi(&[0, 1, 1]), -0.3),
                (mi(&[1, 0, 0]), 1.1),
            ],
        )
        .unwrap();
        let d0 = p.regularity().unwrap();
        assert!((p.scale(-3.7).regularity().unwrap() - d0).abs() < 1e-13);
        // permute coordinates (1 2 3) -> (3 1 2)
        let q = Polynomial::from_terms(
            3,
            [
                (mi(&[0, 1, 1]), 0.8),
                (mi(&[1, 0, 1]), -0.3),
                (mi(&[0, 1, 0]), 1.1),
            ],
        )
        .unwrap();
        assert!((q.regularity().unwrap() - d0).abs() < 1e-13);
    }

    #[test]
    fn text_round_trip() {
        let p = Polynomial::from_terms(
            2,
            [
                (mi(&[0, 0]), 1.0 / 3.0),
                (mi(&[2, 1]), -7.25e-9),
                (mi(&[0, 2]), 4.0),
            ],
        )
        .unwrap();
        let q = Polynomial::from_text(&p.to_text()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = Polynomial::from_terms(2, [(mi(&[1, 0]), 2.0), (mi(&[1, 0]), -2.0)]).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }
}
