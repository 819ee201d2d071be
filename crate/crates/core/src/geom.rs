//! Points, labeled samples, halfspaces, and Boolean functions of halfspaces.
//!
//! Sign convention: sign(0) = +1 everywhere. Halfspaces are stored with a
//! unit-norm weight vector; construction normalizes and rejects zero
//! weights. Truth tables index the sign pattern (s_1, ..., s_m) by the
//! integer whose bit r-1 is 1 exactly when s_r = +1 (bit 0 belongs to the
//! first halfspace).

use std::fmt::Write as _;

use crate::error::CoreError;

/// A point in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, CoreError> {
        if coords.is_empty() {
            return Err(CoreError::EmptyDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(CoreError::NonFiniteValue);
        }
        Ok(Self { coords })
    }

    /// Skips the finiteness check; for internal samplers that only produce
    /// finite values.
    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A point together with a +/-1 label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub point: Point,
    pub label: i8,
}

impl LabeledSample {
    pub fn new(point: Point, label: i8) -> Result<Self, CoreError> {
        if label != 1 && label != -1 {
            return Err(CoreError::Parse(format!("label must be +/-1, got {label}")));
        }
        Ok(Self { point, label })
    }
}

/// sign with the fixed convention sign(0) = +1.
#[inline]
pub fn sign_pm(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Halfspace classifier x -> sign(<w, x> - theta), stored with ||w|| = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    w: Vec<f64>,
    theta: f64,
}

impl Halfspace {
    /// Normalizes (w, theta) by ||w||; the classifier is invariant under
    /// positive scaling of both.
    pub fn new(w: Vec<f64>, theta: f64) -> Result<Self, CoreError> {
        if w.is_empty() {
            return Err(CoreError::EmptyDimension);
        }
        if w.iter().any(|c| !c.is_finite()) || !theta.is_finite() {
            return Err(CoreError::NonFiniteValue);
        }
        let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(CoreError::ZeroWeight);
        }
        Ok(Self {
            w: w.iter().map(|c| c / norm).collect(),
            theta: theta / norm,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// <w, x> - theta before taking the sign.
    pub fn margin(&self, x: &Point) -> Result<f64, CoreError> {
        if x.dim() != self.w.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.w.len(),
                got: x.dim(),
            });
        }
        Ok(dot(&self.w, x.coords()) - self.theta)
    }

    /// sign(<w, x> - theta) with sign(0) = +1.
    pub fn eval(&self, x: &Point) -> Result<i8, CoreError> {
        Ok(sign_pm(self.margin(x)?))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// f(x) = g(h_1(x), ..., h_m(x)) for an arbitrary truth table g.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceFunction {
    halfspaces: Vec<Halfspace>,
    truth_table: Vec<i8>,
}

impl HalfspaceFunction {
    pub fn new(halfspaces: Vec<Halfspace>, truth_table: Vec<i8>) -> Result<Self, CoreError> {
        let m = halfspaces.len();
        if m == 0 {
            return Err(CoreError::EmptyDimension);
        }
        if m >= usize::BITS as usize
            || truth_table.len() != 1usize << m
            || truth_table.iter().any(|&t| t != 1 && t != -1)
        {
            return Err(CoreError::BadTruthTable);
        }
        let n = halfspaces[0].dim();
        if halfspaces.iter().any(|h| h.dim() != n) {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: halfspaces.iter().map(|h| h.dim()).find(|&d| d != n).unwrap(),
            });
        }
        Ok(Self {
            halfspaces,
            truth_table,
        })
    }

    /// Builds the truth table from a closure over sign patterns.
    pub fn from_fn(
        halfspaces: Vec<Halfspace>,
        g: impl Fn(&[i8]) -> i8,
    ) -> Result<Self, CoreError> {
        let m = halfspaces.len();
        if m == 0 || m >= usize::BITS as usize {
            return Err(CoreError::BadTruthTable);
        }
        let mut table = Vec::with_capacity(1 << m);
        let mut pattern = vec![0i8; m];
        for bits in 0..(1usize << m) {
            for (r, p) in pattern.iter_mut().enumerate() {
                *p = if (bits >> r) & 1 == 1 { 1 } else { -1 };
            }
            table.push(g(&pattern));
        }
        Self::new(halfspaces, table)
    }

    /// Intersection: +1 exactly when every halfspace fires +1.
    pub fn intersection(halfspaces: Vec<Halfspace>) -> Result<Self, CoreError> {
        Self::from_fn(halfspaces, |s| {
            if s.iter().all(|&v| v == 1) {
                1
            } else {
                -1
            }
        })
    }

    /// Parity of the +1 signs.
    pub fn xor(halfspaces: Vec<Halfspace>) -> Result<Self, CoreError> {
        Self::from_fn(halfspaces, |s| {
            let ones = s.iter().filter(|&&v| v == 1).count();
            if ones % 2 == 1 {
                1
            } else {
                -1
            }
        })
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn truth_table(&self) -> &[i8] {
        &self.truth_table
    }

    pub fn num_halfspaces(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].dim()
    }

    /// Index into the truth table for a sign pattern.
    pub fn pattern_index(pattern: &[i8]) -> usize {
        let mut idx = 0usize;
        for (r, &s) in pattern.iter().enumerate() {
            if s == 1 {
                idx |= 1 << r;
            }
        }
        idx
    }

    /// The vector (<w_r, x>)_{r=1..m}.
    pub fn margins(&self, x: &Point) -> Result<Vec<f64>, CoreError> {
        self.halfspaces
            .iter()
            .map(|h| h.margin(x).map(|m| m + h.theta()))
            .collect()
    }

    pub fn eval(&self, x: &Point) -> Result<i8, CoreError> {
        let mut idx = 0usize;
        for (r, h) in self.halfspaces.iter().enumerate() {
            if h.eval(x)? == 1 {
                idx |= 1 << r;
            }
        }
        Ok(self.truth_table[idx])
    }

    /// Text form: header `halfspace_function,<n>,<m>`, one line per
    /// halfspace `<w_1>,...,<w_n>,<theta>`, then the 2^m truth-table
    /// entries on one comma-separated line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "halfspace_function,{},{}",
            self.dim(),
            self.halfspaces.len()
        );
        for h in &self.halfspaces {
            for w in h.weights() {
                let _ = write!(s, "{:.16e},", w);
            }
            let _ = writeln!(s, "{:.16e}", h.theta());
        }
        let entries: Vec<String> = self.truth_table.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(s, "{}", entries.join(","));
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(CoreError::Parse("empty input".into()))?;
        let mut fields = header.split(',');
        if fields.next() != Some("halfspace_function") {
            return Err(CoreError::Parse(
                "expected `halfspace_function` header".into(),
            ));
        }
        let n: usize = parse_num(fields.next(), "dimension")?;
        let m: usize = parse_num(fields.next(), "halfspace count")?;
        let mut halfspaces = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or(CoreError::Parse("missing halfspace line".into()))?;
            let vals: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse()).collect();
            let vals = vals.map_err(|e| CoreError::Parse(format!("bad halfspace value: {e}")))?;
            if vals.len() != n + 1 {
                return Err(CoreError::Parse(format!(
                    "halfspace line has {} fields, expected {}",
                    vals.len(),
                    n + 1
                )));
            }
            halfspaces.push(Halfspace::new(vals[..n].to_vec(), vals[n])?);
        }
        let table_line = lines
            .next()
            .ok_or(CoreError::Parse("missing truth table line".into()))?;
        let table: Result<Vec<i8>, _> = table_line.split(',').map(|v| v.trim().parse()).collect();
        let table = table.map_err(|e| CoreError::Parse(format!("bad truth table entry: {e}")))?;
        Self::new(halfspaces, table)
    }
}

fn parse_num<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T, CoreError>
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

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn halfspace_eval_and_boundary() {
        let h = Halfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        assert_eq!(h.eval(&pt(&[2.0, 5.0])).unwrap(), 1);
        // boundary convention sign(0) = +1
        assert_eq!(h.eval(&pt(&[0.0, 3.0])).unwrap(), 1);
        assert_eq!(h.eval(&pt(&[-0.1, 3.0])).unwrap(), -1);
    }

    #[test]
    fn halfspace_is_normalized_and_scale_invariant() {
        let h = Halfspace::new(vec![3.0, 4.0], 5.0).unwrap();
        assert!((h.weights()[0] - 0.6).abs() < 1e-12);
        assert!((h.weights()[1] - 0.8).abs() < 1e-12);
        assert!((h.theta() - 1.0).abs() < 1e-12);
        let g = Halfspace::new(vec![0.6, 0.8], 1.0).unwrap();
        for x in [[0.0, 0.0], [1.0, 1.0], [2.0, -0.4], [-3.0, 2.0]] {
            let p = pt(&x);
            assert_eq!(h.eval(&p).unwrap(), g.eval(&p).unwrap());
        }
        let norm: f64 = h.weights().iter().map(|w| w * w).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_scaling_preserves_classification() {
        let base = Halfspace::new(vec![0.3, -1.2, 0.4], 0.7).unwrap();
        let scaled = Halfspace::new(vec![0.3 * 7.5, -1.2 * 7.5, 0.4 * 7.5], 0.7 * 7.5).unwrap();
        for x in [[0.1, 0.2, 0.3], [1.0, -1.0, 2.0], [5.0, 5.0, -5.0]] {
            let p = pt(&x);
            assert_eq!(base.eval(&p).unwrap(), scaled.eval(&p).unwrap());
        }
    }

    #[test]
    fn zero_weight_rejected() {
        assert!(matches!(
            Halfspace::new(vec![0.0, 0.0], 1.0),
            Err(CoreError::ZeroWeight)
        ));
    }

    #[test]
    fn and_of_axis_halfspaces_is_quadrant_membership() {
        let h1 = Halfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let h2 = Halfspace::new(vec![0.0, 1.0], 0.0).unwrap();
        let f = HalfspaceFunction::intersection(vec![h1, h2]).unwrap();
        assert_eq!(f.eval(&pt(&[1.0, 1.0])).unwrap(), 1);
        assert_eq!(f.eval(&pt(&[1.0, -1.0])).unwrap(), -1);
        assert_eq!(f.eval(&pt(&[-1.0, 1.0])).unwrap(), -1);
        assert_eq!(f.eval(&pt(&[-1.0, -1.0])).unwrap(), -1);
    }

    #[test]
    fn single_halfspace_identity_truth_table() {
        let h = Halfspace::new(vec![0.8, -0.6], 0.25).unwrap();
        let f = HalfspaceFunction::from_fn(vec![h.clone()], |s| s[0]).unwrap();
        for x in [[0.0, 0.0], [1.0, 2.0], [-0.5, -3.0], [0.3125, 0.0]] {
            let p = pt(&x);
            assert_eq!(f.eval(&p).unwrap(), h.eval(&p).unwrap());
        }
    }

    #[test]
    fn xor_matches_table_on_quadrant_representatives() {
        let h1 = Halfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let h2 = Halfspace::new(vec![0.0, 1.0], 0.0).unwrap();
        let f = HalfspaceFunction::xor(vec![h1, h2]).unwrap();
        // quadrant representatives and the XOR oracle over sign patterns
        for (x, s1, s2) in [
            ([2.0, 3.0], 1i8, 1i8),
            ([2.0, -3.0], 1, -1),
            ([-2.0, 3.0], -1, 1),
            ([-2.0, -3.0], -1, -1),
        ] {
            let expected = if s1 != s2 { 1 } else { -1 };
            assert_eq!(f.eval(&pt(&x)).unwrap(), expected);
        }
    }

    #[test]
    fn margins_are_coordinate_projections() {
        let h1 = Halfspace::new(vec![1.0, 0.0], 0.5).unwrap();
        let h2 = Halfspace::new(vec![0.0, 1.0], -0.25).unwrap();
        let f = HalfspaceFunction::intersection(vec![h1, h2]).unwrap();
        let m = f.margins(&pt(&[2.0, 3.0])).unwrap();
        assert!((m[0] - 2.0).abs() < 1e-15);
        assert!((m[1] - 3.0).abs() < 1e-15);
        let z = f.margins(&pt(&[0.0, 0.0])).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn margins_consistent_with_halfspace_eval() {
        let hs = vec![
            Halfspace::new(vec![1.0, 2.0, -0.5], 0.2).unwrap(),
            Halfspace::new(vec![-0.3, 0.4, 1.1], -0.6).unwrap(),
            Halfspace::new(vec![0.0, -1.0, 0.0], 0.05).unwrap(),
        ];
        let f = HalfspaceFunction::intersection(hs.clone()).unwrap();
        for x in [[0.1, 0.2, 0.3], [-1.0, 0.5, 2.0], [0.0, 0.0, 0.0]] {
            let p = pt(&x);
            let margins = f.margins(&p).unwrap();
            for (r, h) in hs.iter().enumerate() {
                assert_eq!(sign_pm(margins[r] - h.theta()), h.eval(&p).unwrap());
            }
        }
    }

    #[test]
    fn label_depends_only_on_sign_pattern() {
        let hs = vec![
            Halfspace::new(vec![1.0, 1.0], 0.0).unwrap(),
            Halfspace::new(vec![1.0, -1.0], 0.3).unwrap(),
        ];
        let f = HalfspaceFunction::xor(hs.clone()).unwrap();
        // two far-apart points sharing a sign pattern get the same label
        let a = pt(&[5.0, 4.0]);
        let b = pt(&[50.0, 40.0]);
        let pat =
            |p: &Point| -> Vec<i8> { hs.iter().map(|h| h.eval(p).unwrap()).collect::<Vec<_>>() };
        assert_eq!(pat(&a), pat(&b));
        assert_eq!(f.eval(&a).unwrap(), f.eval(&b).unwrap());
    }

    #[test]
    fn truth_table_bit_order() {
        // pattern (s1, s2) with s1 = +1, s2 = -1 has index 0b01 = 1
        assert_eq!(HalfspaceFunction::pattern_index(&[1, -1]), 1);
        assert_eq!(HalfspaceFunction::pattern_index(&[-1, 1]), 2);
        assert_eq!(HalfspaceFunction::pattern_index(&[1, 1]), 3);
        assert_eq!(HalfspaceFunction::pattern_index(&[-1, -1]), 0);
    }

    #[test]
    fn text_round_trip() {
        let hs = vec![
            Halfspace::new(vec![1.0, 2.0, -0.5], 0.2).unwrap(),
            Halfspace::new(vec![-0.3, 0.4, 1.1], -0.6).unwrap(),
        ];
        let f = HalfspaceFunction::xor(hs).unwrap();
        let g = HalfspaceFunction::from_text(&f.to_text()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let h = Halfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        assert!(h.eval(&pt(&[1.0, 2.0, 3.0])).is_err());
        let f = HalfspaceFunction::intersection(vec![h]).unwrap();
        assert!(f.eval(&pt(&[1.0])).is_err());
        assert!(f.margins(&pt(&[1.0, 2.0, 3.0])).is_err());
    }
}
