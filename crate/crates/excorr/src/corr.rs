//! Pairwise Pearson correlation, full correlation matrices, sign-pattern
//! reconstruction, and prefix/rolling correlation computation.
//!
//! Summation scheme: means, variances, and co-moments all use compensated
//! (Kahan) summation in sample order, so a prefix computed from scratch is
//! bitwise identical to the full computation on the same rows. The
//! incremental [`RollingCorr`] engine uses Welford-style updates instead and
//! agrees with the from-scratch path to well below 1e-12.

use crate::data::{DataMatrix, SignPattern};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Symmetric matrix of pairwise Pearson coefficients with unit diagonal.
///
/// Invariants: symmetric, `entries[i][i] == 1`, every entry in `[-1, 1]`,
/// and positive semidefinite up to numerical tolerance (smallest eigenvalue
/// at least `-1e-9` for matrices built from real data).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    entries: Vec<f64>, // row-major
}

impl CorrelationMatrix {
    pub(crate) fn from_parts(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    /// Validates and wraps explicit entries (exact unit diagonal, exact
    /// symmetry, range). Positive semidefiniteness is not checked here; it
    /// is a property of matrices that come from data.
    pub fn from_entries(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > 1.0 {
                    return Err(Error::InvalidCorrelationEntry {
                        i,
                        j,
                        what: "range",
                    });
                }
                if i == j && v != 1.0 {
                    return Err(Error::InvalidCorrelationEntry {
                        i,
                        j,
                        what: "unit diagonal",
                    });
                }
                if rows[j][i] != v {
                    return Err(Error::InvalidCorrelationEntry {
                        i,
                        j,
                        what: "symmetry",
                    });
                }
            }
        }
        let entries = rows.into_iter().flatten().collect();
        Ok(Self::from_parts(n, entries))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries_row_major(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

fn all_equal(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}

fn kahan_mean(values: &[f64]) -> f64 {
    let mut sum = KahanSum::new();
    for &v in values {
        sum.add(v);
    }
    sum.value() / values.len() as f64
}

/// Sample Pearson correlation coefficient of two equally long vectors.
///
/// Uses the two-pass covariance formula with compensated summation and a
/// single `sqrt(var_x * var_y)` denominator; the result is clamped to
/// `[-1, 1]` to absorb last-bit rounding overshoot.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples { got: x.len() });
    }
    if all_equal(x) {
        return Err(Error::ZeroVarianceVector { which: "x" });
    }
    if all_equal(y) {
        return Err(Error::ZeroVarianceVector { which: "y" });
    }
    let mean_x = kahan_mean(x);
    let mean_y = kahan_mean(y);
    let mut cov = KahanSum::new();
    let mut var_x = KahanSum::new();
    let mut var_y = KahanSum::new();
    for (&a, &b) in x.iter().zip(y.iter()) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov.add(dx * dy);
        var_x.add(dx * dx);
        var_y.add(dy * dy);
    }
    let (var_x, var_y) = (var_x.value(), var_y.value());
    if var_x == 0.0 {
        return Err(Error::ZeroVarianceVector { which: "x" });
    }
    if var_y == 0.0 {
        return Err(Error::ZeroVarianceVector { which: "y" });
    }
    Ok((cov.value() / (var_x * var_y).sqrt()).clamp(-1.0, 1.0))
}

/// Index of the first column whose first `k` values are all equal, if any.
pub(crate) fn degenerate_prefix_column(data: &DataMatrix, k: usize) -> Option<usize> {
    (0..data.n_cols()).find(|&j| all_equal(&data.column(j)[..k]))
}

pub(crate) fn corr_of_prefix(data: &DataMatrix, k: usize) -> Result<CorrelationMatrix> {
    if let Some(j) = degenerate_prefix_column(data, k) {
        return Err(Error::ZeroVarianceColumn {
            column: data.name(j).to_owned(),
            rows: k,
        });
    }
    let n = data.n_cols();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let r = pearson(&data.column(i)[..k], &data.column(j)[..k])?;
            entries[i * n + j] = r;
            entries[j * n + i] = r;
        }
    }
    Ok(CorrelationMatrix::from_parts(n, entries))
}

/// Correlation matrix of the full dataset. Fails on a zero-variance column,
/// naming it.
pub fn corr_matrix(data: &DataMatrix) -> Result<CorrelationMatrix> {
    corr_of_prefix(data, data.n_rows())
}

/// Full correlation matrix of a fully correlated dataset, reconstructed from
/// its first row of signs: `entries[i][j] = signs[i] * signs[j]`.
pub fn fc_from_first_row(pattern: &SignPattern) -> CorrelationMatrix {
    let n = pattern.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(f64::from(pattern.signs()[i] * pattern.signs()[j]));
        }
    }
    CorrelationMatrix::from_parts(n, entries)
}

/// What to do when a prefix contains a zero-variance column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateRule {
    /// Mark the prefix degenerate and move on.
    Skip,
    /// Fail the whole computation.
    Fail,
}

/// Where rolling prefix computations start and how degenerate prefixes are
/// treated.
///
/// The default starting prefix is `n + 1`: with `k <= n` rows the correlation
/// matrix cannot be full-rank and the early maximal eigenvalue is
/// structurally inflated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixPolicy {
    min_prefix: usize,
    degenerate_rule: DegenerateRule,
}

impl PrefixPolicy {
    pub fn new(min_prefix: usize, degenerate_rule: DegenerateRule) -> Result<Self> {
        if min_prefix < 3 {
            return Err(Error::MinPrefixTooSmall { got: min_prefix });
        }
        Ok(Self {
            min_prefix,
            degenerate_rule,
        })
    }

    /// Default policy for a dataset with `n_vars` columns: start at
    /// `n_vars + 1`, skip degenerate prefixes.
    pub fn for_vars(n_vars: usize) -> Self {
        Self {
            min_prefix: (n_vars + 1).max(3),
            degenerate_rule: DegenerateRule::Skip,
        }
    }

    pub fn min_prefix(&self) -> usize {
        self.min_prefix
    }

    pub fn degenerate_rule(&self) -> DegenerateRule {
        self.degenerate_rule
    }

    pub fn with_min_prefix(self, min_prefix: usize) -> Result<Self> {
        Self::new(min_prefix, self.degenerate_rule)
    }

    pub fn with_degenerate_rule(self, rule: DegenerateRule) -> Self {
        Self {
            degenerate_rule: rule,
            ..self
        }
    }
}

/// Outcome of a prefix correlation: either a matrix or an explicit
/// degenerate marker (under [`DegenerateRule::Skip`]).
#[derive(Debug, Clone, PartialEq)]
pub enum PrefixCorr {
    Matrix(CorrelationMatrix),
    Degenerate,
}

/// Correlation matrix of the first `k` rows.
///
/// Bitwise identical to [`corr_matrix`] applied to the truncated dataset: the
/// same code path and summation order run in both cases.
pub fn prefix_corr(data: &DataMatrix, k: usize, policy: &PrefixPolicy) -> Result<PrefixCorr> {
    if k < policy.min_prefix() || k > data.n_rows() {
        return Err(Error::PrefixOutOfRange {
            k,
            min: policy.min_prefix(),
            max: data.n_rows(),
        });
    }
    if let Some(j) = degenerate_prefix_column(data, k) {
        return match policy.degenerate_rule() {
            DegenerateRule::Skip => Ok(PrefixCorr::Degenerate),
            DegenerateRule::Fail => Err(Error::ZeroVarianceColumn {
                column: data.name(j).to_owned(),
                rows: k,
            }),
        };
    }
    Ok(PrefixCorr::Matrix(corr_of_prefix(data, k)?))
}

/// Incremental prefix-correlation engine: O(n²) per appended row.
///
/// Maintains running means, per-column squared deviations, and pairwise
/// co-moments with Welford-style updates. A single owner appends rows; a
/// snapshot of the current prefix correlation is available at any time and
/// agrees with the from-scratch path to below 1e-12.
#[derive(Debug, Clone)]
pub struct RollingCorr {
    n: usize,
    count: usize,
    means: Vec<f64>,
    m2: Vec<f64>,
    comoment: Vec<f64>, // upper triangle, pair_index order
    first: Vec<f64>,
    varied: Vec<bool>,
    delta: Vec<f64>,
    delta2: Vec<f64>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl RollingCorr {
    pub fn new(n_cols: usize) -> Self {
        Self {
            n: n_cols,
            count: 0,
            means: vec![0.0; n_cols],
            m2: vec![0.0; n_cols],
            comoment: vec![0.0; n_cols * (n_cols.saturating_sub(1)) / 2],
            first: vec![0.0; n_cols],
            varied: vec![false; n_cols],
            delta: vec![0.0; n_cols],
            delta2: vec![0.0; n_cols],
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.count
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.n {
            return Err(Error::LengthMismatch {
                left: row.len(),
                right: self.n,
            });
        }
        self.count += 1;
        let count = self.count as f64;
        for (j, &value) in row.iter().enumerate() {
            if self.count == 1 {
                self.first[j] = value;
            } else if value != self.first[j] {
                self.varied[j] = true;
            }
            self.delta[j] = value - self.means[j];
            self.means[j] += self.delta[j] / count;
            self.delta2[j] = value - self.means[j];
            self.m2[j] += self.delta[j] * self.delta2[j];
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                self.comoment[pair_index(self.n, i, j)] += self.delta[i] * self.delta2[j];
            }
        }
        Ok(())
    }

    /// Index of the first column that has shown no variation so far.
    pub fn degenerate_column(&self) -> Option<usize> {
        self.varied.iter().position(|&v| !v)
    }

    /// Correlation snapshot of all rows seen so far; `None` with fewer than
    /// two rows.
    pub fn corr(&self) -> Option<PrefixCorr> {
        if self.count < 2 {
            return None;
        }
        if self.degenerate_column().is_some() {
            return Some(PrefixCorr::Degenerate);
        }
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let c = self.comoment[pair_index(n, i, j)];
                let r = (c / (self.m2[i] * self.m2[j]).sqrt()).clamp(-1.0, 1.0);
                entries[i * n + j] = r;
                entries[j * n + i] = r;
            }
        }
        Some(PrefixCorr::Matrix(CorrelationMatrix::from_parts(
            n, entries,
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_fc, gen_fu, DataMatrix};

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| (*s).to_owned()).collect()
    }

    #[test]
    fn pearson_exact_linear() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0);
    }

    #[test]
    fn pearson_exact_antilinear() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
    }

    #[test]
    fn pearson_half() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap(), 0.5);
    }

    #[test]
    fn pearson_is_symmetric_bitwise() {
        let x = [0.3, -1.7, 2.9, 4.1, -0.2];
        let y = [1.1, 0.4, -2.2, 3.3, 0.9];
        assert_eq!(pearson(&x, &y).unwrap(), pearson(&y, &x).unwrap());
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(
            pearson(&[1.0], &[2.0]),
            Err(Error::TooFewSamples { got: 1 })
        ));
        assert!(matches!(
            pearson(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVarianceVector { which: "x" })
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]),
            Err(Error::ZeroVarianceVector { which: "y" })
        ));
    }

    #[test]
    fn corr_matrix_of_mixed_fc_pattern() {
        let d = gen_fc(&SignPattern::parse("++-").unwrap(), 12, 4).unwrap();
        let c = corr_matrix(&d).unwrap();
        let expected = [[1.0, 1.0, -1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(c.entry(i, j), *want, "entry ({i}, {j})");
            }
        }
    }

    #[test]
    fn corr_matrix_of_fu_is_identity() {
        let d = gen_fu(3, 40, 9).unwrap();
        let c = corr_matrix(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c.entry(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn corr_matrix_names_constant_column() {
        let d = DataMatrix::new(
            names(&["A", "B", "C"]),
            vec![
                vec![1.0, 2.0, 3.0],
                vec![4.0, 4.0, 4.0],
                vec![2.0, 1.0, 5.0],
            ],
        )
        .unwrap();
        match corr_matrix(&d).unwrap_err() {
            Error::ZeroVarianceColumn { column, rows } => {
                assert_eq!(column, "B");
                assert_eq!(rows, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn fc_from_first_row_examples() {
        let all_plus = fc_from_first_row(&SignPattern::parse("+++").unwrap());
        assert!(all_plus.entries_row_major().iter().all(|&v| v == 1.0));

        let mixed = fc_from_first_row(&SignPattern::parse("+--").unwrap());
        let expected = [[1.0, -1.0, -1.0], [-1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(mixed.entry(i, j), *want);
            }
        }

        let single = fc_from_first_row(&SignPattern::parse("+").unwrap());
        assert_eq!(single.n(), 1);
        assert_eq!(single.entry(0, 0), 1.0);
    }

    #[test]
    fn fc_reconstruction_matches_generated_data_bitwise() {
        for n in 2..=5 {
            for (idx, pattern) in SignPattern::enumerate_canonical(n).iter().enumerate() {
                let d = gen_fc(pattern, 12, 1000 + idx as u64).unwrap();
                let from_data = corr_matrix(&d).unwrap();
                let from_signs = fc_from_first_row(pattern);
                assert_eq!(
                    from_data.entries_row_major(),
                    from_signs.entries_row_major(),
                    "pattern {pattern}"
                );
            }
        }
    }

    #[test]
    fn prefix_corr_full_length_matches_corr_matrix_bitwise() {
        let d = gen_fu(3, 25, 5).unwrap();
        let noisy = crate::data::add_noise(&d, 0.3, 77).unwrap();
        let policy = PrefixPolicy::for_vars(3);
        let full = corr_matrix(&noisy).unwrap();
        match prefix_corr(&noisy, noisy.n_rows(), &policy).unwrap() {
            PrefixCorr::Matrix(m) => {
                assert_eq!(m.entries_row_major(), full.entries_row_major());
            }
            PrefixCorr::Degenerate => panic!("unexpected degenerate"),
        }
    }

    #[test]
    fn prefix_corr_of_fc_keeps_sign_structure() {
        let pattern = SignPattern::parse("+-+").unwrap();
        let d = gen_fc(&pattern, 20, 6).unwrap();
        let policy = PrefixPolicy::for_vars(3);
        for k in policy.min_prefix()..=d.n_rows() {
            match prefix_corr(&d, k, &policy).unwrap() {
                PrefixCorr::Matrix(m) => {
                    let expected = fc_from_first_row(&pattern);
                    assert_eq!(
                        m.entries_row_major(),
                        expected.entries_row_major(),
                        "k = {k}"
                    );
                }
                PrefixCorr::Degenerate => panic!("FC prefixes never degenerate"),
            }
        }
    }

    #[test]
    fn prefix_corr_degenerate_rules() {
        // Column B is constant over the first 4 rows.
        let d = DataMatrix::new(
            names(&["A", "B"]),
            vec![
                vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                vec![7.0, 7.0, 7.0, 7.0, 8.0, 9.0],
            ],
        )
        .unwrap();
        let skip = PrefixPolicy::new(3, DegenerateRule::Skip).unwrap();
        assert_eq!(prefix_corr(&d, 4, &skip).unwrap(), PrefixCorr::Degenerate);
        assert!(matches!(
            prefix_corr(&d, 5, &skip).unwrap(),
            PrefixCorr::Matrix(_)
        ));
        let fail = skip.with_degenerate_rule(DegenerateRule::Fail);
        assert!(matches!(
            prefix_corr(&d, 4, &fail),
            Err(Error::ZeroVarianceColumn { rows: 4, .. })
        ));
    }

    #[test]
    fn prefix_corr_range_checks() {
        let d = gen_fu(2, 10, 1).unwrap();
        let policy = PrefixPolicy::for_vars(2);
        assert!(matches!(
            prefix_corr(&d, 2, &policy),
            Err(Error::PrefixOutOfRange {
                k: 2,
                min: 3,
                max: 10
            })
        ));
        assert!(matches!(
            prefix_corr(&d, 11, &policy),
            Err(Error::PrefixOutOfRange { .. })
        ));
    }

    #[test]
    fn prefix_policy_validation() {
        assert!(matches!(
            PrefixPolicy::new(2, DegenerateRule::Skip),
            Err(Error::MinPrefixTooSmall { got: 2 })
        ));
        assert_eq!(PrefixPolicy::for_vars(2).min_prefix(), 3);
        assert_eq!(PrefixPolicy::for_vars(5).min_prefix(), 6);
    }

    #[test]
    fn rolling_corr_tracks_scratch_computation() {
        let d = crate::data::add_noise(
            &gen_fc(&SignPattern::parse("+++").unwrap(), 30, 2).unwrap(),
            5.0,
            3,
        )
        .unwrap();
        let policy = PrefixPolicy::new(3, DegenerateRule::Skip).unwrap();
        let mut engine = RollingCorr::new(d.n_cols());
        for t in 0..d.n_rows() {
            engine.push_row(&d.row(t)).unwrap();
            let k = t + 1;
            if k < policy.min_prefix() {
                continue;
            }
            let scratch = match prefix_corr(&d, k, &policy).unwrap() {
                PrefixCorr::Matrix(m) => m,
                PrefixCorr::Degenerate => continue,
            };
            let rolled = match engine.corr().unwrap() {
                PrefixCorr::Matrix(m) => m,
                PrefixCorr::Degenerate => panic!("rolling saw degenerate where scratch did not"),
            };
            for i in 0..d.n_cols() {
                for j in 0..d.n_cols() {
                    let diff = (rolled.entry(i, j) - scratch.entry(i, j)).abs();
                    assert!(diff < 1e-12, "k = {k}, entry ({i}, {j}), diff = {diff}");
                }
            }
        }
    }

    #[test]
    fn rolling_corr_degenerate_detection_matches_scratch() {
        let d = DataMatrix::new(
            names(&["A", "B"]),
            vec![vec![1.0, 2.0, 3.0, 4.0], vec![7.0, 7.0, 7.0, 9.0]],
        )
        .unwrap();
        let mut engine = RollingCorr::new(2);
        for t in 0..d.n_rows() {
            engine.push_row(&d.row(t)).unwrap();
            let k = t + 1;
            let scratch_degenerate = degenerate_prefix_column(&d, k).is_some();
            let rolled_degenerate = engine.degenerate_column().is_some();
            assert_eq!(scratch_degenerate, rolled_degenerate, "k = {k}");
        }
    }

    #[test]
    fn rolling_corr_needs_two_rows() {
        let mut engine = RollingCorr::new(2);
        assert!(engine.corr().is_none());
        engine.push_row(&[1.0, 2.0]).unwrap();
        assert!(engine.corr().is_none());
        engine.push_row(&[2.0, 1.0]).unwrap();
        assert!(engine.corr().is_some());
        assert!(matches!(
            engine.push_row(&[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn from_entries_validates() {
        assert!(CorrelationMatrix::from_entries(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).is_ok());
        assert!(matches!(
            CorrelationMatrix::from_entries(vec![vec![1.0, 0.5]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            CorrelationMatrix::from_entries(vec![vec![0.9, 0.5], vec![0.5, 1.0]]),
            Err(Error::InvalidCorrelationEntry {
                what: "unit diagonal",
                ..
            })
        ));
        assert!(matches!(
            CorrelationMatrix::from_entries(vec![vec![1.0, 0.5], vec![0.4, 1.0]]),
            Err(Error::InvalidCorrelationEntry {
                what: "symmetry",
                ..
            })
        ));
        assert!(matches!(
            CorrelationMatrix::from_entries(vec![vec![1.0, 1.5], vec![1.5, 1.0]]),
            Err(Error::InvalidCorrelationEntry { what: "range", .. })
        ));
    }
}
