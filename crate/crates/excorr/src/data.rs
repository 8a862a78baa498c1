//! Dataset representation, CSV ingestion, synthetic generation, noise
//! injection, and balanced median labeling.
//!
//! A dataset is a rectangular grid of finite reals: columns are named
//! variables, rows are samples. Two synthetic families mark the endpoints of
//! the extended correlation coefficient: fully correlated datasets
//! ([`gen_fc`], every pairwise correlation exactly ±1) and fully uncorrelated
//! datasets ([`gen_fu`], every pairwise correlation exactly 0).
//!
//! CSV dialect: comma separator, `.` decimal point, mandatory header of
//! unique names, UTF-8, no quoting. Cells are written with Rust's shortest
//! round-trip float formatting, so a written dataset reads back bit for bit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::rng::SplitMix64;

/// Rectangular dataset: `m` sample rows over `n` named variable columns.
///
/// Invariants: `m >= 2`, `n >= 2`, all cells finite, column names unique and
/// non-empty. Storage is column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DataMatrix {
    /// Builds a dataset from named columns, validating every invariant.
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        if names.len() < 2 {
            return Err(Error::TooFewColumns { got: names.len() });
        }
        for (index, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyColumnName { index: index + 1 });
            }
            if names[..index].contains(name) {
                return Err(Error::DuplicateColumn { name: name.clone() });
            }
        }
        let rows = columns[0].len();
        if rows < 2 {
            return Err(Error::TooFewRows { got: rows });
        }
        for (name, column) in names.iter().zip(&columns) {
            if column.len() != rows {
                return Err(Error::ColumnLengthMismatch {
                    column: name.clone(),
                    expected: rows,
                    got: column.len(),
                });
            }
            if let Some(t) = column.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    row: t + 1,
                    column: name.clone(),
                });
            }
        }
        Ok(Self { names, columns })
    }

    /// Builds a dataset from sample rows (header order), validating arity.
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = names.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); n];
        for (t, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: t + 1,
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                columns[j].push(v);
            }
        }
        Self::new(names, columns)
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sample row `t` in header order.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[t]).collect()
    }

    /// New dataset keeping only the given columns, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let names = indices.iter().map(|&j| self.names[j].clone()).collect();
        let columns = indices.iter().map(|&j| self.columns[j].clone()).collect();
        Self::new(names, columns)
    }

    /// Writes the dataset as CSV with shortest round-trip cell formatting.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.names.join(","))?;
        let mut line = String::new();
        for t in 0..self.n_rows() {
            line.clear();
            for j in 0..self.n_cols() {
                if j > 0 {
                    line.push(',');
                }
                let _ = write!(line, "{}", self.columns[j][t]);
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}

/// Parses a dataset from CSV text (see the module docs for the dialect).
///
/// Row numbers in errors are 1-based data rows; the header is not counted.
pub fn parse_csv(text: &str) -> Result<DataMatrix> {
    let mut lines: Vec<&str> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    let Some((header, data_lines)) = lines.split_first() else {
        return Err(Error::TooFewRows { got: 0 });
    };
    let names: Vec<String> = header.split(',').map(str::to_owned).collect();
    if names.len() < 2 {
        return Err(Error::TooFewColumns { got: names.len() });
    }
    let mut rows = Vec::with_capacity(data_lines.len());
    for (t, line) in data_lines.iter().enumerate() {
        let mut row = Vec::with_capacity(names.len());
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::RaggedRow {
                row: t + 1,
                expected: names.len(),
                got: fields.len(),
            });
        }
        for (j, field) in fields.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                row: t + 1,
                column: names[j].clone(),
                value: (*field).to_owned(),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row: t + 1,
                    column: names[j].clone(),
                    value: (*field).to_owned(),
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    DataMatrix::from_rows(names, rows)
}

/// Reads a dataset from a CSV file.
pub fn read_csv(path: &Path) -> Result<DataMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_csv(&text)
}

/// Spreadsheet-style column names: A, B, ..., Z, AA, AB, ...
pub fn column_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|mut j| {
            let mut name = String::new();
            loop {
                name.insert(0, (b'A' + (j % 26) as u8) as char);
                j /= 26;
                if j == 0 {
                    break;
                }
                j -= 1;
            }
            name
        })
        .collect()
}

/// Vector of ±1 signs with the first entry fixed to +1.
///
/// The first row of a fully correlated dataset's correlation matrix is such a
/// vector, and by sign transitivity it determines the whole matrix; the
/// 2^(n-1) canonical patterns enumerate all n-variable FC classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptySignPattern);
        }
        if let Some(&bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignValue { value: bad });
        }
        if signs[0] != 1 {
            return Err(Error::SignPatternLead);
        }
        Ok(Self { signs })
    }

    /// Parses a pattern string over `{+, -}`, e.g. `"++-"`.
    pub fn parse(text: &str) -> Result<Self> {
        let signs = text
            .chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidSignChar { ch: other }),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(signs)
    }

    pub fn all_plus(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// All 2^(n-1) canonical patterns of length `n`, in binary order of the
    /// trailing signs (bit set = minus).
    pub fn enumerate_canonical(n: usize) -> Vec<Self> {
        assert!(
            (1..=24).contains(&n),
            "pattern enumeration limited to n <= 24"
        );
        (0u32..1 << (n - 1))
            .map(|mask| {
                let mut signs = vec![1i8; n];
                for (bit, sign) in signs.iter_mut().skip(1).enumerate() {
                    if mask >> bit & 1 == 1 {
                        *sign = -1;
                    }
                }
                Self { signs }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign_f64(&self, j: usize) -> f64 {
        f64::from(self.signs[j])
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.signs {
            f.write_char(if s == 1 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Binary class tag assigned by [`median_label`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Lower,
    Upper,
}

/// Balanced binary labeling: the lower and upper class sizes differ by at
/// most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<Label>,
}

impl LabelVector {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let lower = labels.iter().filter(|&&l| l == Label::Lower).count();
        let upper = labels.len() - lower;
        if lower.abs_diff(upper) > 1 {
            return Err(Error::LengthMismatch {
                left: lower,
                right: upper,
            });
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `(lower, upper)` class sizes.
    pub fn counts(&self) -> (usize, usize) {
        let lower = self.labels.iter().filter(|&&l| l == Label::Lower).count();
        (lower, self.labels.len() - lower)
    }
}

// Scale exponents for FC columns: 2^-1, 2^0, 2^1. Power-of-two scales (and
// no offsets) keep each column an exact floating-point multiple of the base
// series, which makes every pairwise correlation bitwise ±1; the narrow span
// keeps one noise amplitude meaningful for every column at once.
const FC_EXP_SPAN: u64 = 3;
const FC_EXP_MIN: i32 = -1;

/// Generates a fully correlated dataset for the given sign pattern.
///
/// A strictly increasing random base series is drawn once; column `j` is
/// `signs[j] * 2^(e_j) * base` for a per-column random exponent `e_j`. Every
/// pairwise sample correlation is exactly `signs[i] * signs[j]`.
///
/// Draw order from the seed: `rows` uniforms for the base series, then one
/// integer per column for the exponent.
pub fn gen_fc(pattern: &SignPattern, rows: usize, seed: u64) -> Result<DataMatrix> {
    let n = pattern.len();
    if n < 2 {
        return Err(Error::TooFewColumns { got: n });
    }
    if rows < 3 {
        return Err(Error::GenTooFewRows {
            needed: 3,
            got: rows,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut base = Vec::with_capacity(rows);
    base.push(rng.next_f64());
    for t in 1..rows {
        base.push(base[t - 1] + 0.25 + rng.next_f64());
    }
    let columns = (0..n)
        .map(|j| {
            let exponent = rng.below(FC_EXP_SPAN) as i32 + FC_EXP_MIN;
            let scale = pattern.sign_f64(j) * 2f64.powi(exponent);
            base.iter().map(|&b| scale * b).collect()
        })
        .collect();
    DataMatrix::new(column_names(n), columns)
}

// Numerical-rank guard for the orthogonalized seed block.
const FU_MIN_NORM: f64 = 1e-6;
const FU_MAX_ATTEMPTS: usize = 64;

/// Generates a fully uncorrelated dataset: every pairwise sample correlation
/// is exactly 0 at the full length *and at every prefix of at least
/// `n_vars + 1` rows*.
///
/// The first `n_vars + 1` rows are random columns, centered and made mutually
/// orthogonal (modified Gram-Schmidt, two passes), then scaled to a random
/// per-column spread. Each later row changes exactly one column away from its
/// running mean and pins every other column to its running mean; a rank-one
/// update argument shows this leaves all prefix covariances at zero.
///
/// Draw order from the seed: `(n_vars + 1) * n_vars` uniforms for the seed
/// block (column-major; re-drawn wholesale in the measure-zero case that the
/// block is numerically rank-deficient), `n_vars` scale uniforms, then one
/// sign and one uniform per extension row.
pub fn gen_fu(n_vars: usize, rows: usize, seed: u64) -> Result<DataMatrix> {
    if n_vars < 2 {
        return Err(Error::TooFewColumns { got: n_vars });
    }
    if rows < n_vars + 1 {
        return Err(Error::GenTooFewRows {
            needed: n_vars + 1,
            got: rows,
        });
    }
    let block_rows = n_vars + 1;
    let mut rng = SplitMix64::new(seed);

    let mut block: Vec<Vec<f64>> = Vec::new();
    let mut ok = false;
    for _ in 0..FU_MAX_ATTEMPTS {
        block = (0..n_vars)
            .map(|_| (0..block_rows).map(|_| rng.uniform(-1.0, 1.0)).collect())
            .collect();
        if orthogonalize_centered(&mut block) {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::NoConvergence {
            method: "gen_fu orthogonalization",
            limit: FU_MAX_ATTEMPTS,
        });
    }

    // Scale each orthogonal column to sample standard deviation `target`.
    let mut targets = Vec::with_capacity(n_vars);
    for column in &mut block {
        let target = rng.uniform(0.5, 2.0);
        let norm = column.iter().map(|v| v * v).sum::<f64>().sqrt();
        let factor = target * ((block_rows - 1) as f64).sqrt() / norm;
        for v in column.iter_mut() {
            *v *= factor;
        }
        targets.push(target);
    }

    let mut columns: Vec<Vec<f64>> = block
        .into_iter()
        .map(|c| {
            let mut col = Vec::with_capacity(rows);
            col.extend(c);
            col
        })
        .collect();
    let mut sums: Vec<KahanSum> = columns
        .iter()
        .map(|c| {
            let mut s = KahanSum::new();
            for &v in c {
                s.add(v);
            }
            s
        })
        .collect();

    for t in block_rows..rows {
        let touched = (t - block_rows) % n_vars;
        let count = t as f64;
        let delta = rng.sign() * (0.5 + rng.next_f64()) * targets[touched];
        for j in 0..n_vars {
            let mean = sums[j].value() / count;
            let cell = if j == touched { mean + delta } else { mean };
            columns[j].push(cell);
            sums[j].add(cell);
        }
    }

    DataMatrix::new(column_names(n_vars), columns)
}

/// Centers the columns, orthogonalizes them in the centered hyperplane, and
/// re-centers. Returns false if a column is numerically dependent.
fn orthogonalize_centered(columns: &mut [Vec<f64>]) -> bool {
    let rows = columns[0].len();
    for column in columns.iter_mut() {
        center(column, rows);
    }
    for j in 0..columns.len() {
        let (done, rest) = columns.split_at_mut(j);
        let current = &mut rest[0];
        // Two projection passes; the second removes the rounding left by the
        // first so that dot products come out at machine-epsilon level.
        for _ in 0..2 {
            for q in done.iter() {
                let qq: f64 = q.iter().map(|v| v * v).sum();
                let qv: f64 = q.iter().zip(current.iter()).map(|(a, b)| a * b).sum();
                let coeff = qv / qq;
                for (v, &qt) in current.iter_mut().zip(q.iter()) {
                    *v -= coeff * qt;
                }
            }
        }
        center(current, rows);
        let norm = current.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= FU_MIN_NORM {
            return false;
        }
    }
    true
}

fn center(column: &mut [f64], rows: usize) {
    let mut sum = KahanSum::new();
    for &v in column.iter() {
        sum.add(v);
    }
    let mean = sum.value() / rows as f64;
    for v in column.iter_mut() {
        *v -= mean;
    }
}

/// Perturbs every cell by an independent uniform draw on
/// `[-amplitude, +amplitude]`; the input is untouched.
///
/// Draw order from the seed: row-major, one uniform per cell. Amplitude 0
/// returns the input unchanged without consuming any draws.
pub fn add_noise(data: &DataMatrix, amplitude: f64, seed: u64) -> Result<DataMatrix> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::InvalidAmplitude { value: amplitude });
    }
    if amplitude == 0.0 {
        return Ok(data.clone());
    }
    let mut rng = SplitMix64::new(seed);
    let mut columns: Vec<Vec<f64>> = data.columns.clone();
    for t in 0..data.n_rows() {
        for column in columns.iter_mut() {
            column[t] += rng.uniform(-amplitude, amplitude);
        }
    }
    DataMatrix::new(data.names.clone(), columns)
}

/// Balanced median labeling by the target column.
///
/// Rows are ranked by target value with ties broken by row index (earlier row
/// first); the lower half gets [`Label::Lower`], the rest [`Label::Upper`].
/// For an odd row count the median row goes to the lower class.
pub fn median_label(data: &DataMatrix, target: &str) -> Result<LabelVector> {
    let j = data
        .column_index(target)
        .ok_or_else(|| Error::UnknownColumn {
            name: target.to_owned(),
        })?;
    let column = data.column(j);
    let m = data.n_rows();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]).then(a.cmp(&b)));
    let lower_count = m.div_ceil(2);
    let mut labels = vec![Label::Upper; m];
    for &t in &order[..lower_count] {
        labels[t] = Label::Lower;
    }
    LabelVector::new(labels)
}
