//! The extended correlation coefficient and its applications: rolling
//! maximal-eigenvalue traces, noise decomposition, and feature-subset
//! ranking.
//!
//! For `n` variables the coefficient rescales the maximal eigenvalue of the
//! correlation matrix from `[1, n]` onto `[0, 1]`:
//!
//! ```text
//! rho_eig  = (λ_max − 1) / (n − 1)
//! rho_frob = (‖R‖_F − √n) / (n − √n)
//! ```
//!
//! Both variants are 1 on fully correlated data and 0 on fully uncorrelated
//! data; between the endpoints they differ (the Frobenius variant weighs all
//! entries, the eigenvalue variant only the dominant direction), so both are
//! always reported. In [`RhoMode::Instant`] the full dataset is used once; in
//! [`RhoMode::RollingMean`] the statistic is averaged over the trace of
//! growing row prefixes. Values are reported unclamped so that solver
//! inaccuracies surface in tests instead of being hidden.

use crate::corr::{DegenerateRule, PrefixCorr, PrefixPolicy, RollingCorr};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::format::g12_value;
use crate::kahan::kahan_sum;
use crate::spectral::{frobenius_norm, lambda_max};

/// Exhaustive subset ranking is capped at this many columns.
pub const MAX_RANK_COLUMNS: usize = 20;

/// How the extended coefficient aggregates over samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMode {
    /// Mean of the statistic over all row prefixes (conservative; reproduces
    /// the rolling-trace experiments).
    RollingMean,
    /// Single evaluation on the full dataset (closest to the two-variable
    /// Pearson coefficient; the default in the CLI).
    Instant,
}

impl std::fmt::Display for RhoMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RhoMode::RollingMean => "rolling-mean",
            RhoMode::Instant => "instant",
        })
    }
}

/// One point of a rolling trace: the maximal eigenvalue of the prefix
/// correlation matrix, or `None` when the prefix was degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub prefix_len: usize,
    pub lambda_max: Option<f64>,
}

impl TraceEntry {
    pub fn is_degenerate(&self) -> bool {
        self.lambda_max.is_none()
    }
}

/// Maximal-eigenvalue trace over growing prefixes, one entry per prefix
/// length from `policy.min_prefix()` to the number of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaMaxTrace {
    entries: Vec<TraceEntry>,
    policy: PrefixPolicy,
}

impl LambdaMaxTrace {
    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn policy(&self) -> PrefixPolicy {
        self.policy
    }

    /// Number of non-degenerate entries.
    pub fn valid_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_degenerate()).count()
    }

    /// Mean maximal eigenvalue over non-degenerate entries.
    pub fn mean_lambda_max(&self) -> Option<f64> {
        let values: Vec<f64> = self.entries.iter().filter_map(|e| e.lambda_max).collect();
        if values.is_empty() {
            None
        } else {
            Some(kahan_sum(values.iter().copied()) / values.len() as f64)
        }
    }
}

/// The extended coefficient in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoResult {
    pub rho_eig: f64,
    pub rho_frob: f64,
    pub n_vars: usize,
    pub mode: RhoMode,
    /// Non-degenerate prefixes that entered the mean; 0 in instant mode.
    pub trace_length: usize,
}

/// Noise decomposition: total dataset noise split into the share carried by
/// the predictors alone and the remainder attributed to the target labeling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseReport {
    pub total_noise: f64,
    pub predictor_noise: f64,
    pub labeling_noise: f64,
}

/// One ranked predictor subset.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub columns: Vec<String>,
    pub rho: f64,
    /// Scatter among the subset columns alone; `None` for singletons.
    pub predictor_noise: Option<f64>,
}

fn rho_eig_from(lambda: f64, n: usize) -> f64 {
    (lambda - 1.0) / (n as f64 - 1.0)
}

fn rho_frob_from(frob: f64, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    (frob - sqrt_n) / (n as f64 - sqrt_n)
}

/// Per-prefix statistics: `(prefix_len, Some((lambda_max, frobenius)))`,
/// with `None` marking a degenerate prefix under [`DegenerateRule::Skip`].
type PrefixStats = Vec<(usize, Option<(f64, f64)>)>;

fn scan_prefixes(data: &DataMatrix, policy: &PrefixPolicy) -> Result<PrefixStats> {
    let rows = data.n_rows();
    if rows < policy.min_prefix() {
        return Err(Error::DataTooShort {
            rows,
            min_prefix: policy.min_prefix(),
        });
    }
    let mut engine = RollingCorr::new(data.n_cols());
    let mut out = Vec::with_capacity(rows - policy.min_prefix() + 1);
    for t in 0..rows {
        engine.push_row(&data.row(t))?;
        let k = t + 1;
        if k < policy.min_prefix() {
            continue;
        }
        match engine.corr().expect("at least min_prefix >= 3 rows seen") {
            PrefixCorr::Degenerate => match policy.degenerate_rule() {
                DegenerateRule::Skip => out.push((k, None)),
                DegenerateRule::Fail => {
                    let j = engine
                        .degenerate_column()
                        .expect("degenerate column present");
                    return Err(Error::ZeroVarianceColumn {
                        column: data.name(j).to_owned(),
                        rows: k,
                    });
                }
            },
            PrefixCorr::Matrix(c) => {
                out.push((k, Some((lambda_max(&c)?, frobenius_norm(&c)))));
            }
        }
    }
    Ok(out)
}

/// Maximal eigenvalue of every row prefix from `policy.min_prefix()` up to
/// the full dataset.
pub fn lambda_trace(data: &DataMatrix, policy: &PrefixPolicy) -> Result<LambdaMaxTrace> {
    let entries = scan_prefixes(data, policy)?
        .into_iter()
        .map(|(prefix_len, stats)| TraceEntry {
            prefix_len,
            lambda_max: stats.map(|(lambda, _)| lambda),
        })
        .collect();
    Ok(LambdaMaxTrace {
        entries,
        policy: *policy,
    })
}

/// The extended correlation coefficient of a dataset.
pub fn rho_extended(data: &DataMatrix, mode: RhoMode, policy: &PrefixPolicy) -> Result<RhoResult> {
    let n = data.n_cols();
    match mode {
        RhoMode::Instant => {
            let c = crate::corr::corr_matrix(data)?;
            Ok(RhoResult {
                rho_eig: rho_eig_from(lambda_max(&c)?, n),
                rho_frob: rho_frob_from(frobenius_norm(&c), n),
                n_vars: n,
                mode,
                trace_length: 0,
            })
        }
        RhoMode::RollingMean => {
            let stats: Vec<(f64, f64)> = scan_prefixes(data, policy)?
                .into_iter()
                .filter_map(|(_, s)| s)
                .collect();
            if stats.is_empty() {
                return Err(Error::AllDegenerate);
            }
            let count = stats.len() as f64;
            let mean_lambda = kahan_sum(stats.iter().map(|s| s.0)) / count;
            let mean_frob = kahan_sum(stats.iter().map(|s| s.1)) / count;
            Ok(RhoResult {
                rho_eig: rho_eig_from(mean_lambda, n),
                rho_frob: rho_frob_from(mean_frob, n),
                n_vars: n,
                mode,
                trace_length: stats.len(),
            })
        }
    }
}

/// `(|pearson r|, instant rho_eig)` of the two-column dataset formed by `x`
/// and `y`. For two variables `λ_max = 1 + |r|`, so the components agree to
/// solver tolerance.
pub fn rho_pairwise_consistency(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let r = crate::corr::pearson(x, y)?;
    let data = DataMatrix::new(
        vec!["x".to_owned(), "y".to_owned()],
        vec![x.to_vec(), y.to_vec()],
    )?;
    let rho = rho_extended(&data, RhoMode::Instant, &PrefixPolicy::for_vars(2))?;
    Ok((r.abs(), rho.rho_eig))
}

/// Share of total noise attributable to the labeling: the predictor noise is
/// removed from the total, floored at zero.
pub fn labeling_noise(total_noise: f64, predictor_noise: f64) -> f64 {
    (total_noise - predictor_noise).max(0.0)
}

/// Splits dataset noise into predictor noise and labeling noise around the
/// given target column.
///
/// `total = 1 − ρ(all columns)`, `predictor = 1 − ρ(all except target)`,
/// `labeling = max(0, total − predictor)`; the first two are floored at zero
/// so that a solver overshoot of ρ past 1 cannot produce negative noise. The
/// labeling figure is meaningful when the predictor noise is small; both are
/// reported so callers can apply their own threshold.
pub fn noise_report(
    data: &DataMatrix,
    target: &str,
    mode: RhoMode,
    policy: &PrefixPolicy,
) -> Result<NoiseReport> {
    let target_index = data
        .column_index(target)
        .ok_or_else(|| Error::UnknownColumn {
            name: target.to_owned(),
        })?;
    let predictors: Vec<usize> = (0..data.n_cols()).filter(|&j| j != target_index).collect();
    if predictors.len() < 2 {
        return Err(Error::NotEnoughPredictors {
            available: predictors.len(),
        });
    }
    let rho_all = rho_extended(data, mode, policy)?.rho_eig;
    let predictor_data = data.select(&predictors)?;
    let rho_pred = rho_extended(&predictor_data, mode, policy)?.rho_eig;
    let total_noise = (1.0 - rho_all).max(0.0);
    let predictor_noise = (1.0 - rho_pred).max(0.0);
    Ok(NoiseReport {
        total_noise,
        predictor_noise,
        labeling_noise: labeling_noise(total_noise, predictor_noise),
    })
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(
        items: &[usize],
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for i in start..=items.len().saturating_sub(remaining) {
            current.push(items[i]);
            recurse(items, k, i + 1, current, out);
            current.pop();
        }
    }
    recurse(items, k, 0, &mut current, &mut out);
    out
}

/// Scores every `k`-subset of predictor columns by the extended coefficient
/// of the subset together with the target, sorted by descending ρ.
///
/// Ties (at the 12-significant-digit output precision) are broken
/// lexicographically by column names. Each entry also reports the subset's
/// own predictor noise, mirroring the two-source noise decomposition.
pub fn rank_subsets(
    data: &DataMatrix,
    target: &str,
    k: usize,
    mode: RhoMode,
    policy: &PrefixPolicy,
) -> Result<Vec<RankEntry>> {
    let n = data.n_cols();
    if n > MAX_RANK_COLUMNS {
        return Err(Error::TooManyColumns {
            n,
            max: MAX_RANK_COLUMNS,
        });
    }
    let target_index = data
        .column_index(target)
        .ok_or_else(|| Error::UnknownColumn {
            name: target.to_owned(),
        })?;
    let predictors: Vec<usize> = (0..n).filter(|&j| j != target_index).collect();
    if k < 1 || k > predictors.len() {
        return Err(Error::SubsetSizeOutOfRange {
            k,
            max: predictors.len(),
        });
    }
    let mut entries = Vec::new();
    for subset in combinations(&predictors, k) {
        let mut with_target = subset.clone();
        with_target.push(target_index);
        let scored = data.select(&with_target)?;
        let rho = rho_extended(&scored, mode, policy)?.rho_eig;
        let predictor_noise = if k >= 2 {
            let alone = data.select(&subset)?;
            Some((1.0 - rho_extended(&alone, mode, policy)?.rho_eig).max(0.0))
        } else {
            None
        };
        entries.push(RankEntry {
            columns: subset.iter().map(|&j| data.name(j).to_owned()).collect(),
            rho,
            predictor_noise,
        });
    }
    entries.sort_by(|a, b| {
        g12_value(b.rho)
            .total_cmp(&g12_value(a.rho))
            .then_with(|| a.columns.cmp(&b.columns))
    });
    Ok(entries)
}
