//! Extended (multivariable) Pearson correlation via correlation-matrix spectra.
//!
//! The classical Pearson coefficient is restricted to two variables. This
//! crate measures the joint association of `n` variables through the spectrum
//! of their correlation matrix: the maximal eigenvalue of an n-variable
//! correlation matrix lies in `[1, n]`, reaching `n` exactly when every pair
//! of variables is perfectly correlated (an "FC" dataset) and `1` exactly when
//! no pair is correlated at all (an "FU" dataset). Rescaling the maximal
//! eigenvalue — or, equivalently at the endpoints, the Frobenius norm — onto
//! `[0, 1]` yields an extended correlation coefficient that reduces to `|r|`
//! for two variables.
//!
//! The crate provides:
//!
//! * [`data`] — dataset representation, CSV ingestion, seeded FC/FU synthetic
//!   generation, uniform noise injection, and balanced median labeling;
//! * [`corr`] — pairwise Pearson correlation, full and prefix correlation
//!   matrices, and an incremental rolling engine;
//! * [`spectral`] — a self-contained cyclic-Jacobi eigensolver, dominant
//!   eigenvalue via power iteration, and the two matrix norms;
//! * [`rho`] — the extended coefficient itself, rolling maximal-eigenvalue
//!   traces, predictor/labeling noise decomposition, and exhaustive
//!   feature-subset ranking;
//! * a batch CLI (`excorr`) wiring the above together with CSV/JSON output.
//!
//! All randomness flows through [`rng::SplitMix64`] with caller-supplied
//! seeds, so every operation is a pure function of its inputs.

pub mod corr;
pub mod data;
pub mod error;
pub mod format;
mod kahan;
pub mod rho;
pub mod rng;
pub mod spectral;

pub use corr::{
    corr_matrix, fc_from_first_row, pearson, prefix_corr, CorrelationMatrix, DegenerateRule,
    PrefixCorr, PrefixPolicy, RollingCorr,
};
pub use data::{
    add_noise, gen_fc, gen_fu, median_label, read_csv, DataMatrix, Label, LabelVector, SignPattern,
};
pub use error::{Error, Result};
pub use rho::{
    labeling_noise, lambda_trace, noise_report, rank_subsets, rho_extended,
    rho_pairwise_consistency, LambdaMaxTrace, NoiseReport, RankEntry, RhoMode, RhoResult,
    TraceEntry,
};
pub use spectral::{eig_sym, frobenius_norm, lambda_max, spectral_norm, EigenSpectrum};
