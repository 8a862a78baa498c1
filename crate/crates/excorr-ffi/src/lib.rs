//! C ABI for the excorr library.
//!
//! Conventions:
//!
//! * Handles (`ExcorrData`, `ExcorrCorrMatrix`, `ExcorrTrace`,
//!   `ExcorrRanking`) are opaque; create them through the constructors here
//!   and release them with the matching `*_free` function exactly once.
//! * Every fallible call returns an [`ExcorrStatus`]; results travel through
//!   out-pointers, which are written only on `EXCORR_STATUS_OK`.
//! * On failure a human-readable message is stored per thread and can be
//!   fetched with [`excorr_last_error_message`].
//! * Strings are NUL-terminated UTF-8. `min_prefix = 0` selects the default
//!   starting prefix (number of variables + 1).
//!
//! The header `include/excorr.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use excorr::{
    corr_matrix, fc_from_first_row, gen_fc, gen_fu, labeling_noise, lambda_trace, median_label,
    noise_report, rank_subsets, read_csv, rho_extended, CorrelationMatrix, DataMatrix,
    DegenerateRule, Error, Label, LambdaMaxTrace, PrefixPolicy, RankEntry, RhoMode, SignPattern,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcorrStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument violated a precondition (bad pattern, unknown column, ...).
    InvalidArgument = 3,
    /// File could not be read or written.
    Io = 4,
    /// Input text could not be parsed as a dataset.
    Parse = 5,
    /// Zero-variance data where variation is required.
    Degenerate = 6,
    /// An iterative solver failed to converge.
    NoConvergence = 7,
    /// An index or size argument was out of range.
    OutOfRange = 8,
    /// A caller-supplied buffer was too small.
    BufferTooSmall = 9,
}

/// Aggregation mode for the extended coefficient.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcorrMode {
    Instant = 0,
    RollingMean = 1,
}

impl From<ExcorrMode> for RhoMode {
    fn from(mode: ExcorrMode) -> Self {
        match mode {
            ExcorrMode::Instant => RhoMode::Instant,
            ExcorrMode::RollingMean => RhoMode::RollingMean,
        }
    }
}

/// Extended correlation coefficient in both normalizations.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ExcorrRhoResult {
    pub rho_eig: f64,
    pub rho_frob: f64,
    pub n_vars: usize,
    /// Non-degenerate prefixes behind the mean; 0 in instant mode.
    pub trace_length: usize,
}

/// Noise decomposition around a target column.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ExcorrNoiseReport {
    pub total_noise: f64,
    pub predictor_noise: f64,
    pub labeling_noise: f64,
}

/// Opaque dataset handle.
pub struct ExcorrData(DataMatrix);

/// Opaque correlation-matrix handle.
pub struct ExcorrCorrMatrix(CorrelationMatrix);

/// Opaque maximal-eigenvalue trace handle.
pub struct ExcorrTrace(LambdaMaxTrace);

/// Opaque subset-ranking handle.
pub struct ExcorrRanking(Vec<RankEntry>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: ExcorrStatus, message: impl Into<Vec<u8>>) -> ExcorrStatus {
    let text = CString::new(message).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
    status
}

fn fail_with(err: &Error) -> ExcorrStatus {
    fail(status_of(err), err.to_string())
}

fn status_of(err: &Error) -> ExcorrStatus {
    match err {
        Error::Io { .. } => ExcorrStatus::Io,
        Error::Parse { .. }
        | Error::RaggedRow { .. }
        | Error::DuplicateColumn { .. }
        | Error::EmptyColumnName { .. }
        | Error::NonFinite { .. } => ExcorrStatus::Parse,
        Error::ZeroVarianceVector { .. }
        | Error::ZeroVarianceColumn { .. }
        | Error::AllDegenerate => ExcorrStatus::Degenerate,
        Error::NoConvergence { .. } => ExcorrStatus::NoConvergence,
        Error::PrefixOutOfRange { .. }
        | Error::MinPrefixTooSmall { .. }
        | Error::SubsetSizeOutOfRange { .. }
        | Error::DataTooShort { .. } => ExcorrStatus::OutOfRange,
        _ => ExcorrStatus::InvalidArgument,
    }
}

/// Copies the most recent error message of this thread into `buf` (always
/// NUL-terminated, truncated to `cap` bytes) and returns the full length of
/// the message including the NUL. With a NULL or empty buffer nothing is
/// copied, so a `excorr_last_error_message(NULL, 0)` call sizes the buffer.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(message) = slot.as_ref() else {
            return 0;
        };
        let bytes = message.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let copy = bytes.len().min(cap);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), copy);
            // Guarantee termination even when truncating.
            *buf.add(copy - 1) = 0;
        }
        bytes.len()
    })
}

unsafe fn cstr<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, ExcorrStatus> {
    if ptr.is_null() {
        return Err(fail(
            ExcorrStatus::NullArgument,
            format!("{what} must not be NULL"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ExcorrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, ExcorrStatus> {
    if ptr.is_null() {
        Err(fail(
            ExcorrStatus::NullArgument,
            format!("{what} must not be NULL"),
        ))
    } else {
        Ok(&*ptr)
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> ExcorrStatus {
    if out.is_null() {
        return fail(
            ExcorrStatus::NullArgument,
            format!("{what} must not be NULL"),
        );
    }
    out.write(value);
    ExcorrStatus::Ok
}

fn policy_for(
    n_vars: usize,
    min_prefix: usize,
    fail_on_degenerate: bool,
) -> Result<PrefixPolicy, ExcorrStatus> {
    let rule = if fail_on_degenerate {
        DegenerateRule::Fail
    } else {
        DegenerateRule::Skip
    };
    let base = PrefixPolicy::for_vars(n_vars).with_degenerate_rule(rule);
    if min_prefix == 0 {
        Ok(base)
    } else {
        base.with_min_prefix(min_prefix)
            .map_err(|err| fail_with(&err))
    }
}

unsafe fn copy_string(text: &str, buf: *mut c_char, cap: usize, what: &str) -> ExcorrStatus {
    if buf.is_null() {
        return fail(
            ExcorrStatus::NullArgument,
            format!("{what} must not be NULL"),
        );
    }
    let bytes = text.as_bytes();
    if cap < bytes.len() + 1 {
        return fail(
            ExcorrStatus::BufferTooSmall,
            format!("{what} needs {} bytes, got {cap}", bytes.len() + 1),
        );
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
    *buf.add(bytes.len()) = 0;
    ExcorrStatus::Ok
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// Reads a CSV dataset from `path` into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_read_csv(
    path: *const c_char,
    out: *mut *mut ExcorrData,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let path = match cstr(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match read_csv(Path::new(path)) {
        Ok(data) => write_out(out, Box::into_raw(Box::new(ExcorrData(data))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Writes the dataset to `path` as CSV.
///
/// # Safety
/// `data` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_write_csv(
    data: *const ExcorrData,
    path: *const c_char,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let path = match cstr(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match std::fs::write(path, data.0.to_csv_string()) {
        Ok(()) => ExcorrStatus::Ok,
        Err(err) => fail(ExcorrStatus::Io, format!("cannot write {path}: {err}")),
    }
}

/// Generates a fully correlated dataset from a sign pattern like `"++-"`.
///
/// # Safety
/// `pattern` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_gen_fc(
    pattern: *const c_char,
    rows: usize,
    seed: u64,
    out: *mut *mut ExcorrData,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let pattern_text = match cstr(pattern, "pattern") {
        Ok(p) => p,
        Err(status) => return status,
    };
    let parsed = match SignPattern::parse(pattern_text) {
        Ok(p) => p,
        Err(err) => return fail_with(&err),
    };
    match gen_fc(&parsed, rows, seed) {
        Ok(data) => write_out(out, Box::into_raw(Box::new(ExcorrData(data))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Generates a fully uncorrelated dataset.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_gen_fu(
    n_vars: usize,
    rows: usize,
    seed: u64,
    out: *mut *mut ExcorrData,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    match gen_fu(n_vars, rows, seed) {
        Ok(data) => write_out(out, Box::into_raw(Box::new(ExcorrData(data))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Returns a new dataset with every cell perturbed by a seeded uniform draw
/// on `[-amplitude, amplitude]`; the input is untouched.
///
/// # Safety
/// `data` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_add_noise(
    data: *const ExcorrData,
    amplitude: f64,
    seed: u64,
    out: *mut *mut ExcorrData,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    match excorr::add_noise(&data.0, amplitude, seed) {
        Ok(noisy) => write_out(out, Box::into_raw(Box::new(ExcorrData(noisy))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Number of sample rows; 0 for a NULL handle.
///
/// # Safety
/// `data` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_n_rows(data: *const ExcorrData) -> usize {
    data.as_ref().map_or(0, |d| d.0.n_rows())
}

/// Number of variable columns; 0 for a NULL handle.
///
/// # Safety
/// `data` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_n_cols(data: *const ExcorrData) -> usize {
    data.as_ref().map_or(0, |d| d.0.n_cols())
}

/// Fetches one cell.
///
/// # Safety
/// `data` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_cell(
    data: *const ExcorrData,
    row: usize,
    col: usize,
    out: *mut f64,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    if row >= data.0.n_rows() || col >= data.0.n_cols() {
        return fail(
            ExcorrStatus::OutOfRange,
            format!(
                "cell ({row}, {col}) outside {}x{}",
                data.0.n_rows(),
                data.0.n_cols()
            ),
        );
    }
    write_out(out, data.0.cell(row, col), "out")
}

/// Length in bytes (excluding the NUL) of a column name; 0 when out of range.
///
/// # Safety
/// `data` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_column_name_len(data: *const ExcorrData, col: usize) -> usize {
    data.as_ref()
        .filter(|d| col < d.0.n_cols())
        .map_or(0, |d| d.0.name(col).len())
}

/// Copies a column name into `buf` (NUL-terminated).
///
/// # Safety
/// `data` must be a live handle; `buf` must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_column_name(
    data: *const ExcorrData,
    col: usize,
    buf: *mut c_char,
    cap: usize,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    if col >= data.0.n_cols() {
        return fail(
            ExcorrStatus::OutOfRange,
            format!("column {col} outside 0..{}", data.0.n_cols()),
        );
    }
    copy_string(data.0.name(col), buf, cap, "buf")
}

/// Balanced median labels by the target column: 0 = lower class, 1 = upper.
/// `cap` must be at least the number of rows.
///
/// # Safety
/// `data` must be a live handle; `target` a NUL-terminated string; `out`
/// must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn excorr_median_label(
    data: *const ExcorrData,
    target: *const c_char,
    out: *mut u8,
    cap: usize,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let target = match cstr(target, "target") {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        return fail(ExcorrStatus::NullArgument, "out must not be NULL");
    }
    if cap < data.0.n_rows() {
        return fail(
            ExcorrStatus::BufferTooSmall,
            format!("need {} label slots, got {cap}", data.0.n_rows()),
        );
    }
    match median_label(&data.0, target) {
        Ok(labels) => {
            for (i, label) in labels.labels().iter().enumerate() {
                out.add(i).write(match label {
                    Label::Lower => 0,
                    Label::Upper => 1,
                });
            }
            ExcorrStatus::Ok
        }
        Err(err) => fail_with(&err),
    }
}

/// Releases a dataset handle.
///
/// # Safety
/// `data` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn excorr_data_free(data: *mut ExcorrData) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

// ---------------------------------------------------------------------------
// Correlation matrices
// ---------------------------------------------------------------------------

/// Sample Pearson correlation of two `len`-long vectors.
///
/// # Safety
/// `x` and `y` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn excorr_pearson(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> ExcorrStatus {
    if x.is_null() || y.is_null() {
        return fail(ExcorrStatus::NullArgument, "x and y must not be NULL");
    }
    let x = std::slice::from_raw_parts(x, len);
    let y = std::slice::from_raw_parts(y, len);
    match excorr::pearson(x, y) {
        Ok(r) => write_out(out, r, "out"),
        Err(err) => fail_with(&err),
    }
}

/// Full correlation matrix of a dataset.
///
/// # Safety
/// `data` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_corr_matrix(
    data: *const ExcorrData,
    out: *mut *mut ExcorrCorrMatrix,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    match corr_matrix(&data.0) {
        Ok(matrix) => write_out(
            out,
            Box::into_raw(Box::new(ExcorrCorrMatrix(matrix))),
            "out",
        ),
        Err(err) => fail_with(&err),
    }
}

/// The ±1 correlation matrix determined by a sign pattern like `"++-"`.
///
/// # Safety
/// `pattern` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_fc_from_pattern(
    pattern: *const c_char,
    out: *mut *mut ExcorrCorrMatrix,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let text = match cstr(pattern, "pattern") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match SignPattern::parse(text) {
        Ok(parsed) => write_out(
            out,
            Box::into_raw(Box::new(ExcorrCorrMatrix(fc_from_first_row(&parsed)))),
            "out",
        ),
        Err(err) => fail_with(&err),
    }
}

/// Matrix dimension; 0 for a NULL handle.
///
/// # Safety
/// `matrix` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_corr_n(matrix: *const ExcorrCorrMatrix) -> usize {
    matrix.as_ref().map_or(0, |m| m.0.n())
}

/// Fetches one matrix entry.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_corr_entry(
    matrix: *const ExcorrCorrMatrix,
    i: usize,
    j: usize,
    out: *mut f64,
) -> ExcorrStatus {
    let matrix = match deref(matrix, "matrix") {
        Ok(m) => m,
        Err(status) => return status,
    };
    if i >= matrix.0.n() || j >= matrix.0.n() {
        return fail(
            ExcorrStatus::OutOfRange,
            format!("entry ({i}, {j}) outside {0}x{0}", matrix.0.n()),
        );
    }
    write_out(out, matrix.0.entry(i, j), "out")
}

/// Releases a correlation-matrix handle.
///
/// # Safety
/// `matrix` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn excorr_corr_free(matrix: *mut ExcorrCorrMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

// ---------------------------------------------------------------------------
// Spectral quantities
// ---------------------------------------------------------------------------

/// Dominant eigenvalue; lies in `[1, n]` for a valid correlation matrix.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_lambda_max(
    matrix: *const ExcorrCorrMatrix,
    out: *mut f64,
) -> ExcorrStatus {
    let matrix = match deref(matrix, "matrix") {
        Ok(m) => m,
        Err(status) => return status,
    };
    match excorr::lambda_max(&matrix.0) {
        Ok(value) => write_out(out, value, "out"),
        Err(err) => fail_with(&err),
    }
}

/// Operator 2-norm (equals the dominant eigenvalue for correlation
/// matrices).
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_spectral_norm(
    matrix: *const ExcorrCorrMatrix,
    out: *mut f64,
) -> ExcorrStatus {
    let matrix = match deref(matrix, "matrix") {
        Ok(m) => m,
        Err(status) => return status,
    };
    match excorr::spectral_norm(&matrix.0) {
        Ok(value) => write_out(out, value, "out"),
        Err(err) => fail_with(&err),
    }
}

/// Entrywise (Frobenius) norm; lies in `[sqrt(n), n]` for a correlation
/// matrix.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_frobenius_norm(
    matrix: *const ExcorrCorrMatrix,
    out: *mut f64,
) -> ExcorrStatus {
    let matrix = match deref(matrix, "matrix") {
        Ok(m) => m,
        Err(status) => return status,
    };
    write_out(out, excorr::frobenius_norm(&matrix.0), "out")
}

/// Full spectrum, sorted descending, written into `out_values` (which must
/// hold at least `n` doubles). `out_iterations` (optional) receives the
/// Jacobi sweep count.
///
/// # Safety
/// `matrix` must be a live handle; `out_values` must point to `cap`
/// writable doubles; `out_iterations` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_eig_sym(
    matrix: *const ExcorrCorrMatrix,
    out_values: *mut f64,
    cap: usize,
    out_iterations: *mut usize,
) -> ExcorrStatus {
    let matrix = match deref(matrix, "matrix") {
        Ok(m) => m,
        Err(status) => return status,
    };
    if out_values.is_null() {
        return fail(ExcorrStatus::NullArgument, "out_values must not be NULL");
    }
    let n = matrix.0.n();
    if cap < n {
        return fail(
            ExcorrStatus::BufferTooSmall,
            format!("need {n} eigenvalue slots, got {cap}"),
        );
    }
    match excorr::eig_sym(&matrix.0) {
        Ok(spectrum) => {
            for (i, &value) in spectrum.eigenvalues().iter().enumerate() {
                out_values.add(i).write(value);
            }
            if !out_iterations.is_null() {
                out_iterations.write(spectrum.iterations_used());
            }
            ExcorrStatus::Ok
        }
        Err(err) => fail_with(&err),
    }
}

// ---------------------------------------------------------------------------
// Extended coefficient, traces, noise, ranking
// ---------------------------------------------------------------------------

/// Extended correlation coefficient of a dataset. `min_prefix = 0` selects
/// the default (variables + 1).
///
/// # Safety
/// `data` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_rho(
    data: *const ExcorrData,
    mode: ExcorrMode,
    min_prefix: usize,
    fail_on_degenerate: bool,
    out: *mut ExcorrRhoResult,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let policy = match policy_for(data.0.n_cols(), min_prefix, fail_on_degenerate) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match rho_extended(&data.0, mode.into(), &policy) {
        Ok(rho) => write_out(
            out,
            ExcorrRhoResult {
                rho_eig: rho.rho_eig,
                rho_frob: rho.rho_frob,
                n_vars: rho.n_vars,
                trace_length: rho.trace_length,
            },
            "out",
        ),
        Err(err) => fail_with(&err),
    }
}

/// Noise decomposition around `target`.
///
/// # Safety
/// `data` must be a live handle; `target` a NUL-terminated string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_noise_report(
    data: *const ExcorrData,
    target: *const c_char,
    mode: ExcorrMode,
    min_prefix: usize,
    fail_on_degenerate: bool,
    out: *mut ExcorrNoiseReport,
) -> ExcorrStatus {
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let target = match cstr(target, "target") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let policy = match policy_for(data.0.n_cols(), min_prefix, fail_on_degenerate) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match noise_report(&data.0, target, mode.into(), &policy) {
        Ok(report) => write_out(
            out,
            ExcorrNoiseReport {
                total_noise: report.total_noise,
                predictor_noise: report.predictor_noise,
                labeling_noise: report.labeling_noise,
            },
            "out",
        ),
        Err(err) => fail_with(&err),
    }
}

/// Labeling-noise composition: `max(0, total - predictor)`.
#[no_mangle]
pub extern "C" fn excorr_labeling_noise(total_noise: f64, predictor_noise: f64) -> f64 {
    labeling_noise(total_noise, predictor_noise)
}

/// Maximal-eigenvalue trace over growing prefixes.
///
/// # Safety
/// `data` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_lambda_trace(
    data: *const ExcorrData,
    min_prefix: usize,
    fail_on_degenerate: bool,
    out: *mut *mut ExcorrTrace,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let policy = match policy_for(data.0.n_cols(), min_prefix, fail_on_degenerate) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match lambda_trace(&data.0, &policy) {
        Ok(trace) => write_out(out, Box::into_raw(Box::new(ExcorrTrace(trace))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Number of trace entries; 0 for a NULL handle.
///
/// # Safety
/// `trace` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_trace_len(trace: *const ExcorrTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.entries().len())
}

/// Fetches one trace entry; `out_lambda` receives NaN for degenerate
/// prefixes. Out-pointers may be NULL to skip a field.
///
/// # Safety
/// `trace` must be a live handle; out-pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_trace_entry(
    trace: *const ExcorrTrace,
    index: usize,
    out_prefix_len: *mut usize,
    out_lambda: *mut f64,
    out_degenerate: *mut bool,
) -> ExcorrStatus {
    let trace = match deref(trace, "trace") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let Some(entry) = trace.0.entries().get(index) else {
        return fail(
            ExcorrStatus::OutOfRange,
            format!("trace entry {index} outside 0..{}", trace.0.entries().len()),
        );
    };
    if !out_prefix_len.is_null() {
        out_prefix_len.write(entry.prefix_len);
    }
    if !out_lambda.is_null() {
        out_lambda.write(entry.lambda_max.unwrap_or(f64::NAN));
    }
    if !out_degenerate.is_null() {
        out_degenerate.write(entry.is_degenerate());
    }
    ExcorrStatus::Ok
}

/// Mean maximal eigenvalue over non-degenerate entries and their count.
///
/// # Safety
/// `trace` must be a live handle; out-pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_trace_mean(
    trace: *const ExcorrTrace,
    out_mean: *mut f64,
    out_count: *mut usize,
) -> ExcorrStatus {
    let trace = match deref(trace, "trace") {
        Ok(t) => t,
        Err(status) => return status,
    };
    if !out_count.is_null() {
        out_count.write(trace.0.valid_count());
    }
    match trace.0.mean_lambda_max() {
        Some(mean) => {
            if !out_mean.is_null() {
                out_mean.write(mean);
            }
            ExcorrStatus::Ok
        }
        None => fail(ExcorrStatus::Degenerate, "every trace entry is degenerate"),
    }
}

/// Releases a trace handle.
///
/// # Safety
/// `trace` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn excorr_trace_free(trace: *mut ExcorrTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Ranks every `k`-subset of predictors by extended correlation with the
/// target (descending; ties lexicographic by column names).
///
/// # Safety
/// `data` must be a live handle; `target` a NUL-terminated string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn excorr_rank_subsets(
    data: *const ExcorrData,
    target: *const c_char,
    k: usize,
    mode: ExcorrMode,
    min_prefix: usize,
    fail_on_degenerate: bool,
    out: *mut *mut ExcorrRanking,
) -> ExcorrStatus {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
    let data = match deref(data, "data") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let target = match cstr(target, "target") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let policy = match policy_for(data.0.n_cols(), min_prefix, fail_on_degenerate) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match rank_subsets(&data.0, target, k, mode.into(), &policy) {
        Ok(entries) => write_out(out, Box::into_raw(Box::new(ExcorrRanking(entries))), "out"),
        Err(err) => fail_with(&err),
    }
}

/// Number of ranked subsets; 0 for a NULL handle.
///
/// # Safety
/// `ranking` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_ranking_len(ranking: *const ExcorrRanking) -> usize {
    ranking.as_ref().map_or(0, |r| r.0.len())
}

/// Fetches the scores of one ranked subset; `out_predictor_noise` receives
/// NaN for singleton subsets. Out-pointers may be NULL to skip a field.
///
/// # Safety
/// `ranking` must be a live handle; out-pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_ranking_entry(
    ranking: *const ExcorrRanking,
    index: usize,
    out_rho: *mut f64,
    out_predictor_noise: *mut f64,
) -> ExcorrStatus {
    let ranking = match deref(ranking, "ranking") {
        Ok(r) => r,
        Err(status) => return status,
    };
    let Some(entry) = ranking.0.get(index) else {
        return fail(
            ExcorrStatus::OutOfRange,
            format!("ranking entry {index} outside 0..{}", ranking.0.len()),
        );
    };
    if !out_rho.is_null() {
        out_rho.write(entry.rho);
    }
    if !out_predictor_noise.is_null() {
        out_predictor_noise.write(entry.predictor_noise.unwrap_or(f64::NAN));
    }
    ExcorrStatus::Ok
}

/// Length in bytes (excluding the NUL) of the `+`-joined subset name.
///
/// # Safety
/// `ranking` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn excorr_ranking_subset_len(
    ranking: *const ExcorrRanking,
    index: usize,
) -> usize {
    ranking
        .as_ref()
        .and_then(|r| r.0.get(index))
        .map_or(0, |entry| entry.columns.join("+").len())
}

/// Copies the `+`-joined subset name into `buf` (NUL-terminated).
///
/// # Safety
/// `ranking` must be a live handle; `buf` must point to `cap` writable
/// bytes.
#[no_mangle]
pub unsafe extern "C" fn excorr_ranking_subset(
    ranking: *const ExcorrRanking,
    index: usize,
    buf: *mut c_char,
    cap: usize,
) -> ExcorrStatus {
    let ranking = match deref(ranking, "ranking") {
        Ok(r) => r,
        Err(status) => return status,
    };
    let Some(entry) = ranking.0.get(index) else {
        return fail(
            ExcorrStatus::OutOfRange,
            format!("ranking entry {index} outside 0..{}", ranking.0.len()),
        );
    };
    copy_string(&entry.columns.join("+"), buf, cap, "buf")
}

/// Releases a ranking handle.
///
/// # Safety
/// `ranking` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn excorr_ranking_free(ranking: *mut ExcorrRanking) {
    if !ranking.is_null() {
        drop(Box::from_raw(ranking));
    }
}
