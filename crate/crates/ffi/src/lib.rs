//! C ABI over the `r2sort` library.
//!
//! Objects are opaque heap handles created by `r2s_*_new`-style functions and
//! released with the matching `r2s_*_free`. Every fallible function returns an
//! [`R2sStatus`]; on failure [`r2s_last_error_message`] describes the most
//! recent error on the calling thread. Output pointers are written only on
//! success. Panics are caught at the boundary and reported as
//! [`R2sStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use r2sort::anm::{expected_log_abs_weight, sample_data, sample_instance};
use r2sort::discovery::{r2_sort_n_regress, random_regress, threshold_to_dag, var_sort_n_regress};
use r2sort::evaluation::{shd, sid};
use r2sort::graphs::{sample_er_dag, sample_sf_dag};
use r2sort::seeding::rng_from_seed;
use r2sort::sortability::{r2_criterion, sortability_with_index, var_criterion};
use r2sort::{
    Dag, Dataset, Error, NoiseFamily, NoiseSpec, PathLengthIndex, SigmaDist, WeightDist, WeightEstimate, Weighting,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R2sStatus {
    Ok = 0,
    InvalidArgument = 1,
    DegenerateColumn = 2,
    UndefinedSortability = 3,
    PathCountOverflow = 4,
    DimensionMismatch = 5,
    ParseError = 6,
    IoError = 7,
    JsonError = 8,
    NullPointer = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// How cause-effect pairs are counted in the sortability.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R2sWeighting {
    UniqueLength = 0,
    PathExistence = 1,
    PathCount = 2,
}

fn weighting_from(code: u32) -> Result<Weighting, Failure> {
    match code {
        c if c == R2sWeighting::UniqueLength as u32 => Ok(Weighting::UniqueLength),
        c if c == R2sWeighting::PathExistence as u32 => Ok(Weighting::PathExistence),
        c if c == R2sWeighting::PathCount as u32 => Ok(Weighting::PathCount),
        other => Err(Failure(R2sStatus::InvalidArgument, format!("unknown weighting {other}"))),
    }
}

/// Directed acyclic graph.
pub struct R2sDag(Dag);

/// Numeric data matrix, one column per variable.
pub struct R2sDataset(Dataset);

/// Weighted DAG estimate with its candidate causal order.
pub struct R2sEstimate(WeightEstimate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(R2sStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) => R2sStatus::InvalidArgument,
            Error::DegenerateColumn { .. } => R2sStatus::DegenerateColumn,
            Error::UndefinedSortability => R2sStatus::UndefinedSortability,
            Error::PathCountOverflow { .. } => R2sStatus::PathCountOverflow,
            Error::DimensionMismatch { .. } => R2sStatus::DimensionMismatch,
            Error::Parse { .. } => R2sStatus::ParseError,
            Error::Io(_) => R2sStatus::IoError,
            Error::Json(_) => R2sStatus::JsonError,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> FfiResult) -> R2sStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => R2sStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            R2sStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(R2sStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn fill<T: Copy>(dst: *mut T, capacity: usize, src: &[T]) -> FfiResult {
    if src.len() > capacity {
        return Err(Failure(
            R2sStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", src.len()),
        ));
    }
    if !src.is_empty() {
        if dst.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn r2s_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// DAG on `d` nodes from `n_edges` `(source, target)` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * n_edges` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_new(
    d: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut R2sDag,
) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flat = slice(edges, 2 * n_edges, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        *out = boxed(R2sDag(Dag::from_edges(d, &pairs)?));
        Ok(())
    })
}

/// Erdős–Rényi DAG with exactly `m` edges.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_sample_er(d: usize, m: usize, seed: u64, out: *mut *mut R2sDag) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(R2sDag(sample_er_dag(d, m, &mut rng_from_seed(seed))?));
        Ok(())
    })
}

/// Scale-free DAG where each node attaches to up to `attach` earlier nodes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_sample_sf(d: usize, attach: usize, seed: u64, out: *mut *mut R2sDag) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(R2sDag(sample_sf_dag(d, attach, &mut rng_from_seed(seed))?));
        Ok(())
    })
}

/// # Safety
/// `dag` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_free(dag: *mut R2sDag) {
    if !dag.is_null() {
        drop(Box::from_raw(dag));
    }
}

/// # Safety
/// `dag` must be a live handle; `nodes` and `edges` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_counts(dag: *const R2sDag, nodes: *mut usize, edges: *mut usize) -> R2sStatus {
    guard(|| {
        let g = &handle(dag, "dag")?.0;
        let (nodes, edges) = (out_ptr(nodes, "nodes")?, out_ptr(edges, "edges")?);
        *nodes = g.d();
        *edges = g.edge_count();
        Ok(())
    })
}

/// Writes the edges as flat `(source, target)` pairs in lexicographic order.
/// `capacity` counts `usize` slots, so at least `2 * edge_count` are needed.
///
/// # Safety
/// `dag` must be a live handle; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn r2s_dag_edges(dag: *const R2sDag, buf: *mut usize, capacity: usize) -> R2sStatus {
    guard(|| {
        let flat: Vec<usize> = handle(dag, "dag")?.0.edges().into_iter().flat_map(|(s, t)| [s, t]).collect();
        fill(buf, capacity, &flat)
    })
}

/// Dataset from `n * d` row-major values.
///
/// # Safety
/// `values` must point to `n * d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_new(
    n: usize,
    d: usize,
    values: *const f64,
    out: *mut *mut R2sDataset,
) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let len = n.checked_mul(d).ok_or_else(|| Failure(R2sStatus::InvalidArgument, "n * d overflows".into()))?;
        *out = boxed(R2sDataset(Dataset::from_rows(n, d, slice(values, len, "values")?)?));
        Ok(())
    })
}

/// Reads a CSV file with a header row.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_read_csv(path: *const c_char, out: *mut *mut R2sDataset) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(R2sStatus::InvalidArgument, "path is not valid UTF-8".into()))?;
        *out = boxed(R2sDataset(Dataset::read_csv_path(Path::new(path))?));
        Ok(())
    })
}

/// `n` Gaussian observations from a linear ANM on `dag` with weights drawn
/// from `Unif(±(w_lo, w_hi))` and noise scales from `Unif(sigma_lo, sigma_hi)`.
///
/// # Safety
/// `dag` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_simulate(
    dag: *const R2sDag,
    w_lo: f64,
    w_hi: f64,
    sigma_lo: f64,
    sigma_hi: f64,
    n: usize,
    seed: u64,
    out: *mut *mut R2sDataset,
) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let g = &handle(dag, "dag")?.0;
        let noise =
            NoiseSpec { family: NoiseFamily::Gaussian, sigma: SigmaDist::Uniform { lo: sigma_lo, hi: sigma_hi } };
        let mut rng = rng_from_seed(seed);
        let inst = sample_instance(g, &WeightDist::new(w_lo, w_hi)?, &noise, &mut rng)?;
        *out = boxed(R2sDataset(sample_data(&inst, n, &mut rng)?));
        Ok(())
    })
}

/// New dataset with every column at mean 0 and variance 1.
///
/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_standardize(data: *const R2sDataset, out: *mut *mut R2sDataset) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(R2sDataset(handle(data, "data")?.0.standardize()?));
        Ok(())
    })
}

/// # Safety
/// `data` must be a live handle; `n` and `d` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_shape(data: *const R2sDataset, n: *mut usize, d: *mut usize) -> R2sStatus {
    guard(|| {
        let ds = &handle(data, "data")?.0;
        let (n, d) = (out_ptr(n, "n")?, out_ptr(d, "d")?);
        *n = ds.n();
        *d = ds.d();
        Ok(())
    })
}

/// # Safety
/// `data` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn r2s_dataset_free(data: *mut R2sDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// R² of every column regressed on all others, written to `out[0..d]`.
///
/// # Safety
/// `data` must be a live handle; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn r2s_r2_criterion(data: *const R2sDataset, out: *mut f64, capacity: usize) -> R2sStatus {
    guard(|| fill(out, capacity, &r2_criterion(&handle(data, "data")?.0)?))
}

/// Empirical variance of every column, written to `out[0..d]`.
///
/// # Safety
/// `data` must be a live handle; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn r2s_var_criterion(data: *const R2sDataset, out: *mut f64, capacity: usize) -> R2sStatus {
    guard(|| fill(out, capacity, &var_criterion(&handle(data, "data")?.0)))
}

/// Sortability of the per-node scores `tau` with respect to `dag`.
/// `weighting` is an [`R2sWeighting`] value; score differences within
/// `tie_tolerance` count as ties.
///
/// # Safety
/// `tau` must point to `len` doubles; `dag` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_sortability(
    tau: *const f64,
    len: usize,
    dag: *const R2sDag,
    weighting: u32,
    tie_tolerance: f64,
    out: *mut f64,
) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let index = PathLengthIndex::new(&handle(dag, "dag")?.0);
        *out =
            sortability_with_index(slice(tau, len, "tau")?, &index, weighting_from(weighting)?, tie_tolerance)?.value;
        Ok(())
    })
}

fn estimate(out: *mut *mut R2sEstimate, f: impl FnOnce() -> r2sort::Result<WeightEstimate>) -> R2sStatus {
    guard(|| {
        // SAFETY: forwarded from the caller's contract
        let out = unsafe { out_ptr(out, "out")? };
        *out = boxed(R2sEstimate(f()?));
        Ok(())
    })
}

/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_r2_sort_n_regress(data: *const R2sDataset, out: *mut *mut R2sEstimate) -> R2sStatus {
    match handle(data, "data") {
        Ok(ds) => estimate(out, || r2_sort_n_regress(&ds.0)),
        Err(f) => guard(|| Err(f)),
    }
}

/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_var_sort_n_regress(data: *const R2sDataset, out: *mut *mut R2sEstimate) -> R2sStatus {
    match handle(data, "data") {
        Ok(ds) => estimate(out, || var_sort_n_regress(&ds.0)),
        Err(f) => guard(|| Err(f)),
    }
}

/// # Safety
/// `data` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_random_regress(
    data: *const R2sDataset,
    seed: u64,
    out: *mut *mut R2sEstimate,
) -> R2sStatus {
    match handle(data, "data") {
        Ok(ds) => estimate(out, || random_regress(&ds.0, &mut rng_from_seed(seed))),
        Err(f) => guard(|| Err(f)),
    }
}

/// Row-major `d × d` weights; entry `(s, t)` estimates the effect of `s` on `t`.
///
/// # Safety
/// `est` must be a live handle; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn r2s_estimate_weights(est: *const R2sEstimate, out: *mut f64, capacity: usize) -> R2sStatus {
    guard(|| {
        let w = &handle(est, "est")?.0.weights;
        let d = w.nrows();
        let flat: Vec<f64> = (0..d * d).map(|k| w[(k / d, k % d)]).collect();
        fill(out, capacity, &flat)
    })
}

/// Candidate causal order, earliest node first.
///
/// # Safety
/// `est` must be a live handle; `out` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn r2s_estimate_order(est: *const R2sEstimate, out: *mut usize, capacity: usize) -> R2sStatus {
    guard(|| fill(out, capacity, &handle(est, "est")?.0.order))
}

/// DAG of the edges with `|w| > eps`.
///
/// # Safety
/// `est` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_estimate_to_dag(est: *const R2sEstimate, eps: f64, out: *mut *mut R2sDag) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(R2sDag(threshold_to_dag(&handle(est, "est")?.0, eps)));
        Ok(())
    })
}

/// # Safety
/// `est` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn r2s_estimate_free(est: *mut R2sEstimate) {
    if !est.is_null() {
        drop(Box::from_raw(est));
    }
}

/// Structural intervention distance of `estimate` from `truth`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_sid(truth: *const R2sDag, estimate: *const R2sDag, out: *mut usize) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = sid(&handle(truth, "truth")?.0, &handle(estimate, "estimate")?.0)?;
        Ok(())
    })
}

/// Structural Hamming distance; a reversed edge counts once.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_shd(truth: *const R2sDag, estimate: *const R2sDag, out: *mut usize) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = shd(&handle(truth, "truth")?.0, &handle(estimate, "estimate")?.0)?;
        Ok(())
    })
}

/// `E[ln|V|]` for `V ~ Unif(±(lo, hi))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn r2s_expected_log_abs_weight(lo: f64, hi: f64, out: *mut f64) -> R2sStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = expected_log_abs_weight(&WeightDist::new(lo, hi)?);
        Ok(())
    })
}
