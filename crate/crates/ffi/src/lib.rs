//! C ABI over the `hullmeans` library.
//!
//! Every fallible function returns an [`HmStatus`]. On failure the message
//! is kept per thread and can be read with [`hm_last_error_message`] until
//! the next failing call on that thread. Handles are opaque and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use hullmeans::data::{load_delimited, Builtin, DatasetSpec, LabelColumn};
use hullmeans::init::{proposed_seeds, random_seeds, InitParams, MPolicy};
use hullmeans::kmeans::{run_lloyd, ClusterModel, LloydParams};
use hullmeans::metrics::{contingency, match_and_error, rand_index};
use hullmeans::{CentroidSet, DataMatrix, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateInput = 3,
    DimensionError = 4,
    InvalidK = 5,
    InvalidM = 6,
    ExhaustedCandidates = 7,
    ShapeError = 8,
    ZeroReferenceCoordinate = 9,
    NonFinite = 10,
    IoError = 11,
    ParseError = 12,
    MissingData = 13,
    Panic = 14,
}

impl From<&Error> for HmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DegenerateInput(_) => HmStatus::DegenerateInput,
            Error::DimensionError { .. } => HmStatus::DimensionError,
            Error::InvalidK { .. } => HmStatus::InvalidK,
            Error::InvalidM { .. } => HmStatus::InvalidM,
            Error::ExhaustedCandidates { .. } => HmStatus::ExhaustedCandidates,
            Error::ShapeError(_) => HmStatus::ShapeError,
            Error::ZeroReferenceCoordinate { .. } => HmStatus::ZeroReferenceCoordinate,
            Error::NonFinite { .. } => HmStatus::NonFinite,
            Error::IoError { .. } => HmStatus::IoError,
            Error::ParseError { .. } => HmStatus::ParseError,
            Error::MissingData(_) => HmStatus::MissingData,
            Error::Usage(_) => HmStatus::InvalidArgument,
        }
    }
}

/// Label column of a delimited file.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmLabelColumn {
    None = 0,
    First = 1,
    Last = 2,
}

/// Samples with optional integer labels.
pub struct HmDataset(DataMatrix);

/// K centers of equal dimension.
pub struct HmCentroids(CentroidSet);

/// A converged (or iteration-capped) Lloyd run.
pub struct HmModel(ClusterModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(HmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(HmStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HmStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(HmStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HmStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
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

unsafe fn out_slice<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn hm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn hm_status_name(status: HmStatus) -> *const c_char {
    let s: &'static CStr = match status {
        HmStatus::Ok => c"Ok",
        HmStatus::NullPointer => c"NullPointer",
        HmStatus::InvalidArgument => c"InvalidArgument",
        HmStatus::DegenerateInput => c"DegenerateInput",
        HmStatus::DimensionError => c"DimensionError",
        HmStatus::InvalidK => c"InvalidK",
        HmStatus::InvalidM => c"InvalidM",
        HmStatus::ExhaustedCandidates => c"ExhaustedCandidates",
        HmStatus::ShapeError => c"ShapeError",
        HmStatus::ZeroReferenceCoordinate => c"ZeroReferenceCoordinate",
        HmStatus::NonFinite => c"NonFinite",
        HmStatus::IoError => c"IoError",
        HmStatus::ParseError => c"ParseError",
        HmStatus::MissingData => c"MissingData",
        HmStatus::Panic => c"Panic",
    };
    s.as_ptr()
}

/// Copies `n_samples * dim` row-major values. `labels` may be null.
///
/// # Safety
/// `values` must point to `n_samples * dim` doubles and `labels`, when not
/// null, to `n_samples` integers. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_new(
    values: *const f64,
    n_samples: usize,
    dim: usize,
    labels: *const usize,
    out: *mut *mut HmDataset,
) -> HmStatus {
    guard(|| {
        let len = n_samples
            .checked_mul(dim)
            .ok_or_else(|| invalid("n_samples * dim overflows"))?;
        let values = slice(values, len, "values")?.to_vec();
        let labels = if labels.is_null() {
            None
        } else {
            Some(slice(labels, n_samples, "labels")?.to_vec())
        };
        let data = DataMatrix::from_flat("ffi", dim, values, labels)?;
        put(out, HmDataset(data))
    })
}

/// Loads a built-in dataset by name from the configured data directory.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_load_builtin(name: *const c_char, out: *mut *mut HmDataset) -> HmStatus {
    guard(|| {
        let name = text(name, "name")?;
        let builtin = Builtin::from_name(name).ok_or_else(|| invalid(format!("unknown dataset `{name}`")))?;
        put(out, HmDataset(builtin.load()?))
    })
}

/// Loads a comma-separated file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_load_csv(
    path: *const c_char,
    label: HmLabelColumn,
    out: *mut *mut HmDataset,
) -> HmStatus {
    guard(|| {
        let path = PathBuf::from(text(path, "path")?);
        let label = match label {
            HmLabelColumn::None => LabelColumn::None,
            HmLabelColumn::First => LabelColumn::First,
            HmLabelColumn::Last => LabelColumn::Last,
        };
        put(out, HmDataset(load_delimited(&DatasetSpec::csv(path, label))?))
    })
}

/// Zero for a null handle.
///
/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_n_samples(data: *const HmDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.n_samples())
}

/// Zero for a null handle.
///
/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_dim(data: *const HmDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.dim())
}

/// Copies the labels into `out` (length `n_samples`).
///
/// # Safety
/// `out` must have room for `len` integers.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_labels(data: *const HmDataset, out: *mut usize, len: usize) -> HmStatus {
    guard(|| {
        let data = &borrow(data, "dataset")?.0;
        let labels = data.labels().ok_or_else(|| invalid("dataset has no labels"))?;
        if len != labels.len() {
            return Err(invalid(format!("buffer holds {len}, need {}", labels.len())));
        }
        out_slice(out, len, "out")?.copy_from_slice(labels);
        Ok(())
    })
}

/// # Safety
/// `data` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_dataset_free(data: *mut HmDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

fn m_policy(m: i64) -> Result<MPolicy, Failure> {
    if m < 0 {
        Ok(MPolicy::Auto)
    } else {
        usize::try_from(m)
            .map(MPolicy::Explicit)
            .map_err(|_| invalid("m out of range"))
    }
}

/// Hull-seeded initialization. A negative `m` selects the default discard
/// count. When `seed_indices` is not null it receives the `k` chosen rows.
///
/// # Safety
/// `seed_indices`, when not null, must have room for `k` integers; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_proposed_init(
    data: *const HmDataset,
    k: usize,
    m: i64,
    seed_indices: *mut usize,
    out: *mut *mut HmCentroids,
) -> HmStatus {
    guard(|| {
        let data = &borrow(data, "dataset")?.0;
        let seeding = proposed_seeds(data, &InitParams::new(k).with_m(m_policy(m)?))?;
        if !seed_indices.is_null() {
            out_slice(seed_indices, k, "seed_indices")?.copy_from_slice(&seeding.indices);
        }
        put(out, HmCentroids(CentroidSet::from_samples(data, &seeding.indices)?))
    })
}

/// `k` distinct samples drawn uniformly with the given seed.
///
/// # Safety
/// Same contract as [`hm_proposed_init`].
#[no_mangle]
pub unsafe extern "C" fn hm_random_init(
    data: *const HmDataset,
    k: usize,
    seed: u64,
    seed_indices: *mut usize,
    out: *mut *mut HmCentroids,
) -> HmStatus {
    guard(|| {
        let data = &borrow(data, "dataset")?.0;
        let picks = random_seeds(data.n_samples(), k, seed)?;
        if !seed_indices.is_null() {
            out_slice(seed_indices, k, "seed_indices")?.copy_from_slice(&picks);
        }
        put(out, HmCentroids(CentroidSet::from_samples(data, &picks)?))
    })
}

/// Copies `k * dim` row-major centroids from caller memory.
///
/// # Safety
/// `values` must point to `k * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_centroids_new(
    values: *const f64,
    k: usize,
    dim: usize,
    out: *mut *mut HmCentroids,
) -> HmStatus {
    guard(|| {
        let len = k.checked_mul(dim).ok_or_else(|| invalid("k * dim overflows"))?;
        let values = slice(values, len, "values")?.to_vec();
        put(out, HmCentroids(CentroidSet::from_flat(dim, values)?))
    })
}

/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_centroids_k(c: *const HmCentroids) -> usize {
    c.as_ref().map_or(0, |c| c.0.k())
}

/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_centroids_dim(c: *const HmCentroids) -> usize {
    c.as_ref().map_or(0, |c| c.0.dim())
}

/// Copies `k * dim` row-major values into `out`.
///
/// # Safety
/// `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hm_centroids_values(c: *const HmCentroids, out: *mut f64, len: usize) -> HmStatus {
    guard(|| {
        let values = borrow(c, "centroids")?.0.values();
        if len != values.len() {
            return Err(invalid(format!("buffer holds {len}, need {}", values.len())));
        }
        out_slice(out, len, "out")?.copy_from_slice(values);
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_centroids_free(c: *mut HmCentroids) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Lloyd iterations from `init`. `max_iter` of zero uses the default cap.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_lloyd(
    data: *const HmDataset,
    init: *const HmCentroids,
    max_iter: usize,
    tol: f64,
    out: *mut *mut HmModel,
) -> HmStatus {
    guard(|| {
        let data = &borrow(data, "dataset")?.0;
        let init = &borrow(init, "centroids")?.0;
        let mut params = LloydParams::default();
        if max_iter > 0 {
            params.max_iter = max_iter;
        }
        params.tol = tol;
        put(out, HmModel(run_lloyd(data, init, params)?))
    })
}

/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_model_iterations(model: *const HmModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.iterations)
}

/// NaN for a null handle.
///
/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_model_cost(model: *const HmModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.0.cost)
}

/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_model_converged(model: *const HmModel) -> bool {
    model.as_ref().is_some_and(|m| m.0.converged)
}

/// # Safety
/// The handle must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_model_distance_evals(model: *const HmModel) -> u64 {
    model.as_ref().map_or(0, |m| m.0.distance_evals)
}

/// Copies the cluster index of every sample into `out`.
///
/// # Safety
/// `out` must have room for `len` integers.
#[no_mangle]
pub unsafe extern "C" fn hm_model_assignment(model: *const HmModel, out: *mut usize, len: usize) -> HmStatus {
    guard(|| {
        let a = &borrow(model, "model")?.0.assignment;
        if len != a.len() {
            return Err(invalid(format!("buffer holds {len}, need {}", a.len())));
        }
        out_slice(out, len, "out")?.copy_from_slice(a);
        Ok(())
    })
}

/// Final centroids as a new handle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_model_centroids(model: *const HmModel, out: *mut *mut HmCentroids) -> HmStatus {
    guard(|| {
        let m = &borrow(model, "model")?.0;
        put(out, HmCentroids(m.centroids.clone()))
    })
}

/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_model_free(model: *mut HmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Pair-agreement score of two labelings of `n` samples.
///
/// # Safety
/// `pred` and `truth` must point to `n` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_rand_index(pred: *const usize, truth: *const usize, n: usize, out: *mut f64) -> HmStatus {
    guard(|| {
        let score = rand_index(slice(pred, n, "pred")?, slice(truth, n, "truth")?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = score;
        Ok(())
    })
}

/// Percentage of samples outside their best-matched class.
///
/// # Safety
/// `pred` and `truth` must point to `n` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_error_percent(
    pred: *const usize,
    truth: *const usize,
    n: usize,
    out: *mut f64,
) -> HmStatus {
    guard(|| {
        let table = contingency(slice(pred, n, "pred")?, slice(truth, n, "truth")?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = match_and_error(&table).error_percent;
        Ok(())
    })
}
