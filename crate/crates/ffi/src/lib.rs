//! C ABI over `falsify-core`.
//!
//! Objects cross the boundary as opaque handles (`FalsifyFormula`,
//! `FalsifySignal`, `FalsifyRun`) created and released by this library.
//! Every fallible function returns a [`FalsifyStatus`]; on failure a
//! description is available from [`falsify_last_error`] on the same thread.
//! Strings returned to the caller must be released with
//! [`falsify_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use falsify_core::search::{run_seeded, Algorithm, BudgetConfig, RunRecord, SearchConfig, SearchError};
use falsify_core::stl::{self, Formula, Signal};
use falsify_core::suts::{self, FnSut, SutError, SutSpec};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FalsifyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    EvaluationError = 4,
    UnknownSut = 5,
    SearchError = 6,
    CallbackError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FalsifyAlgorithm {
    Single = 0,
    Multi = 1,
    Mab = 2,
}

impl From<FalsifyAlgorithm> for Algorithm {
    fn from(a: FalsifyAlgorithm) -> Self {
        match a {
            FalsifyAlgorithm::Single => Algorithm::Single,
            FalsifyAlgorithm::Multi => Algorithm::Multi,
            FalsifyAlgorithm::Mab => Algorithm::Mab,
        }
    }
}

/// Execution budget of a search; network hyperparameters keep their defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalsifySearchConfig {
    pub budget: usize,
    pub lhs_fraction: f64,
    pub delta: f64,
    pub warmup_fraction: f64,
}

impl From<FalsifySearchConfig> for SearchConfig {
    fn from(c: FalsifySearchConfig) -> Self {
        SearchConfig {
            budget: BudgetConfig {
                budget: c.budget,
                lhs_fraction: c.lhs_fraction,
                delta: c.delta,
                warmup_fraction: c.warmup_fraction,
            },
            ..Default::default()
        }
    }
}

/// Parsed STL formula.
pub struct FalsifyFormula(Formula);

/// Uniformly sampled multi-channel signal.
pub struct FalsifySignal(Signal);

/// Record of a finished falsification run.
pub struct FalsifyRun(RunRecord);

/// Executes one test on a caller-provided system. `inputs` holds `dim` raw
/// (denormalized) input values; the callback writes `n` robustness values to
/// `robustness` and returns 0 on success.
pub type FalsifyExecuteFn = Option<
    unsafe extern "C" fn(
        user_data: *mut c_void,
        inputs: *const f64,
        dim: usize,
        robustness: *mut f64,
        n: usize,
    ) -> i32,
>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FalsifyStatus, msg: impl Into<String>) -> FalsifyStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> FalsifyStatus) -> FalsifyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(FalsifyStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, FalsifyStatus> {
    if p.is_null() {
        return Err(fail(FalsifyStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FalsifyStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String, out: *mut *mut c_char) -> FalsifyStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            FalsifyStatus::Ok
        }
        Err(_) => fail(FalsifyStatus::InvalidArgument, "string contains NUL"),
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn falsify_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn falsify_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` into a formula handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn falsify_formula_parse(
    text: *const c_char,
    out: *mut *mut FalsifyFormula,
) -> FalsifyStatus {
    guard(|| {
        if out.is_null() {
            return fail(FalsifyStatus::NullPointer, "out is null");
        }
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match stl::parse_stl(text) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(FalsifyFormula(f)));
                FalsifyStatus::Ok
            }
            Err(e) => fail(FalsifyStatus::ParseError, e.to_string()),
        }
    })
}

/// Fully parenthesized text of a formula; release with `falsify_string_free`.
///
/// # Safety
/// `formula` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn falsify_formula_to_string(
    formula: *const FalsifyFormula,
    out: *mut *mut c_char,
) -> FalsifyStatus {
    guard(|| {
        if formula.is_null() || out.is_null() {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        into_c_string((&*formula).0.to_string(), out)
    })
}

/// # Safety
/// `formula` must come from `falsify_formula_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn falsify_formula_free(formula: *mut FalsifyFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Builds a signal from `n_channels` names and a channel-major sample array
/// of `n_channels * len` values (`samples[c * len + i]`).
///
/// # Safety
/// `names` must point to `n_channels` NUL-terminated strings, `samples` to
/// `n_channels * len` doubles, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn falsify_signal_new(
    start: f64,
    step: f64,
    names: *const *const c_char,
    n_channels: usize,
    samples: *const f64,
    len: usize,
    out: *mut *mut FalsifySignal,
) -> FalsifyStatus {
    guard(|| {
        if out.is_null() || (n_channels > 0 && (names.is_null() || samples.is_null())) {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        let Some(total) = n_channels.checked_mul(len) else {
            return fail(FalsifyStatus::InvalidArgument, "signal too large");
        };
        let names = if n_channels == 0 { &[][..] } else { slice::from_raw_parts(names, n_channels) };
        let values = if total == 0 { &[][..] } else { slice::from_raw_parts(samples, total) };
        let mut channels = Vec::with_capacity(n_channels);
        for (c, &name) in names.iter().enumerate() {
            let name = match str_arg(name, "channel name") {
                Ok(n) => n.to_string(),
                Err(s) => return s,
            };
            channels.push((name, values[c * len..(c + 1) * len].to_vec()));
        }
        match Signal::new(start, step, channels) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(FalsifySignal(s)));
                FalsifyStatus::Ok
            }
            Err(e) => fail(FalsifyStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `signal` must come from `falsify_signal_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn falsify_signal_free(signal: *mut FalsifySignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// Robustness of `formula` on `signal` at grid time `t0`.
///
/// # Safety
/// Handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn falsify_robustness(
    formula: *const FalsifyFormula,
    signal: *const FalsifySignal,
    t0: f64,
    out: *mut f64,
) -> FalsifyStatus {
    guard(|| {
        if formula.is_null() || signal.is_null() || out.is_null() {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        match stl::robustness(&(*formula).0, &(*signal).0, t0) {
            Ok(v) => {
                *out = v;
                FalsifyStatus::Ok
            }
            Err(e) => fail(FalsifyStatus::EvaluationError, e.to_string()),
        }
    })
}

/// Transmission robustness of a signal with `RPM` and `SPEED` channels.
///
/// # Safety
/// `signal` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn falsify_at_robustness(
    signal: *const FalsifySignal,
    speed_bound: f64,
    speed_horizon: f64,
    out: *mut f64,
) -> FalsifyStatus {
    guard(|| {
        if signal.is_null() || out.is_null() {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        match stl::at_robustness(&(*signal).0, speed_bound, speed_horizon) {
            Ok(v) => {
                *out = v;
                FalsifyStatus::Ok
            }
            Err(e) => fail(FalsifyStatus::EvaluationError, e.to_string()),
        }
    })
}

/// Evaluates mo3d at `x[0..3]` into `out[0..3]`.
///
/// # Safety
/// `x` and `out` must each point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn falsify_mo3d(x: *const f64, out: *mut f64) -> FalsifyStatus {
    guard(|| {
        if x.is_null() || out.is_null() {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        let x = slice::from_raw_parts(x, 3);
        let h = suts::mo3d([x[0], x[1], x[2]]);
        slice::from_raw_parts_mut(out, 3).copy_from_slice(&h);
        FalsifyStatus::Ok
    })
}

/// Budget 80, LHS 25%, delta 0.05, warm-up 50%.
#[no_mangle]
pub extern "C" fn falsify_search_config_default() -> FalsifySearchConfig {
    let b = BudgetConfig::default();
    FalsifySearchConfig {
        budget: b.budget,
        lhs_fraction: b.lhs_fraction,
        delta: b.delta,
        warmup_fraction: b.warmup_fraction,
    }
}

fn finish_run(result: Result<RunRecord, SearchError>, out: *mut *mut FalsifyRun) -> FalsifyStatus {
    match result {
        Ok(r) => {
            unsafe { *out = Box::into_raw(Box::new(FalsifyRun(r))) };
            FalsifyStatus::Ok
        }
        Err(SearchError::Sut {
            source: SutError::Execution(msg),
            ..
        }) if msg.starts_with("callback") => fail(FalsifyStatus::CallbackError, msg),
        Err(e) => fail(FalsifyStatus::SearchError, e.to_string()),
    }
}

/// Runs a search against a built-in system (`"mo3d"` or `"at-surrogate"`).
///
/// # Safety
/// `sut` must be a NUL-terminated string; `config` may be NULL for defaults;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_builtin(
    sut: *const c_char,
    algorithm: FalsifyAlgorithm,
    config: *const FalsifySearchConfig,
    seed: u64,
    out: *mut *mut FalsifyRun,
) -> FalsifyStatus {
    guard(|| {
        if out.is_null() {
            return fail(FalsifyStatus::NullPointer, "out is null");
        }
        let name = match str_arg(sut, "sut") {
            Ok(n) => n,
            Err(s) => return s,
        };
        let system = match suts::by_name(name) {
            Ok(s) => s,
            Err(e) => return fail(FalsifyStatus::UnknownSut, e.to_string()),
        };
        let cfg: SearchConfig = if config.is_null() {
            SearchConfig::default()
        } else {
            (*config).into()
        };
        finish_run(run_seeded(algorithm.into(), system.as_ref(), &cfg, seed), out)
    })
}

struct Callback {
    f: unsafe extern "C" fn(*mut c_void, *const f64, usize, *mut f64, usize) -> i32,
    user_data: *mut c_void,
    n: usize,
}

// The search calls the callback only from the thread that invoked
// `falsify_run_callback`.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

impl Callback {
    fn call(&self, raw: &[f64]) -> Result<Vec<f64>, SutError> {
        let mut rho = vec![f64::NAN; self.n];
        let code = unsafe { (self.f)(self.user_data, raw.as_ptr(), raw.len(), rho.as_mut_ptr(), self.n) };
        if code != 0 {
            return Err(SutError::Execution(format!("callback returned {code}")));
        }
        Ok(rho)
    }
}

/// Runs a search against a caller-implemented system with raw input ranges
/// `[lo[i], hi[i]]` for `i < dim` and `n_requirements` robustness outputs.
///
/// # Safety
/// `lo` and `hi` must point to `dim` doubles; `execute` must be safe to call
/// with `user_data` for the duration of the call; `out` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn falsify_run_callback(
    lo: *const f64,
    hi: *const f64,
    dim: usize,
    n_requirements: usize,
    execute: FalsifyExecuteFn,
    user_data: *mut c_void,
    algorithm: FalsifyAlgorithm,
    config: *const FalsifySearchConfig,
    seed: u64,
    out: *mut *mut FalsifyRun,
) -> FalsifyStatus {
    guard(|| {
        let Some(f) = execute else {
            return fail(FalsifyStatus::NullPointer, "execute callback is null");
        };
        if out.is_null() || (dim > 0 && (lo.is_null() || hi.is_null())) {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        let (lo, hi) = if dim == 0 {
            (&[][..], &[][..])
        } else {
            (slice::from_raw_parts(lo, dim), slice::from_raw_parts(hi, dim))
        };
        let ranges = lo.iter().copied().zip(hi.iter().copied()).collect();
        let spec = match SutSpec::new("callback", ranges, n_requirements) {
            Ok(s) => s,
            Err(e) => return fail(FalsifyStatus::InvalidArgument, e.to_string()),
        };
        let cb = Callback {
            f,
            user_data,
            n: n_requirements,
        };
        let system = FnSut::new(spec, move |raw: &[f64]| cb.call(raw));
        let cfg: SearchConfig = if config.is_null() {
            SearchConfig::default()
        } else {
            (*config).into()
        };
        finish_run(run_seeded(algorithm.into(), &system, &cfg, seed), out)
    })
}

/// # Safety
/// `run` must come from a `falsify_run_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_free(run: *mut FalsifyRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Whether the run found a test with robustness `<= 0`. NULL gives false.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_falsified(run: *const FalsifyRun) -> bool {
    !run.is_null() && (&*run).0.falsified()
}

/// Number of executed tests. NULL gives 0.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_len(run: *const FalsifyRun) -> usize {
    if run.is_null() {
        0
    } else {
        (&*run).0.rows.len()
    }
}

/// Test dimension of the run. NULL gives 0.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_dim(run: *const FalsifyRun) -> usize {
    if run.is_null() {
        return 0;
    }
    (&*run).0.rows.first().map_or(0, |r| r.test.dim())
}

/// Number of requirements of the run. NULL gives 0.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_requirements(run: *const FalsifyRun) -> usize {
    if run.is_null() {
        0
    } else {
        (&*run).0.winners.len()
    }
}

/// Copies execution `index` (zero-based): the normalized test into
/// `test_out[0..dim]` and the raw robustness into `robustness_out[0..n]`.
/// Either output may be NULL.
///
/// # Safety
/// Non-NULL outputs must have room for `falsify_run_dim` and
/// `falsify_run_requirements` doubles respectively.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_row(
    run: *const FalsifyRun,
    index: usize,
    test_out: *mut f64,
    robustness_out: *mut f64,
) -> FalsifyStatus {
    guard(|| {
        if run.is_null() {
            return fail(FalsifyStatus::NullPointer, "run is null");
        }
        let Some(row) = (&*run).0.rows.get(index) else {
            return fail(FalsifyStatus::InvalidArgument, format!("no execution {index}"));
        };
        if !test_out.is_null() {
            slice::from_raw_parts_mut(test_out, row.test.dim()).copy_from_slice(row.test.coords());
        }
        if !robustness_out.is_null() {
            slice::from_raw_parts_mut(robustness_out, row.robustness.len())
                .copy_from_slice(&row.robustness);
        }
        FalsifyStatus::Ok
    })
}

/// JSON serialization of the full run record; release with
/// `falsify_string_free`.
///
/// # Safety
/// `run` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn falsify_run_to_json(
    run: *const FalsifyRun,
    out: *mut *mut c_char,
) -> FalsifyStatus {
    guard(|| {
        if run.is_null() || out.is_null() {
            return fail(FalsifyStatus::NullPointer, "null argument");
        }
        into_c_string((&*run).0.to_json(), out)
    })
}
