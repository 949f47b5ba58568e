//! C ABI over `pipfract`.
//!
//! Every fallible call returns a [`PfStatus`]; on failure the message is
//! available from [`pf_last_error`] on the same thread. Output buffers are
//! caller-allocated and must hold exactly the requested number of values.
//! Enumerations cross the boundary as `uint32_t` and are range-checked.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use pipfract::daleth::{daleth_range, quantize256, sign_filter, DalethSpec, Series};
use pipfract::pip::{pip_range, PipSpec};
use pipfract::render::{gridplot_rows, render_gridplot, write_ppm, Colormap, Geometry};
use pipfract::sieve::{EngineConfig, PrimeEngine};
use pipfract::Error;

/// Opaque prime engine handle.
pub struct PfEngine {
    inner: PrimeEngine,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    BufferSize = 3,
    BeyondUniverse = 4,
    Overflow = 5,
    Degenerate = 6,
    Io = 7,
    Cache = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfFilter {
    None = 0,
    Sign = 1,
    Quant256 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStyle {
    Sign3 = 0,
    Jet256 = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BeyondUniverse { .. } => PfStatus::BeyondUniverse,
            Error::Overflow(_) | Error::BoundTooLarge(_) => PfStatus::Overflow,
            Error::Degenerate(_) => PfStatus::Degenerate,
            Error::Io(_) => PfStatus::Io,
            Error::Cache(_) => PfStatus::Cache,
            _ => PfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PfStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(PfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn engine_ref<'a>(engine: *const PfEngine) -> Result<&'a PrimeEngine, Failure> {
    engine.as_ref().map(|e| &e.inner).ok_or_else(null)
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, Failure> {
    if path.is_null() {
        return Err(null());
    }
    let s = CStr::from_ptr(path)
        .to_str()
        .map_err(|_| Failure(PfStatus::InvalidArgument, "path is not UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn out_slice<'a, T>(out: *mut T, len: usize, want: usize) -> Result<&'a mut [T], Failure> {
    if out.is_null() {
        return Err(null());
    }
    if len != want {
        return Err(Failure(
            PfStatus::BufferSize,
            format!("buffer holds {len} values, {want} required"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(out, len))
}

fn count(i_lo: u64, i_hi: u64) -> Result<usize, Failure> {
    if i_lo > i_hi {
        return Err(Failure(PfStatus::InvalidArgument, format!("index range {i_lo}:{i_hi} is empty")));
    }
    usize::try_from(i_hi - i_lo + 1).map_err(|_| Failure(PfStatus::Overflow, "range too long".into()))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create an engine. `universe_bound` 0 selects the default; `threads` 0 means 1.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pf_engine_new(universe_bound: u64, threads: u32, out: *mut *mut PfEngine) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let mut config = EngineConfig::default();
        if universe_bound != 0 {
            config.universe_bound = universe_bound;
        }
        config.threads = threads.max(1) as usize;
        let inner = PrimeEngine::new(config)?;
        *out = Box::into_raw(Box::new(PfEngine { inner }));
        Ok(())
    })
}

/// Release an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from [`pf_engine_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_engine_free(engine: *mut PfEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Attach a checkpoint cache file written by `pipfract cache`.
///
/// # Safety
/// `engine` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pf_engine_load_cache(engine: *mut PfEngine, path: *const c_char) -> PfStatus {
    guard(|| {
        let engine = engine.as_mut().ok_or_else(null)?;
        let path = path_arg(path)?;
        engine.inner.load_cache(&path)?;
        Ok(())
    })
}

/// The `n`-th prime (1-based).
///
/// # Safety
/// `engine` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_nth_prime(engine: *const PfEngine, n: u64, out: *mut u64) -> PfStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = e.nth_prime(n)?;
        Ok(())
    })
}

/// Number of primes `<= x`.
///
/// # Safety
/// `engine` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_prime_count(engine: *const PfEngine, x: u64, out: *mut u64) -> PfStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = e.prime_count(x)?;
        Ok(())
    })
}

/// `q_s^k(i)` for `i_lo..=i_hi` into `out`, which must hold `i_hi - i_lo + 1` values.
///
/// # Safety
/// `engine` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_pip_range(
    engine: *const PfEngine,
    k: u32,
    s: u64,
    i_lo: u64,
    i_hi: u64,
    out: *mut u64,
    len: usize,
) -> PfStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let out = out_slice(out, len, count(i_lo, i_hi)?)?;
        let series = pip_range(e, PipSpec::new(k, s), i_lo, i_hi)?;
        out.copy_from_slice(&series.values);
        Ok(())
    })
}

/// Finite difference series for `i_lo..=i_hi`; `filter` is a [`PfFilter`] value.
///
/// # Safety
/// `engine` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_daleth_range(
    engine: *const PfEngine,
    h: u64,
    n: u32,
    s: u64,
    k: u32,
    i_lo: u64,
    i_hi: u64,
    filter: u32,
    out: *mut i64,
    len: usize,
) -> PfStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let out = out_slice(out, len, count(i_lo, i_hi)?)?;
        let raw = daleth_range(e, DalethSpec::new(h, n, s, k), i_lo, i_hi)?;
        let series = match filter {
            f if f == PfFilter::None as u32 => raw,
            f if f == PfFilter::Sign as u32 => sign_filter(&raw),
            f if f == PfFilter::Quant256 as u32 => quantize256(&raw)?,
            other => return Err(Failure(PfStatus::InvalidArgument, format!("unknown filter {other}"))),
        };
        out.copy_from_slice(&series.values);
        Ok(())
    })
}

/// Map `values` onto `0..=255` by their own min and max.
///
/// # Safety
/// `values` must be valid for `len` reads and `out` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_quantize256(values: *const i64, len: usize, out: *mut i64) -> PfStatus {
    guard(|| {
        if values.is_null() {
            return Err(null());
        }
        let out = out_slice(out, len, len)?;
        let input = std::slice::from_raw_parts(values, len).to_vec();
        let q = quantize256(&Series::from_values(input))?;
        out.copy_from_slice(&q.values);
        Ok(())
    })
}

/// Render orders `k_lo..=k_hi` over `i_lo..=i_hi` to a PPM file; `style` is
/// a [`PfStyle`] value. When
/// `meta_json` is non-null it receives the row metadata as JSON, to be
/// released with [`pf_string_free`].
///
/// # Safety
/// `engine` must be a live handle, `path` a nul-terminated string, and
/// `meta_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pf_render_ppm(
    engine: *const PfEngine,
    h: u64,
    n: u32,
    s: u64,
    k_lo: u32,
    k_hi: u32,
    i_lo: u64,
    i_hi: u64,
    style: u32,
    band_width: u32,
    row_height: u32,
    gap: u32,
    path: *const c_char,
    meta_json: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let path = path_arg(path)?;
        let style = match style {
            s if s == PfStyle::Sign3 as u32 => Colormap::Sign3,
            s if s == PfStyle::Jet256 as u32 => Colormap::Jet256,
            other => return Err(Failure(PfStatus::InvalidArgument, format!("unknown style {other}"))),
        };
        let rows = gridplot_rows(e, DalethSpec::new(h, n, s, 0), k_lo, k_hi, i_lo, i_hi, style)?;
        let geometry = Geometry {
            band_width,
            row_height,
            gap,
        };
        let img = render_gridplot(&rows, style, geometry)?;
        write_ppm(&img, &path)?;
        if !meta_json.is_null() {
            let text = serde_json::json!({
                "width": img.width,
                "height": img.height,
                "rows": img.meta,
            })
            .to_string();
            *meta_json = CString::new(text).expect("JSON has no nul").into_raw();
        }
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
