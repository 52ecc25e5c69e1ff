//! C ABI over `ris-ssk`.
//!
//! Configurations are opaque handles created with [`ris_config_new`] and
//! released with [`ris_config_free`]. Every fallible call returns a
//! [`RisStatus`] and writes its result through an out-pointer; the message
//! of the last failure on the calling thread is available from
//! [`ris_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ris_ssk::analytic;
use ris_ssk::channel::NakagamiParams;
use ris_ssk::linkmodel::{Scheme, SystemConfig};
use ris_ssk::montecarlo::{estimate_ped, McConfig, McMode};
use ris_ssk::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Overflow = 3,
    DimensionMismatch = 4,
    EmptyInput = 5,
    InvalidConfig = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Simulated model for [`ris_estimate_ped`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisMcMode {
    Exact = 0,
    Surrogate = 1,
}

/// Opaque system configuration.
pub struct RisConfig {
    inner: SystemConfig,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RisMcEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub errors: u64,
    pub trials: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RisStatus {
    match e {
        Error::Domain(_) => RisStatus::Domain,
        Error::Overflow(_) => RisStatus::Overflow,
        Error::DimensionMismatch { .. } => RisStatus::DimensionMismatch,
        Error::EmptyInput => RisStatus::EmptyInput,
        Error::InvalidConfig(_) => RisStatus::InvalidConfig,
        Error::Parse { .. } => RisStatus::Parse,
        Error::Io(_) => RisStatus::Io,
    }
}

fn guard<F: FnOnce() -> Result<(), RisStatus>>(f: F) -> RisStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RisStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            RisStatus::Panic
        }
    }
}

fn lift<T>(r: ris_ssk::Result<T>) -> Result<T, RisStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> RisStatus {
    set_error(format!("{what} is null"));
    RisStatus::NullPointer
}

unsafe fn config<'a>(cfg: *const RisConfig) -> Result<&'a SystemConfig, RisStatus> {
    // SAFETY: the caller passes a handle from `ris_config_new` or null.
    unsafe { cfg.as_ref() }.map(|c| &c.inner).ok_or_else(|| null("config"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), RisStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

/// Creates a configuration. `rpm_order == 0` selects SSK; otherwise SSK-RPM
/// with that constellation size. `gamma_av` is the linear average SNR.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ris_config_new(
    n_elements: usize,
    n_branches: usize,
    gamma_av: f64,
    k: f64,
    rpm_order: u32,
    m: f64,
    omega: f64,
    p: f64,
    out: *mut *mut RisConfig,
) -> RisStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let scheme = if rpm_order == 0 {
            Scheme::Ssk
        } else {
            lift(Scheme::rpm(rpm_order))?
        };
        let channel = lift(NakagamiParams::new(m, omega, p))?;
        let inner = lift(SystemConfig::new(n_elements, n_branches, gamma_av, k, scheme, channel))?;
        let handle = Box::into_raw(Box::new(RisConfig { inner }));
        // SAFETY: checked non-null above.
        unsafe { write(out, handle) }
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `cfg` must come from [`ris_config_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ris_config_free(cfg: *mut RisConfig) {
    if !cfg.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

fn scalar<F>(cfg: *const RisConfig, out: *mut f64, f: F) -> RisStatus
where
    F: FnOnce(&SystemConfig) -> ris_ssk::Result<analytic::PedResult>,
{
    guard(|| {
        // SAFETY: forwarded caller contract.
        let c = unsafe { config(cfg) }?;
        let v = lift(f(c))?.value;
        unsafe { write(out, v) }
    })
}

/// Closed-form error probability (symbol-averaged for RPM).
///
/// # Safety
/// `cfg` must be a live handle or null; `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ris_ped(cfg: *const RisConfig, out: *mut f64) -> RisStatus {
    scalar(cfg, out, analytic::ped)
}

/// High-SNR error floor.
///
/// # Safety
/// As for [`ris_ped`].
#[no_mangle]
pub unsafe extern "C" fn ris_ped_high_snr(cfg: *const RisConfig, out: *mut f64) -> RisStatus {
    scalar(cfg, out, analytic::ped_high_snr)
}

/// Low-SNR approximation.
///
/// # Safety
/// As for [`ris_ped`].
#[no_mangle]
pub unsafe extern "C" fn ris_ped_low_snr(cfg: *const RisConfig, out: *mut f64) -> RisStatus {
    scalar(cfg, out, analytic::ped_low_snr)
}

/// RPM error probability conditioned on the phase `psi`.
///
/// # Safety
/// As for [`ris_ped`].
#[no_mangle]
pub unsafe extern "C" fn ris_ped_rpm_conditional(cfg: *const RisConfig, psi: f64, out: *mut f64) -> RisStatus {
    scalar(cfg, out, |c| analytic::ped_rpm_conditional(c, psi))
}

/// `L / (L + 1)` with `L = n_branches - 1`.
///
/// # Safety
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ris_ped_zero_snr(n_branches: usize, out: *mut f64) -> RisStatus {
    guard(|| {
        let v = lift(analytic::ped_zero_snr(n_branches))?.value;
        unsafe { write(out, v) }
    })
}

/// `(N_R / 2) * ped`; `vacuous` is set to 1 when the bound exceeds 1/2.
///
/// # Safety
/// `out` must be valid for one `double`; `vacuous` may be null.
#[no_mangle]
pub unsafe extern "C" fn ris_ber_union_bound(
    ped: f64,
    n_branches: usize,
    out: *mut f64,
    vacuous: *mut u8,
) -> RisStatus {
    guard(|| {
        let b = lift(analytic::ber_union_bound(ped, n_branches))?;
        unsafe { write(out, b.value) }?;
        if !vacuous.is_null() {
            unsafe { write(vacuous, u8::from(b.vacuous)) }?;
        }
        Ok(())
    })
}

/// Monte-Carlo estimate. `mode` is a [`RisMcMode`] value. Results depend
/// only on the seed and trial count; `workers == 0` uses every core.
///
/// # Safety
/// `cfg` must be a live handle or null; `out` valid for one estimate.
#[no_mangle]
pub unsafe extern "C" fn ris_estimate_ped(
    cfg: *const RisConfig,
    trials: u64,
    seed: u64,
    mode: u32,
    workers: usize,
    out: *mut RisMcEstimate,
) -> RisStatus {
    guard(|| {
        let c = unsafe { config(cfg) }?;
        let mode = match mode {
            m if m == RisMcMode::Exact as u32 => McMode::Exact,
            m if m == RisMcMode::Surrogate as u32 => McMode::Surrogate,
            other => {
                set_error(format!("unknown Monte-Carlo mode {other}"));
                return Err(RisStatus::InvalidConfig);
            }
        };
        let mc = lift(McConfig::new(trials, seed, mode))?.with_workers(workers);
        let e = estimate_ped(c, &mc, None);
        unsafe {
            write(
                out,
                RisMcEstimate {
                    p_hat: e.p_hat,
                    std_error: e.stderr,
                    ci_low: e.ci_low,
                    ci_high: e.ci_high,
                    errors: e.errors,
                    trials: e.trials,
                },
            )
        }
    })
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length without the
/// terminator. Returns 0 when no error has been recorded.
///
/// # Safety
/// `buf` must be valid for `len` bytes, or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn ris_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: `buf` holds `len > n` bytes.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ris_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
