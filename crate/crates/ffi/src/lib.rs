//! C interface to `gnum`.
//!
//! Systems are opaque handles created by [`gnum_system_from_source`] and
//! released with [`gnum_system_free`]. Every other call returns a
//! [`GnumStatus`] and writes its result through an out-pointer; on failure
//! [`gnum_last_error`] describes what went wrong on the calling thread.

use gnum::analytic::{density_constant, zeta, TailModel, ZetaOptions};
use gnum::semigroup::n_count;
use gnum::summatory::{ell_value, m_value, GridSpec};
use gnum::{GnumError, MellinPoint, PrimeSystem};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Domain = 4,
    BudgetExceeded = 5,
    OutsideHalfPlane = 6,
    Panic = 7,
}

/// Opaque prime system.
pub struct GnumSystem {
    inner: PrimeSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &GnumError) -> GnumStatus {
    match err {
        GnumError::BudgetExceeded { .. } => GnumStatus::BudgetExceeded,
        GnumError::DivergenceDomain { .. } => GnumStatus::OutsideHalfPlane,
        GnumError::Domain(_) | GnumError::Unsupported(_) => GnumStatus::Domain,
        _ => GnumStatus::InvalidInput,
    }
}

/// Runs `f`, recording any error or panic for `gnum_last_error`.
fn guard(f: impl FnOnce() -> Result<(), (GnumStatus, String)>) -> GnumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GnumStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GnumStatus::Panic
        }
    }
}

fn lib(err: GnumError) -> (GnumStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (GnumStatus, String) {
    (GnumStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn system<'a>(sys: *const GnumSystem) -> Result<&'a PrimeSystem, (GnumStatus, String)> {
    sys.as_ref().map(|s| &s.inner).ok_or_else(|| null("system"))
}

unsafe fn write_out(out: *mut f64, value: f64) -> Result<(), (GnumStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gnum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gnum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a system from `builtin:NAME[:k=v,...]`, `primes:2,3,5` or a JSON file path.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gnum_system_from_source(source: *const c_char, out: *mut *mut GnumSystem) -> GnumStatus {
    guard(|| {
        if source.is_null() {
            return Err(null("source"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = CStr::from_ptr(source)
            .to_str()
            .map_err(|_| (GnumStatus::InvalidUtf8, "source is not UTF-8".to_string()))?;
        let inner = PrimeSystem::from_source(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(GnumSystem { inner }));
        Ok(())
    })
}

/// Builds a discrete system from `len` nondecreasing primes.
///
/// # Safety
/// `primes` must point to `len` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_system_from_primes(primes: *const f64, len: usize, out: *mut *mut GnumSystem) -> GnumStatus {
    guard(|| {
        if (primes.is_null() && len > 0) || out.is_null() {
            return Err(null("argument"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(primes, len) };
        let inner = PrimeSystem::discrete(slice).map_err(lib)?;
        *out = Box::into_raw(Box::new(GnumSystem { inner }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from a `gnum_system_*` constructor and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gnum_system_free(sys: *mut GnumSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// `N(x)`; `h` and `u_max` set the grid for continuous systems.
///
/// # Safety
/// `sys` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_count(sys: *const GnumSystem, x: f64, h: f64, u_max: f64, out: *mut f64) -> GnumStatus {
    guard(|| {
        let r = n_count(system(sys)?, x, h, u_max).map_err(lib)?;
        write_out(out, r.value)
    })
}

/// `ζ(σ + it)` with the default method for the system.
///
/// # Safety
/// `sys` must be a live handle; `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_zeta(sys: *const GnumSystem, sigma: f64, t: f64, re: *mut f64, im: *mut f64) -> GnumStatus {
    guard(|| {
        let z = zeta(system(sys)?, MellinPoint::new(sigma, t), &ZetaOptions::default()).map_err(lib)?;
        write_out(re, z.value.re)?;
        write_out(im, z.value.im)
    })
}

/// `m(x) = Σ μ(n)/n`.
///
/// # Safety
/// `sys` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_m_value(sys: *const GnumSystem, x: f64, h: f64, u_max: f64, out: *mut f64) -> GnumStatus {
    guard(|| {
        let v = m_value(system(sys)?, x, GridSpec::new(h, u_max)).map_err(lib)?;
        write_out(out, v)
    })
}

/// `ℓ(x) = Σ λ(n)/n`.
///
/// # Safety
/// `sys` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_ell_value(sys: *const GnumSystem, x: f64, h: f64, u_max: f64, out: *mut f64) -> GnumStatus {
    guard(|| {
        let v = ell_value(system(sys)?, x, GridSpec::new(h, u_max)).map_err(lib)?;
        write_out(out, v)
    })
}

/// Density constant `a = exp J(1)` with the integral cut at `u_max` and
/// continued as `Π₀` beyond.
///
/// # Safety
/// `sys` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gnum_density_constant(sys: *const GnumSystem, u_max: f64, out: *mut f64) -> GnumStatus {
    guard(|| {
        let d = density_constant(system(sys)?, u_max, TailModel::Pi0, None).map_err(lib)?;
        write_out(out, d.value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&GnumError::BudgetExceeded { budget: 1 }), GnumStatus::BudgetExceeded);
        assert_eq!(status_of(&GnumError::DivergenceDomain { sigma: 1.0, t: 0.0 }), GnumStatus::OutsideHalfPlane);
        assert_eq!(status_of(&GnumError::NonInvertible), GnumStatus::InvalidInput);
    }

    #[test]
    fn panics_are_contained() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, GnumStatus::Panic);
        assert!(!gnum_last_error().is_null());
    }
}
