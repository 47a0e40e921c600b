//! C ABI for the mackey crate.
//!
//! Objects cross the boundary as opaque handles; data crosses as UTF-8
//! JSON strings in the same formats the CLI reads and writes. Every
//! function returns a status code; details of the last failure are
//! available per thread via `mky_last_error`. Strings returned by this
//! library must be released with `mky_string_free`, handles with their
//! `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;

use mackey::convolution::{convolve, star_dual};
use mackey::format::{GroupJson, MackeyJson};
use mackey::green::{burnside_green, burnside_ring_table, green_algebra};
use mackey::mackey::{burnside_functor, cohomological_check, MackeyFunctor};
use mackey::reps::ReprSystem;

/// Status codes returned by every fallible function.
/// cbindgen:prefix-with-name
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MkyStatus {
    /// Success.
    Ok = 0,
    /// The operation ran but the mathematical check failed.
    MathFail = 1,
    /// Malformed or invalid input.
    InvalidInput = 2,
    /// A required pointer was null.
    NullPointer = 3,
    /// An internal panic was caught; the library state is unchanged.
    Internal = 4,
}

/// Opaque handle: a finite group with its derived subgroup data.
pub struct MkyGroup {
    ctx: Arc<ReprSystem>,
}

/// Opaque handle: a Mackey functor in Lindner form.
pub struct MkyFunctor {
    functor: MackeyFunctor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, MkyStatus> {
    if ptr.is_null() {
        return Err(MkyStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        MkyStatus::InvalidInput
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

fn guard<F: FnOnce() -> MkyStatus>(f: F) -> MkyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            MkyStatus::Internal
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn mky_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null. The
/// pointer is valid until the next failing call on the same thread; do
/// not free.
#[no_mangle]
pub extern "C" fn mky_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a `mky_*` function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mky_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group from JSON `{"order": n, "table": [[...]]}` and computes
/// its subgroup-class data. `bound` caps the group order (pass 0 for the
/// default of 24).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_group_from_json(
    json: *const c_char,
    bound: usize,
    out: *mut *mut MkyGroup,
) -> MkyStatus {
    guard(|| {
        if out.is_null() {
            return MkyStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed: Result<GroupJson, _> = serde_json::from_str(text);
        let gj = match parsed {
            Ok(g) => g,
            Err(e) => {
                set_error(format!("invalid group json: {e}"));
                return MkyStatus::InvalidInput;
            }
        };
        let group = match gj.build() {
            Ok(g) => g,
            Err(e) => {
                set_error(e.to_string());
                return MkyStatus::InvalidInput;
            }
        };
        let bound = if bound == 0 {
            mackey::group::DEFAULT_ORDER_BOUND
        } else {
            bound
        };
        match ReprSystem::new(Arc::new(group), bound) {
            Ok(ctx) => {
                clear_error();
                *out = Box::into_raw(Box::new(MkyGroup { ctx }));
                MkyStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                MkyStatus::InvalidInput
            }
        }
    })
}

/// # Safety
/// `group` must come from `mky_group_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mky_group_free(group: *mut MkyGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Number of elements of the group; 0 on null input.
///
/// # Safety
/// `group` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_group_order(group: *const MkyGroup) -> usize {
    group.as_ref().map_or(0, |g| g.ctx.group().order())
}

/// Number of conjugacy classes of subgroups; 0 on null input.
///
/// # Safety
/// `group` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_group_class_count(group: *const MkyGroup) -> usize {
    group.as_ref().map_or(0, |g| g.ctx.class_count())
}

/// The Burnside ring multiplication table at the top level, as JSON
/// `[[["p/q", ...], ...], ...]` indexed by subgroup classes.
///
/// # Safety
/// `group` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_burnside_table_json(
    group: *const MkyGroup,
    out: *mut *mut c_char,
) -> MkyStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return MkyStatus::NullPointer;
        };
        let table = burnside_ring_table(&g.ctx);
        let json: Vec<Vec<Vec<String>>> = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(mackey::format::rational_to_string)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        clear_error();
        *out = to_c_string(serde_json::to_string(&json).expect("serializable"));
        MkyStatus::Ok
    })
}

/// Builds the Burnside functor of a group.
///
/// # Safety
/// `group` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_burnside_functor(
    group: *const MkyGroup,
    out: *mut *mut MkyFunctor,
) -> MkyStatus {
    guard(|| {
        let (Some(g), false) = (group.as_ref(), out.is_null()) else {
            return MkyStatus::NullPointer;
        };
        let functor = burnside_functor(&g.ctx);
        clear_error();
        *out = Box::into_raw(Box::new(MkyFunctor { functor }));
        MkyStatus::Ok
    })
}

/// Parses a Mackey functor from JSON (the CLI file format, group
/// embedded). The functor is fully validated.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_functor_from_json(
    json: *const c_char,
    bound: usize,
    out: *mut *mut MkyFunctor,
) -> MkyStatus {
    guard(|| {
        if out.is_null() {
            return MkyStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed: Result<MackeyJson, _> = serde_json::from_str(text);
        let mj = match parsed {
            Ok(m) => m,
            Err(e) => {
                set_error(format!("invalid functor json: {e}"));
                return MkyStatus::InvalidInput;
            }
        };
        let group = match mackey::format::group_from_value(&mj.group, Path::new(".")) {
            Ok(g) => g,
            Err(e) => {
                set_error(e.to_string());
                return MkyStatus::InvalidInput;
            }
        };
        let bound = if bound == 0 {
            mackey::group::DEFAULT_ORDER_BOUND
        } else {
            bound
        };
        let ctx = match ReprSystem::new(Arc::new(group), bound) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return MkyStatus::InvalidInput;
            }
        };
        match mj.build(&ctx) {
            Ok(functor) => {
                clear_error();
                *out = Box::into_raw(Box::new(MkyFunctor { functor }));
                MkyStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                MkyStatus::InvalidInput
            }
        }
    })
}

/// # Safety
/// `functor` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mky_functor_free(functor: *mut MkyFunctor) {
    if !functor.is_null() {
        drop(Box::from_raw(functor));
    }
}

/// Serializes a functor to the JSON file format.
///
/// # Safety
/// `functor` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_functor_to_json(
    functor: *const MkyFunctor,
    out: *mut *mut c_char,
) -> MkyStatus {
    guard(|| {
        let (Some(f), false) = (functor.as_ref(), out.is_null()) else {
            return MkyStatus::NullPointer;
        };
        let json = MackeyJson::of(&f.functor);
        clear_error();
        *out = to_c_string(serde_json::to_string_pretty(&json).expect("serializable"));
        MkyStatus::Ok
    })
}

/// Dimension of the level at a subgroup class, or -1 when out of range.
///
/// # Safety
/// `functor` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_functor_level_dim(functor: *const MkyFunctor, class: usize) -> i64 {
    let Some(f) = functor.as_ref() else { return -1 };
    if class >= f.functor.levels().len() {
        return -1;
    }
    f.functor.level_dim(class) as i64
}

/// Runs the full functoriality validation.
///
/// # Safety
/// `functor` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_check_mackey(functor: *const MkyFunctor) -> MkyStatus {
    guard(|| {
        let Some(f) = functor.as_ref() else {
            return MkyStatus::NullPointer;
        };
        let report = f.functor.validate();
        if report.passed() {
            clear_error();
            MkyStatus::Ok
        } else {
            set_error(report.failures[0].to_string());
            MkyStatus::MathFail
        }
    })
}

/// Checks transfer∘restriction = index·id over all subgroup pairs.
///
/// # Safety
/// `functor` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_check_cohomological(functor: *const MkyFunctor) -> MkyStatus {
    guard(|| {
        let Some(f) = functor.as_ref() else {
            return MkyStatus::NullPointer;
        };
        let report = cohomological_check(&f.functor);
        if report.passed() {
            clear_error();
            MkyStatus::Ok
        } else {
            let failure = report.failures().next().expect("failing pair");
            set_error(format!(
                "transfer∘restriction ≠ index·id at H={:?}, K={:?}",
                failure.h, failure.k
            ));
            MkyStatus::MathFail
        }
    })
}

/// Day convolution of two functors over the same group.
///
/// # Safety
/// `lhs` and `rhs` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_tensor(
    lhs: *const MkyFunctor,
    rhs: *const MkyFunctor,
    out: *mut *mut MkyFunctor,
) -> MkyStatus {
    guard(|| {
        let (Some(l), Some(r), false) = (lhs.as_ref(), rhs.as_ref(), out.is_null()) else {
            return MkyStatus::NullPointer;
        };
        match convolve(&l.functor, &r.functor) {
            Ok(conv) => {
                clear_error();
                *out = Box::into_raw(Box::new(MkyFunctor {
                    functor: conv.functor,
                }));
                MkyStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                MkyStatus::InvalidInput
            }
        }
    })
}

/// Star dual of a functor.
///
/// # Safety
/// `functor` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mky_star_dual(
    functor: *const MkyFunctor,
    out: *mut *mut MkyFunctor,
) -> MkyStatus {
    guard(|| {
        let (Some(f), false) = (functor.as_ref(), out.is_null()) else {
            return MkyStatus::NullPointer;
        };
        let s = star_dual(&f.functor);
        clear_error();
        *out = Box::into_raw(Box::new(MkyFunctor { functor: s }));
        MkyStatus::Ok
    })
}

/// Dimension of the Green algebra W_J of the Burnside Green functor, with
/// validation of associativity and the unit; -1 on failure.
///
/// # Safety
/// `group` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mky_burnside_green_algebra_dim(group: *const MkyGroup) -> i64 {
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let Some(g) = group.as_ref() else { return -1 };
        let w = green_algebra(&burnside_green(&g.ctx));
        if w.validate() {
            w.dim as i64
        } else {
            -1
        }
    }));
    outcome.unwrap_or(-1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn group_round_trip_through_the_c_abi() {
        let json = cstr(r#"{"order": 2, "table": [[0,1],[1,0]]}"#);
        let mut group: *mut MkyGroup = std::ptr::null_mut();
        let status = unsafe { mky_group_from_json(json.as_ptr(), 0, &mut group) };
        assert_eq!(status, MkyStatus::Ok);
        unsafe {
            assert_eq!(mky_group_order(group), 2);
            assert_eq!(mky_group_class_count(group), 2);

            let mut table: *mut c_char = std::ptr::null_mut();
            assert_eq!(mky_burnside_table_json(group, &mut table), MkyStatus::Ok);
            let text = CStr::from_ptr(table).to_str().unwrap().to_string();
            assert!(text.contains("2/1"));
            mky_string_free(table);

            let mut j: *mut MkyFunctor = std::ptr::null_mut();
            assert_eq!(mky_burnside_functor(group, &mut j), MkyStatus::Ok);
            assert_eq!(mky_functor_level_dim(j, 0), 2);
            assert_eq!(mky_functor_level_dim(j, 1), 1);
            assert_eq!(mky_check_mackey(j), MkyStatus::Ok);
            // The Burnside functor of C2 is not cohomological.
            assert_eq!(mky_check_cohomological(j), MkyStatus::MathFail);
            assert!(!mky_last_error().is_null());

            let mut jj: *mut MkyFunctor = std::ptr::null_mut();
            assert_eq!(mky_tensor(j, j, &mut jj), MkyStatus::Ok);
            assert_eq!(mky_functor_level_dim(jj, 0), 2);

            let mut text_out: *mut c_char = std::ptr::null_mut();
            assert_eq!(mky_functor_to_json(jj, &mut text_out), MkyStatus::Ok);
            let serialized = cstr(CStr::from_ptr(text_out).to_str().unwrap());
            mky_string_free(text_out);

            let mut reloaded: *mut MkyFunctor = std::ptr::null_mut();
            assert_eq!(
                mky_functor_from_json(serialized.as_ptr(), 0, &mut reloaded),
                MkyStatus::Ok
            );
            assert_eq!(mky_functor_level_dim(reloaded, 1), 1);

            let mut dual: *mut MkyFunctor = std::ptr::null_mut();
            assert_eq!(mky_star_dual(reloaded, &mut dual), MkyStatus::Ok);
            assert_eq!(mky_check_mackey(dual), MkyStatus::Ok);

            assert_eq!(mky_burnside_green_algebra_dim(group), 6);

            mky_functor_free(dual);
            mky_functor_free(reloaded);
            mky_functor_free(jj);
            mky_functor_free(j);
            mky_group_free(group);
        }
    }

    #[test]
    fn errors_are_reported() {
        let bad = cstr("not json");
        let mut group: *mut MkyGroup = std::ptr::null_mut();
        let status = unsafe { mky_group_from_json(bad.as_ptr(), 0, &mut group) };
        assert_eq!(status, MkyStatus::InvalidInput);
        let msg = unsafe { CStr::from_ptr(mky_last_error()) }
            .to_str()
            .unwrap();
        assert!(msg.contains("invalid group json"));

        let status = unsafe { mky_group_from_json(std::ptr::null(), 0, &mut group) };
        assert_eq!(status, MkyStatus::NullPointer);

        // Invalid table: element 1 has no inverse.
        let invalid = cstr(r#"{"order": 2, "table": [[0,1],[1,1]]}"#);
        let status = unsafe { mky_group_from_json(invalid.as_ptr(), 0, &mut group) };
        assert_eq!(status, MkyStatus::InvalidInput);
    }
}
