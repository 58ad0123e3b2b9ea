//! C ABI for gvkit.
//!
//! Every entry point returns a [`GvkitStatus`]. On failure a message is
//! available from [`gvkit_last_error_message`] until the next call on the
//! same thread. Strings returned through `out` pointers are owned by the
//! caller and must be released with [`gvkit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gvkit::gvgw::{self, GvgwError};
use gvkit::k3hilb::{self, GvTable};
use gvkit::schema::{self, CechJson, ChernJson, CoverJson, GvTableJson, GwTableJson, ParityJson};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GvkitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Input JSON is malformed or fails validation.
    Schema = 3,
    /// The computation ran but a checked identity failed.
    TheoremCheck = 4,
    Internal = 5,
    Utf8 = 6,
}

/// Opaque GV table `n_h(k)` for the K3 surface.
pub struct GvkitGvTable {
    inner: GvTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GvkitStatus, String);

type Outcome = Result<GvkitStatus, Failure>;

fn fail(status: GvkitStatus, msg: impl ToString) -> Failure {
    Failure(status, msg.to_string())
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, records its error message and converts panics to `Internal`.
fn guard(f: impl FnOnce() -> Outcome) -> GvkitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == GvkitStatus::Ok {
                set_error(None);
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            GvkitStatus::Internal
        }
    }
}

unsafe fn input_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(GvkitStatus::NullPointer, "input pointer is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(GvkitStatus::Utf8, e))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| fail(GvkitStatus::Internal, e))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(fail(GvkitStatus::NullPointer, "output pointer is null"))
    } else {
        Ok(())
    }
}

fn schema_fail(e: impl ToString) -> Failure {
    fail(GvkitStatus::Schema, e)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next gvkit call on the same thread.
#[no_mangle]
pub extern "C" fn gvkit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn gvkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes `n_h(k)` for `1 <= k <= kmax`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gvkit_k3_gv_table(kmax: u32, out: *mut *mut GvkitGvTable) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        if kmax == 0 {
            return Err(fail(GvkitStatus::InvalidArgument, "kmax must be at least 1"));
        }
        let inner = k3hilb::gv_table(kmax).map_err(|e| fail(GvkitStatus::Internal, e))?;
        *out = Box::into_raw(Box::new(GvkitGvTable { inner }));
        Ok(GvkitStatus::Ok)
    })
}

/// Largest degree stored in the table, or 0 for null.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gv_table_kmax(table: *const GvkitGvTable) -> u32 {
    table.as_ref().map_or(0, |t| t.inner.kmax)
}

/// Reads `n_h(k)`; `h > k` gives 0. A degree outside `1..=kmax` or a value
/// that does not fit in 64 bits gives `InvalidArgument`.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gv_table_get(
    table: *const GvkitGvTable,
    h: u32,
    k: u32,
    out: *mut i64,
) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let t = table
            .as_ref()
            .ok_or_else(|| fail(GvkitStatus::NullPointer, "table is null"))?;
        if k == 0 || k > t.inner.kmax {
            return Err(fail(
                GvkitStatus::InvalidArgument,
                format!("k = {k} outside 1..={}", t.inner.kmax),
            ));
        }
        let n = t.inner.get(h, k);
        *out = n
            .to_i64()
            .ok_or_else(|| fail(GvkitStatus::InvalidArgument, format!("n_{h}({k}) = {n} overflows i64")))?;
        Ok(GvkitStatus::Ok)
    })
}

/// The table as a GV JSON document.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gv_table_to_json(table: *const GvkitGvTable, out: *mut *mut c_char) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let t = table
            .as_ref()
            .ok_or_else(|| fail(GvkitStatus::NullPointer, "table is null"))?;
        write_string(out, schema::to_json(&GvTableJson::from_invariants(&t.inner.table)))?;
        Ok(GvkitStatus::Ok)
    })
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must be null or a handle from [`gvkit_k3_gv_table`] not freed yet.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gv_table_free(table: *mut GvkitGvTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Compares the decomposition table with the KKV table through `kmax`.
/// `TheoremCheck` reports the first disagreement.
#[no_mangle]
pub extern "C" fn gvkit_verify_kkv(kmax: u32) -> GvkitStatus {
    guard(|| {
        if kmax == 0 {
            return Err(fail(GvkitStatus::InvalidArgument, "kmax must be at least 1"));
        }
        match k3hilb::verify_kkv(kmax).map_err(|e| fail(GvkitStatus::Internal, e))? {
            Ok(_) => Ok(GvkitStatus::Ok),
            Err(m) => Err(fail(GvkitStatus::TheoremCheck, m)),
        }
    })
}

/// GV table JSON in, GW table JSON out, for `g <= gmax`, `d <= dmax`.
///
/// # Safety
/// `gv_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gv_to_gw_json(
    gv_json: *const c_char,
    gmax: u32,
    dmax: u32,
    out: *mut *mut c_char,
) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let table: GvTableJson = schema::parse(input_str(gv_json)?).map_err(schema_fail)?;
        let gv = table.to_invariants().map_err(schema_fail)?;
        let gw = gvgw::gv_to_gw(&gv, gmax, dmax).map_err(|e| fail(GvkitStatus::InvalidArgument, e))?;
        write_string(out, schema::to_json(&GwTableJson::from_invariants(&gw)))?;
        Ok(GvkitStatus::Ok)
    })
}

/// GW table JSON in, GV table JSON out. Non-integral GV invariants give
/// `TheoremCheck`.
///
/// # Safety
/// `gw_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_gw_to_gv_json(
    gw_json: *const c_char,
    hmax: u32,
    dmax: u32,
    out: *mut *mut c_char,
) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let table: GwTableJson = schema::parse(input_str(gw_json)?).map_err(schema_fail)?;
        let gw = table.to_invariants().map_err(schema_fail)?;
        let gv = gvgw::gw_to_gv(&gw, hmax, dmax).map_err(|e| match e {
            GvgwError::NonIntegral { .. } => fail(GvkitStatus::TheoremCheck, e),
            other => fail(GvkitStatus::InvalidArgument, other),
        })?;
        write_string(out, schema::to_json(&GvTableJson::from_invariants(&gv)))?;
        Ok(GvkitStatus::Ok)
    })
}

/// Chern data JSON in, parity report JSON out. The report is written even
/// when `c1` fails to be even, in which case the status is `TheoremCheck`.
///
/// # Safety
/// `chern_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_parity_json(chern_json: *const c_char, out: *mut *mut c_char) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let input: ChernJson = schema::parse(input_str(chern_json)?).map_err(schema_fail)?;
        let (model, cd) = input.to_model().map_err(schema_fail)?;
        let report = model.parity_check(&cd).map_err(schema_fail)?;
        write_string(out, schema::to_json(&ParityJson::new(&model, &cd, &report)))?;
        match report.even {
            Some(true) => Ok(GvkitStatus::Ok),
            Some(false) => Err(fail(GvkitStatus::TheoremCheck, "c1 is integral but not divisible by 2")),
            None => Err(fail(GvkitStatus::TheoremCheck, "c1 is not integral")),
        }
    })
}

/// Cover JSON in, obstruction report JSON out. Sign data that is not a
/// cocycle gives `TheoremCheck`, with the report still written.
///
/// # Safety
/// `cover_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gvkit_cech_json(cover_json: *const c_char, out: *mut *mut c_char) -> GvkitStatus {
    guard(|| {
        check_out(out)?;
        let cover: CoverJson = schema::parse(input_str(cover_json)?).map_err(schema_fail)?;
        cover.check_face_keys().map_err(schema_fail)?;
        let nerve = cover.nerve().map_err(schema_fail)?;
        let sigma = cover.sigma(&nerve).map_err(schema_fail)?;
        let json = CechJson::new(&nerve, &sigma);
        let violation = json.violation.clone();
        write_string(out, schema::to_json(&json))?;
        match violation {
            None => Ok(GvkitStatus::Ok),
            Some(f) => Err(fail(
                GvkitStatus::TheoremCheck,
                format!("sign data is not a cocycle on {}", f.join(",")),
            )),
        }
    })
}
