//! C ABI for the certificate checker.
//!
//! The surface is deliberately small: parse a certificate document into an
//! opaque handle, check it, read size/work counters, and evaluate the Helly
//! lower-bound formula. Strings returned by the library are freed with
//! [`hc_string_free`]; handles with [`hc_tree_free`]. Detail messages for
//! the most recent failure or rejection on the calling thread are available
//! through [`hc_last_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use hellycert::bctree::{check, tree_size, tree_stats, BCTree};
use hellycert::instances::helly_bound;

/// Opaque handle to a parsed certificate document.
pub struct HcTree {
    inner: BCTree,
}

/// Outcome of replaying a certificate.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct HcVerdict {
    /// Nonzero when the certificate is accepted.
    pub accepted: bool,
    /// Tree size (node count).
    pub size: u64,
    /// Leaf count.
    pub leaves: u64,
    /// Elementary rational operations spent checking.
    pub work: u64,
}

/// Status codes returned by fallible entry points.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
}

thread_local! {
    static LAST_MESSAGE: RefCell<CString> = RefCell::new(CString::default());
}

fn set_message(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_MESSAGE.with(|m| *m.borrow_mut() = c);
}

/// Detail message for the most recent failure or rejection on this thread.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_message() -> *const c_char {
    LAST_MESSAGE.with(|m| m.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    static VERSION: &[u8] = b"0.1.0\0";
    VERSION.as_ptr() as *const c_char
}

/// Parses a certificate document (UTF-8 JSON) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// `HC_STATUS_OK` the caller owns the handle and must release it with
/// [`hc_tree_free`].
#[no_mangle]
pub unsafe extern "C" fn hc_tree_parse(json: *const c_char, out: *mut *mut HcTree) -> HcStatus {
    if json.is_null() || out.is_null() {
        return HcStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_message("input is not valid UTF-8");
        return HcStatus::InvalidUtf8;
    };
    match serde_json::from_str::<BCTree>(text) {
        Ok(tree) => {
            *out = Box::into_raw(Box::new(HcTree { inner: tree }));
            HcStatus::Ok
        }
        Err(e) => {
            set_message(&e.to_string());
            HcStatus::ParseError
        }
    }
}

/// Replays the certificate against its goal and fills `out`.
///
/// Returns `HC_STATUS_OK` whether the certificate is accepted or rejected;
/// inspect `out->accepted`. The rejection reason is available through
/// [`hc_last_message`].
///
/// # Safety
/// `tree` must be a live handle from [`hc_tree_parse`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hc_tree_check(tree: *const HcTree, out: *mut HcVerdict) -> HcStatus {
    let (Some(tree), false) = (tree.as_ref(), out.is_null()) else {
        return HcStatus::NullPointer;
    };
    let v = check(&tree.inner);
    let stats = tree_stats(&tree.inner);
    set_message(&v.reason);
    *out = HcVerdict { accepted: v.accepted, size: stats.nodes, leaves: stats.leaves, work: v.work };
    HcStatus::Ok
}

/// Tree size (node count) of a parsed document.
///
/// # Safety
/// `tree` must be a live handle from [`hc_tree_parse`].
#[no_mangle]
pub unsafe extern "C" fn hc_tree_size(tree: *const HcTree) -> u64 {
    tree.as_ref().map_or(0, |t| tree_size(&t.inner))
}

/// Releases a handle returned by [`hc_tree_parse`]. NULL is ignored.
///
/// # Safety
/// `tree` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_tree_free(tree: *mut HcTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// The Helly lower bound `t/(h−1)` as a newly allocated decimal string
/// ("p/q" or "p"); NULL when `h < 2`. Free with [`hc_string_free`].
#[no_mangle]
pub extern "C" fn hc_helly_bound(t: u64, h: u64) -> *mut c_char {
    match helly_bound(t, h) {
        Ok(v) => CString::new(v.to_string())
            .map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_message(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Frees a string allocated by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
