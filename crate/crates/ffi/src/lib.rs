//! C ABI for the braidq library. Every object crosses the boundary as an
//! opaque handle; every call returns a status code and leaves a
//! description of the last failure in thread-local storage.

use braidq::doc::{self, Body};
use braidq::linear::{constant_cocycle, Scalar};
use braidq::search::{enumerate_solutions, SearchSpec};
use braidq::solution::NonDegenerateSolution;
use num_traits::One;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status codes mirroring the CLI exit codes, plus FFI-specific ones.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum BqStatus {
    Ok = 0,
    Violation = 1,
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
}

/// Opaque handle to a validated non-degenerate solution.
pub struct BqSolution {
    inner: NonDegenerateSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(rule: &str, witness: &str) {
    let text = format!("{rule}: {witness}");
    let sanitized = CString::new(text.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = sanitized);
}

fn fail(v: braidq::Violation) -> BqStatus {
    let input = matches!(
        v.rule.as_str(),
        "parse" | "version" | "kind" | "unknown-vertex" | "unknown-arrow" | "unknown-element"
    );
    set_error(&v.rule, &v.witness);
    if input {
        BqStatus::InputError
    } else {
        BqStatus::Violation
    }
}

/// Message for the most recent failure on this thread. Borrowed; valid
/// until the next failing call from the same thread.
#[no_mangle]
pub extern "C" fn bq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BqStatus> {
    if ptr.is_null() {
        set_error("null-pointer", "input string");
        return Err(BqStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("invalid-utf8", "input string");
        BqStatus::InvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> BqStatus {
    let c = CString::new(text.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
    BqStatus::Ok
}

/// Parse a solution document (JSON) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_parse(
    json: *const c_char,
    out: *mut *mut BqSolution,
) -> BqStatus {
    if out.is_null() {
        set_error("null-pointer", "out");
        return BqStatus::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(st) => return st,
    };
    let parsed = doc::from_json(text).and_then(|d| match d.body {
        Body::Solution(s) => doc::solution_from_doc(&s),
        _ => Err(braidq::Violation::new("kind", "expected a solution document")),
    });
    match parsed {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(BqSolution { inner }));
            BqStatus::Ok
        }
        Err(v) => fail(v),
    }
}

/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_free(handle: *mut BqSolution) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `ptr` must come from a bq_* call that returned an owned string.
#[no_mangle]
pub unsafe extern "C" fn bq_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

unsafe fn solution_of<'a>(handle: *const BqSolution) -> Result<&'a NonDegenerateSolution, BqStatus> {
    if handle.is_null() {
        set_error("null-pointer", "solution handle");
        return Err(BqStatus::NullPointer);
    }
    Ok(&(*handle).inner)
}

/// # Safety
/// `handle` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_arrow_count(handle: *const BqSolution) -> usize {
    solution_of(handle).map(|s| s.quiver().arrow_count()).unwrap_or(0)
}

/// # Safety
/// `handle` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_is_involutive(handle: *const BqSolution) -> bool {
    solution_of(handle).map(|s| s.is_involutive()).unwrap_or(false)
}

/// σ(x, y) by arrow index; fails on a non-composable pair.
///
/// # Safety
/// `handle` must be live; `out_left`/`out_right` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_apply(
    handle: *const BqSolution,
    x: usize,
    y: usize,
    out_left: *mut usize,
    out_right: *mut usize,
) -> BqStatus {
    let s = match solution_of(handle) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out_left.is_null() || out_right.is_null() {
        set_error("null-pointer", "out");
        return BqStatus::NullPointer;
    }
    if !s.pairs().contains(&(x, y)) {
        set_error("pair-composable", "arguments are not a composable pair");
        return BqStatus::InputError;
    }
    let (u, v) = s.apply(x, y);
    *out_left = u;
    *out_right = v;
    BqStatus::Ok
}

/// Serialize the solution back to its canonical JSON document.
///
/// # Safety
/// `handle` must be live; `out` receives an owned string for
/// bq_string_free.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_to_json(
    handle: *const BqSolution,
    out: *mut *mut c_char,
) -> BqStatus {
    let s = match solution_of(handle) {
        Ok(s) => s,
        Err(st) => return st,
    };
    give_string(doc::to_json(&doc::wrap(Body::Solution(doc::solution_doc(s)))), out)
}

/// Derived rack bundle as a JSON document.
///
/// # Safety
/// Same contract as bq_solution_to_json.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_derive_rack(
    handle: *const BqSolution,
    out: *mut *mut c_char,
) -> BqStatus {
    let s = match solution_of(handle) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match braidq::rack::derived_solution(s) {
        Ok((rack, _)) => {
            give_string(doc::to_json(&doc::wrap(Body::RackBundle(doc::rack_doc(&rack)))), out)
        }
        Err(v) => fail(v),
    }
}

/// Universal braided groupoid acting on the solution, as a JSON document.
///
/// # Safety
/// Same contract as bq_solution_to_json.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_structure_groupoid(
    handle: *const BqSolution,
    out: *mut *mut c_char,
) -> BqStatus {
    let s = match solution_of(handle) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match braidq::braided::reduced_structure_groupoid(s) {
        Ok(sp) => give_string(
            doc::to_json(&doc::wrap(Body::StructuralPair(doc::structural_pair_doc(&sp, s)))),
            out,
        ),
        Err(v) => fail(v),
    }
}

/// Braiding matrix with the constant cocycle q = 1, as a JSON document.
///
/// # Safety
/// Same contract as bq_solution_to_json.
#[no_mangle]
pub unsafe extern "C" fn bq_solution_linearize(
    handle: *const BqSolution,
    out: *mut *mut c_char,
) -> BqStatus {
    let s = match solution_of(handle) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match braidq::linear::sigma_q(s, &constant_cocycle(s, Scalar::one())) {
        Ok(m) => give_string(doc::to_json(&doc::wrap(Body::Matrix(doc::matrix_doc(&m)))), out),
        Err(v) => fail(v),
    }
}

/// Enumerate all non-degenerate solutions on a quiver document; the
/// result is a JSON array of solution documents.
///
/// # Safety
/// `quiver_json` must be NUL-terminated; `out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn bq_enumerate(
    quiver_json: *const c_char,
    node_budget: u64,
    out: *mut *mut c_char,
) -> BqStatus {
    let text = match read_str(quiver_json) {
        Ok(t) => t,
        Err(st) => return st,
    };
    let parsed = doc::from_json(text).and_then(|d| match d.body {
        Body::Quiver(q) => doc::quiver_from_doc(&q),
        _ => Err(braidq::Violation::new("kind", "expected a quiver document")),
    });
    let quiver = match parsed {
        Ok(q) => q,
        Err(v) => return fail(v),
    };
    let spec = SearchSpec {
        symmetry_reduction: false,
        node_budget: if node_budget == 0 { SearchSpec::default().node_budget } else { node_budget },
        ..SearchSpec::default()
    };
    match enumerate_solutions(&quiver, &spec) {
        Ok(found) if found.exhaustive => {
            let docs: Vec<doc::Document> = found
                .solutions
                .iter()
                .map(|s| doc::wrap(Body::Solution(doc::solution_doc(s))))
                .collect();
            give_string(serde_json::to_string_pretty(&docs).unwrap() + "\n", out)
        }
        Ok(found) => {
            set_error("budget", &format!("stopped after {} nodes", found.nodes));
            BqStatus::Violation
        }
        Err(v) => fail(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    const FLIP: &str = r#"{
      "version": 1, "kind": "solution",
      "quiver": {"vertices": ["p"], "arrows": [["a","p","p"],["b","p","p"]]},
      "sigma": [["a","a","a","a"],["a","b","b","a"],["b","a","a","b"],["b","b","b","b"]]
    }"#;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn parse_query_serialize() {
        unsafe {
            let mut h: *mut BqSolution = ptr::null_mut();
            let st = bq_solution_parse(cstr(FLIP).as_ptr(), &mut h);
            assert!(st == BqStatus::Ok);
            assert_eq!(bq_solution_arrow_count(h), 2);
            assert!(bq_solution_is_involutive(h));
            let (mut l, mut r) = (0usize, 0usize);
            assert!(bq_solution_apply(h, 0, 1, &mut l, &mut r) == BqStatus::Ok);
            assert_eq!((l, r), (1, 0));
            let mut text: *mut c_char = ptr::null_mut();
            assert!(bq_solution_to_json(h, &mut text) == BqStatus::Ok);
            let json = CStr::from_ptr(text).to_str().unwrap().to_string();
            bq_string_free(text);
            let d = doc::from_json(&json).unwrap();
            doc::validate(&d).unwrap();
            for f in [
                bq_solution_derive_rack as unsafe extern "C" fn(_, _) -> BqStatus,
                bq_solution_structure_groupoid,
                bq_solution_linearize,
            ] {
                let mut s: *mut c_char = ptr::null_mut();
                assert!(f(h, &mut s) == BqStatus::Ok);
                doc::validate(&doc::from_json(CStr::from_ptr(s).to_str().unwrap()).unwrap())
                    .unwrap();
                bq_string_free(s);
            }
            bq_solution_free(h);
        }
    }

    #[test]
    fn error_paths() {
        unsafe {
            let mut h: *mut BqSolution = ptr::null_mut();
            assert!(bq_solution_parse(cstr("{bad").as_ptr(), &mut h) == BqStatus::InputError);
            let msg = CStr::from_ptr(bq_last_error()).to_str().unwrap();
            assert!(msg.starts_with("parse:"), "{msg}");
            assert!(bq_solution_parse(ptr::null(), &mut h) == BqStatus::NullPointer);
            let broken = FLIP.replace(r#"["a","b","b","a"]"#, r#"["a","b","a","a"]"#);
            assert!(bq_solution_parse(cstr(&broken).as_ptr(), &mut h) == BqStatus::Violation);
        }
    }

    #[test]
    fn enumerate_through_the_boundary() {
        unsafe {
            let quiver = r#"{"version":1,"kind":"quiver","vertices":["p"],
                             "arrows":[["a","p","p"],["b","p","p"]]}"#;
            let mut out: *mut c_char = ptr::null_mut();
            assert!(bq_enumerate(cstr(quiver).as_ptr(), 0, &mut out) == BqStatus::Ok);
            let docs: Vec<doc::Document> =
                serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
            assert_eq!(docs.len(), 4);
            bq_string_free(out);
        }
    }
}
