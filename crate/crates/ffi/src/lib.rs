//! C ABI for the `coprimality` crate.
//!
//! Graphs cross the boundary as opaque `CpGraph` handles. Every fallible call
//! returns a `CpStatus`; on failure a message is available from
//! [`cp_last_error_message`] on the same thread. Exact integers that may not
//! fit 64 bits (counts, coefficients, `f` values) are returned as decimal
//! strings allocated here and released with [`cp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coprimality::counting::{count, count_both, Method};
use coprimality::multiplicative::ArithmeticError;
use coprimality::{
    compute_poly, density, f_enumerate, f_multiplicative, parse_graph, Error, Graph,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    GraphError = 4,
    PolynomialError = 5,
    ArithmeticError = 6,
    DensityError = 7,
    CountError = 8,
    Inconsistent = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpMethod {
    Bruteforce = 0,
    Moebius = 1,
    /// Run both counters and fail unless they agree.
    Both = 2,
}

/// Opaque graph handle.
pub struct CpGraph {
    graph: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CpDensity {
    pub value: f64,
    pub prime_bound: u64,
    pub tail_bound: f64,
    pub float_budget: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: CpStatus, message: impl Into<String>) -> CpStatus {
    set_last_error(message.into());
    status
}

fn status_of(err: &Error) -> CpStatus {
    match err {
        Error::Graph(_) => CpStatus::GraphError,
        Error::Poly(_) => CpStatus::PolynomialError,
        Error::Arithmetic(_) => CpStatus::ArithmeticError,
        Error::Density(_) => CpStatus::DensityError,
        Error::Count(_) => CpStatus::CountError,
        Error::Io(_) | Error::Inconsistent(_) => CpStatus::Inconsistent,
    }
}

/// Runs `body`, mapping errors and panics onto status codes.
fn guarded(body: impl FnOnce() -> Result<(), (CpStatus, String)>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err((status, message))) => fail(status, message),
        Err(_) => fail(CpStatus::Panic, "internal panic"),
    }
}

fn lift<T, E: Into<Error>>(result: Result<T, E>) -> Result<T, (CpStatus, String)> {
    result.map_err(|e| {
        let e = e.into();
        (status_of(&e), e.to_string())
    })
}

unsafe fn graph_ref<'a>(graph: *const CpGraph) -> Result<&'a Graph, (CpStatus, String)> {
    // SAFETY: caller passes a handle from `cp_graph_parse` that has not been freed, or NULL.
    unsafe { graph.as_ref() }
        .map(|h| &h.graph)
        .ok_or((CpStatus::NullPointer, "graph handle is NULL".to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> Result<(), (CpStatus, String)> {
    if out.is_null() {
        return Err((CpStatus::NullPointer, "output pointer is NULL".to_string()));
    }
    let c = CString::new(value).map_err(|e| (CpStatus::Inconsistent, e.to_string()))?;
    // SAFETY: `out` is non-null and points to writable storage per the caller contract.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Parses a graph in the text format (vertex count line, then `r s` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must point to writable storage
/// for one pointer. On success `*out` owns a handle to release with [`cp_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_graph_parse(text: *const c_char, out: *mut *mut CpGraph) -> CpStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return Err((
                CpStatus::NullPointer,
                "text or output pointer is NULL".to_string(),
            ));
        }
        // SAFETY: non-null and NUL-terminated per the contract above.
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|e| (CpStatus::InvalidUtf8, e.to_string()))?;
        let graph = lift(parse_graph(text))?;
        // SAFETY: `out` is non-null and writable.
        unsafe { *out = Box::into_raw(Box::new(CpGraph { graph })) };
        Ok(())
    })
}

/// Releases a handle from [`cp_graph_parse`]. NULL is ignored.
///
/// # Safety
/// `graph` must be NULL or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_graph_free(graph: *mut CpGraph) {
    if !graph.is_null() {
        // SAFETY: produced by Box::into_raw in cp_graph_parse and not yet freed.
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_graph_vertex_count(graph: *const CpGraph) -> usize {
    unsafe { graph_ref(graph) }.map_or(0, Graph::vertex_count)
}

/// Number of edges, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_graph_edge_count(graph: *const CpGraph) -> usize {
    unsafe { graph_ref(graph) }.map_or(0, Graph::edge_count)
}

/// Maximum vertex degree, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_graph_max_degree(graph: *const CpGraph) -> usize {
    unsafe { graph_ref(graph) }.map_or(0, Graph::max_degree)
}

/// Coefficients `c_0..c_v` of `Q_G` (`is_signed`) or `Q_G^+` as a comma-separated
/// decimal list, e.g. `"1,0,-3,2"`.
///
/// # Safety
/// `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_poly_coefficients(
    graph: *const CpGraph,
    is_signed: bool,
    out: *mut *mut c_char,
) -> CpStatus {
    guarded(|| {
        let g = unsafe { graph_ref(graph) }?;
        let poly = lift(compute_poly(g, is_signed))?;
        let text: Vec<String> = poly.coefficients().iter().map(i128::to_string).collect();
        unsafe { write_string(out, text.join(",")) }
    })
}

/// Truncated Euler product for the density, primes up to `prime_bound`.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_density(
    graph: *const CpGraph,
    prime_bound: u64,
    out: *mut CpDensity,
) -> CpStatus {
    guarded(|| {
        let g = unsafe { graph_ref(graph) }?;
        if out.is_null() {
            return Err((CpStatus::NullPointer, "output pointer is NULL".to_string()));
        }
        let est = lift(density(g, prime_bound))?;
        // SAFETY: non-null and writable per the contract.
        unsafe {
            *out = CpDensity {
                value: est.value,
                prime_bound: est.prime_bound,
                tail_bound: est.tail_bound,
                float_budget: est.float_budget,
            }
        };
        Ok(())
    })
}

/// Exact `g(x)` as a decimal string. `threads = 0` is treated as 1.
///
/// # Safety
/// `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_count(
    graph: *const CpGraph,
    x: u64,
    method: CpMethod,
    threads: u32,
    out: *mut *mut c_char,
) -> CpStatus {
    guarded(|| {
        let g = unsafe { graph_ref(graph) }?;
        let threads = threads.max(1) as usize;
        let result = match method {
            CpMethod::Bruteforce => count(g, x, Method::Bruteforce, threads),
            CpMethod::Moebius => count(g, x, Method::Moebius, threads),
            CpMethod::Both => count_both(g, x, threads),
        };
        let result = lift(result)?;
        unsafe { write_string(out, result.count.to_string()) }
    })
}

/// `f_G(m)` (`is_signed`) or `f_G^+(m)` as a decimal string. Uses enumeration
/// when feasible and checks it against the multiplicative formula.
///
/// # Safety
/// `graph` must be a live handle and `out` writable; free `*out` with [`cp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_f(
    graph: *const CpGraph,
    m: u64,
    is_signed: bool,
    out: *mut *mut c_char,
) -> CpStatus {
    guarded(|| {
        let g = unsafe { graph_ref(graph) }?;
        if m == 0 {
            return Err((CpStatus::InvalidArgument, "m must be positive".to_string()));
        }
        let multiplicative = compute_poly(g, is_signed)
            .map_err(Error::from)
            .and_then(|poly| f_multiplicative(&poly, m).map_err(Error::from));
        let value = match (f_enumerate(g, m, is_signed), multiplicative) {
            (Ok(a), Ok(b)) if a != b => {
                return Err((
                    CpStatus::Inconsistent,
                    format!("f({m}): enumeration {a} != multiplicative {b}"),
                ))
            }
            (Ok(a), _) => a,
            (Err(ArithmeticError::Infeasible { .. }), Ok(b)) => b,
            (Err(e), _) => return Err(lift::<(), _>(Err(e)).unwrap_err()),
        };
        unsafe { write_string(out, value.to_string()) }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in write_string.
        drop(unsafe { CString::from_raw(s) });
    }
}
