//! C interface to `afmlab`.
//!
//! Graphs and models are opaque handles created by `afm_*_new`/`afm_graph_*`
//! constructors and released with the matching `_free`. Every fallible call
//! returns an [`AfmStatus`]; on failure [`afm_last_error`] describes the
//! error on the calling thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use afmlab::bounds::clique_bound_log;
use afmlab::graph::NamedKind;
use afmlab::partition::{hom_count, z2, z_log, z_recurrence, zq, ActivityMatrix};
use afmlab::spectral::{eigenvalues, is_antiferromagnetic};
use afmlab::verify::check_thm_main;
use afmlab::{Error, SimpleGraph, WeightedModel};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidEdge = 2,
    DuplicateEdge = 3,
    VertexOutOfRange = 4,
    TooLarge = 5,
    InvalidParameter = 6,
    LengthMismatch = 7,
    ResourceExhausted = 8,
    NumericalFailure = 9,
    DivergenceSuspected = 10,
    InternalInconsistency = 11,
    NotAntiferromagnetic = 12,
    Asymmetry = 13,
    NegativeWeight = 14,
    Parse = 15,
    Io = 16,
    BufferTooSmall = 17,
    Panic = 18,
}

impl From<&Error> for AfmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidEdge(_) => AfmStatus::InvalidEdge,
            Error::DuplicateEdge(..) => AfmStatus::DuplicateEdge,
            Error::VertexOutOfRange { .. } => AfmStatus::VertexOutOfRange,
            Error::TooLarge { .. } => AfmStatus::TooLarge,
            Error::InvalidParameter(_) => AfmStatus::InvalidParameter,
            Error::LengthMismatch { .. } => AfmStatus::LengthMismatch,
            Error::ResourceExhausted(_) => AfmStatus::ResourceExhausted,
            Error::NumericalFailure(_) => AfmStatus::NumericalFailure,
            Error::DivergenceSuspected(_) => AfmStatus::DivergenceSuspected,
            Error::InternalInconsistency(_) => AfmStatus::InternalInconsistency,
            Error::NotAntiferromagnetic { .. } => AfmStatus::NotAntiferromagnetic,
            Error::Asymmetry { .. } => AfmStatus::Asymmetry,
            Error::NegativeWeight { .. } => AfmStatus::NegativeWeight,
            Error::Parse { .. } => AfmStatus::Parse,
            Error::AtLine { source, .. } => AfmStatus::from(source.as_ref()),
            Error::Io(_) => AfmStatus::Io,
        }
    }
}

/// Named graph families accepted by [`afm_graph_named`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfmNamedKind {
    /// `K_size`
    Clique = 0,
    /// Path with `size` edges.
    Path = 1,
    /// `C_size`, `size >= 3`
    Cycle = 2,
    /// `size` isolated vertices.
    Empty = 3,
}

/// Opaque simple graph.
pub struct AfmGraph(SimpleGraph);

/// Opaque symmetric nonnegative weight matrix.
pub struct AfmModel(WeightedModel);

/// Summary of a clique-bound check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AfmReport {
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub slack: f64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Lib(Error),
    Status(AfmStatus, &'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> AfmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            AfmStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            AfmStatus::from(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside afmlab");
            AfmStatus::Panic
        }
    }
}

const NULL: Failure = Failure::Status(AfmStatus::NullPointer, "null pointer argument");

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(NULL)
}

unsafe fn as_slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(NULL);
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(NULL);
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn afm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn afm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_graph_from_edges(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut AfmGraph,
) -> AfmStatus {
    guard(|| {
        let flat = as_slice(edges, m.checked_mul(2).ok_or(NULL)?)?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = SimpleGraph::from_edge_list(n, &pairs)?;
        write_out(out, Box::into_raw(Box::new(AfmGraph(g))))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_graph_named(kind: AfmNamedKind, size: usize, out: *mut *mut AfmGraph) -> AfmStatus {
    guard(|| {
        let kind = match kind {
            AfmNamedKind::Clique => NamedKind::Clique,
            AfmNamedKind::Path => NamedKind::PathEdges,
            AfmNamedKind::Cycle => NamedKind::Cycle,
            AfmNamedKind::Empty => NamedKind::Empty,
        };
        let g = SimpleGraph::make_named(kind, size)?;
        write_out(out, Box::into_raw(Box::new(AfmGraph(g))))
    })
}

/// # Safety
/// `g` must come from a graph constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn afm_graph_free(g: *mut AfmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_graph_vertex_count(g: *const AfmGraph, out: *mut usize) -> AfmStatus {
    guard(|| write_out(out, as_ref(g)?.0.vertex_count()))
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_graph_max_degree(g: *const AfmGraph, out: *mut usize) -> AfmStatus {
    guard(|| write_out(out, as_ref(g)?.0.max_degree()))
}

/// `Z_G(lambda)` with one activity per vertex.
///
/// # Safety
/// `acts` must hold `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_z(g: *const AfmGraph, acts: *const f64, len: usize, out: *mut f64) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        write_out(out, z_recurrence(g, as_slice(acts, len)?)?)
    })
}

/// `log Z_G(lambda)`, summed over components.
///
/// # Safety
/// As for [`afm_z`].
#[no_mangle]
pub unsafe extern "C" fn afm_z_log(g: *const AfmGraph, acts: *const f64, len: usize, out: *mut f64) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        write_out(out, z_log(g, as_slice(acts, len)?)?)
    })
}

/// Two-colour partition function `Z^(2)_G(lambda, mu)`.
///
/// # Safety
/// `lam` and `mu` must each hold `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_z2(
    g: *const AfmGraph,
    lam: *const f64,
    mu: *const f64,
    len: usize,
    out: *mut f64,
) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        write_out(out, z2(g, as_slice(lam, len)?, as_slice(mu, len)?)?)
    })
}

/// `Z^(q)_G` with activities as `q` rows of `n` values, row-major.
///
/// # Safety
/// `acts` must hold `q * n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_zq(g: *const AfmGraph, acts: *const f64, q: usize, n: usize, out: *mut f64) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        let flat = as_slice(acts, q.checked_mul(n).ok_or(NULL)?)?;
        let rows = if n == 0 { vec![Vec::new(); q] } else { flat.chunks_exact(n).map(<[f64]>::to_vec).collect() };
        write_out(out, zq(g, &ActivityMatrix::new(rows)?)?)
    })
}

/// `sum_v log(1 + (d_v+1) lambda_v) / (d_v+1)`.
///
/// # Safety
/// As for [`afm_z`].
#[no_mangle]
pub unsafe extern "C" fn afm_clique_bound_log(
    g: *const AfmGraph,
    acts: *const f64,
    len: usize,
    out: *mut f64,
) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        write_out(out, clique_bound_log(g, as_slice(acts, len)?)?)
    })
}

/// Compares `log Z_G` against the clique bound.
///
/// # Safety
/// As for [`afm_z`], with `out` a writable report.
#[no_mangle]
pub unsafe extern "C" fn afm_check_thm_main(
    g: *const AfmGraph,
    acts: *const f64,
    len: usize,
    out: *mut AfmReport,
) -> AfmStatus {
    guard(|| {
        let g = &as_ref(g)?.0;
        let r = check_thm_main(g, as_slice(acts, len)?)?;
        write_out(out, AfmReport { lhs_log: r.lhs_log, rhs_log: r.rhs_log, slack: r.slack, pass: r.pass })
    })
}

/// Builds a `q x q` model from row-major weights; asymmetry up to `1e-12` is averaged out.
///
/// # Safety
/// `weights` must hold `q * q` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_model_new(q: usize, weights: *const f64, out: *mut *mut AfmModel) -> AfmStatus {
    guard(|| {
        let w = as_slice(weights, q.checked_mul(q).ok_or(NULL)?)?;
        let m = WeightedModel::with_symmetry_tolerance(q, w.to_vec(), 1e-12)?;
        write_out(out, Box::into_raw(Box::new(AfmModel(m))))
    })
}

/// # Safety
/// `m` must come from [`afm_model_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn afm_model_free(m: *mut AfmModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Eigenvalues in descending order. Writes `q` values into `out` when
/// `cap >= q`; `written` always receives `q`.
///
/// # Safety
/// `out` must have room for `cap` values; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_model_eigenvalues(
    m: *const AfmModel,
    out: *mut f64,
    cap: usize,
    written: *mut usize,
) -> AfmStatus {
    guard(|| {
        let spectrum = eigenvalues(&as_ref(m)?.0)?;
        let values = &spectrum.eigenvalues;
        write_out(written, values.len())?;
        if cap < values.len() {
            return Err(Failure::Status(AfmStatus::BufferTooSmall, "eigenvalue buffer too small"));
        }
        if out.is_null() {
            return Err(NULL);
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        Ok(())
    })
}

/// Exactly one positive eigenvalue.
///
/// # Safety
/// `m` must be a live model handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_model_is_antiferromagnetic(m: *const AfmModel, out: *mut bool) -> AfmStatus {
    guard(|| write_out(out, is_antiferromagnetic(&as_ref(m)?.0)?.antiferromagnetic))
}

/// Weighted homomorphism count `hom(G, H)`.
///
/// # Safety
/// `g` and `m` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afm_hom_count(g: *const AfmGraph, m: *const AfmModel, out: *mut f64) -> AfmStatus {
    guard(|| write_out(out, hom_count(&as_ref(g)?.0, &as_ref(m)?.0)?))
}
