//! C interface to `pdgraph`.
//!
//! Graphs and random streams are handed out as opaque pointers that must be
//! released with the matching `*_free` function. Every fallible call returns
//! a [`PdStatus`]; on failure a description is available from
//! [`pd_last_error`]. Panics are caught at the boundary and reported as
//! `PD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pdgraph::exact::{self, LawParams};
use pdgraph::graph::{self, Graph, ModelParams, SeedSource};
use pdgraph::observables;
use pdgraph::rng::{replicate_rng, Purpose, SimRng};
use pdgraph::Error;

/// Opaque graph handle.
pub struct PdGraph(Graph);

/// Opaque random stream handle.
pub struct PdRng(SimRng);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SeedGraph = 3,
    Numerical = 4,
    /// The quantity is undefined for this input (e.g. transitivity without 2-stars).
    Undefined = 5,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 6,
    Overflow = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> PdStatus {
    match err {
        Error::DisconnectedSeed
        | Error::SeedTooSmall(_)
        | Error::VertexOutOfRange { .. }
        | Error::SelfLoop(_)
        | Error::Parse { .. }
        | Error::UnknownSeed(_) => PdStatus::SeedGraph,
        Error::Numerical(_) => PdStatus::Numerical,
        _ => PdStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F>(f: F) -> PdStatus
where
    F: FnOnce() -> Result<(), (PdStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside pdgraph");
            PdStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (PdStatus, String)>;
}

impl<T> IntoFfi<T> for pdgraph::Result<T> {
    fn ffi(self) -> Result<T, (PdStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (PdStatus, String) {
    (PdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const PdGraph) -> Result<&'a Graph, (PdStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (PdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL,
/// or 0 when there is no error.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn pd_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a seed graph from a built-in name such as `"k3"`, `"cycle(4)"`,
/// `"path(2)"`, `"star(5)"` or from an edge-list file path.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_new_seed(
    name: *const c_char,
    allow_disconnected: bool,
    out: *mut *mut PdGraph,
) -> PdStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (PdStatus::InvalidArgument, "name is not UTF-8".to_string()))?;
        let spec = name.parse::<SeedSource>().and_then(|s| s.resolve()).ffi()?;
        let g = graph::build_seed(&spec, allow_disconnected).ffi()?;
        write_out(out, Box::into_raw(Box::new(PdGraph(g))))
    })
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must hold `2 * edge_count` values (or be null when `edge_count` is 0).
#[no_mangle]
pub unsafe extern "C" fn pd_graph_from_edges(
    n: usize,
    edges: *const u32,
    edge_count: usize,
    allow_disconnected: bool,
    out: *mut *mut PdGraph,
) -> PdStatus {
    guard(|| {
        let flat: &[u32] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(usize, usize)> = flat
            .chunks_exact(2)
            .map(|c| (c[0] as usize, c[1] as usize))
            .collect();
        if n < 2 {
            return Err((PdStatus::SeedGraph, Error::SeedTooSmall(n).to_string()));
        }
        let g = Graph::from_edges(n, &pairs).ffi()?;
        if !allow_disconnected && !g.is_connected() {
            return Err((PdStatus::SeedGraph, Error::DisconnectedSeed.to_string()));
        }
        write_out(out, Box::into_raw(Box::new(PdGraph(g))))
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_clone(g: *const PdGraph, out: *mut *mut PdGraph) -> PdStatus {
    guard(|| {
        let copy = graph_ref(g)?.clone();
        write_out(out, Box::into_raw(Box::new(PdGraph(copy))))
    })
}

/// # Safety
/// `g` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_free(g: *mut PdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_vertex_count(g: *const PdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_edge_count(g: *const PdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_degree(g: *const PdGraph, v: usize, out: *mut usize) -> PdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if v >= g.vertex_count() {
            return Err((
                PdStatus::InvalidArgument,
                format!("vertex {v} out of range"),
            ));
        }
        write_out(out, g.degree(v))
    })
}

/// Stream `replicate` of the run seeded with `master_seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_rng_new(
    master_seed: u64,
    replicate: u64,
    out: *mut *mut PdRng,
) -> PdStatus {
    guard(|| {
        let rng = replicate_rng(master_seed, Purpose::Growth, replicate);
        write_out(out, Box::into_raw(Box::new(PdRng(rng))))
    })
}

/// # Safety
/// `rng` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pd_rng_free(rng: *mut PdRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

unsafe fn step_inputs<'a>(
    g: *mut PdGraph,
    p: f64,
    rng: *mut PdRng,
) -> Result<(&'a mut Graph, &'a mut SimRng), (PdStatus, String)> {
    if !(0.0..=1.0).contains(&p) {
        return Err((
            PdStatus::InvalidArgument,
            format!("p = {p} is not in [0, 1]"),
        ));
    }
    let g = g.as_mut().ok_or_else(|| null("graph"))?;
    let rng = rng.as_mut().ok_or_else(|| null("rng"))?;
    Ok((&mut g.0, &mut rng.0))
}

/// One duplication step; writes the id of the new vertex to `out_vertex`
/// (which may be null).
///
/// # Safety
/// `g` and `rng` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn pd_duplicate_step(
    g: *mut PdGraph,
    p: f64,
    rng: *mut PdRng,
    out_vertex: *mut usize,
) -> PdStatus {
    guard(|| {
        let (g, rng) = step_inputs(g, p, rng)?;
        let v = graph::duplicate_step(g, p, rng);
        if !out_vertex.is_null() {
            out_vertex.write(v);
        }
        Ok(())
    })
}

/// Grows `g` until it has `n_target` vertices.
///
/// # Safety
/// `g` and `rng` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn pd_grow_to(
    g: *mut PdGraph,
    p: f64,
    n_target: usize,
    rng: *mut PdRng,
) -> PdStatus {
    guard(|| {
        let (g, rng) = step_inputs(g, p, rng)?;
        let mut params = ModelParams::new(p, graph::SeedSpec::Complete(2), n_target);
        params.checkpoints.clear();
        graph::grow_to(g, &params, rng, |_| {}).ffi()
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_count_cliques(g: *const PdGraph, k: usize, out: *mut u64) -> PdStatus {
    guard(|| {
        let c = observables::count_cliques(graph_ref(g)?, k).ffi()?;
        write_out(out, c)
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_count_stars(g: *const PdGraph, k: usize, out: *mut u64) -> PdStatus {
    guard(|| {
        let hist = observables::degree_histogram(graph_ref(g)?);
        let s = observables::count_stars(&hist, k);
        let s = u64::try_from(s)
            .map_err(|_| (PdStatus::Overflow, format!("S_{k} = {s} exceeds 64 bits")))?;
        write_out(out, s)
    })
}

/// Degree generating function `Σ_k F_k/n q^k`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_degree_pgf(g: *const PdGraph, q: f64, out: *mut f64) -> PdStatus {
    guard(|| {
        if !(0.0..=1.0).contains(&q) {
            return Err((
                PdStatus::InvalidArgument,
                format!("q = {q} is not in [0, 1]"),
            ));
        }
        write_out(out, observables::degree_histogram(graph_ref(g)?).pgf(q))
    })
}

/// `6 C_3 / S_2`; returns `PD_STATUS_UNDEFINED` when the graph has no 2-stars.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_transitivity(g: *const PdGraph, out: *mut f64) -> PdStatus {
    guard(|| match observables::transitivity(graph_ref(g)?) {
        Some(t) => write_out(out, t),
        None => Err((PdStatus::Undefined, "graph has no 2-stars".to_string())),
    })
}

unsafe fn law_of(seed: *const PdGraph, p: f64) -> Result<LawParams, (PdStatus, String)> {
    LawParams::from_graph(graph_ref(seed)?, p).ffi()
}

/// `E[C_k(n)]` for growth from `seed`.
///
/// # Safety
/// `seed` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_expected_cliques(
    seed: *const PdGraph,
    p: f64,
    k: usize,
    n: usize,
    out: *mut f64,
) -> PdStatus {
    guard(|| {
        let v = exact::expected_cliques(&law_of(seed, p)?, k, n).ffi()?;
        write_out(out, v)
    })
}

/// `E[S_k(n)]` for growth from `seed`.
///
/// # Safety
/// `seed` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_expected_stars(
    seed: *const PdGraph,
    p: f64,
    k: usize,
    n: usize,
    out: *mut f64,
) -> PdStatus {
    guard(|| {
        let v = exact::expected_stars(&law_of(seed, p)?, k, n).ffi()?;
        write_out(out, v)
    })
}

/// Law of the degree at size `n` of a vertex with degree `a` at size `n0`.
/// `pmf[i]` receives `P(D = a + i)` for `i < n − n0 + 1`; the number of
/// entries is written to `written`. If `len` is too small nothing is copied,
/// the required length goes to `written` and `PD_STATUS_BUFFER_TOO_SMALL`
/// is returned.
///
/// # Safety
/// `pmf` must be valid for `len` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_degree_law(
    n0: usize,
    a: usize,
    p: f64,
    n: usize,
    pmf: *mut f64,
    len: usize,
    written: *mut usize,
) -> PdStatus {
    guard(|| {
        let law = exact::degree_law(n0, a, p, n).ffi()?;
        write_out(written, law.pmf.len())?;
        if len < law.pmf.len() {
            return Err((
                PdStatus::BufferTooSmall,
                format!("need {} entries", law.pmf.len()),
            ));
        }
        if pmf.is_null() {
            return Err(null("pmf"));
        }
        ptr::copy_nonoverlapping(law.pmf.as_ptr(), pmf, law.pmf.len());
        Ok(())
    })
}

/// The root of `p e^p = 1`.
#[no_mangle]
pub extern "C" fn pd_p_star() -> f64 {
    exact::p_star()
}

/// `E[X_∞^k]` of the dual process; requires `p > p*`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_x_moment(p: f64, k: usize, out: *mut f64) -> PdStatus {
    guard(|| {
        let v = exact::x_moment(p, k).ffi()?;
        write_out(out, v)
    })
}

/// Logistic flow of the dual process for time `s` from `x`.
#[no_mangle]
pub extern "C" fn pd_flow(x: f64, p: f64, s: f64) -> f64 {
    pdgraph::pdmp::flow(x, p, s)
}
