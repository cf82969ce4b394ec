//! C ABI over `nexcover`.
//!
//! Graphs and selections are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`NcStatus`]; on failure a
//! message is available from [`nc_last_error`] on the same thread. Panics
//! never cross the boundary: they are reported as `NC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nexcover::baselines::CostProfile;
use nexcover::centrality::{betweenness, CostParams};
use nexcover::generators::{generate, Family, GeneratorSpec};
use nexcover::graph::Graph;
use nexcover::lp::SolverConfig;
use nexcover::select::{select_static, select_with_cost, verify_cover, NexusSet, SelectionParams};
use nexcover::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    InvalidGraph = 4,
    GenerationFailed = 5,
    SolverFailure = 6,
    BufferTooSmall = 7,
    Io = 8,
    Panic = 9,
    Parse = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcFamily {
    Tree = 0,
    ErdosRenyi = 1,
    BarabasiAlbert = 2,
    InternetAs = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcCostProfile {
    /// `1 / (deg^2 ln(1 + betweenness + eps))`
    Centrality = 0,
    /// `1 / deg^2`
    Degree = 1,
}

/// Opaque undirected graph.
pub struct NcGraph(Graph);

/// Opaque result of a selection.
pub struct NcSelection {
    set: NexusSet,
    x: Vec<f64>,
    objective: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> NcStatus {
    match err {
        Error::OutOfRange { .. } => NcStatus::OutOfRange,
        Error::InvalidGraph(_) | Error::DegenerateGraph(_) => NcStatus::InvalidGraph,
        Error::ConnectivityFailure { .. } => NcStatus::GenerationFailed,
        Error::IterationLimit { .. } => NcStatus::SolverFailure,
        Error::Io(_) | Error::Csv(_) => NcStatus::Io,
        Error::Parse { .. } => NcStatus::Parse,
        _ => NcStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), (NcStatus, String)>) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            NcStatus::Panic
        }
    }
}

fn lib(err: Error) -> (NcStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (NcStatus, String) {
    (NcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (NcStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slice<'a, T>(p: *mut T, len: usize, need: usize, what: &str) -> Result<&'a mut [T], (NcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    if len < need {
        return Err((NcStatus::BufferTooSmall, format!("{what} holds {len} entries, {need} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a graph with `n >= 1` isolated nodes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_new(n: usize, out: *mut *mut NcGraph) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = Graph::new(n).map_err(lib)?;
        *out = Box::into_raw(Box::new(NcGraph(g)));
        Ok(())
    })
}

/// Adds the undirected edge `{u, v}`. Self-loops and duplicates are errors.
///
/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_add_edge(g: *mut NcGraph, u: usize, v: usize) -> NcStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("graph"))?;
        g.0.add_edge(u, v).map_err(lib)
    })
}

/// Draws a connected random graph with the default parameters of `family`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_generate(family: NcFamily, n: usize, seed: u64, out: *mut *mut NcGraph) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = match family {
            NcFamily::Tree => Family::Tree,
            NcFamily::ErdosRenyi => Family::ErdosRenyi,
            NcFamily::BarabasiAlbert => Family::BarabasiAlbert,
            NcFamily::InternetAs => Family::InternetAs,
        };
        let g = generate(&GeneratorSpec::new(family, n, seed)).map_err(lib)?;
        *out = Box::into_raw(Box::new(NcGraph(g)));
        Ok(())
    })
}

/// Parses the text edge-list format (`n <count>` then `u v` lines).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` as for [`nc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn nc_graph_from_edge_list(text: *const c_char, out: *mut *mut NcGraph) -> NcStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let bytes = CStr::from_ptr(text).to_bytes();
        let g = Graph::read_edge_list(bytes).map_err(lib)?;
        *out = Box::into_raw(Box::new(NcGraph(g)));
        Ok(())
    })
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_node_count(g: *const NcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_edge_count(g: *const NcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Releases a graph. Null is a no-op.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_free(g: *mut NcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes unnormalised betweenness centrality into `out[0..n]`.
///
/// # Safety
/// `g` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nc_betweenness(g: *const NcGraph, out: *mut f64, len: usize) -> NcStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let dst = out_slice(out, len, g.0.node_count(), "out")?;
        dst.copy_from_slice(&betweenness(&g.0).values);
        Ok(())
    })
}

/// Solves the LP relaxation for `profile` costs, thresholds at `delta` and
/// repairs to a full cover.
///
/// # Safety
/// `g` must be a live handle; `out` as for [`nc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn nc_select(
    g: *const NcGraph,
    profile: NcCostProfile,
    delta: f64,
    out: *mut *mut NcSelection,
) -> NcStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = SelectionParams { delta, ..SelectionParams::default() };
        let solver = SolverConfig::default();
        let (set, sol) = match profile {
            NcCostProfile::Centrality => select_static(&g.0, &params, &CostParams::default(), &solver),
            NcCostProfile::Degree => CostProfile::Degree
                .costs(&g.0, &CostParams::default())
                .and_then(|c| select_with_cost(&g.0, &c, &params, &solver)),
        }
        .map_err(lib)?;
        *out = Box::into_raw(Box::new(NcSelection { set, objective: sol.objective, x: sol.x }));
        Ok(())
    })
}

/// [`nc_select`] with centrality costs.
///
/// # Safety
/// As for [`nc_select`].
#[no_mangle]
pub unsafe extern "C" fn nc_select_static(g: *const NcGraph, delta: f64, out: *mut *mut NcSelection) -> NcStatus {
    nc_select(g, NcCostProfile::Centrality, delta, out)
}

/// Number of selected nodes, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_len(s: *const NcSelection) -> usize {
    s.as_ref().map_or(0, |s| s.set.len())
}

/// Copies the sorted selected ids into `out[0..len(s)]`.
///
/// # Safety
/// `s` must be a live handle and `out` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_nodes(s: *const NcSelection, out: *mut usize, len: usize) -> NcStatus {
    guard(|| {
        let s = deref(s, "selection")?;
        out_slice(out, len, s.set.len(), "out")?.copy_from_slice(&s.set.selected);
        Ok(())
    })
}

/// Copies the fractional LP solution into `out[0..n]`.
///
/// # Safety
/// `s` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_fractional(s: *const NcSelection, out: *mut f64, len: usize) -> NcStatus {
    guard(|| {
        let s = deref(s, "selection")?;
        out_slice(out, len, s.x.len(), "out")?.copy_from_slice(&s.x);
        Ok(())
    })
}

/// Total cost of the selected set; NaN for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_total_cost(s: *const NcSelection) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.set.total_cost)
}

/// Optimal LP objective; NaN for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_objective(s: *const NcSelection) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.objective)
}

/// Whether the selection covers every node; false for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_feasible(s: *const NcSelection) -> bool {
    s.as_ref().is_some_and(|s| s.set.feasible)
}

/// Releases a selection. Null is a no-op.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nc_selection_free(s: *mut NcSelection) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Checks whether `nodes[0..len]` dominates `g`, writing the answer to `out`.
///
/// # Safety
/// `g` must be a live handle, `nodes` must hold `len` ids (or be null with
/// `len == 0`) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_verify_cover(g: *const NcGraph, nodes: *const usize, len: usize, out: *mut bool) -> NcStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let ids: &[usize] = match (nodes.is_null(), len) {
            (_, 0) => &[],
            (true, _) => return Err(null("nodes")),
            (false, _) => std::slice::from_raw_parts(nodes, len),
        };
        if let Some(&bad) = ids.iter().find(|&&v| v >= g.0.node_count()) {
            return Err(lib(Error::OutOfRange { node: bad, n: g.0.node_count() }));
        }
        *out = verify_cover(&g.0, ids);
        Ok(())
    })
}
