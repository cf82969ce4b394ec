use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nexcover_ffi::*;

fn last_error() -> String {
    let p = nc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn cycle(n: usize) -> *mut NcGraph {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(nc_graph_new(n, &mut g), NcStatus::Ok);
        for v in 0..n {
            assert_eq!(nc_graph_add_edge(g, v, (v + 1) % n), NcStatus::Ok);
        }
    }
    g
}

#[test]
fn select_on_a_cycle() {
    unsafe {
        let g = cycle(7);
        assert_eq!(nc_graph_node_count(g), 7);
        assert_eq!(nc_graph_edge_count(g), 7);
        let mut s = ptr::null_mut();
        assert_eq!(nc_select_static(g, 0.5, &mut s), NcStatus::Ok);
        let k = nc_selection_len(s);
        assert_eq!(k, 3);
        let mut ids = vec![0usize; k];
        assert_eq!(nc_selection_nodes(s, ids.as_mut_ptr(), k), NcStatus::Ok);
        let mut covered = false;
        assert_eq!(nc_verify_cover(g, ids.as_ptr(), k, &mut covered), NcStatus::Ok);
        assert!(covered && nc_selection_feasible(s));
        let mut x = vec![0.0; 7];
        assert_eq!(nc_selection_fractional(s, x.as_mut_ptr(), 7), NcStatus::Ok);
        let lp: f64 = nc_selection_objective(s);
        assert!(lp <= nc_selection_total_cost(s) + 1e-12);
        nc_selection_free(s);
        nc_graph_free(g);
    }
}

#[test]
fn degree_profile_and_betweenness() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(nc_graph_generate(NcFamily::ErdosRenyi, 40, 3, &mut g), NcStatus::Ok);
        let mut cb = vec![0.0; 40];
        assert_eq!(nc_betweenness(g, cb.as_mut_ptr(), 40), NcStatus::Ok);
        assert!(cb.iter().all(|&c| c >= 0.0));
        let mut s = ptr::null_mut();
        assert_eq!(nc_select(g, NcCostProfile::Degree, 0.5, &mut s), NcStatus::Ok);
        assert!(nc_selection_feasible(s));
        nc_selection_free(s);
        nc_graph_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(nc_graph_new(0, &mut g), NcStatus::InvalidGraph);
        assert!(g.is_null());
        assert!(last_error().contains("at least one node"));

        let g = cycle(4);
        assert_eq!(nc_graph_add_edge(g, 0, 9), NcStatus::OutOfRange);
        assert_eq!(nc_graph_add_edge(ptr::null_mut(), 0, 1), NcStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(nc_select_static(g, 1.5, &mut s), NcStatus::InvalidArgument);
        assert!(last_error().contains("delta"));
        let mut small = [0.0; 2];
        assert_eq!(nc_betweenness(g, small.as_mut_ptr(), 2), NcStatus::BufferTooSmall);
        let mut covered = true;
        assert_eq!(nc_verify_cover(g, ptr::null(), 0, &mut covered), NcStatus::Ok);
        assert!(!covered);
        nc_graph_free(g);

        nc_graph_free(ptr::null_mut());
        nc_selection_free(ptr::null_mut());
        assert_eq!(nc_graph_node_count(ptr::null()), 0);
        assert!(nc_selection_total_cost(ptr::null()).is_nan());
    }
}

#[test]
fn edge_list_text_and_version() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(nc_graph_from_edge_list(c"n 3\n0 1\n1 2\n".as_ptr(), &mut g), NcStatus::Ok);
        assert_eq!(nc_graph_edge_count(g), 2);
        nc_graph_free(g);
        let mut bad = ptr::null_mut();
        assert_eq!(nc_graph_from_edge_list(c"n 2\n0 5\n".as_ptr(), &mut bad), NcStatus::Parse);
        assert!(last_error().contains("line 2"));
        let v = CStr::from_ptr(nc_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(manifest_dir().join("include/nexcover.h")).unwrap();
    for name in [
        "typedef struct NcGraph NcGraph;",
        "NC_STATUS_SOLVER_FAILURE = 6",
        "nc_graph_new(size_t n, struct NcGraph **out)",
        "nc_select_static(",
        "nc_selection_nodes(",
        "nc_last_error(void)",
    ] {
        assert!(header.contains(name), "missing `{name}`");
    }
}

/// Compiles and runs the C example against the static library when a C
/// compiler is on the path.
#[test]
fn c_example_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let target_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_owned();
    let lib = target_dir.join("libnexcover_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("select");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest_dir().join("examples/select.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("nodes selected"));
}
