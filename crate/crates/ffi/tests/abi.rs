use std::ffi::CStr;
use std::ptr;
use tammes::graphs::{gamma13_fixtures, write_planar_code, PLANAR_CODE_HEADER};
use tammes_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(tammes_last_error(ptr::null_mut(), 0, &mut needed), TammesStatus::BufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(tammes_last_error(buf.as_mut_ptr(), buf.len(), &mut needed), TammesStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn delta13_matches_the_core_crate() {
    let (mut d, mut a) = (0.0, 0.0);
    assert_eq!(unsafe { tammes_delta13(&mut d, &mut a) }, TammesStatus::Ok);
    let (a0, d0) = tammes::cases::solve_delta13();
    assert_eq!((d, a), (d0, a0));
    assert!((d.to_degrees() - 57.1367).abs() < 1e-3);
}

#[test]
fn null_out_pointers_are_rejected() {
    let mut a = 0.0;
    assert_eq!(unsafe { tammes_delta13(ptr::null_mut(), &mut a) }, TammesStatus::NullPointer);
    assert!(last_error().contains("delta13"));
    assert_eq!(unsafe { tammes_alpha(1.0, ptr::null_mut()) }, TammesStatus::NullPointer);
}

#[test]
fn kernels_report_domain_errors() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(tammes_alpha(1.0, &mut out), TammesStatus::Ok);
        let a = out;
        assert_eq!(tammes_rho(a, 1.0, &mut out), TammesStatus::Ok);
        assert!((out - 2.0 * a).abs() < 1e-9);
        assert_eq!(tammes_alpha(-1.0, &mut out), TammesStatus::InvalidArgument);
    }
}

#[test]
fn p13_round_trips_through_the_contact_graph() {
    let mut c = [0.0f64; 39];
    unsafe {
        assert_eq!(tammes_p13_coords(c.as_mut_ptr(), 38), TammesStatus::BufferTooSmall);
        assert_eq!(tammes_p13_coords(c.as_mut_ptr(), 39), TammesStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(tammes_contact_graph(c.as_ptr(), 13, 1e-9, &mut g), TammesStatus::Ok);
        let (mut n, mut m) = (0, 0);
        assert_eq!(tammes_graph_counts(g, &mut n, &mut m), TammesStatus::Ok);
        let fixture = &gamma13_fixtures()[0].graph;
        assert_eq!((n, m), (13, fixture.num_edges()));

        let mut bytes = Vec::new();
        write_planar_code(&mut bytes, gamma13_fixtures().iter().map(|f| &f.graph)).unwrap();
        let mut set = ptr::null_mut();
        assert_eq!(tammes_graphs_parse(bytes.as_ptr(), bytes.len(), &mut set), TammesStatus::Ok);
        let mut len = 0;
        assert_eq!(tammes_graphs_len(set, &mut len), TammesStatus::Ok);
        assert_eq!(len, 4);
        let mut g0 = ptr::null_mut();
        assert_eq!(tammes_graphs_get(set, 0, &mut g0), TammesStatus::Ok);
        let mut iso = false;
        assert_eq!(tammes_graph_isomorphic(g, g0, &mut iso), TammesStatus::Ok);
        assert!(iso);
        let mut missing = ptr::null_mut();
        assert_eq!(tammes_graphs_get(set, 4, &mut missing), TammesStatus::InvalidArgument);
        assert!(missing.is_null());
        tammes_graph_free(g0);
        tammes_graph_free(g);
        tammes_graphs_free(set);
    }
}

#[test]
fn malformed_planar_code_is_a_parse_error() {
    let mut bytes = PLANAR_CODE_HEADER.to_vec();
    bytes.extend([3, 2, 9, 0]);
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { tammes_graphs_parse(bytes.as_ptr(), bytes.len(), &mut set) }, TammesStatus::ParseError);
    assert!(set.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn empty_input_gives_an_empty_report() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(tammes_prune(ptr::null(), 0, 0, 0.0, 0.0, &mut r), TammesStatus::Ok);
        let (mut parsed, mut survived) = (1, 1);
        assert_eq!(tammes_report_counts(r, &mut parsed, &mut survived), TammesStatus::Ok);
        assert_eq!((parsed, survived), (0, 0));
        let mut needed = 0;
        assert_eq!(tammes_report_json(r, ptr::null_mut(), 0, &mut needed), TammesStatus::BufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(tammes_report_json(r, buf.as_mut_ptr(), needed, &mut needed), TammesStatus::Ok);
        let s = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(s.starts_with("{\"summary\""));
        tammes_report_free(r);
    }
}

#[test]
fn prune_keeps_the_optimal_graph() {
    let mut bytes = Vec::new();
    write_planar_code(&mut bytes, [&gamma13_fixtures()[0].graph]).unwrap();
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(tammes_prune(bytes.as_ptr(), bytes.len(), 8, 0.0, 0.0, &mut r), TammesStatus::Ok);
        let mut s = false;
        assert_eq!(tammes_report_survived(r, 0, &mut s), TammesStatus::Ok);
        assert!(s);
        assert_eq!(tammes_report_survived(r, 1, &mut s), TammesStatus::InvalidArgument);
        assert_eq!(tammes_prune(bytes.as_ptr(), bytes.len(), 8, -1.0, 1.0, &mut r), TammesStatus::InvalidArgument);
        tammes_report_free(r);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        tammes_graph_free(ptr::null_mut());
        tammes_graphs_free(ptr::null_mut());
        tammes_report_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tammes.h")).unwrap();
    for f in [
        "tammes_status_message",
        "tammes_last_error",
        "tammes_delta13",
        "tammes_p13_coords",
        "tammes_alpha",
        "tammes_rho",
        "tammes_graphs_parse",
        "tammes_graphs_len",
        "tammes_graphs_get",
        "tammes_graphs_free",
        "tammes_contact_graph",
        "tammes_graph_counts",
        "tammes_graph_isomorphic",
        "tammes_graph_free",
        "tammes_prune",
        "tammes_report_counts",
        "tammes_report_survived",
        "tammes_report_json",
        "tammes_report_free",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(h.contains("typedef struct TammesReport TammesReport;"));
    assert!(h.contains("TAMMES_STATUS_PANIC = 6"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let h = concat!(env!("CARGO_MANIFEST_DIR"), "/include/tammes.h");
    let st = std::process::Command::new(cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", h]).status().unwrap();
    assert!(st.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
