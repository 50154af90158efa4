use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tempgibbs_ffi::*;

fn last_error() -> String {
    let p = tg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generate(kind: &str) -> *mut TgGraph {
    let kind = CString::new(kind).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { tg_graph_generate(kind.as_ptr(), &mut g) }, TgStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn graph_handles() {
    let edges = [0usize, 1, 1, 2, 2, 3];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(tg_graph_new(5, edges.as_ptr(), 3, &mut g), TgStatus::Ok);
        assert_eq!(tg_graph_vertex_count(g), 5);
        assert_eq!(tg_graph_edge_count(g), 3);
        let mut d = 0;
        assert_eq!(tg_graph_degree(g, 1, &mut d), TgStatus::Ok);
        assert_eq!(d, 2);
        assert_eq!(tg_graph_distance(g, 0, 3, &mut d), TgStatus::Ok);
        assert_eq!(d, 3);
        assert_eq!(tg_graph_distance(g, 0, 4, &mut d), TgStatus::Unreachable);
        assert!(last_error().contains("unreachable"));
        assert_eq!(tg_graph_degree(g, 9, &mut d), TgStatus::VertexOutOfRange);
        // A successful call clears the message.
        assert_eq!(tg_graph_degree(g, 0, &mut d), TgStatus::Ok);
        assert!(tg_last_error().is_null());
        tg_graph_free(g);
        tg_graph_free(ptr::null_mut());
        assert_eq!(tg_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn bad_inputs_are_reported() {
    let mut g = ptr::null_mut();
    let mut d = 0;
    unsafe {
        let looped = [2usize, 2];
        assert_eq!(tg_graph_new(3, looped.as_ptr(), 1, &mut g), TgStatus::InvalidArgument);
        assert_eq!(tg_graph_new(3, ptr::null(), 1, &mut g), TgStatus::NullPointer);
        assert_eq!(tg_graph_degree(ptr::null(), 0, &mut d), TgStatus::NullPointer);
        let text = CString::new("0 1\n1 2 3\n").unwrap();
        assert_eq!(tg_graph_parse_edge_list(text.as_ptr(), &mut g), TgStatus::Parse);
        assert!(last_error().contains("line 2"));
        let mut x = 0.0;
        assert_eq!(tg_mean_kappa(7, 1.0, 0.1, &mut x), TgStatus::InvalidArgument);
        assert_eq!(
            tg_mean_kappa(TgFamily::Exponential as i32, 8.0, 2.0, &mut x),
            TgStatus::MomentExplosion
        );
        assert_eq!(
            tg_beta_star(TgFamily::Constant as i32, 0.0, 1.0, 1e-9, &mut x),
            TgStatus::TargetUnreachable
        );
    }
}

#[test]
fn named_edge_lists_parse() {
    let text = CString::new("a b\nb c\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(tg_graph_parse_edge_list(text.as_ptr(), &mut g), TgStatus::Ok);
        let mut d = 0;
        assert_eq!(tg_graph_degree(g, 1, &mut d), TgStatus::Ok);
        assert_eq!(d, 2);
        tg_graph_free(g);
    }
}

#[test]
fn temperedness_and_certificate() {
    let g = generate("growing-tree:4");
    let radii = [1usize, 2, 3];
    let mut t = TgTemperedness {
        gamma: 0.0,
        verdict: TgVerdict::Inconclusive,
        witness_size: 0,
        witness_average: 0.0,
    };
    unsafe {
        let st = tg_check_tempered(g, TgGrowth::Log as i32, 0, radii.as_ptr(), 3, 2f64.ln(), 0, &mut t);
        assert_eq!(st, TgStatus::Ok);
        tg_graph_free(g);
    }
    assert_eq!(t.verdict, TgVerdict::Failed);
    assert!(t.witness_size > 0 && t.witness_average > 2f64.ln());

    let mut c = TgCertificate {
        kappa: 0.0,
        product: 0.0,
        beta_star: 0.0,
        certified: false,
        tail_bound: 0.0,
    };
    let st = unsafe { tg_certificate(2f64.ln(), TgFamily::Constant as i32, 1.0, 0.05, 10, &mut c) };
    assert_eq!(st, TgStatus::Ok);
    assert!(c.certified);
    assert!((c.kappa - 0.2f64.exp_m1()).abs() < 1e-15);
    assert!((c.tail_bound - c.product.powi(10) / (1.0 - c.product)).abs() < 1e-18);
    assert!((c.beta_star - 1.5f64.ln() / 4.0).abs() < 1e-10);

    let mut b = 0.0;
    let st = unsafe { tg_beta_star(TgFamily::Exponential as i32, 8.0, 2f64.ln(), 1e-12, &mut b) };
    assert_eq!(st, TgStatus::Ok);
    assert!((b - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn lemma_through_the_abi() {
    let g = generate("grid:3x3");
    let vol = [1usize, 3, 4, 5, 7];
    let mut l = TgLemma {
        lhs: 0.0,
        rhs: 0.0,
        paths: 0,
        holds: false,
    };
    unsafe {
        let st = tg_verify_lemma27(
            g,
            vol.as_ptr(),
            vol.len(),
            4,
            TgModel::ThreePoint as i32,
            TgFamily::Exponential as i32,
            8.0,
            true,
            3,
            0.4,
            &mut l,
        );
        assert_eq!(st, TgStatus::Ok, "{}", last_error());
        assert!(l.holds && l.lhs <= l.rhs + 1e-9 && l.lhs > 0.0);
        assert_eq!(l.paths, 4);
        let st = tg_verify_lemma27(g, vol.as_ptr(), vol.len(), 1, 0, 0, 8.0, false, 0, 0.4, &mut l);
        assert_eq!(st, TgStatus::NotInterior);
        tg_graph_free(g);
    }
}

fn find_static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    for dir in [deps, deps.parent().unwrap()] {
        let p = dir.join("libtempgibbs_ffi.a");
        if p.exists() {
            return p;
        }
    }
    panic!("libtempgibbs_ffi.a not found next to {}", exe.display());
}

#[test]
fn c_program_links_against_the_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(find_static_lib())
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let b: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((b - 2.0 / 3.0).abs() < 1e-10, "{text}");
}
