use std::ffi::{CStr, CString};
use std::ptr;

use flagherm_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn space(name: &str) -> *mut FhSpace {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fh_space_new(c(name).as_ptr(), &mut out) }, FhStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take(s: *mut std::ffi::c_char) -> String {
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { fh_string_free(s) };
    v
}

#[test]
fn counts() {
    for (name, summands, triples) in [("su3-full", 3, 2), ("cp3", 2, 2), ("su4-full", 6, 8), ("g2-u2", 2, 4), ("g2-full", 6, 10)] {
        let s = space(name);
        unsafe {
            assert_eq!(fh_space_summand_count(s), summands);
            assert_eq!(fh_space_triple_count(s), triples);
            fh_space_free(s);
        }
    }
    assert_eq!(unsafe { fh_space_summand_count(ptr::null()) }, 0);
}

#[test]
fn unknown_space_sets_message() {
    let mut out = ptr::null_mut();
    let st = unsafe { fh_space_new(c("su5").as_ptr(), &mut out) };
    assert_eq!(st, FhStatus::UnknownSpace);
    assert!(out.is_null());
    let msg = unsafe { CStr::from_ptr(fh_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("su5"), "{msg}");
}

#[test]
fn report_values_su3_nearly_kahler() {
    let s = space("su3-full");
    let mut v = FhReportValues::default();
    let st = unsafe { fh_report_values(s, c("1,1,1").as_ptr(), c("+,+,-").as_ptr(), &mut v) };
    assert_eq!(st, FhStatus::Ok);
    assert_eq!(v.s, 2.5);
    assert_eq!(v.s1, 0.0);
    assert_eq!(v.gh_class, 1);
    assert!(v.defect < 0.0);
    unsafe { fh_space_free(s) };
}

#[test]
fn report_json_and_errors() {
    let s = space("cp3");
    let mut out = ptr::null_mut();
    let st = unsafe { fh_report_json(s, c("1,2").as_ptr(), c("+,+").as_ptr(), &mut out) };
    assert_eq!(st, FhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["defect"]["num"], "0");
    assert_eq!(v["gh_class"]["code"], "Kahler");

    let mut out = ptr::null_mut();
    let st = unsafe { fh_report_json(s, c("1,2,3").as_ptr(), c("+,+").as_ptr(), &mut out) };
    assert_eq!(st, FhStatus::Arity);
    assert!(out.is_null());
    let st = unsafe { fh_report_json(s, c("1,-2").as_ptr(), c("+,+").as_ptr(), &mut out) };
    assert_eq!(st, FhStatus::InvalidMetric);
    let st = unsafe { fh_report_json(s, ptr::null(), c("+,+").as_ptr(), &mut out) };
    assert_eq!(st, FhStatus::NullPointer);
    unsafe { fh_space_free(s) };
}

#[test]
fn solve_json_fourth_root_of_five() {
    let s = space("su4-full");
    let mut out = ptr::null_mut();
    let st = unsafe {
        fh_solve_json(s, c("-,+,+,-,+,+").as_ptr(), c("x^2,x^2,1,x^2,1,1").as_ptr(), c("x").as_ptr(), 1e-10, &mut out)
    };
    assert_eq!(st, FhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["kind"], "IsolatedRoots");
    let x: f64 = v["roots"][0]["decimal"].as_str().unwrap().parse().unwrap();
    assert_eq!(v["roots"][0]["exact"]["expr"], "sqrt(sqrt(5))");
    assert!((x - 5f64.powf(0.25)).abs() < 1e-10, "{x}");

    let st = unsafe { fh_solve_json(s, c("-,+,+,-,+,+").as_ptr(), c("x^2,x^2,1,x^2,1,1").as_ptr(), c("x").as_ptr(), -1.0, &mut out) };
    assert_eq!(st, FhStatus::Domain);
    unsafe { fh_space_free(s) };
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/flagherm.h")).unwrap();
    for sym in ["fh_space_new", "fh_space_free", "fh_report_json", "fh_report_values", "fh_solve_json", "fh_last_error_message", "fh_string_free", "FhReportValues", "FH_STATUS_OK"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let src = std::env::temp_dir().join(format!("flagherm_abi_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"flagherm.h\"\nint main(void) { FhSpace *s = 0; FhReportValues v; (void)v;\n\
         return fh_space_new(\"cp3\", &s) == FH_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let _ = std::fs::remove_file(&src);
    assert!(status.success());
}
