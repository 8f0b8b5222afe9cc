use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tmzv_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tmzv_last_error()) }.to_str().unwrap().to_string()
}

fn expand(src: &str) -> Result<*mut TmzvElement, TmzvStatus> {
    let c = CString::new(src).unwrap();
    let mut out = ptr::null_mut();
    match unsafe { tmzv_expand(c.as_ptr(), &mut out) } {
        TmzvStatus::Ok => Ok(out),
        s => Err(s),
    }
}

fn render(e: *const TmzvElement) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tmzv_element_to_string(e, &mut s) }, TmzvStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { tmzv_string_free(s) };
    text
}

#[test]
fn expand_and_render() {
    let e = expand("z(1) tst z(1)").unwrap();
    assert_eq!(render(e), "2 z1 z1 + (1-2t) z2");
    assert_eq!(last_error(), "");
    unsafe { tmzv_element_free(e) };
}

#[test]
fn equality_of_handles() {
    let a = expand("St(t, z(2,1))").unwrap();
    let b = expand("z(2,1) . 1").unwrap();
    let mut z = ptr::null_mut();
    let parts = [2u32, 1];
    assert_eq!(unsafe { tmzv_element_from_index(parts.as_ptr(), 2, &mut z) }, TmzvStatus::Ok);
    let mut eq = -1;
    assert_eq!(unsafe { tmzv_element_equal(b, z, &mut eq) }, TmzvStatus::Ok);
    assert_eq!(eq, 1);
    assert_eq!(unsafe { tmzv_element_equal(a, z, &mut eq) }, TmzvStatus::Ok);
    assert_eq!(eq, 0);
    unsafe {
        tmzv_element_free(a);
        tmzv_element_free(b);
        tmzv_element_free(z);
    }
}

#[test]
fn error_codes() {
    assert_eq!(expand("z(2) sh z(1) tsh z(3)"), Err(TmzvStatus::Parse));
    assert!(last_error().contains("byte 13"));
    assert_eq!(expand("yx st y"), Err(TmzvStatus::Parse));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tmzv_expand(ptr::null(), &mut out) }, TmzvStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { tmzv_expand(bad.as_ptr().cast(), &mut out) },
        TmzvStatus::InvalidUtf8
    );
    let parts = [0u32];
    assert_eq!(
        unsafe { tmzv_element_from_index(parts.as_ptr(), 1, &mut out) },
        TmzvStatus::Domain
    );
    unsafe { tmzv_element_free(ptr::null_mut()) };
    unsafe { tmzv_string_free(ptr::null_mut()) };
}

#[test]
fn numeric_and_checks() {
    let mut ev = ptr::null_mut();
    assert_eq!(unsafe { tmzv_evaluator_new(20_000, &mut ev) }, TmzvStatus::Ok);
    let (mut v, mut err) = (0.0, 0.0);
    let two = [2u32];
    assert_eq!(unsafe { tmzv_zeta_t(ev, two.as_ptr(), 1, 0.3, &mut v, &mut err) }, TmzvStatus::Ok);
    assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
    let bad = [1u32, 2];
    assert_eq!(
        unsafe { tmzv_zeta_t(ev, bad.as_ptr(), 2, 0.0, &mut v, ptr::null_mut()) },
        TmzvStatus::Domain
    );

    let name = CString::new("hoffman").unwrap();
    let params = CString::new("index=2,1,3").unwrap();
    let mut pass = -1;
    let mut report = ptr::null_mut();
    let s = unsafe { tmzv_check(ev, name.as_ptr(), params.as_ptr(), &mut pass, &mut report) };
    assert_eq!(s, TmzvStatus::Ok);
    assert_eq!(pass, 1);
    let json = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_string();
    assert!(json.contains("\"max_abs_residual\":\"exact\""));
    unsafe { tmzv_string_free(report) };

    let name = CString::new("missing").unwrap();
    let s = unsafe { tmzv_check(ev, name.as_ptr(), params.as_ptr(), &mut pass, ptr::null_mut()) };
    assert_eq!(s, TmzvStatus::UnknownIdentity);
    let name = CString::new("hoffman").unwrap();
    let junk = CString::new("index").unwrap();
    let s = unsafe { tmzv_check(ev, name.as_ptr(), junk.as_ptr(), &mut pass, ptr::null_mut()) };
    assert_eq!(s, TmzvStatus::Param);
    unsafe { tmzv_evaluator_free(ev) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(tmzv_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/tmzv.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["tmzv_expand", "tmzv_check", "TMZV_STATUS_OK", "typedef struct TmzvElement TmzvElement"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let probe = std::env::temp_dir().join("tmzv_header_probe.c");
    std::fs::write(
        &probe,
        "#include \"tmzv.h\"\nint main(void) { TmzvElement *e = 0; return tmzv_expand(\"1\", &e) == TMZV_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(dir.join("include"))
            .arg(&probe)
            .output()
        else {
            eprintln!("{compiler} not available; skipping");
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
