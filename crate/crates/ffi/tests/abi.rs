use std::ffi::{CStr, CString};
use std::ptr;

use flexiplex_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    flexiplex_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(flexiplex_last_error())
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn n4_family_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        let status = flexiplex_family_n4(c("1,1,-2").as_ptr(), c("2,-3,1").as_ptr(), &mut f);
        assert_eq!(status, FlexiplexStatus::Ok);
        assert_eq!(flexiplex_family_order(f), 4);

        let mut det = ptr::null_mut();
        assert_eq!(
            flexiplex_family_det_at(f, c("1").as_ptr(), &mut det),
            FlexiplexStatus::Ok
        );
        assert_eq!(take(det), "-256");

        let mut sig = FlexiplexSignature::default();
        assert_eq!(
            flexiplex_family_signature_at(f, c("2").as_ptr(), &mut sig),
            FlexiplexStatus::Ok
        );
        assert_eq!((sig.positive, sig.negative, sig.zero), (3, 1, 0));

        let mut csv = ptr::null_mut();
        assert_eq!(
            flexiplex_family_sweep_csv(f, ptr::null(), &mut csv),
            FlexiplexStatus::Ok
        );
        assert!(take(csv).starts_with("t,det,p,q,z"));

        let mut json = ptr::null_mut();
        assert_eq!(flexiplex_family_to_json(f, &mut json), FlexiplexStatus::Ok);
        assert!(take(json).contains("\"N4\""));
        flexiplex_family_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        let status = flexiplex_family_n4(c("1,1,-2").as_ptr(), c("1,-2,1").as_ptr(), &mut f);
        assert_eq!(status, FlexiplexStatus::InvalidArgument);
        assert!(f.is_null());
        assert!(last_error().contains("a2*b3 = a3*b2"));

        assert_eq!(
            flexiplex_family_n4(ptr::null(), ptr::null(), &mut f),
            FlexiplexStatus::NullPointer
        );
        assert_eq!(flexiplex_family_order(ptr::null()), 0);

        let mut g = ptr::null_mut();
        assert_eq!(flexiplex_family_matrix(5, 1, &mut g), FlexiplexStatus::Ok);
        let mut det = ptr::null_mut();
        assert_eq!(
            flexiplex_family_det_at(g, c("-1").as_ptr(), &mut det),
            FlexiplexStatus::InvalidArgument
        );
        flexiplex_family_free(g);
        flexiplex_family_free(ptr::null_mut());
        flexiplex_string_free(ptr::null_mut());
    }
}

#[test]
fn simplex_volume() {
    unsafe {
        let json = c(r#"{"n":2,"squared_edges":[[0,1,"1"],[0,2,"1"],[1,2,"1"]]}"#);
        let mut s = ptr::null_mut();
        assert_eq!(
            flexiplex_simplex_from_json(json.as_ptr(), &mut s),
            FlexiplexStatus::Ok
        );
        assert_eq!(flexiplex_simplex_dimension(s), 2);
        let mut v = ptr::null_mut();
        assert_eq!(
            flexiplex_simplex_signed_sq_volume(s, &mut v),
            FlexiplexStatus::Ok
        );
        assert_eq!(take(v), "3/16");
        flexiplex_simplex_free(s);
    }
}

#[test]
fn lemma_check_bundles() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            flexiplex_lemma_check(c("lemma-3.2").as_ptr(), 0, 1, &mut out),
            FlexiplexStatus::Ok
        );
        assert!(take(out).contains("\"passed\": true"));
        assert_eq!(
            flexiplex_lemma_check(c("nope").as_ptr(), 0, 1, &mut out),
            FlexiplexStatus::InvalidArgument
        );
        let v = CStr::from_ptr(flexiplex_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/flexiplex.h"))
            .unwrap();
    for name in [
        "flexiplex_family_n4",
        "flexiplex_family_free",
        "flexiplex_last_error",
        "flexiplex_string_free",
        "flexiplex_lemma_check",
        "typedef struct FlexiplexFamily FlexiplexFamily",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
