use std::ffi::{CStr, CString};
use std::ptr;

use sgrover_ffi::*;

fn last_error() -> String {
    let p = sg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generate(name: &str, n: usize, k: usize, m: usize) -> (SgStatus, *mut SgComplex) {
    let name = CString::new(name).unwrap();
    let mut c = ptr::null_mut();
    let s = unsafe { sg_complex_generate(name.as_ptr(), n, k, m, 0, &mut c) };
    (s, c)
}

fn eigenvalues(m: *const SgMatrix) -> Vec<f64> {
    let (mut r, mut k) = (0, 0);
    assert_eq!(unsafe { sg_matrix_shape(m, &mut r, &mut k) }, SgStatus::Ok);
    let mut ev = vec![0.0; r];
    assert_eq!(unsafe { sg_hermitian_eigenvalues(m, ev.as_mut_ptr(), ev.len()) }, SgStatus::Ok);
    ev
}

#[test]
fn sphere_discriminant_spectrum() {
    let (s, c) = generate("sphere", 0, 0, 0);
    assert_eq!(s, SgStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { sg_complex_dim(c, &mut dim) }, SgStatus::Ok);
    assert_eq!(dim, 2);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sg_discriminant(c, 1, SG_MODE_UP, SG_BASIS_REDUCED, &mut d) }, SgStatus::Ok);
    let ev = eigenvalues(d);
    assert_eq!(ev.len(), 6);
    for (i, x) in ev.iter().enumerate() {
        let want = if i < 3 { -0.5 } else { 0.5 };
        assert!((x - want).abs() < 1e-12);
    }
    let mut buf_re = vec![0.0; 36];
    let mut buf_im = vec![0.0; 36];
    assert_eq!(unsafe { sg_matrix_copy(d, buf_re.as_mut_ptr(), buf_im.as_mut_ptr(), 36) }, SgStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { sg_matrix_get(d, 0, 1, &mut re, &mut im) }, SgStatus::Ok);
    assert_eq!(re, buf_re[1]);
    assert_eq!(unsafe { sg_matrix_copy(d, buf_re.as_mut_ptr(), buf_im.as_mut_ptr(), 10) }, SgStatus::BufferTooSmall);
    assert_eq!(unsafe { sg_matrix_get(d, 6, 0, &mut re, &mut im) }, SgStatus::DimensionRange);
    unsafe {
        sg_matrix_free(d);
        sg_complex_free(c);
    }
}

#[test]
fn facets_and_orientability() {
    // moebius strip on 3 squares, as explicit facets
    let c = {
        let name = CString::new("0 1 4\n0 3 4\n1 2 5\n1 4 5\n2 3 0\n2 5 0\n").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(unsafe { sg_complex_parse(name.as_ptr(), &mut c) }, SgStatus::Ok);
        c
    };
    let (mut coh, mut anti) = (true, true);
    assert_eq!(unsafe { sg_orientability(c, &mut coh, &mut anti) }, SgStatus::Ok);
    assert!(!coh);
    unsafe { sg_complex_free(c) };

    let verts = [0usize, 1, 2, 1, 2, 3];
    let sizes = [3usize, 3];
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { sg_complex_from_facets(verts.as_ptr(), sizes.as_ptr(), 2, &mut c) }, SgStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { sg_complex_count(c, 1, &mut n) }, SgStatus::Ok);
    assert_eq!(n, 5);
    assert_eq!(unsafe { sg_orientability(c, &mut coh, &mut anti) }, SgStatus::Ok);
    assert!(coh && anti);
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { sg_walk_unitary(c, 2, SG_MODE_DOWN, &mut u) }, SgStatus::Ok);
    let (mut r, mut k) = (0, 0);
    assert_eq!(unsafe { sg_matrix_shape(u, &mut r, &mut k) }, SgStatus::Ok);
    // ordered pairs over both orientations of each triangle
    assert_eq!((r, k), (8, 8));
    unsafe {
        sg_matrix_free(u);
        sg_complex_free(c);
    }
}

#[test]
fn bloch_symbols() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { sg_bloch_symbol(2, 0.0, 0, &mut m) }, SgStatus::Ok);
    let ev = eigenvalues(m);
    assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[5] - 1.0).abs() < 1e-12);
    unsafe { sg_matrix_free(m) };
    assert_eq!(unsafe { sg_bloch_symbol(1, 1.0, 2, &mut m) }, SgStatus::Ok);
    let ev = eigenvalues(m);
    assert!((ev[0] + 0.2).abs() < 1e-12 && (ev[1] + 0.2).abs() < 1e-12);
    unsafe { sg_matrix_free(m) };
    assert_eq!(unsafe { sg_bloch_symbol(1, 1.0, 3, &mut m) }, SgStatus::InvalidInput);
    assert_eq!(unsafe { sg_bloch_symbol(3, 1.0, 0, &mut m) }, SgStatus::DimensionRange);
    assert!(last_error().contains("dq"));
}

#[test]
fn error_statuses() {
    let (s, c) = generate("simplex", 1, 0, 0);
    assert_eq!(s, SgStatus::InvalidInput);
    assert!(c.is_null());
    assert!(last_error().contains("n >= 2"));

    let (s, c) = generate("skeleton", 4, 1, 0);
    assert_eq!(s, SgStatus::Ok);
    let mut d = ptr::null_mut();
    let s = unsafe { sg_discriminant(c, 3, SG_MODE_UP, SG_BASIS_FULL, &mut d) };
    assert_eq!(s, SgStatus::DimensionRange, "{}", last_error());
    assert_eq!(unsafe { sg_discriminant(c, 0, 9, SG_BASIS_FULL, &mut d) }, SgStatus::InvalidInput);
    unsafe { sg_complex_free(c) };

    let bad = CString::new("0 1 1\n").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { sg_complex_parse(bad.as_ptr(), &mut c) }, SgStatus::InvalidInput);
    assert!(last_error().starts_with("line 1"));

    let mut dim = 0;
    assert_eq!(unsafe { sg_complex_dim(ptr::null(), &mut dim) }, SgStatus::NullPointer);
    assert_eq!(unsafe { sg_complex_parse(ptr::null(), &mut c) }, SgStatus::NullPointer);
    unsafe {
        sg_complex_free(ptr::null_mut());
        sg_matrix_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(sg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
