//! C ABI over the sgrover library.
//!
//! Objects are opaque handles created by `sg_*` constructors and released with the matching
//! `*_free`. Every fallible call returns an `SgStatus`; on failure the message is available
//! from `sg_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sgrover::bloch::{cube_root, symbol_d1, symbol_d2};
use sgrover::complex::{parse_complex, Complex, Generator, Mode};
use sgrover::linalg::CMat;
use sgrover::operators::{build_discriminant, build_edge_ops, Basis};
use sgrover::spectra::{eigvals_hermitian, orientability_spectral};
use sgrover::Error;

pub const SG_MODE_UP: u32 = 0;
pub const SG_MODE_DOWN: u32 = 1;
pub const SG_BASIS_FULL: u32 = 0;
pub const SG_BASIS_REDUCED: u32 = 1;

/// Result of every fallible call. Codes 2-5 match the command-line exit statuses.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionRange = 3,
    Precondition = 4,
    Numeric = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Finite simplicial complex.
pub struct SgComplex(Complex);

/// Dense complex matrix, row-major on export.
pub struct SgMatrix(CMat);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SgStatus {
    match e.exit_code() {
        3 => SgStatus::DimensionRange,
        4 => SgStatus::Precondition,
        5 => SgStatus::Numeric,
        _ => SgStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SgStatus::Panic
        }
    }
}

fn lib<T>(r: sgrover::Result<T>) -> Result<T, (SgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SgStatus, String) {
    (SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (SgStatus, String)> {
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn mode_of(m: u32) -> Result<Mode, (SgStatus, String)> {
    match m {
        SG_MODE_UP => Ok(Mode::Up),
        SG_MODE_DOWN => Ok(Mode::Down),
        _ => Err((SgStatus::InvalidInput, format!("unknown mode {m}"))),
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a complex from `nfacets` facets stored back to back in `vertices`; facet i has
/// `sizes[i]` vertex ids. Vertex ids double as labels.
///
/// # Safety
/// `vertices` must hold `sum(sizes)` entries, `sizes` must hold `nfacets`, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_from_facets(
    vertices: *const usize,
    sizes: *const usize,
    nfacets: usize,
    out: *mut *mut SgComplex,
) -> SgStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        if sizes.is_null() || (vertices.is_null() && nfacets > 0) {
            return Err(null("facet arrays"));
        }
        let sizes = unsafe { std::slice::from_raw_parts(sizes, nfacets) };
        let total: usize = sizes.iter().sum();
        let verts = unsafe { std::slice::from_raw_parts(vertices, total) };
        let mut text = String::new();
        let mut at = 0;
        for &s in sizes {
            let line: Vec<String> = verts[at..at + s].iter().map(|v| v.to_string()).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
            at += s;
        }
        let c = lib(parse_complex(&text))?;
        *out = Box::into_raw(Box::new(SgComplex(c)));
        Ok(())
    })
}

/// Parses the facet-file text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_parse(text: *const c_char, out: *mut *mut SgComplex) -> SgStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        if text.is_null() {
            return Err(null("text"));
        }
        let bytes = unsafe { CStr::from_ptr(text) }.to_bytes();
        let c = lib(sgrover::complex::parse_complex_bytes(bytes))?;
        *out = Box::into_raw(Box::new(SgComplex(c)));
        Ok(())
    })
}

/// Named generator; parameters that a family does not use are ignored, 0 means unset.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_generate(
    name: *const c_char,
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    out: *mut *mut SgComplex,
) -> SgStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = unsafe { CStr::from_ptr(name) }
            .to_str()
            .map_err(|_| (SgStatus::InvalidInput, "name is not UTF-8".to_string()))?;
        let opt = |x: usize| (x > 0).then_some(x);
        // skeleton dimension 0 is meaningful
        let k = if name == "skeleton" { Some(k) } else { opt(k) };
        let g = lib(Generator::from_name(name, opt(n), k, opt(m), Some(seed)))?;
        *out = Box::into_raw(Box::new(SgComplex(lib(g.build())?)));
        Ok(())
    })
}

/// # Safety
/// `c` must come from an `sg_complex_*` constructor and not be used afterwards; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_free(c: *mut SgComplex) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_dim(c: *const SgComplex, out: *mut usize) -> SgStatus {
    guard(|| {
        let c = unsafe { c.as_ref() }.ok_or_else(|| null("complex"))?;
        *unsafe { out_ptr(out, "out") }? = c.0.dim();
        Ok(())
    })
}

/// Number of q-simplices (0 above the dimension).
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_complex_count(c: *const SgComplex, q: usize, out: *mut usize) -> SgStatus {
    guard(|| {
        let c = unsafe { c.as_ref() }.ok_or_else(|| null("complex"))?;
        *unsafe { out_ptr(out, "out") }? = if q <= c.0.dim() { c.0.count(q) } else { 0 };
        Ok(())
    })
}

/// Discriminant `D_q^{mode}` in the full or reduced basis.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_discriminant(
    c: *const SgComplex,
    q: usize,
    mode: u32,
    basis: u32,
    out: *mut *mut SgMatrix,
) -> SgStatus {
    guard(|| {
        let c = unsafe { c.as_ref() }.ok_or_else(|| null("complex"))?;
        let out = unsafe { out_ptr(out, "out") }?;
        let basis = match basis {
            SG_BASIS_FULL => Basis::Full,
            SG_BASIS_REDUCED => Basis::Reduced,
            b => return Err((SgStatus::InvalidInput, format!("unknown basis {b}"))),
        };
        let d = lib(build_discriminant(&c.0, q, mode_of(mode)?, basis))?;
        *out = Box::into_raw(Box::new(SgMatrix(d.mat)));
        Ok(())
    })
}

/// Grover walk unitary `U_q^{mode}` on the edge space.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_walk_unitary(c: *const SgComplex, q: usize, mode: u32, out: *mut *mut SgMatrix) -> SgStatus {
    guard(|| {
        let c = unsafe { c.as_ref() }.ok_or_else(|| null("complex"))?;
        let out = unsafe { out_ptr(out, "out") }?;
        let ops = lib(build_edge_ops(&c.0, q, mode_of(mode)?))?;
        *out = Box::into_raw(Box::new(SgMatrix(ops.u.mat)));
        Ok(())
    })
}

/// Bloch symbol of the cylinder: `dq = 2` gives the 6x6 matrix, `dq = 1` the 3x3 block for
/// `mu = omega^mu_index`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_bloch_symbol(dq: u32, theta: f64, mu_index: u32, out: *mut *mut SgMatrix) -> SgStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let m = match dq {
            2 => symbol_d2(theta).entries,
            1 if mu_index < 3 => lib(symbol_d1(theta, cube_root(mu_index as usize)))?.entries,
            1 => return Err((SgStatus::InvalidInput, format!("mu index {mu_index} not in 0..3"))),
            _ => return Err((SgStatus::DimensionRange, format!("dq = {dq} not in 1..=2"))),
        };
        *out = Box::into_raw(Box::new(SgMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from an `sg_*` constructor and not be used afterwards; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sg_matrix_free(m: *mut SgMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_matrix_shape(m: *const SgMatrix, rows: *mut usize, cols: *mut usize) -> SgStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        *unsafe { out_ptr(rows, "rows") }? = m.0.nrows();
        *unsafe { out_ptr(cols, "cols") }? = m.0.ncols();
        Ok(())
    })
}

/// Entry (i, j).
///
/// # Safety
/// `m` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_matrix_get(
    m: *const SgMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> SgStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        if i >= m.0.nrows() || j >= m.0.ncols() {
            return Err((SgStatus::DimensionRange, format!("entry ({i}, {j}) outside {:?}", m.0.shape())));
        }
        let z = m.0[(i, j)];
        *unsafe { out_ptr(re, "re") }? = z.re;
        *unsafe { out_ptr(im, "im") }? = z.im;
        Ok(())
    })
}

/// Copies all entries row-major into `re` and `im`, each of capacity `len`.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_matrix_copy(m: *const SgMatrix, re: *mut f64, im: *mut f64, len: usize) -> SgStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        let (r, c) = m.0.shape();
        if len < r * c {
            return Err((SgStatus::BufferTooSmall, format!("need {} entries, got {len}", r * c)));
        }
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let (re, im) = unsafe { (std::slice::from_raw_parts_mut(re, len), std::slice::from_raw_parts_mut(im, len)) };
        for i in 0..r {
            for j in 0..c {
                re[i * c + j] = m.0[(i, j)].re;
                im[i * c + j] = m.0[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Ascending eigenvalues of a Hermitian matrix into `out` (capacity `len` >= rows).
///
/// # Safety
/// `m` must be a live handle and `out` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_hermitian_eigenvalues(m: *const SgMatrix, out: *mut f64, len: usize) -> SgStatus {
    guard(|| {
        let m = unsafe { m.as_ref() }.ok_or_else(|| null("matrix"))?;
        if len < m.0.nrows() {
            return Err((SgStatus::BufferTooSmall, format!("need {} entries, got {len}", m.0.nrows())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let ev = lib(eigvals_hermitian(&m.0))?;
        unsafe { std::slice::from_raw_parts_mut(out, ev.len()) }.copy_from_slice(&ev);
        Ok(())
    })
}

/// Whether -1 (coherent) and +1 (anticoherent) are eigenvalues of the top down-discriminant.
///
/// # Safety
/// `c` must be a live handle; `coherent` and `anticoherent` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_orientability(
    c: *const SgComplex,
    coherent: *mut bool,
    anticoherent: *mut bool,
) -> SgStatus {
    guard(|| {
        let c = unsafe { c.as_ref() }.ok_or_else(|| null("complex"))?;
        let r = lib(orientability_spectral(&c.0))?;
        *unsafe { out_ptr(coherent, "coherent") }? = r.coherent;
        *unsafe { out_ptr(anticoherent, "anticoherent") }? = r.anticoherent;
        Ok(())
    })
}
