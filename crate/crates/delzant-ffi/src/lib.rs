//! C ABI for the `delzant` library.
//!
//! Polygons cross the boundary as opaque handles; every exact scalar crosses
//! as a `p/q` string so no precision is lost. Functions return a
//! [`DelzantStatus`]; on failure, [`delzant_last_error_message`] returns a
//! human-readable description for the calling thread. Strings returned
//! through `char **` out parameters are owned by the caller and must be
//! released with [`delzant_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::str::FromStr;

use delzant::invariants::ActionReport;
use delzant::measures::PolygonMeasures;
use delzant::polygon::{self, MomentPolygon};
use delzant::rational::Rational;
use delzant::Error;

/// Result codes of every fallible call in this API.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DelzantStatus {
    /// Success.
    Ok = 0,
    /// Null pointer, invalid UTF-8, or a malformed `p/q` rational.
    InvalidArgument = 1,
    /// The data is outside the operation's domain (non-convex input,
    /// nonpositive parameter, inadmissible chop, ...).
    DomainError = 2,
    /// The operation needs the Delzant corner property and the polygon
    /// lacks it.
    NotDelzant = 3,
}

/// Opaque moment polygon handle.
pub struct DelzantPolygon(MomentPolygon);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(err: Error) -> DelzantStatus {
    let status = match &err {
        Error::ParseRational(_) | Error::Usage(_) | Error::UnknownGenerator(_) => {
            DelzantStatus::InvalidArgument
        }
        Error::NotDelzant { .. } => DelzantStatus::NotDelzant,
        _ => DelzantStatus::DomainError,
    };
    set_error(&err.to_string());
    status
}

fn invalid(message: &str) -> DelzantStatus {
    set_error(message);
    DelzantStatus::InvalidArgument
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn delzant_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, DelzantStatus> {
    if ptr.is_null() {
        return Err(invalid(&format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(&format!("{name} is not valid UTF-8")))
}

unsafe fn rational_arg(ptr: *const c_char, name: &str) -> Result<Rational, DelzantStatus> {
    let text = utf8_arg(ptr, name)?;
    Rational::from_str(text).map_err(|e| {
        set_error(&e.to_string());
        DelzantStatus::InvalidArgument
    })
}

unsafe fn polygon_arg<'a>(
    handle: *const DelzantPolygon,
) -> Result<&'a MomentPolygon, DelzantStatus> {
    if handle.is_null() {
        return Err(invalid("polygon handle is null"));
    }
    Ok(&(*handle).0)
}

fn emit_polygon(
    out: *mut *mut DelzantPolygon,
    polygon: Result<MomentPolygon, Error>,
) -> DelzantStatus {
    if out.is_null() {
        return invalid("out pointer is null");
    }
    match polygon {
        Ok(p) => {
            unsafe { *out = Box::into_raw(Box::new(DelzantPolygon(p))) };
            DelzantStatus::Ok
        }
        Err(e) => {
            unsafe { *out = ptr::null_mut() };
            fail(e)
        }
    }
}

fn emit_string(out: *mut *mut c_char, text: String) -> DelzantStatus {
    if out.is_null() {
        return invalid("out pointer is null");
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            DelzantStatus::Ok
        }
        Err(_) => invalid("result contained an interior NUL byte"),
    }
}

/// Frees a string returned by this API. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char **` out
/// parameter of this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn delzant_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a polygon handle. Null is ignored.
///
/// # Safety
/// `p` must be a handle previously returned by this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_free(p: *mut DelzantPolygon) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses the polygon text format (one `x y` vertex per line, rational
/// fields, `#` comments).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_parse(
    text: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    let text = match utf8_arg(text, "text") {
        Ok(t) => t,
        Err(status) => return status,
    };
    emit_polygon(out, delzant::io::read_polygon(text))
}

/// Writes the polygon in the canonical text format.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_format(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => emit_string(out, delzant::io::write_polygon(poly)),
        Err(status) => status,
    }
}

/// Triangle `(0,0), (a,0), (0,a)` for rational `a > 0`.
///
/// # Safety
/// `a` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_cp2(
    a: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match rational_arg(a, "a") {
        Ok(a) => emit_polygon(out, polygon::gen_cp2(&a)),
        Err(status) => status,
    }
}

/// Rectangle `[0,a] x [0,b]` for rational `a, b > 0`.
///
/// # Safety
/// `a`, `b` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_p1xp1(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match (rational_arg(a, "a"), rational_arg(b, "b")) {
        (Ok(a), Ok(b)) => emit_polygon(out, polygon::gen_p1xp1(&a, &b)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Hirzebruch trapezoid `(0,0), (alpha+k,0), (alpha,1), (0,1)`.
///
/// # Safety
/// `alpha` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_hirzebruch(
    k: u32,
    alpha: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match rational_arg(alpha, "alpha") {
        Ok(alpha) => emit_polygon(out, polygon::gen_hirzebruch(k, &alpha)),
        Err(status) => status,
    }
}

/// Two-point blow-up pentagon with exceptional lattice length 1.
///
/// # Safety
/// `alpha`, `beta` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_two_point(
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match (rational_arg(alpha, "alpha"), rational_arg(beta, "beta")) {
        (Ok(a), Ok(b)) => emit_polygon(out, polygon::gen_two_point_blowup(&a, &b)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Chops the corner at `vertex` with lattice size `eps` (rational string).
///
/// # Safety
/// `p` must be a live handle, `eps` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_blow_up(
    p: *const DelzantPolygon,
    vertex: usize,
    eps: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match (polygon_arg(p), rational_arg(eps, "eps")) {
        (Ok(poly), Ok(eps)) => emit_polygon(out, poly.blow_up(vertex, &eps)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Dilation by a rational factor `c > 0`.
///
/// # Safety
/// `p` must be a live handle, `c` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_scale(
    p: *const DelzantPolygon,
    c: *const c_char,
    out: *mut *mut DelzantPolygon,
) -> DelzantStatus {
    match (polygon_arg(p), rational_arg(c, "c")) {
        (Ok(poly), Ok(c)) => emit_polygon(out, poly.scale(&c)),
        (Err(s), _) | (_, Err(s)) => s,
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `p` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_vertex_count(p: *const DelzantPolygon) -> usize {
    polygon_arg(p).map(MomentPolygon::vertex_count).unwrap_or(0)
}

/// Whether every corner satisfies the Delzant determinant condition.
///
/// # Safety
/// `p` must be a live handle or null (null reports false).
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_is_delzant(p: *const DelzantPolygon) -> bool {
    polygon_arg(p).map(MomentPolygon::is_delzant).unwrap_or(false)
}

/// Area of the interior as an exact `p/q` string.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_area(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => emit_string(out, delzant::area(poly).to_string()),
        Err(status) => status,
    }
}

/// Lattice length of the boundary as an exact `p/q` string.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_lambda_perimeter(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => emit_string(out, delzant::lambda_perimeter(poly).to_string()),
        Err(status) => status,
    }
}

/// Virtual action as an exact `p/q` string.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_virtual_action(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => emit_string(out, delzant::virtual_action(poly).to_string()),
        Err(status) => status,
    }
}

/// Futaki vector: the two rational coefficients of pi, as `p/q` strings.
///
/// # Safety
/// `p` must be a live handle; `out1`, `out2` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn delzant_futaki_vector(
    p: *const DelzantPolygon,
    out1: *mut *mut c_char,
    out2: *mut *mut c_char,
) -> DelzantStatus {
    let poly = match polygon_arg(p) {
        Ok(poly) => poly,
        Err(status) => return status,
    };
    let (f1, f2) = delzant::futaki_vector(poly);
    let status = emit_string(out1, f1.coefficient().to_string());
    if status != DelzantStatus::Ok {
        return status;
    }
    let status = emit_string(out2, f2.coefficient().to_string());
    if status != DelzantStatus::Ok {
        delzant_string_free(*out1);
        *out1 = ptr::null_mut();
    }
    status
}

/// Calabi energy bound `32 pi^2 A`: the rational coefficient of `pi^2`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_calabi_bound_coeff(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => {
            emit_string(out, delzant::calabi_lower_bound(poly).coefficient().to_string())
        }
        Err(status) => status,
    }
}

/// Weyl energy bound: the rational coefficient of `pi^2`. Requires the
/// Delzant property.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_weyl_bound_coeff(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    let poly = match polygon_arg(p) {
        Ok(poly) => poly,
        Err(status) => return status,
    };
    match delzant::weyl_lower_bound(poly) {
        Ok(w) => emit_string(out, w.coefficient().to_string()),
        Err(e) => fail(e),
    }
}

/// Euler characteristic, signature and second Betti number. Requires the
/// Delzant property.
///
/// # Safety
/// `p` must be a live handle; `euler`, `signature`, `b2` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn delzant_topology(
    p: *const DelzantPolygon,
    euler: *mut i64,
    signature: *mut i64,
    b2: *mut i64,
) -> DelzantStatus {
    let poly = match polygon_arg(p) {
        Ok(poly) => poly,
        Err(status) => return status,
    };
    if euler.is_null() || signature.is_null() || b2.is_null() {
        return invalid("out pointer is null");
    }
    match delzant::topology(poly) {
        Ok(t) => {
            *euler = t.euler;
            *signature = t.signature;
            *b2 = t.b2;
            DelzantStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Measures row in CSV (`header\nrow\n`), all fields exact `p/q`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_measures_csv(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => {
            let m = PolygonMeasures::compute(poly);
            emit_string(out, format!("{}\n{}\n", PolygonMeasures::csv_header(), m.csv_row()))
        }
        Err(status) => status,
    }
}

/// Invariant report row in CSV (`header\nrow\n`); topology-dependent columns
/// stay empty for non-Delzant polygons.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_polygon_action_csv(
    p: *const DelzantPolygon,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match polygon_arg(p) {
        Ok(poly) => {
            let report = ActionReport::compute(poly);
            emit_string(
                out,
                format!("{}\n{}\n", ActionReport::csv_header(false), report.csv_row(false)),
            )
        }
        Err(status) => status,
    }
}

/// Closed-form Hirzebruch action profile at rational `alpha > 0`.
///
/// # Safety
/// `alpha` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_hirzebruch_action(
    k: u32,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> DelzantStatus {
    let alpha = match rational_arg(alpha, "alpha") {
        Ok(a) => a,
        Err(status) => return status,
    };
    match delzant::hirzebruch_closed_form(k, &alpha) {
        Ok(v) => emit_string(out, v.to_string()),
        Err(e) => fail(e),
    }
}

/// Closed-form two-point blow-up action at rational `alpha, beta >= 0`.
///
/// # Safety
/// `alpha`, `beta` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn delzant_two_point_action(
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut c_char,
) -> DelzantStatus {
    match (rational_arg(alpha, "alpha"), rational_arg(beta, "beta")) {
        (Ok(a), Ok(b)) => match delzant::two_point_closed_form(&a, &b) {
            Ok(v) => emit_string(out, v.to_string()),
            Err(e) => fail(e),
        },
        (Err(s), _) | (_, Err(s)) => s,
    }
}
