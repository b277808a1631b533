//! C interface to network sampling, clustering, calibration and ATE estimation.
//!
//! Every function returns an [`HnStatus`]. On failure a description is available from
//! [`hn_last_error`] until the next call on the same thread. Networks are opaque handles
//! released with [`hn_network_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use homonet::estimators::{ate_estimate, Sample};
use homonet::groups::GroupRule;
use homonet::netgen::{
    calibrate_scale, clustering_coefficient, sample_network, CalibrationOptions, CovariateTable, LinkFamily, LinkSpec,
    Network,
};
use homonet::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Estimation = 3,
    Calibration = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnLinkFamily {
    Gaussian = 0,
    Hard = 1,
    LinearMax = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnRule {
    /// Neighbors up to order `param`.
    OrderM = 0,
    /// Units sharing at least `param` friends.
    CommonFriends = 1,
}

/// ATE point estimate and standard error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HnEstimate {
    pub point: f64,
    pub se: f64,
    /// 0 when the standard error is undefined.
    pub has_se: i32,
    pub n_effective: usize,
    pub dropped_units: usize,
}

/// Opaque network handle.
pub struct HnNetwork {
    inner: Network,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HnStatus {
    match e {
        Error::Calibration(_) => HnStatus::Calibration,
        Error::Estimation(_) | Error::DegenerateGroup { .. } | Error::Collinearity(_) | Error::DegenerateTest(_) => {
            HnStatus::Estimation
        }
        _ => HnStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), HnStatus>) -> HnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HnStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            HnStatus::Panic
        }
    }
}

fn fail(e: Error) -> HnStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> HnStatus {
    set_error(&format!("{what} is null"));
    HnStatus::NullPointer
}

/// Slice from a pointer that may be null when `len == 0`.
unsafe fn view<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], HnStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn family(f: HnLinkFamily) -> LinkFamily {
    match f {
        HnLinkFamily::Gaussian => LinkFamily::Gaussian,
        HnLinkFamily::Hard => LinkFamily::Hard,
        HnLinkFamily::LinearMax => LinkFamily::LinearMax,
    }
}

fn table_len(n: usize, d: usize) -> Result<usize, HnStatus> {
    n.checked_mul(d).ok_or_else(|| fail(Error::Input("n * d overflows".into())))
}

fn covariates(x: &[f64], n: usize, d: usize) -> Result<CovariateTable, HnStatus> {
    let names = (0..d).map(|k| format!("x{k}")).collect();
    CovariateTable::new(n, d, x.to_vec(), names, (0..d).collect(), Vec::new()).map_err(fail)
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn hn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a network on `n` nodes from `m` edges stored as `2 * m` node ids.
///
/// # Safety
/// `edges` must point to `2 * m` values (or may be null when `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_network_from_edges(n: usize, edges: *const usize, m: usize, out: *mut *mut HnNetwork) -> HnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let e = view(edges, table_len(m, 2)?, "edges")?;
        let net = Network::from_edges(n, e.chunks_exact(2).map(|p| (p[0], p[1]))).map_err(fail)?;
        *out = Box::into_raw(Box::new(HnNetwork { inner: net }));
        Ok(())
    })
}

/// Draws a homophilic network: `i` and `j` link when a uniform shock is at most
/// `g(scale * ||x_i - x_j||)` over the link columns.
///
/// # Safety
/// `x` must hold `n * d` row-major values, `link_cols` `n_link` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_network_sample(
    x: *const f64,
    n: usize,
    d: usize,
    link_cols: *const usize,
    n_link: usize,
    link_family: HnLinkFamily,
    scale: f64,
    seed: u64,
    out: *mut *mut HnNetwork,
) -> HnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cov = covariates(view(x, table_len(n, d)?, "x")?, n, d)?;
        let cols = view(link_cols, n_link, "link_cols")?.to_vec();
        let spec = LinkSpec::new(family(link_family), scale, cols).map_err(fail)?;
        let net = sample_network(&cov, &spec, seed).map_err(fail)?;
        *out = Box::into_raw(Box::new(HnNetwork { inner: net }));
        Ok(())
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hn_network_free(net: *mut HnNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Node and edge counts.
///
/// # Safety
/// `net` must be a live handle; `nodes` and `edges` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_network_counts(net: *const HnNetwork, nodes: *mut usize, edges: *mut usize) -> HnStatus {
    guard(|| {
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        if nodes.is_null() || edges.is_null() {
            return Err(null("output"));
        }
        *nodes = net.inner.n();
        *edges = net.inner.edge_count();
        Ok(())
    })
}

/// Global clustering coefficient (transitivity); 0 when the network has no connected triple.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_clustering_coefficient(net: *const HnNetwork, out: *mut f64) -> HnStatus {
    guard(|| {
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = clustering_coefficient(&net.inner).value;
        Ok(())
    })
}

/// ATE from comparison groups of the given rule, without kernel weights.
///
/// # Safety
/// `net` must be a live handle with `n` nodes; `t` and `y` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_ate_estimate(
    net: *const HnNetwork,
    t: *const u8,
    y: *const f64,
    n: usize,
    rule: HnRule,
    param: usize,
    out: *mut HnEstimate,
) -> HnStatus {
    guard(|| {
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = view(t, n, "t")?.to_vec();
        let y = view(y, n, "y")?.to_vec();
        let cov = covariates(&[], n, 0)?;
        let sample = Sample::new(cov, t, y).map_err(fail)?;
        let rule = match rule {
            HnRule::OrderM => GroupRule::order_m(param),
            HnRule::CommonFriends => GroupRule::common_friends(param),
        };
        let r = ate_estimate(&net.inner, &rule, &sample, None).map_err(fail)?;
        *out = HnEstimate {
            point: r.point,
            se: r.se.unwrap_or(f64::NAN),
            has_se: i32::from(r.se.is_some()),
            n_effective: r.n_effective,
            dropped_units: r.diagnostics.dropped_units,
        };
        Ok(())
    })
}

/// Link scale whose Monte-Carlo mean degree is within 2% of `target_degree`.
///
/// # Safety
/// As [`hn_network_sample`]; `scale_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_calibrate_scale(
    x: *const f64,
    n: usize,
    d: usize,
    link_cols: *const usize,
    n_link: usize,
    link_family: HnLinkFamily,
    target_degree: f64,
    seed: u64,
    scale_out: *mut f64,
) -> HnStatus {
    guard(|| {
        if scale_out.is_null() {
            return Err(null("scale_out"));
        }
        let cov = covariates(view(x, table_len(n, d)?, "x")?, n, d)?;
        let cols = view(link_cols, n_link, "link_cols")?.to_vec();
        let spec = LinkSpec::new(family(link_family), 1.0, cols).map_err(fail)?;
        let cal = calibrate_scale(&cov, &spec, target_degree, seed, CalibrationOptions::default()).map_err(fail)?;
        *scale_out = cal.scale;
        Ok(())
    })
}
