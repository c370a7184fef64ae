//! Explicit tail factor `h(ζ) = ζ / (r − ζ)^{b/a}` for `k = n = 2`.
//!
//! With `a = 2p_1`, `c = 2p_2` and `u = t^c`, the profile
//! `t^a (1 − t^c) / (r − t)^b` is stationary at `t` exactly when
//! `r = r(t) = t + b t (1 − u) / D(u)`, `D(u) = (a + c) u − a`, and
//! `r'(t) = (α(u) b + D(u)²) / D(u)²` with
//! `α(u) = −(a+c) u² + (2a + c − c²) u − a`.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::certificates::{HFamily, MobiusCertificate};
use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};

/// Required margin of the pole over the unit circle.
pub const POLE_MARGIN: f64 = 1e-9;
const B_MAX_DOUBLINGS: u32 = 40;
const MONOTONE_GRID: usize = 2000;

fn check_ac(a: f64, c: f64) -> Result<()> {
    if !(a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite()) {
        return Err(Error::invalid(format!("a = {a} and c = {c} must be positive")));
    }
    Ok(())
}

pub fn tau(a: f64, c: f64) -> f64 {
    a / (a + c)
}

pub fn alpha_poly(a: f64, c: f64, u: f64) -> f64 {
    (-(a + c)).mul_add(u, 2.0 * a + c - c * c).mul_add(u, -a)
}

fn denom(a: f64, c: f64, u: f64) -> f64 {
    (a + c) * u - a
}

/// `c ≥ 1` or `4a + 2c > 1 + c²`.
pub fn hypothesis_holds(a: f64, c: f64) -> bool {
    c >= 1.0 || 4.0 * a + 2.0 * c > 1.0 + c * c
}

/// The pole making the profile stationary at `t`.
pub fn prop_d_r(a: f64, c: f64, b: f64, t: f64) -> Result<f64> {
    check_ac(a, c)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("t = {t} must lie in (0,1)")));
    }
    let u = t.powf(c);
    let d = denom(a, c, u);
    if !(d > 0.0) {
        return Err(Error::domain(format!("t^c = {u} must exceed τ = {}", tau(a, c))));
    }
    Ok(t + b * t * (1.0 - u) / d)
}

/// `r'(t)`.
pub fn prop_d_r_prime(a: f64, c: f64, b: f64, t: f64) -> Result<f64> {
    prop_d_r(a, c, b, t)?;
    let u = t.powf(c);
    let d = denom(a, c, u);
    Ok((alpha_poly(a, c, u) * b + d * d) / (d * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaDiagnostics {
    pub a: f64,
    pub c: f64,
    pub tau: f64,
    pub alpha_tau: f64,
    pub alpha_one: f64,
    pub u0: f64,
    /// `α(u0)` when `u0 ∈ (τ, 1)`.
    pub alpha_u0: Option<f64>,
    /// `4(a+c) α(u0) − c² (1 + c² − 4a − 2c)`.
    pub identity_residual: f64,
    /// Largest `α` over a scan of `[τ, 1]`.
    pub max_alpha: f64,
    pub hypothesis: bool,
}

// Both sides reach ~c⁴, so plain f64 leaves ~1e-12 of rounding; evaluate in double-double.
fn identity_residual(a: f64, c: f64) -> f64 {
    let (a, c) = (TwoFloat::from(a), TwoFloat::from(c));
    let s = a + c;
    let lin = a * 2.0 + c - c * c;
    let u0 = lin / (s * 2.0);
    let alpha = (-s * u0 + lin) * u0 - a;
    let rhs = c * c * (c * c + 1.0 - a * 4.0 - c * 2.0);
    f64::from(s * 4.0 * alpha - rhs)
}

pub fn alpha_poly_diagnostics(a: f64, c: f64) -> Result<AlphaDiagnostics> {
    check_ac(a, c)?;
    let t = tau(a, c);
    let u0 = (2.0 * a + c - c * c) / (2.0 * (a + c));
    let alpha_u0 = (u0 > t && u0 < 1.0).then(|| alpha_poly(a, c, u0));
    let identity_residual = identity_residual(a, c);
    let max_alpha = (0..=MONOTONE_GRID)
        .map(|i| alpha_poly(a, c, t + (1.0 - t) * i as f64 / MONOTONE_GRID as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(AlphaDiagnostics {
        a,
        c,
        tau: t,
        alpha_tau: alpha_poly(a, c, t),
        alpha_one: alpha_poly(a, c, 1.0),
        u0,
        alpha_u0,
        identity_residual,
        max_alpha,
        hypothesis: hypothesis_holds(a, c),
    })
}

/// Whether `r' < 0` on an interior grid of `u ∈ (τ, 1)` for this `b`.
fn r_decreasing(a: f64, c: f64, b: f64) -> bool {
    let t = tau(a, c);
    (1..MONOTONE_GRID).all(|i| {
        let u = t + (1.0 - t) * i as f64 / MONOTONE_GRID as f64;
        let d = denom(a, c, u);
        alpha_poly(a, c, u) * b + d * d < 0.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropDParams {
    pub a: f64,
    pub c: f64,
    pub t0: f64,
    pub b: f64,
    pub r: f64,
    pub tau: f64,
}

/// A certificate together with the ellipsoid and base point it lives on.
#[derive(Debug, Clone)]
pub struct PropDCertificate {
    pub params: PropDParams,
    pub ellipsoid: Ellipsoid,
    pub point: Point,
    pub certificate: MobiusCertificate,
}

/// Smallest `b ∈ {1, 2, 4, …}` with `r(t0) ≥ 1 + POLE_MARGIN` and `r` decreasing.
pub fn select_b(a: f64, c: f64, t0: f64) -> Result<(f64, f64)> {
    let mut b = 1.0;
    for _ in 0..=B_MAX_DOUBLINGS {
        let r = prop_d_r(a, c, b, t0)?;
        if r >= 1.0 + POLE_MARGIN && r_decreasing(a, c, b) {
            return Ok((b, r));
        }
        b *= 2.0;
    }
    Err(Error::Invariant(format!("no admissible b up to 2^{B_MAX_DOUBLINGS} for a = {a}, c = {c}, t0 = {t0}")))
}

/// Builds the certificate at `(z1, z0)` on `E_{(p1, p2)}` with `k = n = 2`.
/// Without `z1`, a first coordinate is chosen that keeps the sort order and
/// membership.
pub fn build_h_prop_d(p1: f64, p2: f64, z0: f64, z1: Option<f64>) -> Result<PropDCertificate> {
    build_with(p1, p2, z0, z1, None)
}

/// Same as [`build_h_prop_d`] with a fixed `b` and no escalation.
pub fn build_h_prop_d_with_b(p1: f64, p2: f64, z0: f64, z1: Option<f64>, b: f64) -> Result<PropDCertificate> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::invalid(format!("b = {b} must be positive")));
    }
    build_with(p1, p2, z0, z1, Some(b))
}

fn build_with(p1: f64, p2: f64, z0: f64, z1: Option<f64>, b: Option<f64>) -> Result<PropDCertificate> {
    let ellipsoid = Ellipsoid::new(vec![p1, p2], 2)?;
    if !(z0 > 0.0 && z0 < 1.0) {
        return Err(Error::domain(format!("z0 = {z0} must lie in (0,1)")));
    }
    let (a, c) = (2.0 * p1, 2.0 * p2);
    if !(p2 >= 0.5 || 8.0 * p1 + 4.0 * p2 * (1.0 - p2) > 1.0) {
        return Err(Error::Hypothesis(format!("p2 = {p2} < 1/2 and 8p1 + 4p2(1 − p2) ≤ 1")));
    }
    let u0 = z0.powf(c);
    if !(u0 > tau(a, c)) {
        return Err(Error::Hypothesis(format!("t0^c = {u0} does not exceed τ = {}", tau(a, c))));
    }
    let (b, r) = match b {
        None => select_b(a, c, z0)?,
        Some(b) => {
            let r = prop_d_r(a, c, b, z0)?;
            if r < 1.0 + POLE_MARGIN || !r_decreasing(a, c, b) {
                return Err(Error::Precondition(format!("b = {b} gives r = {r}, which is not admissible")));
            }
            (b, r)
        }
    };
    let x1_max = (1.0 - u0).min(p2 * u0 / p1);
    let z1 = z1.unwrap_or_else(|| (0.5 * x1_max).powf(1.0 / a));
    let point = Point::from_moduli(&[z1, z0]);
    let sorted = ellipsoid.sort_first_k(&point)?;
    if sorted.perm != [0, 1] {
        return Err(Error::Precondition(format!("z1 = {z1} moves the first coordinate behind z0")));
    }
    let certificate =
        MobiusCertificate::with_family(&ellipsoid, &point, HFamily::RationalPower { exponent: b / a, pole: r })?;
    if certificate.d() != 1 {
        return Err(Error::Invariant(format!("expected d = 1, got {}", certificate.d())));
    }
    Ok(PropDCertificate { params: PropDParams { a, c, t0: z0, b, r, tau: tau(a, c) }, ellipsoid, point, certificate })
}
