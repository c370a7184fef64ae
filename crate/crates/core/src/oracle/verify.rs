//! Certificate verification against the independent numerical tools.
//!
//! Every check goes through public evaluators only: the profile
//! `t ↦ |tail factor(t)| · (1 − Σ t_j^{2p_j})^{q_d}` on the tail ellipsoid,
//! the assembled function on `E`, and the closed-form value `R`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certificates::{GreenCertificate, MobiusCertificate};
use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};

use super::fd::{fd_gradient, norm};
use super::optimize::{maximize_profile, OptimizerConfig, ProfileDomain};
use super::report::{sort_reports, VerificationReport};
use super::sampling::sup_probe_points;

/// Read access to the parts of a certificate the verifier needs.
pub trait ProfileCertificate: Sync {
    fn tail_exponents(&self) -> &[f64];
    /// Tail moduli of the base point, where the profile should peak.
    fn tail_base(&self) -> &[f64];
    fn q_d(&self) -> f64;
    fn r_value(&self) -> f64;
    fn log_m(&self) -> f64;
    /// Log-modulus of the tail factor at nonnegative real tail moduli.
    fn log_tail_factor(&self, t: &[f64]) -> Result<f64>;
    /// `|u|` or `|f|` at a point of `E`.
    fn full_modulus(&self, zeta: &Point) -> Result<f64>;
}

impl ProfileCertificate for GreenCertificate {
    fn tail_exponents(&self) -> &[f64] {
        GreenCertificate::tail_exponents(self)
    }
    fn tail_base(&self) -> &[f64] {
        GreenCertificate::tail_base(self)
    }
    fn q_d(&self) -> f64 {
        GreenCertificate::q_d(self)
    }
    fn r_value(&self) -> f64 {
        GreenCertificate::r_value(self)
    }
    fn log_m(&self) -> f64 {
        GreenCertificate::log_m(self)
    }
    fn log_tail_factor(&self, t: &[f64]) -> Result<f64> {
        self.log_v(t)
    }
    fn full_modulus(&self, zeta: &Point) -> Result<f64> {
        self.assemble_u(zeta)
    }
}

impl ProfileCertificate for MobiusCertificate {
    fn tail_exponents(&self) -> &[f64] {
        MobiusCertificate::tail_exponents(self)
    }
    fn tail_base(&self) -> &[f64] {
        MobiusCertificate::tail_base(self)
    }
    fn q_d(&self) -> f64 {
        MobiusCertificate::q_d(self)
    }
    fn r_value(&self) -> f64 {
        MobiusCertificate::r_value(self)
    }
    fn log_m(&self) -> f64 {
        MobiusCertificate::log_m(self)
    }
    fn log_tail_factor(&self, t: &[f64]) -> Result<f64> {
        // Evaluate along the rays of the base point so the phase handling is exercised too.
        let w: Vec<Complex64> =
            t.iter().zip(self.tail_phases()).map(|(&t, &th)| Complex64::from_polar(t, th)).collect();
        self.log_abs_h(&w)
    }
    fn full_modulus(&self, zeta: &Point) -> Result<f64> {
        Ok(self.assemble_f(zeta)?.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Green,
    Mobius,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub optimizer: OptimizerConfig,
    /// Base step in logarithmic coordinates, shrunk where the profile is stiff.
    pub fd_step: f64,
    pub stationarity_tol: f64,
    pub argmax_tol: f64,
    /// Relative tolerance on the maximum against `M`.
    pub value_tol: f64,
    /// Relative tolerance on `|u(z)|` or `|f(z)|` against `R`.
    pub consistency_tol: f64,
    pub sup_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            fd_step: 2e-3,
            stationarity_tol: 1e-6,
            argmax_tol: 1e-4,
            value_tol: 1e-8,
            consistency_tol: 1e-10,
            sup_samples: 2048,
            seed: 0,
        }
    }
}

fn slack(exponents: &[f64], t: &[f64]) -> f64 {
    1.0 - t.iter().zip(exponents).map(|(&t, &p)| if t == 0.0 { 0.0 } else { t.powf(2.0 * p) }).sum::<f64>()
}

/// Norm of the gradient of the log-profile in coordinates `s_j = ln t_j`,
/// over tail slots with `t_j > 0`.
pub fn log_stationarity<C: ProfileCertificate + ?Sized>(cert: &C, fd_step: f64) -> Result<f64> {
    let p = cert.tail_exponents();
    let t0 = cert.tail_base();
    let active: Vec<usize> = (0..t0.len()).filter(|&j| t0[j] > 0.0).collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let q = cert.q_d();
    let r0 = slack(p, t0);
    let stiff = active.iter().map(|&j| 2.0 * p[j] * (1.0 + t0[j].powf(2.0 * p[j]) / r0)).fold(0.0, f64::max);
    let h = fd_step / (1.0 + stiff);
    let s0: Vec<f64> = active.iter().map(|&j| t0[j].ln()).collect();
    let objective = |s: &[f64]| {
        let mut t = t0.to_vec();
        for (&j, &sj) in active.iter().zip(s) {
            t[j] = sj.exp();
        }
        let r = slack(p, &t);
        if !(r > 0.0) {
            return f64::NAN;
        }
        match cert.log_tail_factor(&t) {
            Ok(v) if v.is_finite() => v + q * r.ln(),
            _ => f64::NAN,
        }
    };
    Ok(norm(&fd_gradient(objective, &s0, &vec![h; s0.len()])?))
}

/// Runs the consistency, argmax, value, stationarity and supremum checks.
pub fn verify_bundle<C: ProfileCertificate + ?Sized>(
    ell: &Ellipsoid,
    z: &Point,
    cert: &C,
    cfg: &VerifyConfig,
) -> Result<Vec<VerificationReport>> {
    if cfg.sup_samples == 0 {
        return Err(Error::invalid("sup_samples must be positive"));
    }
    let mut reports = Vec::with_capacity(5);
    let r = cert.r_value();

    let at_z = cert.full_modulus(z)?;
    reports.push(
        VerificationReport::deviation("consistency", (at_z / r - 1.0).abs(), cfg.consistency_tol)
            .with_witness(vec![at_z, r]),
    );

    let p = cert.tail_exponents().to_vec();
    let t0 = cert.tail_base().to_vec();
    let q = cert.q_d();
    let domain = ProfileDomain::new(p.clone())?;
    // Scaled by the certificate's claimed maximum so the values stay near one.
    let log_m = cert.log_m();
    let profile = |t: &[f64]| {
        let s = slack(&p, t).max(0.0);
        cert.log_tail_factor(t).map_or(f64::NAN, |v| (v + q * s.ln() - log_m).exp())
    };
    let best = maximize_profile(&domain, profile, &cfg.optimizer)?;
    let dist = best.argmax.iter().zip(&t0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    reports
        .push(VerificationReport::deviation("global_argmax", dist, cfg.argmax_tol).with_witness(best.argmax.clone()));
    let rel = (best.value - 1.0).abs();
    reports.push(
        VerificationReport::deviation("global_value", rel, cfg.value_tol)
            .with_witness(vec![best.value])
            .with_samples(best.evaluations, 0),
    );

    let grad = log_stationarity(cert, cfg.fd_step)?;
    reports.push(VerificationReport::deviation("stationarity", grad, cfg.stationarity_tol));

    let probes = sup_probe_points(ell, cfg.sup_samples, cfg.seed);
    let values = crate::par::map(&probes, |zeta| cert.full_modulus(zeta));
    let mut sup = f64::NEG_INFINITY;
    let mut arg = 0;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if !v.is_finite() {
            return Err(Error::NonFinite { witness: probes[i].moduli() });
        }
        if v > sup {
            sup = v;
            arg = i;
        }
    }
    reports.push(
        VerificationReport::strict_below("sup_bound", sup, 1.0)
            .with_witness(probes[arg].moduli())
            .with_samples(cfg.sup_samples, cfg.seed),
    );

    sort_reports(&mut reports);
    Ok(reports)
}

/// Builds the requested certificate at `z` and verifies it.
pub fn verify_certificate(
    ell: &Ellipsoid,
    z: &Point,
    which: CertificateKind,
    cfg: &VerifyConfig,
) -> Result<Vec<VerificationReport>> {
    match which {
        CertificateKind::Green => verify_bundle(ell, z, &GreenCertificate::build(ell, z)?, cfg),
        CertificateKind::Mobius => verify_bundle(ell, z, &MobiusCertificate::build(ell, z)?, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(r: &[VerificationReport]) -> bool {
        r.iter().all(|r| r.pass)
    }

    #[test]
    fn ball_green_bundle_passes() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let z = Point::from_moduli(&[0.1, 0.72]);
        let r = verify_certificate(&e, &z, CertificateKind::Green, &VerifyConfig::default()).unwrap();
        assert!(all_pass(&r), "{r:#?}");
        let names: Vec<&str> = r.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(names, ["consistency", "global_argmax", "global_value", "stationarity", "sup_bound"]);
    }

    #[test]
    fn mobius_bundle_passes_in_convex_case() {
        let e = Ellipsoid::new(vec![1.0, 0.8, 1.5], 1).unwrap();
        let z = Point::from_polar(&[0.4, 0.5, 0.6], &[1.0, 2.0, -2.5]);
        let r = verify_certificate(&e, &z, CertificateKind::Mobius, &VerifyConfig::default()).unwrap();
        assert!(all_pass(&r), "{r:#?}");
    }

    #[test]
    fn wrong_exponent_fails_stationarity() {
        let e = Ellipsoid::ball(2, 1).unwrap();
        let z = Point::from_moduli(&[0.3, 0.4]);
        let good = MobiusCertificate::build(&e, &z).unwrap();
        let a = good.alpha().unwrap()[0];
        let bad =
            MobiusCertificate::with_family(&e, &z, crate::certificates::HFamily::Exponential { alpha: vec![a * 1.5] })
                .unwrap();
        let r = verify_bundle(&e, &z, &bad, &VerifyConfig::default()).unwrap();
        let st = r.iter().find(|r| r.check == "stationarity").unwrap();
        assert!(!st.pass);
    }

    #[test]
    fn zero_product_coordinate_is_a_precondition_error() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let err =
            verify_certificate(&e, &Point::from_moduli(&[0.0, 0.5]), CertificateKind::Green, &VerifyConfig::default())
                .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
