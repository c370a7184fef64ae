//! Extremal functions witnessing `R_E(A, z)`.
//!
//! Everything here works in the sorted coordinate frame of the base point
//! `z` (first `k` slots ordered by `p_j |z_j|^{2p_j}`). Slots `1..=d` carry the
//! product factor; the tail slots `d+1..=n` span the lower-dimensional
//! ellipsoid `E'` on which the profile `(tail factor) · r_d^{q_d}` must peak
//! at the moduli of `z`.
//!
//! Certificates are built from moduli. Phases of the tail coordinates of `z`
//! are re-attached only when a holomorphic factor is evaluated at complex
//! arguments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ellipsoid::{Ellipsoid, Point, SortedPoint};
use crate::error::{Error, Result};
use crate::formula::{self, EvalResult};

/// Negative exponents above this threshold are treated as rounding noise.
const ALPHA_NOISE: f64 = 1e-9;

/// Shared data of a certificate: the sorted base point and its evaluation.
#[derive(Debug, Clone)]
struct Frame {
    sorted: SortedPoint,
    eval: EvalResult,
    phases: Vec<f64>,
}

impl Frame {
    fn new(ell: &Ellipsoid, z: &Point) -> Result<Self> {
        let eval = formula::evaluate(ell, z)?;
        let sorted = ell.sort_first_k(z)?;
        if sorted.moduli[..eval.d].contains(&0.0) {
            return Err(Error::Precondition(
                "a product coordinate vanishes, R = 0 and no certificate is needed".into(),
            ));
        }
        let phases = sorted.to_sorted(&z.phases());
        Ok(Self { sorted, eval, phases })
    }

    fn d(&self) -> usize {
        self.eval.d
    }

    /// `Σ_{j≤d} ln(2p_j)/(2p_j) + q_d ln q_d`.
    fn log_front_constant(&self) -> f64 {
        let q = self.eval.q_d;
        let s: f64 = self.sorted.p[..self.d()].iter().map(|&p| (2.0 * p).ln() / (2.0 * p)).sum();
        s + q * q.ln()
    }

    fn reorder(&self, zeta: &Point) -> Result<Vec<Complex64>> {
        if zeta.dim() != self.sorted.n() {
            return Err(Error::DimensionMismatch { expected: self.sorted.n(), got: zeta.dim() });
        }
        Ok(self.sorted.to_sorted(zeta.coords()))
    }

    fn tail_exponents(&self) -> &[f64] {
        &self.sorted.p[self.d()..]
    }

    fn tail_base(&self) -> &[f64] {
        &self.sorted.moduli[self.d()..]
    }

    fn check_tail(&self, tail: &[Complex64]) -> Result<()> {
        let m = self.sorted.n() - self.d();
        if tail.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: tail.len() });
        }
        Ok(())
    }
}

/// The embedding `ι_z : 𝔻^d → E`,
/// `ζ ↦ (ζ_1 (c_d/2p_1)^{1/2p_1}, …, ζ_d (c_d/2p_d)^{1/2p_d}, z_{d+1}, …, z_n)`
/// in sorted coordinates, returned in the original coordinate order.
#[derive(Debug, Clone)]
pub struct Embedding {
    frame: Frame,
    coords: Vec<Complex64>,
}

impl Embedding {
    pub fn new(ell: &Ellipsoid, z: &Point) -> Result<Self> {
        let eval = formula::evaluate(ell, z)?;
        let sorted = ell.sort_first_k(z)?;
        let coords = sorted.to_sorted(z.coords());
        let phases = sorted.to_sorted(&z.phases());
        Ok(Self { frame: Frame { sorted, eval, phases }, coords })
    }

    pub fn d(&self) -> usize {
        self.frame.d()
    }

    fn scale(&self, i: usize) -> f64 {
        let two_p = 2.0 * self.frame.sorted.p[i];
        (self.frame.eval.c_d / two_p).powf(1.0 / two_p)
    }

    pub fn map(&self, zeta: &[Complex64]) -> Result<Point> {
        let d = self.d();
        if zeta.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: zeta.len() });
        }
        if let Some(j) = zeta.iter().position(|w| !(w.norm() < 1.0)) {
            return Err(Error::domain(format!("ζ_{} lies outside the unit disc", j + 1)));
        }
        let mut sorted = self.coords.clone();
        for (i, w) in zeta.iter().enumerate() {
            sorted[i] = w * self.scale(i);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); sorted.len()];
        for (slot, &orig) in self.frame.sorted.perm.iter().enumerate() {
            out[orig] = sorted[slot];
        }
        Ok(Point::new(out))
    }

    /// The polydisc point mapped onto `z`; the product of its moduli is `R`.
    pub fn preimage_of_base(&self) -> Vec<Complex64> {
        (0..self.d()).map(|i| self.coords[i] / self.scale(i)).collect()
    }
}

/// The monomial extremal `f(ζ) = Π_j ζ_j (2p_j / c_d(z))^{1/(2p_j)}` for
/// base points with `d = k = n`.
#[derive(Debug, Clone)]
pub struct MonomialCertificate {
    p: Vec<f64>,
    c_d: f64,
    value: f64,
}

impl MonomialCertificate {
    pub fn new(ell: &Ellipsoid, z: &Point) -> Result<Self> {
        let eval = formula::evaluate(ell, z)?;
        let n = ell.dim();
        if !(eval.d == ell.k() && ell.k() == n) {
            return Err(Error::Precondition(format!(
                "monomial extremal needs d = k = n, got d = {}, k = {}, n = {n}",
                eval.d,
                ell.k()
            )));
        }
        Ok(Self { p: ell.exponents().to_vec(), c_d: eval.c_d, value: eval.value })
    }

    pub fn eval(&self, zeta: &Point) -> Result<Complex64> {
        if zeta.dim() != self.p.len() {
            return Err(Error::DimensionMismatch { expected: self.p.len(), got: zeta.dim() });
        }
        Ok(zeta.coords().iter().zip(&self.p).map(|(w, &p)| w * (2.0 * p / self.c_d).powf(0.5 / p)).product())
    }

    pub fn r_value(&self) -> f64 {
        self.value
    }
}

/// Green-side certificate: `v_α(ζ') = Π_{d<j≤k} |ζ_j|^{1+α_j} Π_{j>k} |ζ_j|^{α_j}`
/// with `α` solving the logarithmic stationarity system at `z`, and the
/// assembled `u = M^{-1} (Π_{j≤d} (2p_j)^{1/2p_j} |ζ_j|) q_d^{q_d} v(ζ')`.
#[derive(Debug, Clone)]
pub struct GreenCertificate {
    frame: Frame,
    alpha: Vec<f64>,
    log_m: f64,
}

impl GreenCertificate {
    pub fn build(ell: &Ellipsoid, z: &Point) -> Result<Self> {
        let frame = Frame::new(ell, z)?;
        let (d, k) = (frame.d(), ell.k());
        let q = frame.eval.q_d;
        let r = frame.eval.r_d;
        let s = &frame.sorted;
        let mut alpha = Vec::with_capacity(s.n() - d);
        for j in d..s.n() {
            let base = 2.0 * s.p[j] * q * s.masses[j] / r;
            let a = if j < k { base - 1.0 } else { base };
            if a < -ALPHA_NOISE {
                return Err(Error::Invariant(format!(
                    "Green exponent α_{} = {a} is negative; d-selection is inconsistent",
                    j + 1
                )));
            }
            alpha.push(a.max(0.0));
        }
        let mut cert = Self { frame, alpha, log_m: 0.0 };
        let t0 = cert.frame.tail_base().to_vec();
        cert.log_m = cert.log_v_real(&t0) + q * r.ln();
        Ok(cert)
    }

    fn exponent(&self, i: usize) -> f64 {
        let slot = self.frame.d() + i;
        if slot < self.frame.sorted.k {
            1.0 + self.alpha[i]
        } else {
            self.alpha[i]
        }
    }

    fn log_v_real(&self, t: &[f64]) -> f64 {
        t.iter()
            .enumerate()
            .map(|(i, &t)| {
                let e = self.exponent(i);
                if e == 0.0 {
                    0.0
                } else if t == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    e * t.ln()
                }
            })
            .sum()
    }

    pub fn d(&self) -> usize {
        self.frame.d()
    }

    /// Exponents `α_{d+1}, …, α_n` (sorted frame).
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn m(&self) -> f64 {
        self.log_m.exp()
    }

    pub fn log_m(&self) -> f64 {
        self.log_m
    }

    pub fn q_d(&self) -> f64 {
        self.frame.eval.q_d
    }

    pub fn eval_result(&self) -> &EvalResult {
        &self.frame.eval
    }

    pub fn r_value(&self) -> f64 {
        self.frame.eval.value
    }

    pub fn perm(&self) -> &[usize] {
        &self.frame.sorted.perm
    }

    /// Exponents of the tail ellipsoid `E'`.
    pub fn tail_exponents(&self) -> &[f64] {
        self.frame.tail_exponents()
    }

    /// Moduli `|z_{d+1}|, …, |z_n|` (sorted frame).
    pub fn tail_base(&self) -> &[f64] {
        self.frame.tail_base()
    }

    /// `ln v_α` at real nonnegative tail moduli.
    pub fn log_v(&self, t: &[f64]) -> Result<f64> {
        if t.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch { expected: self.alpha.len(), got: t.len() });
        }
        Ok(self.log_v_real(t))
    }

    /// `v_α` on tail coordinates.
    pub fn eval_v(&self, tail: &[Complex64]) -> Result<f64> {
        self.frame.check_tail(tail)?;
        let t: Vec<f64> = tail.iter().map(|w| w.norm()).collect();
        Ok(self.log_v_real(&t).exp())
    }

    /// The assembled log-plurisubharmonic `u` at a point of `E` (original order).
    pub fn assemble_u(&self, zeta: &Point) -> Result<f64> {
        let w = self.frame.reorder(zeta)?;
        let d = self.d();
        if w[..d].iter().any(|c| c.norm() == 0.0) {
            return Ok(0.0);
        }
        let front: f64 = w[..d].iter().map(|c| c.norm().ln()).sum();
        let v = self.eval_v(&w[d..])?;
        Ok((front + self.frame.log_front_constant() - self.log_m).exp() * v)
    }
}

/// The holomorphic tail factor `h` of a Möbius certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum HFamily {
    /// `h_α(ζ') = Π_{d<j≤k} ζ_j e^{α_j ζ_j} Π_{j>k} e^{α_j ζ_j}`.
    Exponential { alpha: Vec<f64> },
    /// `h(ζ) = ζ / (r − ζ)^{e}` on a one-dimensional tail, `r > 1`, `e > 0`.
    RationalPower { exponent: f64, pole: f64 },
}

impl HFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            HFamily::Exponential { .. } => "exponential",
            HFamily::RationalPower { .. } => "rational-power",
        }
    }
}

/// Möbius-side certificate: a holomorphic `h` on `E'` and the assembled
/// `f = M^{-1} (Π_{j≤d} (2p_j)^{1/2p_j} ζ_j) q_d^{q_d} h(ζ')`.
#[derive(Debug, Clone)]
pub struct MobiusCertificate {
    frame: Frame,
    family: HFamily,
    feasible: bool,
    /// Tail slots in `d+1..=k` whose base coordinate vanishes.
    degenerate: Vec<bool>,
    log_m: f64,
}

impl MobiusCertificate {
    /// The exponential family with `α` solving the stationarity system
    /// `1/t_j + α_j = 2p_j q_d t_j^{2p_j−1} / r_d` (the `1/t_j` term only for
    /// slots up to `k`).
    pub fn build(ell: &Ellipsoid, z: &Point) -> Result<Self> {
        let frame = Frame::new(ell, z)?;
        let (d, k) = (frame.d(), ell.k());
        let q = frame.eval.q_d;
        let r = frame.eval.r_d;
        let s = &frame.sorted;
        let mut alpha = Vec::with_capacity(s.n() - d);
        let mut degenerate = Vec::with_capacity(s.n() - d);
        for j in d..s.n() {
            let t = s.moduli[j];
            let grad = if t == 0.0 { 0.0 } else { 2.0 * s.p[j] * q * s.masses[j] / (t * r) };
            let (a, degen) = if j < k {
                if t == 0.0 {
                    (0.0, true)
                } else {
                    (grad - 1.0 / t, false)
                }
            } else {
                (grad, false)
            };
            alpha.push(a);
            degenerate.push(degen);
        }
        let feasible = alpha.iter().all(|&a| a >= -ALPHA_NOISE);
        let alpha: Vec<f64> =
            alpha.into_iter().map(|a| if (-ALPHA_NOISE..0.0).contains(&a) { 0.0 } else { a }).collect();
        Self::assemble(frame, HFamily::Exponential { alpha }, feasible, degenerate)
    }

    /// A certificate from an explicitly supplied tail factor.
    pub fn with_family(ell: &Ellipsoid, z: &Point, family: HFamily) -> Result<Self> {
        let frame = Frame::new(ell, z)?;
        let m = frame.sorted.n() - frame.d();
        let feasible = match &family {
            HFamily::Exponential { alpha } => {
                if alpha.len() != m {
                    return Err(Error::DimensionMismatch { expected: m, got: alpha.len() });
                }
                alpha.iter().all(|&a| a >= 0.0)
            }
            HFamily::RationalPower { exponent, pole } => {
                if m != 1 {
                    return Err(Error::Precondition(format!(
                        "rational-power factor needs a one-dimensional tail, got {m}"
                    )));
                }
                *pole > 1.0 && *exponent > 0.0
            }
        };
        Self::assemble(frame, family, feasible, vec![false; m])
    }

    fn assemble(frame: Frame, family: HFamily, feasible: bool, degenerate: Vec<bool>) -> Result<Self> {
        let mut cert = Self { frame, family, feasible, degenerate, log_m: 0.0 };
        let t0 = cert.frame.tail_base().to_vec();
        let log_h0 = cert.log_h_real(&t0);
        if !log_h0.is_finite() {
            return Err(Error::Precondition(format!("tail factor at the base point has log-modulus {log_h0}")));
        }
        cert.log_m = log_h0 + cert.frame.eval.q_d * cert.frame.eval.r_d.ln();
        Ok(cert)
    }

    /// `ln h` on the rotated (phase-free) frame, `None` where `h` vanishes.
    fn log_h_rotated(&self, w: &[Complex64]) -> Option<Complex64> {
        let d = self.frame.d();
        let k = self.frame.sorted.k;
        match &self.family {
            HFamily::Exponential { alpha } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, (&wi, &a)) in w.iter().zip(alpha).enumerate() {
                    if d + i < k {
                        if wi.norm() == 0.0 {
                            return None;
                        }
                        acc += wi.ln();
                    }
                    acc += wi * a;
                }
                Some(acc)
            }
            HFamily::RationalPower { exponent, pole } => {
                let wi = w[0];
                if wi.norm() == 0.0 {
                    return None;
                }
                Some(wi.ln() - *exponent * (Complex64::new(*pole, 0.0) - wi).ln())
            }
        }
    }

    fn log_h_real(&self, t: &[f64]) -> f64 {
        let w: Vec<Complex64> = t.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        self.log_h_rotated(&w).map_or(f64::NEG_INFINITY, |l| l.re)
    }

    pub fn d(&self) -> usize {
        self.frame.d()
    }

    pub fn family(&self) -> &HFamily {
        &self.family
    }

    pub fn alpha(&self) -> Option<&[f64]> {
        match &self.family {
            HFamily::Exponential { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    pub fn degenerate(&self) -> &[bool] {
        &self.degenerate
    }

    pub fn m(&self) -> f64 {
        self.log_m.exp()
    }

    pub fn log_m(&self) -> f64 {
        self.log_m
    }

    pub fn q_d(&self) -> f64 {
        self.frame.eval.q_d
    }

    pub fn eval_result(&self) -> &EvalResult {
        &self.frame.eval
    }

    pub fn r_value(&self) -> f64 {
        self.frame.eval.value
    }

    pub fn perm(&self) -> &[usize] {
        &self.frame.sorted.perm
    }

    pub fn tail_exponents(&self) -> &[f64] {
        self.frame.tail_exponents()
    }

    pub fn tail_base(&self) -> &[f64] {
        self.frame.tail_base()
    }

    /// Phases of the tail coordinates of `z` (sorted frame).
    pub fn tail_phases(&self) -> &[f64] {
        &self.frame.phases[self.frame.d()..]
    }

    fn log_h(&self, tail: &[Complex64]) -> Result<Option<Complex64>> {
        self.frame.check_tail(tail)?;
        let w: Vec<Complex64> =
            tail.iter().zip(self.tail_phases()).map(|(c, &theta)| c * Complex64::from_polar(1.0, -theta)).collect();
        Ok(self.log_h_rotated(&w))
    }

    /// `ln |h|` at complex tail coordinates given in the frame of `z`.
    pub fn log_abs_h(&self, tail: &[Complex64]) -> Result<f64> {
        Ok(self.log_h(tail)?.map_or(f64::NEG_INFINITY, |l| l.re))
    }

    /// `h` at complex tail coordinates given in the frame of `z`.
    pub fn eval_h(&self, tail: &[Complex64]) -> Result<Complex64> {
        Ok(self.log_h(tail)?.map_or(Complex64::new(0.0, 0.0), |l| l.exp()))
    }

    /// The assembled holomorphic `f` at a point of `E` (original order).
    pub fn assemble_f(&self, zeta: &Point) -> Result<Complex64> {
        if !self.feasible {
            return Err(Error::Precondition(
                "certificate is infeasible (negative exponent or invalid pole); refusing to assemble f".into(),
            ));
        }
        let w = self.frame.reorder(zeta)?;
        let d = self.d();
        let Some(log_h) = self.log_h(&w[d..])? else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        if w[..d].iter().any(|c| c.norm() == 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let front: Complex64 = w[..d].iter().map(|c| c.ln()).sum();
        Ok((front + log_h + (self.frame.log_front_constant() - self.log_m)).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(m: &[f64]) -> Point {
        Point::from_moduli(m)
    }

    #[test]
    fn embedding_examples() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let z = pt(&[0.5, 0.5]);
        let emb = Embedding::new(&e, &z).unwrap();
        let origin = emb.map(&[Complex64::new(0.0, 0.0); 2]).unwrap();
        assert_eq!(origin.moduli(), vec![0.0, 0.0]);
        let star = emb.preimage_of_base();
        for w in &star {
            assert!((w.norm() - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        }
        let prod: f64 = star.iter().map(|w| w.norm()).product();
        assert!((prod - 0.5).abs() < 1e-15);
        let back = emb.map(&star).unwrap();
        for (a, b) in back.coords().iter().zip(z.coords()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn embedding_keeps_tail_and_closes_at_boundary() {
        let e = Ellipsoid::new(vec![0.7, 1.9, 0.4], 2).unwrap();
        let z = pt(&[0.05, 0.7, 0.3]);
        let emb = Embedding::new(&e, &z).unwrap();
        let d = emb.d();
        assert_eq!(d, 1);
        let out = emb.map(&[Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(out.coords()[1], z.coords()[1]);
        assert_eq!(out.coords()[2], z.coords()[2]);
        let near = emb.map(&[Complex64::new(1.0 - 1e-12, 0.0)]).unwrap();
        let total: f64 = e.masses(&near).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(emb.map(&[Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn monomial_examples() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let z = pt(&[0.5, 0.5]);
        let f = MonomialCertificate::new(&e, &z).unwrap();
        assert!((f.eval(&z).unwrap().norm() - 0.5).abs() < 1e-15);
        assert_eq!(f.eval(&pt(&[0.0, 0.9])).unwrap().norm(), 0.0);
        let e1 = Ellipsoid::ball(2, 1).unwrap();
        assert!(matches!(MonomialCertificate::new(&e1, &z), Err(Error::Precondition(_))));
    }

    #[test]
    fn green_alpha_example() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let c = GreenCertificate::build(&e, &pt(&[0.1, 0.72])).unwrap();
        assert_eq!(c.d(), 1);
        assert!((c.alpha()[0] - 0.076_411_960_132_890_31).abs() < 1e-14);
        let v = c.eval_v(&[Complex64::new(0.72, 0.0)]).unwrap();
        assert!((v - 0.702_151_766_560_331_7).abs() < 1e-14);
        assert!((c.m() - v * 0.4816f64.powf(0.5)).abs() < 1e-14);
    }

    #[test]
    fn green_full_dimensional_and_zero_tail() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let c = GreenCertificate::build(&e, &pt(&[0.5, 0.5])).unwrap();
        assert!(c.alpha().is_empty());
        assert_eq!(c.m(), 1.0);
        let e = Ellipsoid::new(vec![1.0, 1.0, 2.0], 1).unwrap();
        let c = GreenCertificate::build(&e, &pt(&[0.3, 0.6, 0.0])).unwrap();
        assert_eq!(c.alpha()[1], 0.0);
    }

    #[test]
    fn u_matches_r_at_base() {
        let e = Ellipsoid::new(vec![0.6, 2.5, 1.0, 0.3], 3).unwrap();
        let z = Point::from_polar(&[0.3, 0.5, 0.4, 0.2], &[0.3, -1.0, 2.0, 0.7]);
        let c = GreenCertificate::build(&e, &z).unwrap();
        let r = c.r_value();
        assert!((c.assemble_u(&z).unwrap() / r - 1.0).abs() < 1e-12);
        assert_eq!(c.assemble_u(&pt(&[0.0, 0.5, 0.4, 0.2])).unwrap(), 0.0);
    }

    #[test]
    fn mobius_alpha_example() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let z = pt(&[0.1, 0.72]);
        let c = MobiusCertificate::build(&e, &z).unwrap();
        assert!(c.is_feasible());
        assert!((c.alpha().unwrap()[0] - 0.106_127_722_406_792_02).abs() < 1e-13);
        let f = c.assemble_f(&z).unwrap();
        assert!((f.norm() - 0.144_097_604_426_058_76).abs() < 1e-14);
        assert_eq!(c.assemble_f(&pt(&[0.0, 0.3])).unwrap().norm(), 0.0);
    }

    #[test]
    fn mobius_phase_reattachment() {
        let e = Ellipsoid::new(vec![1.0, 0.8, 1.5], 1).unwrap();
        let z = Point::from_polar(&[0.4, 0.5, 0.6], &[1.0, 2.0, -2.5]);
        let c = MobiusCertificate::build(&e, &z).unwrap();
        let f = c.assemble_f(&z).unwrap();
        assert!((f.norm() / c.r_value() - 1.0).abs() < 1e-12);
        let tail = [z.coords()[1], z.coords()[2]];
        let h = c.eval_h(&tail).unwrap();
        let h_abs = c.eval_h(&[Complex64::new(0.5, 0.0), Complex64::new(0.6, 0.0)]);
        assert!(h.norm() >= h_abs.unwrap().norm());
    }

    #[test]
    fn mobius_refuses_infeasible() {
        let e = Ellipsoid::ball(2, 1).unwrap();
        let z = pt(&[0.3, 0.4]);
        let c = MobiusCertificate::with_family(&e, &z, HFamily::Exponential { alpha: vec![-0.5] }).unwrap();
        assert!(!c.is_feasible());
        assert!(matches!(c.assemble_f(&z), Err(Error::Precondition(_))));
    }

    #[test]
    fn large_exponent_tail_alpha_is_small() {
        let e = Ellipsoid::new(vec![1.0, 12.0], 1).unwrap();
        let c = MobiusCertificate::build(&e, &pt(&[0.3, 0.2])).unwrap();
        let a = c.alpha().unwrap()[0];
        assert!(a > 0.0 && a < 1e-6);
    }
}
