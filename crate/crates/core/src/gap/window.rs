//! The function `φ(t) = (1 − t^p)^{−q}`, its concavity window `[0, b]`, the
//! chord threshold `c`, and the exclusion scan for `|f(t)| / φ(t)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::report::VerificationReport;

const WINDOW_GRID: usize = 1000;
const WINDOW_LO: f64 = 1e-10;
const WINDOW_HI: f64 = 0.999;
/// Points per decade when scanning for `c`.
const C_PER_DECADE: usize = 20;
const C_FLOOR: f64 = 1e-300;
const EXCLUSION_UNIFORM: usize = 10_000;
const EXCLUSION_REL_TOL: f64 = 1e-6;

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) || !(q > 0.0 && q.is_finite()) {
        return Err(Error::invalid(format!("need p in (0,1) and q > 0, got p = {p}, q = {q}")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} must lie in [0, 1)")));
    }
    Ok(())
}

/// `(1 − t^p)^{−q}`.
pub fn phi(p: f64, q: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((-q * (-t.powf(p)).ln_1p()).exp())
}

/// `φ(t) − 1`, accurate for tiny `t`.
fn phi_minus_one(p: f64, q: f64, t: f64) -> f64 {
    (-q * (-t.powf(p)).ln_1p()).exp_m1()
}

/// `p q t^{p−1} (1 − t^p)^{−q−1}`; infinite at zero.
pub fn phi_prime(p: f64, q: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(f64::INFINITY);
    }
    let tp = t.powf(p);
    Ok(p * q * ((p - 1.0) * t.ln() - (q + 1.0) * (-tp).ln_1p()).exp())
}

/// Geometric grid of `n` points from `lo` to `hi`.
fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// End `b` of the strictly decreasing run of `φ'` on a geometric grid.
///
/// The minimum of `φ'` can sit anywhere between the last two points of the
/// run, so `b` is taken one grid step before the last decreasing point.
pub fn concavity_window(p: f64, q: f64) -> Result<f64> {
    check_pq(p, q)?;
    let grid = geometric(WINDOW_LO, WINDOW_HI, WINDOW_GRID);
    let mut last = 0;
    let mut prev = phi_prime(p, q, grid[0])?;
    for (i, &t) in grid.iter().enumerate().skip(1) {
        let d = phi_prime(p, q, t)?;
        if !(d < prev) {
            break;
        }
        last = i;
        prev = d;
    }
    let b = grid[last.saturating_sub(1)];
    if b <= 1e-8 {
        return Err(Error::Invariant(format!("no concavity window above 1e-8 for p = {p}, q = {q}")));
    }
    Ok(b)
}

/// `φ(0) + (b/c)(φ(c) − φ(0)) − φ(b) − 2`.
pub fn chord_margin(p: f64, q: f64, b: f64, c: f64) -> f64 {
    1.0 + (b / c) * phi_minus_one(p, q, c) - phi(p, q, b).unwrap_or(f64::INFINITY) - 2.0
}

/// Scans `c` downward from `b` on a geometric grid and returns the first
/// (largest) grid point with positive chord margin, with that margin.
pub fn find_c(p: f64, q: f64, b: f64) -> Result<(f64, f64)> {
    check_pq(p, q)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::invalid(format!("window end b = {b} must lie in (0,1)")));
    }
    let step = 10f64.powf(-1.0 / C_PER_DECADE as f64);
    let mut c = b * step;
    while c > C_FLOOR {
        let m = chord_margin(p, q, b, c);
        if m > 0.0 {
            return Ok((c, m));
        }
        c *= step;
    }
    Err(Error::Invariant(format!("chord inequality never holds above {C_FLOOR} for p = {p}, q = {q}, b = {b}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstructionWindow {
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub c: f64,
    pub margin: f64,
}

impl ObstructionWindow {
    pub fn find(p: f64, q: f64) -> Result<Self> {
        let b = concavity_window(p, q)?;
        let (c, margin) = find_c(p, q, b)?;
        Ok(Self { p, q, b, c, margin })
    }

    /// Rechecks both invariants: `φ'` decreasing on a dense grid of `(0, b]`
    /// and a positive chord margin at `c`.
    pub fn is_valid(&self) -> bool {
        let grid = geometric(WINDOW_LO.min(self.b / 2.0), self.b, 4 * WINDOW_GRID);
        let decreasing = grid.windows(2).all(
            |w| matches!((phi_prime(self.p, self.q, w[0]), phi_prime(self.p, self.q, w[1])), (Ok(a), Ok(b)) if b < a),
        );
        decreasing && 0.0 < self.c && self.c < self.b && chord_margin(self.p, self.q, self.b, self.c) > 0.0
    }

    /// Scan grid on `[0, b]`: uniform points plus a geometric run inside `(0, c]`.
    pub fn scan_grid(&self) -> Vec<f64> {
        let mut t: Vec<f64> = (0..=EXCLUSION_UNIFORM).map(|i| self.b * i as f64 / EXCLUSION_UNIFORM as f64).collect();
        let lo = (self.c * 1e-12).max(f64::MIN_POSITIVE);
        t.extend(geometric(lo, self.c, 400));
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }
}

/// Polynomial with complex coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial(pub Vec<Complex64>);

impl Polynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Degree at most 10, coefficients uniform in the unit disc.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let deg = rng.gen_range(0..=10);
        Self(
            (0..=deg)
                .map(|_| {
                    let r = rng.gen::<f64>().sqrt();
                    Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                })
                .collect(),
        )
    }
}

/// Relative increase below which two ratio values count as equal.
const ROUNDING_BAND: f64 = 16.0 * f64::EPSILON;

/// First grid point where `|f(t)| / φ(t)` attains its maximum over `grid`.
/// Increases within rounding of the running best are ignored.
pub fn ratio_argmax(window: &ObstructionWindow, f: &Polynomial, grid: &[f64]) -> f64 {
    let mut best = f64::NAN;
    let mut arg = 0.0;
    for &t in grid {
        let v = f.eval(Complex64::new(t, 0.0)).norm() * (1.0 - t.powf(window.p)).powf(window.q);
        if best.is_nan() || v > best + ROUNDING_BAND * best.abs() {
            best = v;
            arg = t;
        }
    }
    arg
}

/// `(t, φ(t), |f(t)|/φ(t))` rows on a uniform grid of `[0, b]`.
pub fn profile_rows(window: &ObstructionWindow, f: &Polynomial, samples: usize) -> Vec<[f64; 3]> {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let t = window.b * i as f64 / (n - 1) as f64;
            let ph = phi(window.p, window.q, t).unwrap_or(f64::NAN);
            [t, ph, f.eval(Complex64::new(t, 0.0)).norm() / ph]
        })
        .collect()
}

/// Draws `trials` random polynomials and counts those whose ratio maximum on
/// the real segment `[0, b]` falls strictly inside `(0, c)`.
pub fn exclusion_demo(window: &ObstructionWindow, trials: usize, seed: u64) -> Result<VerificationReport> {
    if !window.is_valid() {
        return Err(Error::invalid(format!("obstruction window {window:?} is not valid")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Polynomial> = (0..trials)
        .map(|_| loop {
            let f = Polynomial::random(&mut rng);
            if f.0.iter().any(|a| a.norm() > 0.0) {
                break f;
            }
        })
        .collect();
    let grid = window.scan_grid();
    let argmax = crate::par::map(&polys, |f| ratio_argmax(window, f, &grid));
    let hits: Vec<f64> = argmax.into_iter().filter(|&t| t > 0.0 && t < window.c * (1.0 - EXCLUSION_REL_TOL)).collect();
    let mut report = VerificationReport::deviation("exclusion", hits.len() as f64, 0.0).with_samples(trials, seed);
    if !hits.is_empty() {
        report = report.with_witness(hits);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fd::fd_gradient;

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.3, 2.0, 0.0).unwrap(), 1.0);
        assert!((phi(0.5, 1.0, 0.25).unwrap() - 2.0).abs() < 1e-15);
        assert!(phi(0.5, 1.0, 1.0).is_err());
        assert!(phi_prime(0.5, 1.0, -0.1).is_err());
    }

    #[test]
    fn phi_prime_matches_differences() {
        for &(p, q) in &[(0.5, 1.0), (0.1, 0.25), (0.9, 5.0)] {
            let b = concavity_window(p, q).unwrap();
            for i in 0..50 {
                let t = 1e-4 + (b - 2e-4) * i as f64 / 49.0;
                let h = 1e-4 * t;
                let g = fd_gradient(|x: &[f64]| phi(p, q, x[0]).unwrap(), &[t], &[h]).unwrap()[0];
                let exact = phi_prime(p, q, t).unwrap();
                assert!(((g - exact) / exact).abs() < 1e-8, "p={p} q={q} t={t}: {g} vs {exact}");
            }
        }
    }

    #[test]
    fn window_examples() {
        let b = concavity_window(0.5, 1.0).unwrap();
        assert!(b > 0.0 && b < 1.0);
        assert!(phi_prime(0.5, 1.0, 1e-6).unwrap() > phi_prime(0.5, 1.0, 1e-3).unwrap());
        // φ' has its minimum at t^p = (1−p)/(1+pq).
        let t_star = (0.5f64 / 1.5).powf(2.0);
        assert!(b <= t_star && b > t_star * 0.95);
        let b95 = concavity_window(0.95, 1.0).unwrap();
        assert!(b95 > 0.0 && b95 < b);
        assert!(concavity_window(1.0, 1.0).is_err());
    }

    #[test]
    fn c_threshold_and_monotone_margin() {
        let w = ObstructionWindow::find(0.5, 1.0).unwrap();
        assert!(w.margin > 0.0 && w.is_valid());
        let mut prev = w.margin;
        let mut c = w.c;
        for _ in 0..40 {
            c *= 0.8;
            let m = chord_margin(w.p, w.q, w.b, c);
            assert!(m > prev);
            prev = m;
        }
        // The step above c fails the inequality.
        let above = w.c * 10f64.powf(1.0 / C_PER_DECADE as f64);
        assert!(chord_margin(w.p, w.q, w.b, above) <= 0.0);
    }

    #[test]
    fn chord_slope_blows_up() {
        let slopes: Vec<f64> = [1e-2, 1e-4, 1e-8].iter().map(|&c| phi_minus_one(0.5, 1.0, c) / c).collect();
        assert!(slopes[0] < slopes[1] && slopes[1] < slopes[2] && slopes[2] > 1e3);
    }

    #[test]
    fn window_grid_is_valid_everywhere() {
        for &p in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            for &q in &[0.25, 1.0, 5.0] {
                let w = ObstructionWindow::find(p, q).unwrap();
                assert!(w.is_valid(), "{w:?}");
            }
        }
    }

    #[test]
    fn simple_candidates() {
        let w = ObstructionWindow::find(0.5, 1.0).unwrap();
        let grid = w.scan_grid();
        let id = Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let t = ratio_argmax(&w, &id, &grid);
        assert!((t - w.b).abs() < 1e-15, "{t} vs {}", w.b);
        let one = Polynomial(vec![Complex64::new(0.7, 0.0)]);
        assert_eq!(ratio_argmax(&w, &one, &grid), 0.0);
    }

    #[test]
    fn random_polynomials_avoid_the_gap() {
        let w = ObstructionWindow::find(0.5, 1.0).unwrap();
        let r = exclusion_demo(&w, 200, 11).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.samples, 200);
    }

    #[test]
    fn profile_rows_start_at_zero() {
        let w = ObstructionWindow::find(0.6, 0.5).unwrap();
        let rows = profile_rows(&w, &Polynomial(vec![Complex64::new(0.5, 0.0)]), 11);
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0], [0.0, 1.0, 0.5]);
        assert_eq!(rows[10][0], w.b);
    }
}
