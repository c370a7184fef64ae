//! Scans of `R` along segments, locating changes of the effective index.

use serde::{Deserialize, Serialize};

use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};
use crate::formula::{self, formula_at_index};

use super::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// The change happens between samples `index` and `index + 1`.
    pub index: usize,
    /// Segment parameter of the crossing, located by bisection.
    pub lambda: f64,
    pub d_before: usize,
    pub d_after: usize,
    pub region_before: Vec<usize>,
    pub region_after: Vec<usize>,
    /// Spread of the product formula over the indices between `d_before`
    /// and `d_after`, evaluated at the crossing.
    pub index_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityScan {
    pub report: VerificationReport,
    pub transitions: Vec<Transition>,
    /// Sample intervals where the region label changed while `d` did not.
    pub region_only_changes: Vec<usize>,
    /// Some samples fell outside `E` and were skipped.
    pub clipped: bool,
}

fn lerp(a: &Point, b: &Point, lambda: f64) -> Point {
    Point::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x * (1.0 - lambda) + y * lambda).collect())
}

/// Evaluates `R` at `samples` equally spaced points of the segment `[a, b]`
/// and reports the largest jump between adjacent samples.
pub fn continuity_scan(ell: &Ellipsoid, a: &Point, b: &Point, samples: usize, jump_tol: f64) -> Result<ContinuityScan> {
    if !ell.is_interior(a)? || !ell.is_interior(b)? {
        return Err(Error::domain("segment endpoints must be interior"));
    }
    let samples = samples.max(1);
    let lambda = |i: usize| if samples == 1 { 0.0 } else { i as f64 / (samples - 1) as f64 };
    let evals: Vec<_> = crate::par::map_range(samples, |i| formula::evaluate(ell, &lerp(a, b, lambda(i))).ok());
    let clipped = evals.iter().any(Option::is_none);

    let mut max_jump = 0.0f64;
    let mut witness = None;
    let mut transitions = Vec::new();
    let mut region_only_changes = Vec::new();
    let mut prev: Option<(usize, &formula::EvalResult)> = None;
    for (i, e) in evals.iter().enumerate() {
        let Some(e) = e else { continue };
        if let Some((j, p)) = prev {
            let jump = (e.value - p.value).abs();
            if jump > max_jump {
                max_jump = jump;
                witness = Some(vec![lambda(j), lambda(i)]);
            }
            if p.d != e.d {
                transitions.push(locate(ell, a, b, lambda(j), lambda(i), p, e, j)?);
            } else if p.region != e.region {
                region_only_changes.push(j);
            }
        }
        prev = Some((i, e));
    }
    let mut report = VerificationReport::deviation("continuity", max_jump, jump_tol).with_samples(samples, 0);
    if let Some(w) = witness {
        report = report.with_witness(w);
    }
    Ok(ContinuityScan { report, transitions, region_only_changes, clipped })
}

#[allow(clippy::too_many_arguments)]
fn locate(
    ell: &Ellipsoid,
    a: &Point,
    b: &Point,
    mut lo: f64,
    mut hi: f64,
    before: &formula::EvalResult,
    after: &formula::EvalResult,
    index: usize,
) -> Result<Transition> {
    let d_lo = before.d;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match formula::evaluate(ell, &lerp(a, b, mid)) {
            Ok(e) if e.d == d_lo => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    let sorted = ell.sort_first_k(&lerp(a, b, lo))?;
    let (s0, s1) = (before.d.min(after.d), before.d.max(after.d));
    let vals: Vec<f64> = (s0..=s1).map(|s| formula_at_index(&sorted, s)).collect();
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    Ok(Transition {
        index,
        lambda: lo,
        d_before: before.d,
        d_after: after.d,
        region_before: before.region.clone(),
        region_after: after.region.clone(),
        index_gap: max - min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_region_segment() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let s =
            continuity_scan(&e, &Point::from_moduli(&[0.1, 0.1]), &Point::from_moduli(&[0.2, 0.3]), 500, 1e-3).unwrap();
        assert!(s.transitions.is_empty());
        assert!(s.report.pass);
    }

    #[test]
    fn crossing_near_sqrt_half() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let a = Point::from_moduli(&[0.1, 0.7]);
        let b = Point::from_moduli(&[0.1, 0.74]);
        let s = continuity_scan(&e, &a, &b, 10_000, 1e-6).unwrap();
        assert_eq!(s.transitions.len(), 1);
        let t = &s.transitions[0];
        assert_eq!((t.d_before, t.d_after), (2, 1));
        // 2|z_2|² = c_2 = 1 at |z_2| = √½.
        let z2 = 0.7 + 0.04 * t.lambda;
        assert!((z2 - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(t.index_gap < 1e-9);
        assert!(s.report.pass, "{:?}", s.report);
        assert!(s.region_only_changes.is_empty());
    }

    #[test]
    fn degenerate_segment_has_zero_jump() {
        let e = Ellipsoid::new(vec![0.4, 2.0], 2).unwrap();
        let z = Point::from_moduli(&[0.3, 0.6]);
        let s = continuity_scan(&e, &z, &z, 100, 1e-15).unwrap();
        assert!(s.report.measured <= 1e-15);
        assert!(s.report.pass);
    }

    #[test]
    fn exterior_endpoint_is_rejected() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        assert!(
            continuity_scan(&e, &Point::from_moduli(&[0.9, 0.9]), &Point::from_moduli(&[0.1, 0.1]), 10, 1.0).is_err()
        );
    }

    #[test]
    fn nonconvex_segment_is_clipped() {
        let e = Ellipsoid::uniform(0.25, 2, 2).unwrap();
        let s =
            continuity_scan(&e, &Point::from_moduli(&[0.9, 0.0]), &Point::from_moduli(&[0.0, 0.9]), 101, 1.0).unwrap();
        assert!(s.clipped);
    }
}
