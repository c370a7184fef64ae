//! The polydisc limit: with all exponents equal to `P → ∞` the ellipsoid
//! exhausts the unit polydisc and `R` decreases to `Π_{j≤k} |z_j|`.

use serde::{Deserialize, Serialize};

use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};
use crate::formula::{self, polydisc_formula};

use super::report::VerificationReport;

/// Allowed increase between consecutive ladder values.
pub const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolydiscLimit {
    pub report: VerificationReport,
    /// `(P, R)` for every ladder exponent at which `z` lies in the ellipsoid.
    pub values: Vec<(f64, f64)>,
    /// Ladder exponents skipped because `z` is outside that ellipsoid.
    pub skipped: Vec<f64>,
    pub monotone: bool,
    pub limit: f64,
}

/// Default ladder `1, 2, 4, …, 256`.
pub fn default_ladder() -> Vec<f64> {
    (0..=8).map(|i| f64::from(1u32 << i)).collect()
}

pub fn polydisc_limit_test(z: &Point, k: usize, ladder: &[f64], gap_tol: f64) -> Result<PolydiscLimit> {
    let limit = polydisc_formula(z, k)?;
    let n = z.dim();
    let mut values = Vec::new();
    let mut skipped = Vec::new();
    for &p in ladder {
        let ell = Ellipsoid::uniform(p, n, k)?;
        if !ell.is_interior(z)? {
            skipped.push(p);
            continue;
        }
        values.push((p, formula::evaluate(&ell, z)?.value));
    }
    let Some(&(_, last)) = values.last() else {
        return Err(Error::domain("point lies outside every ellipsoid of the ladder"));
    };
    let monotone = values.windows(2).all(|w| w[1].1 <= w[0].1 + MONOTONE_SLACK);
    let gap = (last - limit).abs();
    let mut report = VerificationReport::deviation("polydisc_limit", gap, gap_tol)
        .with_witness(values.iter().map(|v| v.1).collect());
    report.pass &= monotone;
    report.samples = values.len();
    Ok(PolydiscLimit { report, values, skipped, monotone, limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_converges_monotonically() {
        let out = polydisc_limit_test(&Point::from_moduli(&[0.3, 0.4]), 2, &default_ladder(), 1e-3).unwrap();
        assert!(out.monotone && out.report.pass);
        assert_eq!(out.limit, 0.3 * 0.4);
        assert!(out.skipped.is_empty());
    }

    #[test]
    fn zero_coordinate_gives_zero_ladder() {
        let out = polydisc_limit_test(&Point::from_moduli(&[0.0, 0.4]), 1, &default_ladder(), 1e-3).unwrap();
        assert!(out.values.iter().all(|v| v.1 == 0.0));
        assert!(out.report.pass);
    }

    #[test]
    fn outside_polydisc_is_domain_error() {
        let err = polydisc_limit_test(&Point::from_moduli(&[1.0, 0.4]), 1, &default_ladder(), 1e-3).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn small_exponents_are_skipped_outside_ball() {
        let out = polydisc_limit_test(&Point::from_moduli(&[0.9, 0.8]), 2, &default_ladder(), 1e-3).unwrap();
        assert_eq!(out.skipped, vec![1.0, 2.0]);
        assert!(out.monotone);
    }
}
