//! Deterministic samplers for points of an ellipsoid.
//!
//! Points are generated in mass coordinates `x_j = |z_j|^{2p_j}` by stick
//! breaking over a shuffled coordinate order, so each coordinate's mass
//! covers `[0, 1 − slack_floor)` regardless of the exponents.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};

const PRIMES: [u64; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// Converts masses and phases to a point.
pub fn point_from_masses(ell: &Ellipsoid, masses: &[f64], phases: &[f64]) -> Point {
    let moduli: Vec<f64> =
        masses.iter().zip(ell.exponents()).map(|(&x, &p)| if x <= 0.0 { 0.0 } else { x.powf(0.5 / p) }).collect();
    Point::from_polar(&moduli, phases)
}

/// Pseudo-random interior points with slack at least `slack_floor`.
pub fn sample_interior(ell: &Ellipsoid, count: usize, seed: u64, slack_floor: f64) -> Result<Vec<Point>> {
    if count == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    if !(0.0..1.0).contains(&slack_floor) {
        return Err(Error::invalid(format!("slack floor {slack_floor} must lie in [0, 1)")));
    }
    let n = ell.dim();
    // Shave a little so that rounding in the modulus round trip keeps the floor.
    let budget = (1.0 - slack_floor) * (1.0 - 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        order.shuffle(&mut rng);
        let mut masses = vec![0.0; n];
        let mut remaining = budget;
        for &j in &order {
            let x = remaining * rng.gen::<f64>();
            masses[j] = x;
            remaining -= x;
        }
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..PI)).collect();
        out.push(point_from_masses(ell, &masses, &phases));
    }
    Ok(out)
}

/// Radical inverse of `index` in `base` (van der Corput).
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    acc
}

/// Shifted Halton point in `[0,1)^dim` (Cranley–Patterson rotation by `shift`).
fn halton(index: u64, shift: &[f64]) -> Vec<f64> {
    shift.iter().enumerate().map(|(i, s)| (radical_inverse(index + 1, PRIMES[i]) + s).fract()).collect()
}

/// Probe points for supremum checks: half low-discrepancy interior points,
/// a quarter at slack `1e-2` and a quarter at slack `1e-4`. Every other point
/// has all phases zero, where exponential factors are largest.
pub fn sup_probe_points(ell: &Ellipsoid, count: usize, seed: u64) -> Vec<Point> {
    let n = ell.dim();
    let dims = (2 * n).min(PRIMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
    (0..count)
        .map(|i| {
            let u = halton(i as u64, &shift);
            let (total, fill_last) = match i % 4 {
                0 | 1 => (1.0 - 1e-12, false),
                2 => (1.0 - 1e-2, true),
                _ => (1.0 - 1e-4, true),
            };
            let mut masses = vec![0.0; n];
            let mut remaining = total;
            for step in 0..n {
                let j = (i + step) % n;
                let x = if fill_last && step == n - 1 { remaining } else { remaining * u[step % dims] };
                masses[j] = x;
                remaining -= x;
            }
            let phases: Vec<f64> =
                if i % 2 == 0 { vec![0.0; n] } else { (0..n).map(|j| 2.0 * PI * u[(n + j) % dims] - PI).collect() };
            point_from_masses(ell, &masses, &phases)
        })
        .collect()
}
