//! Complex ellipsoids `E = {Σ |z_j|^{2p_j} < 1}` with a hyperplane count `k`,
//! points in `ℂⁿ`, and the coordinate ordering used by the closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default strict interior threshold on the membership slack.
pub const DEFAULT_INTERIOR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    p: Vec<f64>,
    k: usize,
}

impl Ellipsoid {
    pub fn new(p: Vec<f64>, k: usize) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::invalid("ellipsoid needs at least one exponent"));
        }
        if let Some((j, v)) = p.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::invalid(format!("exponent p[{j}] = {v} must be finite and > 0")));
        }
        if k == 0 || k > p.len() {
            return Err(Error::invalid(format!("hyperplane count k = {k} must lie in [1, {}]", p.len())));
        }
        Ok(Self { p, k })
    }

    /// The unit ball `𝔹ₙ` (all exponents equal to one).
    pub fn ball(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![1.0; n], k)
    }

    /// All exponents equal to `exponent`.
    pub fn uniform(exponent: f64, n: usize, k: usize) -> Result<Self> {
        Self::new(vec![exponent; n], k)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn exponents(&self) -> &[f64] {
        &self.p
    }

    /// Convex iff every exponent is at least one half.
    pub fn is_convex(&self) -> bool {
        self.p.iter().all(|&p| p >= 0.5)
    }

    pub(crate) fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.dim() });
        }
        Ok(())
    }

    /// Per-coordinate mass `|z_j|^{2p_j}`.
    pub fn masses(&self, z: &Point) -> Result<Vec<f64>> {
        self.check_dim(z)?;
        Ok(z.coords.iter().zip(&self.p).map(|(c, &p)| mass(c.norm(), p)).collect())
    }

    pub fn membership(&self, z: &Point) -> Result<Membership> {
        let slack = one_minus_sum(&self.masses(z)?);
        Ok(Membership { inside: slack > 0.0, slack })
    }

    /// Membership with the default strict interior threshold.
    pub fn is_interior(&self, z: &Point) -> Result<bool> {
        Ok(self.membership(z)?.slack > DEFAULT_INTERIOR_TOL)
    }

    /// Reorders the first `k` coordinates so that `p_j |z_j|^{2p_j}` is
    /// nondecreasing. The sort is stable, so ties keep their original order.
    pub fn sort_first_k(&self, z: &Point) -> Result<SortedPoint> {
        self.check_dim(z)?;
        let n = self.dim();
        let moduli_orig: Vec<f64> = z.coords.iter().map(|c| c.norm()).collect();
        let key = |j: usize| self.p[j] * mass(moduli_orig[j], self.p[j]);

        let mut perm: Vec<usize> = (0..n).collect();
        perm[..self.k].sort_by(|&a, &b| key(a).total_cmp(&key(b)));

        let p: Vec<f64> = perm.iter().map(|&j| self.p[j]).collect();
        let moduli: Vec<f64> = perm.iter().map(|&j| moduli_orig[j]).collect();
        let masses: Vec<f64> = moduli.iter().zip(&p).map(|(&m, &p)| mass(m, p)).collect();
        Ok(SortedPoint { perm, p, moduli, masses, k: self.k })
    }
}

/// `t^{2p}` with `0^{2p} = 0`. Small integer powers go through `powi`, which
/// keeps `t²` correctly rounded; near the boundary `1 − Σ` amplifies any
/// last-bit error by the inverse slack.
#[inline]
pub(crate) fn mass(modulus: f64, p: f64) -> f64 {
    let e = 2.0 * p;
    if modulus == 0.0 {
        0.0
    } else if e.fract() == 0.0 && e <= 4.0 {
        modulus.powi(e as i32)
    } else {
        modulus.powf(e)
    }
}

/// `1 − Σ xs` with Neumaier compensation; the result is accurate relative to
/// itself even when it is small.
pub(crate) fn one_minus_sum<'a>(xs: impl IntoIterator<Item = &'a f64>) -> f64 {
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum - x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) - x;
        } else {
            comp += (-x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    /// `1 − Σ |z_j|^{2p_j}`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<Complex64>,
}

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }

    /// A point with nonnegative real coordinates.
    pub fn from_moduli(moduli: &[f64]) -> Self {
        Self { coords: moduli.iter().map(|&m| Complex64::new(m, 0.0)).collect() }
    }

    pub fn from_polar(moduli: &[f64], phases: &[f64]) -> Self {
        Self { coords: moduli.iter().zip(phases).map(|(&m, &t)| Complex64::from_polar(m, t)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.arg()).collect()
    }
}

impl From<Vec<Complex64>> for Point {
    fn from(coords: Vec<Complex64>) -> Self {
        Self::new(coords)
    }
}

/// A point with its first `k` coordinates reordered by the key
/// `p_j |z_j|^{2p_j}`. Sorted slot `i` holds original coordinate `perm[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedPoint {
    pub perm: Vec<usize>,
    pub p: Vec<f64>,
    pub moduli: Vec<f64>,
    pub masses: Vec<f64>,
    pub k: usize,
}

impl SortedPoint {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Sort keys of the first `k` slots.
    pub fn keys(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.p[i] * self.masses[i]).collect()
    }

    /// `1 − Σ_{j>s} |z_j|^{2p_j}`, with `s` counted from one.
    pub fn r(&self, s: usize) -> f64 {
        one_minus_sum(&self.masses[s..])
    }

    /// `Σ_{j≤s} 1/(2p_j)`.
    pub fn q(&self, s: usize) -> f64 {
        self.p[..s].iter().map(|&p| 0.5 / p).sum()
    }

    /// Reorders a vector given in original coordinates into sorted slots.
    pub fn to_sorted<T: Copy>(&self, original: &[T]) -> Vec<T> {
        self.perm.iter().map(|&j| original[j]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_exponents_and_k() {
        assert!(Ellipsoid::new(vec![1.0, 0.0], 1).is_err());
        assert!(Ellipsoid::new(vec![1.0, f64::NAN], 1).is_err());
        assert!(Ellipsoid::new(vec![1.0, 1.0], 0).is_err());
        assert!(Ellipsoid::new(vec![1.0, 1.0], 3).is_err());
        assert!(Ellipsoid::new(vec![], 1).is_err());
    }

    #[test]
    fn membership_examples() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let m = e.membership(&Point::from_moduli(&[0.0, 0.0])).unwrap();
        assert_eq!(m, Membership { inside: true, slack: 1.0 });
        let m = e.membership(&Point::from_moduli(&[1.0, 0.0])).unwrap();
        assert!(!m.inside);
        assert_eq!(m.slack, 0.0);
        let m = e.membership(&Point::from_moduli(&[0.5, 0.5])).unwrap();
        assert!(m.inside);
        assert!((m.slack - 0.5).abs() < 1e-15);
    }

    #[test]
    fn membership_dimension_mismatch() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let err = e.membership(&Point::from_moduli(&[0.1])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn sort_examples() {
        let e = Ellipsoid::ball(2, 2).unwrap();
        let s = e.sort_first_k(&Point::from_moduli(&[0.7, 0.1])).unwrap();
        assert_eq!(s.perm, vec![1, 0]);
        let keys = s.keys();
        assert!((keys[0] - 0.01).abs() < 1e-15 && (keys[1] - 0.49).abs() < 1e-15);

        let s = e.sort_first_k(&Point::from_moduli(&[0.1, 0.7])).unwrap();
        assert_eq!(s.perm, vec![0, 1]);

        let e = Ellipsoid::new(vec![2.0, 1.0], 2).unwrap();
        let s = e.sort_first_k(&Point::from_moduli(&[0.6, 0.3])).unwrap();
        assert_eq!(s.perm, vec![1, 0]);
        let keys = s.keys();
        assert!((keys[0] - 0.09).abs() < 1e-15);
        assert!((keys[1] - 0.2592).abs() < 1e-15);
    }

    #[test]
    fn compensated_slack() {
        assert_eq!(one_minus_sum(&[0.5, 0.25, 0.25]), 0.0);
        let xs = [1.0 - 2f64.powi(-30), 2f64.powi(-31)];
        assert_eq!(one_minus_sum(&xs), 2f64.powi(-31));
    }

    #[test]
    fn sort_leaves_tail_alone_and_is_stable() {
        let e = Ellipsoid::ball(4, 2).unwrap();
        let s = e.sort_first_k(&Point::from_moduli(&[0.3, 0.3, 0.2, 0.1])).unwrap();
        assert_eq!(s.perm, vec![0, 1, 2, 3]);
        let s = e.sort_first_k(&Point::from_moduli(&[0.4, 0.3, 0.2, 0.1])).unwrap();
        assert_eq!(s.perm, vec![1, 0, 2, 3]);
    }
}
