//! The closed-form value `R_E(A, z)`.
//!
//! After sorting the first `k` coordinates by `p_j |z_j|^{2p_j}`, put
//!
//! ```text
//! q_s = Σ_{j≤s} 1/(2p_j),   r_s = 1 − Σ_{j>s} |z_j|^{2p_j},   c_s = r_s / q_s
//! d   = max{ s ≤ k : 2p_s |z_s|^{2p_s} ≤ c_s }
//! R   = Π_{j≤d} |z_j| (2p_j / c_d)^{1/(2p_j)}
//! ```
//!
//! The product is accumulated in log-space and exponentiated once.

use serde::{Deserialize, Serialize};

use crate::ellipsoid::{one_minus_sum, Ellipsoid, Point, SortedPoint, DEFAULT_INTERIOR_TOL};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    /// Effective index, `1 ≤ d ≤ k`.
    pub d: usize,
    /// Sorted slot `i` holds original coordinate `perm[i]` (zero based).
    pub perm: Vec<usize>,
    pub q_d: f64,
    pub r_d: f64,
    pub c_d: f64,
    /// Original (zero based) indices of the `d` coordinates in the product, ascending.
    pub region: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub q: f64,
    pub r: f64,
    pub c: f64,
    /// `2p_s |z_s|^{2p_s}`.
    pub lhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DSelection {
    pub d: usize,
    /// One row per `s = 1..=k`.
    pub rows: Vec<SelectionRow>,
    /// Whether the set of admissible `s` is exactly `{1, …, d}`.
    pub contiguous: bool,
}

/// Runs the `d`-selection on a sorted point.
///
/// For interior points the `s = 1` condition is equivalent to membership, so
/// an empty admissible set means the caller passed a non-interior point or
/// the ordering is broken.
pub fn select_d(sorted: &SortedPoint) -> Result<DSelection> {
    let k = sorted.k;
    let mut rows = Vec::with_capacity(k);
    let mut q = 0.0;
    for s in 1..=k {
        let i = s - 1;
        q += 0.5 / sorted.p[i];
        let r = sorted.r(s);
        let c = r / q;
        let lhs = 2.0 * sorted.p[i] * sorted.masses[i];
        rows.push(SelectionRow { q, r, c, lhs, holds: lhs <= c });
    }
    let d = match rows.iter().rposition(|row| row.holds) {
        Some(i) => i + 1,
        None => {
            return Err(Error::Invariant(
                "d-selection produced an empty candidate set (s = 1 must hold for interior points)".into(),
            ))
        }
    };
    if !rows[0].holds {
        return Err(Error::Invariant(format!("s = 1 selection condition fails although d = {d} was admissible")));
    }
    let contiguous = rows[..d].iter().all(|row| row.holds);
    Ok(DSelection { d, rows, contiguous })
}

/// The product formula with the effective index forced to `s`.
pub fn formula_at_index(sorted: &SortedPoint, s: usize) -> f64 {
    debug_assert!(s >= 1 && s <= sorted.k);
    if sorted.moduli[..s].contains(&0.0) {
        return 0.0;
    }
    let c = sorted.r(s) / sorted.q(s);
    let log: f64 = (0..s)
        .map(|i| {
            let two_p = 2.0 * sorted.p[i];
            sorted.moduli[i].ln() + (two_p / c).ln() / two_p
        })
        .sum();
    log.exp()
}

/// Evaluates `R_E(A, z)` with the default interior threshold.
pub fn evaluate(ell: &Ellipsoid, z: &Point) -> Result<EvalResult> {
    evaluate_with_tol(ell, z, DEFAULT_INTERIOR_TOL)
}

pub fn evaluate_with_tol(ell: &Ellipsoid, z: &Point, interior_tol: f64) -> Result<EvalResult> {
    let membership = ell.membership(z)?;
    if !(membership.slack > interior_tol) {
        return Err(Error::domain(format!("point is not interior (slack {:e} ≤ {interior_tol:e})", membership.slack)));
    }
    let sorted = ell.sort_first_k(z)?;
    let selection = select_d(&sorted)?;
    let d = selection.d;
    let row = selection.rows[d - 1];

    // A zero among the first k coordinates sorts to the front and zeroes the product.
    let value = if sorted.moduli[..ell.k()].contains(&0.0) { 0.0 } else { formula_at_index(&sorted, d) };

    let mut region: Vec<usize> = sorted.perm[..d].to_vec();
    region.sort_unstable();
    Ok(EvalResult { value, d, perm: sorted.perm, q_d: row.q, r_d: row.r, c_d: row.c, region })
}

/// Evaluates many points, in parallel when the `parallel` feature is on.
pub fn evaluate_batch(ell: &Ellipsoid, points: &[Point]) -> Vec<Result<EvalResult>> {
    par::map(points, |z| evaluate(ell, z))
}

/// Original indices of the coordinates entering the product at `z`.
pub fn region_label(ell: &Ellipsoid, z: &Point) -> Result<Vec<usize>> {
    Ok(evaluate(ell, z)?.region)
}

/// The Euclidean-ball form of the closed formula, computed directly from
/// moduli: with `|z_1| ≤ … ≤ |z_k|`,
/// `d = max{s : s|z_s|² + Σ_{j>s}|z_j|² ≤ 1}` and
/// `R = (d / (1 − Σ_{j>d}|z_j|²))^{d/2} Π_{j≤d}|z_j|`.
pub fn ball_formula(z: &Point, k: usize) -> Result<f64> {
    let n = z.dim();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} must lie in [1, {n}]")));
    }
    let mut m = z.moduli();
    let norm2: f64 = m.iter().map(|x| x * x).sum();
    if !(norm2 < 1.0) {
        return Err(Error::domain(format!("|z|² = {norm2} is not below one")));
    }
    m[..k].sort_by(f64::total_cmp);
    let sq: Vec<f64> = m.iter().map(|x| x * x).collect();
    let tail = |s: usize| -> f64 { 1.0 - one_minus_sum(&sq[s..]) };
    let d = (1..=k)
        .rev()
        .find(|&s| s as f64 * m[s - 1] * m[s - 1] + tail(s) <= 1.0)
        .ok_or_else(|| Error::Invariant("ball d-selection empty".into()))?;
    let prod: f64 = m[..d].iter().product();
    Ok((d as f64 / one_minus_sum(&sq[d..])).powf(d as f64 / 2.0) * prod)
}

/// `Π_{j≤k} |z_j|`, the value on the unit polydisc.
pub fn polydisc_formula(z: &Point, k: usize) -> Result<f64> {
    let n = z.dim();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} must lie in [1, {n}]")));
    }
    let m = z.moduli();
    if let Some(j) = m.iter().position(|&x| !(x < 1.0)) {
        return Err(Error::domain(format!("|z_{}| = {} is not below one", j + 1, m[j])));
    }
    Ok(m[..k].iter().product())
}

/// Weighted AM-GM: returns `(Π a_j^{w_j}, (Σ w_j a_j / Σ w_j)^{Σ w_j})`.
/// The first component never exceeds the second.
pub fn weighted_am_gm(a: &[f64], w: &[f64]) -> Result<(f64, f64)> {
    if a.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: w.len() });
    }
    if let Some(j) = a.iter().position(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::invalid(format!("a[{j}] = {} must be finite and ≥ 0", a[j])));
    }
    if let Some(j) = w.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::invalid(format!("w[{j}] = {} must be finite and > 0", w[j])));
    }
    let lhs = if a.contains(&0.0) { 0.0 } else { a.iter().zip(w).map(|(&a, &w)| w * a.ln()).sum::<f64>().exp() };
    let total: f64 = w.iter().sum();
    let mean = a.iter().zip(w).map(|(&a, &w)| w * a).sum::<f64>() / total;
    Ok((lhs, mean.powf(total)))
}

/// `|Π_{j≤k} z_j|` normalized by its supremum over `E`, i.e. the Möbius lower
/// bound obtained from the plain monomial. Never exceeds `R_E(A, z)`.
pub fn monomial_lower_bound(ell: &Ellipsoid, z: &Point) -> Result<f64> {
    ell.check_dim(z)?;
    let k = ell.k();
    let weights: Vec<f64> = ell.exponents()[..k].iter().map(|&p| 0.5 / p).collect();
    let total: f64 = weights.iter().sum();
    // sup over E of Π|ζ_j| is Π (w_j / W)^{w_j} by weighted AM-GM.
    let log_sup: f64 = weights.iter().map(|&w| w * (w / total).ln()).sum();
    let moduli = z.moduli();
    if moduli[..k].contains(&0.0) {
        return Ok(0.0);
    }
    let log_val: f64 = moduli[..k].iter().map(|m| m.ln()).sum();
    Ok((log_val - log_sup).exp())
}
