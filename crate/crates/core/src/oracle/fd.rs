//! Central finite differences (fourth-order five-point stencil).

use crate::error::{Error, Result};

/// Gradient of `f` at `point` from the stencil
/// `(8(f(x+h) − f(x−h)) − (f(x+2h) − f(x−2h))) / 12h` with per-coordinate steps.
///
/// A non-finite evaluation (outside the objective's domain) halves that
/// coordinate's step once; a second failure is an error.
pub fn fd_gradient<F>(f: F, point: &[f64], steps: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    if steps.len() != point.len() {
        return Err(Error::DimensionMismatch { expected: point.len(), got: steps.len() });
    }
    if let Some(h) = steps.iter().find(|&&h| !(h > 0.0)) {
        return Err(Error::invalid(format!("finite-difference step {h} must be positive")));
    }
    let mut x = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for j in 0..point.len() {
        let mut h = steps[j];
        let mut attempt = 0;
        loop {
            let mut at = |dx: f64| {
                x[j] = point[j] + dx;
                let v = f(&x);
                x[j] = point[j];
                v
            };
            let (f1, f_1, f2, f_2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
            if [f1, f_1, f2, f_2].iter().all(|v| v.is_finite()) {
                grad.push((8.0 * (f1 - f_1) - (f2 - f_2)) / (12.0 * h));
                break;
            }
            attempt += 1;
            if attempt > 1 {
                return Err(Error::domain(format!(
                    "finite difference along coordinate {j} leaves the domain even with step {h}"
                )));
            }
            h *= 0.5;
        }
    }
    Ok(grad)
}

/// Euclidean norm helper.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
