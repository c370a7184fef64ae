//! Derivative-free maximization of black-box profiles on `E' ∩ ℝ₊^m`.
//!
//! The search runs in mass coordinates `x_j = t_j^{2p_j}`, where the domain
//! is the simplex-like set `{x ≥ 0, Σ x_j ≤ 1 − floor}` independent of the
//! exponents. A coarse simplex grid seeds several starts; each start is
//! refined by cyclic golden-section line searches along the axes, followed by
//! a golden-section pattern move along the net displacement of the sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Grid nodes per mass axis.
    pub grid_resolution: usize,
    /// Maximum number of refinement sweeps per start.
    pub refinement_levels: usize,
    pub starts: usize,
    /// Line-search resolution in mass coordinates.
    pub step_tolerance: f64,
    /// Evaluation budget per start.
    pub max_evaluations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 12,
            refinement_levels: 5_000,
            starts: 3,
            step_tolerance: 1e-15,
            max_evaluations: 2_000_000,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution == 0 || self.refinement_levels == 0 || self.starts == 0 || self.max_evaluations == 0 {
            return Err(Error::invalid("optimizer config entries must be positive"));
        }
        if !(self.step_tolerance > 0.0 && self.step_tolerance < 1.0 / self.grid_resolution as f64) {
            return Err(Error::invalid(format!(
                "step tolerance {} must be positive and below the grid spacing",
                self.step_tolerance
            )));
        }
        Ok(())
    }
}

/// The closed orthant piece `{t ≥ 0 : Σ t_j^{2p_j} ≤ 1 − slack_floor}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDomain {
    exponents: Vec<f64>,
    slack_floor: f64,
}

impl ProfileDomain {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        Self::with_floor(exponents, 1e-12)
    }

    pub fn with_floor(exponents: Vec<f64>, slack_floor: f64) -> Result<Self> {
        if exponents.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::invalid("domain exponents must be positive"));
        }
        if !(0.0..1.0).contains(&slack_floor) {
            return Err(Error::invalid("slack floor must lie in [0, 1)"));
        }
        Ok(Self { exponents, slack_floor })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    fn budget(&self) -> f64 {
        1.0 - self.slack_floor
    }

    pub fn to_moduli(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.exponents).map(|(&x, &p)| if x <= 0.0 { 0.0 } else { x.powf(0.5 / p) }).collect()
    }

    pub fn to_masses(&self, t: &[f64]) -> Vec<f64> {
        t.iter().zip(&self.exponents).map(|(&t, &p)| if t <= 0.0 { 0.0 } else { t.powf(2.0 * p) }).collect()
    }

    pub fn contains(&self, t: &[f64]) -> bool {
        t.len() == self.dim() && t.iter().all(|&t| t >= 0.0) && self.to_masses(t).iter().sum::<f64>() <= self.budget()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Whether the best start stopped on the no-improvement criterion.
    pub converged: bool,
}

struct Counted<'a, F> {
    domain: &'a ProfileDomain,
    objective: &'a F,
    evaluations: usize,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let t = self.domain.to_moduli(x);
        let v = (self.objective)(&t);
        if !v.is_finite() {
            return Err(Error::NonFinite { witness: t });
        }
        Ok(v)
    }
}

/// Golden-section maximization of a unimodal `g` on `[a, b]`; the endpoints
/// are compared as well so boundary maxima are found.
fn golden_max(mut g: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let (lo, hi) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    let mut iters = 0;
    while b - a > tol && iters < 200 {
        iters += 1;
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d)?;
        }
    }
    let mut best = if gc >= gd { (c, gc) } else { (d, gd) };
    for x in [lo, hi] {
        let v = g(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

fn grid_nodes(m: usize, res: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, res, &mut cur, &mut out);
    out
}

/// Maximizes `objective(t)` over the domain. The objective is treated as a
/// black box and must return finite values on the closed domain.
pub fn maximize_profile<F>(domain: &ProfileDomain, objective: F, cfg: &OptimizerConfig) -> Result<Maximum>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    let m = domain.dim();
    let mut counted = Counted { domain, objective: &objective, evaluations: 0 };
    if m == 0 {
        let value = counted.eval(&[])?;
        return Ok(Maximum { argmax: vec![], value, evaluations: 1, converged: true });
    }

    let budget = domain.budget();
    let spacing = budget / cfg.grid_resolution as f64;
    let mut seeds: Vec<(Vec<f64>, f64)> = Vec::new();
    for node in grid_nodes(m, cfg.grid_resolution) {
        let x: Vec<f64> = node.iter().map(|&i| i as f64 * spacing).collect();
        let v = counted.eval(&x)?;
        seeds.push((x, v));
    }
    // Stable sort keeps enumeration order among ties.
    seeds.sort_by(|a, b| b.1.total_cmp(&a.1));
    seeds.truncate(cfg.starts);

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for (x0, v0) in seeds {
        let start_evals = counted.evaluations;
        let (x, v, converged) = refine(&mut counted, x0, v0, budget, cfg, start_evals)?;
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((x, v, converged));
        }
    }
    let (x, value, converged) = best.expect("at least one start");
    Ok(Maximum { argmax: domain.to_moduli(&x), value, evaluations: counted.evaluations, converged })
}

fn refine<F: Fn(&[f64]) -> f64>(
    counted: &mut Counted<'_, F>,
    mut x: Vec<f64>,
    mut value: f64,
    budget: f64,
    cfg: &OptimizerConfig,
    start_evals: usize,
) -> Result<(Vec<f64>, f64, bool)> {
    let m = x.len();
    for _ in 0..cfg.refinement_levels {
        if counted.evaluations - start_evals > cfg.max_evaluations {
            return Ok((x, value, false));
        }
        let sweep_start = x.clone();
        let value_start = value;
        for j in 0..m {
            let others: f64 = x.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, v)| v).sum();
            let upper = (budget - others).max(0.0);
            let mut trial = x.clone();
            let (s, v) = golden_max(
                |s| {
                    trial[j] = s;
                    counted.eval(&trial)
                },
                0.0,
                upper,
                cfg.step_tolerance,
            )?;
            if v > value {
                x[j] = s;
                value = v;
            }
        }
        // Pattern move along the sweep displacement.
        let dir: Vec<f64> = x.iter().zip(&sweep_start).map(|(a, b)| a - b).collect();
        if m > 1 && dir.iter().any(|&v| v != 0.0) {
            let mut lambda_max = 1e3_f64;
            for (xi, di) in x.iter().zip(&dir) {
                if *di < 0.0 {
                    lambda_max = lambda_max.min(-xi / di);
                }
            }
            let dsum: f64 = dir.iter().sum();
            if dsum > 0.0 {
                lambda_max = lambda_max.min((budget - x.iter().sum::<f64>()).max(0.0) / dsum);
            }
            if lambda_max > 0.0 {
                let dnorm = dir.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let base = x.clone();
                let mut trial = x.clone();
                let (l, v) = golden_max(
                    |l| {
                        for i in 0..m {
                            trial[i] = (base[i] + l * dir[i]).max(0.0);
                        }
                        counted.eval(&trial)
                    },
                    0.0,
                    lambda_max,
                    cfg.step_tolerance / dnorm,
                )?;
                if v > value {
                    for i in 0..m {
                        x[i] = (base[i] + l * dir[i]).max(0.0);
                    }
                    value = v;
                }
            }
        }
        if !(value > value_start) {
            return Ok((x, value, true));
        }
    }
    Ok((x, value, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_objective() {
        let dom = ProfileDomain::new(vec![1.0, 0.7]).unwrap();
        let max = maximize_profile(&dom, |_| 0.25, &OptimizerConfig::default()).unwrap();
        assert_eq!(max.value, 0.25);
        assert!(dom.contains(&max.argmax));
    }

    #[test]
    fn one_dimensional_parabola() {
        let dom = ProfileDomain::new(vec![0.5]).unwrap();
        let max = maximize_profile(&dom, |t| t[0] * (1.0 - t[0]), &OptimizerConfig::default()).unwrap();
        assert!((max.argmax[0] - 0.5).abs() < 1e-6);
        assert!((max.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn boundary_maximum_at_zero() {
        let dom = ProfileDomain::new(vec![2.0]).unwrap();
        let max = maximize_profile(&dom, |t| 1.0 - t[0], &OptimizerConfig::default()).unwrap();
        assert_eq!(max.argmax[0], 0.0);
    }

    #[test]
    fn coupled_concave_profile() {
        // log-concave profile with a known maximizer in mass coordinates:
        // x_j^{a_j} (1 − Σx)^b peaks at x_j = a_j / (Σa + b).
        let p = vec![0.8, 1.5, 3.0];
        let a = [0.7, 2.0, 0.3];
        let b = 0.5;
        let dom = ProfileDomain::new(p.clone()).unwrap();
        let obj = |t: &[f64]| {
            let x: Vec<f64> = t.iter().zip(&p).map(|(&t, &p)| t.powf(2.0 * p)).collect();
            let s: f64 = x.iter().sum();
            x.iter().zip(&a).map(|(x, a)| x.powf(*a)).product::<f64>() * (1.0 - s).max(0.0).powf(b)
        };
        let max = maximize_profile(&dom, obj, &OptimizerConfig::default()).unwrap();
        let total: f64 = a.iter().sum::<f64>() + b;
        for j in 0..3 {
            let expect = (a[j] / total).powf(0.5 / p[j]);
            assert!((max.argmax[j] - expect).abs() < 1e-7, "{j}: {} vs {expect}", max.argmax[j]);
        }
        assert!(max.converged);
    }

    #[test]
    fn value_dominates_grid() {
        let dom = ProfileDomain::new(vec![1.0, 1.0]).unwrap();
        let obj = |t: &[f64]| (3.0 * t[0]).sin() * (2.0 * t[1]).cos() + t[0] * t[1];
        let cfg = OptimizerConfig::default();
        let max = maximize_profile(&dom, obj, &cfg).unwrap();
        let h = (1.0 - 1e-12) / cfg.grid_resolution as f64;
        for node in grid_nodes(2, cfg.grid_resolution) {
            let x: Vec<f64> = node.iter().map(|&i| i as f64 * h).collect();
            assert!(max.value >= obj(&dom.to_moduli(&x)));
        }
    }

    #[test]
    fn non_finite_objective_aborts_with_witness() {
        let dom = ProfileDomain::new(vec![1.0]).unwrap();
        let err = maximize_profile(&dom, |t| 1.0 / t[0], &OptimizerConfig::default()).unwrap_err();
        match err {
            Error::NonFinite { witness } => assert_eq!(witness, vec![0.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let cfg = OptimizerConfig { step_tolerance: 0.5, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = OptimizerConfig { starts: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
