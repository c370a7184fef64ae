//! Lower bounds for the Möbius function from one-variable tail factors.
//!
//! Supported base points have exactly one nonzero tail coordinate; every
//! other tail coordinate is zero and sits beyond the hyperplane block, so a
//! tail factor depending on the active coordinate alone is admissible. Each
//! family is parameterized so that its profile
//! `P(t) = |h(t)| (1 − t^{2p})^{q_d}` is stationary at the base modulus `t0`.
//! The supremum of `P` is estimated on a dense grid, and
//! `R · P(t0) / (sup P · (1 + 1e-6))` is recorded as the lower bound.

use serde::{Deserialize, Serialize};

use crate::ellipsoid::{Ellipsoid, Point};
use crate::error::{Error, Result};
use crate::formula;

const SUP_SAFETY: f64 = 1e-6;
const SUP_GRID: usize = 4096;
const MAX_POWER: u32 = 64;
const MAX_POLE_POWER: u32 = 8;
const POLE_GRID: usize = 48;
const POLE_MIN: f64 = 1.001;
const POLE_MAX: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `(ζ + r)^m`, `r ≥ 0`.
    ShiftedPower,
    /// `(ζ + 1)^α`, `α > 0`.
    BinomialPower,
    /// `(r − ζ)^α ζ^m`, `α < 0`, `r ≥ 1`.
    PolePower,
    /// `((ζ + δ)/(1 + δζ)) ζ^m`, `δ ∈ [0, 1]`.
    Blaschke,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] =
        [FamilyKind::ShiftedPower, FamilyKind::BinomialPower, FamilyKind::PolePower, FamilyKind::Blaschke];
}

/// One parameterized tail factor, multiplied by `ζ^{lead}` where the factor
/// must vanish at the origin and does not already.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub family: FamilyKind,
    pub lead: u32,
    pub m: u32,
    /// `r`, `α` or `δ` depending on the family.
    pub param: f64,
    /// The exponent `α` of the pole family.
    pub exponent: Option<f64>,
}

impl Candidate {
    /// `ln |h(t)|` for real `t ∈ [0, 1)`.
    fn log_h(&self, t: f64) -> f64 {
        let lt = if t == 0.0 { f64::NEG_INFINITY } else { t.ln() };
        let lead = if self.lead == 0 { 0.0 } else { self.lead as f64 * lt };
        let mono = if self.m == 0 { 0.0 } else { self.m as f64 * lt };
        let body = match self.family {
            FamilyKind::ShiftedPower => self.m as f64 * (t + self.param).ln(),
            FamilyKind::BinomialPower => self.param * t.ln_1p(),
            FamilyKind::PolePower => mono + self.exponent.unwrap_or(0.0) * (self.param - t).ln(),
            FamilyKind::Blaschke => mono + (t + self.param).ln() - (self.param * t).ln_1p(),
        };
        lead + body
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub candidate: Candidate,
    pub log_sup: f64,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub family: FamilyKind,
    pub evaluated: usize,
    pub best: Option<Scored>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySearch {
    pub r: f64,
    pub lower_bound: f64,
    /// `R − lower_bound`.
    pub gap: f64,
    pub best: Option<Scored>,
    pub rows: Vec<FamilyRow>,
    pub evaluated: usize,
    /// The budget ran out before every candidate was scored.
    pub incomplete: bool,
}

/// Active-slot data: exponent, modulus, `q_d` and whether `h` must vanish at 0.
struct Setting {
    p: f64,
    t0: f64,
    q: f64,
    lead: u32,
}

impl Setting {
    fn log_profile(&self, c: &Candidate, t: f64) -> f64 {
        let x = t.powf(2.0 * self.p);
        c.log_h(t) + self.q * (-x).ln_1p()
    }

    /// `d/dt ln (1 − t^{2p})^{−q}` at `t0`.
    fn g(&self) -> f64 {
        let x = self.t0.powf(2.0 * self.p);
        self.q * 2.0 * self.p * x / (self.t0 * (1.0 - x))
    }
}

fn enumerate(s: &Setting, families: &[FamilyKind]) -> Vec<Candidate> {
    let g = s.g();
    let t0 = s.t0;
    let lead = s.lead;
    let mut out = Vec::new();
    for &family in families {
        match family {
            FamilyKind::ShiftedPower => {
                let target = g - lead as f64 / t0;
                for m in 1..=MAX_POWER {
                    let r = m as f64 / target - t0;
                    if target > 0.0 && r >= 0.0 {
                        out.push(Candidate { family, lead, m, param: r, exponent: None });
                    }
                }
            }
            FamilyKind::BinomialPower => {
                let alpha = (g - lead as f64 / t0) * (1.0 + t0);
                if alpha > 0.0 {
                    out.push(Candidate { family, lead, m: 0, param: alpha, exponent: None });
                }
            }
            FamilyKind::PolePower => {
                for m in lead..=MAX_POLE_POWER {
                    let target = g - m as f64 / t0;
                    for i in 0..POLE_GRID {
                        let r = POLE_MIN * (POLE_MAX / POLE_MIN).powf(i as f64 / (POLE_GRID - 1) as f64);
                        let alpha = -(r - t0) * target;
                        if alpha < 0.0 {
                            out.push(Candidate { family, lead: 0, m, param: r, exponent: Some(alpha) });
                        }
                    }
                }
            }
            FamilyKind::Blaschke => {
                for m in lead..=MAX_POWER {
                    let target = g - m as f64 / t0;
                    let psi = |d: f64| 1.0 / (t0 + d) - d / (1.0 + d * t0);
                    if !(target >= 0.0 && target <= 1.0 / t0) {
                        continue;
                    }
                    let (mut lo, mut hi) = (0.0f64, 1.0f64);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if psi(mid) > target {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let delta = 0.5 * (lo + hi);
                    if delta == 0.0 && m == 0 {
                        continue;
                    }
                    out.push(Candidate { family, lead: 0, m, param: delta, exponent: None });
                }
            }
        }
    }
    out
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-15 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Estimated `ln sup_{[0,1)} P` on a mass grid, refined around the best node.
fn log_sup(s: &Setting, c: &Candidate) -> f64 {
    let two_p = 2.0 * s.p;
    let mut masses: Vec<f64> = (0..SUP_GRID).map(|i| i as f64 / SUP_GRID as f64).collect();
    masses.extend((1..=120).map(|j| 1.0 - 10f64.powf(-(j as f64) / 10.0)));
    masses.push(s.t0.powf(two_p));
    masses.sort_by(f64::total_cmp);
    masses.dedup();
    masses.retain(|&x| x < 1.0);
    let prof = |x: f64| s.log_profile(c, x.powf(1.0 / two_p));
    let vals: Vec<f64> = masses.iter().map(|&x| prof(x)).collect();
    let (i, &best) =
        vals.iter().enumerate().fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    let lo = masses[i.saturating_sub(1)];
    let hi = masses.get(i + 1).copied().unwrap_or(masses[i]);
    best.max(golden_max(prof, lo, hi))
}

fn setting(ell: &Ellipsoid, z: &Point) -> Result<(Setting, f64)> {
    let eval = formula::evaluate(ell, z)?;
    let sorted = ell.sort_first_k(z)?;
    let d = eval.d;
    let active: Vec<usize> = (d..sorted.n()).filter(|&j| sorted.moduli[j] > 0.0).collect();
    if active.len() != 1 {
        return Err(Error::Precondition(format!(
            "family search needs exactly one nonzero tail coordinate, found {}",
            active.len()
        )));
    }
    let j = active[0];
    if (d..sorted.k).any(|i| i != j) {
        return Err(Error::Precondition("a vanishing tail coordinate lies in the hyperplane block".into()));
    }
    if sorted.moduli[..d].contains(&0.0) {
        return Err(Error::Precondition("a product coordinate vanishes".into()));
    }
    let lead = u32::from(j < sorted.k);
    Ok((Setting { p: sorted.p[j], t0: sorted.moduli[j], q: eval.q_d, lead }, eval.value))
}

/// Scores up to `budget` candidates from `families` at `z`.
pub fn candidate_family_search(
    ell: &Ellipsoid,
    z: &Point,
    families: &[FamilyKind],
    budget: usize,
) -> Result<FamilySearch> {
    let (s, r) = setting(ell, z)?;
    let all = enumerate(&s, families);
    let incomplete = all.len() > budget;
    let todo = &all[..all.len().min(budget)];
    let scored: Vec<Scored> = crate::par::map(todo, |c| {
        let ls = log_sup(&s, c);
        let lp = s.log_profile(c, s.t0);
        let lower_bound = r * (lp - ls).exp() / (1.0 + SUP_SAFETY);
        Scored { candidate: *c, log_sup: ls, lower_bound }
    });
    let better = |a: &Scored, b: &Option<Scored>| b.as_ref().is_none_or(|b| a.lower_bound > b.lower_bound);
    let mut rows: Vec<FamilyRow> =
        families.iter().map(|&family| FamilyRow { family, evaluated: 0, best: None }).collect();
    let mut best: Option<Scored> = None;
    for sc in scored.iter().filter(|s| s.lower_bound.is_finite()) {
        if let Some(row) = rows.iter_mut().find(|r| r.family == sc.candidate.family) {
            row.evaluated += 1;
            if better(sc, &row.best) {
                row.best = Some(sc.clone());
            }
        }
        if better(sc, &best) {
            best = Some(sc.clone());
        }
    }
    let lower_bound = best.as_ref().map_or(0.0, |b| b.lower_bound);
    Ok(FamilySearch { r, lower_bound, gap: r - lower_bound, best, rows, evaluated: scored.len(), incomplete })
}
