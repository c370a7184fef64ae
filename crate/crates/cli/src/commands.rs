use std::io::Write;
use std::path::{Path, PathBuf};

use ellipsoid_green::certificates::{GreenCertificate, MobiusCertificate};
use ellipsoid_green::formula::{ball_formula, evaluate_with_tol, EvalResult};
use ellipsoid_green::gap::families::{candidate_family_search, FamilyKind, FamilySearch};
use ellipsoid_green::gap::pole_factor::{build_h_prop_d, PropDParams};
use ellipsoid_green::gap::window::{exclusion_demo, profile_rows, ObstructionWindow, Polynomial};
use ellipsoid_green::gap::{nonconvex_slot, require_nonconvex_tail};
use ellipsoid_green::oracle::limit::{default_ladder, polydisc_limit_test};
use ellipsoid_green::oracle::sampling::sample_interior;
use ellipsoid_green::oracle::verify::{verify_bundle, verify_certificate, CertificateKind, VerifyConfig};
use ellipsoid_green::{par, Ellipsoid, Error, Point, VerificationReport};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{from_point, CertifyKind, GapSpec, Loaded, RawPoint, Suite};
use crate::output::{csv_writer, json_line, num, open, region_label};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::Invariant(_) => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::input(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::input(format!("csv: {e}"))
    }
}

pub type Outcome = Result<u8, Failure>;

/// Settings shared by every subcommand after flag overrides.
pub struct Run {
    pub config: Loaded,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Run {
    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(open(self.out.as_deref())?)
    }

    fn interior_tol(&self) -> f64 {
        self.tol.unwrap_or(1e-14)
    }

    fn points(&self) -> Result<&[Point], Failure> {
        if self.config.points.is_empty() {
            return Err(Failure::input("the config lists no points"));
        }
        Ok(&self.config.points)
    }
}

#[derive(Serialize)]
struct EvalRecord {
    index: usize,
    z: RawPoint,
    #[serde(rename = "R")]
    r: f64,
    d: usize,
    region: Vec<usize>,
    q_d: f64,
    r_d: f64,
    c_d: f64,
}

#[derive(Serialize)]
struct ErrorRecord {
    index: usize,
    z: RawPoint,
    error: String,
}

impl EvalRecord {
    fn new(index: usize, z: &Point, e: &EvalResult) -> Self {
        Self {
            index,
            z: from_point(z),
            r: e.value,
            d: e.d,
            region: e.region.iter().map(|j| j + 1).collect(),
            q_d: e.q_d,
            r_d: e.r_d,
            c_d: e.c_d,
        }
    }
}

pub fn eval(run: &Run) -> Outcome {
    let ell = &run.config.ellipsoid;
    let points = run.points()?;
    let tol = run.interior_tol();
    let results = par::map(points, |z| evaluate_with_tol(ell, z, tol));
    let mut out = run.sink()?;
    let mut failed = 0;
    for (i, (z, r)) in points.iter().zip(&results).enumerate() {
        match r {
            Ok(e) => json_line(&mut out, &EvalRecord::new(i, z, e))?,
            Err(e) => {
                failed += 1;
                json_line(&mut out, &ErrorRecord { index: i, z: from_point(z), error: e.to_string() })?;
            }
        }
    }
    out.flush()?;
    Ok(if failed == points.len() { EXIT_INPUT } else { EXIT_OK })
}

pub fn sweep(run: &Run) -> Outcome {
    let spec = run.config.raw.sweep.as_ref().ok_or_else(|| Failure::input("config has no `sweep` section"))?;
    let ell = &run.config.ellipsoid;
    let n = ell.dim();
    let base: Vec<Complex64> = match &spec.base {
        Some(b) => b.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        None => vec![Complex64::new(0.0, 0.0); n],
    };
    let (ax, ay) = (spec.axes[0] - 1, spec.axes[1] - 1);
    let mut grid = Vec::new();
    for &x in &spec.x.values() {
        for &y in &spec.y.values() {
            let mut c = base.clone();
            c[ax] = Complex64::new(x, 0.0);
            c[ay] = Complex64::new(y, 0.0);
            grid.push(Point::new(c));
        }
    }
    let tol = run.interior_tol();
    let results = par::map(&grid, |z| evaluate_with_tol(ell, z, tol));

    let mut w = csv_writer(run.sink()?);
    let mut header: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
    header.extend(["R", "d", "region"].map(String::from));
    w.write_record(&header)?;
    for (z, r) in grid.iter().zip(&results) {
        let mut row: Vec<String> = z.moduli().into_iter().map(num).collect();
        match r {
            Ok(e) => row.extend([num(e.value), e.d.to_string(), region_label(&e.region)]),
            Err(_) => row.extend([String::new(), String::new(), "outside".to_string()]),
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SuiteReport<'a> {
    suite: &'static str,
    point: Option<usize>,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Serialize)]
struct Summary {
    suite: &'static str,
    total: usize,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: Summary,
}

fn sample_points(run: &Run, ell: &Ellipsoid, samples: usize, slack_floor: f64) -> Result<Vec<Point>, Failure> {
    if run.config.points.is_empty() {
        Ok(sample_interior(ell, samples, run.seed, slack_floor)?)
    } else {
        Ok(run.config.points.clone())
    }
}

pub fn verify(run: &Run) -> Outcome {
    let spec = run.config.raw.verify.as_ref().ok_or_else(|| Failure::input("config has no `verify` section"))?;
    let ell = &run.config.ellipsoid;
    let suite = spec.suite;
    let mut reports: Vec<(Option<usize>, Result<VerificationReport, Error>)> = Vec::new();
    match suite {
        Suite::Ball => {
            let ball = Ellipsoid::ball(ell.dim(), ell.k())?;
            let tol = run.tol.unwrap_or(1e-12);
            let pts = sample_points(run, &ball, spec.samples, 0.0)?;
            let devs = par::map(&pts, |z| -> Result<f64, Error> {
                let a = evaluate_with_tol(&ball, z, 0.0)?.value;
                Ok((a - ball_formula(z, ball.k())?).abs())
            });
            let mut worst = (0.0f64, 0);
            for (i, d) in devs.into_iter().enumerate() {
                let d = d?;
                if d > worst.0 {
                    worst = (d, i);
                }
            }
            let mut r =
                VerificationReport::deviation("ball_consistency", worst.0, tol).with_witness(pts[worst.1].moduli());
            r.samples = pts.len();
            r.seed = run.seed;
            reports.push((None, Ok(r)));
        }
        Suite::PolydiscLimit => {
            let ladder = spec.ladder.clone().unwrap_or_else(default_ladder);
            let tol = run.tol.unwrap_or(1e-3);
            for (i, z) in run.points()?.iter().enumerate() {
                reports.push((Some(i), polydisc_limit_test(z, ell.k(), &ladder, tol).map(|l| l.report)));
            }
        }
        Suite::GreenCertificates | Suite::MobiusCertificates => {
            let kind = if suite == Suite::GreenCertificates { CertificateKind::Green } else { CertificateKind::Mobius };
            let mut cfg = VerifyConfig { seed: run.seed, ..VerifyConfig::default() };
            if let Some(h) = spec.fd_step {
                cfg.fd_step = h;
            }
            if let Some(s) = spec.sup_samples {
                cfg.sup_samples = s;
            }
            if let Some(t) = run.tol {
                cfg.stationarity_tol = t;
            }
            let pts = sample_points(run, ell, spec.samples, spec.slack_floor)?;
            for (i, z) in pts.iter().enumerate() {
                match verify_certificate(ell, z, kind, &cfg) {
                    Ok(rs) => reports.extend(rs.into_iter().map(|r| (Some(i), Ok(r)))),
                    Err(e) => reports.push((Some(i), Err(e))),
                }
            }
        }
    }

    let mut out = run.sink()?;
    let mut passed = 0;
    let mut worst_error = None;
    for (point, r) in &reports {
        match r {
            Ok(report) => {
                passed += usize::from(report.pass);
                json_line(&mut out, &SuiteReport { suite: suite.name(), point: *point, report })?;
            }
            Err(e) => {
                let code = exit_code(e);
                worst_error = Some(worst_error.map_or(code, |c: u8| c.max(code)));
                json_line(
                    &mut out,
                    &serde_json::json!({ "suite": suite.name(), "point": point, "error": e.to_string() }),
                )?;
            }
        }
    }
    let total = reports.len();
    json_line(
        &mut out,
        &SummaryLine { summary: Summary { suite: suite.name(), total, passed, failed: total - passed } },
    )?;
    out.flush()?;
    Ok(match worst_error {
        Some(c) => c,
        None if passed == total => EXIT_OK,
        None => EXIT_VERIFY,
    })
}

#[derive(Serialize)]
struct CertificateRecord {
    index: usize,
    kind: &'static str,
    z: RawPoint,
    d: usize,
    alpha: Option<Vec<f64>>,
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "R")]
    r: f64,
    family: Option<&'static str>,
    feasible: bool,
    degenerate: Option<Vec<usize>>,
}

fn certificate_record(index: usize, z: &Point, ell: &Ellipsoid, kind: CertifyKind) -> Result<CertificateRecord, Error> {
    Ok(match kind {
        CertifyKind::Green => {
            let c = GreenCertificate::build(ell, z)?;
            CertificateRecord {
                index,
                kind: "green",
                z: from_point(z),
                d: c.d(),
                alpha: Some(c.alpha().to_vec()),
                m: c.m(),
                r: c.r_value(),
                family: None,
                feasible: true,
                degenerate: None,
            }
        }
        _ => {
            let c = MobiusCertificate::build(ell, z)?;
            mobius_record(index, z, &c)
        }
    })
}

fn mobius_record(index: usize, z: &Point, c: &MobiusCertificate) -> CertificateRecord {
    CertificateRecord {
        index,
        kind: "mobius",
        z: from_point(z),
        d: c.d(),
        alpha: c.alpha().map(<[f64]>::to_vec),
        m: c.m(),
        r: c.r_value(),
        family: Some(c.family().tag()),
        feasible: c.is_feasible(),
        degenerate: Some(c.degenerate().iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j + 1).collect()),
    }
}

#[derive(Serialize)]
struct PropDRecord<'a> {
    params: PropDParams,
    p: &'a [f64],
    certificate: CertificateRecord,
}

pub fn certify(run: &Run) -> Outcome {
    let spec =
        run.config.raw.certify.clone().unwrap_or(crate::config::CertifySpec { kind: CertifyKind::Both, prop_d: None });
    let mut out = run.sink()?;
    if let Some(pd) = spec.prop_d {
        let cert = build_h_prop_d(pd.p1, pd.p2, pd.z0, pd.z1)?;
        let record = PropDRecord {
            params: cert.params,
            p: cert.ellipsoid.exponents(),
            certificate: mobius_record(0, &cert.point, &cert.certificate),
        };
        json_line(&mut out, &record)?;
        let cfg = VerifyConfig { seed: run.seed, ..VerifyConfig::default() };
        let reports = verify_bundle(&cert.ellipsoid, &cert.point, &cert.certificate, &cfg)?;
        for r in &reports {
            json_line(&mut out, r)?;
        }
        out.flush()?;
        return Ok(if reports.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_VERIFY });
    }

    let ell = &run.config.ellipsoid;
    let points = run.points()?;
    let kinds: &[CertifyKind] = match spec.kind {
        CertifyKind::Both => &[CertifyKind::Green, CertifyKind::Mobius],
        CertifyKind::Green => &[CertifyKind::Green],
        CertifyKind::Mobius => &[CertifyKind::Mobius],
    };
    let mut failed = 0;
    let mut codes = Vec::new();
    for (i, z) in points.iter().enumerate() {
        for &kind in kinds {
            match certificate_record(i, z, ell, kind) {
                Ok(rec) => json_line(&mut out, &rec)?,
                Err(e) => {
                    failed += 1;
                    codes.push(exit_code(&e));
                    json_line(&mut out, &ErrorRecord { index: i, z: from_point(z), error: e.to_string() })?;
                }
            }
        }
    }
    out.flush()?;
    Ok(if failed == points.len() * kinds.len() { codes.into_iter().max().unwrap_or(EXIT_INPUT) } else { EXIT_OK })
}

#[derive(Serialize)]
struct WindowLine {
    window: ObstructionWindow,
    slot: usize,
}

#[derive(Serialize)]
struct ExclusionLine<'a> {
    exclusion: &'a VerificationReport,
}

#[derive(Serialize)]
struct SearchLine {
    index: usize,
    z: RawPoint,
    #[serde(rename = "R")]
    r: f64,
    lower_bound: f64,
    gap: f64,
    evaluated: usize,
    incomplete: bool,
    best_family: Option<FamilyKind>,
}

/// Companion file next to `--out`, e.g. `gap.jsonl` → `gap.families.csv`.
fn sibling(out: Option<&Path>, suffix: &str) -> Option<PathBuf> {
    let out = out?;
    let stem = out.file_stem()?.to_string_lossy().into_owned();
    Some(out.with_file_name(format!("{stem}.{suffix}")))
}

/// Front moduli 0.1 and the first nonconvex tail slot at 0.01.
fn default_gap_point(ell: &Ellipsoid, slot: usize) -> Point {
    let mut m = vec![0.0; ell.dim()];
    m[..ell.k()].fill(0.1);
    m[slot] = 0.01;
    Point::from_moduli(&m)
}

pub fn gap(run: &Run) -> Outcome {
    let ell = &run.config.ellipsoid;
    let slot = require_nonconvex_tail(ell)?;
    debug_assert_eq!(nonconvex_slot(ell), Some(slot));
    let spec = run.config.raw.gap.clone().unwrap_or_default();
    let q: f64 = ell.exponents()[..ell.k()].iter().map(|p| 0.5 / p).sum();
    let window = ObstructionWindow::find(2.0 * ell.exponents()[slot], q)?;
    let exclusion = exclusion_demo(&window, spec.trials, run.seed)?;

    let points =
        if run.config.points.is_empty() { vec![default_gap_point(ell, slot)] } else { run.config.points.clone() };
    let searches: Vec<Result<FamilySearch, Error>> =
        points.iter().map(|z| candidate_family_search(ell, z, &FamilyKind::ALL, spec.budget)).collect();

    let mut out = run.sink()?;
    json_line(&mut out, &WindowLine { window, slot: slot + 1 })?;
    json_line(&mut out, &ExclusionLine { exclusion: &exclusion })?;
    for (i, (z, s)) in points.iter().zip(&searches).enumerate() {
        match s {
            Ok(s) => json_line(
                &mut out,
                &SearchLine {
                    index: i,
                    z: from_point(z),
                    r: s.r,
                    lower_bound: s.lower_bound,
                    gap: s.gap,
                    evaluated: s.evaluated,
                    incomplete: s.incomplete,
                    best_family: s.best.as_ref().map(|b| b.candidate.family),
                },
            )?,
            Err(e) => json_line(&mut out, &ErrorRecord { index: i, z: from_point(z), error: e.to_string() })?,
        }
    }
    out.flush()?;

    if let Some(path) = spec
        .family_csv
        .as_deref()
        .map(|p| run.config.resolve(p))
        .or_else(|| sibling(run.out.as_deref(), "families.csv"))
    {
        write_family_table(&path, &searches)?;
    }
    if let Some(path) = spec
        .profile_csv
        .as_deref()
        .map(|p| run.config.resolve(p))
        .or_else(|| sibling(run.out.as_deref(), "profile.csv"))
    {
        write_profile(&path, &window, &spec)?;
    }
    Ok(if exclusion.pass { EXIT_OK } else { EXIT_VERIFY })
}

fn write_family_table(path: &Path, searches: &[Result<FamilySearch, Error>]) -> Result<(), Failure> {
    let mut w = csv_writer(open(Some(path))?);
    w.write_record([
        "point",
        "family",
        "evaluated",
        "lead",
        "m",
        "param",
        "exponent",
        "log_sup",
        "lower_bound",
        "R",
        "gap",
    ])?;
    for (i, s) in searches.iter().enumerate() {
        let Ok(s) = s else { continue };
        for row in &s.rows {
            let family =
                serde_json::to_value(row.family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let mut rec = vec![i.to_string(), family, row.evaluated.to_string()];
            match &row.best {
                Some(b) => rec.extend([
                    b.candidate.lead.to_string(),
                    b.candidate.m.to_string(),
                    num(b.candidate.param),
                    b.candidate.exponent.map(num).unwrap_or_default(),
                    num(b.log_sup),
                    num(b.lower_bound),
                    num(s.r),
                    num(s.r - b.lower_bound),
                ]),
                None => rec.extend(std::iter::repeat_n(String::new(), 6).chain([num(s.r), String::new()])),
            }
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `(t, φ(t), |f(t)|/φ(t))` for `f(ζ) = ζ` on `[0, b]`.
fn write_profile(path: &Path, window: &ObstructionWindow, spec: &GapSpec) -> Result<(), Failure> {
    let f = Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let mut w = csv_writer(open(Some(path))?);
    w.write_record(["t", "phi", "ratio"])?;
    for row in profile_rows(window, &f, spec.profile_samples) {
        w.write_record(row.map(num))?;
    }
    w.flush()?;
    Ok(())
}
