//! Evaluates both sides of the eigenvalue deficit bounds and of the
//! perimeter estimates behind them, and collects the results as reports.
//!
//! Every margin is oriented so that `margin >= 0` means the inequality holds.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain2d::{
    curve_geometry, focal_horizon, inradius, make_family, outer_from_geometry, CurveGeometry,
    InradiusGrid, Mode, RadialCurve, DEFAULT_ANGLES, FOCAL_EPS,
};
use crate::error::{Error, Result};
use crate::fem2d::{FemResolution, Ladder};
use crate::hypgeo::{
    af_rhs, ball_parallel_perimeter, ball_volume, radius_from_perimeter, SpaceParams,
};
use crate::radial::{eigen_quantities, solve_radial_refined, RadialEigenpair, RadialProblem, DEFAULT_ELEMENTS};

pub const REPORT_SCHEMA: &str = "hyprobin-report/1";
/// Allowed negative margin in eigenvalue-based checks.
pub const MARGIN_TOL: f64 = 1e-6;
/// Equality tolerance for eigenvalue-based checks on geodesic disks.
pub const EQUALITY_TOL: f64 = 2e-3;
/// Tolerance for purely geometric comparisons.
pub const GEOMETRIC_TOL: f64 = 1e-8;
/// Profiles shorter than this are reported as inconclusive.
pub const MIN_PROFILE_LENGTH: f64 = 1e-3;
const DIFF_STEP: f64 = 1e-4;

pub const THM1_ORIENTATION: &str = "margin = lhs - rhs; margin >= 0 confirms the lower bound";
pub const THM4_ORIENTATION: &str = "margin = rhs - lhs; margin >= 0 confirms the upper bound";

/// Discretization used for both sides of a deficit bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyResolution {
    pub radial_elements: usize,
    pub fem: FemResolution,
}

impl Default for VerifyResolution {
    fn default() -> Self {
        Self {
            radial_elements: DEFAULT_ELEMENTS,
            fem: FemResolution::default(),
        }
    }
}

/// All quantities entering one deficit bound for one `(Ω, β)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    pub schema: String,
    pub domain_id: String,
    /// Seed of the generated family the domain came from, if any.
    pub family_seed: Option<u64>,
    /// `thm1` for β < 0, `thm4` for β > 0.
    pub theorem: String,
    pub orientation: String,
    pub beta: f64,
    pub lambda_omega: f64,
    pub lambda_star: f64,
    #[serde(rename = "P")]
    pub perimeter: f64,
    pub vol_omega: f64,
    pub vol_star: f64,
    pub r_star: f64,
    /// `v_m` for β < 0, `v_M` for β > 0.
    pub v_extreme: f64,
    pub l2_sq: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Richardson error estimate of `lambda_omega`.
    pub fem_error: f64,
    pub confirmed: bool,
    /// Empty unless the row failed to compute.
    pub error: String,
}

impl DeficitReport {
    fn failed(domain_id: &str, beta: f64, err: &Error) -> Self {
        let (theorem, orientation) = theorem_for(beta);
        Self {
            schema: REPORT_SCHEMA.into(),
            domain_id: domain_id.into(),
            family_seed: None,
            theorem: theorem.into(),
            orientation: orientation.into(),
            beta,
            lambda_omega: f64::NAN,
            lambda_star: f64::NAN,
            perimeter: f64::NAN,
            vol_omega: f64::NAN,
            vol_star: f64::NAN,
            r_star: f64::NAN,
            v_extreme: f64::NAN,
            l2_sq: f64::NAN,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            fem_error: f64::NAN,
            confirmed: false,
            error: err.to_string(),
        }
    }

    pub fn is_error(&self) -> bool {
        !self.error.is_empty()
    }

    /// Isoperimetric deficit `|Ω*| - |Ω|`.
    pub fn deficit(&self) -> f64 {
        self.vol_star - self.vol_omega
    }
}

fn theorem_for(beta: f64) -> (&'static str, &'static str) {
    if beta < 0.0 {
        ("thm1", THM1_ORIENTATION)
    } else {
        ("thm4", THM4_ORIENTATION)
    }
}

/// Deficit bound from a solved ball eigenpair and the domain-side numbers.
/// Only the ratio `v²/‖v‖²` of the eigenfunction enters.
pub fn deficit_from_parts(
    domain_id: &str,
    pair: &RadialEigenpair,
    lambda_omega: f64,
    vol_omega: f64,
    vol_star: f64,
) -> Result<(f64, f64, f64)> {
    let beta = pair.beta;
    let (v_min, v_max, l2_sq) = eigen_quantities(pair, SpaceParams::plane())?;
    let deficit = vol_star - vol_omega;
    let (lhs, rhs, margin) = if beta < 0.0 {
        let lhs = (pair.lambda1 - lambda_omega) / lambda_omega.abs();
        let rhs = v_min * v_min / l2_sq * deficit;
        (lhs, rhs, lhs - rhs)
    } else if beta > 0.0 {
        let lhs = (lambda_omega - pair.lambda1) / lambda_omega;
        let rhs = v_max * v_max / l2_sq * deficit;
        (lhs, rhs, rhs - lhs)
    } else {
        return Err(Error::Hypothesis(format!(
            "theorems require beta != 0 (domain {domain_id})"
        )));
    };
    Ok((lhs, rhs, margin))
}

/// A domain prepared for deficit checks at several Robin parameters: its
/// geometry, the perimeter-matched disk and the assembled FEM ladder.
#[derive(Debug, Clone)]
pub struct DomainCase {
    pub id: String,
    pub geometry: CurveGeometry,
    pub r_star: f64,
    pub vol_star: f64,
    ladder: Ladder,
    radial_elements: usize,
}

impl DomainCase {
    /// Refuses domains that are not horospherically convex.
    pub fn prepare(id: &str, c: &RadialCurve, res: VerifyResolution) -> Result<Self> {
        let geometry = curve_geometry(c)?;
        if !geometry.is_hconvex {
            return Err(Error::NotHConvex {
                kappa_min: geometry.kappa_min,
            });
        }
        let sp = SpaceParams::plane();
        let r_star = radius_from_perimeter(sp, geometry.perimeter)?;
        let vol_star = ball_volume(sp, r_star)?;
        let ladder = Ladder::build(c, res.fem)?;
        Ok(Self {
            id: id.into(),
            geometry,
            r_star,
            vol_star,
            ladder,
            radial_elements: res.radial_elements,
        })
    }

    pub fn report(&self, beta: f64) -> Result<DeficitReport> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Hypothesis(format!("theorems require beta != 0, got {beta}")));
        }
        let prob = RadialProblem::new(SpaceParams::plane(), self.r_star, beta)?;
        let pair = solve_radial_refined(&prob, self.radial_elements)?;
        let fem = self.ladder.solve(beta)?;
        let vol_omega = self.geometry.area;
        let (lhs, rhs, margin) =
            deficit_from_parts(&self.id, &pair, fem.lambda1, vol_omega, self.vol_star)?;
        let (theorem, orientation) = theorem_for(beta);
        Ok(DeficitReport {
            schema: REPORT_SCHEMA.into(),
            domain_id: self.id.clone(),
            family_seed: None,
            theorem: theorem.into(),
            orientation: orientation.into(),
            beta,
            lambda_omega: fem.lambda1,
            lambda_star: pair.lambda1,
            perimeter: self.geometry.perimeter,
            vol_omega,
            vol_star: self.vol_star,
            r_star: self.r_star,
            v_extreme: pair.extreme_value(),
            l2_sq: pair.l2_sq,
            lhs,
            rhs,
            margin,
            fem_error: fem.error_estimate,
            confirmed: margin >= -MARGIN_TOL,
            error: String::new(),
        })
    }
}

/// Lower deficit bound for a negative Robin parameter.
pub fn verify_thm1(id: &str, c: &RadialCurve, beta: f64, res: VerifyResolution) -> Result<DeficitReport> {
    if !(beta < 0.0) {
        return Err(Error::Hypothesis(format!("the lower bound needs beta < 0, got {beta}")));
    }
    DomainCase::prepare(id, c, res)?.report(beta)
}

/// Upper deficit bound for a positive Robin parameter.
pub fn verify_thm4(id: &str, c: &RadialCurve, beta: f64, res: VerifyResolution) -> Result<DeficitReport> {
    if !(beta > 0.0) {
        return Err(Error::Hypothesis(format!("the upper bound needs beta > 0, got {beta}")));
    }
    DomainCase::prepare(id, c, res)?.report(beta)
}

/// `λ₁(Ω,β) ≤ λ₁(Ω*,β)` up to `MARGIN_TOL` relative.
pub fn verify_cor1(report: &DeficitReport) -> bool {
    report.lambda_omega <= report.lambda_star + MARGIN_TOL * report.lambda_star.abs()
}

/// One depth of the perimeter-decay check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaRow {
    pub t: f64,
    pub perimeter: f64,
    /// Centered difference `-(P(t+h) - P(t-h)) / 2h`.
    pub decay: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaTable {
    pub rows: Vec<LemmaRow>,
    pub t_max: f64,
    pub inconclusive: bool,
    /// `∫κ ds` and `sqrt(P² + 4π²)` at `t = 0`.
    pub total_curvature: f64,
    pub total_curvature_bound: f64,
}

impl LemmaTable {
    /// Smallest `margin / bound` over the table.
    pub fn min_relative_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin / r.bound)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|margin| / bound`, the equality gap for disks.
    pub fn max_relative_gap(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.margin / r.bound).abs())
            .fold(0.0, f64::max)
    }
}

fn perimeter_at(g: &CurveGeometry, t: f64) -> Result<f64> {
    if t >= 0.0 {
        let (ch, sh) = (t.cosh(), t.sinh());
        Ok(g.integrate_along(|k| ch - k * sh))
    } else {
        outer_from_geometry(g, -t)
    }
}

/// Largest depth checked: 90% of both the focal horizon and the inradius.
fn depth_range(c: &RadialCurve, g: &CurveGeometry) -> Result<f64> {
    if !g.is_hconvex {
        return Err(Error::NotHConvex {
            kappa_min: g.kappa_min,
        });
    }
    let t_valid = focal_horizon(g) - FOCAL_EPS;
    let r_in = inradius(c, InradiusGrid::default())?;
    Ok(0.9 * t_valid.min(r_in))
}

fn depth_grid(t_max: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

/// Compares the perimeter decay of inner parallel sets with its lower bound.
pub fn verify_lemma_diffp(c: &RadialCurve, samples: usize) -> Result<LemmaTable> {
    let g = curve_geometry(c)?;
    let sp = SpaceParams::plane();
    let t_max = depth_range(c, &g)?;
    let inconclusive = t_max < MIN_PROFILE_LENGTH;
    let mut rows = Vec::new();
    for t in depth_grid(t_max, samples) {
        let perimeter = perimeter_at(&g, t)?;
        let decay = -(perimeter_at(&g, t + DIFF_STEP)? - perimeter_at(&g, t - DIFF_STEP)?) / (2.0 * DIFF_STEP);
        let bound = af_rhs(sp, perimeter)?;
        rows.push(LemmaRow {
            t,
            perimeter,
            decay,
            bound,
            margin: decay - bound,
        });
    }
    Ok(LemmaTable {
        rows,
        t_max,
        inconclusive,
        total_curvature: g.total_curvature,
        total_curvature_bound: (g.perimeter.powi(2) + 4.0 * PI * PI).sqrt(),
    })
}

/// One depth of the parallel-perimeter comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub p_omega: f64,
    pub p_star: f64,
    /// `P(Ω*_t) - P(Ω_t)`
    pub margin: f64,
}

/// Compares inner parallel perimeters with those of the perimeter-matched disk.
pub fn verify_perimeter_comparison(c: &RadialCurve, samples: usize) -> Result<Vec<ComparisonRow>> {
    let g = curve_geometry(c)?;
    let sp = SpaceParams::plane();
    let t_max = depth_range(c, &g)?;
    let r_star = radius_from_perimeter(sp, g.perimeter)?;
    depth_grid(t_max, samples)
        .into_iter()
        .map(|t| {
            let p_omega = perimeter_at(&g, t)?;
            let p_star = ball_parallel_perimeter(sp, r_star, t)?;
            Ok(ComparisonRow {
                t,
                p_omega,
                p_star,
                margin: p_star - p_omega,
            })
        })
        .collect()
}

/// Family of horospherically convex domains. The first members are the
/// listed circles, the rest are random low-mode perturbations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySpec {
    pub count: usize,
    pub circles: Vec<f64>,
    pub r0_range: [f64; 2],
    pub max_mode: u32,
    pub max_amplitude: f64,
    pub angles: usize,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            count: 20,
            circles: vec![0.8, 1.2],
            r0_range: [0.7, 1.4],
            max_mode: 4,
            max_amplitude: 0.05,
            angles: DEFAULT_ANGLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub id: String,
    pub r0: f64,
    pub modes: Vec<Mode>,
    pub curve: RadialCurve,
}

impl FamilyMember {
    pub fn is_circle(&self) -> bool {
        self.modes.iter().all(|m| m.amplitude == 0.0)
    }
}

const MAX_DRAWS: usize = 10_000;

pub fn generate_family(spec: &FamilySpec, seed: u64) -> Result<Vec<FamilyMember>> {
    let [lo, hi] = spec.r0_range;
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::domain(format!("invalid r0 range [{lo}, {hi}]")));
    }
    if spec.max_mode < 2 {
        return Err(Error::domain("perturbation modes start at k = 2"));
    }
    let mut out = Vec::with_capacity(spec.count);
    for &r0 in spec.circles.iter().take(spec.count) {
        out.push(FamilyMember {
            id: format!("d{:02}", out.len()),
            r0,
            modes: Vec::new(),
            curve: RadialCurve::circle(r0, spec.angles)?,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0;
    while out.len() < spec.count {
        draws += 1;
        if draws > MAX_DRAWS {
            return Err(Error::domain(format!(
                "no h-convex member found after {MAX_DRAWS} draws"
            )));
        }
        let r0 = rng.gen_range(lo..=hi);
        let n_modes = rng.gen_range(1..=2);
        let modes: Vec<Mode> = (0..n_modes)
            .map(|_| {
                let k = rng.gen_range(2..=spec.max_mode);
                let amp = rng.gen_range(0.0..=spec.max_amplitude);
                let phase = rng.gen_range(0.0..2.0 * PI);
                Mode::new(k, amp, phase)
            })
            .collect();
        let curve = match make_family(r0, &modes, spec.angles) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if !curve_geometry(&curve).map(|g| g.is_hconvex).unwrap_or(false) {
            continue;
        }
        out.push(FamilyMember {
            id: format!("d{:02}", out.len()),
            r0,
            modes,
            curve,
        });
    }
    Ok(out)
}

/// Thread count for sweeps: `HYPROBIN_THREADS` if set, machine parallelism otherwise.
pub fn sweep_threads() -> usize {
    std::env::var("HYPROBIN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs the matching deficit check for every member and every β. Rows are
/// ordered by member then by increasing β; failures become error rows.
pub fn sweep(
    members: &[FamilyMember],
    betas: &[f64],
    res: VerifyResolution,
    threads: usize,
) -> Result<Vec<DeficitReport>> {
    let mut betas = betas.to_vec();
    betas.sort_by(f64::total_cmp);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Solver(format!("thread pool: {e}")))?;
    let per_member: Vec<Vec<DeficitReport>> = pool.install(|| {
        members
            .par_iter()
            .map(|m| match DomainCase::prepare(&m.id, &m.curve, res) {
                Ok(case) => betas
                    .iter()
                    .map(|&b| case.report(b).unwrap_or_else(|e| DeficitReport::failed(&m.id, b, &e)))
                    .collect(),
                Err(e) => betas.iter().map(|&b| DeficitReport::failed(&m.id, b, &e)).collect(),
            })
            .collect()
    });
    Ok(per_member.into_iter().flatten().collect())
}

/// Generates the family for `seed` and sweeps it, stamping the seed on every row.
pub fn sweep_family(
    spec: &FamilySpec,
    seed: u64,
    betas: &[f64],
    res: VerifyResolution,
    threads: usize,
) -> Result<Vec<DeficitReport>> {
    let members = generate_family(spec, seed)?;
    let mut rows = sweep(&members, betas, res, threads)?;
    for r in &mut rows {
        r.family_seed = Some(seed);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(reports: &[DeficitReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if reports.is_empty() {
        w.write_record(CSV_HEADER)
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    for r in reports {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<DeficitReport>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Io(e.to_string())))
        .collect()
}

pub fn write_json<W: Write>(reports: &[DeficitReport], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, reports).map_err(|e| Error::Io(e.to_string()))
}

pub const CSV_HEADER: [&str; 20] = [
    "schema",
    "domain_id",
    "family_seed",
    "theorem",
    "orientation",
    "beta",
    "lambda_omega",
    "lambda_star",
    "P",
    "vol_omega",
    "vol_star",
    "r_star",
    "v_extreme",
    "l2_sq",
    "lhs",
    "rhs",
    "margin",
    "fem_error",
    "confirmed",
    "error",
];
