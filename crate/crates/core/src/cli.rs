//! Executes a validated [`RunConfig`]: runs the solvers or verifiers, writes
//! the report file and returns a printable summary with the exit status.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use serde::Serialize;

use crate::config::{Command, Format, RunConfig};
use crate::domain2d::{curve_geometry, focal_horizon, inradius, outer_from_geometry, InradiusGrid};
use crate::error::{Error, Result};
use crate::fem2d::{mesh_domain, Ladder};
use crate::hypgeo::{
    ball_curvature_integrals, ball_perimeter, ball_volume, radius_from_perimeter,
    steiner_outer_perimeter, SpaceParams,
};
use crate::radial::{rayleigh_constant_bound, shoot_lambda1, solve_radial_refined, RadialProblem};
use crate::verify::{
    self, verify_cor1, verify_lemma_diffp, verify_perimeter_comparison, DeficitReport, DomainCase,
    GEOMETRIC_TOL, MARGIN_TOL,
};

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    SolverError,
    HypothesisViolation,
    MarginViolation,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::SolverError => 1,
            Status::HypothesisViolation => 2,
            Status::MarginViolation => 3,
        }
    }

    pub fn for_error(e: &Error) -> Self {
        if e.is_hypothesis_violation() {
            Status::HypothesisViolation
        } else {
            Status::SolverError
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    /// Full reports of rows whose margin is out of tolerance.
    pub diagnostics: Vec<String>,
    pub artifacts: Vec<PathBuf>,
}

impl Outcome {
    fn new(summary: String) -> Self {
        Self {
            status: Status::Ok,
            summary,
            diagnostics: Vec::new(),
            artifacts: Vec::new(),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut out = match cfg.command()? {
        Command::BallEig => ball_eig(cfg)?,
        Command::DomainEig => domain_eig(cfg)?,
        Command::Geometry => geometry(cfg)?,
        Command::Steiner => steiner(cfg)?,
        Command::Parallel => parallel(cfg)?,
        Command::VerifyThm1 | Command::VerifyThm4 => theorem(cfg)?,
        Command::VerifyLemmas => lemmas(cfg)?,
        Command::Sweep => sweep(cfg)?,
    };
    if let Some(path) = &cfg.output.path {
        out.artifacts.insert(0, path.clone());
    }
    Ok(out)
}

fn write_rows<T: Serialize>(cfg: &RunConfig, rows: &[T]) -> Result<()> {
    let Some(path) = &cfg.output.path else {
        return Ok(());
    };
    let file = BufWriter::new(File::create(path)?);
    match cfg.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(file);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => serde_json::to_writer_pretty(file, rows).map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(())
}

fn write_reports(cfg: &RunConfig, reports: &[DeficitReport]) -> Result<()> {
    let Some(path) = &cfg.output.path else {
        return Ok(());
    };
    let file = BufWriter::new(File::create(path)?);
    match cfg.output.format {
        Format::Csv => verify::write_csv(reports, file),
        Format::Json => verify::write_json(reports, file),
    }
}

#[derive(Serialize)]
struct BallRow {
    n: usize,
    radius: f64,
    beta: f64,
    lambda_weak: f64,
    lambda_shoot: f64,
    difference: f64,
    constant_bound: f64,
}

fn ball_eig(cfg: &RunConfig) -> Result<Outcome> {
    let sp = SpaceParams::new(cfg.n)?;
    let mut rows = Vec::new();
    let mut s = format!("ball n={} R={}\n{:>8} {:>20} {:>20} {:>10}\n", cfg.n, cfg.radius, "beta", "weak", "shooting", "diff");
    for beta in cfg.betas() {
        let prob = RadialProblem::new(sp, cfg.radius, beta)?;
        let weak = solve_radial_refined(&prob, cfg.resolution.radial_elements)?.lambda1;
        let shoot = shoot_lambda1(&prob)?;
        let row = BallRow {
            n: cfg.n,
            radius: cfg.radius,
            beta,
            lambda_weak: weak,
            lambda_shoot: shoot,
            difference: weak - shoot,
            constant_bound: rayleigh_constant_bound(sp, cfg.radius, beta)?,
        };
        writeln!(s, "{beta:>8} {weak:>20.12} {shoot:>20.12} {:>10.2e}", row.difference).unwrap();
        rows.push(row);
    }
    write_rows(cfg, &rows)?;
    Ok(Outcome::new(s))
}

#[derive(Serialize)]
struct DomainRow {
    beta: f64,
    lambda1: f64,
    error_estimate: f64,
    observed_order: Option<f64>,
    dof: usize,
    constant_bound: f64,
    warning: String,
}

fn domain_eig(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.domain.curve(cfg.resolution.angles)?;
    let g = curve_geometry(&c)?;
    let mut s = format!("domain {} P={} A={}\n", cfg.domain.label(), g.perimeter, g.area);
    if !g.is_hconvex {
        writeln!(s, "note: not horospherically convex (kappa_min = {})", g.kappa_min).unwrap();
    }
    if let Some(path) = &cfg.output.mesh_dump {
        let mesh = mesh_domain(&c, cfg.resolution.n_r, cfg.resolution.n_theta)?;
        mesh.write_dump(BufWriter::new(File::create(path)?))?;
    }
    let ladder = Ladder::build(&c, cfg.resolution.fem())?;
    writeln!(s, "{:>8} {:>20} {:>10} {:>6}", "beta", "lambda1", "err_est", "order").unwrap();
    let mut rows = Vec::new();
    for beta in cfg.betas() {
        let sol = ladder.solve(beta)?;
        let order = sol.observed_order.map_or("-".to_string(), |p| format!("{p:.2}"));
        writeln!(s, "{beta:>8} {:>20.12} {:>10.2e} {order:>6}", sol.lambda1, sol.error_estimate).unwrap();
        if let Some(w) = &sol.warning {
            writeln!(s, "warning: {w}").unwrap();
        }
        rows.push(DomainRow {
            beta,
            lambda1: sol.lambda1,
            error_estimate: sol.error_estimate,
            observed_order: sol.observed_order,
            dof: sol.finest.dof,
            constant_bound: beta * g.perimeter / g.area,
            warning: sol.warning.unwrap_or_default(),
        });
    }
    write_rows(cfg, &rows)?;
    let mut out = Outcome::new(s);
    if let Some(p) = &cfg.output.mesh_dump {
        out.artifacts.push(p.clone());
    }
    Ok(out)
}

#[derive(Serialize)]
struct GeometryRow {
    perimeter: f64,
    area: f64,
    total_curvature: f64,
    gauss_bonnet_residual: f64,
    kappa_min: f64,
    kappa_max: f64,
    hconvex: bool,
    inradius: f64,
    focal_horizon: f64,
    r_star: f64,
    vol_star: f64,
    deficit: f64,
}

fn geometry(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.domain.curve(cfg.resolution.angles)?;
    let g = curve_geometry(&c)?;
    let sp = SpaceParams::plane();
    let r_star = radius_from_perimeter(sp, g.perimeter)?;
    let vol_star = ball_volume(sp, r_star)?;
    let row = GeometryRow {
        perimeter: g.perimeter,
        area: g.area,
        total_curvature: g.total_curvature,
        gauss_bonnet_residual: g.gauss_bonnet_residual(),
        kappa_min: g.kappa_min,
        kappa_max: g.kappa_max,
        hconvex: g.is_hconvex,
        inradius: inradius(&c, InradiusGrid::default())?,
        focal_horizon: focal_horizon(&g),
        r_star,
        vol_star,
        deficit: vol_star - g.area,
    };
    let mut s = format!("domain {}\n", cfg.domain.label());
    for (k, v) in [
        ("perimeter", row.perimeter),
        ("area", row.area),
        ("total curvature", row.total_curvature),
        ("Gauss-Bonnet residual", row.gauss_bonnet_residual),
        ("kappa min", row.kappa_min),
        ("kappa max", row.kappa_max),
        ("inradius", row.inradius),
        ("focal horizon", row.focal_horizon),
        ("matched disk radius", row.r_star),
        ("matched disk area", row.vol_star),
        ("isoperimetric deficit", row.deficit),
    ] {
        writeln!(s, "{k:<24} {v}").unwrap();
    }
    writeln!(s, "{:<24} {}", "h-convex", row.hconvex).unwrap();
    write_rows(cfg, &[row])?;
    Ok(Outcome::new(s))
}

#[derive(Serialize)]
struct SteinerRow {
    body: &'static str,
    s: f64,
    direct: f64,
    steiner: f64,
    relative: f64,
}

fn steiner(cfg: &RunConfig) -> Result<Outcome> {
    let sp = SpaceParams::new(cfg.n)?;
    let mut rows = Vec::new();
    let v_ball = ball_curvature_integrals(sp, cfg.radius)?;
    for &s in &cfg.offsets {
        let direct = ball_perimeter(sp, cfg.radius + s)?;
        let st = steiner_outer_perimeter(sp, &v_ball, s)?;
        rows.push(SteinerRow {
            body: "ball",
            s,
            direct,
            steiner: st,
            relative: (st - direct).abs() / direct,
        });
    }
    if cfg.n == 2 {
        let g = curve_geometry(&cfg.domain.curve(cfg.resolution.angles)?)?;
        for &s in &cfg.offsets {
            let direct = outer_from_geometry(&g, s)?;
            let st = steiner_outer_perimeter(sp, &[g.total_curvature, g.perimeter], s)?;
            rows.push(SteinerRow {
                body: "domain",
                s,
                direct,
                steiner: st,
                relative: (st - direct).abs() / direct,
            });
        }
    }
    let mut out = format!("{:<7} {:>6} {:>20} {:>20} {:>10}\n", "body", "s", "direct", "steiner", "rel");
    for r in &rows {
        writeln!(out, "{:<7} {:>6} {:>20.12} {:>20.12} {:>10.2e}", r.body, r.s, r.direct, r.steiner, r.relative).unwrap();
    }
    write_rows(cfg, &rows)?;
    Ok(Outcome::new(out))
}

fn parallel(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.domain.curve(cfg.resolution.angles)?;
    let rows = verify_perimeter_comparison(&c, cfg.t_samples)?;
    let mut s = format!("{:>10} {:>16} {:>16}\n", "t", "P(inner)", "P(disk inner)");
    for r in &rows {
        writeln!(s, "{:>10.6} {:>16.10} {:>16.10}", r.t, r.p_omega, r.p_star).unwrap();
    }
    write_rows(cfg, &rows)?;
    Ok(Outcome::new(s))
}

fn report_line(r: &DeficitReport) -> String {
    format!(
        "{:<8} {:>6} {:>16.10} {:>16.10} {:>12.4e} {:>12.4e} {:>12.4e} {}",
        r.domain_id,
        r.beta,
        r.lambda_omega,
        r.lambda_star,
        r.lhs,
        r.rhs,
        r.margin,
        if r.is_error() { r.error.as_str() } else if row_ok(r) { "ok" } else { "VIOLATED" }
    )
}

fn row_ok(r: &DeficitReport) -> bool {
    let cor_ok = r.beta > 0.0 || verify_cor1(r);
    let remark_ok = r.beta < 0.0 || r.lhs >= -MARGIN_TOL;
    r.confirmed && cor_ok && remark_ok
}

fn report_header() -> String {
    format!(
        "{:<8} {:>6} {:>16} {:>16} {:>12} {:>12} {:>12}\n",
        "domain", "beta", "lambda", "lambda_ball", "lhs", "rhs", "margin"
    )
}

fn collect(reports: &[DeficitReport], mut s: String) -> Outcome {
    let mut out_status = Status::Ok;
    let mut diagnostics = Vec::new();
    for r in reports {
        writeln!(s, "{}", report_line(r)).unwrap();
        if r.is_error() {
            out_status = Status::SolverError;
        } else if !row_ok(r) {
            if out_status == Status::Ok {
                out_status = Status::MarginViolation;
            }
            diagnostics.push(serde_json::to_string_pretty(r).expect("report serializes"));
        }
    }
    let bad = reports.iter().filter(|r| !row_ok(r)).count();
    writeln!(s, "{} rows, {} out of tolerance", reports.len(), bad).unwrap();
    Outcome {
        status: out_status,
        summary: s,
        diagnostics,
        artifacts: Vec::new(),
    }
}

fn theorem(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.domain.curve(cfg.resolution.angles)?;
    let id = cfg.domain.label();
    let case = DomainCase::prepare(&id, &c, cfg.resolution.verify())?;
    let reports = cfg
        .betas()
        .into_iter()
        .map(|b| case.report(b))
        .collect::<Result<Vec<_>>>()?;
    write_reports(cfg, &reports)?;
    let head = format!("{}\n{}", reports[0].orientation, report_header());
    Ok(collect(&reports, head))
}

fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let reports = verify::sweep_family(
        &cfg.family,
        cfg.seed,
        &cfg.betas(),
        cfg.resolution.verify(),
        verify::sweep_threads(),
    )?;
    write_reports(cfg, &reports)?;
    let head = format!("family seed {}, {} members\n{}", cfg.seed, cfg.family.count, report_header());
    Ok(collect(&reports, head))
}

#[derive(Serialize)]
struct LemmaCsvRow {
    table: &'static str,
    t: f64,
    left: f64,
    right: f64,
    margin: f64,
}

fn lemmas(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.domain.curve(cfg.resolution.angles)?;
    let lemma = verify_lemma_diffp(&c, cfg.t_samples)?;
    let comparison = verify_perimeter_comparison(&c, cfg.t_samples)?;
    let mut rows = Vec::new();
    for r in &lemma.rows {
        rows.push(LemmaCsvRow {
            table: "decay",
            t: r.t,
            left: r.decay,
            right: r.bound,
            margin: r.margin,
        });
    }
    for r in &comparison {
        rows.push(LemmaCsvRow {
            table: "comparison",
            t: r.t,
            left: r.p_star,
            right: r.p_omega,
            margin: r.margin,
        });
    }
    write_rows(cfg, &rows)?;
    let lemma_ok = lemma.min_relative_margin() >= -MARGIN_TOL;
    let cmp_min = comparison.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let cmp_ok = cmp_min >= -GEOMETRIC_TOL;
    let mut s = String::new();
    writeln!(s, "depths checked: [0, {:.6}]{}", lemma.t_max, if lemma.inconclusive { " (inconclusive)" } else { "" }).unwrap();
    writeln!(
        s,
        "total curvature {} vs sqrt(P^2 + 4 pi^2) = {}",
        lemma.total_curvature, lemma.total_curvature_bound
    )
    .unwrap();
    writeln!(s, "perimeter decay: min relative margin {:.4e} {}", lemma.min_relative_margin(), ok_word(lemma_ok)).unwrap();
    writeln!(s, "parallel perimeters: min margin {cmp_min:.4e} {}", ok_word(cmp_ok)).unwrap();
    let mut out = Outcome::new(s);
    if !(lemma_ok && cmp_ok) && !lemma.inconclusive {
        out.status = Status::MarginViolation;
    }
    Ok(out)
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}
