use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyprobin::cli::{run, Status};
use hyprobin::config::{parse_config, Command, Format, RunConfig};
use hyprobin::domain2d::Mode;
use hyprobin::Error;

/// First Robin eigenvalue on hyperbolic balls and h-convex domains.
///
/// Exit status: 0 all margins within tolerance, 1 solver error,
/// 2 theorem hypothesis not met, 3 a margin out of tolerance.
#[derive(Parser)]
#[command(name = "hyprobin", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// First eigenvalue of a geodesic ball by both radial solvers.
    BallEig(Flags),
    /// First eigenvalue of a planar domain by finite elements.
    DomainEig(Flags),
    /// Perimeter, area, curvature and inradius of a domain.
    Geometry(Flags),
    /// Outer parallel perimeters against the Steiner formula.
    Steiner(Flags),
    /// Inner parallel perimeters of a domain and of its matched disk.
    Parallel(Flags),
    /// Lower deficit bound for beta < 0.
    VerifyThm1(Flags),
    /// Upper deficit bound for beta > 0.
    VerifyThm4(Flags),
    /// Perimeter-decay bound and parallel perimeter comparison.
    VerifyLemmas(Flags),
    /// Deficit bounds over a seeded domain family.
    Sweep(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON configuration document; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ambient dimension [default: 2]
    #[arg(long)]
    n: Option<usize>,
    /// Ball radius [default: 1]
    #[arg(long = "R", alias = "radius")]
    radius: Option<f64>,
    /// Robin parameter, repeatable or comma separated [default: -1; verify-thm4: 1; sweep: -2,-1,-0.5,0.5,1,2]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Vec<f64>,
    /// Base radius of the domain [default: 1]
    #[arg(long)]
    r0: Option<f64>,
    /// Perturbation mode k:amplitude:phase, repeatable [default: none]
    #[arg(long = "mode", value_parser = parse_mode, allow_hyphen_values = true)]
    modes: Vec<Mode>,
    /// Boundary samples [default: 512]
    #[arg(long)]
    angles: Option<usize>,
    /// Radial elements [default: 512]
    #[arg(long)]
    radial_elements: Option<usize>,
    /// Rings of the finest mesh [default: 48]
    #[arg(long)]
    n_r: Option<usize>,
    /// Spokes of the finest mesh [default: 192]
    #[arg(long)]
    n_theta: Option<usize>,
    /// Mesh halvings below the finest mesh [default: 2]
    #[arg(long)]
    refinements: Option<usize>,
    /// Report file [default: none]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format, csv or json [default: csv]
    #[arg(long)]
    format: Option<String>,
    /// Family seed [default: 2026]
    #[arg(long)]
    seed: Option<u64>,
    /// Family size [default: 20]
    #[arg(long)]
    count: Option<usize>,
    /// Depth samples in profile tables [default: 41]
    #[arg(long)]
    t_samples: Option<usize>,
    /// Outer offsets for steiner, comma separated [default: 0.1,0.5,1]
    #[arg(long, value_delimiter = ',')]
    offset: Vec<f64>,
    /// Write the finest mesh of domain-eig to this file [default: none]
    #[arg(long)]
    dump_mesh: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    print_config: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected k:amplitude:phase, got `{s}`"));
    }
    let k = parts[0].parse().map_err(|e| format!("mode k: {e}"))?;
    let amp = parts[1].parse().map_err(|e| format!("mode amplitude: {e}"))?;
    let phase = parts[2].parse().map_err(|e| format!("mode phase: {e}"))?;
    Ok(Mode::new(k, amp, phase))
}

fn build(command: Command, f: Flags) -> Result<(RunConfig, bool), Error> {
    let mut cfg = match &f.config {
        Some(p) => parse_config(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    cfg.command = Some(command);
    if let Some(v) = f.n {
        cfg.n = v;
    }
    if let Some(v) = f.radius {
        cfg.radius = v;
    }
    if !f.beta.is_empty() {
        cfg.betas = f.beta;
    }
    if let Some(v) = f.r0 {
        cfg.domain.r0 = v;
        cfg.domain.samples = None;
    }
    if !f.modes.is_empty() {
        cfg.domain.modes = f.modes;
        cfg.domain.samples = None;
    }
    let r = &mut cfg.resolution;
    for (dst, src) in [
        (&mut r.angles, f.angles),
        (&mut r.radial_elements, f.radial_elements),
        (&mut r.n_r, f.n_r),
        (&mut r.n_theta, f.n_theta),
        (&mut r.refinements, f.refinements),
    ] {
        if let Some(v) = src {
            *dst = v;
        }
    }
    if let Some(v) = f.out {
        cfg.output.path = Some(v);
    }
    if let Some(v) = f.format {
        cfg.output.format = match v.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(Error::Config {
                field: "format".into(),
                message: format!("expected csv or json, got `{other}`"),
            }),
        };
    }
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.count {
        cfg.family.count = v;
    }
    if let Some(v) = f.t_samples {
        cfg.t_samples = v;
    }
    if !f.offset.is_empty() {
        cfg.offsets = f.offset;
    }
    if let Some(v) = f.dump_mesh {
        cfg.output.mesh_dump = Some(v);
    }
    Ok((cfg, f.print_config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Sub::BallEig(f) => (Command::BallEig, f),
        Sub::DomainEig(f) => (Command::DomainEig, f),
        Sub::Geometry(f) => (Command::Geometry, f),
        Sub::Steiner(f) => (Command::Steiner, f),
        Sub::Parallel(f) => (Command::Parallel, f),
        Sub::VerifyThm1(f) => (Command::VerifyThm1, f),
        Sub::VerifyThm4(f) => (Command::VerifyThm4, f),
        Sub::VerifyLemmas(f) => (Command::VerifyLemmas, f),
        Sub::Sweep(f) => (Command::Sweep, f),
    };
    let result = build(command, flags).and_then(|(cfg, print)| {
        if print {
            println!("{}", hyprobin::config::emit_config(&cfg));
            cfg.validate()?;
            return Ok(None);
        }
        run(&cfg).map(Some)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(out)) => {
            print!("{}", out.summary);
            for d in &out.diagnostics {
                eprintln!("margin out of tolerance:\n{d}");
            }
            for a in &out.artifacts {
                eprintln!("wrote {}", a.display());
            }
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config { .. } => 2,
                ref other => Status::for_error(other).code(),
            };
            ExitCode::from(code as u8)
        }
    }
}
