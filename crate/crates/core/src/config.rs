//! Run configuration: a strict JSON document that command-line flags override.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::domain2d::{make_family, Mode, RadialCurve, DEFAULT_ANGLES};
use crate::error::{Error, Result};
use crate::fem2d::{FemResolution, DEFAULT_REFINEMENTS, DEFAULT_RINGS, DEFAULT_SPOKES};
use crate::radial::DEFAULT_ELEMENTS;
use crate::verify::{FamilySpec, VerifyResolution};

pub const DEFAULT_SEED: u64 = 2026;
pub const DEFAULT_T_SAMPLES: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    BallEig,
    DomainEig,
    Geometry,
    Steiner,
    Parallel,
    VerifyThm1,
    VerifyThm4,
    VerifyLemmas,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BallEig => "ball-eig",
            Command::DomainEig => "domain-eig",
            Command::Geometry => "geometry",
            Command::Steiner => "steiner",
            Command::Parallel => "parallel",
            Command::VerifyThm1 => "verify-thm1",
            Command::VerifyThm4 => "verify-thm4",
            Command::VerifyLemmas => "verify-lemmas",
            Command::Sweep => "sweep",
        }
    }

    /// Commands that work on a planar domain rather than a ball.
    pub fn needs_plane(self) -> bool {
        !matches!(self, Command::BallEig | Command::Steiner)
    }

    pub fn is_verification(self) -> bool {
        matches!(self, Command::VerifyThm1 | Command::VerifyThm4 | Command::Sweep)
    }

    /// β values used when the configuration lists none.
    pub fn default_betas(self) -> Vec<f64> {
        match self {
            Command::VerifyThm4 => vec![1.0],
            Command::Sweep => vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0],
            _ => vec![-1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A star-shaped domain `r(θ) = r0 + Σ ε cos(kθ + φ)`, or explicit samples of `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DomainSpec {
    pub r0: f64,
    pub modes: Vec<Mode>,
    pub samples: Option<Vec<f64>>,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self {
            r0: 1.0,
            modes: Vec::new(),
            samples: None,
        }
    }
}

impl DomainSpec {
    pub fn curve(&self, angles: usize) -> Result<RadialCurve> {
        match &self.samples {
            Some(r) => RadialCurve::new(r.clone()),
            None => make_family(self.r0, &self.modes, angles),
        }
    }

    pub fn label(&self) -> String {
        if self.samples.is_some() {
            return "samples".into();
        }
        let mut s = format!("r0={}", self.r0);
        for m in &self.modes {
            s.push_str(&format!(";{}:{}:{}", m.k, m.amplitude, m.phase));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolutionSpec {
    pub angles: usize,
    pub radial_elements: usize,
    pub n_r: usize,
    pub n_theta: usize,
    pub refinements: usize,
}

impl Default for ResolutionSpec {
    fn default() -> Self {
        Self {
            angles: DEFAULT_ANGLES,
            radial_elements: DEFAULT_ELEMENTS,
            n_r: DEFAULT_RINGS,
            n_theta: DEFAULT_SPOKES,
            refinements: DEFAULT_REFINEMENTS,
        }
    }
}

impl ResolutionSpec {
    pub fn fem(&self) -> FemResolution {
        FemResolution {
            n_r: self.n_r,
            n_theta: self.n_theta,
            refinements: self.refinements,
        }
    }

    pub fn verify(&self) -> VerifyResolution {
        VerifyResolution {
            radial_elements: self.radial_elements,
            fem: self.fem(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Writes the finest mesh of `domain-eig` here.
    pub mesh_dump: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Ambient dimension; domains other than balls need `n = 2`.
    pub n: usize,
    /// Ball radius for `ball-eig` and ball-side `steiner`.
    pub radius: f64,
    pub domain: DomainSpec,
    pub betas: Vec<f64>,
    pub resolution: ResolutionSpec,
    pub family: FamilySpec,
    pub output: OutputSpec,
    pub seed: u64,
    /// Depth samples in profile and lemma tables.
    pub t_samples: usize,
    /// Outer offsets for `steiner`.
    pub offsets: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            n: 2,
            radius: 1.0,
            domain: DomainSpec::default(),
            betas: Vec::new(),
            resolution: ResolutionSpec::default(),
            family: FamilySpec::default(),
            output: OutputSpec::default(),
            seed: DEFAULT_SEED,
            t_samples: DEFAULT_T_SAMPLES,
            offsets: vec![0.1, 0.5, 1.0],
        }
    }
}

/// Parses a configuration document. Unknown keys and type mismatches are
/// reported with the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("field"))
            .unwrap_or("document")
            .to_string();
        Error::config(field, msg)
    })
}

pub fn emit_config(cfg: &RunConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("configuration serializes")
}

impl RunConfig {
    pub fn command(&self) -> Result<Command> {
        self.command
            .ok_or_else(|| Error::config("command", "no command given"))
    }

    /// The β list, or the command default when none is configured.
    pub fn betas(&self) -> Vec<f64> {
        match (self.betas.is_empty(), self.command) {
            (true, Some(c)) => c.default_betas(),
            (true, None) => vec![-1.0],
            (false, _) => self.betas.clone(),
        }
    }

    /// Range and consistency checks beyond what parsing enforces.
    pub fn validate(&self) -> Result<()> {
        let cmd = self.command()?;
        if self.n < 2 {
            return Err(Error::config("n", format!("dimension must be at least 2, got {}", self.n)));
        }
        if cmd.needs_plane() && self.n != 2 {
            return Err(Error::config(
                "n",
                format!("{} works in the hyperbolic plane only (n = 2), got n = {}", cmd.name(), self.n),
            ));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config("radius", format!("must be positive, got {}", self.radius)));
        }
        let r = &self.resolution;
        if r.angles < 128 || !r.angles.is_multiple_of(2) {
            return Err(Error::config("resolution.angles", format!("must be even and at least 128, got {}", r.angles)));
        }
        if r.radial_elements < 16 || !r.radial_elements.is_multiple_of(2) {
            return Err(Error::config(
                "resolution.radial_elements",
                format!("must be even and at least 16, got {}", r.radial_elements),
            ));
        }
        if r.n_r < 8 {
            return Err(Error::config("resolution.n_r", format!("must be at least 8, got {}", r.n_r)));
        }
        if r.n_theta < 64 {
            return Err(Error::config("resolution.n_theta", format!("must be at least 64, got {}", r.n_theta)));
        }
        r.fem()
            .levels()
            .map_err(|e| Error::config("resolution.refinements", e.to_string()))?;
        if self.t_samples < 2 {
            return Err(Error::config("t_samples", "need at least two depth samples"));
        }
        if let Some(s) = self.offsets.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::config("offsets", format!("outer offsets must be non-negative, got {s}")));
        }
        let betas = self.betas();
        if let Some(b) = betas.iter().find(|b| !b.is_finite()) {
            return Err(Error::config("betas", format!("non-finite value {b}")));
        }
        if cmd.is_verification() && betas.contains(&0.0) {
            return Err(Error::config("betas", "theorems require beta != 0"));
        }
        match cmd {
            Command::VerifyThm1 if betas.iter().any(|b| *b > 0.0) => {
                return Err(Error::config("betas", "verify-thm1 needs beta < 0"));
            }
            Command::VerifyThm4 if betas.iter().any(|b| *b < 0.0) => {
                return Err(Error::config("betas", "verify-thm4 needs beta > 0"));
            }
            _ => {}
        }
        if cmd.needs_plane() && cmd != Command::Sweep {
            self.domain.curve(r.angles).map_err(|e| match e {
                Error::InvalidFamily { theta, radius } => Error::config(
                    "domain",
                    format!("r(θ) = {radius} is not positive at θ = {theta}"),
                ),
                other => Error::config("domain", other.to_string()),
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(r#"{"command": "geometry"}"#).unwrap();
        assert_eq!(cfg.command, Some(Command::Geometry));
        assert_eq!(cfg.resolution, ResolutionSpec::default());
        assert_eq!(cfg.resolution.angles, 512);
        assert_eq!(cfg.resolution.radial_elements, 512);
        assert_eq!((cfg.resolution.n_r, cfg.resolution.n_theta, cfg.resolution.refinements), (48, 192, 2));
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_names_the_field() {
        match parse_config(r#"{"command": "sweep", "bogus": 1}"#) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "bogus"),
            other => panic!("{other:?}"),
        }
        match parse_config(r#"{"resolution": {"n_rr": 3}}"#) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "n_rr"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(r#"{"n": "two"}"#), Err(Error::Config { .. })));
    }

    #[test]
    fn nonpositive_family_is_rejected_with_angle() {
        let cfg = parse_config(
            r#"{"command": "geometry", "domain": {"r0": 0.1, "modes": [{"k": 2, "amplitude": -0.3, "phase": 0.0}]}}"#,
        )
        .unwrap();
        match cfg.validate() {
            Err(Error::Config { field, message }) => {
                assert_eq!(field, "domain");
                assert!(message.contains("θ = 0"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_beta_rejected_for_theorems() {
        let mut cfg = RunConfig {
            command: Some(Command::VerifyThm1),
            betas: vec![0.0],
            ..RunConfig::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("theorems require beta != 0"));
        cfg.command = Some(Command::DomainEig);
        cfg.validate().unwrap();
        cfg.command = Some(Command::VerifyThm4);
        cfg.betas = vec![-1.0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn plane_commands_need_n2() {
        let mut cfg = RunConfig {
            command: Some(Command::DomainEig),
            n: 3,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.command = Some(Command::BallEig);
        cfg.validate().unwrap();
    }

    #[test]
    fn command_defaults_for_beta() {
        let cfg = RunConfig {
            command: Some(Command::Sweep),
            ..RunConfig::default()
        };
        assert_eq!(cfg.betas().len(), 6);
    }
}
