//! Run configuration: CLI flags layered over an optional flat JSON file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use minlen_core::oracle::MIN_GRID_ORDER;
use minlen_core::{Deformation, Extension, PhysicalParams, PotentialSpec};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Delta,
    DoubleDelta,
    Coulomb,
}

impl PotentialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PotentialKind::Delta => "delta",
            PotentialKind::DoubleDelta => "double-delta",
            PotentialKind::Coulomb => "coulomb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every setting that may come from either the command line or the
/// config file. Unset fields fall through to the next layer.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Potential to solve.
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Coupling of the delta wells.
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    /// Separation of the double-delta wells.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Strength of the Coulomb-like potential.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Self-adjoint extension parameter; accepts inf and -inf.
    #[arg(long = "A", value_name = "A", allow_hyphen_values = true, value_parser = parse_extension)]
    #[serde(rename = "A", default, deserialize_with = "extension_from_json")]
    pub extension: Option<f64>,
    /// Deformation parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Mass.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Reduced Planck constant.
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    /// Oracle grid order.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of levels to report.
    #[arg(long)]
    pub n_states: Option<usize>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_extension(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number, inf or -inf"))?;
    if v.is_nan() {
        return Err("A must not be NaN".into());
    }
    Ok(v)
}

fn extension_from_json<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(v)) => Ok(Some(v)),
        Some(Raw::Text(s)) => parse_extension(&s)
            .map(Some)
            .map_err(serde::de::Error::custom),
    }
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            potential: self.potential.or(base.potential),
            u0: self.u0.or(base.u0),
            a: self.a.or(base.a),
            alpha: self.alpha.or(base.alpha),
            extension: self.extension.or(base.extension),
            beta: self.beta.or(base.beta),
            m: self.m.or(base.m),
            hbar: self.hbar.or(base.hbar),
            grid: self.grid.or(base.grid),
            n_states: self.n_states.or(base.n_states),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: PotentialKind,
    pub u0: f64,
    pub a: f64,
    pub alpha: f64,
    pub extension: Extension,
    pub potential: PotentialSpec,
    pub deformation: Deformation,
    pub params: PhysicalParams,
    pub grid_order: usize,
    pub n_states: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let kind = s.potential.unwrap_or(PotentialKind::Delta);
        let u0 = s.u0.unwrap_or(1.0);
        let a = s.a.unwrap_or(1.0);
        let alpha = s.alpha.unwrap_or(1.0);
        let extension = Extension::from_f64(s.extension.unwrap_or(0.0)).map_err(config)?;
        let potential = match kind {
            PotentialKind::Delta => PotentialSpec::delta(u0),
            PotentialKind::DoubleDelta => PotentialSpec::double_delta(u0, a),
            PotentialKind::Coulomb => PotentialSpec::coulomb(alpha, extension),
        }
        .map_err(config)?;
        let deformation = Deformation::new(s.beta.unwrap_or(0.0)).map_err(config)?;
        let params =
            PhysicalParams::new(s.m.unwrap_or(1.0), s.hbar.unwrap_or(1.0)).map_err(config)?;
        let grid_order = s.grid.unwrap_or(minlen_core::oracle::DEFAULT_GRID_ORDER);
        if grid_order < MIN_GRID_ORDER {
            return Err(CliError::Config(format!(
                "--grid must be at least {MIN_GRID_ORDER}, got {grid_order}"
            )));
        }
        let n_states = s.n_states.unwrap_or(5);
        if n_states == 0 {
            return Err(CliError::Config("--n-states must be at least 1".into()));
        }
        Ok(Self {
            kind,
            u0,
            a,
            alpha,
            extension,
            potential,
            deformation,
            params,
            grid_order,
            n_states,
            format: s.format.unwrap_or_default(),
            out: s.out.clone(),
        })
    }

    /// Extra requirements of the oracle.
    pub fn check_oracle(&self) -> Result<(), CliError> {
        if self.deformation.is_undeformed() {
            return Err(CliError::Config(
                "the oracle needs a bounded momentum domain: pass --beta > 0".into(),
            ));
        }
        if self.kind == PotentialKind::Coulomb && !matches!(self.extension, Extension::Finite(_)) {
            return Err(CliError::Config(
                "the oracle kernel is infinite for A = ±inf: pass a finite --A".into(),
            ));
        }
        Ok(())
    }
}

fn config(e: minlen_core::Error) -> CliError {
    CliError::Config(e.to_string())
}
