//! The four subcommands.

use std::time::Instant;

use minlen_core::analytic::{
    delta_energy_expansion, solve_coulomb, solve_delta, solve_double_delta,
};
use minlen_core::numerics::polyfit;
use minlen_core::oracle::{self, OracleOptions};
use minlen_core::validation::{CheckOutcome, Validator};
use rayon::prelude::*;

use crate::config::{Format, PotentialKind, RunConfig, Settings};
use crate::output::{
    self, ConfigEcho, FitReport, Meta, ResultRecord, StateRecord, SweepAxis, SweepPoint,
    SweepRecord,
};
use crate::CliError;

fn record(label: String, energy: f64, q: f64, residual: f64) -> StateRecord {
    StateRecord {
        label,
        energy: Some(energy),
        q: Some(q),
        residual: Some(residual),
        oracle_energy: None,
        deviation: None,
        delta: None,
    }
}

/// Closed-form levels of the configured potential.
pub fn analytic_states(cfg: &RunConfig) -> Result<Vec<StateRecord>, CliError> {
    let (d, p) = (&cfg.deformation, &cfg.params);
    let states = match cfg.kind {
        PotentialKind::Delta | PotentialKind::DoubleDelta if cfg.u0 == 0.0 => Vec::new(),
        PotentialKind::Delta => {
            let s = solve_delta(cfg.u0, d, p)?.state;
            vec![record(s.label.to_string(), s.energy, s.q, s.residual)]
        }
        PotentialKind::DoubleDelta => solve_double_delta(cfg.u0, cfg.a, d, p)?
            .states
            .iter()
            .map(|s| {
                record(
                    s.state.label.to_string(),
                    s.state.energy,
                    s.state.q,
                    s.state.residual,
                )
            })
            .collect(),
        PotentialKind::Coulomb => {
            let sol = solve_coulomb(cfg.alpha, cfg.extension, cfg.n_states, d, p)?;
            sol.states
                .iter()
                .map(|s| StateRecord {
                    delta: Some(sol.delta),
                    ..record(s.label.to_string(), s.energy, s.q, s.residual)
                })
                .collect()
        }
    };
    Ok(states)
}

/// Oracle levels paired by order with the closed-form ones.
pub fn oracle_states(cfg: &RunConfig) -> Result<Vec<StateRecord>, CliError> {
    cfg.check_oracle()?;
    let analytic = analytic_states(cfg)?;
    let options = OracleOptions {
        convergence: false,
        ..OracleOptions::with_order(cfg.grid_order)
    };
    let (_, spectrum) = oracle::solve(
        &cfg.potential,
        &cfg.deformation,
        &cfg.params,
        &options,
        cfg.n_states,
    )?;
    let n = analytic.len().max(spectrum.states.len());
    Ok((0..n)
        .map(|i| {
            let oracle_energy = spectrum.states.get(i).map(|s| s.energy);
            match analytic.get(i) {
                Some(a) => StateRecord {
                    oracle_energy,
                    deviation: oracle_energy
                        .zip(a.energy)
                        .map(|(o, e)| ((o - e) / e).abs()),
                    ..a.clone()
                },
                None => StateRecord {
                    label: format!("oracle-{i}"),
                    energy: None,
                    q: None,
                    residual: None,
                    oracle_energy,
                    deviation: None,
                    delta: None,
                },
            }
        })
        .collect())
}

fn emit(text: String, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run_single(cfg: &RunConfig, with_oracle: bool, stamp: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let states = if with_oracle {
        oracle_states(cfg)?
    } else {
        analytic_states(cfg)?
    };
    let rec = ResultRecord {
        config: ConfigEcho::of(cfg),
        states,
        meta: Meta::new(
            with_oracle.then_some(cfg.grid_order),
            start.elapsed().as_secs_f64(),
            stamp,
        ),
    };
    let text = match cfg.format {
        Format::Json => output::to_json(&rec),
        Format::Csv => output::result_csv(&rec),
    };
    emit(text, cfg)
}

/// A one-parameter range `NAME:FROM:TO:POINTS[:log]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub parameter: &'static str,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
}

impl Range {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = |why: &str| {
            CliError::Config(format!(
                "bad --range `{spec}`: {why} (expected NAME:FROM:TO:POINTS[:log])"
            ))
        };
        let parts: Vec<&str> = spec.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(bad("wrong number of fields"));
        }
        let parameter = match parts[0] {
            "beta" => "beta",
            "u0" => "u0",
            "a" => "a",
            "alpha" => "alpha",
            "A" => "A",
            _ => return Err(bad("parameter must be one of beta, u0, a, alpha, A")),
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad("bounds must be finite numbers"))
        };
        let (from, to) = (num(parts[1])?, num(parts[2])?);
        let points: usize = parts[3]
            .parse()
            .map_err(|_| bad("point count must be a positive integer"))?;
        if points == 0 {
            return Err(bad("point count must be a positive integer"));
        }
        let log = match parts.get(4) {
            None => false,
            Some(&"log") => true,
            Some(_) => return Err(bad("the optional fifth field must be `log`")),
        };
        if log && !(from > 0.0 && to > 0.0) {
            return Err(bad("a log range needs positive bounds"));
        }
        Ok(Self {
            parameter,
            from,
            to,
            points,
            log,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + t * (self.to - self.from)
                }
            })
            .collect()
    }

    fn applies_to(&self, kind: PotentialKind) -> bool {
        match self.parameter {
            "u0" => kind != PotentialKind::Coulomb,
            "a" => kind == PotentialKind::DoubleDelta,
            "alpha" | "A" => kind == PotentialKind::Coulomb,
            _ => true,
        }
    }

    fn set(&self, base: &Settings, v: f64) -> Settings {
        let mut s = base.clone();
        match self.parameter {
            "beta" => s.beta = Some(v),
            "u0" => s.u0 = Some(v),
            "a" => s.a = Some(v),
            "alpha" => s.alpha = Some(v),
            _ => s.extension = Some(v),
        }
        s
    }
}

pub struct SweepOptions {
    pub fit: bool,
    pub with_oracle: bool,
    pub stamp: bool,
}

/// Least-squares polynomial in √β through the lowest level of each point.
pub const FIT_DEGREE: usize = 4;

pub fn run_sweep(
    settings: &Settings,
    ranges: &[String],
    opts: &SweepOptions,
) -> Result<(), CliError> {
    if ranges.len() != 1 {
        return Err(CliError::Config(format!(
            "a sweep ranges over exactly one parameter; got {} --range flags",
            ranges.len()
        )));
    }
    let range = Range::parse(&ranges[0])?;
    let base = RunConfig::from_settings(settings)?;
    if !range.applies_to(base.kind) {
        return Err(CliError::Config(format!(
            "parameter `{}` does not enter the {} potential",
            range.parameter,
            base.kind.as_str()
        )));
    }
    if opts.fit && (range.parameter != "beta" || range.points <= FIT_DEGREE) {
        return Err(CliError::Config(format!(
            "--fit needs a beta range with at least {} points",
            FIT_DEGREE + 1
        )));
    }
    let values = range.values();
    let configs = values
        .iter()
        .map(|&v| RunConfig::from_settings(&range.set(settings, v)))
        .collect::<Result<Vec<_>, _>>()?;
    if opts.with_oracle {
        configs.iter().try_for_each(RunConfig::check_oracle)?;
    }
    let start = Instant::now();
    // rayon's collect keeps input order
    let states = configs
        .par_iter()
        .map(|c| {
            if opts.with_oracle {
                oracle_states(c)
            } else {
                analytic_states(c)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fit = if opts.fit {
        let (x, y): (Vec<f64>, Vec<f64>) = configs
            .iter()
            .zip(&states)
            .map(|(c, s)| {
                let e = s.first().and_then(|r| r.energy).ok_or_else(|| {
                    CliError::Solver(minlen_core::Error::Unsupported(format!(
                        "no bound state at beta = {}",
                        c.deformation.beta()
                    )))
                })?;
                Ok((c.deformation.sqrt_beta(), e))
            })
            .collect::<Result<Vec<_>, CliError>>()?
            .into_iter()
            .unzip();
        let coefficients = polyfit(&x, &y, FIT_DEGREE)?;
        let reference = (base.kind == PotentialKind::Delta).then(|| {
            let (c0, c1, c2) = delta_energy_expansion(base.u0, &base.params);
            vec![c0, c1, c2]
        });
        for (i, c) in coefficients.iter().enumerate().take(3) {
            match &reference {
                Some(r) => eprintln!(
                    "fit c{i} = {c:.10e}  reference {:.10e}  relative error {:.2e}",
                    r[i],
                    ((c - r[i]) / r[i]).abs()
                ),
                None => eprintln!("fit c{i} = {c:.10e}"),
            }
        }
        Some(FitReport::new(&coefficients, reference.as_deref()))
    } else {
        None
    };
    let rec = SweepRecord {
        sweep: SweepAxis {
            parameter: range.parameter,
            from: range.from,
            to: range.to,
            points: range.points,
            log: range.log,
        },
        records: configs
            .iter()
            .zip(values)
            .zip(states)
            .enumerate()
            .map(|(point, ((c, value), states))| SweepPoint {
                point,
                value,
                config: ConfigEcho::of(c),
                states,
            })
            .collect(),
        fit,
        meta: Meta::new(
            opts.with_oracle.then_some(base.grid_order),
            start.elapsed().as_secs_f64(),
            opts.stamp,
        ),
    };
    let text = match base.format {
        Format::Json => output::to_json(&rec),
        Format::Csv => output::sweep_csv(&rec),
    };
    emit(text, &base)
}

pub fn format_check(c: &CheckOutcome) -> String {
    format!(
        "[{}] {:>2} {:<36} measured {:<10.3e} tol {:<8.1e} {:>7.2}s  {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        c.measured,
        c.tolerance,
        c.seconds,
        c.detail
    )
}

/// Prints one line per check; true iff all pass.
pub fn run_validate(quick: bool, inject_fault: bool) -> bool {
    let mut v = Validator::new(quick);
    if inject_fault {
        v = v.with_fault();
    }
    let mut failed = 0;
    for id in 1..=Validator::check_count() as u32 {
        let c = v.run(id);
        failed += !c.passed as usize;
        println!("{}", format_check(&c));
    }
    println!(
        "{} of {} checks passed{}",
        Validator::check_count() - failed,
        Validator::check_count(),
        if quick { " (quick subset)" } else { "" }
    );
    failed == 0
}
