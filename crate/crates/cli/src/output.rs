//! JSON and CSV emission. Floats carry 17 significant digits in both.

use minlen_core::Extension;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::RunConfig;

/// Formats a float with 17 significant digits; non-finite values have no
/// JSON number form and become `null`.
pub fn fmt17(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

fn raw(v: f64) -> Box<RawValue> {
    RawValue::from_string(fmt17(v).unwrap_or_else(|| "null".into()))
        .expect("formatted float is valid JSON")
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*v).serialize(s)
}

fn ser_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => raw(*v).serialize(s),
        None => s.serialize_none(),
    }
}

fn ser_ext<S: Serializer>(v: &Option<Extension>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(Extension::Finite(x)) => raw(*x).serialize(s),
        Some(Extension::PlusInfinity) => s.serialize_str("inf"),
        Some(Extension::MinusInfinity) => s.serialize_str("-inf"),
        None => s.serialize_none(),
    }
}

fn ext_text(e: Extension) -> String {
    match e {
        Extension::Finite(x) => fmt17(x).unwrap_or_default(),
        Extension::PlusInfinity => "inf".into(),
        Extension::MinusInfinity => "-inf".into(),
    }
}

/// One reported level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRecord {
    pub label: String,
    #[serde(serialize_with = "ser_opt")]
    pub energy: Option<f64>,
    #[serde(serialize_with = "ser_opt")]
    pub q: Option<f64>,
    #[serde(serialize_with = "ser_opt")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub oracle_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub deviation: Option<f64>,
    /// Coulomb-like levels only.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub delta: Option<f64>,
}

/// Echo of the parameters that define a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub potential: &'static str,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub u0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub alpha: Option<f64>,
    #[serde(
        rename = "A",
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_ext"
    )]
    pub extension: Option<Extension>,
    #[serde(serialize_with = "ser_f64")]
    pub beta: f64,
    #[serde(serialize_with = "ser_f64")]
    pub m: f64,
    #[serde(serialize_with = "ser_f64")]
    pub hbar: f64,
    pub grid: usize,
    pub n_states: usize,
}

impl ConfigEcho {
    pub fn of(cfg: &RunConfig) -> Self {
        use crate::config::PotentialKind::*;
        Self {
            potential: cfg.kind.as_str(),
            u0: matches!(cfg.kind, Delta | DoubleDelta).then_some(cfg.u0),
            a: (cfg.kind == DoubleDelta).then_some(cfg.a),
            alpha: (cfg.kind == Coulomb).then_some(cfg.alpha),
            extension: (cfg.kind == Coulomb).then_some(cfg.extension),
            beta: cfg.deformation.beta(),
            m: cfg.params.m(),
            hbar: cfg.params.hbar(),
            grid: cfg.grid_order,
            n_states: cfg.n_states,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Meta {
    /// Wall time and timestamp are dropped when `stamp` is false so that
    /// repeated runs produce identical bytes.
    pub fn new(grid: Option<usize>, seconds: f64, stamp: bool) -> Self {
        let timestamp = stamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            version: env!("CARGO_PKG_VERSION"),
            grid,
            seconds: stamp.then_some(seconds),
            timestamp,
        }
    }
}

/// Output of `solve` and `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub config: ConfigEcho,
    pub states: Vec<StateRecord>,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub parameter: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub from: f64,
    #[serde(serialize_with = "ser_f64")]
    pub to: f64,
    pub points: usize,
    pub log: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub point: usize,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    pub config: ConfigEcho,
    pub states: Vec<StateRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// Polynomial degree in √β.
    pub degree: usize,
    pub coefficients: Vec<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<Box<RawValue>>>,
}

impl FitReport {
    pub fn new(coefficients: &[f64], reference: Option<&[f64]>) -> Self {
        Self {
            degree: coefficients.len().saturating_sub(1),
            coefficients: coefficients.iter().map(|&c| raw(c)).collect(),
            reference: reference.map(|r| r.iter().map(|&c| raw(c)).collect()),
        }
    }
}

/// Output of `sweep`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub sweep: SweepAxis,
    pub records: Vec<SweepPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitReport>,
    pub meta: Meta,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

const CSV_HEADER: &str = "point,potential,u0,a,alpha,A,beta,m,hbar,label,energy,q,residual,oracle_energy,deviation,delta";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.and_then(fmt17).unwrap_or_default()
}

fn push_rows(out: &mut String, point: usize, cfg: &ConfigEcho, states: &[StateRecord]) {
    for st in states {
        let fields = [
            point.to_string(),
            cfg.potential.to_string(),
            opt(cfg.u0),
            opt(cfg.a),
            opt(cfg.alpha),
            cfg.extension.map(ext_text).unwrap_or_default(),
            opt(Some(cfg.beta)),
            opt(Some(cfg.m)),
            opt(Some(cfg.hbar)),
            st.label.clone(),
            opt(st.energy),
            opt(st.q),
            opt(st.residual),
            opt(st.oracle_energy),
            opt(st.deviation),
            opt(st.delta),
        ];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&line.join(","));
        out.push_str("\r\n");
    }
}

pub fn result_csv(r: &ResultRecord) -> String {
    let mut out = format!("{CSV_HEADER}\r\n");
    push_rows(&mut out, 0, &r.config, &r.states);
    out
}

pub fn sweep_csv(r: &SweepRecord) -> String {
    let mut out = format!("{CSV_HEADER}\r\n");
    for p in &r.records {
        push_rows(&mut out, p.point, &p.config, &p.states);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [
            -2.0 * std::f64::consts::PI.powi(2),
            1e-300,
            0.1,
            -0.0,
            123456789.12345679,
        ] {
            let s = fmt17(v).unwrap();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt17(f64::NAN), None);
    }

    #[test]
    fn csv_quotes_per_rfc4180() {
        assert_eq!(csv_field("n=1"), "n=1");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn optional_fields_are_skipped_or_null() {
        let st = StateRecord {
            label: "single".into(),
            energy: Some(-1.5),
            q: None,
            residual: Some(0.0),
            oracle_energy: None,
            deviation: None,
            delta: None,
        };
        let s = serde_json::to_string(&st).unwrap();
        assert_eq!(
            s,
            r#"{"label":"single","energy":-1.5000000000000000e0,"q":null,"residual":0.0000000000000000e0}"#
        );
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["energy"].as_f64(), Some(-1.5));
    }
}
