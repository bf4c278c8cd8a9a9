//! Run configuration, read from TOML.
//!
//! ```toml
//! times = ["0", "pi/8", 0.05]
//! outputs = ["wigner_quantum", "wigner_fvr"]
//! output_dir = "out"
//! truncation = 64
//! workers = 8
//!
//! [state]
//! kind = "coherent"            # or "displaced_fock" with n = 1
//! center = { q = 5.0, p = 0.0 }
//!
//! [dynamics]
//! kind = "kerr"                # or "harmonic" with omega0 = 1.0
//!
//! [grid]
//! q_min = -8.0
//! q_max = 8.0
//! p_min = -8.0
//! p_max = 8.0
//! n_q = 128
//! n_p = 128
//!
//! [quadrature]                 # every key optional
//! chord_samples = 512
//!
//! [time_samples]               # optional, appended to `times`
//! start = "0"
//! stop = "pi/8"
//! count = 40
//!
//! [caustics]                   # used by the caustic_map output
//! center = { q = 5.0, p = 2.0 }
//! halfwidth = 2.0
//! samples = 201
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::fvr::QuadratureSpec;
use crate::phase_space::{Grid2D, PhasePoint};
use crate::states::StateSpec;

/// Artifacts a run can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    WignerQuantum,
    WignerClassical,
    WignerFvr,
    CausticMap,
    Autocorr,
    Marginals,
    Frames,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::WignerQuantum => "wigner_quantum",
            Output::WignerClassical => "wigner_classical",
            Output::WignerFvr => "wigner_fvr",
            Output::CausticMap => "caustic_map",
            Output::Autocorr => "autocorr",
            Output::Marginals => "marginals",
            Output::Frames => "frames",
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A time given either as a number or as a multiple of π (`"pi/8"`,
/// `"3pi/4"`, `"2*pi/5"`, `"0.25"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeSpec {
    Value(f64),
    Text(String),
}

/// A parsed time together with the text it was written as.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Time {
    pub value: f64,
    pub label: String,
}

/// Parse `a`, `a·pi`, `pi/b`, `a·pi/b` (with optional `*`) or a plain
/// decimal. Rational multiples of π are evaluated as `a·π/b` in one step.
pub fn parse_time(text: &str) -> std::result::Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let s = s.replace('π', "pi");
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| format!("cannot parse `{text}` as a time"));
    };
    let coef = s[..pos].trim_end_matches('*');
    let rest = &s[pos + 2..];
    let num = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient `{c}` in `{text}`"))?,
    };
    let den = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        d.parse::<f64>().map_err(|_| format!("bad divisor `{d}` in `{text}`"))?
    } else {
        return Err(format!("unexpected `{rest}` in `{text}`"));
    };
    if den == 0.0 {
        return Err(format!("division by zero in `{text}`"));
    }
    Ok(num * std::f64::consts::PI / den)
}

impl TimeSpec {
    fn resolve(&self, path: &str) -> Result<Time> {
        let (value, label) = match self {
            TimeSpec::Value(v) => (*v, format!("{v}")),
            TimeSpec::Text(s) => (parse_time(s).map_err(|m| Error::config(path, m))?, s.clone()),
        };
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::config(path, format!("time must be finite and non-negative, got {value}")));
        }
        Ok(Time { value, label })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSamples {
    pub start: TimeSpec,
    pub stop: TimeSpec,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausticSpec {
    pub center: PhasePoint,
    #[serde(default = "default_caustic_halfwidth")]
    pub halfwidth: f64,
    #[serde(default = "default_caustic_samples")]
    pub samples: usize,
}

fn default_caustic_halfwidth() -> f64 {
    2.0
}

fn default_caustic_samples() -> usize {
    201
}

impl CausticSpec {
    pub fn chord_grid(&self) -> Result<Grid2D> {
        Grid2D::square(self.halfwidth, self.samples)
    }
}

fn default_truncation() -> usize {
    64
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// The file as written, before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub state: StateSpec,
    #[serde(default)]
    pub dynamics: Dynamics,
    #[serde(default)]
    pub times: Vec<TimeSpec>,
    #[serde(default)]
    pub time_samples: Option<TimeSamples>,
    pub grid: Grid2D,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub outputs: Vec<Output>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub caustics: Option<CausticSpec>,
}

/// A validated run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub state: StateSpec,
    pub dynamics: Dynamics,
    pub times: Vec<Time>,
    pub grid: Grid2D,
    pub quadrature: QuadratureSpec,
    pub truncation: usize,
    pub outputs: Vec<Output>,
    pub output_dir: PathBuf,
    pub workers: Option<usize>,
    pub caustics: Option<CausticSpec>,
}

impl RawConfig {
    pub fn validate(self) -> Result<RunConfig> {
        let wrap = |path: &'static str| move |e: Error| Error::config(path, e.to_string());
        self.state.validate().map_err(wrap("state"))?;
        self.dynamics.validate().map_err(wrap("dynamics"))?;
        self.grid.validate().map_err(wrap("grid"))?;
        self.quadrature.validate().map_err(wrap("quadrature"))?;

        let mut times = Vec::new();
        for (i, t) in self.times.iter().enumerate() {
            times.push(t.resolve(&format!("times[{i}]"))?);
        }
        if let Some(ts) = &self.time_samples {
            let start = ts.start.resolve("time_samples.start")?;
            let stop = ts.stop.resolve("time_samples.stop")?;
            if ts.count < 2 {
                return Err(Error::config("time_samples.count", "need at least 2 samples"));
            }
            if stop.value < start.value {
                return Err(Error::config("time_samples.stop", "must not precede start"));
            }
            for k in 0..ts.count {
                let v = if k + 1 == ts.count {
                    stop.value
                } else {
                    start.value + (stop.value - start.value) * k as f64 / (ts.count - 1) as f64
                };
                let label = if k == 0 { start.label.clone() } else if k + 1 == ts.count { stop.label.clone() } else { format!("{v}") };
                times.push(Time { value: v, label });
            }
        }
        if times.is_empty() {
            return Err(Error::config("times", "at least one time is required"));
        }
        if self.truncation < 1 {
            return Err(Error::config("truncation", "must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if let Some(c) = &self.caustics {
            if !c.center.is_finite() {
                return Err(Error::config("caustics.center", "must be finite"));
            }
            c.chord_grid().map_err(wrap("caustics"))?;
        }
        let mut outputs = self.outputs.clone();
        outputs.sort();
        outputs.dedup();
        if outputs.contains(&Output::CausticMap) && self.caustics.is_none() {
            return Err(Error::config("caustics", "the caustic_map output needs a [caustics] table"));
        }
        Ok(RunConfig {
            state: self.state,
            dynamics: self.dynamics,
            times,
            grid: self.grid,
            quadrature: self.quadrature,
            truncation: self.truncation,
            outputs,
            output_dir: self.output_dir,
            workers: self.workers,
            caustics: self.caustics,
        })
    }
}

/// Parse and validate TOML text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let path = e
            .span()
            .map(|s| {
                let line = text[..s.start].matches('\n').count() + 1;
                format!("line {line}")
            })
            .unwrap_or_else(|| "<document>".into());
        Error::config(path, message)
    })?;
    raw.validate()
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const MINIMAL: &str = r#"
        times = ["0", "pi/8"]
        outputs = ["wigner_quantum", "wigner_fvr"]
        [state]
        kind = "coherent"
        center = { q = 5.0, p = 0.0 }
        [grid]
        q_min = -8.0
        q_max = 8.0
        p_min = -8.0
        p_max = 8.0
        n_q = 16
        n_p = 16
    "#;

    #[test]
    fn parses_pi_multiples() {
        assert_eq!(parse_time("pi/8").unwrap(), PI / 8.0);
        assert_eq!(parse_time("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_time("2*pi/5").unwrap(), 2.0 * PI / 5.0);
        assert_eq!(parse_time(" PI ").unwrap(), PI);
        assert_eq!(parse_time("π/20").unwrap(), PI / 20.0);
        assert_eq!(parse_time("0.071").unwrap(), 0.071);
        assert!(parse_time("pi/0").is_err());
        assert!(parse_time("pi*2").is_err());
        assert!(parse_time("abc").is_err());
    }

    #[test]
    fn minimal_config() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.times.len(), 2);
        assert_eq!(c.times[1].value, PI / 8.0);
        assert_eq!(c.times[1].label, "pi/8");
        assert_eq!(c.dynamics, Dynamics::Kerr);
        assert_eq!(c.truncation, 64);
        assert_eq!(c.quadrature, QuadratureSpec::default());
        assert_eq!(c.outputs, vec![Output::WignerQuantum, Output::WignerFvr]);
    }

    #[test]
    fn time_samples_end_exactly_on_stop() {
        let text = format!("{MINIMAL}\n[time_samples]\nstart = \"0\"\nstop = \"pi/8\"\ncount = 40\n");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.times.len(), 42);
        assert_eq!(c.times.last().unwrap().value, PI / 8.0);
    }

    #[test]
    fn full_config() {
        let text = r#"
            times = [0.013, 0.071]
            outputs = ["caustic_map"]
            truncation = 80
            workers = 2
            output_dir = "figs"
            [state]
            kind = "displaced_fock"
            n = 1
            center = { q = 5.0, p = 0.0 }
            [dynamics]
            kind = "harmonic"
            omega0 = 1.0
            [grid]
            q_min = -8.0
            q_max = 8.0
            p_min = -6.0
            p_max = 6.0
            n_q = 16
            n_p = 12
            [quadrature]
            chord_samples = 256
            maslov_convention = "signed_crossing"
            convergence_tolerance = 0.01
            [caustics]
            center = { q = 5.0, p = 2.0 }
        "#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.state, StateSpec::displaced_fock(1, 5.0, 0.0));
        assert_eq!(c.dynamics, Dynamics::Harmonic { omega0: 1.0 });
        assert_eq!(c.quadrature.chord_samples, 256);
        assert_eq!(c.quadrature.convergence_tolerance, Some(0.01));
        assert_eq!(c.caustics.unwrap().samples, 201);
        assert_eq!(c.workers, Some(2));
    }

    fn config_error_path(text: &str) -> String {
        match parse_config(text) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(config_error_path(&MINIMAL.replace("\"pi/8\"", "\"-pi/8\"")), "times[1]");
        assert_eq!(config_error_path(&MINIMAL.replace("n_q = 16", "n_q = 1")), "grid");
        assert_eq!(config_error_path(&format!("{MINIMAL}\n[quadrature]\nchord_samples = 4\n")), "quadrature");
        assert_eq!(config_error_path(&MINIMAL.replace("times = [\"0\", \"pi/8\"]", "times = []")), "times");
        assert_eq!(config_error_path(&MINIMAL.replace("\"wigner_fvr\"", "\"caustic_map\"")), "caustics");
        // unknown keys are reported with their location
        assert!(config_error_path(&MINIMAL.replace("outputs", "outptus")).starts_with("line"));
        assert!(config_error_path(&MINIMAL.replace("\"wigner_fvr\"", "\"nonsense\"")).starts_with("line"));
    }
}
