//! Experiment configuration: TOML with `[problem]`, `[discretization]`, `[run]` and `[output]`
//! sections. Function-valued entries come from a fixed whitelist.

use std::path::Path;
use std::sync::Arc;

use dnwr_core::problem::{scalar_fn, zero_fn};
use dnwr_core::{Discretization, FluxMode, Method, ScalarFn, SourceFn, StartMode, WaveProblem};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A function of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    /// `ZERO`, `POLY_T2` (`z²`), `X_EXP` (`z e^{-z}`) or, for boundary data only,
    /// `BENCHMARK_BOUNDARY` (`x_b e^{-x_b} t` at the boundary point `x_b`).
    Named(String),
    /// `(c0 + c1 z + c2 z² + ...) e^{exp_rate z}`.
    Form {
        poly: Vec<f64>,
        #[serde(default)]
        exp_rate: f64,
    },
}

impl FunctionSpec {
    fn named(name: &str) -> Self {
        FunctionSpec::Named(name.to_string())
    }

    /// Builds the function; `boundary` is the endpoint for boundary data.
    fn build(&self, boundary: Option<f64>) -> Result<ScalarFn, String> {
        match self {
            FunctionSpec::Named(name) => match (name.as_str(), boundary) {
                ("ZERO", _) => Ok(zero_fn()),
                ("POLY_T2", _) => Ok(scalar_fn(|z| z * z)),
                ("X_EXP", _) => Ok(scalar_fn(|z| z * (-z).exp())),
                ("BENCHMARK_BOUNDARY", Some(xb)) => {
                    let slope = xb * (-xb).exp();
                    Ok(scalar_fn(move |t| slope * t))
                }
                ("BENCHMARK_BOUNDARY", None) => Err("BENCHMARK_BOUNDARY is only valid for g_left and g_right".into()),
                (other, _) => Err(format!(
                    "unknown function {other:?}; expected ZERO, POLY_T2, X_EXP, BENCHMARK_BOUNDARY or {{ poly = [...], exp_rate = r }}"
                )),
            },
            FunctionSpec::Form { poly, exp_rate } => {
                if poly.is_empty() || !poly.iter().chain([exp_rate]).all(|c| c.is_finite()) {
                    return Err("poly needs at least one finite coefficient and a finite exp_rate".into());
                }
                let coeffs = poly.clone();
                let rate = *exp_rate;
                Ok(scalar_fn(move |z| {
                    let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);
                    if rate == 0.0 {
                        p
                    } else {
                        p * (rate * z).exp()
                    }
                }))
            }
        }
    }
}

/// Source term: `ZERO` or a product `X(x) T(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceSpec {
    Named(String),
    Separable { x: FunctionSpec, t: FunctionSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemSection {
    pub x_left: f64,
    pub interface: f64,
    pub x_right: f64,
    pub wave_speed: f64,
    pub u0: FunctionSpec,
    pub v0: FunctionSpec,
    pub g_left: FunctionSpec,
    pub g_right: FunctionSpec,
    pub source: SourceSpec,
}

impl Default for ProblemSection {
    fn default() -> Self {
        ProblemSection {
            x_left: -3.0,
            interface: 0.0,
            x_right: 2.0,
            wave_speed: 1.0,
            u0: FunctionSpec::named("ZERO"),
            v0: FunctionSpec::named("X_EXP"),
            g_left: FunctionSpec::named("BENCHMARK_BOUNDARY"),
            g_right: FunctionSpec::named("BENCHMARK_BOUNDARY"),
            source: SourceSpec::Named("ZERO".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiscretizationSection {
    pub dx: f64,
    pub dt: f64,
}

impl Default for DiscretizationSection {
    fn default() -> Self {
        DiscretizationSection { dx: 0.02, dt: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MethodName {
    Dnwr,
    Nnwr,
    SwrClassical,
    SwrOptimized,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Method {
        match m {
            MethodName::Dnwr => Method::Dnwr,
            MethodName::Nnwr => Method::Nnwr,
            MethodName::SwrClassical => Method::SwrClassical,
            MethodName::SwrOptimized => Method::SwrOptimized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FluxName {
    SchemeConsistent,
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StartName {
    Taylor,
    ExactDalembert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GuessName {
    PolyT2,
    Zero,
    MonodomainTrace,
}

/// Either `"OPTIMAL"` (1/2 for DNWR, 1/4 for NNWR) or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaList {
    Keyword(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub methods: Vec<MethodName>,
    pub thetas: ThetaList,
    pub t_end: Vec<f64>,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub flux_mode: FluxName,
    pub start_mode: StartName,
    pub overlap_cells: usize,
    pub initial_guess: GuessName,
    /// Record per-combination wall-clock time; off by default so outputs are reproducible.
    pub record_wallclock: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            methods: vec![MethodName::Dnwr],
            thetas: ThetaList::Keyword("OPTIMAL".into()),
            t_end: vec![16.0],
            max_iterations: 30,
            tolerance: 1e-10,
            flux_mode: FluxName::SchemeConsistent,
            start_mode: StartName::ExactDalembert,
            overlap_cells: 24,
            initial_guess: GuessName::PolyT2,
            record_wallclock: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: String,
    /// File stem shared by the CSV, summary and effective-config files.
    pub name: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: "output".into(),
            name: "experiment".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub problem: ProblemSection,
    pub discretization: DiscretizationSection,
    pub run: RunSection,
    pub output: OutputSection,
}

/// Line of `key` inside `[section]`, 1-based.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            current = trimmed.trim_matches(|c| c == '[' || c == ']').trim().to_string();
        } else if current == section {
            let name = trimmed.split('=').next().unwrap_or("").trim();
            if name == key {
                return Some(i + 1);
            }
        }
    }
    None
}

/// Configuration error tied to a key, with its line when it appears in the file.
struct Diagnostics<'a> {
    origin: &'a str,
    text: &'a str,
}

impl Diagnostics<'_> {
    fn error(&self, section: &str, key: &str, msg: impl std::fmt::Display) -> CliError {
        let place = match locate(self.text, section, key) {
            Some(line) => format!("{}:{line}", self.origin),
            None => self.origin.to_string(),
        };
        CliError::Config(format!("{place}: [{section}] {key}: {msg}"))
    }
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: cannot read config: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses and validates; `origin` names the source in diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1));
            let place = line.map_or(origin.to_string(), |l| format!("{origin}:{l}"));
            CliError::Config(format!("{place}: {}", e.message()))
        })?;
        cfg.validate(&Diagnostics { origin, text })?;
        Ok(cfg)
    }

    fn validate(&self, d: &Diagnostics<'_>) -> Result<(), CliError> {
        let p = &self.problem;
        for (key, f, boundary) in [
            ("u0", &p.u0, None),
            ("v0", &p.v0, None),
            ("g_left", &p.g_left, Some(p.x_left)),
            ("g_right", &p.g_right, Some(p.x_right)),
        ] {
            f.build(boundary).map_err(|e| d.error("problem", key, e))?;
        }
        build_source(&p.source).map_err(|e| d.error("problem", "source", e))?;
        self.problem().map_err(|e| d.error("problem", "x_left", e))?;

        let disc = &self.discretization;
        for (key, v) in [("dx", disc.dx), ("dt", disc.dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(d.error("discretization", key, format!("must be positive, got {v}")));
            }
        }
        let probe = Discretization::new(disc.dx, disc.dt, 1).map_err(|e| d.error("discretization", "dx", e))?;
        probe
            .check_problem(&self.problem().expect("validated"))
            .map_err(|e| d.error("discretization", "dx", e))?;

        let run = &self.run;
        if run.methods.is_empty() {
            return Err(d.error("run", "methods", "list is empty"));
        }
        let mut seen = Vec::new();
        for m in &run.methods {
            if seen.contains(m) {
                return Err(d.error("run", "methods", format!("{} listed twice", Method::from(*m))));
            }
            seen.push(*m);
        }
        let relaxed = run.methods.iter().any(|m| Method::from(*m).uses_theta());
        match &run.thetas {
            ThetaList::Keyword(k) if k == "OPTIMAL" => {}
            ThetaList::Keyword(k) => {
                return Err(d.error("run", "thetas", format!("expected \"OPTIMAL\" or a list, got {k:?}")))
            }
            ThetaList::Values(v) if v.is_empty() && relaxed => {
                return Err(d.error("run", "thetas", "list is empty but DNWR or NNWR is requested"))
            }
            ThetaList::Values(v) => {
                if let Some(bad) = v.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
                    return Err(d.error("run", "thetas", format!("theta must lie in (0, 1], got {bad}")));
                }
            }
        }
        if run.t_end.is_empty() {
            return Err(d.error("run", "t_end", "list is empty"));
        }
        for &t in &run.t_end {
            Discretization::with_window(disc.dx, disc.dt, t).map_err(|e| d.error("run", "t_end", e))?;
        }
        if run.max_iterations == 0 {
            return Err(d.error("run", "max_iterations", "must be at least 1"));
        }
        if !(run.tolerance >= 0.0 && run.tolerance.is_finite()) {
            return Err(d.error(
                "run",
                "tolerance",
                format!("must be nonnegative, got {}", run.tolerance),
            ));
        }
        if seen.contains(&MethodName::SwrClassical) && run.overlap_cells == 0 {
            return Err(d.error("run", "overlap_cells", "classical Schwarz needs at least one cell"));
        }
        if self.output.name.is_empty() || self.output.name.contains(['/', '\\']) {
            return Err(d.error("output", "name", "must be a plain, nonempty file stem"));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<WaveProblem, String> {
        let p = &self.problem;
        WaveProblem::new(
            p.x_left,
            p.interface,
            p.x_right,
            p.wave_speed,
            p.u0.build(None)?,
            p.v0.build(None)?,
            p.g_left.build(Some(p.x_left))?,
            p.g_right.build(Some(p.x_right))?,
            build_source(&p.source)?,
        )
        .map_err(|e| e.to_string())
    }

    pub fn methods(&self) -> Vec<Method> {
        self.run.methods.iter().map(|m| Method::from(*m)).collect()
    }

    /// Relaxation parameters for `method`: one `None` for the Schwarz variants.
    pub fn thetas_for(&self, method: Method) -> Vec<Option<f64>> {
        if !method.uses_theta() {
            return vec![None];
        }
        match &self.run.thetas {
            ThetaList::Values(v) => v.iter().map(|t| Some(*t)).collect(),
            ThetaList::Keyword(_) => vec![Some(method.optimal_theta())],
        }
    }

    pub fn flux_mode(&self) -> FluxMode {
        match self.run.flux_mode {
            FluxName::SchemeConsistent => FluxMode::SchemeConsistent,
            FluxName::OneSided => FluxMode::OneSided,
        }
    }

    pub fn start_mode(&self) -> StartMode {
        match self.run.start_mode {
            StartName::Taylor => StartMode::Taylor,
            StartName::ExactDalembert => StartMode::ExactDalembert,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

fn build_source(spec: &SourceSpec) -> Result<Option<SourceFn>, String> {
    match spec {
        SourceSpec::Named(name) if name == "ZERO" => Ok(None),
        SourceSpec::Named(name) => Err(format!(
            "unknown source {name:?}; expected ZERO or {{ x = ..., t = ... }}"
        )),
        SourceSpec::Separable { x, t } => {
            let fx = x.build(None)?;
            let ft = t.build(None)?;
            Ok(Some(Arc::new(move |xv: f64, tv: f64| fx(xv) * ft(tv))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config, CliError> {
        Config::parse(text, "test.toml")
    }

    #[test]
    fn empty_file_gives_the_benchmark() {
        let cfg = parse("").unwrap();
        assert_eq!(cfg, Config::default());
        let p = cfg.problem().unwrap();
        assert!(((p.g_left)(1.0) + 3.0 * 3.0f64.exp()).abs() < 1e-12);
        assert!(((p.v0)(1.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn effective_config_round_trips() {
        let cfg = parse("[run]\nmethods = [\"NNWR\", \"SWR_CLASSICAL\"]\nthetas = [0.2, 0.25]\n").unwrap();
        let again = parse(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn polynomial_forms() {
        let f = FunctionSpec::Form {
            poly: vec![1.0, 0.0, 2.0],
            exp_rate: -1.0,
        }
        .build(None)
        .unwrap();
        assert!((f(1.0) - 3.0 * (-1.0f64).exp()).abs() < 1e-15);
        let cfg = parse("[problem]\nsource = { x = \"X_EXP\", t = { poly = [0, 1] } }\n").unwrap();
        let p = cfg.problem().unwrap();
        assert!((p.source_at(1.0, 2.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn diagnostics_name_the_line() {
        let err = parse("[run]\nmax_iterations = 3\nmethods = []\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("test.toml:3:"), "{err}");
        let err = parse("[run]\nmethods = [\"DNWR\"]\nthetas = [1.5]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains(":3:") && err.contains("thetas"), "{err}");
        let err = parse("\n[run]\nmethods = [\"FOO\"]\n").unwrap_err().to_string();
        assert!(err.contains("test.toml:3"), "{err}");
        let err = parse("[problem]\nv0 = \"SIN\"\n").unwrap_err().to_string();
        assert!(err.contains(":2:") && err.contains("SIN"), "{err}");
        let err = parse("[problem]\nu0 = \"BENCHMARK_BOUNDARY\"\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("u0"), "{err}");
        let err = parse("[run]\nbogus = 1\n").unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn rejects_inconsistent_grids() {
        assert!(parse("[run]\nt_end = [16.01]\n").is_err());
        assert!(parse("[discretization]\ndx = 0.03\n").is_err());
        assert!(parse("[run]\nmethods = [\"DNWR\", \"DNWR\"]\n").is_err());
        assert!(parse("[run]\nthetas = []\n").is_err());
        assert!(parse("[run]\nmethods = [\"SWR_OPTIMIZED\"]\nthetas = []\n").is_ok());
        assert!(parse("[output]\nname = \"a/b\"\n").is_err());
    }

    #[test]
    fn theta_selection() {
        let cfg = parse("[run]\nmethods = [\"DNWR\", \"NNWR\", \"SWR_OPTIMIZED\"]\n").unwrap();
        assert_eq!(cfg.thetas_for(Method::Dnwr), vec![Some(0.5)]);
        assert_eq!(cfg.thetas_for(Method::Nnwr), vec![Some(0.25)]);
        assert_eq!(cfg.thetas_for(Method::SwrOptimized), vec![None]);
    }
}
