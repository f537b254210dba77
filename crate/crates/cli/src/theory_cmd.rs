//! `dnwr theory`: finite-step bound, symmetric rate and minimum delay of an iteration symbol.

use std::fmt::Write as _;

use dnwr_core::theory::{finite_step_bound, symbol_power, symmetric_rate, Geometry, Quantity, SymbolSpec};
use dnwr_core::Method;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    pub method: Method,
    pub finite_step_bound: usize,
    pub symmetric_rate: f64,
    /// Smallest delay with a nonzero coefficient in the base symbol, if any is within `T`.
    pub minimum_delay: Option<f64>,
    pub leading_coefficient: Option<String>,
}

fn quantity(name: &str, text: &str) -> Result<Quantity, CliError> {
    Quantity::parse(text).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

pub fn analyse(method: &str, a: &str, b: &str, c: &str, t_end: &str, theta: &str) -> Result<TheoryReport, CliError> {
    let method = Method::from_name(method)
        .filter(|m| m.uses_theta())
        .ok_or_else(|| CliError::Config(format!("method must be DNWR or NNWR, got {method:?}")))?;
    let (a, b, c) = (quantity("a", a)?, quantity("b", b)?, quantity("c", c)?);
    let (t_end, theta) = (quantity("T", t_end)?, quantity("theta", theta)?);
    let geometry = Geometry::new(a, b, c).map_err(|e| CliError::Config(e.to_string()))?;
    let spec = SymbolSpec::new(method, theta, geometry).map_err(|e| CliError::Config(e.to_string()))?;
    let bound = finite_step_bound(method, a.value(), b.value(), c.value(), t_end.value())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rate = symmetric_rate(method, theta.value()).map_err(|e| CliError::Config(e.to_string()))?;
    let leading = symbol_power(&spec, 1, t_end)
        .map_err(|e| CliError::Config(e.to_string()))?
        .leading();
    Ok(TheoryReport {
        method,
        finite_step_bound: bound,
        symmetric_rate: rate,
        minimum_delay: leading.as_ref().map(|g| g.delay),
        leading_coefficient: leading.map(|g| g.coefficient.to_string()),
    })
}

impl TheoryReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let optimal = if self.method == Method::Dnwr { "1/2" } else { "1/4" };
        writeln!(out, "method = {}", self.method).unwrap();
        writeln!(
            out,
            "finite_step_bound = {}  # at theta = {optimal}",
            self.finite_step_bound
        )
        .unwrap();
        writeln!(out, "symmetric_rate = {}", self.symmetric_rate).unwrap();
        match (&self.minimum_delay, &self.leading_coefficient) {
            (Some(d), Some(coeff)) => {
                writeln!(out, "minimum_delay = {d}").unwrap();
                writeln!(out, "leading_coefficient = {coeff}").unwrap();
            }
            _ => writeln!(out, "minimum_delay = none  # no nonzero term up to T").unwrap(),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_geometry() {
        let r = analyse("DNWR", "3", "2", "1", "16", "0.5").unwrap();
        assert_eq!(r.finite_step_bound, 5);
        assert_eq!(r.symmetric_rate, 0.0);
        assert_eq!(r.minimum_delay, Some(4.0));
        assert_eq!(r.leading_coefficient.as_deref(), Some("1"));
        let r = analyse("NNWR", "3", "2", "1", "16", "1/4").unwrap();
        assert_eq!(r.finite_step_bound, 3);
        assert_eq!(r.minimum_delay, Some(8.0));
        assert!(r.render().contains("minimum_delay = 8"));
    }

    #[test]
    fn short_window_and_off_optimal_theta() {
        let r = analyse("NNWR", "3", "2", "1", "7", "0.25").unwrap();
        assert_eq!(r.minimum_delay, None);
        assert!(r.render().contains("none"));
        let r = analyse("DNWR", "3", "2", "1", "16", "0.3").unwrap();
        assert_eq!(r.minimum_delay, Some(0.0));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(analyse("SWR_CLASSICAL", "3", "2", "1", "16", "0.5").is_err());
        assert!(analyse("DNWR", "-3", "2", "1", "16", "0.5").is_err());
        assert!(analyse("DNWR", "3", "2", "1", "16", "2").is_err());
        assert!(analyse("DNWR", "x", "2", "1", "16", "0.5").is_err());
    }
}
