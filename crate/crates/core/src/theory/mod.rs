//! Laplace-domain iteration symbols for DNWR and NNWR, written in the time domain as
//! delay series.
//!
//! With `G_b^a(s) = coth(as/c) tanh(bs/c) - 1`, the interface iterates satisfy
//! `ĥ^k = [(1-2θ) - θ G_b^a]^k ĥ^0` for DNWR and
//! `ŵ^k = [(1-4θ) - θ (G_b^a + G_a^b)]^k ŵ^0` for NNWR. Expanding `G` in powers of
//! `e^{-2as/c}` and `e^{-2bs/c}` turns each symbol into a [`DelayPolynomial`], and
//! `e^{-τs}` acts on a trace as a shift by `τ`.

mod number;
mod poly;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use number::{Coefficient, Dyadic, Quantity};
pub use poly::{DelayGroup, DelayPolynomial, Geometry};

use crate::error::{usage, Error, Result};
use crate::field::TimeTrace;
use crate::waveform::Method;

/// Times closer than this fraction of a step to a delay count as reaching it.
const SHIFT_SLACK: f64 = 1e-9;

/// `e^z - 1` without cancellation for small `z`.
fn exp_m1(z: Complex64) -> Complex64 {
    let (sin, cos) = (libm::sin(z.im), libm::cos(z.im));
    let half = libm::sin(0.5 * z.im);
    Complex64::new(libm::expm1(z.re) * cos - 2.0 * half * half, libm::exp(z.re) * sin)
}

fn check_lengths(a: f64, b: f64, c: f64) -> Result<()> {
    let ok = [a, b, c].iter().all(|v| *v > 0.0 && v.is_finite());
    if !ok {
        return Err(usage(format!(
            "lengths and wave speed must be positive, got a={a}, b={b}, c={c}"
        )));
    }
    Ok(())
}

/// `coth(as/c) tanh(bs/c) - 1` for `Re(s) > 0`.
pub fn kernel_closed_form(a: f64, b: f64, c: f64, s: Complex64) -> Result<Complex64> {
    check_lengths(a, b, c)?;
    if !(s.re > 0.0) || !s.im.is_finite() {
        return Err(Error::Domain(format!("kernel needs Re(s) > 0, got s = {s}")));
    }
    let za = -s * (2.0 * a / c);
    let zb = -s * (2.0 * b / c);
    let p = za.exp();
    let q = zb.exp();
    Ok((p - q) * 2.0 / (-exp_m1(za) * (q + 1.0)))
}

/// Adds the series of `G_b^a` (or of `G_a^b` when `swapped`) to `out`.
fn add_kernel(out: &mut DelayPolynomial, factor: &Coefficient, swapped: bool) {
    let g = *out.geometry();
    let t = out.horizon().value();
    let c = g.c.value();
    let max_m = libm::floor(c * t / (2.0 * g.a.value())) as u32 + 1;
    let max_n = libm::floor(c * t / (2.0 * g.b.value())) as u32 + 1;
    let sign = |j: u32| if j % 2 == 1 { 1 } else { -1 };
    for m in 0..=max_m {
        for n in 0..=max_n {
            let (outer, inner) = if swapped { (n, m) } else { (m, n) };
            let coeff = match (outer, inner) {
                (0, 0) => continue,
                (_, 0) => 2,
                (0, j) => -2 * sign(j),
                (_, j) => -4 * sign(j),
            };
            out.add_term(m, n, factor * &Coefficient::integer(coeff));
        }
    }
}

/// The series of `G_b^a`: `+2` on `(m,0)`, `-2(-1)^{n-1}` on `(0,n)` and `-4(-1)^{n-1}` on `(m,n)`,
/// keeping delays up to `horizon`.
pub fn kernel_series(geometry: Geometry, horizon: impl Into<Quantity>) -> Result<DelayPolynomial> {
    let mut p = DelayPolynomial::zero(geometry, horizon)?;
    add_kernel(&mut p, &Coefficient::integer(1), false);
    Ok(p)
}

/// Bound on `|G_b^a(s) - kernel_series(T)(s)|` for `Re(s) = sigma > 0`.
pub fn tail_bound(a: f64, b: f64, c: f64, horizon: f64, sigma: f64) -> Result<f64> {
    check_lengths(a, b, c)?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("tail bound needs Re(s) > 0, got {sigma}")));
    }
    let x = libm::exp(-2.0 * a * sigma / c);
    let y = libm::exp(-2.0 * b * sigma / c);
    let m = libm::floor(c * horizon / (2.0 * a)).max(0.0);
    let decay = libm::exp(-horizon * sigma);
    Ok(decay * (2.0 / (1.0 - x) + 2.0 / (1.0 - y) + 4.0 * (m + 1.0 / (1.0 - x)) / (1.0 - y)))
}

/// Method, relaxation parameter and geometry of an iteration symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolSpec {
    pub method: Method,
    pub theta: Quantity,
    pub geometry: Geometry,
}

impl SymbolSpec {
    pub fn new(method: Method, theta: impl Into<Quantity>, geometry: Geometry) -> Result<Self> {
        let theta = theta.into();
        if !matches!(method, Method::Dnwr | Method::Nnwr) {
            return Err(usage(format!("no iteration symbol for {method}")));
        }
        let t = theta.value();
        if !(t > 0.0 && t <= 1.0) {
            return Err(usage(format!("theta must lie in (0, 1], got {theta}")));
        }
        Ok(SymbolSpec {
            method,
            theta,
            geometry: Geometry::new(geometry.a, geometry.b, geometry.c)?,
        })
    }

    /// Number of kernels in the symbol: one for DNWR, two for NNWR.
    fn kernels(&self) -> i64 {
        if self.method == Method::Dnwr {
            1
        } else {
            2
        }
    }

    /// `(1-2θ) - θ G_b^a` or `(1-4θ) - θ (G_b^a + G_a^b)` as a delay series.
    pub fn base_symbol(&self, horizon: impl Into<Quantity>) -> Result<DelayPolynomial> {
        let theta = Coefficient::from_quantity(self.theta);
        let constant = &Coefficient::integer(1) + &(&Coefficient::integer(-2 * self.kernels()) * &theta);
        let mut p = DelayPolynomial::constant(self.geometry, horizon, constant)?;
        let factor = -&theta;
        add_kernel(&mut p, &factor, false);
        if self.method == Method::Nnwr {
            add_kernel(&mut p, &factor, true);
        }
        Ok(p)
    }

    /// The base symbol evaluated from hyperbolic functions.
    pub fn closed_form(&self, s: Complex64) -> Result<Complex64> {
        let (a, b, c) = (
            self.geometry.a.value(),
            self.geometry.b.value(),
            self.geometry.c.value(),
        );
        let theta = self.theta.value();
        let mut g = kernel_closed_form(a, b, c, s)?;
        if self.method == Method::Nnwr {
            g += kernel_closed_form(b, a, c, s)?;
        }
        Ok(-g * theta + (1.0 - 2.0 * self.kernels() as f64 * theta))
    }
}

/// The `k`-th power of the base symbol, truncated to delays up to `horizon`.
pub fn symbol_power(spec: &SymbolSpec, k: u32, horizon: impl Into<Quantity>) -> Result<DelayPolynomial> {
    if k == 0 {
        return Err(usage("symbol power needs k >= 1"));
    }
    Ok(spec.base_symbol(horizon)?.pow(k))
}

/// Initial interface data for [`predict_trace`].
#[derive(Clone, Copy)]
pub enum InitialTrace<'a> {
    Function(&'a dyn Fn(f64) -> f64),
    /// Values between samples are linearly interpolated.
    Samples(&'a TimeTrace),
}

impl InitialTrace<'_> {
    fn at(&self, t: f64) -> f64 {
        match self {
            InitialTrace::Function(f) => f(t),
            InitialTrace::Samples(trace) => {
                let pos = t / trace.dt();
                let last = trace.n_time();
                let i = libm::floor(pos) as usize;
                if i >= last {
                    return trace.get(last);
                }
                let w = pos - i as f64;
                (1.0 - w) * trace.get(i) + w * trace.get(i + 1)
            }
        }
    }
}

/// Interface trace after `k` iterations: `Σ coeff h⁰(t - τ) H(t - τ)` on the grid
/// `t = n dt`, `n = 0..=n_time`, with `H(0) = 1`.
pub fn predict_trace(spec: &SymbolSpec, k: u32, h0: InitialTrace<'_>, dt: f64, n_time: usize) -> Result<TimeTrace> {
    if !(dt > 0.0 && dt.is_finite()) || n_time == 0 {
        return Err(usage(format!(
            "need dt > 0 and n_time >= 1, got dt={dt}, n_time={n_time}"
        )));
    }
    if let InitialTrace::Samples(trace) = h0 {
        if trace.n_time() == 0 {
            return Err(usage("initial trace has no time steps"));
        }
    }
    let horizon = Quantity::from_f64(n_time as f64 * dt);
    let symbol = symbol_power(spec, k, horizon)?;
    let active: Vec<(f64, f64)> = symbol
        .groups()
        .into_iter()
        .filter(|g| !g.coefficient.is_zero())
        .map(|g| (g.delay, g.coefficient.to_f64()))
        .collect();
    Ok(TimeTrace::sample(dt, n_time, |t| {
        active
            .iter()
            .map(|&(tau, coeff)| {
                let shifted = t - tau;
                if shifted < -SHIFT_SLACK * dt {
                    0.0
                } else {
                    coeff * h0.at(shifted.max(0.0))
                }
            })
            .sum()
    }))
}

/// Iterations after which DNWR with `θ = 1/2` (or NNWR with `θ = 1/4`) is exact on `(0, T)`.
pub fn finite_step_bound(method: Method, a: f64, b: f64, c: f64, horizon: f64) -> Result<usize> {
    check_lengths(a, b, c)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(usage(format!("time window must be positive, got {horizon}")));
    }
    let reach = match method {
        Method::Dnwr => 2.0,
        Method::Nnwr => 4.0,
        other => return Err(usage(format!("no finite-step bound for {other}"))),
    } * a.min(b);
    let ratio = c * horizon / reach;
    let k = libm::ceil(ratio - SHIFT_SLACK * ratio.max(1.0)).max(1.0);
    Ok(k as usize + 1)
}

/// Per-iteration contraction factor on equal subdomains: `|1-2θ|` or `|1-4θ|`.
pub fn symmetric_rate(method: Method, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(usage(format!("theta must lie in (0, 1], got {theta}")));
    }
    match method {
        Method::Dnwr => Ok((1.0 - 2.0 * theta).abs()),
        Method::Nnwr => Ok((1.0 - 4.0 * theta).abs()),
        other => Err(usage(format!("no symmetric rate for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(method: Method, theta: f64, a: f64, b: f64) -> SymbolSpec {
        SymbolSpec::new(method, theta, Geometry::new(a, b, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_regression() {
        let g = kernel_closed_form(3.0, 2.0, 1.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!((g.re - (-0.03118137318168297)).abs() < 1e-15);
        assert_eq!(g.im, 0.0);
        let far = kernel_closed_form(3.0, 2.0, 1.0, Complex64::new(50.0, 0.0)).unwrap();
        assert!(far.norm() <= 1e-15);
        let eq = kernel_closed_form(1.5, 1.5, 2.0, Complex64::new(0.3, 4.0)).unwrap();
        assert!(eq.norm() < 1e-14);
        assert!(kernel_closed_form(3.0, 2.0, 1.0, Complex64::new(0.0, 1.0)).is_err());
        assert!(kernel_closed_form(3.0, 2.0, 1.0, Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn closed_form_near_zero() {
        // coth(3s) tanh(2s) - 1 -> 2/3 - 1 as s -> 0
        let g = kernel_closed_form(3.0, 2.0, 1.0, Complex64::new(1e-9, 0.0)).unwrap();
        assert!((g.re + 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn short_series() {
        let p = kernel_series(Geometry::new(3.0, 2.0, 1.0).unwrap(), 5.0).unwrap();
        let terms: Vec<_> = p.terms().map(|(k, v)| (k, v.clone())).collect();
        assert_eq!(terms, alloc::vec![((0, 1), Coefficient::integer(-2))]);
    }

    #[test]
    fn series_signs() {
        let p = kernel_series(Geometry::new(3.0, 2.0, 1.0).unwrap(), 20.0).unwrap();
        assert_eq!(p.coefficient(1, 0), Coefficient::integer(2));
        assert_eq!(p.coefficient(0, 2), Coefficient::integer(2));
        assert_eq!(p.coefficient(1, 1), Coefficient::integer(-4));
        assert_eq!(p.coefficient(1, 2), Coefficient::integer(4));
        assert_eq!(p.coefficient(0, 0), Coefficient::zero());
    }

    #[test]
    fn base_symbol_examples() {
        let dn = symbol_power(&spec(Method::Dnwr, 0.5, 3.0, 2.0), 1, 16.0).unwrap();
        assert!(dn.is_exact());
        let lead = dn.leading().unwrap();
        assert_eq!(lead.monomials, alloc::vec![(0, 1)]);
        assert_eq!(lead.delay, 4.0);
        assert_eq!(lead.coefficient, Coefficient::integer(1));

        let nn = symbol_power(&spec(Method::Nnwr, 0.25, 3.0, 2.0), 1, 16.0).unwrap();
        assert!(nn.coefficient_at_delay(6.0).is_zero());
        assert_eq!(nn.leading().unwrap().delay, 8.0);
        assert!(symbol_power(&spec(Method::Dnwr, 0.5, 3.0, 2.0), 0, 16.0).is_err());
    }

    #[test]
    fn non_dyadic_theta_uses_floats() {
        let p = symbol_power(&spec(Method::Dnwr, 0.3, 3.0, 2.0), 2, 16.0).unwrap();
        assert!(!p.is_exact());
        assert!((p.coefficient(0, 0).to_f64() - 0.16).abs() < 1e-15);
    }

    #[test]
    fn swr_has_no_symbol() {
        let g = Geometry::new(3.0, 2.0, 1.0).unwrap();
        assert!(SymbolSpec::new(Method::SwrClassical, 0.5, g).is_err());
        assert!(SymbolSpec::new(Method::Dnwr, 0.0, g).is_err());
        assert!(SymbolSpec::new(Method::Dnwr, 1.5, g).is_err());
    }

    #[test]
    fn predicted_trace_example() {
        let h0 = |t: f64| t * t;
        let s = spec(Method::Dnwr, 0.5, 3.0, 2.0);
        let h1 = predict_trace(&s, 1, InitialTrace::Function(&h0), 0.5, 10).unwrap();
        assert!((h1.get(10) - 1.0).abs() < 1e-14);
        assert_eq!(h1.get(8), 0.0);
        let h4 = predict_trace(&s, 4, InitialTrace::Function(&h0), 0.5, 32).unwrap();
        assert!(h4.max_abs() == 0.0);
    }

    #[test]
    fn sampled_and_function_forms_agree() {
        let h0 = |t: f64| t * t;
        let s = spec(Method::Dnwr, 0.5, 3.0, 2.0);
        let sampled = TimeTrace::sample(0.02, 800, h0);
        let f = predict_trace(&s, 2, InitialTrace::Function(&h0), 0.02, 800).unwrap();
        let g = predict_trace(&s, 2, InitialTrace::Samples(&sampled), 0.02, 800).unwrap();
        assert!(f.sub(&g).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn step_bounds() {
        assert_eq!(finite_step_bound(Method::Dnwr, 3.0, 2.0, 1.0, 16.0).unwrap(), 5);
        assert_eq!(finite_step_bound(Method::Nnwr, 3.0, 2.0, 1.0, 16.0).unwrap(), 3);
        assert_eq!(finite_step_bound(Method::Dnwr, 3.0, 2.0, 1.0, 2.0).unwrap(), 2);
        assert_eq!(finite_step_bound(Method::Dnwr, 3.0, 2.0, 1.0, 4.0).unwrap(), 2);
        assert_eq!(finite_step_bound(Method::Nnwr, 3.0, 2.0, 1.0, 10.0).unwrap(), 3);
        assert!(finite_step_bound(Method::SwrOptimized, 3.0, 2.0, 1.0, 4.0).is_err());
    }

    #[test]
    fn rates() {
        assert_eq!(symmetric_rate(Method::Dnwr, 0.5).unwrap(), 0.0);
        assert_eq!(symmetric_rate(Method::Nnwr, 0.25).unwrap(), 0.0);
        assert!((symmetric_rate(Method::Dnwr, 0.3).unwrap() - 0.4).abs() < 1e-15);
        assert!(symmetric_rate(Method::Nnwr, 0.0).is_err());
    }

    #[test]
    fn tail_bound_rejects_nonpositive_sigma() {
        assert!(tail_bound(3.0, 2.0, 1.0, 10.0, 0.0).is_err());
        assert!(tail_bound(3.0, 2.0, 1.0, 60.0, 1.0).unwrap() < 1e-24);
    }
}
