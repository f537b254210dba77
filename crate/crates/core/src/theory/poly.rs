//! Finite sums of delay monomials `e^{-2(am+bn)s/c}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use super::number::{Coefficient, Quantity};
use crate::error::{usage, Result};

/// Relative slack for delay comparisons when the geometry is not exact.
const DELAY_SLACK: f64 = 1e-12;

/// Subdomain lengths and wave speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub a: Quantity,
    pub b: Quantity,
    pub c: Quantity,
}

impl Geometry {
    pub fn new(a: impl Into<Quantity>, b: impl Into<Quantity>, c: impl Into<Quantity>) -> Result<Self> {
        let g = Geometry {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        if !(g.a.is_positive() && g.b.is_positive() && g.c.is_positive()) {
            return Err(usage(format!(
                "lengths and wave speed must be positive, got a={}, b={}, c={}",
                g.a, g.b, g.c
            )));
        }
        Ok(g)
    }

    /// The same geometry with the roles of the two subdomains exchanged.
    pub fn swapped(&self) -> Self {
        Geometry {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    /// `2(a m + b n) / c`.
    pub fn delay(&self, m: u32, n: u32) -> f64 {
        2.0 * (self.a.value() * m as f64 + self.b.value() * n as f64) / self.c.value()
    }

    pub fn min_length(&self) -> f64 {
        self.a.value().min(self.b.value())
    }
}

/// How delays are compared: in integers when every parameter is a ratio, otherwise with slack.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Order {
    /// `τ(m,n) ∝ wa m + wb n`, and `τ ≤ T` iff `scale (wa m + wb n) ≤ bound`.
    Exact {
        wa: i128,
        wb: i128,
        scale: i128,
        bound: i128,
    },
    Float,
}

impl Order {
    fn new(g: &Geometry, horizon: Quantity) -> Self {
        let exact = || {
            let (a, b, c, t) = (g.a.ratio()?, g.b.ratio()?, g.c.ratio()?, horizon.ratio()?);
            let n = |r: num_rational::Ratio<i64>| (*r.numer() as i128, *r.denom() as i128);
            let ((an, ad), (bn, bd), (cn, cd), (tn, td)) = (n(a), n(b), n(c), n(t));
            Some(Order::Exact {
                wa: an.checked_mul(bd)?,
                wb: bn.checked_mul(ad)?,
                scale: 2i128.checked_mul(td)?.checked_mul(cd)?,
                bound: tn.checked_mul(ad)?.checked_mul(bd)?.checked_mul(cn)?,
            })
        };
        exact().unwrap_or(Order::Float)
    }

    fn weight(wa: i128, wb: i128, m: u32, n: u32) -> Option<i128> {
        wa.checked_mul(m as i128)?.checked_add(wb.checked_mul(n as i128)?)
    }
}

/// One delay value together with every monomial that has it and their summed coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayGroup {
    pub delay: f64,
    pub monomials: Vec<(u32, u32)>,
    pub coefficient: Coefficient,
}

/// `Σ coeff(m,n) e^{-τ(m,n) s}` over monomials with `τ(m,n) = 2(am+bn)/c ≤ T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayPolynomial {
    geometry: Geometry,
    horizon: Quantity,
    order: Order,
    terms: BTreeMap<(u32, u32), Coefficient>,
}

impl DelayPolynomial {
    pub fn zero(geometry: Geometry, horizon: impl Into<Quantity>) -> Result<Self> {
        let horizon = horizon.into();
        if !horizon.is_positive() {
            return Err(usage(format!("truncation horizon must be positive, got {horizon}")));
        }
        let geometry = Geometry::new(geometry.a, geometry.b, geometry.c)?;
        Ok(DelayPolynomial {
            order: Order::new(&geometry, horizon),
            geometry,
            horizon,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(geometry: Geometry, horizon: impl Into<Quantity>, value: Coefficient) -> Result<Self> {
        let mut p = Self::zero(geometry, horizon)?;
        p.add_term(0, 0, value);
        Ok(p)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn horizon(&self) -> Quantity {
        self.horizon
    }

    /// Whether delays are compared in exact arithmetic.
    pub fn exact_delays(&self) -> bool {
        matches!(self.order, Order::Exact { .. })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Coefficient)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, m: u32, n: u32) -> Coefficient {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// True when every coefficient is stored exactly.
    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Coefficient::is_exact)
    }

    pub fn delay(&self, m: u32, n: u32) -> f64 {
        self.geometry.delay(m, n)
    }

    /// Whether `τ(m,n) ≤ T`.
    pub fn within_horizon(&self, m: u32, n: u32) -> bool {
        match self.order {
            Order::Exact { wa, wb, scale, bound } => Order::weight(wa, wb, m, n)
                .and_then(|w| w.checked_mul(scale))
                .is_some_and(|lhs| lhs <= bound),
            Order::Float => {
                let t = self.horizon.value();
                self.delay(m, n) <= t + DELAY_SLACK * t.max(1.0)
            }
        }
    }

    /// Adds `value` to the coefficient of `(m, n)`. Monomials past the horizon are dropped
    /// and `false` is returned.
    pub fn add_term(&mut self, m: u32, n: u32, value: Coefficient) -> bool {
        if !self.within_horizon(m, n) {
            return false;
        }
        let sum = match self.terms.get(&(m, n)) {
            Some(old) => old + &value,
            None => value,
        };
        if sum.is_zero() {
            self.terms.remove(&(m, n));
        } else {
            self.terms.insert((m, n), sum);
        }
        true
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.geometry != other.geometry || self.horizon != other.horizon {
            return Err(usage("delay polynomials with different geometry or horizon"));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for ((m, n), v) in other.terms() {
            out.add_term(m, n, v.clone());
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &Coefficient) -> Self {
        let mut out = DelayPolynomial {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for ((m, n), v) in self.terms() {
            out.add_term(m, n, v * factor);
        }
        out
    }

    /// Product truncated to the horizon.
    pub fn times(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = DelayPolynomial {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for ((m1, n1), v1) in self.terms() {
            for ((m2, n2), v2) in other.terms() {
                out.add_term(m1 + m2, n1 + n2, v1 * v2);
            }
        }
        Ok(out)
    }

    /// `k`-th power, truncated after every multiplication; the zeroth power is `1`.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = DelayPolynomial {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        out.add_term(0, 0, Coefficient::integer(1));
        for _ in 0..k {
            out = out.times(self).expect("same geometry");
        }
        out
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.terms()
            .map(|((m, n), v)| (-s * self.delay(m, n)).exp() * v.to_f64())
            .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
    }

    fn cmp_delay(&self, x: (u32, u32), y: (u32, u32)) -> Ordering {
        if let Order::Exact { wa, wb, .. } = self.order {
            if let (Some(p), Some(q)) = (Order::weight(wa, wb, x.0, x.1), Order::weight(wa, wb, y.0, y.1)) {
                return p.cmp(&q);
            }
        }
        let (p, q) = (self.delay(x.0, x.1), self.delay(y.0, y.1));
        if (p - q).abs() <= DELAY_SLACK * p.abs().max(q.abs()).max(1.0) {
            Ordering::Equal
        } else {
            p.total_cmp(&q)
        }
    }

    /// Monomials grouped by equal delay, in increasing delay. Groups whose coefficients
    /// cancel are kept with a zero coefficient.
    pub fn groups(&self) -> Vec<DelayGroup> {
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|x, y| self.cmp_delay(*x, *y).then(x.cmp(y)));
        let mut out: Vec<DelayGroup> = Vec::new();
        for key in keys {
            let value = &self.terms[&key];
            match out.last_mut() {
                Some(g) if self.cmp_delay(g.monomials[0], key) == Ordering::Equal => {
                    g.coefficient = &g.coefficient + value;
                    g.monomials.push(key);
                }
                _ => out.push(DelayGroup {
                    delay: self.delay(key.0, key.1),
                    monomials: alloc::vec![key],
                    coefficient: value.clone(),
                }),
            }
        }
        out
    }

    /// The group of smallest delay with a nonzero coefficient.
    pub fn leading(&self) -> Option<DelayGroup> {
        self.groups().into_iter().find(|g| !g.coefficient.is_zero())
    }

    /// Summed coefficient of all monomials with delay `tau`, matched with a small relative slack.
    pub fn coefficient_at_delay(&self, tau: f64) -> Coefficient {
        self.groups()
            .into_iter()
            .find(|g| (g.delay - tau).abs() <= DELAY_SLACK * tau.abs().max(1.0))
            .map_or_else(Coefficient::zero, |g| g.coefficient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(a: f64, b: f64) -> Geometry {
        Geometry::new(a, b, 1.0).unwrap()
    }

    #[test]
    fn truncation_is_exact_at_the_horizon() {
        let mut p = DelayPolynomial::zero(geom(3.0, 2.0), 12.0).unwrap();
        assert!(p.exact_delays());
        assert!(p.add_term(2, 0, Coefficient::integer(1)));
        assert!(p.add_term(0, 3, Coefficient::integer(1)));
        assert!(!p.add_term(1, 2, Coefficient::integer(1)));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn float_geometry_uses_slack() {
        let g = Geometry::new(1.0 / 3.0, 2.0, 1.0).unwrap();
        let p = DelayPolynomial::zero(g, 2.0 / 3.0 * 3.0).unwrap();
        assert!(!p.exact_delays());
        assert!(p.within_horizon(3, 0));
        assert!(!p.within_horizon(4, 0));
    }

    #[test]
    fn cancelling_terms_disappear() {
        let mut p = DelayPolynomial::zero(geom(1.0, 2.0), 10.0).unwrap();
        p.add_term(1, 1, Coefficient::integer(3));
        p.add_term(1, 1, Coefficient::integer(-3));
        assert!(p.is_empty());
        assert_eq!(p.coefficient(1, 1), Coefficient::zero());
    }

    #[test]
    fn groups_merge_equal_delays() {
        let mut p = DelayPolynomial::zero(geom(1.0, 2.0), 10.0).unwrap();
        p.add_term(2, 0, Coefficient::integer(1));
        p.add_term(0, 1, Coefficient::integer(-1));
        p.add_term(1, 0, Coefficient::integer(5));
        let g = p.groups();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1].monomials, alloc::vec![(0, 1), (2, 0)]);
        assert!(g[1].coefficient.is_zero());
        assert_eq!(p.leading().unwrap().delay, 2.0);
        assert_eq!(p.coefficient_at_delay(4.0), Coefficient::zero());
    }

    #[test]
    fn product_of_binomials() {
        let g = geom(3.0, 2.0);
        let mut p = DelayPolynomial::constant(g, 20.0, Coefficient::integer(1)).unwrap();
        p.add_term(0, 1, Coefficient::integer(1));
        let sq = p.pow(2);
        assert_eq!(sq.coefficient(0, 1), Coefficient::integer(2));
        assert_eq!(sq.coefficient(0, 2), Coefficient::integer(1));
        let s = Complex64::new(0.7, 0.3);
        let lhs = sq.evaluate(s);
        let rhs = p.evaluate(s) * p.evaluate(s);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let p = DelayPolynomial::zero(geom(3.0, 2.0), 20.0).unwrap();
        let q = DelayPolynomial::zero(geom(3.0, 2.0), 10.0).unwrap();
        assert!(p.plus(&q).is_err());
        assert!(p.times(&q).is_err());
        assert!(DelayPolynomial::zero(geom(3.0, 2.0), 0.0).is_err());
        assert!(Geometry::new(-1.0, 2.0, 1.0).is_err());
    }
}
