//! Exact and floating scalars used by the delay-series algebra.

use alloc::format;
use core::fmt;
use core::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{usage, Result};

/// Powers of two up to this exponent are accepted when reading an `f64` as an exact value.
const MAX_DYADIC_SHIFT: i32 = 20;

/// A positive or negative real parameter, kept as a ratio of integers when it has one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Exact(Ratio<i64>),
    Float(f64),
}

impl Quantity {
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(usage("zero denominator"));
        }
        Ok(Quantity::Exact(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Quantity::Exact(Ratio::from_integer(n))
    }

    /// Exact when `x` is a multiple of `2^-20` of moderate size, a float otherwise.
    pub fn from_f64(x: f64) -> Self {
        let scaled = libm::scalbn(x, MAX_DYADIC_SHIFT);
        if x.is_finite() && scaled == libm::trunc(scaled) && scaled.abs() < 9.0e15 {
            Quantity::Exact(Ratio::new(scaled as i64, 1i64 << MAX_DYADIC_SHIFT))
        } else {
            Quantity::Float(x)
        }
    }

    /// Reads `"3"`, `"-1/4"` and `"0.25"` exactly; anything else parsable as `f64` becomes a float.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad numerator in {t:?}")))?;
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad denominator in {t:?}")))?;
            return Self::exact(num, den);
        }
        if let Some(q) = parse_decimal(t) {
            return Ok(q);
        }
        let x: f64 = t.parse().map_err(|_| usage(format!("not a number: {t:?}")))?;
        if !x.is_finite() {
            return Err(usage(format!("not a finite number: {t:?}")));
        }
        Ok(Quantity::Float(x))
    }

    pub fn value(&self) -> f64 {
        match self {
            Quantity::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Quantity::Float(x) => *x,
        }
    }

    pub fn ratio(&self) -> Option<Ratio<i64>> {
        match self {
            Quantity::Exact(r) => Some(*r),
            Quantity::Float(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Quantity::Exact(r) => *r.numer() > 0,
            Quantity::Float(x) => *x > 0.0 && x.is_finite(),
        }
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::from_f64(x)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Quantity::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Quantity::Float(x) => write!(f, "{x}"),
        }
    }
}

fn parse_decimal(t: &str) -> Option<Quantity> {
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|ch| ch.is_ascii_digit()) || whole.len() + frac.len() > 18 {
        return None;
    }
    let digits: i64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let mut num = digits;
    let mut den = 1i64;
    for ch in frac.chars() {
        num = num * 10 + (ch as u8 - b'0') as i64;
        den *= 10;
    }
    Some(Quantity::Exact(Ratio::new(sign * num, den)))
}

/// `numerator / 2^shift`, normalized so the numerator is odd unless `shift` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    numerator: BigInt,
    shift: u32,
}

impl Dyadic {
    pub fn new(numerator: BigInt, shift: u32) -> Self {
        let mut d = Dyadic { numerator, shift };
        d.normalize();
        d
    }

    pub fn integer(n: i64) -> Self {
        Dyadic {
            numerator: BigInt::from(n),
            shift: 0,
        }
    }

    /// `Some` when the denominator of `r` is a power of two.
    pub fn from_ratio(r: Ratio<i64>) -> Option<Self> {
        let den = *r.denom();
        if den <= 0 || den & (den - 1) != 0 {
            return None;
        }
        Some(Dyadic::new(BigInt::from(*r.numer()), den.trailing_zeros()))
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        libm::scalbn(n, -(self.shift as i32))
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.shift = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0).min(self.shift as u64) as u32;
        if tz > 0 {
            self.numerator >>= tz;
            self.shift -= tz;
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, other: &Dyadic) -> Dyadic {
        let shift = self.shift.max(other.shift);
        let lhs = &self.numerator << (shift - self.shift);
        let rhs = &other.numerator << (shift - other.shift);
        Dyadic::new(lhs + rhs, shift)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &other.numerator, self.shift + other.shift)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigInt::one() << self.shift)
        }
    }
}

/// Coefficient of a delay monomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(Dyadic),
    Float(f64),
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Exact(Dyadic::integer(0))
    }

    pub fn integer(n: i64) -> Self {
        Coefficient::Exact(Dyadic::integer(n))
    }

    /// Exact for dyadic ratios, a float otherwise.
    pub fn from_quantity(q: Quantity) -> Self {
        match q.ratio().and_then(Dyadic::from_ratio) {
            Some(d) => Coefficient::Exact(d),
            None => Coefficient::Float(q.value()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(d) => d.is_zero(),
            Coefficient::Float(x) => *x == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(d) => d.to_f64(),
            Coefficient::Float(x) => *x,
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Exact(x), Coefficient::Exact(y)) => Coefficient::Exact(x + y),
            _ => Coefficient::Float(self.to_f64() + other.to_f64()),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Exact(x), Coefficient::Exact(y)) => Coefficient::Exact(x * y),
            _ => Coefficient::Float(self.to_f64() * other.to_f64()),
        }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Exact(d) => Coefficient::Exact(Dyadic::new(-d.numerator.clone(), d.shift)),
            Coefficient::Float(x) => Coefficient::Float(-x),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(d) => write!(f, "{d}"),
            Coefficient::Float(x) => write!(f, "{x}"),
        }
    }
}
