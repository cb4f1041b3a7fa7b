//! Exact univariate polynomials with rational coefficients.
//!
//! Coefficients are stored constant term first and kept in canonical form:
//! the highest stored coefficient is nonzero, and the zero polynomial has no
//! stored coefficients. Nothing in this module touches floating point.

mod eisenstein;
mod rational;
mod recursion;
mod roots;
mod specialize;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use eisenstein::{eisenstein_check, eisenstein_tower, eisenstein_tower_check, TowerLevel};
pub use rational::{format_rational, parse_rational};
pub(crate) use rational::serialize_rational;
pub use recursion::{disc_recursion_check, DiscRecursion};
pub use roots::rational_roots;
pub use specialize::{CoeffExpr, ParamPoly, Specialized};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("polynomial has no coefficients")]
    EmptyPolynomial,
    #[error("iterate count must be nonnegative, got {0}")]
    NegativeIterate(i64),
    #[error("operation needs a nonconstant polynomial")]
    Constant,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("degree must be at least {0}")]
    DegreeTooSmall(usize),
    #[error("critical points are not all rational")]
    IrrationalCriticalPoint,
    #[error("{0} vanishes, the iterate is inseparable")]
    Inseparable(&'static str),
    #[error("coefficient of x^{index} is not {prime}-integral")]
    NotIntegral { index: usize, prime: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{prime} does not divide {d}")]
    PrimeDoesNotDivide { prime: u64, d: u64 },
    #[error("slot `{0}` has no assigned value")]
    UnassignedSlot(String),
    #[error("leading coefficient specializes to zero")]
    LeadingCoefficientVanishes,
}

/// Polynomial with exact rational coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactPoly {
    coeffs: Vec<BigRational>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = ExactPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Parses a comma-separated list of rationals, constant term first.
    pub fn parse_list(s: &str) -> Result<Self, PolyError> {
        let coeffs = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(PolyError::EmptyPolynomial);
        }
        Ok(Self::new(coeffs))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &ExactPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// The `n`-th iterate; the zeroth iterate is `x`.
    pub fn iterate(&self, n: usize) -> Self {
        let mut acc = Self::x();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Checked wrapper for callers holding a signed count.
    pub fn iterate_signed(&self, n: i64) -> Result<Self, PolyError> {
        if n < 0 {
            return Err(PolyError::NegativeIterate(n));
        }
        Ok(self.iterate(n as usize))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &ExactPoly) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lc_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &ExactPoly) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant computed through the Euclidean remainder sequence over ℚ.
    pub fn resultant(&self, other: &ExactPoly) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = BigRational::one();
        loop {
            let da = a.degree();
            let db = b.degree();
            if db == 0 {
                return acc * pow_rational(&b.leading(), da);
            }
            if da == 0 {
                return acc * pow_rational(&a.leading(), db);
            }
            let (_, r) = a.div_rem(&b);
            if r.is_zero() {
                return BigRational::zero();
            }
            // Res(A, B) = (-1)^{ab} lc(B)^{a - deg R} Res(B, R)
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= pow_rational(&b.leading(), da - r.degree());
            a = b;
            b = r;
        }
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(F, F') / lc(F)`.
    pub fn discriminant(&self) -> Result<DiscriminantValue, PolyError> {
        if self.is_constant() {
            return Err(PolyError::Constant);
        }
        let n = self.degree();
        let sign: i8 = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        let res = self.resultant(&self.derivative());
        let mut value = res / self.leading();
        if sign < 0 {
            value = -value;
        }
        Ok(DiscriminantValue {
            value,
            degree_of_source: n,
            sign_normalization: sign,
        })
    }

    /// True when `gcd(F, F')` is constant.
    pub fn is_separable(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Rational critical points with multiplicities, or an error when some
    /// root of the derivative is irrational.
    pub fn critical_points(&self) -> Result<Vec<(BigRational, usize)>, PolyError> {
        if self.degree() < 2 {
            return Err(PolyError::DegreeTooSmall(2));
        }
        let fp = self.derivative();
        let roots = rational_roots(&fp);
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        if total != fp.degree() {
            return Err(PolyError::IrrationalCriticalPoint);
        }
        Ok(roots)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

pub(crate) fn pow_rational(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow::pow(x.clone(), e)
}

impl Add for &ExactPoly {
    type Output = ExactPoly;

    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;

    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;

    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPoly::new(out)
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;

    fn neg(self) -> ExactPoly {
        ExactPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPoly({self})")
    }
}

impl Serialize for ExactPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len().max(1)))?;
        if self.is_zero() {
            seq.serialize_element("0/1")?;
        }
        for c in &self.coeffs {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExactPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom(PolyError::EmptyPolynomial));
        }
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(ExactPoly::new(coeffs))
    }
}

/// Discriminant together with the normalization used to produce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantValue {
    #[serde(serialize_with = "serialize_rational")]
    pub value: BigRational,
    pub degree_of_source: usize,
    /// The factor `(-1)^{n(n-1)/2}` applied to `Res(F, F')/lc(F)`.
    pub sign_normalization: i8,
}
