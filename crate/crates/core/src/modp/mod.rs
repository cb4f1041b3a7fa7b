//! Arithmetic over prime fields `F_p` with `p < 2^63`.
//!
//! Products go through `u128` before reduction.

mod factor;
mod orbit;
mod sieve;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exactpoly::ExactPoly;

pub use factor::{
    factor_signature, has_root, ramification_signature, ramification_signature_with_disc, FactorSignature,
    TranspositionShape,
};
pub use orbit::{critical_orbit_verdict, critical_orbit_verdicts, OrbitVerdict};
pub use sieve::sieve_primes;

/// Largest supported modulus (exclusive).
pub const PRIME_CAP: u64 = 1 << 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModpError {
    #[error("{0} is not a prime below 2^63")]
    BadModulus(u64),
    #[error("operation needs a nonconstant polynomial")]
    Constant,
    #[error("derivative vanishes identically mod {0} (inseparable in characteristic p)")]
    Inseparable(u64),
    #[error("reduction mod {prime} is bad: {reason}")]
    BadReduction { prime: u64, reason: BadReduction },
}

/// Why a rational polynomial does not reduce well mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BadReduction {
    /// Coefficient of `x^index` has a denominator divisible by `p`.
    Denominator { index: usize },
    LeadingVanishes,
}

impl fmt::Display for BadReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadReduction::Denominator { index } => write!(f, "denominator of x^{index} coefficient"),
            BadReduction::LeadingVanishes => f.write_str("leading coefficient vanishes"),
        }
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn check_prime(p: u64) -> Result<(), ModpError> {
    if p >= PRIME_CAP || !primal::is_prime(p) {
        return Err(ModpError::BadModulus(p));
    }
    Ok(())
}

/// Reduces a rational mod `p`; `None` when the denominator is divisible by `p`.
pub fn reduce_rational(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = mod_big(q.denom(), &pb);
    if den == 0 {
        return None;
    }
    let num = mod_big(q.numer(), &pb);
    Some(mul_mod(num, inv_mod(den, p), p))
}

fn mod_big(n: &BigInt, p: &BigInt) -> u64 {
    let r = ((n % p) + p) % p;
    r.to_u64().expect("residue fits in u64")
}

/// Polynomial over `F_p`, constant term first, canonical (no trailing zeros).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, ModpError> {
        check_prime(p)?;
        Ok(Self::from_reduced(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    /// Coefficients must already be reduced and `p` already validated.
    pub(crate) fn from_reduced(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = ModPoly { p, coeffs };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// Signed integer coefficients, reduced into `[0, p)`.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Result<Self, ModpError> {
        check_prime(p)?;
        let c = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        Ok(Self::from_reduced(p, c))
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_reduced(p, vec![1 % p])
    }

    pub fn x(p: u64) -> Self {
        Self::from_reduced(p, vec![0, 1])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::from_reduced(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.p;
        Self::from_reduced(p, self.coeffs.iter().map(|&c| mul_mod(c, k, p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_reduced(
            p,
            (0..n).map(|i| add_mod(self.get(i), other.get(i), p)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_reduced(
            p,
            (0..n).map(|i| sub_mod(self.get(i), other.get(i), p)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        Self::from_reduced(p, out)
    }

    fn get(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.degree();
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, dc, p), p);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_reduced(p, quot), Self::from_reduced(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// For a polynomial in `x^p`, returns its p-th root (coefficients are
    /// fixed by Frobenius on `F_p`).
    pub(crate) fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::from_reduced(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly(p={}, {:?})", self.p, self.coeffs)
    }
}

/// Reduces `f` mod `p`. Bad reduction means a denominator divisible by `p`
/// or a leading coefficient that vanishes mod `p`.
pub fn reduce(f: &ExactPoly, p: u64) -> Result<Result<ModPoly, BadReduction>, ModpError> {
    check_prime(p)?;
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (index, c) in f.coeffs().iter().enumerate() {
        match reduce_rational(c, p) {
            Some(r) => coeffs.push(r),
            None => return Ok(Err(BadReduction::Denominator { index })),
        }
    }
    if coeffs.last().is_some_and(|c| *c == 0) {
        return Ok(Err(BadReduction::LeadingVanishes));
    }
    Ok(Ok(ModPoly::from_reduced(p, coeffs)))
}
