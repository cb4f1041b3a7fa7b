//! p-adic valuations of exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

/// A valuation value: an integer, or `+∞` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

/// The p-adic valuation `v_p` on the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicValuation {
    p: u64,
}

impl PadicValuation {
    /// `p` must be prime; this is not re-checked here.
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "p-adic valuation needs p >= 2");
        PadicValuation { p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn of_int(&self, n: &BigInt) -> Valuation {
        if n.is_zero() {
            return Valuation::Infinity;
        }
        let p = BigInt::from(self.p);
        let mut n = n.abs();
        let mut v = 0i64;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            n = q;
            v += 1;
        }
        Valuation::Finite(v)
    }

    pub fn of(&self, q: &BigRational) -> Valuation {
        if q.is_zero() {
            return Valuation::Infinity;
        }
        let num = self.of_int(q.numer()).finite().unwrap_or(0);
        let den = self.of_int(q.denom()).finite().unwrap_or(0);
        Valuation::Finite(num - den)
    }

    /// True when `q` has nonnegative valuation.
    pub fn is_integral(&self, q: &BigRational) -> bool {
        self.of(q) >= Valuation::Finite(0)
    }
}
