//! Polynomials whose coefficients depend on named parameters ("slots").

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactPoly, PolyError};

/// Coefficient expression over named slots.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffExpr {
    Const(BigRational),
    Slot(String),
    Sum(Vec<CoeffExpr>),
    Product(Vec<CoeffExpr>),
}

impl CoeffExpr {
    pub fn int(n: i64) -> Self {
        CoeffExpr::Const(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn slot(name: &str) -> Self {
        CoeffExpr::Slot(name.to_string())
    }

    pub fn eval(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational, PolyError> {
        match self {
            CoeffExpr::Const(c) => Ok(c.clone()),
            CoeffExpr::Slot(s) => assignment
                .get(s)
                .cloned()
                .ok_or_else(|| PolyError::UnassignedSlot(s.clone())),
            CoeffExpr::Sum(xs) => xs
                .iter()
                .try_fold(BigRational::zero(), |acc, x| Ok(acc + x.eval(assignment)?)),
            CoeffExpr::Product(xs) => xs
                .iter()
                .try_fold(BigRational::one(), |acc, x| Ok(acc * x.eval(assignment)?)),
        }
    }

    fn collect_slots(&self, out: &mut Vec<String>) {
        match self {
            CoeffExpr::Const(_) => {}
            CoeffExpr::Slot(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            CoeffExpr::Sum(xs) | CoeffExpr::Product(xs) => {
                xs.iter().for_each(|x| x.collect_slots(out));
            }
        }
    }
}

/// Polynomial in `x` with slot-valued coefficients, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoly {
    coeffs: Vec<CoeffExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialized {
    pub poly: ExactPoly,
    /// `gcd(F, F')` is constant after specialization.
    pub separable: bool,
}

impl ParamPoly {
    /// The top entry is treated as the leading coefficient.
    pub fn new(coeffs: Vec<CoeffExpr>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::EmptyPolynomial);
        }
        Ok(ParamPoly { coeffs })
    }

    /// Generic degree-`d` polynomial written through its critical points:
    /// `f' = d·∏_{i<d}(x - beta_i)` and `f(0) = t`, so `f` is monic with
    /// slots `beta1, …, beta{d-1}, t`.
    pub fn generic_by_critical_points(d: usize) -> Result<Self, PolyError> {
        if d < 2 {
            return Err(PolyError::DegreeTooSmall(2));
        }
        let betas: Vec<CoeffExpr> = (1..d).map(|i| CoeffExpr::slot(&format!("beta{i}"))).collect();
        // elementary symmetric polynomials e_0..e_{d-1} of the betas
        let mut elem: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
        for k in 1..d {
            elem.push(combinations(d - 1, k));
        }
        let mut coeffs = vec![CoeffExpr::slot("t")];
        for k in 0..d - 1 {
            // coefficient of x^k in f' is d·(-1)^{d-1-k} e_{d-1-k}
            let j = d - 1 - k;
            let sign = if j.is_multiple_of(2) { 1 } else { -1 };
            let scale = BigRational::new(BigInt::from(sign * d as i64), BigInt::from(k as i64 + 1));
            let terms: Vec<CoeffExpr> = elem[j]
                .iter()
                .map(|idx| {
                    let mut factors = vec![CoeffExpr::Const(scale.clone())];
                    factors.extend(idx.iter().map(|&i| betas[i].clone()));
                    CoeffExpr::Product(factors)
                })
                .collect();
            coeffs.push(CoeffExpr::Sum(terms));
        }
        coeffs.push(CoeffExpr::int(1));
        Ok(ParamPoly { coeffs })
    }

    pub fn slots(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.coeffs.iter().for_each(|c| c.collect_slots(&mut out));
        out
    }

    /// Substitutes every slot. The leading coefficient must stay nonzero.
    pub fn specialize(&self, assignment: &BTreeMap<String, BigRational>) -> Result<Specialized, PolyError> {
        let values = self
            .coeffs
            .iter()
            .map(|c| c.eval(assignment))
            .collect::<Result<Vec<_>, _>>()?;
        if values.last().is_none_or(|c| c.is_zero()) {
            return Err(PolyError::LeadingCoefficientVanishes);
        }
        let poly = ExactPoly::new(values);
        let separable = poly.is_separable();
        Ok(Specialized { poly, separable })
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
