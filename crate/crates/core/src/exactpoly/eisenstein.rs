use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{ExactPoly, PolyError};
use crate::padic::{PadicValuation, Valuation};

/// Eisenstein criterion at `prime`: unit leading coefficient, positive
/// valuation on every lower coefficient, constant term of valuation exactly 1.
///
/// Fails with [`PolyError::NotIntegral`] if some coefficient has negative
/// valuation.
pub fn eisenstein_check(f: &ExactPoly, prime: u64) -> Result<bool, PolyError> {
    if !primal::is_prime(prime) {
        return Err(PolyError::NotPrime(prime));
    }
    if f.is_constant() {
        return Err(PolyError::Constant);
    }
    let v = PadicValuation::new(prime);
    let vals: Vec<Valuation> = f.coeffs().iter().map(|c| v.of(c)).collect();
    if let Some(index) = vals.iter().position(|x| *x < Valuation::Finite(0)) {
        return Err(PolyError::NotIntegral { index, prime });
    }
    let (lead, rest) = vals.split_last().expect("nonconstant");
    Ok(*lead == Valuation::Finite(0)
        && rest[0] == Valuation::Finite(1)
        && rest[1..].iter().all(|x| *x >= Valuation::Finite(1)))
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub level: usize,
    pub degree: usize,
    pub eisenstein: bool,
}

/// The tower `F_1(B) = -(1/(d-1)) B^d + π`,
/// `F_{k+1}(B) = F_k(B)^d - (d/(d-1)) B F_k(B)^{d-1} + π`, for `k < n`.
///
/// `F_k` is the `k`-th iterate of `x^d - (d/(d-1)) B x^{d-1} + π` evaluated at
/// its own critical point `x = B`.
pub fn eisenstein_tower(d: u64, n: usize, prime: u64) -> Result<Vec<ExactPoly>, PolyError> {
    if d < 2 {
        return Err(PolyError::DegreeTooSmall(2));
    }
    if !primal::is_prime(prime) {
        return Err(PolyError::NotPrime(prime));
    }
    if !d.is_multiple_of(prime) {
        return Err(PolyError::PrimeDoesNotDivide { prime, d });
    }
    let dq = BigRational::from_integer(BigInt::from(d));
    let dm1 = BigRational::from_integer(BigInt::from(d - 1));
    let pi = ExactPoly::constant(BigRational::from_integer(BigInt::from(prime)));
    let du = d as usize;

    let mut levels = Vec::with_capacity(n);
    if n == 0 {
        return Ok(levels);
    }
    let first = &ExactPoly::monomial(-(BigRational::one() / &dm1), du) + &pi;
    levels.push(first);
    let b_term = ExactPoly::monomial(&dq / &dm1, 1);
    for _ in 1..n {
        let prev = levels.last().expect("nonempty");
        let top = prev.pow(du - 1);
        let next = &(&(&top * prev) - &(&b_term * &top)) + &pi;
        levels.push(next);
    }
    Ok(levels)
}

/// Checks that every level of [`eisenstein_tower`] is Eisenstein at `prime`.
pub fn eisenstein_tower_check(d: u64, n: usize, prime: u64) -> Result<Vec<TowerLevel>, PolyError> {
    eisenstein_tower(d, n, prime)?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            Ok(TowerLevel {
                level: i + 1,
                degree: f.degree(),
                eisenstein: eisenstein_check(f, prime)?,
            })
        })
        .collect()
}
