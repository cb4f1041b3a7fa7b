//! The discriminant recursion for iterates of a monic polynomial.
//!
//! For monic `f` of degree `d` with critical points `b` of multiplicity `m_b`,
//!
//! ```text
//! Δ(f^{n+1} - α) = ± d^{d^{n+1}} · Δ(f^n - α)^d · ∏_b (f^{n+1}(b) - α)^{m_b}
//! ```
//!
//! The power of `d` comes from the leading coefficient of `f'` and is a unit
//! whenever `d` is invertible in the coefficient ring; it is reported as its
//! own field so callers can compare either form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use serde::Serialize;

use super::{pow_rational, serialize_rational, ExactPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscRecursion {
    /// `Δ(f^{n+1}(x) - α)`.
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: BigRational,
    /// `Δ(f^n(x) - α)^d · ∏_b (f^{n+1}(b) - α)^{m_b}`.
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: BigRational,
    /// `d^{d^{n+1}}`, the leading-coefficient contribution of `f'`.
    #[serde(serialize_with = "serialize_rational")]
    pub unit_factor: BigRational,
    /// `|lhs| == unit_factor · |rhs|`.
    pub holds: bool,
    /// Observed sign of `lhs / (unit_factor · rhs)` when `holds`.
    pub sign: i8,
}

pub fn disc_recursion_check(
    f: &ExactPoly,
    alpha: &BigRational,
    n: usize,
) -> Result<DiscRecursion, PolyError> {
    if f.degree() < 2 {
        return Err(PolyError::DegreeTooSmall(2));
    }
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let d = f.degree();
    let crit = f.critical_points()?;
    let shift = ExactPoly::constant(alpha.clone());

    let fn_ = f.iterate(n);
    let fn1 = f.compose(&fn_);
    let lhs = (&fn1 - &shift).discriminant()?.value;
    if lhs.is_zero() {
        return Err(PolyError::Inseparable("left-hand discriminant"));
    }

    let inner = (&fn_ - &shift).discriminant()?.value;
    let mut rhs = pow_rational(&inner, d);
    for (b, mult) in &crit {
        rhs *= pow_rational(&(fn1.eval(b) - alpha), *mult);
    }
    if rhs.is_zero() {
        return Err(PolyError::Inseparable("right-hand product"));
    }

    let exponent = d.checked_pow(n as u32 + 1).expect("iterate degree overflows usize");
    let unit_factor = BigRational::from_integer(num_traits::pow::pow(BigInt::from(d), exponent));
    let scaled = &unit_factor * &rhs;
    let holds = lhs.abs() == scaled.abs();
    let sign = if !holds {
        0
    } else if lhs == scaled {
        1
    } else {
        -1
    };
    Ok(DiscRecursion {
        lhs,
        rhs,
        unit_factor,
        holds,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn quadratic_base_case() {
        let f = ExactPoly::from_ints(&[1, 0, 1]);
        let r = disc_recursion_check(&f, &q(0, 1), 0).unwrap();
        assert_eq!(r.lhs, q(-4, 1));
        assert_eq!(r.rhs, q(1, 1));
        assert_eq!(r.unit_factor, q(4, 1));
        assert!(r.holds);
        assert_eq!(r.sign, -1);
    }

    #[test]
    fn quadratic_second_level() {
        // Δ(x^4 + 2x^2 + 2) = 16·2·(4 - 8)^2 = 512 = 2^4 · (-4)^2 · 2
        let f = ExactPoly::from_ints(&[1, 0, 1]);
        let r = disc_recursion_check(&f, &q(0, 1), 1).unwrap();
        assert_eq!(r.lhs, q(512, 1));
        assert_eq!(r.rhs, q(32, 1));
        assert!(r.holds);
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn cubic_with_double_critical_point() {
        let f = ExactPoly::from_ints(&[5, 0, 0, 1]);
        let r = disc_recursion_check(&f, &q(0, 1), 1).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn error_paths() {
        let irr = ExactPoly::from_ints(&[0, 1, 0, 1]);
        assert_eq!(
            disc_recursion_check(&irr, &q(0, 1), 1),
            Err(PolyError::IrrationalCriticalPoint)
        );
        // f = x^2, α = 0: f(0) = 0 makes the product vanish
        let sq = ExactPoly::from_ints(&[0, 0, 1]);
        assert!(matches!(
            disc_recursion_check(&sq, &q(0, 1), 0),
            Err(PolyError::Inseparable(_))
        ));
        let nm = ExactPoly::from_ints(&[1, 0, 2]);
        assert_eq!(disc_recursion_check(&nm, &q(0, 1), 0), Err(PolyError::NotMonic));
    }
}
