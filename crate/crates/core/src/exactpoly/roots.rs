//! Exact rational roots by Sturm-sequence bisection.
//!
//! The polynomial is rescaled to a monic integer polynomial `g(y)` with
//! `y = L·x`; rational roots of `g` are integers, so isolating intervals with
//! half-integer endpoints never hit a root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactPoly;

/// Distinct rational roots with multiplicities, in increasing order.
pub fn rational_roots(f: &ExactPoly) -> Vec<(BigRational, usize)> {
    if f.is_constant() {
        return Vec::new();
    }
    let h = f.monic();
    let k = h.degree();
    let scale = h.denominator_lcm();
    let scale_q = BigRational::from_integer(scale.clone());
    // g(y) = L^k h(y/L) is monic with integer coefficients.
    let g = ExactPoly::new(
        h.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * super::pow_rational(&scale_q, k - i))
            .collect(),
    );
    let sf = {
        let d = g.gcd(&g.derivative());
        g.div_rem(&d).0.monic()
    };
    let bound = sf
        .coeffs()
        .iter()
        .map(|c| c.abs().ceil().to_integer())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();

    let sturm = sturm_chain(&sf);
    let mut int_roots = Vec::new();
    let lo = -bound.clone();
    isolate(&sturm, &lo, &bound, &mut int_roots);

    let mut out = Vec::new();
    for r in int_roots {
        let y = BigRational::from_integer(r);
        let linear = ExactPoly::new(vec![-y.clone(), BigRational::one()]);
        let mut mult = 0;
        let mut rest = g.clone();
        loop {
            let (qt, rem) = rest.div_rem(&linear);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            rest = qt;
        }
        out.push((y / &scale_q, mult));
    }
    out
}

fn sturm_chain(f: &ExactPoly) -> Vec<ExactPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[ExactPoly], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn half_above(n: &BigInt) -> BigRational {
    BigRational::new(n * 2 + 1, BigInt::from(2))
}

/// Collects the integer roots in `(lo, hi]` by bisection on integer grids,
/// counting via Sturm at the half-integers `lo + 1/2`, `hi + 1/2`.
fn isolate(chain: &[ExactPoly], lo: &BigInt, hi: &BigInt, out: &mut Vec<BigInt>) {
    let count = sign_changes(chain, &half_above(lo)) as i64 - sign_changes(chain, &half_above(hi)) as i64;
    if count <= 0 {
        return;
    }
    if hi - lo == BigInt::one() {
        if chain[0].eval(&BigRational::from_integer(hi.clone())).is_zero() {
            out.push(hi.clone());
        }
        return;
    }
    let mid: BigInt = (lo + hi).div_floor(&BigInt::from(2));
    isolate(chain, lo, &mid, out);
    isolate(chain, &mid, hi, out);
}
