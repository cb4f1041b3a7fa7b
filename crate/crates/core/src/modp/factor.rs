//! Factorization degree patterns over `F_p`: squarefree decomposition followed
//! by distinct-degree factorization of each squarefree part.

use serde::Serialize;

use super::{reduce, ModPoly, ModpError};
use crate::exactpoly::ExactPoly;
use crate::padic::{PadicValuation, Valuation};

/// Degree pattern of a factorization mod `p`.
///
/// Each entry `(degree, multiplicity)` stands for one irreducible factor.
/// Entries are sorted; `Σ degree·multiplicity` is the degree of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSignature {
    pub squarefree: bool,
    pub degree_pattern: Vec<(usize, usize)>,
}

impl FactorSignature {
    pub fn total_degree(&self) -> usize {
        self.degree_pattern.iter().map(|(d, m)| d * m).sum()
    }

    /// Irreducible factors occurring more than once.
    pub fn repeated(&self) -> Vec<(usize, usize)> {
        self.degree_pattern.iter().copied().filter(|(_, m)| *m > 1).collect()
    }

    /// Degrees of the irreducible factors, ignoring multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        self.degree_pattern.iter().map(|(d, _)| *d).collect()
    }

    pub fn has_linear_factor(&self) -> bool {
        self.degree_pattern.iter().any(|(d, _)| *d == 1)
    }
}

/// Squarefree decomposition in characteristic `p`: pairs `(part, k)` where
/// `part` is the product of irreducible factors of multiplicity exactly `k`.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.prime();
    let f = f.monic();
    let one = ModPoly::one(p);
    let mut out = Vec::new();
    let fp = f.derivative();
    if fp.is_zero() {
        // f = g(x^p) = g^{1/p}(x)^p
        for (part, k) in squarefree_decomposition(&f.pth_root()) {
            out.push((part, k * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_rem(&c).0;
    let mut k = 1usize;
    while w != one {
        let y = w.gcd(&c);
        let part = w.div_rem(&y).0;
        if !part.is_constant() {
            out.push((part, k));
        }
        w = y;
        c = c.div_rem(&w).0;
        k += 1;
    }
    if c != one {
        for (part, j) in squarefree_decomposition(&c.pth_root()) {
            out.push((part, j * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(degree, count)` of irreducible factors.
fn distinct_degree(g: &ModPoly) -> Vec<(usize, usize)> {
    let p = g.prime();
    let x = ModPoly::x(p);
    let mut rest = g.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut i = 1usize;
    while rest.degree() >= 2 * i {
        h = h.pow_mod(p, &rest);
        let d = h.sub(&x).gcd(&rest);
        if !d.is_constant() {
            out.push((i, d.degree() / i));
            rest = rest.div_rem(&d).0;
            h = h.rem(&rest);
        }
        i += 1;
    }
    if !rest.is_constant() {
        out.push((rest.degree(), 1));
    }
    out
}

/// Degree pattern of `f` mod `p`, with multiplicities.
///
/// Fails with [`ModpError::Inseparable`] when `f' = 0` in `F_p[x]`.
pub fn factor_signature(f: &ModPoly) -> Result<FactorSignature, ModpError> {
    if f.is_constant() {
        return Err(ModpError::Constant);
    }
    if f.derivative().is_zero() {
        return Err(ModpError::Inseparable(f.prime()));
    }
    let mut pattern = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (deg, count) in distinct_degree(&part) {
            pattern.extend(std::iter::repeat_n((deg, mult), count));
        }
    }
    pattern.sort_unstable();
    let squarefree = pattern.iter().all(|(_, m)| *m == 1);
    Ok(FactorSignature {
        squarefree,
        degree_pattern: pattern,
    })
}

/// True iff `f` has a root in `F_p`, via `gcd(f, x^p - x)`.
pub fn has_root(f: &ModPoly) -> Result<bool, ModpError> {
    if f.is_constant() {
        return Err(ModpError::Constant);
    }
    let p = f.prime();
    let x = ModPoly::x(p);
    let xp = x.pow_mod(p, f);
    Ok(!xp.sub(&x).gcd(f).is_constant())
}

/// Observed mod-p shape when `p` exactly divides the discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranspositionShape {
    pub prime: u64,
    pub signature: FactorSignature,
    /// Irreducible factors that occur more than once.
    pub repeated: Vec<(usize, usize)>,
    /// Exactly one repeated factor, linear, of multiplicity two.
    pub matches: bool,
}

/// When `v_p(Δ(F)) = 1`, the reduction of `F` must have exactly one repeated
/// factor, linear and squared. Returns the observed shape in that case and
/// `None` otherwise.
pub fn ramification_signature(f: &ExactPoly, p: u64) -> Result<Option<TranspositionShape>, ModpError> {
    let disc = f
        .discriminant()
        .map_err(|_| ModpError::Constant)?
        .value;
    ramification_signature_with_disc(f, &disc, p)
}

/// As [`ramification_signature`] with a precomputed discriminant.
pub fn ramification_signature_with_disc(
    f: &ExactPoly,
    disc: &num_rational::BigRational,
    p: u64,
) -> Result<Option<TranspositionShape>, ModpError> {
    let fp = match reduce(f, p)? {
        Ok(fp) => fp,
        Err(reason) => return Err(ModpError::BadReduction { prime: p, reason }),
    };
    if PadicValuation::new(p).of(disc) != Valuation::Finite(1) {
        return Ok(None);
    }
    let signature = factor_signature(&fp)?;
    let repeated = signature.repeated();
    let matches = repeated == [(1, 2)];
    Ok(Some(TranspositionShape {
        prime: p,
        signature,
        repeated,
        matches,
    }))
}
