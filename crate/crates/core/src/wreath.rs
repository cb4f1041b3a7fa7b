//! Fixed-point proportions of iterated wreath products `[S_d]^n` acting on
//! the leaves of the depth-`n` `d`-ary tree, and of the product of `d-1`
//! copies that models `S_{d-1}[[S_d]^n]` on the critical-point preimage tree.
//!
//! With `q_n` the proportion of elements of `[S_d]^n` fixing no leaf,
//! `q_0 = 0` and `q_{n+1} = Σ_k c_k q_n^k` where `c_k` is the proportion of
//! `S_d` with exactly `k` fixed points. The table reports
//! `fpp_iter = 1 - q_n` and `fpp_product = 1 - q_n^{d-1}`.
//!
//! Values stay exact rationals while their size is below a bit cap. Past the
//! cap, each `q_n` is carried as a dyadic enclosure `[lower, upper]` with
//! outward rounding; the recurrence is increasing on `[0, 1]`, so endpoints
//! propagate soundly and every bound comparison remains a certified exact
//! rational comparison.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::format_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WreathError {
    #[error("degree {0} outside the supported range 2..=12")]
    DegreeOutOfRange(u64),
    #[error("sampling [S_{d}]^{n} exceeds the cap (d <= 6, n <= 8)")]
    SampleTooLarge { d: u64, n: u32 },
    #[error("tree level sizes overflow")]
    Overflow,
}

pub const MAX_DEGREE: u64 = 12;
pub const DEFAULT_EXACT_BITS: u64 = 1 << 14;
pub const DEFAULT_ENCLOSURE_BITS: u64 = 256;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Level sizes of the preimage tree of a critical point: the root, then
/// `d-1` nodes, then `d` children under every other node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimageTreeShape {
    pub d: u64,
    pub n: u32,
    pub level_sizes: Vec<u128>,
}

impl PreimageTreeShape {
    /// Nodes above the root: `(d-1)(1 + d + … + d^n)`.
    pub fn nodes_above_root(&self) -> u128 {
        self.level_sizes.iter().skip(1).sum()
    }
}

pub fn tree_shape(d: u64, n: u32) -> Result<PreimageTreeShape, WreathError> {
    if d < 2 {
        return Err(WreathError::DegreeOutOfRange(d));
    }
    let mut sizes = vec![1u128, (d - 1) as u128];
    for _ in 0..n {
        let next = sizes
            .last()
            .and_then(|s| s.checked_mul(d as u128))
            .ok_or(WreathError::Overflow)?;
        sizes.push(next);
    }
    Ok(PreimageTreeShape { d, n, level_sizes: sizes })
}

/// `c_k = #{σ ∈ S_d : σ has exactly k fixed points} / d!`, `k = 0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointPolynomial {
    pub d: u64,
    pub coeffs: Vec<BigRational>,
}

impl FixedPointPolynomial {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

fn subfactorials(n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one(), BigUint::zero()];
    for k in 2..=n {
        let v = BigUint::from(k - 1) * (&out[k - 1] + &out[k - 2]);
        out.push(v);
    }
    out.truncate(n + 1);
    out
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Rencontres numbers `C(d,k)·!(d-k)` divided by `d!`.
pub fn fixed_point_polynomial(d: u64) -> Result<FixedPointPolynomial, WreathError> {
    if !(2..=MAX_DEGREE).contains(&d) {
        return Err(WreathError::DegreeOutOfRange(d));
    }
    let sub = subfactorials(d as usize);
    let fact: BigUint = (1..=d).map(BigUint::from).product();
    let coeffs = (0..=d)
        .map(|k| {
            let count = binomial(d, k) * &sub[(d - k) as usize];
            BigRational::new(count.into(), fact.clone().into())
        })
        .collect();
    Ok(FixedPointPolynomial { d, coeffs })
}

/// An exact proportion, or a certified enclosure of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proportion {
    Exact(BigRational),
    Enclosed { lower: BigRational, upper: BigRational },
}

impl Proportion {
    pub fn lower(&self) -> &BigRational {
        match self {
            Proportion::Exact(v) => v,
            Proportion::Enclosed { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            Proportion::Exact(v) => v,
            Proportion::Enclosed { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Proportion::Exact(v) => Some(v),
            Proportion::Enclosed { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Proportion::Exact(_))
    }

    /// Midpoint as a float, for display only.
    pub fn to_f64(&self) -> f64 {
        let mid = (self.lower() + self.upper()) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - x`, an order-reversing map.
    fn complement(&self) -> Proportion {
        let one = BigRational::one();
        match self {
            Proportion::Exact(v) => Proportion::Exact(&one - v),
            Proportion::Enclosed { lower, upper } => Proportion::Enclosed {
                lower: &one - upper,
                upper: &one - lower,
            },
        }
    }

    /// `x^k` for `x` in `[0, 1]` (order-preserving).
    fn pow(&self, k: usize) -> Proportion {
        match self {
            Proportion::Exact(v) => Proportion::Exact(num_traits::pow(v.clone(), k)),
            Proportion::Enclosed { lower, upper } => Proportion::Enclosed {
                lower: num_traits::pow(lower.clone(), k),
                upper: num_traits::pow(upper.clone(), k),
            },
        }
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proportion::Exact(v) => f.write_str(&format_rational(v)),
            Proportion::Enclosed { lower, upper } => {
                write!(f, "{}..{}", format_rational(lower), format_rational(upper))
            }
        }
    }
}

impl Serialize for Proportion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn bit_size(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

fn round_dyadic(q: &BigRational, bits: u64, up: bool) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() };
    BigRational::new(n.to_integer(), scale)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FppRow {
    pub n: u32,
    /// Proportion of `[S_d]^n` fixing no leaf.
    pub q: Proportion,
    pub fpp_iter: Proportion,
    pub fpp_product: Proportion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FppPrecision {
    /// Largest `bits(num) + bits(den)` kept exact.
    pub exact_bits: u64,
    /// Dyadic precision of enclosures past the exact cap.
    pub enclosure_bits: u64,
}

impl Default for FppPrecision {
    fn default() -> Self {
        FppPrecision {
            exact_bits: DEFAULT_EXACT_BITS,
            enclosure_bits: DEFAULT_ENCLOSURE_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FppTable {
    pub d: u64,
    pub n_max: u32,
    pub rows: Vec<FppRow>,
}

pub fn fpp_table(d: u64, n_max: u32) -> Result<FppTable, WreathError> {
    fpp_table_with(d, n_max, FppPrecision::default())
}

pub fn fpp_table_with(d: u64, n_max: u32, precision: FppPrecision) -> Result<FppTable, WreathError> {
    let poly = fixed_point_polynomial(d)?;
    let mut q = Proportion::Exact(BigRational::zero());
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let fpp_iter = q.complement();
        let fpp_product = q.pow((d - 1) as usize).complement();
        rows.push(FppRow {
            n,
            q: q.clone(),
            fpp_iter,
            fpp_product,
        });
        if n == n_max {
            break;
        }
        q = match &q {
            Proportion::Exact(v) => {
                let next = poly.eval(v);
                if bit_size(&next) <= precision.exact_bits {
                    Proportion::Exact(next)
                } else {
                    Proportion::Enclosed {
                        lower: round_dyadic(&next, precision.enclosure_bits, false),
                        upper: round_dyadic(&next, precision.enclosure_bits, true),
                    }
                }
            }
            Proportion::Enclosed { lower, upper } => Proportion::Enclosed {
                lower: round_dyadic(&poly.eval(lower), precision.enclosure_bits, false),
                upper: round_dyadic(&poly.eval(upper), precision.enclosure_bits, true),
            },
        };
    }
    Ok(FppTable { d, n_max, rows })
}

impl FppTable {
    pub fn row(&self, n: u32) -> Option<&FppRow> {
        self.rows.get(n as usize)
    }

    /// Rows still held as exact rationals.
    pub fn exact_rows(&self) -> usize {
        self.rows.iter().take_while(|r| r.q.is_exact()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "q_n",
            "fpp_iter",
            "fpp_product",
            "bound_2_over_n_plus_2",
            "fpp_iter_decimal",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.q.to_string(),
                r.fpp_iter.to_string(),
                r.fpp_product.to_string(),
                format_rational(&two_over_n_plus_2(r.n)),
                format!("{:.12}", r.fpp_iter.to_f64()),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

fn two_over_n_plus_2(n: u32) -> BigRational {
    rat(2, n as i64 + 2)
}

/// `fpp_iter_n <= 2/(n+2)` for every row with `n >= 1`, compared against the
/// upper end of any enclosure.
pub fn check_fpp_bound(table: &FppTable) -> bool {
    table
        .rows
        .iter()
        .filter(|r| r.n >= 1)
        .all(|r| *r.fpp_iter.upper() <= two_over_n_plus_2(r.n))
}

/// `fpp_product_n <= C_d / n` for every row with `n >= 1`.
pub fn check_cd_over_n_bound(table: &FppTable, cd: &BigRational) -> bool {
    table
        .rows
        .iter()
        .filter(|r| r.n >= 1)
        .all(|r| *r.fpp_product.upper() <= cd / BigRational::from_integer(r.n.into()))
}

/// Whether `(n+2)^{d-1} <= n^{d-1} + C_d n^{d-2}` for `1 <= n <= n_max`.
pub fn cd_constant_valid(d: u64, cd: &BigRational, n_max: u32) -> bool {
    let e = (d - 1) as usize;
    (1..=n_max).all(|n| {
        let n = BigRational::from_integer(n.into());
        let two = BigRational::from_integer(2.into());
        let lhs = num_traits::pow(&n + two, e);
        let rhs = num_traits::pow(n.clone(), e) + cd * num_traits::pow(n, e - 1);
        lhs <= rhs
    })
}

/// `fpp_product = 1 - (1 - fpp_iter)^{d-1}`, exactly on exact rows and
/// endpoint-for-endpoint on enclosed rows.
pub fn product_identity_holds(table: &FppTable) -> bool {
    let e = (table.d - 1) as usize;
    table
        .rows
        .iter()
        .all(|r| r.fpp_iter.complement().pow(e).complement() == r.fpp_product)
}

/// `q_n` non-decreasing and `fpp_iter` non-increasing, all within `[0, 1]`,
/// certified from enclosure endpoints.
pub fn is_monotone(table: &FppTable) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let in_unit = table
        .rows
        .iter()
        .all(|r| *r.q.lower() >= zero && *r.q.upper() <= one && *r.fpp_iter.lower() >= zero);
    let q_up = table.rows.windows(2).all(|w| w[0].q.upper() <= w[1].q.lower());
    let fpp_down = table
        .rows
        .windows(2)
        .all(|w| w[1].fpp_iter.upper() <= w[0].fpp_iter.lower());
    in_unit && q_up && fpp_down
}

/// Leaf fixed-point data of one sampled element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WreathSample {
    pub has_fixed_leaf: bool,
    pub fixed_leaf_count: u64,
}

fn check_sample_size(d: u64, n: u32) -> Result<(), WreathError> {
    if !(2..=6).contains(&d) || n > 8 {
        return Err(WreathError::SampleTooLarge { d, n });
    }
    Ok(())
}

fn sample_subtree(d: usize, depth_left: u32, rng: &mut ChaCha8Rng, perm: &mut Vec<usize>) -> u64 {
    if depth_left == 0 {
        return 1;
    }
    perm.clear();
    perm.extend(0..d);
    perm.shuffle(rng);
    let fixed: Vec<bool> = perm.iter().enumerate().map(|(i, &s)| i == s).collect();
    let mut count = 0;
    for is_fixed in fixed {
        // every child subtree is drawn, fixed or not
        let c = sample_subtree(d, depth_left - 1, rng, perm);
        if is_fixed {
            count += c;
        }
    }
    count
}

/// Draws one uniform element of `[S_d]^n` (one uniform permutation per
/// internal node) from `rng`.
pub fn sample_wreath_element_with(d: u64, n: u32, rng: &mut ChaCha8Rng) -> Result<WreathSample, WreathError> {
    check_sample_size(d, n)?;
    let mut scratch = Vec::with_capacity(d as usize);
    let count = sample_subtree(d as usize, n, rng, &mut scratch);
    Ok(WreathSample {
        has_fixed_leaf: count > 0,
        fixed_leaf_count: count,
    })
}

pub fn sample_wreath_element(d: u64, n: u32, seed: u64) -> Result<WreathSample, WreathError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_wreath_element_with(d, n, &mut rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub d: u64,
    pub n: u32,
    pub seed: u64,
    pub samples: u64,
    pub hits: u64,
    pub frequency: f64,
    pub exact_fpp: Proportion,
    /// `|frequency - fpp| / sqrt(fpp (1 - fpp) / samples)`; zero when the
    /// exact proportion is 0 or 1 and matched.
    pub z_score: f64,
}

/// Frequency of elements with a fixed leaf over `samples` draws from one
/// seeded stream.
pub fn monte_carlo_fpp(d: u64, n: u32, samples: u64, seed: u64) -> Result<MonteCarloEstimate, WreathError> {
    check_sample_size(d, n)?;
    let table = fpp_table(d, n)?;
    let exact = table.rows[n as usize].fpp_iter.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        if sample_wreath_element_with(d, n, &mut rng)?.has_fixed_leaf {
            hits += 1;
        }
    }
    let frequency = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
    let p = exact.to_f64();
    let sigma = (p * (1.0 - p) / samples.max(1) as f64).sqrt();
    let diff = (frequency - p).abs();
    let z_score = if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MonteCarloEstimate {
        d,
        n,
        seed,
        samples,
        hits,
        frequency,
        exact_fpp: exact,
        z_score,
    })
}

/// Smallest integer `C_d` making [`cd_constant_valid`] true up to `n_max`.
pub fn minimal_integer_cd(d: u64, n_max: u32) -> BigInt {
    let mut c = BigInt::zero();
    loop {
        if cd_constant_valid(d, &BigRational::from_integer(c.clone()), n_max) {
            return c;
        }
        c += 1;
    }
}
