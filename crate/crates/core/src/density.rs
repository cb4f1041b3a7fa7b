//! Prime scans: attracting-point densities, root statistics of the
//! critical-preimage polynomial `∏_b (f^m(x) - b)`, Frobenius evidence for a
//! full symmetric Galois group, and the common-good-prime search.
//!
//! A prime `p` is *wild* when `p | deg f`. Otherwise it is *bad* when it
//! divides a coefficient denominator or merges two distinct critical points
//! mod `p`, and *good* in the remaining cases. Scans run over fixed-size
//! chunks of the prime list, so merged output is independent of the worker
//! count.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{format_rational, ExactPoly, PolyError};
use crate::modp::{
    critical_orbit_verdicts, factor_signature, has_root, reduce, reduce_rational, sieve_primes, ModPoly, ModpError,
    OrbitVerdict,
};
use crate::wreath::{fpp_table, Proportion, WreathError};

const CHUNK: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Modp(#[from] ModpError),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial must have degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("f'∘f^{0} is inseparable over Q")]
    Inseparable(u32),
    #[error("map list is empty")]
    EmptyMapList,
    #[error("modulus must be at least 1")]
    BadModulus,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// A monic polynomial of degree at least 2 whose critical points are all
/// rational, with the data needed to classify primes.
#[derive(Debug, Clone)]
pub struct ScanTarget {
    f: ExactPoly,
    degree: u64,
    critical_points: Vec<BigRational>,
    denominator: BigInt,
}

impl ScanTarget {
    pub fn new(f: &ExactPoly) -> Result<Self, DensityError> {
        if f.degree() < 2 {
            return Err(DensityError::DegreeTooSmall(f.degree()));
        }
        if !f.is_monic() {
            return Err(DensityError::NotMonic);
        }
        let critical_points: Vec<BigRational> = f.critical_points()?.into_iter().map(|(b, _)| b).collect();
        let mut denominator = f.denominator_lcm();
        for b in &critical_points {
            denominator = num_integer::lcm(denominator, b.denom().clone());
        }
        Ok(ScanTarget {
            f: f.clone(),
            degree: f.degree() as u64,
            critical_points,
            denominator,
        })
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.f
    }

    /// Distinct critical points in ascending order.
    pub fn critical_points(&self) -> &[BigRational] {
        &self.critical_points
    }

    /// Reduction of `f` and of its critical points at a good prime.
    pub fn reduce_at(&self, p: u64) -> Result<(ModPoly, Vec<u64>), PrimeStatus> {
        if self.degree.is_multiple_of(p) {
            return Err(PrimeStatus::WildExcluded);
        }
        if (&self.denominator % BigInt::from(p)).is_zero() {
            return Err(PrimeStatus::BadReduction);
        }
        let fp = match reduce(&self.f, p) {
            Ok(Ok(fp)) => fp,
            _ => return Err(PrimeStatus::BadReduction),
        };
        let mut points = Vec::with_capacity(self.critical_points.len());
        for b in &self.critical_points {
            let r = reduce_rational(b, p).ok_or(PrimeStatus::BadReduction)?;
            if points.contains(&r) {
                return Err(PrimeStatus::BadReduction);
            }
            points.push(r);
        }
        Ok((fp, points))
    }

    pub fn classify(&self, p: u64) -> PrimeRecord {
        self.classify_all(&[p])[0]
    }

    /// Classifies each prime, running the orbit searches of all good primes
    /// together.
    pub fn classify_all(&self, primes: &[u64]) -> Vec<PrimeRecord> {
        let reduced: Vec<Result<(ModPoly, Vec<u64>), PrimeStatus>> =
            primes.iter().map(|&p| self.reduce_at(p)).collect();
        let jobs: Vec<(&ModPoly, u64)> = reduced
            .iter()
            .flatten()
            .flat_map(|(fp, points)| points.iter().map(move |&b| (fp, b)))
            .collect();
        let mut verdicts = critical_orbit_verdicts(&jobs).into_iter();
        primes
            .iter()
            .zip(&reduced)
            .map(|(&p, r)| match r {
                Err(status) => PrimeRecord {
                    prime: p,
                    status: *status,
                    attracting: false,
                    verdict: None,
                },
                Ok((_, points)) => {
                    let mine: Vec<OrbitVerdict> = verdicts
                        .by_ref()
                        .take(points.len())
                        .enumerate()
                        .map(|(i, v)| v.for_critical_point(i))
                        .collect();
                    let chosen = mine
                        .iter()
                        .find(|v| v.critical_point_periodic)
                        .copied()
                        .unwrap_or(mine[0]);
                    PrimeRecord {
                        prime: p,
                        status: PrimeStatus::Good,
                        attracting: chosen.critical_point_periodic,
                        verdict: Some(chosen),
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    Good,
    BadReduction,
    WildExcluded,
}

/// Verdict at one prime. At a good prime, `verdict` is that of the first
/// periodic critical point, or of the first critical point if none is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub prime: u64,
    pub status: PrimeStatus,
    pub attracting: bool,
    pub verdict: Option<OrbitVerdict>,
}

/// Records of a prime range; merges by concatenation in prime order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DensityPartial {
    records: Vec<PrimeRecord>,
}

impl DensityPartial {
    pub fn records(&self) -> &[PrimeRecord] {
        &self.records
    }

    pub fn merge(mut self, other: DensityPartial) -> DensityPartial {
        self.records.extend(other.records);
        self.records.sort_unstable_by_key(|r| r.prime);
        self.records.dedup_by_key(|r| r.prime);
        self
    }
}

/// Classifies every prime in `[lo, hi]`.
pub fn partial_density_scan(target: &ScanTarget, lo: u64, hi: u64) -> DensityPartial {
    let primes: Vec<u64> = sieve_primes(hi).into_iter().filter(|&p| p >= lo).collect();
    DensityPartial {
        records: target.classify_all(&primes),
    }
}

fn run_chunked<T, F>(primes: &[u64], workers: usize, job: F) -> Result<Vec<T>, DensityError>
where
    T: Send,
    F: Fn(&[u64]) -> Vec<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| DensityError::ThreadPool(e.to_string()))?;
    let chunks: Vec<Vec<T>> = pool.install(|| {
        primes
            .par_chunks(CHUNK)
            .map(job)
            .collect()
    });
    Ok(chunks.into_iter().flatten().collect())
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueClass {
    pub residue: u64,
    pub primes: u64,
    pub good: u64,
    pub attracting: u64,
    pub frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub bound: u64,
    pub good: u64,
    pub attracting: u64,
    pub density_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub f: String,
    pub coefficients: ExactPoly,
    pub critical_points: Vec<String>,
    pub prime_bound: u64,
    pub primes_scanned: u64,
    pub good_count: u64,
    pub bad_reduction_count: u64,
    pub wild_excluded_count: u64,
    pub attracting_count: u64,
    /// `attracting_count / good_count`; `None` when no prime is good.
    pub density_estimate: Option<f64>,
    pub modulus: Option<u64>,
    pub residue_classes: Vec<ResidueClass>,
    /// Estimates at each power of ten up to the bound.
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityScan {
    pub report: DensityReport,
    #[serde(skip)]
    pub records: Vec<PrimeRecord>,
}

impl DensityScan {
    /// Columns `prime, good, attracting, which_critical_point, tail, cycle`;
    /// the last three are empty at primes that are not good.
    pub fn records_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["prime", "good", "attracting", "which_critical_point", "tail", "cycle"])
            .expect("in-memory write");
        for r in &self.records {
            let good = r.status == PrimeStatus::Good;
            let (which, tail, cycle) = match r.verdict {
                Some(v) => (
                    v.which_critical_point.to_string(),
                    v.tail_length.to_string(),
                    v.cycle_length.to_string(),
                ),
                None => Default::default(),
            };
            w.write_record([
                r.prime.to_string(),
                u8::from(good).to_string(),
                u8::from(r.attracting).to_string(),
                which,
                tail,
                cycle,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Aggregates the records of all primes up to `bound`.
pub fn assemble_density(
    target: &ScanTarget,
    bound: u64,
    modulus: Option<u64>,
    partial: DensityPartial,
) -> Result<DensityScan, DensityError> {
    if modulus == Some(0) {
        return Err(DensityError::BadModulus);
    }
    let records = partial.records;
    let count = |s: PrimeStatus| records.iter().filter(|r| r.status == s).count() as u64;
    let good = count(PrimeStatus::Good);
    let attracting = records.iter().filter(|r| r.attracting).count() as u64;

    let mut classes: BTreeMap<u64, ResidueClass> = BTreeMap::new();
    if let Some(m) = modulus {
        for r in &records {
            let c = classes.entry(r.prime % m).or_insert(ResidueClass {
                residue: r.prime % m,
                primes: 0,
                good: 0,
                attracting: 0,
                frequency: None,
            });
            c.primes += 1;
            c.good += u64::from(r.status == PrimeStatus::Good);
            c.attracting += u64::from(r.attracting);
        }
        for c in classes.values_mut() {
            c.frequency = ratio(c.attracting, c.good);
        }
    }

    let mut checkpoints = Vec::new();
    let (mut g, mut a, mut i) = (0u64, 0u64, 0usize);
    let mut level = 10u64;
    while level <= bound {
        while i < records.len() && records[i].prime <= level {
            g += u64::from(records[i].status == PrimeStatus::Good);
            a += u64::from(records[i].attracting);
            i += 1;
        }
        checkpoints.push(Checkpoint {
            bound: level,
            good: g,
            attracting: a,
            density_estimate: ratio(a, g),
        });
        match level.checked_mul(10) {
            Some(next) => level = next,
            None => break,
        }
    }

    let report = DensityReport {
        f: target.f.to_string(),
        coefficients: target.f.clone(),
        critical_points: target.critical_points.iter().map(format_rational).collect(),
        prime_bound: bound,
        primes_scanned: records.len() as u64,
        good_count: good,
        bad_reduction_count: count(PrimeStatus::BadReduction),
        wild_excluded_count: count(PrimeStatus::WildExcluded),
        attracting_count: attracting,
        density_estimate: ratio(attracting, good),
        modulus,
        residue_classes: classes.into_values().collect(),
        checkpoints,
    };
    Ok(DensityScan { report, records })
}

/// Marks each good prime `p <= bound` attracting iff some critical point is
/// periodic under `f mod p`.
pub fn attracting_density_scan(
    f: &ExactPoly,
    bound: u64,
    workers: usize,
    modulus: Option<u64>,
) -> Result<DensityScan, DensityError> {
    let target = ScanTarget::new(f)?;
    let primes = sieve_primes(bound);
    let records = run_chunked(&primes, workers, |chunk| target.classify_all(chunk))?;
    assemble_density(&target, bound, modulus, DensityPartial { records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChebotarevStatus {
    BadReduction,
    WildExcluded,
    Ramified,
    Unramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChebotarevRecord {
    pub prime: u64,
    pub status: ChebotarevStatus,
    pub has_root: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebotarevReport {
    pub f: String,
    pub m: u32,
    pub preimage_polynomial_degree: usize,
    pub prime_bound: u64,
    pub primes_scanned: u64,
    pub bad_reduction_count: u64,
    pub wild_excluded_count: u64,
    pub ramified_count: u64,
    pub unramified_count: u64,
    pub root_count: u64,
    /// `root_count / unramified_count`.
    pub root_frequency: Option<f64>,
    /// Fixed-point proportion of `S_{d-1}[[S_d]^m]`.
    pub predicted_fpp: Proportion,
    pub predicted_fpp_decimal: f64,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebotarevScan {
    pub report: ChebotarevReport,
    #[serde(skip)]
    pub records: Vec<ChebotarevRecord>,
}

impl ChebotarevScan {
    /// Columns `prime, good, unramified, has_root`.
    pub fn records_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["prime", "good", "unramified", "has_root"])
            .expect("in-memory write");
        for r in &self.records {
            let good = matches!(r.status, ChebotarevStatus::Ramified | ChebotarevStatus::Unramified);
            w.write_record([
                r.prime.to_string(),
                u8::from(good).to_string(),
                u8::from(r.status == ChebotarevStatus::Unramified).to_string(),
                u8::from(r.has_root).to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// `∏_b (f^m(x) - b)` over the distinct critical points `b`.
pub fn critical_preimage_polynomial(target: &ScanTarget, m: u32) -> ExactPoly {
    let fm = target.f.iterate(m as usize);
    target
        .critical_points
        .iter()
        .fold(ExactPoly::one(), |acc, b| &acc * &(&fm - &ExactPoly::constant(b.clone())))
}

fn is_squarefree(g: &ModPoly) -> bool {
    let dg = g.derivative();
    !dg.is_zero() && g.gcd(&dg).is_constant()
}

/// Frequency of good primes with squarefree reduction at which
/// `∏_b (f^m(x) - b)` has a root mod `p`.
pub fn chebotarev_scan(f: &ExactPoly, m: u32, bound: u64, workers: usize) -> Result<ChebotarevScan, DensityError> {
    let target = ScanTarget::new(f)?;
    let g = critical_preimage_polynomial(&target, m);
    if !g.is_separable() {
        return Err(DensityError::Inseparable(m));
    }
    let table = fpp_table(target.degree, m)?;
    let predicted = table.rows[m as usize].fpp_product.clone();

    let primes = sieve_primes(bound);
    let classify = |p: u64| {
        let status = match target.reduce_at(p) {
            Err(PrimeStatus::WildExcluded) => ChebotarevStatus::WildExcluded,
            Err(_) => ChebotarevStatus::BadReduction,
            Ok(_) => match reduce(&g, p) {
                Ok(Ok(gp)) if is_squarefree(&gp) => {
                    let root = has_root(&gp).unwrap_or(false);
                    return ChebotarevRecord {
                        prime: p,
                        status: ChebotarevStatus::Unramified,
                        has_root: root,
                    };
                }
                Ok(Ok(_)) => ChebotarevStatus::Ramified,
                _ => ChebotarevStatus::BadReduction,
            },
        };
        ChebotarevRecord {
            prime: p,
            status,
            has_root: false,
        }
    };
    let records = run_chunked(&primes, workers, |chunk| chunk.iter().map(|&p| classify(p)).collect())?;

    let count = |s: ChebotarevStatus| records.iter().filter(|r| r.status == s).count() as u64;
    let unramified = count(ChebotarevStatus::Unramified);
    let roots = records.iter().filter(|r| r.has_root).count() as u64;
    let root_frequency = ratio(roots, unramified);
    let predicted_decimal = predicted.to_f64();
    let report = ChebotarevReport {
        f: target.f.to_string(),
        m,
        preimage_polynomial_degree: g.degree(),
        prime_bound: bound,
        primes_scanned: records.len() as u64,
        bad_reduction_count: count(ChebotarevStatus::BadReduction),
        wild_excluded_count: count(ChebotarevStatus::WildExcluded),
        ramified_count: count(ChebotarevStatus::Ramified),
        unramified_count: unramified,
        root_count: roots,
        root_frequency,
        predicted_fpp: predicted,
        predicted_fpp_decimal: predicted_decimal,
        gap: root_frequency.map(|r| (r - predicted_decimal).abs()),
    };
    Ok(ChebotarevScan { report, records })
}

/// Frobenius evidence that the Galois group of `F` is the full symmetric
/// group: a `d`-cycle, a transposition, and an `ℓ`-cycle for a prime
/// `ℓ > d/2`. Only primes where `F` reduces to a squarefree polynomial of
/// the same degree are consulted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdCertificate {
    pub degree: usize,
    pub prime_bound: u64,
    pub irreducible_prime: Option<u64>,
    pub transposition_pattern_prime: Option<u64>,
    pub long_prime_cycle_prime: Option<u64>,
    pub certified: bool,
}

fn is_long_prime_cycle(degrees: &[usize], d: usize) -> bool {
    let big: Vec<usize> = degrees.iter().copied().filter(|&k| k > 1).collect();
    matches!(big[..], [l] if 2 * l > d && primal::is_prime(l as u64))
}

pub fn certify_full_symmetric(f: &ExactPoly, bound: u64) -> SdCertificate {
    let d = f.degree();
    let mut cert = SdCertificate {
        degree: d,
        prime_bound: bound,
        irreducible_prime: None,
        transposition_pattern_prime: None,
        long_prime_cycle_prime: None,
        certified: false,
    };
    for p in sieve_primes(bound) {
        let Ok(Ok(fp)) = reduce(f, p) else { continue };
        let Ok(sig) = factor_signature(&fp) else { continue };
        if !sig.squarefree {
            continue;
        }
        let degrees = sig.degrees();
        let two_count = degrees.iter().filter(|&&k| k == 2).count();
        let slots = [
            (&mut cert.irreducible_prime, degrees == [d]),
            (
                &mut cert.transposition_pattern_prime,
                two_count == 1 && degrees.iter().all(|&k| k <= 2),
            ),
            (&mut cert.long_prime_cycle_prime, is_long_prime_cycle(&degrees, d)),
        ];
        for (slot, hit) in slots {
            if hit && slot.is_none() {
                *slot = Some(p);
            }
        }
        if cert.irreducible_prime.is_some()
            && cert.transposition_pattern_prime.is_some()
            && cert.long_prime_cycle_prime.is_some()
        {
            cert.certified = true;
            break;
        }
    }
    cert
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CommonPrime {
    Found {
        prime: u64,
        /// One verdict per map, for its first critical point.
        verdicts: Vec<OrbitVerdict>,
    },
    Exhausted {
        prime_bound: u64,
        primes_checked: u64,
        /// Primes that are bad or wild for at least one map.
        not_good: u64,
        /// Good primes where some map has a periodic critical point.
        periodic: u64,
    },
}

/// Smallest prime `p <= bound`, good for every map, at which no map has a
/// periodic critical point mod `p`.
pub fn find_common_good_prime(maps: &[ExactPoly], bound: u64) -> Result<CommonPrime, DensityError> {
    if maps.is_empty() {
        return Err(DensityError::EmptyMapList);
    }
    let targets = maps.iter().map(ScanTarget::new).collect::<Result<Vec<_>, _>>()?;
    let (mut checked, mut not_good, mut periodic) = (0u64, 0u64, 0u64);
    'primes: for p in sieve_primes(bound) {
        checked += 1;
        let mut verdicts = Vec::with_capacity(targets.len());
        for t in &targets {
            let record = t.classify(p);
            if record.status != PrimeStatus::Good {
                not_good += 1;
                continue 'primes;
            }
            if record.attracting {
                periodic += 1;
                continue 'primes;
            }
            verdicts.push(record.verdict.expect("good prime has a verdict"));
        }
        return Ok(CommonPrime::Found { prime: p, verdicts });
    }
    Ok(CommonPrime::Exhausted {
        prime_bound: bound,
        primes_checked: checked,
        not_good,
        periodic,
    })
}

/// `density_estimate <= root_frequency + 3 sqrt(r (1 - r) / primes_scanned)`.
/// False when the reports disagree on the polynomial or the bound, or when
/// either estimate is undefined.
pub fn bound_consistency_check(report: &DensityReport, cheb: &ChebotarevReport) -> bool {
    if report.f != cheb.f || report.prime_bound != cheb.prime_bound {
        return false;
    }
    let (Some(density), Some(r)) = (report.density_estimate, cheb.root_frequency) else {
        return false;
    };
    let slack = 3.0 * (r * (1.0 - r) / report.primes_scanned.max(1) as f64).sqrt();
    density <= r + slack
}

/// `attracting_count / good_count` as an exact rational.
pub fn exact_density(report: &DensityReport) -> Option<BigRational> {
    (report.good_count > 0).then(|| {
        BigRational::new(BigInt::from(report.attracting_count), BigInt::from(report.good_count))
    })
}
