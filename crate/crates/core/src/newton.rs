//! Newton polygons over `Q_p` and the valuation hypotheses for the family
//! `f(x) = x^d - b x^m - x_0`.
//!
//! Hull construction compares exact cross products; slopes are exact
//! rationals, so collinear points merge into a single segment.

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{eisenstein_check, ExactPoly, PolyError};
pub use crate::padic::{PadicValuation, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Newton polygon needs at least two nonzero coefficients")]
    Monomial,
    #[error("degree must be at least {0}")]
    DegreeTooSmall(u64),
    #[error("odd degree needs p != 2")]
    OddDegreeWithTwo,
    #[error("the two primes must differ")]
    SamePrimes,
    #[error("hypotheses fail: {0:?}")]
    HypothesesFail(Vec<&'static str>),
    #[error("v_p(gamma + x0) is infinite")]
    InfiniteShift,
    #[error("level valuation {value} is outside (0, {bound}) or not coprime to {m}")]
    ShiftOutOfRange { value: i64, bound: i64, m: u64 },
    #[error("integer overflow in valuation bookkeeping")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One edge of the polygon: exact slope and horizontal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational64,
    pub length: u64,
}

impl Segment {
    pub fn new(num: i64, den: i64, length: u64) -> Self {
        Segment {
            slope: Rational64::new(num, den),
            length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// `(i, v_p(a_i))` for every nonzero coefficient, by increasing `i`.
    pub points: Vec<(u64, i64)>,
    /// Lower-hull edges, slopes strictly increasing.
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn total_length(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let points: Vec<[i64; 2]> = self.points.iter().map(|&(i, v)| [i as i64, v]).collect();
        let segments: Vec<[i64; 3]> = self
            .segments
            .iter()
            .map(|seg| [*seg.slope.numer(), *seg.slope.denom(), seg.length as i64])
            .collect();
        let mut st = s.serialize_struct("NewtonPolygon", 3)?;
        st.serialize_field("prime", &self.prime)?;
        st.serialize_field("points", &points)?;
        st.serialize_field("segments", &segments)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            prime: u64,
            points: Vec<(u64, i64)>,
            segments: Vec<(i64, i64, u64)>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.segments.iter().any(|s| s.1 == 0) {
            return Err(serde::de::Error::custom("zero slope denominator"));
        }
        Ok(NewtonPolygon {
            prime: raw.prime,
            points: raw.points,
            segments: raw.segments.into_iter().map(|(n, d, l)| Segment::new(n, d, l)).collect(),
        })
    }
}

/// Lower convex hull of `{(i, v_p(a_i)) : a_i != 0}`.
pub fn newton_polygon(f: &ExactPoly, p: u64) -> Result<NewtonPolygon, NewtonError> {
    if !primal::is_prime(p) {
        return Err(NewtonError::NotPrime(p));
    }
    let v = PadicValuation::new(p);
    let points: Vec<(u64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| v.of(c).finite().map(|val| (i as u64, val)))
        .collect();
    if points.len() < 2 {
        return Err(NewtonError::Monomial);
    }
    let cross = |o: (u64, i64), a: (u64, i64), b: (u64, i64)| -> i128 {
        let (ox, oy) = (o.0 as i128, o.1 as i128);
        (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
    };
    let mut hull: Vec<(u64, i64)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = (w[1].0 - w[0].0) as i64;
            Segment {
                slope: Rational64::new(w[1].1 - w[0].1, dx),
                length: dx as u64,
            }
        })
        .collect();
    Ok(NewtonPolygon {
        prime: p,
        points,
        segments,
    })
}

/// Data for the family `x^d - b x^m - x_0` at the prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaHypotheses {
    pub d: u64,
    pub m: u64,
    pub b: BigRational,
    pub x0: BigRational,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicate {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub v_b: Valuation,
    pub v_x0: Valuation,
    pub v_x0_over_b: Valuation,
    pub predicates: Vec<Predicate>,
    pub all_hold: bool,
}

impl HypothesisReport {
    pub fn failing(&self) -> Vec<&'static str> {
        self.predicates.iter().filter(|p| !p.holds).map(|p| p.name).collect()
    }
}

impl LemmaHypotheses {
    pub fn v_b(&self) -> Valuation {
        PadicValuation::new(self.p).of(&self.b)
    }

    pub fn v_x0(&self) -> Valuation {
        PadicValuation::new(self.p).of(&self.x0)
    }

    pub fn v_x0_over_b(&self) -> Valuation {
        if num_traits::Zero::is_zero(&self.b) {
            return Valuation::Infinity;
        }
        PadicValuation::new(self.p).of(&(&self.x0 / &self.b))
    }

    /// `x^d - b x^m - x_0`.
    pub fn polynomial(&self) -> ExactPoly {
        let lead = ExactPoly::monomial(num_traits::One::one(), self.d as usize);
        let mid = ExactPoly::monomial(self.b.clone(), self.m as usize);
        let c = ExactPoly::constant(self.x0.clone());
        &(&lead - &mid) - &c
    }

    /// Evaluates the standing assumptions and valuation conditions one by one.
    pub fn check(&self) -> HypothesisReport {
        let (d, m, p) = (self.d, self.m, self.p);
        let vb = self.v_b();
        let vx = self.v_x0();
        let vq = self.v_x0_over_b();
        let gap = d.saturating_sub(m);
        let mut preds = vec![
            Predicate { name: "p is prime", holds: primal::is_prime(p) },
            Predicate { name: "d >= 4", holds: d >= 4 },
            Predicate { name: "m in {d-1, d-2}", holds: m + 1 == d || m + 2 == d },
            Predicate { name: "m >= 3", holds: m >= 3 },
            Predicate { name: "p does not divide d-m", holds: gap == 0 || gap % p != 0 },
            Predicate {
                name: "v_p(b) in {-1, -2}",
                holds: matches!(vb, Valuation::Finite(-1) | Valuation::Finite(-2)),
            },
            Predicate { name: "v_p(x0) >= 1", holds: vx >= Valuation::Finite(1) },
        ];
        preds.push(Predicate {
            name: "(d-m) divides v_p(b)",
            holds: match vb {
                Valuation::Finite(v) => gap > 0 && v % gap as i64 == 0,
                Valuation::Infinity => false,
            },
        });
        preds.push(Predicate {
            name: "v_p(x0/b) < m",
            holds: vq < Valuation::Finite(m as i64),
        });
        preds.push(Predicate {
            name: "gcd(m, v_p(x0/b)) = 1",
            holds: match vq {
                Valuation::Finite(v) => (m as i64).gcd(&v) == 1,
                Valuation::Infinity => false,
            },
        });
        let all_hold = preds.iter().all(|p| p.holds);
        HypothesisReport {
            v_b: vb,
            v_x0: vx,
            v_x0_over_b: vq,
            predicates: preds,
            all_hold,
        }
    }
}

/// Output of [`construct_specialization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Specialization {
    pub d: u64,
    pub m: u64,
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::exactpoly::serialize_rational")]
    pub b: BigRational,
    #[serde(serialize_with = "crate::exactpoly::serialize_rational")]
    pub x0: BigRational,
    pub f: ExactPoly,
}

impl Specialization {
    pub fn hypotheses(&self) -> LemmaHypotheses {
        LemmaHypotheses {
            d: self.d,
            m: self.m,
            b: self.b.clone(),
            x0: self.x0.clone(),
            p: self.p,
        }
    }
}

/// Even `d`: `m = d-1`, `b = q/p`, `x_0 = pq`. Odd `d`: `m = d-2`,
/// `b = q/p^2`, `x_0 = q p^2` (needs `p != 2`). The result is
/// `f = x^d - b x^m - x_0`, Eisenstein at `q`.
pub fn construct_specialization(d: u64, p: u64, q: u64) -> Result<Specialization, NewtonError> {
    if d < 4 {
        return Err(NewtonError::DegreeTooSmall(4));
    }
    for r in [p, q] {
        if !primal::is_prime(r) {
            return Err(NewtonError::NotPrime(r));
        }
    }
    if p == q {
        return Err(NewtonError::SamePrimes);
    }
    let (pb, qb) = (num_bigint::BigInt::from(p), num_bigint::BigInt::from(q));
    let (m, b, x0) = if d.is_multiple_of(2) {
        (d - 1, BigRational::new(qb.clone(), pb.clone()), BigRational::from_integer(&pb * &qb))
    } else {
        if p == 2 {
            return Err(NewtonError::OddDegreeWithTwo);
        }
        let p2 = &pb * &pb;
        (d - 2, BigRational::new(qb.clone(), p2.clone()), BigRational::from_integer(&qb * &p2))
    };
    let h = LemmaHypotheses { d, m, b: b.clone(), x0: x0.clone(), p };
    Ok(Specialization {
        d,
        m,
        p,
        q,
        b,
        x0,
        f: h.polynomial(),
    })
}

/// Everything the specialization promises, checked at once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializationAudit {
    pub hypotheses: HypothesisReport,
    pub eisenstein_at_q: bool,
    pub sd_conditions: bool,
    pub polygon_matches_prediction: bool,
}

pub fn audit_specialization(s: &Specialization) -> Result<SpecializationAudit, NewtonError> {
    let h = s.hypotheses();
    let hypotheses = h.check();
    let eisenstein_at_q = eisenstein_check(&s.f, s.q)?;
    let sd_conditions = check_getting_sd_conditions(s.d, s.m);
    let polygon_matches_prediction = match predicted_segments(&h, h.v_x0()) {
        Ok(pred) => newton_polygon(&s.f, s.p)?.segments == pred,
        Err(_) => false,
    };
    Ok(SpecializationAudit {
        hypotheses,
        eisenstein_at_q,
        sd_conditions,
        polygon_matches_prediction,
    })
}

/// `gcd(m, d) = 1` and `d/2 < m < d`; false for `d < 3`.
pub fn check_getting_sd_conditions(d: u64, m: u64) -> bool {
    d >= 3 && m.gcd(&d) == 1 && 2 * m > d && m < d
}

/// Predicted Newton polygon of `f(x) - γ` at `p`, given `v_p(γ + x_0)`:
/// a segment of length `m` with slope `-v_p((γ+x_0)/b)/m` followed by one of
/// length `d-m` with slope `-v_p(b)/(d-m)`.
///
/// For the base level `γ = 0`, pass `v_p(x_0)`.
pub fn predicted_segments(h: &LemmaHypotheses, shift_valuation: Valuation) -> Result<Vec<Segment>, NewtonError> {
    let report = h.check();
    if !report.all_hold {
        return Err(NewtonError::HypothesesFail(report.failing()));
    }
    let vs = shift_valuation.finite().ok_or(NewtonError::InfiniteShift)?;
    let vb = report.v_b.finite().expect("checked finite");
    let level = vs - vb;
    let m = h.m as i64;
    if level <= 0 || level >= m || m.gcd(&level) != 1 {
        return Err(NewtonError::ShiftOutOfRange { value: level, bound: m, m: h.m });
    }
    let gap = (h.d - h.m) as i64;
    Ok(vec![
        Segment::new(-level, m, h.m),
        Segment::new(-vb, gap, gap as u64),
    ])
}

/// One level of the integer valuation bookkeeping along the tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelValuation {
    pub level: u32,
    /// `m^n`, the ramification index at level `n`.
    pub ramification_index: i128,
    /// `m^n · v((γ_n + x_0)/b)`.
    pub scaled_valuation: i128,
    pub coprime_to_m: bool,
    pub below_bound: bool,
}

/// Runs `N_0 = v_p(x_0/b)`, `N_n = N_{n-1} - m^n v_p(b)` for `levels` levels,
/// checking at each that `0 < N_n < m^{n+1}` and `gcd(N_n, m) = 1`.
pub fn valuation_recursion(m: u64, v_b: i64, start: i64, levels: u32) -> Result<Vec<LevelValuation>, NewtonError> {
    let m = m as i128;
    let mut out = Vec::with_capacity(levels as usize + 1);
    let mut n_val = start as i128;
    let mut m_pow: i128 = 1;
    for level in 0..=levels {
        if level > 0 {
            m_pow = m_pow.checked_mul(m).ok_or(NewtonError::Overflow)?;
            n_val = m_pow
                .checked_mul(v_b as i128)
                .and_then(|t| n_val.checked_sub(t))
                .ok_or(NewtonError::Overflow)?;
        }
        let bound = m_pow.checked_mul(m).ok_or(NewtonError::Overflow)?;
        out.push(LevelValuation {
            level,
            ramification_index: m_pow,
            scaled_valuation: n_val,
            coprime_to_m: n_val.gcd(&m) == 1,
            below_bound: n_val > 0 && n_val < bound,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn hyp(d: u64, m: u64, p: u64, b: BigRational, x0: BigRational) -> LemmaHypotheses {
        LemmaHypotheses { d, m, b, x0, p }
    }

    #[test]
    fn polygon_examples() {
        let f = ExactPoly::new(vec![q(-6, 1), q(0, 1), q(0, 1), q(-3, 2), q(1, 1)]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.points, vec![(0, 1), (3, -1), (4, 0)]);
        assert_eq!(np.segments, vec![Segment::new(-2, 3, 3), Segment::new(1, 1, 1)]);

        let g = ExactPoly::from_ints(&[2, 2, 1]);
        let np = newton_polygon(&g, 2).unwrap();
        assert_eq!(np.segments, vec![Segment::new(-1, 2, 2)]);

        let h = ExactPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(newton_polygon(&h, 3).unwrap().segments, vec![Segment::new(0, 1, 2)]);
    }

    #[test]
    fn polygon_errors() {
        let mono = ExactPoly::from_ints(&[0, 0, 7]);
        assert_eq!(newton_polygon(&mono, 2), Err(NewtonError::Monomial));
        assert_eq!(
            newton_polygon(&ExactPoly::from_ints(&[1, 1]), 6),
            Err(NewtonError::NotPrime(6))
        );
    }

    #[test]
    fn collinear_points_merge() {
        // valuations 3, 2, 1, 0 at 2: all on one line
        let f = ExactPoly::from_ints(&[8, 4, 2, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.segments, vec![Segment::new(-1, 1, 3)]);
    }

    #[test]
    fn polygon_json_shape() {
        let f = ExactPoly::new(vec![q(-6, 1), q(0, 1), q(0, 1), q(-3, 2), q(1, 1)]);
        let np = newton_polygon(&f, 2).unwrap();
        let json = serde_json::to_string(&np).unwrap();
        assert_eq!(
            json,
            r#"{"prime":2,"points":[[0,1],[3,-1],[4,0]],"segments":[[-2,3,3],[1,1,1]]}"#
        );
        let back: NewtonPolygon = serde_json::from_str(&json).unwrap();
        assert_eq!(back, np);
    }

    #[test]
    fn hypothesis_examples() {
        let h = hyp(4, 3, 2, q(3, 2), q(6, 1));
        assert!(h.check().all_hold, "{:?}", h.check());
        assert_eq!(h.v_x0_over_b(), Valuation::Finite(2));

        let bad = hyp(4, 3, 3, q(1, 3), q(1, 1));
        let r = bad.check();
        assert!(!r.all_hold);
        assert_eq!(r.failing(), vec!["v_p(x0) >= 1"]);
    }

    #[test]
    fn degree_five_recipe_violates_the_level_bound() {
        // v_3(x0/b) = 4 is not below m = 3; only that predicate fails.
        let s = construct_specialization(5, 3, 2).unwrap();
        assert_eq!((s.m, s.b.clone(), s.x0.clone()), (3, q(2, 9), q(18, 1)));
        let r = s.hypotheses().check();
        assert_eq!(r.v_x0_over_b, Valuation::Finite(4));
        assert_eq!(r.failing(), vec!["v_p(x0/b) < m"]);
        // the polygon itself still has the two-segment shape
        let np = newton_polygon(&s.f, 3).unwrap();
        assert_eq!(np.segments, vec![Segment::new(-4, 3, 3), Segment::new(1, 1, 2)]);
        assert!(matches!(
            predicted_segments(&s.hypotheses(), Valuation::Finite(2)),
            Err(NewtonError::HypothesesFail(_))
        ));
    }

    #[test]
    fn construct_examples() {
        let s = construct_specialization(4, 2, 3).unwrap();
        assert_eq!((s.m, s.b.clone(), s.x0.clone()), (3, q(3, 2), q(6, 1)));
        assert_eq!(s.f, ExactPoly::new(vec![q(-6, 1), q(0, 1), q(0, 1), q(-3, 2), q(1, 1)]));
        let s = construct_specialization(6, 5, 7).unwrap();
        assert_eq!((s.m, s.b.clone(), s.x0.clone()), (5, q(7, 5), q(35, 1)));
        assert_eq!(construct_specialization(5, 2, 3), Err(NewtonError::OddDegreeWithTwo));
        assert_eq!(construct_specialization(6, 3, 3), Err(NewtonError::SamePrimes));
        assert_eq!(construct_specialization(3, 2, 3), Err(NewtonError::DegreeTooSmall(4)));
    }

    #[test]
    fn audit_even_and_large_odd() {
        for (d, p, q) in [(4, 2, 3), (6, 5, 7), (7, 3, 2), (9, 5, 11)] {
            let s = construct_specialization(d, p, q).unwrap();
            let a = audit_specialization(&s).unwrap();
            assert!(a.hypotheses.all_hold, "{d} {p} {q}: {:?}", a.hypotheses.failing());
            assert!(a.eisenstein_at_q && a.sd_conditions && a.polygon_matches_prediction);
        }
    }

    #[test]
    fn sd_conditions() {
        assert!(check_getting_sd_conditions(4, 3));
        assert!(check_getting_sd_conditions(6, 5));
        assert!(!check_getting_sd_conditions(6, 3));
        assert!(!check_getting_sd_conditions(2, 1));
    }

    #[test]
    fn predicted_examples() {
        let h = hyp(4, 3, 2, q(3, 2), q(6, 1));
        assert_eq!(
            predicted_segments(&h, h.v_x0()).unwrap(),
            vec![Segment::new(-2, 3, 3), Segment::new(1, 1, 1)]
        );
        // γ = -x0 would put γ + x0 = 0
        assert_eq!(predicted_segments(&h, Valuation::Infinity), Err(NewtonError::InfiniteShift));
        // huge v_p(γ + x0) pushes the level valuation past m
        assert!(matches!(
            predicted_segments(&h, Valuation::Finite(40)),
            Err(NewtonError::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn recursion_bookkeeping() {
        // m = 3, v(b) = -1, N0 = 2: 2, 2+3 = 5, 5+9 = 14, 14+27 = 41
        let lv = valuation_recursion(3, -1, 2, 3).unwrap();
        let ns: Vec<i128> = lv.iter().map(|l| l.scaled_valuation).collect();
        assert_eq!(ns, vec![2, 5, 14, 41]);
        assert!(lv.iter().all(|l| l.coprime_to_m && l.below_bound));
        assert_eq!(lv[3].ramification_index, 27);
        // m = 5, v(b) = -2, N0 = 4
        let lv = valuation_recursion(5, -2, 4, 6).unwrap();
        assert!(lv.iter().all(|l| l.coprime_to_m && l.below_bound));
        assert_eq!(valuation_recursion(1000, -1, 1, 20), Err(NewtonError::Overflow));
    }

    #[test]
    fn m_segment_slope_is_reduced_over_m() {
        for (d, p, q) in [(4u64, 2u64, 3u64), (6, 3, 5), (8, 7, 2), (7, 5, 3), (9, 3, 7)] {
            let s = construct_specialization(d, p, q).unwrap();
            let h = s.hypotheses();
            let seg = predicted_segments(&h, h.v_x0()).unwrap()[0];
            assert_eq!(*seg.slope.denom(), s.m as i64);
            assert_eq!(seg.slope.numer().gcd(&(s.m as i64)), 1);
        }
    }
}
