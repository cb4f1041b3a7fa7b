use serde::Serialize;

use super::ModPoly;

/// Tail/cycle decomposition of the forward orbit of a point under `f mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitVerdict {
    pub prime: u64,
    /// The starting point lies on its own cycle (`tail_length == 0`).
    pub critical_point_periodic: bool,
    pub tail_length: u64,
    pub cycle_length: u64,
    pub which_critical_point: usize,
}

impl OrbitVerdict {
    pub fn for_critical_point(mut self, index: usize) -> Self {
        self.which_critical_point = index;
        self
    }
}

/// `x mod p` for `x < 2p`, without a data-dependent branch.
#[inline]
fn sub_once(x: u64, p: u64) -> u64 {
    x.min(x.wrapping_sub(p))
}

/// Horner evaluation of a polynomial over `F_p`, with Barrett reduction
/// when `p < 2^31`.
#[derive(Debug, Clone)]
pub(crate) struct OrbitMap {
    p: u64,
    barrett: Option<u64>,
    lead: u64,
    rest: Vec<u64>,
}

impl OrbitMap {
    pub(crate) fn new(f: &ModPoly) -> Self {
        let p = f.prime();
        let mut coeffs = f.coeffs().to_vec();
        let lead = coeffs.pop().unwrap_or(0);
        coeffs.reverse();
        OrbitMap {
            p,
            barrett: (p < 1 << 31).then(|| u64::MAX / p),
            lead,
            rest: coeffs,
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        match self.barrett {
            Some(m) => {
                let t = a * b;
                let q = ((t as u128 * m as u128) >> 64) as u64;
                sub_once(t - q * self.p, self.p)
            }
            None => ((a as u128 * b as u128) % self.p as u128) as u64,
        }
    }

    #[inline]
    pub(crate) fn eval(&self, x: u64) -> u64 {
        let (mut acc, rest) = match self.rest.split_first() {
            // monic: skip the multiplication by 1
            Some((&c, rest)) if self.lead == 1 => {
                (sub_once(x + c, self.p), rest)
            }
            _ => (self.lead, &self.rest[..]),
        };
        for &c in rest {
            acc = sub_once(self.mul(acc, x) + c, self.p);
        }
        acc
    }
}

/// Brent cycle detection as a resumable machine, one map evaluation per
/// step. Phase one stops early when the orbit returns to its start.
#[derive(Debug, Clone)]
struct Brent {
    x0: u64,
    phase: Phase,
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    Search { power: u64, lam: u64, steps: u64, tortoise: u64, hare: u64 },
    Lead { lam: u64, left: u64, hare: u64 },
    Meet { lam: u64, mu: u64, tortoise: u64, hare: u64 },
}

impl Brent {
    fn new(map: &OrbitMap, start: u64) -> Self {
        let x0 = start % map.p;
        Brent {
            x0,
            phase: Phase::Search { power: 1, lam: 1, steps: 1, tortoise: x0, hare: map.eval(x0) },
        }
    }

    /// Advances one step; `Some((tail, cycle))` once finished.
    #[inline]
    fn step(&mut self, map: &OrbitMap) -> Option<(u64, u64)> {
        match &mut self.phase {
            Phase::Search { power, lam, steps, tortoise, hare } => {
                if *hare == self.x0 {
                    return Some((0, *steps));
                }
                if *hare == *tortoise {
                    self.phase = Phase::Lead { lam: *lam, left: *lam, hare: self.x0 };
                    return None;
                }
                if *power == *lam {
                    *tortoise = *hare;
                    *power *= 2;
                    *lam = 0;
                }
                *hare = map.eval(*hare);
                *lam += 1;
                *steps += 1;
            }
            Phase::Lead { lam, left, hare } => {
                if *left == 0 {
                    self.phase = Phase::Meet { lam: *lam, mu: 0, tortoise: self.x0, hare: *hare };
                } else {
                    *hare = map.eval(*hare);
                    *left -= 1;
                }
            }
            Phase::Meet { lam, mu, tortoise, hare } => {
                if *tortoise == *hare {
                    return Some((*mu, *lam));
                }
                *tortoise = map.eval(*tortoise);
                *hare = map.eval(*hare);
                *mu += 1;
            }
        }
        None
    }
}

fn verdict(p: u64, (tail, cycle): (u64, u64)) -> OrbitVerdict {
    OrbitVerdict {
        prime: p,
        critical_point_periodic: tail == 0,
        tail_length: tail,
        cycle_length: cycle,
        which_critical_point: 0,
    }
}

/// Tail and cycle length of the orbit of `start` under `f`.
pub fn critical_orbit_verdict(f: &ModPoly, start: u64) -> OrbitVerdict {
    let map = OrbitMap::new(f);
    let mut brent = Brent::new(&map, start);
    loop {
        if let Some(done) = brent.step(&map) {
            return verdict(f.prime(), done);
        }
    }
}

const LANES: usize = 8;

/// [`critical_orbit_verdict`] for many `(map, start)` pairs, advancing
/// several independent orbits in lock-step. Results follow input order.
pub fn critical_orbit_verdicts(jobs: &[(&ModPoly, u64)]) -> Vec<OrbitVerdict> {
    struct Lane {
        job: usize,
        map: OrbitMap,
        brent: Brent,
    }
    let start = |job: usize| {
        let map = OrbitMap::new(jobs[job].0);
        let brent = Brent::new(&map, jobs[job].1);
        Lane { job, map, brent }
    };
    let mut out: Vec<Option<OrbitVerdict>> = vec![None; jobs.len()];
    let mut next = LANES.min(jobs.len());
    let mut lanes: Vec<Lane> = (0..next).map(start).collect();
    while !lanes.is_empty() {
        let mut i = 0;
        while i < lanes.len() {
            let lane = &mut lanes[i];
            if let Some(done) = lane.brent.step(&lane.map) {
                out[lane.job] = Some(verdict(lane.map.p, done));
                if next < jobs.len() {
                    lanes[i] = start(next);
                    next += 1;
                } else {
                    lanes.swap_remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
    out.into_iter().map(|v| v.expect("every job finishes")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(p: u64, c: &[i64], start: u64) -> OrbitVerdict {
        critical_orbit_verdict(&ModPoly::from_i64(p, c).unwrap(), start)
    }

    #[test]
    fn worked_orbits() {
        let v = verdict(2, &[5, 0, 0, 1], 0);
        assert!(v.critical_point_periodic);
        assert_eq!((v.tail_length, v.cycle_length), (0, 2));

        let v = verdict(5, &[1, 0, 1], 0);
        assert!(v.critical_point_periodic);
        assert_eq!((v.tail_length, v.cycle_length), (0, 3));

        // 0 -> 1 -> 2 -> 5 -> 5
        let v = verdict(7, &[1, 0, 1], 0);
        assert!(!v.critical_point_periodic);
        assert_eq!((v.tail_length, v.cycle_length), (3, 1));
    }

    #[test]
    fn constant_map() {
        let v = verdict(11, &[4], 3);
        assert_eq!((v.tail_length, v.cycle_length), (1, 1));
        let v = verdict(11, &[4], 4);
        assert!(v.critical_point_periodic);
    }

    #[test]
    fn fast_eval_matches_generic() {
        for p in [2u64, 3, 65_521, 4_294_967_291, 9_223_372_036_854_775_783] {
            for c in [&[5i64, 0, 0, 1][..], &[3, -7, 2], &[1, 4, 0, 0, 6, 1], &[9]] {
                let f = ModPoly::from_i64(p, c).unwrap();
                let m = OrbitMap::new(&f);
                for x in [0, 1, 2, p / 3, p - 1] {
                    assert_eq!(m.eval(x), f.eval(x));
                }
            }
        }
    }

    #[test]
    fn batch_matches_single() {
        let polys: Vec<ModPoly> = [3u64, 7, 31, 101, 997, 65_537, 2_147_483_659]
            .iter()
            .map(|&p| ModPoly::from_i64(p, &[5, 0, 0, 1]).unwrap())
            .collect();
        let jobs: Vec<(&ModPoly, u64)> = polys.iter().flat_map(|f| [(f, 0), (f, 1), (f, 2)]).collect();
        let batch = critical_orbit_verdicts(&jobs);
        for ((f, s), v) in jobs.iter().zip(&batch) {
            assert_eq!(*v, critical_orbit_verdict(f, *s));
        }
        assert!(critical_orbit_verdicts(&[]).is_empty());
    }

    #[test]
    fn reconstructs_orbit() {
        for p in [3u64, 7, 31, 101, 997] {
            let f = ModPoly::from_i64(p, &[3, 1, 1]).unwrap();
            for start in [0, 1, p / 2] {
                let v = critical_orbit_verdict(&f, start);
                assert!(v.tail_length + v.cycle_length <= p);
                let iter = |mut x: u64, n: u64| {
                    for _ in 0..n {
                        x = f.eval(x);
                    }
                    x
                };
                let t = iter(start, v.tail_length);
                assert_eq!(iter(t, v.cycle_length), t);
                // the cycle length is minimal
                for c in 1..v.cycle_length {
                    assert_ne!(iter(t, c), t);
                }
            }
        }
    }
}
