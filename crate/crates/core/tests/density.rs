mod common;

use common::naive_orbit;
use critorbit::density::{
    assemble_density, attracting_density_scan, bound_consistency_check, chebotarev_scan, find_common_good_prime,
    partial_density_scan, CommonPrime, PrimeStatus, ScanTarget,
};
use critorbit::ExactPoly;

fn poly(c: &[i64]) -> ExactPoly {
    ExactPoly::from_ints(c)
}

#[test]
fn partition_invariants_for_x2_plus_x() {
    let f = poly(&[0, 1, 1]);
    let s = attracting_density_scan(&f, 10_000, 2, Some(4)).unwrap();
    let r = &s.report;
    assert_eq!(r.primes_scanned, 1229);
    assert_eq!(r.primes_scanned, r.good_count + r.bad_reduction_count + r.wild_excluded_count);
    assert!(r.attracting_count <= r.good_count);
    let d = r.density_estimate.unwrap();
    assert!((0.0..=1.0).contains(&d));
    let per_class: u64 = r.residue_classes.iter().map(|c| c.primes).sum();
    assert_eq!(per_class, r.primes_scanned);
    let attracting: u64 = r.residue_classes.iter().map(|c| c.attracting).sum();
    assert_eq!(attracting, r.attracting_count);
}

#[test]
fn scans_do_not_depend_on_partitioning() {
    let f = poly(&[5, 0, 0, 1]);
    let target = ScanTarget::new(&f).unwrap();
    let whole = attracting_density_scan(&f, 20_000, 1, Some(3)).unwrap();
    let pieces = [(0, 1000), (1001, 7777), (7778, 20_000)];
    let merged = pieces
        .iter()
        .rev()
        .map(|&(lo, hi)| partial_density_scan(&target, lo, hi))
        .reduce(|a, b| a.merge(b))
        .unwrap();
    let assembled = assemble_density(&target, 20_000, Some(3), merged).unwrap();
    assert_eq!(assembled.records, whole.records);
    assert_eq!(
        serde_json::to_string(&assembled.report).unwrap(),
        serde_json::to_string(&whole.report).unwrap()
    );
}

#[test]
fn worker_count_does_not_change_output() {
    let f = poly(&[1, 0, 1]);
    let one = attracting_density_scan(&f, 30_000, 1, Some(4)).unwrap();
    let many = attracting_density_scan(&f, 30_000, 3, Some(4)).unwrap();
    assert_eq!(one.records_csv(), many.records_csv());
    let c1 = chebotarev_scan(&f, 2, 30_000, 1).unwrap();
    let c3 = chebotarev_scan(&f, 2, 30_000, 3).unwrap();
    assert_eq!(c1.records_csv(), c3.records_csv());
}

#[test]
fn records_agree_with_naive_orbits() {
    let coeffs = [5i64, 0, 0, 1];
    let s = attracting_density_scan(&poly(&coeffs), 3000, 1, None).unwrap();
    for r in s.records.iter().filter(|r| r.status == PrimeStatus::Good) {
        let v = r.verdict.unwrap();
        assert_eq!((v.tail_length, v.cycle_length), naive_orbit(&coeffs, r.prime, 0));
        assert_eq!(r.attracting, v.tail_length == 0);
    }
}

#[test]
fn common_primes_reverify() {
    let maps = [vec![1i64, 0, 1], vec![5, 0, 0, 1]];
    let exact: Vec<ExactPoly> = maps.iter().map(|c| poly(c)).collect();
    let CommonPrime::Found { prime, .. } = find_common_good_prime(&exact, 1000).unwrap() else {
        panic!("no prime found");
    };
    for (c, f) in maps.iter().zip(&exact) {
        assert_ne!(f.degree() as u64 % prime, 0);
        // the only critical point is 0
        let (tail, _) = naive_orbit(c, prime, 0);
        assert!(tail > 0);
    }
    // no smaller prime qualifies
    for p in critorbit::modp::sieve_primes(prime - 1) {
        let bad = maps.iter().any(|c| (c.len() as u64 - 1).is_multiple_of(p) || naive_orbit(c, p, 0).0 == 0);
        assert!(bad, "{p} also qualifies");
    }
}

#[test]
fn bound_consistency_examples() {
    let cubic = poly(&[5, 0, 0, 1]);
    let d = attracting_density_scan(&cubic, 100_000, 1, None).unwrap();
    let c = chebotarev_scan(&cubic, 1, 100_000, 1).unwrap();
    assert!(bound_consistency_check(&d.report, &c.report));
    let r = c.report.root_frequency.unwrap();
    assert!((r - 2.0 / 3.0).abs() < 0.02, "{r}");

    let quad = poly(&[1, 0, 1]);
    let d = attracting_density_scan(&quad, 100_000, 1, None).unwrap();
    let c = chebotarev_scan(&quad, 3, 100_000, 1).unwrap();
    assert!(bound_consistency_check(&d.report, &c.report));

    let sq = poly(&[0, 0, 1]);
    let d = attracting_density_scan(&sq, 10_000, 1, None).unwrap();
    let c = chebotarev_scan(&sq, 0, 10_000, 1).unwrap();
    assert!(bound_consistency_check(&d.report, &c.report));
}
