/// Primes `<= bound` in ascending order (empty for `bound < 2`).
pub fn sieve_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    // odd-only sieve: index i stands for 2i + 1
    let n = ((bound - 1) / 2 + 1) as usize;
    let mut composite = vec![false; n];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= bound as usize {
        if !composite[i] {
            let step = 2 * i + 1;
            let mut j = (step * step) / 2;
            while j < n {
                composite[j] = true;
                j += step;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_count(bound));
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !**c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    out
}

fn estimate_count(bound: u64) -> usize {
    let x = bound as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2), vec![2]);
        assert_eq!(sieve_primes(3), vec![2, 3]);
        assert!(sieve_primes(1).is_empty());
        assert!(sieve_primes(0).is_empty());
        assert_eq!(sieve_primes(49).last(), Some(&47));
    }

    #[test]
    fn agrees_with_primality_test() {
        let ps = sieve_primes(20_000);
        let brute: Vec<u64> = (2..=20_000).filter(|&n| primal::is_prime(n)).collect();
        assert_eq!(ps, brute);
    }
}
