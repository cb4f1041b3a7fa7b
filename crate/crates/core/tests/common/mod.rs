//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use critorbit::ExactPoly;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn integer_coeffs(f: &ExactPoly) -> (Vec<BigInt>, BigInt) {
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    (ints, den)
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(f: &ExactPoly, g: &ExactPoly) -> BigRational {
    let (m, n) = (f.degree(), g.degree());
    let (fi, fd) = integer_coeffs(f);
    let (gi, gd) = integer_coeffs(g);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in fi.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in gi.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    let det = bareiss_det(mat);
    // Res(f, g) = Res(fd f, gd g) / (fd^n gd^m)
    let scale = num_traits::pow(fd, n) * num_traits::pow(gd, m);
    BigRational::new(det, scale)
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)` through the Sylvester matrix.
pub fn sylvester_discriminant(f: &ExactPoly) -> BigRational {
    let n = f.degree();
    let r = sylvester_resultant(f, &f.derivative()) / f.leading();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// `|a| == |b|`.
pub fn abs_eq(a: &BigRational, b: &BigRational) -> bool {
    a.abs() == b.abs()
}

/// Monic `f` with `f' = d ∏ (x - b_i)` and `f(0) = t`.
pub fn poly_from_critical_points(points: &[BigRational], t: BigRational) -> ExactPoly {
    let d = points.len() + 1;
    let mut deriv = vec![BigRational::from_integer(d.into())];
    for b in points {
        let mut next = vec![BigRational::zero(); deriv.len() + 1];
        for (i, c) in deriv.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * b;
        }
        deriv = next;
    }
    let mut coeffs = vec![t];
    for (i, c) in deriv.iter().enumerate() {
        coeffs.push(c / BigRational::from_integer((i + 1).into()));
    }
    ExactPoly::new(coeffs)
}

/// Naive tail/cycle of the orbit of `start` under the integer polynomial
/// `coeffs` (constant first) mod `p`, remembering every visited point.
pub fn naive_orbit(coeffs: &[i64], p: u64, start: u64) -> (u64, u64) {
    let eval = |x: u64| {
        coeffs.iter().rev().fold(0u128, |acc, &c| {
            let c = c.rem_euclid(p as i64) as u128;
            (acc * x as u128 + c) % p as u128
        }) as u64
    };
    let mut seen = HashMap::new();
    let mut x = start % p;
    let mut step = 0u64;
    loop {
        if let Some(&first) = seen.get(&x) {
            return (first, step - first);
        }
        seen.insert(x, step);
        x = eval(x);
        step += 1;
    }
}

/// Dense polynomials over `F_p` (constant first, trimmed), by schoolbook
/// arithmetic.
pub mod fp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        (1..p).find(|&b| a * b % p == 1).expect("nonzero residue")
    }

    /// `Some(quotient)` when `b` divides `a`.
    pub fn divide(a: &[u64], b: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        if a.len() < b.len() {
            return None;
        }
        let lead_inv = inv(b[db], p);
        let mut quot = vec![0u64; a.len() - db];
        for i in (0..quot.len()).rev() {
            let c = r[i + db] * lead_inv % p;
            quot[i] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - c * bj % p) % p;
            }
        }
        trim(r).is_empty().then_some(quot)
    }

    /// Monic polynomials of exact degree `k`.
    pub fn monics(k: usize, p: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let count = p.pow(k as u32);
        for mut n in 0..count {
            let mut c = Vec::with_capacity(k + 1);
            for _ in 0..k {
                c.push(n % p);
                n /= p;
            }
            c.push(1);
            out.push(c);
        }
        out
    }

    /// Sorted `(degree, multiplicity)` list of irreducible factors, by
    /// trial division with monic polynomials of increasing degree. Valid for
    /// degree at most 7.
    pub fn trial_factor(f: &[u64], p: u64) -> Vec<(usize, usize)> {
        let mut rest = trim(f.to_vec());
        assert!(rest.len() - 1 <= 7);
        let mut out = Vec::new();
        for k in 1..=3 {
            for g in monics(k, p) {
                let mut mult = 0;
                while let Some(qt) = divide(&rest, &g, p) {
                    rest = qt;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((k, mult));
                }
            }
        }
        if rest.len() > 1 {
            // nothing of degree <= 3 divides it and its degree is <= 7
            out.push((rest.len() - 1, 1));
        }
        out.sort_unstable();
        out
    }

    pub fn brute_has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
    }
}

/// Fixed-leaf statistics of `[S_d]^n` by listing every element: one
/// permutation per internal node of the depth-`n` `d`-ary tree, all
/// combinations. Returns `(elements with a fixed leaf, total elements)`.
pub fn enumerate_wreath(d: usize, n: u32) -> (u64, u64) {
    let perms = permutations(d);
    let internal: usize = (0..n).map(|k| d.pow(k)).sum();
    let total = (perms.len() as u64).pow(internal as u32);
    let mut choice = vec![0usize; internal];
    let mut with_fixed = 0u64;
    for _ in 0..total {
        if has_fixed_leaf(&choice, &perms, d, n) {
            with_fixed += 1;
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < perms.len() {
                break;
            }
            *c = 0;
        }
    }
    (with_fixed, total)
}

/// Internal nodes are numbered level by level; node `i` at one level has
/// children `d*i + 1 .. d*i + d` in the next.
fn has_fixed_leaf(choice: &[usize], perms: &[Vec<usize>], d: usize, n: u32) -> bool {
    let leaves = d.pow(n);
    (0..leaves).any(|leaf| {
        // address of the leaf: digits from the root down
        let mut digits = Vec::with_capacity(n as usize);
        let mut l = leaf;
        for _ in 0..n {
            digits.push(l % d);
            l /= d;
        }
        digits.reverse();
        let mut node = 0usize;
        for &digit in &digits {
            if perms[choice[node]][digit] != digit {
                return false;
            }
            node = d * node + digit + 1;
        }
        true
    })
}

pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for smaller in permutations(d - 1) {
        for pos in 0..=smaller.len() {
            let mut p = smaller.clone();
            p.insert(pos, d - 1);
            out.push(p);
        }
    }
    out
}
