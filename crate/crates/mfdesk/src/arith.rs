//! Integer utilities: deterministic primality testing, factorization,
//! sieves, and the standard arithmetic functions d(n), omega(n), rad(n), v_p(n).

use crate::error::{Error, Result};

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin witnesses proving primality for all n < 3.3 * 10^24,
/// which covers u64. Deterministic by construction.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality check.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes <= x by sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let x = x as usize;
    let mut composite = vec![false; x + 1];
    let mut primes = Vec::new();
    for n in 2..=x {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m <= x {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

/// Smallest-prime-factor sieve for 0..=x; spf[0] = spf[1] = 0.
pub fn spf_sieve(x: usize) -> Vec<u32> {
    let mut spf = vec![0u32; x + 1];
    for n in 2..=x {
        if spf[n] == 0 {
            let mut m = n;
            while m <= x {
                if spf[m] == 0 {
                    spf[m] = n as u32;
                }
                m += n;
            }
        }
    }
    spf
}

/// Factor n <= x using a precomputed spf table. Sorted by prime.
pub fn factor_with_spf(mut n: usize, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut v = 0u32;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        out.push((p as u64, v));
    }
    out
}

/// Brent's variant of Pollard rho with batched gcd. Deterministic for a
/// fixed polynomial offset c; returns a nontrivial factor or None.
fn pollard_brent(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            if *budget < steps {
                *budget = 0;
                return None;
            }
            *budget -= steps;
            g = gcd(q, n);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        // backtrack one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
        }
    }
    if g != n && g > 1 {
        Some(g)
    } else {
        None
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor n into (prime, exponent) pairs, sorted by prime. Trial division by
/// small primes, then deterministic Pollard-Brent with a bounded effort;
/// exceeding the budget raises a resource error.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("factorize: n must be >= 1".into()));
    }
    let mut n = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut v = 0;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
            out.push((p, v));
        }
    }
    // wheel over 7, 11, 13, ... up to 2^16
    let mut p = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut si = 0;
    while p <= 1 << 16 && p * p <= n {
        if n % p == 0 {
            let mut v = 0;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
            out.push((p, v));
        }
        p += steps[si];
        si = (si + 1) % steps.len();
    }
    // remaining cofactor: prime, prime square, or split by rho
    let mut stack = vec![n];
    let mut budget: u64 = 50_000_000;
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some((_, v)) => *v += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let sq = m.isqrt();
        if sq * sq == m {
            stack.push(sq);
            stack.push(sq);
            continue;
        }
        let mut split = None;
        for c in 1..64 {
            if let Some(d) = pollard_brent(m, c, &mut budget) {
                split = Some(d);
                break;
            }
            if budget == 0 {
                break;
            }
        }
        match split {
            Some(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            None => {
                return Err(Error::Resource(format!(
                    "factorization effort exhausted on cofactor {m}"
                )))
            }
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    // merge duplicates produced by the stack path
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
    for (p, v) in out {
        match merged.last_mut() {
            Some((q, w)) if *q == p => *w += v,
            _ => merged.push((p, v)),
        }
    }
    Ok(merged)
}

/// d(n), the number of divisors.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(_, v)| v as u64 + 1).product())
}

/// omega(n), the number of distinct prime divisors.
pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.len() as u32)
}

/// rad(n), the product of the distinct prime divisors; rad(1) = 1.
pub fn radical(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(p, _)| p).product())
}

/// v_p(n), the exponent of the prime p in n.
pub fn p_adic_val(p: u64, n: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("p_adic_val: {p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Domain("p_adic_val: n must be >= 1".into()));
    }
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_carmichael() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
        // Carmichael numbers must be rejected
        for c in [561u64, 1105, 1729, 41041, 825265] {
            assert!(!is_prime(c), "{c} is Carmichael, not prime");
        }
        assert!(is_prime(2u64.pow(61) - 1)); // Mersenne prime
        assert!(!is_prime(2u64.pow(63) - 1));
    }

    #[test]
    fn sieve_matches_is_prime() {
        let sieved = primes_up_to(10_000);
        let direct: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, direct);
        assert_eq!(sieved.len(), 1229);
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1u64..=2000 {
            let f = factorize(n).unwrap();
            let back: u64 = f.iter().map(|&(p, v)| p.pow(v)).product();
            assert_eq!(back, n);
            for &(p, _) in &f {
                assert!(is_prime(p));
            }
        }
        // 64-bit semiprime exercises the rho path
        let n = 1_000_000_007u64 * 998_244_353;
        let f = factorize(n).unwrap();
        assert_eq!(f, vec![(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(divisor_count(1_000_000).unwrap(), 49);
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(radical(1).unwrap(), 1);
        assert_eq!(radical(12).unwrap(), 6);
        assert_eq!(omega(12).unwrap(), 2);
        assert_eq!(p_adic_val(2, 12).unwrap(), 2);
        assert_eq!(p_adic_val(2, 30030).unwrap(), 1);
        assert_eq!(omega(30030).unwrap(), 6);
        assert!(matches!(p_adic_val(4, 12), Err(Error::Domain(_))));
    }

    #[test]
    fn spf_agrees_with_factorize() {
        let spf = spf_sieve(5000);
        for n in 2..=5000usize {
            assert_eq!(factor_with_spf(n, &spf), factorize(n as u64).unwrap());
        }
    }
}
