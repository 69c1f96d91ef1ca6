#![allow(dead_code)]

//! Shared test oracles, independent of the implementation paths they check.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Naive O(N^2) q-expansion of Delta: multiply out q prod (1 - q^n)^24 by
/// direct truncated polynomial multiplication. Returns tau(1..=n_max).
pub fn naive_tau(n_max: usize) -> Vec<BigInt> {
    assert!(n_max >= 1);
    let deg = n_max - 1;
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); deg + 1];
    acc[0] = BigInt::one();
    for n in 1..=deg {
        for _ in 0..24 {
            // acc *= (1 - q^n): descending targets keep sources unmodified
            for i in (0..=deg - n).rev() {
                let t = acc[i].clone();
                acc[i + n] -= t;
            }
        }
    }
    acc // tau(k+1) = acc[k]
}

/// Exhaustive point count of y^2 = x^3 + ax + b over F_p, including the
/// point at infinity. O(p^2), for small p only.
pub fn brute_force_ec_points(a: i64, b: i64, p: u64) -> u64 {
    let pm = p as i128;
    let am = (a as i128).rem_euclid(pm);
    let bm = (b as i128).rem_euclid(pm);
    let mut count = 1u64; // infinity
    for x in 0..pm {
        for y in 0..pm {
            if (y * y - (x * x * x + am * x + bm)).rem_euclid(pm) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Brute-force #{n <= x : every prime factor of n is in `members`} by
/// direct factorization of each n.
pub fn brute_force_nf(members: &[u64], x: u64) -> u64 {
    let mut count = 0u64;
    'outer: for n in 1..=x {
        let mut m = n;
        let mut d = 2u64;
        while d * d <= m {
            if m % d == 0 {
                if !members.contains(&d) {
                    continue 'outer;
                }
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 && !members.contains(&m) {
            continue 'outer;
        }
        count += 1;
    }
    count
}

/// Sato-Tate measure of { theta : |2 cos theta| >= t } by Simpson
/// integration of the density (2/pi) sin^2(theta).
pub fn sato_tate_tail(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 2.0 {
        return 0.0;
    }
    // complement: P(|cos theta| < t/2) over theta in (acos(t/2), pi - acos(t/2))
    let a = (t / 2.0).acos();
    let b = std::f64::consts::PI - a;
    let f = |x: f64| 2.0 / std::f64::consts::PI * x.sin().powi(2);
    let n = 2000;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    1.0 - s * h / 3.0
}
