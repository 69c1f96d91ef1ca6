//! Integer polynomials: exact evaluation, Sturm-sequence real-root
//! isolation, and certified Mahler-measure enclosures.
//!
//! The Mahler enclosure uses Graeffe root-squaring with the Landau and
//! binomial norm inequalities,
//!
//!   ||g||_2 / sqrt(C(2d,d)) <= M(g) <= ||g||_2,      M(G(g)) = M(g)^2,
//!
//! so after k squarings M(f) is bracketed by 2^(k+1)-th roots of exact
//! integers. Both endpoints are extracted as dyadic rationals by repeated
//! certified integer square roots; no floating-point root finder enters the
//! certificate.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An integer polynomial a_0 + a_1 x + ... + a_d x^d with a_d != 0.
///
/// `irreducibility_required` records whether the caller claims the
/// polynomial is the minimal polynomial of its roots; construction then
/// insists on content 1. The Liouville machinery itself is valid for any
/// integer polynomial that does not vanish at the rational being tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    coeffs: Vec<BigInt>,
    irreducibility_required: bool,
}

impl MinimalPolynomial {
    /// Strict constructor: degree >= 1, a_d != 0, content 1.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let p = Self::new_allow_reducible(coeffs)?;
        let content = p
            .coeffs
            .iter()
            .fold(BigUint::zero(), |g, c| g.gcd(c.magnitude()));
        if !content.is_one() {
            return Err(Error::Invalid(format!(
                "polynomial content {content} > 1; use new_allow_reducible if irreducibility is not required"
            )));
        }
        Ok(MinimalPolynomial {
            irreducibility_required: true,
            ..p
        })
    }

    /// Constructor that does not assert irreducibility (content may be > 1).
    pub fn new_allow_reducible(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Degree("polynomial degree must be >= 1".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::Invalid("leading coefficient must be nonzero".into()));
        }
        Ok(MinimalPolynomial {
            coeffs,
            irreducibility_required: false,
        })
    }

    /// Ascending coefficients from i64 values.
    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new_allow_reducible(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn irreducibility_required(&self) -> bool {
        self.irreducibility_required
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Sign of f(x) at a rational point, via the exact integer
    /// q^d f(p/q) (no rational normalization in the loop).
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let d = self.degree();
        let p = x.numer();
        let q = x.denom();
        let mut q_pows = Vec::with_capacity(d + 1);
        q_pows.push(BigInt::one());
        for i in 1..=d {
            q_pows.push(&q_pows[i - 1] * q);
        }
        let mut acc = BigInt::zero();
        let mut p_pow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &p_pow * &q_pows[d - i];
            p_pow *= p;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn derivative(&self) -> MinimalPolynomial {
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        MinimalPolynomial {
            coeffs,
            irreducibility_required: false,
        }
    }

    /// All rational roots, by the rational-root theorem. Divisor enumeration
    /// of huge coefficients is capped, so this is exhaustive only for the
    /// modest coefficients this crate works with.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.coeffs[0].is_zero() {
            let mut nz = 0;
            while self.coeffs[nz].is_zero() {
                nz += 1;
            }
            let mut roots = if self.coeffs.len() - nz >= 2 {
                MinimalPolynomial {
                    coeffs: self.coeffs[nz..].to_vec(),
                    irreducibility_required: false,
                }
                .rational_roots()
            } else {
                Vec::new()
            };
            roots.push(BigRational::zero());
            roots.sort();
            roots.dedup();
            return roots;
        }
        let mut roots = Vec::new();
        for pn in divisors(self.coeffs[0].magnitude()) {
            for qn in divisors(self.leading().magnitude()) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(
                        BigInt::from(sign) * BigInt::from(pn.clone()),
                        BigInt::from(qn.clone()),
                    );
                    if self.sign_at(&cand) == 0 {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }

    /// Cauchy bound B with every root |alpha| < B.
    pub fn root_bound(&self) -> BigRational {
        let ad = BigRational::from(self.leading().abs());
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.degree()] {
            let r = BigRational::from(c.abs()) / &ad;
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }

    fn sturm_chain(&self) -> Vec<Vec<BigRational>> {
        let to_q = |p: &MinimalPolynomial| -> Vec<BigRational> {
            p.coeffs.iter().map(|c| BigRational::from(c.clone())).collect()
        };
        let mut chain = vec![to_q(self), to_q(&self.derivative())];
        loop {
            let n = chain.len();
            let r = qpoly_rem(&chain[n - 2], &chain[n - 1]);
            if r.iter().all(|c| c.is_zero()) {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        chain
    }

    /// Number of distinct real roots in (lo, hi]. Endpoints must not be
    /// roots of the polynomial; callers arrange that.
    pub fn count_roots_between(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let chain = self.sturm_chain();
        sign_variations(&chain, lo) - sign_variations(&chain, hi)
    }

    /// Isolating intervals (lo, hi) for every distinct real root, sorted
    /// ascending. Rational roots come out as degenerate [r, r] intervals.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        let chain = self.sturm_chain();
        let b = self.root_bound();
        let lo = -b.clone();
        let total = sign_variations(&chain, &lo) - sign_variations(&chain, &b);
        let mut out = Vec::new();
        if total == 0 {
            return out;
        }
        let two = BigRational::from(BigInt::from(2));
        let mut stack = vec![(lo, b, total)];
        while let Some((lo, hi, count)) = stack.pop() {
            match count {
                0 => continue,
                1 => {
                    out.push((lo, hi));
                    continue;
                }
                _ => {}
            }
            let mid = (&lo + &hi) / &two;
            if self.sign_at(&mid) == 0 {
                // exact rational root at the midpoint: emit it, then carve an
                // exclusion window small enough to separate the neighbors
                out.push((mid.clone(), mid.clone()));
                let mut w = (&hi - &lo) / BigRational::from(BigInt::from(1u64 << 20));
                loop {
                    let lh = &mid - &w;
                    let rl = &mid + &w;
                    if self.sign_at(&lh) != 0
                        && self.sign_at(&rl) != 0
                        && self.count_roots_between(&lh, &rl) == 1
                    {
                        let lc = sign_variations(&chain, &lo) - sign_variations(&chain, &lh);
                        let rc = sign_variations(&chain, &rl) - sign_variations(&chain, &hi);
                        stack.push((lo, lh, lc));
                        stack.push((rl, hi, rc));
                        break;
                    }
                    w = w / &two;
                }
                continue;
            }
            let lc = sign_variations(&chain, &lo) - sign_variations(&chain, &mid);
            stack.push((lo, mid.clone(), lc));
            stack.push((mid, hi, count - lc));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Certified enclosure of the Mahler measure |a_d| prod max(1, |alpha_i|).
    ///
    /// `bits` steers the target relative width 2^(-min(bits/16, 16)),
    /// subject to the Graeffe iteration cap (coefficient size doubles per
    /// step). Enclosures computed at higher `bits` are nested inside those
    /// at lower `bits`.
    pub fn mahler_interval(&self, bits: usize) -> Result<MahlerInterval> {
        // strip zero roots: they contribute max(1, 0) = 1
        let mut z = 0;
        while self.coeffs[z].is_zero() {
            z += 1;
        }
        let stripped = &self.coeffs[z..];
        if stripped.len() == 1 {
            let m = BigRational::from(stripped[0].abs());
            return Ok(MahlerInterval { lo: m.clone(), hi: m });
        }
        let d = stripped.len() - 1;
        let c2d = binomial(2 * d as u64, d as u64);
        // target relative width 2^-t needs roughly k = log2(ln C) + t steps
        let t = (bits / 16).clamp(2, 16) as f64;
        let lc = (d as f64 * 4f64.ln()).max(1.0);
        let k_max = ((lc.log2() + t).ceil() as u32 + 1).clamp(3, 16);

        let mut cur: Vec<BigInt> = stripped.to_vec();
        let mut best_lo = BigRational::zero();
        let mut best_hi: Option<BigRational> = None;
        const SCALE_BITS: u64 = 96;
        for k in 0..=k_max {
            if k > 0 {
                cur = graeffe_step(&cur);
            }
            let s: BigUint = cur.iter().map(|c| (c * c).magnitude().clone()).sum();
            let levels = k + 1; // k squarings, then the norm's own square root
            let hi = dyadic_root_upper(&s, levels, SCALE_BITS);
            let lo = dyadic_root_lower(&s, &c2d, levels, SCALE_BITS);
            if lo > best_lo {
                best_lo = lo;
            }
            match &best_hi {
                Some(h) if *h <= hi => {}
                _ => best_hi = Some(hi),
            }
        }
        let hi = best_hi.unwrap();
        if best_lo > hi {
            return Err(Error::Precision(
                "mahler_interval: certified bounds crossed (internal error)".into(),
            ));
        }
        Ok(MahlerInterval { lo: best_lo, hi })
    }
}

/// A refinable enclosure of one distinct real root, with the Sturm chain
/// cached across refinements.
pub struct RootEnclosure<'f> {
    f: &'f MinimalPolynomial,
    chain: Vec<Vec<BigRational>>,
    lo: BigRational,
    hi: BigRational,
}

impl MinimalPolynomial {
    /// Enclosure of the `index`-th distinct real root in ascending order.
    pub fn root_enclosure(&self, index: usize) -> Result<RootEnclosure<'_>> {
        let roots = self.isolate_real_roots();
        if index >= roots.len() {
            return Err(Error::Invalid(format!(
                "root index {index} out of range: polynomial has {} distinct real roots",
                roots.len()
            )));
        }
        let (lo, hi) = roots[index].clone();
        Ok(RootEnclosure {
            f: self,
            chain: self.sturm_chain(),
            lo,
            hi,
        })
    }
}

impl RootEnclosure<'_> {
    pub fn bounds(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Some(r) when the enclosure has collapsed to an exact rational root.
    pub fn rational_value(&self) -> Option<BigRational> {
        (self.lo == self.hi).then(|| self.lo.clone())
    }

    fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        sign_variations(&self.chain, lo) - sign_variations(&self.chain, hi)
    }

    /// Halve the interval `steps` times by Sturm-guided bisection (robust to
    /// root multiplicity; sign-change bisection is not).
    pub fn refine_steps(&mut self, steps: usize) {
        let two = BigRational::from(BigInt::from(2));
        for _ in 0..steps {
            if self.lo == self.hi {
                return;
            }
            let mid = (&self.lo + &self.hi) / &two;
            if self.f.sign_at(&mid) == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if self.count_in(&self.lo, &mid) == 1 {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    /// Refine until the width drops below `w`; false if `max_steps` did not
    /// suffice.
    pub fn refine_below_width(&mut self, w: &BigRational, max_steps: usize) -> bool {
        let mut steps = 0;
        while self.width() > *w {
            if self.lo == self.hi {
                return true;
            }
            if steps >= max_steps {
                return false;
            }
            self.refine_steps(1);
            steps += 1;
        }
        true
    }
}

/// Certified enclosure lo <= M(f) <= hi (exact rational endpoints).
#[derive(Clone, Debug)]
pub struct MahlerInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl MahlerInterval {
    pub fn contains(&self, v: &BigRational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let cap = n.sqrt().min(BigUint::from(1_000_000u64));
    let mut i = BigUint::one();
    while i <= cap {
        if (n % &i).is_zero() {
            out.push(i.clone());
            out.push(n / &i);
        }
        i += 1u8;
    }
    out.push(n.clone());
    out.sort();
    out.dedup();
    out
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// One Graeffe step: the even part of f(x) f(-x), whose roots are the
/// squares of the roots of f (up to a global sign, which the norm bounds
/// ignore).
fn graeffe_step(f: &[BigInt]) -> Vec<BigInt> {
    let d = f.len() - 1;
    let mut prod = vec![BigInt::zero(); 2 * d + 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in f.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let term = a * b;
            if j % 2 == 0 {
                prod[i + j] += term;
            } else {
                prod[i + j] -= term;
            }
        }
    }
    (0..=d).map(|i| std::mem::take(&mut prod[2 * i])).collect()
}

/// Certified upper bound u/2^j >= S^(1/2^levels): invariant
/// u_i >= S^(1/2^i) 2^j, one ceil-sqrt with rescaling per level.
fn dyadic_root_upper(s: &BigUint, levels: u32, scale_bits: u64) -> BigRational {
    let mut u = s << scale_bits;
    for _ in 0..levels {
        let v = &u << scale_bits;
        let r = v.sqrt();
        u = if &r * &r == v { r } else { r + 1u8 };
    }
    BigRational::new(BigInt::from(u), BigInt::from(1u8) << scale_bits)
}

/// Certified lower bound l/2^j <= (S/C)^(1/2^levels): invariant
/// l_i <= (S/C)^(1/2^i) 2^j, one floor-sqrt with rescaling per level.
fn dyadic_root_lower(s: &BigUint, c: &BigUint, levels: u32, scale_bits: u64) -> BigRational {
    let mut l = (s << scale_bits) / c;
    for _ in 0..levels {
        l = (&l << scale_bits).sqrt();
    }
    BigRational::new(BigInt::from(l), BigInt::from(1u8) << scale_bits)
}

fn qtrim(r: &mut Vec<BigRational>) {
    while r.len() > 1 && r.last().unwrap().is_zero() {
        r.pop();
    }
}

fn qpoly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = a.to_vec();
    qtrim(&mut r);
    let db = b.len() - 1;
    let lead_b = &b[db];
    while r.len() - 1 >= db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead_b;
        let shift = dr - db;
        for i in 0..=db {
            let t = &b[i] * &factor;
            r[shift + i] = &r[shift + i] - t;
        }
        r.pop(); // the leading term cancelled exactly
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        qtrim(&mut r);
        if db == 0 {
            // dividing by a constant: remainder is zero
            return vec![BigRational::zero()];
        }
    }
    r
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

fn qpoly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c.clone();
    }
    acc
}

fn sign_variations(chain: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i32;
    let mut v = 0usize;
    for p in chain {
        let s = sign_of(&qpoly_eval(p, x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> MinimalPolynomial {
        MinimalPolynomial::from_i64(c).unwrap()
    }

    fn approx(q: &BigRational) -> f64 {
        let n: f64 = q.numer().to_string().parse().unwrap();
        let d: f64 = q.denom().to_string().parse().unwrap();
        n / d
    }

    #[test]
    fn construction_rules() {
        assert!(MinimalPolynomial::from_i64(&[5]).is_err()); // degree 0
        assert!(MinimalPolynomial::from_i64(&[1, 0]).is_err()); // zero lead
        // content 2 rejected by the strict constructor, allowed by the lax one
        assert!(MinimalPolynomial::new(vec![BigInt::from(2), BigInt::from(4)]).is_err());
        assert!(MinimalPolynomial::new_allow_reducible(vec![BigInt::from(2), BigInt::from(4)]).is_ok());
        let p = MinimalPolynomial::new(vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)]).unwrap();
        assert!(p.irreducibility_required());
    }

    #[test]
    fn root_isolation_quadratic() {
        let f = poly(&[-2, 0, 1]); // x^2 - 2
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        let sqrt2 = 2f64.sqrt();
        assert!(approx(&roots[0].0) <= -sqrt2 && -sqrt2 <= approx(&roots[0].1) + 1e-9);
        assert!(approx(&roots[1].0) - 1e-9 <= sqrt2 && sqrt2 <= approx(&roots[1].1) + 1e-9);
    }

    #[test]
    fn root_isolation_with_rational_root() {
        // (x - 1)(x^2 - 2) = x^3 - x^2 - 2x + 2
        let f = poly(&[2, -2, -1, 1]);
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 3);
        assert_eq!(f.rational_roots(), vec![BigRational::from(BigInt::one())]);
        let one = BigRational::from(BigInt::one());
        assert!(roots.iter().any(|(lo, hi)| *lo <= one && one <= *hi));
    }

    #[test]
    fn quintic_root_count() {
        // x^5 - 5x + 1 has 3 real roots
        let f = poly(&[1, -5, 0, 0, 0, 1]);
        assert_eq!(f.isolate_real_roots().len(), 3);
        assert_eq!(poly(&[1, 0, 1]).isolate_real_roots().len(), 0);
        assert_eq!(poly(&[1, 0, 0, 0, 1]).isolate_real_roots().len(), 0);
    }

    #[test]
    fn mahler_linear_and_sqrt2() {
        let two = BigRational::from(BigInt::from(2));
        // x - 2: M = 2 exactly
        let m = poly(&[-2, 1]).mahler_interval(128).unwrap();
        assert!(m.contains(&two));
        assert!(m.width() < BigRational::new(BigInt::one(), BigInt::from(100)));
        // x^2 - 2: M = 1 * sqrt(2) * sqrt(2) = 2
        let m = poly(&[-2, 0, 1]).mahler_interval(128).unwrap();
        assert!(m.contains(&two), "interval [{}, {}]", m.lo, m.hi);
        assert!(m.width() < BigRational::new(BigInt::one(), BigInt::from(50)));
        // x^2 + 1: complex roots on the unit circle, M = 1
        let m = poly(&[1, 0, 1]).mahler_interval(128).unwrap();
        assert!(m.contains(&BigRational::one()));
    }

    #[test]
    fn mahler_interval_shrinks_with_precision_and_nests() {
        let f = poly(&[-7, 3, 0, 1]);
        let a = f.mahler_interval(64).unwrap();
        let b = f.mahler_interval(160).unwrap();
        assert!(b.width() <= a.width());
        assert!(b.lo >= a.lo && b.hi <= a.hi, "wider precision must nest");
    }

    #[test]
    fn mahler_zero_roots_stripped() {
        // x^3 - 2x = x (x^2 - 2): the zero root contributes 1, M = 2
        let m = poly(&[0, -2, 0, 1]).mahler_interval(96).unwrap();
        assert!(m.contains(&BigRational::from(BigInt::from(2))));
    }

    #[test]
    fn sturm_count_interval() {
        let f = poly(&[-2, 0, 1]);
        let one = BigRational::from(BigInt::from(1));
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(f.count_roots_between(&one, &two), 1);
        let a = BigRational::from(BigInt::from(-3));
        let b = BigRational::from(BigInt::from(3));
        assert_eq!(f.count_roots_between(&a, &b), 2);
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x^2 - 2)^2 = x^4 - 4x^2 + 4: two distinct real roots
        let f = poly(&[4, 0, -4, 0, 1]);
        assert_eq!(f.isolate_real_roots().len(), 2);
        // Mahler measure is 4 (each sqrt(2) counted with multiplicity 2)
        let m = f.mahler_interval(96).unwrap();
        assert!(m.contains(&BigRational::from(BigInt::from(4))));
    }
}
