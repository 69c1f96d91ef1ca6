//! Heights, the explicit Liouville inequality, convergents, and the
//! unimodular-gap check.
//!
//! The load-bearing inequality is Liouville's: for a real root alpha of an
//! integer polynomial f of degree d >= 2 and any rational p/q with
//! f(p/q) != 0,
//!
//!   |alpha - p/q| >= c(alpha) / H(p/q)^d,     c(alpha) >= 2^(1-d) / H(alpha),
//!
//! where H(alpha) is the Mahler height. Everything here is decided on exact
//! rational enclosures: the root side by Sturm bisection, the height side by
//! the Graeffe certificate, so `satisfied` is a certified verdict rather
//! than a floating-point comparison.
//!
//! The unimodular gap |beta - 1| with beta = alpha_p^(m+1) conj(alpha_p)^-(m+1)
//! equals 2|sin((m+1)theta_p)|, and its square is the exact rational
//! (4p^(k-1) - lambda(p)^2) lambda(p^m)^2 / p^((k-1)(m+1)), so the comparison
//! against 1/(8 p^(m+2k-2)) is likewise exact.

mod cf;
mod poly;

pub use cf::{convergents_of, convergents_of_root, CfInput, ConvergentSeq, QuadraticSurd, RationalApprox};
pub use poly::{MahlerInterval, MinimalPolynomial, RootEnclosure};

use crate::coeff::{hecke_prime_power, FrobeniusAngle, PrimePower};
use crate::error::{Error, Result};
use crate::hp::{Ctx, Real};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// H(p/q) = max(|p|, q).
pub fn rational_height(r: &RationalApprox) -> BigUint {
    r.height()
}

/// Certified enclosure of the Mahler height |a_d| prod max(1, |alpha_i|).
pub fn mahler_height(f: &MinimalPolynomial, precision_bits: usize) -> Result<MahlerInterval> {
    f.mahler_interval(precision_bits)
}

/// Certified enclosure of the explicit Liouville constant 2^(1-d)/H(alpha).
/// The `lo` endpoint is the value the inequality certificate uses.
#[derive(Clone, Debug)]
pub struct LiouvilleConstant {
    pub lo: BigRational,
    pub hi: BigRational,
}

pub fn liouville_constant(f: &MinimalPolynomial, precision_bits: usize) -> Result<LiouvilleConstant> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Degree(
            "liouville_constant requires degree >= 2 (rational alpha excluded)".into(),
        ));
    }
    let m = f.mahler_interval(precision_bits)?;
    let two_pow = BigRational::new(BigInt::one(), BigInt::from(1u8) << (d - 1));
    Ok(LiouvilleConstant {
        lo: &two_pow / &m.hi,
        hi: &two_pow / &m.lo,
    })
}

/// Exact integer F(p,q) = q^d f(p/q). Nonzero whenever p/q is not a root,
/// and then |F| >= 1.
pub fn integer_form(f: &MinimalPolynomial, r: &RationalApprox) -> Result<BigInt> {
    let d = f.degree();
    let p = r.numerator();
    let q = r.denominator();
    let mut q_pows = Vec::with_capacity(d + 1);
    q_pows.push(BigInt::one());
    for i in 1..=d {
        q_pows.push(&q_pows[i - 1] * q);
    }
    let mut acc = BigInt::zero();
    let mut p_pow = BigInt::one();
    for (i, c) in f.coeffs().iter().enumerate() {
        acc += c * &p_pow * &q_pows[d - i];
        p_pow *= p;
    }
    if acc.is_zero() {
        return Err(Error::ZeroForm(r.to_string()));
    }
    Ok(acc)
}

/// Certified comparison |alpha - p/q| >= c(alpha)/H(p/q)^d.
#[derive(Clone, Debug)]
pub struct LiouvilleReport {
    /// Enclosure of |alpha - p/q|.
    pub lhs_lo: BigRational,
    pub lhs_hi: BigRational,
    /// Enclosure of c(alpha)/H(p/q)^d.
    pub rhs_lo: BigRational,
    pub rhs_hi: BigRational,
    /// Certified verdict. False signals an implementation bug, not a
    /// counterexample to the theorem.
    pub satisfied: bool,
}

impl LiouvilleReport {
    pub fn lhs_real(&self, ctx: &Ctx) -> Real {
        ctx.from_ratio(&self.lhs_lo)
    }

    pub fn rhs_real(&self, ctx: &Ctx) -> Real {
        ctx.from_ratio(&self.rhs_hi)
    }
}

/// Run the certified Liouville comparison for the `root_index`-th real root
/// of `f` against the rational `r`.
pub fn liouville_check(
    f: &MinimalPolynomial,
    root_index: usize,
    r: &RationalApprox,
    precision_bits: usize,
) -> Result<LiouvilleReport> {
    let mut enc = f.root_enclosure(root_index)?;
    // escalate Mahler tightness only if the margin is too small to decide
    let mut mahler_bits = 64;
    loop {
        let mahler = f.mahler_interval(mahler_bits)?;
        match liouville_check_with(f, &mut enc, &mahler, r, precision_bits) {
            Err(Error::Precision(_)) if mahler_bits < precision_bits.max(128) => {
                mahler_bits = (mahler_bits * 2).min(precision_bits.max(128));
            }
            other => return other,
        }
    }
}

/// Same check with a caller-supplied enclosure and Mahler interval, so
/// batch suites can reuse the expensive state across many rationals.
pub fn liouville_check_with(
    f: &MinimalPolynomial,
    enc: &mut RootEnclosure<'_>,
    mahler: &MahlerInterval,
    r: &RationalApprox,
    precision_bits: usize,
) -> Result<LiouvilleReport> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Degree("liouville_check requires degree >= 2".into()));
    }
    let rq = r.to_ratio();
    if f.sign_at(&rq) == 0 {
        return Err(Error::ZeroForm(r.to_string()));
    }
    let two_pow = BigRational::new(BigInt::one(), BigInt::from(1u8) << (d - 1));
    let h_pow_d = BigRational::from(BigInt::from(r.height().pow(d as u32)));
    let rhs_lo = &two_pow / (&mahler.hi * &h_pow_d);
    let rhs_hi = &two_pow / (&mahler.lo * &h_pow_d);

    // refine the root enclosure until the distance interval clears the
    // rhs enclosure one way or the other
    let max_width_log2 = (8 * precision_bits.max(64)) as u64;
    let dist_bounds = |enc: &RootEnclosure<'_>| {
        let (lo, hi) = enc.bounds();
        let dist_lo = if rq < *lo {
            lo - &rq
        } else if rq > *hi {
            &rq - hi
        } else {
            BigRational::zero()
        };
        let a = (hi - &rq).abs();
        let b = (&rq - lo).abs();
        let dist_hi = if a > b { a } else { b };
        (dist_lo, dist_hi)
    };
    // once the verdict is certain, tighten the enclosure a little further so
    // the reported lhs interval is narrow, not merely decisive
    let tighten = |enc: &mut RootEnclosure<'_>| {
        for _ in 0..64 {
            let (dist_lo, dist_hi) = dist_bounds(enc);
            if dist_lo.is_zero() || (&dist_hi - &dist_lo) * BigRational::from(BigInt::from(256)) <= dist_lo
            {
                break;
            }
            enc.refine_steps(4);
        }
        dist_bounds(enc)
    };
    loop {
        let (dist_lo, dist_hi) = dist_bounds(enc);
        if dist_lo > rhs_hi {
            let (dist_lo, dist_hi) = tighten(enc);
            return Ok(LiouvilleReport {
                lhs_lo: dist_lo,
                lhs_hi: dist_hi,
                rhs_lo,
                rhs_hi,
                satisfied: true,
            });
        }
        if !dist_hi.is_zero() && dist_hi < rhs_lo {
            let (dist_lo, dist_hi) = tighten(enc);
            return Ok(LiouvilleReport {
                lhs_lo: dist_lo,
                lhs_hi: dist_hi,
                rhs_lo,
                rhs_hi,
                satisfied: false,
            });
        }
        if enc.rational_value().is_some() {
            return Err(Error::Precision(
                "root collapsed to a rational; Liouville check undefined".into(),
            ));
        }
        let w = enc.width();
        // width below both the rhs scale and the hard cap: the distance sits
        // inside the Mahler slack; the caller must tighten the height
        let cap = BigRational::new(BigInt::one(), BigInt::from(1u8) << max_width_log2.min(4096));
        if w < cap || (!dist_lo.is_zero() && &rhs_hi - &rhs_lo > &dist_hi - &dist_lo && w < &rhs_hi - &rhs_lo) {
            if dist_lo > rhs_lo && dist_lo <= rhs_hi {
                return Err(Error::Precision(
                    "distance lands inside the Mahler enclosure slack; retry with a tighter height".into(),
                ));
            }
            if w < cap {
                return Err(Error::Precision(
                    "refinement cap reached without separation".into(),
                ));
            }
        }
        enc.refine_steps(16);
    }
}

/// Explicit Liouville threshold 1/(8 p^(m+2k-2)) in natural-log scale.
pub fn corollary_gap(pp: PrimePower, k: u32, ctx: &Ctx) -> Result<Real> {
    if k < 4 {
        return Err(Error::UnsupportedWeight(format!(
            "corollary_gap needs k >= 4, got {k}"
        )));
    }
    if pp.m() == 0 {
        return Err(Error::Domain("corollary_gap needs m >= 1".into()));
    }
    let g = ctx.guarded(32);
    let e = g.from_u64(pp.m() as u64 + 2 * k as u64 - 2);
    let v = g.mul(&e, &g.ln_u64(pp.p()));
    Ok(ctx.neg(&g.add(&v, &g.ln_u64(8))))
}

/// The same threshold as an exact rational.
pub fn corollary_gap_exact(pp: PrimePower, k: u32) -> Result<BigRational> {
    if k < 4 {
        return Err(Error::UnsupportedWeight(format!(
            "corollary_gap needs k >= 4, got {k}"
        )));
    }
    if pp.m() == 0 {
        return Err(Error::Domain("corollary_gap needs m >= 1".into()));
    }
    let denom = BigInt::from(8u8) * BigInt::from(pp.p()).pow(pp.m() + 2 * k - 2);
    Ok(BigRational::new(BigInt::one(), denom))
}

/// Result of the unimodular-gap comparison 2|sin((m+1)theta)| vs
/// 1/(8 p^(m+2k-2)).
#[derive(Clone, Debug)]
pub struct GapReport {
    pub p: u64,
    pub m: u32,
    pub k: u32,
    /// Exact gap^2 = (4p^(k-1) - lambda(p)^2) lambda(p^m)^2 / p^((k-1)(m+1)).
    pub gap_sq: BigRational,
    /// Exact threshold^2.
    pub threshold_sq: BigRational,
    /// Float path 2|sin((m+1)theta)| at the angle's precision.
    pub gap_float: Real,
    /// Exact verdict gap^2 > threshold^2.
    pub satisfied: bool,
    /// (m+1)theta is an exact multiple of pi (lambda(p^m) = 0): gap zero.
    pub zero_gap: bool,
}

/// Compare the unimodular gap against the explicit Liouville threshold.
/// The verdict comes from exact rational arithmetic; the float path is
/// reported alongside as an independent evaluation.
pub fn unimodular_gap_check(angle: &FrobeniusAngle, m: u32) -> Result<GapReport> {
    if angle.is_degenerate() {
        return Err(Error::DegenerateAngle { p: angle.p() });
    }
    if m == 0 {
        return Err(Error::Domain("unimodular_gap_check needs m >= 1".into()));
    }
    let p = angle.p();
    let k = angle.weight();
    if k < 4 {
        return Err(Error::UnsupportedWeight(format!(
            "unimodular_gap_check needs k >= 4, got {k}"
        )));
    }
    let lambda_p = angle.lambda_p();
    let pp = PrimePower::new(p, m)?;
    let lambda_pm = hecke_prime_power(lambda_p, pp, k);

    let pk1 = BigInt::from(p).pow(k - 1);
    let sin_sq_num = BigInt::from(4u8) * &pk1 - lambda_p * lambda_p; // 4p^(k-1) sin^2(theta)
    let gap_sq = BigRational::new(
        &sin_sq_num * &lambda_pm * &lambda_pm,
        BigInt::from(p).pow((k - 1) * (m + 1)),
    );
    let threshold = corollary_gap_exact(pp, k)?;
    let threshold_sq = &threshold * &threshold;
    let zero_gap = lambda_pm.is_zero();
    let satisfied = gap_sq > threshold_sq;

    let ctx = Ctx::new(angle.precision_bits());
    let g = ctx.guarded(32);
    let arg = g.mul(&g.from_u64(m as u64 + 1), angle.theta());
    let gap_float = ctx.abs(&g.mul(&g.from_u64(2), &g.sin(&arg)));

    Ok(GapReport {
        p,
        m,
        k,
        gap_sq,
        threshold_sq,
        gap_float,
        satisfied,
        zero_gap,
    })
}

/// Outcome of the seeded random property suite: integer-form lower bounds
/// and Liouville checks over (polynomial, convergent) pairs.
#[derive(Clone, Debug, Default)]
pub struct RandomSuiteReport {
    pub seed: u64,
    pub pairs: u64,
    pub polynomials: u64,
    pub integer_form_failures: u64,
    pub liouville_unsatisfied: u64,
    pub precision_failures: u64,
}

impl RandomSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.integer_form_failures == 0
            && self.liouville_unsatisfied == 0
            && self.precision_failures == 0
    }
}

/// Deterministic randomized suite: degree <= 5 integer polynomials without
/// rational roots, checked against their own convergents.
pub fn random_liouville_suite(seed: u64, pairs: u64, precision_bits: usize) -> Result<RandomSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RandomSuiteReport {
        seed,
        ..Default::default()
    };
    const CONVERGENTS_PER_POLY: usize = 10;
    while report.pairs < pairs {
        let d = rng.random_range(2..=5usize);
        let mut coeffs: Vec<BigInt> = (0..=d)
            .map(|_| BigInt::from(rng.random_range(-9i64..=9)))
            .collect();
        if coeffs[d].is_zero() {
            coeffs[d] = BigInt::one();
        }
        let f = match MinimalPolynomial::new_allow_reducible(coeffs) {
            Ok(f) => f,
            Err(_) => continue,
        };
        if !f.rational_roots().is_empty() {
            continue; // keep targets irrational and F(p,q) nonzero
        }
        let roots = f.isolate_real_roots();
        if roots.is_empty() {
            continue;
        }
        let root_index = rng.random_range(0..roots.len());
        let seq = match convergents_of_root(&f, root_index, CONVERGENTS_PER_POLY) {
            Ok(s) => s,
            Err(Error::Precision(_)) => {
                report.precision_failures += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.polynomials += 1;
        let mut enc = f.root_enclosure(root_index)?;
        let mut mahler_bits = 64;
        let mut mahler = f.mahler_interval(mahler_bits)?;
        for conv in &seq.convergents {
            if report.pairs >= pairs {
                break;
            }
            report.pairs += 1;
            match integer_form(&f, conv) {
                Ok(v) => {
                    if v.magnitude() < &BigUint::one() {
                        report.integer_form_failures += 1;
                    }
                }
                Err(_) => {
                    report.integer_form_failures += 1;
                    continue;
                }
            }
            loop {
                match liouville_check_with(&f, &mut enc, &mahler, conv, precision_bits) {
                    Ok(rep) => {
                        if !rep.satisfied {
                            report.liouville_unsatisfied += 1;
                        }
                        break;
                    }
                    Err(Error::Precision(_)) if mahler_bits < 256 => {
                        mahler_bits *= 2;
                        mahler = f.mahler_interval(mahler_bits)?;
                    }
                    Err(Error::Precision(_)) => {
                        report.precision_failures += 1;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::frobenius_angle;

    fn sqrt2_poly() -> MinimalPolynomial {
        MinimalPolynomial::from_i64(&[-2, 0, 1]).unwrap()
    }

    fn rat(n: i64, d: i64) -> RationalApprox {
        RationalApprox::new(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn integer_form_examples() {
        let f = sqrt2_poly();
        // 2^2 (9/4 - 2) = 1
        assert_eq!(integer_form(&f, &rat(3, 2)).unwrap(), BigInt::one());
        // 25 (49/25 - 2) = -1
        assert_eq!(integer_form(&f, &rat(7, 5)).unwrap(), BigInt::from(-1));
        // root input
        let lin = MinimalPolynomial::from_i64(&[-1, 1]).unwrap();
        assert!(matches!(
            integer_form(&lin, &rat(1, 1)),
            Err(Error::ZeroForm(_))
        ));
    }

    #[test]
    fn liouville_constant_values() {
        // x^2 - 2: H = 2, c = 2^-1 / 2 = 1/4
        let c = liouville_constant(&sqrt2_poly(), 128).unwrap();
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        assert!(c.lo <= quarter && quarter <= c.hi);
        assert!(&c.hi - &c.lo < BigRational::new(BigInt::one(), BigInt::from(50)));
        // monic quadratic with roots on the unit circle: H = 1, c = 1/2
        let unit = MinimalPolynomial::from_i64(&[1, 0, 1]).unwrap();
        let c = liouville_constant(&unit, 128).unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(c.lo <= half && half <= c.hi);
        // degree 1 rejected
        let lin = MinimalPolynomial::from_i64(&[-2, 1]).unwrap();
        assert!(matches!(liouville_constant(&lin, 64), Err(Error::Degree(_))));
    }

    #[test]
    fn liouville_check_sqrt2_convergents() {
        let f = sqrt2_poly();
        let rep = liouville_check(&f, 1, &rat(7, 5), 128).unwrap();
        assert!(rep.satisfied);
        // deep convergent: lhs around 1.6e-12
        let rep = liouville_check(&f, 1, &rat(665857, 470832), 128).unwrap();
        assert!(rep.satisfied);
        let lhs = rep.lhs_real(&Ctx::new(64)).to_f64();
        assert!(lhs > 1.0e-12 && lhs < 2.3e-12, "lhs = {lhs}");
        // rhs = (1/4) / 665857^2 approx 5.6e-13
        let rhs = rep.rhs_real(&Ctx::new(64)).to_f64();
        assert!(rhs > 5.0e-13 && rhs < 6.5e-13, "rhs = {rhs}");
    }

    #[test]
    fn liouville_check_rejects_roots_and_degree() {
        let f = sqrt2_poly();
        // r must not be a root; 0/1 is fine, x=0 is not a root
        assert!(liouville_check(&f, 0, &rat(0, 1), 96).unwrap().satisfied);
        let lin = MinimalPolynomial::from_i64(&[-2, 1]).unwrap();
        assert!(matches!(
            liouville_check(&lin, 0, &rat(1, 1), 96),
            Err(Error::Degree(_))
        ));
        // (x-1)(x^2-2) at r = 1 -> zero form
        let f3 = MinimalPolynomial::from_i64(&[2, -2, -1, 1]).unwrap();
        assert!(matches!(
            liouville_check(&f3, 2, &rat(1, 1), 96),
            Err(Error::ZeroForm(_))
        ));
    }

    #[test]
    fn corollary_gap_values() {
        let ctx = Ctx::new(96);
        // (p=2, n=1, k=4): 1/(8 * 2^7) = 1/1024
        let v = corollary_gap(PrimePower::new(2, 1).unwrap(), 4, &ctx).unwrap();
        assert!((v.to_f64() - (1.0 / 1024.0f64).ln()).abs() < 1e-20);
        let e = corollary_gap_exact(PrimePower::new(2, 1).unwrap(), 4).unwrap();
        assert_eq!(e, BigRational::new(BigInt::one(), BigInt::from(1024)));
        // (p=3, n=2, k=12): 1/(8 * 3^24)
        let e = corollary_gap_exact(PrimePower::new(3, 2).unwrap(), 12).unwrap();
        assert_eq!(
            e,
            BigRational::new(BigInt::one(), BigInt::from(8u8) * BigInt::from(3u8).pow(24))
        );
        assert!(matches!(
            corollary_gap(PrimePower::new(2, 0).unwrap(), 4, &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gap_check_theta_half_pi() {
        // lambda(p) = 0 gives theta = pi/2 (nondegenerate)
        let angle = frobenius_angle(&BigInt::zero(), 5, 12, 128).unwrap();
        // m even: sin((m+1) pi/2) = +-1, gap = 2
        let rep = unimodular_gap_check(&angle, 2).unwrap();
        assert!(rep.satisfied);
        assert!(!rep.zero_gap);
        assert_eq!(rep.gap_sq, BigRational::from(BigInt::from(4)));
        assert!((rep.gap_float.to_f64() - 2.0).abs() < 1e-25);
        // m odd: (m+1) theta is a multiple of pi, gap = 0, flagged
        let rep = unimodular_gap_check(&angle, 1).unwrap();
        assert!(rep.zero_gap);
        assert!(!rep.satisfied);
        assert!(rep.gap_sq.is_zero());
        assert!(rep.gap_float.to_f64().abs() < 1e-30);
    }

    #[test]
    fn gap_check_delta_p2() {
        let angle = frobenius_angle(&BigInt::from(-24), 2, 12, 128).unwrap();
        for m in 1..=10 {
            let rep = unimodular_gap_check(&angle, m).unwrap();
            assert!(rep.satisfied, "m = {m} should satisfy the gap bound");
            // float and exact paths agree: gap_float^2 vs gap_sq
            let ctx = Ctx::new(128);
            let fsq = ctx.mul(&rep.gap_float, &rep.gap_float);
            let exact = ctx.from_ratio(&rep.gap_sq);
            let diff = ctx.abs(&ctx.sub(&fsq, &exact)).to_f64();
            assert!(diff < 1e-30, "paths diverge by {diff} at m = {m}");
        }
    }

    #[test]
    fn gap_check_rejects_degenerate() {
        let lam = BigInt::from(2 * 9); // theta = 0 at p = 3, k = 5... k < 4 no; use k=5
        let angle = frobenius_angle(&lam, 3, 5, 96).unwrap();
        assert!(angle.is_degenerate());
        assert!(matches!(
            unimodular_gap_check(&angle, 3),
            Err(Error::DegenerateAngle { .. })
        ));
    }

    #[test]
    fn random_suite_small_run() {
        let rep = random_liouville_suite(42, 60, 128).unwrap();
        assert_eq!(rep.pairs, 60);
        assert!(rep.all_passed(), "{rep:?}");
        // determinism
        let rep2 = random_liouville_suite(42, 60, 128).unwrap();
        assert_eq!(rep.polynomials, rep2.polynomials);
        assert_eq!(rep.pairs, rep2.pairs);
    }
}
