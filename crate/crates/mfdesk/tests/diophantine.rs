//! Property-level checks of the Diophantine machinery: the integer-form
//! lower bound, the Liouville inequality over convergents, convergent
//! quality/alternation, certified Mahler intervals, and the two gap paths.

use mfdesk::coeff::{frobenius_angle, tau_series, PrimePower};
use mfdesk::diophantine::{
    convergents_of, convergents_of_root, corollary_gap_exact, integer_form, liouville_check,
    liouville_constant, mahler_height, unimodular_gap_check, CfInput, MinimalPolynomial,
    QuadraticSurd, RationalApprox,
};
use mfdesk::hp::Ctx;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn poly(c: &[i64]) -> MinimalPolynomial {
    MinimalPolynomial::from_i64(c).unwrap()
}

fn rat(n: i64, d: i64) -> RationalApprox {
    RationalApprox::new(BigInt::from(n), BigInt::from(d)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// |F(p,q)| >= 1 for every non-root rational, any degree <= 5 integer
    /// polynomial, heights up to 10^6.
    #[test]
    fn integer_form_at_least_one(
        coeffs in prop::collection::vec(-50i64..=50, 2..=6),
        num in -1_000_000i64..=1_000_000,
        den in 1i64..=1_000_000,
    ) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let f = poly(&coeffs);
        let r = rat(num, den);
        match integer_form(&f, &r) {
            Ok(v) => prop_assert!(v.magnitude() >= &num_bigint::BigUint::one()),
            Err(mfdesk::Error::ZeroForm(_)) => {
                // r really is a root: f(r) must evaluate to zero
                prop_assert_eq!(f.sign_at(&r.to_ratio()), 0);
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    /// Mahler enclosures always contain |a_d| * prod over REAL roots of
    /// max(1, |alpha|) as a lower sanity bound... the full product needs the
    /// complex roots too, so check the two certified inequalities instead:
    /// the interval is ordered and contains the Landau bound scaled down.
    #[test]
    fn mahler_interval_is_ordered_and_positive(
        coeffs in prop::collection::vec(-30i64..=30, 2..=6),
    ) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let f = poly(&coeffs);
        let m = mahler_height(&f, 96).unwrap();
        prop_assert!(m.lo <= m.hi);
        // M(f) >= |a_d| and M(f) >= |a_0| (both are products of a_d with
        // subsets of the max(1,|alpha|) factors)
        let ad = BigRational::from(f.leading().abs());
        let a0 = BigRational::from(f.coeffs()[0].abs());
        prop_assert!(m.hi >= ad);
        prop_assert!(m.hi >= a0);
        prop_assert!(m.lo > BigRational::zero());
    }
}

#[test]
fn liouville_over_random_quadratic_convergents() {
    // randomized quadratics x^2 - D, first 20 convergents: 100% satisfied
    for d in [2u64, 3, 5, 6, 7, 8, 10, 11, 13, 19, 23, 31, 47, 61, 94] {
        let f = MinimalPolynomial::new(vec![
            BigInt::from(-(d as i64)),
            BigInt::zero(),
            BigInt::one(),
        ])
        .unwrap();
        let seq = convergents_of(&CfInput::Surd(QuadraticSurd::sqrt_of(d).unwrap()), 20).unwrap();
        for conv in &seq.convergents {
            let rep = liouville_check(&f, 1, conv, 128).unwrap();
            assert!(rep.satisfied, "D = {d}, convergent {conv}");
            assert!(rep.lhs_lo > rep.rhs_hi);
        }
    }
}

#[test]
fn convergents_alternate_and_are_sharp() {
    // |x - p_m/q_m| < 1/(q_m q_{m+1}) and successive convergents straddle x
    let s = QuadraticSurd::sqrt_of(13).unwrap();
    let seq = convergents_of(&CfInput::Surd(s.clone()), 15).unwrap();
    for i in 0..seq.convergents.len() - 1 {
        let cur = &seq.convergents[i];
        let next = &seq.convergents[i + 1];
        let cq = cur.to_ratio();
        let bound = BigRational::new(BigInt::one(), cur.denominator() * next.denominator());
        let lo = &cq - &bound;
        let hi = &cq + &bound;
        assert_eq!(s.cmp_rational(&lo), std::cmp::Ordering::Greater);
        assert_eq!(s.cmp_rational(&hi), std::cmp::Ordering::Less);
        // alternation: sign of (x - c) flips each step
        let side_cur = s.cmp_rational(&cq);
        let side_next = s.cmp_rational(&next.to_ratio());
        assert_ne!(side_cur, side_next, "convergents must alternate sides");
    }
}

#[test]
fn denominators_nondecreasing_strict_after_first() {
    let g = QuadraticSurd::golden_ratio();
    let seq = convergents_of(&CfInput::Surd(g), 12).unwrap();
    let q: Vec<BigInt> = seq
        .convergents
        .iter()
        .map(|c| c.denominator().clone())
        .collect();
    // Fibonacci denominators: 1, 1, 2, 3, 5, ... strict from the second step
    assert!(q[0] <= q[1]);
    for i in 1..q.len() - 1 {
        assert!(q[i] < q[i + 1], "q must increase strictly from index 1");
    }
}

#[test]
fn mahler_hecke_polynomial_bounded() {
    // T^2 - lambda(p) T + p^(k-1): both roots have modulus p^((k-1)/2), so
    // M = p^(k-1) <= 4 p^(2(k-1)) as the corollary requires
    let table = tau_series(50).unwrap();
    for p in [2u64, 3, 5, 7, 11] {
        let lam = table.get(p).unwrap();
        let f = MinimalPolynomial::new_allow_reducible(vec![
            BigInt::from(p).pow(11),
            -lam.clone(),
            BigInt::one(),
        ])
        .unwrap();
        let m = mahler_height(&f, 96).unwrap();
        let exact = BigRational::from(BigInt::from(p).pow(11));
        assert!(
            m.lo <= exact && exact <= m.hi,
            "M should be p^11 for p = {p}: [{}, {}]",
            m.lo,
            m.hi
        );
        let cap = BigRational::from(BigInt::from(4) * BigInt::from(p).pow(22));
        assert!(m.hi <= cap, "corollary height cap violated at p = {p}");
    }
}

#[test]
fn liouville_constant_from_hecke_polynomial() {
    // with M = p^(k-1) the explicit constant is 1/(2 p^(k-1)), comfortably
    // above the corollary's pessimistic 1/(8 p^(2(k-1)))
    let table = tau_series(10).unwrap();
    let p = 3u64;
    let lam = table.get(p).unwrap();
    let f = MinimalPolynomial::new_allow_reducible(vec![
        BigInt::from(p).pow(11),
        -lam.clone(),
        BigInt::one(),
    ])
    .unwrap();
    let c = liouville_constant(&f, 96).unwrap();
    let pessimistic = BigRational::new(BigInt::one(), BigInt::from(8) * BigInt::from(p).pow(22));
    assert!(c.lo > pessimistic);
}

#[test]
fn corollary_threshold_below_constant_over_height() {
    // 1/(8 p^(n+2k-2)) < liouville_constant(Hecke poly) / p^n
    let table = tau_series(10).unwrap();
    let p = 5u64;
    let k = 12u32;
    let lam = table.get(p).unwrap();
    let f = MinimalPolynomial::new_allow_reducible(vec![
        BigInt::from(p).pow(k - 1),
        -lam.clone(),
        BigInt::one(),
    ])
    .unwrap();
    let c = liouville_constant(&f, 96).unwrap();
    for n in 1..=10u32 {
        let threshold = corollary_gap_exact(PrimePower::new(p, n).unwrap(), k).unwrap();
        let pn = BigRational::from(BigInt::from(p).pow(n));
        assert!(threshold < &c.lo / &pn, "n = {n}");
    }
}

#[test]
fn gap_two_paths_agree_to_half_precision() {
    // gap from exact rationals vs |e^(i 2(m+1) theta) - 1| by direct complex
    // arithmetic at 128 bits
    let table = tau_series(100).unwrap();
    let ctx = Ctx::new(128);
    for p in [2u64, 3, 5, 7, 31, 97] {
        let lam = table.get(p).unwrap();
        let angle = frobenius_angle(lam, p, 12, 128).unwrap();
        for m in 1..=12u32 {
            let rep = unimodular_gap_check(&angle, m).unwrap();
            // complex path: (cos a - 1)^2 + sin^2 a with a = 2(m+1) theta
            let a = ctx.mul(&ctx.from_u64(2 * (m as u64 + 1)), angle.theta());
            let c = ctx.cos(&a);
            let s = ctx.sin(&a);
            let dm1 = ctx.sub(&c, &ctx.one());
            let norm_sq = ctx.add(&ctx.mul(&dm1, &dm1), &ctx.mul(&s, &s));
            let complex_gap = ctx.sqrt(&norm_sq);
            let diff = ctx.abs(&ctx.sub(&complex_gap, &rep.gap_float)).to_f64();
            assert!(
                diff < 2f64.powi(-64),
                "p={p} m={m}: complex and sine paths differ by {diff:e}"
            );
            // and the float path matches the exact rational gap^2
            let fsq = ctx.mul(&rep.gap_float, &rep.gap_float);
            let exact = ctx.from_ratio(&rep.gap_sq);
            let drift = ctx.abs(&ctx.sub(&fsq, &exact)).to_f64();
            assert!(drift < 2f64.powi(-64));
        }
    }
}

#[test]
fn gap_scan_delta_p2_m_to_20() {
    let table = tau_series(10).unwrap();
    let angle = frobenius_angle(table.get(2).unwrap(), 2, 12, 128).unwrap();
    let mut satisfied = 0;
    for m in 1..=20u32 {
        let rep = unimodular_gap_check(&angle, m).unwrap();
        if rep.satisfied {
            satisfied += 1;
        }
    }
    assert_eq!(satisfied, 20, "all gap checks for p = 2 should pass");
}

#[test]
fn algebraic_cf_matches_liouville_pipeline_for_cubic() {
    // cube root of 2: x^3 - 2, its convergents satisfy Liouville with d = 3
    let f = poly(&[-2, 0, 0, 1]);
    let seq = convergents_of_root(&f, 0, 12).unwrap();
    assert!(!seq.exact_terminated);
    for conv in &seq.convergents {
        let fv = integer_form(&f, conv).unwrap();
        assert!(fv.magnitude() >= &num_bigint::BigUint::one());
        let rep = liouville_check(&f, 0, conv, 128).unwrap();
        assert!(rep.satisfied, "convergent {conv}");
    }
    // the 12th convergent approximates 2^(1/3) to ~1/q^2
    let last = seq.convergents.last().unwrap();
    let v: f64 = last.numerator().to_string().parse::<f64>().unwrap()
        / last.denominator().to_string().parse::<f64>().unwrap();
    assert!((v - 2f64.powf(1.0 / 3.0)).abs() < 1e-6);
}

#[test]
fn deep_sqrt2_convergent_reference() {
    // |sqrt(2) - 665857/470832| ~ 1.59e-12 against rhs ~ 5.6e-13
    let f = poly(&[-2, 0, 1]);
    let r = RationalApprox::new(BigInt::from(665857), BigInt::from(470832)).unwrap();
    let rep = liouville_check(&f, 1, &r, 160).unwrap();
    assert!(rep.satisfied);
    let ctx = Ctx::new(96);
    let lhs = rep.lhs_real(&ctx).to_f64();
    assert!((lhs / 1.5947e-12 - 1.0).abs() < 1e-3, "lhs = {lhs:e}");
}
