//! Prime classifications chi_f, the generated multiplicative set N_f, and
//! empirical verification of the Mertens, harmonic-sum, and Wirsing
//! asymptotics.
//!
//! Two densities appear side by side and are never conflated: the empirical
//! member fraction coming out of `classify_primes`, and the tau fed INTO the
//! asymptotic formulas (the density-one value an external theorem supplies).
//!
//! Reference shapes:
//! - harmonic sum:    sum_{p<=x, p in P_f} 1/p  ~  tau (loglog x + B)
//! - Mertens product: prod_{p<=x, p in P_f} (1-1/p)^-1  ~  (e^gamma log x)^tau
//! - Wirsing:         sum_{n<=x} f(n)  ~  x/(e^(gamma tau) Gamma(tau) log x)
//!                      * prod_{p<=x} (1 + f(p)/p + f(p^2)/p^2 + ...)

use crate::arith;
use crate::coeff::{CoeffTable, EngineLimits, FormSpec};
use crate::error::{Error, Result};
use crate::hp::{Ctx, Real};
use num_traits::Zero;

pub use crate::arith::{divisor_count, omega, p_adic_val, radical};

/// Which rule puts a prime into P_f.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdKind {
    /// lambda(p) != 0.
    Nonvanishing,
    /// |lambda(p)| >= max(0, p^((k-1)/2) loglog p / sqrt(log p)).
    /// The max(0, ..) convention makes p = 2 (where loglog p < 0) a member.
    GTLowerBound,
}

/// chi_f-style classification of all primes up to a limit.
#[derive(Clone, Debug)]
pub struct PrimeClassification {
    form: FormSpec,
    x_limit: u64,
    threshold_kind: ThresholdKind,
    primes: Vec<u64>,
    member: Vec<bool>,
    member_count: u64,
}

impl PrimeClassification {
    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    pub fn x_limit(&self) -> u64 {
        self.x_limit
    }

    pub fn threshold_kind(&self) -> ThresholdKind {
        self.threshold_kind
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn pi_x(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn member_count(&self) -> u64 {
        self.member_count
    }

    /// Empirical member fraction #P_f(x) / pi(x).
    pub fn empirical_tau(&self) -> f64 {
        if self.primes.is_empty() {
            0.0
        } else {
            self.member_count as f64 / self.primes.len() as f64
        }
    }

    pub fn is_member(&self, p: u64) -> Result<bool> {
        if p > self.x_limit {
            return Err(Error::Range(format!(
                "prime {p} outside classification range <= {}",
                self.x_limit
            )));
        }
        match self.primes.binary_search(&p) {
            Ok(i) => Ok(self.member[i]),
            Err(_) => Err(Error::Invalid(format!("{p} is not prime"))),
        }
    }

    pub fn member_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes
            .iter()
            .zip(&self.member)
            .filter_map(|(&p, &m)| m.then_some(p))
    }

    /// Member indicator as a bitmap indexed by integer value (for sieves).
    fn member_bitmap(&self, x: u64) -> Vec<bool> {
        let mut map = vec![false; x as usize + 1];
        for p in self.member_primes() {
            if p <= x {
                map[p as usize] = true;
            }
        }
        map
    }

    /// Synthetic classification marking every prime <= x a member.
    pub fn all_primes(x: u64) -> Result<Self> {
        if x < 2 {
            return Err(Error::EmptyRange(format!("no primes below {x}")));
        }
        let primes = arith::primes_up_to(x);
        let member = vec![true; primes.len()];
        Ok(PrimeClassification {
            form: FormSpec::delta(),
            x_limit: x,
            threshold_kind: ThresholdKind::Nonvanishing,
            member_count: primes.len() as u64,
            primes,
            member,
        })
    }

    /// Synthetic classification with an explicit member set (testing and
    /// small experiments).
    pub fn from_member_set(x: u64, members: &[u64]) -> Result<Self> {
        let primes = arith::primes_up_to(x);
        let member: Vec<bool> = primes.iter().map(|p| members.contains(p)).collect();
        for m in members {
            if !arith::is_prime(*m) || *m > x {
                return Err(Error::Invalid(format!("{m} is not a prime <= {x}")));
            }
        }
        Ok(PrimeClassification {
            form: FormSpec::delta(),
            x_limit: x,
            threshold_kind: ThresholdKind::Nonvanishing,
            member_count: member.iter().filter(|&&b| b).count() as u64,
            primes,
            member,
        })
    }
}

/// Classify every prime p <= x for the form. For elliptic-curve forms,
/// bad-reduction primes (where lambda(p) is undefined in this model) are
/// classified as non-members.
pub fn classify_primes(
    form: &FormSpec,
    x: u64,
    kind: ThresholdKind,
    ctx: &Ctx,
    limits: &EngineLimits,
) -> Result<PrimeClassification> {
    if x < 2 {
        return Err(Error::EmptyRange(format!("no primes below {x}")));
    }
    let table = CoeffTable::build(form, x, limits)?;
    let primes = arith::primes_up_to(x);
    let k = form.weight();
    let g = ctx.guarded(32);
    let mut member = Vec::with_capacity(primes.len());
    let mut count = 0u64;
    for &p in &primes {
        let lam = table.get(p);
        let is_member = match (kind, lam) {
            (_, None) => false, // bad reduction
            (ThresholdKind::Nonvanishing, Some(l)) => !l.is_zero(),
            (ThresholdKind::GTLowerBound, Some(l)) => {
                let lp = g.ln_u64(p);
                let llp = g.ln(&lp);
                if llp.is_negative() || llp.is_zero() {
                    true // threshold max(0, L1) vanishes at p = 2
                } else {
                    // L1 = p^((k-1)/2) loglog p / sqrt(log p)
                    let scale = g.sqrt(&g.from_biguint(&num_bigint::BigUint::from(p).pow(k - 1)));
                    let threshold = g.div(&g.mul(&scale, &llp), &g.sqrt(&lp));
                    let lam_abs = g.from_biguint(l.magnitude());
                    lam_abs >= threshold
                }
            }
        };
        member.push(is_member);
        if is_member {
            count += 1;
        }
    }
    Ok(PrimeClassification {
        form: form.clone(),
        x_limit: x,
        threshold_kind: kind,
        primes,
        member,
        member_count: count,
    })
}

/// Completely multiplicative indicator: 1 iff every prime divisor of n is a
/// member. chi_f(1) = 1 (empty product).
pub fn chi_f(n: u64, classification: &PrimeClassification) -> Result<u8> {
    if n == 0 {
        return Err(Error::Domain("chi_f: n must be >= 1".into()));
    }
    if n == 1 {
        return Ok(1);
    }
    for (p, _) in arith::factorize(n)? {
        if !classification.is_member(p)? {
            return Ok(0);
        }
    }
    Ok(1)
}

/// #{n <= x : chi_f(n) = 1} by sieve.
pub fn count_nf(classification: &PrimeClassification, x: u64) -> Result<u64> {
    if x > classification.x_limit() {
        return Err(Error::Range(format!(
            "count_nf: x = {x} beyond classification limit {}",
            classification.x_limit()
        )));
    }
    if x == 0 {
        return Err(Error::Domain("count_nf: x must be >= 1".into()));
    }
    let member = classification.member_bitmap(x);
    let spf = arith::spf_sieve(x as usize);
    let mut keep = vec![false; x as usize + 1];
    keep[1] = true;
    let mut count = 1u64;
    for n in 2..=x as usize {
        let p = spf[n] as usize;
        if member[p] && keep[n / p] {
            keep[n] = true;
            count += 1;
        }
    }
    Ok(count)
}

/// Which primes a sum/product runs over.
#[derive(Clone, Copy, Debug)]
pub enum PrimeSelector<'a> {
    AllPrimes,
    Classified(&'a PrimeClassification),
    Empty,
}

impl PrimeSelector<'_> {
    fn collect(&self, x: u64) -> Result<Vec<u64>> {
        match self {
            PrimeSelector::AllPrimes => Ok(arith::primes_up_to(x)),
            PrimeSelector::Empty => Ok(Vec::new()),
            PrimeSelector::Classified(c) => {
                if x > c.x_limit() {
                    return Err(Error::Range(format!(
                        "selector: x = {x} beyond classification limit {}",
                        c.x_limit()
                    )));
                }
                Ok(c.member_primes().filter(|&p| p <= x).collect())
            }
        }
    }
}

/// sum 1/p over the selected primes, against tau (loglog x + B).
#[derive(Clone, Debug)]
pub struct HarmonicReport {
    pub x: u64,
    pub tau: f64,
    pub lhs: Real,
    pub rhs: Real,
    pub diff: Real,
}

pub fn harmonic_sum(selector: &PrimeSelector, x: u64, tau: f64, ctx: &Ctx) -> Result<HarmonicReport> {
    if x < 3 {
        return Err(Error::Domain("harmonic_sum: x must be >= 3".into()));
    }
    let g = ctx.guarded(32);
    let mut lhs = g.zero();
    for p in selector.collect(x)? {
        lhs = g.add(&lhs, &g.div(&g.one(), &g.from_u64(p)));
    }
    let loglog = g.ln(&g.ln_u64(x));
    let rhs = g.mul(&g.from_f64(tau), &g.add(&loglog, &g.mertens_b()));
    let diff = ctx.sub(&lhs, &rhs);
    Ok(HarmonicReport {
        x,
        tau,
        lhs,
        rhs,
        diff,
    })
}

/// prod (1 - 1/p)^-1 over the selected primes, against (e^gamma log x)^tau.
#[derive(Clone, Debug)]
pub struct MertensReport {
    pub x: u64,
    pub tau: f64,
    pub lhs: Real,
    pub rhs: Real,
    pub ratio: Real,
}

pub fn mertens_product(selector: &PrimeSelector, x: u64, tau: f64, ctx: &Ctx) -> Result<MertensReport> {
    if x < 3 {
        return Err(Error::Domain("mertens_product: x must be >= 3".into()));
    }
    let g = ctx.guarded(32);
    // log-sum for stability: -sum log(1 - 1/p)
    let mut log_lhs = g.zero();
    for p in selector.collect(x)? {
        let term = g.sub(&g.one(), &g.div(&g.one(), &g.from_u64(p)));
        log_lhs = g.sub(&log_lhs, &g.ln(&term));
    }
    let lhs = g.exp(&log_lhs);
    // (e^gamma log x)^tau = exp(tau (gamma + loglog x))
    let loglog = g.ln(&g.ln_u64(x));
    let rhs = g.exp(&g.mul(&g.from_f64(tau), &g.add(&g.euler_gamma(), &loglog)));
    let ratio = ctx.div(&lhs, &rhs);
    Ok(MertensReport {
        x,
        tau,
        lhs,
        rhs,
        ratio,
    })
}

/// A nonnegative multiplicative function given by its prime-power values.
pub trait MultiplicativeFn {
    fn prime_power(&self, p: u64, k: u32) -> f64;
    fn name(&self) -> String;
}

/// f identically 1.
pub struct OneFn;

impl MultiplicativeFn for OneFn {
    fn prime_power(&self, _p: u64, _k: u32) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        "one".into()
    }
}

/// chi_f as a completely multiplicative function: f(p^k) = [p is a member].
pub struct ChiFn<'a>(pub &'a PrimeClassification);

impl MultiplicativeFn for ChiFn<'_> {
    fn prime_power(&self, p: u64, _k: u32) -> f64 {
        match self.0.is_member(p) {
            Ok(true) => 1.0,
            _ => 0.0,
        }
    }

    fn name(&self) -> String {
        "chi_f".into()
    }
}

/// Indicator of integers all of whose prime divisors are 1 mod 4
/// (density tau = 1/2 on primes).
pub struct OneModFourFn;

impl MultiplicativeFn for OneModFourFn {
    fn prime_power(&self, p: u64, _k: u32) -> f64 {
        if p % 4 == 1 {
            1.0
        } else {
            0.0
        }
    }

    fn name(&self) -> String {
        "p1mod4".into()
    }
}

/// Wirsing comparison: lhs = sum_{n<=x} f(n), rhs = the Euler-product
/// asymptotic with constant 1/(e^(gamma tau) Gamma(tau)).
#[derive(Clone, Debug)]
pub struct WirsingReport {
    pub x: u64,
    pub tau: f64,
    pub function: String,
    pub lhs: Real,
    pub rhs: Real,
    pub ratio: Real,
    /// Estimated growth constant sup f(p^k)^(1/k) from the sampled
    /// hypothesis check (must stay < 2).
    pub growth_c: f64,
}

pub fn wirsing_eval(
    f: &dyn MultiplicativeFn,
    x: u64,
    tau: f64,
    ctx: &Ctx,
) -> Result<WirsingReport> {
    if x < 3 {
        return Err(Error::Domain("wirsing_eval: x must be >= 3".into()));
    }
    if tau <= 0.0 {
        return Err(Error::Domain("wirsing_eval: tau must be > 0".into()));
    }
    // hypothesis check on sampled prime powers: f >= 0 and f(p^k) <= c^k, c < 2
    let mut growth_c: f64 = 0.0;
    for &p in arith::primes_up_to(100).iter().take(25) {
        for k in 1..=12u32 {
            let v = f.prime_power(p, k);
            if v < 0.0 {
                return Err(Error::Hypothesis(format!(
                    "f({p}^{k}) = {v} is negative"
                )));
            }
            if v > 0.0 {
                growth_c = growth_c.max(v.powf(1.0 / k as f64));
            }
        }
    }
    if growth_c >= 2.0 {
        return Err(Error::Hypothesis(format!(
            "growth constant {growth_c:.3} >= 2 violates f(p^k) <= c^k"
        )));
    }

    // lhs by multiplicative sieve evaluation
    let spf = arith::spf_sieve(x as usize);
    let mut values = vec![0.0f64; x as usize + 1];
    values[1] = 1.0;
    let mut lhs_sum = 1.0f64; // n = 1
    let mut comp = 0.0f64; // Kahan compensation
    for n in 2..=x as usize {
        let p = spf[n] as usize;
        let mut v = 1u32;
        let mut rest = n / p;
        while rest % p == 0 {
            rest /= p;
            v += 1;
        }
        let val = values[rest] * f.prime_power(p as u64, v);
        values[n] = val;
        let y = val - comp;
        let t = lhs_sum + y;
        comp = (t - lhs_sum) - y;
        lhs_sum = t;
    }
    drop(values);
    let g = ctx.guarded(32);
    let lhs = g.from_f64(lhs_sum);

    // rhs: Euler product with tails truncated at 1e-30 relative
    let mut log_prod = g.zero();
    let tol = 1e-30;
    for p in arith::primes_up_to(x) {
        let pf = p as f64;
        let mut factor = 1.0f64;
        let mut pk = pf;
        let mut k = 1u32;
        loop {
            let term = f.prime_power(p, k) / pk;
            factor += term;
            if term < tol * factor || k >= 200 {
                break;
            }
            pk *= pf;
            k += 1;
        }
        log_prod = g.add(&log_prod, &g.ln(&g.from_f64(factor)));
    }
    let tau_r = g.from_f64(tau);
    let gamma_tau = g.exp(&g.mul(&tau_r, &g.euler_gamma()));
    let gamma_fn = g.gamma(&tau_r);
    let c = g.div(&g.one(), &g.mul(&gamma_tau, &gamma_fn));
    let x_over_logx = g.div(&g.from_u64(x), &g.ln_u64(x));
    let rhs = g.mul(&g.mul(&c, &x_over_logx), &g.exp(&log_prod));
    let ratio = ctx.div(&rhs, &lhs);
    Ok(WirsingReport {
        x,
        tau,
        function: f.name(),
        lhs,
        rhs,
        ratio,
        growth_c,
    })
}

/// Scan of the omega(n) log log n / log n ratio against 1 + epsilon.
#[derive(Clone, Debug)]
pub struct HrReport {
    pub x: u64,
    pub epsilon: f64,
    pub max_ratio: f64,
    pub argmax: u64,
    pub count_above: u64,
}

pub fn hr_bounds_check(x: u64, epsilon: f64) -> Result<HrReport> {
    if x < 100 {
        return Err(Error::Domain("hr_bounds_check: x must be >= 100".into()));
    }
    let x = x as usize;
    let mut omega_sieve = vec![0u8; x + 1];
    for p in 2..=x {
        if omega_sieve[p] == 0 {
            let mut m = p;
            while m <= x {
                omega_sieve[m] += 1;
                m += p;
            }
        }
    }
    let mut max_ratio = 0.0f64;
    let mut argmax = 3u64;
    let mut count_above = 0u64;
    let threshold = 1.0 + epsilon;
    for n in 3..=x {
        let ln = (n as f64).ln();
        let ratio = omega_sieve[n] as f64 * ln.ln() / ln;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = n as u64;
        }
        if ratio > threshold {
            count_above += 1;
        }
    }
    Ok(HrReport {
        x: x as u64,
        epsilon,
        max_ratio,
        argmax,
        count_above,
    })
}

/// Aggregate density report for one form at one limit: the classification
/// counts, N_f, and all three asymptotic comparisons computed over the
/// member primes. `asymptotic_tau` is the externally supplied density
/// (the literature's value is 1); the empirical fraction is reported next
/// to it, never substituted for it.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub x: u64,
    pub threshold_kind: ThresholdKind,
    pub asymptotic_tau: f64,
    pub empirical_tau: f64,
    pub count_pf: u64,
    pub pi_x: u64,
    pub nf_count: u64,
    pub harmonic: HarmonicReport,
    pub mertens: MertensReport,
    pub wirsing: WirsingReport,
}

pub fn density_report(
    form: &FormSpec,
    x: u64,
    kind: ThresholdKind,
    asymptotic_tau: f64,
    ctx: &Ctx,
    limits: &EngineLimits,
) -> Result<DensityReport> {
    let classification = classify_primes(form, x, kind, ctx, limits)?;
    density_report_for(&classification, x, asymptotic_tau, ctx)
}

/// Build the aggregate report from an existing classification.
pub fn density_report_for(
    classification: &PrimeClassification,
    x: u64,
    asymptotic_tau: f64,
    ctx: &Ctx,
) -> Result<DensityReport> {
    let selector = PrimeSelector::Classified(classification);
    let harmonic = harmonic_sum(&selector, x, asymptotic_tau, ctx)?;
    let mertens = mertens_product(&selector, x, asymptotic_tau, ctx)?;
    let wirsing = wirsing_eval(&ChiFn(classification), x, asymptotic_tau, ctx)?;
    let nf_count = count_nf(classification, x)?;
    Ok(DensityReport {
        x,
        threshold_kind: classification.threshold_kind(),
        asymptotic_tau,
        empirical_tau: classification.empirical_tau(),
        count_pf: classification.member_count(),
        pi_x: classification.pi_x(),
        nf_count,
        harmonic,
        mertens,
        wirsing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(96)
    }

    #[test]
    fn chi_examples() {
        let c = PrimeClassification::from_member_set(50, &[2, 5]).unwrap();
        assert_eq!(chi_f(1, &c).unwrap(), 1);
        assert_eq!(chi_f(2, &c).unwrap(), 1);
        assert_eq!(chi_f(8, &c).unwrap(), 1); // p^k with chi(p) = 1
        assert_eq!(chi_f(10, &c).unwrap(), 1);
        assert_eq!(chi_f(6, &c).unwrap(), 0); // 3 is not a member
        assert_eq!(chi_f(40, &c).unwrap(), 1);
        assert!(matches!(chi_f(53 * 2, &c), Err(Error::Range(_)))); // out of range
        // complete multiplicativity on a small window
        for m in 1..=40u64 {
            for n in 1..=40u64 {
                if m * n <= 50 {
                    assert_eq!(
                        chi_f(m * n, &c).unwrap(),
                        chi_f(m, &c).unwrap() * chi_f(n, &c).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn count_nf_examples() {
        let all = PrimeClassification::all_primes(100).unwrap();
        assert_eq!(count_nf(&all, 100).unwrap(), 100);
        let none = PrimeClassification::from_member_set(100, &[]).unwrap();
        assert_eq!(count_nf(&none, 100).unwrap(), 1);
        // members = {2}: powers of two 1, 2, 4, 8 below 10
        let two = PrimeClassification::from_member_set(10, &[2]).unwrap();
        assert_eq!(count_nf(&two, 10).unwrap(), 4);
    }

    #[test]
    fn harmonic_small_values() {
        let c = ctx();
        // x = 3: 1/2 + 1/3
        let r = harmonic_sum(&PrimeSelector::AllPrimes, 3, 1.0, &c).unwrap();
        assert!((r.lhs.to_f64() - (0.5 + 1.0 / 3.0)).abs() < 1e-15);
        // empty set: lhs 0, rhs 0 with tau = 0
        let r = harmonic_sum(&PrimeSelector::Empty, 100, 0.0, &c).unwrap();
        assert!(r.lhs.is_zero());
        assert!(r.rhs.is_zero() || r.rhs.to_f64().abs() < 1e-30);
        assert!(matches!(
            harmonic_sum(&PrimeSelector::AllPrimes, 2, 1.0, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mertens_small_values() {
        let c = ctx();
        // x = 10: 2 * 3/2 * 5/4 * 7/6 = 4.375
        let r = mertens_product(&PrimeSelector::AllPrimes, 10, 1.0, &c).unwrap();
        assert!((r.lhs.to_f64() - 4.375).abs() < 1e-12);
        // empty: lhs = 1 and rhs = 1 at tau = 0
        let r = mertens_product(&PrimeSelector::Empty, 10, 0.0, &c).unwrap();
        assert!((r.lhs.to_f64() - 1.0).abs() < 1e-20);
        assert!((r.rhs.to_f64() - 1.0).abs() < 1e-20);
    }

    #[test]
    fn wirsing_one_small() {
        let c = ctx();
        let r = wirsing_eval(&OneFn, 1000, 1.0, &c).unwrap();
        assert!((r.lhs.to_f64() - 1000.0).abs() < 1e-9);
        // even at x = 1000 the ratio is already near 1
        let ratio = r.ratio.to_f64();
        assert!(ratio > 0.9 && ratio < 1.1, "ratio {ratio}");
        assert!((r.growth_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wirsing_hypothesis_rejection() {
        struct TooBig;
        impl MultiplicativeFn for TooBig {
            fn prime_power(&self, _p: u64, k: u32) -> f64 {
                3.0f64.powi(k as i32)
            }
            fn name(&self) -> String {
                "toobig".into()
            }
        }
        assert!(matches!(
            wirsing_eval(&TooBig, 100, 1.0, &ctx()),
            Err(Error::Hypothesis(_))
        ));
        struct Negative;
        impl MultiplicativeFn for Negative {
            fn prime_power(&self, _p: u64, _k: u32) -> f64 {
                -1.0
            }
            fn name(&self) -> String {
                "neg".into()
            }
        }
        assert!(matches!(
            wirsing_eval(&Negative, 100, 1.0, &ctx()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn chi_equals_one_for_all_members() {
        // f = chi_f with every prime a member behaves exactly like OneFn
        let all = PrimeClassification::all_primes(2000).unwrap();
        let c = ctx();
        let a = wirsing_eval(&ChiFn(&all), 2000, 1.0, &c).unwrap();
        let b = wirsing_eval(&OneFn, 2000, 1.0, &c).unwrap();
        assert!((a.lhs.to_f64() - b.lhs.to_f64()).abs() < 1e-9);
        assert!((a.rhs.to_f64() - b.rhs.to_f64()).abs() < 1e-6);
    }

    #[test]
    fn count_nf_agrees_with_wirsing_lhs() {
        // two routes to N_f(x): the sieve count and the multiplicative sum
        let c = PrimeClassification::from_member_set(500, &[2, 5, 11, 13]).unwrap();
        let sieve = count_nf(&c, 500).unwrap();
        let w = wirsing_eval(&ChiFn(&c), 500, 0.5, &ctx()).unwrap();
        assert_eq!(sieve as f64, w.lhs.to_f64());
    }

    #[test]
    fn hr_scan_primorial() {
        let r = hr_bounds_check(50_000, 0.01).unwrap();
        // primorial 30030 = 2*3*5*7*11*13 has omega = 6
        assert_eq!(omega(30030).unwrap(), 6);
        let ln = 30030f64.ln();
        let primorial_ratio = 6.0 * ln.ln() / ln;
        assert!(r.max_ratio >= primorial_ratio - 1e-12);
        assert!(r.max_ratio < 2.0, "desk-scale max ratio is modest");
        assert!(matches!(hr_bounds_check(50, 0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_small_delta_gt() {
        let c = ctx();
        let cls = classify_primes(
            &FormSpec::delta(),
            1000,
            ThresholdKind::GTLowerBound,
            &c,
            &EngineLimits::default(),
        )
        .unwrap();
        // p = 2 is a member by the max(0, L1) convention
        assert!(cls.is_member(2).unwrap());
        // the empirical fraction sits strictly between 0 and 1 at this scale
        let tau = cls.empirical_tau();
        assert!(tau > 0.2 && tau < 1.0, "tau = {tau}");
        // nonvanishing: no known tau(p) = 0
        let nv = classify_primes(
            &FormSpec::delta(),
            1000,
            ThresholdKind::Nonvanishing,
            &c,
            &EngineLimits::default(),
        )
        .unwrap();
        assert_eq!(nv.member_count(), nv.pi_x());
    }
}
