//! Explicit bound evaluators and sandwich verification.
//!
//! All bounds are computed and compared in natural-log scale with
//! high-precision reals; exact coefficients enter through certified integer
//! logs. The one hard invariant, the Deligne bound, is additionally checked
//! as an exact integer comparison |lambda(n)|^2 <= d(n)^2 n^(k-1): a
//! violation there means broken coefficients, never a finite-size exception.
//!
//! Evaluators (log scale):
//! - `hecke_upper`:    (k-1) m log p                       (constant c = 1, "up to constant")
//! - `deligne_upper`:  log d(n) + (k-1)/2 log n
//! - `gt_lower`:       (k-1)/2 log p + log(loglog p) - 1/2 log(log p)   (primes)
//! - `gt_lower_prime_power`: the factor-2 prime-power variant of the same bound
//! - `thm1_lower`:     log(1/8) + ((k-3)m/2 - 2k + 2 - eps) log p
//! - `thm2_lower`:     ((k-3)/2 + logloglog n / loglog n) log n

use crate::arith;
use crate::coeff::{self, CoeffTable, EngineLimits, FormKind, FormSpec, PrimePower};
use crate::error::{Error, Result};
use crate::hp::{Ctx, Real};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

/// A single bound query: one target index (integer or prime power) against
/// one form, with the free epsilon.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub form: FormSpec,
    pub target: BoundTarget,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug)]
pub enum BoundTarget {
    Integer(u64),
    PrimePower(PrimePower),
}

impl BoundQuery {
    pub fn new(form: FormSpec, target: BoundTarget, epsilon: f64) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::Invalid("epsilon must be > 0".into()));
        }
        Ok(BoundQuery { form, target, epsilon })
    }
}

/// Hecke estimate |lambda(p^m)| <= c p^((k-1)m) with c = 1 (log scale).
pub fn hecke_upper(pp: PrimePower, k: u32, ctx: &Ctx) -> Real {
    let g = ctx.guarded(32);
    let e = (k as u64 - 1) * pp.m() as u64;
    ctx.mul(&g.from_u64(e), &g.ln_u64(pp.p()))
}

/// Deligne bound d(n) n^((k-1)/2) in log scale (epsilon absorbed by d(n)).
pub fn deligne_upper(n: u64, k: u32, ctx: &Ctx) -> Result<Real> {
    if n == 0 {
        return Err(Error::Domain("deligne_upper: n must be >= 1".into()));
    }
    let d = arith::divisor_count(n)?;
    let g = ctx.guarded(32);
    let half = g.div(&g.from_u64(k as u64 - 1), &g.from_u64(2));
    Ok(ctx.add(&g.ln_u64(d), &g.mul(&half, &g.ln_u64(n))))
}

/// The density-one prime lower bound p^((k-1)/2) loglog p / sqrt(log p)
/// (log scale). Requires p >= 3 so that loglog p > 0.
pub fn gt_lower(p: u64, k: u32, ctx: &Ctx) -> Result<Real> {
    if p <= 2 {
        return Err(Error::Domain(format!(
            "gt_lower: p = {p} <= 2 has loglog p <= 0"
        )));
    }
    let g = ctx.guarded(32);
    let lp = g.ln_u64(p);
    let llp = g.ln(&lp);
    let half = g.div(&g.from_u64(k as u64 - 1), &g.from_u64(2));
    let mut v = g.mul(&half, &lp);
    v = g.add(&v, &g.ln(&llp));
    let half_log_log = g.div(&g.ln(&lp), &g.from_u64(2));
    Ok(ctx.sub(&v, &half_log_log))
}

/// Prime-power variant 2 p^((k-1)m/2) loglog p^m / sqrt(log p^m) (log scale).
pub fn gt_lower_prime_power(pp: PrimePower, k: u32, ctx: &Ctx) -> Result<Real> {
    if pp.m() == 0 || pp.p().pow(pp.m().min(2)) <= 2 {
        return Err(Error::Domain(
            "gt_lower_prime_power: p^m must be >= 3".into(),
        ));
    }
    let g = ctx.guarded(32);
    let lpm = g.mul(&g.from_u64(pp.m() as u64), &g.ln_u64(pp.p()));
    let llpm = g.ln(&lpm);
    let e = g.div(
        &g.from_u64((k as u64 - 1) * pp.m() as u64),
        &g.from_u64(2),
    );
    let mut v = g.mul(&e, &g.ln_u64(pp.p()));
    v = g.add(&v, &g.ln_u64(2));
    v = g.add(&v, &g.ln(&llpm));
    Ok(ctx.sub(&v, &g.div(&g.ln(&lpm), &g.from_u64(2))))
}

/// Effective-Liouville lower bound (1/8) p^((k-3)m/2 - 2k + 2 - eps)
/// (log scale). Requires weight k >= 4.
pub fn thm1_lower(pp: PrimePower, k: u32, epsilon: f64, ctx: &Ctx) -> Result<Real> {
    if k < 4 {
        return Err(Error::UnsupportedWeight(format!(
            "thm1_lower needs k >= 4, got {k}"
        )));
    }
    let g = ctx.guarded(32);
    // (k-3) m / 2 - 2k + 2 - eps
    let mut e = g.div(
        &g.from_u64((k as u64 - 3) * pp.m() as u64),
        &g.from_u64(2),
    );
    e = g.sub(&e, &g.from_u64(2 * k as u64 - 2));
    e = g.sub(&e, &g.from_f64(epsilon));
    let v = g.mul(&e, &g.ln_u64(pp.p()));
    Ok(ctx.sub(&v, &g.ln_u64(8)))
}

/// The lower bound is nontrivial only once p^(m/2) > p^5.
pub fn thm1_nontrivial(pp: PrimePower) -> bool {
    pp.m() > 10
}

/// Density-one lower bound n^((k-3)/2 + logloglog n / loglog n) (log scale).
/// Requires n > e^e, i.e. n >= 16.
pub fn thm2_lower(n: u64, k: u32, ctx: &Ctx) -> Result<Real> {
    if n <= 15 {
        return Err(Error::Domain(format!(
            "thm2_lower: n = {n} <= e^e, logloglog undefined"
        )));
    }
    let g = ctx.guarded(32);
    let ln_n = g.ln_u64(n);
    let ll = g.ln(&ln_n);
    let lll = g.ln(&ll);
    // (k-3)/2 is negative below weight 4; the formula still evaluates
    let half = g.div(&g.from_i64(k as i64 - 3), &g.from_u64(2));
    let e = g.add(&half, &g.div(&lll, &ll));
    Ok(ctx.mul(&e, &ln_n))
}

/// Per-index comparison of the exact coefficient against every applicable
/// bound. Lower-bound flags are None for vanishing coefficients (the bounds
/// apply only to nonvanishing ones).
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: u64,
    pub prime_power: Option<(u64, u32)>,
    pub abs_coeff: BigUint,
    pub vanishing: bool,
    pub log_abs: Option<Real>,
    pub log_deligne: Real,
    pub log_hecke: Option<Real>,
    pub log_gt: Option<Real>,
    pub log_gt_pp: Option<Real>,
    pub log_thm1: Option<Real>,
    pub thm1_nontrivial: bool,
    pub log_thm2: Option<Real>,
    pub deligne_ok: bool,
    pub hecke_ok: Option<bool>,
    pub gt_ok: Option<bool>,
    pub gt_pp_ok: Option<bool>,
    pub thm1_ok: Option<bool>,
    pub thm2_ok: Option<bool>,
}

fn exact_deligne_ok(lambda: &BigInt, n: u64, d: u64, k: u32) -> bool {
    let lhs = lambda * lambda;
    let rhs = BigInt::from(d) * BigInt::from(d) * BigInt::from(n).pow(k - 1);
    lhs <= rhs
}

/// Build the report for one index given its exact coefficient.
pub fn report_for(
    form: &FormSpec,
    n: u64,
    lambda: &BigInt,
    epsilon: f64,
    ctx: &Ctx,
) -> Result<BoundReport> {
    let k = form.weight();
    let factors = arith::factorize(n)?;
    let d: u64 = factors.iter().map(|&(_, v)| v as u64 + 1).product();
    let prime_power = match factors.as_slice() {
        [(p, v)] => Some((*p, *v)),
        _ => None,
    };
    let vanishing = lambda.is_zero();
    let abs = lambda.magnitude().clone();
    let log_abs = if vanishing {
        None
    } else {
        Some(ctx.ln_biguint(&abs))
    };
    let log_deligne = deligne_upper(n, k, ctx)?;
    let deligne_ok = exact_deligne_ok(lambda, n, d, k);

    let mut log_hecke = None;
    let mut log_gt = None;
    let mut log_gt_pp = None;
    let mut log_thm1 = None;
    let mut nontrivial = false;
    if let Some((p, v)) = prime_power {
        let pp = PrimePower::new(p, v)?;
        log_hecke = Some(hecke_upper(pp, k, ctx));
        if v == 1 && p >= 3 {
            log_gt = Some(gt_lower(p, k, ctx)?);
        }
        if pp.p().pow(pp.m().min(2)) > 2 {
            log_gt_pp = Some(gt_lower_prime_power(pp, k, ctx)?);
        }
        if k >= 4 {
            log_thm1 = Some(thm1_lower(pp, k, epsilon, ctx)?);
            nontrivial = thm1_nontrivial(pp);
        }
    }
    let log_thm2 = if n >= 16 { Some(thm2_lower(n, k, ctx)?) } else { None };

    let cmp_upper = |b: &Option<Real>| -> Option<bool> {
        b.as_ref().map(|bound| match &log_abs {
            Some(la) => la <= bound,
            None => true, // |0| below any upper bound
        })
    };
    let cmp_lower = |b: &Option<Real>| -> Option<bool> {
        match (&log_abs, b) {
            (Some(la), Some(bound)) => Some(la >= bound),
            _ => None,
        }
    };

    Ok(BoundReport {
        n,
        prime_power,
        abs_coeff: abs,
        vanishing,
        hecke_ok: cmp_upper(&log_hecke),
        gt_ok: cmp_lower(&log_gt),
        gt_pp_ok: cmp_lower(&log_gt_pp),
        thm1_ok: cmp_lower(&log_thm1),
        thm2_ok: cmp_lower(&log_thm2),
        log_abs,
        log_deligne,
        log_hecke,
        log_gt,
        log_gt_pp,
        log_thm1,
        thm1_nontrivial: nontrivial,
        log_thm2,
        deligne_ok,
    })
}

/// Aggregated sandwich scan: per-index reports plus the exception lists.
#[derive(Clone, Debug, Default)]
pub struct SandwichSummary {
    pub checked: u64,
    pub vanishing: Vec<u64>,
    /// Hard violations of the exact Deligne check. Must be empty.
    pub deligne_violations: Vec<u64>,
    /// Soft exceptions: nonvanishing coefficients below the asymptotic
    /// lower bounds at desk scale.
    pub thm2_exceptions: Vec<u64>,
    pub gt_exceptions: Vec<u64>,
    pub thm1_exceptions: Vec<u64>,
    /// Indices skipped because the coefficient is not computable
    /// (bad-reduction primes of an elliptic curve).
    pub skipped: Vec<u64>,
    pub thm2_checked: u64,
    pub thm2_satisfied: u64,
}

/// Verify the bound sandwich for every index in `ns`.
///
/// Returns the per-index reports and a summary with exceptions collected,
/// never silently dropped.
pub fn verify_sandwich(
    form: &FormSpec,
    ns: &[u64],
    epsilon: f64,
    ctx: &Ctx,
    limits: &EngineLimits,
) -> Result<(Vec<BoundReport>, SandwichSummary)> {
    if ns.is_empty() {
        return Err(Error::EmptyRange("verify_sandwich: no indices".into()));
    }
    let max_n = *ns.iter().max().unwrap();
    // one table lookup per index is far cheaper than per-index factored
    // evaluation over a dense range
    let table: Option<CoeffTable> = match form.kind() {
        FormKind::UserTable => {
            return Err(Error::Invalid(
                "user-table forms verify through verify_sandwich_table".into(),
            ))
        }
        _ if max_n <= limits.table_cap => Some(CoeffTable::build(form, max_n, limits)?),
        _ => None,
    };
    verify_with(form, table.as_ref(), ns, epsilon, ctx, limits)
}

/// Verify the sandwich against an externally supplied coefficient table.
pub fn verify_sandwich_table(
    table: &CoeffTable,
    ns: &[u64],
    epsilon: f64,
    ctx: &Ctx,
) -> Result<(Vec<BoundReport>, SandwichSummary)> {
    if ns.is_empty() {
        return Err(Error::EmptyRange("verify_sandwich: no indices".into()));
    }
    verify_with(
        table.form(),
        Some(table),
        ns,
        epsilon,
        ctx,
        &EngineLimits::default(),
    )
}

fn verify_with(
    form: &FormSpec,
    table: Option<&CoeffTable>,
    ns: &[u64],
    epsilon: f64,
    ctx: &Ctx,
    limits: &EngineLimits,
) -> Result<(Vec<BoundReport>, SandwichSummary)> {
    let mut reports = Vec::with_capacity(ns.len());
    let mut summary = SandwichSummary::default();
    for &n in ns {
        let lambda: Option<BigInt> = match table {
            Some(t) => t.get(n).cloned(),
            None => match coeff::coeff_at_with(form, n, limits) {
                Ok(v) => Some(v),
                Err(Error::BadReduction { .. }) => None,
                Err(e) => return Err(e),
            },
        };
        let lambda = match lambda {
            Some(v) => v,
            None => {
                summary.skipped.push(n);
                continue;
            }
        };
        let r = report_for(form, n, &lambda, epsilon, ctx)?;
        summary.checked += 1;
        if r.vanishing {
            summary.vanishing.push(n);
        }
        if !r.deligne_ok {
            summary.deligne_violations.push(n);
        }
        match r.thm2_ok {
            Some(true) => {
                summary.thm2_checked += 1;
                summary.thm2_satisfied += 1;
            }
            Some(false) => {
                summary.thm2_checked += 1;
                summary.thm2_exceptions.push(n);
            }
            None => {}
        }
        if r.gt_ok == Some(false) {
            summary.gt_exceptions.push(n);
        }
        if r.thm1_ok == Some(false) {
            summary.thm1_exceptions.push(n);
        }
        reports.push(r);
    }
    Ok((reports, summary))
}

/// The three quantities of the weight-12, n = 10^6 style example:
/// (log thm2 lower, exact lambda(n), log Deligne upper).
pub fn section4(
    form: &FormSpec,
    n: u64,
    ctx: &Ctx,
    limits: &EngineLimits,
) -> Result<(Real, BigInt, Real)> {
    let lambda = coeff::coeff_at_with(form, n, limits)?;
    let thm2 = thm2_lower(n, form.weight(), ctx)?;
    let del = deligne_upper(n, form.weight(), ctx)?;
    Ok((thm2, lambda, del))
}
