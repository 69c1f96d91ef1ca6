//! Exact Fourier coefficients lambda(n).
//!
//! - Ramanujan tau by eta-power q-expansion: the sparse theta series for
//!   eta^3 (coefficients (-1)^m (2m+1) at triangular indices) is squared once
//!   into a dense eta^6, then six dense-by-sparse multiplications reach
//!   eta^24, and the final shift by q gives Delta.
//! - Elliptic-curve traces a_p = p + 1 - #E(F_p) by direct point counting.
//! - Prime-power values via the integer Hecke recurrence
//!   lambda(p^(m+1)) = lambda(p) lambda(p^m) - p^(k-1) lambda(p^(m-1)).
//! - Frobenius angles theta_p with cos(theta_p) = lambda(p) / (2 p^((k-1)/2))
//!   and the real Binet form lambda(p^m) = p^((k-1)m/2) sin((m+1)theta)/sin(theta).

use crate::arith;
use crate::error::{Error, Result};
use crate::hp::{Ctx, Real};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

/// Default cap on full-table construction (memory guard).
pub const DEFAULT_TABLE_CAP: u64 = 100_000;

/// Default cap on the point-counting prime for elliptic-curve traces.
pub const DEFAULT_POINT_COUNT_CAP: u64 = 1_000_000;

/// Resource limits threaded through the engine.
#[derive(Clone, Copy, Debug)]
pub struct EngineLimits {
    pub table_cap: u64,
    pub point_count_cap: u64,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            table_cap: DEFAULT_TABLE_CAP,
            point_count_cap: DEFAULT_POINT_COUNT_CAP,
        }
    }
}

/// Which modular form the coefficients come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormKind {
    Delta,
    EllipticCurve { a: i64, b: i64 },
    UserTable,
}

/// A modular form: coefficient source plus weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    weight: u32,
    label: String,
}

impl FormSpec {
    /// The discriminant modular form Delta (weight 12).
    pub fn delta() -> Self {
        FormSpec {
            kind: FormKind::Delta,
            weight: 12,
            label: "delta".into(),
        }
    }

    /// y^2 = x^3 + ax + b with the newform normalization weight k = 2.
    pub fn elliptic_curve(a: i64, b: i64) -> Result<Self> {
        Self::elliptic_curve_with_weight(a, b, 2)
    }

    /// Same curve with an explicit weight override (the k = 4 labeling used
    /// for the curve case in some bound statements).
    pub fn elliptic_curve_with_weight(a: i64, b: i64, weight: u32) -> Result<Self> {
        if weight < 1 {
            return Err(Error::Invalid("weight must be >= 1".into()));
        }
        if ec_discriminant(a, b).is_zero() {
            return Err(Error::Invalid(format!(
                "singular curve: discriminant -16(4*{a}^3 + 27*{b}^2) = 0"
            )));
        }
        Ok(FormSpec {
            kind: FormKind::EllipticCurve { a, b },
            weight,
            label: format!("ec:a={a},b={b}"),
        })
    }

    /// A user-supplied coefficient table of the given weight.
    pub fn user_table(label: &str, weight: u32) -> Result<Self> {
        if weight < 1 {
            return Err(Error::Invalid("weight must be >= 1".into()));
        }
        Ok(FormSpec {
            kind: FormKind::UserTable,
            weight,
            label: label.into(),
        })
    }

    pub fn kind(&self) -> &FormKind {
        &self.kind
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn json_value(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        match self.kind {
            FormKind::Delta => {
                m.insert("kind".into(), "delta".into());
            }
            FormKind::EllipticCurve { a, b } => {
                m.insert("kind".into(), "elliptic_curve".into());
                m.insert("a".into(), a.into());
                m.insert("b".into(), b.into());
            }
            FormKind::UserTable => {
                m.insert("kind".into(), "user_table".into());
            }
        }
        m.insert("weight".into(), self.weight.into());
        m.insert("label".into(), self.label.clone().into());
        serde_json::Value::Object(m)
    }
}

/// -16(4a^3 + 27b^2).
pub fn ec_discriminant(a: i64, b: i64) -> BigInt {
    let a = BigInt::from(a);
    let b = BigInt::from(b);
    BigInt::from(-16) * (BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b)
}

/// p^m with p passing a deterministic primality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    p: u64,
    m: u32,
}

impl PrimePower {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(PrimePower { p, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// Exact coefficient table lambda(n) for 1 <= n <= limit.
///
/// For elliptic-curve forms, indices with a prime factor of bad reduction are
/// absent (the short Weierstrass model is always singular mod 2, so a dense EC
/// table cannot exist).
#[derive(Clone, Debug)]
pub struct CoeffTable {
    form: FormSpec,
    limit: u64,
    values: BTreeMap<u64, BigInt>,
}

impl CoeffTable {
    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn get(&self, n: u64) -> Option<&BigInt> {
        self.values.get(&n)
    }

    pub fn values(&self) -> &BTreeMap<u64, BigInt> {
        &self.values
    }

    /// Wrap externally supplied coefficients (the UserTable source).
    pub fn from_values(form: FormSpec, limit: u64, values: BTreeMap<u64, BigInt>) -> Result<Self> {
        if limit == 0 {
            return Err(Error::EmptyRange("table limit must be >= 1".into()));
        }
        if let Some(l1) = values.get(&1) {
            if matches!(form.kind(), FormKind::Delta) && !l1.is_one() {
                return Err(Error::Invalid("lambda(1) must be 1 for delta".into()));
            }
        }
        if let Some((&n, _)) = values.range(limit + 1..).next() {
            return Err(Error::Invalid(format!("index {n} exceeds limit {limit}")));
        }
        Ok(CoeffTable { form, limit, values })
    }

    /// Build the table for a form. Delta and UserTable tables are dense;
    /// EC tables omit bad-reduction indices.
    pub fn build(form: &FormSpec, limit: u64, limits: &EngineLimits) -> Result<Self> {
        match form.kind() {
            FormKind::Delta => tau_series_with_cap(limit, limits.table_cap),
            FormKind::EllipticCurve { a, b } => ec_table(form, *a, *b, limit, limits),
            FormKind::UserTable => Err(Error::Invalid(
                "user tables are loaded from CSV, not computed".into(),
            )),
        }
    }

    /// CSV rows `n,lambda` with a header line.
    pub fn to_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "n,lambda")?;
        for (n, v) in &self.values {
            writeln!(w, "{n},{v}")?;
        }
        Ok(())
    }

    /// Parse CSV rows `n,lambda` (header optional).
    pub fn from_csv<R: BufRead>(form: FormSpec, r: R) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut limit = 0u64;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with('n')) {
                continue;
            }
            let (ns, vs) = line
                .split_once(',')
                .ok_or_else(|| Error::Invalid(format!("bad csv row: {line}")))?;
            let n: u64 = ns
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad index: {ns}")))?;
            let v: BigInt = vs
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad integer: {vs}")))?;
            limit = limit.max(n);
            values.insert(n, v);
        }
        Self::from_values(form, limit.max(1), values)
    }

    /// Big integers as decimal strings, keys in ascending numeric order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut vals = serde_json::Map::new();
        for (n, v) in &self.values {
            vals.insert(n.to_string(), v.to_string().into());
        }
        serde_json::json!({
            "form": self.form.json_value(),
            "limit": self.limit,
            "values": serde_json::Value::Object(vals),
        })
    }

    /// Exact structural checks: lambda(1) = 1, multiplicativity on coprime
    /// pairs, and the Deligne bound |lambda(n)|^2 <= d(n)^2 n^(k-1) as exact
    /// integer comparisons. Returns the list of offending indices (empty on
    /// a healthy table).
    pub fn validate(&self) -> Result<Vec<u64>> {
        let mut bad = Vec::new();
        if let Some(v) = self.values.get(&1) {
            if !v.is_one() {
                bad.push(1);
            }
        }
        // multiplicativity: m coprime n, m <= sqrt(limit)
        let root = (self.limit as f64).sqrt() as u64 + 1;
        for m in 2..=root.min(self.limit) {
            let lm = match self.values.get(&m) {
                Some(v) => v,
                None => continue,
            };
            let mut n = m + 1;
            while m * n <= self.limit {
                if arith::gcd(m, n) == 1 {
                    if let (Some(ln), Some(lmn)) = (self.values.get(&n), self.values.get(&(m * n))) {
                        if lm * ln != *lmn {
                            bad.push(m * n);
                        }
                    }
                }
                n += 1;
            }
        }
        // Deligne: |lambda(n)|^2 <= d(n)^2 * n^(k-1)
        let k = self.form.weight();
        let spf = arith::spf_sieve(self.limit as usize);
        for (&n, v) in &self.values {
            if n == 0 {
                continue;
            }
            let d: u64 = arith::factor_with_spf(n as usize, &spf)
                .iter()
                .map(|&(_, e)| e as u64 + 1)
                .product();
            let lhs = v * v;
            let rhs = BigInt::from(d) * BigInt::from(d) * BigInt::from(n).pow(k - 1);
            if lhs > rhs {
                bad.push(n);
            }
        }
        bad.sort_unstable();
        bad.dedup();
        Ok(bad)
    }
}

/// Sparse theta series for eta^3: coefficient (-1)^m (2m+1) at m(m+1)/2.
fn eta3_sparse(limit: usize) -> Vec<(usize, i64)> {
    let mut t = Vec::new();
    let mut m = 0usize;
    loop {
        let e = m * (m + 1) / 2;
        if e > limit {
            break;
        }
        let c = (2 * m + 1) as i64;
        t.push((e, if m % 2 == 0 { c } else { -c }));
        m += 1;
    }
    t
}

/// Dense eta^6 from squaring the sparse eta^3 series.
fn eta6_dense(limit: usize, sparse: &[(usize, i64)]) -> Vec<i64> {
    let mut out = vec![0i64; limit + 1];
    for (i, &(ta, sa)) in sparse.iter().enumerate() {
        for &(tb, sb) in &sparse[i..] {
            let e = ta + tb;
            if e > limit {
                break;
            }
            let c = sa * sb;
            out[e] += if ta == tb { c } else { 2 * c };
        }
    }
    out
}

/// One dense-by-sparse multiplication pass with overflow detection.
/// Summation order per output index is fixed, so the result is
/// bit-deterministic regardless of the rayon thread count.
fn mul_sparse_i128(prev: &[i128], sparse: &[(usize, i64)]) -> Option<Vec<i128>> {
    prev.par_iter()
        .enumerate()
        .map(|(j, _)| {
            let mut acc: i128 = 0;
            for &(t, s) in sparse {
                if t > j {
                    break;
                }
                acc = acc.checked_add((s as i128).checked_mul(prev[j - t])?)?;
            }
            Some(acc)
        })
        .collect()
}

fn mul_sparse_big(prev: &[BigInt], sparse: &[(usize, i64)]) -> Vec<BigInt> {
    prev.par_iter()
        .enumerate()
        .map(|(j, _)| {
            let mut acc = BigInt::zero();
            for &(t, s) in sparse {
                if t > j {
                    break;
                }
                acc += BigInt::from(s) * &prev[j - t];
            }
            acc
        })
        .collect()
}

/// Exact tau(n) for 1 <= n <= n_max with the default table cap.
pub fn tau_series(n_max: u64) -> Result<CoeffTable> {
    tau_series_with_cap(n_max, DEFAULT_TABLE_CAP)
}

/// Exact tau(n) table with an explicit memory-guard cap.
pub fn tau_series_with_cap(n_max: u64, cap: u64) -> Result<CoeffTable> {
    if n_max == 0 {
        return Err(Error::EmptyRange("tau_series: empty range (N = 0)".into()));
    }
    if n_max > cap {
        return Err(Error::Resource(format!(
            "tau_series: N = {n_max} exceeds table cap {cap}"
        )));
    }
    let limit = (n_max - 1) as usize; // eta^24 degree needed after the q-shift
    let sparse = eta3_sparse(limit);
    let f6 = eta6_dense(limit, &sparse);

    // eta^6 -> eta^24 by six sparse multiplications; i128 fast path first.
    let coeffs: Vec<BigInt> = {
        let start: Vec<i128> = f6.iter().map(|&v| v as i128).collect();
        let mut cur = Some(start);
        for _ in 0..6 {
            cur = cur.and_then(|prev| mul_sparse_i128(&prev, &sparse));
        }
        match cur {
            Some(v) => v.into_iter().map(BigInt::from).collect(),
            None => {
                // overflow: redo in big integers
                let mut prev: Vec<BigInt> = f6.iter().map(|&v| BigInt::from(v)).collect();
                for _ in 0..6 {
                    prev = mul_sparse_big(&prev, &sparse);
                }
                prev
            }
        }
    };

    let values: BTreeMap<u64, BigInt> = coeffs
        .into_iter()
        .enumerate()
        .map(|(i, v)| (i as u64 + 1, v))
        .collect();
    Ok(CoeffTable {
        form: FormSpec::delta(),
        limit: n_max,
        values,
    })
}

/// Trace of Frobenius a_p = p + 1 - #E(F_p) for y^2 = x^3 + ax + b,
/// by direct point counting with a quadratic-residue table.
pub fn ec_trace(a: i64, b: i64, p: u64) -> Result<i64> {
    ec_trace_with_cap(a, b, p, DEFAULT_POINT_COUNT_CAP)
}

pub fn ec_trace_with_cap(a: i64, b: i64, p: u64, cap: u64) -> Result<i64> {
    if !arith::is_prime(p) {
        return Err(Error::Invalid(format!("ec_trace: {p} is not prime")));
    }
    if p > cap {
        return Err(Error::Resource(format!(
            "ec_trace: p = {p} exceeds point-counting cap {cap}"
        )));
    }
    let am = a.rem_euclid(p as i64) as u64;
    let bm = b.rem_euclid(p as i64) as u64;
    // disc mod p: -16(4a^3 + 27b^2); p = 2 always divides it
    let disc = (16 * (4 * arith::powmod(am, 3, p) % p + 27 * arith::powmod(bm, 2, p) % p)) % p;
    if disc == 0 {
        return Err(Error::BadReduction { a, b, p });
    }

    // number of y with y^2 = v: 1 + chi(v) for odd p (chi via residue table)
    let mut is_square = vec![false; p as usize];
    for y in 0..p {
        is_square[arith::mulmod(y, y, p) as usize] = true;
    }
    let mut count: u64 = 1; // point at infinity
    for x in 0..p {
        let v = (arith::powmod(x, 3, p) + arith::mulmod(am, x, p) + bm) % p;
        count += if v == 0 {
            1
        } else if is_square[v as usize] {
            2
        } else {
            0
        };
    }
    let ap = p as i64 + 1 - count as i64;
    debug_assert!((ap as i128) * (ap as i128) <= 4 * p as i128, "Hasse bound");
    Ok(ap)
}

/// Exact lambda(p^m) by the Hecke recurrence from lambda(p).
pub fn hecke_prime_power(lambda_p: &BigInt, pp: PrimePower, k: u32) -> BigInt {
    let m = pp.m();
    if m == 0 {
        return BigInt::one();
    }
    if m == 1 {
        return lambda_p.clone();
    }
    let pk1 = BigInt::from(pp.p()).pow(k - 1);
    let mut prev = BigInt::one();
    let mut cur = lambda_p.clone();
    for _ in 1..m {
        let next = lambda_p * &cur - &pk1 * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn ec_table(form: &FormSpec, a: i64, b: i64, limit: u64, limits: &EngineLimits) -> Result<CoeffTable> {
    if limit == 0 {
        return Err(Error::EmptyRange("table limit must be >= 1".into()));
    }
    if limit > limits.table_cap {
        return Err(Error::Resource(format!(
            "table limit {limit} exceeds cap {}",
            limits.table_cap
        )));
    }
    let k = form.weight();
    let spf = arith::spf_sieve(limit as usize);
    let mut prime_power_values: BTreeMap<(u64, u32), Option<BigInt>> = BTreeMap::new();
    let mut values: BTreeMap<u64, BigInt> = BTreeMap::new();
    values.insert(1, BigInt::one());
    for n in 2..=limit {
        let p = spf[n as usize] as u64;
        let mut v = 0u32;
        let mut r = n;
        while r % p == 0 {
            r /= p;
            v += 1;
        }
        let ppv = prime_power_values
            .entry((p, v))
            .or_insert_with(|| {
                let trace = ec_trace_with_cap(a, b, p, limits.point_count_cap).ok()?;
                let pp = PrimePower::new(p, v).ok()?;
                Some(hecke_prime_power(&BigInt::from(trace), pp, k))
            })
            .clone();
        if let (Some(ppv), Some(rest)) = (ppv, values.get(&r)) {
            values.insert(n, ppv * rest);
        }
    }
    Ok(CoeffTable {
        form: form.clone(),
        limit,
        values,
    })
}

/// Exact lambda(n) by factoring n and combining prime-power values
/// multiplicatively.
pub fn coeff_at(form: &FormSpec, n: u64) -> Result<BigInt> {
    coeff_at_with(form, n, &EngineLimits::default())
}

pub fn coeff_at_with(form: &FormSpec, n: u64, limits: &EngineLimits) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Domain("coeff_at: n must be >= 1".into()));
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let factors = arith::factorize(n)?;
    let k = form.weight();
    let mut acc = BigInt::one();
    match form.kind() {
        FormKind::Delta => {
            let max_p = factors.iter().map(|&(p, _)| p).max().unwrap();
            if max_p > limits.table_cap {
                return Err(Error::Resource(format!(
                    "coeff_at: prime factor {max_p} exceeds table cap {}",
                    limits.table_cap
                )));
            }
            let table = tau_series_with_cap(max_p, limits.table_cap)?;
            for &(p, v) in &factors {
                let lp = table.get(p).expect("prime within table range");
                acc *= hecke_prime_power(lp, PrimePower::new(p, v)?, k);
            }
        }
        FormKind::EllipticCurve { a, b } => {
            for &(p, v) in &factors {
                let tr = ec_trace_with_cap(*a, *b, p, limits.point_count_cap)?;
                acc *= hecke_prime_power(&BigInt::from(tr), PrimePower::new(p, v)?, k);
            }
        }
        FormKind::UserTable => {
            return Err(Error::Invalid(
                "coeff_at: user-table coefficients are read with CoeffTable::get".into(),
            ));
        }
    }
    Ok(acc)
}

/// Frobenius angle theta in [0, pi] with cos(theta) = lambda(p)/(2 p^((k-1)/2)).
#[derive(Clone, Debug)]
pub struct FrobeniusAngle {
    p: u64,
    k: u32,
    lambda_p: BigInt,
    theta: Real,
    precision_bits: usize,
    degenerate: bool,
}

impl FrobeniusAngle {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn lambda_p(&self) -> &BigInt {
        &self.lambda_p
    }

    pub fn theta(&self) -> &Real {
        &self.theta
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// True when theta is exactly 0 or pi (|lambda(p)| = 2 p^((k-1)/2),
    /// a repeated root of the Hecke polynomial).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// Compute the Frobenius angle at the requested precision.
///
/// Rejects inputs with |lambda(p)| > 2 p^((k-1)/2) (such data violates the
/// Deligne bound, signalling a broken coefficient source).
pub fn frobenius_angle(lambda_p: &BigInt, p: u64, k: u32, precision_bits: usize) -> Result<FrobeniusAngle> {
    if !arith::is_prime(p) {
        return Err(Error::Invalid(format!("frobenius_angle: {p} is not prime")));
    }
    let pk1 = BigUint::from(p).pow(k - 1);
    let lhs = (lambda_p * lambda_p).magnitude().clone();
    let rhs = BigUint::from(4u8) * &pk1;
    if lhs > rhs {
        return Err(Error::DeligneViolation {
            p,
            lambda_abs: lambda_p.magnitude().to_string(),
        });
    }
    let degenerate = lhs == rhs;
    let ctx = Ctx::new(precision_bits).guarded(32);
    // cos(theta) = lambda / (2 sqrt(p^(k-1)))
    let denom = ctx.mul(&ctx.from_u64(2), &ctx.sqrt(&ctx.from_biguint(&pk1)));
    let cosv = ctx.div(&ctx.from_bigint(lambda_p), &denom);
    let theta = Ctx::new(precision_bits).acos(&cosv);
    Ok(FrobeniusAngle {
        p,
        k,
        lambda_p: lambda_p.clone(),
        theta,
        precision_bits,
        degenerate,
    })
}

/// Real Binet evaluation lambda(p^m) ~ p^((k-1)m/2) sin((m+1)theta)/sin(theta).
pub fn binet_eval(angle: &FrobeniusAngle, m: u32) -> Result<Real> {
    if angle.degenerate {
        return Err(Error::DegenerateAngle { p: angle.p });
    }
    let ctx = Ctx::new(angle.precision_bits);
    if m == 0 {
        return Ok(ctx.one());
    }
    let g = ctx.guarded(32);
    let theta = angle.theta();
    let sin_theta = g.sin(theta);
    let arg = g.mul(&g.from_u64(m as u64 + 1), theta);
    let sin_m = g.sin(&arg);
    let scale_sq = BigUint::from(angle.p).pow((angle.k - 1) * m);
    let scale = g.sqrt(&g.from_biguint(&scale_sq));
    Ok(ctx.div(&g.mul(&scale, &sin_m), &sin_theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_first_values() {
        let t = tau_series(10).unwrap();
        let expect: [i64; 10] = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(t.get(i as u64 + 1).unwrap(), &BigInt::from(*e), "tau({})", i + 1);
        }
    }

    #[test]
    fn tau_series_errors() {
        assert!(matches!(tau_series(0), Err(Error::EmptyRange(_))));
        assert!(matches!(
            tau_series_with_cap(1000, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn tau_table_validates() {
        let t = tau_series(2000).unwrap();
        assert!(t.validate().unwrap().is_empty());
    }

    #[test]
    fn hecke_base_cases() {
        let lp = BigInt::from(-24);
        let pp0 = PrimePower::new(2, 0).unwrap();
        let pp1 = PrimePower::new(2, 1).unwrap();
        let pp2 = PrimePower::new(2, 2).unwrap();
        assert_eq!(hecke_prime_power(&lp, pp0, 12), BigInt::one());
        assert_eq!(hecke_prime_power(&lp, pp1, 12), lp);
        // (-24)^2 - 2^11 = 576 - 2048
        assert_eq!(hecke_prime_power(&lp, pp2, 12), BigInt::from(-1472));
    }

    #[test]
    fn coeff_at_multiplicative_spot() {
        let delta = FormSpec::delta();
        assert_eq!(coeff_at(&delta, 1).unwrap(), BigInt::one());
        // tau(6) = tau(2) tau(3) = -24 * 252
        assert_eq!(coeff_at(&delta, 6).unwrap(), BigInt::from(-6048));
    }

    #[test]
    fn ec_trace_known_values() {
        // y^2 = x^3 + 1 over F_5 has 6 points
        assert_eq!(ec_trace(0, 1, 5).unwrap(), 0);
        // p = 2 always divides the discriminant of the short model
        assert!(matches!(ec_trace(0, 1, 2), Err(Error::BadReduction { .. })));
        // good reduction at 3 for a = 1, b = 0
        assert_eq!(ec_trace(1, 0, 3).unwrap(), 0);
        // singular over Q
        assert!(FormSpec::elliptic_curve(0, 0).is_err());
        assert!(matches!(ec_trace(-3, 2, 7), Err(Error::BadReduction { .. })));
        assert!(matches!(ec_trace_with_cap(0, 1, 1_000_003, 1_000_000), Err(Error::Resource(_))));
    }

    #[test]
    fn frobenius_angle_edges() {
        // lambda = 0 -> theta = pi/2
        let ang = frobenius_angle(&BigInt::zero(), 5, 12, 128).unwrap();
        let ctx = Ctx::new(128);
        let half_pi = ctx.div(&ctx.pi(), &ctx.from_u64(2));
        let diff = ctx.abs(&ctx.sub(ang.theta(), &half_pi)).to_f64();
        assert!(diff < 1e-35);
        assert!(!ang.is_degenerate());

        // boundary: lambda(p) = 2 p^((k-1)/2) for k odd (p^(k-1) a perfect square)
        let lam = BigInt::from(2 * 3i64.pow(2)); // k = 5: 2 * 3^2
        let ang = frobenius_angle(&lam, 3, 5, 96).unwrap();
        assert!(ang.is_degenerate());
        assert!(ang.theta().to_f64().abs() < 1e-20);
        assert!(matches!(binet_eval(&ang, 3), Err(Error::DegenerateAngle { .. })));

        // Deligne violation rejected
        let too_big = BigInt::from(2 * 9 + 1);
        assert!(matches!(
            frobenius_angle(&too_big, 3, 5, 96),
            Err(Error::DeligneViolation { .. })
        ));
    }

    #[test]
    fn binet_matches_recurrence_spot() {
        let ang = frobenius_angle(&BigInt::from(-24), 2, 12, 128).unwrap();
        // m = 0 and m = 1 identities
        assert!((binet_eval(&ang, 0).unwrap().to_f64() - 1.0).abs() < 1e-30);
        assert!((binet_eval(&ang, 1).unwrap().to_f64() + 24.0).abs() < 1e-25);
        // m = 5 against the integer recurrence
        let exact = hecke_prime_power(&BigInt::from(-24), PrimePower::new(2, 5).unwrap(), 12);
        let ctx = Ctx::new(128);
        let b = binet_eval(&ang, 5).unwrap();
        let rel = ctx
            .abs(&ctx.div(&ctx.sub(&b, &ctx.from_bigint(&exact)), &ctx.from_bigint(&exact)))
            .to_f64();
        assert!(rel < 1e-20, "relative error {rel}");
    }

    #[test]
    fn ec_table_has_gaps_at_bad_primes() {
        let form = FormSpec::elliptic_curve(0, 1).unwrap(); // disc = -432 = -2^4 3^3
        let t = CoeffTable::build(&form, 20, &EngineLimits::default()).unwrap();
        assert!(t.get(2).is_none());
        assert!(t.get(3).is_none());
        assert!(t.get(6).is_none());
        assert_eq!(t.get(1).unwrap(), &BigInt::one());
        assert_eq!(t.get(5).unwrap(), &BigInt::zero()); // a_5 = 0
        assert!(t.get(7).is_some());
        assert!(t.validate().unwrap().is_empty());
    }

    #[test]
    fn csv_roundtrip() {
        let t = tau_series(12).unwrap();
        let mut buf = Vec::new();
        t.to_csv(&mut buf).unwrap();
        let form = FormSpec::user_table("tau-copy", 12).unwrap();
        let back = CoeffTable::from_csv(form, &buf[..]).unwrap();
        assert_eq!(back.limit(), 12);
        for n in 1..=12 {
            assert_eq!(back.get(n), t.get(n));
        }
    }
}
