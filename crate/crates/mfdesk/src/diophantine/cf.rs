//! Continued fractions and convergents.
//!
//! Inputs come in four exactness classes: rationals (terminating Euclid),
//! quadratic surds (P,Q,D integer recurrence, no rounding anywhere),
//! algebraic roots (refinable Sturm enclosures mapped through the convergent
//! Moebius transform), and plain high-precision reals (interval extraction
//! that raises a precision error once the enclosure stops determining
//! floors).

use super::poly::MinimalPolynomial;
use crate::error::{Error, Result};
use crate::hp::{Ctx, Real};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A rational in canonical form: gcd(num, den) = 1, den > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalApprox {
    num: BigInt,
    den: BigInt,
}

impl RationalApprox {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let q = BigRational::new(num, den); // reduces and fixes the sign
        Ok(Self::from_ratio(&q))
    }

    pub fn from_ratio(q: &BigRational) -> Self {
        RationalApprox {
            num: q.numer().clone(),
            den: q.denom().clone(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    /// H(p/q) = max(|p|, q).
    pub fn height(&self) -> BigUint {
        self.num.magnitude().clone().max(self.den.magnitude().clone())
    }
}

impl fmt::Display for RationalApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// (p + sqrt(d)) / q with d >= 2 nonsquare and the classical invariant
/// q | d - p^2, so the continued-fraction step stays in integers.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigUint,
}

impl QuadraticSurd {
    /// (a + b sqrt(d)) / c. Requires b != 0, c != 0, and d nonsquare >= 2.
    pub fn new(a: i64, b: i64, c: i64, d: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::Invalid("b = 0: the value is rational".into()));
        }
        if c == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if d < 2 || is_square(&BigUint::from(d)) {
            return Err(Error::Invalid(format!(
                "d = {d} is a perfect square or < 2: the value is rational"
            )));
        }
        // fold |b| into the radicand; flip signs for negative b so the
        // representation is always (P + sqrt(D)) / Q
        let mut big_d = BigUint::from(d) * BigUint::from(b.unsigned_abs()).pow(2);
        let (mut p, mut q) = if b > 0 {
            (BigInt::from(a), BigInt::from(c))
        } else {
            (BigInt::from(-a), BigInt::from(-c))
        };
        // enforce q | d - p^2
        let diff = BigInt::from(big_d.clone()) - &p * &p;
        if !(&diff % &q).is_zero() {
            let qa = q.abs();
            p *= &qa;
            big_d *= qa.magnitude().pow(2);
            q *= qa;
        }
        Ok(QuadraticSurd { p, q, d: big_d })
    }

    pub fn sqrt_of(d: u64) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    /// (1 + sqrt(5)) / 2.
    pub fn golden_ratio() -> Self {
        Self::new(1, 1, 2, 5).expect("golden ratio is a valid surd")
    }

    /// Compare sqrt(d) with an integer expression t (exact; never Equal
    /// since d is nonsquare).
    fn cmp_sqrt(&self, t: &BigInt) -> Ordering {
        if t.is_negative() {
            return Ordering::Greater;
        }
        BigInt::from(self.d.clone()).cmp(&(t * t))
    }

    /// self >= t for an integer t (exact).
    fn ge_int(&self, t: &BigInt) -> bool {
        let rhs = t * &self.q - &self.p; // compare sqrt(d) with t q - p
        if self.q.is_positive() {
            self.cmp_sqrt(&rhs) == Ordering::Greater
        } else {
            self.cmp_sqrt(&rhs) == Ordering::Less
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let s = BigInt::from(self.d.sqrt());
        let mut t = (&self.p + s).div_floor(&self.q);
        while !self.ge_int(&t) {
            t -= 1;
        }
        loop {
            let next = &t + 1;
            if self.ge_int(&next) {
                t = next;
            } else {
                break;
            }
        }
        t
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // (p + sqrt(d))/q vs u/v  <=>  v sqrt(d) vs u q - v p (for q, v > 0)
        let u = r.numer();
        let v = r.denom(); // > 0
        let rhs = u * &self.q - v * &self.p;
        let flip = self.q.is_negative();
        let ord = if rhs.is_negative() {
            Ordering::Greater
        } else {
            (BigInt::from(self.d.clone()) * v * v).cmp(&(&rhs * &rhs))
        };
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }

    pub fn to_real(&self, ctx: &Ctx) -> Real {
        let g = ctx.guarded(32);
        let s = g.sqrt(&g.from_biguint(&self.d));
        ctx.div(&g.add(&g.from_bigint(&self.p), &s), &g.from_bigint(&self.q))
    }

    /// One continued-fraction step: (floor, 1/(x - floor)).
    fn cf_step(&self) -> (BigInt, QuadraticSurd) {
        let a = self.floor();
        let p_next = &a * &self.q - &self.p;
        let q_next = (BigInt::from(self.d.clone()) - &p_next * &p_next) / &self.q;
        (
            a,
            QuadraticSurd {
                p: p_next,
                q: q_next,
                d: self.d.clone(),
            },
        )
    }
}

fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Partial quotients with their convergents p_m/q_m.
#[derive(Clone, Debug)]
pub struct ConvergentSeq {
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<RationalApprox>,
    /// True when the expansion terminated exactly (rational input), so the
    /// last convergent equals the value.
    pub exact_terminated: bool,
}

impl ConvergentSeq {
    fn from_quotients(quotients: Vec<BigInt>, exact_terminated: bool) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        // (p_{-2}, p_{-1}) = (0, 1) and (q_{-2}, q_{-1}) = (1, 0)
        let mut p_prev = BigInt::zero();
        let mut p_cur = BigInt::one();
        let mut q_prev = BigInt::one();
        let mut q_cur = BigInt::zero();
        for a in &quotients {
            let p_next = a * &p_cur + &p_prev;
            let q_next = a * &q_cur + &q_prev;
            p_prev = std::mem::replace(&mut p_cur, p_next);
            q_prev = std::mem::replace(&mut q_cur, q_next);
            convergents.push(RationalApprox {
                num: p_cur.clone(),
                den: q_cur.clone(),
            });
        }
        ConvergentSeq {
            partial_quotients: quotients,
            convergents,
            exact_terminated,
        }
    }
}

/// What to expand: exact rational, exact quadratic surd, or a finite-precision
/// real (which can exhaust its precision).
#[derive(Clone, Debug)]
pub enum CfInput {
    Rational(BigRational),
    Surd(QuadraticSurd),
    Real(Real),
}

/// First `count` convergents of the input. Rational inputs may terminate
/// earlier; real inputs raise a precision error if the enclosure stops
/// determining partial quotients before `count` terms.
pub fn convergents_of(input: &CfInput, count: usize) -> Result<ConvergentSeq> {
    if count == 0 {
        return Err(Error::EmptyRange("convergents_of: count must be >= 1".into()));
    }
    match input {
        CfInput::Rational(q) => {
            let mut quotients = Vec::new();
            let mut num = q.numer().clone();
            let mut den = q.denom().clone();
            while quotients.len() < count {
                let a = num.div_floor(&den);
                quotients.push(a.clone());
                let rem = num - &a * &den;
                if rem.is_zero() {
                    return Ok(ConvergentSeq::from_quotients(quotients, true));
                }
                num = den;
                den = rem;
            }
            Ok(ConvergentSeq::from_quotients(quotients, false))
        }
        CfInput::Surd(s) => {
            let mut quotients = Vec::new();
            let mut cur = s.clone();
            for _ in 0..count {
                let (a, next) = cur.cf_step();
                quotients.push(a);
                cur = next;
            }
            Ok(ConvergentSeq::from_quotients(quotients, false))
        }
        CfInput::Real(v) => {
            let exact = v.to_rational();
            // one-ulp enclosure from the raw precision
            let ulp = real_ulp(v);
            let mut lo = &exact - &ulp;
            let mut hi = &exact + &ulp;
            let mut quotients = Vec::new();
            loop {
                let fl = lo.floor().to_integer();
                if fl != hi.floor().to_integer() {
                    return Err(Error::Precision(format!(
                        "real input resolves only {} partial quotients at this precision",
                        quotients.len()
                    )));
                }
                quotients.push(fl.clone());
                if quotients.len() == count {
                    return Ok(ConvergentSeq::from_quotients(quotients, false));
                }
                let flq = BigRational::from(fl);
                let lo_frac = &lo - &flq;
                let hi_frac = &hi - &flq;
                if lo_frac.is_zero() || lo_frac.is_negative() {
                    return Err(Error::Precision(format!(
                        "real input is indistinguishable from a rational after {} terms",
                        quotients.len()
                    )));
                }
                lo = hi_frac.recip();
                hi = lo_frac.recip();
            }
        }
    }
}

fn real_ulp(v: &Real) -> BigRational {
    match v.raw().as_raw_parts() {
        Some((_, n, _, e, _)) => {
            let shift = e as i64 - n as i64 + 1;
            if shift >= 0 {
                BigRational::from(BigInt::from(1u8) << shift as u64)
            } else {
                BigRational::new(BigInt::one(), BigInt::from(1u8) << (-shift) as u64)
            }
        }
        None => BigRational::new(BigInt::one(), BigInt::from(u64::MAX)),
    }
}

/// First `count` convergents of the real root of `f` selected by
/// `root_index` (ascending order), with the enclosure refined on demand.
/// Rational roots are delegated to the exact rational path.
pub fn convergents_of_root(
    f: &MinimalPolynomial,
    root_index: usize,
    count: usize,
) -> Result<ConvergentSeq> {
    if count == 0 {
        return Err(Error::EmptyRange("convergents_of_root: count must be >= 1".into()));
    }
    let mut enc = f.root_enclosure(root_index)?;
    if let Some(r) = enc.rational_value() {
        return convergents_of(&CfInput::Rational(r), count);
    }
    // detect rational roots hiding in the isolating interval
    for r in f.rational_roots() {
        let (lo, hi) = enc.bounds();
        if *lo <= r && r <= *hi {
            return convergents_of(&CfInput::Rational(r), count);
        }
    }

    let mut quotients: Vec<BigInt> = Vec::new();
    // with (p_{-1}, q_{-1}) = (1, 0) and (p_{-2}, q_{-2}) = (0, 1), the tail
    // x_i = (p_{i-2} - alpha q_{i-2}) / (alpha q_{i-1} - p_{i-1}) starts at
    // x_0 = (0 - alpha)/(0 - 1) = alpha
    let mut pm2 = BigInt::zero();
    let mut pm1 = BigInt::one();
    let mut qm2 = BigInt::one();
    let mut qm1 = BigInt::zero();
    let mut budget: usize = 512 + 256 * count;
    while quotients.len() < count {
        let a = loop {
            if let Some((xlo, xhi)) = tail_interval(&enc, &pm2, &pm1, &qm2, &qm1) {
                let fl = xlo.floor().to_integer();
                if fl == xhi.floor().to_integer() {
                    break fl;
                }
            }
            if budget == 0 {
                return Err(Error::Precision(format!(
                    "root refinement budget exhausted after {} quotients",
                    quotients.len()
                )));
            }
            let steps = 32.min(budget);
            enc.refine_steps(steps);
            budget -= steps;
            if enc.rational_value().is_some() {
                return Err(Error::Precision(
                    "selected root collapsed to a rational during refinement".into(),
                ));
            }
        };
        // advance convergents: p_i = a p_{i-1} + p_{i-2}
        let p_new = &a * &pm1 + &pm2;
        let q_new = &a * &qm1 + &qm2;
        pm2 = std::mem::replace(&mut pm1, p_new);
        qm2 = std::mem::replace(&mut qm1, q_new);
        quotients.push(a);
    }
    Ok(ConvergentSeq::from_quotients(quotients, false))
}

/// Interval for the continued-fraction tail x_i given the enclosure of alpha
/// and the previous two convergents. None while the denominator interval
/// still straddles zero.
fn tail_interval(
    enc: &super::poly::RootEnclosure<'_>,
    pm2: &BigInt,
    pm1: &BigInt,
    qm2: &BigInt,
    qm1: &BigInt,
) -> Option<(BigRational, BigRational)> {
    let (alo, ahi) = enc.bounds();
    let num = |a: &BigRational| -> BigRational { BigRational::from(pm2.clone()) - a * BigRational::from(qm2.clone()) };
    let den = |a: &BigRational| -> BigRational { a * BigRational::from(qm1.clone()) - BigRational::from(pm1.clone()) };
    let d1 = den(alo);
    let d2 = den(ahi);
    if d1.is_zero() || d2.is_zero() || d1.is_negative() != d2.is_negative() {
        return None;
    }
    let n1 = num(alo);
    let n2 = num(ahi);
    let candidates = [&n1 / &d1, &n1 / &d2, &n2 / &d1, &n2 / &d2];
    let mut lo = candidates[0].clone();
    let mut hi = candidates[0].clone();
    for c in &candidates[1..] {
        if *c < lo {
            lo = c.clone();
        }
        if *c > hi {
            hi = c.clone();
        }
    }
    Some((lo, hi))
}
