//! High-precision real arithmetic.
//!
//! Thin wrapper over `astro_float` with explicit working precision, plus the
//! fixed constant literals (Euler gamma, Mertens B) and a Spouge-series gamma
//! function. All certified comparisons in this crate happen on exact
//! integer/rational values; this layer only produces reported values and
//! soft comparisons, so round-to-even with guard bits is sufficient.

use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;

const RM: RoundingMode = RoundingMode::ToEven;

/// Euler-Mascheroni constant, 50 decimal digits (rounded).
pub const EULER_GAMMA_LITERAL: &str = "0.57721566490153286060651209008240243104215933593992";

/// Mertens constant B = lim (sum_{p<=x} 1/p - loglog x), 50 decimal digits (rounded).
pub const MERTENS_B_LITERAL: &str = "0.26149721284764278375542683860869585905156664826120";

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// An arbitrary-precision real number. Finite by construction in this crate.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn raw(&self) -> &BigFloat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    /// Nearest f64 (up to the float's own error); saturates on huge exponents.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _) = self.0.as_raw_parts().expect("finite value");
        let mut v = 0.0f64;
        // value = 0.mantissa * 2^e with the top mantissa bit set
        if let Some(&top) = words.last() {
            v = top as f64 / 2f64.powi(64);
        }
        if words.len() >= 2 {
            v += words[words.len() - 2] as f64 / 2f64.powi(128);
        }
        let r = v * 2f64.powf(e as f64);
        if sign == Sign::Neg {
            -r
        } else {
            r
        }
    }

    /// The value as an exact dyadic rational. Exact: every finite BigFloat is
    /// mantissa * 2^(e - bits).
    pub fn to_rational(&self) -> BigRational {
        if self.0.is_zero() {
            return BigRational::zero();
        }
        let (words, n, sign, e, _) = self.0.as_raw_parts().expect("finite value");
        let mut m = BigUint::zero();
        for &w in words.iter().rev() {
            m = (m << 64) | BigUint::from(w);
        }
        let mut num = BigInt::from(m);
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = e as i64 - n as i64;
        if shift >= 0 {
            BigRational::from(num << shift as u64)
        } else {
            BigRational::new(num, BigInt::from(1u8) << ((-shift) as u64))
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|v| v.cmp(&0))
    }
}

/// Evaluation context carrying the working precision in bits.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    bits: usize,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Ctx { bits: bits.max(32) }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Same context with extra guard bits.
    pub fn guarded(&self, extra: usize) -> Ctx {
        Ctx::new(self.bits + extra)
    }

    pub fn zero(&self) -> Real {
        Real(BigFloat::new(self.bits))
    }

    pub fn one(&self) -> Real {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Real {
        Real(BigFloat::from_u64(v, self.bits))
    }

    pub fn from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    pub fn from_biguint(&self, v: &BigUint) -> Real {
        if v.is_zero() {
            return self.zero();
        }
        let words = v.to_u64_digits();
        // from_words reads the mantissa as a fraction over 2^(64*len), so the
        // exponent for an exact integer is the full word capacity.
        let mut x = BigFloat::from_words(&words, Sign::Pos, (64 * words.len()) as Exponent);
        x.set_precision(self.bits, RM).expect("precision");
        Real(x)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Real {
        let r = self.from_biguint(v.magnitude());
        if v.is_negative() {
            Real(r.0.neg())
        } else {
            r
        }
    }

    pub fn from_ratio(&self, v: &BigRational) -> Real {
        let g = self.guarded(32);
        let n = g.from_bigint(v.numer());
        let d = g.from_bigint(v.denom());
        Real(n.0.div(&d.0, self.bits, RM))
    }

    /// Parse a decimal literal at this precision.
    pub fn parse(&self, s: &str) -> Real {
        Real(with_consts(|cc| {
            BigFloat::parse(s, astro_float::Radix::Dec, self.bits, RM, cc)
        }))
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, RM))
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.sub(&b.0, self.bits, RM))
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, RM))
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.div(&b.0, self.bits, RM))
    }

    pub fn neg(&self, a: &Real) -> Real {
        Real(a.0.neg())
    }

    pub fn abs(&self, a: &Real) -> Real {
        let mut x = a.0.clone();
        x.set_sign(Sign::Pos);
        Real(x)
    }

    pub fn ln(&self, a: &Real) -> Real {
        Real(with_consts(|cc| a.0.ln(self.bits, RM, cc)))
    }

    pub fn exp(&self, a: &Real) -> Real {
        Real(with_consts(|cc| a.0.exp(self.bits, RM, cc)))
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        Real(a.0.sqrt(self.bits, RM))
    }

    pub fn sin(&self, a: &Real) -> Real {
        Real(with_consts(|cc| a.0.sin(self.bits, RM, cc)))
    }

    pub fn cos(&self, a: &Real) -> Real {
        Real(with_consts(|cc| a.0.cos(self.bits, RM, cc)))
    }

    pub fn acos(&self, a: &Real) -> Real {
        Real(with_consts(|cc| a.0.acos(self.bits, RM, cc)))
    }

    /// a^b for real exponents.
    pub fn pow(&self, a: &Real, b: &Real) -> Real {
        Real(with_consts(|cc| a.0.pow(&b.0, self.bits, RM, cc)))
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        Real(a.0.powi(n, self.bits, RM))
    }

    pub fn pi(&self) -> Real {
        Real(with_consts(|cc| cc.pi(self.bits, RM)))
    }

    pub fn ln_10(&self) -> Real {
        Real(with_consts(|cc| cc.ln_10(self.bits, RM)))
    }

    /// Euler-Mascheroni constant from the 50-digit literal. Accurate to
    /// ~166 bits; callers requesting more precision get the literal's value.
    pub fn euler_gamma(&self) -> Real {
        self.parse(EULER_GAMMA_LITERAL)
    }

    /// Mertens constant B from the 50-digit literal (same accuracy cap).
    pub fn mertens_b(&self) -> Real {
        self.parse(MERTENS_B_LITERAL)
    }

    /// Natural log of a positive big integer (relative error ~2^-bits).
    pub fn ln_biguint(&self, v: &BigUint) -> Real {
        let g = self.guarded(32);
        let x = g.from_biguint(v);
        self.ln(&x)
    }

    pub fn ln_u64(&self, v: u64) -> Real {
        self.ln(&self.from_u64(v))
    }

    /// Gamma function for positive real arguments, Spouge's approximation.
    ///
    /// The series length scales with the working precision; relative error is
    /// below 2^-bits with the chosen parameter.
    pub fn gamma(&self, z: &Real) -> Real {
        assert!(!z.is_negative() && !z.is_zero(), "gamma: argument must be positive");
        let g = self.guarded(64);
        // Spouge parameter: error ~ a^(-1/2) (2 pi)^(-(a+1/2)); 2.65 bits per term.
        let a = (g.bits() as f64 / 2.65).ceil() as u64 + 3;

        // gamma(z) = gamma(w+1) with w = z - 1; for z < 1 use gamma(z) = gamma(z+1)/z.
        let one = g.one();
        let (w, divisor) = if *z < one {
            (z.clone(), Some(z.clone()))
        } else {
            (g.sub(z, &one), None)
        };

        let two_pi = g.mul(&g.from_u64(2), &g.pi());
        let mut sum = g.sqrt(&two_pi); // c0
        let mut factorial = g.one(); // (k-1)! running value
        for k in 1..a {
            if k > 1 {
                factorial = g.mul(&factorial, &g.from_u64(k - 1));
            }
            let amk = a - k;
            let amk_r = g.from_u64(amk);
            // c_k = (-1)^(k-1)/(k-1)! * (a-k)^(k-1/2) * e^(a-k)
            let pow = g.div(&g.powi(&amk_r, k as usize), &g.sqrt(&amk_r));
            let e_amk = g.exp(&amk_r);
            let mut ck = g.div(&g.mul(&pow, &e_amk), &factorial);
            if k % 2 == 0 {
                ck = g.neg(&ck);
            }
            let denom = g.add(&w, &g.from_u64(k));
            sum = g.add(&sum, &g.div(&ck, &denom));
        }

        // gamma(w+1) = (w+a)^(w+1/2) e^(-(w+a)) * sum
        let wa = g.add(&w, &g.from_u64(a));
        let half = g.div(&one, &g.from_u64(2));
        let expo = g.add(&w, &half);
        let lead = g.exp(&g.mul(&expo, &g.ln(&wa)));
        let decay = g.exp(&g.neg(&wa));
        let mut r = g.mul(&g.mul(&lead, &decay), &sum);
        if let Some(d) = divisor {
            r = g.div(&r, &d);
        }
        let mut out = r.0;
        out.set_precision(self.bits, RM).expect("precision");
        Real(out)
    }

    /// Deterministic scientific notation with `digits` significant digits,
    /// via exact dyadic-rational digit extraction.
    pub fn sci(&self, x: &Real, digits: usize) -> String {
        let digits = digits.max(1);
        if x.is_zero() {
            return "0".into();
        }
        let q = x.to_rational();
        let neg = q.is_negative();
        let q = q.abs();

        // initial decimal-exponent estimate from f64, then correct exactly
        let mut e10: i64 = {
            let v = self.abs(x).to_f64();
            if v.is_finite() && v > 0.0 {
                v.log10().floor() as i64
            } else {
                let (_, n, _, e, _) = x.raw().as_raw_parts().expect("finite");
                (((e as i64) - (n as i64)) as f64 * std::f64::consts::LOG10_2) as i64
            }
        };
        let ten = BigInt::from(10u8);
        let pow10 = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from(ten.pow(k as u32))
            } else {
                BigRational::new(BigInt::from(1u8), ten.pow((-k) as u32))
            }
        };
        // normalize so that 1 <= q / 10^e10 < 10
        while q < pow10(e10) {
            e10 -= 1;
        }
        while q >= pow10(e10 + 1) {
            e10 += 1;
        }
        // round(q / 10^(e10 - digits + 1)) with half away from zero
        let scale = pow10(e10 - digits as i64 + 1);
        let scaled = &q / &scale;
        let twice = (&scaled * BigRational::from(BigInt::from(2u8))).floor().to_integer();
        let mut m: BigUint = ((twice + BigInt::from(1u8)) / BigInt::from(2u8))
            .magnitude()
            .clone();
        let mut digits_str = m.to_string();
        if digits_str.len() > digits {
            // rounding carried over (e.g. 999 -> 1000)
            e10 += 1;
            m /= BigUint::from(10u8);
            digits_str = m.to_string();
        }
        debug_assert_eq!(digits_str.len(), digits);
        let mantissa = if digits == 1 {
            digits_str
        } else {
            format!("{}.{}", &digits_str[..1], &digits_str[1..])
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10)
    }
}
