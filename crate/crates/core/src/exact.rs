//! Exact integer arithmetic for sums whose terms cancel catastrophically in
//! floating point.
//!
//! Coefficients enter as dyadic rationals (every finite `f64` is one) or as
//! rationals built from factorials, are brought to a common integer
//! denominator, summed exactly, and rounded to `f64` once at the end.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// A complex number `(re + i im) / den` held as integers by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn shl(&self, bits: usize) -> Self {
        Self {
            re: &self.re << bits,
            im: &self.im << bits,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.re -= &other.re;
        self.im -= &other.im;
    }
}

/// `x = m · 2^e` with integer `m`.
pub fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mant, exp, sign) = x.integer_decode();
    let m = BigInt::from(mant) * BigInt::from(sign);
    (m, exp as i64)
}

/// Writes each complex value as `(re + i im) · 2^{-s}` with one shared `s ≥ 0`.
pub fn dyadic_complex_slice(values: &[Complex64]) -> (Vec<GaussInt>, usize) {
    let parts: Vec<((BigInt, i64), (BigInt, i64))> = values.iter().map(|c| (dyadic(c.re), dyadic(c.im))).collect();
    let min_exp = parts
        .iter()
        .flat_map(|((mr, er), (mi, ei))| [(!mr.is_zero()).then_some(*er), (!mi.is_zero()).then_some(*ei)])
        .flatten()
        .min()
        .unwrap_or(0);
    let s = (-min_exp).max(0) as usize;
    let lift = |(m, e): &(BigInt, i64)| -> BigInt {
        if m.is_zero() {
            BigInt::zero()
        } else {
            m << ((e + s as i64) as usize)
        }
    };
    let out = parts.iter().map(|(r, i)| GaussInt::new(lift(r), lift(i))).collect();
    (out, s)
}

/// `n!` for `n = 0..=max`.
pub fn factorials(max: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(max + 1);
    f.push(BigInt::one());
    for k in 1..=max {
        let next = &f[k - 1] * BigInt::from(k);
        f.push(next);
    }
    f
}

/// `x · 2^e` without intermediate overflow or underflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// `num / den` as `(mantissa, exponent)` with `num/den ≈ mantissa · 2^exponent`
/// and `|mantissa|` carrying 64 significant bits before rounding.
pub fn ratio_parts(num: &BigInt, den: &BigInt) -> (f64, i64) {
    if num.is_zero() {
        return (0.0, 0);
    }
    let sign = if (num.sign() == Sign::Minus) ^ (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    let n = num.abs();
    let d = den.abs();
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as usize) / &d
    } else {
        n / (d << (-shift) as usize)
    };
    let qb = q.bits() as i64;
    // keep the leading 64 bits so the f64 conversion is a single rounding
    let (q64, extra) = if qb > 64 {
        (q >> (qb - 64) as usize, qb - 64)
    } else {
        (q, 0)
    };
    (sign * q64.to_f64().unwrap_or(f64::NAN), extra - shift)
}

/// `num / den` rounded to `f64`.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let (m, e) = ratio_parts(num, den);
    ldexp(m, e)
}
