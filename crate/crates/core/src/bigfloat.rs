//! Arbitrary-precision real and complex numbers on top of `astro-float`.
//!
//! Precision is carried by each value (in bits); binary operations use the
//! larger of the two operand precisions.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in bits for `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
}

#[derive(Clone, Debug)]
pub struct BigReal {
    v: BigFloat,
    bits: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        debug_assert!(!v.is_nan(), "NaN in arbitrary-precision arithmetic");
        BigReal { v, bits }
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn from_i64(n: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(n, bits), bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, bits), bits)
    }

    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        let s = n.to_string();
        let p = bits.max(s.len() * 4 + 64);
        let v = with_cc(|cc| BigFloat::parse(&s, Radix::Dec, p, RM, cc));
        Self::wrap(v, bits)
    }

    pub fn from_ratio(r: &BigRational, bits: usize) -> Self {
        Self::from_bigint(r.numer(), bits).div_ref(&Self::from_bigint(r.denom(), bits))
    }

    /// Parses a decimal literal such as `-0.125` or `3e-2`.
    pub fn parse(s: &str, bits: usize) -> Option<Self> {
        let v = with_cc(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits, RM, cc));
        (!v.is_nan()).then(|| Self::wrap(v, bits))
    }

    pub fn pi(bits: usize) -> Self {
        let v = with_cc(|cc| cc.pi(bits, RM));
        Self::wrap(v, bits)
    }

    fn p2(&self, other: &Self) -> usize {
        self.bits.max(other.bits)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.add(&o.v, p, RM), p)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.sub(&o.v, p, RM), p)
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.mul(&o.v, p, RM), p)
    }

    pub fn div_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.div(&o.v, p, RM), p)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_i64(n, self.bits))
    }

    pub fn div_i64(&self, n: i64) -> Self {
        self.div_ref(&Self::from_i64(n, self.bits))
    }

    pub fn negated(&self) -> Self {
        Self::wrap(-self.v.clone(), self.bits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    pub fn exp(&self) -> Self {
        let v = with_cc(|cc| self.v.exp(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(&self) -> Self {
        let v = with_cc(|cc| self.v.ln(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn sin(&self) -> Self {
        let v = with_cc(|cc| self.v.sin(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn cos(&self) -> Self {
        let v = with_cc(|cc| self.v.cos(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    /// `self^e` for a positive base.
    pub fn pow(&self, e: &Self) -> Self {
        let p = self.p2(e);
        let v = with_cc(|cc| self.v.pow(&e.v, p, RM, cc));
        Self::wrap(v, p)
    }

    pub fn powi(&self, n: u32) -> Self {
        Self::wrap(self.v.powi(n as usize, self.bits, RM), self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.v.floor(), self.bits)
    }

    pub fn is_integer(&self) -> bool {
        self.v.is_int()
    }

    /// Base-2 exponent: `|self|` lies in `[2^(e-1), 2^e)`. `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.v.exponent().map(|e| e as i64)
        }
    }

    /// Whether `|self| < 10^(-digits)`.
    pub fn is_below_decimal(&self, digits: u32) -> bool {
        match self.exponent() {
            None => true,
            Some(e) => (e as f64) < -(digits as f64) * std::f64::consts::LOG2_10,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_sci_string(20).parse().unwrap_or(f64::NAN)
    }

    /// Scientific notation with `digits` significant digits (truncated).
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let s = with_cc(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
        let mut all: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        all.truncate(digits.max(1));
        let (head, tail) = all.split_at(1);
        let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }

    /// Fixed-point decimal string with `frac_digits` digits after the point.
    pub fn to_fixed_string(&self, frac_digits: u32) -> String {
        let scale = Self::from_bigint(&BigInt::from(10).pow(frac_digits), self.bits + 64);
        let scaled = self.mul_ref(&scale);
        let half = Self::from_f64(0.5, scaled.bits);
        let rounded = if scaled.is_negative() {
            scaled.sub_ref(&half).negated().floor().negated()
        } else {
            scaled.add_ref(&half).floor()
        };
        let digits = with_cc(|cc| rounded.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        let int = sci_to_integer_string(&digits);
        let (sign, mag) = int.strip_prefix('-').map_or(("", int.as_str()), |m| ("-", m));
        let width = frac_digits as usize + 1;
        let padded = format!("{mag:0>width$}");
        let (i, f) = padded.split_at(padded.len() - frac_digits as usize);
        let sign = if mag.chars().all(|c| c == '0') { "" } else { sign };
        if frac_digits == 0 {
            format!("{sign}{i}")
        } else {
            format!("{sign}{i}.{f}")
        }
    }
}

/// Converts an exact integer printed in scientific notation to plain digits.
fn sci_to_integer_string(s: &str) -> String {
    let (mant, exp) = s.split_once('e').unwrap_or((s, "0"));
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let int_len = exp + 1;
    if int_len <= 0 {
        return "0".into();
    }
    let int_len = int_len as usize;
    let body = if digits.len() >= int_len {
        digits[..int_len].to_string()
    } else {
        format!("{digits:0<int_len$}")
    };
    let body = body.trim_start_matches('0');
    if body.is_empty() {
        "0".into()
    } else {
        format!("{sign}{body}")
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! forward_real_ops {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                self.$inner(o)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$inner(&o)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                self.$inner(o)
            }
        }
    };
}

forward_real_ops!(Add, add, add_ref);
forward_real_ops!(Sub, sub, sub_ref);
forward_real_ops!(Mul, mul, mul_ref);
forward_real_ops!(Div, div, div_ref);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        self.negated()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let bits = re.bits;
        BigComplex { re, im: BigReal::zero(bits) }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_real(BigReal::zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        Self::from_real(BigReal::one(bits))
    }

    /// `exp(2 pi i k / m)`.
    pub fn root_of_unity(m: u64, k: i64, bits: usize) -> Self {
        let k = (k as i128).rem_euclid(m as i128) as i64;
        if k == 0 {
            return Self::one(bits);
        }
        if 2 * k as u64 == m {
            return Self::from_real(BigReal::from_i64(-1, bits));
        }
        if 4 * k as u64 == m {
            return Self::new(BigReal::zero(bits), BigReal::one(bits));
        }
        if 4 * k as u64 == 3 * m {
            return Self::new(BigReal::zero(bits), BigReal::from_i64(-1, bits));
        }
        let theta = BigReal::pi(bits + 32).mul_i64(2 * k).div_i64(m as i64);
        Self::new(theta.cos(), theta.sin())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        Self::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn div_ref(&self, o: &Self) -> Self {
        let den = &(&o.re * &o.re) + &(&o.im * &o.im);
        let num = self.mul_ref(&o.conj());
        Self::new(&num.re / &den, &num.im / &den)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.negated())
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn powi(&self, mut n: u32) -> Self {
        let bits = self.re.bits.max(self.im.bits);
        let mut acc = Self::one(bits);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            n >>= 1;
        }
        acc
    }

    pub fn is_below_decimal(&self, digits: u32) -> bool {
        self.re.is_below_decimal(digits + 1) && self.im.is_below_decimal(digits + 1)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        if self.im.is_zero() {
            return f.write_str(&self.re.to_sci_string(digits));
        }
        let im = self.im.to_sci_string(digits);
        let (sign, mag) = im.strip_prefix('-').map_or(("+", im.as_str()), |m| ("-", m));
        write!(f, "{} {} {}i", self.re.to_sci_string(digits), sign, mag)
    }
}

/// Exact rational to arbitrary precision, negative values included.
pub fn ratio_to_real(r: &BigRational, bits: usize) -> BigReal {
    if r.is_zero() {
        return BigReal::zero(bits);
    }
    let v = BigReal::from_ratio(&r.abs(), bits);
    if r.is_negative() {
        v.negated()
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_roots() {
        let bits = bits_for_digits(40);
        let pi = BigReal::pi(bits);
        assert!(pi.to_sci_string(30).starts_with("3.14159265358979323846264338327"));
        let z8 = BigComplex::root_of_unity(8, 1, bits);
        let half_sqrt2 = BigReal::from_i64(2, bits).sqrt().div_i64(2);
        assert!((&z8.re - &half_sqrt2).is_below_decimal(35));
        assert!((&z8.im - &half_sqrt2).is_below_decimal(35));
        let z8_8 = z8.powi(8);
        assert!(z8_8.sub_ref(&BigComplex::one(bits)).is_below_decimal(35));
    }

    #[test]
    fn fixed_strings() {
        let bits = bits_for_digits(30);
        assert_eq!(BigReal::from_i64(2, bits).to_fixed_string(3), "2.000");
        let third = BigReal::one(bits).div_i64(3);
        assert_eq!(third.to_fixed_string(5), "0.33333");
        assert_eq!(third.negated().to_fixed_string(2), "-0.33");
        assert_eq!(BigReal::from_i64(-1234, bits).to_fixed_string(0), "-1234");
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
