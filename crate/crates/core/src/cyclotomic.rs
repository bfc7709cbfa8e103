//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! Elements are kept in the power basis `1, ζ, …, ζ^{φ(m)-1}`, reduced modulo
//! the m-th cyclotomic polynomial after every operation, with a single common
//! denominator. Equality is therefore structural.

use crate::arith::{divisors, euler_phi};
use crate::bigfloat::{BigComplex, BigReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

struct Table {
    phi: usize,
    /// `x^k mod Φ_m` for `k` in `[0, m)`.
    powers: Vec<Vec<i64>>,
    modulus: Vec<i64>,
}

fn table(m: u64) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&m) {
        return t.clone();
    }
    let modulus = cyclotomic_polynomial(m);
    let phi = modulus.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow using the monic modulus
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..phi {
                cur[j] -= top * modulus[j];
            }
        }
    }
    let t = Arc::new(Table { phi, powers, modulus });
    cache.lock().unwrap().insert(m, t.clone());
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycNumber {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    fn normalized(m: u64, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        CycNumber { m, num, den }
    }

    /// Reduces an element of Z[x]/(x^m - 1) (length `m`) over `den`.
    pub fn from_group_ring<T: Into<BigInt> + Copy>(m: u64, coeffs: &[T], den: BigInt) -> Self {
        assert_eq!(coeffs.len() as u64, m);
        let t = table(m);
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, &c) in coeffs.iter().enumerate() {
            let c: BigInt = c.into();
            if c.is_zero() {
                continue;
            }
            if k < t.phi {
                num[k] += &c;
            } else {
                for (j, &r) in t.powers[k].iter().enumerate() {
                    if r != 0 {
                        num[j] += &c * r;
                    }
                }
            }
        }
        Self::normalized(m, num, den)
    }

    fn from_bigint_vec(m: u64, coeffs: Vec<BigInt>, den: BigInt) -> Self {
        let t = table(m);
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k % m as usize;
            if k < t.phi {
                num[k] += c;
            } else {
                for (j, &r) in t.powers[k].iter().enumerate() {
                    if r != 0 {
                        num[j] += &c * r;
                    }
                }
            }
        }
        Self::normalized(m, num, den)
    }

    /// ζ_m^e.
    pub fn root(m: u64, e: i64) -> Self {
        let t = table(m);
        let k = e.rem_euclid(m as i64) as usize;
        let num = t.powers[k].iter().map(|&c| BigInt::from(c)).collect();
        Self::normalized(m, num, BigInt::one())
    }

    pub fn from_rational(m: u64, r: &BigRational) -> Self {
        let phi = table(m).phi;
        let mut num = vec![BigInt::zero(); phi];
        num[0] = r.numer().clone();
        Self::normalized(m, num, r.denom().clone())
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rational(m, &BigRational::from_integer(n.into()))
    }

    pub fn zero(m: u64) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Coefficients in the power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let r = self.to_rational()?;
        r.is_integer().then(|| r.to_integer())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.m != o.m {
            Err(Error::IndexMismatch(self.m, o.m))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        Ok(Self::normalized(self.m, num, &self.den * &o.den))
    }

    pub fn neg(&self) -> Self {
        CycNumber {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_bigint_vec(self.m, prod, &self.den * &o.den))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.m, num, &self.den * r.denom())
    }

    pub fn mul_root(&self, e: i64) -> Self {
        self.mul(&Self::root(self.m, e)).expect("same index")
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over Q.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(self.m, &r.recip()));
        }
        let t = table(self.m);
        let a: Vec<BigRational> = self.coeffs();
        let f: Vec<BigRational> = t
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let s = qpoly::inverse_mod(&a, &f).ok_or(Error::DivisionByZero)?;
        let den = s
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = s
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_bigint_vec(self.m, num, den))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        self.mul(&o.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.m);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Image under ζ_m ↦ ζ_target^{target/m}.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.m) {
            return Err(Error::NotASubfieldIndex(self.m, target));
        }
        if target == self.m {
            return Ok(self.clone());
        }
        let step = (target / self.m) as usize;
        let mut coeffs = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Ok(Self::from_bigint_vec(target, coeffs, self.den.clone()))
    }

    /// The automorphism ζ ↦ ζ^k (k coprime to m).
    pub fn galois(&self, k: i64) -> Self {
        let m = self.m as i64;
        assert_eq!(k.gcd(&m), 1, "Galois exponent must be a unit");
        let mut coeffs = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.num.iter().enumerate() {
            coeffs[(i as i64 * k).rem_euclid(m) as usize] = c.clone();
        }
        Self::from_bigint_vec(self.m, coeffs, self.den.clone())
    }

    /// Rewrites an element of Q(ζ_m) that lies in the subfield Q(ζ_n) as an
    /// element of Q(ζ_n). Requires `n | m` and `gcd(n, m/n) = 1`; `None` if
    /// the element is not in the subfield.
    pub fn descend(&self, n: u64) -> Option<Self> {
        let m = self.m;
        if !m.is_multiple_of(n) {
            return None;
        }
        let d = m / n;
        if d == 1 {
            return Some(self.clone());
        }
        if n.gcd(&d) != 1 {
            return None;
        }
        // ζ_m = ζ_n^u ζ_d^v with u·d + v·n = 1; project ζ_d^β onto Q by the
        // normalized trace c_d(β)/φ(d) (a Ramanujan sum).
        let e = (d as i64).extended_gcd(&(n as i64));
        let (u, v) = (e.x, e.y);
        let phi_d = euler_phi(d) as i64;
        let mut coeffs = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let alpha = (i as i64 * u).rem_euclid(n as i64) as usize;
            let beta = (i as i64 * v).rem_euclid(d as i64) as u64;
            let w = ramanujan_sum(d, beta);
            if w != 0 {
                coeffs[alpha] += c * w;
            }
        }
        let out = Self::from_bigint_vec(n, coeffs, &self.den * phi_d);
        (out.embed(m).ok()? == *self).then_some(out)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Value at ζ_m = exp(2πi/m) with `digits` correct decimal digits.
    pub fn to_complex(&self, digits: u32) -> BigComplex {
        let mag = self
            .num
            .iter()
            .map(|c| c.bits())
            .max()
            .unwrap_or(0) as usize;
        let bits = crate::bigfloat::bits_for_digits(digits) + mag + 16;
        let den = BigReal::from_bigint(&self.den, bits);
        let mut acc = BigComplex::zero(bits);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = BigComplex::root_of_unity(self.m, i as i64, bits);
            acc = acc.add_ref(&z.scale(&BigReal::from_bigint(c, bits)));
        }
        BigComplex::new(&acc.re / &den, &acc.im / &den)
    }

    /// Field norm down to Q, as a product of Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let m = self.m as i64;
        let mut acc = Self::one(self.m);
        for k in 1..m.max(2) {
            if k.gcd(&m) == 1 {
                acc = acc.mul(&self.galois(k)).expect("same index");
            }
        }
        acc.to_rational().expect("norm is rational")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            let neg = r.is_negative();
            let mag = r.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.m)?;
                    } else {
                        write!(f, "z{}^{}", self.m, i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dense polynomials over Q, lowest degree first.
mod qpoly {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn is_zero(p: &[BigRational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (vec![BigRational::zero()], r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = &r[i + db] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] -= &c * bj;
                }
            }
            q[i] = c;
        }
        r.truncate(db.max(1));
        trim(&mut r);
        (q, r)
    }

    fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// `s` with `s·a ≡ 1 (mod f)`, when `gcd(a, f) = 1`.
    pub fn inverse_mod(a: &[BigRational], f: &[BigRational]) -> Option<Vec<BigRational>> {
        let (mut r0, mut r1) = (f.to_vec(), divmod(a, f).1);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !is_zero(&r1) {
            let (q, r) = divmod(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        trim(&mut r0);
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].clone();
        let s: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        Some(divmod(&s, f).1)
    }
}

/// `c_d(β) = Σ_{e | gcd(d, β)} μ(d/e)·e`, the sum of the primitive d-th roots
/// of unity raised to the power β.
pub fn ramanujan_sum(d: u64, beta: u64) -> i64 {
    let g = d.gcd(&beta);
    divisors(g)
        .into_iter()
        .map(|e| crate::arith::mobius(d / e) * e as i64)
        .sum()
}

/// Σ_{l<n} ζ_n^{lk}: equals `n` when `n | k`, else 0.
pub fn root_power_sum(n: u64, k: i64) -> CycNumber {
    let mut acc = CycNumber::zero(n);
    for l in 0..n as i64 {
        acc = acc.add(&CycNumber::root(n, l * k)).expect("same index");
    }
    acc
}

/// φ(m), the dimension of Q(ζ_m).
pub fn degree(m: u64) -> u64 {
    euler_phi(m)
}
