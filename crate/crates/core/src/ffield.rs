//! Finite fields `F_{p^r}` in a polynomial basis, with a fixed generator,
//! a full discrete-log table and the absolute trace.
//!
//! Elements are stored as their coefficient vector packed into a single
//! integer code `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`.

use crate::arith;
use crate::error::{Error, Result};
use std::fmt;

/// Largest field the constructor accepts unless told otherwise.
pub const DEFAULT_FIELD_BOUND: u64 = 100_000;

/// An element of some [`FiniteField`], identified by its packed coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FieldElement,
    log: Vec<u32>,
    exp: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("generator", &self.coeffs(self.generator))
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::with_bound(p, r, DEFAULT_FIELD_BOUND)
    }

    /// Builds the field of order `q = p^r`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, r) = arith::prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, r)
    }

    pub fn with_bound(p: u64, r: u32, bound: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::ConstructionError("degree must be positive".into()));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= bound)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(r), bound))?;
        let modulus = smallest_irreducible(p, r as usize)
            .ok_or_else(|| Error::ConstructionError("no irreducible polynomial".into()))?;
        let ring = PolyRing { p, modulus: &modulus };

        let order = q - 1;
        let prime_factors = arith::prime_divisors(order);
        let generator = (1..q)
            .find(|&c| {
                let x = ring.unpack(c);
                prime_factors
                    .iter()
                    .all(|&l| ring.pow(&x, order / l) != ring.one())
            })
            .ok_or_else(|| Error::ConstructionError("no generator found".into()))?;

        let g = ring.unpack(generator);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = ring.one();
        for k in 0..order {
            let c = ring.pack(&x);
            if log[c as usize] != u32::MAX {
                return Err(Error::ConstructionError("generator order too small".into()));
            }
            log[c as usize] = k as u32;
            exp.push(c as u32);
            x = ring.mul(&x, &g);
        }

        // Tr is F_p-linear, so it is enough to know it on the monomial basis.
        let basis_trace: Vec<u64> = (0..r as usize)
            .map(|i| {
                let mut mono = vec![0; r as usize];
                mono[i] = 1;
                let mut y = mono;
                let mut acc = vec![0; r as usize];
                for _ in 0..r {
                    acc = ring.add(&acc, &y);
                    y = ring.pow(&y, p);
                }
                debug_assert!(acc[1..].iter().all(|&c| c == 0));
                acc[0]
            })
            .collect();
        let trace = (0..q)
            .map(|c| {
                let coeffs = ring.unpack(c);
                let t = coeffs
                    .iter()
                    .zip(&basis_trace)
                    .fold(0, |s, (a, b)| (s + a * b) % p);
                t as u32
            })
            .collect();

        Ok(FiniteField {
            p,
            r,
            q,
            modulus,
            generator: FieldElement(generator as u32),
            log,
            exp,
            trace,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first; monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(arith::reduce_i128(n as i128, self.p) as u32)
    }

    /// Image of a rational number, if its denominator is prime to `p`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Option<FieldElement> {
        let d = self.from_int(den);
        if d.is_zero() {
            return None;
        }
        Some(self.div(self.from_int(num), d))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.r as usize, "too many coefficients");
        let code = coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p);
        FieldElement(code as u32)
    }

    pub fn from_code(&self, code: u32) -> FieldElement {
        assert!((code as u64) < self.q, "code out of range");
        FieldElement(code)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut c = x.0 as u64;
        (0..self.r)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0 as u64;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q - 1);
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let k = (self.q - 1 - self.log[a.0 as usize] as u64) % (self.q - 1);
        Some(FieldElement(self.exp[k as usize]))
    }

    /// `a / b`; panics when `b = 0`.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    /// `a^e` for any integer `e` (with `0^0 = 1`; negative powers of 0 panic).
    pub fn pow(&self, a: FieldElement, e: i64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            assert!(e > 0, "negative power of zero");
            return self.zero();
        }
        let k = (self.log[a.0 as usize] as i128 * e as i128).rem_euclid((self.q - 1) as i128);
        FieldElement(self.exp[k as usize])
    }

    /// `g^k` for the fixed generator `g`.
    pub fn gen_pow(&self, k: i64) -> FieldElement {
        let k = (k as i128).rem_euclid((self.q - 1) as i128);
        FieldElement(self.exp[k as usize])
    }

    /// Discrete logarithm to the base of the fixed generator, in `[0, q-2]`.
    pub fn dlog(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[x.0 as usize] as u64)
    }

    /// `g^{(q-1)/n}`, an element of order exactly `n`.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<FieldElement> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return Err(Error::OrderDoesNotDivide { n, order: self.q - 1 });
        }
        Ok(self.gen_pow(((self.q - 1) / n) as i64))
    }

    /// Whether `x` is an `n`-th power in `F_q^*`, for `n | q-1`.
    pub fn is_nth_power(&self, x: FieldElement, n: u64) -> Result<bool> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return Err(Error::OrderDoesNotDivide { n, order: self.q - 1 });
        }
        Ok(self.dlog(x)? % n == 0)
    }

    /// Absolute trace to `F_p`, as an integer in `[0, p-1]`.
    pub fn absolute_trace(&self, x: FieldElement) -> u64 {
        self.trace[x.0 as usize] as u64
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElement) -> Result<u64> {
        let k = self.dlog(x)?;
        Ok((self.q - 1) / num_integer::gcd(k, self.q - 1))
    }

    /// Human-readable form: an integer for prime fields, otherwise a
    /// polynomial in `x`.
    pub fn format(&self, a: FieldElement) -> String {
        if self.r == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| match (i, v) {
                (0, v) => v.to_string(),
                (1, 1) => "x".to_string(),
                (1, v) => format!("{v}x"),
                (i, 1) => format!("x^{i}"),
                (i, v) => format!("{v}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Arithmetic in `F_p[x]/(f)` on dense coefficient vectors of length `deg f`,
/// used only while the tables are being built.
struct PolyRing<'a> {
    p: u64,
    modulus: &'a [u64],
}

impl PolyRing<'_> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }

    fn unpack(&self, mut code: u64) -> Vec<u64> {
        (0..self.degree())
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * r];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (r..2 * r).rev() {
            let t = prod[d];
            if t == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = d - r + i;
                prod[idx] = (prod[idx] + (p - t) * m) % p;
            }
        }
        prod.truncate(r);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Polynomial gcd over `F_p`; inputs are coefficient vectors (constant first).
fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead_inv = arith::inv_mod(*b.last().unwrap(), p).unwrap();
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = a.last().unwrap() * lead_inv % p;
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - factor) * c % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin's test: `f` of degree `r` is irreducible over `F_p` iff
/// `x^{p^r} = x mod f` and `gcd(x^{p^{r/l}} - x, f) = 1` for every prime `l | r`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    let ring = PolyRing { p, modulus: f };
    let mut x = vec![0; r];
    x[1] = 1;
    let frob = |k: usize| {
        let mut y = x.clone();
        for _ in 0..k {
            y = ring.pow(&y, p);
        }
        y
    };
    if frob(r) != x {
        return false;
    }
    arith::prime_divisors(r as u64).into_iter().all(|l| {
        let mut h = frob(r / l as usize);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f.to_vec(), h, p);
        g.len() == 1
    })
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`,
/// ordering by the packed code of the non-leading coefficients.
fn smallest_irreducible(p: u64, r: usize) -> Option<Vec<u64>> {
    if r == 1 {
        return Some(vec![0, 1]);
    }
    let count = p.checked_pow(r as u32)?;
    (0..count).find_map(|code| {
        let mut f: Vec<u64> = (0..r)
            .scan(code, |c, _| {
                let d = *c % p;
                *c /= p;
                Some(d)
            })
            .collect();
        f.push(1);
        (f[0] != 0 && is_irreducible(&f, p)).then_some(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(f: &FiniteField, x: FieldElement) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != f.one() {
            y = f.mul(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn prime_field_of_five() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        let g = f.generator();
        assert!(g == f.from_int(2) || g == f.from_int(3));
        assert_eq!(f.generator(), f.from_int(2));
        assert_eq!(f.dlog(f.from_int(4)).unwrap(), 2);
    }

    #[test]
    fn field_of_nine_has_generator_of_order_eight() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(naive_order(&f, f.generator()), 8);
        // x^2 + 1 is the smallest monic irreducible quadratic over F_3
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FiniteField::new(2, 20),
            Err(Error::FieldTooLarge(..))
        ));
    }

    #[test]
    fn dlog_examples() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
        assert_eq!(f.dlog(f.zero()), Err(Error::LogOfZero));
    }

    #[test]
    fn roots_of_unity() {
        let f = FiniteField::new(5, 1).unwrap();
        let z = f.primitive_root_of_unity(4).unwrap();
        assert_eq!(naive_order(&f, z), 4);
        assert_eq!(f.primitive_root_of_unity(1).unwrap(), f.one());
        let f7 = FiniteField::new(7, 1).unwrap();
        assert!(matches!(
            f7.primitive_root_of_unity(4),
            Err(Error::OrderDoesNotDivide { .. })
        ));
    }

    #[test]
    fn nth_powers() {
        let f = FiniteField::new(5, 1).unwrap();
        assert!(f.is_nth_power(f.from_int(4), 2).unwrap());
        assert!(!f.is_nth_power(f.from_int(2), 2).unwrap());
        for n in [1, 2, 4] {
            assert!(f.is_nth_power(f.one(), n).unwrap());
        }
    }

    #[test]
    fn trace_examples() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.absolute_trace(f.zero()), 0);
        assert_eq!(f.absolute_trace(f.one()), 2);
        let f11 = FiniteField::new(11, 1).unwrap();
        for x in f11.elements() {
            assert_eq!(f11.absolute_trace(x), x.code() as u64);
        }
    }

    #[test]
    fn larger_extensions_are_consistent() {
        for (p, r) in [(2, 4), (3, 3), (5, 2), (7, 2), (11, 2), (3, 4)] {
            let f = FiniteField::new(p, r).unwrap();
            assert_eq!(naive_order(&f, f.generator()), f.q() - 1);
            let a = f.from_coeffs(&[1, 1]);
            let b = f.gen_pow(5);
            let lhs = f.mul(f.add(a, b), a);
            let rhs = f.add(f.mul(a, a), f.mul(b, a));
            assert_eq!(lhs, rhs);
        }
    }
}
