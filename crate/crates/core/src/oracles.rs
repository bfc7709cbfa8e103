//! Independent arithmetic ground truth: Frobenius traces by point counting,
//! eta-quotient q-expansions and binary quadratic form representations.

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{self, Rat};
use crate::error::{Error, Result};

/// `y² = x³ + c2 x² + c1 x + c0` over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub c2: Rat,
    pub c1: Rat,
    pub c0: Rat,
}

impl EllipticCurve {
    pub fn new(c2: Rat, c1: Rat, c0: Rat) -> Result<Self> {
        let e = EllipticCurve { c2, c1, c0 };
        if e.discriminant().is_zero() {
            return Err(Error::PreconditionViolated("singular curve".into()));
        }
        Ok(e)
    }

    /// Discriminant of the cubic (16 times it is the curve discriminant).
    pub fn discriminant(&self) -> BigRational {
        let big = |x: Rat| BigRational::new((*x.numer()).into(), (*x.denom()).into());
        let (b, c, d) = (big(self.c2), big(self.c1), big(self.c0));
        let k = |n: i64| BigRational::from_integer(n.into());
        k(18) * &b * &c * &d - k(4) * &b * &b * &b * &d + &b * &b * &c * &c - k(4) * &c * &c * &c - k(27) * &d * &d
    }

    /// Coefficients reduced mod p, or `BadReduction`.
    pub fn reduce(&self, p: u64) -> Result<[u64; 3]> {
        let red = |x: Rat| -> Result<u64> {
            let d = *x.denom();
            if (d as u64).is_multiple_of(p) {
                return Err(Error::BadReduction(p));
            }
            let inv = arith::inv_mod(arith::reduce_i128(d as i128, p), p).expect("coprime");
            Ok(arith::mul_mod(arith::reduce_i128(*x.numer() as i128, p), inv, p))
        };
        let [b, c, d] = [red(self.c2)?, red(self.c1)?, red(self.c0)?];
        let m = |xs: &[u64]| xs.iter().fold(1, |acc, &x| arith::mul_mod(acc, x, p));
        let plus = (m(&[18, b, c, d]) + m(&[b, b, c, c])) % p;
        let minus = (m(&[4, b, b, b, d]) + m(&[4, c, c, c]) + m(&[27 % p, d, d])) % p;
        if plus == minus {
            return Err(Error::BadReduction(p));
        }
        Ok([b, c, d])
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.reduce(p).is_ok()
    }
}

/// `a_p = p + 1 - #E(F_p)`, by enumeration.
pub fn ec_trace(e: &EllipticCurve, p: u64) -> Result<i64> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::SmallPrime(p));
    }
    let [c2, c1, c0] = e.reduce(p)?;
    let mut chi = vec![-1i64; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[(y * y % p) as usize] = 1;
    }
    let mut s: i64 = 0;
    for x in 0..p {
        let v = (((x * x % p + c2 * x % p) % p * x % p) + c1 * x % p + c0) % p;
        s += chi[v as usize];
    }
    // #E = 1 + Σ_x (1 + χ(f(x))), so a_p = -Σ χ(f(x))
    let ap = -s;
    debug_assert!((ap * ap) as u64 <= 4 * p, "Hasse bound");
    Ok(ap)
}

/// `E_t: y² = x³ - t²x² + (4t³ - t⁴)x + t⁶ - 4t⁵`.
pub fn ono_curve(t: Rat) -> Result<EllipticCurve> {
    if t == Rat::from_integer(0) || t == Rat::from_integer(4) {
        return Err(Error::DegenerateT(t.to_string()));
    }
    // keeps t^6 and its lower-order companions inside i64
    if t.numer().abs() > 500 || *t.denom() > 500 {
        return Err(Error::Overflow);
    }
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    EllipticCurve::new(-t2, t3 * 4 - t4, t5 * t - t5 * 4)
}

/// `E_{a,b}: y² = x³ + ax + b`, with `j ≠ 0, 1728`.
pub fn short_weierstrass(a: i64, b: i64) -> Result<EllipticCurve> {
    if a == 0 || b == 0 {
        return Err(Error::DegenerateJ);
    }
    EllipticCurve::new(Rat::from_integer(0), Rat::from_integer(a), Rat::from_integer(b))
}

/// Legendre symbol of a p-integral rational; 0 when p divides the numerator.
pub fn legendre_rat(x: Rat, p: u64) -> Result<i32> {
    let d = *x.denom();
    if (d as u64).is_multiple_of(p) {
        return Err(Error::NotPIntegral(x.to_string(), p));
    }
    Ok(arith::legendre(*x.numer() as i128 * d as i128, p))
}

/// `∏ η(d z)^e` given as `(d, e)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub factors: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(factors: &[(u64, i64)]) -> Self {
        EtaQuotient { factors: factors.to_vec() }
    }

    /// Twice the weight.
    pub fn double_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// `Σ d e / 24` if it is a positive integer.
    pub fn leading_power(&self) -> Result<u64> {
        let s: i64 = self.factors.iter().map(|&(d, e)| d as i64 * e).sum();
        if s <= 0 || s % 24 != 0 {
            return Err(Error::NonIntegralLeadingPower);
        }
        Ok((s / 24) as u64)
    }
}

/// Coefficients `a_1, …, a_N` of a q-expansion; `a(n)` is 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub coeffs: Vec<i128>,
}

impl QExpansion {
    pub fn a(&self, n: usize) -> i128 {
        self.coeffs[n - 1]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn mul_trunc(a: &[i128], b: &[i128], len: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y == 0 {
                continue;
            }
            let t = x.checked_mul(y).ok_or(Error::Overflow)?;
            out[i + j] = out[i + j].checked_add(t).ok_or(Error::Overflow)?;
        }
    }
    Ok(out)
}

fn pow_trunc(a: &[i128], mut e: u64, len: usize) -> Result<Vec<i128>> {
    let mut acc = vec![0i128; len];
    acc[0] = 1;
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_trunc(&acc, &b, len)?;
        }
        e >>= 1;
        if e > 0 {
            b = mul_trunc(&b, &b, len)?;
        }
    }
    Ok(acc)
}

/// `∏_{n≥1} (1 - q^{dn})` to `len` terms, from Euler's pentagonal numbers.
fn euler_product(d: u64, len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let g = (kk * (3 * kk - 1) / 2) as u64 * d;
            if (g as usize) < len {
                out[g as usize] += if kk % 2 == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    out
}

/// The series `1 / ∏(1 - q^{dn})`: coefficients are partition numbers.
fn euler_inverse(d: u64, len: usize) -> Vec<i128> {
    let mut p = vec![0i128; len];
    p[0] = 1;
    let mut part = vec![0i128; len.div_ceil(d as usize).max(1)];
    part[0] = 1;
    for n in 1..part.len() {
        for k in n..part.len() {
            part[k] += part[k - n];
        }
    }
    for (i, &c) in part.iter().enumerate() {
        let idx = i * d as usize;
        if idx < len {
            p[idx] = c;
        }
    }
    p
}

/// `a_1, …, a_N` of an eta quotient.
pub fn eta_coefficients(eq: &EtaQuotient, n: usize) -> Result<QExpansion> {
    let lead = eq.leading_power()? as usize;
    if n < lead {
        return Ok(QExpansion { coeffs: vec![0; n] });
    }
    let len = n - lead + 1;
    let mut acc = vec![0i128; len];
    acc[0] = 1;
    for &(d, e) in &eq.factors {
        let base = if e >= 0 { euler_product(d, len) } else { euler_inverse(d, len) };
        acc = mul_trunc(&acc, &pow_trunc(&base, e.unsigned_abs(), len)?, len)?;
    }
    let mut coeffs = vec![0i128; n];
    for (i, c) in acc.into_iter().enumerate() {
        coeffs[lead + i - 1] = c;
    }
    Ok(QExpansion { coeffs })
}

/// `η²(4z)η²(8z)`, weight 2, level 32.
pub fn eta_32_2() -> EtaQuotient {
    EtaQuotient::new(&[(4, 2), (8, 2)])
}

/// `η⁶(4z)`, weight 3, level 16.
pub fn eta_16_3() -> EtaQuotient {
    EtaQuotient::new(&[(4, 6)])
}

/// `η(2z)⁴η(8z)²`, weight 3, level 32, character `(-4/·)`. At primes
/// `p ≡ 1 (mod 4)` its coefficients supply the weight-3 factor in the
/// order-8 evaluation at 1.
pub fn eta_32_3() -> EtaQuotient {
    EtaQuotient::new(&[(2, 4), (8, 2)])
}

/// `η(2z)⁴η(4z)⁴`, weight 4, level 8.
pub fn eta_8_4() -> EtaQuotient {
    EtaQuotient::new(&[(2, 4), (4, 4)])
}

/// Some `(x, y)` with `q = x² + b y²` and `accept(x, y)`, searching
/// `x` from `-√q` upward and `y ≥ 0`.
pub fn rep_quadratic(q: u64, b: u64, accept: impl Fn(i64, i64) -> bool) -> Option<(i64, i64)> {
    let s = arith::isqrt(q) as i64;
    for x in -s..=s {
        let rest = q as i64 - x * x;
        if rest < 0 || rest % b as i64 != 0 {
            continue;
        }
        let y2 = (rest / b as i64) as u64;
        let y = arith::isqrt(y2);
        if y * y == y2 && accept(x, y as i64) {
            return Some((x, y as i64));
        }
    }
    None
}

/// `q = x² + y²` with `x ≡ 1 (mod 4)` and `p ∤ x` when `p ≡ 1 (mod 4)`.
pub fn two_squares_normalized(q: u64) -> Option<(i64, i64)> {
    let (p, _) = arith::prime_power(q)?;
    rep_quadratic(q, 1, |x, _| x.rem_euclid(4) == 1 && (p % 4 != 1 || x.rem_euclid(p as i64) != 0))
}

/// `q = u² + 2v²` with `p ∤ u` when `p ≡ 1, 3 (mod 8)`.
pub fn u2_plus_2v2(q: u64) -> Option<(i64, i64)> {
    let (p, _) = arith::prime_power(q)?;
    let restrict = matches!(p % 8, 1 | 3);
    rep_quadratic(q, 2, |u, _| !restrict || u.rem_euclid(p as i64) != 0)
}

/// `a_{p²} = a_p² - ε(p) p^{k-1}`.
pub fn hecke_prime_square(ap: i64, p: u64, k: u32, eps: i64) -> i64 {
    ap * ap - eps * (p as i64).pow(k - 1)
}

/// Sign convention for the weight-3 CM coefficient `±2(x² - y²)`, with
/// `p = x² + y²`, `x` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmCalibration {
    pub sign: i64,
    pub prime: u64,
}

/// `2(x² - y²)` with `p = x² + y²`, `x` odd; 0 when `p ≡ 3 (mod 4)`.
pub fn cm_weight3_base(p: u64) -> i64 {
    if p % 4 == 3 {
        return 0;
    }
    let (x, y) = rep_quadratic(p, 1, |x, _| x % 2 != 0).expect("p ≡ 1 (mod 4) is a sum of two squares");
    2 * (x * x - y * y)
}

impl CmCalibration {
    /// Fixes the sign from a known product `a_p(f_2) · a_p(f_3)` at a prime
    /// `p ≡ 1 (mod 4)`, with `a_p(f_2) = weight2_ap`.
    pub fn calibrate(p: u64, product: i128, weight2_ap: i64) -> Result<Self> {
        let base = cm_weight3_base(p) as i128;
        if base == 0 || weight2_ap == 0 || product % weight2_ap as i128 != 0 {
            return Err(Error::PreconditionViolated(format!("cannot calibrate at p = {p}")));
        }
        let c = product / weight2_ap as i128;
        let sign = match c {
            c if c == base => 1,
            c if c == -base => -1,
            _ => {
                return Err(Error::PreconditionViolated(format!(
                    "calibration value {c} is not ±{} at p = {p}", base.abs()
                )))
            }
        };
        Ok(CmCalibration { sign, prime: p })
    }

    pub fn coefficient(&self, p: u64) -> i64 {
        self.sign * cm_weight3_base(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn traces() {
        let e = short_weierstrass(1, 1).unwrap();
        assert_eq!(ec_trace(&e, 5).unwrap(), -3);
        let e = EllipticCurve::new(r(0), r(-1), r(0)).unwrap();
        assert_eq!(ec_trace(&e, 5).unwrap(), -2);
        let e = short_weierstrass(1, 1).unwrap();
        assert!(ec_trace(&e, 29).unwrap().abs() <= 10);
        assert_eq!(ec_trace(&e, 2), Err(Error::SmallPrime(2)));
        // disc(x³ + x + 1) = -31
        assert_eq!(ec_trace(&e, 31), Err(Error::BadReduction(31)));
    }

    #[test]
    fn curve_builders() {
        let e = ono_curve(r(8)).unwrap();
        assert_eq!((e.c2, e.c1, e.c0), (r(-64), r(-2048), r(131072)));
        assert_eq!(ono_curve(r(4)), Err(Error::DegenerateT("4".into())));
        assert_eq!(short_weierstrass(0, 1), Err(Error::DegenerateJ));
    }

    #[test]
    fn eta_expansions() {
        let f = eta_coefficients(&eta_32_2(), 101).unwrap();
        assert_eq!((f.a(1), f.a(5)), (1, -2));
        assert_eq!(eta_coefficients(&eta_16_3(), 10).unwrap().a(5), -6);
        assert_eq!(eta_coefficients(&eta_8_4(), 10).unwrap().a(3), -4);
        let g = eta_coefficients(&eta_32_3(), 30).unwrap();
        assert_eq!([5, 13, 17, 29].map(|p| g.a(p)), [2, -14, 18, -14]);
        let e = EllipticCurve::new(r(0), r(-1), r(0)).unwrap();
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101] {
            assert_eq!(f.a(p as usize) as i64, ec_trace(&e, p).unwrap(), "p={p}");
        }
        // 1/η(z) · η(z) = 1
        let inv = eta_coefficients(&EtaQuotient::new(&[(1, -1), (1, 1), (1, 24)]), 5).unwrap();
        let delta = eta_coefficients(&EtaQuotient::new(&[(1, 24)]), 5).unwrap();
        assert_eq!(inv, delta);
        assert_eq!(eta_coefficients(&EtaQuotient::new(&[(1, 1)]), 3), Err(Error::NonIntegralLeadingPower));
    }

    #[test]
    fn quadratic_forms() {
        assert_eq!(two_squares_normalized(13).map(|(x, y)| (x, y.abs())), Some((-3, 2)));
        assert_eq!(rep_quadratic(11, 2, |_, _| true).map(|(u, v)| (u.abs(), v)), Some((3, 1)));
        assert_eq!(two_squares_normalized(7), None);
        for q in [5u64, 9, 13, 17, 25, 29, 49] {
            let (x, y) = two_squares_normalized(q).unwrap();
            assert_eq!((x * x + y * y) as u64, q);
            assert_eq!(x.rem_euclid(4), 1);
        }
    }

    #[test]
    fn hecke_and_cm() {
        assert_eq!(hecke_prime_square(0, 7, 2, 1), -7);
        assert_eq!(hecke_prime_square(2, 5, 2, 1), -1);
        assert_eq!(hecke_prime_square(3, 5, 3, 0), 9);
        assert_eq!(cm_weight3_base(7), 0);
        assert_eq!(ono_curve(Rat::new(63, 16)).unwrap().reduce(17).map(|_| ()), Ok(()));
        assert_eq!(ono_curve(Rat::new(1001, 3)), Err(Error::Overflow));
        assert_eq!(cm_weight3_base(5), -6);
        assert_eq!(cm_weight3_base(13).abs(), 10);
        let cal = CmCalibration::calibrate(5, 12, -2).unwrap();
        assert_eq!(cal.sign, 1);
        assert_eq!(cal.coefficient(5), -6);
        assert!(CmCalibration::calibrate(5, 14, -2).is_err());
    }
}
