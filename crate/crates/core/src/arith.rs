//! Small-integer number theory used across the crate.

use num_integer::Integer;
use num_rational::Rational64;

/// Rational parameters of hypergeometric functions.
pub type Rat = Rational64;

/// Fractional part `<x> = x - floor(x)`, in `[0, 1)`.
pub fn frac(x: Rat) -> Rat {
    x - x.floor()
}

/// `floor(x)` as an integer.
pub fn floor_int(x: Rat) -> i64 {
    x.floor().to_integer()
}

/// `ceil(x)` as an integer.
pub fn ceil_int(x: Rat) -> i64 {
    x.ceil().to_integer()
}

/// Least common multiple of the denominators.
pub fn lcm_denominators(xs: &[Rat]) -> u64 {
    xs.iter().fold(1u64, |acc, x| acc.lcm(&(*x.denom() as u64)))
}

/// Parses `3`, `-1/2` or `0.25` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Rat::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.trim_start().starts_with('-');
        let ip: i64 = if i.is_empty() || i == "-" { 0 } else { i.parse().ok()? };
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) || f.len() > 17 {
            return None;
        }
        let den = 10i64.pow(f.len() as u32);
        let fp: i64 = f.parse().ok()?;
        let mag = ip.abs() * den + fp;
        return Some(Rat::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<i64>().ok().map(Rat::from_integer)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Writes `q` as `p^r` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    match f.as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Representative of `x mod m` in `(-m/2, m/2]`.
pub fn symmetric_lift(x: u64, m: u64) -> i128 {
    let x = x % m;
    if x > m / 2 {
        x as i128 - m as i128
    } else {
        x as i128
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i128, p: u64) -> i32 {
    let a = reduce_i128(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(600), 160);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(4, 8), None);
        assert_eq!(symmetric_lift(124, 125), -1);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(valuation(-250, 5), 3);
    }

    #[test]
    fn rationals() {
        assert_eq!(frac(Rat::new(-1, 3)), Rat::new(2, 3));
        assert_eq!(floor_int(Rat::new(-1, 3)), -1);
        assert_eq!(ceil_int(Rat::new(7, 3)), 3);
        assert_eq!(parse_rat("-1/2"), Some(Rat::new(-1, 2)));
        assert_eq!(parse_rat("0.25"), Some(Rat::new(1, 4)));
        assert_eq!(parse_rat("-0.5"), Some(Rat::new(-1, 2)));
        assert_eq!(parse_rat("7"), Some(Rat::from_integer(7)));
        assert_eq!(parse_rat("x"), None);
        assert_eq!(lcm_denominators(&[Rat::new(1, 4), Rat::new(1, 6)]), 12);
    }
}
