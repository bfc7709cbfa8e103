//! Fixed-precision p-adic numbers, Morita's p-adic gamma function and the
//! digit identities behind the Gross-Koblitz machinery.

use crate::arith::{self, floor_int, frac, inv_mod, mul_mod, pow_mod, Rat};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest `N` with `p^N < 2^63`.
pub fn max_digits(p: u64) -> u32 {
    let mut n = 0;
    let mut x: u64 = 1;
    while let Some(y) = x.checked_mul(p).filter(|&y| y < 1 << 63) {
        x = y;
        n += 1;
    }
    n
}

pub fn modulus(p: u64, digits: u32) -> Result<u64> {
    if digits > max_digits(p) {
        return Err(Error::WorkBoundExceeded(format!("{p}^{digits} does not fit in 63 bits")));
    }
    Ok(p.pow(digits))
}

/// Element of Q_p known to a fixed absolute precision: `p^val · unit` with
/// `unit` a unit known modulo `p^prec`. Zero is `unit = 0, prec = 0`, and then
/// `val` is the absolute precision (the value is `O(p^val)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
    val: i64,
    unit: u64,
    prec: u32,
}

impl PAdic {
    /// `O(p^abs)`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PAdic { p, val: abs, unit: 0, prec: 0 }
    }

    /// `p^val · s` with `s` known modulo `p^digits`, normalized.
    fn normalize(p: u64, val: i64, s: u64, digits: u32) -> Self {
        let abs = val + digits as i64;
        if digits == 0 {
            return Self::zero(p, abs);
        }
        let m = p.pow(digits);
        let mut s = s % m;
        if s == 0 {
            return Self::zero(p, abs);
        }
        let mut k = 0;
        while s.is_multiple_of(p) {
            s /= p;
            k += 1;
        }
        PAdic { p, val: val + k as i64, unit: s % p.pow(digits - k), prec: digits - k }
    }

    /// An integer, to absolute precision `abs`.
    pub fn from_int(n: i128, p: u64, abs: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero(p, abs));
        }
        let v = arith::valuation(n, p) as i64;
        if v >= abs {
            return Ok(Self::zero(p, abs));
        }
        let digits = (abs - v) as u32;
        let m = modulus(p, digits)?;
        let unit = arith::reduce_i128(n / (p as i128).pow(v as u32), m);
        Ok(PAdic { p, val: v, unit, prec: digits })
    }

    /// A rational number, to absolute precision `abs`.
    pub fn from_rat(x: Rat, p: u64, abs: i64) -> Result<Self> {
        if *x.numer() == 0 {
            return Ok(Self::zero(p, abs));
        }
        let vn = arith::valuation(*x.numer() as i128, p) as i64;
        let vd = arith::valuation(*x.denom() as i128, p) as i64;
        let v = vn - vd;
        if v >= abs {
            return Ok(Self::zero(p, abs));
        }
        let digits = (abs - v) as u32;
        let m = modulus(p, digits)?;
        let num = arith::reduce_i128(*x.numer() as i128 / (p as i128).pow(vn as u32), m);
        let den = arith::reduce_i128(*x.denom() as i128 / (p as i128).pow(vd as u32), m);
        let unit = mul_mod(num, inv_mod(den, m).expect("unit"), m);
        Ok(PAdic { p, val: v, unit, prec: digits })
    }

    /// `p^val · s` where `s` is known modulo `p^digits`.
    pub fn from_scaled_residue(p: u64, val: i64, s: u64, digits: u32) -> Self {
        Self::normalize(p, val, s, digits)
    }

    /// The residue `r mod p^digits` read as a p-adic integer.
    pub fn from_residue(r: u64, p: u64, digits: u32) -> Self {
        Self::normalize(p, 0, r, digits)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Absolute precision: the value is known modulo `p^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.prec as i64
    }

    /// Unit part and its relative precision.
    pub fn unit(&self) -> (u64, u32) {
        (self.unit, self.prec)
    }

    fn same_p(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::PreconditionViolated(format!("mixing {}-adic and {}-adic values", self.p, o.p)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_p(o)?;
        let p = self.p;
        let abs = self.abs_prec().min(o.abs_prec());
        let v = match (self.valuation(), o.valuation()) {
            (None, None) => return Ok(Self::zero(p, abs)),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        if abs <= v {
            return Ok(Self::zero(p, abs));
        }
        let digits = (abs - v) as u32;
        let m = modulus(p, digits)?;
        let lift = |x: &Self| -> u64 {
            if x.is_zero() || x.val - v >= digits as i64 {
                0
            } else {
                mul_mod(x.unit % m, p.pow((x.val - v) as u32), m)
            }
        };
        Ok(Self::normalize(p, v, (lift(self) + lift(o)) % m, digits))
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let m = self.p.pow(self.prec);
        PAdic { unit: (m - self.unit) % m, ..*self }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_p(o)?;
        let abs = (self.val + o.abs_prec()).min(o.val + self.abs_prec());
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.p, abs));
        }
        let prec = self.prec.min(o.prec);
        let m = self.p.pow(prec);
        Ok(PAdic { p: self.p, val: self.val + o.val, unit: mul_mod(self.unit % m, o.unit % m, m), prec })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.same_p(o)?;
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val - o.val));
        }
        let prec = self.prec.min(o.prec);
        let m = self.p.pow(prec);
        let inv = inv_mod(o.unit % m, m).expect("unit");
        Ok(PAdic { p: self.p, val: self.val - o.val, unit: mul_mod(self.unit % m, inv, m), prec })
    }

    /// The value modulo `p^abs_prec` as a residue, when it is integral.
    pub fn residue(&self) -> Option<(u64, u32)> {
        let abs = self.abs_prec();
        if abs < 0 || (!self.is_zero() && self.val < 0) {
            return None;
        }
        let digits = abs as u32;
        if self.is_zero() {
            return Some((0, digits));
        }
        let m = self.p.pow(digits);
        Some((mul_mod(self.unit, self.p.pow(self.val as u32), m), digits))
    }

    /// Representative in `(-p^N/2, p^N/2]` of the residue mod `p^N`.
    pub fn to_integer(&self) -> Option<i128> {
        let (r, d) = self.residue()?;
        Some(arith::symmetric_lift(r, self.p.pow(d)))
    }

    /// Base-p digits of the residue, least significant first.
    pub fn digits(&self) -> Option<Vec<u64>> {
        let (mut r, d) = self.residue()?;
        Some(
            (0..d)
                .map(|_| {
                    let x = r % self.p;
                    r /= self.p;
                    x
                })
                .collect(),
        )
    }

    /// Whether `self ≡ o` to the smaller of the two precisions.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abs = self.abs_prec();
        match self.to_integer() {
            Some(n) => write!(f, "{n} + O({}^{abs})", self.p),
            None => write!(f, "{}*{}^{} + O({}^{abs})", self.unit, self.p, self.val, self.p),
        }
    }
}

/// Residue of a p-integral rational modulo `m = p^k`.
pub fn rat_residue(x: Rat, p: u64, m: u64) -> Result<u64> {
    let d = *x.denom();
    if (d as u64).is_multiple_of(p) {
        return Err(Error::NotPIntegral(x.to_string(), p));
    }
    let num = arith::reduce_i128(*x.numer() as i128, m);
    let den = arith::reduce_i128(d as i128, m);
    Ok(mul_mod(num, inv_mod(den, m).expect("coprime"), m))
}

/// Γ_p modulo `p^w`, through precomputed block products.
///
/// `H_s(x) = ∏_{0<j<p^{s+1}, p∤j} (p^{s+1}x + j)` is a polynomial whose
/// `x^k` coefficient is divisible by `p^{(s+1)k}`, so it is stored truncated
/// to degree `< w`. Then `H_s(x) = ∏_{b<p} H_{s-1}(px + b)`, and
/// `∏_{0<j<n, p∤j} j` is a product of `H` values read off the base-p digits
/// of `n`.
#[derive(Debug)]
pub struct GammaTable {
    p: u64,
    w: u32,
    m: u64,
    h: Vec<Vec<u64>>,
}

fn poly_mul_trunc(a: &[u64], b: &[u64], w: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; w];
    for (i, &x) in a.iter().enumerate().take(w) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(w - i) {
            out[i + j] = (out[i + j] + mul_mod(x, y, m)) % m;
        }
    }
    out
}

fn poly_eval(a: &[u64], x: u64, m: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, m) + c) % m)
}

impl GammaTable {
    pub fn new(p: u64, w: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m = modulus(p, w.max(1))?;
        let wd = w.max(1) as usize;
        // binomials up to w
        let mut binom = vec![vec![0u64; wd]; wd];
        for k in 0..wd {
            binom[k][0] = 1 % m;
            for i in 1..=k {
                binom[k][i] = (binom[k - 1][i - 1] + if i < k { binom[k - 1][i] } else { 0 }) % m;
            }
        }
        let mut h0 = vec![0u64; wd];
        h0[0] = 1 % m;
        for i in 1..p {
            h0 = poly_mul_trunc(&h0, &[i % m, p % m], wd, m);
        }
        let mut h = vec![h0];
        for _ in 1..wd.saturating_sub(1) {
            let prev = h.last().unwrap();
            let mut acc = vec![0u64; wd];
            acc[0] = 1 % m;
            for b in 0..p {
                // prev(px + b): Taylor shift by b, then scale x^i by p^i
                let mut shifted = vec![0u64; wd];
                for (k, &c) in prev.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut bp = 1 % m;
                    for i in (0..=k).rev() {
                        let t = mul_mod(mul_mod(c, binom[k][i], m), bp, m);
                        shifted[i] = (shifted[i] + t) % m;
                        bp = mul_mod(bp, b, m);
                    }
                }
                let mut pi = 1 % m;
                for c in shifted.iter_mut() {
                    *c = mul_mod(*c, pi, m);
                    pi = mul_mod(pi, p, m);
                }
                acc = poly_mul_trunc(&acc, &shifted, wd, m);
            }
            h.push(acc);
        }
        Ok(GammaTable { p, w, m, h })
    }

    /// Shared table for `(p, w)`.
    pub fn shared(p: u64, w: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<GammaTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(p, w)) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::new(p, w)?);
        cache.lock().unwrap().insert((p, w), t.clone());
        Ok(t)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// `Γ_p(n) mod p^w` for a nonnegative integer.
    pub fn gamma_int(&self, n: u64) -> u64 {
        let p = self.p;
        let m = self.m;
        let n = n % m;
        let mut digits = Vec::new();
        let mut t = n;
        while t > 0 {
            digits.push(t % p);
            t /= p;
        }
        let mut prod = 1 % m;
        let mut prefix = 0u64;
        for s in (1..digits.len()).rev() {
            let h = &self.h[s - 1];
            for b in 0..digits[s] {
                prod = mul_mod(prod, poly_eval(h, (prefix * p + b) % m, m), m);
            }
            prefix = prefix * p + digits[s];
        }
        if let Some(&d0) = digits.first() {
            for b in 0..d0 {
                let j = prefix * p + b;
                if !j.is_multiple_of(p) {
                    prod = mul_mod(prod, j % m, m);
                }
            }
        }
        if n % 2 == 1 {
            (m - prod) % m
        } else {
            prod
        }
    }

    /// `Γ_p(x) mod p^w` for a p-integral rational.
    pub fn gamma(&self, x: Rat) -> Result<u64> {
        Ok(self.gamma_int(rat_residue(x, self.p, self.m)?))
    }
}

/// Largest product length accepted by [`gamma_p_naive`].
pub const NAIVE_WORK_BOUND: u64 = 100_000_000;

/// `Γ_p(x)` to `digits` digits from the defining product over the
/// representative `n ∈ [0, p^digits)`.
pub fn gamma_p_naive(x: Rat, p: u64, digits: u32) -> Result<PAdic> {
    let m = modulus(p, digits)?;
    if m > NAIVE_WORK_BOUND {
        return Err(Error::WorkBoundExceeded(format!("{p}^{digits} multiplications")));
    }
    let n = rat_residue(x, p, m)?;
    let mut prod = 1 % m;
    for j in 1..n {
        if j % p != 0 {
            prod = mul_mod(prod, j, m);
        }
    }
    if n % 2 == 1 {
        prod = (m - prod) % m;
    }
    Ok(PAdic::from_residue(prod, p, digits))
}

/// `Γ_p(x)` to `digits` digits.
pub fn gamma_p(x: Rat, p: u64, digits: u32) -> Result<PAdic> {
    let t = GammaTable::shared(p, digits)?;
    Ok(PAdic::from_residue(t.gamma(x)?, p, digits))
}

/// Teichmüller representative of `u mod p` in Z_p, modulo `p^digits`.
pub fn teichmuller(u: i128, p: u64, digits: u32) -> Result<u64> {
    let m = modulus(p, digits)?;
    let mut x = arith::reduce_i128(u, p);
    if x == 0 {
        return Ok(0);
    }
    for _ in 0..digits {
        x = pow_mod(x, p, m);
    }
    Ok(x)
}

/// The ring Z_q = Z_p[x]/(F) truncated modulo `p^digits`, where `F` is any
/// monic lift of the defining polynomial of `F_q`.
#[derive(Clone, Debug)]
pub struct Zq {
    p: u64,
    r: usize,
    m: u64,
    digits: u32,
    modulus: Vec<u64>,
}

impl Zq {
    /// `modulus`: monic polynomial over F_p of degree `r`, constant first.
    pub fn new(p: u64, modulus_poly: &[u64], digits: u32) -> Result<Self> {
        let m = modulus(p, digits)?;
        Ok(Zq {
            p,
            r: modulus_poly.len() - 1,
            m,
            digits,
            modulus: modulus_poly.iter().map(|&c| c % m).collect(),
        })
    }

    pub fn modulus_value(&self) -> u64 {
        self.m
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = 1 % self.m;
        v
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.r];
        for (i, &x) in c.iter().enumerate().take(self.r) {
            v[i] = x % self.m;
        }
        v
    }

    pub fn scalar(&self, s: u64) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = s % self.m;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.m).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        let r = self.r;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, m)) % m;
            }
        }
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &f) in self.modulus.iter().enumerate().take(r) {
                prod[d - r + i] = (prod[d - r + i] + m - mul_mod(c, f, m)) % m;
            }
            prod[d] = 0;
        }
        prod.truncate(r);
        prod
    }

    pub fn scale(&self, a: &[u64], s: u64) -> Vec<u64> {
        a.iter().map(|&x| mul_mod(x, s, self.m)).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// The (q-1)-st root of unity congruent to `a` modulo p.
    pub fn teichmuller(&self, a: &[u64]) -> Vec<u64> {
        let q = self.p.pow(self.r as u32);
        let mut x = a.to_vec();
        for _ in 0..self.digits {
            x = self.pow(&x, q);
        }
        x
    }
}

/// The expansion `(p^f - 1)a = z_f + z_1 p + … + z_{f-1} p^{f-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    pub a: Rat,
    pub p: u64,
    pub f: u32,
    /// `z[i-1] = z_i` for `1 ≤ i ≤ f`.
    pub z: Vec<u64>,
}

pub fn digit_expansion(a: Rat, p: u64, f: u32) -> Result<DigitExpansion> {
    if a <= Rat::from_integer(0) || a >= Rat::from_integer(1) {
        return Err(Error::PreconditionViolated("need 0 < a < 1".into()));
    }
    let big = a * (p.pow(f) as i64 - 1);
    if !big.is_integer() {
        return Err(Error::NotIntegralAtF);
    }
    let mut n = big.to_integer() as u64;
    let mut base = Vec::with_capacity(f as usize);
    for _ in 0..f {
        base.push(n % p);
        n /= p;
    }
    // z_f is the units digit; z_i is the digit of p^i otherwise
    let mut z = vec![0; f as usize];
    z[f as usize - 1] = base[0];
    z[..f as usize - 1].copy_from_slice(&base[1..f as usize]);
    Ok(DigitExpansion { a, p, f, z })
}

impl DigitExpansion {
    pub fn z(&self, i: u32) -> u64 {
        self.z[i as usize - 1]
    }

    /// `<a p^j>_0 = p - z_{f-j}` for `0 ≤ j < f`.
    pub fn angle0(&self, j: u32) -> u64 {
        self.p - self.z(self.f - j)
    }

    /// `floor(a p^j) = z_{f-j} + z_{f-j+1} p + … + z_{f-1} p^{j-1}` for `1 ≤ j < f`.
    pub fn floor_power(&self, j: u32) -> u64 {
        (0..j).map(|i| self.z(self.f - j + i) * self.p.pow(i)).sum()
    }
}

fn ipow(p: u64, e: u32) -> Result<i128> {
    (p as i128).checked_pow(e).ok_or(Error::Overflow)
}

/// `floor(x m)` without leaving i128.
fn floor_times(x: Rat, m: i128) -> Result<i128> {
    let n = (*x.numer() as i128).checked_mul(m).ok_or(Error::Overflow)?;
    Ok(n.div_euclid(*x.denom() as i128))
}

/// `x_0 ∈ {1, …, p}` with `x_0 ≡ x (mod p)`.
pub fn residue0(x: Rat, p: u64) -> Result<u64> {
    let r = rat_residue(x, p, p)?;
    Ok(if r == 0 { p } else { r })
}

/// Both sides of `Σ_{k<r} <a p^k>_0 ≡ r - (p^f-1)a + floor(a p^{f-1}) - floor(a p^{r-1}) (mod p-1)`,
/// reduced into `[0, p-1)`, computed directly from the rationals.
pub fn parity_sums_digits(a: Rat, p: u64, r: u32, f: u32) -> Result<(u64, u64)> {
    if r == 0 || r > f {
        return Err(Error::PreconditionViolated("need 1 ≤ r ≤ f".into()));
    }
    digit_expansion(a, p, f)?;
    let md = (p - 1) as i128;
    let mut lhs: i128 = 0;
    for k in 0..r {
        lhs += residue0(frac(a * p.pow(k) as i64), p)? as i128;
    }
    let big = floor_times(a, ipow(p, f)? - 1)?;
    let rhs = r as i128 - big + floor_times(a, ipow(p, f - 1)?)? - floor_times(a, ipow(p, r - 1)?)?;
    Ok((lhs.rem_euclid(md) as u64, rhs.rem_euclid(md) as u64))
}

/// `Σ_{t<l, gcd(t,l)=1} floor(<t/l - j/(q-1)> p^{f-1}) - floor(<t/l - j/(q-1)> p^{r-1})`
/// modulo 2, with `f = r f'`.
pub fn parity_sum_tl(l: u64, j: i64, p: u64, r: u32, f_prime: u32) -> Result<u64> {
    if l < 3 {
        return Err(Error::PreconditionViolated("need l ≥ 3".into()));
    }
    if num_integer::gcd(p, l) != 1 {
        return Err(Error::PreconditionViolated("need gcd(p, l) = 1".into()));
    }
    let q = p.pow(r);
    if q % l == 1 {
        return Err(Error::PreconditionViolated("need q ≢ 1 (mod l)".into()));
    }
    if pow_mod(q, f_prime as u64, l) != 1 {
        return Err(Error::PreconditionViolated("need q^f' ≡ 1 (mod l)".into()));
    }
    let f = r * f_prime;
    let mut s: i128 = 0;
    for t in 1..l {
        if num_integer::gcd(t, l) != 1 {
            continue;
        }
        let x = frac(Rat::new(t as i64, l as i64) - Rat::new(j, q as i64 - 1));
        s += floor_times(x, ipow(p, f - 1)?)? - floor_times(x, ipow(p, r - 1)?)?;
    }
    Ok(s.rem_euclid(2) as u64)
}

/// `floor(m x) - Σ_{h<m} floor(x + h/m)`, which vanishes by Hermite's identity.
pub fn hermite_residual(x: Rat, m: u32) -> i64 {
    let lhs = floor_int(x * m as i64);
    let rhs: i64 = (0..m).map(|h| floor_int(x + Rat::new(h as i64, m as i64))).sum();
    lhs - rhs
}

/// LHS and RHS of the multiplication formula
/// `∏_k ∏_{h<n} Γ_p(<(x+h)/n · p^k>) = ω(n^{(q-1)x}) ∏_k Γ_p(<x p^k>) ∏_{0<h<n} Γ_p(<h/n · p^k>)`
/// for `q = p^r`, to `digits` digits.
pub fn gamma_multiplication_sides(x: Rat, n: u64, p: u64, r: u32, digits: u32) -> Result<(u64, u64)> {
    if n.is_multiple_of(p) {
        return Err(Error::PreconditionViolated("need p ∤ n".into()));
    }
    let q = p.pow(r);
    let e = x * (q as i64 - 1);
    if x < Rat::from_integer(0) || x >= Rat::from_integer(1) || !e.is_integer() {
        return Err(Error::PreconditionViolated("need 0 ≤ x < 1 with (q-1)x integral".into()));
    }
    let t = GammaTable::shared(p, digits)?;
    let m = t.modulus();
    let ni = n as i64;
    let mut lhs = 1 % m;
    let mut rhs = 1 % m;
    for k in 0..r {
        let pk = p.pow(k) as i64;
        for h in 0..ni {
            lhs = mul_mod(lhs, t.gamma(frac((x + h) / ni * pk))?, m);
            if h > 0 {
                rhs = mul_mod(rhs, t.gamma(frac(Rat::new(h, ni) * pk))?, m);
            }
        }
        rhs = mul_mod(rhs, t.gamma(frac(x * pk))?, m);
    }
    let base = pow_mod(n % p, e.to_integer() as u64, p);
    rhs = mul_mod(rhs, teichmuller(base as i128, p, digits)?, m);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn arithmetic_examples() {
        let two = PAdic::from_int(2, 5, 6).unwrap();
        let three = PAdic::from_int(3, 5, 6).unwrap();
        let six = two.mul(&three).unwrap();
        assert_eq!(six.digits().unwrap()[..2], [1, 1]);
        assert!(six.sub(&six).unwrap().is_zero());
        let one = PAdic::from_int(1, 5, 6).unwrap();
        let x = one.div(&PAdic::from_int(-4, 5, 6).unwrap()).unwrap();
        // 1/(1-p) = 1 + p + p^2 + …
        assert_eq!(x.digits().unwrap(), vec![1; 6]);
        assert_eq!(one.div(&PAdic::zero(5, 6)), Err(Error::DivisionByZero));
        let tenth = PAdic::from_rat(r(1, 10), 5, 4).unwrap();
        assert_eq!(tenth.valuation(), Some(-1));
        assert_eq!(tenth.mul(&PAdic::from_int(10, 5, 6).unwrap()).unwrap().to_integer(), Some(1));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_p(r(0, 1), 5, 6).unwrap().to_integer(), Some(1));
        assert_eq!(gamma_p(r(3, 1), 5, 6).unwrap().to_integer(), Some(-2));
        let g = gamma_p(r(1, 2), 5, 6).unwrap();
        assert_eq!(g.mul(&g).unwrap().to_integer(), Some(-1));
        assert!(matches!(gamma_p(r(1, 5), 5, 3), Err(Error::NotPIntegral(..))));
        assert!(matches!(gamma_p_naive(r(1, 3), 31, 6), Err(Error::WorkBoundExceeded(_))));
    }

    #[test]
    fn fast_gamma_matches_naive() {
        for p in [3u64, 5, 7, 11, 13] {
            for w in [1u32, 2, 3, 5] {
                if p.pow(w) > 200_000 {
                    continue;
                }
                let t = GammaTable::new(p, w).unwrap();
                for n in (0..p.pow(w)).step_by(7) {
                    let want = gamma_p_naive(Rat::from_integer(n as i64), p, w).unwrap();
                    assert_eq!(PAdic::from_residue(t.gamma_int(n), p, w), want, "p={p} w={w} n={n}");
                }
            }
        }
    }

    #[test]
    fn digit_examples() {
        let d = digit_expansion(r(1, 3), 5, 2).unwrap();
        assert_eq!((d.z(2), d.z(1)), (3, 1));
        assert_eq!(d.angle0(1), 4);
        let d = digit_expansion(r(1, 2), 5, 1).unwrap();
        assert_eq!(d.z(1), 2);
        assert_eq!(d.angle0(0), 3);
        let d = digit_expansion(r(1, 2), 5, 2).unwrap();
        assert_eq!(d.z, vec![2, 2]);
        assert_eq!(digit_expansion(r(1, 3), 5, 1), Err(Error::NotIntegralAtF));
    }

    #[test]
    fn parity_examples() {
        let (l, rr) = parity_sums_digits(r(1, 3), 5, 1, 2).unwrap();
        assert_eq!((l, rr), (2, 2));
        assert_eq!(parity_sum_tl(5, 1, 3, 1, 4).unwrap(), 0);
        assert_eq!(parity_sum_tl(19, 89, 13, 2, 9).unwrap(), 0);
        assert!(parity_sum_tl(2, 1, 3, 1, 1).is_err());
    }

    #[test]
    fn teichmuller_is_a_root_of_unity() {
        for p in [5u64, 7, 13] {
            let m = p.pow(6);
            for u in 1..p {
                let w = teichmuller(u as i128, p, 6).unwrap();
                assert_eq!(w % p, u);
                assert_eq!(pow_mod(w, p - 1, m), 1);
            }
        }
        let z9 = Zq::new(3, &[1, 0, 1], 5).unwrap();
        let t = z9.teichmuller(&z9.from_coeffs(&[1, 1]));
        assert_eq!(z9.pow(&t, 8), z9.one());
        assert_eq!(t[0] % 3, 1);
        assert_eq!(t[1] % 3, 1);
    }
}
