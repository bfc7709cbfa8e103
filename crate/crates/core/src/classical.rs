//! Classical `ₘFₘ` series in the factorial-free normalization
//! `Σ_k ∏(a_i)_k / ∏(b_i)_k · z^k`, the Gamma function, and the closed forms
//! of the n = 2 reduction formulas at `z = 1`.
//!
//! At `z = 1` the terms decay like `k^s` with `s = Σa - Σb`, far too slowly
//! to sum directly. There the sum is cut at `N` and the remainder written as
//! `t_N · N · Σ_j c_j N^{-j}`, where the `c_j` solve `T_N - T_{N+1} = t_N`
//! order by order in `1/N`.

use crate::arith::Rat;
use crate::bigfloat::{bits_for_digits, ratio_to_real, BigComplex, BigReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::{Mutex, OnceLock};

pub fn rat_real(x: Rat, bits: usize) -> BigReal {
    BigReal::from_i64(*x.numer(), bits).div_i64(*x.denom())
}

fn is_nonpositive_integer(x: Rat) -> bool {
    x.is_integer() && *x.numer() <= 0
}

fn check_bottom(bottom: &[Rat]) -> Result<()> {
    if bottom.iter().any(|&b| is_nonpositive_integer(b)) {
        return Err(Error::BottomPole);
    }
    Ok(())
}

/// `∏(a_i + k) / ∏(b_i + k)`.
fn term_ratio(top: &[Rat], bottom: &[Rat], k: i64, bits: usize) -> BigReal {
    let mut r = BigReal::one(bits);
    for &a in top {
        r = r.mul_ref(&rat_real(a + k, bits));
    }
    for &b in bottom {
        r = r.div_ref(&rat_real(b + k, bits));
    }
    r
}

/// Plain partial sum over `k < terms`.
pub fn mfm_partial_sum(top: &[Rat], bottom: &[Rat], z: &BigComplex, terms: usize, digits: u32) -> Result<BigComplex> {
    check_bottom(bottom)?;
    let bits = bits_for_digits(digits + 10);
    let mut term = BigComplex::one(bits);
    let mut sum = BigComplex::zero(bits);
    for k in 0..terms {
        sum = sum.add_ref(&term);
        term = term.mul_ref(z).scale(&term_ratio(top, bottom, k as i64, bits));
    }
    Ok(sum)
}

fn is_real_one(z: &BigComplex) -> bool {
    z.im.is_zero() && z.re == BigReal::one(z.re.precision_bits())
}

/// `ₘFₘ[top; bottom | z]` to `digits` decimal digits. Needs `|z| < 1`, or
/// `z = 1` with `Σ top - Σ bottom < -1`, unless the series terminates.
pub fn mfm_series(top: &[Rat], bottom: &[Rat], z: &BigComplex, digits: u32) -> Result<BigComplex> {
    check_bottom(bottom)?;
    if top.len() != bottom.len() {
        return Err(Error::PreconditionViolated("unequal parameter counts".into()));
    }
    let terminating = top.iter().any(|&a| is_nonpositive_integer(a));
    if is_real_one(z) && !terminating {
        return Ok(BigComplex::from_real(mfm_at_one(top, bottom, digits)?));
    }
    let bits = bits_for_digits(digits + 10);
    let one = BigReal::one(bits);
    if !terminating && z.abs() >= one {
        return Err(Error::NoConvergence("|z| ≥ 1".into()));
    }
    let eps = BigReal::from_i64(10, bits).powi(digits + 5);
    let eps = one.div_ref(&eps);
    let threshold = BigReal::from_f64(0.99, bits);
    let mut term = BigComplex::one(bits);
    let mut sum = BigComplex::zero(bits);
    for k in 0..10_000_000i64 {
        if term.re.is_zero() && term.im.is_zero() {
            return Ok(sum);
        }
        sum = sum.add_ref(&term);
        let ratio = term_ratio(top, bottom, k, bits);
        let next = term.mul_ref(z).scale(&ratio);
        let rho = ratio.abs().mul_ref(&z.abs());
        if rho < threshold {
            let tail = next.abs().div_ref(&one.sub_ref(&rho));
            if tail < eps {
                return Ok(sum.add_ref(&next));
            }
        }
        term = next;
    }
    Err(Error::NoConvergence("term limit reached".into()))
}

fn series_mul(a: &[BigReal], b: &[BigReal], len: usize, bits: usize) -> Vec<BigReal> {
    let mut out = vec![BigReal::zero(bits); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
        }
    }
    out
}

/// `(1 + u)^e` as a truncated power series.
fn binomial_series(e: i64, len: usize, bits: usize) -> Vec<BigReal> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigReal::one(bits);
    for i in 0..len as i64 {
        out.push(c.clone());
        c = c.mul_i64(e - i).div_i64(i + 1);
    }
    out
}

/// `(1 + x u)^{±1}` as a truncated power series.
fn linear_series(x: Rat, inverse: bool, len: usize, bits: usize) -> Vec<BigReal> {
    let xr = rat_real(x, bits);
    if !inverse {
        let mut v = vec![BigReal::zero(bits); len];
        v[0] = BigReal::one(bits);
        if len > 1 {
            v[1] = xr;
        }
        return v;
    }
    let step = xr.negated();
    let mut out = Vec::with_capacity(len);
    let mut c = BigReal::one(bits);
    for _ in 0..len {
        out.push(c.clone());
        c = c.mul_ref(&step);
    }
    out
}

/// Coefficients `c_0, …, c_J` of the remainder expansion at `z = 1`.
fn tail_coefficients(top: &[Rat], bottom: &[Rat], terms: usize, bits: usize) -> Vec<BigReal> {
    let len = terms + 2;
    let mut r = vec![BigReal::zero(bits); len];
    r[0] = BigReal::one(bits);
    for &a in top {
        r = series_mul(&r, &linear_series(a, false, len, bits), len, bits);
    }
    for &b in bottom {
        r = series_mul(&r, &linear_series(b, true, len, bits), len, bits);
    }
    // v_j[k] for k ≥ j: coefficient of u^k in u^j (1 - R(u)(1+u)^{1-j})
    let v: Vec<Vec<BigReal>> = (0..=terms)
        .map(|j| {
            let p = series_mul(&r, &binomial_series(1 - j as i64, len, bits), len, bits);
            let mut out = vec![BigReal::zero(bits); len];
            for k in j..len {
                let mut x = p[k - j].negated();
                if k == j {
                    x = x.add_ref(&BigReal::one(bits));
                }
                out[k] = x;
            }
            out
        })
        .collect();
    let mut c: Vec<BigReal> = Vec::with_capacity(terms + 1);
    for k in 1..=terms + 1 {
        let mut rhs = if k == 1 { BigReal::one(bits) } else { BigReal::zero(bits) };
        for (j, cj) in c.iter().enumerate() {
            rhs = rhs.sub_ref(&cj.mul_ref(&v[j][k]));
        }
        c.push(rhs.div_ref(&v[k - 1][k]));
    }
    c
}

/// `ₘFₘ[top; bottom | 1]` for `Σ top - Σ bottom < -1`.
pub fn mfm_at_one(top: &[Rat], bottom: &[Rat], digits: u32) -> Result<BigReal> {
    check_bottom(bottom)?;
    let s: Rat = top.iter().sum::<Rat>() - bottom.iter().sum::<Rat>();
    if s >= Rat::from_integer(-1) {
        return Err(Error::NoConvergence(format!("Σa - Σb = {s} ≥ -1 at z = 1")));
    }
    let bits = bits_for_digits(digits + 20);
    let n = (8 * digits as usize).max(200);
    let terms = (digits as usize / 2 + 15).min(n / 4);
    let mut t = BigReal::one(bits);
    let mut sum = BigReal::zero(bits);
    for k in 0..n {
        sum = sum.add_ref(&t);
        t = t.mul_ref(&term_ratio(top, bottom, k as i64, bits));
    }
    let c = tail_coefficients(top, bottom, terms, bits);
    let inv_n = BigReal::one(bits).div_i64(n as i64);
    let mut f = BigReal::zero(bits);
    let mut pw = BigReal::one(bits);
    for cj in &c {
        f = f.add_ref(&cj.mul_ref(&pw));
        pw = pw.mul_ref(&inv_n);
    }
    Ok(sum.add_ref(&t.mul_i64(n as i64).mul_ref(&f)))
}

/// `Σ_l ₘFₘ[na; nb | ξ_n^l z] - n · ₙₘFₙₘ[a_i + l/n; b_i + l/n | z^n]`.
pub fn classical_split_residual(a: &[Rat], b: &[Rat], n: u64, z: &BigComplex, digits: u32) -> Result<BigComplex> {
    let bits = bits_for_digits(digits + 10);
    let ni = n as i64;
    let na: Vec<Rat> = a.iter().map(|&x| x * ni).collect();
    let nb: Vec<Rat> = b.iter().map(|&x| x * ni).collect();
    let split = |xs: &[Rat]| -> Vec<Rat> {
        xs.iter()
            .flat_map(|&x| (0..ni).map(move |l| x + Rat::new(l, ni)))
            .collect()
    };
    let mut lhs = BigComplex::zero(bits);
    for l in 0..ni {
        let zl = z.mul_ref(&BigComplex::root_of_unity(n, l, bits));
        lhs = lhs.add_ref(&mfm_series(&na, &nb, &zl, digits)?);
    }
    let zn = z.powi(n as u32);
    let rhs = mfm_series(&split(a), &split(b), &zn, digits)?;
    Ok(lhs.sub_ref(&rhs.scale(&BigReal::from_i64(ni, bits))))
}

/// Bernoulli numbers `B_0, …, B_n` (with `B_1 = -1/2`).
fn bernoulli(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        let m = b.len();
        // Σ_{j<m+1} C(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(m + 1));
        b.push(next);
    }
    b[..=n].to_vec()
}

/// `Γ(x)` to `digits` decimal digits.
pub fn gamma_real(x: &BigReal, digits: u32) -> Result<BigReal> {
    let bits = bits_for_digits(digits + 10);
    if x.is_integer() && (x.is_negative() || x.is_zero()) {
        return Err(Error::GammaPole(x.to_sci_string(12)));
    }
    let half = BigReal::one(bits).div_i64(2);
    if *x < half {
        // reflection
        let pi = BigReal::pi(bits);
        let one_minus = BigReal::one(bits).sub_ref(x);
        let s = pi.mul_ref(x).sin();
        return Ok(pi.div_ref(&s.mul_ref(&gamma_real(&one_minus, digits)?)));
    }
    let target = BigReal::from_i64(digits as i64 + 10, bits);
    let mut y = x.clone();
    let mut shift = BigReal::one(bits);
    while y < target {
        shift = shift.mul_ref(&y);
        y = y.add_ref(&BigReal::one(bits));
    }
    let terms = digits as usize + 10;
    let b = bernoulli(2 * terms);
    let two_pi = BigReal::pi(bits).mul_i64(2);
    let mut lg = y.sub_ref(&half).mul_ref(&y.ln()).sub_ref(&y).add_ref(&two_pi.ln().mul_ref(&half));
    let y2 = y.mul_ref(&y);
    let mut ypow = y.clone();
    for k in 1..=terms {
        let coef = &b[2 * k] / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        lg = lg.add_ref(&ratio_to_real(&coef, bits).div_ref(&ypow));
        ypow = ypow.mul_ref(&y2);
    }
    Ok(lg.exp().div_ref(&shift))
}

pub fn gamma_rat(x: Rat, digits: u32) -> Result<BigReal> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x.to_string()));
    }
    gamma_real(&rat_real(x, bits_for_digits(digits + 10)), digits)
}

/// `(a)_k` exactly.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        x += BigRational::one();
    }
    acc
}

/// `(a)_{nk} - n^{nk} ∏_{l<n} (a/n + l/n)_k`, exactly.
pub fn pochhammer_multiplication_residual(a: &BigRational, n: u64, k: u64) -> BigRational {
    let nb = BigInt::from(n);
    let lhs = pochhammer(a, n * k);
    let mut rhs = BigRational::from_integer(nb.pow((n * k) as u32));
    for l in 0..n {
        let x = (a + BigRational::from_integer(BigInt::from(l))) / BigRational::from_integer(nb.clone());
        rhs *= pochhammer(&x, k);
    }
    lhs - rhs
}

/// The n = 2 reduction formulas at `z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalReduction {
    /// `₄F₄[a, a+1/2, b, b+1/2; 1, 1/2, 1/2+a-b, 1+a-b | 1]`, `b < 1/4`.
    M2 { a: Rat, b: Rat },
    /// `₆F₆[1/4, 3/4, 1/4+a, 3/4+a, 1/4-a, 3/4-a; 1, 1/2, 1-a, 1/2-a, 1+a, 1/2+a | 1]`.
    M3 { a: Rat },
    /// `₈F₈[a, a+1/2, a+1/4, a+3/4, b, b+1/2, b+1/4, b+3/4;
    /// 1, 1/2, 1/4, 3/4, 1/2+a-b, 1+a-b, 1/4+a-b, 3/4+a-b | 1]`, `b < 1/8`.
    M4 { a: Rat, b: Rat },
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// The embedded `₃F₂[1/2-a, 2b, 2b+1/2; 1+a, 1/2 | 1]` in the factorial-free form.
fn m4_three_f_two(a: Rat, b: Rat) -> (Vec<Rat>, Vec<Rat>) {
    (
        vec![r(1, 2) - a, b * 2, b * 2 + r(1, 2)],
        vec![r(1, 1), a + 1, r(1, 2)],
    )
}

impl ClassicalReduction {
    pub fn parameters(&self) -> (Vec<Rat>, Vec<Rat>) {
        let one = r(1, 1);
        let half = r(1, 2);
        match *self {
            Self::M2 { a, b } => (
                vec![a, a + half, b, b + half],
                vec![one, half, half + a - b, one + a - b],
            ),
            Self::M3 { a } => {
                let q = r(1, 4);
                let tq = r(3, 4);
                (
                    vec![q, tq, q + a, tq + a, q - a, tq - a],
                    vec![one, half, one - a, half - a, one + a, half + a],
                )
            }
            Self::M4 { a, b } => {
                let q = r(1, 4);
                let tq = r(3, 4);
                (
                    vec![a, a + half, a + q, a + tq, b, b + half, b + q, b + tq],
                    vec![one, half, q, tq, half + a - b, one + a - b, q + a - b, tq + a - b],
                )
            }
        }
    }

    /// Checks the stated constraints plus the absence of poles.
    pub fn check(&self) -> Result<()> {
        match *self {
            Self::M2 { b, .. } if b >= r(1, 4) => return Err(Error::ConstraintViolated("need b < 1/4".into())),
            Self::M4 { b, .. } if b >= r(1, 8) => return Err(Error::ConstraintViolated("need b < 1/8".into())),
            _ => {}
        }
        if let Self::M4 { a, b } = *self {
            let (t, u) = m4_three_f_two(a, b);
            let s: Rat = t.iter().sum::<Rat>() - u.iter().sum::<Rat>();
            if s >= r(-1, 1) {
                return Err(Error::ConstraintViolated("embedded ₃F₂ diverges at 1".into()));
            }
        }
        let (_, bottom) = self.parameters();
        if bottom.iter().any(|&x| is_nonpositive_integer(x)) {
            return Err(Error::ConstraintViolated("bottom parameter is a nonpositive integer".into()));
        }
        Ok(())
    }

    pub fn lhs(&self, digits: u32) -> Result<BigReal> {
        self.check()?;
        let (t, b) = self.parameters();
        mfm_at_one(&t, &b, digits)
    }

    pub fn rhs(&self, digits: u32) -> Result<BigReal> {
        self.check()?;
        let bits = bits_for_digits(digits + 10);
        let g = |x: Rat| gamma_rat(x, digits + 5);
        let one = r(1, 1);
        match *self {
            Self::M2 { a, b } => m2_rhs(a, b, 2, digits),
            Self::M3 { a } => {
                let pi = BigReal::pi(bits);
                let pre = g(one + a * 2)?.mul_ref(&g(one - a * 2)?).div_ref(&pi.mul_i64(4));
                let first = g(r(1, 4))?.powi(2).div_ref(&g(r(3, 4) - a * 2)?.mul_ref(&g(r(3, 4) + a * 2)?));
                let den = g(a + r(5, 8))?
                    .mul_ref(&g(a + r(7, 8))?)
                    .mul_ref(&g(r(5, 8) - a)?)
                    .mul_ref(&g(r(7, 8) - a)?);
                let second = BigReal::from_i64(2, bits).sqrt().mul_ref(&pi.mul_ref(&pi)).div_ref(&den);
                Ok(pre.mul_ref(&first.add_ref(&second)))
            }
            Self::M4 { a, b } => {
                let first = m2_rhs(a * 2, b * 2, 4, digits)?;
                let half = r(1, 2);
                let pre = g(one + a * 2 - b * 2)?
                    .mul_ref(&g(half + a * 2 - b * 2)?)
                    .div_ref(&g(one + a * 2)?.mul_ref(&g(half + a * 2 - b * 4)?).mul_i64(2));
                let (t, u) = m4_three_f_two(a, b);
                Ok(first.add_ref(&pre.mul_ref(&mfm_at_one(&t, &u, digits)?)))
            }
        }
    }
}

/// `1/d [Γ(1+2a-2b)Γ(1-4b)/(Γ(1-2b)Γ(1+2a-4b)) + Γ(1+2a-2b)Γ(1+a)/(Γ(1+2a)Γ(1+a-2b))]`.
fn m2_rhs(a: Rat, b: Rat, d: i64, digits: u32) -> Result<BigReal> {
    let g = |x: Rat| gamma_rat(x, digits + 5);
    let one = r(1, 1);
    let common = g(one + a * 2 - b * 2)?;
    let x = common.mul_ref(&g(one - b * 4)?).div_ref(&g(one - b * 2)?.mul_ref(&g(one + a * 2 - b * 4)?));
    let y = common.mul_ref(&g(one + a)?).div_ref(&g(one + a * 2)?.mul_ref(&g(one + a - b * 2)?));
    Ok(x.add_ref(&y).div_i64(d))
}

/// `|x - y|` for reporting.
pub fn abs_diff(x: &BigReal, y: &BigReal) -> BigReal {
    x.sub_ref(y).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(z: Rat) -> BigComplex {
        BigComplex::from_real(rat_real(z, bits_for_digits(60)))
    }

    #[test]
    fn trivial_series() {
        let v = mfm_series(&[r(1, 3)], &[r(1, 3)], &real(r(1, 2)), 30).unwrap();
        assert!(v.sub_ref(&real(r(2, 1))).is_below_decimal(30));
        let v = mfm_series(&[r(1, 1)], &[r(1, 1)], &real(r(1, 3)), 30).unwrap();
        assert!(v.sub_ref(&real(r(3, 2))).is_below_decimal(30));
        assert_eq!(mfm_series(&[r(1, 2)], &[r(-2, 1)], &real(r(1, 3)), 30), Err(Error::BottomPole));
        assert!(matches!(
            mfm_series(&[r(1, 2)], &[r(1, 1)], &real(r(3, 2)), 30),
            Err(Error::NoConvergence(_))
        ));
    }

    #[test]
    fn series_matches_long_partial_sum() {
        let z = real(r(1, 4));
        let t = [r(1, 2), r(1, 2)];
        let b = [r(1, 1), r(1, 1)];
        let v = mfm_series(&t, &b, &z, 30).unwrap();
        let w = mfm_partial_sum(&t, &b, &z, 500, 40).unwrap();
        assert!(v.sub_ref(&w).is_below_decimal(30));
    }

    #[test]
    fn value_at_one() {
        // Gauss: 2F1(a, b; c | 1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))
        let (a, b, c) = (r(1, 3), r(1, 4), r(2, 1));
        let v = mfm_at_one(&[a, b], &[c, r(1, 1)], 40).unwrap();
        let g = |x| gamma_rat(x, 45).unwrap();
        let want = g(c).mul_ref(&g(c - a - b)).div_ref(&g(c - a).mul_ref(&g(c - b)));
        assert!(abs_diff(&v, &want).is_below_decimal(38), "{v} vs {want}");
    }

    #[test]
    fn gamma_values() {
        let bits = bits_for_digits(50);
        let g = gamma_rat(r(1, 2), 40).unwrap();
        assert!(abs_diff(&g, &BigReal::pi(bits).sqrt()).is_below_decimal(38));
        assert!(abs_diff(&gamma_rat(r(5, 1), 40).unwrap(), &BigReal::from_i64(24, bits)).is_below_decimal(36));
        let prod = gamma_rat(r(1, 4), 40).unwrap().mul_ref(&gamma_rat(r(3, 4), 40).unwrap());
        let want = BigReal::pi(bits).mul_ref(&BigReal::from_i64(2, bits).sqrt());
        assert!(abs_diff(&prod, &want).is_below_decimal(38));
        assert!(matches!(gamma_rat(r(-3, 1), 40), Err(Error::GammaPole(_))));
        let neg = gamma_rat(r(-1, 2), 40).unwrap();
        assert!(abs_diff(&neg, &BigReal::pi(bits).sqrt().mul_i64(-2)).is_below_decimal(37));
    }

    #[test]
    fn splitting_examples() {
        let z = real(r(1, 5));
        let res = classical_split_residual(&[r(1, 3)], &[r(1, 1)], 2, &z, 30).unwrap();
        assert!(res.is_below_decimal(25));
        let res = classical_split_residual(&[r(1, 3)], &[r(1, 1)], 1, &z, 30).unwrap();
        assert!(res.is_below_decimal(28));
        let z = real(r(1, 10));
        let res = classical_split_residual(&[r(1, 4), r(1, 2)], &[r(1, 1), r(2, 3)], 3, &z, 30).unwrap();
        assert!(res.is_below_decimal(25));
    }

    #[test]
    fn reductions() {
        for red in [
            ClassicalReduction::M2 { a: r(1, 5), b: r(1, 10) },
            ClassicalReduction::M3 { a: r(1, 8) },
            ClassicalReduction::M4 { a: r(1, 5), b: r(1, 20) },
        ] {
            let l = red.lhs(30).unwrap();
            let rr = red.rhs(30).unwrap();
            assert!(abs_diff(&l, &rr).is_below_decimal(22), "{red:?}: {l} vs {rr}");
        }
        assert!(matches!(
            ClassicalReduction::M2 { a: r(1, 5), b: r(1, 2) }.rhs(30),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn pochhammer_identity() {
        for (n, d) in [(1, 3), (-7, 5), (2, 1)] {
            let a = BigRational::new(n.into(), d.into());
            for m in 1..=5 {
                assert!(pochhammer_multiplication_residual(&a, m, 7).is_zero());
            }
        }
    }
}
