//! The p-adic hypergeometric function `ₘGₘ[a; b | λ]_q`.
//!
//! Every summand is `±p^e · u · ω̄^j(λ)` with `u` a product of Γ_p values.
//! The exponents are computed exactly first, so the working precision can be
//! raised by the most negative one before any unit is reduced. The sum over
//! `j` is formed in Z_q with `ω(g)` the Teichmüller lift of the field
//! generator, and must land in Z_p.

use crate::arith::{frac, inv_mod, mul_mod, Rat};
use crate::error::{Error, Result};
use crate::ffhyper::{derive_defined_over_q, ff_hyper, DefinedOverQData, FFHyperParams, SplitMode};
use crate::ffield::{FieldElement, FiniteField};
use crate::padic::{GammaTable, PAdic, Zq};
use num_traits::{ToPrimitive, Zero};

/// Rational parameters, each reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GParams {
    top: Vec<Rat>,
    bottom: Vec<Rat>,
}

impl GParams {
    pub fn new(top: &[Rat], bottom: &[Rat]) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::PreconditionViolated(format!(
                "{} top and {} bottom parameters",
                top.len(),
                bottom.len()
            )));
        }
        Ok(GParams {
            top: top.iter().map(|&x| frac(x)).collect(),
            bottom: bottom.iter().map(|&x| frac(x)).collect(),
        })
    }

    pub fn top(&self) -> &[Rat] {
        &self.top
    }

    pub fn bottom(&self) -> &[Rat] {
        &self.bottom
    }

    pub fn m(&self) -> usize {
        self.top.len()
    }

    /// `NotPIntegral` unless every parameter lies in Z_p.
    pub fn check_prime(&self, p: u64) -> Result<()> {
        for x in self.top.iter().chain(&self.bottom) {
            if (*x.denom() as u64).is_multiple_of(p) {
                return Err(Error::NotPIntegral(x.to_string(), p));
            }
        }
        Ok(())
    }

    /// `{n a_i}; {n b_i}`.
    pub fn scaled(&self, n: u64) -> Self {
        let s = |xs: &[Rat]| xs.iter().map(|&x| frac(x * n as i64)).collect();
        GParams { top: s(&self.top), bottom: s(&self.bottom) }
    }

    /// `{a_i + l/n}; {b_i + l/n}`, i-major.
    pub fn split(&self, n: u64) -> Self {
        let s = |xs: &[Rat]| {
            xs.iter()
                .flat_map(|&x| (0..n as i64).map(move |l| frac(x + Rat::new(l, n as i64))))
                .collect()
        };
        GParams { top: s(&self.top), bottom: s(&self.bottom) }
    }
}

/// One summand before reduction: `±p^exponent · ∏Γ_p(num)/∏Γ_p(den)`.
struct Summand {
    negative: bool,
    exponent: i64,
    num: Vec<Rat>,
    den: Vec<Rat>,
}

/// Accumulates the Def 2.1 contribution of one top/bottom pair at `(j, k)`.
fn pair_factor(s: &mut Summand, a: Option<Rat>, b: Option<Rat>, x: Rat) {
    if let Some(a) = a {
        let e = -(a - x).floor().to_integer();
        s.num.push(frac(a - x));
        s.den.push(a);
        s.exponent += e;
        s.negative ^= e.rem_euclid(2) == 1;
    }
    if let Some(b) = b {
        let e = -(b + x).floor().to_integer();
        s.num.push(frac(b + x));
        s.den.push(b);
        s.exponent += e;
        s.negative ^= e.rem_euclid(2) == 1;
    }
}

/// `-1/(q-1) Σ_j summand_j · ω̄^j(λ)` to absolute precision `digits`.
fn reduce_sum(field: &FiniteField, summands: &[Summand], lambda: FieldElement, digits: u32) -> Result<PAdic> {
    let p = field.p();
    let q = field.q();
    let n = q - 1;
    let e_min = summands.iter().map(|s| s.exponent).min().unwrap_or(0);
    let w = (digits as i64 - e_min).max(1) as u32;
    let table = GammaTable::shared(p, w)?;
    let m = table.modulus();
    let zq = Zq::new(p, field.modulus(), w)?;
    let zeta = zq.teichmuller(&zq.from_coeffs(&field.coeffs(field.generator())));
    let l = field.dlog(lambda)?;
    let mut powers = Vec::with_capacity(n as usize);
    let mut z = zq.one();
    for _ in 0..n {
        powers.push(z.clone());
        z = zq.mul(&z, &zeta);
    }
    let mut acc = vec![0u64; field.r() as usize];
    for (j, s) in summands.iter().enumerate() {
        let shift = s.exponent - e_min;
        if shift >= w as i64 {
            continue;
        }
        let mut u = p.pow(shift as u32) % m;
        for &x in &s.num {
            u = mul_mod(u, table.gamma(x)?, m);
        }
        for &x in &s.den {
            let g = table.gamma(x)?;
            u = mul_mod(u, inv_mod(g, m).expect("Γ_p values are units"), m);
        }
        if s.negative {
            u = (m - u) % m;
        }
        // ω̄^j(λ) = ζ^{-jL}
        let e = (n - (j as u64 * l) % n) % n;
        acc = zq.add(&acc, &zq.scale(&powers[e as usize], u));
    }
    if acc[1..].iter().any(|&c| c != 0) {
        return Err(Error::Unsupported(format!(
            "value at q = {q} lies in Z_q but not in Z_p"
        )));
    }
    let s = PAdic::from_scaled_residue(p, e_min, acc[0], w);
    let pre = PAdic::from_rat(Rat::new(-1, n as i64), p, w as i64 + e_min.max(0))?;
    s.mul(&pre)
}

fn check_odd(field: &FiniteField) -> Result<()> {
    if field.p() == 2 {
        return Err(Error::EvenPrime);
    }
    Ok(())
}

/// `ₘGₘ[a; b | λ]_q` to `digits` p-adic digits.
pub fn g_eval(field: &FiniteField, params: &GParams, lambda: FieldElement, digits: u32) -> Result<PAdic> {
    check_odd(field)?;
    let p = field.p();
    params.check_prime(p)?;
    if lambda.is_zero() {
        return Ok(PAdic::zero(p, digits as i64));
    }
    let q = field.q();
    let r = field.r();
    let m = params.m();
    let summands: Vec<Summand> = (0..q - 1)
        .map(|j| {
            let mut s = Summand {
                negative: (j as usize * m) % 2 == 1,
                exponent: 0,
                num: Vec::new(),
                den: Vec::new(),
            };
            for k in 0..r {
                let pk = p.pow(k) as i64;
                let x = Rat::new(j as i64 * pk, (q - 1) as i64);
                for i in 0..m {
                    pair_factor(
                        &mut s,
                        Some(frac(params.top[i] * pk)),
                        Some(frac(-params.bottom[i] * pk)),
                        x,
                    );
                }
            }
            s
        })
        .collect();
    reduce_sum(field, &summands, lambda, digits)
}

/// The defined-over-Q form of `G`: parameters whose designated part has
/// exponent data `data`, with the remaining parameters `extra_top`,
/// `extra_bottom` entering as in the definition. With no extras this is the
/// plain defined-over-Q formula.
pub fn g_eval_over_q(
    field: &FiniteField,
    data: &DefinedOverQData,
    extra_top: &[Rat],
    extra_bottom: &[Rat],
    lambda: FieldElement,
    digits: u32,
) -> Result<PAdic> {
    check_odd(field)?;
    let p = field.p();
    let q = field.q();
    let r = field.r();
    if data.denominator.is_multiple_of(p) {
        return Err(Error::NotPIntegral(format!("1/{}", data.denominator), p));
    }
    let extras = GParams {
        top: extra_top.iter().map(|&x| frac(x)).collect(),
        bottom: extra_bottom.iter().map(|&x| frac(x)).collect(),
    };
    extras.check_prime(p)?;
    let m = data.top_len + extra_top.len();
    if m != data.bottom_len + extra_bottom.len() {
        return Err(Error::PreconditionViolated("unequal parameter counts".into()));
    }
    if lambda.is_zero() {
        return Ok(PAdic::zero(p, digits as i64));
    }
    let scale = data.scale_in(field).ok_or_else(|| {
        Error::DomainViolation { q, reason: "p divides M".into() }
    })?;
    let arg = field.mul(scale, lambda);
    let s0 = data.mult(Rat::zero()) as i64;
    let parity = (m as u64 + data.delta) % 2;
    let summands: Vec<Summand> = (0..q - 1)
        .map(|j| {
            let mut s = Summand {
                negative: (j * parity) % 2 == 1,
                exponent: r as i64 * (data.mult_at(j as i64, q) as i64 - s0),
                num: Vec::new(),
                den: Vec::new(),
            };
            for k in 0..r {
                let pk = p.pow(k) as i64;
                let x = Rat::new(j as i64 * pk, (q - 1) as i64);
                for &pi in &data.p_exps {
                    let y = -x * pi as i64;
                    let e = -y.floor().to_integer();
                    s.num.push(frac(y));
                    s.exponent += e;
                    s.negative ^= e.rem_euclid(2) == 1;
                }
                for &qi in &data.q_exps {
                    let y = x * qi as i64;
                    let e = -y.floor().to_integer();
                    s.num.push(frac(y));
                    s.exponent += e;
                    s.negative ^= e.rem_euclid(2) == 1;
                }
                for a in extras.top() {
                    pair_factor(&mut s, Some(frac(*a * pk)), None, x);
                }
                for b in extras.bottom() {
                    pair_factor(&mut s, None, Some(frac(-*b * pk)), x);
                }
            }
            s
        })
        .collect();
    reduce_sum(field, &summands, arg, digits)
}

/// Splitting mode: `Σ_l ₘGₘ[na; nb | ζ_n^l λ] - ₙₘGₙₘ[a_i + l/n; b_i + l/n | λ^n]`.
/// Converse mode: `ₙₘGₙₘ[a_i + l/n; b_i + l/n | λ]` at a λ that is not an
/// n-th power.
pub fn g_split_residual(
    field: &FiniteField,
    params: &GParams,
    n: u64,
    lambda: FieldElement,
    digits: u32,
    mode: SplitMode,
) -> Result<PAdic> {
    let q = field.q();
    if !(q - 1).is_multiple_of(n) {
        return Err(Error::OrderDoesNotDivide { n, order: q - 1 });
    }
    let big = params.split(n);
    if mode == SplitMode::Converse {
        if lambda.is_zero() || field.is_nth_power(lambda, n)? {
            return Err(Error::PreconditionViolated("λ is an n-th power".into()));
        }
        return g_eval(field, &big, lambda, digits);
    }
    let small = params.scaled(n);
    derive_defined_over_q(small.top(), small.bottom())?;
    let zeta = field.primitive_root_of_unity(n)?;
    let mut lhs = PAdic::zero(field.p(), digits as i64 + 8);
    let mut z = lambda;
    for _ in 0..n {
        lhs = lhs.add(&g_eval(field, &small, z, digits)?)?;
        z = field.mul(z, zeta);
    }
    lhs.sub(&g_eval(field, &big, field.pow(lambda, n as i64), digits)?)
}

/// `F(A; B | λ) - G[a; b | λ^{-1}]` with `A_i = ω̄^{a_i(q-1)}`, `B_i = ω̄^{b_i(q-1)}`.
/// The F value must be rational.
pub fn fg_consistency(field: &FiniteField, params: &GParams, lambda: FieldElement, digits: u32) -> Result<PAdic> {
    let q = field.q();
    let neg = |xs: &[Rat]| xs.iter().map(|&x| -x).collect::<Vec<_>>();
    let ff = FFHyperParams::from_rationals(q, &neg(params.top()), &neg(params.bottom()))?;
    let f = ff_hyper(field, &ff, lambda)?;
    let value = f.to_rational().ok_or(Error::NonRationalFValue)?;
    let num = value.numer().to_i64().ok_or(Error::NonRationalFValue)?;
    let den = value.denom().to_i64().ok_or(Error::NonRationalFValue)?;
    let fp = PAdic::from_rat(Rat::new(num, den), field.p(), digits as i64)?;
    let inv = field.inv(lambda).ok_or(Error::DivisionByZero)?;
    fp.sub(&g_eval(field, params, inv, digits)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn halves(m: usize) -> GParams {
        GParams::new(&vec![r(1, 2); m], &vec![r(1, 1); m]).unwrap()
    }

    fn phi(m: usize) -> GParams {
        let t: Vec<Rat> = (0..m).flat_map(|_| [r(1, 4), r(3, 4)]).collect();
        let b: Vec<Rat> = (0..m).flat_map(|_| [r(1, 1), r(1, 2)]).collect();
        GParams::new(&t, &b).unwrap()
    }

    fn int(field: &FiniteField, g: &GParams, lambda: i64) -> i128 {
        g_eval(field, g, field.from_int(lambda), 5).unwrap().to_integer().unwrap()
    }

    #[test]
    fn documented_values() {
        let f7 = FiniteField::of_order(7).unwrap();
        let f5 = FiniteField::of_order(5).unwrap();
        assert_eq!(int(&f7, &halves(2), 1), -1);
        assert_eq!(int(&f5, &halves(2), -1), -2);
        assert_eq!(int(&f7, &phi(3), 1), -7);
        let f3 = FiniteField::of_order(3).unwrap();
        assert_eq!(int(&f3, &halves(3), -1), -1);
    }

    #[test]
    fn prime_power_fields() {
        // q = 9 ≡ 1 (mod 8): 9 = x² + y² with x = -3 ≡ 1 (mod 4)
        let f9 = FiniteField::of_order(9).unwrap();
        assert_eq!(int(&f9, &halves(2), 1), 1);
        assert_eq!(int(&f9, &phi(2), 1), 1 + 2 * -3);
    }

    #[test]
    fn over_q_matches_definition() {
        for (a, b) in [
            (vec![r(1, 2), r(1, 2)], vec![r(1, 1), r(1, 1)]),
            (vec![r(1, 4), r(3, 4)], vec![r(1, 1), r(1, 2)]),
            (
                vec![r(1, 8), r(5, 8), r(3, 8), r(7, 8)],
                vec![r(1, 6), r(2, 3), r(1, 3), r(5, 6)],
            ),
        ] {
            let data = derive_defined_over_q(&a, &b).unwrap();
            let g = GParams::new(&a, &b).unwrap();
            for q in [5u64, 7, 9, 25] {
                let field = FiniteField::of_order(q).unwrap();
                if g.check_prime(field.p()).is_err() {
                    continue;
                }
                for lam in field.nonzero_elements() {
                    let x = g_eval(&field, &g, lam, 5).unwrap();
                    let y = g_eval_over_q(&field, &data, &[], &[], lam, 5).unwrap();
                    assert!(x.agrees_with(&y), "q={q} {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn partial_over_q_matches_definition() {
        let a = [r(1, 4), r(3, 4), r(1, 3)];
        let b = [r(1, 1), r(1, 2), r(1, 5)];
        let data = derive_defined_over_q(&a[..2], &b[..2]).unwrap();
        let g = GParams::new(&a, &b).unwrap();
        let field = FiniteField::of_order(7).unwrap();
        for lam in field.nonzero_elements() {
            let x = g_eval(&field, &g, lam, 4).unwrap();
            let y = g_eval_over_q(&field, &data, &a[2..], &b[2..], lam, 4).unwrap();
            assert!(x.agrees_with(&y));
        }
        // designated parts of different sizes: {1/2} over {} is (x²-1)/(x-1)
        let a = [r(1, 2), r(1, 3)];
        let b = [r(1, 1), r(1, 5)];
        let data = derive_defined_over_q(&a[..1], &[]).unwrap();
        let g = GParams::new(&a, &b).unwrap();
        for lam in field.nonzero_elements() {
            let x = g_eval(&field, &g, lam, 4).unwrap();
            let y = g_eval_over_q(&field, &data, &a[1..], &b, lam, 4).unwrap();
            assert!(x.agrees_with(&y));
        }
    }

    #[test]
    fn splitting_examples() {
        let f13 = FiniteField::of_order(13).unwrap();
        let base = GParams::new(&[r(1, 4), r(1, 4)], &[r(1, 2), r(1, 2)]).unwrap();
        let res = g_split_residual(&f13, &base, 2, f13.one(), 5, SplitMode::Splitting).unwrap();
        assert!(res.is_zero());
        let f5 = FiniteField::of_order(5).unwrap();
        let base3 = GParams::new(&[r(1, 4); 3], &[r(1, 2); 3]).unwrap();
        let res = g_split_residual(&f5, &base3, 2, f5.from_int(2), 5, SplitMode::Splitting).unwrap();
        assert!(res.is_zero());
        let res = g_split_residual(&f5, &base3, 2, f5.from_int(2), 5, SplitMode::Converse).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn consistency_with_finite_field_values() {
        let f13 = FiniteField::of_order(13).unwrap();
        assert!(fg_consistency(&f13, &halves(2), f13.one(), 5).unwrap().is_zero());
        let f17 = FiniteField::of_order(17).unwrap();
        let res = fg_consistency(&f17, &halves(3), f17.from_int(-1), 5).unwrap();
        assert!(res.is_zero());
        // 17 = 3² + 2·2²
        assert_eq!(int(&f17, &halves(3), -1), 4 * 9 - 17);
        let f5 = FiniteField::of_order(5).unwrap();
        let one = GParams::new(&[r(1, 2)], &[r(1, 1)]).unwrap();
        assert!(fg_consistency(&f5, &one, f5.one(), 5).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let f5 = FiniteField::of_order(5).unwrap();
        let g = GParams::new(&[r(1, 5)], &[r(1, 1)]).unwrap();
        assert!(matches!(g_eval(&f5, &g, f5.one(), 5), Err(Error::NotPIntegral(..))));
        let f9 = FiniteField::of_order(9).unwrap();
        assert!(matches!(
            g_split_residual(&f9, &halves(1), 3, f9.one(), 5, SplitMode::Splitting),
            Err(Error::OrderDoesNotDivide { .. })
        ));
    }
}
