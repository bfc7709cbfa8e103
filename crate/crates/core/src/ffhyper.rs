//! Finite-field hypergeometric functions.
//!
//! `ₘFₘ(A; B | λ)_q = -1/(q-1) Σ_χ ∏ g(A_iχ)/g(A_i) · g(\overline{B_iχ})/g(\overline{B_i}) · χ(-1)^m χ(λ)`.
//!
//! Every summand is a quotient of Gauss-sum products whose characters
//! multiply to the same total above and below the line. Such a quotient lies
//! in Q(ζ_{q-1}) and is computed here without ever leaving that field, by
//! rewriting each product through Jacobi sums (see [`GaussChain`]). When the
//! integer coefficients would overflow, evaluation falls back to explicit
//! Gauss sums in Q(ζ_{p(q-1)}).

use crate::arith::{self, lcm_denominators, Rat};
use crate::charsum::{
    gauss_index, gauss_sum, gauss_sum_inverse, Character, GaussChain, GroupRing, JacobiTable,
};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FiniteField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;

/// Character parameters `A_i = T^{top_i}`, `B_i = T^{bottom_i}`.
///
/// Lists of unequal length are only accepted through
/// [`FFHyperParams::generalized`], which uses the same summand with
/// `χ(-1)^{#top}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFHyperParams {
    q: u64,
    top: Vec<u64>,
    bottom: Vec<u64>,
    generalized: bool,
}

fn reduce_all(q: u64, xs: &[i64]) -> Vec<u64> {
    xs.iter().map(|&x| Character::new(q, x).exponent()).collect()
}

impl FFHyperParams {
    pub fn new(q: u64, top: &[i64], bottom: &[i64]) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::PreconditionViolated(format!(
                "{} top and {} bottom parameters",
                top.len(),
                bottom.len()
            )));
        }
        Ok(FFHyperParams {
            q,
            top: reduce_all(q, top),
            bottom: reduce_all(q, bottom),
            generalized: false,
        })
    }

    pub fn generalized(q: u64, top: &[i64], bottom: &[i64]) -> Self {
        FFHyperParams {
            q,
            top: reduce_all(q, top),
            bottom: reduce_all(q, bottom),
            generalized: true,
        }
    }

    pub fn from_characters(top: &[Character], bottom: &[Character]) -> Result<Self> {
        let q = top
            .iter()
            .chain(bottom)
            .map(|c| c.q())
            .next()
            .ok_or_else(|| Error::PreconditionViolated("no parameters".into()))?;
        let t: Vec<i64> = top.iter().map(|c| c.exponent() as i64).collect();
        let b: Vec<i64> = bottom.iter().map(|c| c.exponent() as i64).collect();
        Self::new(q, &t, &b)
    }

    /// `A_i = T^{a_i(q-1)}`, `B_i = T^{b_i(q-1)}`; needs `q ≡ 1` mod every
    /// denominator.
    pub fn from_rationals(q: u64, a: &[Rat], b: &[Rat]) -> Result<Self> {
        Self::new(q, &rational_exponents(q, a)?, &rational_exponents(q, b)?)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn top(&self) -> &[u64] {
        &self.top
    }

    pub fn bottom(&self) -> &[u64] {
        &self.bottom
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }
}

/// `x(q-1)` for each rational `x`, failing unless all are integers.
pub fn rational_exponents(q: u64, xs: &[Rat]) -> Result<Vec<i64>> {
    let n = (q - 1) as i64;
    xs.iter()
        .map(|x| {
            let e = *x * n;
            if e.is_integer() {
                Ok(e.to_integer())
            } else {
                Err(Error::DomainViolation {
                    q,
                    reason: format!("{x}·(q-1) is not an integer"),
                })
            }
        })
        .collect()
}

/// One summand `q^weight · ζ_{q-1}^arg · ∏ g(T^num)` of a character sum, all
/// summands sharing the same denominator `∏ g(T^den)`.
struct Term {
    num: Vec<u64>,
    weight: u32,
    arg: u64,
}

fn chain(table: &JacobiTable, list: &[u64]) -> Option<GaussChain> {
    let mut c = GaussChain::new(table.field().q() - 1);
    for &x in list {
        c.push(table, x)?;
    }
    Some(c)
}

/// `Σ_terms q^w ζ^arg ∏g(num)/∏g(den)` for balanced terms, via Jacobi sums.
fn balanced_sum_fast(field: &FiniteField, terms: &[Term], den: &[u64]) -> Option<CycNumber> {
    let n = field.q() - 1;
    let table = JacobiTable::new(field);
    let d = chain(&table, den)?;
    let mut acc = GroupRing::zero(n);
    for t in terms {
        let c = chain(&table, &t.num)?;
        if c.psi != d.psi {
            return None;
        }
        let scaled = c
            .c
            .checked_scale((field.q() as i128).checked_pow(t.weight)?)?
            .shift(t.arg as i64);
        acc = acc.checked_add(&scaled)?;
    }
    let value = acc.to_cyc().mul(&d.c.conj().to_cyc()).ok()?;
    let norm = BigInt::from(field.q()).pow(d.norm_exp);
    Some(value.scale(&BigRational::new(BigInt::one(), norm)))
}

/// The same sum from explicit Gauss sums; works for unbalanced terms too.
/// Returns an element of Q(ζ_{q-1}) when the value lies there.
fn balanced_sum_reference(field: &FiniteField, terms: &[Term], den: &[u64]) -> Result<CycNumber> {
    let q = field.q();
    let m = gauss_index(field);
    let mut inv = CycNumber::one(m);
    for &x in den {
        inv = inv.mul(&gauss_sum_inverse(field, Character::new(q, x as i64)))?;
    }
    let mut acc = CycNumber::zero(m);
    for t in terms {
        let mut prod = CycNumber::root(m, (t.arg * field.p()) as i64);
        for &x in &t.num {
            prod = prod.mul(&gauss_sum(field, Character::new(q, x as i64)))?;
        }
        let w = BigRational::from_integer(BigInt::from(q).pow(t.weight));
        acc = acc.add(&prod.scale(&w))?;
    }
    let v = acc.mul(&inv)?;
    Ok(v.descend(q - 1).unwrap_or(v))
}

fn balanced_sum(field: &FiniteField, terms: &[Term], den: &[u64]) -> Result<CycNumber> {
    match balanced_sum_fast(field, terms, den) {
        Some(v) => Ok(v),
        None => balanced_sum_reference(field, terms, den),
    }
}

/// `∏ g(T^num) / ∏ g(T^den)` for lists whose characters have equal products.
pub fn gauss_ratio(field: &FiniteField, num: &[i64], den: &[i64]) -> Result<CycNumber> {
    let q = field.q();
    let terms = [Term { num: reduce_all(q, num), weight: 0, arg: 0 }];
    balanced_sum(field, &terms, &reduce_all(q, den))
}

fn check_field(field: &FiniteField, q: u64) -> Result<()> {
    if field.q() != q {
        return Err(Error::PreconditionViolated(format!(
            "parameters for q = {q} used over F_{}",
            field.q()
        )));
    }
    Ok(())
}

fn def_terms(field: &FiniteField, params: &FFHyperParams, lambda: FieldElement) -> (Vec<Term>, Vec<u64>) {
    let n = field.q() - 1;
    let arg = if params.top.len() % 2 == 1 { field.neg(lambda) } else { lambda };
    let l = field.dlog(arg).expect("nonzero argument");
    let den: Vec<u64> = params
        .top
        .iter()
        .copied()
        .chain(params.bottom.iter().map(|&b| (n - b) % n))
        .collect();
    let terms = (0..n)
        .map(|k| Term {
            num: params
                .top
                .iter()
                .map(|&a| (a + k) % n)
                .chain(params.bottom.iter().map(|&b| (2 * n - b - k) % n))
                .collect(),
            weight: 0,
            arg: (k * l) % n,
        })
        .collect();
    (terms, den)
}

fn finish_def(field: &FiniteField, sum: CycNumber) -> CycNumber {
    let n = field.q() - 1;
    sum.scale(&BigRational::new(BigInt::from(-1), BigInt::from(n)))
}

/// `ₘFₘ(A; B | λ)_q`, exact. The value lies in Q(ζ_{q-1}) and is returned
/// there (generalized parameters may give a value outside it, returned in
/// Q(ζ_{p(q-1)})).
pub fn ff_hyper(field: &FiniteField, params: &FFHyperParams, lambda: FieldElement) -> Result<CycNumber> {
    check_field(field, params.q)?;
    if lambda.is_zero() {
        return Ok(CycNumber::zero(field.q() - 1));
    }
    let (terms, den) = def_terms(field, params, lambda);
    let sum = if params.generalized {
        balanced_sum_reference(field, &terms, &den)?
    } else {
        balanced_sum(field, &terms, &den)?
    };
    Ok(finish_def(field, sum))
}

/// Definition-level evaluation from explicit Gauss sums in Q(ζ_{p(q-1)}),
/// independent of the Jacobi-sum path.
pub fn ff_hyper_reference(field: &FiniteField, params: &FFHyperParams, lambda: FieldElement) -> Result<CycNumber> {
    check_field(field, params.q)?;
    if lambda.is_zero() {
        return Ok(CycNumber::zero(field.q() - 1));
    }
    let (terms, den) = def_terms(field, params, lambda);
    Ok(finish_def(field, balanced_sum_reference(field, &terms, &den)?))
}

/// Exponent data of parameters defined over Q:
/// `∏(x - e^{2πia})/∏(x - e^{2πib}) = ∏(x^{p_i} - 1)/∏(x^{q_i} - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinedOverQData {
    pub top_len: usize,
    pub bottom_len: usize,
    pub p_exps: Vec<u64>,
    pub q_exps: Vec<u64>,
    /// Degree of `D(x) = gcd(∏(x^{p_i}-1), ∏(x^{q_i}-1))`.
    pub delta: u64,
    /// Multiplicity of a primitive d-th root of unity as a zero of `D`,
    /// keyed by the order `d`.
    pub gcd_mult: BTreeMap<u64, u32>,
    /// `M = ∏ p_i^{p_i} / ∏ q_i^{q_i}`.
    pub scale: BigRational,
    /// Least common denominator of the parameters.
    pub denominator: u64,
}

impl DefinedOverQData {
    /// `𝔰(c)`: multiplicity of the zero `e^{2πic}` of `D`.
    pub fn mult(&self, c: Rat) -> u32 {
        let d = *arith::frac(c).denom() as u64;
        self.gcd_mult.get(&d).copied().unwrap_or(0)
    }

    /// `𝔰` at `e^{2πij/(q-1)}`.
    pub fn mult_at(&self, j: i64, q: u64) -> u32 {
        self.mult(Rat::new(j, (q - 1) as i64))
    }

    /// `M` reduced into `F_q`; `None` if `p` divides it.
    pub fn scale_in(&self, field: &FiniteField) -> Option<FieldElement> {
        let mut x = field.one();
        for &e in &self.p_exps {
            x = field.mul(x, field.pow(field.from_int(e as i64), e as i64));
        }
        for &e in &self.q_exps {
            let y = field.pow(field.from_int(e as i64), e as i64);
            x = field.mul(x, field.inv(y)?);
        }
        (!x.is_zero()).then_some(x)
    }
}

/// Orbit multiplicities `d ↦ k` such that the primitive d-th roots in `xs`
/// form `k` full Galois orbits.
fn orbit_counts(xs: &[Rat]) -> Result<BTreeMap<u64, i64>> {
    let mut by_order: BTreeMap<u64, BTreeMap<i64, i64>> = BTreeMap::new();
    for &x in xs {
        let f = arith::frac(x);
        *by_order
            .entry(*f.denom() as u64)
            .or_default()
            .entry(*f.numer())
            .or_default() += 1;
    }
    let mut out = BTreeMap::new();
    for (d, nums) in by_order {
        let phi = arith::euler_phi(d) as usize;
        let counts: Vec<i64> = nums.values().copied().collect();
        if nums.len() != phi || counts.iter().any(|&c| c != counts[0]) {
            return Err(Error::NotDefinedOverQ);
        }
        out.insert(d, counts[0]);
    }
    Ok(out)
}

/// Decomposes the root multisets of `a` and `b` into cyclotomic factors and
/// recovers the unique exponents `{p_i}`, `{q_i}` by Möbius inversion.
pub fn derive_defined_over_q(a: &[Rat], b: &[Rat]) -> Result<DefinedOverQData> {
    let ea = orbit_counts(a)?;
    let eb = orbit_counts(b)?;
    let top = ea.keys().chain(eb.keys()).copied().max().unwrap_or(1);
    let e = |d: u64| ea.get(&d).copied().unwrap_or(0) - eb.get(&d).copied().unwrap_or(0);
    let mut p_exps = Vec::new();
    let mut q_exps = Vec::new();
    for n in 1..=top {
        let c: i64 = (1..=top / n).map(|k| arith::mobius(k) * e(n * k)).sum();
        for _ in 0..c.max(0) {
            p_exps.push(n);
        }
        for _ in 0..(-c).max(0) {
            q_exps.push(n);
        }
    }
    let mut gcd_mult = BTreeMap::new();
    let mut delta = 0;
    for d in 1..=top {
        let pd = p_exps.iter().filter(|&&x| x % d == 0).count() as u32;
        let qd = q_exps.iter().filter(|&&x| x % d == 0).count() as u32;
        let s = pd.min(qd);
        if s > 0 {
            gcd_mult.insert(d, s);
            delta += arith::euler_phi(d) * s as u64;
        }
    }
    let pw = |xs: &[u64]| {
        xs.iter()
            .fold(BigInt::one(), |acc, &x| acc * BigInt::from(x).pow(x as u32))
    };
    let scale = BigRational::new(pw(&p_exps), pw(&q_exps));
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    Ok(DefinedOverQData {
        top_len: a.len(),
        bottom_len: b.len(),
        p_exps,
        q_exps,
        delta,
        gcd_mult,
        scale,
        denominator: lcm_denominators(&all),
    })
}

/// The character-sum formula for parameters whose designated part is
/// defined over Q, with remaining parameters `extra_top`, `extra_bottom`
/// entering as ordinary Gauss-sum quotients. With no extras this is the
/// fully defined-over-Q formula, valid for every `q` prime to the
/// denominators.
pub fn ff_hyper_over_q(
    field: &FiniteField,
    data: &DefinedOverQData,
    extra_top: &[Rat],
    extra_bottom: &[Rat],
    lambda: FieldElement,
) -> Result<CycNumber> {
    let q = field.q();
    let n = q - 1;
    if data.denominator.is_multiple_of(field.p()) {
        return Err(Error::DomainViolation {
            q,
            reason: format!("p divides the denominator {}", data.denominator),
        });
    }
    let m = data.top_len + extra_top.len();
    if m != data.bottom_len + extra_bottom.len() {
        return Err(Error::PreconditionViolated("unequal parameter counts".into()));
    }
    let at = rational_exponents(q, extra_top)?;
    let bt = rational_exponents(q, extra_bottom)?;
    let at: Vec<u64> = reduce_all(q, &at);
    let bt: Vec<u64> = reduce_all(q, &bt);
    if lambda.is_zero() {
        return Ok(CycNumber::zero(n));
    }
    let minv = field
        .inv(data.scale_in(field).ok_or(Error::DomainViolation {
            q,
            reason: "p divides M".into(),
        })?)
        .expect("nonzero");
    let mut arg = field.mul(minv, lambda);
    if (m as u64 + data.delta) % 2 == 1 {
        arg = field.neg(arg);
    }
    let l = field.dlog(arg)?;
    let s0 = data.mult(Rat::from_integer(0));
    let den: Vec<u64> = at.iter().copied().chain(bt.iter().map(|&b| (n - b) % n)).collect();
    let terms: Vec<Term> = (0..n)
        .map(|j| Term {
            num: data
                .p_exps
                .iter()
                .map(|&pi| (j * pi) % n)
                .chain(data.q_exps.iter().map(|&qi| (n - (j * qi) % n) % n))
                .chain(at.iter().map(|&a| (a + j) % n))
                .chain(bt.iter().map(|&b| (2 * n - b - j) % n))
                .collect(),
            weight: data.mult_at(-(j as i64), q),
            arg: (j * l) % n,
        })
        .collect();
    let sum = balanced_sum(field, &terms, &den)?;
    let sign = if (data.p_exps.len() + data.q_exps.len() + 1).is_multiple_of(2) { 1 } else { -1 };
    let den = BigInt::from(n) * BigInt::from(q).pow(s0);
    Ok(sum.scale(&BigRational::new(BigInt::from(sign), den)))
}

/// Whether [`ff_split_residual`] checks the splitting identity or the
/// vanishing at non-n-th powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    Splitting,
    Converse,
}

/// The `nm` parameters `A_i χ_n^l` (i-major) built from base exponents.
pub fn split_parameters(q: u64, base: &[u64], n: u64) -> Vec<i64> {
    let step = ((q - 1) / n) as i64;
    base.iter()
        .flat_map(|&a| (0..n as i64).map(move |l| a as i64 + l * step))
        .collect()
}

/// Splitting mode: `Σ_l ₘFₘ(A^n; B^n | ζ_n^l λ) - ₙₘFₙₘ(A_iχ_n^l; B_iχ_n^l | λ^n)`.
/// Converse mode: just `ₙₘFₙₘ(A_iχ_n^l; B_iχ_n^l | λ)`.
pub fn ff_split_residual(
    field: &FiniteField,
    top: &[i64],
    bottom: &[i64],
    n: u64,
    lambda: FieldElement,
    mode: SplitMode,
) -> Result<CycNumber> {
    let q = field.q();
    let zeta = field.primitive_root_of_unity(n)?;
    let base = FFHyperParams::new(q, top, bottom)?;
    let big = FFHyperParams::new(
        q,
        &split_parameters(q, &base.top, n),
        &split_parameters(q, &base.bottom, n),
    )?;
    if mode == SplitMode::Converse {
        return ff_hyper(field, &big, lambda);
    }
    let nth = |xs: &[u64]| -> Vec<i64> { xs.iter().map(|&x| (x * n) as i64).collect() };
    let small = FFHyperParams::new(q, &nth(&base.top), &nth(&base.bottom))?;
    let mut lhs = CycNumber::zero(q - 1);
    let mut z = lambda;
    for _ in 0..n {
        lhs = lhs.add(&ff_hyper(field, &small, z)?)?;
        z = field.mul(z, zeta);
    }
    lhs.sub(&ff_hyper(field, &big, field.pow(lambda, n as i64))?)
}

/// The three reduction formulas obtained from the n = 2 splitting, with
/// characters given as exponents of `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// `₄F₄(A, φA, B, φB; ε, φ, AB̄, φAB̄ | 1)`, for `A² ≠ ε`, `B⁴ ≠ ε`.
    M2 { a: i64, b: i64 },
    /// `₆F₆(χ₄, χ̄₄, χ₄A, χ̄₄A, χ₄Ā, χ̄₄Ā; ε, φ, Ā, φĀ, A, φA | 1)`, for
    /// `q ≡ 1 (mod 4)`, `A⁸ ≠ ε`; `chi4` picks the character of order 4.
    M3 { a: i64, chi4: i64 },
    /// `₈F₈(A, φA, χ₄A, χ̄₄A, B, φB, χ₄B, χ̄₄B; ε, φ, χ₄, χ̄₄, AB̄, φAB̄, χ₄AB̄, χ̄₄AB̄ | 1)`,
    /// for `q ≡ 1 (mod 4)`, `A⁴ ≠ ε`, `B⁸ ≠ ε`, `A² ≠ φB⁴`.
    M4 { a: i64, b: i64, chi4: i64 },
}

/// How the `₃F₂(R φ Ā², B², φB²; R, φ | 1)` inside the m = 4 formula is
/// read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeFTwo {
    /// As `₃F₃` with the missing bottom parameter taken to be ε.
    PaddedTrivial,
    /// As an unequal-length sum with `χ(-1)^3` and no third bottom quotient.
    Unequal,
}

fn is_triv(q: u64, k: i64) -> bool {
    k.rem_euclid((q - 1) as i64) == 0
}

/// Exponents `r` with `2r ≡ k (mod q-1)`.
fn square_roots(q: u64, k: i64) -> Vec<i64> {
    let n = (q - 1) as i64;
    let k = k.rem_euclid(n);
    if n % 2 == 1 {
        // odd group order: unique square root
        let inv2 = (n + 1) / 2;
        return vec![(k * inv2) % n];
    }
    if k % 2 != 0 {
        return vec![];
    }
    vec![k / 2, k / 2 + n / 2]
}

/// Checks the non-degeneracy hypotheses of a reduction formula.
pub fn check_reduction(q: u64, red: &Reduction) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenPrime);
    }
    let n = (q - 1) as i64;
    let need4 = |chi4: i64| -> Result<()> {
        if q % 4 != 1 {
            return Err(Error::OrderDoesNotDivide { n: 4, order: q - 1 });
        }
        let c = chi4.rem_euclid(n);
        if c != n / 4 && c != 3 * n / 4 {
            return Err(Error::DegenerateCharacters("chi4 must have order 4".into()));
        }
        Ok(())
    };
    match *red {
        Reduction::M2 { a, b } => {
            if is_triv(q, 2 * a) || is_triv(q, 4 * b) {
                return Err(Error::DegenerateCharacters("need A^2 != eps and B^4 != eps".into()));
            }
        }
        Reduction::M3 { a, chi4 } => {
            need4(chi4)?;
            if is_triv(q, 8 * a) {
                return Err(Error::DegenerateCharacters("need A^8 != eps".into()));
            }
        }
        Reduction::M4 { a, b, chi4 } => {
            need4(chi4)?;
            if is_triv(q, 4 * a) || is_triv(q, 8 * b) || is_triv(q, 2 * a - n / 2 - 4 * b) {
                return Err(Error::DegenerateCharacters(
                    "need A^4 != eps, B^8 != eps, A^2 != phi B^4".into(),
                ));
            }
        }
    }
    Ok(())
}

/// The left-hand side hypergeometric value of a reduction formula.
pub fn ff_reduction_lhs(field: &FiniteField, red: &Reduction) -> Result<CycNumber> {
    let q = field.q();
    check_reduction(q, red)?;
    let h = ((q - 1) / 2) as i64;
    let params = match *red {
        Reduction::M2 { a, b } => FFHyperParams::new(q, &[a, a + h, b, b + h], &[0, h, a - b, a - b + h])?,
        Reduction::M3 { a, chi4: c } => FFHyperParams::new(
            q,
            &[c, -c, c + a, -c + a, c - a, -c - a],
            &[0, h, -a, h - a, a, h + a],
        )?,
        Reduction::M4 { a, b, chi4: c } => FFHyperParams::new(
            q,
            &[a, a + h, a + c, a - c, b, b + h, b + c, b - c],
            &[0, h, c, -c, a - b, a - b + h, a - b + c, a - b - c],
        )?,
    };
    ff_hyper(field, &params, field.one())
}

/// The Gauss-sum side of a reduction formula. `tf` only matters for `M4`.
pub fn ff_reduction_rhs(field: &FiniteField, red: &Reduction, tf: ThreeFTwo) -> Result<CycNumber> {
    let q = field.q();
    check_reduction(q, red)?;
    let n = q - 1;
    let h = (n / 2) as i64;
    let ratio = |num: &[i64], den: &[i64]| gauss_ratio(field, num, den);
    // shared shape of the m = 2 formula, with (A, B) ↦ (A^s, B^s)
    let m2_like = |a: i64, b: i64| -> Result<CycNumber> {
        let mut v = ratio(&[2 * b, -2 * a + 4 * b], &[-2 * a + 2 * b, 4 * b])?;
        for r in square_roots(q, 2 * a) {
            v = v.add(&ratio(&[-2 * a, -r + 2 * b], &[-r, -2 * a + 2 * b])?)?;
        }
        Ok(v)
    };
    match *red {
        Reduction::M2 { a, b } => m2_like(a, b),
        Reduction::M3 { a, chi4: c } => {
            let mut v = CycNumber::one(n);
            for r in square_roots(q, h) {
                v = v.add(&ratio(&[-r + h + 2 * a, -r + h - 2 * a], &[-r, -r])?)?;
            }
            if q % 8 == 1 {
                for s in square_roots(q, c) {
                    v = v.add(&ratio(&[s + a, c + s + a], &[h + s + a, -c + s + a])?)?;
                }
            }
            Ok(v)
        }
        Reduction::M4 { a, b, .. } => {
            let mut v = m2_like(2 * a, 2 * b)?;
            let pref = ratio(&[-2 * a, -2 * a + h + 4 * b], &[-2 * a + 2 * b, -2 * a + h + 2 * b])?;
            let mut s = CycNumber::zero(n);
            for r in square_roots(q, 2 * a) {
                let top = [r + h - 2 * a, 2 * b, h + 2 * b];
                let f = match tf {
                    ThreeFTwo::PaddedTrivial => ff_hyper(field, &FFHyperParams::new(q, &top, &[0, r, h])?, field.one())?,
                    ThreeFTwo::Unequal => ff_hyper(field, &FFHyperParams::generalized(q, &top, &[r, h]), field.one())?,
                };
                let f = if f.index() == n { f } else {
                    return Err(Error::Unsupported(
                        "unequal-length 3F2 value is not in Q(zeta_{q-1})".into(),
                    ));
                };
                s = s.add(&f)?;
            }
            v = v.add(&pref.mul(&s)?)?;
            Ok(v)
        }
    }
}
