//! Multiplicative characters of `F_q^*`, Gauss and Jacobi sums, and the
//! classical relations between them.
//!
//! Characters are powers `T^k` of the generator character `T(g) = ζ_{q-1}`,
//! extended by `χ(0) = 0` for every χ, the trivial one included. The additive
//! character is `θ(x) = ζ_p^{Tr x}`.

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FiniteField};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// The character `T^k` on `F_q^*`, with `k` reduced mod `q - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    q: u64,
    k: u64,
}

impl Character {
    pub fn new(q: u64, k: i64) -> Self {
        let n = (q - 1) as i64;
        Character { q, k: k.rem_euclid(n) as u64 }
    }

    pub fn trivial(q: u64) -> Self {
        Self::new(q, 0)
    }

    /// The quadratic character; `q` must be odd.
    pub fn quadratic(q: u64) -> Self {
        assert!(q % 2 == 1, "quadratic character needs odd q");
        Self::new(q, ((q - 1) / 2) as i64)
    }

    /// `χ_n = T^{(q-1)/n}`, a character of exact order `n`.
    pub fn of_order(q: u64, n: u64) -> Result<Self> {
        if n == 0 || !(q - 1).is_multiple_of(n) {
            return Err(Error::OrderDoesNotDivide { n, order: q - 1 });
        }
        Ok(Self::new(q, ((q - 1) / n) as i64))
    }

    pub fn q(self) -> u64 {
        self.q
    }

    pub fn exponent(self) -> u64 {
        self.k
    }

    pub fn is_trivial(self) -> bool {
        self.k == 0
    }

    pub fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.q, o.q);
        Self::new(self.q, (self.k + o.k) as i64)
    }

    pub fn inverse(self) -> Self {
        Self::new(self.q, -(self.k as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        let n = (self.q - 1) as i128;
        Self::new(self.q, ((self.k as i128 * e as i128).rem_euclid(n)) as i64)
    }

    /// Order of the character in the character group.
    pub fn order(self) -> u64 {
        (self.q - 1) / num_integer::gcd(self.k, self.q - 1)
    }

    /// `χ(x)` as an exponent of `ζ_{q-1}`; `None` when `x = 0`.
    pub fn log_value(self, field: &FiniteField, x: FieldElement) -> Option<u64> {
        let l = field.dlog(x).ok()?;
        Some(((self.k as u128 * l as u128) % (self.q - 1) as u128) as u64)
    }

    /// `χ(-1) = ±1`.
    pub fn sign(self, field: &FiniteField) -> i64 {
        let e = self
            .log_value(field, field.from_int(-1))
            .expect("-1 is nonzero");
        if e == 0 {
            1
        } else {
            debug_assert_eq!(2 * e, self.q - 1);
            -1
        }
    }
}

/// `χ(x)` as an element of Q(ζ_{q-1}).
pub fn char_eval(field: &FiniteField, chi: Character, x: FieldElement) -> CycNumber {
    let n = field.q() - 1;
    match chi.log_value(field, x) {
        None => CycNumber::zero(n),
        Some(e) => CycNumber::root(n, e as i64),
    }
}

/// The index of the cyclotomic field holding Gauss sums over `field`.
pub fn gauss_index(field: &FiniteField) -> u64 {
    field.p() * (field.q() - 1)
}

/// `g(χ) = Σ_x χ(x) θ(x)`, exact in Q(ζ_{p(q-1)}). Cached per field and χ.
pub fn gauss_sum(field: &FiniteField, chi: Character) -> CycNumber {
    type Key = (u64, u32, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<CycNumber>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (field.p(), field.r(), chi.k);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return (**v).clone();
    }
    let p = field.p();
    let n = field.q() - 1;
    let m = p * n;
    // ζ_{q-1} = ζ_m^p and ζ_p = ζ_m^{q-1}
    let mut ring = vec![0i64; m as usize];
    for x in field.nonzero_elements() {
        let a = chi.log_value(field, x).expect("nonzero");
        let t = field.absolute_trace(x);
        let idx = (a * p + t * n) % m;
        ring[idx as usize] += 1;
    }
    let v = CycNumber::from_group_ring(m, &ring, BigInt::one());
    cache.lock().unwrap().insert(key, Arc::new(v.clone()));
    v
}

/// `1/g(χ)` through `g(χ)g(χ̄) = χ(-1)q` (and `g(ε) = -1`).
pub fn gauss_sum_inverse(field: &FiniteField, chi: Character) -> CycNumber {
    let m = gauss_index(field);
    if chi.is_trivial() {
        return CycNumber::from_int(m, -1);
    }
    let s = chi.sign(field) * field.q() as i64;
    let r = num_rational::BigRational::new(BigInt::one(), BigInt::from(s));
    gauss_sum(field, chi.inverse()).scale(&r)
}

/// `Σ_{l<n} χ(ζ_n^l)`: `n` when χ is an n-th power of a character, else 0.
pub fn orthogonality_sum(field: &FiniteField, chi: Character, n: u64) -> Result<CycNumber> {
    let z = field.primitive_root_of_unity(n)?;
    let mut acc = CycNumber::zero(field.q() - 1);
    let mut x = field.one();
    for _ in 0..n {
        acc = acc.add(&char_eval(field, chi, x))?;
        x = field.mul(x, z);
    }
    Ok(acc)
}

/// LHS minus RHS of the Hasse-Davenport product formula
/// `∏_{l<n} g(χ_n^l ψ) = g(ψ^n) ψ^{-n}(n) ∏_{0<l<n} g(χ_n^l)`.
pub fn hasse_davenport_residual(field: &FiniteField, n: u64, psi: Character) -> Result<CycNumber> {
    let q = field.q();
    let chi_n = Character::of_order(q, n)?;
    let m = gauss_index(field);
    let mut lhs = CycNumber::one(m);
    let mut rhs = gauss_sum(field, psi.pow(n as i64));
    for l in 0..n as i64 {
        lhs = lhs.mul(&gauss_sum(field, chi_n.pow(l).mul(psi)))?;
        if l > 0 {
            rhs = rhs.mul(&gauss_sum(field, chi_n.pow(l)))?;
        }
    }
    let scale = char_eval(field, psi.pow(-(n as i64)), field.from_int(n as i64)).embed(m)?;
    lhs.sub(&rhs.mul(&scale)?)
}

/// An element of the integral group ring Z[C_n], i.e. Z[x]/(x^n - 1), with
/// overflow-checked 128-bit coefficients. `x` stands for ζ_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRing {
    c: Vec<i128>,
}

impl GroupRing {
    pub fn zero(n: u64) -> Self {
        GroupRing { c: vec![0; n as usize] }
    }

    pub fn monomial(n: u64, e: i64, v: i128) -> Self {
        let mut g = Self::zero(n);
        g.c[e.rem_euclid(n as i64) as usize] = v;
        g
    }

    pub fn order(&self) -> u64 {
        self.c.len() as u64
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let c = self
            .c
            .iter()
            .zip(&o.c)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(GroupRing { c })
    }

    /// Adds `v·x^e` in place.
    pub fn add_monomial(&mut self, e: i64, v: i128) -> Option<()> {
        let i = e.rem_euclid(self.c.len() as i64) as usize;
        self.c[i] = self.c[i].checked_add(v)?;
        Some(())
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let n = self.c.len();
        let mut out = vec![0i128; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = if i + j >= n { i + j - n } else { i + j };
                out[k] = out[k].checked_add(a.checked_mul(b)?)?;
            }
        }
        Some(GroupRing { c: out })
    }

    pub fn checked_scale(&self, v: i128) -> Option<Self> {
        let c = self
            .c
            .iter()
            .map(|a| a.checked_mul(v))
            .collect::<Option<Vec<_>>>()?;
        Some(GroupRing { c })
    }

    /// Multiplication by `x^e`.
    pub fn shift(&self, e: i64) -> Self {
        let n = self.c.len();
        let s = e.rem_euclid(n as i64) as usize;
        let mut c = vec![0; n];
        for (i, &a) in self.c.iter().enumerate() {
            c[(i + s) % n] = a;
        }
        GroupRing { c }
    }

    /// The image of `x ↦ x^{-1}`, which is complex conjugation on Q(ζ_n).
    pub fn conj(&self) -> Self {
        let n = self.c.len();
        let mut c = vec![0; n];
        for (i, &a) in self.c.iter().enumerate() {
            c[(n - i) % n] = a;
        }
        GroupRing { c }
    }

    pub fn to_cyc(&self) -> CycNumber {
        CycNumber::from_group_ring(self.order(), &self.c, BigInt::one())
    }
}

/// Per-field data for Jacobi sums: `log(1 - g^i)` for every `i`.
pub struct JacobiTable<'a> {
    field: &'a FiniteField,
    one_minus: Vec<Option<u64>>,
    minus_one_log: u64,
}

impl<'a> JacobiTable<'a> {
    pub fn new(field: &'a FiniteField) -> Self {
        let n = field.q() - 1;
        let one_minus = (0..n)
            .map(|i| {
                let x = field.gen_pow(i as i64);
                field.dlog(field.sub(field.one(), x)).ok()
            })
            .collect();
        let minus_one_log = field.dlog(field.from_int(-1)).expect("nonzero");
        JacobiTable { field, one_minus, minus_one_log }
    }

    pub fn field(&self) -> &FiniteField {
        self.field
    }

    /// `dlog(-1)`; `χ(-1) = ζ^{k·dlog(-1)}`.
    pub fn minus_one_log(&self) -> u64 {
        self.minus_one_log
    }

    /// `J(T^a, T^b) = Σ_{x ≠ 0,1} T^a(x) T^b(1-x)` in Z[C_{q-1}].
    pub fn jacobi(&self, a: u64, b: u64) -> GroupRing {
        let n = self.field.q() - 1;
        let mut g = GroupRing::zero(n);
        for (i, l) in self.one_minus.iter().enumerate() {
            if let Some(l) = l {
                let e = (a as u128 * i as u128 + b as u128 * *l as u128) % n as u128;
                g.c[e as usize] += 1;
            }
        }
        g
    }
}

/// A product of Gauss sums written as `c·g(ψ)` with `c ∈ Z[ζ_{q-1}]`,
/// built one factor at a time through Jacobi sums. `|c|² = q^norm_exp`.
#[derive(Clone, Debug)]
pub struct GaussChain {
    pub c: GroupRing,
    pub psi: u64,
    pub norm_exp: u32,
}

impl GaussChain {
    /// The empty product, `1 = -g(ε)`.
    pub fn new(n: u64) -> Self {
        GaussChain { c: GroupRing::monomial(n, 0, -1), psi: 0, norm_exp: 0 }
    }

    /// Multiplies by `g(T^phi)`. `None` on coefficient overflow.
    pub fn push(&mut self, table: &JacobiTable, phi: u64) -> Option<()> {
        let n = self.c.order();
        let phi = phi % n;
        let prod = (self.psi + phi) % n;
        if prod != 0 {
            let j = table.jacobi(self.psi, phi);
            self.c = self.c.checked_mul(&j)?;
            if self.psi != 0 && phi != 0 {
                self.norm_exp += 1;
            }
            self.psi = prod;
        } else if self.psi == 0 {
            // g(ε)^2 = 1, and c·1 = (-c)·g(ε)
            self.c = self.c.checked_scale(-1)?;
        } else {
            // g(ψ)g(ψ̄) = ψ(-1)q
            let sign_exp = (self.psi as u128 * table.minus_one_log() as u128) % n as u128;
            let q = (n + 1) as i128;
            let s = if sign_exp == 0 { -q } else { q };
            self.c = self.c.checked_scale(s)?;
            self.norm_exp += 2;
            self.psi = 0;
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn character_values() {
        let f5 = f(5);
        let eps = Character::trivial(5);
        assert_eq!(char_eval(&f5, eps, f5.from_int(3)), CycNumber::one(4));
        assert_eq!(char_eval(&f5, eps, f5.zero()), CycNumber::zero(4));
        let phi = Character::quadratic(5);
        assert_eq!(char_eval(&f5, phi, f5.from_int(2)), CycNumber::from_int(4, -1));
        for k in 0..4 {
            assert_eq!(char_eval(&f5, Character::new(5, k), f5.one()), CycNumber::one(4));
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let f3 = f(3);
        assert_eq!(gauss_sum(&f3, Character::trivial(3)), CycNumber::from_int(6, -1));
        // g(φ) over F_3 is ζ_3 - ζ_3^2, seen inside Q(ζ_6)
        let want = CycNumber::root(3, 1)
            .sub(&CycNumber::root(3, 2))
            .unwrap()
            .embed(6)
            .unwrap();
        assert_eq!(gauss_sum(&f3, Character::quadratic(3)), want);
        let f5 = f(5);
        let g = gauss_sum(&f5, Character::quadratic(5));
        assert_eq!(g.mul(&g).unwrap(), CycNumber::from_int(20, 5));
    }

    #[test]
    fn orthogonality_examples() {
        let f5 = f(5);
        let phi = Character::quadratic(5);
        assert_eq!(orthogonality_sum(&f5, Character::trivial(5), 4).unwrap(), CycNumber::from_int(4, 4));
        assert_eq!(orthogonality_sum(&f5, phi, 4).unwrap(), CycNumber::zero(4));
        assert_eq!(orthogonality_sum(&f5, phi, 2).unwrap(), CycNumber::from_int(4, 2));
        assert!(orthogonality_sum(&f(7), phi_of(7), 4).is_err());
    }

    fn phi_of(q: u64) -> Character {
        Character::quadratic(q)
    }

    #[test]
    fn hasse_davenport_examples() {
        assert!(hasse_davenport_residual(&f(5), 2, Character::trivial(5)).unwrap().is_zero());
        assert!(hasse_davenport_residual(&f(7), 3, Character::new(7, 1)).unwrap().is_zero());
        assert!(hasse_davenport_residual(&f(13), 4, Character::new(13, 2)).unwrap().is_zero());
    }

    #[test]
    fn jacobi_chain_matches_gauss_sums() {
        for q in [5u64, 7, 9, 13] {
            let field = f(q);
            let table = JacobiTable::new(&field);
            let m = gauss_index(&field);
            let n = q - 1;
            let ks: Vec<u64> = vec![1, 2, n - 1, 3 % n, 0, n / 2];
            let mut chain = GaussChain::new(n);
            let mut direct = CycNumber::one(m);
            for &k in &ks {
                chain.push(&table, k).unwrap();
                direct = direct
                    .mul(&gauss_sum(&field, Character::new(q, k as i64)))
                    .unwrap();
                let via = chain
                    .c
                    .to_cyc()
                    .embed(m)
                    .unwrap()
                    .mul(&gauss_sum(&field, Character::new(q, chain.psi as i64)))
                    .unwrap();
                assert_eq!(via, direct, "q = {q}");
                let norm = chain.c.to_cyc().mul(&chain.c.conj().to_cyc()).unwrap();
                assert_eq!(norm, CycNumber::from_int(n, (q as i64).pow(chain.norm_exp)));
            }
        }
    }
}
