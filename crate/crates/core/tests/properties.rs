use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use hypersplit_core::arith::Rat;
use hypersplit_core::charsum::{gauss_sum, hasse_davenport_residual, Character};
use hypersplit_core::classical::pochhammer_multiplication_residual;
use hypersplit_core::ffhyper::{ff_hyper, ff_hyper_reference, ff_split_residual, SplitMode};
use hypersplit_core::gfunction::{fg_consistency, g_eval, g_split_residual};
use hypersplit_core::oracles::{ec_trace, EllipticCurve};
use hypersplit_core::padic::{gamma_p, gamma_p_naive, hermite_residual, residue0};
use hypersplit_core::{CycNumber, FFHyperParams, FiniteField, GParams, PAdic};

const SMALL_Q: [u64; 9] = [3, 4, 5, 7, 8, 9, 11, 13, 16];
const ODD_Q: [u64; 7] = [3, 5, 7, 9, 11, 13, 25];
const ODD_P: [u64; 5] = [3, 5, 7, 11, 13];

fn field(q: u64) -> FiniteField {
    FiniteField::of_order(q).unwrap()
}

fn cyc(m: u64, coeffs: &[i64]) -> CycNumber {
    CycNumber::from_group_ring(m, coeffs, BigInt::one())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12]), 0i64..12).prop_map(|(d, n)| Rat::new(n % d, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(
        m in prop::sample::select(vec![3u64, 4, 5, 8, 12]),
        raw in prop::collection::vec(-5i64..=5, 36),
    ) {
        let m_us = m as usize;
        let (a, b, c) = (cyc(m, &raw[..m_us]), cyc(m, &raw[12..12 + m_us]), cyc(m, &raw[24..24 + m_us]));
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        // complex conjugation is a ring automorphism
        prop_assert_eq!(a.mul(&b).unwrap().conj(), a.conj().mul(&b.conj()).unwrap());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), CycNumber::one(m));
        }
    }

    #[test]
    fn field_logs_and_inverses(q in prop::sample::select(SMALL_Q.to_vec()), code in 1u32..1000) {
        let f = field(q);
        let x = f.from_code(1 + code % (q as u32 - 1));
        prop_assert_eq!(f.gen_pow(f.dlog(x).unwrap() as i64), x);
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        prop_assert_eq!(f.pow(x, q as i64 - 1), f.one());
    }

    #[test]
    fn gauss_sums_have_norm_q(q in prop::sample::select(SMALL_Q.to_vec()), k in 1i64..100) {
        let f = field(q);
        let chi = Character::new(q, 1 + k % (q as i64 - 1));
        prop_assume!(!chi.is_trivial());
        let g = gauss_sum(&f, chi);
        prop_assert_eq!(g.mul(&g.conj()).unwrap(), CycNumber::from_int(g.index(), q as i64));
    }

    #[test]
    fn hasse_davenport_holds(q in prop::sample::select(SMALL_Q.to_vec()), k in 0i64..100, n_pick in 0usize..8) {
        let divisors: Vec<u64> = (1..q).filter(|n| (q - 1) % n == 0).collect();
        let n = divisors[n_pick % divisors.len()];
        let r = hasse_davenport_residual(&field(q), n, Character::new(q, k)).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn fast_ff_matches_definition(
        q in prop::sample::select(ODD_Q.to_vec()),
        m in 1usize..=3,
        raw in prop::collection::vec(0i64..1000, 6),
        code in 0u32..1000,
    ) {
        let f = field(q);
        let top: Vec<i64> = raw[..m].to_vec();
        let bottom: Vec<i64> = raw[3..3 + m].to_vec();
        let params = FFHyperParams::new(q, &top, &bottom).unwrap();
        let lambda = f.from_code(code % q as u32);
        prop_assert_eq!(ff_hyper(&f, &params, lambda).unwrap(), ff_hyper_reference(&f, &params, lambda).unwrap());
    }

    #[test]
    fn ff_splitting_vanishes(
        q in prop::sample::select(vec![5u64, 7, 9, 13]),
        m in 1usize..=2,
        raw in prop::collection::vec(0i64..1000, 4),
        n_pick in 0usize..8,
        code in 0u32..1000,
    ) {
        let f = field(q);
        let divisors: Vec<u64> = (1..q).filter(|n| (q - 1) % n == 0).collect();
        let n = divisors[n_pick % divisors.len()];
        let lambda = f.from_code(code % q as u32);
        let r = ff_split_residual(&f, &raw[..m], &raw[2..2 + m], n, lambda, SplitMode::Splitting).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn g_is_invariant_under_shifts_and_permutations(
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
        top in prop::collection::vec(small_rat(), 3),
        bottom in prop::collection::vec(small_rat(), 3),
        shifts in prop::collection::vec(-3i64..=3, 6),
        code in 1u32..1000,
    ) {
        let f = field(p);
        let lambda = f.from_code(1 + code % (p as u32 - 1));
        let base = g_eval(&f, &GParams::new(&top, &bottom).unwrap(), lambda, 5).unwrap();
        let shifted_top: Vec<Rat> = top.iter().zip(&shifts).map(|(&a, &s)| a + s).collect();
        let shifted_bottom: Vec<Rat> = bottom.iter().zip(&shifts[3..]).map(|(&b, &s)| b + s).collect();
        let shifted = g_eval(&f, &GParams::new(&shifted_top, &shifted_bottom).unwrap(), lambda, 5).unwrap();
        prop_assert!(base.agrees_with(&shifted));
        let (mut t, mut b) = (top.clone(), bottom.clone());
        t.rotate_left(1);
        b.swap(0, 2);
        let permuted = g_eval(&f, &GParams::new(&t, &b).unwrap(), lambda, 5).unwrap();
        prop_assert!(base.agrees_with(&permuted));
    }

    #[test]
    fn g_splitting_vanishes(
        q in prop::sample::select(vec![5u64, 7, 13, 25]),
        pick in 0usize..4,
        lifts in prop::collection::vec(0i64..2, 4),
        code in 1u32..1000,
    ) {
        // n a must be defined over Q; take a_i = (s_i + k_i)/2 for such s
        let families: [(&[(i64, i64)], &[(i64, i64)]); 4] = [
            (&[(1, 2), (1, 2)], &[(0, 1), (0, 1)]),
            (&[(1, 3), (2, 3)], &[(0, 1), (0, 1)]),
            (&[(1, 4), (3, 4)], &[(0, 1), (1, 2)]),
            (&[(1, 3), (2, 3)], &[(0, 1), (1, 2)]),
        ];
        let (t, b) = families[pick];
        let lift = |xs: &[(i64, i64)], ks: &[i64]| {
            xs.iter().zip(ks).map(|(&(n, d), &k)| (Rat::new(n, d) + k) / 2).collect::<Vec<_>>()
        };
        let f = field(q);
        let params = GParams::new(&lift(t, &lifts[..2]), &lift(b, &lifts[2..])).unwrap();
        prop_assume!(params.check_prime(f.p()).is_ok());
        let lambda = f.from_code(1 + code % (q as u32 - 1));
        let r = g_split_residual(&f, &params, 2, lambda, 4, SplitMode::Splitting).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn g_agrees_with_f_on_rational_values(
        q in prop::sample::select(vec![5u64, 9, 13, 17, 25]),
        pick in 0usize..3,
        code in 1u32..1000,
    ) {
        // parameter sets whose finite field values are rational for q = 1 mod 4
        let families: [(&[(i64, i64)], &[(i64, i64)]); 3] = [
            (&[(1, 2), (1, 2)], &[(0, 1), (0, 1)]),
            (&[(1, 4), (3, 4)], &[(0, 1), (1, 2)]),
            (&[(1, 2), (1, 2), (1, 2)], &[(0, 1), (0, 1), (0, 1)]),
        ];
        let (t, b) = families[pick];
        let mk = |xs: &[(i64, i64)]| xs.iter().map(|&(n, d)| Rat::new(n, d)).collect::<Vec<_>>();
        let f = field(q);
        let params = GParams::new(&mk(t), &mk(b)).unwrap();
        let lambda = f.from_code(1 + code % (q as u32 - 1));
        prop_assert!(fg_consistency(&f, &params, lambda, 4).unwrap().is_zero());
    }

    #[test]
    fn gamma_p_reflection(p in prop::sample::select(ODD_P.to_vec()), num in -40i64..=40, den in 1i64..=12) {
        prop_assume!(!(den as u64).is_multiple_of(p));
        let x = Rat::new(num, den);
        let prod = gamma_p(x, p, 5).unwrap().mul(&gamma_p(Rat::from_integer(1) - x, p, 5).unwrap()).unwrap();
        let sign = if residue0(x, p).unwrap().is_multiple_of(2) { 1 } else { -1 };
        prop_assert!(prod.agrees_with(&PAdic::from_int(sign, p, 5).unwrap()));
    }

    #[test]
    fn fast_gamma_matches_product(p in prop::sample::select(vec![3u64, 5, 7]), num in -30i64..=30, den in 1i64..=10) {
        prop_assume!(!(den as u64).is_multiple_of(p));
        let x = Rat::new(num, den);
        prop_assert_eq!(gamma_p(x, p, 4).unwrap(), gamma_p_naive(x, p, 4).unwrap());
    }

    #[test]
    fn padic_integers_multiply(p in prop::sample::select(ODD_P.to_vec()), a in -10_000i128..10_000, b in -10_000i128..10_000) {
        let x = PAdic::from_int(a, p, 6).unwrap().mul(&PAdic::from_int(b, p, 6).unwrap()).unwrap();
        prop_assert!(x.agrees_with(&PAdic::from_int(a * b, p, 6).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hermite_identity(num in -10_000i64..10_000, den in 1i64..500, m in 1u32..40) {
        prop_assert_eq!(hermite_residual(Rat::new(num, den), m), 0);
    }

    #[test]
    fn pochhammer_multiplication(num in -60i64..60, den in 1i64..20, n in 1u64..6, k in 0u64..8) {
        let a = BigRational::new(BigInt::from(num), BigInt::from(den));
        prop_assert!(pochhammer_multiplication_residual(&a, n, k).is_zero());
    }

    #[test]
    fn hasse_bound(a in -50i64..50, b in -50i64..50, pick in 0usize..20) {
        let primes = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79];
        let p = primes[pick];
        let e = EllipticCurve::new(Rat::zero(), Rat::from_integer(a), Rat::from_integer(b));
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        prop_assume!(e.has_good_reduction(p));
        let t = ec_trace(&e, p).unwrap();
        prop_assert!(t * t <= 4 * p as i64);
    }
}
