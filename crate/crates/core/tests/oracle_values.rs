//! Values checked against independent computations (`derived`), against
//! published tables (`tabulated`), or asserted directly (`trivial`).

use hypersplit_core::arith::Rat;
use hypersplit_core::{FFHyperParams, FiniteField, GParams};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

mod derived {
    use super::*;
    use hypersplit_core::bigfloat::{bits_for_digits, BigComplex};
    use hypersplit_core::charsum::{gauss_sum, Character};
    use hypersplit_core::classical::{mfm_at_one, mfm_series, rat_real};
    use hypersplit_core::ffhyper::ff_hyper;
    use hypersplit_core::oracles::{
        ec_trace, eta_16_3, eta_32_2, eta_8_4, eta_coefficients, two_squares_normalized, EllipticCurve, EtaQuotient,
    };
    use hypersplit_core::padic::gamma_p;
    use hypersplit_core::PAdic;
    use std::f64::consts::PI;

    type C = (f64, f64);

    fn cmul(a: C, b: C) -> C {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn cdiv(a: C, b: C) -> C {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    }

    fn e(t: f64) -> C {
        ((2.0 * PI * t).cos(), (2.0 * PI * t).sin())
    }

    /// Floating-point Gauss sums from a log table and trace built here.
    struct Naive {
        f: FiniteField,
        log: Vec<u64>,
        trace: Vec<u64>,
    }

    impl Naive {
        fn new(q: u64) -> Self {
            let f = FiniteField::of_order(q).unwrap();
            let mut log = vec![0; q as usize];
            let mut y = f.one();
            for k in 0..q - 1 {
                log[y.code() as usize] = k;
                y = f.mul(y, f.generator());
            }
            let trace = f
                .elements()
                .map(|x| {
                    let mut t = f.zero();
                    let mut frob = x;
                    for _ in 0..f.r() {
                        t = f.add(t, frob);
                        frob = f.pow(frob, f.p() as i64);
                    }
                    f.coeffs(t)[0]
                })
                .collect();
            Naive { f, log, trace }
        }

        fn n(&self) -> i64 {
            self.f.q() as i64 - 1
        }

        fn chi(&self, k: i64, x: u32) -> C {
            e((k * self.log[x as usize] as i64) as f64 / self.n() as f64)
        }

        fn gauss(&self, k: i64) -> C {
            let mut s = (0.0, 0.0);
            for x in self.f.nonzero_elements() {
                let t = cmul(self.chi(k, x.code()), e(self.trace[x.code() as usize] as f64 / self.f.p() as f64));
                s = (s.0 + t.0, s.1 + t.1);
            }
            s
        }

        fn hyper(&self, top: &[i64], bottom: &[i64], lambda: u32) -> C {
            let minus_one = self.f.neg(self.f.one()).code();
            let mut s = (0.0, 0.0);
            for k in 0..self.n() {
                let mut t = self.chi(k, lambda);
                for &a in top {
                    t = cmul(t, cdiv(self.gauss(a + k), self.gauss(a)));
                }
                for &b in bottom {
                    t = cmul(t, cdiv(self.gauss(-b - k), self.gauss(-b)));
                }
                for _ in 0..top.len() {
                    t = cmul(t, self.chi(k, minus_one));
                }
                s = (s.0 + t.0, s.1 + t.1);
            }
            (-s.0 / self.n() as f64, -s.1 / self.n() as f64)
        }
    }

    fn close(exact: &BigComplex, approx: C) -> bool {
        (exact.re.to_f64() - approx.0).abs() < 1e-8 && (exact.im.to_f64() - approx.1).abs() < 1e-8
    }

    #[test]
    fn gauss_sums_match_floating_point_sums() {
        for q in [3u64, 4, 5, 7, 8, 9, 13, 16, 25, 27] {
            let naive = Naive::new(q);
            for k in 0..naive.n() {
                let exact = gauss_sum(&naive.f, Character::new(q, k)).to_complex(20);
                assert!(close(&exact, naive.gauss(k)), "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn quadratic_gauss_sums() {
        // g(phi)^2 = phi(-1) p, with g(phi) = sqrt(p) or i sqrt(p)
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let f = FiniteField::of_order(p).unwrap();
            let g = gauss_sum(&f, Character::quadratic(p)).to_complex(20);
            let s = (p as f64).sqrt();
            let want = if p % 4 == 1 { (s, 0.0) } else { (0.0, s) };
            assert!(close(&g, want), "p = {p}");
        }
    }

    #[test]
    fn hypergeometric_values_match_floating_point_definition() {
        let cases: [(u64, &[i64], &[i64]); 6] = [
            (5, &[2, 2], &[0, 0]),
            (7, &[1, 4], &[0, 2]),
            (9, &[2, 6], &[0, 4]),
            (13, &[3, 9, 6], &[0, 0, 6]),
            (8, &[1, 3], &[0, 5]),
            (11, &[5], &[2]),
        ];
        for (q, top, bottom) in cases {
            let naive = Naive::new(q);
            let params = FFHyperParams::new(q, top, bottom).unwrap();
            for lambda in naive.f.nonzero_elements() {
                let exact = ff_hyper(&naive.f, &params, lambda).unwrap().to_complex(20);
                assert!(close(&exact, naive.hyper(top, bottom, lambda.code())), "q = {q} {top:?} {bottom:?}");
            }
        }
    }

    #[test]
    fn gamma_p_at_integers_is_a_signed_product() {
        // Gamma_p(n) = (-1)^n prod_{0<j<n, p∤j} j
        for p in [3u64, 5, 7, 11] {
            let digits = 4;
            for n in 0..40i128 {
                let m = (p as i128).pow(digits);
                let prod = (1..n).filter(|j| j % p as i128 != 0).fold(1, |acc, j| acc * j % m);
                let want = if n % 2 == 0 { prod } else { -prod };
                let got = gamma_p(Rat::from_integer(n as i64), p, digits).unwrap();
                assert!(got.agrees_with(&PAdic::from_int(want, p, digits as i64).unwrap()), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn binomial_series() {
        // 1F1 with bottom 1 is (1 - z)^(-a)
        let bits = bits_for_digits(40);
        for (a, z) in [(r(1, 2), r(1, 3)), (r(-5, 3), r(-1, 2)), (r(7, 4), r(9, 10))] {
            let zc = BigComplex::from_real(rat_real(z, bits));
            let v = mfm_series(&[a], &[Rat::from_integer(1)], &zc, 30).unwrap();
            let want = (1.0 - *z.numer() as f64 / *z.denom() as f64).powf(-(*a.numer() as f64) / *a.denom() as f64);
            assert!((v.re.to_f64() - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn gauss_summation_at_one() {
        // 2F1(1/2, 1/2; 3; 1) = Gamma(3) Gamma(2) / Gamma(5/2)^2 = 32 / (9 pi)
        let v = mfm_at_one(&[r(1, 2), r(1, 2)], &[Rat::from_integer(3), Rat::from_integer(1)], 30).unwrap();
        assert!((v.to_f64() - 32.0 / (9.0 * PI)).abs() < 1e-14);
        // 2F1(1, 1; 7/2; 1) = Gamma(7/2) Gamma(3/2) / Gamma(5/2)^2 = 5/3
        let v = mfm_at_one(&[r(1, 1), r(1, 1)], &[r(7, 2), Rat::from_integer(1)], 30).unwrap();
        assert!((v.to_f64() - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn ramanujan_tau() {
        let delta = eta_coefficients(&EtaQuotient::new(&[(1, 24)]), 10).unwrap();
        assert_eq!(delta.coeffs, [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
    }

    #[test]
    fn weight_two_eta_product_matches_point_counts() {
        // eta^2(4z) eta^2(8z) belongs to the congruent number curve y^2 = x^3 - x
        let f = eta_coefficients(&eta_32_2(), 110).unwrap();
        let e = EllipticCurve::new(Rat::from_integer(0), Rat::from_integer(-1), Rat::from_integer(0)).unwrap();
        for p in (3..110u64).filter(|&p| hypersplit_core::arith::is_prime(p)) {
            assert_eq!(f.a(p as usize), ec_trace(&e, p).unwrap() as i128, "p = {p}");
        }
    }

    #[test]
    fn cm_weight_three_coefficients() {
        // eta^6(4z): 0 at p = 3 mod 4, 2(x^2 - y^2) with x odd otherwise
        let f = eta_coefficients(&eta_16_3(), 110).unwrap();
        for p in (3..110u64).filter(|&p| hypersplit_core::arith::is_prime(p)) {
            let want = match two_squares_normalized(p) {
                None => 0,
                Some((x, y)) => 2 * (x * x - y * y) as i128,
            };
            assert_eq!(f.a(p as usize), want, "p = {p}");
        }
    }

    #[test]
    fn weight_four_level_eight() {
        let f = eta_coefficients(&eta_8_4(), 30).unwrap();
        assert_eq!([3, 5, 7, 11, 13, 17, 29].map(|p| f.a(p)), [-4, -2, 24, -44, 22, 50, 198]);
    }
}

mod tabulated {
    use super::*;
    use hypersplit_core::gfunction::g_eval;

    fn g_at_one(q: u64, params: &GParams, digits: u32) -> i128 {
        let f = FiniteField::of_order(q).unwrap();
        g_eval(&f, params, f.one(), digits).unwrap().to_integer().unwrap()
    }

    #[test]
    fn quartic_unit_argument() {
        let params = GParams::new(&[r(1, 4), r(3, 4), r(1, 4), r(3, 4)], &[r(1, 1), r(1, 2), r(1, 1), r(1, 2)]).unwrap();
        let qs = [3u64, 5, 7, 9, 11, 13, 17, 25, 29, 49];
        let got: Vec<i128> = qs.iter().map(|&q| g_at_one(q, &params, 6)).collect();
        assert_eq!(got, [-1, -1, -1, -5, -1, 7, 3, -5, -9, -13]);
    }

    #[test]
    fn sextic_unit_argument() {
        let top = [r(1, 4), r(3, 4), r(1, 4), r(3, 4), r(1, 4), r(3, 4)];
        let bottom = [r(1, 1), r(1, 2), r(1, 1), r(1, 2), r(1, 1), r(1, 2)];
        let params = GParams::new(&top, &bottom).unwrap();
        let qs = [3u64, 5, 7, 9, 11, 13, 17, 25, 29, 49];
        let got: Vec<i128> = qs.iter().map(|&q| g_at_one(q, &params, 8)).collect();
        assert_eq!(got, [-1, -1, -7, 13, -25, 23, -11, 61, 71, 245]);
    }
}

mod trivial {
    use super::*;
    use hypersplit_core::ffhyper::ff_hyper;
    use hypersplit_core::padic::gamma_p;
    use hypersplit_core::CycNumber;

    #[test]
    fn zero_argument_and_small_gamma_values() {
        let f = FiniteField::of_order(7).unwrap();
        let params = FFHyperParams::new(7, &[3, 3], &[0, 0]).unwrap();
        assert_eq!(ff_hyper(&f, &params, f.zero()).unwrap(), CycNumber::zero(6));
        assert_eq!(gamma_p(Rat::from_integer(0), 5, 4).unwrap().to_integer(), Some(1));
        assert_eq!(gamma_p(Rat::from_integer(1), 5, 4).unwrap().to_integer(), Some(-1));
        assert_eq!(gamma_p(Rat::from_integer(3), 5, 4).unwrap().to_integer(), Some(-2));
    }
}
