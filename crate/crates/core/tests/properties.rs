use num_complex::Complex64;
use proptest::prelude::*;
use umbra_core::borel::{formal_borel, resum, Direction};
use umbra_core::gaussian::{gauss_derivative, gauss_direct, gauss_umbral_series, GaussKind};
use umbra_core::gevrey::estimate_gevrey_index;
use umbra_core::series::{exp_series, geometric_series, FormalSeries, Valuation};
use umbra_core::special::{gamma, ln_factorial, recip_gamma};
use umbra_core::umbral::{umbral_eval_index_laws_check, umbral_image, GroundState};

type C64 = Complex64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn int_coeffs(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(
        (-4i32..=4, -4i32..=4).prop_map(|(a, b)| c(a as f64, b as f64)),
        n,
    )
}

fn series_of(v: Vec<C64>) -> FormalSeries {
    let n = v.len() - 1;
    FormalSeries::new(v, n).unwrap()
}

/// `sum_j phi_j (t + chi(t))^j` by plain polynomial arithmetic, cut at `n`.
fn substitute(phi: &[C64], chi: &[C64], n: usize) -> Vec<C64> {
    let mul = |a: &[C64], b: &[C64]| {
        let mut out = vec![c(0.0, 0.0); n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n + 1 - i.min(n + 1)) {
                if i + j <= n {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut inner = chi.to_vec();
    inner.resize(n + 1, c(0.0, 0.0));
    if n >= 1 {
        inner[1] += 1.0;
    }
    let mut power = vec![c(0.0, 0.0); n + 1];
    power[0] = c(1.0, 0.0);
    let mut out = vec![c(0.0, 0.0); n + 1];
    for &p in phi {
        for (o, q) in out.iter_mut().zip(&power) {
            *o += p * q;
        }
        power = mul(&power, &inner);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn valuation_is_additive(mut a in int_coeffs(12), mut b in int_coeffs(12), va in 0usize..5, vb in 0usize..5) {
        for x in a.iter_mut().take(va) { *x = c(0.0, 0.0); }
        for x in b.iter_mut().take(vb) { *x = c(0.0, 0.0); }
        a[va] = c(1.0, 0.0);
        b[vb] = c(0.0, -2.0);
        let p = series_of(a).cauchy_product(&series_of(b));
        prop_assert_eq!(p.valuation(), Valuation::Finite(va + vb));
    }

    #[test]
    fn compose_shifted_matches_substitution(phi in int_coeffs(7), mut chi in int_coeffs(7), n in 6usize..10) {
        chi[0] = c(0.0, 0.0);
        let pad = |v: &[C64]| {
            let mut v = v.to_vec();
            v.resize(n + 1, c(0.0, 0.0));
            FormalSeries::new(v, n).unwrap()
        };
        let got = pad(&phi).compose_shifted(&pad(&chi)).unwrap();
        let want = substitute(&phi, &chi, n);
        for r in 0..=n {
            prop_assert!((got.coeff(r) - want[r]).norm() <= 1e-12 * (1.0 + want[r].norm()), "r = {}", r);
        }
    }

    #[test]
    fn recip_gamma_inverts_gamma(re in -6.0f64..8.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3 || z.re > 0.0);
        let g = gamma(z).unwrap();
        prop_assert!((g * recip_gamma(z) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn gauss_functional_identity(x in -3.0f64..3.0) {
        let x = c(x, 0.0);
        let lhs = gauss_direct(GaussKind::ExpG, x);
        let rhs = gauss_direct(GaussKind::CosG, x) + C64::i() * gauss_direct(GaussKind::SinG, x);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn index_laws(alpha in 0.3f64..2.0, beta in 0.5f64..2.0, mu in 0.0f64..2.0, nu in 0.0f64..2.0) {
        let ground = GroundState::psi(alpha, beta, 1.0).unwrap();
        let rep = umbral_eval_index_laws_check(&ground, mu, nu).unwrap();
        prop_assert!(rep.holds, "{:?}", rep);
    }

    #[test]
    fn umbral_derivative_gains_a_ground_factor(cr in -2.0f64..2.0, ci in -2.0f64..2.0, mu in 0.0f64..2.0, alpha in 0.3f64..1.5, beta in 0.5f64..2.0) {
        let cc = c(cr, ci);
        let ground = GroundState::psi(alpha, beta, 1.0).unwrap();
        let d = umbral_image(&exp_series(cc, 30), mu, &ground).unwrap().derive().unwrap();
        for r in 0..d.truncation() {
            let want = cc.powu(r as u32 + 1) * ground.evaluate(c(mu * (r + 1) as f64, 0.0)).unwrap()
                * (-ln_factorial(r)).exp();
            prop_assert!((d.coeff(r) - want).norm() <= 1e-12 * (1.0 + want.norm()), "r = {}", r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_series_sums_to_direct(kind in prop::sample::select(vec![GaussKind::ExpG, GaussKind::CosG, GaussKind::SinG]),
                                   r in 0.0f64..2.5, th in -3.1f64..3.1) {
        let z = C64::from_polar(r, th);
        let s = gauss_umbral_series(kind, 150).unwrap();
        let want = gauss_direct(kind, z);
        prop_assert!((s.eval(z) - want).norm() <= 1e-9 * want.norm().max(1.0));
    }

    #[test]
    fn gauss_derivative_matches_finite_differences(n in 1usize..=3, x in -2.0f64..2.0) {
        let f = |y: f64| gauss_direct(GaussKind::ExpG, c(y, 0.0));
        let h = 1e-2;
        let fd = match n {
            1 => (f(x + h) - f(x - h)) / (2.0 * h),
            2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            _ => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        };
        // Richardson on the O(h^2) error of the central stencils.
        let h2 = h / 2.0;
        let fd2 = match n {
            1 => (f(x + h2) - f(x - h2)) / (2.0 * h2),
            2 => (f(x + h2) - 2.0 * f(x) + f(x - h2)) / (h2 * h2),
            _ => (f(x + 2.0 * h2) - 2.0 * f(x + h2) + 2.0 * f(x - h2) - f(x - 2.0 * h2)) / (2.0 * h2 * h2 * h2),
        };
        let est = (4.0 * fd2 - fd) / 3.0;
        let exact = gauss_derivative(GaussKind::ExpG, n, x).unwrap();
        prop_assert!((est - exact).norm() < 1e-5, "{} vs {}", est, exact);
    }

    #[test]
    fn borel_of_factorial_model_is_convergent_class(k in 1.0f64..3.0, a in 0.5f64..2.0) {
        let s = FormalSeries::from_fn(100, |r| c((ln_factorial(r) / k + r as f64 * a.ln()).exp(), 0.0)).unwrap();
        let rep = estimate_gevrey_index(&formal_borel(&s, k).unwrap(), None).unwrap();
        prop_assert!(rep.sigma < 0.1, "sigma = {}", rep.sigma);
    }

    #[test]
    fn borel_lowers_the_index_by_one_over_k(sigma in 0.0f64..1.5, k in 1.0f64..4.0) {
        let s = FormalSeries::from_fn(100, |r| c((sigma * ln_factorial(r)).exp() * (-1f64).powi(r as i32), 0.0)).unwrap();
        let rep = estimate_gevrey_index(&formal_borel(&s, k).unwrap(), None).unwrap();
        prop_assert!((rep.sigma - (sigma - 1.0 / k).max(0.0)).abs() < 0.1, "sigma = {}", rep.sigma);
    }

    #[test]
    fn resum_of_convergent_series_is_its_sum(cr in -1.0f64..1.0, t in 0.05f64..0.5) {
        let a = geometric_series(c(cr, 0.0), 40);
        let s = resum(&a, 1.0, Direction::default(), 10).unwrap();
        let want = 1.0 / (1.0 - cr * t);
        let got = s.evaluate(c(t, 0.0)).unwrap();
        prop_assert!((got - want).norm() <= 1e-7 * want.abs());
    }
}
