//! Regression checks of the umbral identities against the independent oracles.

use crate::borel::{
    borel_laplace_roundtrip, example8_borel, example8_borel_closed_form, resum, Direction,
};
use crate::catalog::{
    example7_closed_form, example7_log_magnitudes, example7_series, example8_series,
    faddeeva_series, tricomi_series,
};
use crate::error::{Result, UmbraError};
use crate::gaussian::{
    cauchy_pv_integral, fourier_g_direct, gauss_derivative, gauss_direct, gauss_phase_shift,
    gaussian_fourier_input, hermite_gaussft_coefficient, hermite_gaussft_coefficient_series,
    FourierInput, FtVerdict, GaussKind, PvOptions,
};
use crate::gevrey::{estimate_gevrey_index, fit_log_magnitudes, DEFAULT_CONVERGENT_THRESHOLD};
use crate::series::{exp_series, geometric_series};
use crate::special::{
    faddeeva, hermite, mittag_leffler, prabhakar, tricomi0, wright, OracleConfig,
};
use crate::umbral::{umbral_image, GroundState};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_2_SQRT_PI, PI};

type C64 = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    /// Observed error, or the distance outside the range for range checks.
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
    /// Failure is a listed limitation (see [`KNOWN_SHORTFALLS`]).
    pub known_shortfall: bool,
}

/// Measurements expected to fail. The Example 7 coefficients rounded to f64
/// carry too little information for a [20/20] continuation to reach 1e-6 at
/// zeta = 2 (exact coefficients reach 6e-8 there), and the same rounding puts
/// a spurious real Pade pole near 59.35 on the ray of the k = 1/2 route.
pub const KNOWN_SHORTFALLS: &[(u32, &str)] = &[(7, "k = 1 at zeta = 2"), (7, "k = 2 route")];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub measurements: Vec<Measurement>,
}

impl Check {
    fn new(id: u32, name: &'static str, mut measurements: Vec<Measurement>) -> Check {
        for m in &mut measurements {
            m.known_shortfall = !m.pass
                && KNOWN_SHORTFALLS
                    .iter()
                    .any(|(i, p)| *i == id && m.label.starts_with(p));
        }
        let pass = !measurements.is_empty() && measurements.iter().all(|m| m.pass);
        Check {
            id,
            name,
            pass,
            measurements,
        }
    }

    /// Failures not covered by [`KNOWN_SHORTFALLS`].
    pub fn unexpected_failures(&self) -> impl Iterator<Item = &Measurement> {
        self.measurements
            .iter()
            .filter(|m| !m.pass && !m.known_shortfall)
    }

    /// The measurement closest to (or furthest past) its tolerance.
    pub fn worst(&self) -> Option<&Measurement> {
        self.measurements
            .iter()
            .max_by(|a, b| (a.value / a.tol).total_cmp(&(b.value / b.tol)))
    }
}

fn below(label: impl Into<String>, value: f64, tol: f64) -> Measurement {
    Measurement {
        label: label.into(),
        value,
        tol,
        pass: value.is_finite() && value < tol,
        known_shortfall: false,
    }
}

fn failed(label: impl Into<String>, err: &UmbraError) -> Measurement {
    Measurement {
        label: format!("{}: {}", label.into(), err),
        value: f64::INFINITY,
        tol: 0.0,
        pass: false,
        known_shortfall: false,
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Points of the closed disk |z| <= 2 used by the series identity checks.
fn disk_grid() -> Vec<C64> {
    let mut pts = vec![c(0.0, 0.0)];
    for r in [0.5, 1.0, 2.0] {
        for j in 0..8 {
            pts.push(C64::from_polar(r, j as f64 * PI / 4.0));
        }
    }
    pts
}

fn attempt(label: &str, f: impl FnOnce() -> Result<Measurement>) -> Measurement {
    f().unwrap_or_else(|e| failed(label, &e))
}

pub fn check_tricomi(cfg: &OracleConfig) -> Check {
    let m = attempt("series", || {
        let s = tricomi_series(120)?;
        let mut worst: f64 = 0.0;
        for z in [
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(-0.5, 0.0),
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(2.0, 0.0),
            c(-2.0, 0.0),
            c(0.0, 3.0),
        ] {
            worst = worst.max((s.eval(z) - tricomi0(z, cfg)?).norm());
        }
        Ok(below("max |F - C0|", worst, 1e-10))
    });
    Check::new(1, "Tricomi identity", vec![m])
}

pub fn check_faddeeva() -> Check {
    let m = attempt("series", || {
        let s = faddeeva_series(200)?;
        let mut worst: f64 = 0.0;
        for j in 0..41 {
            let x = c(-3.0 + 0.15 * j as f64, 0.0);
            worst = worst.max(rel(s.eval(x), faddeeva(x)));
        }
        Ok(below("max relative error on [-3, 3]", worst, 1e-9))
    });
    Check::new(2, "Faddeeva identity", vec![m])
}

pub fn check_mittag_leffler(cfg: &OracleConfig) -> Check {
    let mut ms = Vec::new();
    for (a, b, g) in [
        (1.0, 1.0, 1.0),
        (0.5, 1.0, 1.0),
        (2.0, 0.5, 1.0),
        (0.7, 1.3, 2.5),
    ] {
        let f = exp_series(c(1.0, 0.0), 150);
        ms.push(attempt(&format!("ML ({a}, {b})"), || {
            let s = umbral_image(&f, 1.0, &GroundState::psi(a, b, 1.0)?)?;
            let mut worst: f64 = 0.0;
            for z in disk_grid() {
                worst = worst.max(rel(s.eval(z), mittag_leffler(a, c(b, 0.0), z, cfg)?));
            }
            Ok(below(format!("E_({a},{b})"), worst, 1e-8))
        }));
        ms.push(attempt(&format!("Prabhakar ({a}, {b}, {g})"), || {
            let s = umbral_image(&f, 1.0, &GroundState::psi(a, b, g)?)?;
            let mut worst: f64 = 0.0;
            for z in disk_grid() {
                worst = worst.max(rel(s.eval(z), prabhakar(a, c(b, 0.0), c(g, 0.0), z, cfg)?));
            }
            Ok(below(format!("E_({a},{b})^{g}"), worst, 1e-8))
        }));
    }
    Check::new(3, "Mittag-Leffler and Prabhakar identities", ms)
}

pub fn check_wright(cfg: &OracleConfig) -> Check {
    let ms = [(1.0, 1.0), (0.5, 1.5)]
        .into_iter()
        .map(|(a, b)| {
            attempt(&format!("W ({a}, {b})"), || {
                let s = umbral_image(&exp_series(c(1.0, 0.0), 120), 1.0, &GroundState::phi(a, b)?)?;
                let mut worst: f64 = 0.0;
                for z in disk_grid() {
                    worst = worst.max(rel(s.eval(z), wright(a, c(b, 0.0), z, cfg)?));
                }
                Ok(below(format!("W_({a},{b})"), worst, 1e-8))
            })
        })
        .collect();
    Check::new(4, "Wright identity", ms)
}

/// Passes when `value` lies in `[lo, hi]`; reports the distance from the centre.
fn range(label: &str, value: f64, lo: f64, hi: f64) -> Measurement {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    Measurement {
        label: format!("{label}: sigma = {value:.4}, expected in [{lo}, {hi}]"),
        value: (value - mid).abs(),
        tol: half,
        pass: value.is_finite() && (value - mid).abs() <= half,
        known_shortfall: false,
    }
}

pub fn check_gevrey() -> Check {
    let window = Some((100, 200));
    let ms = vec![
        attempt("Example 7", || {
            // (2r)!/r! overflows f64 beyond r ~ 150; the fit runs on logarithms.
            let rep = fit_log_magnitudes(
                &example7_log_magnitudes(100, 200),
                (100, 200),
                DEFAULT_CONVERGENT_THRESHOLD,
            )?;
            Ok(range("(-1)^r (2r)!/r!", rep.sigma, 0.9, 1.1))
        }),
        attempt("Example 8", || {
            let rep = estimate_gevrey_index(&example8_series(200)?, window)?;
            Ok(range("(-1)^r r!/Gamma(1+r/2)", rep.sigma, 0.4, 0.6))
        }),
        attempt("Faddeeva", || {
            let rep = estimate_gevrey_index(&faddeeva_series(200)?, window)?;
            Ok(below(
                format!("i^r/Gamma(1+r/2): sigma = {:.4}", rep.sigma),
                rep.sigma,
                0.1,
            ))
        }),
    ];
    Check::new(5, "Gevrey estimator", ms)
}

pub fn check_roundtrip() -> Check {
    let ms = vec![
        attempt("e^{-t}", || {
            let grid: Vec<C64> = (1..=9).map(|j| c(0.1 * j as f64, 0.0)).collect();
            let rep = borel_laplace_roundtrip(&exp_series(c(-1.0, 0.0), 60), 1.0, &grid)?;
            Ok(below(
                "e^{-t}, k = 1, t in [0.1, 0.9]",
                rep.max_deviation,
                1e-8,
            ))
        }),
        attempt("sum (it)^r", || {
            let mut grid = Vec::new();
            for r in [0.1, 0.25, 0.5] {
                for j in 0..8 {
                    grid.push(C64::from_polar(r, j as f64 * PI / 4.0));
                }
            }
            let rep = borel_laplace_roundtrip(&geometric_series(C64::i(), 80), 2.0, &grid)?;
            Ok(below(
                "sum (it)^r, k = 2, |t| <= 0.5",
                rep.max_deviation,
                1e-8,
            ))
        }),
    ];
    Check::new(6, "Borel-Laplace inversion", ms)
}

pub const EXAMPLE7_POINTS: [f64; 3] = [0.5, 1.0, 2.0];

pub fn check_example7() -> Check {
    let mut ms = Vec::new();
    let a = match example7_series(60) {
        Ok(a) => a,
        Err(e) => return Check::new(7, "Example 7 resummation", vec![failed("series", &e)]),
    };
    let k1 = resum(&a, 1.0, Direction::default(), 20);
    let k2 = resum(&a, 0.5, Direction::default(), 20);
    for z in EXAMPLE7_POINTS {
        let zc = c(z, 0.0);
        let want = example7_closed_form(zc);
        let v1 = k1
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|s| s.evaluate(zc));
        match &v1 {
            Ok(v) => ms.push(below(format!("k = 1 at zeta = {z}"), rel(*v, want), 1e-6)),
            Err(e) => ms.push(failed(format!("k = 1 at zeta = {z}"), e)),
        }
        let v2 = k2
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|s| s.evaluate(zc));
        match (&v1, v2) {
            (Ok(v1), Ok(v2)) => ms.push(below(
                format!("k = 2 route vs k = 1 at zeta = {z}"),
                rel(v2, *v1),
                1e-6,
            )),
            (_, Err(e)) => ms.push(failed(format!("k = 2 route at zeta = {z}"), &e)),
            (Err(_), Ok(_)) => {}
        }
    }
    Check::new(7, "Example 7 resummation", ms)
}

pub fn check_example8() -> Check {
    let mut ms = vec![attempt("2-Borel transform", || {
        let b = example8_borel(60)?;
        let mut worst: f64 = 0.0;
        for z in [0.0, 0.05, 0.1] {
            let z = c(z, 0.0);
            worst = worst.max((b.eval(z) - example8_borel_closed_form(z)).norm());
        }
        Ok(below("max |B_2 - closed form|", worst, 1e-9))
    })];
    let guard = example8_series(60).and_then(|a| resum(&a, 2.0, Direction::default(), 20));
    ms.push(Measurement {
        label: match &guard {
            Err(e @ UmbraError::PoleOnRay { .. }) => {
                format!("resum along theta = 0 raised {}", e.code())
            }
            Err(e) => format!(
                "resum along theta = 0 raised {} instead of PoleOnRay",
                e.code()
            ),
            Ok(_) => "resum along theta = 0 succeeded instead of raising PoleOnRay".into(),
        },
        value: if matches!(guard, Err(UmbraError::PoleOnRay { .. })) {
            0.0
        } else {
            1.0
        },
        tol: 0.5,
        pass: matches!(guard, Err(UmbraError::PoleOnRay { .. })),
        known_shortfall: false,
    });
    Check::new(8, "Example 8 guard", ms)
}

pub fn check_gaussian_ft() -> Check {
    let ms = [1.0, 2.0, 5.0]
        .into_iter()
        .map(|a| {
            attempt(&format!("a = {a}"), || {
                let r = gaussian_fourier_input(&FourierInput::Gaussian { a }, 400, 1.0, false)?;
                let v = r
                    .value
                    .ok_or(UmbraError::InvalidArgument("no value".into()))?;
                Ok(below(
                    format!("a = {a}"),
                    (v - c((PI / (a + 1.0)).sqrt(), 0.0)).norm(),
                    1e-7,
                ))
            })
        })
        .collect();
    Check::new(9, "Gaussian FT of exp(-a x^2)", ms)
}

/// `sqrt(pi) e^{1/4} erfc(1/2)`.
pub fn abs_exp_reference() -> f64 {
    2.0 * example7_closed_form(c(1.0, 0.0)).re
}

pub fn check_abs_exp() -> Check {
    let want = abs_exp_reference();
    let mut ms = Vec::new();
    match gaussian_fourier_input(&FourierInput::AbsExp, 120, 1.0, true) {
        Ok(r) => {
            let sigma = match r.verdict {
                FtVerdict::Divergent { sigma } => sigma,
                FtVerdict::Convergent => 0.0,
            };
            ms.push(range("divergent verdict", sigma, 0.9, 1.1));
            match r.value {
                Some(v) => ms.push(below("resummed value at k = 1", rel(v, c(want, 0.0)), 1e-6)),
                None => ms.push(failed(
                    "resummed value",
                    &UmbraError::InvalidArgument("missing".into()),
                )),
            }
        }
        Err(e) => ms.push(failed("gaussian_fourier", &e)),
    }
    let direct = fourier_g_direct(&|x: f64| (-x.abs()).exp(), 1.0, 1e-12);
    ms.push(below(
        "direct quadrature",
        (direct - c(want, 0.0)).norm(),
        1e-6,
    ));
    Check::new(10, "Gaussian FT of exp(-|x|)", ms)
}

pub fn check_hermite_integrals() -> Check {
    let mut ms = Vec::new();
    for (n, want) in [
        (1usize, -4.0 * 2f64.sqrt() / 3.0),
        (3, -8.0 * 2f64.sqrt() / 9.0),
    ] {
        let want = c(0.0, want);
        ms.push(attempt(&format!("I_{n}"), || {
            let r = gaussian_fourier_input(&FourierInput::Hermite { n }, 120, 1.0, true)?;
            let v = r
                .value
                .ok_or(UmbraError::InvalidArgument("no value".into()))?;
            Ok(below(
                format!("I_{n} via gaussian_fourier"),
                (v - want).norm(),
                1e-7,
            ))
        }));
        let f = crate::gaussian::hermite_gaussian(n);
        let direct = fourier_g_direct(&f, 1.0, 1e-12);
        ms.push(below(
            format!("I_{n} direct quadrature"),
            (direct - want).norm(),
            1e-6,
        ));
    }
    Check::new(11, "Hermite integrals", ms)
}

pub fn check_pv() -> Check {
    let opts = PvOptions::default();
    let sin_g = |x: f64| gauss_direct(GaussKind::SinG, c(x, 0.0));
    let cos_g = |x: f64| gauss_direct(GaussKind::CosG, c(x, 0.0));
    let mut ms = vec![
        attempt("Dirichlet", || {
            let v = cauchy_pv_integral(&|x| sin_g(x) / x, 0.0, &opts)?;
            Ok(below(
                "int sin_G(x)/x = pi",
                (v.value - c(PI, 0.0)).norm(),
                1e-6,
            ))
        }),
        attempt("exp_G", || {
            let v = cauchy_pv_integral(
                &|x| gauss_direct(GaussKind::ExpG, c(-x, 0.0)) / x,
                0.0,
                &opts,
            )?;
            Ok(below(
                "PV int exp_G(-x)/x = -i pi",
                (v.value - c(0.0, -PI)).norm(),
                1e-5,
            ))
        }),
    ];
    for x in [0.25, 0.5, 1.0] {
        ms.push(attempt(&format!("KK cos at {x}"), || {
            let v = cauchy_pv_integral(&|xi| sin_g(xi) / (xi - x), x, &opts)?;
            Ok(below(
                format!("cos_G({x}) from sin_G"),
                (v.value / PI - cos_g(x)).norm(),
                1e-5,
            ))
        }));
        ms.push(attempt(&format!("KK sin at {x}"), || {
            let v = cauchy_pv_integral(&|xi| cos_g(xi) / (xi - x), x, &opts)?;
            Ok(below(
                format!("sin_G({x}) from cos_G"),
                (-v.value / PI - sin_g(x)).norm(),
                1e-5,
            ))
        }));
    }
    Check::new(12, "Principal-value identities", ms)
}

pub fn check_derivatives() -> Check {
    let mut ms = vec![attempt("w'", || {
        let mut worst: f64 = 0.0;
        for j in 0..=40 {
            let x = -2.0 + 0.1 * j as f64;
            let want = c(0.0, FRAC_2_SQRT_PI) - 2.0 * x * faddeeva(c(x, 0.0));
            worst = worst.max((gauss_derivative(GaussKind::ExpG, 1, x)? - want).norm());
        }
        Ok(below(
            "w'(x) = 2i/sqrt(pi) - 2x w(x) on [-2, 2]",
            worst,
            1e-8,
        ))
    })];
    ms.push(attempt("Hermite", || {
        let mut worst: f64 = 0.0;
        for n in 0..=5 {
            for x in [0.3, 0.7, 1.1] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = hermite(n, x) * (-x * x).exp();
                worst = worst.max((sign * gauss_phase_shift(GaussKind::CosG, n, x)? - lhs).norm());
            }
        }
        Ok(below(
            "H_n e^{-x^2} = (-u)^n cos(x u + n pi/2)[lambda], n <= 5",
            worst,
            1e-7,
        ))
    }));
    ms.push(attempt("a_m", || {
        let mut worst: f64 = 0.0;
        for m in 0..=4 {
            for k in [0.3, 0.5, 0.7] {
                let series = hermite_gaussft_coefficient_series(m, k, 400)?;
                worst = worst.max((series - hermite_gaussft_coefficient(m, k)?).norm());
            }
        }
        Ok(below("a_m(k) closed form vs series", worst, 1e-9))
    }));
    Check::new(13, "Derivative formulas", ms)
}

/// Criteria 1 to 13, in order, with the default oracle settings.
pub fn run_all() -> Vec<Check> {
    run_all_with(&OracleConfig::default())
}

pub fn run_all_with(cfg: &OracleConfig) -> Vec<Check> {
    vec![
        check_tricomi(cfg),
        check_faddeeva(),
        check_mittag_leffler(cfg),
        check_wright(cfg),
        check_gevrey(),
        check_roundtrip(),
        check_example7(),
        check_example8(),
        check_gaussian_ft(),
        check_abs_exp(),
        check_hermite_integrals(),
        check_pv(),
        check_derivatives(),
    ]
}
