//! Formal Borel transforms, ray Laplace transforms and Borel-Pade-Laplace sums.

use crate::dd::{Cdd, Dd};
use crate::error::{Result, UmbraError};
use crate::pade::{pade_dd, Pade};
use crate::quadrature::{de_half_line, gauss_laguerre};
use crate::series::FormalSeries;
use crate::special::{gamma_exact, recip_gamma};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

type C64 = Complex64;

/// Half-line from the origin at angle `theta`, normalised to (-pi, pi].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Direction {
    theta: f64,
}

impl Direction {
    pub fn new(theta: f64) -> Self {
        Direction {
            theta: wrap_angle(theta),
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn unit(self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }
}

impl Default for Direction {
    fn default() -> Self {
        Direction::new(0.0)
    }
}

/// Maps an angle to (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(UmbraError::InvalidArgument(format!(
            "order k must be positive, got {k}"
        )))
    }
}

/// 1/Gamma(x) in double-double when x is a tabulated integer or half-integer.
fn recip_gamma_dd(x: f64) -> Dd {
    match gamma_exact(x) {
        Some(g) => Dd::ONE / g,
        None => Dd::new(recip_gamma(C64::new(x, 0.0)).re),
    }
}

/// Borel coefficients a_r / Gamma(1 + r/k) kept in double-double, so the
/// division adds no rounding of its own.
pub fn borel_coeffs_dd(a: &FormalSeries, k: f64) -> Result<Vec<Cdd>> {
    check_k(k)?;
    Ok(a.coeffs()
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            let g = recip_gamma_dd(1.0 + r as f64 / k);
            Cdd {
                re: Dd::new(c.re) * g,
                im: Dd::new(c.im) * g,
            }
        })
        .collect())
}

/// b_r = a_r / Gamma(1 + r/k).
pub fn formal_borel(a: &FormalSeries, k: f64) -> Result<FormalSeries> {
    let c = borel_coeffs_dd(a, k)?;
    FormalSeries::new(c.into_iter().map(Cdd::to_c64).collect(), a.truncation())
}

/// b_r = a_r / Gamma(beta + r/k).
pub fn formal_borel_shifted(a: &FormalSeries, k: f64, beta: C64) -> Result<FormalSeries> {
    check_k(k)?;
    let mut out = Vec::with_capacity(a.truncation() + 1);
    for (r, &c) in a.coeffs().iter().enumerate() {
        let x = beta + r as f64 / k;
        if x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round() {
            return Err(UmbraError::GammaPoleAtIndex(r));
        }
        if x.im == 0.0 {
            let g = recip_gamma_dd(x.re);
            out.push(C64::new(
                (Dd::new(c.re) * g).to_f64(),
                (Dd::new(c.im) * g).to_f64(),
            ));
        } else {
            out.push(c * recip_gamma(x));
        }
    }
    FormalSeries::new(out, a.truncation())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaplaceOptions {
    /// Relative agreement required between successive quadrature levels.
    pub tol: f64,
    /// Largest acceptable error estimate (relative) before reporting divergence.
    pub accept_tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub de_max_level: u32,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        LaplaceOptions {
            tol: 1e-12,
            accept_tol: 1e-8,
            min_nodes: 32,
            max_nodes: 512,
            de_max_level: 9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum QuadratureMethod {
    GaussLaguerre { nodes: usize },
    DoubleExponential { evaluations: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceValue {
    pub value: C64,
    pub error_estimate: f64,
    pub method: QuadratureMethod,
}

pub fn numeric_laplace(
    p: &dyn Fn(C64) -> C64,
    k: f64,
    beta: C64,
    t: C64,
    direction: Direction,
    opts: &LaplaceOptions,
) -> Result<C64> {
    numeric_laplace_detailed(p, k, beta, t, direction, opts).map(|v| v.value)
}

/// Laplace transform of order k and shift beta along `direction`:
/// `(k / t^{beta k - 1}) int_d P(z) z^{beta k - 1} exp(-(z/t)^k) dz`.
///
/// With phi = theta - arg t and v = (|z|/|t|)^k this is
/// `t e^{i beta k phi} int_0^inf P(|t| e^{i theta} v^{1/k}) v^{beta-1} e^{-v e^{i k phi}} dv`.
pub fn numeric_laplace_detailed(
    p: &dyn Fn(C64) -> C64,
    k: f64,
    beta: C64,
    t: C64,
    direction: Direction,
    opts: &LaplaceOptions,
) -> Result<LaplaceValue> {
    check_k(k)?;
    if t.norm() == 0.0 || !t.is_finite() {
        return Err(UmbraError::DomainError(format!(
            "t = {t} is not a valid Laplace variable"
        )));
    }
    if beta.re <= 0.0 {
        return Err(UmbraError::DomainError(format!(
            "Re(beta) = {} makes the integral diverge at the origin",
            beta.re
        )));
    }
    let theta = direction.theta();
    let phi = wrap_angle(theta - t.arg());
    let c = (k * phi).cos();
    if c <= 1e-12 {
        return Err(UmbraError::DomainError(format!(
            "Re((e^(i theta)/t)^k) <= 0 for theta = {theta}, t = {t}, k = {k}"
        )));
    }
    let tan = (k * phi).tan();
    let radius = t.norm();
    let ray = direction.unit();
    let prefactor = t * (C64::i() * beta * k * phi).exp();

    // Gauss-Laguerre in w = v cos(k phi): weight w^{Re beta - 1} e^{-w}.
    let alpha = beta.re - 1.0;
    let c_pow = C64::new(c, 0.0).powc(-beta);
    let g = |w: f64| {
        let v = w / c;
        let z = ray * (radius * v.powf(1.0 / k));
        let mut val = p(z);
        if beta.im != 0.0 {
            val *= C64::new(0.0, beta.im * w.ln()).exp();
        }
        if tan != 0.0 {
            val *= C64::new(0.0, -w * tan).exp();
        }
        val
    };
    let mut prev: Option<C64> = None;
    let mut last_err = f64::INFINITY;
    let mut n = opts.min_nodes.max(2);
    let mut laguerre_ok = true;
    while n <= opts.max_nodes {
        let rule = gauss_laguerre(n, alpha);
        let mut sum = C64::new(0.0, 0.0);
        for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
            if wt == 0.0 {
                continue;
            }
            let term = wt * g(x);
            if !term.is_finite() {
                laguerre_ok = false;
                break;
            }
            sum += term;
        }
        if !laguerre_ok {
            break;
        }
        if let Some(pv) = prev {
            last_err = (sum - pv).norm();
            if last_err <= opts.tol * sum.norm().max(1e-300) {
                return Ok(LaplaceValue {
                    value: prefactor * c_pow * sum,
                    error_estimate: last_err * (prefactor * c_pow).norm(),
                    method: QuadratureMethod::GaussLaguerre { nodes: n },
                });
            }
        }
        prev = Some(sum);
        n *= 2;
    }

    // Double-exponential fallback in rho = v^{1/k}:
    // k int_0^inf P(|t| e^{i theta} rho) rho^{k beta - 1} e^{-rho^k e^{i k phi}} d rho.
    let rot = C64::from_polar(1.0, k * phi);
    let h = |rho: f64| {
        let rk = rho.powf(k);
        if rk * c > 745.0 {
            return C64::new(0.0, 0.0);
        }
        let weight = (-rk * rot).exp() * C64::new(rho, 0.0).powc(k * beta - 1.0);
        if weight.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        k * p(ray * (radius * rho)) * weight
    };
    let de = de_half_line(&h, opts.tol, opts.de_max_level);
    let value = prefactor * de.value;
    let err = de.error_estimate * prefactor.norm();
    if !value.is_finite() || err > opts.accept_tol * value.norm().max(1e-300) {
        return Err(UmbraError::QuadratureDivergence(format!(
            "Laguerre estimate {last_err:.3e}, double-exponential estimate {err:.3e} at t = {t}"
        )));
    }
    Ok(LaplaceValue {
        value,
        error_estimate: err,
        method: QuadratureMethod::DoubleExponential {
            evaluations: de.evaluations,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResumOptions {
    /// Angular exclusion zone around the integration ray for Pade poles.
    pub delta_ray: f64,
    pub laplace: LaplaceOptions,
}

impl Default for ResumOptions {
    fn default() -> Self {
        ResumOptions {
            delta_ray: 1e-3,
            laplace: LaplaceOptions::default(),
        }
    }
}

/// Borel-Pade-Laplace sum of a series along one direction.
#[derive(Clone, Debug)]
pub struct BorelSum {
    pub k: f64,
    pub beta: C64,
    pub direction: Direction,
    pub borel_coeffs: FormalSeries,
    /// Requested diagonal order m of [m/m].
    pub pade_order: usize,
    /// Degrees actually used (smaller when the Pade system was degenerate).
    pub pade_degrees: (usize, usize),
    pub pade_poles: Vec<C64>,
    pade: Pade,
    opts: LaplaceOptions,
}

impl BorelSum {
    /// Pade continuation of the Borel transform.
    pub fn borel_continuation(&self, z: C64) -> C64 {
        self.pade.eval(z)
    }

    /// `(1/t) L_k[continued Borel transform](t)`.
    pub fn evaluate(&self, t: C64) -> Result<C64> {
        let p = |z: C64| self.pade.eval(z);
        let l = numeric_laplace(&p, self.k, self.beta, t, self.direction, &self.opts)?;
        Ok(l / t)
    }

    pub fn evaluate_detailed(&self, t: C64) -> Result<LaplaceValue> {
        let p = |z: C64| self.pade.eval(z);
        let mut l = numeric_laplace_detailed(&p, self.k, self.beta, t, self.direction, &self.opts)?;
        l.value /= t;
        l.error_estimate /= t.norm();
        Ok(l)
    }
}

pub fn resum(
    a: &FormalSeries,
    k: f64,
    direction: Direction,
    pade_order: usize,
) -> Result<BorelSum> {
    resum_with(a, k, direction, pade_order, &ResumOptions::default())
}

pub fn resum_with(
    a: &FormalSeries,
    k: f64,
    direction: Direction,
    pade_order: usize,
    opts: &ResumOptions,
) -> Result<BorelSum> {
    check_k(k)?;
    let m = pade_order;
    if m == 0 || a.truncation() < 2 * m {
        return Err(UmbraError::InsufficientCoefficients {
            order: m,
            needed: 2 * m + 1,
            found: a.truncation() + 1,
        });
    }
    let b = borel_coeffs_dd(a, k)?;
    let pade = pade_dd(&b, m, m)?;
    let poles = pade.poles();
    let theta = direction.theta();
    for &pole in &poles {
        if pole.norm() > 0.0 && wrap_angle(pole.arg() - theta).abs() < opts.delta_ray {
            return Err(UmbraError::PoleOnRay {
                pole,
                theta,
                delta: opts.delta_ray,
            });
        }
    }
    let borel_coeffs = FormalSeries::new(b.into_iter().map(Cdd::to_c64).collect(), a.truncation())?;
    Ok(BorelSum {
        k,
        beta: C64::new(1.0, 0.0),
        direction,
        borel_coeffs,
        pade_order: m,
        pade_degrees: pade.order(),
        pade_poles: poles,
        pade,
        opts: opts.laplace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub max_deviation: f64,
    /// (t, t a(t) summed directly, L_k[B_k[t a]](t)).
    #[serde(skip)]
    pub samples: Vec<(C64, C64, C64)>,
}

/// Compares `t a(t)` summed directly with `L_k[B_k[t a]](t)` on a grid.
pub fn borel_laplace_roundtrip(a: &FormalSeries, k: f64, grid: &[C64]) -> Result<RoundtripReport> {
    let b = formal_borel(a, k)?;
    let p = |z: C64| b.eval(z);
    let opts = LaplaceOptions::default();
    let mut samples = Vec::with_capacity(grid.len());
    let mut max_deviation: f64 = 0.0;
    for &t in grid {
        let direct = t * a.eval(t);
        let via = numeric_laplace(&p, k, C64::new(1.0, 0.0), t, Direction::new(t.arg()), &opts)?;
        max_deviation = max_deviation.max((direct - via).norm());
        samples.push((t, direct, via));
    }
    Ok(RoundtripReport {
        max_deviation,
        samples,
    })
}

/// 2-Borel coefficients (-1)^r r! / Gamma(1 + r/2)^2 of the divergent series
/// sum (-1)^r r!/Gamma(1 + r/2) z^r.
pub fn example8_borel(n: usize) -> Result<FormalSeries> {
    if n < 8 {
        return Err(UmbraError::InvalidArgument(format!("need N >= 8, got {n}")));
    }
    FormalSeries::from_fn(n, |r| {
        let x = r as f64 + 1.0;
        let h = r as f64 / 2.0 + 1.0;
        let v = match (gamma_exact(x), gamma_exact(h)) {
            (Some(g), Some(gh)) => (g / (gh * gh)).to_f64(),
            _ => (crate::special::ln_gamma_real(x) - 2.0 * crate::special::ln_gamma_real(h)).exp(),
        };
        C64::new(if r % 2 == 0 { v } else { -v }, 0.0)
    })
}

/// Closed form 2 arccos(2z) / (pi sqrt(1 - 4z^2)) of the Example 8 Borel transform.
pub fn example8_borel_closed_form(z: C64) -> C64 {
    if z.norm() == 0.0 {
        return C64::new(1.0, 0.0);
    }
    2.0 * (2.0 * z).acos() / (PI * (1.0 - 4.0 * z * z).sqrt())
}
