//! The umbral operator as an evaluation functional on ground states.
//!
//! `u^mu [phi] = phi(mu)`, and the image of `f(t) = sum f_r t^r` is the series
//! `F(z) = sum f_r phi(mu r) z^r`.

use crate::error::{Result, UmbraError};
use crate::series::FormalSeries;
use crate::special::{gamma, gamma_ratio, recip_gamma};
use num_complex::Complex64;
use std::fmt;

type C64 = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub enum GroundState {
    /// phi(t) = 1/Gamma(alpha t + beta), entire.
    Phi { alpha: f64, beta: C64 },
    /// psi(t) = Gamma(gamma + t) / (Gamma(gamma) Gamma(alpha t + beta)).
    Psi { alpha: f64, beta: C64, gamma: C64 },
    /// A convergent series supplied by the caller, trusted only for |t| < radius.
    Custom { series: FormalSeries, radius: f64 },
}

impl GroundState {
    pub fn phi(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(GroundState::Phi {
            alpha,
            beta: C64::new(beta, 0.0),
        })
    }

    pub fn psi(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let gamma = C64::new(gamma, 0.0);
        if is_gamma_pole(gamma) {
            return Err(UmbraError::InvalidArgument(format!(
                "Gamma(gamma) is infinite for gamma = {gamma}"
            )));
        }
        Ok(GroundState::Psi {
            alpha,
            beta: C64::new(beta, 0.0),
            gamma,
        })
    }

    /// lambda(t) = Gamma(1 + t) / Gamma(1 + t/2).
    pub fn lambda() -> Self {
        GroundState::Psi {
            alpha: 0.5,
            beta: C64::new(1.0, 0.0),
            gamma: C64::new(1.0, 0.0),
        }
    }

    pub fn custom(series: FormalSeries, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(UmbraError::InvalidArgument(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(GroundState::Custom { series, radius })
    }

    /// True when `mu` lies in the forbidden set of this ground state.
    pub fn is_pole(&self, mu: C64) -> bool {
        match self {
            GroundState::Phi { .. } => false,
            GroundState::Psi { gamma, .. } => is_gamma_pole(gamma + mu),
            GroundState::Custom { radius, .. } => mu.norm() >= *radius,
        }
    }

    pub fn evaluate(&self, mu: C64) -> Result<C64> {
        if self.is_pole(mu) {
            return Err(UmbraError::PoleOrOutsideDomain(mu));
        }
        match self {
            GroundState::Phi { alpha, beta } => Ok(recip_gamma(*alpha * mu + beta)),
            GroundState::Psi {
                alpha,
                beta,
                gamma: g,
            } => {
                let ratio = gamma_ratio(g + mu, *alpha * mu + beta)?;
                if *g == C64::new(1.0, 0.0) {
                    Ok(ratio)
                } else {
                    Ok(ratio / gamma(*g)?)
                }
            }
            GroundState::Custom { series, .. } => sum_custom(series, mu),
        }
    }
}

impl fmt::Display for GroundState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == GroundState::lambda() {
            return f.write_str("lambda");
        }
        match self {
            GroundState::Phi { alpha, beta } => write!(f, "phi:{alpha},{}", beta.re),
            GroundState::Psi { alpha, beta, gamma } => {
                write!(f, "psi:{alpha},{},{}", beta.re, gamma.re)
            }
            GroundState::Custom { series, radius } => {
                write!(f, "custom(N={}, R={radius})", series.truncation())
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(UmbraError::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )))
    }
}

fn is_gamma_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Direct summation; fails when the tail has not died out within the stored terms.
fn sum_custom(series: &FormalSeries, mu: C64) -> Result<C64> {
    let terms = series.terms(mu);
    let sum: C64 = terms.iter().rev().sum();
    let tail = terms
        .iter()
        .rev()
        .take(3)
        .map(|t| t.norm())
        .fold(0.0, f64::max);
    if tail > 1e-12 * sum.norm().max(1e-300) && tail > 1e-300 {
        return Err(UmbraError::PoleOrOutsideDomain(mu));
    }
    Ok(sum)
}

pub fn umbral_eval(ground: &GroundState, mu: C64) -> Result<C64> {
    ground.evaluate(mu)
}

/// A power of the umbral operator, `u^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Umbra {
    pub exponent: f64,
}

impl Umbra {
    pub fn pow(self, nu: f64) -> Umbra {
        Umbra {
            exponent: self.exponent * nu,
        }
    }

    pub fn compose(self, other: Umbra) -> Umbra {
        Umbra {
            exponent: self.exponent + other.exponent,
        }
    }

    pub fn apply(self, ground: &GroundState) -> Result<C64> {
        ground.evaluate(C64::new(self.exponent, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexLawsReport {
    /// ((u^mu u^nu)[phi], u^{mu+nu}[phi])
    pub sum_law: (C64, C64),
    /// ((u^mu)^nu [phi], u^{mu nu}[phi])
    pub power_law: (C64, C64),
    pub holds: bool,
}

pub fn umbral_eval_index_laws_check(
    ground: &GroundState,
    mu: f64,
    nu: f64,
) -> Result<IndexLawsReport> {
    for x in [mu, nu, mu + nu, mu * nu] {
        if ground.is_pole(C64::new(x, 0.0)) {
            return Err(UmbraError::PoleOrOutsideDomain(C64::new(x, 0.0)));
        }
    }
    let (u, v) = (Umbra { exponent: mu }, Umbra { exponent: nu });
    let sum_law = (
        u.compose(v).apply(ground)?,
        ground.evaluate(C64::new(mu + nu, 0.0))?,
    );
    let power_law = (
        u.pow(nu).apply(ground)?,
        ground.evaluate(C64::new(mu * nu, 0.0))?,
    );
    let close = |(a, b): (C64, C64)| (a - b).norm() <= 1e-14 * a.norm().max(b.norm()).max(1e-300);
    Ok(IndexLawsReport {
        sum_law,
        power_law,
        holds: close(sum_law) && close(power_law),
    })
}

/// Coefficient r of the result is `f_r * phi(mu r)`.
pub fn umbral_image(f: &FormalSeries, mu: f64, ground: &GroundState) -> Result<FormalSeries> {
    if mu < 0.0 || mu.is_nan() {
        return Err(UmbraError::NegativeMu(mu));
    }
    let mut out = Vec::with_capacity(f.truncation() + 1);
    for (r, &c) in f.coeffs().iter().enumerate() {
        let x = C64::new(mu * r as f64, 0.0);
        if ground.is_pole(x) {
            return Err(UmbraError::PoleAtTerm(r));
        }
        if c == C64::new(0.0, 0.0) {
            // Keeps 0 * overflowed phi(mu r) from turning into NaN.
            out.push(c);
            continue;
        }
        let g = ground.evaluate(x)?;
        let v = c * g;
        if !v.is_finite() {
            return Err(UmbraError::NonFiniteCoefficient { index: r });
        }
        out.push(v);
    }
    FormalSeries::new(out, f.truncation())
}

/// Coefficient class of the series f fed to the umbral image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesClass {
    /// Convergent in |t| < R: |f_r| ~ R^{-r}.
    FiniteRadius(f64),
    /// Entire of exponential type A: |f_r| ~ A^r / r!.
    EntireExpType(f64),
}

/// Forecast Gevrey index of the umbral image.
///
/// The image of a Psi ground state has coefficients `g_r / Gamma(gamma) Gamma(alpha mu r + beta)`
/// with `g_r = f_r Gamma(mu r + gamma)`. The auxiliary g has index `sigma_f + mu`
/// (sigma_f = 0 for a finite radius, -1 for exponential type), and dividing by
/// `Gamma(alpha mu r + beta)` lowers it by `alpha mu`.
pub fn predict_convergence(f_class: SeriesClass, mu: f64, ground: &GroundState) -> Result<f64> {
    if mu < 0.0 || mu.is_nan() {
        return Err(UmbraError::NegativeMu(mu));
    }
    let sigma_f = match f_class {
        SeriesClass::FiniteRadius(_) => 0.0,
        SeriesClass::EntireExpType(_) => -1.0,
    };
    match ground {
        GroundState::Phi { .. } => Ok(0.0),
        GroundState::Psi { alpha, .. } => Ok((sigma_f + mu - alpha * mu).max(0.0)),
        GroundState::Custom { .. } => Err(UmbraError::UnsupportedGround("custom")),
    }
}

/// A bound triple (f, mu, ground) realising `F(z) = f(z u^mu)[ground]`.
#[derive(Clone, Debug)]
pub struct UmbralIdentity {
    pub f: FormalSeries,
    pub mu: f64,
    pub ground: GroundState,
    pub predicted_sigma: Option<f64>,
}

impl UmbralIdentity {
    pub fn new(
        f: FormalSeries,
        mu: f64,
        ground: GroundState,
        f_class: Option<SeriesClass>,
    ) -> Result<Self> {
        if mu < 0.0 || mu.is_nan() {
            return Err(UmbraError::NegativeMu(mu));
        }
        let predicted_sigma = match f_class {
            Some(c) => Some(predict_convergence(c, mu, &ground)?),
            None => None,
        };
        Ok(UmbralIdentity {
            f,
            mu,
            ground,
            predicted_sigma,
        })
    }

    pub fn series(&self) -> Result<FormalSeries> {
        umbral_image(&self.f, self.mu, &self.ground)
    }

    /// Same identity with f re-truncated at `n`.
    pub fn series_to(&self, n: usize) -> Result<FormalSeries> {
        umbral_image(
            &self.f.truncate(n.min(self.f.truncation())),
            self.mu,
            &self.ground,
        )
    }
}
