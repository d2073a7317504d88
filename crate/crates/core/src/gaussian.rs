//! Gaussian trigonometric functions `exp_G = w`, `cos_G = e^{-x^2}`,
//! `sin_G = e^{-x^2} erfi(x)`, their lambda-umbral series, principal-value
//! integrals and the Gaussian Fourier transform `F_G[f](k) = F[f](k u)[lambda]`.

use crate::borel::{resum, Direction};
use crate::error::{Result, UmbraError};
use crate::gevrey::{estimate_gevrey_index, GevreyReport, Verdict};
use crate::quadrature::{integrate_interval, integrate_real_line, integrate_tail};
use crate::series::{serialize_complex, serialize_complex_vec, FormalSeries};
use crate::special::{factorial, faddeeva, gamma_ratio, hermite, recip_gamma};
use crate::summation::{sum_series, Summed};
use crate::umbral::{umbral_image, GroundState};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_2_SQRT_PI, PI};

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GaussKind {
    ExpG,
    CosG,
    SinG,
}

/// Oracle evaluation. `cos_G` and `sin_G` are the even and odd parts of `w`.
pub fn gauss_direct(kind: GaussKind, x: C64) -> C64 {
    match kind {
        GaussKind::ExpG => faddeeva(x),
        GaussKind::CosG => (-x * x).exp(),
        GaussKind::SinG => {
            if x.im == 0.0 {
                C64::new(faddeeva(x).im, 0.0)
            } else {
                (faddeeva(x) - faddeeva(-x)) / (2.0 * C64::i())
            }
        }
    }
}

/// Maclaurin series of cos t, sin t or e^{it}.
fn trig_series(kind: GaussKind, n: usize) -> FormalSeries {
    FormalSeries::from_fn(n, |r| {
        let c = i_pow(r) / factorial(r);
        match kind {
            GaussKind::ExpG => c,
            GaussKind::CosG => C64::new(c.re, 0.0),
            GaussKind::SinG => C64::new(c.im, 0.0),
        }
    })
    .expect("finite coefficients")
}

/// `cos(z u)[lambda]`, `sin(z u)[lambda]` or `e^{i z u}[lambda]` truncated at N.
pub fn gauss_umbral_series(kind: GaussKind, n: usize) -> Result<FormalSeries> {
    if n < 4 {
        return Err(UmbraError::InvalidArgument(format!("need N >= 4, got {n}")));
    }
    umbral_image(&trig_series(kind, n), 1.0, &GroundState::lambda())
}

const DERIVATIVE_TRUNCATION: usize = 200;

/// n-th derivative at x, by differentiating the umbral series term by term.
pub fn gauss_derivative(kind: GaussKind, n: usize, x: f64) -> Result<C64> {
    let mut s = gauss_umbral_series(kind, DERIVATIVE_TRUNCATION + n)?;
    for _ in 0..n {
        s = s.derive()?;
    }
    Ok(s.eval(C64::new(x, 0.0)))
}

/// `u^n trig(x u + pi n/2)[lambda]`: coefficient r is `x^r trig^{(r)}(pi n/2)/r! * lambda(r + n)`.
/// Equals the n-th derivative of the corresponding Gaussian function.
pub fn gauss_phase_shift(kind: GaussKind, n: usize, x: f64) -> Result<C64> {
    let lambda = GroundState::lambda();
    let mut sum = C64::new(0.0, 0.0);
    let mut xr = 1.0;
    for r in 0..=DERIVATIVE_TRUNCATION {
        let phase = match kind {
            GaussKind::ExpG => i_pow(r + n),
            GaussKind::CosG => C64::new(i_pow(r + n).re, 0.0),
            GaussKind::SinG => C64::new(i_pow(r + n).im, 0.0),
        };
        if phase.norm() != 0.0 {
            let weight = lambda.evaluate(C64::new((r + n) as f64, 0.0))?
                * recip_gamma(C64::new(r as f64 + 1.0, 0.0));
            sum += phase * xr * weight;
        }
        xr *= x;
    }
    Ok(sum)
}

fn i_pow(r: usize) -> C64 {
    match r % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `erf(z) = (2/sqrt(pi)) sin(z u)/u [lambda]`, summed for r = 0..=N.
pub fn erf_umbral(zeta: C64, n: usize) -> Result<C64> {
    // sin(t)/t has coefficients (-1)^j/(2j+1)! at t^{2j}.
    let sinc = FormalSeries::from_fn(2 * n, |r| {
        if r % 2 == 0 {
            let j = r / 2;
            C64::new((-1f64).powi(j as i32) / factorial(r + 1), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    let image = umbral_image(&sinc, 1.0, &GroundState::lambda())?;
    Ok(FRAC_2_SQRT_PI * zeta * image.eval(zeta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PvOptions {
    /// Excision radii, largest first; fitted by `c0 + c1 eps + c3 eps^3`.
    pub eps: [f64; 3],
    /// Beyond this distance from x0 the integral is mapped onto a finite interval.
    pub cutoff: f64,
    pub tol: f64,
}

impl Default for PvOptions {
    fn default() -> Self {
        PvOptions {
            eps: [1e-2, 5e-3, 2.5e-3],
            cutoff: 12.0,
            tol: 1e-13,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PvValue {
    #[serde(serialize_with = "serialize_complex")]
    pub value: C64,
    /// Spread between the extrapolated value and the smallest-eps value.
    pub extrapolation_change: f64,
    /// Mapped-tail contribution beyond the cutoff.
    #[serde(serialize_with = "serialize_complex")]
    pub tail: C64,
}

/// Cauchy principal value of `int f(x) dx` for f with a simple pole at x0.
///
/// The symmetric integrand `f(x0 + u) + f(x0 - u)` is integrated over
/// `|u| > eps`; the eps -> 0 limit comes from Richardson extrapolation.
pub fn cauchy_pv_integral(f: &dyn Fn(f64) -> C64, x0: f64, opts: &PvOptions) -> Result<PvValue> {
    let g = |u: f64| f(x0 + u) + f(x0 - u);
    check_tail(&g, opts.cutoff)?;
    let b = opts.cutoff;
    let far = integrate_tail(&g, b, opts.tol);
    let body = |eps: f64| integrate_interval(&g, eps, b, opts.tol);
    let [e1, e2, e3] = opts.eps;
    if !(e1 > e2 && e2 > e3 && e3 > 0.0 && e1 < b) {
        return Err(UmbraError::InvalidArgument(
            "excision radii must decrease and stay below the cutoff".into(),
        ));
    }
    let (i1, i2, i3) = (body(e1), body(e2), body(e3));
    // Solve c0 + c1 e + c3 e^3 = I(e) for c0.
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let m = [
        [1.0, e1, e1.powi(3)],
        [1.0, e2, e2.powi(3)],
        [1.0, e3, e3.powi(3)],
    ];
    let d = det(m);
    let cols = |v: [f64; 3]| {
        det([
            [v[0], e1, e1.powi(3)],
            [v[1], e2, e2.powi(3)],
            [v[2], e3, e3.powi(3)],
        ]) / d
    };
    let c0 = C64::new(cols([i1.re, i2.re, i3.re]), cols([i1.im, i2.im, i3.im]));
    Ok(PvValue {
        value: c0 + far,
        extrapolation_change: (c0 - i3).norm(),
        tail: far,
    })
}

/// u |g(u)| must shrink as u grows past the cutoff.
fn check_tail(g: &dyn Fn(f64) -> C64, cutoff: f64) -> Result<()> {
    let probes: Vec<f64> = [1.0, 1e1, 1e2, 1e3].iter().map(|s| cutoff * s).collect();
    let vals: Vec<f64> = probes.iter().map(|&u| u * g(u).norm()).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(UmbraError::NonDecayingTail(format!(
            "non-finite integrand beyond {cutoff}"
        )));
    }
    let last = vals[vals.len() - 1];
    if last > 1e-300 && last >= 0.5 * vals[1] {
        return Err(UmbraError::NonDecayingTail(format!(
            "u |f(x0+u) + f(x0-u)| = {last:.3e} at u = {:.1e}",
            probes[probes.len() - 1]
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResumDiagnostics {
    pub k: f64,
    pub theta: f64,
    pub pade_order: usize,
    pub pade_degrees: (usize, usize),
    #[serde(serialize_with = "serialize_complex_vec")]
    pub poles: Vec<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FtVerdict {
    Convergent,
    Divergent { sigma: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussFTResult {
    pub series_in_k: FormalSeries,
    /// F(k) = k^offset G(k^stride); the Gevrey fit is done on G.
    pub offset: usize,
    pub stride: usize,
    pub report: GevreyReport,
    pub verdict: FtVerdict,
    #[serde(serialize_with = "serialize_opt_complex")]
    pub value: Option<C64>,
    pub summation: Option<Summed>,
    pub resum_diag: Option<ResumDiagnostics>,
}

fn serialize_opt_complex<S: serde::Serializer>(
    z: &Option<C64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match z {
        Some(z) => serialize_complex(z, s),
        None => s.serialize_none(),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lowest nonzero index and the gcd of the gaps between nonzero indices.
pub fn offset_and_stride(s: &FormalSeries) -> Option<(usize, usize)> {
    let idx: Vec<usize> = (0..=s.truncation())
        .filter(|&r| s.coeff(r).norm() != 0.0)
        .collect();
    let first = *idx.first()?;
    let stride = idx.iter().fold(0, |g, &r| gcd(g, r - first)).max(1);
    Some((first, stride))
}

/// Snaps a fitted level to the nearest half-integer when it is within 0.1.
fn snap_level(k: f64) -> f64 {
    let snapped = (2.0 * k).round() / 2.0;
    if snapped > 0.0 && (k - snapped).abs() <= 0.1 {
        snapped
    } else {
        k
    }
}

pub fn gaussian_fourier(
    fourier_hat: &FormalSeries,
    k: f64,
    resum_if_needed: bool,
) -> Result<GaussFTResult> {
    let series = umbral_image(fourier_hat, 1.0, &GroundState::lambda())?;
    gaussian_fourier_from_image(series, k, resum_if_needed)
}

/// Same as [`gaussian_fourier`] for a named input, whose image coefficients are
/// generated by ratio recurrences and so stay finite at large truncations.
pub fn gaussian_fourier_input(
    input: &FourierInput,
    n: usize,
    k: f64,
    resum_if_needed: bool,
) -> Result<GaussFTResult> {
    gaussian_fourier_from_image(input.image(n)?, k, resum_if_needed)
}

/// Classifies and sums an already-built image series `F[f](k u)[lambda]`.
pub fn gaussian_fourier_from_image(
    series: FormalSeries,
    k: f64,
    resum_if_needed: bool,
) -> Result<GaussFTResult> {
    let (offset, stride) = offset_and_stride(&series).ok_or(UmbraError::InsufficientData {
        needed: 8,
        found: 0,
    })?;
    let n_s = (series.truncation() - offset) / stride;
    let reduced = FormalSeries::from_fn(n_s, |j| series.coeff(offset + stride * j))?;
    let report = estimate_gevrey_index(&reduced, None)?;
    let kc = C64::new(k, 0.0);
    let s = kc.powu(stride as u32);
    let prefactor = kc.powu(offset as u32);
    let mut result = GaussFTResult {
        series_in_k: series,
        offset,
        stride,
        verdict: FtVerdict::Convergent,
        report: report.clone(),
        value: None,
        summation: None,
        resum_diag: None,
    };
    if report.verdict == Verdict::Convergent {
        let summed = sum_series(&reduced, s)?;
        result.value = Some(prefactor * summed.value);
        result.summation = Some(summed);
        return Ok(result);
    }
    result.verdict = FtVerdict::Divergent {
        sigma: report.sigma,
    };
    if resum_if_needed {
        let level = snap_level(1.0 / report.sigma);
        let order = (n_s / 2).min(20);
        let sum = resum(&reduced, level, Direction::new(s.arg()), order)?;
        result.value = Some(prefactor * sum.evaluate(s)?);
        result.resum_diag = Some(ResumDiagnostics {
            k: level,
            theta: sum.direction.theta(),
            pade_order: sum.pade_order,
            pade_degrees: sum.pade_degrees,
            poles: sum.pade_poles.clone(),
        });
    }
    Ok(result)
}

/// Functions with a known Fourier transform (kernel `e^{-ikx}`).
#[derive(Clone, Debug, PartialEq)]
pub enum FourierInput {
    /// `e^{-a x^2}`, transform `sqrt(pi/a) e^{-k^2/(4a)}`.
    Gaussian { a: f64 },
    /// `e^{-|x|}`, transform `2/(1 + k^2)`.
    AbsExp,
    /// `e^{-x^2/2} H_n(x)`, transform `sqrt(2 pi) (-i)^n H_n(k) e^{-k^2/2}`.
    Hermite { n: usize },
    /// Caller-supplied Maclaurin series of the transform.
    Custom(FormalSeries),
}

impl FourierInput {
    fn validate(&self) -> Result<()> {
        match self {
            FourierInput::Gaussian { a } if !(*a > 0.0 && a.is_finite()) => Err(
                UmbraError::InvalidArgument(format!("a must be positive, got {a}")),
            ),
            _ => Ok(()),
        }
    }

    /// Maclaurin series of the transform, truncated at n.
    pub fn hat(&self, n: usize) -> Result<FormalSeries> {
        self.validate()?;
        match self {
            FourierInput::Gaussian { a } => {
                let mut c = (PI / a).sqrt();
                FormalSeries::from_fn(n, |r| {
                    if r % 2 == 1 {
                        return C64::new(0.0, 0.0);
                    }
                    let j = r / 2;
                    if j > 0 {
                        c *= -1.0 / (4.0 * a * j as f64);
                    }
                    C64::new(c, 0.0)
                })
            }
            FourierInput::AbsExp => FormalSeries::from_fn(n, |r| match r % 4 {
                0 => C64::new(2.0, 0.0),
                2 => C64::new(-2.0, 0.0),
                _ => C64::new(0.0, 0.0),
            }),
            FourierInput::Hermite { n: deg } => {
                let gauss = FormalSeries::from_fn(n, |r| {
                    if r % 2 == 1 {
                        C64::new(0.0, 0.0)
                    } else {
                        let j = r / 2;
                        C64::new((-0.5f64).powi(j as i32) / factorial(j), 0.0)
                    }
                })?;
                let h = hermite_coefficients(*deg);
                let poly =
                    FormalSeries::from_fn(n, |r| C64::new(h.get(r).copied().unwrap_or(0.0), 0.0))?;
                Ok(poly
                    .cauchy_product(&gauss)
                    .scale(minus_i_pow(*deg) * (2.0 * PI).sqrt()))
            }
            FourierInput::Custom(s) => Ok(s.truncate(n.min(s.truncation()))),
        }
    }

    /// The lambda-image `F[f](k u)[lambda]` truncated at n.
    pub fn image(&self, n: usize) -> Result<FormalSeries> {
        self.validate()?;
        let lambda = GroundState::lambda();
        match self {
            FourierInput::Gaussian { a } => {
                // sqrt(pi/a) (-1/(4a))^j (2j)!/(j!)^2 at k^{2j}
                let mut c = (PI / a).sqrt();
                FormalSeries::from_fn(n, |r| {
                    if r % 2 == 1 {
                        return C64::new(0.0, 0.0);
                    }
                    let j = r / 2;
                    if j > 0 {
                        let jf = j as f64;
                        c *= -(2.0 * jf - 1.0) * (2.0 * jf) / (4.0 * a * jf * jf);
                    }
                    C64::new(c, 0.0)
                })
            }
            FourierInput::Hermite { n: deg } => {
                // sqrt(2 pi) (-i)^n sum_m h_m k^m sum_j (-1/2)^j lambda(m + 2j)/j! k^{2j}
                let h = hermite_coefficients(*deg);
                let pref = minus_i_pow(*deg) * (2.0 * PI).sqrt();
                let mut out = vec![C64::new(0.0, 0.0); n + 1];
                for (m, &hm) in h.iter().enumerate() {
                    if hm == 0.0 || m > n {
                        continue;
                    }
                    let mf = m as f64;
                    let mut c = lambda.evaluate(C64::new(mf, 0.0))?.re;
                    let mut j = 0;
                    while m + 2 * j <= n {
                        out[m + 2 * j] += pref * hm * c;
                        let jf = j as f64;
                        c *= -0.5 * (2.0 * jf + mf + 1.0) * (2.0 * jf + mf + 2.0)
                            / ((jf + mf / 2.0 + 1.0) * (jf + 1.0));
                        j += 1;
                    }
                }
                FormalSeries::new(out, n)
            }
            _ => umbral_image(&self.hat(n)?, 1.0, &lambda),
        }
    }

    /// The function itself, for direct quadrature; `None` for custom input.
    pub fn function(&self) -> Option<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
        match self {
            FourierInput::Gaussian { a } => {
                let a = *a;
                Some(Box::new(move |x: f64| (-a * x * x).exp()))
            }
            FourierInput::AbsExp => Some(Box::new(|x: f64| (-x.abs()).exp())),
            FourierInput::Hermite { n } => Some(Box::new(hermite_gaussian(*n))),
            FourierInput::Custom(_) => None,
        }
    }
}

fn minus_i_pow(n: usize) -> C64 {
    i_pow((4 - n % 4) % 4)
}

/// Monomial coefficients of the physicists' Hermite polynomial H_n.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for m in 1..n {
        let mut next = vec![0.0; m + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * m as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `a_m(k) = k^m (2k^2 + 1)^{-(m+1)/2} Gamma(m+1)/Gamma(1+m/2)`.
pub fn hermite_gaussft_coefficient(m: usize, k: f64) -> Result<f64> {
    let ratio = gamma_ratio(
        C64::new(m as f64 + 1.0, 0.0),
        C64::new(1.0 + m as f64 / 2.0, 0.0),
    )?
    .re;
    Ok(k.powi(m as i32) * (2.0 * k * k + 1.0).powf(-(m as f64 + 1.0) / 2.0) * ratio)
}

/// `k^m e^{-k^2 u^2/2} u^m [lambda] = k^m sum_j (-k^2/2)^j/j! lambda(2j + m)`.
///
/// The coefficients `(-1/2)^j lambda(2j + m)/j!` are generated by their ratio
/// recurrence, since the factors overflow separately.
pub fn hermite_gaussft_coefficient_series(m: usize, k: f64, n: usize) -> Result<C64> {
    let mf = m as f64;
    let mut c = GroundState::lambda().evaluate(C64::new(mf, 0.0))?.re;
    let terms = FormalSeries::from_fn(n, |j| {
        let out = C64::new(c, 0.0);
        let jf = j as f64;
        c *= -0.5 * (2.0 * jf + mf + 1.0) * (2.0 * jf + mf + 2.0)
            / ((jf + mf / 2.0 + 1.0) * (jf + 1.0));
        out
    })?;
    let summed = sum_series(&terms, C64::new(k * k, 0.0))?;
    Ok(k.powi(m as i32) * summed.value)
}

/// `int f(x) exp_G(-k x) dx` by direct quadrature; f must decay at least like 1/x^2.
pub fn fourier_g_direct(f: &dyn Fn(f64) -> f64, k: f64, tol: f64) -> C64 {
    let g = |x: f64| {
        let fx = f(x);
        if fx == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            fx * faddeeva(C64::new(-k * x, 0.0))
        }
    };
    integrate_real_line(&g, &[0.0], 12.0, tol)
}

/// `e^{-x^2/2} H_n(x)`.
pub fn hermite_gaussian(n: usize) -> impl Fn(f64) -> f64 {
    move |x| (-0.5 * x * x).exp() * hermite(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{erf, erfi};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn direct_values() {
        assert_eq!(gauss_direct(GaussKind::CosG, c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(gauss_direct(GaussKind::SinG, c(0.0, 0.0)).norm(), 0.0);
        let x = c(0.8, 0.0);
        let s = gauss_direct(GaussKind::SinG, x);
        assert!((s - (-x * x).exp() * erfi(x)).norm() < 1e-15);
        let z = c(0.3, 0.4);
        let w = gauss_direct(GaussKind::CosG, z) + C64::i() * gauss_direct(GaussKind::SinG, z);
        assert!((w - faddeeva(z)).norm() < 1e-14);
    }

    #[test]
    fn umbral_series_sums() {
        let cos = gauss_umbral_series(GaussKind::CosG, 120).unwrap();
        assert!((cos.eval(c(1.0, 0.0)).re - (-1f64).exp()).abs() < 1e-10);
        assert_eq!(cos.coeff(3), c(0.0, 0.0));
        let sin = gauss_umbral_series(GaussKind::SinG, 120).unwrap();
        assert!((sin.eval(c(1.0, 0.0)).re - 0.607_157_705_841_393_7).abs() < 1e-10);
        assert!(gauss_umbral_series(GaussKind::ExpG, 3).is_err());
    }

    #[test]
    fn derivatives() {
        let w = faddeeva(c(0.5, 0.0));
        let want = c(0.0, FRAC_2_SQRT_PI) - 2.0 * 0.5 * w;
        assert!((gauss_derivative(GaussKind::ExpG, 1, 0.5).unwrap() - want).norm() < 1e-12);
        let x = 0.7;
        let h3 = -hermite(3, x) * (-x * x).exp();
        assert!((gauss_derivative(GaussKind::CosG, 3, x).unwrap().re - h3).abs() < 1e-12);
        assert!((gauss_phase_shift(GaussKind::CosG, 3, x).unwrap().re - h3).abs() < 1e-12);
    }

    #[test]
    fn erf_image() {
        assert_eq!(erf_umbral(c(0.0, 0.0), 60).unwrap().norm(), 0.0);
        let v = erf_umbral(c(1.0, 0.0), 60).unwrap();
        assert!((v - erf(c(1.0, 0.0))).norm() < 1e-10);
    }

    #[test]
    fn pv_dirichlet() {
        let f = |x: f64| gauss_direct(GaussKind::SinG, c(x, 0.0)) / x;
        let v = cauchy_pv_integral(&f, 0.0, &PvOptions::default()).unwrap();
        assert!((v.value - c(PI, 0.0)).norm() < 1e-6, "{v:?}");
    }

    #[test]
    fn pv_rejects_slow_tails() {
        let f = |x: f64| c(1.0 / (x - 1.0), 0.0) * 0.0 + c(1.0, 0.0);
        assert!(matches!(
            cauchy_pv_integral(&f, 1.0, &PvOptions::default()),
            Err(UmbraError::NonDecayingTail(_))
        ));
    }

    #[test]
    fn hermite_polynomials() {
        assert_eq!(hermite_coefficients(3), vec![0.0, -12.0, 0.0, 8.0]);
        assert_eq!(hermite_coefficients(0), vec![1.0]);
    }

    #[test]
    fn am_closed_form() {
        assert!(
            (hermite_gaussft_coefficient(0, 0.4).unwrap() - (1.32f64).powf(-0.5)).abs() < 1e-15
        );
        assert!(
            (hermite_gaussft_coefficient(1, 1.0).unwrap() - 2.0 / (3.0 * PI.sqrt())).abs() < 1e-15
        );
        for (m, k) in [(2, 0.7), (3, 0.3), (0, 0.5)] {
            let s = hermite_gaussft_coefficient_series(m, k, 400).unwrap();
            assert!(
                (s.re - hermite_gaussft_coefficient(m, k).unwrap()).abs() < 1e-9,
                "{m} {k} {s}"
            );
        }
    }

    #[test]
    fn recurrence_images_match_umbral_images() {
        for input in [
            FourierInput::Gaussian { a: 2.0 },
            FourierInput::Hermite { n: 3 },
            FourierInput::AbsExp,
        ] {
            let direct =
                umbral_image(&input.hat(40).unwrap(), 1.0, &GroundState::lambda()).unwrap();
            let rec = input.image(40).unwrap();
            for r in 0..=40 {
                let (a, b) = (direct.coeff(r), rec.coeff(r));
                assert!(
                    (a - b).norm() <= 1e-13 * a.norm().max(1e-300),
                    "{input:?} {r} {a} {b}"
                );
            }
        }
    }

    #[test]
    fn offsets() {
        let h = FourierInput::Hermite { n: 1 }.hat(20).unwrap();
        let img = umbral_image(&h, 1.0, &GroundState::lambda()).unwrap();
        assert_eq!(offset_and_stride(&img), Some((1, 2)));
    }
}
