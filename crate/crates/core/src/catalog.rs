//! Reference series and closed forms used by the tests, the benches and the CLI.

use crate::error::Result;
use crate::series::{exp_series, geometric_series, FormalSeries};
use crate::special::{erfc, ln_factorial};
use crate::umbral::{umbral_image, GroundState};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// `1/(1 + z u^2)[lambda] = sum (-1)^r (2r)!/r! z^r`.
pub fn example7_series(n: usize) -> Result<FormalSeries> {
    umbral_image(
        &geometric_series(C64::new(-1.0, 0.0), n),
        2.0,
        &GroundState::lambda(),
    )
}

/// `(r, ln((2r)!/r!))`, for truncations where the coefficients overflow f64.
pub fn example7_log_magnitudes(lo: usize, hi: usize) -> Vec<(usize, f64)> {
    (lo..=hi)
        .map(|r| (r, ln_factorial(2 * r) - ln_factorial(r)))
        .collect()
}

/// `(1/2) sqrt(pi/z) e^{1/(4z)} erfc(1/(2 sqrt z))`.
pub fn example7_closed_form(z: C64) -> C64 {
    let s = z.sqrt();
    0.5 * (PI / z).sqrt() * (0.25 / z).exp() * erfc(0.5 / s)
}

/// `1/(1 + z u)[lambda] = sum (-1)^r r!/Gamma(1 + r/2) z^r`.
pub fn example8_series(n: usize) -> Result<FormalSeries> {
    umbral_image(
        &geometric_series(C64::new(-1.0, 0.0), n),
        1.0,
        &GroundState::lambda(),
    )
}

/// `e^{i z u}[lambda] = sum i^r/Gamma(1 + r/2) z^r`.
pub fn faddeeva_series(n: usize) -> Result<FormalSeries> {
    umbral_image(&exp_series(C64::i(), n), 1.0, &GroundState::lambda())
}

/// `e^{-z u}[phi_{1,1}] = sum (-1)^r/(r!)^2 z^r`.
pub fn tricomi_series(n: usize) -> Result<FormalSeries> {
    umbral_image(
        &exp_series(C64::new(-1.0, 0.0), n),
        1.0,
        &GroundState::phi(1.0, 1.0)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let v = example7_closed_form(C64::new(1.0, 0.0));
        assert!((v.re - 0.545_641_360_765_047_04).abs() < 1e-15);
        let v = example7_closed_form(C64::new(0.5, 0.0));
        assert!((v.re - 0.655_679_542_418_798_47).abs() < 1e-15);
    }

    #[test]
    fn coefficients() {
        let s = example8_series(10).unwrap();
        assert_eq!(s.coeff(2), C64::new(2.0, 0.0));
        let lm = example7_log_magnitudes(200, 200);
        assert!((lm[0].1 - (ln_factorial(400) - ln_factorial(200))).abs() < 1e-12);
    }
}
