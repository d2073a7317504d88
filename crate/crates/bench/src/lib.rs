//! Inputs shared by the pipeline benchmarks.

use umbra_core::catalog::{example7_series, example8_series, faddeeva_series};
use umbra_core::series::FormalSeries;
use umbra_core::Complex64;

pub struct Fixtures {
    pub example7: FormalSeries,
    /// Capped at truncation 200; r!/Gamma(1 + r/2) overflows f64 near r = 269.
    pub example8: FormalSeries,
    pub faddeeva: FormalSeries,
    /// Dense series with O(1) coefficients for the algebra benchmarks.
    pub dense: FormalSeries,
}

impl Fixtures {
    pub fn new(n: usize) -> Fixtures {
        let dense = FormalSeries::from_fn(n, |r| {
            let x = r as f64;
            Complex64::new((0.7 * x).sin(), (1.3 * x).cos() / (1.0 + x))
        })
        .expect("finite coefficients");
        Fixtures {
            example7: example7_series(60).expect("Example 7 series"),
            example8: example8_series(n.min(200)).expect("Example 8 series"),
            faddeeva: faddeeva_series(n).expect("Faddeeva series"),
            dense,
        }
    }
}
