//! Formal power series, Gevrey classification, Borel-Laplace resummation and
//! umbral images over special-function ground states.

pub mod borel;
pub mod catalog;
pub mod dd;
pub mod error;
pub mod gaussian;
pub mod gevrey;
pub mod pade;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod summation;
pub mod umbral;
pub mod verify;

pub use borel::{BorelSum, Direction};
pub use error::{Result, UmbraError};
pub use gevrey::{GevreyReport, Level};
pub use num_complex::Complex64;
pub use series::FormalSeries;
pub use umbral::GroundState;
