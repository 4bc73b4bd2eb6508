//! Small-time heat content asymptotics for heat flowing out of a domain:
//! universal constants, predicted series on model geometries, brute-force
//! heat content by the method of images, and a coefficient-fitting harness
//! that ties the two together.

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod fitharness;
pub mod geometry;
pub mod heatcontent;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
pub mod summation;

pub use error::{Error, Result};
pub use specfun::Alpha;
