//! Lossy transmission of correlated Gaussian sources over a Gaussian
//! multiple-access channel: rate-distortion function, transmission schemes,
//! converse bounds, spherical geometry and Monte-Carlo simulation.

pub mod error;
pub mod model;
pub mod ratedist;
pub mod schemes;
pub mod bounds;
pub mod spheregeom;
pub mod mcsim;

pub use error::{Error, Result};
