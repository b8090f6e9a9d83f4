//! Dissipativity analysis and gain tuning for MIMO-PI controlled nonlinear systems.

pub mod cli;
pub mod dissipativity;
pub mod error;
pub mod gains;
pub mod linalg;
pub mod plant;
pub mod sim;
pub mod tuner;

pub use dissipativity::{Certifier, DissipativityReport, Region};
pub use error::{Error, Result};
pub use gains::PiGains;
pub use plant::{LinearizationPoint, Plant, UavParams, UavPlant};
