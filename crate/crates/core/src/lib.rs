//! Lagrange and Markov dynamical spectra, regular Cantor sets, and the
//! certified geometry (dimension, thickness, sumsets) around them.

pub mod error;
pub mod interval;
pub mod perron;
pub mod surd;
pub mod symbolic;
pub mod cf;
pub mod cantor;
pub mod spectra;
pub mod models;
pub mod cli;

pub use error::{Error, Result};
pub use interval::Interval;
pub use surd::QuadraticSurd;
pub use symbolic::{FiniteWord, PeriodicWord, SubshiftSft};
