//! Double-slit matter-wave interference with internal-state which-path
//! markers.
//!
//! Center-of-mass waves are propagated from each slit to a screen
//! ([`propagation`]), tagged with detector states ([`state`]) and combined
//! into interference patterns ([`interferometer`]). Two predictions are
//! produced side by side: the orthodox one, where cross terms carry the
//! detector overlap, and the center-of-mass-only one, which ignores the
//! detectors. [`analysis`] reduces patterns to visibilities and spacings.

pub mod analysis;
pub mod config;
pub mod error;
pub mod interferometer;
pub mod pattern;
pub mod propagation;
pub mod quadrature;
pub mod runner;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
pub use pattern::Pattern;
pub use propagation::{Aperture, BeamParams, Profile, ScreenGrid, WaveField};
pub use state::DetectorState;
