//! Spectra, low energy and spectral bounds of the A_alpha matrix
//! `alpha * Deg + (1 - alpha) * A` of simple digraphs.
//!
//! ```
//! use digraph_spectra::{generators, Alpha, AlphaMatrix, BoundReport};
//!
//! let k4 = generators::complete_symmetric(4);
//! let alpha: Alpha = "1/2".parse().unwrap();
//! let spectrum = AlphaMatrix::new(&k4, alpha).eigenvalues().unwrap();
//! assert!((spectrum.spectral_radius().unwrap() - 3.0).abs() < 1e-12);
//!
//! let report = BoundReport::compute(&k4, alpha).unwrap();
//! assert!((report.sr_upper_km.unwrap() - 3.0).abs() < 1e-12);
//! ```

pub mod alpha;
pub mod bounds;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod linalg;
pub mod spectral;
pub mod verify;

pub use alpha::Alpha;
pub use bounds::{BoundId, BoundReport};
pub use digraph::Digraph;
pub use generators::RngSeed;
pub use spectral::{AlphaMatrix, Spectrum};
