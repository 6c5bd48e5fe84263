//! Exchange-symmetrized Bell bases for pairs of qudits of even dimension, a
//! simulator for the beam-splitter Bell analyzer that tells `2d - 1` of them
//! apart, and a dense-coding protocol built on top.
//!
//! ```
//! use qbk::bell::{bell_state, PhaseMode};
//! use qbk::symmetry::{classify_symmetry, SymmetryLabel};
//! use qbk::linalg::Tolerance;
//!
//! let singlet = bell_state(2, 1, 1, PhaseMode::Dft).unwrap();
//! let class = classify_symmetry(&singlet, Tolerance::default());
//! assert_eq!(class.label, SymmetryLabel::Antisymmetric);
//! ```

pub mod bell;
pub mod cli;
pub mod dense_coding;
pub mod error;
pub mod export;
pub mod lelm;
pub mod linalg;
pub mod mis;
pub mod symmetry;

pub use error::{Error, Result};
