//! Magnetic quantum walks on `Z^2` and the unitary almost-Mathieu walks on
//! `Z`: construction, finite-volume restriction, and spectra.
//!
//! The walk `W_Φ = diag(T1, T1*) C_H diag(T2, T2*) C_H` with magnetic
//! translations `T_α` is built matrix-free ([`walk`]). At rational flux its
//! spectrum is computed by Bloch reduction ([`bloch`]); at any flux the
//! boundary-decoupled restriction `W_L` ([`restriction`]) gives an exactly
//! unitary finite-volume model whose eigenvalue counting measures approach
//! the spectral distribution function ([`spectral`]).

pub mod analysis;
pub mod bloch;
pub mod check;
pub mod cli;
pub mod coin;
pub mod error;
pub mod flux;
pub mod format;
pub mod gauge;
pub mod lattice;
pub mod propagation;
pub mod restriction;
pub mod sparse;
pub mod spectral;
pub mod walk;

pub use analysis::{SpectrumSet, SymmetryReport};
pub use bloch::{band_spectrum, bloch_matrix, bloch_matrix_1d, butterfly, BandSpectrum, BlochFiber, Butterfly};
pub use coin::{Coin, CoinClass, Pauli};
pub use error::{Error, Result};
pub use flux::{golden_convergents, ConvergentSequence, Flux};
pub use gauge::{GaugeField, GaugeKind, GaugeTransform};
pub use lattice::{Direction, LatticeBox, Site, Spin};
pub use restriction::{boundary_sets, build_decoupled, restrict, restricted_walk, BoundarySets};
pub use sparse::SparseMatrix;
pub use spectral::{MomentSequence, SpectralMeasure};
pub use walk::{StateVector, WalkKind, WalkOperator};
