//! Simulation of nuclear spin-3/2 quadrupolar relaxation as a quantum
//! computation.
//!
//! The crate models the relaxation of a two-qubit (spin-3/2) system three
//! independent ways and provides the machinery to prove them equivalent:
//!
//! - [`channels`] — quantum noise channels as Kraus operator sets: generalized
//!   amplitude damping (GAD), phase damping (PD), global phase damping (GPD),
//!   their tensor products and compositions, and Choi-matrix comparison.
//! - [`circuit`] — a gate-level simulator with closed/open multi-controls,
//!   ready-made builders for the dilation circuit of every channel (up to the
//!   7-qubit system ⊗ environment relaxation circuit), open-system evolution,
//!   and Kraus extraction.
//! - [`redfield`] — closed-form oracles: the spin-1/2 Bloch solution, the
//!   spin-3/2 Redfield solution, the composite-channel element map, and the
//!   spectral-density → channel-parameter relations that tie everything to
//!   physical relaxation rates.
//! - [`qmatrix`] — the dense complex linear algebra underneath (tensor
//!   products, partial trace, Hermitian eigensolver).
//!
//! ```
//! use relaxsim::channels::{gad, pd};
//! use relaxsim::qmatrix::DensityMatrix;
//!
//! // Full amplitude damping sends every qubit state to |0><0|.
//! let ch = gad(1.0, 1.0).unwrap();
//! let rho = DensityMatrix::maximally_mixed(2);
//! let out = ch.apply(&rho).unwrap();
//! assert!((out.element(0, 0).re - 1.0).abs() < 1e-12);
//!
//! // Half dephasing kills off-diagonals entirely: 2*0.5 - 1 = 0.
//! let ch = pd(0.5).unwrap();
//! assert!(ch.completeness_defect() < 1e-12);
//! ```

pub mod channels;
pub mod circuit;
mod error;
pub mod qmatrix;
pub mod redfield;

pub use error::{Error, Result};
pub use qmatrix::{ComplexMatrix, DensityMatrix, PureState, C64};
