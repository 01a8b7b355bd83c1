//! Exact workbench for the chiral Fourier-Mukai transform on abelian varieties
//! and for the quantization of the free boson on a torus.
//!
//! The modules mirror the pipeline:
//!
//! - [`exactlin`]: Gaussian-rational scalars, matrices and alternating forms.
//! - [`chiral_fm`]: isomorphism classes of chiral/twisted differential
//!   operators and the transform indexed by a nondegenerate class.
//! - [`jetcalc`]: jets, Euler-Lagrange equations, variational 1-forms and
//!   Noether integrals of motion.
//! - [`coisson`]: delta-function brackets of circle densities and the Lie
//!   algebra of their Fourier components.
//! - [`fockq`]: lattice models, sectors, truncated Fock modules, T-duality and
//!   the chiral algebra.

pub mod chiral_fm;
pub mod coisson;
pub mod error;
pub mod exactlin;
pub mod fockq;
pub mod jetcalc;

pub use error::{Error, Result};
pub use exactlin::{AltTensor, RationalMatrix, Scalar};
