//! Coisson brackets of densities on the circle and the Lie algebra of their
//! Fourier components.

mod bracket;
mod families;
mod fourier;

pub use bracket::{density_bracket, hamiltonian_flow, BracketTable, DeltaExpansion, LocalDensity};
pub use families::{mode_structure_constants, Family, StructureConstant};
pub use fourier::{fourier_bracket, jacobi_residual, normal_form, FourierClass};
