//! Quantization of torus sigma models: lattice sectors, Fock modules and
//! characters.

mod fock;
mod model;
mod series;
mod unit;

pub use fock::{
    build_fock, build_sector_fock, measured_central_charge, virasoro_mode, Chirality, FockState,
    FockTruncation, SparseOp, SparseVector,
};
pub use model::{
    build_model, build_model_with_unit, chiral_sectors, dual_sector, enumerate_sectors,
    ko_locality, one_dim_model, spectrum_point, t_dual, vertex_exponents, LatticeModel,
    LocalityEntry, LocalityReport, ModelFile, RadiusSpec, Sector,
};
pub use series::{
    character, character_bar, colored_partitions, partition_function, Grade, QSeries,
};
pub use unit::UnitScalar;
