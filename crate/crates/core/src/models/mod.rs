//! Physical test spectra: rectangular-billiard levels, quantum Ising chain
//! momentum sectors, and plain-text spectrum files.

mod billiard;
mod ingest;
mod ising;

pub use billiard::{billiard_levels, BilliardSpec};
pub use ingest::{decimate, ingest_spectrum_file, DecimationSpec};
pub use ising::{
    ising_full_spectrum_dense, ising_sector_dimension, ising_sector_spectrum,
    ising_sector_spectrum_with_limit, IsingSpec,
};
