//! Nearest-neighbor entanglement of spinless-fermion tight-binding lattices.
//!
//! The crate builds lattice graphs, evaluates pairwise concurrence of the
//! free-fermion ground state, and evolves hopping integrals with a genetic
//! algorithm to maximize the average nearest-neighbor concurrence.

pub mod error;
pub mod fermion;
pub mod ga;
pub mod io;
pub mod lattice;
pub mod motif;
pub mod oracle;
pub mod render;
pub mod ssh;
pub mod sweep;

pub use error::{Error, Result};
pub use fermion::{
    assemble_hamiltonian, bond_class, concurrence, correlators, evaluate,
    ground_state_density_matrix, half_filling_concurrence, nn_concurrence, BondClass, Chromosome,
    ConcurrenceReport, Correlators, DensityMatrix, Hoppings,
};
pub use ga::{run_ga, Execution, GaConfig, GaRunRecord, GeneRange};
pub use lattice::{
    build_betts, build_kagome, build_ring, build_square, build_triangular, load_lattice, Lattice,
    LatticeDocument,
};
pub use motif::{seed_motif, MotifKind};
pub use render::render_structure_svg;
pub use ssh::{ssh_sweep, SshRow};
pub use sweep::{combine, sweep_band_filling, SweepResult, SweepRow};
