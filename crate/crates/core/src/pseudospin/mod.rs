//! Observable pseudospin quantities of a Kramers-doublet ground state.

pub mod gtensor;
pub mod kramers;
pub mod soc;
pub mod spectrum;

pub use gtensor::{
    delta_effective_lz, effective_lz, g_parallel, g_parallel_of, g_perp, g_perp_with, ladder_coupling_allowed,
    ladder_moments, reduced_soc, DipoleOperator, GTensor,
};
pub use kramers::{
    classify_kd, e32_sublevel, irrep_of, AtomicDoublet, Component, DoubleGroupIrrep, HalfInteger, KramersDoublet,
    SingleGroupIrrep, Spin,
};
pub use soc::{soc_lz_proportionality, SocLzEntry, SocLzReport, SocLzRow};
pub use spectrum::{
    spin_hamiltonian, spin_spectrum, zeeman_sweep, Field, Hyperfine, Manifold, SpinParams, SpinSpectrum, Transition,
};
