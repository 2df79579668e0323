//! The non-fractional layer: generalized Skellam fields on boxes, the planar
//! Skellam field with its exact pmf and pgf, governing-equation residuals and
//! the lattice (Bernoulli-cell) approximation.

mod gsrf;
mod lattice;
mod pde;
mod srf;
mod table;

pub use gsrf::{
    gsrf_compound_sample, gsrf_count, gsrf_moments, gsrf_superpose, sample_planar_gsrf, GsrfParams,
    PlanarGsrfSample,
};
pub use lattice::{lattice_sample, LatticeRule, LatticeSpec};
pub use pde::{
    srf_pde_residual, srf_pmf_residual_at, PdeResidual, PDE_PMF_WINDOW, SINGULAR_THRESHOLD,
};
pub use srf::{
    srf_infinitesimal_check, srf_moments, srf_pgf, srf_pmf, srf_pmf_table, srf_pmf_with,
    GridPoint, InfinitesimalReport, SkellamParams,
};
pub use table::PmfTable;
pub(crate) use srf::{check_time, pgf_unchecked};
pub(crate) use table::neumaier_sum;
