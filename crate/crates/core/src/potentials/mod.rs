//! The two families of potentials with an embedded eigenvalue at 1, and a
//! finite-difference check of the eigenvalue equation.

mod ij;
mod residual;
mod wvn;

pub use ij::{default_alpha, ij_eigenfunction, ij_g, ij_potential, ij_w, IjPotential, ReducedPoint};
pub use residual::{
    cylindrical_residual, line_residual, radial_residual, residual_grid, residual_grid_scaled, residual_ratio_test,
    Family, GridSpec, Residual, ResidualCheck, RATIO_WINDOW,
};
pub use wvn::{g_table, wvn_eigenfunction, wvn_g, wvn_phi, wvn_potential, GTable, WvnPotential};
