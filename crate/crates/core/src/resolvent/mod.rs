//! Channel resolvent kernels of −Δ on ℝ^ν, the Bessel–Hankel kernel-norm
//! integrals behind the uniform resolvent bound, and Birman–Schwinger probes.

mod bs;
mod kernel;
mod qnorm;

pub use bs::{
    bs_matrix, bs_scan, op_norm, op_norm_seeded, support_radius, BsGrid, BsMatrix, BsPotential, BsRow, BsScan,
    ScanGrid, DEFAULT_SEED,
};
pub use kernel::{green_kernel, ChannelIndex, Energy, KernelSpec};
pub use qnorm::{
    double_region_integrals, kernel_qnorm, lemma_cuts, region_integrals, rho_for, sup_over_mu, whole_line_integral,
    DoubleRegionIntegrals, QNorm, RegionIntegrals, SupOverMu, DEFAULT_CUTOFF,
};
