//! Special functions: Bessel and Hankel functions of real order, and the
//! region-wise envelopes used to bound them uniformly in the order.

mod bessel;
mod bounds;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_ik_scaled, bessel_j, bessel_jy, bessel_k, bessel_k_scaled, bessel_y,
    hankel1, Eval, IkScaled, JyValues, Order,
};
pub use bounds::{
    certify_bounds, classify_region, envelope, phase_phi, region_cuts, region_interval, region_validity_range, BoundRegion, CertRow,
    Kind, Region, DEFAULT_ALPHA0,
};
