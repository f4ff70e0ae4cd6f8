use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// |E|^γ / ∫|V|^{γ+ν/2}: the empirical candidate for the constant in a
/// Keller-type inequality.
pub fn keller_quotient(e: Complex64, norm_value: f64, gamma: f64) -> Result<f64> {
    if !(norm_value > 0.0 && norm_value.is_finite()) {
        return Err(Error::invalid(format!("norm value must be positive, got {norm_value}")));
    }
    if e == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    Ok(e.norm().powf(gamma) / norm_value)
}

/// |E|^{-γ₁}∫|V₁|^{γ₁+ν/2} + |E|^{-γ₂}∫|V₂|^{γ₂+ν/2} for a split V = V₁ + V₂.
pub fn split_bound_quotient(e: Complex64, norm1: f64, gamma1: f64, norm2: f64, gamma2: f64) -> Result<f64> {
    if e.norm() == 0.0 {
        return Err(Error::invalid("split bound needs E != 0"));
    }
    if norm1 < 0.0 || norm2 < 0.0 {
        return Err(Error::invalid("norm values must be non-negative"));
    }
    let a = e.norm();
    Ok(a.powf(-gamma1) * norm1 + a.powf(-gamma2) * norm2)
}

/// The well V = −depth on |x| ≤ half_width, in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquareWell {
    pub depth: f64,
    pub half_width: f64,
}

/// Root of a sign change on [lo, hi]; only the sign at `hi` is trusted.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let fhi = f(hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (fhi < 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

impl SquareWell {
    pub fn new(depth: f64, half_width: f64) -> Result<Self> {
        if !(depth > 0.0 && half_width > 0.0 && depth.is_finite() && half_width.is_finite()) {
            return Err(Error::invalid("square well needs positive depth and width"));
        }
        Ok(Self { depth, half_width })
    }

    pub fn potential(&self, x: f64) -> f64 {
        if x.abs() <= self.half_width {
            -self.depth
        } else {
            0.0
        }
    }

    /// ∫_ℝ |V|^q dx.
    pub fn lq_integral(&self, q: f64) -> f64 {
        2.0 * self.half_width * self.depth.powf(q)
    }

    /// Lowest eigenvalue of −d²/dx² + V on ℝ (always present): the even
    /// solution of k tan(ka) = κ with k² + κ² = depth, solved for κ so that
    /// E = −κ² keeps full precision for shallow wells.
    pub fn ground_state(&self) -> f64 {
        let (v0, a) = (self.depth, self.half_width);
        let k_of = |kappa: f64| (v0 - kappa * kappa).max(0.0).sqrt();
        let k_edge = std::f64::consts::FRAC_PI_2 / a;
        let lo = if v0 > k_edge * k_edge { (v0 - k_edge * k_edge).sqrt() } else { 0.0 };
        let kappa = bisect(|kappa| k_of(kappa) * (k_of(kappa) * a).tan() - kappa, lo, v0.sqrt());
        -kappa * kappa
    }

    /// Lowest eigenvalue on the half-line [0, ∞) with a Dirichlet condition and
    /// V = −depth on [0, a]: k cot(ka) = −κ, present iff depth·a² > π²/4.
    pub fn half_line_ground_state(&self) -> Option<f64> {
        let (v0, a) = (self.depth, self.half_width);
        let k_lo = std::f64::consts::FRAC_PI_2 / a;
        if v0 <= k_lo * k_lo {
            return None;
        }
        let k_of = |kappa: f64| (v0 - kappa * kappa).max(0.0).sqrt();
        let k_hi = std::f64::consts::PI / a;
        let lo = if v0 > k_hi * k_hi { (v0 - k_hi * k_hi).sqrt() } else { 0.0 };
        let hi = (v0 - k_lo * k_lo).sqrt();
        let kappa = bisect(|kappa| k_of(kappa) / (k_of(kappa) * a).tan() + kappa, lo, hi);
        Some(-kappa * kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ground_state_solves_matching_condition() {
        for (v0, a) in [(1.0, 1.0), (0.01, 2.0), (50.0, 0.3), (400.0, 1.0)] {
            let w = SquareWell::new(v0, a).unwrap();
            let e = w.ground_state();
            assert!(e < 0.0 && e > -v0);
            let (k, kappa) = ((v0 + e).sqrt(), (-e).sqrt());
            assert_relative_eq!(k * (k * a).tan(), kappa, max_relative = 1e-9);
        }
    }

    #[test]
    fn half_line_threshold() {
        assert!(SquareWell::new(2.0, 1.0).unwrap().half_line_ground_state().is_none());
        let w = SquareWell::new(10.0, 1.0).unwrap();
        let e = w.half_line_ground_state().unwrap();
        let (k, kappa) = ((10.0 + e).sqrt(), (-e).sqrt());
        assert_relative_eq!(k / k.tan(), -kappa, max_relative = 1e-9);
    }

    #[test]
    fn quotients() {
        assert_eq!(keller_quotient(Complex64::new(0.0, 0.0), 2.0, 0.5).unwrap(), 0.0);
        assert_relative_eq!(keller_quotient(Complex64::new(-4.0, 0.0), 2.0, 0.5).unwrap(), 1.0);
        assert!(split_bound_quotient(Complex64::new(0.0, 0.0), 1.0, 0.5, 1.0, 1.0).is_err());
        assert_relative_eq!(
            split_bound_quotient(Complex64::new(0.0, 4.0), 2.0, 0.5, 0.0, 1.0).unwrap(),
            1.0
        );
    }
}
