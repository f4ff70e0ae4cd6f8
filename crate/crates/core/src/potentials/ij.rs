use serde::Serialize;

use crate::error::{Error, Result};

/// A point (x₁, |x′|) of ℝ × ℝ^{ν−1} in the cylindrical reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub x1: f64,
    pub s: f64,
}

impl ReducedPoint {
    pub fn new(x1: f64, s: f64) -> Self {
        Self { x1, s }
    }
}

/// Non-radial potential with embedded eigenvalue 1, decaying like
/// (n + |x₁| + |x′|²)^{-1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IjPotential {
    pub nu: u32,
    pub n: f64,
    pub alpha: f64,
}

pub fn default_alpha(nu: u32) -> f64 {
    (nu as f64 / 4.0 + 0.5).max(1.0)
}

impl IjPotential {
    pub fn new(nu: u32, n: f64, alpha: f64) -> Result<Self> {
        if nu < 2 {
            return Err(Error::invalid(format!("IJ family needs nu >= 2, got {nu}")));
        }
        if !(n >= 1.0 && n.is_finite()) {
            return Err(Error::invalid(format!("scale n must be >= 1, got {n}")));
        }
        if !(alpha > nu as f64 / 4.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must exceed nu/4 = {}, got {alpha}", nu as f64 / 4.0)));
        }
        Ok(Self { nu, n, alpha })
    }

    pub fn with_default_alpha(nu: u32, n: f64) -> Result<Self> {
        Self::new(nu, n, default_alpha(nu))
    }

    fn m(&self, x1: f64, s: f64) -> f64 {
        let g = ij_g(x1);
        let s2 = s * s;
        self.n * self.n + g * g + s2 * s2
    }

    /// w = m^{-α} with m = n² + g(x₁)² + s⁴.
    pub fn w(&self, pt: ReducedPoint) -> f64 {
        (-self.alpha * self.m(pt.x1, pt.s).ln()).exp()
    }

    pub fn eigenfunction(&self, pt: ReducedPoint) -> f64 {
        self.w(pt) * pt.x1.sin()
    }

    pub fn potential(&self, pt: ReducedPoint) -> f64 {
        let ReducedPoint { x1, s } = pt;
        let a = self.alpha;
        let (sin2, _) = (2.0 * x1).sin_cos();
        let sx = x1.sin();
        let g = ij_g(x1);
        let gp = 4.0 * sx * sx;
        let gpp = 4.0 * sin2;
        // g'·cot x₁ = 4 sin x₁ cos x₁, finite where sin x₁ = 0.
        let gp_cot = 2.0 * sin2;
        let s2 = s * s;
        let m = self.n * self.n + g * g + s2 * s2;
        -4.0 * a / m * g * gp_cot + 4.0 * a * (a + 1.0) / (m * m) * (g * g * gp * gp + 4.0 * s2 * s2 * s2)
            - 2.0 * a / m * (gp * gp + g * gpp + 2.0 * (self.nu as f64 + 1.0) * s2)
    }

    /// The model decay profile (n + |x₁| + s²)^{-1}.
    pub fn envelope(&self, pt: ReducedPoint) -> f64 {
        1.0 / (self.n + pt.x1.abs() + pt.s * pt.s)
    }

    /// Leading large-|x| behaviour of the potential (independent of n); the
    /// remainder is O((|x₁| + s²)^{-2}).
    pub fn far_field(&self, pt: ReducedPoint) -> f64 {
        let ReducedPoint { x1, s } = pt;
        let a = self.alpha;
        let s2 = s * s;
        let d = 4.0 * x1 * x1 + s2 * s2;
        -32.0 * a * x1 * (2.0 * x1).sin() / d + 16.0 * a * (a + 1.0) * s2 * s2 * s2 / (d * d)
            - 4.0 * a * (self.nu as f64 + 1.0) * s2 / d
    }
}

/// g(x₁) = 2x₁ − sin 2x₁ = 4∫₀^{x₁} sin² y dy.
pub fn ij_g(x1: f64) -> f64 {
    let y = 2.0 * x1;
    if y.abs() < 0.2 {
        let y2 = y * y;
        y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0 * (1.0 - y2 / 110.0))))
    } else {
        y - y.sin()
    }
}

pub fn ij_w(p: &IjPotential, pt: ReducedPoint) -> f64 {
    p.w(pt)
}

pub fn ij_potential(p: &IjPotential, pt: ReducedPoint) -> f64 {
    p.potential(pt)
}

pub fn ij_eigenfunction(p: &IjPotential, pt: ReducedPoint) -> f64 {
    p.eigenfunction(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn g_values() {
        assert_eq!(ij_g(0.0), 0.0);
        assert_relative_eq!(ij_g(PI / 2.0), PI, max_relative = 1e-15);
        for x in [-0.3, 0.05, 0.099, 0.1, 0.101, 2.0] {
            assert_relative_eq!(ij_g(x), 2.0 * x - (2.0 * x).sin(), max_relative = 1e-12);
            assert_relative_eq!(ij_g(-x), -ij_g(x));
        }
    }

    #[test]
    fn weight_and_eigenfunction_values() {
        let p = IjPotential::new(2, 1.0, 1.0).unwrap();
        assert_eq!(p.w(ReducedPoint::new(0.0, 0.0)), 1.0);
        let q = IjPotential::new(2, 2.0, 1.0).unwrap();
        assert_relative_eq!(q.w(ReducedPoint::new(0.0, 0.0)), 0.25);
        assert_relative_eq!(p.w(ReducedPoint::new(PI / 2.0, 1.0)), 1.0 / (2.0 + PI * PI), max_relative = 1e-15);
        assert_relative_eq!(
            p.eigenfunction(ReducedPoint::new(PI / 2.0, 0.0)),
            1.0 / (1.0 + PI * PI),
            max_relative = 1e-15
        );
        assert_eq!(p.eigenfunction(ReducedPoint::new(0.0, 3.0)), 0.0);
        assert_eq!(p.potential(ReducedPoint::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(IjPotential::new(1, 1.0, 1.0).is_err());
        assert!(IjPotential::new(2, 0.5, 1.0).is_err());
        assert!(IjPotential::new(4, 1.0, 1.0).is_err());
        assert!(IjPotential::new(4, 1.0, 1.01).is_ok());
        assert_eq!(default_alpha(2), 1.0);
        assert_eq!(default_alpha(6), 2.0);
    }

    #[test]
    fn potential_is_even_in_x1() {
        let p = IjPotential::new(3, 1.5, 1.2).unwrap();
        for (x1, s) in [(0.3, 0.2), (2.7, 1.1), (40.0, 3.0)] {
            assert_relative_eq!(
                p.potential(ReducedPoint::new(x1, s)),
                p.potential(ReducedPoint::new(-x1, s)),
                max_relative = 1e-12
            );
        }
    }
}
