use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_ik_scaled, bessel_jy, Order};

/// The angular-momentum channel l of −Δ on ℝ^ν, with Bessel order
/// μ_l = l + (ν−2)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelIndex {
    pub l: u32,
    pub nu: u32,
}

impl ChannelIndex {
    pub fn new(l: u32, nu: u32) -> Result<Self> {
        if nu < 2 {
            return Err(Error::invalid(format!("channels need nu >= 2, got {nu}")));
        }
        Ok(Self { l, nu })
    }

    pub fn mu(&self) -> Order {
        Order::new(self.l as f64 + (self.nu as f64 - 2.0) / 2.0).expect("non-negative order")
    }
}

/// Which boundary value of the resolvent (h_l − z)^{-1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "lambda", rename_all = "snake_case")]
pub enum Energy {
    /// z = λ + i0 with λ > 0.
    PositiveLimit(f64),
    /// z = −λ with λ > 0.
    Negative(f64),
}

impl Energy {
    pub fn lambda(&self) -> f64 {
        match *self {
            Energy::PositiveLimit(l) | Energy::Negative(l) => l,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        self.lambda().sqrt()
    }

    /// The spectral parameter z.
    pub fn z(&self) -> f64 {
        match *self {
            Energy::PositiveLimit(l) => l,
            Energy::Negative(l) => -l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec {
    pub channel: ChannelIndex,
    pub energy: Energy,
}

impl KernelSpec {
    pub fn new(channel: ChannelIndex, energy: Energy) -> Result<Self> {
        let l = energy.lambda();
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::invalid(format!("energy parameter must be finite and > 0, got {l}")));
        }
        Ok(Self { channel, energy })
    }
}

/// Per-radius factors of the separable kernel: K(r, r′) = pre(r)pre(r′)·a(r_<)·b(r_>)
/// (times e^{κ(r_< − r_>)} in the modified case).
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelFactors {
    pub pre: f64,
    pub a: Complex64,
    pub b: Complex64,
}

pub(crate) fn kernel_factors(spec: &KernelSpec, r: f64) -> Result<KernelFactors> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("kernel radius must be finite and > 0, got {r}")));
    }
    let mu = spec.channel.mu();
    let pre = r.powf(-(spec.channel.nu as f64 - 2.0) / 2.0);
    let k = spec.energy.wavenumber();
    Ok(match spec.energy {
        Energy::PositiveLimit(_) => {
            let v = bessel_jy(mu, k * r)?;
            KernelFactors {
                pre,
                a: Complex64::new(v.j, 0.0),
                // (iπ/2)·H⁽¹⁾ = (iπ/2)(J + iY)
                b: Complex64::new(-std::f64::consts::FRAC_PI_2 * v.y, std::f64::consts::FRAC_PI_2 * v.j),
            }
        }
        Energy::Negative(_) => {
            let v = bessel_ik_scaled(mu, k * r)?;
            KernelFactors {
                pre,
                a: Complex64::new(v.i, 0.0),
                b: Complex64::new(v.k, 0.0),
            }
        }
    })
}

pub(crate) fn combine(spec: &KernelSpec, r: f64, fr: &KernelFactors, rp: f64, fp: &KernelFactors) -> Complex64 {
    let (lo, hi, rlo, rhi) = if r <= rp { (fr, fp, r, rp) } else { (fp, fr, rp, r) };
    let mut v = lo.a * hi.b * (fr.pre * fp.pre);
    if let Energy::Negative(_) = spec.energy {
        v *= (spec.energy.wavenumber() * (rlo - rhi)).exp();
    }
    v
}

/// The integral kernel of (h_l − z)^{-1} against r′^{ν−1}dr′:
/// (iπ/2)(rr′)^{-(ν−2)/2} J_μ(kr_<) H⁽¹⁾_μ(kr_>) at z = k² + i0, and
/// (rr′)^{-(ν−2)/2} I_μ(κr_<) K_μ(κr_>) at z = −κ².
pub fn green_kernel(spec: &KernelSpec, r: f64, rp: f64) -> Result<Complex64> {
    let fr = kernel_factors(spec, r)?;
    let fp = kernel_factors(spec, rp)?;
    Ok(combine(spec, r, &fr, rp, &fp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_orders() {
        assert_eq!(ChannelIndex::new(0, 3).unwrap().mu().value(), 0.5);
        assert_eq!(ChannelIndex::new(2, 2).unwrap().mu().value(), 2.0);
        assert_eq!(ChannelIndex::new(1, 5).unwrap().mu().value(), 2.5);
        assert!(ChannelIndex::new(0, 1).is_err());
        assert!(KernelSpec::new(ChannelIndex::new(0, 3).unwrap(), Energy::Negative(0.0)).is_err());
    }
}
