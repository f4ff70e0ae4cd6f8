//! L^p and mixed L^p(L²/L^∞ over the sphere) norms of the two potential
//! families, of sampled profiles, and of user callables.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::profile::{sphere_area, RadialProfile};
use super::radial::{golden_max, power_integral};
use super::{Functional, NormReport};
use crate::error::{Error, Result};
use crate::potentials::{IjPotential, ReducedPoint, WvnPotential};
use crate::quad::{adaptive, adaptive_to_infinity, adaptive_with_breaks, integrate_with_power_tail, Tol};

/// What a norm is taken of.
#[derive(Clone, Copy)]
pub enum NormTarget<'a> {
    Ij(&'a IjPotential),
    Wvn(&'a WvnPotential),
    Profile(&'a RadialProfile),
    /// f(|x|) on ℝ^ν, taken to vanish for |x| > extent.
    Radial {
        f: &'a (dyn Fn(f64) -> f64 + Sync),
        nu: u32,
        extent: f64,
    },
    /// f(x₁, |x′|) on ℝ × ℝ^{ν−1} (ν ≥ 2), taken to vanish for |x| > extent.
    Reduced {
        f: &'a (dyn Fn(f64, f64) -> f64 + Sync),
        nu: u32,
        extent: f64,
    },
}

impl NormTarget<'_> {
    pub fn nu(&self) -> u32 {
        match self {
            NormTarget::Ij(p) => p.nu,
            NormTarget::Wvn(p) => p.nu,
            NormTarget::Profile(p) => p.nu(),
            NormTarget::Radial { nu, .. } | NormTarget::Reduced { nu, .. } => *nu,
        }
    }
}

/// The inner norm over 𝕊^{ν−1} in a mixed norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Inner {
    L2Sphere,
    LinfSphere,
}

/// Where the block-wise integration of the slowly decaying families stops
/// and the fitted power-law tail takes over.
fn far_cut(n: f64) -> f64 {
    (100.0 * n).max(200.0)
}

fn block_tol() -> Tol {
    Tol::new(1e-300, 1e-9)
}

fn first_error<T>(slot: &std::sync::Mutex<Option<Error>>, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            slot.lock().expect("error slot").get_or_insert(e);
            None
        }
    }
}

/// ∫₀^∞ |V(x₁, s)|^p s^{ν−2} ds for the IJ family.
fn ij_transverse(p: &IjPotential, x1: f64, pw: f64) -> Result<f64> {
    let k = p.nu as i32 - 2;
    let f = |s: f64| p.potential(ReducedPoint::new(x1, s)).abs().powf(pw) * s.powi(k);
    let s1 = 2.0 * (p.n + x1.abs()).sqrt() + 2.0;
    let near = adaptive(f, 0.0, s1, Tol::new(1e-300, 1e-10))?;
    let far = adaptive_to_infinity(f, s1, Tol::new(1e-300, 1e-10))?;
    Ok(near.value + far.value)
}

/// ∫_{ℝ^ν} |V|^p dx (no root taken).
pub fn lp_fullspace(target: NormTarget, p: f64) -> Result<NormReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be a finite positive number, got {p}")));
    }
    let nu = target.nu();
    let (value, err) = match target {
        NormTarget::Ij(pot) => {
            let beta = p - (nu as f64 - 1.0) / 2.0;
            if beta <= 1.0 {
                return Err(Error::diverges(format!(
                    "∫|V|^p diverges for the IJ family unless p > (ν+1)/2 = {}",
                    (nu as f64 + 1.0) / 2.0
                )));
            }
            let slot = std::sync::Mutex::new(None);
            let t = integrate_with_power_tail(
                |x1| first_error(&slot, ij_transverse(pot, x1, p)).unwrap_or(f64::NAN),
                0.0,
                far_cut(pot.n),
                PI,
                beta,
                block_tol(),
            );
            if let Some(e) = slot.into_inner().expect("error slot") {
                return Err(e);
            }
            let t = t?;
            let factor = 2.0 * sphere_area(nu - 2);
            (factor * t.value, factor * t.abs_err)
        }
        NormTarget::Wvn(pot) => {
            let beta = p - (nu as f64 - 1.0);
            if beta <= 1.0 {
                return Err(Error::diverges(format!(
                    "∫|V|^p diverges for the WvN family unless p > ν = {nu}"
                )));
            }
            let slot = std::sync::Mutex::new(None);
            let t = integrate_with_power_tail(
                |r| {
                    first_error(&slot, pot.potential(r))
                        .map(|v| v.abs().powf(p) * r.powi(nu as i32 - 1))
                        .unwrap_or(f64::NAN)
                },
                0.0,
                far_cut(pot.n),
                PI,
                beta,
                block_tol(),
            );
            if let Some(e) = slot.into_inner().expect("error slot") {
                return Err(e);
            }
            let t = t?;
            let factor = sphere_area(nu - 1);
            (factor * t.value, factor * t.abs_err)
        }
        NormTarget::Profile(prof) => {
            let q = power_integral(prof, p, nu as f64 - 1.0)?;
            let factor = sphere_area(nu - 1);
            (factor * q.value, factor * q.abs_err)
        }
        NormTarget::Radial { f, extent, .. } => {
            check_extent(extent)?;
            let q = adaptive(|r| f(r).abs().powf(p) * r.powi(nu as i32 - 1), 0.0, extent, Tol::new(1e-300, 1e-10))?;
            let factor = sphere_area(nu - 1);
            (factor * q.value, factor * q.abs_err)
        }
        NormTarget::Reduced { f, extent, .. } => {
            check_reduced(nu, extent)?;
            let k = nu as i32 - 2;
            let slot = std::sync::Mutex::new(None);
            let q = adaptive(
                |x1| {
                    let inner = adaptive(|s| f(x1, s).abs().powf(p) * s.powi(k), 0.0, extent, Tol::new(1e-300, 1e-10));
                    first_error(&slot, inner).map(|q| q.value).unwrap_or(f64::NAN)
                },
                -extent,
                extent,
                Tol::new(1e-300, 1e-9),
            );
            if let Some(e) = slot.into_inner().expect("error slot") {
                return Err(e);
            }
            let q = q?;
            let factor = sphere_area(nu - 2);
            (factor * q.value, factor * q.abs_err)
        }
    };
    Ok(NormReport::new(Functional::Lp, Some(p), value, err))
}

fn check_extent(extent: f64) -> Result<()> {
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::invalid(format!("extent must be positive and finite, got {extent}")));
    }
    Ok(())
}

fn check_reduced(nu: u32, extent: f64) -> Result<()> {
    if nu < 2 {
        return Err(Error::invalid("functions of (x₁, |x′|) need nu >= 2"));
    }
    check_extent(extent)
}

/// A maximum over the polar angle, with a flag for whether the dense samples
/// showed a single dominant peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularSup {
    pub value: f64,
    pub theta: f64,
    pub unimodal: bool,
}

fn polar<'a>(target: &NormTarget<'a>) -> Option<(Box<dyn Fn(f64, f64) -> f64 + Sync + 'a>, f64, f64)> {
    // (f(x₁, s), θ range, multiplicity of the range)
    match *target {
        NormTarget::Ij(p) => Some((Box::new(move |x1, s| p.potential(ReducedPoint::new(x1, s))), PI / 2.0, 2.0)),
        NormTarget::Reduced { f, .. } => Some((Box::new(f), PI, 1.0)),
        _ => None,
    }
}

fn radial_value(target: &NormTarget, r: f64) -> Result<f64> {
    Ok(match *target {
        NormTarget::Wvn(p) => p.potential(r)?.abs(),
        NormTarget::Profile(p) => p.value(r),
        NormTarget::Radial { f, extent, .. } => {
            if r <= extent {
                f(r).abs()
            } else {
                0.0
            }
        }
        _ => unreachable!("radial_value on a non-radial target"),
    })
}

/// (∫_{𝕊^{ν−1}} |f(rω)|² dω)^{1/2}.
pub fn angular_l2(target: &NormTarget, r: f64) -> Result<f64> {
    let nu = target.nu();
    let Some((f, theta_max, mult)) = polar(target) else {
        return Ok(sphere_area(nu - 1).sqrt() * radial_value(target, r)?);
    };
    let k = nu as i32 - 2;
    // Breaks where x₁ = r cos θ crosses multiples of π/2, to follow oscillations in x₁.
    let mut breaks: Vec<f64> = (1..=(2.0 * r / PI).floor() as usize)
        .map(|j| (j as f64 * PI / (2.0 * r)).min(1.0).acos())
        .collect();
    if theta_max > PI / 2.0 {
        let mirrored: Vec<f64> = breaks.iter().map(|t| PI - t).collect();
        breaks.extend(mirrored);
    }
    let q = adaptive_with_breaks(
        |t| {
            let (s, c) = t.sin_cos();
            f(r * c, r * s).powi(2) * s.powi(k)
        },
        0.0,
        theta_max,
        &breaks,
        Tol {
            abs: 1e-300,
            rel: 1e-10,
            max_panels: breaks.len() + 4000,
        },
    )?;
    Ok((mult * sphere_area(nu - 2) * q.value).sqrt())
}

/// sup_{ω ∈ 𝕊^{ν−1}} |f(rω)| by dense sampling of the polar angle followed by a
/// golden-section refinement around the best sample.
pub fn angular_sup(target: &NormTarget, r: f64, dense: usize) -> Result<AngularSup> {
    let Some((f, theta_max, _)) = polar(target) else {
        return Ok(AngularSup {
            value: radial_value(target, r)?,
            theta: 0.0,
            unimodal: true,
        });
    };
    let g = |t: f64| {
        let (s, c) = t.sin_cos();
        f(r * c, r * s).abs()
    };
    let count = dense.max(256).max((8.0 * r).ceil() as usize);
    let samples: Vec<f64> = (0..count).map(|i| g(theta_max * i as f64 / (count - 1) as f64)).collect();
    let (best, top) = samples
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let peaks = (0..count)
        .filter(|&i| {
            let left = if i == 0 { f64::NEG_INFINITY } else { samples[i - 1] };
            let right = samples.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
            samples[i] >= 0.5 * top && samples[i] > left && samples[i] >= right
        })
        .count();
    let step = theta_max / (count - 1) as f64;
    let lo = (best as f64 - 1.0).max(0.0) * step;
    let hi = ((best + 1) as f64 * step).min(theta_max);
    let (theta, value) = golden_max(g, lo, hi, 60);
    let (theta, value) = if value >= top {
        (theta, value)
    } else {
        (best as f64 * step, top)
    };
    Ok(AngularSup {
        value,
        theta,
        unimodal: peaks <= 1,
    })
}

/// ∫₀^∞ N(r)^p r^{ν−1} dr with N the L² or L^∞ norm of V(r·) over the sphere.
pub fn mixed_norm(target: NormTarget, p: f64, inner: Inner) -> Result<NormReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be a finite positive number, got {p}")));
    }
    let nu = target.nu();
    let functional = match inner {
        Inner::L2Sphere => Functional::MixedL2,
        Inner::LinfSphere => Functional::MixedLinf,
    };
    // Radial targets: the inner norm of a constant on the sphere.
    let radial_scale = match inner {
        Inner::L2Sphere => sphere_area(nu - 1).powf(p / 2.0),
        Inner::LinfSphere => 1.0,
    };
    match target {
        NormTarget::Profile(_) | NormTarget::Wvn(_) | NormTarget::Radial { .. } => {
            let full = lp_fullspace(target, p)?;
            let s = radial_scale / sphere_area(nu - 1);
            return Ok(NormReport::new(functional, Some(p), s * full.value, s * full.abs_err));
        }
        _ => {}
    }
    let flat = AtomicUsize::new(0);
    let slot = std::sync::Mutex::new(None);
    let inner_norm = |r: f64| -> f64 {
        let v = match inner {
            Inner::L2Sphere => angular_l2(&target, r),
            Inner::LinfSphere => angular_sup(&target, r, 256).map(|a| {
                if !a.unimodal {
                    flat.fetch_add(1, Ordering::Relaxed);
                }
                a.value
            }),
        };
        first_error(&slot, v).unwrap_or(f64::NAN)
    };
    let weight = |r: f64| r.powi(nu as i32 - 1);
    let result = match target {
        NormTarget::Ij(pot) => {
            let nu_f = nu as f64;
            let beta = match inner {
                Inner::L2Sphere => p * (1.0 + (nu_f - 1.0) / 4.0) - (nu_f - 1.0),
                Inner::LinfSphere => p - (nu_f - 1.0),
            };
            if beta <= 1.0 {
                return Err(Error::diverges(format!(
                    "mixed norm of the IJ family with {inner:?} inner norm diverges at p = {p}, ν = {nu}"
                )));
            }
            integrate_with_power_tail(
                |r| inner_norm(r).powf(p) * weight(r),
                0.0,
                far_cut(pot.n),
                PI,
                beta,
                block_tol(),
            )
            .map(|t| (t.value, t.abs_err))
        }
        NormTarget::Reduced { extent, .. } => {
            check_reduced(nu, extent)?;
            adaptive(|r| inner_norm(r).powf(p) * weight(r), 0.0, extent, Tol::new(1e-300, 1e-9)).map(|q| (q.value, q.abs_err))
        }
        _ => unreachable!(),
    };
    if let Some(e) = slot.into_inner().expect("error slot") {
        return Err(e);
    }
    let (value, err) = result?;
    let mut report = NormReport::new(functional, Some(p), value, err);
    let flat = flat.into_inner();
    if flat > 0 {
        report.warnings.push(format!(
            "angular objective not unimodal at {flat} radii; used dense sampling with local refinement"
        ));
    }
    Ok(report)
}

/// Which family a decay study runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayFamily {
    Ij,
    Wvn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySlope {
    pub family: DecayFamily,
    pub nu: u32,
    pub p: f64,
    pub alpha: f64,
    /// (n, ‖V_n‖_p) pairs.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// −1 + (ν+1)/(2p) for IJ, −1 + ν/p for WvN.
    pub expected: f64,
}

pub fn expected_decay_slope(family: DecayFamily, nu: u32, p: f64) -> f64 {
    match family {
        DecayFamily::Ij => -1.0 + (nu as f64 + 1.0) / (2.0 * p),
        DecayFamily::Wvn => -1.0 + nu as f64 / p,
    }
}

/// Least-squares slope of log ‖V_n‖_p against log n.
pub fn decay_slope(family: DecayFamily, nu: u32, alpha: Option<f64>, p: f64, ns: &[f64]) -> Result<DecaySlope> {
    if ns.len() < 2 {
        return Err(Error::invalid("decay slope needs at least two values of n"));
    }
    let mut points = Vec::with_capacity(ns.len());
    let mut used_alpha = 0.0;
    for &n in ns {
        let report = match family {
            DecayFamily::Ij => {
                let pot = match alpha {
                    Some(a) => IjPotential::new(nu, n, a)?,
                    None => IjPotential::with_default_alpha(nu, n)?,
                };
                used_alpha = pot.alpha;
                lp_fullspace(NormTarget::Ij(&pot), p)?
            }
            DecayFamily::Wvn => {
                let pot = match alpha {
                    Some(a) => WvnPotential::new(nu, n, a)?,
                    None => WvnPotential::with_default_alpha(nu, n)?,
                };
                used_alpha = pot.alpha;
                lp_fullspace(NormTarget::Wvn(&pot), p)?
            }
        };
        points.push((n, report.value.powf(1.0 / p)));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(DecaySlope {
        family,
        nu,
        p,
        alpha: used_alpha,
        points,
        slope,
        intercept: my - slope * mx,
        expected: expected_decay_slope(family, nu, p),
    })
}
