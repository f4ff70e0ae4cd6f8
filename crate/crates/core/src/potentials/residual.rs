//! Finite-difference verification that ψ solves (−Δ + V)ψ = ψ.
//!
//! Second-order central differences on half-offset grids: radial grids use
//! r_i = (i + 1/2)h, so the origin is never a node and the ghost value at
//! −h/2 follows from evenness of ψ. The residual is reported relative to ψ,
//! which makes it invariant under rescaling of the eigenfunction.

use rayon::prelude::*;
use serde::Serialize;

use super::ij::{IjPotential, ReducedPoint};
use super::wvn::WvnPotential;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub h: f64,
    pub points: usize,
    /// max |residual| / max |ψ| over the grid.
    pub max_rel: f64,
    /// Weighted discrete L² norm of the residual relative to that of ψ.
    pub l2_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualCheck {
    pub coarse: Residual,
    pub fine: Residual,
    /// l2_rel(h) / l2_rel(h/2); close to 4 for a second-order scheme.
    pub ratio: f64,
    pub asymptotic: bool,
    pub warning: Option<String>,
}

pub const RATIO_WINDOW: (f64, f64) = (3.5, 4.5);

#[derive(Debug, Clone, Copy)]
pub enum Family<'a> {
    Ij(&'a IjPotential),
    Wvn(&'a WvnPotential),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GridSpec {
    /// |x₁| ≤ x1_max, 0 < s ≤ s_max (cylindrical reduction).
    Box { x1_max: f64, s_max: f64 },
    /// 0 < r ≤ r_max (for ν = 1: the line |x| ≤ r_max).
    Radial { r_max: f64 },
}

fn check_step(h: f64, extent: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("grid step must be > 0, got {h}")));
    }
    if !(extent >= 2.0 * h) {
        return Err(Error::invalid(format!("grid extent {extent} is too small for step {h}")));
    }
    Ok(())
}

fn eval_all<F>(xs: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

fn finish(h: f64, res: &[f64], psi: &[f64], weight: &[f64]) -> Residual {
    let num: f64 = res.iter().zip(weight).map(|(r, w)| r * r * w).sum();
    let den: f64 = psi.iter().zip(weight).map(|(p, w)| p * p * w).sum();
    let rmax = res.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    let pmax = psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    Residual {
        h,
        points: res.len(),
        max_rel: rmax / pmax,
        l2_rel: (num / den).sqrt(),
    }
}

/// Residual of −ψ'' − (ν−1)/r ψ' + (V − 1)ψ on r_i = (i + 1/2)h ≤ r_max.
/// `psi` must be even in r (it is called at −h/2 for the ghost node).
pub fn radial_residual<P, V>(nu: u32, psi: P, v: V, r_max: f64, h: f64) -> Result<Residual>
where
    P: Fn(f64) -> Result<f64> + Sync,
    V: Fn(f64) -> Result<f64> + Sync,
{
    check_step(h, r_max)?;
    let n = (r_max / h - 0.5).floor() as usize + 1;
    // Nodes k = −1..=n, i.e. r = (k + 1/2)h.
    let rs: Vec<f64> = (0..n + 2).map(|k| (k as f64 - 0.5) * h).collect();
    let p = eval_all(&rs, &psi)?;
    let vv = eval_all(&rs[1..=n], &v)?;
    let nu1 = nu as f64 - 1.0;
    let res: Vec<f64> = (1..=n)
        .map(|k| {
            let r = rs[k];
            let d2 = (p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h);
            let d1 = (p[k + 1] - p[k - 1]) / (2.0 * h);
            -d2 - nu1 / r * d1 + (vv[k - 1] - 1.0) * p[k]
        })
        .collect();
    let weight: Vec<f64> = rs[1..=n].iter().map(|r| r.powi(nu as i32 - 1)).collect();
    Ok(finish(h, &res, &p[1..=n], &weight))
}

/// Residual of −u'' + (V − 1)u on the nodes −x_max + ih of the line.
pub fn line_residual<P, V>(psi: P, v: V, x_max: f64, h: f64) -> Result<Residual>
where
    P: Fn(f64) -> Result<f64> + Sync,
    V: Fn(f64) -> Result<f64> + Sync,
{
    check_step(h, x_max)?;
    let n = (2.0 * x_max / h).floor() as usize + 1;
    let xs: Vec<f64> = (0..n + 2).map(|k| -x_max + (k as f64 - 1.0) * h).collect();
    let p = eval_all(&xs, &psi)?;
    let vv = eval_all(&xs[1..=n], &v)?;
    let res: Vec<f64> = (1..=n)
        .map(|k| -(p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h) + (vv[k - 1] - 1.0) * p[k])
        .collect();
    Ok(finish(h, &res, &p[1..=n], &vec![1.0; n]))
}

/// Residual of −∂²ψ/∂x₁² − ∂²ψ/∂s² − (ν−2)/s ∂ψ/∂s + (V − 1)ψ on the box
/// |x₁| ≤ x1_max, s_j = (j + 1/2)h ≤ s_max, weighted by s^{ν−2}.
/// `psi` must be even in s.
pub fn cylindrical_residual<P, V>(nu: u32, psi: P, v: V, x1_max: f64, s_max: f64, h: f64) -> Result<Residual>
where
    P: Fn(f64, f64) -> f64 + Sync,
    V: Fn(f64, f64) -> f64 + Sync,
{
    check_step(h, x1_max)?;
    check_step(h, s_max)?;
    let nx = (2.0 * x1_max / h).floor() as usize + 1;
    let ns = (s_max / h - 0.5).floor() as usize + 1;
    let x = |i: usize| -x1_max + (i as f64 - 1.0) * h;
    let s = |j: usize| (j as f64 - 0.5) * h;
    // ψ on (nx + 2) × (ns + 2) nodes including the ghost ring.
    let grid: Vec<Vec<f64>> = (0..nx + 2)
        .into_par_iter()
        .map(|i| (0..ns + 2).map(|j| psi(x(i), s(j).abs())).collect())
        .collect();
    let nu2 = nu as f64 - 2.0;
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (1..=nx)
        .into_par_iter()
        .map(|i| {
            let mut res = Vec::with_capacity(ns);
            let mut ps = Vec::with_capacity(ns);
            let mut ws = Vec::with_capacity(ns);
            for j in 1..=ns {
                let sj = s(j);
                let c = grid[i][j];
                let dxx = (grid[i + 1][j] - 2.0 * c + grid[i - 1][j]) / (h * h);
                let dss = (grid[i][j + 1] - 2.0 * c + grid[i][j - 1]) / (h * h);
                let ds = (grid[i][j + 1] - grid[i][j - 1]) / (2.0 * h);
                res.push(-dxx - dss - nu2 / sj * ds + (v(x(i), sj) - 1.0) * c);
                ps.push(c);
                ws.push(sj.powi(nu as i32 - 2));
            }
            (res, ps, ws)
        })
        .collect();
    let mut res = Vec::with_capacity(nx * ns);
    let mut ps = Vec::with_capacity(nx * ns);
    let mut ws = Vec::with_capacity(nx * ns);
    for (r, p, w) in rows {
        res.extend(r);
        ps.extend(p);
        ws.extend(w);
    }
    Ok(finish(h, &res, &ps, &ws))
}

fn family_residual(family: Family, grid: GridSpec, h: f64, scale: f64) -> Result<Residual> {
    match (family, grid) {
        (Family::Ij(p), GridSpec::Box { x1_max, s_max }) => cylindrical_residual(
            p.nu,
            |x1, s| scale * p.eigenfunction(ReducedPoint::new(x1, s)),
            |x1, s| p.potential(ReducedPoint::new(x1, s)),
            x1_max,
            s_max,
            h,
        ),
        (Family::Wvn(p), GridSpec::Radial { r_max }) if p.nu == 1 => line_residual(
            |x| Ok(scale * p.eigenfunction_line(x)?),
            |x| p.potential(x),
            r_max,
            h,
        ),
        (Family::Wvn(p), GridSpec::Radial { r_max }) => radial_residual(
            p.nu,
            |r| Ok(scale * p.eigenfunction(r)?),
            |r| p.potential(r),
            r_max,
            h,
        ),
        _ => Err(Error::invalid(
            "grid does not match the family (box for IJ, radial for WvN)",
        )),
    }
}

/// Residual of the family's eigenvalue equation on the grid with step h.
pub fn residual_grid(family: Family, grid: GridSpec, h: f64) -> Result<Residual> {
    family_residual(family, grid, h, 1.0)
}

/// As [`residual_grid`] with ψ multiplied by `scale`.
pub fn residual_grid_scaled(family: Family, grid: GridSpec, h: f64, scale: f64) -> Result<Residual> {
    family_residual(family, grid, h, scale)
}

/// Runs the grid at h and h/2 and checks for second-order convergence.
pub fn residual_ratio_test(family: Family, grid: GridSpec, h: f64) -> Result<ResidualCheck> {
    let coarse = residual_grid(family, grid, h)?;
    let fine = residual_grid(family, grid, h / 2.0)?;
    let ratio = coarse.l2_rel / fine.l2_rel;
    let asymptotic = ratio >= RATIO_WINDOW.0 && ratio <= RATIO_WINDOW.1;
    let warning = (!asymptotic).then(|| {
        format!(
            "grid too coarse: residual ratio {ratio:.3} between h={h} and h/2 is outside [{}, {}]",
            RATIO_WINDOW.0, RATIO_WINDOW.1
        )
    });
    Ok(ResidualCheck {
        coarse,
        fine,
        ratio,
        asymptotic,
        warning,
    })
}
