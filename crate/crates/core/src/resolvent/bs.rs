//! Nyström discretisation of the Birman–Schwinger operator
//! sgn V·|V|^{1/2}(h_l − z)^{-1}|V|^{1/2} in one angular-momentum channel.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{combine, kernel_factors, ChannelIndex, Energy, KernelSpec};
use crate::error::{Error, Result};
use crate::norms::RadialProfile;
use crate::quad::gauss_legendre;

pub const DEFAULT_SEED: u64 = 0x5eed_b1a5;

/// Composite Gauss–Legendre nodes with plain dr weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub max_panel: f64,
}

impl BsGrid {
    /// Panels between consecutive `edges`.
    pub fn from_edges(edges: &[f64], order: usize) -> Result<Self> {
        if edges.len() < 2 || order == 0 {
            return Err(Error::invalid("grid needs at least one panel and a positive order"));
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("panel edges must be finite, non-negative and increasing"));
        }
        let rule = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * (edges.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let (c, h) = ((w[0] + w[1]) / 2.0, (w[1] - w[0]) / 2.0);
            for (t, wt) in rule.0.iter().zip(&rule.1) {
                nodes.push(c + h * t);
                weights.push(h * wt);
            }
        }
        let max_panel = edges.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        Ok(Self {
            nodes,
            weights,
            order,
            max_panel,
        })
    }

    /// `panels` equal panels on [a, b].
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 || !(b > a) {
            return Err(Error::invalid(format!("bad uniform grid [{a}, {b}] with {panels} panels")));
        }
        let edges: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        Self::from_edges(&edges, order)
    }

    /// Panels on [0, r_max] fine enough for `nodes_per_length` nodes per
    /// wavelength 2π/k and per potential length scale.
    pub fn resolving(r_max: f64, k: f64, scale: f64, nodes_per_length: f64, order: usize) -> Result<Self> {
        if !(r_max > 0.0 && k > 0.0 && scale > 0.0 && nodes_per_length > 0.0) {
            return Err(Error::invalid("resolving grid needs positive r_max, k, scale and density"));
        }
        let width = (2.0 * PI / k).min(scale) * order as f64 / nodes_per_length;
        let panels = (r_max / width).ceil().max(1.0) as usize;
        Self::uniform(0.0, r_max, panels, order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature nodes per wavelength 2π/k on the coarsest panel.
    pub fn nodes_per_wavelength(&self, k: f64) -> f64 {
        self.order as f64 * (2.0 * PI / k) / self.max_panel
    }
}

/// The potential entering a Birman–Schwinger matrix.
#[derive(Clone, Copy)]
pub enum BsPotential<'a> {
    /// A non-negative profile times a fixed sign (or phase).
    Profile {
        profile: &'a RadialProfile,
        phase: Complex64,
    },
    Callable(&'a (dyn Fn(f64) -> Complex64 + Sync)),
}

impl BsPotential<'_> {
    pub fn at(&self, r: f64) -> Complex64 {
        match self {
            BsPotential::Profile { profile, phase } => phase * profile.value(r),
            BsPotential::Callable(f) => f(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsMatrix {
    pub spec: KernelSpec,
    pub nodes: Vec<f64>,
    /// Weights against r^{ν−1}dr.
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub potential: Vec<Complex64>,
    /// M_ij = sgn V(r_i)·|V(r_i)|^{1/2} K(r_i, r_j) |V(r_j)|^{1/2} w_j.
    #[serde(skip)]
    pub entries: DMatrix<Complex64>,
}

impl BsMatrix {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// W^{1/2} M W^{-1/2}: the same operator represented in the weighted ℓ²
    /// that discretises L²(r^{ν−1}dr), so its singular values approximate
    /// those of the integral operator.
    pub fn symmetrized(&self) -> DMatrix<Complex64> {
        let sw: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.entries[(i, j)] * (sw[i] / sw[j]))
    }
}

fn phase_of(v: Complex64) -> Complex64 {
    let a = v.norm();
    if a == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        v / a
    }
}

pub fn bs_matrix(v: BsPotential, spec: KernelSpec, grid: &BsGrid) -> Result<BsMatrix> {
    let nu = spec.channel.nu;
    let potential: Vec<Complex64> = grid.nodes.iter().map(|&r| v.at(r)).collect();
    if potential.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("potential samples must be finite"));
    }
    if let Energy::PositiveLimit(_) = spec.energy {
        let k = spec.energy.wavenumber();
        let support: Vec<usize> = (0..grid.len()).filter(|&i| potential[i].norm() > 0.0).collect();
        if !support.is_empty() && grid.nodes_per_wavelength(k) < 10.0 {
            return Err(Error::GridResolution(format!(
                "{:.2} nodes per wavelength 2π/k = {:.4} over the support of V; need at least 10",
                grid.nodes_per_wavelength(k),
                2.0 * PI / k
            )));
        }
    }
    let weights: Vec<f64> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(r, w)| w * r.powi(nu as i32 - 1))
        .collect();
    let n = grid.len();
    let factors = grid
        .nodes
        .par_iter()
        .map(|&r| kernel_factors(&spec, r))
        .collect::<Result<Vec<_>>>()?;
    let root: Vec<f64> = potential.iter().map(|z| z.norm().sqrt()).collect();
    let sign: Vec<Complex64> = potential.iter().map(|&z| phase_of(z)).collect();
    let cols: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            (0..n)
                .map(|i| {
                    if root[i] == 0.0 || root[j] == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let k = combine(&spec, grid.nodes[i], &factors[i], grid.nodes[j], &factors[j]);
                    sign[i] * root[i] * k * root[j] * weights[j]
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Overflow("Birman–Schwinger matrix has non-finite entries".into()));
    }
    Ok(BsMatrix {
        spec,
        nodes: grid.nodes.clone(),
        weights,
        potential,
        entries,
    })
}

/// Largest singular value by power iteration on M*M from a seeded random start.
pub fn op_norm(m: &DMatrix<Complex64>, tol: f64) -> Result<f64> {
    op_norm_seeded(m, tol, DEFAULT_SEED)
}

pub fn op_norm_seeded(m: &DMatrix<Complex64>, tol: f64, seed: u64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("matrix entries must be finite"));
    }
    let n = m.ncols();
    if n == 0 || m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(n, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    v /= Complex64::new(v.norm(), 0.0);
    let adj = m.adjoint();
    let mut theta = 0.0;
    for _ in 0..50_000 {
        let w = &adj * (m * &v);
        theta = v.dotc(&w).re;
        let resid = (&w - &v * Complex64::new(theta, 0.0)).norm();
        let wn = w.norm();
        if wn == 0.0 {
            return Ok(0.0);
        }
        if resid <= tol * theta {
            return Ok(theta.sqrt());
        }
        v = w / Complex64::new(wn, 0.0);
    }
    Err(Error::NoConvergence {
        what: "power iteration for the largest singular value".into(),
        last: theta.max(0.0).sqrt(),
    })
}

/// How the scan discretises each (λ, l) problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub r_max: f64,
    /// Length scale of the potential (e.g. the period of its oscillation).
    pub scale: f64,
    pub nodes_per_length: f64,
    pub order: usize,
    /// Start-vector seed for the power iterations.
    pub seed: u64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            r_max: 100.0,
            scale: PI,
            nodes_per_length: 12.0,
            order: 4,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsRow {
    pub lambda: f64,
    pub l: u32,
    pub sigma_max: f64,
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsScan {
    pub nu: u32,
    pub rows: Vec<BsRow>,
    /// λ at which sup_l σ_max ≥ 1.
    pub crossings: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Where |V(r)|·r^{ν−1} last exceeds 1e-10 of its maximum on [0, r_max].
pub fn support_radius(v: BsPotential, nu: u32, r_max: f64) -> f64 {
    let samples = 20_000;
    let vals: Vec<(f64, f64)> = (1..=samples)
        .map(|i| {
            let r = r_max * i as f64 / samples as f64;
            (r, v.at(r).norm() * r.powi(nu as i32 - 1))
        })
        .collect();
    let top = vals.iter().map(|x| x.1).fold(0.0, f64::max);
    vals.iter()
        .rev()
        .find(|x| x.1 >= 1e-10 * top)
        .map(|x| (x.0 + r_max / samples as f64).min(r_max))
        .unwrap_or(r_max)
}

/// σ_max of the channel Birman–Schwinger matrix at z = λ + i0 for each λ and
/// l = 0, 1, …, stopping a λ once two consecutive channels fall below half
/// of the l = 0 value (or at l_max, with a warning).
pub fn bs_scan(v: BsPotential, nu: u32, lambdas: &[f64], l_max: u32, grid: ScanGrid, tol: f64) -> Result<BsScan> {
    if lambdas.is_empty() {
        return Err(Error::invalid("no energies to scan"));
    }
    let r_end = support_radius(v, nu, grid.r_max);
    let per_lambda: Vec<(Vec<BsRow>, bool)> = lambdas
        .par_iter()
        .map(|&lambda| -> Result<(Vec<BsRow>, bool)> {
            let energy = Energy::PositiveLimit(lambda);
            let g = BsGrid::resolving(r_end, energy.wavenumber(), grid.scale, grid.nodes_per_length, grid.order)?;
            let mut rows = Vec::new();
            let mut small_run = 0;
            let mut sigma0 = 0.0;
            for l in 0..=l_max {
                let spec = KernelSpec::new(ChannelIndex::new(l, nu)?, energy)?;
                let m = bs_matrix(v, spec, &g)?;
                let sigma = op_norm_seeded(&m.symmetrized(), tol, grid.seed)?;
                if l == 0 {
                    sigma0 = sigma;
                }
                rows.push(BsRow {
                    lambda,
                    l,
                    sigma_max: sigma,
                    flag: sigma >= 1.0,
                });
                if l > 0 && sigma < 0.5 * sigma0 {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
                if small_run == 2 {
                    return Ok((rows, true));
                }
            }
            Ok((rows, false))
        })
        .collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    let unmet: Vec<f64> = lambdas
        .iter()
        .zip(&per_lambda)
        .filter(|(_, p)| !p.1)
        .map(|(l, _)| *l)
        .collect();
    if !unmet.is_empty() {
        warnings.push(format!(
            "l-truncation criterion unmet at l_max = {l_max} for {} energies (first λ = {})",
            unmet.len(),
            unmet[0]
        ));
    }
    let crossings = lambdas
        .iter()
        .zip(&per_lambda)
        .filter(|(_, p)| p.0.iter().any(|r| r.flag))
        .map(|(l, _)| *l)
        .collect();
    Ok(BsScan {
        nu,
        rows: per_lambda.into_iter().flat_map(|p| p.0).collect(),
        crossings,
        warnings,
    })
}
