use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Surface area of the unit sphere 𝕊^k ⊂ ℝ^{k+1} (|𝕊⁰| = 2).
pub fn sphere_area(k: u32) -> f64 {
    let d = k as f64 + 1.0;
    2.0 * std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0)
}

/// How a profile is read between its samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interp {
    /// Linear between neighbouring samples.
    #[default]
    Linear,
    /// v(r) = v_i on (r_{i−1}, r_i]; exact for indicator functions whose
    /// jumps sit on grid points.
    Step,
}

/// The sup over the sphere of |V(rω)| sampled on an increasing radial grid.
///
/// Below the first sample the profile is constant; beyond the last it is
/// continued by the power law c·r^{tail_exponent} through the last sample
/// (zero if the last sample is zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    r: Vec<f64>,
    v: Vec<f64>,
    nu: u32,
    tail_exponent: f64,
    interp: Interp,
}

impl RadialProfile {
    pub fn new(r: Vec<f64>, v: Vec<f64>, nu: u32, tail_exponent: f64) -> Result<Self> {
        Self::with_interp(r, v, nu, tail_exponent, Interp::Linear)
    }

    pub fn with_interp(r: Vec<f64>, v: Vec<f64>, nu: u32, tail_exponent: f64, interp: Interp) -> Result<Self> {
        if r.is_empty() || r.len() != v.len() {
            return Err(Error::invalid(format!(
                "profile needs matching non-empty grids (got {} radii, {} values)",
                r.len(),
                v.len()
            )));
        }
        if nu < 1 {
            return Err(Error::invalid("profile dimension must be >= 1"));
        }
        if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) || r.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("profile radii must be positive, finite and strictly increasing"));
        }
        if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::invalid("profile values must be finite and non-negative"));
        }
        if !tail_exponent.is_finite() {
            return Err(Error::invalid("tail exponent must be finite"));
        }
        Ok(Self {
            r,
            v,
            nu,
            tail_exponent,
            interp,
        })
    }

    /// Samples |f| on `per_decade` log-spaced points per decade of [r_min, r_max].
    pub fn sample<F: Fn(f64) -> f64>(
        f: F,
        r_min: f64,
        r_max: f64,
        per_decade: usize,
        nu: u32,
        tail_exponent: f64,
    ) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) || per_decade == 0 {
            return Err(Error::invalid(format!("bad sampling range [{r_min}, {r_max}]")));
        }
        let decades = (r_max / r_min).log10();
        let count = ((decades * per_decade as f64).ceil() as usize).max(1) + 1;
        let r: Vec<f64> = (0..count)
            .map(|i| r_min * (r_max / r_min).powf(i as f64 / (count - 1) as f64))
            .collect();
        let v = r.iter().map(|&x| f(x).abs()).collect();
        Self::new(r, v, nu, tail_exponent)
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().expect("non-empty")
    }

    /// Amplitude c of the tail c·r^{tail_exponent}.
    pub fn tail_amplitude(&self) -> f64 {
        let v = *self.v.last().expect("non-empty");
        v * self.r_max().powf(-self.tail_exponent)
    }

    pub fn has_tail(&self) -> bool {
        self.tail_amplitude() > 0.0
    }

    pub fn max_value(&self) -> f64 {
        self.v.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// The profile of r ↦ v(λr).
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("scale must be positive, got {lambda}")));
        }
        Self::with_interp(
            self.r.iter().map(|r| r / lambda).collect(),
            self.v.clone(),
            self.nu,
            self.tail_exponent,
            self.interp,
        )
    }

    /// The profile with every value multiplied by `factor` ≥ 0.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_interp(
            self.r.clone(),
            self.v.iter().map(|v| v * factor).collect(),
            self.nu,
            self.tail_exponent,
            self.interp,
        )
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.r[0] {
            return self.v[0];
        }
        if r > self.r_max() {
            let c = self.tail_amplitude();
            return if c > 0.0 { c * r.powf(self.tail_exponent) } else { 0.0 };
        }
        let i = self.r.partition_point(|&x| x < r);
        match self.interp {
            Interp::Step => self.v[i],
            Interp::Linear => {
                let (a, b) = (self.r[i - 1], self.r[i]);
                let t = (r - a) / (b - a);
                self.v[i - 1] + t * (self.v[i] - self.v[i - 1])
            }
        }
    }

    /// Grid cells (a, b, v_a, v_b), starting with the constant cell (0, r₀].
    pub(crate) fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        let first = std::iter::once((0.0, self.r[0], self.v[0], self.v[0]));
        first.chain(self.r.windows(2).zip(self.v.windows(2)).map(move |(r, v)| match self.interp {
            Interp::Linear => (r[0], r[1], v[0], v[1]),
            Interp::Step => (r[0], r[1], v[1], v[1]),
        }))
    }

    /// Measure of the shell a < |x| < b in ℝ^ν.
    pub fn shell_measure(&self, a: f64, b: f64) -> f64 {
        let nu = self.nu as f64;
        sphere_area(self.nu - 1) / nu * (b.powf(nu) - a.powf(nu))
    }

    /// |{x ∈ ℝ^ν : v(|x|) > τ}|; infinite for τ = 0 when the tail is non-zero.
    pub fn distribution(&self, tau: f64) -> f64 {
        let mut m = 0.0;
        for (a, b, va, vb) in self.cells() {
            if va > tau && vb > tau {
                m += self.shell_measure(a, b);
            } else if va > tau || vb > tau {
                let x = a + (tau - va) * (b - a) / (vb - va);
                m += if va > tau {
                    self.shell_measure(a, x)
                } else {
                    self.shell_measure(x, b)
                };
            }
        }
        let c = self.tail_amplitude();
        if c > 0.0 {
            if tau <= 0.0 {
                return f64::INFINITY;
            }
            let edge = (tau / c).powf(1.0 / self.tail_exponent);
            if edge > self.r_max() && self.tail_exponent < 0.0 {
                m += self.shell_measure(self.r_max(), edge);
            } else if self.tail_exponent >= 0.0 {
                return f64::INFINITY;
            }
        }
        m
    }
}

/// A reproducible corpus of positive, non-monotone profiles decaying like
/// r^{−γ} with γ ∈ [1.5, 3.5], on 40 points per decade of [10⁻², 10²].
pub fn profile_corpus(seed: u64, count: usize) -> Vec<RadialProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nu = rng.gen_range(2..=4);
            let gamma: f64 = rng.gen_range(1.5..3.5);
            let core: f64 = rng.gen_range(0.3..3.0);
            let amp: f64 = rng.gen_range(0.5..5.0);
            let wiggle: f64 = rng.gen_range(0.0..0.8);
            let freq: f64 = rng.gen_range(1.0..6.0);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let bump_at: f64 = 10f64.powf(rng.gen_range(-1.0..1.5));
            let bump: f64 = rng.gen_range(0.0..2.0);
            let f = |r: f64| {
                let base = amp * (1.0 + r / core).powf(-gamma) * (1.0 + wiggle * (freq * r.ln() + phase).sin());
                let b = bump * amp * (1.0 + bump_at / core).powf(-gamma) * (-(r / bump_at - 1.0).powi(2) * 20.0).exp();
                base + b
            };
            RadialProfile::sample(f, 1e-2, 1e2, 40, nu, -gamma).expect("valid corpus profile")
        })
        .collect()
}
