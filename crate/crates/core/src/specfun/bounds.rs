//! Five-region uniform envelopes for |J_μ| and |H⁽¹⁾_μ| (μ ≥ 1/2) and an
//! empirical certifier for the constant in front of them.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::bessel::{bessel_jy, Order};
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA0: f64 = 0.4;

/// The WKB phase φ_μ(r) = arccosh(μ/r) − √(1 − (r/μ)²) for 0 < r ≤ μ.
///
/// With r = μ sech α this is α − tanh α.
pub fn phase_phi(mu: Order, r: f64) -> Result<f64> {
    let mu = mu.value();
    if !(r > 0.0) || r > mu {
        return Err(Error::invalid(format!("phase needs 0 < r <= mu, got r={r}, mu={mu}")));
    }
    if r == mu {
        return Ok(0.0);
    }
    // arccosh(1 + δ) = ln(1 + δ + √(δ(2 + δ))) with δ = (μ − r)/r.
    let delta = (mu - r) / r;
    let alpha = (delta + (delta * (2.0 + delta)).sqrt()).ln_1p();
    if alpha < 0.1 {
        // α − tanh α by its Taylor series, avoiding the cancellation.
        let a2 = alpha * alpha;
        let poly = 1.0 / 3.0
            + a2 * (-2.0 / 15.0 + a2 * (17.0 / 315.0 + a2 * (-62.0 / 2835.0 + a2 * (1382.0 / 155_925.0))));
        return Ok(alpha * a2 * poly);
    }
    let s = r / mu;
    let tanh = ((1.0 - s) * (1.0 + s)).sqrt();
    Ok(alpha - tanh)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    SmallArg,
    OscillBelow,
    TransitionBelow,
    Turning,
    Above,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::SmallArg,
        Region::OscillBelow,
        Region::TransitionBelow,
        Region::Turning,
        Region::Above,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Region::SmallArg => "SMALL_ARG",
            Region::OscillBelow => "OSCILL_BELOW",
            Region::TransitionBelow => "TRANSITION_BELOW",
            Region::Turning => "TURNING",
            Region::Above => "ABOVE",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    J,
    H1,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::J => "J",
            Kind::H1 => "H1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRegion {
    pub tag: Region,
    pub mu: Order,
    pub alpha0: f64,
}

fn check_params(mu: Order, alpha0: f64) -> Result<()> {
    if mu.value() < 0.5 {
        return Err(Error::invalid(format!("region bounds need mu >= 1/2, got {mu}")));
    }
    if !(alpha0 > 0.0 && alpha0 < 0.5) {
        return Err(Error::invalid(format!("alpha0 must lie in (0, 1/2), got {alpha0}")));
    }
    Ok(())
}

/// Right endpoints of the first four regions, made monotone.
///
/// For small μ the raw points μ sech α₀, μ − μ^{1/3}, μ + μ^{1/3} need not be
/// ordered or exceed 1; each is lifted to at least its predecessor, so some
/// middle regions may be empty. Every region stays inside the range where its
/// bound is valid.
pub fn region_cuts(mu: Order, alpha0: f64) -> Result<[f64; 4]> {
    check_params(mu, alpha0)?;
    let m = mu.value();
    let m3 = m.cbrt();
    let mut c = [1.0, m / alpha0.cosh(), m - m3, m + m3];
    for i in 1..4 {
        c[i] = c[i].max(c[i - 1]);
    }
    Ok(c)
}

/// The region containing r; each region is closed on the right.
pub fn classify_region(mu: Order, r: f64, alpha0: f64) -> Result<BoundRegion> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be finite and > 0, got {r}")));
    }
    let cuts = region_cuts(mu, alpha0)?;
    let idx = cuts.iter().position(|&c| r <= c).unwrap_or(4);
    Ok(BoundRegion {
        tag: Region::ALL[idx],
        mu,
        alpha0,
    })
}

/// The interval (lo, hi] covered by a region; hi is infinite for ABOVE.
pub fn region_interval(region: &BoundRegion) -> Result<(f64, f64)> {
    let cuts = region_cuts(region.mu, region.alpha0)?;
    let i = Region::ALL.iter().position(|&t| t == region.tag).unwrap();
    let lo = if i == 0 { 0.0 } else { cuts[i - 1] };
    let hi = if i == 4 { f64::INFINITY } else { cuts[i] };
    Ok((lo, hi))
}

/// The region's bound expression for |J_μ(r)| or |H⁽¹⁾_μ(r)|, without the
/// multiplicative constant.
pub fn envelope(region: &BoundRegion, r: f64, kind: Kind) -> Result<f64> {
    let here = classify_region(region.mu, r, region.alpha0)?;
    if here.tag != region.tag {
        return Err(Error::invalid(format!(
            "r={r} lies in {} not {} for mu={}",
            here.tag, region.tag, region.mu
        )));
    }
    envelope_unchecked(region, r, kind)
}

fn envelope_unchecked(region: &BoundRegion, r: f64, kind: Kind) -> Result<f64> {
    let mu = region.mu.value();
    let sign = match kind {
        Kind::J => -1.0,
        Kind::H1 => 1.0,
    };
    let v = match region.tag {
        Region::SmallArg => {
            let l = mu * (0.5 * r).ln();
            match kind {
                Kind::J => (l - ln_gamma(mu + 1.0)).exp(),
                Kind::H1 => (ln_gamma(mu) - l).exp(),
            }
        }
        Region::OscillBelow => (sign * mu * phase_phi(region.mu, r)?).exp() / mu.sqrt(),
        Region::TransitionBelow => {
            (sign * mu * phase_phi(region.mu, r)?).exp() / (mu * (mu - r)).powf(0.25)
        }
        Region::Turning => mu.powf(-1.0 / 3.0),
        Region::Above => (r * (r - mu)).powf(-0.25),
    };
    Ok(v)
}

/// Largest observed |f|/envelope for one region and function kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertRow {
    pub region: Region,
    pub kind: Kind,
    pub constant: f64,
    pub argmax_mu: f64,
    pub argmax_r: f64,
    pub samples: usize,
}

/// The full range on which a region's bound is asserted, before the overlaps
/// between neighbouring ranges are resolved into a partition. Ranges other
/// than the first start at r = 1.
pub fn region_validity_range(region: &BoundRegion) -> Result<(f64, f64)> {
    check_params(region.mu, region.alpha0)?;
    let m = region.mu.value();
    let m3 = m.cbrt();
    let s = m / region.alpha0.cosh();
    let (lo, hi) = match region.tag {
        Region::SmallArg => (0.0, 1.0),
        Region::OscillBelow => (1.0, s),
        Region::TransitionBelow => (s, m - m3),
        Region::Turning => (m - m3, m + m3),
        Region::Above => (m + m3, f64::INFINITY),
    };
    if region.tag == Region::SmallArg {
        Ok((lo, hi))
    } else {
        Ok((lo.max(1.0), hi.max(1.0)))
    }
}

/// Sample points strictly inside (lo, hi]; the unbounded last region is
/// sampled out to 100·max(μ, 1) past its left end.
fn region_samples(lo: f64, hi: f64, mu: f64, n: usize) -> Vec<f64> {
    if n == 0 || hi <= lo {
        return Vec::new();
    }
    let (a, b, geometric) = if lo == 0.0 {
        (hi * 1e-3, hi, true)
    } else if hi.is_infinite() {
        (lo, lo + 100.0 * mu.max(1.0), true)
    } else {
        (lo, hi, false)
    };
    (1..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            if geometric {
                a * (b / a).powf(t)
            } else {
                a + (b - a) * t
            }
        })
        .collect()
}

/// Empirical constants for every (region, kind) over the given orders. Each
/// region is sampled over its whole validity range, so neighbouring ranges
/// may overlap for small μ.
pub fn certify_bounds(mu_grid: &[Order], samples_per_region: usize, alpha0: f64) -> Result<Vec<CertRow>> {
    if mu_grid.is_empty() || samples_per_region == 0 {
        return Err(Error::invalid("certifier needs at least one order and one sample"));
    }
    let mut rows: Vec<CertRow> = Region::ALL
        .iter()
        .flat_map(|&region| {
            [Kind::J, Kind::H1].map(|kind| CertRow {
                region,
                kind,
                constant: 0.0,
                argmax_mu: f64::NAN,
                argmax_r: f64::NAN,
                samples: 0,
            })
        })
        .collect();
    for &mu in mu_grid {
        check_params(mu, alpha0)?;
        for (ri, &tag) in Region::ALL.iter().enumerate() {
            let region = BoundRegion { tag, mu, alpha0 };
            let (lo, hi) = region_validity_range(&region)?;
            for r in region_samples(lo, hi, mu.value(), samples_per_region) {
                let v = bessel_jy(mu, r)?;
                for (ki, kind) in [Kind::J, Kind::H1].into_iter().enumerate() {
                    let f = match kind {
                        Kind::J => v.j.abs(),
                        Kind::H1 => v.j.hypot(v.y),
                    };
                    let ratio = f / envelope_unchecked(&region, r, kind)?;
                    let row = &mut rows[2 * ri + ki];
                    row.samples += 1;
                    if ratio > row.constant {
                        row.constant = ratio;
                        row.argmax_mu = mu.value();
                        row.argmax_r = r;
                    }
                }
            }
        }
    }
    Ok(rows)
}
