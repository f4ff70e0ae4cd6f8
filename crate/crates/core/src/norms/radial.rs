//! Functionals of a radial profile: Lorentz L^{ν,1}, the Mizohata–Takeuchi
//! norm, dyadic sums and weak-type quasinorms.

use rayon::prelude::*;
use statrs::function::beta::{beta, beta_reg};

use super::profile::{sphere_area, RadialProfile};
use super::{Functional, NormReport};
use crate::error::{Error, Result};
use crate::quad::{adaptive_with_breaks, Quad, Tol};

fn tol_for(breaks: usize) -> Tol {
    Tol {
        abs: 1e-15,
        rel: 1e-11,
        max_panels: breaks + 4000,
    }
}

fn require_tail_faster_than(profile: &RadialProfile, power: f64, what: &str) -> Result<()> {
    if profile.has_tail() && profile.tail_exponent() >= power {
        return Err(Error::diverges(format!(
            "{what} needs the tail exponent below {power}, got {}",
            profile.tail_exponent()
        )));
    }
    Ok(())
}

/// ∫₀^∞ v(r)^p r^w dr, integrating the grid piecewise and the power-law tail
/// in closed form.
pub fn power_integral(profile: &RadialProfile, p: f64, w: f64) -> Result<Quad> {
    if !(p > 0.0) {
        return Err(Error::invalid(format!("exponent p must be > 0, got {p}")));
    }
    if !(w > -1.0) {
        return Err(Error::diverges(format!("weight r^{w} is not integrable at 0")));
    }
    let te = profile.tail_exponent();
    let c = profile.tail_amplitude();
    if c > 0.0 && p * te + w >= -1.0 {
        return Err(Error::diverges(format!(
            "tail r^({p}·{te}) against r^{w} is not integrable (need p·tail + w < −1)"
        )));
    }
    let r = profile.radii();
    let v0 = profile.values()[0];
    let head = v0.powf(p) * r[0].powf(w + 1.0) / (w + 1.0);
    let body = adaptive_with_breaks(
        |x| profile.value(x).powf(p) * x.powf(w),
        r[0],
        profile.r_max(),
        r,
        tol_for(r.len()),
    )?;
    let tail = if c > 0.0 {
        let a = p * te + w + 1.0;
        c.powf(p) * profile.r_max().powf(a) / -a
    } else {
        0.0
    };
    Ok(Quad::new(head + body.value + tail, body.abs_err))
}

/// L^{ν,1} norm ∫₀^∞ |{v > τ}|^{1/ν} dτ by exact level sets of the
/// piecewise profile.
pub fn lorentz_nu1(profile: &RadialProfile) -> Result<NormReport> {
    require_tail_faster_than(profile, -1.0, "the L^{ν,1} norm")?;
    let vmax = profile.max_value();
    if vmax == 0.0 {
        return Ok(NormReport::new(Functional::Lorentz, None, 0.0, 0.0));
    }
    let nu = profile.nu() as f64;
    // τ = vmax·u^k flattens the τ^{1/te} growth of the tail's level sets at τ → 0.
    let k = if profile.has_tail() {
        2.0 / (1.0 + 1.0 / profile.tail_exponent())
    } else {
        1.0
    };
    let mut breaks: Vec<f64> = profile
        .values()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| (v / vmax).powf(1.0 / k))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let q = adaptive_with_breaks(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let tau = vmax * u.powf(k);
            k * vmax * u.powf(k - 1.0) * profile.distribution(tau).powf(1.0 / nu)
        },
        0.0,
        1.0,
        &breaks,
        tol_for(breaks.len()),
    )?;
    Ok(NormReport::new(Functional::Lorentz, None, q.value, q.abs_err))
}

/// The same norm as ∫ v*(t) d(t^{1/ν}) with v* the decreasing rearrangement,
/// computed by sorting `refine` sub-cells per grid cell. The error estimate is
/// the norm of the within-cell variation plus a bound on the truncated tail.
pub fn lorentz_nu1_sorted(profile: &RadialProfile, refine: usize) -> Result<NormReport> {
    require_tail_faster_than(profile, -1.0, "the L^{ν,1} norm")?;
    let refine = refine.max(1);
    let nu = profile.nu() as f64;
    let vmax = profile.max_value();
    // (measure, midpoint value, half variation)
    let mut cells: Vec<(f64, f64, f64)> = Vec::new();
    for (a, b, va, vb) in profile.cells() {
        let parts = if va == vb { 1 } else { refine };
        for i in 0..parts {
            let (x0, x1) = (a + (b - a) * i as f64 / parts as f64, a + (b - a) * (i + 1) as f64 / parts as f64);
            let (y0, y1) = (
                va + (vb - va) * i as f64 / parts as f64,
                va + (vb - va) * (i + 1) as f64 / parts as f64,
            );
            cells.push((profile.shell_measure(x0, x1), 0.5 * (y0 + y1), 0.5 * (y1 - y0).abs()));
        }
    }
    let mut remainder = 0.0;
    if profile.has_tail() {
        let (c, te, r_last) = (profile.tail_amplitude(), profile.tail_exponent(), profile.r_max());
        let floor = 1e-9 * vmax;
        let r_end = (floor / c).powf(1.0 / te).max(r_last);
        let count = ((r_end / r_last).ln() / (1.0 + 0.5 / refine as f64).ln()).ceil() as usize;
        for i in 0..count {
            let x0 = r_last * (r_end / r_last).powf(i as f64 / count as f64);
            let x1 = r_last * (r_end / r_last).powf((i + 1) as f64 / count as f64);
            let (y0, y1) = (c * x0.powf(te), c * x1.powf(te));
            cells.push((profile.shell_measure(x0, x1), 0.5 * (y0 + y1), 0.5 * (y0 - y1)));
        }
        // The tail beyond r_end, taken as a separate function (triangle inequality).
        let tau_e = c * r_end.powf(te);
        let s = sphere_area(profile.nu() - 1) / nu;
        remainder = s.powf(1.0 / nu) * c.powf(-1.0 / te) * tau_e.powf(1.0 + 1.0 / te) / (1.0 + 1.0 / te);
    }
    let rearranged = |key: fn(&(f64, f64, f64)) -> f64| {
        let mut sorted: Vec<(f64, f64)> = cells.iter().map(|c| (c.0, key(c))).collect();
        sorted.sort_by(|x, y| y.1.total_cmp(&x.1));
        let mut t = 0.0f64;
        let mut sum = 0.0;
        for (m, v) in sorted {
            let next = t + m;
            sum += v * (next.powf(1.0 / nu) - t.powf(1.0 / nu));
            t = next;
        }
        sum
    };
    let value = rearranged(|c| c.1);
    let spread = rearranged(|c| c.2);
    Ok(NormReport::new(Functional::Lorentz, None, value, spread + remainder))
}

/// sup_τ τ·|{v > τ}|^{1/q} over the given levels, with the per-level values.
pub fn weak_quasinorm(profile: &RadialProfile, q: f64, taus: &[f64]) -> Result<(f64, Vec<(f64, f64)>)> {
    if !(q > 0.0) {
        return Err(Error::invalid(format!("weak exponent must be > 0, got {q}")));
    }
    let rows: Vec<(f64, f64)> = taus
        .iter()
        .map(|&t| (t, t * profile.distribution(t).powf(1.0 / q)))
        .collect();
    let sup = rows.iter().fold(0.0f64, |a, r| a.max(r.1));
    Ok((sup, rows))
}

/// ∫_R^∞ v(r) r (r² − R²)^{-1/2} dr via r = R cosh t.
pub fn mt_integral(profile: &RadialProfile, big_r: f64) -> Result<Quad> {
    require_tail_faster_than(profile, -1.0, "the Mizohata–Takeuchi norm")?;
    let r_last = profile.r_max();
    if big_r <= 0.0 {
        return power_integral(profile, 1.0, 0.0);
    }
    let (c, a) = (profile.tail_amplitude(), profile.tail_exponent() + 1.0);
    // ∫_{max(R, r_last)}^∞ c r^a (r² − R²)^{-1/2} dr = (c/2) R^a B_w(−a/2, 1/2), w = (R/start)².
    let tail = if c > 0.0 {
        let w = (big_r / r_last.max(big_r)).powi(2);
        0.5 * c * big_r.powf(a) * beta(-a / 2.0, 0.5) * beta_reg(-a / 2.0, 0.5, w)
    } else {
        0.0
    };
    if big_r >= r_last {
        return Ok(Quad::new(tail, 1e-14 * tail));
    }
    let t_end = (r_last / big_r).acosh();
    let breaks: Vec<f64> = profile
        .radii()
        .iter()
        .filter(|&&x| x > big_r)
        .map(|&x| (x / big_r).acosh())
        .collect();
    let body = adaptive_with_breaks(
        |t| {
            let x = big_r * t.cosh();
            profile.value(x) * x
        },
        0.0,
        t_end,
        &breaks,
        tol_for(breaks.len()),
    )?;
    Ok(Quad::new(body.value + tail, body.abs_err))
}

/// Mizohata–Takeuchi norm sup_{R>0} ∫_R^∞ v(r) r (r² − R²)^{-1/2} dr over 60
/// log-spaced R per decade, the R → 0 limit, and a golden-section refinement
/// around the best grid point.
pub fn mt_norm(profile: &RadialProfile) -> Result<NormReport> {
    require_tail_faster_than(profile, -1.0, "the Mizohata–Takeuchi norm")?;
    let (lo, hi) = (profile.radii()[0], profile.r_max());
    let count = (((hi / lo).log10() * 60.0).ceil() as usize).max(2) + 1;
    let mut grid: Vec<f64> = vec![0.0];
    grid.extend((0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)));
    let values: Vec<Quad> = grid
        .par_iter()
        .map(|&r| mt_integral(profile, r))
        .collect::<Result<_>>()?;
    let (best, q) = values
        .iter()
        .enumerate()
        .fold((0, values[0]), |acc, (i, q)| if q.value > acc.1.value { (i, *q) } else { acc });
    let mut result = q;
    if best >= 1 {
        let a = grid[best - 1].max(lo * 1e-3);
        let b = grid.get(best + 1).copied().unwrap_or(hi);
        let refined = golden_max(|r| mt_integral(profile, r).map(|q| q.value).unwrap_or(f64::NEG_INFINITY), a, b, 60);
        if refined.1 > result.value {
            result = Quad::new(refined.1, result.abs_err + (refined.1 - q.value));
        }
    }
    Ok(NormReport::new(Functional::Mt, None, result.value, result.abs_err))
}

/// Golden-section search for a maximum on [a, b]; returns (argmax, max).
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// sup of r·v(r) over (a, b] for one cell read linearly (or as a constant).
fn sup_r_v(a: f64, b: f64, va: f64, vb: f64) -> f64 {
    let slope = (vb - va) / (b - a);
    let f = |r: f64| r * (va + slope * (r - a));
    let mut best = f(a).max(f(b));
    if slope < 0.0 {
        let vertex = (slope * a - va) / (2.0 * slope);
        if vertex > a && vertex < b {
            best = best.max(f(vertex));
        }
    }
    best
}

/// Σ_j (∫_{2^j}^{2^{j+1}} v^p r^{p−1} dr)^{1/p}; for p = ∞ the blocks are
/// sup_{2^j < r < 2^{j+1}} r·v(r), computed exactly on each cell.
pub fn dyadic_sum_norm(profile: &RadialProfile, p: f64) -> Result<NormReport> {
    if !(p > 2.0) {
        return Err(Error::invalid(format!("dyadic exponent must lie in (2, ∞], got {p}")));
    }
    require_tail_faster_than(profile, -1.0, "the dyadic sum")?;
    let r = profile.radii();
    let (r0, r_last) = (r[0], profile.r_max());
    let v0 = profile.values()[0];
    let (c, a) = (profile.tail_amplitude(), profile.tail_exponent() + 1.0);
    let j_lo = r0.log2().floor() as i32;
    let j_t = r_last.log2().ceil() as i32;
    let infinite = p.is_infinite();

    let below = if infinite {
        v0 * 2f64.powi(j_lo + 1)
    } else {
        v0 * 2f64.powi(j_lo) * ((2f64.powf(p) - 1.0) / p).powf(1.0 / p)
    };
    let above = if c <= 0.0 {
        0.0
    } else if infinite {
        c * 2f64.powf(j_t as f64 * a) / (1.0 - 2f64.powf(a))
    } else {
        c * 2f64.powf(j_t as f64 * a) * ((2f64.powf(p * a) - 1.0) / (p * a)).powf(1.0 / p) / (1.0 - 2f64.powf(a))
    };

    let blocks: Vec<Quad> = (j_lo..j_t)
        .into_par_iter()
        .map(|j| {
            let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
            if infinite {
                let mut sup = 0.0f64;
                for (ca, cb, va, vb) in profile.cells() {
                    let (x0, x1) = (ca.max(lo), cb.min(hi));
                    if x1 <= x0 {
                        continue;
                    }
                    let slope = (vb - va) / (cb - ca);
                    sup = sup.max(sup_r_v(x0, x1, va + slope * (x0 - ca), va + slope * (x1 - ca)));
                }
                if c > 0.0 && hi > r_last {
                    sup = sup.max(c * lo.max(r_last).powf(a));
                }
                Ok(Quad::new(sup, 0.0))
            } else {
                let mut breaks: Vec<f64> = r.iter().copied().filter(|&x| x > lo && x < hi).collect();
                breaks.push(r_last);
                let q = adaptive_with_breaks(
                    |x| profile.value(x).powf(p) * x.powf(p - 1.0),
                    lo,
                    hi,
                    &breaks,
                    tol_for(breaks.len()),
                )?;
                let root = q.value.max(0.0).powf(1.0 / p);
                let err = if q.value > 0.0 {
                    root / (p * q.value) * q.abs_err
                } else {
                    q.abs_err.powf(1.0 / p)
                };
                Ok(Quad::new(root, err))
            }
        })
        .collect::<Result<_>>()?;
    let middle: Quad = blocks.into_iter().sum();
    let report = NormReport::new(Functional::Dyadic, Some(p), below + middle.value + above, middle.abs_err);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Interp;
    use approx::assert_relative_eq;

    fn indicator(lo: f64, hi: f64, nu: u32) -> RadialProfile {
        let (r, v) = if lo > 0.0 {
            (vec![lo, hi, hi * 1.5], vec![0.0, 1.0, 0.0])
        } else {
            (vec![hi, hi * 1.5], vec![1.0, 0.0])
        };
        RadialProfile::with_interp(r, v, nu, -3.0, Interp::Step).unwrap()
    }

    #[test]
    fn indicator_examples() {
        let ball = indicator(0.0, 1.0, 2);
        assert_relative_eq!(lorentz_nu1(&ball).unwrap().value, std::f64::consts::PI.sqrt(), max_relative = 1e-10);
        assert_relative_eq!(mt_norm(&ball).unwrap().value, 1.0, max_relative = 1e-10);
        let shell = indicator(1.0, 2.0, 3);
        assert_relative_eq!(dyadic_sum_norm(&shell, f64::INFINITY).unwrap().value, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn slow_tails_diverge() {
        let p = RadialProfile::sample(|r| 1.0 / (1.0 + r), 0.01, 100.0, 20, 3, -1.0).unwrap();
        assert!(matches!(lorentz_nu1(&p), Err(Error::Divergence { .. })));
        assert!(matches!(mt_norm(&p), Err(Error::Divergence { .. })));
        assert!(matches!(dyadic_sum_norm(&p, 4.0), Err(Error::Divergence { .. })));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, f) = golden_max(|x| -(x - 0.3f64).powi(2), 0.0, 1.0, 80);
        assert!((x - 0.3).abs() < 1e-7 && f.abs() < 1e-13);
    }
}
