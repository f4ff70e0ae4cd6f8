//! Quadrature building blocks: Gauss-Kronrod 7/15 panels, a global adaptive
//! driver, and Gauss-Legendre rules of arbitrary order for composite grids.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quad {
    pub value: f64,
    pub abs_err: f64,
}

impl Quad {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Self { value, abs_err }
    }
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad::new(self.value + rhs.value, self.abs_err + rhs.abs_err)
    }
}

impl std::iter::Sum for Quad {
    fn sum<I: Iterator<Item = Quad>>(iter: I) -> Quad {
        iter.fold(Quad::default(), |a, b| a + b)
    }
}

/// One 15-point Kronrod panel on `[a, b]`; the error is |K15 - G7|.
pub fn gk15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Quad {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    let round = 50.0 * f64::EPSILON * value.abs();
    Quad::new(value, err.max(round))
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    q: Quad,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.q.abs_err == other.q.abs_err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q.abs_err.total_cmp(&other.q.abs_err)
    }
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tol {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-11,
            max_panels: 4000,
        }
    }
}

impl Tol {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

/// Global adaptive Gauss-Kronrod integration over `[a, b]`, starting from the
/// panels delimited by `breaks` (which may be empty).
pub fn adaptive_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tol,
) -> Result<Quad> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("non-finite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quad::default());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = std::iter::once(lo)
        .chain(breaks.iter().copied().filter(|&x| x > lo && x < hi))
        .chain(std::iter::once(hi))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = Quad::default();
    for w in cuts.windows(2) {
        let q = gk15(&mut f, w[0], w[1]);
        total = total + q;
        heap.push(Panel { a: w[0], b: w[1], q });
    }
    while total.abs_err > tol.abs.max(tol.rel * total.value.abs()) {
        if heap.len() >= tol.max_panels {
            return Err(Error::NoConvergence {
                what: format!("adaptive quadrature on [{lo}, {hi}]"),
                last: sign * total.value,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        total.value += left.value + right.value - worst.q.value;
        total.abs_err += left.abs_err + right.abs_err - worst.q.abs_err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            q: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            q: right,
        });
    }
    // Re-sum to shed the drift of the incremental updates.
    let (value, abs_err) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.q.value, e + p.q.abs_err));
    Ok(Quad::new(sign * value, abs_err))
}

pub fn adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tol) -> Result<Quad> {
    adaptive_with_breaks(f, a, b, &[], tol)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Maps a `[-1, 1]` rule onto `[a, b]`.
pub fn map_rule(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    rule.0.iter().zip(&rule.1).map(move |(x, w)| (c + h * x, h * w))
}

/// ∫_a^∞ f via the map x = a + (1 − u)/u on u ∈ (0, 1]. The integrand must
/// decay faster than 1/x.
pub fn adaptive_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tol) -> Result<Quad> {
    adaptive(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = a + (1.0 - u) / u;
            let v = f(x) / (u * u);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Result of [`integrate_with_power_tail`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuad {
    pub value: f64,
    pub abs_err: f64,
    /// Integral over [a, X] computed block by block.
    pub body: f64,
    /// Fitted contribution of [X, ∞).
    pub tail: f64,
    /// The cut X (x_end rounded up to a whole number of blocks).
    pub x_end: f64,
}

/// ∫_a^∞ f for integrands whose block integrals decay like x^{-β}.
///
/// [a, X] is split into blocks of length `block` (a period of the integrand
/// when it oscillates). The block integrals over the last decade are fitted to
/// c·x^{-β}(1 + d/x) and the tail beyond X is integrated analytically. The
/// error estimate is the change in the tail when d is dropped from the fit,
/// plus the quadrature error of the blocks and the fit's residual.
pub fn integrate_with_power_tail<F>(f: F, a: f64, x_end: f64, block: f64, beta: f64, tol: Tol) -> Result<TailQuad>
where
    F: Fn(f64) -> f64 + Sync,
{
    use rayon::prelude::*;

    if !(beta > 1.0) {
        return Err(Error::diverges(format!("block integrals decay like x^-{beta}; need beta > 1")));
    }
    if !(block > 0.0 && x_end > a && a >= 0.0 && x_end.is_finite()) {
        return Err(Error::invalid(format!(
            "need 0 <= a < x_end and block > 0 (a={a}, x_end={x_end}, block={block})"
        )));
    }
    let nblocks = ((x_end - a) / block).ceil().max(1.0) as usize;
    let big_x = a + nblocks as f64 * block;
    let blocks: Vec<Quad> = (0..nblocks)
        .into_par_iter()
        .map(|k| {
            let lo = a + k as f64 * block;
            adaptive(&f, lo, lo + block, tol)
        })
        .collect::<Result<_>>()?;
    let body: Quad = blocks.iter().copied().sum();
    if !body.value.is_finite() {
        return Err(Error::NoConvergence {
            what: "block integrals".into(),
            last: body.value,
        });
    }

    let fit: Vec<(f64, f64)> = blocks
        .iter()
        .enumerate()
        .map(|(k, q)| (a + (k as f64 + 0.5) * block, q.value))
        .filter(|(x, _)| *x >= big_x / 10.0)
        .map(|(x, b)| (1.0 / x, b * x.powf(beta)))
        .collect();
    if fit.len() < 8 {
        return Err(Error::GridResolution(format!(
            "only {} blocks in the last decade before {big_x}; increase x_end",
            fit.len()
        )));
    }
    // y = x^β·b ≈ c₀ + c₁u + c₂u² with u = 1/x.
    let m = fit.len();
    let design = nalgebra::DMatrix::from_fn(m, 3, |i, j| fit[i].0.powi(j as i32));
    let rhs = nalgebra::DVector::from_iterator(m, fit.iter().map(|p| p.1));
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::invalid(format!("tail fit failed: {e}")))?;
    let rms = ((&design * &coef - &rhs).norm_squared() / m as f64).sqrt();
    let lin = design.columns(0, 2).svd(true, true);
    let coef2 = lin
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::invalid(format!("tail fit failed: {e}")))?;

    // Σ_{k ≥ K} b_k = ∫_X^∞ ρ + (B²/24)ρ'(X) + …, with b ≈ B·ρ(midpoint).
    let tail_of = |c: &[f64]| {
        let mut s = c[0] * big_x.powf(1.0 - beta) / (beta - 1.0);
        s += c.get(1).copied().unwrap_or(0.0) * big_x.powf(-beta) / beta;
        s += c.get(2).copied().unwrap_or(0.0) * big_x.powf(-beta - 1.0) / (beta + 1.0);
        s / block - block / 24.0 * beta * c[0] * big_x.powf(-beta - 1.0)
    };
    let tail = tail_of(coef.as_slice());
    let tail2 = tail_of(coef2.as_slice());
    let lead = big_x.powf(1.0 - beta) / ((beta - 1.0) * block);
    let abs_err = body.abs_err + (tail - tail2).abs() + rms * lead / (m as f64).sqrt();
    Ok(TailQuad {
        value: body.value + tail,
        abs_err,
        body: body.value,
        tail,
        x_end: big_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk15_exact_on_degree_22() {
        // Kronrod extension of G7 integrates polynomials of degree 3*7+1 exactly.
        let q = gk15(|x| x.powi(22) + x.powi(3), -1.0, 1.0);
        assert_relative_eq!(q.value, 2.0 / 23.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_weights_and_moments() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            let sum: f64 = w.iter().sum();
            assert_relative_eq!(sum, 2.0, max_relative = 1e-14);
            let deg = 2 * n - 2;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_relative_eq!(m, 2.0 / (deg as f64 + 1.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let q = adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Tol::new(1e-12, 1e-10)).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn adaptive_breaks_on_discontinuity() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let q = adaptive_with_breaks(step, 0.0, 1.0, &[0.3], Tol::default()).unwrap();
        assert_relative_eq!(q.value, 1.7, max_relative = 1e-13);
    }

    #[test]
    fn semi_infinite_map() {
        let q = adaptive_to_infinity(|x: f64| (-x).exp(), 1.0, Tol::default()).unwrap();
        assert_relative_eq!(q.value, (-1f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn power_tail_of_oscillating_integrand() {
        // ∫_0^∞ sin²x / (1 + x)² dx via blocks of length π.
        let f = |x: f64| x.sin().powi(2) / (1.0 + x).powi(2);
        let t = integrate_with_power_tail(f, 0.0, 300.0, std::f64::consts::PI, 2.0, Tol::default()).unwrap();
        // Reference: direct quadrature to 2e5 plus an analytic bound on the remainder.
        let far = (0..200_000)
            .map(|k| gk15(f, k as f64, k as f64 + 1.0).value)
            .sum::<f64>()
            + 0.5 / 200_001.0;
        assert!((t.value - far).abs() < 1e-7, "{} {} {}", t.value, far, t.abs_err);
        assert!((t.value - far).abs() <= t.abs_err.max(1e-9) * 10.0);
    }

    #[test]
    fn power_tail_rejects_slow_decay() {
        let r = integrate_with_power_tail(|x: f64| 1.0 / (1.0 + x), 0.0, 100.0, 1.0, 1.0, Tol::default());
        assert!(matches!(r, Err(Error::Divergence { .. })));
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let q = adaptive(|x: f64| x.sin(), 1.0, 0.0, Tol::default()).unwrap();
        assert_relative_eq!(q.value, -(1.0 - 1f64.cos()), max_relative = 1e-12);
    }
}
