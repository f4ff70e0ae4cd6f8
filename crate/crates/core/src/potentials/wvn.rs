use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::Serialize;
use statrs::function::gamma::gamma;

use super::ij::default_alpha;
use crate::error::{Error, Result};
use crate::quad::gk15;
use crate::specfun::{bessel_j, bessel_jy, Order};

const KNOT_STEP: f64 = 0.5;

/// Cumulative g(r) = ∫₀^r J_μ(s)² s ds on the knots r_k = k/2, extended on
/// demand. Readers share the table; extension takes the write lock.
#[derive(Debug)]
pub struct GTable {
    mu: Order,
    knots: RwLock<Vec<f64>>,
}

impl GTable {
    fn new(mu: Order) -> Self {
        Self {
            mu,
            knots: RwLock::new(vec![0.0]),
        }
    }

    fn panel(&self, a: f64, b: f64) -> Result<f64> {
        let mut err = None;
        let q = gk15(
            |s| {
                if s <= 0.0 {
                    return 0.0;
                }
                match bessel_j(self.mu, s) {
                    Ok(j) => j.value * j.value * s,
                    Err(e) => {
                        err.get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            a,
            b,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(q.value),
        }
    }

    fn knot(&self, k: usize) -> Result<f64> {
        if let Some(&g) = self.knots.read().expect("g table lock poisoned").get(k) {
            return Ok(g);
        }
        let mut knots = self.knots.write().expect("g table lock poisoned");
        while knots.len() <= k {
            let i = knots.len() - 1;
            let next = knots[i] + self.panel(i as f64 * KNOT_STEP, (i + 1) as f64 * KNOT_STEP)?;
            knots.push(next);
        }
        Ok(knots[k])
    }

    pub fn g(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!("g needs finite r >= 0, got {r}")));
        }
        let k = (r / KNOT_STEP).floor() as usize;
        let base = k as f64 * KNOT_STEP;
        let g0 = self.knot(k)?;
        if r == base {
            return Ok(g0);
        }
        Ok(g0 + self.panel(base, r)?)
    }
}

/// The shared table for Bessel order μ = (ν − 2)/2.
pub fn g_table(nu: u32) -> Result<Arc<GTable>> {
    if nu < 2 {
        return Err(Error::invalid(format!("g table needs nu >= 2, got {nu}")));
    }
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<GTable>>>> = OnceLock::new();
    let mut map = TABLES.get_or_init(Default::default).lock().expect("g registry poisoned");
    let mu = Order::new((nu as f64 - 2.0) / 2.0)?;
    Ok(map.entry(nu).or_insert_with(|| Arc::new(GTable::new(mu))).clone())
}

/// g(r) = ∫₀^r J_{(ν−2)/2}(s)² s ds.
pub fn wvn_g(nu: u32, r: f64) -> Result<f64> {
    g_table(nu)?.g(r)
}

/// φ(r) = r^{−μ} J_μ(r) and φ'(r) = −r^{−μ} J_{μ+1}(r), μ = (ν − 2)/2, the
/// regular radial solution of −Δφ = φ.
pub fn wvn_phi(nu: u32, r: f64) -> Result<(f64, f64)> {
    if nu < 2 {
        return Err(Error::invalid(format!("phi needs nu >= 2, got {nu}")));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("phi needs finite r >= 0, got {r}")));
    }
    let mu = (nu as f64 - 2.0) / 2.0;
    if r == 0.0 {
        return Ok((2f64.powf(-mu) / gamma(mu + 1.0), 0.0));
    }
    let scale = r.powf(-mu);
    let j = bessel_j(Order::new(mu)?, r)?.value;
    let j1 = bessel_j(Order::new(mu + 1.0)?, r)?.value;
    Ok((scale * j, -scale * j1))
}

/// Radial potential with embedded eigenvalue 1, decaying like (n + r)^{-1}.
/// For ν = 1 the ν = 3 construction is used and extended evenly.
#[derive(Debug, Clone, Serialize)]
pub struct WvnPotential {
    pub nu: u32,
    pub n: f64,
    pub alpha: f64,
    #[serde(skip)]
    table: Arc<GTable>,
}

impl WvnPotential {
    pub fn new(nu: u32, n: f64, alpha: f64) -> Result<Self> {
        if nu < 1 {
            return Err(Error::invalid("WvN family needs nu >= 1"));
        }
        if !(n >= 1.0 && n.is_finite()) {
            return Err(Error::invalid(format!("scale n must be >= 1, got {n}")));
        }
        if !(alpha > nu as f64 / 4.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must exceed nu/4 = {}, got {alpha}", nu as f64 / 4.0)));
        }
        Ok(Self {
            nu,
            n,
            alpha,
            table: g_table(Self::radial_nu(nu))?,
        })
    }

    pub fn with_default_alpha(nu: u32, n: f64) -> Result<Self> {
        Self::new(nu, n, default_alpha(nu))
    }

    fn radial_nu(nu: u32) -> u32 {
        if nu == 1 {
            3
        } else {
            nu
        }
    }

    /// Dimension of the radial construction actually used (3 when ν = 1).
    pub fn construction_nu(&self) -> u32 {
        Self::radial_nu(self.nu)
    }

    fn mu(&self) -> Order {
        Order::new((self.construction_nu() as f64 - 2.0) / 2.0).expect("nu >= 2")
    }

    pub fn g(&self, r: f64) -> Result<f64> {
        self.table.g(r.abs())
    }

    /// w_n(r) = (n² + g(r)²)^{-α}.
    pub fn w(&self, r: f64) -> Result<f64> {
        let g = self.g(r)?;
        Ok((-self.alpha * (self.n * self.n + g * g).ln()).exp())
    }

    /// V_n at radius r (at |x| for ν = 1).
    pub fn potential(&self, r: f64) -> Result<f64> {
        let r = r.abs();
        if r == 0.0 {
            return Ok(0.0);
        }
        let v = bessel_jy(self.mu(), r)?;
        let g = self.g(r)?;
        let gp = v.j * v.j * r;
        // g'' = (r^{ν−1} φ²)', which also carries the φ'/φ term without
        // dividing by zeros of φ.
        let gpp = 2.0 * v.j * v.jp * r + v.j * v.j;
        let a = self.alpha;
        let m = self.n * self.n + g * g;
        Ok(4.0 * a * (a + 1.0) * g * g * gp * gp / (m * m) - 2.0 * a / m * (gp * gp + 2.0 * g * gpp))
    }

    /// Radial eigenfunction ψ(r) = φ(r) w_n(r). For ν = 1 this is the ν = 3
    /// profile; the eigenfunction on the line is [`Self::eigenfunction_line`].
    pub fn eigenfunction(&self, r: f64) -> Result<f64> {
        let r = r.abs();
        let (phi, _) = wvn_phi(self.construction_nu(), r)?;
        Ok(phi * self.w(r)?)
    }

    /// For ν = 1: the odd eigenfunction u(x) = x ψ₃(|x|) on ℝ.
    pub fn eigenfunction_line(&self, x: f64) -> Result<f64> {
        Ok(x * self.eigenfunction(x)?)
    }

    pub fn envelope(&self, r: f64) -> f64 {
        1.0 / (self.n + r.abs())
    }
}

pub fn wvn_potential(p: &WvnPotential, r: f64) -> Result<f64> {
    p.potential(r)
}

pub fn wvn_eigenfunction(p: &WvnPotential, r: f64) -> Result<f64> {
    p.eigenfunction(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn g_closed_form_in_three_dimensions() {
        assert_eq!(wvn_g(3, 0.0).unwrap(), 0.0);
        for r in [0.1f64, 0.5, 1.3, 7.77, 100.25, 311.0] {
            let exact = 2.0 / PI * (r / 2.0 - (2.0 * r).sin() / 4.0);
            assert_relative_eq!(wvn_g(3, r).unwrap(), exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn phi_closed_forms() {
        for r in [1e-3f64, 0.5, 4.0, 30.0] {
            let (phi, dphi) = wvn_phi(3, r).unwrap();
            let c = (2.0 / PI).sqrt();
            assert_relative_eq!(phi, c * r.sin() / r, max_relative = 1e-12);
            assert_relative_eq!(dphi, c * (r.cos() / r - r.sin() / (r * r)), epsilon = 1e-12);
            let (phi2, _) = wvn_phi(2, r).unwrap();
            assert_relative_eq!(phi2, bessel_j(Order::new(0.0).unwrap(), r).unwrap().value);
        }
        assert_relative_eq!(wvn_phi(2, 0.0).unwrap().0, 1.0, max_relative = 1e-15);
        assert_relative_eq!(wvn_phi(3, 0.0).unwrap().0, (2.0 / PI).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn eigenfunction_values() {
        let p = WvnPotential::new(3, 1.0, 1.0).unwrap();
        assert!(p.eigenfunction(PI).unwrap().abs() < 1e-16);
        let q = WvnPotential::new(2, 2.0, 1.0).unwrap();
        assert_relative_eq!(q.eigenfunction(0.0).unwrap(), 0.25, max_relative = 1e-15);
        assert_eq!(q.potential(0.0).unwrap(), 0.0);
    }

    #[test]
    fn line_case_reflects_three_dimensions() {
        let p1 = WvnPotential::new(1, 2.0, 1.0).unwrap();
        let p3 = WvnPotential::new(3, 2.0, 1.0).unwrap();
        for x in [0.4, 3.3, 17.0] {
            assert_eq!(p1.potential(-x).unwrap(), p3.potential(x).unwrap());
            assert_relative_eq!(p1.eigenfunction_line(-x).unwrap(), -x * p3.eigenfunction(x).unwrap());
        }
    }
}
