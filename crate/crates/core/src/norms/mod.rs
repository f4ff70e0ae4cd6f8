//! Norm functionals of potentials: L^p, mixed radial/spherical norms, the
//! Lorentz L^{ν,1} norm, the Mizohata–Takeuchi norm, dyadic sums, and the
//! eigenvalue quotients built from them.

mod keller;
mod lp;
mod profile;
mod radial;

use serde::{Deserialize, Serialize};

pub use keller::{keller_quotient, split_bound_quotient, SquareWell};
pub use lp::{
    angular_l2, angular_sup, decay_slope, expected_decay_slope, lp_fullspace, mixed_norm, AngularSup, DecayFamily,
    DecaySlope, Inner, NormTarget,
};
pub use profile::{profile_corpus, sphere_area, Interp, RadialProfile};
pub use radial::{
    dyadic_sum_norm, lorentz_nu1, lorentz_nu1_sorted, mt_integral, mt_norm, power_integral, weak_quasinorm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    Lp,
    MixedL2,
    MixedLinf,
    Lorentz,
    Mt,
    Dyadic,
}

impl std::fmt::Display for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Functional::Lp => "lp",
            Functional::MixedL2 => "mixed_l2",
            Functional::MixedLinf => "mixed_linf",
            Functional::Lorentz => "lorentz",
            Functional::Mt => "mt",
            Functional::Dyadic => "dyadic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub functional: Functional,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub value: f64,
    pub abs_err: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl NormReport {
    pub fn new(functional: Functional, p: Option<f64>, value: f64, abs_err: f64) -> Self {
        Self {
            functional,
            p,
            value,
            abs_err: abs_err.abs(),
            warnings: Vec::new(),
        }
    }
}
