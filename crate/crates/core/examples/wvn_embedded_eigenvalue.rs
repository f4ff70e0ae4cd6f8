//! A radial Wigner–von Neumann potential on ℝ³ with an L² eigenfunction at
//! energy 1, checked with a second-order finite-difference residual.

use evbounds::potentials::{residual_ratio_test, Family, GridSpec, WvnPotential};

fn main() -> Result<(), evbounds::error::Error> {
    let p = WvnPotential::new(3, 1.0, 1.0)?;
    println!("{:>6} {:>14} {:>14} {:>14}", "r", "V(r)", "psi(r)", "envelope");
    for r in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0] {
        println!("{r:>6} {:>14.6e} {:>14.6e} {:>14.6e}", p.potential(r)?, p.eigenfunction(r)?, p.envelope(r));
    }

    let check = residual_ratio_test(Family::Wvn(&p), GridSpec::Radial { r_max: 60.0 }, 0.1)?;
    println!("\nresidual l2_rel: h=0.1 {:.3e}, h=0.05 {:.3e}", check.coarse.l2_rel, check.fine.l2_rel);
    println!("ratio {:.3} (second order gives 4)", check.ratio);
    if let Some(w) = check.warning {
        println!("warning: {w}");
    }
    Ok(())
}
