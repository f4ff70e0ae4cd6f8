//! The anisotropic family decaying like (|x₁| + |x′|²)^{-1}, in the reduced
//! coordinates (x₁, s = |x′|), and its eigenvalue-equation residual.

use evbounds::potentials::{residual_ratio_test, Family, GridSpec, IjPotential, ReducedPoint};

fn main() -> Result<(), evbounds::error::Error> {
    let p = IjPotential::new(2, 1.0, 1.0)?;
    println!("{:>8} {:>6} {:>14} {:>14} {:>14}", "x1", "s", "V", "far field", "psi");
    for (x1, s) in [(10.0, 1.0), (-30.2, 2.0), (100.3, 0.0), (1000.7, 5.0), (0.5, 30.0)] {
        let pt = ReducedPoint::new(x1, s);
        println!(
            "{x1:>8} {s:>6} {:>14.6e} {:>14.6e} {:>14.6e}",
            p.potential(pt),
            p.far_field(pt),
            p.eigenfunction(pt)
        );
    }

    let grid = GridSpec::Box { x1_max: 30.0, s_max: 10.0 };
    let check = residual_ratio_test(Family::Ij(&p), grid, 0.1)?;
    println!("\nresidual l2_rel: h=0.1 {:.4e}, h=0.05 {:.4e}", check.coarse.l2_rel, check.fine.l2_rel);
    println!("ratio {:.3}; l2_rel/h^2 = {:.2}", check.ratio, check.fine.l2_rel / 0.0025);
    Ok(())
}
