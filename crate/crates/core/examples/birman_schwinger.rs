//! Birman–Schwinger operators on a channel: the norm reaches one at a bound
//! state, exceeds it at the embedded eigenvalue, and stays small for weak coupling.

use std::f64::consts::PI;

use evbounds::norms::SquareWell;
use evbounds::potentials::WvnPotential;
use evbounds::resolvent::*;
use num_complex::Complex64;

fn main() -> Result<(), evbounds::error::Error> {
    let well = SquareWell::new(10.0, 1.0)?;
    let e = well.half_line_ground_state().expect("well is deep enough for a bound state");
    let v = |r: f64| Complex64::new(if r < 1.0 { -10.0 } else { 0.0 }, 0.0);
    let grid = BsGrid::uniform(0.0, 1.0, 8, 8)?;
    for factor in [0.8, 1.0, 1.2] {
        let spec = KernelSpec::new(ChannelIndex::new(0, 3)?, Energy::Negative(-e * factor))?;
        let m = bs_matrix(BsPotential::Callable(&v), spec, &grid)?;
        println!("square well, E = {:.5}: sigma_max = {:.6}", e * factor, op_norm(&m.symmetrized(), 1e-12)?);
    }

    let w = WvnPotential::new(3, 1.0, 1.0)?;
    let wv = |r: f64| Complex64::new(w.potential(r).unwrap(), 0.0);
    for r_max in [25.0, 50.0, 100.0] {
        let grid = BsGrid::resolving(r_max, 1.0, PI, 12.0, 6)?;
        let spec = KernelSpec::new(ChannelIndex::new(0, 3)?, Energy::PositiveLimit(1.0))?;
        let m = bs_matrix(BsPotential::Callable(&wv), spec, &grid)?;
        println!("WvN at lambda=1, R={r_max}: sigma_max = {:.4}", op_norm(&m.symmetrized(), 1e-10)?);
    }

    let weak = |r: f64| Complex64::new(w.potential(r).unwrap() / 100.0, 0.0);
    let scan = bs_scan(BsPotential::Callable(&weak), 3, &[0.1, 0.3, 1.0, 3.0, 10.0], 4, ScanGrid::default(), 1e-8)?;
    for row in scan.rows.iter().filter(|r| r.l == 0) {
        println!("V/100, lambda={:<4} l=0: sigma_max = {:.4}", row.lambda, row.sigma_max);
    }
    println!("crossings: {:?}", scan.crossings);
    for w in &scan.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
