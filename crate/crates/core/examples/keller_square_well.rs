//! |E|^{1/2} ≤ ½∫|V| for one-dimensional square wells: the quotient stays
//! below one half and approaches it for shallow wells.

use evbounds::norms::{keller_quotient, SquareWell};
use num_complex::Complex64;

fn main() -> Result<(), evbounds::error::Error> {
    println!("{:>10} {:>6} {:>14} {:>10}", "depth", "width", "E", "quotient");
    for depth in [1e-4, 1e-2, 1.0, 40.0, 1e3] {
        for half_width in [0.05, 1.0, 3.0] {
            let w = SquareWell::new(depth, half_width)?;
            let e = w.ground_state();
            let q = keller_quotient(Complex64::new(e, 0.0), w.lq_integral(1.0), 0.5)?;
            println!("{depth:>10} {half_width:>6} {e:>14.6e} {q:>10.6}");
        }
    }
    Ok(())
}
