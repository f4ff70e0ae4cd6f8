//! How fast ‖V_n‖_p shrinks as the eigenfunction's concentration n grows.

use evbounds::norms::{decay_slope, DecayFamily};

fn main() -> Result<(), evbounds::error::Error> {
    let ns: Vec<f64> = (0..7).map(|k| 2f64.powi(k)).collect();
    for (family, nu, p) in [(DecayFamily::Ij, 2, 2.0), (DecayFamily::Wvn, 3, 6.0), (DecayFamily::Wvn, 3, 4.0)] {
        let d = decay_slope(family, nu, None, p, &ns)?;
        println!("{family:?} nu={nu} p={p} alpha={}", d.alpha);
        for (n, norm) in &d.points {
            println!("  n={n:<3} |V_n|_p = {norm:.6e}");
        }
        println!("  slope {:.4} (expected {:.4})\n", d.slope, d.expected);
    }
    Ok(())
}
