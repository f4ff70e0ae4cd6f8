//! Splitting ∫|J_μ|^q r^ρ dr into the six regions around the turning point
//! and watching each piece scale with μ.

use evbounds::resolvent::region_integrals;
use evbounds::specfun::Order;

fn main() -> Result<(), evbounds::error::Error> {
    let (q, rho) = (4.0, 0.0);
    println!("{:>5} {}", "mu", (1..=6).map(|k| format!("{:>12}", format!("I{k}"))).collect::<String>());
    let mut rows = Vec::new();
    for mu in [8.0, 27.0, 64.0, 125.0] {
        let r = region_integrals(Order::new(mu)?, q, rho, 1.0)?;
        println!("{mu:>5} {}", r.values.iter().map(|v| format!("{v:>12.4e}")).collect::<String>());
        rows.push(r);
    }
    for (k, expected) in [(2, -q / 3.0 + rho + 1.0 / 3.0), (5, -q / 2.0 + rho + 1.0)] {
        let first = &rows[0];
        let last = &rows[rows.len() - 1];
        let slope = (last.values[k] / first.values[k]).ln() / (last.mu / first.mu).ln();
        println!("I{}: exponent {slope:.3}, limit {expected:.3}", k + 1);
    }
    Ok(())
}
