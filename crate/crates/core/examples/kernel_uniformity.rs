//! The Bessel–Hankel kernel norm as a function of the order μ: finite and
//! maximal at the bottom for q above the critical exponent, divergent at it.

use evbounds::resolvent::{kernel_qnorm, rho_for, sup_over_mu, DEFAULT_CUTOFF};
use evbounds::specfun::Order;

fn main() -> Result<(), evbounds::error::Error> {
    let grid: Vec<Order> = [0.5, 1.5, 2.5, 5.0, 10.0, 20.0, 50.0].into_iter().map(Order::new).collect::<Result<_, _>>()?;
    let sup = sup_over_mu(4.0, 3.0, &grid)?;
    println!("nu=3 q=4 rho={}", sup.rho);
    for row in &sup.rows {
        println!("  mu={:<5} {:.10e} ± {:.1e}", row.mu, row.value, row.abs_err);
    }
    println!("  sup {:.8} at mu={}, growth trend: {}", sup.max, sup.argmax, sup.growth_trend);

    match kernel_qnorm(Order::new(1.5)?, 3.0, rho_for(3.0, 3.0), DEFAULT_CUTOFF) {
        Err(e) => println!("\nq=3: {e}"),
        Ok(v) => println!("\nq=3 unexpectedly finite: {v:?}"),
    }
    Ok(())
}
