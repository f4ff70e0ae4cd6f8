//! Bessel and Hankel functions of real order, and the empirical constants of
//! the region-wise envelopes.

use evbounds::specfun::{bessel_i, bessel_jy, bessel_k, certify_bounds, hankel1, Order, DEFAULT_ALPHA0};

fn main() -> Result<(), evbounds::error::Error> {
    println!("{:>6} {:>8} {:>22} {:>22} {:>22} {:>22}", "mu", "r", "J", "Y", "I", "K");
    for mu in [0.0, 0.5, 2.5, 10.0, 50.0] {
        for r in [1e-3, 1.0, 10.0, 100.0] {
            let o = Order::new(mu)?;
            let jy = bessel_jy(o, r)?;
            let i = bessel_i(o, r)?;
            let k = bessel_k(o, r)?;
            println!("{mu:>6} {r:>8} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e}", jy.j, jy.y, i.value, k.value);
        }
    }

    let h = hankel1(Order::new(7.25)?, 12.0)?;
    println!("\nH1_7.25(12) = {} ± {:.1e}", h.value, h.abs_err);

    let grid: Vec<Order> = [0.5, 1.0, 2.0, 5.0, 10.0].into_iter().map(Order::new).collect::<Result<_, _>>()?;
    println!("\n{:>14} {:>6} {:>10} {:>8} {:>10}", "region", "kind", "constant", "at mu", "at r");
    for row in certify_bounds(&grid, 200, DEFAULT_ALPHA0)?.into_iter().filter(|r| r.samples > 0) {
        println!(
            "{:>14} {:>6} {:>10.4} {:>8} {:>10.4}",
            row.region.tag(),
            format!("{:?}", row.kind),
            row.constant,
            row.argmax_mu,
            row.argmax_r
        );
    }
    Ok(())
}
