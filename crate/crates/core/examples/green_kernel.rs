//! The outgoing channel Green kernel of −Δ on ℝ³ against its closed form
//! e^{ik r_>} sin(k r_<) / (k r r′) for l = 0.

use evbounds::resolvent::{green_kernel, ChannelIndex, Energy, KernelSpec};
use num_complex::Complex64;

fn main() -> Result<(), evbounds::error::Error> {
    let k: f64 = 1.3;
    let spec = KernelSpec::new(ChannelIndex::new(0, 3)?, Energy::PositiveLimit(k * k))?;
    for (r, rp) in [(0.5, 2.0), (1.0, 1.0), (3.0, 0.2), (10.0, 7.5)] {
        let g = green_kernel(&spec, r, rp)?;
        let (lo, hi) = if r < rp { (r, rp) } else { (rp, r) };
        let exact = Complex64::from_polar(1.0, k * hi) * (k * lo).sin() / (k * r * rp);
        println!("G({r}, {rp}) = {g:.12}   closed form {exact:.12}");
    }
    for l in 0..4 {
        let spec = KernelSpec::new(ChannelIndex::new(l, 3)?, Energy::Negative(1.0))?;
        println!("l={l}, E=-1: G(1, 2) = {:.10}", green_kernel(&spec, 1.0, 2.0)?.re);
    }
    Ok(())
}
