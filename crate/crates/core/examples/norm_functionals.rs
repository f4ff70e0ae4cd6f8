//! The norm functionals on radial profiles, and the comparison of the
//! Mizohata–Takeuchi norm with the Lorentz and dyadic norms on a random corpus.

use evbounds::norms::*;
use evbounds::potentials::WvnPotential;

fn main() -> Result<(), evbounds::error::Error> {
    let gauss = RadialProfile::sample(|r| (-r * r).exp(), 1e-4, 8.0, 400, 3, -4.0)?;
    println!("gaussian on R^3");
    println!("  int |V|^2      {:.8}", lp_fullspace(NormTarget::Profile(&gauss), 2.0)?.value);
    println!("  L^(3,1)        {:.8}", lorentz_nu1(&gauss)?.value);
    println!("  MT             {:.8}", mt_norm(&gauss)?.value);
    println!("  dyadic, p=inf  {:.8}", dyadic_sum_norm(&gauss, f64::INFINITY)?.value);

    let w = WvnPotential::new(3, 1.0, 1.0)?;
    let mixed = mixed_norm(NormTarget::Wvn(&w), 4.0, Inner::L2Sphere)?;
    println!("\nWvN mixed L^4(L^2): integral {:.6}, norm {:.6}", mixed.value, mixed.value.powf(0.25));

    println!("\n{:>3} {:>12} {:>12} {:>12}", "#", "MT/Lorentz", "MT/dyadic", "Lorentz");
    for (k, prof) in profile_corpus(42, 8).iter().enumerate() {
        let mt = mt_norm(prof)?.value;
        let lor = lorentz_nu1(prof)?.value;
        let dy = dyadic_sum_norm(prof, f64::INFINITY)?.value;
        println!("{k:>3} {:>12.4} {:>12.4} {lor:>12.4}", mt / lor, mt / dy);
    }
    Ok(())
}
