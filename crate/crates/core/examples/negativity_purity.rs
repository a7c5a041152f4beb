//! Negativity and purity along a single damping sweep.

use esd_core::analytic::MainParams;
use esd_core::channels::{evolve_scenario, Scenario};
use esd_core::measures::{negativity, purity};
use esd_core::state::{DecayProbability, DensityMatrix4};

fn main() -> esd_core::Result<()> {
    let bell = DensityMatrix4::from_pure(0.5f64.sqrt(), 0.5f64.sqrt(), 0.0)?;
    println!("Bell state N = {:.6}", negativity(&bell));

    let rho0 = MainParams::pure(0.2)?.density();
    println!("   p'     N        purity");
    for k in 0..=10 {
        let pp = DecayProbability::new(k as f64 / 10.0)?;
        let rho = evolve_scenario(&rho0, &Scenario::no_not(), DecayProbability::ZERO, pp)?;
        println!(
            "{:5.2}  {:.6}  {:.6}",
            pp.value(),
            negativity(&rho),
            purity(&rho)
        );
    }
    Ok(())
}
