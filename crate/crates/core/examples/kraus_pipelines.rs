//! The three damping pipelines applied to one input state.

use esd_core::analytic::MainParams;
use esd_core::channels::{adc_kraus_two, evolve_scenario, Qubit, Scenario};
use esd_core::measures::negativity;
use esd_core::state::DecayProbability;

fn main() -> esd_core::Result<()> {
    let p = DecayProbability::new(0.3)?;
    let pp = DecayProbability::new(0.2)?;
    println!(
        "completeness defect {:.1e}",
        adc_kraus_two(p).completeness_defect()
    );

    let rho0 = MainParams::pure(0.2)?.density();
    for (name, s) in [
        ("no NOT", Scenario::no_not()),
        ("double NOT", Scenario::double_not(p)),
        ("single NOT", Scenario::single_not(Qubit::One, p)),
    ] {
        let rho = evolve_scenario(&rho0, &s, p, pp)?;
        println!(
            "{name:<11} N = {:.6}  populations {:?}",
            negativity(&rho),
            rho.populations()
        );
    }
    Ok(())
}
