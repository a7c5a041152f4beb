//! The optical network traced over the reservoir modes, against Kraus evolution.

use esd_core::channels::{evolve_scenario, Qubit, Scenario};
use esd_core::dilation::{evolve_dilated, trace_out_reservoir};
use esd_core::state::{DecayProbability, DensityMatrix4};

fn main() -> esd_core::Result<()> {
    let (a, b, delta) = (0.2f64.sqrt(), 0.8f64.sqrt(), 0.7);
    let rho0 = DensityMatrix4::from_pure(a, b, delta)?;
    let p = DecayProbability::new(0.35)?;
    let pp = DecayProbability::new(0.6)?;
    for s in [
        Scenario::no_not(),
        Scenario::double_not(p),
        Scenario::single_not(Qubit::One, p),
    ] {
        let joint = evolve_dilated(a, b, delta, &s, p, pp)?;
        let reduced = trace_out_reservoir(&joint);
        let kraus = evolve_scenario(&rho0, &s, p, pp)?;
        println!(
            "{:<12} ports {:?}  max |Δρ| = {:.1e}",
            s.kind.label(),
            joint.ports(),
            reduced.matrix().max_abs_diff(kraus.matrix())
        );
    }
    Ok(())
}
