//! General X-states: closed forms next to the numerical end point.

use esd_core::analysis::find_pend_numeric;
use esd_core::analytic::{boundaries_inner_x, boundaries_outer_x};
use esd_core::channels::Scenario;
use esd_core::state::{DecayProbability, DensityMatrix4, InnerXParams, OuterXParams};
use num_complex::Complex64;

fn main() -> esd_core::Result<()> {
    let outer = OuterXParams::from_excited_first(0.5, 0.2, 0.1, 0.2, Complex64::new(0.3, 0.0))?;
    let rho = DensityMatrix4::from_outer_x(&outer)?;
    let numeric = find_pend_numeric(&rho, &Scenario::no_not(), DecayProbability::ZERO)?;
    println!("outer coherence: {:?}", boundaries_outer_x(&outer));
    println!("  numeric p0 {:?}", numeric.p_end());

    // the second set is not a valid density matrix; the report says so
    for (a, b, c, d, z) in [(0.3, 0.3, 0.3, 0.1, 0.28), (0.4, 0.2, 0.2, 0.2, 0.25)] {
        let r = boundaries_inner_x(&InnerXParams::new(a, b, c, d, Complex64::new(z, 0.0))?);
        println!(
            "inner coherence ({a}, {b}, {c}, {d}, {z}): p0 formula {:?}, numeric {:?}, physical {}, discrepancy {}",
            r.formula.p0.raw,
            r.numeric_p0.outcome,
            r.physical,
            r.discrepancy
        );
    }
    Ok(())
}
