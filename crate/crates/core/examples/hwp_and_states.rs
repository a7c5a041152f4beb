//! Plate angles, decay probabilities and the input state families.

use esd_core::state::{hwp_to_prob, DensityMatrix4, HwpAngle, InnerXParams, OuterXParams};
use num_complex::Complex64;

fn main() -> esd_core::Result<()> {
    for deg in [0.0, 10.0, 22.5, 30.0, 45.0] {
        let p = hwp_to_prob(HwpAngle::degrees(deg)?);
        println!("theta {deg:>5}°  p = {:.6}", p.value());
    }

    let pure = DensityMatrix4::from_pure(0.2f64.sqrt(), 0.8f64.sqrt(), 0.0)?;
    println!("pure alpha2=0.2 populations {:?}", pure.populations());

    let outer = OuterXParams::new(0.3, 0.4, 0.2, 0.1, Complex64::new(0.25, 0.0))?;
    let rho = DensityMatrix4::from_outer_x(&outer)?;
    println!("outer-X report {:?}", rho.validate());

    let inner = InnerXParams::new(0.3, 0.3, 0.3, 0.1, Complex64::new(0.28, 0.0))?;
    let rho = DensityMatrix4::from_inner_x(&inner)?;
    println!("inner-X report {:?}", rho.validate());
    Ok(())
}
