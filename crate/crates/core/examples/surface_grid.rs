//! Coarse negativity surface over both damping stages, printed as a table.

use esd_core::analysis::sweep_surface;
use esd_core::analytic::MainParams;
use esd_core::channels::ScenarioKind;

fn main() -> esd_core::Result<()> {
    let rho0 = MainParams::pure(0.2)?.density();
    let res = 6;
    let grid = sweep_surface(&rho0, ScenarioKind::DoubleNot, res)?;
    print!("p \\ p'");
    for j in 0..res {
        print!("{:>8.2}", grid.cell(0, j).p_prime);
    }
    println!();
    for i in 0..res {
        print!("{:6.2}", grid.cell(i, 0).p);
        for j in 0..res {
            print!("{:>8.4}", grid.cell(i, j).negativity);
        }
        println!();
    }
    Ok(())
}
