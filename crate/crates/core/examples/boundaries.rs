//! Closed-form boundaries for a few members of the main family.

use esd_core::analytic::{MainParams, NotVariant};

fn main() -> esd_core::Result<()> {
    for (u, v) in [(0.2, 0.4), (0.14, 0.347), (0.2, 0.15)] {
        let m = MainParams::new(u, 1.0 - u, v)?;
        let b = m.not_boundaries();
        println!("u={u} |v|={v}  p0={:?}", b.p0.value());
        for variant in [NotVariant::Double, NotVariant::Single] {
            println!(
                "  {variant:?}: pA={:?} pB={:?} hasten={} avoid={}",
                b.pa(variant).value(),
                b.pb(variant).value(),
                b.hastening_exists(variant),
                b.avoidance_exists(variant),
            );
        }
    }
    Ok(())
}
