//! End point of entanglement against the NOT position.

use esd_core::analysis::pend_curve;
use esd_core::analytic::{MainParams, NotVariant};

fn main() -> esd_core::Result<()> {
    let m = MainParams::new(0.2, 0.8, 0.4)?;
    for variant in [NotVariant::Double, NotVariant::Single] {
        let curve = pend_curve(&m, variant, 11)?;
        println!(
            "{variant:?}  p0 = {}  max |analytic - numeric| = {:.1e}",
            curve.p0,
            curve.max_abs_diff()
        );
        for pt in &curve.points {
            println!(
                "  pn {:.3}  analytic {:.6}  numeric {:.6}  {}",
                pt.pn,
                pt.analytic.capped,
                pt.numeric.p_end_capped(),
                pt.regime.label()
            );
        }
    }
    Ok(())
}
