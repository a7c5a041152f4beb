//! Closed-form ESD boundaries.
//!
//! * `p0` (or `p_end`): damping at which entanglement of the unmanipulated
//!   state first vanishes.
//! * `pA`: NOT points in `(pA, p0)` hasten ESD, those in `(pB, pA)` delay it.
//! * `pB`: NOT points in `[0, pB]` avert ESD entirely.
//!
//! A boundary that is undefined (division by zero) or lies outside its
//! physical window is reported as such rather than as an error; the absence
//! of a window is itself a result.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{find_pend_numeric, EsdOutcome, NumericEnd};
use crate::channels::{Qubit, Scenario, ScenarioKind};
use crate::error::{EsdError, Result};
use crate::linalg::eig_hermitian4;
use crate::state::{DecayProbability, DensityMatrix4, InnerXParams, OuterXParams};

const SUM_TOL: f64 = 1e-12;

/// Which NOT manipulation a boundary refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NotVariant {
    Double,
    Single,
}

impl NotVariant {
    pub fn scenario(self, p_n: DecayProbability) -> Scenario {
        match self {
            NotVariant::Double => Scenario::double_not(p_n),
            NotVariant::Single => Scenario::single_not(Qubit::One, p_n),
        }
    }

    pub fn kind(self) -> ScenarioKind {
        self.scenario(DecayProbability::ZERO).kind
    }
}

/// Parameters of the two-population family `u|gg⟩⟨gg| + x|ee⟩⟨ee| +
/// (v|gg⟩⟨ee| + h.c.)` with `u + x = 1`.
///
/// Positivity (`|v|² ≤ ux`) is not enforced here so that rounded reference
/// parameter sets can be evaluated as given.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainParams {
    pub u: f64,
    pub x: f64,
    pub v_abs: f64,
}

impl MainParams {
    pub fn new(u: f64, x: f64, v_abs: f64) -> Result<Self> {
        for (name, value) in [("u", u), ("x", x)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(EsdError::OutOfRange {
                    name,
                    value,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        if (u + x - 1.0).abs() > SUM_TOL {
            return Err(EsdError::PopulationSum { sum: u + x });
        }
        if !(v_abs >= 0.0 && v_abs.is_finite()) {
            return Err(EsdError::OutOfRange {
                name: "|v|",
                value: v_abs,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(MainParams { u, x, v_abs })
    }

    /// `|v| = √(u(1-u))`.
    pub fn pure(u: f64) -> Result<Self> {
        Self::new(u, 1.0 - u, (u * (1.0 - u)).max(0.0).sqrt())
    }

    pub fn from_outer(p: &OuterXParams) -> Result<Self> {
        if p.b_pop != 0.0 || p.c_pop != 0.0 {
            return Err(EsdError::InvalidArgument(
                "closed forms for the two-population family need b = c = 0".into(),
            ));
        }
        Self::new(p.u, p.x, p.v_abs())
    }

    pub fn is_positive(&self) -> bool {
        self.v_abs * self.v_abs <= self.u * self.x + SUM_TOL
    }

    /// Initial state with a real coherence. The matrix is not validated.
    pub fn density(&self) -> DensityMatrix4 {
        let p = OuterXParams {
            u: self.u,
            x: self.x,
            b_pop: 0.0,
            c_pop: 0.0,
            v: Complex64::new(self.v_abs, 0.0),
        };
        DensityMatrix4::new_unchecked(p.matrix())
    }

    /// Second-stage damping at which entanglement vanishes, given a first
    /// stage `p`: `(|v| - xp) / (x(1-p))`. `None` when outside `[0, 1]`.
    pub fn esd_pprime(&self, p: DecayProbability) -> Option<f64> {
        in_unit(self.esd_pprime_raw(p.value()))
    }

    pub fn esd_pprime_raw(&self, p: f64) -> Option<f64> {
        finite((self.v_abs - self.x * p) / (self.x * (1.0 - p)))
    }

    /// Combined end point `|v| / x`; `None` when the state never suffers ESD.
    pub fn esd_pend(&self) -> Option<f64> {
        self.esd_pend_raw().filter(|&p| p <= 1.0)
    }

    pub fn esd_pend_raw(&self) -> Option<f64> {
        finite(self.v_abs / self.x)
    }

    pub fn not_boundaries(&self) -> BoundarySet {
        let (u, v) = (self.u, self.v_abs);
        BoundarySet::filtered(
            self.esd_pend_raw(),
            finite((1.0 - 2.0 * u) / (2.0 * (1.0 - u))),
            finite((v - u) / (1.0 + v - u)),
            finite(v / (u + 2.0 * v)),
            finite(v * v / (v * v - u + 1.0)),
        )
    }

    /// End of entanglement after a NOT at `pn`.
    pub fn pend_after_not(&self, pn: DecayProbability, variant: NotVariant) -> PendAfterNot {
        let (x, v, pn) = (self.x, self.v_abs, pn.value());
        let raw = match variant {
            NotVariant::Double => {
                (pn * pn * (2.0 * x + v) + pn * (1.0 - 2.0 * x - 2.0 * v) + v)
                    / (x * (pn * pn - 1.0) + 1.0)
            }
            NotVariant::Single => {
                if pn == 0.0 {
                    // 0/0 in the closed form; the limit diverges whenever v ≠ 0.
                    f64::INFINITY
                } else {
                    let disc = 4.0 * x * (pn - 1.0) * pn + 4.0 * (pn - 1.0).powi(2) * v * v + 1.0;
                    (disc.sqrt() + 2.0 * x * pn - 1.0) / (2.0 * x * pn)
                }
            }
        };
        PendAfterNot::from_raw(raw)
    }
}

/// `p_end` after a NOT, capped at one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PendAfterNot {
    /// Uncapped value; infinite where the expression diverges.
    pub raw: f64,
    pub capped: f64,
    pub avoided: bool,
}

impl PendAfterNot {
    fn from_raw(raw: f64) -> Self {
        let avoided = raw >= 1.0 || raw.is_nan();
        PendAfterNot {
            raw,
            capped: if avoided { 1.0 } else { raw },
            avoided,
        }
    }
}

/// A boundary value and whether it falls in its physical window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Boundary {
    pub raw: Option<f64>,
    pub in_domain: bool,
}

impl Boundary {
    /// The value, if it is in the physical window.
    pub fn value(&self) -> Option<f64> {
        self.raw.filter(|_| self.in_domain)
    }
}

/// `p0` and the four NOT boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySet {
    pub p0: Boundary,
    pub pa_double: Boundary,
    pub pb_double: Boundary,
    pub pa_single: Boundary,
    pub pb_single: Boundary,
}

impl BoundarySet {
    /// Applies the window rules: `0 < p0 ≤ 1`, and `0 < pA, pB < p0`.
    pub fn filtered(
        p0: Option<f64>,
        pa_double: Option<f64>,
        pb_double: Option<f64>,
        pa_single: Option<f64>,
        pb_single: Option<f64>,
    ) -> Self {
        let p0_ok = p0.filter(|&p| p > 0.0 && p <= 1.0);
        let inner = |raw: Option<f64>| Boundary {
            raw,
            in_domain: match (raw, p0_ok) {
                (Some(v), Some(limit)) => v > 0.0 && v < limit,
                _ => false,
            },
        };
        BoundarySet {
            p0: Boundary {
                raw: p0,
                in_domain: p0_ok.is_some(),
            },
            pa_double: inner(pa_double),
            pb_double: inner(pb_double),
            pa_single: inner(pa_single),
            pb_single: inner(pb_single),
        }
    }

    pub fn pa(&self, variant: NotVariant) -> Boundary {
        match variant {
            NotVariant::Double => self.pa_double,
            NotVariant::Single => self.pa_single,
        }
    }

    pub fn pb(&self, variant: NotVariant) -> Boundary {
        match variant {
            NotVariant::Double => self.pb_double,
            NotVariant::Single => self.pb_single,
        }
    }

    /// Some NOT point in `(0, p0)` brings ESD forward.
    pub fn hastening_exists(&self, variant: NotVariant) -> bool {
        match (self.p0.value(), self.pa(variant).raw) {
            (Some(p0), Some(pa)) => pa < p0,
            _ => false,
        }
    }

    /// Some NOT point in `(0, p0)` averts ESD.
    pub fn avoidance_exists(&self, variant: NotVariant) -> bool {
        match (self.p0.value(), self.pb(variant).raw) {
            (Some(_), Some(pb)) => pb > 0.0,
            _ => false,
        }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn in_unit(v: Option<f64>) -> Option<f64> {
    v.filter(|p| (0.0..=1.0).contains(p))
}

/// Boundaries for the outer-coherence X-state with all four populations,
/// evaluated from the excited-first closed forms exactly as written.
///
/// With `b = c = 0` these reduce to [`MainParams::not_boundaries`].
pub fn boundaries_outer_x(params: &OuterXParams) -> BoundarySet {
    let (a, b, c, d, z) = params.excited_first();
    let root = ((b - c).powi(2) + 4.0 * z * z).sqrt();
    let p0 = finite((-b - c + root) / (2.0 * a));
    let pa_double = finite((a - d) / (1.0 + a - d));
    let pb_double = finite(1.0 - (2.0 * a + b + c - root) / (2.0 * ((a + b) * (a + c) - z * z)));
    let pa_single = p0.and_then(|p0| {
        finite(1.0 - (c + a) * ((c + a) * (1.0 - p0) - 1.0) / ((a + b) * ((a + b) - root) - a))
    });
    let pb_single = finite((z * z - c) / (z * z + a));
    BoundarySet::filtered(p0, pa_double, pb_double, pa_single, pb_single)
}

/// Inner-coherence boundaries from the closed-form expressions, alongside the
/// numerically located `p0` of the same matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerXBoundaries {
    pub formula: BoundarySet,
    pub numeric_p0: NumericEnd,
    /// Smallest eigenvalue of the initial matrix.
    pub min_eigenvalue: f64,
    pub physical: bool,
    /// The formula's `p0` and the numerical one describe different physics.
    pub discrepancy: bool,
}

/// Evaluates the inner-coherence closed forms as written and attaches the
/// numerical `p0`. The numerical side runs even for unphysical parameter sets
/// so that the two can be compared on any input.
pub fn boundaries_inner_x(params: &InnerXParams) -> InnerXBoundaries {
    let InnerXParams { a, b, c, d, z } = *params;
    let z2 = z.norm_sqr();
    let root = ((b + c + 2.0 * a).powi(2) - 4.0 * (a - z2)).sqrt();
    let p0 = finite((-b - c + root) / (2.0 * a));
    let pa_double = finite((a - d) / (1.0 + a - d));
    let pb_double = finite((2.0 * (a - z2) - (2.0 * a + b + c) + root) / (2.0 * (a - z2)));
    let pa_single = p0.and_then(|p0| {
        let q = 1.0 - p0;
        finite(
            ((c + a) * (2.0 * a * q - (c + a) * q + c + d) - a)
                / ((c + a) * (2.0 * a * q - (b + a)) - a),
        )
    });
    let pb_single = finite(1.0 - (a + c) / ((a + b) * (a + c) + z2));
    let formula = BoundarySet::filtered(p0, pa_double, pb_double, pa_single, pb_single);

    let matrix = params.matrix();
    let rho = DensityMatrix4::new_unchecked(matrix);
    let numeric_p0 = find_pend_numeric(&rho, &Scenario::no_not(), DecayProbability::ZERO)
        .expect("no-NOT scenario has no consistency constraint");
    let min_eigenvalue = eig_hermitian4(&matrix).map(|s| s.min()).unwrap_or(f64::NAN);
    let discrepancy = !formula_matches_numeric(formula.p0.raw, &numeric_p0);
    InnerXBoundaries {
        formula,
        numeric_p0,
        min_eigenvalue,
        physical: params.is_positive(),
        discrepancy,
    }
}

fn formula_matches_numeric(formula: Option<f64>, numeric: &NumericEnd) -> bool {
    const TOL: f64 = 1e-6;
    match (&numeric.outcome, formula) {
        (EsdOutcome::Avoided, None) => true,
        (EsdOutcome::Avoided, Some(f)) => f >= 1.0,
        (EsdOutcome::BornSeparable { .. }, Some(f)) => f.abs() <= TOL,
        (EsdOutcome::Dies { p_prime, .. }, Some(f)) => (f - p_prime).abs() <= TOL,
        (_, None) => false,
    }
}
