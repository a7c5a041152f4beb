//! Numerical location of ESD, regime classification and parameter sweeps.

use serde::Serialize;

use crate::analytic::{BoundarySet, MainParams, NotVariant, PendAfterNot};
use crate::channels::{
    adc_kraus_two, apply_channel, apply_not, evolve_kind, Scenario, ScenarioKind,
};
use crate::error::{EsdError, Result};
use crate::measures::{min_pt_eigenvalue, negativity, purity};
use crate::state::{DecayProbability, DensityMatrix4};

/// Negativity at or below this counts as separable at the start of stage two.
pub const SEPARABLE_TOL: f64 = 1e-12;
/// Upper end of the stage-two search interval.
pub const PPRIME_MAX: f64 = 1.0 - 1e-12;
/// Width at which bisection stops.
pub const BISECT_TOL: f64 = 1e-13;
/// Points in the fallback scan used when the upper bracket is still entangled.
pub const SCAN_POINTS: usize = 10_000;
/// Distance from `p0` inside which an end point counts as unchanged.
pub const REGIME_TOL: f64 = 1e-6;

/// How entanglement ends during the second damping stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EsdOutcome {
    /// Entanglement vanishes at `p_prime`; `p_end` is the combined damping.
    Dies { p_prime: f64, p_end: f64 },
    /// Already separable when stage two starts.
    BornSeparable { p_end: f64 },
    /// Entangled all the way to full damping.
    Avoided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericEnd {
    pub outcome: EsdOutcome,
    /// Stage-two damping values at which the smallest PT eigenvalue changed
    /// sign during the fallback scan. Empty unless the scan ran.
    pub sign_changes: Vec<f64>,
}

impl NumericEnd {
    pub fn p_end(&self) -> Option<f64> {
        match self.outcome {
            EsdOutcome::Dies { p_end, .. } | EsdOutcome::BornSeparable { p_end } => Some(p_end),
            EsdOutcome::Avoided => None,
        }
    }

    /// Stage-two damping at which entanglement is gone; zero if it already was.
    pub fn p_prime(&self) -> Option<f64> {
        match self.outcome {
            EsdOutcome::Dies { p_prime, .. } => Some(p_prime),
            EsdOutcome::BornSeparable { .. } => Some(0.0),
            EsdOutcome::Avoided => None,
        }
    }

    pub fn is_avoided(&self) -> bool {
        self.outcome == EsdOutcome::Avoided
    }

    /// `p_end`, or one when ESD never happens.
    pub fn p_end_capped(&self) -> f64 {
        self.p_end().unwrap_or(1.0)
    }
}

/// Smallest stage-two damping at which the state becomes separable, found by
/// bisection on the sign of the smallest PT eigenvalue.
///
/// Stage one, the NOT and stage two are applied through the Kraus pipeline;
/// nothing here relies on closed forms.
pub fn find_pend_numeric(
    rho0: &DensityMatrix4,
    scenario: &Scenario,
    p_first: DecayProbability,
) -> Result<NumericEnd> {
    if scenario.kind != ScenarioKind::NoNot && p_first != scenario.p_n {
        return Err(EsdError::InconsistentScenario {
            p_first: p_first.value(),
            p_n: scenario.p_n.value(),
        });
    }
    let mut mid = apply_channel(rho0, &adc_kraus_two(p_first));
    if let Some(target) = scenario.kind.not_target() {
        mid = apply_not(&mid, target);
    }
    Ok(stage_two_end(&mid, p_first.value()))
}

fn stage_two_end(mid: &DensityMatrix4, p_first: f64) -> NumericEnd {
    let combined = |pp: f64| 1.0 - (1.0 - p_first) * (1.0 - pp);
    if negativity(mid) <= SEPARABLE_TOL {
        return NumericEnd {
            outcome: EsdOutcome::BornSeparable { p_end: p_first },
            sign_changes: Vec::new(),
        };
    }
    let lambda = |pp: f64| {
        let p = DecayProbability::new(pp).expect("search stays inside [0, 1]");
        min_pt_eigenvalue(&apply_channel(mid, &adc_kraus_two(p)))
    };
    let dies = |lo: f64, hi: f64| {
        let p_prime = bisect(&lambda, lo, hi);
        EsdOutcome::Dies {
            p_prime,
            p_end: combined(p_prime),
        }
    };

    if lambda(PPRIME_MAX) >= 0.0 {
        return NumericEnd {
            outcome: dies(0.0, PPRIME_MAX),
            sign_changes: Vec::new(),
        };
    }

    // Entangled at both ends. Scan for a separable stretch in between.
    let grid = |k: usize| PPRIME_MAX * k as f64 / SCAN_POINTS as f64;
    let mut sign_changes = Vec::new();
    let mut first_death = None;
    let mut prev = lambda(0.0) < 0.0;
    for k in 1..=SCAN_POINTS {
        let now = lambda(grid(k)) < 0.0;
        if now != prev {
            sign_changes.push(grid(k));
            if prev && first_death.is_none() {
                first_death = Some((grid(k - 1), grid(k)));
            }
        }
        prev = now;
    }
    let outcome = match first_death {
        Some((lo, hi)) => dies(lo, hi),
        None => EsdOutcome::Avoided,
    };
    NumericEnd {
        outcome,
        sign_changes,
    }
}

/// Root of `f` on `[lo, hi]` with `f(lo) < 0 ≤ f(hi)`.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Effect of a NOT on the end of entanglement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Hasten,
    Delay,
    Avoid,
    AtBaseline,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Hasten => "hasten",
            Regime::Delay => "delay",
            Regime::Avoid => "avoid",
            Regime::AtBaseline => "at_baseline",
        }
    }
}

/// Compares a numerically found end point with the baseline `p0`.
pub fn classify(end: &NumericEnd, p0: f64) -> Regime {
    match end.outcome {
        EsdOutcome::Avoided => Regime::Avoid,
        EsdOutcome::BornSeparable { .. } => Regime::AtBaseline,
        EsdOutcome::Dies { p_end, .. } if p_end < p0 - REGIME_TOL => Regime::Hasten,
        EsdOutcome::Dies { p_end, .. } if p_end > p0 + REGIME_TOL => Regime::Delay,
        EsdOutcome::Dies { .. } => Regime::AtBaseline,
    }
}

/// Regime of a NOT at `pn` for the two-population family.
pub fn classify_regime(
    params: &MainParams,
    variant: NotVariant,
    pn: DecayProbability,
) -> Result<Regime> {
    let p0 = params.esd_pend().unwrap_or(1.0);
    let end = find_pend_numeric(&params.density(), &variant.scenario(pn), pn)?;
    Ok(classify(&end, p0))
}

/// One cell of a two-stage damping sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceCell {
    /// First-stage damping (the NOT point for NOT scenarios).
    pub p: f64,
    pub p_prime: f64,
    pub negativity: f64,
    pub purity: f64,
}

/// Negativity and purity over `(p, p′)`, row-major with `p` as the outer axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceGrid {
    pub scenario: &'static str,
    pub resolution: usize,
    pub cells: Vec<SurfaceCell>,
}

impl SurfaceGrid {
    pub fn cell(&self, i: usize, j: usize) -> &SurfaceCell {
        &self.cells[i * self.resolution + j]
    }
}

fn axis(resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 {
        return Err(EsdError::InvalidArgument(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let last = (resolution - 1) as f64;
    Ok((0..resolution).map(|i| i as f64 / last).collect())
}

fn surface_row(rho0: &DensityMatrix4, kind: ScenarioKind, p: f64, pps: &[f64]) -> Vec<SurfaceCell> {
    let first = DecayProbability::new(p).expect("axis values lie in [0, 1]");
    let mut mid = apply_channel(rho0, &adc_kraus_two(first));
    if let Some(target) = kind.not_target() {
        mid = apply_not(&mid, target);
    }
    pps.iter()
        .map(|&pp| {
            let rho = apply_channel(&mid, &adc_kraus_two(DecayProbability::new(pp).unwrap()));
            SurfaceCell {
                p,
                p_prime: pp,
                negativity: negativity(&rho),
                purity: purity(&rho),
            }
        })
        .collect()
}

/// Full `resolution × resolution` sweep over `[0, 1]²`.
pub fn sweep_surface(
    rho0: &DensityMatrix4,
    kind: ScenarioKind,
    resolution: usize,
) -> Result<SurfaceGrid> {
    let ax = axis(resolution)?;
    let cells = ax
        .iter()
        .flat_map(|&p| surface_row(rho0, kind, p, &ax))
        .collect();
    Ok(SurfaceGrid {
        scenario: kind.label(),
        resolution,
        cells,
    })
}

/// A single row of the sweep, with the first stage pinned at `p`.
pub fn sweep_slice(
    rho0: &DensityMatrix4,
    kind: ScenarioKind,
    p: DecayProbability,
    resolution: usize,
) -> Result<Vec<SurfaceCell>> {
    let ax = axis(resolution)?;
    Ok(surface_row(rho0, kind, p.value(), &ax))
}

/// Sanity check that a single pipeline agrees with [`sweep_surface`]'s cell.
pub fn surface_point(
    rho0: &DensityMatrix4,
    kind: ScenarioKind,
    p: DecayProbability,
    pp: DecayProbability,
) -> SurfaceCell {
    let rho = evolve_kind(rho0, kind, p, pp);
    SurfaceCell {
        p: p.value(),
        p_prime: pp.value(),
        negativity: negativity(&rho),
        purity: purity(&rho),
    }
}

/// Analytic and numerical end points at one NOT position.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PendPoint {
    pub pn: f64,
    pub analytic: PendAfterNot,
    pub numeric: NumericEnd,
    pub regime: Regime,
}

impl PendPoint {
    /// `|analytic - numeric|` on capped end points, or `None` when one side
    /// predicts avoidance and the other does not.
    pub fn abs_diff(&self) -> Option<f64> {
        match (self.analytic.avoided, self.numeric.is_avoided()) {
            (true, true) => Some(0.0),
            (false, false) => Some((self.analytic.capped - self.numeric.p_end_capped()).abs()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PendCurve {
    pub variant: NotVariant,
    pub p0: f64,
    pub points: Vec<PendPoint>,
}

impl PendCurve {
    /// Largest disagreement over points where both sides agree on avoidance.
    pub fn max_abs_diff(&self) -> f64 {
        self.points
            .iter()
            .filter_map(PendPoint::abs_diff)
            .fold(0.0, f64::max)
    }

    /// Points where exactly one side predicts avoidance.
    pub fn avoidance_mismatches(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.abs_diff().is_none())
            .count()
    }
}

/// Evaluates `p_end(pn)` on `pn_i = p0·i/(n−1)`, analytically and numerically.
/// When the state never suffers ESD the grid spans `[0, 1]` instead.
pub fn pend_curve(params: &MainParams, variant: NotVariant, n_points: usize) -> Result<PendCurve> {
    if n_points < 2 {
        return Err(EsdError::InvalidArgument(format!(
            "need at least 2 points, got {n_points}"
        )));
    }
    let p0 = params.esd_pend().unwrap_or(1.0);
    let rho0 = params.density();
    let last = (n_points - 1) as f64;
    let points = (0..n_points)
        .map(|i| {
            let pn = DecayProbability::new((p0 * i as f64 / last).min(1.0))?;
            let numeric = find_pend_numeric(&rho0, &variant.scenario(pn), pn)?;
            Ok(PendPoint {
                pn: pn.value(),
                analytic: params.pend_after_not(pn, variant),
                regime: classify(&numeric, p0),
                numeric,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PendCurve {
        variant,
        p0,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeSample {
    pub pn: f64,
    pub p_end_raw: f64,
    pub p_end_capped: f64,
    pub regime: Regime,
}

/// Boundaries, baseline and a sampled regime map for one NOT variant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub variant: NotVariant,
    pub baseline_p0: Option<f64>,
    pub boundaries: BoundarySet,
    pub samples: Vec<RegimeSample>,
}

pub fn regime_report(
    params: &MainParams,
    variant: NotVariant,
    n_points: usize,
) -> Result<RegimeReport> {
    let curve = pend_curve(params, variant, n_points)?;
    let samples = curve
        .points
        .iter()
        .map(|pt| RegimeSample {
            pn: pt.pn,
            p_end_raw: pt.analytic.raw,
            p_end_capped: pt.analytic.capped,
            regime: pt.regime,
        })
        .collect();
    Ok(RegimeReport {
        variant,
        baseline_p0: params.esd_pend(),
        boundaries: params.not_boundaries(),
        samples,
    })
}

/// NOT boundaries located by scanning `pn` over `(0, p0)` and bisecting
/// where the numerical regime changes. Returns `(pA, pB)`: the lower edge of
/// the hastening window and the upper edge of the avoidance window.
pub fn numeric_not_boundaries(
    rho0: &DensityMatrix4,
    kind: ScenarioKind,
    p0: f64,
    scan_points: usize,
) -> Result<(Option<f64>, Option<f64>)> {
    let end_at = |pn: f64| -> Result<NumericEnd> {
        let p = DecayProbability::new(pn)?;
        find_pend_numeric(rho0, &Scenario { kind, p_n: p }, p)
    };
    let hastened = |e: &NumericEnd| e.p_end_capped() < p0;
    let survives = |e: &NumericEnd| !e.is_avoided();
    // Bisects to the point where `edge` switches from false to true.
    let refine = |edge: &dyn Fn(&NumericEnd) -> bool, mut lo: f64, mut hi: f64| -> Result<f64> {
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if edge(&end_at(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut pa = None;
    let mut pb = None;
    let mut prev: Option<(f64, NumericEnd)> = None;
    for k in 1..scan_points {
        let pn = p0 * k as f64 / scan_points as f64;
        let end = end_at(pn)?;
        if let Some((q, before)) = &prev {
            if pa.is_none() && !hastened(before) && hastened(&end) {
                pa = Some(refine(&hastened, *q, pn)?);
            }
            if pb.is_none() && !survives(before) && survives(&end) {
                pb = Some(refine(&survives, *q, pn)?);
            }
        }
        prev = Some((pn, end));
    }
    Ok((pa, pb))
}
