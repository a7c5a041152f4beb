//! Linear-optics picture of the damping pipelines.
//!
//! Each photon enters a Sagnac loop whose output spatial modes `a, a′, b, b′`
//! play the role of the reservoir. The joint two-photon state stays pure;
//! tracing out the detection ports recovers the two-qubit density matrix and
//! must agree with the Kraus pipeline in [`crate::channels`].

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{NotTarget, Scenario, ScenarioKind};
use crate::error::{EsdError, Result};
use crate::linalg::{Mat4, ONE, ZERO};
use crate::state::{DecayProbability, DensityMatrix4};

const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Polarization {
    /// Ground state.
    H,
    /// Excited state.
    V,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// Output spatial mode of one interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModeLabel {
    A,
    APrime,
    B,
    BPrime,
}

impl ModeLabel {
    pub const ALL: [ModeLabel; 4] = [
        ModeLabel::A,
        ModeLabel::APrime,
        ModeLabel::B,
        ModeLabel::BPrime,
    ];

    pub fn index(self) -> usize {
        match self {
            ModeLabel::A => 0,
            ModeLabel::APrime => 1,
            ModeLabel::B => 2,
            ModeLabel::BPrime => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModeLabel::A => "a",
            ModeLabel::APrime => "a'",
            ModeLabel::B => "b",
            ModeLabel::BPrime => "b'",
        }
    }
}

/// Which damping stage an ADC wave plate implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Element {
    /// Half-wave plate rotated so that `V` decays to `H` with the stage's probability.
    AdcHwp(Stage),
    /// Half-wave plate at 45°.
    NotHwp,
    /// Polarizing beam splitter separating the decayed `H` component.
    PbsSplit,
    /// Path-compensated recombination of `a` and `a′` at the output splitter.
    Recombine,
}

/// Element sequence seen by the clockwise (`V`) path of one interferometer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OpticalProgram {
    pub elements: Vec<Element>,
}

impl OpticalProgram {
    /// Two damping stages, `a` and `a′` recombined for detection.
    pub fn esd_arm() -> Self {
        OpticalProgram {
            elements: vec![
                Element::AdcHwp(Stage::First),
                Element::PbsSplit,
                Element::AdcHwp(Stage::Second),
                Element::Recombine,
            ],
        }
    }

    /// Damping, NOT, damping; every output mode detected separately.
    pub fn not_arm() -> Self {
        OpticalProgram {
            elements: vec![
                Element::AdcHwp(Stage::First),
                Element::PbsSplit,
                Element::NotHwp,
                Element::AdcHwp(Stage::Second),
            ],
        }
    }

    fn kind(&self) -> Result<ArmKind> {
        if *self == Self::esd_arm() {
            Ok(ArmKind::Esd)
        } else if *self == Self::not_arm() {
            Ok(ArmKind::Not)
        } else {
            Err(EsdError::UnknownProgram(format!("{:?}", self.elements)))
        }
    }

    /// Detection port of each mode, indexed by [`ModeLabel::index`].
    pub fn ports(&self) -> Result<[usize; 4]> {
        Ok(match self.kind()? {
            ArmKind::Esd => [0, 0, 1, 2],
            ArmKind::Not => [0, 1, 2, 3],
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ArmKind {
    Esd,
    Not,
}

/// Amplitudes of one photon over polarization ⊗ mode, indexed `[pol][mode]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonOutput(pub [[Complex64; 4]; 2]);

impl PhotonOutput {
    pub fn zeros() -> Self {
        PhotonOutput([[ZERO; 4]; 2])
    }

    pub fn amplitude(&self, pol: Polarization, mode: ModeLabel) -> Complex64 {
        self.0[pol.index()][mode.index()]
    }

    fn add(&mut self, pol: Polarization, mode: ModeLabel, amp: f64) {
        self.0[pol.index()][mode.index()] += Complex64::new(amp, 0.0);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

/// Output of one interferometer for a photon entering with polarization `pol`.
pub fn single_photon_map(
    pol: Polarization,
    program: &OpticalProgram,
    p: DecayProbability,
    pp: DecayProbability,
) -> Result<PhotonOutput> {
    use ModeLabel::*;
    use Polarization::*;
    let (s, d) = (p.survival().sqrt(), p.value().sqrt());
    let (s2, d2) = (pp.survival().sqrt(), pp.value().sqrt());
    let mut out = PhotonOutput::zeros();
    match (program.kind()?, pol) {
        (ArmKind::Esd, H) => out.add(H, A, 1.0),
        (ArmKind::Esd, V) => {
            out.add(V, APrime, s * s2);
            out.add(H, BPrime, s * d2);
            out.add(H, B, d);
        }
        (ArmKind::Not, H) => {
            out.add(V, B, s2);
            out.add(H, A, d2);
        }
        (ArmKind::Not, V) => {
            out.add(H, B, s);
            out.add(V, APrime, d * s2);
            out.add(H, BPrime, d * d2);
        }
    }
    Ok(out)
}

/// Pure state of both photons over (polarization ⊗ mode)⊗², with the
/// detection ports of each interferometer.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPureState {
    amplitudes: [Complex64; 64],
    ports: [[usize; 4]; 2],
}

impl JointPureState {
    fn slot(pol: usize, mode: usize) -> usize {
        pol * 4 + mode
    }

    pub fn amplitude(
        &self,
        pol1: Polarization,
        mode1: ModeLabel,
        pol2: Polarization,
        mode2: ModeLabel,
    ) -> Complex64 {
        let k1 = Self::slot(pol1.index(), mode1.index());
        let k2 = Self::slot(pol2.index(), mode2.index());
        self.amplitudes[k1 * 8 + k2]
    }

    pub fn amplitudes(&self) -> &[Complex64; 64] {
        &self.amplitudes
    }

    pub fn ports(&self) -> [[usize; 4]; 2] {
        self.ports
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Map used for each photon by [`evolve_dilated_with`].
pub type PhotonMap = dyn Fn(
    Polarization,
    &OpticalProgram,
    DecayProbability,
    DecayProbability,
) -> Result<PhotonOutput>;

/// Arm programs for the two photons under a scenario.
pub fn arm_programs(kind: ScenarioKind) -> [OpticalProgram; 2] {
    let (esd, not) = (OpticalProgram::esd_arm(), OpticalProgram::not_arm());
    match kind.not_target() {
        None => [esd.clone(), esd],
        Some(NotTarget::Both) => [not.clone(), not],
        Some(NotTarget::QubitOne) => [not, esd],
        Some(NotTarget::QubitTwo) => [esd, not],
    }
}

/// Sends `|α||HH⟩ + |β|e^{iδ}|VV⟩` through the interferometers.
///
/// For NOT scenarios `p` is the NOT point and must equal `scenario.p_n`.
pub fn evolve_dilated(
    alpha_mag: f64,
    beta_mag: f64,
    delta: f64,
    scenario: &Scenario,
    p: DecayProbability,
    pp: DecayProbability,
) -> Result<JointPureState> {
    evolve_dilated_with(
        &single_photon_map,
        alpha_mag,
        beta_mag,
        delta,
        scenario,
        p,
        pp,
    )
}

/// [`evolve_dilated`] with a substitute single-photon map.
pub fn evolve_dilated_with(
    map: &PhotonMap,
    alpha_mag: f64,
    beta_mag: f64,
    delta: f64,
    scenario: &Scenario,
    p: DecayProbability,
    pp: DecayProbability,
) -> Result<JointPureState> {
    let norm = alpha_mag * alpha_mag + beta_mag * beta_mag;
    if alpha_mag < 0.0 || beta_mag < 0.0 || (norm - 1.0).abs() > NORM_TOL {
        return Err(EsdError::NotNormalized { norm });
    }
    if scenario.kind != ScenarioKind::NoNot && p != scenario.p_n {
        return Err(EsdError::InconsistentScenario {
            p_first: p.value(),
            p_n: scenario.p_n.value(),
        });
    }
    let input = [
        (Polarization::H, Complex64::new(alpha_mag, 0.0)),
        (Polarization::V, Complex64::from_polar(beta_mag, delta)),
    ];
    let programs = arm_programs(scenario.kind);
    let mut amplitudes = [ZERO; 64];
    for (pol, coeff) in input {
        let one = map(pol, &programs[0], p, pp)?;
        let two = map(pol, &programs[1], p, pp)?;
        for (k1, a1) in one.0.iter().flatten().enumerate() {
            for (k2, a2) in two.0.iter().flatten().enumerate() {
                amplitudes[k1 * 8 + k2] += coeff * a1 * a2;
            }
        }
    }
    Ok(JointPureState {
        amplitudes,
        ports: [programs[0].ports()?, programs[1].ports()?],
    })
}

/// Reduced polarization state: amplitudes reaching the same pair of
/// detection ports add coherently, distinct port pairs add as probabilities.
pub fn trace_out_reservoir(state: &JointPureState) -> DensityMatrix4 {
    let n_ports = |ports: &[usize; 4]| ports.iter().max().map_or(0, |m| m + 1);
    let (n1, n2) = (n_ports(&state.ports[0]), n_ports(&state.ports[1]));
    let mut rho = Mat4::zeros();
    for r1 in 0..n1 {
        for r2 in 0..n2 {
            let mut psi = [ZERO; 4];
            for pol1 in 0..2 {
                for pol2 in 0..2 {
                    for m1 in (0..4).filter(|&m| state.ports[0][m] == r1) {
                        for m2 in (0..4).filter(|&m| state.ports[1][m] == r2) {
                            let k =
                                JointPureState::slot(pol1, m1) * 8 + JointPureState::slot(pol2, m2);
                            psi[2 * pol1 + pol2] += state.amplitudes[k];
                        }
                    }
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    rho.0[i][j] += psi[i] * psi[j].conj();
                }
            }
        }
    }
    DensityMatrix4::new_unchecked(rho)
}

/// Unit amplitude on `|pol⟩|a⟩` for a photon that bypasses the loop.
pub fn untouched(pol: Polarization) -> PhotonOutput {
    let mut out = PhotonOutput::zeros();
    out.0[pol.index()][ModeLabel::A.index()] = ONE;
    out
}
