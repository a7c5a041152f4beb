//! Amplitude damping, local NOT operations and the three evolution pipelines.
//!
//! Every pipeline runs in two damping stages with probabilities `p` and `p'`.
//! The NOT pipelines apply `σx` on one or both qubits between the stages, at
//! `p = p_n`.

use num_complex::Complex64;

use crate::error::{EsdError, Result};
use crate::linalg::{Mat2, Mat4};
use crate::state::{DecayProbability, DensityMatrix4};

/// A single-qubit Kraus operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausOp2(pub Mat2);

/// Two-qubit Kraus operators `M_i ⊗ M_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet4 {
    ops: Vec<Mat4>,
}

impl KrausSet4 {
    pub fn ops(&self) -> &[Mat4] {
        &self.ops
    }

    /// `Σ M†M`.
    pub fn completeness_sum(&self) -> Mat4 {
        self.ops
            .iter()
            .fold(Mat4::zeros(), |acc, k| acc + k.adjoint() * *k)
    }

    /// Largest entrywise deviation of `Σ M†M` from the identity.
    pub fn completeness_defect(&self) -> f64 {
        self.completeness_sum().max_abs_diff(&Mat4::identity())
    }
}

/// `M₁ = diag(1, √(1-p))`, `M₂ = √p |g⟩⟨e|`.
pub fn adc_kraus_single(p: DecayProbability) -> (KrausOp2, KrausOp2) {
    let p = p.value();
    let m1 = Mat2::from_real([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]);
    let m2 = Mat2::from_real([[0.0, p.sqrt()], [0.0, 0.0]]);
    (KrausOp2(m1), KrausOp2(m2))
}

/// Independent damping of both qubits with the same `p`.
pub fn adc_kraus_two(p: DecayProbability) -> KrausSet4 {
    let (m1, m2) = adc_kraus_single(p);
    let singles = [m1.0, m2.0];
    let ops = singles
        .iter()
        .flat_map(|a| singles.iter().map(move |b| a.kron(b)))
        .collect();
    KrausSet4 { ops }
}

/// `ρ → Σ M ρ M†`.
pub fn apply_channel(rho: &DensityMatrix4, ks: &KrausSet4) -> DensityMatrix4 {
    DensityMatrix4::new_unchecked(apply_kraus(rho.matrix(), ks))
}

pub(crate) fn apply_kraus(m: &Mat4, ks: &KrausSet4) -> Mat4 {
    ks.ops
        .iter()
        .fold(Mat4::zeros(), |acc, k| acc + k.conjugate(m))
}

/// Where a NOT is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotTarget {
    Both,
    QubitOne,
    QubitTwo,
}

/// One of the two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Qubit {
    One,
    Two,
}

impl From<Qubit> for NotTarget {
    fn from(q: Qubit) -> Self {
        match q {
            Qubit::One => NotTarget::QubitOne,
            Qubit::Two => NotTarget::QubitTwo,
        }
    }
}

fn sigma_x() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn not_unitary(target: NotTarget) -> Mat4 {
    let (x, id) = (sigma_x(), Mat2::identity());
    match target {
        NotTarget::Both => x.kron(&x),
        NotTarget::QubitOne => x.kron(&id),
        NotTarget::QubitTwo => id.kron(&x),
    }
}

/// Conjugation by the local `σx` unitary.
pub fn apply_not(rho: &DensityMatrix4, target: NotTarget) -> DensityMatrix4 {
    DensityMatrix4::new_unchecked(not_unitary(target).conjugate(rho.matrix()))
}

/// Which manipulation runs between the two damping stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    NoNot,
    SingleNot(Qubit),
    DoubleNot,
}

impl ScenarioKind {
    pub fn not_target(self) -> Option<NotTarget> {
        match self {
            ScenarioKind::NoNot => None,
            ScenarioKind::SingleNot(q) => Some(q.into()),
            ScenarioKind::DoubleNot => Some(NotTarget::Both),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::NoNot => "none",
            ScenarioKind::SingleNot(Qubit::One) => "single",
            ScenarioKind::SingleNot(Qubit::Two) => "single-two",
            ScenarioKind::DoubleNot => "double",
        }
    }
}

/// A manipulation pipeline and the damping at which its NOT fires.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// Ignored for [`ScenarioKind::NoNot`].
    pub p_n: DecayProbability,
}

impl Scenario {
    pub fn no_not() -> Self {
        Scenario {
            kind: ScenarioKind::NoNot,
            p_n: DecayProbability::ZERO,
        }
    }

    pub fn double_not(p_n: DecayProbability) -> Self {
        Scenario {
            kind: ScenarioKind::DoubleNot,
            p_n,
        }
    }

    pub fn single_not(qubit: Qubit, p_n: DecayProbability) -> Self {
        Scenario {
            kind: ScenarioKind::SingleNot(qubit),
            p_n,
        }
    }

    /// Same pipeline with the NOT moved to `p_n`.
    pub fn at(self, p_n: DecayProbability) -> Self {
        Scenario { p_n, ..self }
    }
}

/// Damping by `p_first`, the scenario's NOT (if any), then damping by `p_second`.
///
/// For NOT scenarios `p_first` must equal `scenario.p_n`.
pub fn evolve_scenario(
    rho0: &DensityMatrix4,
    scenario: &Scenario,
    p_first: DecayProbability,
    p_second: DecayProbability,
) -> Result<DensityMatrix4> {
    if scenario.kind != ScenarioKind::NoNot && p_first != scenario.p_n {
        return Err(EsdError::InconsistentScenario {
            p_first: p_first.value(),
            p_n: scenario.p_n.value(),
        });
    }
    Ok(evolve_kind(rho0, scenario.kind, p_first, p_second))
}

/// Pipeline body without the `p_n` consistency check.
pub fn evolve_kind(
    rho0: &DensityMatrix4,
    kind: ScenarioKind,
    p_first: DecayProbability,
    p_second: DecayProbability,
) -> DensityMatrix4 {
    let mut rho = apply_channel(rho0, &adc_kraus_two(p_first));
    if let Some(target) = kind.not_target() {
        rho = apply_not(&rho, target);
    }
    apply_channel(&rho, &adc_kraus_two(p_second))
}

/// Entry-by-entry closed forms for the two-population family
/// `u|gg⟩⟨gg| + x|ee⟩⟨ee| + (v|gg⟩⟨ee| + h.c.)` after each pipeline.
///
/// These are written out independently of the Kraus machinery and serve as
/// its cross-check.
pub mod closed_form {
    use super::*;

    /// Populations `[ρ11, ρ22, ρ33, ρ44]` and the one nonzero upper coherence,
    /// located at `(row, col)` with `row < col`.
    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct XEntries {
        pub populations: [f64; 4],
        pub coherence: Complex64,
        pub coherence_at: (usize, usize),
    }

    impl XEntries {
        pub fn matrix(&self) -> Mat4 {
            let mut m = Mat4::diag(self.populations);
            let (r, c) = self.coherence_at;
            m.0[r][c] = self.coherence;
            m.0[c][r] = self.coherence.conj();
            m
        }
    }

    /// Two damping stages with no manipulation.
    pub fn no_not(u: f64, x: f64, v: Complex64, p: f64, pp: f64) -> XEntries {
        let q = 1.0 - p;
        let qq = 1.0 - pp;
        let rho11 = u + p * p * x + pp * pp * q * q * x + 2.0 * pp * q * p * x;
        let rho22 = qq * pp * q * q * x + qq * q * p * x;
        let rho44 = qq * qq * q * q * x;
        XEntries {
            populations: [rho11, rho22, rho22, rho44],
            coherence: v * (qq * q),
            coherence_at: (0, 3),
        }
    }

    /// NOT on both qubits at `pn`, then damping by `pp`.
    pub fn double_not(u: f64, x: f64, v: Complex64, pn: f64, pp: f64) -> XEntries {
        let q = 1.0 - pn;
        let qq = 1.0 - pp;
        let top = u + pn * pn * x;
        let rho11 = q * q * x + 2.0 * pp * q * pn * x + pp * pp * top;
        let rho22 = qq * q * pn * x + qq * pp * top;
        let rho44 = qq * qq * top;
        XEntries {
            populations: [rho11, rho22, rho22, rho44],
            coherence: v.conj() * (qq * q),
            coherence_at: (0, 3),
        }
    }

    /// NOT on qubit one at `pn`, then damping by `pp`.
    pub fn single_not(u: f64, x: f64, v: Complex64, pn: f64, pp: f64) -> XEntries {
        let q = 1.0 - pn;
        let qq = 1.0 - pp;
        let top = u + pn * pn * x;
        let rho11 = pp * q * q * x + q * pn * x + pp * pp * q * pn * x + pp * top;
        let rho22 = qq * q * q * x + qq * pp * q * pn * x;
        let rho33 = qq * pp * q * pn * x + qq * top;
        let rho44 = qq * qq * q * pn * x;
        XEntries {
            populations: [rho11, rho22, rho33, rho44],
            coherence: v.conj() * (qq * q),
            coherence_at: (1, 2),
        }
    }
}
