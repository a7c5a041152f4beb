//! Two-qubit states, basis conventions and decay parameters.
//!
//! The canonical basis is ground-first, `[gg, ge, eg, ee]`, with qubit one as
//! the left tensor factor. For photons, `g ↔ H` and `e ↔ V`, so index 0 is
//! `|HH⟩` and index 3 is `|VV⟩`.
//!
//! Parameter sets written in the excited-first convention (`a` = population of
//! `|ee⟩`, `d` = population of `|gg⟩`) are converted at construction time.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{EsdError, Result};
use crate::linalg::{eig_hermitian4, Mat4, Spectrum4};
use crate::measures;

/// Tolerances shared by every density-matrix check.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// One label of the canonical two-qubit basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    GG,
    GE,
    EG,
    EE,
}

impl Basis {
    pub const ORDER: [Basis; 4] = [Basis::GG, Basis::GE, Basis::EG, Basis::EE];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Polarization label of the same ket, e.g. `HV` for `GE`.
    pub fn photon_label(self) -> &'static str {
        match self {
            Basis::GG => "HH",
            Basis::GE => "HV",
            Basis::EG => "VH",
            Basis::EE => "VV",
        }
    }
}

/// A damping probability `p ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct DecayProbability(f64);

impl DecayProbability {
    pub const ZERO: DecayProbability = DecayProbability(0.0);
    pub const ONE: DecayProbability = DecayProbability(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EsdError::OutOfRange {
                name: "p",
                value: p,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(DecayProbability(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Survival amplitude squared, `1 - p`.
    pub fn survival(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for DecayProbability {
    type Error = EsdError;

    fn try_from(p: f64) -> Result<Self> {
        DecayProbability::new(p)
    }
}

/// Orientation of a damping half-wave plate in degrees, `θ ∈ [0°, 45°]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct HwpAngle(f64);

impl HwpAngle {
    pub fn degrees(theta: f64) -> Result<Self> {
        if !(0.0..=45.0).contains(&theta) {
            return Err(EsdError::OutOfRange {
                name: "theta",
                value: theta,
                min: 0.0,
                max: 45.0,
            });
        }
        Ok(HwpAngle(theta))
    }

    pub fn as_degrees(self) -> f64 {
        self.0
    }

    /// Inverse of [`hwp_to_prob`].
    pub fn from_prob(p: DecayProbability) -> Self {
        HwpAngle(p.value().sqrt().asin().to_degrees() / 2.0)
    }
}

/// Decay probability realised by a plate at `theta`: `sin²(2θ)`.
pub fn hwp_to_prob(theta: HwpAngle) -> DecayProbability {
    let s = (2.0 * theta.0.to_radians()).sin();
    // clamp guards sin(90°) rounding a hair above 1
    DecayProbability((s * s).clamp(0.0, 1.0))
}

/// Parameters of an X-state with coherence between `|gg⟩` and `|ee⟩`.
///
/// `u` and `x` are the `|gg⟩` and `|ee⟩` populations, `b_pop` and `c_pop` the
/// `|eg⟩` and `|ge⟩` populations, and `v = ρ[gg][ee]`. The pure-state family
/// `|α||gg⟩ + |β|e^{iδ}|ee⟩` is the case `b_pop = c_pop = 0`, `v = αβ*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuterXParams {
    pub u: f64,
    pub x: f64,
    pub b_pop: f64,
    pub c_pop: f64,
    pub v: Complex64,
}

impl OuterXParams {
    /// Checks that populations lie in `[0, 1]` and sum to one. Positivity of
    /// the matrix is checked by [`DensityMatrix4::from_outer_x`].
    pub fn new(u: f64, x: f64, b_pop: f64, c_pop: f64, v: Complex64) -> Result<Self> {
        check_populations(&[("u", u), ("x", x), ("b", b_pop), ("c", c_pop)])?;
        check_finite_complex(v)?;
        Ok(OuterXParams {
            u,
            x,
            b_pop,
            c_pop,
            v,
        })
    }

    /// The two-population family `u|gg⟩⟨gg| + x|ee⟩⟨ee| + (v|gg⟩⟨ee| + h.c.)`.
    pub fn two_level(u: f64, x: f64, v: Complex64) -> Result<Self> {
        Self::new(u, x, 0.0, 0.0, v)
    }

    /// Excited-first labels: `a` on `|ee⟩`, `d` on `|gg⟩`, `b` on `|eg⟩`,
    /// `c` on `|ge⟩`, and `z = ρ[ee][gg]`.
    pub fn from_excited_first(a: f64, b: f64, c: f64, d: f64, z: Complex64) -> Result<Self> {
        check_populations(&[("a", a), ("b", b), ("c", c), ("d", d)])?;
        check_finite_complex(z)?;
        Ok(OuterXParams {
            u: d,
            x: a,
            b_pop: b,
            c_pop: c,
            v: z.conj(),
        })
    }

    /// `(a, b, c, d, |z|)` in the excited-first labels.
    pub fn excited_first(&self) -> (f64, f64, f64, f64, f64) {
        (self.x, self.b_pop, self.c_pop, self.u, self.v.norm())
    }

    pub fn v_abs(&self) -> f64 {
        self.v.norm()
    }

    /// Positivity requires `|v|² ≤ u·x`.
    pub fn is_positive(&self) -> bool {
        self.v.norm_sqr() <= self.u * self.x + NORM_TOL
    }

    pub fn matrix(&self) -> Mat4 {
        let mut m = Mat4::diag([self.u, self.c_pop, self.b_pop, self.x]);
        m.0[0][3] = self.v;
        m.0[3][0] = self.v.conj();
        m
    }
}

/// Parameters of an X-state with coherence between `|ge⟩` and `|eg⟩`, in the
/// excited-first labels: `a` on `|ee⟩`, `b` on `|eg⟩`, `c` on `|ge⟩`, `d` on
/// `|gg⟩`, and `z = ρ[ge][eg]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerXParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z: Complex64,
}

impl InnerXParams {
    /// Checks populations only; positivity is checked by
    /// [`DensityMatrix4::from_inner_x`].
    pub fn new(a: f64, b: f64, c: f64, d: f64, z: Complex64) -> Result<Self> {
        check_populations(&[("a", a), ("b", b), ("c", c), ("d", d)])?;
        check_finite_complex(z)?;
        Ok(InnerXParams { a, b, c, d, z })
    }

    /// Positivity requires `|z|² ≤ b·c`.
    pub fn is_positive(&self) -> bool {
        self.z.norm_sqr() <= self.b * self.c + NORM_TOL
    }

    pub fn matrix(&self) -> Mat4 {
        let mut m = Mat4::diag([self.d, self.c, self.b, self.a]);
        m.0[1][2] = self.z;
        m.0[2][1] = self.z.conj();
        m
    }
}

fn check_populations(pops: &[(&'static str, f64)]) -> Result<()> {
    for &(name, value) in pops {
        if !(0.0..=1.0).contains(&value) {
            return Err(EsdError::OutOfRange {
                name,
                value,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    let sum: f64 = pops.iter().map(|&(_, v)| v).sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(EsdError::PopulationSum { sum });
    }
    Ok(())
}

fn check_finite_complex(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(EsdError::NonFinite)
    }
}

/// A two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4 {
    m: Mat4,
}

impl DensityMatrix4 {
    /// Validates `m` and wraps it.
    pub fn new(m: Mat4) -> Result<Self> {
        let report = validate_density(&m);
        if !m.is_finite() {
            return Err(EsdError::NonFinite);
        }
        if report.hermiticity_defect > HERMITIAN_TOL {
            return Err(EsdError::NotHermitian {
                defect: report.hermiticity_defect,
            });
        }
        if report.trace_defect > TRACE_TOL {
            return Err(EsdError::TraceDefect {
                trace: m.trace().re,
            });
        }
        if report.min_eigenvalue < -PSD_TOL {
            return Err(EsdError::NotPositiveSemidefinite {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(DensityMatrix4 { m })
    }

    /// Wraps `m` without any checks.
    ///
    /// Used for outputs of trace-preserving maps on valid inputs, and for
    /// evaluating closed-form parameter sets that lie just outside the
    /// physical region (e.g. rounded reference values).
    pub fn new_unchecked(m: Mat4) -> Self {
        DensityMatrix4 { m }
    }

    /// `|α||gg⟩ + |β|e^{iδ}|ee⟩`, giving `ρ[gg][ee] = |α||β|e^{-iδ}`.
    pub fn from_pure(alpha_mag: f64, beta_mag: f64, delta: f64) -> Result<Self> {
        if alpha_mag < 0.0 || beta_mag < 0.0 {
            return Err(EsdError::InvalidArgument(
                "amplitude magnitudes must be non-negative".into(),
            ));
        }
        let norm = alpha_mag * alpha_mag + beta_mag * beta_mag;
        if !norm.is_finite() || !delta.is_finite() {
            return Err(EsdError::NonFinite);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(EsdError::NotNormalized { norm });
        }
        let psi = [
            Complex64::new(alpha_mag, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(beta_mag, delta),
        ];
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = psi[i] * psi[j].conj();
            }
        }
        Ok(DensityMatrix4 { m })
    }

    pub fn from_outer_x(params: &OuterXParams) -> Result<Self> {
        if !params.is_positive() {
            return Err(EsdError::CoherenceTooLarge {
                name: "v",
                magnitude: params.v_abs(),
                bound: (params.u * params.x).sqrt(),
            });
        }
        DensityMatrix4::new(params.matrix())
    }

    pub fn from_inner_x(params: &InnerXParams) -> Result<Self> {
        if !params.is_positive() {
            return Err(EsdError::CoherenceTooLarge {
                name: "z",
                magnitude: params.z.norm(),
                bound: (params.b * params.c).sqrt(),
            });
        }
        DensityMatrix4::new(params.matrix())
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix4 {
            m: Mat4::identity().scale(0.25),
        }
    }

    /// `|k⟩⟨k|` for a canonical basis label.
    pub fn basis_state(k: Basis) -> Self {
        let mut values = [0.0; 4];
        values[k.index()] = 1.0;
        DensityMatrix4 {
            m: Mat4::diag(values),
        }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn entry(&self, row: Basis, col: Basis) -> Complex64 {
        self.m.0[row.index()][col.index()]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m.0[i][j]
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.m.0[i][i].re)
    }

    pub fn validate(&self) -> DensityReport {
        validate_density(&self.m)
    }
}

/// Diagnostics for a candidate density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
    pub passed: bool,
}

/// Reports Hermiticity, trace and positivity defects of an arbitrary 4×4 array.
pub fn validate_density(m: &Mat4) -> DensityReport {
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let finite = m.is_finite();
    // Eigenvalues of the Hermitian part; the defect above already flags the rest.
    let herm = (*m + m.adjoint()).scale(0.5);
    let min_eigenvalue = if finite {
        eig_hermitian4(&herm)
            .map(|s: Spectrum4| s.min())
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let purity = if finite {
        measures::purity_of(&herm)
    } else {
        f64::NAN
    };
    let passed = finite
        && hermiticity_defect <= HERMITIAN_TOL
        && trace_defect <= TRACE_TOL
        && min_eigenvalue >= -PSD_TOL;
    DensityReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        purity,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hwp_endpoints() {
        let p = |deg| hwp_to_prob(HwpAngle::degrees(deg).unwrap()).value();
        assert_eq!(p(0.0), 0.0);
        assert!((p(45.0) - 1.0).abs() < 1e-15);
        assert!((p(22.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hwp_rejects_out_of_range() {
        assert!(HwpAngle::degrees(-0.1).is_err());
        assert!(HwpAngle::degrees(45.01).is_err());
    }

    #[test]
    fn hwp_round_trip() {
        for p in [0.0, 0.1, 0.36, 0.5, 0.99, 1.0] {
            let theta = HwpAngle::from_prob(DecayProbability::new(p).unwrap());
            assert!((hwp_to_prob(theta).value() - p).abs() < 1e-14);
        }
    }

    #[test]
    fn decay_probability_range() {
        assert!(DecayProbability::new(1.0000001).is_err());
        assert!(DecayProbability::new(-1e-9).is_err());
        assert!(DecayProbability::new(f64::NAN).is_err());
    }

    #[test]
    fn pure_state_entries() {
        let rho = DensityMatrix4::from_pure(1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt(), 0.0).unwrap();
        assert!((rho.entry(Basis::GG, Basis::GG).re - 0.2).abs() < 1e-15);
        assert!((rho.entry(Basis::EE, Basis::EE).re - 0.8).abs() < 1e-15);
        assert!((rho.entry(Basis::GG, Basis::EE) - c(0.4)).norm() < 1e-15);
        assert!(rho.validate().passed);
        assert!((rho.validate().purity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_phase_convention() {
        let rho = DensityMatrix4::from_pure(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_PI_2).unwrap();
        let expect = Complex64::from_polar(0.5, -FRAC_PI_2);
        assert!((rho.entry(Basis::GG, Basis::EE) - expect).norm() < 1e-15);
        assert!((rho.entry(Basis::EE, Basis::GG) - expect.conj()).norm() < 1e-15);
    }

    #[test]
    fn product_state() {
        let rho = DensityMatrix4::from_pure(1.0, 0.0, 1.234).unwrap();
        assert_eq!(rho, DensityMatrix4::basis_state(Basis::GG));
    }

    #[test]
    fn pure_state_requires_normalization() {
        assert!(matches!(
            DensityMatrix4::from_pure(0.5, 0.5, 0.0),
            Err(EsdError::NotNormalized { .. })
        ));
    }

    #[test]
    fn outer_x_matches_pure() {
        let p = OuterXParams::two_level(0.2, 0.8, c(0.4)).unwrap();
        let a = DensityMatrix4::from_outer_x(&p).unwrap();
        let b = DensityMatrix4::from_pure(1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt(), 0.0).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn outer_x_mixed_state_is_valid() {
        let p = OuterXParams::new(0.2, 0.6, 0.1, 0.1, c(0.3)).unwrap();
        let rho = DensityMatrix4::from_outer_x(&p).unwrap();
        let report = rho.validate();
        assert!(report.passed);
        assert!(report.min_eigenvalue >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn outer_x_rejects_excess_coherence() {
        let p = OuterXParams::two_level(0.5, 0.5, c(0.6)).unwrap();
        assert!(matches!(
            DensityMatrix4::from_outer_x(&p),
            Err(EsdError::CoherenceTooLarge { .. })
        ));
    }

    #[test]
    fn outer_x_population_sum_checked() {
        assert!(matches!(
            OuterXParams::new(0.2, 0.6, 0.1, 0.2, c(0.0)),
            Err(EsdError::PopulationSum { .. })
        ));
    }

    #[test]
    fn excited_first_labels_are_reversed() {
        let p = OuterXParams::from_excited_first(0.8, 0.0, 0.0, 0.2, c(0.4)).unwrap();
        assert_eq!((p.u, p.x), (0.2, 0.8));
        let rho = DensityMatrix4::from_outer_x(&p).unwrap();
        assert!((rho.entry(Basis::EE, Basis::EE).re - 0.8).abs() < 1e-15);
        let q = OuterXParams::from_excited_first(0.5, 0.2, 0.1, 0.2, c(0.3)).unwrap();
        let rho = DensityMatrix4::from_outer_x(&q).unwrap();
        assert_eq!(rho.populations(), [0.2, 0.1, 0.2, 0.5]);
    }

    #[test]
    fn inner_x_placement() {
        let p = InnerXParams::new(1.0, 0.0, 0.0, 0.0, c(0.0)).unwrap();
        let rho = DensityMatrix4::from_inner_x(&p).unwrap();
        assert_eq!(rho, DensityMatrix4::basis_state(Basis::EE));

        let p = InnerXParams::new(0.0, 0.5, 0.5, 0.0, Complex64::new(0.3, 0.4)).unwrap();
        let rho = DensityMatrix4::from_inner_x(&p).unwrap();
        assert_eq!(rho.entry(Basis::GE, Basis::EG), Complex64::new(0.3, 0.4));
        assert!(rho.validate().passed);
    }

    #[test]
    fn inner_x_rejects_non_positive_example() {
        // |z| = 0.25 exceeds sqrt(bc) = 0.2; the inner block has eigenvalue -0.05
        let p = InnerXParams::new(0.4, 0.2, 0.2, 0.2, c(0.25)).unwrap();
        assert!(!p.is_positive());
        assert!(DensityMatrix4::from_inner_x(&p).is_err());
        let report = validate_density(&p.matrix());
        assert!((report.min_eigenvalue + 0.05).abs() < 1e-14);
        assert!(!report.passed);
    }

    #[test]
    fn validate_maximally_mixed() {
        let r = DensityMatrix4::maximally_mixed().validate();
        assert!(r.passed);
        assert!((r.min_eigenvalue - 0.25).abs() < 1e-15);
        assert!((r.purity - 0.25).abs() < 1e-15);
    }

    #[test]
    fn validate_flags_negative_block() {
        let mut m = Mat4::diag([0.5, 0.0, 0.0, 0.5]);
        m.0[0][3] = c(0.9);
        m.0[3][0] = c(0.9);
        let r = validate_density(&m);
        assert!(!r.passed);
        assert!((r.min_eigenvalue - (0.5 - 0.9)).abs() < 1e-14);
    }

    #[test]
    fn validate_flags_non_hermitian_and_trace() {
        let mut m = Mat4::diag([0.25; 4]);
        m.0[0][1] = c(0.1);
        assert!(!validate_density(&m).passed);
        let m = Mat4::diag([0.5; 4]);
        let r = validate_density(&m);
        assert!(!r.passed);
        assert!((r.trace_defect - 1.0).abs() < 1e-15);
    }
}
