//! Partial transpose, negativity and purity.

use crate::linalg::{eig_hermitian4, x_block_spectrum, Mat4, Spectrum4};
use crate::state::DensityMatrix4;

/// Which qubit's indices a partial transpose acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Subsystem {
    QubitOne,
    #[default]
    QubitTwo,
}

/// Transposes the indices of one qubit: for `QubitTwo`,
/// `ρ[(i j),(k l)] → ρ[(i l),(k j)]`.
pub fn partial_transpose(m: &Mat4, which: Subsystem) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let (r, c) = match which {
                        Subsystem::QubitTwo => (2 * i + l, 2 * k + j),
                        Subsystem::QubitOne => (2 * k + j, 2 * i + l),
                    };
                    out.0[r][c] = m.0[2 * i + j][2 * k + l];
                }
            }
        }
    }
    out
}

/// Spectrum of the partial transpose. X-shaped inputs take the closed-form
/// block path; anything else goes through the Jacobi solver.
pub fn pt_spectrum(rho: &DensityMatrix4, which: Subsystem) -> Spectrum4 {
    let pt = partial_transpose(rho.matrix(), which);
    x_block_spectrum(&pt).unwrap_or_else(|| {
        // A valid density matrix is Hermitian, and so is its partial transpose.
        eig_hermitian4(&pt).expect("partial transpose of a density matrix is Hermitian")
    })
}

/// Spectrum of the partial transpose computed by Jacobi rotations only.
pub fn pt_spectrum_jacobi(rho: &DensityMatrix4, which: Subsystem) -> Spectrum4 {
    let pt = partial_transpose(rho.matrix(), which);
    eig_hermitian4(&pt).expect("partial transpose of a density matrix is Hermitian")
}

/// Smallest eigenvalue of the partial transpose over qubit two. Negative
/// exactly when the state is entangled.
pub fn min_pt_eigenvalue(rho: &DensityMatrix4) -> f64 {
    pt_spectrum(rho, Subsystem::QubitTwo).min()
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &DensityMatrix4) -> f64 {
    negativity_with(rho, Subsystem::QubitTwo)
}

pub fn negativity_with(rho: &DensityMatrix4, which: Subsystem) -> f64 {
    negative_mass(&pt_spectrum(rho, which))
}

pub(crate) fn negative_mass(s: &Spectrum4) -> f64 {
    s.0.iter().filter(|&&l| l < 0.0).fold(0.0, |acc, l| acc - l)
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix4) -> f64 {
    purity_of(rho.matrix())
}

/// `Tr(M²)` for a Hermitian `M`, i.e. the squared Frobenius norm.
pub(crate) fn purity_of(m: &Mat4) -> f64 {
    m.0.iter().flatten().map(|z| z.norm_sqr()).sum()
}
