//! Fixed-size complex matrices and a Hermitian eigensolver for the 4×4 case.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{EsdError, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

/// A 4×4 complex matrix, row-major. Indices follow the two-qubit basis
/// `[gg, ge, eg, ee]`, with qubit one as the left tensor factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4(pub [[Complex64; 4]; 4]);

impl Mat2 {
    pub fn zeros() -> Self {
        Mat2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Mat2) -> Mat4 {
        let mut out = Mat4::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        out.0[2 * a + c][2 * b + d] = self.0[a][b] * rhs.0[c][d];
                    }
                }
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }
}

impl Mat4 {
    pub fn zeros() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(values: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in values.into_iter().enumerate() {
            m.0[i][i] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    /// `self · rho · self†`
    pub fn conjugate(&self, rho: &Mat4) -> Mat4 {
        *self * *rho * self.adjoint()
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True when every entry off the diagonal and anti-diagonal vanishes.
    pub fn is_x_shaped(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.0[i][j].norm() <= tol))
    }
}

impl Add for Mat4 {
    type Output = Mat4;

    fn add(self, rhs: Mat4) -> Mat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat4 {
    type Output = Mat4;

    fn sub(self, rhs: Mat4) -> Mat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Mul for Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum4(pub [f64; 4]);

impl Spectrum4 {
    fn sorted(mut values: [f64; 4]) -> Self {
        values.sort_by(f64::total_cmp);
        Spectrum4(values)
    }

    pub fn min(&self) -> f64 {
        self.0[0]
    }

    pub fn max(&self) -> f64 {
        self.0[3]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 50;
/// Relative pivot threshold: `|h_pq| <= REL_TOL * sqrt(|h_pp h_qq|)` is treated as zero.
const REL_TOL: f64 = f64::EPSILON;

/// Eigenvalues of a Hermitian 4×4 matrix by cyclic complex Jacobi rotations.
///
/// Each pivot is first made real by a diagonal phase, then annihilated with a
/// real plane rotation. A pivot is skipped only when it is negligible relative
/// to the geometric mean of its two diagonal entries, which keeps tiny
/// eigenvalues accurate in a relative sense (needed near full decay, where the
/// partial-transpose spectrum has entries of order `(1-p')²`).
pub fn eig_hermitian4(m: &Mat4) -> Result<Spectrum4> {
    if !m.is_finite() {
        return Err(EsdError::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
        return Err(EsdError::NotHermitian { defect });
    }
    // Symmetrize so round-off in the input cannot leak into the rotations.
    let mut h = *m;
    for i in 0..4 {
        h.0[i][i] = Complex64::new(h.0[i][i].re, 0.0);
        for j in (i + 1)..4 {
            let avg = (h.0[i][j] + h.0[j][i].conj()) * 0.5;
            h.0[i][j] = avg;
            h.0[j][i] = avg.conj();
        }
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotated |= rotate(&mut h, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(Spectrum4::sorted([
        h.0[0][0].re,
        h.0[1][1].re,
        h.0[2][2].re,
        h.0[3][3].re,
    ]))
}

/// Annihilate `h[p][q]`; returns false when the pivot was already negligible.
fn rotate(h: &mut Mat4, p: usize, q: usize) -> bool {
    let off = h.0[p][q];
    let g = off.norm();
    let app = h.0[p][p].re;
    let aqq = h.0[q][q].re;
    if g == 0.0 || g <= REL_TOL * (app.abs() * aqq.abs()).sqrt() {
        return false;
    }
    // Phase the q-th row/column so that h[p][q] becomes the real number g.
    let phase = off / g;
    for r in 0..4 {
        if r != q {
            h.0[r][q] *= phase.conj();
            h.0[q][r] = h.0[r][q].conj();
        }
    }
    h.0[p][q] = Complex64::new(g, 0.0);
    h.0[q][p] = Complex64::new(g, 0.0);

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        1.0 / (2.0 * theta)
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for r in 0..4 {
        if r == p || r == q {
            continue;
        }
        let hrp = h.0[r][p];
        let hrq = h.0[r][q];
        h.0[r][p] = hrp * c - hrq * s;
        h.0[r][q] = hrp * s + hrq * c;
        h.0[p][r] = h.0[r][p].conj();
        h.0[q][r] = h.0[r][q].conj();
    }
    h.0[p][p] = Complex64::new(app - t * g, 0.0);
    h.0[q][q] = Complex64::new(aqq + t * g, 0.0);
    h.0[p][q] = ZERO;
    h.0[q][p] = ZERO;
    true
}

/// Closed-form spectrum of an X-shaped Hermitian matrix: the outer block
/// `{0, 3}` and the inner block `{1, 2}` are independent 2×2 problems.
///
/// Returns `None` if `m` has weight outside the diagonal and anti-diagonal.
pub fn x_block_spectrum(m: &Mat4) -> Option<Spectrum4> {
    if !m.is_x_shaped(0.0) {
        return None;
    }
    let block = |i: usize, j: usize| {
        let a = m.0[i][i].re;
        let d = m.0[j][j].re;
        let off = m.0[i][j].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + off * off).sqrt();
        let hi = mean + radius;
        // Product of the two eigenvalues is the block determinant; dividing it
        // by the large one avoids cancellation in the small one.
        let lo = if hi != 0.0 {
            (a * d - off * off) / hi
        } else {
            mean - radius
        };
        [lo, hi]
    };
    let [a, b] = block(0, 3);
    let [c, d] = block(1, 2);
    Some(Spectrum4::sorted([a, b, c, d]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_places_blocks() {
        let x = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
        let id = Mat2::identity();
        let xi = x.kron(&id);
        // σx ⊗ I swaps |0b> with |1b>
        assert_eq!(xi.get(0, 2), ONE);
        assert_eq!(xi.get(1, 3), ONE);
        assert_eq!(xi.get(0, 0), ZERO);
    }

    #[test]
    fn identity_spectrum() {
        let s = eig_hermitian4(&Mat4::identity()).unwrap();
        assert_eq!(s.0, [1.0; 4]);
    }

    #[test]
    fn diagonal_spectrum() {
        let s = eig_hermitian4(&Mat4::diag([0.3, 0.1, 0.4, 0.2])).unwrap();
        assert_eq!(s.0, [0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Mat4::identity();
        m.0[0][1] = c(0.5, 0.0);
        assert!(matches!(
            eig_hermitian4(&m),
            Err(EsdError::NotHermitian { .. })
        ));
    }

    #[test]
    fn dense_complex_matrix_matches_characteristic_checks() {
        // Hermitian with every off-diagonal entry populated.
        let mut m = Mat4::zeros();
        let entries = [
            (0, 1, c(0.3, -0.2)),
            (0, 2, c(-0.1, 0.4)),
            (0, 3, c(0.05, 0.05)),
            (1, 2, c(0.2, 0.1)),
            (1, 3, c(-0.3, 0.0)),
            (2, 3, c(0.0, -0.25)),
        ];
        for (i, j, z) in entries {
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
        for (i, d) in [1.0, -0.5, 0.25, 2.0].into_iter().enumerate() {
            m.0[i][i] = c(d, 0.0);
        }
        let s = eig_hermitian4(&m).unwrap();
        // trace and Frobenius norm are spectral invariants
        assert!((s.sum() - m.trace().re).abs() < 1e-13);
        let sq: f64 = s.0.iter().map(|l| l * l).sum();
        assert!((sq - m.frobenius_norm().powi(2)).abs() < 1e-12);
        // each eigenvalue makes (m - λI) singular: check via a shifted solve residual
        for lambda in s.0 {
            let shifted = m - Mat4::identity().scale(lambda);
            let sigma = eig_hermitian4(&(shifted.adjoint() * shifted)).unwrap();
            assert!(sigma.min().abs() < 1e-12, "λ={lambda} σmin={}", sigma.min());
        }
    }

    #[test]
    fn x_block_path_matches_jacobi() {
        let mut m = Mat4::diag([0.30368, 0.18432, 0.18432, 0.32768]);
        m.0[1][2] = c(0.256, 0.0);
        m.0[2][1] = c(0.256, 0.0);
        let a = eig_hermitian4(&m).unwrap();
        let b = x_block_spectrum(&m).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
        assert!((a.min() - (0.18432 - 0.256)).abs() < 1e-15);
    }

    #[test]
    fn tiny_eigenvalue_keeps_its_sign() {
        // outer block [[r, s c], [s c, s² d]] with d < c²/r: eigenvalue ≈ s²(d - c²/r) < 0
        let s = 1e-12;
        let (r, cc, d) = (0.6, 0.3, 0.1);
        let mut m = Mat4::diag([r, 0.2, 0.2, s * s * d]);
        m.0[0][3] = c(s * cc, 0.0);
        m.0[3][0] = c(s * cc, 0.0);
        let expect = s * s * (d - cc * cc / r);
        let got = eig_hermitian4(&m).unwrap().min();
        assert!(got < 0.0);
        assert!(((got - expect) / expect).abs() < 1e-6, "{got} vs {expect}");
    }
}
