//! Exact 2×2 complex matrix arithmetic.
//!
//! Everything downstream (Pauli algebra, Bloch Hamiltonians, stabilizer
//! transformations) lives in this representation space, so the type is kept
//! small and copyable with closed-form inverse, determinant and eigenvalues.

use num_complex::Complex64;

use crate::AlgebraError;

/// Tolerance for algebraic identities on 2×2 matrices (double precision,
/// O(10) flops per entry).
pub const ALG_TOL: f64 = 1e-12;

/// A dense 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C2Matrix {
    pub e: [[Complex64; 2]; 2],
}

pub(crate) const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE_C: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I_C: Complex64 = Complex64::new(0.0, 1.0);

impl C2Matrix {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self {
            e: [[a, b], [c, d]],
        }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO_C, ZERO_C, ZERO_C, ZERO_C)
    }

    pub const fn identity() -> Self {
        Self::new(ONE_C, ZERO_C, ZERO_C, ONE_C)
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Self::new(a, ZERO_C, ZERO_C, b)
    }

    /// z·1.
    pub fn scalar(z: Complex64) -> Self {
        Self::diag(z, z)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= z;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.e[0][0], self.e[1][0], self.e[0][1], self.e[1][1])
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[0][1].conj(),
            self.e[1][0].conj(),
            self.e[1][1].conj(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Closed-form inverse; fails when |det| < [`ALG_TOL`].
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let d = self.det();
        if d.norm() < ALG_TOL {
            return Err(AlgebraError::SingularMatrix { det_abs: d.norm() });
        }
        Ok(Self::new(self.e[1][1], -self.e[0][1], -self.e[1][0], self.e[0][0]).scale(ONE_C / d))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        *a * *b - *b * *a
    }

    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        *a * *b + *b * *a
    }

    /// Both eigenvalues from the characteristic polynomial, sorted by
    /// (real, imaginary) part ascending.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace();
        let d = self.det();
        let disc = (t * t - d.scale(4.0)).sqrt();
        let l1 = (t + disc).scale(0.5);
        let l2 = (t - disc).scale(0.5);
        sort_complex_pair(l1, l2)
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The input is not
    /// checked; the Hermitian part is what gets diagonalized.
    pub fn eigenvalues_hermitian(&self) -> [f64; 2] {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let off = (self.e[0][1].norm_sqr() + self.e[1][0].norm_sqr()) * 0.5;
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + off).sqrt();
        [mean - r, mean + r]
    }

    /// Expansion M = c₀·1 + c·σ in the Pauli basis: returns (c₀, [c₁,c₂,c₃]).
    pub fn pauli_coefficients(&self) -> (Complex64, [Complex64; 3]) {
        let c0 = self.trace().scale(0.5);
        let c1 = (self.e[0][1] + self.e[1][0]).scale(0.5);
        let c2 = ((self.e[0][1] - self.e[1][0]) * I_C).scale(0.5);
        let c3 = (self.e[0][0] - self.e[1][1]).scale(0.5);
        (c0, [c1, c2, c3])
    }

    /// Rebuild c₀·1 + c·σ.
    pub fn from_pauli_coefficients(c0: Complex64, c: [Complex64; 3]) -> Self {
        Self::new(c0 + c[2], c[0] - I_C * c[1], c[0] + I_C * c[1], c0 - c[2])
    }
}

pub(crate) fn sort_complex_pair(a: Complex64, b: Complex64) -> [Complex64; 2] {
    if (a.re, a.im) <= (b.re, b.im) {
        [a, b]
    } else {
        [b, a]
    }
}

impl std::ops::Add for C2Matrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }
}

impl std::ops::Sub for C2Matrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }
}

impl std::ops::Mul for C2Matrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }
}

impl std::ops::Neg for C2Matrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE_C)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_roundtrip() {
        let m = C2Matrix::new(c(1.0, 0.5), c(-2.0, 1.0), c(0.3, 0.0), c(4.0, -1.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).approx_eq(&C2Matrix::identity(), 1e-14));
        assert!((inv * m).approx_eq(&C2Matrix::identity(), 1e-14));
    }

    #[test]
    fn singular_rejected() {
        let m = C2Matrix::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0));
        assert!(matches!(
            m.inverse(),
            Err(AlgebraError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn eigenvalues_diag() {
        let m = C2Matrix::diag(c(3.0, 0.0), c(-1.0, 0.0));
        let [lo, hi] = m.eigenvalues();
        assert!((lo - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((hi - c(3.0, 0.0)).norm() < 1e-15);
        let [a, b] = m.eigenvalues_hermitian();
        assert_eq!((a, b), (-1.0, 3.0));
    }

    #[test]
    fn eigenvalue_routes_agree_on_hermitian() {
        // char-poly route vs closed Hermitian formula
        let m = C2Matrix::new(c(0.7, 0.0), c(0.2, -0.9), c(0.2, 0.9), c(-1.3, 0.0));
        let gen = m.eigenvalues();
        let herm = m.eigenvalues_hermitian();
        assert!((gen[0].re - herm[0]).abs() < 1e-14);
        assert!((gen[1].re - herm[1]).abs() < 1e-14);
        assert!(gen[0].im.abs() < 1e-14 && gen[1].im.abs() < 1e-14);
    }

    #[test]
    fn pauli_coefficient_roundtrip() {
        let m = C2Matrix::new(c(1.0, 2.0), c(-0.3, 0.4), c(0.9, -1.1), c(0.0, 0.7));
        let (c0, cv) = m.pauli_coefficients();
        let back = C2Matrix::from_pauli_coefficients(c0, cv);
        assert!(m.approx_eq(&back, 1e-15));
    }
}
