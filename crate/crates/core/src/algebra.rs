//! Pauli and Dirac matrix sets, SL(2,ℂ) stabilizer elements, and the induced
//! linear actions on the σ and γ bases.
//!
//! The similarity convention throughout is `M ↦ S⁻¹ M S`. With that fixed,
//! the two named one-parameter subgroups are
//!
//! - rotation about y: S = exp(−i ϑ σ₂ / 2), giving
//!   S⁻¹σ₃S = cos ϑ σ₃ − sin ϑ σ₁ (Hermitian deformations);
//! - boost: S = exp(+φ σ₂ / 2), giving
//!   S⁻¹σ₃S = cosh φ σ₃ − i sinh φ σ₁ (non-Hermitian, PT-symmetric
//!   deformations). The sign of the exponent is tied to this target: it is
//!   the ϑ ↦ iφ continuation of the rotation above.

use num_complex::Complex64;

use crate::matrix::{sort_complex_pair, C2Matrix, ALG_TOL, I_C, ONE_C, ZERO_C};
use crate::AlgebraError;

/// 3×3 complex matrix, row-major; carries the induced action on the σ or γ
/// basis.
pub type C3Matrix = [[Complex64; 3]; 3];

/// Standard Pauli matrix σᵢ, 1-based index.
pub fn pauli(i: usize) -> Result<C2Matrix, AlgebraError> {
    match i {
        1 => Ok(C2Matrix::new(ZERO_C, ONE_C, ONE_C, ZERO_C)),
        2 => Ok(C2Matrix::new(ZERO_C, -I_C, I_C, ZERO_C)),
        3 => Ok(C2Matrix::new(ONE_C, ZERO_C, ZERO_C, -ONE_C)),
        _ => Err(AlgebraError::PauliIndex { index: i }),
    }
}

pub(crate) fn sigma(i: usize) -> C2Matrix {
    pauli(i).expect("index in 1..=3")
}

/// a·σ for a complex 3-vector.
pub fn sigma_dot(a: [Complex64; 3]) -> C2Matrix {
    sigma(1).scale(a[0]) + sigma(2).scale(a[1]) + sigma(3).scale(a[2])
}

/// The 2+1-dimensional Dirac set γ₀ = σ₃, γ₁ = σ₃σ₁, γ₂ = σ₃σ₂ with metric
/// η = diag(+1, −1, −1), satisfying {γ_μ, γ_ν} = 2 η_{μν} 𝟙.
#[derive(Clone, Copy, Debug)]
pub struct GammaSet {
    pub gamma: [C2Matrix; 3],
}

/// Signature of the 2+1 metric.
pub const METRIC: [f64; 3] = [1.0, -1.0, -1.0];

impl GammaSet {
    pub fn standard() -> Self {
        let s3 = sigma(3);
        Self {
            gamma: [s3, s3 * sigma(1), s3 * sigma(2)],
        }
    }

    /// Max entrywise deviation of {γ_μ, γ_ν} from 2 η_{μν} 𝟙 over all pairs.
    pub fn anticommutation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (mu, eta) in METRIC.iter().enumerate() {
            for nu in 0..3 {
                let anti = C2Matrix::anticommutator(&self.gamma[mu], &self.gamma[nu]);
                let target = if mu == nu {
                    C2Matrix::scalar(Complex64::new(2.0 * eta, 0.0))
                } else {
                    C2Matrix::zero()
                };
                worst = worst.max((anti - target).max_abs());
            }
        }
        worst
    }

    /// The set {S⁻¹ γ_μ S}.
    pub fn conjugated(&self, s: &C2Matrix) -> Result<Self, AlgebraError> {
        let inv = s.inverse()?;
        Ok(Self {
            gamma: [
                inv * self.gamma[0] * *s,
                inv * self.gamma[1] * *s,
                inv * self.gamma[2] * *s,
            ],
        })
    }
}

/// How a stabilizer element was constructed.
#[derive(Clone, Copy, Debug)]
pub enum StabilizerKind {
    /// exp(−i ϑ (n̂·σ) / 2) for a real unit axis — unitary.
    Rotation { axis: [f64; 3], angle: f64 },
    /// exp(+φ σ₂ / 2) — Hermitian, non-unitary.
    Boost { rapidity: f64 },
    /// exp(−i a·σ) for arbitrary complex a.
    General { a: [Complex64; 3] },
}

/// An SL(2,ℂ) element together with its generator decomposition.
#[derive(Clone, Copy, Debug)]
pub struct StabilizerElement {
    pub matrix: C2Matrix,
    pub kind: StabilizerKind,
}

impl StabilizerElement {
    pub fn identity() -> Self {
        Self::rotation_y(0.0)
    }

    /// Closed-form exponential S = exp(−i a·σ).
    ///
    /// With z² = a·a (unrestricted complex dot product),
    /// S = cos(√z²) 𝟙 − i sinc(√z²) (a·σ). cos and sinc are even, so the
    /// branch of the square root drops out; near z² = 0 both are summed as
    /// series in z², which handles nilpotent generators (a·a = 0, a ≠ 0)
    /// exactly: S = 𝟙 − i(a·σ).
    pub fn exp_generator(a: [Complex64; 3]) -> Self {
        let z2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        let (cos_w, sinc_w) = cos_sinc(z2);
        let matrix = C2Matrix::scalar(cos_w) + sigma_dot(a).scale(-I_C * sinc_w);
        Self {
            matrix,
            kind: StabilizerKind::General { a },
        }
    }

    /// Unitary rotation exp(−i ϑ (n̂·σ)/2) about a real axis.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self, AlgebraError> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if norm < ALG_TOL {
            return Err(AlgebraError::ZeroAxis);
        }
        let half = 0.5 * angle / norm;
        let a = [
            Complex64::new(axis[0] * half, 0.0),
            Complex64::new(axis[1] * half, 0.0),
            Complex64::new(axis[2] * half, 0.0),
        ];
        let matrix = Self::exp_generator(a).matrix;
        Ok(Self {
            matrix,
            kind: StabilizerKind::Rotation {
                axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
                angle,
            },
        })
    }

    /// exp(−i ϑ σ₂ / 2), the rotation that generates the deformed Hermitian
    /// coupling tables.
    pub fn rotation_y(angle: f64) -> Self {
        Self::rotation([0.0, 1.0, 0.0], angle).expect("unit axis")
    }

    /// exp(−i a₃ σ₃), a pure phase twist of the couplings.
    pub fn rotation_z(angle: f64) -> Self {
        Self::rotation([0.0, 0.0, 1.0], angle).expect("unit axis")
    }

    /// Boost exp(+φ σ₂ / 2) = cosh(φ/2) 𝟙 + sinh(φ/2) σ₂; equals the ϑ ↦ iφ
    /// continuation of [`Self::rotation_y`], so S⁻¹σ₃S = cosh φ σ₃ − i sinh φ σ₁
    /// and the induced γ action is the real (γ₀, γ₂) boost with entries
    /// cosh φ, sinh φ.
    pub fn boost(rapidity: f64) -> Self {
        let a = [ZERO_C, Complex64::new(0.0, 0.5 * rapidity), ZERO_C];
        let matrix = Self::exp_generator(a).matrix;
        Self {
            matrix,
            kind: StabilizerKind::Boost { rapidity },
        }
    }

    /// Inverse via the unit determinant: [[d, −b], [−c, a]].
    pub fn inverse_matrix(&self) -> C2Matrix {
        let m = &self.matrix;
        C2Matrix::new(m.e[1][1], -m.e[0][1], -m.e[1][0], m.e[0][0])
    }

    /// S⁻¹ M S.
    pub fn conjugate(&self, m: &C2Matrix) -> C2Matrix {
        self.inverse_matrix() * *m * self.matrix
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.matrix.adjoint() * self.matrix).approx_eq(&C2Matrix::identity(), tol)
    }
}

/// cos(√z²) and sinc(√z²) as single-valued functions of z².
fn cos_sinc(z2: Complex64) -> (Complex64, Complex64) {
    if z2.norm() < 1e-8 {
        // Series in z²; at |z²| ≤ 1e-8 the truncation error is below 1e-35.
        let c = ONE_C - z2.scale(0.5) + z2 * z2.scale(1.0 / 24.0) - z2 * z2 * z2.scale(1.0 / 720.0);
        let s = ONE_C - z2.scale(1.0 / 6.0) + z2 * z2.scale(1.0 / 120.0)
            - z2 * z2 * z2.scale(1.0 / 5040.0);
        (c, s)
    } else {
        let w = z2.sqrt();
        (w.cos(), w.sin() / w)
    }
}

/// General similarity transform S⁻¹ M S with an explicit singularity check.
pub fn conjugate(s: &C2Matrix, m: &C2Matrix) -> Result<C2Matrix, AlgebraError> {
    Ok(s.inverse()? * *m * *s)
}

/// The 3×3 matrix R with S⁻¹ σᵢ S = Σⱼ R᷈ᵢⱼ σⱼ, extracted by trace
/// orthogonality: Rᵢⱼ = ½ tr(σⱼ S⁻¹ σᵢ S).
///
/// Row i holds the expansion of the i-th transformed Pauli matrix, so the
/// composition law reads `sigma_action(S₁S₂) = sigma_action(S₁)·sigma_action(S₂)`.
/// R is complex orthogonal: Rᵀ R = 𝟙₃.
pub fn sigma_action(s: &C2Matrix) -> Result<C3Matrix, AlgebraError> {
    let inv = s.inverse()?;
    let mut r = [[ZERO_C; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        let tilde = inv * sigma(i + 1) * *s;
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (sigma(j + 1) * tilde).trace().scale(0.5);
        }
    }
    Ok(r)
}

/// The 3×3 matrix Λ with S⁻¹ γ_μ S = Λ_μ^ν γ_ν, extracted from
/// tr(γ_ρ γ_ν) = 2 η_{ρν}: Λ_μ^ρ = ½ η^{ρρ} tr(γ_ρ S⁻¹ γ_μ S).
///
/// Λ preserves the metric over ℂ: Λᵀ η Λ = η. It is real for the boost
/// subgroup; a generic SL(2,ℂ) element yields complex entries.
pub fn lorentz_action(s: &C2Matrix) -> Result<C3Matrix, AlgebraError> {
    let inv = s.inverse()?;
    let gammas = GammaSet::standard();
    let mut l = [[ZERO_C; 3]; 3];
    for (mu, row) in l.iter_mut().enumerate() {
        let tilde = inv * gammas.gamma[mu] * *s;
        for (nu, entry) in row.iter_mut().enumerate() {
            let t = (gammas.gamma[nu] * tilde).trace();
            *entry = t.scale(0.5 / METRIC[nu]);
        }
    }
    Ok(l)
}

// ---- small 3×3 helpers ----

pub fn mat3_identity() -> C3Matrix {
    let mut m = [[ZERO_C; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE_C;
    }
    m
}

pub fn mat3_mul(a: &C3Matrix, b: &C3Matrix) -> C3Matrix {
    let mut out = [[ZERO_C; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

pub fn mat3_transpose(a: &C3Matrix) -> C3Matrix {
    let mut out = [[ZERO_C; 3]; 3];
    for i in 0..3 {
        for (j, row) in a.iter().enumerate() {
            out[i][j] = row[i];
        }
    }
    out
}

pub fn mat3_max_abs_diff(a: &C3Matrix, b: &C3Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// Residual of the metric-preservation identity Λᵀ η Λ = η.
pub fn metric_preservation_residual(l: &C3Matrix) -> f64 {
    let mut eta = [[ZERO_C; 3]; 3];
    for (i, row) in eta.iter_mut().enumerate() {
        row[i] = Complex64::new(METRIC[i], 0.0);
    }
    let lt = mat3_transpose(l);
    let prod = mat3_mul(&mat3_mul(&lt, &eta), l);
    mat3_max_abs_diff(&prod, &eta)
}

/// Sorted eigenvalue pair of S⁻¹ M S rebuilt from the σ-action applied to the
/// Pauli coefficients of M (test oracle for the reconstruction property).
pub fn reconstruct_conjugation(s: &C2Matrix, m: &C2Matrix) -> Result<C2Matrix, AlgebraError> {
    let (c0, c) = m.pauli_coefficients();
    let r = sigma_action(s)?;
    let mut ct = [ZERO_C; 3];
    for (j, out) in ct.iter_mut().enumerate() {
        for (i, ci) in c.iter().enumerate() {
            *out += *ci * r[i][j];
        }
    }
    Ok(C2Matrix::from_pauli_coefficients(c0, ct))
}

/// Random SL(2,ℂ) element of kind `general` with generator norm ≤ `radius`.
pub fn random_element(rng: &mut crate::rng::SplitMix64, radius: f64) -> StabilizerElement {
    loop {
        let a = [
            rng.complex_in_box(radius),
            rng.complex_in_box(radius),
            rng.complex_in_box(radius),
        ];
        let norm = (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt();
        if norm <= radius && norm > 1e-3 {
            return StabilizerElement::exp_generator(a);
        }
    }
}

/// Sorted eigenvalues of a 2×2 matrix, by (re, im); shared by the
/// isospectrality checks.
pub fn sorted_eigenvalues(m: &C2Matrix) -> [Complex64; 2] {
    let [a, b] = m.eigenvalues();
    sort_complex_pair(a, b)
}
