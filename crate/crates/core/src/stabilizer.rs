//! Stabilizer-group deformations of the lattice models: transformed Bloch
//! Hamiltonians, the Foldy–Wouthuysen diagonalization, and the deformed
//! real-space coupling tables.
//!
//! Coupling tables are not transcribed from closed-form expressions: they
//! are derived by expanding S⁻¹ H(k) S in harmonics of the cell-gauge
//! kernel. Since S acts only in quasi-spin space and commutes with the
//! kinetic operators, H̃(k) = E₀𝟙 + Σⱼ Π̃ⱼ(k) σⱼ with
//! Π̃ⱼ = Π₁ R₁ⱼ + Π₂ R₂ⱼ + μ R₃ⱼ and R the σ-action of S; each Πᵢ(k) is a
//! finite harmonic sum, so every entry of H̃(k) maps back to a finite hop
//! list. The assembled table reproduces S⁻¹ H(k) S entrywise by
//! construction, which is the authoritative definition; agreement with the
//! printed per-neighbour amplitudes is asserted separately in tests.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::{sigma_action, StabilizerElement};
use crate::lattice::{
    bloch_hamiltonian, kinetic_of_k, CouplingTable, Geometry, Hop, KineticVector, LatticeModel,
    Sublattice,
};
use crate::matrix::{sort_complex_pair, C2Matrix, I_C, ZERO_C};
use crate::serialize::fmt_f64;

/// S⁻¹ H(k) S; same eigenvalues as H(k) for any invertible S.
pub fn transform_bloch(s: &StabilizerElement, model: &LatticeModel, k: [f64; 2]) -> C2Matrix {
    s.conjugate(&bloch_hamiltonian(model, kinetic_of_k(model, k)))
}

// ---- Foldy–Wouthuysen ----

/// The two angles of the FW rotation, functions of k through Π.
///
/// cos θ = μ/√(Π₁²+Π₂²+μ²) and (cos φ, sin φ) = (Π₁, Π₂)/√(Π₁²+Π₂²); at
/// Π = 0 the azimuth is undefined and set to 0, and at the fully degenerate
/// point Π = 0, μ = 0 both angles are 0.
#[derive(Clone, Copy, Debug)]
pub struct FwAngles {
    pub theta: f64,
    pub phi: f64,
}

pub fn fw_angles(model: &LatticeModel, pi: KineticVector) -> FwAngles {
    let p = pi.norm_sqr().sqrt();
    let theta = if p == 0.0 && model.mu == 0.0 {
        0.0
    } else {
        p.atan2(model.mu)
    };
    let phi = if p == 0.0 { 0.0 } else { pi.p2.atan2(pi.p1) };
    FwAngles { theta, phi }
}

/// The unitary U = exp(−iφσ₃/2) exp(−iθσ₂/2) and D = U†H(k)U.
///
/// D comes out diagonal with entries ±√(Π₁²+Π₂²+μ²) + E₀, upper band first;
/// it is returned as computed (not synthesized) so callers can check the
/// off-diagonal residual.
pub fn fw_transform(model: &LatticeModel, k: [f64; 2]) -> (C2Matrix, C2Matrix) {
    fw_transform_at(model, kinetic_of_k(model, k))
}

/// [`fw_transform`] at an explicit kinetic vector.
pub fn fw_transform_at(model: &LatticeModel, pi: KineticVector) -> (C2Matrix, C2Matrix) {
    let angles = fw_angles(model, pi);
    let u = StabilizerElement::rotation_z(angles.phi).matrix
        * StabilizerElement::rotation_y(angles.theta).matrix;
    let h = bloch_hamiltonian(model, pi);
    let d = u.adjoint() * h * u;
    (u, d)
}

// ---- deformed coupling tables ----

#[derive(Clone, Copy, Debug)]
pub enum TransformKind {
    Rotation { angle: f64 },
    Boost { rapidity: f64 },
}

impl TransformKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformKind::Rotation { .. } => "rotation",
            TransformKind::Boost { .. } => "boost",
        }
    }

    pub fn parameter(&self) -> f64 {
        match self {
            TransformKind::Rotation { angle } => *angle,
            TransformKind::Boost { rapidity } => *rapidity,
        }
    }
}

/// A lattice model together with a stabilizer element and the real-space
/// coupling table of S⁻¹HS (couplings up to third neighbours).
#[derive(Clone, Debug)]
pub struct TransformedModel {
    pub base: LatticeModel,
    pub element: StabilizerElement,
    pub kind: TransformKind,
    pub couplings: CouplingTable,
}

impl TransformedModel {
    /// Bloch matrix at k assembled from the coupling table (not from direct
    /// conjugation).
    pub fn bloch_matrix(&self, k: [f64; 2]) -> C2Matrix {
        self.couplings.bloch_matrix(k)
    }

    /// Eigenvalue pair of the table-assembled Bloch matrix, sorted by
    /// (re, im).
    pub fn eigenvalues(&self, k: [f64; 2]) -> [Complex64; 2] {
        let [a, b] = self.bloch_matrix(k).eigenvalues();
        sort_complex_pair(a, b)
    }

    /// Band pair (E⁺, E⁻) from the table route, discarding the O(ε)
    /// imaginary parts that boosts leave behind.
    pub fn band_pair(&self, k: [f64; 2]) -> (f64, f64) {
        let [lo, hi] = self.eigenvalues(k);
        (hi.re, lo.re)
    }

    /// Header {geometry, Δ, μ, E₀, kind, parameter} plus the coupling-table
    /// fields, as one JSON object.
    pub fn to_json(&self) -> String {
        let t = &self.couplings;
        let mut out = String::from("{\n");
        out.push_str("  \"schema_version\": 1,\n");
        out.push_str(&format!(
            "  \"geometry\": \"{}\",\n",
            self.base.geometry.as_str()
        ));
        out.push_str(&format!("  \"delta\": {},\n", fmt_f64(self.base.delta)));
        out.push_str(&format!("  \"mu\": {},\n", fmt_f64(self.base.mu)));
        out.push_str(&format!("  \"e0\": {},\n", fmt_f64(self.base.e0)));
        out.push_str(&format!("  \"kind\": \"{}\",\n", self.kind.as_str()));
        out.push_str(&format!(
            "  \"parameter\": {},\n",
            fmt_f64(self.kind.parameter())
        ));
        out.push_str(&format!(
            "  \"hermitian\": {},\n",
            t.is_hermitian(crate::matrix::ALG_TOL)
        ));
        out.push_str(&format!(
            "  \"onsite_a\": {{\"re\": {}, \"im\": {}}},\n",
            fmt_f64(t.onsite_a.re),
            fmt_f64(t.onsite_a.im)
        ));
        out.push_str(&format!(
            "  \"onsite_b\": {{\"re\": {}, \"im\": {}}},\n",
            fmt_f64(t.onsite_b.re),
            fmt_f64(t.onsite_b.im)
        ));
        out.push_str("  \"hops\": [\n");
        for (i, hop) in t.hops.iter().enumerate() {
            let sep = if i + 1 == t.hops.len() { "" } else { "," };
            out.push_str(&format!(
                "    {{\"from\": \"{}\", \"to\": \"{}\", \"offset\": [{}, {}], \"re\": {}, \"im\": {}}}{}\n",
                hop.from.as_str(),
                hop.to.as_str(),
                hop.offset[0],
                hop.offset[1],
                fmt_f64(hop.amplitude.re),
                fmt_f64(hop.amplitude.im),
                sep
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// Fourier harmonics (cell offset → coefficient) of Π₁ and Π₂ under the
/// cell-gauge kernel of [`CouplingTable::bloch_matrix`].
fn kinetic_harmonics(model: &LatticeModel) -> [Vec<([i64; 2], Complex64)>; 2] {
    let d = Complex64::new(model.delta, 0.0);
    let half = d.scale(0.5);
    let ihalf = d * I_C.scale(0.5);
    match model.geometry {
        // Π₁ = Δ(1 + cos 2k), Π₂ = −Δ sin 2k
        Geometry::Chain => [
            vec![([0, 0], d), ([1, 0], half), ([-1, 0], half)],
            vec![([1, 0], ihalf), ([-1, 0], -ihalf)],
        ],
        // Π₁ = Δ(1 + cos κ₂ + cos κ₃), Π₂ = −Δ(sin κ₂ + sin κ₃) with
        // κ₂ = k·(b₁−b₂) ↔ offset (1,1), κ₃ = k·(b₁−b₃) ↔ offset (0,1)
        Geometry::Honeycomb => [
            vec![
                ([0, 0], d),
                ([1, 1], half),
                ([-1, -1], half),
                ([0, 1], half),
                ([0, -1], half),
            ],
            vec![
                ([1, 1], ihalf),
                ([-1, -1], -ihalf),
                ([0, 1], ihalf),
                ([0, -1], -ihalf),
            ],
        ],
    }
}

/// Expand S⁻¹ H S in the site basis and collect the hop list. Amplitudes
/// below 2e-15·(Δ + |μ| + 1) are numerical zeros and dropped.
pub(crate) fn transformed_couplings(
    model: &LatticeModel,
    element: &StabilizerElement,
) -> CouplingTable {
    let r = sigma_action(&element.matrix).expect("stabilizer elements have det 1");
    let harmonics = kinetic_harmonics(model);
    let mu = Complex64::new(model.mu, 0.0);

    // Π̃ⱼ harmonic maps
    let mut coeff: [BTreeMap<[i64; 2], Complex64>; 3] =
        [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
    for (j, out) in coeff.iter_mut().enumerate() {
        for (i, harm) in harmonics.iter().enumerate() {
            for (offset, amp) in harm {
                *out.entry(*offset).or_insert(ZERO_C) += *amp * r[i][j];
            }
        }
        *out.entry([0, 0]).or_insert(ZERO_C) += mu * r[2][j];
    }

    let prune = 2e-15 * (model.delta + model.mu.abs() + 1.0);
    let mut hops: BTreeMap<(Sublattice, Sublattice, [i64; 2]), Complex64> = BTreeMap::new();
    let mut onsite_a = Complex64::new(model.e0, 0.0);
    let mut onsite_b = Complex64::new(model.e0, 0.0);

    // entry (A,B) = Π̃₁ − iΠ̃₂ holds hops B→A; (B,A) = Π̃₁ + iΠ̃₂ hops A→B
    let offsets: std::collections::BTreeSet<[i64; 2]> = coeff[0]
        .keys()
        .chain(coeff[1].keys())
        .chain(coeff[2].keys())
        .copied()
        .collect();
    for offset in offsets {
        let h1 = coeff[0].get(&offset).copied().unwrap_or(ZERO_C);
        let h2 = coeff[1].get(&offset).copied().unwrap_or(ZERO_C);
        let h3 = coeff[2].get(&offset).copied().unwrap_or(ZERO_C);
        let ab = h1 - I_C * h2;
        let ba = h1 + I_C * h2;
        if offset == [0, 0] {
            onsite_a += h3;
            onsite_b -= h3;
        } else if h3.norm() > prune {
            *hops
                .entry((Sublattice::A, Sublattice::A, offset))
                .or_insert(ZERO_C) += h3;
            *hops
                .entry((Sublattice::B, Sublattice::B, offset))
                .or_insert(ZERO_C) -= h3;
        }
        if ab.norm() > prune {
            *hops
                .entry((Sublattice::B, Sublattice::A, offset))
                .or_insert(ZERO_C) += ab;
        }
        if ba.norm() > prune {
            *hops
                .entry((Sublattice::A, Sublattice::B, offset))
                .or_insert(ZERO_C) += ba;
        }
    }

    let hops = hops
        .into_iter()
        .filter(|(_, amp)| amp.norm() > prune)
        .map(|((from, to, offset), amplitude)| Hop {
            from,
            to,
            offset,
            amplitude,
        })
        .collect();

    CouplingTable {
        geometry: model.geometry,
        hops,
        onsite_a,
        onsite_b,
    }
}

/// Hermitian deformation by S = exp(−iϑσ₂/2): couplings to first, second
/// and third neighbours, with sign-alternating second-neighbour amplitudes
/// ∝ Δ sin ϑ / 2 and third-neighbour amplitudes Δ(cos ϑ − 1)/2.
pub fn rotated_couplings(model: &LatticeModel, angle: f64) -> TransformedModel {
    let element = StabilizerElement::rotation_y(angle);
    TransformedModel {
        base: *model,
        couplings: transformed_couplings(model, &element),
        element,
        kind: TransformKind::Rotation { angle },
    }
}

/// Non-Hermitian deformation by the boost S = exp(+φσ₂/2): imaginary
/// second-neighbour amplitudes and complex on-site term μ cosh φ + iΔ sinh φ,
/// with the spectrum still real.
pub fn boosted_couplings(model: &LatticeModel, rapidity: f64) -> TransformedModel {
    let element = StabilizerElement::boost(rapidity);
    TransformedModel {
        base: *model,
        couplings: transformed_couplings(model, &element),
        element,
        kind: TransformKind::Boost { rapidity },
    }
}

/// Min over a dense k-path of the direct gap |E⁺ − E⁻| of the transformed
/// model, computed through the table route.
pub fn min_direct_gap(tm: &TransformedModel, n_samples: usize) -> f64 {
    let mut best = f64::INFINITY;
    for k in crate::monolayer::gap_scan_path(&tm.base, n_samples) {
        let [lo, hi] = tm.eigenvalues(k);
        best = best.min((hi - lo).norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_element;
    use crate::lattice::{base_couplings, dirac_points, dispersion};
    use crate::matrix::ALG_TOL;
    use crate::rng::SplitMix64;
    use std::f64::consts::PI;

    fn chain(mu: f64, e0: f64) -> LatticeModel {
        LatticeModel::chain(1.0, mu, e0).unwrap()
    }

    fn honeycomb(mu: f64, e0: f64) -> LatticeModel {
        LatticeModel::honeycomb(1.0, mu, e0).unwrap()
    }

    fn random_k(rng: &mut SplitMix64, geometry: Geometry) -> [f64; 2] {
        match geometry {
            Geometry::Chain => [rng.range(0.0, PI), 0.0],
            Geometry::Honeycomb => [rng.range(-7.0, 7.0), rng.range(-7.0, 7.0)],
        }
    }

    #[test]
    fn transform_bloch_identity() {
        let m = chain(0.5, 0.1);
        let s = StabilizerElement::identity();
        let k = [0.3, 0.0];
        let h = bloch_hamiltonian(&m, kinetic_of_k(&m, k));
        assert!(transform_bloch(&s, &m, k).approx_eq(&h, 1e-15));
    }

    #[test]
    fn transform_bloch_isospectral_random_elements() {
        let mut rng = SplitMix64::new(41);
        for model in [chain(0.5, 0.2), honeycomb(0.5, 0.2)] {
            for _ in 0..40 {
                let s = random_element(&mut rng, 2.0);
                let k = random_k(&mut rng, model.geometry);
                let ht = transform_bloch(&s, &model, k);
                let [lo, hi] = ht.eigenvalues();
                let (ep, em) = dispersion(&model, k);
                assert!((lo.re - em).abs() < 1e-10 && lo.im.abs() < 1e-10);
                assert!((hi.re - ep).abs() < 1e-10 && hi.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn boost_trace_invariant_and_nonhermitian() {
        let m = LatticeModel::chain(1.0, 0.5, 0.3).unwrap();
        let s = StabilizerElement::boost(1.0);
        let ht = transform_bloch(&s, &m, [PI / 4.0, 0.0]);
        assert!(!ht.is_hermitian(1e-8));
        assert!((ht.trace() - Complex64::new(2.0 * 0.3, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fw_degenerate_points() {
        // Π = 0, μ > 0: U = 𝟙, D = diag(E₀+μ, E₀−μ)
        let m = chain(0.5, 0.2);
        let (u, d) = fw_transform_at(&m, KineticVector::new(0.0, 0.0));
        assert!(u.approx_eq(&C2Matrix::identity(), 1e-15));
        assert!((d.e[0][0].re - 0.7).abs() < 1e-12);
        assert!((d.e[1][1].re + 0.3).abs() < 1e-12);

        // μ = 0, Π = (p, 0): θ_FW = π/2
        let m0 = chain(0.0, 0.0);
        let angles = fw_angles(&m0, KineticVector::new(0.8, 0.0));
        assert!((angles.theta - PI / 2.0).abs() < 1e-15);

        // fully degenerate: θ = φ = 0 and D = E₀𝟙
        let m1 = chain(0.0, 0.4);
        let angles = fw_angles(&m1, KineticVector::new(0.0, 0.0));
        assert_eq!((angles.theta, angles.phi), (0.0, 0.0));
        let (_, d) = fw_transform_at(&m1, KineticVector::new(0.0, 0.0));
        assert!(d.approx_eq(&C2Matrix::scalar(Complex64::new(0.4, 0.0)), 1e-15));

        // at the physical Dirac point (Π only numerically zero) D is still
        // diagonal with the gap entries
        let kd = dirac_points(&m)[0];
        let (u, d) = fw_transform(&m, kd);
        assert!((u.adjoint() * u).approx_eq(&C2Matrix::identity(), 1e-14));
        assert!(d.e[0][1].norm() < 1e-13 && d.e[1][0].norm() < 1e-13);
        assert!((d.e[0][0].re - 0.7).abs() < 1e-12);
    }

    #[test]
    fn fw_diagonalizes_everywhere() {
        let mut rng = SplitMix64::new(4);
        for model in [chain(0.5, 0.1), honeycomb(0.5, 0.1)] {
            for _ in 0..1000 {
                let k = random_k(&mut rng, model.geometry);
                let pi = kinetic_of_k(&model, k);
                if pi.norm_sqr().sqrt() < 1e-6 {
                    continue;
                }
                let (u, d) = fw_transform(&model, k);
                assert!((u.adjoint() * u).approx_eq(&C2Matrix::identity(), 1e-12));
                assert!(d.e[0][1].norm() < 1e-12 && d.e[1][0].norm() < 1e-12);
                let lambda = (pi.norm_sqr() + model.mu * model.mu).sqrt();
                assert!((d.e[0][0].re - (model.e0 + lambda)).abs() < 1e-12);
                assert!((d.e[1][1].re - (model.e0 - lambda)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_at_zero_equals_base_table() {
        for model in [chain(0.5, 0.2), honeycomb(0.5, 0.2)] {
            let tm = rotated_couplings(&model, 0.0);
            let base = base_couplings(&model);
            assert_eq!(tm.couplings.aggregated(), base.aggregated());
            assert_eq!(tm.couplings.onsite_a, base.onsite_a);
            assert_eq!(tm.couplings.onsite_b, base.onsite_b);
        }
    }

    #[test]
    fn boost_at_zero_equals_base_table() {
        for model in [chain(0.5, 0.2), honeycomb(0.5, 0.2)] {
            let tm = boosted_couplings(&model, 0.0);
            let base = base_couplings(&model);
            assert_eq!(tm.couplings.aggregated(), base.aggregated());
        }
    }

    #[test]
    fn decomposition_reproduces_conjugation() {
        // assembled H₁+H₂+H₃+V equals S⁻¹H(k)S entrywise
        let mut rng = SplitMix64::new(19);
        for model in [chain(0.5, 0.2), honeycomb(0.5, 0.2)] {
            for tm in [
                rotated_couplings(&model, 0.8),
                boosted_couplings(&model, 1.1),
            ] {
                for _ in 0..200 {
                    let k = random_k(&mut rng, model.geometry);
                    let from_table = tm.bloch_matrix(k);
                    let direct = transform_bloch(&tm.element, &model, k);
                    assert!(
                        from_table.approx_eq(&direct, 1e-12),
                        "{:?}/{} at {:?}",
                        model.geometry,
                        tm.kind.as_str(),
                        k
                    );
                }
            }
        }
    }

    #[test]
    fn chain_rotated_amplitudes_match_printed_table() {
        // The closed-form per-neighbour amplitudes for the chain rotation.
        let theta = 0.7_f64;
        let (delta, mu) = (1.0, 0.5);
        let m = chain(mu, 0.0);
        let agg = rotated_couplings(&m, theta).couplings.aggregated();
        let amp = |f, t, o: [i64; 2]| agg.get(&(f, t, o)).copied().unwrap_or(ZERO_C);

        let within = delta * theta.cos() - mu * theta.sin();
        assert!((amp(Sublattice::A, Sublattice::B, [0, 0]).re - within).abs() < 1e-14);
        let nn = delta * (theta.cos() + 1.0) / 2.0;
        assert!((amp(Sublattice::B, Sublattice::A, [1, 0]).re - nn).abs() < 1e-14);
        let third = delta * (theta.cos() - 1.0) / 2.0;
        assert!((amp(Sublattice::A, Sublattice::B, [1, 0]).re - third).abs() < 1e-14);
        let second = delta * theta.sin() / 2.0;
        assert!((amp(Sublattice::A, Sublattice::A, [1, 0]).re - second).abs() < 1e-14);
        assert!((amp(Sublattice::B, Sublattice::B, [1, 0]).re + second).abs() < 1e-14);
    }

    #[test]
    fn chain_rotated_quarter_turn_forward_amplitude() {
        let m = chain(0.5, 0.0);
        let agg = rotated_couplings(&m, PI / 2.0).couplings.aggregated();
        let a = agg
            .get(&(Sublattice::A, Sublattice::B, [0, 0]))
            .copied()
            .unwrap();
        assert!((a.re + 0.5).abs() < 1e-14 && a.im.abs() < 1e-15);
    }

    #[test]
    fn onsite_coefficient_resolved_by_oracle() {
        // The two printed alternatives for the on-site deformation factor
        // are (μ cos ϑ + Δ sin ϑ) and (μ cos ϑ + Δ sin ϑ / 2). The
        // conjugation expansion decides: both geometries carry the full
        // Δ sin ϑ once the on-site part of the second-neighbour sum is
        // folded in.
        let theta = 0.9_f64;
        let (delta, mu, e0) = (1.0, 0.5, 0.3);
        for model in [chain(mu, e0), honeycomb(mu, e0)] {
            let tm = rotated_couplings(&model, theta);
            let derived = tm.couplings.onsite_a.re - e0;
            let full = mu * theta.cos() + delta * theta.sin();
            let half = mu * theta.cos() + delta * theta.sin() / 2.0;
            assert!((derived - full).abs() < 1e-13, "{:?}", model.geometry);
            if (derived - half).abs() > 1e-13 {
                println!(
                    "note: {:?} on-site factor {} matches mu*cos+delta*sin, \
                     not the mu*cos+delta*sin/2 variant",
                    model.geometry, derived
                );
            }
            // B sublattice mirrors A
            assert!((tm.couplings.onsite_b.re - (e0 - full)).abs() < 1e-13);
        }
    }

    #[test]
    fn honeycomb_rotated_neighbour_classes() {
        let theta = 0.6_f64;
        let m = honeycomb(0.5, 0.0);
        let table = rotated_couplings(&m, theta).couplings;
        // distances 1, √3, √7 for first/second/third class
        assert!((table.max_amplitude_in_class(1) - (theta.cos() + 1.0) / 2.0).abs() < 1e-13);
        assert!((table.max_amplitude_in_class(2) - theta.sin() / 2.0).abs() < 1e-13);
        assert!((table.max_amplitude_in_class(3) - (1.0 - theta.cos()) / 2.0).abs() < 1e-13);
        for hop in &table.hops {
            let d = table.hop_distance(hop);
            assert!(
                (d - 1.0).abs() < 1e-9
                    || (d - 3f64.sqrt()).abs() < 1e-9
                    || (d - 7f64.sqrt()).abs() < 1e-9,
                "unexpected hop distance {d}"
            );
        }
    }

    #[test]
    fn small_angle_scaling() {
        // ‖H₂‖ linear in ϑ, ‖H₃‖ quadratic
        for model in [chain(0.5, 0.0), honeycomb(0.5, 0.0)] {
            let ratio = |theta: f64| {
                let t = rotated_couplings(&model, theta).couplings;
                (
                    t.max_amplitude_in_class(2) / theta,
                    t.max_amplitude_in_class(3) / (theta * theta),
                )
            };
            let (s1, t1) = ratio(1e-2);
            let (s2, t2) = ratio(1e-3);
            assert!((s1 / s2 - 1.0).abs() < 1e-2);
            assert!((t1 / t2 - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn boosted_onsite_and_hermiticity() {
        let phi = 1.0_f64;
        let m = chain(0.5, 0.0);
        let tm = boosted_couplings(&m, phi);
        // on-site A = μ cosh φ + iΔ sinh φ
        let expected = Complex64::new(0.5 * phi.cosh(), phi.sinh());
        assert!((tm.couplings.onsite_a - expected).norm() < 1e-13);
        assert!(!tm.couplings.is_hermitian(ALG_TOL));
        // imaginary second-neighbour amplitude iΔ sinh φ / 2, same sign both
        // directions on the A chain
        let agg = tm.couplings.aggregated();
        for off in [[1, 0], [-1, 0]] {
            let a = agg
                .get(&(Sublattice::A, Sublattice::A, off))
                .copied()
                .unwrap();
            assert!((a - Complex64::new(0.0, phi.sinh() / 2.0)).norm() < 1e-13);
        }
        // rotations stay Hermitian
        assert!(rotated_couplings(&m, 0.8).couplings.is_hermitian(ALG_TOL));
    }

    #[test]
    fn boosted_spectrum_stays_real() {
        let mut rng = SplitMix64::new(6);
        for model in [chain(0.5, 0.1), honeycomb(0.5, 0.1)] {
            for phi in [0.3, 1.0, 2.0] {
                let tm = boosted_couplings(&model, phi);
                for _ in 0..100 {
                    let k = random_k(&mut rng, model.geometry);
                    let [lo, hi] = tm.eigenvalues(k);
                    let (ep, em) = dispersion(&model, k);
                    assert!(lo.im.abs() < 1e-10 && hi.im.abs() < 1e-10);
                    assert!((lo.re - em).abs() < 1e-10 && (hi.re - ep).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gap_invariance_over_path() {
        for model in [chain(0.35, 0.0), honeycomb(0.35, 0.0)] {
            for tm in [
                rotated_couplings(&model, 1.0),
                boosted_couplings(&model, 1.5),
            ] {
                let gap = min_direct_gap(&tm, 400);
                assert!(
                    (gap - 0.7).abs() < 1e-9,
                    "{:?}/{}: gap {gap}",
                    model.geometry,
                    tm.kind.as_str()
                );
            }
        }
    }

    #[test]
    fn transformed_model_json_header() {
        let tm = boosted_couplings(&chain(0.5, 0.0), 0.25);
        let json = tm.to_json();
        assert!(json.contains("\"kind\": \"boost\""));
        assert!(json.contains("\"parameter\": 2.5"));
        assert!(json.contains("\"hermitian\": false"));
        assert!(json.contains("\"hops\""));
    }

    #[test]
    fn phase_twist_supported_through_transform_bloch() {
        // S = exp(−i a₃ σ₃) multiplies the off-diagonal couplings by phase
        // factors and keeps the spectrum.
        let m = chain(0.5, 0.0);
        let a3 = 0.4_f64;
        let s = StabilizerElement::rotation_z(2.0 * a3);
        let k = [0.7, 0.0];
        let ht = transform_bloch(&s, &m, k);
        let h = bloch_hamiltonian(&m, kinetic_of_k(&m, k));
        let phase = Complex64::from_polar(1.0, 2.0 * a3);
        assert!((ht.e[0][1] - h.e[0][1] * phase).norm() < 1e-13);
        assert!((ht.e[1][0] - h.e[1][0] * phase.conj()).norm() < 1e-13);
        let [lo, hi] = ht.eigenvalues();
        let (ep, em) = dispersion(&m, k);
        assert!((lo.re - em).abs() < 1e-12 && (hi.re - ep).abs() < 1e-12);
    }
}
