//! Chain and honeycomb tight-binding models: Bloch Hamiltonians, dispersion
//! relations, Dirac points and the base nearest-neighbour coupling tables.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! - Energies are in eV, the lattice spacing is 1 (k dimensionless).
//! - The chain uses the 2-site unit cell with Brillouin zone k ∈ [0, π);
//!   its kinetic vector is Π₁ = Δ(1 + cos 2k), Π₂ = −Δ sin 2k.
//! - The honeycomb bond vectors are b₁ = (0,1), b₂ = (−√3/2,−1/2),
//!   b₃ = −b₁−b₂, with primitive vectors a₁ = b₃−b₂, a₂ = b₁−b₃. The B
//!   sublattice sits at A + b₁.
//! - Coupling tables store integer cell offsets; the Bloch matrix is
//!   assembled in the periodic (cell) gauge with phase e^{+i κ(offset)},
//!   κ(c) = 2k·c for the chain and κ(c) = c₁ k·a₁ + c₂ k·a₂ for the
//!   honeycomb. Under this kernel the row-A off-diagonal of the base
//!   honeycomb model is Δ(1 + e^{ik·(b₁−b₂)} + e^{ik·(b₁−b₃)}), whose
//!   modulus is Δ|Σᵢ e^{ik·bᵢ}|, so the textbook dispersion is reproduced
//!   verbatim while offsets stay integral.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::matrix::{C2Matrix, ZERO_C};
use crate::serialize::fmt_f64;
use crate::ModelError;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// b₁, b₂, b₃: the three nearest-neighbour bond vectors (A → B).
pub fn bond_vectors() -> [[f64; 2]; 3] {
    let b1 = [0.0, 1.0];
    let b2 = [-SQRT3 / 2.0, -0.5];
    let b3 = [SQRT3 / 2.0, -0.5];
    [b1, b2, b3]
}

/// Primitive vectors a₁ = b₃ − b₂, a₂ = b₁ − b₃.
pub fn primitive_vectors() -> [[f64; 2]; 2] {
    let [b1, b2, b3] = bond_vectors();
    [
        [b3[0] - b2[0], b3[1] - b2[1]],
        [b1[0] - b3[0], b1[1] - b3[1]],
    ]
}

/// Reciprocal vectors with Gᵢ·aⱼ = 2π δᵢⱼ.
pub fn reciprocal_vectors() -> [[f64; 2]; 2] {
    let [a1, a2] = primitive_vectors();
    let det = a1[0] * a2[1] - a1[1] * a2[0];
    let f = std::f64::consts::TAU / det;
    [[f * a2[1], -f * a2[0]], [-f * a1[1], f * a1[0]]]
}

pub fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Chain,
    Honeycomb,
}

impl Geometry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Geometry::Chain => "chain",
            Geometry::Honeycomb => "honeycomb",
        }
    }
}

/// A two-band model: hopping amplitude Δ, half on-site splitting μ and mean
/// on-site energy E₀, on either geometry.
#[derive(Clone, Copy, Debug)]
pub struct LatticeModel {
    pub geometry: Geometry,
    pub delta: f64,
    pub mu: f64,
    pub e0: f64,
}

impl LatticeModel {
    pub fn new(geometry: Geometry, delta: f64, mu: f64, e0: f64) -> Result<Self, ModelError> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(ModelError::InvalidParameter(format!(
                "hopping amplitude must be positive and finite, got {delta}"
            )));
        }
        if !mu.is_finite() || !e0.is_finite() {
            return Err(ModelError::InvalidParameter(
                "on-site energies must be finite".into(),
            ));
        }
        Ok(Self {
            geometry,
            delta,
            mu,
            e0,
        })
    }

    pub fn chain(delta: f64, mu: f64, e0: f64) -> Result<Self, ModelError> {
        Self::new(Geometry::Chain, delta, mu, e0)
    }

    pub fn honeycomb(delta: f64, mu: f64, e0: f64) -> Result<Self, ModelError> {
        Self::new(Geometry::Honeycomb, delta, mu, e0)
    }
}

/// Eigenvalues (Π₁, Π₂) of the commuting kinetic operators, scaled by Δ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KineticVector {
    pub p1: f64,
    pub p2: f64,
}

impl KineticVector {
    pub fn new(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p1 * self.p1 + self.p2 * self.p2
    }
}

/// Σᵢ e^{ik·bᵢ}, the honeycomb structure factor.
pub fn structure_factor(k: [f64; 2]) -> Complex64 {
    bond_vectors()
        .iter()
        .map(|b| Complex64::from_polar(1.0, dot(k, *b)))
        .sum()
}

/// Kinetic vector at Bloch vector k (chain: only k[0] is used).
pub fn kinetic_of_k(model: &LatticeModel, k: [f64; 2]) -> KineticVector {
    let d = model.delta;
    match model.geometry {
        Geometry::Chain => {
            let kk = 2.0 * k[0];
            KineticVector::new(d * (1.0 + kk.cos()), -d * kk.sin())
        }
        Geometry::Honeycomb => {
            let [a1, a2] = primitive_vectors();
            // b₁−b₂ = a₁+a₂, b₁−b₃ = a₂
            let t2 = dot(k, a1) + dot(k, a2);
            let t3 = dot(k, a2);
            KineticVector::new(d * (1.0 + t2.cos() + t3.cos()), -d * (t2.sin() + t3.sin()))
        }
    }
}

/// H(Π) = Π₁σ₁ + Π₂σ₂ + μσ₃ + E₀𝟙.
pub fn bloch_hamiltonian(model: &LatticeModel, pi: KineticVector) -> C2Matrix {
    C2Matrix::new(
        Complex64::new(model.e0 + model.mu, 0.0),
        Complex64::new(pi.p1, -pi.p2),
        Complex64::new(pi.p1, pi.p2),
        Complex64::new(model.e0 - model.mu, 0.0),
    )
}

/// Band energies (E⁺, E⁻) at k: E^± = E₀ ± √(Π₁² + Π₂² + μ²).
pub fn dispersion(model: &LatticeModel, k: [f64; 2]) -> (f64, f64) {
    let pi = kinetic_of_k(model, k);
    let root = (pi.norm_sqr() + model.mu * model.mu).sqrt();
    (model.e0 + root, model.e0 - root)
}

/// Points where Π₁ = Π₂ = 0: π/2 for the chain, the two inequivalent
/// honeycomb corners K = (4π/3√3, 0) and K′ = (2π/3√3, 2π/3).
pub fn dirac_points(model: &LatticeModel) -> Vec<[f64; 2]> {
    match model.geometry {
        Geometry::Chain => vec![[std::f64::consts::FRAC_PI_2, 0.0]],
        Geometry::Honeycomb => {
            let pi = std::f64::consts::PI;
            vec![
                [4.0 * pi / (3.0 * SQRT3), 0.0],
                [2.0 * pi / (3.0 * SQRT3), 2.0 * pi / 3.0],
            ]
        }
    }
}

/// Max over both bands of |(E − E₀)² − Π₁² − Π₂² − μ²|, with the band
/// energies taken from the characteristic polynomial of the Bloch matrix
/// rather than from the dispersion formula.
pub fn mass_shell_residual(model: &LatticeModel, k: [f64; 2]) -> f64 {
    let pi = kinetic_of_k(model, k);
    let h = bloch_hamiltonian(model, pi);
    let target = pi.norm_sqr() + model.mu * model.mu;
    h.eigenvalues_hermitian()
        .iter()
        .map(|e| {
            let shifted = e - model.e0;
            (shifted * shifted - target).abs()
        })
        .fold(0.0, f64::max)
}

// ---- real-space coupling tables ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sublattice::A => "A",
            Sublattice::B => "B",
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Sublattice::A => 0,
            Sublattice::B => 1,
        }
    }
}

/// One directed hop: amplitude × |to, cell + offset⟩⟨from, cell|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hop {
    pub from: Sublattice,
    pub to: Sublattice,
    pub offset: [i64; 2],
    pub amplitude: Complex64,
}

/// Real-space hopping list plus on-site energies. The chain uses only
/// `offset[0]`.
#[derive(Clone, Debug)]
pub struct CouplingTable {
    pub geometry: Geometry,
    pub hops: Vec<Hop>,
    pub onsite_a: Complex64,
    pub onsite_b: Complex64,
}

impl CouplingTable {
    /// Bloch matrix at k under the cell-gauge kernel (see module docs):
    /// entry (to, from) accumulates amplitude · e^{+i κ(offset)}.
    pub fn bloch_matrix(&self, k: [f64; 2]) -> C2Matrix {
        let [a1, a2] = primitive_vectors();
        let mut m = C2Matrix::diag(self.onsite_a, self.onsite_b);
        for hop in &self.hops {
            let angle = match self.geometry {
                Geometry::Chain => 2.0 * k[0] * hop.offset[0] as f64,
                Geometry::Honeycomb => {
                    hop.offset[0] as f64 * dot(k, a1) + hop.offset[1] as f64 * dot(k, a2)
                }
            };
            m.e[hop.to.index()][hop.from.index()] +=
                hop.amplitude * Complex64::from_polar(1.0, angle);
        }
        m
    }

    /// Net amplitude per (from, to, offset), summing duplicate entries.
    pub fn aggregated(&self) -> BTreeMap<(Sublattice, Sublattice, [i64; 2]), Complex64> {
        let mut map = BTreeMap::new();
        for hop in &self.hops {
            *map.entry((hop.from, hop.to, hop.offset)).or_insert(ZERO_C) += hop.amplitude;
        }
        map.retain(|_, amp| amp.norm() > 0.0);
        map
    }

    /// True iff every hop has its reverse with conjugate amplitude and the
    /// on-site energies are real, all within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.onsite_a.im.abs() > tol || self.onsite_b.im.abs() > tol {
            return false;
        }
        let map = self.aggregated();
        for ((from, to, offset), amp) in &map {
            let rev = map
                .get(&(*to, *from, [-offset[0], -offset[1]]))
                .copied()
                .unwrap_or(ZERO_C);
            if (rev - amp.conj()).norm() > tol {
                return false;
            }
        }
        true
    }

    /// Euclidean length of the real-space displacement of a hop.
    pub fn hop_distance(&self, hop: &Hop) -> f64 {
        match self.geometry {
            Geometry::Chain => {
                let tau = |s: Sublattice| if s == Sublattice::B { 1.0 } else { 0.0 };
                (2.0 * hop.offset[0] as f64 + tau(hop.to) - tau(hop.from)).abs()
            }
            Geometry::Honeycomb => {
                let [a1, a2] = primitive_vectors();
                let [b1, _, _] = bond_vectors();
                let tau = |s: Sublattice| if s == Sublattice::B { b1 } else { [0.0, 0.0] };
                let (tt, tf) = (tau(hop.to), tau(hop.from));
                let dx =
                    hop.offset[0] as f64 * a1[0] + hop.offset[1] as f64 * a2[0] + tt[0] - tf[0];
                let dy =
                    hop.offset[0] as f64 * a1[1] + hop.offset[1] as f64 * a2[1] + tt[1] - tf[1];
                (dx * dx + dy * dy).sqrt()
            }
        }
    }

    /// Largest |amplitude| among hops in the n-th distance class
    /// (1 = nearest). Zero when the class is empty.
    pub fn max_amplitude_in_class(&self, class: usize) -> f64 {
        let mut distances: Vec<f64> = self.hops.iter().map(|h| self.hop_distance(h)).collect();
        distances.sort_by(f64::total_cmp);
        distances.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let Some(target) = distances.get(class - 1) else {
            return 0.0;
        };
        self.hops
            .iter()
            .filter(|h| (self.hop_distance(h) - target).abs() < 1e-9)
            .map(|h| h.amplitude.norm())
            .fold(0.0, f64::max)
    }

    /// JSON serialization; schema_version 1, one object per hop with fields
    /// from, to, offset:[i,j], re, im.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str("  \"schema_version\": 1,\n");
        out.push_str(&format!(
            "  \"geometry\": \"{}\",\n",
            self.geometry.as_str()
        ));
        out.push_str(&format!(
            "  \"onsite_a\": {{\"re\": {}, \"im\": {}}},\n",
            fmt_f64(self.onsite_a.re),
            fmt_f64(self.onsite_a.im)
        ));
        out.push_str(&format!(
            "  \"onsite_b\": {{\"re\": {}, \"im\": {}}},\n",
            fmt_f64(self.onsite_b.re),
            fmt_f64(self.onsite_b.im)
        ));
        out.push_str("  \"hops\": [\n");
        for (i, hop) in self.hops.iter().enumerate() {
            let sep = if i + 1 == self.hops.len() { "" } else { "," };
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

/// Nearest-neighbour table of the undeformed model: amplitude Δ on every
/// bond, on-site energies E₀ ± μ.
pub fn base_couplings(model: &LatticeModel) -> CouplingTable {
    let d = Complex64::new(model.delta, 0.0);
    let hops = match model.geometry {
        Geometry::Chain => vec![
            // within-cell bond and its reverse
            Hop {
                from: Sublattice::A,
                to: Sublattice::B,
                offset: [0, 0],
                amplitude: d,
            },
            Hop {
                from: Sublattice::B,
                to: Sublattice::A,
                offset: [0, 0],
                amplitude: d,
            },
            // between-cell bond: B in cell c to A in cell c+1
            Hop {
                from: Sublattice::B,
                to: Sublattice::A,
                offset: [1, 0],
                amplitude: d,
            },
            Hop {
                from: Sublattice::A,
                to: Sublattice::B,
                offset: [-1, 0],
                amplitude: d,
            },
        ],
        Geometry::Honeycomb => {
            // bond bᵢ joins A in cell c to B in cell c + cᵢ with
            // cᵢ·a = bᵢ − b₁: c₁ = (0,0), c₂ = (−1,−1), c₃ = (0,−1).
            let offsets = [[0i64, 0i64], [-1, -1], [0, -1]];
            let mut hops = Vec::with_capacity(6);
            for off in offsets {
                hops.push(Hop {
                    from: Sublattice::A,
                    to: Sublattice::B,
                    offset: off,
                    amplitude: d,
                });
                hops.push(Hop {
                    from: Sublattice::B,
                    to: Sublattice::A,
                    offset: [-off[0], -off[1]],
                    amplitude: d,
                });
            }
            hops
        }
    };
    CouplingTable {
        geometry: model.geometry,
        hops,
        onsite_a: Complex64::new(model.e0 + model.mu, 0.0),
        onsite_b: Complex64::new(model.e0 - model.mu, 0.0),
    }
}

// ---- band structure container ----

#[derive(Clone, Debug)]
pub struct BandSample {
    pub k: [f64; 2],
    /// Path parameter in [0, 1] when the sample sits on a named path.
    pub s: f64,
    pub label: Option<String>,
    pub e_plus: f64,
    pub e_minus: f64,
}

/// Sampled k-path with per-k band pair, E⁺ ≥ E⁻ at every sample.
#[derive(Clone, Debug, Default)]
pub struct BandStructure {
    pub samples: Vec<BandSample>,
}

impl BandStructure {
    pub fn push(&mut self, k: [f64; 2], s: f64, label: Option<String>, e1: f64, e2: f64) {
        let (e_plus, e_minus) = if e1 >= e2 { (e1, e2) } else { (e2, e1) };
        self.samples.push(BandSample {
            k,
            s,
            label,
            e_plus,
            e_minus,
        });
    }

    pub fn min_gap(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.e_plus - s.e_minus)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn bandwidth(&self) -> f64 {
        let max_up = self
            .samples
            .iter()
            .map(|s| s.e_plus)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_dn = self
            .samples
            .iter()
            .map(|s| s.e_minus)
            .fold(f64::INFINITY, f64::min);
        max_up - min_dn
    }
}
