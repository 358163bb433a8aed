//! Dichalcogenide-monolayer application: extract model parameters from gap,
//! bandwidth and orbital-overlap data, sample the high-symmetry path, and
//! compare against ingested reference bands.
//!
//! Two independent routes recover the deformation angle:
//!
//! - from the overlap ratio, tan(ϑ/2) = t₂/t₁ (second- over
//!   nearest-neighbour overlap);
//! - from the gap form, cos ϑ = 4·t₁/√(E_bw² − E_gap²) − 1, whose overlap
//!   argument is the nearest-neighbour matrix element (the same quantity as
//!   the ratio route's denominator — at ϑ = 0 it equals Δ).
//!
//! On model-consistent inputs (t₁ = Δ(cos ϑ + 1)/2, t₂ = Δ sin ϑ / 2,
//! E_bw = 2√(Δ²+μ²), E_gap = 2μ) the two routes agree identically; they are
//! exposed separately so disagreement on measured data is reported, not
//! hidden.

use crate::lattice::{
    dirac_points, dispersion, dot, reciprocal_vectors, BandStructure, Geometry, LatticeModel,
};
use crate::serialize::fmt_f64;
use crate::stabilizer::TransformedModel;
use crate::DataError;

/// Smallest accepted hopping amplitude when inverting band data.
pub const DELTA_MIN: f64 = 1e-6;

/// Monolayer fit parameters and the derived model quantities.
#[derive(Clone, Copy, Debug)]
pub struct MonolayerParams {
    pub e_gap: f64,
    pub e_bandwidth: f64,
    pub t1: f64,
    pub t2: f64,
    pub delta: f64,
    pub mu: f64,
    pub theta: f64,
}

impl MonolayerParams {
    pub fn from_measurements(
        e_gap: f64,
        e_bandwidth: f64,
        t1: f64,
        t2: f64,
    ) -> Result<Self, DataError> {
        let (delta, mu) = params_from_band_data(e_gap, e_bandwidth)?;
        let theta = theta_from_overlap_ratio(t1, t2)?;
        Ok(Self {
            e_gap,
            e_bandwidth,
            t1,
            t2,
            delta,
            mu,
            theta,
        })
    }

    pub fn model(&self) -> LatticeModel {
        LatticeModel::honeycomb(self.delta, self.mu, 0.0).expect("delta > 0 by construction")
    }
}

/// μ = E_gap/2 and Δ = √((E_bw/2)² − μ²) from the gap and bandwidth.
pub fn params_from_band_data(e_gap: f64, e_bandwidth: f64) -> Result<(f64, f64), DataError> {
    if !e_gap.is_finite() || !e_bandwidth.is_finite() || e_gap <= 0.0 || e_bandwidth <= e_gap {
        return Err(DataError::InvalidParameter(format!(
            "need bandwidth > gap > 0, got gap {e_gap}, bandwidth {e_bandwidth}"
        )));
    }
    let mu = e_gap / 2.0;
    let half_bw = e_bandwidth / 2.0;
    let delta = (half_bw * half_bw - mu * mu).sqrt();
    if delta <= DELTA_MIN {
        return Err(DataError::InvalidParameter(format!(
            "degenerate flat band: derived hopping {delta} below {DELTA_MIN}"
        )));
    }
    Ok((delta, mu))
}

/// ϑ = 2 arctan(t₂/t₁) from the second- and nearest-neighbour overlaps.
pub fn theta_from_overlap_ratio(t1: f64, t2: f64) -> Result<f64, DataError> {
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(DataError::InvalidParameter(format!(
            "nearest-neighbour overlap must be positive, got {t1}"
        )));
    }
    if t2 < 0.0 {
        return Err(DataError::InvalidParameter(format!(
            "second-neighbour overlap must be non-negative, got {t2}"
        )));
    }
    Ok(2.0 * (t2 / t1).atan())
}

/// ϑ = arccos(4·t / √(E_bw² − E_gap²) − 1) from the nearest-neighbour
/// overlap and the band data.
pub fn theta_from_gap_form(
    nn_overlap: f64,
    e_gap: f64,
    e_bandwidth: f64,
) -> Result<f64, DataError> {
    if !e_gap.is_finite() || !e_bandwidth.is_finite() || e_gap <= 0.0 || e_bandwidth <= e_gap {
        return Err(DataError::InvalidParameter(format!(
            "need bandwidth > gap > 0, got gap {e_gap}, bandwidth {e_bandwidth}"
        )));
    }
    let root = (e_bandwidth * e_bandwidth - e_gap * e_gap).sqrt();
    let cos_theta = 4.0 * nn_overlap / root - 1.0;
    if !(-1.0..=1.0).contains(&cos_theta) {
        return Err(DataError::InvalidParameter(format!(
            "cos(theta) = {cos_theta} outside [-1, 1]"
        )));
    }
    Ok(cos_theta.acos())
}

/// Nearest-neighbour overlap of the deformed model: t₁ = Δ(cos ϑ + 1)/2.
pub fn nn_overlap_of(delta: f64, theta: f64) -> f64 {
    delta * (theta.cos() + 1.0) / 2.0
}

/// Second-neighbour overlap of the deformed model: t₂ = Δ sin ϑ / 2.
pub fn second_overlap_of(delta: f64, theta: f64) -> f64 {
    delta * theta.sin() / 2.0
}

// ═══════════════════════════════════════════════════════════════════
//  High-symmetry path
// ═══════════════════════════════════════════════════════════════════

#[derive(Clone, Copy, Debug)]
pub struct PathPoint {
    pub k: [f64; 2],
    /// Normalized arc-length parameter in [0, 1].
    pub s: f64,
    pub label: Option<&'static str>,
}

/// The K corner used for the path (also the first Dirac point).
pub fn k_point() -> [f64; 2] {
    [
        4.0 * std::f64::consts::PI / (3.0 * crate::lattice::SQRT3),
        0.0,
    ]
}

/// Midpoint of the Brillouin-zone edge adjacent to K, derived from the
/// reciprocal lattice (nearest G/2 among the shortest reciprocal vectors;
/// ties broken toward positive y then positive x).
pub fn m_point() -> [f64; 2] {
    let [g1, g2] = reciprocal_vectors();
    let k = k_point();
    let mut candidates = Vec::new();
    for m in -1i32..=1 {
        for n in -1i32..=1 {
            if m == 0 && n == 0 {
                continue;
            }
            let g = [
                m as f64 * g1[0] + n as f64 * g2[0],
                m as f64 * g1[1] + n as f64 * g2[1],
            ];
            candidates.push(g);
        }
    }
    let min_norm = candidates
        .iter()
        .map(|g| dot(*g, *g).sqrt())
        .fold(f64::INFINITY, f64::min);
    let mut best: Option<[f64; 2]> = None;
    for g in candidates {
        if (dot(g, g).sqrt() - min_norm).abs() > 1e-9 {
            continue;
        }
        let mid = [g[0] / 2.0, g[1] / 2.0];
        let dist = ((mid[0] - k[0]).powi(2) + (mid[1] - k[1]).powi(2)).sqrt();
        let better = match best {
            None => true,
            Some(b) => {
                let bdist = ((b[0] - k[0]).powi(2) + (b[1] - k[1]).powi(2)).sqrt();
                dist < bdist - 1e-12
                    || ((dist - bdist).abs() <= 1e-12 && (mid[1], mid[0]) > (b[1], b[0]))
            }
        };
        if better {
            best = Some(mid);
        }
    }
    best.expect("reciprocal lattice has shortest vectors")
}

/// Piecewise-linear Γ–M–K–Γ path with `n_per_segment` points per segment
/// (n ≥ 2); vertices appear exactly once, s is normalized arc length.
pub fn high_symmetry_path(n_per_segment: usize) -> Result<Vec<PathPoint>, DataError> {
    if n_per_segment < 2 {
        return Err(DataError::InvalidParameter(
            "need at least 2 points per segment".into(),
        ));
    }
    let gamma = [0.0, 0.0];
    let vertices = [gamma, m_point(), k_point(), gamma];
    let labels = ["Gamma", "M", "K", "Gamma"];
    let seg_len: Vec<f64> = vertices
        .windows(2)
        .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
        .collect();
    let total: f64 = seg_len.iter().sum();

    let mut points = Vec::new();
    let mut walked = 0.0;
    for seg in 0..3 {
        let (a, b) = (vertices[seg], vertices[seg + 1]);
        let last_in_seg = n_per_segment - 1;
        for i in 0..n_per_segment {
            if seg > 0 && i == 0 {
                continue; // vertex already emitted by the previous segment
            }
            let f = i as f64 / last_in_seg as f64;
            // vertices are emitted exactly, not through the interpolation
            let k = if i == last_in_seg {
                b
            } else {
                [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
            };
            let s = (walked + f * seg_len[seg]) / total;
            let label = if i == 0 {
                Some(labels[seg])
            } else if i == last_in_seg {
                Some(labels[seg + 1])
            } else {
                None
            };
            points.push(PathPoint { k, s, label });
        }
        walked += seg_len[seg];
    }
    Ok(points)
}

/// k-samples guaranteed to contain the gap minimum: a dense sweep plus the
/// exact Dirac points.
pub fn gap_scan_path(model: &LatticeModel, n: usize) -> Vec<[f64; 2]> {
    let mut ks = Vec::with_capacity(n + 2);
    match model.geometry {
        Geometry::Chain => {
            for j in 0..n {
                ks.push([std::f64::consts::PI * j as f64 / n as f64, 0.0]);
            }
        }
        Geometry::Honeycomb => {
            let per_segment = (n / 3).max(2);
            for p in high_symmetry_path(per_segment).expect("n >= 2") {
                ks.push(p.k);
            }
        }
    }
    ks.extend(dirac_points(model));
    ks
}

/// Bands sampled along the geometry's natural path: [0, π] for the chain
/// (with the Dirac point inserted exactly), Γ–M–K–Γ for the honeycomb.
pub fn sample_bands(model: &LatticeModel, n: usize) -> Result<BandStructure, DataError> {
    if n < 2 {
        return Err(DataError::InvalidParameter(
            "need at least 2 samples".into(),
        ));
    }
    let mut bs = BandStructure::default();
    match model.geometry {
        Geometry::Chain => {
            let kd = std::f64::consts::FRAC_PI_2;
            let mut inserted = false;
            for j in 0..n {
                let k = std::f64::consts::PI * j as f64 / (n - 1) as f64;
                if !inserted && k > kd {
                    let (ep, em) = dispersion(model, [kd, 0.0]);
                    bs.push(
                        [kd, 0.0],
                        kd / std::f64::consts::PI,
                        Some("Dirac".into()),
                        ep,
                        em,
                    );
                    inserted = true;
                }
                if (k - kd).abs() < 1e-15 {
                    inserted = true;
                }
                let (ep, em) = dispersion(model, [k, 0.0]);
                let label = if (k - kd).abs() < 1e-15 {
                    Some("Dirac".into())
                } else {
                    None
                };
                bs.push([k, 0.0], k / std::f64::consts::PI, label, ep, em);
            }
        }
        Geometry::Honeycomb => {
            for p in high_symmetry_path(n.max(2))? {
                let (ep, em) = dispersion(model, p.k);
                bs.push(p.k, p.s, p.label.map(str::to_owned), ep, em);
            }
        }
    }
    Ok(bs)
}

// ═══════════════════════════════════════════════════════════════════
//  Reference bands and comparison
// ═══════════════════════════════════════════════════════════════════

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Band {
    Upper,
    Lower,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::Upper => "upper",
            Band::Lower => "lower",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReferenceRow {
    pub s: f64,
    pub k: [f64; 2],
    pub band: Band,
    pub energy: f64,
}

/// Digitized reference band data with its validity window on the path
/// parameter.
#[derive(Clone, Debug)]
pub struct ReferenceBands {
    pub rows: Vec<ReferenceRow>,
    pub window: [f64; 2],
}

impl ReferenceBands {
    /// Parse the CSV interface `s,kx,ky,band,energy_ev` (header mandatory);
    /// the path parameter must be non-decreasing within each band and both
    /// bands must be present.
    pub fn from_csv(text: &str) -> Result<Self, DataError> {
        let mut rows = Vec::new();
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "s,kx,ky,band,energy_ev" => {}
            Some((_, header)) => {
                return Err(DataError::Csv {
                    line: 1,
                    message: format!(
                        "expected header 's,kx,ky,band,energy_ev', got '{}'",
                        header.trim()
                    ),
                })
            }
            None => {
                return Err(DataError::Csv {
                    line: 1,
                    message: "empty file".into(),
                });
            }
        }
        let mut last_s = [f64::NEG_INFINITY; 2];
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(DataError::Csv {
                    line: line_no,
                    message: format!("expected 5 fields, got {}", fields.len()),
                });
            }
            let num = |text: &str, what: &str| -> Result<f64, DataError> {
                text.trim().parse::<f64>().map_err(|_| DataError::Csv {
                    line: line_no,
                    message: format!("bad {what}: '{}'", text.trim()),
                })
            };
            let s = num(fields[0], "path parameter")?;
            let kx = num(fields[1], "kx")?;
            let ky = num(fields[2], "ky")?;
            let band = match fields[3].trim() {
                "upper" => Band::Upper,
                "lower" => Band::Lower,
                other => {
                    return Err(DataError::Csv {
                        line: line_no,
                        message: format!("band must be 'upper' or 'lower', got '{other}'"),
                    })
                }
            };
            let energy = num(fields[4], "energy")?;
            let slot = if band == Band::Upper { 0 } else { 1 };
            if s < last_s[slot] - 1e-12 {
                return Err(DataError::Csv {
                    line: line_no,
                    message: format!("path parameter decreases within the {} band", band.as_str()),
                });
            }
            last_s[slot] = s;
            rows.push(ReferenceRow {
                s,
                k: [kx, ky],
                band,
                energy,
            });
        }
        let has_upper = rows.iter().any(|r| r.band == Band::Upper);
        let has_lower = rows.iter().any(|r| r.band == Band::Lower);
        if !(has_upper && has_lower) {
            return Err(DataError::InvalidParameter(
                "reference data must contain at least 2 bands".into(),
            ));
        }
        Ok(Self {
            rows,
            window: [0.0, 1.0],
        })
    }

    pub fn with_window(mut self, window: [f64; 2]) -> Self {
        self.window = window;
        self
    }

    /// Reference rows generated from a band structure (two rows per sample).
    pub fn from_band_structure(bs: &BandStructure) -> Self {
        let mut rows = Vec::with_capacity(2 * bs.samples.len());
        for sample in &bs.samples {
            rows.push(ReferenceRow {
                s: sample.s,
                k: sample.k,
                band: Band::Upper,
                energy: sample.e_plus,
            });
        }
        for sample in &bs.samples {
            rows.push(ReferenceRow {
                s: sample.s,
                k: sample.k,
                band: Band::Lower,
                energy: sample.e_minus,
            });
        }
        Self {
            rows,
            window: [0.0, 1.0],
        }
    }
}

/// Reference-schema CSV for a sampled band structure.
pub fn bands_to_csv(bs: &BandStructure) -> String {
    let mut out = String::from("s,kx,ky,band,energy_ev\n");
    for sample in &bs.samples {
        out.push_str(&format!(
            "{},{},{},upper,{}\n",
            fmt_f64(sample.s),
            fmt_f64(sample.k[0]),
            fmt_f64(sample.k[1]),
            fmt_f64(sample.e_plus)
        ));
    }
    for sample in &bs.samples {
        out.push_str(&format!(
            "{},{},{},lower,{}\n",
            fmt_f64(sample.s),
            fmt_f64(sample.k[0]),
            fmt_f64(sample.k[1]),
            fmt_f64(sample.e_minus)
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BandError {
    pub rms_ev: f64,
    pub max_abs_ev: f64,
}

/// Per-band RMS and max deviations inside the validity window, plus the
/// gap at K.
#[derive(Clone, Copy, Debug)]
pub struct ComparisonReport {
    pub window: [f64; 2],
    pub n_excluded: usize,
    pub gap_at_k_ev: f64,
    pub e0_used: f64,
    pub upper: BandError,
    pub lower: BandError,
    pub max_abs_ev: f64,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        format!(
            "{{\n  \"window\": [{}, {}],\n  \"n_excluded\": {},\n  \"gap_at_K_ev\": {},\n  \"e0_used\": {},\n  \"bands\": {{\n    \"upper\": {{\"rms_ev\": {}, \"max_abs_ev\": {}}},\n    \"lower\": {{\"rms_ev\": {}, \"max_abs_ev\": {}}}\n  }},\n  \"max_abs_ev\": {}\n}}\n",
            fmt_f64(self.window[0]),
            fmt_f64(self.window[1]),
            self.n_excluded,
            fmt_f64(self.gap_at_k_ev),
            fmt_f64(self.e0_used),
            fmt_f64(self.upper.rms_ev),
            fmt_f64(self.upper.max_abs_ev),
            fmt_f64(self.lower.rms_ev),
            fmt_f64(self.lower.max_abs_ev),
            fmt_f64(self.max_abs_ev)
        )
    }
}

fn compare_with<F>(
    bands_at: F,
    base_e0: f64,
    reference: &ReferenceBands,
    fit_e0: bool,
) -> Result<ComparisonReport, DataError>
where
    F: Fn([f64; 2]) -> (f64, f64),
{
    let [w0, w1] = reference.window;
    let inside: Vec<&ReferenceRow> = reference
        .rows
        .iter()
        .filter(|r| r.s >= w0 - 1e-12 && r.s <= w1 + 1e-12)
        .collect();
    let n_excluded = reference.rows.len() - inside.len();
    if inside.is_empty() {
        return Err(DataError::EmptyWindow);
    }

    let e0_used = if fit_e0 {
        let min_upper = inside
            .iter()
            .filter(|r| r.band == Band::Upper)
            .map(|r| r.energy)
            .fold(f64::INFINITY, f64::min);
        let max_lower = inside
            .iter()
            .filter(|r| r.band == Band::Lower)
            .map(|r| r.energy)
            .fold(f64::NEG_INFINITY, f64::max);
        if !min_upper.is_finite() || !max_lower.is_finite() {
            return Err(DataError::InvalidParameter(
                "window must contain both bands to fit the energy zero".into(),
            ));
        }
        (min_upper + max_lower) / 2.0
    } else {
        base_e0
    };
    let shift = e0_used - base_e0;

    let mut acc = [(0.0f64, 0.0f64, 0usize); 2]; // (sum of squares, max, count)
    for row in &inside {
        let (ep, em) = bands_at(row.k);
        let model_e = match row.band {
            Band::Upper => ep + shift,
            Band::Lower => em + shift,
        };
        let err = (model_e - row.energy).abs();
        let slot = if row.band == Band::Upper { 0 } else { 1 };
        acc[slot].0 += err * err;
        acc[slot].1 = acc[slot].1.max(err);
        acc[slot].2 += 1;
    }
    let band_err = |slot: usize| BandError {
        rms_ev: if acc[slot].2 > 0 {
            (acc[slot].0 / acc[slot].2 as f64).sqrt()
        } else {
            0.0
        },
        max_abs_ev: acc[slot].1,
    };
    let (ep_k, em_k) = bands_at(k_point());
    Ok(ComparisonReport {
        window: [w0, w1],
        n_excluded,
        gap_at_k_ev: ep_k - em_k,
        e0_used,
        upper: band_err(0),
        lower: band_err(1),
        max_abs_ev: acc[0].1.max(acc[1].1),
    })
}

/// Compare a model's dispersion with reference bands inside the validity
/// window. With `fit_e0` the energy zero is re-fitted to the reference
/// midgap, as band-structure plots align curves at the gap.
pub fn band_comparison(
    model: &LatticeModel,
    reference: &ReferenceBands,
    fit_e0: bool,
) -> Result<ComparisonReport, DataError> {
    compare_with(|k| dispersion(model, k), model.e0, reference, fit_e0)
}

/// Same comparison for a transformed model, with the bands evaluated
/// through its coupling table.
pub fn band_comparison_transformed(
    tm: &TransformedModel,
    reference: &ReferenceBands,
    fit_e0: bool,
) -> Result<ComparisonReport, DataError> {
    compare_with(|k| tm.band_pair(k), tm.base.e0, reference, fit_e0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::structure_factor;
    use crate::stabilizer::rotated_couplings;

    #[test]
    fn params_from_fig_values() {
        let (delta, mu) = params_from_band_data(1.79, 3.25).unwrap();
        assert_eq!(mu, 0.895);
        let expected = (1.625f64 * 1.625 - 0.895 * 0.895).sqrt();
        assert!((delta - expected).abs() < 1e-15);

        let (_, mu) = params_from_band_data(1.90, 3.25).unwrap();
        assert_eq!(mu, 0.95);
    }

    #[test]
    fn params_reject_degenerate_and_inverted() {
        // gap → bandwidth pushes the derived hopping below DELTA_MIN
        let e_bw = 3.0;
        assert!(params_from_band_data(e_bw * (1.0 - 1e-13), e_bw).is_err());
        assert!(params_from_band_data(0.0, 3.0).is_err());
        assert!(params_from_band_data(3.0, 2.0).is_err());
    }

    #[test]
    fn theta_routes_basic_values() {
        assert_eq!(theta_from_overlap_ratio(1.0, 0.0).unwrap(), 0.0);
        let t = theta_from_overlap_ratio(0.7, 0.7).unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(theta_from_overlap_ratio(0.0, 0.1).is_err());

        let (e_gap, e_bw) = (1.79_f64, 3.25_f64);
        let root = (e_bw * e_bw - e_gap * e_gap).sqrt();
        let t = theta_from_gap_form(root / 4.0, e_gap, e_bw).unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let t = theta_from_gap_form(root / 2.0, e_gap, e_bw).unwrap();
        assert!(t.abs() < 1e-7);
        assert!(theta_from_gap_form(root, e_gap, e_bw).is_err());

        // direct arithmetic check of the published-form route
        let t = theta_from_gap_form(0.9, 1.79, 3.25).unwrap();
        assert!((t - (3.6 / root - 1.0).acos()).abs() < 1e-15);
    }

    #[test]
    fn theta_routes_agree_on_model_consistent_inputs() {
        let (delta, mu) = (1.3_f64, 0.4_f64);
        let e_gap = 2.0 * mu;
        let e_bw = 2.0 * (delta * delta + mu * mu).sqrt();
        for i in 1..30 {
            let theta = std::f64::consts::PI * i as f64 / 31.0;
            let t1 = nn_overlap_of(delta, theta);
            let t2 = second_overlap_of(delta, theta);
            let via_ratio = theta_from_overlap_ratio(t1, t2).unwrap();
            let via_gap = theta_from_gap_form(t1, e_gap, e_bw).unwrap();
            assert!((via_ratio - theta).abs() < 1e-10);
            assert!((via_gap - theta).abs() < 1e-10);
            assert!((via_ratio - via_gap).abs() < 1e-10);
        }
    }

    #[test]
    fn path_geometry() {
        let path = high_symmetry_path(50).unwrap();
        let first = path.first().unwrap();
        let last = path.last().unwrap();
        assert_eq!(first.label, Some("Gamma"));
        assert_eq!(last.label, Some("Gamma"));
        assert!(dot(first.k, first.k) < 1e-30 && dot(last.k, last.k) < 1e-30);
        assert!((first.s, last.s) == (0.0, 1.0));

        // K on the path has a vanishing structure factor
        let k_sample = path.iter().find(|p| p.label == Some("K")).unwrap();
        assert!(structure_factor(k_sample.k).norm() < 1e-12);
        // |f(M)| = 1
        assert!((structure_factor(m_point()).norm() - 1.0).abs() < 1e-12);
        // s strictly increasing
        for w in path.windows(2) {
            assert!(w[1].s > w[0].s);
        }
        assert!(high_symmetry_path(1).is_err());
    }

    #[test]
    fn gap_sits_at_k_on_the_path() {
        let model = LatticeModel::honeycomb(1.356, 0.895, 0.0).unwrap();
        let path = high_symmetry_path(200).unwrap();
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for p in &path {
            let (ep, em) = dispersion(&model, p.k);
            if ep - em < best.0 {
                best = (ep - em, p.k);
            }
        }
        assert!((best.0 - 2.0 * 0.895).abs() < 1e-12);
        let k = k_point();
        assert!((best.1[0] - k[0]).abs() < 1e-9 && (best.1[1] - k[1]).abs() < 1e-9);
    }

    #[test]
    fn self_comparison_is_exact() {
        let model = LatticeModel::honeycomb(1.0, 0.5, 0.3).unwrap();
        let bands = sample_bands(&model, 60).unwrap();
        let reference = ReferenceBands::from_band_structure(&bands);
        let report = band_comparison(&model, &reference, true).unwrap();
        assert!(report.upper.rms_ev < 1e-12);
        assert!(report.lower.rms_ev < 1e-12);
        assert_eq!(report.n_excluded, 0);
        assert!((report.e0_used - 0.3).abs() < 1e-12);
    }

    #[test]
    fn constant_offset_is_reported() {
        let model = LatticeModel::honeycomb(1.0, 0.5, 0.0).unwrap();
        let bands = sample_bands(&model, 40).unwrap();
        let mut reference = ReferenceBands::from_band_structure(&bands);
        for row in reference.rows.iter_mut() {
            if row.band == Band::Upper {
                row.energy += 0.1;
            }
        }
        let report = band_comparison(&model, &reference, false).unwrap();
        assert!((report.upper.max_abs_ev - 0.1).abs() < 1e-12);
        assert!(report.lower.max_abs_ev < 1e-12);
        assert!((report.max_abs_ev - 0.1).abs() < 1e-12);
    }

    #[test]
    fn closed_loop_gap_at_k() {
        let (delta, mu) = params_from_band_data(1.79, 3.25).unwrap();
        let model = LatticeModel::honeycomb(delta, mu, 0.0).unwrap();
        let bands = sample_bands(&model, 80).unwrap();
        let reference = ReferenceBands::from_band_structure(&bands);
        let report = band_comparison(&model, &reference, true).unwrap();
        assert!((report.gap_at_k_ev - 1.79).abs() < 1e-9);
    }

    #[test]
    fn deformation_neutral_comparison() {
        // rotated model compared against the undeformed bands, through the
        // coupling table
        let model = LatticeModel::honeycomb(1.0, 0.5, 0.0).unwrap();
        let reference = ReferenceBands::from_band_structure(&sample_bands(&model, 50).unwrap());
        for theta in [0.3, 1.0, 2.5] {
            let tm = rotated_couplings(&model, theta);
            let report = band_comparison_transformed(&tm, &reference, false).unwrap();
            assert!(report.upper.rms_ev < 1e-10, "theta {theta}");
            assert!(report.lower.rms_ev < 1e-10);
        }
    }

    #[test]
    fn window_excludes_and_errors() {
        let model = LatticeModel::honeycomb(1.0, 0.5, 0.0).unwrap();
        let bands = sample_bands(&model, 21).unwrap();
        let reference = ReferenceBands::from_band_structure(&bands).with_window([0.25, 0.75]);
        let report = band_comparison(&model, &reference, false).unwrap();
        assert!(report.n_excluded > 0);

        let empty = ReferenceBands::from_band_structure(&bands).with_window([2.0, 3.0]);
        assert!(matches!(
            band_comparison(&model, &empty, false),
            Err(DataError::EmptyWindow)
        ));
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let model = LatticeModel::honeycomb(1.0, 0.5, 0.0).unwrap();
        let bands = sample_bands(&model, 10).unwrap();
        let text = bands_to_csv(&bands);
        let parsed = ReferenceBands::from_csv(&text).unwrap();
        assert_eq!(parsed.rows.len(), 2 * bands.samples.len());

        let bad_header = "a,b,c\n0,0,0,upper,1\n";
        assert!(matches!(
            ReferenceBands::from_csv(bad_header),
            Err(DataError::Csv { line: 1, .. })
        ));
        let bad_band = "s,kx,ky,band,energy_ev\n0.0,0.0,0.0,middle,1.0\n";
        assert!(matches!(
            ReferenceBands::from_csv(bad_band),
            Err(DataError::Csv { line: 2, .. })
        ));
        let bad_float = "s,kx,ky,band,energy_ev\n0.0,x,0.0,upper,1.0\n";
        assert!(matches!(
            ReferenceBands::from_csv(bad_float),
            Err(DataError::Csv { line: 2, .. })
        ));
        let non_monotone =
            "s,kx,ky,band,energy_ev\n0.5,0,0,upper,1\n0.1,0,0,upper,1\n0.0,0,0,lower,0\n";
        assert!(matches!(
            ReferenceBands::from_csv(non_monotone),
            Err(DataError::Csv { line: 3, .. })
        ));
        let one_band = "s,kx,ky,band,energy_ev\n0.0,0,0,upper,1\n";
        assert!(ReferenceBands::from_csv(one_band).is_err());
    }
}
