//! The `verify` subcommand: one deterministic pass over the invariant
//! suites of every module, reported as machine-readable JSON plus one
//! pass/fail line per check on stdout.

use num_complex::Complex64;

use latstab::algebra::{random_element, GammaSet, StabilizerElement};
use latstab::lattice::{
    base_couplings, bloch_hamiltonian, dirac_points, dispersion, kinetic_of_k, structure_factor,
    Geometry, KineticVector, LatticeModel,
};
use latstab::matrix::C2Matrix;
use latstab::monolayer::gap_scan_path;
use latstab::ptsym::{
    metric_operator, pi_samples, pseudo_hermiticity_residual, pt_residual, spectral_reality_report,
};
use latstab::realspace::{
    assemble, bloch_spectrum_multiset, general_eigenvalues, hermitian_eigenvalues,
    multiset_distance, Boundary,
};
use latstab::rng::SplitMix64;
use latstab::serialize::fmt_f64;
use latstab::stabilizer::{boosted_couplings, fw_transform, rotated_couplings, transform_bloch};
use latstab::{mass_shell_residual, ALG_TOL};

use crate::config::RunConfig;

pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn random_k(rng: &mut SplitMix64, geometry: Geometry) -> [f64; 2] {
    match geometry {
        Geometry::Chain => [rng.range(0.0, std::f64::consts::PI), 0.0],
        Geometry::Honeycomb => [rng.range(-7.0, 7.0), rng.range(-7.0, 7.0)],
    }
}

/// Run every check for the configured model. `flag_tolerance`, when given,
/// overrides all per-check tolerances.
pub fn run_checks(
    config: &RunConfig,
    model: &LatticeModel,
    flag_tolerance: Option<f64>,
) -> Result<Vec<CheckResult>, String> {
    let overrides = config.tolerances.as_ref();
    let tol = |default: f64, specific: Option<f64>| -> f64 {
        flag_tolerance.or(specific).unwrap_or(default)
    };

    let n_k = config.k_samples.max(10);
    let seed = config.seed;
    let (theta, phi) = match config
        .transform
        .as_ref()
        .map(|t| (t.kind.as_str(), t.parameter))
    {
        Some(("rotation", p)) => (p, 0.7),
        Some(("boost", p)) => (0.5, p),
        _ => (0.5, 0.7),
    };
    let rotated = rotated_couplings(model, theta);
    let boosted = boosted_couplings(model, phi);

    let mut checks = Vec::new();

    // Clifford algebra of the γ set, then preservation under conjugation
    let gammas = GammaSet::standard();
    checks.push(CheckResult {
        name: "clifford",
        residual: gammas.anticommutation_residual(),
        tolerance: tol(ALG_TOL, overrides.and_then(|t| t.algebra)),
    });
    let mut rng = SplitMix64::new(seed);
    let mut conj_residual: f64 = 0.0;
    for _ in 0..100 {
        let s = random_element(&mut rng, 2.0);
        let tilde = gammas.conjugated(&s.matrix).map_err(|e| e.to_string())?;
        conj_residual = conj_residual.max(tilde.anticommutation_residual());
    }
    checks.push(CheckResult {
        name: "clifford_conjugated",
        residual: conj_residual,
        tolerance: tol(1e-10, overrides.and_then(|t| t.algebra)),
    });

    // dispersion vs 2×2 diagonalization, and the mass-shell identity
    let mut rng = SplitMix64::new(seed ^ 0x11);
    let mut disp_residual: f64 = 0.0;
    let mut shell_residual: f64 = 0.0;
    for _ in 0..n_k {
        let k = random_k(&mut rng, model.geometry);
        let (ep, em) = dispersion(model, k);
        let h = bloch_hamiltonian(model, kinetic_of_k(model, k));
        let [lo, hi] = h.eigenvalues_hermitian();
        disp_residual = disp_residual.max((hi - ep).abs()).max((lo - em).abs());
        shell_residual = shell_residual.max(mass_shell_residual(model, k));
    }
    checks.push(CheckResult {
        name: "dispersion_identity",
        residual: disp_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.dispersion)),
    });
    checks.push(CheckResult {
        name: "mass_shell",
        residual: shell_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.mass_shell)),
    });

    // Dirac points: kinetic vector vanishes, gap at Π = 0 is exactly 2μ
    let mut dirac_residual: f64 = 0.0;
    for kd in dirac_points(model) {
        let pi = kinetic_of_k(model, kd);
        dirac_residual = dirac_residual.max(pi.norm_sqr().sqrt());
        if model.geometry == Geometry::Honeycomb {
            dirac_residual = dirac_residual.max(structure_factor(kd).norm());
        }
    }
    let h0 = bloch_hamiltonian(model, KineticVector::new(0.0, 0.0));
    let [lo, hi] = h0.eigenvalues_hermitian();
    dirac_residual = dirac_residual.max(((hi - lo) - 2.0 * model.mu).abs());
    checks.push(CheckResult {
        name: "dirac_points",
        residual: dirac_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.dirac)),
    });

    // isospectrality of transformed Bloch matrices
    let mut rng = SplitMix64::new(seed ^ 0x22);
    let mut elements: Vec<StabilizerElement> = vec![
        StabilizerElement::rotation_y(theta),
        StabilizerElement::boost(phi),
    ];
    elements.push(random_element(&mut rng, 1.5));
    elements.push(random_element(&mut rng, 1.5));
    let mut iso_residual: f64 = 0.0;
    for s in &elements {
        for _ in 0..n_k {
            let k = random_k(&mut rng, model.geometry);
            let ht = transform_bloch(s, model, k);
            let [lo, hi] = ht.eigenvalues();
            let (ep, em) = dispersion(model, k);
            iso_residual = iso_residual
                .max((lo - Complex64::new(em, 0.0)).norm())
                .max((hi - Complex64::new(ep, 0.0)).norm());
        }
    }
    checks.push(CheckResult {
        name: "isospectrality",
        residual: iso_residual,
        tolerance: tol(1e-10, overrides.and_then(|t| t.isospectrality)),
    });

    // gap invariance over a dense path, through the coupling tables
    let mut gap_residual: f64 = 0.0;
    for tm in [&rotated, &boosted] {
        let mut min_gap = f64::INFINITY;
        for k in gap_scan_path(model, 400) {
            let [lo, hi] = tm.eigenvalues(k);
            min_gap = min_gap.min((hi - lo).norm());
        }
        gap_residual = gap_residual.max((min_gap - 2.0 * model.mu).abs());
    }
    checks.push(CheckResult {
        name: "gap_invariance",
        residual: gap_residual,
        tolerance: tol(1e-9, overrides.and_then(|t| t.gap)),
    });

    // coupling-table decomposition reproduces the conjugated Bloch matrix
    let mut rng = SplitMix64::new(seed ^ 0x33);
    let mut decomp_residual: f64 = 0.0;
    for tm in [&rotated, &boosted] {
        for _ in 0..n_k {
            let k = random_k(&mut rng, model.geometry);
            let diff = tm.bloch_matrix(k) - transform_bloch(&tm.element, model, k);
            decomp_residual = decomp_residual.max(diff.max_abs());
        }
    }
    checks.push(CheckResult {
        name: "coupling_decomposition",
        residual: decomp_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.decomposition)),
    });

    // Foldy–Wouthuysen: unitarity, diagonality, band entries
    let mut rng = SplitMix64::new(seed ^ 0x44);
    let mut fw_residual: f64 = 0.0;
    let mut sampled = 0;
    while sampled < n_k {
        let k = random_k(&mut rng, model.geometry);
        let pi = kinetic_of_k(model, k);
        if pi.norm_sqr().sqrt() < 1e-8 {
            continue;
        }
        sampled += 1;
        let (u, d) = fw_transform(model, k);
        fw_residual = fw_residual
            .max((u.adjoint() * u - C2Matrix::identity()).max_abs())
            .max(d.e[0][1].norm())
            .max(d.e[1][0].norm());
        let lambda = (pi.norm_sqr() + model.mu * model.mu).sqrt();
        fw_residual = fw_residual
            .max((d.e[0][0].re - (model.e0 + lambda)).abs())
            .max((d.e[1][1].re - (model.e0 - lambda)).abs());
    }
    checks.push(CheckResult {
        name: "foldy_wouthuysen",
        residual: fw_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.fw)),
    });

    // PT symmetry of the boosted family (optionally perturbed as a fixture)
    let samples = pi_samples(3.0 * model.delta, 100, seed ^ 0x55);
    let element = boosted.element;
    let base = *model;
    let fixture = config.pt_perturbation.unwrap_or(0.0);
    let hfun = move |pi: KineticVector| {
        let mut h = element.conjugate(&bloch_hamiltonian(&base, pi));
        if fixture != 0.0 {
            h = h + C2Matrix::scalar(Complex64::new(0.0, fixture));
        }
        h
    };
    checks.push(CheckResult {
        name: "pt_symmetry",
        residual: pt_residual(hfun, &samples),
        tolerance: tol(1e-12, overrides.and_then(|t| t.pt)),
    });

    // pseudo-Hermiticity under the metric S†S
    let metric = metric_operator(&element.matrix).map_err(|e| e.to_string())?;
    let mut pseudo_residual: f64 = 0.0;
    for pi in &samples {
        let ht = element.conjugate(&bloch_hamiltonian(model, *pi));
        pseudo_residual = pseudo_residual.max(pseudo_hermiticity_residual(&metric, &ht));
    }
    checks.push(CheckResult {
        name: "pseudo_hermiticity",
        residual: pseudo_residual,
        tolerance: tol(1e-12, overrides.and_then(|t| t.pseudo_hermiticity)),
    });

    // Bloch/real-space spectral equivalence on a finite periodic lattice
    let extent = config.extent_or(40, 6)?;
    let expected = bloch_spectrum_multiset(model, extent);
    let mut rs_residual: f64 = 0.0;
    for table in [&base_couplings(model), &rotated.couplings] {
        let h = assemble(table, extent, Boundary::Periodic).map_err(|e| e.to_string())?;
        let got = hermitian_eigenvalues(&h).map_err(|e| e.to_string())?;
        rs_residual = rs_residual.max(multiset_distance(&got, &expected));
    }
    {
        let h =
            assemble(&boosted.couplings, extent, Boundary::Periodic).map_err(|e| e.to_string())?;
        let got = general_eigenvalues(&h).map_err(|e| e.to_string())?;
        let re: Vec<f64> = got.iter().map(|z| z.re).collect();
        rs_residual = rs_residual.max(multiset_distance(&re, &expected));
    }
    checks.push(CheckResult {
        name: "realspace_equivalence",
        residual: rs_residual,
        tolerance: tol(1e-8, overrides.and_then(|t| t.realspace)),
    });

    // spectral reality of the boosted lattice plus metric-norm conservation
    let report = spectral_reality_report(&boosted, extent).map_err(|e| e.to_string())?;
    checks.push(CheckResult {
        name: "spectral_reality",
        residual: report.max_im_lambda.max(report.metric_drift),
        tolerance: tol(1e-8, overrides.and_then(|t| t.spectral_reality)),
    });

    // open-boundary sanity when requested: Hermitian truncations stay
    // within the infinite-lattice band hull
    match config.boundary.as_str() {
        "periodic" => {}
        "open" => {
            let pi_max_sq = match model.geometry {
                Geometry::Chain => 4.0 * model.delta * model.delta,
                Geometry::Honeycomb => 9.0 * model.delta * model.delta,
            };
            let edge = (pi_max_sq + model.mu * model.mu).sqrt();
            let (lo_edge, hi_edge) = (model.e0 - edge, model.e0 + edge);
            let mut excess: f64 = 0.0;
            for table in [&base_couplings(model), &rotated.couplings] {
                let h = assemble(table, extent, Boundary::Open).map_err(|e| e.to_string())?;
                for e in hermitian_eigenvalues(&h).map_err(|e| e.to_string())? {
                    excess = excess.max(lo_edge - e).max(e - hi_edge);
                }
            }
            checks.push(CheckResult {
                name: "open_boundary_bounds",
                residual: excess.max(0.0),
                tolerance: tol(1e-9, overrides.and_then(|t| t.realspace)),
            });
        }
        other => return Err(format!("unknown boundary '{other}' (periodic|open)")),
    }

    Ok(checks)
}

pub fn report_json(config: &RunConfig, checks: &[CheckResult]) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"geometry\": \"{}\",\n", config.geometry));
    out.push_str(&format!("  \"seed\": {},\n", config.seed));
    out.push_str("  \"checks\": [\n");
    for (i, c) in checks.iter().enumerate() {
        let sep = if i + 1 == checks.len() { "" } else { "," };
        out.push_str(&format!(
            "    {{\"name\": \"{}\", \"residual\": {}, \"tolerance\": {}, \"pass\": {}}}{}\n",
            c.name,
            fmt_f64(c.residual),
            fmt_f64(c.tolerance),
            c.pass(),
            sep
        ));
    }
    out.push_str("  ],\n");
    out.push_str(&format!(
        "  \"all_pass\": {}\n}}\n",
        checks.iter().all(CheckResult::pass)
    ));
    out
}
