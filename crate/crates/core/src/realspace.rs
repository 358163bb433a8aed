//! Finite real-space Hamiltonians assembled from coupling tables, and the
//! dense eigensolvers used to verify Bloch/real-space spectral equivalence.
//!
//! Two independent solvers are kept deliberately separate so they can
//! cross-check each other: cyclic Jacobi rotations for Hermitian matrices
//! and Hessenberg reduction + shifted QR for general complex matrices.

use num_complex::Complex64;

use crate::lattice::{
    dispersion, reciprocal_vectors, CouplingTable, Geometry, LatticeModel, Sublattice,
};
use crate::serialize::fmt_f64;
use crate::EigenError;

/// Dense storage cap; desk-scale verification needs no sparse solver.
pub const MAX_DENSE: usize = 4096;

/// Matrix dimension cap for the general (QR) eigensolver.
pub const MAX_GENERAL: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

/// A finite lattice Hamiltonian with its site-index map
/// site = 2·(cell linear index) + sublattice.
#[derive(Clone, Debug)]
pub struct RealHamiltonian {
    pub n: usize,
    data: Vec<Complex64>,
    pub geometry: Geometry,
    pub extent: [usize; 2],
    pub boundary: Boundary,
    /// Hops discarded because their offset left the open-boundary index set.
    pub dropped_hops: usize,
}

impl RealHamiltonian {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn site_index(&self, cell: [usize; 2], sub: Sublattice) -> usize {
        let linear = match self.geometry {
            Geometry::Chain => cell[0],
            Geometry::Honeycomb => cell[0] * self.extent[1] + cell[1],
        };
        2 * linear + sub.index()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Place every hop of the table on a finite cell grid. Periodic boundaries
/// wrap offsets modulo the extent; open boundaries drop out-of-range hops
/// and count them.
pub fn assemble(
    table: &CouplingTable,
    extent: [usize; 2],
    boundary: Boundary,
) -> Result<RealHamiltonian, EigenError> {
    let extent = match table.geometry {
        Geometry::Chain => [extent[0], 1],
        Geometry::Honeycomb => extent,
    };
    let dims = match table.geometry {
        Geometry::Chain => 1,
        Geometry::Honeycomb => 2,
    };
    for &cells_in_dir in extent.iter().take(dims) {
        if cells_in_dir < 2 && boundary == Boundary::Periodic {
            return Err(EigenError::BadExtent(format!(
                "periodic direction needs at least 2 cells, got {cells_in_dir}"
            )));
        }
        if cells_in_dir == 0 {
            return Err(EigenError::BadExtent("zero cells".into()));
        }
    }
    let cells = extent[0] * extent[1];
    let n = 2 * cells;
    if n > MAX_DENSE {
        return Err(EigenError::TooLarge { n, max: MAX_DENSE });
    }

    let mut h = RealHamiltonian {
        n,
        data: vec![Complex64::new(0.0, 0.0); n * n],
        geometry: table.geometry,
        extent,
        boundary,
        dropped_hops: 0,
    };

    for c0 in 0..extent[0] {
        for c1 in 0..extent[1] {
            let from_cell = [c0, c1];
            let a_site = h.site_index(from_cell, Sublattice::A);
            let b_site = h.site_index(from_cell, Sublattice::B);
            h.add(a_site, a_site, table.onsite_a);
            h.add(b_site, b_site, table.onsite_b);

            for hop in &table.hops {
                let raw = [c0 as i64 + hop.offset[0], c1 as i64 + hop.offset[1]];
                let mut target = [0usize; 2];
                let mut in_range = true;
                for d in 0..2 {
                    let ext = extent[d] as i64;
                    match boundary {
                        Boundary::Periodic => target[d] = raw[d].rem_euclid(ext) as usize,
                        Boundary::Open => {
                            if raw[d] < 0 || raw[d] >= ext {
                                in_range = false;
                            } else {
                                target[d] = raw[d] as usize;
                            }
                        }
                    }
                }
                if !in_range {
                    h.dropped_hops += 1;
                    continue;
                }
                let row = h.site_index(target, hop.to);
                let col = h.site_index(from_cell, hop.from);
                h.add(row, col, hop.amplitude);
            }
        }
    }
    Ok(h)
}

// ═══════════════════════════════════════════════════════════════════
//  Hermitian solver: cyclic Jacobi rotations
// ═══════════════════════════════════════════════════════════════════

/// Full spectrum of a Hermitian matrix via cyclic Jacobi rotations,
/// ascending. Terminates when the off-diagonal Frobenius norm drops below
/// 1e-12·‖H‖_F (cap 100 sweeps); every eigenpair is residual-checked
/// against ‖Hv − λv‖ ≤ 1e-9·‖H‖_F.
pub fn hermitian_eigenvalues(h: &RealHamiltonian) -> Result<Vec<f64>, EigenError> {
    let scale = h.fro_norm().max(1.0);
    let dev = h.hermiticity_deviation();
    if dev > 1e-12 * scale {
        return Err(EigenError::NotHermitian { deviation: dev });
    }

    let n = h.n;
    let mut a = h.data.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let norm = h.fro_norm();
    let stop = 1e-12 * norm.max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i * n + j].norm_sqr();
                }
            }
        }
        if off.sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(EigenError::NoConvergence {
            context: "Jacobi sweep cap reached".into(),
        });
    }

    // residual check per eigenpair
    let bound = 1e-9 * norm.max(1.0);
    for j in 0..n {
        let lambda = a[j * n + j].re;
        let col: Vec<Complex64> = (0..n).map(|i| v[i * n + j]).collect();
        let hv = h.matvec(&col);
        let res: f64 = hv
            .iter()
            .zip(&col)
            .map(|(hv_i, v_i)| (hv_i - v_i.scale(lambda)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > bound {
            return Err(EigenError::ResidualTooLarge { value: res, bound });
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// One complex Jacobi rotation annihilating a[p][q]. The phase of the pivot
/// is factored out so the core rotation is the classical real one.
fn jacobi_rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let alpha = apq.scale(1.0 / r); // unit phase of the pivot
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (app - aqq) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // column p of the rotation is (c, s·conj(α)), column q is (−s, c·conj(α))
    let s_ca = alpha.conj().scale(s);
    let c_ca = alpha.conj().scale(c);
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        a[i * n + p] = aip.scale(c) + aiq * s_ca;
        a[i * n + q] = aiq * c_ca - aip.scale(s);
        a[p * n + i] = a[i * n + p].conj();
        a[q * n + i] = a[i * n + q].conj();
    }
    let new_pp = c * c * app + 2.0 * c * s * r + s * s * aqq;
    let new_qq = c * c * aqq - 2.0 * c * s * r + s * s * app;
    a[p * n + p] = Complex64::new(new_pp, 0.0);
    a[q * n + q] = Complex64::new(new_qq, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    for i in 0..n {
        let vip = v[i * n + p];
        let viq = v[i * n + q];
        v[i * n + p] = vip.scale(c) + viq * s_ca;
        v[i * n + q] = viq * c_ca - vip.scale(s);
    }
}

// ═══════════════════════════════════════════════════════════════════
//  General solver: Hessenberg reduction + shifted QR
// ═══════════════════════════════════════════════════════════════════

/// Full spectrum of a general complex matrix (n ≤ 512) via Householder
/// Hessenberg reduction and Wilkinson-shifted QR iteration, sorted by
/// (re, im). Fails explicitly on non-convergence (cap 30n iterations) or
/// when the spectrum does not reproduce trace and determinant.
pub fn general_eigenvalues(h: &RealHamiltonian) -> Result<Vec<Complex64>, EigenError> {
    general_eigenvalues_dense(&h.data, h.n)
}

/// Same solver on a raw row-major matrix.
pub fn general_eigenvalues_dense(
    data: &[Complex64],
    n: usize,
) -> Result<Vec<Complex64>, EigenError> {
    if n > MAX_GENERAL {
        return Err(EigenError::TooLarge {
            n,
            max: MAX_GENERAL,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = data.to_vec();
    hessenberg(&mut a, n);

    let mut eigs = Vec::with_capacity(n);
    let max_iters = 30 * n.max(1);
    let mut iters = 0usize;
    let mut hi = n - 1;
    let mut stall = 0usize;
    loop {
        // deflate tiny subdiagonals
        for i in 1..=hi {
            let small = f64::EPSILON * (a[(i - 1) * n + (i - 1)].norm() + a[i * n + i].norm());
            if a[i * n + (i - 1)].norm() <= small.max(1e-300) {
                a[i * n + (i - 1)] = Complex64::new(0.0, 0.0);
            }
        }
        // peel converged eigenvalues off the bottom
        loop {
            if hi == 0 {
                eigs.push(a[0]);
                break;
            }
            if a[hi * n + (hi - 1)].norm() == 0.0 {
                eigs.push(a[hi * n + hi]);
                hi -= 1;
                stall = 0;
                continue;
            }
            break;
        }
        if eigs.len() == n {
            break;
        }
        // locate the unreduced block [lo..=hi]; blocks are iterated all the
        // way down to size 1 — extracting 2×2 blocks by the quadratic
        // formula loses half the digits on degenerate pairs
        let mut lo = hi;
        while lo > 0 && a[lo * n + (lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        if iters >= max_iters {
            return Err(EigenError::NoConvergence {
                context: format!(
                    "QR cap {max_iters} reached with {} eigenvalues left",
                    n - eigs.len()
                ),
            });
        }
        iters += 1;
        stall += 1;

        // Wilkinson-style shift from the trailing 2×2, with an exceptional
        // shift when progress stalls
        let shift = if stall.is_multiple_of(12) {
            let lower = a[hi * n + (hi - 1)].norm()
                + if hi >= 2 {
                    a[(hi - 1) * n + (hi - 2)].norm()
                } else {
                    0.0
                };
            a[hi * n + hi] + Complex64::new(1.5 * lower, 0.0)
        } else {
            let [l1, l2] = eig2(
                a[(hi - 1) * n + (hi - 1)],
                a[(hi - 1) * n + hi],
                a[hi * n + (hi - 1)],
                a[hi * n + hi],
            );
            let corner = a[hi * n + hi];
            if (l1 - corner).norm() <= (l2 - corner).norm() {
                l1
            } else {
                l2
            }
        };

        qr_step(&mut a, n, lo, hi, shift);
    }

    eigs.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
    check_spectrum(data, n, &eigs)?;
    Ok(eigs)
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut [Complex64], n: usize) {
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut norm_sqr = 0.0;
        for i in k + 1..n {
            norm_sqr += a[i * n + k].norm_sqr();
        }
        let norm = norm_sqr.sqrt();
        if norm < 1e-300 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0.scale(1.0 / x0.norm())
        };
        // v = x + phase·‖x‖ e₁ avoids cancellation
        let mut v = vec![Complex64::new(0.0, 0.0); n - k - 1];
        for i in k + 1..n {
            v[i - k - 1] = a[i * n + k];
        }
        v[0] += phase.scale(norm);
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv < 1e-300 {
            continue;
        }
        let tau = 2.0 / vv;

        // left: rows k+1..n, all columns ≥ k
        for j in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                w += v[i - k - 1].conj() * a[i * n + j];
            }
            w = w.scale(tau);
            for i in k + 1..n {
                let vi = v[i - k - 1];
                a[i * n + j] -= vi * w;
            }
        }
        // right: all rows, columns k+1..n
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                w += a[i * n + j] * v[j - k - 1];
            }
            w = w.scale(tau);
            for j in k + 1..n {
                a[i * n + j] -= w * v[j - k - 1].conj();
            }
        }
        // enforce the exact zeros
        a[(k + 1) * n + k] = phase.scale(-norm);
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
}

/// One explicit shifted QR step on the Hessenberg window [lo..=hi].
fn qr_step(a: &mut [Complex64], n: usize, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        a[i * n + i] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let f = a[i * n + i];
        let g = a[(i + 1) * n + i];
        let (c, s) = givens(f, g);
        rotations.push((c, s));
        // rows i, i+1 over columns i..=hi
        for j in i..=hi {
            let top = a[i * n + j];
            let bot = a[(i + 1) * n + j];
            a[i * n + j] = top.scale(c) + s * bot;
            a[(i + 1) * n + j] = bot.scale(c) - s.conj() * top;
        }
    }
    for (idx, (c, s)) in rotations.iter().enumerate() {
        let i = lo + idx;
        // columns i, i+1 over rows lo..=min(i+1, hi)+1
        let row_end = (i + 1).min(hi);
        for r in lo..=row_end {
            let left = a[r * n + i];
            let right = a[r * n + (i + 1)];
            a[r * n + i] = left.scale(*c) + right * s.conj();
            a[r * n + (i + 1)] = right.scale(*c) - left * *s;
        }
    }
    for i in lo..=hi {
        a[i * n + i] += shift;
    }
}

/// Complex Givens pair (c real, s complex) with
/// [[c, s], [−s̄, c]]·(f, g)ᵀ = (r, 0)ᵀ.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    let d = (fn_ * fn_ + gn * gn).sqrt();
    if fn_ == 0.0 {
        // pure swap with phase
        return (0.0, g.conj().scale(1.0 / gn));
    }
    let c = fn_ / d;
    let s = f.scale(1.0 / fn_) * g.conj().scale(1.0 / d);
    (c, s)
}

/// Eigenvalues of a 2×2 complex matrix.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 2] {
    let mean = (a + d).scale(0.5);
    let det = a * d - b * c;
    let disc = (mean * mean - det).sqrt();
    [mean + disc, mean - disc]
}

/// Global spectrum sanity: Σλ = tr(A) always, Σ log|λ| = log|det(A)| when
/// no eigenvalue is numerically zero, and for n ≤ 64 a characteristic-
/// polynomial residual |det(A − λ𝟙)| at every computed eigenvalue.
fn check_spectrum(data: &[Complex64], n: usize, eigs: &[Complex64]) -> Result<(), EigenError> {
    let mut trace = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 1.0;
    for i in 0..n {
        trace += data[i * n + i];
    }
    for z in data {
        scale = scale.max(z.norm());
    }
    let sum: Complex64 = eigs.iter().sum();
    let tol = 1e-6 * scale * n as f64;
    if (sum - trace).norm() > tol {
        return Err(EigenError::ResidualTooLarge {
            value: (sum - trace).norm(),
            bound: tol,
        });
    }

    let min_mag = eigs.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_mag > 1e-9 * scale {
        let (log_det, _) = lu_log_det(data, n);
        let log_prod: f64 = eigs.iter().map(|z| z.norm().ln()).sum();
        if (log_det - log_prod).abs() > 1e-6 * n as f64 {
            return Err(EigenError::ResidualTooLarge {
                value: (log_det - log_prod).abs(),
                bound: 1e-6 * n as f64,
            });
        }
    }

    if n <= 64 {
        // scaled characteristic-polynomial residual per eigenvalue
        let floor = (1e-3 * scale).max(1e-12);
        for (j, lambda) in eigs.iter().enumerate() {
            let mut shifted = data.to_vec();
            for i in 0..n {
                shifted[i * n + i] -= lambda;
            }
            let (log_mag, exact_zero) = lu_log_det(&shifted, n);
            if exact_zero {
                continue;
            }
            let mut log_scale = 0.0;
            for (i, other) in eigs.iter().enumerate() {
                if i != j {
                    log_scale += (other - lambda).norm().max(floor).ln();
                }
            }
            let residual = (log_mag - log_scale).exp();
            let bound = 1e-6 * scale.max(1.0);
            if residual > bound {
                return Err(EigenError::ResidualTooLarge {
                    value: residual,
                    bound,
                });
            }
        }
    }
    Ok(())
}

/// log|det| via LU with partial pivoting; the flag reports an exactly zero
/// pivot (det = 0).
fn lu_log_det(data: &[Complex64], n: usize) -> (f64, bool) {
    let mut a = data.to_vec();
    let mut log_mag = 0.0;
    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = a[k * n + k].norm();
        for i in k + 1..n {
            let m = a[i * n + k].norm();
            if m > pivot_mag {
                pivot_mag = m;
                pivot_row = i;
            }
        }
        if pivot_mag == 0.0 {
            return (f64::NEG_INFINITY, true);
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
        }
        let pivot = a[k * n + k];
        log_mag += pivot.norm().ln();
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let akj = a[k * n + j];
                a[i * n + j] -= factor * akj;
            }
        }
    }
    (log_mag, false)
}

// ═══════════════════════════════════════════════════════════════════
//  Bloch-side oracle and output format
// ═══════════════════════════════════════════════════════════════════

/// Union of dispersion values over the allowed k-grid of the finite
/// periodic lattice: k_j = πj/m for the chain (2-site cell), and
/// k = (j₁/m₁)G₁ + (j₂/m₂)G₂ for the honeycomb. Sorted ascending.
pub fn bloch_spectrum_multiset(model: &LatticeModel, extent: [usize; 2]) -> Vec<f64> {
    let mut values = Vec::new();
    match model.geometry {
        Geometry::Chain => {
            let m = extent[0];
            for j in 0..m {
                let k = [std::f64::consts::PI * j as f64 / m as f64, 0.0];
                let (ep, em) = dispersion(model, k);
                values.push(ep);
                values.push(em);
            }
        }
        Geometry::Honeycomb => {
            let [g1, g2] = reciprocal_vectors();
            let (m1, m2) = (extent[0], extent[1]);
            for j1 in 0..m1 {
                for j2 in 0..m2 {
                    let (f1, f2) = (j1 as f64 / m1 as f64, j2 as f64 / m2 as f64);
                    let k = [g1[0] * f1 + g2[0] * f2, g1[1] * f1 + g2[1] * f2];
                    let (ep, em) = dispersion(model, k);
                    values.push(ep);
                    values.push(em);
                }
            }
        }
    }
    values.sort_by(f64::total_cmp);
    values
}

/// Max pairwise distance of two sorted multisets (∞ when lengths differ).
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Sorted-pairwise distance of complex multisets, ordering by (re, im).
pub fn complex_multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let key = |z: &Complex64| (z.re, z.im);
    let mut aa = a.to_vec();
    let mut bb = b.to_vec();
    aa.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    bb.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    aa.iter()
        .zip(&bb)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Spectrum dump: CSV with mandatory header `index,re_eV,im_eV`.
pub fn spectrum_csv(values: &[Complex64]) -> String {
    let mut out = String::from("index,re_eV,im_eV\n");
    for (i, z) in values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}
