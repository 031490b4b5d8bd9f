//! The seeded corpus the verification suite runs on: the worked-example
//! Gaussian pairs at three widths, a family of random band-concentrated
//! signals, and the three matrix sets.
//!
//! Everything is driven by one 64-bit seed through ChaCha8, so any failure
//! reproduces from the seed recorded in the reports.

use crate::error::Result;
use crate::grid::Grid2D;
use crate::qft::qft_inverse_fast;
use crate::qlct::LctParams;
use crate::quat::Quaternion;
use crate::signal::{self, norm_sq, QSignal2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One (signal, window) pair with the lattices its checks run on.
pub struct CorpusMember {
    pub label: String,
    pub signal: QSignal2D,
    pub window: QSignal2D,
    pub shift_grid: Grid2D,
    /// Beta of the generating Gaussian where applicable.
    pub beta: Option<f64>,
}

/// The three matrix sets: the worked example's, the QFT reduction, a shear.
pub fn matrix_sets() -> Vec<(String, LctParams, LctParams)> {
    vec![
        ("example".into(), LctParams::example_matrix(), LctParams::example_matrix()),
        ("qft".into(), LctParams::qft_matrix(), LctParams::qft_matrix()),
        ("shear".into(), LctParams::shear_matrix(), LctParams::shear_matrix()),
    ]
}

/// Gaussian pair on a grid sized to the width: half-extent `max(1, 4.5 sqrt(beta))`.
pub fn gaussian_member(n: usize, beta: f64) -> Result<CorpusMember> {
    let half = (4.5 * beta.sqrt()).max(1.0);
    let grid = Grid2D::centered_span(n, half)?;
    let signal = signal::example_gaussian(grid, beta, 0.0, 0.0)?;
    let window = signal::example_window(grid, beta, 0.0, 0.0)?;
    // shift lattice: same span, spacing snapped to whole signal cells
    let shift_grid = shift_grid(&grid, 1, n)?;
    Ok(CorpusMember {
        label: format!("gaussian_beta_{beta}"),
        signal,
        window,
        shift_grid,
        beta: Some(beta),
    })
}

/// Centered shift lattice with spacing `stride` signal cells.
pub fn shift_grid(signal_grid: &Grid2D, stride: usize, count: usize) -> Result<Grid2D> {
    Grid2D::centered(count, stride as f64 * signal_grid.dx1())
}

/// Random band-concentrated quaternion signal: seeded low-frequency spectrum
/// with a Gaussian spectral taper, inverse-transformed, enveloped in space,
/// zeroed on a boundary ring and normalized to unit 2-norm.
pub fn random_band_signal(grid: Grid2D, rng: &mut ChaCha8Rng) -> Result<QSignal2D> {
    let freq = grid.freq_grid();
    let band1 = (grid.n1() / 8).max(1);
    let band2 = (grid.n2() / 8).max(1);
    let mut spectrum = vec![Quaternion::ZERO; grid.len()];
    for m1 in 0..freq.n1() {
        let b1 = m1 as i64 - (freq.n1() / 2) as i64;
        for m2 in 0..freq.n2() {
            let b2 = m2 as i64 - (freq.n2() / 2) as i64;
            if b1.unsigned_abs() as usize > band1 || b2.unsigned_abs() as usize > band2 {
                continue;
            }
            let taper = (-2.0 * ((b1 * b1 + b2 * b2) as f64)
                / ((band1 * band1 + band2 * band2) as f64))
                .exp();
            spectrum[freq.index(m1, m2)] = Quaternion::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .scale(taper);
        }
    }
    let raw = qft_inverse_fast(&QSignal2D::from_samples(freq, spectrum)?, &grid)?;
    let half1 = grid.dx1() * (grid.n1() / 2) as f64;
    let sigma = half1 / 3.0;
    let ring1 = 2.max(grid.n1() / 16);
    let ring2 = 2.max(grid.n2() / 16);
    let enveloped = {
        let g = grid;
        let samples: Vec<Quaternion> = raw
            .samples()
            .iter()
            .enumerate()
            .map(|(k, &q)| {
                let (k1, k2) = g.unindex(k);
                if k1 < ring1 || k1 >= g.n1() - ring1 || k2 < ring2 || k2 >= g.n2() - ring2 {
                    return Quaternion::ZERO;
                }
                let (x1, x2) = (g.coord1(k1), g.coord2(k2));
                q.scale((-(x1 * x1 + x2 * x2) / (2.0 * sigma * sigma)).exp())
            })
            .collect();
        QSignal2D::from_samples(g, samples)?
    };
    let n = norm_sq(&enveloped).sqrt();
    enveloped.scale(1.0 / n)
}

/// Full corpus: Gaussian pairs at beta in {1/16, 1/4, 1} plus `random_count`
/// random members paired with the beta = 1/4 window.
pub fn build_corpus(n: usize, random_count: usize, seed: u64) -> Result<Vec<CorpusMember>> {
    let mut members = Vec::new();
    for beta in [1.0 / 16.0, 0.25, 1.0] {
        members.push(gaussian_member(n, beta)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid2D::centered_span(n, 1.0)?;
    let window = signal::example_window(grid, 0.25, 0.0, 0.0)?;
    let shift = shift_grid(&grid, 2, n)?;
    for idx in 0..random_count {
        let signal = random_band_signal(grid, &mut rng)?;
        members.push(CorpusMember {
            label: format!("random_{idx}"),
            signal,
            window: window.clone(),
            shift_grid: shift,
            beta: None,
        });
    }
    Ok(members)
}

/// Sweep parameters for the standard check suite over one corpus member.
#[derive(Clone, Debug)]
pub struct SuiteParams {
    /// Lieb exponents (> 2).
    pub s_values: Vec<f64>,
    /// Concentration levels for the support bound.
    pub eps_values: Vec<f64>,
    /// Pitt weights in [0, 2].
    pub alpha_values: Vec<f64>,
    /// Relative quadrature budget for the energy identity.
    pub parseval_rel_tol: f64,
    /// Check-name filter; empty runs everything.
    pub checks: Vec<String>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            s_values: vec![2.5, 3.0, 4.0],
            eps_values: vec![0.0, 0.1, 0.3],
            alpha_values: vec![0.0, 0.5, 1.0, 2.0],
            parseval_rel_tol: 2e-2,
            checks: Vec::new(),
        }
    }
}

impl SuiteParams {
    fn wants(&self, name: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|c| c == name)
    }
}

/// Every check of the verification suite for one member/field pair.
pub fn member_reports(
    member: &CorpusMember,
    field: &crate::qwlct::QwlctField,
    params: &SuiteParams,
) -> Result<Vec<crate::uncertainty::InequalityReport>> {
    use crate::uncertainty as unc;
    let f = &member.signal;
    let phi = &member.window;
    let mut out = Vec::new();
    if params.wants("parseval") {
        out.push(unc::check_parseval(f, phi, field, params.parseval_rel_tol));
    }
    if params.wants("boundedness") {
        out.push(unc::check_boundedness(f, phi, field));
    }
    if params.wants("lieb") {
        for &s in &params.s_values {
            out.extend(unc::check_lieb_inequality(f, phi, field, s)?);
        }
    }
    if params.wants("log") {
        out.extend(unc::check_log_up(f, phi, field)?);
    }
    if params.wants("entropic") {
        out.push(unc::check_entropic(f, phi, field)?);
    }
    if params.wants("lieb-up") {
        for &s in params.s_values.iter().filter(|&&s| s > 2.0) {
            for &eps in &params.eps_values {
                out.extend(unc::check_lieb_up(field, eps, s)?);
            }
        }
    }
    if params.wants("donoho-stark") {
        let u_idx = (field.u_grid().n1() / 2, field.u_grid().n2() / 2);
        let fu = crate::qwlct::modified_signal(f, phi, (0.0, 0.0))?;
        let (lambda, _) = unc::essential_support_signal(&fu, 0.1)?;
        let slice = field.slice(u_idx.0, u_idx.1);
        let (xi, _) = unc::essential_support_signal(&slice, 0.1)?;
        out.extend(unc::check_donoho_stark(f, phi, field, &lambda, &xi, u_idx)?);
        // full-domain variant: zero concentration defect on both sides
        let full_lambda = crate::grid::IndexSet2D::full(*fu.grid());
        let full_xi = crate::grid::IndexSet2D::full(*slice.grid());
        let mut full = unc::check_donoho_stark(f, phi, field, &full_lambda, &full_xi, u_idx)?;
        for r in &mut full {
            r.name = format!("{}_full_domain", r.name);
        }
        out.extend(full);
    }
    if params.wants("heisenberg") {
        out.push(unc::check_heisenberg(f, phi, field)?);
    }
    if params.wants("pitt") {
        for &alpha in &params.alpha_values {
            out.extend(unc::check_pitt(f, phi, field, alpha)?);
        }
    }
    Ok(out)
}

/// Covariance and parity identities on the worked-example pair.
///
/// The shift identity moves the frequency argument by `a r`, so for `a != 0`
/// the spatial spacing is chosen as `dx = sqrt(2 pi b / (n stride))`, which
/// makes `dw = stride dx` and keeps `a r` on the frequency lattice for every
/// integer `a`. Boundary tails are ~e^{-32}, so the lattice identities hold
/// to rounding.
pub fn covariance_suite(
    a1: &LctParams,
    a2: &LctParams,
    run_covariance: bool,
    run_parity: bool,
) -> Result<Vec<crate::uncertainty::InequalityReport>> {
    use crate::uncertainty as unc;
    let beta = 1.0 / 16.0;
    let n = 64usize;
    let stride = 8usize;
    let grid = if a1.a() == 0.0 && a2.a() == 0.0 {
        Grid2D::centered_span(n, 2.0)?
    } else {
        let dx = (std::f64::consts::TAU * a1.b().abs() / (n * stride) as f64).sqrt();
        Grid2D::centered(n, dx)?
    };
    let f = signal::example_gaussian(grid, beta, 0.0, 0.0)?;
    let phi = signal::example_window(grid, beta, 0.0, 0.0)?;
    let shift = shift_grid(&grid, stride, 8)?;
    let mut out = Vec::new();

    if run_covariance {
        let du = shift.dx1();
        let dev = crate::qwlct::shift_covariance(&f, &phi, a1, a2, &shift, (du, du))?;
        out.push(
            unc::covariance_report("covariance_shift", &dev, 1e-6)
                .tagged("r", serde_json::json!([du, du])),
        );
        let wg = crate::qlct::qlct_output_grid(&grid, a1, a2)?;
        let s = (wg.dx1() / a1.b(), wg.dx2() / a2.b());
        let dev_m = crate::qwlct::modulation_covariance(&f, &phi, a1, a2, &shift, s)?;
        out.push(
            unc::covariance_report("covariance_modulation", &dev_m, 1e-6)
                .tagged("s", serde_json::json!([s.0, s.1])),
        );
    }
    if run_parity {
        let dev = crate::qwlct::parity_deviation(&f, &phi, a1, a2, &shift)?;
        out.push(unc::covariance_report("parity", &dev, 1e-9));
    }
    Ok(out)
}

/// Componentwise Gaussian noise scaled so `||n||_2 / reference = level`.
pub fn gaussian_noise(grid: Grid2D, level: f64, reference: f64, rng: &mut ChaCha8Rng) -> Result<QSignal2D> {
    if level == 0.0 {
        return Ok(QSignal2D::zeros(grid));
    }
    let raw: Vec<Quaternion> = (0..grid.len())
        .map(|_| {
            Quaternion::new(
                normal(rng),
                normal(rng),
                normal(rng),
                normal(rng),
            )
        })
        .collect();
    let sig = QSignal2D::from_samples(grid, raw)?;
    let n = norm_sq(&sig).sqrt();
    sig.scale(level * reference / n)
}

/// Box-Muller standard normal.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}
