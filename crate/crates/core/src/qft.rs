//! Two-sided quaternion Fourier transform.
//!
//! Forward: `F(w) = sum_x e^{-i x1 w1} f(x) e^{-j x2 w2} dx1 dx2` on the
//! signed-bin frequency lattice of the signal's grid. The inverse flips the
//! kernel signs and carries the project-wide `1/(2 pi)^2` normalization.
//!
//! [`qft_forward_naive`] is the direct-summation oracle; the fast path must
//! agree with it to 1e-10 absolute and is implemented over the shared
//! [`crate::fft2`] engine.

use crate::error::{Error, Result};
use crate::fft2::{two_sided_fft, AxisLattice, TwoSidedPlan};
use crate::grid::Grid2D;
use crate::quat::Quaternion;
use crate::signal::QSignal2D;

/// What to do with grid shapes that are not powers of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PadPolicy {
    /// Fail with [`Error::NotPowerOfTwo`].
    #[default]
    Reject,
    /// Zero-pad the signal up to the next power of two per axis, transform,
    /// and crop the centered block of original shape from the padded
    /// frequency lattice.
    ZeroPad,
}

fn axis(min: f64, step: f64, n: usize) -> AxisLattice {
    AxisLattice { min, step, n }
}

fn spatial_axes(grid: &Grid2D) -> (AxisLattice, AxisLattice) {
    (
        axis(grid.x1_min(), grid.dx1(), grid.n1()),
        axis(grid.x2_min(), grid.dx2(), grid.n2()),
    )
}

fn freq_axes(freq: &Grid2D) -> (AxisLattice, AxisLattice) {
    (
        axis(freq.x1_min(), freq.dx1(), freq.n1()),
        axis(freq.x2_min(), freq.dx2(), freq.n2()),
    )
}

/// Direct O(N^4) evaluation of the forward transform on the frequency grid.
pub fn qft_forward_naive(f: &QSignal2D) -> QSignal2D {
    let freq = f.grid().freq_grid();
    let w1s: Vec<f64> = (0..freq.n1()).map(|m| freq.coord1(m)).collect();
    let w2s: Vec<f64> = (0..freq.n2()).map(|m| freq.coord2(m)).collect();
    let values = two_sided_naive(f, &w1s, &w2s, -1, f.grid().cell_area());
    QSignal2D::from_parts_unchecked(freq, values)
}

/// Direct evaluation of `sum_x e^{sign*i*x1*w1} f(x) e^{sign*j*x2*w2} * scale`
/// at every pair from `w1s x w2s`. Kernel values come straight from sin/cos,
/// independent of the FFT path.
#[allow(clippy::needless_range_loop)] // indexed kernel tables in the oracle loops
pub fn two_sided_naive(
    f: &QSignal2D,
    w1s: &[f64],
    w2s: &[f64],
    sign: i32,
    scale: f64,
) -> Vec<Quaternion> {
    let grid = *f.grid();
    let s = sign as f64;
    let rows = crate::par::map_indexed(w1s.len(), |m1| {
        let w1 = w1s[m1];
        // per-output kernel tables keep the O(N^4) loop honest but cheap
        let left: Vec<(f64, f64)> = (0..grid.n1())
            .map(|k1| (s * grid.coord1(k1) * w1).sin_cos())
            .collect();
        let mut row = Vec::with_capacity(w2s.len());
        for &w2 in w2s {
            let right: Vec<(f64, f64)> = (0..grid.n2())
                .map(|k2| (s * grid.coord2(k2) * w2).sin_cos())
                .collect();
            let mut acc = Quaternion::ZERO;
            for k1 in 0..grid.n1() {
                let (ls, lc) = left[k1];
                for k2 in 0..grid.n2() {
                    let (rs, rc) = right[k2];
                    acc += f.value(k1, k2).left_mul_i(lc, ls).right_mul_j(rc, rs);
                }
            }
            row.push(acc.scale(scale));
        }
        row
    });
    rows.into_iter().flatten().collect()
}

/// FFT-based forward transform; value contract identical to
/// [`qft_forward_naive`] within 1e-10 absolute.
pub fn qft_forward_fast(f: &QSignal2D) -> Result<QSignal2D> {
    qft_forward_fast_with(f, PadPolicy::Reject)
}

pub fn qft_forward_fast_with(f: &QSignal2D, pad: PadPolicy) -> Result<QSignal2D> {
    let grid = *f.grid();
    if !grid.n1().is_power_of_two() || !grid.n2().is_power_of_two() {
        match pad {
            PadPolicy::Reject => return Err(Error::NotPowerOfTwo(grid.n1(), grid.n2())),
            PadPolicy::ZeroPad => return padded_forward(f),
        }
    }
    let freq = grid.freq_grid();
    let (in1, in2) = spatial_axes(&grid);
    let (out1, out2) = freq_axes(&freq);
    let plan = TwoSidedPlan {
        sign1: -1,
        sign2: -1,
        in1,
        in2,
        out1,
        out2,
        scale: grid.cell_area(),
    };
    let values = two_sided_fft(f.samples(), &plan)?;
    Ok(QSignal2D::from_parts_unchecked(freq, values))
}

fn padded_forward(f: &QSignal2D) -> Result<QSignal2D> {
    let grid = *f.grid();
    let (p1, p2) = (grid.n1().next_power_of_two(), grid.n2().next_power_of_two());
    let padded_grid = Grid2D::new(p1, p2, grid.x1_min(), grid.x2_min(), grid.dx1(), grid.dx2())?;
    let mut samples = vec![Quaternion::ZERO; p1 * p2];
    for k1 in 0..grid.n1() {
        for k2 in 0..grid.n2() {
            samples[k1 * p2 + k2] = f.value(k1, k2);
        }
    }
    let padded = QSignal2D::from_parts_unchecked(padded_grid, samples);
    let full = qft_forward_fast_with(&padded, PadPolicy::Reject)?;
    // crop the centered n1 x n2 block of the finer padded lattice
    let pf = *full.grid();
    let off1 = p1 / 2 - grid.n1() / 2;
    let off2 = p2 / 2 - grid.n2() / 2;
    let cropped_grid = Grid2D::new(
        grid.n1(),
        grid.n2(),
        pf.coord1(off1),
        pf.coord2(off2),
        pf.dx1(),
        pf.dx2(),
    )?;
    let mut out = Vec::with_capacity(grid.len());
    for k1 in 0..grid.n1() {
        for k2 in 0..grid.n2() {
            out.push(full.value(off1 + k1, off2 + k2));
        }
    }
    Ok(QSignal2D::from_parts_unchecked(cropped_grid, out))
}

fn ensure_paired(freq: &Grid2D, spatial: &Grid2D) -> Result<()> {
    if spatial.freq_grid().approx_eq(freq) {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "frequency grid was not derived from the given spatial grid".into(),
        ))
    }
}

/// Inverse transform: `(1/(2 pi)^2) sum_w e^{+i x1 w1} F(w) e^{+j x2 w2} dw1 dw2`.
pub fn qft_inverse_fast(spectrum: &QSignal2D, spatial: &Grid2D) -> Result<QSignal2D> {
    ensure_paired(spectrum.grid(), spatial)?;
    if !spatial.n1().is_power_of_two() || !spatial.n2().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(spatial.n1(), spatial.n2()));
    }
    let freq = *spectrum.grid();
    let (out1, out2) = spatial_axes(spatial);
    let (in1, in2) = freq_axes(&freq);
    let scale = freq.cell_area() / std::f64::consts::TAU.powi(2);
    let plan = TwoSidedPlan { sign1: 1, sign2: 1, in1, in2, out1, out2, scale };
    let values = two_sided_fft(spectrum.samples(), &plan)?;
    Ok(QSignal2D::from_parts_unchecked(*spatial, values))
}

/// Direct-sum inverse, mirror of [`qft_forward_naive`].
pub fn qft_inverse_naive(spectrum: &QSignal2D, spatial: &Grid2D) -> Result<QSignal2D> {
    ensure_paired(spectrum.grid(), spatial)?;
    let x1s: Vec<f64> = (0..spatial.n1()).map(|k| spatial.coord1(k)).collect();
    let x2s: Vec<f64> = (0..spatial.n2()).map(|k| spatial.coord2(k)).collect();
    let scale = spectrum.grid().cell_area() / std::f64::consts::TAU.powi(2);
    let values = two_sided_naive(spectrum, &x1s, &x2s, 1, scale);
    Ok(QSignal2D::from_parts_unchecked(*spatial, values))
}
