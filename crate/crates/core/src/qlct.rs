//! Two-sided quaternion linear canonical transform.
//!
//! Per axis the transform is parameterized by a real unimodular matrix
//! `A = [[a, b], [c, d]]`. For `b != 0` the kernel is
//!
//! ```text
//!   K_A(x, w) = (1/sqrt(2 pi |b|)) e^{mu (a/(2b) x^2 - x w / b + d/(2b) w^2 - pi/4)}
//! ```
//!
//! with `mu = i` on the left of the integrand and `mu = j` on the right. The
//! fast path factors this into pre-chirp, QFT at `w/b` and an outer chirp,
//! so [`qlct_forward`] costs one FFT pass; [`qlct_forward_direct`] keeps the
//! literal double Riemann sum as the oracle. `b = 0` selects the
//! chirp-scaling branch ([`qlct_degenerate`]).
//!
//! Kernel magnitudes use `|b|`; the sign of `b` stays in the exponent via
//! `x*w/b`, and the constant phase is `-pi/4` unchanged. `sqrt(2 pi b)` has no standard reading for negative `b`, so this
//! convention is recorded in every report that uses `b < 0`.

use crate::error::{Error, Result};
use crate::fft2::{two_sided_fft, AxisLattice, TwoSidedPlan};
use crate::grid::Grid2D;
use crate::quat::Quaternion;
use crate::signal::QSignal2D;
use serde::{Deserialize, Serialize};

const DET_TOL: f64 = 1e-12;
/// |b| below this is treated as exactly zero (degenerate branch).
const B_ZERO: f64 = 1e-300;

/// One axis' matrix parameter, validated to `det = ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LctParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl LctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnimodular { det });
        }
        let b = if b.abs() < B_ZERO { 0.0 } else { b };
        Ok(LctParams { a, b, c, d })
    }

    /// `[[1, 0], [0, 1]]`: the identity transform (degenerate branch).
    pub fn identity() -> Self {
        LctParams { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `[[0, 1], [-1, 0]]`: reduces the QLCT to the QFT up to constants.
    pub fn qft_matrix() -> Self {
        LctParams { a: 0.0, b: 1.0, c: -1.0, d: 0.0 }
    }

    /// The worked example's matrix with `a = 0, b = 1/4, d = 1`.
    ///
    /// As printed its lower-left entry is -1/4, which gives det 1/16; the
    /// unimodular completion forced by `ad - bc = 1` is `c = -4`. Entries
    /// a, b, d (the only ones the b != 0 kernels read) are unchanged.
    pub fn example_matrix() -> Self {
        LctParams { a: 0.0, b: 0.25, c: -4.0, d: 1.0 }
    }

    /// `[[1, 1], [0, 1]]`: a unimodular shear with b != 0.
    pub fn shear_matrix() -> Self {
        LctParams { a: 1.0, b: 1.0, c: 0.0, d: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Exactly `b = 0` selects the delta branch; no blending.
    pub fn is_degenerate(&self) -> bool {
        self.b == 0.0
    }

    fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateParams(format!("{self:?}")))
        } else {
            Ok(())
        }
    }
}

impl<'de> Deserialize<'de> for LctParams {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: f64,
            b: f64,
            c: f64,
            d: f64,
        }
        let r = Raw::deserialize(de)?;
        LctParams::new(r.a, r.b, r.c, r.d).map_err(serde::de::Error::custom)
    }
}

/// Kernel phase for `b != 0`.
fn kernel_phase(p: &LctParams, x: f64, w: f64) -> f64 {
    (p.a / (2.0 * p.b)) * x * x - x * w / p.b + (p.d / (2.0 * p.b)) * w * w
        - std::f64::consts::FRAC_PI_4
}

fn kernel_amp(p: &LctParams) -> f64 {
    1.0 / (std::f64::consts::TAU * p.b.abs()).sqrt()
}

/// Left kernel value; lies in span{1, i}.
pub fn lct_kernel_left(p: &LctParams, x1: f64, w1: f64) -> Result<Quaternion> {
    p.ensure_nondegenerate()?;
    let (s, c) = kernel_phase(p, x1, w1).sin_cos();
    let amp = kernel_amp(p);
    Ok(Quaternion::new(amp * c, amp * s, 0.0, 0.0))
}

/// Right kernel value; lies in span{1, j}.
pub fn lct_kernel_right(p: &LctParams, x2: f64, w2: f64) -> Result<Quaternion> {
    p.ensure_nondegenerate()?;
    let (s, c) = kernel_phase(p, x2, w2).sin_cos();
    let amp = kernel_amp(p);
    Ok(Quaternion::new(amp * c, 0.0, amp * s, 0.0))
}

/// Output lattice for one axis with `b != 0`: the QFT bin lattice scaled by
/// `b`, reordered ascending when `b < 0`.
fn scaled_axis(xi_min: f64, dxi: f64, n: usize, b: f64) -> (f64, f64) {
    if b > 0.0 {
        (b * xi_min, b * dxi)
    } else {
        (b * (xi_min + (n - 1) as f64 * dxi), b.abs() * dxi)
    }
}

/// The lattice [`qlct_forward`] writes to for a given spatial grid.
pub fn qlct_output_grid(spatial: &Grid2D, a1: &LctParams, a2: &LctParams) -> Result<Grid2D> {
    let xi = spatial.freq_grid();
    let axis1 = if a1.is_degenerate() {
        degenerate_axis(spatial.x1_min(), spatial.dx1(), spatial.n1(), a1.d)
    } else {
        scaled_axis(xi.x1_min(), xi.dx1(), xi.n1(), a1.b)
    };
    let axis2 = if a2.is_degenerate() {
        degenerate_axis(spatial.x2_min(), spatial.dx2(), spatial.n2(), a2.d)
    } else {
        scaled_axis(xi.x2_min(), xi.dx2(), xi.n2(), a2.b)
    };
    Grid2D::new(spatial.n1(), spatial.n2(), axis1.0, axis2.0, axis1.1, axis2.1)
}

/// Degenerate-axis output lattice `w = x/d`, ascending.
fn degenerate_axis(x_min: f64, dx: f64, n: usize, d: f64) -> (f64, f64) {
    if d > 0.0 {
        (x_min / d, dx / d)
    } else {
        ((x_min + (n - 1) as f64 * dx) / d, dx / d.abs())
    }
}

/// Index into the QFT bin lattice backing output index `m` (mirror for b < 0).
fn source_index(m: usize, n: usize, b: f64) -> usize {
    if b > 0.0 {
        m
    } else {
        n - 1 - m
    }
}

/// Fast forward QLCT: pre-chirp, QFT at `w/b`, outer chirp factors.
pub fn qlct_forward(f: &QSignal2D, a1: &LctParams, a2: &LctParams) -> Result<QSignal2D> {
    a1.ensure_nondegenerate()?;
    a2.ensure_nondegenerate()?;
    let grid = *f.grid();
    if !grid.n1().is_power_of_two() || !grid.n2().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(grid.n1(), grid.n2()));
    }
    let chirped = pre_chirp(f, a1, a2, 1.0)?;
    let xi = grid.freq_grid();
    let plan = TwoSidedPlan {
        sign1: -1,
        sign2: -1,
        in1: AxisLattice { min: grid.x1_min(), step: grid.dx1(), n: grid.n1() },
        in2: AxisLattice { min: grid.x2_min(), step: grid.dx2(), n: grid.n2() },
        out1: AxisLattice { min: xi.x1_min(), step: xi.dx1(), n: xi.n1() },
        out2: AxisLattice { min: xi.x2_min(), step: xi.dx2(), n: xi.n2() },
        scale: grid.cell_area(),
    };
    let qft = two_sided_fft(chirped.samples(), &plan)?;

    let out_grid = qlct_output_grid(&grid, a1, a2)?;
    let n1 = grid.n1();
    let n2 = grid.n2();
    let values = crate::par::map_indexed(n1, |m1| {
        let s1 = source_index(m1, n1, a1.b);
        let w1 = out_grid.coord1(m1);
        let (ls, lc) = outer_phase(a1, w1).sin_cos();
        let amp1 = kernel_amp(a1);
        let mut row = Vec::with_capacity(n2);
        for m2 in 0..n2 {
            let s2 = source_index(m2, n2, a2.b);
            let w2 = out_grid.coord2(m2);
            let (rs, rc) = outer_phase(a2, w2).sin_cos();
            let amp2 = kernel_amp(a2);
            let v = qft[s1 * n2 + s2]
                .left_mul_i(amp1 * lc, amp1 * ls)
                .right_mul_j(amp2 * rc, amp2 * rs);
            row.push(v);
        }
        row
    });
    Ok(QSignal2D::from_parts_unchecked(
        out_grid,
        values.into_iter().flatten().collect(),
    ))
}

/// Outer factor phase `d w^2 / (2b) - pi/4`.
fn outer_phase(p: &LctParams, w: f64) -> f64 {
    (p.d / (2.0 * p.b)) * w * w - std::f64::consts::FRAC_PI_4
}

/// Pointwise `e^{sign * i a1 x1^2/(2 b1)} f e^{sign * j a2 x2^2/(2 b2)}`.
fn pre_chirp(f: &QSignal2D, a1: &LctParams, a2: &LctParams, sign: f64) -> Result<QSignal2D> {
    let r1 = sign * a1.a / (2.0 * a1.b);
    let r2 = sign * a2.a / (2.0 * a2.b);
    f.map(|x1, x2, q| {
        let (s1, c1) = (r1 * x1 * x1).sin_cos();
        let (s2, c2) = (r2 * x2 * x2).sin_cos();
        q.left_mul_i(c1, s1).right_mul_j(c2, s2)
    })
}

/// Literal double Riemann sum on the same output lattice; the oracle path.
#[allow(clippy::needless_range_loop)] // indexed kernel tables in the oracle loops
pub fn qlct_forward_direct(f: &QSignal2D, a1: &LctParams, a2: &LctParams) -> Result<QSignal2D> {
    a1.ensure_nondegenerate()?;
    a2.ensure_nondegenerate()?;
    let grid = *f.grid();
    let out_grid = qlct_output_grid(&grid, a1, a2)?;
    let cell = grid.cell_area();
    let values = crate::par::map_indexed(out_grid.n1(), |m1| {
        let w1 = out_grid.coord1(m1);
        let left: Vec<Quaternion> = (0..grid.n1())
            .map(|k1| lct_kernel_left(a1, grid.coord1(k1), w1).expect("b != 0"))
            .collect();
        let mut row = Vec::with_capacity(out_grid.n2());
        for m2 in 0..out_grid.n2() {
            let w2 = out_grid.coord2(m2);
            let right: Vec<Quaternion> = (0..grid.n2())
                .map(|k2| lct_kernel_right(a2, grid.coord2(k2), w2).expect("b != 0"))
                .collect();
            let mut acc = Quaternion::ZERO;
            for k1 in 0..grid.n1() {
                for k2 in 0..grid.n2() {
                    acc += left[k1] * f.value(k1, k2) * right[k2];
                }
            }
            row.push(acc.scale(cell));
        }
        row
    });
    Ok(QSignal2D::from_parts_unchecked(
        out_grid,
        values.into_iter().flatten().collect(),
    ))
}

fn ensure_qlct_grids(
    spectrum: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    spatial: &Grid2D,
) -> Result<()> {
    let expect = qlct_output_grid(spatial, a1, a2)?;
    if expect.approx_eq(spectrum.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "spectrum grid was not produced from this spatial grid and matrix".into(),
        ))
    }
}

/// Fast inverse: strip outer factors, inverse QFT, de-chirp.
pub fn qlct_inverse(
    spectrum: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    spatial: &Grid2D,
) -> Result<QSignal2D> {
    a1.ensure_nondegenerate()?;
    a2.ensure_nondegenerate()?;
    ensure_qlct_grids(spectrum, a1, a2, spatial)?;
    if !spatial.n1().is_power_of_two() || !spatial.n2().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(spatial.n1(), spatial.n2()));
    }
    let out_grid = *spectrum.grid();
    let n1 = out_grid.n1();
    let n2 = out_grid.n2();

    // peel the outer factors and un-mirror back onto the QFT bin lattice
    let inv1 = std::f64::consts::TAU * a1.b.abs();
    let inv2 = std::f64::consts::TAU * a2.b.abs();
    let mut qft_vals = vec![Quaternion::ZERO; n1 * n2];
    for m1 in 0..n1 {
        let s1 = source_index(m1, n1, a1.b);
        let w1 = out_grid.coord1(m1);
        let (ls, lc) = outer_phase(a1, w1).sin_cos();
        let amp1 = kernel_amp(a1) * inv1; // conjugate factor rescaled to unit modulus
        for m2 in 0..n2 {
            let s2 = source_index(m2, n2, a2.b);
            let w2 = out_grid.coord2(m2);
            let (rs, rc) = outer_phase(a2, w2).sin_cos();
            let amp2 = kernel_amp(a2) * inv2;
            qft_vals[s1 * n2 + s2] = spectrum
                .value(m1, m2)
                .left_mul_i(amp1 * lc, -(amp1 * ls))
                .right_mul_j(amp2 * rc, -(amp2 * rs));
        }
    }

    let xi = spatial.freq_grid();
    let plan = TwoSidedPlan {
        sign1: 1,
        sign2: 1,
        in1: AxisLattice { min: xi.x1_min(), step: xi.dx1(), n: xi.n1() },
        in2: AxisLattice { min: xi.x2_min(), step: xi.dx2(), n: xi.n2() },
        out1: AxisLattice { min: spatial.x1_min(), step: spatial.dx1(), n: spatial.n1() },
        out2: AxisLattice { min: spatial.x2_min(), step: spatial.dx2(), n: spatial.n2() },
        scale: xi.cell_area() / std::f64::consts::TAU.powi(2),
    };
    let h = two_sided_fft(&qft_vals, &plan)?;
    let h_sig = QSignal2D::from_parts_unchecked(*spatial, h);
    pre_chirp(&h_sig, a1, a2, -1.0)
}

/// Direct-sum inverse with the conjugated kernels, mirror of the forward oracle.
#[allow(clippy::needless_range_loop)] // indexed kernel tables in the oracle loops
pub fn qlct_inverse_direct(
    spectrum: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    spatial: &Grid2D,
) -> Result<QSignal2D> {
    a1.ensure_nondegenerate()?;
    a2.ensure_nondegenerate()?;
    ensure_qlct_grids(spectrum, a1, a2, spatial)?;
    let wg = *spectrum.grid();
    let cell = wg.cell_area();
    let values = crate::par::map_indexed(spatial.n1(), |k1| {
        let x1 = spatial.coord1(k1);
        let left: Vec<Quaternion> = (0..wg.n1())
            .map(|m1| lct_kernel_left(a1, x1, wg.coord1(m1)).expect("b != 0").conj())
            .collect();
        let mut row = Vec::with_capacity(spatial.n2());
        for k2 in 0..spatial.n2() {
            let x2 = spatial.coord2(k2);
            let right: Vec<Quaternion> = (0..wg.n2())
                .map(|m2| lct_kernel_right(a2, x2, wg.coord2(m2)).expect("b != 0").conj())
                .collect();
            let mut acc = Quaternion::ZERO;
            for m1 in 0..wg.n1() {
                for m2 in 0..wg.n2() {
                    acc += left[m1] * spectrum.value(m1, m2) * right[m2];
                }
            }
            row.push(acc.scale(cell));
        }
        row
    });
    Ok(QSignal2D::from_parts_unchecked(
        *spatial,
        values.into_iter().flatten().collect(),
    ))
}

/// Chirp-scaling branch for matrices with `b = 0` on one or both axes.
///
/// On a degenerate axis the output lattice is `w = x/d`, so the delta picks
/// exact lattice samples; a non-degenerate axis keeps its `b != 0` kernel and
/// is summed directly.
pub fn qlct_degenerate(f: &QSignal2D, a1: &LctParams, a2: &LctParams) -> Result<QSignal2D> {
    if !a1.is_degenerate() && !a2.is_degenerate() {
        return Err(Error::InvalidArgument(
            "qlct_degenerate requires b = 0 on at least one axis".into(),
        ));
    }
    let out_grid = qlct_output_grid(f.grid(), a1, a2)?;
    qlct_degenerate_on(f, a1, a2, &out_grid, true)
}

/// Degenerate transform onto an explicit output grid. With `strict` the delta
/// must land exactly on the input lattice; otherwise the nearest sample is
/// used.
pub fn qlct_degenerate_on(
    f: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    out_grid: &Grid2D,
    strict: bool,
) -> Result<QSignal2D> {
    if !a1.is_degenerate() && !a2.is_degenerate() {
        return Err(Error::InvalidArgument(
            "qlct_degenerate requires b = 0 on at least one axis".into(),
        ));
    }
    let grid = *f.grid();
    let mut values = Vec::with_capacity(out_grid.len());
    for m1 in 0..out_grid.n1() {
        let w1 = out_grid.coord1(m1);
        for m2 in 0..out_grid.n2() {
            let w2 = out_grid.coord2(m2);
            let v = match (a1.is_degenerate(), a2.is_degenerate()) {
                (true, true) => {
                    let k1 = pick_index(&grid, Axis::One, a1.d * w1, strict)?;
                    let k2 = pick_index(&grid, Axis::Two, a2.d * w2, strict)?;
                    let q = f.value(k1, k2).scale((a1.d.abs() * a2.d.abs()).sqrt());
                    chirp_left(a1, w1, chirp_right(a2, w2, q))
                }
                (true, false) => {
                    let k1 = pick_index(&grid, Axis::One, a1.d * w1, strict)?;
                    let mut acc = Quaternion::ZERO;
                    for k2 in 0..grid.n2() {
                        let kr = lct_kernel_right(a2, grid.coord2(k2), w2)?;
                        acc += f.value(k1, k2) * kr;
                    }
                    chirp_left(a1, w1, acc.scale(a1.d.abs().sqrt() * grid.dx2()))
                }
                (false, true) => {
                    let k2 = pick_index(&grid, Axis::Two, a2.d * w2, strict)?;
                    let mut acc = Quaternion::ZERO;
                    for k1 in 0..grid.n1() {
                        let kl = lct_kernel_left(a1, grid.coord1(k1), w1)?;
                        acc += kl * f.value(k1, k2);
                    }
                    chirp_right(a2, w2, acc.scale(a2.d.abs().sqrt() * grid.dx1()))
                }
                (false, false) => unreachable!(),
            };
            values.push(v);
        }
    }
    Ok(QSignal2D::from_parts_unchecked(*out_grid, values))
}

enum Axis {
    One,
    Two,
}

fn pick_index(grid: &Grid2D, axis: Axis, x: f64, strict: bool) -> Result<usize> {
    let (min, dx, n, name) = match axis {
        Axis::One => (grid.x1_min(), grid.dx1(), grid.n1(), "axis 1"),
        Axis::Two => (grid.x2_min(), grid.dx2(), grid.n2(), "axis 2"),
    };
    let r = (x - min) / dx;
    let k = r.round();
    if strict && (r - k).abs() > crate::grid::LATTICE_TOL * (1.0 + r.abs()) {
        return Err(Error::OffLattice(format!(
            "{name}: d*w = {x} does not hit the input lattice"
        )));
    }
    let k = (k as i64).clamp(0, n as i64 - 1);
    Ok(k as usize)
}

/// Left degenerate chirp `e^{i c d w^2 / 2}` (the sqrt(d) scale is applied by
/// the caller).
fn chirp_left(p: &LctParams, w: f64, q: Quaternion) -> Quaternion {
    let (s, c) = (0.5 * p.c * p.d * w * w).sin_cos();
    q.left_mul_i(c, s)
}

fn chirp_right(p: &LctParams, w: f64, q: Quaternion) -> Quaternion {
    let (s, c) = (0.5 * p.c * p.d * w * w).sin_cos();
    q.right_mul_j(c, s)
}
