//! Windowed quaternion linear canonical transform.
//!
//! For a window `phi` and shift `u` the modified signal is
//! `f_u(x) = f(x) * conj(phi(x - u))`; the field value at `(w, u)` is the
//! QLCT of `f_u` at `w`. Shifts live on their own (typically coarser) lattice
//! that must be aligned to the signal lattice so window shifts are exact
//! sample shifts.
//!
//! The field is stored u-major: each u-slice is a contiguous w-plane, so the
//! per-shift fast QLCT writes contiguously and slices parallelize cleanly.
//! Slices are computed independently and assembled in index order; results
//! do not depend on the worker count.

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::qlct::{qlct_forward, qlct_inverse, qlct_output_grid, LctParams};
use crate::quat::Quaternion;
use crate::reduce::pairwise_sum_by;
use crate::signal::{self, norm_sq, QSignal2D};
use std::io::{Read, Write};
use std::path::Path;

/// 4D array of quaternions indexed by (frequency w, shift u), with the
/// parameters that produced it.
#[derive(Clone, Debug)]
pub struct QwlctField {
    w_grid: Grid2D,
    u_grid: Grid2D,
    a1: LctParams,
    a2: LctParams,
    window_id: String,
    /// (u1, u2, w1, w2) order.
    values: Vec<Quaternion>,
}

impl QwlctField {
    pub fn w_grid(&self) -> &Grid2D {
        &self.w_grid
    }
    pub fn u_grid(&self) -> &Grid2D {
        &self.u_grid
    }
    pub fn params(&self) -> (&LctParams, &LctParams) {
        (&self.a1, &self.a2)
    }
    pub fn window_id(&self) -> &str {
        &self.window_id
    }
    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 4D cell measure `dw1 dw2 du1 du2`.
    pub fn cell_measure(&self) -> f64 {
        self.w_grid.cell_area() * self.u_grid.cell_area()
    }

    pub fn index(&self, kw1: usize, kw2: usize, ku1: usize, ku2: usize) -> usize {
        ((ku1 * self.u_grid.n2() + ku2) * self.w_grid.n1() + kw1) * self.w_grid.n2() + kw2
    }

    pub fn value(&self, kw1: usize, kw2: usize, ku1: usize, ku2: usize) -> Quaternion {
        self.values[self.index(kw1, kw2, ku1, ku2)]
    }

    /// The w-plane at one shift index, as a signal on the w lattice.
    pub fn slice(&self, ku1: usize, ku2: usize) -> QSignal2D {
        let plane = self.w_grid.len();
        let start = (ku1 * self.u_grid.n2() + ku2) * plane;
        QSignal2D::from_parts_unchecked(
            self.w_grid,
            self.values[start..start + plane].to_vec(),
        )
    }

    /// Riemann energy `sum |G|^2 * cell`.
    pub fn energy(&self) -> f64 {
        pairwise_sum_by(self.values.len(), &|k| self.values[k].norm_sq()) * self.cell_measure()
    }

    /// `L^s` norm of the field over all four coordinates.
    pub fn lp_norm(&self, s: f64) -> Result<f64> {
        if !(s >= 1.0) {
            return Err(Error::InvalidArgument(format!("need s >= 1, got {s}")));
        }
        let total = pairwise_sum_by(self.values.len(), &|k| self.values[k].norm().powf(s));
        Ok((total * self.cell_measure()).powf(1.0 / s))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn from_parts(
        w_grid: Grid2D,
        u_grid: Grid2D,
        a1: LctParams,
        a2: LctParams,
        window_id: String,
        values: Vec<Quaternion>,
    ) -> Self {
        debug_assert_eq!(values.len(), w_grid.len() * u_grid.len());
        QwlctField { w_grid, u_grid, a1, a2, window_id, values }
    }
}

/// `f_u(x) = f(x) * conj(phi(x - u))` for a lattice-aligned shift `u`.
pub fn modified_signal(f: &QSignal2D, phi: &QSignal2D, u: (f64, f64)) -> Result<QSignal2D> {
    f.grid().ensure_matches(phi.grid())?;
    let shifted = signal::translate(phi, u)?;
    let samples = f
        .samples()
        .iter()
        .zip(shifted.samples())
        .map(|(&a, &b)| a * b.conj())
        .collect();
    Ok(QSignal2D::from_parts_unchecked(*f.grid(), samples))
}

/// Shift lattice must sit on the signal lattice: spacings are whole numbers
/// of signal cells and the origin offset is too.
pub fn validate_shift_grid(signal_grid: &Grid2D, shift: &Grid2D) -> Result<()> {
    for (du, dx, umin, xname) in [
        (shift.dx1(), signal_grid.dx1(), shift.x1_min(), "axis 1"),
        (shift.dx2(), signal_grid.dx2(), shift.x2_min(), "axis 2"),
    ] {
        let stride = du / dx;
        if (stride - stride.round()).abs() > crate::grid::LATTICE_TOL * stride.abs()
            || stride.round() < 1.0
        {
            return Err(Error::OffLattice(format!(
                "{xname}: shift spacing {du} is not a positive multiple of dx = {dx}"
            )));
        }
        let off = umin / dx;
        if (off - off.round()).abs() > crate::grid::LATTICE_TOL * (1.0 + off.abs()) {
            return Err(Error::OffLattice(format!(
                "{xname}: shift origin {umin} is off the signal lattice"
            )));
        }
    }
    Ok(())
}

/// Forward windowed transform over every shift of `shift_grid`.
pub fn qwlct_forward(
    f: &QSignal2D,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &Grid2D,
) -> Result<QwlctField> {
    qwlct_forward_named(f, phi, a1, a2, shift_grid, "custom")
}

pub fn qwlct_forward_named(
    f: &QSignal2D,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &Grid2D,
    window_id: &str,
) -> Result<QwlctField> {
    f.grid().ensure_matches(phi.grid())?;
    validate_shift_grid(f.grid(), shift_grid)?;
    if norm_sq(phi) == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let w_grid = qlct_output_grid(f.grid(), a1, a2)?;
    let planes = crate::par::map_indexed(shift_grid.len(), |ku| {
        let (ku1, ku2) = shift_grid.unindex(ku);
        let u = (shift_grid.coord1(ku1), shift_grid.coord2(ku2));
        let fu = modified_signal(f, phi, u).expect("aligned shift");
        let slice = qlct_forward(&fu, a1, a2).expect("validated parameters");
        slice.samples().to_vec()
    });
    Ok(QwlctField::from_parts(
        w_grid,
        *shift_grid,
        *a1,
        *a2,
        window_id.to_string(),
        planes.into_iter().flatten().collect(),
    ))
}

/// Inversion: `f(x) = (1/||phi||^2) sum_u [QLCT^{-1} G(., u)](x) phi(x - u) du`.
///
/// The u-sum accumulates through a fixed midpoint tree so parallel and
/// sequential builds agree bitwise.
pub fn qwlct_inverse(
    field: &QwlctField,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    spatial: &Grid2D,
) -> Result<QSignal2D> {
    let wnorm = norm_sq(phi);
    if wnorm == 0.0 {
        return Err(Error::ZeroWindow);
    }
    phi.grid().ensure_matches(spatial)?;
    validate_shift_grid(spatial, field.u_grid())?;

    let du_cell = field.u_grid().cell_area();
    let total = accumulate_slices(field, phi, a1, a2, spatial, 0, field.u_grid().len())?;
    let scale = du_cell / wnorm;
    Ok(QSignal2D::from_parts_unchecked(
        *spatial,
        total.into_iter().map(|q| q.scale(scale)).collect(),
    ))
}

/// Fixed-split recursive accumulation of per-shift contributions.
fn accumulate_slices(
    field: &QwlctField,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    spatial: &Grid2D,
    lo: usize,
    hi: usize,
) -> Result<Vec<Quaternion>> {
    if hi - lo == 1 {
        let (ku1, ku2) = field.u_grid().unindex(lo);
        let u = (field.u_grid().coord1(ku1), field.u_grid().coord2(ku2));
        let slice = field.slice(ku1, ku2);
        let fu = qlct_inverse(&slice, a1, a2, spatial)?;
        let phi_u = signal::translate(phi, u)?;
        return Ok(fu
            .samples()
            .iter()
            .zip(phi_u.samples())
            .map(|(&a, &b)| a * b)
            .collect());
    }
    let mid = lo + (hi - lo) / 2;
    #[cfg(feature = "parallel")]
    let (a, b) = rayon::join(
        || accumulate_slices(field, phi, a1, a2, spatial, lo, mid),
        || accumulate_slices(field, phi, a1, a2, spatial, mid, hi),
    );
    #[cfg(not(feature = "parallel"))]
    let (a, b) = (
        accumulate_slices(field, phi, a1, a2, spatial, lo, mid),
        accumulate_slices(field, phi, a1, a2, spatial, mid, hi),
    );
    let (mut a, b) = (a?, b?);
    for (x, y) in a.iter_mut().zip(&b) {
        *x += *y;
    }
    Ok(a)
}

/// Field energy; the left side of the Parseval identity.
pub fn field_energy(field: &QwlctField) -> f64 {
    field.energy()
}

/// Outcome of evaluating both sides of a covariance identity on the lattice.
#[derive(Clone, Copy, Debug)]
pub struct CovarianceDeviation {
    /// Largest deviation between the two sides over the compared cells.
    pub max_deviation: f64,
    /// Largest field magnitude, for relative thresholds.
    pub max_abs: f64,
    /// Number of (w, u) cells where both sides were defined.
    pub compared: usize,
}

/// Shift covariance: the field of `T_r f` against the phase-twisted field of
/// `f` evaluated at `(w - a r, u - r)`.
pub fn shift_covariance(
    f: &QSignal2D,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &Grid2D,
    r: (f64, f64),
) -> Result<CovarianceDeviation> {
    let base = qwlct_forward(f, phi, a1, a2, shift_grid)?;
    let shifted = qwlct_forward(&signal::translate(f, r)?, phi, a1, a2, shift_grid)?;

    let dw = (base.w_grid().dx1(), base.w_grid().dx2());
    let off_w = (
        lattice_steps(a1.a() * r.0, dw.0, "a1*r1 vs dw1")?,
        lattice_steps(a2.a() * r.1, dw.1, "a2*r2 vs dw2")?,
    );
    let off_u = (
        lattice_steps(r.0, base.u_grid().dx1(), "r1 vs du1")?,
        lattice_steps(r.1, base.u_grid().dx2(), "r2 vs du2")?,
    );

    let phases = |w1: f64, w2: f64| {
        let th_l = r.0 * w1 * a1.c() - a1.a() * r.0 * r.0 * a1.c() / 2.0;
        let th_r = r.1 * w2 * a2.c() - a2.a() * r.1 * r.1 * a2.c() / 2.0;
        (th_l, th_r)
    };
    compare_offset(&shifted, &base, off_w, off_u, phases)
}

/// Modulation covariance: the field of `M_s f` against the phase-twisted
/// field of `f` at `(w - s b, u)`.
pub fn modulation_covariance(
    f: &QSignal2D,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &Grid2D,
    s: (f64, f64),
) -> Result<CovarianceDeviation> {
    let base = qwlct_forward(f, phi, a1, a2, shift_grid)?;
    let modulated = qwlct_forward(&signal::modulate(f, s)?, phi, a1, a2, shift_grid)?;

    let dw = (base.w_grid().dx1(), base.w_grid().dx2());
    let off_w = (
        lattice_steps(s.0 * a1.b(), dw.0, "s1*b1 vs dw1")?,
        lattice_steps(s.1 * a2.b(), dw.1, "s2*b2 vs dw2")?,
    );
    let phases = |w1: f64, w2: f64| {
        let th_l = w1 * s.0 * a1.d() - a1.b() * a1.d() * s.0 * s.0 / 2.0;
        let th_r = w2 * s.1 * a2.d() - a2.b() * a2.d() * s.1 * s.1 / 2.0;
        (th_l, th_r)
    };
    compare_offset(&modulated, &base, off_w, (0, 0), phases)
}

fn lattice_steps(x: f64, step: f64, what: &str) -> Result<i64> {
    let r = x / step;
    let k = r.round();
    if (r - k).abs() > 1e-6 * (1.0 + r.abs()) {
        return Err(Error::OffLattice(format!(
            "{what}: offset {x} is not a lattice multiple of {step}"
        )));
    }
    Ok(k as i64)
}

/// Compare `lhs(w, u)` against `phase_l * rhs(w - off_w, u - off_u) * phase_r`
/// over every index pair where both sides exist.
fn compare_offset<F: Fn(f64, f64) -> (f64, f64)>(
    lhs: &QwlctField,
    rhs: &QwlctField,
    off_w: (i64, i64),
    off_u: (i64, i64),
    phases: F,
) -> Result<CovarianceDeviation> {
    let wg = *lhs.w_grid();
    let ug = *lhs.u_grid();
    let mut max_dev = 0.0f64;
    let mut compared = 0usize;
    for ku1 in 0..ug.n1() {
        let su1 = ku1 as i64 - off_u.0;
        if su1 < 0 || su1 >= ug.n1() as i64 {
            continue;
        }
        for ku2 in 0..ug.n2() {
            let su2 = ku2 as i64 - off_u.1;
            if su2 < 0 || su2 >= ug.n2() as i64 {
                continue;
            }
            for kw1 in 0..wg.n1() {
                let sw1 = kw1 as i64 - off_w.0;
                if sw1 < 0 || sw1 >= wg.n1() as i64 {
                    continue;
                }
                let w1 = wg.coord1(kw1);
                for kw2 in 0..wg.n2() {
                    let sw2 = kw2 as i64 - off_w.1;
                    if sw2 < 0 || sw2 >= wg.n2() as i64 {
                        continue;
                    }
                    let w2 = wg.coord2(kw2);
                    let (th_l, th_r) = phases(w1, w2);
                    let (sl, cl) = th_l.sin_cos();
                    let (sr, cr) = th_r.sin_cos();
                    let rhs_v = rhs
                        .value(sw1 as usize, sw2 as usize, su1 as usize, su2 as usize)
                        .left_mul_i(cl, sl)
                        .right_mul_j(cr, sr);
                    let lhs_v = lhs.value(kw1, kw2, ku1, ku2);
                    max_dev = max_dev.max((lhs_v - rhs_v).norm());
                    compared += 1;
                }
            }
        }
    }
    if compared == 0 {
        return Err(Error::InvalidArgument(
            "no overlapping lattice cells to compare".into(),
        ));
    }
    Ok(CovarianceDeviation { max_deviation: max_dev, max_abs: rhs.max_abs(), compared })
}

/// Parity: the field of reflected inputs against the reflected field,
/// compared wherever `(-w, -u)` lands back on the lattices.
pub fn parity_deviation(
    f: &QSignal2D,
    phi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &Grid2D,
) -> Result<CovarianceDeviation> {
    let base = qwlct_forward(f, phi, a1, a2, shift_grid)?;
    let reflected = qwlct_forward(
        &signal::reflect(f)?,
        &signal::reflect(phi)?,
        a1,
        a2,
        shift_grid,
    )?;
    let wg = *base.w_grid();
    let ug = *base.u_grid();
    let mut max_dev = 0.0f64;
    let mut compared = 0usize;
    for ku1 in 0..ug.n1() {
        let mu1 = match ug.lattice_index1(-ug.coord1(ku1)) {
            Some(m) => m,
            None => continue,
        };
        for ku2 in 0..ug.n2() {
            let mu2 = match ug.lattice_index2(-ug.coord2(ku2)) {
                Some(m) => m,
                None => continue,
            };
            for kw1 in 0..wg.n1() {
                let mw1 = match wg.lattice_index1(-wg.coord1(kw1)) {
                    Some(m) => m,
                    None => continue,
                };
                for kw2 in 0..wg.n2() {
                    let mw2 = match wg.lattice_index2(-wg.coord2(kw2)) {
                        Some(m) => m,
                        None => continue,
                    };
                    let lhs = reflected.value(kw1, kw2, ku1, ku2);
                    let rhs = base.value(mw1, mw2, mu1, mu2);
                    max_dev = max_dev.max((lhs - rhs).norm());
                    compared += 1;
                }
            }
        }
    }
    if compared == 0 {
        return Err(Error::InvalidArgument(
            "parity check needs origin-centered grids".into(),
        ));
    }
    Ok(CovarianceDeviation { max_deviation: max_dev, max_abs: base.max_abs(), compared })
}

const QWF4_MAGIC: [u8; 4] = *b"QWF4";
const QWF4_VERSION: u32 = 1;

/// QWF4 binary format: magic, version, four u32 extents (n_w1, n_w2, n_u1,
/// n_u2), eight f64 lattice fields (w1_min, dw1, w2_min, dw2, u1_min, du1,
/// u2_min, du2), then quaternion values interleaved in (u1, u2, w1, w2) order.
pub fn write_qwf4<W: Write>(field: &QwlctField, mut w: W) -> Result<()> {
    w.write_all(&QWF4_MAGIC)?;
    w.write_all(&QWF4_VERSION.to_le_bytes())?;
    for n in [
        field.w_grid.n1(),
        field.w_grid.n2(),
        field.u_grid.n1(),
        field.u_grid.n2(),
    ] {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    for v in [
        field.w_grid.x1_min(),
        field.w_grid.dx1(),
        field.w_grid.x2_min(),
        field.w_grid.dx2(),
        field.u_grid.x1_min(),
        field.u_grid.dx1(),
        field.u_grid.x2_min(),
        field.u_grid.dx2(),
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    for q in &field.values {
        for c in [q.q0, q.q1, q.q2, q.q3] {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read a QWF4 field. Matrix/window provenance is not part of the format;
/// the caller supplies it (defaults keep the field usable for energy and
/// spectrogram work).
pub fn read_qwf4<R: Read>(mut r: R) -> Result<QwlctField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Truncated("while reading magic".into()))?;
    if magic != QWF4_MAGIC {
        return Err(Error::BadMagic { expected: QWF4_MAGIC, found: magic });
    }
    let mut u32buf = [0u8; 4];
    let mut next_u32 = |what: &str| -> Result<u32> {
        r.read_exact(&mut u32buf)
            .map_err(|_| Error::Truncated(format!("while reading {what}")))?;
        Ok(u32::from_le_bytes(u32buf))
    };
    let version = next_u32("version")?;
    if version != QWF4_VERSION {
        return Err(Error::BadVersion(version));
    }
    let nw1 = next_u32("n_w1")? as usize;
    let nw2 = next_u32("n_w2")? as usize;
    let nu1 = next_u32("n_u1")? as usize;
    let nu2 = next_u32("n_u2")? as usize;
    let mut f64buf = [0u8; 8];
    let mut next_f64 = |what: &str| -> Result<f64> {
        r.read_exact(&mut f64buf)
            .map_err(|_| Error::Truncated(format!("while reading {what}")))?;
        Ok(f64::from_le_bytes(f64buf))
    };
    let w1_min = next_f64("w1_min")?;
    let dw1 = next_f64("dw1")?;
    let w2_min = next_f64("w2_min")?;
    let dw2 = next_f64("dw2")?;
    let u1_min = next_f64("u1_min")?;
    let du1 = next_f64("du1")?;
    let u2_min = next_f64("u2_min")?;
    let du2 = next_f64("du2")?;
    let w_grid = Grid2D::new(nw1, nw2, w1_min, w2_min, dw1, dw2)?;
    let u_grid = Grid2D::new(nu1, nu2, u1_min, u2_min, du1, du2)?;
    let count = w_grid.len() * u_grid.len();
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        let mut comp = [0.0f64; 4];
        for c in comp.iter_mut() {
            *c = next_f64("value")?;
        }
        let q = Quaternion::new(comp[0], comp[1], comp[2], comp[3]);
        if !q.is_finite() {
            return Err(Error::NonFinite(k));
        }
        values.push(q);
    }
    Ok(QwlctField::from_parts(
        w_grid,
        u_grid,
        LctParams::qft_matrix(),
        LctParams::qft_matrix(),
        "from-file".into(),
        values,
    ))
}

pub fn write_qwf4_file<P: AsRef<Path>>(field: &QwlctField, path: P) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_qwf4(field, std::io::BufWriter::new(file))
}

pub fn read_qwf4_file<P: AsRef<Path>>(path: P) -> Result<QwlctField> {
    let file = std::fs::File::open(path)?;
    read_qwf4(std::io::BufReader::new(file))
}

/// CSV of `|G|^2` over the w-plane at one shift index.
pub fn spectrogram_u_slice<W: Write>(field: &QwlctField, ku1: usize, ku2: usize, mut w: W) -> Result<()> {
    writeln!(w, "w1,w2,g2")?;
    let wg = field.w_grid();
    for kw1 in 0..wg.n1() {
        for kw2 in 0..wg.n2() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                wg.coord1(kw1),
                wg.coord2(kw2),
                field.value(kw1, kw2, ku1, ku2).norm_sq()
            )?;
        }
    }
    Ok(())
}

/// CSV of `|G|^2` over the u-plane at one frequency index.
pub fn spectrogram_w_slice<W: Write>(field: &QwlctField, kw1: usize, kw2: usize, mut w: W) -> Result<()> {
    writeln!(w, "u1,u2,g2")?;
    let ug = field.u_grid();
    for ku1 in 0..ug.n1() {
        for ku2 in 0..ug.n2() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                ug.coord1(ku1),
                ug.coord2(ku2),
                field.value(kw1, kw2, ku1, ku2).norm_sq()
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qft::qft_forward_fast;
    use crate::qlct::qlct_forward_direct;
    use crate::signal::lp_norm;
    use crate::testutil::rand_signal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example_pair(n: usize, half: f64, beta: f64) -> (QSignal2D, QSignal2D) {
        let g = Grid2D::centered_span(n, half).unwrap();
        (
            signal::example_gaussian(g, beta, 0.0, 0.0).unwrap(),
            signal::example_window(g, beta, 0.0, 0.0).unwrap(),
        )
    }

    fn shift_grid_of(signal_grid: &Grid2D, stride: usize, count: usize) -> Grid2D {
        let du = stride as f64 * signal_grid.dx1();
        Grid2D::centered(count, du).unwrap()
    }

    #[test]
    fn modified_signal_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = Grid2D::centered(16, 0.25).unwrap();
        let f = rand_signal(&mut rng, g, 1.0);

        // phi = 1 leaves f unchanged at u = 0
        let ones = QSignal2D::from_fn(g, |_, _| Quaternion::ONE).unwrap();
        let fu = modified_signal(&f, &ones, (0.0, 0.0)).unwrap();
        assert_eq!(fu.samples(), f.samples());

        // u = 0, phi = f: result is |f|^2, real
        let ff = modified_signal(&f, &f, (0.0, 0.0)).unwrap();
        for (q, orig) in ff.samples().iter().zip(f.samples()) {
            assert!((q.q0 - orig.norm_sq()).abs() < 1e-12);
            assert!(q.q1.abs() < 1e-13 && q.q2.abs() < 1e-13 && q.q3.abs() < 1e-13);
        }

        // ||f_u||_2 <= ||f||_inf ||phi||_2
        let phi = rand_signal(&mut rng, g, 1.0);
        for u in [(0.0, 0.0), (0.25, -0.5), (1.0, 0.75)] {
            let fu = modified_signal(&f, &phi, u).unwrap();
            let bound = lp_norm(&f, f64::INFINITY).unwrap() * lp_norm(&phi, 2.0).unwrap();
            assert!(lp_norm(&fu, 2.0).unwrap() <= bound + 1e-12);
        }

        assert!(modified_signal(&f, &phi, (0.1, 0.0)).is_err());
    }

    #[test]
    fn forward_matches_compositional_and_factored_paths() {
        let (f, phi) = example_pair(16, 1.0, 1.0 / 4.0);
        let a1 = LctParams::example_matrix();
        let a2 = LctParams::shear_matrix();
        let ug = shift_grid_of(f.grid(), 4, 4);
        let field = qwlct_forward(&f, &phi, &a1, &a2, &ug).unwrap();

        for (ku1, ku2) in [(0, 0), (1, 3), (2, 2)] {
            let u = (ug.coord1(ku1), ug.coord2(ku2));
            let fu = modified_signal(&f, &phi, u).unwrap();
            // compositional route through the direct-sum oracle
            let direct = qlct_forward_direct(&fu, &a1, &a2).unwrap();
            let slice = field.slice(ku1, ku2);
            let dev = slice
                .samples()
                .iter()
                .zip(direct.samples())
                .map(|(a, b)| (*a - *b).norm())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-9, "direct-sum dev {dev}");

            // factored route: outer factors times the QFT of the pre-chirped
            // modified signal at w/b
            let chirped = fu
                .map(|x1, x2, q| {
                    let (s1, c1) = (a1.a() / (2.0 * a1.b()) * x1 * x1).sin_cos();
                    let (s2, c2) = (a2.a() / (2.0 * a2.b()) * x2 * x2).sin_cos();
                    q.left_mul_i(c1, s1).right_mul_j(c2, s2)
                })
                .unwrap();
            let qft = qft_forward_fast(&chirped).unwrap();
            let wg = slice.grid();
            let amp1 = 1.0 / (std::f64::consts::TAU * a1.b().abs()).sqrt();
            let amp2 = 1.0 / (std::f64::consts::TAU * a2.b().abs()).sqrt();
            let mut dev18 = 0.0f64;
            for m1 in 0..wg.n1() {
                let w1 = wg.coord1(m1);
                let (ls, lc) =
                    (a1.d() / (2.0 * a1.b()) * w1 * w1 - std::f64::consts::FRAC_PI_4).sin_cos();
                for m2 in 0..wg.n2() {
                    let w2 = wg.coord2(m2);
                    let (rs, rc) = (a2.d() / (2.0 * a2.b()) * w2 * w2
                        - std::f64::consts::FRAC_PI_4)
                        .sin_cos();
                    // both matrices here have b > 0, so w/b indexes directly
                    let v = qft
                        .value(m1, m2)
                        .left_mul_i(amp1 * lc, amp1 * ls)
                        .right_mul_j(amp2 * rc, amp2 * rs);
                    dev18 = dev18.max((slice.value(m1, m2) - v).norm());
                }
            }
            assert!(dev18 <= 1e-10, "factored-route dev {dev18}");
        }
    }

    #[test]
    fn boundedness_is_discrete_cauchy_schwarz() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Grid2D::centered(16, 0.25).unwrap();
        let ug = shift_grid_of(&g, 4, 4);
        for (a1, a2) in [
            (LctParams::example_matrix(), LctParams::example_matrix()),
            (LctParams::qft_matrix(), LctParams::shear_matrix()),
        ] {
            for _ in 0..3 {
                let f = rand_signal(&mut rng, g, 1.0);
                let phi = rand_signal(&mut rng, g, 1.0);
                let field = qwlct_forward(&f, &phi, &a1, &a2, &ug).unwrap();
                let bound = lp_norm(&f, 2.0).unwrap() * lp_norm(&phi, 2.0).unwrap()
                    / (std::f64::consts::TAU * (a1.b() * a2.b()).abs().sqrt());
                assert!(field.max_abs() <= bound + 1e-9);
            }
        }
    }

    #[test]
    fn linearity_in_the_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Grid2D::centered(8, 0.5).unwrap();
        let ug = shift_grid_of(&g, 2, 4);
        let a = LctParams::qft_matrix();
        let f = rand_signal(&mut rng, g, 1.0);
        let h = rand_signal(&mut rng, g, 1.0);
        let phi = signal::isotropic_gaussian(g, 0.8).unwrap();
        let (lam, mu) = (0.6, -1.7);
        let combo = f.scale(lam).unwrap().add(&h.scale(mu).unwrap()).unwrap();
        let lhs = qwlct_forward(&combo, &phi, &a, &a, &ug).unwrap();
        let ff = qwlct_forward(&f, &phi, &a, &a, &ug).unwrap();
        let hh = qwlct_forward(&h, &phi, &a, &a, &ug).unwrap();
        let mut dev = 0.0f64;
        for (k, v) in lhs.values().iter().enumerate() {
            let rhs = ff.values()[k].scale(lam) + hh.values()[k].scale(mu);
            dev = dev.max((*v - rhs).norm());
        }
        assert!(dev <= 1e-12);
    }

    #[test]
    fn impulse_field_reduces_to_kernel_products() {
        // phi = 1 near the impulse: G(w, 0) = K1(x0, w1) (1/cell) K2(x0, w2) * cell
        let g = Grid2D::centered(8, 0.5).unwrap();
        let d = signal::impulse(g).unwrap();
        let ones = QSignal2D::from_fn(g, |_, _| Quaternion::ONE).unwrap();
        let a = LctParams::example_matrix();
        let ug = shift_grid_of(&g, 1, 2);
        let field = qwlct_forward(&d, &ones, &a, &a, &ug).unwrap();
        let ku = (1, 1); // u = (0, 0) on the 2-point centered shift grid
        assert_eq!(field.u_grid().coord1(1), 0.0);
        let wg = *field.w_grid();
        for m1 in [0usize, 3, 5] {
            for m2 in [1usize, 4, 7] {
                let kl = crate::qlct::lct_kernel_left(&a, 0.0, wg.coord1(m1)).unwrap();
                let kr = crate::qlct::lct_kernel_right(&a, 0.0, wg.coord2(m2)).unwrap();
                let expect = kl * kr;
                let got = field.value(m1, m2, ku.0, ku.1);
                assert!((got - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_window_rejected() {
        let g = Grid2D::centered(8, 0.5).unwrap();
        let f = signal::isotropic_gaussian(g, 1.0).unwrap();
        let zero = QSignal2D::zeros(g);
        let a = LctParams::qft_matrix();
        let ug = shift_grid_of(&g, 2, 4);
        assert!(matches!(
            qwlct_forward(&f, &zero, &a, &a, &ug),
            Err(Error::ZeroWindow)
        ));
    }

    #[test]
    fn misaligned_shift_grid_rejected() {
        let g = Grid2D::centered(8, 0.5).unwrap();
        let f = signal::isotropic_gaussian(g, 1.0).unwrap();
        let a = LctParams::qft_matrix();
        let bad = Grid2D::centered(4, 0.3).unwrap(); // 0.3 not a multiple of 0.5
        assert!(matches!(
            qwlct_forward(&f, &f, &a, &a, &bad),
            Err(Error::OffLattice(_))
        ));
    }

    #[test]
    fn inversion_round_trip_coarse() {
        // modest sizes here; the acceptance suite runs the full n = 64 case
        let (f, phi) = example_pair(32, 1.0, 1.0 / 16.0);
        let a = LctParams::example_matrix();
        let ug = shift_grid_of(f.grid(), 4, 32); // du = 0.25, span [-4, 4)
        let field = qwlct_forward(&f, &phi, &a, &a, &ug).unwrap();
        let back = qwlct_inverse(&field, &phi, &a, &a, f.grid()).unwrap();
        let err = norm_sq(&back.sub(&f).unwrap()).sqrt() / norm_sq(&f).sqrt();
        assert!(err < 2e-3, "round trip err {err}");

        let zero_field = qwlct_forward(&QSignal2D::zeros(*f.grid()), &phi, &a, &a, &ug).unwrap();
        let z = qwlct_inverse(&zero_field, &phi, &a, &a, f.grid()).unwrap();
        assert!(z.samples().iter().all(|q| q.norm() == 0.0));
    }

    #[test]
    fn parseval_on_example_pair() {
        let (f, phi) = example_pair(32, 1.0, 1.0 / 16.0);
        let a = LctParams::example_matrix();
        let ug = shift_grid_of(f.grid(), 4, 32);
        let field = qwlct_forward(&f, &phi, &a, &a, &ug).unwrap();
        let target = norm_sq(&f) * norm_sq(&phi);
        let got = field_energy(&field);
        assert!(
            (got - target).abs() / target < 1e-2,
            "energy {got} vs {target}"
        );
        // close to the closed-form 4 pi^2 as well
        let fourpi2 = 4.0 * std::f64::consts::PI.powi(2);
        assert!((got - fourpi2).abs() / fourpi2 < 1e-2);
    }

    #[test]
    fn covariance_identities_hold_on_lattice() {
        let (f, phi) = example_pair(32, 2.0, 1.0 / 16.0);
        let a = LctParams::example_matrix();
        let ug = shift_grid_of(f.grid(), 8, 4); // du = 1.0
        // r = 0: both sides identical
        let same = shift_covariance(&f, &phi, &a, &a, &ug, (0.0, 0.0)).unwrap();
        assert!(same.max_deviation <= 1e-12 * same.max_abs);
        // one shift-lattice step; a = 0 keeps the w offset at zero
        let dev = shift_covariance(&f, &phi, &a, &a, &ug, (1.0, 1.0)).unwrap();
        assert!(dev.max_deviation <= 1e-6 * dev.max_abs, "{dev:?}");

        let s0 = modulation_covariance(&f, &phi, &a, &a, &ug, (0.0, 0.0)).unwrap();
        assert!(s0.max_deviation <= 1e-12 * s0.max_abs);
        let dw = (f.grid().freq_grid().dx1() * 4.0) / a.b(); // s*b = 4 bins
        let devm = modulation_covariance(&f, &phi, &a, &a, &ug, (dw, dw)).unwrap();
        assert!(devm.max_deviation <= 1e-9 * devm.max_abs, "{devm:?}");
    }

    #[test]
    fn parity_on_even_and_odd_inputs() {
        // beta small enough that the unpaired boundary row carries ~e^{-32},
        // so index reflection is exact to rounding
        let g = Grid2D::centered_span(16, 2.0).unwrap();
        let phi = signal::example_window(g, 1.0 / 16.0, 0.0, 0.0).unwrap();
        let even = signal::example_gaussian(g, 1.0 / 16.0, 0.0, 0.0).unwrap();
        let a = LctParams::qft_matrix();
        let ug = shift_grid_of(&g, 4, 4);
        let dev = parity_deviation(&even, &phi, &a, &a, &ug).unwrap();
        assert!(dev.max_deviation <= 1e-9 * dev.max_abs, "{dev:?}");

        // odd in x1: f = x1 * gaussian
        let odd = even.map(|x1, _, q| q.scale(x1)).unwrap();
        let dev_odd = parity_deviation(&odd, &phi, &a, &a, &ug).unwrap();
        assert!(dev_odd.max_deviation <= 1e-9 * dev_odd.max_abs, "{dev_odd:?}");
    }

    #[test]
    fn qwf4_round_trip() {
        let (f, phi) = example_pair(8, 1.0, 0.25);
        let a = LctParams::qft_matrix();
        let ug = shift_grid_of(f.grid(), 2, 4);
        let field = qwlct_forward(&f, &phi, &a, &a, &ug).unwrap();
        let mut buf = Vec::new();
        write_qwf4(&field, &mut buf).unwrap();
        let back = read_qwf4(buf.as_slice()).unwrap();
        assert!(back.w_grid().approx_eq(field.w_grid()));
        assert!(back.u_grid().approx_eq(field.u_grid()));
        assert_eq!(back.values(), field.values());

        buf[1] = b'Z';
        assert!(matches!(read_qwf4(buf.as_slice()), Err(Error::BadMagic { .. })));
    }

    #[test]
    fn spectrogram_slices() {
        let (f, phi) = example_pair(8, 1.0, 0.25);
        let a = LctParams::qft_matrix();
        let ug = shift_grid_of(f.grid(), 2, 4);
        let field = qwlct_forward(&f, &phi, &a, &a, &ug).unwrap();
        let mut buf = Vec::new();
        spectrogram_u_slice(&field, 2, 2, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("w1,w2,g2\n"));
        assert_eq!(text.lines().count(), 1 + 64);
        let mut buf2 = Vec::new();
        spectrogram_w_slice(&field, 4, 4, &mut buf2).unwrap();
        assert!(String::from_utf8(buf2).unwrap().starts_with("u1,u2,g2\n"));
    }
}
