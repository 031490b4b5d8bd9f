//! Sampled 2D quaternion-valued signals: norms, inner products, convolution,
//! shift/modulation operators and the closed-form generators used throughout
//! the experiments.
//!
//! All quadrature is a plain Riemann sum with uniform cell weights; samples
//! sit at left cell edges `x_min + k*dx`. Sums accumulate through the fixed
//! pairwise tree of [`crate::reduce`], so results do not depend on the worker
//! count.

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::quat::{ImaginaryAxis, Quaternion};
use crate::reduce::{pairwise_sum, pairwise_sum_by};

/// A quaternion sample per lattice point of a [`Grid2D`], axis-1 major.
/// Immutable after construction; every constructor rejects NaN/Inf samples.
#[derive(Clone, Debug)]
pub struct QSignal2D {
    grid: Grid2D,
    samples: Vec<Quaternion>,
}

impl QSignal2D {
    pub fn from_samples(grid: Grid2D, samples: Vec<Quaternion>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(bad) = samples.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(QSignal2D { grid, samples })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        let samples = vec![Quaternion::ZERO; grid.len()];
        QSignal2D { grid, samples }
    }

    /// Sample a closed form `f(x1, x2)` on the lattice.
    pub fn from_fn<F: Fn(f64, f64) -> Quaternion>(grid: Grid2D, f: F) -> Result<Self> {
        let mut samples = Vec::with_capacity(grid.len());
        for k1 in 0..grid.n1() {
            let x1 = grid.coord1(k1);
            for k2 in 0..grid.n2() {
                samples.push(f(x1, grid.coord2(k2)));
            }
        }
        QSignal2D::from_samples(grid, samples)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn samples(&self) -> &[Quaternion] {
        &self.samples
    }

    pub fn value(&self, k1: usize, k2: usize) -> Quaternion {
        self.samples[self.grid.index(k1, k2)]
    }

    /// Internal constructor for outputs already known to be finite-checked.
    pub(crate) fn from_parts_unchecked(grid: Grid2D, samples: Vec<Quaternion>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        QSignal2D { grid, samples }
    }

    /// Pointwise map producing a new signal on the same grid.
    pub fn map<F: Fn(f64, f64, Quaternion) -> Quaternion>(&self, f: F) -> Result<Self> {
        let mut out = Vec::with_capacity(self.samples.len());
        for k1 in 0..self.grid.n1() {
            let x1 = self.grid.coord1(k1);
            for k2 in 0..self.grid.n2() {
                out.push(f(x1, self.grid.coord2(k2), self.value(k1, k2)));
            }
        }
        QSignal2D::from_samples(self.grid, out)
    }

    pub fn scale(&self, r: f64) -> Result<Self> {
        QSignal2D::from_samples(self.grid, self.samples.iter().map(|q| q.scale(r)).collect())
    }

    pub fn add(&self, other: &QSignal2D) -> Result<Self> {
        self.grid.ensure_matches(&other.grid)?;
        let s = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a + b)
            .collect();
        QSignal2D::from_samples(self.grid, s)
    }

    pub fn sub(&self, other: &QSignal2D) -> Result<Self> {
        self.grid.ensure_matches(&other.grid)?;
        let s = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a - b)
            .collect();
        QSignal2D::from_samples(self.grid, s)
    }
}

/// `L^s` Riemann norm; `s = f64::INFINITY` gives the max sample magnitude.
pub fn lp_norm(f: &QSignal2D, s: f64) -> Result<f64> {
    if s.is_infinite() && s > 0.0 {
        return Ok(f
            .samples()
            .iter()
            .map(|q| q.norm())
            .fold(0.0f64, f64::max));
    }
    if !(s >= 1.0) {
        return Err(Error::InvalidArgument(format!("lp_norm needs s >= 1, got {s}")));
    }
    let cell = f.grid().cell_area();
    let total = if s == 2.0 {
        pairwise_sum_by(f.samples().len(), &|k| f.samples()[k].norm_sq())
    } else {
        pairwise_sum_by(f.samples().len(), &|k| f.samples()[k].norm().powf(s))
    };
    Ok((total * cell).powf(1.0 / s))
}

/// Squared 2-norm, the workhorse for energy bookkeeping.
pub fn norm_sq(f: &QSignal2D) -> f64 {
    pairwise_sum_by(f.samples().len(), &|k| f.samples()[k].norm_sq()) * f.grid().cell_area()
}

/// Quaternion-valued inner product `sum f * conj(g) * cell`.
pub fn inner_product(f: &QSignal2D, g: &QSignal2D) -> Result<Quaternion> {
    f.grid().ensure_matches(g.grid())?;
    let s = pairwise_sum_by(f.samples().len(), &|k| {
        f.samples()[k] * g.samples()[k].conj()
    });
    Ok(s.scale(f.grid().cell_area()))
}

/// Symmetric real scalar product: the scalar part of [`inner_product`].
pub fn scalar_inner(f: &QSignal2D, g: &QSignal2D) -> Result<f64> {
    Ok(inner_product(f, g)?.scalar_part())
}

/// How the convolution treats points outside the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConvolveEdge {
    /// Treat the second factor as zero outside its grid (the `L^2(R^2)` model).
    #[default]
    ZeroPad,
    /// Wrap indices modulo the grid.
    Periodic,
}

/// Discrete convolution `(f*g)(y) = sum_x f(x) g(y-x) * cell`.
///
/// Quaternion products do not commute, so operand order matters. Requires the
/// origin to sit on the lattice so `y - x` lands on sample points exactly.
pub fn convolve(f: &QSignal2D, g: &QSignal2D, edge: ConvolveEdge) -> Result<QSignal2D> {
    let grid = *f.grid();
    grid.ensure_matches(g.grid())?;
    let (o1, o2) = origin_indices(&grid)?;
    let (n1, n2) = (grid.n1() as i64, grid.n2() as i64);
    let cell = grid.cell_area();

    let rows = crate::par::map_indexed(grid.n1(), |ky1| {
        let mut row = Vec::with_capacity(grid.n2());
        for ky2 in 0..grid.n2() {
            let mut acc = Quaternion::ZERO;
            for kx1 in 0..grid.n1() {
                let m1 = ky1 as i64 - kx1 as i64 + o1;
                let m1 = match wrap(m1, n1, edge) {
                    Some(m) => m,
                    None => continue,
                };
                for kx2 in 0..grid.n2() {
                    let m2 = ky2 as i64 - kx2 as i64 + o2;
                    let m2 = match wrap(m2, n2, edge) {
                        Some(m) => m,
                        None => continue,
                    };
                    acc += f.value(kx1, kx2) * g.value(m1 as usize, m2 as usize);
                }
            }
            row.push(acc.scale(cell));
        }
        row
    });

    QSignal2D::from_samples(grid, rows.into_iter().flatten().collect())
}

fn wrap(m: i64, n: i64, edge: ConvolveEdge) -> Option<i64> {
    match edge {
        ConvolveEdge::ZeroPad => (0..n).contains(&m).then_some(m),
        ConvolveEdge::Periodic => Some(m.rem_euclid(n)),
    }
}

fn origin_indices(grid: &Grid2D) -> Result<(i64, i64)> {
    let (o1, o2) = grid.offset_in_cells(-grid.x1_min(), -grid.x2_min()).map_err(|_| {
        Error::OffLattice("convolution requires the origin on the lattice".into())
    })?;
    Ok((o1, o2))
}

/// `T_r f(x) = f(x - r)` for lattice-aligned `r`, zero fill outside.
pub fn translate(f: &QSignal2D, r: (f64, f64)) -> Result<QSignal2D> {
    let grid = *f.grid();
    let (c1, c2) = grid.offset_in_cells(r.0, r.1)?;
    let mut out = vec![Quaternion::ZERO; grid.len()];
    for k1 in 0..grid.n1() as i64 {
        let s1 = k1 - c1;
        if s1 < 0 || s1 >= grid.n1() as i64 {
            continue;
        }
        for k2 in 0..grid.n2() as i64 {
            let s2 = k2 - c2;
            if s2 < 0 || s2 >= grid.n2() as i64 {
                continue;
            }
            out[grid.index(k1 as usize, k2 as usize)] = f.value(s1 as usize, s2 as usize);
        }
    }
    Ok(QSignal2D::from_parts_unchecked(grid, out))
}

/// `M_s f(x) = e^{i x1 s1} f(x) e^{j x2 s2}`.
pub fn modulate(f: &QSignal2D, s: (f64, f64)) -> Result<QSignal2D> {
    f.map(|x1, x2, q| {
        let (s1, c1) = (x1 * s.0).sin_cos();
        let (s2, c2) = (x2 * s.1).sin_cos();
        q.left_mul_i(c1, s1).right_mul_j(c2, s2)
    })
}

/// `P f(x) = f(-x)` by index reflection on an origin-centered grid.
///
/// On even grids the most negative row/column has no mirror partner and is
/// filled with zero, matching the zero-outside-grid model. Inputs that vanish
/// there reflect exactly.
pub fn reflect(f: &QSignal2D) -> Result<QSignal2D> {
    let grid = *f.grid();
    let (o1, o2) = origin_indices(&grid).map_err(|_| {
        Error::InvalidArgument("reflection requires an origin-centered grid".into())
    })?;
    let mut out = vec![Quaternion::ZERO; grid.len()];
    for k1 in 0..grid.n1() as i64 {
        let m1 = 2 * o1 - k1;
        if m1 < 0 || m1 >= grid.n1() as i64 {
            continue;
        }
        for k2 in 0..grid.n2() as i64 {
            let m2 = 2 * o2 - k2;
            if m2 < 0 || m2 >= grid.n2() as i64 {
                continue;
            }
            out[grid.index(k1 as usize, k2 as usize)] = f.value(m1 as usize, m2 as usize);
        }
    }
    Ok(QSignal2D::from_parts_unchecked(grid, out))
}

/// Unit-mass impulse: one sample of `1/cell_area` at the origin.
pub fn impulse(grid: Grid2D) -> Result<QSignal2D> {
    let (o1, o2) = origin_indices(&grid)?;
    let mut s = vec![Quaternion::ZERO; grid.len()];
    s[grid.index(o1 as usize, o2 as usize)] = Quaternion::real(1.0 / grid.cell_area());
    Ok(QSignal2D::from_parts_unchecked(grid, s))
}

/// The worked-example signal
/// `f(x) = (pi*beta)^{-1/2} e^{i x1 u0} e^{-|x|^2/(2 beta)} e^{i x2 v0}`,
/// with both modulation factors on the i-unit exactly as printed.
pub fn example_gaussian(grid: Grid2D, beta: f64, u0: f64, v0: f64) -> Result<QSignal2D> {
    example_gaussian_with_axis(grid, beta, u0, v0, ImaginaryAxis::I)
}

/// Variant of [`example_gaussian`] letting the second modulation factor use the
/// j-unit instead (`... e^{j x2 v0}`), for conventions that pair j with axis 2.
pub fn example_gaussian_with_axis(
    grid: Grid2D,
    beta: f64,
    u0: f64,
    v0: f64,
    second_axis: ImaginaryAxis,
) -> Result<QSignal2D> {
    gaussian_family(grid, beta, u0, v0, second_axis, 1.0 / (std::f64::consts::PI * beta).sqrt())
}

/// The worked-example window `phi(x) = 2 sqrt(pi/beta) e^{i x1 u0} e^{-|x|^2/(2 beta)} e^{i x2 v0}`.
pub fn example_window(grid: Grid2D, beta: f64, u0: f64, v0: f64) -> Result<QSignal2D> {
    example_window_with_axis(grid, beta, u0, v0, ImaginaryAxis::I)
}

pub fn example_window_with_axis(
    grid: Grid2D,
    beta: f64,
    u0: f64,
    v0: f64,
    second_axis: ImaginaryAxis,
) -> Result<QSignal2D> {
    gaussian_family(grid, beta, u0, v0, second_axis, 2.0 * (std::f64::consts::PI / beta).sqrt())
}

fn gaussian_family(
    grid: Grid2D,
    beta: f64,
    u0: f64,
    v0: f64,
    second_axis: ImaginaryAxis,
    amp: f64,
) -> Result<QSignal2D> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    QSignal2D::from_fn(grid, |x1, x2| {
        let env = amp * (-(x1 * x1 + x2 * x2) / (2.0 * beta)).exp();
        let (s1, c1) = (x1 * u0).sin_cos();
        let (s2, c2) = (x2 * v0).sin_cos();
        let q = Quaternion::real(env).left_mul_i(c1, s1);
        match second_axis {
            ImaginaryAxis::I => q.left_mul_i(c2, s2),
            ImaginaryAxis::J => q.right_mul_j(c2, s2),
        }
    })
}

/// Plain isotropic Gaussian `e^{-|x|^2/(2 sigma^2)}`.
pub fn isotropic_gaussian(grid: Grid2D, sigma: f64) -> Result<QSignal2D> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    QSignal2D::from_fn(grid, |x1, x2| {
        Quaternion::real((-(x1 * x1 + x2 * x2) / (2.0 * sigma * sigma)).exp())
    })
}

/// Indicator of the centered box `|x1| <= half1 && |x2| <= half2`.
pub fn box_window(grid: Grid2D, half1: f64, half2: f64) -> Result<QSignal2D> {
    QSignal2D::from_fn(grid, |x1, x2| {
        if x1.abs() <= half1 && x2.abs() <= half2 {
            Quaternion::ONE
        } else {
            Quaternion::ZERO
        }
    })
}

/// Raised-cosine bump supported on `|x| <= radius`.
pub fn raised_cosine(grid: Grid2D, radius: f64) -> Result<QSignal2D> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    QSignal2D::from_fn(grid, |x1, x2| {
        let r = (x1 * x1 + x2 * x2).sqrt();
        if r <= radius {
            Quaternion::real(0.5 * (1.0 + (std::f64::consts::PI * r / radius).cos()))
        } else {
            Quaternion::ZERO
        }
    })
}

/// Energy of the samples restricted to a boolean mask (no cell weight).
pub(crate) fn masked_energy(samples: &[Quaternion], members: &[bool]) -> f64 {
    debug_assert_eq!(samples.len(), members.len());
    pairwise_sum(
        &samples
            .iter()
            .zip(members)
            .map(|(q, &m)| if m { q.norm_sq() } else { 0.0 })
            .collect::<Vec<_>>(),
    )
}
