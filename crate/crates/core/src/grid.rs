//! Uniform 2D sampling lattices and boolean index sets over them.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance for deciding whether a coordinate sits on a lattice.
pub const LATTICE_TOL: f64 = 1e-9;

/// A uniform 2D lattice. Sample `(k1, k2)` sits at
/// `(x1_min + k1*dx1, x2_min + k2*dx2)`, computed by multiplication so there
/// is no accumulated drift. The same type describes spatial, frequency and
/// shift lattices; only the interpretation of the coordinates changes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    n1: usize,
    n2: usize,
    x1_min: f64,
    x2_min: f64,
    dx1: f64,
    dx2: f64,
}

impl Grid2D {
    pub fn new(n1: usize, n2: usize, x1_min: f64, x2_min: f64, dx1: f64, dx2: f64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2, got {n1}x{n2}")));
        }
        if !(dx1 > 0.0) || !(dx2 > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacings must be positive, got ({dx1}, {dx2})"
            )));
        }
        if !x1_min.is_finite() || !x2_min.is_finite() || !dx1.is_finite() || !dx2.is_finite() {
            return Err(Error::InvalidGrid("non-finite grid metadata".into()));
        }
        Ok(Grid2D { n1, n2, x1_min, x2_min, dx1, dx2 })
    }

    /// Grid of `n x n` cells with spacing `dx`, origin on the lattice at
    /// index `n/2` (covers `[-n/2*dx, n/2*dx)`).
    pub fn centered(n: usize, dx: f64) -> Result<Self> {
        let min = -((n / 2) as f64) * dx;
        Grid2D::new(n, n, min, min, dx, dx)
    }

    /// Centered grid covering `[-half, half)` with `n` samples per axis.
    pub fn centered_span(n: usize, half: f64) -> Result<Self> {
        Grid2D::centered(n, 2.0 * half / n as f64)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }
    pub fn n2(&self) -> usize {
        self.n2
    }
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn x1_min(&self) -> f64 {
        self.x1_min
    }
    pub fn x2_min(&self) -> f64 {
        self.x2_min
    }
    pub fn dx1(&self) -> f64 {
        self.dx1
    }
    pub fn dx2(&self) -> f64 {
        self.dx2
    }

    pub fn cell_area(&self) -> f64 {
        self.dx1 * self.dx2
    }

    pub fn coord1(&self, k1: usize) -> f64 {
        self.x1_min + k1 as f64 * self.dx1
    }

    pub fn coord2(&self, k2: usize) -> f64 {
        self.x2_min + k2 as f64 * self.dx2
    }

    /// Row-major, axis-1 major flat index.
    pub fn index(&self, k1: usize, k2: usize) -> usize {
        k1 * self.n2 + k2
    }

    pub fn unindex(&self, idx: usize) -> (usize, usize) {
        (idx / self.n2, idx % self.n2)
    }

    /// Nearest lattice index along axis 1 if `x` lies on the lattice within
    /// [`LATTICE_TOL`] (relative to the spacing) and inside the grid.
    pub fn lattice_index1(&self, x: f64) -> Option<usize> {
        lattice_index(x, self.x1_min, self.dx1, self.n1)
    }

    pub fn lattice_index2(&self, x: f64) -> Option<usize> {
        lattice_index(x, self.x2_min, self.dx2, self.n2)
    }

    /// Both axes restricted to offsets that are whole numbers of cells.
    pub fn offset_in_cells(&self, r1: f64, r2: f64) -> Result<(i64, i64)> {
        let o1 = cells(r1, self.dx1)
            .ok_or_else(|| Error::OffLattice(format!("offset {r1} is not a multiple of dx1 = {}", self.dx1)))?;
        let o2 = cells(r2, self.dx2)
            .ok_or_else(|| Error::OffLattice(format!("offset {r2} is not a multiple of dx2 = {}", self.dx2)))?;
        Ok((o1, o2))
    }

    pub fn same_shape(&self, other: &Grid2D) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2
    }

    /// Approximate equality of grid metadata (spacing-relative tolerance).
    pub fn approx_eq(&self, other: &Grid2D) -> bool {
        self.same_shape(other)
            && (self.x1_min - other.x1_min).abs() <= LATTICE_TOL * self.dx1
            && (self.x2_min - other.x2_min).abs() <= LATTICE_TOL * self.dx2
            && (self.dx1 - other.dx1).abs() <= LATTICE_TOL * self.dx1
            && (self.dx2 - other.dx2).abs() <= LATTICE_TOL * self.dx2
    }

    pub fn ensure_matches(&self, other: &Grid2D) -> Result<()> {
        if self.approx_eq(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// The QFT bin lattice of this spatial grid: spacing `2*pi/(n*dx)` and
    /// signed bin indices in `[-n/2, n/2)`, so `dw * dx * n = 2*pi` exactly.
    pub fn freq_grid(&self) -> Grid2D {
        let dw1 = std::f64::consts::TAU / (self.n1 as f64 * self.dx1);
        let dw2 = std::f64::consts::TAU / (self.n2 as f64 * self.dx2);
        Grid2D {
            n1: self.n1,
            n2: self.n2,
            x1_min: -((self.n1 / 2) as f64) * dw1,
            x2_min: -((self.n2 / 2) as f64) * dw2,
            dx1: dw1,
            dx2: dw2,
        }
    }

    /// Total lattice measure `n1*n2*dx1*dx2`.
    pub fn total_measure(&self) -> f64 {
        self.len() as f64 * self.cell_area()
    }
}

fn cells(x: f64, dx: f64) -> Option<i64> {
    let r = x / dx;
    let k = r.round();
    if (r - k).abs() <= LATTICE_TOL * (1.0 + r.abs()) {
        Some(k as i64)
    } else {
        None
    }
}

fn lattice_index(x: f64, min: f64, dx: f64, n: usize) -> Option<usize> {
    let k = cells(x - min, dx)?;
    if (0..n as i64).contains(&k) {
        Some(k as usize)
    } else {
        None
    }
}

/// Boolean membership per lattice cell of a reference grid, with its measure.
#[derive(Clone, Debug)]
pub struct IndexSet2D {
    grid: Grid2D,
    members: Vec<bool>,
}

impl IndexSet2D {
    pub fn empty(grid: Grid2D) -> Self {
        let members = vec![false; grid.len()];
        IndexSet2D { grid, members }
    }

    pub fn full(grid: Grid2D) -> Self {
        let members = vec![true; grid.len()];
        IndexSet2D { grid, members }
    }

    pub fn from_members(grid: Grid2D, members: Vec<bool>) -> Result<Self> {
        if members.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "membership length {} does not match grid size {}",
                members.len(),
                grid.len()
            )));
        }
        Ok(IndexSet2D { grid, members })
    }

    /// Cells whose coordinates satisfy the predicate.
    pub fn from_predicate<F: Fn(f64, f64) -> bool>(grid: Grid2D, pred: F) -> Self {
        let mut members = vec![false; grid.len()];
        for k1 in 0..grid.n1() {
            for k2 in 0..grid.n2() {
                members[grid.index(k1, k2)] = pred(grid.coord1(k1), grid.coord2(k2));
            }
        }
        IndexSet2D { grid, members }
    }

    /// Centered block `|x1| <= half1 && |x2| <= half2`.
    pub fn centered_block(grid: Grid2D, half1: f64, half2: f64) -> Self {
        IndexSet2D::from_predicate(grid, |x1, x2| x1.abs() <= half1 && x2.abs() <= half2)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    /// Lebesgue measure: member count times cell area.
    pub fn measure(&self) -> f64 {
        self.member_count() as f64 * self.grid.cell_area()
    }

    pub fn complement(&self) -> IndexSet2D {
        IndexSet2D {
            grid: self.grid,
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &IndexSet2D) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(a, b)| !a || *b)
    }
}
