//! Seeded random inputs shared by unit tests.

use crate::grid::Grid2D;
use crate::quat::Quaternion;
use crate::signal::QSignal2D;
use rand::Rng;

pub fn rand_quat<R: Rng>(rng: &mut R, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn rand_signal<R: Rng>(rng: &mut R, grid: Grid2D, scale: f64) -> QSignal2D {
    let samples = (0..grid.len()).map(|_| rand_quat(rng, scale)).collect();
    QSignal2D::from_samples(grid, samples).expect("random samples are finite")
}
