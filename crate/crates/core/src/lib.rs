//! Numerical laboratory for two-sided quaternion Fourier, linear canonical
//! and windowed linear canonical transforms on sampled 2D quaternion signals,
//! together with the uncertainty inequalities they satisfy and a
//! Donoho-Stark style bandlimited signal-recovery experiment.
//!
//! The crate is organized bottom-up:
//!
//! - [`quat`]: quaternion arithmetic;
//! - [`grid`], [`signal`], [`io`]: lattices, sampled signals, file formats;
//! - [`qft`]: the two-sided quaternion Fourier transform (direct-sum oracle
//!   and FFT fast path);
//! - [`qlct`]: the quaternion linear canonical transform;
//! - [`qwlct`]: the windowed transform over a shift lattice;
//! - [`special`], [`uncertainty`]: Gamma/digamma and the inequality checks;
//! - [`recovery`]: bandlimited recovery from erased samples;
//! - [`corpus`]: the seeded signal/matrix corpus the verification suite runs on.
//!
//! Built with rayon data-parallel loops by default; disable the `parallel`
//! feature for a sequential build. Outputs are bit-identical either way.

// `!(x > 0.0)`-style guards double as NaN rejection; the positive comparison
// would silently accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod error;
pub mod fft2;
pub mod grid;
pub mod io;
pub mod par;
pub mod qft;
pub mod qlct;
pub mod quat;
pub mod qwlct;
pub mod recovery;
pub mod reduce;
pub mod signal;
pub mod special;
#[cfg(test)]
pub(crate) mod testutil;
pub mod uncertainty;

pub use error::{Error, Result};
pub use grid::{Grid2D, IndexSet2D};
pub use quat::{ImaginaryAxis, Quaternion};
pub use signal::QSignal2D;
