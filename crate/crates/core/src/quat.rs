//! Quaternion arithmetic over f64 components.
//!
//! Values are plain Cartesian quaternions `q0 + i q1 + j q2 + k q3` with the
//! Hamilton multiplication table `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`.
//! No implicit normalization is ever applied; unit-norm inputs are the
//! caller's responsibility.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// One element of the quaternion algebra, stored as four f64 components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    /// Real scalar part.
    pub q0: f64,
    /// i-component.
    pub q1: f64,
    /// j-component.
    pub q2: f64,
    /// k-component.
    pub q3: f64,
}

/// Selects one of the two imaginary units used by the two-sided kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginaryAxis {
    /// The i unit, paired with axis 1 in every two-sided kernel.
    I,
    /// The j unit, paired with axis 2.
    J,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    /// Real quaternion `r + 0i + 0j + 0k`.
    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// `cos θ + μ sin θ` for the chosen imaginary unit; always unit norm.
    pub fn exp_axis(axis: ImaginaryAxis, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        match axis {
            ImaginaryAxis::I => Quaternion::new(c, s, 0.0, 0.0),
            ImaginaryAxis::J => Quaternion::new(c, 0.0, s, 0.0),
        }
    }

    /// Conjugate: negates the three imaginary components.
    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sq(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    /// Euclidean norm `|q| = sqrt(q q̄)`; multiplicative over products.
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Scalar (real) part; carries the cyclic symmetry `[pql]_0 = [qlp]_0`.
    pub fn scalar_part(self) -> f64 {
        self.q0
    }

    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }

    /// Scale every component by a real factor.
    pub fn scale(self, r: f64) -> Self {
        Quaternion::new(self.q0 * r, self.q1 * r, self.q2 * r, self.q3 * r)
    }

    /// Left multiplication by the i-complex number `re + i im`.
    ///
    /// The i-subfield acts on (q0,q1) and (q2,q3) as two independent complex
    /// planes; this is the hot path of the two-sided kernels so it avoids the
    /// full Hamilton product.
    pub fn left_mul_i(self, re: f64, im: f64) -> Self {
        Quaternion::new(
            re * self.q0 - im * self.q1,
            re * self.q1 + im * self.q0,
            re * self.q2 - im * self.q3,
            re * self.q3 + im * self.q2,
        )
    }

    /// Right multiplication by the j-complex number `re + j im`.
    pub fn right_mul_j(self, re: f64, im: f64) -> Self {
        Quaternion::new(
            re * self.q0 - im * self.q2,
            re * self.q1 - im * self.q3,
            re * self.q2 + im * self.q0,
            re * self.q3 + im * self.q1,
        )
    }

    pub fn max_abs_component(self) -> f64 {
        self.q0
            .abs()
            .max(self.q1.abs())
            .max(self.q2.abs())
            .max(self.q3.abs())
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        self.q0 += o.q0;
        self.q1 += o.q1;
        self.q2 += o.q2;
        self.q3 += o.q3;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product; non-commutative.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.q0 * o.q0 - self.q1 * o.q1 - self.q2 * o.q2 - self.q3 * o.q3,
            self.q0 * o.q1 + self.q1 * o.q0 + self.q2 * o.q3 - self.q3 * o.q2,
            self.q0 * o.q2 - self.q1 * o.q3 + self.q2 * o.q0 + self.q3 * o.q1,
            self.q0 * o.q3 + self.q1 * o.q2 - self.q2 * o.q1 + self.q3 * o.q0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: f64) -> Quaternion {
        self.scale(r)
    }
}
