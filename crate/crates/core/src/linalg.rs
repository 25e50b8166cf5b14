//! Fixed-size 2×2 matrix arithmetic.

use core::ops::{Add, Mul, Neg, Sub};

pub type Vec2 = [f64; 2];

/// Row-major 2×2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub const fn symmetric(a11: f64, a12: f64, a22: f64) -> Self {
        Mat2([[a11, a12], [a12, a22]])
    }

    pub const fn diag(a11: f64, a22: f64) -> Self {
        Mat2([[a11, 0.0], [0.0, a22]])
    }

    pub const fn scalar(s: f64) -> Self {
        Mat2::diag(s, s)
    }

    /// `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Mat2::new(c, -s, s, c)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a, c, b, d)
    }

    pub fn scale(&self, s: f64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(s * a, s * b, s * c, s * d)
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        let [[a, b], [c, d]] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// Closed-form inverse; `None` when the determinant is zero or not finite.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.0;
        Some(Mat2::new(d / det, -b / det, -c / det, a / det))
    }

    pub fn frobenius_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        libm::sqrt(a * a + b * b + c * c + d * d)
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrize(&self) -> Self {
        let off = 0.5 * (self.0[0][1] + self.0[1][0]);
        Mat2::symmetric(self.0[0][0], off, self.0[1][1])
    }

    pub fn asymmetry(&self) -> f64 {
        (self.0[0][1] - self.0[1][0]).abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Eigenvalues `(larger, smaller)` of the symmetric part.
    pub fn sym_eigenvalues(&self) -> (f64, f64) {
        let s = self.symmetrize();
        let [[a, b], [_, c]] = s.0;
        let mean = 0.5 * (a + c);
        let radius = libm::hypot(0.5 * (a - c), b);
        let hi = mean + radius;
        // det/hi avoids the cancellation in mean − radius for nearly singular SPD input
        let lo = if hi > 0.0 { s.det() / hi } else { mean - radius };
        (hi, lo)
    }

    /// Symmetric and both eigenvalues strictly positive.
    pub fn is_spd(&self, sym_tol: f64) -> bool {
        if !self.is_finite() {
            return false;
        }
        let scale = self.0[0][0].abs().max(self.0[1][1].abs()).max(f64::MIN_POSITIVE);
        if self.asymmetry() > sym_tol * scale {
            return false;
        }
        let [[a, _], [_, c]] = self.0;
        a > 0.0 && c > 0.0 && self.det() > 0.0
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale(rhs)
    }
}

pub(crate) fn vec_add_scaled(a: Vec2, s: f64, b: Vec2) -> Vec2 {
    [a[0] + s * b[0], a[1] + s * b[1]]
}
