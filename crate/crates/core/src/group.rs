//! SL(2,R) elements, the exponential map, Iwasawa coordinates and the
//! hyperbolic Hopf projection onto the upper half plane.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::algebra::AlgebraVector;
use crate::error::GeometryError;

/// Tolerance on `|det - 1|` at construction, relative to the matrix scale.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Below this `|det(sX)|` the exponential switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// `a*d - b*c` with one rounding error, using a fused multiply-add to
/// recover the low part of `b*c`.
pub(crate) fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = b * c;
    let err = (-b).mul_add(c, w);
    let diff = a.mul_add(d, -w);
    diff + err
}

fn det_of(m: &Matrix2<f64>) -> f64 {
    det2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

/// Half the squared Frobenius norm; at least 1 for any unimodular matrix.
fn det_scale(m: &Matrix2<f64>) -> f64 {
    0.5 * m.norm_squared()
}

/// Moves `m` onto `det = 1` along the gradient of the determinant (its
/// cofactor matrix). This is the minimal Frobenius-norm correction, so for
/// large entries it only touches the last bits instead of rescaling.
pub(crate) fn project_unimodular(m: Matrix2<f64>) -> Matrix2<f64> {
    let mut p = m;
    for _ in 0..2 {
        let det = det_of(&p);
        if det == 1.0 {
            break;
        }
        let cof = Matrix2::new(p[(1, 1)], -p[(1, 0)], -p[(0, 1)], p[(0, 0)]);
        p += cof * ((1.0 - det) / p.norm_squared());
    }
    p
}

/// Element of SL(2,R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupMatrix {
    m: Matrix2<f64>,
}

impl GroupMatrix {
    /// Validates `det ≈ 1` (relative to the entry scale) and re-projects onto `det = 1`.
    pub fn new(p11: f64, p12: f64, p21: f64, p22: f64) -> Result<Self, GeometryError> {
        Self::from_matrix(Matrix2::new(p11, p12, p21, p22))
    }

    pub fn from_matrix(m: Matrix2<f64>) -> Result<Self, GeometryError> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let det = det_of(&m);
        if det <= 0.0 {
            return Err(GeometryError::NonPositiveDeterminant { det });
        }
        if (det - 1.0).abs() > DET_TOLERANCE * det_scale(&m) {
            return Err(GeometryError::DeterminantNotOne { det });
        }
        Ok(Self {
            m: project_unimodular(m),
        })
    }

    /// Wraps a matrix that is unimodular by construction (closed forms, products).
    pub(crate) fn from_matrix_unchecked(m: Matrix2<f64>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    /// Entries in row-major order `[p11, p12, p21, p22]`.
    pub fn entries(&self) -> [f64; 4] {
        [self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]]
    }

    pub fn p11(&self) -> f64 {
        self.m[(0, 0)]
    }
    pub fn p12(&self) -> f64 {
        self.m[(0, 1)]
    }
    pub fn p21(&self) -> f64 {
        self.m[(1, 0)]
    }
    pub fn p22(&self) -> f64 {
        self.m[(1, 1)]
    }

    /// Determinant, computed with a compensated 2×2 formula.
    pub fn det(&self) -> f64 {
        det_of(&self.m)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.abs().max()
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: Matrix2::new(self.p22(), -self.p12(), -self.p21(), self.p11()),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }

    /// Re-projects onto `det = 1` after a numerical update.
    pub(crate) fn reprojected(m: Matrix2<f64>) -> Self {
        Self {
            m: project_unimodular(m),
        }
    }
}

impl Mul for GroupMatrix {
    type Output = GroupMatrix;
    fn mul(self, rhs: GroupMatrix) -> GroupMatrix {
        GroupMatrix { m: self.m * rhs.m }
    }
}

/// `(cos √d, sin √d / √d)` continued analytically to `d ≤ 0`, where it is
/// `(cosh √-d, sinh √-d / √-d)`. These are the coefficients of
/// `exp(Y) = C·Id + S·Y` for traceless `Y` with `det Y = d`.
pub fn exp_coefficients(d: f64) -> (f64, f64) {
    if d.abs() < SERIES_THRESHOLD {
        series_coefficients(d)
    } else if d > 0.0 {
        elliptic_coefficients(d)
    } else {
        hyperbolic_coefficients(d)
    }
}

/// Four-term Taylor expansion in `d`.
pub fn series_coefficients(d: f64) -> (f64, f64) {
    let c = 1.0 - d / 2.0 + d * d / 24.0 - d * d * d / 720.0;
    let s = 1.0 - d / 6.0 + d * d / 120.0 - d * d * d / 5040.0;
    (c, s)
}

pub fn elliptic_coefficients(d: f64) -> (f64, f64) {
    let w = d.sqrt();
    (w.cos(), w.sin() / w)
}

pub fn hyperbolic_coefficients(d: f64) -> (f64, f64) {
    let w = (-d).sqrt();
    (w.cosh(), w.sinh() / w)
}

/// `exp(sX)` for `X` in sl(2,R).
pub fn exp_algebra(x: AlgebraVector, s: f64) -> GroupMatrix {
    let y = s * x;
    let d = y.a * y.a - y.b * y.b - y.c * y.c;
    let (cf, sf) = exp_coefficients(d);
    GroupMatrix::from_matrix_unchecked(Matrix2::identity() * cf + y.to_matrix() * sf)
}

/// `exp(s u e1) = [[cos us, sin us], [-sin us, cos us]]`.
pub fn exp_rotation(u: f64, s: f64) -> GroupMatrix {
    let (sin, cos) = (u * s).sin_cos();
    GroupMatrix::from_matrix_unchecked(Matrix2::new(cos, sin, -sin, cos))
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Shifts `raw` by a multiple of 2π so that it lands closest to `previous`.
pub fn unwrap_angle(previous: f64, raw: f64) -> f64 {
    raw + 2.0 * PI * ((previous - raw) / (2.0 * PI)).round()
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Global coordinates `(x, y, θ)`, `y > 0`, of `n(x) a(y) k(θ)`.
///
/// `θ` is kept unnormalized so that sampled paths can carry a continuous angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords {
    x: f64,
    y: f64,
    theta: f64,
}

impl IwasawaCoords {
    pub fn new(x: f64, y: f64, theta: f64) -> Result<Self, GeometryError> {
        if y <= 0.0 || !y.is_finite() || !x.is_finite() || !theta.is_finite() {
            return Err(GeometryError::NonPositiveY { y });
        }
        Ok(Self { x, y, theta })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same point with `θ` reduced to `(-π, π]`.
    pub fn canonical(&self) -> Self {
        Self {
            theta: wrap_angle(self.theta),
            ..*self
        }
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..*self }
    }

    /// Largest coordinate difference, with `θ` compared modulo 2π.
    pub fn distance_mod_2pi(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max(angle_distance(self.theta, other.theta))
    }
}

/// Explicit Iwasawa decomposition `p = n(p) a(p) k(p)`, with `θ ∈ (-π, π]`.
pub fn iwasawa(p: &GroupMatrix) -> IwasawaCoords {
    let [p11, p12, p21, p22] = p.entries();
    let r2 = p21 * p21 + p22 * p22;
    IwasawaCoords {
        x: (p11 * p21 + p12 * p22) / r2,
        y: 1.0 / r2,
        theta: wrap_angle((-p21).atan2(p22)),
    }
}

/// The three factors `(n, a, k)` of the Iwasawa decomposition.
pub fn iwasawa_factors(c: &IwasawaCoords) -> (GroupMatrix, GroupMatrix, GroupMatrix) {
    let sy = c.y.sqrt();
    let n = GroupMatrix::from_matrix_unchecked(Matrix2::new(1.0, c.x, 0.0, 1.0));
    let a = GroupMatrix::from_matrix_unchecked(Matrix2::new(sy, 0.0, 0.0, 1.0 / sy));
    (n, a, exp_rotation(1.0, c.theta))
}

/// `n(x) a(y) k(θ)`.
pub fn from_coords(c: &IwasawaCoords) -> GroupMatrix {
    let sy = c.y.sqrt();
    let (sin, cos) = c.theta.sin_cos();
    GroupMatrix::from_matrix_unchecked(Matrix2::new(
        sy * cos - c.x / sy * sin,
        sy * sin + c.x / sy * cos,
        -sin / sy,
        cos / sy,
    ))
}

/// `Ad(exp(s u e1)) X`: fixes `e1` and rotates `(b, c)` by the angle `2us`.
pub fn adjoint_rotation(u: f64, s: f64, x: AlgebraVector) -> AlgebraVector {
    let (sin, cos) = (2.0 * u * s).sin_cos();
    AlgebraVector::new(x.a, x.b * cos - x.c * sin, x.b * sin + x.c * cos)
}

/// `Ad(g) X = g X g⁻¹` by matrix conjugation.
pub fn adjoint(g: &GroupMatrix, x: AlgebraVector) -> AlgebraVector {
    let m = g.matrix() * x.to_matrix() * g.inverse().matrix();
    // conjugation preserves the trace up to rounding
    AlgebraVector::new(
        0.5 * (m[(0, 1)] - m[(1, 0)]),
        0.5 * (m[(0, 1)] + m[(1, 0)]),
        0.5 * (m[(0, 0)] - m[(1, 1)]),
    )
}

/// Point `x + iy` of the upper half plane model of `H²(-4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPoint {
    x: f64,
    y: f64,
}

impl HyperbolicPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if y <= 0.0 || !y.is_finite() || !x.is_finite() {
            return Err(GeometryError::NonPositiveY { y });
        }
        Ok(Self { x, y })
    }

    /// The base point `i`, fixed by SO(2).
    pub fn origin() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

/// Linear fractional action `z ↦ (az + b)/(cz + d)`.
pub fn mobius(p: &GroupMatrix, z: &HyperbolicPoint) -> HyperbolicPoint {
    let [a, b, c, d] = p.entries();
    let z = Complex64::new(z.x, z.y);
    let w = (a * z + b) / (c * z + d);
    // Im w = Im z / |cz + d|^2 > 0 because det p = 1
    HyperbolicPoint { x: w.re, y: w.im }
}

/// Hyperbolic Hopf fibering `π(x, y, θ) = (x, y)`.
pub fn hopf_project(p: &GroupMatrix) -> HyperbolicPoint {
    let c = iwasawa(p);
    HyperbolicPoint { x: c.x, y: c.y }
}
