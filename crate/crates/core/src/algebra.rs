//! The Lie algebra sl(2,R) in the left-invariant frame
//! `e1 = E - F`, `e2 = E + F`, `e3 = H`.
//!
//! Vectors are stored as frame coefficients `(a, b, c)`, so that
//! `a e1 + b e2 + c e3` is the traceless matrix `[[c, a + b], [b - a, -c]]`.
//! The frame is orthonormal for the metric `<X, Y> = tr(X^T Y) / 2`, which
//! left-translates to the standard Sasakian metric on SL(2,R).
//!
//! Everything here is a pure function of its arguments. The structure
//! tensors (connection, curvature, Lorentz force) are evaluated in closed
//! form; the tabulated values live in [`crate::tables`] and are checked
//! against these routes by [`crate::verify`].

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Matrix2;

use crate::error::GeometryError;

/// Componentwise absolute tolerance used when comparing algebra vectors.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Element of sl(2,R) as coefficients with respect to `{e1, e2, e3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraVector {
    /// Coefficient of `e1`, the Reeb direction.
    pub a: f64,
    /// Coefficient of `e2`.
    pub b: f64,
    /// Coefficient of `e3`.
    pub c: f64,
}

impl AlgebraVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);
    /// `E = [[0, 1], [0, 0]] = (e1 + e2) / 2`.
    pub const E: Self = Self::new(0.5, 0.5, 0.0);
    /// `F = [[0, 0], [1, 0]] = (e2 - e1) / 2`.
    pub const F: Self = Self::new(-0.5, 0.5, 0.0);
    /// `H = diag(1, -1) = e3`.
    pub const H: Self = Self::E3;

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// The `i`-th frame vector, `i` in `0..3`.
    ///
    /// # Panics
    /// If `i >= 3`.
    pub fn frame(i: usize) -> Self {
        [Self::E1, Self::E2, Self::E3][i]
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_matrix(self) -> Matrix2<f64> {
        Matrix2::new(self.c, self.a + self.b, self.b - self.a, -self.c)
    }

    /// Reads a traceless matrix back into frame coefficients.
    pub fn from_matrix(m: &Matrix2<f64>) -> Result<Self, GeometryError> {
        let trace = m[(0, 0)] + m[(1, 1)];
        let scale = m.abs().max().max(1.0);
        if trace.abs() > DEFAULT_TOLERANCE * scale {
            return Err(GeometryError::NotTraceless { trace });
        }
        Ok(Self::traceless_part(m))
    }

    /// Frame coefficients of the traceless part of any matrix.
    pub fn traceless_part(m: &Matrix2<f64>) -> Self {
        Self::new(
            0.5 * (m[(0, 1)] - m[(1, 0)]),
            0.5 * (m[(0, 1)] + m[(1, 0)]),
            0.5 * (m[(0, 0)] - m[(1, 1)]),
        )
    }

    /// Frame norm `sqrt(<X, X>)`.
    pub fn norm(self) -> f64 {
        inner(self, self).sqrt()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// Componentwise comparison with an absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// The `k = so(2)` component `a e1`.
    pub fn k_part(self) -> Self {
        Self::new(self.a, 0.0, 0.0)
    }

    /// The symmetric (`m`) component `b e2 + c e3`.
    pub fn m_part(self) -> Self {
        Self::new(0.0, self.b, self.c)
    }

    /// Matrix transpose, which negates the `e1` coefficient.
    pub fn transpose(self) -> Self {
        Self::new(-self.a, self.b, self.c)
    }
}

impl Add for AlgebraVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl AddAssign for AlgebraVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for AlgebraVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl Neg for AlgebraVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector::new(self * rhs.a, self * rhs.b, self * rhs.c)
    }
}

/// Splitting along `g = k + m` into antisymmetric and symmetric parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmSplit {
    pub k_part: AlgebraVector,
    pub m_part: AlgebraVector,
}

/// `X_k = (X - X^T)/2`, `X_m = (X + X^T)/2`.
pub fn split_km(x: AlgebraVector) -> KmSplit {
    KmSplit {
        k_part: x.k_part(),
        m_part: x.m_part(),
    }
}

/// Lie bracket. Structure constants:
/// `[e1, e2] = 2 e3`, `[e2, e3] = -2 e1`, `[e3, e1] = 2 e2`.
pub fn bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(
        -2.0 * (x.b * y.c - x.c * y.b),
        2.0 * (x.c * y.a - x.a * y.c),
        2.0 * (x.a * y.b - x.b * y.a),
    )
}

/// Left-invariant metric `tr(X^T Y) / 2`; the frame is orthonormal.
pub fn inner(x: AlgebraVector, y: AlgebraVector) -> f64 {
    x.a * y.a + x.b * y.b + x.c * y.c
}

/// Normalized Killing metric `tr(XY) / 2`, signature `(-, +, +)` on the frame.
pub fn killing(x: AlgebraVector, y: AlgebraVector) -> f64 {
    -x.a * y.a + x.b * y.b + x.c * y.c
}

/// Bi-invariance obstruction via its closed form `[X_k, Y_m] + [Y_k, X_m]`.
pub fn u_tensor(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
    bracket(x.k_part(), y.m_part()) + bracket(y.k_part(), x.m_part())
}

/// Bi-invariance obstruction from its defining identity
/// `2<U(X,Y), Z> = -<X, [Y,Z]> + <Y, [Z,X]>`, evaluated against the frame.
pub fn u_tensor_defining(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
    let coeff = |z: AlgebraVector| 0.5 * (-inner(x, bracket(y, z)) + inner(y, bracket(z, x)));
    AlgebraVector::new(
        coeff(AlgebraVector::E1),
        coeff(AlgebraVector::E2),
        coeff(AlgebraVector::E3),
    )
}

/// Levi-Civita connection on left-invariant fields, `½[X,Y] + U(X,Y)`.
pub fn levi_civita(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
    0.5 * bracket(x, y) + u_tensor(x, y)
}

/// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z`.
pub fn curvature(x: AlgebraVector, y: AlgebraVector, z: AlgebraVector) -> AlgebraVector {
    levi_civita(x, levi_civita(y, z)) - levi_civita(y, levi_civita(x, z))
        - levi_civita(bracket(x, y), z)
}

/// Curvature written through the Sasakian structure `(φ, ξ, η, g)`.
pub fn curvature_sasakian(x: AlgebraVector, y: AlgebraVector, z: AlgebraVector) -> AlgebraVector {
    let g = inner;
    let eta = contact_form;
    let xi = reeb();
    let phi = lorentz_force;
    let braced = eta(z) * eta(x) * y - eta(y) * eta(z) * x + g(z, x) * eta(y) * xi
        - g(y, z) * eta(x) * xi
        - g(y, phi(z)) * phi(x)
        - g(z, phi(x)) * phi(y)
        + 2.0 * g(x, phi(y)) * phi(z);
    -g(y, z) * x + g(z, x) * y - 2.0 * braced
}

/// Ricci tensor `Ric(Y, Z) = tr(X ↦ R(X,Y)Z)` in the frame.
pub fn ricci_tensor() -> [[f64; 3]; 3] {
    let mut ric = [[0.0; 3]; 3];
    for (i, row) in ric.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = (0..3)
                .map(|j| {
                    let ej = AlgebraVector::frame(j);
                    inner(
                        curvature(ej, AlgebraVector::frame(i), AlgebraVector::frame(k)),
                        ej,
                    )
                })
                .sum();
        }
    }
    ric
}

/// Principal Ricci curvatures `(ρ1, ρ2, ρ3)` along the frame.
pub fn ricci_principal() -> (f64, f64, f64) {
    let ric = ricci_tensor();
    (ric[0][0], ric[1][1], ric[2][2])
}

pub fn scalar_curvature() -> f64 {
    let (r1, r2, r3) = ricci_principal();
    r1 + r2 + r3
}

/// Sectional curvature `<R(X,Y)Y, X>` of the plane spanned by orthonormal `X, Y`.
pub fn sectional_curvature(x: AlgebraVector, y: AlgebraVector) -> f64 {
    inner(curvature(x, y, y), x)
}

/// Contact form `η = dθ + dx/(2y)`; at the identity it reads off the `e1` coefficient.
pub fn contact_form(x: AlgebraVector) -> f64 {
    x.a
}

/// Reeb vector field `ξ = e1`.
pub fn reeb() -> AlgebraVector {
    AlgebraVector::E1
}

/// Lorentz force of the contact magnetic field: `e1 ↦ 0`, `e2 ↦ e3`, `e3 ↦ -e2`.
pub fn lorentz_force(x: AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(0.0, -x.c, x.b)
}

/// Contact magnetic field `F = dη` on left-invariant fields, `-η([X,Y]) / 2`.
pub fn contact_magnetic_field(x: AlgebraVector, y: AlgebraVector) -> f64 {
    -0.5 * contact_form(bracket(x, y))
}

/// Moment of inertia tensor relating the metric to the Killing metric: `I(X) = X^T`.
pub fn inertia(x: AlgebraVector) -> AlgebraVector {
    x.transpose()
}

/// Angular momentum `μ = I Ω`.
pub fn momentum(omega: AlgebraVector) -> AlgebraVector {
    inertia(omega)
}

/// Element of `g ⊕ k` (with `k ≅ R` through the `e1` coefficient).
///
/// The tangent space at the identity is identified with the subspace
/// `p = {(V + W, 2W) : V ∈ m, W ∈ k}`, complementary to the diagonal `Δk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductivePair {
    pub g_part: AlgebraVector,
    pub k_part: f64,
}

impl ReductivePair {
    pub fn new(g_part: AlgebraVector, k_part: f64) -> Self {
        Self { g_part, k_part }
    }

    /// Identifies a tangent vector `X` with `(X_m - X_k, -2 X_k)` in `p`.
    pub fn from_tangent(x: AlgebraVector) -> Self {
        Self::new(x.m_part() - x.k_part(), -2.0 * x.a)
    }

    /// Velocity at the identity of the orbit `exp(s g_part) Id exp(-s k_part)`.
    pub fn to_tangent(self) -> AlgebraVector {
        self.g_part - self.k_part * AlgebraVector::E1
    }

    /// Membership in `p`: the `k` entry is twice the `e1` coefficient of the first entry.
    pub fn is_in_p(self, tol: f64) -> bool {
        let scale = self.g_part.max_abs().max(self.k_part.abs()).max(1.0);
        (self.k_part - 2.0 * self.g_part.a).abs() <= tol * scale
    }

    /// Bracket in the product algebra `g ⊕ k`; `k` is abelian.
    pub fn bracket(self, other: Self) -> Self {
        Self::new(bracket(self.g_part, other.g_part), 0.0)
    }

    /// Projection onto `p` along `Δk`, using
    /// `(X, Y) = (2X_k - Y, 2X_k - Y) + (X_m + (Y - X_k), 2(Y - X_k))`.
    pub fn project_p(self) -> Self {
        let w = self.k_part - self.g_part.a;
        Self::new(
            self.g_part.m_part() + w * AlgebraVector::E1,
            2.0 * w,
        )
    }

    /// Metric on `p` transported from the tangent space at the identity.
    pub fn inner(self, other: Self) -> f64 {
        inner(self.to_tangent(), other.to_tangent())
    }
}

/// Defect `<[X,Y]_p, Z> + <Y, [X,Z]_p>` of the naturally reductive condition.
pub fn natred_defect(
    x: ReductivePair,
    y: ReductivePair,
    z: ReductivePair,
) -> Result<f64, GeometryError> {
    if ![x, y, z].iter().all(|p| p.is_in_p(DEFAULT_TOLERANCE)) {
        return Err(GeometryError::NotInComplement);
    }
    Ok(x.bracket(y).project_p().inner(z) + y.inner(x.bracket(z).project_p()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: AlgebraVector = AlgebraVector::E1;
    const E2: AlgebraVector = AlgebraVector::E2;
    const E3: AlgebraVector = AlgebraVector::E3;

    fn commutator(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
        let (mx, my) = (x.to_matrix(), y.to_matrix());
        AlgebraVector::from_matrix(&(mx * my - my * mx)).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(E1, E2), 2.0 * E3);
        assert_eq!(bracket(E2, E3), -2.0 * E1);
        assert_eq!(bracket(E3, E1), 2.0 * E2);
        let x = AlgebraVector::new(0.3, -1.2, 2.5);
        assert_eq!(bracket(x, x), AlgebraVector::ZERO);
    }

    #[test]
    fn bracket_is_matrix_commutator_on_frame() {
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (AlgebraVector::frame(i), AlgebraVector::frame(j));
                assert_eq!(bracket(x, y), commutator(x, y));
            }
        }
        // [E,F] = H, [F,H] = 2F, [H,E] = 2E
        let (e, f, h) = (AlgebraVector::E, AlgebraVector::F, AlgebraVector::H);
        assert_eq!(bracket(e, f), h);
        assert_eq!(bracket(f, h), 2.0 * f);
        assert_eq!(bracket(h, e), 2.0 * e);
    }

    #[test]
    fn matrix_form_is_traceless_and_invertible() {
        let x = AlgebraVector::new(1.5, -0.25, 3.0);
        let m = x.to_matrix();
        assert_eq!(m[(0, 0)] + m[(1, 1)], 0.0);
        assert_eq!(AlgebraVector::from_matrix(&m).unwrap(), x);
        assert!(matches!(
            AlgebraVector::from_matrix(&Matrix2::new(1.0, 0.0, 0.0, 1.0)),
            Err(GeometryError::NotTraceless { .. })
        ));
    }

    #[test]
    fn inner_and_killing() {
        assert_eq!(inner(E1, E1), 1.0);
        assert_eq!(inner(E1, E2), 0.0);
        // (E - F)^2 = -Id, so tr/2 = -1
        let half_trace = |x: AlgebraVector| 0.5 * (x.to_matrix() * x.to_matrix()).trace();
        assert_eq!(killing(E1, E1), -1.0);
        assert_eq!(killing(E1, E1), half_trace(E1));
        assert_eq!(killing(E2, E2), half_trace(E2));
        assert_eq!(killing(E3, E3), half_trace(E3));
        assert_eq!(killing(E2, E2), 1.0);
        assert_eq!(killing(E3, E3), 1.0);
    }

    #[test]
    fn km_split_examples() {
        let s = split_km(E1);
        assert_eq!((s.k_part, s.m_part), (E1, AlgebraVector::ZERO));
        let s = split_km(AlgebraVector::H);
        assert_eq!((s.k_part, s.m_part), (AlgebraVector::ZERO, AlgebraVector::H));
        let s = split_km(AlgebraVector::E);
        assert_eq!((s.k_part, s.m_part), (0.5 * E1, 0.5 * E2));
        // matrix route: (X ∓ X^T)/2
        let m = AlgebraVector::E.to_matrix();
        let k = AlgebraVector::from_matrix(&((m - m.transpose()) * 0.5)).unwrap();
        let sym = AlgebraVector::from_matrix(&((m + m.transpose()) * 0.5)).unwrap();
        assert_eq!((k, sym), (s.k_part, s.m_part));
    }

    #[test]
    fn u_tensor_examples() {
        assert_eq!(u_tensor(E1, E2), 2.0 * E3);
        assert_eq!(u_tensor(E1, E3), -2.0 * E2);
        assert_eq!(u_tensor(E2, E3), AlgebraVector::ZERO);
        assert_eq!(u_tensor(E1 + E2, E1 + E2), 4.0 * E3);
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (AlgebraVector::frame(i), AlgebraVector::frame(j));
                assert_eq!(u_tensor(x, y), u_tensor_defining(x, y));
            }
        }
    }

    #[test]
    fn connection_table_entries() {
        assert_eq!(levi_civita(E1, E2), 3.0 * E3);
        assert_eq!(levi_civita(E1, E3), -3.0 * E2);
        assert_eq!(levi_civita(E2, E1), E3);
        assert_eq!(levi_civita(E2, E2), AlgebraVector::ZERO);
        assert_eq!(levi_civita(E2, E3), -E1);
        assert_eq!(levi_civita(E3, E1), -E2);
        assert_eq!(levi_civita(E3, E2), E1);
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(curvature(E2, E3, E2), 7.0 * E3);
        assert_eq!(curvature(E1, E2, E1), -E2);
        let x = AlgebraVector::new(0.4, 1.0, -2.0);
        assert_eq!(curvature(x, x, E3), AlgebraVector::ZERO);
        assert_eq!(curvature_sasakian(E2, E3, E2), 7.0 * E3);
    }

    #[test]
    fn ricci_values() {
        assert_eq!(ricci_principal(), (2.0, -6.0, -6.0));
        assert_eq!(scalar_curvature(), -10.0);
        let ric = ricci_tensor();
        for (i, row) in ric.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if i != k {
                    assert_eq!(*v, 0.0);
                }
            }
        }
        assert_eq!(sectional_curvature(E2, E3), -7.0);
    }

    #[test]
    fn contact_structure_examples() {
        assert_eq!(contact_form(reeb()), 1.0);
        assert_eq!(lorentz_force(lorentz_force(E2)), -E2);
        assert_eq!(lorentz_force(2.0 * E1 + 3.0 * E2), 3.0 * E3);
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (AlgebraVector::frame(i), AlgebraVector::frame(j));
                assert_eq!(contact_magnetic_field(x, y), inner(lorentz_force(x), y));
            }
        }
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(E1), -E1);
        assert_eq!(inertia(E2), E2);
        assert_eq!(inertia(E3), E3);
        let omega = AlgebraVector::new(0.7, -0.1, 2.0);
        assert_eq!(momentum(omega), AlgebraVector::new(-0.7, -0.1, 2.0));
        assert_eq!(inertia(inertia(omega)), omega);
        // <X, Y> = B(I X, Y)
        let y = AlgebraVector::new(-1.0, 0.5, 0.25);
        assert_eq!(inner(omega, y), killing(inertia(omega), y));
        // Euler-Arnold bracket [μ, μ^T] = 4A(C e2 - B e3)
        let mu = momentum(omega);
        assert!(bracket(mu, mu.transpose())
            .approx_eq(4.0 * omega.a * (omega.c * E2 - omega.b * E3), 1e-15));
    }

    #[test]
    fn reductive_pair_roundtrip_and_membership() {
        let x = AlgebraVector::new(0.3, -0.8, 1.1);
        let p = ReductivePair::from_tangent(x);
        assert!(p.is_in_p(DEFAULT_TOLERANCE));
        assert_eq!(p.to_tangent(), x);
        assert!(!ReductivePair::new(E1, 1.0).is_in_p(DEFAULT_TOLERANCE));
    }

    #[test]
    fn natred_defect_on_basis() {
        let basis = [
            ReductivePair::new(E2, 0.0),
            ReductivePair::new(E3, 0.0),
            ReductivePair::new(E1, 2.0),
        ];
        for x in basis {
            for y in basis {
                for z in basis {
                    assert!(natred_defect(x, y, z).unwrap().abs() <= 1e-14);
                }
            }
        }
        let p = ReductivePair::from_tangent(AlgebraVector::new(0.2, 0.5, -0.9));
        assert_eq!(natred_defect(p, p, p).unwrap(), 0.0);
        assert_eq!(
            natred_defect(ReductivePair::new(E1, 0.0), basis[0], basis[1]),
            Err(GeometryError::NotInComplement)
        );
    }
}
