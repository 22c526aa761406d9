//! One-parameter subgroups that are geodesics, their explicit Iwasawa
//! coordinates and projections to the hyperbolic plane, and the
//! D-homothetic deformation to Sasakian space forms with `c < -3`.
//!
//! Classification works in the orthonormal basis `E1 = √2 E`, `E2 = √2 F`,
//! `E3 = H`, where `X = A e1 + B e2 + C e3` has coefficients
//! `a = (A + B)/√2`, `b = (B - A)/√2`, `c = C`.

use std::f64::consts::SQRT_2;

use crate::algebra::{AlgebraVector, ReductivePair};
use crate::error::GeometryError;
use crate::flows::HomogeneousCurve;
use crate::group::{GroupMatrix, IwasawaCoords};

/// Coefficients in the orthonormal basis `(√2 E, √2 F, H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthonormalCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl OrthonormalCoeffs {
    pub fn from_frame(x: AlgebraVector) -> Self {
        Self {
            a: (x.a + x.b) / SQRT_2,
            b: (x.b - x.a) / SQRT_2,
            c: x.c,
        }
    }

    pub fn to_frame(self) -> AlgebraVector {
        AlgebraVector::new((self.a - self.b) / SQRT_2, (self.a + self.b) / SQRT_2, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicKind {
    /// `X` is a symmetric matrix.
    SymmetricGeodesic,
    /// `X` is a non-zero multiple of the Reeb field.
    FiberGeodesic,
    NotGeodesic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneParamClass {
    pub kind: GeodesicKind,
    pub abc: OrthonormalCoeffs,
    /// `δ = √(c² + 2b²)`.
    pub delta: f64,
}

/// Decides whether `s ↦ exp(sX)` is a geodesic through the identity.
///
/// The tests are exact: symmetric means `A = 0`, fibre means `B = C = 0`.
pub fn classify_one_param(x: AlgebraVector) -> OneParamClass {
    let abc = OrthonormalCoeffs::from_frame(x);
    let kind = if x.a == 0.0 {
        GeodesicKind::SymmetricGeodesic
    } else if x.b == 0.0 && x.c == 0.0 {
        GeodesicKind::FiberGeodesic
    } else {
        GeodesicKind::NotGeodesic
    };
    OneParamClass {
        kind,
        abc,
        delta: (abc.c * abc.c + 2.0 * abc.b * abc.b).sqrt(),
    }
}

fn admissible(x: AlgebraVector) -> Result<OneParamClass, GeometryError> {
    let class = classify_one_param(x);
    match class.kind {
        GeodesicKind::NotGeodesic => Err(GeometryError::NotGeodesic),
        _ => Ok(class),
    }
}

/// Iwasawa coordinates of `exp(sX)` for a geodesic generator `X`, from the
/// explicit formulas of each case. `θ` is returned in `(-π, π]` for the
/// symmetric case and unwrapped for the fibre case.
pub fn one_param_coords(x: AlgebraVector, s: f64) -> Result<IwasawaCoords, GeometryError> {
    let OneParamClass {
        kind,
        abc: OrthonormalCoeffs { b, c, .. },
        delta,
    } = admissible(x)?;
    match kind {
        GeodesicKind::FiberGeodesic => IwasawaCoords::new(0.0, 1.0, -SQRT_2 * b * s),
        _ if b == 0.0 => IwasawaCoords::new(0.0, (2.0 * c * s).exp(), 0.0),
        _ => {
            // δ cosh t - c sinh t = ((δ - c) e^t + (δ + c) e^-t) / 2, with
            // (δ - c)(δ + c) = 2b² used to avoid cancellation when |c| ≈ δ
            let (minus, plus) = if c > 0.0 {
                (2.0 * b * b / (delta + c), delta + c)
            } else {
                (delta - c, 2.0 * b * b / (delta - c))
            };
            let blend = |t: f64| 0.5 * (minus * t.exp() + plus * (-t).exp());
            let t = 2.0 * delta * s;
            let denom = blend(t);
            // θ from δ e^{iθ} ∝ (δ cosh δs - c sinh δs) - i b√2 sinh δs
            let theta = (-b * SQRT_2 * (delta * s).sinh()).atan2(blend(delta * s));
            IwasawaCoords::new(b * SQRT_2 * t.sinh() / denom, delta / denom, theta)
        }
    }
}

/// Image of a geodesic one-parameter subgroup under `(x, y, θ) ↦ (x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectedLocus {
    Circle { center_x: f64, radius: f64 },
    /// The half-line `x = 0, y > 0`.
    VerticalLine,
    /// The single point `(0, 1)`.
    Point,
}

impl ProjectedLocus {
    /// How far `(x, y)` is from lying on the locus.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        match *self {
            ProjectedLocus::Circle { center_x, radius } => {
                ((x - center_x).powi(2) + y * y - radius * radius).abs()
            }
            ProjectedLocus::VerticalLine => x.abs(),
            ProjectedLocus::Point => x.abs().max((y - 1.0).abs()),
        }
    }
}

pub fn projected_locus(x: AlgebraVector) -> Result<ProjectedLocus, GeometryError> {
    let OneParamClass {
        kind,
        abc: OrthonormalCoeffs { b, c, .. },
        delta,
    } = admissible(x)?;
    Ok(match kind {
        GeodesicKind::FiberGeodesic => ProjectedLocus::Point,
        _ if b == 0.0 => ProjectedLocus::VerticalLine,
        _ => ProjectedLocus::Circle {
            center_x: c / (b * SQRT_2),
            radius: delta / (b.abs() * SQRT_2),
        },
    })
}

/// Coefficients of the D-homothetic deformation to holomorphic sectional
/// curvature `c`. The deformed metric is `metric_scale` times the original
/// on `m` and `metric_scale²` on the Reeb direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedStructure {
    pub c: f64,
    /// `-4/(c+3)`.
    pub metric_scale: f64,
    /// `4(c+7)/(c+3)²`.
    pub eta_weight: f64,
    /// `4/(c+3)`, the factor on `X_k` inside the subgroup exponent.
    pub geo_k_scale: f64,
    /// `(c-1)/(c+3)`, the fibre rotation rate per unit `X_k`.
    pub reeb_k_rate: f64,
}

pub fn deform(c: f64) -> Result<DeformedStructure, GeometryError> {
    if c >= -3.0 || !c.is_finite() {
        return Err(GeometryError::InvalidCurvature { c });
    }
    let d = c + 3.0;
    Ok(DeformedStructure {
        c,
        metric_scale: -4.0 / d,
        eta_weight: 4.0 * (c + 7.0) / (d * d),
        geo_k_scale: 4.0 / d,
        reeb_k_rate: (c - 1.0) / d,
    })
}

impl DeformedStructure {
    /// Deformed Reeb field `ξ̄ = ξ / metric_scale`.
    pub fn reeb(&self) -> AlgebraVector {
        (1.0 / self.metric_scale) * AlgebraVector::E1
    }

    /// Rotation rate of `(B, C)` in the deformed reduced equations is
    /// `precession · A - q`.
    pub fn precession(&self) -> f64 {
        2.0 * self.reeb_k_rate
    }

    /// `exp(s(X_m + α X_k)) · exp(s β X_k)`.
    pub fn geodesic_curve(&self, x: AlgebraVector) -> HomogeneousCurve {
        HomogeneousCurve::new(
            x.m_part() + self.geo_k_scale * x.k_part(),
            self.reeb_k_rate * x.a,
            0.0,
        )
    }

    /// Deformed geodesic through `X` times `exp(s q/2 ξ̄)`.
    pub fn charged_product_curve(&self, x: AlgebraVector, q: f64) -> HomogeneousCurve {
        HomogeneousCurve {
            charge_rate: q / (2.0 * self.metric_scale),
            ..self.geodesic_curve(x)
        }
    }

    /// Trajectory with initial velocity `X`: the charged product built on
    /// `X - (q/2) ξ̄`.
    pub fn magnetic_curve(&self, x: AlgebraVector, q: f64) -> HomogeneousCurve {
        self.charged_product_curve(x - 0.5 * q * self.reeb(), q)
    }

    /// Element of the deformed reductive complement `p_c` attached to `X`.
    pub fn complement_pair(&self, x: AlgebraVector) -> ReductivePair {
        ReductivePair::new(
            x.m_part() + self.geo_k_scale * x.k_part(),
            -self.reeb_k_rate * x.a,
        )
    }

    /// `p_c = {(V + W, -((c-1)/4) W) : V ∈ m, W ∈ k}`.
    pub fn is_in_complement(&self, pair: ReductivePair, tol: f64) -> bool {
        let scale = pair.g_part.max_abs().max(pair.k_part.abs()).max(1.0);
        (pair.k_part + (self.c - 1.0) / 4.0 * pair.g_part.a).abs() <= tol * scale
    }
}

fn nonzero(x: AlgebraVector) -> Result<(), GeometryError> {
    if x == AlgebraVector::ZERO {
        Err(GeometryError::ZeroVelocity)
    } else {
        Ok(())
    }
}

/// Geodesic from the identity with initial velocity `X` in the space form
/// of holomorphic sectional curvature `c`.
pub fn deformed_geodesic(c: f64, x: AlgebraVector, s: f64) -> Result<GroupMatrix, GeometryError> {
    let d = deform(c)?;
    nonzero(x)?;
    Ok(d.geodesic_curve(x).at(s))
}

/// Contact magnetic trajectory with initial velocity `X` and charge `q` in
/// the deformed structure.
pub fn deformed_magnetic(
    c: f64,
    x: AlgebraVector,
    q: f64,
    s: f64,
) -> Result<GroupMatrix, GeometryError> {
    let d = deform(c)?;
    nonzero(x)?;
    Ok(d.magnetic_curve(x, q).at(s))
}

/// The literal product of the deformed geodesic through `X` with the
/// deformed charged Reeb flow.
pub fn deformed_charged_product(
    c: f64,
    x: AlgebraVector,
    q: f64,
    s: f64,
) -> Result<GroupMatrix, GeometryError> {
    let d = deform(c)?;
    nonzero(x)?;
    Ok(d.charged_product_curve(x, q).at(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::u_tensor;
    use crate::flows::{geodesic, lorentz_residual_with, magnetic, sample_curve};
    use crate::group::{exp_algebra, iwasawa};

    const E1: AlgebraVector = AlgebraVector::E1;
    const E2: AlgebraVector = AlgebraVector::E2;
    const H: AlgebraVector = AlgebraVector::H;

    #[test]
    fn basis_bridge_round_trip() {
        let x = AlgebraVector::new(0.3, -1.1, 2.0);
        assert!(OrthonormalCoeffs::from_frame(x).to_frame().approx_eq(x, 1e-15));
        let e = OrthonormalCoeffs::from_frame(AlgebraVector::E);
        assert!((e.a - 1.0 / SQRT_2).abs() <= 1e-16 && e.b == 0.0 && e.c == 0.0);
    }

    #[test]
    fn classify_examples() {
        let h = classify_one_param(H);
        assert_eq!(h.kind, GeodesicKind::SymmetricGeodesic);
        assert_eq!(h.delta, 1.0);
        let f = classify_one_param(E1);
        assert_eq!(f.kind, GeodesicKind::FiberGeodesic);
        assert_eq!(f.abc.a, -f.abc.b);
        assert_eq!(classify_one_param(AlgebraVector::E).kind, GeodesicKind::NotGeodesic);
        assert_ne!(u_tensor(AlgebraVector::E, AlgebraVector::E), AlgebraVector::ZERO);
    }

    #[test]
    fn one_param_coords_examples() {
        for s in [-1.5, 0.0, 0.4, 2.0] {
            let p = one_param_coords(E2, s).unwrap();
            assert!((p.x() - (2.0 * s).tanh()).abs() <= 1e-15);
            assert!((p.y() - 1.0 / (2.0 * s).cosh()).abs() <= 1e-15);
            assert!((p.theta() + s.tanh().atan()).abs() <= 1e-15);

            let p = one_param_coords(H, s).unwrap();
            assert_eq!((p.x(), p.y(), p.theta()), (0.0, (2.0 * s).exp(), 0.0));

            let p = one_param_coords(E1, s).unwrap();
            assert_eq!((p.x(), p.y()), (0.0, 1.0));
            assert!((p.theta() - s).abs() <= 1e-15);
        }
        assert_eq!(
            one_param_coords(AlgebraVector::E, 1.0),
            Err(GeometryError::NotGeodesic)
        );
    }

    #[test]
    fn one_param_coords_match_exponential() {
        let cases = [
            AlgebraVector::new(0.0, 0.7, -1.3),
            AlgebraVector::new(0.0, -2.0, 0.5),
            AlgebraVector::new(0.0, 0.0, -0.8),
            AlgebraVector::new(-2.5, 0.0, 0.0),
        ];
        for x in cases {
            for s in [-3.0, -0.7, 0.3, 2.9] {
                let lhs = one_param_coords(x, s).unwrap();
                let rhs = iwasawa(&exp_algebra(x, s));
                assert!(lhs.distance_mod_2pi(&rhs) <= 1e-9, "{x:?} s={s}");
            }
        }
    }

    #[test]
    fn projected_locus_examples() {
        let x = OrthonormalCoeffs {
            a: 1.0 / SQRT_2,
            b: 1.0 / SQRT_2,
            c: 1.0,
        }
        .to_frame();
        match projected_locus(x).unwrap() {
            ProjectedLocus::Circle { center_x, radius } => {
                assert!((center_x - 1.0).abs() <= 1e-15);
                assert!((radius - SQRT_2).abs() <= 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(projected_locus(H).unwrap(), ProjectedLocus::VerticalLine);
        assert_eq!(projected_locus(E1).unwrap(), ProjectedLocus::Point);
        assert!(projected_locus(AlgebraVector::E).is_err());
    }

    #[test]
    fn projected_points_lie_on_locus() {
        for x in [E2, AlgebraVector::new(0.0, 0.7, -1.3), H, 3.0 * E1] {
            let locus = projected_locus(x).unwrap();
            for s in [-2.0, -0.3, 0.0, 1.1, 2.5] {
                let p = one_param_coords(x, s).unwrap();
                assert!(locus.residual(p.x(), p.y()) <= 1e-9);
            }
        }
    }

    #[test]
    fn deform_examples() {
        let d = deform(-7.0).unwrap();
        assert_eq!(
            (d.metric_scale, d.eta_weight, d.geo_k_scale, d.reeb_k_rate),
            (1.0, 0.0, -1.0, 2.0)
        );
        let d = deform(-4.0).unwrap();
        assert_eq!((d.geo_k_scale, d.reeb_k_rate), (-4.0, 5.0));
        for c in [-3.0, 0.0, 5.0, f64::NAN] {
            assert!(matches!(deform(c), Err(GeometryError::InvalidCurvature { .. })));
        }
    }

    #[test]
    fn deformation_fixed_point() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        for s in [0.0, 0.7, 4.0] {
            assert_eq!(deformed_geodesic(-7.0, x, s).unwrap(), geodesic(x, s));
            assert_eq!(deformed_magnetic(-7.0, x, 1.3, s).unwrap(), magnetic(x, 1.3, s));
        }
    }

    #[test]
    fn horizontal_generators_ignore_deformation() {
        let x = AlgebraVector::new(0.0, 0.4, -0.9);
        for c in [-3.5, -10.0, -100.0] {
            for s in [0.3, 1.7] {
                let g = deformed_geodesic(c, x, s).unwrap();
                assert!(g.max_abs_diff(&exp_algebra(x, s)) <= 1e-14);
            }
        }
    }

    #[test]
    fn deformed_curves_solve_deformed_reduced_system() {
        let x = AlgebraVector::new(0.6, -0.3, 0.45);
        for c in [-3.5, -5.0, -12.0] {
            let d = deform(c).unwrap();
            for (curve, q) in [
                (d.geodesic_curve(x), 0.0),
                (d.magnetic_curve(x, 1.4), 1.4),
                (d.charged_product_curve(x, -0.8), -0.8),
            ] {
                let path = sample_curve(&curve, 0.0, 5.0, 5001).unwrap();
                assert!(lorentz_residual_with(&path, d.precession(), q) <= 1e-6);
            }
            assert!(d.magnetic_curve(x, 1.4).initial_velocity().approx_eq(x, 1e-14));
        }
    }

    #[test]
    fn deformed_complement_reduces_at_fixed_point() {
        let d = deform(-7.0).unwrap();
        let x = AlgebraVector::new(0.8, -0.1, 0.6);
        let pair = d.complement_pair(x);
        assert_eq!(pair, ReductivePair::from_tangent(x));
        assert!(pair.is_in_p(1e-15));
        for c in [-4.0, -9.0] {
            let d = deform(c).unwrap();
            assert!(d.is_in_complement(d.complement_pair(x), 1e-14));
            assert!(!d.is_in_complement(ReductivePair::new(x, 0.0), 1e-6));
        }
    }

    #[test]
    fn deformed_operations_reject_bad_input() {
        assert!(deformed_geodesic(-3.0, E1, 1.0).is_err());
        assert!(deformed_magnetic(-2.0, E1, 1.0, 1.0).is_err());
        assert_eq!(
            deformed_geodesic(-5.0, AlgebraVector::ZERO, 1.0),
            Err(GeometryError::ZeroVelocity)
        );
    }
}
