//! Geodesics and contact magnetic trajectories starting at the identity.
//!
//! A curve `γ` is described through its angular velocity `Ω = γ⁻¹γ'`, whose
//! frame coefficients `(A, B, C)` obey the magnetized Euler-Arnold system
//!
//! ```text
//! A' = 0,   B' = (4A - q) C,   C' = -(4A - q) B.
//! ```
//!
//! Solutions are products of a homogeneous geodesic with a rotation along
//! the fibre (the charged Reeb flow). The closed forms here are checked
//! against [`reconstruct`], which integrates `γ' = γΩ` directly.

use nalgebra::Matrix2;

use crate::algebra::{bracket, inertia, lorentz_force, AlgebraVector};
use crate::error::GeometryError;
use crate::group::{
    adjoint_rotation, exp_algebra, exp_rotation, iwasawa, unwrap_angle, GroupMatrix,
    IwasawaCoords,
};

/// Precession coefficient `κ` in `B' = (κA - q) C` for the standard metric.
pub const STANDARD_PRECESSION: f64 = 4.0;

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Frame coefficients of the angular velocity. `A` and `B² + C²` are
/// first integrals of the reduced equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ReducedState {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn to_vector(self) -> AlgebraVector {
        AlgebraVector::new(self.a, self.b, self.c)
    }
}

impl From<AlgebraVector> for ReducedState {
    fn from(v: AlgebraVector) -> Self {
        Self::new(v.a, v.b, v.c)
    }
}

/// Angular velocity of a curve given in Iwasawa coordinates with
/// coordinate velocity `(ẋ, ẏ, θ̇)`.
pub fn coeffs_from_velocity(
    at: &IwasawaCoords,
    xdot: f64,
    ydot: f64,
    thetadot: f64,
) -> ReducedState {
    let (u, v) = (xdot / (2.0 * at.y()), ydot / (2.0 * at.y()));
    let (sin, cos) = (2.0 * at.theta()).sin_cos();
    ReducedState::new(thetadot + u, u * cos + v * sin, -u * sin + v * cos)
}

/// Closed-form solution of the reduced equations with charge `q`.
pub fn solve_reduced(q: f64, init: ReducedState, s: f64) -> ReducedState {
    solve_reduced_with(STANDARD_PRECESSION, q, init, s)
}

/// Solution of `A' = 0, B' = (κA - q)C, C' = -(κA - q)B`.
pub fn solve_reduced_with(precession: f64, q: f64, init: ReducedState, s: f64) -> ReducedState {
    let (sin, cos) = ((precession * init.a - q) * s).sin_cos();
    ReducedState::new(
        init.a,
        init.b * cos + init.c * sin,
        init.c * cos - init.b * sin,
    )
}

/// Right-hand side `Ω'` of the magnetized Euler-Arnold equation
/// `μ' = [μ, μᵀ] + q φ μ`, with `μ = I Ω` and `I` the transpose.
pub fn magnetized_euler_arnold(omega: AlgebraVector, q: f64) -> AlgebraVector {
    let mu = inertia(omega);
    inertia(bracket(mu, mu.transpose()) + q * lorentz_force(mu))
}

/// Curves `exp(sW) · exp(s r e1) · exp(s ρ e1)`: a one-parameter subgroup
/// followed by two fibre rotations (the geodesic part and the charge part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousCurve {
    pub generator: AlgebraVector,
    pub fiber_rate: f64,
    pub charge_rate: f64,
}

impl HomogeneousCurve {
    pub fn new(generator: AlgebraVector, fiber_rate: f64, charge_rate: f64) -> Self {
        Self {
            generator,
            fiber_rate,
            charge_rate,
        }
    }

    /// Geodesic with initial velocity `X`: `exp(s(X_m - X_k)) exp(2s X_k)`.
    pub fn geodesic(x: AlgebraVector) -> Self {
        Self::new(x.m_part() - x.k_part(), 2.0 * x.a, 0.0)
    }

    /// Homogeneous geodesic `γ_X` times the charged Reeb flow `exp(s q/2 ξ)`.
    /// Its initial velocity is `X + (q/2) ξ`.
    pub fn charged_product(x: AlgebraVector, q: f64) -> Self {
        Self {
            charge_rate: 0.5 * q,
            ..Self::geodesic(x)
        }
    }

    /// Contact magnetic trajectory with initial velocity `X` and charge `q`.
    pub fn magnetic(x: AlgebraVector, q: f64) -> Self {
        Self::charged_product(x - 0.5 * q * AlgebraVector::E1, q)
    }

    /// `exp(sW) exp(-s u e1)`.
    pub fn one_parameter(w: AlgebraVector, u: f64) -> Self {
        Self::new(w, -u, 0.0)
    }

    pub fn at(&self, s: f64) -> GroupMatrix {
        exp_algebra(self.generator, s)
            * exp_rotation(self.fiber_rate, s)
            * exp_rotation(self.charge_rate, s)
    }

    /// `Ω(s) = Ad(exp(-s r e1)) W + r e1`, with `r` the total fibre rate.
    pub fn angular_velocity(&self, s: f64) -> AlgebraVector {
        let r = self.fiber_rate + self.charge_rate;
        adjoint_rotation(-r, s, self.generator) + r * AlgebraVector::E1
    }

    pub fn initial_velocity(&self) -> AlgebraVector {
        self.angular_velocity(0.0)
    }
}

/// Geodesic from the identity with initial velocity `X`:
/// `γ_X(s) = exp(s(-X_k + X_m)) · exp(2s X_k)`.
pub fn geodesic(x: AlgebraVector, s: f64) -> GroupMatrix {
    exp_algebra(x.m_part() - x.k_part(), s) * exp_rotation(2.0 * x.a, s)
}

/// The product `γ_X(s) · exp(s q/2 ξ)` of a homogeneous geodesic with the
/// charged Reeb flow. It solves the Lorentz equation with charge `q`; its
/// initial velocity is `X + (q/2) ξ`.
pub fn charged_product(x: AlgebraVector, q: f64, s: f64) -> GroupMatrix {
    geodesic(x, s) * exp_rotation(0.5 * q, s)
}

/// Contact magnetic trajectory from the identity with initial velocity `X`
/// and charge `q`. It is the charged product built on the geodesic with
/// initial velocity `X - (q/2) ξ`.
pub fn magnetic(x: AlgebraVector, q: f64, s: f64) -> GroupMatrix {
    charged_product(x - 0.5 * q * AlgebraVector::E1, q, s)
}

/// Angle `σ` between `X` and the Reeb field, `cos σ = A / |X|`.
pub fn contact_angle(x: AlgebraVector) -> Result<f64, GeometryError> {
    let n = x.norm();
    if n == 0.0 {
        return Err(GeometryError::ZeroVelocity);
    }
    Ok((x.a / n).clamp(-1.0, 1.0).acos())
}

/// Initial data and sampling grid of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySpec {
    pub velocity: AlgebraVector,
    pub charge: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n_samples: usize,
}

impl TrajectorySpec {
    pub fn new(
        velocity: AlgebraVector,
        charge: f64,
        s_min: f64,
        s_max: f64,
        n_samples: usize,
    ) -> Result<Self, GeometryError> {
        let spec = Self {
            velocity,
            charge,
            s_min,
            s_max,
            n_samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let invalid = |msg: &str| Err(GeometryError::InvalidTrajectory(msg.to_string()));
        if self.n_samples < 2 {
            return invalid("need at least 2 samples");
        }
        if !(self.s_min.is_finite() && self.s_max.is_finite()) || self.s_min >= self.s_max {
            return invalid("s_min must be less than s_max");
        }
        if !self.charge.is_finite() || self.velocity.to_array().iter().any(|v| !v.is_finite()) {
            return invalid("non-finite velocity or charge");
        }
        if self.velocity == AlgebraVector::ZERO {
            return Err(GeometryError::ZeroVelocity);
        }
        Ok(())
    }

    /// Arclength of sample `i`.
    pub fn sample_s(&self, i: usize) -> f64 {
        if i + 1 == self.n_samples {
            self.s_max
        } else {
            self.s_min + (self.s_max - self.s_min) * i as f64 / (self.n_samples - 1) as f64
        }
    }

    pub fn step(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_samples - 1) as f64
    }
}

/// One point of a sampled trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub g: GroupMatrix,
    /// Iwasawa coordinates with `θ` unwrapped along the path.
    pub coords: IwasawaCoords,
    /// `θ` reduced to `(-π, π]`.
    pub theta_wrapped: f64,
    pub omega: AlgebraVector,
}

/// Ordered samples of a curve, strictly increasing in `s`, with continuous `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    samples: Vec<Sample>,
}

impl SampledPath {
    /// Builds a path from `(s, g, Ω)` triples, unwrapping `θ` as it goes.
    pub fn from_points(
        points: impl IntoIterator<Item = (f64, GroupMatrix, AlgebraVector)>,
    ) -> Result<Self, GeometryError> {
        let mut samples: Vec<Sample> = Vec::new();
        for (s, g, omega) in points {
            let raw = iwasawa(&g);
            let theta = match samples.last() {
                Some(prev) => {
                    if s <= prev.s {
                        return Err(GeometryError::InvalidTrajectory(
                            "sample positions must be strictly increasing".into(),
                        ));
                    }
                    unwrap_angle(prev.coords.theta(), raw.theta())
                }
                None => raw.theta(),
            };
            samples.push(Sample {
                s,
                g,
                coords: raw.with_theta(theta),
                theta_wrapped: raw.theta(),
                omega,
            });
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `max |det g - 1|` over the samples.
    pub fn det_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|p| (p.g.det() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn spread(&self, f: impl Fn(&Sample) -> f64) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if self.samples.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Spread of the frame norm `|Ω|` along the path.
    pub fn speed_drift(&self) -> f64 {
        self.spread(|p| p.omega.norm())
    }

    /// Spread of the contact angle of `Ω` along the path.
    pub fn contact_angle_drift(&self) -> f64 {
        self.spread(|p| contact_angle(p.omega).unwrap_or(0.0))
    }

    /// Largest jump of the unwrapped `θ` between neighbours.
    pub fn max_theta_jump(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].coords.theta() - w[0].coords.theta()).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples a closed-form curve, with `Ω` taken from its product structure.
pub fn sample_curve(
    curve: &HomogeneousCurve,
    s_min: f64,
    s_max: f64,
    n_samples: usize,
) -> Result<SampledPath, GeometryError> {
    let grid = TrajectorySpec {
        velocity: AlgebraVector::E1,
        charge: 0.0,
        s_min,
        s_max,
        n_samples,
    };
    grid.validate()?;
    SampledPath::from_points((0..n_samples).map(|i| {
        let s = grid.sample_s(i);
        (s, curve.at(s), curve.angular_velocity(s))
    }))
}

/// Samples the closed-form magnetic trajectory described by `spec`.
pub fn sample_magnetic(spec: &TrajectorySpec) -> Result<SampledPath, GeometryError> {
    spec.validate()?;
    let curve = HomogeneousCurve::magnetic(spec.velocity, spec.charge);
    sample_curve(&curve, spec.s_min, spec.s_max, spec.n_samples)
}

/// Lie-group integrators for `γ' = γΩ`. Both advance by right
/// multiplication with a group exponential, so iterates stay in SL(2,R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Fourth-order Magnus step with two Gauss-Legendre nodes.
    #[default]
    Magnus4,
    /// Exponential midpoint rule `γ ← γ exp(h Ω(s + h/2))`, second order.
    Midpoint,
}

impl Integrator {
    fn increment(self, omega: &impl Fn(f64) -> AlgebraVector, s: f64, h: f64) -> AlgebraVector {
        match self {
            Integrator::Midpoint => h * omega(s + 0.5 * h),
            Integrator::Magnus4 => {
                let offset = 3f64.sqrt() / 6.0;
                let w1 = omega(s + (0.5 - offset) * h);
                let w2 = omega(s + (0.5 + offset) * h);
                // right-multiplied flow: the commutator enters as [Ω1, Ω2]
                (0.5 * h) * (w1 + w2) + (3f64.sqrt() / 12.0 * h * h) * bracket(w1, w2)
            }
        }
    }
}

struct Stepper<F> {
    omega: F,
    integrator: Integrator,
    g: Matrix2<f64>,
}

impl<F: Fn(f64) -> AlgebraVector> Stepper<F> {
    fn advance(&mut self, s: f64, h: f64) -> Result<(), GeometryError> {
        let inc = self.integrator.increment(&self.omega, s, h);
        let next = self.g * exp_algebra(inc, 1.0).matrix();
        let candidate = GroupMatrix::from_matrix_unchecked(next);
        let det = candidate.det();
        let scale = 0.5 * next.norm_squared();
        if !det.is_finite() || det <= 0.0 || (det - 1.0).abs() > 1e-6 * scale {
            return Err(GeometryError::StepCollapsed { s: s + h, det });
        }
        self.g = *GroupMatrix::reprojected(next).matrix();
        Ok(())
    }
}

/// Integrates `γ' = γΩ` from `γ(0) = Id`, with `Ω(s)` the closed-form
/// solution of the reduced equations for `spec.velocity` and `spec.charge`.
pub fn reconstruct(spec: &TrajectorySpec) -> Result<SampledPath, GeometryError> {
    reconstruct_with(spec, Integrator::default())
}

pub fn reconstruct_with(
    spec: &TrajectorySpec,
    integrator: Integrator,
) -> Result<SampledPath, GeometryError> {
    spec.validate()?;
    let init = ReducedState::from(spec.velocity);
    let q = spec.charge;
    let omega = move |s: f64| solve_reduced(q, init, s).to_vector();
    let mut stepper = Stepper {
        omega,
        integrator,
        g: Matrix2::identity(),
    };

    // carry the curve from s = 0 to the start of the window
    if spec.s_min != 0.0 {
        let n = (spec.s_min.abs() / spec.step()).ceil().max(1.0) as usize;
        let h = spec.s_min / n as f64;
        for i in 0..n {
            stepper.advance(i as f64 * h, h)?;
        }
    }

    let mut points = Vec::with_capacity(spec.n_samples);
    let s0 = spec.sample_s(0);
    points.push((s0, GroupMatrix::from_matrix_unchecked(stepper.g), (stepper.omega)(s0)));
    for i in 1..spec.n_samples {
        let (prev, s) = (spec.sample_s(i - 1), spec.sample_s(i));
        stepper.advance(prev, s - prev)?;
        points.push((s, GroupMatrix::from_matrix_unchecked(stepper.g), (stepper.omega)(s)));
    }
    SampledPath::from_points(points)
}

/// Central-difference derivative of the sampled `Ω`; fourth order when
/// the path has at least five samples, second order otherwise.
fn omega_derivatives(path: &SampledPath) -> Vec<(usize, AlgebraVector)> {
    let p = path.samples();
    let n = p.len();
    if n >= 5 {
        (2..n - 2)
            .map(|i| {
                let h = (p[i + 2].s - p[i - 2].s) / 4.0;
                let d = (p[i - 2].omega - 8.0 * p[i - 1].omega + 8.0 * p[i + 1].omega
                    - p[i + 2].omega)
                    .to_array()
                    .map(|v| v / (12.0 * h));
                (i, AlgebraVector::from_array(d))
            })
            .collect()
    } else if n >= 3 {
        (1..n - 1)
            .map(|i| {
                let h = p[i + 1].s - p[i - 1].s;
                let d = (p[i + 1].omega - p[i - 1].omega).to_array().map(|v| v / h);
                (i, AlgebraVector::from_array(d))
            })
            .collect()
    } else {
        Vec::new()
    }
}

/// Largest violation of the magnetized Euler-Arnold equation with charge
/// `q` over the interior samples, `max |Ω' - (μ' = [μ, μᵀ] + qφμ)|`.
pub fn lorentz_residual(path: &SampledPath, q: f64) -> f64 {
    let p = path.samples();
    omega_derivatives(path)
        .into_iter()
        .map(|(i, d)| (d - magnetized_euler_arnold(p[i].omega, q)).norm())
        .fold(0.0, f64::max)
}

/// Same residual for the reduced system with precession coefficient `κ`:
/// `|(A', B' - (κA - q)C, C' + (κA - q)B)|`.
pub fn lorentz_residual_with(path: &SampledPath, precession: f64, q: f64) -> f64 {
    let p = path.samples();
    omega_derivatives(path)
        .into_iter()
        .map(|(i, d)| {
            let w = p[i].omega;
            let rate = precession * w.a - q;
            (d - AlgebraVector::new(0.0, rate * w.c, -rate * w.b)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{from_coords, wrap_angle};
    use std::f64::consts::PI;

    const E1: AlgebraVector = AlgebraVector::E1;
    const E2: AlgebraVector = AlgebraVector::E2;

    fn coords(x: f64, y: f64, t: f64) -> IwasawaCoords {
        IwasawaCoords::new(x, y, t).unwrap()
    }

    #[test]
    fn coeffs_from_velocity_examples() {
        let o = coords(0.0, 1.0, 0.0);
        assert_eq!(coeffs_from_velocity(&o, 0.0, 0.0, 1.0), ReducedState::new(1.0, 0.0, 0.0));
        assert_eq!(coeffs_from_velocity(&o, 2.0, 0.0, -1.0), ReducedState::new(0.0, 1.0, 0.0));
        assert_eq!(coeffs_from_velocity(&o, 0.0, 2.0, 0.0), ReducedState::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn coeffs_match_group_angular_velocity() {
        // curve t ↦ (0.3 + 0.5t, 1.2 + 0.4t², 0.7 - 0.9t); Ω = γ⁻¹γ' by central differences
        let curve = |t: f64| coords(0.3 + 0.5 * t, 1.2 + 0.4 * t * t, 0.7 - 0.9 * t);
        let (t, h) = (0.4, 1e-5);
        let g = from_coords(&curve(t));
        let dg = (from_coords(&curve(t + h)).matrix() - from_coords(&curve(t - h)).matrix())
            / (2.0 * h);
        let omega = AlgebraVector::traceless_part(&(g.inverse().matrix() * dg));
        let r = coeffs_from_velocity(&curve(t), 0.5, 0.8 * t, -0.9).to_vector();
        assert!(omega.approx_eq(r, 1e-9), "{omega:?} vs {r:?}");
    }

    #[test]
    fn solve_reduced_examples() {
        let sigma = 0.6f64;
        let init = ReducedState::new(sigma.cos(), 0.4, -0.3);
        let s = 1.7;
        let w = 4.0 * s * sigma.cos();
        let r = solve_reduced(0.0, init, s);
        assert_eq!(r.a, sigma.cos());
        assert!((r.b - (0.4 * w.cos() - 0.3 * w.sin())).abs() <= 1e-15);
        assert!((r.c - (-0.3 * w.cos() - 0.4 * w.sin())).abs() <= 1e-15);

        let init = ReducedState::new(0.25, 1.0, 2.0);
        assert_eq!(solve_reduced(1.0, init, 3.3), init);
        let init = ReducedState::new(0.0, 1.0, 2.0);
        assert_eq!(solve_reduced(0.0, init, 3.3), init);
    }

    #[test]
    fn reduced_solution_satisfies_euler_arnold() {
        let init = ReducedState::new(0.3, -0.7, 0.2);
        let (q, s, h) = (1.3, 0.9, 1e-5);
        let d = (solve_reduced(q, init, s + h).to_vector()
            - solve_reduced(q, init, s - h).to_vector())
        .to_array()
        .map(|v| v / (2.0 * h));
        let rhs = magnetized_euler_arnold(solve_reduced(q, init, s).to_vector(), q);
        assert!(AlgebraVector::from_array(d).approx_eq(rhs, 1e-9));
    }

    #[test]
    fn geodesic_examples() {
        for s in [0.5, 1.0, 2.0] {
            let g = geodesic(E1, s);
            assert!(g.max_abs_diff(&exp_rotation(1.0, s)) <= 1e-15);
            let g = geodesic(E2, s);
            let e = [s.cosh(), s.sinh(), s.sinh(), s.cosh()];
            assert!(g.entries().iter().zip(e).all(|(a, b)| (a - b).abs() <= 1e-14));
            let g = geodesic(AlgebraVector::H, s);
            let e = [s.exp(), 0.0, 0.0, (-s).exp()];
            assert!(g.entries().iter().zip(e).all(|(a, b)| (a - b).abs() <= 1e-14));
        }
        assert_eq!(geodesic(AlgebraVector::new(0.3, 1.0, 2.0), 0.0), GroupMatrix::identity());
    }

    #[test]
    fn magnetic_reduces_to_geodesic_at_zero_charge() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        for s in [0.1, 1.0, 5.0] {
            assert_eq!(magnetic(x, 0.0, s), geodesic(x, s));
            assert_eq!(HomogeneousCurve::magnetic(x, 0.0).at(s), geodesic(x, s));
        }
    }

    #[test]
    fn reeb_flow_under_charge() {
        for q in [-3.0, 0.5, 2.0] {
            for s in [0.3, 2.0] {
                // the charged product built on ξ turns at rate 1 + q/2
                let g = charged_product(E1, q, s);
                assert!(g.max_abs_diff(&exp_rotation(1.0 + 0.5 * q, s)) <= 1e-14);
                // the trajectory that starts along ξ ignores the field
                assert!(magnetic(E1, q, s).max_abs_diff(&exp_rotation(1.0, s)) <= 1e-14);
                assert!(magnetic((1.0 + 0.5 * q) * E1, q, s)
                    .max_abs_diff(&exp_rotation(1.0 + 0.5 * q, s))
                    <= 1e-14);
            }
        }
    }

    #[test]
    fn homogeneous_curve_matches_named_closed_forms() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        let q = 1.7;
        for s in [0.0, 0.4, 3.0] {
            assert_eq!(HomogeneousCurve::magnetic(x, q).at(s), magnetic(x, q, s));
            assert_eq!(HomogeneousCurve::charged_product(x, q).at(s), charged_product(x, q, s));
        }
        assert!(HomogeneousCurve::magnetic(x, q).initial_velocity().approx_eq(x, 1e-15));
        assert!(HomogeneousCurve::charged_product(x, q)
            .initial_velocity()
            .approx_eq(x + 0.5 * q * E1, 1e-15));
    }

    #[test]
    fn angular_velocity_of_curve_matches_group_derivative() {
        let curve = HomogeneousCurve::magnetic(AlgebraVector::new(-0.4, 1.1, 0.6), 2.3);
        let (s, h) = (1.3, 1e-5);
        let dg = (curve.at(s + h).matrix() - curve.at(s - h).matrix()) / (2.0 * h);
        let omega = AlgebraVector::traceless_part(&(curve.at(s).inverse().matrix() * dg));
        assert!(omega.approx_eq(curve.angular_velocity(s), 1e-9));
    }

    #[test]
    fn initial_velocity_by_finite_differences() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        let h = 1e-6;
        for q in [0.0, 1.7, -4.0] {
            let d = (magnetic(x, q, h).matrix() - magnetic(x, q, -h).matrix()) / (2.0 * h);
            let v = AlgebraVector::traceless_part(&d);
            assert!(v.approx_eq(x, 1e-6), "q = {q}: {v:?}");
        }
    }

    #[test]
    fn magnetic_matches_reconstruction_generic() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        let q = 1.7;
        let spec = TrajectorySpec::new(x, q, 0.0, 10.0, 10_001).unwrap();
        let path = reconstruct(&spec).unwrap();
        let err = path
            .samples()
            .iter()
            .map(|p| p.g.max_abs_diff(&magnetic(x, q, p.s)))
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "max deviation {err}");
    }

    #[test]
    fn midpoint_integrator_is_second_order() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        let err = |n: usize| {
            let spec = TrajectorySpec::new(x, 1.7, 0.0, 2.0, n).unwrap();
            let path = reconstruct_with(&spec, Integrator::Midpoint).unwrap();
            let last = path.samples().last().unwrap();
            last.g.max_abs_diff(&magnetic(x, 1.7, last.s))
        };
        let ratio = err(201) / err(401);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn reconstruct_fiber_geodesic() {
        let spec = TrajectorySpec::new(E1, 0.0, 0.0, 6.0, 601).unwrap();
        let path = reconstruct(&spec).unwrap();
        for p in path.samples() {
            assert!((p.coords.x()).abs() <= 1e-12 && (p.coords.y() - 1.0).abs() <= 1e-12);
            assert!((p.coords.theta() - p.s).abs() <= 1e-10);
        }
        assert!(path.max_theta_jump() < PI);
    }

    #[test]
    fn reconstruct_symmetric_geodesic_coordinates() {
        let spec = TrajectorySpec::new(E2, 0.0, 0.0, 1.5, 1501).unwrap();
        let path = reconstruct(&spec).unwrap();
        for p in path.samples() {
            let s = p.s;
            assert!((p.coords.x() - (2.0 * s).tanh()).abs() <= 1e-10);
            assert!((p.coords.y() - 1.0 / (2.0 * s).cosh()).abs() <= 1e-10);
        }
    }

    #[test]
    fn reconstruct_with_offset_window() {
        let x = AlgebraVector::new(-0.3, 0.8, 0.4);
        let spec = TrajectorySpec::new(x, -2.0, -1.25, 0.75, 2001).unwrap();
        let path = reconstruct(&spec).unwrap();
        assert_eq!(path.samples()[0].s, -1.25);
        for p in path.samples() {
            assert!(p.g.max_abs_diff(&magnetic(x, -2.0, p.s)) <= 1e-10);
        }
    }

    #[test]
    fn trajectory_spec_validation() {
        assert!(TrajectorySpec::new(E1, 0.0, 0.0, 1.0, 1).is_err());
        assert!(TrajectorySpec::new(E1, 0.0, 1.0, 1.0, 10).is_err());
        assert_eq!(
            TrajectorySpec::new(AlgebraVector::ZERO, 0.0, 0.0, 1.0, 10),
            Err(GeometryError::ZeroVelocity)
        );
    }

    #[test]
    fn theta_is_unwrapped_along_paths() {
        let spec = TrajectorySpec::new(E1, 2.0, 0.0, 20.0, 2001).unwrap();
        let path = sample_magnetic(&spec).unwrap();
        let last = path.samples().last().unwrap();
        assert!((last.coords.theta() - 20.0).abs() <= 1e-9);
        assert!((last.theta_wrapped - wrap_angle(20.0)).abs() <= 1e-9);
        assert!(path.max_theta_jump() < PI);
    }

    #[test]
    fn lorentz_residual_examples() {
        let x = AlgebraVector::new(0.5, 0.3, -0.2);
        let q = 1.7;
        let curve = HomogeneousCurve::magnetic(x, q);
        let path = sample_curve(&curve, 0.0, 10.0, 10_001).unwrap();
        assert!(lorentz_residual(&path, q) <= 1e-6);
        assert!(lorentz_residual_with(&path, STANDARD_PRECESSION, q) <= 1e-6);

        // a geodesic tested against a non-zero charge misses the force q φ Ω
        let geo = sample_curve(&HomogeneousCurve::geodesic(x), 0.0, 10.0, 10_001).unwrap();
        let forcing = 2.5 * (x.b * x.b + x.c * x.c).sqrt();
        assert!((lorentz_residual(&geo, 2.5) - forcing).abs() <= 1e-6);

        let fiber = sample_curve(&HomogeneousCurve::geodesic(E1), 0.0, 3.0, 301).unwrap();
        for q in [0.0, 1.0, -7.0] {
            assert_eq!(lorentz_residual(&fiber, q), 0.0);
        }
    }

    #[test]
    fn lorentz_residual_short_paths() {
        let curve = HomogeneousCurve::geodesic(AlgebraVector::new(0.2, 0.5, 0.1));
        let path = sample_curve(&curve, 0.0, 0.003, 3).unwrap();
        assert!(lorentz_residual(&path, 0.0) <= 1e-5);
    }

    #[test]
    fn geodesic_criterion_u_equals_2a() {
        let w = AlgebraVector::new(0.6, 0.4, -0.5);
        let on = sample_curve(&HomogeneousCurve::one_parameter(w, 2.0 * w.a), 0.0, 4.0, 4001)
            .unwrap();
        assert!(lorentz_residual(&on, 0.0) <= 1e-8);
        let off = sample_curve(&HomogeneousCurve::one_parameter(w, 2.0 * w.a + 0.5), 0.0, 4.0, 4001)
            .unwrap();
        // |2(u - 2a)| · |(b, c)|
        let expected = 2.0 * 0.5 * (w.b * w.b + w.c * w.c).sqrt();
        assert!((lorentz_residual(&off, 0.0) - expected).abs() <= 1e-6);
    }

    #[test]
    fn contact_angle_examples() {
        assert_eq!(contact_angle(E1).unwrap(), 0.0);
        assert_eq!(contact_angle(E2).unwrap(), PI / 2.0);
        let x = AlgebraVector::new(1.0, 1.0, 0.0);
        assert!((contact_angle(x).unwrap() - PI / 4.0).abs() <= 1e-15);
        assert_eq!(contact_angle(AlgebraVector::ZERO), Err(GeometryError::ZeroVelocity));
    }
}
