//! Centrally symmetric planar convex bodies: gauges, duality maps, dual norms
//! and radial profiles.
//!
//! Every body is described by its Minkowski gauge `‖x‖ = inf{λ > 0 : x ∈ λC}`.
//! The duality map `φ(x)` is the gradient of `½‖x‖²`, so `φ(x)·x = ‖x‖²` and
//! `φ` is homogeneous of degree one. For profile-backed bodies the boundary is
//! `t ↦ f(t)(cos t, sin t)` and
//! `φ(s(t)) = f(t)⁻² s(t) − f'(t) f(t)⁻³ s'(t)`.

mod descriptor;
mod exp_family;
mod profile;
mod surgery;

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::{Matrix2, Vector2};
use thiserror::Error;

pub use descriptor::{BodyDescriptor, BumpDescriptor, ProfileDescriptor};
pub use exp_family::ExpFamily;
pub use profile::{
    square_corner_angles, Bump, Jet, PeriodicSpline, ProfileShape, RadialProfile, DEFAULT_SAMPLES,
    MIN_SAMPLES,
};
pub use surgery::{bump_profile, retarget_supports, RetargetOutcome};

pub type Vec2 = Vector2<f64>;

/// Number of angles used for sup-distances and sampled support functions.
pub const ANGULAR_SAMPLES: usize = 720;

/// Sample count of dual profiles built by [`dual_map_inverse_check`].
pub const DUAL_PROFILE_SAMPLES: usize = 512;

/// Tolerance on `c_f / f²` accepted by [`ConvexBody::from_convex_profile`].
pub const CONVEX_PROFILE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BodyError {
    #[error("invalid body parameters: {0}")]
    InvalidParameters(String),
    #[error("radial root find did not converge in direction ({x}, {y})")]
    RootFind { x: f64, y: f64 },
    #[error("duality map undefined at non-smooth boundary direction t = {angle}")]
    NonSmooth { angle: f64 },
    #[error("curvature violation: c_f = {value:e} at t = {angle}")]
    Curvature { angle: f64, value: f64 },
    #[error("profile is not π-periodic: sample {index} deviates by {deviation:e}")]
    Periodicity { index: usize, deviation: f64 },
    #[error("profile sample count {0} must be even and at least 64")]
    SampleCount(usize),
    #[error("invalid bump: {0}")]
    Bump(String),
    #[error("operation needs a smooth strictly convex body")]
    NotRegular,
    #[error("support target {index} unreachable: {reason}")]
    Unreachable { index: usize, reason: String },
    #[error("surgery moved the profile by {distance:e}, more than eps = {eps:e}")]
    TooFar { distance: f64, eps: f64 },
}

/// Differentiability class of the gauge away from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Smoothness {
    NonSmooth,
    Ck(u32),
    Analytic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ellipse {
    map: Matrix2<f64>,
    inverse: Matrix2<f64>,
}

impl Ellipse {
    /// The image of the unit disc under the invertible linear map `map`.
    pub fn new(map: Matrix2<f64>) -> Result<Self, BodyError> {
        let inverse = map
            .try_inverse()
            .filter(|_| map.determinant().abs() > 1e-14)
            .ok_or_else(|| BodyError::InvalidParameters("ellipse map must be invertible".into()))?;
        Ok(Self { map, inverse })
    }

    pub fn map(&self) -> &Matrix2<f64> {
        &self.map
    }
}

#[derive(Clone, Debug)]
pub enum BodyKind {
    Disc,
    Ellipse(Ellipse),
    PNorm(f64),
    ExpFamily(ExpFamily),
    Profile(RadialProfile),
}

/// A centrally symmetric convex body in the plane, immutable once built.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    kind: BodyKind,
    positive_curvature: bool,
    boundary: OnceLock<Vec<(f64, Vec2)>>,
}

impl ConvexBody {
    fn new(kind: BodyKind, positive_curvature: bool) -> Self {
        Self {
            kind,
            positive_curvature,
            boundary: OnceLock::new(),
        }
    }

    pub fn disc() -> Self {
        Self::new(BodyKind::Disc, true)
    }

    pub fn ellipse(map: Matrix2<f64>) -> Result<Self, BodyError> {
        Ok(Self::new(BodyKind::Ellipse(Ellipse::new(map)?), true))
    }

    pub fn pnorm(p: f64) -> Result<Self, BodyError> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(BodyError::InvalidParameters(format!(
                "p-norm needs 1 < p < ∞, got {p}"
            )));
        }
        Ok(Self::new(BodyKind::PNorm(p), p <= 2.0))
    }

    pub fn exp_family(directions: Vec<Vec2>, weight: f64) -> Result<Self, BodyError> {
        Ok(Self::new(
            BodyKind::ExpFamily(ExpFamily::new(directions, weight)?),
            true,
        ))
    }

    /// The unit square `[−1, 1]²`, a non-smooth, non-strictly-convex fixture.
    pub fn square() -> Self {
        Self::new(BodyKind::Profile(RadialProfile::square()), false)
    }

    /// Body whose radial profile is `profile`; requires `c_f > 0` everywhere.
    pub fn from_profile(profile: RadialProfile) -> Result<Self, BodyError> {
        if profile.is_square() {
            return Ok(Self::square());
        }
        profile.validate(0.0)?;
        Ok(Self::new(BodyKind::Profile(profile), true))
    }

    /// Like [`ConvexBody::from_profile`] but only requires convexity,
    /// `c_f ≥ −CONVEX_PROFILE_TOLERANCE · f²`, so profiles of bodies with
    /// isolated flat points (p-norms with p > 2) are accepted.
    pub fn from_convex_profile(profile: RadialProfile) -> Result<Self, BodyError> {
        if profile.is_square() {
            return Ok(Self::square());
        }
        profile.validate(CONVEX_PROFILE_TOLERANCE)?;
        let positive = profile.min_curvature()?.0 > 0.0;
        Ok(Self::new(BodyKind::Profile(profile), positive))
    }

    pub(crate) fn from_profile_unchecked(profile: RadialProfile, positive_curvature: bool) -> Self {
        Self::new(BodyKind::Profile(profile), positive_curvature)
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn profile(&self) -> Option<&RadialProfile> {
        match &self.kind {
            BodyKind::Profile(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_square(&self) -> bool {
        self.profile().is_some_and(RadialProfile::is_square)
    }

    /// True for discs and ellipses, whose isometry group is three-dimensional.
    pub fn is_euclidean(&self) -> bool {
        match &self.kind {
            BodyKind::Disc | BodyKind::Ellipse(_) => true,
            BodyKind::Profile(p) => {
                matches!(p.shape(), ProfileShape::Constant(_)) && p.bumps().is_empty()
            }
            _ => false,
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match &self.kind {
            BodyKind::Disc | BodyKind::Ellipse(_) | BodyKind::ExpFamily(_) => Smoothness::Analytic,
            BodyKind::PNorm(p) => {
                if p.fract() == 0.0 && (*p as u64).is_multiple_of(2) {
                    Smoothness::Analytic
                } else if p.fract() == 0.0 {
                    Smoothness::Ck(*p as u32 - 1)
                } else {
                    Smoothness::Ck(p.floor() as u32)
                }
            }
            BodyKind::Profile(p) => match p.shape() {
                ProfileShape::Square => Smoothness::NonSmooth,
                ProfileShape::Constant(_) if p.bumps().is_empty() => Smoothness::Analytic,
                _ => Smoothness::Ck(2),
            },
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.smoothness() != Smoothness::NonSmooth
    }

    pub fn is_strictly_convex(&self) -> bool {
        !self.is_square()
    }

    /// Smooth and strictly convex.
    pub fn is_regular(&self) -> bool {
        self.is_smooth() && self.is_strictly_convex()
    }

    /// Member of the positive-curvature class (`c_f > 0` everywhere).
    pub fn has_positive_curvature(&self) -> bool {
        self.positive_curvature
    }

    /// Minkowski gauge of `x`.
    pub fn norm(&self, x: &Vec2) -> Result<f64, BodyError> {
        match &self.kind {
            BodyKind::Disc => Ok(x.norm()),
            BodyKind::Ellipse(e) => Ok((e.inverse * x).norm()),
            BodyKind::PNorm(p) => Ok(pnorm(x, *p)),
            BodyKind::ExpFamily(e) => e.norm(x),
            BodyKind::Profile(profile) => {
                if profile.is_square() {
                    return Ok(x.x.abs().max(x.y.abs()));
                }
                let len = x.norm();
                if len == 0.0 {
                    return Ok(0.0);
                }
                Ok(len / profile.value(x.y.atan2(x.x))?)
            }
        }
    }

    /// `φ(x)`, the derivative of `½‖·‖²` at `x`.
    pub fn duality_map(&self, x: &Vec2) -> Result<Vec2, BodyError> {
        match &self.kind {
            BodyKind::Disc => Ok(*x),
            BodyKind::Ellipse(e) => Ok(e.inverse.transpose() * (e.inverse * x)),
            BodyKind::PNorm(p) => Ok(pnorm_duality(x, *p)),
            BodyKind::ExpFamily(e) => e.duality_map(x),
            BodyKind::Profile(profile) => {
                let len = x.norm();
                if len == 0.0 {
                    return Ok(Vec2::zeros());
                }
                let t = x.y.atan2(x.x);
                if profile.is_square() {
                    return square_duality(x, t);
                }
                let (f, df) = profile.slope(t)?;
                Ok(profile_support(&Jet { f, df, ddf: 0.0 }, t) * len)
            }
        }
    }

    /// Dual norm `sup_{z ∈ C} |y·z|`.
    pub fn dual_norm(&self, y: &Vec2) -> Result<f64, BodyError> {
        match &self.kind {
            BodyKind::Disc => Ok(y.norm()),
            BodyKind::Ellipse(e) => Ok((e.map.transpose() * y).norm()),
            BodyKind::PNorm(p) => Ok(pnorm(y, *p / (*p - 1.0))),
            BodyKind::Profile(profile) if profile.is_square() => Ok(y.x.abs() + y.y.abs()),
            _ => self.sampled_support(y),
        }
    }

    /// Duality map of the dual body in closed form, where one exists.
    pub fn closed_form_dual_duality_map(&self, y: &Vec2) -> Option<Vec2> {
        match &self.kind {
            BodyKind::Disc => Some(*y),
            BodyKind::Ellipse(e) => Some(e.map * (e.map.transpose() * y)),
            BodyKind::PNorm(p) => Some(pnorm_duality(y, *p / (*p - 1.0))),
            _ => None,
        }
    }

    /// `F(t) = 1 / ‖(cos t, sin t)‖`.
    pub fn radial_value(&self, t: f64) -> Result<f64, BodyError> {
        Ok(1.0 / self.norm(&Vec2::new(t.cos(), t.sin()))?)
    }

    /// Spline profile sampled on `n` uniform angles of the full circle.
    ///
    /// Bodies with positive curvature must produce `c_f > 0` at every check
    /// angle; a violation means `n` is too coarse for the body.
    pub fn radial_profile(&self, n: usize) -> Result<RadialProfile, BodyError> {
        if n < MIN_SAMPLES || !n.is_multiple_of(2) {
            return Err(BodyError::SampleCount(n));
        }
        let m = n / 2;
        let values = (0..m)
            .map(|k| self.radial_value(PI * k as f64 / m as f64))
            .collect::<Result<Vec<_>, _>>()?;
        let profile = RadialProfile::from_half_samples(values)?;
        if self.positive_curvature {
            profile.validate(0.0)?;
        }
        Ok(profile)
    }

    /// Boundary points `F(t)(cos t, sin t)` on a uniform grid of `[0, π)`.
    fn boundary_samples(&self) -> Result<&[(f64, Vec2)], BodyError> {
        if let Some(samples) = self.boundary.get() {
            return Ok(samples);
        }
        let samples = (0..ANGULAR_SAMPLES)
            .map(|k| {
                let t = PI * k as f64 / ANGULAR_SAMPLES as f64;
                Ok((t, Vec2::new(t.cos(), t.sin()) * self.radial_value(t)?))
            })
            .collect::<Result<Vec<_>, BodyError>>()?;
        Ok(self.boundary.get_or_init(|| samples))
    }

    /// Support function by dense sampling and golden-section refinement.
    fn sampled_support(&self, y: &Vec2) -> Result<f64, BodyError> {
        if y.norm() == 0.0 {
            return Ok(0.0);
        }
        let samples = self.boundary_samples()?;
        let (best_t, best) = samples.iter().map(|(t, b)| (*t, y.dot(b).abs())).fold(
            (0.0, f64::NEG_INFINITY),
            |acc, v| if v.1 > acc.1 { v } else { acc },
        );
        let half = PI / ANGULAR_SAMPLES as f64;
        let objective = |t: f64| -> Result<f64, BodyError> {
            Ok(self.radial_value(t)? * (y.x * t.cos() + y.y * t.sin()).abs())
        };
        let refined = golden_max(objective, best_t - half, best_t + half)?;
        Ok(refined.max(best))
    }

    /// Approximates the dual body by a spline profile with `n` samples.
    pub fn dual_profile(&self, n: usize) -> Result<RadialProfile, BodyError> {
        if n < MIN_SAMPLES || !n.is_multiple_of(2) {
            return Err(BodyError::SampleCount(n));
        }
        let m = n / 2;
        let values = (0..m)
            .map(|k| {
                let t = PI * k as f64 / m as f64;
                Ok(1.0 / self.dual_norm(&Vec2::new(t.cos(), t.sin()))?)
            })
            .collect::<Result<Vec<_>, BodyError>>()?;
        RadialProfile::from_half_samples(values)
    }
}

/// `φ(s(t)) = f⁻² s − f' f⁻³ s'` for a profile jet at angle `t`.
pub fn profile_support(jet: &Jet, t: f64) -> Vec2 {
    let (sin, cos) = t.sin_cos();
    let s = Vec2::new(cos, sin);
    let ds = Vec2::new(-sin, cos);
    let inv = 1.0 / jet.f;
    s * (inv * inv) - ds * (jet.df * inv * inv * inv)
}

fn square_duality(x: &Vec2, t: f64) -> Result<Vec2, BodyError> {
    let (ax, ay) = (x.x.abs(), x.y.abs());
    if (ax - ay).abs() <= 1e-12 * (ax + ay) {
        return Err(BodyError::NonSmooth { angle: t });
    }
    Ok(if ax > ay {
        Vec2::new(x.x, 0.0)
    } else {
        Vec2::new(0.0, x.y)
    })
}

fn pnorm(x: &Vec2, p: f64) -> f64 {
    let scale = x.x.abs().max(x.y.abs());
    if scale == 0.0 {
        return 0.0;
    }
    let (a, b) = (x.x.abs() / scale, x.y.abs() / scale);
    scale * (a.powf(p) + b.powf(p)).powf(1.0 / p)
}

fn pnorm_duality(x: &Vec2, p: f64) -> Vec2 {
    let norm = pnorm(x, p);
    if norm == 0.0 {
        return Vec2::zeros();
    }
    let component = |v: f64| v.signum() * (v.abs() / norm).powf(p - 1.0) * norm;
    Vec2::new(component(x.x), component(x.y))
}

const GOLDEN_STEPS: usize = 80;

/// Golden-section maximization of a unimodal function on `[a, b]`.
fn golden_max<F>(f: F, mut a: f64, mut b: f64) -> Result<f64, BodyError>
where
    F: Fn(f64) -> Result<f64, BodyError>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..GOLDEN_STEPS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

/// `ρ(A, B) = sup_{|x| = 1} |‖x‖_A − ‖x‖_B|`, by sampling plus local refinement.
pub fn body_distance(a: &ConvexBody, b: &ConvexBody) -> Result<f64, BodyError> {
    let gap = |t: f64| -> Result<f64, BodyError> {
        let s = Vec2::new(t.cos(), t.sin());
        Ok((a.norm(&s)? - b.norm(&s)?).abs())
    };
    let step = PI / ANGULAR_SAMPLES as f64;
    let values = (0..ANGULAR_SAMPLES)
        .map(|k| gap(step * k as f64))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best = values.iter().cloned().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..ANGULAR_SAMPLES).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    for &k in order.iter().take(3) {
        let t = step * k as f64;
        best = best.max(golden_max(gap, t - step, t + step)?);
    }
    Ok(best)
}

/// `max_t |F_A(t) − F_B(t)|` over 720 angles; bounds the Hausdorff distance
/// of the bodies.
pub fn radial_distance(a: &ConvexBody, b: &ConvexBody) -> Result<f64, BodyError> {
    let mut best: f64 = 0.0;
    for k in 0..ANGULAR_SAMPLES {
        let t = PI * k as f64 / ANGULAR_SAMPLES as f64;
        best = best.max((a.radial_value(t)? - b.radial_value(t)?).abs());
    }
    Ok(best)
}

/// `‖φ_{C*}(φ_C(x)) − x‖`. Uses the closed-form dual for discs, ellipses and
/// p-norms and a sampled dual profile otherwise.
pub fn dual_map_inverse_check(body: &ConvexBody, x: &Vec2) -> Result<f64, BodyError> {
    if !body.is_regular() {
        return Err(BodyError::NotRegular);
    }
    let y = body.duality_map(x)?;
    let back = match body.closed_form_dual_duality_map(&y) {
        Some(v) => v,
        None => {
            let dual = body.dual_profile(DUAL_PROFILE_SAMPLES)?;
            let len = y.norm();
            if len == 0.0 {
                Vec2::zeros()
            } else {
                let t = y.y.atan2(y.x);
                profile_support(&dual.jet(t)?, t) * len
            }
        }
    };
    Ok((back - x).norm())
}

/// Shared handle used where bodies are referenced from packings.
pub type BodyRef = Arc<ConvexBody>;

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_sample() -> ConvexBody {
        ConvexBody::exp_family(
            vec![
                Vec2::new(1.0, 0.0),
                Vec2::new(0.0, 1.0),
                Vec2::new(1.0, 1.0),
            ],
            2.0,
        )
        .unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(ConvexBody::disc().norm(&Vec2::new(3.0, 4.0)).unwrap(), 5.0);
        assert_eq!(
            ConvexBody::square().norm(&Vec2::new(2.0, 1.0)).unwrap(),
            2.0
        );
        let ellipse = ConvexBody::ellipse(Matrix2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        assert!((ellipse.norm(&Vec2::new(1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(ConvexBody::pnorm(1.0).is_err());
    }

    #[test]
    fn disc_duality_is_identity() {
        let x = Vec2::new(3.0, 4.0);
        assert_eq!(ConvexBody::disc().duality_map(&x).unwrap(), x);
    }

    #[test]
    fn square_duality_refuses_corners() {
        let sq = ConvexBody::square();
        assert_eq!(
            sq.duality_map(&Vec2::new(3.0, 1.0)).unwrap(),
            Vec2::new(3.0, 0.0)
        );
        assert!(matches!(
            sq.duality_map(&Vec2::new(1.0, -1.0)),
            Err(BodyError::NonSmooth { .. })
        ));
    }

    #[test]
    fn dual_norm_examples() {
        assert_eq!(
            ConvexBody::disc().dual_norm(&Vec2::new(0.0, 2.0)).unwrap(),
            2.0
        );
        assert_eq!(
            ConvexBody::square()
                .dual_norm(&Vec2::new(1.0, 1.0))
                .unwrap(),
            2.0
        );
        // Sampled support of the constant profile agrees with the Euclidean dual.
        let disc_profile = ConvexBody::from_profile(RadialProfile::constant(1.0).unwrap()).unwrap();
        let y = Vec2::new(0.3, -1.7);
        assert!((disc_profile.dual_norm(&y).unwrap() - y.norm()).abs() < 1e-12);
    }

    #[test]
    fn dual_norm_of_duality_map_equals_norm() {
        let body = exp_sample();
        for i in 0..20 {
            let t = 0.31 * i as f64;
            let x = Vec2::new(t.cos(), t.sin()) * (0.5 + 0.1 * i as f64);
            let phi = body.duality_map(&x).unwrap();
            let lhs = body.dual_norm(&phi).unwrap();
            let rhs = body.norm(&x).unwrap();
            assert!((lhs - rhs).abs() < 1e-6 * rhs, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn disc_profile_is_constant_and_ellipse_dual_inverts() {
        let profile = ConvexBody::disc().radial_profile(64).unwrap();
        for k in 0..10 {
            assert!((profile.value(0.37 * k as f64).unwrap() - 1.0).abs() < 1e-15);
        }
        let ellipse = ConvexBody::ellipse(Matrix2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(dual_map_inverse_check(&ellipse, &Vec2::new(1.0, 0.0)).unwrap() < 1e-9);
        assert!(dual_map_inverse_check(&ConvexBody::disc(), &Vec2::new(0.2, 0.7)).unwrap() < 1e-15);
        assert!(matches!(
            dual_map_inverse_check(&ConvexBody::square(), &Vec2::new(1.0, 0.2)),
            Err(BodyError::NotRegular)
        ));
    }

    #[test]
    fn square_profile_at_corner_direction() {
        // 1/‖(cos π/4, sin π/4)‖_∞ = √2
        let f = ConvexBody::square().radial_value(PI / 4.0).unwrap();
        assert!((f - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn body_distance_disc_vs_ellipse() {
        let ellipse = ConvexBody::ellipse(Matrix2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        let d = body_distance(&ConvexBody::disc(), &ellipse).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert_eq!(body_distance(&ellipse, &ellipse).unwrap(), 0.0);
    }

    #[test]
    fn pnorm_smoothness_classes() {
        assert_eq!(
            ConvexBody::pnorm(4.0).unwrap().smoothness(),
            Smoothness::Analytic
        );
        assert_eq!(
            ConvexBody::pnorm(3.0).unwrap().smoothness(),
            Smoothness::Ck(2)
        );
        assert_eq!(
            ConvexBody::pnorm(1.5).unwrap().smoothness(),
            Smoothness::Ck(1)
        );
        assert!(ConvexBody::pnorm(1.5).unwrap().has_positive_curvature());
        assert!(!ConvexBody::pnorm(3.0).unwrap().has_positive_curvature());
    }
}
