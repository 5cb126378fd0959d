//! π-periodic radial profiles `f(t) = 1 / ‖(cos t, sin t)‖` and the cubic
//! spline they are usually stored as.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use super::{BodyError, ConvexBody, Vec2};

/// Minimum number of samples over the full circle.
pub const MIN_SAMPLES: usize = 64;

/// Default sample count used when a body is converted to a spline profile.
pub const DEFAULT_SAMPLES: usize = 256;

/// Value and first two derivatives of a profile at one angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub f: f64,
    pub df: f64,
    pub ddf: f64,
}

impl Jet {
    /// `c_f = f² + 2 f'² − f f''`, the signed curvature numerator of the
    /// boundary curve `t ↦ f(t) (cos t, sin t)`.
    pub fn curvature(&self) -> f64 {
        self.f * self.f + 2.0 * self.df * self.df - self.f * self.ddf
    }
}

/// Periodic cubic spline with period π on uniform nodes `t_k = k π / M`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSpline {
    values: Vec<f64>,
    second: Vec<f64>,
    step: f64,
}

impl PeriodicSpline {
    /// Builds the interpolating spline through `values` sampled on `[0, π)`.
    pub fn new(values: Vec<f64>) -> Self {
        let m = values.len();
        let step = PI / m as f64;
        let rhs: Vec<f64> = (0..m)
            .map(|k| {
                let prev = values[(k + m - 1) % m];
                let next = values[(k + 1) % m];
                6.0 * (prev - 2.0 * values[k] + next) / (step * step)
            })
            .collect();
        let second = solve_cyclic_141(&rhs);
        Self {
            values,
            second,
            step,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.values
    }

    pub fn node_angle(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn jet(&self, t: f64) -> Jet {
        let m = self.values.len();
        let u = t.rem_euclid(PI) / self.step;
        let k = (u.floor() as usize).min(m - 1);
        let tau = u - k as f64;
        let (y0, y1) = (self.values[k], self.values[(k + 1) % m]);
        let (m0, m1) = (self.second[k], self.second[(k + 1) % m]);
        let h = self.step;
        let s = 1.0 - tau;
        let f =
            s * y0 + tau * y1 + h * h / 6.0 * ((s * s * s - s) * m0 + (tau * tau * tau - tau) * m1);
        let df =
            (y1 - y0) / h + h / 6.0 * ((1.0 - 3.0 * s * s) * m0 + (3.0 * tau * tau - 1.0) * m1);
        let ddf = s * m0 + tau * m1;
        Jet { f, df, ddf }
    }
}

/// Solves the cyclic system `x_{k-1} + 4 x_k + x_{k+1} = rhs_k` by
/// Sherman–Morrison on top of the Thomas algorithm.
fn solve_cyclic_141(rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    // A = T + u vᵀ with corners removed; gamma chosen as in Numerical Recipes' cyclic().
    let gamma = -4.0;
    let mut diag = vec![4.0; n];
    diag[0] = 4.0 - gamma;
    diag[n - 1] = 4.0 - 1.0 / gamma;
    let x = thomas(&diag, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = 1.0;
    let z = thomas(&diag, &u);
    let fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn thomas(diag: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = 1.0 / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = (rhs[i] - d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Polynomial bump `λ·p((t − start)/width)` with `p(u) = u³(u−1)³(u−ĉ)`,
/// supported on `[start, start + width]` and its antipodal copy.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub start: f64,
    pub width: f64,
    /// Contact point mapped into `(0, 1)`.
    pub contact: f64,
    pub lambda: f64,
}

impl Bump {
    /// Offset of `t` into the bump interval, if `t` (mod π) lies inside it.
    fn local(&self, t: f64) -> Option<f64> {
        let delta = (t - self.start).rem_euclid(PI);
        (delta <= self.width).then(|| delta / self.width)
    }

    fn jet(&self, t: f64) -> Option<Jet> {
        let u = self.local(t)?;
        let c = self.contact;
        let (a, b, e) = (u, u - 1.0, u - c);
        let p = a.powi(3) * b.powi(3) * e;
        let dp = 3.0 * a * a * b.powi(3) * e + 3.0 * a.powi(3) * b * b * e + a.powi(3) * b.powi(3);
        let ddp = 18.0 * a * a * b * b * e
            + 6.0 * a * b.powi(3) * e
            + 6.0 * a.powi(3) * b * e
            + 6.0 * a * a * b.powi(3)
            + 6.0 * a.powi(3) * b * b;
        let w = self.width;
        Some(Jet {
            f: self.lambda * p,
            df: self.lambda * dp / w,
            ddf: self.lambda * ddp / (w * w),
        })
    }

    /// Angles covering the bump interval, used for curvature checks.
    pub(crate) fn check_angles(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        (0..=count).map(move |i| self.start + self.width * i as f64 / count as f64)
    }
}

/// Closed-form or sampled base shape of a profile.
#[derive(Clone, Debug)]
pub enum ProfileShape {
    /// Constant radius; `Constant(1.0)` is the unit disc.
    Constant(f64),
    /// Sampled profile interpolated by a periodic cubic spline.
    Spline(PeriodicSpline),
    /// The square `[−1, 1]²`: flat sides, corners at odd multiples of π/4.
    Square,
    /// `(1 − weight) + weight · F_body(t)`: a straight line in profile space
    /// from the unit disc (`weight = 0`) to `body` (`weight = 1`).
    Blend { body: Arc<ConvexBody>, weight: f64 },
    /// Profile of the gauge `(1 − weight)|x| + weight ‖x‖_body`: a straight
    /// line in gauge space, which stays a smooth strictly convex norm for
    /// every weight when `body` is one.
    GaugeBlend { body: Arc<ConvexBody>, weight: f64 },
}

/// Radial profile of a centrally symmetric body, optionally carrying
/// localized bumps added by tangent surgery.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    shape: ProfileShape,
    bumps: Vec<Bump>,
}

const SQUARE_CORNER_TOL: f64 = 1e-12;
const BLEND_FD_STEP: f64 = 1e-4;

impl RadialProfile {
    pub fn constant(radius: f64) -> Result<Self, BodyError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(BodyError::InvalidParameters(format!(
                "constant profile radius must be positive, got {radius}"
            )));
        }
        Ok(Self::from_shape(ProfileShape::Constant(radius)))
    }

    pub fn square() -> Self {
        Self::from_shape(ProfileShape::Square)
    }

    /// Profile interpolating `values` at `t_k = k π / M` on `[0, π)`;
    /// `M = values.len()` is half of the full-circle sample count.
    pub fn from_half_samples(values: Vec<f64>) -> Result<Self, BodyError> {
        let full = 2 * values.len();
        if full < MIN_SAMPLES {
            return Err(BodyError::SampleCount(full));
        }
        if let Some((index, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(BodyError::InvalidParameters(format!(
                "profile sample {index} is not a positive number: {v}"
            )));
        }
        Ok(Self::from_shape(ProfileShape::Spline(PeriodicSpline::new(
            values,
        ))))
    }

    /// Profile from `N` uniform samples of the full circle `t_k = −π + 2πk/N`
    /// (so `t_{N−1} = π − 2π/N`). Rejects data that is not π-periodic.
    pub fn from_full_samples(values: &[f64]) -> Result<Self, BodyError> {
        let n = values.len();
        if n < MIN_SAMPLES || !n.is_multiple_of(2) {
            return Err(BodyError::SampleCount(n));
        }
        let half = n / 2;
        for k in 0..half {
            let deviation = (values[k] - values[k + half]).abs();
            if deviation > 1e-10 {
                return Err(BodyError::Periodicity {
                    index: k,
                    deviation,
                });
            }
        }
        // t = −π + 2πk/N ≡ 2πk/N (mod π), so samples half..N cover [0, π) in order.
        Self::from_half_samples(values[half..].to_vec())
    }

    pub fn blend(body: Arc<ConvexBody>, weight: f64) -> Result<Self, BodyError> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(BodyError::InvalidParameters(format!(
                "blend weight must lie in [0, 1], got {weight}"
            )));
        }
        Ok(Self::from_shape(ProfileShape::Blend { body, weight }))
    }

    pub fn gauge_blend(body: Arc<ConvexBody>, weight: f64) -> Result<Self, BodyError> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(BodyError::InvalidParameters(format!(
                "blend weight must lie in [0, 1], got {weight}"
            )));
        }
        Ok(Self::from_shape(ProfileShape::GaugeBlend { body, weight }))
    }

    pub(crate) fn from_shape(shape: ProfileShape) -> Self {
        Self {
            shape,
            bumps: Vec::new(),
        }
    }

    pub(crate) fn from_parts(shape: ProfileShape, bumps: Vec<Bump>) -> Self {
        Self { shape, bumps }
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    pub(crate) fn with_bump(&self, bump: Bump) -> Self {
        let mut out = self.clone();
        out.bumps.push(bump);
        out
    }

    pub fn is_square(&self) -> bool {
        matches!(self.shape, ProfileShape::Square)
    }

    /// `f`, `f'` and `f''` at angle `t`. Fails only at corners of the square.
    pub fn jet(&self, t: f64) -> Result<Jet, BodyError> {
        let mut jet = self.base_jet(t)?;
        for bump in &self.bumps {
            if let Some(b) = bump.jet(t) {
                jet.f += b.f;
                jet.df += b.df;
                jet.ddf += b.ddf;
            }
        }
        Ok(jet)
    }

    pub fn value(&self, t: f64) -> Result<f64, BodyError> {
        let base = match &self.shape {
            ProfileShape::Blend { body, weight } => {
                1.0 - weight + weight / body.norm(&Vec2::new(t.cos(), t.sin()))?
            }
            ProfileShape::GaugeBlend { body, weight } => {
                1.0 / (1.0 - weight + weight * body.norm(&Vec2::new(t.cos(), t.sin()))?)
            }
            _ => self.base_jet(t)?.f,
        };
        Ok(base
            + self
                .bumps
                .iter()
                .filter_map(|b| b.jet(t))
                .map(|j| j.f)
                .sum::<f64>())
    }

    /// `f` and `f'` at angle `t`, skipping the second derivative.
    pub fn slope(&self, t: f64) -> Result<(f64, f64), BodyError> {
        let (mut f, mut df) = match &self.shape {
            ProfileShape::Blend { body, weight } => {
                let (f, df) = body_radial(body, t)?;
                (1.0 - weight + weight * f, weight * df)
            }
            ProfileShape::GaugeBlend { body, weight } => gauge_blend_radial(body, *weight, t)?,
            _ => {
                let jet = self.base_jet(t)?;
                (jet.f, jet.df)
            }
        };
        for b in self.bumps.iter().filter_map(|b| b.jet(t)) {
            f += b.f;
            df += b.df;
        }
        Ok((f, df))
    }

    fn base_jet(&self, t: f64) -> Result<Jet, BodyError> {
        match &self.shape {
            ProfileShape::Constant(r) => Ok(Jet {
                f: *r,
                df: 0.0,
                ddf: 0.0,
            }),
            ProfileShape::Spline(spline) => Ok(spline.jet(t)),
            ProfileShape::Square => square_jet(t),
            ProfileShape::Blend { body, weight } => {
                let (f, df) = body_radial(body, t)?;
                let (_, df_plus) = body_radial(body, t + BLEND_FD_STEP)?;
                let (_, df_minus) = body_radial(body, t - BLEND_FD_STEP)?;
                let ddf = (df_plus - df_minus) / (2.0 * BLEND_FD_STEP);
                Ok(Jet {
                    f: 1.0 - weight + weight * f,
                    df: weight * df,
                    ddf: weight * ddf,
                })
            }
            ProfileShape::GaugeBlend { body, weight } => {
                let (f, df) = gauge_blend_radial(body, *weight, t)?;
                let (_, df_plus) = gauge_blend_radial(body, *weight, t + BLEND_FD_STEP)?;
                let (_, df_minus) = gauge_blend_radial(body, *weight, t - BLEND_FD_STEP)?;
                Ok(Jet {
                    f,
                    df,
                    ddf: (df_plus - df_minus) / (2.0 * BLEND_FD_STEP),
                })
            }
        }
    }

    /// Angles at which curvature and positivity are validated.
    pub fn check_angles(&self) -> Vec<f64> {
        let mut angles: Vec<f64> = match &self.shape {
            ProfileShape::Spline(spline) => {
                let m = spline.nodes().len();
                (0..2 * m).map(|k| spline.step * 0.5 * k as f64).collect()
            }
            _ => (0..512).map(|k| PI * k as f64 / 512.0).collect(),
        };
        for bump in &self.bumps {
            angles.extend(bump.check_angles(128));
        }
        angles
    }

    /// Smallest `c_f / f²` over the check angles, with its angle.
    pub fn min_curvature(&self) -> Result<(f64, f64), BodyError> {
        let mut best = (f64::INFINITY, 0.0);
        for t in self.check_angles() {
            let jet = match self.jet(t) {
                Ok(jet) => jet,
                Err(BodyError::NonSmooth { .. }) => continue,
                Err(e) => return Err(e),
            };
            let c = jet.curvature() / (jet.f * jet.f);
            if c < best.0 {
                best = (c, t);
            }
        }
        Ok(best)
    }

    /// Checks positivity of `f` and `c_f > −tolerance · f²` on the check angles.
    pub fn validate(&self, tolerance: f64) -> Result<(), BodyError> {
        for t in self.check_angles() {
            let jet = match self.jet(t) {
                Ok(jet) => jet,
                Err(BodyError::NonSmooth { .. }) => continue,
                Err(e) => return Err(e),
            };
            if !(jet.f > 0.0) {
                return Err(BodyError::InvalidParameters(format!(
                    "profile value {} is not positive at t = {t}",
                    jet.f
                )));
            }
            let c = jet.curvature();
            if c <= -tolerance * jet.f * jet.f {
                return Err(BodyError::Curvature { angle: t, value: c });
            }
        }
        Ok(())
    }

    /// Spline resampling of this profile on `n` full-circle samples.
    pub fn resample(&self, n: usize) -> Result<Self, BodyError> {
        if n < MIN_SAMPLES || !n.is_multiple_of(2) {
            return Err(BodyError::SampleCount(n));
        }
        let m = n / 2;
        let values = (0..m)
            .map(|k| self.value(PI * k as f64 / m as f64))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_half_samples(values)
    }
}

/// `F(t) = 1/‖s(t)‖` and `F'(t) = −(φ(s(t))·s'(t)) F(t)³` for any smooth body.
pub(crate) fn body_radial(body: &ConvexBody, t: f64) -> Result<(f64, f64), BodyError> {
    let s = Vec2::new(t.cos(), t.sin());
    let ds = Vec2::new(-t.sin(), t.cos());
    let f = 1.0 / body.norm(&s)?;
    let phi = body.duality_map(&s)?;
    Ok((f, -phi.dot(&ds) * f * f * f))
}

/// `f = 1/g` and `f'` for the gauge `g = (1 − w) + w / F_body`.
fn gauge_blend_radial(body: &ConvexBody, w: f64, t: f64) -> Result<(f64, f64), BodyError> {
    let (f, df) = body_radial(body, t)?;
    let g = 1.0 - w + w / f;
    let dg = -w * df / (f * f);
    Ok((1.0 / g, -dg / (g * g)))
}

fn square_jet(t: f64) -> Result<Jet, BodyError> {
    let (s, c) = t.sin_cos();
    if (c.abs() - s.abs()).abs() < SQUARE_CORNER_TOL {
        return Err(BodyError::NonSmooth { angle: t });
    }
    if c.abs() > s.abs() {
        let f = 1.0 / c.abs();
        let tan = s / c;
        Ok(Jet {
            f,
            df: f * tan,
            ddf: f * (2.0 * tan * tan + 1.0),
        })
    } else {
        let f = 1.0 / s.abs();
        let cot = c / s;
        Ok(Jet {
            f,
            df: -f * cot,
            ddf: f * (2.0 * cot * cot + 1.0),
        })
    }
}

/// Angles of the corners of `[−1, 1]²` in `[0, π)`.
pub fn square_corner_angles() -> [f64; 2] {
    [FRAC_PI_4, 3.0 * FRAC_PI_4]
}
