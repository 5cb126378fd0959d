//! Local profile surgery: polynomial bumps that change the tangent direction
//! at chosen boundary points while leaving the points themselves fixed.

use std::f64::consts::PI;
use std::sync::Arc;

use super::profile::{Bump, ProfileShape, RadialProfile};
use super::{profile_support, radial_distance, BodyError, BodyKind, ConvexBody, Vec2};

const CHECK_POINTS: usize = 256;
const MAX_HALF_WIDTH: f64 = PI / 8.0;

/// Adds `λ·p((t − x1)/(x2 − x1))`, `p(u) = u³(u−1)³(u−ĉ)`, to `profile` on
/// `[x1, x2]` and its antipodal copy.
///
/// `λ` is chosen so that `g'(c) = f'(c) + a`; `g(c) = f(c)` and `g`, `g'`,
/// `g''` agree with `f` at both endpoints. Fails with
/// [`BodyError::Curvature`] when `|a|` is too large for `g` to stay in the
/// positive-curvature class.
pub fn bump_profile(
    profile: &RadialProfile,
    x1: f64,
    x2: f64,
    c: f64,
    a: f64,
) -> Result<RadialProfile, BodyError> {
    let width = x2 - x1;
    if !(width > 0.0 && width < PI) {
        return Err(BodyError::Bump(format!(
            "interval [{x1}, {x2}] must have length in (0, π)"
        )));
    }
    if !(c > x1 && c < x2) {
        return Err(BodyError::Bump(format!(
            "contact {c} is not interior to [{x1}, {x2}]"
        )));
    }
    if !a.is_finite() {
        return Err(BodyError::Bump(format!("amplitude {a} is not finite")));
    }
    let start = x1.rem_euclid(PI);
    for other in profile.bumps() {
        if intervals_overlap(start, width, other.start, other.width) {
            return Err(BodyError::Bump(format!(
                "interval [{x1}, {x2}] overlaps an existing bump"
            )));
        }
    }
    if a == 0.0 {
        return Ok(profile.clone());
    }
    let contact = (c - x1) / width;
    let slope = contact.powi(3) * (contact - 1.0).powi(3);
    let bump = Bump {
        start,
        width,
        contact,
        lambda: a * width / slope,
    };
    let angles: Vec<f64> = bump.check_angles(CHECK_POINTS).collect();
    let out = profile.with_bump(bump);
    check_positive(&out, angles)?;
    Ok(out)
}

fn check_positive(profile: &RadialProfile, angles: Vec<f64>) -> Result<(), BodyError> {
    for t in angles {
        let jet = profile.jet(t)?;
        if !(jet.f > 0.0) {
            return Err(BodyError::Curvature {
                angle: t,
                value: jet.f,
            });
        }
        let c = jet.curvature();
        if !(c > 0.0) {
            return Err(BodyError::Curvature { angle: t, value: c });
        }
    }
    Ok(())
}

fn intervals_overlap(s1: f64, w1: f64, s2: f64, w2: f64) -> bool {
    let inside = |s: f64, w: f64, t: f64| (t - s).rem_euclid(PI) <= w;
    inside(s1, w1, s2) || inside(s2, w2, s1)
}

/// Result of [`retarget_supports`].
#[derive(Clone, Debug)]
pub struct RetargetOutcome {
    pub body: ConvexBody,
    /// Derivative change `a_i` applied at each contact angle.
    pub amplitudes: Vec<f64>,
    /// `max_t |f(t) − g(t)|` over 720 angles.
    pub profile_distance: f64,
}

/// Reshapes `body` near each boundary point `contact_points[i]` so that the
/// point stays on the boundary and its support `φ(x_i)` becomes a positive
/// multiple of `targets[i]`.
///
/// Contact points must lie on the boundary and be pairwise linearly
/// independent. Fails when a target needs more curvature than the body has
/// (the caller should shrink the perturbation) or when the new profile moves
/// by more than `eps`.
pub fn retarget_supports(
    body: &ConvexBody,
    contact_points: &[Vec2],
    targets: &[Vec2],
    eps: f64,
) -> Result<RetargetOutcome, BodyError> {
    if contact_points.len() != targets.len() {
        return Err(BodyError::InvalidParameters(format!(
            "{} contact points but {} targets",
            contact_points.len(),
            targets.len()
        )));
    }
    if !body.has_positive_curvature() || !body.is_regular() {
        return Err(BodyError::NotRegular);
    }
    let base = match body.kind() {
        BodyKind::Profile(p) => p.clone(),
        _ => RadialProfile::from_shape(ProfileShape::Blend {
            body: Arc::new(body.clone()),
            weight: 1.0,
        }),
    };

    let mut angles = Vec::with_capacity(contact_points.len());
    for (index, x) in contact_points.iter().enumerate() {
        let norm = body.norm(x)?;
        if (norm - 1.0).abs() > 1e-9 {
            return Err(BodyError::InvalidParameters(format!(
                "contact point {index} has gauge {norm}, expected a boundary point"
            )));
        }
        angles.push(x.y.atan2(x.x));
    }
    let reduced: Vec<f64> = angles.iter().map(|t| t.rem_euclid(PI)).collect();
    let half_widths = half_widths(&reduced)?;

    let mut amplitudes = Vec::with_capacity(angles.len());
    let mut profile = base.clone();
    for (i, (&t, y)) in angles.iter().zip(targets).enumerate() {
        let jet = base.jet(t)?;
        let (sin, cos) = t.sin_cos();
        let s = Vec2::new(cos, sin);
        let along = s.dot(y);
        if !(along > 0.0) {
            return Err(BodyError::Unreachable {
                index: i,
                reason: "target does not point outward from the contact point".into(),
            });
        }
        // φ(s) ∝ f s − f' s' is parallel to y iff f' = f (s × y) / (s' × y), with s' × y = −s·y.
        let cross = s.x * y.y - s.y * y.x;
        let wanted = -jet.f * cross / along;
        let mut a = wanted - jet.df;
        if a.abs() <= 1e-12 * (1.0 + jet.df.abs()) {
            a = 0.0;
        }
        amplitudes.push(a);
        if a != 0.0 {
            let h = half_widths[i];
            let center = reduced[i];
            profile =
                bump_profile(&profile, center - h, center + h, center, a).map_err(|e| match e {
                    BodyError::Curvature { .. } => BodyError::Unreachable {
                        index: i,
                        reason: format!("curvature budget exceeded: {e}"),
                    },
                    other => other,
                })?;
        }
    }

    if amplitudes.iter().all(|a| *a == 0.0) {
        return Ok(RetargetOutcome {
            body: body.clone(),
            amplitudes,
            profile_distance: 0.0,
        });
    }
    let out = ConvexBody::from_profile_unchecked(profile, true);
    let distance = radial_distance(body, &out)?;
    if distance > eps {
        return Err(BodyError::TooFar { distance, eps });
    }
    for (i, (&t, y)) in angles.iter().zip(targets).enumerate() {
        let support = profile_support(&out.profile().expect("profile body").jet(t)?, t);
        let cross = support.x * y.y - support.y * y.x;
        if cross.abs() > 1e-9 * support.norm() * y.norm() {
            return Err(BodyError::Unreachable {
                index: i,
                reason: format!(
                    "support misses target by sine {:e}",
                    cross / (support.norm() * y.norm())
                ),
            });
        }
    }
    Ok(RetargetOutcome {
        body: out,
        amplitudes,
        profile_distance: distance,
    })
}

/// Half-widths of pairwise disjoint intervals around angles in `[0, π)`,
/// treating the circle as `ℝ/πℤ`.
fn half_widths(reduced: &[f64]) -> Result<Vec<f64>, BodyError> {
    let n = reduced.len();
    let mut out = vec![MAX_HALF_WIDTH; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = (reduced[i] - reduced[j]).rem_euclid(PI);
            let gap = d.min(PI - d);
            if gap < 1e-9 {
                return Err(BodyError::InvalidParameters(format!(
                    "contact points {i} and {j} are linearly dependent"
                )));
            }
            out[i] = out[i].min(0.45 * gap);
        }
    }
    Ok(out)
}
