//! Analytic bodies `{x : (1/2n) Σ e^{w(aᵢ·x−1)} + e^{w(−aᵢ·x−1)} ≤ 1}`.

use super::{BodyError, Vec2};

const BISECTION_STEPS: usize = 60;
const NEWTON_STEPS: usize = 5;
const MAX_DOUBLINGS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpFamily {
    directions: Vec<Vec2>,
    weight: f64,
}

impl ExpFamily {
    /// Requires at least three directions spanning the plane and
    /// `weight > ln(2j)` for `j` directions.
    pub fn new(directions: Vec<Vec2>, weight: f64) -> Result<Self, BodyError> {
        let j = directions.len();
        if j < 3 {
            return Err(BodyError::InvalidParameters(format!(
                "exp-family needs at least 3 directions, got {j}"
            )));
        }
        if directions
            .iter()
            .any(|a| !(a.x.is_finite() && a.y.is_finite()))
        {
            return Err(BodyError::InvalidParameters(
                "exp-family direction is not finite".into(),
            ));
        }
        let scale = directions.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let spans = directions.iter().enumerate().any(|(i, a)| {
            directions[i + 1..]
                .iter()
                .any(|b| (a.x * b.y - a.y * b.x).abs() > 1e-12 * scale * scale)
        });
        if !spans {
            return Err(BodyError::InvalidParameters(
                "exp-family directions do not span the plane".into(),
            ));
        }
        let threshold = (2.0 * j as f64).ln();
        if !(weight > threshold) || !weight.is_finite() {
            return Err(BodyError::InvalidParameters(format!(
                "exp-family weight {weight} must exceed ln(2j) = {threshold}"
            )));
        }
        Ok(Self { directions, weight })
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.directions
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// The defining function, written as `(1/n) Σ e^{−w} cosh(w aᵢ·x)`.
    pub fn potential(&self, x: &Vec2) -> f64 {
        let w = self.weight;
        let sum: f64 = self.directions.iter().map(|a| (w * a.dot(x)).cosh()).sum();
        (-w).exp() * sum / self.directions.len() as f64
    }

    pub fn gradient(&self, x: &Vec2) -> Vec2 {
        let w = self.weight;
        let sum: Vec2 = self
            .directions
            .iter()
            .map(|a| a * (w * a.dot(x)).sinh())
            .sum();
        sum * (w * (-w).exp() / self.directions.len() as f64)
    }

    /// The unique `t > 0` with `potential(t·u) = 1`, for a unit vector `u`.
    ///
    /// `t ↦ potential(t u)` is strictly increasing from `e^{−w} < 1`, so
    /// doubling always brackets the root.
    pub fn boundary_scale(&self, u: &Vec2) -> Result<f64, BodyError> {
        let g = |t: f64| self.potential(&(u * t)) - 1.0;
        let mut hi = 1.0;
        let mut doublings = 0;
        while g(hi) <= 0.0 {
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS || !hi.is_finite() {
                return Err(BodyError::RootFind { x: u.x, y: u.y });
            }
        }
        let mut lo = 0.0;
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..NEWTON_STEPS {
            let slope = self.gradient(&(u * t)).dot(u);
            if !(slope > 0.0) {
                break;
            }
            let next = t - g(t) / slope;
            if !(next >= lo && next <= hi) {
                break;
            }
            t = next;
        }
        if !t.is_finite() || t <= 0.0 {
            return Err(BodyError::RootFind { x: u.x, y: u.y });
        }
        Ok(t)
    }

    pub fn norm(&self, x: &Vec2) -> Result<f64, BodyError> {
        let len = x.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let u = x / len;
        Ok(len / self.boundary_scale(&u)?)
    }

    /// `φ(x) = ‖x‖ · dφ(b) / (dφ(b)·b)` with `b = x/‖x‖` on the boundary.
    pub fn duality_map(&self, x: &Vec2) -> Result<Vec2, BodyError> {
        let len = x.norm();
        if len == 0.0 {
            return Ok(Vec2::zeros());
        }
        let u = x / len;
        let scale = self.boundary_scale(&u)?;
        let boundary = u * scale;
        let grad = self.gradient(&boundary);
        let norm = len / scale;
        Ok(grad * (norm / grad.dot(&boundary)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExpFamily {
        ExpFamily::new(
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
    fn admissibility_is_enforced() {
        let dirs = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
        ];
        assert!(ExpFamily::new(dirs.clone(), 6f64.ln()).is_err());
        assert!(ExpFamily::new(dirs[..2].to_vec(), 3.0).is_err());
        let parallel = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(-1.0, 0.0),
        ];
        assert!(ExpFamily::new(parallel, 3.0).is_err());
    }

    #[test]
    fn boundary_scale_matches_independent_bisection() {
        // Plain bisection on [0, 10] without the doubling/Newton stages.
        let body = sample();
        let u = Vec2::new(1.0, 0.0);
        let (mut lo, mut hi) = (0.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if body.potential(&(u * mid)) > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let t = body.boundary_scale(&u).unwrap();
        assert!((t - lo).abs() < 1e-13);
        assert!((body.norm(&Vec2::new(1.0, 0.0)).unwrap() - 1.0 / lo).abs() < 1e-12);
        assert!((body.potential(&(u * t)) - 1.0).abs() < 1e-14);
    }
}
