//! Damped Newton iteration on the contact equations over a chosen set of
//! free coordinates.

use nalgebra::{DMatrix, DVector};

use super::{ContinuationConfig, PackerError};
use crate::body::{ConvexBody, Vec2};
use crate::rigidity::{packing_jacobian, packing_map};
use crate::sparsity::ContactGraph;

/// Unknowns of a configuration in the `3|V|` column layout of the packing
/// matrix: point `(v, i)` at `2v + i`, radius `v` at `2|V| + v`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct State {
    pub p: Vec<Vec2>,
    pub r: Vec<f64>,
}

impl State {
    pub fn get(&self, column: usize) -> f64 {
        let n = self.p.len();
        if column < 2 * n {
            self.p[column / 2][column % 2]
        } else {
            self.r[column - 2 * n]
        }
    }

    pub fn set(&mut self, column: usize, value: f64) {
        let n = self.p.len();
        if column < 2 * n {
            self.p[column / 2][column % 2] = value;
        } else {
            self.r[column - 2 * n] = value;
        }
    }

    pub fn shifted(&self, free: &[usize], delta: &DVector<f64>, scale: f64) -> Self {
        let mut out = self.clone();
        for (k, &c) in free.iter().enumerate() {
            out.set(c, self.get(c) + scale * delta[k]);
        }
        out
    }
}

/// The system `h(p, r) = target` restricted to some edges and columns.
pub(crate) struct ContactSystem<'a> {
    pub body: &'a ConvexBody,
    pub graph: &'a ContactGraph,
    pub free: &'a [usize],
    /// Right-hand side per edge; zero when absent.
    pub target: Option<&'a [f64]>,
    /// When set, singular values below this fraction of the largest are
    /// dropped from the pseudo-inverse instead of making the step fail, so
    /// the iteration becomes Gauss–Newton on a rank-deficient system.
    pub rank_cut: Option<f64>,
}

pub(crate) struct NewtonOutcome {
    pub state: State,
    pub iterations: usize,
    pub condition: f64,
}

impl ContactSystem<'_> {
    pub fn residual(&self, s: &State) -> Result<DVector<f64>, PackerError> {
        let h = packing_map(self.body, self.graph, &s.p, &s.r)?;
        Ok(DVector::from_fn(h.len(), |e, _| {
            h[e] - self.target.map_or(0.0, |t| t[e])
        }))
    }

    /// `max |F_vw| / (r_v + r_w)`, which is the contact gap to first order.
    pub fn scaled_error(&self, s: &State, f: &DVector<f64>) -> f64 {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| f[e].abs() / (s.r[u] + s.r[v]))
            .fold(0.0, f64::max)
    }

    pub fn jacobian(&self, s: &State) -> Result<DMatrix<f64>, PackerError> {
        let full = packing_jacobian(self.body, self.graph, &s.p, &s.r)?;
        Ok(full.select_columns(self.free))
    }

    /// Minimum-norm Newton step `−J⁺ F` and the condition number of `J`.
    /// With a rank cut the condition number is taken over the singular
    /// values that are kept.
    fn step(&self, s: &State, f: &DVector<f64>) -> Result<(DVector<f64>, f64), PackerError> {
        let j = self.jacobian(s)?;
        let svd = j.svd(true, true);
        let sigma_max = svd.singular_values.max();
        let cut = self.rank_cut.map_or(0.0, |c| c * sigma_max);
        let sigma_min = svd
            .singular_values
            .iter()
            .copied()
            .filter(|x| *x > cut)
            .fold(f64::INFINITY, f64::min);
        let condition = if sigma_min > 0.0 && sigma_min.is_finite() {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        };
        if !(condition < 1e13) {
            return Err(PackerError::Singular { condition });
        }
        let delta = svd
            .solve(&(-f), cut.max(sigma_max * 1e-14))
            .map_err(|e| PackerError::Config(e.to_string()))?;
        Ok((delta, condition))
    }

    /// Damped Newton from `start` until the scaled error is below the
    /// configured tolerance.
    pub fn solve(
        &self,
        start: State,
        cfg: &ContinuationConfig,
    ) -> Result<NewtonOutcome, PackerError> {
        let mut state = start;
        let mut f = self.residual(&state)?;
        let mut condition = f64::NAN;
        for iteration in 0..=cfg.max_newton_iterations {
            let error = self.scaled_error(&state, &f);
            if error <= cfg.newton_tolerance {
                if condition.is_nan() {
                    condition = self.step(&state, &f)?.1;
                }
                return Ok(NewtonOutcome {
                    state,
                    iterations: iteration,
                    condition,
                });
            }
            if iteration == cfg.max_newton_iterations {
                break;
            }
            let (delta, cond) = self.step(&state, &f)?;
            condition = cond;
            let norm = f.norm();
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=cfg.max_backtracks {
                let trial = state.shifted(self.free, &delta, lambda);
                if trial.r.iter().all(|r| *r > 0.0) {
                    if let Ok(ft) = self.residual(&trial) {
                        if ft.norm() < (1.0 - 1e-4 * lambda) * norm {
                            accepted = Some((trial, ft));
                            break;
                        }
                    }
                }
                lambda *= cfg.damping;
            }
            match accepted {
                Some((s, ft)) => {
                    state = s;
                    f = ft;
                }
                None => {
                    // Rounding floor: no further decrease is possible, accept if close.
                    if error <= 1e3 * cfg.newton_tolerance {
                        return Ok(NewtonOutcome {
                            state,
                            iterations: iteration,
                            condition,
                        });
                    }
                    return Err(PackerError::NewtonStalled {
                        residual: error,
                        iterations: iteration,
                    });
                }
            }
        }
        Err(PackerError::NewtonStalled {
            residual: self.scaled_error(&state, &f),
            iterations: cfg.max_newton_iterations,
        })
    }
}

/// Columns of all centres except the pinned ones, followed by all radii.
pub(crate) fn unpinned_columns(n: usize, pinned: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..n)
        .filter(|v| !pinned.contains(v))
        .flat_map(|v| [2 * v, 2 * v + 1])
        .collect();
    out.extend((0..n).map(|v| 2 * n + v));
    out
}
