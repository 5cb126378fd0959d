//! Numerical rank, kernels, independence and infinitesimal rigidity.

use nalgebra::{DMatrix, DVector, Matrix2};

use super::matrix::{assemble_packing_matrix, assemble_rigidity_matrix};
use super::{Packing, RigidityError};
use crate::body::{BodyKind, ConvexBody, Vec2};

/// Relative factor of the default rank threshold.
const DEFAULT_RELATIVE: f64 = 1e-12;

/// Threshold multipliers of the sensitivity sweep: halving and doubling,
/// out to one decade in total.
pub const SWEEP_FACTORS: [f64; 5] = [
    0.316_227_766_016_837_94,
    0.5,
    1.0,
    2.0,
    3.162_277_660_168_379_5,
];

/// How the singular-value threshold is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TolerancePolicy {
    /// `max(m, n) · σ_max · 1e−12`.
    Default,
    /// `max(m, n) · σ_max · factor`.
    Relative(f64),
    Absolute(f64),
}

impl TolerancePolicy {
    fn threshold(self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let scale = rows.max(cols) as f64 * sigma_max;
        match self {
            TolerancePolicy::Default => scale * DEFAULT_RELATIVE,
            TolerancePolicy::Relative(f) => scale * f,
            TolerancePolicy::Absolute(t) => t,
        }
    }
}

/// Singular value decomposition summary of a matrix.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Singular values in decreasing order (`min(rows, cols)` of them).
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the right kernel, one vector per column.
    pub right_kernel: DMatrix<f64>,
    /// Orthonormal basis of the left kernel, one vector per column.
    pub left_kernel: DMatrix<f64>,
    pub tolerance: f64,
}

impl RankReport {
    pub fn right_kernel_dim(&self) -> usize {
        self.right_kernel.ncols()
    }

    pub fn left_kernel_dim(&self) -> usize {
        self.left_kernel.ncols()
    }

    /// Rank under another threshold.
    pub fn rank_at(&self, tolerance: f64) -> usize {
        self.singular_values
            .iter()
            .filter(|s| **s > tolerance)
            .count()
    }

    /// Ranks across [`SWEEP_FACTORS`] times the threshold used.
    pub fn sweep(&self) -> Vec<usize> {
        SWEEP_FACTORS
            .iter()
            .map(|f| self.rank_at(self.tolerance * f))
            .collect()
    }

    /// The rank changes somewhere in the sweep.
    pub fn is_ambiguous(&self) -> bool {
        let ranks = self.sweep();
        ranks.iter().any(|r| *r != ranks[0])
    }
}

/// Sorted singular values and the right singular vectors of `a`, padded
/// with zero rows so that all `ncols` right vectors are available.
fn full_svd(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut pairs: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, v_t.row(i).transpose()))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    pairs.into_iter().unzip()
}

/// Orthonormal basis of `{x : a x = 0}` using singular-value threshold `tol`.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m == 0 {
        return DMatrix::identity(n, n);
    }
    let (values, vectors) = full_svd(a);
    let kernel: Vec<DVector<f64>> = values
        .iter()
        .zip(vectors)
        .filter(|(s, _)| **s <= tol)
        .map(|(_, v)| v)
        .collect();
    if kernel.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&kernel)
    }
}

pub fn rank_report(matrix: &DMatrix<f64>, policy: TolerancePolicy) -> RankReport {
    let (m, n) = matrix.shape();
    if m == 0 || n == 0 {
        return RankReport {
            rows: m,
            cols: n,
            rank: 0,
            singular_values: Vec::new(),
            right_kernel: DMatrix::identity(n, n),
            left_kernel: DMatrix::identity(m, m),
            tolerance: policy.threshold(m, n, 0.0),
        };
    }
    let mut singular_values: Vec<f64> = matrix.singular_values().iter().copied().collect();
    singular_values.sort_by(|x, y| y.total_cmp(x));
    let tolerance = policy.threshold(m, n, singular_values[0]);
    let rank = singular_values.iter().filter(|s| **s > tolerance).count();
    let right_kernel = kernel_with_rank(matrix, rank);
    let left_kernel = kernel_with_rank(&matrix.transpose(), rank);
    RankReport {
        rows: m,
        cols: n,
        rank,
        singular_values,
        right_kernel,
        left_kernel,
        tolerance,
    }
}

/// The `ncols − rank` right singular vectors with smallest singular values.
fn kernel_with_rank(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let n = a.ncols();
    let (_, vectors) = full_svd(a);
    let kernel: Vec<DVector<f64>> = vectors.into_iter().skip(rank).collect();
    if kernel.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&kernel)
    }
}

/// Dimension of the isometry group of the body's norm: 3 for Euclidean
/// bodies (discs and ellipses), 2 otherwise.
pub fn isometry_dimension(body: &ConvexBody) -> usize {
    if body.is_euclidean() {
        3
    } else {
        2
    }
}

/// Trivial infinitesimal flexes of a placement: the two translations, and
/// the infinitesimal rotation when the body is Euclidean.
pub fn trivial_flexes(body: &ConvexBody, p: &[Vec2]) -> Vec<DVector<f64>> {
    let n = p.len();
    let translation =
        |axis: usize| DVector::from_fn(2 * n, |j, _| if j % 2 == axis { 1.0 } else { 0.0 });
    let mut out = vec![translation(0), translation(1)];
    if body.is_euclidean() {
        let rot = Matrix2::new(0.0, -1.0, 1.0, 0.0);
        let generator = match body.kind() {
            BodyKind::Ellipse(e) => {
                e.map() * rot * e.map().try_inverse().expect("invertible ellipse map")
            }
            _ => rot,
        };
        let mut v = DVector::zeros(2 * n);
        for (i, x) in p.iter().enumerate() {
            let u = generator * x;
            v[2 * i] = u.x;
            v[2 * i + 1] = u.y;
        }
        out.push(v);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    pub independent: bool,
    pub rank: usize,
    pub edges: usize,
    /// The rank changes within the tolerance sweep.
    pub ambiguous: bool,
}

pub fn independence_report(
    packing: &Packing,
    policy: TolerancePolicy,
) -> Result<IndependenceReport, RigidityError> {
    let m = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    let report = rank_report(&m, policy);
    Ok(IndependenceReport {
        independent: report.rank == packing.edge_count(),
        rank: report.rank,
        edges: packing.edge_count(),
        ambiguous: report.is_ambiguous(),
    })
}

/// `rank R_C(G,p) = |E|` under the default rank policy.
pub fn independence_test(packing: &Packing) -> Result<bool, RigidityError> {
    Ok(independence_report(packing, TolerancePolicy::Default)?.independent)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RigidityVerdict {
    Rigid,
    Flexible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalRigidity {
    pub verdict: RigidityVerdict,
    pub kernel_dim: usize,
    /// Isometry dimension the kernel is compared against.
    pub k: usize,
    /// Infinitesimally rigid packings of smooth bodies are sticky rigid.
    pub sticky_rigid: bool,
    pub ambiguous: bool,
    /// Largest `‖R t‖` over the trivial flexes `t`.
    pub trivial_flex_residual: f64,
}

pub fn infinitesimal_rigidity_test(
    packing: &Packing,
) -> Result<InfinitesimalRigidity, RigidityError> {
    let m = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    let report = rank_report(&m, TolerancePolicy::Default);
    let k = isometry_dimension(&packing.body);
    let kernel_dim = report.right_kernel_dim();
    if kernel_dim < k {
        return Err(RigidityError::MissingTrivialFlexes { kernel_dim, k });
    }
    let trivial_flex_residual = trivial_flexes(&packing.body, &packing.p)
        .iter()
        .map(|t| (&m * t).norm())
        .fold(0.0, f64::max);
    let verdict = if kernel_dim == k {
        RigidityVerdict::Rigid
    } else {
        RigidityVerdict::Flexible
    };
    Ok(InfinitesimalRigidity {
        verdict,
        kernel_dim,
        k,
        sticky_rigid: verdict == RigidityVerdict::Rigid && packing.body.is_smooth(),
        ambiguous: report.is_ambiguous(),
        trivial_flex_residual,
    })
}

/// Both sides of the equivalence between `rank R_C(G,p) = |E|` and the
/// radius projection of the solution set having full rank `|V|`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiiProjection {
    /// Rank of the radius coordinates of `ker [R_C(G,p) | I(G,r)]`.
    pub projection_rank: usize,
    pub vertices: usize,
    pub rigidity_rank: usize,
    pub edges: usize,
    pub packing_rank: usize,
}

impl RadiiProjection {
    pub fn projection_full(&self) -> bool {
        self.projection_rank == self.vertices
    }

    pub fn independent(&self) -> bool {
        self.rigidity_rank == self.edges
    }

    /// The two sides agree, as they must when the packing matrix has full
    /// row rank.
    pub fn consistent(&self) -> bool {
        self.projection_full() == self.independent()
    }
}

pub fn radii_projection_check(packing: &Packing) -> Result<RadiiProjection, RigidityError> {
    let n = packing.vertex_count();
    let full = assemble_packing_matrix(packing)?;
    let full_report = rank_report(&full.matrix, TolerancePolicy::Default);
    let radii = full_report.right_kernel.rows(2 * n, n).into_owned();
    let projection_rank = rank_report(&radii, TolerancePolicy::Absolute(1e-8)).rank;
    let rigidity_rank = rank_report(&full.point_block(), TolerancePolicy::Default).rank;
    Ok(RadiiProjection {
        projection_rank,
        vertices: n,
        rigidity_rank,
        edges: packing.edge_count(),
        packing_rank: full_report.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::ContactGraph;
    use std::sync::Arc;

    #[test]
    fn zero_and_identity() {
        let z = rank_report(&DMatrix::zeros(3, 4), TolerancePolicy::Default);
        assert_eq!(z.rank, 0);
        assert_eq!(z.right_kernel_dim(), 4);
        assert_eq!(z.left_kernel_dim(), 3);
        let i = rank_report(&DMatrix::identity(2, 2), TolerancePolicy::Default);
        assert_eq!(i.rank, 2);
        assert_eq!(i.right_kernel_dim(), 0);
        assert_eq!(i.left_kernel_dim(), 0);
        assert!(!i.is_ambiguous());
    }

    #[test]
    fn kernels_are_orthonormal_and_annihilated() {
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 3.0, 4.0, 2.0, 4.0, 6.0, 8.0]);
        let r = rank_report(&a, TolerancePolicy::Default);
        assert_eq!(r.rank, 1);
        assert_eq!(r.right_kernel_dim(), 3);
        assert_eq!(r.left_kernel_dim(), 1);
        assert!((&a * &r.right_kernel).norm() < 1e-12);
        assert!((a.transpose() * &r.left_kernel).norm() < 1e-12);
        let gram = r.right_kernel.transpose() * &r.right_kernel;
        assert!((gram - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn single_edge_disc() {
        let g = ContactGraph::new(2, [(0, 1)]).unwrap();
        let p = vec![Vec2::zeros(), Vec2::new(1.0, 0.0)];
        let m = assemble_rigidity_matrix(&ConvexBody::disc(), &g, &p).unwrap();
        let r = rank_report(&m, TolerancePolicy::Default);
        assert_eq!((r.rank, r.right_kernel_dim()), (1, 3));
    }

    #[test]
    fn ellipse_rotation_flex_is_in_kernel() {
        let map = Matrix2::new(2.0, 0.5, 0.0, 1.0);
        let body = ConvexBody::ellipse(map).unwrap();
        let g = ContactGraph::complete(3);
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.3, 0.2),
            Vec2::new(0.4, 2.0),
        ];
        let m = assemble_rigidity_matrix(&body, &g, &p).unwrap();
        for t in trivial_flexes(&body, &p) {
            assert!((&m * t).norm() < 1e-12);
        }
    }

    #[test]
    fn two_touching_discs_are_rigid_and_independent() {
        let g = ContactGraph::new(2, [(0, 1)]).unwrap();
        let packing = Packing::new(
            g,
            Arc::new(ConvexBody::disc()),
            vec![Vec2::zeros(), Vec2::new(2.0, 0.0)],
            vec![1.0, 1.0],
        )
        .unwrap();
        assert!(independence_test(&packing).unwrap());
        let v = infinitesimal_rigidity_test(&packing).unwrap();
        assert_eq!(
            (v.verdict, v.kernel_dim, v.k),
            (RigidityVerdict::Rigid, 3, 3)
        );
        let proj = radii_projection_check(&packing).unwrap();
        assert!(proj.consistent() && proj.projection_full());
    }
}
