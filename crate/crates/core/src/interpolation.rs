//! Convex decomposition of exponent vectors in reciprocal coordinates and
//! the product bound it implies for mixed norms.
//!
//! Given a target `q` and nodes `q(1), ..., q(N)` we look for weights `theta`
//! on the simplex with `sum_k theta_k / q_i(k) = 1 / q_i` for every `i`; then
//! `||a||_q <= prod_k ||a||_{q(k)}^{theta_k}`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_norms::mixed_norm;
use crate::tensor::{ExponentVector, Tensor};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Above this many nodes the subset enumeration is replaced by a linear program.
pub const ENUMERATION_MAX_NODES: usize = 12;

/// An interpolation node together with its reciprocal coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentNode {
    q: ExponentVector,
    reciprocal: Vec<f64>,
}

impl ExponentNode {
    pub fn new(q: ExponentVector) -> Self {
        let reciprocal = q.reciprocals();
        Self { q, reciprocal }
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.q
    }

    pub fn reciprocal(&self) -> &[f64] {
        &self.reciprocal
    }
}

impl From<ExponentVector> for ExponentNode {
    fn from(q: ExponentVector) -> Self {
        Self::new(q)
    }
}

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexWeights {
    theta: Vec<f64>,
}

impl ConvexWeights {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InconsistentWeights("no weights".into()));
        }
        if theta.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::InconsistentWeights(format!("weights outside [0,1]: {theta:?}")));
        }
        let sum: f64 = theta.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InconsistentWeights(format!("weights sum to {sum}")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// `sup_i |sum_k theta_k / q_i(k) - 1 / q_i|`.
pub fn reconstruction_residual(target: &ExponentVector, nodes: &[ExponentNode], theta: &[f64]) -> f64 {
    let b = target.reciprocals();
    b.iter()
        .enumerate()
        .map(|(i, bi)| {
            let combo: f64 = nodes.iter().zip(theta).map(|(n, w)| w * n.reciprocal[i]).sum();
            (combo - bi).abs()
        })
        .fold(0.0, f64::max)
}

fn check_dimensions(target: &ExponentVector, nodes: &[ExponentNode]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::DimensionMismatch("no interpolation nodes".into()));
    }
    if let Some(bad) = nodes.iter().find(|n| n.q.len() != target.len()) {
        return Err(Error::DimensionMismatch(format!(
            "node of length {} for a target of length {}",
            bad.q.len(),
            target.len()
        )));
    }
    Ok(())
}

/// Finds convex weights placing `1/target` in the hull of the node
/// reciprocals, or `None` when no weights reach `tol` in the sup norm.
///
/// Up to [`ENUMERATION_MAX_NODES`] nodes, affinely independent subsets of
/// size at most `m + 1` are tried by increasing size and then
/// lexicographically; the first one that solves the system within `tol`
/// with nonnegative weights wins. Larger node sets go through a linear
/// program minimising the residual.
pub fn find_convex_weights(
    target: &ExponentVector,
    nodes: &[ExponentNode],
    tol: f64,
) -> Result<Option<ConvexWeights>> {
    check_dimensions(target, nodes)?;
    let theta = if nodes.len() <= ENUMERATION_MAX_NODES {
        enumerate_subsets(target, nodes, tol)
    } else {
        solve_lp(target, nodes, tol)
    };
    Ok(theta.map(|theta| ConvexWeights { theta }))
}

/// Columns are nodes of `subset`; rows are the `m` reciprocal coordinates
/// followed by the all-ones affine row.
fn affine_system(target: &ExponentVector, nodes: &[ExponentNode], subset: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = target.len();
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        rows.push(subset.iter().map(|&k| nodes[k].reciprocal[i]).collect());
    }
    rows.push(vec![1.0; subset.len()]);
    let mut rhs = target.reciprocals();
    rhs.push(1.0);
    (rows, rhs)
}

/// Least-squares solve by Householder QR; `None` when the columns are
/// numerically dependent.
#[allow(clippy::needless_range_loop)]
fn least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if cols > rows {
        return None;
    }
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    for j in 0..cols {
        let norm = (j..rows).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..rows).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..cols {
            let dot: f64 = (j..rows).map(|i| v[i - j] * a[i][c]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..rows {
                a[i][c] -= f * v[i - j];
            }
        }
        let dot: f64 = (j..rows).map(|i| v[i - j] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in j..rows {
            b[i] -= f * v[i - j];
        }
    }
    let mut x = vec![0.0; cols];
    for j in (0..cols).rev() {
        let s: f64 = (j + 1..cols).map(|c| a[j][c] * x[c]).sum();
        x[j] = (b[j] - s) / a[j][j];
    }
    Some(x)
}

/// Clips round-off negatives and renormalises; `None` if a weight is
/// genuinely negative.
fn to_simplex(local: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    if local.iter().any(|&w| w < -tol || !w.is_finite()) {
        return None;
    }
    let clipped: Vec<f64> = local.into_iter().map(|w| w.max(0.0)).collect();
    let sum: f64 = clipped.iter().sum();
    if sum <= 0.0 {
        return None;
    }
    Some(clipped.into_iter().map(|w| (w / sum).min(1.0)).collect())
}

fn try_subset(target: &ExponentVector, nodes: &[ExponentNode], subset: &[usize], tol: f64) -> Option<Vec<f64>> {
    let (a, b) = affine_system(target, nodes, subset);
    let local = to_simplex(least_squares(a, b)?, tol)?;
    let mut theta = vec![0.0; nodes.len()];
    for (&k, w) in subset.iter().zip(local) {
        theta[k] = w;
    }
    (reconstruction_residual(target, nodes, &theta) <= tol).then_some(theta)
}

fn enumerate_subsets(target: &ExponentVector, nodes: &[ExponentNode], tol: f64) -> Option<Vec<f64>> {
    let max_size = nodes.len().min(target.len() + 1);
    (1..=max_size).find_map(|size| {
        crate::mixed_norms::k_subsets(nodes.len(), size)
            .into_iter()
            .find_map(|subset| try_subset(target, nodes, &subset, tol))
    })
}

fn solve_lp(target: &ExponentVector, nodes: &[ExponentNode], tol: f64) -> Option<Vec<f64>> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let thetas: Vec<_> = nodes.iter().map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    let slack = problem.add_var(1.0, (0.0, f64::INFINITY));
    let sum: Vec<_> = thetas.iter().map(|&v| (v, 1.0)).collect();
    problem.add_constraint(sum.as_slice(), ComparisonOp::Eq, 1.0);
    for (i, bi) in target.reciprocals().into_iter().enumerate() {
        let mut row: Vec<_> = thetas.iter().zip(nodes).map(|(&v, n)| (v, n.reciprocal[i])).collect();
        row.push((slack, -1.0));
        problem.add_constraint(row.as_slice(), ComparisonOp::Le, bi);
        let last = row.len() - 1;
        row[last].1 = 1.0;
        problem.add_constraint(row.as_slice(), ComparisonOp::Ge, bi);
    }
    let solution = problem.solve().ok()?;
    let raw: Vec<f64> = thetas.iter().map(|&v| solution[v]).collect();
    let mut theta = to_simplex(raw, tol)?;
    // a vertex solution has small support; re-solve on it to remove simplex round-off
    let support: Vec<usize> = (0..theta.len()).filter(|&k| theta[k] > 1e-12).collect();
    if support.len() <= target.len() + 1 {
        if let Some(polished) = try_subset(target, nodes, &support, tol) {
            if reconstruction_residual(target, nodes, &polished)
                <= reconstruction_residual(target, nodes, &theta)
            {
                theta = polished;
            }
        }
    }
    (reconstruction_residual(target, nodes, &theta) <= tol).then_some(theta)
}

/// `(||a||_target, prod_k ||a||_{q(k)}^{theta_k})`.
pub fn interpolation_bound(
    t: &Tensor,
    target: &ExponentVector,
    nodes: &[ExponentNode],
    weights: &ConvexWeights,
) -> Result<(f64, f64)> {
    check_dimensions(target, nodes)?;
    if weights.theta.len() != nodes.len() {
        return Err(Error::InconsistentWeights(format!(
            "{} weights for {} nodes",
            weights.theta.len(),
            nodes.len()
        )));
    }
    let residual = reconstruction_residual(target, nodes, &weights.theta);
    if residual > DEFAULT_TOL {
        return Err(Error::InconsistentWeights(format!(
            "reciprocal identity violated by {residual:e}"
        )));
    }
    let lhs = mixed_norm(t, target)?;
    let mut rhs = 1.0;
    for (node, &w) in nodes.iter().zip(&weights.theta) {
        if w > 0.0 {
            rhs *= mixed_norm(t, &node.q)?.powf(w);
        }
    }
    Ok((lhs, rhs))
}
