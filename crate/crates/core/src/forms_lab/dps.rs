//! Scalar mixed-norm estimate for forms that are multiple summing on each
//! block of a partition of the slots.
//!
//! For blocks `C_1, ..., C_n` and exponents `r_k`, the weights
//! `theta = f_n(r)` make every interpolated exponent equal to
//! `omega_n(r)`, so the left side is the block mixed norm of the value array
//! with all exponents `omega_n(r)`. The right side is
//! `||U|| prod_k (A_{r_k}^{m - |C_k|} C_{|C_k|,t})^{theta_k}`, which uses the
//! coefficient inequality on each block as an upper bound for the summing
//! norm there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bh::{random_weak_families, Verdict};
use super::form::{MultilinearForm, VectorFamily};
use super::sup_norm::{sup_norm_auto, SupNormOptions};
use crate::constants::{bh_exponent, c_constant_closed, f_n, khinchine, omega_n, Mode};
use crate::error::{Error, Result};
use crate::interpolation::{find_convex_weights, ExponentNode, DEFAULT_TOL};
use crate::mixed_norms::block_mixed_norm;
use crate::rng::trial_rng;
use crate::tensor::{ExponentVector, OrderedPartition};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpsOptions {
    /// Random family draws on top of the basis families.
    pub trials: usize,
    /// Vectors per family; 0 means the largest slot dimension.
    pub family_size: usize,
    pub seed: u64,
    pub sup: SupNormOptions,
}

impl Default for DpsOptions {
    fn default() -> Self {
        Self { trials: 20, family_size: 0, seed: 0, sup: SupNormOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpsReport {
    /// Common interpolated exponent `omega_n(r)`.
    pub exponent: f64,
    pub theta: Vec<f64>,
    /// Left side for the basis families, i.e. on the coefficients.
    pub basis_lhs: f64,
    /// Largest left side over all families tried.
    pub worst_lhs: f64,
    pub rhs: f64,
    pub norm: f64,
    pub norm_exact: bool,
    /// `basis_lhs / norm`.
    pub basis_ratio: f64,
    /// `rhs / norm`.
    pub bound: f64,
    pub verdict: Verdict,
    /// Families attaining `worst_lhs`.
    #[serde(skip)]
    pub worst_families: Vec<VectorFamily>,
    /// Arguments attaining `norm`.
    #[serde(skip)]
    pub certificate: Vec<Vec<Complex64>>,
}

fn check_inputs(u: &MultilinearForm, blocks: &[Vec<usize>], r_list: &[f64], t: f64) -> Result<()> {
    let m = u.order();
    if blocks.len() < 2 {
        return Err(Error::InvalidPartition("at least two blocks are needed".into()));
    }
    OrderedPartition::new(blocks.to_vec(), vec![1.0; blocks.len()], m)?;
    if r_list.len() != blocks.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} summing exponents for {} blocks",
            r_list.len(),
            blocks.len()
        )));
    }
    for (block, &r) in blocks.iter().zip(r_list) {
        let lo = bh_exponent(block.len(), t)?;
        if !(r >= lo && r < 2.0) {
            return Err(Error::InvalidExponent {
                value: r,
                reason: "block exponent must lie in [bh_exponent(|block|, t), 2)",
            });
        }
    }
    Ok(())
}

/// The weights `f_n(r)`, cross-checked against a convex decomposition of
/// the uniform `omega_n(r)` target over the block nodes.
fn block_weights(r_list: &[f64]) -> Result<(f64, Vec<f64>)> {
    let omega = omega_n(r_list, 2.0, Mode::Closed)?;
    let theta = f_n(r_list, 2.0, Mode::Closed)?;
    let n = r_list.len();
    let nodes: Vec<ExponentNode> = (0..n)
        .map(|k| {
            let q: Vec<f64> = (0..n).map(|j| if j == k { r_list[k] } else { 2.0 }).collect();
            ExponentVector::new(q).map(ExponentNode::new)
        })
        .collect::<Result<_>>()?;
    let target = ExponentVector::uniform(omega, n)?;
    let found = find_convex_weights(&target, &nodes, DEFAULT_TOL)?
        .ok_or_else(|| Error::InconsistentWeights("uniform target outside the node hull".into()))?;
    let gap = found.theta().iter().zip(&theta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-9 {
        return Err(Error::InconsistentWeights(format!("f_n and the convex decomposition differ by {gap:e}")));
    }
    Ok((omega, theta))
}

/// One-sided check of the block mixed-norm estimate. The verdict is
/// `Holds` or `Inconclusive`, never `Violated`: the right side rests on
/// upper bounds for summing norms that cannot be computed.
pub fn dps_mixed_diagnostic(
    u: &MultilinearForm,
    blocks: &[Vec<usize>],
    r_list: &[f64],
    t: f64,
    opts: &DpsOptions,
) -> Result<DpsReport> {
    check_inputs(u, blocks, r_list, t)?;
    if u.coefficients().is_zero() {
        return Err(Error::ZeroForm);
    }
    let (exponent, theta) = block_weights(r_list)?;
    let part = OrderedPartition::new(blocks.to_vec(), vec![exponent; blocks.len()], u.order())?;
    let norm = sup_norm_auto(u, &opts.sup)?;
    let rhs = norm.value * rhs_factor(u, blocks, r_list, t, &theta)?;

    let size = if opts.family_size == 0 { u.dims().iter().copied().max().unwrap_or(1) } else { opts.family_size };
    let basis: Vec<VectorFamily> =
        u.dims().iter().map(|&d| VectorFamily::basis(d, size)).collect::<Result<_>>()?;
    let basis_lhs = block_mixed_norm(&u.value_array(&basis)?, &part)?;
    let (mut worst_lhs, mut worst_families) = (basis_lhs, basis);
    for trial in 0..opts.trials {
        let mut rng = trial_rng(opts.seed, trial as u64);
        let families = random_weak_families(u, size, &mut rng)?;
        let lhs = block_mixed_norm(&u.value_array(&families)?, &part)?;
        if lhs > worst_lhs {
            worst_lhs = lhs;
            worst_families = families;
        }
    }
    let verdict = if worst_lhs <= rhs * (1.0 + crate::INEQUALITY_REL_TOL) {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    };
    Ok(DpsReport {
        exponent,
        theta,
        basis_lhs,
        worst_lhs,
        rhs,
        norm: norm.value,
        norm_exact: norm.exact,
        basis_ratio: basis_lhs / norm.value,
        bound: rhs / norm.value,
        verdict,
        worst_families,
        certificate: norm.certificate,
    })
}

/// `prod_k (A_{r_k}^{m - |C_k|} C_{|C_k|,t})^{theta_k}`.
fn rhs_factor(u: &MultilinearForm, blocks: &[Vec<usize>], r_list: &[f64], t: f64, theta: &[f64]) -> Result<f64> {
    let field = u.field();
    let m = u.order();
    let mut ln_factor = 0.0;
    for ((block, &r), &w) in blocks.iter().zip(r_list).zip(theta) {
        let a = khinchine(r, field)?.ln() * (m - block.len()) as f64;
        ln_factor += w * (a + c_constant_closed(block.len(), t, field)?.ln());
    }
    Ok(ln_factor.exp())
}

/// Both sides of the estimate for given families, with the norm taken as
/// `|U(certificate)|`.
pub fn dps_sides(
    u: &MultilinearForm,
    blocks: &[Vec<usize>],
    r_list: &[f64],
    t: f64,
    families: &[VectorFamily],
    certificate: &[Vec<Complex64>],
) -> Result<(f64, f64)> {
    check_inputs(u, blocks, r_list, t)?;
    let (exponent, theta) = block_weights(r_list)?;
    let part = OrderedPartition::new(blocks.to_vec(), vec![exponent; blocks.len()], u.order())?;
    let lhs = block_mixed_norm(&u.value_array(families)?, &part)?;
    let rhs = u.evaluate(certificate)?.norm() * rhs_factor(u, blocks, r_list, t, &theta)?;
    Ok((lhs, rhs))
}
