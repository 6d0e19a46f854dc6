//! Nested mixed norms of dense tensors and the two sides of the
//! Minkowski-type exchange inequality and the Blei inequality.
//!
//! All norms are evaluated on `|a_i| / max |a|` and rescaled at the end, so
//! power sums never overflow. Innermost flat sums use pairwise summation.

use crate::error::{Error, Result};
use crate::tensor::{check_exponent, ExponentVector, OrderedPartition, Tensor};

/// Pairwise sum of `x^p` over a slice.
fn pairwise_power_sum(values: &[f64], p: f64) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().map(|&x| if x == 0.0 { 0.0 } else { x.powf(p) }).sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_power_sum(lo, p) + pairwise_power_sum(hi, p)
}

/// `(sum x^p)^(1/p)` for nonnegative values; works for any `p > 0`.
pub(crate) fn power_mean_norm(values: &[f64], p: f64) -> f64 {
    let s = pairwise_power_sum(values, p);
    if s == 0.0 {
        0.0
    } else if p == 1.0 {
        s
    } else {
        s.powf(1.0 / p)
    }
}

/// Nested norm of nonnegative `values` laid out with `shape`; `exps[k]`
/// aggregates axis `k` and the last axis is innermost. Exponents only need
/// to be positive here.
pub(crate) fn nested_norm(values: &[f64], shape: &[usize], exps: &[f64]) -> f64 {
    debug_assert_eq!(shape.len(), exps.len());
    let scale = values.iter().fold(0.0f64, |m, &x| m.max(x));
    if scale == 0.0 {
        return 0.0;
    }
    let mut level: Vec<f64> = values.iter().map(|x| x / scale).collect();
    for k in (0..shape.len()).rev() {
        let n = shape[k];
        level = level.chunks_exact(n).map(|c| power_mean_norm(c, exps[k])).collect();
    }
    debug_assert_eq!(level.len(), 1);
    level[0] * scale
}

/// Flat `l_q` norm of all entries.
pub fn flat_norm(t: &Tensor, q: f64) -> Result<f64> {
    check_exponent(q)?;
    Ok(nested_norm(&t.abs_entries(), &[t.len()], &[q]))
}

/// Nested `l_{p_1}(l_{p_2}(...l_{p_m}))` norm; `p_m` is applied to the last
/// (fastest) axis.
pub fn mixed_norm(t: &Tensor, p: &ExponentVector) -> Result<f64> {
    if p.len() != t.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for a tensor of order {}",
            p.len(),
            t.order()
        )));
    }
    Ok(nested_norm(&t.abs_entries(), t.shape(), p.values()))
}

/// Mixed norm where block `C_j` of `part` contributes one flat `l_{q_j}`
/// aggregation over its multi-index, outer blocks first.
pub fn block_mixed_norm(t: &Tensor, part: &OrderedPartition) -> Result<f64> {
    part.validate(t.order())?;
    for &q in part.exponents() {
        check_exponent(q)?;
    }
    Ok(block_norm_unchecked(t, part.blocks(), part.exponents()))
}

fn block_norm_unchecked(t: &Tensor, blocks: &[Vec<usize>], exps: &[f64]) -> f64 {
    let perm: Vec<usize> = blocks.iter().flatten().copied().collect();
    let arranged = if perm.iter().enumerate().all(|(k, &a)| k == a) {
        t.clone()
    } else {
        t.permuted(&perm).expect("validated partition is a permutation")
    };
    let shape: Vec<usize> = blocks
        .iter()
        .map(|b| b.iter().map(|&a| t.shape()[a]).product())
        .collect();
    nested_norm(&arranged.abs_entries(), &shape, exps)
}

/// Both sides of the exchange inequality for `0 < p < q`:
/// `(sum_i (sum_j |a_ij|^p)^(q/p))^(1/q) <= (sum_j (sum_i |a_ij|^q)^(p/q))^(1/p)`.
pub fn minkowski_gap(t: &Tensor, p: f64, q: f64) -> Result<(f64, f64)> {
    if t.order() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "exchange inequality needs a matrix, got order {}",
            t.order()
        )));
    }
    if !(p > 0.0 && p.is_finite() && q.is_finite()) {
        return Err(Error::OutOfRange(format!("exponents must be positive and finite, got p={p}, q={q}")));
    }
    if p >= q {
        return Err(Error::OutOfRange(format!("need p < q, got p={p}, q={q}")));
    }
    let abs = t.abs_entries();
    let lhs = nested_norm(&abs, t.shape(), &[q, p]);
    let transposed = t.permuted(&[1, 0])?;
    let rhs = nested_norm(&transposed.abs_entries(), transposed.shape(), &[p, q]);
    Ok((lhs, rhs))
}

fn check_blei_params(m: usize, k: usize, s: f64, q: f64) -> Result<()> {
    if m == 0 || k == 0 || k > m {
        return Err(Error::OutOfRange(format!("need 1 <= k <= m, got k={k}, m={m}")));
    }
    if !(s.is_finite() && q.is_finite() && 1.0 <= s && s <= q) {
        return Err(Error::OutOfRange(format!("need 1 <= s <= q, got s={s}, q={q}")));
    }
    Ok(())
}

/// Blei exponent `msq / (kq + (m - k)s)`.
pub fn blei_rho(m: usize, k: usize, s: f64, q: f64) -> Result<f64> {
    check_blei_params(m, k, s, q)?;
    let (mf, kf) = (m as f64, k as f64);
    Ok(mf * s * q / (kf * q + (mf - kf) * s))
}

/// All `k`-subsets of `{0, ..., m-1}` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < m - k + i) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

/// Both sides of the Blei inequality: the flat `l_rho` norm against the
/// geometric mean over `S` in `P_k(m)` of the `(l_s over i_S, l_q over i_{S^c})`
/// block norms.
pub fn blei_bound(t: &Tensor, k: usize, s: f64, q: f64) -> Result<(f64, f64)> {
    let m = t.order();
    let rho = blei_rho(m, k, s, q)?;
    let lhs = nested_norm(&t.abs_entries(), &[t.len()], &[rho]);
    let subsets = k_subsets(m, k);
    let weight = 1.0 / subsets.len() as f64;
    let mut rhs = 1.0;
    for subset in subsets {
        let complement: Vec<usize> = (0..m).filter(|a| !subset.contains(a)).collect();
        let factor = if complement.is_empty() {
            block_norm_unchecked(t, &[subset], &[s])
        } else {
            block_norm_unchecked(t, &[subset, complement], &[s, q])
        };
        rhs *= factor.powf(weight);
    }
    Ok((lhs, rhs))
}
