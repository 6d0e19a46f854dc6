use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::khinchine::khinchine;
use crate::error::{Error, Result};
use crate::tensor::Field;

/// Evaluation route for `omega_n` and `f_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// The pairwise recursion through `omega_2` and `f`.
    Recursive,
    /// `omega_n = qR/(1+R)` and `f_n^k = r_k / (R (q - r_k))` with `R = sum r_k/(q-r_k)`.
    Closed,
}

fn check_q(q: f64) -> Result<()> {
    if q >= 2.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("cotype exponent must satisfy 2 <= q < inf, got {q}")))
    }
}

fn check_r(r: f64, q: f64) -> Result<()> {
    if (1.0..q).contains(&r) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("exponent {r} outside [1, {q})")))
    }
}

/// `omega(x, y) = (q^2 (x + y) - 2qxy) / (q^2 - xy)`.
pub fn omega2(x: f64, y: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    check_r(x, q)?;
    check_r(y, q)?;
    Ok(merge(x, q - x, y, q - y, q).0)
}

/// `f(x, y) = (q^2 x - qxy) / (q^2 (x + y) - 2qxy)`.
pub fn f2(x: f64, y: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    check_r(x, q)?;
    check_r(y, q)?;
    Ok(merge(x, q - x, y, q - y, q).2)
}

/// `(omega(x, y), q - omega(x, y), f(x, y), f(y, x))` from the exponents and their
/// gaps to `q`, written as sums and products of positive terms. Carrying the
/// gap avoids the cancellation in `q - omega` once `omega` nears `q`.
fn merge(x: f64, gx: f64, y: f64, gy: f64, q: f64) -> (f64, f64, f64, f64) {
    let (a, b) = (x * gy, y * gx);
    let den = q * gy + b;
    (q * (a + b) / den, q * gx * gy / den, a / (a + b), b / (a + b))
}

fn check_list(rs: &[f64], q: f64) -> Result<()> {
    check_q(q)?;
    if rs.is_empty() {
        return Err(Error::OutOfRange("empty exponent list".into()));
    }
    rs.iter().try_for_each(|&r| check_r(r, q))
}

fn closed_r_sum(rs: &[f64], q: f64) -> f64 {
    rs.iter().map(|r| r / (q - r)).sum()
}

pub fn omega_n(rs: &[f64], q: f64, mode: Mode) -> Result<f64> {
    check_list(rs, q)?;
    match mode {
        Mode::Closed => {
            let big_r = closed_r_sum(rs, q);
            Ok(q * big_r / (1.0 + big_r))
        }
        Mode::Recursive => {
            let (omega, _) = rs[1..].iter().fold((rs[0], q - rs[0]), |(w, g), &x| {
                let (w, g, _, _) = merge(w, g, x, q - x, q);
                (w, g)
            });
            Ok(omega)
        }
    }
}

pub fn f_n(rs: &[f64], q: f64, mode: Mode) -> Result<Vec<f64>> {
    check_list(rs, q)?;
    match mode {
        Mode::Closed => {
            let big_r = closed_r_sum(rs, q);
            Ok(rs.iter().map(|r| r / (big_r * (q - r))).collect())
        }
        Mode::Recursive => {
            let mut weights = vec![1.0];
            let (mut omega, mut gap) = (rs[0], q - rs[0]);
            for &x in &rs[1..] {
                let (w, g, shrink, fresh) = merge(omega, gap, x, q - x, q);
                weights.iter_mut().for_each(|w| *w *= shrink);
                weights.push(fresh);
                (omega, gap) = (w, g);
            }
            Ok(weights)
        }
    }
}

/// Source of the Kahane constants `K_{r,2}` of the target space.
#[derive(Clone)]
pub enum KahaneTable {
    /// Scalar target: `K_{r,2}` is the Khinchine constant of the field.
    Scalar(Field),
    /// Explicit `(r, K_{r,2})` pairs, matched to within `1e-12`.
    Supplied(Vec<(f64, f64)>),
    /// Caller-provided lookup.
    Hook(Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>),
}

impl fmt::Debug for KahaneTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KahaneTable::Scalar(field) => f.debug_tuple("Scalar").field(field).finish(),
            KahaneTable::Supplied(table) => f.debug_tuple("Supplied").field(table).finish(),
            KahaneTable::Hook(_) => f.write_str("Hook(..)"),
        }
    }
}

impl KahaneTable {
    pub fn lookup(&self, r: f64) -> Result<f64> {
        let found = match self {
            KahaneTable::Scalar(field) => Some(khinchine(r, *field)?),
            KahaneTable::Supplied(table) => {
                table.iter().find(|(x, _)| (x - r).abs() <= 1e-12).map(|&(_, k)| k)
            }
            KahaneTable::Hook(hook) => hook(r),
        };
        found.ok_or(Error::MissingKahaneConstant(r))
    }
}

/// Data of a multiple-summing estimate over blocks `C_1, ..., C_n`.
#[derive(Clone, Debug)]
pub struct SummingParams {
    pub q: f64,
    pub r_list: Vec<f64>,
    pub block_sizes: Vec<usize>,
    /// Cotype constant `C_q(Y)`, supplied by the caller.
    pub cotype_constant: f64,
    pub kahane: KahaneTable,
}

impl SummingParams {
    /// Scalar target: `q = 2`, `C_2 = 1`, Kahane constants from Khinchine.
    pub fn scalar(field: Field, r_list: Vec<f64>, block_sizes: Vec<usize>) -> Self {
        Self { q: 2.0, r_list, block_sizes, cotype_constant: 1.0, kahane: KahaneTable::Scalar(field) }
    }

    /// `A_{q,r}(Y) = C_q(Y) K_{r,2}`.
    pub fn a_constant(&self, r: f64) -> Result<f64> {
        Ok(self.cotype_constant * self.kahane.lookup(r)?)
    }

    fn validate(&self) -> Result<()> {
        check_list(&self.r_list, self.q)?;
        if self.r_list.len() < 2 {
            return Err(Error::OutOfRange("sigma_n needs at least two blocks".into()));
        }
        if self.block_sizes.len() != self.r_list.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} block sizes for {} exponents",
                self.block_sizes.len(),
                self.r_list.len()
            )));
        }
        if self.block_sizes.contains(&0) {
            return Err(Error::OutOfRange("block sizes must be positive".into()));
        }
        if !(self.cotype_constant >= 1.0 && self.cotype_constant.is_finite()) {
            return Err(Error::OutOfRange(format!("cotype constant {} < 1", self.cotype_constant)));
        }
        Ok(())
    }
}

/// The constant `sigma_n` of the multiple-summing estimate, built by the
/// two-block formula and then block by block.
pub fn sigma_n(params: &SummingParams) -> Result<f64> {
    params.validate()?;
    let q = params.q;
    let rs = &params.r_list;
    let sizes = &params.block_sizes;
    let pow = |r: f64, e: usize| -> Result<f64> { Ok(params.a_constant(r)?.powi(e as i32)) };

    let mut sigma = pow(rs[0], sizes[1])?.powf(f2(rs[0], rs[1], q)?)
        * pow(rs[1], sizes[0])?.powf(f2(rs[1], rs[0], q)?);
    let mut omega = omega2(rs[1], rs[0], q)?;
    let mut covered = sizes[0] + sizes[1];
    for (&r, &size) in rs.iter().zip(sizes).skip(2) {
        let inner = f2(omega, r, q)?;
        sigma = pow(r, covered)?.powf(f2(r, omega, q)?) * pow(omega, size)?.powf(inner) * sigma.powf(inner);
        omega = omega2(r, omega, q)?;
        covered += size;
    }
    Ok(sigma)
}

fn check_bh(m: usize, t: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    if !(1.0..2.0).contains(&t) {
        return Err(Error::OutOfRange(format!("t must lie in [1, 2), got {t}")));
    }
    Ok(())
}

pub(crate) fn checked_bh(m: usize, t: f64) -> Result<()> {
    check_bh(m, t)
}

/// The inequality exponent `2tm / (2 + (m - 1)t)`.
pub fn bh_exponent(m: usize, t: f64) -> Result<f64> {
    check_bh(m, t)?;
    let mf = m as f64;
    Ok(2.0 * t * mf / (2.0 + (mf - 1.0) * t))
}

/// `qrN / (nq + (N - n) r)`: the summing exponent in every `N`-subset when
/// the operator is `(r,1)`-summing in every `n`-subset.
pub fn r_n_exponent(n: usize, big_n: usize, q: f64, r: f64) -> Result<f64> {
    if !(1 <= n && n < big_n) {
        return Err(Error::OutOfRange(format!("need 1 <= n < N, got n={n}, N={big_n}")));
    }
    if !(1.0 <= r && r <= q && q.is_finite()) {
        return Err(Error::OutOfRange(format!("need 1 <= r <= q, got r={r}, q={q}")));
    }
    let (nf, bf) = (n as f64, big_n as f64);
    Ok(q * r * bf / (nf * q + (bf - nf) * r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonVerdict {
    /// The block-decomposition exponent is strictly larger.
    Strict,
    Equal,
    /// The block-decomposition exponent is smaller; never expected.
    Reversed,
}

impl fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonVerdict::Strict => "strict",
            ComparisonVerdict::Equal => "equal",
            ComparisonVerdict::Reversed => "reversed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentComparison {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub q: f64,
    pub r: f64,
    pub k: usize,
    pub l: usize,
    /// Exponent from splitting into `k` blocks of size `n` plus a remainder.
    pub old: f64,
    /// `r_N` from [`r_n_exponent`].
    pub new: f64,
    pub verdict: ComparisonVerdict,
}

/// Compares the exponent obtained by splitting `N = kn + l` coordinates into
/// blocks with `r_N`.
pub fn exponent_comparison(n: usize, big_n: usize, q: f64, r: f64) -> Result<ExponentComparison> {
    let new = r_n_exponent(n, big_n, q, r)?;
    let (k, l) = (big_n / n, big_n % n);
    let kf = k as f64;
    let old = if l != 0 { q * (kf + 1.0) * r / (q + kf * r) } else { q * kf * r / (q + (kf - 1.0) * r) };
    let verdict = if (old - new).abs() <= 1e-12 * new {
        ComparisonVerdict::Equal
    } else if old > new {
        ComparisonVerdict::Strict
    } else {
        ComparisonVerdict::Reversed
    };
    Ok(ExponentComparison { n, big_n, q, r, k, l, old, new, verdict })
}
