use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::form::{MultilinearForm, VectorFamily};
use super::sup_norm::{sup_norm_auto, SupNormOptions};
use crate::constants::{bh_exponent, c_constant_closed};
use crate::error::{Error, Result};
use crate::mixed_norms::power_mean_norm;
use crate::rng::{gaussian_scalar, sign, trial_rng};
use crate::tensor::Field;

/// Slack on `ratio <= C_{m,t}` checks.
pub const BH_REL_TOL: f64 = 1e-9;

/// Outcome of an inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    /// The check failed but one side is only an estimate, so nothing is
    /// concluded about the inequality.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BhRatio {
    /// `(sum |a_i|^rho)^(1/rho)` with `rho = 2tm/(2+(m-1)t)`.
    pub lhs: f64,
    pub norm: f64,
    pub norm_exact: bool,
    pub ratio: f64,
    /// `C_{m,t}` for the form's field.
    pub bound: f64,
    pub verdict: Verdict,
    pub certificate: Vec<Vec<Complex64>>,
}

/// Coefficient side of the inequality.
pub fn bh_lhs(u: &MultilinearForm, t: f64) -> Result<f64> {
    let rho = bh_exponent(u.order(), t)?;
    Ok(power_mean_norm(&u.coefficients().abs_entries(), rho))
}

/// Compares `lhs / ||U||` with `C_{m,t}`. With an exact norm a failure is a
/// violation; with an ascent norm (a lower bound, so the ratio is
/// overestimated) it is only inconclusive.
pub fn bh_ratio(u: &MultilinearForm, t: f64, opts: &SupNormOptions) -> Result<BhRatio> {
    let lhs = bh_lhs(u, t)?;
    if u.coefficients().is_zero() {
        return Err(Error::ZeroForm);
    }
    let bound = c_constant_closed(u.order(), t, u.field())?;
    let norm = sup_norm_auto(u, opts)?;
    let ratio = lhs / norm.value;
    let verdict = if ratio <= bound * (1.0 + BH_REL_TOL) {
        Verdict::Holds
    } else if norm.exact {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(BhRatio {
        lhs,
        norm: norm.value,
        norm_exact: norm.exact,
        ratio,
        bound,
        verdict,
        certificate: norm.certificate,
    })
}

/// Best `(sum_{i in [N]^m} |U(x^1_{i_1}, ..., x^m_{i_m})|^r)^(1/r)` found over
/// weak-`l1`-normalised families.
#[derive(Clone, Debug, PartialEq)]
pub struct SummingLowerBound {
    pub value: f64,
    pub families: Vec<VectorFamily>,
}

pub fn summing_value(u: &MultilinearForm, families: &[VectorFamily], r: f64) -> Result<f64> {
    let values = u.value_array(families)?;
    Ok(power_mean_norm(&values.abs_entries(), r))
}

#[derive(Clone, Copy)]
enum Candidate {
    Gaussian,
    Signs,
    Repeated,
    Fourier,
}

fn random_family<R: Rng + ?Sized>(rng: &mut R, kind: Candidate, field: Field, n: usize, d: usize) -> Vec<Vec<Complex64>> {
    match kind {
        Candidate::Gaussian => (0..n).map(|_| (0..d).map(|_| gaussian_scalar(rng, field)).collect()).collect(),
        Candidate::Signs => {
            (0..n).map(|_| (0..d).map(|_| Complex64::new(sign(rng), 0.0)).collect()).collect()
        }
        Candidate::Repeated => {
            let x: Vec<Complex64> = (0..d).map(|_| gaussian_scalar(rng, field)).collect();
            vec![x; n]
        }
        Candidate::Fourier => {
            let shift = rng.random_range(0..n.max(1));
            (0..n)
                .map(|i| {
                    (0..d)
                        .map(|j| Complex64::from_polar(1.0, TAU * ((i + shift) * j) as f64 / n as f64))
                        .collect()
                })
                .collect()
        }
    }
}

/// One weak-`l1`-normalised family of `family_size` vectors per slot, each
/// drawn from a randomly chosen candidate kind.
pub(crate) fn random_weak_families<R: Rng + ?Sized>(
    u: &MultilinearForm,
    family_size: usize,
    rng: &mut R,
) -> Result<Vec<VectorFamily>> {
    let field = u.field();
    let kinds: &[Candidate] = match field {
        Field::Real => &[Candidate::Gaussian, Candidate::Signs, Candidate::Repeated],
        Field::Complex => &[Candidate::Gaussian, Candidate::Signs, Candidate::Repeated, Candidate::Fourier],
    };
    u.dims()
        .iter()
        .map(|&d| {
            let kind = kinds[rng.random_range(0..kinds.len())];
            VectorFamily::new(random_family(rng, kind, field, family_size, d))?.normalized()
        })
        .collect()
}

/// Randomised search for a lower bound on the multiple `(r,1)`-summing
/// norm of `u`. The basis families are always tried first; they reproduce
/// the coefficient power sum.
pub fn summing_lower_bound(
    u: &MultilinearForm,
    r: f64,
    trials: usize,
    family_size: usize,
    seed: u64,
) -> Result<SummingLowerBound> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::OutOfRange(format!("summing exponent must be >= 1, got {r}")));
    }
    if family_size == 0 {
        return Err(Error::OutOfRange("family size must be positive".into()));
    }
    let basis: Vec<VectorFamily> =
        u.dims().iter().map(|&d| VectorFamily::basis(d, family_size)).collect::<Result<_>>()?;
    let mut best = SummingLowerBound { value: summing_value(u, &basis, r)?, families: basis };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let families = random_weak_families(u, family_size, &mut rng)?;
        let value = summing_value(u, &families, r)?;
        if value > best.value {
            best = SummingLowerBound { value, families };
        }
    }
    Ok(best)
}
