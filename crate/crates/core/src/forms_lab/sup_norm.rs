//! Sup norms of multilinear forms over products of `c0` unit balls.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::form::{partial_contraction, MultilinearForm};
use crate::error::{Error, Result};
use crate::rng::{trial_rng, unimodular};
use crate::tensor::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupNormMethod {
    /// Exhaustive search over sign vectors; exact for real forms.
    ExactSigns,
    /// Cyclic closed-form slot updates with restarts; a lower bound.
    AlternatingAscent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormOptions {
    /// Largest number of sign patterns ExactSigns may enumerate.
    pub max_patterns: u64,
    pub restarts: usize,
    pub max_cycles: usize,
    pub seed: u64,
}

impl Default for SupNormOptions {
    fn default() -> Self {
        Self { max_patterns: 1 << 24, restarts: 20, max_cycles: 100, seed: 0 }
    }
}

/// A sup-norm value and the arguments attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    /// True when `value` is the exact norm rather than a lower bound.
    pub exact: bool,
    pub certificate: Vec<Vec<Complex64>>,
}

pub fn sup_norm(u: &MultilinearForm, method: SupNormMethod, opts: &SupNormOptions) -> Result<SupNorm> {
    match method {
        SupNormMethod::ExactSigns => exact_signs(u, opts),
        SupNormMethod::AlternatingAscent => Ok(alternating_ascent(u, opts)),
    }
}

/// ExactSigns when the form is real and the enumeration fits the budget,
/// AlternatingAscent otherwise.
pub fn sup_norm_auto(u: &MultilinearForm, opts: &SupNormOptions) -> Result<SupNorm> {
    if u.field() == Field::Real && exact_pattern_count(u) <= opts.max_patterns {
        exact_signs(u, opts)
    } else {
        Ok(alternating_ascent(u, opts))
    }
}

/// Slot solved in closed form during enumeration: the largest one.
fn free_slot(u: &MultilinearForm) -> usize {
    let dims = u.dims();
    (0..dims.len()).rev().max_by_key(|&k| dims[k]).unwrap_or(0)
}

/// Number of sign patterns ExactSigns enumerates (saturating).
pub fn exact_pattern_count(u: &MultilinearForm) -> u64 {
    let free = free_slot(u);
    let bits: usize = u.dims().iter().enumerate().filter(|&(k, _)| k != free).map(|(_, &n)| n).sum();
    // one global sign is fixed
    let bits = bits.saturating_sub(1);
    if bits >= 64 {
        u64::MAX
    } else {
        1u64 << bits
    }
}

/// For a real form the map `x -> |U(x)|` is convex in each slot, so the sup
/// over the cube is attained at sign vectors; the largest slot is then
/// optimised in closed form as `sum_j |partial_j|`.
fn exact_signs(u: &MultilinearForm, opts: &SupNormOptions) -> Result<SupNorm> {
    if u.field() != Field::Real {
        return Err(Error::MethodFieldMismatch { method: "ExactSigns", field: "complex" });
    }
    let patterns = exact_pattern_count(u);
    if patterns > opts.max_patterns {
        return Err(Error::BudgetExceeded(format!(
            "{patterns} sign patterns exceed the budget of {}",
            opts.max_patterns
        )));
    }
    let dims = u.dims().to_vec();
    let free = free_slot(u);
    let coeffs = u.coefficients().real_entries();
    let enumerated: Vec<usize> = (0..dims.len()).filter(|&k| k != free).collect();
    let mut args: Vec<Vec<f64>> = dims.iter().map(|&n| vec![1.0; n]).collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_args = args.clone();
    for mask in 0..patterns {
        // bit b of the mask flips coordinate b + 1 of the concatenated sign vector
        let mut bit = 0usize;
        let mut first = true;
        for &k in &enumerated {
            for x in args[k].iter_mut() {
                if first {
                    first = false;
                    *x = 1.0;
                    continue;
                }
                *x = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
                bit += 1;
            }
        }
        let g = partial_contraction(&coeffs, &dims, &args, free);
        let value: f64 = g.iter().map(|x| x.abs()).sum();
        if value > best {
            best = value;
            args[free] = g.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect();
            best_args = args.clone();
        }
    }
    Ok(SupNorm { value: best.max(0.0), exact: true, certificate: to_complex(best_args) })
}

fn to_complex(args: Vec<Vec<f64>>) -> Vec<Vec<Complex64>> {
    args.into_iter().map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).collect()
}

/// Unimodular choice maximising `|sum_j g_j x_j|`: signs for real forms,
/// conjugate phases for complex ones.
fn best_response(g: &[Complex64], field: Field) -> Vec<Complex64> {
    g.iter()
        .map(|z| match field {
            Field::Real => Complex64::new(if z.re < 0.0 { -1.0 } else { 1.0 }, 0.0),
            Field::Complex => {
                let r = z.norm();
                if r == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    z.conj() / r
                }
            }
        })
        .collect()
}

fn alternating_ascent(u: &MultilinearForm, opts: &SupNormOptions) -> SupNorm {
    let field = u.field();
    let dims = u.dims().to_vec();
    let coeffs = u.coefficients().entries();
    let mut best = SupNorm { value: f64::NEG_INFINITY, exact: false, certificate: Vec::new() };
    for restart in 0..opts.restarts.max(1) {
        let mut args: Vec<Vec<Complex64>> = if restart == 0 {
            dims.iter().map(|&n| vec![Complex64::new(1.0, 0.0); n]).collect()
        } else {
            let mut rng = trial_rng(opts.seed, restart as u64);
            dims.iter().map(|&n| (0..n).map(|_| unimodular(&mut rng, field)).collect()).collect()
        };
        let mut value = f64::NEG_INFINITY;
        for _ in 0..opts.max_cycles.max(1) {
            let before = value;
            for slot in 0..dims.len() {
                let g = partial_contraction(coeffs, &dims, &args, slot);
                value = g.iter().map(|z| z.norm()).sum();
                args[slot] = best_response(&g, field);
            }
            if value - before <= 1e-12 * value.abs().max(1.0) {
                break;
            }
        }
        if value > best.value {
            best.value = value;
            best.certificate = args;
        }
    }
    best.value = best.value.max(0.0);
    best
}
