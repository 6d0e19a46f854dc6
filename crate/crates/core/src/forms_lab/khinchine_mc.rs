//! Empirical and enumerated Khinchine ratios
//! `(sum |x_k|^2)^(1/2) / (E|sum eps_k x_k|^p)^(1/p)` with Rademacher (real) or
//! Steinhaus (complex) variables.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::constants::khinchine;
use crate::error::{Error, Result};
use crate::rng::{trial_rng, unimodular};
use crate::tensor::Field;

pub const MIN_SAMPLES: usize = 10_000;
pub const EXACT_REAL_MAX_LEN: usize = 20;
pub const EXACT_COMPLEX_MAX_LEN: usize = 6;
/// Roots of unity per coordinate in the complex quadrature.
pub const COMPLEX_QUADRATURE_POINTS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct KhinchineEstimate {
    pub ratio: f64,
    /// Delta-method relative standard error of `ratio`.
    pub rel_stderr: f64,
    /// `A_p` for the field.
    pub bound: f64,
    /// `ratio <= bound * (1 + 3 rel_stderr)`.
    pub within_contract: bool,
}

fn check_input(x: &[Complex64], p: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::InvalidExponent { value: p, reason: "Khinchine ratios need p in [1, 2)" });
    }
    let l2 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if l2 == 0.0 || x.is_empty() {
        return Err(Error::ZeroVector);
    }
    Ok(l2)
}

/// Monte Carlo estimate with `samples` draws from the stream `(seed, 0)`.
pub fn khinchine_mc(x: &[Complex64], p: f64, field: Field, samples: usize, seed: u64) -> Result<KhinchineEstimate> {
    let l2 = check_input(x, p)?;
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange(format!("at least {MIN_SAMPLES} samples are needed, got {samples}")));
    }
    let mut rng = trial_rng(seed, 0);
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..samples {
        let s: Complex64 = x.iter().map(|&xk| unimodular(&mut rng, field) * xk).sum();
        let v = (s.norm() / l2).powf(p);
        // Welford update
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = samples as f64;
    let stderr = (m2 / (n - 1.0)).sqrt() / n.sqrt();
    let ratio = mean.powf(-1.0 / p);
    let rel_stderr = stderr / (p * mean);
    let bound = khinchine(p, field)?;
    Ok(KhinchineEstimate { ratio, rel_stderr, bound, within_contract: ratio <= bound * (1.0 + 3.0 * rel_stderr) })
}

/// Exact ratio over all sign patterns (real, `n <= 20`) or the product
/// quadrature on 64th roots of unity (complex, `n <= 6`). In both cases the
/// first variable is fixed to 1, which leaves the distribution of
/// `|sum eps_k x_k|` unchanged.
pub fn khinchine_exact_small(x: &[Complex64], p: f64, field: Field) -> Result<f64> {
    let l2 = check_input(x, p)?;
    let limit = match field {
        Field::Real => EXACT_REAL_MAX_LEN,
        Field::Complex => EXACT_COMPLEX_MAX_LEN,
    };
    if x.len() > limit {
        return Err(Error::OutOfRange(format!(
            "exact {field} enumeration supports at most {limit} coordinates, got {}",
            x.len()
        )));
    }
    let points: Vec<Complex64> = match field {
        Field::Real => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        Field::Complex => (0..COMPLEX_QUADRATURE_POINTS)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / COMPLEX_QUADRATURE_POINTS as f64))
            .collect(),
    };
    let scaled: Vec<Complex64> = x.iter().map(|z| z / l2).collect();
    let total = accumulate(&scaled[1..], &points, scaled[0], p);
    let count = (points.len() as f64).powi(x.len() as i32 - 1);
    Ok((total / count).powf(-1.0 / p))
}

fn accumulate(rest: &[Complex64], points: &[Complex64], partial: Complex64, p: f64) -> f64 {
    match rest.split_first() {
        None => partial.norm().powf(p),
        Some((&xk, tail)) => points.iter().map(|&e| accumulate(tail, points, partial + e * xk, p)).sum(),
    }
}
