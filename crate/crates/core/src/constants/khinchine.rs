use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use super::gamma::{gamma_fn, ln_gamma_fn};
use crate::error::{Error, Result};
use crate::tensor::Field;

/// The exponent `p0` in (1, 2) where the two real Khinchine branches meet,
/// i.e. the root of `Gamma((p+1)/2) = sqrt(pi)/2` other than `p = 2`.
pub fn p_zero() -> f64 {
    static P0: OnceLock<f64> = OnceLock::new();
    *P0.get_or_init(|| {
        let target = PI.sqrt() / 2.0;
        let g = |p: f64| gamma_fn((p + 1.0) / 2.0).expect("positive argument") - target;
        // Gamma((p+1)/2) decreases until p ~ 1.923 and comes back to sqrt(pi)/2
        // at p = 2, so [1, 1.9] brackets the interior root only.
        let (mut lo, mut hi) = (1.0f64, 1.9f64);
        debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

fn check_p(p: f64) -> Result<()> {
    if (1.0..=2.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("Khinchine constant needs 1 <= p <= 2, got {p}")))
    }
}

/// Logarithm of the optimal Khinchine constant `A_p` in
/// `(sum |x_k|^2)^(1/2) <= A_p (E |sum eps_k x_k|^p)^(1/p)`, with Rademacher
/// signs for real scalars and Steinhaus variables for complex ones.
pub fn ln_khinchine(p: f64, field: Field) -> Result<f64> {
    check_p(p)?;
    if p == 2.0 {
        return Ok(0.0);
    }
    Ok(match field {
        Field::Complex => -ln_gamma_fn((p + 2.0) / 2.0)? / p,
        Field::Real if p <= p_zero() => (1.0 / p - 0.5) * LN_2,
        Field::Real => -0.5 * LN_2 - (ln_gamma_fn((p + 1.0) / 2.0)? - 0.5 * PI.ln()) / p,
    })
}

/// Optimal Khinchine constant `A_p^K`; see [`ln_khinchine`].
pub fn khinchine(p: f64, field: Field) -> Result<f64> {
    ln_khinchine(p, field).map(f64::exp)
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::approx_constant, clippy::inconsistent_digit_grouping)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_root() {
        let p0 = p_zero();
        assert!((1.84..1.86).contains(&p0));
        assert!((gamma_fn((p0 + 1.0) / 2.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-13);
        // bisection oracle at 40 digits: 1.8474163360763421293976936897
        assert!((p0 - 1.847_416_336_076_342_1).abs() < 1e-13);
    }

    #[test]
    fn endpoint_values() {
        for field in [Field::Real, Field::Complex] {
            assert_eq!(khinchine(2.0, field).unwrap(), 1.0);
        }
        assert!((khinchine(1.0, Field::Real).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((khinchine(1.0, Field::Complex).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!(khinchine(0.99, Field::Real).is_err());
        assert!(khinchine(2.01, Field::Complex).is_err());
    }

    #[test]
    fn complex_formula_at_two_is_one() {
        // Gamma(2)^(-1/2) evaluated through the general branch
        let v = (-ln_gamma_fn(2.0).unwrap() / 2.0).exp();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn real_branches_meet_at_p0() {
        let p0 = p_zero();
        let left = (1.0 / p0 - 0.5) * LN_2;
        let right = -0.5 * LN_2 - (ln_gamma_fn((p0 + 1.0) / 2.0).unwrap() - 0.5 * PI.ln()) / p0;
        assert!((left.exp() - right.exp()).abs() < 1e-10);
        let below = khinchine(p0 - 1e-9, Field::Real).unwrap();
        let above = khinchine(p0 + 1e-9, Field::Real).unwrap();
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn decreasing_in_p() {
        for field in [Field::Real, Field::Complex] {
            let vals: Vec<f64> = (0..=100).map(|i| khinchine(1.0 + i as f64 / 100.0, field).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{field}");
            assert!(vals.iter().all(|&v| v >= 1.0));
        }
    }
}
