//! Seeded random streams and random instances for fuzzing.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`,
//! so campaigns are reproducible and trials are independent of evaluation
//! order.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::tensor::{Field, Tensor};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Coefficient distribution of random forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// Standard real Gaussian, or complex Gaussian with `E|z|^2 = 1`.
    Gaussian,
    /// Independent `+-1` entries.
    Sign,
}

pub fn gaussian_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        }
    }
}

pub fn sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// A random sign (real) or a uniform phase (complex).
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => Complex64::new(sign(rng), 0.0),
        Field::Complex => Complex64::from_polar(1.0, rng.random::<f64>() * TAU),
    }
}

pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: Vec<usize>, ensemble: Ensemble) -> Tensor {
    let len = shape.iter().product();
    let entries = (0..len)
        .map(|_| match ensemble {
            Ensemble::Gaussian => gaussian_scalar(rng, field),
            Ensemble::Sign => Complex64::new(sign(rng), 0.0),
        })
        .collect();
    Tensor::new(field, shape, entries).expect("shape and entries agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(7, 3).random()).collect();
        let mut r = trial_rng(7, 3);
        let b: Vec<u64> = (0..4).map(|_| r.random()).collect();
        assert_eq!(a[0], b[0]);
        let mut s = trial_rng(7, 4);
        assert_ne!(b[0], s.random::<u64>());
        let mut t = trial_rng(8, 3);
        assert_ne!(b[0], t.random::<u64>());
    }

    #[test]
    fn tensors_have_requested_field() {
        let mut rng = trial_rng(1, 0);
        let t = random_tensor(&mut rng, Field::Real, vec![2, 3], Ensemble::Gaussian);
        assert!(t.entries().iter().all(|z| z.im == 0.0));
        let s = random_tensor(&mut rng, Field::Complex, vec![4], Ensemble::Sign);
        assert!(s.abs_entries().iter().all(|&x| x == 1.0));
        let u = unimodular(&mut rng, Field::Complex);
        assert!((u.norm() - 1.0).abs() < 1e-15);
    }
}
