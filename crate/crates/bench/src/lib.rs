//! Fixed benchmark inputs shared by the criterion targets.

use bhsum_core::forms_lab::MultilinearForm;
use bhsum_core::rng::{random_tensor, trial_rng, Ensemble};
use bhsum_core::{Field, Tensor};

pub const SEED: u64 = 42;

pub fn gaussian_tensor(field: Field, shape: Vec<usize>) -> Tensor {
    random_tensor(&mut trial_rng(SEED, 0), field, shape, Ensemble::Gaussian)
}

pub fn real_form(shape: Vec<usize>) -> MultilinearForm {
    MultilinearForm::new(gaussian_tensor(Field::Real, shape))
}
