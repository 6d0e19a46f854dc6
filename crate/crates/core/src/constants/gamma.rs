use crate::error::{Error, Result};

/// Gamma function for positive arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check(x)?;
    Ok(libm::tgamma(x))
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn ln_gamma_fn(x: f64) -> Result<f64> {
    check(x)?;
    Ok(libm::lgamma(x))
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("Gamma needs a positive finite argument, got {x}")))
    }
}
