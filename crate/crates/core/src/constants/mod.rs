//! Khinchine constants, the `omega`/`f` exponent calculus, and the
//! constants `C_{m,t}` of the Bohnenblust–Hille type inequalities.

mod bh;
mod exponents;
mod gamma;
mod khinchine;
mod report;

pub use bh::{
    asymptotic_envelope, c_constant_closed, c_constant_displayed, c_constant_recursive,
    ln_c_constant_closed, m0_threshold, ClosedForm, Envelope, EULER_GAMMA,
};
pub use exponents::{
    bh_exponent, exponent_comparison, f2, f_n, omega2, omega_n, r_n_exponent, sigma_n,
    ComparisonVerdict, ExponentComparison, KahaneTable, Mode, SummingParams,
};
pub use gamma::{gamma_fn, ln_gamma_fn};
pub use khinchine::{khinchine, ln_khinchine, p_zero};
pub use report::{ConstantsReport, ConstantsRow};
