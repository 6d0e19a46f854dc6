//! Seeded fuzz campaigns over the inequalities, with JSON reports whose
//! witnesses can be replayed.
//!
//! Trial `i` of a campaign with seed `s` draws everything from the stream
//! `(s, i)`, so a report is determined by its configuration.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constants::{bh_exponent, c_constant_closed, khinchine};
use crate::error::{Error, Result};
use crate::forms_lab::{
    bh_lhs, dps_mixed_diagnostic, dps_sides, khinchine_exact_small, sup_norm_auto, DpsOptions, MultilinearForm,
    SupNormOptions, VectorFamily, Verdict, BH_REL_TOL,
};
use crate::interpolation::{find_convex_weights, interpolation_bound, ConvexWeights, ExponentNode, DEFAULT_TOL};
use crate::mixed_norms::{blei_bound, minkowski_gap};
use crate::rng::{gaussian_scalar, random_tensor, trial_rng, Ensemble};
use crate::tensor::{ExponentVector, Field, Tensor, TensorFile};
use crate::INEQUALITY_REL_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Minkowski,
    Interpolation,
    Blei,
    Bh,
    Khinchine,
    Dps,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Minkowski, Check::Interpolation, Check::Blei, Check::Bh, Check::Khinchine, Check::Dps];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Minkowski => "minkowski",
            Check::Interpolation => "interpolation",
            Check::Blei => "blei",
            Check::Bh => "bh",
            Check::Khinchine => "khinchine",
            Check::Dps => "dps",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub check: Check,
    pub seed: u64,
    pub trials: usize,
    /// `None` alternates real and complex trials, except for `bh`, which
    /// defaults to real.
    pub field: Option<Field>,
    /// Order of the forms for `bh` (default 2).
    pub m: Option<usize>,
    /// Slot dimension for `bh` (default 2).
    pub n: Option<usize>,
    /// Coefficient exponent parameter for `bh` and `dps` (default 1).
    pub t: Option<f64>,
    /// Relative slack before a failure counts (check-specific default).
    pub tol: Option<f64>,
}

impl CampaignConfig {
    pub fn new(check: Check, seed: u64, trials: usize) -> Self {
        Self { check, seed, trials, field: None, m: None, n: None, t: None, tol: None }
    }
}

/// What a witness needs beyond the coefficients to recompute both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Instance {
    Minkowski { p: f64, q: f64 },
    Interpolation { target: Vec<f64>, nodes: Vec<Vec<f64>>, theta: Vec<f64> },
    Blei { k: usize, s: f64, q: f64 },
    /// `arguments` attain the sup norm used on the right side.
    Bh { t: f64, arguments: Vec<Vec<Complex64>> },
    Khinchine { x: Vec<Complex64>, p: f64 },
    Dps { blocks: Vec<Vec<usize>>, r_list: Vec<f64>, t: f64, families: Vec<Vec<Vec<Complex64>>>, arguments: Vec<Vec<Complex64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub field: Field,
    pub coefficients: Option<TensorFile>,
    pub instance: Instance,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    pub fn slack(&self) -> f64 {
        self.lhs / self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub check: Check,
    pub seed: u64,
    pub trials: usize,
    /// `real`, `complex` or `both`.
    pub field: String,
    pub params: serde_json::Value,
    /// Largest `lhs / ||U||` for `bh`, largest `lhs / rhs` otherwise.
    pub worst_ratio: f64,
    /// Largest `lhs / rhs`.
    pub worst_slack: f64,
    pub violations: usize,
    pub inconclusive: usize,
    pub verdict: Verdict,
    /// The first violation if any, otherwise the trial with the largest slack.
    pub witness: Witness,
}

impl FuzzReport {
    pub fn to_json(&self) -> Result<String> {
        crate::format::to_json_string(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

struct Trial {
    witness: Witness,
    ratio: f64,
    verdict: Verdict,
}

fn trial_field(config: &CampaignConfig, trial: usize) -> Field {
    config.field.unwrap_or(if trial.is_multiple_of(2) { Field::Real } else { Field::Complex })
}

fn ensemble(trial: usize) -> Ensemble {
    if trial % 4 < 2 {
        Ensemble::Gaussian
    } else {
        Ensemble::Sign
    }
}

fn judge(lhs: f64, rhs: f64, tol: f64, hard: bool) -> Verdict {
    if lhs <= rhs * (1.0 + tol) {
        Verdict::Holds
    } else if hard {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

fn random_shape<R: Rng + ?Sized>(rng: &mut R, m: usize, max_dim: usize) -> Vec<usize> {
    (0..m).map(|_| rng.random_range(1..=max_dim)).collect()
}

pub fn run_campaign(config: &CampaignConfig) -> Result<FuzzReport> {
    if config.trials == 0 {
        return Err(Error::OutOfRange("a campaign needs at least one trial".into()));
    }
    let params = campaign_params(config)?;
    let mut worst: Option<Trial> = None;
    let mut first_violation: Option<Witness> = None;
    let (mut violations, mut inconclusive) = (0, 0);
    let mut worst_ratio = f64::NEG_INFINITY;
    for trial in 0..config.trials {
        let outcome = run_trial(config, trial)?;
        worst_ratio = worst_ratio.max(outcome.ratio);
        match outcome.verdict {
            Verdict::Violated => {
                violations += 1;
                if first_violation.is_none() {
                    first_violation = Some(outcome.witness.clone());
                }
            }
            Verdict::Inconclusive => inconclusive += 1,
            Verdict::Holds => {}
        }
        if worst.as_ref().is_none_or(|w| outcome.witness.slack() > w.witness.slack()) {
            worst = Some(outcome);
        }
    }
    let worst = worst.expect("at least one trial");
    let verdict = if violations > 0 {
        Verdict::Violated
    } else if inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    Ok(FuzzReport {
        check: config.check,
        seed: config.seed,
        trials: config.trials,
        field: report_field(config)?.to_string(),
        params,
        worst_ratio,
        worst_slack: worst.witness.slack(),
        violations,
        inconclusive,
        verdict,
        witness: first_violation.unwrap_or(worst.witness),
    })
}

fn report_field(config: &CampaignConfig) -> Result<&'static str> {
    Ok(match config.check {
        Check::Bh => bh_settings(config)?.3.as_str(),
        _ => config.field.map_or("both", Field::as_str),
    })
}

fn bh_settings(config: &CampaignConfig) -> Result<(usize, usize, f64, Field)> {
    let m = config.m.unwrap_or(2);
    let n = config.n.unwrap_or(2);
    let t = config.t.unwrap_or(1.0);
    bh_exponent(m, t)?;
    if n == 0 {
        return Err(Error::OutOfRange("slot dimension must be positive".into()));
    }
    Ok((m, n, t, config.field.unwrap_or(Field::Real)))
}

fn campaign_params(config: &CampaignConfig) -> Result<serde_json::Value> {
    Ok(match config.check {
        Check::Bh => {
            let (m, n, t, field) = bh_settings(config)?;
            json!({
                "m": m,
                "n": n,
                "t": t,
                "bound": c_constant_closed(m, t, field)?,
                "tol": config.tol.unwrap_or(BH_REL_TOL),
            })
        }
        Check::Dps => {
            let t = config.t.unwrap_or(1.0);
            bh_exponent(2, t)?;
            json!({ "t": t, "shape": [2, 2, 2], "blocks": [[1, 2], [3]] })
        }
        Check::Khinchine => json!({ "tol": config.tol.unwrap_or(1e-9) }),
        _ => json!({ "tol": config.tol.unwrap_or(INEQUALITY_REL_TOL) }),
    })
}

fn run_trial(config: &CampaignConfig, trial: usize) -> Result<Trial> {
    let mut rng = trial_rng(config.seed, trial as u64);
    let field = trial_field(config, trial);
    let tol = config.tol.unwrap_or(INEQUALITY_REL_TOL);
    let plain = |coefficients: &Tensor, instance: Instance, lhs: f64, rhs: f64, hard: bool| Trial {
        witness: Witness { trial, field, coefficients: Some(coefficients.to_json()), instance, lhs, rhs },
        ratio: lhs / rhs,
        verdict: judge(lhs, rhs, tol, hard),
    };
    match config.check {
        Check::Minkowski => {
            let shape = random_shape(&mut rng, 2, 6);
            let t = random_tensor(&mut rng, field, shape, ensemble(trial));
            let p = rng.random_range(0.5..4.0);
            let q = p + rng.random_range(0.05..4.0);
            let (lhs, rhs) = minkowski_gap(&t, p, q)?;
            Ok(plain(&t, Instance::Minkowski { p, q }, lhs, rhs, true))
        }
        Check::Blei => {
            let m = rng.random_range(2..=3);
            let shape = random_shape(&mut rng, m, 4);
            let t = random_tensor(&mut rng, field, shape, ensemble(trial));
            let k = rng.random_range(1..m);
            let s = rng.random_range(1.0..2.5);
            let q = s + rng.random_range(0.0..3.0);
            let (lhs, rhs) = blei_bound(&t, k, s, q)?;
            Ok(plain(&t, Instance::Blei { k, s, q }, lhs, rhs, true))
        }
        Check::Interpolation => {
            let m = rng.random_range(1..=4);
            let shape = random_shape(&mut rng, m, 6);
            let t = random_tensor(&mut rng, field, shape, ensemble(trial));
            let count = rng.random_range(2..=4);
            let nodes: Vec<ExponentNode> = (0..count)
                .map(|_| ExponentVector::new((0..m).map(|_| rng.random_range(1.0..8.0)).collect()).map(ExponentNode::new))
                .collect::<Result<_>>()?;
            let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..1.0f64).max(1e-3)).collect();
            let total: f64 = raw.iter().sum();
            let drawn: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let recip: Vec<f64> =
                (0..m).map(|i| nodes.iter().zip(&drawn).map(|(n, w)| w * n.reciprocal()[i]).sum()).collect();
            let target = ExponentVector::from_reciprocals(&recip)?;
            let instance = |theta: Vec<f64>| Instance::Interpolation {
                target: target.values().to_vec(),
                nodes: nodes.iter().map(|n| n.exponents().values().to_vec()).collect(),
                theta,
            };
            match find_convex_weights(&target, &nodes, DEFAULT_TOL)? {
                Some(w) => {
                    let (lhs, rhs) = interpolation_bound(&t, &target, &nodes, &w)?;
                    Ok(plain(&t, instance(w.theta().to_vec()), lhs, rhs, true))
                }
                // the drawn weights prove feasibility, so a miss is a solver failure
                None => Ok(Trial {
                    witness: Witness {
                        trial,
                        field,
                        coefficients: Some(t.to_json()),
                        instance: instance(drawn),
                        lhs: f64::INFINITY,
                        rhs: 1.0,
                    },
                    ratio: f64::INFINITY,
                    verdict: Verdict::Violated,
                }),
            }
        }
        Check::Bh => {
            let (m, n, t, field) = bh_settings(config)?;
            let tol = config.tol.unwrap_or(BH_REL_TOL);
            let coeffs = random_tensor(&mut rng, field, vec![n; m], ensemble(trial));
            let u = MultilinearForm::new(coeffs);
            if u.coefficients().is_zero() {
                return Err(Error::ZeroForm);
            }
            let lhs = bh_lhs(&u, t)?;
            let bound = c_constant_closed(m, t, field)?;
            let opts = SupNormOptions { seed: config.seed ^ trial as u64, ..Default::default() };
            let norm = sup_norm_auto(&u, &opts)?;
            let rhs = bound * norm.value;
            Ok(Trial {
                witness: Witness {
                    trial,
                    field,
                    coefficients: Some(u.coefficients().to_json()),
                    instance: Instance::Bh { t, arguments: norm.certificate },
                    lhs,
                    rhs,
                },
                ratio: lhs / norm.value,
                verdict: judge(lhs, rhs, tol, norm.exact),
            })
        }
        Check::Khinchine => {
            let tol = config.tol.unwrap_or(1e-9);
            let len = match field {
                Field::Real => rng.random_range(1..=12),
                Field::Complex => rng.random_range(1..=3),
            };
            let x: Vec<Complex64> = (0..len).map(|_| gaussian_scalar(&mut rng, field)).collect();
            let p = rng.random_range(1.0..2.0);
            let lhs = khinchine_exact_small(&x, p, field)?;
            let rhs = khinchine(p, field)?;
            // the complex side is a quadrature, not an exact expectation
            let verdict = if lhs <= rhs + tol {
                Verdict::Holds
            } else if field == Field::Real {
                Verdict::Violated
            } else {
                Verdict::Inconclusive
            };
            Ok(Trial {
                witness: Witness { trial, field, coefficients: None, instance: Instance::Khinchine { x, p }, lhs, rhs },
                ratio: lhs / rhs,
                verdict,
            })
        }
        Check::Dps => {
            let t = config.t.unwrap_or(1.0);
            let blocks = vec![vec![0, 1], vec![2]];
            let r_list = vec![
                rng.random_range(bh_exponent(2, t)?..2.0),
                rng.random_range(bh_exponent(1, t)?..2.0),
            ];
            let u = MultilinearForm::new(random_tensor(&mut rng, field, vec![2, 2, 2], ensemble(trial)));
            let opts = DpsOptions { trials: 8, seed: config.seed ^ trial as u64, ..Default::default() };
            let report = dps_mixed_diagnostic(&u, &blocks, &r_list, t, &opts)?;
            let families = report.worst_families.iter().map(|f| f.vectors().to_vec()).collect();
            Ok(Trial {
                witness: Witness {
                    trial,
                    field,
                    coefficients: Some(u.coefficients().to_json()),
                    instance: Instance::Dps { blocks, r_list, t, families, arguments: report.certificate },
                    lhs: report.worst_lhs,
                    rhs: report.rhs,
                },
                ratio: report.worst_lhs / report.rhs,
                verdict: report.verdict,
            })
        }
    }
}

/// Recomputes `(lhs, rhs)` of a witness from its stored data.
pub fn replay(witness: &Witness) -> Result<(f64, f64)> {
    let tensor = || -> Result<Tensor> {
        let file = witness
            .coefficients
            .clone()
            .ok_or_else(|| Error::InvalidTensor("witness has no coefficients".into()))?;
        Tensor::try_from(file)
    };
    match &witness.instance {
        Instance::Minkowski { p, q } => minkowski_gap(&tensor()?, *p, *q),
        Instance::Blei { k, s, q } => blei_bound(&tensor()?, *k, *s, *q),
        Instance::Interpolation { target, nodes, theta } => {
            let target = ExponentVector::new(target.clone())?;
            let nodes: Vec<ExponentNode> =
                nodes.iter().map(|q| ExponentVector::new(q.clone()).map(ExponentNode::new)).collect::<Result<_>>()?;
            interpolation_bound(&tensor()?, &target, &nodes, &ConvexWeights::new(theta.clone())?)
        }
        Instance::Bh { t, arguments } => {
            let u = MultilinearForm::new(tensor()?);
            let lhs = bh_lhs(&u, *t)?;
            let rhs = c_constant_closed(u.order(), *t, u.field())? * u.evaluate(arguments)?.norm();
            Ok((lhs, rhs))
        }
        Instance::Khinchine { x, p } => {
            Ok((khinchine_exact_small(x, *p, witness.field)?, khinchine(*p, witness.field)?))
        }
        Instance::Dps { blocks, r_list, t, families, arguments } => {
            let u = MultilinearForm::new(tensor()?);
            let families: Vec<VectorFamily> =
                families.iter().map(|f| VectorFamily::new(f.clone())).collect::<Result<_>>()?;
            dps_sides(&u, blocks, r_list, *t, &families, arguments)
        }
    }
}
