//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any of them fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use bhsum_core::campaign::{run_campaign, CampaignConfig, Check};
use bhsum_core::constants::{
    asymptotic_envelope, bh_exponent, c_constant_closed, c_constant_recursive, exponent_comparison, f_n,
    gamma_fn, khinchine, omega_n, ComparisonVerdict, Mode,
};
use bhsum_core::forms_lab::{
    bh_ratio, khinchine_exact_small, khinchine_mc, sup_norm, summing_lower_bound, MultilinearForm, SupNormMethod,
    SupNormOptions, Verdict,
};
use bhsum_core::rng::{random_tensor, trial_rng, Ensemble};
use bhsum_core::{Field, Tensor};
use num_complex::Complex64;
use rand::Rng;

/// `A_1 A_{4/3}` for Steinhaus variables, evaluated with 40-digit Gamma values.
const C3_COMPLEX_T1: f64 = 1.218_375_437_007_419;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn constant_recovery() -> Outcome {
    let c2 = c_constant_closed(2, 1.0, Field::Complex).unwrap();
    let c3 = c_constant_closed(3, 1.0, Field::Complex).unwrap();
    ensure((c2 - 2.0 / PI.sqrt()).abs() < 1e-12, || format!("C_2 = {c2}"))?;
    ensure((c3 - C3_COMPLEX_T1).abs() < 1e-3, || format!("C_3 = {c3}"))?;
    Ok(format!("C_2 = {c2:.16}, C_3 = {c3:.16} (|diff| {:.1e})", (c3 - C3_COMPLEX_T1).abs()))
}

fn closed_vs_recursive() -> Outcome {
    let (mut equal, mut improved, mut worst) = (0, 0, 0.0f64);
    for field in [Field::Real, Field::Complex] {
        for i in 0..10 {
            let t = 1.0 + 0.1 * i as f64;
            for m in 1..=30 {
                let closed = c_constant_closed(m, t, field).unwrap();
                let recursive = c_constant_recursive(m, t, field).unwrap();
                ensure(closed <= recursive * (1.0 + 1e-10), || {
                    format!("m={m} t={t} {field}: closed {closed} > recursive {recursive}")
                })?;
                worst = worst.max(closed / recursive);
                if rel(closed, recursive) <= 1e-12 {
                    equal += 1;
                } else {
                    improved += 1;
                }
            }
        }
    }
    Ok(format!("{equal} grid points agree to 1e-12, {improved} strictly improved, max closed/recursive {worst:.16}"))
}

fn omega_f_identities() -> Outcome {
    let mut worst = 0.0f64;
    for draw in 0..10_000u64 {
        let mut rng = trial_rng(3, draw);
        let n = rng.random_range(1..=8);
        let q = rng.random_range(2.0..=4.0);
        let rs: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..q)).collect();
        let big_r: f64 = rs.iter().map(|r| r / (q - r)).sum();
        let om = omega_n(&rs, q, Mode::Recursive).unwrap();
        let err = rel(om, q * big_r / (1.0 + big_r));
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("omega draw {draw}: rel error {err:e}"))?;
        let f = f_n(&rs, q, Mode::Recursive).unwrap();
        for (k, (fk, r)) in f.iter().zip(&rs).enumerate() {
            let err = rel(*fk, r / (big_r * (q - r)));
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("f draw {draw} k={k}: rel error {err:e}"))?;
        }
        let sum: f64 = f.iter().sum();
        ensure((sum - 1.0).abs() <= 1e-12, || format!("draw {draw}: sum of weights {sum}"))?;
    }
    Ok(format!("10000 draws, worst rel error {worst:.1e}"))
}

fn p_zero_root() -> Outcome {
    let p0 = bhsum_core::constants::p_zero();
    let residual = (gamma_fn((p0 + 1.0) / 2.0).unwrap() - PI.sqrt() / 2.0).abs();
    ensure(residual < 1e-13, || format!("residual {residual:e}"))?;
    ensure(p0 > 1.84 && p0 < 1.86, || format!("p0 = {p0}"))?;
    Ok(format!("p0 = {p0:.16}, residual {residual:.1e}"))
}

fn khinchine_checks() -> Outcome {
    let ones = |n: usize| vec![Complex64::new(1.0, 0.0); n];
    let exact = khinchine_exact_small(&ones(2), 1.0, Field::Real).unwrap();
    let a1 = khinchine(1.0, Field::Real).unwrap();
    ensure((exact - 2f64.sqrt()).abs() < 1e-12 && (a1 - 2f64.sqrt()).abs() < 1e-12, || {
        format!("exact {exact}, A_1 {a1}")
    })?;
    let mc = khinchine_mc(&ones(64), 1.9, Field::Real, 1_000_000, 42).unwrap();
    let a19 = khinchine(1.9, Field::Real).unwrap();
    ensure(rel(mc.ratio, a19) < 0.05, || format!("MC ratio {} vs A_1.9 {a19}", mc.ratio))?;
    let quad = khinchine_exact_small(&ones(4), 1.0, Field::Complex).unwrap();
    ensure(quad <= 2.0 / PI.sqrt() + 1e-6, || format!("complex quadrature {quad}"))?;
    Ok(format!("exact {exact:.16}; MC {:.6} vs A_1.9 {a19:.6}; complex n=4 {quad:.10}", mc.ratio))
}

fn campaign(check: Check, trials: usize, edit: impl FnOnce(&mut CampaignConfig)) -> Result<String, String> {
    let mut config = CampaignConfig::new(check, 2024, trials);
    edit(&mut config);
    let report = run_campaign(&config).map_err(|e| e.to_string())?;
    ensure(report.violations == 0 && report.inconclusive == 0 && report.verdict == Verdict::Holds, || {
        format!("{check}: {} violations, {} inconclusive", report.violations, report.inconclusive)
    })?;
    Ok(format!("{check} {trials} trials worst ratio {:.12}", report.worst_ratio))
}

fn interpolation_fuzz() -> Outcome {
    campaign(Check::Interpolation, 1000, |_| {})
}

fn minkowski_blei_fuzz() -> Outcome {
    let a = campaign(Check::Minkowski, 1000, |_| {})?;
    let b = campaign(Check::Blei, 1000, |_| {})?;
    Ok(format!("{a}; {b}"))
}

fn bh_fuzz() -> Outcome {
    let mut lines = Vec::new();
    for m in [2, 3] {
        for t in [1.0, 1.5] {
            lines.push(campaign(Check::Bh, 500, |c| {
                c.m = Some(m);
                c.n = Some(2);
                c.t = Some(t);
                c.field = Some(Field::Real);
            })?);
        }
    }
    let id = MultilinearForm::new(Tensor::diagonal(Field::Real, 2, 2).unwrap());
    let r = bh_ratio(&id, 1.0, &SupNormOptions::default()).unwrap();
    let expected = 2f64.powf(-0.25);
    ensure(r.norm_exact && (r.ratio - expected).abs() < 1e-12, || format!("identity ratio {}", r.ratio))?;
    Ok(format!("m=2,3 t=1,1.5; identity ratio {:.16}", r.ratio))
}

fn summing_bound() -> Outcome {
    let opts = SupNormOptions::default();
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let mut rng = trial_rng(9, trial);
        let t = if trial % 2 == 0 { 1.0 } else { 1.5 };
        let shape = vec![rng.random_range(2..=3), rng.random_range(2..=3)];
        let ensemble = if trial % 4 < 2 { Ensemble::Gaussian } else { Ensemble::Sign };
        let u = MultilinearForm::new(random_tensor(&mut rng, Field::Real, shape, ensemble));
        let norm = sup_norm(&u, SupNormMethod::ExactSigns, &opts).unwrap();
        let c = c_constant_closed(2, t, Field::Real).unwrap();
        let lower = summing_lower_bound(&u, bh_exponent(2, t).unwrap(), 10, 4, trial).unwrap();
        let ratio = lower.value / (c * norm.value);
        worst = worst.max(ratio);
        ensure(ratio <= 1.0 + 1e-10, || format!("trial {trial}: summing value exceeds C ||U|| by {ratio}"))?;
    }
    Ok(format!("200 bilinear forms, worst value/(C ||U||) {worst:.12}"))
}

fn exponent_grid() -> Outcome {
    let mut count = 0;
    for big_n in 2..=12 {
        for n in 1..big_n {
            for q in [2.0, 3.0] {
                for r in [1.0, 1.5] {
                    let c = exponent_comparison(n, big_n, q, r).unwrap();
                    let want = if big_n % n == 0 { ComparisonVerdict::Equal } else { ComparisonVerdict::Strict };
                    ensure(c.verdict == want, || format!("n={n} N={big_n} q={q} r={r}: {} vs {}", c.old, c.new))?;
                    if want == ComparisonVerdict::Equal {
                        ensure(rel(c.old, c.new) <= 1e-12, || format!("n={n} N={big_n}: not equal"))?;
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} grid points"))
}

fn asymptotics() -> Outcome {
    let mut parts = Vec::new();
    for t in [1.0, 1.5] {
        let e = asymptotic_envelope(t, Field::Complex, 10_000).unwrap();
        ensure(e.last_decade_increase < 0.01, || format!("t={t}: last decade increase {}", e.last_decade_increase))?;
        parts.push(format!("t={t} kappa {:.6} increase {:.2e}", e.kappa_est, e.last_decade_increase));
    }
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("constant recovery", constant_recovery),
        ("closed vs recursive", closed_vs_recursive),
        ("omega/f identities", omega_f_identities),
        ("p0 root", p_zero_root),
        ("khinchine orientation", khinchine_checks),
        ("interpolation fuzz", interpolation_fuzz),
        ("minkowski and blei fuzz", minkowski_blei_fuzz),
        ("bh fuzz", bh_fuzz),
        ("summing bound", summing_bound),
        ("exponent comparison", exponent_grid),
        ("asymptotics", asymptotics),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
