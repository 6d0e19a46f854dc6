use bhsum_core::constants::{khinchine, p_zero};
use bhsum_core::forms_lab::{
    bh_lhs, bh_ratio, dps_mixed_diagnostic, khinchine_exact_small, sup_norm, weak_l1_norm, DpsOptions,
    MultilinearForm, SupNormMethod, SupNormOptions, VectorFamily, Verdict,
};
use bhsum_core::rng::{gaussian_scalar, random_tensor, trial_rng, Ensemble};
use bhsum_core::{Field, Tensor};
use num_complex::Complex64;
use proptest::prelude::*;

fn real_form(max_order: usize) -> impl Strategy<Value = MultilinearForm> {
    prop::collection::vec(1..=3usize, 1..=max_order).prop_flat_map(|shape| {
        let len: usize = shape.iter().product();
        prop::collection::vec(-5.0..5.0f64, len).prop_filter_map("nonzero form", move |v| {
            let t = Tensor::from_real(shape.clone(), v).unwrap();
            (!t.is_zero()).then(|| MultilinearForm::new(t))
        })
    })
}

proptest! {
    #[test]
    fn bh_ratio_scale_invariant(u in real_form(3), c in prop::sample::select(vec![-3.5, -0.25, 0.01, 2.0, 17.0]), t in 1.0..1.99f64) {
        let opts = SupNormOptions::default();
        let a = bh_ratio(&u, t, &opts).unwrap();
        let scaled = MultilinearForm::new(u.coefficients().scaled(Complex64::new(c, 0.0)));
        let b = bh_ratio(&scaled, t, &opts).unwrap();
        prop_assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio);
        prop_assert!(a.norm_exact && a.verdict == Verdict::Holds);
    }

    #[test]
    fn bh_lhs_nonincreasing_in_t(u in real_form(3), t in 1.0..1.9f64, dt in 0.0..0.09f64) {
        let lo = bh_lhs(&u, t).unwrap();
        let hi = bh_lhs(&u, t + dt).unwrap();
        prop_assert!(hi <= lo * (1.0 + 1e-12));
    }

    #[test]
    fn ascent_below_exact(u in real_form(3), seed in any::<u64>()) {
        let exact = sup_norm(&u, SupNormMethod::ExactSigns, &SupNormOptions::default()).unwrap();
        let opts = SupNormOptions { seed, ..SupNormOptions::default() };
        let ascent = sup_norm(&u, SupNormMethod::AlternatingAscent, &opts).unwrap();
        prop_assert!(exact.exact && !ascent.exact);
        prop_assert!(ascent.value <= exact.value * (1.0 + 1e-12));
    }
}

#[test]
fn ascent_matches_exact_on_most_forms() {
    for shape in [vec![2, 2], vec![2, 2, 2]] {
        let mut hits = 0;
        for trial in 0..500u64 {
            let mut rng = trial_rng(31, trial);
            let ensemble = if trial % 2 == 0 { Ensemble::Gaussian } else { Ensemble::Sign };
            let u = MultilinearForm::new(random_tensor(&mut rng, Field::Real, shape.clone(), ensemble));
            let exact = sup_norm(&u, SupNormMethod::ExactSigns, &SupNormOptions::default()).unwrap();
            let opts = SupNormOptions { seed: trial, ..SupNormOptions::default() };
            let ascent = sup_norm(&u, SupNormMethod::AlternatingAscent, &opts).unwrap();
            assert!(ascent.value <= exact.value * (1.0 + 1e-12), "{shape:?} trial {trial}");
            if ascent.value >= exact.value * (1.0 - 1e-12) {
                hits += 1;
            }
        }
        assert!(hits >= 475, "{shape:?}: ascent reached the exact norm on {hits} of 500 forms");
    }
}

/// `max sum_i |phi(x_i)|` over a grid on the unit sphere of `l1(K^3)`:
/// simplex magnitudes times signs (real) or phases relative to the first
/// coordinate (complex), about a thousand directions either way.
fn weak_norm_on_net(vectors: &[Vec<Complex64>], field: Field) -> f64 {
    let (steps, phases): (usize, Vec<Vec<Complex64>>) = match field {
        Field::Real => {
            let sign = |bits: usize, c: usize| Complex64::new(if bits >> c & 1 == 1 { -1.0 } else { 1.0 }, 0.0);
            let all = (0..8).map(|bits| (0..3).map(|c| sign(bits, c)).collect()).collect();
            (14, all)
        }
        Field::Complex => {
            let k = 6;
            let root = |j: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            let all = (0..k).flat_map(|a| (0..k).map(move |b| vec![Complex64::new(1.0, 0.0), root(a), root(b)])).collect();
            (6, all)
        }
    };
    let mut best = 0.0f64;
    for i in 0..=steps {
        for j in 0..=steps - i {
            let mags = [i as f64, j as f64, (steps - i - j) as f64].map(|a| a / steps as f64);
            for phase in &phases {
                let value: f64 = vectors
                    .iter()
                    .map(|x| (0..3).map(|c| mags[c] * phase[c] * x[c]).sum::<Complex64>().norm())
                    .sum();
                best = best.max(value);
            }
        }
    }
    best
}

#[test]
fn weak_norm_matches_net() {
    for trial in 0..200u64 {
        let mut rng = trial_rng(5, trial);
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let vectors: Vec<Vec<Complex64>> = (0..3).map(|_| (0..3).map(|_| gaussian_scalar(&mut rng, field)).collect()).collect();
        let weak = weak_l1_norm(&VectorFamily::new(vectors.clone()).unwrap()).unwrap();
        let net = weak_norm_on_net(&vectors, field);
        assert!((weak - net).abs() <= 1e-6 * weak, "trial {trial}: {weak} vs {net}");
    }
}

#[test]
fn exact_khinchine_ratios_stay_below_constant() {
    for trial in 0..300u64 {
        let mut rng = trial_rng(13, trial);
        let n = 1 + (trial as usize % 10);
        let x: Vec<Complex64> = (0..n).map(|_| gaussian_scalar(&mut rng, Field::Real)).collect();
        let p = 1.0 + (trial as f64 * 0.618).fract() * 0.99;
        let ratio = khinchine_exact_small(&x, p, Field::Real).unwrap();
        assert!(ratio <= khinchine(p, Field::Real).unwrap() + 1e-9, "trial {trial} p={p}");
    }
    let ones = vec![Complex64::new(1.0, 0.0); 2];
    for p in [1.0, 1.2, 1.5, 1.8, p_zero()] {
        let ratio = khinchine_exact_small(&ones, p, Field::Real).unwrap();
        assert!((ratio - khinchine(p, Field::Real).unwrap()).abs() < 1e-12, "p={p}");
    }
}

#[test]
fn dps_holds_on_random_forms() {
    let blocks = vec![vec![0, 1], vec![2]];
    for trial in 0..200u64 {
        let mut rng = trial_rng(19, trial);
        let ensemble = if trial % 2 == 0 { Ensemble::Gaussian } else { Ensemble::Sign };
        let u = MultilinearForm::new(random_tensor(&mut rng, Field::Real, vec![2, 2, 2], ensemble));
        let opts = DpsOptions { trials: 4, seed: trial, ..DpsOptions::default() };
        let report = dps_mixed_diagnostic(&u, &blocks, &[4.0 / 3.0, 1.0], 1.0, &opts).unwrap();
        assert_eq!(report.verdict, Verdict::Holds, "trial {trial}");
        assert!(report.worst_lhs <= report.rhs * (1.0 + 1e-10));
    }
}
