//! Property tests for the contracts the recovery pipeline leans on:
//! entropy axioms, generator determinism, least-squares geometry, pursuit
//! monotonicity, and the bookkeeping identities of the entropy-minimizing
//! pursuit.

use cs_recovery::emp::{emp_recover_noiseless, emp_recover_noisy, EmpConfig, EmpWeights};
use cs_recovery::entropy::{delta_h, information_power, rep_entropy, EntropyValue};
use cs_recovery::greedy::{estimate_sparsity, mp_recover, omp_recover};
use cs_recovery::la::{column_normalize, inner, least_squares, normalize_l2, Matrix, Vector};
use cs_recovery::problem::{
    add_awgn, fourier_basis, gaussian_measurement, gen_compressible_signal, gen_sparse_signal,
    mutual_coherence, random_frame, rip_estimate, SparseProblem,
};
use cs_recovery::recovery::StopRule;
use cs_recovery::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vector(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 1..max_len)
        .prop_filter("needs a usable norm", |xs| {
            xs.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-6
        })
}

/// A measurement problem built from seeds: non-orthogonal frame, Gaussian
/// measurements, and a k-sparse signal (optionally noisy).
fn seeded_problem(
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
    snr_db: Option<f64>,
) -> (SparseProblem, Vector) {
    let psi = random_frame(n, seed).unwrap();
    let phi = gaussian_measurement(m, n, seed ^ 0x9e3779b97f4a7c15).unwrap();
    let mut sig = gen_sparse_signal(&psi, k, seed ^ 0x517cc1b727220a95).unwrap();
    if let Some(snr) = snr_db {
        sig = sig.with_noise(snr, seed ^ 0x2545f4914f6cdd1d).unwrap();
    }
    let problem = SparseProblem::from_signal(psi, phi, sig.measured()).unwrap();
    (problem, sig.clean)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rep_entropy_is_scale_invariant(xs in vector(40), alpha in 1e-3f64..1e3) {
        let x = Vector::new(xs.clone()).unwrap();
        let scaled = Vector::new(xs.iter().map(|v| v * alpha).collect()).unwrap();
        let h = rep_entropy(&x, 2.0).unwrap();
        let hs = rep_entropy(&scaled, 2.0).unwrap();
        prop_assert!((h.value - hs.value).abs() < 1e-9);
    }

    #[test]
    fn rep_entropy_is_permutation_invariant(xs in vector(40), perm_seed in any::<u64>()) {
        let mut shuffled = xs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let h = rep_entropy(&Vector::new(xs).unwrap(), std::f64::consts::E).unwrap();
        let hp = rep_entropy(&Vector::new(shuffled).unwrap(), std::f64::consts::E).unwrap();
        prop_assert!((h.value - hp.value).abs() < 1e-9);
    }

    #[test]
    fn rep_entropy_stays_within_bounds(xs in vector(40)) {
        let n = xs.len();
        let h = rep_entropy(&Vector::new(xs).unwrap(), 2.0).unwrap();
        prop_assert!(h.value >= -1e-12);
        prop_assert!(h.value <= (n as f64).log2() + 1e-9);
    }

    #[test]
    fn rep_entropy_base_change_is_a_rescaling(xs in vector(40)) {
        let x = Vector::new(xs).unwrap();
        let nats = rep_entropy(&x, std::f64::consts::E).unwrap();
        let bits = rep_entropy(&x, 2.0).unwrap();
        prop_assert!((bits.value * 2.0f64.ln() - nats.value).abs() < 1e-9);
    }

    #[test]
    fn information_power_is_monotone_in_entropy(a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let ip_lo = information_power(&EntropyValue { value: lo, base: 2.0 });
        let ip_hi = information_power(&EntropyValue { value: hi, base: 2.0 });
        prop_assert!(ip_lo <= ip_hi + 1e-12);
        // Anchor: zero entropy maps to the variance floor 1/(2πe).
        let floor = information_power(&EntropyValue { value: 0.0, base: 2.0 });
        prop_assert!((floor - 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).abs() < 1e-12);
    }

    #[test]
    fn delta_h_rejects_collapsed_history(h_curr in 0.0f64..10.0) {
        prop_assert!(matches!(delta_h(h_curr, 0.0), Err(Error::DegenerateHistory)));
        let ratio = delta_h(h_curr, 2.0).unwrap();
        prop_assert!((ratio - h_curr / 2.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_roundtrips(xs in vector(40)) {
        let v = Vector::new(xs).unwrap();
        let (unit, scale) = normalize_l2(&v).unwrap();
        prop_assert!((unit.norm_l2() - 1.0).abs() < 1e-12);
        let back = unit.scaled(scale);
        for (a, b) in back.iter().zip(v.iter()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn column_normalization_is_reversible(seed in any::<u64>(), n in 2usize..16) {
        let a = random_frame(n, seed).unwrap();
        let (unit, scales) = column_normalize(&a).unwrap();
        for j in 0..n {
            prop_assert!((unit.col_energy(j).sqrt() - 1.0).abs() < 1e-12);
            for i in 0..n {
                let rebuilt = unit.get(i, j) * scales.as_slice()[j];
                prop_assert!((rebuilt - a.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn least_squares_residual_is_orthogonal_to_columns(seed in any::<u64>(), m in 6usize..20, k in 1usize..5) {
        prop_assume!(k < m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::from_fn(m, k, |_, _| {
            rng.sample::<f64, _>(rand_distr::StandardNormal)
        }).unwrap();
        let y = Vector::new((0..m).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect()).unwrap();
        let x = least_squares(&a, &y).unwrap();
        let residual = y.minus(&a.matvec(&x).unwrap()).unwrap();
        for j in 0..k {
            let dot = inner(&a.column(j), &residual).unwrap();
            prop_assert!(dot.abs() < 1e-8 * (1.0 + y.norm_l2()));
        }
    }

    #[test]
    fn awgn_hits_the_requested_snr_exactly(xs in vector(40), snr in -10.0f64..20.0, seed in any::<u64>()) {
        let clean = Vector::new(xs).unwrap();
        let (noisy, achieved) = add_awgn(&clean, snr, seed).unwrap();
        prop_assert!((achieved - snr).abs() < 1e-9);
        let err: f64 = noisy.iter().zip(clean.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let direct = 10.0 * (clean.energy() / err).log10();
        prop_assert!((direct - snr).abs() < 1e-9);
    }

    #[test]
    fn generators_are_pure_in_their_seeds(seed in any::<u64>(), n in 2usize..24) {
        let f1 = random_frame(n, seed).unwrap();
        let f2 = random_frame(n, seed).unwrap();
        prop_assert_eq!(f1.row(0), f2.row(0));
        let m = 1 + n / 2;
        let p1 = gaussian_measurement(m, n, seed).unwrap();
        let p2 = gaussian_measurement(m, n, seed).unwrap();
        prop_assert_eq!(p1.row(m - 1), p2.row(m - 1));
        let s1 = gen_sparse_signal(&f1, 1 + n / 4, seed).unwrap();
        let s2 = gen_sparse_signal(&f1, 1 + n / 4, seed).unwrap();
        prop_assert_eq!(s1.coeffs.as_slice(), s2.coeffs.as_slice());
        let c1 = gen_compressible_signal(&f1, 1.0, 1.5, seed).unwrap();
        let c2 = gen_compressible_signal(&f1, 1.0, 1.5, seed).unwrap();
        prop_assert_eq!(c1.coeffs.as_slice(), c2.coeffs.as_slice());
    }

    #[test]
    fn sparse_signals_have_exact_support(seed in any::<u64>(), n in 4usize..32, k_raw in 1usize..8) {
        let k = k_raw.min(n);
        let psi = random_frame(n, seed).unwrap();
        let sig = gen_sparse_signal(&psi, k, seed).unwrap();
        let nonzeros: Vec<f64> = sig.coeffs.iter().copied().filter(|c| *c != 0.0).collect();
        prop_assert_eq!(nonzeros.len(), k);
        prop_assert!(nonzeros.iter().all(|c| c.abs() >= 0.1));
        let direct = psi.matvec(&sig.coeffs).unwrap();
        for (a, b) in direct.iter().zip(sig.clean.iter()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn compressible_magnitudes_follow_the_power_law(seed in any::<u64>(), n in 2usize..32, p in 0.1f64..10.0, r in 1.01f64..3.0) {
        let psi = random_frame(n, seed).unwrap();
        let sig = gen_compressible_signal(&psi, p, r, seed).unwrap();
        let mut mags: Vec<f64> = sig.coeffs.iter().map(|c| c.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (rank, &mag) in mags.iter().enumerate() {
            let expected = p * ((rank + 1) as f64).powf(-r);
            prop_assert!((mag - expected).abs() <= 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn rip_estimate_grows_with_more_probes(seed in any::<u64>(), n in 4usize..20) {
        let m = 2 + n / 2;
        let phi = gaussian_measurement(m, n, seed).unwrap();
        let short = rip_estimate(&phi, 2.min(n), 10, seed).unwrap();
        let long = rip_estimate(&phi, 2.min(n), 60, seed).unwrap();
        prop_assert!(long >= short - 1e-15);
    }

    #[test]
    fn coherence_of_an_orthonormal_basis_is_bounded(seed in any::<u64>(), half in 1usize..9) {
        let n = 2 * half;
        let psi = fourier_basis(n).unwrap();
        let phi = gaussian_measurement(1 + n / 3, n, seed).unwrap();
        let mu = mutual_coherence(&phi, &psi).unwrap();
        prop_assert!(mu >= 1.0 - 1e-9);
        prop_assert!(mu <= (n as f64).sqrt() + 1e-9);
    }

    #[test]
    fn noisy_weights_form_a_convex_pair(m in 1usize..64, s_raw in 0usize..64) {
        let s = s_raw.min(m);
        let w = EmpWeights::noisy(m, s);
        prop_assert!((w.w1 + w.w2 - 1.0).abs() < 1e-12);
        prop_assert!(w.w1 >= 0.0 && w.w2 >= 0.0);
        if s < m {
            let next = EmpWeights::noisy(m, s + 1);
            prop_assert!(next.w1 < w.w1);
        }
    }

    #[test]
    fn sparsity_estimate_is_monotone_in_measurements(n in 8usize..256, m in 2usize..128) {
        prop_assume!(m < n);
        let here = estimate_sparsity(m, n).unwrap();
        let more = estimate_sparsity(m + 1, n).unwrap();
        prop_assert!(here >= 1);
        prop_assert!(more >= here);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mp_never_increases_the_residual(seed in any::<u64>()) {
        let (problem, _) = seeded_problem(20, 12, 3, seed, None);
        let out = mp_recover(&problem, &StopRule::residual_threshold(1e-5, 80)).unwrap();
        for w in out.residual_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn omp_support_is_distinct_with_orthogonal_residual(seed in any::<u64>()) {
        let (problem, _) = seeded_problem(20, 12, 3, seed, None);
        let out = omp_recover(&problem, &StopRule::residual_threshold(1e-8, 12)).unwrap();
        let mut support = out.support.clone();
        support.sort_unstable();
        support.dedup();
        prop_assert_eq!(support.len(), out.support.len());
        // The least-squares refit leaves nothing of the residual in the
        // span of the selected columns.
        let chat_work = Vector::new(
            out.chat
                .iter()
                .zip(problem.a_scales.iter())
                .map(|(c, s)| c * s)
                .collect(),
        )
        .unwrap();
        let residual = problem.y.minus(&problem.a.matvec(&chat_work).unwrap()).unwrap();
        for &j in &out.support {
            let dot = inner(&problem.a.column(j), &residual).unwrap();
            prop_assert!(dot.abs() < 1e-7 * (1.0 + problem.y.norm_l2()));
        }
    }

    #[test]
    fn emp_strictly_decreases_and_conserves_energy(seed in any::<u64>(), noisy in prop::bool::ANY) {
        let snr = if noisy { Some(3.0) } else { None };
        let (problem, _) = seeded_problem(20, 12, 3, seed, snr);
        let cfg = if noisy {
            EmpConfig::noisy(1e-4, 1e6, 120)
        } else {
            EmpConfig::noiseless(1e-4, 120)
        };
        let out = if noisy {
            emp_recover_noisy(&problem, &cfg).unwrap()
        } else {
            emp_recover_noiseless(&problem, &cfg).unwrap()
        };
        for w in out.residual_trace.windows(2) {
            prop_assert!(w[1] < w[0]);
        }
        // Unit-norm start: committed coefficient energy plus what is left
        // of the residual accounts for everything.
        let committed: f64 = out.selections.iter().map(|(_, c)| c * c).sum();
        let tail = out.residual_trace.last().copied().unwrap_or(1.0);
        prop_assert!((committed + tail * tail - 1.0).abs() < 1e-8);
    }

    #[test]
    fn emp_incremental_residual_matches_direct_recomputation(seed in any::<u64>()) {
        let (problem, _) = seeded_problem(20, 12, 3, seed, Some(3.0));
        let out = emp_recover_noisy(&problem, &EmpConfig::noisy(0.3, 1e6, 120)).unwrap();
        let norm_y = problem.y.norm_l2();
        let chat_work = Vector::new(
            out.chat
                .iter()
                .zip(problem.a_scales.iter())
                .map(|(c, s)| c * s / norm_y)
                .collect(),
        )
        .unwrap();
        let y_unit = problem.y.scaled(1.0 / norm_y);
        let direct = y_unit.minus(&problem.a.matvec(&chat_work).unwrap()).unwrap();
        let stored = out.residual_trace.last().copied().unwrap();
        prop_assert!((direct.norm_l2() - stored).abs() < 1e-8);
    }

    #[test]
    fn a_tighter_gate_stops_no_later(seed in any::<u64>(), lo in 0.5f64..1.2, delta in 0.0f64..2.0) {
        let hi = lo + delta;
        let (problem, _) = seeded_problem(20, 12, 3, seed, Some(3.0));
        let run_lo = emp_recover_noisy(&problem, &EmpConfig::noisy(1e-6, lo, 120)).unwrap();
        let run_hi = emp_recover_noisy(&problem, &EmpConfig::noisy(1e-6, hi, 120)).unwrap();
        prop_assert!(run_lo.iterations <= run_hi.iterations);
        // The gate only ever cuts the run short: the shorter run is a
        // prefix of the longer one.
        prop_assert_eq!(
            &run_lo.selections[..],
            &run_hi.selections[..run_lo.selections.len()]
        );
    }
}
