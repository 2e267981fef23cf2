//! Entropy-minimization matching pursuit.
//!
//! Instead of taking the atom with the largest correlation, every
//! iteration scores *all* admissible columns by the weighted conditional
//! entropy the update would leave behind — w1·H(residual) +
//! w2·H(coefficients) — and commits the candidate with the smallest
//! score. The measurement vector is unit-normalized up front so squared
//! entries read as (sub-)probability masses; the saved norm is restored
//! into the reported coefficients at the end.
//!
//! In the coefficient term the trial coefficient contributes its own
//! entry, H(ĉ) + c²·log(1/c²), even when the column was selected before;
//! folding repeat selections into a single entry only happens at commit
//! time. Scored any other way, a repeated column's existing coefficient
//! would couple linearly with c and swamp the residual term for small
//! corrections, and the pursuit would stop refining columns it already
//! holds.
//!
//! Two operating modes share the iteration:
//!
//! * noiseless: fixed weights w1 = N/(N+1), w2 = 1/(N+1), run until the
//!   residual drops below ε;
//! * noisy: weights move with the support size (w1 = (M−‖ĉ‖₀)/M,
//!   w2 = ‖ĉ‖₀/M) and an entropy gate watches the ratio of consecutive
//!   conditional entropies ΔH = H_m/H_{m−1}; an update is committed only
//!   while ΔH < γ, anything above the gate is attributed to noise and the
//!   run stops there.

use crate::entropy::{delta_h, energy_entropy, ENTROPY_NORM_FLOOR};
use crate::error::{Error, Result};
use crate::la::{normalize_l2, Matrix, Vector};
use crate::problem::SparseProblem;
use crate::recovery::{finalize_result, RecoveryResult, Termination};

/// Correlations at or below this magnitude cannot anchor an update.
pub const DEFAULT_CORRELATION_FLOOR: f64 = 1e-12;

/// Knobs for a pursuit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpConfig {
    /// Residual threshold on the unit-normalized measurement.
    pub epsilon: f64,
    /// Entropy gate; `None` selects the noiseless mode (no gate).
    pub gamma: Option<f64>,
    /// Hard iteration cap.
    pub max_iter: usize,
    /// Magnitude below which a correlation counts as zero.
    pub correlation_floor: f64,
}

impl EmpConfig {
    pub fn noiseless(epsilon: f64, max_iter: usize) -> Self {
        Self { epsilon, gamma: None, max_iter, correlation_floor: DEFAULT_CORRELATION_FLOOR }
    }

    pub fn noisy(epsilon: f64, gamma: f64, max_iter: usize) -> Self {
        Self { epsilon, gamma: Some(gamma), max_iter, correlation_floor: DEFAULT_CORRELATION_FLOOR }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::BadParameter(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::BadParameter("iteration cap must be >= 1".into()));
        }
        if !(self.correlation_floor >= 0.0) || !self.correlation_floor.is_finite() {
            return Err(Error::BadParameter(format!(
                "correlation floor must be non-negative, got {}",
                self.correlation_floor
            )));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::BadParameter(format!(
                    "gamma must be positive and finite, got {g}"
                )));
            }
        }
        Ok(())
    }
}

/// The pair of objective weights for one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpWeights {
    pub w1: f64,
    pub w2: f64,
}

impl EmpWeights {
    /// Noiseless schedule: constant, nearly all weight on the residual
    /// term.
    pub fn noiseless(n: usize) -> Self {
        let nf = n as f64;
        Self { w1: nf / (nf + 1.0), w2: 1.0 / (nf + 1.0) }
    }

    /// Noisy schedule: weight shifts from the residual towards the
    /// coefficients as the support fills up, vanishing entirely when the
    /// support size reaches the number of measurements.
    pub fn noisy(m: usize, support_len: usize) -> Self {
        debug_assert!(support_len <= m);
        let mf = m as f64;
        let s = support_len.min(m) as f64;
        Self { w1: (mf - s) / mf, w2: s / mf }
    }
}

/// The winning candidate of one scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanChoice {
    /// Selected column.
    pub index: usize,
    /// Coefficient increment ⟨r, A_j⟩ the commit would apply.
    pub coefficient: f64,
    /// The candidate's weighted conditional entropy (natural log).
    pub conditional_entropy: f64,
}

/// Scores every column against the current state and returns the
/// admissible candidate with the smallest weighted conditional entropy,
/// or `None` when no column passes: a candidate needs a correlation above
/// `floor` and must strictly shrink the residual. Ties go to the lowest
/// index.
///
/// Each candidate j is scored as
/// `w1·H(y − yhat − c·A_j) + w2·(H(chat) + c²·log(1/c²))` with
/// c = ⟨r, A_j⟩ — the trial coefficient enters as its own component
/// beside the coefficients already committed.
///
/// State contract: `a` is column-normalized, `y` is the (normalized)
/// measurement, `yhat` the current approximation, `chat` the accumulated
/// coefficients against `a`'s columns, and `r = y − yhat`.
pub fn emp_candidate_scan(
    a: &Matrix,
    y: &Vector,
    yhat: &Vector,
    chat: &Vector,
    r: &Vector,
    weights: &EmpWeights,
    floor: f64,
) -> Result<Option<ScanChoice>> {
    if weights.w1 < 0.0 || weights.w2 < 0.0 {
        return Err(Error::NegativeWeight);
    }
    let m = a.rows();
    let n = a.cols();
    if y.len() != m || yhat.len() != m || r.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "scan state lengths y={}, yhat={}, r={} against {m} rows",
            y.len(),
            yhat.len(),
            r.len()
        )));
    }
    if chat.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "coefficient vector has length {} against {n} columns",
            chat.len()
        )));
    }

    let corr = a.tr_matvec(r)?;
    let r_norm = r.norm_l2();
    let base = std::f64::consts::E;
    let h_chat = energy_entropy(chat.as_slice(), base);
    let chat_energy = chat.energy();
    let mut e_buf = vec![0.0; m];
    let mut best: Option<ScanChoice> = None;

    for j in 0..n {
        let c = corr[j];
        if c.abs() <= floor {
            continue;
        }
        let mut e_energy = 0.0;
        for i in 0..m {
            let v = y[i] - yhat[i] - c * a.get(i, j);
            e_buf[i] = v;
            e_energy += v * v;
        }
        // Admissible only if the residual strictly shrinks. For a
        // unit-norm column this is implied by c ≠ 0, but floating point
        // gets the explicit check.
        if !(e_energy.sqrt() < r_norm) {
            continue;
        }
        let residual_term = if e_energy.sqrt() <= ENTROPY_NORM_FLOOR {
            0.0
        } else {
            energy_entropy(&e_buf, base)
        };
        let coeff_term = if (chat_energy + c * c).sqrt() <= ENTROPY_NORM_FLOOR {
            0.0
        } else {
            h_chat + energy_entropy(&[c], base)
        };
        let score = weights.w1 * residual_term + weights.w2 * coeff_term;
        if best.map_or(true, |b| score < b.conditional_entropy) {
            best = Some(ScanChoice { index: j, coefficient: c, conditional_entropy: score });
        }
    }
    Ok(best)
}

/// Noiseless pursuit: fixed weights, no entropy gate. Runs until the
/// normalized residual drops below `cfg.epsilon` (or no atom is
/// admissible, or the cap is hit).
pub fn emp_recover_noiseless(problem: &SparseProblem, cfg: &EmpConfig) -> Result<RecoveryResult> {
    if cfg.gamma.is_some() {
        return Err(Error::BadParameter(
            "noiseless mode takes no gamma; use the noisy entry point".into(),
        ));
    }
    run(problem, cfg, None)
}

/// Noisy pursuit: support-dependent weights plus the entropy gate γ. The
/// run ends at the first candidate whose conditional-entropy ratio
/// ΔH = H_m/H_{m−1} reaches γ (that candidate is not committed), or on
/// the usual residual / cap / admissibility conditions.
pub fn emp_recover_noisy(problem: &SparseProblem, cfg: &EmpConfig) -> Result<RecoveryResult> {
    let Some(gamma) = cfg.gamma else {
        return Err(Error::BadParameter(
            "noisy mode needs a gamma; use gamma_default or set one explicitly".into(),
        ));
    };
    run(problem, cfg, Some(gamma))
}

/// Default entropy gate (M + N + 5·SNR_dB) / M. Grows with the input SNR
/// (cleaner measurements tolerate more committed components) and shrinks
/// as measurements are added. Very low SNRs can push the formula to a
/// non-positive value, which is reported instead of silently gating
/// everything.
pub fn gamma_default(m: usize, n: usize, input_snr_db: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::BadDimension("gamma formula needs m >= 1 and n >= 1".into()));
    }
    if !input_snr_db.is_finite() {
        return Err(Error::BadParameter(format!("snr must be finite, got {input_snr_db}")));
    }
    let g = (m as f64 + n as f64 + 5.0 * input_snr_db) / m as f64;
    if g <= 0.0 {
        return Err(Error::NonPositiveGamma);
    }
    Ok(g)
}

fn run(problem: &SparseProblem, cfg: &EmpConfig, gamma: Option<f64>) -> Result<RecoveryResult> {
    cfg.validate()?;
    let a = &problem.a;
    let m = problem.m();
    let n = problem.n();
    let (y_n, norm_y) = normalize_l2(&problem.y)?;

    let mut yhat = Vector::zeros(m);
    let mut r = y_n.clone();
    let mut chat = Vector::zeros(n);
    let mut residual_trace = vec![r.norm_l2()];
    let h0 = energy_entropy(y_n.as_slice(), std::f64::consts::E);
    let mut entropy_trace = vec![h0];
    let mut h_prev = h0;
    let mut support: Vec<usize> = Vec::new();
    let mut selections: Vec<(usize, f64)> = Vec::new();
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;

    if residual_trace[0] < cfg.epsilon {
        termination = Termination::ResidualBelowEpsilon;
    } else {
        for _ in 0..cfg.max_iter {
            let weights = match gamma {
                None => EmpWeights::noiseless(n),
                Some(_) => {
                    if support.len() >= m {
                        // The coefficient term owns the whole objective;
                        // the representation is as dense as the
                        // measurements can justify.
                        termination = Termination::SparsityReached;
                        break;
                    }
                    EmpWeights::noisy(m, support.len())
                }
            };
            let Some(choice) =
                emp_candidate_scan(a, &y_n, &yhat, &chat, &r, &weights, cfg.correlation_floor)?
            else {
                termination = Termination::NoAdmissibleAtom;
                break;
            };
            if let Some(g) = gamma {
                match delta_h(choice.conditional_entropy, h_prev) {
                    Err(_) => {
                        // History collapsed to zero entropy: nothing left
                        // to compare against, stop at the gate.
                        termination = Termination::EntropyGate;
                        break;
                    }
                    Ok(dh) if dh >= g => {
                        termination = Termination::EntropyGate;
                        break;
                    }
                    Ok(_) => {}
                }
            }
            a.axpy_col(choice.index, -choice.coefficient, r.as_mut_slice());
            let new_norm = r.norm_l2();
            if !(new_norm < *residual_trace.last().unwrap()) {
                // The scan's trial arithmetic promised a decrease, but at
                // the committed representation the improvement is below
                // one ulp of the residual norm. Nothing measurable is
                // left to extract, so the atom is discarded like any
                // other non-reducing candidate.
                termination = Termination::NoAdmissibleAtom;
                break;
            }
            chat[choice.index] += choice.coefficient;
            a.axpy_col(choice.index, choice.coefficient, yhat.as_mut_slice());
            if !support.contains(&choice.index) {
                support.push(choice.index);
            }
            selections.push((choice.index, choice.coefficient));
            iterations += 1;
            residual_trace.push(new_norm);
            entropy_trace.push(choice.conditional_entropy);
            h_prev = choice.conditional_entropy;
            if *residual_trace.last().unwrap() < cfg.epsilon {
                termination = Termination::ResidualBelowEpsilon;
                break;
            }
        }
    }

    finalize_result(
        problem,
        chat.as_slice(),
        norm_y,
        iterations,
        residual_trace,
        entropy_trace,
        support,
        selections,
        termination,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{fourier_basis, gaussian_measurement, gen_sparse_signal};

    fn v(xs: &[f64]) -> Vector {
        Vector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn scan_picks_the_only_energy_direction() {
        let a = Matrix::identity(2);
        let y = v(&[1.0, 0.0]);
        let choice = emp_candidate_scan(
            &a,
            &y,
            &Vector::zeros(2),
            &Vector::zeros(2),
            &y,
            &EmpWeights::noiseless(2),
            DEFAULT_CORRELATION_FLOOR,
        )
        .unwrap()
        .expect("a correlated column exists");
        assert_eq!(choice.index, 0);
        assert!((choice.coefficient - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_prefers_the_atom_that_clears_the_residual() {
        // Third column is (e1+e2)/√2: taking it zeroes the residual in
        // one step, which no single standard-basis column can do.
        let s = 0.5_f64.sqrt();
        let a = Matrix::new(2, 3, vec![1.0, 0.0, s, 0.0, 1.0, s]).unwrap();
        let y = v(&[s, s]); // normalized (1, 1)
        let choice = emp_candidate_scan(
            &a,
            &y,
            &Vector::zeros(2),
            &Vector::zeros(3),
            &y,
            &EmpWeights::noiseless(3),
            DEFAULT_CORRELATION_FLOOR,
        )
        .unwrap()
        .unwrap();
        assert_eq!(choice.index, 2);
        assert!((choice.coefficient - 1.0).abs() < 1e-12);
        assert!(choice.conditional_entropy.abs() < 1e-12);
    }

    #[test]
    fn scan_returns_none_on_zero_residual() {
        let a = Matrix::identity(3);
        let none = emp_candidate_scan(
            &a,
            &Vector::zeros(3),
            &Vector::zeros(3),
            &Vector::zeros(3),
            &Vector::zeros(3),
            &EmpWeights::noiseless(3),
            DEFAULT_CORRELATION_FLOOR,
        )
        .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn scan_rejects_negative_weights() {
        let a = Matrix::identity(2);
        let y = v(&[1.0, 0.0]);
        let got = emp_candidate_scan(
            &a,
            &y,
            &Vector::zeros(2),
            &Vector::zeros(2),
            &y,
            &EmpWeights { w1: -0.5, w2: 0.5 },
            1e-12,
        );
        assert_eq!(got.unwrap_err(), Error::NegativeWeight);
    }

    #[test]
    fn noiseless_is_exact_on_an_orthonormal_dictionary() {
        let psi = fourier_basis(16).unwrap();
        let sig = gen_sparse_signal(&psi, 3, 21).unwrap();
        let prob = SparseProblem::from_signal(psi, Matrix::identity(16), &sig.clean).unwrap();
        let res = emp_recover_noiseless(&prob, &EmpConfig::noiseless(1e-6, 100)).unwrap();
        assert_eq!(res.termination, Termination::ResidualBelowEpsilon);
        assert_eq!(res.iterations, 3);
        let err = res.chat.minus(&sig.coeffs).unwrap().norm_l2();
        assert!(err < 1e-10 * sig.coeffs.norm_l2(), "coefficient error {err}");
    }

    #[test]
    fn noiseless_recovers_through_gaussian_measurements() {
        let psi = fourier_basis(40).unwrap();
        let phi = gaussian_measurement(20, 40, 800).unwrap();
        let sig = gen_sparse_signal(&psi, 4, 801).unwrap();
        let prob = SparseProblem::from_signal(psi, phi, &sig.clean).unwrap();
        let res = emp_recover_noiseless(&prob, &EmpConfig::noiseless(1e-6, 400)).unwrap();
        assert_eq!(res.termination, Termination::ResidualBelowEpsilon, "iters {}", res.iterations);
        let rel = res.chat.minus(&sig.coeffs).unwrap().norm_l2() / sig.coeffs.norm_l2();
        assert!(rel < 1e-4, "relative coefficient error {rel}");
    }

    #[test]
    fn residual_trace_is_strictly_decreasing_and_energy_balances() {
        let psi = fourier_basis(40).unwrap();
        let phi = gaussian_measurement(24, 40, 900).unwrap();
        let sig = gen_sparse_signal(&psi, 4, 901).unwrap();
        let prob = SparseProblem::from_signal(psi, phi, &sig.clean).unwrap();
        let res = emp_recover_noiseless(&prob, &EmpConfig::noiseless(1e-8, 400)).unwrap();
        for w in res.residual_trace.windows(2) {
            assert!(w[1] < w[0], "residual did not strictly decrease: {w:?}");
        }
        // Extracted energy plus what is left must be the unit start.
        let extracted: f64 = res.selections.iter().map(|(_, c)| c * c).sum();
        let leftover = res.residual_trace.last().unwrap().powi(2);
        assert!((extracted + leftover - 1.0).abs() < 1e-8);
    }

    #[test]
    fn noiseless_mode_refuses_a_gamma() {
        let prob = SparseProblem::new(
            Matrix::identity(2),
            Matrix::identity(2),
            v(&[1.0, 0.0]),
        )
        .unwrap();
        let mut cfg = EmpConfig::noiseless(1e-6, 10);
        cfg.gamma = Some(2.0);
        assert!(emp_recover_noiseless(&prob, &cfg).is_err());
        assert!(emp_recover_noisy(&prob, &EmpConfig::noiseless(1e-6, 10)).is_err());
    }

    #[test]
    fn zero_measurement_is_an_error() {
        let prob = SparseProblem::new(
            Matrix::identity(2),
            Matrix::identity(2),
            Vector::zeros(2),
        )
        .unwrap();
        assert_eq!(
            emp_recover_noiseless(&prob, &EmpConfig::noiseless(1e-6, 10)).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn tiny_gamma_gates_immediately() {
        let psi = fourier_basis(16).unwrap();
        let phi = gaussian_measurement(8, 16, 33).unwrap();
        let sig = gen_sparse_signal(&psi, 2, 34).unwrap().with_noise(3.0, 35).unwrap();
        let prob = SparseProblem::from_signal(psi, phi, sig.measured()).unwrap();
        let res = emp_recover_noisy(&prob, &EmpConfig::noisy(1e-6, 1e-9, 100)).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.termination, Termination::EntropyGate);
        assert_eq!(res.chat.norm_l2(), 0.0);
    }

    #[test]
    fn lowering_gamma_never_adds_iterations() {
        let psi = fourier_basis(24).unwrap();
        let phi = gaussian_measurement(12, 24, 55).unwrap();
        let sig = gen_sparse_signal(&psi, 3, 56).unwrap().with_noise(3.0, 57).unwrap();
        let prob = SparseProblem::from_signal(psi, phi, sig.measured()).unwrap();
        let mut last = usize::MAX;
        for gamma in [4.0, 2.0, 1.2, 1.05, 1.0, 0.9, 0.5, 1e-9] {
            let res = emp_recover_noisy(&prob, &EmpConfig::noisy(1e-6, gamma, 120)).unwrap();
            assert!(
                res.iterations <= last,
                "gamma {gamma} committed {} > previous {last}",
                res.iterations
            );
            last = res.iterations;
        }
    }

    #[test]
    fn gamma_default_formula_values() {
        assert!((gamma_default(20, 40, 3.0).unwrap() - 3.75).abs() < 1e-12);
        assert!((gamma_default(36, 40, 0.0).unwrap() - 76.0 / 36.0).abs() < 1e-12);
        assert_eq!(gamma_default(10, 10, -6.0).unwrap_err(), Error::NonPositiveGamma);
    }

    #[test]
    fn weights_sum_to_one_on_both_schedules() {
        let w = EmpWeights::noiseless(40);
        assert!((w.w1 + w.w2 - 1.0).abs() < 1e-15);
        assert!((w.w1 - 40.0 / 41.0).abs() < 1e-15);
        for s in 0..=20 {
            let w = EmpWeights::noisy(20, s);
            assert!((w.w1 + w.w2 - 1.0).abs() < 1e-15);
            assert!(w.w1 >= 0.0 && w.w2 >= 0.0);
        }
        assert_eq!(EmpWeights::noisy(20, 20).w1, 0.0);
    }
}
