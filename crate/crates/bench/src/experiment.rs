//! Experiment orchestration: a validated config describes a sweep over
//! measurement counts, and [`run_experiment`] turns it into one report
//! row per (algorithm, m, trial).
//!
//! Every trial derives its own seed from (config seed, m, trial index)
//! alone, so the row set is a pure function of the config: trials can run
//! in parallel, reruns are byte-identical, and any single row can be
//! regenerated in isolation.

use std::str::FromStr;

use cs_recovery::emp::{emp_recover_noiseless, emp_recover_noisy, gamma_default, EmpConfig};
use cs_recovery::greedy::{
    cosamp_recover, estimate_sparsity, mp_recover, omp_recover, romp_recover,
};
use cs_recovery::problem::{
    fourier_basis, gaussian_measurement, gen_compressible_signal, gen_sparse_signal, random_frame,
    SignalInstance, SparseProblem,
};
use cs_recovery::recovery::{RecoveryResult, StopRule};
use rayon::prelude::*;

use crate::metrics::{reconstruction_ip, recovery_flag, snr_out, srer};
use crate::{BenchError, Result};

/// The four benchmark scenarios: exact sparsity that is either told to
/// the baselines or estimated from the measurement count, and two noisy
/// variants (exactly sparse and power-law compressible coefficients).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    NoiselessKnownK,
    NoiselessUnknownK,
    NoisySparse,
    NoisyCompressible,
}

impl ExperimentKind {
    pub fn is_noisy(&self) -> bool {
        matches!(self, ExperimentKind::NoisySparse | ExperimentKind::NoisyCompressible)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::NoiselessKnownK => "NoiselessKnownK",
            ExperimentKind::NoiselessUnknownK => "NoiselessUnknownK",
            ExperimentKind::NoisySparse => "NoisySparse",
            ExperimentKind::NoisyCompressible => "NoisyCompressible",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "noiselessknownk" => Ok(ExperimentKind::NoiselessKnownK),
            "noiselessunknownk" => Ok(ExperimentKind::NoiselessUnknownK),
            "noisysparse" => Ok(ExperimentKind::NoisySparse),
            "noisycompressible" => Ok(ExperimentKind::NoisyCompressible),
            _ => Err(format!(
                "unknown experiment '{s}' (expected NoiselessKnownK, NoiselessUnknownK, \
                 NoisySparse, or NoisyCompressible)"
            )),
        }
    }
}

/// Representation basis Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Real DFT basis (deterministic; needs even n).
    Fourier,
    /// Seeded random orthonormal basis.
    RandomFrame,
}

impl BasisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisKind::Fourier => "Fourier",
            BasisKind::RandomFrame => "RandomFrame",
        }
    }
}

impl FromStr for BasisKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fourier" => Ok(BasisKind::Fourier),
            "randomframe" => Ok(BasisKind::RandomFrame),
            _ => Err(format!("unknown basis '{s}' (expected Fourier or RandomFrame)")),
        }
    }
}

/// A recovery algorithm selectable in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Mp,
    Omp,
    Cosamp,
    Romp,
    Emp,
}

impl Algorithm {
    /// Name used in report rows and on the command line.
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Mp => "MP",
            Algorithm::Omp => "OMP",
            Algorithm::Cosamp => "CoSaMP",
            Algorithm::Romp => "ROMP",
            Algorithm::Emp => "EMP",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mp" => Ok(Algorithm::Mp),
            "omp" => Ok(Algorithm::Omp),
            "cosamp" => Ok(Algorithm::Cosamp),
            "romp" => Ok(Algorithm::Romp),
            "emp" => Ok(Algorithm::Emp),
            _ => Err(format!("unknown algorithm '{s}' (expected MP, OMP, CoSaMP, ROMP, or EMP)")),
        }
    }
}

/// Power-law magnitude profile for compressible signals: the i-th
/// largest coefficient has magnitude p·i^(−r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub p: f64,
    pub r: f64,
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Signal dimension N.
    pub n: usize,
    /// Generating sparsity; required by every experiment except
    /// NoisyCompressible.
    pub k: Option<usize>,
    pub basis: BasisKind,
    /// Measurement counts to sweep, each 1 ≤ m ≤ n.
    pub m_grid: Vec<usize>,
    /// Input SNR in dB; required by the noisy experiments.
    pub input_snr_db: Option<f64>,
    /// Trials per measurement count.
    pub trials: usize,
    pub seed: u64,
    /// Residual threshold relative to ‖y‖.
    pub epsilon: f64,
    /// Entropy gate; when absent the default formula is used per m.
    pub gamma_override: Option<f64>,
    /// Algorithms to run, in report order.
    pub algorithms: Vec<Algorithm>,
    /// Coefficient profile; required by NoisyCompressible.
    pub power_law: Option<PowerLaw>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.n < 2 {
            return fail(format!("n must be at least 2, got {}", self.n));
        }
        if self.basis == BasisKind::Fourier && self.n % 2 != 0 {
            return fail(format!("the Fourier basis needs an even n, got {}", self.n));
        }
        if self.m_grid.is_empty() {
            return fail("m_grid must list at least one measurement count".into());
        }
        for &m in &self.m_grid {
            if m == 0 || m > self.n {
                return fail(format!("every m must satisfy 1 <= m <= n = {}, got {m}", self.n));
            }
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return fail(format!("epsilon must be positive and finite, got {}", self.epsilon));
        }
        if self.algorithms.is_empty() {
            return fail("select at least one algorithm".into());
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return fail(format!("algorithm {} is listed twice", a.label()));
            }
        }
        if self.experiment.is_noisy() {
            match self.input_snr_db {
                None => {
                    return fail(format!(
                        "{} requires input_snr_db",
                        self.experiment.as_str()
                    ))
                }
                Some(snr) if !snr.is_finite() => {
                    return fail(format!("input_snr_db must be finite, got {snr}"))
                }
                _ => {}
            }
        }
        if self.experiment == ExperimentKind::NoisyCompressible {
            match self.power_law {
                None => return fail("NoisyCompressible requires power_law".into()),
                Some(PowerLaw { p, r }) => {
                    if !(p > 0.0) || !p.is_finite() {
                        return fail(format!("power-law scale p must be positive, got {p}"));
                    }
                    if !(r > 1.0) || !r.is_finite() {
                        return fail(format!(
                            "power-law exponent r must exceed 1 for a compressible profile, got {r}"
                        ));
                    }
                }
            }
        } else {
            match self.k {
                None => {
                    return fail(format!("{} requires k", self.experiment.as_str()));
                }
                Some(k) if k == 0 || k > self.n => {
                    return fail(format!("k must satisfy 1 <= k <= n = {}, got {k}", self.n));
                }
                _ => {}
            }
        }
        match self.gamma_override {
            Some(g) if !(g > 0.0) || !g.is_finite() => {
                return fail(format!("gamma must be positive and finite, got {g}"));
            }
            None if self.experiment.is_noisy() => {
                // The default gate formula can go non-positive at very low
                // SNR; surface that at config time rather than per row.
                let snr = self.input_snr_db.unwrap();
                for &m in &self.m_grid {
                    if let Err(e) = gamma_default(m, self.n, snr) {
                        return fail(format!(
                            "default gamma is unusable at m = {m} ({e}); set gamma explicitly"
                        ));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// One (algorithm, m, trial) outcome.
///
/// `snr_db` is present exactly for the noisy experiments and `recovered`
/// exactly for NoiselessKnownK; `ip` is absent when the reconstruction is
/// identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub algorithm: String,
    pub m: usize,
    pub trial: usize,
    pub srer_db: f64,
    pub snr_db: Option<f64>,
    pub ip: Option<f64>,
    pub recovered: Option<bool>,
    pub iterations: usize,
    pub termination: String,
}

/// Seed for one trial, mixed from (sweep seed, m, trial) with the
/// splitmix64 finalizer so neighbouring trials get unrelated streams.
/// Consecutive offsets of the returned value seed the trial's basis,
/// measurement matrix, signal, and noise draws.
pub fn trial_seed(seed: u64, m: usize, trial: usize) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(m as u64)
        .wrapping_mul(0xbf58_476d_1ce4_e5b9)
        .wrapping_add(trial as u64);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs the sweep and returns rows ordered by (position of m in the
/// grid, trial, position of the algorithm in the config). Per-row
/// algorithm failures become rows with an error label in the termination
/// column; only config problems abort the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let tasks: Vec<(usize, usize)> = cfg
        .m_grid
        .iter()
        .flat_map(|&m| (0..cfg.trials).map(move |t| (m, t)))
        .collect();
    let per_trial: Vec<Vec<ReportRow>> =
        tasks.par_iter().map(|&(m, trial)| run_trial(cfg, m, trial)).collect();
    Ok(per_trial.into_iter().flatten().collect())
}

fn run_trial(cfg: &ExperimentConfig, m: usize, trial: usize) -> Vec<ReportRow> {
    let (problem, signal) = match build_instance(cfg, m, trial) {
        Ok(pair) => pair,
        Err(e) => {
            return cfg
                .algorithms
                .iter()
                .map(|&algo| error_row(cfg, algo, m, trial, e.label()))
                .collect()
        }
    };
    cfg.algorithms
        .iter()
        .map(|&algo| match dispatch(cfg, &problem, algo, m) {
            Ok(res) => measured_row(cfg, &signal, algo, m, trial, &res),
            Err(e) => error_row(cfg, algo, m, trial, e.label()),
        })
        .collect()
}

fn build_instance(
    cfg: &ExperimentConfig,
    m: usize,
    trial: usize,
) -> cs_recovery::Result<(SparseProblem, SignalInstance)> {
    let ts = trial_seed(cfg.seed, m, trial);
    let psi = match cfg.basis {
        BasisKind::Fourier => fourier_basis(cfg.n)?,
        BasisKind::RandomFrame => random_frame(cfg.n, ts.wrapping_add(1))?,
    };
    let phi = gaussian_measurement(m, cfg.n, ts.wrapping_add(2))?;
    let mut signal = match cfg.experiment {
        ExperimentKind::NoisyCompressible => {
            let PowerLaw { p, r } = cfg.power_law.expect("validated");
            gen_compressible_signal(&psi, p, r, ts.wrapping_add(3))?
        }
        _ => gen_sparse_signal(&psi, cfg.k.expect("validated"), ts.wrapping_add(3))?,
    };
    if cfg.experiment.is_noisy() {
        signal = signal.with_noise(cfg.input_snr_db.expect("validated"), ts.wrapping_add(4))?;
    }
    let problem = SparseProblem::from_signal(psi, phi, signal.measured())?;
    Ok((problem, signal))
}

/// Stop rule for one baseline in this experiment, plus the sparsity
/// parameter handed to the set-based algorithms: the generating k when
/// it is known, the estimate from (m, n) otherwise.
///
/// The atom-at-a-time pursuits (MP, OMP) take the sparsity target
/// through the rule and halt when their support reaches it. CoSaMP and
/// ROMP already receive it as their k parameter and manage their own
/// support — ROMP legitimately accumulates up to 2k indices before its
/// refit settles on the right ones — so capping their support at k from
/// the outside would cut them off mid-recovery. Their rule therefore
/// carries the residual threshold when the experiment has one, and
/// otherwise mirrors ROMP's own 2k bound.
fn baseline_stop(
    cfg: &ExperimentConfig,
    algo: Algorithm,
    m: usize,
    eps_abs: f64,
) -> cs_recovery::Result<(StopRule, usize)> {
    let max_iter = 10 * m;
    let set_based = matches!(algo, Algorithm::Cosamp | Algorithm::Romp);
    match cfg.experiment {
        ExperimentKind::NoiselessKnownK => {
            let k = cfg.k.expect("validated");
            let stop = if set_based {
                StopRule::residual_threshold(eps_abs, max_iter)
            } else {
                StopRule::both(k, eps_abs, max_iter)
            };
            Ok((stop, k))
        }
        ExperimentKind::NoiselessUnknownK | ExperimentKind::NoisySparse => {
            let kest = estimate_sparsity(m, cfg.n)?;
            let cap = if set_based { 2 * kest } else { kest };
            Ok((StopRule::known_sparsity(cap, max_iter), kest))
        }
        ExperimentKind::NoisyCompressible => {
            let kest = estimate_sparsity(m, cfg.n)?;
            Ok((StopRule::residual_threshold(eps_abs, max_iter), kest))
        }
    }
}

fn dispatch(
    cfg: &ExperimentConfig,
    problem: &SparseProblem,
    algo: Algorithm,
    m: usize,
) -> cs_recovery::Result<RecoveryResult> {
    let max_iter = 10 * m;
    if algo == Algorithm::Emp {
        // The entropy pursuit normalizes y internally, so it takes the
        // relative threshold directly.
        return if cfg.experiment.is_noisy() {
            let gamma = match cfg.gamma_override {
                Some(g) => g,
                None => gamma_default(m, cfg.n, cfg.input_snr_db.expect("validated"))?,
            };
            emp_recover_noisy(problem, &EmpConfig::noisy(cfg.epsilon, gamma, max_iter))
        } else {
            emp_recover_noiseless(problem, &EmpConfig::noiseless(cfg.epsilon, max_iter))
        };
    }
    let eps_abs = cfg.epsilon * problem.y.norm_l2();
    let (stop, k_param) = baseline_stop(cfg, algo, m, eps_abs)?;
    match algo {
        Algorithm::Mp => mp_recover(problem, &stop),
        Algorithm::Omp => omp_recover(problem, &stop),
        Algorithm::Cosamp => cosamp_recover(problem, k_param, &stop),
        Algorithm::Romp => romp_recover(problem, k_param, &stop),
        Algorithm::Emp => unreachable!("handled above"),
    }
}

fn measured_row(
    cfg: &ExperimentConfig,
    signal: &SignalInstance,
    algo: Algorithm,
    m: usize,
    trial: usize,
    res: &RecoveryResult,
) -> ReportRow {
    ReportRow {
        algorithm: algo.label().to_string(),
        m,
        trial,
        srer_db: srer(signal.measured(), &res.shat).unwrap_or(0.0),
        snr_db: cfg
            .experiment
            .is_noisy()
            .then(|| snr_out(&signal.clean, &res.shat).unwrap_or(0.0)),
        ip: reconstruction_ip(&res.shat).ok(),
        recovered: (cfg.experiment == ExperimentKind::NoiselessKnownK)
            .then(|| recovery_flag(&signal.coeffs, &res.chat).unwrap_or(false)),
        iterations: res.iterations,
        termination: res.termination.as_str().to_string(),
    }
}

/// Row recorded when instance generation or the algorithm itself fails:
/// the reconstruction is taken to be the zero vector (0 dB against any
/// reference) and the error's label lands in the termination column.
fn error_row(
    cfg: &ExperimentConfig,
    algo: Algorithm,
    m: usize,
    trial: usize,
    label: &str,
) -> ReportRow {
    ReportRow {
        algorithm: algo.label().to_string(),
        m,
        trial,
        srer_db: 0.0,
        snr_db: cfg.experiment.is_noisy().then_some(0.0),
        ip: None,
        recovered: (cfg.experiment == ExperimentKind::NoiselessKnownK).then_some(false),
        iterations: 0,
        termination: label.to_string(),
    }
}
