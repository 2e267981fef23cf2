//! Shared types for the recovery algorithms: stopping rules, termination
//! reasons, and the common result record.

use crate::error::{Error, Result};
use crate::la::Vector;
use crate::problem::SparseProblem;

/// Why a recovery run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The residual norm dropped below the requested threshold.
    ResidualBelowEpsilon,
    /// The target support size (known or estimated sparsity) was reached.
    SparsityReached,
    /// The entropy gate rejected the next update as noise fitting.
    EntropyGate,
    /// The iteration budget ran out first.
    IterationCap,
    /// No column could make progress: every correlation was numerically
    /// zero or no candidate reduced the residual.
    NoAdmissibleAtom,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ResidualBelowEpsilon => "ResidualBelowEpsilon",
            Termination::SparsityReached => "SparsityReached",
            Termination::EntropyGate => "EntropyGate",
            Termination::IterationCap => "IterationCap",
            Termination::NoAdmissibleAtom => "NoAdmissibleAtom",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the greedy baselines stop on (besides their iteration budget).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopMode {
    /// Stop once the support holds this many distinct atoms.
    KnownSparsity(usize),
    /// Stop once the residual l2 norm falls below this threshold.
    ResidualThreshold(f64),
    /// Whichever of the two triggers first.
    Both { sparsity: usize, epsilon: f64 },
}

/// Stopping rule: a mode plus a hard iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub mode: StopMode,
    pub max_iter: usize,
}

impl StopRule {
    pub fn known_sparsity(k: usize, max_iter: usize) -> Self {
        Self { mode: StopMode::KnownSparsity(k), max_iter }
    }

    pub fn residual_threshold(epsilon: f64, max_iter: usize) -> Self {
        Self { mode: StopMode::ResidualThreshold(epsilon), max_iter }
    }

    pub fn both(k: usize, epsilon: f64, max_iter: usize) -> Self {
        Self { mode: StopMode::Both { sparsity: k, epsilon }, max_iter }
    }

    /// Target support size, when one is set.
    pub fn sparsity(&self) -> Option<usize> {
        match self.mode {
            StopMode::KnownSparsity(k) | StopMode::Both { sparsity: k, .. } => Some(k),
            StopMode::ResidualThreshold(_) => None,
        }
    }

    /// Residual threshold, when one is set.
    pub fn epsilon(&self) -> Option<f64> {
        match self.mode {
            StopMode::ResidualThreshold(e) | StopMode::Both { epsilon: e, .. } => Some(e),
            StopMode::KnownSparsity(_) => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.sparsity() {
            if k == 0 {
                return Err(Error::BadParameter("target sparsity must be >= 1".into()));
            }
        }
        if let Some(e) = self.epsilon() {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::BadParameter(format!(
                    "residual threshold must be positive and finite, got {e}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::BadParameter("iteration cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a recovery run.
///
/// `chat` is expressed against the original scaling of Ψ's columns (the
/// column normalization of the working dictionary and, for the
/// entropy-minimizing pursuit, the normalization of y are both undone),
/// so `shat = Ψ ĉ` lives in the same units as the measured signal.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Estimated coefficients, length N.
    pub chat: Vector,
    /// Reconstructed signal Ψ ĉ, length N.
    pub shat: Vector,
    /// Committed iterations.
    pub iterations: usize,
    /// ‖residual‖₂ per iteration, starting with the initial norm, in the
    /// algorithm's working scale (unit for the entropy pursuit, raw y for
    /// the baselines).
    pub residual_trace: Vec<f64>,
    /// Conditional entropy per committed iteration (entropy pursuit only;
    /// empty for the baselines). Starts with the entropy of the
    /// normalized measurement.
    pub entropy_trace: Vec<f64>,
    /// Distinct selected columns in order of first selection (ascending
    /// for the set-at-a-time algorithms).
    pub support: Vec<usize>,
    /// (column, coefficient-increment) per committed iteration.
    pub selections: Vec<(usize, f64)>,
    pub termination: Termination,
}

/// Maps working-domain coefficients back to the original column scaling
/// and assembles the shared result record. `y_scale` is the norm that was
/// divided out of y before the run (1.0 when y was used as-is).
pub(crate) fn finalize_result(
    problem: &SparseProblem,
    chat_work: &[f64],
    y_scale: f64,
    iterations: usize,
    residual_trace: Vec<f64>,
    entropy_trace: Vec<f64>,
    support: Vec<usize>,
    selections: Vec<(usize, f64)>,
    termination: Termination,
) -> Result<RecoveryResult> {
    let n = problem.n();
    debug_assert_eq!(chat_work.len(), n);
    let mut chat = vec![0.0; n];
    for j in 0..n {
        chat[j] = chat_work[j] * y_scale / problem.a_scales[j];
    }
    let chat = Vector::new(chat)?;
    let shat = problem.psi.matvec(&chat)?;
    Ok(RecoveryResult {
        chat,
        shat,
        iterations,
        residual_trace,
        entropy_trace,
        support,
        selections,
        termination,
    })
}
