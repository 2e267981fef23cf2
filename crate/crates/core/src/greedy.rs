//! Classical greedy pursuits used as baselines: matching pursuit,
//! orthogonal matching pursuit, CoSaMP, and ROMP, in their canonical
//! forms. All of them operate on the column-normalized dictionary of a
//! `SparseProblem` and report through the shared `RecoveryResult`.
//!
//! Departures from the textbook presentations are deliberately small and
//! noted on each function: deterministic lowest-index tie-breaking
//! everywhere, a shared correlation floor of 1e-12 below which an atom is
//! considered unusable, and CoSaMP keeping the better iterate when an
//! iteration fails to improve the residual.

use crate::error::{Error, Result};
use crate::la::{least_squares, Vector};
use crate::problem::SparseProblem;
use crate::recovery::{finalize_result, RecoveryResult, StopRule, Termination};

/// Correlations at or below this magnitude are treated as zero.
pub const CORRELATION_FLOOR: f64 = 1e-12;

/// Index of the entry with the largest magnitude; ties go to the lowest
/// index.
fn argmax_abs(xs: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_abs = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        if x.abs() > best_abs {
            best_abs = x.abs();
            best = i;
        }
    }
    (best, xs[best])
}

/// Working estimate of how many components can be recovered from m
/// measurements of an n-dimensional signal: round(m / (2 ln n)), at
/// least 1. Used when the true sparsity is not known.
pub fn estimate_sparsity(m: usize, n: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::BadDimension("need at least one measurement".into()));
    }
    if n < 2 {
        return Err(Error::BadDimension(format!(
            "signal dimension must be >= 2, got {n}"
        )));
    }
    let k = (m as f64 / (2.0 * (n as f64).ln())).round() as usize;
    Ok(k.max(1))
}

/// Matching pursuit: repeatedly strips the best-correlated atom from the
/// residual, accumulating coefficients. Atoms may be selected more than
/// once; no least-squares refit is performed.
pub fn mp_recover(problem: &SparseProblem, stop: &StopRule) -> Result<RecoveryResult> {
    stop.validate()?;
    let a = &problem.a;
    let n = problem.n();
    let mut chat = vec![0.0; n];
    let mut r = problem.y.to_vec();
    let mut residual_trace = vec![norm(&r)];
    let mut support: Vec<usize> = Vec::new();
    let mut selections: Vec<(usize, f64)> = Vec::new();
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;

    if below_epsilon(stop, residual_trace[0]) {
        termination = Termination::ResidualBelowEpsilon;
    } else {
        for _ in 0..stop.max_iter {
            let corr = a.tr_matvec(&Vector::from_raw(r.clone()))?;
            let (j, c) = argmax_abs(corr.as_slice());
            if c.abs() <= CORRELATION_FLOOR {
                termination = Termination::NoAdmissibleAtom;
                break;
            }
            chat[j] += c;
            a.axpy_col(j, -c, &mut r);
            if !support.contains(&j) {
                support.push(j);
            }
            selections.push((j, c));
            iterations += 1;
            residual_trace.push(norm(&r));
            if below_epsilon(stop, *residual_trace.last().unwrap()) {
                termination = Termination::ResidualBelowEpsilon;
                break;
            }
            if stop.sparsity().is_some_and(|k| support.len() >= k) {
                termination = Termination::SparsityReached;
                break;
            }
        }
    }

    finalize_result(
        problem,
        &chat,
        1.0,
        iterations,
        residual_trace,
        Vec::new(),
        support,
        selections,
        termination,
    )
}

/// Orthogonal matching pursuit: like MP, but each atom is selected at
/// most once and the coefficients are refit by least squares on the whole
/// support every iteration, so the residual stays orthogonal to the span
/// of the selected columns.
pub fn omp_recover(problem: &SparseProblem, stop: &StopRule) -> Result<RecoveryResult> {
    stop.validate()?;
    let a = &problem.a;
    let n = problem.n();
    let mut chat = vec![0.0; n];
    let mut r = problem.y.clone();
    let mut residual_trace = vec![r.norm_l2()];
    let mut support: Vec<usize> = Vec::new();
    let mut selections: Vec<(usize, f64)> = Vec::new();
    let mut selected = vec![false; n];
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;

    if below_epsilon(stop, residual_trace[0]) {
        termination = Termination::ResidualBelowEpsilon;
    } else {
        for _ in 0..stop.max_iter {
            let corr = a.tr_matvec(&r)?;
            let mut j_best = None;
            let mut best_abs = CORRELATION_FLOOR;
            for (j, &c) in corr.iter().enumerate() {
                if !selected[j] && c.abs() > best_abs {
                    best_abs = c.abs();
                    j_best = Some(j);
                }
            }
            let Some(j) = j_best else {
                termination = Termination::NoAdmissibleAtom;
                break;
            };
            selected[j] = true;
            support.push(j);
            let sub = a.columns(&support);
            let x = least_squares(&sub, &problem.y)?;
            r = problem.y.minus(&sub.matvec(&x)?)?;
            let prev = chat[j];
            chat.iter_mut().for_each(|c| *c = 0.0);
            for (t, &col) in support.iter().enumerate() {
                chat[col] = x[t];
            }
            selections.push((j, chat[j] - prev));
            iterations += 1;
            residual_trace.push(r.norm_l2());
            if below_epsilon(stop, *residual_trace.last().unwrap()) {
                termination = Termination::ResidualBelowEpsilon;
                break;
            }
            if stop.sparsity().is_some_and(|k| support.len() >= k) {
                termination = Termination::SparsityReached;
                break;
            }
        }
    }

    finalize_result(
        problem,
        &chat,
        1.0,
        iterations,
        residual_trace,
        Vec::new(),
        support,
        selections,
        termination,
    )
}

/// CoSaMP with target sparsity k: each iteration merges the current
/// support with the 2k strongest correlation indices, solves least
/// squares on the merged set, and prunes back to the k largest
/// coefficients. When an iteration fails to shrink the residual the
/// previous (better) iterate is kept and the run stops.
pub fn cosamp_recover(problem: &SparseProblem, k: usize, stop: &StopRule) -> Result<RecoveryResult> {
    stop.validate()?;
    let n = problem.n();
    if k == 0 || k > n {
        return Err(Error::BadParameter(format!(
            "target sparsity must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    let a = &problem.a;
    let mut chat = vec![0.0; n];
    let mut support: Vec<usize> = Vec::new();
    let mut r = problem.y.clone();
    let mut residual_trace = vec![r.norm_l2()];
    let mut selections: Vec<(usize, f64)> = Vec::new();
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;

    if below_epsilon(stop, residual_trace[0]) {
        termination = Termination::ResidualBelowEpsilon;
    } else {
        for _ in 0..stop.max_iter {
            let proxy = a.tr_matvec(&r)?;
            let mut ranked: Vec<usize> = (0..n)
                .filter(|&j| proxy[j].abs() > CORRELATION_FLOOR)
                .collect();
            if ranked.is_empty() {
                termination = Termination::NoAdmissibleAtom;
                break;
            }
            ranked.sort_by(|&i, &j| {
                proxy[j]
                    .abs()
                    .partial_cmp(&proxy[i].abs())
                    .unwrap()
                    .then(i.cmp(&j))
            });
            ranked.truncate(2 * k);

            let mut merged = support.clone();
            for &j in &ranked {
                if !merged.contains(&j) {
                    merged.push(j);
                }
            }
            merged.sort_unstable();

            let sub = a.columns(&merged);
            let b = least_squares(&sub, &problem.y)?;
            let mut order: Vec<usize> = (0..merged.len()).collect();
            order.sort_by(|&i, &j| {
                b[j].abs()
                    .partial_cmp(&b[i].abs())
                    .unwrap()
                    .then(merged[i].cmp(&merged[j]))
            });
            order.truncate(k);
            let mut new_support: Vec<usize> = order.iter().map(|&t| merged[t]).collect();
            new_support.sort_unstable();

            let mut new_chat = vec![0.0; n];
            for &t in &order {
                new_chat[merged[t]] = b[t];
            }
            let new_r = problem.y.minus(&a.matvec(&Vector::from_raw(new_chat.clone()))?)?;
            let new_norm = new_r.norm_l2();

            let prev_norm = *residual_trace.last().unwrap();
            if new_norm >= prev_norm * (1.0 - 1e-9) {
                // Stagnated (or got worse): keep the previous iterate.
                termination = Termination::NoAdmissibleAtom;
                break;
            }

            for &j in &new_support {
                if chat[j] != new_chat[j] {
                    selections.push((j, new_chat[j] - chat[j]));
                }
            }
            chat = new_chat;
            support = new_support;
            r = new_r;
            iterations += 1;
            residual_trace.push(new_norm);
            if below_epsilon(stop, new_norm) {
                termination = Termination::ResidualBelowEpsilon;
                break;
            }
        }
    }

    finalize_result(
        problem,
        &chat,
        1.0,
        iterations,
        residual_trace,
        Vec::new(),
        support,
        selections,
        termination,
    )
}

/// ROMP with target sparsity k: each iteration takes the k strongest
/// correlations, keeps the maximal-energy group of comparable magnitudes
/// (max |u| ≤ 2·min |u| within the group), adds the group to the support,
/// and refits by least squares. Stops when the support reaches 2k, when
/// the stop rule fires, or when no group makes progress.
pub fn romp_recover(problem: &SparseProblem, k: usize, stop: &StopRule) -> Result<RecoveryResult> {
    stop.validate()?;
    let n = problem.n();
    if k == 0 || k > n {
        return Err(Error::BadParameter(format!(
            "target sparsity must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    let a = &problem.a;
    let mut chat = vec![0.0; n];
    let mut support: Vec<usize> = Vec::new();
    let mut r = problem.y.clone();
    let mut residual_trace = vec![r.norm_l2()];
    let mut selections: Vec<(usize, f64)> = Vec::new();
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;

    if below_epsilon(stop, residual_trace[0]) {
        termination = Termination::ResidualBelowEpsilon;
    } else {
        for _ in 0..stop.max_iter {
            let u = a.tr_matvec(&r)?;
            let mut ranked: Vec<usize> =
                (0..n).filter(|&j| u[j].abs() > CORRELATION_FLOOR).collect();
            if ranked.is_empty() {
                termination = Termination::NoAdmissibleAtom;
                break;
            }
            ranked.sort_by(|&i, &j| {
                u[j].abs().partial_cmp(&u[i].abs()).unwrap().then(i.cmp(&j))
            });
            ranked.truncate(k);

            let group = regularized_group(&ranked, u.as_slice());
            let mut added = false;
            for &j in &group {
                if !support.contains(&j) {
                    support.push(j);
                    added = true;
                }
            }
            if !added {
                termination = Termination::NoAdmissibleAtom;
                break;
            }
            support.sort_unstable();

            let sub = a.columns(&support);
            let x = least_squares(&sub, &problem.y)?;
            let mut new_chat = vec![0.0; n];
            for (t, &col) in support.iter().enumerate() {
                new_chat[col] = x[t];
            }
            r = problem.y.minus(&sub.matvec(&x)?)?;
            for &j in &group {
                if new_chat[j] != chat[j] {
                    selections.push((j, new_chat[j] - chat[j]));
                }
            }
            chat = new_chat;
            iterations += 1;
            residual_trace.push(r.norm_l2());
            if below_epsilon(stop, *residual_trace.last().unwrap()) {
                termination = Termination::ResidualBelowEpsilon;
                break;
            }
            if support.len() >= 2 * k || stop.sparsity().is_some_and(|s| support.len() >= s) {
                termination = Termination::SparsityReached;
                break;
            }
        }
    }

    finalize_result(
        problem,
        &chat,
        1.0,
        iterations,
        residual_trace,
        Vec::new(),
        support,
        selections,
        termination,
    )
}

/// Among the magnitude-sorted candidate indices, finds the contiguous
/// window whose correlations are mutually comparable (largest ≤ 2× the
/// smallest) with maximal energy. `ranked` must already be sorted by
/// descending |u|.
fn regularized_group(ranked: &[usize], u: &[f64]) -> Vec<usize> {
    let mut best: (f64, usize, usize) = (f64::NEG_INFINITY, 0, 0);
    for start in 0..ranked.len() {
        let top = u[ranked[start]].abs();
        let mut energy = 0.0;
        for end in start..ranked.len() {
            let low = u[ranked[end]].abs();
            if top > 2.0 * low {
                break;
            }
            energy += u[ranked[end]] * u[ranked[end]];
            if energy > best.0 {
                best = (energy, start, end + 1);
            }
        }
    }
    ranked[best.1..best.2].to_vec()
}

fn below_epsilon(stop: &StopRule, residual_norm: f64) -> bool {
    stop.epsilon().is_some_and(|e| residual_norm < e)
}

fn norm(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x * x).sum::<f64>().sqrt()
}
