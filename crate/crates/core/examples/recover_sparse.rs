//! Recover an exactly sparse signal from undersampled measurements with the
//! entropy pursuit and with OMP, then compare the recovered supports.
//!
//! Run with: cargo run -p cs-recovery --example recover_sparse

use cs_recovery::emp::{emp_recover_noiseless, EmpConfig};
use cs_recovery::greedy::omp_recover;
use cs_recovery::problem::{fourier_basis, gaussian_measurement, gen_sparse_signal, SparseProblem};
use cs_recovery::recovery::StopRule;

fn main() -> cs_recovery::Result<()> {
    let (n, m, k) = (128, 48, 5);
    let psi = fourier_basis(n)?;
    let phi = gaussian_measurement(m, n, 7)?;
    let signal = gen_sparse_signal(&psi, k, 11)?;
    let problem = SparseProblem::from_signal(psi, phi, &signal.clean)?;

    let emp = emp_recover_noiseless(&problem, &EmpConfig::noiseless(1e-6, 10 * m))?;
    let omp = omp_recover(&problem, &StopRule::known_sparsity(k, 10 * m))?;

    let truth: Vec<usize> =
        (0..n).filter(|&j| signal.coeffs.as_slice()[j] != 0.0).collect();
    println!("true support      {truth:?}");
    for (label, result) in [("entropy pursuit", &emp), ("OMP", &omp)] {
        let mut support = result.support.clone();
        support.sort_unstable();
        let rel_err = result.shat.minus(&signal.clean)?.norm_l2() / signal.clean.norm_l2();
        println!(
            "{label:<16}  {support:?}  relative error {rel_err:.2e}  \
             ({} iterations, {:?})",
            result.iterations, result.termination
        );
    }
    Ok(())
}
