//! Problem synthesis: representation bases, measurement matrices, sparse
//! and compressible test signals, noise injection, and the coherence /
//! restricted-isometry diagnostics.
//!
//! Every randomized constructor takes an explicit seed and draws from a
//! ChaCha8 stream, so identical seeds reproduce identical problems on any
//! platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::la::{column_normalize, Matrix, Vector};

/// A sampled recovery problem: y = Φ s with s = Ψ C.
///
/// `a` is the column-normalized product ΦΨ that the pursuit algorithms
/// actually search over, and `a_scales` holds the original column norms,
/// so coefficients found against `a` can be mapped back to the scaling of
/// Ψ's columns.
#[derive(Debug, Clone)]
pub struct SparseProblem {
    pub psi: Matrix,
    pub phi: Matrix,
    pub a: Matrix,
    pub a_scales: Vector,
    pub y: Vector,
}

impl SparseProblem {
    /// Assembles a problem from a basis, a measurement matrix, and an
    /// already-measured vector y.
    pub fn new(psi: Matrix, phi: Matrix, y: Vector) -> Result<Self> {
        let n = psi.rows();
        if psi.cols() != n {
            return Err(Error::BadDimension(format!(
                "representation basis must be square, got {}x{}",
                psi.rows(),
                psi.cols()
            )));
        }
        let m = phi.rows();
        if phi.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "measurement matrix is {}x{} but the basis has {} rows",
                m,
                phi.cols(),
                n
            )));
        }
        if m == 0 || m > n {
            return Err(Error::BadDimension(format!(
                "need 1 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        if y.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "measurement vector has length {} but phi has {} rows",
                y.len(),
                m
            )));
        }
        let raw = phi.matmul(&psi)?;
        let (a, a_scales) = column_normalize(&raw)?;
        Ok(Self { psi, phi, a, a_scales, y })
    }

    /// Measures a signal with Φ and assembles the problem around it.
    pub fn from_signal(psi: Matrix, phi: Matrix, s: &Vector) -> Result<Self> {
        let y = measure(&phi, s)?;
        Self::new(psi, phi, y)
    }

    /// Signal-domain dimension N.
    pub fn n(&self) -> usize {
        self.psi.rows()
    }

    /// Measurement-domain dimension M.
    pub fn m(&self) -> usize {
        self.phi.rows()
    }
}

/// A generated test signal: coefficients in the basis, the clean signal
/// Ψ C, and optionally a noisy copy with the SNR it was corrupted at.
#[derive(Debug, Clone)]
pub struct SignalInstance {
    pub coeffs: Vector,
    pub clean: Vector,
    pub noisy: Option<Vector>,
    pub input_snr_db: Option<f64>,
}

impl SignalInstance {
    /// Adds white Gaussian noise at exactly `snr_db` and records the
    /// achieved ratio.
    pub fn with_noise(mut self, snr_db: f64, seed: u64) -> Result<Self> {
        let (noisy, achieved) = add_awgn(&self.clean, snr_db, seed)?;
        self.noisy = Some(noisy);
        self.input_snr_db = Some(achieved);
        Ok(self)
    }

    /// The signal the measurements should be taken from: the noisy copy
    /// if one exists, the clean signal otherwise.
    pub fn measured(&self) -> &Vector {
        self.noisy.as_ref().unwrap_or(&self.clean)
    }
}

/// y = Φ s.
pub fn measure(phi: &Matrix, s: &Vector) -> Result<Vector> {
    phi.matvec(s)
}

/// Real orthonormal Fourier basis of even size n: a DC column, a
/// cosine/sine pair per frequency 1..n/2−1, and the Nyquist column.
pub fn fourier_basis(n: usize) -> Result<Matrix> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::BadDimension(format!(
            "fourier basis needs an even n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let dc = 1.0 / nf.sqrt();
    let amp = (2.0 / nf).sqrt();
    Matrix::from_fn(n, n, |i, j| {
        if j == 0 {
            dc
        } else if j == n - 1 {
            // Nyquist: alternating signs.
            if i % 2 == 0 {
                dc
            } else {
                -dc
            }
        } else {
            // Columns 1, 2 are the frequency-1 pair, 3, 4 the
            // frequency-2 pair, and so on.
            let k = (j + 1) / 2;
            let angle = 2.0 * std::f64::consts::PI * (k as f64) * (i as f64) / nf;
            if j % 2 == 1 {
                amp * angle.cos()
            } else {
                amp * angle.sin()
            }
        }
    })
}

/// Random n×n frame: i.i.d. standard normal entries with every column
/// scaled to unit norm. Generally non-orthogonal.
pub fn random_frame(n: usize, seed: u64) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::BadDimension(format!("random frame needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))?;
    let (frame, _) = column_normalize(&raw)?;
    Ok(frame)
}

/// Random m×n measurement matrix with i.i.d. N(0, 1/m) entries, so that
/// ‖Φx‖₂² ≈ ‖x‖₂² in expectation.
pub fn gaussian_measurement(m: usize, n: usize, seed: u64) -> Result<Matrix> {
    if m == 0 || n == 0 || m > n {
        return Err(Error::BadDimension(format!(
            "need 1 <= m <= n for a measurement matrix, got m = {m}, n = {n}"
        )));
    }
    let sd = 1.0 / (m as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(m, n, |_, _| sd * rng.sample::<f64, _>(StandardNormal))
}

/// Mutual coherence √N · max_{i,j} |⟨ψ_j, φ_i⟩| between the rows of Φ and
/// the columns of Ψ. Both are unit-normalized before evaluation, so for a
/// measurement/basis pair the value lands in [1, √N] (1 = maximally
/// incoherent, √N = a measurement row aligned with a basis column).
pub fn mutual_coherence(phi: &Matrix, psi: &Matrix) -> Result<f64> {
    let n = psi.rows();
    if psi.cols() != n {
        return Err(Error::BadDimension(format!(
            "basis must be square, got {}x{}",
            psi.rows(),
            psi.cols()
        )));
    }
    if phi.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "phi is {}x{} but psi has {} rows",
            phi.rows(),
            phi.cols(),
            n
        )));
    }
    let mut max_abs = 0.0_f64;
    for i in 0..phi.rows() {
        let row = phi.row(i);
        let row_norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if row_norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for j in 0..n {
            let col_norm = psi.col_energy(j).sqrt();
            if col_norm == 0.0 {
                return Err(Error::ZeroColumn(j));
            }
            let dot: f64 = (0..n).map(|t| row[t] * psi.get(t, j)).sum();
            max_abs = max_abs.max((dot / (row_norm * col_norm)).abs());
        }
    }
    Ok((n as f64).sqrt() * max_abs)
}

/// Empirical restricted-isometry diagnostic: the largest observed
/// |‖Φx‖₂²/‖x‖₂² − 1| over random unit-norm k-sparse probes. A small
/// value certifies nothing, but a large one reliably flags a bad Φ. The
/// probe stream is seeded, and for a fixed seed more trials can only
/// raise the estimate.
pub fn rip_estimate(phi: &Matrix, k: usize, trials: usize, seed: u64) -> Result<f64> {
    let n = phi.cols();
    if k == 0 || k > n {
        return Err(Error::BadParameter(format!(
            "sparsity k must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    if trials == 0 {
        return Err(Error::BadParameter("rip estimate needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let support = rand::seq::index::sample(&mut rng, n, k).into_vec();
        let mut x = vec![0.0; n];
        for &j in &support {
            x[j] = rng.sample::<f64, _>(StandardNormal);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // Astronomically unlikely; skip the degenerate probe.
            continue;
        }
        for v in &mut x {
            *v /= norm;
        }
        let y = phi.matvec(&Vector::from_raw(x))?;
        worst = worst.max((y.energy() - 1.0).abs());
    }
    Ok(worst)
}

/// Exactly k-sparse coefficients in Ψ: k uniform-random positions with
/// i.i.d. standard normal values, redrawn while |value| < 0.1 so that no
/// component hides below the recovery tolerance.
pub fn gen_sparse_signal(psi: &Matrix, k: usize, seed: u64) -> Result<SignalInstance> {
    let n = psi.rows();
    if psi.cols() != n {
        return Err(Error::BadDimension("basis must be square".into()));
    }
    if k == 0 || k > n {
        return Err(Error::BadParameter(format!(
            "sparsity k must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = rand::seq::index::sample(&mut rng, n, k).into_vec();
    support.sort_unstable();
    let mut coeffs = vec![0.0; n];
    for &j in &support {
        let mut v: f64 = rng.sample(StandardNormal);
        while v.abs() < 0.1 {
            v = rng.sample(StandardNormal);
        }
        coeffs[j] = v;
    }
    let coeffs = Vector::from_raw(coeffs);
    let clean = psi.matvec(&coeffs)?;
    Ok(SignalInstance { coeffs, clean, noisy: None, input_snr_db: None })
}

/// Compressible coefficients with a power-law energy profile: sorted
/// magnitudes follow exactly P·i^(−r) for i = 1..N, then get random signs
/// and a random permutation. Decay rates r ≤ 1 do not produce a
/// compressible profile and are rejected.
pub fn gen_compressible_signal(psi: &Matrix, p: f64, r: f64, seed: u64) -> Result<SignalInstance> {
    let n = psi.rows();
    if psi.cols() != n {
        return Err(Error::BadDimension("basis must be square".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::BadParameter(format!("power-law scale must be positive, got {p}")));
    }
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::BadParameter(format!(
            "power-law decay must satisfy r > 1, got {r}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(&mut rng);
    let mut coeffs = vec![0.0; n];
    for (rank, &pos) in positions.iter().enumerate() {
        let magnitude = p * ((rank + 1) as f64).powf(-r);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        coeffs[pos] = sign * magnitude;
    }
    let coeffs = Vector::from_raw(coeffs);
    let clean = psi.matvec(&coeffs)?;
    Ok(SignalInstance { coeffs, clean, noisy: None, input_snr_db: None })
}

/// Adds white Gaussian noise rescaled so the realized SNR hits `snr_db`
/// exactly (up to floating point), not just in expectation. Returns the
/// noisy signal and the achieved SNR recomputed from the actual vectors.
pub fn add_awgn(clean: &Vector, snr_db: f64, seed: u64) -> Result<(Vector, f64)> {
    if !snr_db.is_finite() {
        return Err(Error::BadParameter(format!("snr must be finite, got {snr_db}")));
    }
    let signal_energy = clean.energy();
    if signal_energy == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise: Vec<f64> = (0..clean.len())
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let raw_energy: f64 = noise.iter().map(|x| x * x).sum();
    if raw_energy == 0.0 {
        return Err(Error::ZeroVector);
    }
    // Target noise energy: ‖s‖² / 10^(snr/10).
    let target_energy = signal_energy / 10.0_f64.powf(snr_db / 10.0);
    let scale = (target_energy / raw_energy).sqrt();
    for x in &mut noise {
        *x *= scale;
    }
    let noise_energy: f64 = noise.iter().map(|x| x * x).sum();
    let noisy = Vector::from_raw(
        clean
            .iter()
            .zip(noise.iter())
            .map(|(s, w)| s + w)
            .collect(),
    );
    let achieved = 10.0 * (signal_energy / noise_energy).log10();
    Ok((noisy, achieved))
}
