//! Reconstruction quality measures.
//!
//! Two dB ratios with different reference points: `srer` scores the fit
//! against whatever the algorithm was given (noisy or not), `snr_out`
//! scores against the clean signal from before noise was added and so
//! measures denoising. Both are capped so an exact reconstruction stays
//! finite in reports.

use cs_recovery::entropy::{information_power, rep_entropy};
use cs_recovery::la::Vector;
use cs_recovery::{Error, Result};

/// Ceiling for the dB ratios; reached when the error energy is
/// numerically zero (below 1e-30 of the reference energy).
pub const DB_CAP: f64 = 300.0;

fn ratio_db(reference: &Vector, estimate: &Vector) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::DimensionMismatch(format!(
            "reference has {} entries, estimate {}",
            reference.len(),
            estimate.len()
        )));
    }
    let sig = reference.energy();
    if sig <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let err: f64 = reference
        .iter()
        .zip(estimate.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if err < 1e-30 * sig {
        return Ok(DB_CAP);
    }
    Ok((10.0 * (sig / err).log10()).min(DB_CAP))
}

/// Signal-to-reconstruction-error ratio in dB against the algorithm's
/// input signal.
pub fn srer(s: &Vector, shat: &Vector) -> Result<f64> {
    ratio_db(s, shat)
}

/// Output SNR in dB against the clean signal. A reconstruction that just
/// reproduces the noisy input scores the input SNR; anything above that
/// is genuine noise rejection.
pub fn snr_out(s_clean: &Vector, shat_from_noisy: &Vector) -> Result<f64> {
    ratio_db(s_clean, shat_from_noisy)
}

/// Whether the recovered coefficients match the generating ones to
/// 1e-4 relative l2 error — tight enough to imply the correct support,
/// loose enough to absorb accumulated floating-point error.
pub fn recovery_flag(c_true: &Vector, chat: &Vector) -> Result<bool> {
    if c_true.len() != chat.len() {
        return Err(Error::DimensionMismatch(format!(
            "true coefficients have {} entries, estimate {}",
            c_true.len(),
            chat.len()
        )));
    }
    let ref_norm = c_true.norm_l2();
    if ref_norm <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let err: f64 = c_true
        .iter()
        .zip(chat.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(err.sqrt() <= 1e-4 * ref_norm)
}

/// Information power of the normalized reconstruction, in base 2: the
/// variance of a Gaussian source with the same representation entropy.
/// Lower values mean the reconstruction concentrates its energy on fewer
/// samples.
pub fn reconstruction_ip(shat: &Vector) -> Result<f64> {
    Ok(information_power(&rep_entropy(shat, 2.0)?))
}
