//! Representation entropy of signal energy profiles.
//!
//! A vector x is read as a distribution of energy over its coordinates:
//! p_i = x_i². `rep_entropy` normalizes so Σ p_i = 1 and returns the
//! Shannon entropy of that profile; a signal concentrated on few
//! coordinates scores low, a spread-out one scores high. The conditional
//! objective used inside the entropy-minimizing pursuit works on vectors
//! that already live in the unit-normalized measurement domain, so its
//! terms are evaluated on the squared entries directly (sub-probability
//! masses) without renormalizing each candidate.

use crate::error::{Error, Result};
use crate::la::Vector;

/// Residuals and coefficient vectors below this norm are treated as
/// carrying no information at all.
pub const ENTROPY_NORM_FLOOR: f64 = 1e-12;

/// An entropy value together with the logarithm base it was taken in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    pub base: f64,
}

fn check_base(base: f64) -> Result<()> {
    if !(base > 1.0) || !base.is_finite() {
        return Err(Error::BadParameter(format!(
            "log base must be a finite value > 1, got {base}"
        )));
    }
    Ok(())
}

/// Σ x_i² log_base(1/x_i²) over the entries as they are, with
/// 0·log(1/0) = 0. No normalization is applied: callers are expected to
/// pass vectors whose total energy is meaningful on its own (typically a
/// residual of a unit-norm measurement). Entries with x² > 1 contribute
/// negatively, as the plug-in formula dictates.
pub fn energy_entropy(xs: &[f64], base: f64) -> f64 {
    let nats: f64 = xs
        .iter()
        .map(|&x| {
            let p = x * x;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum();
    nats / base.ln()
}

/// Representation entropy H(X) = Σ p_i log_base(1/p_i) with
/// p_i = x_i² / ‖x‖₂². The vector is normalized internally, so the value
/// is invariant to scaling and lies in [0, log_base(len)].
pub fn rep_entropy(x: &Vector, base: f64) -> Result<EntropyValue> {
    check_base(base)?;
    let energy = x.energy();
    if energy == 0.0 {
        return Err(Error::ZeroVector);
    }
    let nats: f64 = x
        .iter()
        .map(|&xi| {
            let p = xi * xi / energy;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum();
    // Guard the tiny negative values floating point can leave behind for
    // one-hot profiles.
    let value = (nats / base.ln()).max(0.0);
    Ok(EntropyValue { value, base })
}

/// Weighted conditional entropy w1·H(e) + w2·H(ĉ) of a candidate update:
/// `e` is the trial residual and `chat_aug` the trial coefficient vector,
/// both in the unit-normalized measurement domain. Either term collapses
/// to zero when its vector is numerically zero (norm ≤ 1e-12).
pub fn weighted_conditional_entropy(
    e: &Vector,
    chat_aug: &Vector,
    w1: f64,
    w2: f64,
    base: f64,
) -> Result<f64> {
    check_base(base)?;
    if w1 < 0.0 || w2 < 0.0 {
        return Err(Error::NegativeWeight);
    }
    Ok(weighted_score(e.as_slice(), chat_aug.as_slice(), w1, w2, base))
}

/// Slice-level form of `weighted_conditional_entropy` with the argument
/// checks already done; the candidate scan calls this in its inner loop.
pub(crate) fn weighted_score(e: &[f64], chat_aug: &[f64], w1: f64, w2: f64, base: f64) -> f64 {
    let he = if e.iter().map(|x| x * x).sum::<f64>().sqrt() <= ENTROPY_NORM_FLOOR {
        0.0
    } else {
        energy_entropy(e, base)
    };
    let hc = if chat_aug.iter().map(|x| x * x).sum::<f64>().sqrt() <= ENTROPY_NORM_FLOOR {
        0.0
    } else {
        energy_entropy(chat_aug, base)
    };
    w1 * he + w2 * hc
}

/// Information power of a source with representation entropy `h`: the
/// variance of the Gaussian that would have the same entropy,
/// σ² = 2^(2·H·log₂ base) / (2πe). For H = 0 this is 1/(2πe) ≈ 0.0585.
pub fn information_power(h: &EntropyValue) -> f64 {
    let bits = h.value * h.base.log2();
    (2.0_f64).powf(2.0 * bits) / (2.0 * std::f64::consts::PI * std::f64::consts::E)
}

/// Ratio of consecutive conditional entropies H_m / H_{m−1}. The previous
/// value must be meaningfully positive; once it has collapsed to zero the
/// ratio carries no information and the caller should stop iterating.
pub fn delta_h(h_curr: f64, h_prev: f64) -> Result<f64> {
    if h_prev <= ENTROPY_NORM_FLOOR {
        return Err(Error::DegenerateHistory);
    }
    Ok(h_curr / h_prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn one_hot_has_zero_entropy() {
        let h = rep_entropy(&v(&[0.0, -3.5, 0.0]), 2.0).unwrap();
        assert_eq!(h.value, 0.0);
    }

    #[test]
    fn uniform_profile_hits_log_n() {
        let x = v(&[0.5; 16]);
        let h = rep_entropy(&x, std::f64::consts::E).unwrap();
        assert!((h.value - (16.0_f64).ln()).abs() < 1e-12);
        let h2 = rep_entropy(&x, 2.0).unwrap();
        assert!((h2.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn two_way_split_is_one_bit() {
        let x = v(&[0.5_f64.sqrt(), -(0.5_f64.sqrt())]);
        let h = rep_entropy(&x, 2.0).unwrap();
        assert!((h.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_scale_invariant() {
        let x = v(&[0.3, -1.2, 0.05, 2.0]);
        let a = rep_entropy(&x, 2.0).unwrap().value;
        let b = rep_entropy(&x.scaled(-37.5), 2.0).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_is_an_error() {
        assert_eq!(rep_entropy(&Vector::zeros(3), 2.0).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn bad_base_is_an_error() {
        assert!(rep_entropy(&v(&[1.0]), 1.0).is_err());
        assert!(rep_entropy(&v(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn weighted_sum_of_uniform_profiles() {
        // Unit-norm uniform residual over 4 entries and unit-norm uniform
        // coefficients over 2 entries: 0.5·ln4 + 0.5·ln2.
        let e = v(&[0.5; 4]);
        let c = v(&[0.5_f64.sqrt(), 0.5_f64.sqrt(), 0.0]);
        let got = weighted_conditional_entropy(&e, &c, 0.5, 0.5, std::f64::consts::E).unwrap();
        let want = 0.5 * (4.0_f64).ln() + 0.5 * (2.0_f64).ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn weighted_terms_collapse_for_tiny_vectors() {
        let e = v(&[1e-13, 0.0]);
        let c = v(&[1.0, 0.0]);
        let got = weighted_conditional_entropy(&e, &c, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(got, 0.0);
        // With w2 = 0 only the residual term matters.
        let e2 = v(&[0.5; 4]);
        let got2 = weighted_conditional_entropy(&e2, &c, 1.0, 0.0, 2.0).unwrap();
        assert!((got2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_weights_are_rejected() {
        let x = v(&[1.0]);
        assert_eq!(
            weighted_conditional_entropy(&x, &x, -0.1, 0.5, 2.0).unwrap_err(),
            Error::NegativeWeight
        );
    }

    #[test]
    fn information_power_of_zero_entropy() {
        let ip = information_power(&EntropyValue { value: 0.0, base: 2.0 });
        assert!((ip - 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).abs() < 1e-15);
    }

    #[test]
    fn information_power_gaussian_roundtrip() {
        // A Gaussian with variance 4 has entropy log_b sqrt(2πe·4);
        // information power must map that back to 4.
        let var = 4.0_f64;
        for base in [2.0, std::f64::consts::E, 10.0] {
            let h = (2.0 * std::f64::consts::PI * std::f64::consts::E * var).sqrt().ln() / base.ln();
            let ip = information_power(&EntropyValue { value: h, base });
            assert!((ip - var).abs() < 1e-12, "base {base}: {ip}");
        }
    }

    #[test]
    fn information_power_of_uniform_forty() {
        // Fully spread energy over 40 samples, base 2.
        let x = v(&[1.0; 40]);
        let h = rep_entropy(&x, 2.0).unwrap();
        let ip = information_power(&h);
        assert!((ip - 1600.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).abs() < 1e-9);
        assert!((ip - 93.7).abs() < 0.1);
    }

    #[test]
    fn delta_h_ratio_and_degenerate_history() {
        assert!((delta_h(1.2, 0.6).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(delta_h(1.0, 0.0).unwrap_err(), Error::DegenerateHistory);
        assert_eq!(delta_h(1.0, 1e-13).unwrap_err(), Error::DegenerateHistory);
    }

    #[test]
    fn energy_entropy_handles_zeros_and_large_entries() {
        assert_eq!(energy_entropy(&[], 2.0), 0.0);
        assert_eq!(energy_entropy(&[0.0, 0.0], 2.0), 0.0);
        // An entry with squared magnitude above one contributes negatively.
        assert!(energy_entropy(&[2.0], 2.0) < 0.0);
        // Unit-norm input agrees with the normalized entropy.
        let x = v(&[0.6, 0.8]);
        let raw = energy_entropy(x.as_slice(), 2.0);
        let normed = rep_entropy(&x, 2.0).unwrap().value;
        assert!((raw - normed).abs() < 1e-12);
    }
}
