use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Shots for a `width`-qubit subcircuit: one per basis state, clamped to
/// `[2^10, 2^20]`.
pub fn default_shots(width: usize) -> u64 {
    let states = 1u64.checked_shl(width as u32).unwrap_or(u64::MAX);
    states.clamp(1 << 10, 1 << 20)
}

/// Empirical distribution of a multinomial draw of `shots` samples.
pub fn sample_shots(dist: &[f64], shots: u64, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(dist, shots, &mut rng)
}

pub(crate) fn sample_with(dist: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if shots == 0 {
        return Err(Error::InvalidDistribution("shots must be >= 1".into()));
    }
    let total: f64 = dist.iter().sum();
    if dist.iter().any(|p| !(*p >= -1e-12)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "entries must be non-negative and sum to 1 (sum={total})"
        )));
    }
    // Sequential conditional binomials.
    let mut counts = vec![0u64; dist.len()];
    let mut remaining = shots;
    let mut mass = 1.0f64;
    for (i, &p) in dist.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if i + 1 == dist.len() || mass <= 0.0 {
            counts[i] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q)
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(counts.into_iter().map(|c| c as f64 / shots as f64).collect())
}
