//! Seeded generators of random test charges.

use crate::stmform::SectorCharge;
use crate::Grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Deterministic generator for a given seed.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Radial profile `Σ c_k exp(−(ln(p/p_k))²/(2 s_k²)) · p^{-1}` with a few random
/// log-Gaussian bumps centred in `[1e-1, 1e1]`; smooth and decaying at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomProfile {
    pub amplitudes: Vec<f64>,
    pub centres: Vec<f64>,
    pub widths: Vec<f64>,
}

impl RandomProfile {
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let terms = rng.gen_range(1..=4);
        let mut amplitudes = Vec::with_capacity(terms);
        let mut centres = Vec::with_capacity(terms);
        let mut widths = Vec::with_capacity(terms);
        for _ in 0..terms {
            amplitudes.push(rng.gen_range(-1.0..1.0));
            centres.push(rng.gen_range(-1.0f64..1.0) * std::f64::consts::LN_10);
            widths.push(rng.gen_range(0.4..1.0));
        }
        Self { amplitudes, centres, widths }
    }

    pub fn eval(&self, p: f64) -> f64 {
        let x = p.ln();
        let s: f64 = self
            .amplitudes
            .iter()
            .zip(&self.centres)
            .zip(&self.widths)
            .map(|((a, c), w)| a * (-(x - c).powi(2) / (2.0 * w * w)).exp())
            .sum();
        s / (p * p)
    }
}

/// `count` random real charges in sector `l`.
pub fn random_charges<R: Rng>(rng: &mut R, l: usize, grid: Arc<Grid>, count: usize) -> Vec<SectorCharge> {
    (0..count)
        .map(|_| {
            let prof = RandomProfile::sample(rng);
            SectorCharge::from_fn(l, grid.clone(), |p| prof.eval(p))
        })
        .collect()
}

/// `count` random real s-wave charges.
pub fn random_swave_charges<R: Rng>(rng: &mut R, grid: Arc<Grid>, count: usize) -> Vec<SectorCharge> {
    random_charges(rng, 0, grid, count)
}
