//! Sampling-based estimator of logical error rates: an independent check
//! on the exact engine.
//!
//! Reproducibility contract: every trial draws from its own counter-derived
//! substream of a splittable generator, keyed by (seed, trial index), so
//! results are identical regardless of how trials are partitioned across
//! threads.

use crate::catalog::StabilizerCode;
use crate::decoder::{compute_syndrome, DecodePlan, DecoderTable, Semantics};
use crate::error::Result;
use crate::noise::NoiseModel;
use crate::pauli::{Mask, PauliOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Result of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub failures: u64,
    pub p_l_hat: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl McEstimate {
    fn new(trials: u64, failures: u64, seed: u64) -> McEstimate {
        let p = failures as f64 / trials as f64;
        McEstimate {
            trials,
            failures,
            p_l_hat: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws one error: each qubit independently I/X/Y/Z with the model's
/// per-Pauli rates.
pub fn sample_error(n_qubits: usize, noise: &NoiseModel, rng: &mut impl Rng) -> PauliOperator {
    let (px, py, pz) = (noise.p_x, noise.p_y, noise.p_z);
    let mut x: Mask = 0;
    let mut z: Mask = 0;
    for qubit in 0..n_qubits {
        let r: f64 = rng.gen();
        let bit = 1 << qubit;
        if r < px {
            x |= bit;
        } else if r < px + py {
            x |= bit;
            z |= bit;
        } else if r < px + py + pz {
            z |= bit;
        }
    }
    PauliOperator {
        n_qubits,
        x_mask: x,
        z_mask: z,
    }
}

/// Each of `n_bits` measurement outcomes flips independently with
/// probability q.
pub fn sample_measurement_flips(n_bits: usize, q: f64, rng: &mut impl Rng) -> u64 {
    let mut mask = 0u64;
    if q > 0.0 {
        for bit in 0..n_bits {
            if rng.gen::<f64>() < q {
                mask |= 1 << bit;
            }
        }
    }
    mask
}

/// Estimates the logical error rate by direct simulation: sample an error,
/// read out the (noisy) syndrome, decode, and count a failure whenever the
/// residual `correction * error` is not a stabilizer (or gauge) element —
/// nonzero syndrome or nontrivial logical class.
pub fn estimate_logical_error_rate(
    code: &StabilizerCode,
    table: &DecoderTable,
    noise: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let plan = DecodePlan::new(table, code, noise, Semantics::Strict)?;
    let n = code.n_qubits;
    let ns = code.n_stabilizers();
    let gauge = table.gauge_copies;
    let q = noise.q;

    let chunk = 1u64 << 14;
    let n_chunks = trials.div_ceil(chunk);
    let failures: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(trials);
            let mut fails = 0u64;
            for trial in lo..hi {
                let mut rng = trial_rng(seed, trial);
                let e = sample_error(n, noise, &mut rng);
                let s = compute_syndrome(code, &e).expect("sizes match");
                let observed = if gauge {
                    // Three independently flipped copies per stabilizer,
                    // compressed to the per-stabilizer count of -1 reports.
                    let flips = sample_measurement_flips(3 * ns, q, &mut rng);
                    let mut obs = 0u32;
                    for k in 0..ns {
                        let nflips = ((flips >> (3 * k)) & 0b111).count_ones();
                        let m = if (s >> k) & 1 == 0 { nflips } else { 3 - nflips };
                        obs |= m << (2 * k);
                    }
                    obs
                } else {
                    s ^ sample_measurement_flips(ns, q, &mut rng) as u32
                };
                let correction = plan.correction(observed);
                let t = correction.multiply(&e).expect("sizes match");
                let residual_syndrome = compute_syndrome(code, &t).expect("sizes match");
                let cls = (t.symplectic_product(&code.logical_z).unwrap())
                    | (t.symplectic_product(&code.logical_x).unwrap() << 1);
                if residual_syndrome != 0 || cls != 0 {
                    fails += 1;
                }
            }
            fails
        })
        .sum();

    Ok(McEstimate::new(trials, failures, seed))
}
