//! Noise-model constructors and correcting-power metrics.

use crate::error::{QeccError, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Depolarizing,
    Independent,
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseKind::Depolarizing => write!(f, "depolarizing"),
            NoiseKind::Independent => write!(f, "independent"),
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = QeccError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" | "dep" => Ok(NoiseKind::Depolarizing),
            "independent" | "indep" => Ok(NoiseKind::Independent),
            _ => Err(QeccError::InvalidArgument(format!("unknown noise kind `{s}`"))),
        }
    }
}

/// An i.i.d. per-qubit Pauli channel plus a stabilizer measurement error
/// rate `q`.
///
/// Depolarizing: X, Y, Z each with probability `p/3`.
/// Independent: X flip with `p'_x` and Z flip with `p'_z = alpha * p'_x`
/// applied independently, so `p_x = p'_x(1-p'_z)`, `p_z = p'_z(1-p'_x)`,
/// `p_y = p'_x p'_z`, and the total `p = 1 - (1-p'_x)(1-p'_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Total single-qubit error probability.
    pub p: f64,
    pub p_prime_x: f64,
    pub p_prime_z: f64,
    pub alpha: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    /// Probability that a single stabilizer measurement (or reconstructed
    /// stabilizer copy) misreports.
    pub q: f64,
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        Err(QeccError::InvalidNoise(format!("{name} = {v} out of [0,1]")))
    } else {
        Ok(())
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..1.0).contains(&q) {
        Err(QeccError::InvalidNoise(format!("q = {q} out of [0,1)")))
    } else {
        Ok(())
    }
}

pub fn make_depolarizing(p: f64, q: f64) -> Result<NoiseModel> {
    check_prob("p", p)?;
    check_q(q)?;
    Ok(NoiseModel {
        kind: NoiseKind::Depolarizing,
        p,
        p_prime_x: 0.0,
        p_prime_z: 0.0,
        alpha: 0.0,
        p_x: p / 3.0,
        p_y: p / 3.0,
        p_z: p / 3.0,
        q,
    })
}

pub fn make_independent(p_prime_x: f64, alpha: f64, q: f64) -> Result<NoiseModel> {
    check_prob("p'_x", p_prime_x)?;
    check_q(q)?;
    if alpha < 0.0 || alpha.is_nan() {
        return Err(QeccError::InvalidNoise(format!("alpha = {alpha} < 0")));
    }
    let p_prime_z = alpha * p_prime_x;
    check_prob("p'_z", p_prime_z)?;
    Ok(NoiseModel {
        kind: NoiseKind::Independent,
        p: 1.0 - (1.0 - p_prime_x) * (1.0 - p_prime_z),
        p_prime_x,
        p_prime_z,
        alpha,
        p_x: p_prime_x * (1.0 - p_prime_z),
        p_y: p_prime_x * p_prime_z,
        p_z: p_prime_z * (1.0 - p_prime_x),
        q,
    })
}

/// Builds an independent-noise model from the *total* single-qubit rate
/// `p = 1 - (1-p'_x)(1-alpha p'_x)` by solving the quadratic for `p'_x`.
/// This is the parameterization used when sweeping independent noise along
/// the same p axis as depolarizing noise.
pub fn make_independent_total(p: f64, alpha: f64, q: f64) -> Result<NoiseModel> {
    check_prob("p", p)?;
    if alpha < 0.0 || alpha.is_nan() {
        return Err(QeccError::InvalidNoise(format!("alpha = {alpha} < 0")));
    }
    let ppx = if alpha == 0.0 {
        p
    } else {
        // alpha x^2 - (1+alpha) x + p = 0, smaller root.
        let b = 1.0 + alpha;
        let disc = b * b - 4.0 * alpha * p;
        if disc < 0.0 {
            return Err(QeccError::InvalidNoise(format!(
                "total rate p = {p} unreachable for alpha = {alpha}"
            )));
        }
        (b - disc.sqrt()) / (2.0 * alpha)
    };
    make_independent(ppx, alpha, q)
}

impl NoiseModel {
    /// Identity-probability complement of the per-Pauli rates.
    pub fn p_identity(&self) -> f64 {
        1.0 - self.p_x - self.p_y - self.p_z
    }

    /// A model of the same channel shape and q with the total physical rate
    /// inflated by `overhead` (the gate-overhead approximation behind the
    /// modified correcting power).
    pub fn with_rate_overhead(&self, overhead: f64) -> Result<NoiseModel> {
        match self.kind {
            NoiseKind::Depolarizing => make_depolarizing(self.p + overhead, self.q),
            NoiseKind::Independent => make_independent_total(self.p + overhead, self.alpha, self.q),
        }
    }
}

/// Correcting power; `p_L = 0` is reported as `Unbounded` rather than a
/// division-by-zero artifact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrectingPower {
    Finite(f64),
    Unbounded,
}

impl CorrectingPower {
    pub fn finite(&self) -> Option<f64> {
        match self {
            CorrectingPower::Finite(v) => Some(*v),
            CorrectingPower::Unbounded => None,
        }
    }
}

impl fmt::Display for CorrectingPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrectingPower::Finite(v) => write!(f, "{v}"),
            CorrectingPower::Unbounded => write!(f, "inf"),
        }
    }
}

/// Probability that an unencoded qubit suffers any error: `p` when `q = 0`,
/// `1 - (1-p)(1-q)` when measurement errors participate.
pub fn raw_failure_rate(noise: &NoiseModel) -> f64 {
    if noise.q == 0.0 {
        noise.p
    } else {
        1.0 - (1.0 - noise.p) * (1.0 - noise.q)
    }
}

/// C = p / p_L (perfect measurement) or (1 - (1-p)(1-q)) / p_L.
pub fn correcting_power(p_l: f64, noise: &NoiseModel) -> CorrectingPower {
    if p_l <= 0.0 {
        CorrectingPower::Unbounded
    } else {
        CorrectingPower::Finite(raw_failure_rate(noise) / p_l)
    }
}

/// One evaluated operating point.
#[derive(Debug, Clone, Copy)]
pub struct EvaluationResult {
    pub p_d: f64,
    pub p_l: f64,
    pub correcting_power: CorrectingPower,
    pub modified_correcting_power: Option<CorrectingPower>,
    /// Set when the table was truncated, so P_d is a certified lower bound.
    pub lower_bound: bool,
}

/// Default gate overhead for the modified correcting power (aggregate
/// per-memory-cycle gate error of roughly 0.3%).
pub const DEFAULT_GATE_OVERHEAD: f64 = 0.003;
