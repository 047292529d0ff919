//! Exact optimal decoding of small stabilizer codes.
//!
//! The crate computes the exact maximum-likelihood decoding success
//! probability of small surface, color, gauge color and repetition codes
//! under depolarizing, independent/asymmetric, and measurement noise, by
//! enumerating every Pauli error configuration once and caching the counts
//! in per-(syndrome, logical class) weight-profile tensors. On top of that
//! sit correcting-power metrics, parameter sweeps, region scans, a plain
//! text persistence format, and a Monte Carlo cross-validation oracle.
//!
//! Quick start:
//!
//! ```
//! use qecc_core::*;
//!
//! let code = get_code("S9").unwrap();
//! assert!(validate_code(&code).is_ok());
//! let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
//! let noise = make_depolarizing(0.05, 0.0).unwrap();
//! let p_d = success_probability_perfect(&table, &noise);
//! let c = correcting_power(1.0 - p_d, &noise);
//! assert!(c.finite().unwrap() > 1.0);
//! ```

pub mod catalog;
pub mod decoder;
pub mod error;
pub mod mc;
pub mod noise;
pub mod pauli;
pub mod scan;
pub mod tableio;

pub use catalog::{
    code_distance, get_code, gf2_rank, reconstruct_stabilizers_from_gauges, serialize_catalog,
    validate_code, Catalog, GaugeStructure, StabilizerCode, ValidationReport,
};
pub use decoder::{
    build_decoder_table, class_masses, classify_logical, compute_syndrome, decode_lookup,
    error_config_probability, success_probability_noisy, success_probability_perfect,
    weight_one_correctability, BuildConfig, CoefficientTensor, DecodePlan, DecoderTable,
    LogicalClass, Semantics, Syndrome,
};
pub use error::{QeccError, Result};
pub use mc::{
    estimate_logical_error_rate, sample_error, sample_measurement_flips, McEstimate,
};
pub use noise::{
    correcting_power, make_depolarizing, make_independent, make_independent_total,
    raw_failure_rate, CorrectingPower, EvaluationResult, NoiseKind, NoiseModel,
    DEFAULT_GATE_OVERHEAD,
};
pub use pauli::{
    binomial, enumerate_errors, enumeration_count, Mask, PauliOperator, WeightProfile,
};
pub use scan::{
    compare_codes, contour_lines, evaluate_point, find_crossover, modified_correcting_power,
    noise_at, scan_region, sweep_physical_rate, CompareResult, CsvRow, GridSpec, QSpec,
    RegionResult, SweepSpec, CSV_HEADER,
};
pub use tableio::{load_table, load_table_for, save_table};
