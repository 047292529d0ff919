//! The precomputed exact maximum-likelihood decoder.
//!
//! All error configurations are partitioned by (syndrome, logical class)
//! and counted by weight profile (n_x, n_y, n_z). The resulting coefficient
//! tensors evaluate the exact decoding success probability at any noise
//! strength without re-enumerating errors.

use crate::catalog::StabilizerCode;
use crate::error::{QeccError, Result};
use crate::noise::NoiseModel;
use crate::pauli::{enumerate_errors, enumeration_count, Mask, PauliOperator, WeightProfile};
use rayon::prelude::*;
use std::fmt;

/// Syndrome bits: bit k = 1 iff stabilizer generator k measured -1.
pub type Syndrome = u32;

/// Coset label of the residual operator after the reference correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalClass {
    I = 0,
    X = 1,
    Z = 2,
    Y = 3,
}

impl LogicalClass {
    pub fn from_index(i: u8) -> LogicalClass {
        match i & 3 {
            0 => LogicalClass::I,
            1 => LogicalClass::X,
            2 => LogicalClass::Z,
            _ => LogicalClass::Y,
        }
    }
    pub fn index(self) -> usize {
        self as usize
    }
    pub const ALL: [LogicalClass; 4] =
        [LogicalClass::I, LogicalClass::X, LogicalClass::Z, LogicalClass::Y];
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LogicalClass::I => 'I',
            LogicalClass::X => 'X',
            LogicalClass::Z => 'Z',
            LogicalClass::Y => 'Y',
        };
        write!(f, "{c}")
    }
}

impl std::str::FromStr for LogicalClass {
    type Err = QeccError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(LogicalClass::I),
            "X" => Ok(LogicalClass::X),
            "Z" => Ok(LogicalClass::Z),
            "Y" => Ok(LogicalClass::Y),
            _ => Err(QeccError::InvalidArgument(format!("bad logical class `{s}`"))),
        }
    }
}

/// Sparse weight-profile histogram for one (syndrome, class) subset:
/// (n_x, n_y, n_z) -> number of error configurations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoefficientTensor {
    /// Sorted by key.
    pub entries: Vec<((u8, u8, u8), u64)>,
}

impl CoefficientTensor {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, c)| *c).sum()
    }
}

/// Build parameters for a decoder table.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildConfig {
    /// Truncation weight; `None` builds the exact table (n_max = N_Q).
    pub n_max: Option<usize>,
    /// Number of disjoint enumeration partitions; 0 picks the rayon pool size.
    pub parallel_partitions: usize,
}

impl BuildConfig {
    pub fn exact() -> Self {
        Self::default()
    }
    pub fn truncated(n_max: usize) -> Self {
        BuildConfig {
            n_max: Some(n_max),
            parallel_partitions: 0,
        }
    }
}

/// The precomputed decoder: reference corrections plus per-(syndrome, class)
/// coefficient tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderTable {
    pub code_name: String,
    pub code_hash: u64,
    pub n_qubits: usize,
    pub n_stabs: usize,
    pub n_max: usize,
    /// True when the code reads each stabilizer through three redundant
    /// gauge-pair copies (subsystem codes).
    pub gauge_copies: bool,
    /// Reference correction per syndrome: the first error in canonical
    /// enumeration order; `None` for syndromes unreachable at this n_max.
    pub cstar: Vec<Option<PauliOperator>>,
    /// Indexed `syndrome * 4 + class`.
    pub tensors: Vec<CoefficientTensor>,
}

impl DecoderTable {
    pub fn exact(&self) -> bool {
        self.n_max == self.n_qubits
    }
    pub fn n_syndromes(&self) -> usize {
        1 << self.n_stabs
    }
    pub fn tensor(&self, s: Syndrome, l: LogicalClass) -> &CoefficientTensor {
        &self.tensors[(s as usize) * 4 + l.index()]
    }
    /// Total number of enumerated configurations in the table.
    pub fn total_count(&self) -> u64 {
        self.tensors.iter().map(|t| t.total()).sum()
    }
}

/// Syndrome of an error: bit k = symplectic product with generator k.
pub fn compute_syndrome(code: &StabilizerCode, e: &PauliOperator) -> Result<Syndrome> {
    let mut s = 0u32;
    for (k, g) in code.stabilizer_generators.iter().enumerate() {
        s |= (g.symplectic_product(e)? as u32) << k;
    }
    Ok(s)
}

/// Raw two-bit class of an operator that commutes with the stabilizers:
/// bit 0 = sp(·, logical_z), bit 1 = sp(·, logical_x).
fn raw_class(code: &StabilizerCode, e: &PauliOperator) -> u8 {
    let cx = e.symplectic_product(&code.logical_z).unwrap();
    let cz = e.symplectic_product(&code.logical_x).unwrap();
    cx | (cz << 1)
}

/// Class of `e` relative to a reference correction with the same syndrome:
/// the coset label of T = reference · e.
pub fn classify_logical(
    code: &StabilizerCode,
    e: &PauliOperator,
    reference: &PauliOperator,
) -> Result<LogicalClass> {
    if compute_syndrome(code, e)? != compute_syndrome(code, reference)? {
        return Err(QeccError::SyndromeMismatch);
    }
    let t = reference.multiply(e)?;
    Ok(LogicalClass::from_index(raw_class(code, &t)))
}

/// Per-qubit-part lookup tables: for each x (or z) mask value, the packed
/// `(partial syndrome << 2) | partial class bits` it contributes.
struct SyndromeLuts {
    ax: Vec<u32>,
    az: Vec<u32>,
}

fn build_luts(code: &StabilizerCode) -> SyndromeLuts {
    let n = code.n_qubits;
    let size = 1usize << n;
    let parity = |m: Mask| m.count_ones() & 1;
    let mut ax = vec![0u32; size];
    let mut az = vec![0u32; size];
    for v in 0..size {
        let vm = v as Mask;
        let (mut sx, mut sz) = (0u32, 0u32);
        for (k, g) in code.stabilizer_generators.iter().enumerate() {
            sx |= parity(vm & g.z_mask) << k;
            sz |= parity(vm & g.x_mask) << k;
        }
        let cx = parity(vm & code.logical_z.z_mask) | (parity(vm & code.logical_x.z_mask) << 1);
        let cz = parity(vm & code.logical_z.x_mask) | (parity(vm & code.logical_x.x_mask) << 1);
        ax[v] = (sx << 2) | cx;
        az[v] = (sz << 2) | cz;
    }
    SyndromeLuts { ax, az }
}

const PROFILE_BITS: usize = 4; // each of n_x, n_y, n_z fits in 4 bits for n <= 15
const PROFILE_SHIFT: usize = 3 * PROFILE_BITS;

/// Builds the decoder table by enumerating every error with support size
/// at most `n_max` (exactly once) and counting it into its (syndrome,
/// class, weight-profile) slot. The reference correction for each syndrome
/// is the first error reaching it in canonical order.
pub fn build_decoder_table(code: &StabilizerCode, cfg: &BuildConfig) -> Result<DecoderTable> {
    let n = code.n_qubits;
    let ns = code.n_stabilizers();
    if ns > 12 {
        return Err(QeccError::Capacity(format!(
            "{ns} stabilizers: dense (syndrome, class) table would need 2^{} slots",
            ns + 2
        )));
    }
    let n_max = cfg.n_max.unwrap_or(n);
    if n_max > n {
        return Err(QeccError::InvalidArgument(format!(
            "n_max = {n_max} exceeds n_qubits = {n}"
        )));
    }
    let exact = n_max == n;
    if n > 15 {
        return Err(QeccError::Capacity(format!(
            "{n} qubits: enumeration of 4^{n} configurations exceeds the build budget"
        )));
    }

    let luts = build_luts(code);
    let counts_len = 1usize << (ns + 2 + PROFILE_SHIFT);

    // Pass 1: reference corrections C*(s), scanning in canonical order and
    // stopping once every reachable syndrome has one.
    let n_synd = 1usize << ns;
    let mut cstar: Vec<Option<PauliOperator>> = vec![None; n_synd];
    let mut rawref = vec![0u8; n_synd];
    let mut found = 0usize;
    for e in enumerate_errors(n, n_max) {
        let c = luts.ax[e.x_mask as usize] ^ luts.az[e.z_mask as usize];
        let s = (c >> 2) as usize;
        if cstar[s].is_none() {
            cstar[s] = Some(e);
            rawref[s] = (c & 3) as u8;
            found += 1;
            if found == n_synd {
                break;
            }
        }
    }

    let refadj: Vec<u32> = rawref.iter().map(|&r| r as u32).collect();

    // Pass 2: dense accumulation over disjoint partitions, merged by
    // element-wise addition (associative, order-independent).
    let counts = if exact {
        accumulate_exact(n, &luts, &refadj, counts_len, cfg.parallel_partitions)
    } else {
        accumulate_truncated(n, n_max, &luts, &refadj, counts_len)
    };

    let expected = enumeration_count(n, n_max);
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    if total != expected {
        return Err(QeccError::Capacity(format!(
            "enumeration accounted for {total} of {expected} configurations"
        )));
    }

    // Compress the dense accumulator into sorted sparse tensors.
    let mut tensors = vec![CoefficientTensor::default(); n_synd * 4];
    for (slot, tensor) in tensors.iter_mut().enumerate() {
        let base = slot << PROFILE_SHIFT;
        for key in 0..(1usize << PROFILE_SHIFT) {
            let c = counts[base | key];
            if c != 0 {
                let nx = (key >> (2 * PROFILE_BITS)) as u8;
                let ny = ((key >> PROFILE_BITS) & 0xf) as u8;
                let nz = (key & 0xf) as u8;
                tensor.entries.push(((nx, ny, nz), c as u64));
            }
        }
    }

    Ok(DecoderTable {
        code_name: code.name.clone(),
        code_hash: code.content_hash(),
        n_qubits: n,
        n_stabs: ns,
        n_max,
        gauge_copies: code.gauge.is_some(),
        cstar,
        tensors,
    })
}

fn accumulate_range(
    luts: &SyndromeLuts,
    refadj: &[u32],
    counts: &mut [u32],
    xs: std::ops::Range<usize>,
) {
    let az = &luts.az;
    for x in xs {
        let axv = luts.ax[x];
        let pcx = (x as u32).count_ones() as usize;
        for (z, &azv) in az.iter().enumerate() {
            let c = axv ^ azv;
            let s = (c >> 2) as usize;
            let ny = (x as u32 & z as u32).count_ones() as usize;
            let pcz = (z as u32).count_ones() as usize;
            let idx = (((c ^ refadj[s]) as usize) << PROFILE_SHIFT)
                | ((pcx - ny) << (2 * PROFILE_BITS))
                | (ny << PROFILE_BITS)
                | (pcz - ny);
            counts[idx] += 1;
        }
    }
}

fn accumulate_exact(
    n: usize,
    luts: &SyndromeLuts,
    refadj: &[u32],
    counts_len: usize,
    partitions: usize,
) -> Vec<u32> {
    let size = 1usize << n;
    // Cap partitions so the transient per-partition accumulators stay well
    // under the memory budget.
    let budget = 1_600_000_000usize / (4 * counts_len);
    let parts = if partitions == 0 {
        rayon::current_num_threads()
    } else {
        partitions
    }
    .clamp(1, budget.max(1))
    .min(size);

    let chunk = size.div_ceil(parts);
    (0..parts)
        .into_par_iter()
        .map(|i| {
            let lo = i * chunk;
            let hi = ((i + 1) * chunk).min(size);
            let mut counts = vec![0u32; counts_len];
            accumulate_range(luts, refadj, &mut counts, lo..hi);
            counts
        })
        .reduce_with(|mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        })
        .unwrap_or_else(|| vec![0u32; counts_len])
}

fn accumulate_truncated(
    n: usize,
    n_max: usize,
    luts: &SyndromeLuts,
    refadj: &[u32],
    counts_len: usize,
) -> Vec<u32> {
    let mut counts = vec![0u32; counts_len];
    for e in enumerate_errors(n, n_max) {
        let c = luts.ax[e.x_mask as usize] ^ luts.az[e.z_mask as usize];
        let s = (c >> 2) as usize;
        let wp = e.weight_profile();
        let idx = (((c ^ refadj[s]) as usize) << PROFILE_SHIFT)
            | ((wp.n_x as usize) << (2 * PROFILE_BITS))
            | ((wp.n_y as usize) << PROFILE_BITS)
            | (wp.n_z as usize);
        counts[idx] += 1;
    }
    counts
}

/// p(E) for a given weight profile:
/// `(1 - p_x - p_y - p_z)^(N_Q - n) * p_x^n_x * p_y^n_y * p_z^n_z`.
pub fn error_config_probability(
    profile: &WeightProfile,
    noise: &NoiseModel,
    n_qubits: usize,
) -> f64 {
    let rest = n_qubits as i32 - profile.total() as i32;
    noise.p_identity().powi(rest)
        * noise.p_x.powi(profile.n_x as i32)
        * noise.p_y.powi(profile.n_y as i32)
        * noise.p_z.powi(profile.n_z as i32)
}

/// Class masses under a noise model: `masses[s*4 + l]` is the total
/// probability of the error subset E_{s,l}.
pub fn class_masses(table: &DecoderTable, noise: &NoiseModel) -> Vec<f64> {
    let n = table.n_qubits;
    let mut p0p = vec![1.0f64; n + 1];
    let mut pxp = vec![1.0f64; n + 1];
    let mut pyp = vec![1.0f64; n + 1];
    let mut pzp = vec![1.0f64; n + 1];
    let p0 = noise.p_identity();
    for i in 1..=n {
        p0p[i] = p0p[i - 1] * p0;
        pxp[i] = pxp[i - 1] * noise.p_x;
        pyp[i] = pyp[i - 1] * noise.p_y;
        pzp[i] = pzp[i - 1] * noise.p_z;
    }
    table
        .tensors
        .iter()
        .map(|t| {
            let mut acc = KahanSum::default();
            for &((nx, ny, nz), count) in &t.entries {
                let w = (nx + ny + nz) as usize;
                acc.add(
                    count as f64
                        * p0p[n - w]
                        * pxp[nx as usize]
                        * pyp[ny as usize]
                        * pzp[nz as usize],
                );
            }
            acc.value()
        })
        .collect()
}

/// Compensated accumulator used for probability sums.
#[derive(Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Argmax over the four classes with the fixed tie-break order I, X, Z, Y.
fn argmax_class(vals: &[f64]) -> u8 {
    let mut best = 0u8;
    for l in 1..4 {
        if vals[l] > vals[best as usize] {
            best = l as u8;
        }
    }
    best
}

/// Exact decoding success probability with perfect syndrome measurement:
/// for each syndrome, the best class mass; summed over syndromes.
/// Truncated tables yield a certified lower bound.
pub fn success_probability_perfect(table: &DecoderTable, noise: &NoiseModel) -> f64 {
    let masses = class_masses(table, noise);
    let mut acc = KahanSum::default();
    for s in 0..table.n_syndromes() {
        let m = &masses[s * 4..s * 4 + 4];
        acc.add(m[argmax_class(m) as usize]);
    }
    acc.value()
}

/// Success semantics under measurement noise.
///
/// `Strict` (default): decoding succeeds iff the applied correction returns
/// the state to the code space with no logical flip, i.e. the residual lies
/// in the stabilizer (or gauge) group. Measurement errors that mislead the
/// decoder about the syndrome count as failures.
///
/// `ClassOnly`: decoding succeeds iff the chosen logical class matches the
/// true one, marginalized over the true syndrome; an uncorrected syndrome
/// is not itself a failure. This is the weaker bookkeeping in which
/// measurement errors alone never cause logical failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    #[default]
    Strict,
    ClassOnly,
}

impl std::str::FromStr for Semantics {
    type Err = QeccError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Semantics::Strict),
            "class-only" | "classonly" => Ok(Semantics::ClassOnly),
            _ => Err(QeccError::InvalidArgument(format!("unknown semantics `{s}`"))),
        }
    }
}

/// Binomially weighted flip likelihoods for one reconstructed-copy count:
/// `f[m][b]` = P(observe m of 3 copies as -1 | true bit b).
fn copy_likelihoods(q: f64) -> [[f64; 2]; 4] {
    let r = 1.0 - q;
    let mut f = [[0.0; 2]; 4];
    for (m, fm) in f.iter_mut().enumerate() {
        let binom = [1.0, 3.0, 3.0, 1.0][m];
        fm[0] = binom * q.powi(m as i32) * r.powi(3 - m as i32);
        fm[1] = binom * q.powi(3 - m as i32) * r.powi(m as i32);
    }
    f
}

/// Exact decoding success probability with measurement errors at rate q.
///
/// Ordinary codes observe the (possibly flipped) syndrome directly; the
/// decoder maximizes the q-weighted class mass
/// `sum_s q^|s-s'| (1-q)^(N_S-|s-s'|) mass(s, l)` over l for each observed
/// s'. Subsystem codes observe the per-stabilizer copy counts m_k of three
/// independently flipped reconstructed copies and maximize over the joint
/// (syndrome interpretation, class).
pub fn success_probability_noisy(
    table: &DecoderTable,
    noise: &NoiseModel,
    semantics: Semantics,
) -> f64 {
    let q = noise.q;
    if q == 0.0 {
        return success_probability_perfect(table, noise);
    }
    let masses = class_masses(table, noise);
    if table.gauge_copies {
        noisy_gauge(table, &masses, q, semantics)
    } else {
        noisy_plain(table, &masses, q, semantics)
    }
}

/// Hadamard-style in-place transform: replaces the per-syndrome class
/// masses by their q-weighted mixtures over all true syndromes.
fn flip_weighted(masses: &[f64], n_stabs: usize, q: f64) -> Vec<f64> {
    let mut g = masses.to_vec();
    let r = 1.0 - q;
    for k in 0..n_stabs {
        let bit = 1usize << k;
        for s in 0..(1usize << n_stabs) {
            if s & bit != 0 {
                continue;
            }
            for l in 0..4 {
                let i0 = s * 4 + l;
                let i1 = (s | bit) * 4 + l;
                let (a, b) = (g[i0], g[i1]);
                g[i0] = r * a + q * b;
                g[i1] = q * a + r * b;
            }
        }
    }
    g
}

fn noisy_plain(table: &DecoderTable, masses: &[f64], q: f64, semantics: Semantics) -> f64 {
    let ns = table.n_stabs;
    let g = flip_weighted(masses, ns, q);
    let mut acc = KahanSum::default();
    match semantics {
        Semantics::ClassOnly => {
            for s in 0..(1usize << ns) {
                let m = &g[s * 4..s * 4 + 4];
                acc.add(m[argmax_class(m) as usize]);
            }
            acc.value()
        }
        Semantics::Strict => {
            // Success requires the observed syndrome to be the true one
            // (else the correction leaves a nonzero residual syndrome) and
            // the decoder's class pick for it to be correct.
            for s in 0..(1usize << ns) {
                let l = argmax_class(&g[s * 4..s * 4 + 4]);
                acc.add(masses[s * 4 + l as usize]);
            }
            acc.value() * (1.0 - q).powi(ns as i32)
        }
    }
}

fn noisy_gauge(table: &DecoderTable, masses: &[f64], q: f64, semantics: Semantics) -> f64 {
    let ns = table.n_stabs;
    let f = copy_likelihoods(q);
    match semantics {
        Semantics::ClassOnly => {
            // Linear transform of each syndrome bit (2 values) into the
            // observed copy count (4 values), keeping the class dimension.
            // Layout: [observed prefix (4^k)][true-syndrome suffix][class].
            let mut arr = masses.to_vec();
            let mut prefix = 1usize;
            let mut suffix = 1usize << ns;
            for _ in 0..ns {
                suffix >>= 1;
                let mut next = vec![0.0f64; prefix * 4 * suffix * 4];
                for m in 0..4usize {
                    for pfx in 0..prefix {
                        for sfx in 0..suffix {
                            for l in 0..4usize {
                                let o0 = ((pfx * (suffix << 1)) + (sfx << 1)) * 4 + l;
                                let o1 = ((pfx * (suffix << 1)) + (sfx << 1) + 1) * 4 + l;
                                let v = f[m][0] * arr[o0] + f[m][1] * arr[o1];
                                next[(((m * prefix + pfx) * suffix) + sfx) * 4 + l] += v;
                            }
                        }
                    }
                }
                arr = next;
                prefix *= 4;
            }
            let mut acc = KahanSum::default();
            for m in 0..prefix {
                let vals = &arr[m * 4..m * 4 + 4];
                acc.add(vals[argmax_class(vals) as usize]);
            }
            acc.value()
        }
        Semantics::Strict => {
            // P_d = sum_m max_s P(m|s) * max_l mass(s, l): the decoder must
            // also pin the true syndrome. Dynamic programming over syndrome
            // bits, replacing each by its observed copy count with a max.
            let mut arr: Vec<f64> = (0..(1usize << ns))
                .map(|s| {
                    let m = &masses[s * 4..s * 4 + 4];
                    m[argmax_class(m) as usize]
                })
                .collect();
            let mut prefix = 1usize;
            let mut suffix = 1usize << ns;
            for _ in 0..ns {
                suffix >>= 1;
                let mut next = vec![0.0f64; prefix * 4 * suffix];
                for m in 0..4usize {
                    for pfx in 0..prefix {
                        for sfx in 0..suffix {
                            let a = f[m][0] * arr[pfx * (suffix << 1) + (sfx << 1)];
                            let b = f[m][1] * arr[pfx * (suffix << 1) + (sfx << 1) + 1];
                            next[(m * prefix + pfx) * suffix + sfx] = a.max(b);
                        }
                    }
                }
                arr = next;
                prefix *= 4;
            }
            let mut acc = KahanSum::default();
            for v in arr {
                acc.add(v);
            }
            acc.value()
        }
    }
}

/// A frozen decode decision table for one (noise, semantics) operating
/// point; build once, decode many.
#[derive(Debug, Clone)]
pub struct DecodePlan {
    pub semantics: Semantics,
    n_qubits: usize,
    cstar: Vec<Option<(Mask, Mask)>>,
    /// Pauli for each class: I, logical X, logical Z, logical Y.
    class_ops: [(Mask, Mask); 4],
    kind: PlanKind,
}

#[derive(Debug, Clone)]
enum PlanKind {
    /// Best class per observed syndrome.
    Plain { lstar: Vec<u8> },
    /// Best (syndrome interpretation, class) per observed copy-count index
    /// (2 bits per stabilizer).
    Gauge { decisions: Vec<(u16, u8)> },
}

impl DecodePlan {
    pub fn new(
        table: &DecoderTable,
        code: &StabilizerCode,
        noise: &NoiseModel,
        semantics: Semantics,
    ) -> Result<DecodePlan> {
        if code.content_hash() != table.code_hash {
            return Err(QeccError::TableHashMismatch {
                found_name: table.code_name.clone(),
                found_hash: table.code_hash,
                want_name: code.name.clone(),
                want_hash: code.content_hash(),
            });
        }
        let masses = class_masses(table, noise);
        let ns = table.n_stabs;
        let lx = (code.logical_x.x_mask, code.logical_x.z_mask);
        let lz = (code.logical_z.x_mask, code.logical_z.z_mask);
        let class_ops = [(0, 0), lx, lz, (lx.0 ^ lz.0, lx.1 ^ lz.1)];
        let cstar = table
            .cstar
            .iter()
            .map(|o| o.as_ref().map(|p| (p.x_mask, p.z_mask)))
            .collect();
        let kind = if table.gauge_copies {
            PlanKind::Gauge {
                decisions: gauge_decisions(ns, &masses, noise.q, semantics),
            }
        } else {
            let g = if noise.q == 0.0 {
                masses
            } else {
                flip_weighted(&masses, ns, noise.q)
            };
            let lstar = (0..(1usize << ns))
                .map(|s| argmax_class(&g[s * 4..s * 4 + 4]))
                .collect();
            PlanKind::Plain { lstar }
        };
        Ok(DecodePlan {
            semantics,
            n_qubits: table.n_qubits,
            cstar,
            class_ops,
            kind,
        })
    }

    /// The correction for an observed readout: the plain syndrome for
    /// ordinary codes, or the packed copy counts (2 bits per stabilizer)
    /// for subsystem codes.
    pub fn correction(&self, observed: u32) -> PauliOperator {
        let (s, l) = match &self.kind {
            PlanKind::Plain { lstar } => (observed as usize, lstar[observed as usize]),
            PlanKind::Gauge { decisions } => {
                let (s, l) = decisions[observed as usize];
                (s as usize, l)
            }
        };
        let base = self.cstar[s].unwrap_or((0, 0));
        let lop = self.class_ops[l as usize];
        PauliOperator {
            n_qubits: self.n_qubits,
            x_mask: base.0 ^ lop.0,
            z_mask: base.1 ^ lop.1,
        }
    }
}

fn gauge_decisions(ns: usize, masses: &[f64], q: f64, semantics: Semantics) -> Vec<(u16, u8)> {
    let f = copy_likelihoods(q.max(0.0));
    let n_synd = 1usize << ns;
    let n_obs = 1usize << (2 * ns);
    // P(m|s) as a product of per-stabilizer factors.
    let weight = |m: usize, s: usize| -> f64 {
        let mut w = 1.0;
        for k in 0..ns {
            w *= f[(m >> (2 * k)) & 3][(s >> k) & 1];
        }
        w
    };
    let best_l: Vec<u8> = (0..n_synd)
        .map(|s| argmax_class(&masses[s * 4..s * 4 + 4]))
        .collect();
    (0..n_obs)
        .map(|m| match semantics {
            Semantics::Strict => {
                // Joint argmax over (s, l) of P(m|s) * mass(s, l).
                let mut best = (0u16, 0u8);
                let mut best_v = -1.0;
                for s in 0..n_synd {
                    let l = best_l[s];
                    let v = weight(m, s) * masses[s * 4 + l as usize];
                    if v > best_v {
                        best_v = v;
                        best = (s as u16, l);
                    }
                }
                best
            }
            Semantics::ClassOnly => {
                // Class from the marginal over s; syndrome interpretation
                // from the joint with that class.
                let mut sums = [0.0f64; 4];
                for s in 0..n_synd {
                    let w = weight(m, s);
                    for l in 0..4 {
                        sums[l] += w * masses[s * 4 + l];
                    }
                }
                let l = argmax_class(&sums);
                let mut best_s = 0usize;
                let mut best_v = -1.0;
                for s in 0..n_synd {
                    let v = weight(m, s) * masses[s * 4 + l as usize];
                    if v > best_v {
                        best_v = v;
                        best_s = s;
                    }
                }
                (best_s as u16, l)
            }
        })
        .collect()
}

/// One-shot convenience decode; builds a throwaway plan. Sampling loops
/// should construct a `DecodePlan` once instead.
pub fn decode_lookup(
    table: &DecoderTable,
    code: &StabilizerCode,
    observed: u32,
    noise: &NoiseModel,
    semantics: Semantics,
) -> Result<PauliOperator> {
    Ok(DecodePlan::new(table, code, noise, semantics)?.correction(observed))
}

/// For each weight-1 error: is it corrected at the given operating point?
/// (Its class matches the decoder's pick for its syndrome.)
pub fn weight_one_correctability(
    table: &DecoderTable,
    code: &StabilizerCode,
    noise: &NoiseModel,
) -> Result<Vec<(PauliOperator, bool)>> {
    let plan = DecodePlan::new(table, code, noise, Semantics::Strict)?;
    let mut out = Vec::new();
    for e in enumerate_errors(code.n_qubits, 1) {
        if e.is_identity() {
            continue;
        }
        let s = compute_syndrome(code, &e)?;
        let corr = match &plan.kind {
            PlanKind::Plain { .. } => plan.correction(s),
            PlanKind::Gauge { .. } => {
                // Error-free readout: all three copies agree with the truth.
                let mut obs = 0u32;
                for k in 0..code.n_stabilizers() {
                    if (s >> k) & 1 == 1 {
                        obs |= 3 << (2 * k);
                    }
                }
                plan.correction(obs)
            }
        };
        let t = corr.multiply(&e)?;
        let ok = compute_syndrome(code, &t)? == 0 && raw_class(code, &t) == 0;
        out.push((e, ok));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_code;
    use crate::noise::{make_depolarizing, make_independent};

    #[test]
    fn syndrome_basics() {
        let code = get_code("S7").unwrap();
        let id = PauliOperator::identity(7);
        assert_eq!(compute_syndrome(&code, &id).unwrap(), 0);
        for s in &code.stabilizer_generators {
            assert_eq!(compute_syndrome(&code, s).unwrap(), 0);
        }
        let e1 = PauliOperator::new(7, 1, 0).unwrap();
        let e2 = PauliOperator::new(7, 0, 2).unwrap();
        let both = e1.multiply(&e2).unwrap();
        assert_eq!(
            compute_syndrome(&code, &both).unwrap(),
            compute_syndrome(&code, &e1).unwrap() ^ compute_syndrome(&code, &e2).unwrap()
        );
    }

    #[test]
    fn classify_relative_to_reference() {
        let code = get_code("S5").unwrap();
        let r = PauliOperator::new(5, 0b00001, 0).unwrap();
        assert_eq!(classify_logical(&code, &r, &r).unwrap(), LogicalClass::I);
        let ex = r.multiply(&code.logical_x).unwrap();
        assert_eq!(classify_logical(&code, &ex, &r).unwrap(), LogicalClass::X);
        let bad = PauliOperator::identity(5);
        assert!(matches!(
            classify_logical(&code, &bad, &r),
            Err(QeccError::SyndromeMismatch)
        ));
    }

    #[test]
    fn trivial_table_shapes() {
        let code = get_code("S5").unwrap();
        let t0 = build_decoder_table(&code, &BuildConfig::truncated(0)).unwrap();
        assert_eq!(t0.total_count(), 1);
        assert_eq!(t0.tensor(0, LogicalClass::I).entries, vec![((0, 0, 0), 1)]);

        let exact = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        assert_eq!(exact.total_count(), 1 << 10); // 4^5
        assert!(exact.exact());
        // C*(s) must carry syndrome s.
        for (s, c) in exact.cstar.iter().enumerate() {
            let c = c.as_ref().unwrap();
            assert_eq!(compute_syndrome(&code, c).unwrap(), s as u32);
        }
    }

    #[test]
    fn truncated_and_exact_builds_agree() {
        let code = get_code("REP3").unwrap();
        let a = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let b = build_decoder_table(&code, &BuildConfig::truncated(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_and_perfect_limits() {
        let code = get_code("S7").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        for noise in [
            make_depolarizing(0.13, 0.0).unwrap(),
            make_independent(0.04, 2.0, 0.0).unwrap(),
        ] {
            let total: f64 = class_masses(&table, &noise).iter().sum();
            assert!((total - 1.0).abs() < 1e-10, "sum = {total}");
        }
        let zero = make_depolarizing(0.0, 0.0).unwrap();
        assert!((success_probability_perfect(&table, &zero) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_q_zero_matches_perfect() {
        let code = get_code("S5").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let noise = make_depolarizing(0.07, 0.0).unwrap();
        let a = success_probability_perfect(&table, &noise);
        for sem in [Semantics::Strict, Semantics::ClassOnly] {
            assert!((success_probability_noisy(&table, &noise, sem) - a).abs() < 1e-12);
        }
    }

    #[test]
    fn rep3_closed_form() {
        let code = get_code("REP3").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let noise = make_independent(0.1, 0.0, 0.0).unwrap();
        let pl = 1.0 - success_probability_perfect(&table, &noise);
        let p = 0.1f64;
        assert!((pl - (3.0 * p * p - 2.0 * p * p * p)).abs() < 1e-12);
        assert!((pl - 0.028).abs() < 1e-12);
    }

    #[test]
    fn rep3_class_only_ignores_pure_measurement_noise() {
        let code = get_code("REP3").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let noise = make_independent(0.0, 0.0, 0.02).unwrap();
        let pd = success_probability_noisy(&table, &noise, Semantics::ClassOnly);
        assert!((pd - 1.0).abs() < 1e-12);
        // Strict semantics charge for the misread syndrome.
        let pd = success_probability_noisy(&table, &noise, Semantics::Strict);
        assert!((pd - 0.98f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn all_weight_one_errors_decode_on_distance_three_codes() {
        for name in ["S9", "C7"] {
            let code = get_code(name).unwrap();
            let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
            let noise = make_depolarizing(1e-3, 0.0).unwrap();
            for (e, ok) in weight_one_correctability(&table, &code, &noise).unwrap() {
                assert!(ok, "{name} failed on ({:b},{:b})", e.x_mask, e.z_mask);
            }
        }
    }

    #[test]
    fn shell_count_identity() {
        let code = get_code("S5").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        // Profile (1,0,1) on 5 qubits: 5*4 = 20 configurations across all (s,l).
        let total: u64 = table
            .tensors
            .iter()
            .flat_map(|t| t.entries.iter())
            .filter(|((nx, ny, nz), _)| (*nx, *ny, *nz) == (1, 0, 1))
            .map(|(_, c)| *c)
            .sum();
        assert_eq!(total, 20);
    }

    #[test]
    fn capacity_guard() {
        let mut code = get_code("S5").unwrap();
        code.n_qubits = 16;
        assert!(matches!(
            build_decoder_table(&code, &BuildConfig::exact()),
            Err(QeccError::Capacity(_))
        ));
    }
}
