//! Bit-parallel n-qubit Pauli algebra (phases ignored).
//!
//! A Pauli is stored as a pair of bit masks: bit `i` of `x` set means qubit
//! `i` carries an X component, bit `i` of `z` a Z component. (x,z) =
//! (0,0)/(1,0)/(0,1)/(1,1) is I/X/Z/Y. Global phases never influence
//! syndromes or logical classes, so they are not tracked.

use crate::error::{QeccError, Result};
use itertools::Itertools;

/// One mask half of a Pauli; supports up to 32 qubits in one word.
pub type Mask = u32;

/// Maximum supported qubit count.
pub const MAX_QUBITS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub n_qubits: usize,
    pub x_mask: Mask,
    pub z_mask: Mask,
}

/// Per-type weight counts of a Pauli: pure-X, Y, pure-Z qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightProfile {
    pub n_x: u32,
    pub n_y: u32,
    pub n_z: u32,
}

impl WeightProfile {
    /// Total support size n(E).
    pub fn total(&self) -> u32 {
        self.n_x + self.n_y + self.n_z
    }
}

#[inline]
fn parity(m: Mask) -> u8 {
    (m.count_ones() & 1) as u8
}

impl PauliOperator {
    pub fn new(n_qubits: usize, x_mask: Mask, z_mask: Mask) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(QeccError::InvalidArgument(format!(
                "{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit mask width"
            )));
        }
        let valid = if n_qubits == MAX_QUBITS {
            Mask::MAX
        } else {
            (1 << n_qubits) - 1
        };
        if x_mask & !valid != 0 || z_mask & !valid != 0 {
            return Err(QeccError::InvalidArgument(format!(
                "mask bits set beyond qubit {}",
                n_qubits - 1
            )));
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Support size: number of qubits acted on nontrivially.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            Err(QeccError::SizeMismatch(self.n_qubits, other.n_qubits))
        } else {
            Ok(())
        }
    }

    /// Symplectic product: 1 iff the two operators anticommute.
    pub fn symplectic_product(&self, other: &Self) -> Result<u8> {
        self.check_size(other)?;
        Ok(parity(self.x_mask & other.z_mask) ^ parity(self.z_mask & other.x_mask))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Product up to phase: componentwise XOR of the masks.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
        })
    }

    pub fn weight_profile(&self) -> WeightProfile {
        let y = self.x_mask & self.z_mask;
        WeightProfile {
            n_x: (self.x_mask & !y).count_ones(),
            n_y: y.count_ones(),
            n_z: (self.z_mask & !y).count_ones(),
        }
    }

    /// Canonical ordering key: weight-major, then lexicographic by masks.
    pub fn order_key(&self) -> (u32, Mask, Mask) {
        (self.weight(), self.x_mask, self.z_mask)
    }
}

/// Streams every Pauli on `n_qubits` qubits with support size at most
/// `max_weight`, each exactly once, in the canonical order: increasing
/// weight, then lexicographic by (x_mask, z_mask). The total count is
/// `sum_{i<=max_weight} C(n,i) * 3^i`.
pub fn enumerate_errors(n_qubits: usize, max_weight: usize) -> ErrorEnumerator {
    assert!(max_weight <= n_qubits, "max_weight exceeds qubit count");
    assert!(n_qubits <= MAX_QUBITS);
    ErrorEnumerator {
        n_qubits,
        max_weight,
        weight: 0,
        shell: Vec::new(),
        pos: 0,
        done: false,
    }
}

pub struct ErrorEnumerator {
    n_qubits: usize,
    max_weight: usize,
    weight: usize,
    shell: Vec<(Mask, Mask)>,
    pos: usize,
    done: bool,
}

impl ErrorEnumerator {
    fn fill_shell(&mut self) {
        let w = self.weight;
        self.shell.clear();
        self.pos = 0;
        if w == 0 {
            self.shell.push((0, 0));
            return;
        }
        // All supports of size w, all 3^w type assignments per support.
        let mut pow3 = 1usize;
        for _ in 0..w {
            pow3 *= 3;
        }
        self.shell.reserve(binomial(self.n_qubits, w) as usize * pow3);
        for support in (0..self.n_qubits).combinations(w) {
            for mut t in 0..pow3 {
                let (mut x, mut z) = (0 as Mask, 0 as Mask);
                for &q in &support {
                    let bit = 1 << q;
                    match t % 3 {
                        0 => x |= bit,
                        1 => z |= bit,
                        _ => {
                            x |= bit;
                            z |= bit;
                        }
                    }
                    t /= 3;
                }
                self.shell.push((x, z));
            }
        }
        self.shell.sort_unstable();
    }
}

impl Iterator for ErrorEnumerator {
    type Item = PauliOperator;

    fn next(&mut self) -> Option<PauliOperator> {
        loop {
            if self.done {
                return None;
            }
            if self.pos < self.shell.len() {
                let (x, z) = self.shell[self.pos];
                self.pos += 1;
                return Some(PauliOperator {
                    n_qubits: self.n_qubits,
                    x_mask: x,
                    z_mask: z,
                });
            }
            if self.shell.is_empty() && self.weight == 0 {
                self.fill_shell();
                continue;
            }
            if self.weight >= self.max_weight {
                self.done = true;
                return None;
            }
            self.weight += 1;
            self.fill_shell();
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `sum_{i<=max_weight} C(n,i) * 3^i`: the number of Paulis enumerated.
pub fn enumeration_count(n_qubits: usize, max_weight: usize) -> u64 {
    let mut total = 0u64;
    let mut pow3 = 1u64;
    for i in 0..=max_weight {
        total += binomial(n_qubits, i) * pow3;
        pow3 *= 3;
    }
    total
}
