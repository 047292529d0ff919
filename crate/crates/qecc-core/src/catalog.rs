//! Code catalog: validated definitions of the built-in stabilizer codes
//! plus user-supplied custom codes, loaded from a versioned plain-text file.

use crate::error::{QeccError, Result};
use crate::pauli::{enumerate_errors, Mask, PauliOperator};

/// Gauge (subsystem) structure: low-weight gauge generators measured in
/// place of the stabilizers, plus, for each stabilizer generator, the pairs
/// of gauge generators whose products equal it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeStructure {
    pub gauge_generators: Vec<PauliOperator>,
    /// (stabilizer index, gauge index i, gauge index j), three per stabilizer.
    pub stabilizer_pairs: Vec<(usize, usize, usize)>,
}

impl GaugeStructure {
    /// The pairs belonging to stabilizer `k`, in catalog order.
    pub fn pairs_of(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.stabilizer_pairs
            .iter()
            .filter(move |(s, _, _)| *s == k)
            .map(|&(_, i, j)| (i, j))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    pub name: String,
    pub n_qubits: usize,
    pub stabilizer_generators: Vec<PauliOperator>,
    pub logical_x: PauliOperator,
    pub logical_z: PauliOperator,
    pub gauge: Option<GaugeStructure>,
}

impl StabilizerCode {
    pub fn n_stabilizers(&self) -> usize {
        self.stabilizer_generators.len()
    }

    /// FNV-1a hash of the code content (everything except the name); used to
    /// bind serialized decoder tables to the code they were built for.
    pub fn content_hash(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.push(self.n_qubits as u64);
        h.push(self.stabilizer_generators.len() as u64);
        for s in &self.stabilizer_generators {
            h.push(s.x_mask as u64);
            h.push(s.z_mask as u64);
        }
        for l in [&self.logical_x, &self.logical_z] {
            h.push(l.x_mask as u64);
            h.push(l.z_mask as u64);
        }
        if let Some(g) = &self.gauge {
            h.push(g.gauge_generators.len() as u64);
            for gg in &g.gauge_generators {
                h.push(gg.x_mask as u64);
                h.push(gg.z_mask as u64);
            }
            for &(k, i, j) in &g.stabilizer_pairs {
                h.push(k as u64);
                h.push(i as u64);
                h.push(j as u64);
            }
        }
        h.finish()
    }

    /// Number of encoded logical qubits: `n - s` for ordinary codes,
    /// `n - s - g` for subsystem codes with `g` gauge qubits.
    pub fn logical_qubits(&self) -> Option<usize> {
        let n = self.n_qubits;
        let s = self.n_stabilizers();
        match &self.gauge {
            None => n.checked_sub(s),
            Some(gs) => {
                let rows: Vec<u64> = gs
                    .gauge_generators
                    .iter()
                    .map(|p| symplectic_row(p, n))
                    .collect();
                let rank = gf2_rank(&rows);
                // The gauge group has symplectic rank s + 2g.
                let g2 = rank.checked_sub(s)?;
                if g2 % 2 != 0 {
                    return None;
                }
                n.checked_sub(s + g2 / 2)
            }
        }
    }
}

fn symplectic_row(p: &PauliOperator, n: usize) -> u64 {
    (p.x_mask as u64) | ((p.z_mask as u64) << n)
}

/// Rank of a set of GF(2) row vectors.
pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let high = 1u64 << (63 - b.leading_zeros());
            if v & high != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf29ce484222325)
    }
    fn push(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

/// Result of `validate_code`: each failed invariant becomes one entry.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every structural invariant of a code; failures are report
/// entries, never panics or errors.
pub fn validate_code(code: &StabilizerCode) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let mut fail = |msg: String| rep.failures.push(msg);
    let n = code.n_qubits;

    let mut ops: Vec<(&str, &PauliOperator)> = vec![("LX", &code.logical_x), ("LZ", &code.logical_z)];
    for (k, s) in code.stabilizer_generators.iter().enumerate() {
        ops.push(("S", s));
        if s.n_qubits != n {
            fail(format!("stabilizer {k} qubit count {} != {n}", s.n_qubits));
        }
    }
    for (label, op) in &ops {
        if op.n_qubits != n {
            fail(format!("{label} qubit count {} != {n}", op.n_qubits));
        }
        if PauliOperator::new(n, op.x_mask, op.z_mask).is_err() {
            fail(format!("{label} has mask bits beyond qubit {}", n - 1));
        }
    }

    let stabs = &code.stabilizer_generators;
    for i in 0..stabs.len() {
        for j in i + 1..stabs.len() {
            if stabs[i].symplectic_product(&stabs[j]) .map_or(true, |v| v != 0) {
                fail(format!("stabilizers {i} and {j} anticommute"));
            }
        }
    }

    let stab_rows: Vec<u64> = stabs.iter().map(|s| symplectic_row(s, n)).collect();
    if gf2_rank(&stab_rows) != stabs.len() {
        fail("stabilizer generators are not independent".into());
    }

    for (k, s) in stabs.iter().enumerate() {
        if code.logical_x.symplectic_product(s) .map_or(true, |v| v != 0) {
            fail(format!("logical X anticommutes with stabilizer {k}"));
        }
        if code.logical_z.symplectic_product(s) .map_or(true, |v| v != 0) {
            fail(format!("logical Z anticommutes with stabilizer {k}"));
        }
    }
    if code.logical_x.symplectic_product(&code.logical_z) .map_or(true, |v| v != 1) {
        fail("logical X and logical Z do not anticommute".into());
    }
    for (label, l) in [("X", &code.logical_x), ("Z", &code.logical_z)] {
        let mut rows = stab_rows.clone();
        rows.push(symplectic_row(l, n));
        if gf2_rank(&rows) != stabs.len() + 1 {
            fail(format!("logical {label} lies in the stabilizer group"));
        }
    }

    match &code.gauge {
        None => {
            if n != stabs.len() + 1 {
                fail(format!(
                    "expected one logical qubit: n_qubits - n_stabilizers = {}",
                    n as i64 - stabs.len() as i64
                ));
            }
        }
        Some(g) => {
            if code.logical_qubits() != Some(1) {
                fail(format!(
                    "expected one logical qubit, found {:?}",
                    code.logical_qubits()
                ));
            }
            for (idx, gg) in g.gauge_generators.iter().enumerate() {
                if gg.symplectic_product(&code.logical_x) .map_or(true, |v| v != 0)
                    || gg.symplectic_product(&code.logical_z) .map_or(true, |v| v != 0)
                {
                    fail(format!("gauge generator {idx} anticommutes with a logical"));
                }
            }
            for (k, _) in stabs.iter().enumerate() {
                let cnt = g.pairs_of(k).count();
                if cnt != 3 {
                    fail(format!("stabilizer {k} has {cnt} gauge pairs, expected 3"));
                }
            }
            for &(k, i, j) in &g.stabilizer_pairs {
                let (Some(gi), Some(gj), Some(s)) = (
                    g.gauge_generators.get(i),
                    g.gauge_generators.get(j),
                    stabs.get(k),
                ) else {
                    fail(format!("pair ({k},{i},{j}) references out-of-range index"));
                    continue;
                };
                match gi.multiply(gj) {
                    Ok(prod) if prod.x_mask == s.x_mask && prod.z_mask == s.z_mask => {}
                    _ => fail(format!(
                        "gauge pair ({i},{j}) does not multiply to stabilizer {k}"
                    )),
                }
            }
        }
    }

    rep
}

/// Brute-force code distance by weight-bounded search: the minimum support
/// size of an operator commuting with every stabilizer generator but acting
/// as logical X (`d_x`), logical Z (`d_z`), or any nontrivial logical (`d`).
/// For subsystem codes this is the dressed distance (logicals modulo the
/// gauge group, which the symplectic class computation gives for free).
pub fn code_distance(code: &StabilizerCode) -> (u32, u32, u32) {
    let mut dx = 0u32;
    let mut dz = 0u32;
    let mut d = 0u32;
    'outer: for w in 1..=code.n_qubits {
        for e in enumerate_errors(code.n_qubits, w) {
            if (e.weight() as usize) != w {
                continue;
            }
            if code
                .stabilizer_generators
                .iter()
                .any(|s| s.symplectic_product(&e) .map_or(true, |v| v != 0))
            {
                continue;
            }
            let cx = e.symplectic_product(&code.logical_z).unwrap();
            let cz = e.symplectic_product(&code.logical_x).unwrap();
            let cls = cx | (cz << 1);
            if cls != 0 && d == 0 {
                d = w as u32;
            }
            if cls == 1 && dx == 0 {
                dx = w as u32;
            }
            if cls == 2 && dz == 0 {
                dz = w as u32;
            }
            if dx != 0 && dz != 0 && d != 0 {
                break 'outer;
            }
        }
    }
    (dx, dz, d)
}

/// From 36 raw gauge-measurement outcome bits (bit i = gauge generator i
/// measured -1), reconstruct the three redundant copies of the stabilizer
/// syndrome: copy j of stabilizer k is the XOR of the two outcome bits in
/// pair j of stabilizer k.
pub fn reconstruct_stabilizers_from_gauges(
    code: &StabilizerCode,
    gauge_outcomes: u64,
) -> Result<[u32; 3]> {
    let g = code
        .gauge
        .as_ref()
        .ok_or_else(|| QeccError::MissingGauge(code.name.clone()))?;
    let mut copies = [0u32; 3];
    for k in 0..code.n_stabilizers() {
        for (j, (gi, gj)) in g.pairs_of(k).enumerate() {
            let bit = ((gauge_outcomes >> gi) ^ (gauge_outcomes >> gj)) & 1;
            copies[j] |= (bit as u32) << k;
        }
    }
    Ok(copies)
}

/// The catalog: an immutable, validated set of codes loaded from a
/// `qecc-catalog v1` text file.
#[derive(Debug, Clone)]
pub struct Catalog {
    codes: Vec<StabilizerCode>,
}

const DEFAULT_CATALOG: &str = include_str!("../data/catalog.txt");

impl Catalog {
    /// The built-in catalog shipped with the crate.
    pub fn builtin() -> Catalog {
        Self::parse(DEFAULT_CATALOG).expect("built-in catalog must parse")
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        parse_catalog(text)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Catalog> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn codes(&self) -> &[StabilizerCode] {
        &self.codes
    }

    pub fn get(&self, name: &str) -> Result<&StabilizerCode> {
        self.codes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| QeccError::UnknownCode(name.to_string()))
    }
}

/// Convenience accessor against the built-in catalog.
pub fn get_code(name: &str) -> Result<StabilizerCode> {
    Catalog::builtin().get(name).cloned()
}

fn parse_mask(tok: &str, line: usize) -> Result<Mask> {
    Mask::from_str_radix(tok, 16).map_err(|_| QeccError::CatalogParse {
        line,
        msg: format!("bad hex mask `{tok}`"),
    })
}

fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() || l.trim_start().starts_with('#') => continue,
            Some((_, l)) => break l.trim().to_string(),
            None => {
                return Err(QeccError::CatalogParse {
                    line: 0,
                    msg: "empty catalog".into(),
                })
            }
        }
    };
    if header != "qecc-catalog v1" {
        return Err(QeccError::CatalogParse {
            line: 1,
            msg: format!("unsupported header `{header}`"),
        });
    }

    struct Partial {
        name: String,
        n: usize,
        stabs: Vec<PauliOperator>,
        lx: Option<PauliOperator>,
        lz: Option<PauliOperator>,
        gens: Vec<PauliOperator>,
        pairs: Vec<(usize, usize, usize)>,
        line: usize,
    }

    fn finish(p: Partial) -> Result<StabilizerCode> {
        let err = |msg: String| QeccError::CatalogParse { line: p.line, msg };
        let lx = p
            .lx
            .ok_or_else(|| err(format!("code {} missing LX", p.name)))?;
        let lz = p
            .lz
            .ok_or_else(|| err(format!("code {} missing LZ", p.name)))?;
        if p.stabs.is_empty() {
            return Err(err(format!("code {} has no stabilizers", p.name)));
        }
        let gauge = if p.gens.is_empty() && p.pairs.is_empty() {
            None
        } else {
            Some(GaugeStructure {
                gauge_generators: p.gens,
                stabilizer_pairs: p.pairs,
            })
        };
        Ok(StabilizerCode {
            name: p.name,
            n_qubits: p.n,
            stabilizer_generators: p.stabs,
            logical_x: lx,
            logical_z: lz,
            gauge,
        })
    }

    let mut codes = Vec::new();
    let mut cur: Option<Partial> = None;
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let perr = |msg: String| QeccError::CatalogParse { line: lineno, msg };
        match toks[0] {
            "code" => {
                if let Some(p) = cur.take() {
                    codes.push(finish(p)?);
                }
                if toks.len() != 3 {
                    return Err(perr("expected `code <name> <n_qubits>`".into()));
                }
                let n: usize = toks[2]
                    .parse()
                    .map_err(|_| perr(format!("bad qubit count `{}`", toks[2])))?;
                cur = Some(Partial {
                    name: toks[1].to_string(),
                    n,
                    stabs: Vec::new(),
                    lx: None,
                    lz: None,
                    gens: Vec::new(),
                    pairs: Vec::new(),
                    line: lineno,
                });
            }
            "S" | "LX" | "LZ" | "G" => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| perr("operator line before any `code` line".into()))?;
                if toks.len() != 3 {
                    return Err(perr(format!("expected `{} <xmask> <zmask>`", toks[0])));
                }
                let x = parse_mask(toks[1], lineno)?;
                let z = parse_mask(toks[2], lineno)?;
                let op = PauliOperator::new(p.n, x, z).map_err(|e| perr(e.to_string()))?;
                match toks[0] {
                    "S" => p.stabs.push(op),
                    "LX" => p.lx = Some(op),
                    "LZ" => p.lz = Some(op),
                    _ => p.gens.push(op),
                }
            }
            "PAIR" => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| perr("PAIR line before any `code` line".into()))?;
                if toks.len() != 4 {
                    return Err(perr("expected `PAIR <stab> <g_i> <g_j>`".into()));
                }
                let nums: Vec<usize> = toks[1..]
                    .iter()
                    .map(|t| t.parse().map_err(|_| perr(format!("bad index `{t}`"))))
                    .collect::<Result<_>>()?;
                p.pairs.push((nums[0], nums[1], nums[2]));
            }
            other => return Err(perr(format!("unknown directive `{other}`"))),
        }
    }
    if let Some(p) = cur.take() {
        codes.push(finish(p)?);
    }
    Ok(Catalog { codes })
}

/// Writes a catalog back out in the `qecc-catalog v1` format.
pub fn serialize_catalog(codes: &[StabilizerCode]) -> String {
    let mut out = String::from("qecc-catalog v1\n");
    for c in codes {
        out.push_str(&format!("\ncode {} {}\n", c.name, c.n_qubits));
        for s in &c.stabilizer_generators {
            out.push_str(&format!("S {:x} {:x}\n", s.x_mask, s.z_mask));
        }
        out.push_str(&format!("LX {:x} {:x}\n", c.logical_x.x_mask, c.logical_x.z_mask));
        out.push_str(&format!("LZ {:x} {:x}\n", c.logical_z.x_mask, c.logical_z.z_mask));
        if let Some(g) = &c.gauge {
            for gg in &g.gauge_generators {
                out.push_str(&format!("G {:x} {:x}\n", gg.x_mask, gg.z_mask));
            }
            for &(k, i, j) in &g.stabilizer_pairs {
                out.push_str(&format!("PAIR {k} {i} {j}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_parses_and_lists_expected_codes() {
        let cat = Catalog::builtin();
        let names: Vec<&str> = cat.codes().iter().map(|c| c.name.as_str()).collect();
        for want in ["S5", "S6", "S7", "S8", "S9", "S9b", "S13", "C7", "C11", "GCC15", "REP3"] {
            assert!(names.contains(&want), "missing {want}");
        }
    }

    #[test]
    fn unknown_code_is_an_error() {
        assert!(matches!(get_code("S99"), Err(QeccError::UnknownCode(_))));
    }

    #[test]
    fn catalog_round_trips() {
        let cat = Catalog::builtin();
        let text = serialize_catalog(cat.codes());
        let back = Catalog::parse(&text).unwrap();
        assert_eq!(cat.codes(), back.codes());
    }

    #[test]
    fn validate_flags_anticommuting_generators() {
        let mut code = get_code("S5").unwrap();
        // Replace one generator with a single X that anticommutes with a Z face.
        code.stabilizer_generators[0] = PauliOperator::new(5, 1, 0).unwrap();
        let rep = validate_code(&code);
        assert!(rep.failures.iter().any(|f| f.contains("anticommute")));
    }

    #[test]
    fn validate_flags_corrupted_gauge_pair() {
        let mut code = get_code("GCC15").unwrap();
        let g = code.gauge.as_mut().unwrap();
        let (k, i, _) = g.stabilizer_pairs[0];
        g.stabilizer_pairs[0] = (k, i, i); // product is identity, not the stabilizer
        let rep = validate_code(&code);
        assert!(rep
            .failures
            .iter()
            .any(|f| f.contains("does not multiply to stabilizer")));
    }

    #[test]
    fn gauge_reconstruction_basics() {
        let code = get_code("GCC15").unwrap();
        let copies = reconstruct_stabilizers_from_gauges(&code, 0).unwrap();
        assert_eq!(copies, [0, 0, 0]);
        // Flipping one gauge bit flips exactly the copies containing it.
        let copies = reconstruct_stabilizers_from_gauges(&code, 1).unwrap();
        let g = code.gauge.as_ref().unwrap();
        for k in 0..code.n_stabilizers() {
            for (j, (gi, gj)) in g.pairs_of(k).enumerate() {
                let expect = (gi == 0 || gj == 0) as u32;
                assert_eq!((copies[j] >> k) & 1, expect);
            }
        }
    }

    #[test]
    fn no_gauge_reconstruction_for_plain_codes() {
        let code = get_code("S9").unwrap();
        assert!(matches!(
            reconstruct_stabilizers_from_gauges(&code, 0),
            Err(QeccError::MissingGauge(_))
        ));
    }

    #[test]
    fn rep3_distances() {
        let code = get_code("REP3").unwrap();
        assert_eq!(code_distance(&code), (3, 1, 1));
    }
}
