//! Plain-text persistence for decoder tables (`qecc-table v1`).
//!
//! Text was chosen over binary for diffability; the files compress well
//! externally. A trailing `end` marker guards against truncated files, and
//! the embedded code hash binds a table to the exact code it was built for.

use crate::catalog::StabilizerCode;
use crate::decoder::{CoefficientTensor, DecoderTable, LogicalClass};
use crate::error::{QeccError, Result};
use crate::pauli::{Mask, PauliOperator};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

const VERSION: &str = "qecc-table v1";

pub fn save_table(table: &DecoderTable, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = BufWriter::new(f);
    writeln!(w, "{VERSION}")?;
    writeln!(w, "code {} {:016x}", table.code_name, table.code_hash)?;
    writeln!(w, "qubits {}", table.n_qubits)?;
    writeln!(w, "stabilizers {}", table.n_stabs)?;
    writeln!(w, "gauge {}", table.gauge_copies as u8)?;
    writeln!(w, "nmax {}", table.n_max)?;
    for (s, c) in table.cstar.iter().enumerate() {
        if let Some(c) = c {
            writeln!(w, "cstar s={:x} x={:x} z={:x}", s, c.x_mask, c.z_mask)?;
        }
    }
    for s in 0..table.n_syndromes() {
        for l in LogicalClass::ALL {
            for &((nx, ny, nz), count) in &table.tensor(s as u32, l).entries {
                writeln!(
                    w,
                    "s={s:x} l={l} nx={nx} ny={ny} nz={nz} count={count}"
                )?;
            }
        }
    }
    writeln!(w, "end")?;
    w.flush()?;
    Ok(())
}

fn field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| QeccError::TableFormat(format!("missing field `{key}`")))?;
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| QeccError::TableFormat(format!("expected `{key}=...`, found `{tok}`")))
}

pub fn load_table(path: &Path) -> Result<DecoderTable> {
    let f = std::fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let mut next_line = || -> Result<Option<String>> {
        match lines.next() {
            Some(l) => Ok(Some(l?)),
            None => Ok(None),
        }
    };
    let header = next_line()?.unwrap_or_default();
    if header.trim() != VERSION {
        return Err(QeccError::TableVersion(header.trim().to_string()));
    }

    let mut code_name = String::new();
    let mut code_hash = 0u64;
    let mut n_qubits = None;
    let mut n_stabs = None;
    let mut gauge_copies = false;
    let mut n_max = None;
    let mut cstar_lines: Vec<(usize, Mask, Mask)> = Vec::new();
    let mut entries: Vec<(usize, usize, (u8, u8, u8), u64)> = Vec::new();
    let mut saw_end = false;

    while let Some(line) = next_line()? {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "end" {
            saw_end = true;
            break;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap();
        let badnum = |t: &str| QeccError::TableFormat(format!("bad number `{t}`"));
        match head {
            "code" => {
                code_name = toks
                    .next()
                    .ok_or_else(|| QeccError::TableFormat("missing code name".into()))?
                    .to_string();
                let h = toks
                    .next()
                    .ok_or_else(|| QeccError::TableFormat("missing code hash".into()))?;
                code_hash = u64::from_str_radix(h, 16).map_err(|_| badnum(h))?;
            }
            "qubits" | "stabilizers" | "nmax" => {
                let t = toks
                    .next()
                    .ok_or_else(|| QeccError::TableFormat(format!("missing {head} value")))?;
                let v: usize = t.parse().map_err(|_| badnum(t))?;
                match head {
                    "qubits" => n_qubits = Some(v),
                    "stabilizers" => n_stabs = Some(v),
                    _ => n_max = Some(v),
                }
            }
            "gauge" => {
                let t = toks.next().unwrap_or("0");
                gauge_copies = t == "1";
            }
            "cstar" => {
                let s = usize::from_str_radix(field(toks.next(), "s")?, 16)
                    .map_err(|_| badnum(line))?;
                let x = Mask::from_str_radix(field(toks.next(), "x")?, 16)
                    .map_err(|_| badnum(line))?;
                let z = Mask::from_str_radix(field(toks.next(), "z")?, 16)
                    .map_err(|_| badnum(line))?;
                cstar_lines.push((s, x, z));
            }
            _ if head.starts_with("s=") => {
                let s = usize::from_str_radix(field(Some(head), "s")?, 16)
                    .map_err(|_| badnum(line))?;
                let l: LogicalClass = field(toks.next(), "l")?.parse()?;
                let nx: u8 = field(toks.next(), "nx")?.parse().map_err(|_| badnum(line))?;
                let ny: u8 = field(toks.next(), "ny")?.parse().map_err(|_| badnum(line))?;
                let nz: u8 = field(toks.next(), "nz")?.parse().map_err(|_| badnum(line))?;
                let count: u64 = field(toks.next(), "count")?
                    .parse()
                    .map_err(|_| badnum(line))?;
                entries.push((s, l.index(), (nx, ny, nz), count));
            }
            other => {
                return Err(QeccError::TableFormat(format!("unknown line `{other}`")));
            }
        }
    }
    if !saw_end {
        return Err(QeccError::TableFormat("missing `end` marker (truncated file?)".into()));
    }

    let n_qubits = n_qubits.ok_or_else(|| QeccError::TableFormat("missing `qubits`".into()))?;
    let n_stabs = n_stabs.ok_or_else(|| QeccError::TableFormat("missing `stabilizers`".into()))?;
    let n_max = n_max.ok_or_else(|| QeccError::TableFormat("missing `nmax`".into()))?;
    if code_name.is_empty() {
        return Err(QeccError::TableFormat("missing `code` line".into()));
    }
    let n_synd = 1usize << n_stabs;
    let mut cstar = vec![None; n_synd];
    for (s, x, z) in cstar_lines {
        if s >= n_synd {
            return Err(QeccError::TableFormat(format!("cstar syndrome {s:x} out of range")));
        }
        cstar[s] = Some(
            PauliOperator::new(n_qubits, x, z)
                .map_err(|e| QeccError::TableFormat(e.to_string()))?,
        );
    }
    let mut tensors = vec![CoefficientTensor::default(); n_synd * 4];
    for (s, l, key, count) in entries {
        if s >= n_synd {
            return Err(QeccError::TableFormat(format!("syndrome {s:x} out of range")));
        }
        tensors[s * 4 + l].entries.push((key, count));
    }
    for t in &mut tensors {
        t.entries.sort_unstable_by_key(|(k, _)| *k);
    }
    Ok(DecoderTable {
        code_name,
        code_hash,
        n_qubits,
        n_stabs,
        n_max,
        gauge_copies,
        cstar,
        tensors,
    })
}

/// Loads a table and refuses it unless it was built for exactly this code.
pub fn load_table_for(path: &Path, code: &StabilizerCode) -> Result<DecoderTable> {
    let table = load_table(path)?;
    if table.code_name != code.name || table.code_hash != code.content_hash() {
        return Err(QeccError::TableHashMismatch {
            found_name: table.code_name,
            found_hash: table.code_hash,
            want_name: code.name.clone(),
            want_hash: code.content_hash(),
        });
    }
    Ok(table)
}
