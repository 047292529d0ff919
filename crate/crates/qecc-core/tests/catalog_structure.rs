//! Structural invariants of the shipped code catalog.

use qecc_core::*;
use std::collections::BTreeSet;

fn all_codes() -> Vec<StabilizerCode> {
    Catalog::builtin().codes().to_vec()
}

#[test]
fn every_catalog_code_validates() {
    for code in all_codes() {
        let rep = validate_code(&code);
        assert!(rep.is_ok(), "{}: {:?}", code.name, rep.failures);
        assert_eq!(code.logical_qubits(), Some(1), "{}", code.name);
    }
}

#[test]
fn expected_shapes() {
    let cat = Catalog::builtin();
    let s9 = cat.get("S9").unwrap();
    assert_eq!((s9.n_qubits, s9.n_stabilizers()), (9, 8));
    let c11 = cat.get("C11").unwrap();
    assert_eq!((c11.n_qubits, c11.n_stabilizers()), (11, 10));
    // Two 6-body and eight 4-body generators.
    let mut weights: Vec<u32> = c11
        .stabilizer_generators
        .iter()
        .map(|s| s.weight())
        .collect();
    weights.sort_unstable();
    assert_eq!(weights, vec![4, 4, 4, 4, 4, 4, 4, 4, 6, 6]);
    let gcc = cat.get("GCC15").unwrap();
    assert_eq!((gcc.n_qubits, gcc.n_stabilizers()), (15, 8));
    assert_eq!(gcc.gauge.as_ref().unwrap().gauge_generators.len(), 36);
}

#[test]
fn surface_and_color_codes_are_css() {
    for code in all_codes() {
        if code.name == "GCC15" {
            continue;
        }
        for s in &code.stabilizer_generators {
            assert!(
                s.x_mask == 0 || s.z_mask == 0,
                "{}: mixed generator ({:x},{:x})",
                code.name,
                s.x_mask,
                s.z_mask
            );
        }
    }
}

fn swapped_set(ops: &[PauliOperator]) -> BTreeSet<(u32, u32)> {
    ops.iter().map(|o| (o.z_mask, o.x_mask)).collect()
}

fn mask_set(ops: &[PauliOperator]) -> BTreeSet<(u32, u32)> {
    ops.iter().map(|o| (o.x_mask, o.z_mask)).collect()
}

#[test]
fn color_and_gauge_codes_are_xz_symmetric() {
    let cat = Catalog::builtin();
    for name in ["C7", "C11", "GCC15"] {
        let code = cat.get(name).unwrap();
        assert_eq!(
            mask_set(&code.stabilizer_generators),
            swapped_set(&code.stabilizer_generators),
            "{name}: stabilizer set not closed under X<->Z swap"
        );
        let logicals = [code.logical_x, code.logical_z];
        assert_eq!(mask_set(&logicals), swapped_set(&logicals), "{name}: logicals");
        if let Some(g) = &code.gauge {
            assert_eq!(
                mask_set(&g.gauge_generators),
                swapped_set(&g.gauge_generators),
                "{name}: gauge generators"
            );
        }
    }
}

/// S9 is S13 with the four corner qubits (and one incident face per
/// corner) removed: truncating every S13 generator to the surviving nine
/// qubits reproduces each of the eight S9 generators exactly once, and the
/// four leftovers (the truncated corner faces) match none of them.
#[test]
fn s9_is_a_projection_of_s13() {
    let cat = Catalog::builtin();
    let s9 = cat.get("S9").unwrap();
    let s13 = cat.get("S13").unwrap();
    // Qubit k of S9 is qubit MAP[k] of S13.
    const MAP: [usize; 9] = [5, 3, 1, 8, 6, 4, 11, 9, 7];
    let project = |m: u32| -> u32 {
        MAP.iter()
            .enumerate()
            .map(|(k, &q)| ((m >> q) & 1) << k)
            .sum()
    };
    let s9_set = mask_set(&s9.stabilizer_generators);
    let mut matched = BTreeSet::new();
    let mut dropped = 0;
    for g in &s13.stabilizer_generators {
        let pg = (project(g.x_mask), project(g.z_mask));
        if s9_set.contains(&pg) {
            assert!(matched.insert(pg), "S9 generator hit twice: {pg:?}");
        } else {
            dropped += 1;
        }
    }
    assert_eq!(matched, s9_set, "every S9 generator is an S13 truncation");
    assert_eq!(dropped, 4, "one dropped face per removed corner");
}

#[test]
fn gauge_pairs_multiply_to_their_stabilizers() {
    let code = get_code("GCC15").unwrap();
    let g = code.gauge.as_ref().unwrap();
    assert_eq!(g.stabilizer_pairs.len(), 24); // 3 per stabilizer
    for &(k, i, j) in &g.stabilizer_pairs {
        let s = &code.stabilizer_generators[k];
        let gi = &g.gauge_generators[i];
        let gj = &g.gauge_generators[j];
        assert_eq!(gi.x_mask ^ gj.x_mask, s.x_mask);
        assert_eq!(gi.z_mask ^ gj.z_mask, s.z_mask);
    }
}

/// Error-free gauge readout of a physical error reproduces its stabilizer
/// syndrome in all three copies, for every error of weight <= 2.
#[test]
fn gauge_readout_reproduces_syndromes() {
    let code = get_code("GCC15").unwrap();
    let g = code.gauge.as_ref().unwrap();
    for e in enumerate_errors(code.n_qubits, 2) {
        let mut outcomes = 0u64;
        for (i, gg) in g.gauge_generators.iter().enumerate() {
            outcomes |= (gg.symplectic_product(&e).unwrap() as u64) << i;
        }
        let copies = reconstruct_stabilizers_from_gauges(&code, outcomes).unwrap();
        let s = compute_syndrome(&code, &e).unwrap();
        assert_eq!(copies, [s, s, s], "error ({:x},{:x})", e.x_mask, e.z_mask);
    }
}

#[test]
fn brute_force_distances() {
    let cat = Catalog::builtin();
    for (name, want) in [
        ("S5", (2, 2, 2)),
        ("S9", (3, 3, 3)),
        ("S9b", (1, 3, 1)),
        ("C7", (3, 3, 3)),
        ("REP3", (3, 1, 1)),
    ] {
        let code = cat.get(name).unwrap();
        assert_eq!(code_distance(code), want, "{name}");
    }
}
