//! Parameter sweeps, crossover finding, region-of-correctability scans and
//! code comparisons, all emitting one flat CSV schema.

use crate::catalog::StabilizerCode;
use crate::decoder::{
    success_probability_noisy, success_probability_perfect, DecoderTable, Semantics,
};
use crate::error::{QeccError, Result};
use crate::noise::{
    correcting_power, make_depolarizing, make_independent_total, raw_failure_rate,
    CorrectingPower, EvaluationResult, NoiseKind, NoiseModel,
};
use rayon::prelude::*;
use std::fmt;

/// A 1-D parameter grid.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn linear(min: f64, max: f64, steps: usize) -> GridSpec {
        GridSpec { min, max, steps, log: false }
    }
    pub fn logarithmic(min: f64, max: f64, steps: usize) -> GridSpec {
        GridSpec { min, max, steps, log: true }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.steps.max(1);
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum QSpec {
    Fixed(f64),
    Grid(GridSpec),
}

/// One sweep over the physical error rate, optionally crossed with a q grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub code: String,
    pub kind: NoiseKind,
    pub alpha: f64,
    pub p_grid: GridSpec,
    pub q: QSpec,
    pub n_max: Option<usize>,
    pub gate_overhead: Option<f64>,
    pub semantics: Semantics,
}

/// The flat output schema shared by every experiment.
pub const CSV_HEADER: &str = "code,noise,alpha,p,q,n_max,P_d,p_L,C,C_prime,lower_bound";

#[derive(Debug, Clone)]
pub struct CsvRow {
    pub code: String,
    pub noise: NoiseKind,
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub n_max: usize,
    pub p_d: f64,
    pub p_l: f64,
    pub c: CorrectingPower,
    pub c_prime: Option<CorrectingPower>,
    pub lower_bound: bool,
}

impl fmt::Display for CsvRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cp = match &self.c_prime {
            Some(c) => c.to_string(),
            None => String::new(),
        };
        write!(
            f,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.code,
            self.noise,
            self.alpha,
            self.p,
            self.q,
            self.n_max,
            self.p_d,
            self.p_l,
            self.c,
            cp,
            self.lower_bound as u8
        )
    }
}

/// Noise model at total physical rate p for the given channel shape.
pub fn noise_at(kind: NoiseKind, alpha: f64, p: f64, q: f64) -> Result<NoiseModel> {
    match kind {
        NoiseKind::Depolarizing => make_depolarizing(p, q),
        NoiseKind::Independent => make_independent_total(p, alpha, q),
    }
}

/// P_d / p_L / C (and optionally C') at one operating point.
pub fn evaluate_point(
    table: &DecoderTable,
    noise: &NoiseModel,
    semantics: Semantics,
    gate_overhead: Option<f64>,
) -> Result<EvaluationResult> {
    let p_d = if noise.q == 0.0 {
        success_probability_perfect(table, noise)
    } else {
        success_probability_noisy(table, noise, semantics)
    };
    let p_l = 1.0 - p_d;
    let c = correcting_power(p_l, noise);
    let c_prime = match gate_overhead {
        None => None,
        Some(o) => Some(modified_correcting_power(table, noise, o, semantics)?),
    };
    Ok(EvaluationResult {
        p_d,
        p_l,
        correcting_power: c,
        modified_correcting_power: c_prime,
        lower_bound: !table.exact(),
    })
}

/// C' = (1 - (1-p)(1-q)) / p_L(p + gate_overhead, q): the numerator keeps
/// the bare memory failure rate, the denominator charges the decoder for
/// the extra gate noise of the encoded circuit.
pub fn modified_correcting_power(
    table: &DecoderTable,
    noise: &NoiseModel,
    gate_overhead: f64,
    semantics: Semantics,
) -> Result<CorrectingPower> {
    let inflated = noise.with_rate_overhead(gate_overhead)?;
    let p_d = if inflated.q == 0.0 {
        success_probability_perfect(table, &inflated)
    } else {
        success_probability_noisy(table, &inflated, semantics)
    };
    let p_l = 1.0 - p_d;
    if p_l <= 0.0 {
        Ok(CorrectingPower::Unbounded)
    } else {
        Ok(CorrectingPower::Finite(raw_failure_rate(noise) / p_l))
    }
}

/// Evaluates the sweep grid; rows appear in grid order (q-major, then p).
pub fn sweep_physical_rate(
    code: &StabilizerCode,
    table: &DecoderTable,
    spec: &SweepSpec,
) -> Result<Vec<CsvRow>> {
    let qs = match &spec.q {
        QSpec::Fixed(q) => vec![*q],
        QSpec::Grid(g) => g.points(),
    };
    let ps = spec.p_grid.points();
    let points: Vec<(f64, f64)> = qs
        .iter()
        .flat_map(|&q| ps.iter().map(move |&p| (p, q)))
        .collect();
    points
        .par_iter()
        .map(|&(p, q)| {
            let noise = noise_at(spec.kind, spec.alpha, p, q)?;
            let r = evaluate_point(table, &noise, spec.semantics, spec.gate_overhead)?;
            Ok(CsvRow {
                code: code.name.clone(),
                noise: spec.kind,
                alpha: spec.alpha,
                p,
                q,
                n_max: table.n_max,
                p_d: r.p_d,
                p_l: r.p_l,
                c: r.correcting_power,
                c_prime: r.modified_correcting_power,
                lower_bound: r.lower_bound,
            })
        })
        .collect()
}

fn c_value(table: &DecoderTable, kind: NoiseKind, alpha: f64, p: f64, q: f64, semantics: Semantics) -> Result<f64> {
    let noise = noise_at(kind, alpha, p, q)?;
    let r = evaluate_point(table, &noise, semantics, None)?;
    Ok(r.correcting_power.finite().unwrap_or(f64::INFINITY))
}

/// Finds p* with C(p*) = target_C by bracketing on a log grid and bisecting
/// to |dp| <= 1e-6 (comfortably inside the 1e-5 contract).
pub fn find_crossover(
    table: &DecoderTable,
    kind: NoiseKind,
    alpha: f64,
    q: f64,
    target_c: f64,
    semantics: Semantics,
) -> Result<f64> {
    let (lo_p, hi_p) = (1e-4, 0.5);
    let grid = GridSpec::logarithmic(lo_p, hi_p, 81).points();
    let vals: Vec<f64> = grid
        .iter()
        .map(|&p| c_value(table, kind, alpha, p, q, semantics))
        .collect::<Result<_>>()?;
    let mut bracket = None;
    for i in 0..grid.len() - 1 {
        let (a, b) = (vals[i] - target_c, vals[i + 1] - target_c);
        if a == 0.0 {
            return Ok(grid[i]);
        }
        if a > 0.0 && b <= 0.0 {
            bracket = Some((grid[i], grid[i + 1]));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or(QeccError::NoBracket {
        target: target_c,
        lo: lo_p,
        hi: hi_p,
    })?;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if c_value(table, kind, alpha, mid, q, semantics)? - target_c > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grid of (p, q) operating points plus the extracted C = 1 contour.
#[derive(Debug, Clone)]
pub struct RegionResult {
    pub rows: Vec<CsvRow>,
    /// Polylines (p, q) along which C = 1, from marching squares with
    /// linear interpolation.
    pub contour: Vec<Vec<(f64, f64)>>,
}

pub fn scan_region(
    code: &StabilizerCode,
    table: &DecoderTable,
    kind: NoiseKind,
    alpha: f64,
    p_grid: &GridSpec,
    q_grid: &GridSpec,
    semantics: Semantics,
) -> Result<RegionResult> {
    let spec = SweepSpec {
        code: code.name.clone(),
        kind,
        alpha,
        p_grid: *p_grid,
        q: QSpec::Grid(*q_grid),
        n_max: Some(table.n_max),
        gate_overhead: None,
        semantics,
    };
    let rows = sweep_physical_rate(code, table, &spec)?;
    let ps = p_grid.points();
    let qs = q_grid.points();
    // rows are q-major: index q_i * len(ps) + p_i
    let values: Vec<f64> = rows
        .iter()
        .map(|r| r.c.finite().unwrap_or(f64::INFINITY))
        .collect();
    let contour = contour_lines(&ps, &qs, &values, 1.0);
    Ok(RegionResult { rows, contour })
}

/// Result of comparing two codes on a common grid.
#[derive(Debug, Clone)]
pub struct CompareResult {
    /// Polylines (p, q) where C_a = C_b.
    pub contour: Vec<Vec<(f64, f64)>>,
    /// True when the difference vanishes on the whole grid (e.g. a code
    /// compared against itself).
    pub degenerate: bool,
}

pub fn compare_codes(
    code_a: &StabilizerCode,
    table_a: &DecoderTable,
    code_b: &StabilizerCode,
    table_b: &DecoderTable,
    kind: NoiseKind,
    alpha: f64,
    p_grid: &GridSpec,
    q_grid: &GridSpec,
    semantics: Semantics,
) -> Result<CompareResult> {
    let ra = scan_region(code_a, table_a, kind, alpha, p_grid, q_grid, semantics)?;
    let rb = scan_region(code_b, table_b, kind, alpha, p_grid, q_grid, semantics)?;
    let diff: Vec<f64> = ra
        .rows
        .iter()
        .zip(&rb.rows)
        .map(|(a, b)| {
            let ca = a.c.finite().unwrap_or(f64::INFINITY);
            let cb = b.c.finite().unwrap_or(f64::INFINITY);
            if ca == cb {
                0.0
            } else {
                ca - cb
            }
        })
        .collect();
    let degenerate = diff.iter().all(|d| d.abs() < 1e-12);
    let contour = if degenerate {
        Vec::new()
    } else {
        contour_lines(&p_grid.points(), &q_grid.points(), &diff, 0.0)
    };
    Ok(CompareResult { contour, degenerate })
}

/// Marching-squares level-set extraction on a rectilinear grid.
/// `values[qi * ps.len() + pi]` is the field at (ps[pi], qs[qi]).
pub fn contour_lines(ps: &[f64], qs: &[f64], values: &[f64], level: f64) -> Vec<Vec<(f64, f64)>> {
    let np = ps.len();
    let nq = qs.len();
    let v = |pi: usize, qi: usize| values[qi * np + pi] - level;
    let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();

    let interp = |a: f64, b: f64, xa: f64, xb: f64| -> f64 {
        if !a.is_finite() {
            return xa;
        }
        if !b.is_finite() {
            return xb;
        }
        let t = a / (a - b);
        xa + t.clamp(0.0, 1.0) * (xb - xa)
    };

    for qi in 0..nq.saturating_sub(1) {
        for pi in 0..np.saturating_sub(1) {
            let corners = [
                v(pi, qi),
                v(pi + 1, qi),
                v(pi + 1, qi + 1),
                v(pi, qi + 1),
            ];
            // Edge crossings: bottom, right, top, left.
            let mut pts: Vec<(f64, f64)> = Vec::new();
            let edges = [
                (0usize, 1usize),
                (1, 2),
                (2, 3),
                (3, 0),
            ];
            let coords = [
                (ps[pi], qs[qi]),
                (ps[pi + 1], qs[qi]),
                (ps[pi + 1], qs[qi + 1]),
                (ps[pi], qs[qi + 1]),
            ];
            for (i, j) in edges {
                let (a, b) = (corners[i], corners[j]);
                if (a > 0.0) != (b > 0.0) {
                    let (xa, ya) = coords[i];
                    let (xb, yb) = coords[j];
                    let t = interp(a, b, 0.0, 1.0);
                    pts.push((xa + t * (xb - xa), ya + t * (yb - ya)));
                }
            }
            match pts.len() {
                2 => segments.push((pts[0], pts[1])),
                4 => {
                    // Saddle: resolve with the cell-center sign.
                    let center: f64 = corners.iter().filter(|c| c.is_finite()).sum::<f64>() / 4.0;
                    if (center > 0.0) == (corners[0] > 0.0) {
                        segments.push((pts[0], pts[3]));
                        segments.push((pts[1], pts[2]));
                    } else {
                        segments.push((pts[0], pts[1]));
                        segments.push((pts[2], pts[3]));
                    }
                }
                _ => {}
            }
        }
    }
    chain_segments(segments)
}

fn keyed(p: (f64, f64)) -> (i64, i64) {
    ((p.0 * 1e12).round() as i64, (p.1 * 1e12).round() as i64)
}

fn chain_segments(mut segments: Vec<((f64, f64), (f64, f64))>) -> Vec<Vec<(f64, f64)>> {
    let mut polylines = Vec::new();
    while let Some((a, b)) = segments.pop() {
        let mut line = vec![a, b];
        loop {
            let head = keyed(*line.last().unwrap());
            let tail = keyed(line[0]);
            let mut extended = false;
            let mut i = 0;
            while i < segments.len() {
                let (s, e) = segments[i];
                if keyed(s) == head {
                    line.push(e);
                } else if keyed(e) == head {
                    line.push(s);
                } else if keyed(s) == tail {
                    line.insert(0, e);
                } else if keyed(e) == tail {
                    line.insert(0, s);
                } else {
                    i += 1;
                    continue;
                }
                segments.swap_remove(i);
                extended = true;
                break;
            }
            if !extended {
                break;
            }
        }
        polylines.push(line);
    }
    polylines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_code;
    use crate::decoder::{build_decoder_table, BuildConfig};

    #[test]
    fn grid_points() {
        let g = GridSpec::linear(0.0, 1.0, 5);
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = GridSpec::logarithmic(1e-3, 1e-1, 3).points();
        assert!((g[1] - 1e-2).abs() < 1e-12);
    }

    #[test]
    fn rows_are_self_consistent() {
        let code = get_code("S7").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let spec = SweepSpec {
            code: code.name.clone(),
            kind: NoiseKind::Depolarizing,
            alpha: 0.0,
            p_grid: GridSpec::logarithmic(1e-3, 0.2, 7),
            q: QSpec::Fixed(0.0),
            n_max: None,
            gate_overhead: Some(0.003),
            semantics: Semantics::Strict,
        };
        let rows = sweep_physical_rate(&code, &table, &spec).unwrap();
        assert_eq!(rows.len(), 7);
        for r in rows {
            assert!((r.p_l - (1.0 - r.p_d)).abs() < 1e-15);
            if let Some(c) = r.c.finite() {
                assert!((c - r.p / r.p_l).abs() < 1e-12 * c.max(1.0));
            }
            assert!(!r.lower_bound);
        }
    }

    #[test]
    fn crossover_against_known_point() {
        let code = get_code("S7").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let p = find_crossover(
            &table,
            NoiseKind::Depolarizing,
            0.0,
            0.0,
            1.0,
            Semantics::Strict,
        )
        .unwrap();
        assert!((p - 0.0554).abs() < 0.002, "p* = {p}");
        // No crossover under symmetric independent noise.
        assert!(matches!(
            find_crossover(&table, NoiseKind::Independent, 1.0, 0.0, 1.0, Semantics::Strict),
            Err(QeccError::NoBracket { .. })
        ));
    }

    #[test]
    fn self_comparison_is_degenerate() {
        let code = get_code("S5").unwrap();
        let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
        let pg = GridSpec::linear(0.01, 0.1, 4);
        let qg = GridSpec::linear(0.0, 0.004, 3);
        let r = compare_codes(
            &code, &table, &code, &table,
            NoiseKind::Depolarizing, 0.0, &pg, &qg, Semantics::Strict,
        )
        .unwrap();
        assert!(r.degenerate);
        assert!(r.contour.is_empty());
    }

    #[test]
    fn contour_of_linear_field() {
        // f(p, q) = p, level 0.5: a vertical line at p = 0.5.
        let ps = vec![0.0, 0.5, 1.0];
        let qs = vec![0.0, 1.0];
        let values: Vec<f64> = qs.iter().flat_map(|_| ps.iter().copied()).collect();
        let lines = contour_lines(&ps, &qs, &values, 0.25);
        assert_eq!(lines.len(), 1);
        for (p, _) in &lines[0] {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }
}
