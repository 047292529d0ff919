//! `qecc`: command-line workbench over the exact small-code decoder.
//!
//! Every numeric experiment emits one flat CSV schema
//! (`code,noise,alpha,p,q,n_max,P_d,p_L,C,C_prime,lower_bound`) so a single
//! plotting pipeline consumes all of them. All parameters can also be
//! loaded from a plain-text config file (`key = value`, `#` comments);
//! command-line flags take precedence.

mod config;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use config::Config;
use qecc_core::*;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qecc", version, about = "Exact decoding workbench for small stabilizer codes")]
struct Cli {
    /// Catalog file overriding the built-in code catalog.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Plain-text config file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the codes in the catalog.
    ListCodes,
    /// Check every structural invariant of a code.
    Validate {
        #[arg(long)]
        code: Option<String>,
    },
    /// Brute-force distances (d_x, d_z, d) of a code.
    Distance {
        #[arg(long)]
        code: Option<String>,
    },
    /// Build a decoder table and save it.
    BuildTable(BuildTableArgs),
    /// Evaluate one operating point.
    Eval(EvalArgs),
    /// Sweep the physical error rate.
    Sweep(SweepArgs),
    /// Find the physical rate where C crosses a target.
    Crossover(CrossoverArgs),
    /// Scan a (p, q) grid and extract the C = 1 contour.
    Region(RegionArgs),
    /// Equal-correcting-power contour between two codes.
    Compare(CompareArgs),
    /// Monte Carlo estimate of the logical error rate.
    Mc(McArgs),
}

#[derive(Args, Default)]
struct BuildTableArgs {
    #[arg(long)]
    code: Option<String>,
    /// Truncation weight; default is the exact table.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct NoiseArgs {
    /// depolarizing | independent
    #[arg(long)]
    noise: Option<String>,
    /// Asymmetry ratio p'_z / p'_x (independent noise).
    #[arg(long)]
    alpha: Option<f64>,
    /// Measurement error rate.
    #[arg(long)]
    q: Option<f64>,
    /// strict | class-only success bookkeeping under measurement noise.
    #[arg(long)]
    semantics: Option<String>,
}

#[derive(Args, Default)]
struct TableArgs {
    /// Load a previously saved table instead of building one.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Truncation weight for a freshly built table.
    #[arg(long)]
    n_max: Option<usize>,
    /// Force the exact table even where the default truncates (GCC15 scans).
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Default)]
struct EvalArgs {
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    table: TableArgs,
    /// Physical error rate.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    gate_overhead: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct SweepArgs {
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    table: TableArgs,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Linear p spacing instead of the default log spacing.
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    gate_overhead: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct CrossoverArgs {
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    table: TableArgs,
    /// Target correcting power.
    #[arg(long)]
    target: Option<f64>,
}

#[derive(Args, Default)]
struct GridArgs {
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_steps: Option<usize>,
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long)]
    q_steps: Option<usize>,
}

#[derive(Args, Default)]
struct RegionArgs {
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct CompareArgs {
    #[arg(long)]
    code_a: Option<String>,
    #[arg(long)]
    code_b: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Force exact tables for both codes.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct McArgs {
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    table: TableArgs,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

struct Ctx {
    catalog: Catalog,
    cfg: Config,
}

impl Ctx {
    fn code(&self, name: Option<String>, key: &str) -> anyhow::Result<StabilizerCode> {
        let name = self
            .cfg
            .resolve_required::<String>(name, key)
            .with_context(|| format!("`--{key}` (or config key `{key}`) is required"))?;
        Ok(self.catalog.get(&name)?.clone())
    }

    fn noise_kind(&self, args: &NoiseArgs) -> anyhow::Result<NoiseKind> {
        Ok(self
            .cfg
            .resolve(args.noise.clone(), "noise", "depolarizing".into())?
            .parse::<NoiseKind>()?)
    }

    fn semantics(&self, args: &NoiseArgs) -> anyhow::Result<Semantics> {
        Ok(self
            .cfg
            .resolve(args.semantics.clone(), "semantics", "strict".into())?
            .parse::<Semantics>()?)
    }

    fn alpha(&self, args: &NoiseArgs) -> anyhow::Result<f64> {
        self.cfg.resolve(args.alpha, "alpha", 1.0)
    }

    fn q(&self, args: &NoiseArgs) -> anyhow::Result<f64> {
        self.cfg.resolve(args.q, "q", 0.0)
    }

    /// Default table policy: exact up to 13 qubits, weight-6 truncation
    /// above that unless `--exact` is given.
    fn table(&self, code: &StabilizerCode, args: &TableArgs) -> anyhow::Result<DecoderTable> {
        if let Some(path) = self
            .cfg
            .resolve_opt(args.table.clone(), "table")?
        {
            return Ok(load_table_for(&path, code)?);
        }
        let n_max = match self.cfg.resolve_opt(args.n_max, "n-max")? {
            Some(m) => Some(m),
            None if args.exact || code.n_qubits <= 13 => None,
            None => Some(6),
        };
        let cfg = BuildConfig {
            n_max,
            parallel_partitions: 0,
        };
        Ok(build_decoder_table(code, &cfg)?)
    }
}

fn open_out(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    let catalog = match &cli.catalog {
        Some(p) => Catalog::from_file(p)?,
        None => Catalog::builtin(),
    };
    let ctx = Ctx { catalog, cfg };

    match cli.command {
        Command::ListCodes => {
            println!("{:<8} {:>7} {:>12} {:>7} {:>6}", "name", "qubits", "stabilizers", "gauge", "k");
            for code in ctx.catalog.codes() {
                let gauge = code
                    .gauge
                    .as_ref()
                    .map_or(0, |g| g.gauge_generators.len());
                println!(
                    "{:<8} {:>7} {:>12} {:>7} {:>6}",
                    code.name,
                    code.n_qubits,
                    code.n_stabilizers(),
                    gauge,
                    code.logical_qubits().map_or("?".into(), |k| k.to_string()),
                );
            }
        }
        Command::Validate { code } => {
            let code = ctx.code(code, "code")?;
            let report = validate_code(&code);
            if report.is_ok() {
                println!("{}: ok", code.name);
            } else {
                for f in &report.failures {
                    println!("{}: FAIL: {f}", code.name);
                }
                bail!("{} failed {} check(s)", code.name, report.failures.len());
            }
        }
        Command::Distance { code } => {
            let code = ctx.code(code, "code")?;
            let (dx, dz, d) = code_distance(&code);
            println!("{} d_x={dx} d_z={dz} d={d}", code.name);
        }
        Command::BuildTable(args) => {
            let code = ctx.code(args.code, "code")?;
            let out = ctx
                .cfg
                .resolve_required::<PathBuf>(args.out, "out")
                .context("`--out` is required")?;
            let cfg = BuildConfig {
                n_max: ctx.cfg.resolve_opt(args.n_max, "n-max")?,
                parallel_partitions: 0,
            };
            let table = build_decoder_table(&code, &cfg)?;
            save_table(&table, &out)?;
            println!(
                "wrote {} ({} configurations, n_max={}{})",
                out.display(),
                table.total_count(),
                table.n_max,
                if table.exact() { ", exact" } else { "" }
            );
        }
        Command::Eval(args) => {
            let code = ctx.code(args.code, "code")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let semantics = ctx.semantics(&args.noise)?;
            let alpha = ctx.alpha(&args.noise)?;
            let q = ctx.q(&args.noise)?;
            let p = ctx
                .cfg
                .resolve_required(args.p, "p")
                .context("`--p` is required")?;
            let overhead = ctx.cfg.resolve_opt(args.gate_overhead, "gate-overhead")?;
            let table = ctx.table(&code, &args.table)?;
            let noise = noise_at(kind, alpha, p, q)?;
            let r = evaluate_point(&table, &noise, semantics, overhead)?;
            let row = CsvRow {
                code: code.name.clone(),
                noise: kind,
                alpha,
                p,
                q,
                n_max: table.n_max,
                p_d: r.p_d,
                p_l: r.p_l,
                c: r.correcting_power,
                c_prime: r.modified_correcting_power,
                lower_bound: r.lower_bound,
            };
            let mut w = open_out(&args.out)?;
            writeln!(w, "{CSV_HEADER}")?;
            writeln!(w, "{row}")?;
        }
        Command::Sweep(args) => {
            let code = ctx.code(args.code, "code")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let semantics = ctx.semantics(&args.noise)?;
            let table = ctx.table(&code, &args.table)?;
            let p_min = ctx.cfg.resolve(args.p_min, "p-min", 1e-4)?;
            let p_max = ctx.cfg.resolve(args.p_max, "p-max", 0.2)?;
            let steps = ctx.cfg.resolve(args.steps, "steps", 41)?;
            let spec = SweepSpec {
                code: code.name.clone(),
                kind,
                alpha: ctx.alpha(&args.noise)?,
                p_grid: GridSpec {
                    min: p_min,
                    max: p_max,
                    steps,
                    log: !args.linear,
                },
                q: QSpec::Fixed(ctx.q(&args.noise)?),
                n_max: Some(table.n_max),
                gate_overhead: ctx.cfg.resolve_opt(args.gate_overhead, "gate-overhead")?,
                semantics,
            };
            let rows = sweep_physical_rate(&code, &table, &spec)?;
            let mut w = open_out(&args.out)?;
            writeln!(w, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(w, "{r}")?;
            }
        }
        Command::Crossover(args) => {
            let code = ctx.code(args.code, "code")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let semantics = ctx.semantics(&args.noise)?;
            let table = ctx.table(&code, &args.table)?;
            let target = ctx.cfg.resolve(args.target, "target", 1.0)?;
            let p = find_crossover(
                &table,
                kind,
                ctx.alpha(&args.noise)?,
                ctx.q(&args.noise)?,
                target,
                semantics,
            )?;
            println!("{} {} C={} crossover p={p}", code.name, kind, target);
        }
        Command::Region(args) => {
            let code = ctx.code(args.code, "code")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let semantics = ctx.semantics(&args.noise)?;
            let table = ctx.table(&code, &args.table)?;
            let (p_grid, q_grid) = grids(&ctx, &args.grid)?;
            let r = scan_region(
                &code,
                &table,
                kind,
                ctx.alpha(&args.noise)?,
                &p_grid,
                &q_grid,
                semantics,
            )?;
            let mut w = open_out(&args.out)?;
            writeln!(w, "{CSV_HEADER}")?;
            for row in &r.rows {
                writeln!(w, "{row}")?;
            }
            for line in &r.contour {
                writeln!(w, "# contour C=1")?;
                for (p, q) in line {
                    writeln!(w, "# {p} {q}")?;
                }
            }
        }
        Command::Compare(args) => {
            let code_a = ctx.code(args.code_a, "code-a")?;
            let code_b = ctx.code(args.code_b, "code-b")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let semantics = ctx.semantics(&args.noise)?;
            let targs = TableArgs {
                exact: args.exact,
                ..Default::default()
            };
            let table_a = ctx.table(&code_a, &targs)?;
            let table_b = ctx.table(&code_b, &targs)?;
            let (p_grid, q_grid) = grids(&ctx, &args.grid)?;
            let r = compare_codes(
                &code_a,
                &table_a,
                &code_b,
                &table_b,
                kind,
                ctx.alpha(&args.noise)?,
                &p_grid,
                &q_grid,
                semantics,
            )?;
            let mut w = open_out(&args.out)?;
            if r.degenerate {
                writeln!(w, "# codes have equal correcting power on the whole grid")?;
            }
            writeln!(w, "p,q")?;
            for line in &r.contour {
                for (p, q) in line {
                    writeln!(w, "{p},{q}")?;
                }
                writeln!(w, "# end polyline")?;
            }
        }
        Command::Mc(args) => {
            let code = ctx.code(args.code, "code")?;
            let kind = ctx.noise_kind(&args.noise)?;
            let table = ctx.table(&code, &args.table)?;
            let p = ctx
                .cfg
                .resolve_required(args.p, "p")
                .context("`--p` is required")?;
            let trials = ctx.cfg.resolve(args.trials, "trials", 1_000_000)?;
            let seed = ctx.cfg.resolve(args.seed, "seed", 0)?;
            let noise = noise_at(kind, ctx.alpha(&args.noise)?, p, ctx.q(&args.noise)?)?;
            let est = estimate_logical_error_rate(&code, &table, &noise, trials, seed)?;
            println!(
                "code={} noise={} p={} q={} trials={} failures={} p_l_hat={} std_err={} seed={}",
                code.name,
                kind,
                p,
                noise.q,
                est.trials,
                est.failures,
                est.p_l_hat,
                est.std_err,
                est.seed
            );
        }
    }
    Ok(())
}

fn grids(ctx: &Ctx, args: &GridArgs) -> anyhow::Result<(GridSpec, GridSpec)> {
    let p_grid = GridSpec::linear(
        ctx.cfg.resolve(args.p_min, "p-min", 1e-3)?,
        ctx.cfg.resolve(args.p_max, "p-max", 0.2)?,
        ctx.cfg.resolve(args.p_steps, "p-steps", 40)?,
    );
    let q_grid = GridSpec::linear(
        ctx.cfg.resolve(args.q_min, "q-min", 0.0)?,
        ctx.cfg.resolve(args.q_max, "q-max", 0.01)?,
        ctx.cfg.resolve(args.q_steps, "q-steps", 21)?,
    );
    Ok((p_grid, q_grid))
}
