//! `tbconc`: band-filling sweeps, GA runs, dimerized-chain tables, motif
//! structures and SVG drawings. Every output is a pure function of the
//! command line.

mod lattice_arg;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tbconc::io::{
    load_ga_config, read_json, read_run_json, write_json, write_run_json, write_ssh_csv,
    write_sweep_csv, write_text, SweepCsvWriter,
};
use tbconc::oracle::random_equivalence;
use tbconc::ssh::{self, locate_weak_bond_vanishing, ssh_sweep};
use tbconc::sweep::{all_fillings, subsampled_fillings};
use tbconc::{
    combine, evaluate, render_structure_svg, run_ga, seed_motif, sweep_band_filling, Chromosome,
    Execution, GaConfig, Lattice, MotifKind, SweepResult,
};

#[derive(Parser)]
#[command(
    name = "tbconc",
    version,
    about = "Nearest-neighbor concurrence of tight-binding lattices"
)]
struct Cli {
    /// Evaluate fitness on one thread. Outputs are identical either way.
    #[arg(long, global = true)]
    serial: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uniform-hopping reference and one GA run per band filling.
    Sweep(SweepArgs),
    /// One GA run at a fixed filling.
    Optimize(OptimizeArgs),
    /// Bond orders, concurrences and energy derivatives of the dimerized chain.
    SshSweep(SshArgs),
    /// Structured chromosome from a disjoint block cover.
    Motif(MotifArgs),
    /// Draw a chromosome as SVG.
    Render(RenderArgs),
    /// Compare the Wick route with many-body exact diagonalization.
    OracleCheck(OracleArgs),
    /// Pointwise maximum of several sweeps over the same lattice.
    Combine(CombineArgs),
}

#[derive(Args)]
struct LatticeArgs {
    /// Built-in lattice (ring, square, square-open, kagome, betts, triangular) or a lattice JSON file.
    #[arg(long, default_value = "ring")]
    lattice: String,
    /// Site count for rings, `LXxLY` sites or `CXxCY` cells otherwise.
    #[arg(long)]
    size: Option<String>,
}

impl LatticeArgs {
    fn build(&self) -> Result<Lattice> {
        lattice_arg::resolve(&self.lattice, self.size.as_deref())
    }
}

#[derive(Args)]
struct MotifValues {
    /// Hopping on motif bonds.
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    strong: f64,
    /// Hopping on the remaining bonds.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    weak: f64,
}

#[derive(Args)]
struct GaArgs {
    /// GA configuration JSON; the flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    crossover: Option<f64>,
    /// Per-gene mutation probability (default 1/L).
    #[arg(long)]
    mutation: Option<f64>,
    /// Individuals initialized with every hopping at 0.
    #[arg(long)]
    seed_zero: Option<usize>,
    /// Individuals initialized with every hopping at the range minimum.
    #[arg(long)]
    seed_full: Option<usize>,
    /// Seed the population with copies of this motif.
    #[arg(long)]
    motif: Option<MotifKind>,
    /// Motif copies (default: every slot not taken by other seeds).
    #[arg(long)]
    motif_count: Option<usize>,
    #[command(flatten)]
    motif_values: MotifValues,
    /// Copy the best individual back into every new generation.
    #[arg(long)]
    reinject_best: bool,
}

impl GaArgs {
    fn config(&self, lattice: &Lattice) -> Result<GaConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_ga_config(path)?,
            None => GaConfig::default(),
        };
        if let Some(v) = self.pop {
            cfg.population_size = v;
        }
        if let Some(v) = self.gens {
            cfg.generations = v;
        }
        if let Some(v) = self.seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = self.crossover {
            cfg.crossover_prob = v;
        }
        if self.mutation.is_some() {
            cfg.mutation_rate = self.mutation;
        }
        if let Some(v) = self.seed_zero {
            cfg.seed_count_zero = v;
        }
        if let Some(v) = self.seed_full {
            cfg.seed_count_full = v;
        }
        if let Some(kind) = self.motif {
            let m = &self.motif_values;
            cfg.seed_motif = Some(seed_motif(lattice, kind, m.strong, m.weak)?);
            cfg.seed_count_motif = self.motif_count;
        }
        cfg.reinject_best |= self.reinject_best;
        cfg.validate(lattice.n_edges())?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Comma-separated fillings (default: every filling 0..=N).
    #[arg(long = "filling", value_delimiter = ',')]
    fillings: Vec<usize>,
    /// Keep every `stride`-th filling (both band edges are always kept).
    #[arg(long, conflicts_with = "fillings")]
    stride: Option<usize>,
    /// Skip the GA; only the uniform-hopping column is computed.
    #[arg(long)]
    ordered_only: bool,
    /// Also write every per-filling run record.
    #[arg(long)]
    keep_runs: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    ga: GaArgs,
    #[arg(long)]
    filling: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SshArgs {
    /// Unit cells on the momentum grid.
    #[arg(long, default_value_t = ssh::DEFAULT_CELLS)]
    cells: usize,
    /// Finite-difference step in alpha.
    #[arg(long, default_value_t = ssh::DEFAULT_STEP)]
    step: f64,
    /// Comma-separated alphas; overrides `--points`.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Evenly spaced alphas on [0, 1].
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct MotifArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long)]
    motif: MotifKind,
    #[command(flatten)]
    values: MotifValues,
    /// Evaluate the structure at this filling.
    #[arg(long)]
    filling: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Run record whose best chromosome is drawn.
    #[arg(
        long,
        conflicts_with = "chromosome",
        required_unless_present = "chromosome"
    )]
    run: Option<PathBuf>,
    /// JSON array of hoppings, one per edge.
    #[arg(long)]
    chromosome: Option<PathBuf>,
    /// Output SVG file.
    #[arg(long, default_value = "structure.svg")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    max_sites: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct CombineArgs {
    /// `sweep.json` files to merge.
    #[arg(required = true, num_args = 2..)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize)]
struct MotifDocument<'a> {
    lattice: &'a str,
    kind: MotifKind,
    strong_t: f64,
    weak_t: f64,
    chromosome: &'a Chromosome,
    filling: Option<usize>,
    c_nn: Option<f64>,
    degenerate: Option<bool>,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn render_if_possible(lattice: &Lattice, chromosome: &Chromosome, path: &Path) -> Result<()> {
    if lattice.coords().is_some() {
        write_text(path, &render_structure_svg(lattice, chromosome)?)?;
    }
    Ok(())
}

fn sweep(args: SweepArgs, execution: Execution) -> Result<()> {
    let lattice = args.lattice.build()?;
    let config = if args.ordered_only {
        None
    } else {
        Some(args.ga.config(&lattice)?)
    };
    let fillings = match (args.fillings.is_empty(), args.stride) {
        (false, _) => args.fillings.clone(),
        (true, Some(stride)) => subsampled_fillings(lattice.n_sites(), stride),
        (true, None) => all_fillings(lattice.n_sites()),
    };
    create_dir(&args.out)?;
    let runs_dir = args.out.join("runs");
    if args.keep_runs && config.is_some() {
        create_dir(&runs_dir)?;
    }
    let mut csv = SweepCsvWriter::create(args.out.join("sweep.csv"))?;
    let result = sweep_band_filling(
        &lattice,
        config.as_ref(),
        &fillings,
        execution,
        &mut |row, record| {
            log::info!(
                "n={} ordered={:.6} optimized={:?}",
                row.n,
                row.c_nn_ordered,
                row.c_nn_optimized
            );
            csv.write_row(row)?;
            if let (true, Some(rec)) = (args.keep_runs, record) {
                write_run_json(rec, runs_dir.join(format!("n{:04}.json", row.n)))?;
            }
            Ok(())
        },
    )?;
    write_json(&result, args.out.join("sweep.json"))?;
    println!(
        "{}: {} fillings -> {}",
        result.lattice,
        result.rows.len(),
        args.out.join("sweep.csv").display()
    );
    Ok(())
}

fn optimize(args: OptimizeArgs, execution: Execution) -> Result<()> {
    let lattice = args.lattice.build()?;
    let config = args.ga.config(&lattice)?;
    let record = run_ga(&lattice, args.filling, &config, execution)?;
    create_dir(&args.out)?;
    write_run_json(&record, args.out.join("run.json"))?;
    render_if_possible(&lattice, &record.best, &args.out.join("structure.svg"))?;
    println!(
        "{} n={}: best c_nn {:.6} (generation {}{})",
        record.lattice,
        record.filling,
        record.best_fitness,
        record.best_generation,
        if record.degenerate_best {
            ", degenerate"
        } else {
            ""
        }
    );
    Ok(())
}

fn ssh_sweep_cmd(args: SshArgs) -> Result<()> {
    let alphas: Vec<f64> = if args.alphas.is_empty() {
        if args.points < 2 {
            bail!("--points must be at least 2");
        }
        (0..args.points)
            .map(|k| k as f64 / (args.points - 1) as f64)
            .collect()
    } else {
        args.alphas.clone()
    };
    let rows = ssh_sweep(&alphas, args.cells, args.step)?;
    create_dir(&args.out)?;
    write_ssh_csv(&rows, args.out.join("ssh.csv"))?;
    let root = locate_weak_bond_vanishing(args.cells, 1e-6)?;
    let (gamma0, _) = ssh::ssh_bond_orders(0.0, args.cells)?;
    println!("gamma(0) = {gamma0:.6}");
    println!("weak-bond concurrence vanishes at alpha = {root:.5}");
    Ok(())
}

fn motif(args: MotifArgs) -> Result<()> {
    let lattice = args.lattice.build()?;
    let chromosome = seed_motif(&lattice, args.motif, args.values.strong, args.values.weak)?;
    let report = match args.filling {
        Some(n) => Some(evaluate(&lattice, &chromosome, n)?),
        None => None,
    };
    create_dir(&args.out)?;
    let doc = MotifDocument {
        lattice: lattice.name(),
        kind: args.motif,
        strong_t: args.values.strong,
        weak_t: args.values.weak,
        chromosome: &chromosome,
        filling: args.filling,
        c_nn: report.as_ref().map(|r| r.c_nn),
        degenerate: report.as_ref().map(|r| r.degenerate),
    };
    write_json(&doc, args.out.join("motif.json"))?;
    render_if_possible(&lattice, &chromosome, &args.out.join("motif.svg"))?;
    match (report, args.filling) {
        (Some(r), Some(n)) => println!(
            "{} {}: c_nn {:.12} at n={n}",
            lattice.name(),
            args.motif,
            r.c_nn
        ),
        _ => println!("{} {}", lattice.name(), args.motif),
    }
    Ok(())
}

fn render(args: RenderArgs) -> Result<()> {
    let lattice = args.lattice.build()?;
    let chromosome: Chromosome = match (&args.run, &args.chromosome) {
        (Some(run), _) => {
            let record = read_run_json(run)?;
            if record.lattice != lattice.name() {
                log::warn!(
                    "run was recorded on {}, drawing on {}",
                    record.lattice,
                    lattice.name()
                );
            }
            record.best
        }
        (None, Some(path)) => read_json(path)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    write_text(&args.out, &render_structure_svg(&lattice, &chromosome)?)?;
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<()> {
    let cases = random_equivalence(args.trials, args.seed, args.max_sites)?;
    let mut failures = 0;
    for (k, c) in cases.iter().enumerate() {
        let worst = c.comparison.max();
        let ok = worst <= args.tol;
        failures += usize::from(!ok);
        println!(
            "{k:3} {:<10} n={:<2} max|diff|={worst:.3e} {}",
            c.lattice,
            c.filling,
            if ok { "ok" } else { "MISMATCH" }
        );
    }
    if failures > 0 {
        bail!("{failures} of {} cases exceed {:e}", cases.len(), args.tol);
    }
    println!("all {} cases within {:e}", cases.len(), args.tol);
    Ok(())
}

fn combine_cmd(args: CombineArgs) -> Result<()> {
    let results: Vec<SweepResult> = args
        .inputs
        .iter()
        .map(read_json)
        .collect::<tbconc::Result<_>>()?;
    let combined = combine(&results)?;
    create_dir(&args.out)?;
    write_sweep_csv(&combined, args.out.join("sweep.csv"))?;
    write_json(&combined, args.out.join("sweep.json"))?;
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let execution = if cli.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Sweep(args) => sweep(args, execution),
        Command::Optimize(args) => optimize(args, execution),
        Command::SshSweep(args) => ssh_sweep_cmd(args),
        Command::Motif(args) => motif(args),
        Command::Render(args) => render(args),
        Command::OracleCheck(args) => oracle_check(args),
        Command::Combine(args) => combine_cmd(args),
    }
}
