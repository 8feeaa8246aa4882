//! Band-filling sweeps: uniform-hopping reference and one GA run per filling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{evaluate, ConcurrenceReport, Hoppings};
use crate::ga::{run_ga, Execution, GaConfig, GaRunRecord};
use crate::lattice::Lattice;

/// One CSV row. The optimized columns are empty for reference-only sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub x: f64,
    pub c_nn_ordered: f64,
    pub c_nn_optimized: Option<f64>,
    pub generation_of_best: Option<usize>,
    pub degenerate_ordered: bool,
    pub degenerate_optimized: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepResult {
    pub lattice: String,
    pub n_sites: usize,
    /// GA settings shared by every filling; each run uses `rng_seed ^ n`.
    pub config: Option<GaConfig>,
    pub rows: Vec<SweepRow>,
}

/// Sorted, deduplicated fillings, all within `0..=n_sites`.
pub fn normalize_fillings(fillings: &[usize], n_sites: usize) -> Result<Vec<usize>> {
    let mut out = fillings.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&n) = out.last().filter(|&&n| n > n_sites) {
        return Err(Error::FillingOutOfRange { n, n_sites });
    }
    Ok(out)
}

pub fn all_fillings(n_sites: usize) -> Vec<usize> {
    (0..=n_sites).collect()
}

/// Every `stride`-th filling, always keeping both ends.
pub fn subsampled_fillings(n_sites: usize, stride: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..=n_sites).step_by(stride.max(1)).collect();
    if out.last() != Some(&n_sites) {
        out.push(n_sites);
    }
    out
}

/// All hoppings at `t = -1`.
pub fn ordered_reference(lattice: &Lattice, n: usize) -> Result<ConcurrenceReport> {
    evaluate(lattice, &Hoppings::uniform(lattice.n_edges(), -1.0), n)
}

pub fn filling_seed(seed: u64, n: usize) -> u64 {
    seed ^ n as u64
}

pub fn sweep_row(
    lattice: &Lattice,
    n: usize,
    config: Option<&GaConfig>,
    execution: Execution,
) -> Result<(SweepRow, Option<GaRunRecord>)> {
    let ordered = ordered_reference(lattice, n)?;
    let record = match config {
        Some(cfg) => {
            let cfg = GaConfig {
                rng_seed: filling_seed(cfg.rng_seed, n),
                ..cfg.clone()
            };
            Some(run_ga(lattice, n, &cfg, execution)?)
        }
        None => None,
    };
    let row = SweepRow {
        n,
        x: n as f64 / lattice.n_sites() as f64,
        c_nn_ordered: ordered.c_nn,
        c_nn_optimized: record.as_ref().map(|r| r.best_fitness),
        generation_of_best: record.as_ref().map(|r| r.best_generation),
        degenerate_ordered: ordered.degenerate,
        degenerate_optimized: record.as_ref().map(|r| r.degenerate_best),
    };
    Ok((row, record))
}

/// Runs every filling and hands each finished row to `sink` in filling
/// order. In parallel mode fillings are processed in batches of the pool
/// size, so rows reach the sink while later batches are still running.
pub fn sweep_band_filling(
    lattice: &Lattice,
    config: Option<&GaConfig>,
    fillings: &[usize],
    execution: Execution,
    sink: &mut dyn FnMut(&SweepRow, Option<&GaRunRecord>) -> Result<()>,
) -> Result<SweepResult> {
    if let Some(cfg) = config {
        cfg.validate(lattice.n_edges())?;
    }
    let fillings = normalize_fillings(fillings, lattice.n_sites())?;
    let batch = match execution {
        Execution::Serial => 1,
        Execution::Parallel => rayon::current_num_threads().max(1),
    };
    let mut rows = Vec::with_capacity(fillings.len());
    for chunk in fillings.chunks(batch) {
        let done: Vec<_> = match execution {
            Execution::Serial => chunk
                .iter()
                .map(|&n| sweep_row(lattice, n, config, execution))
                .collect::<Result<_>>()?,
            Execution::Parallel => chunk
                .par_iter()
                .map(|&n| sweep_row(lattice, n, config, execution))
                .collect::<Result<_>>()?,
        };
        for (row, record) in done {
            sink(&row, record.as_ref())?;
            rows.push(row);
        }
    }
    Ok(SweepResult {
        lattice: lattice.name().to_string(),
        n_sites: lattice.n_sites(),
        config: config.cloned(),
        rows,
    })
}

/// Pointwise maximum of the optimized column across sweeps over the same
/// lattice and fillings.
pub fn combine(results: &[SweepResult]) -> Result<SweepResult> {
    let (first, rest) = results
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("nothing to combine".into()))?;
    for r in rest {
        let same_rows = r.rows.len() == first.rows.len()
            && r.rows.iter().zip(&first.rows).all(|(a, b)| a.n == b.n);
        if r.lattice != first.lattice || r.n_sites != first.n_sites || !same_rows {
            return Err(Error::InvalidConfig(format!(
                "cannot combine sweeps over {} and {}",
                first.lattice, r.lattice
            )));
        }
    }
    let rows = (0..first.rows.len())
        .map(|k| {
            let mut best = first.rows[k].clone();
            for r in rest {
                let cand = &r.rows[k];
                if cand.c_nn_optimized.unwrap_or(f64::NEG_INFINITY)
                    > best.c_nn_optimized.unwrap_or(f64::NEG_INFINITY)
                {
                    best = cand.clone();
                }
            }
            best
        })
        .collect();
    Ok(SweepResult {
        lattice: first.lattice.clone(),
        n_sites: first.n_sites,
        config: None,
        rows,
    })
}
