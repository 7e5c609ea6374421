//! Deterministic parallel drivers.
//!
//! Work is cut into shards, each shard is pure, and results are combined
//! either in canonical shard order or by integer addition. Output never
//! depends on the size of the rayon pool the caller installs.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::raster::{DensityGrid, Viewport};
use crate::solver::SolverConfig;
use crate::zeros::{plan_shards, solve_shard, RootRecord, Shard};

/// Polynomials per shard in root sweeps.
pub const SHARD_SIZE: u64 = 256;

/// Maps `f` over `items` in parallel windows and hands the results to
/// `sink` strictly in input order. Memory is bounded by one window.
pub fn ordered_map<T, R, F, S, E>(items: &[T], window: usize, f: F, mut sink: S) -> Result<(), E>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
    S: FnMut(R) -> Result<(), E>,
{
    for batch in items.chunks(window.max(1)) {
        let results: Vec<R> = batch.par_iter().map(&f).collect();
        for r in results {
            sink(r)?;
        }
    }
    Ok(())
}

/// Summary of a root sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SweepSummary {
    pub polynomials: u64,
    pub roots: u64,
    pub converged: u64,
    pub max_residual: f64,
}

impl SweepSummary {
    pub fn add(&mut self, shard: &Shard, records: &[RootRecord]) {
        self.polynomials += shard.polynomials();
        self.roots += records.len() as u64;
        for r in records {
            if r.converged {
                self.converged += 1;
                self.max_residual = self.max_residual.max(r.residual);
            }
        }
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.polynomials += other.polynomials;
        self.roots += other.roots;
        self.converged += other.converged;
        self.max_residual = self.max_residual.max(other.max_residual);
        self
    }
}

/// Solves degrees `1..=d_max` and streams every shard's records, in
/// canonical order, to `sink`.
pub fn sweep_roots<S, E>(d_max: u32, cfg: &SolverConfig, sink: S) -> Result<Result<SweepSummary, E>>
where
    S: FnMut(&[RootRecord]) -> Result<(), E>,
{
    cfg.validate()?;
    let shards = plan_shards(d_max, SHARD_SIZE)?;
    let window = rayon::current_num_threads() * 4;
    let mut summary = SweepSummary::default();
    let mut sink = sink;
    let outcome = ordered_map(
        &shards,
        window,
        |s| (*s, solve_shard(*s, cfg)),
        |(shard, records)| {
            summary.add(&shard, &records);
            sink(&records)
        },
    );
    Ok(outcome.map(|()| summary))
}

/// Root-density histogram of degrees `1..=d_max`.
pub fn render_zero_set(
    d_max: u32,
    cfg: &SolverConfig,
    width: usize,
    height: usize,
    viewport: Viewport,
) -> Result<(DensityGrid, SweepSummary)> {
    cfg.validate()?;
    let empty = DensityGrid::new(width, height, viewport)?;
    let shards = plan_shards(d_max, SHARD_SIZE)?;
    let (grid, summary) = shards
        .par_iter()
        .fold(
            || (empty.clone(), SweepSummary::default()),
            |(mut grid, mut summary), shard| {
                let records = solve_shard(*shard, cfg);
                summary.add(shard, &records);
                grid.accumulate(records.iter().map(|r| r.root));
                (grid, summary)
            },
        )
        .reduce(
            || (empty.clone(), SweepSummary::default()),
            |(mut a, sa), (b, sb)| {
                a.merge_from(&b).expect("shard grids share geometry");
                (a, sa.merge(sb))
            },
        );
    Ok((grid, summary))
}
