//! Mixing-parameter sweeps over coupled graphs.

use abcdo_core::rng::derive_seed;
use abcdo_core::scores::AucCell;
use abcdo_core::{generate_from_sequences, GeneratorParams};
use rayon::prelude::*;

use crate::analyze::{analyze, AnalyzeOptions, CellKey};
use crate::error::Result;

pub const SWEEP_HEADER: &str = "# abcdo sweep v1";

/// `0.1, 0.2, ..., 1.0`.
pub fn default_xis() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    /// Base parameters; `xi` and `seed` are replaced per cell.
    pub params: GeneratorParams,
    pub xis: Vec<f64>,
    pub replicates: usize,
    /// Analysis settings; `seed` is replaced per cell.
    pub analysis: AnalyzeOptions,
}

/// Every replicate draws one degree and size sequence and reuses it for all
/// `xi` values. Each cell gets its own derived seed for the rest of the
/// pipeline, so cells are independent and run in parallel.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<(CellKey, AucCell)>> {
    let cells: Vec<(usize, usize)> = (0..plan.replicates)
        .flat_map(|r| (0..plan.xis.len()).map(move |x| (r, x)))
        .collect();
    let sequences = (0..plan.replicates)
        .into_par_iter()
        .map(|r| {
            let params = GeneratorParams {
                seed: derive_seed(plan.params.seed, r as u64),
                ..plan.params.clone()
            };
            params.sequences()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let results = cells
        .par_iter()
        .map(|&(r, x)| -> Result<Vec<(CellKey, AucCell)>> {
            let replicate_seed = derive_seed(plan.params.seed, r as u64);
            let seed = derive_seed(replicate_seed, 1 + x as u64);
            let params = GeneratorParams {
                xi: plan.xis[x],
                seed,
                ..plan.params.clone()
            };
            let (degrees, sizes) = &sequences[r];
            let graph = generate_from_sequences(&params, degrees, sizes)?;
            let options = AnalyzeOptions {
                seed,
                ..plan.analysis.clone()
            };
            let (analysis, _) = analyze(&graph.graph(), Some(graph.assignment.labels()), &options)?;
            let key = CellKey {
                xi: plan.xis[x],
                replicate: r,
                seed,
            };
            Ok(analysis
                .report
                .auc_table()
                .into_iter()
                .map(|c| (key, c))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(results.into_iter().flatten().collect())
}
