//! Multi-threaded drivers. Results are merged into ordered sets, so the
//! output does not depend on the worker count.

use std::sync::Arc;

use rayon::prelude::*;

use kgraph_core::enumerator::{
    cut_list, finish, merge_branches, search_anchor_branch, validate_config, Enumeration, NodeBudget,
    SearchConfig, SearchError,
};
use kgraph_core::exactalg::RowSystem;
use kgraph_core::tiling::{is_prime, PrimalityVerdict};
use kgraph_core::vgraph::VectorGraph;

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// [`kgraph_core::enumerator::enumerate_kirchhoff`] with anchor branches
/// spread over `workers` threads.
pub fn enumerate(sys: &Arc<RowSystem>, config: &SearchConfig, workers: usize) -> Result<Enumeration, SearchError> {
    validate_config(config)?;
    let cuts = cut_list(sys, config);
    let budget = NodeBudget::new(config.node_limit);
    let parts: Vec<Enumeration> = pool(workers).install(|| {
        (0..cuts.len())
            .into_par_iter()
            .map(|b| search_anchor_branch(sys, config, &cuts, b, &budget))
            .collect()
    });
    finish(merge_branches(parts))
}

/// Primality verdicts in input order.
pub fn classify_primes(graphs: &[VectorGraph], budget: u64, workers: usize) -> Vec<PrimalityVerdict> {
    pool(workers).install(|| graphs.par_iter().map(|g| is_prime(g, budget)).collect())
}
