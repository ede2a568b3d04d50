//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use cantorsat::{sample_product_graph, FiniteGraph};

/// Level-1 graph of a certified `n`-tower over `K_n`, drawn from `seed`
/// without the acceptance checks.
pub fn product_over_complete(
    n: usize,
    m: usize,
    seed: u64,
) -> (Arc<FiniteGraph>, Arc<FiniteGraph>) {
    let base = Arc::new(FiniteGraph::complete(n).expect("n >= 1"));
    let (g, _) = sample_product_graph(&base, m, seed);
    (base, g)
}
