//! Monte Carlo comparison of the analytic failure bounds with observed
//! success rates of single product samples over `K_k`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds::{failure_bound_a, failure_bound_b};
use crate::builder::{check_condition_b, sample_product_graph_on_stream};
use crate::graph::{is_n_saturated, FiniteGraph};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub m: usize,
    pub trials: u64,
    /// Samples that are n-saturated.
    pub saturated: u64,
    /// Samples that are n-saturated and satisfy condition (B).
    pub joint: u64,
    pub bound_a: BigRational,
    pub bound_b: BigRational,
}

impl StatsRow {
    pub fn saturated_rate(&self) -> f64 {
        self.saturated as f64 / self.trials as f64
    }

    pub fn joint_rate(&self) -> f64 {
        self.joint as f64 / self.trials as f64
    }

    pub fn combined_bound(&self) -> BigRational {
        &self.bound_a + &self.bound_b
    }
}

/// Samples `trials` product graphs `H_m` over `K_k` (trial `t` on stream `t`
/// of a seed derived from `(seed, m)`) and counts how many pass.
pub fn sample_success_rates(n: usize, k: usize, m: usize, trials: u64, seed: u64) -> StatsRow {
    let base = Arc::new(FiniteGraph::complete(k).expect("k >= 1"));
    let row_seed = derive_seed(seed, m as u64);
    let (mut saturated, mut joint) = (0, 0);
    for t in 0..trials {
        let (g, _) = sample_product_graph_on_stream(&base, m, row_seed, t);
        if is_n_saturated(&g, n).holds() {
            saturated += 1;
            if check_condition_b(&g, &base, m, n)
                .expect("sample matches its encoding")
                .holds()
            {
                joint += 1;
            }
        }
    }
    StatsRow {
        m,
        trials,
        saturated,
        joint,
        bound_a: failure_bound_a(n, k, m),
        bound_b: failure_bound_b(n, k, m),
    }
}

/// Scientific rendering of an exact rational, e.g. `8.750000e-1`.
pub fn decimal(q: &BigRational) -> String {
    match q.to_f64() {
        Some(x) if x.is_finite() => format!("{x:.6e}"),
        _ => "inf".to_string(),
    }
}
