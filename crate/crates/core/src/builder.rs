//! Random product extensions `H_m` of a base graph `H_0` and the rejection
//! loop that turns them into verified saturated extensions.
//!
//! `H_m` has vertex set `V(H_0) × {0..m}`, flattened as `i·(m+1) + s`:
//!
//! * copy 0 is an induced copy of `H_0`;
//! * fibers over non-adjacent base vertices are never joined;
//! * every other pair over adjacent (or equal) base vertices is joined by a
//!   fair coin flip;
//! * every vertex keeps its loop.

use std::sync::Arc;

use thiserror::Error;

use crate::bits;
use crate::bounds::{is_certified, minimal_certified_m};
use crate::graph::{is_n_saturated, is_weakly_n_saturated, FiniteGraph, TypeSpec};
use crate::morphism::{GraphMap, LiftFailure, LiftReport};
use crate::rng::BitStream;

/// Outcome of the condition-(B) check; same shape as a lifting report, with
/// the failing base vertex and product-vertex targets.
pub type ConditionBReport = LiftReport;

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("graph has {got} vertices, expected {expected} for the product encoding")]
    EncodingMismatch { expected: usize, got: usize },
    #[error(
        "base graph is not weakly {n}-saturated (no common neighbor outside {counterexample:?})"
    )]
    BaseNotWeaklySaturated { n: usize, counterexample: TypeSpec },
    #[error("copies parameter m must be at least 1")]
    InvalidM,
    #[error("empirical mode needs an explicit m")]
    MissingM,
    #[error("m = {m} is not certified: the failure bound is not below 1")]
    NotCertified { m: usize },
    #[error("no acceptable sample within {attempts} attempts")]
    AttemptsExhausted { attempts: u64 },
}

/// A vertex `(base, copy)` of a product graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub base: usize,
    pub copy: usize,
}

impl ProductVertex {
    #[inline]
    pub fn flatten(self, m: usize) -> usize {
        self.base * (m + 1) + self.copy
    }

    #[inline]
    pub fn from_flat(index: usize, m: usize) -> Self {
        ProductVertex {
            base: index / (m + 1),
            copy: index % (m + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    /// `m` is chosen (or checked) so the combined failure bound is below 1.
    Certified,
    /// Caller-chosen `m`; the result is still verified exhaustively.
    Empirical,
}

#[derive(Debug, Clone)]
pub struct BuildParams {
    pub n: usize,
    pub base: Arc<FiniteGraph>,
    pub mode: BuildMode,
    /// Required in empirical mode; in certified mode it must itself be certified.
    pub m: Option<usize>,
    pub seed: u64,
    pub max_attempts: u64,
}

impl BuildParams {
    pub fn certified(n: usize, base: Arc<FiniteGraph>, seed: u64) -> Self {
        BuildParams {
            n,
            base,
            mode: BuildMode::Certified,
            m: None,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn empirical(n: usize, base: Arc<FiniteGraph>, m: usize, seed: u64) -> Self {
        BuildParams {
            n,
            base,
            mode: BuildMode::Empirical,
            m: Some(m),
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    /// The `m` this build will use.
    pub fn resolve_m(&self) -> Result<usize, BuildError> {
        let k = self.base.order();
        match (self.mode, self.m) {
            (_, Some(0)) => Err(BuildError::InvalidM),
            (BuildMode::Certified, None) => Ok(minimal_certified_m(self.n, k)),
            (BuildMode::Certified, Some(m)) if is_certified(self.n, k, m) => Ok(m),
            (BuildMode::Certified, Some(m)) => Err(BuildError::NotCertified { m }),
            (BuildMode::Empirical, Some(m)) => Ok(m),
            (BuildMode::Empirical, None) => Err(BuildError::MissingM),
        }
    }
}

/// An accepted sample together with its projection onto the base.
#[derive(Debug, Clone)]
pub struct Extension {
    pub graph: Arc<FiniteGraph>,
    pub projection: GraphMap,
    pub m: usize,
    pub attempts: u64,
}

/// Draws `H_m` over `base` from stream 0 of `seed`.
pub fn sample_product_graph(
    base: &Arc<FiniteGraph>,
    m: usize,
    seed: u64,
) -> (Arc<FiniteGraph>, GraphMap) {
    sample_product_graph_on_stream(base, m, seed, 0)
}

/// Draws `H_m` over `base` from the given ChaCha stream.
///
/// One bit is consumed per undecided pair, pairs taken in lexicographic
/// order of their flattened indices `(u, v)`, `u < v`.
pub fn sample_product_graph_on_stream(
    base: &Arc<FiniteGraph>,
    m: usize,
    seed: u64,
    stream: u64,
) -> (Arc<FiniteGraph>, GraphMap) {
    let c = m + 1;
    let order = base.order() * c;
    let stride = bits::words_for(order);
    let mut rows = vec![0u64; order * stride];
    let mut coins = BitStream::new(seed, stream);
    for u in 0..order {
        bits::set(&mut rows[u * stride..(u + 1) * stride], u);
        let (i, s) = (u / c, u % c);
        for j in base.neighbors(i).filter(|&j| j >= i) {
            let first = if j == i { s + 1 } else { 0 };
            for t in first..c {
                let v = j * c + t;
                // copy 0 of adjacent base vertices is fixed; everything else is a coin
                let present = (s == 0 && t == 0) || coins.next_bit();
                if present {
                    bits::set(&mut rows[u * stride..(u + 1) * stride], v);
                    bits::set(&mut rows[v * stride..(v + 1) * stride], u);
                }
            }
        }
    }
    let graph = Arc::new(FiniteGraph::from_rows(order, rows));
    let image = (0..order).map(|u| u / c).collect();
    let projection =
        GraphMap::new(graph.clone(), base.clone(), image).expect("projection is well formed");
    (graph, projection)
}

/// Which configurations condition (B) quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleMode {
    /// Tuples with repeats, entries may lie over the base vertex itself.
    Repeats,
    /// Pairwise distinct base neighbors, all different from the base vertex.
    Distinct,
}

/// Condition (B): for every base vertex `i` and every choice of fewer than
/// `n` product vertices over closed neighbors of `i`, some copy `(i, l)` is
/// adjacent to all of them.
pub fn check_condition_b(
    g: &FiniteGraph,
    base: &FiniteGraph,
    m: usize,
    n: usize,
) -> Result<ConditionBReport, BuildError> {
    check_condition_b_with(g, base, m, n, TupleMode::Repeats)
}

pub fn check_condition_b_with(
    g: &FiniteGraph,
    base: &FiniteGraph,
    m: usize,
    n: usize,
    mode: TupleMode,
) -> Result<ConditionBReport, BuildError> {
    let c = m + 1;
    let k = base.order();
    if g.order() != k * c {
        return Err(BuildError::EncodingMismatch {
            expected: k * c,
            got: g.order(),
        });
    }
    let holds = ConditionBReport {
        counterexample: None,
    };
    if n <= 1 {
        return Ok(holds);
    }
    let width = bits::words_for(c);
    let full: Vec<u64> = (0..width).map(|w| bits::valid_mask(c, w)).collect();
    for i in 0..k {
        // Tuples with repeats only matter through the set of their entries,
        // so both modes enumerate sets; Distinct adds the base restrictions.
        let targets: Vec<usize> = base
            .neighbors(i)
            .filter(|&j| mode == TupleMode::Repeats || j != i)
            .flat_map(|j| j * c..(j + 1) * c)
            .collect();
        let mut masks = vec![0u64; targets.len() * width];
        for (x, &w) in targets.iter().enumerate() {
            bits::extract_range(g.row(w), i * c, c, &mut masks[x * width..(x + 1) * width]);
        }
        let mut scan = ConfigScan {
            targets: &targets,
            masks: &masks,
            width,
            copies: c,
            distinct: mode == TupleMode::Distinct,
            max: n - 1,
            chosen: Vec::with_capacity(n - 1),
            acc: vec![0u64; n * width],
        };
        scan.acc[..width].copy_from_slice(&full);
        if scan.fails_from(0) {
            return Ok(ConditionBReport {
                counterexample: Some(LiftFailure {
                    vertex: i,
                    targets: scan.chosen.iter().map(|&x| targets[x]).collect(),
                }),
            });
        }
    }
    Ok(holds)
}

struct ConfigScan<'a> {
    targets: &'a [usize],
    masks: &'a [u64],
    width: usize,
    copies: usize,
    distinct: bool,
    max: usize,
    chosen: Vec<usize>,
    /// Running intersections, one `width`-word slot per depth.
    acc: Vec<u64>,
}

impl ConfigScan<'_> {
    fn fails_from(&mut self, start: usize) -> bool {
        let depth = self.chosen.len();
        if depth == self.max {
            return false;
        }
        let w = self.width;
        for x in start..self.targets.len() {
            if self.distinct {
                let b = self.targets[x] / self.copies;
                if self
                    .chosen
                    .iter()
                    .any(|&o| self.targets[o] / self.copies == b)
                {
                    continue;
                }
            }
            let mut any = 0u64;
            for q in 0..w {
                let v = self.acc[depth * w + q] & self.masks[x * w + q];
                self.acc[(depth + 1) * w + q] = v;
                any |= v;
            }
            self.chosen.push(x);
            if any == 0 || self.fails_from(x + 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Rejection sampling: draws `H_m` on streams 0, 1, 2, … of `params.seed`
/// until a sample is `n`-saturated and satisfies condition (B).
pub fn build_extension(params: &BuildParams) -> Result<Extension, BuildError> {
    let m = params.resolve_m()?;
    let weak = is_weakly_n_saturated(&params.base, params.n);
    if let Some(counterexample) = weak.counterexample {
        return Err(BuildError::BaseNotWeaklySaturated {
            n: params.n,
            counterexample,
        });
    }
    for attempt in 0..params.max_attempts {
        let (graph, projection) =
            sample_product_graph_on_stream(&params.base, m, params.seed, attempt);
        if accepts(&graph, &params.base, m, params.n)? {
            return Ok(Extension {
                graph,
                projection,
                m,
                attempts: attempt + 1,
            });
        }
    }
    Err(BuildError::AttemptsExhausted {
        attempts: params.max_attempts,
    })
}

/// The acceptance test of the rejection loop.
pub(crate) fn accepts(
    graph: &FiniteGraph,
    base: &FiniteGraph,
    m: usize,
    n: usize,
) -> Result<bool, BuildError> {
    Ok(is_n_saturated(graph, n).holds() && check_condition_b(graph, base, m, n)?.holds())
}
