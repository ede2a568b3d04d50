//! Vertex maps between finite graphs and the checks a bonding map must pass.

use std::sync::Arc;

use thiserror::Error;

use crate::bits::{self, Ones};
use crate::graph::FiniteGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("map has {got} entries but the source has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("source vertex {vertex} maps to {image}, outside the {order}-vertex target")]
    ImageOutOfRange {
        vertex: usize,
        image: usize,
        order: usize,
    },
    #[error("cannot compose: inner target and outer source are different graphs")]
    GraphMismatch,
}

/// A total function from the vertices of `source` to the vertices of `target`.
#[derive(Clone)]
pub struct GraphMap {
    source: Arc<FiniteGraph>,
    target: Arc<FiniteGraph>,
    image: Vec<usize>,
}

impl GraphMap {
    pub fn new(
        source: Arc<FiniteGraph>,
        target: Arc<FiniteGraph>,
        image: Vec<usize>,
    ) -> Result<Self, MorphismError> {
        if image.len() != source.order() {
            return Err(MorphismError::LengthMismatch {
                expected: source.order(),
                got: image.len(),
            });
        }
        if let Some((vertex, &img)) = image.iter().enumerate().find(|(_, &t)| t >= target.order()) {
            return Err(MorphismError::ImageOutOfRange {
                vertex,
                image: img,
                order: target.order(),
            });
        }
        Ok(GraphMap {
            source,
            target,
            image,
        })
    }

    pub fn identity(g: Arc<FiniteGraph>) -> Self {
        let image = (0..g.order()).collect();
        GraphMap {
            source: g.clone(),
            target: g,
            image,
        }
    }

    /// Map sending every source vertex to `vertex`.
    pub fn constant(
        source: Arc<FiniteGraph>,
        target: Arc<FiniteGraph>,
        vertex: usize,
    ) -> Result<Self, MorphismError> {
        let image = vec![vertex; source.order()];
        Self::new(source, target, image)
    }

    pub fn source(&self) -> &Arc<FiniteGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGraph> {
        &self.target
    }

    /// Image of every source vertex, indexed by source vertex.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// Preimage lists of every target vertex, each ascending.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target.order()];
        for (v, &t) in self.image.iter().enumerate() {
            fibers[t].push(v);
        }
        fibers
    }
}

impl std::fmt::Debug for GraphMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphMap")
            .field("source_order", &self.source.order())
            .field("target_order", &self.target.order())
            .finish()
    }
}

impl PartialEq for GraphMap {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image && self.source == other.source && self.target == other.target
    }
}

fn same_graph(a: &Arc<FiniteGraph>, b: &Arc<FiniteGraph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// First source edge `(a, b)`, `a ≤ b`, whose image is not an edge.
pub fn first_unpreserved_edge(h: &GraphMap) -> Option<(usize, usize)> {
    let src = &h.source;
    let tgt = &h.target;
    for a in 0..src.order() {
        let ha = h.image[a];
        let trow = tgt.row(ha);
        let row = src.row(a);
        let start = a / bits::WORD;
        for b in Ones::new(&row[start..]).map(|b| b + start * bits::WORD) {
            if b > a && !bits::test(trow, h.image[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Every source edge maps onto a target edge (possibly a loop).
pub fn is_homomorphism(h: &GraphMap) -> bool {
    first_unpreserved_edge(h).is_none()
}

/// First target edge `(p, q)`, `p ≤ q`, between image points with no source
/// edge mapping onto it.
pub fn first_unlifted_edge(h: &GraphMap) -> Option<(usize, usize)> {
    let fibers = h.fibers();
    let src = &h.source;
    for p in 0..h.target.order() {
        if fibers[p].is_empty() {
            continue;
        }
        for q in h.target.neighbors(p).filter(|&q| q >= p) {
            if fibers[q].is_empty() {
                continue;
            }
            let lifted = fibers[p].iter().any(|&a| {
                let row = src.row(a);
                fibers[q].iter().any(|&b| bits::test(row, b))
            });
            if !lifted {
                return Some((p, q));
            }
        }
    }
    None
}

/// Every target edge between image points has a source edge over it.
pub fn is_strict(h: &GraphMap) -> bool {
    first_unlifted_edge(h).is_none()
}

pub fn is_surjective(h: &GraphMap) -> bool {
    let mut hit = vec![false; h.target.order()];
    for &t in &h.image {
        hit[t] = true;
    }
    hit.into_iter().all(|x| x)
}

/// Surjective strict homomorphism.
pub fn is_quotient_map(h: &GraphMap) -> bool {
    is_surjective(h) && is_homomorphism(h) && is_strict(h)
}

/// `outer ∘ inner`.
pub fn compose(outer: &GraphMap, inner: &GraphMap) -> Result<GraphMap, MorphismError> {
    if !same_graph(&inner.target, &outer.source) {
        return Err(MorphismError::GraphMismatch);
    }
    Ok(GraphMap {
        source: inner.source.clone(),
        target: outer.target.clone(),
        image: inner.image.iter().map(|&v| outer.image[v]).collect(),
    })
}

/// Failure of a lifting-type condition: a vertex downstairs together with
/// upstairs targets that no vertex of its fiber is adjacent to all of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftFailure {
    pub vertex: usize,
    pub targets: Vec<usize>,
}

/// Result of a lifting check; `counterexample` is the lexicographically
/// smallest failing configuration when the check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub counterexample: Option<LiftFailure>,
}

impl LiftReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// The lifting property of a quotient map `h: G → H` at arity `n`: for every
/// `v ∈ H`, every set of fewer than `n` distinct neighbors `v_1..v_p ≠ v` of
/// `v`, and every choice of preimages `w_s ∈ h⁻¹(v_s)`, some preimage of `v`
/// is adjacent to all the `w_s`.
///
/// Works for arbitrary maps; fibers need not be contiguous.
pub fn check_lifting_property(h: &GraphMap, n: usize) -> LiftReport {
    let fibers = h.fibers();
    let src = &h.source;
    for v in 0..h.target.order() {
        let fiber = &fibers[v];
        if fiber.is_empty() {
            // the empty configuration already needs a preimage of v
            return LiftReport {
                counterexample: Some(LiftFailure {
                    vertex: v,
                    targets: Vec::new(),
                }),
            };
        }
        if n <= 1 {
            continue;
        }
        // candidates: preimages of neighbors of v other than v, ascending
        let mut candidates: Vec<usize> = h
            .target
            .neighbors(v)
            .filter(|&u| u != v)
            .flat_map(|u| fibers[u].iter().copied())
            .collect();
        candidates.sort_unstable();
        let width = bits::words_for(fiber.len());
        let contiguous = fiber.last().map(|&l| l - fiber[0] + 1) == Some(fiber.len());
        let mut masks = vec![0u64; candidates.len() * width];
        for (c, &w) in candidates.iter().enumerate() {
            let out = &mut masks[c * width..(c + 1) * width];
            let row = src.row(w);
            if contiguous {
                bits::extract_range(row, fiber[0], fiber.len(), out);
            } else {
                for (pos, &x) in fiber.iter().enumerate() {
                    if bits::test(row, x) {
                        bits::set(out, pos);
                    }
                }
            }
        }
        let mut chosen = Vec::with_capacity(n - 1);
        let mut acc = vec![vec![0u64; width]; n];
        acc[0].iter_mut().enumerate().for_each(|(i, w)| {
            *w = bits::valid_mask(fiber.len(), i);
        });
        let search = LiftSearch {
            candidates: &candidates,
            image: &h.image,
            masks: &masks,
            width,
            max: n - 1,
        };
        if search.dfs(0, &mut chosen, &mut acc) {
            return LiftReport {
                counterexample: Some(LiftFailure {
                    vertex: v,
                    targets: chosen.iter().map(|&c| candidates[c]).collect(),
                }),
            };
        }
    }
    LiftReport {
        counterexample: None,
    }
}

struct LiftSearch<'a> {
    candidates: &'a [usize],
    image: &'a [usize],
    masks: &'a [u64],
    width: usize,
    max: usize,
}

impl LiftSearch<'_> {
    /// Depth-first over candidate sets in lexicographic order with pairwise
    /// distinct images. Returns true (leaving the failing set in `chosen`)
    /// on the first set whose masks have an empty intersection.
    fn dfs(&self, start: usize, chosen: &mut Vec<usize>, acc: &mut [Vec<u64>]) -> bool {
        let depth = chosen.len();
        if depth == self.max {
            return false;
        }
        for c in start..self.candidates.len() {
            let img = self.image[self.candidates[c]];
            if chosen
                .iter()
                .any(|&o| self.image[self.candidates[o]] == img)
            {
                continue;
            }
            let mask = &self.masks[c * self.width..(c + 1) * self.width];
            let (lo, hi) = acc.split_at_mut(depth + 1);
            let mut any = 0u64;
            for ((dst, &src), &m) in hi[0].iter_mut().zip(lo[depth].iter()).zip(mask) {
                *dst = src & m;
                any |= *dst;
            }
            chosen.push(c);
            if any == 0 || self.dfs(c + 1, chosen, acc) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}
