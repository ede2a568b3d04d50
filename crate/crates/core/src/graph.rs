//! Finite reflexive graphs, types over vertex sets and exhaustive saturation checks.
//!
//! Adjacency is stored as one bit row per vertex, `stride` words wide. Every
//! diagonal bit is set: each vertex carries a loop, so a homomorphism may
//! collapse an edge onto a single vertex.

use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::bits::{self, Ones};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop at vertex {0} cannot be removed")]
    LoopRemoval(usize),
    #[error("vertex {0} belongs to the type's domain and cannot realize it")]
    RealizerInDomain(usize),
    #[error("vertex {0} appears twice in a type")]
    DuplicateTypeVertex(usize),
}

/// A finite graph whose edge relation is symmetric and reflexive.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    order: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl FiniteGraph {
    /// The graph on `order` vertices with loops and no other edges.
    pub fn discrete(order: usize) -> Result<Self, GraphError> {
        if order == 0 {
            return Err(GraphError::Empty);
        }
        let stride = bits::words_for(order);
        let mut rows = vec![0u64; order * stride];
        for v in 0..order {
            bits::set(&mut rows[v * stride..(v + 1) * stride], v);
        }
        Ok(FiniteGraph {
            order,
            stride,
            rows,
        })
    }

    /// Complete reflexive graph K_order.
    pub fn complete(order: usize) -> Result<Self, GraphError> {
        if order == 0 {
            return Err(GraphError::Empty);
        }
        let stride = bits::words_for(order);
        let mut rows = vec![0u64; order * stride];
        for v in 0..order {
            for w in 0..stride {
                rows[v * stride + w] = bits::valid_mask(order, w);
            }
        }
        Ok(FiniteGraph {
            order,
            stride,
            rows,
        })
    }

    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::discrete(order)?;
        for (a, b) in edges {
            g.set_edge(a, b, true)?;
        }
        Ok(g)
    }

    /// Cycle 0–1–…–(order−1)–0.
    pub fn cycle(order: usize) -> Result<Self, GraphError> {
        Self::from_edges(order, (0..order).map(|i| (i, (i + 1) % order)))
    }

    /// Path 0–1–…–(order−1).
    pub fn path(order: usize) -> Result<Self, GraphError> {
        Self::from_edges(order, (1..order).map(|i| (i - 1, i)))
    }

    pub(crate) fn from_rows(order: usize, rows: Vec<u64>) -> Self {
        let stride = bits::words_for(order);
        debug_assert_eq!(rows.len(), order * stride);
        FiniteGraph {
            order,
            stride,
            rows,
        }
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.order {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.order,
            })
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.has_edge(u, v))
    }

    /// Unchecked adjacency lookup; callers guarantee both indices are in range.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.order && v < self.order);
        bits::test(self.row(u), v)
    }

    /// Adjacency row of `v` as bit words (bit `u` set iff `u ~ v`).
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Closed neighborhood of `v` in ascending order (includes `v` itself).
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        Ones::new(self.row(v))
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        let s = self.stride;
        if u == v {
            return if present {
                Ok(())
            } else {
                Err(GraphError::LoopRemoval(u))
            };
        }
        if present {
            bits::set(&mut self.rows[u * s..(u + 1) * s], v);
            bits::set(&mut self.rows[v * s..(v + 1) * s], u);
        } else {
            bits::clear(&mut self.rows[u * s..(u + 1) * s], v);
            bits::clear(&mut self.rows[v * s..(v + 1) * s], u);
        }
        Ok(())
    }

    /// Non-loop edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |a| {
            let row = self.row(a);
            let start = (a + 1) / bits::WORD;
            Ones::new(&row[start..])
                .map(move |b| b + start * bits::WORD)
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    /// Number of non-loop edges.
    pub fn cross_edge_count(&self) -> usize {
        let total: usize = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        (total - self.order) / 2
    }
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGraph")
            .field("order", &self.order)
            .field("cross_edges", &self.cross_edge_count())
            .finish()
    }
}

/// A 0/1 assignment over a finite vertex set: the type `f: A → {0,1}`.
///
/// Entries are kept sorted by vertex; the domain is exactly the listed vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeSpec {
    entries: Vec<(usize, bool)>,
}

impl TypeSpec {
    pub fn new<I>(entries: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, bool)>,
    {
        let mut entries: Vec<(usize, bool)> = entries.into_iter().collect();
        entries.sort_unstable_by_key(|&(v, _)| v);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(GraphError::DuplicateTypeVertex(w[0].0));
        }
        Ok(TypeSpec { entries })
    }

    pub fn empty() -> Self {
        TypeSpec {
            entries: Vec::new(),
        }
    }

    /// The constant-1 type over `domain`.
    pub fn all_ones(domain: &[usize]) -> Result<Self, GraphError> {
        Self::new(domain.iter().map(|&v| (v, true)))
    }

    /// Type over an ascending `domain` whose bits are read from `index`,
    /// the first domain vertex being the most significant bit.
    pub(crate) fn from_index(domain: &[usize], index: u64) -> Self {
        let r = domain.len();
        TypeSpec {
            entries: domain
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, (index >> (r - 1 - j)) & 1 == 1))
                .collect(),
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn entries(&self) -> &[(usize, bool)] {
        &self.entries
    }

    pub fn get(&self, v: usize) -> Option<bool> {
        self.entries
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_within(&self, g: &FiniteGraph) -> Result<(), GraphError> {
        self.domain().try_for_each(|a| g.check(a))
    }
}

/// Outcome of a saturation check. A counterexample is a type `f` over some
/// vertex set `A` (its domain) that no vertex outside `A` realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub counterexample: Option<TypeSpec>,
}

impl SaturationReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// True iff `v` (outside the domain of `f`) is adjacent to exactly the
/// vertices that `f` maps to 1.
pub fn realizes(g: &FiniteGraph, v: usize, f: &TypeSpec) -> Result<bool, GraphError> {
    g.check(v)?;
    f.check_within(g)?;
    if f.get(v).is_some() {
        return Err(GraphError::RealizerInDomain(v));
    }
    Ok(f.entries.iter().all(|&(a, bit)| g.has_edge(v, a) == bit))
}

/// Smallest vertex outside the domain of `f` that realizes `f`.
pub fn find_realizer(g: &FiniteGraph, f: &TypeSpec) -> Result<Option<usize>, GraphError> {
    f.check_within(g)?;
    let dom: Vec<usize> = f.domain().collect();
    Ok(scan_realizer(g, &dom, |j| f.entries[j].1))
}

/// Word-parallel scan for the first vertex outside `dom` with adjacency
/// pattern `bit(j)` towards `dom[j]`.
pub(crate) fn scan_realizer(
    g: &FiniteGraph,
    dom: &[usize],
    bit: impl Fn(usize) -> bool,
) -> Option<usize> {
    let s = g.stride;
    for w in 0..s {
        let mut acc = bits::valid_mask(g.order, w);
        for (j, &a) in dom.iter().enumerate() {
            if a / bits::WORD == w {
                acc &= !(1u64 << (a % bits::WORD));
            }
            let word = g.rows[a * s + w];
            acc &= if bit(j) { word } else { !word };
            if acc == 0 {
                break;
            }
        }
        if acc != 0 {
            return Some(w * bits::WORD + acc.trailing_zeros() as usize);
        }
    }
    None
}

const FAST_DOMAIN: usize = 6;

/// Bitmask over type indices (see [`TypeSpec::from_index`]) of the types over
/// `dom` that have a realizer. Requires `dom.len() <= 6`.
fn realized_type_mask(g: &FiniteGraph, dom: &[usize]) -> u64 {
    let r = dom.len();
    debug_assert!(r <= FAST_DOMAIN);
    let types = 1usize << r;
    let full = if types == 64 {
        u64::MAX
    } else {
        (1u64 << types) - 1
    };
    let s = g.stride;
    let mut found = 0u64;
    let mut cols = [0u64; FAST_DOMAIN];
    for w in 0..s {
        let mut valid = bits::valid_mask(g.order, w);
        for (j, &a) in dom.iter().enumerate() {
            if a / bits::WORD == w {
                valid &= !(1u64 << (a % bits::WORD));
            }
            cols[j] = g.rows[a * s + w];
        }
        if valid == 0 {
            continue;
        }
        for t in 0..types {
            if (found >> t) & 1 == 1 {
                continue;
            }
            let mut acc = valid;
            for (j, col) in cols.iter().enumerate().take(r) {
                acc &= if (t >> (r - 1 - j)) & 1 == 1 {
                    *col
                } else {
                    !*col
                };
                if acc == 0 {
                    break;
                }
            }
            if acc != 0 {
                found |= 1 << t;
            }
        }
        if found == full {
            break;
        }
    }
    found
}

/// Visits every `size`-subset of `0..order` in lexicographic order.
pub(crate) fn for_each_subset<B>(
    order: usize,
    size: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if size > order {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        visit(&idx)?;
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if idx[i] < order - size + i {
                break;
            }
            if i == 0 {
                return ControlFlow::Continue(());
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Subset sizes a saturation check must enumerate. A type over a smaller set
/// extends to one over a superset of size n−1, so only that size is needed
/// when the graph has at least n−1 vertices.
fn subset_sizes(order: usize, n: usize) -> std::ops::RangeInclusive<usize> {
    let max = n - 1;
    if order >= max {
        max..=max
    } else {
        0..=order
    }
}

/// Exhaustive check that every type over every vertex set of size < `n` is
/// realized. Counterexamples are the smallest by (|A|, A, f) lexicographically.
pub fn is_n_saturated(g: &FiniteGraph, n: usize) -> SaturationReport {
    if n == 0 {
        return SaturationReport {
            counterexample: None,
        };
    }
    for size in subset_sizes(g.order, n) {
        let flow = for_each_subset(g.order, size, |dom| {
            if size <= FAST_DOMAIN {
                let mask = realized_type_mask(g, dom);
                let types = 1u64 << size;
                let missing = (0..types).find(|&t| (mask >> t) & 1 == 0);
                match missing {
                    Some(t) => ControlFlow::Break(TypeSpec::from_index(dom, t)),
                    None => ControlFlow::Continue(()),
                }
            } else {
                let r = dom.len();
                for t in 0..(1u64 << r) {
                    if scan_realizer(g, dom, |j| (t >> (r - 1 - j)) & 1 == 1).is_none() {
                        return ControlFlow::Break(TypeSpec::from_index(dom, t));
                    }
                }
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(f) = flow {
            return SaturationReport {
                counterexample: Some(f),
            };
        }
    }
    SaturationReport {
        counterexample: None,
    }
}

/// Every vertex set of size < `n` has a common neighbor outside the set.
pub fn is_weakly_n_saturated(g: &FiniteGraph, n: usize) -> SaturationReport {
    if n == 0 {
        return SaturationReport {
            counterexample: None,
        };
    }
    for size in subset_sizes(g.order, n) {
        let flow = for_each_subset(g.order, size, |dom| match scan_realizer(g, dom, |_| true) {
            Some(_) => ControlFlow::Continue(()),
            None => ControlFlow::Break(TypeSpec::from_index(dom, u64::MAX)),
        });
        if let ControlFlow::Break(f) = flow {
            return SaturationReport {
                counterexample: Some(f),
            };
        }
    }
    SaturationReport {
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(pairs: &[(usize, u8)]) -> TypeSpec {
        TypeSpec::new(pairs.iter().map(|&(v, b)| (v, b == 1))).unwrap()
    }

    #[test]
    fn adjacency_basics() {
        let k3 = FiniteGraph::complete(3).unwrap();
        assert!(k3.adjacent(0, 2).unwrap());
        let p3 = FiniteGraph::path(3).unwrap();
        assert!(!p3.adjacent(0, 2).unwrap());
        assert!(p3.adjacent(1, 1).unwrap());
        assert_eq!(
            p3.adjacent(0, 3),
            Err(GraphError::VertexOutOfRange {
                vertex: 3,
                order: 3
            })
        );
        assert_eq!(FiniteGraph::discrete(0), Err(GraphError::Empty));
    }

    #[test]
    fn loops_cannot_be_removed() {
        let mut g = FiniteGraph::complete(2).unwrap();
        assert_eq!(g.set_edge(1, 1, false), Err(GraphError::LoopRemoval(1)));
        g.set_edge(0, 1, false).unwrap();
        assert_eq!(g, FiniteGraph::discrete(2).unwrap());
    }

    #[test]
    fn edge_listing_is_canonical() {
        let g = FiniteGraph::from_edges(70, [(69, 3), (0, 65), (3, 4), (0, 1)]).unwrap();
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 1), (0, 65), (3, 4), (3, 69)]);
        assert_eq!(g.cross_edge_count(), 4);
    }

    #[test]
    fn realizes_examples() {
        let g = FiniteGraph::path(3).unwrap();
        assert!(realizes(&g, 2, &TypeSpec::empty()).unwrap());
        let k3 = FiniteGraph::complete(3).unwrap();
        assert!(realizes(&k3, 1, &ty(&[(0, 1)])).unwrap());
        assert!(realizes(&g, 2, &ty(&[(0, 0), (1, 1)])).unwrap());
        assert_eq!(
            realizes(&g, 1, &ty(&[(1, 1)])),
            Err(GraphError::RealizerInDomain(1))
        );
    }

    #[test]
    fn duplicate_type_vertex_rejected() {
        assert_eq!(
            TypeSpec::new([(2, true), (2, false)]),
            Err(GraphError::DuplicateTypeVertex(2))
        );
    }

    #[test]
    fn find_realizer_examples() {
        let k3 = FiniteGraph::complete(3).unwrap();
        assert_eq!(find_realizer(&k3, &ty(&[(0, 0)])).unwrap(), None);
        let c5 = FiniteGraph::cycle(5).unwrap();
        assert_eq!(find_realizer(&c5, &ty(&[(0, 1)])).unwrap(), Some(1));
        assert_eq!(find_realizer(&c5, &TypeSpec::empty()).unwrap(), Some(0));
        // vertex 0 is in the domain, so the smallest unconstrained vertex is 1
        assert_eq!(find_realizer(&c5, &ty(&[(0, 0)])).unwrap(), Some(2));
    }

    #[test]
    fn saturation_examples() {
        let k3 = FiniteGraph::complete(3).unwrap();
        assert!(is_n_saturated(&k3, 1).holds());
        let r = is_n_saturated(&k3, 2);
        assert_eq!(r.counterexample, Some(ty(&[(0, 0)])));

        let c5 = FiniteGraph::cycle(5).unwrap();
        assert!(is_n_saturated(&c5, 2).holds());
        let r = is_n_saturated(&c5, 3);
        assert_eq!(r.counterexample, Some(ty(&[(0, 1), (1, 1)])));
        assert_eq!(
            find_realizer(&c5, r.counterexample.as_ref().unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn weak_saturation_examples() {
        for n in 1..6 {
            let k = FiniteGraph::complete(n).unwrap();
            assert!(is_weakly_n_saturated(&k, n).holds(), "K_{n}");
        }
        let d2 = FiniteGraph::discrete(2).unwrap();
        assert!(!is_weakly_n_saturated(&d2, 2).holds());
        let c5 = FiniteGraph::cycle(5).unwrap();
        assert_eq!(
            is_weakly_n_saturated(&c5, 3).counterexample,
            Some(ty(&[(0, 1), (1, 1)]))
        );
    }

    #[test]
    fn small_graphs_enumerate_all_sizes() {
        // 2 vertices cannot be 4-saturated: A = V leaves no candidate.
        let k2 = FiniteGraph::complete(2).unwrap();
        let r = is_n_saturated(&k2, 4);
        assert!(!r.holds());
        assert_eq!(r.counterexample.unwrap().len(), 1);
    }

    #[test]
    fn subset_enumeration_order() {
        let mut seen = Vec::new();
        let _ = for_each_subset::<()>(4, 2, |s| {
            seen.push(s.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        let _ = for_each_subset::<()>(3, 0, |s| {
            assert!(s.is_empty());
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 1);
    }
}
