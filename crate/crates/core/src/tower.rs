//! Finite initial segments of the inverse system `(G_d, p_d)` and the
//! vertices of its limit, represented by bond-consistent prefixes.
//!
//! `G_0` is the complete graph `K_n`; each `G_{d+1}` is a verified product
//! extension of `G_d` with `m_d + 1` copies, and `p_d` is its projection. A
//! limit vertex is a thread `a` with `p_d(a(d+1)) = a(d)`; only finite
//! prefixes are ever materialized, continued past the tower top by the copy-0
//! section `i ↦ (i, 0)`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::builder::{
    accepts, build_extension, sample_product_graph_on_stream, BuildError, BuildMode, BuildParams,
    DEFAULT_MAX_ATTEMPTS,
};
use crate::graph::{find_realizer, is_n_saturated, FiniteGraph, TypeSpec};
use crate::morphism::{
    check_lifting_property, first_unlifted_edge, first_unpreserved_edge, is_surjective, GraphMap,
    LiftFailure, MorphismError,
};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("saturation target n must be at least 1")]
    InvalidN,
    #[error("malformed tower: {0}")]
    Malformed(String),
    #[error(transparent)]
    Map(#[from] MorphismError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("depth {requested} out of range (available: {available})")]
    DepthOutOfRange { requested: usize, available: usize },
    #[error("invalid thread prefix: {0}")]
    InvalidPrefix(String),
    #[error("{given} constraints given, at most {max} allowed")]
    TooManyConstraints { given: usize, max: usize },
    #[error("constraints {first} and {second} describe the same thread")]
    NotSeparated { first: usize, second: usize },
    #[error("no materialized level realizes the type; the tower must grow")]
    NoRealizingLevel,
    #[error("no admissible lift at level {level}; tower invariants are broken")]
    LiftFailed { level: usize },
}

/// The first violated tower invariant found by [`verify_tower`] or
/// [`verify_provenance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerViolation {
    RootNotComplete,
    ProductEncoding {
        bond: usize,
    },
    NotSurjective {
        bond: usize,
    },
    NotHomomorphism {
        bond: usize,
        edge: (usize, usize),
    },
    NotStrict {
        bond: usize,
        edge: (usize, usize),
    },
    NoSplit {
        bond: usize,
        vertex: usize,
    },
    NotSaturated {
        level: usize,
        counterexample: TypeSpec,
    },
    LiftingFails {
        bond: usize,
        failure: LiftFailure,
    },
    NotReproducible {
        level: usize,
    },
}

impl TowerViolation {
    /// Short invariant name, stable for scripting.
    pub fn invariant(&self) -> &'static str {
        match self {
            TowerViolation::RootNotComplete => "root-complete",
            TowerViolation::ProductEncoding { .. } => "product-encoding",
            TowerViolation::NotSurjective { .. } => "quotient-surjective",
            TowerViolation::NotHomomorphism { .. } => "quotient-homomorphism",
            TowerViolation::NotStrict { .. } => "quotient-strict",
            TowerViolation::NoSplit { .. } => "one-step-splitting",
            TowerViolation::NotSaturated { .. } => "level-saturation",
            TowerViolation::LiftingFails { .. } => "lifting-property",
            TowerViolation::NotReproducible { .. } => "seeded-reproducibility",
        }
    }
}

impl fmt::Display for TowerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.invariant())?;
        match self {
            TowerViolation::RootNotComplete => write!(f, "level 0 is not the complete graph K_n"),
            TowerViolation::ProductEncoding { bond } => write!(
                f,
                "bond {bond} does not match the product encoding of level {} over level {bond}",
                bond + 1
            ),
            TowerViolation::NotSurjective { bond } => write!(f, "bond {bond} is not surjective"),
            TowerViolation::NotHomomorphism { bond, edge } => write!(
                f,
                "bond {bond} maps edge {edge:?} of level {} to a non-edge",
                bond + 1
            ),
            TowerViolation::NotStrict { bond, edge } => write!(
                f,
                "bond {bond}: edge {edge:?} of level {bond} has no preimage edge"
            ),
            TowerViolation::NoSplit { bond, vertex } => write!(
                f,
                "vertex {vertex} of level {bond} has fewer than two preimages"
            ),
            TowerViolation::NotSaturated {
                level,
                counterexample,
            } => write!(
                f,
                "level {level} is not n-saturated: type {:?} is not realized",
                counterexample.entries()
            ),
            TowerViolation::LiftingFails { bond, failure } => write!(
                f,
                "bond {bond} fails the lifting property at vertex {} with targets {:?}",
                failure.vertex, failure.targets
            ),
            TowerViolation::NotReproducible { level } => {
                write!(f, "level {level} is not the sample its seed produces")
            }
        }
    }
}

impl std::error::Error for TowerViolation {}

/// Levels `G_0..G_D` of the inverse system with their bonding maps.
#[derive(Debug, Clone)]
pub struct Tower {
    n: usize,
    seed: u64,
    levels: Vec<Arc<FiniteGraph>>,
    bonds: Vec<GraphMap>,
    per_level_m: Vec<usize>,
}

impl Tower {
    /// Depth-0 tower holding only `K_n`.
    pub fn new(n: usize, seed: u64) -> Result<Self, TowerError> {
        if n == 0 {
            return Err(TowerError::InvalidN);
        }
        let root = FiniteGraph::complete(n).map_err(|e| TowerError::Malformed(e.to_string()))?;
        Ok(Tower {
            n,
            seed,
            levels: vec![Arc::new(root)],
            bonds: Vec::new(),
            per_level_m: Vec::new(),
        })
    }

    /// Assembles a tower from raw parts, checking only their shapes.
    pub fn from_parts(
        n: usize,
        seed: u64,
        levels: Vec<FiniteGraph>,
        bonds: Vec<Vec<usize>>,
        per_level_m: Vec<usize>,
    ) -> Result<Self, TowerError> {
        if n == 0 {
            return Err(TowerError::InvalidN);
        }
        if levels.is_empty() {
            return Err(TowerError::Malformed("no levels".into()));
        }
        if bonds.len() + 1 != levels.len() || per_level_m.len() + 1 != levels.len() {
            return Err(TowerError::Malformed(format!(
                "{} levels need {} bonds and m values, got {} and {}",
                levels.len(),
                levels.len() - 1,
                bonds.len(),
                per_level_m.len()
            )));
        }
        let levels: Vec<Arc<FiniteGraph>> = levels.into_iter().map(Arc::new).collect();
        let bonds = bonds
            .into_iter()
            .enumerate()
            .map(|(d, image)| GraphMap::new(levels[d + 1].clone(), levels[d].clone(), image))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Tower {
            n,
            seed,
            levels,
            bonds,
            per_level_m,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the top level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, d: usize) -> &Arc<FiniteGraph> {
        &self.levels[d]
    }

    pub fn levels(&self) -> &[Arc<FiniteGraph>] {
        &self.levels
    }

    /// `bonds()[d]` maps level `d + 1` onto level `d`.
    pub fn bonds(&self) -> &[GraphMap] {
        &self.bonds
    }

    pub fn per_level_m(&self) -> &[usize] {
        &self.per_level_m
    }

    pub fn top(&self) -> &Arc<FiniteGraph> {
        self.levels.last().expect("a tower has a root")
    }

    /// Seed of the rejection loop that builds level `d + 1`.
    pub fn level_seed(&self, d: usize) -> u64 {
        derive_seed(self.seed, d as u64)
    }

    /// Appends one level built over the current top. Lower levels are shared.
    pub fn extend(&self, mode: BuildMode, m_override: Option<usize>) -> Result<Tower, TowerError> {
        let d = self.depth();
        let params = BuildParams {
            n: self.n,
            base: self.top().clone(),
            mode,
            m: m_override,
            seed: self.level_seed(d),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        };
        let ext = build_extension(&params)?;
        let mut next = self.clone();
        next.levels.push(ext.graph);
        next.bonds.push(ext.projection);
        next.per_level_m.push(ext.m);
        Ok(next)
    }

    /// The first `depth + 1` levels.
    pub fn truncated(&self, depth: usize) -> Result<Tower, TowerError> {
        self.check_depth(depth)?;
        Ok(Tower {
            n: self.n,
            seed: self.seed,
            levels: self.levels[..=depth].to_vec(),
            bonds: self.bonds[..depth].to_vec(),
            per_level_m: self.per_level_m[..depth].to_vec(),
        })
    }

    fn check_depth(&self, depth: usize) -> Result<(), TowerError> {
        if depth > self.depth() {
            Err(TowerError::DepthOutOfRange {
                requested: depth,
                available: self.depth(),
            })
        } else {
            Ok(())
        }
    }

    /// Copy-0 preimage of `v` under bond `d`.
    fn section(&self, d: usize, v: usize) -> usize {
        v * (self.per_level_m[d] + 1)
    }

    /// Preimages of `v` under bond `d`, ascending.
    fn fiber(&self, d: usize, v: usize) -> std::ops::Range<usize> {
        let c = self.per_level_m[d] + 1;
        v * c..(v + 1) * c
    }

    /// Checks that `prefix` fits in this tower and is bond-consistent.
    pub fn check_prefix(&self, prefix: &ThreadPrefix) -> Result<(), TowerError> {
        let entries = &prefix.entries;
        if entries.len() > self.levels.len() {
            return Err(TowerError::InvalidPrefix(format!(
                "{} entries exceed the {} tower levels",
                entries.len(),
                self.levels.len()
            )));
        }
        for (d, &x) in entries.iter().enumerate() {
            if x >= self.levels[d].order() {
                return Err(TowerError::InvalidPrefix(format!(
                    "entry {x} at level {d} exceeds the level's {} vertices",
                    self.levels[d].order()
                )));
            }
            if d > 0 && self.bonds[d - 1].apply(x) != entries[d - 1] {
                return Err(TowerError::InvalidPrefix(format!(
                    "entry {x} at level {d} does not project to {}",
                    entries[d - 1]
                )));
            }
        }
        Ok(())
    }

    /// The canonical thread through `vertex` at `level`: projected down by the
    /// bonds and lifted up to the top by the copy-0 section.
    pub fn canonical_thread(
        &self,
        level: usize,
        vertex: usize,
    ) -> Result<ThreadPrefix, TowerError> {
        self.check_depth(level)?;
        if vertex >= self.levels[level].order() {
            return Err(TowerError::InvalidPrefix(format!(
                "vertex {vertex} out of range at level {level}"
            )));
        }
        let mut entries = vec![0; level + 1];
        entries[level] = vertex;
        for d in (0..level).rev() {
            entries[d] = self.bonds[d].apply(entries[d + 1]);
        }
        canonical_extension(self, &ThreadPrefix { entries }, self.depth())
    }
}

/// Bond-consistent vertex choices `a(0), …, a(d)`; a basic clopen set of the
/// limit is the set of threads sharing such a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThreadPrefix {
    entries: Vec<usize>,
}

impl ThreadPrefix {
    /// Wraps raw entries; consistency is checked against a tower on use.
    pub fn new(entries: Vec<usize>) -> Result<Self, TowerError> {
        if entries.is_empty() {
            return Err(TowerError::InvalidPrefix("empty prefix".into()));
        }
        Ok(ThreadPrefix { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Index of the last materialized level.
    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    /// `q_d(a) = a(d)`.
    pub fn at(&self, d: usize) -> usize {
        self.entries[d]
    }

    pub fn truncated(&self, depth: usize) -> ThreadPrefix {
        ThreadPrefix {
            entries: self.entries[..=depth.min(self.depth())].to_vec(),
        }
    }
}

/// Extends `prefix` to `target_depth` through copy-0 preimages.
pub fn canonical_extension(
    tower: &Tower,
    prefix: &ThreadPrefix,
    target_depth: usize,
) -> Result<ThreadPrefix, TowerError> {
    tower.check_depth(target_depth)?;
    tower.check_prefix(prefix)?;
    if prefix.depth() > target_depth {
        return Err(TowerError::DepthOutOfRange {
            requested: target_depth,
            available: prefix.depth(),
        });
    }
    let mut entries = prefix.entries.clone();
    for d in prefix.depth()..target_depth {
        let top = *entries.last().expect("nonempty");
        entries.push(tower.section(d, top));
    }
    Ok(ThreadPrefix { entries })
}

/// Finite-level evidence about adjacency of two limit vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitAdjacency {
    /// The entries at this level are non-adjacent, so the threads are
    /// non-adjacent in the limit.
    SeparatedNonAdjacent(usize),
    /// Adjacent at every level up to the inspected depth; undecided beyond.
    AdjacentThroughDepth(usize),
}

pub fn adjacency_status(
    tower: &Tower,
    a: &ThreadPrefix,
    b: &ThreadPrefix,
    depth: usize,
) -> Result<LimitAdjacency, TowerError> {
    tower.check_depth(depth)?;
    tower.check_prefix(a)?;
    tower.check_prefix(b)?;
    let available = a.depth().min(b.depth());
    if depth > available {
        return Err(TowerError::DepthOutOfRange {
            requested: depth,
            available,
        });
    }
    for d in 0..=depth {
        if !tower.levels[d].has_edge(a.entries[d], b.entries[d]) {
            return Ok(LimitAdjacency::SeparatedNonAdjacent(d));
        }
    }
    Ok(LimitAdjacency::AdjacentThroughDepth(depth))
}

/// A limit vertex `thread` that the realizer must be adjacent to
/// (`positive`) or non-adjacent to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub thread: ThreadPrefix,
    pub positive: bool,
}

impl Constraint {
    pub fn new(thread: ThreadPrefix, positive: bool) -> Self {
        Constraint { thread, positive }
    }
}

/// A realizer of a type over finitely many limit vertices, materialized up to
/// the depth of its prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizerHandle {
    pub prefix: ThreadPrefix,
    /// Level where the realizer was chosen: constraint entries are pairwise
    /// distinct there and the realizer is non-adjacent to every negative one.
    pub separation_level: usize,
    /// Constraint threads, extended to the prefix depth, in input order.
    pub positive: Vec<ThreadPrefix>,
    pub negative: Vec<ThreadPrefix>,
}

impl RealizerHandle {
    pub fn depth(&self) -> usize {
        self.prefix.depth()
    }
}

/// Realizes the type given by `constraints` in the limit of `tower`.
///
/// The realizer is chosen at the lowest level where the constraint entries
/// are pairwise distinct and the level has a realizer (smallest index),
/// projected down by the bonds and lifted up one level at a time to the
/// smallest preimage adjacent to every positive entry.
pub fn realize_type(
    tower: &Tower,
    constraints: &[Constraint],
) -> Result<RealizerHandle, TowerError> {
    let max = tower.n - 1;
    if constraints.len() > max {
        return Err(TowerError::TooManyConstraints {
            given: constraints.len(),
            max,
        });
    }
    let top = tower.depth();
    let threads = constraints
        .iter()
        .map(|c| canonical_extension(tower, &c.thread, top))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..threads.len() {
        for j in i + 1..threads.len() {
            if threads[i].entries[top] == threads[j].entries[top] {
                return Err(TowerError::NotSeparated {
                    first: i,
                    second: j,
                });
            }
        }
    }

    let mut anchor = None;
    for level in 0..=top {
        let mut at: Vec<usize> = threads.iter().map(|t| t.entries[level]).collect();
        at.sort_unstable();
        if at.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let f = TypeSpec::new(
            threads
                .iter()
                .zip(constraints)
                .map(|(t, c)| (t.entries[level], c.positive)),
        )
        .expect("entries are distinct");
        if let Some(v) = find_realizer(&tower.levels[level], &f).expect("entries are in range") {
            anchor = Some((level, v));
            break;
        }
    }
    let (sep, v) = anchor.ok_or(TowerError::NoRealizingLevel)?;

    let mut entries = vec![0; top + 1];
    entries[sep] = v;
    for d in (0..sep).rev() {
        entries[d] = tower.bonds[d].apply(entries[d + 1]);
    }
    for d in sep..top {
        entries[d + 1] = lift(tower, d, entries[d], constraints, &threads)?;
    }

    let (mut positive, mut negative) = (Vec::new(), Vec::new());
    for (t, c) in threads.into_iter().zip(constraints) {
        if c.positive {
            positive.push(t);
        } else {
            negative.push(t);
        }
    }
    Ok(RealizerHandle {
        prefix: ThreadPrefix { entries },
        separation_level: sep,
        positive,
        negative,
    })
}

/// Smallest preimage of `v` under bond `d` adjacent to every positive
/// thread's entry at level `d + 1`.
fn lift(
    tower: &Tower,
    d: usize,
    v: usize,
    constraints: &[Constraint],
    threads: &[ThreadPrefix],
) -> Result<usize, TowerError> {
    let g = &tower.levels[d + 1];
    let targets: Vec<usize> = threads
        .iter()
        .zip(constraints)
        .filter(|(_, c)| c.positive)
        .map(|(t, _)| t.entries[d + 1])
        .collect();
    tower
        .fiber(d, v)
        .find(|&w| targets.iter().all(|&x| g.has_edge(w, x)))
        .ok_or(TowerError::LiftFailed { level: d + 1 })
}

/// Like [`realize_type`], but grows the tower in certified mode while no
/// materialized level realizes the type. Returns the (possibly) grown tower.
pub fn realize_type_extending(
    tower: &Tower,
    constraints: &[Constraint],
) -> Result<(Tower, RealizerHandle), TowerError> {
    let mut t = tower.clone();
    loop {
        match realize_type(&t, constraints) {
            Err(TowerError::NoRealizingLevel) => t = t.extend(BuildMode::Certified, None)?,
            Ok(h) => return Ok((t, h)),
            Err(e) => return Err(e),
        }
    }
}

/// Extends a realizer by one level of a tower that has grown past it.
pub fn extend_realizer(tower: &Tower, h: &RealizerHandle) -> Result<RealizerHandle, TowerError> {
    let d = h.depth();
    let next = d + 1;
    tower.check_depth(next)?;
    tower.check_prefix(&h.prefix)?;
    let grow = |t: &ThreadPrefix| canonical_extension(tower, t, next);
    let positive = h.positive.iter().map(grow).collect::<Result<Vec<_>, _>>()?;
    let negative = h.negative.iter().map(grow).collect::<Result<Vec<_>, _>>()?;
    let constraints: Vec<Constraint> = positive
        .iter()
        .map(|t| Constraint::new(t.clone(), true))
        .collect();
    let w = lift(tower, d, h.prefix.entries[d], &constraints, &positive)?;
    let mut entries = h.prefix.entries.clone();
    entries.push(w);
    Ok(RealizerHandle {
        prefix: ThreadPrefix { entries },
        separation_level: h.separation_level,
        positive,
        negative,
    })
}

/// Extends a realizer level by level up to `depth`.
pub fn extend_realizer_to(
    tower: &Tower,
    h: &RealizerHandle,
    depth: usize,
) -> Result<RealizerHandle, TowerError> {
    let mut cur = h.clone();
    while cur.depth() < depth {
        cur = extend_realizer(tower, &cur)?;
    }
    Ok(cur)
}

/// Re-checks a realizer from raw adjacency, independent of how it was built:
/// every prefix is bond-consistent, positives are adjacent at every level,
/// and at the separation level the constraint entries are distinct, differ
/// from the realizer, and negatives are non-adjacent.
pub fn verify_realization(tower: &Tower, h: &RealizerHandle) -> Result<(), String> {
    let depth = h.prefix.depth();
    if depth > tower.depth() {
        return Err(format!("prefix depth {depth} exceeds the tower"));
    }
    let consistent = |t: &ThreadPrefix, what: &str| -> Result<(), String> {
        if t.depth() != depth {
            return Err(format!("{what} has depth {} instead of {depth}", t.depth()));
        }
        for d in 0..depth {
            if tower.bonds[d].image()[t.entries[d + 1]] != t.entries[d] {
                return Err(format!("{what} breaks bond consistency at level {}", d + 1));
            }
        }
        Ok(())
    };
    consistent(&h.prefix, "realizer")?;
    for (i, t) in h.positive.iter().enumerate() {
        consistent(t, &format!("positive constraint {i}"))?;
        for d in 0..=depth {
            let adjacent = tower.levels[d]
                .adjacent(h.prefix.entries[d], t.entries[d])
                .map_err(|e| e.to_string())?;
            if !adjacent {
                return Err(format!(
                    "not adjacent to positive constraint {i} at level {d}"
                ));
            }
        }
    }
    let sep = h.separation_level;
    if sep > depth {
        return Err(format!("separation level {sep} above the prefix"));
    }
    let v = h.prefix.entries[sep];
    let mut seen = vec![v];
    for (i, t) in h.negative.iter().enumerate() {
        consistent(t, &format!("negative constraint {i}"))?;
        let adjacent = tower.levels[sep]
            .adjacent(v, t.entries[sep])
            .map_err(|e| e.to_string())?;
        if adjacent {
            return Err(format!(
                "adjacent to negative constraint {i} at separation level {sep}"
            ));
        }
    }
    for t in h.positive.iter().chain(&h.negative) {
        let x = t.entries[sep];
        if seen.contains(&x) {
            return Err(format!(
                "entry {x} repeats at separation level {sep} (constraint or realizer)"
            ));
        }
        seen.push(x);
    }
    Ok(())
}

/// Re-checks every tower invariant from the stored graphs and maps.
pub fn verify_tower(tower: &Tower) -> Result<(), TowerViolation> {
    let n = tower.n;
    let root = &tower.levels[0];
    if root.order() != n || root.cross_edge_count() != n * (n - 1) / 2 {
        return Err(TowerViolation::RootNotComplete);
    }
    for (d, bond) in tower.bonds.iter().enumerate() {
        let c = tower.per_level_m[d] + 1;
        let lower = &tower.levels[d];
        let upper = &tower.levels[d + 1];
        let encoded = tower.per_level_m[d] >= 1
            && upper.order() == lower.order() * c
            && bond.image().iter().enumerate().all(|(u, &x)| x == u / c);
        if !encoded {
            return Err(TowerViolation::ProductEncoding { bond: d });
        }
        if !is_surjective(bond) {
            return Err(TowerViolation::NotSurjective { bond: d });
        }
        if let Some(edge) = first_unpreserved_edge(bond) {
            return Err(TowerViolation::NotHomomorphism { bond: d, edge });
        }
        if let Some(edge) = first_unlifted_edge(bond) {
            return Err(TowerViolation::NotStrict { bond: d, edge });
        }
        let fibers = bond.fibers();
        if let Some(vertex) = fibers.iter().position(|f| f.len() < 2) {
            return Err(TowerViolation::NoSplit { bond: d, vertex });
        }
        if let Some(counterexample) = is_n_saturated(upper, n).counterexample {
            return Err(TowerViolation::NotSaturated {
                level: d + 1,
                counterexample,
            });
        }
        if let Some(failure) = check_lifting_property(bond, n).counterexample {
            return Err(TowerViolation::LiftingFails { bond: d, failure });
        }
    }
    Ok(())
}

/// Replays the seeded rejection loop of every level and checks that the
/// stored level is the sample it accepts. Assumes the tower passed
/// [`verify_tower`] (in particular the product encoding).
pub fn verify_provenance(tower: &Tower) -> Result<(), TowerViolation> {
    for d in 0..tower.depth() {
        let base = &tower.levels[d];
        let stored = &tower.levels[d + 1];
        let m = tower.per_level_m[d];
        let seed = tower.level_seed(d);
        let mut matched = false;
        for attempt in 0..DEFAULT_MAX_ATTEMPTS {
            let (sample, _) = sample_product_graph_on_stream(base, m, seed, attempt);
            if *sample == **stored {
                matched = true;
                break;
            }
            // the build would have stopped at this sample
            if accepts(&sample, base, m, tower.n).unwrap_or(false) {
                break;
            }
        }
        if !matched {
            return Err(TowerViolation::NotReproducible { level: d + 1 });
        }
    }
    Ok(())
}

/// Builds a tower of the given depth by repeated extension.
pub fn build_tower(
    n: usize,
    depth: usize,
    seed: u64,
    mode: BuildMode,
    m_override: Option<usize>,
) -> Result<Tower, TowerError> {
    let mut t = Tower::new(n, seed)?;
    for _ in 0..depth {
        t = t.extend(mode, m_override)?;
    }
    Ok(t)
}
