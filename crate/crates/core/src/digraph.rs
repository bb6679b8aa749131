//! The functional digraph of a partial transformation and its invariants.
//!
//! A transformation `a` is viewed as the digraph on `{0, .., n-1}` with an
//! arc `x -> x a` for every `x` in the domain. Connected components (in the
//! undirected sense, ignoring isolated vertices) are computed, classified,
//! and summarized into the pair `(cs, s)` that governs conjugacy testing:
//! `cs` is the divisor-minimal antichain of cycle lengths and `s` is the
//! largest root rank among cycle-free components.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::transform::PartialTransformation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigraphError {
    #[error("component contains a cycle; ranks exist only on cycle-free components")]
    CycleInComponent,
}

/// What a connected component looks like: either it contains a (unique)
/// cycle, or it is cycle-free with a unique terminal vertex, its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Cycle { length: usize },
    Cho { root: usize, root_rank: usize },
}

/// Length of the longest directed path ending at each vertex of a
/// cycle-free component. Sources have rank 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    ranks: BTreeMap<usize, usize>,
}

impl RankTable {
    pub fn get(&self, x: usize) -> Option<usize> {
        self.ranks.get(&x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ranks.iter().map(|(&x, &r)| (x, r))
    }
}

/// A connected component of the digraph: its vertex set, the parent
/// transformation restricted to it, and its classification.
#[derive(Debug, Clone)]
pub struct Component {
    vertices: Vec<usize>,
    restriction: PartialTransformation,
    kind: ComponentKind,
    /// For cycle components: the cycle's vertices in arc order, starting
    /// from the least vertex on the cycle.
    cycle_path: Option<Vec<usize>>,
    ranks: Option<RankTable>,
}

impl Component {
    fn from_restriction(vertices: Vec<usize>, restriction: PartialTransformation) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        // Walk from any vertex: out-degree is at most one, so the walk
        // either revisits a vertex (closing the unique cycle) or stops at
        // a terminal vertex (the unique root).
        let mut position = BTreeMap::new();
        let mut path = Vec::new();
        let mut x = vertices[0];
        loop {
            if let Some(&start) = position.get(&x) {
                let cycle: Vec<usize> = path[start..].to_vec();
                let least = cycle.iter().copied().min().expect("cycle is nonempty");
                let offset = cycle.iter().position(|&v| v == least).unwrap();
                let mut rotated = cycle[offset..].to_vec();
                rotated.extend_from_slice(&cycle[..offset]);
                return Component {
                    vertices,
                    restriction,
                    kind: ComponentKind::Cycle { length: rotated.len() },
                    cycle_path: Some(rotated),
                    ranks: None,
                };
            }
            position.insert(x, path.len());
            path.push(x);
            match restriction.apply(x) {
                Some(y) => x = y,
                None => {
                    let ranks = rank_over(&vertices, &restriction)
                        .expect("walk found no cycle, so the component is cycle-free");
                    let root_rank = ranks.get(x).expect("root is a component vertex");
                    debug_assert_eq!(
                        vertices.iter().filter(|&&v| restriction.apply(v).is_none()).count(),
                        1,
                        "a cycle-free component has exactly one terminal vertex"
                    );
                    return Component {
                        vertices,
                        restriction,
                        kind: ComponentKind::Cho { root: x, root_rank },
                        cycle_path: None,
                        ranks: Some(ranks),
                    };
                }
            }
        }
    }

    /// Component vertices, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// The parent transformation restricted to this component's vertices.
    /// It keeps the parent's ground-set size.
    pub fn restriction(&self) -> &PartialTransformation {
        &self.restriction
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }

    /// For a cycle component: its cycle in arc order, starting at the
    /// least cycle vertex. `None` for cycle-free components.
    pub fn cycle(&self) -> Option<&[usize]> {
        self.cycle_path.as_deref()
    }

    /// Vertex ranks; an error on components that contain a cycle.
    pub fn rank_table(&self) -> Result<&RankTable, DigraphError> {
        self.ranks.as_ref().ok_or(DigraphError::CycleInComponent)
    }
}

/// Kahn-style rank computation: a vertex's rank is ready once all its
/// preimages are ranked. Leaves a `CycleInComponent` error if the queue
/// drains before every vertex is ranked.
fn rank_over(
    vertices: &[usize],
    restriction: &PartialTransformation,
) -> Result<RankTable, DigraphError> {
    let mut pending: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, 0)).collect();
    for &v in vertices {
        if let Some(y) = restriction.apply(v) {
            *pending.get_mut(&y).expect("image stays in the component") += 1;
        }
    }
    let mut ranks: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue: Vec<usize> = vertices
        .iter()
        .copied()
        .filter(|v| pending[v] == 0)
        .collect();
    for &v in &queue {
        ranks.insert(v, 0);
    }
    while let Some(x) = queue.pop() {
        let rank_x = ranks[&x];
        if let Some(y) = restriction.apply(x) {
            let entry = ranks.entry(y).or_insert(0);
            *entry = (*entry).max(rank_x + 1);
            let left = pending.get_mut(&y).unwrap();
            *left -= 1;
            if *left == 0 {
                queue.push(y);
            }
        }
    }
    if ranks.len() != vertices.len() {
        return Err(DigraphError::CycleInComponent);
    }
    Ok(RankTable { ranks })
}

/// Splits the digraph into connected components. Isolated vertices
/// (outside the span) belong to no component. Components are returned in
/// ascending order of their least vertex.
pub fn decompose(alpha: &PartialTransformation) -> Vec<Component> {
    let mut uf = UnionFind::new(alpha.n());
    for x in alpha.dom() {
        uf.union(x, alpha.apply(x).unwrap());
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in alpha.span() {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut components: Vec<Component> = groups
        .into_values()
        .map(|vertices| {
            let members: BTreeSet<usize> = vertices.iter().copied().collect();
            let restriction = alpha.restrict_dom(|x| members.contains(&x));
            Component::from_restriction(vertices, restriction)
        })
        .collect();
    components.sort_by_key(Component::min_vertex);
    components
}

/// Multiset of cycle lengths over the digraph's components, as a
/// length-to-count map. For a permutation this is its cycle type.
pub fn cycle_type(alpha: &PartialTransformation) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for c in decompose(alpha) {
        if let ComponentKind::Cycle { length } = c.kind() {
            *counts.entry(length).or_insert(0) += 1;
        }
    }
    counts
}

/// The set of cycle lengths occurring in the digraph.
pub fn cycle_lengths(alpha: &PartialTransformation) -> BTreeSet<usize> {
    decompose(alpha)
        .iter()
        .filter_map(|c| match c.kind() {
            ComponentKind::Cycle { length } => Some(length),
            ComponentKind::Cho { .. } => None,
        })
        .collect()
}

/// Scans the values in ascending order and keeps each one that is not a
/// multiple of an already kept value: the divisor-minimal antichain that
/// still covers every input from below.
pub fn sac(values: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let sorted: BTreeSet<usize> = values.into_iter().collect();
    assert!(!sorted.contains(&0), "cycle lengths are positive");
    let mut kept: BTreeSet<usize> = BTreeSet::new();
    for m in sorted {
        if !kept.iter().any(|&k| m % k == 0) {
            kept.insert(m);
        }
    }
    kept
}

/// The conjugacy invariant of a transformation: the reduced cycle-length
/// set `cs` and the largest cycle-free root rank `s`. The pair `({}, 0)`
/// occurs exactly for the zero transformation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConjInvariant {
    pub cs: BTreeSet<usize>,
    pub s: usize,
}

impl std::fmt::Display for ConjInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(cs = {{")?;
        for (i, k) in self.cs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}, s = {})", self.s)
    }
}

pub fn invariant(alpha: &PartialTransformation) -> ConjInvariant {
    let components = decompose(alpha);
    let mut lengths = BTreeSet::new();
    let mut s = 0;
    for c in &components {
        match c.kind() {
            ComponentKind::Cycle { length } => {
                lengths.insert(length);
            }
            ComponentKind::Cho { root_rank, .. } => s = s.max(root_rank),
        }
    }
    ConjInvariant { cs: sac(lengths), s }
}

/// Renders the digraph in DOT format. Span vertices and arcs are always
/// emitted; isolated vertices only when `show_isolated` is set.
pub fn to_dot(alpha: &PartialTransformation, show_isolated: bool) -> String {
    let span = alpha.span();
    let mut out = String::from("digraph {\n");
    for x in 0..alpha.n() {
        if span.contains(&x) || show_isolated {
            out.push_str(&format!("  {x};\n"));
        }
    }
    for x in alpha.dom() {
        out.push_str(&format!("  {x} -> {};\n", alpha.apply(x).unwrap()));
    }
    out.push('}');
    out.push('\n');
    out
}

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
