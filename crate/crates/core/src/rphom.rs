//! Arc-preserving partial maps between the digraphs of two transformations.
//!
//! A partial map from the digraph of `a` to the digraph of `b` qualifies
//! when (a) both ends of every arc are in its domain and arcs map to arcs,
//! and (b) vertices without an out-arc map to vertices without an out-arc.
//! For maps on a common ground set this is exactly the intertwining
//! condition `a f = f b` together with `span(a) ⊆ dom(f)`, which is what
//! conjugation witnesses must satisfy.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::digraph::{Component, ComponentKind};
use crate::transform::PartialTransformation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RpHomError {
    #[error("map entry {x} -> _: source point out of range for n_src = {n_src}")]
    SourceOutOfRange { x: usize, n_src: usize },
    #[error("map entry {x} -> {y}: target point out of range for n_dst = {n_dst}")]
    TargetOutOfRange { x: usize, y: usize, n_dst: usize },
    #[error("map source size {map} does not match the source transformation size {alpha}")]
    SourceSizeMismatch { map: usize, alpha: usize },
    #[error("map target size {map} does not match the target transformation size {beta}")]
    TargetSizeMismatch { map: usize, beta: usize },
    #[error("cannot compose: left map targets size {left_dst}, right map expects size {right_src}")]
    ComposeSizeMismatch { left_dst: usize, right_src: usize },
    #[error("map is not square: n_src = {n_src}, n_dst = {n_dst}")]
    NotSquare { n_src: usize, n_dst: usize },
    #[error("component is not a cycle component")]
    NotACycleComponent,
    #[error("component is not a cycle-free component")]
    NotAChoComponent,
    #[error("no component map covers vertex {vertex}")]
    MissingComponentMap { vertex: usize },
    #[error("component maps overlap at vertex {point}")]
    OverlappingComponentMaps { point: usize },
}

/// A partial map from `{0, .., n_src-1}` to `{0, .., n_dst-1}`.
///
/// Serializes as `{"map": {"0": 3, "1": 4}}` with stringified keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    n_src: usize,
    n_dst: usize,
    entries: BTreeMap<usize, usize>,
}

impl PartialMap {
    pub fn new(
        n_src: usize,
        n_dst: usize,
        entries: BTreeMap<usize, usize>,
    ) -> Result<Self, RpHomError> {
        for (&x, &y) in &entries {
            if x >= n_src {
                return Err(RpHomError::SourceOutOfRange { x, n_src });
            }
            if y >= n_dst {
                return Err(RpHomError::TargetOutOfRange { x, y, n_dst });
            }
        }
        Ok(PartialMap { n_src, n_dst, entries })
    }

    pub fn from_pairs(
        n_src: usize,
        n_dst: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, RpHomError> {
        Self::new(n_src, n_dst, pairs.into_iter().collect())
    }

    pub fn n_src(&self) -> usize {
        self.n_src
    }

    pub fn n_dst(&self) -> usize {
        self.n_dst
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.entries.get(&x).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&x, &y)| (x, y))
    }

    pub fn dom_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_total(&self) -> bool {
        self.entries.len() == self.n_src
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.n_dst];
        for &y in self.entries.values() {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    /// Left-to-right composition: `x (self other) = (x self) other`.
    pub fn compose(&self, other: &Self) -> Result<Self, RpHomError> {
        if self.n_dst != other.n_src {
            return Err(RpHomError::ComposeSizeMismatch {
                left_dst: self.n_dst,
                right_src: other.n_src,
            });
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(&x, &y)| other.get(y).map(|z| (x, z)))
            .collect();
        Ok(PartialMap { n_src: self.n_src, n_dst: other.n_dst, entries })
    }

    /// Reads the map as a partial transformation; requires a square map.
    pub fn to_transformation(&self) -> Result<PartialTransformation, RpHomError> {
        if self.n_src != self.n_dst {
            return Err(RpHomError::NotSquare { n_src: self.n_src, n_dst: self.n_dst });
        }
        let mut image = vec![None; self.n_src];
        for (&x, &y) in &self.entries {
            image[x] = Some(y);
        }
        Ok(PartialTransformation::new(self.n_src, image).expect("entries are validated"))
    }

    pub fn from_transformation(t: &PartialTransformation) -> Self {
        let entries = t.dom().map(|x| (x, t.apply(x).unwrap())).collect();
        PartialMap { n_src: t.n(), n_dst: t.n(), entries }
    }
}

impl Serialize for PartialMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Keys<'a>(&'a BTreeMap<usize, usize>);
        impl Serialize for Keys<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_map(self.0.iter().map(|(x, &y)| (x.to_string(), y)))
            }
        }
        let mut s = serializer.serialize_struct("PartialMap", 1)?;
        s.serialize_field("map", &Keys(&self.entries))?;
        s.end()
    }
}

/// Shape requirement on a searched witness, matching the semigroup the
/// witness must live in: any partial map, a total map, an injective
/// partial map, or a bijection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessConstraint {
    AnyPartial,
    Total,
    InjectivePartial,
    InjectiveTotal,
}

impl WitnessConstraint {
    fn total(self) -> bool {
        matches!(self, WitnessConstraint::Total | WitnessConstraint::InjectiveTotal)
    }

    fn injective(self) -> bool {
        matches!(
            self,
            WitnessConstraint::InjectivePartial | WitnessConstraint::InjectiveTotal
        )
    }
}

/// Checks the two arc-preservation conditions directly on the digraphs.
pub fn verify_rp_hom(
    phi: &PartialMap,
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
) -> Result<bool, RpHomError> {
    check_sizes(phi, alpha, beta)?;
    for x in 0..alpha.n() {
        match alpha.apply(x) {
            Some(y) => {
                let (Some(px), Some(py)) = (phi.get(x), phi.get(y)) else {
                    return Ok(false);
                };
                if beta.apply(px) != Some(py) {
                    return Ok(false);
                }
            }
            None => {
                // x has no out-arc; its image, if any, must not have one.
                if let Some(px) = phi.get(x) {
                    if beta.apply(px).is_some() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Checks `alpha phi = phi beta` pointwise together with
/// `span(alpha) ⊆ dom(phi)`; equivalent to [`verify_rp_hom`].
pub fn verify_intertwining(
    phi: &PartialMap,
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
) -> Result<bool, RpHomError> {
    check_sizes(phi, alpha, beta)?;
    if alpha.span().iter().any(|&v| phi.get(v).is_none()) {
        return Ok(false);
    }
    for x in 0..alpha.n() {
        let through_alpha = alpha.apply(x).and_then(|y| phi.get(y));
        let through_phi = phi.get(x).and_then(|v| beta.apply(v));
        if through_alpha != through_phi {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_sizes(
    phi: &PartialMap,
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
) -> Result<(), RpHomError> {
    if phi.n_src != alpha.n() {
        return Err(RpHomError::SourceSizeMismatch { map: phi.n_src, alpha: alpha.n() });
    }
    if phi.n_dst != beta.n() {
        return Err(RpHomError::TargetSizeMismatch { map: phi.n_dst, beta: beta.n() });
    }
    Ok(())
}

/// Backtracking search for an arc-preserving map under the given shape
/// constraint. Source vertices are assigned in ascending order (all
/// vertices for total constraints, span vertices otherwise) and candidate
/// targets are tried in ascending order, so the first witness found is
/// deterministic. Assigning one vertex forces the whole forward walk
/// above it, which keeps propagation linear per trial.
///
/// Absence of a witness is a `None`, not an error.
pub fn search_rp_hom(
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
    constraint: WitnessConstraint,
) -> Option<PartialMap> {
    let order: Vec<usize> = if constraint.total() {
        (0..alpha.n()).collect()
    } else {
        alpha.span().into_iter().collect()
    };
    let mut search = Search {
        alpha,
        beta,
        injective: constraint.injective(),
        order,
        assigned: vec![None; alpha.n()],
        used: vec![false; beta.n()],
    };
    if !search.extend(0) {
        return None;
    }
    let entries = search
        .assigned
        .iter()
        .enumerate()
        .filter_map(|(x, y)| y.map(|y| (x, y)))
        .collect();
    Some(PartialMap { n_src: alpha.n(), n_dst: beta.n(), entries })
}

struct Search<'a> {
    alpha: &'a PartialTransformation,
    beta: &'a PartialTransformation,
    injective: bool,
    order: Vec<usize>,
    assigned: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, from: usize) -> bool {
        let mut i = from;
        while i < self.order.len() && self.assigned[self.order[i]].is_some() {
            i += 1;
        }
        let Some(&x) = self.order.get(i) else {
            return true;
        };
        for v in 0..self.beta.n() {
            if self.injective && self.used[v] {
                continue;
            }
            let mut trail = Vec::new();
            if self.try_assign(x, v, &mut trail) && self.extend(i + 1) {
                return true;
            }
            for t in trail {
                let w = self.assigned[t].take().expect("trail entries were assigned");
                self.used[w] = false;
            }
        }
        false
    }

    /// Assigns `x -> v` and everything it forces along the forward walk.
    /// On contradiction returns false, leaving the partial work on the
    /// trail for the caller to undo.
    fn try_assign(&mut self, x: usize, v: usize, trail: &mut Vec<usize>) -> bool {
        let mut stack = vec![(x, v)];
        while let Some((x, v)) = stack.pop() {
            if let Some(w) = self.assigned[x] {
                if w != v {
                    return false;
                }
                continue;
            }
            if self.injective && self.used[v] {
                return false;
            }
            match (self.alpha.apply(x), self.beta.apply(v)) {
                (Some(y), Some(w)) => stack.push((y, w)),
                // An arc's source must map onto an arc's source.
                (Some(_), None) => return false,
                // A vertex without an out-arc must stay without one.
                (None, Some(_)) => return false,
                (None, None) => {}
            }
            self.assigned[x] = Some(v);
            self.used[v] = true;
            trail.push(x);
        }
        true
    }
}

/// Maps a cycle component onto another whose cycle length divides it, by
/// winding distances-to-base around the shorter cycle. `Ok(None)` exactly
/// when the target length does not divide the source length.
pub fn build_cycle_hom(
    gamma: &Component,
    delta: &Component,
) -> Result<Option<PartialMap>, RpHomError> {
    let g_cycle = gamma.cycle().ok_or(RpHomError::NotACycleComponent)?;
    let d_cycle = delta.cycle().ok_or(RpHomError::NotACycleComponent)?;
    let (k, m) = (g_cycle.len(), d_cycle.len());
    if k % m != 0 {
        return Ok(None);
    }
    let base = g_cycle[0];
    let mut entries = BTreeMap::new();
    for &start in gamma.vertices() {
        // Steps from `start` to its first arrival at the cycle base; a
        // vertex at p steps lands m-(p mod m) steps around the target
        // cycle so that arcs advance both walks in lockstep.
        let mut x = start;
        let mut p = 0usize;
        while x != base {
            x = gamma
                .restriction()
                .apply(x)
                .expect("every vertex of a cycle component has an out-arc");
            p += 1;
        }
        entries.insert(start, d_cycle[(m - p % m) % m]);
    }
    Ok(Some(PartialMap {
        n_src: gamma.restriction().n(),
        n_dst: delta.restriction().n(),
        entries,
    }))
}

/// Maps a cycle-free component into another of at-least-equal root rank:
/// root to root, then each subtree into a subtree that is deep enough.
/// `Ok(None)` exactly when the source root rank exceeds the target's.
pub fn build_cho_hom(
    gamma: &Component,
    delta: &Component,
) -> Result<Option<PartialMap>, RpHomError> {
    let ComponentKind::Cho { root: g_root, root_rank: g_rank } = gamma.kind() else {
        return Err(RpHomError::NotAChoComponent);
    };
    let ComponentKind::Cho { root: d_root, root_rank: d_rank } = delta.kind() else {
        return Err(RpHomError::NotAChoComponent);
    };
    if g_rank > d_rank {
        return Ok(None);
    }
    let g_ranks = gamma.rank_table().expect("cycle-free component");
    let d_ranks = delta.rank_table().expect("cycle-free component");
    let g_pre = preimages(gamma);
    let d_pre = preimages(delta);
    let mut entries = BTreeMap::from([(g_root, d_root)]);
    let mut stack = vec![(g_root, d_root)];
    while let Some((x, y)) = stack.pop() {
        for &z in g_pre.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            let z_rank = g_ranks.get(z).expect("component vertex");
            // rank(y) exceeds rank(z), so some preimage of y is ranked
            // at least rank(z); take the least such vertex.
            let w = d_pre[&y]
                .iter()
                .copied()
                .find(|&w| d_ranks.get(w).expect("component vertex") >= z_rank)
                .expect("a deep-enough preimage exists below a higher-ranked vertex");
            entries.insert(z, w);
            stack.push((z, w));
        }
    }
    Ok(Some(PartialMap {
        n_src: gamma.restriction().n(),
        n_dst: delta.restriction().n(),
        entries,
    }))
}

/// In-neighbour lists of a component's vertices, each ascending.
fn preimages(c: &Component) -> BTreeMap<usize, Vec<usize>> {
    let mut pre: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in c.vertices() {
        if let Some(y) = c.restriction().apply(v) {
            pre.entry(y).or_default().push(v);
        }
    }
    pre
}

/// Joins per-component maps into one map covering all of `span(alpha)`.
/// Errors if a span vertex is left uncovered or two maps overlap.
pub fn assemble_hom(
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
    maps: &[PartialMap],
) -> Result<PartialMap, RpHomError> {
    let mut entries: BTreeMap<usize, usize> = BTreeMap::new();
    for map in maps {
        if map.n_src != alpha.n() {
            return Err(RpHomError::SourceSizeMismatch { map: map.n_src, alpha: alpha.n() });
        }
        if map.n_dst != beta.n() {
            return Err(RpHomError::TargetSizeMismatch { map: map.n_dst, beta: beta.n() });
        }
        for (x, y) in map.entries() {
            if entries.insert(x, y).is_some() {
                return Err(RpHomError::OverlappingComponentMaps { point: x });
            }
        }
    }
    if let Some(vertex) = alpha.span().into_iter().find(|v| !entries.contains_key(v)) {
        return Err(RpHomError::MissingComponentMap { vertex });
    }
    Ok(PartialMap { n_src: alpha.n(), n_dst: beta.n(), entries })
}
