//! Conjugacy deciders for the four classical transformation families.
//!
//! Two transformations are conjugate exactly when an arc-preserving map
//! exists from each digraph to the other, with the map shaped like an
//! element of the ambient family. For the partial and full families this
//! reduces to invariant equality (`cs` and `s`, or `cs` alone), and for
//! permutations to cycle-type equality; the injective-partial family has
//! no such shortcut and is decided by search only.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::digraph::{cycle_type, decompose, invariant, Component, ComponentKind, ConjInvariant};
use crate::rphom::{
    assemble_hom, build_cho_hom, build_cycle_hom, search_rp_hom, PartialMap, WitnessConstraint,
};
use crate::transform::PartialTransformation;

/// The four transformation semigroups over a common finite ground set:
/// all partial maps, all total maps, all injective partial maps, and all
/// bijections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SemigroupFamily {
    #[serde(rename = "p")]
    PX,
    #[serde(rename = "t")]
    TX,
    #[serde(rename = "i")]
    IX,
    #[serde(rename = "sym")]
    SymX,
}

impl SemigroupFamily {
    pub fn member(self, a: &PartialTransformation) -> bool {
        match self {
            SemigroupFamily::PX => true,
            SemigroupFamily::TX => a.is_full(),
            SemigroupFamily::IX => a.is_injective(),
            SemigroupFamily::SymX => a.is_permutation(),
        }
    }

    /// The witness shape an element of this family must have.
    pub fn constraint(self) -> WitnessConstraint {
        match self {
            SemigroupFamily::PX => WitnessConstraint::AnyPartial,
            SemigroupFamily::TX => WitnessConstraint::Total,
            SemigroupFamily::IX => WitnessConstraint::InjectivePartial,
            SemigroupFamily::SymX => WitnessConstraint::InjectiveTotal,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            SemigroupFamily::PX => "p",
            SemigroupFamily::TX => "t",
            SemigroupFamily::IX => "i",
            SemigroupFamily::SymX => "sym",
        }
    }
}

impl std::fmt::Display for SemigroupFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SemigroupFamily::PX => "P(X)",
            SemigroupFamily::TX => "T(X)",
            SemigroupFamily::IX => "I(X)",
            SemigroupFamily::SymX => "Sym(X)",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjugacyError {
    #[error("size mismatch: left has n = {left}, right has n = {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("the {which} transformation is not in {family}: it is {reason}")]
    NotInFamily {
        family: SemigroupFamily,
        which: &'static str,
        reason: &'static str,
    },
}

/// Outcome of a conjugacy test. Both invariants are always carried for
/// diagnostics; witnesses are present only for conjugate pairs, and only
/// when they were requested or fell out of the decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyVerdict {
    pub conjugate: bool,
    pub invariants_src: ConjInvariant,
    pub invariants_dst: ConjInvariant,
    pub witness_forward: Option<PartialMap>,
    pub witness_backward: Option<PartialMap>,
}

impl Serialize for ConjugacyVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let extra = self.witness_forward.iter().count() + self.witness_backward.iter().count();
        let mut s = serializer.serialize_struct("ConjugacyVerdict", 5 + extra)?;
        s.serialize_field("conjugate", &self.conjugate)?;
        s.serialize_field("cs_src", &self.invariants_src.cs)?;
        s.serialize_field("s_src", &self.invariants_src.s)?;
        s.serialize_field("cs_dst", &self.invariants_dst.cs)?;
        s.serialize_field("s_dst", &self.invariants_dst.s)?;
        match &self.witness_forward {
            Some(w) => s.serialize_field("witness_forward", w)?,
            None => s.skip_field("witness_forward")?,
        }
        match &self.witness_backward {
            Some(w) => s.serialize_field("witness_backward", w)?,
            None => s.skip_field("witness_backward")?,
        }
        s.end()
    }
}

fn check_common_ground_set(
    a: &PartialTransformation,
    b: &PartialTransformation,
) -> Result<(), ConjugacyError> {
    if a.n() != b.n() {
        return Err(ConjugacyError::SizeMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

fn check_member(
    family: SemigroupFamily,
    a: &PartialTransformation,
    which: &'static str,
) -> Result<(), ConjugacyError> {
    if family.member(a) {
        return Ok(());
    }
    let reason = if !a.is_full() && matches!(family, SemigroupFamily::TX | SemigroupFamily::SymX)
    {
        "not full"
    } else {
        "not injective"
    };
    Err(ConjugacyError::NotInFamily { family, which, reason })
}

/// Decides conjugacy in the partial-transformation semigroup: conjugate
/// exactly when the `(cs, s)` invariants agree. Witnesses, when asked
/// for, are assembled per component of the source.
pub fn conj_p_finite(
    a: &PartialTransformation,
    b: &PartialTransformation,
    with_witness: bool,
) -> Result<ConjugacyVerdict, ConjugacyError> {
    check_common_ground_set(a, b)?;
    let invariants_src = invariant(a);
    let invariants_dst = invariant(b);
    let conjugate = invariants_src == invariants_dst;
    let (witness_forward, witness_backward) = if conjugate && with_witness {
        (Some(component_scheme(a, b)), Some(component_scheme(b, a)))
    } else {
        (None, None)
    };
    Ok(ConjugacyVerdict {
        conjugate,
        invariants_src,
        invariants_dst,
        witness_forward,
        witness_backward,
    })
}

/// Decides conjugacy in the full-transformation semigroup. Only full
/// inputs are accepted; the decision is `cs` equality (`s` is always 0
/// for full maps) and witnesses come out total because the source span
/// is the whole ground set.
pub fn conj_t_finite(
    a: &PartialTransformation,
    b: &PartialTransformation,
    with_witness: bool,
) -> Result<ConjugacyVerdict, ConjugacyError> {
    check_member(SemigroupFamily::TX, a, "first")?;
    check_member(SemigroupFamily::TX, b, "second")?;
    let verdict = conj_p_finite(a, b, with_witness)?;
    debug_assert!(verdict
        .witness_forward
        .as_ref()
        .map_or(true, PartialMap::is_total));
    debug_assert!(verdict
        .witness_backward
        .as_ref()
        .map_or(true, PartialMap::is_total));
    Ok(verdict)
}

/// Decides conjugacy in the symmetric group: cycle types must be equal,
/// and the witness is the relabeling bijection obtained by pairing
/// same-length cycles in order of least vertex.
pub fn conj_sym_finite(
    a: &PartialTransformation,
    b: &PartialTransformation,
    with_witness: bool,
) -> Result<ConjugacyVerdict, ConjugacyError> {
    check_member(SemigroupFamily::SymX, a, "first")?;
    check_member(SemigroupFamily::SymX, b, "second")?;
    check_common_ground_set(a, b)?;
    let conjugate = cycle_type(a) == cycle_type(b);
    let (witness_forward, witness_backward) = if conjugate && with_witness {
        let forward = pair_cycles(a, b);
        let backward = PartialMap::from_pairs(b.n(), a.n(), forward.entries().map(|(x, y)| (y, x)))
            .expect("inverse of a bijection");
        (Some(forward), Some(backward))
    } else {
        (None, None)
    };
    Ok(ConjugacyVerdict {
        conjugate,
        invariants_src: invariant(a),
        invariants_dst: invariant(b),
        witness_forward,
        witness_backward,
    })
}

/// Decides conjugacy by searching for arc-preserving maps in both
/// directions under the family's shape constraint. This is the only
/// decider for the injective-partial family, and the reference oracle
/// for the others.
pub fn conj_oracle(
    a: &PartialTransformation,
    b: &PartialTransformation,
    family: SemigroupFamily,
) -> Result<ConjugacyVerdict, ConjugacyError> {
    check_member(family, a, "first")?;
    check_member(family, b, "second")?;
    check_common_ground_set(a, b)?;
    let forward = search_rp_hom(a, b, family.constraint());
    let backward = search_rp_hom(b, a, family.constraint());
    let conjugate = forward.is_some() && backward.is_some();
    Ok(ConjugacyVerdict {
        conjugate,
        invariants_src: invariant(a),
        invariants_dst: invariant(b),
        witness_forward: forward.filter(|_| conjugate),
        witness_backward: backward.filter(|_| conjugate),
    })
}

/// Builds a witness from `src` to `dst` component by component, assuming
/// equal invariants: each cycle winds onto the shortest dividing cycle of
/// `dst`, and each cycle-free component shifts into a deepest one.
fn component_scheme(
    src: &PartialTransformation,
    dst: &PartialTransformation,
) -> PartialMap {
    let dst_components = decompose(dst);
    let maps: Vec<PartialMap> = decompose(src)
        .iter()
        .map(|gamma| match gamma.kind() {
            ComponentKind::Cycle { length: k } => {
                let delta = dst_components
                    .iter()
                    .filter(|d| matches!(d.kind(), ComponentKind::Cycle { length: m } if k % m == 0))
                    .min_by_key(|d| (cycle_len(d), d.min_vertex()))
                    .expect("equal reduced cycle sets supply a dividing cycle");
                build_cycle_hom(gamma, delta)
                    .expect("both components are cycles")
                    .expect("target length divides")
            }
            ComponentKind::Cho { root_rank, .. } => {
                let delta = dst_components
                    .iter()
                    .filter(|d| matches!(d.kind(), ComponentKind::Cho { .. }))
                    .max_by_key(|d| (cho_rank(d), std::cmp::Reverse(d.min_vertex())))
                    .expect("equal s invariants supply a cycle-free component");
                debug_assert!(cho_rank(delta) >= root_rank);
                build_cho_hom(gamma, delta)
                    .expect("both components are cycle-free")
                    .expect("target root rank suffices")
            }
        })
        .collect();
    assemble_hom(src, dst, &maps).expect("component maps cover the span exactly once")
}

fn cycle_len(c: &Component) -> usize {
    match c.kind() {
        ComponentKind::Cycle { length } => length,
        ComponentKind::Cho { .. } => unreachable!("filtered to cycle components"),
    }
}

fn cho_rank(c: &Component) -> usize {
    match c.kind() {
        ComponentKind::Cho { root_rank, .. } => root_rank,
        ComponentKind::Cycle { .. } => unreachable!("filtered to cycle-free components"),
    }
}

/// Pairs same-length cycles of two permutations in (length, least vertex)
/// order and maps each cycle onto its partner pointwise.
fn pair_cycles(a: &PartialTransformation, b: &PartialTransformation) -> PartialMap {
    let key = |c: &Component| (cycle_len(c), c.min_vertex());
    let mut a_cycles = decompose(a);
    let mut b_cycles = decompose(b);
    a_cycles.sort_by_key(key);
    b_cycles.sort_by_key(key);
    let mut entries = BTreeMap::new();
    for (ca, cb) in a_cycles.iter().zip(&b_cycles) {
        let (pa, pb) = (ca.cycle().unwrap(), cb.cycle().unwrap());
        debug_assert_eq!(pa.len(), pb.len());
        for (&x, &y) in pa.iter().zip(pb) {
            entries.insert(x, y);
        }
    }
    PartialMap::new(a.n(), b.n(), entries).expect("cycle vertices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rphom::{verify_intertwining, verify_rp_hom};
    use crate::transform::PartialTransformation as Pt;

    fn pt(n: usize, image: &[Option<usize>]) -> Pt {
        Pt::new(n, image.to_vec()).unwrap()
    }

    fn assert_round_trip(v: &ConjugacyVerdict, a: &Pt, b: &Pt) {
        let f = v.witness_forward.as_ref().expect("forward witness");
        let g = v.witness_backward.as_ref().expect("backward witness");
        assert_eq!(verify_rp_hom(f, a, b), Ok(true));
        assert_eq!(verify_rp_hom(g, b, a), Ok(true));
        assert_eq!(verify_intertwining(f, a, b), Ok(true));
        assert_eq!(verify_intertwining(g, b, a), Ok(true));
    }

    #[test]
    fn identity_and_constant_are_conjugate_as_partial_maps() {
        let id = Pt::identity(2);
        let constant = pt(2, &[Some(0), Some(0)]);
        let verdict = conj_p_finite(&id, &constant, true).unwrap();
        assert!(verdict.conjugate);
        assert_round_trip(&verdict, &id, &constant);
        let oracle = conj_oracle(&id, &constant, SemigroupFamily::PX).unwrap();
        assert!(oracle.conjugate);
    }

    #[test]
    fn zero_is_conjugate_only_to_itself() {
        let zero = Pt::zero(3);
        for image in [[Some(0), None, None], [Some(1), Some(2), Some(0)]] {
            let other = pt(3, &image);
            assert!(!conj_p_finite(&zero, &other, true).unwrap().conjugate);
        }
        let self_verdict = conj_p_finite(&zero, &zero, true).unwrap();
        assert!(self_verdict.conjugate);
        assert_round_trip(&self_verdict, &zero, &zero);
        assert_eq!(self_verdict.witness_forward.unwrap().dom_size(), 0);
    }

    #[test]
    fn injective_family_distinguishes_fixed_point_counts() {
        // Conjugate as partial maps, but an injective witness would have
        // to merge two fixed points into one.
        let two_fixed = pt(3, &[Some(0), Some(1), None]);
        let one_fixed = pt(3, &[Some(0), None, None]);
        assert!(conj_p_finite(&two_fixed, &one_fixed, false).unwrap().conjugate);
        let verdict = conj_oracle(&two_fixed, &one_fixed, SemigroupFamily::IX).unwrap();
        assert!(!verdict.conjugate);
        assert!(verdict.witness_forward.is_none());
    }

    #[test]
    fn chain_and_fixed_point_are_not_conjugate_anywhere() {
        let chain = pt(2, &[Some(1), None]);
        let fixed = pt(2, &[Some(0), None]);
        assert!(!conj_p_finite(&chain, &fixed, false).unwrap().conjugate);
        assert!(!conj_oracle(&chain, &fixed, SemigroupFamily::IX).unwrap().conjugate);
    }

    #[test]
    fn full_family_rejects_partial_inputs() {
        let partial = pt(2, &[Some(0), None]);
        let full = Pt::identity(2);
        assert_eq!(
            conj_t_finite(&partial, &full, false),
            Err(ConjugacyError::NotInFamily {
                family: SemigroupFamily::TX,
                which: "first",
                reason: "not full"
            })
        );
        assert_eq!(
            conj_t_finite(&full, &partial, false),
            Err(ConjugacyError::NotInFamily {
                family: SemigroupFamily::TX,
                which: "second",
                reason: "not full"
            })
        );
    }

    #[test]
    fn constants_are_conjugate_with_total_witnesses() {
        let c0 = pt(2, &[Some(0), Some(0)]);
        let c1 = pt(2, &[Some(1), Some(1)]);
        let verdict = conj_t_finite(&c0, &c1, true).unwrap();
        assert!(verdict.conjugate);
        assert!(verdict.witness_forward.as_ref().unwrap().is_total());
        assert!(verdict.witness_backward.as_ref().unwrap().is_total());
        assert_round_trip(&verdict, &c0, &c1);
    }

    #[test]
    fn symmetric_group_needs_equal_cycle_types() {
        let rot = pt(3, &[Some(1), Some(2), Some(0)]);
        let rot_back = pt(3, &[Some(2), Some(0), Some(1)]);
        let swap = pt(3, &[Some(1), Some(0), Some(2)]);
        let verdict = conj_sym_finite(&rot, &rot_back, true).unwrap();
        assert!(verdict.conjugate);
        assert_round_trip(&verdict, &rot, &rot_back);
        let fwd = verdict.witness_forward.unwrap();
        assert!(fwd.is_total() && fwd.is_injective());
        assert!(!conj_sym_finite(&rot, &swap, false).unwrap().conjugate);
        assert_eq!(
            conj_sym_finite(&rot, &pt(3, &[Some(0), Some(0), Some(1)]), false),
            Err(ConjugacyError::NotInFamily {
                family: SemigroupFamily::SymX,
                which: "second",
                reason: "not injective"
            })
        );
    }

    #[test]
    fn oracle_checks_membership_and_sizes() {
        let not_injective = pt(2, &[Some(0), Some(0)]);
        assert!(matches!(
            conj_oracle(&not_injective, &Pt::identity(2), SemigroupFamily::IX),
            Err(ConjugacyError::NotInFamily { which: "first", .. })
        ));
        assert_eq!(
            conj_oracle(&Pt::zero(2), &Pt::zero(3), SemigroupFamily::PX),
            Err(ConjugacyError::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn verdict_serialization_includes_witnesses_only_when_present() {
        let id = Pt::identity(2);
        let constant = pt(2, &[Some(0), Some(0)]);
        let with = conj_p_finite(&id, &constant, true).unwrap();
        let text = serde_json::to_string(&with).unwrap();
        assert!(text.starts_with(r#"{"conjugate":true,"cs_src":[1],"s_src":0,"cs_dst":[1],"s_dst":0"#));
        assert!(text.contains(r#""witness_forward":{"map":"#));
        let without = conj_p_finite(&id, &constant, false).unwrap();
        let text = serde_json::to_string(&without).unwrap();
        assert!(!text.contains("witness_forward"));
    }

    fn all_transformations(n: usize) -> Vec<Pt> {
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            let image = digits.iter().map(|&d| d.checked_sub(1)).collect();
            out.push(Pt::new(n, image).unwrap());
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                digits[i] += 1;
                if digits[i] <= n {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn invariant_decider_matches_the_oracle_on_all_small_pairs() {
        let elements = all_transformations(2);
        for a in &elements {
            for b in &elements {
                let fast = conj_p_finite(a, b, true).unwrap();
                let slow = conj_oracle(a, b, SemigroupFamily::PX).unwrap();
                assert_eq!(fast.conjugate, slow.conjugate, "a = {a}, b = {b}");
                if fast.conjugate {
                    assert_round_trip(&fast, a, b);
                }
            }
        }
    }

    #[test]
    fn full_decider_matches_the_oracle_on_all_small_pairs() {
        let elements: Vec<Pt> = all_transformations(2)
            .into_iter()
            .filter(Pt::is_full)
            .collect();
        assert_eq!(elements.len(), 4);
        for a in &elements {
            for b in &elements {
                let fast = conj_t_finite(a, b, true).unwrap();
                let slow = conj_oracle(a, b, SemigroupFamily::TX).unwrap();
                assert_eq!(fast.conjugate, slow.conjugate, "a = {a}, b = {b}");
                // Conjugacy of full maps is the restriction of the
                // partial-map relation.
                let ambient = conj_p_finite(a, b, false).unwrap();
                assert_eq!(fast.conjugate, ambient.conjugate);
            }
        }
    }

    #[test]
    fn symmetric_decider_matches_the_oracle_on_sym3() {
        let elements: Vec<Pt> = all_transformations(3)
            .into_iter()
            .filter(Pt::is_permutation)
            .collect();
        assert_eq!(elements.len(), 6);
        for a in &elements {
            for b in &elements {
                let fast = conj_sym_finite(a, b, true).unwrap();
                let slow = conj_oracle(a, b, SemigroupFamily::SymX).unwrap();
                assert_eq!(fast.conjugate, slow.conjugate, "a = {a}, b = {b}");
                if fast.conjugate {
                    assert_round_trip(&fast, a, b);
                }
            }
        }
    }

    #[test]
    fn oracle_relation_is_an_equivalence_on_small_injective_maps() {
        let elements: Vec<Pt> = all_transformations(2)
            .into_iter()
            .filter(Pt::is_injective)
            .collect();
        assert_eq!(elements.len(), 7);
        let related: Vec<Vec<bool>> = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| conj_oracle(a, b, SemigroupFamily::IX).unwrap().conjugate)
                    .collect()
            })
            .collect();
        let m = elements.len();
        for i in 0..m {
            assert!(related[i][i]);
            for j in 0..m {
                assert_eq!(related[i][j], related[j][i]);
                for k in 0..m {
                    if related[i][j] && related[j][k] {
                        assert!(related[i][k]);
                    }
                }
            }
        }
    }
}
