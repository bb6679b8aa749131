//! Conjugacy class censuses over whole transformation families.
//!
//! Two independent routes produce the same partition: grouping by the
//! class invariant (cheap, linear in the family size) and pairwise
//! decision against class representatives (expensive, quadratic, no
//! invariant involved). `CensusMode::Both` runs the two and insists the
//! partitions agree element by element.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conjugacy::{conj_oracle, SemigroupFamily};
use crate::digraph::{cycle_type, invariant, ConjInvariant};
use crate::transform::PartialTransformation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("ground set must be nonempty")]
    EmptyGroundSet,
    #[error("{family} enumeration for n = {n} is capped at n = {cap}")]
    EnumerationTooLarge { family: SemigroupFamily, n: usize, cap: usize },
    #[error("{family} bruteforce census for n = {n} is capped at n = {bound}")]
    BruteforceTooLarge { family: SemigroupFamily, n: usize, bound: usize },
    #[error("no complete cheap invariant is implemented for {family}; use bruteforce")]
    InvariantUnavailable { family: SemigroupFamily },
    #[error("census modes disagree for {family} with n = {n}: {detail}")]
    ModesDisagree { family: SemigroupFamily, n: usize, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Invariant,
    Bruteforce,
    Both,
}

impl std::str::FromStr for CensusMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "invariant" => Ok(CensusMode::Invariant),
            "bruteforce" => Ok(CensusMode::Bruteforce),
            "both" => Ok(CensusMode::Both),
            other => {
                Err(format!("unknown mode {other:?}; expected invariant, bruteforce, or both"))
            }
        }
    }
}

/// One conjugacy class: its least element under the enumeration order,
/// its size, and the invariant of that representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusClass {
    pub representative: PartialTransformation,
    pub size: usize,
    #[serde(flatten)]
    pub invariant: ConjInvariant,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub family: SemigroupFamily,
    pub n: usize,
    pub total_elements: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_count_invariant: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_count_bruteforce: Option<usize>,
    pub classes: Vec<CensusClass>,
}

/// Largest ground set each family enumerates; beyond it the element
/// count is impractical to materialize.
pub fn enumeration_cap(family: SemigroupFamily) -> usize {
    match family {
        SemigroupFamily::PX => 6,
        SemigroupFamily::TX => 7,
        SemigroupFamily::IX => 7,
        SemigroupFamily::SymX => 8,
    }
}

/// Largest ground set the pairwise bruteforce census accepts.
pub fn bruteforce_bound(family: SemigroupFamily) -> usize {
    match family {
        SemigroupFamily::PX => 3,
        SemigroupFamily::TX => 4,
        SemigroupFamily::IX => 4,
        SemigroupFamily::SymX => 5,
    }
}

/// Every member of the family on `{0, .., n-1}`, ascending in the
/// derived order on transformations (undefined sorts before defined,
/// then pointwise).
pub fn enumerate(
    family: SemigroupFamily,
    n: usize,
) -> Result<Vec<PartialTransformation>, CensusError> {
    if n == 0 {
        return Err(CensusError::EmptyGroundSet);
    }
    let cap = enumeration_cap(family);
    if n > cap {
        return Err(CensusError::EnumerationTooLarge { family, n, cap });
    }
    let out = match family {
        SemigroupFamily::PX => mixed_radix(n, |_| true),
        SemigroupFamily::IX => mixed_radix(n, PartialTransformation::is_injective),
        SemigroupFamily::TX => {
            let mut out = Vec::with_capacity(n.pow(n as u32));
            let mut digits = vec![0usize; n];
            loop {
                let image = digits.iter().map(|&d| Some(d)).collect();
                out.push(PartialTransformation::new(n, image).expect("digits in range"));
                if !increment(&mut digits, n) {
                    break out;
                }
            }
        }
        SemigroupFamily::SymX => {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut out = Vec::new();
            loop {
                let image = perm.iter().map(|&v| Some(v)).collect();
                out.push(PartialTransformation::new(n, image).expect("permutation in range"));
                if !next_permutation(&mut perm) {
                    break out;
                }
            }
        }
    };
    Ok(out)
}

/// All partial maps on `n` points passing `keep`, ascending: digit 0
/// encodes undefined, digit `d + 1` encodes the value `d`.
fn mixed_radix(
    n: usize,
    keep: impl Fn(&PartialTransformation) -> bool,
) -> Vec<PartialTransformation> {
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let image = digits.iter().map(|&d| d.checked_sub(1)).collect();
        let candidate = PartialTransformation::new(n, image).expect("digits in range");
        if keep(&candidate) {
            out.push(candidate);
        }
        if !increment(&mut digits, n + 1) {
            break out;
        }
    }
}

/// Advances `digits` in base `base` with the last digit cycling fastest;
/// false on wraparound. Keeping the first position most significant
/// makes the image sequence ascending in the derived lexicographic
/// order on transformations.
fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Complete class key in invariant mode. Permutations need their whole
/// cycle type: the divisibility-reduced form identifies, for instance, a
/// lone 2-cycle with two disjoint 2-cycles, which a third permutation
/// cannot intertwine both ways.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum ClassKey {
    Reduced(ConjInvariant),
    CycleType(BTreeMap<usize, usize>),
}

fn class_key(family: SemigroupFamily, alpha: &PartialTransformation) -> ClassKey {
    match family {
        SemigroupFamily::PX | SemigroupFamily::TX => ClassKey::Reduced(invariant(alpha)),
        SemigroupFamily::SymX => ClassKey::CycleType(cycle_type(alpha)),
        SemigroupFamily::IX => unreachable!("no invariant route for this family"),
    }
}

fn invariant_classes(
    family: SemigroupFamily,
    elements: &[PartialTransformation],
) -> Result<BTreeMap<ClassKey, (PartialTransformation, usize)>, CensusError> {
    if family == SemigroupFamily::IX {
        return Err(CensusError::InvariantUnavailable { family });
    }
    fn merge(
        mut left: BTreeMap<ClassKey, (PartialTransformation, usize)>,
        right: BTreeMap<ClassKey, (PartialTransformation, usize)>,
    ) -> BTreeMap<ClassKey, (PartialTransformation, usize)> {
        for (key, (rep, size)) in right {
            left.entry(key)
                .and_modify(|(best, total)| {
                    if rep < *best {
                        *best = rep.clone();
                    }
                    *total += size;
                })
                .or_insert((rep, size));
        }
        left
    }
    Ok(elements
        .par_iter()
        .fold(BTreeMap::new, |mut acc, alpha| {
            acc.entry(class_key(family, alpha))
                .and_modify(|(best, total): &mut (PartialTransformation, usize)| {
                    if *alpha < *best {
                        *best = alpha.clone();
                    }
                    *total += 1;
                })
                .or_insert((alpha.clone(), 1));
            acc
        })
        .reduce(BTreeMap::new, merge))
}

fn bruteforce_classes(
    family: SemigroupFamily,
    n: usize,
    elements: &[PartialTransformation],
) -> Result<Vec<Vec<usize>>, CensusError> {
    let bound = bruteforce_bound(family);
    if n > bound {
        return Err(CensusError::BruteforceTooLarge { family, n, bound });
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, alpha) in elements.iter().enumerate() {
        let found = classes.iter_mut().find(|class| {
            let rep = &elements[class[0]];
            conj_oracle(alpha, rep, family)
                .expect("enumerated elements belong to their family")
                .conjugate
        });
        match found {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

/// Runs a class census of the family on `{0, .., n-1}` under `mode`.
/// Classes come back sorted by their least representative.
pub fn census(
    family: SemigroupFamily,
    n: usize,
    mode: CensusMode,
) -> Result<CensusReport, CensusError> {
    let elements = enumerate(family, n)?;
    // Injective partial maps have no complete cheap invariant here, so
    // the combined mode degrades to the pairwise partition alone for
    // them instead of refusing outright.
    let by_key = match mode {
        CensusMode::Both if family == SemigroupFamily::IX => None,
        CensusMode::Invariant | CensusMode::Both => Some(invariant_classes(family, &elements)?),
        CensusMode::Bruteforce => None,
    };
    let by_pair = match mode {
        CensusMode::Bruteforce | CensusMode::Both => {
            Some(bruteforce_classes(family, n, &elements)?)
        }
        CensusMode::Invariant => None,
    };
    if let (Some(by_key), Some(by_pair)) = (&by_key, &by_pair) {
        // The partitions must have the same kernel: elements share an
        // invariant key exactly when the pairwise route merged them.
        let mut pair_class = vec![usize::MAX; elements.len()];
        for (c, class) in by_pair.iter().enumerate() {
            for &i in class {
                pair_class[i] = c;
            }
        }
        let keys: Vec<ClassKey> =
            elements.iter().map(|alpha| class_key(family, alpha)).collect();
        for i in 0..elements.len() {
            for j in i + 1..elements.len() {
                let agree_key = keys[i] == keys[j];
                let agree_pair = pair_class[i] == pair_class[j];
                if agree_key != agree_pair {
                    return Err(CensusError::ModesDisagree {
                        family,
                        n,
                        detail: format!(
                            "elements {} and {} are identified by {} only",
                            elements[i],
                            elements[j],
                            if agree_key { "the invariant" } else { "the pairwise decision" },
                        ),
                    });
                }
            }
        }
        debug_assert_eq!(by_key.len(), by_pair.len());
    }
    let mut classes: Vec<CensusClass> = match (&by_key, &by_pair) {
        (_, Some(by_pair)) => by_pair
            .iter()
            .map(|class| {
                let representative = elements[class[0]].clone();
                let inv = invariant(&representative);
                CensusClass { representative, size: class.len(), invariant: inv }
            })
            .collect(),
        (Some(by_key), None) => by_key
            .values()
            .map(|(representative, size)| CensusClass {
                representative: representative.clone(),
                size: *size,
                invariant: invariant(representative),
            })
            .collect(),
        (None, None) => unreachable!("every mode computes at least one partition"),
    };
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(CensusReport {
        family,
        n,
        total_elements: elements.len(),
        class_count_invariant: by_key.as_ref().map(BTreeMap::len),
        class_count_bruteforce: by_pair.as_ref().map(Vec::len),
        classes,
    })
}
