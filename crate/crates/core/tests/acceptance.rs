//! Acceptance gate: ten numbered criteria, each a test printing one
//! pass line with its measured runtime and asserting a time budget.
//! Run with `--nocapture` to see the lines for passing criteria.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use semiconj::digraph::{decompose, invariant, sac, ConjInvariant};
use semiconj::rphom::{
    build_cho_hom, build_cycle_hom, search_rp_hom, verify_intertwining, verify_rp_hom,
    PartialMap, WitnessConstraint,
};
use semiconj::transform::PartialTransformation as Pt;
use semiconj::{
    census, conj_oracle, conj_p_finite, conj_t_finite, enumerate, CensusMode,
    FiniteSemigroup, RelationKind, SemigroupFamily,
};

fn finish(number: u32, description: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {number:02} pass: {description} ({} ms)", elapsed.as_millis());
    assert!(
        elapsed < budget,
        "criterion {number:02} exceeded its {} ms budget: took {} ms",
        budget.as_millis(),
        elapsed.as_millis(),
    );
}

/// Divisibility reduction hits its two worked examples exactly.
#[test]
fn criterion_01_divisibility_reduction_worked_examples() {
    let started = Instant::now();
    assert_eq!(sac([4, 6, 8, 10, 18]), BTreeSet::from([4, 6, 10]));
    assert_eq!(sac([1, 2, 4, 8]), BTreeSet::from([1]));
    finish(1, "divisibility reduction on both worked examples", started, Duration::from_millis(1));
}

/// The invariant decider and the search oracle agree on every ordered
/// pair of partial transformations on three points.
#[test]
fn criterion_02_partial_decider_equals_oracle_everywhere() {
    let started = Instant::now();
    let elements = enumerate(SemigroupFamily::PX, 3).unwrap();
    assert_eq!(elements.len(), 64);
    let mut pairs = 0;
    for a in &elements {
        for b in &elements {
            let fast = conj_p_finite(a, b, false).unwrap().conjugate;
            let slow = conj_oracle(a, b, SemigroupFamily::PX).unwrap().conjugate;
            assert_eq!(fast, slow, "disagreement on {a} vs {b}");
            pairs += 1;
        }
    }
    assert_eq!(pairs, 4096);
    finish(2, "decider = oracle on all 4096 partial pairs", started, Duration::from_secs(60));
}

/// Same agreement for full transformations: exhaustively on three
/// points, sampled on four.
#[test]
fn criterion_03_full_decider_equals_oracle() {
    let started = Instant::now();
    let small = enumerate(SemigroupFamily::TX, 3).unwrap();
    for a in &small {
        for b in &small {
            let fast = conj_t_finite(a, b, false).unwrap().conjugate;
            let slow = conj_oracle(a, b, SemigroupFamily::TX).unwrap().conjugate;
            assert_eq!(fast, slow, "disagreement on {a} vs {b}");
        }
    }
    let large = enumerate(SemigroupFamily::TX, 4).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..1000 {
        let a = &large[rng.random_range(0..large.len())];
        let b = &large[rng.random_range(0..large.len())];
        let fast = conj_t_finite(a, b, false).unwrap().conjugate;
        let slow = conj_oracle(a, b, SemigroupFamily::TX).unwrap().conjugate;
        assert_eq!(fast, slow, "disagreement on {a} vs {b}");
    }
    finish(3, "decider = oracle on all of T(3) and 1000 T(4) samples", started, Duration::from_secs(60));
}

/// The abstract Cayley-table relation on the order-9 semigroup of all
/// partial maps on two points produces the same four classes as the
/// invariant grouping and as the pairwise search oracle.
#[test]
fn criterion_04_cayley_table_partition_matches() {
    let started = Instant::now();
    let elements = enumerate(SemigroupFamily::PX, 2).unwrap();
    let (s, discovered) = FiniteSemigroup::from_generators(&elements, 100).unwrap();
    assert_eq!(s.order(), 9);
    let table_partition: BTreeSet<BTreeSet<Pt>> = s
        .classes(RelationKind::C)
        .unwrap()
        .into_iter()
        .map(|class| class.into_iter().map(|i| discovered[i].clone()).collect())
        .collect();
    let mut by_invariant: BTreeMap<ConjInvariant, BTreeSet<Pt>> = BTreeMap::new();
    for a in &elements {
        by_invariant.entry(invariant(a)).or_default().insert(a.clone());
    }
    let invariant_partition: BTreeSet<BTreeSet<Pt>> =
        by_invariant.into_values().collect();
    let mut oracle_classes: Vec<BTreeSet<Pt>> = Vec::new();
    for a in &elements {
        match oracle_classes.iter_mut().find(|class| {
            let rep = class.iter().next().unwrap();
            conj_oracle(a, rep, SemigroupFamily::PX).unwrap().conjugate
        }) {
            Some(class) => {
                class.insert(a.clone());
            }
            None => oracle_classes.push(BTreeSet::from([a.clone()])),
        }
    }
    let oracle_partition: BTreeSet<BTreeSet<Pt>> = oracle_classes.into_iter().collect();
    assert_eq!(table_partition.len(), 4);
    assert_eq!(table_partition, invariant_partition);
    assert_eq!(table_partition, oracle_partition);
    finish(4, "Cayley table, invariant, and oracle give the same 4 classes", started, Duration::from_secs(5));
}

/// Every structural law holds on dozens of semigroups generated by
/// random subsets of the partial maps on three points.
#[test]
fn criterion_05_axiom_suite_on_generated_semigroups() {
    let started = Instant::now();
    let pool = enumerate(SemigroupFamily::PX, 3).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut zero_bearing = 0;
    let mut zero_free = 0;
    for round in 0..50 {
        let count = 1 + round % 3;
        let gens: Vec<Pt> =
            (0..count).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
        let (s, _) = FiniteSemigroup::from_generators(&gens, 200).unwrap();
        assert!(s.order() <= 200);
        let report = s.check_axioms();
        assert!(report.all_pass(), "order {} semigroup:\n{report}", s.order());
        match s.zero() {
            Some(_) => zero_bearing += 1,
            None => zero_free += 1,
        }
    }
    assert!(zero_bearing > 0, "the sample never hit a zero-bearing semigroup");
    assert!(zero_free > 0, "the sample never hit a zero-free semigroup");
    finish(5, "all structural laws on 50 generated semigroups", started, Duration::from_secs(120));
}

/// Zero-free tables in both directions: cyclic groups have trivial
/// conjugation; the symmetric group on three points has exactly the
/// three classes that inverse-sandwich conjugation gives.
#[test]
fn criterion_06_trivial_conjugation_both_directions() {
    let started = Instant::now();
    for k in 2..=5 {
        let rows = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
        let s = FiniteSemigroup::new(rows, None).unwrap();
        assert_eq!(s.zero(), None);
        assert!(s.is_commutative() && s.is_cancellative());
        assert!(s.relation(RelationKind::C).is_diagonal(), "C{k} has a merged pair");
    }
    let gens = [
        Pt::new(3, vec![Some(1), Some(0), Some(2)]).unwrap(),
        Pt::new(3, vec![Some(1), Some(2), Some(0)]).unwrap(),
    ];
    let (s, _) = FiniteSemigroup::from_generators(&gens, 100).unwrap();
    assert_eq!(s.order(), 6);
    let classes = s.classes(RelationKind::C).unwrap();
    assert_eq!(classes.len(), 3);
    let conj = s.relation(RelationKind::C);
    assert!(!conj.is_diagonal());
    // Independent group-theory oracle: b = g^-1 a g for some g.
    let e = s.identity().expect("a group has an identity");
    let inverse: Vec<usize> = (0..s.order())
        .map(|g| (0..s.order()).find(|&h| s.product(g, h) == e).unwrap())
        .collect();
    for a in 0..s.order() {
        for b in 0..s.order() {
            let sandwich = (0..s.order())
                .any(|g| s.product(s.product(inverse[g], a), g) == b);
            assert_eq!(conj.contains(a, b), sandwich, "disagreement on ({a}, {b})");
        }
    }
    finish(6, "trivial on C2..C5; Sym(3) matches the sandwich oracle", started, Duration::from_secs(5));
}

/// The two constructive builders succeed exactly on their stated
/// conditions (divisor for cycles, rank comparison for chos) and their
/// outputs check out; the cho builder also agrees with the blind search.
#[test]
fn criterion_07_constructive_builders() {
    let started = Instant::now();
    for k in 1..=8usize {
        for m in 1..=8usize {
            let alpha = Pt::cycle(&(0..k).collect::<Vec<_>>(), k).unwrap();
            let beta = Pt::cycle(&(0..m).collect::<Vec<_>>(), m).unwrap();
            let gamma = decompose(&alpha).pop().unwrap();
            let delta = decompose(&beta).pop().unwrap();
            let built = build_cycle_hom(&gamma, &delta).unwrap();
            assert_eq!(built.is_some(), k % m == 0, "cycle pair ({k}, {m})");
            if let Some(phi) = built {
                assert!(verify_rp_hom(&phi, &alpha, &beta).unwrap());
                assert!(verify_intertwining(&phi, &alpha, &beta).unwrap());
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let random_cho = |rng: &mut StdRng| {
        let v = rng.random_range(2..=10usize);
        let image: Vec<Option<usize>> = (0..v)
            .map(|x| if x == 0 { None } else { Some(rng.random_range(0..x)) })
            .collect();
        Pt::new(v, image).unwrap()
    };
    for _ in 0..100 {
        let alpha = random_cho(&mut rng);
        let beta = random_cho(&mut rng);
        let gamma = decompose(&alpha).pop().unwrap();
        let delta = decompose(&beta).pop().unwrap();
        let rank = |c: &semiconj::Component| match c.kind() {
            semiconj::ComponentKind::Cho { root_rank, .. } => root_rank,
            semiconj::ComponentKind::Cycle { .. } => unreachable!("built acyclic"),
        };
        let built = build_cho_hom(&gamma, &delta).unwrap();
        assert_eq!(built.is_some(), rank(&gamma) <= rank(&delta), "{alpha} into {beta}");
        let searched = search_rp_hom(&alpha, &beta, WitnessConstraint::AnyPartial);
        assert_eq!(built.is_some(), searched.is_some(), "{alpha} into {beta}");
        if let Some(phi) = built {
            assert!(verify_rp_hom(&phi, &alpha, &beta).unwrap());
            assert!(verify_intertwining(&phi, &alpha, &beta).unwrap());
        }
    }
    finish(7, "cycle builder iff divisor, cho builder iff rank fits", started, Duration::from_secs(30));
}

/// The arc/terminal formulation and the intertwining equation agree on
/// a thousand random triples whose map covers the source span.
#[test]
fn criterion_08_two_definitions_agree() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let random_partial = |rng: &mut StdRng, n: usize| {
        let image: Vec<Option<usize>> = (0..n)
            .map(|_| {
                let d = rng.random_range(0..=n);
                d.checked_sub(1)
            })
            .collect();
        Pt::new(n, image).unwrap()
    };
    for _ in 0..1000 {
        let n = rng.random_range(1..=5usize);
        let alpha = random_partial(&mut rng, n);
        let beta = random_partial(&mut rng, n);
        let mut entries = BTreeMap::new();
        for v in alpha.span() {
            entries.insert(v, rng.random_range(0..n));
        }
        for v in 0..n {
            if rng.random_range(0..2) == 1 {
                entries.entry(v).or_insert_with(|| rng.random_range(0..n));
            }
        }
        let phi = PartialMap::new(n, n, entries).unwrap();
        assert_eq!(
            verify_rp_hom(&phi, &alpha, &beta).unwrap(),
            verify_intertwining(&phi, &alpha, &beta).unwrap(),
            "{phi:?} between {alpha} and {beta}",
        );
    }
    finish(8, "both formulations agree on 1000 covering triples", started, Duration::from_secs(10));
}

/// A twelve-point pair with cycle set {2, 3} and height 3 on two very
/// different shapes is conjugate, with witnesses that check out both
/// ways under both verifiers.
#[test]
fn criterion_09_shaped_pair_is_conjugate_with_certificates() {
    let started = Instant::now();
    let alpha = Pt::join([
        &Pt::cycle(&[0, 1], 12).unwrap(),
        &Pt::cycle(&[2, 3, 4], 12).unwrap(),
        &Pt::chain(&[5, 6, 7, 8], 12).unwrap(),
    ])
    .unwrap();
    let beta = Pt::join([
        &Pt::cycle(&[9, 10], 12).unwrap(),
        &Pt::cycle(&[0, 1, 2], 12).unwrap(),
        // Branched tree onto root 8: longest arc path 3 -> 4 -> 6 -> 8.
        &Pt::chain(&[3, 4, 6, 8], 12).unwrap(),
        &Pt::chain(&[5, 6], 12).unwrap(),
        &Pt::chain(&[7, 8], 12).unwrap(),
    ])
    .unwrap();
    let expected = ConjInvariant { cs: BTreeSet::from([2, 3]), s: 3 };
    assert_eq!(invariant(&alpha), expected);
    assert_eq!(invariant(&beta), expected);
    let verdict = conj_p_finite(&alpha, &beta, true).unwrap();
    assert!(verdict.conjugate);
    let forward = verdict.witness_forward.expect("forward certificate");
    let backward = verdict.witness_backward.expect("backward certificate");
    assert!(verify_rp_hom(&forward, &alpha, &beta).unwrap());
    assert!(verify_intertwining(&forward, &alpha, &beta).unwrap());
    assert!(verify_rp_hom(&backward, &beta, &alpha).unwrap());
    assert!(verify_intertwining(&backward, &beta, &alpha).unwrap());
    finish(9, "shaped 12-point pair conjugate with round-trip certificates", started, Duration::from_secs(1));
}

/// The injective census at two points: the pairwise partition is an
/// equivalence, the empty map sits alone, and the class count matches
/// the frozen snapshot.
#[test]
fn criterion_10_injective_census_smoke() {
    let started = Instant::now();
    let report = census(SemigroupFamily::IX, 2, CensusMode::Bruteforce).unwrap();
    assert_eq!(report.total_elements, 7);
    assert_eq!(report.class_count_bruteforce, Some(5));
    let elements = enumerate(SemigroupFamily::IX, 2).unwrap();
    let related: Vec<Vec<bool>> = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| conj_oracle(a, b, SemigroupFamily::IX).unwrap().conjugate)
                .collect()
        })
        .collect();
    let k = elements.len();
    for i in 0..k {
        assert!(related[i][i], "not reflexive at {i}");
        for j in 0..k {
            assert_eq!(related[i][j], related[j][i], "not symmetric at ({i}, {j})");
            for l in 0..k {
                if related[i][j] && related[j][l] {
                    assert!(related[i][l], "not transitive at ({i}, {j}, {l})");
                }
            }
        }
    }
    let zero_index = elements.iter().position(Pt::is_zero).unwrap();
    for (j, b) in elements.iter().enumerate() {
        assert_eq!(related[zero_index][j], j == zero_index, "zero tied to {b}");
    }
    assert_eq!(report.classes[0].representative, elements[zero_index]);
    assert_eq!(report.classes[0].size, 1);
    finish(10, "injective census: equivalence, lone zero, 5 classes", started, Duration::from_secs(5));
}
