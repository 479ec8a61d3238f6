use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use multishift_core::lambda::{a_set, class_image, class_of, decompose};
use multishift_core::mult::pi_positions;
use multishift_core::oracle::{probe_transitive_x, verify};
use multishift_core::witness::witness_transitive;
use multishift_core::{Constraints, MultShift, Pattern, Property, SearchBudget, ShiftSpec, Word};

fn forbidden_set() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..2, 1..=3), 0..=3)
}

fn sft(f: &[Vec<u8>]) -> ShiftSpec {
    let words: Vec<String> = f
        .iter()
        .map(|w| w.iter().map(|s| char::from(b'0' + s)).collect())
        .collect();
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    ShiftSpec::sft(2, &refs).unwrap()
}

fn avoids(w: &[u8], f: &[Vec<u8>]) -> bool {
    f.iter().all(|fw| !w.windows(fw.len()).any(|x| x == &fw[..]))
}

fn bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << n).map(move |b| (0..n).map(|i| ((b >> (n - 1 - i)) & 1) as u8).collect())
}

/// A word occurs in a point iff it extends by 8 further symbols: with
/// forbidden words of length <= 3 there are at most 4 states, so such an
/// extension revisits one and closes a cycle.
fn brute_blocks(f: &[Vec<u8>], n: usize) -> Vec<Word> {
    bits(n)
        .filter(|w| bits(8).any(|c| avoids(&[w.as_slice(), &c].concat(), f)))
        .map(Word::new)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blocks_match_brute_force(f in forbidden_set(), n in 1usize..=6) {
        prop_assert_eq!(sft(&f).blocks(n).unwrap(), brute_blocks(&f, n));
    }

    #[test]
    fn mixing_hierarchy_is_ordered(f in forbidden_set()) {
        let s = sft(&f);
        let d = |p| s.decide(p).unwrap().value;
        let chain = [Property::Mixing, Property::WeaklyMixing, Property::TotallyTransitive, Property::Transitive, Property::Extensible];
        for pair in chain.windows(2) {
            prop_assert!(!d(pair[0]) || d(pair[1]), "{:?} without {:?}", pair[0], pair[1]);
        }
        if s.is_empty() {
            prop_assert!(chain.iter().all(|&p| !d(p)));
        }
    }

    #[test]
    fn partial_extendable_matches_blocks(
        f in forbidden_set(),
        cells in prop::collection::btree_map(1u64..=6, 0u8..2, 1..=4),
    ) {
        let s = sft(&f);
        let c = Constraints::from_pairs(cells.clone()).unwrap();
        let n = *cells.keys().max().unwrap() as usize;
        let expected = s.blocks(n).unwrap().iter().any(|w| cells.iter().all(|(&p, &v)| w.symbols()[p as usize - 1] == v));
        prop_assert_eq!(s.partial_extendable(&c).unwrap(), expected);
    }

    #[test]
    fn mixing_gap_index_is_sound(f in forbidden_set()) {
        let s = sft(&f);
        prop_assume!(s.decide(Property::Mixing).unwrap().value);
        let n = s.mixing_gap_index(2).unwrap();
        let mut words = s.blocks(1).unwrap();
        words.extend(s.blocks(2).unwrap());
        for a in &words {
            for b in &words {
                for m in n..=n + 10 {
                    prop_assert!(s.connects(a, b, m).unwrap(), "{} {} at gap {}", a, b, m);
                }
            }
        }
    }

    #[test]
    fn decompose_round_trips(n in 1u64..=1_000_000, l in 2u64..=12) {
        let d = decompose(n, l).unwrap();
        prop_assert!(d.alpha % l != 0);
        prop_assert_eq!(d.alpha * l.pow(d.k as u32), n);
        prop_assert_eq!(class_of(n, l).unwrap().representative(), d.alpha);
    }

    #[test]
    fn class_images_follow_multiplication(alpha in 1u64..=500, i in 1u64..=500, l in 2u64..=7) {
        prop_assume!(alpha % l != 0 && i % l != 0);
        let img = class_image(alpha, i, l).unwrap();
        prop_assert_eq!(img.representative(), class_of(alpha * i, l).unwrap().representative());
    }

    #[test]
    fn pi_is_a_semigroup_action(a in 1u64..=50, b in 1u64..=50, s in prop::collection::btree_set(1u64..=100, 0..8)) {
        let lhs = pi_positions(a, &pi_positions(b, &s).unwrap()).unwrap();
        prop_assert_eq!(lhs, pi_positions(a * b, &s).unwrap());
    }

    #[test]
    fn counting_matches_enumeration(f in forbidden_set(), l in 2u64..=3, n in 1u64..=9) {
        let x = MultShift::new(sft(&f), l).unwrap();
        let listed = x.enumerate_blocks(n).unwrap();
        prop_assert_eq!(x.count_blocks(n).unwrap(), listed.len().into());
        for y in &listed {
            prop_assert!(x.is_admissible(&Pattern::block(y)).unwrap());
        }
    }

    #[test]
    fn fibers_reassemble(f in forbidden_set(), l in 2u64..=3, n in 1u64..=9, pick in any::<prop::sample::Index>()) {
        let x = MultShift::new(sft(&f), l).unwrap();
        let listed = x.enumerate_blocks(n).unwrap();
        prop_assume!(!listed.is_empty());
        let y = pick.get(&listed);
        let py = Pattern::block(y);
        let fibers: BTreeMap<u64, Word> = a_set(l, n).into_iter().map(|i| (i, x.extract_fiber(&py, i, 1).unwrap())).collect();
        prop_assert_eq!(&x.assemble(&fibers, n).unwrap(), y);
    }

    #[test]
    fn transitive_certificates_are_sound(
        f in forbidden_set(),
        l in 2u64..=3,
        lens in (1u64..=4, 1u64..=3),
        picks in any::<(prop::sample::Index, prop::sample::Index)>(),
        k in 0u64..=2,
    ) {
        let omega = sft(&f);
        prop_assume!(omega.decide(Property::Extensible).unwrap().value);
        let x = MultShift::new(omega.clone(), l).unwrap();
        let us = x.enumerate_blocks(lens.0).unwrap();
        let vs = x.enumerate_blocks(lens.1).unwrap();
        prop_assume!(!us.is_empty() && !vs.is_empty());
        let (u, v) = (picks.0.get(&us), picks.1.get(&vs));
        let cert = witness_transitive(&x, &Pattern::block(u), &Pattern::block(v), k).unwrap();
        verify(&omega, &cert).unwrap();
        let y = cert.materialize(&omega, 1 << 16).unwrap();
        prop_assert!(x.is_admissible(&Pattern::block(&y)).unwrap());
        prop_assert_eq!(&y.symbols()[..u.len()], u.symbols());
        let q = u.len() as u64 * cert.alpha * l.pow(k as u32);
        for (j, &s) in v.symbols().iter().enumerate() {
            prop_assert_eq!(y.symbols()[(q * (j as u64 + 1) - 1) as usize], s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enlarging_the_budget_keeps_witnesses(f in forbidden_set(), l in 2u64..=3) {
        let x = MultShift::new(sft(&f), l).unwrap();
        prop_assume!(!x.omega().is_empty());
        let small = SearchBudget { alpha_bound: 3, k_bound: 2, pair_length_bound: 2 };
        let large = SearchBudget { alpha_bound: 7, k_bound: 4, pair_length_bound: 2 };
        let a = probe_transitive_x(&x, &small).unwrap();
        let b = probe_transitive_x(&x, &large).unwrap();
        let lost: BTreeSet<_> = b.unwitnessed.iter().filter(|p| !a.unwitnessed.contains(p)).collect();
        prop_assert!(lost.is_empty(), "pairs lost: {:?}", lost);
    }
}
