use std::collections::BTreeSet;

use fan_fraisse::fink::{
    all_block_star, generated_semigroup, semigroup_elements, tetris, tetris_composite, tetris_indices, BlockSeq, FinVec,
    TetrisKind,
};
use fan_fraisse::ramsey::{
    claim_properties, escapes_all, gamma_lift, gamma_representable, gamma_tuple, gr_hypergraph, gr_search,
    lelek_witness, ordered_partitions_gamma, partitions, phi_encode, size_determined_number_search,
    verify_lelek_witness, BlockDomain, Colouring, LelekOutcome, LelekParams, LevelVerdict, SetTupleDomain,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(values: &[u8]) -> FinVec {
    FinVec::new(values.to_vec())
}

/// Every formal sum of one summand per block, straight from the definition.
fn semigroup_oracle(b: &BlockSeq, k: u8) -> BTreeSet<FinVec> {
    let (k, l) = (k as usize, b.k as usize);
    let upper = tetris_indices(TetrisKind::Upper { k, l });
    let lower = tetris_indices(TetrisKind::P { k });
    let mut choices: Vec<(FinVec, bool)> = vec![(FinVec::zero(b.n()), false)];
    for block in &b.entries {
        let mut next = Vec::new();
        for (sum, untouched) in &choices {
            for i in &upper {
                for t in &lower {
                    let s = tetris_composite(t, &tetris_composite(i, block));
                    let added: Vec<u8> = sum.values().iter().zip(s.values()).map(|(a, b)| a + b).collect();
                    next.push((v(&added), *untouched || t.iter().all(|&x| x == 0)));
                }
            }
        }
        choices = next;
    }
    choices
        .into_iter()
        .filter(|(sum, untouched)| *untouched && !sum.is_zero() && sum.max_value() == k as u8)
        .map(|(sum, _)| sum)
        .collect()
}

#[test]
fn semigroup_matches_the_definition() {
    for l in 1..=3u8 {
        for m in 1..=3 {
            for n in 1..=3 {
                for b in all_block_star(l, m, n) {
                    for k in 1..=l {
                        let got: BTreeSet<FinVec> = semigroup_elements(&b, k, 1 << 20).unwrap().into_iter().collect();
                        assert_eq!(got, semigroup_oracle(&b, k), "{b:?} k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn two_singletons_generate_three_elements() {
    let b = BlockSeq::new(1, vec![v(&[1, 0]), v(&[0, 1])]);
    let got = semigroup_elements(&b, 1, 100).unwrap();
    assert_eq!(got.len(), 3);
    assert!(got.contains(&v(&[1, 1])));
}

#[test]
fn generated_tuples_are_star_blocks() {
    for b in all_block_star(2, 2, 4) {
        for d in 1..=2 {
            for k in 1..=2 {
                for t in generated_semigroup(&b, k, d, 1 << 20).unwrap() {
                    assert!(t.is_block_star());
                    assert_eq!((t.k, t.d, t.n()), (k, d, 4));
                }
            }
        }
    }
}

#[test]
fn phi_lands_in_star_blocks_with_claim_shape() {
    for n in 1..=6 {
        for (d, k) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            for p in partitions(n, d * k + 1) {
                let b = phi_encode(&p, d, k).unwrap();
                assert!(b.is_block_star(), "{p:?}");
                assert!(claim_properties(&b));
            }
        }
    }
}

#[test]
fn gr_levels_match_brute_force() {
    let (k, l) = (2, 3);
    let search = gr_search(k, l, 2, 5, u64::MAX).unwrap();
    for (n, verdict) in &search.levels {
        let (domain, h) = gr_hypergraph(k, l, *n);
        let mono_always = (0..1u128 << domain.len()).all(|i| !escapes_all(&h, &Colouring::from_index(i, domain.len(), 2)));
        match verdict {
            LevelVerdict::Holds { .. } => assert!(mono_always, "n={n}"),
            LevelVerdict::Fails { colouring, .. } => {
                assert!(!mono_always);
                assert!(escapes_all(&h, colouring));
            }
            LevelVerdict::Unknown { .. } => panic!("unbounded search gave up"),
        }
    }
}

#[test]
fn lelek_witnesses_on_random_colourings_verify() {
    let params = LelekParams { d: 1, m: 2, k: 1, l: 1 };
    let domain = BlockDomain::new(1, 1, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let c = Colouring {
            r: 2,
            colours: (0..domain.len()).map(|_| rng.gen_range(0..2)).collect(),
        };
        match lelek_witness(&domain, &c, &params).unwrap() {
            LelekOutcome::Found(w) => assert!(verify_lelek_witness(&domain, &c, &w).unwrap()),
            other => panic!("no witness at n=5: {other:?}"),
        }
    }
}

#[test]
fn sized_number_for_singletons_is_pigeonhole() {
    for l in 2..=3 {
        let search = size_determined_number_search(1, &[1], &[l], 2, 6, u64::MAX).unwrap();
        assert_eq!(search.exact, Some(2 * (l - 1) + 1), "l={l}");
    }
}

#[test]
fn gamma_lift_packs_the_gamma_tuples() {
    let star = SetTupleDomain::new(3, &[1, 1], 2, 1 << 20).unwrap();
    let plain = SetTupleDomain::new(3, &[1, 1], 1, 1 << 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let chi = Colouring {
        r: 2,
        colours: (0..star.len()).map(|_| rng.gen_range(0..2)).collect(),
    };
    let (lifted, total) = gamma_lift(&star, &chi, &plain).unwrap();
    let gammas = ordered_partitions_gamma(2, 2);
    assert_eq!(total, 1 << gammas.len());
    for (i, e) in plain.elements.iter().enumerate() {
        let mut packed = lifted.get(i) as u64;
        for gamma in &gammas {
            let t = gamma_tuple(&e[0], gamma, 2);
            assert!(gamma_representable(&t));
            assert_eq!(packed % 2, chi.get(star.index_of(&t).unwrap()) as u64);
            packed /= 2;
        }
    }
}

#[test]
fn overlapping_tuples_are_not_gamma_tuples() {
    assert!(!gamma_representable(&[vec![1, 0], vec![2, 0]]));
    assert!(!gamma_representable(&[vec![1, 2], vec![0, 0]]));
    // an empty coordinate can still be handed to the second tuple
    assert!(gamma_representable(&[vec![1, 0], vec![0, 0]]));
}

proptest! {
    #[test]
    fn tetris_lowers_the_maximum(values in prop::collection::vec(0u8..5, 1..8), i in 1u8..5) {
        let p = FinVec::new(values);
        let top = p.max_value();
        prop_assume!(top >= 1 && i <= top);
        let q = tetris(i, &p);
        prop_assert_eq!(q.max_value(), top - 1);
        prop_assert_eq!(tetris(0, &p), p);
    }
}
