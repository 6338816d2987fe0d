use fan_fraisse::fan_ramsey::{
    build_u, decode_supports, encode_map, ramsey_witness, verify_ramsey_instance, GroundTruth, HomSet, ParamSource,
    RamseyContext, RamseyInstance, RamseyOutcome, RamseyVerdict,
};
use fan_fraisse::ramsey::Colouring;
use fan_fraisse::{ChainedFan, Fan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cf(lengths: &[usize]) -> ChainedFan {
    ChainedFan::canonical(&Fan::from_branches(lengths).unwrap())
}

#[test]
fn encoding_round_trips_and_reads_first_reach() {
    let shapes: [(&[usize], &[usize]); 6] = [
        (&[2, 2, 2], &[1, 1]),
        (&[2, 2, 2], &[2]),
        (&[3, 3], &[2, 2]),
        (&[3, 3], &[1]),
        (&[1, 1, 1, 1], &[1, 1]),
        (&[4], &[2]),
    ];
    for (u, s) in shapes {
        let (u, s) = (cf(u), cf(s));
        let hom = HomSet::new(&u, &s);
        assert!(!hom.is_empty());
        for map in &hom.maps {
            let enc = encode_map(map, &u, &s).unwrap();
            assert!(enc.fstar.is_block_star());
            assert_eq!(&decode_supports(&enc.supports, &u, &s).unwrap(), map);
            // each branch reaches as high as it has first-reach heights
            for (p, sets) in enc.fstar.entries.iter().zip(&enc.supports) {
                for (&top, set) in p.values().iter().zip(sets) {
                    assert_eq!(top as u32, set.count_ones());
                }
            }
        }
    }
}

#[test]
fn exact_parameters_at_tiny_sizes() {
    let cases: [(&[usize], &[usize], usize, usize); 3] = [
        (&[1], &[2], 1, 3),
        (&[1, 1], &[1, 1], 2, 1),
        (&[1], &[1, 1], 5, 1),
    ];
    for (s, t, n, big_n) in cases {
        let built = build_u(&cf(s), &cf(t), 2, None, None, 6, 50_000_000).unwrap();
        assert_eq!((built.n, built.big_n), (n, big_n), "S={s:?} T={t:?}");
        assert_eq!(built.n_source, ParamSource::Computed);
    }
}

#[test]
fn witness_agrees_with_ground_truth() {
    let (s, t, u) = (cf(&[1]), cf(&[1, 1]), cf(&[1, 1, 1, 1, 1]));
    let ctx = RamseyContext::new(RamseyInstance::new(s.clone(), t.clone(), u.clone(), 2).unwrap(), 1 << 20).unwrap();
    let truth = GroundTruth::new(&s, &t, &u).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let e = Colouring {
            r: 2,
            colours: (0..truth.hom_us).map(|_| rng.gen_range(0..2)).collect(),
        };
        assert!(truth.monochromatic_g(&e).is_some());
        match ramsey_witness(&ctx, &e).unwrap() {
            RamseyOutcome::Found(cert) => {
                assert!(cert.composites.iter().all(|&i| e.get(i) == cert.colour));
                assert!(truth.g_maps.contains(&cert.g));
            }
            RamseyOutcome::Failed { stage, detail } => panic!("{stage:?}: {detail}"),
        }
    }
}

#[test]
fn too_small_u_is_refuted() {
    let (s, t) = (cf(&[1]), cf(&[1, 1]));
    match verify_ramsey_instance(&s, &t, &cf(&[1, 1]), 2, 1_000_000, 0).unwrap() {
        RamseyVerdict::Refuted { colouring } => {
            let truth = GroundTruth::new(&s, &t, &cf(&[1, 1])).unwrap();
            assert!(truth.monochromatic_g(&colouring).is_none());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_canonical_inputs_are_rejected() {
    let s = ChainedFan::new(Fan::from_branches(&[2, 2]).unwrap(), vec![0, 1, 3, 2, 4]).unwrap();
    assert!(RamseyInstance::new(s, cf(&[2, 2]), cf(&[2, 2]), 2).is_err());
    assert!(RamseyInstance::new(cf(&[2, 1]), cf(&[2, 2]), cf(&[2, 2]), 2).is_err());
}
