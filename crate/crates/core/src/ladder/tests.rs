use super::*;
use crate::group::DEFAULT_BALL_BUDGET;

fn f2() -> GroupModel {
    GroupModel::free(2).unwrap()
}

fn parse_set(model: &GroupModel, words: &[&str]) -> Vec<GroupElement> {
    words.iter().map(|w| model.parse(w).unwrap()).collect()
}

/// A tiny hand-made ladder on F2: Sigma_1 = {a^2, a^-2} over A_0 = {e}.
/// Escape fails (|a^2| = 1 in Delta_1? Delta_1 = {e}, so |a^2|_1 is infinite:
/// escape holds), uniqueness holds because nothing short reaches a^2.
fn tiny_scale() -> Scale {
    let m = f2();
    Scale::new(
        m.clone(),
        vec![1],
        vec![parse_set(&m, &["a^2", "a^-2"])],
        vec![parse_set(&m, &["e"]), vec![]],
    )
    .unwrap()
}

#[test]
fn validation_rejects_bad_scales() {
    let m = f2();
    // missing identity in A_0
    let err = Scale::new(
        m.clone(),
        vec![1],
        vec![parse_set(&m, &["a^2", "a^-2"])],
        vec![parse_set(&m, &["a"]), vec![]],
    )
    .unwrap_err();
    assert!(matches!(err, LadderError::Validation(_)));

    // overlapping sets are named in the error
    let err = Scale::new(
        m.clone(),
        vec![1, 1],
        vec![
            parse_set(&m, &["a^2", "a^-2"]),
            parse_set(&m, &["a^2", "a^-2"]),
        ],
        vec![parse_set(&m, &["e"]), vec![], vec![]],
    )
    .unwrap_err();
    match err {
        LadderError::Overlap { first, second, .. } => {
            assert_eq!(first, "Sigma_1");
            assert_eq!(second, "Sigma_2");
        }
        other => panic!("expected overlap, got {other:?}"),
    }

    // non-symmetric spiking set
    let err = Scale::new(
        m.clone(),
        vec![1],
        vec![parse_set(&m, &["a^2"])],
        vec![parse_set(&m, &["e"]), vec![]],
    )
    .unwrap_err();
    assert!(matches!(err, LadderError::Validation(_)));

    // decreasing gauge
    let err = Scale::new(
        m.clone(),
        vec![2, 1],
        vec![
            parse_set(&m, &["a^2", "a^-2"]),
            parse_set(&m, &["b^2", "b^-2"]),
        ],
        vec![parse_set(&m, &["e"]), vec![], vec![]],
    )
    .unwrap_err();
    assert!(matches!(err, LadderError::Validation(_)));

    // empty spiking set
    let err = Scale::new(
        m.clone(),
        vec![1],
        vec![vec![]],
        vec![parse_set(&m, &["e"]), vec![]],
    )
    .unwrap_err();
    assert!(matches!(err, LadderError::Validation(_)));
}

#[test]
fn level_map_is_single_valued() {
    let scale = tiny_scale();
    let m = scale.model();
    let a2 = m.parse("a^2").unwrap();
    assert_eq!(scale.level_of(&a2), Some((1, SetKind::Spiking)));
    assert_eq!(
        scale.level_of(&m.identity()),
        Some((0, SetKind::Filling))
    );
    assert_eq!(scale.level_of(&m.parse("b").unwrap()), None);
}

#[test]
fn classify_spike_is_itself() {
    let scale = tiny_scale();
    let m = scale.model().clone();
    let mut classifier = Classifier::new(&scale, DEFAULT_BALL_BUDGET);
    // e is unspiked with height 0
    let e_class = classifier.classify(&m.identity()).unwrap();
    assert_eq!(e_class, Classification::Unspiked);
    assert_eq!(e_class.height(), Some(0));
    // a spike decomposes as (e, sigma, e) at its own level
    let sigma = m.parse("a^2").unwrap();
    match classifier.classify(&sigma).unwrap() {
        Classification::Spiked(d) => {
            assert_eq!(d.prefix, m.identity());
            assert_eq!(d.spike, sigma);
            assert_eq!(d.postfix, m.identity());
            assert_eq!(d.height, 1);
        }
        other => panic!("expected spiked, got {other:?}"),
    }
}

#[test]
fn ambiguous_fixture_with_commuting_spikes() {
    // Sigma_1 = {a^3, a^-3} with a in A_0: a^4 = a * a^3 * e = e * a^3 * a.
    let m = f2();
    let scale = Scale::new(
        m.clone(),
        vec![1],
        vec![parse_set(&m, &["a^3", "a^-3"])],
        vec![parse_set(&m, &["e", "a", "a^-1"]), vec![]],
    )
    .unwrap();
    let mut classifier = Classifier::new(&scale, DEFAULT_BALL_BUDGET);
    let g = m.parse("a^4").unwrap();
    match classifier.classify(&g).unwrap() {
        Classification::Ambiguous(ds) => assert!(ds.len() >= 2, "got {}", ds.len()),
        other => panic!("expected ambiguous, got {other:?}"),
    }
}

#[test]
fn fast_growth_examples() {
    // 4^n grows fast enough
    let table: Vec<u64> = (1..=6).map(|n| 4u64.pow(n)).collect();
    assert!(fast_growth_check(&table));
    // identity gauge fails at n = 2: 2 < 1 + 2*1
    assert!(!fast_growth_check(&[1, 2, 3, 4]));
    // constants fail
    assert!(!fast_growth_check(&[1, 1, 1]));
    // the minimal fast-growth table starting at 0
    assert!(fast_growth_check(&[0, 1, 4]));
}

#[test]
fn builder_produces_checked_ladders() {
    let m = f2();
    let filling = vec![
        parse_set(&m, &["e"]),
        parse_set(&m, &["a", "a^-1"]),
        parse_set(&m, &["b", "b^-1"]),
        vec![],
    ];
    let scale = build_ladder(&m, vec![1, 1, 1], filling, &BuildOptions::default()).unwrap();
    assert_eq!(scale.horizon(), 3);
    assert_eq!(*scale.certificate(), LadderCertificate::SwitchingChecked);

    let report = check_ladder(&scale, 3, DEFAULT_BALL_BUDGET).unwrap();
    assert!(report.direct_axioms_hold(), "ambiguous: {:?}", report.ambiguous);
    assert_eq!(report.sufficient_condition_holds(), Some(true));
    assert!(report.escape_holds_everywhere());
    assert!(report.generators_covered);
}

#[test]
fn colliding_fixture_fails_check() {
    let m = f2();
    let scale = Scale::new(
        m.clone(),
        vec![1],
        vec![parse_set(&m, &["a^3", "a^-3"])],
        vec![parse_set(&m, &["e", "a", "a^-1"]), vec![]],
    )
    .unwrap();
    let report = check_ladder(&scale, 2, DEFAULT_BALL_BUDGET).unwrap();
    assert!(!report.direct_axioms_hold());
    assert!(!report.ambiguous.is_empty());
    assert_eq!(report.sufficient_condition_holds(), Some(false));
}

#[test]
fn shortcut_matches_blind_enumeration() {
    // The escape shortcut must be invisible: same decompositions with and
    // without it, over a radius-4 ball of a certified ladder.
    let m = f2();
    let filling = vec![
        parse_set(&m, &["e"]),
        parse_set(&m, &["a", "a^-1"]),
        parse_set(&m, &["b", "b^-1"]),
        vec![],
    ];
    let scale = build_ladder(&m, vec![1, 1, 1], filling, &BuildOptions::default()).unwrap();
    let ball = scale.delta_ball(4, 4, DEFAULT_BALL_BUDGET).unwrap();
    let mut classifier = Classifier::new(&scale, DEFAULT_BALL_BUDGET);
    for g in ball.elements() {
        let fast = classifier.decompositions(g).unwrap();
        let blind = classifier.decompositions_blind(g).unwrap();
        assert_eq!(fast, blind, "element {g}");
    }
    assert!(ball.len() > 1_000);
}

#[test]
fn witness_classification_checks_its_inputs() {
    let params = TowerParams {
        gauge: vec![1, 2, 4],
        filling: tower_filling_generating(),
    };
    let scale = certified_free_ladder(&params).unwrap();
    let m = scale.model().clone();
    let sigma = scale.spiking_set(2)[0].clone();
    let prefix = scale.spiking_set(1)[0].clone(); // |prefix|_2 = 1 <= lambda(2)
    let g = m.multiply(&prefix, &sigma).unwrap();

    let witness = SpikeWitness {
        prefix: prefix.clone(),
        spike: sigma.clone(),
        postfix: m.identity(),
        height: 2,
        prefix_len_bound: 1,
        postfix_len_bound: 0,
    };
    match classify_with_witness(&scale, &g, &witness).unwrap() {
        Classification::Spiked(d) => assert_eq!(d.prefix, prefix),
        other => panic!("expected spiked, got {other:?}"),
    }

    // wrong product is rejected
    let bad = SpikeWitness {
        postfix: m.parse("a").unwrap(),
        ..witness.clone()
    };
    assert!(classify_with_witness(&scale, &g, &bad).is_err());

    // bounds above the gauge are rejected
    let bad = SpikeWitness {
        prefix_len_bound: 100,
        ..witness.clone()
    };
    assert!(classify_with_witness(&scale, &g, &bad).is_err());

    // uncertified scales cannot conclude uniqueness
    let mut untrusted = scale.clone();
    untrusted.set_certificate(LadderCertificate::Unverified);
    assert!(matches!(
        classify_with_witness(&untrusted, &g, &witness),
        Err(LadderError::NotCertified)
    ));
}

fn tower_filling_generating() -> tower::TowerFilling {
    tower::TowerFilling::Generating
}

#[test]
fn witness_agrees_with_enumeration_on_small_tower() {
    // Dual route: on a small certified tower, witness classification and
    // exhaustive enumeration agree wherever both apply.
    let params = TowerParams {
        gauge: vec![1, 1],
        filling: tower_filling_generating(),
    };
    let scale = certified_free_ladder(&params).unwrap();
    let m = scale.model().clone();
    let mut classifier = Classifier::new(&scale, DEFAULT_BALL_BUDGET);
    let ball = scale.delta_ball(3, 3, DEFAULT_BALL_BUDGET).unwrap();
    let mut spiked_seen = 0;
    for g in ball.elements() {
        if let Classification::Spiked(d) = classifier.classify(g).unwrap() {
            spiked_seen += 1;
            let witness = SpikeWitness {
                prefix: d.prefix.clone(),
                spike: d.spike.clone(),
                postfix: d.postfix.clone(),
                height: d.height,
                prefix_len_bound: scale.gauge_at(d.height),
                postfix_len_bound: scale.gauge_at(d.height),
            };
            match classify_with_witness(&scale, g, &witness).unwrap() {
                Classification::Spiked(w) => assert_eq!(w, d),
                other => panic!("expected spiked, got {other:?}"),
            }
        }
    }
    assert!(spiked_seen > 10, "need a meaningful sample, saw {spiked_seen}");
    let _ = m;
}

#[test]
fn scale_text_round_trip_is_bit_exact() {
    let m = f2();
    let filling = vec![
        parse_set(&m, &["e"]),
        parse_set(&m, &["a", "a^-1"]),
        parse_set(&m, &["b", "b^-1"]),
        vec![],
    ];
    let built = build_ladder(&m, vec![1, 1, 1], filling, &BuildOptions::default()).unwrap();
    let tower = certified_lamplighter_ladder(
        2,
        &TowerParams {
            gauge: vec![1, 2, 4],
            filling: tower::TowerFilling::Generating,
        },
    )
    .unwrap();
    for scale in [built, tower] {
        let text = scale_to_text(&scale);
        let parsed = scale_from_text(&text).unwrap();
        let text2 = scale_to_text(&parsed);
        assert_eq!(text, text2);
        assert_eq!(parsed.certificate(), scale.certificate());
    }
}

#[test]
fn horizon_error_when_prefix_ball_is_too_big() {
    // A gauge far past any budget: enumeration must fail loudly, and the
    // failure names the level.
    let params = TowerParams {
        gauge: vec![1, 40],
        filling: tower::TowerFilling::Generating,
    };
    let scale = certified_free_ladder(&params).unwrap();
    let mut classifier = Classifier::new(&scale, 10_000);
    let g = scale.model().parse("a b a").unwrap();
    match classifier.decompositions(&g) {
        Err(LadderError::Horizon { level: 2, .. }) => {}
        other => panic!("expected level-2 horizon error, got {other:?}"),
    }
}
