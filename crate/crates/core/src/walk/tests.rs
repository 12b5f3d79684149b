use std::sync::Arc;

use super::*;
use crate::group::DEFAULT_BALL_BUDGET;
use crate::ladder::{
    build_ladder, certified_free_ladder, BuildOptions, SetKind, TowerFilling, TowerParams,
};
use crate::records::StepLaw;
use crate::GroupModel;

/// Small builder ladder on F2 with the unit gauge: exhaustive classification
/// is feasible, so walks over it can be cross-checked enumeratively.
fn small_scale() -> Arc<crate::Scale> {
    let m = GroupModel::free(2).unwrap();
    let parse = |w: &str| m.parse(w).unwrap();
    let filling = vec![
        vec![parse("e")],
        vec![parse("a"), parse("a^-1")],
        vec![parse("b"), parse("b^-1")],
        vec![],
    ];
    Arc::new(build_ladder(&m, vec![1, 1, 1], filling, &BuildOptions::default()).unwrap())
}

/// A deeper certified tower whose gauge grows quadratically, the regime the
/// acceptance walks use.
fn tower_scale(levels: u64) -> Arc<crate::Scale> {
    let gauge: Vec<u64> = (1..=levels).map(|n| 3 * (n + 1) * (n + 1)).collect();
    Arc::new(
        certified_free_ladder(&TowerParams {
            gauge,
            filling: TowerFilling::Generating,
        })
        .unwrap(),
    )
}

fn small_dist() -> StepDistribution {
    StepDistribution::build(
        small_scale(),
        StepLaw::power(3.0, 64).unwrap(),
        &|i| 0.2 / ((i + 1) * (i + 1)) as f64,
    )
    .unwrap()
}

#[test]
fn distribution_masses_and_symmetry() {
    let dist = small_dist();
    assert!(dist.allocation_defect() < 1e-12);
    assert!(dist.symmetric);
    assert!(dist.entropy > 0.0 && dist.entropy.is_finite());
    // level masses: p_i below the horizon, the tail on top
    let law = StepLaw::power(3.0, 64).unwrap();
    for i in 0..3u32 {
        assert!((dist.level_mass(i) - law.weight(i as u64)).abs() < 1e-15);
    }
    assert!((dist.level_mass(3) - law.tail_mass(3)).abs() < 1e-15);
    // μ(e) = p_0 > 0
    let e = dist.scale().model().identity();
    assert!((dist.weight(&e) - law.weight(0)).abs() < 1e-15);
}

#[test]
fn alpha_zero_supports_only_spikes_above_level_zero() {
    let dist = StepDistribution::build(
        small_scale(),
        StepLaw::power(3.0, 64).unwrap(),
        &|_| 0.0,
    )
    .unwrap();
    let scale = dist.scale().clone();
    for level in 1..=3u32 {
        for g in scale.filling_set(level) {
            assert_eq!(dist.weight(g), 0.0, "filling element {g} has mass");
        }
        for g in scale.spiking_set(level) {
            assert!(dist.weight(g) > 0.0);
        }
    }
}

#[test]
fn alpha_on_empty_filling_is_reallocated() {
    // level 3 has an empty filling set in the small scale
    let dist = StepDistribution::build(
        small_scale(),
        StepLaw::power(3.0, 64).unwrap(),
        &|_| 0.5,
    )
    .unwrap();
    assert_eq!(dist.reallocated_levels, vec![3]);
    assert!(dist.allocation_defect() < 1e-12);
}

#[test]
fn failing_law_is_rejected() {
    let err = StepDistribution::build(
        small_scale(),
        StepLaw::geometric(0.5, 64).unwrap(),
        &|_| 0.0,
    )
    .unwrap_err();
    assert!(matches!(err, WalkError::LawNotSimple(_)));
}

#[test]
fn paths_are_reproducible() {
    let dist = small_dist();
    let start = StartPoint::identity(dist.scale());
    let one = sample_path(&dist, 500, start.clone(), 99, 7).unwrap();
    let two = sample_path(&dist, 500, start.clone(), 99, 7).unwrap();
    assert_eq!(one.increments, two.increments);
    let other = sample_path(&dist, 500, start, 99, 8).unwrap();
    assert_ne!(one.increments, other.increments);
}

#[test]
fn zero_length_path_is_just_the_start() {
    let dist = small_dist();
    let start = StartPoint::identity(dist.scale());
    let trace = sample_path(&dist, 0, start, 1, 0).unwrap();
    let positions = trace.positions(&dist).unwrap();
    assert_eq!(positions.len(), 1);
    assert!(dist.scale().model().is_identity(&positions[0]));
}

#[test]
fn injected_increments_give_hand_computed_positions() {
    let dist = small_dist();
    let scale = dist.scale().clone();
    let m = scale.model().clone();
    // e, then sigma_1[0], then a, then sigma_2[0]
    let incs = vec![
        Increment { level: 0, kind: SetKind::Filling, member: 0 },
        Increment { level: 1, kind: SetKind::Spiking, member: 0 },
        Increment { level: 1, kind: SetKind::Filling, member: 0 },
        Increment { level: 2, kind: SetKind::Spiking, member: 0 },
    ];
    let trace =
        WalkTrace::from_increments(StartPoint::identity(&scale), incs).unwrap();
    let positions = trace.positions(&dist).unwrap();
    let mut expected = m.identity();
    for inc in &trace.increments {
        expected = m.multiply(&expected, dist.element(inc)).unwrap();
    }
    assert_eq!(positions.last().unwrap(), &expected);
    assert_eq!(trace.heights(), vec![0, 1, 1, 2]);
}

#[test]
fn spike_structure_zero_exceptions_with_enumeration() {
    // Many short paths on the small scale; every premise-holding epoch must
    // classify as predicted, with the enumerative classifier agreeing.
    let dist = small_dist();
    let options = SpikeOptions {
        cross_check_enumerative: true,
        budget: DEFAULT_BALL_BUDGET,
        collect_ray: false,
        full_product_checks: true,
    };
    let mut verified_total = 0;
    for stream in 0..300 {
        let trace = sample_path(
            &dist,
            30,
            StartPoint::identity(dist.scale()),
            424_242,
            stream,
        )
        .unwrap();
        let report = verify_spike_structure(&dist, &trace, &options).unwrap();
        assert_eq!(report.exceptions, 0, "stream {stream}");
        verified_total += report.verified_epochs;
    }
    assert!(
        verified_total > 50,
        "need a meaningful number of verified epochs, got {verified_total}"
    );
}

#[test]
fn tower_walk_zero_exceptions_and_trunk() {
    // The production regime: counting certificates plus sampled product
    // checks on a certified tower. The horizon is sized so the absorbing
    // top level is essentially never hit twice within a trace.
    let scale = tower_scale(64);
    let dist = StepDistribution::build(
        scale,
        StepLaw::power(3.0, 64).unwrap(),
        &|i| 0.2 / ((i + 1) * (i + 1)) as f64,
    )
    .unwrap();
    let options = SpikeOptions {
        collect_ray: true,
        ..SpikeOptions::default()
    };
    let mut valid_k0 = 0;
    let mut chain_pairs_total = 0;
    let mut product_checks_total = 0;
    for stream in 0..40 {
        let trace = sample_path(
            &dist,
            2_000,
            StartPoint::identity(dist.scale()),
            31_337,
            stream,
        )
        .unwrap();
        let report = verify_spike_structure(&dist, &trace, &options).unwrap();
        assert_eq!(report.exceptions, 0, "stream {stream}");
        product_checks_total += report.product_checked_epochs;
        let trunk = verify_trunk(&report);
        if let Some(k0) = trunk.k0 {
            valid_k0 += 1;
            assert_eq!(trunk.chain_exceptions, 0);
            chain_pairs_total += trunk.chain_pairs;
            let ray = extract_ray(&report, &trunk).unwrap();
            assert_eq!(ray.vertices.len(), report.epochs.len() - k0);
        }
    }
    assert!(valid_k0 >= 30, "only {valid_k0}/40 paths attained burn-in");
    assert!(chain_pairs_total > 40);
    assert!(product_checks_total > 20);
}

#[test]
fn adversarial_block_violation_is_excluded_not_asserted() {
    // Build an increment list whose record epoch is followed by more
    // non-identity low increments than the gauge allows: premise (c) fails,
    // the epoch is excluded, and no exception is charged.
    let dist = small_dist();
    let scale = dist.scale().clone();
    let lambda = scale.gauge_at(2);
    // one record at height 2, followed by sub-record noise at height 1
    let mut incs = vec![Increment { level: 2, kind: SetKind::Spiking, member: 0 }];
    for _ in 0..(lambda + 3) {
        incs.push(Increment { level: 1, kind: SetKind::Filling, member: 0 });
    }
    let trace = WalkTrace::from_increments(StartPoint::identity(&scale), incs).unwrap();
    let report = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
    // the single record epoch is the height-2 spike; its block exceeds λ(2)
    let first = &report.epochs[0];
    assert_eq!(first.value, 2);
    assert!(first.simple && first.sigma_increment);
    assert!(!first.block_within_gauge);
    assert!(!first.premises_hold, "block bound must fail");
    assert_eq!(report.exceptions, 0);
}

#[test]
fn empty_trace_trunk_is_inconclusive() {
    let dist = small_dist();
    let trace =
        WalkTrace::from_increments(StartPoint::identity(dist.scale()), vec![]).unwrap();
    let report = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
    let trunk = verify_trunk(&report);
    assert!(trunk.inconclusive);
    assert_eq!(trunk.k0, None);
}

#[test]
fn constrained_envelope_violations_are_rare() {
    use crate::records::build_envelopes;
    let scale = tower_scale(64);
    let law = StepLaw::power(3.0, 64).unwrap();
    let envelopes = build_envelopes(&law, 64).unwrap();
    let dist = StepDistribution::build(scale, law, &|_| 0.0).unwrap();
    let mut total_pairs = 0;
    let mut total_violations = 0;
    for stream in 0..40 {
        let trace = sample_path(
            &dist,
            2_000,
            StartPoint::identity(dist.scale()),
            555,
            stream,
        )
        .unwrap();
        let report = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
        let constrained = verify_constrained(&trace, &envelopes, &report, 0).unwrap();
        assert!(constrained.survival_consistent);
        total_pairs += constrained.pairs;
        total_violations += constrained.violations;
    }
    assert!(total_pairs > 100);
    assert!(
        (total_violations as f64) < 0.05 * total_pairs as f64,
        "{total_violations} violations in {total_pairs} pairs"
    );
}

#[test]
fn stabilizer_probe_controls() {
    let scale = tower_scale(96);
    let dist = StepDistribution::build(
        scale.clone(),
        StepLaw::power(3.0, 64).unwrap(),
        &|_| 0.0,
    )
    .unwrap();
    let m = scale.model().clone();
    let options = SpikeOptions {
        collect_ray: true,
        ..SpikeOptions::default()
    };
    let mut rays = Vec::new();
    let mut stream = 0;
    while rays.len() < 5 && stream < 200 {
        let trace = sample_path(
            &dist,
            4_000,
            StartPoint::identity(dist.scale()),
            808,
            stream,
        )
        .unwrap();
        let report = verify_spike_structure(&dist, &trace, &options).unwrap();
        let trunk = verify_trunk(&report);
        if let Some(ray) = extract_ray(&report, &trunk) {
            if ray.vertices.len() >= 8 {
                rays.push(ray);
            }
        }
        stream += 1;
    }
    assert!(rays.len() >= 5, "not enough deep rays in 200 paths");

    let mut probes = vec![m.identity(), m.parse("b").unwrap()];
    probes.push(scale.spiking_set(1)[0].clone());
    let report = stabilizer_probe(&m, &rays, &probes, 4).unwrap();
    assert!(report.identity_control_passed);
    assert!(report.hits.is_empty(), "hits: {:?}", report.hits);

    // too-short rays are a precondition error
    let short = WalkRay {
        vertices: rays[0].vertices[..3].to_vec(),
        heights: rays[0].heights[..3].to_vec(),
        times: rays[0].times[..3].to_vec(),
    };
    assert!(stabilizer_probe(&m, &[short], &probes, 4).is_err());
}

#[test]
fn hitting_statistics_translation_consistency() {
    // Compare cylinder tables from two disjoint seed batches, and check the
    // translation relation for a shifted start.
    let dist = small_dist();
    let scale = dist.scale().clone();
    let m = scale.model().clone();
    let options = SpikeOptions {
        cross_check_enumerative: false,
        budget: DEFAULT_BALL_BUDGET,
        collect_ray: true,
        full_product_checks: true,
    };
    // Short traces keep the burn-in suffix verifiable at the unit gauge;
    // conclusiveness is a minority event, so the batches are wide.
    let run_batch = |start: StartPoint, seed: u64, n: u64| {
        let mut batch = Vec::new();
        for stream in 0..n {
            let trace = sample_path(&dist, 25, start.clone(), seed, stream).unwrap();
            let report = verify_spike_structure(&dist, &trace, &options).unwrap();
            batch.push((trace, report));
        }
        batch
    };

    let batch_a = run_batch(StartPoint::identity(&scale), 1_001, 1_600);
    let table_a = hitting_statistics(&dist, &batch_a, 1, DEFAULT_BALL_BUDGET).unwrap();
    assert!(table_a.conclusive_paths > 60, "{}", table_a.conclusive_paths);
    let mass: u64 = table_a.counts.values().sum();
    assert_eq!(mass as usize, table_a.conclusive_paths);

    let batch_b = run_batch(StartPoint::identity(&scale), 2_002, 1_600);
    let table_b = hitting_statistics(&dist, &batch_b, 1, DEFAULT_BALL_BUDGET).unwrap();
    let tv = table_a.tv_distance(&table_b);
    assert!(tv < 0.25, "tv distance between seed batches: {tv}");

    // paired runs from a shifted start share increments, so trunk vertices
    // must be exact translates; root cylinders need not correspond because
    // the forest is not left-invariant
    let g = m.parse("a").unwrap();
    let start_g = StartPoint {
        element: g.clone(),
        from_level: 1,
        bound: 1,
    };
    let batch_g = run_batch(start_g, 1_001, 1_600);
    let paired = paired_translation_check(&m, &g, &batch_a, &batch_g).unwrap();
    assert!(paired.pairs_compared > 30, "{:?}", paired);
    assert_eq!(paired.mismatches, 0, "{:?}", paired);
    // translating a table leaves its total mass intact
    let translated = translate_cylinder_table(&m, &g, &table_a).unwrap();
    assert_eq!(
        translated.counts.values().sum::<u64>(),
        table_a.counts.values().sum::<u64>()
    );
}
