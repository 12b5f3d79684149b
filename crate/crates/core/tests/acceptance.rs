//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Exact structural claims are checked with zero tolerance (they are
//! theorems about the constructions, not statistics); Monte Carlo claims
//! run at fixed seeds with the stated tolerances. Thresholds marked
//! "pilot-frozen" were calibrated once by pilot runs and are pinned here.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use forestwalk::forest::{
    build_forest, forest_ray_prefixes, generate_rays, root_is_extendable,
};
use forestwalk::group::{ball, GeneratingSet, GroupElement, GroupModel, DEFAULT_BALL_BUDGET};
use forestwalk::ladder::{
    build_ladder, check_ladder, BuildOptions, Scale,
};
use forestwalk::preset::{build_preset_scale, walk_alpha, walk_law, PresetName};
use forestwalk::records::{
    analyze_records, build_envelopes, occupation_law_check, vervaat_chain_check, LawSampler,
    Simplicity, StepLaw,
};
use forestwalk::walk::{
    extract_ray, sample_path, stabilizer_probe, verify_constrained, verify_spike_structure,
    verify_trunk, SpikeOptions, StartPoint, StepDistribution, WalkRay,
};

// ---------------------------------------------------------------------------
// pinned thresholds
// ---------------------------------------------------------------------------

/// Criterion 1: exhaustive ladder check must finish within this budget.
const LADDER_CHECK_SECONDS_MAX: u64 = 120;
/// Criterion 6, power(3): fraction of runs whose non-simple record values
/// all lie among the first 10 record values.
const EARLY_TIES_FRACTION_MIN: f64 = 0.95;
/// Criterion 6, geometric(1/2) negative control.
const GEOMETRIC_TIE_FRACTION_MIN: f64 = 0.90;
/// Criterion 8: fraction of paths attaining a valid burn-in.
const BURN_IN_FRACTION_MIN: f64 = 0.90;
/// Criterion 9: mean envelope violations per path at epochs ≥ 10.
/// Pilot-frozen: pilots observed 0 violations across 10^4 paths.
const CONSTRAINED_MEAN_VIOLATIONS_MAX: f64 = 0.05;
/// Companion bound on the flagged-increment fraction at epochs 10..=30,
/// pilot-frozen from the α-sequence of the walk preset.
const FLAGGED_FRACTION_MAX: f64 = 0.05;
/// Criterion 10 probe window; rays must have depth ≥ window + window/2.
const PROBE_WINDOW: usize = 5;

const MASTER_SEED: u64 = 0x0f0e_57a1;

fn verdict(criterion: &str, pass: bool, details: &str) {
    println!(
        "criterion {criterion}: {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {details}");
}

fn small_presets() -> &'static [(&'static str, Arc<Scale>)] {
    static PRESETS: OnceLock<Vec<(&'static str, Arc<Scale>)>> = OnceLock::new();
    PRESETS.get_or_init(|| {
        vec![
            (
                "f2-small",
                build_preset_scale(PresetName::F2Small).expect("preset builds"),
            ),
            (
                "lamplighter-small",
                build_preset_scale(PresetName::LamplighterSmall).expect("preset builds"),
            ),
        ]
    })
}

#[test]
fn criterion_01_ladder_axioms() {
    let mut details = String::new();
    let mut pass = true;
    for (name, scale) in small_presets() {
        let start = Instant::now();
        let report = check_ladder(scale, 4, DEFAULT_BALL_BUDGET).expect("check runs");
        let elapsed = start.elapsed();
        let ok = report.direct_axioms_hold() && elapsed.as_secs() < LADDER_CHECK_SECONDS_MAX;
        pass &= ok;
        details.push_str(&format!(
            "{name}: {} elements, {} ambiguous, {} height violations, {:.1}s; ",
            report.ball_size,
            report.ambiguous.len(),
            report.height_drop_violations.len(),
            elapsed.as_secs_f64()
        ));
    }
    verdict("1 (ladder axioms)", pass, &details);
}

/// Builds randomized 3-level ladders: filling sets drawn from the standard
/// generators in a seeded shuffle, generator order permuted for the
/// tie-break.
fn randomized_build(model: &GroupModel, seed: u64) -> Option<Scale> {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let gens = model.standard_generators();
    let mut order = gens.clone();
    order.shuffle(&mut rng);

    // partition a couple of generators (with inverses) over A_1, A_2
    let mut pool: Vec<GroupElement> = Vec::new();
    for g in &gens {
        let inv = model.inverse(g).expect("model element");
        if !pool.contains(g) && !pool.contains(&inv) {
            pool.push(g.clone());
        }
    }
    pool.shuffle(&mut rng);
    let a1 = GeneratingSet::symmetric(model, vec![pool[0].clone()]).expect("symmetric");
    let a2 = if pool.len() > 1 && rng.gen_bool(0.7) {
        GeneratingSet::symmetric(model, vec![pool[1].clone()])
            .expect("symmetric")
            .elements
    } else {
        Vec::new()
    };
    let filling = vec![vec![model.identity()], a1.elements, a2, Vec::new()];
    let options = BuildOptions {
        generator_order: Some(order),
        ..BuildOptions::default()
    };
    build_ladder(model, vec![1, 1, 1], filling, &options).ok()
}

#[test]
fn criterion_02_sufficient_condition_implication() {
    let mut checked = 0;
    let mut counterexamples = 0;
    let mut scales: Vec<(String, Arc<Scale>)> = small_presets()
        .iter()
        .map(|(n, s)| (n.to_string(), s.clone()))
        .collect();

    let models = [
        GroupModel::free(2).expect("model"),
        GroupModel::lamplighter(2).expect("model"),
    ];
    let mut produced = 0;
    let mut seed = MASTER_SEED;
    while produced < 20 {
        let model = &models[(produced % 2) as usize];
        seed = seed.wrapping_add(1);
        if let Some(scale) = randomized_build(model, seed) {
            scales.push((format!("random-{produced}"), Arc::new(scale)));
            produced += 1;
        }
    }

    for (name, scale) in &scales {
        let report = check_ladder(scale, 3, DEFAULT_BALL_BUDGET).expect("check runs");
        if report.sufficient_condition_holds() == Some(true) {
            checked += 1;
            if !report.direct_axioms_hold() {
                counterexamples += 1;
                eprintln!("counterexample: {name}");
            }
        } else {
            // builder outputs satisfy the condition by construction
            counterexamples += 1;
            eprintln!("{name}: sufficient condition unexpectedly not verified");
        }
    }
    verdict(
        "2 (sufficient condition)",
        counterexamples == 0 && checked == scales.len(),
        &format!("{checked} scales pass the switching check, {counterexamples} counterexamples"),
    );
}

#[test]
fn criterion_03_forest_structure() {
    let mut details = String::new();
    let mut pass = true;
    for (name, scale) in small_presets() {
        let forest = build_forest(scale.clone(), 4, DEFAULT_BALL_BUDGET).expect("forest builds");
        let stats = forest.stats();
        let ok = stats.acyclic && stats.root_violations == 0;
        pass &= ok;
        details.push_str(&format!(
            "{name}: {} vertices, {} roots, {} parent-closed components, {} violations; ",
            stats.vertices, stats.roots, stats.parent_closed_components, stats.root_violations
        ));
    }
    verdict("3 (forest structure)", pass, &details);
}

#[test]
fn criterion_04_markov_ray_oracle() {
    let scale = build_preset_scale(PresetName::F2Markov).expect("preset builds");
    let depth = 3;
    let rays = generate_rays(&scale, depth, 4_000_000).expect("rays generate");
    let forest = build_forest(scale.clone(), 6, 4_000_000).expect("forest builds");

    let mut from_forest = forest_ray_prefixes(&forest, depth);
    from_forest
        .retain(|path| path.len() > 1 || root_is_extendable(&scale, &path[0]).unwrap_or(false));
    let from_rules: std::collections::BTreeSet<Vec<GroupElement>> = rays
        .iter()
        .filter(|r| r.vertices.iter().all(|v| forest.contains(v)))
        .map(|r| r.vertices.clone())
        .collect();

    let only_forest = from_forest.difference(&from_rules).count();
    let only_rules = from_rules.difference(&from_forest).count();
    let depth3 = from_rules.iter().filter(|p| p.len() == depth + 1).count();
    verdict(
        "4 (ray rules vs forest)",
        only_forest == 0 && only_rules == 0 && depth3 > 0,
        &format!(
            "{} rule rays in ball, {} forest prefixes, {} depth-3 rays, symmetric difference {}",
            from_rules.len(),
            from_forest.len(),
            depth3,
            only_forest + only_rules
        ),
    );
}

#[test]
fn criterion_05_records_analytic() {
    let law = StepLaw::power(3.0, 512).expect("law");

    // rows of the record-value transition matrix sum to 1 within 1e-12
    let mut rows_ok = true;
    for i in 0..40u64 {
        let mut sum = 0.0;
        for j in i..=400 {
            sum += law.vervaat_transition(i, j).expect("transition");
        }
        sum += law.tail_mass(401) / law.tail_mass(i);
        if (sum - 1.0).abs() > 1e-12 {
            rows_ok = false;
        }
    }

    let chain = vervaat_chain_check(&law, 100_000, 5_000, 500, MASTER_SEED ^ 0x05)
        .expect("chain check runs");
    let occupation = occupation_law_check(&law, 100_000, 10_000_000, 20, MASTER_SEED ^ 0x0c)
        .expect("occupation check runs");

    verdict(
        "5 (records, analytic)",
        rows_ok && chain.all_within_3se && occupation.all_within_3se(),
        &format!(
            "row sums ok {rows_ok}; {} chain cells within 3 SE over {} transitions: {}; \
             occupation rows j ≤ 20 within 3 SE: {}",
            chain.cells.len(),
            chain.transitions,
            chain.all_within_3se,
            occupation.all_within_3se()
        ),
    );
}

/// Distinct-value tie structure of one sampled run.
fn run_tie_profile(sampler: &LawSampler, len: usize, rng: &mut impl Rng) -> (Vec<u64>, HashSet<u64>) {
    let xs: Vec<u64> = (0..len).map(|_| sampler.sample(rng)).collect();
    let trace = analyze_records(&xs).expect("non-empty");
    let distinct = trace.distinct_values();
    let non_simple = trace
        .occupation
        .iter()
        .filter(|(_, &count)| count >= 2)
        .map(|(&v, _)| v)
        .collect();
    (distinct, non_simple)
}

#[test]
fn criterion_06_simplicity_dichotomy() {
    let runs = 10_000u64;
    let len = 10_000usize;

    let power = StepLaw::power(3.0, 512).expect("law");
    assert_eq!(power.simplicity_criterion().verdict, Simplicity::Holds);
    let sampler = power.sampler();
    let early: u64 = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(MASTER_SEED ^ 0x6a);
            rng.set_stream(run);
            let (distinct, non_simple) = run_tie_profile(&sampler, len, &mut rng);
            let first10: HashSet<u64> = distinct.iter().take(10).copied().collect();
            non_simple.iter().all(|v| first10.contains(v)) as u64
        })
        .sum();
    let early_fraction = early as f64 / runs as f64;

    let geometric = StepLaw::geometric(0.5, 256).expect("law");
    assert_eq!(geometric.simplicity_criterion().verdict, Simplicity::Fails);
    let sampler_g = geometric.sampler();
    let tied: u64 = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(MASTER_SEED ^ 0x6b);
            rng.set_stream(run);
            let (distinct, non_simple) = run_tie_profile(&sampler_g, len, &mut rng);
            let first20: HashSet<u64> = distinct.iter().take(20).copied().collect();
            non_simple.iter().any(|v| first20.contains(v)) as u64
        })
        .sum();
    let tie_fraction = tied as f64 / runs as f64;

    verdict(
        "6 (simplicity dichotomy)",
        early_fraction >= EARLY_TIES_FRACTION_MIN && tie_fraction >= GEOMETRIC_TIE_FRACTION_MIN,
        &format!(
            "power(3): ties confined to first 10 values in {early_fraction:.4} of runs \
             (≥ {EARLY_TIES_FRACTION_MIN}); geometric(1/2): early tie in {tie_fraction:.4} \
             (≥ {GEOMETRIC_TIE_FRACTION_MIN})"
        ),
    );
}

struct WalkBatch {
    paths: u64,
    exceptions: usize,
    verified_epochs: usize,
    valid_k0: u64,
    chain_pairs: usize,
    chain_exceptions: usize,
    flagged_fraction_mean: f64,
}

fn walk_dist() -> &'static Arc<StepDistribution> {
    static DIST: OnceLock<Arc<StepDistribution>> = OnceLock::new();
    DIST.get_or_init(|| {
        let scale = build_preset_scale(PresetName::F2Walk).expect("preset builds");
        Arc::new(
            StepDistribution::build(scale, walk_law(), &|i| walk_alpha(i))
                .expect("distribution builds"),
        )
    })
}

fn main_walk_batch() -> &'static WalkBatch {
    static BATCH: OnceLock<WalkBatch> = OnceLock::new();
    BATCH.get_or_init(|| {
        let dist = walk_dist();
        let paths = 1_000u64;
        let results: Vec<(usize, usize, bool, usize, usize, f64)> = (0..paths)
            .into_par_iter()
            .map(|stream| {
                let trace = sample_path(
                    dist,
                    10_000,
                    StartPoint::identity(dist.scale()),
                    MASTER_SEED,
                    (1 << 32) + stream,
                )
                .expect("path samples");
                let report = verify_spike_structure(dist, &trace, &SpikeOptions::default())
                    .expect("verification runs");
                let trunk = verify_trunk(&report);
                (
                    report.exceptions,
                    report.verified_epochs,
                    trunk.k0.is_some(),
                    trunk.chain_pairs,
                    trunk.chain_exceptions,
                    report.flagged_fraction_10_30,
                )
            })
            .collect();
        WalkBatch {
            paths,
            exceptions: results.iter().map(|r| r.0).sum(),
            verified_epochs: results.iter().map(|r| r.1).sum(),
            valid_k0: results.iter().filter(|r| r.2).count() as u64,
            chain_pairs: results.iter().map(|r| r.3).sum(),
            chain_exceptions: results.iter().map(|r| r.4).sum(),
            flagged_fraction_mean: results.iter().map(|r| r.5).sum::<f64>() / paths as f64,
        }
    })
}

#[test]
fn criterion_07_walk_spike_structure() {
    let batch = main_walk_batch();
    verdict(
        "7 (walk spike structure)",
        batch.exceptions == 0 && batch.verified_epochs > 1_000,
        &format!(
            "{} paths x 10^4 steps: {} verified epochs, {} exceptions",
            batch.paths, batch.verified_epochs, batch.exceptions
        ),
    );
}

#[test]
fn criterion_08_trunk() {
    let batch = main_walk_batch();
    let k0_fraction = batch.valid_k0 as f64 / batch.paths as f64;
    let flagged_ok = batch.flagged_fraction_mean <= FLAGGED_FRACTION_MAX;
    verdict(
        "8 (trunk)",
        batch.chain_exceptions == 0 && k0_fraction >= BURN_IN_FRACTION_MIN && flagged_ok,
        &format!(
            "{} chain pairs, {} exceptions; burn-in on {:.3} of paths (≥ {}); \
             flagged fraction {:.4} (≤ {})",
            batch.chain_pairs,
            batch.chain_exceptions,
            k0_fraction,
            BURN_IN_FRACTION_MIN,
            batch.flagged_fraction_mean,
            FLAGGED_FRACTION_MAX
        ),
    );
}

#[test]
fn criterion_09_constrained_convergence() {
    let dist = walk_dist();
    let law = walk_law();
    let envelopes =
        build_envelopes(&law, dist.scale().horizon() as u64).expect("envelopes build");
    let paths = 10_000u64;
    let results: Vec<(usize, usize, bool)> = (0..paths)
        .into_par_iter()
        .map(|stream| {
            let trace = sample_path(
                dist,
                1_000,
                StartPoint::identity(dist.scale()),
                MASTER_SEED,
                (5 << 32) + stream,
            )
            .expect("path samples");
            let report = verify_spike_structure(dist, &trace, &SpikeOptions::default())
                .expect("verification runs");
            let constrained =
                verify_constrained(&trace, &envelopes, &report, 10).expect("envelope check");
            (
                constrained.pairs,
                constrained.violations,
                constrained.survival_consistent,
            )
        })
        .collect();
    let pairs: usize = results.iter().map(|r| r.0).sum();
    let violations: usize = results.iter().map(|r| r.1).sum();
    let survival = results.iter().all(|r| r.2);
    let mean = violations as f64 / paths as f64;
    verdict(
        "9 (constrained convergence)",
        mean <= CONSTRAINED_MEAN_VIOLATIONS_MAX && survival && pairs > 500,
        &format!(
            "{pairs} envelope pairs over {paths} paths, {violations} violations \
             (mean {mean:.5} ≤ {CONSTRAINED_MEAN_VIOLATIONS_MAX}), edge survival consistent {survival}"
        ),
    );
}

#[test]
fn criterion_10_freeness() {
    let dist = walk_dist();
    let scale = dist.scale().clone();
    let model = scale.model().clone();
    let need_rays = 100usize;
    let min_vertices = 9; // depth ≥ 8

    // First pass cheaply finds the qualifying streams in blocks (stopping
    // as soon as enough are known), then re-runs them with ray collection
    // (paths are deterministic in their stream).
    let mut streams: Vec<u64> = Vec::new();
    let mut next_block = 0u64;
    while streams.len() < need_rays && next_block < 2_048 {
        let block: Vec<u64> = (next_block..next_block + 128)
            .into_par_iter()
            .filter_map(|stream| {
                let trace = sample_path(
                    dist,
                    100_000,
                    StartPoint::identity(dist.scale()),
                    MASTER_SEED,
                    (9 << 32) + stream,
                )
                .ok()?;
                let report =
                    verify_spike_structure(dist, &trace, &SpikeOptions::default()).ok()?;
                let k0 = report.k0?;
                (report.epochs.len() - k0 >= min_vertices).then_some(stream)
            })
            .collect();
        streams.extend(block);
        next_block += 128;
    }
    streams.sort_unstable();
    streams.truncate(need_rays);
    assert!(
        streams.len() >= need_rays,
        "only {} deep paths among {next_block}",
        streams.len()
    );

    let rays: Vec<WalkRay> = streams
        .par_iter()
        .map(|&stream| {
            let trace = sample_path(
                dist,
                100_000,
                StartPoint::identity(dist.scale()),
                MASTER_SEED,
                (9 << 32) + stream,
            )
            .expect("path samples");
            let options = SpikeOptions {
                collect_ray: true,
                ..SpikeOptions::default()
            };
            let report =
                verify_spike_structure(dist, &trace, &options).expect("verification runs");
            let trunk = verify_trunk(&report);
            extract_ray(&report, &trunk).expect("qualifying path yields a ray")
        })
        .collect();

    // all probes g ≠ e from the radius-3 ball of the first four levels
    let probe_ball = ball(&model, &scale.delta_gens(4), 3, DEFAULT_BALL_BUDGET)
        .expect("probe ball materializes");
    let mut probes = vec![model.identity()];
    probes.extend(
        probe_ball
            .elements()
            .iter()
            .filter(|g| !model.is_identity(g))
            .cloned(),
    );

    let report =
        stabilizer_probe(&model, &rays, &probes, PROBE_WINDOW).expect("probe runs");
    verdict(
        "10 (freeness)",
        report.hits.is_empty() && report.identity_control_passed,
        &format!(
            "{} rays (depth ≥ 8) x {} probes, window {}: {} hits, identity control {}",
            report.rays,
            report.probes,
            report.window,
            report.hits.len(),
            report.identity_control_passed
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    use forestwalk::experiment::{run, CheckToggles, ExperimentConfig, ScaleSpec};

    let base = std::env::temp_dir().join(format!("forestwalk-acceptance-{}", std::process::id()));
    let mk_config = |dir: &std::path::Path| ExperimentConfig {
        seed: 3141,
        scale: ScaleSpec::preset("f2-small"),
        law: Default::default(),
        alpha: Default::default(),
        walk: forestwalk::experiment::WalkSpec {
            length: 400,
            paths: 40,
            start: "e".into(),
            epoch_csv_paths: 2,
        },
        checks: CheckToggles {
            ladder: true,
            forest: true,
            records: true,
            walk: true,
            ..Default::default()
        },
        params: {
            let mut p: forestwalk::experiment::ParamSpec = Default::default();
            p.records_runs = 4_000;
            p.records_transitions = 10_000;
            p.ladder_ball_radius = 2;
            p.forest_ball_radius = 2;
            p
        },
        output: forestwalk::experiment::OutputSpec {
            dir: dir.display().to_string(),
        },
    };

    let dir_a = base.join("a");
    let dir_b = base.join("b");
    let (status_a, _) = run(&mk_config(&dir_a)).expect("run a");
    let (status_b, _) = run(&mk_config(&dir_b)).expect("run b");
    assert_eq!(status_a, status_b);

    let mut names: Vec<String> = std::fs::read_dir(&dir_a)
        .expect("dir a")
        .map(|e| e.expect("entry").file_name().into_string().expect("utf8"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    let mut all_equal = true;
    for name in &names {
        let a = std::fs::read(dir_a.join(name)).expect("artifact a");
        let b = std::fs::read(dir_b.join(name)).expect("artifact b");
        if a != b {
            all_equal = false;
            eprintln!("artifact differs: {name}");
        }
    }
    // the config echoes the output dir, which differs by construction;
    // compare summaries with the dir fields stripped
    if !all_equal {
        all_equal = true;
        for name in &names {
            let a = std::fs::read_to_string(dir_a.join(name)).expect("artifact a");
            let b = std::fs::read_to_string(dir_b.join(name)).expect("artifact b");
            let a = a.replace(&dir_a.display().to_string(), "OUT");
            let b = b.replace(&dir_b.display().to_string(), "OUT");
            if a != b {
                all_equal = false;
                eprintln!("artifact differs beyond the output path: {name}");
            }
        }
    }
    std::fs::remove_dir_all(&base).ok();
    verdict(
        "11 (determinism)",
        all_equal,
        &format!("{} artifacts byte-identical across reruns", names.len()),
    );
}
