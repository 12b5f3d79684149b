//! Stage implementations: build → check → forest → records → simulate →
//! verify → report artifacts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::forest::{
    build_forest, export_dot, forest_ray_prefixes, forest_to_json, generate_rays,
    root_is_extendable,
};
use crate::group::ball;
use crate::ladder::{
    check_ladder, scale_from_text, scale_to_text, LadderCertificate, Scale,
    SwitchingLevelOutcome,
};
use crate::preset::{build_preset_scale, PresetName};
use crate::records::{
    build_envelopes, occupation_law_check, vervaat_chain_check, StepLaw,
};
use crate::walk::{
    extract_ray, sample_path, stabilizer_probe, verify_constrained, verify_spike_structure,
    verify_trunk, SpikeOptions, StartPoint, StepDistribution, WalkRay,
};

use super::config::ExperimentConfig;
use super::{io_err, ExperimentError, RunStatus};

/// Seed-stream bases per stage, so stages never share ChaCha streams.
const STREAM_WALK: u64 = 1 << 32;
const STREAM_STABILIZER: u64 = 2 << 32;
const SEED_RECORDS_OCCUPATION: u64 = 0x0cc0;
const SEED_RECORDS_VERVAAT: u64 = 0x7e57;

#[derive(Debug, Clone, Serialize)]
pub struct StageOutcome {
    pub name: String,
    /// `None` when the stage only produces data (no pass/fail semantics).
    pub passed: Option<bool>,
    pub details: String,
}

#[derive(Debug)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub stages: Vec<StageOutcome>,
}

fn write_text(path: &Path, text: &str) -> Result<(), ExperimentError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), ExperimentError> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    write_text(path, &text)
}

pub(crate) fn resolve_scale(config: &ExperimentConfig) -> Result<Arc<Scale>, ExperimentError> {
    let spec = &config.scale;
    match spec.source.as_str() {
        "preset" => {
            let name = spec
                .preset
                .as_deref()
                .ok_or_else(|| ExperimentError::Config("preset source needs `preset`".into()))?;
            let preset = PresetName::parse(name).ok_or_else(|| {
                ExperimentError::Config(format!(
                    "unknown preset `{name}`; available: {}",
                    PresetName::ALL
                        .iter()
                        .map(|p| p.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            Ok(build_preset_scale(preset)?)
        }
        "file" => {
            let path = spec
                .path
                .as_deref()
                .ok_or_else(|| ExperimentError::Config("file source needs `path`".into()))?;
            let text =
                fs::read_to_string(path).map_err(|e| io_err(Path::new(path), e))?;
            Ok(Arc::new(scale_from_text(&text)?))
        }
        "builder" => {
            let model = spec.group_model()?;
            let gauge = spec
                .gauge
                .clone()
                .ok_or_else(|| ExperimentError::Config("builder needs `gauge`".into()))?;
            let filling_text = spec
                .filling
                .clone()
                .ok_or_else(|| ExperimentError::Config("builder needs `filling`".into()))?;
            let mut filling = Vec::new();
            for set in filling_text {
                let mut parsed = Vec::new();
                for word in set {
                    parsed.push(model.parse(&word)?);
                }
                filling.push(parsed);
            }
            let scale = crate::ladder::build_ladder(
                &model,
                gauge,
                filling,
                &crate::ladder::BuildOptions::default(),
            )?;
            Ok(Arc::new(scale))
        }
        "tower" => {
            let gauge = spec
                .gauge
                .clone()
                .ok_or_else(|| ExperimentError::Config("tower needs `gauge`".into()))?;
            let filling = match spec.tower_filling.as_deref() {
                Some("minimal") => crate::ladder::TowerFilling::Minimal,
                Some("generating") | None => crate::ladder::TowerFilling::Generating,
                Some(other) => {
                    return Err(ExperimentError::Config(format!(
                        "unknown tower filling `{other}`"
                    )))
                }
            };
            let params = crate::ladder::TowerParams { gauge, filling };
            let model = spec.group_model()?;
            let scale = match model {
                crate::group::GroupModel::Free { .. } => {
                    crate::ladder::certified_free_ladder(&params)?
                }
                crate::group::GroupModel::Lamplighter { modulus } => {
                    crate::ladder::certified_lamplighter_ladder(modulus, &params)?
                }
                crate::group::GroupModel::FreeProduct { .. } => {
                    return Err(ExperimentError::Config(
                        "certified towers exist for free and lamplighter models".into(),
                    ))
                }
            };
            Ok(Arc::new(scale))
        }
        other => Err(ExperimentError::Config(format!(
            "unknown scale source `{other}`"
        ))),
    }
}

pub fn run_all(
    config: &ExperimentConfig,
) -> Result<(RunStatus, RunArtifacts), ExperimentError> {
    let out_dir = PathBuf::from(&config.output.dir);
    fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
    let mut stages: Vec<StageOutcome> = Vec::new();

    // Stage: scale construction (a dependency of everything but records).
    let scale = resolve_scale(config)?;
    write_text(&out_dir.join("scale.txt"), &scale_to_text(&scale))?;
    stages.push(StageOutcome {
        name: "build-ladder".into(),
        passed: Some(scale.certificate().is_ladder()),
        details: format!(
            "model {}, {} levels, certificate {}",
            scale.model(),
            scale.horizon(),
            certificate_name(scale.certificate()),
        ),
    });

    let law = config.law.build()?;
    let mut failed = false;

    if config.checks.ladder {
        let outcome = stage_ladder(config, &scale, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }
    if config.checks.forest {
        let outcome = stage_forest(config, &scale, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }
    if config.checks.markov_oracle {
        let outcome = stage_markov(config, &scale, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }
    if config.checks.records {
        let outcome = stage_records(config, &law, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }
    if config.checks.walk {
        let outcome = stage_walk(config, &scale, &law, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }
    if config.checks.stabilizer {
        let outcome = stage_stabilizer(config, &scale, &law, &out_dir)?;
        failed |= outcome.passed == Some(false);
        stages.push(outcome);
    }

    let summary = json!({
        "config": serde_json::to_value(config).expect("config serializes"),
        "stages": stages,
    });
    write_json(&out_dir.join("summary.json"), &summary)?;

    let status = if failed {
        RunStatus::InvariantFailure
    } else {
        RunStatus::Ok
    };
    Ok((status, RunArtifacts { out_dir, stages }))
}

fn certificate_name(cert: &LadderCertificate) -> &'static str {
    match cert {
        LadderCertificate::Unverified => "unverified",
        LadderCertificate::SwitchingChecked => "switching-checked",
        LadderCertificate::CertifiedFamily { .. } => "certified-family",
    }
}

fn stage_ladder(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let report = check_ladder(
        scale,
        config.params.ladder_ball_radius,
        config.params.ball_budget,
    )?;
    let switching: Vec<String> = report
        .switching_per_level
        .iter()
        .map(|o| match o {
            SwitchingLevelOutcome::Holds { z_size } => format!("holds(z={z_size})"),
            SwitchingLevelOutcome::Violated(v) => format!("violated({} {})", v.sigma, v.z),
            SwitchingLevelOutcome::Infeasible { budget } => format!("infeasible({budget})"),
        })
        .collect();
    let passed = report.direct_axioms_hold()
        && (report.sufficient_condition_holds() != Some(false))
        && report.escape_holds_everywhere();
    write_json(
        &out_dir.join("ladder_report.json"),
        &json!({
            "ball_radius": report.ball_radius,
            "ball_size": report.ball_size,
            "ambiguous": report.ambiguous.len(),
            "height_drop_violations": report.height_drop_violations.len(),
            "escape_per_level": report.escape_per_level,
            "switching_per_level": switching,
            "generators_covered": report.generators_covered,
            "elapsed_ms": report.elapsed.as_millis() as u64,
            "passed": passed,
        }),
    )?;
    Ok(StageOutcome {
        name: "check-ladder".into(),
        passed: Some(passed),
        details: format!(
            "{} ball elements, {} ambiguous, {} height violations",
            report.ball_size,
            report.ambiguous.len(),
            report.height_drop_violations.len()
        ),
    })
}

fn stage_forest(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let forest = build_forest(
        scale.clone(),
        config.params.forest_ball_radius,
        config.params.ball_budget,
    )?;
    let stats = forest.stats();
    write_json(&out_dir.join("forest.json"), &forest_to_json(&forest))?;
    write_text(&out_dir.join("forest.dot"), &export_dot(&forest, None))?;
    let passed = stats.acyclic && stats.root_violations == 0;
    Ok(StageOutcome {
        name: "build-forest".into(),
        passed: Some(passed),
        details: format!(
            "{} vertices, {} edges, {} roots, {} truncated, acyclic {}",
            stats.vertices, stats.edges, stats.roots, stats.truncated, stats.acyclic
        ),
    })
}

fn stage_markov(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let depth = config.params.ray_depth;
    let rays = generate_rays(scale, depth, config.params.ball_budget)?;
    let forest = build_forest(
        scale.clone(),
        config.params.forest_ball_radius,
        config.params.ball_budget,
    )?;
    let mut from_forest = forest_ray_prefixes(&forest, depth);
    let mut dropped_roots = 0usize;
    from_forest.retain(|path| {
        let keep = path.len() > 1 || root_is_extendable(scale, &path[0]).unwrap_or(false);
        if !keep {
            dropped_roots += 1;
        }
        keep
    });
    let from_rules: std::collections::BTreeSet<Vec<crate::group::GroupElement>> = rays
        .iter()
        .filter(|r| r.vertices.iter().all(|v| forest.contains(v)))
        .map(|r| r.vertices.clone())
        .collect();
    let only_forest = from_forest.difference(&from_rules).count();
    let only_rules = from_rules.difference(&from_forest).count();
    let passed = only_forest == 0 && only_rules == 0;
    write_json(
        &out_dir.join("markov_report.json"),
        &json!({
            "depth": depth,
            "rays_generated": rays.len(),
            "rays_in_ball": from_rules.len(),
            "forest_prefixes": from_forest.len(),
            "isolated_roots_outside_rules": dropped_roots,
            "symmetric_difference": only_forest + only_rules,
            "passed": passed,
        }),
    )?;
    Ok(StageOutcome {
        name: "markov-oracle".into(),
        passed: Some(passed),
        details: format!(
            "{} rule rays vs {} forest prefixes, symmetric difference {}",
            from_rules.len(),
            from_forest.len(),
            only_forest + only_rules
        ),
    })
}

fn stage_records(
    config: &ExperimentConfig,
    law: &StepLaw,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let simplicity = law.simplicity_criterion();
    let occupation = occupation_law_check(
        law,
        config.params.records_runs,
        10_000_000,
        config.params.records_j_max,
        config.seed ^ SEED_RECORDS_OCCUPATION,
    )?;
    let vervaat = vervaat_chain_check(
        law,
        config.params.records_transitions,
        5_000,
        500,
        config.seed ^ SEED_RECORDS_VERVAAT,
    )?;

    // CSV: j, rho, rho^2, empirical, stderr
    let mut csv = String::from("j,rho,rho_sq,empirical,stderr\n");
    for row in &occupation.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.j, row.rho, row.rho_sq, row.empirical, row.stderr
        ));
    }
    write_text(&out_dir.join("records_occupation.csv"), &csv)?;

    let row_sums_ok = vervaat_row_sums_ok(law);
    let passed =
        occupation.all_within_3se() && vervaat.all_within_3se && row_sums_ok;
    write_json(
        &out_dir.join("records_report.json"),
        &json!({
            "simplicity": {
                "verdict": format!("{:?}", simplicity.verdict),
                "rho_square_partial_sum": simplicity.rho_square_partial_sum,
                "reason": simplicity.reason,
            },
            "occupation_all_within_3se": occupation.all_within_3se(),
            "occupation_excluded": occupation.excluded,
            "vervaat_cells": vervaat.cells.len(),
            "vervaat_all_within_3se": vervaat.all_within_3se,
            "vervaat_transitions": vervaat.transitions,
            "row_sums_within_1e12": row_sums_ok,
            "passed": passed,
        }),
    )?;
    Ok(StageOutcome {
        name: "records".into(),
        passed: Some(passed),
        details: format!(
            "simplicity {:?}, occupation 3SE {}, vervaat 3SE {} over {} cells",
            simplicity.verdict,
            occupation.all_within_3se(),
            vervaat.all_within_3se,
            vervaat.cells.len()
        ),
    })
}

pub(crate) fn vervaat_row_sums_ok(law: &StepLaw) -> bool {
    if !law.has_analytic_tail() {
        return true;
    }
    let big_j = 400u64;
    for i in 0..40u64 {
        let mut sum = 0.0;
        for j in i..=big_j {
            match law.vervaat_transition(i, j) {
                Ok(p) => sum += p,
                Err(_) => return false,
            }
        }
        sum += law.tail_mass(big_j + 1) / law.tail_mass(i);
        if (sum - 1.0).abs() > 1e-12 {
            return false;
        }
    }
    true
}

#[derive(Debug, Default, Serialize, Clone)]
struct WalkAggregate {
    paths: u64,
    exceptions: usize,
    verified_epochs: usize,
    product_checked_epochs: usize,
    valid_k0: u64,
    inconclusive: u64,
    chain_pairs: usize,
    chain_exceptions: usize,
    constrained_pairs: usize,
    constrained_violations: usize,
    phi_violations: usize,
    survival_consistent: bool,
    flagged_fraction_sum: f64,
}

fn stage_walk(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
    law: &StepLaw,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let alpha = config.alpha.clone();
    let dist = StepDistribution::build(scale.clone(), law.clone(), &|i| alpha.value(i))?;
    let envelopes = build_envelopes(law, scale.horizon() as u64)?;
    let start = parse_start(config, scale)?;

    let per_path: Vec<Result<(WalkAggregate, Option<String>), ExperimentError>> = (0..config
        .walk
        .paths)
        .into_par_iter()
        .map(|stream| {
            let trace = sample_path(
                &dist,
                config.walk.length,
                start.clone(),
                config.seed,
                STREAM_WALK + stream,
            )?;
            let report = verify_spike_structure(&dist, &trace, &SpikeOptions::default())?;
            let trunk = verify_trunk(&report);
            let constrained = verify_constrained(
                &trace,
                &envelopes,
                &report,
                config.params.constrained_from_epoch,
            )?;
            let mut agg = WalkAggregate {
                paths: 1,
                exceptions: report.exceptions,
                verified_epochs: report.verified_epochs,
                product_checked_epochs: report.product_checked_epochs,
                valid_k0: trunk.k0.is_some() as u64,
                inconclusive: trunk.inconclusive as u64,
                chain_pairs: trunk.chain_pairs,
                chain_exceptions: trunk.chain_exceptions,
                constrained_pairs: constrained.pairs,
                constrained_violations: constrained.violations,
                phi_violations: constrained.phi_violations,
                survival_consistent: constrained.survival_consistent,
                flagged_fraction_sum: report.flagged_fraction_10_30,
            };
            agg.paths = 1;
            let csv = (stream < config.walk.epoch_csv_paths).then(|| {
                let mut text = String::from(
                    "path,k,time,value,simple,sigma,prefix_count,block_count,premises,conclusion\n",
                );
                for e in &report.epochs {
                    text.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        stream,
                        e.k,
                        e.time,
                        e.value,
                        e.simple,
                        e.sigma_increment,
                        e.prefix_count,
                        e.block_count,
                        e.premises_hold,
                        e.conclusion_verified
                    ));
                }
                text
            });
            Ok((agg, csv))
        })
        .collect();

    let mut total = WalkAggregate {
        survival_consistent: true,
        ..WalkAggregate::default()
    };
    let mut epoch_csv = String::new();
    for item in per_path {
        let (agg, csv) = item?;
        total.paths += agg.paths;
        total.exceptions += agg.exceptions;
        total.verified_epochs += agg.verified_epochs;
        total.product_checked_epochs += agg.product_checked_epochs;
        total.valid_k0 += agg.valid_k0;
        total.inconclusive += agg.inconclusive;
        total.chain_pairs += agg.chain_pairs;
        total.chain_exceptions += agg.chain_exceptions;
        total.constrained_pairs += agg.constrained_pairs;
        total.constrained_violations += agg.constrained_violations;
        total.phi_violations += agg.phi_violations;
        total.survival_consistent &= agg.survival_consistent;
        total.flagged_fraction_sum += agg.flagged_fraction_sum;
        if let Some(csv) = csv {
            epoch_csv.push_str(&csv);
        }
    }
    if !epoch_csv.is_empty() {
        let mut file = String::from(
            "path,k,time,value,simple,sigma,prefix_count,block_count,premises,conclusion\n",
        );
        // the per-path chunks already carry the header; strip duplicates
        for line in epoch_csv.lines() {
            if !line.starts_with("path,") {
                file.push_str(line);
                file.push('\n');
            }
        }
        write_text(&out_dir.join("walk_epochs.csv"), &file)?;
    }

    let zero_exceptions = total.exceptions == 0 && total.chain_exceptions == 0;
    let passed = zero_exceptions && total.survival_consistent;
    write_json(
        &out_dir.join("walk_report.json"),
        &json!({
            "paths": total.paths,
            "length": config.walk.length,
            "allocation_defect": dist.allocation_defect(),
            "symmetric": dist.symmetric,
            "entropy": dist.entropy,
            "reallocated_levels": dist.reallocated_levels,
            "exceptions": total.exceptions,
            "verified_epochs": total.verified_epochs,
            "product_checked_epochs": total.product_checked_epochs,
            "valid_k0": total.valid_k0,
            "valid_k0_fraction": total.valid_k0 as f64 / total.paths.max(1) as f64,
            "inconclusive": total.inconclusive,
            "chain_pairs": total.chain_pairs,
            "chain_exceptions": total.chain_exceptions,
            "constrained_pairs": total.constrained_pairs,
            "constrained_violations": total.constrained_violations,
            "constrained_mean_violations":
                total.constrained_violations as f64 / total.paths.max(1) as f64,
            "phi_violations": total.phi_violations,
            "survival_consistent": total.survival_consistent,
            "flagged_fraction_mean": total.flagged_fraction_sum / total.paths.max(1) as f64,
            "passed": passed,
        }),
    )?;
    Ok(StageOutcome {
        name: "walk".into(),
        passed: Some(passed),
        details: format!(
            "{} paths, {} verified epochs, {} exceptions, k0 fraction {:.3}",
            total.paths,
            total.verified_epochs,
            total.exceptions,
            total.valid_k0 as f64 / total.paths.max(1) as f64
        ),
    })
}

fn parse_start(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
) -> Result<StartPoint, ExperimentError> {
    if config.walk.start == "e" {
        return Ok(StartPoint::identity(scale));
    }
    // Non-identity starts declare their length profile by membership in a
    // small top-level ball.
    let element = scale.model().parse(&config.walk.start)?;
    let n = scale.horizon() as u32 + 1;
    for radius in 1..=4u64 {
        let b = scale.delta_ball(n, radius, config.params.ball_budget)?;
        if b.contains(&element) {
            return Ok(StartPoint {
                element,
                from_level: n,
                bound: radius,
            });
        }
    }
    Err(ExperimentError::Config(format!(
        "start `{}` is not within radius 4 of the scale's sets; declare a closer start",
        config.walk.start
    )))
}

fn stage_stabilizer(
    config: &ExperimentConfig,
    scale: &Arc<Scale>,
    law: &StepLaw,
    out_dir: &Path,
) -> Result<StageOutcome, ExperimentError> {
    let alpha = config.alpha.clone();
    let dist = StepDistribution::build(scale.clone(), law.clone(), &|i| alpha.value(i))?;
    let start = StartPoint::identity(scale);
    let options = SpikeOptions {
        collect_ray: true,
        ..SpikeOptions::default()
    };

    // Collect rays of the required depth, deterministically by stream order.
    let min_vertices = config.params.stabilizer_ray_depth + 1;
    let mut rays: Vec<WalkRay> = Vec::new();
    let mut paths_used = 0u64;
    for stream in 0..config.params.stabilizer_path_budget {
        if rays.len() >= config.params.stabilizer_rays {
            break;
        }
        paths_used += 1;
        let trace = sample_path(
            &dist,
            config.walk.length,
            start.clone(),
            config.seed,
            STREAM_STABILIZER + stream,
        )?;
        let report = verify_spike_structure(&dist, &trace, &options)?;
        let trunk = verify_trunk(&report);
        if let Some(ray) = extract_ray(&report, &trunk) {
            if ray.vertices.len() >= min_vertices {
                rays.push(ray);
            }
        }
    }
    if rays.len() < config.params.stabilizer_rays {
        write_json(
            &out_dir.join("stabilizer_report.json"),
            &json!({
                "error": "not enough deep rays within the path budget",
                "collected": rays.len(),
                "paths_used": paths_used,
                "passed": false,
            }),
        )?;
        return Ok(StageOutcome {
            name: "stabilizer".into(),
            passed: Some(false),
            details: format!(
                "only {} rays of depth ≥ {} in {} paths",
                rays.len(),
                config.params.stabilizer_ray_depth,
                paths_used
            ),
        });
    }

    // probes: the punctured ball of the first four levels
    let probe_level = (scale.horizon() as u32 + 1).min(4);
    let probe_ball = ball(
        scale.model(),
        &scale.delta_gens(probe_level),
        config.params.stabilizer_probe_radius,
        config.params.ball_budget,
    )?;
    let identity = scale.model().identity();
    let mut probes: Vec<_> = probe_ball.elements().to_vec();
    probes.retain(|g| *g != identity);
    let mut all_probes = vec![identity.clone()];
    all_probes.extend(probes);

    let report = stabilizer_probe(
        scale.model(),
        &rays,
        &all_probes,
        config.params.stabilizer_window,
    )?;
    let passed = report.hits.is_empty() && report.identity_control_passed;
    write_json(
        &out_dir.join("stabilizer_report.json"),
        &json!({
            "rays": report.rays,
            "probes": report.probes,
            "window": report.window,
            "hits": report.hits,
            "identity_control_passed": report.identity_control_passed,
            "paths_used": paths_used,
            "passed": passed,
        }),
    )?;
    Ok(StageOutcome {
        name: "stabilizer".into(),
        passed: Some(passed),
        details: format!(
            "{} rays x {} probes, {} hits, identity control {}",
            report.rays,
            report.probes,
            report.hits.len(),
            report.identity_control_passed
        ),
    })
}

/// Writes a superswitcher search result and its scan certificate; the CLI
/// `find-switcher` entry point.
pub fn find_switcher_artifacts(
    model: &crate::group::GroupModel,
    z_radius: u64,
    budget: usize,
    out_dir: &Path,
) -> Result<(crate::group::GroupElement, PathBuf), ExperimentError> {
    let gens = crate::group::GeneratingSet::standard(model);
    let z = ball(model, &gens, z_radius, crate::group::DEFAULT_BALL_BUDGET)?;
    let found = crate::switch::find_superswitcher(
        model,
        z.elements(),
        gens.elements.clone(),
        &Default::default(),
        budget,
    )?;
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let cert_path = out_dir.join("switcher_certificate.txt");
    let mut file = fs::File::create(&cert_path).map_err(|e| io_err(&cert_path, e))?;
    crate::switch::write_scan_certificate(model, &found.element, z.elements(), &mut file)
        .map_err(|e| io_err(&cert_path, e))?;
    writeln!(
        file,
        "# candidates examined: {}",
        found.candidates_examined
    )
    .map_err(|e| io_err(&cert_path, e))?;
    Ok((found.element, cert_path))
}
