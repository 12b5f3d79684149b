//! Stabilizer probes on walk-generated rays, and empirical hitting
//! statistics over boundary cylinders.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::group::{GroupElement, GroupModel};
use crate::ladder::{Classification, Classifier, Scale};

use super::{verify_trunk, SpikeReport, StepDistribution, WalkError, WalkTrace};

/// The verified tail ray of one path: vertices `y_{T_k−1}` from the burn-in
/// epoch on, with their heights and record times.
#[derive(Debug, Clone)]
pub struct WalkRay {
    pub vertices: Vec<GroupElement>,
    pub heights: Vec<u64>,
    pub times: Vec<usize>,
}

impl WalkRay {
    pub fn depth(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeHit {
    pub ray: usize,
    pub probe: String,
    pub shift: i64,
}

#[derive(Debug, Serialize)]
pub struct ProbeReport {
    pub rays: usize,
    pub probes: usize,
    pub window: usize,
    /// Hits by non-identity probes; freeness predicts none.
    pub hits: Vec<ProbeHit>,
    /// The identity probe at shift 0 must hit on every ray.
    pub identity_control_passed: bool,
}

/// Tests `g · γ_n = γ_{n+t}` throughout the tail window of each ray, for
/// every probe `g` and every shift `|t| ≤ window/2`. Heights strictly
/// increase along rays, so a translate matching a shifted tail would have to
/// reproduce the height profile; cheap standard-length bounds prune the
/// impossible comparisons before any product is formed.
pub fn stabilizer_probe(
    model: &GroupModel,
    rays: &[WalkRay],
    probes: &[GroupElement],
    window: usize,
) -> Result<ProbeReport, WalkError> {
    let identity = model.identity();
    let max_shift = (window / 2) as i64;
    let mut hits = Vec::new();
    let mut identity_control_passed = true;

    for (ray_idx, ray) in rays.iter().enumerate() {
        let len = ray.vertices.len();
        if len < window + max_shift as usize {
            return Err(WalkError::InvalidDistribution(format!(
                "ray {ray_idx} has {len} vertices; window {window} with shifts up to \
                 {max_shift} needs at least {}",
                window + max_shift as usize
            )));
        }
        let lengths: Vec<BigUint> = ray
            .vertices
            .iter()
            .map(|v| model.standard_length(v))
            .collect::<Result<_, _>>()?;
        let window_start = len - window;

        for probe in probes {
            let probe_len = model.standard_length(probe)?;
            for shift in -max_shift..=max_shift {
                let mut all_match = true;
                for n in window_start..len {
                    let target = n as i64 + shift;
                    if target < 0 || target >= len as i64 {
                        all_match = false;
                        break;
                    }
                    let target = target as usize;
                    if shift == 0 {
                        // g·γ_n = γ_n cancels to g = e; no product needed
                        if *probe != identity {
                            all_match = false;
                            break;
                        }
                        continue;
                    }
                    // |g·γ_n| differs from |γ_n| by at most |g|
                    let lo = &lengths[n] - (&probe_len).min(&lengths[n]);
                    let hi = &lengths[n] + &probe_len;
                    if lengths[target] < lo || lengths[target] > hi {
                        all_match = false;
                        break;
                    }
                    let translated = model.multiply(probe, &ray.vertices[n])?;
                    if translated != ray.vertices[target] {
                        all_match = false;
                        break;
                    }
                }
                if all_match {
                    if *probe == identity && shift == 0 {
                        // expected: the positive control
                    } else {
                        hits.push(ProbeHit {
                            ray: ray_idx,
                            probe: probe.to_string(),
                            shift,
                        });
                    }
                }
            }
        }

        // positive control: e with t = 0 matches trivially; verify anyway
        let mut control = true;
        for n in window_start..len {
            let translated = model.multiply(&identity, &ray.vertices[n])?;
            if translated != ray.vertices[n] {
                control = false;
            }
        }
        identity_control_passed &= control;
    }

    Ok(ProbeReport {
        rays: rays.len(),
        probes: probes.len(),
        window,
        hits,
        identity_control_passed,
    })
}

/// Frequency table over boundary cylinders `(root, first d ray vertices)`.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderTable {
    pub depth: usize,
    pub conclusive_paths: usize,
    pub total_paths: usize,
    /// cylinder key (display strings, root first) → count
    pub counts: BTreeMap<String, u64>,
}

impl CylinderTable {
    /// Total-variation distance between two tables' empirical distributions.
    pub fn tv_distance(&self, other: &CylinderTable) -> f64 {
        let na = self.conclusive_paths.max(1) as f64;
        let nb = other.conclusive_paths.max(1) as f64;
        let keys: std::collections::BTreeSet<&String> =
            self.counts.keys().chain(other.counts.keys()).collect();
        let mut tv = 0.0;
        for key in keys {
            let pa = *self.counts.get(key).unwrap_or(&0) as f64 / na;
            let pb = *other.counts.get(key).unwrap_or(&0) as f64 / nb;
            tv += (pa - pb).abs();
        }
        tv / 2.0
    }
}

fn cylinder_key(vertices: &[GroupElement]) -> String {
    let parts: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
    parts.join(" | ")
}

/// Descends the prefix map from the first verified trunk vertex to the root
/// (exhaustive classification, so small scales only), then records the
/// cylinder `root, γ_1, …, γ_d` of the full ray through that vertex.
pub fn hitting_statistics(
    dist: &StepDistribution,
    traces_and_reports: &[(WalkTrace, SpikeReport)],
    depth: usize,
    budget: usize,
) -> Result<CylinderTable, WalkError> {
    let scale: &Scale = dist.scale();
    let mut classifier = Classifier::new(scale, budget);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut conclusive = 0usize;

    for (_trace, report) in traces_and_reports {
        let trunk = verify_trunk(report);
        let (Some(_k0), Some(ray_vertices)) = (trunk.k0, report.ray_vertices.as_ref()) else {
            continue;
        };
        if ray_vertices.is_empty() {
            continue;
        }
        // ray_vertices[0] is y_{T_{k0}−1}; descend from it to the root
        let mut down = vec![ray_vertices[0].clone()];
        loop {
            let current = down.last().expect("non-empty");
            match classifier.classify(current)? {
                Classification::Unspiked => break,
                Classification::Spiked(d) => down.push(d.prefix),
                Classification::Ambiguous(_) => {
                    return Err(WalkError::InvalidDistribution(
                        "scale is not a ladder: ambiguous element on descent".into(),
                    ))
                }
            }
        }
        down.reverse(); // root … y_{T_{k0}−1}
        let mut full: Vec<GroupElement> = down;
        full.extend(ray_vertices[1..].iter().cloned());
        if full.len() <= depth {
            continue; // ray too shallow for the requested cylinder
        }
        conclusive += 1;
        *counts.entry(cylinder_key(&full[..=depth])).or_insert(0) += 1;
    }

    Ok(CylinderTable {
        depth,
        conclusive_paths: conclusive,
        total_paths: traces_and_reports.len(),
        counts,
    })
}

#[derive(Debug, Serialize)]
pub struct PairedTranslation {
    pub pairs_compared: usize,
    pub vertex_comparisons: usize,
    /// Trunk vertices of the translated walk that fail to equal the
    /// g-translate of the base walk's trunk vertex. Zero expected: paired
    /// paths share increments, so positions translate exactly.
    pub mismatches: usize,
}

/// Paired-simulation translation check: `base` and `translated` hold traces
/// with identical increment streams, started at `e` and at `g`. Positions
/// satisfy `y'_n = g·y_n` identically, so wherever both paths have verified
/// trunks, the later burn-in onward the ray vertices must be exact
/// g-translates. Root-anchored cylinders need not correspond — the forest is
/// not left-invariant — which is why the consistency of the hitting family
/// is tested at the trunk level.
pub fn paired_translation_check(
    model: &GroupModel,
    g: &GroupElement,
    base: &[(WalkTrace, SpikeReport)],
    translated: &[(WalkTrace, SpikeReport)],
) -> Result<PairedTranslation, WalkError> {
    let mut pairs_compared = 0;
    let mut vertex_comparisons = 0;
    let mut mismatches = 0;
    for ((trace_a, report_a), (trace_b, report_b)) in base.iter().zip(translated) {
        debug_assert_eq!(trace_a.increments.len(), trace_b.increments.len());
        let (Some(k0_a), Some(k0_b)) = (report_a.k0, report_b.k0) else {
            continue;
        };
        let (Some(va), Some(vb)) = (
            report_a.ray_vertices.as_ref(),
            report_b.ray_vertices.as_ref(),
        ) else {
            continue;
        };
        let from = k0_a.max(k0_b);
        let n_epochs = report_a.epochs.len();
        if report_b.epochs.len() != n_epochs || from >= n_epochs {
            continue;
        }
        pairs_compared += 1;
        for k in from..n_epochs {
            let a = &va[k - k0_a];
            let b = &vb[k - k0_b];
            vertex_comparisons += 1;
            if model.multiply(g, a)? != *b {
                mismatches += 1;
            }
        }
    }
    Ok(PairedTranslation {
        pairs_compared,
        vertex_comparisons,
        mismatches,
    })
}

/// Translates every cylinder of a table by `g` on the left; used to compare
/// hitting statistics started at `g` with translated statistics started at
/// the identity.
pub fn translate_cylinder_table(
    model: &GroupModel,
    g: &GroupElement,
    table: &CylinderTable,
) -> Result<CylinderTable, WalkError> {
    let mut counts = BTreeMap::new();
    for (key, &count) in &table.counts {
        let translated: Vec<String> = key
            .split(" | ")
            .map(|part| {
                let elem = model.parse(part)?;
                Ok::<String, WalkError>(model.multiply(g, &elem)?.to_string())
            })
            .collect::<Result<_, _>>()?;
        counts.insert(translated.join(" | "), count);
    }
    Ok(CylinderTable {
        depth: table.depth,
        conclusive_paths: table.conclusive_paths,
        total_paths: table.total_paths,
        counts,
    })
}
