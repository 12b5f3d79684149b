//! Structured text serialization of scales; round-trips bit-exactly.

use num_bigint::BigUint;

use crate::group::GroupModel;

use super::{LadderCertificate, LadderError, Scale};

const HEADER: &str = "forestwalk-scale v1";

pub fn scale_to_text(scale: &Scale) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    match scale.model() {
        GroupModel::Free { rank } => out.push_str(&format!("model: free {rank}\n")),
        GroupModel::Lamplighter { modulus } => {
            out.push_str(&format!("model: lamplighter {modulus}\n"))
        }
        GroupModel::FreeProduct { orders } => {
            let parts: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
            out.push_str(&format!("model: free-product {}\n", parts.join(" ")));
        }
    }
    let gauge: Vec<String> = scale.gauge().iter().map(|g| g.to_string()).collect();
    out.push_str(&format!("gauge: {}\n", gauge.join(" ")));
    match scale.certificate() {
        LadderCertificate::Unverified => out.push_str("certificate: unverified\n"),
        LadderCertificate::SwitchingChecked => out.push_str("certificate: switching-checked\n"),
        LadderCertificate::CertifiedFamily { radii } => {
            let parts: Vec<String> = radii.iter().map(|r| r.to_string()).collect();
            out.push_str(&format!("certificate: family {}\n", parts.join(" ")));
        }
    }
    let set_line = |label: String, set: &[crate::group::GroupElement]| {
        let parts: Vec<String> = set.iter().map(|g| g.to_string()).collect();
        format!("{label}: {}\n", parts.join(", "))
    };
    out.push_str(&set_line("A0".into(), scale.filling_set(0)));
    for n in 1..=scale.horizon() as u32 {
        out.push_str(&set_line(format!("Sigma{n}"), scale.spiking_set(n)));
        out.push_str(&set_line(format!("A{n}"), scale.filling_set(n)));
    }
    out
}

pub fn scale_from_text(text: &str) -> Result<Scale, LadderError> {
    let mut lines = text.lines();
    let fail = |msg: &str| LadderError::Validation(format!("scale file: {msg}"));

    if lines.next().map(str::trim) != Some(HEADER) {
        return Err(fail("missing or wrong header"));
    }

    let mut model: Option<GroupModel> = None;
    let mut gauge: Option<Vec<u64>> = None;
    let mut certificate = LadderCertificate::Unverified;
    let mut sets: Vec<(String, String)> = Vec::new();

    for line in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| fail(&format!("malformed line `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "model" => {
                let mut words = value.split_whitespace();
                let kind = words.next().ok_or_else(|| fail("empty model"))?;
                let nums: Vec<u32> = words
                    .map(|w| w.parse().map_err(|_| fail("bad model parameter")))
                    .collect::<Result<_, _>>()?;
                model = Some(match kind {
                    "free" => GroupModel::free(nums[0] as usize)
                        .map_err(LadderError::Group)?,
                    "lamplighter" => {
                        GroupModel::lamplighter(nums[0]).map_err(LadderError::Group)?
                    }
                    "free-product" => {
                        GroupModel::free_product(nums).map_err(LadderError::Group)?
                    }
                    other => return Err(fail(&format!("unknown model kind `{other}`"))),
                });
            }
            "gauge" => {
                gauge = Some(
                    value
                        .split_whitespace()
                        .map(|w| w.parse().map_err(|_| fail("bad gauge entry")))
                        .collect::<Result<_, _>>()?,
                );
            }
            "certificate" => {
                let mut words = value.split_whitespace();
                certificate = match words.next() {
                    Some("unverified") | None => LadderCertificate::Unverified,
                    Some("switching-checked") => LadderCertificate::SwitchingChecked,
                    Some("family") => {
                        let radii: Vec<BigUint> = words
                            .map(|w| w.parse().map_err(|_| fail("bad certificate radius")))
                            .collect::<Result<_, _>>()?;
                        LadderCertificate::CertifiedFamily { radii }
                    }
                    Some(other) => {
                        return Err(fail(&format!("unknown certificate kind `{other}`")))
                    }
                };
            }
            label => sets.push((label.to_string(), value.to_string())),
        }
    }

    let model = model.ok_or_else(|| fail("missing model line"))?;
    let gauge = gauge.ok_or_else(|| fail("missing gauge line"))?;
    let n_levels = gauge.len();

    let parse_set = |label: &str, text: &str| -> Result<Vec<crate::group::GroupElement>, LadderError> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        text.split(',')
            .map(|w| {
                model
                    .parse(w.trim())
                    .map_err(|e| fail(&format!("in set {label}: {e}")))
            })
            .collect()
    };

    let mut filling = vec![Vec::new(); n_levels + 1];
    let mut spiking = vec![Vec::new(); n_levels];
    for (label, body) in &sets {
        if let Some(idx) = label.strip_prefix("Sigma") {
            let n: usize = idx.parse().map_err(|_| fail("bad Sigma index"))?;
            if n == 0 || n > n_levels {
                return Err(fail(&format!("Sigma index {n} outside 1..={n_levels}")));
            }
            spiking[n - 1] = parse_set(label, body)?;
        } else if let Some(idx) = label.strip_prefix('A') {
            let i: usize = idx.parse().map_err(|_| fail("bad A index"))?;
            if i > n_levels {
                return Err(fail(&format!("A index {i} outside 0..={n_levels}")));
            }
            filling[i] = parse_set(label, body)?;
        } else {
            return Err(fail(&format!("unknown set label `{label}`")));
        }
    }

    let mut scale = Scale::new(model, gauge, spiking, filling)?;
    // Family certificates are re-derived, never trusted from the file.
    match certificate {
        LadderCertificate::CertifiedFamily { radii } => {
            scale.set_certificate(LadderCertificate::CertifiedFamily { radii });
            super::tower::verify_family_certificate(&scale)?;
        }
        other => scale.set_certificate(other),
    }
    Ok(scale)
}
