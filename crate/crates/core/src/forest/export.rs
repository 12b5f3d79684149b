//! Deterministic DOT and JSON renderings of a forest.

use serde_json::json;

use crate::group::GroupElement;

use super::{Forest, ParentLink};

/// Walk markers for diagram overlays: positions just before each record
/// epoch are circled, the record positions themselves are greyed.
#[derive(Debug, Clone, Default)]
pub struct WalkOverlay {
    pub circled: Vec<GroupElement>,
    pub greyed: Vec<GroupElement>,
}

/// Renders the forest as DOT text. Output is byte-deterministic: vertices
/// are emitted in (height, label) order and edges follow vertex order.
pub fn export_dot(forest: &Forest, overlay: Option<&WalkOverlay>) -> String {
    let mut order: Vec<usize> = (0..forest.vertices().len()).collect();
    order.sort_by_key(|&i| (forest.height_of(i), forest.vertices()[i].to_string()));

    let mut out = String::from("digraph despiking_forest {\n");
    out.push_str("  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");

    for &i in &order {
        let g = &forest.vertices()[i];
        let label = format!("{g}\\nh={}", forest.height_of(i));
        let mut attrs = vec![format!("label=\"{label}\"")];
        if matches!(forest.parent_link(i), ParentLink::Root) {
            attrs.push("shape=square".to_string());
        }
        if let Some(overlay) = overlay {
            if overlay.circled.contains(g) {
                attrs.push("shape=doublecircle".to_string());
            }
            if overlay.greyed.contains(g) {
                attrs.push("style=filled".to_string());
                attrs.push("fillcolor=gray80".to_string());
            }
        }
        out.push_str(&format!("  v{i} [{}];\n", attrs.join(", ")));
    }
    for &i in &order {
        match forest.parent_link(i) {
            ParentLink::Edge(p) => out.push_str(&format!("  v{i} -> v{p};\n")),
            ParentLink::Truncated(prefix) => out.push_str(&format!(
                "  v{i} -> outside_{i} [style=dashed]; outside_{i} [label=\"{prefix}\", style=dotted];\n"
            )),
            ParentLink::Root => {}
        }
    }
    out.push_str("}\n");
    out
}

/// Adjacency dump: vertex string → parent string (or null) and height.
pub fn forest_to_json(forest: &Forest) -> serde_json::Value {
    let mut rows = Vec::new();
    let mut order: Vec<usize> = (0..forest.vertices().len()).collect();
    order.sort_by_key(|&i| (forest.height_of(i), forest.vertices()[i].to_string()));
    for &i in &order {
        let g = &forest.vertices()[i];
        let (parent, truncated) = match forest.parent_link(i) {
            ParentLink::Root => (serde_json::Value::Null, false),
            ParentLink::Edge(p) => (json!(forest.vertices()[*p].to_string()), false),
            ParentLink::Truncated(prefix) => (json!(prefix.to_string()), true),
        };
        rows.push(json!({
            "element": g.to_string(),
            "height": forest.height_of(i),
            "parent": parent,
            "truncated": truncated,
        }));
    }
    json!({
        "vertices": rows,
        "stats": forest.stats(),
    })
}
