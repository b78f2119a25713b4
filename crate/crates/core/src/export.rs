//! Deterministic renderers (DOT and JSON) for strips, quotient views and
//! tubes, plus the constructive module-spec format used by slice and tube
//! input files.

use crate::algebra::Algebra;
use crate::rep::{self, Representation};
use crate::strip::{QuotientView, Strip};
use crate::translate::{tau, tau_inverse, Translated};
use crate::tube::TubeFragment;
use std::fmt::Write as _;
use std::sync::Arc;

/// Build a module over an algebra from a small constructive JSON spec:
/// {"proj": v} | {"inj": v} | {"simple": v} | {"rad": spec} |
/// {"socle_quot": spec} | {"tau": spec} | {"tau_inv": spec} |
/// {"dims": .., "matrices": ..}.
pub fn module_from_spec(
    algebra: &Arc<Algebra>,
    spec: &serde_json::Value,
) -> Result<Representation, String> {
    let vertex = |v: &serde_json::Value| -> Result<usize, String> {
        let label = match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        algebra
            .quiver
            .vertex_index(&label)
            .ok_or_else(|| format!("unknown vertex `{}`", label))
    };
    if let Some(v) = spec.get("proj") {
        return Ok(rep::projective(algebra, vertex(v)?));
    }
    if let Some(v) = spec.get("inj") {
        return Ok(rep::injective(algebra, vertex(v)?));
    }
    if let Some(v) = spec.get("simple") {
        return Ok(rep::simple(algebra, vertex(v)?));
    }
    if let Some(inner) = spec.get("rad") {
        return Ok(rep::radical(&module_from_spec(algebra, inner)?));
    }
    if let Some(inner) = spec.get("socle_quot") {
        return Ok(rep::socle_quotient(&module_from_spec(algebra, inner)?));
    }
    if let Some(inner) = spec.get("tau") {
        let m = module_from_spec(algebra, inner)?;
        return match tau(&m).map_err(|e| e.to_string())? {
            Translated::Module(t) => Ok(t),
            Translated::Boundary => Err("tau of a projective module".into()),
        };
    }
    if let Some(inner) = spec.get("tau_inv") {
        let m = module_from_spec(algebra, inner)?;
        return match tau_inverse(&m).map_err(|e| e.to_string())? {
            Translated::Module(t) => Ok(t),
            Translated::Boundary => Err("tau^{-1} of an injective module".into()),
        };
    }
    if spec.get("dims").is_some() {
        return rep::from_json(algebra, spec).map_err(|e| e.to_string());
    }
    Err(format!("unrecognized module spec: {}", spec))
}

pub fn strip_to_json(strip: &Strip) -> serde_json::Value {
    let view = strip.quotient_view();
    let nodes: Vec<serde_json::Value> = strip
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            serde_json::json!({
                "id": i,
                "label": n.label,
                "dim_vector": n.dimvec,
                "projective": n.projective,
                "injective": n.injective,
                "orbit": view.class_of[i],
            })
        })
        .collect();
    let mut arrows: Vec<(usize, usize)> = strip.arrows.clone();
    arrows.sort_unstable();
    let mut tau: Vec<(usize, usize)> = strip.tau_links.clone();
    tau.sort_unstable();
    let holes: Vec<serde_json::Value> = strip
        .holes
        .iter()
        .map(|h| {
            serde_json::json!({
                "vertex": strip.window.ext.base.vertices[h.base_vertex],
                "copy": h.copy,
                "injective_node": h.inj_node,
                "projective_node": h.proj_node,
            })
        })
        .collect();
    serde_json::json!({
        "nodes": nodes,
        "arrows": arrows.iter().map(|&(a, b)| serde_json::json!([a, b])).collect::<Vec<_>>(),
        "tau": tau.iter().map(|&(a, b)| serde_json::json!([a, b])).collect::<Vec<_>>(),
        "holes": holes,
        "orbits": view.classes,
    })
}

pub fn strip_to_dot(strip: &Strip) -> String {
    let view = strip.quotient_view();
    let mut out = String::new();
    let _ = writeln!(out, "digraph strip {{");
    let _ = writeln!(out, "  rankdir=LR;");
    for (i, n) in strip.nodes.iter().enumerate() {
        let shape = if n.projective || n.injective { "box" } else { "ellipse" };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\", shape={}, group=\"orbit{}\"];",
            i, n.label, shape, view.class_of[i]
        );
    }
    for (hid, h) in strip.holes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  h{} [label=\"({})\", shape=diamond, style=dashed, group=\"hole{}\"];",
            hid, strip.window.ext.base.vertices[h.base_vertex], h.base_vertex
        );
    }
    let mut arrows = strip.arrows.clone();
    arrows.sort_unstable();
    for (a, b) in arrows {
        let _ = writeln!(out, "  n{} -> n{};", a, b);
    }
    let mut tau = strip.tau_links.clone();
    tau.sort_unstable();
    for (a, b) in tau {
        let _ = writeln!(out, "  n{} -> n{} [style=dotted, dir=back, constraint=false];", b, a);
    }
    for (hid, h) in strip.holes.iter().enumerate() {
        let mut ins = h.in_nodes.clone();
        ins.sort_unstable();
        ins.dedup();
        for i in ins {
            let _ = writeln!(out, "  n{} -> h{};", i, hid);
        }
        let mut outs = h.out_nodes.clone();
        outs.sort_unstable();
        outs.dedup();
        for o in outs {
            let _ = writeln!(out, "  h{} -> n{};", hid, o);
        }
    }
    let _ = writeln!(out, "}}");
    out
}

pub fn quotient_view_text(view: &QuotientView) -> String {
    let mut out = String::new();
    let mut labels: Vec<(usize, &String)> = view.labels.iter().enumerate().collect();
    labels.sort_by(|a, b| a.1.cmp(b.1));
    let _ = writeln!(
        out,
        "{} module orbits, {} holes per period",
        view.labels.len(),
        view.hole_vertices.len()
    );
    for (i, l) in labels {
        let mut marks = String::new();
        if view.projective[i] {
            marks.push('P');
        }
        if view.injective[i] {
            marks.push('I');
        }
        let _ = writeln!(out, "  {}{}", l, if marks.is_empty() { String::new() } else { format!("  [{}]", marks) });
    }
    out
}

pub fn tube_to_json(frag: &TubeFragment) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = frag
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            serde_json::json!({
                "id": i,
                "label": n.label,
                "dim_vector": n.module.dims,
                "projective": n.projective,
                "injective": n.injective,
            })
        })
        .collect();
    let mut arrows = frag.arrows.clone();
    arrows.sort_unstable();
    let mut tau = frag.tau_links.clone();
    tau.sort_unstable();
    serde_json::json!({
        "experimental": frag.experimental,
        "rank": frag.rank,
        "nodes": nodes,
        "arrows": arrows.iter().map(|&(a, b)| serde_json::json!([a, b])).collect::<Vec<_>>(),
        "tau": tau.iter().map(|&(a, b)| serde_json::json!([a, b])).collect::<Vec<_>>(),
    })
}

pub fn tube_to_dot(frag: &TubeFragment) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph tube {{");
    if frag.experimental {
        let _ = writeln!(out, "  // EXPERIMENTAL: coray insertion is conjectural beyond the");
        let _ = writeln!(out, "  // single-projective sectional case; verify before relying on it.");
    }
    let _ = writeln!(out, "  // cylinder: identify nodes with equal labels across periods");
    for (i, n) in frag.nodes.iter().enumerate() {
        let shape = if n.projective || n.injective { "box" } else { "ellipse" };
        let _ = writeln!(out, "  t{} [label=\"{}\", shape={}];", i, n.label, shape);
    }
    let mut arrows = frag.arrows.clone();
    arrows.sort_unstable();
    for (a, b) in arrows {
        let _ = writeln!(out, "  t{} -> t{};", a, b);
    }
    let mut tau = frag.tau_links.clone();
    tau.sort_unstable();
    for (a, b) in tau {
        let _ = writeln!(out, "  t{} -> t{} [style=dotted, constraint=false];", b, a);
    }
    let _ = writeln!(out, "}}");
    out
}
