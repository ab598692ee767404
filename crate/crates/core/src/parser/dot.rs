use std::fmt::Write;

use crate::formulas::Truth3;
use crate::structures::{Lasso, LabelSet, Structure, TransitionSystem};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn edge_label(ts: &dyn TransitionSystem, labels: LabelSet) -> String {
    if labels.is_empty() {
        "tau".to_string()
    } else {
        ts.format_labels(labels)
    }
}

/// Graphviz rendering: deadlocked states get a double ring, propositions
/// are listed in a table under the state name, `{}` edges read `tau`.
pub fn to_dot(structure: &Structure) -> String {
    let ts = structure.as_transition_system();
    let props = structure.props();
    let rows: Vec<Vec<Truth3>> = match structure {
        Structure::Lts(_) => vec![Vec::new(); ts.num_states()],
        Structure::Ks(k) => k.labeling.iter().map(|r| r.iter().map(|&b| b.into()).collect()).collect(),
        Structure::Kts(k) => k.labeling.iter().map(|r| r.iter().map(|&b| b.into()).collect()).collect(),
        Structure::Kmts(k) => k.labeling.clone(),
    };
    let mut out = String::new();
    writeln!(out, "digraph {} {{", structure.kind()).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, name) in ts.state_names().iter().enumerate() {
        let shape = if ts.is_deadlocked(i.into()) { "doublecircle" } else { "circle" };
        let label = if props.is_empty() {
            quote(name)
        } else {
            let mut table = String::from("<<table border=\"0\" cellborder=\"0\">");
            write!(table, "<tr><td><b>{}</b></td></tr>", html_escape(name)).unwrap();
            for (p, v) in props.iter().zip(&rows[i]) {
                write!(table, "<tr><td>{}={}</td></tr>", html_escape(p.as_str()), v).unwrap();
            }
            table.push_str("</table>>");
            table
        };
        writeln!(out, "  {} [shape={shape}, label={label}];", quote(name)).unwrap();
    }
    let names = ts.state_names();
    for t in ts.transitions() {
        let (src, dst) = (quote(&names[t.src.index()]), quote(&names[t.dst.index()]));
        if structure.kind() == crate::structures::StructureKind::Ks {
            writeln!(out, "  {src} -> {dst};").unwrap();
        } else {
            writeln!(out, "  {src} -> {dst} [label={}];", quote(&edge_label(ts, t.labels))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn chain(ts: &dyn TransitionSystem, ks: bool, from: &str, steps: &[usize]) -> String {
    let mut out = from.to_string();
    for &t in steps {
        let tr = &ts.transitions()[t];
        let arrow = if ks { " -> ".to_string() } else { format!(" -{}-> ", edge_label(ts, tr.labels)) };
        out.push_str(&arrow);
        out.push_str(ts.state_name(tr.dst));
    }
    out
}

/// `stem | cycle`, e.g. `s0 -{a}-> s1 | s1 -tau-> s1`; a finite path shows
/// `deadlock` in place of the cycle.
pub fn format_lasso(ts: &dyn TransitionSystem, lasso: &Lasso) -> String {
    let ks = ts.kind() == crate::structures::StructureKind::Ks;
    let stem = chain(ts, ks, ts.state_name(lasso.start), &lasso.stem);
    let cycle = if lasso.cycle.is_empty() {
        "deadlock".to_string()
    } else {
        let at = ts.transitions()[lasso.cycle[0]].src;
        chain(ts, ks, ts.state_name(at), &lasso.cycle)
    };
    format!("{stem} | {cycle}")
}
