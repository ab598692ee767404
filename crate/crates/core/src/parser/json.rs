//! The JSON structure document.
//!
//! ```json
//! { "kind": "lts", "states": ["s0","s1"], "actions": ["a","b"], "props": [],
//!   "transitions": [{"src":"s0","dst":"s1","labels":["a"]}], "labeling": {} }
//! ```
//!
//! KMTS actions are written with their modifier (`"a!"`, `"a?"`). Labeling
//! entries that are left out default to `false`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::Truth3;
use crate::structures::{
    ActionToken, Kmts, Ks, Kts, LabelSet, Lts, ModAction, PropToken, StateId, Structure, StructureKind, Transition,
    Violation,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid structure: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    kind: StructureKind,
    #[serde(default)]
    states: Vec<String>,
    #[serde(default)]
    actions: Vec<String>,
    #[serde(default)]
    props: Vec<String>,
    #[serde(default)]
    transitions: Vec<TransitionDoc>,
    #[serde(default)]
    labeling: BTreeMap<String, BTreeMap<String, Truth3>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    src: String,
    dst: String,
    #[serde(default)]
    labels: Vec<String>,
}

fn schema<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Schema { path: path.into(), message: message.into() })
}

/// Parses and validates a structure document.
pub fn load_structure(text: &str) -> Result<Structure, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        LoadError::Schema { path: if path.is_empty() { "$".into() } else { path }, message: e.into_inner().to_string() }
    })?;
    let structure = build(doc)?;
    let violations = structure.validate();
    if violations.is_empty() {
        Ok(structure)
    } else {
        Err(LoadError::Invalid(violations))
    }
}

fn props(doc: &Document) -> Result<Vec<PropToken>, LoadError> {
    doc.props
        .iter()
        .enumerate()
        .map(|(i, p)| PropToken::new(p.as_str()).or_else(|e| schema(format!("props[{i}]"), e.to_string())))
        .collect()
}

fn actions(doc: &Document) -> Result<Vec<ActionToken>, LoadError> {
    doc.actions
        .iter()
        .enumerate()
        .map(|(i, a)| ActionToken::new(a.as_str()).or_else(|e| schema(format!("actions[{i}]"), e.to_string())))
        .collect()
}

fn state_index(states: &[String], name: &str, path: String) -> Result<StateId, LoadError> {
    match states.iter().position(|s| s == name) {
        Some(i) => Ok(StateId::from(i)),
        None => schema(path, format!("unknown state `{name}`")),
    }
}

fn transitions(doc: &Document, alphabet: &[String]) -> Result<Vec<Transition>, LoadError> {
    let mut out = Vec::with_capacity(doc.transitions.len());
    for (i, t) in doc.transitions.iter().enumerate() {
        let src = state_index(&doc.states, &t.src, format!("transitions[{i}].src"))?;
        let dst = state_index(&doc.states, &t.dst, format!("transitions[{i}].dst"))?;
        let mut labels = LabelSet::EMPTY;
        for (j, l) in t.labels.iter().enumerate() {
            match alphabet.iter().position(|a| a == l) {
                Some(k) if k < 64 => labels.insert(k),
                Some(_) => return schema(format!("transitions[{i}].labels[{j}]"), "alphabet too large"),
                None => {
                    let message = if doc.kind == StructureKind::Ks {
                        "Kripke structure transitions carry no labels".to_string()
                    } else {
                        format!("label `{l}` is not in the action alphabet")
                    };
                    return schema(format!("transitions[{i}].labels[{j}]"), message);
                }
            }
        }
        out.push(Transition { src, labels, dst });
    }
    Ok(out)
}

fn labeling<V: Copy>(
    doc: &Document,
    props: &[PropToken],
    default: V,
    convert: impl Fn(Truth3) -> Option<V>,
) -> Result<Vec<Vec<V>>, LoadError> {
    let mut out = vec![vec![default; props.len()]; doc.states.len()];
    for (state, row) in &doc.labeling {
        let s = state_index(&doc.states, state, format!("labeling.{state}"))?;
        for (prop, value) in row {
            let Some(p) = props.iter().position(|q| q.as_str() == prop) else {
                return schema(format!("labeling.{state}.{prop}"), format!("unknown proposition `{prop}`"));
            };
            match convert(*value) {
                Some(v) => out[s.index()][p] = v,
                None => {
                    return schema(
                        format!("labeling.{state}.{prop}"),
                        format!("`{value}` is not allowed in a two-valued {}", doc.kind),
                    )
                }
            }
        }
    }
    Ok(out)
}

fn two_valued(v: Truth3) -> Option<bool> {
    match v {
        Truth3::True => Some(true),
        Truth3::False => Some(false),
        Truth3::Bot => None,
    }
}

fn build(doc: Document) -> Result<Structure, LoadError> {
    let states = doc.states.clone();
    if doc.actions.len() > 64 {
        return Err(LoadError::Invalid(vec![Violation::AlphabetTooLarge(doc.actions.len())]));
    }
    Ok(match doc.kind {
        StructureKind::Lts => {
            if !doc.props.is_empty() {
                return schema("props", "a labelled transition system has no propositions");
            }
            if !doc.labeling.is_empty() {
                return schema("labeling", "a labelled transition system has no labeling");
            }
            let transitions = transitions(&doc, &doc.actions)?;
            Structure::Lts(Lts { states, actions: actions(&doc)?, transitions })
        }
        StructureKind::Ks => {
            if !doc.actions.is_empty() {
                return schema("actions", "a Kripke structure has no actions");
            }
            let props = props(&doc)?;
            let transitions = transitions(&doc, &[])?;
            let labeling = labeling(&doc, &props, false, two_valued)?;
            Structure::Ks(Ks { states, props, transitions, labeling })
        }
        StructureKind::Kts => {
            let props = props(&doc)?;
            let transitions = transitions(&doc, &doc.actions)?;
            let labeling = labeling(&doc, &props, false, two_valued)?;
            Structure::Kts(Kts { states, actions: actions(&doc)?, props, transitions, labeling })
        }
        StructureKind::Kmts => {
            let mod_actions = doc
                .actions
                .iter()
                .enumerate()
                .map(|(i, a)| ModAction::parse(a).or_else(|_| schema(format!("actions[{i}]"), format!("`{a}` is not a modified action (expected `a!` or `a?`)"))))
                .collect::<Result<Vec<_>, _>>()?;
            let props = props(&doc)?;
            let transitions = transitions(&doc, &doc.actions)?;
            let labeling = labeling(&doc, &props, Truth3::False, Some)?;
            Structure::Kmts(Kmts { states, mod_actions, props, transitions, labeling })
        }
    })
}

/// Serializes a structure; every field is written, labeling in full.
pub fn save_structure(structure: &Structure) -> String {
    let ts = structure.as_transition_system();
    let names = ts.label_names();
    let states = ts.state_names().to_vec();
    let transitions = ts
        .transitions()
        .iter()
        .map(|t| TransitionDoc {
            src: states[t.src.index()].clone(),
            dst: states[t.dst.index()].clone(),
            labels: t.labels.iter().map(|i| names[i].clone()).collect(),
        })
        .collect();
    let props: Vec<String> = structure.props().iter().map(ToString::to_string).collect();
    let mut labeling = BTreeMap::new();
    let rows: Vec<Vec<Truth3>> = match structure {
        Structure::Lts(_) => Vec::new(),
        Structure::Ks(k) => k.labeling.iter().map(|r| r.iter().map(|&b| b.into()).collect()).collect(),
        Structure::Kts(k) => k.labeling.iter().map(|r| r.iter().map(|&b| b.into()).collect()).collect(),
        Structure::Kmts(k) => k.labeling.clone(),
    };
    for (s, row) in rows.iter().enumerate() {
        let entry: BTreeMap<String, Truth3> = props.iter().cloned().zip(row.iter().copied()).collect();
        labeling.insert(states[s].clone(), entry);
    }
    let doc = Document { kind: structure.kind(), states, actions: names, props, transitions, labeling };
    serde_json::to_string_pretty(&doc).expect("structure documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const L0: &str = r#"{
        "kind": "lts", "states": ["s0", "s1"], "actions": ["a", "b"],
        "transitions": [{"src": "s0", "dst": "s1", "labels": ["a"]}, {"src": "s1", "dst": "s1", "labels": []}]
    }"#;

    #[test]
    fn loads_l0() {
        let s = load_structure(L0).unwrap();
        assert_eq!(s.kind(), StructureKind::Lts);
        assert_eq!(s.as_transition_system().num_states(), 2);
    }

    #[test]
    fn kmts_modifier_conflict_is_rejected() {
        let doc = r#"{"kind":"kmts","states":["u0"],"actions":["a!","a?"],"props":[],"transitions":[]}"#;
        match load_structure(doc) {
            Err(LoadError::Invalid(v)) => assert!(matches!(v[0], Violation::ModifierConflict(_))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn label_outside_alphabet() {
        let doc = r#"{"kind":"lts","states":["s0"],"actions":["a"],"transitions":[{"src":"s0","dst":"s0","labels":["z"]}]}"#;
        match load_structure(doc) {
            Err(LoadError::Schema { path, .. }) => assert_eq!(path, "transitions[0].labels[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_values() {
        let doc = r#"{"kind":"lts","states":[],"colour":"red"}"#;
        assert!(matches!(load_structure(doc), Err(LoadError::Schema { .. })));
        let doc = r#"{"kind":"ks","states":["t"],"props":["p"],"labeling":{"t":{"p":"bot"}}}"#;
        assert!(matches!(load_structure(doc), Err(LoadError::Schema { path, .. }) if path == "labeling.t.p"));
        let doc = r#"{"kind":"ks","states":["t"],"props":["p"],"labeling":{"t":{"p":"maybe"}}}"#;
        match load_structure(doc) {
            Err(LoadError::Schema { path, .. }) => assert!(path.contains("labeling"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let kmts = r#"{"kind":"kmts","states":["u0","u1"],"actions":["a!","b?"],"props":["p"],
            "transitions":[{"src":"u0","dst":"u1","labels":["a!"]},{"src":"u0","dst":"u0","labels":["b?"]}],
            "labeling":{"u0":{"p":"bot"},"u1":{"p":"true"}}}"#;
        for doc in [L0, kmts] {
            let s = load_structure(doc).unwrap();
            let saved = save_structure(&s);
            assert_eq!(load_structure(&saved).unwrap(), s);
            let a: serde_json::Value = serde_json::from_str(&saved).unwrap();
            let b: serde_json::Value = serde_json::from_str(&save_structure(&load_structure(&saved).unwrap())).unwrap();
            assert_eq!(a, b);
        }
    }
}
