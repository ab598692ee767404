//! The eight truth-preserving translations between LTS/KS/KTS and their
//! logics: structure maps with provenance, formula tables and path maps.

mod tables;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::{GrammarViolation, LogicId, PathFormula, StateFormula};
use crate::structures::{
    ActionToken, Ks, Kts, LabelSet, Lasso, Lts, PathError, PropToken, StateId, Structure, StructureKind, Transition,
    Violation,
};

pub use tables::chi_to_prop;

/// The reserved fresh token.
pub const FRESH: &str = "F";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MappingId {
    #[serde(rename = "ks")]
    Ks,
    #[serde(rename = "lts")]
    Lts,
    #[serde(rename = "ks2")]
    Ks2,
    #[serde(rename = "lts2")]
    Lts2,
    #[serde(rename = "ks'")]
    KsPrime,
    #[serde(rename = "lts'")]
    LtsPrime,
    #[serde(rename = "ks2'")]
    Ks2Prime,
    #[serde(rename = "lts2'")]
    Lts2Prime,
}

impl MappingId {
    pub const ALL: [MappingId; 8] = [
        MappingId::Ks,
        MappingId::Lts,
        MappingId::Ks2,
        MappingId::Lts2,
        MappingId::KsPrime,
        MappingId::LtsPrime,
        MappingId::Ks2Prime,
        MappingId::Lts2Prime,
    ];
    pub const STAR: [MappingId; 4] = [MappingId::Ks, MappingId::Lts, MappingId::Ks2, MappingId::Lts2];
    pub const NON_STAR: [MappingId; 4] =
        [MappingId::KsPrime, MappingId::LtsPrime, MappingId::Ks2Prime, MappingId::Lts2Prime];

    pub fn name(self) -> &'static str {
        match self {
            MappingId::Ks => "ks",
            MappingId::Lts => "lts",
            MappingId::Ks2 => "ks2",
            MappingId::Lts2 => "lts2",
            MappingId::KsPrime => "ks'",
            MappingId::LtsPrime => "lts'",
            MappingId::Ks2Prime => "ks2'",
            MappingId::Lts2Prime => "lts2'",
        }
    }

    pub fn is_star(self) -> bool {
        MappingId::STAR.contains(&self)
    }

    /// The star mapping sharing this one's structure construction.
    pub fn structure_map(self) -> MappingId {
        match self {
            MappingId::KsPrime => MappingId::Ks,
            MappingId::LtsPrime => MappingId::Lts,
            MappingId::Ks2Prime => MappingId::Ks2,
            MappingId::Lts2Prime => MappingId::Lts2,
            m => m,
        }
    }

    pub fn source_logic(self) -> LogicId {
        match self {
            MappingId::Ks => LogicId::ActlStar,
            MappingId::Lts => LogicId::CtlStar,
            MappingId::Ks2 | MappingId::Lts2 => LogicId::UctlStar,
            MappingId::KsPrime => LogicId::Actl,
            MappingId::LtsPrime => LogicId::Ctl,
            MappingId::Ks2Prime | MappingId::Lts2Prime => LogicId::Uctl,
        }
    }

    pub fn target_logic(self) -> LogicId {
        match self {
            MappingId::Ks | MappingId::Ks2 => LogicId::CtlStar,
            MappingId::Lts | MappingId::Lts2 => LogicId::ActlStar,
            MappingId::KsPrime | MappingId::Ks2Prime => LogicId::Ctl,
            MappingId::LtsPrime | MappingId::Lts2Prime => LogicId::Actl,
        }
    }

    pub fn source_kind(self) -> StructureKind {
        self.source_logic().carrier()
    }

    pub fn target_kind(self) -> StructureKind {
        self.target_logic().carrier()
    }

    /// Whether the target splits transitions (`ks` family) rather than
    /// adding detours (`lts` family).
    pub fn splits_transitions(self) -> bool {
        matches!(self.structure_map(), MappingId::Ks | MappingId::Ks2)
    }
}

impl fmt::Display for MappingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MappingId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_lowercase().replace("prime", "'").replace('₂', "2").replace('′', "'");
        MappingId::ALL
            .into_iter()
            .find(|m| m.name() == norm)
            .ok_or_else(|| format!("unknown mapping `{s}` (expected one of ks, lts, ks2, lts2, ks', lts', ks2', lts2')"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("the fresh token `F` already occurs in the source {0}")]
    FreshCollision(&'static str),
    #[error("`{0}` is both a proposition and an action")]
    Overlap(String),
    #[error("{mapping} expects a {expected}, got a {actual}")]
    WrongSource { mapping: MappingId, expected: StructureKind, actual: StructureKind },
    #[error("source structure is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidSource(Vec<Violation>),
    #[error("formula does not conform to {logic}: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotConforming { logic: LogicId, violations: Vec<GrammarViolation> },
    #[error("{mapping} has no translation for {construct}")]
    NoTableEntry { mapping: MappingId, construct: &'static str },
    #[error("action `{0}` is outside the alphabet")]
    OutsideAlphabet(String),
    #[error("path is not a path of the source: {0}")]
    Path(#[from] PathError),
}

/// Where a target state comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    State { state: String },
    /// Split state of the source transition with this index.
    Transition { index: usize, src: String, dst: String },
    /// Detour copy of a source state.
    Underline { state: String },
}

/// A mapped structure together with the data to translate formulas and
/// paths consistently with it.
#[derive(Clone, Debug)]
pub struct MappingBundle {
    pub mapping: MappingId,
    pub source: Structure,
    pub target: Structure,
    /// Per target state.
    pub origin: Vec<Origin>,
    /// Image of each source state.
    pub state_image: Vec<StateId>,
    /// Target transitions replacing each source transition.
    pub transition_image: Vec<Vec<usize>>,
    /// Source action alphabet, used to read action formulas as propositions.
    pub alphabet: BTreeSet<ActionToken>,
    /// Apply the deliberately broken table variant (for mutation testing).
    pub mutated: bool,
}

impl MappingBundle {
    pub fn map_path(&self, sigma: &Lasso) -> Result<Lasso, MappingError> {
        sigma.check(self.source.as_transition_system())?;
        let image = |ts: &[usize]| ts.iter().flat_map(|&t| self.transition_image[t].iter().copied()).collect();
        Ok(Lasso { start: self.state_image[sigma.start.index()], stem: image(&sigma.stem), cycle: image(&sigma.cycle) })
    }

    pub fn map_formula(&self, phi: &StateFormula) -> Result<StateFormula, MappingError> {
        tables::Translator::new(self.mapping, &self.alphabet, self.mutated).formula(phi)
    }

    pub fn map_path_formula(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        tables::Translator::new(self.mapping, &self.alphabet, self.mutated).path_formula(pi)
    }

    /// Same structure, with the named mutation of the formula table.
    pub fn with_mutation(mut self, mutated: bool) -> Self {
        self.mutated = mutated;
        self
    }

    /// Source state a target state stands for, if it is an image.
    pub fn preimage(&self, target: StateId) -> Option<StateId> {
        self.state_image.iter().position(|&s| s == target).map(StateId::from)
    }
}

/// Human-readable description of each mapping's mutation.
pub fn mutation_description(m: MappingId) -> &'static str {
    match m {
        MappingId::Ks => "translate X as a single X instead of X X",
        MappingId::Ks2 => "drop `F ∧` from the left operand of U",
        MappingId::Lts => "drop the `∃X_F true` guard under X",
        MappingId::Lts2 => "translate X_a as plain X",
        MappingId::KsPrime => "drop χ from the X_χ clause",
        MappingId::LtsPrime => "drop X_F from the proposition clause",
        MappingId::Ks2Prime => "drop `F ∧` inside the nested U",
        MappingId::Lts2Prime => "swap χ and χ′ in the U clause",
    }
}

fn fresh_name(taken: &mut HashSet<String>, base: String) -> String {
    let mut name = base;
    while !taken.insert(name.clone()) {
        name.push('\'');
    }
    name
}

fn prop(name: &str) -> PropToken {
    PropToken::new(name).expect("names of valid structures are valid tokens")
}

fn act(name: &str) -> ActionToken {
    ActionToken::new(name).expect("names of valid structures are valid tokens")
}

fn ensure_valid(violations: Vec<Violation>) -> Result<(), MappingError> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(MappingError::InvalidSource(violations))
    }
}

/// Split construction shared by `ks` and `ks₂`. `props` are the source
/// propositions with their labeling (empty for an LTS).
fn split(
    mapping: MappingId,
    source: Structure,
    states: &[String],
    actions: &[ActionToken],
    props: &[PropToken],
    labeling: &[Vec<bool>],
    transitions: &[Transition],
) -> MappingBundle {
    let mut taken: HashSet<String> = states.iter().cloned().collect();
    let mut names = states.to_vec();
    let mut origin: Vec<Origin> = states.iter().map(|s| Origin::State { state: s.clone() }).collect();
    let mut target_transitions = Vec::with_capacity(2 * transitions.len());
    let mut transition_image = Vec::with_capacity(transitions.len());
    // AP′ = AP ∪ Act ∪ {F}, in that order
    let mut target_props: Vec<PropToken> = props.to_vec();
    target_props.extend(actions.iter().map(|a| prop(a.as_str())));
    target_props.push(prop(FRESH));
    let f = target_props.len() - 1;
    let mut target_labeling: Vec<Vec<bool>> = labeling
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.resize(target_props.len(), false);
            r[f] = true;
            r
        })
        .collect();
    if labeling.is_empty() {
        target_labeling = vec![
            {
                let mut r = vec![false; target_props.len()];
                r[f] = true;
                r
            };
            states.len()
        ];
    }
    for (i, t) in transitions.iter().enumerate() {
        let (src, dst) = (&states[t.src.index()], &states[t.dst.index()]);
        let name = fresh_name(&mut taken, format!("({src},{dst})"));
        let mid = StateId::from(names.len());
        names.push(name);
        origin.push(Origin::Transition { index: i, src: src.clone(), dst: dst.clone() });
        let mut row = vec![false; target_props.len()];
        for a in t.labels.iter() {
            row[props.len() + a] = true;
        }
        target_labeling.push(row);
        transition_image.push(vec![target_transitions.len(), target_transitions.len() + 1]);
        target_transitions.push(Transition::new(t.src, LabelSet::EMPTY, mid));
        target_transitions.push(Transition::new(mid, LabelSet::EMPTY, t.dst));
    }
    let target = Ks { states: names, props: target_props, transitions: target_transitions, labeling: target_labeling };
    MappingBundle {
        mapping,
        source,
        target: Structure::Ks(target),
        origin,
        state_image: (0..states.len()).map(StateId::from).collect(),
        transition_image,
        alphabet: actions.iter().cloned().collect(),
        mutated: false,
    }
}

/// Detour construction shared by `lts` and `lts₂`: the alphabet is
/// `Act ∪ AP ∪ {F}`, original transitions keep their labels and every
/// state `s` gets `s -{F}-> _s -L(s)'-> s`.
fn detour(
    mapping: MappingId,
    source: Structure,
    states: &[String],
    actions: &[ActionToken],
    props: &[PropToken],
    labeling: &[Vec<bool>],
    transitions: &[Transition],
) -> MappingBundle {
    let mut taken: HashSet<String> = states.iter().cloned().collect();
    let mut names = states.to_vec();
    let mut origin: Vec<Origin> = states.iter().map(|s| Origin::State { state: s.clone() }).collect();
    let mut target_actions: Vec<ActionToken> = actions.to_vec();
    target_actions.extend(props.iter().map(|p| act(p.as_str())));
    target_actions.push(act(FRESH));
    let f = target_actions.len() - 1;
    let mut target_transitions = transitions.to_vec();
    for (s, name) in states.iter().enumerate() {
        let under = StateId::from(names.len());
        names.push(fresh_name(&mut taken, format!("_{name}")));
        origin.push(Origin::Underline { state: name.clone() });
        let mut omega = LabelSet::EMPTY;
        for (p, &v) in labeling.get(s).map(Vec::as_slice).unwrap_or(&[]).iter().enumerate() {
            if v {
                omega.insert(actions.len() + p);
            }
        }
        target_transitions.push(Transition::new(s, LabelSet::singleton(f), under));
        target_transitions.push(Transition::new(under, omega, s));
    }
    let target = Lts { states: names, actions: target_actions, transitions: target_transitions };
    MappingBundle {
        mapping,
        source,
        target: Structure::Lts(target),
        origin,
        state_image: (0..states.len()).map(StateId::from).collect(),
        transition_image: (0..transitions.len()).map(|t| vec![t]).collect(),
        alphabet: actions.iter().cloned().collect(),
        mutated: false,
    }
}

fn check_fresh<'a>(names: impl IntoIterator<Item = &'a str>, what: &'static str) -> Result<(), MappingError> {
    if names.into_iter().any(|n| n == FRESH) {
        Err(MappingError::FreshCollision(what))
    } else {
        Ok(())
    }
}

fn check_disjoint(kts: &Kts) -> Result<(), MappingError> {
    for p in &kts.props {
        if kts.actions.iter().any(|a| a.as_str() == p.as_str()) {
            return Err(MappingError::Overlap(p.to_string()));
        }
    }
    Ok(())
}

/// ACTL* → CTL*: split every transition through a fresh state labeled by
/// its action set.
pub fn map_ks(lts: &Lts) -> Result<MappingBundle, MappingError> {
    ensure_valid(lts.validate())?;
    check_fresh(lts.actions.iter().map(|a| a.as_str()), "actions")?;
    Ok(split(MappingId::Ks, Structure::Lts(lts.clone()), &lts.states, &lts.actions, &[], &[], &lts.transitions))
}

/// CTL* → ACTL*: silent transitions plus a labeled detour per state.
pub fn map_lts(ks: &Ks) -> Result<MappingBundle, MappingError> {
    ensure_valid(ks.validate())?;
    check_fresh(ks.props.iter().map(|p| p.as_str()), "propositions")?;
    Ok(detour(MappingId::Lts, Structure::Ks(ks.clone()), &ks.states, &[], &ks.props, &ks.labeling, &ks.transitions))
}

/// UCTL* → CTL*.
pub fn map_ks2(kts: &Kts) -> Result<MappingBundle, MappingError> {
    ensure_valid(kts.validate())?;
    check_fresh(kts.props.iter().map(|p| p.as_str()).chain(kts.actions.iter().map(|a| a.as_str())), "alphabet")?;
    check_disjoint(kts)?;
    Ok(split(
        MappingId::Ks2,
        Structure::Kts(kts.clone()),
        &kts.states,
        &kts.actions,
        &kts.props,
        &kts.labeling,
        &kts.transitions,
    ))
}

/// UCTL* → ACTL*.
pub fn map_lts2(kts: &Kts) -> Result<MappingBundle, MappingError> {
    ensure_valid(kts.validate())?;
    check_fresh(kts.props.iter().map(|p| p.as_str()).chain(kts.actions.iter().map(|a| a.as_str())), "alphabet")?;
    check_disjoint(kts)?;
    Ok(detour(
        MappingId::Lts2,
        Structure::Kts(kts.clone()),
        &kts.states,
        &kts.actions,
        &kts.props,
        &kts.labeling,
        &kts.transitions,
    ))
}

/// Builds the bundle of any mapping from a loaded structure.
pub fn map_structure(mapping: MappingId, source: &Structure) -> Result<MappingBundle, MappingError> {
    let wrong = || MappingError::WrongSource { mapping, expected: mapping.source_kind(), actual: source.kind() };
    let bundle = match (mapping.structure_map(), source) {
        (MappingId::Ks, Structure::Lts(l)) => map_ks(l)?,
        (MappingId::Lts, Structure::Ks(k)) => map_lts(k)?,
        (MappingId::Ks2, Structure::Kts(k)) => map_ks2(k)?,
        (MappingId::Lts2, Structure::Kts(k)) => map_lts2(k)?,
        _ => return Err(wrong()),
    };
    Ok(MappingBundle { mapping, ..bundle })
}

/// Translates a state formula of `mapping`'s source logic. `alphabet` is
/// the source action set, needed where action formulas become propositions.
pub fn map_formula(
    mapping: MappingId,
    phi: &StateFormula,
    alphabet: &BTreeSet<ActionToken>,
) -> Result<StateFormula, MappingError> {
    tables::Translator::new(mapping, alphabet, false).formula(phi)
}

pub fn ks_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Ks, phi, &BTreeSet::new())
}

pub fn lts_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Lts, phi, &BTreeSet::new())
}

pub fn ks2_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Ks2, phi, &BTreeSet::new())
}

pub fn lts2_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Lts2, phi, &BTreeSet::new())
}

pub fn ks_prime_formula(phi: &StateFormula, alphabet: &BTreeSet<ActionToken>) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::KsPrime, phi, alphabet)
}

pub fn lts_prime_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::LtsPrime, phi, &BTreeSet::new())
}

pub fn ks2_prime_formula(phi: &StateFormula, alphabet: &BTreeSet<ActionToken>) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Ks2Prime, phi, alphabet)
}

pub fn lts2_prime_formula(phi: &StateFormula) -> Result<StateFormula, MappingError> {
    map_formula(MappingId::Lts2Prime, phi, &BTreeSet::new())
}

#[cfg(test)]
mod tests;
