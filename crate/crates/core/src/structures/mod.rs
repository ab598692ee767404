//! Carrier structures: Kripke structures (KS), labelled transition systems
//! (LTS), Kripke transition systems (KTS) and Kripke modal transition systems
//! (KMTS), together with the valuation transformations between label sets and
//! proposition valuations.
//!
//! States are dense indices ([`StateId`]); the external names live in a
//! sidecar `states` vector and are only used for I/O. Transition label sets
//! are bitsets over the structure's action alphabet (for a KMTS, over its
//! modified-action alphabet).

mod paths;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::Truth3;

pub use paths::{for_each_mu_path, mu_paths, suffixes, Lasso, PathError, Suffix};

/// Largest supported action alphabet (label sets are 64-bit sets).
pub const MAX_ALPHABET: usize = 64;

/// Dense state identifier, unique within one structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(i as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("token must not be empty")]
    Empty,
    #[error("token `{0}` contains whitespace")]
    Whitespace(String),
    #[error("action token `{0}` must not end in `!` or `?`")]
    ModifierSuffix(String),
}

fn check_token(name: &str) -> Result<(), TokenError> {
    if name.is_empty() {
        return Err(TokenError::Empty);
    }
    if name.chars().any(char::is_whitespace) {
        return Err(TokenError::Whitespace(name.to_string()));
    }
    Ok(())
}

/// An action name. Never empty, no whitespace, no `!`/`?` suffix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ActionToken(String);

impl ActionToken {
    pub fn new(name: impl Into<String>) -> Result<Self, TokenError> {
        let name = name.into();
        check_token(&name)?;
        if name.ends_with('!') || name.ends_with('?') {
            return Err(TokenError::ModifierSuffix(name));
        }
        Ok(ActionToken(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// An atomic proposition name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PropToken(String);

impl PropToken {
    pub fn new(name: impl Into<String>) -> Result<Self, TokenError> {
        let name = name.into();
        check_token(&name)?;
        Ok(PropToken(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

macro_rules! token_conversions {
    ($t:ty) => {
        impl TryFrom<String> for $t {
            type Error = TokenError;
            fn try_from(s: String) -> Result<Self, TokenError> {
                <$t>::new(s)
            }
        }
        impl TryFrom<&str> for $t {
            type Error = TokenError;
            fn try_from(s: &str) -> Result<Self, TokenError> {
                <$t>::new(s)
            }
        }
        impl From<$t> for String {
            fn from(t: $t) -> String {
                t.0
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}
token_conversions!(ActionToken);
token_conversions!(PropToken);

/// `!` (must) or `?` (may).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modifier {
    Bang,
    Query,
}

impl Modifier {
    pub fn symbol(self) -> char {
        match self {
            Modifier::Bang => '!',
            Modifier::Query => '?',
        }
    }
}

/// A token carrying a `!` or `?` modifier: `a!`, `a?`, or (for the
/// three-valued ω′ transformation) `p!`, `p?`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modified<T> {
    pub token: T,
    pub modifier: Modifier,
}

pub type ModAction = Modified<ActionToken>;
pub type ModProp = Modified<PropToken>;

impl<T> Modified<T> {
    pub fn bang(token: T) -> Self {
        Modified { token, modifier: Modifier::Bang }
    }
    pub fn query(token: T) -> Self {
        Modified { token, modifier: Modifier::Query }
    }
}

impl<T: fmt::Display> fmt::Display for Modified<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.token, self.modifier.symbol())
    }
}

impl ModAction {
    /// Parses `a!` or `a?`.
    pub fn parse(text: &str) -> Result<Self, TokenError> {
        let modifier = match text.chars().last() {
            Some('!') => Modifier::Bang,
            Some('?') => Modifier::Query,
            _ => return Err(TokenError::Empty),
        };
        let token = ActionToken::new(&text[..text.len() - 1])?;
        Ok(Modified { token, modifier })
    }
}

/// A set of alphabet indices, used for transition labels.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn from_bits(bits: u64) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        LabelSet(1u64 << i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 & (1u64 << i) != 0)
    }

    /// Whether every member is below `n`.
    pub fn within(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = LabelSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: StateId,
    pub labels: LabelSet,
    pub dst: StateId,
}

impl Transition {
    pub fn new(src: impl Into<StateId>, labels: LabelSet, dst: impl Into<StateId>) -> Self {
        Transition { src: src.into(), labels, dst: dst.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Ks,
    Lts,
    Kts,
    Kmts,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Ks => "ks",
            StructureKind::Lts => "lts",
            StructureKind::Kts => "kts",
            StructureKind::Kmts => "kmts",
        })
    }
}

/// One broken structure invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("duplicate action `{0}` in alphabet")]
    DuplicateAction(String),
    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),
    #[error("alphabet has {0} entries, at most {MAX_ALPHABET} are supported")]
    AlphabetTooLarge(usize),
    #[error("transition #{index} refers to a state outside the structure")]
    DanglingTransition { index: usize },
    #[error("transition {src} -> {dst} carries a label outside the action alphabet")]
    LabelOutsideAlphabet { src: String, dst: String },
    #[error("Kripke structure transition {src} -> {dst} carries action labels")]
    LabelledKsTransition { src: String, dst: String },
    #[error("more than one transition from {src} to {dst}")]
    DuplicateTransition { src: String, dst: String },
    #[error("labeling of state `{state}` has {found} entries, expected {expected}")]
    LabelingShape { state: String, expected: usize, found: usize },
    #[error("labeling has {found} rows for {expected} states")]
    LabelingRows { expected: usize, found: usize },
    #[error("action `{0}` occurs with both `!` and `?` modifiers")]
    ModifierConflict(String),
    #[error("two-valued labeling of a {0} cannot be unknown")]
    UnknownInTwoValued(String),
}

/// Common read access to the state/transition skeleton of every structure.
pub trait TransitionSystem {
    fn kind(&self) -> StructureKind;
    fn state_names(&self) -> &[String];
    fn transitions(&self) -> &[Transition];

    fn num_states(&self) -> usize {
        self.state_names().len()
    }

    fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names().iter().position(|n| n == name).map(StateId::from)
    }

    fn state_name(&self, s: StateId) -> &str {
        &self.state_names()[s.index()]
    }

    /// Display names of the label alphabet, indexed like [`LabelSet`] members.
    fn label_names(&self) -> Vec<String>;

    /// Outgoing transition indices per state.
    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for (i, t) in self.transitions().iter().enumerate() {
            if t.src.index() < out.len() {
                out[t.src.index()].push(i);
            }
        }
        out
    }

    fn is_deadlocked(&self, s: StateId) -> bool {
        !self.transitions().iter().any(|t| t.src == s)
    }

    fn format_labels(&self, labels: LabelSet) -> String {
        let names = self.label_names();
        let parts: Vec<&str> = labels.iter().filter_map(|i| names.get(i).map(String::as_str)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Two-valued structures that the temporal checkers run on.
pub trait Model: TransitionSystem {
    fn actions(&self) -> &[ActionToken];
    fn props(&self) -> &[PropToken];
    fn holds(&self, s: StateId, prop: usize) -> bool;

    fn action_index(&self, name: &str) -> Option<usize> {
        self.actions().iter().position(|a| a.as_str() == name)
    }

    fn prop_index(&self, name: &str) -> Option<usize> {
        self.props().iter().position(|p| p.as_str() == name)
    }
}

/// Labelled transition system `(S, Act, →)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    pub states: Vec<String>,
    pub actions: Vec<ActionToken>,
    pub transitions: Vec<Transition>,
}

/// Kripke structure `(S, →, AP, 𝓛)`. Transitions carry no labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ks {
    pub states: Vec<String>,
    pub props: Vec<PropToken>,
    pub transitions: Vec<Transition>,
    /// `labeling[s][p]`
    pub labeling: Vec<Vec<bool>>,
}

/// Kripke transition system `(S, Act, →, AP, 𝓛)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kts {
    pub states: Vec<String>,
    pub actions: Vec<ActionToken>,
    pub props: Vec<PropToken>,
    pub transitions: Vec<Transition>,
    pub labeling: Vec<Vec<bool>>,
}

/// Kripke modal transition system with `!`/`?` modified actions and a
/// three-valued labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kmts {
    pub states: Vec<String>,
    pub mod_actions: Vec<ModAction>,
    pub props: Vec<PropToken>,
    pub transitions: Vec<Transition>,
    pub labeling: Vec<Vec<Truth3>>,
}

/// Any of the four carriers, as loaded from a structure document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Ks(Ks),
    Lts(Lts),
    Kts(Kts),
    Kmts(Kmts),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("label `{0}` is outside the alphabet")]
    OutsideAlphabet(String),
    #[error(transparent)]
    Token(#[from] TokenError),
    #[error("structure is invalid: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn names_to_strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn lookup_state(states: &[String], name: &str) -> Result<StateId, StructureError> {
    states
        .iter()
        .position(|s| s == name)
        .map(StateId::from)
        .ok_or_else(|| StructureError::UnknownState(name.to_string()))
}

fn lookup_labels(actions: &[ActionToken], labels: &[&str]) -> Result<LabelSet, StructureError> {
    labels
        .iter()
        .map(|l| {
            actions
                .iter()
                .position(|a| a.as_str() == *l)
                .ok_or_else(|| StructureError::UnknownAction(l.to_string()))
        })
        .collect()
}

fn make_actions(names: &[&str]) -> Result<Vec<ActionToken>, StructureError> {
    names.iter().map(|n| ActionToken::new(*n).map_err(Into::into)).collect()
}

fn make_props(names: &[&str]) -> Result<Vec<PropToken>, StructureError> {
    names.iter().map(|n| PropToken::new(*n).map_err(Into::into)).collect()
}

impl Lts {
    pub fn new(states: &[&str], actions: &[&str]) -> Result<Self, StructureError> {
        Ok(Lts { states: names_to_strings(states), actions: make_actions(actions)?, transitions: Vec::new() })
    }

    /// Adds `src -labels-> dst` by name.
    pub fn with_transition(mut self, src: &str, labels: &[&str], dst: &str) -> Result<Self, StructureError> {
        let t = Transition::new(
            lookup_state(&self.states, src)?,
            lookup_labels(&self.actions, labels)?,
            lookup_state(&self.states, dst)?,
        );
        self.transitions.push(t);
        Ok(self)
    }
}

impl Ks {
    pub fn new(states: &[&str], props: &[&str]) -> Result<Self, StructureError> {
        Ok(Ks {
            states: names_to_strings(states),
            props: make_props(props)?,
            transitions: Vec::new(),
            labeling: vec![vec![false; props.len()]; states.len()],
        })
    }

    pub fn with_transition(mut self, src: &str, dst: &str) -> Result<Self, StructureError> {
        let t = Transition::new(lookup_state(&self.states, src)?, LabelSet::EMPTY, lookup_state(&self.states, dst)?);
        self.transitions.push(t);
        Ok(self)
    }

    pub fn with_label(mut self, state: &str, prop: &str, value: bool) -> Result<Self, StructureError> {
        let s = lookup_state(&self.states, state)?;
        let p = self.prop_index(prop).ok_or_else(|| StructureError::UnknownProp(prop.to_string()))?;
        self.labeling[s.index()][p] = value;
        Ok(self)
    }
}

impl Kts {
    pub fn new(states: &[&str], actions: &[&str], props: &[&str]) -> Result<Self, StructureError> {
        Ok(Kts {
            states: names_to_strings(states),
            actions: make_actions(actions)?,
            props: make_props(props)?,
            transitions: Vec::new(),
            labeling: vec![vec![false; props.len()]; states.len()],
        })
    }

    pub fn with_transition(mut self, src: &str, labels: &[&str], dst: &str) -> Result<Self, StructureError> {
        let t = Transition::new(
            lookup_state(&self.states, src)?,
            lookup_labels(&self.actions, labels)?,
            lookup_state(&self.states, dst)?,
        );
        self.transitions.push(t);
        Ok(self)
    }

    pub fn with_label(mut self, state: &str, prop: &str, value: bool) -> Result<Self, StructureError> {
        let s = lookup_state(&self.states, state)?;
        let p = self.prop_index(prop).ok_or_else(|| StructureError::UnknownProp(prop.to_string()))?;
        self.labeling[s.index()][p] = value;
        Ok(self)
    }
}

impl Kmts {
    /// `mod_actions` are written `a!` / `a?`.
    pub fn new(states: &[&str], mod_actions: &[&str], props: &[&str]) -> Result<Self, StructureError> {
        let mod_actions = mod_actions.iter().map(|m| ModAction::parse(m)).collect::<Result<Vec<_>, _>>()?;
        Ok(Kmts {
            states: names_to_strings(states),
            mod_actions,
            props: make_props(props)?,
            transitions: Vec::new(),
            labeling: vec![vec![Truth3::False; props.len()]; states.len()],
        })
    }

    pub fn with_transition(mut self, src: &str, labels: &[&str], dst: &str) -> Result<Self, StructureError> {
        let set = labels
            .iter()
            .map(|l| {
                self.mod_actions
                    .iter()
                    .position(|m| m.to_string() == *l)
                    .ok_or_else(|| StructureError::UnknownAction(l.to_string()))
            })
            .collect::<Result<LabelSet, _>>()?;
        let t = Transition::new(lookup_state(&self.states, src)?, set, lookup_state(&self.states, dst)?);
        self.transitions.push(t);
        Ok(self)
    }

    pub fn with_label(mut self, state: &str, prop: &str, value: Truth3) -> Result<Self, StructureError> {
        let s = lookup_state(&self.states, state)?;
        let p = self
            .props
            .iter()
            .position(|q| q.as_str() == prop)
            .ok_or_else(|| StructureError::UnknownProp(prop.to_string()))?;
        self.labeling[s.index()][p] = value;
        Ok(self)
    }

    /// The underlying (unmodified) action alphabet, in declaration order.
    pub fn underlying_actions(&self) -> Vec<ActionToken> {
        let mut seen = HashSet::new();
        self.mod_actions
            .iter()
            .filter(|m| seen.insert(m.token.clone()))
            .map(|m| m.token.clone())
            .collect()
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p.as_str() == name)
    }
}

macro_rules! impl_transition_system {
    ($t:ty, $kind:expr, |$s:ident| $labels:expr) => {
        impl TransitionSystem for $t {
            fn kind(&self) -> StructureKind {
                $kind
            }
            fn state_names(&self) -> &[String] {
                &self.states
            }
            fn transitions(&self) -> &[Transition] {
                &self.transitions
            }
            fn label_names(&self) -> Vec<String> {
                let $s = self;
                $labels
            }
        }
    };
}

impl_transition_system!(Lts, StructureKind::Lts, |s| s.actions.iter().map(ToString::to_string).collect());
impl_transition_system!(Ks, StructureKind::Ks, |_s| Vec::new());
impl_transition_system!(Kts, StructureKind::Kts, |s| s.actions.iter().map(ToString::to_string).collect());
impl_transition_system!(Kmts, StructureKind::Kmts, |s| s.mod_actions.iter().map(ToString::to_string).collect());

impl Model for Lts {
    fn actions(&self) -> &[ActionToken] {
        &self.actions
    }
    fn props(&self) -> &[PropToken] {
        &[]
    }
    fn holds(&self, _s: StateId, _prop: usize) -> bool {
        false
    }
}

impl Model for Ks {
    fn actions(&self) -> &[ActionToken] {
        &[]
    }
    fn props(&self) -> &[PropToken] {
        &self.props
    }
    fn holds(&self, s: StateId, prop: usize) -> bool {
        self.labeling[s.index()][prop]
    }
}

impl Model for Kts {
    fn actions(&self) -> &[ActionToken] {
        &self.actions
    }
    fn props(&self) -> &[PropToken] {
        &self.props
    }
    fn holds(&self, s: StateId, prop: usize) -> bool {
        self.labeling[s.index()][prop]
    }
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Ks(_) => StructureKind::Ks,
            Structure::Lts(_) => StructureKind::Lts,
            Structure::Kts(_) => StructureKind::Kts,
            Structure::Kmts(_) => StructureKind::Kmts,
        }
    }

    pub fn as_transition_system(&self) -> &dyn TransitionSystem {
        match self {
            Structure::Ks(m) => m,
            Structure::Lts(m) => m,
            Structure::Kts(m) => m,
            Structure::Kmts(m) => m,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Structure::Ks(m) => m.validate(),
            Structure::Lts(m) => m.validate(),
            Structure::Kts(m) => m.validate(),
            Structure::Kmts(m) => m.validate(),
        }
    }

    pub fn props(&self) -> &[PropToken] {
        match self {
            Structure::Ks(m) => &m.props,
            Structure::Lts(_) => &[],
            Structure::Kts(m) => &m.props,
            Structure::Kmts(m) => &m.props,
        }
    }
}

// ---------------------------------------------------------------------------
// validation

fn duplicates<'a>(names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for n in names {
        if !seen.insert(n) && !dups.iter().any(|d: &String| d == n) {
            dups.push(n.to_string());
        }
    }
    dups
}

fn check_skeleton(states: &[String], transitions: &[Transition], alphabet: usize, out: &mut Vec<Violation>) {
    out.extend(duplicates(states.iter().map(String::as_str)).into_iter().map(Violation::DuplicateState));
    if alphabet > MAX_ALPHABET {
        out.push(Violation::AlphabetTooLarge(alphabet));
    }
    let mut pairs: HashMap<(StateId, StateId), usize> = HashMap::new();
    for (i, t) in transitions.iter().enumerate() {
        if t.src.index() >= states.len() || t.dst.index() >= states.len() {
            out.push(Violation::DanglingTransition { index: i });
            continue;
        }
        if !t.labels.within(alphabet) {
            out.push(Violation::LabelOutsideAlphabet {
                src: states[t.src.index()].clone(),
                dst: states[t.dst.index()].clone(),
            });
        }
        let count = pairs.entry((t.src, t.dst)).or_insert(0);
        *count += 1;
        if *count == 2 {
            out.push(Violation::DuplicateTransition {
                src: states[t.src.index()].clone(),
                dst: states[t.dst.index()].clone(),
            });
        }
    }
}

fn check_labeling<V>(states: &[String], props: usize, labeling: &[Vec<V>], out: &mut Vec<Violation>) {
    if labeling.len() != states.len() {
        out.push(Violation::LabelingRows { expected: states.len(), found: labeling.len() });
    }
    for (state, row) in states.iter().zip(labeling) {
        if row.len() != props {
            out.push(Violation::LabelingShape { state: state.clone(), expected: props, found: row.len() });
        }
    }
}

impl Lts {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        check_skeleton(&self.states, &self.transitions, self.actions.len(), &mut out);
        out.extend(duplicates(self.actions.iter().map(ActionToken::as_str)).into_iter().map(Violation::DuplicateAction));
        out
    }
}

impl Ks {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        check_skeleton(&self.states, &self.transitions, 0, &mut out);
        // check_skeleton reports labels as outside the (empty) alphabet; a KS
        // gets its own message instead.
        out.retain(|v| !matches!(v, Violation::LabelOutsideAlphabet { .. }));
        for t in &self.transitions {
            if !t.labels.is_empty() && t.src.index() < self.states.len() && t.dst.index() < self.states.len() {
                out.push(Violation::LabelledKsTransition {
                    src: self.states[t.src.index()].clone(),
                    dst: self.states[t.dst.index()].clone(),
                });
            }
        }
        out.extend(duplicates(self.props.iter().map(PropToken::as_str)).into_iter().map(Violation::DuplicateProp));
        check_labeling(&self.states, self.props.len(), &self.labeling, &mut out);
        out
    }
}

impl Kts {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        check_skeleton(&self.states, &self.transitions, self.actions.len(), &mut out);
        out.extend(duplicates(self.actions.iter().map(ActionToken::as_str)).into_iter().map(Violation::DuplicateAction));
        out.extend(duplicates(self.props.iter().map(PropToken::as_str)).into_iter().map(Violation::DuplicateProp));
        check_labeling(&self.states, self.props.len(), &self.labeling, &mut out);
        out
    }
}

impl Kmts {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        check_skeleton(&self.states, &self.transitions, self.mod_actions.len(), &mut out);
        let rendered: Vec<String> = self.mod_actions.iter().map(ToString::to_string).collect();
        out.extend(duplicates(rendered.iter().map(String::as_str)).into_iter().map(Violation::DuplicateAction));
        let mut modifiers: BTreeMap<&str, BTreeSet<Modifier>> = BTreeMap::new();
        for m in &self.mod_actions {
            modifiers.entry(m.token.as_str()).or_default().insert(m.modifier);
        }
        for (action, mods) in modifiers {
            if mods.len() > 1 {
                out.push(Violation::ModifierConflict(action.to_string()));
            }
        }
        out.extend(duplicates(self.props.iter().map(PropToken::as_str)).into_iter().map(Violation::DuplicateProp));
        check_labeling(&self.states, self.props.len(), &self.labeling, &mut out);
        out
    }
}

/// Turns a violation list into an error.
pub fn ensure_valid(violations: Vec<Violation>) -> Result<(), StructureError> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(StructureError::Invalid(violations))
    }
}

// ---------------------------------------------------------------------------
// α′ / ω′

/// `α′ = {a ↦ true | a ∈ α} ∪ {a ↦ false | a ∉ α}` over `alphabet`.
pub fn alpha_prime(
    labels: &BTreeSet<ActionToken>,
    alphabet: &BTreeSet<ActionToken>,
) -> Result<BTreeMap<ActionToken, bool>, StructureError> {
    if let Some(stray) = labels.iter().find(|a| !alphabet.contains(*a)) {
        return Err(StructureError::OutsideAlphabet(stray.to_string()));
    }
    Ok(alphabet.iter().map(|a| (a.clone(), labels.contains(a))).collect())
}

/// `ω′ = {p | p ↦ true ∈ ω}`.
pub fn omega_prime(valuation: &BTreeMap<PropToken, bool>) -> BTreeSet<PropToken> {
    valuation.iter().filter(|(_, v)| **v).map(|(p, _)| p.clone()).collect()
}

/// Three-valued α′: `a!` gives true, `a?` gives ⊥, absence gives false.
pub fn alpha_prime_3(
    labels: &BTreeSet<ModAction>,
    alphabet: &BTreeSet<ActionToken>,
) -> Result<BTreeMap<ActionToken, Truth3>, StructureError> {
    if let Some(stray) = labels.iter().find(|m| !alphabet.contains(&m.token)) {
        return Err(StructureError::OutsideAlphabet(stray.to_string()));
    }
    Ok(alphabet
        .iter()
        .map(|a| {
            let value = if labels.contains(&ModAction::bang(a.clone())) {
                Truth3::True
            } else if labels.contains(&ModAction::query(a.clone())) {
                Truth3::Bot
            } else {
                Truth3::False
            };
            (a.clone(), value)
        })
        .collect())
}

/// Three-valued ω′: `{p! | p ↦ true} ∪ {p? | p ↦ ⊥}`.
pub fn omega_prime_3(valuation: &BTreeMap<PropToken, Truth3>) -> BTreeSet<ModProp> {
    valuation
        .iter()
        .filter_map(|(p, v)| match v {
            Truth3::True => Some(ModProp::bang(p.clone())),
            Truth3::Bot => Some(ModProp::query(p.clone())),
            Truth3::False => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acts(names: &[&str]) -> BTreeSet<ActionToken> {
        names.iter().map(|n| ActionToken::new(*n).unwrap()).collect()
    }

    pub(crate) fn l0() -> Lts {
        Lts::new(&["s0", "s1"], &["a", "b"])
            .unwrap()
            .with_transition("s0", &["a"], "s1")
            .unwrap()
            .with_transition("s1", &[], "s1")
            .unwrap()
    }

    #[test]
    fn l0_is_valid() {
        assert!(l0().validate().is_empty());
    }

    #[test]
    fn duplicate_pair_with_different_labels() {
        let lts = Lts::new(&["s0", "s1"], &["a", "b"])
            .unwrap()
            .with_transition("s0", &["a"], "s1")
            .unwrap()
            .with_transition("s0", &["b"], "s1")
            .unwrap();
        let v = lts.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::DuplicateTransition { src, dst } if src == "s0" && dst == "s1"));
    }

    #[test]
    fn kmts_modifier_conflict() {
        let kmts = Kmts::new(&["u0"], &["a!", "a?"], &[]).unwrap();
        let v = kmts.validate();
        assert_eq!(v, vec![Violation::ModifierConflict("a".into())]);
    }

    #[test]
    fn label_outside_alphabet_and_bad_shape() {
        let mut lts = l0();
        lts.transitions.push(Transition::new(0usize, LabelSet::singleton(5), 0usize));
        assert!(lts.validate().iter().any(|v| matches!(v, Violation::LabelOutsideAlphabet { .. })));

        let mut ks = Ks::new(&["t0", "t1"], &["p"]).unwrap();
        ks.labeling[1].clear();
        assert_eq!(ks.validate(), vec![Violation::LabelingShape { state: "t1".into(), expected: 1, found: 0 }]);
    }

    #[test]
    fn tokens() {
        assert!(ActionToken::new("a!").is_err());
        assert!(ActionToken::new("").is_err());
        assert!(PropToken::new("p q").is_err());
        assert_eq!(ModAction::parse("b?").unwrap().to_string(), "b?");
    }

    #[test]
    fn alpha_prime_examples() {
        let ab = acts(&["a", "b"]);
        let m = alpha_prime(&acts(&["a"]), &ab).unwrap();
        assert_eq!(m.values().copied().collect::<Vec<_>>(), vec![true, false]);
        assert!(alpha_prime(&acts(&[]), &ab).unwrap().values().all(|v| !v));
        assert!(alpha_prime(&ab, &ab).unwrap().values().all(|v| *v));
        assert!(matches!(alpha_prime(&acts(&["c"]), &ab), Err(StructureError::OutsideAlphabet(_))));
    }

    #[test]
    fn omega_prime_examples() {
        let p = PropToken::new("p").unwrap();
        let q = PropToken::new("q").unwrap();
        let v: BTreeMap<_, _> = [(p.clone(), true), (q, false)].into_iter().collect();
        assert_eq!(omega_prime(&v), [p.clone()].into_iter().collect());
        assert!(omega_prime(&[(p, false)].into_iter().collect()).is_empty());
        assert!(omega_prime(&BTreeMap::new()).is_empty());
    }

    #[test]
    fn three_valued_transformations() {
        let ab = acts(&["a", "b"]);
        let a = ActionToken::new("a").unwrap();
        let b = ActionToken::new("b").unwrap();
        let m = alpha_prime_3(&[ModAction::bang(a.clone())].into_iter().collect(), &ab).unwrap();
        assert_eq!(m[&a], Truth3::True);
        assert_eq!(m[&b], Truth3::False);
        let m = alpha_prime_3(&[ModAction::query(b.clone())].into_iter().collect(), &ab).unwrap();
        assert_eq!((m[&a], m[&b]), (Truth3::False, Truth3::Bot));
        let m = alpha_prime_3(&BTreeSet::new(), &acts(&["a"])).unwrap();
        assert_eq!(m[&a], Truth3::False);

        let p = PropToken::new("p").unwrap();
        let q = PropToken::new("q").unwrap();
        let r = PropToken::new("r").unwrap();
        let w: BTreeMap<_, _> = [(p.clone(), Truth3::True), (q.clone(), Truth3::Bot), (r, Truth3::False)].into();
        let expected: BTreeSet<_> = [ModProp::bang(p.clone()), ModProp::query(q)].into();
        assert_eq!(omega_prime_3(&w), expected);
        assert!(omega_prime_3(&[(p.clone(), Truth3::False)].into()).is_empty());
        assert_eq!(omega_prime_3(&[(p.clone(), Truth3::Bot)].into()), [ModProp::query(p)].into());
    }

    #[test]
    fn alpha_omega_round_trip() {
        let alphabet = acts(&["a", "b", "c"]);
        for bits in 0u8..8 {
            let labels: BTreeSet<ActionToken> =
                alphabet.iter().enumerate().filter(|(i, _)| bits & (1 << i) != 0).map(|(_, a)| a.clone()).collect();
            let valuation: BTreeMap<PropToken, bool> = alpha_prime(&labels, &alphabet)
                .unwrap()
                .into_iter()
                .map(|(a, v)| (PropToken::new(a.as_str()).unwrap(), v))
                .collect();
            let back: BTreeSet<String> = omega_prime(&valuation).into_iter().map(String::from).collect();
            let labels: BTreeSet<String> = labels.into_iter().map(String::from).collect();
            assert_eq!(back, labels);
        }
    }

    #[test]
    fn alpha_omega_3_round_trip() {
        let alphabet = acts(&["a", "b"]);
        // every modifier assignment respecting mutual exclusion
        for code in 0..9u32 {
            let mut labels = BTreeSet::new();
            for (i, a) in alphabet.iter().enumerate() {
                match (code / 3u32.pow(i as u32)) % 3 {
                    1 => {
                        labels.insert(ModAction::bang(a.clone()));
                    }
                    2 => {
                        labels.insert(ModAction::query(a.clone()));
                    }
                    _ => {}
                }
            }
            let valuation: BTreeMap<PropToken, Truth3> = alpha_prime_3(&labels, &alphabet)
                .unwrap()
                .into_iter()
                .map(|(a, v)| (PropToken::new(a.as_str()).unwrap(), v))
                .collect();
            let back: BTreeSet<String> = omega_prime_3(&valuation).iter().map(ToString::to_string).collect();
            let labels: BTreeSet<String> = labels.iter().map(ToString::to_string).collect();
            assert_eq!(back, labels);
        }
    }
}
