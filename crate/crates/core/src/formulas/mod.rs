//! Formula syntax trees for the two-valued state/path/action logics and for
//! three-valued UPML, with per-logic grammar conformance and the derived
//! operators.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structures::{ActionToken, LabelSet, PropToken, StructureKind};

/// `{false, ⊥, true}`, ordered for display as `false < ⊥ < true`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth3 {
    False,
    Bot,
    True,
}

impl Truth3 {
    pub const ALL: [Truth3; 3] = [Truth3::False, Truth3::Bot, Truth3::True];

    pub fn as_str(self) -> &'static str {
        match self {
            Truth3::False => "false",
            Truth3::Bot => "bot",
            Truth3::True => "true",
        }
    }
}

impl From<bool> for Truth3 {
    fn from(b: bool) -> Self {
        if b {
            Truth3::True
        } else {
            Truth3::False
        }
    }
}

impl fmt::Display for Truth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Truth3 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "true" => Ok(Truth3::True),
            "false" => Ok(Truth3::False),
            "bot" | "⊥" => Ok(Truth3::Bot),
            other => Err(format!("`{other}` is not a truth value (expected true, false or bot)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicId {
    Ctl,
    CtlStar,
    Actl,
    ActlStar,
    Uctl,
    UctlStar,
    Upml,
}

impl LogicId {
    pub const ALL: [LogicId; 7] = [
        LogicId::Ctl,
        LogicId::CtlStar,
        LogicId::Actl,
        LogicId::ActlStar,
        LogicId::Uctl,
        LogicId::UctlStar,
        LogicId::Upml,
    ];

    pub fn is_star(self) -> bool {
        matches!(self, LogicId::CtlStar | LogicId::ActlStar | LogicId::UctlStar)
    }

    /// Whether atomic propositions may appear.
    pub fn has_props(self) -> bool {
        !matches!(self, LogicId::Actl | LogicId::ActlStar)
    }

    /// Whether action-indexed operators may appear.
    pub fn has_actions(self) -> bool {
        !matches!(self, LogicId::Ctl | LogicId::CtlStar)
    }

    /// The structure kind the logic is interpreted over.
    pub fn carrier(self) -> StructureKind {
        match self {
            LogicId::Ctl | LogicId::CtlStar => StructureKind::Ks,
            LogicId::Actl | LogicId::ActlStar => StructureKind::Lts,
            LogicId::Uctl | LogicId::UctlStar => StructureKind::Kts,
            LogicId::Upml => StructureKind::Kmts,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogicId::Ctl => "CTL",
            LogicId::CtlStar => "CTL*",
            LogicId::Actl => "ACTL",
            LogicId::ActlStar => "ACTL*",
            LogicId::Uctl => "UCTL",
            LogicId::UctlStar => "UCTL*",
            LogicId::Upml => "UPML",
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let upper = s.trim().to_ascii_uppercase().replace('*', "STAR");
        Ok(match upper.as_str() {
            "CTL" => LogicId::Ctl,
            "CTLSTAR" => LogicId::CtlStar,
            "ACTL" => LogicId::Actl,
            "ACTLSTAR" => LogicId::ActlStar,
            "UCTL" => LogicId::Uctl,
            "UCTLSTAR" => LogicId::UctlStar,
            "UPML" => LogicId::Upml,
            _ => return Err(format!("unknown logic `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionFormula {
    Tau,
    Act(ActionToken),
    Not(Box<ActionFormula>),
    And(Box<ActionFormula>, Box<ActionFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateFormula {
    True,
    Prop(PropToken),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Exists(Box<PathFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathFormula {
    Embed(Box<StateFormula>),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    X(Box<PathFormula>),
    Xact(ActionToken, Box<PathFormula>),
    U(Box<PathFormula>, Box<PathFormula>),
    W(Box<PathFormula>, Box<PathFormula>),
    Xchi(ActionFormula, Box<StateFormula>),
    Uchi(Box<StateFormula>, ActionFormula, ActionFormula, Box<StateFormula>),
    Wchi(Box<StateFormula>, ActionFormula, ActionFormula, Box<StateFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UpmlFormula {
    Prop(PropToken),
    Not(Box<UpmlFormula>),
    And(Box<UpmlFormula>, Box<UpmlFormula>),
    Ax(Box<UpmlFormula>),
    AxAct(ActionToken, Box<UpmlFormula>),
}

/// Either kind of top-level formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    State(StateFormula),
    Upml(UpmlFormula),
}

// ---------------------------------------------------------------------------
// constructors

fn prop_token(name: &str) -> PropToken {
    PropToken::new(name).unwrap_or_else(|e| panic!("invalid proposition name: {e}"))
}

fn action_token(name: &str) -> ActionToken {
    ActionToken::new(name).unwrap_or_else(|e| panic!("invalid action name: {e}"))
}

impl ActionFormula {
    /// Panics on an invalid name; for literals in code and tests.
    pub fn act(name: &str) -> Self {
        ActionFormula::Act(action_token(name))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        ActionFormula::Not(Box::new(self))
    }
    pub fn and(self, other: Self) -> Self {
        ActionFormula::And(Box::new(self), Box::new(other))
    }
    pub fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }

    pub fn actions(&self, out: &mut BTreeSet<ActionToken>) {
        match self {
            ActionFormula::Tau => {}
            ActionFormula::Act(a) => {
                out.insert(a.clone());
            }
            ActionFormula::Not(x) => x.actions(out),
            ActionFormula::And(x, y) => {
                x.actions(out);
                y.actions(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ActionFormula::Tau | ActionFormula::Act(_) => 1,
            ActionFormula::Not(x) => 1 + x.depth(),
            ActionFormula::And(x, y) => 1 + x.depth().max(y.depth()),
        }
    }
}

impl StateFormula {
    /// Panics on an invalid name; for literals in code and tests.
    pub fn prop(name: &str) -> Self {
        StateFormula::Prop(prop_token(name))
    }
    pub fn falsum() -> Self {
        StateFormula::True.not()
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        StateFormula::Not(Box::new(self))
    }
    pub fn and(self, other: Self) -> Self {
        StateFormula::And(Box::new(self), Box::new(other))
    }
    /// `¬(¬x ∧ ¬y)`
    pub fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }
    /// `¬(x ∧ ¬y)`
    pub fn implies(self, other: Self) -> Self {
        self.and(other.not()).not()
    }
    pub fn exists(pi: PathFormula) -> Self {
        StateFormula::Exists(Box::new(pi))
    }
    pub fn embed(self) -> PathFormula {
        PathFormula::Embed(Box::new(self))
    }

    /// Constructor count, atoms counting 1; `Exists` is transparent.
    pub fn depth(&self) -> usize {
        match self {
            StateFormula::True | StateFormula::Prop(_) => 1,
            StateFormula::Not(x) => 1 + x.depth(),
            StateFormula::And(x, y) => 1 + x.depth().max(y.depth()),
            StateFormula::Exists(p) => p.depth(),
        }
    }

    pub fn props(&self, out: &mut BTreeSet<PropToken>) {
        match self {
            StateFormula::True => {}
            StateFormula::Prop(p) => {
                out.insert(p.clone());
            }
            StateFormula::Not(x) => x.props(out),
            StateFormula::And(x, y) => {
                x.props(out);
                y.props(out);
            }
            StateFormula::Exists(p) => p.props(out),
        }
    }

    pub fn actions(&self, out: &mut BTreeSet<ActionToken>) {
        match self {
            StateFormula::True | StateFormula::Prop(_) => {}
            StateFormula::Not(x) => x.actions(out),
            StateFormula::And(x, y) => {
                x.actions(out);
                y.actions(out);
            }
            StateFormula::Exists(p) => p.actions(out),
        }
    }

    /// If this is `¬∃¬π`, returns `π`.
    pub fn as_forall(&self) -> Option<&PathFormula> {
        match self {
            StateFormula::Not(inner) => match inner.as_ref() {
                StateFormula::Exists(p) => match p.as_ref() {
                    PathFormula::Not(pi) => Some(pi),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Immediate state subformulas, in order (used by shrinking).
    pub fn children(&self) -> Vec<StateFormula> {
        match self {
            StateFormula::True | StateFormula::Prop(_) => vec![],
            StateFormula::Not(x) => vec![(**x).clone()],
            StateFormula::And(x, y) => vec![(**x).clone(), (**y).clone()],
            StateFormula::Exists(p) => p.state_children(),
        }
    }
}

impl PathFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PathFormula::Not(Box::new(self))
    }
    pub fn and(self, other: Self) -> Self {
        PathFormula::And(Box::new(self), Box::new(other))
    }
    pub fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }
    pub fn x(self) -> Self {
        PathFormula::X(Box::new(self))
    }
    pub fn xact(a: ActionToken, pi: Self) -> Self {
        PathFormula::Xact(a, Box::new(pi))
    }
    pub fn u(self, other: Self) -> Self {
        PathFormula::U(Box::new(self), Box::new(other))
    }
    pub fn w(self, other: Self) -> Self {
        PathFormula::W(Box::new(self), Box::new(other))
    }
    pub fn xchi(chi: ActionFormula, phi: StateFormula) -> Self {
        PathFormula::Xchi(chi, Box::new(phi))
    }
    pub fn uchi(phi: StateFormula, chi: ActionFormula, chi2: ActionFormula, phi2: StateFormula) -> Self {
        PathFormula::Uchi(Box::new(phi), chi, chi2, Box::new(phi2))
    }
    pub fn wchi(phi: StateFormula, chi: ActionFormula, chi2: ActionFormula, phi2: StateFormula) -> Self {
        PathFormula::Wchi(Box::new(phi), chi, chi2, Box::new(phi2))
    }

    /// Constructor count, atoms counting 1; `Embed` is transparent and
    /// action formulas are not counted.
    pub fn depth(&self) -> usize {
        match self {
            PathFormula::Embed(s) => s.depth(),
            PathFormula::Not(p) | PathFormula::X(p) | PathFormula::Xact(_, p) => 1 + p.depth(),
            PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => 1 + p.depth().max(q.depth()),
            PathFormula::Xchi(_, s) => 1 + s.depth(),
            PathFormula::Uchi(s, _, _, t) | PathFormula::Wchi(s, _, _, t) => 1 + s.depth().max(t.depth()),
        }
    }

    pub fn props(&self, out: &mut BTreeSet<PropToken>) {
        match self {
            PathFormula::Embed(s) | PathFormula::Xchi(_, s) => s.props(out),
            PathFormula::Not(p) | PathFormula::X(p) | PathFormula::Xact(_, p) => p.props(out),
            PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => {
                p.props(out);
                q.props(out);
            }
            PathFormula::Uchi(s, _, _, t) | PathFormula::Wchi(s, _, _, t) => {
                s.props(out);
                t.props(out);
            }
        }
    }

    pub fn actions(&self, out: &mut BTreeSet<ActionToken>) {
        match self {
            PathFormula::Embed(s) => s.actions(out),
            PathFormula::Not(p) | PathFormula::X(p) => p.actions(out),
            PathFormula::Xact(a, p) => {
                out.insert(a.clone());
                p.actions(out);
            }
            PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => {
                p.actions(out);
                q.actions(out);
            }
            PathFormula::Xchi(chi, s) => {
                chi.actions(out);
                s.actions(out);
            }
            PathFormula::Uchi(s, c, c2, t) | PathFormula::Wchi(s, c, c2, t) => {
                c.actions(out);
                c2.actions(out);
                s.actions(out);
                t.actions(out);
            }
        }
    }

    fn is_temporal(&self) -> bool {
        !matches!(self, PathFormula::Embed(_) | PathFormula::Not(_) | PathFormula::And(..))
    }

    /// State formulas reachable without crossing another temporal layer,
    /// used by the shrinker as replacement candidates.
    pub fn state_children(&self) -> Vec<StateFormula> {
        let mut out = Vec::new();
        self.collect_state_children(&mut out);
        out
    }

    fn collect_state_children(&self, out: &mut Vec<StateFormula>) {
        match self {
            PathFormula::Embed(s) | PathFormula::Xchi(_, s) => out.push((**s).clone()),
            PathFormula::Not(p) | PathFormula::X(p) | PathFormula::Xact(_, p) => p.collect_state_children(out),
            PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => {
                p.collect_state_children(out);
                q.collect_state_children(out);
            }
            PathFormula::Uchi(s, _, _, t) | PathFormula::Wchi(s, _, _, t) => {
                out.push((**s).clone());
                out.push((**t).clone());
            }
        }
    }
}

impl UpmlFormula {
    pub fn prop(name: &str) -> Self {
        UpmlFormula::Prop(prop_token(name))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        UpmlFormula::Not(Box::new(self))
    }
    pub fn and(self, other: Self) -> Self {
        UpmlFormula::And(Box::new(self), Box::new(other))
    }
    pub fn ax(self) -> Self {
        UpmlFormula::Ax(Box::new(self))
    }
    pub fn ax_act(a: &str, phi: Self) -> Self {
        UpmlFormula::AxAct(action_token(a), Box::new(phi))
    }

    pub fn depth(&self) -> usize {
        match self {
            UpmlFormula::Prop(_) => 1,
            UpmlFormula::Not(x) | UpmlFormula::Ax(x) | UpmlFormula::AxAct(_, x) => 1 + x.depth(),
            UpmlFormula::And(x, y) => 1 + x.depth().max(y.depth()),
        }
    }

    pub fn children(&self) -> Vec<UpmlFormula> {
        match self {
            UpmlFormula::Prop(_) => vec![],
            UpmlFormula::Not(x) | UpmlFormula::Ax(x) | UpmlFormula::AxAct(_, x) => vec![(**x).clone()],
            UpmlFormula::And(x, y) => vec![(**x).clone(), (**y).clone()],
        }
    }
}

// ---------------------------------------------------------------------------
// conformance

/// A construct that the target grammar cannot derive.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{logic}: {construct} is not allowed ({rule})")]
pub struct GrammarViolation {
    pub logic: LogicId,
    pub construct: String,
    pub rule: &'static str,
}

fn state_rule(logic: LogicId) -> &'static str {
    match logic {
        LogicId::Actl | LogicId::ActlStar => "state ::= true | !state | state & state | E path",
        _ => "state ::= p | true | !state | state & state | E path",
    }
}

fn path_rule(logic: LogicId) -> &'static str {
    match logic {
        LogicId::Ctl => "path ::= !path | X state | [state U state] | [state W state]",
        LogicId::Actl | LogicId::Uctl => {
            "path ::= !path | X state | X_a state | [state U state] | [state W state] \
             | X_{act} state | [state {act}U{act} state] | [state {act}W{act} state]"
        }
        LogicId::CtlStar => "path ::= state | !path | path & path | X path | [path U path]",
        LogicId::ActlStar | LogicId::UctlStar => {
            "path ::= state | !path | path & path | X path | X_a path | [path U path]"
        }
        LogicId::Upml => "UPML formulas use upml ::= p | !upml | upml & upml | AX upml | AX_a upml",
    }
}

struct Conformance {
    logic: LogicId,
    out: Vec<GrammarViolation>,
}

impl Conformance {
    fn flag(&mut self, construct: impl Into<String>, rule: &'static str) {
        self.out.push(GrammarViolation { logic: self.logic, construct: construct.into(), rule });
    }

    fn state(&mut self, phi: &StateFormula) {
        match phi {
            StateFormula::True => {}
            StateFormula::Prop(p) => {
                if !self.logic.has_props() {
                    self.flag(format!("proposition `{p}`"), state_rule(self.logic));
                }
            }
            StateFormula::Not(x) => self.state(x),
            StateFormula::And(x, y) => {
                self.state(x);
                self.state(y);
            }
            StateFormula::Exists(pi) => {
                if self.logic.is_star() {
                    self.star_path(pi)
                } else {
                    self.plain_path(pi)
                }
            }
        }
    }

    fn state_operand(&mut self, pi: &PathFormula, op: &str) {
        match pi {
            PathFormula::Embed(phi) => self.state(phi),
            _ => self.flag(format!("path formula as operand of {op}"), path_rule(self.logic)),
        }
    }

    fn plain_path(&mut self, pi: &PathFormula) {
        let rule = path_rule(self.logic);
        let actions = self.logic.has_actions();
        match pi {
            PathFormula::Not(p) => self.plain_path(p),
            PathFormula::Embed(_) => self.flag("state formula in path position", rule),
            PathFormula::And(..) => self.flag("path conjunction", rule),
            PathFormula::X(p) => self.state_operand(p, "X"),
            PathFormula::Xact(a, p) => {
                if !actions {
                    self.flag(format!("X_{a}"), rule);
                }
                self.state_operand(p, "X_a");
            }
            PathFormula::U(p, q) | PathFormula::W(p, q) => {
                self.state_operand(p, "U/W");
                self.state_operand(q, "U/W");
            }
            PathFormula::Xchi(_, s) => {
                if !actions {
                    self.flag("X_{act}", rule);
                }
                self.state(s);
            }
            PathFormula::Uchi(s, _, _, t) | PathFormula::Wchi(s, _, _, t) => {
                if !actions {
                    self.flag("action-indexed until", rule);
                }
                self.state(s);
                self.state(t);
            }
        }
    }

    fn star_path(&mut self, pi: &PathFormula) {
        let rule = path_rule(self.logic);
        match pi {
            PathFormula::Embed(phi) => self.state(phi),
            PathFormula::Not(p) | PathFormula::X(p) => self.star_path(p),
            PathFormula::And(p, q) | PathFormula::U(p, q) => {
                self.star_path(p);
                self.star_path(q);
            }
            PathFormula::Xact(a, p) => {
                if !self.logic.has_actions() {
                    self.flag(format!("X_{a}"), rule);
                }
                self.star_path(p);
            }
            PathFormula::W(..) => self.flag("W (not primitive in star logics)", rule),
            PathFormula::Xchi(..) | PathFormula::Uchi(..) | PathFormula::Wchi(..) => {
                self.flag("action-formula operator (derived in star logics; expand first)", rule)
            }
        }
    }
}

/// Grammar violations of `phi` under `logic`; empty iff it conforms.
pub fn conforms(phi: &StateFormula, logic: LogicId) -> Vec<GrammarViolation> {
    let mut c = Conformance { logic, out: Vec::new() };
    if logic == LogicId::Upml {
        c.flag("two-valued state formula", path_rule(logic));
    } else {
        c.state(phi);
    }
    c.out
}

// ---------------------------------------------------------------------------
// derived operators

/// `∀π = ¬∃¬π`
pub fn forall(pi: PathFormula) -> StateFormula {
    StateFormula::exists(pi.not()).not()
}

/// `α ⊨ χ` over a set of action tokens.
pub fn eval_action(labels: &BTreeSet<ActionToken>, chi: &ActionFormula) -> bool {
    match chi {
        ActionFormula::Tau => labels.is_empty(),
        ActionFormula::Act(a) => labels.contains(a),
        ActionFormula::Not(x) => !eval_action(labels, x),
        ActionFormula::And(x, y) => eval_action(labels, x) && eval_action(labels, y),
    }
}

/// `α ⊨ χ` over a label bitset, with action names resolved by `index`.
/// Actions outside the alphabet are never present.
pub fn eval_action_set(labels: LabelSet, chi: &ActionFormula, index: &dyn Fn(&ActionToken) -> Option<usize>) -> bool {
    match chi {
        ActionFormula::Tau => labels.is_empty(),
        ActionFormula::Act(a) => index(a).is_some_and(|i| labels.contains(i)),
        ActionFormula::Not(x) => !eval_action_set(labels, x, index),
        ActionFormula::And(x, y) => eval_action_set(labels, x, index) && eval_action_set(labels, y, index),
    }
}

/// `X_χ π = ⋁{⋀_{a∈α} X_a π | α ⊆ Act, α ⊨ χ}`, with subsets taken in
/// bitmask order over the sorted alphabet. `α = {}` contributes `X π`; an
/// empty disjunction is `¬true`.
pub fn expand_xchi(chi: &ActionFormula, pi: &PathFormula, alphabet: &BTreeSet<ActionToken>) -> PathFormula {
    let alphabet: Vec<&ActionToken> = alphabet.iter().collect();
    assert!(alphabet.len() < 20, "alphabet too large to expand X_chi");
    let mut disjuncts = Vec::new();
    for mask in 0u32..(1u32 << alphabet.len()) {
        let alpha: BTreeSet<ActionToken> =
            (0..alphabet.len()).filter(|i| mask & (1 << i) != 0).map(|i| alphabet[i].clone()).collect();
        if !eval_action(&alpha, chi) {
            continue;
        }
        let conj = alpha
            .into_iter()
            .map(|a| PathFormula::xact(a, pi.clone()))
            .reduce(PathFormula::and)
            .unwrap_or_else(|| pi.clone().x());
        disjuncts.push(conj);
    }
    disjuncts
        .into_iter()
        .reduce(PathFormula::or)
        .unwrap_or_else(|| StateFormula::falsum().embed())
}

/// `π _χU_χ′ π′ = (π ∧ X_χ true) U (π ∧ X_χ′ π′)`
pub fn expand_uchi_star(
    pi: &PathFormula,
    chi: &ActionFormula,
    chi2: &ActionFormula,
    pi2: &PathFormula,
    alphabet: &BTreeSet<ActionToken>,
) -> PathFormula {
    let left = pi.clone().and(expand_xchi(chi, &StateFormula::True.embed(), alphabet));
    let right = pi.clone().and(expand_xchi(chi2, pi2, alphabet));
    left.u(right)
}

/// `π _χW_χ′ π′ = (π _χU_χ′ π′) ∨ G(π ∧ X_χ true)`, the globally part
/// written `¬(true U ¬(π ∧ X_χ true))`.
pub fn expand_wchi_star(
    pi: &PathFormula,
    chi: &ActionFormula,
    chi2: &ActionFormula,
    pi2: &PathFormula,
    alphabet: &BTreeSet<ActionToken>,
) -> PathFormula {
    let until = expand_uchi_star(pi, chi, chi2, pi2, alphabet);
    let step = pi.clone().and(expand_xchi(chi, &StateFormula::True.embed(), alphabet));
    let globally = StateFormula::True.embed().u(step.not()).not();
    until.or(globally)
}

/// `EX φ = ¬AX¬φ`, `EX_a φ = ¬AX_a¬φ`.
pub fn derive_ex_upml(action: Option<&ActionToken>, phi: UpmlFormula) -> UpmlFormula {
    match action {
        None => phi.not().ax().not(),
        Some(a) => UpmlFormula::AxAct(a.clone(), Box::new(phi.not())).not(),
    }
}

/// Number of distinct temporal subterms of `pi`, not descending into
/// embedded state formulas.
pub fn closure_size(pi: &PathFormula) -> usize {
    fn walk<'a>(pi: &'a PathFormula, seen: &mut HashSet<&'a PathFormula>) {
        if pi.is_temporal() {
            seen.insert(pi);
        }
        match pi {
            PathFormula::Embed(_) | PathFormula::Xchi(..) | PathFormula::Uchi(..) | PathFormula::Wchi(..) => {}
            PathFormula::Not(p) | PathFormula::X(p) | PathFormula::Xact(_, p) => walk(p, seen),
            PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => {
                walk(p, seen);
                walk(q, seen);
            }
        }
    }
    let mut seen = HashSet::new();
    walk(pi, &mut seen);
    seen.len()
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_state(self))
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_path(self))
    }
}

impl fmt::Display for ActionFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_action(self))
    }
}

impl fmt::Display for UpmlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_upml(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::State(s) => s.fmt(f),
            Formula::Upml(u) => u.fmt(f),
        }
    }
}
