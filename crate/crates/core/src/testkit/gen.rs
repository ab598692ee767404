//! Random structures, formulas and paths.
//!
//! Production weights (relative, per sort):
//!
//! | sort   | production                      | weight |
//! |--------|---------------------------------|--------|
//! | state  | atom (`true` or a proposition)  | 2      |
//! | state  | `!φ`                            | 1      |
//! | state  | `φ & φ`                         | 2      |
//! | state  | `E π`                           | 4      |
//! | path   | `!π` / `π & π` (star)           | 1 / 1  |
//! | path   | embedded state (star)           | 2      |
//! | path   | each temporal operator          | 2      |
//! | action | `tau` / `a` / `!χ` / `χ & χ`    | 1/3/1/1|
//! | upml   | `p` / `!φ` / `φ&φ` / AX / AX_a  | 1/1/1/2/2 |
//!
//! Atoms are forced once the depth budget reaches 1.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formulas::{ActionFormula, Formula, LogicId, PathFormula, StateFormula, Truth3, UpmlFormula};
use crate::mappings::MappingId;
use crate::structures::{
    ActionToken, Kmts, Ks, Kts, LabelSet, Lasso, Lts, ModAction, PropToken, StateId, Structure, StructureKind,
    Transition, TransitionSystem,
};

use super::GenParams;

/// Probability that a generated state has no outgoing transitions.
pub const DEADLOCK_PROBABILITY: f64 = 0.25;
/// Upper bound on outgoing transitions of a live state.
pub const MAX_OUT_DEGREE: usize = 2;

fn action_name(i: usize) -> String {
    match i {
        0..=2 => ["a", "b", "c"][i].to_string(),
        _ => format!("a{i}"),
    }
}

fn prop_name(i: usize) -> String {
    match i {
        0..=2 => ["p", "q", "r"][i].to_string(),
        _ => format!("p{i}"),
    }
}

/// Propositions and actions a formula may mention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    pub props: Vec<PropToken>,
    pub actions: Vec<ActionToken>,
}

impl Alphabet {
    /// The full alphabet the size bounds allow.
    pub fn from_params(params: &GenParams) -> Self {
        Alphabet {
            props: (0..params.max_props).map(|i| PropToken::new(prop_name(i)).expect("valid")).collect(),
            actions: (0..params.max_actions).map(|i| ActionToken::new(action_name(i)).expect("valid")).collect(),
        }
    }

    pub fn of(structure: &Structure) -> Self {
        let actions = match structure {
            Structure::Ks(_) => vec![],
            Structure::Lts(m) => m.actions.clone(),
            Structure::Kts(m) => m.actions.clone(),
            Structure::Kmts(m) => m.underlying_actions(),
        };
        Alphabet { props: structure.props().to_vec(), actions }
    }
}

fn random_labels<R: Rng>(rng: &mut R, n: usize) -> LabelSet {
    let mut l = LabelSet::EMPTY;
    // Silent transitions stay frequent: each label is present with p = 0.4.
    for i in 0..n {
        if rng.gen_bool(0.4) {
            l.insert(i);
        }
    }
    l
}

fn skeleton<R: Rng>(rng: &mut R, n: usize, alphabet: usize) -> Vec<Transition> {
    let mut out = Vec::new();
    for s in 0..n {
        if rng.gen_bool(DEADLOCK_PROBABILITY) {
            continue;
        }
        let degree = rng.gen_range(1..=MAX_OUT_DEGREE.min(n));
        let mut dsts: Vec<usize> = (0..n).collect();
        dsts.shuffle(rng);
        for &d in &dsts[..degree] {
            out.push(Transition::new(s, random_labels(rng, alphabet), d));
        }
    }
    out
}

/// A valid structure of the given kind within the bounds of `params`.
pub fn gen_structure_with<R: Rng>(kind: StructureKind, params: &GenParams, rng: &mut R) -> Structure {
    let n = rng.gen_range(1..=params.max_states.max(1));
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let n_act = rng.gen_range(1..=params.max_actions.max(1));
    let n_prop = rng.gen_range(1..=params.max_props.max(1));
    let actions: Vec<ActionToken> = (0..n_act).map(|i| ActionToken::new(action_name(i)).expect("valid")).collect();
    let props: Vec<PropToken> = (0..n_prop).map(|i| PropToken::new(prop_name(i)).expect("valid")).collect();
    let bools = |rng: &mut R| -> Vec<Vec<bool>> { (0..n).map(|_| (0..n_prop).map(|_| rng.gen_bool(0.5)).collect()).collect() };
    match kind {
        StructureKind::Ks => {
            let mut transitions = skeleton(rng, n, 0);
            for t in &mut transitions {
                t.labels = LabelSet::EMPTY;
            }
            let labeling = bools(rng);
            Structure::Ks(Ks { states, props, transitions, labeling })
        }
        StructureKind::Lts => Structure::Lts(Lts { states, transitions: skeleton(rng, n, n_act), actions }),
        StructureKind::Kts => {
            let transitions = skeleton(rng, n, n_act);
            let labeling = bools(rng);
            Structure::Kts(Kts { states, actions, props, transitions, labeling })
        }
        StructureKind::Kmts => {
            let mod_actions: Vec<ModAction> = actions
                .into_iter()
                .map(|a| if rng.gen_bool(0.5) { ModAction::bang(a) } else { ModAction::query(a) })
                .collect();
            let transitions = skeleton(rng, n, n_act);
            let labeling = (0..n).map(|_| (0..n_prop).map(|_| *Truth3::ALL.choose(rng).expect("nonempty")).collect()).collect();
            Structure::Kmts(Kmts { states, mod_actions, props, transitions, labeling })
        }
    }
}

/// Temporal operators a generated non-star path formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathOp {
    X,
    Xact,
    U,
    W,
    Xchi,
    Uchi,
    Wchi,
}

impl PathOp {
    /// Everything the logic's grammar derives at the path level.
    pub fn for_logic(logic: LogicId) -> &'static [PathOp] {
        use PathOp::*;
        match logic {
            LogicId::Ctl => &[X, U, W],
            LogicId::Actl | LogicId::Uctl => &[X, Xact, U, W, Xchi, Uchi, Wchi],
            LogicId::CtlStar => &[X, U],
            LogicId::ActlStar | LogicId::UctlStar => &[X, Xact, U],
            LogicId::Upml => &[],
        }
    }

    /// The operators a mapping has translation clauses for.
    pub fn for_mapping(mapping: MappingId) -> &'static [PathOp] {
        use PathOp::*;
        match mapping {
            MappingId::KsPrime | MappingId::Ks2Prime | MappingId::Lts2Prime => &[Xchi, Uchi, Wchi],
            m => PathOp::for_logic(m.source_logic()),
        }
    }
}

/// Formula generator over a fixed alphabet.
pub struct FormulaGen<'a, R: Rng> {
    pub logic: LogicId,
    pub alphabet: &'a Alphabet,
    pub ops: &'a [PathOp],
    pub rng: &'a mut R,
}

impl<R: Rng> FormulaGen<'_, R> {
    fn atom(&mut self) -> StateFormula {
        if self.logic.has_props() && !self.alphabet.props.is_empty() && self.rng.gen_bool(0.75) {
            StateFormula::Prop(self.alphabet.props.choose(self.rng).expect("nonempty").clone())
        } else {
            StateFormula::True
        }
    }

    pub fn state(&mut self, depth: usize) -> StateFormula {
        if depth <= 1 {
            return self.atom();
        }
        let quantifier = if self.ops.is_empty() { 0 } else { 4 };
        match weighted(self.rng, &[2, 1, 2, quantifier]) {
            0 => self.atom(),
            1 => self.state(depth - 1).not(),
            2 => self.state(depth - 1).and(self.state(depth - 1)),
            _ => StateFormula::exists(self.path(depth)),
        }
    }

    /// A path formula of depth at most `depth` (at least 2 for non-star
    /// logics, whose path formulas are all temporal).
    pub fn path(&mut self, depth: usize) -> PathFormula {
        if self.logic.is_star() {
            self.star_path(depth)
        } else {
            self.plain_path(depth.max(2))
        }
    }

    fn action_token(&mut self) -> Option<ActionToken> {
        self.alphabet.actions.choose(self.rng).cloned()
    }

    pub fn action(&mut self, depth: usize) -> ActionFormula {
        let has = !self.alphabet.actions.is_empty();
        let choice = if depth <= 1 {
            weighted(self.rng, &[1, if has { 3 } else { 0 }])
        } else {
            weighted(self.rng, &[1, if has { 3 } else { 0 }, 1, 1])
        };
        match choice {
            0 => ActionFormula::Tau,
            1 => ActionFormula::Act(self.action_token().expect("nonempty")),
            2 => self.action(depth - 1).not(),
            _ => self.action(depth - 1).and(self.action(depth - 1)),
        }
    }

    fn plain_path(&mut self, depth: usize) -> PathFormula {
        let mut ops: Vec<PathOp> = self.ops.to_vec();
        if self.alphabet.actions.is_empty() {
            ops.retain(|o| *o != PathOp::Xact);
        }
        // A negation needs room for a temporal operator underneath.
        if depth > 2 && self.rng.gen_bool(0.15) {
            return self.plain_path(depth - 1).not();
        }
        let d = depth - 1;
        match *ops.choose(self.rng).expect("operator set is nonempty") {
            PathOp::X => self.state(d).embed().x(),
            PathOp::Xact => {
                let a = self.action_token().expect("nonempty");
                PathFormula::xact(a, self.state(d).embed())
            }
            PathOp::U => self.state(d).embed().u(self.state(d).embed()),
            PathOp::W => self.state(d).embed().w(self.state(d).embed()),
            PathOp::Xchi => PathFormula::xchi(self.action(2), self.state(d)),
            PathOp::Uchi => PathFormula::uchi(self.state(d), self.action(2), self.action(2), self.state(d)),
            PathOp::Wchi => PathFormula::wchi(self.state(d), self.action(2), self.action(2), self.state(d)),
        }
    }

    fn star_path(&mut self, depth: usize) -> PathFormula {
        if depth <= 1 {
            return self.atom().embed();
        }
        let mut ops: Vec<PathOp> = self.ops.to_vec();
        if self.alphabet.actions.is_empty() {
            ops.retain(|o| *o != PathOp::Xact);
        }
        let temporal = if ops.is_empty() { 0 } else { 2 * ops.len() as u32 };
        let d = depth - 1;
        match weighted(self.rng, &[2, 1, 1, temporal]) {
            // Boolean structure lives at the path level: `(p & q)` in path
            // position parses as a path conjunction, so only atoms and
            // quantified formulas are embedded.
            0 if self.rng.gen_bool(0.5) => StateFormula::exists(self.star_path(depth)).embed(),
            0 => self.atom().embed(),
            1 => self.star_path(d).not(),
            2 => self.star_path(d).and(self.star_path(d)),
            _ => match *ops.choose(self.rng).expect("nonempty") {
                PathOp::X => self.star_path(d).x(),
                PathOp::Xact => {
                    let a = self.action_token().expect("nonempty");
                    PathFormula::xact(a, self.star_path(d))
                }
                _ => self.star_path(d).u(self.star_path(d)),
            },
        }
    }

    pub fn upml(&mut self, depth: usize) -> UpmlFormula {
        let atom = |g: &mut Self| UpmlFormula::Prop(g.alphabet.props.choose(g.rng).expect("UPML needs propositions").clone());
        if depth <= 1 {
            return atom(self);
        }
        let ax_act = if self.alphabet.actions.is_empty() { 0 } else { 2 };
        match weighted(self.rng, &[1, 1, 1, 2, ax_act]) {
            0 => atom(self),
            1 => self.upml(depth - 1).not(),
            2 => self.upml(depth - 1).and(self.upml(depth - 1)),
            3 => self.upml(depth - 1).ax(),
            _ => {
                let a = self.action_token().expect("nonempty");
                UpmlFormula::AxAct(a, Box::new(self.upml(depth - 1)))
            }
        }
    }
}

fn weighted<R: Rng>(rng: &mut R, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    assert!(total > 0, "no production available");
    let mut x = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    unreachable!()
}

/// A conforming formula of `logic` over `alphabet`.
pub fn gen_formula_with<R: Rng>(logic: LogicId, params: &GenParams, alphabet: &Alphabet, rng: &mut R) -> Formula {
    let mut g = FormulaGen { logic, alphabet, ops: PathOp::for_logic(logic), rng };
    if logic == LogicId::Upml {
        Formula::Upml(g.upml(params.max_formula_depth))
    } else {
        Formula::State(g.state(params.max_formula_depth))
    }
}

/// A random maximal path from `start`: a walk that ends at a deadlock or
/// closes a loop on a revisited state.
pub fn gen_path_with<R: Rng>(ts: &dyn TransitionSystem, start: StateId, rng: &mut R) -> Lasso {
    let n = ts.num_states();
    let mut visited = vec![start];
    let mut taken: Vec<usize> = Vec::new();
    let mut at = start;
    let succ = ts.successors();
    loop {
        let Some(&t) = succ[at.index()].choose(rng) else {
            return Lasso::finite(start, taken);
        };
        taken.push(t);
        at = ts.transitions()[t].dst;
        let seen: Vec<usize> = (0..visited.len()).filter(|&i| visited[i] == at).collect();
        visited.push(at);
        if let Some(&j) = seen.choose(rng) {
            if taken.len() >= 2 * n || rng.gen_bool(0.75) {
                let cycle = taken.split_off(j);
                return Lasso { start, stem: taken, cycle }.canonical();
            }
        }
    }
}
