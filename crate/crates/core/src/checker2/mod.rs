//! Two-valued model checking of the CTL/ACTL/UCTL families and their star
//! variants on KS, LTS and KTS.
//!
//! Three engines share one compiled formula arena:
//! * a labeling engine with least/greatest fixpoints for the non-star base
//!   operators (also used for star formulas of that flat shape),
//! * an exact product engine for arbitrary star path formulas, and
//! * literal enumeration of lassos up to a length bound, which serves as the
//!   reference oracle.
//!
//! Path formulas are always evaluated on an explicit lasso by the same
//! position-wise recurrences, whichever engine computed the state formulas.

mod ir;
mod product;

use std::ops::ControlFlow;

use thiserror::Error;

use crate::formulas::{conforms, GrammarViolation, LogicId, PathFormula, StateFormula};
use crate::structures::{for_each_mu_path, Lasso, Model, PathError, StateId, StructureKind, Transition};

use ir::{Ir, PId, PNode, SId, SNode};

/// Default cap on enumerated lasso length.
pub const DEFAULT_CEILING: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StarEngine {
    /// Product of the structure with the formula's obligations; exact.
    #[default]
    Product,
    /// Literal enumeration of lassos up to the bound.
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Replaces the computed lasso bound of the enumeration engine.
    pub lasso_bound_override: Option<usize>,
    pub ceiling: usize,
    pub star_engine: StarEngine,
    /// Re-checks every product witness on its lasso; a mismatch is an error.
    pub verify_witnesses: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { lasso_bound_override: None, ceiling: DEFAULT_CEILING, star_engine: StarEngine::Product, verify_witnesses: false }
    }
}

impl CheckConfig {
    /// Product engine with witness verification.
    pub fn oracle() -> Self {
        CheckConfig { verify_witnesses: true, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Set when enumeration stopped at the ceiling before the bound that
    /// guarantees completeness.
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("logic {logic} is interpreted over a {expected}, got a {actual}")]
    CarrierMismatch { logic: LogicId, expected: StructureKind, actual: StructureKind },
    #[error("formula does not conform to {logic}: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotConforming { logic: LogicId, violations: Vec<GrammarViolation> },
    #[error("{0} is not handled by this entry point")]
    WrongLogic(LogicId),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown state #{0}")]
    UnknownState(u32),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("ceiling {ceiling} is below the number of states {states}")]
    CeilingTooSmall { ceiling: usize, states: usize },
    #[error("path formula needs {0} obligations, more than the product engine supports")]
    TooManyObligations(usize),
    #[error("product witness from state #{state} does not satisfy the formula")]
    WitnessMismatch { state: u32, witness: Lasso },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Fixpoints for flat path formulas, `star_engine` for the rest.
    Symbolic,
    /// Enumeration everywhere.
    Enumerate,
}

/// Evaluates formulas over one model, memoizing every state subformula.
pub struct Checker<'m, M: Model + ?Sized> {
    model: &'m M,
    config: CheckConfig,
    mode: Mode,
    ir: Ir,
    memo: Vec<Option<Vec<bool>>>,
    succ: Vec<Vec<usize>>,
    bounded: bool,
}

impl<'m, M: Model + ?Sized> Checker<'m, M> {
    pub fn new(model: &'m M, config: CheckConfig) -> Result<Self, CheckError> {
        Self::with_mode(model, config, Mode::Symbolic)
    }

    /// A checker that decides every path quantifier by enumerating lassos.
    pub fn enumerating(model: &'m M, config: CheckConfig) -> Result<Self, CheckError> {
        Self::with_mode(model, config, Mode::Enumerate)
    }

    fn with_mode(model: &'m M, config: CheckConfig, mode: Mode) -> Result<Self, CheckError> {
        if config.ceiling < model.num_states() {
            return Err(CheckError::CeilingTooSmall { ceiling: config.ceiling, states: model.num_states() });
        }
        Ok(Checker { model, config, mode, ir: Ir::default(), memo: Vec::new(), succ: model.successors(), bounded: false })
    }

    /// True once any enumeration was cut short by the ceiling.
    pub fn bounded(&self) -> bool {
        self.bounded
    }

    /// Truth of `phi` in every state.
    pub fn sat(&mut self, phi: &StateFormula) -> Result<Vec<bool>, CheckError> {
        let sid = self.ir.state(self.model, phi)?;
        self.memo.resize(self.ir.s.len(), None);
        self.ensure(sid)?;
        Ok(self.memo[sid].clone().expect("ensured"))
    }

    pub fn holds(&mut self, s: StateId, phi: &StateFormula) -> Result<bool, CheckError> {
        if s.index() >= self.model.num_states() {
            return Err(CheckError::UnknownState(s.0));
        }
        Ok(self.sat(phi)?[s.index()])
    }

    /// Truth of `pi` on `sigma`. The lasso must be well formed but need not
    /// be maximal.
    pub fn path_holds(&mut self, sigma: &Lasso, pi: &PathFormula) -> Result<bool, CheckError> {
        sigma.check(self.model)?;
        let pid = self.ir.path(self.model, pi)?;
        self.memo.resize(self.ir.s.len(), None);
        self.ensure_embedded(pid)?;
        Ok(self.eval_lasso(pid, sigma)[0])
    }

    fn ensure_embedded(&mut self, pid: PId) -> Result<(), CheckError> {
        let mut embedded = Vec::new();
        self.ir.embedded_states(pid, &mut embedded);
        for s in embedded {
            self.ensure(s)?;
        }
        Ok(())
    }

    fn ensure(&mut self, sid: SId) -> Result<(), CheckError> {
        if self.memo[sid].is_some() {
            return Ok(());
        }
        let n = self.model.num_states();
        let v = match self.ir.s[sid] {
            SNode::True => vec![true; n],
            SNode::Prop(p) => (0..n).map(|s| self.model.holds(StateId::from(s), p)).collect(),
            SNode::Not(x) => {
                self.ensure(x)?;
                self.get(x).iter().map(|b| !b).collect()
            }
            SNode::And(x, y) => {
                self.ensure(x)?;
                self.ensure(y)?;
                self.get(x).iter().zip(self.get(y)).map(|(a, b)| *a && *b).collect()
            }
            SNode::Exists(p) => self.exists(p)?,
        };
        self.memo[sid] = Some(v);
        Ok(())
    }

    fn get(&self, sid: SId) -> &[bool] {
        self.memo[sid].as_deref().expect("state formula evaluated before use")
    }

    fn exists(&mut self, pid: PId) -> Result<Vec<bool>, CheckError> {
        self.ensure_embedded(pid)?;
        match self.mode {
            Mode::Enumerate => self.exists_enumerate(pid),
            Mode::Symbolic if self.ir.is_flat(pid) => Ok(self.exists_fixpoint(pid)),
            Mode::Symbolic => match self.config.star_engine {
                StarEngine::Enumerate => self.exists_enumerate(pid),
                StarEngine::Product => self.exists_product(pid),
            },
        }
    }

    // ---- fixpoint engine ----

    /// `Z(s) = base(s) ∨ (guard(s) ∧ Q t∈succ(s). step(t, Z))`, where a
    /// deadlocked state yields `weak` in place of the quantified part.
    /// Weak operators take the greatest fixpoint, the rest the least.
    fn solve(
        &self,
        weak: bool,
        universal: bool,
        base: &[bool],
        guard: &[bool],
        step: impl Fn(&Transition, &[bool]) -> bool,
    ) -> Vec<bool> {
        let trans = self.model.transitions();
        let mut z = vec![weak; base.len()];
        loop {
            let mut changed = false;
            for s in 0..z.len() {
                let outs = &self.succ[s];
                let quantified = if outs.is_empty() {
                    weak
                } else if universal {
                    outs.iter().all(|&t| step(&trans[t], &z))
                } else {
                    outs.iter().any(|&t| step(&trans[t], &z))
                };
                let v = base[s] || (guard[s] && quantified);
                if v != z[s] {
                    z[s] = v;
                    changed = true;
                }
            }
            if !changed {
                return z;
            }
        }
    }

    fn exists_fixpoint(&self, pid: PId) -> Vec<bool> {
        let mut p = pid;
        let mut negated = false;
        while let PNode::Not(q) = self.ir.p[p] {
            negated = !negated;
            p = q;
        }
        // E ¬b = ¬A b
        let universal = negated;
        let n = self.model.num_states();
        let none = vec![false; n];
        let all = vec![true; n];
        let embedded = |q: PId| match self.ir.p[q] {
            PNode::Embed(s) => self.get(s),
            _ => unreachable!("flat path formula"),
        };
        let ir = &self.ir;
        let z = match self.ir.p[p] {
            PNode::X(q) => {
                let f = embedded(q);
                self.solve(false, universal, &none, &all, |t, _| f[t.dst.index()])
            }
            PNode::Xact(a, q) => {
                let f = embedded(q);
                self.solve(false, universal, &none, &all, |t, _| t.labels.contains(a) && f[t.dst.index()])
            }
            PNode::Xchi(c, s) => {
                let f = self.get(s);
                self.solve(false, universal, &none, &all, |t, _| ir.eval_action(c, t.labels) && f[t.dst.index()])
            }
            PNode::U(q, r) | PNode::W(q, r) => {
                let weak = matches!(self.ir.p[p], PNode::W(..));
                self.solve(weak, universal, embedded(r), embedded(q), |t, z| z[t.dst.index()])
            }
            PNode::Uchi(f, c, c2, g) | PNode::Wchi(f, c, c2, g) => {
                let weak = matches!(self.ir.p[p], PNode::Wchi(..));
                let g = self.get(g);
                self.solve(weak, universal, &none, self.get(f), |t, z| {
                    (ir.eval_action(c2, t.labels) && g[t.dst.index()]) || (ir.eval_action(c, t.labels) && z[t.dst.index()])
                })
            }
            PNode::Embed(_) | PNode::And(..) | PNode::Not(_) => unreachable!("flat path formula"),
        };
        if negated {
            z.into_iter().map(|b| !b).collect()
        } else {
            z
        }
    }

    // ---- enumeration engine ----

    fn lasso_bound(&mut self, pid: PId) -> usize {
        let n = self.model.num_states();
        let closure = self.ir.closure_size(pid) as u32;
        let complete = n.saturating_mul(2usize.checked_pow(closure).unwrap_or(usize::MAX));
        let bound = self.config.lasso_bound_override.unwrap_or(complete.min(self.config.ceiling));
        if bound < complete {
            self.bounded = true;
        }
        bound
    }

    fn exists_enumerate(&mut self, pid: PId) -> Result<Vec<bool>, CheckError> {
        let bound = self.lasso_bound(pid);
        let mut out = vec![false; self.model.num_states()];
        for (s, slot) in out.iter_mut().enumerate() {
            for_each_mu_path(self.model, StateId::from(s), bound, |sigma| {
                if self.eval_lasso(pid, sigma)[0] {
                    *slot = true;
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
        }
        Ok(out)
    }

    // ---- product engine ----

    fn exists_product(&mut self, pid: PId) -> Result<Vec<bool>, CheckError> {
        let verify = self.config.verify_witnesses;
        let result = product::exists(self.model, &self.ir, &self.memo, &self.succ, pid, verify)?;
        if verify {
            for (s, witness) in result.witnesses.iter().enumerate() {
                let Some(w) = witness else { continue };
                let ok = w.check_maximal(self.model).is_ok() && self.eval_lasso(pid, w)[0];
                if !ok {
                    return Err(CheckError::WitnessMismatch { state: s as u32, witness: w.clone() });
                }
            }
        }
        Ok(result.sat)
    }

    // ---- path formulas on a lasso ----

    /// Truth of `pid` at every position of `sigma`. All embedded state
    /// formulas must already be evaluated.
    fn eval_lasso(&self, pid: PId, sigma: &Lasso) -> Vec<bool> {
        let positions = sigma.positions();
        let trans = self.model.transitions();
        let at: Vec<Position> = (0..positions)
            .map(|i| Position {
                state: sigma.state_at(self.model, i).index(),
                step: sigma.transition_at(i).map(|t| (trans[t], sigma.next(i))),
            })
            .collect();
        let mut memo = std::collections::HashMap::new();
        self.eval_positions(pid, &at, &mut memo)
    }

    fn eval_positions(&self, pid: PId, at: &[Position], memo: &mut std::collections::HashMap<PId, Vec<bool>>) -> Vec<bool> {
        if let Some(v) = memo.get(&pid) {
            return v.clone();
        }
        let ir = &self.ir;
        let v: Vec<bool> = match ir.p[pid] {
            PNode::Embed(s) => {
                let f = self.get(s);
                at.iter().map(|p| f[p.state]).collect()
            }
            PNode::Not(q) => self.eval_positions(q, at, memo).into_iter().map(|b| !b).collect(),
            PNode::And(q, r) => {
                let a = self.eval_positions(q, at, memo);
                let b = self.eval_positions(r, at, memo);
                a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
            }
            PNode::X(q) => {
                let a = self.eval_positions(q, at, memo);
                at.iter().map(|p| p.step.is_some_and(|(_, j)| a[j])).collect()
            }
            PNode::Xact(act, q) => {
                let a = self.eval_positions(q, at, memo);
                at.iter().map(|p| p.step.is_some_and(|(t, j)| t.labels.contains(act) && a[j])).collect()
            }
            PNode::Xchi(c, s) => {
                let f = self.get(s);
                at.iter().map(|p| p.step.is_some_and(|(t, _)| ir.eval_action(c, t.labels) && f[t.dst.index()])).collect()
            }
            PNode::U(q, r) => {
                let (a, b) = (self.eval_positions(q, at, memo), self.eval_positions(r, at, memo));
                sweep(at, false, |i, v| b[i] || (a[i] && at[i].step.is_some_and(|(_, j)| v[j])))
            }
            PNode::W(q, r) => {
                let (a, b) = (self.eval_positions(q, at, memo), self.eval_positions(r, at, memo));
                sweep(at, true, |i, v| b[i] || (a[i] && at[i].step.is_none_or(|(_, j)| v[j])))
            }
            PNode::Uchi(f, c, c2, g) | PNode::Wchi(f, c, c2, g) => {
                let weak = matches!(ir.p[pid], PNode::Wchi(..));
                let (f, g) = (self.get(f), self.get(g));
                sweep(at, weak, |i, v| {
                    f[at[i].state]
                        && match at[i].step {
                            None => weak,
                            Some((t, j)) => {
                                (ir.eval_action(c2, t.labels) && g[t.dst.index()]) || (ir.eval_action(c, t.labels) && v[j])
                            }
                        }
                })
            }
        };
        memo.insert(pid, v.clone());
        v
    }
}

#[derive(Clone, Copy)]
struct Position {
    state: usize,
    /// Transition taken here and the position it leads to.
    step: Option<(Transition, usize)>,
}

/// Backward sweeps from the bottom (`false`) or top (`true`) element until
/// the recurrence is stable.
fn sweep(at: &[Position], init: bool, f: impl Fn(usize, &[bool]) -> bool) -> Vec<bool> {
    let mut v = vec![init; at.len()];
    loop {
        let mut changed = false;
        for i in (0..at.len()).rev() {
            let x = f(i, &v);
            if x != v[i] {
                v[i] = x;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

fn check_logic<M: Model + ?Sized>(m: &M, phi: &StateFormula, logic: LogicId) -> Result<(), CheckError> {
    if logic == LogicId::Upml {
        return Err(CheckError::WrongLogic(logic));
    }
    if m.kind() != logic.carrier() {
        return Err(CheckError::CarrierMismatch { logic, expected: logic.carrier(), actual: m.kind() });
    }
    let violations = conforms(phi, logic);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CheckError::NotConforming { logic, violations })
    }
}

/// `σ ⊨ π` for a maximal path. Nested quantifiers use the product engine.
pub fn check_path<M: Model + ?Sized>(
    m: &M,
    sigma: &Lasso,
    pi: &PathFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<bool, CheckError> {
    sigma.check_maximal(m)?;
    check_path_lenient(m, sigma, pi, logic, config)
}

/// Like [`check_path`] without the maximality requirement; a finite path
/// is read as ending where it stops.
pub fn check_path_lenient<M: Model + ?Sized>(
    m: &M,
    sigma: &Lasso,
    pi: &PathFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<bool, CheckError> {
    check_logic(m, &StateFormula::exists(pi.clone()), logic)?;
    Checker::new(m, config.clone())?.path_holds(sigma, pi)
}

/// Non-star checking by fixpoints.
pub fn check_state<M: Model + ?Sized>(m: &M, s: StateId, phi: &StateFormula, logic: LogicId) -> Result<bool, CheckError> {
    if logic.is_star() {
        return Err(CheckError::WrongLogic(logic));
    }
    check_logic(m, phi, logic)?;
    Checker::new(m, CheckConfig::default())?.holds(s, phi)
}

/// Star checking with the engine chosen in `config`.
pub fn check_state_star<M: Model + ?Sized>(
    m: &M,
    s: StateId,
    phi: &StateFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<Verdict, CheckError> {
    if !logic.is_star() {
        return Err(CheckError::WrongLogic(logic));
    }
    check(m, s, phi, logic, config)
}

/// Dispatches on the logic.
pub fn check<M: Model + ?Sized>(
    m: &M,
    s: StateId,
    phi: &StateFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<Verdict, CheckError> {
    check_logic(m, phi, logic)?;
    let mut c = Checker::new(m, config.clone())?;
    let holds = c.holds(s, phi)?;
    Ok(Verdict { holds, bounded: c.bounded() })
}

/// Truth in every state at once.
pub fn sat_states<M: Model + ?Sized>(
    m: &M,
    phi: &StateFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<(Vec<bool>, bool), CheckError> {
    check_logic(m, phi, logic)?;
    let mut c = Checker::new(m, config.clone())?;
    let v = c.sat(phi)?;
    Ok((v, c.bounded()))
}

/// Reference semantics: every quantifier by lasso enumeration.
pub fn oracle_check_state<M: Model + ?Sized>(
    m: &M,
    s: StateId,
    phi: &StateFormula,
    logic: LogicId,
    config: &CheckConfig,
) -> Result<Verdict, CheckError> {
    check_logic(m, phi, logic)?;
    let mut c = Checker::enumerating(m, config.clone())?;
    let holds = c.holds(s, phi)?;
    Ok(Verdict { holds, bounded: c.bounded() })
}
