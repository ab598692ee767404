//! Hash-consed formula arena with proposition and action names resolved to
//! indices of one model.

use std::collections::HashMap;

use crate::formulas::{ActionFormula, PathFormula, StateFormula};
use crate::structures::{LabelSet, Model};

use super::CheckError;

pub(crate) type SId = usize;
pub(crate) type PId = usize;
pub(crate) type AId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum SNode {
    True,
    Prop(usize),
    Not(SId),
    And(SId, SId),
    Exists(PId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PNode {
    Embed(SId),
    Not(PId),
    And(PId, PId),
    X(PId),
    Xact(usize, PId),
    U(PId, PId),
    W(PId, PId),
    Xchi(AId, SId),
    Uchi(SId, AId, AId, SId),
    Wchi(SId, AId, AId, SId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum ANode {
    Tau,
    Act(usize),
    Not(AId),
    And(AId, AId),
}

#[derive(Default)]
pub(crate) struct Ir {
    pub s: Vec<SNode>,
    pub p: Vec<PNode>,
    pub a: Vec<ANode>,
    s_ids: HashMap<SNode, SId>,
    p_ids: HashMap<PNode, PId>,
    a_ids: HashMap<ANode, AId>,
}

fn intern<N: Copy + Eq + std::hash::Hash>(nodes: &mut Vec<N>, ids: &mut HashMap<N, usize>, n: N) -> usize {
    *ids.entry(n).or_insert_with(|| {
        nodes.push(n);
        nodes.len() - 1
    })
}

impl Ir {
    pub fn state<M: Model + ?Sized>(&mut self, m: &M, phi: &StateFormula) -> Result<SId, CheckError> {
        let node = match phi {
            StateFormula::True => SNode::True,
            StateFormula::Prop(p) => {
                SNode::Prop(m.prop_index(p.as_str()).ok_or_else(|| CheckError::UnknownProp(p.to_string()))?)
            }
            StateFormula::Not(x) => SNode::Not(self.state(m, x)?),
            StateFormula::And(x, y) => SNode::And(self.state(m, x)?, self.state(m, y)?),
            StateFormula::Exists(pi) => SNode::Exists(self.path(m, pi)?),
        };
        Ok(intern(&mut self.s, &mut self.s_ids, node))
    }

    pub fn path<M: Model + ?Sized>(&mut self, m: &M, pi: &PathFormula) -> Result<PId, CheckError> {
        let act = |a: &crate::structures::ActionToken| {
            m.action_index(a.as_str()).ok_or_else(|| CheckError::UnknownAction(a.to_string()))
        };
        let node = match pi {
            PathFormula::Embed(s) => PNode::Embed(self.state(m, s)?),
            PathFormula::Not(p) => PNode::Not(self.path(m, p)?),
            PathFormula::And(p, q) => PNode::And(self.path(m, p)?, self.path(m, q)?),
            PathFormula::X(p) => PNode::X(self.path(m, p)?),
            PathFormula::Xact(a, p) => PNode::Xact(act(a)?, self.path(m, p)?),
            PathFormula::U(p, q) => PNode::U(self.path(m, p)?, self.path(m, q)?),
            PathFormula::W(p, q) => PNode::W(self.path(m, p)?, self.path(m, q)?),
            PathFormula::Xchi(chi, s) => PNode::Xchi(self.action(m, chi)?, self.state(m, s)?),
            PathFormula::Uchi(s, c, c2, t) => {
                PNode::Uchi(self.state(m, s)?, self.action(m, c)?, self.action(m, c2)?, self.state(m, t)?)
            }
            PathFormula::Wchi(s, c, c2, t) => {
                PNode::Wchi(self.state(m, s)?, self.action(m, c)?, self.action(m, c2)?, self.state(m, t)?)
            }
        };
        Ok(intern(&mut self.p, &mut self.p_ids, node))
    }

    pub fn action<M: Model + ?Sized>(&mut self, m: &M, chi: &ActionFormula) -> Result<AId, CheckError> {
        let node = match chi {
            ActionFormula::Tau => ANode::Tau,
            ActionFormula::Act(a) => {
                ANode::Act(m.action_index(a.as_str()).ok_or_else(|| CheckError::UnknownAction(a.to_string()))?)
            }
            ActionFormula::Not(x) => ANode::Not(self.action(m, x)?),
            ActionFormula::And(x, y) => ANode::And(self.action(m, x)?, self.action(m, y)?),
        };
        Ok(intern(&mut self.a, &mut self.a_ids, node))
    }

    pub fn eval_action(&self, chi: AId, labels: LabelSet) -> bool {
        match self.a[chi] {
            ANode::Tau => labels.is_empty(),
            ANode::Act(i) => labels.contains(i),
            ANode::Not(x) => !self.eval_action(x, labels),
            ANode::And(x, y) => self.eval_action(x, labels) && self.eval_action(y, labels),
        }
    }

    /// State formulas that `pi` reads directly (not through another `Exists`).
    pub fn embedded_states(&self, pi: PId, out: &mut Vec<SId>) {
        match self.p[pi] {
            PNode::Embed(s) | PNode::Xchi(_, s) => out.push(s),
            PNode::Not(p) | PNode::X(p) | PNode::Xact(_, p) => self.embedded_states(p, out),
            PNode::And(p, q) | PNode::U(p, q) | PNode::W(p, q) => {
                self.embedded_states(p, out);
                self.embedded_states(q, out);
            }
            PNode::Uchi(s, _, _, t) | PNode::Wchi(s, _, _, t) => {
                out.push(s);
                out.push(t);
            }
        }
    }

    /// Distinct temporal subterms of `pi`, not crossing into state formulas.
    pub fn closure_size(&self, pi: PId) -> usize {
        fn walk(ir: &Ir, p: PId, seen: &mut Vec<PId>) {
            let temporal = !matches!(ir.p[p], PNode::Embed(_) | PNode::Not(_) | PNode::And(..));
            if temporal && !seen.contains(&p) {
                seen.push(p);
            }
            match ir.p[p] {
                PNode::Not(q) | PNode::X(q) | PNode::Xact(_, q) => walk(ir, q, seen),
                PNode::And(q, r) | PNode::U(q, r) | PNode::W(q, r) => {
                    walk(ir, q, seen);
                    walk(ir, r, seen);
                }
                _ => {}
            }
        }
        let mut seen = Vec::new();
        walk(self, pi, &mut seen);
        seen.len()
    }

    /// Whether `pi` is a (possibly negated) base operator over state
    /// operands, the shape the fixpoint engine handles.
    pub fn is_flat(&self, pi: PId) -> bool {
        let mut p = pi;
        while let PNode::Not(q) = self.p[p] {
            p = q;
        }
        let embedded = |q: PId| matches!(self.p[q], PNode::Embed(_));
        match self.p[p] {
            PNode::X(q) | PNode::Xact(_, q) => embedded(q),
            PNode::U(q, r) | PNode::W(q, r) => embedded(q) && embedded(r),
            PNode::Xchi(..) | PNode::Uchi(..) | PNode::Wchi(..) => true,
            PNode::Embed(_) | PNode::And(..) | PNode::Not(_) => false,
        }
    }
}
