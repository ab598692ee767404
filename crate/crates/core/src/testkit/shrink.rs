//! Greedy counterexample minimisation.

use crate::formulas::{conforms, ActionFormula, PathFormula, StateFormula};
use crate::structures::{Lasso, StateId, Structure, Transition};

use super::{Anchor, Case, CaseFormula};

fn action_reductions(chi: &ActionFormula) -> Vec<ActionFormula> {
    match chi {
        ActionFormula::Tau | ActionFormula::Act(_) => vec![],
        ActionFormula::Not(x) => {
            let mut out = vec![(**x).clone()];
            out.extend(action_reductions(x).into_iter().map(ActionFormula::not));
            out
        }
        ActionFormula::And(x, y) => {
            let mut out = vec![(**x).clone(), (**y).clone()];
            out.extend(action_reductions(x).into_iter().map(|r| r.and((**y).clone())));
            out.extend(action_reductions(y).into_iter().map(|r| (**x).clone().and(r)));
            out
        }
    }
}

/// One-step simplifications of a state formula: a subtree replaced by a
/// same-sort child, or by `true`.
pub fn state_reductions(phi: &StateFormula) -> Vec<StateFormula> {
    let mut out = Vec::new();
    if *phi != StateFormula::True {
        out.push(StateFormula::True);
    }
    match phi {
        StateFormula::True | StateFormula::Prop(_) => {}
        StateFormula::Not(x) => {
            out.push((**x).clone());
            out.extend(state_reductions(x).into_iter().map(StateFormula::not));
        }
        StateFormula::And(x, y) => {
            out.push((**x).clone());
            out.push((**y).clone());
            out.extend(state_reductions(x).into_iter().map(|r| r.and((**y).clone())));
            out.extend(state_reductions(y).into_iter().map(|r| (**x).clone().and(r)));
        }
        StateFormula::Exists(pi) => {
            out.extend(pi.state_children());
            out.extend(path_reductions(pi).into_iter().map(StateFormula::exists));
        }
    }
    out
}

pub fn path_reductions(pi: &PathFormula) -> Vec<PathFormula> {
    let mut out = Vec::new();
    let sboxed = |s: &StateFormula| Box::new(s.clone());
    match pi {
        PathFormula::Embed(s) => out.extend(state_reductions(s).into_iter().map(StateFormula::embed)),
        PathFormula::Not(p) => {
            out.push((**p).clone());
            out.extend(path_reductions(p).into_iter().map(PathFormula::not));
        }
        PathFormula::X(p) => {
            out.push((**p).clone());
            out.extend(path_reductions(p).into_iter().map(PathFormula::x));
        }
        PathFormula::Xact(a, p) => {
            out.push((**p).clone());
            out.extend(path_reductions(p).into_iter().map(|r| PathFormula::xact(a.clone(), r)));
        }
        PathFormula::And(p, q) | PathFormula::U(p, q) | PathFormula::W(p, q) => {
            out.push((**p).clone());
            out.push((**q).clone());
            let rebuild = |l: PathFormula, r: PathFormula| match pi {
                PathFormula::And(..) => PathFormula::And(Box::new(l), Box::new(r)),
                PathFormula::U(..) => PathFormula::U(Box::new(l), Box::new(r)),
                _ => PathFormula::W(Box::new(l), Box::new(r)),
            };
            out.extend(path_reductions(p).into_iter().map(|r| rebuild(r, (**q).clone())));
            out.extend(path_reductions(q).into_iter().map(|r| rebuild((**p).clone(), r)));
        }
        PathFormula::Xchi(c, s) => {
            out.extend(state_reductions(s).into_iter().map(|r| PathFormula::Xchi(c.clone(), Box::new(r))));
            out.extend(action_reductions(c).into_iter().map(|r| PathFormula::Xchi(r, sboxed(s))));
        }
        PathFormula::Uchi(s, c, c2, t) | PathFormula::Wchi(s, c, c2, t) => {
            let until = matches!(pi, PathFormula::Uchi(..));
            let rebuild = |s: Box<StateFormula>, c: ActionFormula, c2: ActionFormula, t: Box<StateFormula>| {
                if until {
                    PathFormula::Uchi(s, c, c2, t)
                } else {
                    PathFormula::Wchi(s, c, c2, t)
                }
            };
            for r in state_reductions(s) {
                out.push(rebuild(Box::new(r), c.clone(), c2.clone(), sboxed(t)));
            }
            for r in state_reductions(t) {
                out.push(rebuild(sboxed(s), c.clone(), c2.clone(), Box::new(r)));
            }
            for r in action_reductions(c) {
                out.push(rebuild(sboxed(s), r, c2.clone(), sboxed(t)));
            }
            for r in action_reductions(c2) {
                out.push(rebuild(sboxed(s), c.clone(), r, sboxed(t)));
            }
        }
    }
    out
}

fn skeleton_mut(st: &mut Structure) -> (&mut Vec<String>, &mut Vec<Transition>) {
    match st {
        Structure::Ks(m) => (&mut m.states, &mut m.transitions),
        Structure::Lts(m) => (&mut m.states, &mut m.transitions),
        Structure::Kts(m) => (&mut m.states, &mut m.transitions),
        Structure::Kmts(m) => (&mut m.states, &mut m.transitions),
    }
}

fn remove_label_row(st: &mut Structure, s: usize) {
    match st {
        Structure::Ks(m) => {
            m.labeling.remove(s);
        }
        Structure::Kts(m) => {
            m.labeling.remove(s);
        }
        Structure::Kmts(m) => {
            m.labeling.remove(s);
        }
        Structure::Lts(_) => {}
    }
}

/// `st` without transition `i`; later transition indices shift down.
pub fn remove_transition(st: &Structure, i: usize) -> Structure {
    let mut out = st.clone();
    skeleton_mut(&mut out).1.remove(i);
    out
}

/// `st` without state `s` and its transitions, with the old-to-new
/// transition index map.
pub fn remove_state(st: &Structure, s: usize) -> (Structure, Vec<Option<usize>>) {
    let mut out = st.clone();
    let (states, transitions) = skeleton_mut(&mut out);
    states.remove(s);
    let mut remap = Vec::with_capacity(transitions.len());
    let mut kept = Vec::new();
    for t in transitions.iter() {
        if t.src.index() == s || t.dst.index() == s {
            remap.push(None);
            continue;
        }
        let fix = |x: StateId| StateId::from(if x.index() > s { x.index() - 1 } else { x.index() });
        remap.push(Some(kept.len()));
        kept.push(Transition { src: fix(t.src), dst: fix(t.dst), labels: t.labels });
    }
    *transitions = kept;
    remove_label_row(&mut out, s);
    (out, remap)
}

fn remap_path(sigma: &Lasso, remap: &[Option<usize>], start: Option<StateId>) -> Option<Lasso> {
    let map = |ts: &[usize]| ts.iter().map(|&t| remap[t]).collect::<Option<Vec<usize>>>();
    Some(Lasso { start: start?, stem: map(&sigma.stem)?, cycle: map(&sigma.cycle)? })
}

fn shift(s: StateId, removed: usize) -> Option<StateId> {
    match s.index() {
        i if i == removed => None,
        i if i > removed => Some(StateId::from(i - 1)),
        i => Some(StateId::from(i)),
    }
}

fn structure_candidates(case: &Case) -> Vec<Case> {
    let mut out = Vec::new();
    let ts = case.structure.as_transition_system();
    let (n, m) = (ts.num_states(), ts.transitions().len());
    for s in (0..n).rev() {
        if n == 1 {
            break;
        }
        let (structure, remap) = remove_state(&case.structure, s);
        let anchor = match &case.anchor {
            Anchor::State(a) => shift(*a, s).map(Anchor::State),
            Anchor::Path(sigma) => remap_path(sigma, &remap, shift(sigma.start, s)).map(Anchor::Path),
        };
        if let Some(anchor) = anchor {
            out.push(Case { structure, anchor, ..case.clone() });
        }
    }
    for i in (0..m).rev() {
        let remap: Vec<Option<usize>> = (0..m).map(|t| if t == i { None } else { Some(t - usize::from(t > i)) }).collect();
        let anchor = match &case.anchor {
            Anchor::State(a) => Some(Anchor::State(*a)),
            Anchor::Path(sigma) => remap_path(sigma, &remap, Some(sigma.start)).map(Anchor::Path),
        };
        if let Some(anchor) = anchor {
            out.push(Case { structure: remove_transition(&case.structure, i), anchor, ..case.clone() });
        }
    }
    out
}

fn formula_candidates(case: &Case) -> Vec<Case> {
    let formulas: Vec<CaseFormula> = match &case.formula {
        CaseFormula::State(phi) => state_reductions(phi)
            .into_iter()
            .filter(|r| conforms(r, case.logic).is_empty())
            .map(CaseFormula::State)
            .collect(),
        CaseFormula::Path(pi) => path_reductions(pi)
            .into_iter()
            .filter(|r| conforms(&StateFormula::exists(r.clone()), case.logic).is_empty())
            .map(CaseFormula::Path)
            .collect(),
    };
    formulas.into_iter().map(|formula| Case { formula, ..case.clone() }).collect()
}

/// Shrinks `case` to a local minimum of `still_fails`: no single formula
/// pruning or state/transition deletion keeps it failing.
pub fn shrink<F>(mut case: Case, mut still_fails: F) -> Case
where
    F: FnMut(&Case) -> bool,
{
    // Every accepted step strictly shrinks the case, so this terminates;
    // the cap only guards against pathological evaluators.
    for _ in 0..10_000 {
        let next = formula_candidates(&case)
            .into_iter()
            .chain(structure_candidates(&case))
            .find(|c| c.structure.validate().is_empty() && still_fails(c));
        match next {
            Some(c) => case = c,
            None => break,
        }
    }
    case
}
