//! Maximal paths as lassos (stem + optional cycle), their enumeration and
//! their suffixes.

use std::ops::ControlFlow;

use thiserror::Error;

use super::{LabelSet, StateId, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("unknown state #{0}")]
    UnknownState(u32),
    #[error("path is empty")]
    EmptyPath,
    #[error("path refers to transition #{0}, which does not exist")]
    UnknownTransition(usize),
    #[error("path is not connected at position {0}")]
    NotConnected(usize),
    #[error("cycle does not close")]
    OpenCycle,
    #[error("path is not maximal: it ends in a state with outgoing transitions")]
    NotMaximal,
}

/// A finitely represented path: `stem · cycle^ω`, or just `stem` when the
/// cycle is empty. Entries are indices into the structure's transition list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub start: StateId,
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// One suffix of a lasso; `is_proper` is false only for the lasso itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suffix {
    pub lasso: Lasso,
    pub is_proper: bool,
}

impl Lasso {
    /// The empty path anchored at `s`.
    pub fn empty(s: StateId) -> Self {
        Lasso { start: s, stem: Vec::new(), cycle: Vec::new() }
    }

    pub fn finite(start: StateId, stem: Vec<usize>) -> Self {
        Lasso { start, stem, cycle: Vec::new() }
    }

    pub fn is_infinite(&self) -> bool {
        !self.cycle.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.stem.is_empty() && self.cycle.is_empty()
    }

    /// Number of distinct suffix positions: `|stem|+|cycle|` for an infinite
    /// path, `|stem|+1` for a finite one (the last being the empty suffix).
    pub fn positions(&self) -> usize {
        if self.is_infinite() {
            self.stem.len() + self.cycle.len()
        } else {
            self.stem.len() + 1
        }
    }

    /// Transition taken at position `i`, `None` at the end of a finite path.
    pub fn transition_at(&self, i: usize) -> Option<usize> {
        if i < self.stem.len() {
            Some(self.stem[i])
        } else if self.is_infinite() {
            self.cycle.get(i - self.stem.len()).copied()
        } else {
            None
        }
    }

    /// Position following `i`. Only meaningful when `transition_at(i)` is some.
    pub fn next(&self, i: usize) -> usize {
        if self.is_infinite() && i + 1 == self.positions() {
            self.stem.len()
        } else {
            i + 1
        }
    }

    /// First state of the suffix at position `i`.
    pub fn state_at<T: TransitionSystem + ?Sized>(&self, ts: &T, i: usize) -> StateId {
        match self.transition_at(i) {
            Some(t) => ts.transitions()[t].src,
            None => match self.stem.last() {
                Some(&t) => ts.transitions()[t].dst,
                None => self.start,
            },
        }
    }

    pub fn first_state(&self) -> StateId {
        self.start
    }

    pub fn first_target<T: TransitionSystem + ?Sized>(&self, ts: &T) -> Result<StateId, PathError> {
        self.transition_at(0).map(|t| ts.transitions()[t].dst).ok_or(PathError::EmptyPath)
    }

    pub fn first_labels<T: TransitionSystem + ?Sized>(&self, ts: &T) -> Result<LabelSet, PathError> {
        self.transition_at(0).map(|t| ts.transitions()[t].labels).ok_or(PathError::EmptyPath)
    }

    /// Checks adjacency and cycle closure against `ts`.
    pub fn check<T: TransitionSystem + ?Sized>(&self, ts: &T) -> Result<(), PathError> {
        if self.start.index() >= ts.num_states() {
            return Err(PathError::UnknownState(self.start.0));
        }
        let all = ts.transitions();
        let mut at = self.start;
        for (i, &t) in self.stem.iter().chain(&self.cycle).enumerate() {
            let tr = all.get(t).ok_or(PathError::UnknownTransition(t))?;
            if tr.src != at {
                return Err(PathError::NotConnected(i));
            }
            at = tr.dst;
        }
        if let Some(&first) = self.cycle.first() {
            if all[first].src != at {
                return Err(PathError::OpenCycle);
            }
        }
        Ok(())
    }

    pub fn is_maximal<T: TransitionSystem + ?Sized>(&self, ts: &T) -> bool {
        self.is_infinite() || ts.is_deadlocked(self.state_at(ts, self.stem.len()))
    }

    /// Checks the lasso invariants plus maximality.
    pub fn check_maximal<T: TransitionSystem + ?Sized>(&self, ts: &T) -> Result<(), PathError> {
        self.check(ts)?;
        if self.is_maximal(ts) {
            Ok(())
        } else {
            Err(PathError::NotMaximal)
        }
    }

    /// The unique representation of the same path whose cycle is not a power
    /// of a shorter word and whose stem cannot be shortened by rotating the
    /// cycle backwards.
    pub fn canonical(&self) -> Lasso {
        let mut out = self.clone();
        if out.cycle.is_empty() {
            return out;
        }
        let k = out.cycle.len();
        let period = (1..=k)
            .find(|&d| k.is_multiple_of(d) && (d..k).all(|j| out.cycle[j] == out.cycle[j - d]))
            .unwrap_or(k);
        out.cycle.truncate(period);
        while let (Some(&s), Some(&c)) = (out.stem.last(), out.cycle.last()) {
            if s != c {
                break;
            }
            out.stem.pop();
            out.cycle.rotate_right(1);
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// The suffix at position `i` as a lasso of its own.
    pub fn suffix_at<T: TransitionSystem + ?Sized>(&self, ts: &T, i: usize) -> Lasso {
        let start = self.state_at(ts, i);
        if i < self.stem.len() {
            Lasso { start, stem: self.stem[i..].to_vec(), cycle: self.cycle.clone() }
        } else if self.is_infinite() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(i - self.stem.len());
            Lasso { start, stem: Vec::new(), cycle }
        } else {
            Lasso::empty(start)
        }
    }

    /// Total number of listed transitions.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }
}

/// All distinct suffixes of `sigma`, the path itself first.
pub fn suffixes<T: TransitionSystem + ?Sized>(ts: &T, sigma: &Lasso) -> Vec<Suffix> {
    let sigma = sigma.canonical();
    (0..sigma.positions())
        .map(|i| Suffix { lasso: sigma.suffix_at(ts, i), is_proper: i > 0 })
        .collect()
}

/// Visits every maximal path from `s` of at most `bound` transitions
/// (stem + cycle), each once in canonical form. The visitor may stop early.
pub fn for_each_mu_path<T, F>(ts: &T, s: StateId, bound: usize, mut visit: F) -> Result<(), PathError>
where
    T: TransitionSystem + ?Sized,
    F: FnMut(&Lasso) -> ControlFlow<()>,
{
    if s.index() >= ts.num_states() {
        return Err(PathError::UnknownState(s.0));
    }
    let succ = ts.successors();
    let trans = ts.transitions();
    // states[i] = state at position i of the current prefix
    let mut states = vec![s];
    let mut path: Vec<usize> = Vec::new();
    // explicit DFS stack of (depth, next successor slot)
    let mut cursor: Vec<usize> = vec![0];

    // Emission for the node reached by `path`.
    let mut emit = |path: &[usize], states: &[StateId]| -> ControlFlow<()> {
        let end = *states.last().unwrap();
        if succ[end.index()].is_empty() {
            return visit(&Lasso::finite(s, path.to_vec()));
        }
        for i in 0..path.len() {
            if states[i] == end {
                let lasso = Lasso { start: s, stem: path[..i].to_vec(), cycle: path[i..].to_vec() };
                if lasso.is_canonical() {
                    visit(&lasso)?;
                }
            }
        }
        ControlFlow::Continue(())
    };

    if emit(&path, &states).is_break() {
        return Ok(());
    }
    while let Some(slot) = cursor.last_mut() {
        let at = *states.last().unwrap();
        let outs = &succ[at.index()];
        if path.len() >= bound || *slot >= outs.len() {
            cursor.pop();
            if path.pop().is_some() {
                states.pop();
            }
            continue;
        }
        let t = outs[*slot];
        *slot += 1;
        path.push(t);
        states.push(trans[t].dst);
        cursor.push(0);
        if emit(&path, &states).is_break() {
            return Ok(());
        }
    }
    Ok(())
}

/// Collects [`for_each_mu_path`] into a vector.
pub fn mu_paths<T: TransitionSystem + ?Sized>(ts: &T, s: StateId, bound: usize) -> Result<Vec<Lasso>, PathError> {
    let mut out = Vec::new();
    for_each_mu_path(ts, s, bound, |l| {
        out.push(l.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
