//! Exact existential path quantification for star formulas.
//!
//! The path formula is lowered to a small temporal core (`Next` and `Until`
//! with an action predicate on the step taken). A product node is a state
//! together with a guess `g` of every obligation's value, "the path goes on
//! with a step satisfying the predicate and the argument holds next". Edges
//! keep the guesses consistent with the successor node; the values of all
//! subformulas at a node then follow locally. A node starts a real path if
//! it reaches a deadlocked node (finite path) or a nontrivial SCC in which
//! every pending `Until` meets its right operand somewhere (infinite path).

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;

use crate::structures::{LabelSet, Lasso, Model, StateId};

use super::ir::{AId, Ir, PId, PNode, SId};
use super::CheckError;

/// Products are `|S| · 2^k`; beyond this `k` they stop being practical.
pub(crate) const MAX_OBLIGATIONS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pred {
    Any,
    Has(usize),
    Chi(AId),
    NotChi(AId),
}

type LId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum LNode {
    True,
    Atom(SId),
    Not(LId),
    And(LId, LId),
    Next(Pred, LId),
    /// `right ∨ (left ∧ step satisfies pred ∧ self holds next)`, least.
    Until(Pred, LId, LId),
}

#[derive(Default)]
struct Ltl {
    nodes: Vec<LNode>,
    ids: HashMap<LNode, LId>,
    lowered: HashMap<PId, LId>,
}

impl Ltl {
    fn mk(&mut self, n: LNode) -> LId {
        if let LNode::Not(x) = n {
            if let LNode::Not(y) = self.nodes[x] {
                return y;
            }
        }
        *self.ids.entry(n).or_insert_with(|| {
            self.nodes.push(n);
            self.nodes.len() - 1
        })
    }

    fn not(&mut self, x: LId) -> LId {
        self.mk(LNode::Not(x))
    }

    fn and(&mut self, x: LId, y: LId) -> LId {
        self.mk(LNode::And(x, y))
    }

    fn or(&mut self, x: LId, y: LId) -> LId {
        let (nx, ny) = (self.not(x), self.not(y));
        let both = self.and(nx, ny);
        self.not(both)
    }

    fn lower(&mut self, ir: &Ir, pid: PId) -> LId {
        if let Some(&l) = self.lowered.get(&pid) {
            return l;
        }
        let l = match ir.p[pid] {
            PNode::Embed(s) => self.mk(LNode::Atom(s)),
            PNode::Not(p) => {
                let x = self.lower(ir, p);
                self.not(x)
            }
            PNode::And(p, q) => {
                let (x, y) = (self.lower(ir, p), self.lower(ir, q));
                self.and(x, y)
            }
            PNode::X(p) => {
                let x = self.lower(ir, p);
                self.mk(LNode::Next(Pred::Any, x))
            }
            PNode::Xact(a, p) => {
                let x = self.lower(ir, p);
                self.mk(LNode::Next(Pred::Has(a), x))
            }
            PNode::U(p, q) => {
                let (x, y) = (self.lower(ir, p), self.lower(ir, q));
                self.mk(LNode::Until(Pred::Any, x, y))
            }
            PNode::W(p, q) => {
                // ¬(p W q) = ¬q U (¬p ∧ ¬q)
                let (x, y) = (self.lower(ir, p), self.lower(ir, q));
                let (nx, ny) = (self.not(x), self.not(y));
                let stop = self.and(nx, ny);
                let u = self.mk(LNode::Until(Pred::Any, ny, stop));
                self.not(u)
            }
            PNode::Xchi(c, s) => {
                let a = self.mk(LNode::Atom(s));
                self.mk(LNode::Next(Pred::Chi(c), a))
            }
            PNode::Uchi(f, c, c2, g) => self.uchi(f, c, c2, g),
            PNode::Wchi(f, c, c2, g) => {
                let u = self.uchi(f, c, c2, g);
                // globally: φ everywhere and every step satisfies χ
                let fa = self.mk(LNode::Atom(f));
                let nf = self.not(fa);
                let t = self.mk(LNode::True);
                let bad_step = self.mk(LNode::Next(Pred::NotChi(c), t));
                let violation = self.or(nf, bad_step);
                let eventually = self.mk(LNode::Until(Pred::Any, t, violation));
                let globally = self.not(eventually);
                self.or(u, globally)
            }
        };
        self.lowered.insert(pid, l);
        l
    }

    fn uchi(&mut self, f: SId, c: AId, c2: AId, g: SId) -> LId {
        let fa = self.mk(LNode::Atom(f));
        let ga = self.mk(LNode::Atom(g));
        let exit = self.mk(LNode::Next(Pred::Chi(c2), ga));
        let right = self.and(fa, exit);
        self.mk(LNode::Until(Pred::Chi(c), fa, right))
    }
}

pub(crate) struct ProductResult {
    pub sat: Vec<bool>,
    /// A witness lasso per satisfying state, filled only on request.
    pub witnesses: Vec<Option<Lasso>>,
}

#[derive(Clone, Copy, Default)]
struct NodeInfo {
    /// Bit `e`: value of obligation `e`'s argument (the `Until` itself for
    /// an until obligation).
    args: u32,
    /// Untils that hold here.
    untils: u32,
    /// Untils whose right operand holds here.
    rights: u32,
    root: bool,
}

pub(crate) fn exists<M: Model + ?Sized>(
    model: &M,
    ir: &Ir,
    memo: &[Option<Vec<bool>>],
    succ: &[Vec<usize>],
    pid: PId,
    want_witnesses: bool,
) -> Result<ProductResult, CheckError> {
    let mut ltl = Ltl::default();
    let root = ltl.lower(ir, pid);
    let nodes = &ltl.nodes;

    // obligation index per node
    let mut entry = vec![usize::MAX; nodes.len()];
    let mut preds = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        if let LNode::Next(p, _) | LNode::Until(p, _, _) = n {
            entry[i] = preds.len();
            preds.push(*p);
        }
    }
    let k = preds.len();
    if k > MAX_OBLIGATIONS {
        return Err(CheckError::TooManyObligations(k));
    }
    let guesses = 1usize << k;
    let n = model.num_states();
    let atom = |s: SId, state: usize| memo[s].as_ref().expect("atoms evaluated before the product")[state];

    let mut info = vec![NodeInfo::default(); n * guesses];
    let mut vals = vec![false; nodes.len()];
    for s in 0..n {
        let dead = succ[s].is_empty();
        for g in 0..guesses {
            if dead && g != 0 {
                continue;
            }
            let mut ni = NodeInfo::default();
            for (i, node) in nodes.iter().enumerate() {
                vals[i] = match *node {
                    LNode::True => true,
                    LNode::Atom(a) => atom(a, s),
                    LNode::Not(x) => !vals[x],
                    LNode::And(x, y) => vals[x] && vals[y],
                    LNode::Next(_, _) => g >> entry[i] & 1 == 1,
                    LNode::Until(_, l, r) => vals[r] || (vals[l] && g >> entry[i] & 1 == 1),
                };
                match *node {
                    LNode::Next(_, x) => ni.args |= (vals[x] as u32) << entry[i],
                    LNode::Until(_, _, r) => {
                        let bit = 1u32 << entry[i];
                        if vals[i] {
                            ni.args |= bit;
                            ni.untils |= bit;
                        }
                        if vals[r] {
                            ni.rights |= bit;
                        }
                    }
                    _ => {}
                }
            }
            ni.root = vals[root];
            info[s * guesses + g] = ni;
        }
    }

    let pred_holds = |p: Pred, labels: LabelSet| match p {
        Pred::Any => true,
        Pred::Has(a) => labels.contains(a),
        Pred::Chi(c) => ir.eval_action(c, labels),
        Pred::NotChi(c) => !ir.eval_action(c, labels),
    };

    let mut graph: DiGraph<(), usize, u32> = DiGraph::with_capacity(n * guesses, 0);
    for _ in 0..n * guesses {
        graph.add_node(());
    }
    for (ti, t) in model.transitions().iter().enumerate() {
        let mut mask = 0u32;
        for (e, p) in preds.iter().enumerate() {
            if pred_holds(*p, t.labels) {
                mask |= 1 << e;
            }
        }
        let (src, dst) = (t.src.index(), t.dst.index());
        let dst_guesses = if succ[dst].is_empty() { 1 } else { guesses };
        for g2 in 0..dst_guesses {
            let g = (mask & info[dst * guesses + g2].args) as usize;
            graph.add_edge(NodeIndex::new(src * guesses + g), NodeIndex::new(dst * guesses + g2), ti);
        }
    }

    // seeds: deadlocked end points and fulfilling SCCs
    let mut seed = vec![false; n * guesses];
    let mut component = vec![usize::MAX; n * guesses];
    let sccs = tarjan_scc(&graph);
    for (ci, scc) in sccs.iter().enumerate() {
        for v in scc {
            component[v.index()] = ci;
        }
        let nontrivial = scc.len() > 1 || graph.find_edge(scc[0], scc[0]).is_some();
        if !nontrivial {
            let v = scc[0].index();
            if succ[v / guesses].is_empty() && v % guesses == 0 {
                seed[v] = true;
            }
            continue;
        }
        let (mut untils, mut rights) = (0u32, 0u32);
        for v in scc {
            untils |= info[v.index()].untils;
            rights |= info[v.index()].rights;
        }
        if untils & !rights == 0 {
            for v in scc {
                seed[v.index()] = true;
            }
        }
    }

    let mut good = seed.clone();
    let mut queue: VecDeque<NodeIndex> = (0..good.len()).filter(|&v| good[v]).map(NodeIndex::new).collect();
    while let Some(v) = queue.pop_front() {
        for u in graph.neighbors_directed(v, Direction::Incoming) {
            if !good[u.index()] {
                good[u.index()] = true;
                queue.push_back(u);
            }
        }
    }

    let mut sat = vec![false; n];
    let mut witnesses = vec![None; n];
    for s in 0..n {
        let start = (0..guesses).map(|g| s * guesses + g).find(|&v| good[v] && info[v].root);
        if let Some(v) = start {
            sat[s] = true;
            if want_witnesses {
                witnesses[s] = Some(witness(&graph, &seed, &good, &component, &sccs, s, v));
            }
        }
    }
    Ok(ProductResult { sat, witnesses })
}

/// Shortest edge path from `from` to the first node accepted by `target`,
/// moving only through nodes accepted by `allowed`.
fn bfs(
    graph: &DiGraph<(), usize, u32>,
    from: usize,
    allowed: impl Fn(usize) -> bool,
    target: impl Fn(usize) -> bool,
    at_least_one_step: bool,
) -> (usize, Vec<usize>) {
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = std::collections::HashSet::from([from]);
    if !at_least_one_step && target(from) {
        return (from, Vec::new());
    }
    while let Some(v) = queue.pop_front() {
        for e in graph.edges(NodeIndex::new(v)) {
            let u = e.target().index();
            if !allowed(u) {
                continue;
            }
            if target(u) {
                let mut steps = vec![*e.weight()];
                let mut at = v;
                while at != from {
                    let (p, t) = parent[&at];
                    steps.push(t);
                    at = p;
                }
                steps.reverse();
                return (u, steps);
            }
            if seen.insert(u) {
                parent.insert(u, (v, *e.weight()));
                queue.push_back(u);
            }
        }
    }
    unreachable!("target reachable by construction")
}

fn witness(
    graph: &DiGraph<(), usize, u32>,
    seed: &[bool],
    good: &[bool],
    component: &[usize],
    sccs: &[Vec<NodeIndex>],
    state: usize,
    start: usize,
) -> Lasso {
    let (entry, stem) = bfs(graph, start, |u| good[u], |u| seed[u], false);
    let members = &sccs[component[entry]];
    let is_cycle = members.len() > 1 || graph.find_edge(members[0], members[0]).is_some();
    if !is_cycle {
        return Lasso::finite(StateId::from(state), stem);
    }
    let c = component[entry];
    let mut cycle = Vec::new();
    let mut at = entry;
    for m in members.iter().map(|m| m.index()).filter(|&m| m != entry) {
        let (reached, steps) = bfs(graph, at, |u| component[u] == c, |u| u == m, false);
        cycle.extend(steps);
        at = reached;
    }
    let (_, back) = bfs(graph, at, |u| component[u] == c, |u| u == entry, at == entry);
    cycle.extend(back);
    Lasso { start: StateId::from(state), stem, cycle }.canonical()
}
