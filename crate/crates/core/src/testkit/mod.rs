//! Seeded generators and the differential harness: mapped structures and
//! formulas must agree with their sources, and the fixpoint checker must
//! agree with path enumeration.

mod gen;
mod shrink;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::checker2::{check, check_path, check_path_lenient, oracle_check_state, CheckConfig};
use crate::formulas::{Formula, LogicId, PathFormula, StateFormula};
use crate::mappings::{map_structure, MappingId};
use crate::parser::{format_lasso, parse_state, render_path, render_state, save_structure};
use crate::structures::{Ks, Kts, Lasso, Lts, Model, StateId, Structure, StructureKind};

pub use gen::{
    gen_formula_with, gen_path_with, gen_structure_with, Alphabet, FormulaGen, PathOp, DEADLOCK_PROBABILITY,
    MAX_OUT_DEGREE,
};
pub use shrink::{path_reductions, remove_state, remove_transition, shrink, state_reductions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub max_actions: usize,
    pub max_props: usize,
    pub max_formula_depth: usize,
    pub trials: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { seed: 0, max_states: 5, max_actions: 3, max_props: 3, max_formula_depth: 3, trials: 100 }
    }
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        GenParams { seed, ..self }
    }
    pub fn with_trials(self, trials: usize) -> Self {
        GenParams { trials, ..self }
    }
}

/// Independent stream per trial, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn gen_structure(kind: StructureKind, params: &GenParams) -> Structure {
    gen_structure_with(kind, params, &mut ChaCha8Rng::seed_from_u64(params.seed))
}

/// A formula over the full alphabet the bounds allow (`p`, `q`, ... and
/// `a`, `b`, ...).
pub fn gen_formula(logic: LogicId, params: &GenParams) -> Formula {
    let alphabet = Alphabet::from_params(params);
    gen_formula_with(logic, params, &alphabet, &mut ChaCha8Rng::seed_from_u64(params.seed))
}

/// Views a two-valued structure as a model; `None` for a KMTS.
pub fn as_model(st: &Structure) -> Option<&dyn Model> {
    match st {
        Structure::Ks(m) => Some(m),
        Structure::Lts(m) => Some(m),
        Structure::Kts(m) => Some(m),
        Structure::Kmts(_) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseFormula {
    State(StateFormula),
    Path(PathFormula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    State(StateId),
    Path(Lasso),
}

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub structure: Structure,
    pub logic: LogicId,
    pub formula: CaseFormula,
    pub anchor: Anchor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    State,
    Path,
}

/// Both sides of one comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub source: bool,
    pub target: bool,
    pub bounded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct XFailure {
    pub trial: usize,
    pub level: Level,
    pub logic: LogicId,
    pub structure: serde_json::Value,
    pub formula: String,
    pub state: Option<String>,
    pub path: Option<String>,
    pub source_verdict: Option<bool>,
    pub target_verdict: Option<bool>,
    /// Set when a side could not be evaluated at all.
    pub error: Option<String>,
    #[serde(skip)]
    pub case: Case,
}

#[derive(Clone, Debug, Serialize)]
pub struct XCheckReport {
    pub mapping: Option<MappingId>,
    pub mutated: bool,
    pub params: GenParams,
    pub trials: usize,
    /// Comparisons made; star mappings make two per trial.
    pub checks: usize,
    /// Comparisons where a side reported a truncated enumeration.
    pub bounded: usize,
    pub failures: Vec<XFailure>,
    #[serde(rename = "elapsed_seconds", serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl XCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure_trial(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.trial).min()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Default)]
struct TrialResult {
    checks: usize,
    bounded: usize,
    failures: Vec<XFailure>,
}

fn describe(case: &Case, trial: usize, outcome: Result<Outcome, String>) -> XFailure {
    let ts = case.structure.as_transition_system();
    let (level, formula) = match &case.formula {
        CaseFormula::State(phi) => (Level::State, render_state(phi)),
        CaseFormula::Path(pi) => (Level::Path, render_path(pi)),
    };
    let (state, path) = match &case.anchor {
        Anchor::State(s) => (Some(ts.state_name(*s).to_string()), None),
        Anchor::Path(sigma) => (None, Some(format_lasso(ts, sigma))),
    };
    let structure = serde_json::from_str(&save_structure(&case.structure)).expect("saved structures are JSON");
    let (source_verdict, target_verdict, error) = match outcome {
        Ok(o) => (Some(o.source), Some(o.target), None),
        Err(e) => (None, None, Some(e)),
    };
    XFailure { trial, level, logic: case.logic, structure, formula, state, path, source_verdict, target_verdict, error, case: case.clone() }
}

/// Runs `eval` on a case; a disagreement is shrunk, an error reported as is.
fn judge<F>(case: Case, trial: usize, eval: &F, out: &mut TrialResult)
where
    F: Fn(&Case) -> Result<Outcome, String>,
{
    out.checks += 1;
    match eval(&case) {
        Ok(o) if o.source == o.target => out.bounded += usize::from(o.bounded),
        Ok(o) => {
            out.bounded += usize::from(o.bounded);
            let small = shrink(case, |c| matches!(eval(c), Ok(o) if o.source != o.target));
            let outcome = eval(&small);
            out.failures.push(describe(&small, trial, outcome));
        }
        Err(e) => out.failures.push(describe(&case, trial, Err(e))),
    }
}

fn merge(mapping: Option<MappingId>, mutated: bool, params: &GenParams, trials: usize, results: Vec<TrialResult>, start: Instant) -> XCheckReport {
    let mut report = XCheckReport {
        mapping,
        mutated,
        params: *params,
        trials,
        checks: 0,
        bounded: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for r in results {
        report.checks += r.checks;
        report.bounded += r.bounded;
        report.failures.extend(r.failures);
    }
    report.failures.sort_by(|a, b| {
        (a.trial, a.level, &a.formula, a.state.as_deref(), a.path.as_deref())
            .cmp(&(b.trial, b.level, &b.formula, b.state.as_deref(), b.path.as_deref()))
    });
    report.elapsed = start.elapsed();
    report
}

/// Source and target verdicts of `case` under `mapping`.
pub fn evaluate_mapping(mapping: MappingId, mutated: bool, case: &Case) -> Result<Outcome, String> {
    let bundle = map_structure(mapping, &case.structure).map_err(|e| e.to_string())?.with_mutation(mutated);
    let source = as_model(&case.structure).ok_or("source is not two-valued")?;
    let target = as_model(&bundle.target).ok_or("target is not two-valued")?;
    let cfg = if mapping.is_star() { CheckConfig::oracle() } else { CheckConfig::default() };
    let (sl, tl) = (mapping.source_logic(), mapping.target_logic());
    match (&case.formula, &case.anchor) {
        (CaseFormula::State(phi), Anchor::State(s)) => {
            let mapped = bundle.map_formula(phi).map_err(|e| e.to_string())?;
            let a = check(source, *s, phi, sl, &cfg).map_err(|e| format!("source: {e}"))?;
            let b = check(target, bundle.state_image[s.index()], &mapped, tl, &cfg).map_err(|e| format!("target: {e}"))?;
            Ok(Outcome { source: a.holds, target: b.holds, bounded: a.bounded || b.bounded })
        }
        (CaseFormula::Path(pi), Anchor::Path(sigma)) => {
            let mapped = bundle.map_path_formula(pi).map_err(|e| e.to_string())?;
            let image = bundle.map_path(sigma).map_err(|e| e.to_string())?;
            let a = check_path(source, sigma, pi, sl, &cfg).map_err(|e| format!("source: {e}"))?;
            let b = check_path_lenient(target, &image, &mapped, tl, &cfg).map_err(|e| format!("target: {e}"))?;
            Ok(Outcome { source: a, target: b, bounded: false })
        }
        _ => Err("path formulas need a path anchor and state formulas a state".into()),
    }
}

fn mapping_trial(mapping: MappingId, mutated: bool, params: &GenParams, trial: usize) -> TrialResult {
    let mut rng = trial_rng(params.seed, trial);
    let structure = gen_structure_with(mapping.source_kind(), params, &mut rng);
    let alphabet = Alphabet::of(&structure);
    let logic = mapping.source_logic();
    let n = structure.as_transition_system().num_states();
    let mut g = FormulaGen { logic, alphabet: &alphabet, ops: PathOp::for_mapping(mapping), rng: &mut rng };
    let phi = g.state(params.max_formula_depth);
    let pi = mapping.is_star().then(|| g.path(params.max_formula_depth));
    let s = StateId::from(rng.gen_range(0..n));
    let eval = |c: &Case| evaluate_mapping(mapping, mutated, c);
    let mut out = TrialResult::default();
    let case = Case { structure: structure.clone(), logic, formula: CaseFormula::State(phi), anchor: Anchor::State(s) };
    judge(case, trial, &eval, &mut out);
    if let Some(pi) = pi {
        let start = StateId::from(rng.gen_range(0..n));
        let sigma = gen_path_with(structure.as_transition_system(), start, &mut rng);
        let case = Case { structure, logic, formula: CaseFormula::Path(pi), anchor: Anchor::Path(sigma) };
        judge(case, trial, &eval, &mut out);
    }
    out
}

fn run_xcheck(mapping: MappingId, params: &GenParams, mutated: bool) -> XCheckReport {
    let start = Instant::now();
    let results = (0..params.trials).into_par_iter().map(|t| mapping_trial(mapping, mutated, params, t)).collect();
    merge(Some(mapping), mutated, params, params.trials, results, start)
}

/// Checks that `mapping` preserves truth on `params.trials` random
/// instances: state formulas at an anchor state, and for star mappings
/// also path formulas along a random maximal path.
pub fn xcheck(mapping: MappingId, params: &GenParams) -> XCheckReport {
    run_xcheck(mapping, params, false)
}

/// [`xcheck`] against the deliberately broken translation table; a sound
/// harness reports failures.
pub fn xcheck_mutant(mapping: MappingId, params: &GenParams) -> XCheckReport {
    run_xcheck(mapping, params, true)
}

/// Fixpoint verdict as source, path-enumeration verdict as target.
pub fn evaluate_engines(case: &Case) -> Result<Outcome, String> {
    let model = as_model(&case.structure).ok_or("not a two-valued structure")?;
    let (CaseFormula::State(phi), Anchor::State(s)) = (&case.formula, &case.anchor) else {
        return Err("engine comparison takes state formulas".into());
    };
    let cfg = CheckConfig::default();
    let a = check(model, *s, phi, case.logic, &cfg).map_err(|e| format!("fixpoint: {e}"))?;
    let b = oracle_check_state(model, *s, phi, case.logic, &cfg).map_err(|e| format!("enumeration: {e}"))?;
    Ok(Outcome { source: a.holds, target: b.holds, bounded: a.bounded || b.bounded })
}

pub const NON_STAR_LOGICS: [LogicId; 3] = [LogicId::Ctl, LogicId::Actl, LogicId::Uctl];

/// Single deadlocked state per carrier, with formulas touching every
/// deadlock rule.
pub fn deadlock_corpus() -> Vec<Case> {
    let ks = Ks::new(&["d"], &["p"]).and_then(|k| k.with_label("d", "p", true)).expect("valid");
    let lts = Lts::new(&["d"], &["a"]).expect("valid");
    let kts = Kts::new(&["d"], &["a"], &["p"]).and_then(|k| k.with_label("d", "p", true)).expect("valid");
    let ctl = ["E X true", "A X p", "!E X !p", "E[p U p]", "A[p U p]", "E[p U !true]", "E[p W !true]", "A[!true W p]", "A[p W !p]"];
    let actl = [
        "E X true",
        "E X_a true",
        "!E X_{tau} !true",
        "E[true U true]",
        "E[true {a}U{a} true]",
        "E[true {a}W{tau} true]",
        "E[!true {a}W{a} true]",
        "E X_{!a} true",
    ];
    let uctl = ["E X_{a} p", "E[p {a}U{tau} p]", "E[p {tau}W{a} !p]", "E X_a p", "E[p W p]", "!E X !p"];
    let mut out = Vec::new();
    let mut add = |st: Structure, logic: LogicId, texts: &[&str]| {
        for t in texts {
            let phi = parse_state(t, logic).expect("corpus formulas parse");
            out.push(Case { structure: st.clone(), logic, formula: CaseFormula::State(phi), anchor: Anchor::State(StateId(0)) });
        }
    };
    add(Structure::Ks(ks), LogicId::Ctl, &ctl);
    add(Structure::Lts(lts), LogicId::Actl, &actl);
    add(Structure::Kts(kts), LogicId::Uctl, &uctl);
    out
}

/// Fixpoint checking against exhaustive path enumeration, `params.trials`
/// instances per non-star logic plus the deadlock corpus. Failures carry
/// the trial number `usize::MAX` when they come from the corpus.
pub fn oracle_vs_fixpoint(params: &GenParams) -> XCheckReport {
    let start = Instant::now();
    let jobs: Vec<(LogicId, usize)> = NON_STAR_LOGICS.iter().flat_map(|&l| (0..params.trials).map(move |t| (l, t))).collect();
    let mut results: Vec<TrialResult> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(logic, _))| {
            let mut rng = trial_rng(params.seed, i);
            let structure = gen_structure_with(logic.carrier(), params, &mut rng);
            let alphabet = Alphabet::of(&structure);
            let phi = match gen_formula_with(logic, params, &alphabet, &mut rng) {
                Formula::State(phi) => phi,
                Formula::Upml(_) => unreachable!("non-star logics yield state formulas"),
            };
            let s = StateId::from(rng.gen_range(0..structure.as_transition_system().num_states()));
            let mut out = TrialResult::default();
            let case = Case { structure, logic, formula: CaseFormula::State(phi), anchor: Anchor::State(s) };
            judge(case, i, &evaluate_engines, &mut out);
            out
        })
        .collect();
    let mut corpus = TrialResult::default();
    for case in deadlock_corpus() {
        judge(case, usize::MAX, &evaluate_engines, &mut corpus);
    }
    results.push(corpus);
    merge(None, false, params, jobs.len(), results, start)
}

#[cfg(test)]
mod tests;
