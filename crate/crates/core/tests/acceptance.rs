//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use tempobridge::checker2::{check, CheckConfig};
use tempobridge::checker3::{definite_kts, eval_ex_upml, eval_upml, eval_upml_kts, kleene_and, kleene_not, kleene_or};
use tempobridge::mappings::map_structure;
use tempobridge::parser::{parse_formula, parse_state, parse_upml, render_formula};
use tempobridge::structures::{Kmts, Modifier};
use tempobridge::testkit::{
    gen_formula, gen_formula_with, gen_structure_with, oracle_vs_fixpoint, trial_rng, xcheck, xcheck_mutant, Alphabet,
    GenParams, XCheckReport,
};
use tempobridge::{Formula, Ks, LogicId, MappingId, StateId, Structure, StructureKind, Truth3};

const SEED: u64 = 20_241;

struct Outcome {
    pass: bool,
    detail: String,
}

fn summarize(r: &XCheckReport) -> String {
    let mut s = format!("{}: {} failures/{} checks", r.mapping.map_or("-", |m| m.name()), r.failures.len(), r.checks);
    if r.bounded > 0 {
        s.push_str(&format!(", {} bounded", r.bounded));
    }
    s
}

fn show_first_failure(r: &XCheckReport) {
    if let Some(f) = r.failures.first() {
        eprintln!(
            "    {} counterexample ({:?} level): formula `{}` at {} | source {:?}, target {:?}{}\n      structure {}",
            r.mapping.map_or("-", |m| m.name()),
            f.level,
            f.formula,
            f.state.as_deref().or(f.path.as_deref()).unwrap_or("?"),
            f.source_verdict,
            f.target_verdict,
            f.error.as_deref().map(|e| format!(", error {e}")).unwrap_or_default(),
            f.structure
        );
    }
}

fn params(trials: usize) -> GenParams {
    GenParams { seed: SEED, trials, ..GenParams::default() }
}

fn non_star() -> Outcome {
    let start = Instant::now();
    let reports: Vec<XCheckReport> = MappingId::NON_STAR.iter().map(|&m| xcheck(m, &params(500))).collect();
    let elapsed = start.elapsed();
    reports.iter().for_each(show_first_failure);
    let pass = reports.iter().all(XCheckReport::passed) && elapsed < Duration::from_secs(300);
    let parts: Vec<String> = reports.iter().map(summarize).collect();
    Outcome { pass, detail: format!("{}; {:.1}s", parts.join("; "), elapsed.as_secs_f64()) }
}

fn star() -> Outcome {
    let reports: Vec<XCheckReport> = MappingId::STAR.iter().map(|&m| xcheck(m, &params(300))).collect();
    reports.iter().for_each(show_first_failure);
    let pass = reports.iter().all(|r| r.passed() && r.bounded == 0);
    let parts: Vec<String> = reports.iter().map(summarize).collect();
    Outcome { pass, detail: parts.join("; ") }
}

fn engines() -> Outcome {
    let r = oracle_vs_fixpoint(&params(1000));
    show_first_failure(&r);
    Outcome { pass: r.passed(), detail: format!("{} instances, {} disagreements, {} bounded", r.checks, r.failures.len(), r.bounded) }
}

fn kleene() -> Outcome {
    use Truth3::*;
    // Rows x, columns y, in the order f, ⊥, t.
    let and = [[False, False, False], [False, Bot, Bot], [False, Bot, True]];
    let or = [[False, Bot, True], [Bot, Bot, True], [True, True, True]];
    let not = [True, Bot, False];
    let mut mismatches = 0;
    for (i, x) in Truth3::ALL.into_iter().enumerate() {
        mismatches += usize::from(kleene_not(x) != not[i]);
        for (j, y) in Truth3::ALL.into_iter().enumerate() {
            mismatches += usize::from(kleene_and(x, y) != and[i][j]);
            mismatches += usize::from(kleene_or(x, y) != or[i][j]);
            mismatches += usize::from(kleene_not(kleene_and(x, y)) != kleene_or(kleene_not(x), kleene_not(y)));
            mismatches += usize::from(kleene_not(kleene_or(x, y)) != kleene_and(kleene_not(x), kleene_not(y)));
        }
    }
    Outcome { pass: mismatches == 0, detail: format!("{mismatches} mismatches over 9 pairs per table and De Morgan") }
}

fn upml() -> Outcome {
    let p = params(500);
    let (mut dual_bad, mut bot, mut reduce_bad) = (0, 0, 0);
    for t in 0..p.trials {
        let mut rng = trial_rng(SEED, t);
        let Structure::Kmts(k) = gen_structure_with(StructureKind::Kmts, &p, &mut rng) else { unreachable!() };
        let alphabet = Alphabet::of(&Structure::Kmts(k.clone()));
        let Formula::Upml(phi) = gen_formula_with(LogicId::Upml, &p, &alphabet, &mut rng) else { unreachable!() };
        let s = StateId::from(rng.gen_range(0..k.states.len()));
        let a = alphabet.actions.choose(&mut rng).unwrap().clone();
        let table = eval_ex_upml(&k, s, &a, &phi).unwrap();
        let derived = kleene_not(eval_upml(&k, s, &tempobridge::UpmlFormula::AxAct(a, Box::new(phi.clone().not()))).unwrap());
        dual_bad += usize::from(table != derived);

        let definite = make_definite(k, &mut rng);
        let kts = definite_kts(&definite).expect("definite by construction");
        let v = eval_upml(&definite, s, &phi).unwrap();
        bot += usize::from(v == Truth3::Bot);
        reduce_bad += usize::from((v == Truth3::True) != eval_upml_kts(&kts, s, &phi).unwrap());
    }
    Outcome {
        pass: dual_bad + bot + reduce_bad == 0,
        detail: format!("EX_a vs !AX_a!: {dual_bad} mismatches; definite: {bot} bot, {reduce_bad} two-valued mismatches (500 each)"),
    }
}

fn make_definite<R: Rng>(mut k: Kmts, rng: &mut R) -> Kmts {
    for m in &mut k.mod_actions {
        m.modifier = Modifier::Bang;
    }
    for v in k.labeling.iter_mut().flatten() {
        if *v == Truth3::Bot {
            *v = if rng.gen_bool(0.5) { Truth3::True } else { Truth3::False };
        }
    }
    k
}

fn mutations() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for m in MappingId::ALL {
        let r = xcheck_mutant(m, &params(500));
        pass &= !r.passed();
        parts.push(format!("{}: {}", m.name(), r.first_failure_trial().map_or("missed".into(), |t| format!("trial {t}"))));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn size_laws() -> Outcome {
    let p = params(200);
    let mut bad = 0;
    for m in MappingId::ALL {
        for t in 0..p.trials {
            let src = gen_structure_with(m.source_kind(), &p, &mut trial_rng(SEED, t));
            let (s, e) = (src.as_transition_system().num_states(), src.as_transition_system().transitions().len());
            let b = map_structure(m, &src).unwrap();
            let tgt = b.target.as_transition_system();
            let expected = if m.splits_transitions() { (s + e, 2 * e) } else { (2 * s, e + 2 * s) };
            bad += usize::from((tgt.num_states(), tgt.transitions().len()) != expected);
        }
    }
    Outcome { pass: bad == 0, detail: format!("{bad} violations over 8 x 200 sources") }
}

fn round_trip() -> Outcome {
    let (mut bad, mut actl_props) = (0, 0);
    for logic in LogicId::ALL {
        for t in 0..1000 {
            let f = gen_formula(logic, &params(1).with_seed(SEED + t));
            let text = render_formula(&f, logic).unwrap();
            bad += usize::from(parse_formula(&text, logic).ok().as_ref() != Some(&f));
            if logic == LogicId::Actl {
                if let Formula::State(phi) = &f {
                    let mut props = BTreeSet::new();
                    phi.props(&mut props);
                    actl_props += usize::from(!props.is_empty());
                }
            }
        }
    }
    Outcome { pass: bad + actl_props == 0, detail: format!("{bad} round-trip failures over 7 x 1000; {actl_props} ACTL formulas with propositions") }
}

fn deadlocks() -> Outcome {
    let ks = Ks::new(&["d"], &["p"]).unwrap().with_label("d", "p", true).unwrap();
    let cfg = CheckConfig::default();
    let ctl = |text: &str| check(&ks, StateId(0), &parse_state(text, LogicId::Ctl).unwrap(), LogicId::Ctl, &cfg).unwrap().holds;
    let kmts = Kmts::new(&["d"], &["a!"], &["p"]).unwrap().with_label("d", "p", Truth3::True).unwrap();
    let p = parse_upml("p").unwrap();
    let ax = eval_upml(&kmts, StateId(0), &parse_upml("AX p").unwrap()).unwrap();
    let ex = eval_ex_upml(&kmts, StateId(0), &tempobridge::ActionToken::new("a").unwrap(), &p).unwrap();
    let got = (ctl("E X true"), ctl("A X p"), ax, ex);
    Outcome {
        pass: got == (false, false, Truth3::True, Truth3::False),
        detail: format!("E X true = {}, A X p = {}, AX p = {}, EX_a p = {}", got.0, got.1, got.2.as_str(), got.3.as_str()),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("truth preservation, non-star mappings", non_star),
        ("truth preservation, star mappings", star),
        ("fixpoint vs enumeration", engines),
        ("Kleene tables and De Morgan", kleene),
        ("UPML duality and definite reduction", upml),
        ("mutation sensitivity", mutations),
        ("structure-map size laws", size_laws),
        ("parser round-trip", round_trip),
        ("deadlock semantics", deadlocks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("criterion {} [{}] {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
