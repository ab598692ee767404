//! End-to-end: documents in, verdicts and mapped artifacts out.

use tempobridge::checker2::{check, check_path, CheckConfig};
use tempobridge::checker3::eval_upml;
use tempobridge::mappings::{map_structure, MappingId};
use tempobridge::parser::{format_lasso, load_structure, parse_state, parse_upml, render_state, save_structure, to_dot};
use tempobridge::structures::mu_paths;
use tempobridge::testkit::as_model;
use tempobridge::{Lasso, LogicId, StateId, Structure, Truth3};

const K0: &str = r#"{"kind":"ks","states":["t0","t1"],"props":["p"],
  "transitions":[{"src":"t0","dst":"t1","labels":[]},{"src":"t1","dst":"t1","labels":[]}],
  "labeling":{"t0":{"p":"false"},"t1":{"p":"true"}}}"#;
const L0: &str = r#"{"kind":"lts","states":["s0","s1"],"actions":["a","b"],
  "transitions":[{"src":"s0","dst":"s1","labels":["a"]},{"src":"s1","dst":"s1","labels":[]}]}"#;
const M0: &str = r#"{"kind":"kmts","states":["u0","u1"],"actions":["a!","b?"],"props":["p"],
  "transitions":[{"src":"u0","dst":"u1","labels":["a!"]},{"src":"u0","dst":"u0","labels":["b?"]}],
  "labeling":{"u0":{"p":"bot"},"u1":{"p":"true"}}}"#;

fn holds(st: &Structure, state: &str, text: &str, logic: LogicId) -> bool {
    let m = as_model(st).unwrap();
    let s = st.as_transition_system().state_id(state).unwrap();
    check(m, s, &parse_state(text, logic).unwrap(), logic, &CheckConfig::oracle()).unwrap().holds
}

#[test]
fn k0_verdicts_survive_both_ks_directions() {
    let k0 = load_structure(K0).unwrap();
    assert!(holds(&k0, "t0", "E[!p U p]", LogicId::Ctl));
    let b = map_structure(MappingId::Lts, &k0).unwrap();
    for text in ["E[!p U p]", "E (X p & X X p)", "!E X X !p"] {
        let phi = parse_state(text, LogicId::CtlStar).unwrap();
        let mapped = b.map_formula(&phi).unwrap();
        assert_eq!(
            holds(&k0, "t0", text, LogicId::CtlStar),
            holds(&b.target, "t0", &render_state(&mapped), LogicId::ActlStar),
            "{text}"
        );
    }
}

#[test]
fn ks_to_lts_detours_change_universal_next() {
    // The F-detour states added by the translation are visible to A,
    // so the translated formula disagrees at t0.
    let k0 = load_structure(K0).unwrap();
    let b = map_structure(MappingId::Lts, &k0).unwrap();
    let mapped = b.map_formula(&parse_state("A X p", LogicId::CtlStar).unwrap()).unwrap();
    assert!(holds(&k0, "t0", "A X p", LogicId::CtlStar));
    assert!(!holds(&b.target, "t0", &render_state(&mapped), LogicId::ActlStar));
}

#[test]
fn l0_paths_map_and_check() {
    let l0 = load_structure(L0).unwrap();
    let ts = l0.as_transition_system();
    let paths = mu_paths(ts, StateId(0), 3).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(format_lasso(ts, &paths[0]), "s0 -{a}-> s1 | s1 -tau-> s1");

    let b = map_structure(MappingId::Ks, &l0).unwrap();
    let pi = match parse_state("E (X_a true & X !X_a true)", LogicId::ActlStar).unwrap() {
        tempobridge::StateFormula::Exists(pi) => *pi,
        _ => unreachable!(),
    };
    let cfg = CheckConfig::default();
    let src = check_path(as_model(&l0).unwrap(), &paths[0], &pi, LogicId::ActlStar, &cfg).unwrap();
    let image: Lasso = b.map_path(&paths[0]).unwrap();
    let tgt = check_path(as_model(&b.target).unwrap(), &image, &b.map_path_formula(&pi).unwrap(), LogicId::CtlStar, &cfg).unwrap();
    assert!(src && tgt);
    let again = load_structure(&save_structure(&b.target)).unwrap();
    assert_eq!(again, b.target);
    assert!(to_dot(&b.target).contains("(s0,s1)"));
}

#[test]
fn m0_three_valued() {
    let Structure::Kmts(m0) = load_structure(M0).unwrap() else { panic!() };
    let v = |t: &str| eval_upml(&m0, StateId(0), &parse_upml(t).unwrap()).unwrap();
    assert_eq!(v("AX p"), Truth3::Bot);
    assert_eq!(v("AX_a p"), Truth3::True);
    assert_eq!(v("!AX_b !p"), Truth3::Bot);
}
