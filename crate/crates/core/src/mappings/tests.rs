use super::*;
use crate::formulas::ActionFormula;
use crate::structures::TransitionSystem;
use crate::parser::{parse_state, render_state};

fn l0() -> Lts {
    Lts::new(&["s0", "s1"], &["a", "b"])
        .unwrap()
        .with_transition("s0", &["a"], "s1")
        .unwrap()
        .with_transition("s1", &[], "s1")
        .unwrap()
}

fn k0() -> Ks {
    Ks::new(&["t0", "t1"], &["p"])
        .unwrap()
        .with_transition("t0", "t1")
        .unwrap()
        .with_transition("t1", "t1")
        .unwrap()
        .with_label("t1", "p", true)
        .unwrap()
}

fn t0() -> Kts {
    Kts::new(&["s0", "s1"], &["a"], &["p"])
        .unwrap()
        .with_transition("s0", &["a"], "s1")
        .unwrap()
        .with_label("s1", "p", true)
        .unwrap()
}

fn labels_of(k: &Ks, state: &str) -> Vec<(String, bool)> {
    let s = k.states.iter().position(|n| n == state).unwrap();
    k.props.iter().map(|p| p.to_string()).zip(k.labeling[s].iter().copied()).collect()
}

fn pairs(v: &[(&str, bool)]) -> Vec<(String, bool)> {
    v.iter().map(|(n, b)| (n.to_string(), *b)).collect()
}

fn render(phi: &StateFormula) -> String {
    render_state(phi)
}

#[test]
fn ks_on_l0() {
    let b = map_ks(&l0()).unwrap();
    let Structure::Ks(k) = &b.target else { panic!() };
    assert_eq!(k.states, ["s0", "s1", "(s0,s1)", "(s1,s1)"]);
    assert_eq!(labels_of(k, "(s0,s1)"), pairs(&[("a", true), ("b", false), ("F", false)]));
    assert_eq!(labels_of(k, "s0"), pairs(&[("a", false), ("b", false), ("F", true)]));
    let lasso = Lasso { start: StateId(0), stem: vec![0], cycle: vec![1] };
    let mapped = b.map_path(&lasso).unwrap();
    assert_eq!(mapped, Lasso { start: StateId(0), stem: vec![0, 1], cycle: vec![2, 3] });
    assert_eq!(k.transitions[0], Transition::new(0usize, LabelSet::EMPTY, 2usize));
    assert_eq!(k.transitions[1], Transition::new(2usize, LabelSet::EMPTY, 1usize));
    assert!(matches!(b.origin[2], Origin::Transition { index: 0, .. }));
}

#[test]
fn ks_on_single_state() {
    let l = Lts::new(&["s"], &["a"]).unwrap();
    let b = map_ks(&l).unwrap();
    let Structure::Ks(k) = &b.target else { panic!() };
    assert_eq!(k.states, ["s"]);
    assert!(k.transitions.is_empty());
    assert_eq!(labels_of(k, "s"), pairs(&[("a", false), ("F", true)]));
    assert_eq!(b.map_path(&Lasso::empty(StateId(0))).unwrap(), Lasso::empty(StateId(0)));
}

#[test]
fn lts_on_k0() {
    let b = map_lts(&k0()).unwrap();
    let Structure::Lts(l) = &b.target else { panic!() };
    assert_eq!(l.states, ["t0", "t1", "_t0", "_t1"]);
    let shown: Vec<String> = l
        .transitions
        .iter()
        .map(|t| format!("{}{}{}", l.states[t.src.index()], l.format_labels(t.labels), l.states[t.dst.index()]))
        .collect();
    assert_eq!(shown, ["t0{}t1", "t1{}t1", "t0{F}_t0", "_t0{}t0", "t1{F}_t1", "_t1{p}t1"]);
    let lasso = Lasso { start: StateId(0), stem: vec![0], cycle: vec![1] };
    assert_eq!(b.map_path(&lasso).unwrap(), lasso);
}

#[test]
fn ks2_and_lts2_on_t0() {
    let b = map_ks2(&t0()).unwrap();
    let Structure::Ks(k) = &b.target else { panic!() };
    assert_eq!(labels_of(k, "s0"), pairs(&[("p", false), ("a", false), ("F", true)]));
    assert_eq!(labels_of(k, "(s0,s1)"), pairs(&[("p", false), ("a", true), ("F", false)]));
    assert_eq!(labels_of(k, "s1"), pairs(&[("p", true), ("a", false), ("F", true)]));

    let b = map_lts2(&t0()).unwrap();
    let Structure::Lts(l) = &b.target else { panic!() };
    let shown: Vec<String> = l
        .transitions
        .iter()
        .map(|t| format!("{}{}{}", l.states[t.src.index()], l.format_labels(t.labels), l.states[t.dst.index()]))
        .collect();
    assert_eq!(shown, ["s0{a}s1", "s0{F}_s0", "_s0{}s0", "s1{F}_s1", "_s1{p}s1"]);
}

#[test]
fn star_tables() {
    let phi = parse_state("E X_a true", LogicId::ActlStar).unwrap();
    assert_eq!(render(&ks_formula(&phi).unwrap()), "E (X a & X X true)");
    let phi = parse_state("E [true U X_a true]", LogicId::ActlStar).unwrap();
    assert_eq!(render(&ks_formula(&phi).unwrap()), "E[!(F & !true) U (F & (X a & X X true))]");
    let phi = parse_state("E [p U X_a p]", LogicId::UctlStar).unwrap();
    assert_eq!(render(&ks2_formula(&phi).unwrap()), "E[!(F & !p) U (F & (X a & X X p))]");
    let phi = parse_state("p", LogicId::UctlStar).unwrap();
    assert_eq!(ks2_formula(&phi).unwrap(), phi);
    let phi = parse_state("p", LogicId::CtlStar).unwrap();
    assert_eq!(render(&lts_formula(&phi).unwrap()), "E X_F X_p true");
    assert_eq!(render(&lts2_formula(&phi).unwrap()), "E X_F X_p true");
    let phi = parse_state("E X p", LogicId::CtlStar).unwrap();
    assert_eq!(render(&lts_formula(&phi).unwrap()), "E X (E X_F true & E X_F X_p true)");
    let phi = parse_state("E X_a p", LogicId::UctlStar).unwrap();
    assert_eq!(render(&lts2_formula(&phi).unwrap()), "E X_a E X_F X_p true");
}

#[test]
fn plain_tables() {
    let ab: BTreeSet<ActionToken> = ["a", "b"].iter().map(|a| ActionToken::new(*a).unwrap()).collect();
    let phi = parse_state("E X_{a} true", LogicId::Actl).unwrap();
    assert_eq!(render(&ks_prime_formula(&phi, &ab).unwrap()), "E X ((!F & a) & E X (F & true))");
    let phi = parse_state("p", LogicId::Ctl).unwrap();
    assert_eq!(render(&lts_prime_formula(&phi).unwrap()), "E X_F E X_p true");
    let phi = parse_state("E[p {a}U{tau} p]", LogicId::Uctl).unwrap();
    assert_eq!(
        render(&lts2_prime_formula(&phi).unwrap()),
        "E[(E X_F true & E X_F E X_p true) {a}U{tau} (E X_F true & E X_F E X_p true)]"
    );
    let phi = parse_state("E[p {a}W{b} p]", LogicId::Uctl).unwrap();
    let out = render(&ks2_prime_formula(&phi, &ab).unwrap());
    assert_eq!(out, "E[!(!(F & p) & !(!F & a)) W (!F & E[(!F & b) U (F & p)])]");
    let phi = parse_state("E X p", LogicId::Uctl).unwrap();
    assert!(matches!(ks2_prime_formula(&phi, &ab), Err(MappingError::NoTableEntry { .. })));
}

#[test]
fn outputs_conform_to_target() {
    let ab: BTreeSet<ActionToken> = ["a"].iter().map(|a| ActionToken::new(*a).unwrap()).collect();
    let cases = [
        (MappingId::Ks, "E [X_a true U !X true]"),
        (MappingId::Lts, "E [p U X !p] & A X p"),
        (MappingId::Ks2, "E [p U X_a !p]"),
        (MappingId::Lts2, "E (X_a p & X p)"),
        (MappingId::KsPrime, "E [true {a}W{tau} E X_{!a} true]"),
        (MappingId::LtsPrime, "A [p U E X !p] & E [p W p]"),
        (MappingId::Ks2Prime, "E X_{a} p"),
        (MappingId::Lts2Prime, "!E [p {a}W{a} p]"),
    ];
    for (m, text) in cases {
        let phi = parse_state(text, m.source_logic()).unwrap();
        for mutated in [false, true] {
            let out = tables::Translator::new(m, &ab, mutated).formula(&phi).unwrap();
            assert!(crate::formulas::conforms(&out, m.target_logic()).is_empty(), "{m}: {}", render(&out));
        }
    }
}

#[test]
fn chi_as_prop() {
    let ab: BTreeSet<ActionToken> = ["a", "b"].iter().map(|a| ActionToken::new(*a).unwrap()).collect();
    assert_eq!(chi_to_prop(&ActionFormula::act("a"), &ab).unwrap(), StateFormula::prop("a"));
    assert_eq!(
        chi_to_prop(&ActionFormula::Tau, &ab).unwrap(),
        StateFormula::prop("a").not().and(StateFormula::prop("b").not())
    );
    let chi = ActionFormula::act("a").and(ActionFormula::act("b").not()).not();
    assert_eq!(
        chi_to_prop(&chi, &ab).unwrap(),
        StateFormula::prop("a").and(StateFormula::prop("b").not()).not()
    );
    assert!(matches!(chi_to_prop(&ActionFormula::act("z"), &ab), Err(MappingError::OutsideAlphabet(_))));
}

#[test]
fn errors_and_names() {
    let l = Lts::new(&["s"], &["F"]).unwrap();
    assert_eq!(map_ks(&l).unwrap_err(), MappingError::FreshCollision("actions"));
    let k = Kts::new(&["s"], &["p"], &["p"]).unwrap();
    assert_eq!(map_ks2(&k).unwrap_err(), MappingError::Overlap("p".into()));
    assert!(matches!(
        map_structure(MappingId::Ks, &Structure::Ks(k0())),
        Err(MappingError::WrongSource { .. })
    ));
    for m in MappingId::ALL {
        assert_eq!(m.name().parse::<MappingId>().unwrap(), m);
    }
    assert_eq!("ks2prime".parse::<MappingId>().unwrap(), MappingId::Ks2Prime);
    let phi = parse_state("p", LogicId::Ctl).unwrap();
    assert!(matches!(ks_formula(&phi), Err(MappingError::NotConforming { .. })));
}

#[test]
fn name_collisions_get_primes() {
    let l = Lts::new(&["s", "(s,s)"], &["a"]).unwrap().with_transition("s", &["a"], "s").unwrap();
    let b = map_ks(&l).unwrap();
    assert_eq!(b.target.as_transition_system().state_names()[2], "(s,s)'");
}
