use super::*;
use crate::formulas::conforms;
use crate::structures::Modifier;

fn small() -> GenParams {
    GenParams { seed: 1, max_states: 3, max_actions: 2, max_props: 2, ..GenParams::default() }
}

#[test]
fn structures_are_valid_and_deterministic() {
    for kind in [StructureKind::Ks, StructureKind::Lts, StructureKind::Kts, StructureKind::Kmts] {
        for seed in 0..200 {
            let p = small().with_seed(seed);
            let st = gen_structure(kind, &p);
            assert!(st.validate().is_empty(), "{kind} seed {seed}: {:?}", st.validate());
            assert_eq!(st, gen_structure(kind, &p));
            assert!(st.as_transition_system().num_states() <= 3);
        }
    }
}

#[test]
fn kmts_modifiers_are_exclusive() {
    for seed in 0..100 {
        let Structure::Kmts(m) = gen_structure(StructureKind::Kmts, &small().with_seed(seed)) else { panic!() };
        for a in m.underlying_actions() {
            let mods: Vec<Modifier> = m.mod_actions.iter().filter(|x| x.token == a).map(|x| x.modifier).collect();
            assert_eq!(mods.len(), 1);
        }
    }
}

#[test]
fn single_state_includes_deadlock() {
    let p = GenParams { max_states: 1, ..GenParams::default() };
    let dead = (0..100)
        .map(|s| gen_structure(StructureKind::Kts, &p.with_seed(s)))
        .filter(|st| st.as_transition_system().transitions().is_empty())
        .count();
    assert!(dead > 0 && dead < 100);
}

#[test]
fn formulas_conform_and_respect_depth() {
    for logic in LogicId::ALL {
        for seed in 0..300 {
            let p = GenParams::default().with_seed(seed);
            let f = gen_formula(logic, &p);
            assert_eq!(f, gen_formula(logic, &p));
            match f {
                Formula::State(phi) => {
                    assert!(conforms(&phi, logic).is_empty(), "{logic}: {phi:?}");
                    assert!(phi.depth() <= 3, "{logic}: depth {} of {phi:?}", phi.depth());
                }
                Formula::Upml(phi) => assert!(phi.depth() <= 3),
            }
        }
    }
}

#[test]
fn upml_depth_one_is_atomic() {
    let p = GenParams { max_formula_depth: 1, ..GenParams::default() };
    for seed in 0..50 {
        assert!(matches!(gen_formula(LogicId::Upml, &p.with_seed(seed)), Formula::Upml(crate::formulas::UpmlFormula::Prop(_))));
    }
}

#[test]
fn paths_are_maximal() {
    for seed in 0..200 {
        let st = gen_structure(StructureKind::Lts, &GenParams::default().with_seed(seed));
        let ts = st.as_transition_system();
        let mut rng = trial_rng(seed, 0);
        let sigma = gen_path_with(ts, StateId(0), &mut rng);
        sigma.check_maximal(ts).unwrap();
    }
}

#[test]
fn empty_report() {
    let r = xcheck(MappingId::Ks2Prime, &GenParams::default().with_trials(0));
    assert_eq!((r.trials, r.checks), (0, 0));
    assert!(r.passed());
    assert!(r.to_json().contains("\"failures\": []"));
}

#[test]
fn shrunk_failures_still_fail() {
    let r = xcheck_mutant(MappingId::Ks2, &GenParams::default().with_seed(3).with_trials(60));
    assert!(!r.passed());
    for f in &r.failures {
        if f.error.is_none() {
            let o = evaluate_mapping(MappingId::Ks2, true, &f.case).unwrap();
            assert_ne!(o.source, o.target);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let p = GenParams::default().with_seed(11).with_trials(40);
    let strip = |r: XCheckReport| {
        let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        v
    };
    assert_eq!(strip(xcheck_mutant(MappingId::Lts, &p)), strip(xcheck_mutant(MappingId::Lts, &p)));
}
