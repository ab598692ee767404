//! Three-valued UPML over KMTS, with Kleene connectives.

use thiserror::Error;

use crate::formulas::{Truth3, UpmlFormula};
use crate::structures::{ActionToken, Kmts, Kts, Model, Modifier, StateId, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Check3Error {
    #[error("unknown state #{0}")]
    UnknownState(u32),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

pub fn kleene_not(x: Truth3) -> Truth3 {
    match x {
        Truth3::True => Truth3::False,
        Truth3::False => Truth3::True,
        Truth3::Bot => Truth3::Bot,
    }
}

pub fn kleene_and(x: Truth3, y: Truth3) -> Truth3 {
    use Truth3::*;
    match (x, y) {
        (False, _) | (_, False) => False,
        (True, True) => True,
        _ => Bot,
    }
}

pub fn kleene_or(x: Truth3, y: Truth3) -> Truth3 {
    use Truth3::*;
    match (x, y) {
        (True, _) | (_, True) => True,
        (False, False) => False,
        _ => Bot,
    }
}

/// Which transitions an action-indexed modality ranges over, and which of
/// them are must-transitions.
struct ActionView {
    any: u64,
    must: u64,
}

fn action_view(kmts: &Kmts, a: &ActionToken) -> Result<ActionView, Check3Error> {
    let mut view = ActionView { any: 0, must: 0 };
    for (i, m) in kmts.mod_actions.iter().enumerate() {
        if m.token == *a {
            view.any |= 1 << i;
            if m.modifier == Modifier::Bang {
                view.must |= 1 << i;
            }
        }
    }
    if view.any == 0 {
        return Err(Check3Error::UnknownAction(a.to_string()));
    }
    Ok(view)
}

/// Values of `phi` in every state.
pub fn sat_upml(kmts: &Kmts, phi: &UpmlFormula) -> Result<Vec<Truth3>, Check3Error> {
    let n = kmts.states.len();
    Ok(match phi {
        UpmlFormula::Prop(p) => {
            let i = kmts.prop_index(p.as_str()).ok_or_else(|| Check3Error::UnknownProp(p.to_string()))?;
            kmts.labeling.iter().map(|row| row[i]).collect()
        }
        UpmlFormula::Not(x) => sat_upml(kmts, x)?.into_iter().map(kleene_not).collect(),
        UpmlFormula::And(x, y) => {
            let (a, b) = (sat_upml(kmts, x)?, sat_upml(kmts, y)?);
            a.into_iter().zip(b).map(|(x, y)| kleene_and(x, y)).collect()
        }
        UpmlFormula::Ax(x) => {
            let v = sat_upml(kmts, x)?;
            let mut out = vec![Truth3::True; n];
            for t in &kmts.transitions {
                out[t.src.index()] = kleene_and(out[t.src.index()], v[t.dst.index()]);
            }
            out
        }
        UpmlFormula::AxAct(a, x) => {
            let view = action_view(kmts, a)?;
            let v = sat_upml(kmts, x)?;
            let (mut all_true, mut some_false) = (vec![true; n], vec![false; n]);
            for t in &kmts.transitions {
                let bits = t.labels.bits();
                if bits & view.any != 0 && v[t.dst.index()] != Truth3::True {
                    all_true[t.src.index()] = false;
                }
                if bits & view.must != 0 && v[t.dst.index()] == Truth3::False {
                    some_false[t.src.index()] = true;
                }
            }
            (0..n)
                .map(|s| match (all_true[s], some_false[s]) {
                    (true, _) => Truth3::True,
                    (false, true) => Truth3::False,
                    (false, false) => Truth3::Bot,
                })
                .collect()
        }
    })
}

pub fn eval_upml(kmts: &Kmts, s: StateId, phi: &UpmlFormula) -> Result<Truth3, Check3Error> {
    if s.index() >= kmts.num_states() {
        return Err(Check3Error::UnknownState(s.0));
    }
    Ok(sat_upml(kmts, phi)?[s.index()])
}

/// `EX_a φ` evaluated from its own three-case table.
pub fn eval_ex_upml(kmts: &Kmts, s: StateId, a: &ActionToken, phi: &UpmlFormula) -> Result<Truth3, Check3Error> {
    if s.index() >= kmts.num_states() {
        return Err(Check3Error::UnknownState(s.0));
    }
    let view = action_view(kmts, a)?;
    let v = sat_upml(kmts, phi)?;
    let outgoing = kmts.transitions.iter().filter(|t| t.src == s);
    let mut all_false = true;
    for t in outgoing {
        let bits = t.labels.bits();
        if bits & view.must != 0 && v[t.dst.index()] == Truth3::True {
            return Ok(Truth3::True);
        }
        if bits & view.any != 0 && v[t.dst.index()] != Truth3::False {
            all_false = false;
        }
    }
    Ok(if all_false { Truth3::False } else { Truth3::Bot })
}

/// The two-valued structure a KMTS denotes when it has no `?` modifiers
/// and no `⊥` labels; `None` otherwise.
pub fn definite_kts(kmts: &Kmts) -> Option<Kts> {
    if kmts.mod_actions.iter().any(|m| m.modifier == Modifier::Query) {
        return None;
    }
    let labeling = kmts
        .labeling
        .iter()
        .map(|row| row.iter().map(|v| matches!(v, Truth3::True)).collect())
        .collect();
    if kmts.labeling.iter().flatten().any(|v| *v == Truth3::Bot) {
        return None;
    }
    Some(Kts {
        states: kmts.states.clone(),
        actions: kmts.mod_actions.iter().map(|m| m.token.clone()).collect(),
        props: kmts.props.clone(),
        transitions: kmts.transitions.clone(),
        labeling,
    })
}

/// Plain two-valued reading of UPML on a KTS: `AX` over all successors,
/// `AX_a` over transitions whose label set contains `a`.
pub fn eval_upml_kts(kts: &Kts, s: StateId, phi: &UpmlFormula) -> Result<bool, Check3Error> {
    fn go(kts: &Kts, s: usize, phi: &UpmlFormula) -> Result<bool, Check3Error> {
        Ok(match phi {
            UpmlFormula::Prop(p) => {
                let i = kts.prop_index(p.as_str()).ok_or_else(|| Check3Error::UnknownProp(p.to_string()))?;
                kts.holds(StateId::from(s), i)
            }
            UpmlFormula::Not(x) => !go(kts, s, x)?,
            UpmlFormula::And(x, y) => go(kts, s, x)? && go(kts, s, y)?,
            UpmlFormula::Ax(x) => {
                let mut ok = true;
                for t in kts.transitions.iter().filter(|t| t.src.index() == s) {
                    ok &= go(kts, t.dst.index(), x)?;
                }
                ok
            }
            UpmlFormula::AxAct(a, x) => {
                let i = kts.action_index(a.as_str()).ok_or_else(|| Check3Error::UnknownAction(a.to_string()))?;
                let mut ok = true;
                for t in kts.transitions.iter().filter(|t| t.src.index() == s && t.labels.contains(i)) {
                    ok &= go(kts, t.dst.index(), x)?;
                }
                ok
            }
        })
    }
    if s.index() >= kts.num_states() {
        return Err(Check3Error::UnknownState(s.0));
    }
    go(kts, s.index(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Truth3::*;

    fn m0() -> Kmts {
        Kmts::new(&["u0", "u1"], &["a!", "b?"], &["p"])
            .unwrap()
            .with_transition("u0", &["a!"], "u1")
            .unwrap()
            .with_transition("u0", &["b?"], "u0")
            .unwrap()
            .with_label("u0", "p", Bot)
            .unwrap()
            .with_label("u1", "p", True)
            .unwrap()
    }

    fn tok(a: &str) -> ActionToken {
        ActionToken::new(a).unwrap()
    }

    #[test]
    fn kleene_tables() {
        assert_eq!(kleene_and(Bot, False), False);
        assert_eq!(kleene_or(Bot, False), Bot);
        assert_eq!(kleene_and(True, Bot), Bot);
        assert_eq!(kleene_or(True, Bot), True);
        assert_eq!(kleene_not(Bot), Bot);
        for x in Truth3::ALL {
            for y in Truth3::ALL {
                assert_eq!(kleene_or(x, y), kleene_not(kleene_and(kleene_not(x), kleene_not(y))));
                assert_eq!(kleene_and(x, y), kleene_and(y, x));
            }
        }
    }

    #[test]
    fn m0_examples() {
        let m = m0();
        let p = UpmlFormula::prop("p");
        let u0 = StateId(0);
        assert_eq!(eval_upml(&m, u0, &p.clone().ax()).unwrap(), Bot);
        assert_eq!(eval_upml(&m, u0, &UpmlFormula::ax_act("a", p.clone())).unwrap(), True);
        assert_eq!(eval_ex_upml(&m, u0, &tok("a"), &p).unwrap(), True);
        assert_eq!(eval_ex_upml(&m, u0, &tok("b"), &p).unwrap(), Bot);
        for a in ["a", "b"] {
            let dual = kleene_not(eval_upml(&m, u0, &UpmlFormula::ax_act(a, p.clone().not())).unwrap());
            assert_eq!(eval_ex_upml(&m, u0, &tok(a), &p).unwrap(), dual);
        }
    }

    #[test]
    fn deadlocks_and_errors() {
        let m = m0();
        let u1 = StateId(1);
        let p = UpmlFormula::prop("p");
        assert_eq!(eval_upml(&m, u1, &p.clone().not().ax()).unwrap(), True);
        assert_eq!(eval_ex_upml(&m, u1, &tok("a"), &p).unwrap(), False);
        assert_eq!(eval_upml(&m, StateId(5), &p), Err(Check3Error::UnknownState(5)));
        assert!(matches!(eval_upml(&m, u1, &UpmlFormula::prop("q")), Err(Check3Error::UnknownProp(_))));
        assert!(matches!(eval_upml(&m, u1, &UpmlFormula::ax_act("c", p)), Err(Check3Error::UnknownAction(_))));
    }

    #[test]
    fn definite_reduction() {
        assert!(definite_kts(&m0()).is_none());
        let m = Kmts::new(&["x", "y"], &["a!"], &["p"])
            .unwrap()
            .with_transition("x", &["a!"], "y")
            .unwrap()
            .with_label("y", "p", True)
            .unwrap();
        let k = definite_kts(&m).unwrap();
        let phi = UpmlFormula::ax_act("a", UpmlFormula::prop("p")).and(UpmlFormula::prop("p").not());
        for s in [StateId(0), StateId(1)] {
            let three = eval_upml(&m, s, &phi).unwrap();
            assert_ne!(three, Bot);
            assert_eq!(three == True, eval_upml_kts(&k, s, &phi).unwrap());
        }
    }
}
