//! Canonical text. `&` chains are fully parenthesized; `¬∃¬π` prints as `A π`.

use thiserror::Error;

use crate::formulas::{conforms, ActionFormula, Formula, GrammarViolation, LogicId, PathFormula, StateFormula, UpmlFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("formula does not conform to {logic}: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotConforming { logic: LogicId, violations: Vec<GrammarViolation> },
    #[error("formula kind does not match logic {0}")]
    KindMismatch(LogicId),
}

/// Renders `formula` after checking that it belongs to `logic`.
pub fn render_formula(formula: &Formula, logic: LogicId) -> Result<String, RenderError> {
    match (formula, logic) {
        (Formula::Upml(u), LogicId::Upml) => Ok(render_upml(u)),
        (Formula::State(s), l) if l != LogicId::Upml => {
            let violations = conforms(s, l);
            if violations.is_empty() {
                Ok(render_state(s))
            } else {
                Err(RenderError::NotConforming { logic: l, violations })
            }
        }
        _ => Err(RenderError::KindMismatch(logic)),
    }
}

fn quantified(out: &mut String, q: char, pi: &PathFormula) {
    out.push(q);
    let body = render_path(pi);
    if !body.starts_with('[') {
        out.push(' ');
    }
    out.push_str(&body);
}

pub fn render_state(phi: &StateFormula) -> String {
    let mut out = String::new();
    state(&mut out, phi);
    out
}

fn state(out: &mut String, phi: &StateFormula) {
    if let Some(pi) = phi.as_forall() {
        quantified(out, 'A', pi);
        return;
    }
    match phi {
        StateFormula::True => out.push_str("true"),
        StateFormula::Prop(p) => out.push_str(p.as_str()),
        StateFormula::Not(x) => {
            out.push('!');
            state(out, x);
        }
        StateFormula::And(x, y) => {
            out.push('(');
            state(out, x);
            out.push_str(" & ");
            state(out, y);
            out.push(')');
        }
        StateFormula::Exists(pi) => quantified(out, 'E', pi),
    }
}

pub fn render_path(pi: &PathFormula) -> String {
    let mut out = String::new();
    path(&mut out, pi);
    out
}

fn path(out: &mut String, pi: &PathFormula) {
    match pi {
        PathFormula::Embed(phi) => state(out, phi),
        PathFormula::Not(p) => {
            out.push('!');
            path(out, p);
        }
        PathFormula::And(p, q) => {
            out.push('(');
            path(out, p);
            out.push_str(" & ");
            path(out, q);
            out.push(')');
        }
        PathFormula::X(p) => {
            out.push_str("X ");
            path(out, p);
        }
        PathFormula::Xact(a, p) => {
            out.push_str("X_");
            out.push_str(a.as_str());
            out.push(' ');
            path(out, p);
        }
        PathFormula::U(p, q) | PathFormula::W(p, q) => {
            out.push('[');
            path(out, p);
            out.push_str(if matches!(pi, PathFormula::U(..)) { " U " } else { " W " });
            path(out, q);
            out.push(']');
        }
        PathFormula::Xchi(chi, phi) => {
            out.push_str("X_{");
            action(out, chi);
            out.push_str("} ");
            state(out, phi);
        }
        PathFormula::Uchi(phi, chi, chi2, phi2) | PathFormula::Wchi(phi, chi, chi2, phi2) => {
            out.push('[');
            state(out, phi);
            out.push_str(" {");
            action(out, chi);
            out.push_str(if matches!(pi, PathFormula::Uchi(..)) { "}U{" } else { "}W{" });
            action(out, chi2);
            out.push_str("} ");
            state(out, phi2);
            out.push(']');
        }
    }
}

pub fn render_action(chi: &ActionFormula) -> String {
    let mut out = String::new();
    action(&mut out, chi);
    out
}

fn action(out: &mut String, chi: &ActionFormula) {
    match chi {
        ActionFormula::Tau => out.push_str("tau"),
        ActionFormula::Act(a) => out.push_str(a.as_str()),
        ActionFormula::Not(x) => {
            out.push('!');
            action(out, x);
        }
        ActionFormula::And(x, y) => {
            out.push('(');
            action(out, x);
            out.push_str(" & ");
            action(out, y);
            out.push(')');
        }
    }
}

pub fn render_upml(phi: &UpmlFormula) -> String {
    let mut out = String::new();
    upml(&mut out, phi);
    out
}

fn upml(out: &mut String, phi: &UpmlFormula) {
    match phi {
        UpmlFormula::Prop(p) => out.push_str(p.as_str()),
        UpmlFormula::Not(x) => {
            out.push('!');
            upml(out, x);
        }
        UpmlFormula::And(x, y) => {
            out.push('(');
            upml(out, x);
            out.push_str(" & ");
            upml(out, y);
            out.push(')');
        }
        UpmlFormula::Ax(x) => {
            out.push_str("AX ");
            upml(out, x);
        }
        UpmlFormula::AxAct(a, x) => {
            out.push_str("AX_");
            out.push_str(a.as_str());
            out.push(' ');
            upml(out, x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonconforming() {
        let phi = StateFormula::prop("p");
        assert!(matches!(
            render_formula(&Formula::State(phi.clone()), LogicId::Actl),
            Err(RenderError::NotConforming { .. })
        ));
        assert_eq!(render_formula(&Formula::State(phi.clone()), LogicId::Ctl).unwrap(), "p");
        assert!(matches!(render_formula(&Formula::State(phi), LogicId::Upml), Err(RenderError::KindMismatch(_))));
    }

    #[test]
    fn universal_pattern() {
        let pi = StateFormula::prop("p").embed().x();
        assert_eq!(render_state(&crate::formulas::forall(pi)), "A X p");
    }
}
