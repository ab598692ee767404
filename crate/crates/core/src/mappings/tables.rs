//! Formula translation tables.

use std::collections::BTreeSet;

use crate::formulas::{conforms, ActionFormula, PathFormula, StateFormula};
use crate::structures::ActionToken;

use super::{MappingError, MappingId, FRESH};

/// Reads an action formula as a proposition over `α′`: `a ↦ a`,
/// `τ ↦ ⋀ ¬a` over the alphabet.
pub fn chi_to_prop(chi: &ActionFormula, alphabet: &BTreeSet<ActionToken>) -> Result<StateFormula, MappingError> {
    Ok(match chi {
        ActionFormula::Tau => alphabet
            .iter()
            .map(|a| StateFormula::prop(a.as_str()).not())
            .reduce(StateFormula::and)
            .unwrap_or(StateFormula::True),
        ActionFormula::Act(a) => {
            if !alphabet.contains(a) {
                return Err(MappingError::OutsideAlphabet(a.to_string()));
            }
            StateFormula::prop(a.as_str())
        }
        ActionFormula::Not(x) => chi_to_prop(x, alphabet)?.not(),
        ActionFormula::And(x, y) => chi_to_prop(x, alphabet)?.and(chi_to_prop(y, alphabet)?),
    })
}

fn f() -> StateFormula {
    StateFormula::prop(FRESH)
}

fn fresh_action() -> ActionToken {
    ActionToken::new(FRESH).expect("F is a valid token")
}

/// `∃X_F true`, the marker of original states in the detour construction.
fn guard() -> StateFormula {
    StateFormula::exists(PathFormula::xact(fresh_action(), StateFormula::True.embed()))
}

pub(super) struct Translator<'a> {
    mapping: MappingId,
    alphabet: &'a BTreeSet<ActionToken>,
    mutated: bool,
}

impl<'a> Translator<'a> {
    pub fn new(mapping: MappingId, alphabet: &'a BTreeSet<ActionToken>, mutated: bool) -> Self {
        Translator { mapping, alphabet, mutated }
    }

    fn check(&self, phi: &StateFormula) -> Result<(), MappingError> {
        let logic = self.mapping.source_logic();
        let violations = conforms(phi, logic);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(MappingError::NotConforming { logic, violations })
        }
    }

    pub fn formula(&self, phi: &StateFormula) -> Result<StateFormula, MappingError> {
        self.check(phi)?;
        self.state(phi)
    }

    pub fn path_formula(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        self.check(&StateFormula::exists(pi.clone()))?;
        self.path(pi)
    }

    fn missing(&self, construct: &'static str) -> MappingError {
        MappingError::NoTableEntry { mapping: self.mapping, construct }
    }

    fn state(&self, phi: &StateFormula) -> Result<StateFormula, MappingError> {
        use MappingId::*;
        Ok(match phi {
            StateFormula::True => StateFormula::True,
            StateFormula::Prop(p) => match self.mapping {
                Ks2 | Ks2Prime => phi.clone(),
                Lts | Lts2 => {
                    let xp = PathFormula::xact(ActionToken::new(p.as_str()).expect("token"), StateFormula::True.embed());
                    StateFormula::exists(PathFormula::xact(fresh_action(), xp))
                }
                LtsPrime | Lts2Prime => {
                    let inner = StateFormula::exists(PathFormula::xact(
                        ActionToken::new(p.as_str()).expect("token"),
                        StateFormula::True.embed(),
                    ));
                    if self.mutated && self.mapping == LtsPrime {
                        inner
                    } else {
                        StateFormula::exists(PathFormula::xact(fresh_action(), inner.embed()))
                    }
                }
                Ks | KsPrime => return Err(self.missing("propositions")),
            },
            StateFormula::Not(x) => self.state(x)?.not(),
            StateFormula::And(x, y) => self.state(x)?.and(self.state(y)?),
            StateFormula::Exists(pi) => StateFormula::exists(self.path(pi)?),
        })
    }

    fn path(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        if self.mapping.is_star() {
            self.star_path(pi)
        } else {
            self.plain_path(pi)
        }
    }

    fn star_path(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        use MappingId::*;
        let split = self.mapping.splits_transitions();
        Ok(match pi {
            PathFormula::Embed(phi) => self.state(phi)?.embed(),
            PathFormula::Not(p) => self.star_path(p)?.not(),
            PathFormula::And(p, q) => self.star_path(p)?.and(self.star_path(q)?),
            PathFormula::X(p) => {
                let inner = self.star_path(p)?;
                if split && self.mutated && self.mapping == Ks {
                    inner.x()
                } else if split {
                    inner.x().x()
                } else if self.mutated && self.mapping == Lts {
                    inner.x()
                } else {
                    guard().embed().and(inner).x()
                }
            }
            PathFormula::Xact(a, p) => {
                let inner = self.star_path(p)?;
                match self.mapping {
                    Ks | Ks2 => StateFormula::prop(a.as_str()).embed().x().and(inner.x().x()),
                    Lts2 if self.mutated => inner.x(),
                    Lts2 => PathFormula::xact(a.clone(), inner),
                    _ => return Err(self.missing("X_a")),
                }
            }
            PathFormula::U(p, q) => {
                let (l, r) = (self.star_path(p)?, self.star_path(q)?);
                if split {
                    let left = if self.mutated && self.mapping == Ks2 { l.not().not() } else { f().embed().and(l.not()).not() };
                    left.u(f().embed().and(r))
                } else {
                    guard().embed().and(l).u(guard().embed().and(r))
                }
            }
            PathFormula::W(..) => return Err(self.missing("W")),
            PathFormula::Xchi(..) | PathFormula::Uchi(..) | PathFormula::Wchi(..) => {
                return Err(self.missing("action-indexed operators"))
            }
        })
    }

    fn operand(&self, pi: &PathFormula) -> Result<StateFormula, MappingError> {
        match pi {
            PathFormula::Embed(phi) => self.state(phi),
            _ => Err(self.missing("path operands")),
        }
    }

    fn plain_path(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        use MappingId::*;
        match self.mapping {
            KsPrime | Ks2Prime => self.to_ctl(pi),
            LtsPrime => match pi {
                PathFormula::Not(p) => Ok(self.plain_path(p)?.not()),
                PathFormula::X(p) => Ok(self.operand(p)?.embed().x()),
                PathFormula::U(p, q) | PathFormula::W(p, q) => {
                    let l = guard().and(self.operand(p)?).embed();
                    let r = guard().and(self.operand(q)?).embed();
                    Ok(if matches!(pi, PathFormula::U(..)) { l.u(r) } else { l.w(r) })
                }
                _ => Err(self.missing("this path operator")),
            },
            Lts2Prime => match pi {
                PathFormula::Not(p) => Ok(self.plain_path(p)?.not()),
                PathFormula::Xchi(chi, phi) => Ok(PathFormula::xchi(chi.clone(), guard().and(self.state(phi)?))),
                PathFormula::Uchi(phi, c, c2, phi2) | PathFormula::Wchi(phi, c, c2, phi2) => {
                    let l = guard().and(self.state(phi)?);
                    let r = guard().and(self.state(phi2)?);
                    let (c, c2) = if self.mutated { (c2.clone(), c.clone()) } else { (c.clone(), c2.clone()) };
                    Ok(if matches!(pi, PathFormula::Uchi(..)) {
                        PathFormula::uchi(l, c, c2, r)
                    } else {
                        PathFormula::wchi(l, c, c2, r)
                    })
                }
                _ => Err(self.missing("this path operator")),
            },
            _ => unreachable!("star mappings use star_path"),
        }
    }

    /// `ks′` and `ks₂′`.
    fn to_ctl(&self, pi: &PathFormula) -> Result<PathFormula, MappingError> {
        let not_f = || f().not();
        match pi {
            PathFormula::Not(p) => Ok(self.to_ctl(p)?.not()),
            PathFormula::Xchi(chi, phi) => {
                let chi = chi_to_prop(chi, self.alphabet)?;
                let back = StateFormula::exists(f().and(self.state(phi)?).embed().x());
                let step = if self.mutated && self.mapping == MappingId::KsPrime {
                    not_f().and(back)
                } else {
                    not_f().and(chi).and(back)
                };
                Ok(step.embed().x())
            }
            PathFormula::Uchi(phi, c, c2, phi2) | PathFormula::Wchi(phi, c, c2, phi2) => {
                let (chi, chi2) = (chi_to_prop(c, self.alphabet)?, chi_to_prop(c2, self.alphabet)?);
                let left = f().and(self.state(phi)?).or(not_f().and(chi));
                let target = self.state(phi2)?;
                let target = if self.mutated && self.mapping == MappingId::Ks2Prime { target } else { f().and(target) };
                let exit = not_f().and(StateFormula::exists(not_f().and(chi2).embed().u(target.embed())));
                Ok(if matches!(pi, PathFormula::Uchi(..)) {
                    left.embed().u(exit.embed())
                } else {
                    left.embed().w(exit.embed())
                })
            }
            PathFormula::X(_) | PathFormula::Xact(..) => Err(self.missing("X and X_a (only X_χ has a clause)")),
            PathFormula::U(..) | PathFormula::W(..) => Err(self.missing("state-indexed U/W (only the χ forms have clauses)")),
            PathFormula::Embed(_) | PathFormula::And(..) => Err(self.missing("path conjunction and embedding")),
        }
    }
}
