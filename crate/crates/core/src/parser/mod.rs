//! Concrete syntax: formula text in both directions, the JSON structure
//! document, DOT export and the textual path listing.

mod dot;
mod json;
mod lexer;
mod render;

use std::fmt;

use thiserror::Error;

use crate::formulas::{conforms, forall, ActionFormula, Formula, GrammarViolation, LogicId, PathFormula, StateFormula, UpmlFormula};
use crate::structures::{ActionToken, PropToken};

pub use dot::{format_lasso, to_dot};
pub use json::{load_structure, save_structure, LoadError};
pub use lexer::SourceSpan;
pub use render::{render_action, render_formula, render_path, render_state, render_upml, RenderError};

use lexer::{Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Set when the text parsed but does not conform to the logic.
    pub violations: Vec<GrammarViolation>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}..{}", self.message, self.span.start, self.span.end)?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Parses a formula of `logic`; UPML yields [`Formula::Upml`].
pub fn parse_formula(text: &str, logic: LogicId) -> Result<Formula, ParseError> {
    if logic == LogicId::Upml {
        parse_upml(text).map(Formula::Upml)
    } else {
        parse_state(text, logic).map(Formula::State)
    }
}

/// Parses and conformance-checks a two-valued state formula.
pub fn parse_state(text: &str, logic: LogicId) -> Result<StateFormula, ParseError> {
    if logic == LogicId::Upml {
        return Err(ParseError {
            span: SourceSpan { start: 0, end: text.len() },
            message: "UPML formulas are not two-valued state formulas".into(),
            violations: Vec::new(),
        });
    }
    let mut p = Parser::new(text, logic)?;
    let phi = p.state_expr()?;
    p.expect_end()?;
    let violations = conforms(&phi, logic);
    if violations.is_empty() {
        Ok(phi)
    } else {
        Err(ParseError {
            span: SourceSpan { start: 0, end: text.len() },
            message: format!("formula does not conform to {logic}"),
            violations,
        })
    }
}

pub fn parse_upml(text: &str) -> Result<UpmlFormula, ParseError> {
    let mut p = Parser::new(text, LogicId::Upml)?;
    let phi = p.upml_expr()?;
    p.expect_end()?;
    Ok(phi)
}

pub fn parse_action(text: &str) -> Result<ActionFormula, ParseError> {
    let mut p = Parser::new(text, LogicId::Uctl)?;
    let chi = p.act_expr()?;
    p.expect_end()?;
    Ok(chi)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    star: bool,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str, logic: LogicId) -> PResult<Self> {
        Ok(Parser { toks: lexer::lex(text)?, pos: 0, star: logic.is_star() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { span: self.span(), message: message.into(), violations: Vec::new() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.peek()))
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {} after formula", self.peek()))
        }
    }

    fn prop(&self, name: &str, span: SourceSpan) -> PResult<PropToken> {
        PropToken::new(name).map_err(|e| ParseError { span, message: e.to_string(), violations: Vec::new() })
    }

    fn action(&self, name: &str, span: SourceSpan) -> PResult<ActionToken> {
        ActionToken::new(name).map_err(|e| ParseError { span, message: e.to_string(), violations: Vec::new() })
    }

    // state ::= unary ("&" unary)*
    fn state_expr(&mut self) -> PResult<StateFormula> {
        let mut left = self.state_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = left.and(self.state_unary()?);
        }
        Ok(left)
    }

    fn state_unary(&mut self) -> PResult<StateFormula> {
        let t = self.bump();
        match t.tok {
            Tok::Bang => Ok(self.state_unary()?.not()),
            Tok::E => Ok(StateFormula::exists(self.path_unary()?)),
            Tok::A => Ok(forall(self.path_unary()?)),
            Tok::True => Ok(StateFormula::True),
            Tok::Ident(name) => Ok(StateFormula::Prop(self.prop(&name, t.span)?)),
            Tok::LParen => {
                let inner = self.state_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError {
                span: t.span,
                message: format!("expected state formula, found {other}"),
                violations: Vec::new(),
            }),
        }
    }

    fn path_expr(&mut self) -> PResult<PathFormula> {
        let mut left = self.path_unary()?;
        if self.star {
            while *self.peek() == Tok::Amp {
                self.bump();
                left = left.and(self.path_unary()?);
            }
        }
        Ok(left)
    }

    /// Operand of a next operator: a path in star logics, a state otherwise.
    fn next_operand(&mut self) -> PResult<PathFormula> {
        if self.star {
            self.path_unary()
        } else {
            Ok(self.state_unary()?.embed())
        }
    }

    fn path_unary(&mut self) -> PResult<PathFormula> {
        let t = self.bump();
        match t.tok {
            Tok::Bang => Ok(self.path_unary()?.not()),
            Tok::X => Ok(self.next_operand()?.x()),
            Tok::XSub(name) => {
                let a = self.action(&name, t.span)?;
                Ok(PathFormula::xact(a, self.next_operand()?))
            }
            Tok::XChi => {
                let chi = self.act_expr()?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(PathFormula::xchi(chi, self.state_unary()?))
            }
            Tok::LBracket => self.bracketed(),
            Tok::LParen => {
                let inner = self.path_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::E if self.star => Ok(StateFormula::exists(self.path_unary()?).embed()),
            Tok::A if self.star => Ok(forall(self.path_unary()?).embed()),
            Tok::True if self.star => Ok(StateFormula::True.embed()),
            Tok::Ident(name) if self.star => Ok(StateFormula::Prop(self.prop(&name, t.span)?).embed()),
            other => Err(ParseError {
                span: t.span,
                message: format!("expected path formula, found {other}"),
                violations: Vec::new(),
            }),
        }
    }

    fn bracket_operand(&mut self) -> PResult<PathFormula> {
        if self.star {
            self.path_expr()
        } else {
            Ok(self.state_expr()?.embed())
        }
    }

    // "[" operand ("U" | "W") operand "]"  |  "[" state "{" act "}" ("U"|"W") "{" act "}" state "]"
    fn bracketed(&mut self) -> PResult<PathFormula> {
        let left_span = self.span();
        let left = self.bracket_operand()?;
        match self.peek().clone() {
            Tok::U | Tok::W => {
                let weak = *self.peek() == Tok::W;
                self.bump();
                let right = self.bracket_operand()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(if weak { left.w(right) } else { left.u(right) })
            }
            Tok::LBrace => {
                let phi = match left {
                    PathFormula::Embed(phi) => *phi,
                    _ => {
                        return Err(ParseError {
                            span: left_span,
                            message: "left operand of an action-indexed until must be a state formula".into(),
                            violations: Vec::new(),
                        })
                    }
                };
                self.bump();
                let chi = self.act_expr()?;
                self.expect(Tok::RBrace, "`}`")?;
                let weak = match self.peek() {
                    Tok::U => false,
                    Tok::W => true,
                    _ => return self.error(format!("expected `U` or `W`, found {}", self.peek())),
                };
                self.bump();
                self.expect(Tok::LBrace, "`{`")?;
                let chi2 = self.act_expr()?;
                self.expect(Tok::RBrace, "`}`")?;
                let phi2 = self.state_expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(if weak {
                    PathFormula::wchi(phi, chi, chi2, phi2)
                } else {
                    PathFormula::uchi(phi, chi, chi2, phi2)
                })
            }
            other => self.error(format!("expected `U`, `W` or `{{`, found {other}")),
        }
    }

    fn act_expr(&mut self) -> PResult<ActionFormula> {
        let mut left = self.act_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = left.and(self.act_unary()?);
        }
        Ok(left)
    }

    fn act_unary(&mut self) -> PResult<ActionFormula> {
        let t = self.bump();
        match t.tok {
            Tok::Bang => Ok(self.act_unary()?.not()),
            Tok::Tau => Ok(ActionFormula::Tau),
            Tok::Ident(name) => Ok(ActionFormula::Act(self.action(&name, t.span)?)),
            Tok::LParen => {
                let inner = self.act_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError {
                span: t.span,
                message: format!("expected action formula, found {other}"),
                violations: Vec::new(),
            }),
        }
    }

    fn upml_expr(&mut self) -> PResult<UpmlFormula> {
        let mut left = self.upml_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = left.and(self.upml_unary()?);
        }
        Ok(left)
    }

    fn upml_unary(&mut self) -> PResult<UpmlFormula> {
        let t = self.bump();
        match t.tok {
            Tok::Bang => Ok(self.upml_unary()?.not()),
            Tok::Ax => Ok(self.upml_unary()?.ax()),
            Tok::AxSub(name) => {
                let a = self.action(&name, t.span)?;
                Ok(UpmlFormula::AxAct(a, Box::new(self.upml_unary()?)))
            }
            Tok::Ident(name) => Ok(UpmlFormula::Prop(self.prop(&name, t.span)?)),
            Tok::LParen => {
                let inner = self.upml_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError {
                span: t.span,
                message: format!("expected UPML formula, found {other}"),
                violations: Vec::new(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> StateFormula {
        StateFormula::prop(n)
    }

    #[test]
    fn parse_examples() {
        let phi = parse_state("E[!p U p]", LogicId::Ctl).unwrap();
        assert_eq!(phi, StateFormula::exists(p("p").not().embed().u(p("p").embed())));

        let phi = parse_state("E X_a true", LogicId::ActlStar).unwrap();
        let a = ActionToken::new("a").unwrap();
        assert_eq!(phi, StateFormula::exists(PathFormula::xact(a, StateFormula::True.embed())));

        let err = parse_state("p", LogicId::Actl).unwrap_err();
        assert_eq!(err.violations.len(), 1);
        assert!(err.to_string().contains("ACTL"));
    }

    #[test]
    fn render_examples() {
        let phi = StateFormula::exists(StateFormula::True.embed().x());
        assert_eq!(render_state(&phi), "E X true");
        assert_eq!(render_state(&p("p").and(p("q")).and(p("r"))), "((p & q) & r)");
        assert_eq!(render_upml(&UpmlFormula::ax_act("a", UpmlFormula::prop("p"))), "AX_a p");
    }

    #[test]
    fn canonicalizes_whitespace() {
        let phi = parse_state("E [ !p U p ]", LogicId::Ctl).unwrap();
        assert_eq!(render_state(&phi), "E[!p U p]");
    }

    #[test]
    fn unicode_aliases() {
        let ascii = parse_state("A X !p & E X_a true", LogicId::Uctl).unwrap();
        let uni = parse_state("∀ X ¬p ∧ ∃ X_a true", LogicId::Uctl).unwrap();
        assert_eq!(ascii, uni);
        assert_eq!(parse_action("τ").unwrap(), ActionFormula::Tau);
    }

    #[test]
    fn action_until_forms() {
        let phi = parse_state("E[true {a}U{tau} true]", LogicId::Actl).unwrap();
        let expected = StateFormula::exists(PathFormula::uchi(
            StateFormula::True,
            ActionFormula::act("a"),
            ActionFormula::Tau,
            StateFormula::True,
        ));
        assert_eq!(phi, expected);
        assert_eq!(render_state(&phi), "E[true {a}U{tau} true]");
        let w = parse_state("A[p {!a & b}W{tau} q]", LogicId::Uctl).unwrap();
        assert_eq!(render_state(&w), "A[p {(!a & b)}W{tau} q]");
        let x = parse_state("E X_{a & !b} p", LogicId::Uctl).unwrap();
        assert_eq!(render_state(&x), "E X_{(a & !b)} p");
    }

    #[test]
    fn star_path_conjunction_and_state_embedding() {
        let phi = parse_state("E (X p & [p U !q])", LogicId::CtlStar).unwrap();
        let pi = p("p").embed().x().and(p("p").embed().u(p("q").embed().not()));
        assert_eq!(phi, StateFormula::exists(pi));
        assert_eq!(render_state(&phi), "E (X p & [p U !q])");
        let nested = parse_state("E X A X p", LogicId::CtlStar).unwrap();
        assert_eq!(render_state(&nested), "E X A X p");
    }

    #[test]
    fn precedence() {
        let phi = parse_state("!p & E X q", LogicId::Ctl).unwrap();
        assert_eq!(phi, p("p").not().and(StateFormula::exists(p("q").embed().x())));
        let u = parse_upml("AX p & !q").unwrap();
        assert_eq!(u, UpmlFormula::prop("p").ax().and(UpmlFormula::prop("q").not()));
    }

    #[test]
    fn errors_carry_spans() {
        for bad in ["", "E[p U", "p &", "E X_ p", "(p", "p q", "E[p {a}U p]", "X_{a} p", "#"] {
            let err = parse_state(bad, LogicId::Uctl).unwrap_err();
            assert!(err.span.start <= err.span.end && err.span.end <= bad.len(), "{bad:?}: {err:?}");
        }
        assert!(parse_upml("true").is_err());
        assert!(parse_state("E X p", LogicId::Upml).is_err());
    }

    #[test]
    fn upml_forms() {
        let u = parse_upml("AX_a !(p & AX q)").unwrap();
        assert_eq!(render_upml(&u), "AX_a !(p & AX q)");
        assert_eq!(parse_upml(&render_upml(&u)).unwrap(), u);
    }
}
