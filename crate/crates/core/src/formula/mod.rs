//! Formula syntax: the AST, the concrete text grammar and structural helpers.
//!
//! The surface syntax is ASCII:
//!
//! | token | connective                 |
//! |-------|----------------------------|
//! | `~`   | negation                   |
//! | `&`   | conjunction                |
//! | `\|`  | disjunction                |
//! | `->`  | indicative conditional     |
//! | `=>`  | material conditional       |
//! | `<->` | indicative biconditional   |
//! | `<=>` | material biconditional     |
//!
//! `~` binds tightest, then `&` and `|` (one level, left associative), then the
//! four conditionals (one level, right associative). The Unicode forms
//! `¬ ∧ ∨ → ⊃ ↔ ⊃⊂` are accepted on input but never printed.

mod parser;
mod schema;

use std::fmt;

pub use parser::{parse, ParseError};
pub use schema::{Schema, SchemaError};

/// A propositional formula over named atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
    Disj(Box<Formula>, Box<Formula>),
    /// Indicative conditional `->`.
    Cond(Box<Formula>, Box<Formula>),
    /// Material conditional `=>`.
    MatCond(Box<Formula>, Box<Formula>),
    /// Indicative biconditional `<->`.
    IndBicond(Box<Formula>, Box<Formula>),
    /// Material biconditional `<=>`.
    MatBicond(Box<Formula>, Box<Formula>),
}

/// The binary connectives, used to build and take apart formulas uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    Conj,
    Disj,
    Cond,
    MatCond,
    IndBicond,
    MatBicond,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 6] = [
        BinaryOp::Conj,
        BinaryOp::Disj,
        BinaryOp::Cond,
        BinaryOp::MatCond,
        BinaryOp::IndBicond,
        BinaryOp::MatBicond,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Conj => "&",
            BinaryOp::Disj => "|",
            BinaryOp::Cond => "->",
            BinaryOp::MatCond => "=>",
            BinaryOp::IndBicond => "<->",
            BinaryOp::MatBicond => "<=>",
        }
    }

    /// Binding strength; higher binds tighter.
    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Conj | BinaryOp::Disj => 2,
            _ => 1,
        }
    }

    fn right_assoc(self) -> bool {
        self.precedence() == 1
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(sub: Formula) -> Formula {
        Formula::Neg(Box::new(sub))
    }

    pub fn binary(op: BinaryOp, left: Formula, right: Formula) -> Formula {
        let (l, r) = (Box::new(left), Box::new(right));
        match op {
            BinaryOp::Conj => Formula::Conj(l, r),
            BinaryOp::Disj => Formula::Disj(l, r),
            BinaryOp::Cond => Formula::Cond(l, r),
            BinaryOp::MatCond => Formula::MatCond(l, r),
            BinaryOp::IndBicond => Formula::IndBicond(l, r),
            BinaryOp::MatBicond => Formula::MatBicond(l, r),
        }
    }

    pub fn conj(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::Conj, left, right)
    }

    pub fn disj(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::Disj, left, right)
    }

    pub fn cond(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::Cond, left, right)
    }

    pub fn mat_cond(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::MatCond, left, right)
    }

    pub fn ind_bicond(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::IndBicond, left, right)
    }

    pub fn mat_bicond(left: Formula, right: Formula) -> Formula {
        Formula::binary(BinaryOp::MatBicond, left, right)
    }

    /// Splits a binary node into its connective and operands.
    pub fn as_binary(&self) -> Option<(BinaryOp, &Formula, &Formula)> {
        let (op, l, r) = match self {
            Formula::Conj(l, r) => (BinaryOp::Conj, l, r),
            Formula::Disj(l, r) => (BinaryOp::Disj, l, r),
            Formula::Cond(l, r) => (BinaryOp::Cond, l, r),
            Formula::MatCond(l, r) => (BinaryOp::MatCond, l, r),
            Formula::IndBicond(l, r) => (BinaryOp::IndBicond, l, r),
            Formula::MatBicond(l, r) => (BinaryOp::MatBicond, l, r),
            Formula::Atom(_) | Formula::Neg(_) => return None,
        };
        Some((op, l, r))
    }

    /// Atoms in first-occurrence order (left to right), without duplicates.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(name) => {
                if !out.iter().any(|a| a == name) {
                    out.push(name.clone());
                }
            }
            Formula::Neg(sub) => sub.collect_atoms(out),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Logical complexity: 0 for atoms, one more than the deepest child otherwise.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Neg(sub) => 1 + sub.complexity(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.complexity().max(r.complexity())
            }
        }
    }

    /// True when the formula contains neither conditional nor biconditional.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Neg(sub) => sub.is_boolean(),
            Formula::Conj(l, r) | Formula::Disj(l, r) => l.is_boolean() && r.is_boolean(),
            _ => false,
        }
    }

    /// Simultaneous substitution of atoms by formulas; unmapped atoms stay put.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(name) => map(name).unwrap_or_else(|| self.clone()),
            Formula::Neg(sub) => Formula::neg(sub.substitute(map)),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                Formula::binary(op, l.substitute(map), r.substitute(map))
            }
        }
    }

    fn fmt_operand(
        &self,
        f: &mut fmt::Formatter<'_>,
        parent: BinaryOp,
        right: bool,
    ) -> fmt::Result {
        let needs_parens = match self.as_binary() {
            None => false,
            // Same connective in its associative position reads without parentheses;
            // every other binary operand is bracketed.
            Some((op, _, _)) => !(op == parent && right == parent.right_assoc()),
        };
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Neg(sub) => {
                f.write_str("~")?;
                if sub.as_binary().is_some() {
                    write!(f, "({sub})")
                } else {
                    write!(f, "{sub}")
                }
            }
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                l.fmt_operand(f, op, false)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_operand(f, op, true)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Renders a formula in the canonical ASCII syntax.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn render_examples() {
        let f = Formula::cond(
            Formula::conj(Formula::atom("p"), Formula::atom("q")),
            Formula::atom("r"),
        );
        assert_eq!(render(&f), "(p & q) -> r");
        assert_eq!(render(&Formula::neg(Formula::atom("p"))), "~p");
        let f = Formula::cond(
            Formula::atom("p"),
            Formula::cond(Formula::atom("q"), Formula::atom("r")),
        );
        assert_eq!(render(&f), "p -> q -> r");
    }

    #[test]
    fn render_brackets_left_nested_conditionals() {
        assert_eq!(render(&p("(p -> q) -> r")), "(p -> q) -> r");
        assert_eq!(render(&p("p & q & r")), "p & q & r");
        assert_eq!(render(&p("p & (q & r)")), "p & (q & r)");
        assert_eq!(render(&p("~(p | q)")), "~(p | q)");
        assert_eq!(render(&p("~~p")), "~~p");
        assert_eq!(render(&p("p -> (q => r)")), "p -> (q => r)");
    }

    #[test]
    fn atoms_first_occurrence() {
        assert_eq!(p("(p & q) -> p").atoms(), vec!["p", "q"]);
        assert_eq!(p("p").atoms(), vec!["p"]);
        assert_eq!(p("(p -> ~p) | (~p -> p)").atoms(), vec!["p"]);
        assert_eq!(p("r & (q | r) -> p").atoms(), vec!["r", "q", "p"]);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(p("p").complexity(), 0);
        assert_eq!(p("~p").complexity(), 1);
        assert_eq!(p("(p & q) -> r").complexity(), 2);
        assert_eq!(p("~~~p | q").complexity(), 4);
    }

    #[test]
    fn boolean_fragment() {
        assert!(p("~(p & q) | r").is_boolean());
        assert!(!p("p & (q -> r)").is_boolean());
        assert!(!p("p => q").is_boolean());
    }
}
