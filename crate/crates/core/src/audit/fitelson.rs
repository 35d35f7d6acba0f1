use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::corpus::{ConnectiveSet, Corpus, Dedup, Limits};
use super::engine::{Connective, Judgement, MetaRule, Term};
use super::{metarule, status_of, AuditError, ConditionVerdict, Status, F, N, T};
use crate::consequence::{entails, Sequent};
use crate::formula::{BinaryOp, Formula};
use crate::semantics::{ConditionalTable, ConnectiveFamily, LogicSpec, TruthValue};

/// Which connective plays the stronger arrow; the other plays the weaker one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assignment {
    /// strong = indicative, weak = material
    IndicativeStrong,
    /// strong = material, weak = indicative
    MaterialStrong,
}

impl Assignment {
    pub const ALL: [Assignment; 2] = [Assignment::IndicativeStrong, Assignment::MaterialStrong];

    pub fn slug(self) -> &'static str {
        match self {
            Assignment::IndicativeStrong => "strong-indicative",
            Assignment::MaterialStrong => "strong-material",
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Condition labels in order.
pub const FITELSON_CONDITIONS: [&str; 8] = ["(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitelsonRow {
    pub logic: LogicSpec,
    pub assignment: Assignment,
    pub conditions: Vec<ConditionVerdict>,
}

impl FitelsonRow {
    pub fn get(&self, label: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|c| c.condition == label)
    }
}

/// Templates write the strong arrow as `->` and the weak one as `=>`.
struct Arrows {
    strong: Arc<Connective>,
    weak: Arc<Connective>,
}

impl Arrows {
    fn term(&self, template: &str) -> Term {
        Term::parse(template)
            .replace_op(BinaryOp::Cond, &self.strong)
            .replace_op(BinaryOp::MatCond, &self.weak)
    }

    fn rule(&self, rule: MetaRule) -> MetaRule {
        rule.map_terms(&|t| {
            t.replace_op(BinaryOp::Cond, &self.strong)
                .replace_op(BinaryOp::MatCond, &self.weak)
        })
    }
}

fn theorem_on_atoms(
    name: &str,
    term: &Term,
    logic: &LogicSpec,
) -> Result<ConditionVerdict, AuditError> {
    let atoms: Vec<(String, String)> = term
        .vars()
        .iter()
        .zip(["p", "q", "r"])
        .map(|(v, a)| (v.clone(), a.to_string()))
        .collect();
    let bindings: BTreeMap<String, Formula> = atoms
        .iter()
        .map(|(v, a)| (v.clone(), Formula::atom(a.as_str())))
        .collect();
    let verdict = entails(&Sequent::theorem(term.instantiate(&bindings)), logic)?;
    let pairs: Vec<(&str, &str)> = atoms
        .iter()
        .map(|(v, a)| (v.as_str(), a.as_str()))
        .collect();
    Ok(ConditionVerdict::new(
        name,
        *logic,
        status_of(verdict, &pairs),
    ))
}

/// Import-export for one arrow as the pair of theoremhood transfers. Settled
/// at once when the two sides have the same value at every triple.
fn import_export(
    name: &str,
    arrow: &Arc<Connective>,
    logic: &LogicSpec,
    corpus: &Corpus,
) -> Result<ConditionVerdict, AuditError> {
    let identity = TruthValue::ALL.iter().all(|&a| {
        TruthValue::ALL.iter().all(|&b| {
            TruthValue::ALL
                .iter()
                .all(|&c| arrow.apply(a, arrow.apply(b, c)) == arrow.apply(logic.conj(a, b), c))
        })
    });
    if identity {
        return Ok(ConditionVerdict::new(name, *logic, Status::HoldsPointwise)
            .note("A ~> (B ~> C) and (A & B) ~> C agree at all 27 triples"));
    }
    let nested = Term::parse("A -> (B -> C)").replace_op(BinaryOp::Cond, arrow);
    let imported = Term::parse("(A & B) -> C").replace_op(BinaryOp::Cond, arrow);
    let export = MetaRule::new(
        name,
        vec![Judgement::Entails(vec![], imported.clone())],
        Judgement::Entails(vec![], nested.clone()),
    );
    let import = MetaRule::new(
        name,
        vec![Judgement::Entails(vec![], nested)],
        Judgement::Entails(vec![], imported),
    );
    let first = metarule(&import, corpus, None)?;
    if !first.holds() {
        return Ok(first);
    }
    metarule(&export, corpus, None)
}

/// Published counterexample values for conditions (5) to (7).
fn expected_values(
    logic: &LogicSpec,
    assignment: Assignment,
    label: &str,
) -> Option<&'static [(&'static str, TruthValue)]> {
    use Assignment::*;
    let df =
        logic.conditional == ConditionalTable::DF && logic.family == ConnectiveFamily::StrongKleene;
    let cc =
        logic.conditional == ConditionalTable::CC && logic.family == ConnectiveFamily::StrongKleene;
    let qcc = logic.conditional == ConditionalTable::CC && logic.family == ConnectiveFamily::Quasi;
    match (label, assignment) {
        ("(6)", _) if df => Some(&[("A", N), ("B", F)]),
        ("(7)", _) if df => Some(&[("A", N), ("B", T), ("C", F)]),
        ("(6)", IndicativeStrong) if cc => Some(&[("A", N), ("B", F)]),
        ("(5)", MaterialStrong) if cc => Some(&[("A", N), ("B", F)]),
        ("(7)", MaterialStrong) if cc => Some(&[("A", N), ("B", T), ("C", F)]),
        ("(5)", IndicativeStrong) if qcc => Some(&[("A", T), ("B", N)]),
        ("(7)", MaterialStrong) if qcc => Some(&[("A", N), ("B", T), ("C", N)]),
        _ => None,
    }
}

fn arrows(logic: &LogicSpec, assignment: Assignment) -> Arrows {
    let ind = Arc::new(Connective::builtin(BinaryOp::Cond, logic));
    let mat = Arc::new(Connective::builtin(BinaryOp::MatCond, logic));
    match assignment {
        Assignment::IndicativeStrong => Arrows {
            strong: ind,
            weak: mat,
        },
        Assignment::MaterialStrong => Arrows {
            strong: mat,
            weak: ind,
        },
    }
}

fn condition(
    label: &str,
    a: &Arrows,
    logic: &LogicSpec,
    corpus: &Corpus,
    expected: Option<&[(&str, TruthValue)]>,
) -> Result<ConditionVerdict, AuditError> {
    let named = |v: ConditionVerdict| ConditionVerdict {
        condition: label.to_string(),
        ..v
    };
    let v = match label {
        "(1)" => theorem_on_atoms(label, &a.term("(A & B) => A"), logic)?,
        "(2)" => theorem_on_atoms(label, &a.term("(A & B) -> A"), logic)?,
        "(3)" => import_export(label, &a.weak, logic, corpus)?,
        "(4)" => import_export(label, &a.strong, logic, corpus)?,
        "(5)" => metarule(
            &a.rule(MetaRule::new(
                label,
                vec![Judgement::theorem("A -> B")],
                Judgement::theorem("A => B"),
            )),
            corpus,
            expected,
        )?,
        "(6)" => metarule(
            &a.rule(MetaRule::new(
                label,
                vec![Judgement::theorem("A => B")],
                Judgement::entails(&["A"], "B"),
            )),
            corpus,
            expected,
        )?,
        "(7)" => metarule(
            &a.rule(MetaRule::new(
                label,
                vec![Judgement::equiv("A", "B"), Judgement::theorem("A -> C")],
                Judgement::theorem("B -> C"),
            )),
            corpus,
            expected,
        )?,
        "(8)" => metarule(
            &MetaRule::new(
                label,
                vec![
                    Judgement::entails(&["A"], "B"),
                    Judgement::entails(&["A"], "C"),
                ],
                Judgement::entails(&["A"], "B & C"),
            ),
            corpus,
            expected,
        )?,
        other => unreachable!("unknown condition {other}"),
    };
    Ok(named(v))
}

/// Conditions (1) to (8) for one logic and one assignment of the two arrows.
pub fn fitelson_conditions(
    logic: &LogicSpec,
    assignment: Assignment,
    depth: usize,
) -> Result<FitelsonRow, AuditError> {
    let corpus = Corpus::search(logic, depth);
    let a = arrows(logic, assignment);
    let conditions = FITELSON_CONDITIONS
        .iter()
        .map(|label| {
            condition(
                label,
                &a,
                logic,
                &corpus,
                expected_values(logic, assignment, label),
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(FitelsonRow {
        logic: *logic,
        assignment,
        conditions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocking {
    /// Some condition fails with the indicative as the strong arrow, whatever
    /// the weak arrow is.
    Strong,
    /// Failures need the material conditional as the weak arrow.
    Weak,
    None,
}

impl fmt::Display for Blocking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Blocking::Strong => "strong",
            Blocking::Weak => "weak",
            Blocking::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingReport {
    pub logic: LogicSpec,
    pub blocking: Blocking,
    pub reason: String,
    /// Description of the candidate weak arrows considered.
    pub scope: String,
    pub candidates_tried: usize,
    /// A weak arrow satisfying all of its conditions, if one was found.
    pub weak_arrow: Option<Formula>,
}

/// Conditions that do not mention the weak arrow.
const STRONG_ONLY: [&str; 4] = ["(2)", "(4)", "(7)", "(8)"];
/// Conditions that do.
const WEAK_DEPENDENT: [&str; 4] = ["(1)", "(3)", "(5)", "(6)"];

/// Binary connectives over `x`, `y` definable at depth two or less from
/// `~ & | ->`, one per table, material and indicative first.
pub fn weak_arrow_candidates(logic: &LogicSpec) -> Vec<Connective> {
    let atoms = ["x".to_string(), "y".to_string()];
    let defs = Corpus::build(
        &atoms,
        2,
        &ConnectiveSet::standard(),
        logic,
        Dedup::Table,
        Limits::default(),
    )
    .expect("within limits");
    let mut out = vec![
        Connective::builtin(BinaryOp::MatCond, logic),
        Connective::builtin(BinaryOp::Cond, logic),
    ];
    for e in defs.entries {
        let c = Connective::define(e.formula.to_string(), e.formula, logic);
        if out.iter().all(|o| o.table() != c.table()) {
            out.push(c);
        }
    }
    out
}

pub fn blocking_classification(
    logic: &LogicSpec,
    depth: usize,
) -> Result<BlockingReport, AuditError> {
    blocking_with(
        &fitelson_conditions(logic, Assignment::IndicativeStrong, depth)?,
        depth,
    )
}

/// As [`blocking_classification`], reusing the conditions already computed
/// with the indicative as the strong arrow and the material as the weak one.
pub fn blocking_with(
    material_row: &FitelsonRow,
    depth: usize,
) -> Result<BlockingReport, AuditError> {
    assert_eq!(
        material_row.assignment,
        Assignment::IndicativeStrong,
        "row must use the material as the weak arrow"
    );
    let logic = &material_row.logic;
    let corpus = Corpus::search(logic, depth);
    let ind = Arc::new(Connective::builtin(BinaryOp::Cond, logic));
    let candidates = weak_arrow_candidates(logic);
    let scope = format!(
        "{} binary connectives definable from ~ & | -> at depth <= 2 over x, y; corpus depth {depth}",
        candidates.len()
    );
    let probe = Arrows {
        strong: ind.clone(),
        weak: ind.clone(),
    };
    for label in STRONG_ONLY {
        let v = condition(label, &probe, logic, &corpus, None)?;
        if !v.holds() {
            return Ok(BlockingReport {
                logic: *logic,
                blocking: Blocking::Strong,
                reason: format!(
                    "{label} fails with the indicative as the strong arrow: {}",
                    v.status.label()
                ),
                scope,
                candidates_tried: 0,
                weak_arrow: None,
            });
        }
    }
    let material_failures: Vec<&str> = material_row
        .conditions
        .iter()
        .filter(|c| !c.holds())
        .map(|c| c.condition.as_str())
        .collect();
    for (i, cand) in candidates.iter().enumerate() {
        let a = Arrows {
            strong: ind.clone(),
            weak: Arc::new(cand.clone()),
        };
        let mut ok = true;
        for label in WEAK_DEPENDENT {
            if !condition(label, &a, logic, &corpus, None)?.holds() {
                ok = false;
                break;
            }
        }
        if ok {
            let blocking = if material_failures.is_empty() {
                Blocking::None
            } else {
                Blocking::Weak
            };
            return Ok(BlockingReport {
                logic: *logic,
                blocking,
                reason: if material_failures.is_empty() {
                    "all conditions hold with the material conditional as the weak arrow".into()
                } else {
                    format!(
                        "{} fail with the material conditional as the weak arrow; the weak arrow {} satisfies (1), (3), (5), (6)",
                        material_failures.join(", "),
                        cand.template
                    )
                },
                scope,
                candidates_tried: i + 1,
                weak_arrow: Some(cand.template.clone()),
            });
        }
    }
    Ok(BlockingReport {
        logic: *logic,
        blocking: Blocking::Strong,
        reason: "no candidate weak arrow satisfies (1), (3), (5), (6)".into(),
        scope,
        candidates_tried: candidates.len(),
        weak_arrow: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_start_with_the_two_conditionals() {
        let c = weak_arrow_candidates(&LogicSpec::CC_TT);
        assert_eq!(c[0].template.to_string(), "x => y");
        assert_eq!(c[1].template.to_string(), "x -> y");
        assert!(c.len() > 10);
    }

    #[test]
    fn quasi_conjunction_elimination_for_material() {
        // (A & B) => A is not a theorem once & is quasi conjunction: A=1/2, B=1.
        let row = fitelson_conditions(&LogicSpec::QCC_TT, Assignment::IndicativeStrong, 2).unwrap();
        let w = row.get("(1)").unwrap().status.witness().unwrap().clone();
        assert!(w.has_values(&[("A", N), ("B", T)]));
    }
}
