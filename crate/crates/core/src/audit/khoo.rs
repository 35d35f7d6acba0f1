//! The eighteen-step derivation of `A => B |- A -> B` from import-export,
//! the material bound, supraclassicality, classicality of `=>`, structural
//! rules and reasoning by cases, instantiated with `A = p`, `B = q`.

use std::fmt;

use super::corpus::Corpus;
use super::engine::classical_countermodel;
use super::gibbard::{gibbard_conditions, reasoning_by_cases};
use super::{metarule, AuditError};
use crate::consequence::{entails, Sequent};
use crate::semantics::LogicSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepStatus {
    /// The step's rule is licensed in the logic.
    Sound,
    /// Not licensed, while everything it rests on is sound.
    Blocked,
    /// Not licensed, but it already rests on a step that is not sound.
    Unreached,
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepStatus::Sound => "sound",
            StepStatus::Blocked => "blocked",
            StepStatus::Unreached => "unreached",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub id: usize,
    pub claim: Sequent,
    /// Two-valued entailment rather than consequence in the logic.
    pub classical: bool,
    pub justification: &'static str,
    pub from: Vec<usize>,
    /// Whether the claim is true in the logic (or classically).
    pub claim_holds: bool,
    pub licensed: bool,
    pub status: StepStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub logic: LogicSpec,
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    pub fn with_status(&self, status: StepStatus) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| s.status == status)
            .map(|s| s.id)
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Classical,
    Supra,
    ImportExport,
    MaterialBound,
    Structural,
    /// An instance of classicality for `=>`: checked on the instance itself.
    Classicality,
    Cases,
}

const STEPS: [(&str, bool, Rule, &str, &[usize]); 18] = [
    ("~p & p |- q", true, Rule::Classical, "classical logic", &[]),
    ("|- (~p & p) -> q", false, Rule::Supra, "1, (iii)", &[1]),
    ("|- ~p -> p -> q", false, Rule::ImportExport, "2, (i)", &[2]),
    (
        "~p -> p -> q |- ~p => p -> q",
        false,
        Rule::MaterialBound,
        "(ii)",
        &[],
    ),
    (
        "|- ~p => p -> q",
        false,
        Rule::Structural,
        "3, 4, transitivity",
        &[3, 4],
    ),
    (
        "~p |- ~p => p -> q",
        false,
        Rule::Structural,
        "5, monotonicity",
        &[5],
    ),
    ("~p |- ~p", false, Rule::Structural, "reflexivity", &[]),
    (
        "~p |- p -> q",
        false,
        Rule::Classicality,
        "6, 7, (v) meta modus ponens",
        &[6, 7],
    ),
    ("q & p |- q", true, Rule::Classical, "classical logic", &[]),
    ("|- (q & p) -> q", false, Rule::Supra, "9, (iii)", &[9]),
    (
        "|- q -> p -> q",
        false,
        Rule::ImportExport,
        "10, (i)",
        &[10],
    ),
    (
        "q -> p -> q |- q => p -> q",
        false,
        Rule::MaterialBound,
        "(ii)",
        &[],
    ),
    (
        "|- q => p -> q",
        false,
        Rule::Structural,
        "11, 12, transitivity",
        &[11, 12],
    ),
    (
        "q |- q => p -> q",
        false,
        Rule::Structural,
        "13, monotonicity",
        &[13],
    ),
    ("q |- q", false, Rule::Structural, "reflexivity", &[]),
    (
        "q |- p -> q",
        false,
        Rule::Classicality,
        "14, 15, (v) meta modus ponens",
        &[14, 15],
    ),
    (
        "~p | q |- p -> q",
        false,
        Rule::Cases,
        "8, 16, reasoning by cases",
        &[8, 16],
    ),
    (
        "p => q |- p -> q",
        false,
        Rule::Classicality,
        "17, (v)",
        &[17],
    ),
];

/// Checks every step. Rules applied schematically (supraclassicality,
/// import-export, the material bound, structural rules, reasoning by cases)
/// are licensed when the corresponding audit finds no counterexample; the
/// classicality steps are licensed when the particular inference holds.
pub fn khoo_trace(logic: &LogicSpec, depth: usize) -> Result<ProofTrace, AuditError> {
    let row = gibbard_conditions(logic, depth)?;
    let holds = |c: &str| row.get(c).is_some_and(|v| v.holds());
    let corpus = Corpus::search(logic, depth);
    let cases = metarule(&reasoning_by_cases(), &corpus.by_designation(), None)?.holds();

    let mut steps: Vec<ProofStep> = Vec::new();
    for (i, (text, classical, rule, justification, from)) in STEPS.iter().enumerate() {
        let claim: Sequent = text.parse().expect("fixed step");
        let claim_holds = if *classical {
            classical_countermodel(&claim.premises, &claim.conclusion).is_none()
        } else {
            entails(&claim, logic)?.is_valid()
        };
        let licensed = match rule {
            Rule::Classical => claim_holds,
            Rule::Supra => holds("(iii)"),
            Rule::ImportExport => holds("(i)"),
            Rule::MaterialBound => holds("(ii)"),
            Rule::Structural => holds("TRM"),
            Rule::Cases => cases,
            Rule::Classicality => !from.iter().all(|&j| steps[j - 1].claim_holds) || claim_holds,
        };
        let rests_on_unsound = ancestors(from)
            .iter()
            .any(|&j| steps[j - 1].status != StepStatus::Sound);
        let status = match (licensed, rests_on_unsound) {
            (true, _) => StepStatus::Sound,
            (false, false) => StepStatus::Blocked,
            (false, true) => StepStatus::Unreached,
        };
        steps.push(ProofStep {
            id: i + 1,
            claim,
            classical: *classical,
            justification,
            from: from.to_vec(),
            claim_holds,
            licensed,
            status,
        });
    }
    Ok(ProofTrace {
        logic: *logic,
        steps,
    })
}

fn ancestors(from: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut stack = from.to_vec();
    while let Some(j) = stack.pop() {
        if !out.contains(&j) {
            out.push(j);
            stack.extend_from_slice(STEPS[j - 1].4);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ancestry() {
        let mut a = ancestors(&[8, 16]);
        a.sort();
        assert_eq!(
            a,
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16]
        );
        assert!(ancestors(&[]).is_empty());
    }

    #[test]
    fn steps_parse() {
        for (text, ..) in STEPS {
            text.parse::<Sequent>().unwrap();
        }
    }
}
