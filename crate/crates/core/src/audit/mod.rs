//! Audits of structural principles for the conditional logics.
//!
//! Object-level schema claims (a fixed entailment or equivalence between
//! schemas) are decided exactly by instantiating distinct metavariables with
//! distinct atoms: every combination of metavariable values is then realised
//! by some valuation. Metainferences ("if X is valid then Y is valid") are
//! searched over a bounded corpus and never reported as holding outright.

pub mod corpus;
pub mod engine;
mod fitelson;
mod gibbard;
mod khoo;
mod mandelkern;

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::consequence::{entails, equivalent, ConsequenceError, Sequent, Verdict};
use crate::formula::Formula;
use crate::semantics::{LogicSpec, TruthValue, Valuation};

pub use corpus::{corpus, ConnectiveSet, Corpus, LimitExceeded};
pub use engine::{Judgement, MetaRule, Outcome, SearchOptions, Term};
pub use fitelson::{
    blocking_classification, blocking_with, fitelson_conditions, weak_arrow_candidates, Assignment,
    Blocking, BlockingReport, FitelsonRow, FITELSON_CONDITIONS,
};
pub use gibbard::{
    classical_refinement, collapse_status, connexivity_check, gibbard_conditions,
    import_export_mismatches, quasi_signature_checks, CollapseStatus, Connexivity, GibbardRow,
    QuasiReport, RefinementFailure, RefinementReport, GIBBARD_COLUMNS,
};
pub use khoo::{khoo_trace, ProofStep, ProofTrace, StepStatus};
pub use mandelkern::{mandelkern_audit, MandelkernReport, MANDELKERN_PRINCIPLES};

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error(transparent)]
    Corpus(#[from] LimitExceeded),
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
    #[error("counterexample failed re-validation: {0}")]
    InvalidWitness(String),
}

/// A violation: metavariable bindings, the valuation at which the instance
/// fails, and the values the metavariables take there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub bindings: BTreeMap<String, Formula>,
    pub valuation: Valuation,
    pub values: IndexMap<String, TruthValue>,
}

impl Witness {
    /// A witness for a schema instantiated with atoms, so metavariable values
    /// are read off the valuation.
    fn from_atoms(bindings: &[(&str, &str)], valuation: Valuation) -> Witness {
        let values = bindings
            .iter()
            .map(|(m, a)| (m.to_string(), valuation.get(a).expect("atom in valuation")))
            .collect();
        let bindings = bindings
            .iter()
            .map(|(m, a)| (m.to_string(), Formula::atom(*a)))
            .collect();
        Witness {
            bindings,
            valuation,
            values,
        }
    }

    /// True when every listed metavariable has the listed value.
    pub fn has_values(&self, expected: &[(&str, TruthValue)]) -> bool {
        expected.iter().all(|(m, v)| self.values.get(*m) == Some(v))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bindings: Vec<String> = self
            .bindings
            .iter()
            .map(|(k, v)| format!("{k} := {v}"))
            .collect();
        let values: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            f,
            "{} at {} ({})",
            bindings.join(", "),
            self.valuation,
            values.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// Verified at every tuple of values; exact for truth-functional schemas.
    HoldsPointwise,
    /// The bounded corpus search found nothing.
    NoCounterexampleToDepth(usize),
    Fails(Witness),
}

impl Status {
    pub fn holds(&self) -> bool {
        !matches!(self, Status::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Status::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Status::HoldsPointwise => "holds-pointwise".into(),
            Status::NoCounterexampleToDepth(d) => format!("no-counterexample-to-depth-{d}"),
            Status::Fails(_) => "fails".into(),
        }
    }

    pub fn mark(&self) -> &'static str {
        if self.holds() {
            "yes"
        } else {
            "no"
        }
    }
}

/// The verdict on one named condition in one logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub condition: String,
    pub logic: LogicSpec,
    pub status: Status,
    /// Values the expected counterexample gives the metavariables, if any.
    pub expected_witness: Option<Vec<(String, TruthValue)>>,
    /// For metainference searches: whether a per-valuation argument settles the rule.
    pub pointwise_certificate: Option<bool>,
    /// Specific instances that must fail, with whether they did.
    pub regressions: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl ConditionVerdict {
    pub fn new(condition: impl Into<String>, logic: LogicSpec, status: Status) -> ConditionVerdict {
        ConditionVerdict {
            condition: condition.into(),
            logic,
            status,
            expected_witness: None,
            pointwise_certificate: None,
            regressions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.status.holds()
    }

    fn expecting(mut self, values: &[(&str, TruthValue)]) -> ConditionVerdict {
        self.expected_witness = Some(values.iter().map(|(m, v)| (m.to_string(), *v)).collect());
        self
    }

    fn note(mut self, text: impl Into<String>) -> ConditionVerdict {
        self.notes.push(text.into());
        self
    }

    /// Whether the reported witness carries the expected values and every
    /// required failing instance fails.
    pub fn witness_agrees(&self) -> bool {
        let values = match (&self.expected_witness, self.status.witness()) {
            (Some(exp), Some(w)) => exp.iter().all(|(m, v)| w.values.get(m) == Some(v)),
            _ => true,
        };
        values && self.regressions.iter().all(|(_, failed)| *failed)
    }

    /// Checks that `rule` fails on the given instance and records the result.
    fn require_failure(
        mut self,
        rule: &MetaRule,
        bindings: &[(&str, &str)],
    ) -> Result<ConditionVerdict, AuditError> {
        let map: BTreeMap<String, Formula> = bindings
            .iter()
            .map(|(m, f)| {
                (
                    m.to_string(),
                    crate::formula::parse(f).expect("instance formula"),
                )
            })
            .collect();
        let (premises_hold, conclusion_holds) = rule.check_instance(&map, &self.logic)?;
        let text: Vec<String> = map.iter().map(|(m, f)| format!("{m} := {f}")).collect();
        self.regressions
            .push((text.join(", "), premises_hold && !conclusion_holds));
        Ok(self)
    }
}

/// Machine-readable form of a verdict together with its comparison to an expected cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub condition: String,
    pub logic: String,
    pub status: String,
    pub witness: Option<Witness>,
    pub paper_expectation: String,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionVerdict {
    /// Compares with an expected truth value; `None` means nothing is expected.
    pub fn record(&self, expected: Option<bool>) -> VerdictRecord {
        let (paper_expectation, matches) = match expected {
            Some(e) => (
                if e { "holds" } else { "fails" }.to_string(),
                e == self.holds() && self.witness_agrees(),
            ),
            None => ("not stated".to_string(), true),
        };
        VerdictRecord {
            condition: self.condition.clone(),
            logic: self.logic.slug(),
            status: self.status.label(),
            witness: self.status.witness().cloned(),
            paper_expectation,
            matches,
            notes: self.notes.clone(),
        }
    }
}

/// Exact decision of a schema entailment by atom instantiation.
fn schema_entailment(
    name: &str,
    premises: &[&str],
    conclusion: &str,
    atoms: &[(&str, &str)],
    logic: &LogicSpec,
) -> Result<ConditionVerdict, AuditError> {
    let inst = |s: &str| Term::parse(s).instantiate(&atom_bindings(atoms));
    let seq = Sequent::new(premises.iter().map(|p| inst(p)).collect(), inst(conclusion));
    Ok(ConditionVerdict::new(
        name,
        *logic,
        status_of(entails(&seq, logic)?, atoms),
    ))
}

fn schema_equivalence(
    name: &str,
    a: &str,
    b: &str,
    atoms: &[(&str, &str)],
    logic: &LogicSpec,
) -> Result<ConditionVerdict, AuditError> {
    let inst = |s: &str| Term::parse(s).instantiate(&atom_bindings(atoms));
    Ok(ConditionVerdict::new(
        name,
        *logic,
        status_of(equivalent(&inst(a), &inst(b), logic)?, atoms),
    ))
}

fn atom_bindings(atoms: &[(&str, &str)]) -> BTreeMap<String, Formula> {
    atoms
        .iter()
        .map(|(m, a)| (m.to_string(), Formula::atom(*a)))
        .collect()
}

fn status_of(v: Verdict, atoms: &[(&str, &str)]) -> Status {
    match v {
        Verdict::Valid => Status::HoldsPointwise,
        Verdict::Invalid(cm) => Status::Fails(Witness::from_atoms(atoms, cm.valuation)),
    }
}

/// Runs a metainference search. With expected witness values the filtered
/// search runs first, so the reported counterexample carries those values
/// whenever one exists in the corpus. A rule with a pointwise certificate is
/// not searched: no corpus can contain a counterexample.
fn metarule(
    rule: &MetaRule,
    corpus: &Corpus,
    expected: Option<&[(&str, TruthValue)]>,
) -> Result<ConditionVerdict, AuditError> {
    let logic = corpus.logic;
    let certificate = rule.pointwise_certificate(&logic);
    // A certified rule has no counterexample in any corpus.
    let mut status =
        (certificate == Some(true)).then_some(Status::NoCounterexampleToDepth(corpus.max_depth));
    if let (None, Some(values)) = (&status, expected) {
        let required = values.iter().map(|(m, v)| (m.to_string(), *v)).collect();
        if let Outcome::Counterexample(w) = engine::search(
            rule,
            corpus,
            &SearchOptions {
                required,
                parallel: true,
            },
        )? {
            status = Some(Status::Fails(w));
        }
    }
    let status = match status {
        Some(s) => s,
        None => match engine::search(
            rule,
            corpus,
            &SearchOptions {
                parallel: true,
                ..SearchOptions::default()
            },
        )? {
            Outcome::NoCounterexample => Status::NoCounterexampleToDepth(corpus.max_depth),
            Outcome::Counterexample(w) => Status::Fails(w),
        },
    };
    let mut v = ConditionVerdict::new(rule.name.clone(), logic, status);
    v.pointwise_certificate = certificate;
    if let Some(values) = expected {
        v = v.expecting(values);
    }
    Ok(v)
}

pub(crate) use TruthValue::{F, N, T};
