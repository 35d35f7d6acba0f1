use indexmap::IndexMap;

use super::corpus::Corpus;
use super::engine::{Judgement, MetaRule};
use super::{
    metarule, schema_entailment, schema_equivalence, AuditError, ConditionVerdict, Status, F, N, T,
};
use crate::consequence::{entails, Sequent, Verdict};
use crate::formula::{parse, Formula};
use crate::semantics::{classical_refine, eval, eval_classical, LogicSpec, TruthValue, Valuation};

/// Column labels of the collapse-premise overview, in order.
pub const GIBBARD_COLUMNS: [&str; 10] = [
    "(i)", "(ii)", "(iii)", "CE", "(iv)", "(v)", "TRM", "==", "<->", "<=>",
];

const AB: &[(&str, &str)] = &[("A", "p"), ("B", "q")];
const ABC: &[(&str, &str)] = &[("A", "p"), ("B", "q"), ("C", "r")];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GibbardRow {
    pub logic: LogicSpec,
    /// One verdict per entry of [`GIBBARD_COLUMNS`].
    pub columns: Vec<ConditionVerdict>,
}

impl GibbardRow {
    pub fn get(&self, column: &str) -> Option<&ConditionVerdict> {
        self.columns.iter().find(|c| c.condition == column)
    }
}

pub(crate) fn supraclassicality() -> MetaRule {
    MetaRule::new(
        "(iii)",
        vec![Judgement::classical(&["A"], "B")],
        Judgement::theorem("A -> B"),
    )
}

pub(crate) fn meta_modus_ponens() -> MetaRule {
    MetaRule::new(
        "meta modus ponens",
        vec![Judgement::theorem("A => B")],
        Judgement::entails(&["A"], "B"),
    )
}

pub(crate) fn reasoning_by_cases() -> MetaRule {
    MetaRule::new(
        "reasoning by cases",
        vec![
            Judgement::entails(&["A"], "C"),
            Judgement::entails(&["B"], "C"),
        ],
        Judgement::entails(&["A | B"], "C"),
    )
}

fn structural_rules() -> [MetaRule; 2] {
    [
        MetaRule::new(
            "transitivity",
            vec![
                Judgement::entails(&["A"], "B"),
                Judgement::entails(&["B"], "C"),
            ],
            Judgement::entails(&["A"], "C"),
        ),
        MetaRule::new(
            "monotonicity",
            vec![Judgement::entails(&["A"], "C")],
            Judgement::entails(&["A", "B"], "C"),
        ),
    ]
}

/// Every triple of values at which `A -> (B -> C)` and `(A & B) -> C` differ.
pub fn import_export_mismatches(logic: &LogicSpec) -> Vec<[TruthValue; 3]> {
    let mut out = Vec::new();
    for a in TruthValue::ALL {
        for b in TruthValue::ALL {
            for c in TruthValue::ALL {
                if logic.cond(a, logic.cond(b, c)) != logic.cond(logic.conj(a, b), c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn import_export(logic: &LogicSpec) -> Result<ConditionVerdict, AuditError> {
    let v = schema_equivalence("(i)", "A -> (B -> C)", "(A & B) -> C", ABC, logic)?;
    let mismatches = import_export_mismatches(logic);
    Ok(match mismatches.first() {
        None => v.note("value identity holds at all 27 triples"),
        Some([a, b, c]) => v.note(format!(
            "values differ at {} triples, first A={a} B={b} C={c}",
            mismatches.len()
        )),
    })
}

fn classicality(logic: &LogicSpec, corpus: &Corpus) -> Result<ConditionVerdict, AuditError> {
    let absorption = schema_equivalence("absorption", "(A => B) & A", "A & B", AB, logic)?;
    let mp = metarule(&meta_modus_ponens(), corpus, None)?;
    let mut v = match (&absorption.status, &mp.status) {
        (Status::Fails(_), _) => ConditionVerdict::new("(v)", *logic, absorption.status.clone()),
        _ => ConditionVerdict::new("(v)", *logic, mp.status.clone()),
    };
    v.notes.push(format!(
        "absorption (A => B) & A == A & B: {}",
        absorption.status.label()
    ));
    v.notes
        .push(format!("meta modus ponens for =>: {}", mp.status.label()));
    // The counterexample in the Strong Kleene logics.
    if logic.family == crate::semantics::ConnectiveFamily::StrongKleene {
        v = v.expecting(&[("A", N), ("B", F)]);
    }
    Ok(v)
}

fn structural(logic: &LogicSpec, corpus: &Corpus) -> Result<ConditionVerdict, AuditError> {
    let reduced = corpus.by_designation();
    let reflexivity = schema_entailment("reflexivity", &["A"], "A", &[("A", "p")], logic)?;
    let mut parts = vec![reflexivity];
    for rule in structural_rules() {
        parts.push(metarule(&rule, &reduced, None)?);
    }
    let status = parts
        .iter()
        .find(|p| !p.holds())
        .map(|p| p.status.clone())
        .unwrap_or(Status::NoCounterexampleToDepth(corpus.max_depth));
    let mut v = ConditionVerdict::new("TRM", *logic, status);
    for p in &parts {
        v.notes
            .push(format!("{}: {}", p.condition, p.status.label()));
    }
    Ok(v)
}

/// The ten columns of the collapse-premise overview for one logic.
pub fn gibbard_conditions(logic: &LogicSpec, depth: usize) -> Result<GibbardRow, AuditError> {
    let corpus = Corpus::search(logic, depth);
    let mut columns = Vec::new();
    columns.push(import_export(logic)?);
    columns.push(schema_entailment("(ii)", &["A -> B"], "A => B", AB, logic)?);

    let rule = supraclassicality();
    let mut supra = if logic.conditional == crate::semantics::ConditionalTable::CC {
        metarule(&rule, &corpus, Some(&[("A", N), ("B", F)]))?
            .require_failure(&rule, &[("A", "p & ~p"), ("B", "q")])?
    } else {
        metarule(&rule, &corpus, None)?
    };
    if logic.conditional == crate::semantics::ConditionalTable::DF {
        let r = classical_refinement(logic, depth)?;
        supra.notes.push(match &r.counterexample {
            None => format!(
                "classical refinement property holds on {} formulas",
                r.formulas_checked
            ),
            Some(c) => format!("classical refinement property fails: {}", c.formula),
        });
    }
    columns.push(supra);

    columns.push(schema_entailment("CE", &[], "(A & B) -> B", AB, logic)?);

    let lle = MetaRule::new(
        "(iv)",
        vec![Judgement::equiv("A", "A1")],
        Judgement::equiv("A -> B", "A1 -> B"),
    );
    let mut lle_v = metarule(&lle, &corpus, None)?;
    if logic.conditional == crate::semantics::ConditionalTable::DF {
        lle_v = lle_v.require_failure(
            &lle,
            &[
                ("A", "p | ~p"),
                ("A1", "(p -> ~p) | (~p -> p)"),
                ("B", "p & ~p"),
            ],
        )?;
    }
    columns.push(lle_v);

    columns.push(classicality(logic, &corpus)?);
    columns.push(structural(logic, &corpus)?);

    let c = collapse_status(logic)?;
    let mut eq = ConditionVerdict::new("==", *logic, c.equivalent());
    eq.notes = vec![
        format!("A => B |- A -> B: {}", c.mat_to_ind.status.label()),
        format!("A -> B |- A => B: {}", c.ind_to_mat.status.label()),
    ];
    columns.push(eq);
    columns.push(ConditionVerdict {
        condition: "<->".into(),
        ..c.ind_bicond_theorem
    });
    columns.push(ConditionVerdict {
        condition: "<=>".into(),
        ..c.mat_bicond_theorem
    });
    Ok(GibbardRow {
        logic: *logic,
        columns,
    })
}

/// How the material and indicative conditionals relate on atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseStatus {
    /// `A => B |- A -> B`
    pub mat_to_ind: ConditionVerdict,
    /// `A -> B |- A => B`
    pub ind_to_mat: ConditionVerdict,
    /// `|- (A => B) <=> (A -> B)`
    pub mat_bicond_theorem: ConditionVerdict,
    /// `|- (A => B) <-> (A -> B)`
    pub ind_bicond_theorem: ConditionVerdict,
}

impl CollapseStatus {
    /// Mutual entailment, failing with the first failing direction's witness.
    pub fn equivalent(&self) -> Status {
        [&self.mat_to_ind, &self.ind_to_mat]
            .into_iter()
            .find(|v| !v.holds())
            .map(|v| v.status.clone())
            .unwrap_or(Status::HoldsPointwise)
    }

    pub fn all(&self) -> [&ConditionVerdict; 4] {
        [
            &self.mat_to_ind,
            &self.ind_to_mat,
            &self.mat_bicond_theorem,
            &self.ind_bicond_theorem,
        ]
    }
}

pub fn collapse_status(logic: &LogicSpec) -> Result<CollapseStatus, AuditError> {
    Ok(CollapseStatus {
        mat_to_ind: schema_entailment("A => B |- A -> B", &["A => B"], "A -> B", AB, logic)?,
        ind_to_mat: schema_entailment("A -> B |- A => B", &["A -> B"], "A => B", AB, logic)?,
        mat_bicond_theorem: schema_entailment(
            "|- (A => B) <=> (A -> B)",
            &[],
            "(A => B) <=> (A -> B)",
            AB,
            logic,
        )?,
        ind_bicond_theorem: schema_entailment(
            "|- (A => B) <-> (A -> B)",
            &[],
            "(A => B) <-> (A -> B)",
            AB,
            logic,
        )?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connexivity {
    /// `p -> q |- ~(p -> ~q)`
    pub indicative: Verdict,
    /// `~p | q |- ~(~p | ~q)`
    pub material: Verdict,
}

pub fn connexivity_check(logic: &LogicSpec) -> Result<Connexivity, AuditError> {
    let check = |s: &str| entails(&s.parse::<Sequent>().expect("fixed sequent"), logic);
    Ok(Connexivity {
        indicative: check("p -> q |- ~(p -> ~q)")?,
        material: check("~p | q |- ~(~p | ~q)")?,
    })
}

/// Behaviour that separates the quasi connectives from Strong Kleene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiReport {
    pub logic: LogicSpec,
    /// Values of `(p -> p) & (~p -> ~p)` at `p = 0, 1/2, 1`.
    pub self_conditionals: Vec<(Valuation, TruthValue)>,
    /// `~p |- p => q`
    pub neg_antecedent: Verdict,
    /// `q |- p => q`
    pub true_consequent: Verdict,
    /// `|- (p -> q) | (q -> p)`
    pub linearity: Verdict,
    /// Value triples where import-export fails as an identity of values.
    pub import_export_mismatches: Vec<[TruthValue; 3]>,
}

pub fn quasi_signature_checks(logic: &LogicSpec) -> Result<QuasiReport, AuditError> {
    let f = parse("(p -> p) & (~p -> ~p)").expect("fixed formula");
    let self_conditionals = TruthValue::ALL
        .iter()
        .map(|&v| {
            let val = Valuation::from_pairs([("p", v)]);
            let value = eval(&f, &val, logic).expect("p bound");
            (val, value)
        })
        .collect();
    let check = |s: &str| entails(&s.parse::<Sequent>().expect("fixed sequent"), logic);
    Ok(QuasiReport {
        logic: *logic,
        self_conditionals,
        neg_antecedent: check("~p |- p => q")?,
        true_consequent: check("q |- p => q")?,
        linearity: check("|- (p -> q) | (q -> p)")?,
        import_export_mismatches: import_export_mismatches(logic),
    })
}

/// A formula whose definite value is lost when void atoms are made classical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementFailure {
    pub formula: Formula,
    pub valuation: Valuation,
    pub refinement: Valuation,
    pub value: TruthValue,
    pub refined_value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    pub logic: LogicSpec,
    pub formulas_checked: usize,
    pub counterexample: Option<RefinementFailure>,
}

/// Checks that every value 1 or 0 of a corpus formula survives every
/// classical refinement of the valuation, with conditionals read materially.
/// The corpus keeps one formula per pair of tables, which is all this
/// property depends on.
pub fn classical_refinement(
    logic: &LogicSpec,
    depth: usize,
) -> Result<RefinementReport, AuditError> {
    let corpus = Corpus::search(logic, depth);
    let atoms = &corpus.atoms;
    let n = atoms.len();
    for e in &corpus.entries {
        for w in 0..3usize.pow(n as u32) {
            let v = crate::consequence::valuation_at(atoms, w);
            let value = e.table[w];
            if !value.is_classical() {
                continue;
            }
            let void: Vec<String> = v.void_atoms().iter().map(|s| s.to_string()).collect();
            for bits in 0..1usize << void.len() {
                let choice: IndexMap<String, bool> = void
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.clone(), (bits >> (void.len() - 1 - i)) & 1 == 1))
                    .collect();
                let refinement = classical_refine(&v, &choice).expect("choice covers void atoms");
                let lookup = |a: &str| refinement.get(a).map(|x| x == T);
                let refined_value = eval_classical(&e.formula, &lookup).expect("atoms bound");
                if refined_value != (value == T) {
                    return Ok(RefinementReport {
                        logic: *logic,
                        formulas_checked: corpus.len(),
                        counterexample: Some(RefinementFailure {
                            formula: e.formula.clone(),
                            valuation: v,
                            refinement,
                            value,
                            refined_value,
                        }),
                    });
                }
            }
        }
    }
    Ok(RefinementReport {
        logic: *logic,
        formulas_checked: corpus.len(),
        counterexample: None,
    })
}
