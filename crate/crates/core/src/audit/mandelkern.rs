use super::corpus::Corpus;
use super::engine::{Judgement, MetaRule, Term};
use super::{atom_bindings, metarule, AuditError, ConditionVerdict, Status, Witness, F, N, T};
use crate::consequence::{valuation_at, Sequent};
use crate::semantics::{eval, ConditionalTable, LogicSpec, TruthValue};

pub const MANDELKERN_PRINCIPLES: [&str; 6] = [
    "Conditional Introduction",
    "Nothing Added",
    "Equivalence",
    "Quodlibet",
    "Intermediate",
    "Ex Falso",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MandelkernReport {
    pub logic: LogicSpec,
    pub principles: Vec<ConditionVerdict>,
}

impl MandelkernReport {
    pub fn get(&self, name: &str) -> Option<&ConditionVerdict> {
        self.principles.iter().find(|p| p.condition == name)
    }
}

const AB: &[(&str, &str)] = &[("A", "p"), ("B", "q")];

/// Decides a schema entailment over the valuations that give every atom of the
/// `classical` metavariables a value of 0 or 1. Those metavariables range over
/// formulas without conditionals, which then take classical values too, so
/// atom instances are exhaustive.
fn atom_classical(
    name: &str,
    premises: &[&str],
    conclusion: &str,
    classical: &[&str],
    logic: &LogicSpec,
) -> ConditionVerdict {
    let bindings = atom_bindings(AB);
    let seq = Sequent::new(
        premises
            .iter()
            .map(|p| Term::parse(p).instantiate(&bindings))
            .collect(),
        Term::parse(conclusion).instantiate(&bindings),
    );
    let atoms = seq.atoms();
    let restricted: Vec<&str> = AB
        .iter()
        .filter(|(m, _)| classical.contains(m))
        .map(|(_, a)| *a)
        .collect();
    let mode = logic.mode;
    let found = (0..3usize.pow(atoms.len() as u32))
        .map(|w| valuation_at(&atoms, w))
        .find(|v| {
            let value = |f| eval(f, v, logic).expect("atoms bound");
            restricted
                .iter()
                .all(|a| v.get(a).is_none_or(TruthValue::is_classical))
                && seq
                    .premises
                    .iter()
                    .all(|p| mode.premise_designated(value(p)))
                && !mode.conclusion_designated(value(&seq.conclusion))
        });
    let status = match found {
        None => Status::HoldsPointwise,
        Some(v) => {
            let used: Vec<(&str, &str)> = AB
                .iter()
                .copied()
                .filter(|(_, a)| v.get(a).is_some())
                .collect();
            Status::Fails(Witness::from_atoms(&used, v))
        }
    };
    ConditionVerdict::new(name, *logic, status).note(format!(
        "{} restricted to valuations classical on the atoms of {}",
        seq,
        classical.join(", ")
    ))
}

pub fn mandelkern_audit(logic: &LogicSpec, depth: usize) -> Result<MandelkernReport, AuditError> {
    let corpus = Corpus::search(logic, depth);
    let df = logic.conditional == ConditionalTable::DF;
    let ci = MetaRule::new(
        "Conditional Introduction",
        vec![Judgement::entails(&["A"], "B")],
        Judgement::theorem("A -> B"),
    );
    let nothing_added = MetaRule::new(
        "Nothing Added",
        vec![Judgement::theorem("A -> B")],
        Judgement::equiv("A -> (B -> C)", "A -> C"),
    );
    let equivalence = MetaRule::new(
        "Equivalence",
        vec![Judgement::equiv("A -> C", "B -> C")],
        Judgement::equiv("A", "B"),
    )
    .with_fresh(&["C"]);
    let mut principles = vec![
        metarule(&ci, &corpus, None)?,
        metarule(
            &nothing_added,
            &corpus,
            df.then_some(&[("A", T), ("B", N), ("C", F)][..]),
        )?,
        metarule(
            &equivalence,
            &corpus,
            df.then_some(&[("A", F), ("B", N), ("C", F)][..]),
        )?
        .note("C ranges over all formulas: it is instantiated by an atom not in A or B"),
    ];
    let mut quodlibet = atom_classical("Quodlibet", &[], "(A & ~A) -> B", &["A"], logic);
    if logic.conditional == ConditionalTable::CC {
        quodlibet =
            quodlibet.note("with A = p -> p the schema fails: A takes the value 1/2 at p = 0");
    }
    principles.push(quodlibet);
    principles.push(atom_classical(
        "Intermediate",
        &["A"],
        "~A -> B",
        &["A"],
        logic,
    ));
    let ex_falso = atom_classical("Ex Falso", &["~(A -> B)"], "A", &["A"], logic);
    principles.push(if logic.conditional == ConditionalTable::CC {
        ex_falso.expecting(&[("A", F)])
    } else {
        ex_falso
    });
    Ok(MandelkernReport {
        logic: *logic,
        principles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restricted_principles() {
        for logic in LogicSpec::PRESETS {
            assert!(atom_classical("q", &[], "(A & ~A) -> B", &["A"], &logic).holds());
            assert!(atom_classical("i", &["A"], "~A -> B", &["A"], &logic).holds());
            assert!(!atom_classical("e", &["~(A -> B)"], "A", &["A"], &logic).holds());
        }
        let cc = atom_classical("e", &["~(A -> B)"], "A", &["A"], &LogicSpec::CC_TT);
        assert!(cc.status.witness().unwrap().has_values(&[("A", F)]));
    }

    #[test]
    fn unrestricted_quodlibet_fails() {
        let v = atom_classical("q", &[], "(A & ~A) -> B", &[], &LogicSpec::CC_TT);
        assert!(!v.holds());
    }
}
