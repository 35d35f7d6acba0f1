use proptest::prelude::*;

use condlogic::consequence::{entails, entails_with, CheckOptions, ConsequenceMode, Sequent};
use condlogic::formula::{parse, BinaryOp, Formula};
use condlogic::semantics::{eval, LogicSpec, TruthValue, Valuation};

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::atom);
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (
                prop::sample::select(BinaryOp::ALL.to_vec()),
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Formula::binary(op, l, r)),
        ]
    })
}

fn logic() -> impl Strategy<Value = LogicSpec> {
    prop::sample::select(LogicSpec::PRESETS.to_vec())
}

fn any_mode_logic() -> impl Strategy<Value = LogicSpec> {
    (logic(), prop::sample::select(ConsequenceMode::ALL.to_vec())).prop_map(|(l, m)| l.with_mode(m))
}

fn valid(premises: &[&Formula], conclusion: &Formula, logic: &LogicSpec) -> bool {
    let s = Sequent::new(
        premises.iter().map(|&f| f.clone()).collect(),
        conclusion.clone(),
    );
    entails(&s, logic).unwrap().is_valid()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_round_trips(f in formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn reflexivity(a in formula(), l in logic()) {
        prop_assert!(valid(&[&a], &a, &l));
    }

    #[test]
    fn monotonicity(a in formula(), b in formula(), c in formula(), l in any_mode_logic()) {
        if valid(&[&a], &c, &l) {
            prop_assert!(valid(&[&a, &b], &c, &l));
        }
    }

    #[test]
    fn transitivity(a in formula(), b in formula(), c in formula(), l in logic()) {
        if valid(&[&a], &b, &l) && valid(&[&b], &c, &l) {
            prop_assert!(valid(&[&a], &c, &l));
        }
    }

    #[test]
    fn countermodels_revalidate(a in formula(), b in formula(), c in formula(), l in any_mode_logic()) {
        let s = Sequent::new(vec![a, b], c);
        let verdict = entails(&s, &l).unwrap();
        if let Some(cm) = verdict.countermodel() {
            let value = |f: &Formula| eval(f, &cm.valuation, &l).unwrap();
            for (p, v) in s.premises.iter().zip(&cm.premise_values) {
                prop_assert_eq!(value(p), *v);
                prop_assert!(l.mode.premise_designated(*v));
            }
            prop_assert_eq!(value(&s.conclusion), cm.conclusion_value);
            prop_assert!(!l.mode.conclusion_designated(cm.conclusion_value));
        }
    }

    #[test]
    fn parallel_check_is_deterministic(a in formula(), c in formula(), l in any_mode_logic()) {
        let s = Sequent::new(vec![a], c);
        let opts = CheckOptions::default();
        let sequential = entails_with(&s, &l, opts).unwrap();
        let parallel = entails_with(&s, &l, CheckOptions { parallel: true, ..opts }).unwrap();
        prop_assert_eq!(sequential, parallel);
    }

    #[test]
    fn classical_inputs_give_classical_outputs_without_conditionals(
        f in formula(), vals in prop::array::uniform3(any::<bool>()), l in logic()
    ) {
        let boolean = f.is_boolean();
        let v = Valuation::from_pairs(["p", "q", "r"].into_iter().zip(vals.map(TruthValue::from_bool)));
        if boolean {
            prop_assert!(eval(&f, &v, &l).unwrap().is_classical());
        }
    }

    #[test]
    fn double_negation_is_identity(f in formula(), vals in prop::array::uniform3(0usize..3), l in logic()) {
        let v = Valuation::from_pairs(["p", "q", "r"].into_iter().zip(vals.map(TruthValue::from_index)));
        prop_assert_eq!(eval(&Formula::neg(Formula::neg(f.clone())), &v, &l).unwrap(), eval(&f, &v, &l).unwrap());
    }
}
