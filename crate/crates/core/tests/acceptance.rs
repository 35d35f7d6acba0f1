//! Acceptance checks, one line per criterion. Runs without the test harness
//! so every line is printed; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use condlogic::audit::engine::validate;
use condlogic::audit::{
    classical_refinement, connexivity_check, import_export_mismatches, khoo_trace,
    mandelkern_audit, quasi_signature_checks, Assignment, Corpus, Judgement, MetaRule, Status,
    StepStatus,
};
use condlogic::consequence::{entails, mode_profile, ConsequenceMode, Sequent};
use condlogic::formula::parse;
use condlogic::report::{audit_records, paper_report, section, Goldens};
use condlogic::semantics::{
    eval, table_of, ConditionalTable, ConnectiveFamily, LogicSpec, TruthValue, Valuation,
};

use TruthValue::{F, N, T};

const DEPTH: usize = 3;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;
type Values = &'static [(&'static str, TruthValue)];

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cells(rows: [[&str; 3]; 3]) -> Vec<TruthValue> {
    rows.iter().flatten().map(|s| s.parse().unwrap()).collect()
}

fn column(col: [&str; 3]) -> Vec<TruthValue> {
    col.iter().map(|s| s.parse().unwrap()).collect()
}

/// Rows and columns run 1, 1/2, 0.
fn table(name: &str, family: ConnectiveFamily) -> Vec<TruthValue> {
    table_of(name, family).unwrap().cells()
}

/// `~(p & ~q)` evaluated cell by cell in the given family.
fn derived_material(family: ConnectiveFamily) -> Vec<TruthValue> {
    let f = parse("~(p & ~q)").unwrap();
    let logic = LogicSpec::new(ConditionalTable::DF, family);
    let mut out = Vec::new();
    for a in TruthValue::DISPLAY_ORDER {
        for b in TruthValue::DISPLAY_ORDER {
            out.push(eval(&f, &Valuation::from_pairs([("p", a), ("q", b)]), &logic).unwrap());
        }
    }
    out
}

fn criterion_1() -> Outcome {
    use ConnectiveFamily::{Quasi, StrongKleene};
    let reference = [
        (
            "DF conditional",
            table("cond-df", StrongKleene),
            cells([
                ["1", "1/2", "0"],
                ["1/2", "1/2", "1/2"],
                ["1/2", "1/2", "1/2"],
            ]),
        ),
        (
            "CC conditional",
            table("cond-cc", StrongKleene),
            cells([["1", "1/2", "0"], ["1", "1/2", "0"], ["1/2", "1/2", "1/2"]]),
        ),
        (
            "negation",
            table("neg", StrongKleene),
            column(["0", "1/2", "1"]),
        ),
        (
            "conjunction",
            table("conj", StrongKleene),
            cells([["1", "1/2", "0"], ["1/2", "1/2", "0"], ["0", "0", "0"]]),
        ),
        (
            "material",
            table("matcond", StrongKleene),
            cells([["1", "1/2", "0"], ["1", "1/2", "1/2"], ["1", "1", "1"]]),
        ),
        (
            "quasi conjunction",
            table("conj", Quasi),
            cells([["1", "1", "0"], ["1", "1/2", "0"], ["0", "0", "0"]]),
        ),
        (
            "quasi disjunction",
            table("disj", Quasi),
            cells([["1", "1", "1"], ["1", "1/2", "0"], ["1", "0", "0"]]),
        ),
        (
            "quasi material",
            table("matcond", Quasi),
            cells([["1", "0", "0"], ["1", "1/2", "0"], ["1", "1", "1"]]),
        ),
    ];
    let mut count = 0;
    for (name, computed, expected) in &reference {
        ensure(
            computed == expected,
            format!("{name}: computed {computed:?}"),
        )?;
        count += expected.len();
    }
    ensure(
        derived_material(StrongKleene) == reference[4].2,
        "~(p & ~q) differs from the reference material table",
    )?;
    ensure(
        derived_material(Quasi) == reference[7].2,
        "~(p & ~q) differs from the reference quasi material table",
    )?;
    Ok(format!(
        "{count} reference cells reproduced; both derived material tables match"
    ))
}

fn criterion_2() -> Outcome {
    let expected: [(LogicSpec, [bool; 10]); 3] = [
        (
            LogicSpec::DF_TT,
            [true, true, true, true, false, false, true, true, true, true],
        ),
        (
            LogicSpec::CC_TT,
            [
                true, true, false, true, true, false, true, false, false, true,
            ],
        ),
        (
            LogicSpec::QCC_TT,
            [
                true, false, false, true, true, false, true, false, false, false,
            ],
        ),
    ];
    let goldens = Goldens::embedded();
    let mut cells = 0;
    for (logic, row) in expected {
        let records =
            audit_records("gibbard", &logic, &goldens, DEPTH).map_err(|e| e.to_string())?;
        ensure(records.len() == 10, "expected ten columns")?;
        for (r, want) in records.iter().zip(row) {
            let holds = r.status != "fails";
            ensure(
                holds == want,
                format!("{logic} {}: computed {}", r.condition, r.status),
            )?;
            ensure(
                r.matches,
                format!("{logic} {}: witness or regression disagrees", r.condition),
            )?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, zero mismatches"))
}

/// Metainference rules (5)-(7); `->` is the strong arrow, `=>` the weak one.
fn fitelson_rule(label: &str, assignment: Assignment) -> MetaRule {
    let (strong, weak) = match assignment {
        Assignment::IndicativeStrong => ("->", "=>"),
        Assignment::MaterialStrong => ("=>", "->"),
    };
    let t = |s: &str| {
        s.replace('>', "")
            .replace("STRONG", strong)
            .replace("WEAK", weak)
    };
    match label {
        "(5)" => MetaRule::new(
            label,
            vec![Judgement::theorem(&t("A STRONG B"))],
            Judgement::theorem(&t("A WEAK B")),
        ),
        "(6)" => MetaRule::new(
            label,
            vec![Judgement::theorem(&t("A WEAK B"))],
            Judgement::entails(&["A"], "B"),
        ),
        "(7)" => MetaRule::new(
            label,
            vec![
                Judgement::equiv("A", "B"),
                Judgement::theorem(&t("A STRONG C")),
            ],
            Judgement::theorem(&t("B STRONG C")),
        ),
        _ => unreachable!(),
    }
}

fn criterion_3() -> Outcome {
    use Assignment::{IndicativeStrong as I, MaterialStrong as M};
    // (logic, assignment, [(5), (6), (7)], strongly blocked)
    let grid = [
        (LogicSpec::DF_TT, I, [true, false, false], true),
        (LogicSpec::DF_TT, M, [true, false, false], true),
        (LogicSpec::CC_TT, I, [true, false, true], false),
        (LogicSpec::CC_TT, M, [false, true, false], false),
        (LogicSpec::QCC_TT, I, [false, true, true], false),
        (LogicSpec::QCC_TT, M, [true, true, false], false),
    ];
    let witnesses: [(LogicSpec, Assignment, &str, Values); 9] = [
        (LogicSpec::DF_TT, I, "(6)", &[("A", N), ("B", F)]),
        (LogicSpec::DF_TT, I, "(7)", &[("A", N), ("B", T), ("C", F)]),
        (LogicSpec::DF_TT, M, "(6)", &[("A", N), ("B", F)]),
        (LogicSpec::DF_TT, M, "(7)", &[("A", N), ("B", T), ("C", F)]),
        (LogicSpec::CC_TT, I, "(6)", &[("A", N), ("B", F)]),
        (LogicSpec::CC_TT, M, "(5)", &[("A", N), ("B", F)]),
        (LogicSpec::CC_TT, M, "(7)", &[("A", N), ("B", T), ("C", F)]),
        (LogicSpec::QCC_TT, I, "(5)", &[("A", T), ("B", N)]),
        (LogicSpec::QCC_TT, M, "(7)", &[("A", N), ("B", T), ("C", N)]),
    ];
    let goldens = Goldens::embedded();
    let mut rows = std::collections::HashMap::new();
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT, LogicSpec::QCC_TT] {
        rows.insert(
            logic,
            audit_records("fitelson", &logic, &goldens, DEPTH).map_err(|e| e.to_string())?,
        );
    }
    for (logic, a, want, strongly) in grid {
        let records = &rows[&logic];
        for (label, w) in ["(5)", "(6)", "(7)"].iter().zip(want) {
            let r = records
                .iter()
                .find(|r| r.condition == format!("{label} {}", a.slug()))
                .ok_or(format!("{logic} {label} missing"))?;
            ensure(
                (r.status != "fails") == w,
                format!("{logic} {} {label}: computed {}", a.slug(), r.status),
            )?;
        }
        let blocking = records
            .iter()
            .find(|r| r.condition == "blocking")
            .ok_or("blocking missing")?;
        ensure(
            (blocking.status == "strong") == strongly,
            format!("{logic}: blocking {}", blocking.status),
        )?;
    }
    for (logic, a, label, values) in witnesses {
        let r = rows[&logic]
            .iter()
            .find(|r| r.condition == format!("{label} {}", a.slug()))
            .unwrap();
        let w = r
            .witness
            .as_ref()
            .ok_or(format!("{logic} {label}: no witness"))?;
        ensure(
            w.has_values(values),
            format!("{logic} {} {label}: witness {w}", a.slug()),
        )?;
        validate(&fitelson_rule(label, a), w, &logic).map_err(|e| e.to_string())?;
    }
    Ok("18 cells and the blocking row reproduced; 9 reference witnesses re-validate".into())
}

fn criterion_4() -> Outcome {
    let reports: Vec<_> = LogicSpec::PRESETS
        .iter()
        .map(|l| mandelkern_audit(l, DEPTH))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for r in &reports {
        ensure(
            r.get("Conditional Introduction").unwrap().holds(),
            format!("{}: Conditional Introduction fails", r.logic),
        )?;
    }
    let qdf = &reports[2];
    for (name, values) in [
        ("Nothing Added", [("A", T), ("B", N), ("C", F)]),
        ("Equivalence", [("A", F), ("B", N), ("C", F)]),
    ] {
        let w = qdf
            .get(name)
            .unwrap()
            .status
            .witness()
            .ok_or(format!("QDF/TT: {name} does not fail"))?;
        ensure(w.has_values(&values), format!("QDF/TT {name}: witness {w}"))?;
        for r in [&reports[1], &reports[3]] {
            let status = &r.get(name).unwrap().status;
            ensure(
                *status == Status::NoCounterexampleToDepth(DEPTH),
                format!("{} {name}: {}", r.logic, status.label()),
            )?;
        }
    }
    let cc = &reports[1];
    ensure(
        cc.get("Quodlibet").unwrap().holds(),
        "CC/TT: Quodlibet fails",
    )?;
    ensure(
        cc.get("Intermediate").unwrap().holds(),
        "CC/TT: Intermediate fails",
    )?;
    let w = cc
        .get("Ex Falso")
        .unwrap()
        .status
        .witness()
        .ok_or("CC/TT: Ex Falso holds")?;
    ensure(
        w.has_values(&[("A", F)]),
        format!("CC/TT Ex Falso: witness {w}"),
    )?;
    Ok("CI in all presets; Nothing Added and Equivalence fail in QDF/TT; no counterexample to depth 3 in (Q)CC/TT; Ex Falso fails at A=0".into())
}

fn criterion_5() -> Outcome {
    let df = khoo_trace(&LogicSpec::DF_TT, DEPTH).map_err(|e| e.to_string())?;
    ensure(df.steps.len() == 18, "eighteen steps")?;
    ensure(
        df.with_status(StepStatus::Sound).len() == 18,
        format!("DF/TT unsound: {:?}", df.with_status(StepStatus::Blocked)),
    )?;
    let cc = khoo_trace(&LogicSpec::CC_TT, DEPTH).map_err(|e| e.to_string())?;
    let blocked = cc.with_status(StepStatus::Blocked);
    ensure(
        blocked == vec![2, 10],
        format!("CC/TT blocked: {blocked:?}"),
    )?;
    let unreached = cc.with_status(StepStatus::Unreached);
    Ok(format!(
        "DF/TT: 18 sound; CC/TT: blocked {blocked:?}, unreached (resting on them) {unreached:?}"
    ))
}

fn criterion_6() -> Outcome {
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT, LogicSpec::QCC_TT] {
        let m = import_export_mismatches(&logic);
        ensure(
            m.is_empty(),
            format!("{logic}: import-export differs at {:?}", m.first()),
        )?;
    }
    let qdf = import_export_mismatches(&LogicSpec::QDF_TT);
    let w = *qdf.first().ok_or("QDF/TT: import-export holds")?;
    // Independent recomputation of the exhibited triple.
    let logic = LogicSpec::QDF_TT;
    ensure(
        logic.cond(w[0], logic.cond(w[1], w[2])) != logic.cond(logic.conj(w[0], w[1]), w[2]),
        "witness does not differ",
    )?;
    let c = connexivity_check(&LogicSpec::DF_TT).map_err(|e| e.to_string())?;
    ensure(
        c.indicative.is_valid(),
        "DF/TT: p -> q does not entail ~(p -> ~q)",
    )?;
    ensure(!c.material.is_valid(), "DF/TT: ~p | q entails ~(~p | ~q)")?;
    Ok(format!("identity on 27 triples in DF, CC, QCC; QDF fails at A={} B={} C={}; connexive law separates -> from =>", w[0], w[1], w[2]))
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT, LogicSpec::QCC_TT] {
        let q = quasi_signature_checks(&logic).map_err(|e| e.to_string())?;
        let quasi = logic.family == ConnectiveFamily::Quasi;
        let want = if quasi { T } else { N };
        for (v, value) in &q.self_conditionals {
            if *value != want {
                failures.push(format!(
                    "{logic}: (p -> p) & (~p -> ~p) is {value} at {v}, expected {want}"
                ));
            }
        }
        if q.linearity.is_valid() == quasi {
            failures.push(format!(
                "{logic}: linearity theoremhood is {}",
                q.linearity.is_valid()
            ));
        }
        if quasi && (q.neg_antecedent.is_valid() || q.true_consequent.is_valid()) {
            failures.push(format!("{logic}: a paradox of material implication holds"));
        }
    }
    if failures.is_empty() {
        Ok("self-conditionals, linearity and the material paradoxes as stated".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_8() -> Outcome {
    let df = classical_refinement(&LogicSpec::DF_TT, DEPTH).map_err(|e| e.to_string())?;
    ensure(
        df.counterexample.is_none(),
        format!("DF/TT: {:?}", df.counterexample),
    )?;
    let cc = classical_refinement(&LogicSpec::CC_TT, DEPTH).map_err(|e| e.to_string())?;
    let c = cc.counterexample.ok_or("CC/TT: no counterexample")?;
    ensure(
        c.formula == parse("p -> q").unwrap(),
        format!("CC/TT counterexample formula {}", c.formula),
    )?;
    ensure(
        c.valuation == Valuation::from_pairs([("p", N), ("q", F)]),
        format!("CC/TT valuation {}", c.valuation),
    )?;
    ensure(
        c.refinement.get("p") == Some(F),
        format!("CC/TT refinement {}", c.refinement),
    )?;
    Ok(format!(
        "DF/TT: {} formulas keep every definite value; CC/TT: {} is {} at {} but {} at {}",
        df.formulas_checked,
        c.formula,
        c.value,
        c.valuation,
        u8::from(c.refined_value),
        c.refinement
    ))
}

fn criterion_9() -> Outcome {
    let corpus = Corpus::search(&LogicSpec::DF_TT, DEPTH);
    let formulas: Vec<_> = corpus.formulas().cloned().collect();
    for f in &formulas {
        ensure(
            parse(&f.to_string()).as_ref() == Ok(f),
            format!("round trip fails for {f}"),
        )?;
    }
    let n = formulas.len();
    let logic = LogicSpec::DF_TT;
    let holds = |premises: Vec<&condlogic::formula::Formula>, c: &condlogic::formula::Formula| {
        let s = Sequent::new(premises.into_iter().cloned().collect(), c.clone());
        let v = entails(&s, &logic).unwrap();
        if let Some(cm) = v.countermodel() {
            // Re-evaluate the countermodel independently.
            let ev = |f| eval(f, &cm.valuation, &logic).unwrap();
            assert!(
                s.premises.iter().all(|p| ev(p).is_tolerant()) && !ev(&s.conclusion).is_tolerant()
            );
        }
        v.is_valid()
    };
    let mut counts = [0usize; 3];
    for i in 0..1000usize {
        let (a, b, c) = (
            &formulas[(i * 7919) % n],
            &formulas[(i * 104_729 + 13) % n],
            &formulas[(i * 1_299_709 + 101) % n],
        );
        ensure(holds(vec![a], a), format!("reflexivity fails for {a}"))?;
        if holds(vec![a], c) {
            counts[0] += 1;
            ensure(
                holds(vec![a, b], c),
                format!("monotonicity fails for {a}, {b} |- {c}"),
            )?;
        }
        if holds(vec![a], b) && holds(vec![b], c) {
            counts[1] += 1;
            ensure(
                holds(vec![a], c),
                format!("transitivity fails for {a}, {b}, {c}"),
            )?;
        }
        counts[2] += 1;
    }
    let goldens = Goldens::embedded();
    let run = |workers| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        pool.install(|| serde_json::to_string(&paper_report(&goldens, DEPTH).unwrap()).unwrap())
    };
    ensure(run(1) == run(4), "report differs between 1 and 4 workers")?;
    Ok(format!(
        "{n} corpus formulas round-trip; {} triples ({} monotonicity, {} transitivity instances); countermodels re-validate; 1 vs 4 workers identical",
        counts[2], counts[0], counts[1]
    ))
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT] {
        for mode in [
            ConsequenceMode::SS,
            ConsequenceMode::ST,
            ConsequenceMode::TS,
        ] {
            let p = mode_profile(&logic.with_mode(mode)).map_err(|e| e.to_string())?;
            ensure(
                p.defective(),
                format!("{}: identity holds and converse fails", p.logic),
            )?;
            lines.push(format!(
                "{}: {}",
                p.logic,
                match (p.identity_fails(), p.converse_holds()) {
                    (true, true) => "both",
                    (true, false) => "identity fails",
                    _ => "converse holds",
                }
            ));
        }
    }
    let s = section("modes", &Goldens::embedded(), DEPTH).map_err(|e| e.to_string())?;
    ensure(
        s.matches,
        format!("computed goldens differ: {:?}", s.mismatches),
    )?;
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("truth-table goldens", criterion_1),
        ("Gibbard matrix", criterion_2),
        ("Fitelson matrix", criterion_3),
        ("Mandelkern audit", criterion_4),
        ("Khoo trace", criterion_5),
        ("pointwise laws", criterion_6),
        ("quasi signatures", criterion_7),
        ("classical refinement", criterion_8),
        ("property suites", criterion_9),
        ("other consequence modes", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
