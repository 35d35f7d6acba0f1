//! Recomputes the audit tables and compares them with golden data shipped in
//! `data/`. Every golden is a matrix of strings; a cell of `-` is shown but
//! not compared.

use std::fmt;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::{
    blocking_with, classical_refinement, collapse_status, connexivity_check, fitelson_conditions,
    gibbard_conditions, import_export_mismatches, khoo_trace, mandelkern_audit,
    quasi_signature_checks, Assignment, AuditError, Blocking, ConditionVerdict, StepStatus,
    VerdictRecord, Witness, FITELSON_CONDITIONS, GIBBARD_COLUMNS, MANDELKERN_PRINCIPLES,
};
use crate::consequence::{mode_profile, ConsequenceMode, Verdict};
use crate::semantics::LogicSpec;

pub const GOLDEN_VERSION: u32 = 1;

/// Every section, each with a golden file `<name>.toml`.
pub const SECTIONS: [&str; 8] = [
    "gibbard",
    "fitelson",
    "collapse",
    "mandelkern",
    "khoo",
    "quasi",
    "laws",
    "modes",
];

/// The sections [`paper_report`] recomputes, in order.
pub const REPORT_SECTIONS: [&str; 5] = ["gibbard", "fitelson", "collapse", "mandelkern", "khoo"];

const EMBEDDED: [(&str, &str); 8] = [
    ("gibbard", include_str!("../data/gibbard.toml")),
    ("fitelson", include_str!("../data/fitelson.toml")),
    ("collapse", include_str!("../data/collapse.toml")),
    ("mandelkern", include_str!("../data/mandelkern.toml")),
    ("khoo", include_str!("../data/khoo.toml")),
    ("quasi", include_str!("../data/quasi.toml")),
    ("laws", include_str!("../data/laws.toml")),
    ("modes", include_str!("../data/modes.toml")),
];

/// A cell that is displayed but never compared.
pub const UNSTATED: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub version: u32,
    pub columns: Vec<String>,
    pub rows: IndexMap<String, Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("golden `{name}` is malformed: {source}")]
    Parse {
        name: String,
        source: toml::de::Error,
    },
    #[error("golden `{name}` has version {found}, expected {GOLDEN_VERSION}")]
    Version { name: String, found: u32 },
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Golden(#[from] GoldenError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    UnknownSection(#[from] UnknownSection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goldens {
    pub tables: IndexMap<String, Golden>,
}

impl Goldens {
    pub fn embedded() -> Goldens {
        Goldens::load(None).expect("embedded goldens are well formed")
    }

    /// Reads `<dir>/<name>.toml` where present and the embedded copy otherwise.
    pub fn load(dir: Option<&Path>) -> Result<Goldens, GoldenError> {
        let mut tables = IndexMap::new();
        for (name, text) in EMBEDDED {
            let path = dir
                .map(|d| d.join(format!("{name}.toml")))
                .filter(|p| p.exists());
            let text = match &path {
                Some(p) => std::fs::read_to_string(p).map_err(|source| GoldenError::Io {
                    path: p.clone(),
                    source,
                })?,
                None => text.to_string(),
            };
            let golden: Golden = toml::from_str(&text).map_err(|source| GoldenError::Parse {
                name: name.to_string(),
                source,
            })?;
            if golden.version != GOLDEN_VERSION {
                return Err(GoldenError::Version {
                    name: name.to_string(),
                    found: golden.version,
                });
            }
            tables.insert(name.to_string(), golden);
        }
        Ok(Goldens { tables })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<String>,
    pub computed: Vec<Vec<String>>,
    pub expected: Vec<Vec<String>>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub mismatches: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperReport {
    pub depth: usize,
    pub sections: Vec<Section>,
}

impl PaperReport {
    pub fn matches(&self) -> bool {
        self.sections.iter().all(|s| s.matches)
    }
}

impl fmt::Display for PaperReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sections {
            writeln!(
                f,
                "== {} [{}]",
                s.name,
                if s.matches { "MATCH" } else { "MISMATCH" }
            )?;
            let label_width = s.rows.iter().map(String::len).max().unwrap_or(0);
            writeln!(f, "{:label_width$} | {}", "", s.columns.join(" | "))?;
            for (i, row) in s.rows.iter().enumerate() {
                let cells: Vec<String> = s.computed[i]
                    .iter()
                    .zip(&s.expected[i])
                    .map(|(c, e)| {
                        if agrees(c, e) {
                            c.clone()
                        } else {
                            format!("{c} (expected {e})")
                        }
                    })
                    .collect();
                writeln!(f, "{row:label_width$} | {}", cells.join(" | "))?;
            }
            for m in &s.mismatches {
                writeln!(f, "  mismatch: {m}")?;
            }
            for n in &s.notes {
                writeln!(f, "  note: {n}")?;
            }
        }
        let failed: Vec<&str> = self
            .sections
            .iter()
            .filter(|s| !s.matches)
            .map(|s| s.name.as_str())
            .collect();
        if failed.is_empty() {
            write!(f, "MATCH: {} sections", self.sections.len())
        } else {
            write!(f, "MISMATCH: {}", failed.join(", "))
        }
    }
}

fn agrees(computed: &str, expected: &str) -> bool {
    expected == UNSTATED || computed == expected
}

/// Rows, columns and cells of one recomputed table, before comparison.
struct Computed {
    columns: Vec<String>,
    rows: Vec<(String, Vec<String>)>,
    notes: Vec<String>,
}

fn compare(name: &str, computed: Computed, golden: Option<&Golden>) -> Section {
    let mut mismatches = Vec::new();
    let Computed {
        columns,
        rows,
        notes,
    } = computed;
    let width = columns.len();
    let expected: Vec<Vec<String>> = match golden {
        None => {
            mismatches.push("no golden data".to_string());
            vec![vec![UNSTATED.to_string(); width]; rows.len()]
        }
        Some(g) => {
            if g.columns != columns {
                mismatches.push(format!(
                    "golden columns {:?} differ from {:?}",
                    g.columns, columns
                ));
            }
            for extra in g.rows.keys().filter(|k| !rows.iter().any(|(r, _)| r == *k)) {
                mismatches.push(format!("golden row `{extra}` is not computed"));
            }
            rows.iter()
                .map(|(r, _)| match g.rows.get(r) {
                    Some(cells) if cells.len() == width => cells.clone(),
                    Some(cells) => {
                        mismatches.push(format!(
                            "golden row `{r}` has {} cells, expected {width}",
                            cells.len()
                        ));
                        vec![UNSTATED.to_string(); width]
                    }
                    None => {
                        mismatches.push(format!("row `{r}` has no golden data"));
                        vec![UNSTATED.to_string(); width]
                    }
                })
                .collect()
        }
    };
    for ((r, cells), exp) in rows.iter().zip(&expected) {
        for ((c, e), col) in cells.iter().zip(exp).zip(&columns) {
            if !agrees(c, e) {
                mismatches.push(format!("{r}, {col}: computed {c}, expected {e}"));
            }
        }
    }
    Section {
        name: name.to_string(),
        columns,
        rows: rows.iter().map(|(r, _)| r.clone()).collect(),
        computed: rows.into_iter().map(|(_, c)| c).collect(),
        expected,
        matches: mismatches.is_empty(),
        mismatches,
        notes,
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// `yes` / `no`, flagged when an expected witness or required failing
/// instance does not come out as expected.
fn verdict_cell(v: &ConditionVerdict) -> String {
    let mark = yes_no(v.holds());
    if v.witness_agrees() {
        mark
    } else {
        format!("{mark} (unexpected witness)")
    }
}

const GIBBARD_LOGICS: [LogicSpec; 3] = [LogicSpec::DF_TT, LogicSpec::CC_TT, LogicSpec::QCC_TT];

fn gibbard_table(depth: usize) -> Result<Computed, AuditError> {
    let rows = GIBBARD_LOGICS
        .iter()
        .map(|logic| {
            let row = gibbard_conditions(logic, depth)?;
            let cells = GIBBARD_COLUMNS
                .iter()
                .map(|c| row.get(c).map_or(UNSTATED.to_string(), verdict_cell))
                .collect();
            Ok((logic.name(), cells))
        })
        .collect::<Result<_, AuditError>>()?;
    Ok(Computed {
        columns: strings(&GIBBARD_COLUMNS),
        rows,
        notes: Vec::new(),
    })
}

fn fitelson_table(depth: usize) -> Result<Computed, AuditError> {
    let shown = &FITELSON_CONDITIONS[4..7];
    let mut columns = Vec::new();
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); shown.len() + 1];
    let mut notes = Vec::new();
    for logic in GIBBARD_LOGICS {
        let rows = Assignment::ALL
            .iter()
            .map(|&a| fitelson_conditions(&logic, a, depth))
            .collect::<Result<Vec<_>, _>>()?;
        let blocking = blocking_with(&rows[0], depth)?;
        notes.push(format!("{logic}: {} ({})", blocking.reason, blocking.scope));
        for (a, row) in Assignment::ALL.iter().zip(&rows) {
            columns.push(format!("{logic} {}", a.slug()));
            for (i, c) in shown.iter().enumerate() {
                cells[i].push(row.get(c).map_or(UNSTATED.to_string(), verdict_cell));
            }
            cells[shown.len()].push(yes_no(blocking.blocking == Blocking::Strong));
        }
    }
    let labels = shown
        .iter()
        .map(|s| s.to_string())
        .chain(["strongly blocked".to_string()]);
    Ok(Computed {
        columns,
        rows: labels.zip(cells).collect(),
        notes,
    })
}

fn collapse_table() -> Result<Computed, AuditError> {
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for logic in GIBBARD_LOGICS {
        let status = collapse_status(&logic)?;
        columns = status.all().iter().map(|v| v.condition.clone()).collect();
        rows.push((
            logic.name(),
            status.all().iter().map(|v| verdict_cell(v)).collect(),
        ));
    }
    Ok(Computed {
        columns,
        rows,
        notes: Vec::new(),
    })
}

fn mandelkern_table(depth: usize) -> Result<Computed, AuditError> {
    let rows = LogicSpec::PRESETS
        .iter()
        .map(|logic| {
            let report = mandelkern_audit(logic, depth)?;
            let cells = MANDELKERN_PRINCIPLES
                .iter()
                .map(|p| report.get(p).map_or(UNSTATED.to_string(), verdict_cell))
                .collect();
            Ok((logic.name(), cells))
        })
        .collect::<Result<_, AuditError>>()?;
    Ok(Computed {
        columns: strings(&MANDELKERN_PRINCIPLES),
        rows,
        notes: Vec::new(),
    })
}

fn khoo_table(depth: usize) -> Result<Computed, AuditError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT] {
        let trace = khoo_trace(&logic, depth)?;
        rows.push((
            logic.name(),
            vec![step_list(&trace.with_status(StepStatus::Blocked))],
        ));
        let unreached = trace.with_status(StepStatus::Unreached);
        if !unreached.is_empty() {
            notes.push(format!(
                "{logic}: unreached (resting on blocked steps): {}",
                step_list(&unreached)
            ));
        }
    }
    Ok(Computed {
        columns: vec!["blocked steps".to_string()],
        rows,
        notes,
    })
}

fn step_list(steps: &[usize]) -> String {
    if steps.is_empty() {
        "none".to_string()
    } else {
        steps
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn quasi_table() -> Result<Computed, AuditError> {
    let columns = strings(&[
        "(p -> p) & (~p -> ~p)",
        "|- (p -> q) | (q -> p)",
        "~p |- p => q",
        "q |- p => q",
    ]);
    let rows = GIBBARD_LOGICS
        .iter()
        .map(|logic| {
            let q = quasi_signature_checks(logic)?;
            let values: Vec<&str> = q
                .self_conditionals
                .iter()
                .map(|(_, v)| v.as_str())
                .collect();
            let cells = vec![
                values.join(" "),
                yes_no(q.linearity.is_valid()),
                yes_no(q.neg_antecedent.is_valid()),
                yes_no(q.true_consequent.is_valid()),
            ];
            Ok((logic.name(), cells))
        })
        .collect::<Result<_, AuditError>>()?;
    let notes =
        vec!["at p = 1/2 both conjuncts of (p -> p) & (~p -> ~p) take the value 1/2".to_string()];
    Ok(Computed {
        columns,
        rows,
        notes,
    })
}

fn laws_table(depth: usize) -> Result<Computed, AuditError> {
    let columns = strings(&[
        "import-export identity",
        "p -> q |- ~(p -> ~q)",
        "~p | q |- ~(~p | ~q)",
        "refinement preserves 0 and 1",
    ]);
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for logic in LogicSpec::PRESETS {
        let mismatches = import_export_mismatches(&logic);
        if let Some(t) = mismatches.first() {
            notes.push(format!(
                "{logic}: import-export values differ at A={}, B={}, C={} ({} triples)",
                t[0],
                t[1],
                t[2],
                mismatches.len()
            ));
        }
        let connexive = connexivity_check(&logic)?;
        let refinement = classical_refinement(&logic, depth)?;
        if let Some(c) = &refinement.counterexample {
            notes.push(format!(
                "{logic}: {} is {} at {} but {} at {}",
                c.formula,
                c.value,
                c.valuation,
                u8::from(c.refined_value),
                c.refinement
            ));
        }
        rows.push((
            logic.name(),
            vec![
                yes_no(mismatches.is_empty()),
                yes_no(connexive.indicative.is_valid()),
                yes_no(connexive.material.is_valid()),
                yes_no(refinement.counterexample.is_none()),
            ],
        ));
    }
    Ok(Computed {
        columns,
        rows,
        notes,
    })
}

fn modes_table() -> Result<Computed, AuditError> {
    let mut rows = Vec::new();
    for logic in [LogicSpec::DF_TT, LogicSpec::CC_TT] {
        for mode in [
            ConsequenceMode::SS,
            ConsequenceMode::ST,
            ConsequenceMode::TS,
        ] {
            let p = mode_profile(&logic.with_mode(mode))?;
            rows.push((
                p.logic.name(),
                vec![yes_no(p.identity.is_valid()), yes_no(p.converse.is_valid())],
            ));
        }
    }
    Ok(Computed {
        columns: strings(&["|- p -> p", "p -> q |- q -> p"]),
        rows,
        notes: Vec::new(),
    })
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn compute(name: &str, depth: usize) -> Result<Computed, AuditError> {
    match name {
        "gibbard" => gibbard_table(depth),
        "fitelson" => fitelson_table(depth),
        "collapse" => collapse_table(),
        "mandelkern" => mandelkern_table(depth),
        "khoo" => khoo_table(depth),
        "quasi" => quasi_table(),
        "laws" => laws_table(depth),
        "modes" => modes_table(),
        _ => unreachable!("unknown section {name}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown section `{0}`")]
pub struct UnknownSection(pub String);

/// Recomputes one section and compares it with its golden.
pub fn section(name: &str, goldens: &Goldens, depth: usize) -> Result<Section, ReportError> {
    if !SECTIONS.contains(&name) {
        return Err(ReportError::UnknownSection(UnknownSection(
            name.to_string(),
        )));
    }
    Ok(compare(
        name,
        compute(name, depth)?,
        goldens.tables.get(name),
    ))
}

/// Recomputes the report sections (in parallel) and compares each with its golden.
pub fn paper_report(goldens: &Goldens, depth: usize) -> Result<PaperReport, ReportError> {
    let sections = REPORT_SECTIONS
        .par_iter()
        .map(|name| section(name, goldens, depth))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PaperReport { depth, sections })
}

/// Audits that produce per-condition records.
pub const AUDITS: [&str; 8] = [
    "gibbard",
    "fitelson",
    "collapse",
    "mandelkern",
    "khoo",
    "quasi",
    "laws",
    "modes",
];

impl Goldens {
    /// The golden cell for `row` and `column` of table `name`; `None` when
    /// absent or unstated.
    pub fn expectation(&self, name: &str, row: &str, column: &str) -> Option<&str> {
        let g = self.tables.get(name)?;
        let i = g.columns.iter().position(|c| c == column)?;
        g.rows
            .get(row)?
            .get(i)
            .map(String::as_str)
            .filter(|c| *c != UNSTATED)
    }
}

fn expect_bool(cell: Option<&str>) -> Option<bool> {
    cell.map(|c| c == "yes")
}

/// A record for a plain entailment verdict; `expected` is a `yes`/`no` cell.
fn verdict_record(
    condition: &str,
    logic: &LogicSpec,
    verdict: &Verdict,
    expected: Option<&str>,
) -> VerdictRecord {
    let witness = verdict.countermodel().map(|cm| Witness {
        bindings: Default::default(),
        valuation: cm.valuation.clone(),
        values: Default::default(),
    });
    value_record(
        condition,
        logic,
        if verdict.is_valid() {
            "valid"
        } else {
            "invalid"
        },
        witness,
        &yes_no(verdict.is_valid()),
        expected,
    )
}

/// A record whose computed cell is compared with the golden cell verbatim.
fn value_record(
    condition: &str,
    logic: &LogicSpec,
    status: &str,
    witness: Option<Witness>,
    cell: &str,
    expected: Option<&str>,
) -> VerdictRecord {
    VerdictRecord {
        condition: condition.to_string(),
        logic: logic.slug(),
        status: status.to_string(),
        witness,
        paper_expectation: expected.unwrap_or("not stated").to_string(),
        matches: expected.is_none_or(|e| e == cell),
        notes: Vec::new(),
    }
}

/// Per-condition records of one audit for one logic, each compared with the
/// golden cell for that logic.
pub fn audit_records(
    name: &str,
    logic: &LogicSpec,
    goldens: &Goldens,
    depth: usize,
) -> Result<Vec<VerdictRecord>, ReportError> {
    let row = logic.name();
    let exp = |column: &str| goldens.expectation(name, &row, column);
    let mut out = Vec::new();
    match name {
        "gibbard" => {
            for c in gibbard_conditions(logic, depth)?.columns {
                out.push(c.record(expect_bool(exp(&c.condition))));
            }
        }
        "fitelson" => {
            let rows = Assignment::ALL
                .iter()
                .map(|&a| fitelson_conditions(logic, a, depth))
                .collect::<Result<Vec<_>, _>>()?;
            for (a, r) in Assignment::ALL.iter().zip(&rows) {
                let column = format!("{row} {}", a.slug());
                for c in &r.conditions {
                    let expected = goldens.expectation(name, &c.condition, &column);
                    let mut rec = c.record(expect_bool(expected));
                    rec.condition = format!("{} {}", c.condition, a.slug());
                    out.push(rec);
                }
            }
            let blocking = blocking_with(&rows[0], depth)?;
            let expected = goldens
                .expectation(
                    name,
                    "strongly blocked",
                    &format!("{row} {}", Assignment::IndicativeStrong.slug()),
                )
                .map(|c| if c == "yes" { "strong" } else { "weak" });
            let mut rec = value_record(
                "blocking",
                logic,
                &blocking.blocking.to_string(),
                None,
                &blocking.blocking.to_string(),
                expected,
            );
            rec.notes = vec![blocking.reason, blocking.scope];
            out.push(rec);
        }
        "collapse" => {
            for c in collapse_status(logic)?.all() {
                out.push(c.record(expect_bool(exp(&c.condition))));
            }
        }
        "mandelkern" => {
            for c in mandelkern_audit(logic, depth)?.principles {
                out.push(c.record(expect_bool(exp(&c.condition))));
            }
        }
        "khoo" => {
            let trace = khoo_trace(logic, depth)?;
            let blocked: Option<Vec<String>> = exp("blocked steps").map(|c| {
                c.split(", ")
                    .filter(|s| *s != "none")
                    .map(str::to_string)
                    .collect()
            });
            for step in &trace.steps {
                let expected = blocked.as_ref().map(|b| {
                    if b.contains(&step.id.to_string()) {
                        "blocked"
                    } else {
                        "not blocked"
                    }
                });
                let cell = if step.status == StepStatus::Blocked {
                    "blocked"
                } else {
                    "not blocked"
                };
                let mut rec = value_record(
                    &format!("step {}: {}", step.id, step.claim),
                    logic,
                    &step.status.to_string(),
                    None,
                    cell,
                    expected,
                );
                rec.notes = vec![step.justification.to_string()];
                out.push(rec);
            }
        }
        "quasi" => {
            let q = quasi_signature_checks(logic)?;
            let values: Vec<&str> = q
                .self_conditionals
                .iter()
                .map(|(_, v)| v.as_str())
                .collect();
            let cell = values.join(" ");
            let column = "(p -> p) & (~p -> ~p)";
            out.push(value_record(column, logic, &cell, None, &cell, exp(column)));
            for (column, v) in [
                ("|- (p -> q) | (q -> p)", &q.linearity),
                ("~p |- p => q", &q.neg_antecedent),
                ("q |- p => q", &q.true_consequent),
            ] {
                out.push(verdict_record(column, logic, v, exp(column)));
            }
        }
        "laws" => {
            let mismatches = import_export_mismatches(logic);
            let column = "import-export identity";
            let status = if mismatches.is_empty() {
                "holds".to_string()
            } else {
                format!("fails at {} triples", mismatches.len())
            };
            let mut rec = value_record(
                column,
                logic,
                &status,
                None,
                &yes_no(mismatches.is_empty()),
                exp(column),
            );
            if let Some(t) = mismatches.first() {
                rec.notes.push(format!(
                    "first mismatch: A={}, B={}, C={}",
                    t[0], t[1], t[2]
                ));
            }
            out.push(rec);
            let connexive = connexivity_check(logic)?;
            for (column, v) in [
                ("p -> q |- ~(p -> ~q)", &connexive.indicative),
                ("~p | q |- ~(~p | ~q)", &connexive.material),
            ] {
                out.push(verdict_record(column, logic, v, exp(column)));
            }
            let refinement = classical_refinement(logic, depth)?;
            let column = "refinement preserves 0 and 1";
            let preserved = refinement.counterexample.is_none();
            let mut rec = value_record(
                column,
                logic,
                if preserved { "holds" } else { "fails" },
                None,
                &yes_no(preserved),
                exp(column),
            );
            if let Some(c) = &refinement.counterexample {
                rec.notes.push(format!(
                    "{} is {} at {} but {} at {}",
                    c.formula,
                    c.value,
                    c.valuation,
                    u8::from(c.refined_value),
                    c.refinement
                ));
            }
            out.push(rec);
        }
        "modes" => {
            for mode in [
                ConsequenceMode::SS,
                ConsequenceMode::ST,
                ConsequenceMode::TS,
            ] {
                let l = logic.with_mode(mode);
                let p = mode_profile(&l).map_err(AuditError::from)?;
                let row = l.name();
                for (column, v) in [
                    ("|- p -> p", &p.identity),
                    ("p -> q |- q -> p", &p.converse),
                ] {
                    out.push(verdict_record(
                        column,
                        &l,
                        v,
                        goldens.expectation(name, &row, column),
                    ));
                }
            }
        }
        other => return Err(UnknownSection(other.to_string()).into()),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_goldens_load() {
        let g = Goldens::embedded();
        assert_eq!(g.tables.len(), SECTIONS.len());
        assert_eq!(g.tables["gibbard"].columns, strings(&GIBBARD_COLUMNS));
        assert_eq!(
            g.tables["mandelkern"].columns,
            strings(&MANDELKERN_PRINCIPLES)
        );
    }

    #[test]
    fn unstated_cells_are_not_compared() {
        let computed = Computed {
            columns: strings(&["a", "b"]),
            rows: vec![("r".to_string(), strings(&["yes", "no"]))],
            notes: Vec::new(),
        };
        let golden = Golden {
            version: 1,
            columns: strings(&["a", "b"]),
            rows: [("r".to_string(), strings(&["yes", "-"]))]
                .into_iter()
                .collect(),
        };
        assert!(compare("t", computed, Some(&golden)).matches);
    }

    #[test]
    fn cell_mismatch_is_reported() {
        let computed = Computed {
            columns: strings(&["a"]),
            rows: vec![("r".to_string(), strings(&["no"]))],
            notes: Vec::new(),
        };
        let golden = Golden {
            version: 1,
            columns: strings(&["a"]),
            rows: [("r".to_string(), strings(&["yes"]))].into_iter().collect(),
        };
        let s = compare("t", computed, Some(&golden));
        assert!(!s.matches);
        assert_eq!(
            s.mismatches,
            vec!["r, a: computed no, expected yes".to_string()]
        );
    }

    #[test]
    fn missing_rows_are_mismatches() {
        let computed = Computed {
            columns: strings(&["a"]),
            rows: vec![("r".to_string(), strings(&["no"]))],
            notes: Vec::new(),
        };
        let golden = Golden {
            version: 1,
            columns: strings(&["a"]),
            rows: IndexMap::new(),
        };
        assert!(!compare("t", computed, Some(&golden)).matches);
    }

    #[test]
    fn modes_section_matches() {
        let s = section("modes", &Goldens::embedded(), 3).unwrap();
        assert!(s.matches, "{:?}", s.mismatches);
    }
}
