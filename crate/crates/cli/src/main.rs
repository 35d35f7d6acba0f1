use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use condlogic::audit::{corpus, ConnectiveSet, VerdictRecord};
use condlogic::consequence::{
    countermodels, entails_with, CheckOptions, ConsequenceMode, Countermodel, Sequent,
    DEFAULT_ATOM_BOUND,
};
use condlogic::formula::parse;
use condlogic::report::{audit_records, paper_report, Goldens};
use condlogic::semantics::{eval, table_of, LogicSpec, Matrix, TruthValue, Valuation};

#[derive(Parser)]
#[command(
    name = "condlogic",
    version,
    about = "Trivalent logics of indicative conditionals"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// df-tt, cc-tt, qdf-tt or qcc-tt; a mode suffix such as df-st is accepted.
    #[arg(long, global = true, default_value = "df-tt")]
    logic: LogicSpec,
    /// Consequence mode; overrides the suffix of --logic.
    #[arg(long, global = true)]
    mode: Option<ConsequenceMode>,
    /// Formula depth of the search corpus.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_ATOM_BOUND)]
    atom_bound: usize,
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory whose `<section>.toml` files replace the shipped goldens.
    #[arg(long, global = true)]
    golden_dir: Option<PathBuf>,
}

impl Global {
    fn logic(&self) -> LogicSpec {
        match self.mode {
            Some(mode) => self.logic.with_mode(mode),
            None => self.logic,
        }
    }

    fn check_options(&self) -> CheckOptions {
        CheckOptions {
            atom_bound: self.atom_bound,
            parallel: true,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Value of a formula at a valuation such as p=1,q=1/2.
    Eval { formula: String, valuation: String },
    /// Decide a sequent such as "p, q |- r"; exit 1 when invalid.
    Check { sequent: String },
    /// List countermodels in enumeration order; exit 1 when there are any.
    Countermodels {
        sequent: String,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Truth table of neg, conj, disj, matcond, cond-df or cond-cc (quasi- prefix allowed).
    Table { connective: String },
    /// Run one audit against the shipped expectations; exit 1 on a mismatch.
    Audit { which: AuditKind },
    /// Recompute every table and compare with the goldens; exit 1 on a mismatch.
    PaperReport,
    /// List the search corpus.
    Corpus {
        #[arg(long, value_delimiter = ',', default_value = "p,q")]
        atoms: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    Gibbard,
    Fitelson,
    Mandelkern,
    Khoo,
    Quasi,
    Collapse,
    Laws,
    Modes,
}

impl AuditKind {
    fn name(self) -> &'static str {
        match self {
            AuditKind::Gibbard => "gibbard",
            AuditKind::Fitelson => "fitelson",
            AuditKind::Mandelkern => "mandelkern",
            AuditKind::Khoo => "khoo",
            AuditKind::Quasi => "quasi",
            AuditKind::Collapse => "collapse",
            AuditKind::Laws => "laws",
            AuditKind::Modes => "modes",
        }
    }
}

/// Text or JSON to print, with the exit status.
struct Output {
    text: String,
    status: u8,
}

type CmdResult = Result<Output, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { formula, valuation } => cmd_eval(g, formula, valuation),
        Command::Check { sequent } => cmd_check(g, sequent),
        Command::Countermodels { sequent, limit } => cmd_countermodels(g, sequent, *limit),
        Command::Table { connective } => cmd_table(g, connective),
        Command::Audit { which } => cmd_audit(g, *which),
        Command::PaperReport => cmd_paper_report(g),
        Command::Corpus { atoms } => cmd_corpus(g, atoms),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn ok(text: String, status: u8) -> CmdResult {
    Ok(Output { text, status })
}

#[derive(Serialize)]
struct EvalOutput {
    formula: String,
    valuation: Valuation,
    logic: String,
    value: TruthValue,
}

fn cmd_eval(g: &Global, formula: &str, valuation: &str) -> CmdResult {
    let f = parse(formula).map_err(|e| e.to_string())?;
    let v: Valuation = valuation.parse().map_err(|e| format!("{e}"))?;
    let logic = g.logic();
    let value = eval(&f, &v, &logic).map_err(|e| e.to_string())?;
    if g.json {
        ok(
            json(&EvalOutput {
                formula: f.to_string(),
                valuation: v,
                logic: logic.slug(),
                value,
            }),
            0,
        )
    } else {
        ok(format!("{value}\n"), 0)
    }
}

#[derive(Serialize)]
struct CheckOutput {
    sequent: String,
    logic: String,
    valid: bool,
    countermodel: Option<Countermodel>,
}

fn parse_sequent(text: &str) -> Result<Sequent, String> {
    text.parse().map_err(|e| format!("{e}"))
}

fn cmd_check(g: &Global, sequent: &str) -> CmdResult {
    let s = parse_sequent(sequent)?;
    let logic = g.logic();
    let verdict = entails_with(&s, &logic, g.check_options()).map_err(|e| e.to_string())?;
    let status = if verdict.is_valid() { 0 } else { 1 };
    if g.json {
        let out = CheckOutput {
            sequent: s.to_string(),
            logic: logic.slug(),
            valid: verdict.is_valid(),
            countermodel: verdict.countermodel().cloned(),
        };
        return ok(json(&out), status);
    }
    let text = match verdict.countermodel() {
        None => format!("valid in {logic}: {s}\n"),
        Some(cm) => format!(
            "invalid in {logic}: {s}\ncountermodel: {}\n",
            describe(&s, cm)
        ),
    };
    ok(text, status)
}

fn describe(s: &Sequent, cm: &Countermodel) -> String {
    let mut out = cm.valuation.to_string();
    let premises: Vec<String> = s
        .premises
        .iter()
        .zip(&cm.premise_values)
        .map(|(p, v)| format!("{p} = {v}"))
        .collect();
    if !premises.is_empty() {
        write!(
            out,
            " (premises {}; conclusion {})",
            premises.join(", "),
            cm.conclusion_value
        )
        .unwrap();
    } else {
        write!(out, " (conclusion {})", cm.conclusion_value).unwrap();
    }
    out
}

#[derive(Serialize)]
struct CountermodelsOutput {
    sequent: String,
    logic: String,
    countermodels: Vec<Countermodel>,
}

fn cmd_countermodels(g: &Global, sequent: &str, limit: usize) -> CmdResult {
    let s = parse_sequent(sequent)?;
    let logic = g.logic();
    let found = countermodels(&s, &logic, limit, g.check_options()).map_err(|e| e.to_string())?;
    let status = if found.is_empty() { 0 } else { 1 };
    if g.json {
        let out = CountermodelsOutput {
            sequent: s.to_string(),
            logic: logic.slug(),
            countermodels: found,
        };
        return ok(json(&out), status);
    }
    let mut text = String::new();
    if found.is_empty() {
        writeln!(text, "no countermodels in {logic}: {s}").unwrap();
    }
    for cm in &found {
        writeln!(text, "{}", describe(&s, cm)).unwrap();
    }
    ok(text, status)
}

#[derive(Serialize)]
struct TableOutput {
    connective: String,
    /// Argument values of rows (and columns) in display order.
    order: [TruthValue; 3],
    table: Matrix,
}

fn cmd_table(g: &Global, connective: &str) -> CmdResult {
    let m = table_of(connective, g.logic().family).map_err(|e| e.to_string())?;
    if g.json {
        let out = TableOutput {
            connective: connective.to_string(),
            order: TruthValue::DISPLAY_ORDER,
            table: m,
        };
        return ok(json(&out), 0);
    }
    ok(m.render(connective), 0)
}

fn goldens(g: &Global) -> Result<Goldens, String> {
    Goldens::load(g.golden_dir.as_deref()).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct AuditOutput<'a> {
    audit: &'a str,
    logic: String,
    depth: usize,
    records: Vec<VerdictRecord>,
}

fn cmd_audit(g: &Global, which: AuditKind) -> CmdResult {
    let logic = g.logic();
    let records =
        audit_records(which.name(), &logic, &goldens(g)?, g.depth).map_err(|e| e.to_string())?;
    let status = if records.iter().all(|r| r.matches) {
        0
    } else {
        1
    };
    if g.json {
        return ok(
            json(&AuditOutput {
                audit: which.name(),
                logic: logic.slug(),
                depth: g.depth,
                records,
            }),
            status,
        );
    }
    let mut text = format!(
        "{} audit for {logic} (corpus depth {})\n",
        which.name(),
        g.depth
    );
    let width = records.iter().map(|r| r.condition.len()).max().unwrap_or(0);
    for r in &records {
        writeln!(
            text,
            "{:width$}  {}  expected: {}  {}",
            r.condition,
            r.status,
            r.paper_expectation,
            if r.matches { "ok" } else { "MISMATCH" }
        )
        .unwrap();
        if let Some(w) = &r.witness {
            writeln!(text, "{:width$}  witness: {w}", "").unwrap();
        }
        for n in &r.notes {
            writeln!(text, "{:width$}  note: {n}", "").unwrap();
        }
    }
    writeln!(text, "{}", if status == 0 { "MATCH" } else { "MISMATCH" }).unwrap();
    ok(text, status)
}

fn cmd_paper_report(g: &Global) -> CmdResult {
    let report = paper_report(&goldens(g)?, g.depth).map_err(|e| e.to_string())?;
    let status = if report.matches() { 0 } else { 1 };
    if g.json {
        return ok(json(&report), status);
    }
    ok(format!("{report}\n"), status)
}

#[derive(Serialize)]
struct CorpusOutput {
    atoms: Vec<String>,
    depth: usize,
    logic: String,
    formulas: Vec<String>,
}

fn cmd_corpus(g: &Global, atoms: &[String]) -> CmdResult {
    let logic = g.logic();
    let formulas =
        corpus(atoms, g.depth, &ConnectiveSet::standard(), &logic).map_err(|e| e.to_string())?;
    let formulas: Vec<String> = formulas.iter().map(|f| f.to_string()).collect();
    if g.json {
        let out = CorpusOutput {
            atoms: atoms.to_vec(),
            depth: g.depth,
            logic: logic.slug(),
            formulas,
        };
        return ok(json(&out), 0);
    }
    let mut text = String::new();
    for f in &formulas {
        writeln!(text, "{f}").unwrap();
    }
    ok(text, 0)
}
