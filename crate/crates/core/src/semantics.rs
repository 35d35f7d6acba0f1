//! Truth values, the truth tables of the conditional and of the Boolean
//! connectives, the four named logics and compositional evaluation.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::consequence::ConsequenceMode;
use crate::formula::{BinaryOp, Formula};

/// One of the three semantic values. The derived order is `F < N < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    /// 0
    F,
    /// 1/2, "neither true nor false"
    N,
    /// 1
    T,
}

impl TruthValue {
    /// Ascending order `F, N, T`, used for enumeration.
    pub const ALL: [TruthValue; 3] = [TruthValue::F, TruthValue::N, TruthValue::T];
    /// Display order `1, 1/2, 0`, used for printed matrices.
    pub const DISPLAY_ORDER: [TruthValue; 3] = [TruthValue::T, TruthValue::N, TruthValue::F];

    /// Member of the tolerant designation set {1/2, 1}.
    pub fn is_tolerant(self) -> bool {
        self != TruthValue::F
    }

    /// Member of the strict designation set {1}.
    pub fn is_strict(self) -> bool {
        self == TruthValue::T
    }

    pub fn is_classical(self) -> bool {
        self != TruthValue::N
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> TruthValue {
        TruthValue::ALL[i]
    }

    pub fn from_bool(b: bool) -> TruthValue {
        if b {
            TruthValue::T
        } else {
            TruthValue::F
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthValue::F => "0",
            TruthValue::N => "1/2",
            TruthValue::T => "1",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a truth value (expected 1, 1/2 or 0)")]
pub struct BadTruthValue(pub String);

impl FromStr for TruthValue {
    type Err = BadTruthValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(TruthValue::F),
            "1/2" | "½" | ".5" | "0.5" => Ok(TruthValue::N),
            "1" => Ok(TruthValue::T),
            other => Err(BadTruthValue(other.to_string())),
        }
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Truth table of the indicative conditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionalTable {
    /// de Finetti: void unless the antecedent is true.
    DF,
    /// Cooper-Cantwell: void only when the antecedent is false.
    CC,
}

impl ConditionalTable {
    pub fn apply(self, antecedent: TruthValue, consequent: TruthValue) -> TruthValue {
        let live = match self {
            ConditionalTable::DF => antecedent == TruthValue::T,
            ConditionalTable::CC => antecedent != TruthValue::F,
        };
        if live {
            consequent
        } else {
            TruthValue::N
        }
    }
}

/// Tables for negation, conjunction and disjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnectiveFamily {
    StrongKleene,
    /// Cooper's quasi-conjunction and quasi-disjunction.
    Quasi,
}

impl ConnectiveFamily {
    pub fn neg(self, a: TruthValue) -> TruthValue {
        match a {
            TruthValue::F => TruthValue::T,
            TruthValue::N => TruthValue::N,
            TruthValue::T => TruthValue::F,
        }
    }

    pub fn conj(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            ConnectiveFamily::StrongKleene => a.min(b),
            ConnectiveFamily::Quasi => {
                if a == TruthValue::F || b == TruthValue::F {
                    TruthValue::F
                } else {
                    a.max(b)
                }
            }
        }
    }

    pub fn disj(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            ConnectiveFamily::StrongKleene => a.max(b),
            ConnectiveFamily::Quasi => {
                if a == TruthValue::T || b == TruthValue::T {
                    TruthValue::T
                } else {
                    a.min(b)
                }
            }
        }
    }
}

/// A logic: conditional table, Boolean connective family and consequence mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogicSpec {
    pub conditional: ConditionalTable,
    pub family: ConnectiveFamily,
    pub mode: ConsequenceMode,
}

impl LogicSpec {
    pub const DF_TT: LogicSpec =
        LogicSpec::new(ConditionalTable::DF, ConnectiveFamily::StrongKleene);
    pub const CC_TT: LogicSpec =
        LogicSpec::new(ConditionalTable::CC, ConnectiveFamily::StrongKleene);
    pub const QDF_TT: LogicSpec = LogicSpec::new(ConditionalTable::DF, ConnectiveFamily::Quasi);
    pub const QCC_TT: LogicSpec = LogicSpec::new(ConditionalTable::CC, ConnectiveFamily::Quasi);
    pub const PRESETS: [LogicSpec; 4] = [
        LogicSpec::DF_TT,
        LogicSpec::CC_TT,
        LogicSpec::QDF_TT,
        LogicSpec::QCC_TT,
    ];

    pub const fn new(conditional: ConditionalTable, family: ConnectiveFamily) -> LogicSpec {
        LogicSpec {
            conditional,
            family,
            mode: ConsequenceMode::TT,
        }
    }

    pub fn with_mode(self, mode: ConsequenceMode) -> LogicSpec {
        LogicSpec { mode, ..self }
    }

    /// Preset name such as `DF/TT`, with the mode reflecting `self.mode`.
    pub fn name(&self) -> String {
        let prefix = match self.family {
            ConnectiveFamily::StrongKleene => "",
            ConnectiveFamily::Quasi => "Q",
        };
        format!("{prefix}{:?}/{}", self.conditional, self.mode)
    }

    /// Command-line slug such as `qcc-tt`.
    pub fn slug(&self) -> String {
        self.name().replace('/', "-").to_lowercase()
    }

    pub fn neg(&self, a: TruthValue) -> TruthValue {
        self.family.neg(a)
    }

    pub fn conj(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.family.conj(a, b)
    }

    pub fn disj(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.family.disj(a, b)
    }

    pub fn cond(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.conditional.apply(a, b)
    }

    /// `A => B` read as `~(A & ~B)` in the active family.
    pub fn mat_cond(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.neg(self.conj(a, self.neg(b)))
    }

    pub fn apply(&self, op: BinaryOp, a: TruthValue, b: TruthValue) -> TruthValue {
        match op {
            BinaryOp::Conj => self.conj(a, b),
            BinaryOp::Disj => self.disj(a, b),
            BinaryOp::Cond => self.cond(a, b),
            BinaryOp::MatCond => self.mat_cond(a, b),
            BinaryOp::IndBicond => self.conj(self.cond(a, b), self.cond(b, a)),
            BinaryOp::MatBicond => self.conj(self.mat_cond(a, b), self.mat_cond(b, a)),
        }
    }
}

impl fmt::Display for LogicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic `{0}` (expected df, cc, qdf or qcc, optionally with a mode suffix such as -tt or -st)")]
pub struct UnknownLogic(pub String);

impl FromStr for LogicSpec {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('/', "-");
        let (base, mode) = match key.split_once('-') {
            Some((base, mode)) => (base, mode.parse().map_err(|_| UnknownLogic(s.to_string()))?),
            None => (key.as_str(), ConsequenceMode::TT),
        };
        let logic = match base {
            "df" => LogicSpec::DF_TT,
            "cc" => LogicSpec::CC_TT,
            "qdf" => LogicSpec::QDF_TT,
            "qcc" => LogicSpec::QCC_TT,
            _ => return Err(UnknownLogic(s.to_string())),
        };
        Ok(logic.with_mode(mode))
    }
}

/// A total assignment of truth values to atoms, kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(IndexMap<String, TruthValue>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Valuation
    where
        I: IntoIterator<Item = (S, TruthValue)>,
        S: Into<String>,
    {
        Valuation(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn get(&self, atom: &str) -> Option<TruthValue> {
        self.0.get(atom).copied()
    }

    pub fn set(&mut self, atom: impl Into<String>, value: TruthValue) {
        self.0.insert(atom.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TruthValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_classical(&self) -> bool {
        self.0.values().all(|v| v.is_classical())
    }

    /// Atoms mapped to 1/2.
    pub fn void_atoms(&self) -> Vec<&str> {
        self.iter()
            .filter(|(_, v)| *v == TruthValue::N)
            .map(|(k, _)| k)
            .collect()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (atom, value) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{atom}={value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuationSyntaxError {
    #[error("expected `atom=value`, found `{0}`")]
    Entry(String),
    #[error(transparent)]
    Value(#[from] BadTruthValue),
    #[error("atom `{0}` assigned twice")]
    Duplicate(String),
}

impl FromStr for Valuation {
    type Err = ValuationSyntaxError;

    /// Parses `p=1,q=1/2,r=0` (commas or whitespace separate entries).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Valuation::new();
        for entry in s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|e| !e.is_empty())
        {
            let (atom, value) = entry
                .split_once('=')
                .ok_or_else(|| ValuationSyntaxError::Entry(entry.into()))?;
            let atom = atom.trim();
            let valid = atom.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(ValuationSyntaxError::Entry(entry.into()));
            }
            if out.get(atom).is_some() {
                return Err(ValuationSyntaxError::Duplicate(atom.into()));
            }
            out.set(atom, value.parse()?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("valuation does not assign a value to atom `{0}`")]
pub struct UnboundAtom(pub String);

/// Compositional evaluation of `f` under `v` in `logic`.
pub fn eval(f: &Formula, v: &Valuation, logic: &LogicSpec) -> Result<TruthValue, UnboundAtom> {
    eval_with(f, &|a| v.get(a), logic).map_err(UnboundAtom)
}

/// Evaluation against an arbitrary atom lookup; on failure returns the missing atom.
pub fn eval_with(
    f: &Formula,
    lookup: &dyn Fn(&str) -> Option<TruthValue>,
    logic: &LogicSpec,
) -> Result<TruthValue, String> {
    match f {
        Formula::Atom(a) => lookup(a).ok_or_else(|| a.clone()),
        Formula::Neg(sub) => Ok(logic.neg(eval_with(sub, lookup, logic)?)),
        _ => {
            let (op, l, r) = f.as_binary().expect("binary node");
            let a = eval_with(l, lookup, logic)?;
            let b = eval_with(r, lookup, logic)?;
            Ok(logic.apply(op, a, b))
        }
    }
}

/// Two-valued evaluation in which both conditionals are read materially and
/// both biconditionals as classical equivalence.
pub fn eval_classical(f: &Formula, lookup: &dyn Fn(&str) -> Option<bool>) -> Result<bool, String> {
    match f {
        Formula::Atom(a) => lookup(a).ok_or_else(|| a.clone()),
        Formula::Neg(sub) => Ok(!eval_classical(sub, lookup)?),
        _ => {
            let (op, l, r) = f.as_binary().expect("binary node");
            Ok(classical_apply(
                op,
                eval_classical(l, lookup)?,
                eval_classical(r, lookup)?,
            ))
        }
    }
}

/// Two-valued reading of a binary connective.
pub fn classical_apply(op: BinaryOp, a: bool, b: bool) -> bool {
    match op {
        BinaryOp::Conj => a && b,
        BinaryOp::Disj => a || b,
        BinaryOp::Cond | BinaryOp::MatCond => !a || b,
        BinaryOp::IndBicond | BinaryOp::MatBicond => a == b,
    }
}

/// A printed truth table: a column for unary connectives, a square for binary ones.
/// Rows and columns run in the display order `1, 1/2, 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Matrix {
    Unary([TruthValue; 3]),
    Binary([[TruthValue; 3]; 3]),
}

impl Matrix {
    pub fn cells(&self) -> Vec<TruthValue> {
        match self {
            Matrix::Unary(col) => col.to_vec(),
            Matrix::Binary(rows) => rows.iter().flatten().copied().collect(),
        }
    }

    /// Grid layout with a header row and a header column.
    pub fn render(&self, title: &str) -> String {
        let width = 3;
        let mut out = String::new();
        match self {
            Matrix::Unary(col) => {
                out.push_str(&format!("{:<w$} | {title}\n", "", w = width));
                out.push_str(&format!(
                    "{}-+-{}\n",
                    "-".repeat(width),
                    "-".repeat(title.len().max(width))
                ));
                for (arg, val) in TruthValue::DISPLAY_ORDER.iter().zip(col) {
                    out.push_str(&format!("{arg:<width$} | {val}\n"));
                }
            }
            Matrix::Binary(rows) => {
                let head: Vec<String> = TruthValue::DISPLAY_ORDER
                    .iter()
                    .map(|v| format!("{v:<width$}"))
                    .collect();
                let tw = title.len().max(width);
                out.push_str(&format!("{title:<tw$} | {}\n", head.join(" ").trim_end()));
                out.push_str(&format!(
                    "{}-+-{}\n",
                    "-".repeat(tw),
                    "-".repeat(3 * width + 2)
                ));
                for (arg, row) in TruthValue::DISPLAY_ORDER.iter().zip(rows) {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:<width$}")).collect();
                    out.push_str(&format!("{arg:<tw$} | {}\n", cells.join(" ").trim_end()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown connective `{0}` (expected neg, conj, disj, matcond, cond-df or cond-cc, optionally prefixed by quasi-)")]
pub struct UnknownConnective(pub String);

/// Full truth table of a named connective in the given family.
///
/// Accepted names: `neg`, `conj`, `disj`, `matcond`, `cond-df`, `cond-cc`.
/// A `quasi-` prefix selects the quasi family regardless of `family`.
pub fn table_of(name: &str, family: ConnectiveFamily) -> Result<Matrix, UnknownConnective> {
    let lower = name.trim().to_ascii_lowercase();
    let (family, base) = match lower.strip_prefix("quasi-") {
        Some(rest) => (ConnectiveFamily::Quasi, rest),
        None => (family, lower.as_str()),
    };
    let binary = |op: &dyn Fn(TruthValue, TruthValue) -> TruthValue| {
        Matrix::Binary(
            TruthValue::DISPLAY_ORDER.map(|a| TruthValue::DISPLAY_ORDER.map(|b| op(a, b))),
        )
    };
    let logic = |cond| LogicSpec::new(cond, family);
    Ok(match base {
        "neg" => Matrix::Unary(TruthValue::DISPLAY_ORDER.map(|a| family.neg(a))),
        "conj" => binary(&|a, b| family.conj(a, b)),
        "disj" => binary(&|a, b| family.disj(a, b)),
        "matcond" => binary(&|a, b| logic(ConditionalTable::DF).mat_cond(a, b)),
        "cond-df" => binary(&|a, b| ConditionalTable::DF.apply(a, b)),
        "cond-cc" => binary(&|a, b| ConditionalTable::CC.apply(a, b)),
        _ => return Err(UnknownConnective(name.to_string())),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("refinement choice must cover exactly the atoms valued 1/2 ({expected:?}), got {got:?}")]
pub struct BadChoice {
    pub expected: Vec<String>,
    pub got: Vec<String>,
}

/// Replaces every 1/2 in `v` by the classical value chosen for that atom.
pub fn classical_refine(
    v: &Valuation,
    choice: &IndexMap<String, bool>,
) -> Result<Valuation, BadChoice> {
    let mut expected: Vec<String> = v.void_atoms().into_iter().map(String::from).collect();
    let mut got: Vec<String> = choice.keys().cloned().collect();
    expected.sort();
    got.sort();
    if expected != got {
        return Err(BadChoice { expected, got });
    }
    Ok(Valuation::from_pairs(v.iter().map(|(atom, value)| {
        let value = match value {
            TruthValue::N => TruthValue::from_bool(choice[atom]),
            other => other,
        };
        (atom.to_string(), value)
    })))
}
