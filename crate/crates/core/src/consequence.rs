//! Consequence relations over the finite valuation space of a sequent.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::{parse, Formula, ParseError};
use crate::semantics::{eval, eval_with, LogicSpec, TruthValue, Valuation};

/// Which values count as designated for premises and for the conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConsequenceMode {
    /// tolerant premises, tolerant conclusion: non-falsity is preserved
    TT,
    SS,
    ST,
    TS,
}

impl ConsequenceMode {
    pub const ALL: [ConsequenceMode; 4] = [
        ConsequenceMode::TT,
        ConsequenceMode::SS,
        ConsequenceMode::ST,
        ConsequenceMode::TS,
    ];

    pub fn premise_designated(self, v: TruthValue) -> bool {
        match self {
            ConsequenceMode::TT | ConsequenceMode::TS => v.is_tolerant(),
            ConsequenceMode::SS | ConsequenceMode::ST => v.is_strict(),
        }
    }

    pub fn conclusion_designated(self, v: TruthValue) -> bool {
        match self {
            ConsequenceMode::TT | ConsequenceMode::ST => v.is_tolerant(),
            ConsequenceMode::SS | ConsequenceMode::TS => v.is_strict(),
        }
    }
}

impl fmt::Display for ConsequenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown consequence mode `{0}` (expected tt, ss, st or ts)")]
pub struct UnknownMode(pub String);

impl FromStr for ConsequenceMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tt" => Ok(ConsequenceMode::TT),
            "ss" => Ok(ConsequenceMode::SS),
            "st" => Ok(ConsequenceMode::ST),
            "ts" => Ok(ConsequenceMode::TS),
            _ => Err(UnknownMode(s.to_string())),
        }
    }
}

/// Premises (possibly none) and a single conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Sequent {
        Sequent {
            premises,
            conclusion,
        }
    }

    pub fn theorem(conclusion: Formula) -> Sequent {
        Sequent {
            premises: Vec::new(),
            conclusion,
        }
    }

    /// Atoms of the premises then the conclusion, in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            f.collect_atoms(&mut out);
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(Formula::to_string).collect();
        if premises.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", premises.join(", "), self.conclusion)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequentSyntaxError {
    #[error("sequent needs a turnstile `|-`")]
    MissingTurnstile,
    #[error("in {part}: {source}")]
    Formula {
        part: String,
        #[source]
        source: ParseError,
    },
}

impl FromStr for Sequent {
    type Err = SequentSyntaxError;

    /// Parses `A, B |- C`; `⊢` and `⊨` are accepted for the turnstile.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = ["|-", "⊢", "⊨"]
            .iter()
            .find_map(|t| s.split_once(t))
            .ok_or(SequentSyntaxError::MissingTurnstile)?;
        let parse_part = |part: &str, what: String| {
            parse(part).map_err(|source| SequentSyntaxError::Formula { part: what, source })
        };
        let mut premises = Vec::new();
        if !lhs.trim().is_empty() {
            for (i, part) in lhs.split(',').enumerate() {
                premises.push(parse_part(part, format!("premise {}", i + 1))?);
            }
        }
        let conclusion = parse_part(rhs, "conclusion".to_string())?;
        Ok(Sequent {
            premises,
            conclusion,
        })
    }
}

/// A valuation making every premise designated and the conclusion undesignated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub valuation: Valuation,
    pub premise_values: Vec<TruthValue>,
    pub conclusion_value: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Countermodel),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(cm) => Some(cm),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConsequenceError {
    #[error("sequent has {count} atoms, more than the bound of {bound}")]
    TooManyAtoms { count: usize, bound: usize },
    #[error("internal error: countermodel {0} failed re-evaluation")]
    SelfCheck(String),
}

pub const DEFAULT_ATOM_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub atom_bound: usize,
    /// Split the valuation space across the current rayon pool.
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            atom_bound: DEFAULT_ATOM_BOUND,
            parallel: false,
        }
    }
}

/// The `index`-th valuation of `atoms` in lexicographic order, the first atom
/// being the most significant digit and values ordered `0 < 1/2 < 1`.
pub fn valuation_at(atoms: &[String], index: usize) -> Valuation {
    let mut digits = vec![TruthValue::F; atoms.len()];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = TruthValue::from_index(rest % 3);
        rest /= 3;
    }
    Valuation::from_pairs(atoms.iter().cloned().zip(digits))
}

struct Space<'a> {
    sequent: &'a Sequent,
    logic: &'a LogicSpec,
    atoms: Vec<String>,
    position: HashMap<String, usize>,
    size: usize,
}

impl<'a> Space<'a> {
    fn new(
        sequent: &'a Sequent,
        logic: &'a LogicSpec,
        bound: usize,
    ) -> Result<Space<'a>, ConsequenceError> {
        let atoms = sequent.atoms();
        if atoms.len() > bound {
            return Err(ConsequenceError::TooManyAtoms {
                count: atoms.len(),
                bound,
            });
        }
        let position = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let size = 3usize.pow(atoms.len() as u32);
        Ok(Space {
            sequent,
            logic,
            atoms,
            position,
            size,
        })
    }

    fn is_counter(&self, index: usize) -> bool {
        let mut digits = vec![TruthValue::F; self.atoms.len()];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = TruthValue::from_index(rest % 3);
            rest /= 3;
        }
        let lookup = |a: &str| self.position.get(a).map(|&i| digits[i]);
        let mode = self.logic.mode;
        let value = |f: &Formula| eval_with(f, &lookup, self.logic).expect("atoms cover sequent");
        self.sequent
            .premises
            .iter()
            .all(|p| mode.premise_designated(value(p)))
            && !mode.conclusion_designated(value(&self.sequent.conclusion))
    }

    /// Rebuilds the countermodel through the public evaluator and re-checks it.
    fn countermodel(&self, index: usize) -> Result<Countermodel, ConsequenceError> {
        let valuation = valuation_at(&self.atoms, index);
        let ev = |f: &Formula| eval(f, &valuation, self.logic).expect("atoms cover sequent");
        let premise_values: Vec<TruthValue> = self.sequent.premises.iter().map(ev).collect();
        let conclusion_value = ev(&self.sequent.conclusion);
        let mode = self.logic.mode;
        let genuine = premise_values.iter().all(|v| mode.premise_designated(*v))
            && !mode.conclusion_designated(conclusion_value);
        if !genuine {
            return Err(ConsequenceError::SelfCheck(valuation.to_string()));
        }
        Ok(Countermodel {
            valuation,
            premise_values,
            conclusion_value,
        })
    }
}

/// Decides `premises |- conclusion` by enumerating all valuations; an invalid
/// sequent comes with its lexicographically first countermodel.
pub fn entails(s: &Sequent, logic: &LogicSpec) -> Result<Verdict, ConsequenceError> {
    entails_with(s, logic, CheckOptions::default())
}

pub fn entails_with(
    s: &Sequent,
    logic: &LogicSpec,
    opts: CheckOptions,
) -> Result<Verdict, ConsequenceError> {
    let space = Space::new(s, logic, opts.atom_bound)?;
    let first = if opts.parallel {
        (0..space.size)
            .into_par_iter()
            .find_first(|&i| space.is_counter(i))
    } else {
        (0..space.size).find(|&i| space.is_counter(i))
    };
    match first {
        None => Ok(Verdict::Valid),
        Some(i) => Ok(Verdict::Invalid(space.countermodel(i)?)),
    }
}

/// Up to `limit` countermodels in enumeration order; empty iff the sequent is valid.
pub fn countermodels(
    s: &Sequent,
    logic: &LogicSpec,
    limit: usize,
    opts: CheckOptions,
) -> Result<Vec<Countermodel>, ConsequenceError> {
    let space = Space::new(s, logic, opts.atom_bound)?;
    let mut hits: Vec<usize> = if opts.parallel {
        (0..space.size)
            .into_par_iter()
            .filter(|&i| space.is_counter(i))
            .collect()
    } else {
        (0..space.size)
            .filter(|&i| space.is_counter(i))
            .take(limit)
            .collect()
    };
    hits.truncate(limit);
    hits.into_iter().map(|i| space.countermodel(i)).collect()
}

/// Mutual entailment; an invalid verdict carries the countermodel of the first failing direction.
pub fn equivalent(
    a: &Formula,
    b: &Formula,
    logic: &LogicSpec,
) -> Result<Verdict, ConsequenceError> {
    equivalent_with(a, b, logic, CheckOptions::default())
}

pub fn equivalent_with(
    a: &Formula,
    b: &Formula,
    logic: &LogicSpec,
    opts: CheckOptions,
) -> Result<Verdict, ConsequenceError> {
    let forward = entails_with(&Sequent::new(vec![a.clone()], b.clone()), logic, opts)?;
    if !forward.is_valid() {
        return Ok(forward);
    }
    entails_with(&Sequent::new(vec![b.clone()], a.clone()), logic, opts)
}

/// Reasoning by cases for one instance: if `context, a |- c` and `context, b |- c`
/// are both valid then `context, a | b |- c` must be valid. Vacuously valid when a
/// case premise fails.
pub fn reasoning_by_cases_check(
    a: &Formula,
    b: &Formula,
    c: &Formula,
    context: &[Formula],
    logic: &LogicSpec,
) -> Result<Verdict, ConsequenceError> {
    let with = |extra: Formula| {
        let mut premises = context.to_vec();
        premises.push(extra);
        Sequent::new(premises, c.clone())
    };
    if !entails(&with(a.clone()), logic)?.is_valid()
        || !entails(&with(b.clone()), logic)?.is_valid()
    {
        return Ok(Verdict::Valid);
    }
    entails(&with(Formula::disj(a.clone(), b.clone())), logic)
}

/// The two behaviours that make a non-TT mode unattractive for a conditional
/// logic: `|- p -> p` failing, and `p -> q |- q -> p` holding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeProfile {
    pub logic: LogicSpec,
    pub identity: Verdict,
    pub converse: Verdict,
}

impl ModeProfile {
    pub fn identity_fails(&self) -> bool {
        !self.identity.is_valid()
    }

    pub fn converse_holds(&self) -> bool {
        self.converse.is_valid()
    }

    /// At least one of the two defects is present.
    pub fn defective(&self) -> bool {
        self.identity_fails() || self.converse_holds()
    }
}

pub fn mode_profile(logic: &LogicSpec) -> Result<ModeProfile, ConsequenceError> {
    let check = |s: &str| entails(&s.parse::<Sequent>().expect("fixed sequent"), logic);
    Ok(ModeProfile {
        logic: *logic,
        identity: check("|- p -> p")?,
        converse: check("p -> q |- q -> p")?,
    })
}
