//! Schema-level metainference search.
//!
//! A [`MetaRule`] such as "if `|- A -> B` then `A -> (B -> C) == A -> C`" is
//! checked by binding its metavariables to corpus formulas and comparing value
//! tables. Judgements are compiled once into lookup tables indexed by the tuple
//! of metavariable values at a valuation, so checking a binding is a table scan.
//!
//! Fresh metavariables are universally quantified inside the judgement that
//! mentions them. They are realised by a new atom, which takes every value
//! independently of the corpus atoms and so covers every possible formula.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use rayon::prelude::*;

use super::corpus::Corpus;
use super::{AuditError, Witness};
use crate::consequence::{entails, equivalent, Sequent};
use crate::formula::{parse, BinaryOp, Formula};
use crate::semantics::{eval, eval_classical, LogicSpec, TruthValue, Valuation};

/// A binary connective defined by a template over `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub template: Formula,
    table: [[TruthValue; 3]; 3],
    classical: [[bool; 2]; 2],
}

impl Connective {
    pub fn define(name: impl Into<String>, template: Formula, logic: &LogicSpec) -> Connective {
        let mut table = [[TruthValue::F; 3]; 3];
        let mut classical = [[false; 2]; 2];
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                let lookup = |v: &str| match v {
                    "x" => Some(a),
                    "y" => Some(b),
                    _ => None,
                };
                table[a.index()][b.index()] =
                    crate::semantics::eval_with(&template, &lookup, logic)
                        .expect("template over x and y");
            }
        }
        for a in [false, true] {
            for b in [false, true] {
                let lookup = |v: &str| match v {
                    "x" => Some(a),
                    "y" => Some(b),
                    _ => None,
                };
                classical[a as usize][b as usize] =
                    eval_classical(&template, &lookup).expect("template over x and y");
            }
        }
        Connective {
            name: name.into(),
            template,
            table,
            classical,
        }
    }

    pub fn builtin(op: BinaryOp, logic: &LogicSpec) -> Connective {
        let template = Formula::binary(op, Formula::atom("x"), Formula::atom("y"));
        Connective::define(op.symbol(), template, logic)
    }

    pub fn apply(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.table[a.index()][b.index()]
    }

    pub fn table(&self) -> [[TruthValue; 3]; 3] {
        self.table
    }

    /// The formula this connective abbreviates when applied to `l` and `r`.
    pub fn expand(&self, l: Formula, r: Formula) -> Formula {
        self.template.substitute(&|v| match v {
            "x" => Some(l.clone()),
            "y" => Some(r.clone()),
            _ => None,
        })
    }
}

/// A schema over metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Neg(Box<Term>),
    Op(BinaryOp, Box<Term>, Box<Term>),
    Custom(Arc<Connective>, Box<Term>, Box<Term>),
}

impl Term {
    /// Parses a schema; every atom is a metavariable.
    pub fn parse(text: &str) -> Term {
        Term::from_formula(&parse(text).unwrap_or_else(|e| panic!("bad schema `{text}`: {e}")))
    }

    pub fn from_formula(f: &Formula) -> Term {
        match f {
            Formula::Atom(a) => Term::Var(a.clone()),
            Formula::Neg(sub) => Term::Neg(Box::new(Term::from_formula(sub))),
            _ => {
                let (op, l, r) = f.as_binary().expect("binary node");
                Term::Op(
                    op,
                    Box::new(Term::from_formula(l)),
                    Box::new(Term::from_formula(r)),
                )
            }
        }
    }

    /// Replaces every `op` node by `conn`.
    pub fn replace_op(&self, op: BinaryOp, conn: &Arc<Connective>) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Neg(sub) => Term::Neg(Box::new(sub.replace_op(op, conn))),
            Term::Op(o, l, r) => {
                let (l, r) = (
                    Box::new(l.replace_op(op, conn)),
                    Box::new(r.replace_op(op, conn)),
                );
                if *o == op {
                    Term::Custom(conn.clone(), l, r)
                } else {
                    Term::Op(*o, l, r)
                }
            }
            Term::Custom(c, l, r) => Term::Custom(
                c.clone(),
                Box::new(l.replace_op(op, conn)),
                Box::new(r.replace_op(op, conn)),
            ),
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::Neg(sub) => sub.collect_vars(out),
            Term::Op(_, l, r) | Term::Custom(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn value(&self, lookup: &dyn Fn(&str) -> TruthValue, logic: &LogicSpec) -> TruthValue {
        match self {
            Term::Var(v) => lookup(v),
            Term::Neg(sub) => logic.neg(sub.value(lookup, logic)),
            Term::Op(op, l, r) => logic.apply(*op, l.value(lookup, logic), r.value(lookup, logic)),
            Term::Custom(c, l, r) => c.apply(l.value(lookup, logic), r.value(lookup, logic)),
        }
    }

    pub fn classical_value(&self, lookup: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Term::Var(v) => lookup(v),
            Term::Neg(sub) => !sub.classical_value(lookup),
            Term::Op(op, l, r) => crate::semantics::classical_apply(
                *op,
                l.classical_value(lookup),
                r.classical_value(lookup),
            ),
            Term::Custom(c, l, r) => {
                c.classical[l.classical_value(lookup) as usize][r.classical_value(lookup) as usize]
            }
        }
    }

    /// The object-language formula obtained by substituting `bindings`; unbound
    /// metavariables are left as atoms.
    pub fn instantiate(&self, bindings: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Term::Var(v) => bindings
                .get(v)
                .cloned()
                .unwrap_or_else(|| Formula::atom(v.as_str())),
            Term::Neg(sub) => Formula::neg(sub.instantiate(bindings)),
            Term::Op(op, l, r) => {
                Formula::binary(*op, l.instantiate(bindings), r.instantiate(bindings))
            }
            Term::Custom(c, l, r) => c.expand(l.instantiate(bindings), r.instantiate(bindings)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.instantiate(&BTreeMap::new()))
    }
}

/// A validity claim about schema instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgement {
    /// `premises |- conclusion` in the logic under audit; no premises means theoremhood.
    Entails(Vec<Term>, Term),
    /// Mutual entailment.
    Equiv(Term, Term),
    /// Two-valued entailment with conditionals read materially.
    Classical(Vec<Term>, Term),
}

impl Judgement {
    pub fn theorem(t: &str) -> Judgement {
        Judgement::Entails(Vec::new(), Term::parse(t))
    }

    pub fn entails(premises: &[&str], conclusion: &str) -> Judgement {
        Judgement::Entails(
            premises.iter().map(|p| Term::parse(p)).collect(),
            Term::parse(conclusion),
        )
    }

    pub fn equiv(a: &str, b: &str) -> Judgement {
        Judgement::Equiv(Term::parse(a), Term::parse(b))
    }

    pub fn classical(premises: &[&str], conclusion: &str) -> Judgement {
        Judgement::Classical(
            premises.iter().map(|p| Term::parse(p)).collect(),
            Term::parse(conclusion),
        )
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Judgement::Entails(ps, c) | Judgement::Classical(ps, c) => {
                ps.iter().chain(std::iter::once(c)).collect()
            }
            Judgement::Equiv(a, b) => vec![a, b],
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in self.terms() {
            t.collect_vars(&mut out);
        }
        out
    }

    fn is_classical(&self) -> bool {
        matches!(self, Judgement::Classical(..))
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Judgement {
        match self {
            Judgement::Entails(ps, c) => Judgement::Entails(ps.iter().map(f).collect(), f(c)),
            Judgement::Equiv(a, b) => Judgement::Equiv(f(a), f(b)),
            Judgement::Classical(ps, c) => Judgement::Classical(ps.iter().map(f).collect(), f(c)),
        }
    }

    /// Whether the judgement fails locally at one assignment of values.
    fn violated_at(&self, lookup: &dyn Fn(&str) -> TruthValue, logic: &LogicSpec) -> bool {
        let mode = logic.mode;
        match self {
            Judgement::Entails(ps, c) => {
                ps.iter()
                    .all(|p| mode.premise_designated(p.value(lookup, logic)))
                    && !mode.conclusion_designated(c.value(lookup, logic))
            }
            Judgement::Equiv(a, b) => {
                let (va, vb) = (a.value(lookup, logic), b.value(lookup, logic));
                (mode.premise_designated(va) && !mode.conclusion_designated(vb))
                    || (mode.premise_designated(vb) && !mode.conclusion_designated(va))
            }
            Judgement::Classical(ps, c) => {
                let lookup2 = |v: &str| lookup(v) == TruthValue::T;
                ps.iter().all(|p| p.classical_value(&lookup2)) && !c.classical_value(&lookup2)
            }
        }
    }

    /// Decides the instantiated judgement directly with the consequence checker.
    pub fn check_instance(
        &self,
        bindings: &BTreeMap<String, Formula>,
        logic: &LogicSpec,
    ) -> Result<bool, AuditError> {
        Ok(match self {
            Judgement::Entails(ps, c) => {
                let s = Sequent::new(
                    ps.iter().map(|p| p.instantiate(bindings)).collect(),
                    c.instantiate(bindings),
                );
                entails(&s, logic)?.is_valid()
            }
            Judgement::Equiv(a, b) => {
                equivalent(&a.instantiate(bindings), &b.instantiate(bindings), logic)?.is_valid()
            }
            Judgement::Classical(ps, c) => {
                let ps: Vec<Formula> = ps.iter().map(|p| p.instantiate(bindings)).collect();
                classical_countermodel(&ps, &c.instantiate(bindings)).is_none()
            }
        })
    }

    /// Whether the instantiated judgement fails at the valuation `v`.
    fn fails_at(
        &self,
        bindings: &BTreeMap<String, Formula>,
        v: &Valuation,
        logic: &LogicSpec,
    ) -> bool {
        let value =
            |t: &Term| eval(&t.instantiate(bindings), v, logic).expect("valuation covers instance");
        let mode = logic.mode;
        match self {
            Judgement::Entails(ps, c) => {
                ps.iter().all(|p| mode.premise_designated(value(p)))
                    && !mode.conclusion_designated(value(c))
            }
            Judgement::Equiv(a, b) => {
                let (va, vb) = (value(a), value(b));
                (mode.premise_designated(va) && !mode.conclusion_designated(vb))
                    || (mode.premise_designated(vb) && !mode.conclusion_designated(va))
            }
            Judgement::Classical(ps, c) => {
                let lookup = |a: &str| v.get(a).map(|x| x == TruthValue::T);
                let value = |t: &Term| {
                    eval_classical(&t.instantiate(bindings), &lookup)
                        .expect("valuation covers instance")
                };
                ps.iter().all(&value) && !value(c)
            }
        }
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ps: &[Term]| {
            ps.iter()
                .map(Term::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Judgement::Entails(ps, c) if ps.is_empty() => write!(f, "|- {c}"),
            Judgement::Entails(ps, c) => write!(f, "{} |- {c}", list(ps)),
            Judgement::Equiv(a, b) => write!(f, "{a} == {b}"),
            Judgement::Classical(ps, c) => write!(f, "{} |-CL {c}", list(ps)),
        }
    }
}

/// Two-valued countermodel search, conditionals read materially.
pub fn classical_countermodel(
    premises: &[Formula],
    conclusion: &Formula,
) -> Option<IndexMap<String, bool>> {
    let mut atoms = Vec::new();
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        f.collect_atoms(&mut atoms);
    }
    let n = atoms.len();
    (0..1usize << n).find_map(|w| {
        let v: IndexMap<String, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), (w >> (n - 1 - i)) & 1 == 1))
            .collect();
        let lookup = |a: &str| v.get(a).copied();
        let holds = |f: &Formula| eval_classical(f, &lookup).expect("atoms collected");
        (premises.iter().all(holds) && !holds(conclusion)).then_some(v)
    })
}

/// "If every premise holds then the conclusion holds", for every binding of the
/// metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaRule {
    pub name: String,
    pub premises: Vec<Judgement>,
    pub conclusion: Judgement,
    /// Metavariables quantified inside each judgement instead of bound by the search.
    pub fresh: Vec<String>,
}

impl MetaRule {
    pub fn new(
        name: impl Into<String>,
        premises: Vec<Judgement>,
        conclusion: Judgement,
    ) -> MetaRule {
        MetaRule {
            name: name.into(),
            premises,
            conclusion,
            fresh: Vec::new(),
        }
    }

    pub fn with_fresh(mut self, vars: &[&str]) -> MetaRule {
        self.fresh = vars.iter().map(|v| v.to_string()).collect();
        self
    }

    /// Bound metavariables in the order the search assigns them.
    pub fn search_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            for v in j.vars() {
                if !out.contains(&v) && !self.fresh.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> MetaRule {
        MetaRule {
            name: self.name.clone(),
            premises: self.premises.iter().map(|j| j.map_terms(f)).collect(),
            conclusion: self.conclusion.map_terms(f),
            fresh: self.fresh.clone(),
        }
    }

    /// A per-valuation sufficient condition: at every tuple of metavariable
    /// values where no premise fails locally, the conclusion does not fail
    /// locally either. `None` when a classical judgement is involved.
    pub fn pointwise_certificate(&self, logic: &LogicSpec) -> Option<bool> {
        if self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .any(Judgement::is_classical)
        {
            return None;
        }
        let vars: Vec<String> = self
            .search_vars()
            .into_iter()
            .chain(self.fresh.iter().cloned())
            .collect();
        let m = vars.len();
        Some((0..3usize.pow(m as u32)).all(|t| {
            let lookup = |v: &str| tuple_value(&vars, t, v);
            self.premises.iter().any(|p| p.violated_at(&lookup, logic))
                || !self.conclusion.violated_at(&lookup, logic)
        }))
    }

    /// Decides one instance directly: returns whether the premises all hold and
    /// whether the conclusion holds. Fresh metavariables become new atoms.
    pub fn check_instance(
        &self,
        bindings: &BTreeMap<String, Formula>,
        logic: &LogicSpec,
    ) -> Result<(bool, bool), AuditError> {
        let bindings = self.with_fresh_atoms(bindings);
        let mut premises_hold = true;
        for p in &self.premises {
            if !p.check_instance(&bindings, logic)? {
                premises_hold = false;
                break;
            }
        }
        Ok((
            premises_hold,
            self.conclusion.check_instance(&bindings, logic)?,
        ))
    }

    fn with_fresh_atoms(&self, bindings: &BTreeMap<String, Formula>) -> BTreeMap<String, Formula> {
        let mut used = Vec::new();
        for f in bindings.values() {
            f.collect_atoms(&mut used);
        }
        let mut out = bindings.clone();
        for (v, atom) in self.fresh.iter().zip(fresh_atoms(&used, self.fresh.len())) {
            out.entry(v.clone()).or_insert_with(|| Formula::atom(atom));
        }
        out
    }
}

impl fmt::Display for MetaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(Judgement::to_string).collect();
        if premises.is_empty() {
            write!(f, "{}", self.conclusion)
        } else {
            write!(f, "if {} then {}", premises.join(" and "), self.conclusion)
        }
    }
}

fn tuple_value(vars: &[String], t: usize, v: &str) -> TruthValue {
    let m = vars.len();
    let i = vars
        .iter()
        .position(|x| x == v)
        .expect("metavariable in tuple");
    TruthValue::from_index((t / 3usize.pow((m - 1 - i) as u32)) % 3)
}

fn members(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &word) in mask.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            out.push(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

fn or_into(acc: &mut [u64], bits: &[u64]) {
    for (a, b) in acc.iter_mut().zip(bits) {
        *a |= b;
    }
}

fn and_into(acc: &mut [u64], bits: &[u64]) {
    for (a, b) in acc.iter_mut().zip(bits) {
        *a &= b;
    }
}

fn fresh_atoms(used: &[String], count: usize) -> Vec<String> {
    ["r", "s", "t", "u", "v", "w"]
        .iter()
        .map(|s| s.to_string())
        .filter(|s| !used.contains(s))
        .take(count)
        .collect()
}

/// Offset of a binding at a world into a premise's bad table.
type BaseFn<'s> = fn(&Search<'s>, &[usize], usize) -> usize;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Only accept counterexamples whose violating valuation gives these
    /// metavariables these values.
    pub required: BTreeMap<String, TruthValue>,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NoCounterexample,
    Counterexample(Witness),
}

struct Compiled {
    /// Local violation, indexed by the value tuple (three-valued) or the bit
    /// tuple (classical) of all metavariables.
    bad: Vec<bool>,
    classical: bool,
    /// Highest bound metavariable mentioned; `None` if only fresh ones.
    last: Option<usize>,
}

struct Search<'a> {
    rule: &'a MetaRule,
    corpus: &'a Corpus,
    k: usize,
    f: usize,
    pow3: Vec<usize>,
    pow2: Vec<usize>,
    fresh3: Vec<usize>,
    fresh2: Vec<usize>,
    premises: Vec<Compiled>,
    conclusion: Compiled,
    required: Vec<Option<TruthValue>>,
    /// `index[w][x]`: bitset of entries taking value `x` at valuation `w`.
    index: Vec<[Vec<u64>; 3]>,
    /// The same over two-valued valuations and classical values (third slot empty).
    cindex: Vec<[Vec<u64>; 3]>,
    full: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(rule: &'a MetaRule, corpus: &'a Corpus, opts: &SearchOptions) -> Search<'a> {
        let logic = corpus.logic;
        let search_vars = rule.search_vars();
        let vars: Vec<String> = search_vars
            .iter()
            .cloned()
            .chain(rule.fresh.iter().cloned())
            .collect();
        let (k, f, m) = (search_vars.len(), rule.fresh.len(), vars.len());
        let pow3: Vec<usize> = (0..m).map(|i| 3usize.pow((m - 1 - i) as u32)).collect();
        let pow2: Vec<usize> = (0..m).map(|i| 1usize << (m - 1 - i)).collect();
        let fresh3 = (0..3usize.pow(f as u32))
            .map(|fw| {
                (0..f)
                    .map(|j| ((fw / 3usize.pow((f - 1 - j) as u32)) % 3) * pow3[k + j])
                    .sum()
            })
            .collect();
        let fresh2 = (0..1usize << f)
            .map(|fw| {
                (0..f)
                    .map(|j| ((fw >> (f - 1 - j)) & 1) * pow2[k + j])
                    .sum()
            })
            .collect();
        let compile = |j: &Judgement| {
            let classical = j.is_classical();
            let bad = if classical {
                (0..1usize << m)
                    .map(|t| {
                        let lookup = |v: &str| {
                            TruthValue::from_bool(
                                (t / pow2[vars.iter().position(|x| x == v).unwrap()]) & 1 == 1,
                            )
                        };
                        j.violated_at(&lookup, &logic)
                    })
                    .collect()
            } else {
                (0..3usize.pow(m as u32))
                    .map(|t| j.violated_at(&|v: &str| tuple_value(&vars, t, v), &logic))
                    .collect()
            };
            let last = j
                .vars()
                .iter()
                .filter_map(|v| search_vars.iter().position(|x| x == v))
                .max();
            Compiled {
                bad,
                classical,
                last,
            }
        };
        let required = vars.iter().map(|v| opts.required.get(v).copied()).collect();
        let words = corpus.len().div_ceil(64);
        let worlds = corpus.entries.first().map_or(0, |e| e.table.len());
        let mut index = vec![[vec![0u64; words], vec![0u64; words], vec![0u64; words]]; worlds];
        for (i, e) in corpus.entries.iter().enumerate() {
            for (w, v) in e.table.iter().enumerate() {
                index[w][v.index()][i / 64] |= 1 << (i % 64);
            }
        }
        let mut cindex = vec![
            [vec![0u64; words], vec![0u64; words], vec![0u64; words]];
            1 << corpus.atoms.len()
        ];
        for (i, e) in corpus.entries.iter().enumerate() {
            for (w, &b) in e.classical.iter().enumerate() {
                cindex[w][b as usize][i / 64] |= 1 << (i % 64);
            }
        }
        let mut full = vec![u64::MAX; words];
        if !corpus.len().is_multiple_of(64) {
            full[words - 1] = (1u64 << (corpus.len() % 64)) - 1;
        }
        let premises = rule.premises.iter().map(compile).collect();
        let conclusion = compile(&rule.conclusion);
        Search {
            rule,
            corpus,
            k,
            f,
            pow3,
            pow2,
            fresh3,
            fresh2,
            premises,
            conclusion,
            required,
            index,
            cindex,
            full,
        }
    }

    fn base3(&self, binding: &[usize], w: usize) -> usize {
        binding
            .iter()
            .enumerate()
            .map(|(i, &e)| self.corpus.entries[e].table[w].index() * self.pow3[i])
            .sum()
    }

    fn base2(&self, binding: &[usize], w: usize) -> usize {
        binding
            .iter()
            .enumerate()
            .map(|(i, &e)| self.corpus.entries[e].classical[w] as usize * self.pow2[i])
            .sum()
    }

    fn required_ok3(&self, t: usize) -> bool {
        self.required
            .iter()
            .enumerate()
            .all(|(i, r)| r.is_none_or(|r| (t / self.pow3[i]) % 3 == r.index()))
    }

    fn required_ok2(&self, t: usize) -> bool {
        self.required.iter().enumerate().all(|(i, r)| {
            r.is_none_or(|r| {
                r.is_classical() && ((t / self.pow2[i]) & 1 == 1) == (r == TruthValue::T)
            })
        })
    }

    /// First (valuation, fresh assignment) where `j` fails under `binding`.
    fn first_violation(
        &self,
        j: &Compiled,
        binding: &[usize],
        filtered: bool,
    ) -> Option<(usize, usize)> {
        let worlds = if j.classical {
            1usize << self.corpus.atoms.len()
        } else {
            3usize.pow(self.corpus.atoms.len() as u32)
        };
        for w in 0..worlds {
            if j.classical {
                let base = self.base2(binding, w);
                for (fw, part) in self.fresh2.iter().enumerate() {
                    let t = base + part;
                    if j.bad[t] && (!filtered || self.required_ok2(t)) {
                        return Some((w, fw));
                    }
                }
            } else {
                let base = self.base3(binding, w);
                for (fw, part) in self.fresh3.iter().enumerate() {
                    let t = base + part;
                    if j.bad[t] && (!filtered || self.required_ok3(t)) {
                        return Some((w, fw));
                    }
                }
            }
        }
        None
    }

    fn premises_hold(&self, binding: &[usize], level: Option<usize>) -> bool {
        self.premises
            .iter()
            .filter(|p| p.last == level)
            .all(|p| self.first_violation(p, binding, false).is_none())
    }

    fn run(&self, parallel: bool) -> Option<(Vec<usize>, (usize, usize))> {
        if !self.premises_hold(&[], None) {
            return None;
        }
        if self.k == 0 {
            return self
                .first_violation(&self.conclusion, &[], true)
                .map(|w| (Vec::new(), w));
        }
        if parallel && self.k > 1 {
            members(&self.level_mask(&[], 0))
                .into_par_iter()
                .find_map_first(|e| self.dfs(&mut vec![e]))
        } else {
            self.dfs(&mut Vec::new())
        }
    }

    fn dfs(&self, binding: &mut Vec<usize>) -> Option<(Vec<usize>, (usize, usize))> {
        let d = binding.len();
        if d + 1 == self.k {
            return self.last_level(binding);
        }
        for e in members(&self.level_mask(binding, d)) {
            binding.push(e);
            if let Some(found) = self.dfs(binding) {
                return Some(found);
            }
            binding.pop();
        }
        None
    }

    /// Entries that, bound to metavariable `level` after `binding`, satisfy
    /// every premise whose last metavariable is `level`: at each valuation the
    /// entry must take a value no fresh assignment makes locally bad.
    fn level_mask(&self, binding: &[usize], level: usize) -> Vec<u64> {
        let mut mask = self.full.clone();
        for p in self.premises.iter().filter(|p| p.last == Some(level)) {
            let (index, pow, parts, base): (&[[Vec<u64>; 3]], usize, &[usize], BaseFn<'a>) =
                if p.classical {
                    (&self.cindex, self.pow2[level], &self.fresh2, Self::base2)
                } else {
                    (&self.index, self.pow3[level], &self.fresh3, Self::base3)
                };
            for (w, by_value) in index.iter().enumerate() {
                let b = base(self, binding, w);
                let mut ok = vec![0u64; mask.len()];
                for (x, bits) in by_value
                    .iter()
                    .enumerate()
                    .take(if p.classical { 2 } else { 3 })
                {
                    if parts.iter().all(|part| !p.bad[b + part + x * pow]) {
                        or_into(&mut ok, bits);
                    }
                }
                and_into(&mut mask, &ok);
            }
        }
        mask
    }

    /// Binds the final metavariable: the first entry that satisfies the last
    /// premises and takes a locally violating value at some valuation.
    fn last_level(&self, binding: &mut Vec<usize>) -> Option<(Vec<usize>, (usize, usize))> {
        let last = self.k - 1;
        let (index, pow, parts): (&[[Vec<u64>; 3]], usize, &[usize]) = if self.conclusion.classical
        {
            (&self.cindex, self.pow2[last], &self.fresh2)
        } else {
            (&self.index, self.pow3[last], &self.fresh3)
        };
        let mut violating = vec![0u64; self.full.len()];
        for (w, by_value) in index.iter().enumerate() {
            let b = if self.conclusion.classical {
                self.base2(binding, w)
            } else {
                self.base3(binding, w)
            };
            for (x, bits) in by_value
                .iter()
                .enumerate()
                .take(if self.conclusion.classical { 2 } else { 3 })
            {
                let hit = parts.iter().any(|part| {
                    let t = b + part + x * pow;
                    self.conclusion.bad[t]
                        && if self.conclusion.classical {
                            self.required_ok2(t)
                        } else {
                            self.required_ok3(t)
                        }
                });
                if hit {
                    or_into(&mut violating, bits);
                }
            }
        }
        and_into(&mut violating, &self.level_mask(binding, last));
        let e = members(&violating).into_iter().next()?;
        binding.push(e);
        let w = self
            .first_violation(&self.conclusion, binding, true)
            .expect("candidate violates the conclusion");
        Some((binding.clone(), w))
    }

    fn witness(&self, binding: &[usize], (w, fw): (usize, usize)) -> Witness {
        let search_vars = self.rule.search_vars();
        let mut bindings: BTreeMap<String, Formula> = search_vars
            .iter()
            .zip(binding)
            .map(|(v, &e)| (v.clone(), self.corpus.entries[e].formula.clone()))
            .collect();
        let fresh_names = fresh_atoms(&self.corpus.atoms, self.f);
        for (v, a) in self.rule.fresh.iter().zip(&fresh_names) {
            bindings.insert(v.clone(), Formula::atom(a.as_str()));
        }
        let n = self.corpus.atoms.len();
        let mut valuation = Valuation::new();
        let mut values = IndexMap::new();
        if self.conclusion.classical {
            for (i, a) in self.corpus.atoms.iter().enumerate() {
                valuation.set(
                    a.clone(),
                    TruthValue::from_bool((w >> (n - 1 - i)) & 1 == 1),
                );
            }
            for (j, a) in fresh_names.iter().enumerate() {
                valuation.set(
                    a.clone(),
                    TruthValue::from_bool((fw >> (self.f - 1 - j)) & 1 == 1),
                );
            }
            for (v, &e) in search_vars.iter().zip(binding) {
                values.insert(
                    v.clone(),
                    TruthValue::from_bool(self.corpus.entries[e].classical[w]),
                );
            }
        } else {
            for (i, a) in self.corpus.atoms.iter().enumerate() {
                valuation.set(
                    a.clone(),
                    TruthValue::from_index((w / 3usize.pow((n - 1 - i) as u32)) % 3),
                );
            }
            for (j, a) in fresh_names.iter().enumerate() {
                valuation.set(
                    a.clone(),
                    TruthValue::from_index((fw / 3usize.pow((self.f - 1 - j) as u32)) % 3),
                );
            }
            for (v, &e) in search_vars.iter().zip(binding) {
                values.insert(v.clone(), self.corpus.entries[e].table[w]);
            }
        }
        for (v, a) in self.rule.fresh.iter().zip(&fresh_names) {
            values.insert(v.clone(), valuation.get(a).expect("fresh atom set"));
        }
        Witness {
            bindings,
            valuation,
            values,
        }
    }
}

/// Searches the corpus for a binding that satisfies every premise and violates
/// the conclusion. Bindings are tried in corpus order, first metavariable
/// slowest, so the reported counterexample does not depend on parallelism.
/// Every counterexample is re-checked on the instantiated formulas before it
/// is returned.
pub fn search(
    rule: &MetaRule,
    corpus: &Corpus,
    opts: &SearchOptions,
) -> Result<Outcome, AuditError> {
    // Without classical judgements only three-valued tables matter, and the
    // first entry with a given table is the one the full search would reach.
    let by_table;
    let corpus = if rule
        .premises
        .iter()
        .chain([&rule.conclusion])
        .any(Judgement::is_classical)
    {
        corpus
    } else {
        by_table = corpus.by_table();
        &by_table
    };
    let s = Search::new(rule, corpus, opts);
    match s.run(opts.parallel) {
        None => Ok(Outcome::NoCounterexample),
        Some((binding, world)) => {
            let witness = s.witness(&binding, world);
            validate(rule, &witness, &corpus.logic)?;
            Ok(Outcome::Counterexample(witness))
        }
    }
}

/// Confirms a witness without value tables: every premise instance is valid,
/// the conclusion instance is invalid and fails at the stored valuation.
pub fn validate(rule: &MetaRule, witness: &Witness, logic: &LogicSpec) -> Result<(), AuditError> {
    let (premises_hold, conclusion_holds) = rule.check_instance(&witness.bindings, logic)?;
    let fails_here = rule
        .conclusion
        .fails_at(&witness.bindings, &witness.valuation, logic);
    if premises_hold && !conclusion_holds && fails_here {
        Ok(())
    } else {
        Err(AuditError::InvalidWitness(format!(
            "{}: {}",
            rule.name, witness
        )))
    }
}

/// Exhaustive reference search without compiled tables or pruning; used to
/// cross-check [`search`] on small corpora.
pub fn brute_force(
    rule: &MetaRule,
    corpus: &Corpus,
) -> Result<Option<BTreeMap<String, Formula>>, AuditError> {
    let vars = rule.search_vars();
    let n = corpus.len();
    let total = n.pow(vars.len() as u32);
    for code in 0..total {
        let bindings: BTreeMap<String, Formula> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let e = (code / n.pow((vars.len() - 1 - i) as u32)) % n;
                (v.clone(), corpus.entries[e].formula.clone())
            })
            .collect();
        let (premises_hold, conclusion_holds) = rule.check_instance(&bindings, &corpus.logic)?;
        if premises_hold && !conclusion_holds {
            return Ok(Some(bindings));
        }
    }
    Ok(None)
}
