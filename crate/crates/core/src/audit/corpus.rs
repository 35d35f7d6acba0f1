//! Bounded formula corpora, deduplicated by value table.

use std::collections::HashSet;

use crate::formula::{BinaryOp, Formula};
use crate::semantics::{classical_apply, LogicSpec, TruthValue};

pub const DEFAULT_MAX_DEPTH: usize = 3;
pub const DEFAULT_MAX_ATOMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitExceeded {
    #[error("corpus depth {got} exceeds the limit of {limit}")]
    Depth { got: usize, limit: usize },
    #[error("corpus over {got} atoms exceeds the limit of {limit}")]
    Atoms { got: usize, limit: usize },
}

/// Connectives used to grow a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveSet {
    pub negation: bool,
    pub binary: Vec<BinaryOp>,
}

impl ConnectiveSet {
    /// `~`, `&`, `|` and `->`.
    pub fn standard() -> ConnectiveSet {
        ConnectiveSet {
            negation: true,
            binary: vec![BinaryOp::Conj, BinaryOp::Disj, BinaryOp::Cond],
        }
    }

    pub fn negation_only() -> ConnectiveSet {
        ConnectiveSet {
            negation: true,
            binary: Vec::new(),
        }
    }
}

/// What two formulas must share to count as duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dedup {
    /// Three-valued table under the active logic.
    Table,
    /// Three-valued table and two-valued table (conditionals read materially).
    TableAndClassical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub formula: Formula,
    pub depth: usize,
    /// Values at the `3^n` valuations, in enumeration order.
    pub table: Vec<TruthValue>,
    /// Two-valued values at the `2^n` classical valuations, first atom most significant.
    pub classical: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub atoms: Vec<String>,
    pub max_depth: usize,
    pub logic: LogicSpec,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_depth: usize,
    pub max_atoms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: DEFAULT_MAX_DEPTH,
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

fn atom_tables(index: usize, n: usize) -> (Vec<TruthValue>, Vec<bool>) {
    let place3 = 3usize.pow((n - 1 - index) as u32);
    let place2 = 1usize << (n - 1 - index);
    let table = (0..3usize.pow(n as u32))
        .map(|w| TruthValue::from_index((w / place3) % 3))
        .collect();
    let classical = (0..1usize << n).map(|w| (w / place2) % 2 == 1).collect();
    (table, classical)
}

impl Corpus {
    pub fn build(
        atoms: &[String],
        max_depth: usize,
        connectives: &ConnectiveSet,
        logic: &LogicSpec,
        dedup: Dedup,
        limits: Limits,
    ) -> Result<Corpus, LimitExceeded> {
        if max_depth > limits.max_depth {
            return Err(LimitExceeded::Depth {
                got: max_depth,
                limit: limits.max_depth,
            });
        }
        if atoms.len() > limits.max_atoms {
            return Err(LimitExceeded::Atoms {
                got: atoms.len(),
                limit: limits.max_atoms,
            });
        }
        let mut seen: HashSet<(Vec<TruthValue>, Vec<bool>)> = HashSet::new();
        let mut entries: Vec<Entry> = Vec::new();
        let mut push = |entries: &mut Vec<Entry>, entry: Entry| {
            let classical = match dedup {
                Dedup::Table => Vec::new(),
                Dedup::TableAndClassical => entry.classical.clone(),
            };
            if seen.insert((entry.table.clone(), classical)) {
                entries.push(entry);
            }
        };
        for (i, a) in atoms.iter().enumerate() {
            let (table, classical) = atom_tables(i, atoms.len());
            push(
                &mut entries,
                Entry {
                    formula: Formula::atom(a.as_str()),
                    depth: 0,
                    table,
                    classical,
                },
            );
        }
        for depth in 1..=max_depth {
            let frontier = entries.len();
            if connectives.negation {
                for i in 0..frontier {
                    let sub = &entries[i];
                    if sub.depth + 1 != depth {
                        continue;
                    }
                    let entry = Entry {
                        formula: Formula::neg(sub.formula.clone()),
                        depth,
                        table: sub.table.iter().map(|&v| logic.neg(v)).collect(),
                        classical: sub.classical.iter().map(|&b| !b).collect(),
                    };
                    push(&mut entries, entry);
                }
            }
            for &op in &connectives.binary {
                for i in 0..frontier {
                    for j in 0..frontier {
                        let (l, r) = (&entries[i], &entries[j]);
                        if l.depth.max(r.depth) + 1 != depth {
                            continue;
                        }
                        let entry = Entry {
                            formula: Formula::binary(op, l.formula.clone(), r.formula.clone()),
                            depth,
                            table: l
                                .table
                                .iter()
                                .zip(&r.table)
                                .map(|(&a, &b)| logic.apply(op, a, b))
                                .collect(),
                            classical: l
                                .classical
                                .iter()
                                .zip(&r.classical)
                                .map(|(&a, &b)| classical_apply(op, a, b))
                                .collect(),
                        };
                        push(&mut entries, entry);
                    }
                }
            }
        }
        Ok(Corpus {
            atoms: atoms.to_vec(),
            max_depth,
            logic: *logic,
            entries,
        })
    }

    /// The search corpus used by metainference audits: atoms `p`, `q`, depth 3,
    /// standard connectives, deduplicated on both tables.
    pub fn search_default(logic: &LogicSpec) -> Corpus {
        Corpus::search(logic, DEFAULT_MAX_DEPTH)
    }

    pub fn search(logic: &LogicSpec, depth: usize) -> Corpus {
        let atoms = ["p".to_string(), "q".to_string()];
        Corpus::build(
            &atoms,
            depth,
            &ConnectiveSet::standard(),
            logic,
            Dedup::TableAndClassical,
            Limits::default(),
        )
        .expect("search corpus is within limits")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|e| &e.formula)
    }

    /// Keeps the first entry for each three-valued table.
    pub fn by_table(&self) -> Corpus {
        let mut seen = HashSet::new();
        let entries = self
            .entries
            .iter()
            .filter(|e| seen.insert(e.table.clone()))
            .cloned()
            .collect();
        Corpus {
            entries,
            ..self.clone()
        }
    }

    /// Keeps one entry per designation profile: which valuations designate the
    /// entry as a premise and which as a conclusion. Pure entailment facts only
    /// depend on these profiles.
    pub fn by_designation(&self) -> Corpus {
        let mode = self.logic.mode;
        let mut seen = HashSet::new();
        let entries = self
            .entries
            .iter()
            .filter(|e| {
                let profile: Vec<(bool, bool)> = e
                    .table
                    .iter()
                    .map(|&v| (mode.premise_designated(v), mode.conclusion_designated(v)))
                    .collect();
                seen.insert(profile)
            })
            .cloned()
            .collect();
        Corpus {
            entries,
            ..self.clone()
        }
    }
}

/// All formulas up to `max_depth` over `atoms` and `connectives`, one per
/// distinct value table under `logic`, shallowest first.
pub fn corpus(
    atoms: &[String],
    max_depth: usize,
    connectives: &ConnectiveSet,
    logic: &LogicSpec,
) -> Result<Vec<Formula>, LimitExceeded> {
    let c = Corpus::build(
        atoms,
        max_depth,
        connectives,
        logic,
        Dedup::Table,
        Limits::default(),
    )?;
    Ok(c.entries.into_iter().map(|e| e.formula).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consequence::valuation_at;
    use crate::formula::parse;
    use crate::semantics::eval;

    fn names(fs: &[Formula]) -> Vec<String> {
        fs.iter().map(Formula::to_string).collect()
    }

    fn p() -> Vec<String> {
        vec!["p".to_string()]
    }

    #[test]
    fn tiny_corpora() {
        let neg = ConnectiveSet::negation_only();
        assert_eq!(
            names(&corpus(&p(), 0, &neg, &LogicSpec::DF_TT).unwrap()),
            ["p"]
        );
        assert_eq!(
            names(&corpus(&p(), 1, &neg, &LogicSpec::DF_TT).unwrap()),
            ["p", "~p"]
        );
        assert_eq!(
            names(&corpus(&p(), 2, &neg, &LogicSpec::DF_TT).unwrap()),
            ["p", "~p"]
        );
    }

    #[test]
    fn limits() {
        let std = ConnectiveSet::standard();
        assert_eq!(
            corpus(&p(), 4, &std, &LogicSpec::DF_TT),
            Err(LimitExceeded::Depth { got: 4, limit: 3 })
        );
        let four: Vec<String> = ["p", "q", "r", "s"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            corpus(&four, 1, &std, &LogicSpec::DF_TT),
            Err(LimitExceeded::Atoms { got: 4, limit: 3 })
        );
    }

    #[test]
    fn tables_agree_with_evaluator() {
        for logic in LogicSpec::PRESETS {
            let c = Corpus::search(&logic, 2);
            for e in &c.entries {
                for (w, &v) in e.table.iter().enumerate() {
                    assert_eq!(
                        eval(&e.formula, &valuation_at(&c.atoms, w), &logic).unwrap(),
                        v,
                        "{}",
                        e.formula
                    );
                }
                assert_eq!(e.depth, e.formula.complexity());
            }
        }
    }

    #[test]
    fn classical_tables_read_conditionals_materially() {
        let c = Corpus::search(&LogicSpec::DF_TT, 1);
        let e = c
            .entries
            .iter()
            .find(|e| e.formula == parse("p -> q").unwrap())
            .unwrap();
        assert_eq!(e.classical, vec![true, true, false, true]);
    }

    #[test]
    fn tables_are_distinct() {
        let c = Corpus::build(
            &["p".into(), "q".into()],
            2,
            &ConnectiveSet::standard(),
            &LogicSpec::CC_TT,
            Dedup::Table,
            Limits::default(),
        )
        .unwrap();
        let tables: HashSet<_> = c.entries.iter().map(|e| e.table.clone()).collect();
        assert_eq!(tables.len(), c.len());
    }

    #[test]
    fn designation_reduction_keeps_profiles() {
        let c = Corpus::search(&LogicSpec::DF_TT, 2);
        let r = c.by_designation();
        assert!(r.len() < c.len());
        assert!(r.len() <= 1 << 9);
    }
}
