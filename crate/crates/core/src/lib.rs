//! Three-valued indicative conditionals: formulas, truth tables, consequence
//! relations and audits of structural principles.

pub mod audit;
pub mod consequence;
pub mod formula;
pub mod report;
pub mod semantics;
