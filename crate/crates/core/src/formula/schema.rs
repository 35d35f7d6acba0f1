use std::collections::BTreeMap;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("metavariable `{0}` has no binding")]
    MissingBinding(String),
    #[error("metavariable `{0}` does not occur in the template")]
    UnusedMetavariable(String),
}

/// A formula template whose designated atoms stand for arbitrary formulas,
/// e.g. `A -> (B -> C)` with metavariables `A`, `B`, `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    template: Formula,
    metavariables: Vec<String>,
}

impl Schema {
    pub fn new(template: Formula, metavariables: Vec<String>) -> Result<Schema, SchemaError> {
        let atoms = template.atoms();
        if let Some(missing) = metavariables.iter().find(|m| !atoms.contains(m)) {
            return Err(SchemaError::UnusedMetavariable(missing.clone()));
        }
        Ok(Schema {
            template,
            metavariables,
        })
    }

    /// Treats every atom of the template as a metavariable.
    pub fn from_template(template: Formula) -> Schema {
        let metavariables = template.atoms();
        Schema {
            template,
            metavariables,
        }
    }

    pub fn template(&self) -> &Formula {
        &self.template
    }

    pub fn metavariables(&self) -> &[String] {
        &self.metavariables
    }

    /// Simultaneously replaces each metavariable by its bound formula.
    pub fn instantiate(
        &self,
        bindings: &BTreeMap<String, Formula>,
    ) -> Result<Formula, SchemaError> {
        if let Some(unbound) = self
            .metavariables
            .iter()
            .find(|m| !bindings.contains_key(*m))
        {
            return Err(SchemaError::MissingBinding(unbound.clone()));
        }
        let metas = &self.metavariables;
        Ok(self.template.substitute(&|name| {
            if metas.iter().any(|m| m == name) {
                bindings.get(name).cloned()
            } else {
                None
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn bind(pairs: &[(&str, &str)]) -> BTreeMap<String, Formula> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), parse(v).unwrap()))
            .collect()
    }

    #[test]
    fn import_export_left_side() {
        let s = Schema::from_template(parse("A -> (B -> C)").unwrap());
        let f = s
            .instantiate(&bind(&[("A", "p"), ("B", "q"), ("C", "r")]))
            .unwrap();
        assert_eq!(f.to_string(), "p -> q -> r");
        assert_eq!(f, parse("p -> (q -> r)").unwrap());
    }

    #[test]
    fn compound_binding() {
        let s = Schema::from_template(parse("A -> A").unwrap());
        let f = s.instantiate(&bind(&[("A", "p & q")])).unwrap();
        assert_eq!(f, parse("(p & q) -> (p & q)").unwrap());
    }

    #[test]
    fn substitution_is_simultaneous() {
        let s = Schema::from_template(parse("A & B").unwrap());
        let f = s.instantiate(&bind(&[("A", "B"), ("B", "A")])).unwrap();
        assert_eq!(f, parse("B & A").unwrap());
    }

    #[test]
    fn missing_binding() {
        let s = Schema::from_template(parse("A -> B").unwrap());
        assert_eq!(
            s.instantiate(&bind(&[("A", "p")])),
            Err(SchemaError::MissingBinding("B".into()))
        );
    }

    #[test]
    fn metavariables_must_occur() {
        let err = Schema::new(parse("A -> B").unwrap(), vec!["A".into(), "C".into()]).unwrap_err();
        assert_eq!(err, SchemaError::UnusedMetavariable("C".into()));
    }

    #[test]
    fn non_metavariable_atoms_are_kept() {
        let s = Schema::new(parse("A -> q").unwrap(), vec!["A".into()]).unwrap();
        let f = s.instantiate(&bind(&[("A", "p"), ("q", "r")])).unwrap();
        assert_eq!(f, parse("p -> q").unwrap());
    }
}
