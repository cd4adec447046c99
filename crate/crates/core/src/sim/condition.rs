use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which assists are switched on for a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub typed_only: bool,
    pub writing: bool,
    pub add_to_dictionary: bool,
    pub adaptive_menus: bool,
    pub predictive_fillin: bool,
}

impl Condition {
    fn preset(name: &str, d: bool, am: bool, pf: bool) -> Self {
        Condition {
            name: name.to_owned(),
            typed_only: false,
            writing: true,
            add_to_dictionary: d,
            adaptive_menus: am,
            predictive_fillin: pf,
        }
    }

    /// Looks up a built-in condition by its exact name.
    pub fn named(name: &str) -> Result<Self> {
        condition_presets()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCondition(name.to_owned()))
    }
}

/// Typed, Null, D, AM, PF and All, in that order.
pub fn condition_presets() -> Vec<Condition> {
    vec![
        Condition {
            name: "Typed".into(),
            typed_only: true,
            writing: false,
            add_to_dictionary: false,
            adaptive_menus: false,
            predictive_fillin: false,
        },
        Condition::preset("Null", false, false, false),
        Condition::preset("D", true, false, false),
        Condition::preset("AM", false, true, false),
        Condition::preset("PF", false, false, true),
        Condition::preset("All", true, true, true),
    ]
}

/// Parses a comma-separated list of condition names. The lowercase keyword
/// `all` stands for every preset; `All` is the combined condition.
pub fn parse_conditions(spec: &str) -> Result<Vec<Condition>> {
    if spec.trim() == "all" {
        return Ok(condition_presets());
    }
    spec.split(',').map(|s| Condition::named(s.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_the_condition_matrix() {
        let p = condition_presets();
        let names: Vec<&str> = p.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Typed", "Null", "D", "AM", "PF", "All"]);
        let all = Condition::named("All").unwrap();
        assert!(all.writing && all.add_to_dictionary && all.adaptive_menus && all.predictive_fillin);
        let typed = Condition::named("Typed").unwrap();
        assert!(typed.typed_only && !typed.writing && !typed.add_to_dictionary);
        assert!(!typed.adaptive_menus && !typed.predictive_fillin);
        let pf = Condition::named("PF").unwrap();
        assert!(pf.writing && pf.predictive_fillin && !pf.adaptive_menus && !pf.add_to_dictionary);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_conditions("all").unwrap().len(), 6);
        assert_eq!(parse_conditions("All").unwrap(), vec![Condition::named("All").unwrap()]);
        assert_eq!(parse_conditions("D, AM").unwrap().len(), 2);
        assert!(matches!(parse_conditions("D,Bogus"), Err(Error::UnknownCondition(_))));
    }
}
