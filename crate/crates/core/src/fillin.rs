//! Predictive fillin: copy dependent values from the latest matching record.
//!
//! When the user commits a value to a trigger field (Company, City, State in
//! the default rule set), the most recent stored record with the same value
//! is used as a case. Each rule for that trigger copies the case's target
//! value, transformed, into the draft, unless the user already entered that
//! target themselves.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::fields::*;
use crate::record::{split_email, split_phone, FieldId, FieldValue, Provenance, Record};
use crate::store::RecordStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Verbatim,
    /// Drop the user id, keep `@domain`.
    EmailDomain,
    /// Drop the last word (the extension).
    PhoneAreaPrefix,
    /// Keep only the first word (the area code).
    PhoneArea,
}

impl Transform {
    pub fn apply(self, value: &str) -> String {
        match self {
            Transform::Verbatim => value.to_owned(),
            Transform::EmailDomain => split_email(value).domain_part,
            Transform::PhoneAreaPrefix => split_phone(value).map(|p| p.copyable_prefix).unwrap_or_default(),
            Transform::PhoneArea => value.split_whitespace().next().unwrap_or("").to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillinRule {
    pub trigger: FieldId,
    pub target: FieldId,
    pub transform: Transform,
}

impl FillinRule {
    pub fn new(trigger: &str, target: &str, transform: Transform) -> Self {
        FillinRule { trigger: FieldId::new(trigger), target: FieldId::new(target), transform }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRuleSet")]
pub struct RuleSet {
    rules: Vec<FillinRule>,
}

#[derive(Deserialize)]
struct RawRuleSet {
    rules: Vec<FillinRule>,
}

impl TryFrom<RawRuleSet> for RuleSet {
    type Error = Error;

    fn try_from(raw: RawRuleSet) -> Result<Self> {
        RuleSet::new(raw.rules)
    }
}

impl RuleSet {
    pub fn new(rules: Vec<FillinRule>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &rules {
            if r.trigger == r.target {
                return Err(Error::InvalidRules(format!("rule `{}` targets itself", r.trigger)));
            }
            if !seen.insert((r.trigger.clone(), r.target.clone())) {
                return Err(Error::InvalidRules(format!("duplicate rule {} -> {}", r.trigger, r.target)));
            }
        }
        Ok(RuleSet { rules })
    }

    pub fn rules(&self) -> &[FillinRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules_for<'a>(&'a self, trigger: &'a str) -> impl Iterator<Item = &'a FillinRule> + 'a {
        self.rules.iter().filter(move |r| r.trigger.as_str() == trigger)
    }

    pub fn is_trigger(&self, field: &str) -> bool {
        self.rules_for(field).next().is_some()
    }

    pub fn get(&self, trigger: &str, target: &str) -> Option<&FillinRule> {
        self.rules.iter().find(|r| r.trigger.as_str() == trigger && r.target.as_str() == target)
    }

    /// Checks every rule's fields against `schema`.
    pub fn check(&self, schema: &crate::record::Schema) -> Result<()> {
        for r in &self.rules {
            schema.require(r.trigger.as_str())?;
            schema.require(r.target.as_str())?;
        }
        Ok(())
    }
}

/// The hand-built rules of the name form.
///
/// Company fills eleven fields: both address lines, City, State, Zip Code and
/// Country verbatim, E-Mail without the user id, and all four phones without
/// the extension. City fills State, Zip Code, Country and the phones' area
/// codes. State fills Country.
pub fn default_rules() -> RuleSet {
    use Transform::*;
    let mut rules = Vec::new();
    for target in [ADDRESS1, ADDRESS2, CITY, STATE, ZIP, COUNTRY] {
        rules.push(FillinRule::new(COMPANY, target, Verbatim));
    }
    rules.push(FillinRule::new(COMPANY, EMAIL, EmailDomain));
    for phone in PHONES {
        rules.push(FillinRule::new(COMPANY, phone, PhoneAreaPrefix));
    }
    for target in [STATE, ZIP, COUNTRY] {
        rules.push(FillinRule::new(CITY, target, Verbatim));
    }
    for phone in PHONES {
        rules.push(FillinRule::new(CITY, phone, PhoneArea));
    }
    rules.push(FillinRule::new(STATE, COUNTRY, Verbatim));
    RuleSet::new(rules).expect("default rules are valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillinEvent {
    pub target: FieldId,
    pub value: String,
    pub source_seq: u64,
    pub trigger: FieldId,
}

/// Runs the rules for `field` after the user committed `value` to it.
///
/// Targets holding user-entered values are left alone; empty and previously
/// filled targets receive the transformed value of the latest matching
/// stored record. The draft itself is never consulted as a case.
pub fn apply_on_commit(
    draft: &mut Record,
    field: &str,
    value: &str,
    store: &RecordStore,
    rules: &RuleSet,
) -> Result<Vec<FillinEvent>> {
    store.schema().require(field)?;
    if value.is_empty() {
        return Err(Error::EmptyValue(field.to_owned()));
    }
    if !rules.is_trigger(field) {
        return Ok(Vec::new());
    }
    let Some(case) = store.find_latest_match(field, value) else {
        return Ok(Vec::new());
    };
    let mut events = Vec::new();
    for rule in rules.rules_for(field) {
        if draft.provenance(rule.target.as_str()).is_user() {
            continue;
        }
        let copied = rule.transform.apply(case.raw(rule.target.as_str()));
        if copied.is_empty() {
            continue;
        }
        draft.set(rule.target.as_str(), FieldValue::new(copied.clone(), Provenance::Fillin));
        events.push(FillinEvent {
            target: rule.target.clone(),
            value: copied,
            source_seq: case.seq,
            trigger: FieldId::new(field),
        });
    }
    Ok(events)
}
