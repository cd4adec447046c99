//! Form schema, records and word-level value helpers.
//!
//! A [`Schema`] is an ordered list of [`FieldSpec`]s; the order is the entry
//! order. A [`Record`] maps field ids to [`FieldValue`]s, each carrying the
//! way it was entered ([`Provenance`]) and, when it went through the capture
//! flow or the simulator, one [`EntryMethod`] per whitespace word.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::defaults;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldId(String);

impl FieldId {
    pub fn new(id: impl Into<String>) -> Self {
        FieldId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for FieldId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FieldId {
    fn from(s: &str) -> Self {
        FieldId(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Text,
    Numeric,
    Phone,
    Email,
    Date,
}

impl FieldKind {
    /// Numeric, phone and date fields go through a digit recognizer.
    pub fn is_numeric(self) -> bool {
        matches!(self, FieldKind::Numeric | FieldKind::Phone | FieldKind::Date)
    }
}

fn default_capacity() -> usize {
    4
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub id: FieldId,
    pub label: String,
    pub kind: FieldKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub static_choices: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub adaptive_menu: bool,
    #[serde(default = "default_capacity")]
    pub menu_capacity: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub category_choices: Vec<String>,
}

impl FieldSpec {
    pub fn new(id: &str, label: &str, kind: FieldKind) -> Self {
        FieldSpec {
            id: FieldId::new(id),
            label: label.to_owned(),
            kind,
            static_choices: Vec::new(),
            adaptive_menu: false,
            menu_capacity: default_capacity(),
            category_choices: Vec::new(),
        }
    }

    pub fn with_adaptive_menu(mut self, capacity: usize) -> Self {
        self.adaptive_menu = true;
        self.menu_capacity = capacity;
        self
    }

    pub fn with_static_choices<S: AsRef<str>>(mut self, choices: &[S]) -> Self {
        self.static_choices = choices.iter().map(|s| s.as_ref().to_owned()).collect();
        self
    }

    pub fn with_categories<S: AsRef<str>>(mut self, choices: &[S]) -> Self {
        self.category_choices = choices.iter().map(|s| s.as_ref().to_owned()).collect();
        self
    }

    /// True when the field offers any kind of menu.
    pub fn has_menu(&self) -> bool {
        self.adaptive_menu || !self.static_choices.is_empty() || !self.category_choices.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.id.as_str().is_empty() {
            return Err(Error::InvalidSchema("empty field id".into()));
        }
        if self.adaptive_menu && self.menu_capacity == 0 {
            return Err(Error::InvalidSchema(format!("field `{}` has an adaptive menu of capacity 0", self.id)));
        }
        for (name, list) in [("static_choices", &self.static_choices), ("category_choices", &self.category_choices)] {
            let mut seen = HashSet::new();
            if let Some(dup) = list.iter().find(|c| !seen.insert(c.as_str())) {
                return Err(Error::InvalidSchema(format!("field `{}` repeats `{dup}` in {name}", self.id)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSchema")]
pub struct Schema {
    fields: Vec<FieldSpec>,
}

#[derive(Deserialize)]
struct RawSchema {
    fields: Vec<FieldSpec>,
}

impl TryFrom<RawSchema> for Schema {
    type Error = Error;

    fn try_from(raw: RawSchema) -> Result<Self> {
        Schema::new(raw.fields)
    }
}

impl Schema {
    pub fn new(fields: Vec<FieldSpec>) -> Result<Self> {
        let mut seen = HashSet::new();
        for spec in &fields {
            spec.validate()?;
            if !seen.insert(spec.id.as_str()) {
                return Err(Error::InvalidSchema(format!("duplicate field id `{}`", spec.id)));
            }
        }
        Ok(Schema { fields })
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field(&self, id: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.id.as_str() == id)
    }

    pub fn require(&self, id: &str) -> Result<&FieldSpec> {
        self.field(id).ok_or_else(|| Error::UnknownField(id.to_owned()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.field(id).is_some()
    }

    pub fn check_record(&self, record: &Record) -> Result<()> {
        match record.values.keys().find(|id| !self.contains(id.as_str())) {
            Some(id) => Err(Error::NonConforming(format!("record `{}` has unknown field `{id}`", record.id))),
            None => Ok(()),
        }
    }
}

/// How a field value arrived. Governs whether predictive fillin may replace it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Empty,
    Typed,
    Written,
    MenuChosen,
    Fillin,
}

impl Provenance {
    /// Values the user produced; fillin never overwrites these.
    pub fn is_user(self) -> bool {
        matches!(self, Provenance::Typed | Provenance::Written | Provenance::MenuChosen)
    }
}

/// How one word of a value was entered (one column of the scoring sheet).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryMethod {
    Recognized,
    RecognitionMenu1,
    LetterByLetter,
    RecognitionMenu2,
    Typed,
    AdaptiveMenu,
    Fillin,
}

impl EntryMethod {
    pub const ALL: [EntryMethod; 7] = [
        EntryMethod::Recognized,
        EntryMethod::RecognitionMenu1,
        EntryMethod::LetterByLetter,
        EntryMethod::RecognitionMenu2,
        EntryMethod::Typed,
        EntryMethod::AdaptiveMenu,
        EntryMethod::Fillin,
    ];

    /// One of the four recognition outcomes of handwriting.
    pub fn is_recognition(self) -> bool {
        matches!(
            self,
            EntryMethod::Recognized
                | EntryMethod::RecognitionMenu1
                | EntryMethod::LetterByLetter
                | EntryMethod::RecognitionMenu2
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldValue {
    pub raw: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub word_methods: Vec<EntryMethod>,
}

impl FieldValue {
    pub fn empty() -> Self {
        FieldValue { raw: String::new(), provenance: Provenance::Empty, word_methods: Vec::new() }
    }

    /// A value with the given provenance. An empty `raw` always yields
    /// [`Provenance::Empty`], and a non-empty one never does (it becomes typed).
    pub fn new(raw: impl Into<String>, provenance: Provenance) -> Self {
        let raw = raw.into();
        let provenance = match (raw.is_empty(), provenance) {
            (true, _) => Provenance::Empty,
            (false, Provenance::Empty) => Provenance::Typed,
            (false, p) => p,
        };
        FieldValue { raw, provenance, word_methods: Vec::new() }
    }

    pub fn with_methods(mut self, methods: Vec<EntryMethod>) -> Self {
        self.word_methods = methods;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

impl Default for FieldValue {
    fn default() -> Self {
        FieldValue::empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    /// Insertion sequence number; 0 until the record is finalized into a store.
    pub seq: u64,
    pub values: BTreeMap<FieldId, FieldValue>,
}

impl Record {
    pub fn new(id: impl Into<String>) -> Self {
        Record { id: id.into(), seq: 0, values: BTreeMap::new() }
    }

    /// Builds a record from `(field, raw)` pairs with typed provenance.
    pub fn from_pairs<I, K, V>(id: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<String>,
    {
        let mut record = Record::new(id);
        for (k, v) in pairs {
            record.set(k.as_ref(), FieldValue::new(v, Provenance::Typed));
        }
        record
    }

    /// Raw value of `field`, or `""` when absent.
    pub fn raw(&self, field: &str) -> &str {
        self.values.get(field).map(|v| v.raw.as_str()).unwrap_or("")
    }

    pub fn value(&self, field: &str) -> Option<&FieldValue> {
        self.values.get(field)
    }

    pub fn provenance(&self, field: &str) -> Provenance {
        self.values.get(field).map(|v| v.provenance).unwrap_or(Provenance::Empty)
    }

    pub fn set(&mut self, field: &str, value: FieldValue) {
        self.values.insert(FieldId::new(field), value);
    }

    pub fn is_blank(&self) -> bool {
        self.values.values().all(FieldValue::is_empty)
    }
}

/// Splits a value into words: maximal runs of non-whitespace.
pub fn tokenize(value: &str) -> Vec<&str> {
    value.split_whitespace().collect()
}

pub fn word_count(value: &str) -> usize {
    value.split_whitespace().count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhoneParts {
    pub copyable_prefix: String,
    pub last: String,
}

/// Separates the last word of a phone number (the extension) from the rest.
pub fn split_phone(value: &str) -> Result<PhoneParts> {
    let words = tokenize(value);
    let (last, prefix) = words.split_last().ok_or(Error::EmptyPhone)?;
    Ok(PhoneParts { copyable_prefix: prefix.join(" "), last: (*last).to_owned() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmailParts {
    pub user: String,
    /// Everything from the first `@` on, including the `@`.
    pub domain_part: String,
}

pub fn split_email(value: &str) -> EmailParts {
    match value.find('@') {
        Some(at) => EmailParts { user: value[..at].to_owned(), domain_part: value[at..].to_owned() },
        None => EmailParts { user: value.to_owned(), domain_part: String::new() },
    }
}

pub const HONORIFICS: [&str; 4] = ["Ms.", "Mrs.", "Mr.", "Dr."];

pub const PHONE_CATEGORIES: [&str; 8] = ["Phone", "Home", "Work", "Fax", "Car", "Beeper", "Mobile", "Other"];

/// Well-known field ids of [`default_schema`].
pub mod fields {
    pub const HONORIFIC: &str = "honorific";
    pub const FIRST_NAME: &str = "first_name";
    pub const LAST_NAME: &str = "last_name";
    pub const TITLE: &str = "title";
    pub const COMPANY: &str = "company";
    pub const ADDRESS1: &str = "address1";
    pub const ADDRESS2: &str = "address2";
    pub const CITY: &str = "city";
    pub const STATE: &str = "state";
    pub const ZIP: &str = "zip";
    pub const COUNTRY: &str = "country";
    pub const EMAIL: &str = "email";
    pub const PHONE1: &str = "phone1";
    pub const PHONE2: &str = "phone2";
    pub const PHONE3: &str = "phone3";
    pub const PHONE4: &str = "phone4";
    pub const BIRTHDATE: &str = "birthdate";

    pub const PHONES: [&str; 4] = [PHONE1, PHONE2, PHONE3, PHONE4];
}

/// The seventeen-field name form, using the configured country list.
pub fn default_schema() -> Schema {
    let d = defaults();
    default_schema_with(&d.schema.countries, d.schema.menu_capacity)
}

pub fn default_schema_with<S: AsRef<str>>(countries: &[S], capacity: usize) -> Schema {
    use fields::*;
    use FieldKind::*;

    let mut specs = vec![
        FieldSpec::new(HONORIFIC, "Honorific", Text).with_static_choices(&HONORIFICS).with_adaptive_menu(capacity),
        FieldSpec::new(FIRST_NAME, "First Name", Text),
        FieldSpec::new(LAST_NAME, "Last Name", Text),
        FieldSpec::new(TITLE, "Title", Text).with_adaptive_menu(capacity),
        FieldSpec::new(COMPANY, "Company", Text).with_adaptive_menu(capacity),
        FieldSpec::new(ADDRESS1, "Address", Text).with_adaptive_menu(capacity),
        FieldSpec::new(ADDRESS2, "Address 2", Text),
        FieldSpec::new(CITY, "City", Text).with_adaptive_menu(capacity),
        FieldSpec::new(STATE, "State", Text).with_adaptive_menu(capacity),
        FieldSpec::new(ZIP, "Zip Code", Numeric).with_adaptive_menu(capacity),
        FieldSpec::new(COUNTRY, "Country", Text).with_static_choices(countries).with_adaptive_menu(capacity),
        FieldSpec::new(EMAIL, "E-Mail", Email).with_adaptive_menu(capacity),
    ];
    for (i, id) in PHONES.iter().enumerate() {
        specs.push(FieldSpec::new(id, &format!("Phone {}", i + 1), Phone).with_categories(&PHONE_CATEGORIES));
    }
    specs.push(FieldSpec::new(BIRTHDATE, "Birthdate", Date));
    Schema::new(specs).expect("default schema is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("RAIMA Corp"), vec!["RAIMA", "Corp"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("3245 146th Place SE").len(), 4);
        assert_eq!(tokenize("  a\t b\n"), vec!["a", "b"]);
    }

    #[test]
    fn split_phone_examples() {
        let p = split_phone("509 555 0000").unwrap();
        assert_eq!((p.copyable_prefix.as_str(), p.last.as_str()), ("509 555", "0000"));
        let p = split_phone("5551234").unwrap();
        assert_eq!((p.copyable_prefix.as_str(), p.last.as_str()), ("", "5551234"));
        let p = split_phone("206 555 8888").unwrap();
        assert_eq!(p.copyable_prefix, "206 555");
        let p = split_phone("206 5558888").unwrap();
        assert_eq!(p.copyable_prefix, "206");
        assert!(matches!(split_phone(""), Err(Error::EmptyPhone)));
        assert!(matches!(split_phone("   "), Err(Error::EmptyPhone)));
    }

    #[test]
    fn split_email_examples() {
        let e = split_email("jdoe@acme.example");
        assert_eq!((e.user.as_str(), e.domain_part.as_str()), ("jdoe", "@acme.example"));
        let e = split_email("noatsign");
        assert_eq!((e.user.as_str(), e.domain_part.as_str()), ("noatsign", ""));
        let e = split_email("a@b@c");
        assert_eq!((e.user.as_str(), e.domain_part.as_str()), ("a", "@b@c"));
    }

    #[test]
    fn default_schema_layout() {
        let s = default_schema();
        assert_eq!(s.len(), 17);
        assert_eq!(s.fields().iter().filter(|f| f.adaptive_menu).count(), 9);
        assert_eq!(s.field("honorific").unwrap().static_choices, HONORIFICS);
        assert_eq!(s.field("country").unwrap().static_choices.len(), 13);
        assert_eq!(s.field("phone1").unwrap().category_choices.len(), 8);
        assert!(!s.field("address2").unwrap().has_menu());
        assert!(!s.field("first_name").unwrap().has_menu());
        let labels: Vec<_> = s.fields().iter().map(|f| f.label.as_str()).collect();
        assert_eq!(labels[..4], ["Honorific", "First Name", "Last Name", "Title"]);
        assert_eq!(labels[16], "Birthdate");
    }

    #[test]
    fn schema_rejects_duplicates_and_zero_capacity() {
        let a = FieldSpec::new("a", "A", FieldKind::Text);
        assert!(Schema::new(vec![a.clone(), a.clone()]).is_err());
        assert!(Schema::new(vec![a.clone().with_adaptive_menu(0)]).is_err());
        assert!(Schema::new(vec![a.with_static_choices(&["x", "x"])]).is_err());
    }

    #[test]
    fn schema_json_preserves_order() {
        let s = default_schema();
        let json = serde_json::to_string(&s).unwrap();
        let back: Schema = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"fields":[{"id":"a","label":"A","kind":"text"},{"id":"a","label":"B","kind":"text"}]}"#;
        assert!(serde_json::from_str::<Schema>(bad).is_err());
    }

    #[test]
    fn field_value_provenance_tracks_emptiness() {
        assert_eq!(FieldValue::new("", Provenance::Typed).provenance, Provenance::Empty);
        assert_eq!(FieldValue::new("x", Provenance::Empty).provenance, Provenance::Typed);
        assert_eq!(FieldValue::new("x", Provenance::Fillin).provenance, Provenance::Fillin);
    }

    proptest! {
        #[test]
        fn tokenize_is_idempotent(s in "[ a-zA-Z0-9\t\n@.]{0,40}") {
            let once = tokenize(&s);
            let joined = once.join(" ");
            prop_assert_eq!(tokenize(&joined), once);
        }

        #[test]
        fn split_phone_rejoins(s in "[ 0-9a-z]{0,30}") {
            prop_assume!(!s.trim().is_empty());
            let p = split_phone(&s).unwrap();
            let rejoined = format!("{} {}", p.copyable_prefix, p.last);
            prop_assert_eq!(tokenize(&rejoined), tokenize(&s));
        }
    }
}
