//! Case base of finalized records and the recognition dictionary.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{FieldValue, Provenance, Record, Schema};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    #[default]
    Exact,
    CaseInsensitive,
}

impl MatchMode {
    fn matches(self, stored: &str, wanted: &str) -> bool {
        match self {
            MatchMode::Exact => stored == wanted,
            MatchMode::CaseInsensitive => stored.to_lowercase() == wanted.to_lowercase(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown corpus format `{other}`"))),
        }
    }
}

/// One line of the JSON-lines record format.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonlLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    fields: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    prov: BTreeMap<String, Provenance>,
}

/// Finalized records in insertion order.
///
/// Mutations go through `&mut self`; readers share `&RecordStore` or clone a
/// snapshot.
#[derive(Debug, Clone)]
pub struct RecordStore {
    schema: Schema,
    records: Vec<Record>,
    ids: HashSet<String>,
    next_seq: u64,
    match_mode: MatchMode,
}

impl RecordStore {
    pub fn new(schema: Schema) -> Self {
        RecordStore { schema, records: Vec::new(), ids: HashSet::new(), next_seq: 1, match_mode: MatchMode::Exact }
    }

    pub fn with_match_mode(mut self, mode: MatchMode) -> Self {
        self.match_mode = mode;
        self
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    /// Appends `record`, assigning the next sequence number.
    pub fn finalize_record(&mut self, mut record: Record) -> Result<u64> {
        self.schema.check_record(&record)?;
        if self.ids.contains(&record.id) {
            return Err(Error::DuplicateRecordId(record.id));
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        record.seq = seq;
        self.ids.insert(record.id.clone());
        self.records.push(record);
        Ok(seq)
    }

    /// The most recent record whose `field` equals `value`.
    pub fn find_latest_match(&self, field: &str, value: &str) -> Option<&Record> {
        if value.is_empty() {
            return None;
        }
        self.records.iter().rev().find(|r| {
            let raw = r.raw(field);
            !raw.is_empty() && self.match_mode.matches(raw, value)
        })
    }

    /// Loads records from `source`, appending them in file order. Nothing is
    /// appended if any line fails.
    pub fn import_corpus<R: Read>(&mut self, source: R, format: CorpusFormat) -> Result<usize> {
        let parsed = match format {
            CorpusFormat::Jsonl => self.parse_jsonl(source)?,
            CorpusFormat::Csv => self.parse_csv(source)?,
        };
        let mut seen = HashSet::new();
        for (line, record) in &parsed {
            if self.ids.contains(&record.id) || !seen.insert(record.id.as_str()) {
                return Err(Error::Parse { line: *line, message: format!("duplicate record id `{}`", record.id) });
            }
        }
        let count = parsed.len();
        for (_, record) in parsed {
            self.finalize_record(record)?;
        }
        Ok(count)
    }

    fn default_id(&self, offset: usize) -> String {
        format!("r{}", self.next_seq + offset as u64)
    }

    fn parse_jsonl<R: Read>(&self, source: R) -> Result<Vec<(usize, Record)>> {
        let mut out = Vec::new();
        for (i, line) in BufReader::new(source).lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: JsonlLine = serde_json::from_str(&line)
                .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            let id = parsed.id.clone().unwrap_or_else(|| self.default_id(out.len()));
            let mut record = Record::new(id);
            for (field, raw) in parsed.fields {
                self.known_field(&field, line_no)?;
                let prov = parsed.prov.get(&field).copied().unwrap_or(Provenance::Typed);
                record.set(&field, FieldValue::new(raw, prov));
            }
            if let Some(field) = parsed.prov.keys().find(|f| !record.values.contains_key(f.as_str())) {
                self.known_field(field, line_no)?;
            }
            out.push((line_no, record));
        }
        Ok(out)
    }

    fn parse_csv<R: Read>(&self, source: R) -> Result<Vec<(usize, Record)>> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(source);
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
            .clone();
        for h in headers.iter() {
            self.known_field(h, 1)?;
        }
        let mut out = Vec::new();
        for row in reader.records() {
            let row = row.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                Error::Parse { line, message: e.to_string() }
            })?;
            let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
            let mut record = Record::new(self.default_id(out.len()));
            for (field, raw) in headers.iter().zip(row.iter()) {
                record.set(field, FieldValue::new(raw, Provenance::Typed));
            }
            out.push((line, record));
        }
        Ok(out)
    }

    fn known_field(&self, field: &str, line: usize) -> Result<()> {
        if self.schema.contains(field) {
            Ok(())
        } else {
            Err(Error::Parse { line, message: format!("unknown field `{field}`") })
        }
    }

    /// Writes every record as one JSON line.
    pub fn export_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for record in &self.records {
            writeln!(out, "{}", record_to_jsonl(record)?)?;
        }
        Ok(())
    }
}

/// Serializes one record in the JSON-lines format (without trailing newline).
pub fn record_to_jsonl(record: &Record) -> Result<String> {
    let mut line = JsonlLine { id: Some(record.id.clone()), fields: BTreeMap::new(), prov: BTreeMap::new() };
    for (field, value) in &record.values {
        line.fields.insert(field.to_string(), value.raw.clone());
        line.prov.insert(field.to_string(), value.provenance);
    }
    Ok(serde_json::to_string(&line)?)
}

/// Words the recognizer can produce. Membership is exact and case-sensitive.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Dictionary {
    words: BTreeSet<String>,
    folded: BTreeSet<String>,
}

impl From<Vec<String>> for Dictionary {
    fn from(words: Vec<String>) -> Self {
        words.iter().map(String::as_str).collect()
    }
}

impl From<Dictionary> for Vec<String> {
    fn from(d: Dictionary) -> Self {
        d.words.into_iter().collect()
    }
}

const BUILTIN_WORDS: &str = include_str!("../data/base_dictionary.txt");

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// The built-in word list standing in for the device dictionary.
    pub fn builtin() -> Self {
        BUILTIN_WORDS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(str::split_whitespace)
            .collect()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// True if some entry equals `word` ignoring case.
    pub fn contains_folded(&self, word: &str) -> bool {
        self.folded.contains(&word.to_lowercase())
    }

    /// Adds `word`; returns whether it was new.
    pub fn add(&mut self, word: &str) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        self.folded.insert(word.to_lowercase());
        Ok(self.words.insert(word.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl<'a> FromIterator<&'a str> for Dictionary {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut d = Dictionary::new();
        for w in iter {
            if !w.is_empty() {
                d.add(w).expect("non-empty");
            }
        }
        d
    }
}
