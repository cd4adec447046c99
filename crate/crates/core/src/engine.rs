//! Live capture: drafts, field commits with fillin, and finalization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fillin::{apply_on_commit, FillinEvent, RuleSet};
use crate::menus::{MenuState, SplitMenu};
use crate::record::{FieldValue, Provenance, Record, Schema};
use crate::store::RecordStore;

/// How the user produced a committed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommitSource {
    Typed,
    Written,
    Menu,
}

impl CommitSource {
    pub fn provenance(self) -> Provenance {
        match self {
            CommitSource::Typed => Provenance::Typed,
            CommitSource::Written => Provenance::Written,
            CommitSource::Menu => Provenance::MenuChosen,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitOutcome {
    pub fillin_events: Vec<FillinEvent>,
    /// The committed field's menu; empty for fields without one.
    pub menu: SplitMenu,
}

#[derive(Debug, Clone)]
struct Draft {
    record: Record,
    finalized: Option<u64>,
}

/// Store, menus, rules and open drafts. Callers serialize mutations.
#[derive(Debug, Clone)]
pub struct CaptureEngine {
    store: RecordStore,
    menus: MenuState,
    rules: RuleSet,
    drafts: BTreeMap<String, Draft>,
    next_draft: u64,
}

impl CaptureEngine {
    pub fn new(store: RecordStore, rules: RuleSet) -> Result<Self> {
        rules.check(store.schema())?;
        Ok(CaptureEngine {
            menus: MenuState::for_schema(store.schema()),
            store,
            rules,
            drafts: BTreeMap::new(),
            next_draft: 1,
        })
    }

    pub fn schema(&self) -> &Schema {
        self.store.schema()
    }

    pub fn store(&self) -> &RecordStore {
        &self.store
    }

    pub fn menus(&self) -> &MenuState {
        &self.menus
    }

    pub fn menus_mut(&mut self) -> &mut MenuState {
        &mut self.menus
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Opens an empty draft with a fresh id (`d1`, `d2`, ...), skipping ids
    /// already used by stored records.
    pub fn create_draft(&mut self) -> String {
        loop {
            let id = format!("d{}", self.next_draft);
            self.next_draft += 1;
            if !self.drafts.contains_key(&id) && !self.store.contains_id(&id) {
                self.drafts.insert(id.clone(), Draft { record: Record::new(id.clone()), finalized: None });
                return id;
            }
        }
    }

    pub fn draft(&self, id: &str) -> Result<&Record> {
        self.drafts.get(id).map(|d| &d.record).ok_or_else(|| Error::UnknownDraft(id.to_owned()))
    }

    fn open_draft(&mut self, id: &str) -> Result<&mut Draft> {
        let draft = self.drafts.get_mut(id).ok_or_else(|| Error::UnknownDraft(id.to_owned()))?;
        if draft.finalized.is_some() {
            return Err(Error::DraftFinalized(id.to_owned()));
        }
        Ok(draft)
    }

    /// Sets `field` to `value` with user provenance and runs fillin.
    ///
    /// An empty value clears the field when typed and is an error otherwise.
    pub fn commit_field(&mut self, draft_id: &str, field: &str, value: &str, source: CommitSource) -> Result<CommitOutcome> {
        self.store.schema().require(field)?;
        let draft = self.drafts.get_mut(draft_id).ok_or_else(|| Error::UnknownDraft(draft_id.to_owned()))?;
        if draft.finalized.is_some() {
            return Err(Error::DraftFinalized(draft_id.to_owned()));
        }
        let mut fillin_events = Vec::new();
        if value.is_empty() {
            if source != CommitSource::Typed {
                return Err(Error::EmptyValue(field.to_owned()));
            }
            draft.record.set(field, FieldValue::empty());
        } else {
            draft.record.set(field, FieldValue::new(value, source.provenance()));
            fillin_events = apply_on_commit(&mut draft.record, field, value, &self.store, &self.rules)?;
        }
        let menu = self.menus.menu_for(field).unwrap_or_default();
        Ok(CommitOutcome { fillin_events, menu })
    }

    /// Stores the draft and feeds its adaptive-menu values to the menus.
    pub fn finalize(&mut self, draft_id: &str) -> Result<u64> {
        let mut record = self.open_draft(draft_id)?.record.clone();
        record.values.retain(|_, v| !v.is_empty());
        let seq = self.store.finalize_record(record.clone())?;
        for (field, v) in &record.values {
            if self.menus.has_adaptive_menu(field.as_str()) {
                self.menus.record_use(field.as_str(), &v.raw)?;
            }
        }
        self.open_draft(draft_id)?.finalized = Some(seq);
        Ok(seq)
    }

    pub fn menu_for(&self, field: &str) -> Result<SplitMenu> {
        self.store.schema().require(field)?;
        self.menus.menu_for(field)
    }

    /// Stored records in insertion order, paged.
    pub fn records(&self, offset: usize, limit: usize) -> &[Record] {
        let all = self.store.records();
        let start = offset.min(all.len());
        let end = start.saturating_add(limit).min(all.len());
        &all[start..end]
    }
}
