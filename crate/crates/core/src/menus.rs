//! Most-recently-used queues and split menus.
//!
//! Each field with an adaptive menu owns an [`MruQueue`] of its last few
//! distinct values. A [`SplitMenu`] shows those recent values first, followed
//! by the field's fixed choices. Phone-type category menus share the same
//! display shape but only label a field and never learn.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{FieldId, Schema};

/// Maximum number of entries a menu can display.
pub const MENU_LIMIT: usize = 23;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MruQueue {
    field: FieldId,
    capacity: usize,
    items: VecDeque<String>,
}

impl MruQueue {
    pub fn new(field: FieldId, capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidArgument(format!("menu capacity for `{field}` must be positive")));
        }
        Ok(MruQueue { field, capacity, items: VecDeque::with_capacity(capacity + 1) })
    }

    pub fn field(&self) -> &FieldId {
        &self.field
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn items(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Moves `value` to the front, evicting the oldest item past capacity.
    /// Empty values are ignored. O(capacity).
    pub fn record_use(&mut self, value: &str) {
        if value.is_empty() {
            return;
        }
        if let Some(pos) = self.items.iter().position(|v| v == value) {
            if pos == 0 {
                return;
            }
            self.items.remove(pos);
        }
        self.items.push_front(value.to_owned());
        self.items.truncate(self.capacity);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitMenu {
    pub recent: Vec<String>,
    pub fixed: Vec<String>,
}

impl SplitMenu {
    /// Recent items then fixed ones, dropping fixed entries past [`MENU_LIMIT`].
    pub fn compose(recent: Vec<String>, fixed: &[String]) -> Self {
        let room = MENU_LIMIT.saturating_sub(recent.len());
        SplitMenu { fixed: fixed.iter().take(room).cloned().collect(), recent }
    }

    pub fn len(&self) -> usize {
        self.recent.len() + self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> Option<&str> {
        self.entries().nth(index)
    }

    /// Display position of the first entry equal to `value`.
    pub fn position(&self, value: &str) -> Option<usize> {
        self.entries().position(|e| e == value)
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.recent.iter().chain(self.fixed.iter()).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Slot {
    /// Recent values (if adaptive) prepended to static choices.
    Value { recent: Option<MruQueue>, fixed: Vec<String> },
    /// Phone-type labels; choosing one never changes state.
    Category { choices: Vec<String> },
}

/// Menu state for every field of a schema that has a menu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuState {
    slots: BTreeMap<FieldId, Slot>,
}

impl MenuState {
    pub fn for_schema(schema: &Schema) -> Self {
        let mut slots = BTreeMap::new();
        for spec in schema.fields() {
            let slot = if spec.adaptive_menu || !spec.static_choices.is_empty() {
                let recent = spec
                    .adaptive_menu
                    .then(|| MruQueue::new(spec.id.clone(), spec.menu_capacity).expect("schema validated capacity"));
                Slot::Value { recent, fixed: spec.static_choices.clone() }
            } else if !spec.category_choices.is_empty() {
                Slot::Category { choices: spec.category_choices.clone() }
            } else {
                continue;
            };
            slots.insert(spec.id.clone(), slot);
        }
        MenuState { slots }
    }

    fn queue_mut(&mut self, field: &str) -> Result<&mut MruQueue> {
        match self.slots.get_mut(field) {
            Some(Slot::Value { recent: Some(q), .. }) => Ok(q),
            _ => Err(Error::NoMenu(field.to_owned())),
        }
    }

    pub fn queue(&self, field: &str) -> Option<&MruQueue> {
        match self.slots.get(field) {
            Some(Slot::Value { recent: Some(q), .. }) => Some(q),
            _ => None,
        }
    }

    pub fn has_adaptive_menu(&self, field: &str) -> bool {
        self.queue(field).is_some()
    }

    pub fn is_category(&self, field: &str) -> bool {
        matches!(self.slots.get(field), Some(Slot::Category { .. }))
    }

    /// Records that `value` was entered into `field`.
    pub fn record_use(&mut self, field: &str, value: &str) -> Result<()> {
        self.queue_mut(field)?.record_use(value);
        Ok(())
    }

    pub fn menu_for(&self, field: &str) -> Result<SplitMenu> {
        match self.slots.get(field) {
            Some(Slot::Value { recent, fixed }) => {
                let recent = recent.as_ref().map(|q| q.items().map(str::to_owned).collect()).unwrap_or_default();
                Ok(SplitMenu::compose(recent, fixed))
            }
            Some(Slot::Category { choices }) => Ok(SplitMenu::compose(Vec::new(), choices)),
            None => Err(Error::NoMenu(field.to_owned())),
        }
    }

    /// Picks entry `index` of the composed menu. Value menus count the pick as
    /// a use; category menus return the label unchanged.
    pub fn choose(&mut self, field: &str, index: usize) -> Result<String> {
        let menu = self.menu_for(field)?;
        let value = menu
            .get(index)
            .ok_or_else(|| Error::MenuIndex { field: field.to_owned(), index, len: menu.len() })?
            .to_owned();
        if let Ok(q) = self.queue_mut(field) {
            q.record_use(&value);
        }
        Ok(value)
    }

    /// Recent items per adaptive field, most recent first.
    pub fn snapshot(&self) -> BTreeMap<FieldId, Vec<String>> {
        self.slots
            .iter()
            .filter_map(|(id, slot)| match slot {
                Slot::Value { recent: Some(q), .. } => Some((id.clone(), q.items().map(str::to_owned).collect())),
                _ => None,
            })
            .collect()
    }

    /// Replaces recent items from a snapshot. Unknown or menu-less fields
    /// are errors; lists longer than capacity are truncated.
    pub fn restore(&mut self, snapshot: &BTreeMap<FieldId, Vec<String>>) -> Result<()> {
        for (field, items) in snapshot {
            let q = self.queue_mut(field.as_str())?;
            q.items.clear();
            for item in items.iter().rev() {
                q.record_use(item);
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.snapshot())?)
    }

    /// Total number of stored recent entries across all fields.
    pub fn entry_count(&self) -> usize {
        self.slots
            .values()
            .map(|s| match s {
                Slot::Value { recent: Some(q), .. } => q.len(),
                _ => 0,
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::default_schema;
    use proptest::prelude::*;

    fn items(q: &MruQueue) -> Vec<&str> {
        q.items().collect()
    }

    #[test]
    fn queue_semantics() {
        let mut q = MruQueue::new(FieldId::new("city"), 4).unwrap();
        for c in ["Spokane", "Bellevue", "Seattle", "Redmond", "Pullman"] {
            q.record_use(c);
        }
        assert_eq!(items(&q), ["Pullman", "Redmond", "Seattle", "Bellevue"]);
        q.record_use("Seattle");
        assert_eq!(items(&q), ["Seattle", "Pullman", "Redmond", "Bellevue"]);
        q.record_use("");
        assert_eq!(items(&q), ["Seattle", "Pullman", "Redmond", "Bellevue"]);
        assert!(MruQueue::new(FieldId::new("x"), 0).is_err());
    }

    #[test]
    fn split_menu_for_honorific_and_country() {
        let mut m = MenuState::for_schema(&default_schema());
        m.record_use("honorific", "Prof.").unwrap();
        let menu = m.menu_for("honorific").unwrap();
        assert_eq!(menu.recent, ["Prof."]);
        assert_eq!(menu.fixed, ["Ms.", "Mrs.", "Mr.", "Dr."]);

        assert!(m.menu_for("city").unwrap().is_empty());

        for c in ["A", "B", "C", "D", "E"] {
            m.record_use("country", c).unwrap();
        }
        let menu = m.menu_for("country").unwrap();
        assert_eq!((menu.recent.len(), menu.fixed.len()), (4, 13));
    }

    #[test]
    fn menu_errors() {
        let mut m = MenuState::for_schema(&default_schema());
        assert!(matches!(m.record_use("first_name", "Eric"), Err(Error::NoMenu(_))));
        assert!(matches!(m.record_use("phone1", "Work"), Err(Error::NoMenu(_))));
        assert!(matches!(m.menu_for("address2"), Err(Error::NoMenu(_))));
        assert!(matches!(m.choose("honorific", 99), Err(Error::MenuIndex { len: 4, .. })));
    }

    #[test]
    fn choose_moves_to_front() {
        let mut m = MenuState::for_schema(&default_schema());
        m.record_use("honorific", "Prof.").unwrap();
        assert_eq!(m.choose("honorific", 0).unwrap(), "Prof.");
        assert_eq!(m.menu_for("honorific").unwrap().recent, ["Prof."]);
        let dr = m.menu_for("honorific").unwrap().position("Dr.").unwrap();
        assert_eq!(m.choose("honorific", dr).unwrap(), "Dr.");
        assert_eq!(m.menu_for("honorific").unwrap().recent, ["Dr.", "Prof."]);
    }

    #[test]
    fn category_menu_is_pass_through() {
        let mut m = MenuState::for_schema(&default_schema());
        let before = m.clone();
        assert_eq!(m.choose("phone2", 3).unwrap(), "Fax");
        assert_eq!(m, before);
        assert!(m.is_category("phone2"));
    }

    #[test]
    fn compose_truncates_fixed_tail() {
        let fixed: Vec<String> = (0..30).map(|i| format!("f{i}")).collect();
        let menu = SplitMenu::compose(vec!["a".into(), "b".into()], &fixed);
        assert_eq!(menu.len(), MENU_LIMIT);
        assert_eq!(menu.fixed.last().unwrap(), "f20");
    }

    #[test]
    fn snapshot_round_trip() {
        let schema = default_schema();
        let mut m = MenuState::for_schema(&schema);
        for c in ["Pullman", "Seattle", "Pullman"] {
            m.record_use("city", c).unwrap();
        }
        m.record_use("state", "WA").unwrap();
        let json = m.to_json().unwrap();
        let snap: BTreeMap<FieldId, Vec<String>> = serde_json::from_str(&json).unwrap();
        let mut fresh = MenuState::for_schema(&schema);
        fresh.restore(&snap).unwrap();
        assert_eq!(fresh, m);
        assert_eq!(m.entry_count(), 3);
    }

    proptest! {
        #[test]
        fn state_size_is_sum_of_capped_distinct(
            uses in proptest::collection::vec((0usize..3, 0u8..8), 0..60)
        ) {
            let schema = default_schema();
            let fields = ["city", "state", "company"];
            let mut m = MenuState::for_schema(&schema);
            let mut distinct: BTreeMap<&str, std::collections::BTreeSet<u8>> = BTreeMap::new();
            for (f, v) in &uses {
                m.record_use(fields[*f], &format!("v{v}")).unwrap();
                distinct.entry(fields[*f]).or_default().insert(*v);
            }
            let expected: usize = distinct.values().map(|s| s.len().min(4)).sum();
            prop_assert_eq!(m.entry_count(), expected);
        }
    }
}
