use std::collections::BTreeMap;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One priced user action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    TapField,
    OpenMenu,
    ScanMenuItem,
    ChooseItem,
    WriteWord,
    OpenRecogMenu,
    TryLetters,
    OpenKeyboard,
    TypeChar,
    CloseKeyboard,
    AddToDictConfirm,
    FillinOverhead,
}

impl Action {
    pub const ALL: [Action; 12] = [
        Action::TapField,
        Action::OpenMenu,
        Action::ScanMenuItem,
        Action::ChooseItem,
        Action::WriteWord,
        Action::OpenRecogMenu,
        Action::TryLetters,
        Action::OpenKeyboard,
        Action::TypeChar,
        Action::CloseKeyboard,
        Action::AddToDictConfirm,
        Action::FillinOverhead,
    ];
}

/// Seconds per action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub tap_field: f64,
    pub open_menu: f64,
    pub scan_menu_item: f64,
    pub choose_item: f64,
    pub write_word: f64,
    pub open_recog_menu: f64,
    pub try_letters: f64,
    pub open_keyboard: f64,
    pub type_char: f64,
    pub close_keyboard: f64,
    pub add_to_dict_confirm: f64,
    pub fillin_overhead: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        crate::config::defaults().cost
    }
}

impl CostModel {
    pub fn zero() -> Self {
        CostModel {
            tap_field: 0.0,
            open_menu: 0.0,
            scan_menu_item: 0.0,
            choose_item: 0.0,
            write_word: 0.0,
            open_recog_menu: 0.0,
            try_letters: 0.0,
            open_keyboard: 0.0,
            type_char: 0.0,
            close_keyboard: 0.0,
            add_to_dict_confirm: 0.0,
            fillin_overhead: 0.0,
        }
    }

    pub fn cost(&self, action: Action) -> f64 {
        match action {
            Action::TapField => self.tap_field,
            Action::OpenMenu => self.open_menu,
            Action::ScanMenuItem => self.scan_menu_item,
            Action::ChooseItem => self.choose_item,
            Action::WriteWord => self.write_word,
            Action::OpenRecogMenu => self.open_recog_menu,
            Action::TryLetters => self.try_letters,
            Action::OpenKeyboard => self.open_keyboard,
            Action::TypeChar => self.type_char,
            Action::CloseKeyboard => self.close_keyboard,
            Action::AddToDictConfirm => self.add_to_dict_confirm,
            Action::FillinOverhead => self.fillin_overhead,
        }
    }

    pub fn cost_mut(&mut self, action: Action) -> &mut f64 {
        match action {
            Action::TapField => &mut self.tap_field,
            Action::OpenMenu => &mut self.open_menu,
            Action::ScanMenuItem => &mut self.scan_menu_item,
            Action::ChooseItem => &mut self.choose_item,
            Action::WriteWord => &mut self.write_word,
            Action::OpenRecogMenu => &mut self.open_recog_menu,
            Action::TryLetters => &mut self.try_letters,
            Action::OpenKeyboard => &mut self.open_keyboard,
            Action::TypeChar => &mut self.type_char,
            Action::CloseKeyboard => &mut self.close_keyboard,
            Action::AddToDictConfirm => &mut self.add_to_dict_confirm,
            Action::FillinOverhead => &mut self.fillin_overhead,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for a in Action::ALL {
            let c = self.cost(a);
            if !c.is_finite() || c < 0.0 {
                return Err(Error::Config(format!("cost of {a:?} must be a finite non-negative number, got {c}")));
            }
        }
        Ok(())
    }

    /// Total seconds for `counts`, summed in [`Action::ALL`] order.
    pub fn duration(&self, counts: &ActionCounts) -> f64 {
        Action::ALL.iter().map(|&a| counts.get(a) as f64 * self.cost(a)).sum()
    }
}

/// How many times each action was performed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionCounts(BTreeMap<Action, u64>);

impl ActionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, action: Action, n: u64) {
        if n > 0 {
            *self.0.entry(action).or_insert(0) += n;
        }
    }

    pub fn get(&self, action: Action) -> u64 {
        self.0.get(&action).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Action, u64)> + '_ {
        self.0.iter().map(|(a, n)| (*a, *n))
    }
}

impl AddAssign<&ActionCounts> for ActionCounts {
    fn add_assign(&mut self, rhs: &ActionCounts) {
        for (a, n) in rhs.iter() {
            self.add(a, n);
        }
    }
}
