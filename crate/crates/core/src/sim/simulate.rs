use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::condition::Condition;
use super::cost::{Action, ActionCounts, CostModel};
use super::recognition::{RecognitionModel, Stage};
use crate::config::defaults;
use crate::corpus::synthetic_address_book;
use crate::error::{Error, Result};
use crate::fillin::{apply_on_commit, default_rules, RuleSet};
use crate::menus::MenuState;
use crate::record::fields::{COMPANY, FIRST_NAME, LAST_NAME};
use crate::record::{default_schema, tokenize, EntryMethod, FieldId, FieldSpec, FieldValue, Provenance, Record, Schema};
use crate::store::{Dictionary, RecordStore};

/// First entry of a record within a condition, or a repeat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Worst,
    Best,
}

impl Case {
    pub fn of_pass(pass: u32) -> Self {
        if pass <= 1 {
            Case::Worst
        } else {
            Case::Best
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordEntry {
    pub word: String,
    pub method: EntryMethod,
    /// Typed because recognition failed, and missing from the dictionary.
    pub asked_to_add: bool,
    /// Added to the dictionary after typing.
    pub added: bool,
    pub actions: ActionCounts,
    pub seconds: f64,
}

/// One line of the scoring sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SheetRow {
    pub field: FieldId,
    pub value: String,
    pub provenance: Provenance,
    /// All actions spent on the field, including its words.
    pub actions: ActionCounts,
    pub seconds: f64,
    pub words: Vec<WordEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub condition: String,
    pub record_id: String,
    pub pass: u32,
    pub case: Case,
    pub duration_seconds: f64,
    pub actions: ActionCounts,
    pub sheet: Vec<SheetRow>,
}

impl RunResult {
    pub fn minutes(&self) -> f64 {
        self.duration_seconds / 60.0
    }

    pub fn row(&self, field: &str) -> Option<&SheetRow> {
        self.sheet.iter().find(|r| r.field.as_str() == field)
    }
}

/// Device image a condition starts from.
#[derive(Debug, Clone)]
pub struct SimState {
    pub store: RecordStore,
    pub menus: MenuState,
    pub dictionary: Dictionary,
    pub rules: RuleSet,
}

impl SimState {
    /// Empty store and menus, built-in dictionary, default rules.
    pub fn new(schema: Schema) -> Self {
        SimState {
            menus: MenuState::for_schema(&schema),
            store: RecordStore::new(schema),
            dictionary: Dictionary::builtin(),
            rules: default_rules(),
        }
    }

    /// The image for `condition`: the preload in the store, menus per
    /// `setup.menu_init`, and with the dictionary condition, every first
    /// name, last name and company word of the preload in the dictionary.
    pub fn prepare(condition: &Condition, setup: &ExperimentSetup) -> Result<Self> {
        let mut state = SimState {
            menus: MenuState::for_schema(&setup.schema),
            store: RecordStore::new(setup.schema.clone()),
            dictionary: setup.dictionary.clone(),
            rules: setup.rules.clone(),
        };
        for r in &setup.preload {
            state.store.finalize_record(r.clone())?;
        }
        if setup.menu_init == MenuInit::Preload {
            for r in &setup.preload {
                state.record_menu_uses(r);
            }
        }
        if condition.add_to_dictionary {
            for r in &setup.preload {
                for f in [FIRST_NAME, LAST_NAME, COMPANY] {
                    for w in tokenize(r.raw(f)) {
                        state.dictionary.add(w)?;
                    }
                }
            }
        }
        Ok(state)
    }

    fn record_menu_uses(&mut self, record: &Record) {
        for (field, v) in &record.values {
            if self.menus.has_adaptive_menu(field.as_str()) {
                self.menus.record_use(field.as_str(), &v.raw).expect("field has a menu");
            }
        }
    }
}

/// Initial contents of the adaptive menus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MenuInit {
    #[default]
    Empty,
    /// Replay the preload through the menus in store order.
    Preload,
}

#[derive(Debug, Clone)]
pub struct ExperimentSetup {
    pub schema: Schema,
    pub preload: Vec<Record>,
    pub dictionary: Dictionary,
    pub rules: RuleSet,
    pub cost: CostModel,
    pub recognition: RecognitionModel,
    pub menu_init: MenuInit,
    pub repeats: u32,
    pub seed: u64,
}

impl Default for ExperimentSetup {
    fn default() -> Self {
        let d = defaults();
        ExperimentSetup {
            schema: default_schema(),
            preload: synthetic_address_book(d.calibration.preload_records, d.calibration.preload_seed),
            dictionary: Dictionary::builtin(),
            rules: default_rules(),
            cost: d.cost,
            recognition: d.recognition.clone(),
            menu_init: MenuInit::Empty,
            repeats: 2,
            seed: 0,
        }
    }
}

struct Entry<'a, R> {
    condition: &'a Condition,
    recognition: &'a RecognitionModel,
    cost: &'a CostModel,
    state: &'a mut SimState,
    rng: &'a mut R,
}

impl<R: Rng> Entry<'_, R> {
    fn word(&mut self, spec: &FieldSpec, word: &str) -> WordEntry {
        let mut actions = ActionCounts::new();
        let len = word.chars().count() as u64;
        let type_it = |actions: &mut ActionCounts| {
            actions.add(Action::OpenKeyboard, 1);
            actions.add(Action::TypeChar, len);
            actions.add(Action::CloseKeyboard, 1);
        };
        let (mut asked_to_add, mut added) = (false, false);
        let method = if self.condition.typed_only {
            type_it(&mut actions);
            EntryMethod::Typed
        } else {
            actions.add(Action::WriteWord, 1);
            let stage =
                self.recognition.recognize(spec.id.as_str(), spec.kind, word, &self.state.dictionary, self.rng);
            let remedial = match stage {
                Stage::Correct => 0,
                Stage::FirstMenu => 1,
                Stage::LetterByLetter => 2,
                Stage::SecondMenu | Stage::Failed => 3,
            };
            actions.add(Action::OpenRecogMenu, u64::from(remedial >= 1) + u64::from(remedial >= 3));
            actions.add(Action::TryLetters, u64::from(remedial >= 2));
            if stage == Stage::Failed {
                type_it(&mut actions);
                asked_to_add = !self.state.dictionary.contains(word);
                if asked_to_add && self.condition.add_to_dictionary {
                    actions.add(Action::AddToDictConfirm, 1);
                    added = self.state.dictionary.add(word).unwrap_or(false);
                }
            }
            stage.method()
        };
        let seconds = self.cost.duration(&actions);
        WordEntry { word: word.to_owned(), method, asked_to_add, added, actions, seconds }
    }

    fn words(&mut self, spec: &FieldSpec, words: &[&str], row: &mut SheetRow) {
        for w in words {
            let entry = self.word(spec, w);
            row.actions += &entry.actions;
            row.words.push(entry);
        }
    }
}

/// Enters `target` once under `condition`, mutating `state` the way the
/// device would: dictionary additions, a new stored record, menu updates.
pub fn simulate_entry(
    target: &Record,
    condition: &Condition,
    state: &mut SimState,
    recognition: &RecognitionModel,
    cost: &CostModel,
    seed: u64,
) -> Result<RunResult> {
    let schema = state.store.schema().clone();
    schema.check_record(target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draft = Record::new(format!("{}~{}", target.id, state.store.len() + 1));
    let mut sheet = Vec::new();
    let mut entry = Entry { condition, recognition, cost, state, rng: &mut rng };

    for spec in schema.fields() {
        let field = spec.id.as_str();
        let want = target.raw(field);
        let current = draft.value(field).cloned().unwrap_or_default();
        let mut row = SheetRow {
            field: spec.id.clone(),
            value: want.to_owned(),
            provenance: Provenance::Empty,
            actions: ActionCounts::new(),
            seconds: 0.0,
            words: Vec::new(),
        };
        let words = tokenize(want);

        if words.is_empty() {
            if !current.is_empty() {
                // Clear an unwanted filled-in value.
                row.actions.add(Action::TapField, 1);
                draft.set(field, FieldValue::empty());
                row.seconds = cost.duration(&row.actions);
                sheet.push(row);
            }
            continue;
        }

        let mut done = false;
        if condition.predictive_fillin && current.provenance == Provenance::Fillin {
            let have = tokenize(&current.raw);
            if have.len() <= words.len() && words[..have.len()] == have[..] {
                row.actions.add(Action::FillinOverhead, 1);
                for w in &have {
                    row.words.push(WordEntry {
                        word: (*w).to_owned(),
                        method: EntryMethod::Fillin,
                        asked_to_add: false,
                        added: false,
                        actions: ActionCounts::new(),
                        seconds: 0.0,
                    });
                }
                if have.len() == words.len() {
                    row.provenance = Provenance::Fillin;
                } else {
                    // Accept the copied prefix, then add the rest.
                    entry.words(spec, &words[have.len()..], &mut row);
                    row.provenance = if condition.typed_only { Provenance::Typed } else { Provenance::Written };
                }
                done = true;
            }
        }

        if !done && condition.adaptive_menus && entry.state.menus.has_adaptive_menu(field) {
            let menu = entry.state.menus.menu_for(field)?;
            row.actions.add(Action::OpenMenu, 1);
            match menu.position(want) {
                Some(pos) => {
                    row.actions.add(Action::ScanMenuItem, pos as u64 + 1);
                    row.actions.add(Action::ChooseItem, 1);
                    for w in &words {
                        row.words.push(WordEntry {
                            word: (*w).to_owned(),
                            method: EntryMethod::AdaptiveMenu,
                            asked_to_add: false,
                            added: false,
                            actions: ActionCounts::new(),
                            seconds: 0.0,
                        });
                    }
                    row.provenance = Provenance::MenuChosen;
                    done = true;
                }
                None => row.actions.add(Action::ScanMenuItem, menu.len() as u64),
            }
        }

        if !done {
            row.actions.add(Action::TapField, 1);
            entry.words(spec, &words, &mut row);
            row.provenance = if condition.typed_only { Provenance::Typed } else { Provenance::Written };
        }

        let methods = row.words.iter().map(|w| w.method).collect();
        draft.set(field, FieldValue::new(want, row.provenance).with_methods(methods));
        if row.provenance.is_user() && condition.predictive_fillin {
            apply_on_commit(&mut draft, field, want, &entry.state.store, &entry.state.rules)?;
        }
        row.seconds = cost.duration(&row.actions);
        sheet.push(row);
    }

    let mut actions = ActionCounts::new();
    for row in &sheet {
        actions += &row.actions;
    }
    draft.values.retain(|_, v| !v.is_empty());
    let state = entry.state;
    state.store.finalize_record(draft.clone())?;
    state.record_menu_uses(&draft);

    Ok(RunResult {
        condition: condition.name.clone(),
        record_id: target.id.clone(),
        pass: 1,
        case: Case::Worst,
        duration_seconds: cost.duration(&actions),
        actions,
        sheet,
    })
}

/// Enters every record `setup.repeats` times in a row under each condition.
///
/// Each condition starts from its own freshly prepared image. Pass 1 of a
/// record is its worst case, later passes its best case. Results are ordered
/// by condition, record, pass, and depend only on the inputs and the seed.
pub fn run_experiment(records: &[Record], conditions: &[Condition], setup: &ExperimentSetup) -> Result<Vec<RunResult>> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to enter".into()));
    }
    if setup.repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    setup.cost.validate()?;
    setup.recognition.validate()?;
    let mut results = Vec::with_capacity(records.len() * conditions.len() * setup.repeats as usize);
    for (ci, condition) in conditions.iter().enumerate() {
        let mut state = SimState::prepare(condition, setup)?;
        let mut seeds = ChaCha8Rng::seed_from_u64(setup.seed);
        seeds.set_stream(ci as u64);
        for record in records {
            for pass in 1..=setup.repeats {
                let mut r =
                    simulate_entry(record, condition, &mut state, &setup.recognition, &setup.cost, seeds.random())?;
                r.pass = pass;
                r.case = Case::of_pass(pass);
                results.push(r);
            }
        }
    }
    Ok(results)
}

/// Best-case durations in minutes per condition name.
pub(crate) fn best_minutes(results: &[RunResult]) -> BTreeMap<&str, Vec<f64>> {
    let mut out: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in results.iter().filter(|r| r.case == Case::Best) {
        out.entry(r.condition.as_str()).or_default().push(r.minutes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::script_records;
    use crate::record::fields::*;
    use crate::sim::condition::condition_presets;
    use crate::sim::recognition::RecognitionMode;

    fn run(name: &str) -> Vec<RunResult> {
        let setup = ExperimentSetup::default();
        run_experiment(&script_records(), &[Condition::named(name).unwrap()], &setup).unwrap()
    }

    fn methods(r: &RunResult, field: &str) -> Vec<EntryMethod> {
        r.row(field).map(|row| row.words.iter().map(|w| w.method).collect()).unwrap_or_default()
    }

    #[test]
    fn protocol_shape() {
        let setup = ExperimentSetup::default();
        let results = run_experiment(&script_records(), &condition_presets(), &setup).unwrap();
        assert_eq!(results.len(), 60);
        assert_eq!(results[1].pass, 2);
        assert_eq!(results[1].case, Case::Best);
        let again = run_experiment(&script_records(), &condition_presets(), &setup).unwrap();
        assert_eq!(serde_json::to_string(&results).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn duration_recomputes_from_actions() {
        let setup = ExperimentSetup::default();
        for r in run_experiment(&script_records(), &condition_presets(), &setup).unwrap() {
            assert_eq!(r.duration_seconds, setup.cost.duration(&r.actions));
            let mut sum = ActionCounts::new();
            for row in &r.sheet {
                sum += &row.actions;
                if !row.value.is_empty() {
                    assert_eq!(row.words.len(), tokenize(&row.value).len());
                }
            }
            assert_eq!(sum, r.actions);
        }
    }

    #[test]
    fn typed_oracle() {
        let mut cost = CostModel::zero();
        cost.type_char = 1.54;
        let words = ["Abcdefghij"; 9];
        let target = Record::from_pairs("t", [(TITLE, format!("{} Abcdefgh", words.join(" ")))]);
        let mut state = SimState::new(default_schema());
        let typed = Condition::named("Typed").unwrap();
        let r = simulate_entry(&target, &typed, &mut state, &RecognitionModel::default(), &cost, 0).unwrap();
        assert_eq!(r.actions.get(Action::TypeChar), 98);
        assert!((r.minutes() - 2.52).abs() < 0.005);
    }

    #[test]
    fn second_pass_in_all_uses_menus_and_fillin() {
        let results = run("All");
        let brice = results.iter().find(|r| r.record_id == "brice" && r.pass == 2).unwrap();
        assert_eq!(methods(brice, COMPANY), [EntryMethod::AdaptiveMenu; 2]);
        for f in [ADDRESS1, CITY, STATE, ZIP] {
            let m = methods(brice, f);
            assert!(!m.is_empty() && m.iter().all(|&m| m == EntryMethod::Fillin), "{f}: {m:?}");
        }
    }

    #[test]
    fn null_leaves_dictionary_alone() {
        let setup = ExperimentSetup::default();
        let null = Condition::named("Null").unwrap();
        let mut state = SimState::prepare(&null, &setup).unwrap();
        let before = state.dictionary.clone();
        let leland = &script_records()[4];
        let r = simulate_entry(leland, &null, &mut state, &setup.recognition, &setup.cost, 1).unwrap();
        assert_eq!(methods(&r, LAST_NAME), [EntryMethod::Typed]);
        assert!(r.row(LAST_NAME).unwrap().words[0].asked_to_add);
        assert_eq!(state.dictionary, before);
    }

    #[test]
    fn dictionary_condition_learns_typed_words() {
        let results = run("D");
        for pair in results.chunks(2) {
            for (a, b) in pair[0].sheet.iter().zip(&pair[1].sheet) {
                for (w1, w2) in a.words.iter().zip(&b.words) {
                    if w1.method == EntryMethod::Typed {
                        assert_eq!(w2.method, EntryMethod::Recognized, "{}", w1.word);
                    }
                }
            }
            assert!(pair[1].duration_seconds <= pair[0].duration_seconds);
        }
    }

    #[test]
    fn perfect_stochastic_rates_recognize_everything() {
        let mut setup = ExperimentSetup::default();
        setup.recognition = setup.recognition.with_mode(RecognitionMode::Stochastic);
        for r in setup.recognition.stage_rates.values_mut() {
            r.0 = [1.0; 4];
        }
        setup.recognition.fallback.text.0 = [1.0; 4];
        setup.recognition.fallback.numeric.0 = [1.0; 4];
        let results = run_experiment(&script_records(), &[Condition::named("Null").unwrap()], &setup).unwrap();
        for r in &results {
            for row in &r.sheet {
                assert!(row.words.iter().all(|w| w.method == EntryMethod::Recognized));
            }
        }
    }

    #[test]
    fn stochastic_mode_is_seeded() {
        let mut setup = ExperimentSetup::default();
        setup.recognition = setup.recognition.with_mode(RecognitionMode::Stochastic);
        setup.seed = 7;
        let conds = condition_presets();
        let a = run_experiment(&script_records(), &conds, &setup).unwrap();
        let b = run_experiment(&script_records(), &conds, &setup).unwrap();
        assert_eq!(a, b);
        setup.seed = 8;
        let c = run_experiment(&script_records(), &conds, &setup).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prefix_fillin_is_completed_by_hand() {
        let results = run("PF");
        let brice = results.iter().find(|r| r.record_id == "brice" && r.pass == 2).unwrap();
        assert_eq!(methods(brice, PHONE1), [EntryMethod::Fillin, EntryMethod::Fillin, EntryMethod::Recognized]);
    }
}
