use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{EntryMethod, FieldId, FieldKind};
use crate::store::Dictionary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecognitionMode {
    /// A word is recognized iff the dictionary holds it.
    DeterministicDictionary,
    /// Seeded draws against per-field stage rates.
    Stochastic,
}

/// Where in the remedial cascade a handwritten word was recovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Correct,
    FirstMenu,
    LetterByLetter,
    SecondMenu,
    /// Recognition gave up; the word is typed.
    Failed,
}

impl Stage {
    pub fn method(self) -> EntryMethod {
        match self {
            Stage::Correct => EntryMethod::Recognized,
            Stage::FirstMenu => EntryMethod::RecognitionMenu1,
            Stage::LetterByLetter => EntryMethod::LetterByLetter,
            Stage::SecondMenu => EntryMethod::RecognitionMenu2,
            Stage::Failed => EntryMethod::Typed,
        }
    }
}

/// Cumulative success rates for correct, first menu, letter by letter and
/// second menu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct StageRates(pub [f64; 4]);

impl From<[f64; 4]> for StageRates {
    fn from(r: [f64; 4]) -> Self {
        StageRates(r)
    }
}

impl From<StageRates> for [f64; 4] {
    fn from(r: StageRates) -> Self {
        r.0
    }
}

impl StageRates {
    pub fn validate(&self) -> Result<()> {
        let r = self.0;
        if r.iter().any(|x| !(0.0..=1.0).contains(x)) || r.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config(format!("stage rates {r:?} must be nondecreasing within [0, 1]")));
        }
        Ok(())
    }

    /// Maps a uniform draw in `[0, 1)` to a stage.
    pub fn stage_for(&self, u: f64) -> Stage {
        const STAGES: [Stage; 4] = [Stage::Correct, Stage::FirstMenu, Stage::LetterByLetter, Stage::SecondMenu];
        STAGES.into_iter().zip(self.0).find(|&(_, p)| u < p).map_or(Stage::Failed, |(s, _)| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FallbackRates {
    pub text: StageRates,
    pub numeric: StageRates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognitionModel {
    pub mode: RecognitionMode,
    /// Deterministic mode: unknown words up to this many characters are
    /// recovered letter by letter.
    pub letter_by_letter_max_len: usize,
    pub stage_rates: BTreeMap<FieldId, StageRates>,
    pub fallback: FallbackRates,
}

impl Default for RecognitionModel {
    fn default() -> Self {
        crate::config::defaults().recognition.clone()
    }
}

impl RecognitionModel {
    pub fn validate(&self) -> Result<()> {
        for r in self.stage_rates.values() {
            r.validate()?;
        }
        self.fallback.text.validate()?;
        self.fallback.numeric.validate()
    }

    pub fn with_mode(mut self, mode: RecognitionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn rates_for(&self, field: &str, kind: FieldKind) -> StageRates {
        match self.stage_rates.get(field) {
            Some(r) => *r,
            None if kind.is_numeric() => self.fallback.numeric,
            None => self.fallback.text,
        }
    }

    /// Outcome of writing `word` into a field of `kind`.
    ///
    /// Deterministic mode: digit fields and all-digit words always pass;
    /// dictionary words pass; words matching a dictionary entry up to case
    /// appear in the first menu; short unknown words are recovered letter by
    /// letter; everything else fails. The second menu never helps.
    /// Stochastic mode draws once from `rng`.
    pub fn recognize<R: Rng>(
        &self,
        field: &str,
        kind: FieldKind,
        word: &str,
        dictionary: &Dictionary,
        rng: &mut R,
    ) -> Stage {
        match self.mode {
            RecognitionMode::DeterministicDictionary => {
                if kind.is_numeric() || word.chars().all(|c| c.is_ascii_digit()) || dictionary.contains(word) {
                    Stage::Correct
                } else if dictionary.contains_folded(word) {
                    Stage::FirstMenu
                } else if word.chars().count() <= self.letter_by_letter_max_len {
                    Stage::LetterByLetter
                } else {
                    Stage::Failed
                }
            }
            RecognitionMode::Stochastic => self.rates_for(field, kind).stage_for(rng.random::<f64>()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> RecognitionModel {
        RecognitionModel::default()
    }

    #[test]
    fn deterministic_cascade() {
        let m = model();
        let dict = Dictionary::builtin();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut r = |f: &str, k: FieldKind, w: &str| m.recognize(f, k, w, &dict, &mut rng);
        assert_eq!(r("last_name", FieldKind::Text, "Anderson"), Stage::Correct);
        assert_eq!(r("last_name", FieldKind::Text, "anderson"), Stage::FirstMenu);
        assert_eq!(r("state", FieldKind::Text, "WA"), Stage::LetterByLetter);
        assert_eq!(r("company", FieldKind::Text, "Staffing"), Stage::Failed);
        assert_eq!(r("address1", FieldKind::Text, "12277"), Stage::Correct);
        assert_eq!(r("zip", FieldKind::Numeric, "98104"), Stage::Correct);
    }

    #[test]
    fn stage_thresholds() {
        let rates = StageRates([0.5, 0.6, 0.6, 0.9]);
        assert_eq!(rates.stage_for(0.0), Stage::Correct);
        assert_eq!(rates.stage_for(0.55), Stage::FirstMenu);
        assert_eq!(rates.stage_for(0.6), Stage::SecondMenu);
        assert_eq!(rates.stage_for(0.95), Stage::Failed);
        assert_eq!(StageRates([1.0; 4]).stage_for(0.999_999), Stage::Correct);
    }

    #[test]
    fn rates_validate_and_fall_back() {
        assert!(StageRates([0.5, 0.4, 0.6, 0.7]).validate().is_err());
        assert!(StageRates([0.5, 0.6, 0.6, 1.1]).validate().is_err());
        let m = model();
        assert_eq!(m.rates_for("state", FieldKind::Text).0, [0.22; 4]);
        assert_eq!(m.rates_for("birthdate", FieldKind::Date), m.fallback.numeric);
        assert_eq!(m.rates_for("email", FieldKind::Email), m.fallback.text);
        assert!(m.validate().is_ok());
    }
}
