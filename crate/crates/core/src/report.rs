//! Summary metrics: median tables, speedups over the Null condition,
//! throughput, and per-field entry-method breakdowns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{EntryMethod, FieldId};
use crate::sim::{condition_presets, Action, Case, RunResult};

/// Median of `values`, averaging the two middle values for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) { (v[mid - 1] + v[mid]) / 2.0 } else { v[mid] })
}

/// Median minutes per condition and case.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, BTreeMap<Case, f64>>", into = "BTreeMap<String, BTreeMap<Case, f64>>")]
pub struct MedianTable {
    cells: BTreeMap<String, BTreeMap<Case, f64>>,
}

impl TryFrom<BTreeMap<String, BTreeMap<Case, f64>>> for MedianTable {
    type Error = Error;

    fn try_from(cells: BTreeMap<String, BTreeMap<Case, f64>>) -> Result<Self> {
        let mut t = MedianTable::new();
        for (cond, cases) in cells {
            for (case, minutes) in cases {
                t.insert(&cond, case, minutes)?;
            }
        }
        Ok(t)
    }
}

impl From<MedianTable> for BTreeMap<String, BTreeMap<Case, f64>> {
    fn from(t: MedianTable) -> Self {
        t.cells
    }
}

impl MedianTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The human-subject medians from the original experiment, in minutes.
    pub fn published() -> Self {
        let mut t = MedianTable::new();
        let rows = [
            ("Typed", 2.72, 2.52),
            ("Null", 4.25, 3.65),
            ("D", 4.50, 3.30),
            ("AM", 4.32, 1.37),
            ("PF", 4.07, 2.02),
            ("All", 4.15, 1.08),
        ];
        for (c, worst, best) in rows {
            t.insert(c, Case::Worst, worst).expect("positive");
            t.insert(c, Case::Best, best).expect("positive");
        }
        t
    }

    /// Medians of simulated durations, in minutes.
    pub fn from_results(results: &[RunResult]) -> Self {
        let mut groups: BTreeMap<(&str, Case), Vec<f64>> = BTreeMap::new();
        for r in results {
            groups.entry((r.condition.as_str(), r.case)).or_default().push(r.minutes());
        }
        let mut t = MedianTable::new();
        for ((cond, case), minutes) in groups {
            if let Some(m) = median(&minutes).filter(|m| *m > 0.0) {
                t.cells.entry(cond.to_owned()).or_default().insert(case, m);
            }
        }
        t
    }

    pub fn insert(&mut self, condition: &str, case: Case, minutes: f64) -> Result<()> {
        if !(minutes.is_finite() && minutes > 0.0) {
            return Err(Error::InvalidArgument(format!("median for {condition} must be positive, got {minutes}")));
        }
        self.cells.entry(condition.to_owned()).or_default().insert(case, minutes);
        Ok(())
    }

    pub fn get(&self, condition: &str, case: Case) -> Option<f64> {
        self.cells.get(condition).and_then(|c| c.get(&case)).copied()
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut t = MedianTable::new();
        for (cond, cases) in &self.cells {
            for (case, m) in cases {
                t.insert(cond, *case, m * factor)?;
            }
        }
        Ok(t)
    }

    /// Condition names: the presets first in their usual order, then others.
    pub fn conditions(&self) -> Vec<&str> {
        let presets = condition_presets();
        let mut names: Vec<&str> = Vec::new();
        for p in &presets {
            if let Some((k, _)) = self.cells.get_key_value(p.name.as_str()) {
                names.push(k.as_str());
            }
        }
        for k in self.cells.keys() {
            if !names.contains(&k.as_str()) {
                names.push(k.as_str());
            }
        }
        names
    }

    fn cell(&self, condition: &str, case: Case) -> String {
        self.get(condition, case).map(|m| format!("{m:.2}")).unwrap_or_default()
    }

    /// Cases as rows, conditions as columns.
    pub fn to_text(&self) -> String {
        let conds = self.conditions();
        let mut header = vec!["Case"];
        header.extend(&conds);
        let rows: Vec<Vec<String>> = [(Case::Worst, "Worst"), (Case::Best, "Best")]
            .into_iter()
            .map(|(case, label)| {
                let mut row = vec![label.to_owned()];
                row.extend(conds.iter().map(|c| self.cell(c, case)));
                row
            })
            .collect();
        text_table(&header, &rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("condition,case,minutes\n");
        for c in self.conditions() {
            for (case, label) in [(Case::Worst, "worst"), (Case::Best, "best")] {
                if let Some(m) = self.get(c, case) {
                    let _ = writeln!(out, "{c},{label},{m}");
                }
            }
        }
        out
    }
}

/// Percent speedup of each condition's best case over the Null worst case:
/// `null_worst / best - 1`, times 100.
pub fn speedup_vs_null(table: &MedianTable) -> Result<BTreeMap<String, f64>> {
    let null_worst = table.get("Null", Case::Worst);
    let mut missing = Vec::new();
    if null_worst.is_none() {
        missing.push("Null worst".to_owned());
    }
    let conds = table.conditions();
    for c in &conds {
        if table.get(c, Case::Best).is_none() {
            missing.push(format!("{c} best"));
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingMedians(missing));
    }
    let null_worst = null_worst.expect("checked above");
    Ok(conds
        .into_iter()
        .map(|c| (c.to_owned(), (null_worst / table.get(c, Case::Best).expect("checked above") - 1.0) * 100.0))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub cpm: f64,
    pub wpm: f64,
}

/// Characters and words per minute for one record entered in `minutes`.
pub fn throughput_metrics(chars_per_record: f64, words_per_record: f64, minutes: f64) -> Result<Throughput> {
    for (name, v) in [("characters", chars_per_record), ("words", words_per_record), ("minutes", minutes)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(Throughput { cpm: chars_per_record / minutes, wpm: words_per_record / minutes })
}

/// Word counts behind one row of the breakdown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodCounts {
    pub words: u64,
    /// Words the user started by handwriting.
    pub written: u64,
    pub recognized: u64,
    pub first_menu: u64,
    pub letter_by_letter: u64,
    pub second_menu: u64,
    pub typed: u64,
    pub adaptive_menu: u64,
    pub fillin: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldBreakdown {
    pub field: FieldId,
    pub counts: MethodCounts,
    /// Cumulative recovery after each recognition stage, percent of written
    /// words. `None` when nothing was written.
    pub cumulative: Option<[f64; 4]>,
    /// Percent of all words.
    pub typed: f64,
    pub adaptive_menu: f64,
    pub fillin: f64,
    /// Percent of all words recovered by any recognition stage.
    pub recognized: f64,
}

/// Entry methods per field over `results`: the recognition cascade over
/// written words, and typing, menus and fillin over all words.
pub fn method_breakdown(results: &[RunResult]) -> Result<Vec<FieldBreakdown>> {
    if results.is_empty() {
        return Err(Error::NoData("run results".into()));
    }
    let mut order: Vec<FieldId> = Vec::new();
    let mut counts: BTreeMap<FieldId, MethodCounts> = BTreeMap::new();
    for r in results {
        for row in &r.sheet {
            if row.words.is_empty() {
                continue;
            }
            if !counts.contains_key(&row.field) {
                order.push(row.field.clone());
            }
            let c = counts.entry(row.field.clone()).or_default();
            for w in &row.words {
                c.words += 1;
                if w.actions.get(Action::WriteWord) > 0 {
                    c.written += 1;
                }
                match w.method {
                    EntryMethod::Recognized => c.recognized += 1,
                    EntryMethod::RecognitionMenu1 => c.first_menu += 1,
                    EntryMethod::LetterByLetter => c.letter_by_letter += 1,
                    EntryMethod::RecognitionMenu2 => c.second_menu += 1,
                    EntryMethod::Typed => c.typed += 1,
                    EntryMethod::AdaptiveMenu => c.adaptive_menu += 1,
                    EntryMethod::Fillin => c.fillin += 1,
                }
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|field| {
            let c = counts.remove(&field).expect("field was counted");
            let pct = |n: u64, d: u64| 100.0 * n as f64 / d as f64;
            let stages = [c.recognized, c.first_menu, c.letter_by_letter, c.second_menu];
            let cumulative = (c.written > 0).then(|| {
                let mut acc = 0;
                stages.map(|n| {
                    acc += n;
                    pct(acc, c.written)
                })
            });
            FieldBreakdown {
                field,
                cumulative,
                typed: pct(c.typed, c.words),
                adaptive_menu: pct(c.adaptive_menu, c.words),
                fillin: pct(c.fillin, c.words),
                recognized: pct(stages.iter().sum(), c.words),
                counts: c,
            }
        })
        .collect())
}

/// Integer percentages; zero cells are blank.
pub fn breakdown_text(rows: &[FieldBreakdown]) -> String {
    let cell = |v: f64| if v == 0.0 { String::new() } else { format!("{v:.0}") };
    let header =
        ["Field", "Correct", "1st Menu", "Letter by Letter", "2nd Menu", "Typed", "Adaptive Menu", "Predictive Fillin"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![r.field.to_string()];
            match r.cumulative {
                Some(c) => row.extend(c.map(cell)),
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            row.extend([cell(r.typed), cell(r.adaptive_menu), cell(r.fillin)]);
            row
        })
        .collect();
    text_table(&header, &body)
}

pub fn breakdown_csv(rows: &[FieldBreakdown]) -> String {
    let mut out =
        String::from("field,words,written,correct,first_menu,letter_by_letter,second_menu,typed,adaptive_menu,fillin\n");
    for r in rows {
        let c = r.cumulative.map(|c| c.map(|v| v.to_string())).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.field,
            r.counts.words,
            r.counts.written,
            c.join(","),
            r.typed,
            r.adaptive_menu,
            r.fillin
        );
    }
    out
}

/// Everything reported about a batch of runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: usize,
    pub medians: MedianTable,
    /// Absent when the runs lack a Null worst case or some best case.
    pub speedups: Option<BTreeMap<String, f64>>,
    pub breakdown: Vec<FieldBreakdown>,
}

impl RunSummary {
    pub fn from_results(results: &[RunResult]) -> Result<Self> {
        let medians = MedianTable::from_results(results);
        Ok(RunSummary {
            runs: results.len(),
            speedups: speedup_vs_null(&medians).ok(),
            breakdown: method_breakdown(results)?,
            medians,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} runs\n\nMedian minutes\n", self.runs);
        out.push_str(&self.medians.to_text());
        if let Some(s) = &self.speedups {
            out.push_str("\nSpeedup over Null worst case\n");
            let rows: Vec<Vec<String>> = self
                .medians
                .conditions()
                .iter()
                .filter_map(|c| s.get(*c).map(|v| vec![c.to_string(), format!("{v:.1}%")]))
                .collect();
            out.push_str(&text_table(&["Condition", "Speedup"], &rows));
        }
        out.push_str("\nEntry methods (percent)\n");
        out.push_str(&breakdown_text(&self.breakdown));
        out
    }
}

/// Aligned columns: first left-aligned, the rest right-aligned. Trailing
/// blanks are trimmed.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.into_iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(s, "{cell:<w$}");
            } else {
                let _ = write!(s, "  {cell:>w$}");
            }
        }
        let mut s = s.trim_end().to_owned();
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{ActionCounts, SheetRow, WordEntry};
    use crate::record::Provenance;

    fn word(method: EntryMethod, written: bool) -> WordEntry {
        let mut actions = ActionCounts::new();
        if written {
            actions.add(Action::WriteWord, 1);
        }
        WordEntry { word: "w".into(), method, asked_to_add: false, added: false, actions, seconds: 0.0 }
    }

    fn run(words: Vec<WordEntry>) -> RunResult {
        RunResult {
            condition: "X".into(),
            record_id: "r".into(),
            pass: 1,
            case: Case::Worst,
            duration_seconds: 1.0,
            actions: ActionCounts::new(),
            sheet: vec![SheetRow {
                field: FieldId::new("f"),
                value: String::new(),
                provenance: Provenance::Written,
                actions: ActionCounts::new(),
                seconds: 0.0,
                words,
            }],
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn published_speedups() {
        let s = speedup_vs_null(&MedianTable::published()).unwrap();
        for (c, want) in [("D", 29.0), ("AM", 210.0), ("PF", 110.0), ("All", 294.0)] {
            assert!((s[c] - want).abs() <= 1.0, "{c}: {}", s[c]);
        }
    }

    #[test]
    fn speedup_identity_and_missing() {
        let mut t = MedianTable::new();
        t.insert("Null", Case::Worst, 4.0).unwrap();
        t.insert("Null", Case::Best, 4.0).unwrap();
        assert_eq!(speedup_vs_null(&t).unwrap()["Null"], 0.0);
        t.insert("D", Case::Worst, 4.0).unwrap();
        match speedup_vs_null(&t) {
            Err(Error::MissingMedians(m)) => assert_eq!(m, ["D best"]),
            other => panic!("{other:?}"),
        }
        assert!(t.insert("D", Case::Best, 0.0).is_err());
    }

    #[test]
    fn throughput() {
        let t = throughput_metrics(98.2, 20.8, 3.30).unwrap();
        assert_eq!(t.cpm.round(), 30.0);
        assert!((t.wpm - 6.3).abs() <= 0.1);
        let t = throughput_metrics(98.2, 20.8, 2.52).unwrap();
        assert!((t.wpm - 8.3).abs() <= 0.1);
        assert_eq!(throughput_metrics(100.0, 10.0, 10.0).unwrap(), Throughput { cpm: 10.0, wpm: 1.0 });
        assert!(throughput_metrics(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hand_counted_breakdown() {
        let mut words = vec![word(EntryMethod::Typed, true), word(EntryMethod::Typed, true)];
        words.extend((0..3).map(|_| word(EntryMethod::AdaptiveMenu, false)));
        words.extend((0..5).map(|_| word(EntryMethod::Recognized, true)));
        let b = method_breakdown(&[run(words)]).unwrap();
        let f = &b[0];
        assert_eq!((f.typed, f.adaptive_menu, f.recognized, f.fillin), (20.0, 30.0, 50.0, 0.0));
        let c = f.cumulative.unwrap();
        assert!((c[0] - 500.0 / 7.0).abs() < 1e-12);
        assert!(breakdown_text(&b).contains("71"));
    }

    #[test]
    fn fillin_only_field_has_no_written_columns() {
        let b = method_breakdown(&[run(vec![word(EntryMethod::Fillin, false)])]).unwrap();
        assert_eq!(b[0].cumulative, None);
        assert_eq!(b[0].fillin, 100.0);
        assert!(method_breakdown(&[]).is_err());
    }

    #[test]
    fn median_table_text_and_json() {
        let t = MedianTable::published();
        let text = t.to_text();
        assert!(text.starts_with("Case   Typed  Null"));
        assert!(text.contains("1.08"));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<MedianTable>(&json).unwrap(), t);
        assert!(serde_json::from_str::<MedianTable>(r#"{"Null":{"worst":-1}}"#).is_err());
    }
}
