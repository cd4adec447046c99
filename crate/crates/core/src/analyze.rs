//! Corpus analysis: value coverage for menu sizing, and approximate
//! functional dependencies for configuring fillin.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::defaults;
use crate::error::{Error, Result};
use crate::fillin::{FillinRule, RuleSet, Transform};
use crate::record::{FieldId, FieldKind, Record, Schema};
use crate::report::text_table;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub field: FieldId,
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
}

impl Histogram {
    pub fn of(records: &[Record], field: &str) -> Self {
        let mut counts = BTreeMap::new();
        for r in records {
            let v = r.raw(field);
            if !v.is_empty() {
                *counts.entry(v.to_owned()).or_insert(0) += 1;
            }
        }
        let total = counts.values().sum();
        Histogram { field: FieldId::new(field), counts, total }
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Values by descending count, ties in ascending value order.
    pub fn ranked(&self) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self.counts.iter().map(|(k, c)| (k.as_str(), *c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCurve {
    pub field: FieldId,
    /// `coverage[k - 1]` is the share of values covered by the top `k`.
    pub coverage: Vec<f64>,
    pub total: usize,
    pub distinct: usize,
}

impl CoverageCurve {
    /// Coverage of a menu holding the `k` most frequent values (`k >= 1`).
    pub fn at(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.coverage.get(i).copied())
    }
}

/// Share of `field`'s non-empty values covered by its `k` most frequent
/// values, for `k = 1..=max_k`.
pub fn coverage_curve(records: &[Record], field: &str, max_k: usize) -> Result<CoverageCurve> {
    if max_k == 0 {
        return Err(Error::InvalidArgument("coverage length must be at least 1".into()));
    }
    let hist = Histogram::of(records, field);
    if hist.total == 0 {
        return Err(Error::NoData(field.to_owned()));
    }
    let ranked = hist.ranked();
    let mut cum = 0usize;
    let coverage = (0..max_k)
        .map(|i| {
            if let Some((_, c)) = ranked.get(i) {
                cum += c;
            }
            cum as f64 / hist.total as f64
        })
        .collect();
    Ok(CoverageCurve { field: hist.field.clone(), coverage, total: hist.total, distinct: ranked.len() })
}

/// Smallest menu size whose coverage reaches `target`, or `None` when no
/// size up to `max_entries` does.
pub fn recommend_menu_size(curve: &CoverageCurve, target: f64, max_entries: usize) -> Option<usize> {
    let k = curve.coverage.iter().position(|&c| c >= target)? + 1;
    (k <= max_entries).then_some(k)
}

/// Part of a field used as the range of a dependency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Whole,
    PhoneArea,
    PhoneAreaPrefix,
    EmailDomain,
}

impl Component {
    pub fn transform(self) -> Transform {
        match self {
            Component::Whole => Transform::Verbatim,
            Component::PhoneArea => Transform::PhoneArea,
            Component::PhoneAreaPrefix => Transform::PhoneAreaPrefix,
            Component::EmailDomain => Transform::EmailDomain,
        }
    }

    /// Components worth testing as ranges for a field of `kind`, most
    /// specific first.
    pub fn candidates(kind: FieldKind) -> &'static [Component] {
        match kind {
            FieldKind::Phone => &[Component::Whole, Component::PhoneAreaPrefix, Component::PhoneArea],
            FieldKind::Email => &[Component::Whole, Component::EmailDomain],
            _ => &[Component::Whole],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attribute {
    pub field: FieldId,
    pub component: Component,
}

impl Attribute {
    pub fn whole(field: &str) -> Self {
        Attribute { field: FieldId::new(field), component: Component::Whole }
    }

    pub fn component(field: &str, component: Component) -> Self {
        Attribute { field: FieldId::new(field), component }
    }

    /// The attribute's value in `record`; empty when absent.
    pub fn extract(&self, record: &Record) -> String {
        let raw = record.raw(self.field.as_str());
        if raw.is_empty() {
            return String::new();
        }
        self.component.transform().apply(raw)
    }
}

impl std::fmt::Display for Attribute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.component {
            Component::Whole => write!(f, "{}", self.field),
            Component::PhoneArea => write!(f, "{}.area", self.field),
            Component::PhoneAreaPrefix => write!(f, "{}.area_prefix", self.field),
            Component::EmailDomain => write!(f, "{}.domain", self.field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencyStats {
    pub domain: Attribute,
    pub range: Attribute,
    /// Records where both sides are non-empty.
    pub support: usize,
    /// Share of supporting records whose domain value occurs at least twice.
    pub density: f64,
    /// Share of supporting records kept by the best single-valued mapping.
    pub functionality: f64,
}

/// Density and functionality of `domain -> range` over `records`.
pub fn dependency_stats(records: &[Record], domain: &Attribute, range: &Attribute) -> Result<DependencyStats> {
    if domain == range {
        return Err(Error::InvalidArgument(format!("domain and range are both `{domain}`")));
    }
    let mut groups: HashMap<String, HashMap<String, usize>> = HashMap::new();
    let mut support = 0usize;
    for r in records {
        let d = domain.extract(r);
        let v = range.extract(r);
        if d.is_empty() || v.is_empty() {
            continue;
        }
        support += 1;
        *groups.entry(d).or_default().entry(v).or_insert(0) += 1;
    }
    if support == 0 {
        return Err(Error::NoData(format!("{domain} -> {range}")));
    }
    let mut repeated = 0usize;
    let mut kept = 0usize;
    for ranges in groups.values() {
        let n: usize = ranges.values().sum();
        if n >= 2 {
            repeated += n;
        }
        kept += ranges.values().max().copied().unwrap_or(0);
    }
    Ok(DependencyStats {
        domain: domain.clone(),
        range: range.clone(),
        support,
        density: repeated as f64 / support as f64,
        functionality: kept as f64 / support as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub min_density: f64,
    pub min_functionality: f64,
    pub min_support: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        defaults().analyzer.thresholds
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("min_density", self.min_density), ("min_functionality", self.min_functionality)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    pub fn passes(&self, s: &DependencyStats) -> bool {
        s.support >= self.min_support && s.density >= self.min_density && s.functionality >= self.min_functionality
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuSizing {
    pub field: FieldId,
    pub total: usize,
    pub distinct: usize,
    /// Coverage of the largest allowed menu (0 when the field is empty).
    pub coverage_at_max: f64,
    pub recommended: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningReport {
    pub thresholds: Thresholds,
    pub records: usize,
    /// Dependencies behind each recommended rule, in rule order.
    pub dependencies: Vec<DependencyStats>,
    pub rules: RuleSet,
    pub menus: Vec<MenuSizing>,
}

/// Recommends fillin rules and menu sizes for `schema` from `records`.
///
/// Every ordered pair of distinct fields is tested with the whole domain
/// field against each range component the target's kind allows. For each
/// pair the most specific passing component becomes a rule: verbatim before
/// area plus prefix before area alone. Menu sizes use the configured
/// coverage target and menu limit.
pub fn mine(records: &[Record], schema: &Schema, thresholds: &Thresholds) -> MiningReport {
    let analyzer = &defaults().analyzer;
    mine_with(records, schema, thresholds, analyzer.coverage_target, analyzer.max_menu_entries)
}

pub fn mine_with(
    records: &[Record],
    schema: &Schema,
    thresholds: &Thresholds,
    coverage_target: f64,
    max_menu_entries: usize,
) -> MiningReport {
    let mut dependencies = Vec::new();
    let mut rules = Vec::new();
    for d in schema.fields() {
        let domain = Attribute::whole(d.id.as_str());
        for t in schema.fields().iter().filter(|t| t.id != d.id) {
            let passing = Component::candidates(t.kind).iter().find_map(|&c| {
                let range = Attribute::component(t.id.as_str(), c);
                dependency_stats(records, &domain, &range).ok().filter(|s| thresholds.passes(s))
            });
            if let Some(stats) = passing {
                rules.push(FillinRule {
                    trigger: d.id.clone(),
                    target: t.id.clone(),
                    transform: stats.range.component.transform(),
                });
                dependencies.push(stats);
            }
        }
    }
    let menus = schema
        .fields()
        .iter()
        .map(|f| match coverage_curve(records, f.id.as_str(), max_menu_entries.max(1)) {
            Ok(curve) => MenuSizing {
                field: f.id.clone(),
                total: curve.total,
                distinct: curve.distinct,
                coverage_at_max: curve.coverage.last().copied().unwrap_or(0.0),
                recommended: recommend_menu_size(&curve, coverage_target, max_menu_entries),
            },
            Err(_) => MenuSizing {
                field: f.id.clone(),
                total: 0,
                distinct: 0,
                coverage_at_max: 0.0,
                recommended: None,
            },
        })
        .collect();
    MiningReport {
        thresholds: *thresholds,
        records: records.len(),
        dependencies,
        rules: RuleSet::new(rules).expect("one rule per ordered pair"),
        menus,
    }
}

impl MiningReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Aligned-column text: one table of dependencies, one of menu sizes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.thresholds;
        let _ = writeln!(
            out,
            "{} records; min density {}, min functionality {}, min support {}\n",
            self.records, t.min_density, t.min_functionality, t.min_support
        );
        let rows: Vec<Vec<String>> = self
            .dependencies
            .iter()
            .map(|s| {
                vec![
                    s.domain.to_string(),
                    s.range.to_string(),
                    s.support.to_string(),
                    format!("{:.3}", s.density),
                    format!("{:.3}", s.functionality),
                ]
            })
            .collect();
        out.push_str(&text_table(&["domain", "range", "support", "density", "functionality"], &rows));
        out.push('\n');
        let rows: Vec<Vec<String>> = self
            .menus
            .iter()
            .map(|m| {
                vec![
                    m.field.to_string(),
                    m.total.to_string(),
                    m.distinct.to_string(),
                    format!("{:.3}", m.coverage_at_max),
                    m.recommended.map_or_else(|| "none".to_owned(), |k| k.to_string()),
                ]
            })
            .collect();
        out.push_str(&text_table(&["field", "values", "distinct", "max coverage", "menu size"], &rows));
        out
    }
}

/// `field,k,coverage` rows for plotting.
pub fn coverage_csv(curves: &[CoverageCurve]) -> String {
    let mut out = String::from("field,k,coverage\n");
    for c in curves {
        for (i, v) in c.coverage.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", c.field, i + 1, v);
        }
    }
    out
}
