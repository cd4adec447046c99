use serde::{Deserialize, Serialize};

use super::condition::Condition;
use super::simulate::{best_minutes, run_experiment, ExperimentSetup};
use crate::error::{Error, Result};
use crate::record::Record;
use crate::report::median;

/// Published medians the cost model is fitted to, and the preload they
/// are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTargets {
    pub typed_best_minutes: f64,
    pub d_best_minutes: f64,
    pub preload_records: usize,
    pub preload_seed: u64,
}

impl Default for CalibrationTargets {
    fn default() -> Self {
        crate::config::defaults().calibration
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub type_char: f64,
    pub write_word: f64,
    pub typed_best_minutes: f64,
    pub d_best_minutes: f64,
}

fn best_median(records: &[Record], condition: &Condition, setup: &ExperimentSetup) -> Result<f64> {
    let results = run_experiment(records, std::slice::from_ref(condition), setup)?;
    let best = best_minutes(&results);
    best.get(condition.name.as_str())
        .and_then(|m| median(m))
        .ok_or_else(|| Error::InvalidArgument("calibration needs at least two passes".into()))
}

/// Finds the smallest `x >= 0` with `f(x) >= target` for nondecreasing `f`.
fn solve(target: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut lo = 0.0;
    if f(lo)? >= target {
        return Err(Error::InvalidArgument(format!("target {target} is below the fixed costs alone")));
    }
    let mut hi = 1.0;
    while f(hi)? < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidArgument(format!("target {target} is unreachable")));
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Fits `type_char` to the Typed best-case median, then `write_word` to the
/// D best-case median, holding every other cost in `setup` fixed.
pub fn calibrate(records: &[Record], setup: &ExperimentSetup, targets: &CalibrationTargets) -> Result<Calibration> {
    let typed = Condition::named("Typed")?;
    let d = Condition::named("D")?;
    let mut setup = setup.clone();
    if setup.repeats < 2 {
        setup.repeats = 2;
    }
    let type_char = solve(targets.typed_best_minutes, |x| {
        setup.cost.type_char = x;
        best_median(records, &typed, &setup)
    })?;
    setup.cost.type_char = type_char;
    let write_word = solve(targets.d_best_minutes, |x| {
        setup.cost.write_word = x;
        best_median(records, &d, &setup)
    })?;
    setup.cost.write_word = write_word;
    Ok(Calibration {
        type_char,
        write_word,
        typed_best_minutes: best_median(records, &typed, &setup)?,
        d_best_minutes: best_median(records, &d, &setup)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::script_records;
    use crate::sim::CostModel;

    #[test]
    fn solver_finds_threshold() {
        let x = solve(3.0, |x| Ok((x * 4.0).floor())).unwrap();
        assert_eq!(x, 0.75);
        assert!(solve(0.0, Ok).is_err());
    }

    #[test]
    fn shipped_costs_are_calibrated() {
        let setup = ExperimentSetup::default();
        let cal = calibrate(&script_records(), &setup, &CalibrationTargets::default()).unwrap();
        let shipped = CostModel::default();
        assert!((cal.type_char - shipped.type_char).abs() < 1e-9, "{cal:?}");
        assert!((cal.write_word - shipped.write_word).abs() < 1e-9, "{cal:?}");
        assert!((cal.typed_best_minutes - 2.52).abs() < 1e-9);
        assert!((cal.d_best_minutes - 3.30).abs() < 1e-9);
    }
}
