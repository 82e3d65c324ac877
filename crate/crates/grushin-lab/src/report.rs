//! Structured experiment reports.
//!
//! Every check in the crate returns an [`ExperimentReport`]: the measured
//! quantities, the verdicts each was compared against, and the seed/config
//! needed to reproduce the run. Reports serialize to JSON with stable key
//! order (struct order plus `BTreeMap`s), so identical runs produce
//! byte-identical files. Wall time deliberately lives outside the
//! serialized struct; writers that want it put it in a sidecar file.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::Result;

/// Outcome of one comparison: the value that was measured and the tolerance
/// (or threshold) it was held against.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
    pub note: String,
}

/// Record of one experiment or check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub measurements: BTreeMap<String, f64>,
    /// Indexed series such as per-k superlevel fractions.
    pub series: BTreeMap<String, Vec<f64>>,
    pub verdicts: BTreeMap<String, Verdict>,
    #[serde(skip)]
    pub wall_time: Option<Duration>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        ExperimentReport {
            name: name.into(),
            seed,
            config: serde_json::Value::Null,
            measurements: BTreeMap::new(),
            series: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            wall_time: None,
        }
    }

    pub fn with_config<T: Serialize>(mut self, config: &T) -> Self {
        self.config = serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
        self
    }

    pub fn record(&mut self, key: impl Into<String>, value: f64) {
        self.measurements.insert(key.into(), value);
    }

    pub fn record_series(&mut self, key: impl Into<String>, values: Vec<f64>) {
        self.series.insert(key.into(), values);
    }

    /// Records `value`, compared against `tolerance` with outcome `pass`.
    pub fn judge(
        &mut self,
        key: impl Into<String>,
        pass: bool,
        value: f64,
        tolerance: f64,
        note: impl Into<String>,
    ) {
        self.verdicts.insert(
            key.into(),
            Verdict { pass, value, tolerance, note: note.into() },
        );
    }

    /// True when every verdict passed.
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|v| v.pass)
    }

    pub fn measurement(&self, key: &str) -> Option<f64> {
        self.measurements.get(key).copied()
    }

    /// Pretty JSON with a trailing newline; key order is deterministic.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes one CSV row per report: name, seed, pass, then the union of
/// measurement keys in sorted order (blank where a report lacks a key).
pub fn write_summary_csv<W: Write>(reports: &[ExperimentReport], mut out: W) -> Result<()> {
    let mut keys: Vec<String> = Vec::new();
    for r in reports {
        for k in r.measurements.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    write!(out, "name,seed,pass")?;
    for k in &keys {
        write!(out, ",{k}")?;
    }
    writeln!(out)?;
    for r in reports {
        write!(out, "{},{},{}", r.name, r.seed, r.passed())?;
        for k in &keys {
            match r.measurements.get(k) {
                Some(v) => write!(out, ",{v}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_stable_and_skips_wall_time() {
        let mut r = ExperimentReport::new("demo", 7);
        r.record("beta", 2.0);
        r.record("alpha", 1.0);
        r.judge("bound", true, 1.0, 0.5, "alpha >= 0.5");
        let mut r2 = r.clone();
        r2.wall_time = Some(Duration::from_millis(123));
        assert_eq!(r.to_json().unwrap(), r2.to_json().unwrap());
        assert!(r.to_json().unwrap().find("alpha") < r.to_json().unwrap().find("beta"));
    }

    #[test]
    fn summary_csv_unions_keys() {
        let mut a = ExperimentReport::new("a", 0);
        a.record("x", 1.0);
        let mut b = ExperimentReport::new("b", 1);
        b.record("y", 2.0);
        let mut buf = Vec::new();
        write_summary_csv(&[a, b], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "name,seed,pass,x,y");
        assert_eq!(lines.next().unwrap(), "a,0,true,1,");
        assert_eq!(lines.next().unwrap(), "b,1,true,,2");
    }
}
