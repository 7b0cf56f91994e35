//! Check results shared by every verification routine.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Untrusted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    /// Human-readable description of the verified window.
    pub window: String,
    pub status: Status,
    /// Exact data supporting the verdict (values, residuals, or an error).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub witness: serde_json::Value,
}

impl Entry {
    pub fn new(name: impl Into<String>, window: impl Into<String>, ok: bool, witness: serde_json::Value) -> Self {
        Entry {
            name: name.into(),
            window: window.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    /// An entry for a computation that raised an error.
    pub fn error(name: impl Into<String>, window: impl Into<String>, err: &crate::Error) -> Self {
        let status = match err {
            crate::Error::BeyondCutoff { .. } | crate::Error::CutoffExceeded(_) => Status::Untrusted,
            _ => Status::Fail,
        };
        Entry {
            name: name.into(),
            window: window.into(),
            status,
            witness: serde_json::json!({ "error": err.to_string() }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Collapses a result into an entry, turning errors into failures.
pub fn entry_from(name: &str, window: &str, r: crate::Result<(bool, serde_json::Value)>) -> Entry {
    match r {
        Ok((ok, w)) => Entry::new(name, window, ok, w),
        Err(e) => Entry::error(name, window, &e),
    }
}

pub fn all_pass(entries: &[Entry]) -> bool {
    entries.iter().all(Entry::passed)
}

pub fn rat_json(r: &crate::exactcore::Rat) -> serde_json::Value {
    serde_json::Value::String(crate::exactcore::fmt_rat(r))
}

pub fn series_json(s: &crate::exactcore::GradedSeries<crate::exactcore::Rat>) -> serde_json::Value {
    serde_json::Value::Array(s.coeffs().iter().map(rat_json).collect())
}

pub fn ratfun_json(f: &crate::exactcore::RatFun) -> serde_json::Value {
    serde_json::json!({
        "num": f.num().coeffs().iter().map(rat_json).collect::<Vec<_>>(),
        "den": f.den().coeffs().iter().map(rat_json).collect::<Vec<_>>(),
    })
}
