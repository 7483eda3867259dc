//! Machine-readable check results.

use crate::error::Error;
use crate::series::{Comparison, Window};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Duration;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// What a check asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// An identity the algebra states.
    Stated,
    /// An identity the relation list does not state but which is checked
    /// and reported separately.
    Unstated,
    /// A deliberately broken variant. `Pass` means the breakage was
    /// detected.
    Control,
    /// Diagnostic output that never affects the exit status.
    Info,
}

/// First mismatch of a failing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Exponents or sample values per variable.
    pub at: BTreeMap<String, String>,
    pub entry: Option<(usize, usize)>,
    pub lhs: String,
    pub rhs: String,
}

impl From<crate::series::Witness> for Witness {
    fn from(w: crate::series::Witness) -> Self {
        let at = w.vars.iter().zip(&w.exponents).map(|(v, e)| (v.to_string(), e.to_string())).collect();
        Witness { at, entry: w.entry, lhs: w.lhs, rhs: w.rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub name: String,
    /// Instance parameters such as indices and signs.
    pub params: BTreeMap<String, String>,
    pub category: Category,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Comparison box per variable.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub window: BTreeMap<String, String>,
    pub compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(rename = "runtime_ms", skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckReport {
    pub fn new(suite: &str, name: &str) -> Self {
        CheckReport {
            suite: suite.to_string(),
            name: name.to_string(),
            params: BTreeMap::new(),
            category: Category::Stated,
            status: Status::Pass,
            reason: None,
            window: BTreeMap::new(),
            compared: 0,
            witness: None,
            notes: Vec::new(),
            millis: None,
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn category(mut self, c: Category) -> Self {
        self.category = c;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.reason = Some(reason.into());
        self
    }

    /// Records a failure to carry out the check. Errors are failures, never
    /// passes, unless the check is a control (where an error is an
    /// unexpected outcome too).
    pub fn errored(mut self, e: &Error) -> Self {
        self.status = Status::Fail;
        self.reason = Some(e.to_string());
        self
    }

    pub fn with_window(mut self, w: impl IntoIterator<Item = (String, Window)>) -> Self {
        for (k, v) in w {
            self.window.insert(k, v.to_string());
        }
        self
    }

    /// Folds a series comparison into the report: accumulates the compared
    /// count, keeps the first witness and narrows the window record.
    pub fn absorb(&mut self, c: &Comparison) {
        self.compared += c.compared;
        for (v, w) in c.vars.iter().zip(&c.window) {
            self.window.entry(v.to_string()).or_insert_with(|| w.to_string());
        }
        if self.witness.is_none() {
            if let Some(w) = &c.witness {
                self.witness = Some(w.clone().into());
                self.status = Status::Fail;
            }
        }
    }

    /// Sets a mismatch witness; marks the check failed.
    pub fn fail_with(mut self, w: Witness) -> Self {
        self.status = Status::Fail;
        self.witness = Some(w);
        self
    }

    /// Converts the raw outcome of a broken variant into a control verdict:
    /// the control passes exactly when the variant was rejected.
    pub fn as_control(mut self) -> Self {
        self.category = Category::Control;
        self.status = match self.status {
            Status::Fail => Status::Pass,
            Status::Pass => {
                self.notes.push("broken variant was not detected".into());
                Status::Fail
            }
            Status::Skipped => Status::Skipped,
        };
        self
    }

    pub fn timed(mut self, d: Duration, keep: bool) -> Self {
        if keep {
            self.millis = Some(d.as_millis() as u64);
        }
        self
    }

    /// Whether the check counts against the exit status.
    pub fn is_failure(&self) -> bool {
        self.status == Status::Fail && self.category != Category::Info
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    /// Informational lines; never counted as failures.
    pub info: usize,
}

impl Summary {
    pub fn tally(reports: &[CheckReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            if r.category == Category::Info {
                s.info += 1;
                continue;
            }
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

/// Times a closure.
pub fn stopwatch<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = std::time::Instant::now();
    let r = f();
    (r, t.elapsed())
}
