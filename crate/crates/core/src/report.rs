//! Check records shared by the verification routines and the harness.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Verified exactly.
    Pass,
    /// Verified through a representation oracle rather than a normal form.
    OracleRelativePass,
    /// A counterexample was found.
    Fail,
    /// The check could not be carried out.
    Error,
    /// The check does not apply to the configured data.
    Skipped,
}

impl Status {
    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::OracleRelativePass)
    }

    /// True for outcomes that make a run fail.
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::OracleRelativePass => "oracle-relative-pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Skipped => "skipped",
        })
    }
}

/// One verified (or refuted) identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub group: String,
    pub name: String,
    pub status: Status,
    /// Human-readable detail; for failures, the first offending instance.
    pub detail: String,
    /// Serialized counterexample, if any.
    pub witness: Option<String>,
    /// True if the identity was verified after applying a shift embedding.
    pub via_shift: bool,
    /// Wall-clock time; kept at zero in deterministic reports.
    pub millis: u64,
}

impl CheckRecord {
    pub fn new(group: &str, name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckRecord {
            group: group.to_string(),
            name: name.into(),
            status,
            detail: detail.into(),
            witness: None,
            via_shift: false,
            millis: 0,
        }
    }

    /// `Pass` if `ok`, otherwise `Fail` with the detail as a default witness.
    pub fn from_bool(group: &str, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let mut rec = CheckRecord::new(group, name, if ok { Status::Pass } else { Status::Fail }, detail);
        if !ok {
            rec.witness = Some(rec.detail.clone());
        }
        rec
    }

    /// Stable identifier `group/name`.
    pub fn id(&self) -> String {
        format!("{}/{}", self.group, self.name)
    }

    /// An `Error` record carrying the error message.
    pub fn from_error(group: &str, name: impl Into<String>, err: &crate::error::Error) -> Self {
        CheckRecord::new(group, name, Status::Error, err.to_string())
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn via_shift(mut self) -> Self {
        self.via_shift = true;
        self
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}/{}: {}", self.status, self.group, self.name, self.detail)?;
        if self.via_shift {
            write!(f, " (via shift embedding)")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}
