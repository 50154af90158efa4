//! Resource limits for the exhaustive enumerations.
//!
//! Every enumerator takes a [`Caps`] and reports whether it ran to the end.
//! A truncated enumeration is never silently passed off as complete: sums
//! built from a truncated stream are lower bounds only.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_ITEMS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    pub max_items: u64,
    #[serde(default, with = "opt_secs")]
    pub time_limit: Option<Duration>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_items: DEFAULT_MAX_ITEMS,
            time_limit: None,
        }
    }
}

impl Caps {
    pub fn items(max_items: u64) -> Self {
        Caps {
            max_items,
            time_limit: None,
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            caps: *self,
            started: Instant::now(),
            emitted: 0,
            stopped: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    ItemCap,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "reason")]
pub enum Completeness {
    Complete,
    Truncated(Truncation),
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        matches!(self, Completeness::Complete)
    }

    /// Truncated if either side is.
    pub fn and(self, other: Completeness) -> Completeness {
        match self {
            Completeness::Complete => other,
            t => t,
        }
    }
}

/// Running counter for one enumeration.
#[derive(Debug)]
pub(crate) struct Budget {
    caps: Caps,
    started: Instant,
    emitted: u64,
    stopped: Option<Truncation>,
}

impl Budget {
    /// Accounts for one more emitted item. Returns `false` once the caps are
    /// exhausted; the item being accounted for must then not be emitted.
    pub(crate) fn admit(&mut self) -> bool {
        if self.stopped.is_some() {
            return false;
        }
        if self.emitted >= self.caps.max_items {
            self.stopped = Some(Truncation::ItemCap);
            return false;
        }
        if let Some(limit) = self.caps.time_limit {
            if self.emitted.is_multiple_of(1024) && self.started.elapsed() > limit {
                self.stopped = Some(Truncation::TimeLimit);
                return false;
            }
        }
        self.emitted += 1;
        true
    }

    pub(crate) fn is_stopped(&self) -> bool {
        self.stopped.is_some()
    }

    pub(crate) fn completeness(&self) -> Completeness {
        match self.stopped {
            None => Completeness::Complete,
            Some(t) => Completeness::Truncated(t),
        }
    }
}

mod opt_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        let secs: Option<f64> = Option::deserialize(d)?;
        Ok(secs.map(Duration::from_secs_f64))
    }
}
