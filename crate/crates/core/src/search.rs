//! Bookkeeping shared by the exhaustive searches: node counting, a hashed
//! event log for replay, and the size guardrail.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Default refusal threshold on the naive search bound.
pub const DEFAULT_NODE_LIMIT: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchLimits {
    pub node_limit: f64,
    pub force: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_limit: DEFAULT_NODE_LIMIT,
            force: false,
        }
    }
}

impl SearchLimits {
    pub fn forced() -> Self {
        SearchLimits {
            force: true,
            ..Self::default()
        }
    }

    pub fn check(&self, bound: f64) -> Result<()> {
        if bound > self.node_limit && !self.force {
            return Err(Error::Guardrail {
                bound,
                limit: self.node_limit,
            });
        }
        Ok(())
    }
}

/// Results of a complete search, in canonical order, with its replay data.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome<T> {
    pub results: Vec<T>,
    /// Assignments attempted.
    pub nodes: u64,
    /// Hex sha256 over the ordered event log.
    pub log_hash: String,
    /// Naive bound the guardrail was checked against.
    pub bound: f64,
}

/// One search subtree's log. Subtrees are merged in a fixed order, so the
/// hash does not depend on scheduling.
#[derive(Clone, Debug, Default)]
pub(crate) struct SearchLog {
    hasher: Sha256,
    pub(crate) nodes: u64,
}

impl SearchLog {
    #[inline]
    pub(crate) fn visit(&mut self, tag: u8, var: usize, value: usize, accepted: bool) {
        self.nodes += 1;
        let mut buf = [0u8; 10];
        buf[0] = tag;
        buf[1..5].copy_from_slice(&(var as u32).to_le_bytes());
        buf[5..9].copy_from_slice(&(value as u32).to_le_bytes());
        buf[9] = accepted as u8;
        self.hasher.update(buf);
    }

    pub(crate) fn digest(self) -> [u8; 32] {
        self.hasher.finalize().into()
    }
}

/// Hash of the concatenated subtree digests.
pub(crate) fn merge_logs(logs: Vec<SearchLog>) -> (u64, String) {
    let mut nodes = 0;
    let mut hasher = Sha256::new();
    for log in logs {
        nodes += log.nodes;
        hasher.update(log.digest());
    }
    (nodes, hex::encode(hasher.finalize()))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
