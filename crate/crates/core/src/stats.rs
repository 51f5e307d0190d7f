use serde::{Deserialize, Serialize};

/// Counters collected during a search.
///
/// `jumps` is the sum, over balls produced by conflict analysis, of the
/// distance between the frame that was on top when the ball was raised and
/// the frame that caught it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub decisions: u64,
    pub propagations: u64,
    pub throws: u64,
    pub jumps: u64,
    pub learnt_count: u64,
    pub max_learnt_size: u64,
}

impl SearchStats {
    /// Every binding made, counting rebinds after an undo separately.
    pub fn assignments(&self) -> u64 {
        self.decisions + self.propagations
    }
}
