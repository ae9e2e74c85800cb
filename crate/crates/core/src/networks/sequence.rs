//! The ruler sequence of disk numbers moved in optimal 3-peg play.

use crate::error::{Error, Result};

/// First `N` disk numbers, positions starting at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskSequence {
    values: Vec<u32>,
}

impl DiskSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Disk number at position `n` (1-based).
    pub fn value(&self, n: usize) -> Option<u32> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

/// `ν₂(n) + 1`.
pub fn disk_number(n: u64) -> u32 {
    assert!(n > 0, "positions start at 1");
    n.trailing_zeros() + 1
}

/// `S_n`: two copies of `S_{n−1}` around the term `n`.
pub fn optimal_sequence(n: u32) -> Vec<u32> {
    let mut s = Vec::new();
    for d in 1..=n {
        let prev = s.clone();
        s.push(d);
        s.extend(prev);
    }
    s
}

/// First `N` values, computed by concatenation and checked against the
/// valuation formula.
pub fn disk_sequence(len: usize) -> Result<DiskSequence> {
    if len == 0 {
        return Err(Error::Precondition(
            "sequence length must be positive".into(),
        ));
    }
    let levels = usize::BITS - len.leading_zeros();
    let mut values = optimal_sequence(levels);
    values.truncate(len);
    for (i, &v) in values.iter().enumerate() {
        if v != disk_number(i as u64 + 1) {
            return Err(Error::Numerical(format!(
                "position {}: recursion gives {v}, valuation gives {}",
                i + 1,
                disk_number(i as u64 + 1)
            )));
        }
    }
    Ok(DiskSequence { values })
}
