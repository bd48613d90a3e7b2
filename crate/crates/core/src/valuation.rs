use std::fmt;

use serde::{Deserialize, Serialize};

/// A packed assignment to all variables; bit `i` is variable `i` in
/// declaration order (environment variables first).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valuation(pub u64);

/// Hard upper bound on the number of variables a valuation can hold.
pub const MAX_VARS: usize = 64;

impl Valuation {
    pub fn get(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize, value: bool) -> Self {
        if value {
            Valuation(self.0 | 1 << index)
        } else {
            Valuation(self.0 & !(1 << index))
        }
    }

    /// Combines an input block (low `env_count` bits) with an output block.
    pub fn join(inputs: u64, outputs: u64, env_count: usize) -> Self {
        Valuation(inputs | outputs << env_count)
    }

    pub fn inputs(self, env_count: usize) -> u64 {
        self.0 & low_mask(env_count)
    }

    pub fn outputs(self, env_count: usize) -> u64 {
        self.0 >> env_count
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Valuation({:#b})", self.0)
    }
}

pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// All `2^bits` blocks in increasing numeric order.
pub(crate) fn blocks(bits: usize) -> impl DoubleEndedIterator<Item = u64> {
    0..(1u64 << bits)
}
