use serde::Serialize;

/// Size limits shared by every enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest period lcm(B_K) an exact sieve will walk.
    pub period: u64,
    /// Largest |B_K| accepted by inclusion-exclusion.
    pub subsets: usize,
    /// Largest number of blocks a language table may hold.
    pub table: usize,
    /// Largest block length 2ℓ+1 stored as a dense truth table.
    pub dense_window: usize,
    /// Window used by sampled frequency estimates when the period is too large.
    pub sample_window: u64,
    /// Largest number of configurations a pre-injectivity scan may enumerate.
    pub configurations: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            period: 1_000_000_000,
            subsets: 24,
            table: 1 << 26,
            dense_window: 25,
            sample_window: 1_000_000,
            configurations: 1 << 20,
        }
    }
}
