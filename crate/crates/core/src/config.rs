use serde::{Deserialize, Serialize};

/// Tunables shared by the analysis pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Largest numerator/denominator tried when certifying rational ratios
    /// of Lyapunov exponents.
    pub max_den: u64,
    /// Starting precision (bits) for interval enclosures.
    pub initial_bits: u32,
    /// Precision beyond which a comparison is reported as undecided.
    pub precision_cap_bits: u32,
    /// Largest scaling factor tried when rounding interior points to
    /// lattice witnesses.
    pub witness_cap: u64,
    /// Seed for the generic 2-plane draw in splittings.
    pub seed: u64,
    /// Cap on the total dimension of free nilpotent lifts.
    pub size_cap: usize,
}

pub const DEFAULT_MAX_DEN: u64 = 12;
pub const DEFAULT_PRECISION_CAP_BITS: u32 = 4096;
pub const DEFAULT_WITNESS_CAP: u64 = 1_000_000;
pub const DEFAULT_SIZE_CAP: usize = 2000;

impl Default for Config {
    fn default() -> Self {
        Config {
            max_den: DEFAULT_MAX_DEN,
            initial_bits: 64,
            precision_cap_bits: DEFAULT_PRECISION_CAP_BITS,
            witness_cap: DEFAULT_WITNESS_CAP,
            seed: 0,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

impl Config {
    /// Precision schedule: initial bits, doubled until the cap.
    pub fn precision_steps(&self) -> impl Iterator<Item = u32> {
        let cap = self.precision_cap_bits.max(self.initial_bits);
        let mut next = Some(self.initial_bits.max(16));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap {
                None
            } else {
                Some((cur * 2).min(cap))
            };
            Some(cur)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_doubles_to_cap() {
        let c = Config {
            initial_bits: 64,
            precision_cap_bits: 300,
            ..Config::default()
        };
        assert_eq!(c.precision_steps().collect::<Vec<_>>(), vec![64, 128, 256, 300]);
    }
}
