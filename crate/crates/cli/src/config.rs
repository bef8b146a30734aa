//! Scan configuration. Output bytes are a function of everything here
//! except `workers`.

use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteToggles {
    /// Class numbers and the three-way splitting equivalence for every
    /// `p ≡ 1 mod 8` (not just the split-complete ones).
    pub split_classnum: bool,
    pub lw: bool,
    pub kw: bool,
    pub first_factor: bool,
    /// Narrow class number for every odd prime (off: split-complete only).
    pub hplus_all: bool,
}

impl Default for SuiteToggles {
    fn default() -> Self {
        SuiteToggles {
            split_classnum: true,
            lw: true,
            kw: true,
            first_factor: true,
            hplus_all: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub x_max: u64,
    /// 0 means the rayon default for this machine.
    pub workers: usize,
    pub suites: SuiteToggles,
    /// Spin beta route on every split-complete prime up to this bound...
    pub spin_full_below: u64,
    /// ...and on every k-th split-complete prime above it (0 disables the
    /// spin route entirely).
    pub spin_one_in: u64,
    /// Append-only CSV cache; also the canonical CSV artifact of the scan.
    pub cache: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            x_max: 100_000,
            workers: 0,
            suites: SuiteToggles::default(),
            spin_full_below: 100_000,
            spin_one_in: 10,
            cache: None,
        }
    }
}

impl ScanConfig {
    pub fn with_x_max(x_max: u64) -> Self {
        ScanConfig {
            x_max,
            ..Default::default()
        }
    }

    /// Geometric checkpoints `1000·2^k` capped by `x_max`, always ending at
    /// `x_max` itself.
    pub fn checkpoints(&self) -> Vec<u64> {
        checkpoints_for(self.x_max)
    }
}

pub fn checkpoints_for(x_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 1000u64;
    while x < x_max {
        out.push(x);
        x = x.saturating_mul(2);
    }
    out.push(x_max);
    out
}

/// The split-complete primes that get the spin beta route: every one up to
/// `full_below`, then every `one_in`-th (by position among those above).
/// A pure function of the inputs so scans, resumes, and exports agree.
pub fn spin_sample(
    split_primes: &[u64],
    full_below: u64,
    one_in: u64,
) -> std::collections::BTreeSet<u64> {
    let mut out = std::collections::BTreeSet::new();
    if one_in == 0 {
        return out;
    }
    let mut above = 0u64;
    for &p in split_primes {
        if p <= full_below {
            out.insert(p);
        } else {
            if above.is_multiple_of(one_in) {
                out.insert(p);
            }
            above += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_ladder() {
        assert_eq!(checkpoints_for(500), vec![500]);
        assert_eq!(checkpoints_for(1000), vec![1000]);
        assert_eq!(
            checkpoints_for(10_000),
            vec![1000, 2000, 4000, 8000, 10_000]
        );
    }
}
