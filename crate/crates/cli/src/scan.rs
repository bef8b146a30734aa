//! The scan coordinator: contiguous prime chunks go to a worker pool, the
//! merge is order-preserving, and the only shared mutable state is the
//! append point of the cache file. Output bytes are independent of the
//! worker count, and an interrupted scan resumes from its cache without
//! changing the result.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rank16_core::arith::{is_split_complete, sieve_primes};
use rank16_core::invariants::{build_record, PrimeRecord, RecordOptions};
use rank16_core::quadforms::SpfTable;
use rayon::prelude::*;

use crate::cache::{parse_csv, render_csv, render_row, CSV_HEADER};
use crate::config::ScanConfig;
use crate::report::{build_report, DensityReport};

#[derive(Debug)]
pub struct ScanOutcome {
    pub records: Vec<PrimeRecord>,
    pub report: DensityReport,
    pub csv: String,
    /// rows taken from the cache instead of recomputed
    pub resumed_rows: usize,
}

pub fn run_scan(config: &ScanConfig) -> Result<ScanOutcome> {
    let primes = sieve_primes(config.x_max)?;
    let spf = SpfTable::new(4 * config.x_max + 1)?;

    // split-complete primes drive the spin-route sampling
    let split: Vec<u64> = primes
        .iter()
        .filter(|&&p| p > 2 && is_split_complete(p).unwrap_or(false))
        .copied()
        .collect();
    let spin_set: BTreeSet<u64> =
        crate::config::spin_sample(&split, config.spin_full_below, config.spin_one_in);

    let base = RecordOptions {
        classnum_all_1mod8: config.suites.split_classnum,
        hplus_all: config.suites.hplus_all,
        lw_suite: config.suites.lw,
        kw_suite: config.suites.kw,
        first_factor: config.suites.first_factor,
        spin_beta: false,
    };

    let mut records: Vec<PrimeRecord> = Vec::with_capacity(primes.len());
    let mut cache_file: Option<File> = None;
    if let Some(path) = &config.cache {
        let resumed = load_cache(path, &primes.primes)?;
        let fresh = resumed.is_empty();
        records = resumed;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening cache {}", path.display()))?;
        if fresh && f.metadata()?.len() == 0 {
            writeln!(f, "{CSV_HEADER}")?;
            f.sync_data()?;
        }
        cache_file = Some(f);
    }
    let resumed_rows = records.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")?;

    let checkpoints = config.checkpoints();
    let mut chunk_start = records.len();
    for &cp in &checkpoints {
        let chunk_end = primes.count_upto(cp);
        if chunk_end <= chunk_start {
            continue;
        }
        let chunk = &primes.primes[chunk_start..chunk_end];
        let results: Vec<rank16_core::Result<PrimeRecord>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&p| {
                    let opts = RecordOptions {
                        spin_beta: spin_set.contains(&p),
                        ..base
                    };
                    build_record(p, &opts, &spf)
                })
                .collect()
        });
        // order-preserving merge; surface the smallest offending prime
        for res in results {
            let rec = res?;
            if let Some(f) = cache_file.as_mut() {
                writeln!(f, "{}", render_row(&rec))?;
            }
            records.push(rec);
        }
        if let Some(f) = cache_file.as_mut() {
            f.sync_data()?;
        }
        chunk_start = chunk_end;
    }

    let csv = render_csv(&records);
    let report = build_report(&records, config, &csv)?;
    Ok(ScanOutcome {
        records,
        report,
        csv,
        resumed_rows,
    })
}

/// Read cache rows, checking they form a prefix of the expected prime
/// sequence.
fn load_cache(path: &Path, primes: &[u64]) -> Result<Vec<PrimeRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let content = std::fs::read_to_string(path)
        .with_context(|| format!("reading cache {}", path.display()))?;
    if content.is_empty() {
        return Ok(Vec::new());
    }
    let rows = parse_csv(&content).with_context(|| format!("cache {}", path.display()))?;
    if rows.len() > primes.len() {
        bail!(
            "cache {} has {} rows but the scan covers only {} primes",
            path.display(),
            rows.len(),
            primes.len()
        );
    }
    for (row, &p) in rows.iter().zip(primes) {
        if row.p != p {
            bail!(
                "cache {} is not a prefix of this scan: row p={} where {} expected",
                path.display(),
                row.p,
                p
            );
        }
    }
    Ok(rows)
}
