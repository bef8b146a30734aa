//! Oscillation tables: exact running sums of `alpha_p`, `beta_p`,
//! `alpha_p·beta_p` over the split-complete primes, alongside the spin
//! partial sums, at geometric checkpoints. The log-log slope fit is
//! descriptive output, never an assertion; the power-saving exponents the
//! sums are conjectured to obey are indistinguishable at these ranges.

use anyhow::{bail, Context, Result};
use rank16_core::arith::{is_split_complete, sieve_primes, PrimeList};
use rank16_core::invariants::PrimeRecord;
use rank16_core::quadforms::{class_number_charsum_spf, SpfTable};
use rank16_core::spin::{partial_sums, CharacterTable, SpinCheckpoint};
use rank16_core::zsqrt2::pell_rep;
use rayon::prelude::*;

use crate::config::checkpoints_for;

#[derive(Debug, Clone, Copy)]
pub struct OscRow {
    pub x: u64,
    pub pi_x: u64,
    /// split-complete primes up to x
    pub star_count: u64,
    pub sum_alpha: i64,
    pub sum_beta: i64,
    pub sum_alpha_beta: i64,
    pub spin: SpinCheckpoint,
}

/// `(p, alpha, beta)` for every split-complete prime, by the symbol routes:
/// `alpha = [u/p]_4`, `beta = (-1)^{(p-1)/16}·(-1)^{v/4}·(v/u)`. These
/// routes are pinned to the class-number definitions by the scan suites.
pub fn star_values(primes: &PrimeList, workers: usize) -> Result<Vec<(u64, i8, i8)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    let vals: Vec<rank16_core::Result<Option<(u64, i8, i8)>>> = pool.install(|| {
        primes
            .primes
            .par_iter()
            .map(|&p| {
                if p == 2 || !is_split_complete(p)? {
                    return Ok(None);
                }
                let pell = pell_rep(p)?;
                let alpha = rank16_core::arith::quartic_symbol(pell.u, p)?.value;
                let sign = if (((p - 1) / 16) as i64 + pell.v / 4) % 2 == 0 {
                    1i8
                } else {
                    -1
                };
                let beta = sign * rank16_core::arith::jacobi(pell.v, pell.u)? as i8;
                Ok(Some((p, alpha, beta)))
            })
            .collect()
    });
    let mut out = Vec::new();
    for v in vals {
        if let Some(t) = v? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Star sums taken from finished scan records instead of recomputing.
pub fn star_values_from_records(records: &[PrimeRecord]) -> Vec<(u64, i8, i8)> {
    records
        .iter()
        .filter_map(|r| match (r.alpha, r.beta) {
            (Some(a), Some(b)) => Some((r.p, a, b)),
            _ => None,
        })
        .collect()
}

/// Build the checkpoint table for one character pair.
pub fn oscillation(
    x_max: u64,
    chi_index: usize,
    psi_index: usize,
    workers: usize,
) -> Result<Vec<OscRow>> {
    let primes = sieve_primes(x_max)?;
    let stars = star_values(&primes, workers)?;
    build_table(
        &primes,
        &stars,
        chi_index,
        psi_index,
        &checkpoints_for(x_max),
    )
}

pub fn build_table(
    primes: &PrimeList,
    stars: &[(u64, i8, i8)],
    chi_index: usize,
    psi_index: usize,
    checkpoints: &[u64],
) -> Result<Vec<OscRow>> {
    let chis = CharacterTable::mod8_all();
    let psis = CharacterTable::mod16_all();
    let (Some(chi), Some(psi)) = (chis.get(chi_index), psis.get(psi_index)) else {
        bail!("character index out of range: chi {chi_index} (0..4), psi {psi_index} (0..8)");
    };
    let spin_rows = partial_sums(primes, chi, psi, checkpoints)?;
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut star_pos = 0usize;
    let (mut sa, mut sb, mut sab, mut count) = (0i64, 0i64, 0i64, 0u64);
    for (i, &x) in checkpoints.iter().enumerate() {
        while star_pos < stars.len() && stars[star_pos].0 <= x {
            let (_, a, b) = stars[star_pos];
            sa += a as i64;
            sb += b as i64;
            sab += (a * b) as i64;
            count += 1;
            star_pos += 1;
        }
        rows.push(OscRow {
            x,
            pi_x: primes.count_upto(x) as u64,
            star_count: count,
            sum_alpha: sa,
            sum_beta: sb,
            sum_alpha_beta: sab,
            spin: spin_rows[i],
        });
    }
    Ok(rows)
}

pub const OSC_CSV_HEADER: &str = "x,pi_x,star_count,sum_alpha,sum_beta,sum_alpha_beta,\
spin_prime_terms,spin_prime_re2,spin_prime_im2,spin_ideal_terms,spin_ideal_re2,spin_ideal_im2";

pub fn render_osc_csv(rows: &[OscRow]) -> String {
    let mut out = String::from(OSC_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.x,
            r.pi_x,
            r.star_count,
            r.sum_alpha,
            r.sum_beta,
            r.sum_alpha_beta,
            r.spin.prime_terms,
            r.spin.prime_re2,
            r.spin.prime_im2,
            r.spin.ideal_terms,
            r.spin.ideal_re2,
            r.spin.ideal_im2,
        ));
    }
    out
}

/// Least-squares slope of `log|S|` against `log X` over checkpoints with
/// `S != 0`. Descriptive only.
pub fn slope_fit(points: &[(u64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, s)| s.abs() > 0.0)
        .map(|&(x, s)| ((x as f64).ln(), s.abs().ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Check that the symbol routes used here agree with the class-number
/// definitions on a range (used by `verify` at small bounds).
pub fn audit_star_values(stars: &[(u64, i8, i8)], spf: &SpfTable) -> Result<()> {
    for &(p, alpha, beta) in stars {
        let h2 = class_number_charsum_spf(-8 * p as i64, spf)?;
        let h1 = class_number_charsum_spf(-4 * p as i64, spf)?;
        let a2 = if (h2.h / 8) % 2 == 0 { 1i8 } else { -1 };
        if a2 != alpha {
            bail!("alpha mismatch at p={p}");
        }
        let pell = pell_rep(p)?;
        let gauss = rank16_core::zsqrt2::two_squares(p)?;
        let two = rank16_core::zsqrt2::one_two_rep(p)?;
        let b1 =
            rank16_core::invariants::beta_routes_with(p, &gauss, &two, &pell, h1.h, h2.h, false)?;
        if b1 != beta {
            bail!("beta mismatch at p={p}");
        }
    }
    Ok(())
}
