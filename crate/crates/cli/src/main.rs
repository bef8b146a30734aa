use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rank16_cli::cache::{parse_csv, render_csv};
use rank16_cli::config::{ScanConfig, SuiteToggles};
use rank16_cli::osc::{oscillation, render_osc_csv, slope_fit};
use rank16_cli::report::{build_report, render_json};
use rank16_cli::scan::run_scan;
use rank16_cli::verify;
use rank16_core::invariants::{build_record, RecordOptions};
use rank16_core::quadforms::{pell_invariant, SpfTable};

/// Exact arithmetic scans for the 2-power ranks of the class groups
/// attached to 2p: Pell invariants, class numbers by independent routes,
/// the alpha/beta sign invariants, and spin sums over Z[√2].
#[derive(Parser)]
#[command(name = "rank16", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full per-prime scan with identity suites, CSV cache, and a JSON
    /// density report
    Scan(ScanArgs),
    /// Run one verification suite standalone
    Verify(VerifyArgs),
    /// Partial-sum (oscillation) table for the star sums and one spin pair
    Oscillation(OscArgs),
    /// Re-emit CSV or JSON from a scan cache
    Export(ExportArgs),
    /// Single-prime dossier
    Record(RecordArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Scan bound X (primes p ≤ X)
    #[arg(long, default_value_t = 100_000)]
    xmax: u64,
    /// Worker threads (0 = all cores); output bytes do not depend on this
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Append-only CSV cache; an interrupted scan resumes from it
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Where to write the standalone CSV copy
    #[arg(long, default_value = "rank16-scan.csv")]
    out_csv: PathBuf,
    /// Where to write the JSON density report
    #[arg(long, default_value = "rank16-report.json")]
    out_json: PathBuf,
    /// Skip class numbers (and the three-way check) for non-split p ≡ 1 mod 8
    #[arg(long)]
    no_split_suite: bool,
    /// Skip the 8-rank identity suite
    #[arg(long)]
    no_lw: bool,
    /// Skip the cell-prediction checks
    #[arg(long)]
    no_kw: bool,
    /// Skip the first-factor exponentiation check
    #[arg(long)]
    no_first_factor: bool,
    /// Compute h⁺(2p) only for split-complete primes
    #[arg(long)]
    no_hplus_all: bool,
    /// Spin beta route on every split-complete prime up to this bound
    #[arg(long, default_value_t = 100_000)]
    spin_full_below: u64,
    /// ...and on every k-th split-complete prime above it (0 = off)
    #[arg(long, default_value_t = 10)]
    spin_one_in: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: split, lw, kw, spin, classnum
    #[arg(long)]
    suite: String,
    /// Bound (primes for split/lw/kw, |D| for classnum; ignored by spin)
    #[arg(long)]
    xmax: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct OscArgs {
    #[arg(long, default_value_t = 100_000)]
    xmax: u64,
    /// Character index mod 8 (0..=3, 0 = trivial)
    #[arg(long, default_value_t = 0)]
    chi: usize,
    /// Character index mod 16 (0..=7, 0 = trivial)
    #[arg(long, default_value_t = 0)]
    psi: usize,
    /// Optional CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ExportArgs {
    /// Scan cache to read
    #[arg(long)]
    cache: PathBuf,
    /// csv or json
    #[arg(long)]
    format: String,
    /// Output path
    #[arg(long)]
    out: PathBuf,
    /// Scan bound for the JSON report (default: largest cached prime)
    #[arg(long)]
    xmax: Option<u64>,
}

#[derive(Args)]
struct RecordArgs {
    /// The prime to report on
    p: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Oscillation(args) => cmd_oscillation(args),
        Cmd::Export(args) => cmd_export(args),
        Cmd::Record(args) => cmd_record(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let violation = e.chain().any(|c| {
                matches!(c.downcast_ref::<rank16_core::Error>(),
                    Some(err) if err.is_violation())
            });
            if violation {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let config = ScanConfig {
        x_max: args.xmax,
        workers: args.workers,
        suites: SuiteToggles {
            split_classnum: !args.no_split_suite,
            lw: !args.no_lw,
            kw: !args.no_kw,
            first_factor: !args.no_first_factor,
            hplus_all: !args.no_hplus_all,
        },
        spin_full_below: args.spin_full_below,
        spin_one_in: args.spin_one_in,
        cache: args.cache.clone(),
    };
    let started = std::time::Instant::now();
    let outcome = run_scan(&config)?;
    // the cache file already holds the CSV; write the standalone copy too
    std::fs::write(&args.out_csv, &outcome.csv)
        .with_context(|| format!("writing {}", args.out_csv.display()))?;
    std::fs::write(&args.out_json, render_json(&outcome.report))
        .with_context(|| format!("writing {}", args.out_json.display()))?;

    let r = &outcome.report;
    println!(
        "scan X = {}: {} primes ({} odd)",
        r.x_max, r.pi_x, r.counts.odd_primes
    );
    if outcome.resumed_rows > 0 {
        println!("  resumed {} rows from cache", outcome.resumed_rows);
    }
    println!(
        "  E = -1 / +2 / -2 : {} / {} / {}  (δ = {:.4} / {:.4} / {:.4})",
        r.counts.e_minus_1,
        r.counts.e_plus_2,
        r.counts.e_minus_2,
        r.ratios.delta_e_minus_1,
        r.ratios.delta_e_plus_2,
        r.ratios.delta_e_minus_2
    );
    println!(
        "  split-complete: {} (density {:.5}, 1/16 = 0.06250)",
        r.counts.split_complete, r.ratios.split_density
    );
    println!(
        "  cells ++/+-/-+/--: {}/{}/{}/{}   16-rank count: {}",
        r.counts.cell_pp, r.counts.cell_pm, r.counts.cell_mp, r.counts.cell_mm, r.counts.rank16
    );
    for (k, v) in &r.suite_verdicts {
        println!("  suite {k}: {v}");
    }
    println!(
        "  wrote {} and {} in {:.1}s",
        args.out_csv.display(),
        args.out_json.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let lines = match args.suite.as_str() {
        "split" => verify::verify_split(args.xmax.unwrap_or(100_000), args.workers)?,
        "lw" => verify::verify_lw(args.xmax.unwrap_or(100_000), args.workers)?,
        "kw" => verify::verify_kw(args.xmax.unwrap_or(50_000), args.workers)?,
        "classnum" => verify::verify_classnum(args.xmax.unwrap_or(10_000), args.workers)?,
        "spin" => verify::verify_spin(args.workers)?,
        other => bail!("unknown suite {other:?} (use split|lw|kw|spin|classnum)"),
    };
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn cmd_oscillation(args: OscArgs) -> Result<()> {
    let rows = oscillation(args.xmax, args.chi, args.psi, args.workers)?;
    let csv = render_osc_csv(&rows);
    if let Some(path) = &args.out {
        std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{csv}");
    type Series = fn(&rank16_cli::osc::OscRow) -> f64;
    let series: [(&str, Series); 4] = [
        ("sum_alpha", |r| r.sum_alpha as f64),
        ("sum_beta", |r| r.sum_beta as f64),
        ("sum_alpha_beta", |r| r.sum_alpha_beta as f64),
        ("spin_prime", |r| {
            ((r.spin.prime_re2 as f64 / 2.0).powi(2) + (r.spin.prime_im2 as f64 / 2.0).powi(2))
                .sqrt()
        }),
    ];
    println!("# descriptive log-log slopes of |S(X)| (not assertions):");
    for (name, f) in &series {
        let pts: Vec<(u64, f64)> = rows.iter().map(|r| (r.x, f(r))).collect();
        match slope_fit(&pts) {
            Some(s) => println!("#   {name}: {s:.3}"),
            None => println!("#   {name}: undefined (all checkpoints zero)"),
        }
    }
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Result<()> {
    let content = std::fs::read_to_string(&args.cache)
        .with_context(|| format!("reading {}", args.cache.display()))?;
    let records = parse_csv(&content)?;
    if records.is_empty() {
        bail!("cache {} holds no rows", args.cache.display());
    }
    match args.format.as_str() {
        "csv" => {
            let csv = render_csv(&records);
            std::fs::write(&args.out, csv)
                .with_context(|| format!("writing {}", args.out.display()))?;
        }
        "json" => {
            let x_max = args.xmax.unwrap_or_else(|| records.last().unwrap().p);
            let config = ScanConfig {
                x_max,
                ..ScanConfig::default()
            };
            let csv = render_csv(&records);
            let report = build_report(&records, &config, &csv)?;
            std::fs::write(&args.out, render_json(&report))
                .with_context(|| format!("writing {}", args.out.display()))?;
        }
        other => bail!("unknown format {other:?} (use csv|json)"),
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_record(args: RecordArgs) -> Result<()> {
    let p = args.p;
    if !rank16_core::arith::is_prime(p) {
        bail!("{p} is not prime");
    }
    let spf = SpfTable::new(4 * p + 1)?;
    let rec = build_record(p, &RecordOptions::default(), &spf)?;
    println!("p = {p}");
    println!("  split-complete: {}", rec.split_complete);
    if let Some(g) = rec.gauss {
        println!("  a² + b² :  a = {}, b = {}", g.a, g.b);
    }
    if let Some(t) = rec.two {
        println!("  c² + 2d²:  c = {}, d = {}", t.c, t.d);
    }
    if let Some(u) = rec.pell {
        println!("  u² - 2v²:  u = {}, v = {}", u.u, u.v);
    }
    if let Some(gh) = rec.gh {
        println!("  2g² - h²:  g = {}, h = {}", gh.g, gh.h);
    }
    if let Some(h) = rec.h_neg_p {
        println!("  h(-p)  [disc {}] = {}", h.discriminant, h.h);
    }
    if let Some(h) = rec.h_neg_2p {
        println!("  h(-2p) [disc {}] = {}", h.discriminant, h.h);
    }
    if let Some(h) = rec.h_plus_2p {
        let (v2, odd) = rank16_core::quadforms::two_part(h.h);
        println!(
            "  h⁺(2p) [disc {}] = {} = 2^{v2}·{odd}",
            h.discriminant, h.h
        );
    }
    if p > 2 {
        let out = pell_invariant(p)?;
        println!(
            "  E_p = {}  witness x = {}, y = {}",
            out.e.value(),
            out.witness.0,
            out.witness.1
        );
    }
    if let Some(q) = rec.hasse_q {
        println!("  Hasse unit index Q = {q}");
    }
    if let (Some(a), Some(b)) = (rec.alpha, rec.beta) {
        println!(
            "  alpha = {a:+}, beta = {b:+}  (cell {})",
            rec.cell.unwrap().as_str()
        );
    }
    println!("  checks passed: {}", rec.verdicts.join(", "));
    Ok(())
}
