//! The scan cache is the CSV artifact itself: fixed column order, one row
//! per prime ascending, append-only, fsynced at checkpoints. Rendering and
//! parsing round-trip byte-exactly.

use anyhow::{bail, Context, Result};
use rank16_core::invariants::{CellLabel, PrimeRecord};
use rank16_core::quadforms::{ClassData, Method, PellClass};

pub const CSV_HEADER: &str =
    "p,split,a,b,c,d,u,v,g,h,h_neg_p,h_neg_2p,h_plus_2p,E,alpha,beta,hasse_Q,cell";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_row(r: &PrimeRecord) -> String {
    let mut cols: Vec<String> = Vec::with_capacity(18);
    cols.push(r.p.to_string());
    cols.push(if r.split_complete { "1" } else { "0" }.to_string());
    cols.push(opt(r.gauss.map(|g| g.a)));
    cols.push(opt(r.gauss.map(|g| g.b)));
    cols.push(opt(r.two.map(|t| t.c)));
    cols.push(opt(r.two.map(|t| t.d)));
    cols.push(opt(r.pell.map(|u| u.u)));
    cols.push(opt(r.pell.map(|u| u.v)));
    cols.push(opt(r.gh.map(|g| g.g)));
    cols.push(opt(r.gh.map(|g| g.h)));
    cols.push(opt(r.h_neg_p.map(|h| h.h)));
    cols.push(opt(r.h_neg_2p.map(|h| h.h)));
    cols.push(opt(r.h_plus_2p.map(|h| h.h)));
    cols.push(opt(r.e.map(|e| e.value())));
    cols.push(opt(r.alpha));
    cols.push(opt(r.beta));
    cols.push(opt(r.hasse_q));
    cols.push(r.cell.map(|c| c.as_str()).unwrap_or_default().to_string());
    cols.join(",")
}

pub fn render_csv(records: &[PrimeRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&render_row(r));
        out.push('\n');
    }
    out
}

fn parse_opt<T: std::str::FromStr>(s: &str, what: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if s.is_empty() {
        Ok(None)
    } else {
        match s.parse::<T>() {
            Ok(v) => Ok(Some(v)),
            Err(e) => bail!("bad {what} field {s:?}: {e}"),
        }
    }
}

pub fn parse_row(line: &str) -> Result<PrimeRecord> {
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != 18 {
        bail!("expected 18 columns, found {}: {line:?}", cols.len());
    }
    let p: u64 = cols[0].parse().context("p column")?;
    let split_complete = match cols[1] {
        "1" => true,
        "0" => false,
        other => bail!("bad split flag {other:?}"),
    };
    let class = |h: Option<u64>, disc: i64, method: Method| {
        h.map(|h| ClassData {
            discriminant: disc,
            h,
            method,
        })
    };
    let a: Option<i64> = parse_opt(cols[2], "a")?;
    let b: Option<i64> = parse_opt(cols[3], "b")?;
    let c: Option<i64> = parse_opt(cols[4], "c")?;
    let d: Option<i64> = parse_opt(cols[5], "d")?;
    let u: Option<i64> = parse_opt(cols[6], "u")?;
    let v: Option<i64> = parse_opt(cols[7], "v")?;
    let g: Option<i64> = parse_opt(cols[8], "g")?;
    let h: Option<i64> = parse_opt(cols[9], "h")?;
    let e = match parse_opt::<i64>(cols[13], "E")? {
        None => None,
        Some(val) => {
            Some(PellClass::from_value(val).with_context(|| format!("bad E value {val}"))?)
        }
    };
    let cell = match cols[17] {
        "" => None,
        s => Some(CellLabel::parse(s).with_context(|| format!("bad cell {s:?}"))?),
    };
    Ok(PrimeRecord {
        p,
        split_complete,
        gauss: a
            .zip(b)
            .map(|(a, b)| rank16_core::zsqrt2::GaussRep { a, b }),
        two: c.zip(d).map(|(c, d)| rank16_core::zsqrt2::TwoRep { c, d }),
        pell: u.zip(v).map(|(u, v)| rank16_core::zsqrt2::PellRep { u, v }),
        gh: g.zip(h).map(|(g, h)| rank16_core::zsqrt2::GHPair { g, h }),
        h_neg_p: class(
            parse_opt(cols[10], "h_neg_p")?,
            -4 * p as i64,
            Method::CharacterSum,
        ),
        h_neg_2p: class(
            parse_opt(cols[11], "h_neg_2p")?,
            -8 * p as i64,
            Method::CharacterSum,
        ),
        h_plus_2p: class(
            parse_opt(cols[12], "h_plus_2p")?,
            8 * p as i64,
            Method::Enumeration,
        ),
        e,
        alpha: parse_opt(cols[14], "alpha")?,
        beta: parse_opt(cols[15], "beta")?,
        hasse_q: parse_opt(cols[16], "hasse_Q")?,
        cell,
        verdicts: Vec::new(),
    })
}

/// Parse a whole cache file (header plus rows).
pub fn parse_csv(content: &str) -> Result<Vec<PrimeRecord>> {
    let mut lines = content.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => bail!("bad or missing CSV header: {other:?}"),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        out.push(parse_row(line).with_context(|| format!("row {}", i + 1))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rank16_core::invariants::{build_record, RecordOptions};
    use rank16_core::quadforms::SpfTable;

    #[test]
    fn row_round_trip_is_byte_exact() {
        let spf = SpfTable::new(4 * 200 + 1).unwrap();
        let opts = RecordOptions::default();
        for p in [2u64, 3, 5, 7, 17, 97, 113, 127, 193] {
            let rec = build_record(p, &opts, &spf).unwrap();
            let row = render_row(&rec);
            let parsed = parse_row(&row).unwrap();
            assert_eq!(render_row(&parsed), row, "p={p}");
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_csv("not,a,header\n1,2\n").is_err());
        assert!(parse_row("7,2,,,,,,,,,,,,,,,,").is_err());
        assert!(parse_row("7,0,,,,,,,,,,,,9,,,1,").is_err()); // E=9 invalid
    }
}
