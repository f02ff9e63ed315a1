//! CSV and JSON forms of rank tables, sequence listings and report rows.
//!
//! Integers that can exceed 64 bits are written as decimal strings in both
//! formats.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_bigint::BigInt;
use oddbal_core::enumerator::OddBalancedSequence;
use oddbal_core::{Laurent, RankTable, Ring};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
}

/// Serde helpers writing floats as plain decimal strings (`Display` form:
/// shortest round-trip digits, never an exponent).
pub mod plain {
    use serde::Serializer;

    pub fn f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn opt_f64<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One `v(m, n)` entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub n: usize,
    pub m: i64,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTableDocument {
    pub max_n: usize,
    pub entries: Vec<CountRecord>,
}

pub fn count_records(table: &RankTable) -> Vec<CountRecord> {
    table
        .entries()
        .map(|(n, m, count)| CountRecord {
            n,
            m,
            count: count.to_string(),
        })
        .collect()
}

pub fn write_rank_table<W: Write>(
    table: &RankTable,
    format: Format,
    out: W,
) -> Result<(), IoError> {
    let records = count_records(table);
    match format {
        Format::Csv => write_csv(&records, out),
        Format::Json => write_json(
            &RankTableDocument {
                max_n: table.max_n(),
                entries: records,
            },
            out,
        ),
    }
}

/// Rebuilds a table from `n,m,count` rows. Missing `(n, m)` pairs are zero;
/// every `n` up to the largest one seen gets a row.
pub fn read_rank_table_csv<R: Read>(reader: R) -> Result<RankTable, IoError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut rows: BTreeMap<usize, Laurent> = BTreeMap::new();
    for (i, rec) in rdr.deserialize::<CountRecord>().enumerate() {
        let rec = rec?;
        let count: BigInt = rec.count.parse().map_err(|_| IoError::Invalid {
            line: i + 2,
            reason: format!("`{}` is not an integer", rec.count),
        })?;
        let row = rows.entry(rec.n).or_insert_with(Laurent::zero);
        row.add_assign_ref(&Laurent::monomial(count, rec.m));
    }
    let max_n = rows.keys().next_back().copied().ok_or(IoError::Invalid {
        line: 1,
        reason: "no rows".into(),
    })?;
    Ok(RankTable::from_rows(
        (0..=max_n)
            .map(|n| rows.remove(&n).unwrap_or_else(Laurent::zero))
            .collect(),
    ))
}

/// One enumerated sequence as a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub n: u64,
    pub size: u64,
    pub rank: i64,
    pub peak: u64,
    pub parts: Vec<u64>,
}

impl From<&OddBalancedSequence> for SequenceRecord {
    fn from(s: &OddBalancedSequence) -> Self {
        Self {
            n: s.n(),
            size: s.size(),
            rank: s.rank(),
            peak: s.peak,
            parts: s.flatten(),
        }
    }
}

pub fn write_json_lines<T: Serialize, W: Write>(records: &[T], mut out: W) -> Result<(), IoError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<(), IoError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Records in either format; JSON output is a single array.
pub fn write_records<T: Serialize, W: Write>(
    records: &[T],
    format: Format,
    out: W,
) -> Result<(), IoError> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}
