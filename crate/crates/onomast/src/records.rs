//! Record files: `name,sex,age,year,kind,location,native_born`.
//!
//! Empty fields are absent values. `sex` is `F`, `M` or `U`; `kind` is one of
//! `census`, `marriage`, `adult_roster`, `birth_register`, `other` and
//! defaults to `census` when the column is missing. Rows that cannot be
//! turned into a [`NameRecord`] are kept in a rejection list with a reason.

use std::io::{Read, Write};

use onomast_core::corpus::{
    NameRecord, RecordKind, Rejection, MAX_AGE, MAX_RECORD_YEAR, MIN_RECORD_YEAR,
};
use onomast_core::Sex;
use rayon::prelude::*;

use crate::{Error, Result};

pub const RECORD_HEADER: [&str; 7] = [
    "name",
    "sex",
    "age",
    "year",
    "kind",
    "location",
    "native_born",
];

const NAME: usize = 0;
const SEX: usize = 1;
const AGE: usize = 2;
const YEAR: usize = 3;
const KIND: usize = 4;
const LOCATION: usize = 5;
const NATIVE: usize = 6;

/// One data row, fields reordered to [`RECORD_HEADER`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    /// 1-based line in the input, header included.
    pub line: u64,
    pub fields: [String; 7],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowRejection {
    pub row: RawRow,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedRecords {
    pub records: Vec<NameRecord>,
    pub rejected: Vec<RowRejection>,
}

/// Splits the input into rows, mapping the header onto the known columns.
/// Undecodable rows are reported, not dropped.
pub fn read_rows<R: Read>(input: R) -> Result<(Vec<RawRow>, Vec<RowRejection>)> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.byte_headers()?.clone();
    let mut columns = [None; 7];
    for (i, col) in header.iter().enumerate() {
        let col = String::from_utf8_lossy(col);
        let col = col
            .trim_start_matches('\u{feff}')
            .trim()
            .to_ascii_lowercase();
        if let Some(pos) = RECORD_HEADER.iter().position(|h| *h == col) {
            columns[pos] = Some(i);
        }
    }
    for (pos, name) in [(NAME, "name"), (SEX, "sex"), (YEAR, "year")] {
        if columns[pos].is_none() {
            return Err(Error::MissingColumn(name));
        }
    }

    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    let mut record = csv::ByteRecord::new();
    while reader.read_byte_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        let mut fields: [String; 7] = Default::default();
        let mut bad_utf8 = false;
        for (pos, col) in columns.iter().enumerate() {
            if let Some(bytes) = col.and_then(|i| record.get(i)) {
                match std::str::from_utf8(bytes) {
                    Ok(s) => fields[pos] = s.to_owned(),
                    Err(_) => {
                        fields[pos] = String::from_utf8_lossy(bytes).into_owned();
                        bad_utf8 = true;
                    }
                }
            }
        }
        let row = RawRow { line, fields };
        if bad_utf8 {
            rejected.push(RowRejection {
                row,
                reason: "invalid_utf8",
            });
        } else if record.len() != header.len() {
            rejected.push(RowRejection {
                row,
                reason: "field_count",
            });
        } else {
            rows.push(row);
        }
    }
    Ok((rows, rejected))
}

fn parse_bool(text: &str) -> Option<bool> {
    match text.to_ascii_lowercase().as_str() {
        "true" | "t" | "y" | "yes" | "1" => Some(true),
        "false" | "f" | "n" | "no" | "0" => Some(false),
        _ => None,
    }
}

fn optional(text: &str) -> Option<&str> {
    let t = text.trim();
    (!t.is_empty()).then_some(t)
}

/// Converts one row; the error is the rejection reason.
pub fn parse_row(row: &RawRow) -> std::result::Result<NameRecord, &'static str> {
    let f = &row.fields;
    let raw_name = optional(&f[NAME]).ok_or("missing_name")?;
    let sex = Sex::from_code(&f[SEX]).ok_or("bad_sex")?;
    let year_text = optional(&f[YEAR]).ok_or("missing_year")?;
    let record_year: i32 = year_text.parse().map_err(|_| "bad_year")?;
    if !(MIN_RECORD_YEAR..=MAX_RECORD_YEAR).contains(&record_year) {
        return Err("year_out_of_range");
    }
    let age = match optional(&f[AGE]) {
        None => None,
        Some(text) => {
            let age: i64 = text.parse().map_err(|_| "bad_age")?;
            if !(0..=MAX_AGE as i64).contains(&age) {
                return Err("age_out_of_range");
            }
            Some(age as u32)
        }
    };
    let record_kind = match optional(&f[KIND]) {
        None => RecordKind::Census,
        Some(text) => RecordKind::parse(text).ok_or("bad_kind")?,
    };
    let native_born = match optional(&f[NATIVE]) {
        None => None,
        Some(text) => Some(parse_bool(text).ok_or("bad_native_born")?),
    };
    Ok(NameRecord {
        raw_name: raw_name.to_owned(),
        sex,
        age,
        record_year,
        record_kind,
        location: optional(&f[LOCATION]).map(str::to_owned),
        native_born,
    })
}

/// Converts rows on the current rayon pool; output order follows input order.
pub fn parse_rows(rows: Vec<RawRow>, mut rejected: Vec<RowRejection>) -> ParsedRecords {
    let results: Vec<_> = rows
        .into_par_iter()
        .with_min_len(1024)
        .map(|row| parse_row(&row).map_err(|reason| Box::new(RowRejection { row, reason })))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(record) => records.push(record),
            Err(rej) => rejected.push(*rej),
        }
    }
    rejected.sort_by_key(|r| r.row.line);
    ParsedRecords { records, rejected }
}

pub fn parse_records<R: Read>(input: R) -> Result<ParsedRecords> {
    let (rows, rejected) = read_rows(input)?;
    Ok(parse_rows(rows, rejected))
}

fn record_fields(record: &NameRecord) -> [String; 7] {
    [
        record.raw_name.clone(),
        record.sex.code().to_string(),
        record.age.map(|a| a.to_string()).unwrap_or_default(),
        record.record_year.to_string(),
        record.record_kind.as_str().to_owned(),
        record.location.clone().unwrap_or_default(),
        record
            .native_born
            .map(|b| if b { "true" } else { "false" }.to_owned())
            .unwrap_or_default(),
    ]
}

pub fn write_records<'a, W, I>(out: W, records: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a NameRecord>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record(record_fields(r))?;
    }
    w.flush().map_err(|e| Error::io("<records>", e))?;
    Ok(())
}

/// Rejection report: the record columns plus `reason`. Parse failures come
/// first (in line order), then filter rejections (in input order).
pub fn write_rejections<W: Write>(
    out: W,
    parse_failures: &[RowRejection],
    filtered: &[Rejection],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = RECORD_HEADER.to_vec();
    header.push("reason");
    w.write_record(&header)?;
    for r in parse_failures {
        let mut fields: Vec<&str> = r.row.fields.iter().map(String::as_str).collect();
        fields.push(r.reason);
        w.write_record(&fields)?;
    }
    for r in filtered {
        let mut fields = record_fields(&r.record).to_vec();
        fields.push(r.reason.as_str().to_owned());
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| Error::io("<rejections>", e))?;
    Ok(())
}
