//! Coding-table files: `variant,canonical,sex_override` with the override
//! `F`, `M` or empty.

use std::io::Read;

use onomast_core::standardize::CodingTable;
use onomast_core::Sex;

use crate::{Error, Result};

/// Small demonstration table covering common variants of the most popular
/// English given names.
pub const DEMO_TABLE_CSV: &str = include_str!("../data/demo_coding_table.csv");
pub const DEMO_TABLE_VERSION: &str = "demo-1";

pub fn load_coding_table<R: Read>(input: R, version_id: &str) -> Result<CodingTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    let col = |name: &'static str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or(Error::MissingColumn(name))
    };
    let (variant, canonical, sex) = (col("variant")?, col("canonical")?, col("sex_override")?);

    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("").to_owned();
        let sex_override = match field(sex).as_str() {
            "" => None,
            code => match Sex::from_code(code) {
                Some(s @ (Sex::Female | Sex::Male)) => Some(s),
                _ => {
                    return Err(Error::CodingTable {
                        line,
                        message: format!("bad sex_override {code:?}"),
                    })
                }
            },
        };
        rows.push((field(variant), field(canonical), sex_override));
    }
    CodingTable::from_entries(
        version_id,
        rows.iter().map(|(v, c, s)| (v.as_str(), c.as_str(), *s)),
    )
    .map_err(|e| Error::CodingTable {
        line: 0,
        message: e.to_string(),
    })
}

pub fn demo_table() -> CodingTable {
    load_coding_table(DEMO_TABLE_CSV.as_bytes(), DEMO_TABLE_VERSION).expect("demo table is valid")
}
