//! Fixture corpora and binary helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FEMALE: &[&str] = &[
    "Mary",
    "Maria",
    "Mary A",
    "Marie",
    "Polly",
    "Elizabeth",
    "Eliza",
    "Betsy",
    "Sarah",
    "Sally",
    "Ann",
    "Anne",
    "Hannah",
    "Jane",
    "Margaret",
    "Emily",
    "Susan",
    "Christina",
    "Catherine",
    "Zelda",
    "Ruth",
    "Esther",
    "Alice",
    "Martha",
    "Frances",
];
const MALE: &[&str] = &[
    "John", "Jno", "William", "Wm", "James", "Thomas", "George", "Charles", "Robert", "Michael",
    "David", "Paul", "Mark", "Francis", "Henry", "Edward", "Samuel", "Joseph", "Richard", "Peter",
];
const JUNK: &[&str] = &["J", "Mrs", "Widow", "Mr", "Infant", "W.", "1st child"];
const KINDS: &[&str] = &[
    "census",
    "marriage",
    "adult_roster",
    "birth_register",
    "other",
];

/// Deterministic record file with `rows` data rows: skewed name choice,
/// spelling variants, generic and single-letter names, a sprinkling of
/// malformed rows and rare invented names.
pub fn synthetic_corpus(rows: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("name,sex,age,year,kind,location,native_born\n");
    for i in 0..rows {
        let female = rng.gen_bool(0.5);
        let pool = if female { FEMALE } else { MALE };
        let u: f64 = rng.gen();
        let name = match rng.gen_range(0..100) {
            0..=2 => JUNK[rng.gen_range(0..JUNK.len())].to_owned(),
            3..=5 => format!("Q{}", invented(rng.gen_range(0..500))),
            _ => pool[(u * u * u * pool.len() as f64) as usize].to_owned(),
        };
        let sex = if rng.gen_bool(0.01) {
            "U"
        } else if female {
            "F"
        } else {
            "M"
        };
        let kind = KINDS[rng.gen_range(0..KINDS.len())];
        let age = if kind == "census" || rng.gen_bool(0.5) {
            rng.gen_range(0..90).to_string()
        } else {
            String::new()
        };
        let year = 1800 + 10 * rng.gen_range(0..8);
        let native = ["", "true", "false"][rng.gen_range(0..3)];
        if i % 997 == 0 {
            out.push_str(&format!("{name},X,{age},{year},{kind},,\n"));
        } else {
            out.push_str(&format!(
                "{name},{sex},{age},{year},{kind},Parish {},{native}\n",
                i % 13
            ));
        }
    }
    out
}

fn invented(mut i: usize) -> String {
    let mut s = String::new();
    loop {
        s.push((b'A' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            return s;
        }
    }
}

/// Record file from `(name, sex, age, year)` rows, census kind.
pub fn corpus_of(rows: &[(&str, &str, u32, i32)]) -> String {
    let mut out = String::from("name,sex,age,year,kind,location,native_born\n");
    for (name, sex, age, year) in rows {
        out.push_str(&format!("{name},{sex},{age},{year},census,,\n"));
    }
    out
}

pub fn onomast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onomast"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn write(dir: &Path, file: &str, contents: &str) -> String {
    let path = dir.join(file);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}
