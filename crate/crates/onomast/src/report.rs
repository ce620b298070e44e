//! Report emitters. CSV is the machine-readable form; markdown lays the same
//! rows out for reading side by side with published tables.
//!
//! Display precision: popularities to 0.1 percentage point, `I_s` to three
//! decimals, C1–C3 to four decimals, C4 as a whole percent. Rounding is half
//! away from zero and happens only here.

use onomast_core::commstats::CommResult;
use onomast_core::popstats::{PopularitySummary, SamplingVariability};
use onomast_core::powerlaw::PowerLawFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
}

pub const SUMMARY_HEADER: [&str; 7] = [
    "cohort",
    "sex",
    "top_name",
    "top_pop",
    "topk_pop",
    "info_Is",
    "sample_size",
];
pub const COMM_HEADER: [&str; 9] = [
    "span",
    "sex",
    "c1",
    "c2",
    "c3",
    "c4_pct",
    "new_topk",
    "turnover_pa",
    "notes",
];
pub const FIT_HEADER: [&str; 7] = [
    "cohort",
    "sex",
    "slope",
    "intercept",
    "r2",
    "points",
    "min_count",
];
pub const SERIES_HEADER: [&str; 2] = ["log2_rank", "log2_freq"];
pub const SAMPLEVAR_HEADER: [&str; 5] =
    ["probability_pct", "sample_size", "expected", "sd", "sd_pct"];

pub fn round_to(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, round_to(x, decimals as i32))
}

/// Fraction as a percent with one decimal, without the sign.
pub fn percent(fraction: f64) -> String {
    fixed(fraction * 100.0, 1)
}

/// Integer with thousands separators: `100000` → `100,000`.
pub fn thousands(value: f64) -> String {
    let n = round_to(value, 0) as i64;
    let digits = n.unsigned_abs().to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    if n < 0 {
        out.insert(0, '-');
    }
    out
}

/// Whole numbers print without decimals; averaged counts keep up to two.
pub fn count(value: f64) -> String {
    if value.fract() == 0.0 {
        format!("{}", value as i64)
    } else {
        let s = fixed(value, 2);
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

fn csv_table<const N: usize>(header: [&str; N], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn markdown_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out
}

pub fn summaries(items: &[PopularitySummary], format: Format) -> String {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|s| {
                    vec![
                        s.cohort.span_label(),
                        s.cohort.sex.code().to_string(),
                        s.top_name.to_string(),
                        fixed(s.top_pop, 3),
                        fixed(s.topk_pop, 3),
                        fixed(s.info_is, 3),
                        s.sample_size.to_string(),
                    ]
                })
                .collect();
            csv_table(SUMMARY_HEADER, &rows)
        }
        Format::Markdown => {
            let k = items.first().map_or(10, |s| s.k);
            let header = [
                "Birth Year".to_owned(),
                "Sex".to_owned(),
                "Top Name".to_owned(),
                "Pop.".to_owned(),
                format!("Top {k} Pop."),
                format!("Top {k} Info I_s"),
                "Sample Size".to_owned(),
            ];
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|s| {
                    vec![
                        s.cohort.span_label(),
                        s.cohort.sex.code().to_string(),
                        title_case(s.top_name.as_str()),
                        format!("{}%", percent(s.top_pop)),
                        format!("{}%", percent(s.topk_pop)),
                        fixed(s.info_is, 3),
                        thousands(s.sample_size as f64),
                    ]
                })
                .collect();
            markdown_table(&header, &rows)
        }
    }
}

fn title_case(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_string() + &chars.as_str().to_lowercase(),
        None => String::new(),
    }
}

/// A communication result with its labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CommRow {
    pub span: String,
    pub sex: String,
    pub result: CommResult,
}

impl CommRow {
    fn notes(&self) -> String {
        if self.result.fallback_count > 0 {
            "fallback=1".to_owned()
        } else {
            String::new()
        }
    }
}

pub fn comm(rows: &[CommRow], format: Format) -> String {
    let cells = |r: &CommRow| {
        vec![
            r.span.clone(),
            r.sex.clone(),
            fixed(r.result.c1, 4),
            fixed(r.result.c2, 4),
            fixed(r.result.c3, 4),
            fixed(r.result.c4, 0),
            count(r.result.new_topk),
            r.result
                .turnover_pa
                .map(|t| fixed(t, 4))
                .unwrap_or_default(),
            r.notes(),
        ]
    };
    match format {
        Format::Csv => csv_table(COMM_HEADER, &rows.iter().map(cells).collect::<Vec<_>>()),
        Format::Markdown => {
            let k = rows.first().map_or(10, |r| r.result.k);
            let header: Vec<String> = ["Time Span", "Sex", "C1", "C2", "C3", "C4"]
                .iter()
                .map(|s| s.to_string())
                .chain([
                    format!("New Top {k}"),
                    "Turnover p.a.".to_owned(),
                    "Notes".to_owned(),
                ])
                .collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut c = cells(r);
                    c[5].push('%');
                    c
                })
                .collect();
            markdown_table(&header, &body)
        }
    }
}

/// A fit with its cohort labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub cohort: String,
    pub sex: String,
    pub fit: PowerLawFit,
}

pub fn fits(rows: &[FitRow], format: Format) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.cohort.clone(),
                r.sex.clone(),
                fixed(r.fit.slope, 4),
                fixed(r.fit.intercept, 4),
                fixed(r.fit.r_squared, 4),
                r.fit.points_used.to_string(),
                r.fit.min_count.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Csv => csv_table(FIT_HEADER, &body),
        Format::Markdown => {
            let header: Vec<String> = [
                "Birth Year",
                "Sex",
                "Slope",
                "Intercept",
                "R²",
                "Points",
                "Min Count",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            markdown_table(&header, &body)
        }
    }
}

/// Chart-ready `(log2 rank, log2 frequency)` pairs.
pub fn series(points: &[(f64, f64)]) -> String {
    let body: Vec<Vec<String>> = points
        .iter()
        .map(|&(x, y)| vec![fixed(x, 6), fixed(y, 6)])
        .collect();
    csv_table(SERIES_HEADER, &body)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleVarRow {
    pub p: f64,
    pub n: u64,
    pub v: SamplingVariability,
}

pub fn samplevar(rows: &[SampleVarRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        percent(r.p),
                        r.n.to_string(),
                        fixed(r.v.expected, 0),
                        fixed(r.v.sd, 0),
                        percent(r.v.sd_fraction),
                    ]
                })
                .collect();
            csv_table(SAMPLEVAR_HEADER, &body)
        }
        Format::Markdown => {
            let header: Vec<String> = [
                "Name Probability",
                "Sample Size",
                "Expected Name Freq.",
                "Standard Deviation",
                "Std. Dev. (% of sample)",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{}%", percent(r.p)),
                        thousands(r.n as f64),
                        thousands(r.v.expected),
                        thousands(r.v.sd),
                        format!("{}%", percent(r.v.sd_fraction)),
                    ]
                })
                .collect();
            markdown_table(&header, &body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_grouping() {
        assert_eq!(fixed(1.5, 0), "2");
        assert_eq!(fixed(2.5, 0), "3");
        assert_eq!(fixed(-0.00001, 4), "0.0000");
        assert_eq!(percent(0.0003843), "0.0");
        assert_eq!(percent(0.239), "23.9");
        assert_eq!(thousands(100_000.0), "100,000");
        assert_eq!(thousands(1500.0), "1,500");
        assert_eq!(thousands(126.49), "126");
        assert_eq!(count(10.0), "10");
        assert_eq!(count(1.5), "1.5");
        assert_eq!(title_case("ELIZABET"), "Elizabet");
    }
}
