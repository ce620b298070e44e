//! Command-line interface.
//!
//! Every subcommand renders its whole output in memory and then writes it to
//! `--out` (or stdout), so a failed run leaves no partial report behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onomast_core::commstats::comm_tables;
use onomast_core::corpus::{Cohort, CohortSpec, FilterPolicy, NameRecord, RecordKind};
use onomast_core::popstats::{
    average_summaries, frequency_table, sampling_variability, summarize, DEFAULT_K,
};
use onomast_core::powerlaw::{
    conquest_model, fit_rank_frequency_top, rank_frequency_series, InfoConstraints, TopConstraints,
    CONQUEST_YEAR1, CONQUEST_YEAR2, DEFAULT_MIN_COUNT,
};
use onomast_core::standardize::CodingTable;
use onomast_core::synth::{simulate_births, SimulationConfig, RNG_ALGORITHM};
use onomast_core::{Error as CoreError, Sex};

use crate::coding::{demo_table, load_coding_table};
use crate::pipeline::{Pipeline, Source};
use crate::records::{write_records, write_rejections};
use crate::report::{self, CommRow, FitRow, Format, SampleVarRow};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "onomast",
    version,
    about = "Given-name popularity and communication statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Coding table CSV (`variant,canonical,sex_override`). Defaults to the
    /// built-in demonstration table; pass `none` for identity coding.
    #[arg(long, global = true, value_name = "PATH")]
    pub coding_table: Option<PathBuf>,

    /// Length of popularity lists.
    #[arg(long, global = true, default_value_t = DEFAULT_K)]
    pub k: usize,

    /// Minimum count for a name to enter a rank-frequency fit.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_COUNT)]
    pub min_count: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads (0 = one per core). Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, filter and standardize record files.
    Ingest(IngestArgs),
    /// Popularity summaries (top name, top-k share, I_s) per cohort.
    Stats(StatsArgs),
    /// Communication statistics C1–C4 between two cohorts.
    Comm(CommArgs),
    /// Log-log rank-frequency fits.
    Fit(FitArgs),
    /// Binomial sampling variability of a single name's count.
    Samplevar(SampleVarArgs),
    /// Communication between two constrained log-linear models.
    Conquest(ConquestArgs),
    /// Write a synthetic record file from a Simon urn process.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Record file; repeat for several sources. Statistics from several
    /// sources are averaged per cohort.
    #[arg(long = "input", short = 'i', required = true, value_name = "PATH")]
    pub inputs: Vec<PathBuf>,

    /// Extra generic names to reject (on top of MR, MRS, WIDOW, INFANT).
    #[arg(long = "generic", value_name = "NAME")]
    pub generic: Vec<String>,

    /// Keep single-letter names instead of rejecting them.
    #[arg(long)]
    pub keep_single_letter: bool,

    /// Reject records explicitly marked as not native-born.
    #[arg(long)]
    pub native_only: bool,
}

impl InputArgs {
    fn policy(&self) -> FilterPolicy {
        let mut policy = FilterPolicy {
            drop_single_letter: !self.keep_single_letter,
            require_native_born: self.native_only,
            ..FilterPolicy::default()
        };
        for g in &self.generic {
            policy = policy.with_generic(g);
        }
        policy
    }
}

/// Birth-year span, `1800-1809` or `1800`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub start: i32,
    pub end: i32,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| format!("bad year in span {s:?}"))
        };
        let (start, end) = match s.split_once('-') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => (parse(s)?, parse(s)?),
        };
        if start > end {
            return Err(format!("span {s:?} ends before it starts"));
        }
        Ok(Span { start, end })
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}-{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum SexChoice {
    #[value(alias = "f")]
    F,
    #[value(alias = "m")]
    M,
    #[value(name = "both")]
    Both,
}

impl SexChoice {
    fn sexes(self) -> Vec<Sex> {
        match self {
            SexChoice::F => vec![Sex::Female],
            SexChoice::M => vec![Sex::Male],
            SexChoice::Both => vec![Sex::Female, Sex::Male],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AgeArgs {
    /// Age assumed for marriage records without an age.
    #[arg(long, default_value_t = 25)]
    pub marriage_age: u32,
    /// Age assumed for adult rosters without an age.
    #[arg(long, default_value_t = 35)]
    pub adult_age: u32,
    /// Age assumed for census and other records without an age; such
    /// records are skipped when absent.
    #[arg(long)]
    pub census_age: Option<u32>,
}

impl AgeArgs {
    fn spec(&self, sex: Sex, span: Span) -> Result<CohortSpec> {
        let mut spec = CohortSpec::new(sex, span.start, span.end)?;
        spec.default_age_marriage = self.marriage_age;
        spec.default_age_adult = self.adult_age;
        spec.default_age_other = self.census_age;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Rejection report (record columns plus `reason`).
    #[arg(long, value_name = "PATH")]
    pub rejects: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Birth-year span; repeat for several cohorts.
    #[arg(long = "span", required = true)]
    pub spans: Vec<Span>,
    #[arg(long, value_enum, default_value_t = SexChoice::Both)]
    pub sex: SexChoice,
    #[command(flatten)]
    pub ages: AgeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Year-1 birth span.
    #[arg(long)]
    pub from: Span,
    /// Year-2 birth span.
    #[arg(long)]
    pub to: Span,
    #[arg(long, value_enum, default_value_t = SexChoice::Both)]
    pub sex: SexChoice,
    /// Years between the cohorts for turnover; defaults to the difference of
    /// the span starts.
    #[arg(long)]
    pub years: Option<f64>,
    /// Override year 1's own top-k total.
    #[arg(long)]
    pub t11: Option<f64>,
    #[command(flatten)]
    pub ages: AgeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long = "span", required = true)]
    pub spans: Vec<Span>,
    #[arg(long, value_enum, default_value_t = SexChoice::Both)]
    pub sex: SexChoice,
    /// Only fit the most popular names up to this rank.
    #[arg(long)]
    pub max_rank: Option<usize>,
    /// Write the `log2_rank,log2_freq` series here (single cohort only).
    #[arg(long, value_name = "PATH")]
    pub series: Option<PathBuf>,
    #[command(flatten)]
    pub ages: AgeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleVarArgs {
    /// Name probabilities (fractions). Default: 0.20, 0.03, 0.015.
    #[arg(long = "p", value_delimiter = ',')]
    pub probabilities: Vec<f64>,
    /// Sample sizes. Default: 100, 1000, 10000, 100000.
    #[arg(long = "n", value_delimiter = ',')]
    pub sizes: Vec<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ConquestArgs {
    /// Year 1's own top-k total (not determined by the models).
    #[arg(long, required = true)]
    pub t11: f64,
    /// Year-2 popularity of the top name.
    #[arg(long, default_value_t = CONQUEST_YEAR2.top_pop)]
    pub top_pop: f64,
    /// Year-2 popularity of the top-k names.
    #[arg(long, default_value_t = CONQUEST_YEAR2.total)]
    pub top_total: f64,
    /// Year-1 information of year 2's top-k names, in bits.
    #[arg(long, default_value_t = CONQUEST_YEAR1.info_is)]
    pub prior_info: f64,
    /// Year-1 popularity of year 2's top-k names.
    #[arg(long, default_value_t = CONQUEST_YEAR1.total)]
    pub prior_total: f64,
    #[arg(long, default_value = "conquest-model")]
    pub label: String,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Probability that a birth receives a new name.
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 50_000)]
    pub births: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub initial_names: usize,
    /// Birth year written to every record.
    #[arg(long, default_value_t = 1900)]
    pub year: i32,
    #[arg(long, value_enum, default_value_t = SexChoice::F)]
    pub sex: SexChoice,
}

fn coding_table(path: Option<&Path>) -> Result<CodingTable> {
    match path {
        None => Ok(demo_table()),
        Some(p) if p.as_os_str() == "none" => Ok(CodingTable::empty()),
        Some(p) => {
            let label = p.display().to_string();
            let file = fs::File::open(p).map_err(|e| Error::io(&label, e))?;
            let version = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or(label);
            load_coding_table(std::io::BufReader::new(file), &version)
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

fn cohort_label(spec: &CohortSpec) -> String {
    format!("{} {}", spec.span_label(), spec.sex)
}

/// Side messages for stderr, kept apart from the report.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub output: Vec<u8>,
    pub messages: Vec<String>,
}

impl Cli {
    fn pipeline(&self, input: &InputArgs) -> Result<(Pipeline, Vec<Source>)> {
        let table = coding_table(self.coding_table.as_deref())?;
        let pipeline = Pipeline::new(table, input.policy(), self.threads)?;
        let sources = input
            .inputs
            .iter()
            .map(|p| pipeline.ingest_path(p))
            .collect::<Result<Vec<_>>>()?;
        Ok((pipeline, sources))
    }

    /// Runs the subcommand and returns its report. Auxiliary files
    /// (`--rejects`, `--series`, simulation metadata) are written here.
    pub fn render(&self) -> Result<Rendered> {
        match &self.command {
            Command::Ingest(a) => self.ingest(a),
            Command::Stats(a) => self.stats(a),
            Command::Comm(a) => self.comm(a),
            Command::Fit(a) => self.fit(a),
            Command::Samplevar(a) => self.samplevar(a),
            Command::Conquest(a) => self.conquest(a),
            Command::Simulate(a) => self.simulate(a),
        }
    }

    /// Renders and writes the report to `--out` or stdout.
    pub fn execute(&self) -> Result<()> {
        let rendered = self.render()?;
        for m in &rendered.messages {
            eprintln!("{m}");
        }
        match &self.out {
            Some(path) => write_file(path, &rendered.output),
            None => std::io::stdout()
                .write_all(&rendered.output)
                .map_err(|e| Error::io("<stdout>", e)),
        }
    }

    fn ingest(&self, args: &IngestArgs) -> Result<Rendered> {
        let (pipeline, sources) = self.pipeline(&args.input)?;
        let mut kept = Vec::new();
        let mut messages = Vec::new();
        for src in &sources {
            for record in &src.filtered.kept {
                kept.push(standardized_record(&pipeline.table, record));
            }
            let mut line = format!(
                "{}: {} kept, {} malformed",
                src.label,
                src.filtered.kept.len(),
                src.parsed.rejected.len()
            );
            for (reason, n) in src.filtered.reason_counts() {
                line.push_str(&format!(", {n} {reason}"));
            }
            messages.push(line);
        }
        if let Some(path) = &args.rejects {
            let mut buf = Vec::new();
            for (i, src) in sources.iter().enumerate() {
                let mut part = Vec::new();
                write_rejections(&mut part, &src.parsed.rejected, &src.filtered.rejected)?;
                // One header for the combined report.
                let skip = if i == 0 {
                    0
                } else {
                    part.iter().position(|&b| b == b'\n').map_or(0, |p| p + 1)
                };
                buf.extend_from_slice(&part[skip..]);
            }
            write_file(path, &buf)?;
        }
        let mut output = Vec::new();
        write_records(&mut output, &kept)?;
        Ok(Rendered { output, messages })
    }

    fn specs(&self, spans: &[Span], sex: SexChoice, ages: &AgeArgs) -> Result<Vec<CohortSpec>> {
        let mut specs = Vec::new();
        for span in spans {
            for s in sex.sexes() {
                specs.push(ages.spec(s, *span)?);
            }
        }
        specs.sort_by_key(|s| (s.birth_year_start, s.birth_year_end, s.sex));
        specs.dedup();
        Ok(specs)
    }

    fn stats(&self, args: &StatsArgs) -> Result<Rendered> {
        let (pipeline, sources) = self.pipeline(&args.input)?;
        let mut rows = Vec::new();
        let mut first_empty = None;
        for spec in self.specs(&args.spans, args.sex, &args.ages)? {
            let wrap = |source| Error::Cohort {
                cohort: cohort_label(&spec),
                source,
            };
            let per_source = sources
                .iter()
                .map(|src| pipeline.cohort(src, &spec))
                .filter(|c| !c.is_empty())
                .map(|c| summarize(&c, self.k))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(wrap)?;
            let summary = match per_source.len() {
                0 if args.sex == SexChoice::Both => {
                    first_empty.get_or_insert(wrap(CoreError::EmptyTable));
                    continue;
                }
                0 => return Err(wrap(CoreError::EmptyTable)),
                1 => per_source.into_iter().next().expect("one summary"),
                _ => average_summaries(&per_source).map_err(wrap)?,
            };
            rows.push(summary);
        }
        if let (true, Some(err)) = (rows.is_empty(), first_empty) {
            return Err(err);
        }
        Ok(Rendered {
            output: report::summaries(&rows, self.format).into_bytes(),
            messages: Vec::new(),
        })
    }

    fn comm(&self, args: &CommArgs) -> Result<Rendered> {
        let (pipeline, sources) = self.pipeline(&args.input)?;
        let years = args
            .years
            .or_else(|| Some((args.to.start - args.from.start) as f64).filter(|&y| y > 0.0));
        let span_label = format!("{}/{}", args.from, args.to);
        let mut rows = Vec::new();
        let mut messages = Vec::new();
        let mut first_empty = None;
        for sex in args.sex.sexes() {
            let spec1 = args.ages.spec(sex, args.from)?;
            let spec2 = args.ages.spec(sex, args.to)?;
            let wrap = |source| Error::Cohort {
                cohort: format!("{span_label} {sex}"),
                source,
            };
            let mut results = Vec::new();
            for src in &sources {
                let c1 = pipeline.cohort(src, &spec1);
                let c2 = pipeline.cohort(src, &spec2);
                if c1.is_empty() || c2.is_empty() {
                    continue;
                }
                let (r, pair) = comm_tables(
                    &frequency_table(&c1),
                    &frequency_table(&c2),
                    self.k,
                    years,
                    args.t11,
                )
                .map_err(wrap)?;
                for (name, used) in pair.names.iter().zip(&pair.fallback_used) {
                    if *used {
                        messages.push(format!(
                            "{}: {name} unobserved in {} {sex}; imputed",
                            src.label, args.from
                        ));
                    }
                }
                results.push(r);
            }
            let result = match results.len() {
                0 if args.sex == SexChoice::Both => {
                    first_empty.get_or_insert(wrap(CoreError::EmptyTable));
                    continue;
                }
                0 => return Err(wrap(CoreError::EmptyTable)),
                1 => results.pop().expect("one result"),
                _ => average_summaries(&results).map_err(wrap)?,
            };
            rows.push(CommRow {
                span: span_label.clone(),
                sex: sex.code().to_string(),
                result,
            });
        }
        if let (true, Some(err)) = (rows.is_empty(), first_empty) {
            return Err(err);
        }
        Ok(Rendered {
            output: report::comm(&rows, self.format).into_bytes(),
            messages,
        })
    }

    fn fit(&self, args: &FitArgs) -> Result<Rendered> {
        let (pipeline, sources) = self.pipeline(&args.input)?;
        let mut cohorts = Vec::new();
        for spec in self.specs(&args.spans, args.sex, &args.ages)? {
            let mut cohort = Cohort::empty(spec);
            for src in &sources {
                cohort.merge(pipeline.cohort(src, &spec));
            }
            cohorts.push(cohort);
        }
        if args.sex == SexChoice::Both && cohorts.iter().any(|c| !c.is_empty()) {
            cohorts.retain(|c| !c.is_empty());
        }
        if args.series.is_some() && cohorts.len() != 1 {
            return Err(Error::Usage(
                "--series needs exactly one cohort (one span and one sex)".into(),
            ));
        }
        let mut rows = Vec::new();
        for cohort in &cohorts {
            let table = frequency_table(cohort);
            let fit = fit_rank_frequency_top(&table, self.min_count, args.max_rank).map_err(
                |source| Error::Cohort {
                    cohort: cohort_label(&cohort.spec),
                    source,
                },
            )?;
            if let Some(path) = &args.series {
                let points = rank_frequency_series(&table, self.min_count, args.max_rank);
                write_file(path, report::series(&points).as_bytes())?;
            }
            rows.push(FitRow {
                cohort: cohort.spec.span_label(),
                sex: cohort.spec.sex.code().to_string(),
                fit,
            });
        }
        Ok(Rendered {
            output: report::fits(&rows, self.format).into_bytes(),
            messages: Vec::new(),
        })
    }

    fn samplevar(&self, args: &SampleVarArgs) -> Result<Rendered> {
        let ps = if args.probabilities.is_empty() {
            vec![0.20, 0.03, 0.015]
        } else {
            args.probabilities.clone()
        };
        let ns = if args.sizes.is_empty() {
            vec![100, 1_000, 10_000, 100_000]
        } else {
            args.sizes.clone()
        };
        let mut rows = Vec::new();
        for &n in &ns {
            for &p in &ps {
                rows.push(SampleVarRow {
                    p,
                    n,
                    v: sampling_variability(p, n)?,
                });
            }
        }
        Ok(Rendered {
            output: report::samplevar(&rows, self.format).into_bytes(),
            messages: Vec::new(),
        })
    }

    fn conquest(&self, args: &ConquestArgs) -> Result<Rendered> {
        let cmp = conquest_model(
            TopConstraints {
                top_pop: args.top_pop,
                total: args.top_total,
            },
            InfoConstraints {
                info_is: args.prior_info,
                total: args.prior_total,
            },
            args.t11,
            self.k,
        )?;
        let messages = vec![format!(
            "year-2 exponent {:.6}, year-1 exponent {:.6}",
            cmp.year2.exponent, cmp.year1.exponent
        )];
        let row = CommRow {
            span: args.label.clone(),
            sex: "-".into(),
            result: cmp.result,
        };
        Ok(Rendered {
            output: report::comm(&[row], self.format).into_bytes(),
            messages,
        })
    }

    fn simulate(&self, args: &SimulateArgs) -> Result<Rendered> {
        let sex = match args.sex {
            SexChoice::F => Sex::Female,
            SexChoice::M => Sex::Male,
            SexChoice::Both => return Err(Error::Usage("simulate needs --sex F or M".into())),
        };
        let config = SimulationConfig {
            innovation_rate: args.alpha,
            births: args.births,
            initial_names: args.initial_names,
            seed: args.seed,
            sex,
            birth_year: args.year,
        };
        let names = simulate_births(&config)?;
        let records: Vec<NameRecord> = names
            .iter()
            .map(|n| NameRecord::new(n.as_str(), sex, args.year, RecordKind::BirthRegister))
            .collect();
        let mut output = Vec::new();
        write_records(&mut output, &records)?;
        let meta = format!(
            "process=simon\nrng={RNG_ALGORITHM}\nseed={}\nalpha={}\nbirths={}\ninitial_names={}\n",
            args.seed, args.alpha, args.births, args.initial_names
        );
        let mut messages = Vec::new();
        match &self.out {
            Some(out) => {
                let mut meta_path = out.clone().into_os_string();
                meta_path.push(".meta");
                write_file(Path::new(&meta_path), meta.as_bytes())?;
            }
            None => messages.push(meta.trim_end().replace('\n', " ")),
        }
        Ok(Rendered { output, messages })
    }
}

/// The record with its name standardized and its sex corrected.
fn standardized_record(table: &CodingTable, record: &NameRecord) -> NameRecord {
    let mut out = record.clone();
    if let Ok(name) = table.standardize(&record.raw_name) {
        out.sex = table.correct_sex(&name, record.sex);
        out.raw_name = name.as_str().to_owned();
    }
    out
}
